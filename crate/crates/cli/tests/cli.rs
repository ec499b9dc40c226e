use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use lis_core::io::parse_measurements;
use serde_json::Value;

fn lis() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_lis"));
    c.env_remove("LIS_DATA_DIR");
    c
}

fn run(args: &[&str]) -> Output {
    lis().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/paper")
}

fn data_file(name: &str) -> String {
    data_dir().join(name).display().to_string()
}

fn json(args: &[&str]) -> Value {
    let o = run(args);
    assert!(o.status.success(), "{args:?}: {}", stderr(&o));
    serde_json::from_str(&stdout(&o)).unwrap()
}

fn composite<'a>(report: &'a Value, id: &str) -> &'a Value {
    report["composites"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["id"] == id)
        .unwrap_or_else(|| panic!("no composite {id}"))
}

fn li_order(report: &Value) -> Vec<String> {
    let ranks = composite(report, "LI")["ranks"].as_object().unwrap();
    let mut algs: Vec<(&String, u64)> = ranks.iter().map(|(a, r)| (a, r.as_u64().unwrap())).collect();
    algs.sort_by_key(|(a, r)| (*r, a.to_string()));
    algs.into_iter().map(|(a, _)| a.clone()).collect()
}

#[test]
fn reproduce_verifies() {
    let o = run(&["reproduce", "--verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stderr(&o).contains("66 of 66"));
    let text = stdout(&o);
    assert!(text.contains("3-WAY"));
    assert!(text.contains("corrections on (3 cells replaced)"));
}

#[test]
fn reproduce_without_corrections_explains() {
    for args in [
        &["reproduce", "--no-corrections", "--verify"][..],
        &["reproduce", "--no-corrections"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(3));
        let err = stderr(&o);
        assert!(err.contains("without corrections") && err.contains("HIGHT"), "{err}");
    }
}

#[test]
fn all_formats_carry_the_same_numbers() {
    let report = json(&["reproduce", "--format", "json"]);
    let csv = stdout(&run(&["reproduce", "--format", "csv"]));
    let text = stdout(&run(&["reproduce"]));
    let mut rows = 0;
    for line in csv.lines().filter(|l| !l.starts_with('#')).skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let c = composite(&report, f[0]);
        assert_eq!(
            c["scores"][f[1]].as_f64().unwrap(),
            f[2].parse::<f64>().unwrap(),
            "{line}"
        );
        assert_eq!(
            c["ranks"][f[1]].as_u64().unwrap(),
            f[3].parse::<u64>().unwrap(),
            "{line}"
        );
        assert!(text.contains(f[2]));
        rows += 1;
    }
    assert_eq!(rows, 66);
    let three_way = composite(&report, "LI")["scores"]["3-WAY"].as_f64().unwrap();
    assert!((three_way - 2.52).abs() <= 0.02);
}

#[test]
fn analyze_of_shipped_files_matches_reproduce() {
    let (ga, sw, hw) = (data_file("gap.csv"), data_file("swp.csv"), data_file("hwp.csv"));
    let analyzed = json(&["analyze", "--ga", &ga, "--sw", &sw, "--hw", &hw, "--format", "json"]);
    let reproduced = json(&["reproduce", "--format", "json"]);
    assert_eq!(analyzed["composites"], reproduced["composites"]);
    assert_eq!(analyzed["provenance"]["source"], "ingested");
    assert_eq!(reproduced["provenance"]["source"], "bundled");
    // the shipped files are already corrected
    assert_eq!(analyzed["provenance"]["applied"].as_array().unwrap().len(), 0);
}

#[test]
fn weights_only_touch_their_composite() {
    let (ga, sw, hw) = (data_file("gap.csv"), data_file("swp.csv"), data_file("hwp.csv"));
    let base = ["analyze", "--ga", &ga, "--sw", &sw, "--hw", &hw, "--format", "json"];
    let plain = json(&base);
    let mut args = base.to_vec();
    args.extend(["--weights", "sli.th_sw=2"]);
    let weighted = json(&args);
    assert_ne!(
        composite(&plain, "SLI")["scores"],
        composite(&weighted, "SLI")["scores"]
    );
    for id in ["LI", "CI", "SSI", "HLI", "SI"] {
        assert_eq!(composite(&plain, id), composite(&weighted, id), "{id}");
    }
}

#[test]
fn weights_from_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("weights.txt");
    std::fs::write(&w, "# emphasis\nhli.pd=3\n").unwrap();
    let hw = data_file("hwp.csv");
    let a = json(&["analyze", "--hw", &hw, "--builtins", "hli", "--format", "json"]);
    let b = json(&[
        "analyze",
        "--hw",
        &hw,
        "--builtins",
        "hli",
        "--weights",
        w.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_ne!(a["composites"], b["composites"]);
}

#[test]
fn changing_reference_keeps_lightness_order() {
    let aes = json(&["reproduce", "--format", "json"]);
    let (ga, sw, hw) = (data_file("gap.csv"), data_file("swp.csv"), data_file("hwp.csv"));
    let skipjack = json(&[
        "analyze",
        "--ga",
        &ga,
        "--sw",
        &sw,
        "--hw",
        &hw,
        "--reference",
        "Skipjack",
        "--format",
        "json",
    ]);
    assert_eq!(li_order(&aes), li_order(&skipjack));
    assert_eq!(composite(&skipjack, "LI")["scores"]["Skipjack"], 1.0);
}

#[test]
fn partial_data_and_bad_input() {
    let sw = data_file("swp.csv");
    let o = run(&["analyze", "--sw", &sw, "--format", "json"]);
    assert!(o.status.success());
    let r: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let ids: Vec<&str> = r["composites"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["id"].as_str().unwrap())
        .collect();
    assert_eq!(ids, ["LI", "CI", "SLI", "SI"]);
    assert!(!r["warnings"].as_array().unwrap().is_empty());

    assert_eq!(
        run(&["analyze", "--sw", &sw, "--indicators", "et_sw,bogus"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["analyze", "--sw", &sw, "--reference", "DES"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["analyze", "--sw", "/nonexistent.csv"]).status.code(), Some(2));
    assert_eq!(run(&["analyze"]).status.code(), Some(2));
    assert_eq!(run(&["reproduce", "--format", "xml"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "algorithm,indicator,value\nAES,ks,192\nXTEA,ks,-5\n").unwrap();
    let o = run(&["analyze", "--ga", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
}

#[test]
fn indicator_filter_drops_terms_with_warnings() {
    let (ga, sw, hw) = (data_file("gap.csv"), data_file("swp.csv"), data_file("hwp.csv"));
    let r = json(&[
        "analyze",
        "--ga",
        &ga,
        "--sw",
        &sw,
        "--hw",
        &hw,
        "--builtins",
        "li",
        "--indicators",
        "et_sw,th_sw",
        "--format",
        "json",
    ]);
    let warnings = r["warnings"].as_array().unwrap();
    assert_eq!(warnings.len(), 12);
    let sw_only = json(&[
        "analyze",
        "--sw",
        &sw,
        "--builtins",
        "li",
        "--indicators",
        "et_sw,th_sw",
        "--format",
        "json",
    ]);
    assert_eq!(r["composites"], sw_only["composites"]);
}

#[test]
fn custom_composites_are_evaluated() {
    let dir = tempfile::tempdir().unwrap();
    let defs = dir.path().join("defs.json");
    std::fs::write(
        &defs,
        r#"[{"id": "speed", "terms": [{"indicator": "th_sw", "orientation": "direct"},
                                      {"indicator": "th_hw", "orientation": "direct", "weight": 2}]}]"#,
    )
    .unwrap();
    let (sw, hw) = (data_file("swp.csv"), data_file("hwp.csv"));
    let r = json(&[
        "analyze",
        "--sw",
        &sw,
        "--hw",
        &hw,
        "--builtins",
        "none",
        "--composites",
        defs.to_str().unwrap(),
        "--format",
        "json",
    ]);
    let speed = composite(&r, "SPEED");
    assert_eq!(speed["scores"]["AES"], 1.0);
    assert_eq!(speed["ranks"]["3-WAY"], 1);

    let svg = stdout(&run(&[
        "chart",
        "--indicator",
        "speed",
        "--sw",
        &sw,
        "--hw",
        &hw,
        "--composites",
        defs.to_str().unwrap(),
    ]));
    assert_eq!(svg.matches("<rect").count(), 11);
}

#[test]
fn chart_is_deterministic_and_sorted() {
    let a = run(&["chart", "--indicator", "li"]);
    assert!(a.status.success());
    let b = run(&["chart", "--indicator", "LI"]);
    assert_eq!(a.stdout, b.stdout);
    let svg = stdout(&a);
    assert!(svg.starts_with("<?xml"));
    let first_label = svg.split("text-anchor=\"end\">").nth(1).unwrap();
    assert!(first_label.starts_with("3-WAY<"));
    assert_eq!(run(&["chart", "--indicator", "zz"]).status.code(), Some(2));
}

#[test]
fn chart_of_one_algorithm() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("one.csv");
    std::fs::write(&f, "algorithm,indicator,value\nSolo,et_sw,2\nSolo,th_sw,32\n").unwrap();
    let out = dir.path().join("one.svg");
    let o = run(&[
        "chart",
        "--indicator",
        "sli",
        "--sw",
        f.to_str().unwrap(),
        "--reference",
        "Solo",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let svg = std::fs::read_to_string(out).unwrap();
    assert_eq!(svg.matches("<rect").count(), 1);
}

#[test]
fn descriptor_defaults_and_edits() {
    let d = json(&["descriptor", "--format", "json"]);
    let fields = ["goal", "input", "activities", "output", "outcomes", "performance"];
    for f in fields {
        assert!(!d[f].as_str().unwrap().is_empty(), "{f}");
    }
    let e = json(&["descriptor", "--edit", "goal=Rank hash functions", "--format", "json"]);
    assert_eq!(e["goal"], "Rank hash functions");
    for f in &fields[1..] {
        assert_eq!(d[*f], e[*f]);
    }
    assert_eq!(run(&["descriptor", "--edit", "goal="]).status.code(), Some(2));
    assert_eq!(run(&["descriptor", "--edit", "mood=calm"]).status.code(), Some(2));

    let report = json(&[
        "reproduce",
        "--descriptor",
        "goal=Rank hash functions",
        "--format",
        "json",
    ]);
    assert_eq!(report["descriptor"], e);
}

#[test]
fn bench_emits_reparseable_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sw.csv");
    let counters = dir.path().join("counters.csv");
    std::fs::write(&counters, "algorithm,indicator,value\nXTEA,cpi,0.7\nXTEA,cmr,0.03\n").unwrap();
    let o = run(&[
        "bench",
        "--ciphers",
        "xtea,katan32",
        "--blocks",
        "256",
        "--trials",
        "3",
        "--min-trial-ms",
        "1",
        "--seed",
        "9",
        "--counters",
        counters.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "-q",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("# host os:"));
    let t = parse_measurements(&text).unwrap();
    assert_eq!(t.algorithms(), ["XTEA", "KATAN-32"]);
    for alg in t.algorithms() {
        let (et, th) = (t.get(alg, "et_sw").unwrap(), t.get(alg, "th_sw").unwrap());
        let bs = if alg == "XTEA" { 64.0 } else { 32.0 };
        assert!((th - bs / et).abs() / th < 1e-5);
    }
    assert_eq!(t.get("XTEA", "cpi"), Some(0.7));
    assert_eq!(t.get("KATAN-32", "cpi"), None);

    assert_eq!(run(&["bench", "--ciphers", "rc4"]).status.code(), Some(2));
    assert_eq!(
        run(&["bench", "--ciphers", "xtea", "--trials", "0"]).status.code(),
        Some(2)
    );
}

#[test]
fn data_dir_override() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["export-dataset", "--dir", dir.path().to_str().unwrap(), "-q"]);
    assert!(o.status.success());
    for name in ["gap.csv", "swp.csv", "hwp.csv"] {
        assert_eq!(
            std::fs::read(dir.path().join(name)).unwrap(),
            std::fs::read(data_dir().join(name)).unwrap()
        );
    }
    // restore the printed PD: the overlay must put the corrected value back
    let hwp = dir.path().join("hwp.csv");
    let text = std::fs::read_to_string(&hwp)
        .unwrap()
        .replace("HIGHT,pd,12.778", "HIGHT,pd,127.78");
    std::fs::write(&hwp, text).unwrap();

    let o = lis()
        .env("LIS_DATA_DIR", dir.path())
        .args(["reproduce", "--verify", "--format", "json"])
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    let r: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["provenance"]["source"], "ingested");
    assert_eq!(r["provenance"]["applied"].as_array().unwrap().len(), 1);

    let o = lis()
        .env("LIS_DATA_DIR", dir.path())
        .args(["reproduce", "--no-corrections", "--verify"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("HIGHT HLI"));

    let o = lis()
        .env("LIS_DATA_DIR", "/nonexistent")
        .args(["reproduce"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.txt");
    let o = run(&["reproduce", "--out", out.to_str().unwrap(), "--quiet"]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty() && o.stderr.is_empty());
    assert_eq!(std::fs::read(&out).unwrap(), run(&["reproduce"]).stdout);
}
