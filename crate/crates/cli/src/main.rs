//! `lis`: reproduce the lightweight-cipher indicator table, analyze other
//! datasets, run software benchmarks and draw charts.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};

use lis_core::bench::{attach_counters, run_suite, BenchConfig};
use lis_core::chart::render_bar_chart;
use lis_core::ciphers::CipherKind;
use lis_core::composite::{builtin_composites, evaluate_composite, reconcile_terms, CompositeScoreSet};
use lis_core::dataset::{apply_corrections_to, load_paper_dataset, profile_csv_files, CorrectionRecord, REFERENCE};
use lis_core::io::{parse_composite_defs, parse_hardware_export, parse_measurements};
use lis_core::report::{verify_against_expected, DataSource, Provenance};
use lis_core::{
    BenchmarkDescriptor, CompositeDef, Error, IndicatorRegistry, IndicatorReport, MeasurementTable, ReportFormat,
};

const DATA_DIR_ENV: &str = "LIS_DATA_DIR";

#[derive(Parser)]
#[command(name = "lis", version, about = "Lightness indicator workbench for block ciphers")]
struct Cli {
    /// Output format: text, csv or json.
    #[arg(long, global = true, default_value = "text")]
    format: String,

    /// Write output to FILE instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,

    /// Suppress warnings and progress messages on standard error.
    #[arg(long, short, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Recompute the six built-in indicators over the bundled dataset.
    Reproduce {
        /// Use the dataset exactly as printed.
        #[arg(long)]
        no_corrections: bool,
        /// Compare every cell with the published table (tolerance 0.02).
        #[arg(long)]
        verify: bool,
        /// Override a descriptor field, as FIELD=TEXT.
        #[arg(long = "descriptor", value_name = "FIELD=TEXT")]
        descriptor_edits: Vec<String>,
    },
    /// Evaluate built-in and custom composites over measurement files.
    Analyze {
        #[command(flatten)]
        data: DataArgs,
        /// Comma-separated built-in composites to evaluate, "all" or "none".
        #[arg(long, default_value = "all")]
        builtins: String,
        /// Keep only these indicator ids (comma-separated).
        #[arg(long, value_delimiter = ',')]
        indicators: Vec<String>,
        /// Weight overrides: COMPOSITE.INDICATOR=W or INDICATOR=W, comma-separated, or a file of them.
        #[arg(long)]
        weights: Option<String>,
        #[arg(long = "descriptor", value_name = "FIELD=TEXT")]
        descriptor_edits: Vec<String>,
    },
    /// Time the cipher implementations on this machine and emit measurement CSV.
    Bench {
        /// Comma-separated cipher names or "all".
        #[arg(long, default_value = "all")]
        ciphers: String,
        #[arg(long, default_value_t = 1 << 20)]
        blocks: u64,
        #[arg(long, default_value_t = 5)]
        trials: usize,
        #[arg(long, default_value_t = 1 << 12)]
        warmup: u64,
        #[arg(long, default_value_t = BenchConfig::default().seed)]
        seed: u64,
        /// Minimum duration of one trial; the block count doubles until reached.
        #[arg(long, default_value_t = 100)]
        min_trial_ms: u64,
        /// Measurement CSV with cpi/cmr values to merge into the output.
        #[arg(long, value_name = "FILE")]
        counters: Option<PathBuf>,
    },
    /// Draw one composite as an SVG bar chart.
    Chart {
        /// Composite id (li, ci, ssi, hli, sli, si, or a custom id).
        #[arg(long)]
        indicator: String,
        #[command(flatten)]
        data: DataArgs,
    },
    /// Print the benchmark descriptor.
    Descriptor {
        /// Override a field, as FIELD=TEXT.
        #[arg(long = "edit", value_name = "FIELD=TEXT")]
        edits: Vec<String>,
    },
    /// Write the bundled dataset as gap.csv, swp.csv and hwp.csv.
    ExportDataset {
        #[arg(long)]
        dir: PathBuf,
        #[arg(long)]
        no_corrections: bool,
    },
}

#[derive(Args, Default)]
struct DataArgs {
    /// General algorithmic profile CSV.
    #[arg(long, value_name = "FILE")]
    ga: Option<PathBuf>,
    /// Software profile CSV.
    #[arg(long, value_name = "FILE")]
    sw: Option<PathBuf>,
    /// Hardware profile CSV.
    #[arg(long, value_name = "FILE")]
    hw: Option<PathBuf>,
    /// Hardware synthesis export (one row per algorithm).
    #[arg(long, value_name = "FILE")]
    hw_export: Option<PathBuf>,
    /// Reference algorithm; defaults to AES.
    #[arg(long)]
    reference: Option<String>,
    /// Custom composite definitions (JSON).
    #[arg(long, value_name = "FILE")]
    composites: Option<PathBuf>,
    /// Do not apply the dataset corrections overlay.
    #[arg(long)]
    no_corrections: bool,
}

impl DataArgs {
    fn has_files(&self) -> bool {
        self.ga.is_some() || self.sw.is_some() || self.hw.is_some() || self.hw_export.is_some()
    }
}

struct Ctx {
    format: ReportFormat,
    out: Option<PathBuf>,
    quiet: bool,
}

impl Ctx {
    fn emit(&self, text: &str) -> anyhow::Result<()> {
        match &self.out {
            Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }

    fn note(&self, msg: impl AsRef<str>) {
        if !self.quiet {
            eprintln!("{}", msg.as_ref());
        }
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn parse_file(path: &Path, parse: fn(&str) -> lis_core::Result<MeasurementTable>) -> anyhow::Result<MeasurementTable> {
    parse(&read(path)?).with_context(|| format!("in {}", path.display()))
}

struct Loaded {
    table: MeasurementTable,
    provenance: Provenance,
}

fn finish_load(
    mut table: MeasurementTable,
    source: DataSource,
    files: Vec<String>,
    reference: Option<&str>,
    corrections: bool,
) -> anyhow::Result<Loaded> {
    let reference = reference.map(str::to_string).unwrap_or_else(|| REFERENCE.to_string());
    if !table.contains_algorithm(&reference) {
        return Err(Error::Config(format!("reference algorithm {reference} is not in the data")).into());
    }
    table.set_reference(&reference);
    let applied: Vec<CorrectionRecord> = if corrections {
        apply_corrections_to(&mut table)
    } else {
        Vec::new()
    };
    Ok(Loaded {
        table,
        provenance: Provenance {
            source,
            files,
            reference,
            corrections,
            applied,
        },
    })
}

/// The study dataset, embedded or from `LIS_DATA_DIR`.
fn load_study(corrections: bool, reference: Option<&str>) -> anyhow::Result<Loaded> {
    match std::env::var_os(DATA_DIR_ENV) {
        Some(dir) if !dir.is_empty() => {
            let dir = PathBuf::from(dir);
            let mut table = MeasurementTable::new();
            let mut files = Vec::new();
            for name in ["gap.csv", "swp.csv", "hwp.csv"] {
                let path = dir.join(name);
                table.merge(&parse_file(&path, parse_measurements)?)?;
                files.push(path.display().to_string());
            }
            finish_load(table, DataSource::Ingested, files, reference, corrections)
        }
        _ => {
            let ds = load_paper_dataset(false);
            finish_load(ds.merged(), DataSource::Bundled, Vec::new(), reference, corrections)
        }
    }
}

fn load_data(args: &DataArgs) -> anyhow::Result<Loaded> {
    if !args.has_files() {
        return load_study(!args.no_corrections, args.reference.as_deref());
    }
    let mut table = MeasurementTable::new();
    let mut files = Vec::new();
    for path in [&args.ga, &args.sw, &args.hw].into_iter().flatten() {
        table.merge(&parse_file(path, parse_measurements)?)?;
        files.push(path.display().to_string());
    }
    if let Some(path) = &args.hw_export {
        table.merge(&parse_file(path, parse_hardware_export)?)?;
        files.push(path.display().to_string());
    }
    finish_load(
        table,
        DataSource::Ingested,
        files,
        args.reference.as_deref(),
        !args.no_corrections,
    )
}

fn custom_composites(path: Option<&Path>) -> anyhow::Result<Vec<CompositeDef>> {
    match path {
        Some(p) => Ok(parse_composite_defs(&read(p)?).with_context(|| format!("in {}", p.display()))?),
        None => Ok(Vec::new()),
    }
}

fn select_builtins(list: &str) -> anyhow::Result<(Vec<CompositeDef>, bool)> {
    match list.trim().to_ascii_lowercase().as_str() {
        "all" => Ok((builtin_composites(), false)),
        "none" | "" => Ok((Vec::new(), true)),
        other => {
            let all = builtin_composites();
            let picked = other
                .split(',')
                .map(|id| {
                    let id = id.trim();
                    all.iter()
                        .find(|d| d.id == id)
                        .cloned()
                        .ok_or_else(|| Error::Usage(format!("unknown built-in composite {id:?}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok((picked, true))
        }
    }
}

/// Applies `COMPOSITE.INDICATOR=W` / `INDICATOR=W` overrides.
fn apply_weights(spec: &str, defs: &mut [CompositeDef]) -> anyhow::Result<()> {
    let text = if Path::new(spec).is_file() {
        read(Path::new(spec))?
    } else {
        spec.to_string()
    };
    for item in text
        .split([',', '\n'])
        .map(str::trim)
        .filter(|s| !s.is_empty() && !s.starts_with('#'))
    {
        let (target, w) = item
            .split_once('=')
            .ok_or_else(|| Error::Usage(format!("weight {item:?} is not INDICATOR=W")))?;
        let w: f64 = w
            .trim()
            .parse()
            .map_err(|_| Error::Usage(format!("weight {item:?} has a non-numeric value")))?;
        let (composite, indicator) = match target.trim().split_once('.') {
            Some((c, i)) => (Some(c.trim().to_ascii_lowercase()), i.trim()),
            None => (None, target.trim()),
        };
        let mut hit = false;
        for def in defs.iter_mut() {
            let selected = composite.as_deref().is_none_or(|c| def.id.eq_ignore_ascii_case(c));
            if selected && def.term(indicator).is_some() {
                def.set_weight(indicator, w)?;
                hit = true;
            }
        }
        if !hit {
            return Err(Error::Usage(format!("weight {item:?} matches no term of the selected composites")).into());
        }
    }
    Ok(())
}

fn evaluate(
    defs: &[CompositeDef],
    table: &MeasurementTable,
    skip_empty: bool,
    ctx: &Ctx,
) -> anyhow::Result<(Vec<CompositeScoreSet>, Vec<String>)> {
    let mut sets = Vec::new();
    let mut skipped = Vec::new();
    for def in defs {
        if skip_empty && reconcile_terms(def, table).terms.is_empty() {
            let msg = format!(
                "{}: skipped, no indicator of this composite is in the data",
                def.id.to_ascii_uppercase()
            );
            ctx.note(format!("warning: {msg}"));
            skipped.push(msg);
            continue;
        }
        sets.push(evaluate_composite(def, table)?);
    }
    Ok((sets, skipped))
}

fn report(
    ctx: &Ctx,
    edits: &[String],
    loaded: Loaded,
    sets: Vec<CompositeScoreSet>,
    extra_warnings: Vec<String>,
) -> anyhow::Result<IndicatorReport> {
    let descriptor = BenchmarkDescriptor::default().with_edits(edits.iter().map(String::as_str))?;
    let mut r = IndicatorReport::new(descriptor, loaded.provenance, sets);
    r.warnings.extend(extra_warnings);
    for w in &r.warnings {
        ctx.note(format!("warning: {w}"));
    }
    Ok(r)
}

fn cmd_reproduce(ctx: &Ctx, no_corrections: bool, verify: bool, edits: &[String]) -> anyhow::Result<ExitCode> {
    let loaded = load_study(!no_corrections, None)?;
    let sets = match builtin_composites()
        .iter()
        .map(|d| evaluate_composite(d, &loaded.table))
        .collect::<lis_core::Result<Vec<_>>>()
    {
        Ok(s) => s,
        Err(e @ Error::Domain { .. }) if no_corrections => {
            let what = if verify { "cannot verify" } else { "cannot reproduce" };
            return Err(anyhow!(e).context(format!(
                "{what} the indicator table without corrections: the printed dataset holds a \
                 non-positive cell that no geometric mean accepts; drop --no-corrections"
            )));
        }
        Err(e) => return Err(e.into()),
    };
    let r = report(ctx, edits, loaded, sets, Vec::new())?;
    ctx.emit(&r.render(ctx.format))?;
    if verify {
        let misses = verify_against_expected(&r.composites);
        if !misses.is_empty() {
            eprintln!(
                "verification failed: {} of 66 cells off by more than 0.02",
                misses.len()
            );
            for m in &misses {
                eprintln!("  {m}");
            }
            return Ok(ExitCode::from(1));
        }
        ctx.note("verification passed: 66 of 66 cells within 0.02");
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_analyze(
    ctx: &Ctx,
    data: &DataArgs,
    builtins: &str,
    indicators: &[String],
    weights: Option<&str>,
    edits: &[String],
) -> anyhow::Result<ExitCode> {
    if !data.has_files() {
        return Err(Error::Usage("analyze needs at least one of --ga, --sw, --hw, --hw-export".into()).into());
    }
    let mut loaded = load_data(data)?;
    if !indicators.is_empty() {
        let reg = IndicatorRegistry::builtin();
        for id in indicators {
            if !reg.contains(id) {
                return Err(Error::Usage(format!("unknown indicator {id:?} in --indicators")).into());
            }
        }
        let keep: Vec<&str> = indicators.iter().map(String::as_str).collect();
        loaded.table.retain_indicators(&keep);
    }
    let (mut defs, explicit) = select_builtins(builtins)?;
    let builtin_count = defs.len();
    defs.extend(custom_composites(data.composites.as_deref())?);
    if let Some(w) = weights {
        apply_weights(w, &mut defs)?;
    }
    let (mut sets, mut skipped) = evaluate(&defs[..builtin_count], &loaded.table, !explicit, ctx)?;
    let (custom, more) = evaluate(&defs[builtin_count..], &loaded.table, false, ctx)?;
    sets.extend(custom);
    skipped.extend(more);
    if sets.is_empty() {
        return Err(Error::Usage("no composite could be evaluated on this data".into()).into());
    }
    let r = report(ctx, edits, loaded, sets, skipped)?;
    ctx.emit(&r.render(ctx.format))?;
    Ok(ExitCode::SUCCESS)
}

fn parse_ciphers(list: &str) -> anyhow::Result<Vec<CipherKind>> {
    if list.trim().eq_ignore_ascii_case("all") {
        return Ok(CipherKind::ALL.to_vec());
    }
    Ok(list
        .split(',')
        .map(|s| s.trim().parse::<CipherKind>())
        .collect::<lis_core::Result<Vec<_>>>()?)
}

fn cmd_bench(
    ctx: &Ctx,
    kinds: &[CipherKind],
    config: BenchConfig,
    counters: Option<&Path>,
) -> anyhow::Result<ExitCode> {
    ctx.note(format!(
        "timing {} cipher(s), {} trials each",
        kinds.len(),
        config.trials
    ));
    let mut result = run_suite(kinds, &config)?;
    if let Some(p) = counters {
        attach_counters(&mut result, &parse_file(p, parse_measurements)?);
    }
    for n in &result.notes {
        ctx.note(format!("note: {n}"));
    }
    ctx.emit(&result.to_csv())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_chart(ctx: &Ctx, id: &str, data: &DataArgs) -> anyhow::Result<ExitCode> {
    let loaded = load_data(data)?;
    let mut defs = builtin_composites();
    defs.extend(custom_composites(data.composites.as_deref())?);
    let def = defs
        .iter()
        .rev()
        .find(|d| d.id.eq_ignore_ascii_case(id))
        .ok_or_else(|| Error::Usage(format!("unknown indicator {id:?}")))?;
    let set = evaluate_composite(def, &loaded.table)?;
    for w in &set.warnings {
        ctx.note(format!("warning: {w}"));
    }
    ctx.emit(&render_bar_chart(&set))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_descriptor(ctx: &Ctx, edits: &[String]) -> anyhow::Result<ExitCode> {
    let d = BenchmarkDescriptor::default().with_edits(edits.iter().map(String::as_str))?;
    let text = match ctx.format {
        ReportFormat::Json => serde_json::to_string_pretty(&d)? + "\n",
        ReportFormat::Csv => {
            let mut s = String::from("field,text\n");
            for (f, t) in d.entries() {
                s.push_str(&format!("{f},\"{}\"\n", t.replace('"', "\"\"")));
            }
            s
        }
        ReportFormat::Text => d.render_text(),
    };
    ctx.emit(&text)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_export(ctx: &Ctx, dir: &Path, no_corrections: bool) -> anyhow::Result<ExitCode> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    for (name, text) in profile_csv_files(!no_corrections) {
        let path = dir.join(name);
        fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
        ctx.note(format!("wrote {}", path.display()));
    }
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    let ctx = Ctx {
        format: cli.format.parse()?,
        out: cli.out,
        quiet: cli.quiet,
    };
    match cli.command {
        Command::Reproduce {
            no_corrections,
            verify,
            descriptor_edits,
        } => cmd_reproduce(&ctx, no_corrections, verify, &descriptor_edits),
        Command::Analyze {
            data,
            builtins,
            indicators,
            weights,
            descriptor_edits,
        } => cmd_analyze(
            &ctx,
            &data,
            &builtins,
            &indicators,
            weights.as_deref(),
            &descriptor_edits,
        ),
        Command::Bench {
            ciphers,
            blocks,
            trials,
            warmup,
            seed,
            min_trial_ms,
            counters,
        } => {
            let config = BenchConfig {
                block_count: blocks,
                trials,
                warmup_blocks: warmup,
                seed,
                min_trial_time: Duration::from_millis(min_trial_ms),
            };
            cmd_bench(&ctx, &parse_ciphers(&ciphers)?, config, counters.as_deref())
        }
        Command::Chart { indicator, data } => cmd_chart(&ctx, &indicator, &data),
        Command::Descriptor { edits } => cmd_descriptor(&ctx, &edits),
        Command::ExportDataset { dir, no_corrections } => cmd_export(&ctx, &dir, no_corrections),
    }
}

/// 2 for usage and configuration problems, 3 for bad data.
fn exit_code(err: &anyhow::Error) -> u8 {
    match err.chain().find_map(|e| e.downcast_ref::<Error>()) {
        Some(e) if e.is_data_error() => 3,
        Some(Error::Environment(_)) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
