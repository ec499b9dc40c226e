//! Measurement CSV and composite-definition JSON.
//!
//! Measurement files are long-format, one cell per row:
//!
//! ```text
//! # comments start with '#'
//! algorithm,indicator,value
//! AES,ks,192
//! ```

use serde::{Deserialize, Serialize};

use crate::composite::{CompositeDef, Orientation, Term};
use crate::error::{Error, Result};
use crate::indicator::IndicatorRegistry;
use crate::table::MeasurementTable;

pub const MEASUREMENT_HEADER: &str = "algorithm,indicator,value";

/// Columns of a synthesis-report export, mapped onto hardware indicator ids.
pub const HARDWARE_EXPORT_COLUMNS: [(&str, &str); 6] = [
    ("ET_hw_us", "et_hw"),
    ("TH_hw_mbps", "th_hw"),
    ("PD_ns", "pd"),
    ("ALUT", "alut"),
    ("LR", "lr"),
    ("PC_mW", "pc"),
];

/// Renders a value with at most six significant digits and no exponent.
///
/// The rendered text parses back to exactly the value it was produced from
/// after one rounding, so serialize(parse(serialize(x))) is byte-stable.
pub fn format_value(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let rounded: f64 = format!("{v:.5e}").parse().unwrap_or(v);
    format!("{rounded}")
}

fn reader(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes())
}

fn record_line(rec: &csv::StringRecord) -> u64 {
    rec.position().map(|p| p.line()).unwrap_or(0)
}

fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map(|p| p.line()).unwrap_or(0);
    Error::parse(line, e.to_string())
}

fn parse_positive(field: &str, line: u64) -> Result<f64> {
    let v: f64 = field
        .parse()
        .map_err(|_| Error::parse(line, format!("value {field:?} is not a number")))?;
    if !(v.is_finite() && v > 0.0) {
        return Err(Error::parse(line, format!("value {field} must be positive")));
    }
    Ok(v)
}

/// Parses a measurement CSV against the built-in indicator registry.
pub fn parse_measurements(text: &str) -> Result<MeasurementTable> {
    parse_measurements_with(text, &IndicatorRegistry::builtin())
}

pub fn parse_measurements_with(text: &str, registry: &IndicatorRegistry) -> Result<MeasurementTable> {
    let mut rdr = reader(text);
    let mut records = rdr.records();
    let header = match records.next() {
        Some(rec) => rec.map_err(csv_error)?,
        None => return Err(Error::parse(1, format!("missing header {MEASUREMENT_HEADER:?}"))),
    };
    if header.iter().collect::<Vec<_>>() != ["algorithm", "indicator", "value"] {
        return Err(Error::parse(
            record_line(&header),
            format!("header must be exactly {MEASUREMENT_HEADER:?}"),
        ));
    }

    let mut table = MeasurementTable::new();
    for rec in records {
        let rec = rec.map_err(csv_error)?;
        let line = record_line(&rec);
        if rec.len() == 1 && rec[0].is_empty() {
            continue;
        }
        if rec.len() != 3 {
            return Err(Error::parse(line, format!("expected 3 fields, found {}", rec.len())));
        }
        let (alg, id, value) = (&rec[0], &rec[1], &rec[2]);
        if alg.is_empty() {
            return Err(Error::parse(line, "empty algorithm name"));
        }
        if !registry.contains(id) {
            return Err(Error::parse(line, format!("unknown indicator {id:?}")));
        }
        let v = parse_positive(value, line)?;
        if table.get(alg, id).is_some() {
            return Err(Error::parse(line, format!("duplicate cell ({alg}, {id})")));
        }
        table.insert(alg, id, v)?;
    }
    Ok(table)
}

/// Parses a synthesis export with columns
/// `algorithm,ET_hw_us,TH_hw_mbps,PD_ns,ALUT,LR,PC_mW` (any order; empty
/// cells are left absent).
pub fn parse_hardware_export(text: &str) -> Result<MeasurementTable> {
    let mut rdr = reader(text);
    let mut records = rdr.records();
    let header = match records.next() {
        Some(rec) => rec.map_err(csv_error)?,
        None => return Err(Error::parse(1, "missing header")),
    };
    let hline = record_line(&header);
    let names: Vec<&str> = header.iter().collect();
    let alg_col = names
        .iter()
        .position(|n| *n == "algorithm")
        .ok_or_else(|| Error::parse(hline, "missing column \"algorithm\""))?;
    let mut columns = Vec::new();
    for (i, name) in names.iter().enumerate() {
        if i == alg_col {
            continue;
        }
        let id = HARDWARE_EXPORT_COLUMNS
            .iter()
            .find(|(col, _)| col == name)
            .map(|(_, id)| *id)
            .ok_or_else(|| Error::parse(hline, format!("unknown column {name:?}")))?;
        columns.push((i, id));
    }

    let mut table = MeasurementTable::new();
    for rec in records {
        let rec = rec.map_err(csv_error)?;
        let line = record_line(&rec);
        if rec.len() != names.len() {
            return Err(Error::parse(
                line,
                format!("expected {} fields, found {}", names.len(), rec.len()),
            ));
        }
        let alg = &rec[alg_col];
        if table.contains_algorithm(alg) {
            return Err(Error::parse(line, format!("duplicate algorithm {alg}")));
        }
        table.add_algorithm(alg);
        for (i, id) in &columns {
            if rec[*i].is_empty() {
                continue;
            }
            table.insert(alg, id, parse_positive(&rec[*i], line)?)?;
        }
    }
    Ok(table)
}

/// Canonical measurement CSV: algorithms in table order, indicators in
/// registry order, then any unregistered ids alphabetically.
pub fn serialize_table(table: &MeasurementTable, registry: &IndicatorRegistry) -> String {
    serialize_table_with_comments(table, registry, &[])
}

pub fn serialize_table_with_comments(
    table: &MeasurementTable,
    registry: &IndicatorRegistry,
    comments: &[String],
) -> String {
    let present = table.indicator_ids();
    let mut order: Vec<&str> = registry.ids().filter(|id| present.contains(id)).collect();
    order.extend(present.iter().filter(|id| !registry.contains(id)));

    let mut out = String::new();
    for c in comments {
        for line in c.lines() {
            out.push_str("# ");
            out.push_str(line);
            out.push('\n');
        }
    }
    out.push_str(MEASUREMENT_HEADER);
    out.push('\n');
    for alg in table.algorithms() {
        for id in &order {
            if let Some(v) = table.get(alg, id) {
                out.push_str(&csv_field(alg));
                out.push(',');
                out.push_str(id);
                out.push(',');
                out.push_str(&format_value(v));
                out.push('\n');
            }
        }
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) || s.starts_with('#') || s.trim() != s {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum DefsFile {
    One(RawDef),
    Many(Vec<RawDef>),
}

#[derive(Deserialize, Serialize)]
struct RawDef {
    id: String,
    terms: Vec<RawTerm>,
}

#[derive(Deserialize, Serialize)]
struct RawTerm {
    indicator: String,
    orientation: Orientation,
    #[serde(default = "unit_weight")]
    weight: f64,
}

fn unit_weight() -> f64 {
    1.0
}

/// Parses one definition object or an array of them, validated against the
/// built-in registry.
pub fn parse_composite_defs(text: &str) -> Result<Vec<CompositeDef>> {
    parse_composite_defs_with(text, &IndicatorRegistry::builtin())
}

pub fn parse_composite_defs_with(text: &str, registry: &IndicatorRegistry) -> Result<Vec<CompositeDef>> {
    let file: DefsFile =
        serde_json::from_str(text).map_err(|e| Error::config(format!("composite definitions: {e}")))?;
    let raws = match file {
        DefsFile::One(d) => vec![d],
        DefsFile::Many(ds) => ds,
    };
    let mut defs: Vec<CompositeDef> = Vec::with_capacity(raws.len());
    for raw in raws {
        if defs.iter().any(|d| d.id == raw.id) {
            return Err(Error::config(format!("composite {} defined twice", raw.id)));
        }
        let terms = raw
            .terms
            .into_iter()
            .map(|t| Term::new(t.indicator, t.orientation, t.weight))
            .collect();
        let def = CompositeDef::new(raw.id, terms)?;
        def.validate(registry)?;
        defs.push(def);
    }
    Ok(defs)
}

pub fn serialize_composite_defs(defs: &[CompositeDef]) -> String {
    let mut s = serde_json::to_string_pretty(defs).expect("definitions serialize");
    s.push('\n');
    s
}
