//! Indicator reports: a benchmark descriptor, dataset provenance, composite
//! scores and reconciliation warnings, rendered as text, CSV or JSON.
//!
//! Every format carries the same numbers: scores are rounded to
//! [`SCORE_DECIMALS`] places once, then printed.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::composite::{display_name, CompositeScoreSet};
use crate::dataset::CorrectionRecord;
use crate::error::{Error, Result};

pub const SCORE_DECIMALS: usize = 4;

/// Allowed distance between a recomputed score and the two-decimal table.
pub const VERIFY_TOLERANCE: f64 = 0.02;

/// Rounds a score the way every report format prints it.
pub fn report_value(v: f64) -> f64 {
    let scale = 10f64.powi(SCORE_DECIMALS as i32);
    (v * scale).round() / scale
}

fn fmt_score(v: f64) -> String {
    format!("{:.*}", SCORE_DECIMALS, report_value(v))
}

/// The six-element description of a benchmark study.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BenchmarkDescriptor {
    pub goal: String,
    pub input: String,
    pub activities: String,
    pub output: String,
    pub outcomes: String,
    pub performance: String,
}

impl BenchmarkDescriptor {
    pub const FIELDS: [&'static str; 6] = ["goal", "input", "activities", "output", "outcomes", "performance"];

    pub fn get(&self, field: &str) -> Option<&str> {
        Some(match field {
            "goal" => &self.goal,
            "input" => &self.input,
            "activities" => &self.activities,
            "output" => &self.output,
            "outcomes" => &self.outcomes,
            "performance" => &self.performance,
            _ => return None,
        })
    }

    /// Replaces one field. Empty text and unknown field names are usage errors.
    pub fn set(&mut self, field: &str, text: &str) -> Result<()> {
        let text = text.trim();
        if text.is_empty() {
            return Err(Error::usage(format!("descriptor field {field} must not be empty")));
        }
        let slot = match field.to_ascii_lowercase().as_str() {
            "goal" => &mut self.goal,
            "input" => &mut self.input,
            "activities" => &mut self.activities,
            "output" => &mut self.output,
            "outcomes" => &mut self.outcomes,
            "performance" => &mut self.performance,
            _ => {
                return Err(Error::usage(format!(
                    "unknown descriptor field {field:?}; expected one of {}",
                    Self::FIELDS.join(", ")
                )))
            }
        };
        *slot = text.to_string();
        Ok(())
    }

    /// Applies `field=text` overrides in order.
    pub fn with_edits<'a>(mut self, edits: impl IntoIterator<Item = &'a str>) -> Result<Self> {
        for edit in edits {
            let (field, text) = edit
                .split_once('=')
                .ok_or_else(|| Error::usage(format!("descriptor edit {edit:?} is not field=text")))?;
            self.set(field.trim(), text)?;
        }
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        for f in Self::FIELDS {
            if self.get(f).is_none_or(|t| t.trim().is_empty()) {
                return Err(Error::usage(format!("descriptor field {f} is empty")));
            }
        }
        Ok(())
    }

    pub fn entries(&self) -> impl Iterator<Item = (&'static str, &str)> {
        Self::FIELDS.into_iter().map(|f| (f, self.get(f).unwrap_or("")))
    }

    pub fn render_text(&self) -> String {
        let mut s = String::new();
        for (f, text) in self.entries() {
            let mut label = f.to_string();
            label[..1].make_ascii_uppercase();
            let _ = writeln!(s, "{label}: {text}");
        }
        s
    }
}

impl Default for BenchmarkDescriptor {
    /// The lightweight-cipher study.
    fn default() -> Self {
        BenchmarkDescriptor {
            goal: "Profile lightweight block ciphers across hardware and software and combine \
                   speed, complexity, strength and size metrics into comparable indicators."
                .into(),
            input: "Skipjack, XTEA, 3-WAY, HIGHT, KATAN-32/48/64 and KTANTAN-32/48/64 measured \
                    against AES-192 on a multi-core workstation and an FPGA."
                .into(),
            activities: "C software implementations timed and profiled on the CPU; VHDL hardware \
                         implementations synthesized and simulated for the FPGA."
                .into(),
            output: "Key indicator measurements grouped into general algorithmic, software and \
                     hardware profiles."
                .into(),
            outcomes: "Combined indicators LI, CI, SSI, HLI, SLI and SI, each a geometric mean of \
                       ratios against the reference cipher."
                .into(),
            performance: "Rating, ranking and classification of the ciphers by each combined \
                          indicator."
                .into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DataSource {
    Bundled,
    Ingested,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub source: DataSource,
    /// Files read, empty for the embedded dataset.
    pub files: Vec<String>,
    pub reference: String,
    pub corrections: bool,
    pub applied: Vec<CorrectionRecord>,
}

impl Provenance {
    fn summary(&self) -> String {
        let source = match self.source {
            DataSource::Bundled => "bundled dataset".to_string(),
            DataSource::Ingested if self.files.is_empty() => "ingested data".to_string(),
            DataSource::Ingested => format!("ingested from {}", self.files.join(", ")),
        };
        let corrections = if !self.corrections {
            "corrections off".to_string()
        } else {
            format!("corrections on ({} cells replaced)", self.applied.len())
        };
        format!("{source}; {corrections}; reference {}", self.reference)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReportFormat {
    #[default]
    Text,
    Csv,
    Json,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "text" | "txt" => Ok(ReportFormat::Text),
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            _ => Err(Error::usage(format!(
                "unknown format {s:?}; expected text, csv or json"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IndicatorReport {
    pub descriptor: BenchmarkDescriptor,
    pub provenance: Provenance,
    pub composites: Vec<CompositeScoreSet>,
    pub warnings: Vec<String>,
}

impl IndicatorReport {
    /// Collects reconciliation warnings from the score sets.
    pub fn new(descriptor: BenchmarkDescriptor, provenance: Provenance, composites: Vec<CompositeScoreSet>) -> Self {
        let warnings = composites
            .iter()
            .flat_map(|c| c.warnings.iter().map(|w| w.to_string()))
            .collect();
        IndicatorReport {
            descriptor,
            provenance,
            composites,
            warnings,
        }
    }

    /// Row labels: the algorithms of the first score set, then any others.
    fn algorithms(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for set in &self.composites {
            for a in &set.algorithms {
                if !out.contains(&a.as_str()) {
                    out.push(a);
                }
            }
        }
        out
    }

    pub fn render(&self, format: ReportFormat) -> String {
        match format {
            ReportFormat::Text => self.render_text(),
            ReportFormat::Csv => self.render_csv(),
            ReportFormat::Json => self.render_json(),
        }
    }

    pub fn render_text(&self) -> String {
        let mut s = self.descriptor.render_text();
        let _ = writeln!(s, "\nData: {}", self.provenance.summary());
        for c in &self.provenance.applied {
            let _ = writeln!(s, "  {} {}: {} -> {}", c.algorithm, c.indicator, c.printed, c.corrected);
        }

        let algs = self.algorithms();
        let name_w = algs.iter().map(|a| a.len()).max().unwrap_or(0).max("Algorithm".len());
        let col_w = SCORE_DECIMALS + 4;
        let header = |s: &mut String, title: &str| {
            let _ = write!(s, "\n{title}\n{:<name_w$}", "Algorithm");
            for set in &self.composites {
                let _ = write!(s, " {:>col_w$}", display_name(&set.composite));
            }
            s.push('\n');
        };

        header(&mut s, "Scores");
        for alg in &algs {
            let _ = write!(s, "{alg:<name_w$}");
            for set in &self.composites {
                let cell = set.score(alg).map(fmt_score).unwrap_or_else(|| "-".into());
                let _ = write!(s, " {cell:>col_w$}");
            }
            s.push('\n');
        }

        header(&mut s, "Ranks");
        for alg in &algs {
            let _ = write!(s, "{alg:<name_w$}");
            for set in &self.composites {
                let cell = set.rank(alg).map(|r| r.to_string()).unwrap_or_else(|| "-".into());
                let _ = write!(s, " {cell:>col_w$}");
            }
            s.push('\n');
        }

        if !self.warnings.is_empty() {
            s.push_str("\nWarnings\n");
            for w in &self.warnings {
                let _ = writeln!(s, "  {w}");
            }
        }
        s
    }

    /// Long-form CSV, one row per (composite, algorithm); descriptor and
    /// provenance as `#` comments.
    pub fn render_csv(&self) -> String {
        let mut s = String::new();
        for (f, text) in self.descriptor.entries() {
            let _ = writeln!(s, "# {f}: {text}");
        }
        let _ = writeln!(s, "# data: {}", self.provenance.summary());
        for w in &self.warnings {
            let _ = writeln!(s, "# warning: {w}");
        }
        s.push_str("composite,algorithm,score,rank\n");
        for set in &self.composites {
            for (alg, score, rank) in set.iter() {
                let alg = if alg.contains([',', '"']) {
                    format!("\"{}\"", alg.replace('"', "\"\""))
                } else {
                    alg.to_string()
                };
                let _ = writeln!(s, "{},{alg},{},{rank}", display_name(&set.composite), fmt_score(score));
            }
        }
        s
    }

    pub fn to_json(&self) -> Value {
        let composites: Vec<Value> = self
            .composites
            .iter()
            .map(|set| {
                let mut scores = Map::new();
                let mut ranks = Map::new();
                for (alg, score, rank) in set.iter() {
                    scores.insert(alg.to_string(), json!(report_value(score)));
                    ranks.insert(alg.to_string(), json!(rank));
                }
                json!({ "id": display_name(&set.composite), "scores": scores, "ranks": ranks })
            })
            .collect();
        json!({
            "descriptor": self.descriptor,
            "provenance": self.provenance,
            "composites": composites,
            "warnings": self.warnings,
        })
    }

    pub fn render_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("report serializes");
        s.push('\n');
        s
    }
}

/// The published two-decimal indicator table, columns LI, CI, SSI, HLI, SLI, SI.
pub const EXPECTED_COMPOSITES: [&str; 6] = ["li", "ci", "ssi", "hli", "sli", "si"];

// 3.14 below is a measured score, not pi
#[allow(clippy::approx_constant)]
pub const EXPECTED_TABLE: [(&str, [f64; 6]); 11] = [
    ("Skipjack", [1.57, 1.11, 1.16, 1.42, 2.46, 2.81]),
    ("XTEA", [1.22, 1.05, 0.93, 1.18, 1.70, 1.48]),
    ("3-WAY", [2.52, 1.19, 1.22, 5.24, 1.75, 5.08]),
    ("HIGHT", [1.93, 1.01, 1.03, 2.02, 3.40, 1.43]),
    ("KATAN-32", [0.89, 0.98, 0.82, 1.12, 0.69, 0.59]),
    ("KATAN-48", [0.79, 0.90, 0.74, 0.90, 0.70, 0.47]),
    ("KATAN-64", [0.76, 0.85, 0.69, 0.86, 0.71, 0.44]),
    ("KTANTAN-32", [1.04, 0.89, 0.82, 3.88, 0.18, 0.48]),
    ("KTANTAN-48", [0.95, 0.83, 0.74, 3.14, 0.20, 0.47]),
    ("KTANTAN-64", [0.89, 0.78, 0.69, 2.76, 0.21, 0.44]),
    ("AES", [1.00, 1.00, 1.00, 1.00, 1.00, 1.00]),
];

pub fn expected_value(algorithm: &str, composite: &str) -> Option<f64> {
    let col = EXPECTED_COMPOSITES
        .iter()
        .position(|c| c.eq_ignore_ascii_case(composite))?;
    EXPECTED_TABLE
        .iter()
        .find(|(a, _)| *a == algorithm)
        .map(|(_, row)| row[col])
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyMismatch {
    pub algorithm: String,
    pub composite: String,
    pub expected: f64,
    /// `None` when the cell was not computed.
    pub actual: Option<f64>,
}

impl std::fmt::Display for VerifyMismatch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = display_name(&self.composite);
        match self.actual {
            Some(a) => write!(
                f,
                "{} {name}: expected {:.2}, got {a:.4} (|delta| {:.4})",
                self.algorithm,
                self.expected,
                (a - self.expected).abs()
            ),
            None => write!(
                f,
                "{} {name}: expected {:.2}, not computed",
                self.algorithm, self.expected
            ),
        }
    }
}

/// Compares every cell of the expected table with the computed scores.
pub fn verify_against_expected(sets: &[CompositeScoreSet]) -> Vec<VerifyMismatch> {
    let mut out = Vec::new();
    for (col, id) in EXPECTED_COMPOSITES.iter().enumerate() {
        let set = sets.iter().find(|s| s.composite.eq_ignore_ascii_case(id));
        for (alg, row) in EXPECTED_TABLE {
            let actual = set.and_then(|s| s.score(alg));
            let ok = actual.is_some_and(|a| (a - row[col]).abs() <= VERIFY_TOLERANCE);
            if !ok {
                out.push(VerifyMismatch {
                    algorithm: alg.to_string(),
                    composite: id.to_string(),
                    expected: row[col],
                    actual,
                });
            }
        }
    }
    out
}
