//! Combined Measurement Indicators.
//!
//! A composite is a weighted geometric mean of per-indicator ratios against a
//! reference algorithm. All aggregation runs in log space: the LI product over
//! fourteen terms spans several orders of magnitude.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::indicator::IndicatorRegistry;
use crate::table::MeasurementTable;

/// Scores closer than this share a rank.
pub const RANK_TIE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    /// value / reference: bigger is better.
    Direct,
    /// reference / value: smaller is better.
    Inverse,
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Orientation::Direct => "direct",
            Orientation::Inverse => "inverse",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub indicator: String,
    pub orientation: Orientation,
    pub weight: f64,
}

impl Term {
    pub fn new(indicator: impl Into<String>, orientation: Orientation, weight: f64) -> Self {
        Term {
            indicator: indicator.into(),
            orientation,
            weight,
        }
    }

    pub fn direct(indicator: &str) -> Self {
        Term::new(indicator, Orientation::Direct, 1.0)
    }

    pub fn inverse(indicator: &str) -> Self {
        Term::new(indicator, Orientation::Inverse, 1.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompositeDef {
    pub id: String,
    pub terms: Vec<Term>,
}

impl CompositeDef {
    /// Builds a composite, rejecting an empty term list, repeated
    /// indicators, and weights that are not finite and positive.
    pub fn new(id: impl Into<String>, terms: Vec<Term>) -> Result<Self> {
        let def = CompositeDef { id: id.into(), terms };
        def.check_shape()?;
        Ok(def)
    }

    fn check_shape(&self) -> Result<()> {
        if self.id.is_empty() {
            return Err(Error::config("composite id must not be empty"));
        }
        if self.terms.is_empty() {
            return Err(Error::config(format!("composite {}: empty terms", self.id)));
        }
        for (i, t) in self.terms.iter().enumerate() {
            if !(t.weight.is_finite() && t.weight > 0.0) {
                return Err(Error::config(format!(
                    "composite {}: weight of {} must be positive, got {}",
                    self.id, t.indicator, t.weight
                )));
            }
            if self.terms[..i].iter().any(|p| p.indicator == t.indicator) {
                return Err(Error::config(format!(
                    "composite {}: indicator {} listed twice",
                    self.id, t.indicator
                )));
            }
        }
        Ok(())
    }

    /// Full validation: shape plus every indicator id resolving in `registry`.
    pub fn validate(&self, registry: &IndicatorRegistry) -> Result<()> {
        self.check_shape()?;
        for t in &self.terms {
            if !registry.contains(&t.indicator) {
                return Err(Error::config(format!(
                    "composite {}: unknown indicator {}",
                    self.id, t.indicator
                )));
            }
        }
        Ok(())
    }

    /// Number of terms, `l`.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term(&self, indicator: &str) -> Option<&Term> {
        self.terms.iter().find(|t| t.indicator == indicator)
    }

    pub fn set_weight(&mut self, indicator: &str, weight: f64) -> Result<()> {
        if !(weight.is_finite() && weight > 0.0) {
            return Err(Error::config(format!(
                "composite {}: weight of {indicator} must be positive, got {weight}",
                self.id
            )));
        }
        let id = self.id.clone();
        let term = self
            .terms
            .iter_mut()
            .find(|t| t.indicator == indicator)
            .ok_or_else(|| Error::config(format!("composite {id} has no term {indicator}")))?;
        term.weight = weight;
        Ok(())
    }

    pub fn set_orientation(&mut self, indicator: &str, orientation: Orientation) -> Result<()> {
        let id = self.id.clone();
        let term = self
            .terms
            .iter_mut()
            .find(|t| t.indicator == indicator)
            .ok_or_else(|| Error::config(format!("composite {id} has no term {indicator}")))?;
        term.orientation = orientation;
        Ok(())
    }
}

/// Ratio of a measurement against the reference measurement.
pub fn ratio(value: f64, ref_value: f64, orientation: Orientation) -> Result<f64> {
    for (what, v) in [("value", value), ("reference value", ref_value)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::Domain {
                algorithm: "?".into(),
                indicator: what.into(),
                value: v,
            });
        }
    }
    Ok(match orientation {
        Orientation::Direct => value / ref_value,
        Orientation::Inverse => ref_value / value,
    })
}

fn check_ratios(ratios: &[f64]) -> Result<()> {
    if ratios.is_empty() {
        return Err(Error::usage("geometric mean of an empty list"));
    }
    if let Some((k, r)) = ratios.iter().enumerate().find(|(_, r)| !(r.is_finite() && **r > 0.0)) {
        return Err(Error::Domain {
            algorithm: "?".into(),
            indicator: format!("ratio #{k}"),
            value: *r,
        });
    }
    Ok(())
}

/// `(∏ ratios)^(1/l)`.
pub fn geometric_mean(ratios: &[f64]) -> Result<f64> {
    check_ratios(ratios)?;
    let log_sum: f64 = ratios.iter().map(|r| r.ln()).sum();
    Ok((log_sum / ratios.len() as f64).exp())
}

/// `(∏ ratio_k^w_k)^(1/Σw_k)`.
pub fn weighted_geometric_mean(ratios: &[f64], weights: &[f64]) -> Result<f64> {
    if ratios.len() != weights.len() {
        return Err(Error::usage(format!(
            "{} ratios but {} weights",
            ratios.len(),
            weights.len()
        )));
    }
    check_ratios(ratios)?;
    if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
        return Err(Error::usage(format!("weights must be positive, got {w}")));
    }
    let total: f64 = weights.iter().sum();
    let log_sum: f64 = ratios.iter().zip(weights).map(|(r, w)| w * r.ln()).sum();
    Ok((log_sum / total).exp())
}

/// A term dropped from a composite because some algorithm lacks its value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReconcileWarning {
    pub composite: String,
    pub indicator: String,
    pub missing_for: Vec<String>,
}

impl fmt::Display for ReconcileWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: dropped term {} (missing for {})",
            self.composite,
            self.indicator,
            self.missing_for.join(", ")
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reconciled {
    pub terms: Vec<Term>,
    pub warnings: Vec<ReconcileWarning>,
}

/// Keeps the terms every algorithm (and the reference) has a value for.
/// Dropping is all-or-nothing per term, so every algorithm is scored over the
/// same radical degree.
pub fn reconcile_terms(def: &CompositeDef, table: &MeasurementTable) -> Reconciled {
    let mut rows: Vec<&str> = table.algorithms().iter().map(String::as_str).collect();
    if let Some(r) = table.reference() {
        if !rows.contains(&r) {
            rows.push(r);
        }
    }
    let mut terms = Vec::new();
    let mut warnings = Vec::new();
    for term in &def.terms {
        let missing: Vec<String> = rows
            .iter()
            .filter(|alg| table.get(alg, &term.indicator).is_none())
            .map(|alg| alg.to_string())
            .collect();
        if missing.is_empty() {
            terms.push(term.clone());
        } else {
            warnings.push(ReconcileWarning {
                composite: def.id.clone(),
                indicator: term.indicator.clone(),
                missing_for: missing,
            });
        }
    }
    Reconciled { terms, warnings }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompositeScoreSet {
    pub composite: String,
    pub reference: String,
    pub algorithms: Vec<String>,
    pub scores: Vec<f64>,
    pub ranks: Vec<usize>,
    pub effective_terms: Vec<Term>,
    pub warnings: Vec<ReconcileWarning>,
}

impl CompositeScoreSet {
    fn index(&self, algorithm: &str) -> Option<usize> {
        self.algorithms.iter().position(|a| a == algorithm)
    }

    pub fn score(&self, algorithm: &str) -> Option<f64> {
        self.index(algorithm).map(|i| self.scores[i])
    }

    pub fn rank(&self, algorithm: &str) -> Option<usize> {
        self.index(algorithm).map(|i| self.ranks[i])
    }

    /// (algorithm, score, rank) in table order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, f64, usize)> {
        self.algorithms
            .iter()
            .zip(&self.scores)
            .zip(&self.ranks)
            .map(|((a, s), r)| (a.as_str(), *s, *r))
    }

    /// Rows sorted by rank, ties kept in table order.
    pub fn ranked(&self) -> Vec<(&str, f64, usize)> {
        let mut rows: Vec<_> = self.iter().collect();
        rows.sort_by_key(|(_, _, r)| *r);
        rows
    }
}

/// Competition ranking, descending: equal scores share a rank and the next
/// rank skips.
pub fn competition_ranks(scores: &[f64]) -> Vec<usize> {
    scores
        .iter()
        .map(|s| 1 + scores.iter().filter(|o| **o - s > RANK_TIE_TOLERANCE).count())
        .collect()
}

/// Scores every algorithm in `table` against the table's reference.
pub fn evaluate_composite(def: &CompositeDef, table: &MeasurementTable) -> Result<CompositeScoreSet> {
    def.check_shape()?;
    let reference = table
        .reference()
        .ok_or_else(|| Error::config("no reference algorithm set"))?;
    if !table.contains_algorithm(reference) {
        return Err(Error::config(format!(
            "reference algorithm {reference} has no measurements"
        )));
    }
    let Reconciled { terms, warnings } = reconcile_terms(def, table);
    if terms.is_empty() {
        return Err(Error::usage(format!(
            "composite {}: no effective terms remain for this table",
            def.id
        )));
    }
    let weights: Vec<f64> = terms.iter().map(|t| t.weight).collect();

    let mut scores = Vec::with_capacity(table.algorithms().len());
    let mut ratios = Vec::with_capacity(terms.len());
    for alg in table.algorithms() {
        ratios.clear();
        for term in &terms {
            // reconcile_terms guarantees both cells exist
            let value = table.get(alg, &term.indicator).unwrap_or(f64::NAN);
            let ref_value = table.get(reference, &term.indicator).unwrap_or(f64::NAN);
            let r = ratio(value, ref_value, term.orientation).map_err(|_| {
                let (algorithm, bad) = if value.is_finite() && value > 0.0 {
                    (reference.to_string(), ref_value)
                } else {
                    (alg.clone(), value)
                };
                Error::Domain {
                    algorithm,
                    indicator: term.indicator.clone(),
                    value: bad,
                }
            })?;
            ratios.push(r);
        }
        scores.push(weighted_geometric_mean(&ratios, &weights)?);
    }

    Ok(CompositeScoreSet {
        composite: def.id.clone(),
        reference: reference.to_string(),
        algorithms: table.algorithms().to_vec(),
        ranks: competition_ranks(&scores),
        scores,
        effective_terms: terms,
        warnings,
    })
}

pub fn evaluate_all(defs: &[CompositeDef], table: &MeasurementTable) -> Result<Vec<CompositeScoreSet>> {
    defs.iter().map(|d| evaluate_composite(d, table)).collect()
}

const GAP_TERMS: [&str; 4] = ["ac", "ks", "nr", "bs"];

fn swp_terms() -> Vec<Term> {
    vec![
        Term::inverse("et_sw"),
        Term::direct("th_sw"),
        Term::inverse("cpi"),
        Term::inverse("cmr"),
    ]
}

fn hwp_terms() -> Vec<Term> {
    vec![
        Term::inverse("et_hw"),
        Term::direct("th_hw"),
        Term::inverse("pd"),
        Term::inverse("alut"),
        Term::inverse("lr"),
        Term::inverse("pc"),
    ]
}

/// LI, CI, SSI, HLI, SLI and SI with unit weights.
///
/// CI and SSI use inverse ratios throughout; that is the orientation under
/// which the published indicator table is reproduced.
pub fn builtin_composites() -> Vec<CompositeDef> {
    let gap: Vec<Term> = GAP_TERMS.iter().map(|id| Term::inverse(id)).collect();

    let mut li = gap.clone();
    li.extend(swp_terms());
    li.extend(hwp_terms());

    let mut ci = gap.clone();
    ci.push(Term::inverse("cpi"));

    let si = vec![
        Term::inverse("et_sw"),
        Term::direct("th_sw"),
        Term::inverse("et_hw"),
        Term::direct("th_hw"),
        Term::inverse("pd"),
    ];

    [
        ("li", li),
        ("ci", ci),
        ("ssi", gap),
        ("hli", hwp_terms()),
        ("sli", swp_terms()),
        ("si", si),
    ]
    .into_iter()
    .map(|(id, terms)| CompositeDef {
        id: id.to_string(),
        terms,
    })
    .collect()
}

pub fn builtin_composite(id: &str) -> Option<CompositeDef> {
    let id = id.to_ascii_lowercase();
    builtin_composites().into_iter().find(|d| d.id == id)
}

/// Upper-case display label for a composite id ("li" → "LI").
pub fn display_name(id: &str) -> String {
    id.to_ascii_uppercase()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn ratio_examples() {
        assert_eq!(ratio(23.21, 23.21, Orientation::Inverse).unwrap(), 1.0);
        // hand division: 23.21 / 0.41 and 156.098 / 5.515
        assert!(close(ratio(0.41, 23.21, Orientation::Inverse).unwrap(), 56.6098, 1e-4));
        assert!(close(
            ratio(156.098, 5.515, Orientation::Direct).unwrap(),
            28.3042,
            1e-4
        ));
        assert!(matches!(
            ratio(0.0, 1.0, Orientation::Direct),
            Err(Error::Domain { .. })
        ));
        assert!(matches!(
            ratio(1.0, -2.0, Orientation::Inverse),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn geometric_mean_examples() {
        assert_eq!(geometric_mean(&[1.0, 1.0, 1.0]).unwrap(), 1.0);
        assert!(close(geometric_mean(&[4.0, 1.0]).unwrap(), 2.0, 1e-12));
        assert!(matches!(geometric_mean(&[]), Err(Error::Usage(_))));
        assert!(matches!(geometric_mean(&[1.0, 0.0]), Err(Error::Domain { .. })));
    }

    #[test]
    fn geometric_mean_survives_extreme_products() {
        let big = vec![1e300; 14];
        assert!(close(geometric_mean(&big).unwrap() / 1e300, 1.0, 1e-9));
        let tiny = vec![1e-300; 14];
        assert!(close(geometric_mean(&tiny).unwrap() / 1e-300, 1.0, 1e-9));
    }

    #[test]
    fn weighted_examples() {
        assert!(close(
            weighted_geometric_mean(&[4.0, 9.0], &[1.0, 1.0]).unwrap(),
            6.0,
            1e-12
        ));
        assert!(close(
            weighted_geometric_mean(&[4.0, 9.0], &[1.0, 1e-9]).unwrap(),
            4.0,
            1e-6
        ));
        assert!(matches!(
            weighted_geometric_mean(&[4.0, 9.0], &[1.0]),
            Err(Error::Usage(_))
        ));
        assert!(matches!(
            weighted_geometric_mean(&[4.0, 9.0], &[1.0, 0.0]),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn builtin_shapes() {
        let defs = builtin_composites();
        let lens: Vec<_> = defs.iter().map(|d| (d.id.as_str(), d.len())).collect();
        assert_eq!(
            lens,
            [("li", 14), ("ci", 5), ("ssi", 4), ("hli", 6), ("sli", 4), ("si", 5)]
        );
        let reg = IndicatorRegistry::builtin();
        for d in &defs {
            d.validate(&reg).unwrap();
            assert!(d.terms.iter().all(|t| t.weight == 1.0));
        }
        let ci = builtin_composite("CI").unwrap();
        assert!(ci.terms.iter().all(|t| t.orientation == Orientation::Inverse));
        let li = builtin_composite("li").unwrap();
        let direct: Vec<_> = li
            .terms
            .iter()
            .filter(|t| t.orientation == Orientation::Direct)
            .map(|t| t.indicator.as_str())
            .collect();
        assert_eq!(direct, ["th_sw", "th_hw"]);
    }

    #[test]
    fn definition_validation() {
        assert!(matches!(CompositeDef::new("x", vec![]), Err(Error::Config(_))));
        assert!(matches!(
            CompositeDef::new("x", vec![Term::new("ks", Orientation::Direct, 0.0)]),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            CompositeDef::new("x", vec![Term::direct("ks"), Term::inverse("ks")]),
            Err(Error::Config(_))
        ));
        let def = CompositeDef::new("x", vec![Term::direct("nope")]).unwrap();
        let err = def.validate(&IndicatorRegistry::builtin()).unwrap_err();
        assert!(err.to_string().contains("composite x"));
    }

    fn small_table() -> MeasurementTable {
        let mut t = MeasurementTable::new().with_reference("R");
        for (alg, a, b) in [("A", 2.0, 8.0), ("B", 1.0, 2.0), ("R", 1.0, 1.0)] {
            t.insert(alg, "et_sw", a).unwrap();
            t.insert(alg, "th_sw", b).unwrap();
        }
        t
    }

    #[test]
    fn evaluate_scores_and_ranks() {
        let def = CompositeDef::new("x", vec![Term::inverse("et_sw"), Term::direct("th_sw")]).unwrap();
        let s = evaluate_composite(&def, &small_table()).unwrap();
        // A: sqrt(1/2 * 8) = 2, B: sqrt(1 * 2)
        assert!(close(s.score("A").unwrap(), 2.0, 1e-12));
        assert!(close(s.score("B").unwrap(), 2f64.sqrt(), 1e-12));
        assert_eq!(s.score("R").unwrap(), 1.0);
        assert_eq!(s.ranks, [1, 2, 3]);
        assert!(s.warnings.is_empty());
    }

    #[test]
    fn reconcile_drops_partial_terms() {
        let mut t = small_table();
        t.insert("A", "cpi", 1.0).unwrap();
        t.insert("R", "cpi", 1.0).unwrap();
        let sli = builtin_composite("sli").unwrap();
        let rec = reconcile_terms(&sli, &t);
        let kept: Vec<_> = rec.terms.iter().map(|t| t.indicator.as_str()).collect();
        assert_eq!(kept, ["et_sw", "th_sw"]);
        assert_eq!(rec.warnings.len(), 2);
        assert_eq!(rec.warnings[0].indicator, "cpi");
        assert_eq!(rec.warnings[0].missing_for, ["B"]);
        assert_eq!(rec.warnings[1].missing_for, ["A", "B", "R"]);

        let hli = builtin_composite("hli").unwrap();
        match evaluate_composite(&hli, &t) {
            Err(Error::Usage(msg)) => assert!(msg.contains("no effective terms")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn evaluate_requires_reference() {
        let def = builtin_composite("sli").unwrap();
        let mut t = small_table();
        t.set_reference("AES");
        assert!(matches!(evaluate_composite(&def, &t), Err(Error::Config(_))));
        let mut bare = MeasurementTable::new();
        bare.insert("A", "et_sw", 1.0).unwrap();
        assert!(matches!(evaluate_composite(&def, &bare), Err(Error::Config(_))));
    }

    #[test]
    fn domain_error_names_cell() {
        let mut t = small_table();
        t.insert_raw("B", "et_sw", 0.0);
        let def = CompositeDef::new("x", vec![Term::inverse("et_sw")]).unwrap();
        match evaluate_composite(&def, &t) {
            Err(Error::Domain {
                algorithm,
                indicator,
                value,
            }) => {
                assert_eq!((algorithm.as_str(), indicator.as_str(), value), ("B", "et_sw", 0.0));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn competition_ranking_ties() {
        assert_eq!(competition_ranks(&[3.0, 1.0, 3.0, 2.0]), [1, 4, 1, 3]);
        assert_eq!(competition_ranks(&[1.0, 1.0 + 1e-12]), [1, 1]);
        assert_eq!(competition_ranks(&[5.0]), [1]);
    }
}
