//! Key Indicator definitions and the complexity rubric.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The analysis profile an indicator belongs to.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Profile {
    /// General algorithmic profile.
    Gap,
    /// Software profile.
    Swp,
    /// Hardware profile.
    Hwp,
    Custom(String),
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Profile::Gap => f.write_str("GAP"),
            Profile::Swp => f.write_str("SWP"),
            Profile::Hwp => f.write_str("HWP"),
            Profile::Custom(name) => f.write_str(name),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum IndicatorKind {
    Quantitative,
    /// Value comes from a [`RubricScale`] mapping.
    Rubric,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndicatorDef {
    pub id: String,
    pub profile: Profile,
    pub unit: String,
    pub kind: IndicatorKind,
    pub description: String,
}

impl IndicatorDef {
    pub fn new(
        id: impl Into<String>,
        profile: Profile,
        unit: impl Into<String>,
        kind: IndicatorKind,
        description: impl Into<String>,
    ) -> Self {
        IndicatorDef {
            id: id.into(),
            profile,
            unit: unit.into(),
            kind,
            description: description.into(),
        }
    }
}

/// Ordered set of indicator definitions. Registry order is the canonical
/// column order used by every serializer.
#[derive(Debug, Clone, PartialEq)]
pub struct IndicatorRegistry {
    defs: Vec<IndicatorDef>,
}

const BUILTIN: &[(&str, Profile, &str, IndicatorKind, &str)] = &[
    (
        "ac",
        Profile::Gap,
        "fraction",
        IndicatorKind::Rubric,
        "algorithm complexity, rubric-mapped",
    ),
    ("ks", Profile::Gap, "bits", IndicatorKind::Quantitative, "key size"),
    (
        "nr",
        Profile::Gap,
        "count",
        IndicatorKind::Quantitative,
        "number of rounds",
    ),
    ("bs", Profile::Gap, "bits", IndicatorKind::Quantitative, "block size"),
    (
        "et_sw",
        Profile::Swp,
        "µs",
        IndicatorKind::Quantitative,
        "software execution time per block",
    ),
    (
        "th_sw",
        Profile::Swp,
        "Mbps",
        IndicatorKind::Quantitative,
        "software throughput",
    ),
    (
        "cpi",
        Profile::Swp,
        "dimensionless",
        IndicatorKind::Quantitative,
        "clock cycles per instruction",
    ),
    (
        "cmr",
        Profile::Swp,
        "fraction",
        IndicatorKind::Quantitative,
        "cache miss ratio",
    ),
    (
        "et_hw",
        Profile::Hwp,
        "µs",
        IndicatorKind::Quantitative,
        "hardware execution time",
    ),
    (
        "th_hw",
        Profile::Hwp,
        "Mbps",
        IndicatorKind::Quantitative,
        "hardware throughput",
    ),
    (
        "pd",
        Profile::Hwp,
        "ns",
        IndicatorKind::Quantitative,
        "propagation delay",
    ),
    (
        "alut",
        Profile::Hwp,
        "count",
        IndicatorKind::Quantitative,
        "combinational adaptive lookup tables",
    ),
    (
        "lr",
        Profile::Hwp,
        "count",
        IndicatorKind::Quantitative,
        "logic registers",
    ),
    (
        "pc",
        Profile::Hwp,
        "mW",
        IndicatorKind::Quantitative,
        "power consumption",
    ),
];

impl IndicatorRegistry {
    pub fn empty() -> Self {
        IndicatorRegistry { defs: Vec::new() }
    }

    /// The fourteen indicators of the general algorithmic, software and
    /// hardware profiles.
    pub fn builtin() -> Self {
        let defs = BUILTIN
            .iter()
            .map(|(id, profile, unit, kind, desc)| IndicatorDef::new(*id, profile.clone(), *unit, *kind, *desc))
            .collect();
        IndicatorRegistry { defs }
    }

    pub fn register(&mut self, def: IndicatorDef) -> Result<()> {
        if def.id.is_empty() || def.id.contains(|c: char| c == ',' || c.is_whitespace()) {
            return Err(Error::config(format!("invalid indicator id {:?}", def.id)));
        }
        if self.contains(&def.id) {
            return Err(Error::config(format!("indicator {:?} is already registered", def.id)));
        }
        self.defs.push(def);
        Ok(())
    }

    pub fn get(&self, id: &str) -> Option<&IndicatorDef> {
        self.defs.iter().find(|d| d.id == id)
    }

    pub fn contains(&self, id: &str) -> bool {
        self.get(id).is_some()
    }

    pub fn position(&self, id: &str) -> Option<usize> {
        self.defs.iter().position(|d| d.id == id)
    }

    pub fn iter(&self) -> impl Iterator<Item = &IndicatorDef> {
        self.defs.iter()
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.defs.iter().map(|d| d.id.as_str())
    }

    pub fn len(&self) -> usize {
        self.defs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.defs.is_empty()
    }

    pub fn in_profile<'a>(&'a self, profile: &'a Profile) -> impl Iterator<Item = &'a IndicatorDef> {
        self.defs.iter().filter(move |d| &d.profile == profile)
    }
}

impl Default for IndicatorRegistry {
    fn default() -> Self {
        IndicatorRegistry::builtin()
    }
}

/// Ordered qualitative scale mapped onto fractions in (0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct RubricScale {
    points: Vec<(String, f64)>,
}

impl RubricScale {
    pub fn new(points: Vec<(String, f64)>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::config("rubric scale needs at least one point"));
        }
        let mut prev = 0.0;
        for (label, fraction) in &points {
            if !(*fraction > prev && *fraction <= 1.0) {
                return Err(Error::config(format!(
                    "rubric fractions must be strictly increasing within (0, 1]; {label} maps to {fraction}"
                )));
            }
            prev = *fraction;
        }
        Ok(RubricScale { points })
    }

    /// Asymptotic complexity rubric: logarithmic low, logarithmic high,
    /// linear, almost quadratic, higher than quadratic.
    pub fn complexity() -> Self {
        let points = [("LL", 0.2), ("LH", 0.4), ("L", 0.6), ("AQ", 0.8), ("HQ", 1.0)]
            .into_iter()
            .map(|(l, f)| (l.to_string(), f))
            .collect();
        RubricScale { points }
    }

    pub fn points(&self) -> &[(String, f64)] {
        &self.points
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.points.iter().map(|(l, _)| l.as_str())
    }

    pub fn map(&self, label: &str) -> Result<f64> {
        self.points
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, f)| *f)
            .ok_or_else(|| {
                let valid: Vec<_> = self.labels().collect();
                Error::usage(format!(
                    "unknown rubric label {label:?}; valid labels: {}",
                    valid.join(", ")
                ))
            })
    }
}

/// Maps a complexity label onto the AC measurement value.
pub fn map_rubric(scale: &RubricScale, label: &str) -> Result<f64> {
    scale.map(label)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_registry_order_and_units() {
        let reg = IndicatorRegistry::builtin();
        let ids: Vec<_> = reg.ids().collect();
        assert_eq!(
            ids,
            ["ac", "ks", "nr", "bs", "et_sw", "th_sw", "cpi", "cmr", "et_hw", "th_hw", "pd", "alut", "lr", "pc"]
        );
        assert_eq!(reg.get("pd").unwrap().unit, "ns");
        assert_eq!(reg.get("pc").unwrap().unit, "mW");
        assert_eq!(reg.in_profile(&Profile::Hwp).count(), 6);
        assert_eq!(reg.get("ac").unwrap().kind, IndicatorKind::Rubric);
    }

    #[test]
    fn duplicate_registration_rejected() {
        let mut reg = IndicatorRegistry::builtin();
        let dup = IndicatorDef::new("ks", Profile::Gap, "bits", IndicatorKind::Quantitative, "");
        assert!(matches!(reg.register(dup), Err(Error::Config(_))));
        let energy = IndicatorDef::new(
            "energy",
            Profile::Custom("EP".into()),
            "nJ",
            IndicatorKind::Quantitative,
            "energy per block",
        );
        reg.register(energy).unwrap();
        assert_eq!(reg.position("energy"), Some(14));
    }

    #[test]
    fn rubric_mapping() {
        let scale = RubricScale::complexity();
        assert_eq!(map_rubric(&scale, "AQ").unwrap(), 0.8);
        assert_eq!(map_rubric(&scale, "LL").unwrap(), 0.2);
        assert_eq!(map_rubric(&scale, "HQ").unwrap(), 1.0);
        match map_rubric(&scale, "QUADRATICISH") {
            Err(Error::Usage(msg)) => assert!(msg.contains("LL, LH, L, AQ, HQ")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn complexity_scale_is_strictly_increasing() {
        let scale = RubricScale::complexity();
        assert_eq!(scale.points().len(), 5);
        assert!(RubricScale::new(scale.points().to_vec()).is_ok());
        assert!(RubricScale::new(vec![("a".into(), 0.5), ("b".into(), 0.5)]).is_err());
        assert!(RubricScale::new(vec![("a".into(), 0.0)]).is_err());
    }
}
