use std::collections::HashMap;

use crate::error::{Error, Result};

/// Per-algorithm indicator values.
///
/// Algorithms keep their insertion order, which is the canonical row order
/// for reports and serialization. Values inserted through [`insert`] must be
/// positive; only the bundled printed dataset bypasses that check.
///
/// [`insert`]: MeasurementTable::insert
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MeasurementTable {
    algorithms: Vec<String>,
    reference: Option<String>,
    cells: HashMap<(String, String), f64>,
}

impl MeasurementTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_reference(mut self, reference: impl Into<String>) -> Self {
        self.reference = Some(reference.into());
        self
    }

    pub fn set_reference(&mut self, reference: impl Into<String>) {
        self.reference = Some(reference.into());
    }

    pub fn reference(&self) -> Option<&str> {
        self.reference.as_deref()
    }

    pub fn algorithms(&self) -> &[String] {
        &self.algorithms
    }

    pub fn contains_algorithm(&self, algorithm: &str) -> bool {
        self.algorithms.iter().any(|a| a == algorithm)
    }

    /// Registers an algorithm row without any cells.
    pub fn add_algorithm(&mut self, algorithm: &str) {
        if !self.contains_algorithm(algorithm) {
            self.algorithms.push(algorithm.to_string());
        }
    }

    /// Inserts a positive measurement. Fails on a non-positive or
    /// non-finite value and on a cell that already exists.
    pub fn insert(&mut self, algorithm: &str, indicator: &str, value: f64) -> Result<()> {
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::Domain {
                algorithm: algorithm.to_string(),
                indicator: indicator.to_string(),
                value,
            });
        }
        if self.get(algorithm, indicator).is_some() {
            return Err(Error::usage(format!("duplicate cell ({algorithm}, {indicator})")));
        }
        self.insert_raw(algorithm, indicator, value);
        Ok(())
    }

    /// Stores a value as given, overwriting any previous cell.
    pub(crate) fn insert_raw(&mut self, algorithm: &str, indicator: &str, value: f64) {
        self.add_algorithm(algorithm);
        self.cells.insert((algorithm.to_string(), indicator.to_string()), value);
    }

    pub fn get(&self, algorithm: &str, indicator: &str) -> Option<f64> {
        self.cells.get(&(algorithm.to_string(), indicator.to_string())).copied()
    }

    pub fn has_indicator(&self, indicator: &str) -> bool {
        self.cells.keys().any(|(_, id)| id == indicator)
    }

    /// Distinct indicator ids present in any cell, unordered.
    pub fn indicator_ids(&self) -> Vec<&str> {
        let mut ids: Vec<&str> = self.cells.keys().map(|(_, id)| id.as_str()).collect();
        ids.sort_unstable();
        ids.dedup();
        ids
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Multiplies one indicator's value for every algorithm by `factor`.
    pub fn scale_indicator(&mut self, indicator: &str, factor: f64) {
        for ((_, id), v) in self.cells.iter_mut() {
            if id == indicator {
                *v *= factor;
            }
        }
    }

    /// Replaces an existing cell. Returns the previous value.
    pub fn replace(&mut self, algorithm: &str, indicator: &str, value: f64) -> Option<f64> {
        let key = (algorithm.to_string(), indicator.to_string());
        let slot = self.cells.get_mut(&key)?;
        Some(std::mem::replace(slot, value))
    }

    /// Union of two tables. Rows of `other` that are new are appended after
    /// this table's rows; a cell present in both is an error.
    pub fn merge(&mut self, other: &MeasurementTable) -> Result<()> {
        for alg in &other.algorithms {
            self.add_algorithm(alg);
        }
        for ((alg, id), v) in &other.cells {
            if self.get(alg, id).is_some() {
                return Err(Error::usage(format!(
                    "cell ({alg}, {id}) appears in more than one input table"
                )));
            }
            self.cells.insert((alg.clone(), id.clone()), *v);
        }
        if self.reference.is_none() {
            self.reference = other.reference.clone();
        }
        Ok(())
    }

    /// Keeps only the listed algorithms, in their current order.
    pub fn retain_algorithms(&mut self, keep: &[&str]) {
        self.algorithms.retain(|a| keep.contains(&a.as_str()));
        self.cells.retain(|(a, _), _| keep.contains(&a.as_str()));
    }

    /// Keeps only cells of the listed indicators.
    pub fn retain_indicators(&mut self, keep: &[&str]) {
        self.cells.retain(|(_, id), _| keep.contains(&id.as_str()));
    }
}
