//! The distortion measures, grouped by structural granularity.

pub mod cluster;
pub mod global;
pub mod local;

use indexmap::IndexMap;
use serde::Serialize;

/// Result of one measure: named global scores plus optional per-point
/// local distortion vectors keyed by the same score names.
#[derive(Clone, Debug, Serialize)]
pub struct MeasureOutput {
    pub id: String,
    pub globals: IndexMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub locals: Option<IndexMap<String, Vec<f64>>>,
}

impl MeasureOutput {
    pub fn new(id: &str) -> Self {
        Self {
            id: id.to_string(),
            globals: IndexMap::new(),
            locals: None,
        }
    }

    pub fn with_global(mut self, name: &str, value: f64) -> Self {
        self.globals.insert(name.to_string(), value);
        self
    }

    pub fn with_local(mut self, name: &str, values: Vec<f64>) -> Self {
        self.locals
            .get_or_insert_with(IndexMap::new)
            .insert(name.to_string(), values);
        self
    }

    pub fn global(&self, name: &str) -> f64 {
        self.globals[name]
    }
}

/// Mean reduced in index order.
pub(crate) fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}
