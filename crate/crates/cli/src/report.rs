//! Measure-report JSON document: run metadata plus per-entry scores with
//! orientation echoed from the registry.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use drdist_core::registry::{self, Orientation};
use drdist_core::MeasureOutput;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Meta {
    pub n: usize,
    pub dim_high: usize,
    pub dim_low: usize,
    pub metric: String,
    pub seed: u64,
    pub wall_time_s: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ResultEntry {
    pub id: String,
    /// higher_better / lower_better per score name.
    pub orientation: IndexMap<String, String>,
    pub globals: IndexMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub locals: Option<IndexMap<String, Vec<f64>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub meta: Meta,
    pub results: Vec<ResultEntry>,
}

impl Report {
    pub fn new(meta: Meta, outputs: Vec<MeasureOutput>) -> Report {
        let results = outputs
            .into_iter()
            .map(|out| {
                let orientation = registry::lookup(&out.id)
                    .map(|d| {
                        d.orientation
                            .iter()
                            .map(|&(name, o)| {
                                let tag = match o {
                                    Orientation::HigherBetter => "higher_better",
                                    Orientation::LowerBetter => "lower_better",
                                };
                                (name.to_string(), tag.to_string())
                            })
                            .collect()
                    })
                    .unwrap_or_default();
                ResultEntry {
                    id: out.id,
                    orientation,
                    globals: out.globals,
                    locals: out.locals,
                }
            })
            .collect();
        Report { meta, results }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}

/// Known (false-direction, missing-direction) local score pairs, in the
/// order they are searched for by the viz command.
pub const LOCAL_PAIRS: &[(&str, &str)] = &[
    ("steadiness", "cohesiveness"),
    ("trustworthiness", "continuity"),
    ("ca_trustworthiness", "ca_continuity"),
    ("mrre_false", "mrre_missing"),
];

/// Pull the first recognized false/missing local pair out of a report.
/// Locals are higher-is-better in [0, 1]; distortions are 1 - value.
pub fn extract_distortions(report: &Report) -> Option<(String, Vec<f64>, Vec<f64>)> {
    for entry in &report.results {
        let Some(locals) = &entry.locals else {
            continue;
        };
        for &(false_name, missing_name) in LOCAL_PAIRS {
            if let (Some(f), Some(m)) = (locals.get(false_name), locals.get(missing_name)) {
                let invert = |v: &[f64]| v.iter().map(|x| 1.0 - x).collect();
                return Some((entry.id.clone(), invert(f), invert(m)));
            }
        }
    }
    None
}
