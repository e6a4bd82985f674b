//! Static catalogue of the supported distortion measures.
//!
//! Each entry declares the preprocessing blocks a measure reads, its
//! parameter schema with defaults, whether it needs class labels, whether
//! it yields per-point local distortions, and the orientation of every
//! score it reports. The scheduler derives its preprocessing plan from
//! this table and nothing else.

use serde::Serialize;

use crate::error::{Error, Result};

/// Structural granularity a measure targets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Local,
    Cluster,
    Global,
}

/// A cached preprocessing block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockId {
    DistHigh,
    DistLow,
    RankHigh,
    RankLow,
    KnnHigh,
    KnnLow,
}

/// Whether a larger score means a better embedding.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    HigherBetter,
    LowerBetter,
}

/// Parameter schema: type, default, and admissible range.
#[derive(Clone, Copy, Debug, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ParamKind {
    Int {
        default: i64,
        min: i64,
        /// Inclusive upper bound where one exists independent of N.
        max: Option<i64>,
    },
    Float {
        default: f64,
        /// Exclusive lower bound.
        min_exclusive: f64,
    },
    Choice {
        default: &'static str,
        options: &'static [&'static str],
    },
}

/// One named parameter of a measure.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ParamSpec {
    pub name: &'static str,
    #[serde(flatten)]
    pub kind: ParamKind,
}

/// Registry entry for one measure.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct MeasureDescriptor {
    pub id: &'static str,
    pub family: Family,
    pub requires: &'static [BlockId],
    pub needs_labels: bool,
    pub supports_local: bool,
    pub params: &'static [ParamSpec],
    /// Orientation per reported score name.
    pub orientation: &'static [(&'static str, Orientation)],
}

impl MeasureDescriptor {
    pub fn param(&self, name: &str) -> Option<&ParamSpec> {
        self.params.iter().find(|p| p.name == name)
    }

    /// k-parameterized measures contribute their `k` to the kNN plan.
    pub fn uses_knn(&self) -> bool {
        self.requires
            .iter()
            .any(|b| matches!(b, BlockId::KnnHigh | BlockId::KnnLow))
    }
}

const K20: ParamSpec = ParamSpec {
    name: "k",
    kind: ParamKind::Int {
        default: 20,
        min: 1,
        max: None,
    },
};

const SEED: ParamSpec = ParamSpec {
    name: "seed",
    kind: ParamKind::Int {
        default: 42,
        min: 0,
        max: None,
    },
};

use BlockId::*;
use Orientation::*;

static REGISTRY: &[MeasureDescriptor] = &[
    MeasureDescriptor {
        id: "tnc",
        family: Family::Local,
        requires: &[RankHigh, RankLow, KnnHigh, KnnLow],
        needs_labels: false,
        supports_local: true,
        params: &[K20],
        orientation: &[
            ("trustworthiness", HigherBetter),
            ("continuity", HigherBetter),
        ],
    },
    MeasureDescriptor {
        id: "mrre",
        family: Family::Local,
        requires: &[RankHigh, RankLow, KnnHigh, KnnLow],
        needs_labels: false,
        supports_local: true,
        params: &[K20],
        orientation: &[("mrre_false", HigherBetter), ("mrre_missing", HigherBetter)],
    },
    MeasureDescriptor {
        id: "lcmc",
        family: Family::Local,
        requires: &[KnnHigh, KnnLow],
        needs_labels: false,
        supports_local: true,
        params: &[K20],
        orientation: &[("lcmc", HigherBetter)],
    },
    MeasureDescriptor {
        id: "nh",
        family: Family::Local,
        requires: &[KnnLow],
        needs_labels: true,
        supports_local: true,
        params: &[K20],
        orientation: &[("neighborhood_hit", HigherBetter)],
    },
    MeasureDescriptor {
        id: "nd",
        family: Family::Local,
        requires: &[KnnHigh, KnnLow],
        needs_labels: false,
        supports_local: false,
        params: &[K20],
        orientation: &[("neighbor_dissimilarity", LowerBetter)],
    },
    MeasureDescriptor {
        id: "ca_tnc",
        family: Family::Local,
        requires: &[RankHigh, RankLow, KnnHigh, KnnLow],
        needs_labels: true,
        supports_local: true,
        params: &[K20],
        orientation: &[
            ("ca_trustworthiness", HigherBetter),
            ("ca_continuity", HigherBetter),
        ],
    },
    MeasureDescriptor {
        id: "procrustes",
        family: Family::Local,
        requires: &[KnnHigh],
        needs_labels: false,
        supports_local: false,
        params: &[ParamSpec {
            name: "k",
            kind: ParamKind::Int {
                default: 20,
                min: 2,
                max: None,
            },
        }],
        orientation: &[("procrustes", LowerBetter)],
    },
    MeasureDescriptor {
        id: "snc",
        family: Family::Cluster,
        requires: &[DistHigh, DistLow, KnnHigh, KnnLow],
        needs_labels: false,
        supports_local: true,
        params: &[
            K20,
            ParamSpec {
                name: "iterations",
                kind: ParamKind::Int {
                    default: 200,
                    min: 1,
                    max: None,
                },
            },
            ParamSpec {
                name: "clustering",
                kind: ParamKind::Choice {
                    default: "hdbscan",
                    options: &["hdbscan", "kmeans"],
                },
            },
            ParamSpec {
                name: "min_cluster_size",
                kind: ParamKind::Int {
                    default: 5,
                    min: 2,
                    max: None,
                },
            },
            SEED,
        ],
        orientation: &[("steadiness", HigherBetter), ("cohesiveness", HigherBetter)],
    },
    MeasureDescriptor {
        id: "dsc",
        family: Family::Cluster,
        requires: &[],
        needs_labels: true,
        supports_local: false,
        params: &[],
        orientation: &[("distance_consistency", HigherBetter)],
    },
    MeasureDescriptor {
        id: "ivm",
        family: Family::Cluster,
        requires: &[],
        needs_labels: true,
        supports_local: false,
        params: &[ParamSpec {
            name: "variant",
            kind: ParamKind::Choice {
                default: "silhouette",
                options: &["silhouette", "calinski_harabasz", "davies_bouldin"],
            },
        }],
        orientation: &[("ivm", HigherBetter)],
    },
    MeasureDescriptor {
        id: "cvm",
        family: Family::Cluster,
        requires: &[],
        needs_labels: true,
        supports_local: false,
        params: &[
            ParamSpec {
                name: "external",
                kind: ParamKind::Choice {
                    default: "ari",
                    options: &["ari", "nmi"],
                },
            },
            // 0 means "use the number of label classes".
            ParamSpec {
                name: "n_clusters",
                kind: ParamKind::Int {
                    default: 0,
                    min: 0,
                    max: None,
                },
            },
            SEED,
        ],
        orientation: &[("cvm", HigherBetter)],
    },
    MeasureDescriptor {
        id: "stress",
        family: Family::Global,
        requires: &[DistHigh, DistLow],
        needs_labels: false,
        supports_local: false,
        params: &[],
        orientation: &[("stress", LowerBetter)],
    },
    MeasureDescriptor {
        id: "kl_div",
        family: Family::Global,
        requires: &[DistHigh, DistLow],
        needs_labels: false,
        supports_local: false,
        params: &[ParamSpec {
            name: "sigma",
            kind: ParamKind::Float {
                default: 0.1,
                min_exclusive: 0.0,
            },
        }],
        orientation: &[("kl_divergence", LowerBetter)],
    },
    MeasureDescriptor {
        id: "dtm",
        family: Family::Global,
        requires: &[DistHigh, DistLow],
        needs_labels: false,
        supports_local: false,
        params: &[ParamSpec {
            name: "sigma",
            kind: ParamKind::Float {
                default: 0.1,
                min_exclusive: 0.0,
            },
        }],
        orientation: &[("dtm", LowerBetter)],
    },
    MeasureDescriptor {
        id: "topo",
        family: Family::Global,
        requires: &[DistHigh, DistLow, RankHigh, RankLow],
        needs_labels: false,
        supports_local: false,
        params: &[
            // 0 means "sum neighbor orders up to N-1".
            ParamSpec {
                name: "max_k",
                kind: ParamKind::Int {
                    default: 0,
                    min: 0,
                    max: None,
                },
            },
        ],
        orientation: &[("topographic_product", LowerBetter)],
    },
    MeasureDescriptor {
        id: "pearson_r",
        family: Family::Global,
        requires: &[DistHigh, DistLow],
        needs_labels: false,
        supports_local: false,
        params: &[],
        orientation: &[("pearson_r", HigherBetter)],
    },
    MeasureDescriptor {
        id: "spearman_rho",
        family: Family::Global,
        requires: &[DistHigh, DistLow],
        needs_labels: false,
        supports_local: false,
        params: &[],
        orientation: &[("spearman_rho", HigherBetter)],
    },
];

/// All registered measures, in catalogue order.
pub fn all() -> &'static [MeasureDescriptor] {
    REGISTRY
}

/// Look up a measure by id.
pub fn lookup(id: &str) -> Result<&'static MeasureDescriptor> {
    REGISTRY.iter().find(|d| d.id == id).ok_or_else(|| {
        let valid = REGISTRY
            .iter()
            .map(|d| d.id)
            .collect::<Vec<_>>()
            .join(", ");
        Error::NotFound {
            id: id.to_string(),
            valid,
        }
    })
}
