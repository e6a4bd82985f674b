//! Spec-driven execution: derives the minimal preprocessing plan for a
//! spec, computes each block once, and injects the shared cache into every
//! measure, returning results in spec order.
//!
//! The high-dimensional dataset is registered once per [`Engine`]; its
//! preprocessing blocks persist across `run` calls so multiple embeddings
//! can be scored against the same original data.

use crate::error::{Error, Result};
use crate::matrix::{LabelVector, PointMatrix};
use crate::measures::cluster::{self, ExternalIndex, InnerClustering, IvmVariant, SncParams};
use crate::measures::{global, local, MeasureOutput};
use crate::preprocess::{build_cache, Metric, PreprocessCache, PreprocessPlan, SideBlocks};
use crate::registry::{self, BlockId};
use crate::spec::{MeasureSpec, ParamValue, SpecEntry};

/// Run-wide options shared by every entry of a spec.
#[derive(Clone, Copy, Debug)]
pub struct RunOptions {
    pub metric: Metric,
    pub return_local: bool,
    /// Seed injected into randomized measures that do not carry an
    /// explicit `seed` parameter.
    pub seed: u64,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            metric: Metric::Euclidean,
            return_local: false,
            seed: 42,
        }
    }
}

/// Derive the minimal set of preprocessing blocks a spec needs.
///
/// kNN requirements are recorded at the maximum k over all entries per
/// space; a measure asking for a smaller k reads a prefix of the shared
/// table.
pub fn derive_plan(spec: &MeasureSpec, metric: Metric) -> Result<PreprocessPlan> {
    spec.validate()?;
    let mut plan = PreprocessPlan::empty(metric);
    for entry in &spec.entries {
        let desc = entry.descriptor()?;
        let k = if desc.uses_knn() {
            let k = entry.int_param("k")?;
            if k < 1 {
                return Err(Error::Param(format!("{}: k must be positive", entry.id)));
            }
            Some(k as usize)
        } else {
            None
        };
        for block in desc.requires {
            match block {
                BlockId::DistHigh => plan.need_dist_high = true,
                BlockId::DistLow => plan.need_dist_low = true,
                BlockId::RankHigh => plan.need_rank_high = true,
                BlockId::RankLow => plan.need_rank_low = true,
                BlockId::KnnHigh => {
                    plan.knn_k_high = Some(plan.knn_k_high.unwrap_or(0).max(k.unwrap()));
                }
                BlockId::KnnLow => {
                    plan.knn_k_low = Some(plan.knn_k_low.unwrap_or(0).max(k.unwrap()));
                }
            }
        }
    }
    Ok(plan)
}

/// A registered dataset plus a validated spec, ready to score embeddings.
pub struct Engine {
    spec: MeasureSpec,
    x: PointMatrix,
    opts: RunOptions,
    plan: PreprocessPlan,
    high: SideBlocks,
}

impl Engine {
    /// Validate the spec, derive the plan, and precompute the high-space
    /// blocks.
    pub fn new(spec: MeasureSpec, x: PointMatrix, opts: RunOptions) -> Result<Engine> {
        let plan = derive_plan(&spec, opts.metric)?;
        let high = SideBlocks::build(
            &x,
            opts.metric,
            plan.need_dist_high,
            plan.need_rank_high,
            plan.knn_k_high,
        )?;
        Ok(Engine {
            spec,
            x,
            opts,
            plan,
            high,
        })
    }

    pub fn spec(&self) -> &MeasureSpec {
        &self.spec
    }

    pub fn plan(&self) -> &PreprocessPlan {
        &self.plan
    }

    pub fn registered_high(&self) -> &PointMatrix {
        &self.x
    }

    /// Score one embedding. Low-space blocks are computed per call; the
    /// registered high-space blocks are reused.
    pub fn run(&self, y: &PointMatrix, labels: Option<&LabelVector>) -> Result<Vec<MeasureOutput>> {
        self.x.check_pair(y)?;
        check_labels(&self.spec, y.n_points(), labels)?;
        let low = SideBlocks::build(
            y,
            self.opts.metric,
            self.plan.need_dist_low,
            self.plan.need_rank_low,
            self.plan.knn_k_low,
        )?;
        let cache = PreprocessCache::from_sides(self.high.clone(), low);
        let ctx = MeasureCtx {
            cache: &cache,
            x: &self.x,
            y,
            labels,
            opts: self.opts,
        };
        self.spec
            .entries
            .iter()
            .enumerate()
            .map(|(i, entry)| dispatch(entry, &ctx).map_err(|e| e.at_entry(i, &entry.id)))
            .collect()
    }
}

/// Fail before the run's preprocessing when a spec entry needs labels
/// that were not supplied.
fn check_labels(spec: &MeasureSpec, n: usize, labels: Option<&LabelVector>) -> Result<()> {
    for entry in &spec.entries {
        if entry.descriptor()?.needs_labels {
            match labels {
                None => {
                    return Err(Error::MissingLabels(format!(
                        "measure {:?} needs class labels",
                        entry.id
                    )))
                }
                Some(l) => l.check_len(n)?,
            }
        }
    }
    Ok(())
}

/// Evaluate a single measure with freshly computed blocks (no reuse).
pub fn run_standalone(
    id: &str,
    params: &SpecEntry,
    x: &PointMatrix,
    y: &PointMatrix,
    labels: Option<&LabelVector>,
    opts: RunOptions,
) -> Result<MeasureOutput> {
    debug_assert_eq!(params.id, id);
    let spec = MeasureSpec::new(vec![params.clone()])?;
    x.check_pair(y)?;
    check_labels(&spec, y.n_points(), labels)?;
    let plan = derive_plan(&spec, opts.metric)?;
    let cache = build_cache(x, y, &plan, opts.metric)?;
    let ctx = MeasureCtx {
        cache: &cache,
        x,
        y,
        labels,
        opts,
    };
    dispatch(&spec.entries[0], &ctx).map_err(|e| e.at_entry(0, id))
}

struct MeasureCtx<'a> {
    cache: &'a PreprocessCache,
    x: &'a PointMatrix,
    y: &'a PointMatrix,
    labels: Option<&'a LabelVector>,
    opts: RunOptions,
}

fn need_labels<'a>(ctx: &MeasureCtx<'a>, id: &str) -> Result<&'a LabelVector> {
    ctx.labels
        .ok_or_else(|| Error::MissingLabels(format!("measure {id:?} needs class labels")))
}

/// Seed resolution: an explicit per-entry seed wins, then the run seed.
fn resolved_seed(entry: &SpecEntry, opts: &RunOptions) -> Result<u64> {
    match entry.params.get("seed") {
        Some(ParamValue::Int(v)) if *v >= 0 => Ok(*v as u64),
        Some(other) => Err(Error::Param(format!(
            "seed must be a non-negative integer, got {other:?}"
        ))),
        None => Ok(opts.seed),
    }
}

fn dispatch(entry: &SpecEntry, ctx: &MeasureCtx<'_>) -> Result<MeasureOutput> {
    let return_local = ctx.opts.return_local;
    match entry.id.as_str() {
        "tnc" => local::tnc(ctx.cache, entry.int_param("k")? as usize, return_local),
        "mrre" => local::mrre(ctx.cache, entry.int_param("k")? as usize, return_local),
        "lcmc" => local::lcmc(ctx.cache, entry.int_param("k")? as usize, return_local),
        "nh" => local::neighborhood_hit(
            ctx.cache,
            entry.int_param("k")? as usize,
            need_labels(ctx, "nh")?,
            return_local,
        ),
        "nd" => local::neighbor_dissimilarity(ctx.cache, entry.int_param("k")? as usize),
        "ca_tnc" => local::ca_tnc(
            ctx.cache,
            entry.int_param("k")? as usize,
            need_labels(ctx, "ca_tnc")?,
            return_local,
        ),
        "procrustes" => {
            local::procrustes(ctx.cache, ctx.x, ctx.y, entry.int_param("k")? as usize)
        }
        "snc" => {
            let params = SncParams {
                k: entry.int_param("k")? as usize,
                iterations: entry.int_param("iterations")? as usize,
                clustering: InnerClustering::from_name(&entry.str_param("clustering")?)?,
                min_cluster_size: entry.int_param("min_cluster_size")? as usize,
                seed: resolved_seed(entry, &ctx.opts)?,
            };
            cluster::snc(ctx.x, ctx.y, ctx.cache, &params, return_local)
        }
        "dsc" => cluster::dsc(ctx.y, need_labels(ctx, "dsc")?),
        "ivm" => cluster::ivm(
            ctx.y,
            need_labels(ctx, "ivm")?,
            IvmVariant::from_name(&entry.str_param("variant")?)?,
        ),
        "cvm" => {
            let n_clusters = match entry.int_param("n_clusters")? {
                0 => None,
                v => Some(v as usize),
            };
            cluster::cvm(
                ctx.y,
                need_labels(ctx, "cvm")?,
                ExternalIndex::from_name(&entry.str_param("external")?)?,
                n_clusters,
                resolved_seed(entry, &ctx.opts)?,
            )
        }
        "stress" => global::stress(ctx.cache),
        "kl_div" => global::kl_div(ctx.cache, entry.float_param("sigma")?),
        "dtm" => global::dtm(ctx.cache, entry.float_param("sigma")?),
        "topo" => {
            let max_k = match entry.int_param("max_k")? {
                0 => None,
                v => Some(v as usize),
            };
            global::topographic_product(ctx.cache, max_k)
        }
        "pearson_r" => global::pearson_r(ctx.cache),
        "spearman_rho" => global::spearman_rho(ctx.cache),
        other => registry::lookup(other).map(|_| unreachable!("registered but not dispatched")),
    }
}
