//! Shared preprocessing blocks: pairwise distances, pointwise distance
//! rankings, and kNN tables for both spaces.
//!
//! Ties are broken by ascending point index everywhere, so a kNN table at
//! k2 is exactly the first k2 columns of the table at k1 >= k2 and results
//! are bit-identical across runs and worker counts.

use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::PointMatrix;

/// Distance function between points.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Metric {
    Euclidean,
    /// 1 - cosine similarity, clamped to [0, 2].
    Cosine,
}

impl Metric {
    pub fn name(&self) -> &'static str {
        match self {
            Metric::Euclidean => "euclidean",
            Metric::Cosine => "cosine",
        }
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "euclidean" => Ok(Metric::Euclidean),
            "cosine" => Ok(Metric::Cosine),
            other => Err(Error::Config(format!(
                "unknown metric {other:?} (expected euclidean or cosine)"
            ))),
        }
    }
}

/// Dense symmetric N x N distance matrix with zero diagonal.
#[derive(Clone, Debug)]
pub struct DistanceMatrix {
    values: Vec<f64>,
    n: usize,
    metric: Metric,
}

impl DistanceMatrix {
    /// Wrap precomputed values; validates symmetry, diagonal, and sign.
    pub fn from_values(values: Vec<f64>, n: usize, metric: Metric) -> Result<Self> {
        if values.len() != n * n {
            return Err(Error::Shape(format!(
                "{} values for an {n} x {n} matrix",
                values.len()
            )));
        }
        for i in 0..n {
            if values[i * n + i] != 0.0 {
                return Err(Error::Value(format!("nonzero diagonal at {i}")));
            }
            for j in (i + 1)..n {
                let a = values[i * n + j];
                let b = values[j * n + i];
                if a < 0.0 || !a.is_finite() {
                    return Err(Error::Value(format!("bad distance at ({i}, {j}): {a}")));
                }
                if (a - b).abs() > 1e-12 {
                    return Err(Error::Value(format!(
                        "asymmetric at ({i}, {j}): {a} vs {b}"
                    )));
                }
            }
        }
        Ok(Self { values, n, metric })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.n..(i + 1) * self.n]
    }

    /// Largest entry (0 for a fully coincident point set).
    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }
}

/// N x N rank matrix: ranks[i][j] is the position of j in the ascending
/// distance ordering around i (1..N-1, self stored as 0).
#[derive(Clone, Debug)]
pub struct RankMatrix {
    ranks: Vec<u32>,
    n: usize,
}

impl RankMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn rank(&self, i: usize, j: usize) -> u32 {
        self.ranks[i * self.n + j]
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u32] {
        &self.ranks[i * self.n..(i + 1) * self.n]
    }

    /// Invert row `i`: ordering[c] = the point with rank c+1.
    pub fn ordering(&self, i: usize) -> Vec<u32> {
        let row = self.row(i);
        let mut order = vec![0u32; self.n - 1];
        for (j, &r) in row.iter().enumerate() {
            if j != i {
                order[(r - 1) as usize] = j as u32;
            }
        }
        order
    }
}

/// Per-point table of the k nearest neighbors in ascending rank order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KnnTable {
    indices: Vec<u32>,
    n: usize,
    k: usize,
}

impl KnnTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// All k neighbors of point `i`.
    #[inline]
    pub fn neighbors(&self, i: usize) -> &[u32] {
        &self.indices[i * self.k..(i + 1) * self.k]
    }

    /// First `k` neighbors of point `i` (k <= table k).
    #[inline]
    pub fn neighbors_k(&self, i: usize, k: usize) -> &[u32] {
        debug_assert!(k <= self.k);
        &self.indices[i * self.k..i * self.k + k]
    }

    /// Copy of the first k2 columns as a standalone table.
    pub fn slice(&self, k2: usize) -> Result<KnnTable> {
        if k2 > self.k || k2 == 0 {
            return Err(Error::Param(format!(
                "cannot slice k={k2} from a table of k={}",
                self.k
            )));
        }
        let mut indices = Vec::with_capacity(self.n * k2);
        for i in 0..self.n {
            indices.extend_from_slice(self.neighbors_k(i, k2));
        }
        Ok(KnnTable {
            indices,
            n: self.n,
            k: k2,
        })
    }
}

fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = x - y;
            d * d
        })
        .sum::<f64>()
        .sqrt()
}

fn norm(a: &[f64]) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Compute the dense pairwise distance matrix.
pub fn compute_distance_matrix(m: &PointMatrix, metric: Metric) -> DistanceMatrix {
    let n = m.n_points();
    let mut values = vec![0.0f64; n * n];
    match metric {
        Metric::Euclidean => {
            // Upper triangle row-parallel, then a sequential mirror pass.
            values
                .par_chunks_mut(n)
                .enumerate()
                .for_each(|(i, row)| {
                    let a = m.row(i);
                    for (j, slot) in row.iter_mut().enumerate().skip(i + 1) {
                        *slot = euclidean(a, m.row(j));
                    }
                });
        }
        Metric::Cosine => {
            let norms: Vec<f64> = (0..n).map(|i| norm(m.row(i))).collect();
            values
                .par_chunks_mut(n)
                .enumerate()
                .for_each(|(i, row)| {
                    let a = m.row(i);
                    for (j, slot) in row.iter_mut().enumerate().skip(i + 1) {
                        let denom = norms[i] * norms[j];
                        let sim = if denom > 0.0 {
                            a.iter().zip(m.row(j)).map(|(x, y)| x * y).sum::<f64>() / denom
                        } else {
                            0.0
                        };
                        *slot = (1.0 - sim).clamp(0.0, 2.0);
                    }
                });
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            values[j * n + i] = values[i * n + j];
        }
    }
    DistanceMatrix { values, n, metric }
}

/// Rank every point around every point, ties broken by ascending index.
pub fn compute_rank_matrix(d: &DistanceMatrix) -> RankMatrix {
    let n = d.n();
    let mut ranks = vec![0u32; n * n];
    ranks
        .par_chunks_mut(n)
        .enumerate()
        .for_each(|(i, out)| {
            let row = d.row(i);
            let mut order: Vec<u32> = (0..n as u32).filter(|&j| j as usize != i).collect();
            order.sort_unstable_by(|&a, &b| {
                let da = row[a as usize];
                let db = row[b as usize];
                da.partial_cmp(&db).unwrap().then(a.cmp(&b))
            });
            for (pos, &j) in order.iter().enumerate() {
                out[j as usize] = (pos + 1) as u32;
            }
            out[i] = 0;
        });
    RankMatrix { ranks, n }
}

/// kNN table derived from a rank matrix.
pub fn compute_knn(r: &RankMatrix, k: usize) -> Result<KnnTable> {
    let n = r.n();
    check_k(k, n)?;
    let mut indices = vec![0u32; n * k];
    indices
        .par_chunks_mut(k)
        .enumerate()
        .for_each(|(i, out)| {
            let row = r.row(i);
            for (j, &rank) in row.iter().enumerate() {
                if j != i && (rank as usize) <= k {
                    out[(rank - 1) as usize] = j as u32;
                }
            }
        });
    Ok(KnnTable { indices, n, k })
}

/// kNN table computed directly from distances when no rank matrix is kept.
/// Equal to `compute_knn` on the same data by the shared tie-break rule.
pub fn compute_knn_from_distances(d: &DistanceMatrix, k: usize) -> Result<KnnTable> {
    let n = d.n();
    check_k(k, n)?;
    let mut indices = vec![0u32; n * k];
    indices
        .par_chunks_mut(k)
        .enumerate()
        .for_each(|(i, out)| {
            let row = d.row(i);
            let mut cand: Vec<u32> = (0..n as u32).filter(|&j| j as usize != i).collect();
            let cmp = |a: &u32, b: &u32| {
                let da = row[*a as usize];
                let db = row[*b as usize];
                da.partial_cmp(&db).unwrap().then(a.cmp(b))
            };
            if k < cand.len() {
                cand.select_nth_unstable_by(k - 1, cmp);
                cand.truncate(k);
            }
            cand.sort_unstable_by(cmp);
            out.copy_from_slice(&cand);
        });
    Ok(KnnTable { indices, n, k })
}

fn check_k(k: usize, n: usize) -> Result<()> {
    if k < 1 {
        return Err(Error::Param("k must be at least 1".into()));
    }
    if k >= n {
        return Err(Error::Param(format!(
            "k = {k} does not fit a dataset of {n} points (need k <= N-1)"
        )));
    }
    Ok(())
}

/// Preprocessing blocks to retain for a run, derived from a spec.
///
/// Flags mark blocks some measure reads; sources needed only to derive a
/// flagged block (e.g. distances under a rank matrix) are computed
/// transiently inside [`build_cache`] and dropped.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PreprocessPlan {
    pub need_dist_high: bool,
    pub need_dist_low: bool,
    pub need_rank_high: bool,
    pub need_rank_low: bool,
    /// Maximum k over all entries needing kNN in the high space.
    pub knn_k_high: Option<usize>,
    pub knn_k_low: Option<usize>,
    pub metric: Metric,
}

impl PreprocessPlan {
    pub fn empty(metric: Metric) -> Self {
        Self {
            need_dist_high: false,
            need_dist_low: false,
            need_rank_high: false,
            need_rank_low: false,
            knn_k_high: None,
            knn_k_low: None,
            metric,
        }
    }

    /// Number of blocks the plan retains.
    pub fn block_count(&self) -> usize {
        usize::from(self.need_dist_high)
            + usize::from(self.need_dist_low)
            + usize::from(self.need_rank_high)
            + usize::from(self.need_rank_low)
            + usize::from(self.knn_k_high.is_some())
            + usize::from(self.knn_k_low.is_some())
    }
}

/// Blocks for one space.
#[derive(Clone, Debug, Default)]
pub struct SideBlocks {
    pub dist: Option<Arc<DistanceMatrix>>,
    pub rank: Option<Arc<RankMatrix>>,
    pub knn: Option<Arc<KnnTable>>,
}

impl SideBlocks {
    /// Compute the requested blocks for one matrix.
    pub fn build(
        m: &PointMatrix,
        metric: Metric,
        keep_dist: bool,
        keep_rank: bool,
        knn_k: Option<usize>,
    ) -> Result<SideBlocks> {
        let mut out = SideBlocks::default();
        if !(keep_dist || keep_rank || knn_k.is_some()) {
            return Ok(out);
        }
        let dist = compute_distance_matrix(m, metric);
        if keep_rank {
            let rank = compute_rank_matrix(&dist);
            if let Some(k) = knn_k {
                out.knn = Some(Arc::new(compute_knn(&rank, k)?));
            }
            out.rank = Some(Arc::new(rank));
        } else if let Some(k) = knn_k {
            out.knn = Some(Arc::new(compute_knn_from_distances(&dist, k)?));
        }
        if keep_dist {
            out.dist = Some(Arc::new(dist));
        }
        Ok(out)
    }
}

/// Computed preprocessing results for a (high, low) pair, shared read-only
/// by every measure of a run.
#[derive(Clone, Debug, Default)]
pub struct PreprocessCache {
    pub dist_high: Option<Arc<DistanceMatrix>>,
    pub dist_low: Option<Arc<DistanceMatrix>>,
    pub rank_high: Option<Arc<RankMatrix>>,
    pub rank_low: Option<Arc<RankMatrix>>,
    pub knn_high: Option<Arc<KnnTable>>,
    pub knn_low: Option<Arc<KnnTable>>,
}

impl PreprocessCache {
    pub fn from_sides(high: SideBlocks, low: SideBlocks) -> Self {
        Self {
            dist_high: high.dist,
            dist_low: low.dist,
            rank_high: high.rank,
            rank_low: low.rank,
            knn_high: high.knn,
            knn_low: low.knn,
        }
    }

    pub fn dist_high(&self) -> Result<&DistanceMatrix> {
        self.dist_high
            .as_deref()
            .ok_or(Error::MissingBlock("dist_high"))
    }

    pub fn dist_low(&self) -> Result<&DistanceMatrix> {
        self.dist_low
            .as_deref()
            .ok_or(Error::MissingBlock("dist_low"))
    }

    pub fn rank_high(&self) -> Result<&RankMatrix> {
        self.rank_high
            .as_deref()
            .ok_or(Error::MissingBlock("rank_high"))
    }

    pub fn rank_low(&self) -> Result<&RankMatrix> {
        self.rank_low
            .as_deref()
            .ok_or(Error::MissingBlock("rank_low"))
    }

    /// High-space kNN table, which must cover at least `k` columns.
    pub fn knn_high(&self, k: usize) -> Result<&KnnTable> {
        let t = self
            .knn_high
            .as_deref()
            .ok_or(Error::MissingBlock("knn_high"))?;
        if t.k() < k {
            return Err(Error::MissingBlock("knn_high (k too small)"));
        }
        Ok(t)
    }

    pub fn knn_low(&self, k: usize) -> Result<&KnnTable> {
        let t = self
            .knn_low
            .as_deref()
            .ok_or(Error::MissingBlock("knn_low"))?;
        if t.k() < k {
            return Err(Error::MissingBlock("knn_low (k too small)"));
        }
        Ok(t)
    }
}

/// Run preprocessing for a (high, low) pair according to a plan.
pub fn build_cache(
    x: &PointMatrix,
    y: &PointMatrix,
    plan: &PreprocessPlan,
    metric: Metric,
) -> Result<PreprocessCache> {
    x.check_pair(y)?;
    let high = SideBlocks::build(
        x,
        metric,
        plan.need_dist_high,
        plan.need_rank_high,
        plan.knn_k_high,
    )?;
    let low = SideBlocks::build(
        y,
        metric,
        plan.need_dist_low,
        plan.need_rank_low,
        plan.knn_k_low,
    )?;
    Ok(PreprocessCache::from_sides(high, low))
}
