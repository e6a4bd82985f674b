//! Local measures: preservation of per-point neighborhood structure.
//!
//! All scores are reported higher-is-better except `neighbor_dissimilarity`
//! and `procrustes`, which are error measures (see the registry).

use crate::error::{Error, Result};
use crate::linalg::singular_value_sum;
use crate::matrix::{LabelVector, PointMatrix};
use crate::measures::{mean, MeasureOutput};
use crate::preprocess::PreprocessCache;
use crate::snn::SnnGraph;

fn check_tnc_k(k: usize, n: usize) -> Result<()> {
    if k < 1 {
        return Err(Error::Param("k must be at least 1".into()));
    }
    if 2 * k >= n {
        return Err(Error::Param(format!(
            "k = {k} too large for N = {n}: the rank-penalty normalization needs k < N/2"
        )));
    }
    Ok(())
}

fn check_plain_k(k: usize, n: usize) -> Result<()> {
    if k < 1 {
        return Err(Error::Param("k must be at least 1".into()));
    }
    if k >= n {
        return Err(Error::Param(format!("k = {k} needs at least {} points", k + 1)));
    }
    Ok(())
}

/// Shared penalty accumulator for the trustworthiness family.
///
/// For every point i and every neighbor j in its low-space k-neighborhood
/// that is not in its high-space k-neighborhood, adds r_high(i, j) - k.
/// Swapping the roles of the two spaces yields the continuity side.
/// `accept` filters which violating neighbors are penalized.
fn rank_penalties(
    cache: &PreprocessCache,
    k: usize,
    swap: bool,
    accept: impl Fn(usize, usize) -> bool,
) -> Result<Vec<f64>> {
    let (knn_inner, rank_outer) = if swap {
        (cache.knn_high(k)?, cache.rank_low()?)
    } else {
        (cache.knn_low(k)?, cache.rank_high()?)
    };
    let n = rank_outer.n();
    let mut penalties = vec![0.0; n];
    for (i, slot) in penalties.iter_mut().enumerate() {
        let mut p = 0.0;
        for &j in knn_inner.neighbors_k(i, k) {
            let r = rank_outer.rank(i, j as usize) as usize;
            // r > k means j is not a neighbor of i in the other space.
            if r > k && accept(i, j as usize) {
                p += (r - k) as f64;
            }
        }
        *slot = p;
    }
    Ok(penalties)
}

fn tnc_scores(
    id: &str,
    names: (&str, &str),
    cache: &PreprocessCache,
    k: usize,
    accept: &dyn Fn(usize, usize) -> bool,
    return_local: bool,
) -> Result<MeasureOutput> {
    let n = cache.rank_high()?.n();
    check_tnc_k(k, n)?;
    let scale = 2.0 / (k as f64 * (2.0 * n as f64 - 3.0 * k as f64 - 1.0));
    let mut out = MeasureOutput::new(id);
    for (name, swap) in [(names.0, false), (names.1, true)] {
        let penalties = rank_penalties(cache, k, swap, accept)?;
        let locals: Vec<f64> = penalties.iter().map(|p| 1.0 - scale * p).collect();
        out = out.with_global(name, mean(&locals));
        if return_local {
            out = out.with_local(name, locals);
        }
    }
    Ok(out)
}

/// Trustworthiness & Continuity.
pub fn tnc(cache: &PreprocessCache, k: usize, return_local: bool) -> Result<MeasureOutput> {
    tnc_scores(
        "tnc",
        ("trustworthiness", "continuity"),
        cache,
        k,
        &|_, _| true,
        return_local,
    )
}

/// Class-aware Trustworthiness & Continuity: only inter-class violations
/// are penalized.
pub fn ca_tnc(
    cache: &PreprocessCache,
    k: usize,
    labels: &LabelVector,
    return_local: bool,
) -> Result<MeasureOutput> {
    labels.check_len(cache.rank_high()?.n())?;
    tnc_scores(
        "ca_tnc",
        ("ca_trustworthiness", "ca_continuity"),
        cache,
        k,
        &|i, j| labels.label(i) != labels.label(j),
        return_local,
    )
}

/// Mean Relative Rank Errors, reported as 1 - error per direction.
pub fn mrre(cache: &PreprocessCache, k: usize, return_local: bool) -> Result<MeasureOutput> {
    let rank_high = cache.rank_high()?;
    let rank_low = cache.rank_low()?;
    let n = rank_high.n();
    check_plain_k(k, n)?;
    // Permutation bound per point; the global normalizer is N times this.
    let bound: f64 = (1..=k)
        .map(|l| (n as f64 - 2.0 * l as f64 + 1.0) / l as f64)
        .sum();
    let mut out = MeasureOutput::new("mrre");
    for (name, swap) in [("mrre_false", false), ("mrre_missing", true)] {
        let knn = if swap {
            cache.knn_high(k)?
        } else {
            cache.knn_low(k)?
        };
        let mut locals = vec![0.0; n];
        for (i, local) in locals.iter_mut().enumerate() {
            let mut err = 0.0;
            for &j in knn.neighbors_k(i, k) {
                let rh = rank_high.rank(i, j as usize) as f64;
                let rl = rank_low.rank(i, j as usize) as f64;
                // The denominator is the rank in the space the
                // neighborhood was taken from.
                let denom = if swap { rh } else { rl };
                err += (rh - rl).abs() / denom;
            }
            *local = 1.0 - err / bound;
        }
        out = out.with_global(name, mean(&locals));
        if return_local {
            out = out.with_local(name, locals);
        }
    }
    Ok(out)
}

/// Local Continuity Meta-Criterion: mean k-neighborhood overlap, adjusted
/// for chance.
pub fn lcmc(cache: &PreprocessCache, k: usize, return_local: bool) -> Result<MeasureOutput> {
    let knn_high = cache.knn_high(k)?;
    let knn_low = cache.knn_low(k)?;
    let n = knn_high.n();
    check_plain_k(k, n)?;
    let baseline = k as f64 / (n as f64 - 1.0);
    let mut locals = vec![0.0; n];
    let mut high_sorted = vec![0u32; k];
    for (i, local) in locals.iter_mut().enumerate() {
        high_sorted.copy_from_slice(knn_high.neighbors_k(i, k));
        high_sorted.sort_unstable();
        let overlap = knn_low
            .neighbors_k(i, k)
            .iter()
            .filter(|j| high_sorted.binary_search(j).is_ok())
            .count();
        *local = overlap as f64 / k as f64 - baseline;
    }
    let mut out = MeasureOutput::new("lcmc").with_global("lcmc", mean(&locals));
    if return_local {
        out = out.with_local("lcmc", locals);
    }
    Ok(out)
}

/// Neighborhood Hit: fraction of embedding neighbors sharing the point's
/// class label.
pub fn neighborhood_hit(
    cache: &PreprocessCache,
    k: usize,
    labels: &LabelVector,
    return_local: bool,
) -> Result<MeasureOutput> {
    let knn_low = cache.knn_low(k)?;
    let n = knn_low.n();
    check_plain_k(k, n)?;
    labels.check_len(n)?;
    let mut locals = vec![0.0; n];
    for (i, local) in locals.iter_mut().enumerate() {
        let own = labels.label(i);
        let hits = knn_low
            .neighbors_k(i, k)
            .iter()
            .filter(|&&j| labels.label(j as usize) == own)
            .count();
        *local = hits as f64 / k as f64;
    }
    let mut out =
        MeasureOutput::new("nh").with_global("neighborhood_hit", mean(&locals));
    if return_local {
        out = out.with_local("neighborhood_hit", locals);
    }
    Ok(out)
}

/// Neighbor Dissimilarity: mean absolute difference between the two
/// spaces' normalized SNN graphs. Lower is better; 0 when the graphs agree.
pub fn neighbor_dissimilarity(cache: &PreprocessCache, k: usize) -> Result<MeasureOutput> {
    let knn_high = cache.knn_high(k)?;
    let knn_low = cache.knn_low(k)?;
    check_plain_k(k, knn_high.n())?;
    let g_high = SnnGraph::build(knn_high, k);
    let g_low = SnnGraph::build(knn_low, k);
    let nd = SnnGraph::mean_abs_difference(&g_high, &g_low);
    Ok(MeasureOutput::new("nd").with_global("neighbor_dissimilarity", nd))
}

/// Local Procrustes error: per-point residual of the best similarity
/// alignment of the embedded k-neighborhood onto the original one.
/// Lower is better; 0 when every neighborhood matches up to a similarity
/// transform.
pub fn procrustes(
    cache: &PreprocessCache,
    x: &PointMatrix,
    y: &PointMatrix,
    k: usize,
) -> Result<MeasureOutput> {
    if k < 2 {
        return Err(Error::Param(
            "procrustes needs k >= 2 to align a neighborhood".into(),
        ));
    }
    let knn_high = cache.knn_high(k)?;
    let n = knn_high.n();
    check_plain_k(k, n)?;
    x.check_pair(y)?;
    let (dh, dl) = (x.dim(), y.dim());
    let mut total = 0.0;
    let mut xc = vec![0.0; k * dh];
    let mut yc = vec![0.0; k * dl];
    let mut cross = vec![0.0; dh * dl];
    for i in 0..n {
        let nbrs = knn_high.neighbors_k(i, k);
        center_into(&mut xc, x, nbrs, dh);
        center_into(&mut yc, y, nbrs, dl);
        let sx: f64 = xc.iter().map(|v| v * v).sum();
        let sy: f64 = yc.iter().map(|v| v * v).sum();
        if sx == 0.0 || sy == 0.0 {
            // Zero-variance neighborhood contributes no error by convention.
            continue;
        }
        // cross = Xc^T Yc
        cross.iter_mut().for_each(|v| *v = 0.0);
        for r in 0..k {
            for a in 0..dh {
                let xa = xc[r * dh + a];
                for b in 0..dl {
                    cross[a * dl + b] += xa * yc[r * dl + b];
                }
            }
        }
        let trace = singular_value_sum(&cross, dh, dl);
        let r = (1.0 - (trace * trace) / (sx * sy)).max(0.0);
        total += r;
    }
    Ok(MeasureOutput::new("procrustes").with_global("procrustes", total / n as f64))
}

fn center_into(buf: &mut [f64], m: &PointMatrix, idx: &[u32], dim: usize) {
    let k = idx.len();
    for (r, &p) in idx.iter().enumerate() {
        buf[r * dim..(r + 1) * dim].copy_from_slice(m.row(p as usize));
    }
    for c in 0..dim {
        let mu = (0..k).map(|r| buf[r * dim + c]).sum::<f64>() / k as f64;
        for r in 0..k {
            buf[r * dim + c] -= mu;
        }
    }
}
