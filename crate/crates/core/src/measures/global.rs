//! Global measures: consistency of the full pairwise-distance structure.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::measures::MeasureOutput;
use crate::preprocess::{DistanceMatrix, PreprocessCache};

/// Normalized stress over all point pairs. 0 iff every pairwise distance
/// is preserved exactly; lower is better.
pub fn stress(cache: &PreprocessCache) -> Result<MeasureOutput> {
    let dh = cache.dist_high()?;
    let dl = cache.dist_low()?;
    let n = dh.n();
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let a = dh.get(i, j);
            let b = dl.get(i, j);
            num += (a - b) * (a - b);
            den += a * a;
        }
    }
    if den == 0.0 {
        return Err(Error::DegenerateInput(
            "all original points coincide; stress undefined".into(),
        ));
    }
    Ok(MeasureOutput::new("stress").with_global("stress", (num / den).sqrt()))
}

/// Per-point Gaussian density estimates, normalized to sum to one.
/// Distances are scaled by the space's maximum distance first so `sigma`
/// is dimensionless.
fn density_vector(d: &DistanceMatrix, sigma: f64) -> Result<Vec<f64>> {
    let n = d.n();
    let max = d.max_value();
    if max == 0.0 {
        return Err(Error::DegenerateInput(
            "all points coincide; density estimate undefined".into(),
        ));
    }
    let inv = 1.0 / (max * sigma);
    let mut rho: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let row = d.row(i);
            let mut s = 0.0;
            for (j, &v) in row.iter().enumerate() {
                if j != i {
                    let t = v * inv;
                    s += (-t * t).exp();
                }
            }
            s
        })
        .collect();
    let total: f64 = rho.iter().sum();
    rho.iter_mut().for_each(|v| *v /= total);
    Ok(rho)
}

fn check_sigma(sigma: f64) -> Result<()> {
    if !sigma.is_finite() || sigma <= 0.0 {
        return Err(Error::Param(format!("sigma must be positive, got {sigma}")));
    }
    Ok(())
}

/// Kullback-Leibler divergence between the two spaces' density profiles.
/// Nonnegative; 0 iff the profiles coincide. Lower is better.
pub fn kl_div(cache: &PreprocessCache, sigma: f64) -> Result<MeasureOutput> {
    check_sigma(sigma)?;
    let rho_high = density_vector(cache.dist_high()?, sigma)?;
    let rho_low = density_vector(cache.dist_low()?, sigma)?;
    let kl: f64 = rho_high
        .iter()
        .zip(&rho_low)
        .map(|(&p, &q)| p * (p / q).ln())
        .sum();
    Ok(MeasureOutput::new("kl_div").with_global("kl_divergence", kl))
}

/// L2 distance between the two spaces' density profiles. Lower is better.
pub fn dtm(cache: &PreprocessCache, sigma: f64) -> Result<MeasureOutput> {
    check_sigma(sigma)?;
    let rho_high = density_vector(cache.dist_high()?, sigma)?;
    let rho_low = density_vector(cache.dist_low()?, sigma)?;
    let sq: f64 = rho_high
        .iter()
        .zip(&rho_low)
        .map(|(&p, &q)| (p - q) * (p - q))
        .sum();
    Ok(MeasureOutput::new("dtm").with_global("dtm", sq.sqrt()))
}

/// Topographic product. 0 for a perfect embedding; the sign indicates
/// whether the embedding dimension is too low or too high.
///
/// `max_k = None` sums neighbor orders up to N-1 (the full definition);
/// a smaller value truncates, normalizing by N * max_k.
pub fn topographic_product(
    cache: &PreprocessCache,
    max_k: Option<usize>,
) -> Result<MeasureOutput> {
    let dh = cache.dist_high()?;
    let dl = cache.dist_low()?;
    let rank_high = cache.rank_high()?;
    let rank_low = cache.rank_low()?;
    let n = dh.n();
    let k_max = match max_k {
        None => n - 1,
        Some(m) if m >= 1 && m < n => m,
        Some(m) => {
            return Err(Error::Param(format!(
                "max_k = {m} out of range 1..={}",
                n - 1
            )))
        }
    };
    let per_point: Vec<Result<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let order_high = rank_high.ordering(i);
            let order_low = rank_low.ordering(i);
            let mut log_sum = 0.0; // running sum of ln Q1 + ln Q2 over l
            let mut acc = 0.0;
            for l in 0..k_max {
                let nh = order_high[l] as usize;
                let nl = order_low[l] as usize;
                let q1_num = dh.get(i, nl);
                let q1_den = dh.get(i, nh);
                let q2_num = dl.get(i, nl);
                let q2_den = dl.get(i, nh);
                for (v, j) in [(q1_num, nl), (q1_den, nh), (q2_num, nl), (q2_den, nh)] {
                    if v == 0.0 {
                        return Err(Error::DegenerateInput(format!(
                            "duplicate points {i} and {j}: zero distance in a neighbor ratio"
                        )));
                    }
                }
                log_sum += (q1_num / q1_den).ln() + (q2_num / q2_den).ln();
                // ln P3(i, l+1) = log_sum / (2 (l+1))
                acc += log_sum / (2.0 * (l + 1) as f64);
            }
            Ok(acc)
        })
        .collect();
    let mut total = 0.0;
    for r in per_point {
        total += r?;
    }
    let p = total / (n as f64 * k_max as f64);
    Ok(MeasureOutput::new("topo").with_global("topographic_product", p))
}

fn upper_triangle(d: &DistanceMatrix) -> Vec<f64> {
    let n = d.n();
    let mut v = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            v.push(d.get(i, j));
        }
    }
    v
}

fn pearson(a: &[f64], b: &[f64]) -> Result<f64> {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut va = 0.0;
    let mut vb = 0.0;
    for (&x, &y) in a.iter().zip(b) {
        cov += (x - ma) * (y - mb);
        va += (x - ma) * (x - ma);
        vb += (y - mb) * (y - mb);
    }
    if va == 0.0 || vb == 0.0 {
        return Err(Error::DegenerateInput(
            "zero variance in a pairwise-distance vector".into(),
        ));
    }
    Ok(cov / (va.sqrt() * vb.sqrt()))
}

/// Pearson correlation between the two pairwise-distance vectors.
pub fn pearson_r(cache: &PreprocessCache) -> Result<MeasureOutput> {
    let a = upper_triangle(cache.dist_high()?);
    let b = upper_triangle(cache.dist_low()?);
    Ok(MeasureOutput::new("pearson_r").with_global("pearson_r", pearson(&a, &b)?))
}

/// Average ranks with midpoint tie handling.
fn average_ranks(values: &[f64]) -> Vec<f64> {
    let m = values.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_unstable_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap().then(a.cmp(&b)));
    let mut ranks = vec![0.0; m];
    let mut start = 0;
    while start < m {
        let mut end = start + 1;
        while end < m && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // 1-based positions start+1 ..= end share the midpoint rank.
        let avg = (start + 1 + end) as f64 / 2.0;
        for &idx in &order[start..end] {
            ranks[idx] = avg;
        }
        start = end;
    }
    ranks
}

/// Spearman rank correlation between the two pairwise-distance vectors.
pub fn spearman_rho(cache: &PreprocessCache) -> Result<MeasureOutput> {
    let a = average_ranks(&upper_triangle(cache.dist_high()?));
    let b = average_ranks(&upper_triangle(cache.dist_low()?));
    Ok(MeasureOutput::new("spearman_rho").with_global("spearman_rho", pearson(&a, &b)?))
}
