//! Independent brute-force oracles for every measure.
//!
//! Everything here is transcribed directly from the measure definitions
//! over plain `Vec` data, sharing no code with the library: own distance
//! loops, own argsort ranks, own set operations, and (for the alignment
//! measure) nalgebra's SVD as an independent second route.

#![allow(dead_code)]
#![allow(clippy::needless_range_loop)]

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

pub fn dist_matrix(pts: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = pts.len();
    let mut d = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                d[i][j] = euclid(&pts[i], &pts[j]);
            }
        }
    }
    d
}

/// rank[i][j] = 1-based position of j by distance from i (ties by index).
pub fn rank_matrix(d: &[Vec<f64>]) -> Vec<Vec<usize>> {
    let n = d.len();
    let mut ranks = vec![vec![0usize; n]; n];
    for i in 0..n {
        let mut others: Vec<usize> = (0..n).filter(|&j| j != i).collect();
        others.sort_by(|&a, &b| d[i][a].partial_cmp(&d[i][b]).unwrap().then(a.cmp(&b)));
        for (pos, &j) in others.iter().enumerate() {
            ranks[i][j] = pos + 1;
        }
    }
    ranks
}

/// Top-k ids per point via a max-heap selection, independent of the sort
/// path used elsewhere.
pub fn knn(d: &[Vec<f64>], k: usize) -> Vec<Vec<usize>> {
    use std::collections::BinaryHeap;
    let n = d.len();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        // Max-heap of (distance, index): the worst kept candidate sits on
        // top, and index ties pop the larger index first.
        let mut heap: BinaryHeap<(Ordered, usize)> = BinaryHeap::new();
        for j in 0..n {
            if j == i {
                continue;
            }
            heap.push((Ordered(d[i][j]), j));
            if heap.len() > k {
                heap.pop();
            }
        }
        let mut nbrs: Vec<(f64, usize)> =
            heap.into_iter().map(|(w, j)| (w.0, j)).collect();
        nbrs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
        out.push(nbrs.into_iter().map(|(_, j)| j).collect());
    }
    out
}

// Minimal ordered-float wrapper so distances can live in a heap.
#[derive(PartialEq)]
pub struct Ordered(pub f64);
impl Eq for Ordered {}
impl PartialOrd for Ordered {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Ordered {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.partial_cmp(&other.0).unwrap()
    }
}

pub fn knn_of(pts: &[Vec<f64>], k: usize) -> Vec<Vec<usize>> {
    knn(&dist_matrix(pts), k)
}

/// Trustworthiness & Continuity by direct penalty summation.
pub fn tnc(x: &[Vec<f64>], y: &[Vec<f64>], k: usize) -> (f64, f64) {
    tnc_filtered(x, y, k, |_, _| true)
}

pub fn ca_tnc(x: &[Vec<f64>], y: &[Vec<f64>], labels: &[u32], k: usize) -> (f64, f64) {
    tnc_filtered(x, y, k, |i, j| labels[i] != labels[j])
}

fn tnc_filtered(
    x: &[Vec<f64>],
    y: &[Vec<f64>],
    k: usize,
    count: impl Fn(usize, usize) -> bool,
) -> (f64, f64) {
    let n = x.len();
    let dx = dist_matrix(x);
    let dy = dist_matrix(y);
    let rx = rank_matrix(&dx);
    let ry = rank_matrix(&dy);
    let kx = knn(&dx, k);
    let ky = knn(&dy, k);
    let norm = 2.0 / (n as f64 * k as f64 * (2.0 * n as f64 - 3.0 * k as f64 - 1.0));
    let mut t_sum = 0.0;
    let mut c_sum = 0.0;
    for i in 0..n {
        for &j in &ky[i] {
            if !kx[i].contains(&j) && count(i, j) {
                t_sum += (rx[i][j] - k) as f64;
            }
        }
        for &j in &kx[i] {
            if !ky[i].contains(&j) && count(i, j) {
                c_sum += (ry[i][j] - k) as f64;
            }
        }
    }
    (1.0 - norm * t_sum, 1.0 - norm * c_sum)
}

/// Mean Relative Rank Errors, reported as 1 - normalized error.
pub fn mrre(x: &[Vec<f64>], y: &[Vec<f64>], k: usize) -> (f64, f64) {
    let n = x.len();
    let dx = dist_matrix(x);
    let dy = dist_matrix(y);
    let rx = rank_matrix(&dx);
    let ry = rank_matrix(&dy);
    let kx = knn(&dx, k);
    let ky = knn(&dy, k);
    let h: f64 = n as f64
        * (1..=k)
            .map(|l| (n as f64 - 2.0 * l as f64 + 1.0) / l as f64)
            .sum::<f64>();
    let mut false_err = 0.0;
    let mut missing_err = 0.0;
    for i in 0..n {
        for &j in &ky[i] {
            false_err += (rx[i][j] as f64 - ry[i][j] as f64).abs() / ry[i][j] as f64;
        }
        for &j in &kx[i] {
            missing_err += (rx[i][j] as f64 - ry[i][j] as f64).abs() / rx[i][j] as f64;
        }
    }
    (1.0 - false_err / h, 1.0 - missing_err / h)
}

pub fn lcmc(x: &[Vec<f64>], y: &[Vec<f64>], k: usize) -> f64 {
    let n = x.len();
    let kx = knn_of(x, k);
    let ky = knn_of(y, k);
    let mut overlap = 0usize;
    for i in 0..n {
        overlap += kx[i].iter().filter(|j| ky[i].contains(j)).count();
    }
    overlap as f64 / (n * k) as f64 - k as f64 / (n as f64 - 1.0)
}

pub fn neighborhood_hit(y: &[Vec<f64>], labels: &[u32], k: usize) -> f64 {
    let ky = knn_of(y, k);
    let n = y.len();
    let mut total = 0.0;
    for i in 0..n {
        let hits = ky[i].iter().filter(|&&j| labels[j] == labels[i]).count();
        total += hits as f64 / k as f64;
    }
    total / n as f64
}

/// Dense SNN similarity table normalized by its maximum entry.
pub fn snn_table(pts: &[Vec<f64>], k: usize) -> Vec<Vec<f64>> {
    let n = pts.len();
    let nbrs = knn_of(pts, k);
    let mut s = vec![vec![0.0; n]; n];
    let mut max = 0.0f64;
    for i in 0..n {
        for j in (i + 1)..n {
            let mut acc = 0.0;
            // Shared members visited in ascending id order.
            for m in 0..n {
                let pi = nbrs[i].iter().position(|&v| v == m);
                let pj = nbrs[j].iter().position(|&v| v == m);
                if let (Some(pi), Some(pj)) = (pi, pj) {
                    acc += (k - pi) as f64 * (k - pj) as f64;
                }
            }
            s[i][j] = acc;
            s[j][i] = acc;
            max = max.max(acc);
        }
    }
    if max > 0.0 {
        let scale = 1.0 / max;
        for row in &mut s {
            for v in row.iter_mut() {
                *v *= scale;
            }
        }
    }
    s
}

pub fn neighbor_dissimilarity(x: &[Vec<f64>], y: &[Vec<f64>], k: usize) -> f64 {
    let n = x.len();
    let sx = snn_table(x, k);
    let sy = snn_table(y, k);
    let mut total = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            total += (sx[i][j] - sy[i][j]).abs();
        }
    }
    total / (n * (n - 1) / 2) as f64
}

/// Local Procrustes statistic via nalgebra's SVD.
pub fn procrustes(x: &[Vec<f64>], y: &[Vec<f64>], k: usize) -> f64 {
    let n = x.len();
    let nbrs = knn_of(x, k);
    let (dh, dl) = (x[0].len(), y[0].len());
    let mut total = 0.0;
    for i in 0..n {
        let center = |pts: &[Vec<f64>], dim: usize| -> Vec<f64> {
            let mut buf = vec![0.0; k * dim];
            for (r, &p) in nbrs[i].iter().enumerate() {
                buf[r * dim..(r + 1) * dim].copy_from_slice(&pts[p]);
            }
            for c in 0..dim {
                let mu = (0..k).map(|r| buf[r * dim + c]).sum::<f64>() / k as f64;
                for r in 0..k {
                    buf[r * dim + c] -= mu;
                }
            }
            buf
        };
        let xc = center(x, dh);
        let yc = center(y, dl);
        let sx: f64 = xc.iter().map(|v| v * v).sum();
        let sy: f64 = yc.iter().map(|v| v * v).sum();
        if sx == 0.0 || sy == 0.0 {
            continue;
        }
        let xm = nalgebra::DMatrix::from_row_slice(k, dh, &xc);
        let ym = nalgebra::DMatrix::from_row_slice(k, dl, &yc);
        let cross = xm.transpose() * ym;
        let trace: f64 = cross.singular_values().iter().sum();
        total += 1.0 - trace * trace / (sx * sy);
    }
    total / n as f64
}

pub fn dsc(y: &[Vec<f64>], labels: &[u32]) -> f64 {
    let n = y.len();
    let dim = y[0].len();
    let mut classes: Vec<u32> = labels.to_vec();
    classes.sort_unstable();
    classes.dedup();
    let mut hits = 0usize;
    for i in 0..n {
        let mut best_class = 0u32;
        let mut best = f64::INFINITY;
        for &c in &classes {
            let members: Vec<usize> = (0..n).filter(|&j| labels[j] == c).collect();
            let centroid: Vec<f64> = (0..dim)
                .map(|col| members.iter().map(|&j| y[j][col]).sum::<f64>() / members.len() as f64)
                .collect();
            let d = euclid(&y[i], &centroid);
            if d * d < best {
                best = d * d;
                best_class = c;
            }
        }
        if best_class == labels[i] {
            hits += 1;
        }
    }
    hits as f64 / n as f64
}

pub fn silhouette(y: &[Vec<f64>], labels: &[u32]) -> f64 {
    let n = y.len();
    let d = dist_matrix(y);
    let mut classes: Vec<u32> = labels.to_vec();
    classes.sort_unstable();
    classes.dedup();
    let mut total = 0.0;
    for i in 0..n {
        let own: Vec<usize> = (0..n)
            .filter(|&j| j != i && labels[j] == labels[i])
            .collect();
        if own.is_empty() {
            continue;
        }
        let a = own.iter().map(|&j| d[i][j]).sum::<f64>() / own.len() as f64;
        let mut b = f64::INFINITY;
        for &c in &classes {
            if c == labels[i] {
                continue;
            }
            let other: Vec<usize> = (0..n).filter(|&j| labels[j] == c).collect();
            let m = other.iter().map(|&j| d[i][j]).sum::<f64>() / other.len() as f64;
            b = b.min(m);
        }
        if a.max(b) > 0.0 {
            total += (b - a) / a.max(b);
        }
    }
    total / n as f64
}

pub fn calinski_harabasz(y: &[Vec<f64>], labels: &[u32]) -> f64 {
    let n = y.len();
    let dim = y[0].len();
    let mut classes: Vec<u32> = labels.to_vec();
    classes.sort_unstable();
    classes.dedup();
    let kc = classes.len();
    let global: Vec<f64> =
        (0..dim).map(|c| (0..n).map(|i| y[i][c]).sum::<f64>() / n as f64).collect();
    let mut between = 0.0;
    let mut within = 0.0;
    for &cl in &classes {
        let members: Vec<usize> = (0..n).filter(|&j| labels[j] == cl).collect();
        let mu: Vec<f64> = (0..dim)
            .map(|c| members.iter().map(|&j| y[j][c]).sum::<f64>() / members.len() as f64)
            .collect();
        between += members.len() as f64
            * mu.iter().zip(&global).map(|(a, b)| (a - b) * (a - b)).sum::<f64>();
        for &j in &members {
            within += y[j].iter().zip(&mu).map(|(a, b)| (a - b) * (a - b)).sum::<f64>();
        }
    }
    (between / (kc - 1) as f64) / (within / (n - kc) as f64)
}

pub fn davies_bouldin(y: &[Vec<f64>], labels: &[u32]) -> f64 {
    let n = y.len();
    let dim = y[0].len();
    let mut classes: Vec<u32> = labels.to_vec();
    classes.sort_unstable();
    classes.dedup();
    let centroids: Vec<Vec<f64>> = classes
        .iter()
        .map(|&cl| {
            let members: Vec<usize> = (0..n).filter(|&j| labels[j] == cl).collect();
            (0..dim)
                .map(|c| members.iter().map(|&j| y[j][c]).sum::<f64>() / members.len() as f64)
                .collect()
        })
        .collect();
    let spreads: Vec<f64> = classes
        .iter()
        .enumerate()
        .map(|(ci, &cl)| {
            let members: Vec<usize> = (0..n).filter(|&j| labels[j] == cl).collect();
            members.iter().map(|&j| euclid(&y[j], &centroids[ci])).sum::<f64>()
                / members.len() as f64
        })
        .collect();
    let kc = classes.len();
    let mut total = 0.0;
    for a in 0..kc {
        let mut worst = 0.0f64;
        for b in 0..kc {
            if a != b {
                let m = euclid(&centroids[a], &centroids[b]);
                let s = spreads[a] + spreads[b];
                let r = if m == 0.0 {
                    if s == 0.0 {
                        0.0
                    } else {
                        f64::INFINITY
                    }
                } else {
                    s / m
                };
                worst = worst.max(r);
            }
        }
        total += worst;
    }
    total / kc as f64
}

/// Adjusted Rand Index by direct pair counting over all point pairs.
pub fn ari(a: &[u32], b: &[u32]) -> f64 {
    let n = a.len();
    let mut ss = 0.0; // together in both
    let mut sd = 0.0; // together in a, apart in b
    let mut ds = 0.0;
    let mut dd = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            match (a[i] == a[j], b[i] == b[j]) {
                (true, true) => ss += 1.0,
                (true, false) => sd += 1.0,
                (false, true) => ds += 1.0,
                (false, false) => dd += 1.0,
            }
        }
    }
    let num = 2.0 * (ss * dd - sd * ds);
    let den = (ss + sd) * (sd + dd) + (ss + ds) * (ds + dd);
    if den == 0.0 {
        1.0
    } else {
        num / den
    }
}

/// NMI with arithmetic-mean normalization, from explicit joint counts.
pub fn nmi(a: &[u32], b: &[u32]) -> f64 {
    let n = a.len() as f64;
    let distinct = |v: &[u32]| {
        let mut u = v.to_vec();
        u.sort_unstable();
        u.dedup();
        u
    };
    let ca = distinct(a);
    let cb = distinct(b);
    let count = |v: &[u32], c: u32| v.iter().filter(|&&x| x == c).count() as f64;
    let mut mi = 0.0;
    for &u in &ca {
        for &v in &cb {
            let joint = a
                .iter()
                .zip(b)
                .filter(|&(&x, &y)| x == u && y == v)
                .count() as f64;
            if joint > 0.0 {
                let p = joint / n;
                mi += p * ((n * joint) / (count(a, u) * count(b, v))).ln();
            }
        }
    }
    let ent = |v: &[u32], cs: &[u32]| -> f64 {
        cs.iter()
            .map(|&c| {
                let p = count(v, c) / n;
                if p > 0.0 {
                    -p * p.ln()
                } else {
                    0.0
                }
            })
            .sum()
    };
    let norm = 0.5 * (ent(a, &ca) + ent(b, &cb));
    if norm == 0.0 {
        1.0
    } else {
        (mi / norm).clamp(0.0, 1.0)
    }
}

/// Deterministic k-means transcription matching the pinned protocol.
pub fn kmeans(pts: &[Vec<f64>], k: usize, seed: u64) -> Vec<usize> {
    let n = pts.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centers: Vec<Vec<f64>> = Vec::with_capacity(k);
    centers.push(pts[rng.random_range(0..n)].clone());
    let sq = |a: &[f64], b: &[f64]| -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
    };
    let mut min_d = vec![f64::INFINITY; n];
    while centers.len() < k {
        let last = centers.last().unwrap();
        for i in 0..n {
            min_d[i] = min_d[i].min(sq(&pts[i], last));
        }
        let mut pick = 0;
        let mut best = -1.0;
        for i in 0..n {
            if min_d[i] > best {
                best = min_d[i];
                pick = i;
            }
        }
        centers.push(pts[pick].clone());
    }
    let mut assign = vec![0usize; n];
    let mut prev = f64::INFINITY;
    for _ in 0..300 {
        let mut inertia = 0.0;
        for i in 0..n {
            let mut bc = 0;
            let mut bd = f64::INFINITY;
            for (c, center) in centers.iter().enumerate() {
                let d = sq(&pts[i], center);
                if d < bd {
                    bd = d;
                    bc = c;
                }
            }
            assign[i] = bc;
            inertia += bd;
        }
        let mut counts = vec![0usize; k];
        for &a in &assign {
            counts[a] += 1;
        }
        for c in 0..k {
            if counts[c] == 0 {
                let mut far = 0;
                let mut fd = -1.0;
                for i in 0..n {
                    if counts[assign[i]] > 1 {
                        let d = sq(&pts[i], &centers[assign[i]]);
                        if d > fd {
                            fd = d;
                            far = i;
                        }
                    }
                }
                counts[assign[far]] -= 1;
                assign[far] = c;
                counts[c] = 1;
            }
        }
        for (c, center) in centers.iter_mut().enumerate() {
            center.iter_mut().for_each(|v| *v = 0.0);
            for i in 0..n {
                if assign[i] == c {
                    for (cc, v) in pts[i].iter().enumerate() {
                        center[cc] += v;
                    }
                }
            }
            center.iter_mut().for_each(|v| *v /= counts[c] as f64);
        }
        if prev.is_finite() && (prev - inertia).abs() <= 1e-6 * prev.max(f64::MIN_POSITIVE) {
            break;
        }
        prev = inertia;
    }
    assign
}

pub fn cvm(y: &[Vec<f64>], labels: &[u32], external: &str, n_clusters: usize, seed: u64) -> f64 {
    let assign = kmeans(y, n_clusters, seed);
    let assign: Vec<u32> = assign.iter().map(|&a| a as u32).collect();
    match external {
        "ari" => ari(labels, &assign),
        "nmi" => nmi(labels, &assign),
        other => panic!("unknown external index {other}"),
    }
}

pub fn stress(x: &[Vec<f64>], y: &[Vec<f64>]) -> f64 {
    let n = x.len();
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let a = euclid(&x[i], &x[j]);
            let b = euclid(&y[i], &y[j]);
            num += (a - b) * (a - b);
            den += a * a;
        }
    }
    (num / den).sqrt()
}

fn density(pts: &[Vec<f64>], sigma: f64) -> Vec<f64> {
    let n = pts.len();
    let d = dist_matrix(pts);
    let max = d
        .iter()
        .flat_map(|r| r.iter())
        .copied()
        .fold(0.0, f64::max);
    let mut rho: Vec<f64> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| j != i)
                .map(|j| {
                    let t = d[i][j] / max / sigma;
                    (-t * t).exp()
                })
                .sum()
        })
        .collect();
    let total: f64 = rho.iter().sum();
    rho.iter_mut().for_each(|v| *v /= total);
    rho
}

pub fn kl_div(x: &[Vec<f64>], y: &[Vec<f64>], sigma: f64) -> f64 {
    let p = density(x, sigma);
    let q = density(y, sigma);
    p.iter().zip(&q).map(|(&a, &b)| a * (a / b).ln()).sum()
}

pub fn dtm(x: &[Vec<f64>], y: &[Vec<f64>], sigma: f64) -> f64 {
    let p = density(x, sigma);
    let q = density(y, sigma);
    p.iter()
        .zip(&q)
        .map(|(&a, &b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
}

/// Topographic product in its product form (ratios multiplied, then the
/// 2k-th root), a different route than incremental log sums.
pub fn topographic_product(x: &[Vec<f64>], y: &[Vec<f64>]) -> f64 {
    let n = x.len();
    let dx = dist_matrix(x);
    let dy = dist_matrix(y);
    let rx = rank_matrix(&dx);
    let ry = rank_matrix(&dy);
    // order[i][l] = the (l+1)-th neighbor of i
    let order = |ranks: &[Vec<usize>]| -> Vec<Vec<usize>> {
        (0..n)
            .map(|i| {
                let mut o = vec![0usize; n - 1];
                for j in 0..n {
                    if j != i {
                        o[ranks[i][j] - 1] = j;
                    }
                }
                o
            })
            .collect()
    };
    let oh = order(&rx);
    let ol = order(&ry);
    let mut total = 0.0;
    for i in 0..n {
        for k in 1..n {
            let mut prod = 1.0;
            for l in 0..k {
                let q1 = dx[i][ol[i][l]] / dx[i][oh[i][l]];
                let q2 = dy[i][ol[i][l]] / dy[i][oh[i][l]];
                prod *= q1 * q2;
            }
            total += prod.powf(1.0 / (2.0 * k as f64)).ln();
        }
    }
    total / (n * (n - 1)) as f64
}

fn pair_vector(pts: &[Vec<f64>]) -> Vec<f64> {
    let n = pts.len();
    let mut v = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            v.push(euclid(&pts[i], &pts[j]));
        }
    }
    v
}

/// Textbook n-form Pearson correlation.
fn pearson_vec(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let sx: f64 = a.iter().sum();
    let sy: f64 = b.iter().sum();
    let sxy: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let sxx: f64 = a.iter().map(|x| x * x).sum();
    let syy: f64 = b.iter().map(|y| y * y).sum();
    (n * sxy - sx * sy) / ((n * sxx - sx * sx).sqrt() * (n * syy - sy * sy).sqrt())
}

pub fn pearson_r(x: &[Vec<f64>], y: &[Vec<f64>]) -> f64 {
    pearson_vec(&pair_vector(x), &pair_vector(y))
}

fn tied_ranks(v: &[f64]) -> Vec<f64> {
    let m = v.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| v[a].partial_cmp(&v[b]).unwrap());
    let mut ranks = vec![0.0; m];
    let mut i = 0;
    while i < m {
        let mut j = i;
        while j + 1 < m && v[order[j + 1]] == v[order[i]] {
            j += 1;
        }
        let avg = (i + j + 2) as f64 / 2.0;
        for &o in &order[i..=j] {
            ranks[o] = avg;
        }
        i = j + 1;
    }
    ranks
}

pub fn spearman_rho(x: &[Vec<f64>], y: &[Vec<f64>]) -> f64 {
    pearson_vec(&tied_ranks(&pair_vector(x)), &tied_ranks(&pair_vector(y)))
}

/// Full transcription of the steadiness/cohesiveness procedure, matching
/// the pinned RNG protocol draw for draw.
pub fn snc(
    x: &[Vec<f64>],
    y: &[Vec<f64>],
    k: usize,
    iterations: usize,
    clustering: &str,
    min_size: usize,
    seed: u64,
) -> (f64, f64) {
    let n = x.len();
    let dx = dist_matrix(x);
    let dy = dist_matrix(y);
    let s_high = snn_table(x, k);
    let s_low = snn_table(y, k);
    // Sorted adjacency (ascending id) of strictly positive similarities.
    let adj = |s: &Vec<Vec<f64>>| -> Vec<Vec<(usize, f64)>> {
        (0..n)
            .map(|i| {
                (0..n)
                    .filter(|&j| j != i && s[i][j] > 0.0)
                    .map(|j| (j, s[i][j]))
                    .collect()
            })
            .collect()
    };
    let adj_high = adj(&s_high);
    let adj_low = adj(&s_low);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let run = |seed_adj: &Vec<Vec<(usize, f64)>>,
                   seed_s: &Vec<Vec<f64>>,
                   check_s: &Vec<Vec<f64>>,
                   check_d: &Vec<Vec<f64>>,
                   check_pts: &[Vec<f64>],
                   rng: &mut ChaCha8Rng|
     -> f64 {
        let mut acc = vec![0.0; n];
        let mut wgt = vec![0.0; n];
        for _ in 0..iterations {
            // Random walk.
            let start = rng.random_range(0..n);
            let mut members = vec![start];
            let mut cur = start;
            for _ in 0..30 {
                let nbrs = &seed_adj[cur];
                if nbrs.is_empty() {
                    break;
                }
                let total: f64 = nbrs.iter().map(|&(_, w)| w).sum();
                let target = rng.random::<f64>() * total;
                let mut cum = 0.0;
                let mut chosen = nbrs[nbrs.len() - 1].0;
                for &(j, w) in nbrs {
                    cum += w;
                    if target < cum {
                        chosen = j;
                        break;
                    }
                }
                if !members.contains(&chosen) {
                    members.push(chosen);
                }
                cur = chosen;
            }
            members.sort_unstable();
            if members.len() < 2 {
                continue;
            }
            let labels = match clustering {
                "hdbscan" => mst_partition(&members, check_d, min_size),
                "kmeans" => {
                    let sub_seed = rng.next_u64();
                    let pts: Vec<Vec<f64>> =
                        members.iter().map(|&p| check_pts[p].clone()).collect();
                    kmeans(&pts, 2.min(members.len()), sub_seed)
                }
                other => panic!("unknown clustering {other}"),
            };
            // Parts in first-appearance order over ascending members.
            let mut seen: Vec<usize> = Vec::new();
            let mut parts: Vec<Vec<usize>> = Vec::new();
            for (pos, &p) in members.iter().enumerate() {
                match seen.iter().position(|&s| s == labels[pos]) {
                    Some(idx) => parts[idx].push(p),
                    None => {
                        seen.push(labels[pos]);
                        parts.push(vec![p]);
                    }
                }
            }
            if parts.len() < 2 {
                continue;
            }
            for a in 0..parts.len() {
                for b in (a + 1)..parts.len() {
                    let pair_mean = |s: &Vec<Vec<f64>>| -> f64 {
                        let mut t = 0.0;
                        for &p in &parts[a] {
                            for &q in &parts[b] {
                                t += 1.0 - s[p][q];
                            }
                        }
                        t / (parts[a].len() * parts[b].len()) as f64
                    };
                    let delta = (pair_mean(check_s) - pair_mean(seed_s)).max(0.0);
                    let (na, nb) = (parts[a].len() as f64, parts[b].len() as f64);
                    for &p in &parts[a] {
                        acc[p] += nb * delta;
                        wgt[p] += nb;
                    }
                    for &q in &parts[b] {
                        acc[q] += na * delta;
                        wgt[q] += na;
                    }
                }
            }
        }
        let shares: Vec<f64> = (0..n)
            .map(|p| if wgt[p] > 0.0 { acc[p] / wgt[p] } else { 0.0 })
            .collect();
        1.0 - shares.iter().sum::<f64>() / n as f64
    };
    let steadiness = run(&adj_low, &s_low, &s_high, &dx, x, &mut rng);
    let cohesiveness = run(&adj_high, &s_high, &s_low, &dy, y, &mut rng);
    (steadiness, cohesiveness)
}

/// Single-linkage MST partitioner: cut edges above mean + 2 std, then
/// fold fragments below the size floor into their single-link nearest
/// component. Labels are canonical minimum member positions.
fn mst_partition(members: &[usize], d: &[Vec<f64>], min_size: usize) -> Vec<usize> {
    let m = members.len();
    let mut in_tree = vec![false; m];
    let mut best = vec![f64::INFINITY; m];
    let mut parent = vec![0usize; m];
    in_tree[0] = true;
    for j in 1..m {
        best[j] = d[members[0]][members[j]];
    }
    let mut edges = Vec::new();
    for _ in 1..m {
        let mut pick = usize::MAX;
        let mut pd = f64::INFINITY;
        for j in 0..m {
            if !in_tree[j] && best[j] < pd {
                pd = best[j];
                pick = j;
            }
        }
        in_tree[pick] = true;
        edges.push((pd, parent[pick], pick));
        for j in 0..m {
            if !in_tree[j] {
                let w = d[members[pick]][members[j]];
                if w < best[j] {
                    best[j] = w;
                    parent[j] = pick;
                }
            }
        }
    }
    let mu = edges.iter().map(|e| e.0).sum::<f64>() / edges.len() as f64;
    let sd = (edges.iter().map(|e| (e.0 - mu) * (e.0 - mu)).sum::<f64>() / edges.len() as f64)
        .sqrt();
    let threshold = mu + 2.0 * sd;
    // Components of the kept edges by repeated relabeling to the minimum.
    let mut labels: Vec<usize> = (0..m).collect();
    loop {
        let mut changed = false;
        for &(w, a, b) in &edges {
            if w <= threshold && labels[a] != labels[b] {
                let t = labels[a].min(labels[b]);
                let from = labels[a].max(labels[b]);
                for l in labels.iter_mut() {
                    if *l == from {
                        *l = t;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    loop {
        let mut sizes: std::collections::BTreeMap<usize, usize> = Default::default();
        for &l in &labels {
            *sizes.entry(l).or_insert(0) += 1;
        }
        if sizes.len() < 2 {
            break;
        }
        let (frag, size) = sizes
            .iter()
            .min_by_key(|&(l, s)| (*s, *l))
            .map(|(l, s)| (*l, *s))
            .unwrap();
        if size >= min_size {
            break;
        }
        let mut nearest = usize::MAX;
        let mut nd = f64::INFINITY;
        for j in 0..m {
            if labels[j] != frag {
                continue;
            }
            for q in 0..m {
                if labels[q] == frag {
                    continue;
                }
                let w = d[members[j]][members[q]];
                if w < nd || (w == nd && labels[q] < nearest) {
                    nd = w;
                    nearest = labels[q];
                }
            }
        }
        let target = frag.min(nearest);
        for l in labels.iter_mut() {
            if *l == frag || *l == nearest {
                *l = target;
            }
        }
    }
    labels
}
