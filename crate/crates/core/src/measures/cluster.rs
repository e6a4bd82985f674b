//! Cluster-level measures: preservation of group structure, with groups
//! taken from class labels or discovered by clustering.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::{LabelVector, PointMatrix};
use crate::measures::{mean, MeasureOutput};
use crate::preprocess::{compute_distance_matrix, DistanceMatrix, Metric, PreprocessCache};
use crate::snn::SnnGraph;

/// Inner partitioner used by the steadiness/cohesiveness rounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InnerClustering {
    /// Density-flavored single-linkage partitioner ("hdbscan" in specs).
    Density,
    /// Deterministic 2-means on the check-space coordinates.
    KMeans,
}

impl InnerClustering {
    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "hdbscan" => Ok(InnerClustering::Density),
            "kmeans" => Ok(InnerClustering::KMeans),
            other => Err(Error::Param(format!(
                "unknown clustering algorithm {other:?} (expected hdbscan or kmeans)"
            ))),
        }
    }
}

/// Parameters for [`snc`].
#[derive(Clone, Copy, Debug)]
pub struct SncParams {
    pub k: usize,
    pub iterations: usize,
    pub clustering: InnerClustering,
    pub min_cluster_size: usize,
    pub seed: u64,
}

impl Default for SncParams {
    fn default() -> Self {
        Self {
            k: 20,
            iterations: 200,
            clustering: InnerClustering::Density,
            min_cluster_size: 5,
            seed: 42,
        }
    }
}

const WALK_STEPS: usize = 30;

/// Steadiness & Cohesiveness.
///
/// Each round extracts a candidate cluster by a weighted random walk on
/// one space's SNN graph and partitions it in the other space. A pair of
/// separated partitions is charged the amount by which their mean SNN
/// distance grew in the checking space, weighted by partition sizes.
/// Steadiness seeds rounds in the embedding and checks in the original
/// space (false clusters); cohesiveness is the reverse (missing clusters).
/// Both scores are 1 - mean per-point distortion share, in [0, 1].
pub fn snc(
    x: &PointMatrix,
    y: &PointMatrix,
    cache: &PreprocessCache,
    params: &SncParams,
    return_local: bool,
) -> Result<MeasureOutput> {
    if params.iterations < 1 {
        return Err(Error::Param("iterations must be at least 1".into()));
    }
    let k = params.k;
    let knn_high = cache.knn_high(k)?;
    let knn_low = cache.knn_low(k)?;
    let n = knn_high.n();
    let g_high = SnnGraph::build(knn_high, k);
    let g_low = SnnGraph::build(knn_low, k);
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);

    let steadiness_ctx = DirectionCtx {
        seed_graph: &g_low,
        check_graph: &g_high,
        check_dist: cache.dist_high()?,
        check_coords: x,
    };
    let steadiness_locals = run_direction(&steadiness_ctx, params, &mut rng, n);
    let cohesiveness_ctx = DirectionCtx {
        seed_graph: &g_high,
        check_graph: &g_low,
        check_dist: cache.dist_low()?,
        check_coords: y,
    };
    let cohesiveness_locals = run_direction(&cohesiveness_ctx, params, &mut rng, n);

    let mut out = MeasureOutput::new("snc")
        .with_global("steadiness", mean(&steadiness_locals))
        .with_global("cohesiveness", mean(&cohesiveness_locals));
    if return_local {
        out = out
            .with_local("steadiness", steadiness_locals)
            .with_local("cohesiveness", cohesiveness_locals);
    }
    Ok(out)
}

struct DirectionCtx<'a> {
    seed_graph: &'a SnnGraph,
    check_graph: &'a SnnGraph,
    check_dist: &'a DistanceMatrix,
    check_coords: &'a PointMatrix,
}

fn run_direction(
    ctx: &DirectionCtx<'_>,
    params: &SncParams,
    rng: &mut ChaCha8Rng,
    n: usize,
) -> Vec<f64> {
    let mut acc = vec![0.0; n];
    let mut weight = vec![0.0; n];
    for _ in 0..params.iterations {
        let members = extract_cluster(ctx.seed_graph, rng, n);
        if members.len() < 2 {
            continue;
        }
        let labels = match params.clustering {
            InnerClustering::Density => {
                density_partition(&members, ctx.check_dist, params.min_cluster_size)
            }
            InnerClustering::KMeans => {
                let sub_seed = rng.next_u64();
                partition_by_kmeans(&members, ctx.check_coords, sub_seed)
            }
        };
        let parts = group_parts(&members, &labels);
        if parts.len() < 2 {
            continue;
        }
        for a in 0..parts.len() {
            for b in (a + 1)..parts.len() {
                let d_check = mean_snn_distance(ctx.check_graph, &parts[a], &parts[b]);
                let d_seed = mean_snn_distance(ctx.seed_graph, &parts[a], &parts[b]);
                let delta = (d_check - d_seed).max(0.0);
                let (na, nb) = (parts[a].len() as f64, parts[b].len() as f64);
                for &p in &parts[a] {
                    acc[p] += nb * delta;
                    weight[p] += nb;
                }
                for &q in &parts[b] {
                    acc[q] += na * delta;
                    weight[q] += na;
                }
            }
        }
    }
    (0..n)
        .map(|p| {
            let share = if weight[p] > 0.0 { acc[p] / weight[p] } else { 0.0 };
            1.0 - share
        })
        .collect()
}

/// Weighted random walk on the SNN graph; the visited set is the cluster.
fn extract_cluster(graph: &SnnGraph, rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let start = rng.random_range(0..n);
    let mut in_set = vec![false; n];
    let mut members = vec![start];
    in_set[start] = true;
    let mut cur = start;
    for _ in 0..WALK_STEPS {
        let nbrs = graph.neighbors(cur);
        if nbrs.is_empty() {
            break;
        }
        let total: f64 = nbrs.iter().map(|&(_, w)| w).sum();
        let target = rng.random::<f64>() * total;
        let mut cum = 0.0;
        let mut chosen = nbrs[nbrs.len() - 1].0 as usize;
        for &(j, w) in nbrs {
            cum += w;
            if target < cum {
                chosen = j as usize;
                break;
            }
        }
        if !in_set[chosen] {
            in_set[chosen] = true;
            members.push(chosen);
        }
        cur = chosen;
    }
    members.sort_unstable();
    members
}

/// Partition members by cutting long single-linkage (MST) edges, merging
/// undersized fragments into their single-link nearest component.
fn density_partition(members: &[usize], dist: &DistanceMatrix, min_size: usize) -> Vec<usize> {
    let m = members.len();
    if m < 2 {
        return vec![0; m];
    }
    // Prim's MST over the member subset.
    let mut in_tree = vec![false; m];
    let mut best = vec![f64::INFINITY; m];
    let mut parent = vec![0usize; m];
    in_tree[0] = true;
    for j in 1..m {
        best[j] = dist.get(members[0], members[j]);
    }
    let mut edges: Vec<(f64, usize, usize)> = Vec::with_capacity(m - 1);
    for _ in 1..m {
        let mut pick = usize::MAX;
        let mut pick_d = f64::INFINITY;
        for j in 0..m {
            if !in_tree[j] && best[j] < pick_d {
                pick_d = best[j];
                pick = j;
            }
        }
        in_tree[pick] = true;
        edges.push((pick_d, parent[pick], pick));
        for j in 0..m {
            if !in_tree[j] {
                let d = dist.get(members[pick], members[j]);
                if d < best[j] {
                    best[j] = d;
                    parent[j] = pick;
                }
            }
        }
    }
    let mu = edges.iter().map(|e| e.0).sum::<f64>() / edges.len() as f64;
    let var = edges.iter().map(|e| (e.0 - mu) * (e.0 - mu)).sum::<f64>() / edges.len() as f64;
    let threshold = mu + 2.0 * var.sqrt();
    // Union of the kept edges.
    let mut comp: Vec<usize> = (0..m).collect();
    fn find(comp: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while comp[r] != r {
            r = comp[r];
        }
        let mut c = i;
        while comp[c] != r {
            let next = comp[c];
            comp[c] = r;
            c = next;
        }
        r
    }
    for &(w, a, b) in &edges {
        if w <= threshold {
            let (ra, rb) = (find(&mut comp, a), find(&mut comp, b));
            if ra != rb {
                comp[ra.max(rb)] = ra.min(rb);
            }
        }
    }
    let mut labels: Vec<usize> = (0..m).map(|j| find(&mut comp, j)).collect();
    // Merge fragments smaller than min_size into their nearest component.
    loop {
        let mut sizes: std::collections::BTreeMap<usize, usize> = std::collections::BTreeMap::new();
        for &l in &labels {
            *sizes.entry(l).or_insert(0) += 1;
        }
        if sizes.len() < 2 {
            break;
        }
        let smallest = sizes
            .iter()
            .min_by_key(|&(l, s)| (*s, *l))
            .map(|(l, s)| (*l, *s))
            .unwrap();
        if smallest.1 >= min_size {
            break;
        }
        let (frag, _) = smallest;
        let mut nearest = usize::MAX;
        let mut nearest_d = f64::INFINITY;
        for (j, &lj) in labels.iter().enumerate() {
            if lj != frag {
                continue;
            }
            for (q, &lq) in labels.iter().enumerate() {
                if lq == frag {
                    continue;
                }
                let d = dist.get(members[j], members[q]);
                if d < nearest_d || (d == nearest_d && lq < nearest) {
                    nearest_d = d;
                    nearest = lq;
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

fn partition_by_kmeans(members: &[usize], coords: &PointMatrix, seed: u64) -> Vec<usize> {
    let dim = coords.dim();
    let mut pts = Vec::with_capacity(members.len() * dim);
    for &p in members {
        pts.extend_from_slice(coords.row(p));
    }
    let k = 2.min(members.len());
    kmeans(&pts, members.len(), dim, k, seed)
}

/// Group member indices by partition label, parts ordered by first member.
fn group_parts(members: &[usize], labels: &[usize]) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = Vec::new();
    let mut parts: Vec<Vec<usize>> = Vec::new();
    for (j, &p) in members.iter().enumerate() {
        let l = labels[j];
        match order.iter().position(|&o| o == l) {
            Some(idx) => parts[idx].push(p),
            None => {
                order.push(l);
                parts.push(vec![p]);
            }
        }
    }
    parts
}

fn mean_snn_distance(graph: &SnnGraph, a: &[usize], b: &[usize]) -> f64 {
    let mut total = 0.0;
    for &p in a {
        for &q in b {
            total += graph.distance(p, q);
        }
    }
    total / (a.len() * b.len()) as f64
}

/// Distance Consistency: fraction of points whose nearest class centroid
/// in the embedding is their own class's centroid.
pub fn dsc(y: &PointMatrix, labels: &LabelVector) -> Result<MeasureOutput> {
    labels.check_len(y.n_points())?;
    let classes = labels.classes();
    let dim = y.dim();
    let mut centroids = vec![0.0; classes.len() * dim];
    let mut counts = vec![0usize; classes.len()];
    let class_pos = |c: u32| classes.binary_search(&c).unwrap();
    for i in 0..y.n_points() {
        let ci = class_pos(labels.label(i));
        counts[ci] += 1;
        for (c, v) in y.row(i).iter().enumerate() {
            centroids[ci * dim + c] += v;
        }
    }
    for (ci, &cnt) in counts.iter().enumerate() {
        for c in 0..dim {
            centroids[ci * dim + c] /= cnt as f64;
        }
    }
    let mut hits = 0usize;
    for i in 0..y.n_points() {
        let p = y.row(i);
        let mut best = usize::MAX;
        let mut best_d = f64::INFINITY;
        // Ties fall to the lower class id (ascending scan, strict <).
        for ci in 0..classes.len() {
            let d: f64 = p
                .iter()
                .zip(&centroids[ci * dim..(ci + 1) * dim])
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            if d < best_d {
                best_d = d;
                best = ci;
            }
        }
        if classes[best] == labels.label(i) {
            hits += 1;
        }
    }
    Ok(MeasureOutput::new("dsc")
        .with_global("distance_consistency", hits as f64 / y.n_points() as f64))
}

/// Internal clustering validation index on the embedding with labels as
/// the partition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IvmVariant {
    Silhouette,
    CalinskiHarabasz,
    DaviesBouldin,
}

impl IvmVariant {
    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "silhouette" => Ok(IvmVariant::Silhouette),
            "calinski_harabasz" => Ok(IvmVariant::CalinskiHarabasz),
            "davies_bouldin" => Ok(IvmVariant::DaviesBouldin),
            other => Err(Error::Param(format!("unknown ivm variant {other:?}"))),
        }
    }
}

pub fn ivm(y: &PointMatrix, labels: &LabelVector, variant: IvmVariant) -> Result<MeasureOutput> {
    labels.check_len(y.n_points())?;
    if labels.n_classes() < 2 {
        return Err(Error::Param(
            "internal validation needs at least 2 classes".into(),
        ));
    }
    let value = match variant {
        IvmVariant::Silhouette => silhouette(y, labels),
        IvmVariant::CalinskiHarabasz => calinski_harabasz(y, labels)?,
        IvmVariant::DaviesBouldin => davies_bouldin(y, labels),
    };
    Ok(MeasureOutput::new("ivm").with_global("ivm", value))
}

fn silhouette(y: &PointMatrix, labels: &LabelVector) -> f64 {
    let n = y.n_points();
    let d = compute_distance_matrix(y, Metric::Euclidean);
    let classes = labels.classes();
    let class_pos = |c: u32| classes.binary_search(&c).unwrap();
    let mut counts = vec![0usize; classes.len()];
    for i in 0..n {
        counts[class_pos(labels.label(i))] += 1;
    }
    let mut total = 0.0;
    for i in 0..n {
        let own = class_pos(labels.label(i));
        if counts[own] == 1 {
            continue; // singleton contributes 0
        }
        let mut sums = vec![0.0; classes.len()];
        for j in 0..n {
            if j != i {
                sums[class_pos(labels.label(j))] += d.get(i, j);
            }
        }
        let a = sums[own] / (counts[own] - 1) as f64;
        let b = (0..classes.len())
            .filter(|&c| c != own && counts[c] > 0)
            .map(|c| sums[c] / counts[c] as f64)
            .fold(f64::INFINITY, f64::min);
        let denom = a.max(b);
        if denom > 0.0 {
            total += (b - a) / denom;
        }
    }
    total / n as f64
}

fn class_centroids(y: &PointMatrix, labels: &LabelVector) -> (Vec<f64>, Vec<usize>) {
    let classes = labels.classes();
    let dim = y.dim();
    let mut centroids = vec![0.0; classes.len() * dim];
    let mut counts = vec![0usize; classes.len()];
    for i in 0..y.n_points() {
        let ci = classes.binary_search(&labels.label(i)).unwrap();
        counts[ci] += 1;
        for (c, v) in y.row(i).iter().enumerate() {
            centroids[ci * dim + c] += v;
        }
    }
    for (ci, &cnt) in counts.iter().enumerate() {
        for c in 0..dim {
            centroids[ci * dim + c] /= cnt as f64;
        }
    }
    (centroids, counts)
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn calinski_harabasz(y: &PointMatrix, labels: &LabelVector) -> Result<f64> {
    let n = y.n_points();
    let kc = labels.n_classes();
    if kc == n {
        return Err(Error::DegenerateInput(
            "every point is its own class; between/within ratio undefined".into(),
        ));
    }
    let dim = y.dim();
    let (centroids, counts) = class_centroids(y, labels);
    let classes = labels.classes();
    let mut global = vec![0.0; dim];
    for i in 0..n {
        for (c, v) in y.row(i).iter().enumerate() {
            global[c] += v / n as f64;
        }
    }
    let mut within = 0.0;
    for i in 0..n {
        let ci = classes.binary_search(&labels.label(i)).unwrap();
        within += sq_dist(y.row(i), &centroids[ci * dim..(ci + 1) * dim]);
    }
    let mut between = 0.0;
    for ci in 0..kc {
        between += counts[ci] as f64 * sq_dist(&centroids[ci * dim..(ci + 1) * dim], &global);
    }
    if within == 0.0 {
        return Err(Error::DegenerateInput(
            "zero within-class dispersion; index undefined".into(),
        ));
    }
    Ok((between / (kc - 1) as f64) / (within / (n - kc) as f64))
}

fn davies_bouldin(y: &PointMatrix, labels: &LabelVector) -> f64 {
    let dim = y.dim();
    let kc = labels.n_classes();
    let (centroids, counts) = class_centroids(y, labels);
    let classes = labels.classes();
    let mut spread = vec![0.0; kc];
    for i in 0..y.n_points() {
        let ci = classes.binary_search(&labels.label(i)).unwrap();
        spread[ci] += sq_dist(y.row(i), &centroids[ci * dim..(ci + 1) * dim]).sqrt();
    }
    for ci in 0..kc {
        spread[ci] /= counts[ci] as f64;
    }
    let mut total = 0.0;
    for a in 0..kc {
        let mut worst = 0.0f64;
        for b in 0..kc {
            if a == b {
                continue;
            }
            let m = sq_dist(
                &centroids[a * dim..(a + 1) * dim],
                &centroids[b * dim..(b + 1) * dim],
            )
            .sqrt();
            let s = spread[a] + spread[b];
            let ratio = if m == 0.0 {
                if s == 0.0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            } else {
                s / m
            };
            worst = worst.max(ratio);
        }
        total += worst;
    }
    total / kc as f64
}

/// External comparison used by [`cvm`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExternalIndex {
    Ari,
    Nmi,
}

impl ExternalIndex {
    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "ari" => Ok(ExternalIndex::Ari),
            "nmi" => Ok(ExternalIndex::Nmi),
            other => Err(Error::Param(format!("unknown external index {other:?}"))),
        }
    }
}

/// Cluster the embedding with deterministic k-means and compare the
/// partition against the class labels.
pub fn cvm(
    y: &PointMatrix,
    labels: &LabelVector,
    external: ExternalIndex,
    n_clusters: Option<usize>,
    seed: u64,
) -> Result<MeasureOutput> {
    labels.check_len(y.n_points())?;
    let k = n_clusters.unwrap_or(labels.n_classes());
    if k < 2 {
        return Err(Error::Param(format!(
            "clustering needs at least 2 clusters, got {k}"
        )));
    }
    if k > y.n_points() {
        return Err(Error::Param(format!(
            "cannot form {k} clusters from {} points",
            y.n_points()
        )));
    }
    let assign = kmeans(y.as_slice(), y.n_points(), y.dim(), k, seed);
    let assign_u32: Vec<u32> = assign.iter().map(|&a| a as u32).collect();
    let value = match external {
        ExternalIndex::Ari => adjusted_rand_index(labels.labels(), &assign_u32),
        ExternalIndex::Nmi => normalized_mutual_information(labels.labels(), &assign_u32),
    };
    Ok(MeasureOutput::new("cvm").with_global("cvm", value))
}

/// Deterministic k-means: seeded uniform first center, farthest-point
/// seeding for the rest, Lloyd iterations with index-order tie-breaking.
pub(crate) fn kmeans(points: &[f64], n: usize, dim: usize, k: usize, seed: u64) -> Vec<usize> {
    const MAX_ITER: usize = 300;
    const REL_TOL: f64 = 1e-6;
    debug_assert!(k >= 1 && k <= n);
    let row = |i: usize| &points[i * dim..(i + 1) * dim];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centers = vec![0.0; k * dim];
    let mut min_d = vec![f64::INFINITY; n];
    let first = rng.random_range(0..n);
    centers[..dim].copy_from_slice(row(first));
    for c in 1..k {
        for (i, slot) in min_d.iter_mut().enumerate() {
            let d = sq_dist(row(i), &centers[(c - 1) * dim..c * dim]);
            if d < *slot {
                *slot = d;
            }
        }
        let mut pick = 0;
        let mut pick_d = -1.0;
        for (i, &d) in min_d.iter().enumerate() {
            if d > pick_d {
                pick_d = d;
                pick = i;
            }
        }
        centers[c * dim..(c + 1) * dim].copy_from_slice(row(pick));
    }
    let mut assign = vec![0usize; n];
    let mut prev_inertia = f64::INFINITY;
    for _ in 0..MAX_ITER {
        let mut inertia = 0.0;
        for (i, slot) in assign.iter_mut().enumerate() {
            let mut best = 0;
            let mut best_d = f64::INFINITY;
            for c in 0..k {
                let d = sq_dist(row(i), &centers[c * dim..(c + 1) * dim]);
                if d < best_d {
                    best_d = d;
                    best = c;
                }
            }
            *slot = best;
            inertia += best_d;
        }
        // Re-seat empty clusters on the point farthest from its center.
        let mut counts = vec![0usize; k];
        for &a in &assign {
            counts[a] += 1;
        }
        for c in 0..k {
            if counts[c] == 0 {
                let mut far = 0;
                let mut far_d = -1.0;
                for i in 0..n {
                    if counts[assign[i]] > 1 {
                        let d = sq_dist(row(i), &centers[assign[i] * dim..(assign[i] + 1) * dim]);
                        if d > far_d {
                            far_d = d;
                            far = i;
                        }
                    }
                }
                counts[assign[far]] -= 1;
                assign[far] = c;
                counts[c] = 1;
            }
        }
        centers.iter_mut().for_each(|v| *v = 0.0);
        for (i, &c) in assign.iter().enumerate() {
            for (j, v) in row(i).iter().enumerate() {
                centers[c * dim + j] += v;
            }
        }
        for c in 0..k {
            for j in 0..dim {
                centers[c * dim + j] /= counts[c] as f64;
            }
        }
        if prev_inertia.is_finite() {
            let change = (prev_inertia - inertia).abs();
            if change <= REL_TOL * prev_inertia.max(f64::MIN_POSITIVE) {
                break;
            }
        }
        prev_inertia = inertia;
    }
    assign
}

fn contingency(a: &[u32], b: &[u32]) -> (Vec<u64>, Vec<u64>, Vec<Vec<u64>>) {
    let mut ca: Vec<u32> = a.to_vec();
    ca.sort_unstable();
    ca.dedup();
    let mut cb: Vec<u32> = b.to_vec();
    cb.sort_unstable();
    cb.dedup();
    let mut table = vec![vec![0u64; cb.len()]; ca.len()];
    let mut rows = vec![0u64; ca.len()];
    let mut cols = vec![0u64; cb.len()];
    for (&la, &lb) in a.iter().zip(b) {
        let i = ca.binary_search(&la).unwrap();
        let j = cb.binary_search(&lb).unwrap();
        table[i][j] += 1;
        rows[i] += 1;
        cols[j] += 1;
    }
    (rows, cols, table)
}

fn choose2(x: u64) -> f64 {
    (x as f64) * (x as f64 - 1.0) / 2.0
}

/// Adjusted Rand Index between two labelings; 1 iff they agree up to
/// relabeling.
pub fn adjusted_rand_index(a: &[u32], b: &[u32]) -> f64 {
    let (rows, cols, table) = contingency(a, b);
    let n = a.len() as u64;
    let sum_cells: f64 = table
        .iter()
        .flat_map(|r| r.iter())
        .map(|&c| choose2(c))
        .sum();
    let sum_rows: f64 = rows.iter().map(|&c| choose2(c)).sum();
    let sum_cols: f64 = cols.iter().map(|&c| choose2(c)).sum();
    let expected = sum_rows * sum_cols / choose2(n);
    let max_index = 0.5 * (sum_rows + sum_cols);
    if max_index == expected {
        // Both partitions trivial (all singletons or one cluster): identical.
        return 1.0;
    }
    (sum_cells - expected) / (max_index - expected)
}

/// Normalized mutual information with arithmetic-mean normalization.
pub fn normalized_mutual_information(a: &[u32], b: &[u32]) -> f64 {
    let (rows, cols, table) = contingency(a, b);
    let n = a.len() as f64;
    let mut mi = 0.0;
    for (i, row) in table.iter().enumerate() {
        for (j, &c) in row.iter().enumerate() {
            if c > 0 {
                let p = c as f64 / n;
                mi += p * ((n * c as f64) / (rows[i] as f64 * cols[j] as f64)).ln();
            }
        }
    }
    let h = |counts: &[u64]| -> f64 {
        counts
            .iter()
            .filter(|&&c| c > 0)
            .map(|&c| {
                let p = c as f64 / n;
                -p * p.ln()
            })
            .sum()
    };
    let norm = 0.5 * (h(&rows) + h(&cols));
    if norm == 0.0 {
        // Two single-cluster partitions are identical.
        return 1.0;
    }
    (mi / norm).clamp(0.0, 1.0)
}
