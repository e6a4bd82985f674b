//! Shared-nearest-neighbor similarity graphs.
//!
//! The SNN similarity of a pair (i, j) sums, over every point m in the
//! intersection of their k-neighborhoods, the product of rank weights
//! (k + 1 - pos_i(m)) * (k + 1 - pos_j(m)), where pos is the 1-based
//! position of m in the owner's neighbor list. Weights are normalized by
//! the largest similarity in the graph.

use std::collections::HashMap;

use crate::preprocess::KnnTable;

/// Symmetric sparse SNN graph with normalized edge weights in [0, 1].
#[derive(Clone, Debug)]
pub struct SnnGraph {
    n: usize,
    /// Per-node adjacency, sorted by neighbor id.
    adj: Vec<Vec<(u32, f64)>>,
}

impl SnnGraph {
    /// Build from the first `k` columns of a kNN table.
    pub fn build(knn: &KnnTable, k: usize) -> SnnGraph {
        let n = knn.n();
        // inverted[m] lists (owner, 1-based position) pairs with m in the
        // owner's first-k neighbor list.
        let mut inverted: Vec<Vec<(u32, u32)>> = vec![Vec::new(); n];
        for i in 0..n {
            for (pos, &m) in knn.neighbors_k(i, k).iter().enumerate() {
                inverted[m as usize].push((i as u32, (pos + 1) as u32));
            }
        }
        let mut raw: HashMap<(u32, u32), f64> = HashMap::new();
        let kf = k as f64;
        for owners in &inverted {
            for a in 0..owners.len() {
                let (i, pi) = owners[a];
                let wi = kf + 1.0 - pi as f64;
                for &(j, pj) in &owners[a + 1..] {
                    let wj = kf + 1.0 - pj as f64;
                    let key = if i < j { (i, j) } else { (j, i) };
                    *raw.entry(key).or_insert(0.0) += wi * wj;
                }
            }
        }
        let max = raw.values().copied().fold(0.0, f64::max);
        let scale = if max > 0.0 { 1.0 / max } else { 0.0 };
        let mut adj: Vec<Vec<(u32, f64)>> = vec![Vec::new(); n];
        for (&(i, j), &w) in &raw {
            let s = w * scale;
            adj[i as usize].push((j, s));
            adj[j as usize].push((i, s));
        }
        for row in &mut adj {
            row.sort_unstable_by_key(|&(j, _)| j);
        }
        SnnGraph { n, adj }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Neighbors of `i` with nonzero similarity, ascending by id.
    #[inline]
    pub fn neighbors(&self, i: usize) -> &[(u32, f64)] {
        &self.adj[i]
    }

    /// Normalized similarity of a pair (0 when they share no neighbors).
    pub fn similarity(&self, i: usize, j: usize) -> f64 {
        let row = &self.adj[i];
        match row.binary_search_by_key(&(j as u32), |&(id, _)| id) {
            Ok(pos) => row[pos].1,
            Err(_) => 0.0,
        }
    }

    /// SNN distance 1 - similarity.
    #[inline]
    pub fn distance(&self, i: usize, j: usize) -> f64 {
        1.0 - self.similarity(i, j)
    }

    /// Mean absolute difference of normalized similarities over all pairs
    /// i < j between two graphs on the same node set.
    pub fn mean_abs_difference(a: &SnnGraph, b: &SnnGraph) -> f64 {
        debug_assert_eq!(a.n, b.n);
        let n = a.n;
        let mut total = 0.0;
        for i in 0..n {
            // Merge the two sorted rows, counting each unordered pair once.
            let ra = &a.adj[i];
            let rb = &b.adj[i];
            let (mut p, mut q) = (0, 0);
            while p < ra.len() || q < rb.len() {
                let ja = ra.get(p).map(|&(j, _)| j);
                let jb = rb.get(q).map(|&(j, _)| j);
                let (j, wa, wb) = match (ja, jb) {
                    (Some(x), Some(y)) if x == y => {
                        let t = (x, ra[p].1, rb[q].1);
                        p += 1;
                        q += 1;
                        t
                    }
                    (Some(x), y) if y.is_none_or(|y| x < y) => {
                        let t = (x, ra[p].1, 0.0);
                        p += 1;
                        t
                    }
                    (_, Some(y)) => {
                        let t = (y, 0.0, rb[q].1);
                        q += 1;
                        t
                    }
                    (None, None) => break,
                    _ => unreachable!(),
                };
                if (j as usize) > i {
                    total += (wa - wb).abs();
                }
            }
        }
        let pairs = (n * (n - 1) / 2) as f64;
        total / pairs
    }
}
