//! Shared test utilities: instance generators and comparison helpers.

#![allow(dead_code)]

pub mod oracles;

use drdist_core::{LabelVector, PointMatrix};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Random point rows with distinct coordinates.
pub fn random_rows(rng: &mut ChaCha8Rng, n: usize, dim: usize, scale: f64) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| (0..dim).map(|_| rng.random_range(-scale..scale)).collect())
        .collect()
}

pub fn to_matrix(rows: &[Vec<f64>]) -> PointMatrix {
    PointMatrix::from_rows(rows).unwrap()
}

pub fn random_labels(rng: &mut ChaCha8Rng, n: usize, classes: u32) -> LabelVector {
    // Guarantee every class appears at least once.
    let mut labels: Vec<u32> = (0..n).map(|i| (i as u32) % classes).collect();
    for i in 0..n {
        let j = rng.random_range(0..n);
        labels.swap(i, j);
    }
    LabelVector::new(labels).unwrap()
}

/// Relative closeness with an absolute floor for near-zero values.
pub fn close(a: f64, b: f64, rel: f64) -> bool {
    if a == b {
        return true;
    }
    let diff = (a - b).abs();
    diff <= 1e-12 || diff <= rel * a.abs().max(b.abs())
}

pub fn assert_close(a: f64, b: f64, rel: f64, what: &str) {
    assert!(close(a, b, rel), "{what}: {a} vs {b} (diff {})", (a - b).abs());
}
