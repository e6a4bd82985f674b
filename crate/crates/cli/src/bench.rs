//! Benchmark harness: times a spec evaluated through the shared-cache
//! engine (optimized) against per-measure standalone evaluation (naive)
//! on freshly perturbed synthetic embeddings.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use drdist_core::{run_standalone, Engine, MeasureSpec, PointMatrix, Result, RunOptions};

#[derive(Clone, Debug, Serialize)]
pub struct RepTiming {
    pub optimized_s: f64,
    pub naive_s: f64,
    pub speedup: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchReport {
    pub n: usize,
    pub dim: usize,
    pub reps: usize,
    pub seed: u64,
    pub measures: Vec<String>,
    pub per_rep: Vec<RepTiming>,
    pub optimized_mean_s: f64,
    pub naive_mean_s: f64,
    /// naive mean / optimized mean.
    pub speedup: f64,
}

/// Random linear projection of the data to 2-D plus Gaussian jitter: a
/// cheap embedding that exercises the same preprocessing paths as a real
/// reducer.
pub fn synthetic_embedding(x: &PointMatrix, seed: u64) -> PointMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (n, dim) = (x.n_points(), x.dim());
    let scale = 1.0 / (dim as f64).sqrt();
    let proj: Vec<f64> = (0..dim * 2)
        .map(|_| <StandardNormal as Distribution<f64>>::sample(&StandardNormal, &mut rng) * scale)
        .collect();
    let mut out = Vec::with_capacity(n * 2);
    for i in 0..n {
        let row = x.row(i);
        for c in 0..2 {
            let v: f64 = row
                .iter()
                .zip(proj[c..].iter().step_by(2))
                .map(|(a, b)| a * b)
                .sum();
            let jitter: f64 =
                <StandardNormal as Distribution<f64>>::sample(&StandardNormal, &mut rng);
            out.push(v + 0.01 * jitter);
        }
    }
    PointMatrix::from_vec(out, n, 2).expect("projection of finite data is finite")
}

/// Evaluate `spec` on `reps` perturbed embeddings, once through the engine
/// and once measure-by-measure, and report wall times.
pub fn run_bench(
    x: &PointMatrix,
    spec: &MeasureSpec,
    reps: usize,
    seed: u64,
    opts: RunOptions,
) -> Result<BenchReport> {
    if reps < 1 {
        return Err(drdist_core::Error::Param(
            "bench needs at least 1 repetition".into(),
        ));
    }
    // Untimed warmup: the first pass pays allocator growth and page
    // faults; timing it would bias whichever mode runs first.
    {
        let y = synthetic_embedding(x, seed);
        let engine = Engine::new(spec.clone(), x.clone(), opts)?;
        let _ = engine.run(&y, None)?;
    }
    let mut per_rep = Vec::with_capacity(reps);
    for rep in 0..reps {
        let y = synthetic_embedding(x, seed.wrapping_add(rep as u64));

        let t = Instant::now();
        let engine = Engine::new(spec.clone(), x.clone(), opts)?;
        let optimized = engine.run(&y, None)?;
        let optimized_s = t.elapsed().as_secs_f64();

        let t = Instant::now();
        let mut naive = Vec::with_capacity(spec.len());
        for entry in &spec.entries {
            naive.push(run_standalone(&entry.id, entry, x, &y, None, opts)?);
        }
        let naive_s = t.elapsed().as_secs_f64();

        // Reuse must not change the numbers it reports.
        for (a, b) in optimized.iter().zip(&naive) {
            for (name, v) in &a.globals {
                let bv = b.global(name);
                debug_assert!(
                    (v - bv).abs() <= 1e-12 * v.abs().max(1.0),
                    "{}/{name}: {v} vs {bv}",
                    a.id
                );
            }
        }
        per_rep.push(RepTiming {
            optimized_s,
            naive_s,
            speedup: naive_s / optimized_s,
        });
    }
    let mean = |f: fn(&RepTiming) -> f64| -> f64 {
        per_rep.iter().map(f).sum::<f64>() / per_rep.len() as f64
    };
    let optimized_mean_s = mean(|r| r.optimized_s);
    let naive_mean_s = mean(|r| r.naive_s);
    Ok(BenchReport {
        n: x.n_points(),
        dim: x.dim(),
        reps,
        seed,
        measures: spec.entries.iter().map(|e| e.id.clone()).collect(),
        per_rep,
        optimized_mean_s,
        naive_mean_s,
        speedup: naive_mean_s / optimized_mean_s,
    })
}
