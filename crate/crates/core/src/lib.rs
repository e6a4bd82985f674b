//! Distortion measures for dimensionality-reduction embeddings.
//!
//! Given a high-dimensional dataset `X` and a low-dimensional embedding
//! `Y`, this crate computes 17 local, cluster-level, and global distortion
//! measures, optionally with per-point local distortions. A spec-driven
//! engine deduplicates the shared preprocessing blocks (pairwise
//! distances, distance rankings, kNN tables) across measures, and a small
//! rendering module turns local distortions into SVG views.
//!
//! ```no_run
//! use drdist_core::{Engine, MeasureSpec, PointMatrix, RunOptions};
//!
//! let x = PointMatrix::from_rows(&[vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]])?;
//! let y = x.clone();
//! let spec = MeasureSpec::parse_json(r#"[{"id": "tnc", "params": {"k": 1}}]"#)?;
//! let engine = Engine::new(spec, x, RunOptions::default())?;
//! let outputs = engine.run(&y, None)?;
//! println!("{:?}", outputs[0].globals);
//! # drdist_core::Result::Ok(())
//! ```

pub mod distvis;
pub mod error;
pub mod io;
pub mod matrix;
pub mod measures;
pub mod preprocess;
pub mod registry;
pub mod scheduler;
pub mod snn;
pub mod spec;

mod linalg;

pub use error::{Error, ErrorClass, Result};
pub use matrix::{LabelVector, PointMatrix};
pub use measures::MeasureOutput;
pub use preprocess::{
    build_cache, compute_distance_matrix, compute_knn, compute_knn_from_distances,
    compute_rank_matrix, DistanceMatrix, KnnTable, Metric, PreprocessCache, PreprocessPlan,
    RankMatrix,
};
pub use scheduler::{derive_plan, run_standalone, Engine, RunOptions};
pub use spec::{MeasureSpec, ParamValue, SpecEntry};
