//! Command-line argument definitions.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(
    name = "drdist",
    about = "Distortion measures for dimensionality-reduction embeddings",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate a measure spec on a dataset/embedding pair.
    Measure(MeasureArgs),
    /// Render local distortions from a measure report as an SVG view.
    Viz(VizArgs),
    /// Time spec evaluation with and without preprocessing reuse.
    Bench(BenchArgs),
}

#[derive(Args, Debug)]
pub struct MeasureArgs {
    /// High-dimensional dataset (.csv, or .raw/.f64 with a .meta sidecar).
    #[arg(long)]
    pub high: Option<PathBuf>,
    /// Low-dimensional embedding.
    #[arg(long)]
    pub low: Option<PathBuf>,
    /// Class labels: single-column CSV of non-negative integers.
    #[arg(long)]
    pub labels: Option<PathBuf>,
    /// Measure spec: JSON array of {"id", "params"} entries.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// Also return per-point local distortions where supported.
    #[arg(long)]
    pub local: bool,
    /// Distance function: euclidean or cosine.
    #[arg(long, default_value = "euclidean")]
    pub metric: String,
    /// Seed for randomized measures without an explicit seed param.
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Report destination (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Print the measure registry as JSON and exit.
    #[arg(long)]
    pub list: bool,
}

#[derive(Args, Debug)]
pub struct VizArgs {
    /// 2-D embedding the distortions belong to.
    #[arg(long)]
    pub low: PathBuf,
    /// Report produced by `measure --local` holding a false/missing pair.
    #[arg(long)]
    pub locals: PathBuf,
    /// View kind: checkviz or relmap.
    #[arg(long)]
    pub kind: String,
    /// SVG destination.
    #[arg(long)]
    pub out: PathBuf,
    /// Neighborhood size of the reliability-map edge graph.
    #[arg(long, default_value_t = 5)]
    pub k: usize,
    #[arg(long, default_value_t = 800)]
    pub width: u32,
    #[arg(long, default_value_t = 800)]
    pub height: u32,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// High-dimensional dataset.
    #[arg(long)]
    pub high: PathBuf,
    /// Measure spec to time.
    #[arg(long)]
    pub spec: PathBuf,
    /// Repetitions (each on a freshly perturbed embedding).
    #[arg(long, default_value_t = 5)]
    pub reps: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Timing report destination (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
}
