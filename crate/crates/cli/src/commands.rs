//! Implementations of the measure, viz, and bench subcommands.

use std::fs;
use std::path::Path;
use std::time::Instant;

use drdist_core::distvis::{checkviz, reliability_map, DistortionField, VizConfig};
use drdist_core::io::{load_labels, load_matrix, MatrixFormat};
use drdist_core::{
    build_cache, registry, Engine, Error, MeasureSpec, Metric, PointMatrix, PreprocessPlan,
    Result, RunOptions,
};

use crate::args::{BenchArgs, MeasureArgs, VizArgs};
use crate::bench::run_bench;
use crate::report::{extract_distortions, Meta, Report};

/// Infer the on-disk format from the extension: .raw/.f64 payloads carry a
/// .meta sidecar, anything else parses as CSV.
fn format_for(path: &Path) -> MatrixFormat {
    match path.extension().and_then(|e| e.to_str()) {
        Some("raw") | Some("f64") => MatrixFormat::RawF64,
        _ => MatrixFormat::Csv,
    }
}

fn load_points(path: &Path) -> Result<PointMatrix> {
    load_matrix(path, format_for(path))
}

fn write_or_print(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => {
            use std::io::Write;
            // Tolerate a closed pipe (e.g. piping into head).
            if let Err(e) = writeln!(std::io::stdout(), "{text}") {
                if e.kind() != std::io::ErrorKind::BrokenPipe {
                    return Err(e.into());
                }
            }
        }
    }
    Ok(())
}

fn required<'a, T>(value: &'a Option<T>, flag: &str) -> Result<&'a T> {
    value
        .as_ref()
        .ok_or_else(|| Error::Config(format!("missing required flag --{flag}")))
}

pub fn cmd_measure(args: &MeasureArgs) -> Result<()> {
    if args.list {
        let dump = serde_json::to_string_pretty(&registry::all())
            .expect("registry serialization cannot fail");
        return write_or_print(args.out.as_deref(), &dump);
    }
    let metric: Metric = args.metric.parse()?;
    let spec_path = required(&args.spec, "spec")?;
    let spec = MeasureSpec::parse_json(&fs::read_to_string(spec_path)?)?;
    let x = load_points(required(&args.high, "high")?)?;
    let y = load_points(required(&args.low, "low")?)?;
    let labels = args.labels.as_deref().map(load_labels).transpose()?;
    let opts = RunOptions {
        metric,
        return_local: args.local,
        seed: args.seed,
    };
    let started = Instant::now();
    let engine = Engine::new(spec, x, opts)?;
    let outputs = engine.run(&y, labels.as_ref())?;
    let meta = Meta {
        n: y.n_points(),
        dim_high: engine.registered_high().dim(),
        dim_low: y.dim(),
        metric: metric.name().to_string(),
        seed: args.seed,
        wall_time_s: started.elapsed().as_secs_f64(),
    };
    write_or_print(args.out.as_deref(), &Report::new(meta, outputs).to_json())
}

pub fn cmd_viz(args: &VizArgs) -> Result<()> {
    let y = load_points(&args.low)?;
    let report: Report = serde_json::from_str(&fs::read_to_string(&args.locals)?)
        .map_err(|e| Error::Input(format!("locals report: {e}")))?;
    let (source_id, false_values, missing_values) = extract_distortions(&report)
        .ok_or_else(|| {
            Error::Input(
                "report holds no false/missing local pair; run measure --local \
                 with a pointwise pair measure (snc, tnc, ca_tnc, mrre)"
                    .into(),
            )
        })?;
    let field = DistortionField::new(y.clone(), false_values, missing_values)?;
    let cfg = VizConfig {
        width: args.width,
        height: args.height,
        k: args.k,
        ..VizConfig::default()
    };
    let svg = match args.kind.as_str() {
        "checkviz" => checkviz(&field, &cfg)?,
        "relmap" => {
            let plan = PreprocessPlan {
                knn_k_low: Some(cfg.k),
                ..PreprocessPlan::empty(Metric::Euclidean)
            };
            let cache = build_cache(&y, &y, &plan, Metric::Euclidean)?;
            reliability_map(&field, &cache, &cfg)?
        }
        other => {
            return Err(Error::Config(format!(
                "unknown view kind {other:?} (expected checkviz or relmap)"
            )))
        }
    };
    fs::write(&args.out, &svg)?;
    eprintln!("rendered {} from {source_id} locals -> {}", args.kind, args.out.display());
    Ok(())
}

pub fn cmd_bench(args: &BenchArgs) -> Result<()> {
    let x = load_points(&args.high)?;
    let spec = MeasureSpec::parse_json(&fs::read_to_string(&args.spec)?)?;
    let report = run_bench(&x, &spec, args.reps, args.seed, RunOptions::default())?;
    let text = serde_json::to_string_pretty(&report).expect("bench serialization cannot fail");
    write_or_print(args.out.as_deref(), &text)
}
