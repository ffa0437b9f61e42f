//! Command-line front end: dataset ingestion, estimation, simulation studies
//! and theory queries, with CSV in and JSON out.
//!
//! Exit codes: 0 on success, 2 on input/configuration errors, 3 when the
//! sample is too small for the split-sample pipeline.

use clap::{Args, Parser, Subcommand, ValueEnum};
use epdensity::ep::{nonneg_projection, DensityEstimate};
use epdensity::pipeline::{run_pipeline, ObservationSet, PipelineOptions, SupportSpec};
use epdensity::simlab::{
    linear_grid, monte_carlo_study, rate_study, unit_grid, DirectLaw, ModelConfig, StudyKind,
};
use epdensity::theory;
use epdensity::Error;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::{json, Map, Value};
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "epdensity",
    version,
    about = "Regression error-density estimation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate the error density from a CSV dataset with header `x,y`.
    Estimate(EstimateArgs),
    /// Run a seeded Monte Carlo study from a JSON config.
    Simulate(SimulateArgs),
    /// Oracle-to-estimate ISE ratio table across sample sizes.
    OracleRatio(OracleRatioArgs),
    /// Minimax constants and normalizing factors.
    #[command(subcommand)]
    Theory(TheoryCmd),
}

#[derive(Args)]
struct EstimateArgs {
    /// Input CSV with header `x,y`.
    #[arg(long)]
    input: PathBuf,
    /// Error-density support: `a,b` (left endpoint, width) or `infinite`.
    #[arg(long, allow_hyphen_values = true)]
    support: String,
    /// Output grid size.
    #[arg(long, default_value_t = 1001)]
    grid: usize,
    /// Output JSON path.
    #[arg(long)]
    out: PathBuf,
    /// Shuffle observations with this seed before splitting (for sorted data).
    #[arg(long)]
    shuffle_seed: Option<u64>,
    /// Also emit the clipped-and-renormalized density values.
    #[arg(long)]
    project: bool,
    /// Use the inflated nuisance series cutoff.
    #[arg(long)]
    inflate_s: bool,
}

#[derive(Args)]
struct SimulateArgs {
    /// JSON study configuration.
    #[arg(long)]
    config: PathBuf,
    /// Replication count (overrides the config).
    #[arg(long)]
    reps: Option<usize>,
    /// Master seed; required for reproducibility.
    #[arg(long)]
    seed: u64,
    /// Output JSON path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct OracleRatioArgs {
    /// JSON study configuration (its `n` is overridden per list entry).
    #[arg(long)]
    config: PathBuf,
    /// Comma-separated sample sizes.
    #[arg(long, value_delimiter = ',')]
    n_list: Vec<usize>,
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long)]
    seed: u64,
    /// Optional output JSON path; the table always prints to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum TheoryCmd {
    /// Sharp risk constant for Sobolev classes.
    Pinsker {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        q: f64,
    },
    /// Normalizing factor for a class at sample size n.
    RateFactor {
        #[arg(long, value_enum)]
        kind: ClassKind,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        q: Option<f64>,
        #[arg(long)]
        gamma: Option<f64>,
    },
    /// Monte Carlo MISE log-log slope on direct observations.
    RateStudy {
        /// JSON file holding a direct-observation law.
        #[arg(long)]
        law: PathBuf,
        #[arg(long, value_delimiter = ',')]
        n_list: Vec<usize>,
        #[arg(long, default_value_t = 100)]
        reps: usize,
        #[arg(long)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassKind {
    Sobolev,
    Analytic,
}

/// On-disk study configuration.
#[derive(Deserialize)]
struct StudyFile {
    model: ModelConfig,
    #[serde(default)]
    study: StudyKind,
    #[serde(default = "default_reps")]
    reps: usize,
}

fn default_reps() -> usize {
    500
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            match err.downcast_ref::<Error>() {
                Some(Error::SampleTooSmall { .. }) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

type AnyError = Box<dyn std::error::Error>;

fn run(cli: Cli) -> Result<(), AnyError> {
    match cli.command {
        Command::Estimate(args) => estimate(args),
        Command::Simulate(args) => simulate(args),
        Command::OracleRatio(args) => oracle_ratio(args),
        Command::Theory(cmd) => theory_cmd(cmd),
    }
}

fn parse_support(s: &str) -> Result<SupportSpec, AnyError> {
    if s.eq_ignore_ascii_case("infinite") {
        return Ok(SupportSpec::Infinite);
    }
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err("support must be `a,b` or `infinite`".into());
    }
    let a: f64 = parts[0].trim().parse()?;
    let b: f64 = parts[1].trim().parse()?;
    let spec = SupportSpec::Finite { a, b };
    spec.validate()?;
    Ok(spec)
}

fn read_csv(path: &PathBuf) -> Result<Vec<(f64, f64)>, AnyError> {
    let mut reader = csv::Reader::from_path(path)?;
    let headers = reader.headers()?.clone();
    if headers.len() < 2 || headers.get(0) != Some("x") || headers.get(1) != Some("y") {
        return Err("CSV must have header `x,y`".into());
    }
    let mut pairs = Vec::new();
    for record in reader.records() {
        let record = record?;
        let x: f64 = record.get(0).ok_or("missing x")?.trim().parse()?;
        let y: f64 = record.get(1).ok_or("missing y")?.trim().parse()?;
        pairs.push((x, y));
    }
    Ok(pairs)
}

fn estimate(args: EstimateArgs) -> Result<(), AnyError> {
    if args.grid < 2 {
        return Err("grid must have at least 2 points".into());
    }
    let mut pairs = read_csv(&args.input)?;
    if let Some(seed) = args.shuffle_seed {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        pairs.shuffle(&mut rng);
    }
    let obs = ObservationSet::new(pairs)?;
    let support = parse_support(&args.support)?;
    let options = PipelineOptions {
        inflated_s: args.inflate_s,
        ..Default::default()
    };
    let run = run_pipeline(&obs, &support, &options)?;

    let grid = match support {
        SupportSpec::Finite { .. } => unit_grid_of(args.grid),
        SupportSpec::Infinite => {
            let t = epdensity::ep::default_truncation(&run.residuals);
            linear_grid(-t, t, args.grid)
        }
    };
    let density: Vec<f64> = grid.iter().map(|&z| run.estimate.evaluate(z)).collect();

    let mut doc = Map::new();
    doc.insert("grid".into(), round_vec(&grid));
    doc.insert("density".into(), round_vec(&density));
    doc.insert("weights".into(), round_vec(run.estimate.weights()));
    doc.insert("blocks".into(), blocks_json(&run.estimate));
    doc.insert(
        "params".into(),
        json!({
            "b_n": round_sig(run.sequences.b_n),
            "n": run.sequences.n,
            "n_1": run.sequences.n_1,
            "n_2": run.sequences.n_2,
            "s": run.sequences.s,
            "support": match support {
                SupportSpec::Finite { a, b } => json!({"a": round_sig(a), "b": round_sig(b), "kind": "finite"}),
                SupportSpec::Infinite => json!({"kind": "infinite"}),
            },
        }),
    );
    let mut diagnostics = Map::new();
    diagnostics.insert("residual_count".into(), json!(run.residuals.len()));
    diagnostics.insert(
        "residuals_outside_unit".into(),
        json!(run.residuals_outside_unit),
    );
    if args.project {
        let projected = nonneg_projection(&run.estimate, &grid)?;
        diagnostics.insert("projected_density".into(), round_vec(&projected));
    }
    doc.insert("diagnostics".into(), Value::Object(diagnostics));

    fs::write(&args.out, to_pretty_sorted(&Value::Object(doc))?)?;
    println!("wrote {}", args.out.display());
    Ok(())
}

fn blocks_json(estimate: &DensityEstimate) -> Value {
    let scheme = estimate.scheme();
    Value::Array(
        scheme
            .blocks
            .iter()
            .map(|b| {
                json!({
                    "k": b.k,
                    "len": b.len,
                    "threshold": round_sig(b.threshold),
                    "lower": round_sig(b.lower),
                    "upper": round_sig(b.upper),
                })
            })
            .collect(),
    )
}

fn simulate(args: SimulateArgs) -> Result<(), AnyError> {
    let raw = fs::read_to_string(&args.config)?;
    let study: StudyFile = serde_json::from_str(&raw)?;
    let reps = args.reps.unwrap_or(study.reps);
    let report = monte_carlo_study(&study.model, reps, args.seed, study.study)?;
    let value = serde_json::to_value(&report)?;
    fs::write(&args.out, to_pretty_sorted(&round_floats(value))?)?;
    println!(
        "n = {}: mean {:.4}  median {:.4}  std {:.4}  ({} reps)",
        report.n, report.mean, report.median, report.std, report.reps
    );
    Ok(())
}

fn oracle_ratio(args: OracleRatioArgs) -> Result<(), AnyError> {
    if args.n_list.is_empty() {
        return Err("--n-list must not be empty".into());
    }
    let raw = fs::read_to_string(&args.config)?;
    let study: StudyFile = serde_json::from_str(&raw)?;
    let reps = args.reps.unwrap_or(study.reps);
    let mut rows = Vec::new();
    for &n in &args.n_list {
        let mut model = study.model.clone();
        model.n = n;
        let report = monte_carlo_study(&model, reps, args.seed, study.study)?;
        println!(
            "n = {:>5}: mean {:.4}  median {:.4}  std {:.4}",
            n, report.mean, report.median, report.std
        );
        rows.push(json!({
            "n": n,
            "mean": round_sig(report.mean),
            "median": round_sig(report.median),
            "std": round_sig(report.std),
        }));
    }
    if let Some(out) = args.out {
        let doc = json!({ "reps": reps, "rows": rows, "seed": args.seed });
        fs::write(&out, to_pretty_sorted(&doc)?)?;
    }
    Ok(())
}

fn theory_cmd(cmd: TheoryCmd) -> Result<(), AnyError> {
    match cmd {
        TheoryCmd::Pinsker { alpha, q } => {
            println!("{}", format_sig(theory::pinsker_constant(alpha, q)?));
        }
        TheoryCmd::RateFactor {
            kind,
            n,
            alpha,
            q,
            gamma,
        } => match kind {
            ClassKind::Sobolev => {
                let alpha = alpha.ok_or("--alpha required for sobolev")?;
                let q = q.ok_or("--q required for sobolev")?;
                println!("{}", format_sig(theory::sobolev_rate_factor(n, alpha, q)?));
            }
            ClassKind::Analytic => {
                let gamma = gamma.ok_or("--gamma required for analytic")?;
                println!("{}", format_sig(theory::analytic_rate_factor(n, gamma)?));
            }
        },
        TheoryCmd::RateStudy {
            law,
            n_list,
            reps,
            seed,
        } => {
            let raw = fs::read_to_string(&law)?;
            let law: DirectLaw = serde_json::from_str(&raw)?;
            let study = rate_study(&law, &n_list, reps, seed)?;
            for p in &study.points {
                println!("n = {:>6}: mise {:.6e}", p.n, p.mise);
            }
            println!("slope {:.4}", study.slope);
        }
    }
    Ok(())
}

fn unit_grid_of(points: usize) -> Vec<f64> {
    if points == 1001 {
        unit_grid()
    } else {
        linear_grid(0.0, 1.0, points)
    }
}

/// Rounds to 12 significant digits so identical runs serialize byte-identically.
fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let magnitude = x.abs().log10().floor();
    let factor = 10f64.powf(11.0 - magnitude);
    (x * factor).round() / factor
}

fn format_sig(x: f64) -> String {
    format!("{}", round_sig(x))
}

fn round_vec(values: &[f64]) -> Value {
    Value::Array(values.iter().map(|&v| json!(round_sig(v))).collect())
}

fn round_floats(value: Value) -> Value {
    match value {
        Value::Number(n) => {
            if let Some(f) = n.as_f64() {
                if n.is_f64() {
                    return json!(round_sig(f));
                }
            }
            Value::Number(n)
        }
        Value::Array(items) => Value::Array(items.into_iter().map(round_floats).collect()),
        Value::Object(map) => {
            Value::Object(map.into_iter().map(|(k, v)| (k, round_floats(v))).collect())
        }
        other => other,
    }
}

/// Serializes with sorted keys and a trailing newline.
fn to_pretty_sorted(value: &Value) -> Result<String, AnyError> {
    let sorted = sort_keys(value.clone());
    Ok(format!("{}\n", serde_json::to_string_pretty(&sorted)?))
}

fn sort_keys(value: Value) -> Value {
    match value {
        Value::Object(map) => {
            let mut sorted: Vec<(String, Value)> = map.into_iter().collect();
            sorted.sort_by(|a, b| a.0.cmp(&b.0));
            let mut out = Map::new();
            for (k, v) in sorted {
                out.insert(k, sort_keys(v));
            }
            Value::Object(out)
        }
        Value::Array(items) => Value::Array(items.into_iter().map(sort_keys).collect()),
        other => other,
    }
}
