//! Command-line front end: ingest a problem instance, run the pipeline
//! (evidence level → cluster level → partition level → weighting →
//! minimization), and emit machine-readable reports.

mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use metaconflict::instance::{CompiledInstance, ProblemInstance};
use metaconflict::scenario::{self, ScenarioParams};
use metaconflict::search::{self, SearchConfig, SearchMethod};
use metaconflict::weighting;
use metaconflict::Error as CoreError;

use report::{ClusterReport, EntropyOut, EvaluateReport, GenerateReport, OutputFormat};

#[derive(Parser)]
#[command(
    name = "metaconflict",
    version,
    about = "Cluster belief functions by minimizing entropy-weighted metaconflict"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Exact,
    Local,
}

#[derive(Subcommand)]
enum Command {
    /// Search for the partition minimizing the metaconflict objective
    Cluster {
        /// Problem instance (JSON)
        instance: PathBuf,
        /// Search method; defaults to exact up to 11 items, local above
        #[arg(long, value_enum)]
        method: Option<MethodArg>,
        /// Seed for the local-search restarts
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of local-search restarts
        #[arg(long, default_value_t = 20)]
        restarts: u32,
        /// Fixed weight in [0, 1]; skips the entropy stage
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        output: OutputFormat,
    },
    /// Evaluate the objective for the partition stored in the instance
    Evaluate {
        /// Problem instance (JSON) containing a `partition` (or `truth`)
        instance: PathBuf,
        /// Fixed weight in [0, 1]; skips the entropy stage
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        output: OutputFormat,
    },
    /// Report the pooled entropies and the resulting weight
    Entropy {
        /// Problem instance (JSON)
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        output: OutputFormat,
    },
    /// Generate a synthetic instance with embedded ground truth
    Generate {
        /// Output file for the instance document
        out: PathBuf,
        /// Number of items
        #[arg(long)]
        n: usize,
        /// Number of ground-truth clusters
        #[arg(long)]
        k: usize,
        /// Frame size; defaults to k
        #[arg(long)]
        frame_size: Option<usize>,
        /// Mass each item puts on its cluster's atom
        #[arg(long, default_value_t = 0.9)]
        sharpness: f64,
        /// Attraction weight of within-cluster pairs
        #[arg(long, default_value_t = 0.8)]
        link_prob: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        output: OutputFormat,
    },
}

enum CliError {
    Core(CoreError),
    Io(String),
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_size_limit() => 3,
            _ => 2,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Core(e) => e.to_string(),
            CliError::Io(m) => m.clone(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Cluster {
            instance,
            method,
            seed,
            restarts,
            alpha,
            output,
        } => cmd_cluster(&instance, method, seed, restarts, alpha, output),
        Command::Evaluate {
            instance,
            alpha,
            output,
        } => cmd_evaluate(&instance, alpha, output),
        Command::Entropy { instance, output } => cmd_entropy(&instance, output),
        Command::Generate {
            out,
            n,
            k,
            frame_size,
            sharpness,
            link_prob,
            seed,
            output,
        } => cmd_generate(&out, n, k, frame_size, sharpness, link_prob, seed, output),
    }
}

fn load_instance(path: &Path) -> Result<CompiledInstance, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    let doc: ProblemInstance = serde_json::from_str(&text)
        .map_err(|e| CliError::Io(format!("cannot parse {}: {e}", path.display())))?;
    Ok(doc.compile()?)
}

/// Weight for the objective: the override when given, otherwise the entropy
/// stage. Returns the entropy breakdown only when it was computed.
fn resolve_alpha(
    compiled: &CompiledInstance,
    alpha_override: Option<f64>,
) -> Result<(f64, Option<EntropyOut>), CliError> {
    match alpha_override {
        Some(a) => {
            if !(0.0..=1.0).contains(&a) {
                return Err(CoreError::UnitRange {
                    what: "alpha",
                    value: a,
                }
                .into());
            }
            Ok((a, None))
        }
        None => {
            let report = weighting::entropy_report(&compiled.conflict, &compiled.attraction)?;
            Ok((report.alpha, Some(EntropyOut::from_report(&report))))
        }
    }
}

fn cmd_cluster(
    path: &Path,
    method: Option<MethodArg>,
    seed: u64,
    restarts: u32,
    alpha_override: Option<f64>,
    output: OutputFormat,
) -> Result<(), CliError> {
    let compiled = load_instance(path)?;
    let (alpha, entropy) = resolve_alpha(&compiled, alpha_override)?;
    let cfg = SearchConfig::<f64> {
        method: match method {
            Some(MethodArg::Exact) => SearchMethod::Exact,
            Some(MethodArg::Local) => SearchMethod::Local,
            None if compiled.n <= 11 => SearchMethod::Exact,
            None => SearchMethod::Local,
        },
        seed,
        restarts,
        alpha_override,
        ..SearchConfig::default()
    };
    let result = search::search(&compiled.conflict, &compiled.attraction, alpha, &cfg)?;
    let report = ClusterReport::build(&compiled, &cfg, alpha_override.is_some(), entropy, &result);
    print!("{}", report.render(output));
    Ok(())
}

fn cmd_evaluate(
    path: &Path,
    alpha_override: Option<f64>,
    output: OutputFormat,
) -> Result<(), CliError> {
    let compiled = load_instance(path)?;
    let part = compiled
        .partition
        .clone()
        .or_else(|| compiled.truth.clone())
        .ok_or_else(|| {
            CoreError::Invalid("instance contains neither `partition` nor `truth`".into())
        })?;
    let (alpha, entropy) = resolve_alpha(&compiled, alpha_override)?;
    let result = search::evaluate_partition(&compiled.conflict, &compiled.attraction, alpha, &part)?;
    let legacy = match &compiled.items {
        Some(items) => {
            let mut conflicts = Vec::new();
            for cluster in part.clusters() {
                let masses: Vec<_> = cluster.iter().map(|&i| items[i].mass.clone()).collect();
                conflicts.push(metaconflict::evidence::conf_subset(&masses)?);
            }
            Some(search::legacy_mcf(&conflicts)?)
        }
        None => None,
    };
    let logsum = search::logsum_objective(&compiled.conflict, &part)?;
    let report = EvaluateReport::build(
        &compiled,
        alpha_override.is_some(),
        entropy,
        &result,
        legacy,
        logsum,
    );
    print!("{}", report.render(output));
    Ok(())
}

fn cmd_entropy(path: &Path, output: OutputFormat) -> Result<(), CliError> {
    let compiled = load_instance(path)?;
    let report = weighting::entropy_report(&compiled.conflict, &compiled.attraction)?;
    let out = EntropyOut::from_report(&report);
    print!("{}", out.render(output));
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_generate(
    out: &Path,
    n: usize,
    k: usize,
    frame_size: Option<usize>,
    sharpness: f64,
    link_prob: f64,
    seed: u64,
    output: OutputFormat,
) -> Result<(), CliError> {
    let params = ScenarioParams {
        n,
        k,
        frame_size: frame_size.unwrap_or(k),
        sharpness,
        link_prob,
    };
    let scenario = scenario::generate::<f64>(&params, seed)?;
    let doc = scenario.to_instance();
    let json = serde_json::to_string_pretty(&doc)
        .expect("instance documents always serialize");
    std::fs::write(out, json + "\n")
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", out.display())))?;
    let summary = GenerateReport {
        out: out.display().to_string(),
        n,
        k,
        frame_size: params.frame_size,
        sharpness,
        link_prob,
        seed,
        truth: scenario.truth.labels().to_vec(),
    };
    print!("{}", summary.render(output));
    Ok(())
}
