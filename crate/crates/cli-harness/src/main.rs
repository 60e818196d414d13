//! `nsgauss`: reproducible experiments and the acceptance suite.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use cli_harness::{accept, experiments, manifest, plotdata};
use cli_harness::{resolve_config, Experiment, HarnessError, Result};

#[derive(Parser)]
#[command(name = "nsgauss", version, about = "Nonsingular Gaussian action toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Certified diagnostics for a ternary spectral measure.
    CantorAnalyze(RunArgs),
    /// Ratio-ergodic averages along a Gaussian orbit.
    Hurewicz(RunArgs),
    /// Skew-product recurrence simulation.
    Skew(RunArgs),
    /// Maharam extension orbit histogram.
    MaharamDiagnostic(RunArgs),
    /// Growth and entropy exponents for free-group models.
    Exponents(RunArgs),
    /// Exact operator identities and their sampled counterparts.
    Identities(RunArgs),
    /// Runs the full acceptance suite under two thread pools.
    Accept(AcceptArgs),
    /// Merges run artifacts into one long-format plot table.
    EmitPlotdata(PlotArgs),
}

/// Flags shared by the experiment subcommands. Each experiment accepts its
/// own subset; passing a flag the experiment does not know is a config
/// error. Entries in `--config` override the flags.
#[derive(Args)]
struct RunArgs {
    /// JSON config file; its entries override the command-line flags.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory for CSVs, the summary, and the manifest.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Probability rule: "example83", "const:<p>", or inline JSON.
    #[arg(long)]
    rule: Option<String>,
    /// Index cutoff for series diagnostics.
    #[arg(long)]
    cutoff: Option<u64>,
    /// Distance-to-one threshold for the condition-ratio certificate.
    #[arg(long)]
    delta: Option<f64>,
    /// Spectral truncation level.
    #[arg(long)]
    level: Option<u32>,
    /// Cocycle scale multiplier.
    #[arg(long)]
    scale: Option<f64>,
    /// Gaussian space dimension.
    #[arg(long)]
    dim: Option<usize>,
    /// Monte Carlo sample count.
    #[arg(long)]
    samples: Option<u64>,
    /// Single stream seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated seed list.
    #[arg(long)]
    seeds: Option<String>,
    /// Free group rank.
    #[arg(long)]
    freegroup: Option<u32>,
    /// Iteration step count.
    #[arg(long)]
    steps: Option<u64>,
    /// Steps discarded before counting window returns.
    #[arg(long = "burn-in")]
    burn_in: Option<u64>,
    /// Half-width of the recurrence window.
    #[arg(long)]
    window: Option<f64>,
    /// Hurewicz scenario: constant-one, pmp-square, or fixed-point.
    #[arg(long)]
    scenario: Option<String>,
    /// Ratio-average window radius.
    #[arg(long)]
    n: Option<u64>,
    /// Histogram modulus for the Maharam diagnostic.
    #[arg(long)]
    modulus: Option<f64>,
    /// Histogram bin count.
    #[arg(long)]
    bins: Option<usize>,
    /// Tree profile radius.
    #[arg(long)]
    radius: Option<u32>,
    /// Random instance count for the identity battery.
    #[arg(long)]
    instances: Option<u64>,
    /// Trivial-block drift handling: centered or kept.
    #[arg(long)]
    drift: Option<String>,
}

impl RunArgs {
    fn params(&self) -> Result<BTreeMap<String, Value>> {
        let mut map = BTreeMap::new();
        let mut put = |key: &str, value: Option<Value>| {
            if let Some(v) = value {
                map.insert(key.to_string(), v);
            }
        };
        put("rule", self.rule.as_ref().map(|r| parse_rule_flag(r)));
        put("cutoff", self.cutoff.map(|v| json!(v)));
        put("delta", self.delta.map(|v| json!(v)));
        put("level", self.level.map(|v| json!(v)));
        put("scale", self.scale.map(|v| json!(v)));
        put("dim", self.dim.map(|v| json!(v)));
        put("samples", self.samples.map(|v| json!(v)));
        put("seed", self.seed.map(|v| json!(v)));
        put("freegroup", self.freegroup.map(|v| json!(v)));
        put("steps", self.steps.map(|v| json!(v)));
        put("burn-in", self.burn_in.map(|v| json!(v)));
        put("window", self.window.map(|v| json!(v)));
        put("scenario", self.scenario.as_ref().map(|v| json!(v)));
        put("n", self.n.map(|v| json!(v)));
        put("modulus", self.modulus.map(|v| json!(v)));
        put("bins", self.bins.map(|v| json!(v)));
        put("radius", self.radius.map(|v| json!(v)));
        put("instances", self.instances.map(|v| json!(v)));
        put("drift", self.drift.as_ref().map(|v| json!(v)));
        if let Some(raw) = &self.seeds {
            let mut list = Vec::new();
            for piece in raw.split(',') {
                let trimmed = piece.trim();
                let seed: u64 = trimmed.parse().map_err(|_| {
                    HarnessError::config(
                        "--seeds",
                        format!("'{trimmed}' is not an unsigned integer"),
                    )
                })?;
                list.push(json!(seed));
            }
            map.insert("seeds".to_string(), Value::Array(list));
        }
        Ok(map)
    }
}

/// Rule flags stay strings unless they hold inline JSON; the config layer
/// parses both spellings with line-aware diagnostics.
fn parse_rule_flag(raw: &str) -> Value {
    if raw.trim_start().starts_with('{') {
        serde_json::from_str(raw).unwrap_or_else(|_| json!(raw))
    } else {
        json!(raw)
    }
}

#[derive(Args)]
struct AcceptArgs {
    /// Directory for acceptance CSVs and the summary (default accept-out).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PlotArgs {
    /// Experiment run directories to merge.
    dirs: Vec<PathBuf>,
    /// Write the table here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn read_threads() -> Result<usize> {
    match std::env::var("NSGAUSS_THREADS") {
        Err(std::env::VarError::NotPresent) => Ok(1),
        Err(std::env::VarError::NotUnicode(_)) => Err(HarnessError::config(
            "NSGAUSS_THREADS",
            "value is not valid unicode",
        )),
        Ok(raw) => match raw.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(n),
            _ => Err(HarnessError::config(
                "NSGAUSS_THREADS",
                format!("'{raw}' is not a positive thread count"),
            )),
        },
    }
}

fn build_pool(threads: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| HarnessError::config("NSGAUSS_THREADS", format!("cannot build pool: {e}")))
}

fn run_experiment(experiment: Experiment, args: RunArgs, pool: &rayon::ThreadPool) -> Result<()> {
    let params = args.params()?;
    let resolved = resolve_config(experiment, params, args.out, args.config.as_deref())?;
    let out_dir = resolved.config.output.clone();
    let manifest = pool.install(|| experiments::run(&resolved))?;
    println!(
        "{}: wrote {} files to {} (config {})",
        experiment,
        manifest.outputs.len() + 1,
        out_dir.display(),
        cli_harness::config::short_hash(&manifest.config_hash),
    );
    Ok(())
}

fn run_accept(args: AcceptArgs, pool: &rayon::ThreadPool, threads: usize) -> Result<()> {
    let first = pool.install(accept::run_criteria);
    let alt_threads = if threads == 8 { 1 } else { 8 };
    let alt_pool = build_pool(alt_threads)?;
    let second = alt_pool.install(accept::run_criteria);

    let mut criteria = first.criteria.clone();
    criteria.push(accept::determinism_report(
        &first,
        &second,
        (threads, alt_threads),
    ));
    for criterion in &criteria {
        println!("{}", criterion.summary_line());
        for detail in criterion.failure_details() {
            println!("  {detail}");
        }
    }

    let out = args.out.unwrap_or_else(|| PathBuf::from("accept-out"));
    std::fs::create_dir_all(&out).map_err(|e| HarnessError::io(&out, e))?;
    for (name, text) in &first.files {
        manifest::write_text(&out, name, text)?;
    }
    let summary = accept::acceptance_summary(&criteria);
    let summary_text =
        serde_json::to_string_pretty(&summary).expect("summary serializes") + "\n";
    manifest::write_text(&out, "acceptance_summary.json", &summary_text)?;

    let failed = criteria.iter().filter(|c| !c.passed).count();
    if failed > 0 {
        return Err(HarnessError::Acceptance {
            failed,
            total: criteria.len(),
        });
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let threads = read_threads()?;
    let pool = build_pool(threads)?;
    match cli.command {
        Command::CantorAnalyze(a) => run_experiment(Experiment::CantorAnalyze, a, &pool),
        Command::Hurewicz(a) => run_experiment(Experiment::Hurewicz, a, &pool),
        Command::Skew(a) => run_experiment(Experiment::Skew, a, &pool),
        Command::MaharamDiagnostic(a) => run_experiment(Experiment::MaharamDiagnostic, a, &pool),
        Command::Exponents(a) => run_experiment(Experiment::Exponents, a, &pool),
        Command::Identities(a) => run_experiment(Experiment::Identities, a, &pool),
        Command::Accept(a) => run_accept(a, &pool, threads),
        Command::EmitPlotdata(a) => {
            let table = pool.install(|| plotdata::emit_plotdata(&a.dirs))?;
            match a.out {
                Some(path) => {
                    std::fs::write(&path, &table).map_err(|e| HarnessError::io(&path, e))?;
                }
                None => print!("{table}"),
            }
            Ok(())
        }
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
