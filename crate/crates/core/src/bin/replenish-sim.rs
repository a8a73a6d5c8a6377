use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use replenish_core::engine::{run, run_ablation, run_comparison, run_sensitivity, RunConfig, DEFAULT_FACTORS};
use replenish_core::output::{summary_text, write_comparison, write_run, write_sensitivity};
use replenish_core::scenario::bundled_source;
use replenish_core::{PolicyKind, Scenario};

/// Multi-agent inventory replenishment simulator.
#[derive(Parser)]
#[command(name = "replenish-sim", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one policy for one seed.
    Simulate {
        /// Scenario file, or a bundled benchmark name (B0, B1, B2).
        #[arg(long)]
        scenario: String,
        #[arg(long)]
        policy: PolicyKind,
        /// Defaults to the scenario's master seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare policies under common random numbers.
    Compare {
        #[arg(long)]
        scenario: String,
        /// Comma-separated policy names; deltas are against the first.
        #[arg(long, value_delimiter = ',', default_value = "static_rop,rule80,sQ,newsvendor,agentic,oracle")]
        policies: Vec<PolicyKind>,
        /// `N..M` (inclusive), `N`, or a comma-separated list.
        #[arg(long, value_parser = parse_seeds, default_value = "1..30")]
        seeds: Seeds,
        #[arg(long)]
        out: PathBuf,
    },
    /// Agentic policy with each agent switched off in turn.
    Ablate {
        #[arg(long)]
        scenario: String,
        #[arg(long, value_parser = parse_seeds, default_value = "1..30")]
        seeds: Seeds,
        #[arg(long)]
        out: PathBuf,
    },
    /// Demand and lead-time scaling grid.
    Sweep {
        #[arg(long)]
        scenario: String,
        #[arg(long, default_value = "agentic")]
        policy: PolicyKind,
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_FACTORS)]
        demand_factors: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_FACTORS)]
        lead_factors: Vec<f64>,
        #[arg(long, value_parser = parse_seeds, default_value = "1..30")]
        seeds: Seeds,
        #[arg(long)]
        out: PathBuf,
    },
    /// Parse and validate a scenario without running it.
    Validate {
        #[arg(long)]
        scenario: String,
    },
}

#[derive(Debug, Clone)]
struct Seeds(Vec<u64>);

fn parse_seeds(s: &str) -> Result<Seeds, String> {
    let bad = |_| format!("invalid seed list '{s}'");
    let seeds: Vec<u64> = if let Some((a, b)) = s.split_once("..") {
        let a: u64 = a.trim().parse().map_err(bad)?;
        let b: u64 = b.trim_start_matches('=').trim().parse().map_err(bad)?;
        if a > b {
            return Err(format!("empty seed range '{s}'"));
        }
        (a..=b).collect()
    } else {
        s.split(',').map(|x| x.trim().parse().map_err(bad)).collect::<Result<_, _>>()?
    };
    if seeds.is_empty() {
        return Err("no seeds given".into());
    }
    Ok(Seeds(seeds))
}

fn load(spec: &str) -> Result<Scenario> {
    let path = Path::new(spec);
    if !path.exists() && bundled_source(spec).is_some() {
        return Ok(Scenario::bundled(spec)?);
    }
    Scenario::load(path).with_context(|| format!("scenario {spec}"))
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::Simulate { scenario, policy, seed, out } => {
            let sc = load(&scenario)?;
            let seed = seed.unwrap_or(sc.master_seed);
            let report = run(&sc, &RunConfig::new(policy, seed))?;
            write_run(&report, &out).with_context(|| format!("writing {}", out.display()))?;
            print!("{}", summary_text(&report));
        }
        Command::Compare { scenario, policies, seeds, out } => {
            if policies.is_empty() {
                bail!("no policies given");
            }
            let sc = load(&scenario)?;
            let report = run_comparison(&sc, &policies, &seeds.0)?;
            write_comparison(&report, &out).with_context(|| format!("writing {}", out.display()))?;
            println!("{} runs written to {}", policies.len() * seeds.0.len(), out.display());
        }
        Command::Ablate { scenario, seeds, out } => {
            let sc = load(&scenario)?;
            let report = run_ablation(&sc, &seeds.0)?;
            write_comparison(&report, &out).with_context(|| format!("writing {}", out.display()))?;
            println!("{} runs written to {}", report.arms.len() * seeds.0.len(), out.display());
        }
        Command::Sweep { scenario, policy, demand_factors, lead_factors, seeds, out } => {
            let sc = load(&scenario)?;
            let report = run_sensitivity(&sc, policy, &demand_factors, &lead_factors, &seeds.0)?;
            write_sensitivity(&report, &out).with_context(|| format!("writing {}", out.display()))?;
            println!(
                "{} cells written to {}; max relative change in cost per unit demand {:.4}",
                report.cells.len(),
                out.display(),
                report.max_rel_cost_per_unit_demand()
            );
        }
        Command::Validate { scenario } => {
            let sc = load(&scenario)?;
            println!("{}: ok ({} SKUs, {} offers, {} trend candidates)", sc.name, sc.skus.len(), sc.offers.len(), sc.trend_candidates.len());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
