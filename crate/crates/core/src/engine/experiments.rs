//! Multi-run harness: policy comparison, ablation and sensitivity sweeps.
//!
//! Runs are independent and fan out over a rayon pool; results are always collected in
//! `(configuration, seed)` order so reports are identical regardless of thread count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::demand::{scale_scenario, DemandError};
use crate::policies::PolicyKind;
use crate::scenario::Scenario;
use crate::stats::{mean, sample_std};

use super::{run, AgentToggles, EngineError, Metrics, RunConfig};

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "REPLENISH_SIM_THREADS";

pub const DEFAULT_SEEDS: std::ops::RangeInclusive<u64> = 1..=30;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("at least one policy is required")]
    NoPolicies,
    #[error("at least one seed is required")]
    NoSeeds,
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Demand(#[from] DemandError),
}

/// A labelled run configuration without a seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Arm {
    pub label: String,
    pub policy: PolicyKind,
    pub toggles: AgentToggles,
}

impl Arm {
    pub fn policy(policy: PolicyKind) -> Self {
        Arm { label: policy.name().to_string(), policy, toggles: AgentToggles::for_policy(policy) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricStat {
    pub metric: String,
    pub mean: f64,
    pub std: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArmResult {
    pub arm: Arm,
    /// Metrics per seed, aligned with [`ComparisonReport::seeds`].
    pub runs: Vec<Metrics>,
    pub stats: Vec<MetricStat>,
    /// Per seed, metric differences against the first arm, in [`Metrics::named`] order.
    pub paired_deltas: Vec<Vec<f64>>,
}

impl ArmResult {
    pub fn stat(&self, metric: &str) -> Option<&MetricStat> {
        self.stats.iter().find(|s| s.metric == metric)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub scenario_name: String,
    pub seeds: Vec<u64>,
    pub arms: Vec<ArmResult>,
}

impl ComparisonReport {
    pub fn arm(&self, label: &str) -> Option<&ArmResult> {
        self.arms.iter().find(|a| a.arm.label == label)
    }

    /// Names of the metrics carried in `stats` and `paired_deltas`.
    pub fn metric_names(&self) -> Vec<&'static str> {
        Metrics::default().named().into_iter().map(|(n, _)| n).collect()
    }
}

pub type AblationReport = ComparisonReport;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensitivityCell {
    pub demand_factor: f64,
    pub lead_factor: f64,
    pub mean_total_cost: f64,
    pub mean_cost_per_unit_demand: f64,
    /// Relative change against the unscaled scenario.
    pub rel_total_cost: f64,
    pub rel_cost_per_unit_demand: f64,
    pub runs: Vec<Metrics>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensitivityReport {
    pub scenario_name: String,
    pub policy: PolicyKind,
    pub seeds: Vec<u64>,
    pub baseline_total_cost: f64,
    pub baseline_cost_per_unit_demand: f64,
    pub cells: Vec<SensitivityCell>,
}

impl SensitivityReport {
    /// Largest absolute relative change of cost per unit demand over the grid.
    pub fn max_rel_cost_per_unit_demand(&self) -> f64 {
        self.cells.iter().map(|c| c.rel_cost_per_unit_demand.abs()).fold(0.0, f64::max)
    }
}

fn thread_cap() -> Option<usize> {
    std::env::var(THREADS_ENV).ok()?.trim().parse().ok().filter(|&n: &usize| n > 0)
}

fn in_pool<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    match thread_cap().and_then(|n| rayon::ThreadPoolBuilder::new().num_threads(n).build().ok()) {
        Some(pool) => pool.install(f),
        None => f(),
    }
}

/// Runs every `(scenario, arm, seed)` triple; output is indexed `[scenario][arm][seed]`.
fn run_all(scenarios: &[Scenario], arms: &[Arm], seeds: &[u64]) -> Result<Vec<Vec<Vec<Metrics>>>, EngineError> {
    let jobs: Vec<(usize, usize, u64)> = (0..scenarios.len())
        .flat_map(|s| (0..arms.len()).flat_map(move |a| seeds.iter().map(move |&seed| (s, a, seed))))
        .collect();
    let results: Vec<Result<Metrics, EngineError>> = in_pool(|| {
        jobs.par_iter()
            .map(|&(s, a, seed)| {
                let config = RunConfig { policy: arms[a].policy, seed, toggles: arms[a].toggles };
                run(&scenarios[s], &config).map(|r| r.metrics)
            })
            .collect()
    });
    let mut it = results.into_iter();
    let mut out = Vec::with_capacity(scenarios.len());
    for _ in scenarios {
        let mut per_arm = Vec::with_capacity(arms.len());
        for _ in arms {
            per_arm.push(it.by_ref().take(seeds.len()).collect::<Result<Vec<_>, _>>()?);
        }
        out.push(per_arm);
    }
    Ok(out)
}

fn summarize(scenario: &Scenario, arms: &[Arm], seeds: &[u64], runs: Vec<Vec<Metrics>>) -> ComparisonReport {
    let named: Vec<Vec<Vec<f64>>> = runs
        .iter()
        .map(|per_seed| per_seed.iter().map(|m| m.named().into_iter().map(|(_, v)| v).collect()).collect())
        .collect();
    let names: Vec<&str> = Metrics::default().named().into_iter().map(|(n, _)| n).collect();
    let arms = arms
        .iter()
        .zip(runs)
        .enumerate()
        .map(|(a, (arm, per_seed))| {
            let stats = names
                .iter()
                .enumerate()
                .map(|(k, name)| {
                    let xs: Vec<f64> = named[a].iter().map(|v| v[k]).collect();
                    MetricStat { metric: name.to_string(), mean: mean(&xs), std: sample_std(&xs) }
                })
                .collect();
            let paired_deltas = named[a]
                .iter()
                .zip(&named[0])
                .map(|(mine, base)| mine.iter().zip(base).map(|(x, b)| x - b).collect())
                .collect();
            ArmResult { arm: arm.clone(), runs: per_seed, stats, paired_deltas }
        })
        .collect();
    ComparisonReport { scenario_name: scenario.name.clone(), seeds: seeds.to_vec(), arms }
}

/// Evaluates labelled configurations under common random numbers.
pub fn run_arms(scenario: &Scenario, arms: &[Arm], seeds: &[u64]) -> Result<ComparisonReport, ExperimentError> {
    if arms.is_empty() {
        return Err(ExperimentError::NoPolicies);
    }
    if seeds.is_empty() {
        return Err(ExperimentError::NoSeeds);
    }
    let mut runs = run_all(std::slice::from_ref(scenario), arms, seeds)?;
    Ok(summarize(scenario, arms, seeds, runs.remove(0)))
}

/// Each policy with its default agent toggles. Deltas are against the first policy listed.
pub fn run_comparison(scenario: &Scenario, policies: &[PolicyKind], seeds: &[u64]) -> Result<ComparisonReport, ExperimentError> {
    let arms: Vec<Arm> = policies.iter().map(|&p| Arm::policy(p)).collect();
    run_arms(scenario, &arms, seeds)
}

/// The agentic configurations compared by [`run_ablation`].
pub fn ablation_arms() -> Vec<Arm> {
    let full = AgentToggles::ALL;
    [
        ("full", full),
        ("no_negotiation", AgentToggles { negotiation: false, ..full }),
        ("no_trend", AgentToggles { trend: false, ..full }),
        ("no_supplier_selection", AgentToggles { supplier_selection: false, ..full }),
    ]
    .into_iter()
    .map(|(label, toggles)| Arm { label: label.to_string(), policy: PolicyKind::Agentic, toggles })
    .collect()
}

pub fn run_ablation(scenario: &Scenario, seeds: &[u64]) -> Result<AblationReport, ExperimentError> {
    run_arms(scenario, &ablation_arms(), seeds)
}

pub const DEFAULT_FACTORS: [f64; 3] = [0.8, 1.0, 1.2];

/// Runs `policy` on every `(demand_factor, lead_factor)` pair of the grid.
pub fn run_sensitivity(
    scenario: &Scenario,
    policy: PolicyKind,
    demand_factors: &[f64],
    lead_factors: &[f64],
    seeds: &[u64],
) -> Result<SensitivityReport, ExperimentError> {
    if seeds.is_empty() {
        return Err(ExperimentError::NoSeeds);
    }
    let pairs: Vec<(f64, f64)> = demand_factors.iter().flat_map(|&d| lead_factors.iter().map(move |&l| (d, l))).collect();
    let mut scenarios = vec![scenario.clone()];
    for &(d, l) in &pairs {
        scenarios.push(scale_scenario(scenario, d, l)?);
    }
    let arm = Arm::policy(policy);
    let runs = run_all(&scenarios, std::slice::from_ref(&arm), seeds)?;
    let means = |ms: &[Metrics]| {
        let total: Vec<f64> = ms.iter().map(|m| m.total_cost.as_currency()).collect();
        let unit: Vec<f64> = ms.iter().map(|m| m.cost_per_unit_demand()).collect();
        (mean(&total), mean(&unit))
    };
    let mut runs = runs.into_iter().map(|mut per_arm| per_arm.remove(0));
    let base_runs = runs.next().expect("baseline runs");
    let (base_total, base_unit) = means(&base_runs);
    let rel = |x: f64, base: f64| if base == 0.0 { 0.0 } else { x / base - 1.0 };
    let cells = pairs
        .into_iter()
        .zip(runs)
        .map(|((d, l), ms)| {
            let (total, unit) = means(&ms);
            SensitivityCell {
                demand_factor: d,
                lead_factor: l,
                mean_total_cost: total,
                mean_cost_per_unit_demand: unit,
                rel_total_cost: rel(total, base_total),
                rel_cost_per_unit_demand: rel(unit, base_unit),
                runs: ms,
            }
        })
        .collect();
    Ok(SensitivityReport {
        scenario_name: scenario.name.clone(),
        policy,
        seeds: seeds.to_vec(),
        baseline_total_cost: base_total,
        baseline_cost_per_unit_demand: base_unit,
        cells,
    })
}
