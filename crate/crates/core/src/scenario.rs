//! Scenario files: TOML schema, validation and the bundled benchmarks.
//!
//! Money fields are integer cents. Unknown keys are rejected. Validation reports every problem
//! found, each with the section it came from and, where possible, a line number.

use std::collections::HashSet;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::coordination::GlobalConstraints;
use crate::demand::{DemandModel, DisruptionModel};
use crate::forecast::ForecastMethod;
use crate::inventory::{Category, Money, Sku, SupplierOffer};
use crate::negotiation::NegotiationParams;
use crate::policies::PolicyParams;
use crate::supplier::SupplierScoreWeights;
use crate::trend::{GateMode, GatePolicy, SignalShape, TrendScoreParams};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SkuEntry {
    pub id: String,
    pub category: Category,
    pub holding_cost: Money,
    pub stockout_penalty: Money,
    #[serde(default)]
    pub decay_fraction: f64,
    #[serde(default)]
    pub shelf_life: Option<u32>,
    #[serde(default)]
    pub unit_margin: Money,
    #[serde(default)]
    pub initial_stock: u64,
    pub demand: DemandModel,
}

impl SkuEntry {
    pub fn sku(&self) -> Sku {
        Sku {
            id: self.id.clone(),
            category: self.category,
            holding_cost: self.holding_cost,
            stockout_penalty: self.stockout_penalty,
            decay_fraction: self.decay_fraction,
            shelf_life: self.shelf_life,
            unit_margin: self.unit_margin,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SignalSpec {
    pub shape: SignalShape,
    /// Relative uniform noise on each observation.
    #[serde(default)]
    pub noise: f64,
    #[serde(default)]
    pub sentiment: f64,
    #[serde(default = "default_signal_window")]
    pub window: usize,
}

fn default_signal_window() -> usize {
    7
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrendCandidate {
    pub sku: SkuEntry,
    pub signal: SignalSpec,
    /// Initial forecast per unit of signal volume at adoption.
    pub conversion: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrendConfig {
    pub score: TrendScoreParams,
    pub gate: GatePolicy,
}

impl Default for TrendConfig {
    fn default() -> Self {
        TrendConfig {
            score: TrendScoreParams::default(),
            gate: GatePolicy { threshold: 0.8, persistence: 3, mode: GateMode::Auto, human_approves: false },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ForecastConfig {
    pub method: ForecastMethod,
    pub error_window: usize,
}

impl Default for ForecastConfig {
    fn default() -> Self {
        ForecastConfig { method: ForecastMethod::ExpSmoothing { alpha: 0.3 }, error_window: 14 }
    }
}

fn default_horizon() -> u32 {
    91
}

fn default_warmup() -> u32 {
    28
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub schema_version: u32,
    #[serde(default)]
    pub name: String,
    #[serde(default = "default_horizon")]
    pub horizon: u32,
    /// Leading periods excluded from metrics.
    #[serde(default = "default_warmup")]
    pub warmup: u32,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default)]
    pub policy: PolicyParams,
    #[serde(default)]
    pub forecast: ForecastConfig,
    #[serde(default)]
    pub supplier_weights: SupplierScoreWeights,
    #[serde(default)]
    pub negotiation: NegotiationParams,
    #[serde(default)]
    pub constraints: GlobalConstraints,
    #[serde(default)]
    pub disruptions: DisruptionModel,
    pub skus: Vec<SkuEntry>,
    pub offers: Vec<SupplierOffer>,
    #[serde(default)]
    pub trend: TrendConfig,
    #[serde(default)]
    pub trend_candidates: Vec<TrendCandidate>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Issue {
    /// Section path such as `skus[2]` or `offers[0]`.
    pub section: String,
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}, {}: {}", self.section, self.message),
            None => write!(f, "{}: {}", self.section, self.message),
        }
    }
}

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{} validation error(s):\n{}", .0.len(), .0.iter().map(|i| format!("  {i}")).collect::<Vec<_>>().join("\n"))]
    Invalid(Vec<Issue>),
    #[error("unknown bundled scenario '{0}' (valid: B0, B1, B2)")]
    UnknownBundled(String),
}

impl ScenarioError {
    pub fn issues(&self) -> &[Issue] {
        match self {
            ScenarioError::Invalid(v) => v,
            _ => &[],
        }
    }
}

/// Line of the `n`-th `[[header]]` array entry in `source`, 1-based.
fn array_entry_line(source: &str, header: &str, n: usize) -> Option<usize> {
    let needle = format!("[[{header}]]");
    source
        .lines()
        .enumerate()
        .filter(|(_, l)| l.trim() == needle)
        .nth(n)
        .map(|(i, _)| i + 1)
}

fn table_line(source: &str, header: &str) -> Option<usize> {
    let needle = format!("[{header}]");
    source.lines().position(|l| l.trim() == needle).map(|i| i + 1)
}

impl Scenario {
    /// Parses and validates TOML text.
    pub fn from_toml_str(source: &str) -> Result<Scenario, ScenarioError> {
        let scenario: Scenario = toml::from_str(source).map_err(|e| ScenarioError::Parse(e.to_string()))?;
        let mut issues = scenario.validate();
        for issue in issues.iter_mut() {
            issue.line = locate(source, &issue.section);
        }
        if issues.is_empty() {
            Ok(scenario)
        } else {
            Err(ScenarioError::Invalid(issues))
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Scenario, ScenarioError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io { path: path.display().to_string(), source })?;
        Scenario::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("scenario serializes")
    }

    /// Bundled benchmark by name: `B0` (micro), `B1` (mixed mart) or `B2` (mixed mart plus trend
    /// candidates).
    pub fn bundled(name: &str) -> Result<Scenario, ScenarioError> {
        let text = bundled_source(name).ok_or_else(|| ScenarioError::UnknownBundled(name.to_string()))?;
        Scenario::from_toml_str(text)
    }

    /// SHA-256 of the canonical JSON encoding, hex.
    pub fn hash(&self) -> String {
        let json = serde_json::to_vec(self).expect("scenario serializes");
        let digest = Sha256::digest(&json);
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Active SKUs followed by trend candidates.
    pub fn all_sku_entries(&self) -> impl Iterator<Item = &SkuEntry> {
        self.skus.iter().chain(self.trend_candidates.iter().map(|c| &c.sku))
    }

    /// Offers for `sku_id` in file order.
    pub fn offers_for<'a>(&'a self, sku_id: &'a str) -> impl Iterator<Item = &'a SupplierOffer> + 'a {
        self.offers.iter().filter(move |o| o.sku_id == sku_id)
    }

    pub fn has_disruptions(&self) -> bool {
        !self.disruptions.is_none()
    }

    /// Every problem with the scenario, not just the first.
    pub fn validate(&self) -> Vec<Issue> {
        let mut issues = Vec::new();
        let mut push = |section: &str, message: String| issues.push(Issue { section: section.to_string(), line: None, message });

        if self.schema_version != SCHEMA_VERSION {
            push("schema_version", format!("unsupported schema_version {} (expected {SCHEMA_VERSION})", self.schema_version));
        }
        if self.horizon <= self.warmup {
            push("horizon", format!("horizon {} must exceed warmup {}", self.horizon, self.warmup));
        }
        for m in self.policy.validate() {
            push("policy", m);
        }
        if let Err(e) = self.forecast.method.validate() {
            push("forecast", e.to_string());
        }
        if self.forecast.error_window == 0 {
            push("forecast", "error_window must be >= 1".into());
        }
        if let Err(e) = self.supplier_weights.validate() {
            push("supplier_weights", e.to_string());
        }
        for m in self.negotiation.validate() {
            push("negotiation", m);
        }
        for m in self.constraints.validate() {
            push("constraints", m);
        }
        for m in self.disruptions.validate() {
            push("disruptions", m);
        }
        if self.skus.is_empty() {
            push("skus", "at least one SKU is required".into());
        }

        let mut ids = HashSet::new();
        let entries = self
            .skus
            .iter()
            .enumerate()
            .map(|(i, e)| (format!("skus[{i}]"), e))
            .chain(self.trend_candidates.iter().enumerate().map(|(i, c)| (format!("trend_candidates[{i}]"), &c.sku)));
        for (section, e) in entries {
            if !ids.insert(e.id.as_str()) {
                push(&section, format!("duplicate SKU id '{}'", e.id));
            }
            for m in e.sku().validate() {
                push(&section, format!("SKU '{}': {m}", e.id));
            }
            if let Err(err) = e.demand.validate() {
                push(&section, format!("SKU '{}': {err}", e.id));
            }
        }

        let mut pairs = HashSet::new();
        for (i, o) in self.offers.iter().enumerate() {
            let section = format!("offers[{i}]");
            if !ids.contains(o.sku_id.as_str()) {
                push(&section, format!("offer from supplier '{}' references unknown SKU '{}'", o.supplier_id, o.sku_id));
            }
            if !pairs.insert((o.supplier_id.as_str(), o.sku_id.as_str())) {
                push(&section, format!("duplicate offer from supplier '{}' for SKU '{}'", o.supplier_id, o.sku_id));
            }
            for m in o.validate() {
                push(&section, format!("supplier '{}', SKU '{}': {m}", o.supplier_id, o.sku_id));
            }
        }
        for e in self.all_sku_entries() {
            if !self.offers.iter().any(|o| o.sku_id == e.id) {
                push("offers", format!("SKU '{}' has no supplier offer", e.id));
            }
        }

        if self.trend.gate.persistence < 1 {
            push("trend", "gate.persistence must be >= 1".into());
        }
        for (i, c) in self.trend_candidates.iter().enumerate() {
            let section = format!("trend_candidates[{i}]");
            if !(-1.0..=1.0).contains(&c.signal.sentiment) {
                push(&section, format!("sentiment {} outside [-1, 1]", c.signal.sentiment));
            }
            if c.signal.window < 2 {
                push(&section, "signal window must be >= 2".into());
            }
            if !(c.conversion >= 0.0) {
                push(&section, "conversion must be >= 0".into());
            }
        }
        issues
    }
}

fn locate(source: &str, section: &str) -> Option<usize> {
    if let Some((head, rest)) = section.split_once('[') {
        if let Ok(n) = rest.trim_end_matches(']').parse::<usize>() {
            return array_entry_line(source, head, n);
        }
    }
    table_line(source, section).or_else(|| {
        let prefix = format!("{section} ");
        source.lines().position(|l| l.trim_start().starts_with(&prefix)).map(|i| i + 1)
    })
}

pub fn bundled_source(name: &str) -> Option<&'static str> {
    match name.to_ascii_uppercase().as_str() {
        "B0" => Some(include_str!("../scenarios/b0_micro.toml")),
        "B1" => Some(include_str!("../scenarios/b1_mixed_mart.toml")),
        "B2" => Some(include_str!("../scenarios/b2_trend.toml")),
        _ => None,
    }
}
