//! Inventory monitoring and reorder decision rules.
//!
//! Every `decide_*` function is pure: it sees a [`SkuState`] snapshot (on-hand, inventory
//! position, lead time) plus whatever the rule needs, and returns a [`ReorderProposal`].
//! Triggers use the inventory position so stock already in transit is never re-ordered.

pub mod oracle;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::forecast::ForecastStats;
use crate::inventory::{Money, Sku};
use crate::stats::{normal_loss, normal_quantile, round_half_up};

#[derive(Debug, Error, PartialEq)]
pub enum PolicyError {
    #[error("holding cost must be positive for EOQ")]
    ZeroHoldingCost,
    #[error("unknown policy '{0}' (valid: static_rop, rule80, sQ, newsvendor, agentic, oracle)")]
    UnknownPolicy(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PolicyKind {
    #[serde(rename = "static_rop")]
    StaticRop,
    #[serde(rename = "rule80")]
    Rule80,
    #[serde(rename = "sQ", alias = "sq")]
    SQ,
    #[serde(rename = "newsvendor")]
    Newsvendor,
    #[serde(rename = "agentic")]
    Agentic,
    #[serde(rename = "oracle")]
    Oracle,
}

impl PolicyKind {
    pub const ALL: [PolicyKind; 6] = [
        PolicyKind::StaticRop,
        PolicyKind::Rule80,
        PolicyKind::SQ,
        PolicyKind::Newsvendor,
        PolicyKind::Agentic,
        PolicyKind::Oracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PolicyKind::StaticRop => "static_rop",
            PolicyKind::Rule80 => "rule80",
            PolicyKind::SQ => "sQ",
            PolicyKind::Newsvendor => "newsvendor",
            PolicyKind::Agentic => "agentic",
            PolicyKind::Oracle => "oracle",
        }
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PolicyKind {
    type Err = PolicyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PolicyKind::ALL
            .into_iter()
            .find(|k| k.name() == s || (s == "sq" && *k == PolicyKind::SQ))
            .ok_or_else(|| PolicyError::UnknownPolicy(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PolicyParams {
    pub kind: PolicyKind,
    /// Service-level factor for reorder points.
    pub z: f64,
    pub review_period: u32,
    pub order_fixed_cost: Money,
    /// Forecast inflation applied per unit of trend boost by the agentic rule.
    pub buffer_fraction: f64,
    /// Look-ahead of the monitor's projection, in periods.
    pub monitor_horizon: u32,
}

impl Default for PolicyParams {
    fn default() -> Self {
        PolicyParams {
            kind: PolicyKind::Agentic,
            z: 1.645,
            review_period: 1,
            order_fixed_cost: Money(0),
            buffer_fraction: 0.5,
            monitor_horizon: 1,
        }
    }
}

impl PolicyParams {
    pub fn validate(&self) -> Vec<String> {
        let mut errors = Vec::new();
        if !(self.z >= 0.0) {
            errors.push(format!("z {} must be >= 0", self.z));
        }
        if self.review_period < 1 {
            errors.push("review_period must be >= 1".into());
        }
        if self.order_fixed_cost < Money::ZERO {
            errors.push("order_fixed_cost must be >= 0".into());
        }
        if !(self.buffer_fraction >= 0.0) {
            errors.push(format!("buffer_fraction {} must be >= 0", self.buffer_fraction));
        }
        errors
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rationale {
    NoOrder,
    StaticRop,
    Rule80,
    SQ,
    Newsvendor,
    Agentic,
    Oracle,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReorderProposal {
    pub sku_id: String,
    /// Zero means no order.
    pub quantity: u64,
    pub needed_by: u32,
    /// Expected stockout penalty the order avoids, in cents.
    pub criticality: f64,
    pub rationale: Rationale,
}

impl ReorderProposal {
    pub fn none(sku_id: &str, period: u32) -> Self {
        ReorderProposal { sku_id: sku_id.to_string(), quantity: 0, needed_by: period, criticality: 0.0, rationale: Rationale::NoOrder }
    }
}

/// What a reorder rule sees of one SKU in one period.
#[derive(Debug, Clone, Copy)]
pub struct SkuState<'a> {
    pub sku: &'a Sku,
    pub period: u32,
    pub on_hand: u64,
    /// On-hand plus promised in-transit units.
    pub position: u64,
    /// Lead time of the supplier the order would go to.
    pub lead_time: u32,
}

/// `mu * L + z * sigma * sqrt(L)`, rounded half up.
pub fn compute_rop(mu: f64, sigma: f64, lead_time: u32, z: f64) -> u64 {
    let l = f64::from(lead_time);
    round_half_up(mu * l + z * sigma * l.sqrt())
}

/// `sqrt(2 K D / h)`, rounded half up, at least 1. `demand` and `holding` share a time base.
pub fn compute_eoq(demand: f64, order_cost: f64, holding: f64) -> Result<u64, PolicyError> {
    if holding <= 0.0 {
        return Err(PolicyError::ZeroHoldingCost);
    }
    Ok(round_half_up((2.0 * order_cost * demand.max(0.0) / holding).sqrt()).max(1))
}

/// Expected units short over a window with demand ~ N(mean, std), starting from `position`.
pub fn expected_shortfall(position: u64, mean: f64, std: f64) -> f64 {
    let x = position as f64;
    if std <= 0.0 {
        return (mean - x).max(0.0);
    }
    std * normal_loss((x - mean) / std)
}

fn criticality(state: &SkuState<'_>, mean: f64, std: f64) -> f64 {
    state.sku.stockout_penalty.0 as f64 * expected_shortfall(state.position, mean, std)
}

/// Monitor input for one SKU.
#[derive(Debug, Clone)]
pub struct MonitorEntry<'a> {
    pub sku: &'a Sku,
    pub on_hand: u64,
    pub pipeline: u64,
    pub forecast: ForecastStats,
    pub lead_time: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Flag {
    pub sku_id: String,
    /// Penalty-weighted gap between the reorder point and the projected position.
    pub criticality: f64,
}

/// Flags every SKU whose projected position `on_hand + pipeline - mu * h` falls below its reorder
/// point. Sorted by criticality descending, then SKU id.
pub fn monitor_flags(entries: &[MonitorEntry<'_>], params: &PolicyParams, horizon: u32) -> Vec<Flag> {
    let mut flags: Vec<Flag> = entries
        .iter()
        .filter_map(|e| {
            let rop = compute_rop(e.forecast.mean_estimate, e.forecast.error_std, e.lead_time, params.z) as f64;
            let projected = (e.on_hand + e.pipeline) as f64 - e.forecast.mean_estimate * f64::from(horizon);
            (projected < rop).then(|| Flag {
                sku_id: e.sku.id.clone(),
                criticality: e.sku.stockout_penalty.0 as f64 * (rop - projected),
            })
        })
        .collect();
    flags.sort_by(|a, b| b.criticality.total_cmp(&a.criticality).then_with(|| a.sku_id.cmp(&b.sku_id)));
    flags
}

/// Frozen thresholds for the static reorder-point baseline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StaticThresholds {
    pub reorder_point: u64,
    pub order_up_to: u64,
}

impl StaticThresholds {
    /// Reorder point from history mean/std, order-up-to level one EOQ above it.
    pub fn calibrate(mu: f64, sigma: f64, lead_time: u32, sku: &Sku, params: &PolicyParams) -> Self {
        let rop = compute_rop(mu, sigma, lead_time, params.z);
        let eoq = compute_eoq(mu, params.order_fixed_cost.0 as f64, sku.holding_cost.0 as f64).unwrap_or(1);
        StaticThresholds { reorder_point: rop, order_up_to: rop + eoq }
    }
}

pub fn decide_static_rop(state: &SkuState<'_>, thresholds: &StaticThresholds) -> ReorderProposal {
    if state.position >= thresholds.reorder_point {
        return ReorderProposal::none(&state.sku.id, state.period);
    }
    ReorderProposal {
        sku_id: state.sku.id.clone(),
        quantity: thresholds.order_up_to - state.position,
        needed_by: state.period + state.lead_time,
        criticality: state.sku.stockout_penalty.0 as f64 * (thresholds.reorder_point - state.position) as f64,
        rationale: Rationale::StaticRop,
    }
}

/// Orders back up to `max_stock` once on-hand has fallen to 20% of it.
pub fn decide_rule80(state: &SkuState<'_>, max_stock: u64) -> ReorderProposal {
    // on_hand <= 0.2 * max_stock, in integers.
    if 5 * state.on_hand > max_stock {
        return ReorderProposal::none(&state.sku.id, state.period);
    }
    let quantity = max_stock.saturating_sub(state.on_hand);
    ReorderProposal {
        sku_id: state.sku.id.clone(),
        quantity,
        needed_by: state.period + state.lead_time,
        criticality: state.sku.stockout_penalty.0 as f64 * quantity as f64,
        rationale: if quantity > 0 { Rationale::Rule80 } else { Rationale::NoOrder },
    }
}

/// Continuous-review (s, Q): order one EOQ when the position drops below the reorder point.
pub fn decide_sq(state: &SkuState<'_>, forecast: &ForecastStats, params: &PolicyParams) -> ReorderProposal {
    let s = compute_rop(forecast.mean_estimate, forecast.error_std, state.lead_time, params.z);
    if state.position >= s {
        return ReorderProposal::none(&state.sku.id, state.period);
    }
    let q = compute_eoq(forecast.mean_estimate, params.order_fixed_cost.0 as f64, state.sku.holding_cost.0 as f64).unwrap_or(1);
    let l = f64::from(state.lead_time);
    ReorderProposal {
        sku_id: state.sku.id.clone(),
        quantity: q,
        needed_by: state.period + state.lead_time,
        criticality: criticality(state, forecast.mean_estimate * l, forecast.error_std * l.sqrt()),
        rationale: Rationale::SQ,
    }
}

/// Largest critical ratio used when holding is free.
pub const MAX_CRITICAL_RATIO: f64 = 0.999;

/// Critical ratio `p / (p + h (L + R))`, capped at [`MAX_CRITICAL_RATIO`]. `None` when `p = 0`.
pub fn critical_ratio(sku: &Sku, lead_time: u32, review_period: u32) -> Option<f64> {
    let p = sku.stockout_penalty.0 as f64;
    if p <= 0.0 {
        return None;
    }
    let overage = sku.holding_cost.0 as f64 * f64::from(lead_time + review_period);
    Some((p / (p + overage)).min(MAX_CRITICAL_RATIO))
}

/// Newsvendor order-up-to level over the protection interval `L + R`.
pub fn newsvendor_level(mu: f64, sigma: f64, lead_time: u32, review_period: u32, ratio: f64) -> u64 {
    let t = f64::from(lead_time + review_period);
    round_half_up(mu * t + normal_quantile(ratio) * sigma * t.sqrt())
}

fn newsvendor_core(state: &SkuState<'_>, mu: f64, sigma: f64, review_period: u32, rationale: Rationale) -> ReorderProposal {
    let Some(ratio) = critical_ratio(state.sku, state.lead_time, review_period) else {
        return ReorderProposal::none(&state.sku.id, state.period);
    };
    let level = newsvendor_level(mu, sigma, state.lead_time, review_period, ratio);
    let quantity = level.saturating_sub(state.position);
    let t = f64::from(state.lead_time + review_period);
    ReorderProposal {
        sku_id: state.sku.id.clone(),
        quantity,
        needed_by: state.period + state.lead_time,
        criticality: if quantity > 0 { criticality(state, mu * t, sigma * t.sqrt()) } else { 0.0 },
        rationale: if quantity > 0 { rationale } else { Rationale::NoOrder },
    }
}

pub fn decide_newsvendor(state: &SkuState<'_>, forecast: &ForecastStats, params: &PolicyParams) -> ReorderProposal {
    newsvendor_core(state, forecast.mean_estimate, forecast.error_std, params.review_period, Rationale::Newsvendor)
}

/// Decay rates above this are treated as this when inflating demand for spoilage.
const MAX_DECAY_ADJUSTMENT: f64 = 0.95;

/// Forecast mean after the trend buffer and the spoilage adjustment `1 / (1 - decay)`.
pub fn agentic_mean(sku: &Sku, mu: f64, trend_boost: f64, buffer_fraction: f64) -> f64 {
    let boosted = mu * (1.0 + buffer_fraction * trend_boost.clamp(0.0, 1.0));
    if sku.decay_fraction > 0.0 {
        boosted / (1.0 - sku.decay_fraction.min(MAX_DECAY_ADJUSTMENT))
    } else {
        boosted
    }
}

/// Newsvendor with a trend-driven forecast buffer and a spoilage-adjusted mean.
pub fn decide_agentic(state: &SkuState<'_>, forecast: &ForecastStats, trend_boost: f64, params: &PolicyParams) -> ReorderProposal {
    let mu = agentic_mean(state.sku, forecast.mean_estimate, trend_boost, params.buffer_fraction);
    newsvendor_core(state, mu, forecast.error_std, params.review_period, Rationale::Agentic)
}
