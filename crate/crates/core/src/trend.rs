//! Trend discovery: scoring market signals, gating adoption of candidate SKUs, and trend ROI.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::inventory::Money;
use crate::rng::RngStream;

#[derive(Debug, Error, PartialEq)]
pub enum TrendError {
    #[error("series has {len} points, window needs {window}")]
    SeriesTooShort { len: usize, window: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendSignal {
    pub candidate_sku_id: String,
    /// Search-volume proxy, one value per period.
    pub volume_series: Vec<f64>,
    /// In [-1, 1].
    pub sentiment: f64,
    pub window: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrendScoreParams {
    pub slope_weight: f64,
    pub sentiment_weight: f64,
    /// Normalized slope that earns the full slope term.
    pub slope_ref: f64,
}

impl Default for TrendScoreParams {
    fn default() -> Self {
        TrendScoreParams { slope_weight: 0.7, sentiment_weight: 0.3, slope_ref: 0.25 }
    }
}

/// Least-squares slope of `ys` against `0..n`.
pub fn ls_slope(ys: &[f64]) -> f64 {
    let n = ys.len() as f64;
    if ys.len() < 2 {
        return 0.0;
    }
    let x_mean = (n - 1.0) / 2.0;
    let y_mean = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (i, y) in ys.iter().enumerate() {
        let dx = i as f64 - x_mean;
        sxy += dx * (y - y_mean);
        sxx += dx * dx;
    }
    sxy / sxx
}

/// Slope over the window divided by the window mean, floored at zero.
pub fn normalized_slope(window: &[f64]) -> f64 {
    let mean = window.iter().sum::<f64>() / window.len().max(1) as f64;
    if mean <= 0.0 {
        return 0.0;
    }
    (ls_slope(window) / mean).max(0.0)
}

/// The slope term in [0, 1]; also used as the trend boost for adopted SKUs.
pub fn slope_component(window: &[f64], params: &TrendScoreParams) -> f64 {
    (normalized_slope(window) / params.slope_ref).min(1.0)
}

/// Scores the last `window` points of the series observed up to and including period `upto`.
pub fn trend_score_at(signal: &TrendSignal, upto: usize, params: &TrendScoreParams) -> Result<f64, TrendError> {
    let len = (upto + 1).min(signal.volume_series.len());
    if len < signal.window || signal.window == 0 {
        return Err(TrendError::SeriesTooShort { len, window: signal.window });
    }
    let window = &signal.volume_series[len - signal.window..len];
    Ok(params.slope_weight * slope_component(window, params) + params.sentiment_weight * (signal.sentiment + 1.0) / 2.0)
}

/// Scores the most recent window of the full series.
pub fn trend_score(signal: &TrendSignal, params: &TrendScoreParams) -> Result<f64, TrendError> {
    trend_score_at(signal, signal.volume_series.len().saturating_sub(1), params)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GateMode {
    Auto,
    HumanQueue,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GatePolicy {
    pub threshold: f64,
    pub persistence: usize,
    pub mode: GateMode,
    /// Simulated reviewer decision for queued candidates.
    #[serde(default)]
    pub human_approves: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GateDecision {
    Adopt,
    QueueForHuman,
    Reject,
}

/// Adopts when the last `persistence` scores all reach the threshold.
pub fn gate_adopt(scores: &[f64], gate: &GatePolicy) -> GateDecision {
    let k = gate.persistence.max(1);
    if scores.len() < k || !scores[scores.len() - k..].iter().all(|s| *s >= gate.threshold) {
        return GateDecision::Reject;
    }
    match gate.mode {
        GateMode::Auto => GateDecision::Adopt,
        GateMode::HumanQueue => GateDecision::QueueForHuman,
    }
}

/// Synthetic signal shapes standing in for live market feeds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SignalShape {
    Flat { level: f64 },
    Ramp { base: f64, onset: u32, slope: f64 },
    SpikeDecay { base: f64, peak_period: u32, peak: f64, decay: f64 },
}

impl SignalShape {
    pub fn level_at(&self, t: u32) -> f64 {
        match *self {
            SignalShape::Flat { level } => level,
            SignalShape::Ramp { base, onset, slope } => base + slope * f64::from(t.saturating_sub(onset)),
            SignalShape::SpikeDecay { base, peak_period, peak, decay } => {
                if t < peak_period {
                    // Linear build-up over the 5 periods before the peak.
                    let lead = f64::from(peak_period - t);
                    base + (peak - base) * (1.0 - lead / 5.0).max(0.0)
                } else {
                    base + (peak - base) * (1.0 - decay).powi((t - peak_period) as i32)
                }
            }
        }
    }
}

/// Generates `horizon` signal values with multiplicative uniform noise of relative size `noise`.
pub fn generate_signal(shape: &SignalShape, horizon: u32, noise: f64, stream: &RngStream) -> Vec<f64> {
    let mut rng = stream.rng();
    (0..horizon)
        .map(|t| {
            let u: f64 = rng.random();
            (shape.level_at(t) * (1.0 + noise * (2.0 * u - 1.0))).max(0.0)
        })
        .collect()
}

/// Economic outcome of one SKU over an episode.
#[derive(Debug, Clone, PartialEq)]
pub struct SkuOutcome {
    pub sku_id: String,
    pub sales: u64,
    pub unit_margin: Money,
    pub total_cost: Money,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkuRoi {
    pub sku_id: String,
    /// `None` when no cost was attributed.
    pub roi: Option<f64>,
    pub top_seller: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TrendRoiReport {
    pub per_sku: Vec<SkuRoi>,
    pub aggregate_roi: Option<f64>,
    /// Fraction of adopted SKUs whose sales rank in the top quartile of all SKUs.
    pub top_seller_fraction: f64,
}

fn roi(revenue: Money, cost: Money) -> Option<f64> {
    (cost.0 != 0).then(|| (revenue.0 - cost.0) as f64 / cost.0 as f64)
}

/// ROI of adopted SKUs, `(margin * sales - cost) / cost`, plus the share that became top sellers.
pub fn trend_roi(outcomes: &[SkuOutcome], adopted: &[String]) -> TrendRoiReport {
    if adopted.is_empty() {
        return TrendRoiReport::default();
    }
    let mut by_sales: Vec<&SkuOutcome> = outcomes.iter().collect();
    by_sales.sort_by(|a, b| b.sales.cmp(&a.sales).then_with(|| a.sku_id.cmp(&b.sku_id)));
    let top_n = by_sales.len().div_ceil(4);
    let top: Vec<&str> = by_sales[..top_n].iter().map(|o| o.sku_id.as_str()).collect();

    let mut per_sku = Vec::new();
    let (mut revenue, mut cost) = (Money::ZERO, Money::ZERO);
    for id in adopted {
        let Some(o) = outcomes.iter().find(|o| &o.sku_id == id) else { continue };
        let rev = o.unit_margin.times(o.sales);
        revenue += rev;
        cost += o.total_cost;
        per_sku.push(SkuRoi { sku_id: id.clone(), roi: roi(rev, o.total_cost), top_seller: top.contains(&id.as_str()) });
    }
    let top_seller_fraction = per_sku.iter().filter(|r| r.top_seller).count() as f64 / per_sku.len().max(1) as f64;
    TrendRoiReport { aggregate_roi: roi(revenue, cost), per_sku, top_seller_fraction }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn signal(series: Vec<f64>, sentiment: f64, window: usize) -> TrendSignal {
        TrendSignal { candidate_sku_id: "T".into(), volume_series: series, sentiment, window }
    }

    #[test]
    fn flat_neutral_sentiment() {
        let s = trend_score(&signal(vec![5.0; 10], 0.0, 4), &TrendScoreParams::default()).unwrap();
        assert!((s - 0.15).abs() < 1e-12);
    }

    #[test]
    fn hand_least_squares() {
        let ys = [10.0, 20.0, 30.0, 40.0];
        assert!((ls_slope(&ys) - 10.0).abs() < 1e-12);
        assert!((normalized_slope(&ys) - 0.4).abs() < 1e-12);
        for sentiment in [-1.0, 0.0, 0.6] {
            let s = trend_score(&signal(ys.to_vec(), sentiment, 4), &TrendScoreParams::default()).unwrap();
            assert!((s - (0.7 + 0.3 * (sentiment + 1.0) / 2.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn negative_sentiment_flat_floor() {
        let s = trend_score(&signal(vec![3.0; 6], -1.0, 6), &TrendScoreParams::default()).unwrap();
        assert_eq!(s, 0.0);
        assert_eq!(normalized_slope(&[0.0; 5]), 0.0);
    }

    #[test]
    fn short_series_rejected() {
        assert_eq!(
            trend_score(&signal(vec![1.0, 2.0], 0.0, 4), &TrendScoreParams::default()),
            Err(TrendError::SeriesTooShort { len: 2, window: 4 })
        );
    }

    #[test]
    fn gate_cases() {
        let auto = GatePolicy { threshold: 0.8, persistence: 2, mode: GateMode::Auto, human_approves: false };
        assert_eq!(gate_adopt(&[0.9, 0.9], &auto), GateDecision::Adopt);
        assert_eq!(gate_adopt(&[0.9, 0.7, 0.9], &auto), GateDecision::Reject);
        assert_eq!(gate_adopt(&[0.9], &auto), GateDecision::Reject);
        let human = GatePolicy { mode: GateMode::HumanQueue, ..auto };
        assert_eq!(gate_adopt(&[0.9, 0.9], &human), GateDecision::QueueForHuman);
    }

    fn outcome(id: &str, sales: u64, margin: i64, cost: i64) -> SkuOutcome {
        SkuOutcome { sku_id: id.into(), sales, unit_margin: Money(margin), total_cost: Money(cost) }
    }

    #[test]
    fn roi_cases() {
        let outcomes = vec![outcome("A", 50, 3, 100), outcome("B", 0, 3, 100), outcome("C", 10, 1, 0)];
        assert_eq!(trend_roi(&outcomes, &[]), TrendRoiReport::default());
        let r = trend_roi(&outcomes, &["A".into()]);
        assert_eq!(r.per_sku[0].roi, Some(0.5));
        assert_eq!(r.top_seller_fraction, 1.0);
        let r = trend_roi(&outcomes, &["B".into()]);
        assert_eq!(r.per_sku[0].roi, Some(-1.0));
        assert_eq!(r.top_seller_fraction, 0.0);
        let r = trend_roi(&outcomes, &["C".into()]);
        assert_eq!(r.per_sku[0].roi, None);
        assert_eq!(r.aggregate_roi, None);
    }

    #[test]
    fn signal_shapes() {
        let ramp = SignalShape::Ramp { base: 10.0, onset: 5, slope: 2.0 };
        assert_eq!(ramp.level_at(3), 10.0);
        assert_eq!(ramp.level_at(8), 16.0);
        let spike = SignalShape::SpikeDecay { base: 10.0, peak_period: 10, peak: 50.0, decay: 0.5 };
        assert_eq!(spike.level_at(10), 50.0);
        assert_eq!(spike.level_at(11), 30.0);
        assert_eq!(spike.level_at(2), 10.0);
        let a = generate_signal(&ramp, 30, 0.1, &RngStream::new(3, "signal/T"));
        let b = generate_signal(&ramp, 30, 0.1, &RngStream::new(3, "signal/T"));
        assert_eq!(a, b);
    }

    proptest! {
        #[test]
        fn score_is_scale_invariant(series in proptest::collection::vec(0.1f64..100.0, 8..20), k in 0.01f64..100.0, sentiment in -1.0f64..1.0) {
            let p = TrendScoreParams::default();
            let a = trend_score(&signal(series.clone(), sentiment, 8), &p).unwrap();
            let b = trend_score(&signal(series.iter().map(|x| x * k).collect(), sentiment, 8), &p).unwrap();
            prop_assert!((a - b).abs() < 1e-9);
        }

        #[test]
        fn adoption_monotone_in_threshold(scores in proptest::collection::vec(0.0f64..1.0, 1..10), t1 in 0.0f64..1.0, dt in 0.0f64..0.5, k in 1usize..4) {
            let low = GatePolicy { threshold: t1, persistence: k, mode: GateMode::Auto, human_approves: false };
            let high = GatePolicy { threshold: t1 + dt, ..low };
            if gate_adopt(&scores, &high) == GateDecision::Adopt {
                prop_assert_eq!(gate_adopt(&scores, &low), GateDecision::Adopt);
            }
        }
    }
}
