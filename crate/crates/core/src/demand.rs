//! Demand traces, supplier disruptions and scenario scaling.

use rand::Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::inventory::{OrderDecision, SupplierOffer};
use crate::rng::RngStream;
use crate::scenario::Scenario;
use crate::stats::round_half_up;

#[derive(Debug, Error, PartialEq)]
pub enum DemandError {
    #[error("invalid demand model: {0}")]
    InvalidModel(String),
    #[error("horizon must be at least 1")]
    EmptyHorizon,
    #[error("scaling factor {0} outside [0.5, 1.5]")]
    FactorOutOfRange(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DemandKind {
    Stationary,
    Seasonal,
    Trending,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseKind {
    /// `round(max(0, m + cv * m * Z))`.
    #[default]
    Gaussian,
    /// Poisson with mean `m`; `cv = 0` still means a deterministic trace.
    Poisson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DemandModel {
    pub kind: DemandKind,
    pub base_mean: f64,
    #[serde(default)]
    pub cv: f64,
    #[serde(default = "default_season_period")]
    pub season_period: u32,
    #[serde(default)]
    pub season_amplitude: f64,
    /// Units per period added to the mean each period (trending models).
    #[serde(default)]
    pub trend_slope: f64,
    #[serde(default)]
    pub noise: NoiseKind,
}

fn default_season_period() -> u32 {
    7
}

impl DemandModel {
    pub fn stationary(mean: f64, cv: f64) -> Self {
        DemandModel {
            kind: DemandKind::Stationary,
            base_mean: mean,
            cv,
            season_period: 7,
            season_amplitude: 0.0,
            trend_slope: 0.0,
            noise: NoiseKind::Gaussian,
        }
    }

    pub fn seasonal(mean: f64, cv: f64, period: u32, amplitude: f64) -> Self {
        DemandModel {
            kind: DemandKind::Seasonal,
            season_period: period,
            season_amplitude: amplitude,
            ..Self::stationary(mean, cv)
        }
    }

    pub fn trending(mean: f64, cv: f64, slope: f64) -> Self {
        DemandModel { kind: DemandKind::Trending, trend_slope: slope, ..Self::stationary(mean, cv) }
    }

    pub fn validate(&self) -> Result<(), DemandError> {
        let bad = |m: String| Err(DemandError::InvalidModel(m));
        if !(self.base_mean >= 0.0 && self.base_mean.is_finite()) {
            return bad(format!("base_mean {} must be >= 0", self.base_mean));
        }
        if !(self.cv >= 0.0 && self.cv.is_finite()) {
            return bad(format!("cv {} must be >= 0", self.cv));
        }
        if self.kind == DemandKind::Seasonal {
            if self.season_period == 0 {
                return bad("season_period must be >= 1".into());
            }
            if self.season_amplitude < 0.0 {
                return bad(format!("season_amplitude {} must be >= 0", self.season_amplitude));
            }
        }
        if !self.trend_slope.is_finite() {
            return bad("trend_slope must be finite".into());
        }
        Ok(())
    }

    /// Expected demand at period `t`, clamped at zero.
    pub fn mean_at(&self, t: u32) -> f64 {
        let m = match self.kind {
            DemandKind::Stationary => self.base_mean,
            DemandKind::Seasonal => {
                let phase = 2.0 * std::f64::consts::PI * f64::from(t) / f64::from(self.season_period);
                self.base_mean * (1.0 + self.season_amplitude * phase.sin())
            }
            DemandKind::Trending => self.base_mean + self.trend_slope * f64::from(t),
        };
        m.max(0.0)
    }
}

/// Pure function of `(model, horizon, stream)`: one non-negative integer demand per period.
pub fn generate_trace(model: &DemandModel, horizon: u32, stream: &RngStream) -> Result<Vec<u64>, DemandError> {
    model.validate()?;
    if horizon == 0 {
        return Err(DemandError::EmptyHorizon);
    }
    let mut rng = stream.rng();
    let trace = (0..horizon)
        .map(|t| {
            let m = model.mean_at(t);
            if model.cv == 0.0 || m == 0.0 {
                return round_half_up(m);
            }
            match model.noise {
                NoiseKind::Gaussian => {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    round_half_up(m + model.cv * m * z)
                }
                NoiseKind::Poisson => {
                    let draw: f64 = Poisson::new(m).expect("positive mean").sample(&mut rng);
                    draw as u64
                }
            }
        })
        .collect();
    Ok(trace)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DelaySpec {
    pub probability: f64,
    pub extra_periods: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShortageSpec {
    pub probability: f64,
    pub fill_fraction: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShockSpec {
    pub probability: f64,
    pub multiplier: f64,
}

/// Random disturbances. Delay and shortage probabilities are scaled by `1 - reliability` of
/// the supplier an order goes to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DisruptionModel {
    pub lead_time_delay: DelaySpec,
    pub shortage: ShortageSpec,
    pub demand_shock: ShockSpec,
}

impl Default for DisruptionModel {
    fn default() -> Self {
        Self::none()
    }
}

impl DisruptionModel {
    pub fn none() -> Self {
        DisruptionModel {
            lead_time_delay: DelaySpec { probability: 0.0, extra_periods: 1 },
            shortage: ShortageSpec { probability: 0.0, fill_fraction: 0.0 },
            demand_shock: ShockSpec { probability: 0.0, multiplier: 1.0 },
        }
    }

    pub fn is_none(&self) -> bool {
        self.lead_time_delay.probability == 0.0
            && self.shortage.probability == 0.0
            && self.demand_shock.probability == 0.0
    }

    pub fn validate(&self) -> Vec<String> {
        let mut errors = Vec::new();
        for (name, p) in [
            ("lead_time_delay.probability", self.lead_time_delay.probability),
            ("shortage.probability", self.shortage.probability),
            ("demand_shock.probability", self.demand_shock.probability),
        ] {
            if !(0.0..=1.0).contains(&p) {
                errors.push(format!("{name} {p} outside [0, 1]"));
            }
        }
        if self.lead_time_delay.extra_periods < 1 {
            errors.push("lead_time_delay.extra_periods must be >= 1".into());
        }
        if !(0.0..1.0).contains(&self.shortage.fill_fraction) {
            errors.push(format!("shortage.fill_fraction {} outside [0, 1)", self.shortage.fill_fraction));
        }
        if !(self.demand_shock.multiplier >= 0.0) {
            errors.push("demand_shock.multiplier must be >= 0".into());
        }
        errors
    }
}

/// Multiplies demand in periods where a shock fires. Draws one uniform per period.
pub fn apply_demand_shocks(trace: &mut [u64], shock: &ShockSpec, stream: &RngStream) {
    if shock.probability == 0.0 {
        return;
    }
    let mut rng = stream.rng();
    for d in trace.iter_mut() {
        let u: f64 = rng.random();
        if u < shock.probability {
            *d = round_half_up(*d as f64 * shock.multiplier);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Realization {
    pub arrival_period: u32,
    pub delivered: u64,
}

/// Draws the delivery outcome of a committed order. Always consumes exactly two uniforms.
pub fn perturb_order(
    order: &OrderDecision,
    offer: &SupplierOffer,
    disruption: &DisruptionModel,
    stream: &RngStream,
) -> Realization {
    let mut rng = stream.rng();
    let u_delay: f64 = rng.random();
    let u_short: f64 = rng.random();
    let exposure = 1.0 - offer.reliability;
    let mut arrival = order.placed_at + offer.lead_time;
    let mut delivered = order.quantity;
    if u_delay < disruption.lead_time_delay.probability * exposure {
        arrival += disruption.lead_time_delay.extra_periods;
    }
    if u_short < disruption.shortage.probability * exposure {
        delivered = (disruption.shortage.fill_fraction * order.quantity as f64).floor() as u64;
    }
    Realization { arrival_period: arrival, delivered }
}

/// Scales every demand mean by `demand_factor` and every lead time by `lead_factor`
/// (round half up, minimum 1). Trend slopes scale with demand so a trending SKU keeps its
/// relative growth.
pub fn scale_scenario(scenario: &Scenario, demand_factor: f64, lead_factor: f64) -> Result<Scenario, DemandError> {
    for f in [demand_factor, lead_factor] {
        if !(0.5..=1.5).contains(&f) {
            return Err(DemandError::FactorOutOfRange(f));
        }
    }
    let mut scaled = scenario.clone();
    if demand_factor != 1.0 {
        for entry in scaled.skus.iter_mut() {
            entry.demand.base_mean *= demand_factor;
            entry.demand.trend_slope *= demand_factor;
        }
        for cand in scaled.trend_candidates.iter_mut() {
            cand.sku.demand.base_mean *= demand_factor;
            cand.sku.demand.trend_slope *= demand_factor;
        }
    }
    if lead_factor != 1.0 {
        for offer in scaled.offers.iter_mut() {
            // The epsilon keeps products like 3 * 1.5 = 4.4999.. rounding up as intended.
            let l = (f64::from(offer.lead_time) * lead_factor + 0.5 + 1e-9).floor() as u32;
            offer.lead_time = l.max(1);
        }
    }
    Ok(scaled)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inventory::Money;

    fn offer(reliability: f64, lead: u32) -> SupplierOffer {
        SupplierOffer {
            supplier_id: "S".into(),
            sku_id: "A".into(),
            unit_cost: Money(100),
            lead_time: lead,
            moq: 0,
            capacity_per_order: None,
            reliability,
            fixed_shipping: Money(0),
            max_discount: 0.0,
        }
    }

    fn order(q: u64, placed: u32, lead: u32) -> OrderDecision {
        OrderDecision {
            sku_id: "A".into(),
            supplier_id: "S".into(),
            quantity: q,
            list_unit_price: Money(100),
            negotiated_unit_price: Money(100),
            landed_cost: Money(100 * q as i64),
            placed_at: placed,
            promised_arrival: placed + lead,
            criticality: 0.0,
        }
    }

    fn always() -> DisruptionModel {
        DisruptionModel {
            lead_time_delay: DelaySpec { probability: 1.0, extra_periods: 2 },
            shortage: ShortageSpec { probability: 1.0, fill_fraction: 0.5 },
            demand_shock: ShockSpec { probability: 0.0, multiplier: 1.0 },
        }
    }

    #[test]
    fn zero_noise_stationary_is_constant() {
        let trace = generate_trace(&DemandModel::stationary(10.0, 0.0), 50, &RngStream::new(1, "d")).unwrap();
        assert!(trace.iter().all(|&d| d == 10));
    }

    #[test]
    fn seasonal_trough_clamps_to_zero() {
        let model = DemandModel::seasonal(10.0, 0.0, 4, 1.0);
        // sin(2*pi*3/4) = -1
        assert!(model.mean_at(3).abs() < 1e-9);
        let trace = generate_trace(&model, 8, &RngStream::new(1, "d")).unwrap();
        assert_eq!(trace[3], 0);
        assert_eq!(trace[7], 0);
        assert_eq!(trace[1], 20);
    }

    #[test]
    fn zero_noise_trace_equals_mean_curve() {
        let model = DemandModel::seasonal(13.0, 0.0, 7, 0.4);
        let trace = generate_trace(&model, 30, &RngStream::new(3, "x")).unwrap();
        for (t, d) in trace.iter().enumerate() {
            assert_eq!(*d, round_half_up(model.mean_at(t as u32)));
        }
    }

    #[test]
    fn sample_mean_within_three_sigma() {
        let n = 10_000u32;
        let trace = generate_trace(&DemandModel::stationary(20.0, 0.25), n, &RngStream::new(11, "demand/A")).unwrap();
        let mean = trace.iter().sum::<u64>() as f64 / f64::from(n);
        let sigma = 20.0 * 0.25;
        assert!((mean - 20.0).abs() < 3.0 * sigma / f64::from(n).sqrt(), "mean {mean}");
    }

    #[test]
    fn poisson_noise_mean() {
        let mut model = DemandModel::stationary(6.0, 1.0);
        model.noise = NoiseKind::Poisson;
        let n = 10_000u32;
        let trace = generate_trace(&model, n, &RngStream::new(5, "p")).unwrap();
        let mean = trace.iter().sum::<u64>() as f64 / f64::from(n);
        assert!((mean - 6.0).abs() < 3.0 * 6f64.sqrt() / f64::from(n).sqrt());
    }

    #[test]
    fn invalid_models_rejected() {
        assert!(generate_trace(&DemandModel::stationary(-1.0, 0.0), 5, &RngStream::new(0, "d")).is_err());
        assert!(generate_trace(&DemandModel::stationary(1.0, -0.1), 5, &RngStream::new(0, "d")).is_err());
        assert_eq!(
            generate_trace(&DemandModel::stationary(1.0, 0.1), 0, &RngStream::new(0, "d")),
            Err(DemandError::EmptyHorizon)
        );
    }

    #[test]
    fn perfectly_reliable_supplier_is_never_disrupted() {
        for seed in 0..200 {
            let r = perturb_order(&order(40, 10, 3), &offer(1.0, 3), &always(), &RngStream::new(seed, "o"));
            assert_eq!(r, Realization { arrival_period: 13, delivered: 40 });
        }
    }

    #[test]
    fn disruptions_fire_with_arithmetic() {
        let r = perturb_order(&order(40, 10, 3), &offer(0.0, 3), &always(), &RngStream::new(0, "o"));
        assert_eq!(r, Realization { arrival_period: 15, delivered: 20 });
    }

    #[test]
    fn shocks_scale_demand() {
        let mut trace = vec![10; 20];
        apply_demand_shocks(&mut trace, &ShockSpec { probability: 1.0, multiplier: 1.5 }, &RngStream::new(0, "s"));
        assert!(trace.iter().all(|&d| d == 15));
        let mut untouched = vec![10; 20];
        apply_demand_shocks(&mut untouched, &ShockSpec { probability: 0.0, multiplier: 9.0 }, &RngStream::new(0, "s"));
        assert!(untouched.iter().all(|&d| d == 10));
    }
}
