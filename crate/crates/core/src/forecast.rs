//! Demand forecasting: point forecasts plus a rolling one-step-ahead error estimate.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ForecastError {
    #[error("smoothing constant {0} outside (0, 1]")]
    AlphaOutOfRange(f64),
    #[error("window must be at least 1")]
    EmptyWindow,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ForecastMethod {
    Naive,
    MovingAverage { window: usize },
    ExpSmoothing { alpha: f64 },
    SeasonalNaive { period: usize },
}

impl ForecastMethod {
    pub fn validate(&self) -> Result<(), ForecastError> {
        match *self {
            ForecastMethod::ExpSmoothing { alpha } if !(alpha > 0.0 && alpha <= 1.0) => {
                Err(ForecastError::AlphaOutOfRange(alpha))
            }
            ForecastMethod::MovingAverage { window: 0 } | ForecastMethod::SeasonalNaive { period: 0 } => {
                Err(ForecastError::EmptyWindow)
            }
            _ => Ok(()),
        }
    }
}

/// `alpha * observation + (1 - alpha) * forecast`.
pub fn exp_smoothing_update(forecast: f64, observation: f64, alpha: f64) -> Result<f64, ForecastError> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(ForecastError::AlphaOutOfRange(alpha));
    }
    Ok(alpha * observation + (1.0 - alpha) * forecast)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeasonalForecast {
    pub value: f64,
    /// Set when the history was shorter than one season and the last value was used instead.
    pub fell_back_to_naive: bool,
}

/// Forecast for the period after `history` using the value one season earlier.
pub fn seasonal_naive(history: &[f64], period: usize) -> SeasonalForecast {
    match history.len() {
        0 => SeasonalForecast { value: 0.0, fell_back_to_naive: true },
        n if period == 0 || n < period => SeasonalForecast { value: history[n - 1], fell_back_to_naive: true },
        n => SeasonalForecast { value: history[n - period], fell_back_to_naive: false },
    }
}

/// Rolling RMSE of the last `window` one-step-ahead errors.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorStats {
    window: usize,
    errors: VecDeque<f64>,
}

impl ErrorStats {
    pub fn new(window: usize) -> Result<Self, ForecastError> {
        if window == 0 {
            return Err(ForecastError::EmptyWindow);
        }
        Ok(Self { window, errors: VecDeque::with_capacity(window) })
    }

    pub fn update(&mut self, forecast: f64, actual: f64) -> f64 {
        if self.errors.len() == self.window {
            self.errors.pop_front();
        }
        self.errors.push_back(actual - forecast);
        self.rmse()
    }

    pub fn rmse(&self) -> f64 {
        if self.errors.is_empty() {
            return 0.0;
        }
        let ss: f64 = self.errors.iter().map(|e| e * e).sum();
        (ss / self.errors.len() as f64).sqrt()
    }

    pub fn is_full(&self) -> bool {
        self.errors.len() == self.window
    }

    pub fn len(&self) -> usize {
        self.errors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.errors.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForecastStats {
    pub mean_estimate: f64,
    pub error_std: f64,
    pub method: ForecastMethod,
    pub history_len: usize,
    /// The raw forecast was negative and was clamped to zero.
    pub clamped: bool,
    /// A seasonal forecast fell back to naive for lack of history.
    pub fell_back: bool,
}

/// Per-SKU forecasting state. Call [`Forecaster::observe`] once per period with realized demand.
#[derive(Debug, Clone)]
pub struct Forecaster {
    method: ForecastMethod,
    level: Option<f64>,
    history: Vec<f64>,
    errors: ErrorStats,
    next: Option<f64>,
    fell_back: bool,
}

/// Cold-start error std as a fraction of the mean, used until the error window is full.
pub const COLD_START_CV: f64 = 0.5;

impl Forecaster {
    pub fn new(method: ForecastMethod, error_window: usize) -> Result<Self, ForecastError> {
        method.validate()?;
        Ok(Self {
            method,
            level: None,
            history: Vec::new(),
            errors: ErrorStats::new(error_window)?,
            next: None,
            fell_back: false,
        })
    }

    /// Starts from a prior level instead of the first observation.
    pub fn seeded(method: ForecastMethod, error_window: usize, level: f64) -> Result<Self, ForecastError> {
        let mut f = Self::new(method, error_window)?;
        f.level = Some(level);
        f.next = Some(level);
        Ok(f)
    }

    pub fn history(&self) -> &[f64] {
        &self.history
    }

    pub fn observe(&mut self, actual: f64) {
        if let Some(prev) = self.next {
            self.errors.update(prev, actual);
        }
        self.history.push(actual);
        let forecast = match self.method {
            ForecastMethod::Naive => actual,
            ForecastMethod::ExpSmoothing { alpha } => {
                let level = match self.level {
                    None => actual,
                    Some(l) => exp_smoothing_update(l, actual, alpha).expect("alpha validated"),
                };
                self.level = Some(level);
                level
            }
            ForecastMethod::MovingAverage { window } => {
                let tail = &self.history[self.history.len().saturating_sub(window)..];
                tail.iter().sum::<f64>() / tail.len() as f64
            }
            ForecastMethod::SeasonalNaive { period } => {
                // The next period is t+1; its seasonal match is history[len - period].
                let f = seasonal_naive(&self.history, period);
                self.fell_back = f.fell_back_to_naive;
                f.value
            }
        };
        self.next = Some(forecast);
    }

    pub fn stats(&self) -> ForecastStats {
        let raw = self.next.unwrap_or(0.0);
        let mean = raw.max(0.0);
        let error_std = if self.errors.is_full() { self.errors.rmse() } else { COLD_START_CV * mean };
        ForecastStats {
            mean_estimate: mean,
            error_std,
            method: self.method,
            history_len: self.history.len(),
            clamped: raw < 0.0,
            fell_back: self.fell_back,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn alpha_one_is_naive() {
        assert_eq!(exp_smoothing_update(3.0, 11.0, 1.0).unwrap(), 11.0);
    }

    #[test]
    fn half_alpha_arithmetic() {
        assert_eq!(exp_smoothing_update(10.0, 20.0, 0.5).unwrap(), 15.0);
    }

    #[test]
    fn alpha_out_of_range() {
        assert_eq!(exp_smoothing_update(1.0, 1.0, 0.0), Err(ForecastError::AlphaOutOfRange(0.0)));
        assert!(exp_smoothing_update(1.0, 1.0, 1.5).is_err());
        assert!(Forecaster::new(ForecastMethod::ExpSmoothing { alpha: -0.2 }, 30).is_err());
    }

    #[test]
    fn constant_series_is_a_fixed_point() {
        for alpha in [0.05, 0.3, 1.0] {
            let mut f = Forecaster::new(ForecastMethod::ExpSmoothing { alpha }, 30).unwrap();
            for _ in 0..100 {
                f.observe(7.0);
            }
            assert!((f.stats().mean_estimate - 7.0).abs() < 1e-9);
        }
    }

    #[test]
    fn seasonal_naive_cases() {
        let mut week = vec![5.0; 14];
        week[7] = 12.0; // day 8 of 14; forecasting day 15 looks back 7 days
        assert_eq!(seasonal_naive(&week, 7).value, 12.0);
        assert_eq!(seasonal_naive(&[4.0; 10], 7).value, 4.0);
        let ramp: Vec<f64> = (1..=14).map(f64::from).collect();
        assert_eq!(seasonal_naive(&ramp, 7), SeasonalForecast { value: 8.0, fell_back_to_naive: false });
        assert_eq!(seasonal_naive(&[1.0, 2.0], 7), SeasonalForecast { value: 2.0, fell_back_to_naive: true });
    }

    #[test]
    fn error_stats_cases() {
        let mut perfect = ErrorStats::new(30).unwrap();
        for _ in 0..40 {
            perfect.update(5.0, 5.0);
        }
        assert_eq!(perfect.rmse(), 0.0);

        let mut alt = ErrorStats::new(30).unwrap();
        for i in 0..40 {
            alt.update(10.0, if i % 2 == 0 { 12.0 } else { 8.0 });
        }
        assert!((alt.rmse() - 2.0).abs() < 1e-12);

        let mut two = ErrorStats::new(2).unwrap();
        two.update(0.0, 3.0);
        two.update(0.0, 4.0);
        assert!((two.rmse() - 12.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn cold_start_uses_half_the_mean() {
        let mut f = Forecaster::new(ForecastMethod::ExpSmoothing { alpha: 0.3 }, 30).unwrap();
        f.observe(20.0);
        assert_eq!(f.stats().error_std, 10.0);
    }

    #[test]
    fn seasonal_forecaster_tracks_pattern() {
        let mut f = Forecaster::new(ForecastMethod::SeasonalNaive { period: 3 }, 5).unwrap();
        for x in [1.0, 2.0, 3.0, 1.0, 2.0, 3.0, 1.0] {
            f.observe(x);
        }
        assert_eq!(f.stats().mean_estimate, 2.0);
        assert!(!f.stats().fell_back);
    }

    proptest! {
        #[test]
        fn shift_invariance(
            series in proptest::collection::vec(0.0f64..100.0, 40..80),
            shift in 0.0f64..50.0,
            alpha in 0.05f64..1.0,
        ) {
            let method = ForecastMethod::ExpSmoothing { alpha };
            let mut a = Forecaster::new(method, 30).unwrap();
            let mut b = Forecaster::new(method, 30).unwrap();
            for x in &series {
                a.observe(*x);
                b.observe(*x + shift);
            }
            let (sa, sb) = (a.stats(), b.stats());
            prop_assert!((sb.mean_estimate - sa.mean_estimate - shift).abs() < 1e-8);
            prop_assert!((sb.error_std - sa.error_std).abs() < 1e-8);
        }

        #[test]
        fn forecasts_are_finite_and_non_negative(series in proptest::collection::vec(0.0f64..1e6, 1..60)) {
            let mut f = Forecaster::new(ForecastMethod::ExpSmoothing { alpha: 0.4 }, 10).unwrap();
            for x in &series {
                f.observe(*x);
                let s = f.stats();
                prop_assert!(s.mean_estimate.is_finite() && s.mean_estimate >= 0.0);
                prop_assert!(s.error_std.is_finite() && s.error_std >= 0.0);
            }
        }
    }
}
