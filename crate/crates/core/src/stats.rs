//! Standard normal helpers and small sample statistics.

use statrs::distribution::{Continuous, ContinuousCDF, Normal};

fn standard() -> Normal {
    Normal::standard()
}

/// Inverse of the standard normal CDF for `p` in (0, 1). Returns +/- infinity at the endpoints.
pub fn normal_quantile(p: f64) -> f64 {
    if p <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if p >= 1.0 {
        return f64::INFINITY;
    }
    standard().inverse_cdf(p)
}

pub fn normal_pdf(z: f64) -> f64 {
    standard().pdf(z)
}

pub fn normal_cdf(z: f64) -> f64 {
    standard().cdf(z)
}

/// Standard normal first-order loss `E[(Z - z)^+]`.
pub fn normal_loss(z: f64) -> f64 {
    (normal_pdf(z) - z * (1.0 - normal_cdf(z))).max(0.0)
}

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        0.0
    } else {
        xs.iter().sum::<f64>() / xs.len() as f64
    }
}

/// Sample standard deviation (n - 1 denominator); 0 for fewer than two points.
pub fn sample_std(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    let ss: f64 = xs.iter().map(|x| (x - m) * (x - m)).sum();
    (ss / (xs.len() - 1) as f64).sqrt()
}

/// Round half up to a non-negative integer.
pub fn round_half_up(x: f64) -> u64 {
    if x <= 0.0 {
        0
    } else {
        (x + 0.5).floor() as u64
    }
}
