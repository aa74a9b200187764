//! Moment-matching fit of an asymmetric generalized Gaussian distribution.

use std::sync::OnceLock;

use statrs::function::gamma::{gamma, ln_gamma};

use crate::error::{Error, Result};

const SHAPE_MIN: f64 = 0.2;
const SHAPE_MAX: f64 = 10.0;
const SHAPE_STEP: f64 = 0.001;

/// Fitted AGGD parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AggdFit {
    /// Shape parameter (2 for a Gaussian, 1 for a Laplacian).
    pub shape: f64,
    /// Scale of the negative half.
    pub left_scale: f64,
    /// Scale of the positive half.
    pub right_scale: f64,
}

impl AggdFit {
    /// Mean of the fitted distribution.
    pub fn mean(&self) -> f64 {
        (self.right_scale - self.left_scale) * (gamma(2.0 / self.shape) / gamma(1.0 / self.shape))
    }
}

/// `(shape, Γ(2/a)² / (Γ(1/a) Γ(3/a)))` over the shape grid.
fn ratio_table() -> &'static [(f64, f64)] {
    static TABLE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let steps = ((SHAPE_MAX - SHAPE_MIN) / SHAPE_STEP).round() as usize;
        (0..=steps)
            .map(|i| {
                let a = SHAPE_MIN + i as f64 * SHAPE_STEP;
                let r = (2.0 * ln_gamma(2.0 / a) - ln_gamma(1.0 / a) - ln_gamma(3.0 / a)).exp();
                (a, r)
            })
            .collect()
    })
}

/// Estimates AGGD parameters from samples by matching the generalized
/// Gaussian ratio against a lookup over shapes in `[0.2, 10]`.
pub fn fit_aggd(samples: &[f64]) -> Result<AggdFit> {
    if samples.len() < 2 {
        return Err(Error::Degenerate(format!(
            "need at least 2 samples, got {}",
            samples.len()
        )));
    }
    let (mut left_sq, mut left_n, mut right_sq, mut right_n) = (0.0, 0usize, 0.0, 0usize);
    let (mut abs_sum, mut sq_sum) = (0.0, 0.0);
    for &v in samples {
        if !v.is_finite() {
            return Err(Error::Degenerate("non-finite sample".into()));
        }
        if v < 0.0 {
            left_sq += v * v;
            left_n += 1;
        } else if v > 0.0 {
            right_sq += v * v;
            right_n += 1;
        }
        abs_sum += v.abs();
        sq_sum += v * v;
    }
    if left_n == 0 || right_n == 0 {
        return Err(Error::Degenerate(format!(
            "one-sided sample set ({left_n} negative, {right_n} positive)"
        )));
    }
    let n = samples.len() as f64;
    let left_std = (left_sq / left_n as f64).sqrt();
    let right_std = (right_sq / right_n as f64).sqrt();
    let asym = left_std / right_std;
    let rhat = (abs_sum / n).powi(2) / (sq_sum / n);
    let rhat_norm = rhat * (asym.powi(3) + 1.0) * (asym + 1.0) / (asym * asym + 1.0).powi(2);

    let mut best = (f64::INFINITY, SHAPE_MIN);
    for &(a, r) in ratio_table() {
        let d = (r - rhat_norm).powi(2);
        if d < best.0 {
            best = (d, a);
        }
    }
    let shape = best.1;
    let spread = (gamma(1.0 / shape) / gamma(3.0 / shape)).sqrt();
    Ok(AggdFit {
        shape,
        left_scale: left_std * spread,
        right_scale: right_std * spread,
    })
}
