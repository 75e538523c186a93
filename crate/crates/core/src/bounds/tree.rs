//! Occupancy of the translation-invariant hard-core measure on the infinite
//! `d`-regular tree.
//!
//! The occupancy `α` solves `λ = α/(1-α) · ((1-α)/(1-2α))^d`.  With
//! `z = αd/(1-2α)` this becomes `z (1 + z/d)^(d-1) = λd`, whose left side is
//! strictly increasing in `z`, so the root is bracketed by `[0, λd]`.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TreeFixedPoint {
    pub d: u32,
    pub lambda: f64,
    pub alpha: f64,
    pub z: f64,
}

impl TreeFixedPoint {
    /// Relative residual of the occupancy equation in `α`.
    pub fn alpha_residual(&self) -> f64 {
        let lam = tree_lambda(self.d, self.alpha).unwrap_or(f64::NAN);
        (lam - self.lambda).abs() / self.lambda
    }

    /// Relative residual of `z (1 + z/d)^(d-1) = λd`.
    pub fn z_residual(&self) -> f64 {
        let d = self.d as f64;
        let lhs = self.z * ((d - 1.0) * (self.z / d).ln_1p()).exp();
        (lhs - self.lambda * d).abs() / (self.lambda * d)
    }
}

/// The fugacity at which the tree has occupancy `alpha`.
pub fn tree_lambda(d: u32, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 0.5) {
        return Err(Error::InvalidArgument(format!("tree occupancy must lie in (0, 1/2), got {alpha}")));
    }
    let d = d as f64;
    let log = alpha.ln() - (-alpha).ln_1p() + d * ((-alpha).ln_1p() - (-2.0 * alpha).ln_1p());
    Ok(log.exp())
}

pub fn tree_alpha(d: u32, lambda: f64) -> Result<TreeFixedPoint> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("tree degree must be at least 2, got {d}")));
    }
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::Fugacity(lambda.to_string()));
    }
    let df = d as f64;
    let target = (lambda * df).ln();
    let g = |z: f64| z.ln() + (df - 1.0) * (z / df).ln_1p() - target;
    let dg = |z: f64| 1.0 / z + (df - 1.0) / (df + z);

    let (mut lo, mut hi) = (0.0f64, lambda * df);
    let mut z = super::lambert_w(lambda * df)?.clamp(f64::MIN_POSITIVE, hi);
    for _ in 0..200 {
        let gz = g(z);
        if gz == 0.0 {
            break;
        }
        if gz < 0.0 {
            lo = z;
        } else {
            hi = z;
        }
        let mut next = z - gz / dg(z);
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        let done = (next - z).abs() <= 1e-16 * z.max(f64::MIN_POSITIVE) || hi - lo <= 1e-16 * hi;
        z = next;
        if done {
            break;
        }
    }
    Ok(TreeFixedPoint {
        d,
        lambda,
        alpha: z / (df + 2.0 * z),
        z,
    })
}
