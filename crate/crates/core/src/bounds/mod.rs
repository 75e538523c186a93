//! Closed-form bounds on occupancy fractions and partition functions.
//!
//! All functions here work in double precision; exact arithmetic is kept for
//! the polynomial side of each comparison (see [`report`]).

mod coefficients;
mod lambert;
pub mod report;
mod tree;

pub use coefficients::{clique_bound_check, moon_moser_check, moon_moser_violations, CliqueBoundCheck};
pub use lambert::lambert_w;
pub use report::{bound_report, BoundReport, BOUND_TOLERANCE};
pub use tree::{tree_alpha, tree_lambda, TreeFixedPoint};

use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use lambert::w_over_x;

/// Lower bound on the occupancy fraction of a triangle-free graph of maximum
/// degree `d`:  `λ/(1+λ) · W(d ln(1+λ)) / (d ln(1+λ))`.
///
/// At `d = 0` this is the limit `λ/(1+λ)`, the occupancy of an edgeless graph.
pub fn occupancy_lower_bound(d: usize, lambda: f64) -> f64 {
    let x = d as f64 * lambda.ln_1p();
    lambda / (1.0 + lambda) * w_over_x(x)
}

/// Lower bound on `ln P_G(λ)` for a triangle-free graph on `n` vertices with
/// maximum degree `d`: `(W² + 2W) n / (2d)` with `W = W(d ln(1+λ))`.
pub fn log_partition_lower_bound(n: usize, d: usize, lambda: f64) -> f64 {
    if d == 0 {
        return n as f64 * lambda.ln_1p();
    }
    let w = lambert_w(d as f64 * lambda.ln_1p()).expect("nonnegative argument");
    (w * w + 2.0 * w) * n as f64 / (2.0 * d as f64)
}

/// Occupancy fraction of `K_{d,d}`: `λ(1+λ)^(d-1) / (2(1+λ)^d - 1)`.
pub fn kdd_occupancy(d: usize, lambda: f64) -> f64 {
    // divided through by (1+λ)^d to stay finite for large d
    let inv = (-(d as f64) * lambda.ln_1p()).exp();
    lambda / (1.0 + lambda) / (2.0 - inv)
}

/// [`kdd_occupancy`] in exact arithmetic.
pub fn kdd_occupancy_exact(d: usize, lambda: &BigRational) -> BigRational {
    let one = BigRational::one();
    let base = &one + lambda;
    let pow = num_traits::pow(base.clone(), d);
    let two = BigRational::from_integer(2.into());
    lambda * &pow / &base / (two * pow - one)
}

/// Per-vertex log partition function of `K_{d,d}`, `ln(2(1+λ)^d - 1) / (2d)`.
pub fn kdd_log_partition(d: usize, lambda: f64) -> f64 {
    assert!(d >= 1, "K_{{d,d}} needs d >= 1");
    let df = d as f64;
    let inv = (-df * lambda.ln_1p()).exp();
    (df * lambda.ln_1p() + (2.0 - inv).ln()) / (2.0 * df)
}

/// `f(d) = (d ln d - d + 1)/(d - 1)²` for `d ≥ 1`; `f(1) = 1/2` is the
/// continuous extension.
pub fn shearer_f(d: f64) -> Result<f64> {
    if !(d >= 1.0) || !d.is_finite() {
        return Err(Error::InvalidArgument(format!("shearer_f needs d >= 1, got {d}")));
    }
    let e = d - 1.0;
    if e < 1e-4 {
        return Ok(0.5 - e / 6.0 + e * e / 12.0);
    }
    Ok((d * d.ln() - d + 1.0) / (e * e))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CountingBound {
    /// Lower bound on `ln P_G(λ)` valid for every triangle-free graph on `n` vertices.
    pub exponent: f64,
    /// Degree at which the neighbourhood bound `(1+λ)^d` and the
    /// degree-`d` bound cross.
    pub crossover_degree: f64,
}

/// `ln P_G(λ) ≥ ½ sqrt(x) ln x` with `x = n ln(1+λ)/2`, for any triangle-free
/// graph on `n` vertices.  Requires `x ≥ 1`.
pub fn counting_bound(n: usize, lambda: f64) -> Result<CountingBound> {
    let l = lambda.ln_1p();
    let x = n as f64 * l / 2.0;
    if !(x >= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "counting bound needs n ln(1+λ)/2 >= 1, got {x}"
        )));
    }
    Ok(CountingBound {
        exponent: 0.5 * x.sqrt() * x.ln(),
        crossover_degree: 0.5 * (n as f64 / (2.0 * l)).sqrt() * x.ln(),
    })
}

fn check_alpha(n: usize, alpha: usize) -> Result<()> {
    if alpha == 0 || alpha > n {
        return Err(Error::InvalidArgument(format!("need 1 <= alpha <= n, got alpha={alpha}, n={n}")));
    }
    Ok(())
}

/// `P_G(λ) ≤ (1 + λn/α)^α`, tight for unions of equal cliques.
pub fn integrated_clique_bound(n: usize, alpha: usize, lambda: f64) -> Result<f64> {
    check_alpha(n, alpha)?;
    Ok((1.0 + lambda * n as f64 / alpha as f64).powi(alpha as i32))
}

/// Natural log of [`integrated_clique_bound`], finite for large `α`.
pub fn integrated_clique_log_bound(n: usize, alpha: usize, lambda: f64) -> Result<f64> {
    check_alpha(n, alpha)?;
    Ok(alpha as f64 * (lambda * n as f64 / alpha as f64).ln_1p())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, LN_2};

    #[test]
    fn occupancy_bound_examples() {
        assert!((occupancy_lower_bound(2, 1.0) - 0.25).abs() < 1e-15);
        assert!(occupancy_lower_bound(2, 1.0) <= 3.0 / 11.0);
        let lam = E - 1.0;
        let w1 = lambert_w(1.0).unwrap();
        assert!((occupancy_lower_bound(1, lam) - lam / E * w1).abs() < 1e-15);
        assert_eq!(occupancy_lower_bound(0, 1.0), 0.5);
    }

    #[test]
    fn log_partition_bound_examples() {
        let c4 = log_partition_lower_bound(4, 2, 1.0);
        assert!((c4 - (LN_2 * LN_2 + 2.0 * LN_2)).abs() < 1e-14);
        assert!((c4 - 1.8668).abs() < 1e-4 && c4 <= 7f64.ln());
        let c5 = log_partition_lower_bound(5, 2, 1.0);
        assert!((c5 - 2.3335).abs() < 1e-4 && c5 <= 11f64.ln());
        assert!(log_partition_lower_bound(10, 3, 1e-12) < 1e-10);
        assert_eq!(log_partition_lower_bound(3, 0, 1.0), 3.0 * LN_2);
    }

    #[test]
    fn kdd_examples() {
        for lam in [0.1, 1.0, 3.0] {
            assert!((kdd_occupancy(1, lam) - lam / (1.0 + 2.0 * lam)).abs() < 1e-15);
        }
        assert!((kdd_occupancy(2, 1.0) - 2.0 / 7.0).abs() < 1e-15);
        let half = BigRational::new(1.into(), 2.into());
        let exact = kdd_occupancy_exact(3, &half);
        // λ(1+λ)^2 / (2(1+λ)^3 - 1) at λ = 1/2 is (9/8)/(23/4) = 9/46
        assert_eq!(exact, BigRational::new(9.into(), 46.into()));
        assert!((kdd_occupancy(3, 0.5) - 9.0 / 46.0).abs() < 1e-15);
        assert!(kdd_occupancy(5000, 1.0).is_finite());
        assert!((kdd_log_partition(2, 1.0) - 7f64.ln() / 4.0).abs() < 1e-15);
        assert!(kdd_log_partition(2, 1.0) >= 11f64.ln() / 5.0);
        assert!((kdd_log_partition(1, 1.0) - 3f64.ln() / 2.0).abs() < 1e-15);
        assert!((kdd_log_partition(3, 1.0) - 15f64.ln() / 6.0).abs() < 1e-15);
    }

    #[test]
    fn shearer_examples() {
        assert!((shearer_f(2.0).unwrap() - (2.0 * LN_2 - 1.0)).abs() < 1e-15);
        assert!((shearer_f(E).unwrap() - 1.0 / (E - 1.0).powi(2)).abs() < 1e-15);
        let d = 1e6;
        assert!((shearer_f(d).unwrap() * d / d.ln() - 1.0).abs() < 0.1);
        assert_eq!(shearer_f(1.0).unwrap(), 0.5);
        // series branch agrees with the formula just above the switch
        let d = 1.0 + 0.99e-4;
        let direct = (d * f64::ln(d) - d + 1.0) / ((d - 1.0) * (d - 1.0));
        assert!((shearer_f(d).unwrap() - direct).abs() < 1e-6);
        assert!(shearer_f(0.5).is_err() && shearer_f(f64::NAN).is_err());
    }

    #[test]
    fn counting_bound_examples() {
        let b = counting_bound(100, 1.0).unwrap();
        assert!((b.exponent - 10.44).abs() < 0.01, "{}", b.exponent);
        assert!(b.exponent <= 100.0 * LN_2);
        let x = 100.0 * LN_2 / 2.0;
        let d = b.crossover_degree;
        assert!((d - 0.5 * (100.0 / (2.0 * LN_2)).sqrt() * x.ln()).abs() < 1e-12);
        assert!(counting_bound(1, 1.0).is_err());
        let n = 1e6 as usize;
        let ratio = counting_bound(n, 1.0).unwrap().exponent / ((n as f64).sqrt() * (n as f64).ln());
        let target = (2.0 * LN_2).sqrt() / 4.0;
        assert!((ratio - target).abs() / target < 0.15);
    }

    #[test]
    fn clique_bound_values() {
        assert_eq!(integrated_clique_bound(6, 2, 1.0).unwrap(), 16.0);
        assert_eq!(integrated_clique_bound(5, 2, 1.0).unwrap(), 12.25);
        assert!((integrated_clique_bound(7, 7, 0.3).unwrap() - 1.3f64.powi(7)).abs() < 1e-12);
        assert!(integrated_clique_bound(3, 0, 1.0).is_err());
        assert!(integrated_clique_bound(3, 4, 1.0).is_err());
        assert!((integrated_clique_log_bound(6, 2, 1.0).unwrap() - 16f64.ln()).abs() < 1e-14);
    }
}
