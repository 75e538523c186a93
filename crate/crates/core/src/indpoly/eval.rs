use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::IndPoly;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Positive fugacity, either an exact rational or a double.
#[derive(Clone, Debug, PartialEq)]
pub enum Fugacity {
    Exact(BigRational),
    Float(f64),
}

impl Fugacity {
    pub fn ratio(num: u64, den: u64) -> Fugacity {
        assert!(num > 0 && den > 0, "fugacity must be positive");
        Fugacity::Exact(BigRational::new(num.into(), den.into()))
    }

    pub fn one() -> Fugacity {
        Fugacity::ratio(1, 1)
    }

    pub fn float(x: f64) -> Result<Fugacity> {
        if x.is_finite() && x > 0.0 {
            Ok(Fugacity::Float(x))
        } else {
            Err(Error::Fugacity(x.to_string()))
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Fugacity::Exact(r) => rational_to_f64(r),
            Fugacity::Float(x) => *x,
        }
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Fugacity::Exact(r) => Some(r),
            Fugacity::Float(_) => None,
        }
    }
}

impl fmt::Display for Fugacity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fugacity::Exact(r) => write!(f, "{r}"),
            Fugacity::Float(x) => write!(f, "{x}"),
        }
    }
}

/// Accepts `p/q` and plain decimals (`0.25`) as exact rationals; anything
/// with an exponent (`1e-3`) is parsed as a float.
impl FromStr for Fugacity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Fugacity> {
        let bad = || Error::Fugacity(s.to_string());
        let t = s.trim();
        let exact = if let Some((p, q)) = t.split_once('/') {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            BigRational::new(p, q)
        } else if !t.is_empty() && t.chars().all(|c| c.is_ascii_digit() || c == '.') && t.matches('.').count() <= 1 {
            let (int, frac) = t.split_once('.').unwrap_or((t, ""));
            if int.is_empty() && frac.is_empty() {
                return Err(bad());
            }
            let digits: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
            BigRational::new(digits, BigInt::from(10u32).pow(frac.len() as u32))
        } else {
            let x: f64 = t.parse().map_err(|_| bad())?;
            return Fugacity::float(x).map_err(|_| bad());
        };
        if exact.is_positive() {
            Ok(Fugacity::Exact(exact))
        } else {
            Err(bad())
        }
    }
}

/// Hard-core quantities at one fugacity.  `log_p` is `ln P(λ)`, kept
/// separately because `P` itself can overflow a double.
#[derive(Clone, Debug, PartialEq)]
pub struct EvalResult<T> {
    pub p: T,
    pub p_prime: T,
    pub mean_size: T,
    pub occupancy: T,
    pub variance: T,
    pub log_p: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Evaluation {
    Exact(EvalResult<BigRational>),
    Float(EvalResult<f64>),
}

impl Evaluation {
    pub fn occupancy_f64(&self) -> f64 {
        match self {
            Evaluation::Exact(e) => rational_to_f64(&e.occupancy),
            Evaluation::Float(e) => e.occupancy,
        }
    }

    pub fn mean_size_f64(&self) -> f64 {
        match self {
            Evaluation::Exact(e) => rational_to_f64(&e.mean_size),
            Evaluation::Float(e) => e.mean_size,
        }
    }

    pub fn variance_f64(&self) -> f64 {
        match self {
            Evaluation::Exact(e) => rational_to_f64(&e.variance),
            Evaluation::Float(e) => e.variance,
        }
    }

    pub fn log_p(&self) -> f64 {
        match self {
            Evaluation::Exact(e) => e.log_p,
            Evaluation::Float(e) => e.log_p,
        }
    }
}

pub fn evaluate(p: &IndPoly, lambda: &Fugacity) -> Evaluation {
    match lambda {
        Fugacity::Exact(r) => Evaluation::Exact(evaluate_exact(p, r)),
        Fugacity::Float(x) => Evaluation::Float(evaluate_f64(p, *x)),
    }
}

/// Exact evaluation by Horner's rule on `P`, `P'` and `P''`.
pub fn evaluate_exact(poly: &IndPoly, lambda: &BigRational) -> EvalResult<BigRational> {
    let c: Vec<BigRational> = poly
        .coeffs()
        .iter()
        .map(|x| BigRational::from_integer(BigInt::from(x.clone())))
        .collect();
    let zero = BigRational::zero();
    let mut p = zero.clone();
    let mut dp = zero.clone();
    let mut ddp = zero.clone();
    for coeff in c.iter().rev() {
        ddp = &ddp * lambda + &dp * BigRational::from_integer(2.into());
        dp = &dp * lambda + &p;
        p = &p * lambda + coeff;
    }
    let mean = lambda * &dp / &p;
    let second = (lambda * &dp + lambda * lambda * &ddp) / &p;
    let variance = second - &mean * &mean;
    let occupancy = if poly.n() == 0 {
        zero
    } else {
        &mean / BigRational::from_integer(poly.n().into())
    };
    let log_p = ln_rational(&p);
    EvalResult {
        p,
        p_prime: dp,
        mean_size: mean,
        occupancy,
        variance,
        log_p,
    }
}

/// Floating-point evaluation through normalised weights `i_k λ^k`, which
/// stays finite for large `λ` and `n`.
pub fn evaluate_f64(poly: &IndPoly, lambda: f64) -> EvalResult<f64> {
    assert!(lambda > 0.0 && lambda.is_finite(), "fugacity must be positive and finite");
    let ln_lambda = lambda.ln();
    let logw: Vec<f64> = poly
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| ln_biguint(c) + k as f64 * ln_lambda)
        .collect();
    let top = logw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = logw.iter().map(|l| (l - top).exp()).collect();
    let total: f64 = w.iter().sum();
    let mean = w.iter().enumerate().map(|(k, x)| k as f64 * x).sum::<f64>() / total;
    let variance = w
        .iter()
        .enumerate()
        .map(|(k, x)| (k as f64 - mean).powi(2) * x)
        .sum::<f64>()
        / total;
    let log_p = top + total.ln();
    let p = log_p.exp();
    let occupancy = if poly.n() == 0 { 0.0 } else { mean / poly.n() as f64 };
    EvalResult {
        p,
        p_prime: p * mean / lambda,
        mean_size: mean,
        occupancy,
        variance,
        log_p,
    }
}

/// `α(G) / ᾱ_G(λ)` as an exact rational.
pub fn ratio(g: &Graph, lambda: &BigRational) -> Result<BigRational> {
    let p = super::independence_polynomial(g)?;
    ratio_of(&p, lambda)
}

pub fn ratio_of(p: &IndPoly, lambda: &BigRational) -> Result<BigRational> {
    if p.alpha() == 0 {
        return Err(Error::InvalidArgument("ratio is undefined for a graph without vertices".into()));
    }
    let e = evaluate_exact(p, lambda);
    Ok(BigRational::from_integer(p.alpha().into()) / e.mean_size)
}

/// `α − [ᾱ(1) + ∫_1^{λ_max} Var_λ(|I|)/λ dλ]`, with the integral computed by
/// adaptive Simpson quadrature in `t = ln λ` over `grid` initial panels.
pub fn integral_identity_residual(p: &IndPoly, lambda_max: f64, grid: usize) -> f64 {
    assert!(lambda_max >= 1.0, "lambda_max must be at least 1");
    let start = evaluate_f64(p, 1.0).mean_size;
    let upper = lambda_max.ln();
    let panels = grid.max(1);
    let f = |t: f64| evaluate_f64(p, t.exp()).variance;
    let mut integral = 0.0;
    if upper > 0.0 {
        let h = upper / panels as f64;
        for i in 0..panels {
            let (a, b) = (i as f64 * h, (i + 1) as f64 * h);
            integral += adaptive_simpson(&f, a, b, 1e-14 / panels as f64, 40);
        }
    }
    p.alpha() as f64 - (start + integral)
}

fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, eps: f64, depth: u32) -> f64 {
    let (fa, fb) = (f(a), f(b));
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, eps, depth)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    eps: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * eps {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, eps / 2.0, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, eps / 2.0, depth - 1)
}

pub(crate) fn ln_biguint(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().expect("64-bit prefix");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

pub(crate) fn ln_rational(r: &BigRational) -> f64 {
    assert!(r.is_positive(), "logarithm of a non-positive rational");
    let num = r.numer().magnitude();
    let den = r.denom().magnitude();
    ln_biguint(num) - ln_biguint(den)
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    if let Some(x) = r.to_f64() {
        if x.is_finite() {
            return x;
        }
    }
    let sign = if r.is_negative() { -1.0 } else { 1.0 };
    if r.is_zero() {
        return 0.0;
    }
    sign * ln_rational(&r.abs()).exp()
}
