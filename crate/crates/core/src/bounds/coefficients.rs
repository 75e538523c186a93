//! Coefficient-level inequalities on the independence polynomial: the
//! clique-union bound `P ≥ (λ/α + 1/n) P'` and the Moon–Moser ratio
//! inequality it is derived from.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::indpoly::IndPoly;

#[derive(Clone, Debug, PartialEq)]
pub struct CliqueBoundCheck {
    /// All coefficients of `Q = P - (λ/α) P' - (1/n) P'` are nonnegative.
    pub ok: bool,
    /// `Q[0..=α]`.
    pub q_coeffs: Vec<BigRational>,
    /// Indices where `Q[k] = 0`.
    pub zeros: Vec<usize>,
}

impl CliqueBoundCheck {
    pub fn is_identically_zero(&self) -> bool {
        self.zeros.len() == self.q_coeffs.len()
    }
}

fn coeff(p: &IndPoly, k: usize) -> BigInt {
    p.coeffs().get(k).cloned().map(BigInt::from).unwrap_or_default()
}

pub fn clique_bound_check(p: &IndPoly) -> Result<CliqueBoundCheck> {
    let n = p.n();
    let alpha = p.alpha();
    if n == 0 {
        return Err(Error::InvalidArgument("clique bound needs at least one vertex".into()));
    }
    let a = BigInt::from(alpha);
    let nn = BigInt::from(n);
    // Q[k-1] = i_{k-1} (1 - (k-1)/α) - (k/n) i_k, for k = 1..=α+1
    let q_coeffs: Vec<BigRational> = (1..=alpha + 1)
        .map(|k| {
            let prev = coeff(p, k - 1);
            let first = BigRational::new(prev * (&a - BigInt::from(k - 1)), a.clone());
            let second = BigRational::new(BigInt::from(k) * coeff(p, k), nn.clone());
            first - second
        })
        .collect();
    let zeros = q_coeffs
        .iter()
        .enumerate()
        .filter(|(_, q)| q.is_zero())
        .map(|(i, _)| i)
        .collect();
    Ok(CliqueBoundCheck {
        ok: q_coeffs.iter().all(|q| !q.is_negative()),
        q_coeffs,
        zeros,
    })
}

/// Values of `k` in `2..=α` at which
/// `(k² i_k/i_{k-1} - n)/(k² - 1) ≤ i_{k+1}/i_k` fails, with `i_{α+1} = 0`.
pub fn moon_moser_violations(p: &IndPoly) -> Vec<usize> {
    let n = BigInt::from(p.n());
    (2..=p.alpha())
        .filter(|&k| {
            let k2 = BigInt::from(k * k);
            let (prev, cur, next) = (coeff(p, k - 1), coeff(p, k), coeff(p, k + 1));
            let lhs = (&k2 * &cur - &n * &prev) * &cur;
            let rhs = (k2 - 1) * next * prev;
            lhs > rhs
        })
        .collect()
}

pub fn moon_moser_check(p: &IndPoly) -> bool {
    moon_moser_violations(p).is_empty()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::indpoly::independence_polynomial;

    fn poly(g: &Graph) -> IndPoly {
        independence_polynomial(g).unwrap()
    }

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn clique_union_is_tight() {
        let g = Graph::complete(3).disjoint_union(&Graph::complete(3));
        let c = clique_bound_check(&poly(&g)).unwrap();
        assert!(c.ok && c.is_identically_zero());
    }

    #[test]
    fn cycle5_gives_half_lambda() {
        let c = clique_bound_check(&poly(&Graph::cycle(5))).unwrap();
        assert!(c.ok);
        assert_eq!(c.q_coeffs, vec![q(0, 1), q(1, 2), q(0, 1)]);
        assert_eq!(c.zeros, vec![0, 2]);
    }

    #[test]
    fn empty_graph_profile() {
        let c = clique_bound_check(&poly(&Graph::empty(3))).unwrap();
        assert!(c.ok);
        assert_eq!(c.q_coeffs[2], q(0, 1));
        assert!(clique_bound_check(&poly(&Graph::empty(0))).is_err());
    }

    #[test]
    fn moon_moser_examples() {
        assert!(moon_moser_check(&poly(&Graph::cycle(5))));
        // empty(4), k = 2 holds with equality: (4*6 - 4*4)*6 = 3*4*4
        let p = poly(&Graph::empty(4));
        assert!(moon_moser_check(&p));
        let tweaked = IndPoly::from_coeffs(
            4,
            [1u32, 4, 7, 4, 1].into_iter().map(Into::into).collect(),
        );
        assert_eq!(moon_moser_violations(&tweaked), vec![2]);
    }
}
