//! Exact independence polynomials.
//!
//! `P_G(x) = sum_k i_k x^k` where `i_k` counts the independent sets of size
//! `k`.  The main routine branches on a maximum-degree vertex,
//! `P_G = P_{G-v} + x * P_{G-N[v]}`, factorises over connected components,
//! strips isolated vertices as `(1+x)^k` and memoises on the surviving-vertex
//! mask.  `brute_force_counts` is an independent subset-enumeration oracle.

mod eval;

pub use eval::{
    evaluate, evaluate_exact, evaluate_f64, integral_identity_residual, ratio, ratio_of, rational_to_f64,
    EvalResult, Evaluation, Fugacity,
};

use std::num::NonZeroUsize;

use lru::LruCache;
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Hard limit of the `u128` mask representation.
pub const MAX_EXACT_VERTICES: usize = 128;
pub const MAX_BRUTE_FORCE_VERTICES: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndPoly {
    n: usize,
    coeffs: Vec<BigUint>,
}

impl IndPoly {
    /// Builds a polynomial from raw coefficients; trailing zeros are dropped.
    pub fn from_coeffs(n: usize, mut coeffs: Vec<BigUint>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(BigUint::one());
        }
        IndPoly { n, coeffs }
    }

    fn from_u128(n: usize, coeffs: &[u128]) -> Self {
        IndPoly::from_coeffs(n, coeffs.iter().map(|&c| BigUint::from(c)).collect())
    }

    /// Vertex count of the underlying graph.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[BigUint] {
        &self.coeffs
    }

    /// Independence number: the degree of the polynomial.
    pub fn alpha(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `P(1)`, the number of independent sets.
    pub fn total(&self) -> BigUint {
        self.coeffs.iter().sum()
    }

    /// Product of two polynomials; the polynomial of a disjoint union.
    pub fn multiply(&self, other: &IndPoly) -> IndPoly {
        let mut out = vec![BigUint::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IndPoly::from_coeffs(self.n + other.n, out)
    }

    pub fn to_json(&self) -> PolyJson {
        PolyJson {
            n: self.n,
            coeffs: self.coeffs.iter().map(ToString::to_string).collect(),
            alpha: self.alpha(),
        }
    }

    pub fn coeffs_f64(&self) -> Vec<f64> {
        self.coeffs
            .iter()
            .map(|c| c.to_f64().unwrap_or(f64::INFINITY))
            .collect()
    }
}

impl std::fmt::Display for IndPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Wire form: big integers as decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub n: usize,
    pub coeffs: Vec<String>,
    pub alpha: usize,
}

impl TryFrom<PolyJson> for IndPoly {
    type Error = Error;

    fn try_from(j: PolyJson) -> Result<IndPoly> {
        let coeffs = j
            .coeffs
            .iter()
            .map(|s| s.parse::<BigUint>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::InvalidArgument(format!("bad coefficient: {e}")))?;
        let p = IndPoly::from_coeffs(j.n, coeffs);
        if p.alpha() != j.alpha {
            return Err(Error::InvalidArgument(format!(
                "alpha {} does not match coefficient list of degree {}",
                j.alpha,
                p.alpha()
            )));
        }
        Ok(p)
    }
}

#[derive(Clone, Debug)]
pub struct ExactConfig {
    /// Largest vertex count accepted, at most [`MAX_EXACT_VERTICES`].
    pub max_vertices: usize,
    /// Memo entries kept before least-recently-used eviction.
    pub memo_capacity: usize,
}

impl Default for ExactConfig {
    fn default() -> Self {
        ExactConfig {
            max_vertices: 40,
            memo_capacity: 1 << 20,
        }
    }
}

pub fn independence_polynomial(g: &Graph) -> Result<IndPoly> {
    independence_polynomial_with(g, &ExactConfig::default())
}

pub fn independence_polynomial_with(g: &Graph, cfg: &ExactConfig) -> Result<IndPoly> {
    let cap = cfg.max_vertices.min(MAX_EXACT_VERTICES);
    if g.n() > cap {
        return Err(Error::TooLarge { n: g.n(), cap });
    }
    let adj = g.masks().expect("checked against the mask width");
    let mut solver = Solver {
        adj,
        // the cache allocates its full capacity up front; a graph on n vertices
        // has at most 2^n induced subgraphs to remember
        memo: LruCache::new(NonZeroUsize::new(cfg.memo_capacity.min(1 << g.n().min(20)).max(1)).unwrap()),
    };
    let all = if g.n() == 128 { u128::MAX } else { (1u128 << g.n()) - 1 };
    let coeffs = solver.solve(all);
    Ok(IndPoly::from_u128(g.n(), &coeffs))
}

struct Solver {
    adj: Vec<u128>,
    memo: LruCache<u128, Vec<u128>>,
}

fn add_into(acc: &mut Vec<u128>, other: &[u128], shift: usize) {
    if acc.len() < other.len() + shift {
        acc.resize(other.len() + shift, 0);
    }
    for (i, c) in other.iter().enumerate() {
        acc[i + shift] += c;
    }
}

fn convolve(a: &[u128], b: &[u128]) -> Vec<u128> {
    let mut out = vec![0u128; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn binomial_row(k: usize) -> Vec<u128> {
    let mut row = vec![1u128];
    for _ in 0..k {
        let mut next = vec![1u128; row.len() + 1];
        for i in 1..row.len() {
            next[i] = row[i - 1] + row[i];
        }
        row = next;
    }
    row
}

impl Solver {
    fn component_of_lowest(&self, mask: u128) -> u128 {
        let mut comp = mask & mask.wrapping_neg();
        let mut frontier = comp;
        while frontier != 0 {
            let mut next = 0;
            let mut f = frontier;
            while f != 0 {
                let v = f.trailing_zeros() as usize;
                f &= f - 1;
                next |= self.adj[v];
            }
            next &= mask & !comp;
            comp |= next;
            frontier = next;
        }
        comp
    }

    fn solve(&mut self, mask: u128) -> Vec<u128> {
        if mask == 0 {
            return vec![1];
        }
        if mask.count_ones() == 1 {
            return vec![1, 1];
        }
        if let Some(p) = self.memo.get(&mask) {
            return p.clone();
        }
        let result = self.solve_uncached(mask);
        self.memo.put(mask, result.clone());
        result
    }

    fn solve_uncached(&mut self, mask: u128) -> Vec<u128> {
        let mut isolated = 0u128;
        let mut pivot = 0;
        let mut pivot_deg = 0;
        let mut m = mask;
        while m != 0 {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            let deg = (self.adj[v] & mask).count_ones();
            if deg == 0 {
                isolated |= 1 << v;
            } else if deg > pivot_deg {
                pivot_deg = deg;
                pivot = v;
            }
        }
        if isolated != 0 {
            let rest = self.solve(mask & !isolated);
            return convolve(&rest, &binomial_row(isolated.count_ones() as usize));
        }
        let comp = self.component_of_lowest(mask);
        if comp != mask {
            let a = self.solve(comp);
            let b = self.solve(mask & !comp);
            return convolve(&a, &b);
        }
        let bit = 1u128 << pivot;
        let mut out = self.solve(mask & !bit);
        let closed = self.solve(mask & !(self.adj[pivot] | bit));
        add_into(&mut out, &closed, 1);
        out
    }
}

/// Counts independent sets by size over all `2^n` vertex subsets.
pub fn brute_force_counts(g: &Graph) -> Result<IndPoly> {
    let n = g.n();
    if n > MAX_BRUTE_FORCE_VERTICES {
        return Err(Error::TooLarge {
            n,
            cap: MAX_BRUTE_FORCE_VERTICES,
        });
    }
    let adj: Vec<u32> = (0..n).map(|v| g.row(v).first().copied().unwrap_or(0) as u32).collect();
    let mut independent = vec![false; 1 << n];
    let mut counts = vec![0u64; n + 1];
    independent[0] = true;
    counts[0] = 1;
    for s in 1usize..1 << n {
        let v = s.trailing_zeros() as usize;
        let rest = s & (s - 1);
        if independent[rest] && adj[v] as usize & rest == 0 {
            independent[s] = true;
            counts[s.count_ones() as usize] += 1;
        }
    }
    Ok(IndPoly::from_coeffs(n, counts.into_iter().map(BigUint::from).collect()))
}
