//! Per-graph comparison of every applicable bound with the exact values.

use serde::Serialize;

use super::{
    clique_bound_check, integrated_clique_log_bound, kdd_log_partition, kdd_occupancy, kdd_occupancy_exact,
    log_partition_lower_bound, moon_moser_check, occupancy_lower_bound,
};
use crate::error::{Error, Result};
use crate::graph::{Graph, GraphStats};
use crate::indpoly::{evaluate, Evaluation, Fugacity, IndPoly};

/// Slack allowed in floating-point bound comparisons before a violation is
/// reported.
pub const BOUND_TOLERANCE: f64 = 1e-9;

pub const CSV_HEADER: &str =
    "graph6,n,d,lambda,occupancy,thm13,kdd_upper,logP_per_n,thm14_per_n,clique_ok,mm_ok";

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub graph6: String,
    pub n: usize,
    /// Maximum degree.
    pub d: usize,
    pub regular: bool,
    pub triangle_free: bool,
    pub lambda: String,
    pub occupancy: f64,
    /// Triangle-free occupancy lower bound.
    pub thm13: Option<f64>,
    /// `K_{d,d}` occupancy; regular triangle-free graphs only.
    pub kdd_upper: Option<f64>,
    /// Whether the occupancy equals the `K_{d,d}` value (exactly, for rational λ).
    pub kdd_equality: Option<bool>,
    #[serde(rename = "logP_per_n")]
    pub log_p_per_n: f64,
    /// Triangle-free log-partition lower bound, per vertex.
    pub thm14_per_n: Option<f64>,
    /// `K_{d,d}` log-partition upper bound, per vertex.
    pub kdd_log_per_n: Option<f64>,
    /// Integrated clique-union upper bound on `ln P`, per vertex.
    pub clique_log_per_n: f64,
    pub clique_ok: bool,
    /// `Q ≡ 0`, i.e. the clique-union bound is attained.
    pub clique_tight: bool,
    pub mm_ok: bool,
    pub violations: Vec<String>,
}

impl BoundReport {
    pub fn slack_thm13(&self) -> Option<f64> {
        self.thm13.map(|b| self.occupancy - b)
    }

    pub fn slack_kdd(&self) -> Option<f64> {
        self.kdd_upper.map(|b| b - self.occupancy)
    }

    pub fn slack_thm14(&self) -> Option<f64> {
        self.thm14_per_n.map(|b| self.log_p_per_n - b)
    }

    pub fn slack_kdd_log(&self) -> Option<f64> {
        self.kdd_log_per_n.map(|b| b - self.log_p_per_n)
    }

    pub fn csv_row(&self) -> String {
        let opt = |x: Option<f64>| x.map_or_else(|| "NA".to_string(), |v| format!("{v:.12}"));
        format!(
            "{},{},{},{},{:.12},{},{},{:.12},{},{},{}",
            self.graph6,
            self.n,
            self.d,
            self.lambda,
            self.occupancy,
            opt(self.thm13),
            opt(self.kdd_upper),
            self.log_p_per_n,
            opt(self.thm14_per_n),
            self.clique_ok,
            self.mm_ok
        )
    }
}

/// True iff every component of `g` is `K_{d,d}`.
pub fn is_union_of_kdd(g: &Graph, d: usize) -> bool {
    d >= 1
        && g.is_triangle_free()
        && (0..g.n()).all(|v| g.degree(v) == d)
        && g.components().iter().all(|c| c.len() == 2 * d)
}

/// True iff every component of `g` is a clique and all have the same order.
pub fn is_union_of_equal_cliques(g: &Graph) -> bool {
    let comps = g.components();
    let size = comps.first().map_or(0, Vec::len);
    comps
        .iter()
        .all(|c| c.len() == size && c.iter().all(|&v| g.degree(v) == size - 1))
}

pub fn bound_report(
    graph6: &str,
    g: &Graph,
    stats: &GraphStats,
    poly: &IndPoly,
    lambda: &Fugacity,
) -> Result<BoundReport> {
    let n = g.n();
    if n == 0 {
        return Err(Error::InvalidArgument("bound report needs at least one vertex".into()));
    }
    let lam = lambda.to_f64();
    let d = stats.max_degree;
    let eval = evaluate(poly, lambda);
    let occupancy = eval.occupancy_f64();
    let log_p_per_n = eval.log_p() / n as f64;
    let mut violations = Vec::new();
    let tol = |x: f64| BOUND_TOLERANCE * x.abs().max(1.0);

    let thm13 = stats.triangle_free.then(|| occupancy_lower_bound(d, lam));
    if let Some(b) = thm13 {
        if occupancy < b - tol(b) {
            violations.push(format!("occupancy {occupancy} below triangle-free bound {b}"));
        }
    }
    let thm14_per_n = stats
        .triangle_free
        .then(|| log_partition_lower_bound(n, d, lam) / n as f64);
    if let Some(b) = thm14_per_n {
        if log_p_per_n < b - tol(b) {
            violations.push(format!("log P/n {log_p_per_n} below triangle-free bound {b}"));
        }
    }

    let kdd_applies = stats.triangle_free && stats.is_regular && d >= 1;
    let kdd_upper = kdd_applies.then(|| kdd_occupancy(d, lam));
    let kdd_equality = kdd_applies.then(|| match &eval {
        Evaluation::Exact(e) => e.occupancy == kdd_occupancy_exact(d, lambda.as_exact().expect("exact")),
        Evaluation::Float(e) => (e.occupancy - kdd_occupancy(d, lam)).abs() <= tol(e.occupancy),
    });
    if let (Some(b), Some(eq)) = (kdd_upper, kdd_equality) {
        if occupancy > b + tol(b) {
            violations.push(format!("occupancy {occupancy} above K_{{d,d}} value {b}"));
        }
        if eq != is_union_of_kdd(g, d) {
            violations.push(format!(
                "K_{{d,d}} equality is {eq} but graph {} a union of K_{{d,d}}",
                if eq { "is not" } else { "is" }
            ));
        }
    }
    let kdd_log_per_n = kdd_applies.then(|| kdd_log_partition(d, lam));
    if let Some(b) = kdd_log_per_n {
        if log_p_per_n > b + tol(b) {
            violations.push(format!("log P/n {log_p_per_n} above K_{{d,d}} value {b}"));
        }
    }

    let clique = clique_bound_check(poly)?;
    if !clique.ok {
        violations.push(format!("clique-union polynomial has negative coefficients: {:?}", clique.q_coeffs));
    }
    let clique_log_per_n = integrated_clique_log_bound(n, poly.alpha(), lam)? / n as f64;
    if log_p_per_n > clique_log_per_n + tol(clique_log_per_n) {
        violations.push(format!("log P/n {log_p_per_n} above clique-union bound {clique_log_per_n}"));
    }
    let mm_ok = moon_moser_check(poly);
    if !mm_ok {
        violations.push("Moon-Moser coefficient inequality fails".to_string());
    }

    Ok(BoundReport {
        graph6: graph6.to_string(),
        n,
        d,
        regular: stats.is_regular,
        triangle_free: stats.triangle_free,
        lambda: lambda.to_string(),
        occupancy,
        thm13,
        kdd_upper,
        kdd_equality,
        log_p_per_n,
        thm14_per_n,
        kdd_log_per_n,
        clique_log_per_n,
        clique_ok: clique.ok,
        clique_tight: clique.is_identically_zero(),
        mm_ok,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph6::to_graph6;
    use crate::indpoly::independence_polynomial;

    fn report(g: &Graph, lambda: &str) -> BoundReport {
        let p = independence_polynomial(g).unwrap();
        bound_report(&to_graph6(g), g, &g.stats(), &p, &lambda.parse().unwrap()).unwrap()
    }

    #[test]
    fn c4_is_kdd_equality() {
        let r = report(&Graph::cycle(4), "1");
        assert!(r.violations.is_empty(), "{:?}", r.violations);
        assert_eq!(r.kdd_equality, Some(true));
        assert!((r.occupancy - 2.0 / 7.0).abs() < 1e-15);
        let r = report(&Graph::cycle(5), "1");
        assert_eq!(r.kdd_equality, Some(false));
        assert!(r.violations.is_empty());
    }

    #[test]
    fn triangle_gates_theorems() {
        let r = report(&Graph::complete(4), "1/2");
        assert!(r.thm13.is_none() && r.thm14_per_n.is_none() && r.kdd_upper.is_none());
        assert!(r.clique_ok && r.clique_tight && r.mm_ok);
        assert!(r.violations.is_empty());
        assert!(r.csv_row().contains(",NA,NA,"));
    }

    #[test]
    fn float_lambda_reports() {
        let r = report(&Graph::complete_bipartite(3, 3), "1e-1");
        assert_eq!(r.kdd_equality, Some(true));
        assert!(r.violations.is_empty());
    }

    #[test]
    fn structural_predicates() {
        let two_c4 = Graph::cycle(4).disjoint_union(&Graph::cycle(4));
        assert!(is_union_of_kdd(&two_c4, 2));
        assert!(!is_union_of_kdd(&Graph::cycle(8), 2));
        assert!(is_union_of_equal_cliques(&Graph::complete(3).disjoint_union(&Graph::complete(3))));
        assert!(!is_union_of_equal_cliques(&Graph::complete(3).disjoint_union(&Graph::complete(2))));
        assert!(is_union_of_equal_cliques(&Graph::empty(4)));
        assert!(!is_union_of_equal_cliques(&Graph::path(3)));
    }
}
