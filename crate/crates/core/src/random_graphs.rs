//! Random regular graphs from the configuration model, optionally
//! conditioned on having no short cycles, and the tightness experiment that
//! compares sampled occupancy with the tree prediction.
//!
//! Each attempt pairs the `nd` half-edges uniformly at random and is
//! abandoned as soon as a loop, a repeated edge or a forbidden short cycle
//! appears.  Abandoning early rejects exactly the matchings a full pairing
//! would have rejected, so accepted graphs are uniform over the simple
//! (and, when conditioned, triangle-free) `d`-regular labelled graphs.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{occupancy_lower_bound, tree_alpha};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::sampler::{sample_run, SamplerConfig};

pub const DEFAULT_MAX_ATTEMPTS: u64 = 100_000;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegularSample {
    #[serde(skip)]
    pub graph: Graph,
    pub n: usize,
    pub d: usize,
    pub seed: u64,
    pub attempts: u64,
    pub rejections_simple: u64,
    /// Attempts rejected for a cycle shorter than the required girth.
    pub rejections_triangle: u64,
}

enum Attempt {
    Accepted(Vec<Vec<u32>>),
    NotSimple,
    ShortCycle,
}

fn check_params(n: usize, d: usize) -> Result<()> {
    if d >= n && !(n == 0 && d == 0) {
        return Err(Error::Degree { n, d });
    }
    if n * d % 2 == 1 {
        return Err(Error::Parity { n, d });
    }
    Ok(())
}

fn attempt(n: usize, d: usize, no_triangles: bool, rng: &mut ChaCha8Rng) -> Attempt {
    let mut stubs: Vec<u32> = (0..n as u32).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    let mut adj: Vec<Vec<u32>> = vec![Vec::with_capacity(d); n];
    let len = stubs.len();
    let mut i = 0;
    while i < len {
        let j = rng.random_range(i + 1..len);
        stubs.swap(i + 1, j);
        let (u, v) = (stubs[i], stubs[i + 1]);
        let (ua, va) = (&adj[u as usize], &adj[v as usize]);
        if u == v || ua.contains(&v) {
            return Attempt::NotSimple;
        }
        if no_triangles && ua.iter().any(|w| va.contains(w)) {
            return Attempt::ShortCycle;
        }
        adj[u as usize].push(v);
        adj[v as usize].push(u);
        i += 2;
    }
    Attempt::Accepted(adj)
}

/// Uniform simple `d`-regular graph on `n` vertices with girth at least
/// `min_girth` (values up to 3 impose nothing).
pub fn random_regular_with_girth(n: usize, d: usize, seed: u64, min_girth: usize, max_attempts: u64) -> Result<RegularSample> {
    check_params(n, d)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut rejections_simple, mut rejections_triangle) = (0, 0);
    for attempts in 1..=max_attempts {
        match attempt(n, d, min_girth >= 4, &mut rng) {
            Attempt::NotSimple => rejections_simple += 1,
            Attempt::ShortCycle => rejections_triangle += 1,
            Attempt::Accepted(adj) => {
                let edges = adj
                    .iter()
                    .enumerate()
                    .flat_map(|(u, ns)| ns.iter().filter(move |&&v| u < v as usize).map(move |&v| (u, v as usize)));
                let graph = Graph::from_edges(n, edges)?;
                if min_girth > 4 && graph.girth().is_some_and(|g| g < min_girth) {
                    rejections_triangle += 1;
                    continue;
                }
                return Ok(RegularSample {
                    graph,
                    n,
                    d,
                    seed,
                    attempts,
                    rejections_simple,
                    rejections_triangle,
                });
            }
        }
    }
    Err(Error::RetryBudget {
        attempts: max_attempts,
        rejections_simple,
        rejections_triangle,
    })
}

pub fn random_regular(n: usize, d: usize, seed: u64) -> Result<RegularSample> {
    random_regular_with_girth(n, d, seed, 0, DEFAULT_MAX_ATTEMPTS)
}

pub fn random_regular_triangle_free(n: usize, d: usize, seed: u64, max_attempts: u64) -> Result<RegularSample> {
    random_regular_with_girth(n, d, seed, 4, max_attempts)
}

/// Erdős–Rényi `G(n, p)`.
pub fn gnp(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Graph::empty(n);
    for v in 1..n {
        for u in 0..v {
            if rng.random::<f64>() < p {
                g.add_edge(u, v);
            }
        }
    }
    g
}

/// Visits vertex pairs in random order and adds each with probability `p`
/// unless it would close a triangle.
pub fn random_triangle_free(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs: Vec<(usize, usize)> = (1..n).flat_map(|v| (0..v).map(move |u| (u, v))).collect();
    pairs.shuffle(&mut rng);
    let mut g = Graph::empty(n);
    for (u, v) in pairs {
        if rng.random::<f64>() < p && !g.row(u).iter().zip(g.row(v)).any(|(a, b)| a & b != 0) {
            g.add_edge(u, v);
        }
    }
    g
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TightnessRow {
    pub n: usize,
    pub d: usize,
    pub lambda: f64,
    pub seed: u64,
    pub occ_hat: f64,
    pub stderr: f64,
    pub tree_alpha: f64,
    pub thm13: f64,
    /// `occ_hat - tree_alpha`.
    pub gap_tree: f64,
    /// `occ_hat - thm13`.
    pub gap_thm13: f64,
}

pub const TIGHTNESS_CSV_HEADER: &str = "n,d,lambda,seed,occ_hat,stderr,tree_alpha,thm13,gap_tree,gap_thm13";

impl TightnessRow {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{:.8},{:.8},{:.8},{:.8},{:.8},{:.8}",
            self.n,
            self.d,
            self.lambda,
            self.seed,
            self.occ_hat,
            self.stderr,
            self.tree_alpha,
            self.thm13,
            self.gap_tree,
            self.gap_thm13
        )
    }
}

#[derive(Clone, Copy, Debug)]
pub struct TightnessConfig {
    pub samples: usize,
    pub max_attempts: u64,
}

impl Default for TightnessConfig {
    fn default() -> Self {
        TightnessConfig {
            samples: 1000,
            max_attempts: DEFAULT_MAX_ATTEMPTS,
        }
    }
}

/// One row per `(seed, λ)`.  Each seed draws one triangle-free `d`-regular
/// graph, which is then sampled at every `λ` with the same seed.  Rows are
/// ordered by seed, then by `λ`.
pub fn tightness_experiment(n: usize, d: usize, lambdas: &[f64], seeds: &[u64], cfg: &TightnessConfig) -> Result<Vec<TightnessRow>> {
    let tree_d = u32::try_from(d).map_err(|_| Error::InvalidArgument(format!("degree {d} too large")))?;
    let per_seed = seeds
        .par_iter()
        .map(|&seed| {
            let sample = random_regular_triangle_free(n, d, seed, cfg.max_attempts)?;
            lambdas
                .iter()
                .map(|&lambda| {
                    let run = sample_run(&sample.graph, lambda, &SamplerConfig::for_graph(&sample.graph, seed, cfg.samples))?;
                    let tree = tree_alpha(tree_d, lambda)?.alpha;
                    let thm13 = occupancy_lower_bound(d, lambda);
                    let occ = run.occupancy.estimate;
                    Ok(TightnessRow {
                        n,
                        d,
                        lambda,
                        seed,
                        occ_hat: occ,
                        stderr: run.occupancy.stderr,
                        tree_alpha: tree,
                        thm13,
                        gap_tree: occ - tree,
                        gap_thm13: occ - thm13,
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(per_seed.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forced_and_invalid() {
        for seed in 0..5 {
            assert_eq!(random_regular(4, 3, seed).unwrap().graph, Graph::complete(4));
        }
        assert_eq!(random_regular(5, 3, 0), Err(Error::Parity { n: 5, d: 3 }));
        assert_eq!(random_regular(4, 4, 0), Err(Error::Degree { n: 4, d: 4 }));
        assert!(matches!(
            random_regular_triangle_free(4, 3, 0, 50),
            Err(Error::RetryBudget { attempts: 50, .. })
        ));
        assert_eq!(random_regular(6, 0, 1).unwrap().graph, Graph::empty(6));
    }

    #[test]
    fn samples_are_simple_and_regular() {
        for seed in 1..=100 {
            let s = random_regular(8, 3, seed).unwrap();
            assert!(s.graph.is_regular() && s.graph.max_degree() == 3);
            assert_eq!(s.graph.edge_count(), 12);
            assert_eq!(s.attempts, s.rejections_simple + s.rejections_triangle + 1);
        }
    }

    #[test]
    fn triangle_free_conditioning() {
        for seed in 0..20 {
            let s = random_regular_triangle_free(6, 2, seed, 1000).unwrap();
            assert_eq!(s.graph.girth(), Some(6));
        }
        let s = random_regular_with_girth(30, 3, 9, 5, DEFAULT_MAX_ATTEMPTS).unwrap();
        assert!(s.graph.girth().unwrap() >= 5 && s.graph.is_regular());
    }

    #[test]
    fn seeded_generators_are_deterministic() {
        assert_eq!(random_regular(50, 4, 3).unwrap(), random_regular(50, 4, 3).unwrap());
        assert_eq!(gnp(20, 0.3, 1), gnp(20, 0.3, 1));
        let g = random_triangle_free(20, 0.5, 2);
        assert!(g.is_triangle_free() && g.edge_count() > 0);
    }

    #[test]
    fn tightness_rows() {
        let rows = tightness_experiment(200, 3, &[0.5, 1.0], &[1, 2], &TightnessConfig { samples: 200, ..Default::default() }).unwrap();
        assert_eq!(rows.len(), 4);
        assert_eq!((rows[0].seed, rows[0].lambda, rows[1].lambda), (1, 0.5, 1.0));
        for r in &rows {
            assert!(r.gap_thm13 > -3.0 * r.stderr);
            assert!(r.gap_tree.abs() < 0.03, "{r:?}");
        }
        assert_eq!(rows[0].csv_row().split(',').count(), TIGHTNESS_CSV_HEADER.split(',').count());
    }
}
