//! Glauber dynamics for the hard-core model.
//!
//! Each step picks a uniform vertex `v`.  If a neighbour of `v` is occupied,
//! `v` stays empty; otherwise `v` is occupied with probability `λ/(1+λ)`.
//! The chain is reversible with respect to `Pr[I] ∝ λ^|I|`.
//!
//! Statistics are taken every `thinning` steps after `burn_in` steps, and
//! standard errors come from batch means.  Metastability near condensation
//! (large `λ` and `d`) is not detected.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Batches used for batch-means standard errors.
pub const BATCHES: usize = 100;

/// Stream offset for the auxiliary generator that picks observed vertices,
/// so observation never perturbs the trajectory.
const OBSERVER_STREAM: u64 = 1 << 63;

/// `100 n ln n` steps, at least `n`.
pub fn default_burn_in(n: usize) -> u64 {
    let nf = n.max(1) as f64;
    ((100.0 * nf * nf.ln()).ceil() as u64).max(n as u64)
}

/// One sweep, `n` steps.
pub fn default_thinning(n: usize) -> u64 {
    n.max(1) as u64
}

/// Uniqueness threshold `(d-1)^(d-1)/(d-2)^d` of the infinite `d`-regular
/// tree, for `d ≥ 3`.  Above it Glauber dynamics can mix slowly on
/// bipartite-like graphs of maximum degree `d`.
pub fn uniqueness_threshold(d: usize) -> Option<f64> {
    (d >= 3).then(|| {
        let d = d as f64;
        ((d - 1.0) * (d - 1.0).ln() - d * (d - 2.0).ln()).exp()
    })
}

/// A warning when `λ` is above [`uniqueness_threshold`] for the maximum
/// degree of `g`, where estimates may be biased by slow mixing.
pub fn regime_warning(g: &Graph, lambda: f64) -> Option<String> {
    let d = g.max_degree();
    let lc = uniqueness_threshold(d)?;
    (lambda > lc).then(|| {
        format!("fugacity {lambda} exceeds the uniqueness threshold {lc:.4} for maximum degree {d}; mixing may be slow and standard errors optimistic")
    })
}

fn chain_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda.is_finite() && lambda > 0.0 {
        Ok(())
    } else {
        Err(Error::Fugacity(lambda.to_string()))
    }
}

/// Single-site heat-bath chain on the independent sets of a graph.
#[derive(Clone, Debug)]
pub struct HardCoreChain<'g> {
    graph: &'g Graph,
    offsets: Vec<usize>,
    targets: Vec<u32>,
    occupied: Vec<u64>,
    /// Number of occupied neighbours of each vertex.
    blocked: Vec<u32>,
    size: usize,
    lambda: f64,
    p_occupy: f64,
    rng: ChaCha8Rng,
    steps: u64,
}

impl<'g> HardCoreChain<'g> {
    /// Starts from the empty set.  `stream` separates chains sharing a seed.
    pub fn new(graph: &'g Graph, lambda: f64, seed: u64, stream: u64) -> Result<Self> {
        check_lambda(lambda)?;
        if graph.n() == 0 {
            return Err(Error::InvalidArgument("sampler needs at least one vertex".into()));
        }
        let n = graph.n();
        let mut offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::with_capacity(2 * graph.edge_count());
        offsets.push(0);
        for v in 0..n {
            targets.extend(graph.neighbors(v).map(|u| u as u32));
            offsets.push(targets.len());
        }
        Ok(HardCoreChain {
            graph,
            offsets,
            targets,
            occupied: vec![0; n.div_ceil(64)],
            blocked: vec![0; n],
            size: 0,
            lambda,
            p_occupy: lambda / (1.0 + lambda),
            rng: chain_rng(seed, stream),
            steps: 0,
        })
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    /// Size of the current independent set.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_occupied(&self, v: usize) -> bool {
        self.occupied[v / 64] >> (v % 64) & 1 == 1
    }

    /// No neighbour of `v` is occupied.  Occupied vertices are uncovered.
    pub fn is_uncovered(&self, v: usize) -> bool {
        self.blocked[v] == 0
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    /// Number of uncovered neighbours of `v`.
    pub fn uncovered_neighbors(&self, v: usize) -> usize {
        self.neighbors(v).iter().filter(|&&u| self.blocked[u as usize] == 0).count()
    }

    pub fn occupied_set(&self) -> Vec<usize> {
        (0..self.graph.n()).filter(|&v| self.is_occupied(v)).collect()
    }

    fn set(&mut self, v: usize, occupy: bool) {
        if self.is_occupied(v) == occupy {
            return;
        }
        self.occupied[v / 64] ^= 1 << (v % 64);
        let (lo, hi) = (self.offsets[v], self.offsets[v + 1]);
        if occupy {
            self.size += 1;
            for &u in &self.targets[lo..hi] {
                self.blocked[u as usize] += 1;
            }
        } else {
            self.size -= 1;
            for &u in &self.targets[lo..hi] {
                self.blocked[u as usize] -= 1;
            }
        }
    }

    pub fn step(&mut self) {
        let n = self.graph.n();
        let v = self.rng.random_range(0..n);
        let u: f64 = self.rng.random();
        self.steps += 1;
        if self.blocked[v] == 0 {
            self.set(v, u < self.p_occupy);
        }
    }

    pub fn run(&mut self, steps: u64) {
        for _ in 0..steps {
            self.step();
        }
    }
}

/// Mean and batch-means standard error of a sequence.  Uses up to
/// [`BATCHES`] equal batches; the standard error is infinite with fewer than
/// two.
pub fn batch_means(xs: &[f64]) -> (f64, f64) {
    let len = xs.len();
    if len == 0 {
        return (f64::NAN, f64::INFINITY);
    }
    let mean = xs.iter().sum::<f64>() / len as f64;
    let batches = BATCHES.min(len);
    if batches < 2 {
        return (mean, f64::INFINITY);
    }
    let size = len / batches;
    let means: Vec<f64> = xs[..size * batches]
        .chunks(size)
        .map(|c| c.iter().sum::<f64>() / size as f64)
        .collect();
    let bm = means.iter().sum::<f64>() / batches as f64;
    let var = means.iter().map(|m| (m - bm).powi(2)).sum::<f64>() / (batches - 1) as f64;
    (mean, (var / batches as f64).sqrt())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SamplerConfig {
    pub seed: u64,
    pub burn_in: u64,
    pub samples: usize,
    pub thinning: u64,
}

impl SamplerConfig {
    /// Default burn-in and thinning for `g`.
    pub fn for_graph(g: &Graph, seed: u64, samples: usize) -> Self {
        SamplerConfig {
            seed,
            burn_in: default_burn_in(g.n()),
            samples,
            thinning: default_thinning(g.n()),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.samples == 0 || self.thinning == 0 {
            return Err(Error::InvalidArgument("samples and thinning must be at least 1".into()));
        }
        Ok(())
    }
}

/// Drives a chain through burn-in then calls `observe` on each retained
/// state, passing an auxiliary generator for any extra randomness.
fn sample_states<F>(g: &Graph, lambda: f64, cfg: &SamplerConfig, stream: u64, mut observe: F) -> Result<()>
where
    F: FnMut(&HardCoreChain<'_>, &mut ChaCha8Rng),
{
    cfg.validate()?;
    let mut chain = HardCoreChain::new(g, lambda, cfg.seed, stream)?;
    let mut aux = chain_rng(cfg.seed, stream | OBSERVER_STREAM);
    chain.run(cfg.burn_in);
    for _ in 0..cfg.samples {
        chain.run(cfg.thinning);
        observe(&chain, &mut aux);
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OccupancyEstimate {
    /// Time average of `|I|/n`.
    pub estimate: f64,
    pub stderr: f64,
    pub samples: usize,
    pub burn_in: u64,
}

/// Counts of the number `Z` of uncovered neighbours of a uniform vertex.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZHistogram {
    /// `counts[j]` for `j = 0..=max_degree`.
    pub counts: Vec<u64>,
    pub samples: u64,
}

impl ZHistogram {
    /// Empirical `E[f(Z)]`.
    pub fn expectation(&self, f: impl Fn(usize) -> f64) -> f64 {
        let total: f64 = self.counts.iter().enumerate().map(|(j, &c)| c as f64 * f(j)).sum();
        total / self.samples as f64
    }

    pub fn mean(&self) -> f64 {
        self.expectation(|j| j as f64)
    }
}

/// Occupancy estimate and `Z` histogram from one trajectory.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleRun {
    pub occupancy: OccupancyEstimate,
    pub z_histogram: ZHistogram,
}

pub fn sample_run(g: &Graph, lambda: f64, cfg: &SamplerConfig) -> Result<SampleRun> {
    sample_run_stream(g, lambda, cfg, 0)
}

fn sample_run_stream(g: &Graph, lambda: f64, cfg: &SamplerConfig, stream: u64) -> Result<SampleRun> {
    let n = g.n();
    let mut fractions = Vec::with_capacity(cfg.samples);
    let mut counts = vec![0u64; g.max_degree() + 1];
    sample_states(g, lambda, cfg, stream, |chain, aux| {
        fractions.push(chain.size() as f64 / n as f64);
        let v = aux.random_range(0..n);
        counts[chain.uncovered_neighbors(v)] += 1;
    })?;
    let (estimate, stderr) = batch_means(&fractions);
    Ok(SampleRun {
        occupancy: OccupancyEstimate {
            estimate,
            stderr,
            samples: cfg.samples,
            burn_in: cfg.burn_in,
        },
        z_histogram: ZHistogram {
            counts,
            samples: cfg.samples as u64,
        },
    })
}

pub fn estimate_occupancy(
    g: &Graph,
    lambda: f64,
    seed: u64,
    burn_in: u64,
    samples: usize,
    thinning: u64,
) -> Result<OccupancyEstimate> {
    let cfg = SamplerConfig {
        seed,
        burn_in,
        samples,
        thinning,
    };
    Ok(sample_run(g, lambda, &cfg)?.occupancy)
}

/// Histogram of `Z` with default burn-in and thinning.
pub fn z_histogram(g: &Graph, lambda: f64, seed: u64, samples: usize) -> Result<ZHistogram> {
    Ok(sample_run(g, lambda, &SamplerConfig::for_graph(g, seed, samples))?.z_histogram)
}

/// Several independent chains on one graph, run in parallel.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MultiChainEstimate {
    pub chains: Vec<OccupancyEstimate>,
    /// Mean of the per-chain estimates.
    pub estimate: f64,
    pub stderr: f64,
}

/// Chain `i` uses stream `i` of `cfg.seed`; results are ordered by `i`.
pub fn estimate_occupancy_chains(g: &Graph, lambda: f64, cfg: &SamplerConfig, chains: usize) -> Result<MultiChainEstimate> {
    if chains == 0 {
        return Err(Error::InvalidArgument("need at least one chain".into()));
    }
    let runs = (0..chains as u64)
        .into_par_iter()
        .map(|i| sample_run_stream(g, lambda, cfg, i).map(|r| r.occupancy))
        .collect::<Result<Vec<_>>>()?;
    let k = runs.len() as f64;
    let estimate = runs.iter().map(|r| r.estimate).sum::<f64>() / k;
    let stderr = runs.iter().map(|r| r.stderr * r.stderr).sum::<f64>().sqrt() / k;
    Ok(MultiChainEstimate {
        chains: runs,
        estimate,
        stderr,
    })
}

/// Both sides of `ᾱ/n = λ/(1+λ) · E[(1+λ)^(-Z)]` and of the degree bound
/// `λ/(1+λ) · E[Z]/d ≤ ᾱ/n`, all averaged over every vertex of each
/// retained state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ZIdentity {
    pub occupancy: f64,
    pub occupancy_stderr: f64,
    /// `λ/(1+λ) · E[(1+λ)^(-Z)]`.
    pub predicted: f64,
    /// Mean of the per-state difference `predicted - occupancy`.
    pub difference: f64,
    pub difference_stderr: f64,
    pub mean_z: f64,
    /// `λ/(1+λ) · E[Z]/d`; `NaN` when `d = 0`.
    pub degree_bound: f64,
    pub degree_bound_stderr: f64,
}

pub fn z_identity(g: &Graph, lambda: f64, cfg: &SamplerConfig) -> Result<ZIdentity> {
    if !g.is_triangle_free() {
        return Err(Error::NotTriangleFree);
    }
    let n = g.n();
    let p = lambda / (1.0 + lambda);
    let d = g.max_degree() as f64;
    let weights: Vec<f64> = (0..=g.max_degree()).map(|j| (1.0 + lambda).powi(-(j as i32))).collect();
    let (mut occ, mut pred, mut diff, mut zs) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    sample_states(g, lambda, cfg, 0, |chain, _| {
        let (mut w, mut z) = (0.0, 0usize);
        for v in 0..n {
            let j = chain.uncovered_neighbors(v);
            w += weights[j];
            z += j;
        }
        let o = chain.size() as f64 / n as f64;
        let q = p * w / n as f64;
        occ.push(o);
        pred.push(q);
        diff.push(q - o);
        zs.push(p * z as f64 / n as f64 / d);
    })?;
    let (occupancy, occupancy_stderr) = batch_means(&occ);
    let (difference, difference_stderr) = batch_means(&diff);
    let (degree_bound, degree_bound_stderr) = batch_means(&zs);
    Ok(ZIdentity {
        occupancy,
        occupancy_stderr,
        predicted: batch_means(&pred).0,
        difference,
        difference_stderr,
        mean_z: degree_bound * d / p,
        degree_bound,
        degree_bound_stderr,
    })
}

/// Gaps between empirical conditional probabilities and their exact values
/// on triangle-free graphs.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FactChecks {
    /// `|Pr[v ∈ I | v uncovered] - λ/(1+λ)|`.
    pub fact1_gap: f64,
    /// `fact2_gaps[j] = |Pr[v uncovered | Z_v = j] - (1+λ)^(-j)|`, `None`
    /// where `j` was never observed.
    pub fact2_gaps: Vec<Option<f64>>,
    /// Observations behind each entry of `fact2_gaps`.
    pub fact2_counts: Vec<u64>,
}

/// Every vertex of every retained state counts as one observation.
pub fn fact_checks(g: &Graph, lambda: f64, seed: u64, samples: usize) -> Result<FactChecks> {
    if !g.is_triangle_free() {
        return Err(Error::NotTriangleFree);
    }
    let n = g.n();
    let dmax = g.max_degree();
    let (mut uncovered, mut occupied) = (0u64, 0u64);
    let mut by_z = vec![0u64; dmax + 1];
    let mut uncovered_by_z = vec![0u64; dmax + 1];
    let cfg = SamplerConfig::for_graph(g, seed, samples);
    sample_states(g, lambda, &cfg, 0, |chain, _| {
        for v in 0..n {
            let j = chain.uncovered_neighbors(v);
            by_z[j] += 1;
            if chain.is_uncovered(v) {
                uncovered += 1;
                uncovered_by_z[j] += 1;
                occupied += chain.is_occupied(v) as u64;
            }
        }
    })?;
    let fact1_gap = (occupied as f64 / uncovered as f64 - lambda / (1.0 + lambda)).abs();
    let fact2_gaps = (0..=dmax)
        .map(|j| {
            (by_z[j] > 0).then(|| {
                (uncovered_by_z[j] as f64 / by_z[j] as f64 - (1.0 + lambda).powi(-(j as i32))).abs()
            })
        })
        .collect();
    Ok(FactChecks {
        fact1_gap,
        fact2_gaps,
        fact2_counts: by_z,
    })
}

/// JSON record for one sampled graph.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleReport {
    pub graph6: String,
    pub lambda: f64,
    pub seed: u64,
    pub samples: usize,
    pub occupancy: f64,
    pub stderr: f64,
    pub z_histogram: Vec<u64>,
}

impl SampleReport {
    pub fn new(graph6: &str, lambda: f64, seed: u64, run: &SampleRun) -> Self {
        SampleReport {
            graph6: graph6.to_string(),
            lambda,
            seed,
            samples: run.occupancy.samples,
            occupancy: run.occupancy.estimate,
            stderr: run.occupancy.stderr,
            z_histogram: run.z_histogram.counts.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick(g: &Graph, lambda: f64, seed: u64, samples: usize) -> OccupancyEstimate {
        let cfg = SamplerConfig::for_graph(g, seed, samples);
        sample_run(g, lambda, &cfg).unwrap().occupancy
    }

    #[test]
    fn stays_independent() {
        let g = Graph::cycle(5);
        let mut chain = HardCoreChain::new(&g, 3.0, 7, 0).unwrap();
        for _ in 0..100_000 {
            chain.step();
            let set = chain.occupied_set();
            assert_eq!(set.len(), chain.size());
            assert!(set.iter().all(|&u| set.iter().all(|&v| !g.has_edge(u, v))));
        }
        assert_eq!(chain.steps(), 100_000);
    }

    #[test]
    fn single_vertex_and_edge() {
        let e = quick(&Graph::complete(1), 1.0, 1, 200_000);
        assert!((e.estimate - 0.5).abs() < 0.01);
        let e = quick(&Graph::complete(2), 1.0, 2, 200_000);
        assert!((e.estimate - 1.0 / 3.0).abs() < 4.0 * e.stderr + 1e-3, "{e:?}");
    }

    #[test]
    fn deterministic_per_seed() {
        let g = Graph::cycle(9);
        let a = sample_run(&g, 1.5, &SamplerConfig::for_graph(&g, 11, 2000)).unwrap();
        let b = sample_run(&g, 1.5, &SamplerConfig::for_graph(&g, 11, 2000)).unwrap();
        assert_eq!(a, b);
        let c = sample_run(&g, 1.5, &SamplerConfig::for_graph(&g, 12, 2000)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn histogram_shapes() {
        let h = z_histogram(&Graph::empty(4), 1.0, 3, 1000).unwrap();
        assert_eq!(h.counts, vec![1000]);
        let h = z_histogram(&Graph::complete(2), 1.0, 3, 100_000).unwrap();
        assert_eq!(h.counts.iter().sum::<u64>(), 100_000);
        assert!((h.expectation(|j| 0.5f64.powi(j as i32)) - 2.0 / 3.0).abs() < 0.01);
    }

    #[test]
    fn facts_need_triangle_free() {
        assert_eq!(fact_checks(&Graph::complete(3), 1.0, 1, 10), Err(Error::NotTriangleFree));
        let f = fact_checks(&Graph::complete(2), 1.0, 1, 100_000).unwrap();
        assert!(f.fact1_gap < 0.01);
        assert_eq!(f.fact2_gaps[0], Some(0.0));
        assert!(f.fact2_gaps[1].unwrap() < 0.01);
    }

    #[test]
    fn rejects_bad_parameters() {
        let g = Graph::cycle(4);
        assert!(HardCoreChain::new(&g, 0.0, 1, 0).is_err());
        assert!(HardCoreChain::new(&g, f64::INFINITY, 1, 0).is_err());
        assert!(HardCoreChain::new(&Graph::empty(0), 1.0, 1, 0).is_err());
        assert!(estimate_occupancy(&g, 1.0, 1, 10, 0, 1).is_err());
    }

    #[test]
    fn regime_threshold() {
        assert_eq!(uniqueness_threshold(2), None);
        assert!((uniqueness_threshold(3).unwrap() - 4.0).abs() < 1e-12);
        assert!(regime_warning(&Graph::cycle(5), 100.0).is_none());
        assert!(regime_warning(&Graph::complete_bipartite(3, 3), 5.0).is_some());
        assert!(regime_warning(&Graph::complete_bipartite(3, 3), 1.0).is_none());
    }

    #[test]
    fn batch_means_edge_cases() {
        assert_eq!(batch_means(&[0.5]), (0.5, f64::INFINITY));
        let (m, se) = batch_means(&[0.0, 1.0, 0.0, 1.0]);
        assert_eq!(m, 0.5);
        assert!(se > 0.0);
    }

    #[test]
    fn parallel_chains_are_ordered() {
        let g = Graph::cycle(6);
        let cfg = SamplerConfig::for_graph(&g, 5, 500);
        let a = estimate_occupancy_chains(&g, 1.0, &cfg, 4).unwrap();
        let b = estimate_occupancy_chains(&g, 1.0, &cfg, 4).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.chains[0], sample_run(&g, 1.0, &cfg).unwrap().occupancy);
    }
}
