//! Corpus scans: smallest `α/ᾱ(λ)` ratios, circulant searches and batch
//! bound verification.
//!
//! Corpora are streamed in chunks.  Each chunk is processed on the rayon pool
//! and merged in input order, so output never depends on scheduling.

use std::collections::BTreeMap;
use std::io::BufRead;

use num_integer::Integer;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::bounds::{bound_report, BoundReport};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::graph6::{read_corpus, to_graph6, CorpusEntry};
use crate::indpoly::{evaluate_exact, independence_polynomial_with, rational_to_f64, ExactConfig, Fugacity};

const CHUNK: usize = 4096;

fn as_string<T: std::fmt::Display, S: Serializer>(x: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(x)
}

/// `α(G)/ᾱ_G(λ)` for one graph, with everything needed to recompute it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioRecord {
    pub graph6: String,
    pub n: usize,
    pub max_degree: usize,
    pub alpha: usize,
    /// `ᾱ_G(λ) = λP'(λ)/P(λ)`.
    #[serde(serialize_with = "as_string")]
    pub mean_size: BigRational,
    #[serde(serialize_with = "as_string")]
    pub ratio: BigRational,
    #[serde(serialize_with = "as_string")]
    pub lambda: BigRational,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl RatioRecord {
    pub fn compute(g: &Graph, lambda: &BigRational, cfg: &ExactConfig) -> Result<RatioRecord> {
        let p = independence_polynomial_with(g, cfg)?;
        if p.alpha() == 0 {
            return Err(Error::InvalidArgument("ratio is undefined for a graph without vertices".into()));
        }
        let mean_size = evaluate_exact(&p, lambda).mean_size;
        Ok(RatioRecord {
            graph6: to_graph6(g),
            n: g.n(),
            max_degree: g.max_degree(),
            alpha: p.alpha(),
            ratio: BigRational::from_integer(p.alpha().into()) / &mean_size,
            mean_size,
            lambda: lambda.clone(),
            label: None,
        })
    }

    pub fn ratio_f64(&self) -> f64 {
        rational_to_f64(&self.ratio)
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{:.12},{}",
            self.graph6,
            self.n,
            self.max_degree,
            self.alpha,
            self.mean_size,
            self.ratio,
            self.ratio_f64(),
            self.lambda
        )
    }
}

pub const RATIO_CSV_HEADER: &str = "graph6,n,max_degree,alpha,mean_size,ratio,ratio_f64,lambda";

/// Structural filters; all set filters must pass.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Filters {
    pub triangle_free: bool,
    /// Exclude graphs containing `K_r`.
    pub kr_free: Option<usize>,
    pub min_degree: Option<usize>,
    pub regular_only: bool,
}

impl Filters {
    pub fn accepts(&self, g: &Graph) -> bool {
        (!self.triangle_free || g.is_triangle_free())
            && self.kr_free.is_none_or(|r| g.is_kr_free(r))
            && self.min_degree.is_none_or(|d| g.min_degree() >= d)
            && (!self.regular_only || g.is_regular())
    }
}

#[derive(Clone, Debug)]
pub struct ScanConfig {
    pub lambda: BigRational,
    pub filters: Filters,
    pub top_k: usize,
    pub exact: ExactConfig,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            lambda: BigRational::from_integer(1.into()),
            filters: Filters::default(),
            top_k: 10,
            exact: ExactConfig::default(),
        }
    }
}

/// A corpus line that could not be used.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SkippedLine {
    pub line: usize,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanOutcome {
    /// Ascending by `(ratio, graph6)`.
    pub records: Vec<RatioRecord>,
    /// Corpus entries read, including malformed ones.
    pub read: usize,
    /// Entries that passed the filters and were evaluated.
    pub matched: usize,
    pub skipped: Vec<SkippedLine>,
}

/// Reads up to [`CHUNK`] entries, diverting malformed lines to `skipped`.
fn next_chunk<I>(entries: &mut I, read: &mut usize, skipped: &mut Vec<SkippedLine>) -> Vec<CorpusEntry>
where
    I: Iterator<Item = (usize, Result<CorpusEntry>)>,
{
    let mut chunk = Vec::with_capacity(CHUNK);
    for (line, entry) in entries.by_ref() {
        *read += 1;
        match entry {
            Ok(e) => chunk.push(e),
            Err(e) => skipped.push(SkippedLine {
                line,
                reason: e.to_string(),
            }),
        }
        if chunk.len() == CHUNK {
            break;
        }
    }
    chunk
}

/// Keeps the `k` smallest records by `(ratio, graph6)`; repeated graph6
/// codes collapse to one entry.
struct TopK {
    k: usize,
    best: BTreeMap<(BigRational, String), RatioRecord>,
}

impl TopK {
    fn push(&mut self, r: RatioRecord) {
        let key = (r.ratio.clone(), r.graph6.clone());
        if self.best.len() == self.k && self.best.last_key_value().is_some_and(|(last, _)| &key >= last) {
            return;
        }
        self.best.insert(key, r);
        if self.best.len() > self.k {
            self.best.pop_last();
        }
    }
}

pub fn scan_ratio<R: BufRead>(reader: R, cfg: &ScanConfig) -> Result<ScanOutcome> {
    if cfg.top_k == 0 {
        return Err(Error::InvalidArgument("top-k must be at least 1".into()));
    }
    let mut entries = read_corpus(reader);
    let (mut read, mut matched, mut skipped) = (0, 0, Vec::new());
    let mut top = TopK {
        k: cfg.top_k,
        best: BTreeMap::new(),
    };
    loop {
        let chunk = next_chunk(&mut entries, &mut read, &mut skipped);
        if chunk.is_empty() {
            break;
        }
        let results: Vec<Option<(usize, Result<RatioRecord>)>> = chunk
            .par_iter()
            .map(|e| {
                cfg.filters.accepts(&e.graph).then(|| {
                    let rec = RatioRecord::compute(&e.graph, &cfg.lambda, &cfg.exact).map(|mut r| {
                        r.graph6.clone_from(&e.graph6);
                        r.label.clone_from(&e.label);
                        r
                    });
                    (e.line, rec)
                })
            })
            .collect();
        for (line, rec) in results.into_iter().flatten() {
            matched += 1;
            match rec {
                Ok(r) => top.push(r),
                Err(e) => skipped.push(SkippedLine {
                    line,
                    reason: e.to_string(),
                }),
            }
        }
    }
    if top.best.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "no usable graphs after filters ({read} read, {} skipped)",
            skipped.len()
        )));
    }
    Ok(ScanOutcome {
        records: top.best.into_values().collect(),
        read,
        matched,
        skipped,
    })
}

#[derive(Clone, Debug)]
pub struct CirculantSearch {
    pub n: usize,
    /// Connection-set sizes, inclusive.
    pub min_size: usize,
    pub max_size: usize,
    pub triangle_free: bool,
    pub alpha_target: Option<usize>,
    pub lambda: BigRational,
    pub exact: ExactConfig,
}

impl CirculantSearch {
    pub fn new(n: usize) -> Self {
        CirculantSearch {
            n,
            min_size: 1,
            max_size: n / 2,
            triangle_free: false,
            alpha_target: None,
            lambda: BigRational::from_integer(1.into()),
            exact: ExactConfig::default(),
        }
    }
}

/// Smallest mask among the images of `mask` under `s ↦ ±a·s (mod n)` for
/// units `a`.  Bit `s` of a mask stands for connection `s`.
pub fn canonical_connections(n: usize, mask: u64) -> u64 {
    (1..n)
        .filter(|a| a.gcd(&n) == 1)
        .map(|a| {
            let mut image = 0u64;
            let mut m = mask;
            while m != 0 {
                let s = m.trailing_zeros() as usize;
                m &= m - 1;
                let r = a * s % n;
                image |= 1 << r.min(n - r);
            }
            image
        })
        .min()
        .unwrap_or(mask)
}

fn mask_to_set(mask: u64) -> Vec<usize> {
    (1..64).filter(|s| mask >> s & 1 == 1).collect()
}

/// Next larger integer with the same number of set bits.
fn next_combination(x: u64) -> Option<u64> {
    let c = x & x.wrapping_neg();
    let r = x.checked_add(c)?;
    Some((((r ^ x) >> 2) / c) | r)
}

/// Canonical connection sets of each size in the range, in increasing mask
/// order within each size.
pub fn circulant_classes(n: usize, min_size: usize, max_size: usize) -> Result<Vec<Vec<usize>>> {
    let half = n / 2;
    if n < 3 || half > 62 {
        return Err(Error::InvalidArgument(format!("circulant search needs 3 <= n <= 125, got {n}")));
    }
    let limit = 1u64 << half;
    let mut out = Vec::new();
    for k in min_size.max(1)..=max_size.min(half) {
        // subsets of {1..=half} are enumerated as subsets of bits 0..half and
        // shifted up, since connection s lives at bit s
        let mut sub = (1u64 << k) - 1;
        while sub < limit {
            let mask = sub << 1;
            if canonical_connections(n, mask) == mask {
                out.push(mask_to_set(mask));
            }
            match next_combination(sub) {
                Some(m) => sub = m,
                None => break,
            }
        }
    }
    Ok(out)
}

/// Every multiplier class of connection sets passing the filters, ascending
/// by `(ratio, graph6)`.  Labels record the connection set.
pub fn circulant_search(search: &CirculantSearch) -> Result<Vec<RatioRecord>> {
    let classes = circulant_classes(search.n, search.min_size, search.max_size)?;
    let mut records = classes
        .par_iter()
        .map(|set| {
            let g = Graph::circulant(search.n, set)?;
            if search.triangle_free && !g.is_triangle_free() {
                return Ok(None);
            }
            if search.alpha_target.is_some_and(|a| g.independence_number() != a) {
                return Ok(None);
            }
            let mut r = RatioRecord::compute(&g, &search.lambda, &search.exact)?;
            let parts: Vec<String> = set.iter().map(ToString::to_string).collect();
            r.label = Some(format!("C{}({})", search.n, parts.join(",")));
            Ok(Some(r))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect::<Vec<_>>();
    records.sort_by(|a, b| (&a.ratio, &a.graph6).cmp(&(&b.ratio, &b.graph6)));
    Ok(records)
}

/// Violation counts and minimum slack over a verification run.  Slacks are
/// `None` when the bound never applied.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct VerifySummary {
    pub graphs: usize,
    pub reports: usize,
    /// Reports with at least one violation.
    pub violations: usize,
    pub min_slack_thm13: Option<f64>,
    pub min_slack_thm14: Option<f64>,
    pub min_slack_kdd: Option<f64>,
    pub min_slack_kdd_log: Option<f64>,
    pub min_slack_clique_log: Option<f64>,
    /// Graphs whose occupancy matched the `K_{d,d}` value.
    pub kdd_equalities: Vec<String>,
    /// Graphs with an identically zero clique-union polynomial.
    pub clique_tight: Vec<String>,
    pub skipped: Vec<SkippedLine>,
}

fn fold_min(slot: &mut Option<f64>, x: Option<f64>) {
    if let Some(x) = x {
        *slot = Some(slot.map_or(x, |s| s.min(x)));
    }
}

impl VerifySummary {
    fn add(&mut self, r: &BoundReport) {
        self.reports += 1;
        self.violations += !r.violations.is_empty() as usize;
        fold_min(&mut self.min_slack_thm13, r.slack_thm13());
        fold_min(&mut self.min_slack_thm14, r.slack_thm14());
        fold_min(&mut self.min_slack_kdd, r.slack_kdd());
        fold_min(&mut self.min_slack_kdd_log, r.slack_kdd_log());
        fold_min(&mut self.min_slack_clique_log, Some(r.clique_log_per_n - r.log_p_per_n));
        if r.kdd_equality == Some(true) && self.kdd_equalities.last() != Some(&r.graph6) {
            self.kdd_equalities.push(r.graph6.clone());
        }
        if r.clique_tight && self.clique_tight.last() != Some(&r.graph6) {
            self.clique_tight.push(r.graph6.clone());
        }
    }
}

/// Evaluates every applicable bound for each corpus graph passing `filters`
/// at each `λ`.  Reports reach `sink` in corpus order, then `λ` order.
/// Graphs above the exact-mode cap are skipped with a note.
pub fn verify_bounds<R, F>(reader: R, lambdas: &[Fugacity], filters: &Filters, exact: &ExactConfig, mut sink: F) -> Result<VerifySummary>
where
    R: BufRead,
    F: FnMut(&BoundReport),
{
    if lambdas.is_empty() {
        return Err(Error::InvalidArgument("need at least one fugacity".into()));
    }
    let mut entries = read_corpus(reader);
    let mut read = 0;
    let mut summary = VerifySummary::default();
    loop {
        let chunk = next_chunk(&mut entries, &mut read, &mut summary.skipped);
        if chunk.is_empty() {
            break;
        }
        let results: Vec<Option<(usize, Result<Vec<BoundReport>>)>> = chunk
            .par_iter()
            .map(|e| {
                filters.accepts(&e.graph).then(|| {
                    let reports = independence_polynomial_with(&e.graph, exact).and_then(|p| {
                        let stats = e.graph.stats();
                        lambdas
                            .iter()
                            .map(|l| bound_report(&e.graph6, &e.graph, &stats, &p, l))
                            .collect()
                    });
                    (e.line, reports)
                })
            })
            .collect();
        for (line, reports) in results.into_iter().flatten() {
            match reports {
                Ok(reports) => {
                    summary.graphs += 1;
                    for r in &reports {
                        summary.add(r);
                        sink(r);
                    }
                }
                Err(e) => summary.skipped.push(SkippedLine {
                    line,
                    reason: e.to_string(),
                }),
            }
        }
    }
    Ok(summary)
}
