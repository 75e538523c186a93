//! Simple undirected graphs stored as word-packed adjacency bitsets.
//!
//! Row `v` of the adjacency matrix occupies `ceil(n/64)` consecutive `u64`
//! words.  Bits at positions `>= n` are always zero, the matrix is symmetric
//! and the diagonal is empty.  Graphs are immutable once built.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};

#[inline]
fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

/// Iterator over the set bits of a word slice, in increasing order.
pub struct Ones<'a> {
    words: &'a [u64],
    idx: usize,
    cur: u64,
}

impl<'a> Ones<'a> {
    pub fn new(words: &'a [u64]) -> Self {
        Ones {
            words,
            idx: 0,
            cur: words.first().copied().unwrap_or(0),
        }
    }
}

impl Iterator for Ones<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.cur != 0 {
                let b = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some(self.idx * 64 + b);
            }
            self.idx += 1;
            if self.idx >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.idx];
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    words: usize,
    adj: Vec<u64>,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

/// Summary statistics; `girth` is `None` for forests.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphStats {
    pub n: usize,
    pub edges: usize,
    pub max_degree: usize,
    pub min_degree: usize,
    pub is_regular: bool,
    pub triangle_free: bool,
    pub girth: Option<usize>,
}

impl Graph {
    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        let words = words_for(n);
        Graph {
            n,
            words,
            adj: vec![0; n * words],
        }
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::empty(n);
        for (u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    pub(crate) fn add_edge(&mut self, u: usize, v: usize) {
        debug_assert!(u != v && u < self.n && v < self.n);
        self.adj[u * self.words + v / 64] |= 1 << (v % 64);
        self.adj[v * self.words + u / 64] |= 1 << (u % 64);
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of `u64` words per adjacency row.
    #[inline]
    pub fn words(&self) -> usize {
        self.words
    }

    #[inline]
    pub fn row(&self, v: usize) -> &[u64] {
        &self.adj[v * self.words..(v + 1) * self.words]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    pub fn neighbors(&self, v: usize) -> Ones<'_> {
        Ones::new(self.row(v))
    }

    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.degrees().iter().sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, ordered by `u` then `v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.neighbors(u).filter(move |&v| v > u).map(move |v| (u, v)))
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    pub fn is_regular(&self) -> bool {
        self.max_degree() == self.min_degree()
    }

    /// Neighbor lists, used by the sampler and BFS.
    pub fn adjacency_lists(&self) -> Vec<Vec<u32>> {
        (0..self.n)
            .map(|v| self.neighbors(v).map(|u| u as u32).collect())
            .collect()
    }

    /// Rows as `u128` masks; `None` if the graph has more than 128 vertices.
    pub fn masks(&self) -> Option<Vec<u128>> {
        if self.n > 128 {
            return None;
        }
        Some(
            (0..self.n)
                .map(|v| {
                    let r = self.row(v);
                    let lo = r.first().copied().unwrap_or(0) as u128;
                    let hi = r.get(1).copied().unwrap_or(0) as u128;
                    lo | hi << 64
                })
                .collect(),
        )
    }

    pub fn is_triangle_free(&self) -> bool {
        for u in 0..self.n {
            let ru = self.row(u);
            for v in self.neighbors(u).filter(|&v| v > u) {
                let rv = self.row(v);
                if ru.iter().zip(rv).any(|(a, b)| a & b != 0) {
                    return false;
                }
            }
        }
        true
    }

    /// Length of a shortest cycle, found by a BFS from every vertex.
    pub fn girth(&self) -> Option<usize> {
        let lists = self.adjacency_lists();
        let mut best = usize::MAX;
        let mut dist = vec![usize::MAX; self.n];
        let mut parent = vec![usize::MAX; self.n];
        let mut queue = VecDeque::new();
        for root in 0..self.n {
            dist.fill(usize::MAX);
            dist[root] = 0;
            parent[root] = usize::MAX;
            queue.clear();
            queue.push_back(root);
            while let Some(u) = queue.pop_front() {
                if 2 * dist[u] + 1 >= best {
                    break;
                }
                for &w in &lists[u] {
                    let w = w as usize;
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        parent[w] = u;
                        queue.push_back(w);
                    } else if parent[u] != w {
                        best = best.min(dist[u] + dist[w] + 1);
                    }
                }
            }
        }
        (best != usize::MAX).then_some(best)
    }

    pub fn stats(&self) -> GraphStats {
        let degrees = self.degrees();
        let max_degree = degrees.iter().copied().max().unwrap_or(0);
        let min_degree = degrees.iter().copied().min().unwrap_or(0);
        GraphStats {
            n: self.n,
            edges: degrees.iter().sum::<usize>() / 2,
            max_degree,
            min_degree,
            is_regular: max_degree == min_degree,
            triangle_free: self.is_triangle_free(),
            girth: self.girth(),
        }
    }

    /// True iff the graph has no clique on `r` vertices.
    pub fn is_kr_free(&self, r: usize) -> bool {
        assert!(r >= 2, "clique order must be at least 2");
        let all: Vec<u64> = full_set(self.n, self.words);
        !self.has_clique_in(&all, r)
    }

    fn has_clique_in(&self, cand: &[u64], need: usize) -> bool {
        if need == 0 {
            return true;
        }
        let count: usize = cand.iter().map(|w| w.count_ones() as usize).sum();
        if count < need {
            return false;
        }
        let mut rest = cand.to_vec();
        let mut next = vec![0u64; self.words];
        for v in Ones::new(cand) {
            rest[v / 64] &= !(1 << (v % 64));
            for ((x, a), b) in next.iter_mut().zip(&rest).zip(self.row(v)) {
                *x = a & b;
            }
            if self.has_clique_in(&next, need - 1) {
                return true;
            }
            if rest.iter().map(|w| w.count_ones() as usize).sum::<usize>() < need {
                return false;
            }
        }
        false
    }

    /// Independence number by branch and bound over `u128` masks.
    ///
    /// Panics if the graph has more than 128 vertices.
    pub fn independence_number(&self) -> usize {
        let masks = self.masks().expect("independence_number supports at most 128 vertices");
        let all = if self.n == 128 { u128::MAX } else { (1u128 << self.n) - 1 };
        let mut best = 0;
        mis_branch(&masks, all, 0, &mut best);
        best
    }

    /// Subgraph induced on `keep`, relabelled `0..keep.len()` in the given order.
    pub fn induced_subgraph(&self, keep: &[usize]) -> Graph {
        let mut g = Graph::empty(keep.len());
        for (i, &u) in keep.iter().enumerate() {
            for (j, &v) in keep.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    /// Repeatedly deletes the lowest-index vertex of degree at most
    /// `threshold` together with its neighbours, until every remaining
    /// vertex has degree above `threshold`.  Returns the residual graph.
    pub fn min_degree_reduce(&self, threshold: usize) -> Graph {
        let mut alive = full_set(self.n, self.words);
        'outer: loop {
            for v in Ones::new(&alive.clone()) {
                let deg: usize = self
                    .row(v)
                    .iter()
                    .zip(&alive)
                    .map(|(a, b)| (a & b).count_ones() as usize)
                    .sum();
                if deg <= threshold {
                    alive[v / 64] &= !(1 << (v % 64));
                    for (a, r) in alive.iter_mut().zip(self.row(v)) {
                        *a &= !r;
                    }
                    continue 'outer;
                }
            }
            break;
        }
        let keep: Vec<usize> = Ones::new(&alive).collect();
        self.induced_subgraph(&keep)
    }

    pub fn complete(n: usize) -> Graph {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn path(n: usize) -> Graph {
        let mut g = Graph::empty(n);
        for v in 1..n {
            g.add_edge(v - 1, v);
        }
        g
    }

    /// The cycle `C_n`; for `n < 3` this is the path on `n` vertices.
    pub fn cycle(n: usize) -> Graph {
        let mut g = Graph::path(n);
        if n >= 3 {
            g.add_edge(n - 1, 0);
        }
        g
    }

    /// `K_{a,b}` with parts `0..a` and `a..a+b`.
    pub fn complete_bipartite(a: usize, b: usize) -> Graph {
        let mut g = Graph::empty(a + b);
        for u in 0..a {
            for v in a..a + b {
                g.add_edge(u, v);
            }
        }
        g
    }

    /// Disjoint union; the vertices of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let mut g = Graph::empty(self.n + other.n);
        for (u, v) in self.edges() {
            g.add_edge(u, v);
        }
        for (u, v) in other.edges() {
            g.add_edge(u + self.n, v + self.n);
        }
        g
    }

    /// Circulant graph on `Z_n`: `i ~ i ± s (mod n)` for each `s` in `connections`.
    pub fn circulant(n: usize, connections: &[usize]) -> Result<Graph> {
        let max = n / 2;
        let mut seen = vec![false; max + 1];
        for &s in connections {
            if s == 0 || s > max {
                return Err(Error::ConnectionOutOfRange { value: s, max });
            }
            if seen[s] {
                return Err(Error::DuplicateConnection(s));
            }
            seen[s] = true;
        }
        let mut g = Graph::empty(n);
        for i in 0..n {
            for &s in connections {
                g.add_edge(i, (i + s) % n);
            }
        }
        Ok(g)
    }

    /// Connected components as sorted vertex lists, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                let u = comp[i];
                i += 1;
                for w in self.neighbors(u) {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }
}

fn full_set(n: usize, words: usize) -> Vec<u64> {
    let mut v = vec![u64::MAX; words];
    if !n.is_multiple_of(64) {
        v[words - 1] = (1u64 << (n % 64)) - 1;
    }
    v
}

fn mis_branch(adj: &[u128], mut cand: u128, size: usize, best: &mut usize) {
    loop {
        if size + cand.count_ones() as usize <= *best {
            return;
        }
        if cand == 0 {
            *best = size;
            return;
        }
        // Vertices of degree <= 1 in the candidate set belong to some
        // maximum independent set; take them greedily.
        let mut pivot = usize::MAX;
        let mut pivot_deg = 0;
        let mut forced = usize::MAX;
        let mut rest = cand;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let deg = (adj[v] & cand).count_ones();
            if deg <= 1 {
                forced = v;
                break;
            }
            if deg > pivot_deg {
                pivot_deg = deg;
                pivot = v;
            }
        }
        if forced != usize::MAX {
            cand &= !(adj[forced] | 1 << forced);
            return mis_branch(adj, cand, size + 1, best);
        }
        let bit = 1u128 << pivot;
        mis_branch(adj, cand & !(adj[pivot] | bit), size + 1, best);
        cand &= !bit;
    }
}
