//! Dense bitset graphs, seeds and the two random graph models.
//!
//! A [`Graph`] is an undirected simple graph on vertices `0..n` stored as `n`
//! adjacency rows of `ceil(n/64)` words each. Graphs are immutable once
//! built; every generator is a pure function of its arguments.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bits;
use crate::error::{domain, Error, Result};

/// `C(n, 2)`.
#[inline]
pub fn choose2(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        let words = bits::words_for(n);
        Graph {
            n,
            words,
            rows: vec![0; n * words],
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in (u + 1)..n {
                g.set_edge(u, v);
            }
        }
        g
    }

    /// Path `0-1-..-(n-1)`.
    pub fn path(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for u in 1..n {
            g.set_edge(u - 1, u);
        }
        g
    }

    /// Cycle `0-1-..-(n-1)-0`, `n >= 3`.
    pub fn cycle(n: usize) -> Self {
        let mut g = Graph::path(n);
        if n >= 3 {
            g.set_edge(0, n - 1);
        }
        g
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            if u >= n || v >= n {
                return domain(format!("edge ({u},{v}) out of range for n = {n}"));
            }
            if u == v {
                return domain(format!("self-loop at vertex {u}"));
            }
            g.set_edge(u, v);
        }
        Ok(g)
    }

    /// Builds a graph from a symmetric predicate evaluated on pairs `u < v`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in (u + 1)..n {
                if f(u, v) {
                    g.set_edge(u, v);
                }
            }
        }
        g
    }

    pub(crate) fn set_edge(&mut self, u: usize, v: usize) {
        debug_assert!(u != v);
        let w = self.words;
        bits::set(&mut self.rows[u * w..(u + 1) * w], v);
        bits::set(&mut self.rows[v * w..(v + 1) * w], u);
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Words per adjacency row.
    #[inline]
    pub fn words(&self) -> usize {
        self.words
    }

    #[inline]
    pub fn row(&self, u: usize) -> &[u64] {
        &self.rows[u * self.words..(u + 1) * self.words]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        bits::test(self.row(u), v)
    }

    pub fn degree(&self, u: usize) -> usize {
        bits::count(self.row(u))
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        bits::ones(self.row(u))
    }

    pub fn edge_count(&self) -> usize {
        bits::count(&self.rows) / 2
    }

    /// Edges `(u, v)` with `u < v` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.neighbors(u).filter(move |&v| v > u).map(move |v| (u, v)))
    }

    pub fn complement(&self) -> Graph {
        Graph::from_fn(self.n, |u, v| !self.has_edge(u, v))
    }

    /// Vertices of `self` come first, then those of `other` shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let n = self.n + other.n;
        let mut g = Graph::empty(n);
        for (u, v) in self.edges() {
            g.set_edge(u, v);
        }
        for (u, v) in other.edges() {
            g.set_edge(u + self.n, v + self.n);
        }
        g
    }

    /// Relabels vertex `v` of `self` to `perm[v]`.
    pub fn permute(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n);
        let mut g = Graph::empty(self.n);
        for (u, v) in self.edges() {
            g.set_edge(perm[u], perm[v]);
        }
        g
    }

    /// Checks symmetry and loop-freedom at the bit level.
    pub fn is_well_formed(&self) -> bool {
        for u in 0..self.n {
            if self.has_edge(u, u) {
                return false;
            }
            let row = self.row(u);
            // no stray bits past n
            if self.n % 64 != 0 && row[self.words - 1] >> (self.n % 64) != 0 {
                return false;
            }
            for v in bits::ones(row) {
                if !self.has_edge(v, u) {
                    return false;
                }
            }
        }
        true
    }

    /// Canonical edge-list text: `n m` then one `u v` line per edge.
    pub fn to_edge_list(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.n, self.edge_count())?;
        for (u, v) in self.edges() {
            writeln!(f, "{u} {v}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges().collect::<Vec<_>>())
    }
}

impl FromStr for Graph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let parse_pair = |line: usize, l: &str| -> Result<(usize, usize)> {
            let mut it = l.split_whitespace().map(|t| t.parse::<usize>());
            match (it.next(), it.next(), it.next()) {
                (Some(Ok(a)), Some(Ok(b)), None) => Ok((a, b)),
                _ => Err(Error::Parse {
                    line,
                    msg: format!("expected two non-negative integers, got {l:?}"),
                }),
            }
        };
        let (line, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing `n m` header".into(),
        })?;
        let (n, m) = parse_pair(line, header)?;
        let mut g = Graph::empty(n);
        let mut seen = 0usize;
        for (line, l) in lines {
            let (u, v) = parse_pair(line, l)?;
            if u >= v || v >= n {
                return Err(Error::Parse {
                    line,
                    msg: format!("edge ({u},{v}) must satisfy u < v < n"),
                });
            }
            if g.has_edge(u, v) {
                return Err(Error::Parse {
                    line,
                    msg: format!("duplicate edge ({u},{v})"),
                });
            }
            g.set_edge(u, v);
            seen += 1;
        }
        if seen != m {
            return Err(Error::Parse {
                line: 1,
                msg: format!("header declares {m} edges, found {seen}"),
            });
        }
        Ok(g)
    }
}

/// Number of unordered adjacent pairs.
pub fn edge_count(g: &Graph) -> usize {
    g.edge_count()
}

/// Seed of a reproducible random stream.
///
/// The generator is ChaCha8 keyed by `master`; `stream` selects one of the
/// 2^64 independent ChaCha streams under that key. Substreams are derived by
/// hashing, so a whole tree of streams hangs off one master seed without any
/// shared state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Seed {
    pub master: u64,
    pub stream: u64,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl Seed {
    pub fn new(master: u64) -> Self {
        Seed { master, stream: 0 }
    }

    /// Child stream `index`; children of distinct indices never collide in practice.
    pub fn substream(&self, index: u64) -> Seed {
        Seed {
            master: self.master,
            stream: splitmix64(self.stream ^ splitmix64(index.rotate_left(17) ^ 0x5851_f42d_4c95_7f2d)),
        }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master);
        rng.set_stream(self.stream);
        rng
    }
}

/// Pair of edge probabilities, both strictly inside `(0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbPair {
    p1: f64,
    p2: f64,
}

impl ProbPair {
    pub fn new(p1: f64, p2: f64) -> Result<Self> {
        for (name, p) in [("p1", p1), ("p2", p2)] {
            if !(p > 0.0 && p < 1.0) {
                return domain(format!("{name} = {p} must lie strictly between 0 and 1"));
            }
        }
        Ok(ProbPair { p1, p2 })
    }

    #[inline]
    pub fn p1(&self) -> f64 {
        self.p1
    }

    #[inline]
    pub fn p2(&self) -> f64 {
        self.p2
    }

    pub fn swapped(&self) -> ProbPair {
        ProbPair { p1: self.p2, p2: self.p1 }
    }
}

/// Binomial random graph G(n, p): one uniform draw per pair, pairs in
/// lexicographic order.
pub fn gen_gnp(n: usize, p: f64, seed: Seed) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return domain(format!("edge probability {p} outside [0, 1]"));
    }
    let mut rng = seed.rng();
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen::<f64>() < p {
                g.set_edge(u, v);
            }
        }
    }
    Ok(g)
}

/// Uniform random graph G(n, m) via a partial Fisher-Yates shuffle of the
/// lexicographic pair array.
pub fn gen_gnm(n: usize, m: usize, seed: Seed) -> Result<Graph> {
    let total = choose2(n);
    if m > total {
        return domain(format!("m = {m} exceeds C({n},2) = {total}"));
    }
    let mut pairs: Vec<(u32, u32)> = Vec::with_capacity(total);
    for u in 0..n as u32 {
        for v in (u + 1)..n as u32 {
            pairs.push((u, v));
        }
    }
    let mut rng = seed.rng();
    for i in 0..m {
        let j = rng.gen_range(i..total);
        pairs.swap(i, j);
    }
    let mut g = Graph::empty(n);
    for &(u, v) in &pairs[..m] {
        g.set_edge(u as usize, v as usize);
    }
    Ok(g)
}

/// Subgraph induced on a strictly increasing vertex list; vertex `i` of the
/// result is `vertices[i]`.
pub fn induced_subgraph(g: &Graph, vertices: &[usize]) -> Result<Graph> {
    for w in vertices.windows(2) {
        if w[0] >= w[1] {
            return domain("vertex list must be strictly increasing");
        }
    }
    if let Some(&last) = vertices.last() {
        if last >= g.n() {
            return domain(format!("vertex {last} out of range for n = {}", g.n()));
        }
    }
    Ok(Graph::from_fn(vertices.len(), |i, j| g.has_edge(vertices[i], vertices[j])))
}
