//! Undirected simple graphs on contiguous vertex ids.
//!
//! A [`Graph`] is immutable once built. Membership tests go through a hash set
//! of normalized pairs; neighbor iteration uses sorted adjacency lists.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Normalize an unordered pair so the smaller id comes first.
#[inline]
pub fn ordered(u: usize, v: usize) -> (usize, usize) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

#[derive(Clone)]
pub struct Graph {
    n: usize,
    neighbors: Vec<Vec<usize>>,
    edges: HashSet<(usize, usize)>,
}

impl Graph {
    /// Build a graph on `n` vertices, deduplicating symmetric pairs.
    ///
    /// Rejects self-loops and endpoints `>= n`, naming the offending pair.
    pub fn new<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut set = HashSet::new();
        for (u, v) in edges {
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            if u >= n || v >= n {
                return Err(Error::EdgeOutOfRange { u, v, n });
            }
            set.insert(ordered(u, v));
        }
        Ok(Self::from_normalized(n, set))
    }

    /// Caller guarantees every pair is `(u, v)` with `u < v < n`.
    pub(crate) fn from_normalized(n: usize, edges: HashSet<(usize, usize)>) -> Self {
        let mut neighbors = vec![Vec::new(); n];
        for &(u, v) in &edges {
            neighbors[u].push(v);
            neighbors[v].push(u);
        }
        for list in &mut neighbors {
            list.sort_unstable();
        }
        Graph {
            n,
            neighbors,
            edges,
        }
    }

    pub fn empty(n: usize) -> Self {
        Self::from_normalized(n, HashSet::new())
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        Self::from_normalized(n, edges)
    }

    /// Build one of the named families. Star graphs use vertex 0 as the hub;
    /// `CompleteMinusEdge` drops the edge (0, 1).
    pub fn named(family: Family, n: usize) -> Result<Self> {
        let min = family.min_vertices();
        if n < min {
            return Err(Error::TooFewVertices {
                family: family.name(),
                min,
                n,
            });
        }
        let g = match family {
            Family::Path => Self::new(n, (0..n - 1).map(|u| (u, u + 1)))?,
            Family::Cycle => Self::new(n, (0..n).map(|u| (u, (u + 1) % n)))?,
            Family::Complete => Self::complete(n),
            Family::Star => Self::new(n, (1..n).map(|v| (0, v)))?,
            Family::CompleteMinusEdge => {
                let mut edges = Self::complete(n).edges;
                edges.remove(&(0, 1));
                Self::from_normalized(n, edges)
            }
        };
        Ok(g)
    }

    /// Sample from G(n, p). Pairs are visited in lexicographic order and each
    /// draws one Bernoulli from a ChaCha8 stream seeded with `seed`, so the
    /// result depends only on `(n, p, seed)`.
    pub fn sample_er(n: usize, p: f64, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidProbability(p));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut edges = HashSet::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(p) {
                    edges.insert((u, v));
                }
            }
        }
        Ok(Self::from_normalized(n, edges))
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && self.edges.contains(&ordered(u, v))
    }

    /// Sorted neighbor list of `v`.
    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.neighbors[v].len()
    }

    /// Edges as `(u, v)` with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<_> = self.edges.iter().copied().collect();
        out.sort_unstable();
        out
    }

    pub fn edge_set(&self) -> &HashSet<(usize, usize)> {
        &self.edges
    }

    /// Number of unordered vertex pairs, `n(n-1)/2`.
    pub fn pair_count(&self) -> usize {
        self.n * self.n.saturating_sub(1) / 2
    }

    /// Map vertex `v` to `perm[v]`. `perm` must be a permutation of `0..n`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::VertexCountMismatch(self.n, perm.len()));
        }
        Self::new(self.n, self.edges.iter().map(|&(u, v)| (perm[u], perm[v])))
    }

    /// Same edges on a larger vertex set (`n >= self.vertex_count()`).
    pub fn with_vertex_count(&self, n: usize) -> Result<Self> {
        Self::new(n, self.edges.iter().copied())
    }

    /// Check the simple-graph invariants. Constructors already enforce them;
    /// this is for tests and for data coming across the FFI boundary.
    pub fn validate(&self) -> Result<()> {
        for &(u, v) in &self.edges {
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            if u > v || v >= self.n {
                return Err(Error::EdgeOutOfRange { u, v, n: self.n });
            }
        }
        for (u, list) in self.neighbors.iter().enumerate() {
            for &v in list {
                if !self.edges.contains(&ordered(u, v)) || !self.neighbors[v].contains(&u) {
                    return Err(Error::EdgeOutOfRange { u, v, n: self.n });
                }
            }
        }
        let listed: usize = self.neighbors.iter().map(Vec::len).sum();
        if listed != 2 * self.edges.len() {
            return Err(Error::Io("adjacency lists disagree with edge set".into()));
        }
        Ok(())
    }
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.edges == other.edges
    }
}

impl Eq for Graph {}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges())
            .finish()
    }
}

/// Named graph families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Path,
    Cycle,
    Complete,
    Star,
    CompleteMinusEdge,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Path => "path",
            Family::Cycle => "cycle",
            Family::Complete => "complete",
            Family::Star => "star",
            Family::CompleteMinusEdge => "complete-minus-edge",
        }
    }

    fn min_vertices(self) -> usize {
        match self {
            Family::Cycle => 3,
            _ => 2,
        }
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "path" => Ok(Family::Path),
            "cycle" => Ok(Family::Cycle),
            "complete" => Ok(Family::Complete),
            "star" => Ok(Family::Star),
            "complete-minus-edge" | "complete_minus_edge" => Ok(Family::CompleteMinusEdge),
            other => Err(format!("unknown graph family `{other}`")),
        }
    }
}

/// Edges missed by an estimate and edges it added that are not in the truth.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EdgeDiff {
    pub missed: BTreeSet<(usize, usize)>,
    pub false_alarms: BTreeSet<(usize, usize)>,
}

impl EdgeDiff {
    pub fn is_empty(&self) -> bool {
        self.missed.is_empty() && self.false_alarms.is_empty()
    }
}

pub fn edge_diff(truth: &Graph, estimate: &Graph) -> Result<EdgeDiff> {
    if truth.n != estimate.n {
        return Err(Error::VertexCountMismatch(truth.n, estimate.n));
    }
    Ok(EdgeDiff {
        missed: truth.edges.difference(&estimate.edges).copied().collect(),
        false_alarms: estimate.edges.difference(&truth.edges).copied().collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(pairs: &[(usize, usize)]) -> BTreeSet<(usize, usize)> {
        pairs.iter().copied().collect()
    }

    #[test]
    fn symmetric_pairs_deduplicate() {
        let g = Graph::new(3, [(0, 1), (1, 0), (1, 2)]).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert!(g.has_edge(1, 0) && g.has_edge(0, 1));
        g.validate().unwrap();
    }

    #[test]
    fn empty_edge_list() {
        let g = Graph::new(2, []).unwrap();
        assert_eq!(g.edge_count(), 0);
        assert_eq!(g.vertex_count(), 2);
    }

    #[test]
    fn rejects_self_loop_and_range() {
        assert_eq!(Graph::new(3, [(1, 1)]), Err(Error::SelfLoop(1)));
        let err = Graph::new(3, [(0, 3)]).unwrap_err();
        assert_eq!(err, Error::EdgeOutOfRange { u: 0, v: 3, n: 3 });
        assert!(err.to_string().contains("(0, 3)"));
    }

    #[test]
    fn named_families() {
        let p4 = Graph::named(Family::Path, 4).unwrap();
        assert_eq!(p4.edges(), vec![(0, 1), (1, 2), (2, 3)]);
        assert_eq!(Graph::named(Family::Complete, 5).unwrap().edge_count(), 10);
        let star = Graph::named(Family::Star, 4).unwrap();
        assert_eq!(star.edges(), vec![(0, 1), (0, 2), (0, 3)]);
        let c4 = Graph::named(Family::Cycle, 4).unwrap();
        assert_eq!(c4.edges(), vec![(0, 1), (0, 3), (1, 2), (2, 3)]);
        let k5e = Graph::named(Family::CompleteMinusEdge, 5).unwrap();
        assert_eq!(k5e.edge_count(), 9);
        assert!(!k5e.has_edge(0, 1));
    }

    #[test]
    fn named_minimums() {
        assert!(matches!(
            Graph::named(Family::Path, 1),
            Err(Error::TooFewVertices { .. })
        ));
        assert!(Graph::named(Family::Cycle, 2).is_err());
        assert!(Graph::named(Family::Star, 2).is_ok());
    }

    #[test]
    fn er_extremes() {
        for seed in [0, 7, 99] {
            assert_eq!(Graph::sample_er(10, 0.0, seed).unwrap().edge_count(), 0);
            assert_eq!(
                Graph::sample_er(10, 1.0, seed).unwrap(),
                Graph::complete(10)
            );
        }
        assert_eq!(
            Graph::sample_er(4, 1.5, 0),
            Err(Error::InvalidProbability(1.5))
        );
        assert!(Graph::sample_er(4, -0.1, 0).is_err());
    }

    #[test]
    fn er_is_reproducible() {
        let a = Graph::sample_er(30, 0.3, 12345).unwrap();
        let b = Graph::sample_er(30, 0.3, 12345).unwrap();
        let c = Graph::sample_er(30, 0.3, 12346).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn er_mean_edge_count() {
        // Binomial(1225, 0.5): mean 612.5, sd sqrt(1225/4) = 17.5.
        let trials = 200;
        let total: usize = (0..trials)
            .map(|s| Graph::sample_er(50, 0.5, s).unwrap().edge_count())
            .sum();
        let mean = total as f64 / trials as f64;
        let std_err = 17.5 / (trials as f64).sqrt();
        assert!((mean - 612.5).abs() < 3.0 * std_err, "mean {mean}");
    }

    #[test]
    fn diff_examples() {
        let p4 = Graph::named(Family::Path, 4).unwrap();
        let d = edge_diff(&p4, &p4).unwrap();
        assert!(d.is_empty());

        let d = edge_diff(&p4, &Graph::empty(4)).unwrap();
        assert_eq!(d.missed, set(&[(0, 1), (1, 2), (2, 3)]));
        assert!(d.false_alarms.is_empty());

        let c4 = Graph::named(Family::Cycle, 4).unwrap();
        let d = edge_diff(&c4, &Graph::complete(4)).unwrap();
        assert!(d.missed.is_empty());
        assert_eq!(d.false_alarms, set(&[(0, 2), (1, 3)]));

        assert_eq!(
            edge_diff(&p4, &Graph::empty(5)),
            Err(Error::VertexCountMismatch(4, 5))
        );
    }

    #[test]
    fn relabel_maps_edges() {
        let p3 = Graph::named(Family::Path, 3).unwrap();
        let g = p3.relabel(&[2, 0, 1]).unwrap();
        assert_eq!(g.edges(), vec![(0, 1), (0, 2)]);
    }
}
