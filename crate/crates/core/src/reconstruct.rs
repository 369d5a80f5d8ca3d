//! Two-stage reconstruction from traces.
//!
//! Stage one counts, for every vertex pair, how many traces contain both.
//! Stage two orders each trace into the path with the largest summed pair
//! count and inserts that path's edges; on ties every winning path is used.

use std::collections::HashSet;

use rayon::prelude::*;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::graph::{ordered, Graph};
use crate::traces::{Trace, TraceSet};

/// Default cap on trace size for the exhaustive ordering search (10!/2 orderings).
pub const DEFAULT_MAX_TRACE_SIZE: usize = 10;

/// Symmetric pair co-occurrence counts with a zero diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoMatrix {
    n: usize,
    counts: Vec<u32>,
}

impl CoMatrix {
    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, u: usize, v: usize) -> u32 {
        self.counts[u * self.n + v]
    }

    /// Sum over unordered pairs.
    pub fn pair_total(&self) -> u64 {
        (0..self.n)
            .flat_map(|u| (u + 1..self.n).map(move |v| (u, v)))
            .map(|(u, v)| u64::from(self.get(u, v)))
            .sum()
    }
}

/// Count, for every pair, the traces containing both vertices.
pub fn cooccurrence_matrix(ts: &TraceSet, n: usize) -> Result<CoMatrix> {
    let mut counts = vec![0u32; n * n];
    for t in ts.traces() {
        let v = t.vertices();
        if let Some(&bad) = v.iter().find(|&&x| x >= n) {
            return Err(Error::VertexOutOfRange { vertex: bad, n });
        }
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                counts[v[i] * n + v[j]] += 1;
                counts[v[j] * n + v[i]] += 1;
            }
        }
    }
    Ok(CoMatrix { n, counts })
}

#[inline]
fn weight_unchecked(m: &CoMatrix, seq: &[usize]) -> u64 {
    seq.windows(2).map(|w| u64::from(m.get(w[0], w[1]))).sum()
}

/// Sum of pair counts along consecutive vertices of `seq`.
pub fn path_weight(m: &CoMatrix, seq: &[usize]) -> Result<u64> {
    if seq.len() < 2 {
        return Err(Error::TraceLength(seq.len()));
    }
    let mut seen = HashSet::with_capacity(seq.len());
    for &v in seq {
        if v >= m.n {
            return Err(Error::VertexOutOfRange { vertex: v, n: m.n });
        }
        if !seen.insert(v) {
            return Err(Error::DuplicateVertex(v));
        }
    }
    Ok(weight_unchecked(m, seq))
}

/// Rearrange `seq` into the next lexicographic permutation. Returns false
/// (leaving `seq` sorted ascending) after the last one.
fn next_permutation(seq: &mut [usize]) -> bool {
    let len = seq.len();
    if len < 2 {
        return false;
    }
    let mut i = len - 1;
    while i > 0 && seq[i - 1] >= seq[i] {
        i -= 1;
    }
    if i == 0 {
        seq.reverse();
        return false;
    }
    let mut j = len - 1;
    while seq[j] <= seq[i - 1] {
        j -= 1;
    }
    seq.swap(i - 1, j);
    seq[i..].reverse();
    true
}

/// Call `visit` once per ordering of `vertices` up to reversal (the kept
/// orientation has first < last). `vertices` must be sorted.
pub(crate) fn for_each_ordering<F: FnMut(&[usize])>(vertices: &[usize], mut visit: F) {
    let mut seq: SmallVec<[usize; 8]> = SmallVec::from_slice(vertices);
    loop {
        if seq[0] < seq[seq.len() - 1] {
            visit(&seq);
        }
        if !next_permutation(&mut seq) {
            break;
        }
    }
}

/// The maximum ordering weight of a trace and every ordering achieving it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BestOrderings {
    pub weight: u64,
    /// One orientation per winning path (first vertex < last vertex), in
    /// lexicographic order.
    pub orderings: Vec<Vec<usize>>,
}

/// Exhaustive search over the `|t|!/2` orderings of a trace.
pub fn best_orderings(m: &CoMatrix, t: &Trace) -> Result<BestOrderings> {
    if let Some(&bad) = t.vertices().iter().find(|&&v| v >= m.n) {
        return Err(Error::VertexOutOfRange {
            vertex: bad,
            n: m.n,
        });
    }
    let mut weight = 0u64;
    let mut orderings: Vec<Vec<usize>> = Vec::new();
    for_each_ordering(t.vertices(), |seq| {
        let w = weight_unchecked(m, seq);
        if orderings.is_empty() || w > weight {
            weight = w;
            orderings.clear();
            orderings.push(seq.to_vec());
        } else if w == weight {
            orderings.push(seq.to_vec());
        }
    });
    Ok(BestOrderings { weight, orderings })
}

/// What one trace contributed to the reconstruction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceRecord {
    pub trace: Trace,
    pub max_weight: u64,
    /// Number of maximum-weight orderings (counted up to reversal).
    pub ties: usize,
    /// Union of edges over the winning orderings, sorted.
    pub edges: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReconstructionReport {
    pub records: Vec<TraceRecord>,
    /// Traces whose maximum weight was reached by more than one ordering.
    pub tied_traces: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reconstruction {
    pub graph: Graph,
    pub matrix: CoMatrix,
    pub report: ReconstructionReport,
}

/// Runs both stages. The trace-size cap bounds the factorial ordering search.
#[derive(Debug, Clone, Copy)]
pub struct Reconstructor {
    pub max_trace_size: usize,
}

impl Default for Reconstructor {
    fn default() -> Self {
        Reconstructor {
            max_trace_size: DEFAULT_MAX_TRACE_SIZE,
        }
    }
}

impl Reconstructor {
    pub fn with_max_trace_size(max_trace_size: usize) -> Self {
        Reconstructor { max_trace_size }
    }

    pub fn run(&self, ts: &TraceSet, n: usize) -> Result<Reconstruction> {
        let matrix = cooccurrence_matrix(ts, n)?;
        self.check_caps(ts)?;
        let records: Vec<TraceRecord> = ts
            .traces()
            .par_iter()
            .map(|t| record_for(&matrix, t))
            .collect();
        let mut edges = HashSet::new();
        for r in &records {
            edges.extend(r.edges.iter().copied());
        }
        let tied_traces = records.iter().filter(|r| r.ties > 1).count();
        Ok(Reconstruction {
            graph: Graph::from_normalized(n, edges),
            matrix,
            report: ReconstructionReport {
                records,
                tied_traces,
            },
        })
    }

    /// Same as [`Reconstructor::run`] but only returns the graph.
    pub fn run_graph(&self, ts: &TraceSet, n: usize) -> Result<Graph> {
        let matrix = cooccurrence_matrix(ts, n)?;
        self.check_caps(ts)?;
        let mut edges = HashSet::new();
        let mut winners: Vec<SmallVec<[usize; 8]>> = Vec::new();
        for t in ts.traces() {
            let mut best = 0u64;
            winners.clear();
            for_each_ordering(t.vertices(), |seq| {
                let w = weight_unchecked(&matrix, seq);
                if winners.is_empty() || w > best {
                    best = w;
                    winners.clear();
                    winners.push(SmallVec::from_slice(seq));
                } else if w == best {
                    winners.push(SmallVec::from_slice(seq));
                }
            });
            for seq in &winners {
                edges.extend(seq.windows(2).map(|w| ordered(w[0], w[1])));
            }
        }
        Ok(Graph::from_normalized(n, edges))
    }

    fn check_caps(&self, ts: &TraceSet) -> Result<()> {
        match ts.traces().iter().find(|t| t.len() > self.max_trace_size) {
            Some(t) => Err(Error::TraceCapExceeded {
                size: t.len(),
                cap: self.max_trace_size,
            }),
            None => Ok(()),
        }
    }
}

fn record_for(m: &CoMatrix, t: &Trace) -> TraceRecord {
    let mut best = 0u64;
    let mut ties = 0usize;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for_each_ordering(t.vertices(), |seq| {
        let w = weight_unchecked(m, seq);
        if ties == 0 || w > best {
            best = w;
            ties = 1;
            edges.clear();
        } else if w == best {
            ties += 1;
        } else {
            return;
        }
        edges.extend(seq.windows(2).map(|p| ordered(p[0], p[1])));
    });
    edges.sort_unstable();
    edges.dedup();
    TraceRecord {
        trace: t.clone(),
        max_weight: best,
        ties,
        edges,
    }
}

/// Reconstruct with the default trace-size cap.
pub fn reconstruct(ts: &TraceSet, n: usize) -> Result<Reconstruction> {
    Reconstructor::default().run(ts, n)
}

/// True when every trace is the vertex set of some path in `g`.
pub fn is_feasible(ts: &TraceSet, g: &Graph) -> bool {
    ts.traces().iter().all(|t| {
        let mut found = false;
        for_each_ordering(t.vertices(), |seq| {
            found = found || seq.windows(2).all(|w| g.has_edge(w[0], w[1]));
        });
        found
    })
}

/// Pairs that the pairwise co-occurrence condition says belong in the
/// reconstruction of a size-3 trace set: some trace `{a, b, u}` has
/// `M(a,b) >= M(a,u)` or `M(a,b) >= M(b,u)`.
pub fn lemma2_pairs(ts: &TraceSet, m: &CoMatrix) -> Result<HashSet<(usize, usize)>> {
    if ts.trace_size() != 3 && !ts.is_empty() {
        return Err(Error::TraceSize {
            expected: 3,
            found: ts.trace_size(),
        });
    }
    let mut pairs = HashSet::new();
    for t in ts.traces() {
        let v = t.vertices();
        for i in 0..3 {
            let (a, b, u) = (v[i], v[(i + 1) % 3], v[(i + 2) % 3]);
            let ab = m.get(a, b);
            if ab >= m.get(a, u) || ab >= m.get(b, u) {
                pairs.insert(ordered(a, b));
            }
        }
    }
    Ok(pairs)
}

/// Pairs where `ghat` disagrees with [`lemma2_pairs`], sorted.
pub fn check_lemma2(ts: &TraceSet, m: &CoMatrix, ghat: &Graph) -> Result<Vec<(usize, usize)>> {
    let predicted = lemma2_pairs(ts, m)?;
    let mut bad: Vec<_> = predicted
        .symmetric_difference(ghat.edge_set())
        .copied()
        .collect();
    bad.sort_unstable();
    Ok(bad)
}

/// Edges of `g` with a private neighbor on one endpoint that are absent from
/// `ghat`. Always empty when `ghat` was reconstructed from all 3-traces of `g`.
pub fn check_lemma3(g: &Graph, ghat: &Graph) -> Vec<(usize, usize)> {
    g.edges()
        .into_iter()
        .filter(|&(a, b)| {
            let private = (0..g.vertex_count())
                .filter(|&u| u != a && u != b)
                .any(|u| g.has_edge(a, u) != g.has_edge(b, u));
            private && !ghat.has_edge(a, b)
        })
        .collect()
}
