//! Elementary paths and their unordered traces.

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// The unordered vertex set of an elementary path, stored sorted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Trace(SmallVec<[usize; 4]>);

impl Trace {
    /// Sorts the vertices; rejects repeats and sets with fewer than two vertices.
    pub fn new<I: IntoIterator<Item = usize>>(vertices: I) -> Result<Self> {
        let mut v: SmallVec<[usize; 4]> = vertices.into_iter().collect();
        v.sort_unstable();
        if let Some(w) = v.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateVertex(w[0]));
        }
        if v.len() < 2 {
            return Err(Error::TraceLength(v.len()));
        }
        Ok(Trace(v))
    }

    /// Caller guarantees `sorted` is strictly increasing with length >= 2.
    fn from_sorted(sorted: SmallVec<[usize; 4]>) -> Self {
        debug_assert!(sorted.len() >= 2 && sorted.windows(2).all(|w| w[0] < w[1]));
        Trace(sorted)
    }

    #[inline]
    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }
}

/// A deduplicated, lexicographically sorted collection of traces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceSet {
    n: usize,
    /// Common trace size, or 0 when sizes are mixed (or the set came from an
    /// empty file).
    k: usize,
    traces: Vec<Trace>,
}

impl TraceSet {
    /// Validate against the ambient vertex count, sort and deduplicate.
    pub fn new(n: usize, mut traces: Vec<Trace>) -> Result<Self> {
        for t in &traces {
            if let Some(&v) = t.vertices().iter().find(|&&v| v >= n) {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
        }
        traces.sort_unstable();
        traces.dedup();
        let k = match traces.first() {
            Some(first) if traces.iter().all(|t| t.len() == first.len()) => first.len(),
            _ => 0,
        };
        Ok(TraceSet { n, k, traces })
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    /// Common trace size; 0 for mixed sizes.
    #[inline]
    pub fn trace_size(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn traces(&self) -> &[Trace] {
        &self.traces
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.traces.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.traces.is_empty()
    }

    pub fn contains(&self, t: &Trace) -> bool {
        self.traces.binary_search(t).is_ok()
    }

    /// Same traces viewed on a larger vertex set.
    pub fn with_vertex_count(mut self, n: usize) -> Result<Self> {
        if let Some(&v) = self
            .traces
            .iter()
            .flat_map(|t| t.vertices())
            .find(|&&v| v >= n)
        {
            return Err(Error::VertexOutOfRange { vertex: v, n });
        }
        self.n = n;
        Ok(self)
    }
}

/// Visit every elementary path with `k` vertices once, in the orientation
/// whose first vertex is smaller than its last.
pub fn for_each_path<F>(g: &Graph, k: usize, mut visit: F) -> Result<()>
where
    F: FnMut(&[usize]),
{
    if k < 2 {
        return Err(Error::TraceLength(k));
    }
    let n = g.vertex_count();
    let mut on_path = vec![false; n];
    let mut path = Vec::with_capacity(k);
    for start in 0..n {
        path.push(start);
        on_path[start] = true;
        extend(g, k, &mut path, &mut on_path, &mut visit);
        on_path[start] = false;
        path.pop();
    }
    Ok(())
}

fn extend<F: FnMut(&[usize])>(
    g: &Graph,
    k: usize,
    path: &mut Vec<usize>,
    on_path: &mut [bool],
    visit: &mut F,
) {
    let last = *path.last().expect("path is never empty here");
    if path.len() == k {
        if path[0] < last {
            visit(path);
        }
        return;
    }
    for &next in g.neighbors(last) {
        // The final vertex must exceed the start, so prune early.
        if on_path[next] || (path.len() + 1 == k && next < path[0]) {
            continue;
        }
        on_path[next] = true;
        path.push(next);
        extend(g, k, path, on_path, visit);
        path.pop();
        on_path[next] = false;
    }
}

/// All elementary paths with `k` vertices, one orientation each.
pub fn enumerate_paths(g: &Graph, k: usize) -> Result<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    for_each_path(g, k, |p| out.push(p.to_vec()))?;
    Ok(out)
}

/// The set of traces of all elementary paths with `k` vertices.
pub fn trace_set(g: &Graph, k: usize) -> Result<TraceSet> {
    let mut traces = Vec::new();
    for_each_path(g, k, |p| {
        let mut v: SmallVec<[usize; 4]> = SmallVec::from_slice(p);
        v.sort_unstable();
        traces.push(Trace::from_sorted(v));
    })?;
    traces.sort_unstable();
    traces.dedup();
    Ok(TraceSet {
        n: g.vertex_count(),
        k,
        traces,
    })
}

/// Outcome of checking that every 3-trace has at most one non-adjacent pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lemma1Check {
    pub violations: Vec<Trace>,
}

impl Lemma1Check {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// For each trace `{a, b, c}`, any choice of first vertex must be adjacent to
/// at least one of the other two. That is the same as at most one of the
/// three pairs being a non-edge.
pub fn check_lemma1(ts: &TraceSet, g: &Graph) -> Result<Lemma1Check> {
    if ts.trace_size() != 3 && !ts.is_empty() {
        return Err(Error::TraceSize {
            expected: 3,
            found: ts.trace_size(),
        });
    }
    let violations = ts
        .traces()
        .iter()
        .filter(|t| {
            let v = t.vertices();
            (0..3).any(|i| {
                let (a, b, c) = (v[i], v[(i + 1) % 3], v[(i + 2) % 3]);
                !g.has_edge(a, b) && !g.has_edge(a, c)
            })
        })
        .cloned()
        .collect();
    Ok(Lemma1Check { violations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Family;

    fn paw() -> Graph {
        Graph::new(4, [(0, 1), (0, 2), (1, 2), (2, 3)]).unwrap()
    }

    fn tr(v: &[usize]) -> Trace {
        Trace::new(v.iter().copied()).unwrap()
    }

    /// Brute force over all ordered k-tuples of distinct vertices.
    fn brute_paths(g: &Graph, k: usize) -> Vec<Vec<usize>> {
        fn rec(g: &Graph, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == k {
                let ok = cur.windows(2).all(|w| g.has_edge(w[0], w[1]));
                if ok && cur[0] < cur[k - 1] {
                    out.push(cur.clone());
                }
                return;
            }
            for v in 0..g.vertex_count() {
                if !cur.contains(&v) {
                    cur.push(v);
                    rec(g, k, cur, out);
                    cur.pop();
                }
            }
        }
        let mut out = Vec::new();
        rec(g, k, &mut Vec::new(), &mut out);
        out.sort();
        out
    }

    #[test]
    fn trace_rejects_bad_input() {
        assert_eq!(Trace::new([1, 2, 1]), Err(Error::DuplicateVertex(1)));
        assert_eq!(Trace::new([4]), Err(Error::TraceLength(1)));
        assert_eq!(tr(&[3, 0, 2]).vertices(), &[0, 2, 3]);
    }

    #[test]
    fn path_graph_paths() {
        let p4 = Graph::named(Family::Path, 4).unwrap();
        let mut paths = enumerate_paths(&p4, 3).unwrap();
        paths.sort();
        assert_eq!(paths, vec![vec![0, 1, 2], vec![1, 2, 3]]);
    }

    #[test]
    fn star_paths() {
        let star = Graph::named(Family::Star, 4).unwrap();
        let mut paths = enumerate_paths(&star, 3).unwrap();
        paths.sort();
        assert_eq!(paths, vec![vec![1, 0, 2], vec![1, 0, 3], vec![2, 0, 3]]);
        assert_eq!(paths, brute_paths(&star, 3));
    }

    #[test]
    fn edgeless_has_no_paths() {
        assert!(enumerate_paths(&Graph::empty(5), 3).unwrap().is_empty());
        assert!(enumerate_paths(&Graph::empty(5), 1).is_err());
    }

    #[test]
    fn dfs_matches_brute_force() {
        for seed in 0..20 {
            let g = Graph::sample_er(7, 0.45, seed).unwrap();
            for k in 2..=5 {
                let mut paths = enumerate_paths(&g, k).unwrap();
                paths.sort();
                assert_eq!(paths, brute_paths(&g, k), "seed {seed} k {k}");
            }
        }
    }

    #[test]
    fn complete_graph_path_count() {
        for n in 3..8 {
            let kn = Graph::complete(n);
            let c3 = n * (n - 1) * (n - 2) / 6;
            assert_eq!(enumerate_paths(&kn, 3).unwrap().len(), 3 * c3);
        }
    }

    #[test]
    fn k5_traces_are_all_triples() {
        let k5 = Graph::complete(5);
        let ts = trace_set(&k5, 3).unwrap();
        assert_eq!(ts.len(), 10);
        let k5e = Graph::named(Family::CompleteMinusEdge, 5).unwrap();
        assert_eq!(trace_set(&k5e, 3).unwrap(), ts);
    }

    #[test]
    fn paw_traces() {
        let ts = trace_set(&paw(), 3).unwrap();
        assert_eq!(
            ts.traces(),
            &[tr(&[0, 1, 2]), tr(&[0, 2, 3]), tr(&[1, 2, 3])]
        );
        assert_eq!(ts.trace_size(), 3);
    }

    #[test]
    fn size_two_traces_are_edges() {
        for seed in 0..10 {
            let g = Graph::sample_er(9, 0.4, seed).unwrap();
            let ts = trace_set(&g, 2).unwrap();
            let as_edges: Vec<_> = ts
                .traces()
                .iter()
                .map(|t| (t.vertices()[0], t.vertices()[1]))
                .collect();
            assert_eq!(as_edges, g.edges());
        }
    }

    #[test]
    fn trace_set_new_dedups_and_sizes() {
        let ts = TraceSet::new(4, vec![tr(&[2, 1]), tr(&[1, 2]), tr(&[0, 1, 3])]).unwrap();
        assert_eq!(ts.len(), 2);
        assert_eq!(ts.trace_size(), 0);
        assert_eq!(
            TraceSet::new(3, vec![tr(&[0, 3])]),
            Err(Error::VertexOutOfRange { vertex: 3, n: 3 })
        );
    }

    #[test]
    fn lemma1_examples() {
        let p6 = Graph::named(Family::Path, 6).unwrap();
        assert!(check_lemma1(&trace_set(&p6, 3).unwrap(), &p6)
            .unwrap()
            .holds());

        let ts = TraceSet::new(3, vec![tr(&[0, 1, 2])]).unwrap();
        let check = check_lemma1(&ts, &Graph::empty(3)).unwrap();
        assert_eq!(check.violations, vec![tr(&[0, 1, 2])]);

        let ts2 = trace_set(&p6, 2).unwrap();
        assert!(matches!(
            check_lemma1(&ts2, &p6),
            Err(Error::TraceSize { expected: 3, .. })
        ));
    }

    #[test]
    fn lemma1_on_random_graphs() {
        for seed in 0..500 {
            let g = Graph::sample_er(12, 0.3, seed).unwrap();
            let ts = trace_set(&g, 3).unwrap();
            assert!(check_lemma1(&ts, &g).unwrap().holds(), "seed {seed}");
        }
    }
}
