//! Local structural properties that decide, for size-3 traces, which edges
//! the reconstruction keeps and which non-edges it wrongly adds.
//!
//! For an edge `(a, b)`: it survives iff it has the unique-neighbor property
//! or the strong triadic closure property. For a non-edge `(a, b)`: it stays
//! out iff it has the distinct-neighbors property or the weak triadic closure
//! property. [`theorem_oracle`] applies these rules to every pair.

use crate::error::{Error, Result};
use crate::graph::Graph;

fn check_pair(g: &Graph, v1: usize, v2: usize, want_edge: bool) -> Result<()> {
    let n = g.vertex_count();
    for v in [v1, v2] {
        if v >= n {
            return Err(Error::VertexOutOfRange { vertex: v, n });
        }
    }
    if v1 == v2 {
        return Err(Error::SelfLoop(v1));
    }
    match (want_edge, g.has_edge(v1, v2)) {
        (true, false) => Err(Error::NotAnEdge(v1, v2)),
        (false, true) => Err(Error::IsAnEdge(v1, v2)),
        _ => Ok(()),
    }
}

fn common_neighbors(g: &Graph, v1: usize, v2: usize) -> impl Iterator<Item = usize> + '_ {
    g.neighbors(v1)
        .iter()
        .copied()
        .filter(move |&z| z != v2 && g.has_edge(z, v2))
}

/// Some third vertex is adjacent to exactly one endpoint of the edge.
pub fn has_unique_neighbor(g: &Graph, v1: usize, v2: usize) -> Result<bool> {
    check_pair(g, v1, v2, true)?;
    Ok((0..g.vertex_count())
        .filter(|&u| u != v1 && u != v2)
        .any(|u| g.has_edge(v1, u) != g.has_edge(v2, u)))
}

/// Some common neighbor `z` of the endpoints has every other neighbor
/// adjacent to at least one endpoint.
pub fn has_strong_triadic_closure(g: &Graph, v1: usize, v2: usize) -> Result<bool> {
    check_pair(g, v1, v2, true)?;
    Ok(common_neighbors(g, v1, v2).any(|z| {
        g.neighbors(z)
            .iter()
            .filter(|&&y| y != v1 && y != v2)
            .all(|&y| g.has_edge(v1, y) || g.has_edge(v2, y))
    }))
}

/// Each vertex of the non-adjacent pair has a neighbor the other lacks.
pub fn has_distinct_neighbors(g: &Graph, v1: usize, v2: usize) -> Result<bool> {
    check_pair(g, v1, v2, false)?;
    let private = |a: usize, b: usize| g.neighbors(a).iter().any(|&x| !g.has_edge(b, x));
    Ok(private(v1, v2) && private(v2, v1))
}

/// Every common neighbor `u` of the non-adjacent pair has a neighbor
/// `x != v1, v2` that is not adjacent to both. Vacuously true without common
/// neighbors.
pub fn has_weak_triadic_closure(g: &Graph, v1: usize, v2: usize) -> Result<bool> {
    check_pair(g, v1, v2, false)?;
    Ok(common_neighbors(g, v1, v2).all(|u| {
        g.neighbors(u)
            .iter()
            .any(|&x| x != v1 && x != v2 && !(g.has_edge(v1, x) && g.has_edge(v2, x)))
    }))
}

/// Per-pair verdict. Predicates that do not apply to the pair's side
/// (edge vs non-edge) are reported as `false`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairDiagnosis {
    pub v1: usize,
    pub v2: usize,
    pub in_g: bool,
    pub unique_neighbor: bool,
    pub strong_triadic: bool,
    pub distinct_neighbors: bool,
    pub weak_triadic: bool,
    pub predicted_in_ghat: bool,
}

pub fn diagnose_pair(g: &Graph, v1: usize, v2: usize) -> Result<PairDiagnosis> {
    let in_g = g.has_edge(v1, v2);
    let mut d = PairDiagnosis {
        v1,
        v2,
        in_g,
        unique_neighbor: false,
        strong_triadic: false,
        distinct_neighbors: false,
        weak_triadic: false,
        predicted_in_ghat: false,
    };
    if in_g {
        d.unique_neighbor = has_unique_neighbor(g, v1, v2)?;
        d.strong_triadic = has_strong_triadic_closure(g, v1, v2)?;
        d.predicted_in_ghat = d.unique_neighbor || d.strong_triadic;
    } else {
        d.distinct_neighbors = has_distinct_neighbors(g, v1, v2)?;
        d.weak_triadic = has_weak_triadic_closure(g, v1, v2)?;
        d.predicted_in_ghat = !(d.distinct_neighbors || d.weak_triadic);
    }
    Ok(d)
}

/// The characterization only claims validity for `n > 3` and `|E| > 2`.
pub fn in_assumption_regime(g: &Graph) -> bool {
    g.vertex_count() > 3 && g.edge_count() > 2
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OraclePrediction {
    pub predicted: Graph,
    /// One entry per unordered pair `(v1 < v2)`, lexicographic.
    pub diagnoses: Vec<PairDiagnosis>,
    /// False when the graph lies outside `n > 3, |E| > 2`; the prediction is
    /// still computed.
    pub in_regime: bool,
}

/// Predict the size-3 reconstruction of `g` from its local structure alone.
pub fn theorem_oracle(g: &Graph) -> OraclePrediction {
    let n = g.vertex_count();
    let mut diagnoses = Vec::with_capacity(g.pair_count());
    for v1 in 0..n {
        for v2 in v1 + 1..n {
            diagnoses.push(diagnose_pair(g, v1, v2).expect("pair is in range and distinct"));
        }
    }
    let predicted = Graph::new(
        n,
        diagnoses
            .iter()
            .filter(|d| d.predicted_in_ghat)
            .map(|d| (d.v1, d.v2)),
    )
    .expect("pairs come from 0..n");
    OraclePrediction {
        predicted,
        diagnoses,
        in_regime: in_assumption_regime(g),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Family;

    fn paw() -> Graph {
        Graph::new(4, [(0, 1), (0, 2), (1, 2), (2, 3)]).unwrap()
    }

    #[test]
    fn unique_neighbor_examples() {
        let p4 = Graph::named(Family::Path, 4).unwrap();
        assert!(has_unique_neighbor(&p4, 1, 2).unwrap());
        assert!(!has_unique_neighbor(&Graph::complete(3), 0, 1).unwrap());
        assert!(!has_unique_neighbor(&paw(), 0, 1).unwrap());
    }

    #[test]
    fn strong_triadic_examples() {
        assert!(has_strong_triadic_closure(&Graph::complete(3), 0, 1).unwrap());
        assert!(!has_strong_triadic_closure(&paw(), 0, 1).unwrap());
        let p4 = Graph::named(Family::Path, 4).unwrap();
        assert!(!has_strong_triadic_closure(&p4, 1, 2).unwrap());
    }

    #[test]
    fn distinct_neighbors_examples() {
        let p6 = Graph::named(Family::Path, 6).unwrap();
        assert!(has_distinct_neighbors(&p6, 1, 4).unwrap());
        let c4 = Graph::named(Family::Cycle, 4).unwrap();
        assert!(!has_distinct_neighbors(&c4, 0, 2).unwrap());
        let star = Graph::named(Family::Star, 4).unwrap();
        assert!(!has_distinct_neighbors(&star, 1, 2).unwrap());
    }

    #[test]
    fn weak_triadic_examples() {
        let star = Graph::named(Family::Star, 4).unwrap();
        assert!(has_weak_triadic_closure(&star, 1, 2).unwrap());
        let c4 = Graph::named(Family::Cycle, 4).unwrap();
        assert!(!has_weak_triadic_closure(&c4, 0, 2).unwrap());
        let p6 = Graph::named(Family::Path, 6).unwrap();
        assert!(!has_weak_triadic_closure(&p6, 0, 2).unwrap());
        // No common neighbor at all.
        assert!(has_weak_triadic_closure(&p6, 0, 5).unwrap());
    }

    #[test]
    fn preconditions() {
        let p4 = Graph::named(Family::Path, 4).unwrap();
        assert_eq!(has_unique_neighbor(&p4, 0, 2), Err(Error::NotAnEdge(0, 2)));
        assert_eq!(
            has_strong_triadic_closure(&p4, 0, 3),
            Err(Error::NotAnEdge(0, 3))
        );
        assert_eq!(
            has_distinct_neighbors(&p4, 0, 1),
            Err(Error::IsAnEdge(0, 1))
        );
        assert_eq!(
            has_weak_triadic_closure(&p4, 1, 2),
            Err(Error::IsAnEdge(1, 2))
        );
        assert_eq!(has_weak_triadic_closure(&p4, 1, 1), Err(Error::SelfLoop(1)));
        assert!(matches!(
            has_unique_neighbor(&p4, 0, 9),
            Err(Error::VertexOutOfRange { .. })
        ));
    }

    #[test]
    fn oracle_examples() {
        let pred = theorem_oracle(&paw());
        assert_eq!(pred.predicted.edges(), vec![(0, 2), (1, 2), (2, 3)]);
        assert!(pred.in_regime);

        let c4 = Graph::named(Family::Cycle, 4).unwrap();
        assert_eq!(theorem_oracle(&c4).predicted, Graph::complete(4));

        let p6 = Graph::named(Family::Path, 6).unwrap();
        let mut with_chords = p6.edges();
        with_chords.extend([(0, 2), (3, 5)]);
        assert_eq!(
            theorem_oracle(&p6).predicted,
            Graph::new(6, with_chords).unwrap()
        );
    }

    #[test]
    fn diagnosis_invariants() {
        for seed in 0..50 {
            let g = Graph::sample_er(8, 0.4, seed).unwrap();
            let pred = theorem_oracle(&g);
            assert_eq!(pred.diagnoses.len(), 28);
            for d in &pred.diagnoses {
                if d.in_g {
                    assert_eq!(d.predicted_in_ghat, d.unique_neighbor || d.strong_triadic);
                    assert!(!d.distinct_neighbors && !d.weak_triadic);
                } else {
                    assert_eq!(
                        d.predicted_in_ghat,
                        !(d.distinct_neighbors || d.weak_triadic)
                    );
                    assert!(!d.unique_neighbor && !d.strong_triadic);
                }
            }
        }
    }

    #[test]
    fn boundary_regime_flag() {
        let g = Graph::new(5, [(0, 1), (1, 2)]).unwrap();
        assert!(!theorem_oracle(&g).in_regime);
        assert!(!theorem_oracle(&Graph::complete(3)).in_regime);
    }
}
