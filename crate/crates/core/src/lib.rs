//! Reconstruct undirected graphs from unordered path traces.
//!
//! A trace is the vertex set of an elementary path, with the visiting order
//! forgotten. Given every trace of a fixed size, [`reconstruct`] rebuilds a
//! graph by counting pair co-occurrences and ordering each trace into its
//! heaviest path. For size-3 traces, [`structure::theorem_oracle`] predicts
//! the outcome exactly from the graph's local structure, and [`er_theory`]
//! gives the resulting error probabilities on Erdős–Rényi graphs.
//!
//! ```
//! use pathtrace::{edge_diff, reconstruct, theorem_oracle, trace_set, Graph};
//!
//! // The paw: a triangle 0-1-2 with a pendant vertex 3 on 2.
//! let g = Graph::new(4, [(0, 1), (0, 2), (1, 2), (2, 3)])?;
//! let traces = trace_set(&g, 3)?;
//! let r = reconstruct(&traces, 4)?;
//! let diff = edge_diff(&g, &r.graph)?;
//! assert_eq!(diff.missed.into_iter().collect::<Vec<_>>(), vec![(0, 1)]);
//! assert!(diff.false_alarms.is_empty());
//! assert_eq!(theorem_oracle(&g).predicted, r.graph);
//! # Ok::<(), pathtrace::Error>(())
//! ```

pub mod er_theory;
pub mod error;
pub mod experiment;
pub mod graph;
pub mod io;
pub mod reconstruct;
pub mod structure;
pub mod traces;

pub use error::{Error, Result};
pub use graph::{edge_diff, EdgeDiff, Family, Graph};
pub use reconstruct::{
    best_orderings, cooccurrence_matrix, path_weight, reconstruct, CoMatrix, Reconstruction,
    ReconstructionReport, Reconstructor,
};
pub use structure::{theorem_oracle, OraclePrediction, PairDiagnosis};
pub use traces::{check_lemma1, enumerate_paths, trace_set, Trace, TraceSet};
