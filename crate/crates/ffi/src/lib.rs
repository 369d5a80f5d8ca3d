//! C ABI over the `pathtrace` library.
//!
//! Graphs and trace sets cross the boundary as opaque handles created by
//! `pt_*_new`-style constructors and released with the matching `*_free`.
//! Every fallible call returns a [`PtStatus`]; on failure a description is
//! available from [`pt_last_error`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use pathtrace::er_theory::edge_error_rate;
use pathtrace::{
    edge_diff, theorem_oracle, trace_set, Error, Family, Graph, Reconstructor, TraceSet,
};

/// Result codes for every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PtStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    OutOfRange = 3,
    CapExceeded = 4,
    BufferTooSmall = 5,
    Numeric = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PtFamily {
    Path = 0,
    Cycle = 1,
    Complete = 2,
    Star = 3,
    CompleteMinusEdge = 4,
}

impl From<PtFamily> for Family {
    fn from(f: PtFamily) -> Self {
        match f {
            PtFamily::Path => Family::Path,
            PtFamily::Cycle => Family::Cycle,
            PtFamily::Complete => Family::Complete,
            PtFamily::Star => Family::Star,
            PtFamily::CompleteMinusEdge => Family::CompleteMinusEdge,
        }
    }
}

/// Analytic error rates for G(n, p).
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PtErRates {
    pub n: usize,
    pub p: f64,
    pub p_miss: f64,
    pub p_fa: f64,
    pub p_err: f64,
}

/// Opaque graph handle.
pub struct PtGraph(Graph);

/// Opaque trace set handle.
pub struct PtTraceSet(TraceSet);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> PtStatus {
    match e {
        Error::EdgeOutOfRange { .. }
        | Error::VertexOutOfRange { .. }
        | Error::TooFewVertices { .. }
        | Error::VertexCountMismatch(..)
        | Error::IndexRange(..)
        | Error::TheoryDomain(_) => PtStatus::OutOfRange,
        Error::TraceCapExceeded { .. } => PtStatus::CapExceeded,
        Error::ProbabilityOverflow { .. } => PtStatus::Numeric,
        _ => PtStatus::InvalidArgument,
    }
}

struct Fail(PtStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(PtStatus::NullPointer, format!("{what} is null"))
}

fn guard<F: FnOnce() -> Result<(), Fail>>(body: F) -> PtStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => PtStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            PtStatus::Panic
        }
    }
}

/// Store a boxed handle in `*out`.
///
/// # Safety
/// `out` must be null or valid for writes.
unsafe fn emit<T>(out: *mut *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

/// Message for the most recent failure on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn pt_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Build a graph from `edge_count` pairs stored flat in `edges`
/// (`u0, v0, u1, v1, ...`).
///
/// # Safety
/// `edges` must point to `2 * edge_count` readable values (or be null when
/// `edge_count` is 0); `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pt_graph_new(
    n: usize,
    edges: *const usize,
    edge_count: usize,
    out: *mut *mut PtGraph,
) -> PtStatus {
    guard(|| {
        let flat: &[usize] = if edge_count == 0 {
            &[]
        } else if edges.is_null() {
            return Err(null("edges"));
        } else {
            std::slice::from_raw_parts(edges, 2 * edge_count)
        };
        let g = Graph::new(n, flat.chunks_exact(2).map(|c| (c[0], c[1])))?;
        emit(out, PtGraph(g))
    })
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pt_graph_named(
    family: PtFamily,
    n: usize,
    out: *mut *mut PtGraph,
) -> PtStatus {
    guard(|| emit(out, PtGraph(Graph::named(family.into(), n)?)))
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pt_graph_sample_er(
    n: usize,
    p: f64,
    seed: u64,
    out: *mut *mut PtGraph,
) -> PtStatus {
    guard(|| emit(out, PtGraph(Graph::sample_er(n, p, seed)?)))
}

/// # Safety
/// `g` must be null or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn pt_graph_free(g: *mut PtGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Vertex count, or 0 for a null handle.
///
/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pt_graph_vertex_count(g: *const PtGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.vertex_count())
}

/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pt_graph_edge_count(g: *const PtGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.edge_count())
}

/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pt_graph_has_edge(g: *const PtGraph, u: usize, v: usize) -> bool {
    g.as_ref().is_some_and(|g| g.0.has_edge(u, v))
}

/// Copy the sorted edge list into `buf` as flat `(u, v)` pairs with `u < v`.
/// `*written` receives the number of pairs; when `capacity` (in pairs) is too
/// small nothing is copied, `*written` holds the required size and
/// `BufferTooSmall` is returned.
///
/// # Safety
/// `g` must be a live handle, `buf` valid for `2 * capacity` writes, and
/// `written` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn pt_graph_edges(
    g: *const PtGraph,
    buf: *mut usize,
    capacity: usize,
    written: *mut usize,
) -> PtStatus {
    guard(|| {
        let g = g.as_ref().ok_or_else(|| null("graph"))?;
        if written.is_null() {
            return Err(null("written"));
        }
        let edges = g.0.edges();
        *written = edges.len();
        if edges.len() > capacity {
            return Err(Fail(
                PtStatus::BufferTooSmall,
                format!("need room for {} pairs, got {capacity}", edges.len()),
            ));
        }
        if !edges.is_empty() {
            if buf.is_null() {
                return Err(null("buf"));
            }
            let dst = std::slice::from_raw_parts_mut(buf, 2 * edges.len());
            for (slot, (u, v)) in dst.chunks_exact_mut(2).zip(edges) {
                slot[0] = u;
                slot[1] = v;
            }
        }
        Ok(())
    })
}

/// All traces of size `k` of `g`.
///
/// # Safety
/// `g` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pt_trace_set_from_graph(
    g: *const PtGraph,
    k: usize,
    out: *mut *mut PtTraceSet,
) -> PtStatus {
    guard(|| {
        let g = g.as_ref().ok_or_else(|| null("graph"))?;
        emit(out, PtTraceSet(trace_set(&g.0, k)?))
    })
}

/// # Safety
/// `ts` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pt_trace_set_len(ts: *const PtTraceSet) -> usize {
    ts.as_ref().map_or(0, |t| t.0.len())
}

/// # Safety
/// `ts` must be null or a handle that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn pt_trace_set_free(ts: *mut PtTraceSet) {
    if !ts.is_null() {
        drop(Box::from_raw(ts));
    }
}

/// Reconstruct a graph on `n` vertices. `max_trace_size` of 0 selects the
/// default cap.
///
/// # Safety
/// `ts` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pt_reconstruct(
    ts: *const PtTraceSet,
    n: usize,
    max_trace_size: usize,
    out: *mut *mut PtGraph,
) -> PtStatus {
    guard(|| {
        let ts = ts.as_ref().ok_or_else(|| null("trace set"))?;
        let rec = if max_trace_size == 0 {
            Reconstructor::default()
        } else {
            Reconstructor::with_max_trace_size(max_trace_size)
        };
        emit(out, PtGraph(rec.run_graph(&ts.0, n)?))
    })
}

/// Predicted size-3 reconstruction of `g`. `in_regime` (optional) is set to
/// whether `n > 3` and `|E| > 2`.
///
/// # Safety
/// `g` must be a live handle; `out` valid for writes; `in_regime` null or
/// valid for one write.
#[no_mangle]
pub unsafe extern "C" fn pt_theorem_oracle(
    g: *const PtGraph,
    out: *mut *mut PtGraph,
    in_regime: *mut bool,
) -> PtStatus {
    guard(|| {
        let g = g.as_ref().ok_or_else(|| null("graph"))?;
        let pred = theorem_oracle(&g.0);
        if !in_regime.is_null() {
            *in_regime = pred.in_regime;
        }
        emit(out, PtGraph(pred.predicted))
    })
}

/// Count edges of `truth` missing from `estimate` and edges of `estimate`
/// absent from `truth`.
///
/// # Safety
/// Both handles must be live; `missed` and `false_alarms` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pt_edge_diff(
    truth: *const PtGraph,
    estimate: *const PtGraph,
    missed: *mut usize,
    false_alarms: *mut usize,
) -> PtStatus {
    guard(|| {
        let truth = truth.as_ref().ok_or_else(|| null("truth"))?;
        let estimate = estimate.as_ref().ok_or_else(|| null("estimate"))?;
        if missed.is_null() || false_alarms.is_null() {
            return Err(null("output count"));
        }
        let d = edge_diff(&truth.0, &estimate.0)?;
        *missed = d.missed.len();
        *false_alarms = d.false_alarms.len();
        Ok(())
    })
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pt_er_rates(n: usize, p: f64, out: *mut PtErRates) -> PtStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let r = edge_error_rate(n, p)?;
        *out = PtErRates {
            n: r.n,
            p: r.p,
            p_miss: r.p_miss,
            p_fa: r.p_fa,
            p_err: r.p_err,
        };
        Ok(())
    })
}
