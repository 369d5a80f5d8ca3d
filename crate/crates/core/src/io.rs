//! Plain-text file formats.
//!
//! Edge lists and trace files share one layout: `#` comments, an optional
//! `n <N>` header, then one record per line of whitespace-separated vertex
//! labels. With a header, labels must lie in `0..N` and are used as ids
//! directly. Without one, the distinct labels are compacted in increasing
//! order onto `0..m` and the mapping is kept in a [`LabelMap`] so output can
//! be written back in the original labels.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::reconstruct::ReconstructionReport;
use crate::structure::PairDiagnosis;
use crate::traces::{Trace, TraceSet};

/// Maps internal ids `0..n` to external labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelMap {
    Identity(usize),
    Compacted(Vec<u64>),
}

impl LabelMap {
    pub fn len(&self) -> usize {
        match self {
            LabelMap::Identity(n) => *n,
            LabelMap::Compacted(labels) => labels.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_identity(&self) -> bool {
        matches!(self, LabelMap::Identity(_))
    }

    pub fn label(&self, id: usize) -> u64 {
        match self {
            LabelMap::Identity(_) => id as u64,
            LabelMap::Compacted(labels) => labels[id],
        }
    }

    /// Sorted distinct labels of `self` and `other`, used to compare graphs
    /// read from different files.
    pub fn union(&self, other: &LabelMap) -> LabelMap {
        if let (LabelMap::Identity(a), LabelMap::Identity(b)) = (self, other) {
            return LabelMap::Identity(*a.max(b));
        }
        let mut labels: Vec<u64> = (0..self.len())
            .map(|i| self.label(i))
            .chain((0..other.len()).map(|i| other.label(i)))
            .collect();
        labels.sort_unstable();
        labels.dedup();
        LabelMap::Compacted(labels)
    }

    /// For each id of `self`, its id under `target`. Every label of `self`
    /// must appear in `target`.
    pub fn translate_into(&self, target: &LabelMap) -> Vec<usize> {
        let index: HashMap<u64, usize> = (0..target.len()).map(|i| (target.label(i), i)).collect();
        (0..self.len()).map(|i| index[&self.label(i)]).collect()
    }
}

struct Records {
    header: Option<usize>,
    rows: Vec<(usize, Vec<u64>)>,
}

fn parse_records<R: BufRead>(reader: R) -> Result<Records> {
    let mut header = None;
    let mut rows = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let mut tokens = text.split_whitespace().peekable();
        if tokens.peek() == Some(&"n") {
            tokens.next();
            if header.is_some() || !rows.is_empty() {
                return Err(Error::Parse {
                    line: line_no,
                    msg: "header `n <N>` must come once, before any record".into(),
                });
            }
            let value = tokens.next().and_then(|t| t.parse::<usize>().ok());
            match (value, tokens.next()) {
                (Some(n), None) => header = Some(n),
                _ => {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!("malformed header `{text}`"),
                    })
                }
            }
            continue;
        }
        let labels = tokens
            .map(|t| {
                t.parse::<u64>().map_err(|_| Error::Parse {
                    line: line_no,
                    msg: format!("`{t}` is not a nonnegative integer label"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push((line_no, labels));
    }
    Ok(Records { header, rows })
}

/// Source line number and vertex ids of one record.
type IdRow = (usize, Vec<usize>);

/// Resolve labels to ids; returns the map plus id rows.
fn resolve(records: Records) -> Result<(LabelMap, Vec<IdRow>)> {
    match records.header {
        Some(n) => {
            let mut rows = Vec::with_capacity(records.rows.len());
            for (line, labels) in records.rows {
                let mut ids = Vec::with_capacity(labels.len());
                for l in labels {
                    if l >= n as u64 {
                        return Err(Error::Parse {
                            line,
                            msg: format!("label {l} is outside the declared range 0..{n}"),
                        });
                    }
                    ids.push(l as usize);
                }
                rows.push((line, ids));
            }
            Ok((LabelMap::Identity(n), rows))
        }
        None => {
            let mut all: Vec<u64> = records
                .rows
                .iter()
                .flat_map(|(_, r)| r.iter().copied())
                .collect();
            all.sort_unstable();
            all.dedup();
            let index: HashMap<u64, usize> = all.iter().enumerate().map(|(i, &l)| (l, i)).collect();
            let rows = records
                .rows
                .into_iter()
                .map(|(line, labels)| (line, labels.iter().map(|l| index[l]).collect()))
                .collect();
            let map = if all.iter().enumerate().all(|(i, &l)| i as u64 == l) {
                LabelMap::Identity(all.len())
            } else {
                LabelMap::Compacted(all)
            };
            Ok((map, rows))
        }
    }
}

/// A graph together with the labels it was read with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledGraph {
    pub graph: Graph,
    pub labels: LabelMap,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledTraces {
    pub traces: TraceSet,
    pub labels: LabelMap,
}

pub fn read_graph<R: BufRead>(reader: R) -> Result<LabeledGraph> {
    let (labels, rows) = resolve(parse_records(reader)?)?;
    let mut edges = Vec::with_capacity(rows.len());
    for (line, ids) in rows {
        if ids.len() != 2 {
            return Err(Error::Parse {
                line,
                msg: format!("edge line needs exactly 2 labels, found {}", ids.len()),
            });
        }
        if ids[0] == ids[1] {
            return Err(Error::Parse {
                line,
                msg: "self-loops are not allowed".into(),
            });
        }
        edges.push((ids[0], ids[1]));
    }
    let graph = Graph::new(labels.len(), edges)?;
    Ok(LabeledGraph { graph, labels })
}

pub fn read_traces<R: BufRead>(reader: R) -> Result<LabeledTraces> {
    let (labels, rows) = resolve(parse_records(reader)?)?;
    let mut traces = Vec::with_capacity(rows.len());
    for (line, ids) in rows {
        let t = Trace::new(ids).map_err(|e| Error::Parse {
            line,
            msg: e.to_string(),
        })?;
        traces.push(t);
    }
    let traces = TraceSet::new(labels.len(), traces)?;
    Ok(LabeledTraces { traces, labels })
}

pub fn read_graph_file(path: &Path) -> Result<LabeledGraph> {
    let file = File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    read_graph(BufReader::new(file))
}

pub fn read_traces_file(path: &Path) -> Result<LabeledTraces> {
    let file = File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    read_traces(BufReader::new(file))
}

fn write_header<W: Write>(w: &mut W, n: usize, labels: &LabelMap) -> Result<()> {
    if labels.is_identity() {
        writeln!(w, "n {n}")?;
    } else {
        writeln!(w, "# labels are original vertex ids (compacted on read)")?;
    }
    Ok(())
}

/// Header first (when ids are the labels), then edges in lexicographic order.
pub fn write_graph<W: Write>(w: &mut W, g: &Graph, labels: &LabelMap) -> Result<()> {
    write_header(w, g.vertex_count(), labels)?;
    // Compacted maps are increasing, so id order is label order.
    for (u, v) in g.edges() {
        writeln!(w, "{} {}", labels.label(u), labels.label(v))?;
    }
    Ok(())
}

pub fn write_traces<W: Write>(w: &mut W, ts: &TraceSet, labels: &LabelMap) -> Result<()> {
    write_header(w, ts.vertex_count(), labels)?;
    for t in ts.traces() {
        writeln!(w, "{}", join_labels(t.vertices(), labels))?;
    }
    Ok(())
}

fn join_labels(ids: &[usize], labels: &LabelMap) -> String {
    ids.iter()
        .map(|&v| labels.label(v).to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// One line per trace: vertices, maximum ordering weight, number of tied
/// maximum-weight orderings.
pub fn write_report<W: Write>(
    w: &mut W,
    report: &ReconstructionReport,
    labels: &LabelMap,
) -> Result<()> {
    writeln!(w, "# trace\tmax_weight\tties")?;
    for r in &report.records {
        writeln!(
            w,
            "{}\t{}\t{}",
            join_labels(r.trace.vertices(), labels),
            r.max_weight,
            r.ties
        )?;
    }
    writeln!(w, "# tied_traces {}", report.tied_traces)?;
    Ok(())
}

pub const DIAGNOSIS_HEADER: &str =
    "v1,v2,in_g,unique_neighbor,strong_triadic,distinct_neighbors,weak_triadic,predicted_in_ghat";

pub fn write_diagnosis_csv<W: Write>(
    w: &mut W,
    diagnoses: &[PairDiagnosis],
    labels: &LabelMap,
) -> Result<()> {
    writeln!(w, "{DIAGNOSIS_HEADER}")?;
    for d in diagnoses {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{}",
            labels.label(d.v1),
            labels.label(d.v2),
            d.in_g,
            d.unique_neighbor,
            d.strong_triadic,
            d.distinct_neighbors,
            d.weak_triadic,
            d.predicted_in_ghat
        )?;
    }
    Ok(())
}

/// Write through a temporary file in the destination directory and rename it
/// into place, so a failed write leaves nothing behind.
pub fn write_atomic<F>(path: &Path, body: F) -> Result<()>
where
    F: FnOnce(&mut BufWriter<&mut tempfile::NamedTempFile>) -> Result<()>,
{
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    {
        let mut w = BufWriter::new(&mut tmp);
        body(&mut w)?;
        w.flush()?;
    }
    tmp.persist(path)
        .map_err(|e| Error::Io(format!("{}: {}", path.display(), e.error)))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Family;
    use crate::traces::trace_set;

    fn graph_text(g: &Graph, labels: &LabelMap) -> String {
        let mut buf = Vec::new();
        write_graph(&mut buf, g, labels).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn graph_with_header_keeps_isolated_vertices() {
        let text = "# comment\nn 6\n0 1\n1 2\n\n2 3\n";
        let lg = read_graph(text.as_bytes()).unwrap();
        assert_eq!(lg.graph.vertex_count(), 6);
        assert_eq!(lg.graph.edge_count(), 3);
        assert!(lg.labels.is_identity());
        assert_eq!(graph_text(&lg.graph, &lg.labels), "n 6\n0 1\n1 2\n2 3\n");
    }

    #[test]
    fn labels_are_compacted_without_header() {
        let text = "10 30\n30 20\n";
        let lg = read_graph(text.as_bytes()).unwrap();
        assert_eq!(lg.labels, LabelMap::Compacted(vec![10, 20, 30]));
        assert_eq!(lg.graph.edges(), vec![(0, 2), (1, 2)]);
        let out = graph_text(&lg.graph, &lg.labels);
        assert!(out.ends_with("10 30\n20 30\n"));
        assert_eq!(read_graph(out.as_bytes()).unwrap(), lg);
    }

    #[test]
    fn graph_parse_errors() {
        let cases = [
            ("n 3\n0 3\n", 2),
            ("0 1 2\n", 1),
            ("0 x\n", 1),
            ("1 1\n", 1),
            ("0 1\nn 4\n", 2),
            ("n four\n", 1),
        ];
        for (text, line) in cases {
            match read_graph(text.as_bytes()) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn traces_read_sort_and_dedup() {
        let text = "n 5\n2 0 1\n1 2 0\n3 4\n";
        let lt = read_traces(text.as_bytes()).unwrap();
        assert_eq!(lt.traces.len(), 2);
        assert_eq!(lt.traces.trace_size(), 0);
        let mut buf = Vec::new();
        write_traces(&mut buf, &lt.traces, &lt.labels).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "n 5\n0 1 2\n3 4\n");
    }

    #[test]
    fn trace_parse_errors() {
        for text in ["n 4\n1 2 1\n", "n 4\n3\n", "n 4\n0 4\n"] {
            assert!(matches!(
                read_traces(text.as_bytes()),
                Err(Error::Parse { .. })
            ));
        }
    }

    #[test]
    fn trace_file_round_trip() {
        let g = Graph::named(Family::Cycle, 7).unwrap();
        let ts = trace_set(&g, 4).unwrap();
        let labels = LabelMap::Identity(7);
        let mut buf = Vec::new();
        write_traces(&mut buf, &ts, &labels).unwrap();
        let back = read_traces(buf.as_slice()).unwrap();
        assert_eq!(back.traces, ts);
    }

    #[test]
    fn label_union_and_translation() {
        let a = LabelMap::Compacted(vec![3, 9]);
        let b = LabelMap::Compacted(vec![1, 9, 12]);
        let u = a.union(&b);
        assert_eq!(u, LabelMap::Compacted(vec![1, 3, 9, 12]));
        assert_eq!(a.translate_into(&u), vec![1, 2]);
        assert_eq!(
            LabelMap::Identity(3).union(&LabelMap::Identity(5)),
            LabelMap::Identity(5)
        );
    }
}
