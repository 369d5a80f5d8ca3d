//! Command-line pipeline: generate graphs and traces, reconstruct, compare
//! against the structural oracle, and run the error-rate experiments.
//!
//! Exit codes: 0 success, 1 usage error, 2 I/O / parse / range failure,
//! 3 verification mismatch.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use pathtrace::er_theory::edge_error_rate;
use pathtrace::experiment::{
    fmt_sig, oracle_equivalence_scan, sweep, write_sweep_csv, Disagreement, ScanMode, SweepConfig,
};
use pathtrace::io::{
    read_graph_file, read_traces_file, write_atomic, write_diagnosis_csv, write_graph,
    write_report, write_traces, LabelMap, LabeledGraph,
};
use pathtrace::{
    edge_diff, theorem_oracle, trace_set, EdgeDiff, Error, Family, Graph, Reconstructor,
};

#[derive(Parser)]
#[command(
    name = "pathtrace",
    version,
    about = "Reconstruct graphs from unordered path traces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    Er,
    Path,
    Cycle,
    Complete,
    Star,
    CompleteMinusEdge,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    ExhaustiveN5,
    ExhaustiveN6,
    Random,
}

#[derive(Subcommand)]
enum Command {
    /// Write a named or Erdős–Rényi graph as an edge list.
    GenGraph {
        #[arg(long, value_enum)]
        model: Model,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write every trace of size k of a graph.
    GenTraces {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Rebuild a graph from a trace file.
    Reconstruct {
        #[arg(long)]
        traces: PathBuf,
        /// Vertex count, for isolated vertices absent from the traces.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        out: PathBuf,
        /// Per-trace weights and tie counts.
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, default_value_t = pathtrace::reconstruct::DEFAULT_MAX_TRACE_SIZE)]
        max_trace_size: usize,
    },
    /// Predict the size-3 reconstruction from the graph's local structure.
    Oracle {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Per-pair CSV of the structural properties.
        #[arg(long)]
        diagnosis: Option<PathBuf>,
    },
    /// Check that reconstruction from size-3 traces matches the oracle.
    Verify {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Compare two edge lists.
    Diff {
        #[arg(long)]
        truth: PathBuf,
        #[arg(long)]
        estimate: PathBuf,
    },
    /// Analytic miss / false-alarm / error rates for G(n, p).
    Theory {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
    },
    /// Monte Carlo error rates next to the analytic curves, as CSV.
    ErCurve {
        #[arg(long, value_delimiter = ',', required = true)]
        n_list: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        p_list: Vec<f64>,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Worker threads (0 = all cores).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// Compare reconstruction and oracle over a corpus of graphs.
    Scan {
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long, default_value_t = 7)]
        n_min: usize,
        #[arg(long, default_value_t = 12)]
        n_max: usize,
        #[arg(long, default_value_t = 0.1)]
        p_min: f64,
        #[arg(long, default_value_t = 0.9)]
        p_max: f64,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
}

enum Failure {
    Usage(String),
    Run(Error),
    Mismatch,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Run(e)
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Run(e)) => {
            eprintln!("error: {}", failure_class(&e));
            ExitCode::from(2)
        }
        Err(Failure::Mismatch) => ExitCode::from(3),
    }
}

fn failure_class(e: &Error) -> String {
    let class = match e {
        Error::Parse { .. } => "parse error",
        Error::Io(_) => "i/o error",
        Error::TraceCapExceeded { .. } => "cap exceeded",
        _ => "range error",
    };
    format!("{class}: {e}")
}

fn run(command: Command) -> CmdResult {
    match command {
        Command::GenGraph {
            model,
            n,
            p,
            seed,
            out,
        } => gen_graph(model, n, p, seed, &out),
        Command::GenTraces { graph, k, out } => {
            let lg = read_graph_file(&graph)?;
            let ts = trace_set(&lg.graph, k)?;
            write_atomic(&out, |w| write_traces(w, &ts, &lg.labels))?;
            Ok(())
        }
        Command::Reconstruct {
            traces,
            n,
            out,
            report,
            max_trace_size,
        } => reconstruct_cmd(&traces, n, &out, report.as_deref(), max_trace_size),
        Command::Oracle {
            graph,
            out,
            diagnosis,
        } => {
            let lg = read_graph_file(&graph)?;
            let pred = theorem_oracle(&lg.graph);
            if !pred.in_regime {
                eprintln!("warning: graph is outside n > 3, |E| > 2; prediction is not guaranteed");
            }
            write_atomic(&out, |w| write_graph(w, &pred.predicted, &lg.labels))?;
            if let Some(path) = diagnosis {
                write_atomic(&path, |w| {
                    write_diagnosis_csv(w, &pred.diagnoses, &lg.labels)
                })?;
            }
            Ok(())
        }
        Command::Verify { graph } => verify(&graph),
        Command::Diff { truth, estimate } => diff_cmd(&truth, &estimate),
        Command::Theory { n, p } => {
            let r = edge_error_rate(n, p)?;
            println!("n={} p={}", r.n, fmt_sig(r.p, 9));
            println!("p_miss={}", fmt_sig(r.p_miss, 9));
            println!("p_fa={}", fmt_sig(r.p_fa, 9));
            println!("p_err={}", fmt_sig(r.p_err, 9));
            Ok(())
        }
        Command::ErCurve {
            n_list,
            p_list,
            trials,
            seed,
            out,
            jobs,
        } => {
            if trials == 0 {
                return Err(Failure::Usage("--trials must be at least 1".into()));
            }
            let config = SweepConfig {
                n_values: n_list,
                p_values: p_list,
                trials,
                master_seed: seed,
                jobs,
            };
            let rows = sweep(&config)?;
            write_atomic(&out, |w| write_sweep_csv(w, &rows))?;
            Ok(())
        }
        Command::Scan {
            mode,
            n_min,
            n_max,
            p_min,
            p_max,
            samples,
            seed,
        } => {
            let mode = match mode {
                Mode::ExhaustiveN5 => ScanMode::Exhaustive(5),
                Mode::ExhaustiveN6 => ScanMode::Exhaustive(6),
                Mode::Random => ScanMode::Random {
                    n_min,
                    n_max,
                    p_min,
                    p_max,
                    samples,
                    seed: seed.ok_or_else(|| {
                        Failure::Usage("--seed is required for --mode random".into())
                    })?,
                },
            };
            scan(&mode)
        }
    }
}

fn gen_graph(model: Model, n: usize, p: Option<f64>, seed: Option<u64>, out: &Path) -> CmdResult {
    let g = match model {
        Model::Er => {
            let p = p.ok_or_else(|| Failure::Usage("--model er requires --p".into()))?;
            let seed = seed.ok_or_else(|| Failure::Usage("--model er requires --seed".into()))?;
            Graph::sample_er(n, p, seed)?
        }
        named => {
            if p.is_some() || seed.is_some() {
                return Err(Failure::Usage(
                    "--p and --seed only apply to --model er".into(),
                ));
            }
            let family = match named {
                Model::Path => Family::Path,
                Model::Cycle => Family::Cycle,
                Model::Complete => Family::Complete,
                Model::Star => Family::Star,
                Model::CompleteMinusEdge => Family::CompleteMinusEdge,
                Model::Er => unreachable!(),
            };
            Graph::named(family, n)?
        }
    };
    write_atomic(out, |w| write_graph(w, &g, &LabelMap::Identity(n)))?;
    Ok(())
}

fn reconstruct_cmd(
    traces: &Path,
    n: Option<usize>,
    out: &Path,
    report: Option<&Path>,
    max_trace_size: usize,
) -> CmdResult {
    let lt = read_traces_file(traces)?;
    let mut ts = lt.traces;
    let mut labels = lt.labels;
    if let Some(n) = n {
        if !labels.is_identity() {
            return Err(Failure::Usage(
                "--n needs a trace file whose labels are ids (add an `n <N>` header)".into(),
            ));
        }
        ts = ts.with_vertex_count(n)?;
        labels = LabelMap::Identity(n);
    }
    let n = ts.vertex_count();
    let r = Reconstructor::with_max_trace_size(max_trace_size).run(&ts, n)?;
    write_atomic(out, |w| write_graph(w, &r.graph, &labels))?;
    if let Some(path) = report {
        write_atomic(path, |w| write_report(w, &r.report, &labels))?;
    }
    Ok(())
}

fn print_diff(diff: &EdgeDiff, labels: &LabelMap, missed: &str, extra: &str) {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    for &(u, v) in &diff.missed {
        let _ = writeln!(out, "{missed} {} {}", labels.label(u), labels.label(v));
    }
    for &(u, v) in &diff.false_alarms {
        let _ = writeln!(out, "{extra} {} {}", labels.label(u), labels.label(v));
    }
}

fn verify(path: &Path) -> CmdResult {
    let LabeledGraph { graph, labels } = read_graph_file(path)?;
    let n = graph.vertex_count();
    let ghat = Reconstructor::default().run_graph(&trace_set(&graph, 3)?, n)?;
    let pred = theorem_oracle(&graph);
    if !pred.in_regime {
        eprintln!("note: graph is outside n > 3, |E| > 2");
    }
    // missed: oracle predicts it, reconstruction lacks it.
    let diff = edge_diff(&pred.predicted, &ghat)?;
    if diff.is_empty() {
        println!(
            "agree: reconstruction matches oracle prediction ({} edges)",
            ghat.edge_count()
        );
        Ok(())
    } else {
        println!("mismatch between reconstruction and oracle prediction");
        print_diff(&diff, &labels, "oracle-only", "reconstruction-only");
        Err(Failure::Mismatch)
    }
}

fn diff_cmd(truth: &Path, estimate: &Path) -> CmdResult {
    let t = read_graph_file(truth)?;
    let e = read_graph_file(estimate)?;
    let labels = t.labels.union(&e.labels);
    let lift = |lg: &LabeledGraph| -> Result<Graph, Error> {
        match &labels {
            LabelMap::Identity(n) => lg.graph.with_vertex_count(*n),
            _ => {
                let ids = lg.labels.translate_into(&labels);
                Graph::new(
                    labels.len(),
                    lg.graph.edges().into_iter().map(|(u, v)| (ids[u], ids[v])),
                )
            }
        }
    };
    let diff = edge_diff(&lift(&t)?, &lift(&e)?)?;
    println!(
        "missed {} false_alarms {}",
        diff.missed.len(),
        diff.false_alarms.len()
    );
    print_diff(&diff, &labels, "missed", "false-alarm");
    if diff.is_empty() {
        Ok(())
    } else {
        Err(Failure::Mismatch)
    }
}

fn describe(d: &Disagreement) -> String {
    format!(
        "graph {:?}; oracle-only {:?}; reconstruction-only {:?}",
        d.graph.edges(),
        d.diff.missed,
        d.diff.false_alarms
    )
}

fn scan(mode: &ScanMode) -> CmdResult {
    let report = oracle_equivalence_scan(mode)?;
    println!("graphs {}", report.graphs);
    println!("in_regime {}", report.in_regime);
    println!("counterexamples {}", report.counterexamples.len());
    println!(
        "boundary_disagreements {}",
        report.boundary_disagreements.len()
    );
    println!("lemma1_violations {}", report.lemma1_violations);
    println!("lemma2_violations {}", report.lemma2_violations);
    println!("lemma3_violations {}", report.lemma3_violations);
    println!("infeasible {}", report.infeasible);
    for d in &report.counterexamples {
        println!("counterexample: {}", describe(d));
        for diag in &d.diagnoses {
            println!("  {diag:?}");
        }
    }
    for d in &report.boundary_disagreements {
        println!("boundary: {}", describe(d));
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Mismatch)
    }
}
