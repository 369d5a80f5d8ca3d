//! Seeded Monte Carlo runs over G(n, p) and the exhaustive check that the
//! structural oracle and the reconstruction agree.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::er_theory::edge_error_rate;
use crate::error::{Error, Result};
use crate::graph::{edge_diff, EdgeDiff, Graph};
use crate::reconstruct::{
    check_lemma2, check_lemma3, cooccurrence_matrix, is_feasible, Reconstructor,
};
use crate::structure::{in_assumption_regime, theorem_oracle, PairDiagnosis};
use crate::traces::{check_lemma1, trace_set};

#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Probability rounded to thousandths, used as a seed component.
pub fn milli(p: f64) -> u64 {
    (p * 1000.0).round() as u64
}

/// Trial seed as a pure function of the run coordinates.
pub fn trial_seed(master_seed: u64, n: usize, p: f64, trial: u64) -> u64 {
    let mut h = splitmix64(master_seed);
    h = splitmix64(h ^ n as u64);
    h = splitmix64(h ^ milli(p));
    splitmix64(h ^ trial)
}

/// Edge tallies for one sampled graph.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialResult {
    pub n: usize,
    pub p: f64,
    pub seed: u64,
    pub edges_in_g: usize,
    pub missed: usize,
    pub false_alarms: usize,
    pub non_edges: usize,
}

/// Sample G(n, p) with `seed`, reconstruct it from its size-3 traces and
/// count the errors.
pub fn run_trial(n: usize, p: f64, seed: u64) -> Result<TrialResult> {
    if n < 3 {
        return Err(Error::TooFewVertices {
            family: "trial",
            min: 3,
            n,
        });
    }
    let g = Graph::sample_er(n, p, seed)?;
    let ts = trace_set(&g, 3)?;
    let ghat = Reconstructor::default().run_graph(&ts, n)?;
    let diff = edge_diff(&g, &ghat)?;
    Ok(TrialResult {
        n,
        p,
        seed,
        edges_in_g: g.edge_count(),
        missed: diff.missed.len(),
        false_alarms: diff.false_alarms.len(),
        non_edges: g.pair_count() - g.edge_count(),
    })
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub n_values: Vec<usize>,
    pub p_values: Vec<f64>,
    pub trials: usize,
    pub master_seed: u64,
    /// Worker threads; 1 runs serially, 0 uses every available core.
    pub jobs: usize,
}

impl SweepConfig {
    /// n = 10, 20, ..., 100 and p = 0.1, 0.5, 0.8 with 50 trials each.
    pub fn default_grid(master_seed: u64) -> Self {
        SweepConfig {
            n_values: (1..=10).map(|i| 10 * i).collect(),
            p_values: vec![0.1, 0.5, 0.8],
            trials: 50,
            master_seed,
            jobs: 0,
        }
    }
}

/// Pooled empirical rates beside the analytic ones for one `(n, p)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub n: usize,
    pub p: f64,
    pub trials: usize,
    pub emp_miss_rate: f64,
    pub emp_fa_rate: f64,
    pub emp_err_rate: f64,
    pub theory_miss: f64,
    pub theory_fa: f64,
    pub theory_err: f64,
    /// Binomial standard error of `emp_err_rate` over all pooled pairs.
    pub emp_std_err: f64,
    pub total_edges: usize,
    pub total_non_edges: usize,
    pub total_missed: usize,
    pub total_false_alarms: usize,
}

fn binomial_se(rate: f64, count: usize) -> f64 {
    if count == 0 {
        0.0
    } else {
        (rate * (1.0 - rate) / count as f64).sqrt()
    }
}

impl SweepRow {
    pub fn miss_std_err(&self) -> f64 {
        binomial_se(self.emp_miss_rate, self.total_edges)
    }

    pub fn fa_std_err(&self) -> f64 {
        binomial_se(self.emp_fa_rate, self.total_non_edges)
    }

    fn from_trials(n: usize, p: f64, results: &[TrialResult]) -> Result<Self> {
        let total_edges: usize = results.iter().map(|r| r.edges_in_g).sum();
        let total_non_edges: usize = results.iter().map(|r| r.non_edges).sum();
        let total_missed: usize = results.iter().map(|r| r.missed).sum();
        let total_false_alarms: usize = results.iter().map(|r| r.false_alarms).sum();
        let ratio = |num: usize, den: usize| {
            if den == 0 {
                0.0
            } else {
                num as f64 / den as f64
            }
        };
        let pairs = total_edges + total_non_edges;
        let emp_err_rate = ratio(total_missed + total_false_alarms, pairs);
        let theory = edge_error_rate(n, p)?;
        Ok(SweepRow {
            n,
            p,
            trials: results.len(),
            emp_miss_rate: ratio(total_missed, total_edges),
            emp_fa_rate: ratio(total_false_alarms, total_non_edges),
            emp_err_rate,
            theory_miss: theory.p_miss,
            theory_fa: theory.p_fa,
            theory_err: theory.p_err,
            emp_std_err: binomial_se(emp_err_rate, pairs),
            total_edges,
            total_non_edges,
            total_missed,
            total_false_alarms,
        })
    }
}

/// Run `trials` seeded trials per `(n, p)`. Output does not depend on the
/// worker count: seeds come from [`trial_seed`] and tallies are integers.
pub fn sweep(config: &SweepConfig) -> Result<Vec<SweepRow>> {
    if config.trials == 0 {
        return Err(Error::IndexRange("trials", usize::MAX));
    }
    let cells: Vec<(usize, f64)> = config
        .n_values
        .iter()
        .flat_map(|&n| config.p_values.iter().map(move |&p| (n, p)))
        .collect();
    let jobs: Vec<(usize, f64, u64)> = cells
        .iter()
        .flat_map(|&(n, p)| {
            (0..config.trials as u64).map(move |t| (n, p, trial_seed(config.master_seed, n, p, t)))
        })
        .collect();

    let results: Vec<TrialResult> = if config.jobs == 1 {
        jobs.iter()
            .map(|&(n, p, seed)| run_trial(n, p, seed))
            .collect::<Result<_>>()?
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.jobs)
            .build()
            .map_err(|e| Error::Io(e.to_string()))?;
        pool.install(|| {
            jobs.par_iter()
                .map(|&(n, p, seed)| run_trial(n, p, seed))
                .collect::<Result<_>>()
        })?
    };

    results
        .chunks(config.trials)
        .zip(&cells)
        .map(|(chunk, &(n, p))| SweepRow::from_trials(n, p, chunk))
        .collect()
}

/// Format like C's `%.{digits}g`.
pub fn fmt_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci
        .split_once('e')
        .expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("exponent is an integer");
    if exp < -4 || exp >= digits as i32 {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub const SWEEP_HEADER: &str =
    "n,p,trials,emp_miss,emp_fa,emp_err,theory_miss,theory_fa,theory_err,emp_stderr";

pub fn write_sweep_csv<W: Write>(w: &mut W, rows: &[SweepRow]) -> Result<()> {
    writeln!(w, "{SWEEP_HEADER}")?;
    for r in rows {
        let floats = [
            r.emp_miss_rate,
            r.emp_fa_rate,
            r.emp_err_rate,
            r.theory_miss,
            r.theory_fa,
            r.theory_err,
            r.emp_std_err,
        ]
        .map(|x| fmt_sig(x, 9));
        writeln!(
            w,
            "{},{},{},{}",
            r.n,
            fmt_sig(r.p, 9),
            r.trials,
            floats.join(",")
        )?;
    }
    Ok(())
}

/// Which graphs the equivalence scan visits.
#[derive(Debug, Clone, PartialEq)]
pub enum ScanMode {
    /// Every labeled graph on `n` vertices (`n <= 7`).
    Exhaustive(usize),
    Random {
        n_min: usize,
        n_max: usize,
        p_min: f64,
        p_max: f64,
        samples: usize,
        seed: u64,
    },
}

/// A graph where the reconstruction and the oracle prediction differ.
#[derive(Debug, Clone, PartialEq)]
pub struct Disagreement {
    pub graph: Graph,
    /// `missed`: predicted by the oracle but not reconstructed;
    /// `false_alarms`: reconstructed but not predicted.
    pub diff: EdgeDiff,
    /// Diagnoses of the disagreeing pairs.
    pub diagnoses: Vec<PairDiagnosis>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScanReport {
    pub graphs: usize,
    pub in_regime: usize,
    /// Disagreements inside `n > 3, |E| > 2`.
    pub counterexamples: Vec<Disagreement>,
    /// Disagreements outside it (informational).
    pub boundary_disagreements: Vec<Disagreement>,
    pub lemma1_violations: usize,
    pub lemma2_violations: usize,
    pub lemma3_violations: usize,
    pub infeasible: usize,
}

impl ScanReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
            && self.lemma1_violations == 0
            && self.lemma2_violations == 0
            && self.lemma3_violations == 0
            && self.infeasible == 0
    }
}

struct GraphCheck {
    in_regime: bool,
    disagreement: Option<Disagreement>,
    lemma1: usize,
    lemma2: usize,
    lemma3: usize,
    infeasible: bool,
}

fn check_graph(g: Graph) -> Result<GraphCheck> {
    let n = g.vertex_count();
    let ts = trace_set(&g, 3)?;
    let m = cooccurrence_matrix(&ts, n)?;
    let ghat = Reconstructor::default().run_graph(&ts, n)?;
    let oracle = theorem_oracle(&g);
    let diff = edge_diff(&oracle.predicted, &ghat)?;
    let lemma1 = check_lemma1(&ts, &g)?.violations.len();
    let lemma2 = check_lemma2(&ts, &m, &ghat)?.len();
    let lemma3 = check_lemma3(&g, &ghat).len();
    let infeasible = !is_feasible(&ts, &ghat);
    let disagreement = if diff.is_empty() {
        None
    } else {
        let diagnoses = oracle
            .diagnoses
            .iter()
            .filter(|d| {
                diff.missed.contains(&(d.v1, d.v2)) || diff.false_alarms.contains(&(d.v1, d.v2))
            })
            .copied()
            .collect();
        Some(Disagreement {
            graph: g.clone(),
            diff,
            diagnoses,
        })
    };
    Ok(GraphCheck {
        in_regime: in_assumption_regime(&g),
        disagreement,
        lemma1,
        lemma2,
        lemma3,
        infeasible,
    })
}

/// Graph number `mask` on `n` vertices: bit `i` selects the `i`-th pair in
/// lexicographic order.
pub fn graph_from_mask(n: usize, mask: u64) -> Graph {
    let edges = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, e)| e);
    Graph::new(n, edges).expect("pairs are in range")
}

/// Compare the reconstruction with the oracle on every graph of `mode`, and
/// run the lemma validators on the same corpus.
pub fn oracle_equivalence_scan(mode: &ScanMode) -> Result<ScanReport> {
    let checks: Vec<GraphCheck> = match *mode {
        ScanMode::Exhaustive(n) => {
            if n > 7 {
                return Err(Error::IndexRange("exhaustive scan n", 7));
            }
            let pairs = n * n.saturating_sub(1) / 2;
            (0..1u64 << pairs)
                .into_par_iter()
                .map(|mask| check_graph(graph_from_mask(n, mask)))
                .collect::<Result<_>>()?
        }
        ScanMode::Random {
            n_min,
            n_max,
            p_min,
            p_max,
            samples,
            seed,
        } => {
            if n_min > n_max || n_min < 1 {
                return Err(Error::IndexRange("n_min", n_max));
            }
            for p in [p_min, p_max] {
                if !(0.0..=1.0).contains(&p) || p_min > p_max {
                    return Err(Error::InvalidProbability(p));
                }
            }
            (0..samples as u64)
                .into_par_iter()
                .map(|i| {
                    let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(seed ^ splitmix64(i)));
                    let n = rng.gen_range(n_min..=n_max);
                    let p = rng.gen_range(p_min..=p_max);
                    check_graph(Graph::sample_er(n, p, rng.gen())?)
                })
                .collect::<Result<_>>()?
        }
    };

    let mut report = ScanReport {
        graphs: checks.len(),
        ..ScanReport::default()
    };
    for c in checks {
        report.in_regime += usize::from(c.in_regime);
        report.lemma1_violations += c.lemma1;
        report.lemma2_violations += c.lemma2;
        report.lemma3_violations += c.lemma3;
        report.infeasible += usize::from(c.infeasible);
        if let Some(d) = c.disagreement {
            if c.in_regime {
                report.counterexamples.push(d);
            } else {
                report.boundary_disagreements.push(d);
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trial_extremes() {
        for n in [4, 9, 17] {
            for seed in 0..5 {
                let r = run_trial(n, 0.0, seed).unwrap();
                assert_eq!((r.edges_in_g, r.missed, r.false_alarms), (0, 0, 0));
                assert_eq!(r.non_edges, n * (n - 1) / 2);
                let r = run_trial(n, 1.0, seed).unwrap();
                assert_eq!((r.missed, r.false_alarms, r.non_edges), (0, 0, 0));
            }
        }
        assert!(run_trial(2, 0.5, 0).is_err());
    }

    #[test]
    fn trial_is_replayable() {
        let a = run_trial(20, 0.5, 42).unwrap();
        assert_eq!(a, run_trial(20, 0.5, 42).unwrap());
        assert_eq!(a.edges_in_g + a.non_edges, 190);
        assert!(a.missed <= a.edges_in_g && a.false_alarms <= a.non_edges);
    }

    #[test]
    fn seeds_separate_coordinates() {
        let s = trial_seed(1, 10, 0.5, 0);
        assert_ne!(s, trial_seed(2, 10, 0.5, 0));
        assert_ne!(s, trial_seed(1, 11, 0.5, 0));
        assert_ne!(s, trial_seed(1, 10, 0.501, 0));
        assert_ne!(s, trial_seed(1, 10, 0.5, 1));
        assert_eq!(s, trial_seed(1, 10, 0.5, 0));
    }

    #[test]
    fn significant_digit_format() {
        assert_eq!(fmt_sig(0.0, 9), "0");
        assert_eq!(fmt_sig(0.1, 9), "0.1");
        assert_eq!(fmt_sig(0.125, 9), "0.125");
        assert_eq!(fmt_sig(1.0 / 3.0, 9), "0.333333333");
        assert_eq!(fmt_sig(3.6046942620693213e-06, 9), "3.60469426e-06");
        assert_eq!(fmt_sig(0.0001234567891, 9), "0.000123456789");
        assert_eq!(fmt_sig(123456789.4, 9), "123456789");
        assert_eq!(fmt_sig(1234567890.0, 9), "1.23456789e+09");
        assert_eq!(fmt_sig(0.9999999999, 9), "1");
    }

    #[test]
    fn sweep_serial_equals_parallel() {
        let mut cfg = SweepConfig {
            n_values: vec![8, 12],
            p_values: vec![0.2, 0.7],
            trials: 6,
            master_seed: 99,
            jobs: 1,
        };
        let serial = sweep(&cfg).unwrap();
        cfg.jobs = 4;
        let parallel = sweep(&cfg).unwrap();
        assert_eq!(serial, parallel);
        assert_eq!(serial.len(), 4);
        assert_eq!((serial[0].n, serial[0].p), (8, 0.2));
        assert_eq!((serial[1].n, serial[1].p), (8, 0.7));
        let mut a = Vec::new();
        let mut b = Vec::new();
        write_sweep_csv(&mut a, &serial).unwrap();
        write_sweep_csv(&mut b, &parallel).unwrap();
        assert_eq!(a, b);
        assert!(String::from_utf8(a).unwrap().starts_with(SWEEP_HEADER));
    }

    #[test]
    fn sweep_rejects_zero_trials() {
        let cfg = SweepConfig {
            n_values: vec![5],
            p_values: vec![0.5],
            trials: 0,
            master_seed: 0,
            jobs: 1,
        };
        assert!(sweep(&cfg).is_err());
    }

    #[test]
    fn mask_enumeration() {
        assert_eq!(graph_from_mask(4, 0).edge_count(), 0);
        assert_eq!(graph_from_mask(4, 0b111111), Graph::complete(4));
        assert_eq!(graph_from_mask(4, 0b1).edges(), vec![(0, 1)]);
        assert_eq!(graph_from_mask(4, 0b100000).edges(), vec![(2, 3)]);
    }

    #[test]
    fn small_exhaustive_scan() {
        let report = oracle_equivalence_scan(&ScanMode::Exhaustive(4)).unwrap();
        assert_eq!(report.graphs, 64);
        assert!(report.passed(), "{report:?}");
    }
}
