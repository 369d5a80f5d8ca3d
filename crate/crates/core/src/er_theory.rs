//! Closed-form miss and false-alarm probabilities for reconstructing an
//! Erdős–Rényi graph G(n, p) from all of its size-3 traces.
//!
//! Every sum runs over `k = 0..=n-2`. Each term is assembled in the log
//! domain (log-binomial plus log-powers) and exponentiated, and the terms are
//! accumulated with Neumaier compensated summation.

use statrs::function::factorial::ln_binomial;

use crate::error::{Error, Result};

/// Slack allowed when a sum lands just outside [0, 1] before it is clamped.
pub const CLAMP_SLACK: f64 = 1e-9;

/// Order in which series terms are accumulated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SumOrder {
    Ascending,
    Descending,
}

fn validate(n: usize, p: f64) -> Result<()> {
    if n < 3 {
        return Err(Error::TheoryDomain(n));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability(p));
    }
    Ok(())
}

/// Neumaier's variant of Kahan summation.
fn compensated_sum<I: IntoIterator<Item = f64>>(terms: I) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for x in terms {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

fn sum_terms(terms: Vec<f64>, order: SumOrder, what: &'static str) -> Result<f64> {
    let value = match order {
        SumOrder::Ascending => compensated_sum(terms.iter().copied()),
        SumOrder::Descending => compensated_sum(terms.iter().rev().copied()),
    };
    clamp_probability(value, what)
}

fn clamp_probability(value: f64, what: &'static str) -> Result<f64> {
    if !(-CLAMP_SLACK..=1.0 + CLAMP_SLACK).contains(&value) {
        return Err(Error::ProbabilityOverflow { what, value });
    }
    Ok(value.clamp(0.0, 1.0))
}

/// `ln(base^exp)` with `0^0 = 1`.
#[inline]
fn ln_pow(base: f64, exp: u64) -> f64 {
    if exp == 0 {
        0.0
    } else {
        exp as f64 * base.ln()
    }
}

/// `(1-p)^m`, accurate for small p.
#[inline]
fn q_pow(p: f64, m: u64) -> f64 {
    if m == 0 {
        1.0
    } else if p >= 1.0 {
        0.0
    } else {
        (m as f64 * (-p).ln_1p()).exp()
    }
}

/// `1 - (1-p)^m`, accurate when `(1-p)^m` is close to 1.
#[inline]
fn one_minus_q_pow(p: f64, m: u64) -> f64 {
    if m == 0 {
        0.0
    } else if p >= 1.0 {
        1.0
    } else {
        -(m as f64 * (-p).ln_1p()).exp_m1()
    }
}

/// `2k ln(1-p)` handled through `ln_1p`, `0^0 = 1`.
#[inline]
fn ln_q_pow(p: f64, m: u64) -> f64 {
    if m == 0 {
        0.0
    } else if p >= 1.0 {
        f64::NEG_INFINITY
    } else {
        m as f64 * (-p).ln_1p()
    }
}

fn unique_neighbor_terms(n: usize, p: f64) -> Vec<f64> {
    let m = (n - 2) as u64;
    (0..=m)
        .map(|k| {
            let ln = ln_binomial(m, k) + ln_q_pow(p, 2 * k) + ln_pow(p, 2 * (m - k));
            ln.exp()
        })
        .collect()
}

/// Probability that an edge has no vertex adjacent to exactly one endpoint:
/// `sum_k C(n-2,k) (1-p)^{2k} p^{2(n-2-k)}`.
pub fn prob_unique_neighbor_fails(n: usize, p: f64) -> Result<f64> {
    prob_unique_neighbor_fails_ordered(n, p, SumOrder::Ascending)
}

pub fn prob_unique_neighbor_fails_ordered(n: usize, p: f64, order: SumOrder) -> Result<f64> {
    validate(n, p)?;
    sum_terms(unique_neighbor_terms(n, p), order, "P(no unique neighbor)")
}

/// The binomial-theorem form `((1-p)^2 + p^2)^{n-2}` of the same quantity.
pub fn prob_unique_neighbor_fails_closed_form(n: usize, p: f64) -> Result<f64> {
    validate(n, p)?;
    let q = 1.0 - p;
    Ok((q * q + p * p).powi((n - 2) as i32))
}

fn missed_terms(n: usize, p: f64) -> Vec<f64> {
    let m = (n - 2) as u64;
    (0..=m)
        .map(|k| {
            let e = m - k;
            let ln_base = if e == 0 {
                0.0
            } else {
                let base = p * p * one_minus_q_pow(p, k);
                e as f64 * base.ln()
            };
            (ln_binomial(m, k) + ln_q_pow(p, 2 * k) + ln_base).exp()
        })
        .collect()
}

/// Probability that a true edge is absent from the reconstruction:
/// `sum_k C(n-2,k) (1-p)^{2k} (p^2 (1-(1-p)^k))^{n-2-k}`.
pub fn prob_missed_detection(n: usize, p: f64) -> Result<f64> {
    prob_missed_detection_ordered(n, p, SumOrder::Ascending)
}

pub fn prob_missed_detection_ordered(n: usize, p: f64, order: SumOrder) -> Result<f64> {
    validate(n, p)?;
    sum_terms(missed_terms(n, p), order, "P(miss)")
}

fn check_k(n: usize, k: usize) -> Result<u64> {
    if n < 2 || k > n - 2 {
        return Err(Error::IndexRange("k", n.saturating_sub(2)));
    }
    Ok((n - 2 - k) as u64)
}

/// Probability that at least one endpoint of a non-edge with `k` common
/// neighbors has no private neighbor: `1 - (1-(1-p)^{n-2-k})^2`.
pub fn coef_a(n: usize, p: f64, k: usize) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability(p));
    }
    let m = check_k(n, k)?;
    // 1 - c^2 = (1 - c)(1 + c) with c = 1 - (1-p)^m.
    let q = q_pow(p, m);
    Ok(q * (2.0 - q))
}

/// Probability that none of the `k` common neighbors reaches outside the
/// common neighborhood: `1 - (1-(1-p)^{n-2-k})^k`.
pub fn coef_b(n: usize, p: f64, k: usize) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability(p));
    }
    let m = check_k(n, k)?;
    if k == 0 {
        return Ok(0.0);
    }
    let q = q_pow(p, m);
    if q >= 1.0 {
        return Ok(1.0);
    }
    // 1 - (1-q)^k, accurate for small q.
    Ok(-(k as f64 * (-q).ln_1p()).exp_m1())
}

fn false_alarm_terms(n: usize, p: f64) -> Result<Vec<f64>> {
    let m = (n - 2) as u64;
    (0..=m)
        .map(|k| {
            let a = coef_a(n, p, k as usize)?;
            let b = coef_b(n, p, k as usize)?;
            if a == 0.0 || b == 0.0 {
                return Ok(0.0);
            }
            Ok((ln_binomial(m, k) + ln_pow(p, 2 * k) + a.ln() + b.ln()).exp())
        })
        .collect()
}

/// Probability that a non-edge is inserted by the reconstruction:
/// `sum_k C(n-2,k) p^{2k} A(n,p,k) B(n,p,k)`.
///
/// At `p = 1` the formula evaluates to 1 (its `k = n-2` term); the quantity
/// is only meaningful for `p < 1`, where non-edges exist.
pub fn prob_false_alarm(n: usize, p: f64) -> Result<f64> {
    prob_false_alarm_ordered(n, p, SumOrder::Ascending)
}

pub fn prob_false_alarm_ordered(n: usize, p: f64, order: SumOrder) -> Result<f64> {
    validate(n, p)?;
    sum_terms(false_alarm_terms(n, p)?, order, "P(false alarm)")
}

/// Analytic per-pair error rates for G(n, p).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErRates {
    pub n: usize,
    pub p: f64,
    pub p_miss: f64,
    pub p_fa: f64,
    /// `p * p_miss + (1 - p) * p_fa`
    pub p_err: f64,
}

pub fn edge_error_rate(n: usize, p: f64) -> Result<ErRates> {
    let p_miss = prob_missed_detection(n, p)?;
    let p_fa = prob_false_alarm(n, p)?;
    let p_err = clamp_probability(p * p_miss + (1.0 - p) * p_fa, "edge error rate")?;
    Ok(ErRates {
        n,
        p,
        p_miss,
        p_fa,
        p_err,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        if a == b {
            0.0
        } else {
            (a - b).abs() / a.abs().max(b.abs())
        }
    }

    #[test]
    fn unique_neighbor_half() {
        for n in 3..40 {
            let v = prob_unique_neighbor_fails(n, 0.5).unwrap();
            assert!(rel(v, 0.5f64.powi(n as i32 - 2)) < 1e-12, "n={n}");
        }
        assert_eq!(prob_unique_neighbor_fails(7, 0.0).unwrap(), 1.0);
        assert_eq!(prob_unique_neighbor_fails(7, 1.0).unwrap(), 1.0);
    }

    #[test]
    fn missed_small_case() {
        // Terms k=0,1,2: 0 + 2*(1/4)*(1/8) + 1/16.
        let v = prob_missed_detection(4, 0.5).unwrap();
        assert!((v - 0.125).abs() < 1e-12);
        for n in 3..30 {
            assert_eq!(prob_missed_detection(n, 1.0).unwrap(), 0.0);
            assert_eq!(prob_missed_detection(n, 0.0).unwrap(), 1.0);
            assert!(prob_missed_detection(n, 1e-9).unwrap() > 1.0 - 1e-6);
        }
    }

    #[test]
    fn coefficients() {
        assert!((coef_a(10, 0.5, 4).unwrap() - 0.12109375).abs() < 1e-15);
        for n in 3..12 {
            for &p in &[0.0, 0.3, 0.9, 1.0] {
                assert_eq!(coef_b(n, p, 0).unwrap(), 0.0);
            }
            for k in 0..n - 2 {
                assert_eq!(coef_a(n, 1.0, k).unwrap(), 0.0);
            }
        }
        assert_eq!(coef_a(5, 0.5, 4), Err(Error::IndexRange("k", 3)));
        assert!(coef_b(5, 0.5, 4).is_err());
    }

    #[test]
    fn false_alarm_boundaries() {
        for n in 3..30 {
            assert_eq!(prob_false_alarm(n, 0.0).unwrap(), 0.0);
            // Only the k = n-2 term survives at p = 1.
            assert!((prob_false_alarm(n, 1.0).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn frozen_values() {
        // Exact rational evaluation of each series.
        let cases = [
            (4, 0.5, 0.125, 0.25),
            (20, 0.5, 3.6046942620693213e-06, 6.597312961245052e-05),
            (10, 0.1, 0.19502489765447695, 0.029598867579271677),
            (50, 0.8, 4.53400893957839e-09, 5.047477925343355e-07),
            (200, 0.5, 2.4892061111444567e-60, 4.928628100066024e-58),
        ];
        for (n, p, miss, fa) in cases {
            let r = edge_error_rate(n, p).unwrap();
            assert!(
                rel(r.p_miss, miss) < 1e-10,
                "miss n={n} p={p}: {}",
                r.p_miss
            );
            assert!(rel(r.p_fa, fa) < 1e-10, "fa n={n} p={p}: {}", r.p_fa);
            assert!(rel(r.p_err, p * miss + (1.0 - p) * fa) < 1e-10);
        }
    }

    #[test]
    fn error_rate_composition() {
        let r = edge_error_rate(12, 0.0).unwrap();
        assert_eq!(r.p_err, 0.0);
        let r = edge_error_rate(4, 0.5).unwrap();
        assert!((r.p_err - (0.5 * 0.125 + 0.5 * 0.25)).abs() < 1e-12);
    }

    #[test]
    fn domain_errors() {
        assert_eq!(prob_missed_detection(2, 0.5), Err(Error::TheoryDomain(2)));
        assert_eq!(
            prob_false_alarm(5, 1.2),
            Err(Error::InvalidProbability(1.2))
        );
        assert!(clamp_probability(1.0 + 1e-10, "x").is_ok());
        assert!(clamp_probability(1.0 + 1e-6, "x").is_err());
    }

    #[test]
    fn summation_order_agrees() {
        for n in [3, 10, 57, 120, 200] {
            for i in 0..=10 {
                let p = i as f64 / 10.0;
                let pairs = [
                    (
                        prob_missed_detection_ordered(n, p, SumOrder::Ascending).unwrap(),
                        prob_missed_detection_ordered(n, p, SumOrder::Descending).unwrap(),
                    ),
                    (
                        prob_false_alarm_ordered(n, p, SumOrder::Ascending).unwrap(),
                        prob_false_alarm_ordered(n, p, SumOrder::Descending).unwrap(),
                    ),
                ];
                for (a, b) in pairs {
                    assert!(rel(a, b) < 1e-12, "n={n} p={p}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn error_rate_decays() {
        for p in [0.1, 0.5, 0.8] {
            let rates: Vec<f64> = (30..=200)
                .map(|n| edge_error_rate(n, p).unwrap().p_err)
                .collect();
            assert!(rates.windows(2).all(|w| w[1] < w[0]), "p={p}");
            assert!(*rates.last().unwrap() < 1e-6);
        }
    }
}
