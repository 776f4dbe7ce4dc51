//! Numerical checks of the steps that carry the heavy-tailed part of the
//! law of large numbers: truncated p-th power series, the ceiling bound,
//! the Kronecker transfer and the end-to-end statement for `Σ_{k ≤ κ(n)} Y_k`.

use std::fmt::Write as _;
use std::io::Write;
use std::ops::RangeInclusive;

use rayon::prelude::*;

use crate::conditions::{moment_check_y, MomentCheck, Verdict};
use crate::config::ExperimentConfig;
use crate::diagnostics::{
    check_budget, decade_pairs, decide, ratio, resolve_budget, simulate_paths, tail_sup_statistic,
    ConvergenceVerdict, DecadeDecay, PathSpec, QuantileRow,
};
use crate::error::Result;
use crate::generators::{YModel, YSampler};
use crate::rng::{SeedStream, StreamTag};
use crate::schedule::{build_schedule, MixSchedule};
use crate::stats::ceil_tol;
use crate::summation::CompensatedSum;

const CHUNK: usize = 4096;
/// Relative size of the last-decade increment below which a series counts
/// as stabilized.
pub const STABLE_INCREMENT: f64 = 0.01;
/// Fraction of replicas that must show the series evidence.
pub const REPLICA_FRACTION: f64 = 0.95;
/// Bound on the normalized sum at the horizon.
pub const VANISHING_LEVEL: f64 = 1e-2;

/// Streaming accumulator for `Σ min(V_n^p / n^{p+eps}, 1)` with `V_n = |Y_n|^a`.
#[derive(Debug, Clone)]
pub struct TruncatedSeries {
    a: f64,
    p: f64,
    eps: f64,
    truncated: CompensatedSum,
    raw: CompensatedSum,
    saturated: u64,
}

impl TruncatedSeries {
    pub fn new(a: f64, p: f64, eps: f64) -> Self {
        Self {
            a,
            p,
            eps,
            truncated: CompensatedSum::new(),
            raw: CompensatedSum::new(),
            saturated: 0,
        }
    }

    /// Adds the term for index `n`; returns `(truncated, raw)` terms.
    #[inline]
    pub fn push(&mut self, n: u64, y: f64) -> (f64, f64) {
        let v = y.abs().powf(self.a);
        let raw = v.powf(self.p) / (n as f64).powf(self.p + self.eps);
        // min(V, n^{1+eps/p})^p / n^{p+eps} = min(raw, 1)
        let truncated = raw.min(1.0);
        if raw > 1.0 {
            self.saturated += 1;
        }
        self.truncated.add(truncated);
        self.raw.add(raw);
        (truncated, raw)
    }

    pub fn truncated_sum(&self) -> f64 {
        self.truncated.value()
    }

    pub fn raw_sum(&self) -> f64 {
        self.raw.value()
    }

    pub fn saturation_count(&self) -> u64 {
        self.saturated
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TruncationDiagnostics {
    pub a: f64,
    pub p: f64,
    pub eps: f64,
    pub checkpoints: Vec<u64>,
    pub partial_sums: Vec<f64>,
    pub raw_series_partial_sums: Vec<f64>,
    pub saturation_at_checkpoints: Vec<u64>,
    /// Saturated indices up to the last checkpoint.
    pub saturation_count: u64,
}

impl TruncationDiagnostics {
    /// `(S_N − S_{N/10}) / S_N` for the truncated series, when both
    /// checkpoints exist.
    pub fn last_decade_increment(&self) -> Option<f64> {
        last_decade(&self.checkpoints, &self.partial_sums).map(|(prev, last)| {
            if last > 0.0 {
                (last - prev) / last
            } else {
                0.0
            }
        })
    }
}

fn last_decade(checkpoints: &[u64], values: &[f64]) -> Option<(f64, f64)> {
    let n = *checkpoints.last()?;
    let j = checkpoints.binary_search(&(n / 10)).ok()?;
    Some((values[j], *values.last()?))
}

/// Truncated and raw series over a given path `y_path[n - 1] = Y_n`.
pub fn truncated_series(
    y_path: &[f64],
    a: f64,
    p: f64,
    eps: f64,
    checkpoints: &[u64],
) -> TruncationDiagnostics {
    let mut acc = TruncatedSeries::new(a, p, eps);
    let mut out = TruncationDiagnostics {
        a,
        p,
        eps,
        checkpoints: Vec::new(),
        partial_sums: Vec::new(),
        raw_series_partial_sums: Vec::new(),
        saturation_at_checkpoints: Vec::new(),
        saturation_count: 0,
    };
    let mut cp = checkpoints.iter().peekable();
    for (i, &y) in y_path.iter().enumerate() {
        let n = i as u64 + 1;
        acc.push(n, y);
        if cp.peek() == Some(&&n) {
            cp.next();
            out.checkpoints.push(n);
            out.partial_sums.push(acc.truncated_sum());
            out.raw_series_partial_sums.push(acc.raw_sum());
            out.saturation_at_checkpoints.push(acc.saturation_count());
        }
    }
    out.saturation_count = out.saturation_at_checkpoints.last().copied().unwrap_or(0);
    out
}

/// Streams `Y_1, ..., Y_N` of one replica in chunks.
fn stream_y(model: &YModel, seed: u64, replica: u64, horizon: u64, mut f: impl FnMut(u64, f64)) {
    let sampler = YSampler::new(model, SeedStream::new(seed, replica, StreamTag::Y));
    let mut buf = vec![0.0; CHUNK];
    let mut n = 1;
    while n <= horizon {
        let len = CHUNK.min((horizon - n + 1) as usize);
        sampler.fill(n, &mut buf[..len]);
        for (i, &y) in buf[..len].iter().enumerate() {
            f(n + i as u64, y);
        }
        n += len as u64;
    }
}

/// [`truncated_series`] on simulated Y-paths, one entry per replica.
pub fn truncation_experiment(
    model: &YModel,
    p: f64,
    checkpoints: &[u64],
    replicas: u64,
    seed: u64,
) -> Vec<TruncationDiagnostics> {
    let horizon = *checkpoints.last().unwrap_or(&0);
    (0..replicas)
        .into_par_iter()
        .map(|r| {
            let mut acc = TruncatedSeries::new(model.a, p, model.eps);
            let mut out = TruncationDiagnostics {
                a: model.a,
                p,
                eps: model.eps,
                checkpoints: checkpoints.to_vec(),
                partial_sums: Vec::with_capacity(checkpoints.len()),
                raw_series_partial_sums: Vec::with_capacity(checkpoints.len()),
                saturation_at_checkpoints: Vec::with_capacity(checkpoints.len()),
                saturation_count: 0,
            };
            let mut j = 0;
            stream_y(model, seed, r, horizon, |n, y| {
                acc.push(n, y);
                if j < checkpoints.len() && checkpoints[j] == n {
                    out.partial_sums.push(acc.truncated_sum());
                    out.raw_series_partial_sums.push(acc.raw_sum());
                    out.saturation_at_checkpoints.push(acc.saturation_count());
                    j += 1;
                }
            });
            out.saturation_count = acc.saturation_count();
            out
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CeilingBoundReport {
    pub p: f64,
    pub eps: f64,
    pub n_lo: u64,
    pub n_hi: u64,
    /// `max_n ⌈n^{1+eps/p}⌉^p / n^{p+eps}` over the range.
    pub max_value: f64,
    pub argmax: u64,
    pub bound: f64,
    pub holds: bool,
}

/// Exhaustive scan of `⌈n^{1+eps/p}⌉^p / n^{p+eps} ≤ 2^{p+eps}`.
pub fn ceiling_bound_check(p: f64, eps: f64, n_range: RangeInclusive<u64>) -> CeilingBoundReport {
    let (lo, hi) = (*n_range.start().max(&1), *n_range.end());
    let e = 1.0 + eps / p;
    let (max_value, argmax) = (lo..hi + 1)
        .into_par_iter()
        .map(|n| {
            let nf = n as f64;
            let m = ceil_tol(nf.powf(e));
            ((m.powf(p) / nf.powf(p + eps)), n)
        })
        .reduce(
            || (f64::NEG_INFINITY, 0),
            |a, b| {
                if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
                    b
                } else {
                    a
                }
            },
        );
    let bound = 2f64.powf(p + eps);
    CeilingBoundReport {
        p,
        eps,
        n_lo: lo,
        n_hi: hi,
        max_value,
        argmax,
        bound,
        holds: max_value <= bound,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KroneckerReport {
    pub checkpoints: Vec<u64>,
    /// `Σ_{k ≤ n} a_k / b_k`.
    pub weighted_series: Vec<f64>,
    /// `(1 / b_n) Σ_{k ≤ n} a_k`.
    pub normalized: Vec<f64>,
    /// Last normalized value below `1e-3` of the first.
    pub vanishing: bool,
}

/// Deterministic Kronecker transfer for sequences `a_k` and `b_k`.
pub fn kronecker_transfer(
    a: impl Fn(u64) -> f64,
    b: impl Fn(u64) -> f64,
    checkpoints: &[u64],
) -> KroneckerReport {
    let horizon = *checkpoints.last().unwrap_or(&0);
    let (mut ws, mut s) = (CompensatedSum::new(), CompensatedSum::new());
    let mut weighted_series = Vec::with_capacity(checkpoints.len());
    let mut normalized = Vec::with_capacity(checkpoints.len());
    let mut j = 0;
    for n in 1..=horizon {
        let (an, bn) = (a(n), b(n));
        ws.add(an / bn);
        s.add(an);
        if checkpoints.get(j) == Some(&n) {
            weighted_series.push(ws.value());
            normalized.push(s.value() / bn);
            j += 1;
        }
    }
    let vanishing = match (normalized.first(), normalized.last()) {
        (Some(f), Some(l)) => l.abs() <= 1e-3 * f.abs(),
        _ => false,
    };
    KroneckerReport {
        checkpoints: checkpoints.to_vec(),
        weighted_series,
        normalized,
        vanishing,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedSumTransfer {
    pub a: f64,
    pub eps: f64,
    pub checkpoints: Vec<u64>,
    /// `Σ_{n ≤ N} |Y_n| / n^{1/a + eps}`.
    pub weighted: Vec<f64>,
    /// `N^{-(eps + 1/a)} Σ_{k ≤ N} Y_k`.
    pub normalized: Vec<f64>,
    pub stabilizes: bool,
    pub vanishing: bool,
}

impl WeightedSumTransfer {
    pub fn holds(&self) -> bool {
        self.stabilizes && self.vanishing
    }
}

struct WeightedAcc {
    exponent: f64,
    weighted: CompensatedSum,
    sum: CompensatedSum,
}

impl WeightedAcc {
    fn new(a: f64, eps: f64) -> Self {
        Self {
            exponent: 1.0 / a + eps,
            weighted: CompensatedSum::new(),
            sum: CompensatedSum::new(),
        }
    }

    #[inline]
    fn push(&mut self, n: u64, y: f64) {
        self.weighted.add(y.abs() / (n as f64).powf(self.exponent));
        self.sum.add(y);
    }

    fn normalized(&self, n: u64) -> f64 {
        self.sum.value() / (n as f64).powf(self.exponent)
    }
}

fn finish_weighted(
    a: f64,
    eps: f64,
    checkpoints: &[u64],
    weighted: Vec<f64>,
    normalized: Vec<f64>,
) -> WeightedSumTransfer {
    let stabilizes = last_decade(checkpoints, &weighted)
        .is_some_and(|(prev, last)| last - prev <= STABLE_INCREMENT * last);
    let vanishing = match (last_decade(checkpoints, &normalized), normalized.last()) {
        (Some((prev, _)), Some(&last)) => {
            last.abs() <= VANISHING_LEVEL || last.abs() <= prev.abs() / 3.0
        }
        (None, Some(&last)) => last.abs() <= VANISHING_LEVEL,
        _ => false,
    };
    WeightedSumTransfer {
        a,
        eps,
        checkpoints: checkpoints.to_vec(),
        weighted,
        normalized,
        stabilizes,
        vanishing,
    }
}

/// The `p = 1/a` series and the normalized partial sum it controls, over a
/// given path.
pub fn weighted_sum_transfer(
    y_path: &[f64],
    a: f64,
    eps: f64,
    checkpoints: &[u64],
) -> WeightedSumTransfer {
    let mut acc = WeightedAcc::new(a, eps);
    let (mut w, mut k) = (Vec::new(), Vec::new());
    let mut cps = Vec::new();
    let mut it = checkpoints.iter().peekable();
    for (i, &y) in y_path.iter().enumerate() {
        let n = i as u64 + 1;
        acc.push(n, y);
        if it.peek() == Some(&&n) {
            it.next();
            cps.push(n);
            w.push(acc.weighted.value());
            k.push(acc.normalized(n));
        }
    }
    finish_weighted(a, eps, &cps, w, k)
}

/// [`weighted_sum_transfer`] on simulated Y-paths.
pub fn weighted_sum_experiment(
    model: &YModel,
    checkpoints: &[u64],
    replicas: u64,
    seed: u64,
) -> Vec<WeightedSumTransfer> {
    let horizon = *checkpoints.last().unwrap_or(&0);
    (0..replicas)
        .into_par_iter()
        .map(|r| {
            let mut acc = WeightedAcc::new(model.a, model.eps);
            let (mut w, mut k) = (Vec::new(), Vec::new());
            let mut j = 0;
            stream_y(model, seed, r, horizon, |n, y| {
                acc.push(n, y);
                if j < checkpoints.len() && checkpoints[j] == n {
                    w.push(acc.weighted.value());
                    k.push(acc.normalized(n));
                    j += 1;
                }
            });
            finish_weighted(model.a, model.eps, checkpoints, w, k)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct YPartReport {
    pub checkpoints: Vec<u64>,
    /// Quantiles of `|(1/n) Σ_{k ≤ κ(n)} Y_k|`.
    pub marginal: Vec<QuantileRow>,
    pub tail_sup: Vec<QuantileRow>,
    pub decades: Vec<DecadeDecay>,
    pub verdict: ConvergenceVerdict,
    pub reason: String,
    /// Per replica, the statistic at each checkpoint.
    pub statistic: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Copy)]
pub struct YPartSettings {
    pub replicas: u64,
    pub master_seed: u64,
    pub quantile: f64,
    pub decay_factor: f64,
}

/// Replica evidence that `(1/n) Σ_{k ≤ κ(n)} Y_k → 0`.
pub fn y_part_end_to_end(
    model: &YModel,
    schedule: &MixSchedule,
    checkpoints: &[u64],
    settings: YPartSettings,
) -> Result<YPartReport> {
    let spec = PathSpec {
        x: None,
        y: Some(model),
        schedule,
        checkpoints,
        master_seed: settings.master_seed,
        replicas: settings.replicas,
    };
    let traces = simulate_paths(&spec)?;
    let statistic: Vec<Vec<f64>> = traces
        .iter()
        .map(|t| {
            t.y_sum
                .iter()
                .zip(checkpoints)
                .map(|(s, &n)| s / n as f64)
                .collect()
        })
        .collect();
    let tails: Vec<Vec<f64>> = statistic.iter().map(|v| tail_sup_statistic(v)).collect();
    let q = settings.quantile;
    let rows = |src: &[Vec<f64>]| -> Vec<QuantileRow> {
        (0..checkpoints.len())
            .map(|j| {
                let mut col: Vec<f64> = src.iter().map(|r| r[j].abs()).collect();
                QuantileRow::of(&mut col, q)
            })
            .collect()
    };
    let marginal = rows(&statistic);
    let tail_sup = rows(&tails);
    let decades = decade_pairs(checkpoints)
        .into_iter()
        .map(|(i, j)| DecadeDecay {
            from_n: checkpoints[i],
            to_n: checkpoints[j],
            tail_sup: ratio(tail_sup[i].q_verdict, tail_sup[j].q_verdict),
            marginal: ratio(marginal[i].q_verdict, marginal[j].q_verdict),
        })
        .collect();
    let (verdict, reason) = decide(checkpoints, &marginal, &tail_sup, q, settings.decay_factor);
    Ok(YPartReport {
        checkpoints: checkpoints.to_vec(),
        marginal,
        tail_sup,
        decades,
        verdict,
        reason,
        statistic,
    })
}

/// Everything `validate-proof` reports for one configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ProofReport {
    pub p: f64,
    pub moment: MomentCheck,
    pub ceiling: Vec<CeilingBoundReport>,
    pub kronecker: KroneckerReport,
    pub truncation: Vec<TruncationDiagnostics>,
    /// Fraction of replicas whose truncated series grew by at most
    /// [`STABLE_INCREMENT`] over the last decade.
    pub truncation_stable_fraction: f64,
    pub mean_saturation: f64,
    pub weighted: Vec<WeightedSumTransfer>,
    pub weighted_fraction: f64,
    pub y_part: YPartReport,
    pub passed: bool,
}

/// Largest index scanned by the ceiling check.
pub const CEILING_SCAN: u64 = 1_000_000;

pub fn validate_proof(config: &ExperimentConfig) -> Result<ProofReport> {
    validate_proof_with_budget(config, resolve_budget(None, config)?)
}

pub fn validate_proof_with_budget(config: &ExperimentConfig, budget: u64) -> Result<ProofReport> {
    config.validate()?;
    check_budget(config.horizon, config.replicas, budget)?;
    let y = &config.y_model;
    let p = 1.0 / y.a;
    let cps = &config.checkpoints;
    let m = config.replicas;
    let seed = config.master_seed;

    let moment = moment_check_y(
        y,
        config.conditions.envelope_n_max,
        &config.conditions.quadrature,
    );
    let mut grid: Vec<(f64, f64)> = Vec::new();
    for pp in [1.5, 2.0, p] {
        for e in [0.0, 0.5, 1.0, y.eps] {
            if !grid.contains(&(pp, e)) {
                grid.push((pp, e));
            }
        }
    }
    let ceiling: Vec<CeilingBoundReport> = grid
        .into_iter()
        .map(|(pp, e)| ceiling_bound_check(pp, e, 1..=CEILING_SCAN))
        .collect();
    let harmonic_cps: Vec<u64> = (0..=6).map(|j| 10u64.pow(j)).collect();
    let kronecker = kronecker_transfer(|k| 1.0 / k as f64, |k| k as f64, &harmonic_cps);

    let truncation = truncation_experiment(y, p, cps, m, seed);
    let stable = truncation
        .iter()
        .filter(|t| {
            t.last_decade_increment()
                .is_some_and(|d| d <= STABLE_INCREMENT)
        })
        .count();
    let truncation_stable_fraction = stable as f64 / m as f64;
    let mean_saturation = truncation
        .iter()
        .map(|t| t.saturation_count as f64)
        .sum::<f64>()
        / m as f64;

    let weighted = weighted_sum_experiment(y, cps, m, seed);
    let weighted_fraction = weighted.iter().filter(|w| w.holds()).count() as f64 / m as f64;

    let schedule = build_schedule(config.schedule.clone(), config.horizon)?;
    let y_part = y_part_end_to_end(
        y,
        &schedule,
        cps,
        YPartSettings {
            replicas: m,
            master_seed: seed,
            quantile: config.quantile,
            decay_factor: config.decay_factor,
        },
    )?;

    let passed = moment.verdict == Verdict::Satisfied
        && ceiling.iter().all(|c| c.holds)
        && kronecker.vanishing
        && truncation_stable_fraction >= REPLICA_FRACTION
        && weighted_fraction >= REPLICA_FRACTION
        && y_part.verdict == ConvergenceVerdict::Converging;
    Ok(ProofReport {
        p,
        moment,
        ceiling,
        kronecker,
        truncation,
        truncation_stable_fraction,
        mean_saturation,
        weighted,
        weighted_fraction,
        y_part,
        passed,
    })
}

impl ProofReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "p: {}", self.p);
        let _ = writeln!(
            s,
            "moment: {} ({})",
            self.moment.verdict, self.moment.details
        );
        let _ = writeln!(
            s,
            "ceiling bound ceil(n^(1+eps/p))^p / n^(p+eps) <= 2^(p+eps):"
        );
        for c in &self.ceiling {
            let _ = writeln!(
                s,
                "  p={:<8} eps={:<5} n<={:<8} max={:.6} at n={} bound={:.6} {}",
                c.p,
                c.eps,
                c.n_hi,
                c.max_value,
                c.argmax,
                c.bound,
                if c.holds { "holds" } else { "FAILS" }
            );
        }
        let _ = writeln!(
            s,
            "kronecker (a_k = 1/k, b_n = n): H_n/n at n={} is {:.13e}, vanishing={}",
            self.kronecker.checkpoints.last().unwrap_or(&0),
            self.kronecker.normalized.last().unwrap_or(&f64::NAN),
            self.kronecker.vanishing
        );
        let _ = writeln!(
            s,
            "truncated series: mean saturation {:.4}; stable over last decade in {:.1}% of replicas (need {:.0}%)",
            self.mean_saturation,
            100.0 * self.truncation_stable_fraction,
            100.0 * REPLICA_FRACTION
        );
        let _ = writeln!(
            s,
            "weighted transfer: stabilizing and vanishing in {:.1}% of replicas (need {:.0}%)",
            100.0 * self.weighted_fraction,
            100.0 * REPLICA_FRACTION
        );
        let _ = writeln!(
            s,
            "end to end: {} ({})",
            self.y_part.verdict, self.y_part.reason
        );
        let _ = writeln!(s, "passed: {}", self.passed);
        s
    }

    /// One row per replica and checkpoint.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(w);
        out.write_record([
            "replica",
            "n",
            "truncated_sum",
            "raw_sum",
            "saturation_count",
            "weighted_sum",
            "normalized_sum",
            "kappa_mean",
            "checkpoint_index",
        ])?;
        for (r, (t, wt)) in self.truncation.iter().zip(&self.weighted).enumerate() {
            for (j, n) in t.checkpoints.iter().enumerate() {
                out.write_record([
                    r.to_string(),
                    n.to_string(),
                    format!("{:e}", t.partial_sums[j]),
                    format!("{:e}", t.raw_series_partial_sums[j]),
                    t.saturation_at_checkpoints[j].to_string(),
                    format!("{:e}", wt.weighted[j]),
                    format!("{:e}", wt.normalized[j]),
                    format!("{:e}", self.y_part.statistic[r][j]),
                    j.to_string(),
                ])?;
            }
        }
        out.flush()?;
        Ok(())
    }

    /// Across-replica quantiles per checkpoint.
    pub fn write_aggregate_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(w);
        out.write_record([
            "checkpoint_index",
            "n",
            "truncated_q50",
            "truncated_q90",
            "saturation_mean",
            "kappa_mean_q50",
            "kappa_mean_q90",
            "kappa_mean_q99",
        ])?;
        for (j, n) in self.y_part.checkpoints.iter().enumerate() {
            let mut col: Vec<f64> = self.truncation.iter().map(|t| t.partial_sums[j]).collect();
            let tq = QuantileRow::of(&mut col, 0.5);
            let sat = self
                .truncation
                .iter()
                .map(|t| t.saturation_at_checkpoints[j] as f64)
                .sum::<f64>()
                / self.truncation.len().max(1) as f64;
            let l = self.y_part.marginal[j];
            out.write_record([
                j.to_string(),
                n.to_string(),
                format!("{:e}", tq.q50),
                format!("{:e}", tq.q90),
                format!("{sat:e}"),
                format!("{:e}", l.q50),
                format!("{:e}", l.q90),
                format!("{:e}", l.q99),
            ])?;
        }
        out.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::config::default_checkpoints;
    use crate::generators::YVariant;
    use crate::schedule::ScheduleRule;

    #[test]
    fn zero_path() {
        let d = truncated_series(&[0.0; 1000], 0.5, 2.0, 0.0, &[10, 100, 1000]);
        assert!(d.partial_sums.iter().all(|&s| s == 0.0));
        assert_eq!(d.saturation_count, 0);
        let w = weighted_sum_transfer(&[0.0; 1000], 0.5, 0.0, &[10, 100, 1000]);
        assert!(w.weighted.iter().chain(&w.normalized).all(|&v| v == 0.0));
        assert!(w.holds());
    }

    #[test]
    fn ceiling_examples() {
        let c = ceiling_bound_check(2.0, 0.0, 3..=3);
        assert_eq!(c.max_value, 1.0);
        assert!(c.holds && c.bound == 4.0);
        let c = ceiling_bound_check(2.0, 0.5, 1..=1);
        assert_eq!(c.max_value, 1.0);
        assert!((c.bound - 2f64.powf(2.5)).abs() < 1e-12);
        let c = ceiling_bound_check(2.0, 1.0, 1..=1_000_000);
        assert!(c.holds && c.max_value <= 8.0);
        assert!(c.argmax < 10, "{}", c.argmax);
        // oracle: n = 2 gives ceil(2^1.5)^2 / 2^3 = 9/8
        assert!(c.max_value >= 9.0 / 8.0);
    }

    #[test]
    fn ceiling_scan_with_exact_integers() {
        // p = 2, eps = 2: n^{1+eps/p} = n^2 is an integer, ratio is exactly 1
        let c = ceiling_bound_check(2.0, 2.0, 1..=100_000);
        assert_eq!(c.max_value, 1.0);
    }

    #[test]
    fn harmonic_kronecker() {
        let cps: Vec<u64> = (0..=6).map(|j| 10u64.pow(j)).collect();
        let k = kronecker_transfer(|k| 1.0 / k as f64, |k| k as f64, &cps);
        // H_n = ln n + gamma + 1/(2n) - 1/(12 n^2) + 1/(120 n^4)
        let n = 1e6f64;
        let gamma = 0.577_215_664_901_532_9;
        let h = n.ln() + gamma + 0.5 / n - 1.0 / (12.0 * n * n);
        let oracle = h / n;
        assert!((k.normalized[6] - oracle).abs() < 1e-8);
        assert!((oracle - 1.439_272_672_286_5e-5).abs() < 1e-15);
        // Σ 1/k^2 -> pi^2/6
        assert!((k.weighted_series[6] - std::f64::consts::PI.powi(2) / 6.0).abs() < 2e-6);
        assert!(k.vanishing);
    }

    #[test]
    fn kronecker_other_weights() {
        let cps: Vec<u64> = vec![1, 10, 100, 1000, 10_000, 100_000];
        // a_k = 1, b_n = n^2
        let k = kronecker_transfer(|_| 1.0, |k| (k as f64).powi(2), &cps);
        assert!(k.vanishing);
        // a_k = (-1)^k sqrt(k), b_n = n: the normalized sum decays like 1/(2 sqrt n)
        let cps: Vec<u64> = (0..=6).map(|j| 10u64.pow(j)).collect();
        let k = kronecker_transfer(
            |k| {
                if k % 2 == 0 {
                    (k as f64).sqrt()
                } else {
                    -(k as f64).sqrt()
                }
            },
            |k| k as f64,
            &cps,
        );
        assert!(
            (k.normalized[6] - 0.5 / 1e3).abs() < 1e-5,
            "{}",
            k.normalized[6]
        );
        assert!(k.vanishing);
    }

    proptest! {
        #[test]
        fn truncation_invariants(
            path in prop::collection::vec(0.0f64..1e8, 1..300),
            a in 0.05f64..0.95,
            eps in 0.0f64..2.0,
        ) {
            let p = 1.0 / a;
            let cps: Vec<u64> = (1..=path.len() as u64).collect();
            let d = truncated_series(&path, a, p, eps, &cps);
            for w in d.partial_sums.windows(2) {
                prop_assert!(w[1] >= w[0]);
            }
            let mut acc = TruncatedSeries::new(a, p, eps);
            for (i, &y) in path.iter().enumerate() {
                let (t, r) = acc.push(i as u64 + 1, y);
                prop_assert!(t <= 1.0 && t <= r);
                let saturated = r > 1.0;
                prop_assert!(saturated || t == r);
            }
            for (t, r) in d.partial_sums.iter().zip(&d.raw_series_partial_sums) {
                prop_assert!(*t <= *r * (1.0 + 1e-12));
            }
            prop_assert!(d.partial_sums.last().unwrap() <= &(path.len() as f64));
        }

        #[test]
        fn ceiling_never_exceeds_bound(p in 1.01f64..4.0, eps in 0.0f64..3.0, lo in 1u64..10_000) {
            let c = ceiling_bound_check(p, eps, lo..=lo + 500);
            prop_assert!(c.holds, "{:?}", c);
        }
    }

    #[test]
    fn saturation_count_small() {
        let y = YModel::new(YVariant::IidPareto { beta: 0.8 }, 0.5, 0.0).unwrap();
        let cps = default_checkpoints(10_000);
        let runs = truncation_experiment(&y, 2.0, &cps, 400, 9);
        let mean = runs.iter().map(|r| r.saturation_count as f64).sum::<f64>() / 400.0;
        let oracle: f64 = (1..=10_000u64).map(|n| (n as f64).powf(-1.6)).sum();
        // standard error of a Poisson-binomial mean over 400 paths is ~0.076
        assert!((mean - oracle).abs() < 0.3, "{mean} vs {oracle}");
    }

    #[test]
    fn y_part_zero_schedule_and_dense_counterexample() {
        let y = YModel::new(YVariant::IidPareto { beta: 0.8 }, 0.5, 0.0).unwrap();
        let cps = default_checkpoints(10_000);
        let st = YPartSettings {
            replicas: 40,
            master_seed: 1,
            quantile: 0.9,
            decay_factor: 2.0,
        };
        let zeros = build_schedule(ScheduleRule::AllZeros, 10_000).unwrap();
        let r = y_part_end_to_end(&y, &zeros, &cps, st).unwrap();
        assert!(r.statistic.iter().flatten().all(|&v| v == 0.0));
        assert_eq!(r.verdict, ConvergenceVerdict::Converging);
        let ones = build_schedule(ScheduleRule::AllOnes, 10_000).unwrap();
        let r = y_part_end_to_end(&y, &ones, &cps, st).unwrap();
        assert_ne!(r.verdict, ConvergenceVerdict::Converging);
    }
}
