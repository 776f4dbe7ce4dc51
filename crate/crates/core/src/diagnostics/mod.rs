//! Replica experiments on the mixed sequence: checkpointed partial means,
//! across-replica quantiles, tail-sup statistics and a convergence verdict.

mod csv_out;
mod paths;

use std::fmt;
use std::fmt::Write as _;

pub use csv_out::{write_aggregate_csv, write_checkpoint_csv};
pub use paths::{simulate_path, simulate_paths, tail_sup_statistic, PathSpec, PathTrace};

use crate::conditions::{condition_report, ConditionReport};
use crate::config::DEFAULT_BUDGET;
pub use crate::config::{ExperimentConfig, Mode};
use crate::error::{Error, Result};
use crate::schedule::{build_schedule, MixSchedule};
use crate::stats::quantile_sorted;

/// Environment variable overriding the `horizon × replicas` ceiling.
pub const BUDGET_ENV: &str = "SLLN_BUDGET";
/// Values at or below this are treated as exact zeros by the verdicts.
const ZERO_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConvergenceVerdict {
    Converging,
    Diverging,
    Indeterminate,
}

impl ConvergenceVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            ConvergenceVerdict::Converging => "converging",
            ConvergenceVerdict::Diverging => "diverging",
            ConvergenceVerdict::Indeterminate => "indeterminate",
        }
    }
}

impl fmt::Display for ConvergenceVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantileRow {
    pub q50: f64,
    pub q90: f64,
    pub q99: f64,
    /// The configured verdict quantile.
    pub q_verdict: f64,
}

impl QuantileRow {
    pub fn of(values: &mut [f64], q: f64) -> Self {
        values.sort_by(f64::total_cmp);
        Self {
            q50: quantile_sorted(values, 0.5),
            q90: quantile_sorted(values, 0.9),
            q99: quantile_sorted(values, 0.99),
            q_verdict: quantile_sorted(values, q),
        }
    }
}

/// Ratio `v(from) / v(to)` of a quantile between checkpoints a decade apart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecadeDecay {
    pub from_n: u64,
    pub to_n: u64,
    pub tail_sup: f64,
    pub marginal: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub mode: Mode,
    pub horizon: u64,
    pub replicas: u64,
    pub master_seed: u64,
    pub quantile: f64,
    pub decay_factor: f64,
    pub checkpoints: Vec<u64>,
    /// Quantiles of `|S_n / n|` per checkpoint.
    pub marginal: Vec<QuantileRow>,
    /// Quantiles of the tail-sup `T_j` per checkpoint.
    pub tail_sup: Vec<QuantileRow>,
    pub decades: Vec<DecadeDecay>,
    pub verdict: ConvergenceVerdict,
    pub verdict_reason: String,
    pub conditions: ConditionReport,
    /// Per replica, `S_n / n` at each checkpoint.
    pub s_over_n: Vec<Vec<f64>>,
    pub tail_sups: Vec<Vec<f64>>,
    pub kappa: Vec<Vec<u64>>,
}

/// Budget precedence: explicit override, then the environment, then the
/// config, then [`DEFAULT_BUDGET`].
pub fn resolve_budget(flag: Option<u64>, config: &ExperimentConfig) -> Result<u64> {
    if let Some(b) = flag {
        return Ok(b);
    }
    if let Ok(v) = std::env::var(BUDGET_ENV) {
        return v
            .trim()
            .parse()
            .map_err(|_| Error::config(BUDGET_ENV, format!("`{v}` is not a nonnegative integer")));
    }
    Ok(config.budget.unwrap_or(DEFAULT_BUDGET))
}

pub fn check_budget(horizon: u64, replicas: u64, budget: u64) -> Result<()> {
    let requested = horizon as u128 * replicas as u128;
    if requested <= budget as u128 {
        return Ok(());
    }
    Err(Error::Budget {
        requested,
        budget: budget as u128,
        suggested_replicas: (budget / horizon.max(1)).max(2),
        suggested_horizon: (budget / replicas.max(1)).max(1000),
    })
}

fn source_spec<'a>(config: &'a ExperimentConfig, schedule: &'a MixSchedule) -> PathSpec<'a> {
    PathSpec {
        x: config.mode.uses_x().then_some(&config.x_model),
        y: config.mode.uses_y().then_some(&config.y_model),
        schedule,
        checkpoints: &config.checkpoints,
        master_seed: config.master_seed,
        replicas: config.replicas,
    }
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<ConvergenceReport> {
    run_experiment_with_budget(config, resolve_budget(None, config)?)
}

pub fn run_experiment_with_budget(
    config: &ExperimentConfig,
    budget: u64,
) -> Result<ConvergenceReport> {
    config.validate()?;
    check_budget(config.horizon, config.replicas, budget)?;
    let schedule = build_schedule(config.schedule.clone(), config.horizon)?;
    let conditions = condition_report(
        &config.x_model,
        &config.y_model,
        &schedule,
        &config.conditions,
    );
    let traces = simulate_paths(&source_spec(config, &schedule))?;
    Ok(aggregate(config, conditions, &traces))
}

/// Largest checkpoint index with `n ≤ target`.
fn index_at_or_below(checkpoints: &[u64], target: u64) -> Option<usize> {
    checkpoints.partition_point(|&n| n <= target).checked_sub(1)
}

/// Decade pairs `(i, j)` with `checkpoints[j] = 10 · checkpoints[i]`.
pub(crate) fn decade_pairs(checkpoints: &[u64]) -> Vec<(usize, usize)> {
    checkpoints
        .iter()
        .enumerate()
        .filter_map(|(i, &n)| checkpoints.binary_search(&(n * 10)).ok().map(|j| (i, j)))
        .collect()
}

pub(crate) fn ratio(a: f64, b: f64) -> f64 {
    if b > ZERO_FLOOR {
        a / b
    } else if a > ZERO_FLOOR {
        f64::INFINITY
    } else {
        1.0
    }
}

fn aggregate(
    config: &ExperimentConfig,
    conditions: ConditionReport,
    traces: &[PathTrace],
) -> ConvergenceReport {
    let cps = &config.checkpoints;
    let q = config.quantile;
    let s_over_n: Vec<Vec<f64>> = traces.iter().map(|t| t.s_over_n(cps)).collect();
    let tail_sups: Vec<Vec<f64>> = s_over_n.iter().map(|v| tail_sup_statistic(v)).collect();
    let column =
        |rows: &[Vec<f64>], j: usize| -> Vec<f64> { rows.iter().map(|r| r[j].abs()).collect() };
    let marginal: Vec<QuantileRow> = (0..cps.len())
        .map(|j| QuantileRow::of(&mut column(&s_over_n, j), q))
        .collect();
    let tail_sup: Vec<QuantileRow> = (0..cps.len())
        .map(|j| QuantileRow::of(&mut column(&tail_sups, j), q))
        .collect();
    let decades = decade_pairs(cps)
        .into_iter()
        .map(|(i, j)| DecadeDecay {
            from_n: cps[i],
            to_n: cps[j],
            tail_sup: ratio(tail_sup[i].q_verdict, tail_sup[j].q_verdict),
            marginal: ratio(marginal[i].q_verdict, marginal[j].q_verdict),
        })
        .collect();
    let (verdict, verdict_reason) = decide(cps, &marginal, &tail_sup, q, config.decay_factor);
    ConvergenceReport {
        mode: config.mode,
        horizon: config.horizon,
        replicas: config.replicas,
        master_seed: config.master_seed,
        quantile: q,
        decay_factor: config.decay_factor,
        checkpoints: cps.clone(),
        marginal,
        tail_sup,
        decades,
        verdict,
        verdict_reason,
        conditions,
        s_over_n,
        tail_sups,
        kappa: traces.iter().map(|t| t.kappa.clone()).collect(),
    }
}

/// Converging: the tail-sup quantile falls by `factor` over each of the last
/// two decades (or is zero). Diverging: the marginal quantile grows by
/// `factor` over the same two decades. The tail-sup itself can never grow.
pub(crate) fn decide(
    cps: &[u64],
    marginal: &[QuantileRow],
    tail_sup: &[QuantileRow],
    q: f64,
    factor: f64,
) -> (ConvergenceVerdict, String) {
    let n = *cps.last().unwrap();
    let (Some(i0), Some(i1)) = (
        index_at_or_below(cps, n / 100),
        index_at_or_below(cps, n / 10),
    ) else {
        return (
            ConvergenceVerdict::Indeterminate,
            "fewer than two decades of checkpoints".into(),
        );
    };
    let i2 = cps.len() - 1;
    if i0 == i1 || i1 == i2 {
        return (
            ConvergenceVerdict::Indeterminate,
            "fewer than two decades of checkpoints".into(),
        );
    }
    let pct = q * 100.0;
    let t = |i: usize| tail_sup[i].q_verdict;
    let m = |i: usize| marginal[i].q_verdict;
    let growth = ratio(m(i2), m(i0));
    if growth >= factor {
        return (
            ConvergenceVerdict::Diverging,
            format!(
                "{pct}% quantile of |S_n/n| grew by {growth:.3} from n = {} to n = {n} (threshold {factor})",
                cps[i0]
            ),
        );
    }
    if t(i0) <= ZERO_FLOOR {
        return (
            ConvergenceVerdict::Converging,
            format!("{pct}% tail-sup quantile is zero from n = {}", cps[i0]),
        );
    }
    let d1 = ratio(t(i0), t(i1));
    let d2 = ratio(t(i1), t(i2));
    let reason = format!(
        "{pct}% tail-sup quantile decay {d1:.3} (n = {} to {}) and {d2:.3} (n = {} to {n}), threshold {factor}",
        cps[i0], cps[i1], cps[i1]
    );
    if d1 >= factor && d2 >= factor {
        (ConvergenceVerdict::Converging, reason)
    } else {
        (ConvergenceVerdict::Indeterminate, reason)
    }
}

impl ConvergenceReport {
    /// Deterministic plain-text summary.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "mode: {}", self.mode);
        let _ = writeln!(s, "horizon: {}", self.horizon);
        let _ = writeln!(s, "replicas: {}", self.replicas);
        let _ = writeln!(s, "master_seed: {}", self.master_seed);
        let _ = writeln!(s, "verdict_quantile: {}", self.quantile);
        let _ = writeln!(s, "decay_factor: {}", self.decay_factor);
        let _ = writeln!(s, "verdict: {}", self.verdict);
        let _ = writeln!(s, "reason: {}", self.verdict_reason);
        let _ = writeln!(
            s,
            "\n{:>10} {:>12} {:>12} {:>12} {:>12} {:>12} {:>12}",
            "n", "q50", "q90", "q99", "T_q50", "T_q90", "T_q99"
        );
        for (j, n) in self.checkpoints.iter().enumerate() {
            let (m, t) = (self.marginal[j], self.tail_sup[j]);
            let _ = writeln!(
                s,
                "{n:>10} {:>12.4e} {:>12.4e} {:>12.4e} {:>12.4e} {:>12.4e} {:>12.4e}",
                m.q50, m.q90, m.q99, t.q50, t.q90, t.q99
            );
        }
        if !self.decades.is_empty() {
            let _ = writeln!(
                s,
                "\ndecade decay factors (tail-sup, marginal) at the verdict quantile:"
            );
            for d in &self.decades {
                let _ = writeln!(
                    s,
                    "  {:>10} -> {:<10} {:>10.4} {:>10.4}",
                    d.from_n, d.to_n, d.tail_sup, d.marginal
                );
            }
        }
        let _ = writeln!(s, "\nconditions:");
        s.push_str(&self.conditions.to_text());
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModeComparison {
    pub checkpoints: Vec<u64>,
    /// Per replica and checkpoint: `S_n / n` of the mixed sequence.
    pub theorem: Vec<Vec<f64>>,
    pub x_only: Vec<Vec<f64>>,
    pub y_only: Vec<Vec<f64>>,
    /// Largest `|S_Z − (S_X + S_Y)| / (ε_mach Σ|Z|)` over all replicas and checkpoints.
    pub max_residual_ulps: f64,
    pub identity_holds: bool,
}

/// Residual allowance in units of `ε_mach · Σ|Z|`.
pub const IDENTITY_ULPS: f64 = 16.0;

/// Splits each coupled path into its X-part and Y-part and checks the
/// decomposition of the partial sums.
pub fn compare_modes(config: &ExperimentConfig) -> Result<ModeComparison> {
    config.validate()?;
    check_budget(
        config.horizon,
        config.replicas,
        resolve_budget(None, config)?,
    )?;
    let schedule = build_schedule(config.schedule.clone(), config.horizon)?;
    let spec = PathSpec {
        x: Some(&config.x_model),
        y: Some(&config.y_model),
        ..source_spec(config, &schedule)
    };
    let traces = simulate_paths(&spec)?;
    let cps = &config.checkpoints;
    let scale = |v: &[f64]| -> Vec<f64> { v.iter().zip(cps).map(|(s, &n)| s / n as f64).collect() };
    let mut worst = 0.0f64;
    for t in &traces {
        for j in 0..cps.len() {
            let r = (t.z_sum[j] - (t.x_sum[j] + t.y_sum[j])).abs();
            let allowance = f64::EPSILON * t.abs_sum[j];
            let ulps = if allowance > 0.0 {
                r / allowance
            } else if r > 0.0 {
                f64::INFINITY
            } else {
                0.0
            };
            worst = worst.max(ulps);
        }
    }
    Ok(ModeComparison {
        checkpoints: cps.clone(),
        theorem: traces.iter().map(|t| scale(&t.z_sum)).collect(),
        x_only: traces.iter().map(|t| scale(&t.x_sum)).collect(),
        y_only: traces.iter().map(|t| scale(&t.y_sum)).collect(),
        max_residual_ulps: worst,
        identity_holds: worst <= IDENTITY_ULPS,
    })
}

#[cfg(test)]
mod tests;
