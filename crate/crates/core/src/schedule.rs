//! Deterministic 0/1 mixing sequences and the Z-assembly.
//!
//! A schedule is stored as the sorted list of its 1-positions, so memory is
//! `O(κ(N))` and `κ(n)` is a binary search.

use std::path::Path;

use crate::error::{Error, Result};
use crate::stats::{ceil_tol, ols_slope};

#[derive(Debug, Clone, PartialEq)]
pub enum ScheduleRule {
    /// The m-th one sits at `ceil((m / c)^(1 / rho))`, pushed to the next
    /// free slot on collisions, so `κ(n) ~ c n^rho`.
    Power {
        rho: f64,
        c: f64,
    },
    /// Strictly increasing 1-positions.
    Explicit(Vec<u64>),
    AllOnes,
    AllZeros,
}

#[derive(Debug, Clone, PartialEq)]
enum Ones {
    All,
    At(Vec<u64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct MixSchedule {
    rule: ScheduleRule,
    horizon: u64,
    ones: Ones,
}

pub fn build_schedule(rule: ScheduleRule, horizon: u64) -> Result<MixSchedule> {
    if horizon == 0 {
        return Err(Error::InvalidSchedule("horizon must be at least 1".into()));
    }
    let ones = match &rule {
        ScheduleRule::AllOnes => Ones::All,
        ScheduleRule::AllZeros => Ones::At(Vec::new()),
        ScheduleRule::Explicit(pos) => {
            if let Some(w) = pos.windows(2).find(|w| w[1] <= w[0]) {
                return Err(Error::InvalidSchedule(format!(
                    "explicit positions must be strictly increasing ({} then {})",
                    w[0], w[1]
                )));
            }
            if let Some(&p) = pos.iter().find(|&&p| p == 0 || p > horizon) {
                return Err(Error::InvalidSchedule(format!(
                    "position {p} outside 1..={horizon}"
                )));
            }
            Ones::At(pos.clone())
        }
        ScheduleRule::Power { rho, c } => {
            if !(*rho > 0.0 && *rho <= 1.0) {
                return Err(Error::InvalidSchedule(format!(
                    "rho must lie in (0, 1], got {rho}"
                )));
            }
            if !(*c > 0.0 && c.is_finite()) {
                return Err(Error::InvalidSchedule(format!(
                    "c must be positive, got {c}"
                )));
            }
            let mut pos = Vec::new();
            let mut last = 0u64;
            for m in 1u64.. {
                let target = ceil_tol((m as f64 / c).powf(1.0 / rho));
                if target > horizon as f64 {
                    break;
                }
                let p = (target as u64).max(last + 1);
                if p > horizon {
                    break;
                }
                pos.push(p);
                last = p;
            }
            Ones::At(pos)
        }
    };
    Ok(MixSchedule {
        rule,
        horizon,
        ones,
    })
}

/// Reads 1-positions from a text file, one per line; blank lines and
/// `#` comments are skipped.
pub fn load_positions(path: &Path) -> Result<Vec<u64>> {
    let text = std::fs::read_to_string(path)?;
    parse_positions(&text)
}

pub fn parse_positions(text: &str) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let p = line.parse::<u64>().map_err(|e| Error::Config {
            line: Some(i + 1),
            field: None,
            message: format!("bad schedule position `{line}`: {e}"),
        })?;
        out.push(p);
    }
    Ok(out)
}

impl MixSchedule {
    pub fn rule(&self) -> &ScheduleRule {
        &self.rule
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    /// κ(n), clamped to the horizon.
    #[inline]
    pub fn kappa(&self, n: u64) -> u64 {
        let n = n.min(self.horizon);
        match &self.ones {
            Ones::All => n,
            Ones::At(pos) => pos.partition_point(|&p| p <= n) as u64,
        }
    }

    pub fn alpha(&self, n: u64) -> bool {
        match &self.ones {
            Ones::All => n >= 1 && n <= self.horizon,
            Ones::At(pos) => pos.binary_search(&n).is_ok(),
        }
    }

    /// 1-positions in increasing order.
    pub fn ones(&self) -> Box<dyn Iterator<Item = u64> + '_> {
        match &self.ones {
            Ones::All => Box::new(1..=self.horizon),
            Ones::At(pos) => Box::new(pos.iter().copied()),
        }
    }

    /// Sequential α reader for streaming passes over `1..=N`.
    pub fn cursor(&self) -> ScheduleCursor<'_> {
        ScheduleCursor {
            schedule: self,
            next: 0,
        }
    }
}

pub struct ScheduleCursor<'a> {
    schedule: &'a MixSchedule,
    next: usize,
}

impl ScheduleCursor<'_> {
    /// α(n); calls must be made for n = 1, 2, 3, ... in order.
    #[inline]
    pub fn step(&mut self, n: u64) -> bool {
        match &self.schedule.ones {
            Ones::All => true,
            Ones::At(pos) => {
                if pos.get(self.next) == Some(&n) {
                    self.next += 1;
                    true
                } else {
                    false
                }
            }
        }
    }
}

/// `(κ(n), ψ(n))` for `1 <= n <= N`.
pub fn kappa_psi(schedule: &MixSchedule, n: u64) -> Result<(u64, u64)> {
    if n == 0 || n > schedule.horizon {
        return Err(Error::IndexOutOfRange {
            index: n,
            limit: schedule.horizon,
        });
    }
    let k = schedule.kappa(n);
    Ok((k, n - k))
}

/// `Z_n = X_{ψ(n)}` where α(n) = 0 and `Z_n = Y_{κ(n)}` where α(n) = 1.
pub fn assemble_z(x_block: &[f64], y_block: &[f64], schedule: &MixSchedule) -> Result<Vec<f64>> {
    let n = schedule.horizon;
    let (kappa, psi) = (schedule.kappa(n), n - schedule.kappa(n));
    if (x_block.len() as u64) < psi {
        return Err(Error::InsufficientSource {
            source_name: "X",
            needed: psi as usize,
            got: x_block.len(),
        });
    }
    if (y_block.len() as u64) < kappa {
        return Err(Error::InsufficientSource {
            source_name: "Y",
            needed: kappa as usize,
            got: y_block.len(),
        });
    }
    let mut cursor = schedule.cursor();
    let (mut xi, mut yi) = (0usize, 0usize);
    let mut z = Vec::with_capacity(n as usize);
    for step in 1..=n {
        if cursor.step(step) {
            z.push(y_block[yi]);
            yi += 1;
        } else {
            z.push(x_block[xi]);
            xi += 1;
        }
    }
    Ok(z)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RarityVerdict {
    /// Target exponent `a / (1 + a eps)`.
    pub rho: f64,
    /// `max_{n <= N} κ(n) / n^rho`.
    pub sup_statistic: f64,
    pub argmax_n: u64,
    /// Slope of `log κ(n)` on `log n` over `[N/10, N]`; `None` when κ
    /// vanishes there.
    pub trend: Option<f64>,
    pub slope_tolerance: f64,
    pub satisfied: bool,
}

pub const DEFAULT_SLOPE_TOLERANCE: f64 = 0.05;

pub fn rarity_statistic(schedule: &MixSchedule, a: f64, eps: f64) -> RarityVerdict {
    rarity_statistic_with(schedule, a, eps, DEFAULT_SLOPE_TOLERANCE)
}

pub fn rarity_statistic_with(
    schedule: &MixSchedule,
    a: f64,
    eps: f64,
    slope_tolerance: f64,
) -> RarityVerdict {
    let rho = a / (1.0 + a * eps);
    let horizon = schedule.horizon;
    // κ(n)/n^rho only jumps up at 1-positions and decays in between.
    let (sup_statistic, argmax_n) = match &schedule.ones {
        Ones::All => {
            let at_n = (horizon as f64).powf(1.0 - rho);
            if at_n >= 1.0 {
                (at_n, horizon)
            } else {
                (1.0, 1)
            }
        }
        Ones::At(pos) => pos
            .iter()
            .enumerate()
            .map(|(i, &p)| ((i + 1) as f64 / (p as f64).powf(rho), p))
            .fold(
                (0.0, 0),
                |best, cur| if cur.0 > best.0 { cur } else { best },
            ),
    };
    let trend = trend_slope(schedule);
    let satisfied = sup_statistic.is_finite() && trend.is_none_or(|s| s <= rho + slope_tolerance);
    RarityVerdict {
        rho,
        sup_statistic,
        argmax_n,
        trend,
        slope_tolerance,
        satisfied,
    }
}

const MIN_TREND_ONES: u64 = 20;

fn trend_slope(schedule: &MixSchedule) -> Option<f64> {
    let hi = schedule.horizon as f64;
    let lo = (hi / 10.0).max(1.0);
    // with only a handful of ones in the last decade the log-log fit
    // measures integer steps rather than growth
    if hi <= lo || schedule.kappa(schedule.horizon) - schedule.kappa(lo as u64) < MIN_TREND_ONES {
        return None;
    }
    const POINTS: usize = 64;
    let mut xs = Vec::with_capacity(POINTS);
    let mut ys = Vec::with_capacity(POINTS);
    let mut last = 0u64;
    for i in 0..POINTS {
        let n = (lo * (hi / lo).powf(i as f64 / (POINTS - 1) as f64)).round() as u64;
        let n = n.clamp(1, schedule.horizon);
        if n == last {
            continue;
        }
        last = n;
        let k = schedule.kappa(n);
        if k > 0 {
            xs.push((n as f64).ln());
            ys.push((k as f64).ln());
        }
    }
    ols_slope(&xs, &ys)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn explicit_example() {
        let s = build_schedule(ScheduleRule::Explicit(vec![3, 7, 8]), 9).unwrap();
        let alpha: Vec<u8> = (1..=9).map(|n| s.alpha(n) as u8).collect();
        assert_eq!(alpha, vec![0, 0, 1, 0, 0, 0, 1, 1, 0]);
        assert_eq!(kappa_psi(&s, 9).unwrap(), (3, 6));
        let x = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        let y = [-1.0, -2.0, -3.0];
        let z = assemble_z(&x, &y, &s).unwrap();
        assert_eq!(z, vec![1.0, 2.0, -1.0, 3.0, 4.0, 5.0, -2.0, -3.0, 6.0]);
        assert_eq!(z[2], y[0]);
        assert_eq!(z[7], y[2]);
        assert_eq!(z[8], x[5]);
    }

    #[test]
    fn power_squares() {
        let s = build_schedule(ScheduleRule::Power { rho: 0.5, c: 1.0 }, 100).unwrap();
        let ones: Vec<u64> = s.ones().collect();
        assert_eq!(ones, vec![1, 4, 9, 16, 25, 36, 49, 64, 81, 100]);
        assert_eq!(s.kappa(100), 10);
        assert_eq!(kappa_psi(&s, 50).unwrap(), (7, 43));
    }

    #[test]
    fn power_collisions_skip_forward() {
        let s = build_schedule(ScheduleRule::Power { rho: 0.5, c: 3.0 }, 50).unwrap();
        let ones: Vec<u64> = s.ones().collect();
        assert!(ones.windows(2).all(|w| w[1] > w[0]));
        for n in 1..=50u64 {
            let bound = ceil_tol(3.0 * (n as f64).sqrt()) as u64 + 1;
            assert!(s.kappa(n) <= bound, "n={n}");
        }
        // ceil((m/3)^2) for m = 1, 2, 3 is 1, 1, 1 -> 1, 2, 3
        assert_eq!(&ones[..3], &[1, 2, 3]);
    }

    #[test]
    fn trivial_schedules() {
        let z = build_schedule(ScheduleRule::AllZeros, 10).unwrap();
        assert_eq!(kappa_psi(&z, 10).unwrap(), (0, 10));
        let o = build_schedule(ScheduleRule::AllOnes, 10).unwrap();
        assert_eq!(kappa_psi(&o, 7).unwrap(), (7, 0));
        let x = [1.0, 2.0, 3.0];
        assert_eq!(
            assemble_z(&x, &[], &build_schedule(ScheduleRule::AllZeros, 3).unwrap()).unwrap(),
            x
        );
        assert_eq!(
            assemble_z(&[], &x, &build_schedule(ScheduleRule::AllOnes, 3).unwrap()).unwrap(),
            x
        );
    }

    #[test]
    fn errors() {
        assert!(build_schedule(ScheduleRule::Explicit(vec![3, 3]), 9).is_err());
        assert!(build_schedule(ScheduleRule::Explicit(vec![4, 2]), 9).is_err());
        assert!(build_schedule(ScheduleRule::Explicit(vec![10]), 9).is_err());
        assert!(build_schedule(ScheduleRule::Power { rho: 1.5, c: 1.0 }, 9).is_err());
        let s = build_schedule(ScheduleRule::AllZeros, 9).unwrap();
        assert!(kappa_psi(&s, 0).is_err());
        assert!(kappa_psi(&s, 10).is_err());
        let e = build_schedule(ScheduleRule::Explicit(vec![2]), 4).unwrap();
        assert!(matches!(
            assemble_z(&[1.0, 2.0], &[1.0], &e),
            Err(Error::InsufficientSource {
                source_name: "X",
                needed: 3,
                got: 2
            })
        ));
        assert!(matches!(
            assemble_z(&[1.0, 2.0, 3.0], &[], &e),
            Err(Error::InsufficientSource {
                source_name: "Y",
                ..
            })
        ));
    }

    #[test]
    fn rarity_examples() {
        let s = build_schedule(ScheduleRule::Power { rho: 0.5, c: 1.0 }, 10_000).unwrap();
        let r = rarity_statistic(&s, 0.5, 0.0);
        assert_eq!(r.rho, 0.5);
        assert!(r.sup_statistic <= 1.0);
        assert!(r.satisfied);
        assert!((r.trend.unwrap() - 0.5).abs() < 0.05);

        let n = 10_000u64;
        let o = build_schedule(ScheduleRule::AllOnes, n).unwrap();
        let r = rarity_statistic(&o, 0.5, 0.0);
        assert!((r.sup_statistic - (n as f64).sqrt()).abs() < 1e-9);
        assert_eq!(r.argmax_n, n);
        assert!(!r.satisfied);

        let zeros = build_schedule(ScheduleRule::AllZeros, n).unwrap();
        let r = rarity_statistic(&zeros, 0.5, 0.0);
        assert_eq!(r.sup_statistic, 0.0);
        assert!(r.satisfied);
    }

    #[test]
    fn rarity_exponent_uses_eps() {
        let s = build_schedule(ScheduleRule::AllZeros, 100).unwrap();
        let r = rarity_statistic(&s, 0.5, 0.6);
        assert!((r.rho - 0.5 / 1.3).abs() < 1e-15);
    }

    #[test]
    fn positions_file_grammar() {
        let p = parse_positions("# ones\n3\n\n7 # second\n8\n").unwrap();
        assert_eq!(p, vec![3, 7, 8]);
        assert!(matches!(
            parse_positions("3\nx\n"),
            Err(Error::Config { line: Some(2), .. })
        ));
    }
}
