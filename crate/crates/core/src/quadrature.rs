//! Log-spaced composite quadrature for tail integrals `∫_0^∞ G(x) dx` of
//! nonincreasing [0, 1]-valued functions.
//!
//! The grid runs over `[x_lo, x_max]`, uniform in `ln x`, and is split into
//! panels at known kinks. Each panel is integrated in the variable `u = ln x`
//! with the trapezoid rule at steps `h` and `2h`; the reported value is the
//! Richardson combination and the error estimate is its distance from the
//! step-`h` trapezoid. `[0, x_lo]` is bracketed by monotonicity and the tail
//! beyond `x_max` is handed in by the caller.

use rayon::prelude::*;

use crate::stats::ols_slope;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub x_lo: f64,
    pub points_per_decade: usize,
    /// `x_max` is the first decade where the tail remainder falls below this.
    pub remainder_target: f64,
    pub x_max_cap: f64,
    /// Absolute error-bound tolerance; exceeding it makes a verdict
    /// inconclusive.
    pub tolerance: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            x_lo: 1e-6,
            points_per_decade: 100,
            remainder_target: 1e-6,
            x_max_cap: 1e14,
            tolerance: 1e-3,
        }
    }
}

/// Tail of the integral beyond `x_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Remainder {
    pub estimate: f64,
    /// Half-width of the uncertainty on `estimate`.
    pub uncertainty: f64,
}

impl Remainder {
    pub fn exact(v: f64) -> Self {
        Self {
            estimate: v,
            uncertainty: 0.0,
        }
    }

    /// Only an upper bound `b` is known: report `b/2 ± b/2`.
    pub fn bounded(b: f64) -> Self {
        Self {
            estimate: 0.5 * b,
            uncertainty: 0.5 * b,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridIntegral {
    pub value: f64,
    pub error_bound: f64,
    pub x_max: f64,
    pub xs: Vec<f64>,
    pub values: Vec<f64>,
    pub remainder: Remainder,
}

/// First power of ten `x >= 1` (capped) where `remainder_bound(x)` drops
/// below the target.
pub fn choose_x_max(spec: &QuadratureSpec, remainder_bound: impl Fn(f64) -> f64) -> f64 {
    let mut x = 1.0f64.max(spec.x_lo * 10.0);
    while x < spec.x_max_cap {
        let r = remainder_bound(x);
        if r.is_finite() && r <= spec.remainder_target {
            return x;
        }
        x *= 10.0;
    }
    spec.x_max_cap
}

/// Panel nodes in increasing order; every panel has an even number of
/// intervals so the step-`2h` rule reuses every other node.
fn panel_nodes(spec: &QuadratureSpec, x_max: f64, breakpoints: &[f64]) -> Vec<Vec<f64>> {
    let mut cuts: Vec<f64> = std::iter::once(spec.x_lo)
        .chain(
            breakpoints
                .iter()
                .copied()
                .filter(|b| *b > spec.x_lo * (1.0 + 1e-12) && *b < x_max * (1.0 - 1e-12)),
        )
        .chain(std::iter::once(x_max))
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|a, b| (*a / *b - 1.0).abs() < 1e-12);
    let h = std::f64::consts::LN_10 / spec.points_per_decade.max(1) as f64;
    cuts.windows(2)
        .map(|w| {
            let (u0, u1) = (w[0].ln(), w[1].ln());
            let m = (((u1 - u0) / h) / 2.0).ceil().max(1.0) as usize;
            let step = (u1 - u0) / (2 * m) as f64;
            (0..=2 * m)
                .map(|i| {
                    if i == 0 {
                        w[0]
                    } else if i == 2 * m {
                        w[1]
                    } else {
                        (u0 + step * i as f64).exp()
                    }
                })
                .collect()
        })
        .collect()
}

/// `∫_0^∞ f` for a nonincreasing [0, 1]-valued `f` with kinks at
/// `breakpoints`, given the remainder beyond the chosen `x_max`.
pub fn integrate_tail<F>(
    spec: &QuadratureSpec,
    f: F,
    breakpoints: &[f64],
    x_max: f64,
    remainder: Remainder,
) -> GridIntegral
where
    F: Fn(f64) -> f64 + Sync,
{
    let panels = panel_nodes(spec, x_max, breakpoints);
    // cuts are evaluated as one-sided limits so jumps land correctly; the
    // remainder owns everything from x_max on
    let points: Vec<f64> = panels
        .iter()
        .enumerate()
        .flat_map(|(p, nodes)| {
            let end = nodes.len() - 1;
            nodes.iter().enumerate().map(move |(i, &x)| match i {
                0 if p > 0 => x * (1.0 + 1e-13),
                i if i == end => x * (1.0 - 1e-13),
                _ => x,
            })
        })
        .collect();
    let flat: Vec<f64> = points.par_iter().map(|&x| f(x)).collect();
    let mut evaluated: Vec<Vec<f64>> = Vec::with_capacity(panels.len());
    let mut offset = 0;
    for nodes in &panels {
        evaluated.push(flat[offset..offset + nodes.len()].to_vec());
        offset += nodes.len();
    }

    let (mut simpson, mut err) = (0.0, 0.0);
    for (nodes, vals) in panels.iter().zip(&evaluated) {
        let intervals = nodes.len() - 1;
        let (u0, u1) = (nodes[0].ln(), nodes[intervals].ln());
        let h = (u1 - u0) / intervals as f64;
        // integrand in u is f(e^u) e^u
        let g: Vec<f64> = nodes.iter().zip(vals).map(|(x, v)| v * x).collect();
        let trap_h = h * (g.iter().sum::<f64>() - 0.5 * (g[0] + g[intervals]));
        let coarse: f64 = g.iter().step_by(2).sum();
        let trap_2h = 2.0 * h * (coarse - 0.5 * (g[0] + g[intervals]));
        let s = (4.0 * trap_h - trap_2h) / 3.0;
        simpson += s;
        err += (s - trap_h).abs();
    }

    let f0 = f(0.0);
    let f_lo = evaluated[0][0];
    let left = 0.5 * spec.x_lo * (f0 + f_lo);
    let left_err = 0.5 * spec.x_lo * (f0 - f_lo).abs();

    let mut xs = Vec::new();
    let mut values = Vec::new();
    for (i, (nodes, vals)) in panels.iter().zip(evaluated).enumerate() {
        let skip = usize::from(i > 0);
        xs.extend_from_slice(&nodes[skip..]);
        values.extend_from_slice(&vals[skip..]);
    }
    GridIntegral {
        value: left + simpson + remainder.estimate,
        error_bound: left_err + err + remainder.uncertainty,
        x_max,
        xs,
        values,
        remainder,
    }
}

/// How a [`TailEnvelope`] was obtained.
#[derive(Debug, Clone, PartialEq)]
pub enum EnvelopeRepr {
    /// A single closed-form tail; the grid is a sampling of it.
    ClosedForm {
        expression: String,
        params: Vec<f64>,
    },
    /// Pointwise sup/average of many tails, evaluated on the grid only.
    Tabulated,
}

/// Nonincreasing [0, 1]-valued function on a log grid with a power-law tail.
#[derive(Debug, Clone, PartialEq)]
pub struct TailEnvelope {
    pub repr: EnvelopeRepr,
    pub xs: Vec<f64>,
    pub values: Vec<f64>,
    /// Decay exponent fitted over the last grid decade (infinite if the
    /// envelope vanishes at `x_max`).
    pub tail_exponent: f64,
    pub integral_estimate: f64,
    pub integral_error_bound: f64,
}

impl TailEnvelope {
    pub fn from_integral(repr: EnvelopeRepr, g: GridIntegral) -> Self {
        let tail_exponent = fit_tail_exponent(&g.xs, &g.values);
        Self {
            repr,
            xs: g.xs,
            values: g.values,
            tail_exponent,
            integral_estimate: g.value,
            integral_error_bound: g.error_bound,
        }
    }

    pub fn x_max(&self) -> f64 {
        *self.xs.last().unwrap()
    }

    /// Log-log interpolation on the grid, power-law extrapolation beyond.
    pub fn value(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x <= self.xs[0] {
            return self.values[0];
        }
        if x >= self.xs[n - 1] {
            let v = self.values[n - 1];
            if v == 0.0 || !self.tail_exponent.is_finite() {
                return 0.0;
            }
            return v * (x / self.xs[n - 1]).powf(-self.tail_exponent);
        }
        let i = self.xs.partition_point(|&g| g <= x) - 1;
        let (x0, x1, v0, v1) = (
            self.xs[i],
            self.xs[i + 1],
            self.values[i],
            self.values[i + 1],
        );
        if v0 > 0.0 && v1 > 0.0 {
            let t = (x / x0).ln() / (x1 / x0).ln();
            (v0.ln() + t * (v1.ln() - v0.ln())).exp()
        } else {
            v0 + (x - x0) / (x1 - x0) * (v1 - v0)
        }
    }

    pub fn is_monotone(&self) -> bool {
        self.values
            .windows(2)
            .all(|w| w[1] <= w[0] * (1.0 + 1e-12) + 1e-300)
            && self.values.iter().all(|v| (0.0..=1.0).contains(v))
    }
}

/// Slope `-d log G / d log x` over the last decade of positive values.
pub fn fit_tail_exponent(xs: &[f64], values: &[f64]) -> f64 {
    let n = xs.len();
    if n < 2 || values[n - 1] <= 0.0 {
        return f64::INFINITY;
    }
    let x_end = xs[n - 1];
    let (lx, lv): (Vec<f64>, Vec<f64>) = xs
        .iter()
        .zip(values)
        .filter(|(x, v)| **x >= x_end / 10.0 && **v > 0.0)
        .map(|(x, v)| (x.ln(), v.ln()))
        .unzip();
    ols_slope(&lx, &lv).map_or(f64::INFINITY, |s| -s)
}
