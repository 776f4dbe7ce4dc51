use super::engine::{profile_integral, IntegralCheck, Profile};
use super::Verdict;
use crate::generators::{TailFamily, YModel};
use crate::quadrature::{choose_x_max, integrate_tail, QuadratureSpec, Remainder};

#[derive(Debug, Clone, PartialEq)]
pub struct MomentCheck {
    /// `(k, E|Y_k|^a)` at `k = 1, 10, 100, ...` up to `n_max`.
    pub closed_form: Vec<(u64, f64)>,
    /// Quadrature of `P(|Y_1|^a > x)` over `[0, ∞)`.
    pub quadrature: f64,
    pub quadrature_error: f64,
    pub verdict: Verdict,
    pub details: String,
}

pub fn moment_check_y(model: &YModel, n_max: u64, spec: &QuadratureSpec) -> MomentCheck {
    let mut ks = vec![1u64];
    while let Some(&k) = ks.last() {
        if k.saturating_mul(10) > n_max.max(1) {
            break;
        }
        ks.push(k * 10);
    }
    let closed_form: Vec<(u64, f64)> = ks
        .iter()
        .map(|&k| (k, model.fractional_moment(k)))
        .collect();
    let m1 = closed_form[0].1;

    if !m1.is_finite() {
        return MomentCheck {
            closed_form,
            quadrature: f64::INFINITY,
            quadrature_error: 0.0,
            verdict: Verdict::Violated,
            details: format!(
                "E|Y|^a diverges: tail index {} does not exceed a = {}",
                model.beta().map_or_else(|| "n/a".into(), |b| b.to_string()),
                model.a
            ),
        };
    }
    let x_max = choose_x_max(spec, |x| model.tail_integral_beyond(1, x));
    let beyond = model.tail_integral_beyond(1, x_max);
    let rem = if model.remainder_is_exact() {
        Remainder::exact(beyond)
    } else {
        Remainder::bounded(beyond)
    };
    let g = integrate_tail(
        spec,
        |x| model.tail(1, x),
        &model.breakpoints(1),
        x_max,
        rem,
    );
    MomentCheck {
        details: format!(
            "E|Y_1|^a = {m1:.6} (closed form), {:.6} +/- {:.1e} (quadrature)",
            g.value, g.error_bound
        ),
        closed_form,
        quadrature: g.value,
        quadrature_error: g.error_bound,
        verdict: Verdict::Satisfied,
    }
}

/// Minimal envelope `x ↦ sup_{n ≤ n_max} n^{-eps} (1/n) Σ_{k ≤ n} P(|Y_k|^a > x)`
/// and its integral.
pub fn minimal_envelope_y(model: &YModel, n_max: u64, spec: &QuadratureSpec) -> IntegralCheck {
    profile_integral(
        model,
        1,
        n_max,
        Profile::Cesaro { eps: model.eps },
        spec,
        "cesaro_envelope",
    )
}
