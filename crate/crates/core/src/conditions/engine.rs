//! Integrals of `x ↦ sup_n W_n(x)` where `W_n` is either a single tail or a
//! weighted Cesàro average of tails.

use std::fmt::Write as _;

use super::{Certification, Verdict};
use crate::generators::TailFamily;
use crate::quadrature::{
    choose_x_max, fit_tail_exponent, integrate_tail, EnvelopeRepr, QuadratureSpec, Remainder,
    TailEnvelope,
};

/// Horizon-growth ratio at or below which a truncated sup counts as settled.
pub const SETTLED_RATIO: f64 = 1.01;
/// Horizon-growth ratio at or above which mass is escaping to infinity.
pub const GROWING_RATIO: f64 = 1.05;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Profile {
    /// `sup_{k ≥ from} P(|W_k| > x)`.
    Sup,
    /// `sup_{n ≥ from} n^{-eps} (1/n) Σ_{k=from}^n P(|W_k| > x)`.
    Cesaro { eps: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntegralCheck {
    pub value: f64,
    pub error_bound: f64,
    pub verdict: Verdict,
    pub certification: Certification,
    /// Integral at the probe horizon over the integral at a tenth of it.
    pub horizon_ratio: Option<f64>,
    pub envelope: TailEnvelope,
    pub details: String,
}

struct BruteForce<'a, T> {
    family: &'a T,
    from: u64,
    horizon: u64,
    profile: Profile,
    weights: Vec<f64>,
}

impl<'a, T: TailFamily> BruteForce<'a, T> {
    fn new(family: &'a T, from: u64, horizon: u64, profile: Profile) -> Self {
        let weights = match profile {
            Profile::Sup => Vec::new(),
            Profile::Cesaro { eps } => (from..=horizon)
                .map(|n| (n as f64).powf(-eps) / n as f64)
                .collect(),
        };
        Self {
            family,
            from,
            horizon,
            profile,
            weights,
        }
    }

    fn eval(&self, x: f64) -> f64 {
        match self.profile {
            Profile::Sup => (self.from..=self.horizon)
                .map(|k| self.family.tail(k, x))
                .fold(0.0, f64::max),
            Profile::Cesaro { .. } => {
                let mut acc = 0.0;
                let mut best = 0.0f64;
                for (i, k) in (self.from..=self.horizon).enumerate() {
                    acc += self.family.tail(k, x);
                    best = best.max(acc * self.weights[i]);
                }
                best.min(1.0)
            }
        }
    }

    fn remainder_bound(&self, x: f64) -> f64 {
        self.family
            .dominating_indices(self.from, self.horizon)
            .into_iter()
            .map(|k| self.family.tail_integral_beyond(k, x))
            .sum()
    }
}

fn within_tolerance(value: f64, error: f64, spec: &QuadratureSpec) -> bool {
    error <= spec.tolerance * value.abs().max(1.0)
}

/// Whether the last two grid decades decay with a common power law.
fn power_law_tail(env: &TailEnvelope) -> bool {
    let n = env.xs.len();
    let v_end = env.values[n - 1];
    if v_end == 0.0 || v_end * env.x_max() < 1e-12 {
        return true;
    }
    let split = env.xs.partition_point(|&x| x < env.x_max() / 10.0);
    let earlier = fit_tail_exponent(&env.xs[..=split], &env.values[..=split]);
    let last = env.tail_exponent;
    (earlier - last).abs() <= 0.1 * last.abs() + 0.05
}

pub fn profile_integral<T: TailFamily>(
    family: &T,
    from: u64,
    horizon: u64,
    profile: Profile,
    spec: &QuadratureSpec,
    label: &str,
) -> IntegralCheck {
    let horizon = horizon.max(from);

    // The n = from term alone is a lower bound on the integrand.
    if family.tail_integral_beyond(from, 1.0).is_infinite() {
        let g = integrate_tail(
            spec,
            |x| family.tail(from, x),
            &family.breakpoints(from),
            spec.x_max_cap,
            Remainder::exact(f64::INFINITY),
        );
        let envelope = TailEnvelope::from_integral(EnvelopeRepr::Tabulated, g);
        return IntegralCheck {
            value: f64::INFINITY,
            error_bound: 0.0,
            verdict: Verdict::Violated,
            certification: Certification::ClosedForm,
            horizon_ratio: None,
            envelope,
            details: format!("{label}: tail of index {from} is not integrable"),
        };
    }

    let shortcut = family.identically_distributed(from)
        && match profile {
            Profile::Sup => true,
            Profile::Cesaro { eps } => eps == 0.0 || from == 1,
        };
    if shortcut {
        return closed_form(family, from, spec, label, vec![from]);
    }
    if let (Profile::Sup, Some(p)) = (profile, family.period(from)) {
        let members: Vec<u64> = (from..from + p).collect();
        return closed_form(family, from, spec, label, members);
    }

    let full = BruteForce::new(family, from, horizon, profile);
    let tenth = BruteForce::new(family, from, (horizon / 10).max(from), profile);
    let run = |bf: &BruteForce<'_, T>| {
        let x_max = choose_x_max(spec, |x| bf.remainder_bound(x));
        let rem = Remainder::bounded(bf.remainder_bound(x_max));
        integrate_tail(spec, |x| bf.eval(x), &[], x_max, rem)
    };
    let g_full = run(&full);
    let g_tenth = run(&tenth);
    let ratio = if g_tenth.value > 0.0 {
        g_full.value / g_tenth.value
    } else {
        1.0
    };
    let envelope = TailEnvelope::from_integral(EnvelopeRepr::Tabulated, g_full);
    let mut details = format!(
        "{label}: sup truncated at n = {horizon}; horizon ratio {ratio:.6} (settled <= {SETTLED_RATIO}, growing >= {GROWING_RATIO})"
    );
    let verdict = if ratio >= GROWING_RATIO {
        details.push_str("; integral grows with the probe horizon");
        Verdict::Violated
    } else if !power_law_tail(&envelope) {
        details.push_str("; envelope tail is not a power law at the grid end");
        Verdict::Inconclusive
    } else if ratio <= SETTLED_RATIO
        && within_tolerance(
            envelope.integral_estimate,
            envelope.integral_error_bound,
            spec,
        )
    {
        Verdict::Satisfied
    } else {
        Verdict::Inconclusive
    };
    let _ = write!(
        details,
        "; error bound {:.3e}",
        envelope.integral_error_bound
    );
    IntegralCheck {
        value: envelope.integral_estimate,
        error_bound: envelope.integral_error_bound,
        verdict,
        certification: Certification::GridEvidence { horizon },
        horizon_ratio: Some(ratio),
        envelope,
        details,
    }
}

/// Integral of `max_{k ∈ members} P(|W_k| > x)` (a single tail when
/// `members` has one element).
fn closed_form<T: TailFamily>(
    family: &T,
    from: u64,
    spec: &QuadratureSpec,
    label: &str,
    members: Vec<u64>,
) -> IntegralCheck {
    let f = |x: f64| {
        members
            .iter()
            .map(|&k| family.tail(k, x))
            .fold(0.0, f64::max)
    };
    let remainder_bound = |x: f64| {
        members
            .iter()
            .map(|&k| family.tail_integral_beyond(k, x))
            .sum::<f64>()
    };
    let x_max = choose_x_max(spec, remainder_bound);
    let rem = if members.len() == 1 && family.remainder_is_exact() {
        Remainder::exact(remainder_bound(x_max))
    } else {
        Remainder::bounded(remainder_bound(x_max))
    };
    let mut breaks: Vec<f64> = members
        .iter()
        .flat_map(|&k| family.breakpoints(k))
        .collect();
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let g = integrate_tail(spec, f, &breaks, x_max, rem);
    let envelope = TailEnvelope::from_integral(
        EnvelopeRepr::ClosedForm {
            expression: label.to_string(),
            params: members.iter().map(|&k| k as f64).collect(),
        },
        g,
    );
    let verdict = if within_tolerance(
        envelope.integral_estimate,
        envelope.integral_error_bound,
        spec,
    ) {
        Verdict::Satisfied
    } else {
        Verdict::Inconclusive
    };
    let details = format!(
        "{label}: closed-form tail{} from index {from}; error bound {:.3e}",
        if members.len() > 1 {
            "s (periodic max)"
        } else {
            ""
        },
        envelope.integral_error_bound
    );
    IntegralCheck {
        value: envelope.integral_estimate,
        error_bound: envelope.integral_error_bound,
        verdict,
        certification: Certification::ClosedForm,
        horizon_ratio: None,
        envelope,
        details,
    }
}
