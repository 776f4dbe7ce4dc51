use super::engine::{profile_integral, IntegralCheck, Profile, GROWING_RATIO, SETTLED_RATIO};
use super::{Certification, ConditionSettings, Verdict};
use crate::generators::{TailFamily, XModel};

/// Absolute tolerance below which an analytic mean counts as zero.
pub const MEAN_TOLERANCE: f64 = 1e-12;

/// Cutoffs `10^{j/2}`, `j = 0..=12`, for the truncated-moment profiles.
pub const UI_CUTOFFS: [f64; 13] = [
    1.0,
    3.162_277_660_168_379_5,
    10.0,
    31.622_776_601_683_793,
    100.0,
    316.227_766_016_837_9,
    1e3,
    3_162.277_660_168_379_5,
    1e4,
    31_622.776_601_683_793,
    1e5,
    316_227.766_016_837_9,
    1e6,
];

#[derive(Debug, Clone, PartialEq)]
pub struct MeanCheck {
    pub verdict: Verdict,
    pub max_abs_mean: f64,
    pub argmax: u64,
    pub details: String,
}

/// Scans `E X_k` for `k ≥ n0` (one index when the law does not depend on
/// `k`, otherwise `n_probe` indices).
pub fn check_mean_zero(model: &XModel, n0: u64, n_probe: u64) -> MeanCheck {
    let hi = if model.identically_distributed(n0) {
        n0
    } else {
        n0 + n_probe.max(1) - 1
    };
    let (max_abs_mean, argmax) = (n0..=hi)
        .map(|k| (model.mean(k).abs(), k))
        .fold((0.0, n0), |b, c| if c.0 > b.0 { c } else { b });
    let verdict = if max_abs_mean <= MEAN_TOLERANCE {
        Verdict::Satisfied
    } else {
        Verdict::Violated
    };
    MeanCheck {
        verdict,
        max_abs_mean,
        argmax,
        details: format!(
            "max |E X_k| over k in [{n0}, {hi}] is {max_abs_mean:.3e} at k = {argmax}"
        ),
    }
}

pub fn compute_c_n0(model: &XModel, n0: u64, settings: &ConditionSettings) -> IntegralCheck {
    profile_integral(
        model,
        n0,
        settings.n_probe,
        Profile::Cesaro { eps: 0.0 },
        &settings.quadrature,
        "cesaro_tail",
    )
}

pub fn compute_sup_tail_integral(
    model: &XModel,
    from: u64,
    settings: &ConditionSettings,
) -> IntegralCheck {
    profile_integral(
        model,
        from,
        settings.n_probe,
        Profile::Sup,
        &settings.quadrature,
        "sup_tail",
    )
}

/// `E|X_k| 1(|X_k| > c)`.
pub fn truncated_moment<T: TailFamily>(family: &T, k: u64, c: f64) -> f64 {
    c * family.tail(k, c) + family.tail_integral_beyond(k, c)
}

#[derive(Debug, Clone, PartialEq)]
pub struct UiProfile {
    pub cutoffs: Vec<f64>,
    /// Profile at the probe horizon.
    pub values: Vec<f64>,
    /// Profile value at the probe horizon over the value at a tenth of it.
    pub horizon_ratios: Vec<f64>,
    pub verdict: Verdict,
    pub certification: Certification,
    pub details: String,
}

fn ui_profile(model: &XModel, n0: u64, settings: &ConditionSettings, cesaro: bool) -> UiProfile {
    let tol = settings.ui_tolerance;
    let label = if cesaro { "cesaro_ui" } else { "ui" };
    let cutoffs = UI_CUTOFFS.to_vec();

    if model.identically_distributed(n0) {
        let values: Vec<f64> = cutoffs
            .iter()
            .map(|&c| truncated_moment(model, n0, c))
            .collect();
        let first_moment = model.tail_integral_beyond(n0, 0.0);
        let verdict = if !first_moment.is_finite() {
            Verdict::Violated
        } else {
            Verdict::Satisfied
        };
        return UiProfile {
            horizon_ratios: vec![1.0; cutoffs.len()],
            details: format!(
                "{label}: single law from index {n0}; E|X| = {first_moment:.6e}, profile at cutoff {:.0e} is {:.3e}",
                cutoffs[cutoffs.len() - 1],
                values[values.len() - 1]
            ),
            cutoffs,
            values,
            verdict,
            certification: Certification::ClosedForm,
        };
    }

    let horizon = settings.n_probe.max(n0);
    let tenth = (horizon / 10).max(n0);
    let eval = |c: f64, hi: u64| -> f64 {
        if cesaro {
            let mut acc = 0.0;
            let mut best = 0.0f64;
            for n in n0..=hi {
                acc += truncated_moment(model, n, c);
                best = best.max(acc / n as f64);
            }
            best
        } else {
            (n0..=hi)
                .map(|k| truncated_moment(model, k, c))
                .fold(0.0, f64::max)
        }
    };
    let values: Vec<f64> = cutoffs.iter().map(|&c| eval(c, horizon)).collect();
    let earlier: Vec<f64> = cutoffs.iter().map(|&c| eval(c, tenth)).collect();
    let horizon_ratios: Vec<f64> = values
        .iter()
        .zip(&earlier)
        .map(|(v, e)| {
            if *e > 0.0 {
                v / e
            } else if *v > 0.0 {
                f64::INFINITY
            } else {
                1.0
            }
        })
        .collect();

    let meaningful = |i: usize| values[i] > tol;
    let growing = (0..cutoffs.len()).any(|i| meaningful(i) && horizon_ratios[i] >= GROWING_RATIO);
    let settled = (0..cutoffs.len()).all(|i| !meaningful(i) || horizon_ratios[i] <= SETTLED_RATIO);
    let last = values[values.len() - 1];
    let verdict = if growing {
        Verdict::Violated
    } else if settled && last <= tol {
        Verdict::Satisfied
    } else {
        Verdict::Inconclusive
    };
    let worst = horizon_ratios.iter().cloned().fold(0.0, f64::max);
    UiProfile {
        details: format!(
            "{label}: sup truncated at n = {horizon}; largest horizon ratio {worst:.4}; profile at cutoff {:.0e} is {last:.3e} (tolerance {tol:.1e})",
            cutoffs[cutoffs.len() - 1]
        ),
        cutoffs,
        values,
        horizon_ratios,
        verdict,
        certification: Certification::GridEvidence { horizon },
    }
}

/// Profile of `c ↦ sup_{k ≥ n0} E|X_k| 1(|X_k| > c)`.
pub fn compute_ui(model: &XModel, n0: u64, settings: &ConditionSettings) -> UiProfile {
    ui_profile(model, n0, settings, false)
}

/// Profile of `c ↦ sup_{n ≥ n0} (1/n) Σ_{k=n0}^n E|X_k| 1(|X_k| > c)`.
pub fn compute_cesaro_ui(model: &XModel, n0: u64, settings: &ConditionSettings) -> UiProfile {
    ui_profile(model, n0, settings, true)
}
