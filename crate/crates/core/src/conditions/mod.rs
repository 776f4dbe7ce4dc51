//! Analytic and grid-based checks of the hypotheses on `X`, `Y` and the
//! schedule, collected into a [`ConditionReport`].

mod engine;
mod x;
mod y;

use std::fmt;

pub use engine::{profile_integral, IntegralCheck, Profile, GROWING_RATIO, SETTLED_RATIO};
pub use x::{
    check_mean_zero, compute_c_n0, compute_cesaro_ui, compute_sup_tail_integral, compute_ui,
    truncated_moment, MeanCheck, UiProfile, UI_CUTOFFS,
};
pub use y::{minimal_envelope_y, moment_check_y, MomentCheck};

use crate::config::ExperimentConfig;
use crate::generators::{XModel, YModel};
use crate::quadrature::QuadratureSpec;
use crate::schedule::{
    build_schedule, rarity_statistic_with, MixSchedule, DEFAULT_SLOPE_TOLERANCE,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Satisfied,
    Violated,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Satisfied => "satisfied",
            Verdict::Violated => "violated",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// How a verdict was reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Certification {
    ClosedForm,
    /// Evidence from a sup truncated at `horizon`.
    GridEvidence {
        horizon: u64,
    },
}

impl fmt::Display for Certification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Certification::ClosedForm => f.write_str("closed_form"),
            Certification::GridEvidence { horizon } => write!(f, "grid_evidence(n<={horizon})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConditionId {
    ZeroMean,
    Ui,
    CesaroUi,
    SupTail,
    SupTailN0,
    CN0,
    Moment,
    Envelope,
    Rarity,
}

impl ConditionId {
    pub const ALL: [ConditionId; 9] = [
        ConditionId::ZeroMean,
        ConditionId::Ui,
        ConditionId::CesaroUi,
        ConditionId::SupTail,
        ConditionId::SupTailN0,
        ConditionId::CN0,
        ConditionId::Moment,
        ConditionId::Envelope,
        ConditionId::Rarity,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ConditionId::ZeroMean => "zero_mean",
            ConditionId::Ui => "ui",
            ConditionId::CesaroUi => "cesaro_ui",
            ConditionId::SupTail => "sup_tail",
            ConditionId::SupTailN0 => "sup_tail_n0",
            ConditionId::CN0 => "c_n0",
            ConditionId::Moment => "moment",
            ConditionId::Envelope => "envelope",
            ConditionId::Rarity => "rarity",
        }
    }

    /// Entries that enter the overall verdict. The others are stronger
    /// alternatives reported for information.
    pub fn required(self) -> bool {
        matches!(
            self,
            ConditionId::ZeroMean
                | ConditionId::CN0
                | ConditionId::Moment
                | ConditionId::Envelope
                | ConditionId::Rarity
        )
    }
}

impl fmt::Display for ConditionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionEntry {
    pub id: ConditionId,
    pub verdict: Verdict,
    pub constant: f64,
    pub certification: Certification,
    pub details: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport {
    pub entries: Vec<ConditionEntry>,
    pub overall: Verdict,
}

impl ConditionReport {
    pub fn from_entries(entries: Vec<ConditionEntry>) -> Self {
        let required = entries.iter().filter(|e| e.id.required());
        let mut overall = Verdict::Satisfied;
        for e in required {
            match e.verdict {
                Verdict::Violated => {
                    overall = Verdict::Violated;
                    break;
                }
                Verdict::Inconclusive => overall = Verdict::Inconclusive,
                Verdict::Satisfied => {}
            }
        }
        Self { entries, overall }
    }

    pub fn entry(&self, id: ConditionId) -> Option<&ConditionEntry> {
        self.entries.iter().find(|e| e.id == id)
    }

    /// One `key=value` line per field, sorted by entry order.
    pub fn to_kv(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            let id = e.id.as_str();
            out.push_str(&format!("{id}.verdict={}\n", e.verdict));
            out.push_str(&format!("{id}.constant={:e}\n", e.constant));
            out.push_str(&format!("{id}.certification={}\n", e.certification));
            out.push_str(&format!("{id}.required={}\n", e.id.required()));
        }
        out.push_str(&format!("overall={}\n", self.overall));
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            out.push_str(&format!(
                "{:<12} {:<13} {:>14.6e}  {}{}\n    {}\n",
                e.id.as_str(),
                e.verdict.as_str(),
                e.constant,
                e.certification,
                if e.id.required() {
                    ""
                } else {
                    "  [informational]"
                },
                e.details
            ));
        }
        out.push_str(&format!("overall: {}\n", self.overall));
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionSettings {
    /// Truncation horizon for sups over `n` in the X-conditions.
    pub n_probe: u64,
    /// Truncation horizon for the Y-envelope.
    pub envelope_n_max: u64,
    pub quadrature: QuadratureSpec,
    pub ui_tolerance: f64,
    pub rarity_slope_tolerance: f64,
}

impl Default for ConditionSettings {
    fn default() -> Self {
        Self {
            n_probe: 10_000,
            envelope_n_max: 10_000,
            quadrature: QuadratureSpec::default(),
            ui_tolerance: 1e-3,
            rarity_slope_tolerance: DEFAULT_SLOPE_TOLERANCE,
        }
    }
}

fn integral_entry(id: ConditionId, c: IntegralCheck) -> ConditionEntry {
    ConditionEntry {
        id,
        verdict: c.verdict,
        constant: c.value,
        certification: c.certification,
        details: c.details,
    }
}

fn ui_entry(id: ConditionId, p: UiProfile) -> ConditionEntry {
    ConditionEntry {
        id,
        verdict: p.verdict,
        constant: *p.values.last().unwrap_or(&0.0),
        certification: p.certification,
        details: p.details,
    }
}

/// Evaluates all nine conditions for one `(X, Y, schedule)` triple.
pub fn condition_report(
    x: &XModel,
    y: &YModel,
    schedule: &MixSchedule,
    settings: &ConditionSettings,
) -> ConditionReport {
    let n0 = x.n0;
    let mean = check_mean_zero(x, n0, settings.n_probe);
    let moment = moment_check_y(y, settings.envelope_n_max, &settings.quadrature);
    let rarity = rarity_statistic_with(schedule, y.a, y.eps, settings.rarity_slope_tolerance);

    let entries = vec![
        ConditionEntry {
            id: ConditionId::ZeroMean,
            verdict: mean.verdict,
            constant: mean.max_abs_mean,
            certification: Certification::ClosedForm,
            details: mean.details,
        },
        ui_entry(ConditionId::Ui, compute_ui(x, n0, settings)),
        ui_entry(ConditionId::CesaroUi, compute_cesaro_ui(x, n0, settings)),
        integral_entry(
            ConditionId::SupTail,
            compute_sup_tail_integral(x, 1, settings),
        ),
        integral_entry(
            ConditionId::SupTailN0,
            compute_sup_tail_integral(x, n0, settings),
        ),
        integral_entry(ConditionId::CN0, compute_c_n0(x, n0, settings)),
        ConditionEntry {
            id: ConditionId::Moment,
            verdict: moment.verdict,
            constant: moment.closed_form.first().map_or(f64::NAN, |v| v.1),
            certification: Certification::ClosedForm,
            details: moment.details,
        },
        integral_entry(
            ConditionId::Envelope,
            minimal_envelope_y(y, settings.envelope_n_max, &settings.quadrature),
        ),
        ConditionEntry {
            id: ConditionId::Rarity,
            verdict: if rarity.satisfied {
                Verdict::Satisfied
            } else {
                Verdict::Violated
            },
            constant: rarity.sup_statistic,
            certification: Certification::GridEvidence {
                horizon: schedule.horizon(),
            },
            details: format!(
                "sup kappa(n)/n^rho with rho = {:.6} attained at n = {}; log-log slope {}",
                rarity.rho,
                rarity.argmax_n,
                rarity
                    .trend
                    .map_or_else(|| "n/a".to_string(), |t| format!("{t:.4}"))
            ),
        },
    ];
    ConditionReport::from_entries(entries)
}

/// [`condition_report`] for a parsed experiment, on a schedule built to the
/// experiment horizon.
pub fn full_condition_report(config: &ExperimentConfig) -> crate::error::Result<ConditionReport> {
    let schedule = build_schedule(config.schedule.clone(), config.horizon)?;
    Ok(condition_report(
        &config.x_model,
        &config.y_model,
        &schedule,
        &config.conditions,
    ))
}
