//! Experiment configuration: a TOML document with one flat table per
//! module, converted into validated domain types.
//!
//! ```toml
//! [x_model]
//! family = "iid"
//! dist = "normal:1.0"
//!
//! [y_model]
//! family = "fully_dependent_pareto"
//! beta = 0.8
//! a = 0.5
//! eps = 0.0
//!
//! [schedule]
//! rule = "power"
//! rho = 0.5
//!
//! [diagnostics]
//! mode = "theorem"
//! horizon = 1000000
//! replicas = 200
//! ```

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::conditions::ConditionSettings;
use crate::dist::BaseDist;
use crate::error::{Error, Result};
use crate::generators::{OffsetRule, XModel, XVariant, YModel, YVariant};
use crate::quadrature::QuadratureSpec;
use crate::schedule::{load_positions, ScheduleRule};

/// Master seed used when a config does not set one.
pub const DEFAULT_MASTER_SEED: u64 = 20_181_105;
/// Upper bound on `horizon × replicas` unless overridden.
pub const DEFAULT_BUDGET: u64 = 4_000_000_000;
pub const MIN_HORIZON: u64 = 1_000;
pub const MIN_REPLICAS: u64 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Full mixed sequence `Z`.
    Theorem,
    /// `Σ_{k ≤ ψ(n)} X_k` only.
    XOnly,
    /// `Σ_{k ≤ κ(n)} Y_k` only.
    YOnly,
    /// Same mechanics as `Theorem`, for configurations that break a hypothesis.
    Counterexample,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Theorem => "theorem",
            Mode::XOnly => "x_only",
            Mode::YOnly => "y_only",
            Mode::Counterexample => "counterexample",
        }
    }

    pub fn uses_x(self) -> bool {
        self != Mode::YOnly
    }

    pub fn uses_y(self) -> bool {
        self != Mode::XOnly
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "theorem" => Mode::Theorem,
            "x_only" => Mode::XOnly,
            "y_only" => Mode::YOnly,
            "counterexample" => Mode::Counterexample,
            _ => {
                return Err(Error::config(
                    "diagnostics.mode",
                    format!("unknown mode `{s}`"),
                ))
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub x_model: XModel,
    pub y_model: YModel,
    pub schedule: ScheduleRule,
    /// Where explicit positions were read from; emitted instead of the
    /// positions themselves.
    pub positions_file: Option<PathBuf>,
    pub conditions: ConditionSettings,
    pub mode: Mode,
    pub horizon: u64,
    pub replicas: u64,
    pub checkpoints: Vec<u64>,
    pub master_seed: u64,
    /// Across-replica quantile used by the verdicts.
    pub quantile: f64,
    /// Per-decade factor required by the decay verdicts.
    pub decay_factor: f64,
    pub budget: Option<u64>,
}

impl ExperimentConfig {
    pub fn a(&self) -> f64 {
        self.y_model.a
    }

    pub fn eps(&self) -> f64 {
        self.y_model.eps
    }

    pub fn n0(&self) -> u64 {
        self.x_model.n0
    }

    pub fn validate(&self) -> Result<()> {
        self.x_model.validate()?;
        if self.horizon < MIN_HORIZON {
            return Err(Error::config(
                "diagnostics.horizon",
                format!(
                    "horizon must be at least {MIN_HORIZON}, got {}",
                    self.horizon
                ),
            ));
        }
        if self.replicas < MIN_REPLICAS {
            return Err(Error::config(
                "diagnostics.replicas",
                format!(
                    "replicas must be at least {MIN_REPLICAS}, got {}",
                    self.replicas
                ),
            ));
        }
        if self.checkpoints.is_empty()
            || self.checkpoints[0] == 0
            || self.checkpoints.windows(2).any(|w| w[0] >= w[1])
            || *self.checkpoints.last().unwrap() > self.horizon
        {
            return Err(Error::config(
                "diagnostics.checkpoints",
                "checkpoints must be positive, strictly increasing and at most the horizon",
            ));
        }
        if !(self.quantile > 0.0 && self.quantile < 1.0) {
            return Err(Error::config(
                "diagnostics.quantile",
                "quantile must lie in (0, 1)",
            ));
        }
        if !(self.decay_factor > 1.0 && self.decay_factor.is_finite()) {
            return Err(Error::config(
                "diagnostics.decay_factor",
                "decay factor must exceed 1",
            ));
        }
        if self.conditions.n_probe < 10 || self.conditions.envelope_n_max < 10 {
            return Err(Error::config(
                "conditions",
                "probe horizons must be at least 10",
            ));
        }
        Ok(())
    }

    /// Parses and validates a config; relative `positions_file` paths are
    /// resolved against `base_dir`.
    pub fn from_toml_str(text: &str, base_dir: Option<&Path>) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| toml_error(text, &e))?;
        raw.into_config(base_dir)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text, path.parent())
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(&RawConfig::from_config(self)).expect("config serializes")
    }
}

/// `10^{j/2}` for `j ≥ 2` below the horizon, then the horizon itself.
pub fn default_checkpoints(horizon: u64) -> Vec<u64> {
    let mut out = Vec::new();
    for j in 2.. {
        let n = 10f64.powf(j as f64 / 2.0).round() as u64;
        if n >= horizon {
            break;
        }
        out.push(n);
    }
    out.push(horizon);
    out
}

fn toml_error(text: &str, e: &toml::de::Error) -> Error {
    let line = e
        .span()
        .map(|s| text[..s.start.min(text.len())].matches('\n').count() + 1);
    let message = e.message().to_string();
    let field = message
        .split('`')
        .nth(1)
        .filter(|_| message.contains("field"))
        .map(str::to_string);
    Error::Config {
        line,
        field,
        message,
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
struct RawX {
    family: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dist: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cycle: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    generators: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    modulus: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    scale_exponent: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    offset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    offset_value: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n0: Option<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
struct RawY {
    family: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    scale_exponent: Option<f64>,
    a: f64,
    #[serde(default)]
    eps: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
struct RawSchedule {
    rule: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rho: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    positions: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    positions_file: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
struct RawConditions {
    n_probe: u64,
    envelope_n_max: u64,
    tolerance: f64,
    ui_tolerance: f64,
    rarity_slope_tolerance: f64,
}

impl Default for RawConditions {
    fn default() -> Self {
        let s = ConditionSettings::default();
        Self {
            n_probe: s.n_probe,
            envelope_n_max: s.envelope_n_max,
            tolerance: s.quadrature.tolerance,
            ui_tolerance: s.ui_tolerance,
            rarity_slope_tolerance: s.rarity_slope_tolerance,
        }
    }
}

fn default_mode() -> String {
    "theorem".into()
}
fn default_seed() -> u64 {
    DEFAULT_MASTER_SEED
}
fn default_quantile() -> f64 {
    0.9
}
fn default_decay() -> f64 {
    2.0
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
struct RawDiagnostics {
    #[serde(default = "default_mode")]
    mode: String,
    horizon: u64,
    replicas: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    checkpoints: Option<Vec<u64>>,
    #[serde(default = "default_seed")]
    seed: u64,
    #[serde(default = "default_quantile")]
    quantile: f64,
    #[serde(default = "default_decay")]
    decay_factor: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    budget: Option<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    x_model: RawX,
    y_model: RawY,
    schedule: RawSchedule,
    #[serde(default)]
    conditions: RawConditions,
    diagnostics: RawDiagnostics,
}

fn need<T>(v: Option<T>, field: &str, why: &str) -> Result<T> {
    v.ok_or_else(|| Error::config(field, format!("required {why}")))
}

fn parse_dist(s: &str, field: &str) -> Result<BaseDist> {
    let d = BaseDist::from_str(s).map_err(|e| Error::config(field, e.to_string()))?;
    d.validate()
        .map_err(|e| Error::config(field, e.to_string()))?;
    Ok(d)
}

fn model_err(section: &str) -> impl Fn(Error) -> Error + '_ {
    move |e| match e {
        Error::Config { .. } => e,
        other => Error::config(section, other.to_string()),
    }
}

impl RawX {
    fn into_model(self) -> Result<XModel> {
        let fam = self.family.as_str();
        let why = |w: &str| format!("for family `{fam}`: {w}");
        let variant = match fam {
            "zero" => XVariant::Zero,
            "iid" => XVariant::Iid(parse_dist(
                &need(self.dist, "x_model.dist", &why("base distribution"))?,
                "x_model.dist",
            )?),
            "walsh" => XVariant::WalshRademacher {
                generators: need(
                    self.generators,
                    "x_model.generators",
                    &why("generator count"),
                )?,
            },
            "congruential" => XVariant::Congruential {
                modulus: need(self.modulus, "x_model.modulus", &why("prime modulus"))?,
            },
            "heteroscedastic" => XVariant::Heteroscedastic {
                dist: parse_dist(
                    &need(self.dist, "x_model.dist", &why("base distribution"))?,
                    "x_model.dist",
                )?,
                scale_exponent: need(
                    self.scale_exponent,
                    "x_model.scale_exponent",
                    &why("scale exponent"),
                )?,
            },
            "cyclic" => XVariant::Cyclic(
                need(self.cycle, "x_model.cycle", &why("list of distributions"))?
                    .iter()
                    .map(|s| parse_dist(s, "x_model.cycle"))
                    .collect::<Result<_>>()?,
            ),
            other => {
                return Err(Error::config(
                    "x_model.family",
                    format!("unknown family `{other}`"),
                ))
            }
        };
        let value = || need(self.offset_value, "x_model.offset_value", "for this offset");
        let offset = match self.offset.as_deref().unwrap_or("none") {
            "none" => OffsetRule::None,
            "before_n0" => OffsetRule::BeforeN0 { value: value()? },
            "harmonic" => OffsetRule::Harmonic { value: value()? },
            other => {
                return Err(Error::config(
                    "x_model.offset",
                    format!("unknown offset `{other}`"),
                ))
            }
        };
        XModel::with_offset(variant, self.n0.unwrap_or(1), offset).map_err(model_err("x_model"))
    }

    fn from_model(m: &XModel) -> Self {
        let mut r = RawX::default();
        match &m.variant {
            XVariant::Zero => r.family = "zero".into(),
            XVariant::Iid(d) => {
                r.family = "iid".into();
                r.dist = Some(d.to_string());
            }
            XVariant::WalshRademacher { generators } => {
                r.family = "walsh".into();
                r.generators = Some(*generators);
            }
            XVariant::Congruential { modulus } => {
                r.family = "congruential".into();
                r.modulus = Some(*modulus);
            }
            XVariant::Heteroscedastic {
                dist,
                scale_exponent,
            } => {
                r.family = "heteroscedastic".into();
                r.dist = Some(dist.to_string());
                r.scale_exponent = Some(*scale_exponent);
            }
            XVariant::Cyclic(ds) => {
                r.family = "cyclic".into();
                r.cycle = Some(ds.iter().map(ToString::to_string).collect());
            }
        }
        match m.offset {
            OffsetRule::None => {}
            OffsetRule::BeforeN0 { value } => {
                r.offset = Some("before_n0".into());
                r.offset_value = Some(value);
            }
            OffsetRule::Harmonic { value } => {
                r.offset = Some("harmonic".into());
                r.offset_value = Some(value);
            }
        }
        r.n0 = Some(m.n0);
        r
    }
}

impl RawY {
    fn into_model(self) -> Result<YModel> {
        let fam = self.family.as_str();
        let beta = || need(self.beta, "y_model.beta", &format!("for family `{fam}`"));
        let variant = match fam {
            "zero" => YVariant::Zero,
            "iid_pareto" => YVariant::IidPareto { beta: beta()? },
            "fully_dependent_pareto" => YVariant::FullyDependentPareto { beta: beta()? },
            "comonotone_scaled" => YVariant::ComonotoneScaled {
                beta: beta()?,
                scale_exponent: need(
                    self.scale_exponent,
                    "y_model.scale_exponent",
                    "for family `comonotone_scaled`",
                )?,
            },
            "iid_cauchy" => YVariant::IidCauchy,
            other => {
                return Err(Error::config(
                    "y_model.family",
                    format!("unknown family `{other}`"),
                ))
            }
        };
        YModel::new(variant, self.a, self.eps).map_err(model_err("y_model"))
    }

    fn from_model(m: &YModel) -> Self {
        let (family, beta, scale_exponent) = match m.variant {
            YVariant::Zero => ("zero", None, None),
            YVariant::IidPareto { beta } => ("iid_pareto", Some(beta), None),
            YVariant::FullyDependentPareto { beta } => ("fully_dependent_pareto", Some(beta), None),
            YVariant::ComonotoneScaled {
                beta,
                scale_exponent,
            } => ("comonotone_scaled", Some(beta), Some(scale_exponent)),
            YVariant::IidCauchy => ("iid_cauchy", None, None),
        };
        Self {
            family: family.into(),
            beta,
            scale_exponent,
            a: m.a,
            eps: m.eps,
        }
    }
}

impl RawSchedule {
    fn into_rule(self, base_dir: Option<&Path>) -> Result<(ScheduleRule, Option<PathBuf>)> {
        let sched = |e: Error| Error::config("schedule", e.to_string());
        Ok(match self.rule.as_str() {
            "power" => (
                ScheduleRule::Power {
                    rho: need(self.rho, "schedule.rho", "for rule `power`")?,
                    c: self.c.unwrap_or(1.0),
                },
                None,
            ),
            "all_ones" => (ScheduleRule::AllOnes, None),
            "all_zeros" => (ScheduleRule::AllZeros, None),
            "explicit" => match (self.positions, self.positions_file) {
                (Some(p), None) => (ScheduleRule::Explicit(p), None),
                (None, Some(f)) => {
                    let path = PathBuf::from(&f);
                    let resolved = match base_dir {
                        Some(b) if path.is_relative() => b.join(&path),
                        _ => path.clone(),
                    };
                    (
                        ScheduleRule::Explicit(load_positions(&resolved).map_err(sched)?),
                        Some(path),
                    )
                }
                _ => {
                    return Err(Error::config(
                        "schedule.positions",
                        "rule `explicit` needs exactly one of `positions` and `positions_file`",
                    ))
                }
            },
            other => {
                return Err(Error::config(
                    "schedule.rule",
                    format!("unknown rule `{other}`"),
                ))
            }
        })
    }

    fn from_rule(rule: &ScheduleRule, file: Option<&Path>) -> Self {
        let mut r = RawSchedule {
            rule: String::new(),
            rho: None,
            c: None,
            positions: None,
            positions_file: None,
        };
        match rule {
            ScheduleRule::Power { rho, c } => {
                r.rule = "power".into();
                r.rho = Some(*rho);
                r.c = Some(*c);
            }
            ScheduleRule::Explicit(p) => {
                r.rule = "explicit".into();
                match file {
                    Some(f) => r.positions_file = Some(f.display().to_string()),
                    None => r.positions = Some(p.clone()),
                }
            }
            ScheduleRule::AllOnes => r.rule = "all_ones".into(),
            ScheduleRule::AllZeros => r.rule = "all_zeros".into(),
        }
        r
    }
}

impl RawConfig {
    fn into_config(self, base_dir: Option<&Path>) -> Result<ExperimentConfig> {
        let x_model = self.x_model.into_model()?;
        let y_model = self.y_model.into_model()?;
        let (schedule, positions_file) = self.schedule.into_rule(base_dir)?;
        let c = self.conditions;
        let conditions = ConditionSettings {
            n_probe: c.n_probe,
            envelope_n_max: c.envelope_n_max,
            quadrature: QuadratureSpec {
                tolerance: c.tolerance,
                ..QuadratureSpec::default()
            },
            ui_tolerance: c.ui_tolerance,
            rarity_slope_tolerance: c.rarity_slope_tolerance,
        };
        let d = self.diagnostics;
        let cfg = ExperimentConfig {
            x_model,
            y_model,
            schedule,
            positions_file,
            conditions,
            mode: d.mode.parse()?,
            horizon: d.horizon,
            replicas: d.replicas,
            checkpoints: d
                .checkpoints
                .unwrap_or_else(|| default_checkpoints(d.horizon)),
            master_seed: d.seed,
            quantile: d.quantile,
            decay_factor: d.decay_factor,
            budget: d.budget,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn from_config(c: &ExperimentConfig) -> Self {
        let checkpoints =
            (c.checkpoints != default_checkpoints(c.horizon)).then(|| c.checkpoints.clone());
        Self {
            x_model: RawX::from_model(&c.x_model),
            y_model: RawY::from_model(&c.y_model),
            schedule: RawSchedule::from_rule(&c.schedule, c.positions_file.as_deref()),
            conditions: RawConditions {
                n_probe: c.conditions.n_probe,
                envelope_n_max: c.conditions.envelope_n_max,
                tolerance: c.conditions.quadrature.tolerance,
                ui_tolerance: c.conditions.ui_tolerance,
                rarity_slope_tolerance: c.conditions.rarity_slope_tolerance,
            },
            diagnostics: RawDiagnostics {
                mode: c.mode.as_str().into(),
                horizon: c.horizon,
                replicas: c.replicas,
                checkpoints,
                seed: c.master_seed,
                quantile: c.quantile,
                decay_factor: c.decay_factor,
                budget: c.budget,
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASELINE: &str = r#"
[x_model]
family = "iid"
dist = "normal:1.0"

[y_model]
family = "fully_dependent_pareto"
beta = 0.8
a = 0.5

[schedule]
rule = "power"
rho = 0.5

[diagnostics]
horizon = 1000000
replicas = 200
"#;

    #[test]
    fn parses_minimal_config() {
        let c = ExperimentConfig::from_toml_str(BASELINE, None).unwrap();
        assert_eq!(c.mode, Mode::Theorem);
        assert_eq!(c.master_seed, DEFAULT_MASTER_SEED);
        assert_eq!(c.a(), 0.5);
        assert_eq!(c.eps(), 0.0);
        assert_eq!(c.n0(), 1);
        assert_eq!(c.schedule, ScheduleRule::Power { rho: 0.5, c: 1.0 });
        assert_eq!(c.checkpoints.last(), Some(&1_000_000));
        assert!(c.checkpoints.contains(&10_000) && c.checkpoints.contains(&100_000));
    }

    #[test]
    fn emit_parse_emit_is_stable() {
        let c = ExperimentConfig::from_toml_str(BASELINE, None).unwrap();
        let once = c.to_toml_string();
        let again = ExperimentConfig::from_toml_str(&once, None).unwrap();
        assert_eq!(again, c);
        assert_eq!(again.to_toml_string(), once);
    }

    #[test]
    fn missing_a_names_the_field() {
        let text = BASELINE.replace("a = 0.5\n", "");
        match ExperimentConfig::from_toml_str(&text, None) {
            Err(Error::Config { field, line, .. }) => {
                assert_eq!(field.as_deref(), Some("a"));
                assert!(line.is_some());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = BASELINE.replace("rho = 0.5", "rho = 0.5\nrhoo = 1");
        let e = ExperimentConfig::from_toml_str(&text, None).unwrap_err();
        assert!(matches!(e, Error::Config { line: Some(_), .. }), "{e}");
    }

    #[test]
    fn invariant_violations() {
        for (from, to) in [
            ("replicas = 200", "replicas = 1"),
            ("horizon = 1000000", "horizon = 999"),
            ("replicas = 200", "replicas = 200\ncheckpoints = [10, 10]"),
            (
                "replicas = 200",
                "replicas = 200\ncheckpoints = [10, 2000000]",
            ),
            ("beta = 0.8", "beta = -1.0"),
        ] {
            let text = BASELINE.replace(from, to);
            assert!(
                matches!(
                    ExperimentConfig::from_toml_str(&text, None),
                    Err(Error::Config { .. })
                ),
                "{to}"
            );
        }
    }

    #[test]
    fn all_families_round_trip() {
        let xs = [
            "family = \"zero\"",
            "family = \"walsh\"\ngenerators = 17",
            "family = \"congruential\"\nmodulus = 1000003",
            "family = \"heteroscedastic\"\ndist = \"table:-1.0,0.0,2.0\"\nscale_exponent = 0.25",
            "family = \"cyclic\"\ncycle = [\"normal:1.0\", \"centered_uniform:1.0\", \"rademacher\"]",
            "family = \"iid\"\ndist = \"centered_uniform:0.5\"\noffset = \"before_n0\"\noffset_value = 0.1\nn0 = 5",
        ];
        for x in xs {
            let text = BASELINE.replace("family = \"iid\"\ndist = \"normal:1.0\"", x);
            let c = ExperimentConfig::from_toml_str(&text, None).unwrap();
            let s = c.to_toml_string();
            assert_eq!(
                ExperimentConfig::from_toml_str(&s, None)
                    .unwrap()
                    .to_toml_string(),
                s
            );
        }
        let text = BASELINE
            .replace(
                "rule = \"power\"\nrho = 0.5",
                "rule = \"explicit\"\npositions = [1, 4, 9]",
            )
            .replace(
                "family = \"fully_dependent_pareto\"",
                "family = \"comonotone_scaled\"\nscale_exponent = 0.3",
            );
        let c = ExperimentConfig::from_toml_str(&text, None).unwrap();
        assert_eq!(c.schedule, ScheduleRule::Explicit(vec![1, 4, 9]));
        let s = c.to_toml_string();
        assert_eq!(
            ExperimentConfig::from_toml_str(&s, None)
                .unwrap()
                .to_toml_string(),
            s
        );
    }

    #[test]
    fn default_checkpoint_grid() {
        assert_eq!(default_checkpoints(1000), vec![10, 32, 100, 316, 1000]);
        assert_eq!(default_checkpoints(5000).last(), Some(&5000));
    }
}
