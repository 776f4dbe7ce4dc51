//! Base marginal distributions for the X-family, with closed-form tails and
//! tail integrals under an affine map `s * B + mu`.

use std::f64::consts::{PI, SQRT_2};
use std::fmt;

use statrs::function::erf::erfc;

use crate::error::{Error, Result};
use crate::rng::{unit_closed_open, unit_open, unit_open_closed};

const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// Quantile table at equally spaced probabilities `i / L`; the distribution is
/// the mixture of `L` uniforms on consecutive quantile segments.
#[derive(Debug, Clone, PartialEq)]
pub struct InverseCdfTable {
    quantiles: Vec<f64>,
}

impl InverseCdfTable {
    pub fn new(quantiles: Vec<f64>) -> Result<Self> {
        if quantiles.len() < 2 {
            return Err(Error::InvalidModel(
                "inverse-CDF table needs at least two quantiles".into(),
            ));
        }
        if quantiles.iter().any(|q| !q.is_finite()) {
            return Err(Error::InvalidModel(
                "inverse-CDF table must be finite".into(),
            ));
        }
        if quantiles.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidModel(
                "inverse-CDF table must be nondecreasing".into(),
            ));
        }
        Ok(Self { quantiles })
    }

    pub fn quantiles(&self) -> &[f64] {
        &self.quantiles
    }

    fn segments(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.quantiles.windows(2).map(|w| (w[0], w[1]))
    }

    fn weight(&self) -> f64 {
        1.0 / (self.quantiles.len() - 1) as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum BaseDist {
    Normal { sigma: f64 },
    CenteredUniform { half_width: f64 },
    Rademacher,
    Table(InverseCdfTable),
}

impl BaseDist {
    pub fn validate(&self) -> Result<()> {
        match self {
            BaseDist::Normal { sigma } if !(*sigma > 0.0 && sigma.is_finite()) => Err(
                Error::InvalidModel(format!("normal sigma must be positive, got {sigma}")),
            ),
            BaseDist::CenteredUniform { half_width }
                if !(*half_width > 0.0 && half_width.is_finite()) =>
            {
                Err(Error::InvalidModel(format!(
                    "uniform half-width must be positive, got {half_width}"
                )))
            }
            _ => Ok(()),
        }
    }

    pub fn mean(&self) -> f64 {
        match self {
            BaseDist::Table(t) => {
                t.segments().map(|(l, r)| 0.5 * (l + r)).sum::<f64>() * t.weight()
            }
            _ => 0.0,
        }
    }

    /// Largest possible |B|, or infinity.
    pub fn abs_bound(&self) -> f64 {
        match self {
            BaseDist::Normal { .. } => f64::INFINITY,
            BaseDist::CenteredUniform { half_width } => *half_width,
            BaseDist::Rademacher => 1.0,
            BaseDist::Table(t) => t.quantiles.iter().fold(0.0, |m, q| m.max(q.abs())),
        }
    }

    /// Draw from two raw 64-bit words.
    #[inline]
    pub(crate) fn sample(&self, w1: u64, w2: u64) -> f64 {
        match self {
            BaseDist::Normal { sigma } => {
                let r = (-2.0 * unit_open_closed(w1).ln()).sqrt();
                sigma * r * (2.0 * PI * unit_closed_open(w2)).cos()
            }
            BaseDist::CenteredUniform { half_width } => half_width * (2.0 * unit_open(w1) - 1.0),
            BaseDist::Rademacher => {
                if w1 >> 63 == 0 {
                    1.0
                } else {
                    -1.0
                }
            }
            BaseDist::Table(t) => {
                let segs = t.quantiles.len() - 1;
                let pos = unit_closed_open(w1) * segs as f64;
                let i = (pos.floor() as usize).min(segs - 1);
                let (l, r) = (t.quantiles[i], t.quantiles[i + 1]);
                l + (pos - i as f64) * (r - l)
            }
        }
    }

    /// P(B > t).
    pub fn survival(&self, t: f64) -> f64 {
        match self {
            BaseDist::Normal { sigma } => 0.5 * erfc(t / (sigma * SQRT_2)),
            BaseDist::CenteredUniform { half_width } => {
                segment_survival(-half_width, *half_width, t)
            }
            BaseDist::Rademacher => 0.5 * (point_survival(-1.0, t) + point_survival(1.0, t)),
            BaseDist::Table(tab) => {
                tab.segments()
                    .map(|(l, r)| segment_survival(l, r, t))
                    .sum::<f64>()
                    * tab.weight()
            }
        }
    }

    /// P(B < t).
    pub fn below(&self, t: f64) -> f64 {
        match self {
            BaseDist::Normal { sigma } => 0.5 * erfc(-t / (sigma * SQRT_2)),
            BaseDist::CenteredUniform { half_width } => segment_below(-half_width, *half_width, t),
            BaseDist::Rademacher => 0.5 * (point_below(-1.0, t) + point_below(1.0, t)),
            BaseDist::Table(tab) => {
                tab.segments()
                    .map(|(l, r)| segment_below(l, r, t))
                    .sum::<f64>()
                    * tab.weight()
            }
        }
    }

    /// ∫_v^∞ P(B > u) du.
    pub fn upper_integral(&self, v: f64) -> f64 {
        match self {
            BaseDist::Normal { sigma } => {
                let z = v / sigma;
                sigma * (INV_SQRT_2PI * (-0.5 * z * z).exp() - z * 0.5 * erfc(z / SQRT_2))
            }
            BaseDist::CenteredUniform { half_width } => segment_upper(-half_width, *half_width, v),
            BaseDist::Rademacher => {
                0.5 * (segment_upper(-1.0, -1.0, v) + segment_upper(1.0, 1.0, v))
            }
            BaseDist::Table(tab) => {
                tab.segments()
                    .map(|(l, r)| segment_upper(l, r, v))
                    .sum::<f64>()
                    * tab.weight()
            }
        }
    }

    /// ∫_{-∞}^v P(B < u) du.
    pub fn lower_integral(&self, v: f64) -> f64 {
        match self {
            BaseDist::Normal { .. } | BaseDist::CenteredUniform { .. } | BaseDist::Rademacher => {
                self.upper_integral(-v)
            }
            BaseDist::Table(tab) => {
                tab.segments()
                    .map(|(l, r)| segment_lower(l, r, v))
                    .sum::<f64>()
                    * tab.weight()
            }
        }
    }

    /// P(|s B + mu| > x) for x ≥ 0, s ≥ 0.
    pub fn affine_abs_tail(&self, scale: f64, shift: f64, x: f64) -> f64 {
        if scale == 0.0 {
            return if shift.abs() > x { 1.0 } else { 0.0 };
        }
        let p = self.survival((x - shift) / scale) + self.below((-x - shift) / scale);
        p.clamp(0.0, 1.0)
    }

    /// ∫_x^∞ P(|s B + mu| > t) dt for x ≥ 0.
    pub fn affine_abs_tail_integral(&self, scale: f64, shift: f64, x: f64) -> f64 {
        if scale == 0.0 {
            return (shift.abs() - x).max(0.0);
        }
        let up = self.upper_integral((x - shift) / scale);
        let lo = self.lower_integral((-x - shift) / scale);
        (scale * (up + lo)).max(0.0)
    }

    /// Points where the tail of |s B + mu| is not smooth.
    pub fn affine_breakpoints(&self, scale: f64, shift: f64) -> Vec<f64> {
        let knots: Vec<f64> = match self {
            BaseDist::Normal { .. } => vec![],
            BaseDist::CenteredUniform { half_width } => vec![-half_width, *half_width],
            BaseDist::Rademacher => vec![-1.0, 1.0],
            BaseDist::Table(t) => t.quantiles.clone(),
        };
        let mut out: Vec<f64> = knots
            .into_iter()
            .map(|q| (scale * q + shift).abs())
            .chain((shift != 0.0).then_some(shift.abs()))
            .filter(|v| *v > 0.0)
            .collect();
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }
}

impl fmt::Display for BaseDist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseDist::Normal { sigma } => write!(f, "normal:{sigma:?}"),
            BaseDist::CenteredUniform { half_width } => {
                write!(f, "centered_uniform:{half_width:?}")
            }
            BaseDist::Rademacher => write!(f, "rademacher"),
            BaseDist::Table(t) => {
                write!(f, "table:")?;
                for (i, q) in t.quantiles.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{q:?}")?;
                }
                Ok(())
            }
        }
    }
}

impl std::str::FromStr for BaseDist {
    type Err = Error;

    /// `normal:SIGMA`, `centered_uniform:HALF_WIDTH`, `rademacher`,
    /// `table:q0,q1,...`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n.trim(), Some(a.trim())),
            None => (s.trim(), None),
        };
        let number = |a: Option<&str>| -> Result<f64> {
            a.ok_or_else(|| Error::InvalidModel(format!("`{name}` needs a parameter")))?
                .parse::<f64>()
                .map_err(|e| Error::InvalidModel(format!("bad parameter in `{s}`: {e}")))
        };
        let dist = match name {
            "normal" => BaseDist::Normal {
                sigma: number(arg)?,
            },
            "centered_uniform" => BaseDist::CenteredUniform {
                half_width: number(arg)?,
            },
            "rademacher" => BaseDist::Rademacher,
            "table" => {
                let qs = arg
                    .ok_or_else(|| Error::InvalidModel("`table` needs quantiles".into()))?
                    .split(',')
                    .map(|v| v.trim().parse::<f64>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|e| Error::InvalidModel(format!("bad table `{s}`: {e}")))?;
                BaseDist::Table(InverseCdfTable::new(qs)?)
            }
            other => {
                return Err(Error::InvalidModel(format!(
                    "unknown distribution `{other}`"
                )))
            }
        };
        dist.validate()?;
        Ok(dist)
    }
}

fn point_survival(p: f64, t: f64) -> f64 {
    if t < p {
        1.0
    } else {
        0.0
    }
}

fn point_below(p: f64, t: f64) -> f64 {
    if t > p {
        1.0
    } else {
        0.0
    }
}

// Uniform on [l, r]; l == r is a point mass.
fn segment_survival(l: f64, r: f64, t: f64) -> f64 {
    if r == l {
        point_survival(l, t)
    } else {
        ((r - t) / (r - l)).clamp(0.0, 1.0)
    }
}

fn segment_below(l: f64, r: f64, t: f64) -> f64 {
    if r == l {
        point_below(l, t)
    } else {
        ((t - l) / (r - l)).clamp(0.0, 1.0)
    }
}

fn segment_upper(l: f64, r: f64, v: f64) -> f64 {
    if v >= r {
        0.0
    } else if v <= l {
        (l - v) + 0.5 * (r - l)
    } else {
        (r - v) * (r - v) / (2.0 * (r - l))
    }
}

fn segment_lower(l: f64, r: f64, v: f64) -> f64 {
    if v <= l {
        0.0
    } else if v >= r {
        (v - r) + 0.5 * (r - l)
    } else {
        (v - l) * (v - l) / (2.0 * (r - l))
    }
}
