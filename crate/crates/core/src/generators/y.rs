use std::f64::consts::{FRAC_2_PI, PI};

use rand_core::RngCore;

use super::TailFamily;
use crate::error::{Error, Result};
use crate::rng::{unit_open, unit_open_closed, SeedStream};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum YVariant {
    Zero,
    /// Independent Pareto(beta) with `x_min = 1`.
    IidPareto {
        beta: f64,
    },
    /// `Y_k = H` for one Pareto(beta) draw `H` per path.
    FullyDependentPareto {
        beta: f64,
    },
    /// `Y_k = k^scale_exponent · H`, one Pareto(beta) draw `H` per path.
    ComonotoneScaled {
        beta: f64,
        scale_exponent: f64,
    },
    /// Independent standard Cauchy.
    IidCauchy,
}

/// Heavy-tailed source with its fractional moment order `a` and envelope
/// growth exponent `eps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct YModel {
    pub variant: YVariant,
    pub a: f64,
    pub eps: f64,
}

impl YModel {
    /// Parameters are validated for well-formedness only: a Pareto index
    /// `beta <= a` is accepted so that the moment check can report it.
    pub fn new(variant: YVariant, a: f64, eps: f64) -> Result<Self> {
        if !(a > 0.0 && a < 1.0) {
            return Err(Error::InvalidModel(format!(
                "a must lie in (0, 1), got {a}"
            )));
        }
        if !(eps >= 0.0 && eps.is_finite()) {
            return Err(Error::InvalidModel(format!(
                "eps must be finite and >= 0, got {eps}"
            )));
        }
        match variant {
            YVariant::IidPareto { beta }
            | YVariant::FullyDependentPareto { beta }
            | YVariant::ComonotoneScaled { beta, .. }
                if !(beta > 0.0 && beta.is_finite()) =>
            {
                return Err(Error::InvalidModel(format!(
                    "beta must be positive, got {beta}"
                )));
            }
            YVariant::ComonotoneScaled { scale_exponent, .. } if !scale_exponent.is_finite() => {
                return Err(Error::InvalidModel("scale exponent must be finite".into()));
            }
            _ => {}
        }
        Ok(Self { variant, a, eps })
    }

    pub fn beta(&self) -> Option<f64> {
        match self.variant {
            YVariant::IidPareto { beta }
            | YVariant::FullyDependentPareto { beta }
            | YVariant::ComonotoneScaled { beta, .. } => Some(beta),
            _ => None,
        }
    }

    /// Multiplier `c_k` of the comonotone family (1 otherwise).
    pub fn scale_at(&self, k: u64) -> f64 {
        match self.variant {
            YVariant::ComonotoneScaled { scale_exponent, .. } => (k as f64).powf(scale_exponent),
            _ => 1.0,
        }
    }

    /// Closed-form `E|Y_k|^a` (infinite when the moment diverges).
    pub fn fractional_moment(&self, k: u64) -> f64 {
        let a = self.a;
        match self.variant {
            YVariant::Zero => 0.0,
            YVariant::IidCauchy => 1.0 / (PI * a / 2.0).cos(),
            _ => {
                let beta = self.beta().unwrap();
                if beta > a {
                    self.scale_at(k).powf(a) * beta / (beta - a)
                } else {
                    f64::INFINITY
                }
            }
        }
    }

    /// Whether paths share one underlying draw across all indices.
    pub fn is_path_level(&self) -> bool {
        matches!(
            self.variant,
            YVariant::FullyDependentPareto { .. } | YVariant::ComonotoneScaled { .. }
        )
    }
}

impl TailFamily for YModel {
    /// `P(|Y_k|^a > x)`.
    fn tail(&self, k: u64, x: f64) -> f64 {
        let a = self.a;
        match self.variant {
            YVariant::Zero => 0.0,
            YVariant::IidCauchy => {
                if x <= 0.0 {
                    1.0
                } else {
                    FRAC_2_PI * x.powf(-1.0 / a).atan()
                }
            }
            _ => {
                let beta = self.beta().unwrap();
                if x <= 0.0 {
                    return 1.0;
                }
                let c = self.scale_at(k).powf(beta);
                (c * x.powf(-beta / a)).min(1.0)
            }
        }
    }

    fn tail_integral_beyond(&self, k: u64, x: f64) -> f64 {
        let a = self.a;
        match self.variant {
            YVariant::Zero => 0.0,
            YVariant::IidCauchy => {
                // atan(u) <= u gives the power-law bound
                let r = 1.0 / a;
                FRAC_2_PI * x.max(f64::MIN_POSITIVE).powf(1.0 - r) / (r - 1.0)
            }
            _ => {
                let beta = self.beta().unwrap();
                let r = beta / a;
                if r <= 1.0 {
                    return f64::INFINITY;
                }
                let c = self.scale_at(k).powf(beta);
                let knee = c.powf(1.0 / r);
                if x >= knee {
                    c * x.powf(1.0 - r) / (r - 1.0)
                } else {
                    (knee - x) + c * knee.powf(1.0 - r) / (r - 1.0)
                }
            }
        }
    }

    fn remainder_is_exact(&self) -> bool {
        !matches!(self.variant, YVariant::IidCauchy)
    }

    fn breakpoints(&self, k: u64) -> Vec<f64> {
        match self.variant {
            YVariant::Zero | YVariant::IidCauchy => vec![],
            _ => vec![self.scale_at(k).powf(self.a)],
        }
    }

    fn identically_distributed(&self, _from: u64) -> bool {
        match self.variant {
            YVariant::ComonotoneScaled { scale_exponent, .. } => scale_exponent == 0.0,
            _ => true,
        }
    }

    fn dominating_indices(&self, lo: u64, hi: u64) -> Vec<u64> {
        if lo == hi {
            vec![lo]
        } else {
            vec![lo, hi]
        }
    }
}

/// Per-path sampler for the Y-family.
pub struct YSampler<'a> {
    model: &'a YModel,
    seed: SeedStream,
    path_draw: f64,
}

impl<'a> YSampler<'a> {
    pub fn new(model: &'a YModel, seed: SeedStream) -> Self {
        let path_draw = match model.variant {
            YVariant::FullyDependentPareto { beta } | YVariant::ComonotoneScaled { beta, .. } => {
                let u = unit_open_closed(seed.path_rng().next_u64());
                u.powf(-1.0 / beta)
            }
            _ => 0.0,
        };
        Self {
            model,
            seed,
            path_draw,
        }
    }

    /// The single per-path draw `H` of the dependent variants.
    pub fn path_draw(&self) -> f64 {
        self.path_draw
    }

    pub fn fill(&self, start: u64, out: &mut [f64]) {
        match self.model.variant {
            YVariant::Zero => out.fill(0.0),
            YVariant::FullyDependentPareto { .. } => out.fill(self.path_draw),
            YVariant::ComonotoneScaled { scale_exponent, .. } => {
                for (i, o) in out.iter_mut().enumerate() {
                    *o = ((start + i as u64) as f64).powf(scale_exponent) * self.path_draw;
                }
            }
            YVariant::IidPareto { beta } => {
                let mut rng = self.seed.index_rng(start);
                let inv = -1.0 / beta;
                for o in out.iter_mut() {
                    *o = unit_open_closed(rng.pair().0).powf(inv);
                }
            }
            YVariant::IidCauchy => {
                let mut rng = self.seed.index_rng(start);
                for o in out.iter_mut() {
                    *o = (PI * (unit_open(rng.pair().0) - 0.5)).tan();
                }
            }
        }
    }
}
