use rand_core::RngCore;

use super::TailFamily;
use crate::dist::BaseDist;
use crate::error::{Error, Result};
use crate::rng::{IndexRng, SeedStream};

#[derive(Debug, Clone, PartialEq)]
pub enum XVariant {
    /// `X_k ≡ 0` (plus offset).
    Zero,
    Iid(BaseDist),
    /// Sign products over nonempty subsets of `generators` independent
    /// Rademacher signs; index `k` enumerates the subset with bit mask `k`.
    WalshRademacher {
        generators: u32,
    },
    /// `(U + kV) mod q`, centered and scaled to [-1, 1], with `U, V` uniform
    /// on `Z_q`.
    Congruential {
        modulus: u64,
    },
    /// `X_k = k^scale_exponent · B_k`.
    Heteroscedastic {
        dist: BaseDist,
        scale_exponent: f64,
    },
    /// `X_k` drawn from `dists[(k - 1) % len]`.
    Cyclic(Vec<BaseDist>),
}

/// Deterministic additive offset `mu_k`, used to model mean violations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OffsetRule {
    None,
    /// `mu_k = value` for `k < n0`, zero afterwards.
    BeforeN0 {
        value: f64,
    },
    /// `mu_k = value / k` for every `k`.
    Harmonic {
        value: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct XModel {
    pub variant: XVariant,
    pub n0: u64,
    pub offset: OffsetRule,
}

impl XModel {
    pub fn new(variant: XVariant, n0: u64) -> Result<Self> {
        Self::with_offset(variant, n0, OffsetRule::None)
    }

    pub fn with_offset(variant: XVariant, n0: u64, offset: OffsetRule) -> Result<Self> {
        let m = Self {
            variant,
            n0,
            offset,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn iid(dist: BaseDist) -> Result<Self> {
        Self::new(XVariant::Iid(dist), 1)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n0 == 0 {
            return Err(Error::InvalidModel("n0 must be at least 1".into()));
        }
        match &self.variant {
            XVariant::Zero => {}
            XVariant::Iid(d) => d.validate()?,
            XVariant::WalshRademacher { generators } => {
                if !(1..=63).contains(generators) {
                    return Err(Error::InvalidModel(format!(
                        "walsh_rademacher needs 1..=63 generators, got {generators}"
                    )));
                }
            }
            XVariant::Congruential { modulus } => {
                if *modulus < 3 || !is_prime(*modulus) || *modulus > (1 << 52) {
                    return Err(Error::InvalidModel(format!(
                        "congruential modulus must be an odd prime below 2^52, got {modulus}"
                    )));
                }
            }
            XVariant::Heteroscedastic {
                dist,
                scale_exponent,
            } => {
                dist.validate()?;
                if !scale_exponent.is_finite() {
                    return Err(Error::InvalidModel("scale exponent must be finite".into()));
                }
            }
            XVariant::Cyclic(ds) => {
                if ds.is_empty() {
                    return Err(Error::InvalidModel(
                        "cyclic family needs a distribution".into(),
                    ));
                }
                for d in ds {
                    d.validate()?;
                }
            }
        }
        let v = match self.offset {
            OffsetRule::None => 0.0,
            OffsetRule::BeforeN0 { value } | OffsetRule::Harmonic { value } => value,
        };
        if !v.is_finite() {
            return Err(Error::InvalidModel("offset must be finite".into()));
        }
        Ok(())
    }

    /// Indices per structured block, if the variant has one.
    pub fn capacity(&self) -> Option<u64> {
        match self.variant {
            XVariant::WalshRademacher { generators } => Some((1u64 << generators) - 1),
            XVariant::Congruential { modulus } => Some(modulus - 1),
            _ => None,
        }
    }

    fn variant_name(&self) -> &'static str {
        match self.variant {
            XVariant::Zero => "zero",
            XVariant::Iid(_) => "iid",
            XVariant::WalshRademacher { .. } => "walsh_rademacher",
            XVariant::Congruential { .. } => "congruential",
            XVariant::Heteroscedastic { .. } => "heteroscedastic",
            XVariant::Cyclic(_) => "cyclic",
        }
    }

    pub fn offset_at(&self, k: u64) -> f64 {
        match self.offset {
            OffsetRule::None => 0.0,
            OffsetRule::BeforeN0 { value } => {
                if k < self.n0 {
                    value
                } else {
                    0.0
                }
            }
            OffsetRule::Harmonic { value } => value / k as f64,
        }
    }

    fn scale_at(&self, k: u64) -> f64 {
        match self.variant {
            XVariant::Heteroscedastic { scale_exponent, .. } => (k as f64).powf(scale_exponent),
            XVariant::Zero => 0.0,
            _ => 1.0,
        }
    }

    /// Base law of index `k` as `(distribution, scale)`; `None` for the
    /// discrete congruential family.
    fn base_at(&self, k: u64) -> Option<(&BaseDist, f64)> {
        // scale 0 turns any base law into the point mass at the offset
        const RADEMACHER: BaseDist = BaseDist::Rademacher;
        match &self.variant {
            XVariant::Zero => Some((&RADEMACHER, 0.0)),
            XVariant::Iid(d) => Some((d, 1.0)),
            XVariant::WalshRademacher { .. } => Some((&RADEMACHER, 1.0)),
            XVariant::Congruential { .. } => None,
            XVariant::Heteroscedastic { dist, .. } => Some((dist, self.scale_at(k))),
            XVariant::Cyclic(ds) => Some((&ds[((k - 1) % ds.len() as u64) as usize], 1.0)),
        }
    }

    /// Analytic mean of `X_k`.
    pub fn mean(&self, k: u64) -> f64 {
        let base = match self.base_at(k) {
            Some((d, s)) => s * d.mean(),
            None => 0.0,
        };
        base + self.offset_at(k)
    }

    /// Largest attainable `|X_k|`.
    pub fn abs_bound(&self, k: u64) -> f64 {
        let mu = self.offset_at(k).abs();
        match self.base_at(k) {
            Some((d, s)) => {
                if s == 0.0 {
                    mu
                } else {
                    s * d.abs_bound() + mu
                }
            }
            None => 1.0 + mu,
        }
    }

    /// Centered image of a residue in `0..q`, scaled to [-1, 1].
    fn congruential_value(q: u64, r: u64) -> f64 {
        (2.0 * r as f64 - (q - 1) as f64) / (q - 1) as f64
    }

    fn congruential_tail(q: u64, shift: f64, x: f64) -> f64 {
        // v_r + mu > x  <=>  r > (x - mu + 1)(q - 1)/2
        let h = (q - 1) as f64 / 2.0;
        let qf = q as f64;
        let t_hi = (x - shift + 1.0) * h;
        let above = if t_hi < 0.0 {
            qf
        } else {
            (qf - 1.0 - t_hi.floor()).clamp(0.0, qf)
        };
        // v_r + mu < -x  <=>  r < (1 - x - mu)(q - 1)/2
        let t_lo = (1.0 - x - shift) * h;
        let below = if t_lo <= 0.0 {
            0.0
        } else {
            t_lo.ceil().min(qf)
        };
        ((above + below) / qf).clamp(0.0, 1.0)
    }
}

impl TailFamily for XModel {
    fn tail(&self, k: u64, x: f64) -> f64 {
        let mu = self.offset_at(k);
        match self.base_at(k) {
            Some((d, s)) => d.affine_abs_tail(s, mu, x),
            None => match self.variant {
                XVariant::Congruential { modulus } => Self::congruential_tail(modulus, mu, x),
                _ => unreachable!(),
            },
        }
    }

    fn tail_integral_beyond(&self, k: u64, x: f64) -> f64 {
        let mu = self.offset_at(k);
        match self.base_at(k) {
            Some((d, s)) => d.affine_abs_tail_integral(s, mu, x),
            None => match self.variant {
                XVariant::Congruential { modulus } => {
                    let total: f64 = (0..modulus)
                        .map(|r| ((Self::congruential_value(modulus, r) + mu).abs() - x).max(0.0))
                        .sum();
                    total / modulus as f64
                }
                _ => unreachable!(),
            },
        }
    }

    fn breakpoints(&self, k: u64) -> Vec<f64> {
        let mu = self.offset_at(k);
        match self.base_at(k) {
            Some((d, s)) => {
                if s == 0.0 {
                    (mu != 0.0).then_some(mu.abs()).into_iter().collect()
                } else {
                    d.affine_breakpoints(s, mu)
                }
            }
            None => match self.variant {
                XVariant::Congruential { modulus } if modulus <= 2001 => {
                    let mut v: Vec<f64> = (0..modulus)
                        .map(|r| (Self::congruential_value(modulus, r) + mu).abs())
                        .filter(|v| *v > 0.0)
                        .collect();
                    v.sort_by(f64::total_cmp);
                    v.dedup();
                    v
                }
                _ => vec![],
            },
        }
    }

    fn identically_distributed(&self, from: u64) -> bool {
        let offset_ok = !matches!(self.offset, OffsetRule::Harmonic { value } if value != 0.0)
            && (from >= self.n0
                || !matches!(self.offset, OffsetRule::BeforeN0 { value } if value != 0.0));
        offset_ok
            && match &self.variant {
                XVariant::Heteroscedastic { scale_exponent, .. } => *scale_exponent == 0.0,
                XVariant::Cyclic(ds) => ds.iter().all(|d| *d == ds[0]),
                _ => true,
            }
    }

    fn period(&self, from: u64) -> Option<u64> {
        if self.identically_distributed(from) {
            return Some(1);
        }
        match (&self.variant, self.offset) {
            (XVariant::Cyclic(ds), OffsetRule::None) => Some(ds.len() as u64),
            (XVariant::Cyclic(ds), OffsetRule::BeforeN0 { .. }) if from >= self.n0 => {
                Some(ds.len() as u64)
            }
            _ => None,
        }
    }

    fn dominating_indices(&self, lo: u64, hi: u64) -> Vec<u64> {
        let mut idx = vec![lo, hi];
        if let XVariant::Cyclic(ds) = &self.variant {
            idx.extend((lo..hi.min(lo + ds.len() as u64)).take(ds.len()));
        }
        if matches!(self.offset, OffsetRule::BeforeN0 { .. }) && lo < self.n0 {
            idx.push(self.n0.min(hi));
        }
        idx.sort_unstable();
        idx.dedup();
        idx
    }
}

/// Per-path sampler for the X-family. Path-level draws (Walsh signs,
/// congruential `U, V`) are taken once at construction.
pub struct XSampler<'a> {
    model: &'a XModel,
    seed: SeedStream,
    mask: u64,
    cong_uv: (u64, u64),
}

impl<'a> XSampler<'a> {
    pub fn new(model: &'a XModel, seed: SeedStream) -> Self {
        let mut path = seed.path_rng();
        let (mask, cong_uv) = match model.variant {
            XVariant::WalshRademacher { generators } => {
                (path.next_u64() & ((1u64 << generators) - 1), (0, 0))
            }
            XVariant::Congruential { modulus } => {
                let u = uniform_below(&mut path, modulus);
                let v = uniform_below(&mut path, modulus);
                (0, (u, v))
            }
            _ => (0, (0, 0)),
        };
        Self {
            model,
            seed,
            mask,
            cong_uv,
        }
    }

    /// Fill `out` with `X_start, X_{start+1}, ...`.
    pub fn fill(&self, start: u64, out: &mut [f64]) -> Result<()> {
        if out.is_empty() {
            return Ok(());
        }
        let last = start + out.len() as u64 - 1;
        if let Some(cap) = self.model.capacity() {
            if last > cap {
                return Err(Error::Capacity {
                    variant: self.model.variant_name(),
                    limit: cap,
                    requested: last,
                });
            }
        }
        let model = self.model;
        let offsets = !matches!(model.offset, OffsetRule::None);
        match &model.variant {
            XVariant::Zero => out.fill(0.0),
            XVariant::Iid(d) => {
                let mut rng = self.seed.index_rng(start);
                fill_from(&mut rng, out, |_, w1, w2| d.sample(w1, w2));
            }
            XVariant::Heteroscedastic {
                dist,
                scale_exponent,
            } => {
                let mut rng = self.seed.index_rng(start);
                fill_from(&mut rng, out, |i, w1, w2| {
                    ((start + i) as f64).powf(*scale_exponent) * dist.sample(w1, w2)
                });
            }
            XVariant::Cyclic(ds) => {
                let mut rng = self.seed.index_rng(start);
                let len = ds.len() as u64;
                fill_from(&mut rng, out, |i, w1, w2| {
                    ds[((start + i - 1) % len) as usize].sample(w1, w2)
                });
            }
            XVariant::WalshRademacher { .. } => {
                for (i, o) in out.iter_mut().enumerate() {
                    let k = start + i as u64;
                    *o = if (k & self.mask).count_ones().is_multiple_of(2) {
                        1.0
                    } else {
                        -1.0
                    };
                }
            }
            XVariant::Congruential { modulus } => {
                let q = *modulus;
                let (u, v) = self.cong_uv;
                for (i, o) in out.iter_mut().enumerate() {
                    let k = (start + i as u64) % q;
                    let r = ((u as u128 + k as u128 * v as u128) % q as u128) as u64;
                    *o = XModel::congruential_value(q, r);
                }
            }
        }
        if offsets {
            for (i, o) in out.iter_mut().enumerate() {
                *o += model.offset_at(start + i as u64);
            }
        }
        Ok(())
    }
}

#[inline]
fn fill_from(rng: &mut IndexRng, out: &mut [f64], mut f: impl FnMut(u64, u64, u64) -> f64) {
    for (i, o) in out.iter_mut().enumerate() {
        let (w1, w2) = rng.pair();
        *o = f(i as u64, w1, w2);
    }
}

/// Unbiased uniform integer in `0..n` (Lemire's rejection method).
fn uniform_below(rng: &mut impl RngCore, n: u64) -> u64 {
    let threshold = n.wrapping_neg() % n;
    loop {
        let m = rng.next_u64() as u128 * n as u128;
        if (m as u64) >= threshold {
            return (m >> 64) as u64;
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}
