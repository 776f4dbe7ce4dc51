//! Samplers and closed-form tails for the two source families.
//!
//! The X-family is zero-mean and pairwise independent (possibly only
//! pairwise); the Y-family is heavy-tailed with arbitrary dependence. All
//! samplers are pure functions of `(model, index range, SeedStream)`.

mod x;
mod y;

pub use x::{OffsetRule, XModel, XSampler, XVariant};
pub use y::{YModel, YSampler, YVariant};

use std::ops::Range;

use crate::error::{Error, Result};
use crate::rng::SeedStream;

/// A family of tail functions `x ↦ P(|W_k| > x)` indexed by `k ≥ 1`.
///
/// For [`XModel`] the variable is `X_k`; for [`YModel`] it is `|Y_k|^a`.
pub trait TailFamily: Sync {
    fn tail(&self, k: u64, x: f64) -> f64;

    /// `∫_x^∞ P(|W_k| > t) dt`; may be an upper bound where no closed form
    /// exists (see [`TailFamily::remainder_is_exact`]).
    fn tail_integral_beyond(&self, k: u64, x: f64) -> f64;

    fn remainder_is_exact(&self) -> bool {
        true
    }

    /// Kinks or jumps of the k-th tail on (0, ∞).
    fn breakpoints(&self, k: u64) -> Vec<f64>;

    /// True when every `W_k` with `k ≥ from` has the same law.
    fn identically_distributed(&self, from: u64) -> bool;

    /// Period of the law along the index, when it cycles from `from` on.
    fn period(&self, from: u64) -> Option<u64> {
        self.identically_distributed(from).then_some(1)
    }

    /// Indices in `lo..=hi` whose tails jointly dominate every tail in the
    /// range (sum of their tails bounds the pointwise sup).
    fn dominating_indices(&self, lo: u64, hi: u64) -> Vec<u64>;
}

fn check_range(range: &Range<u64>) -> Result<()> {
    if range.start == 0 {
        return Err(Error::IndexOutOfRange {
            index: 0,
            limit: u64::MAX,
        });
    }
    Ok(())
}

/// Values `X_k` for the 1-based indices in `range`.
pub fn sample_x_block(model: &XModel, range: Range<u64>, seed: SeedStream) -> Result<Vec<f64>> {
    check_range(&range)?;
    let mut out = vec![0.0; (range.end.saturating_sub(range.start)) as usize];
    XSampler::new(model, seed).fill(range.start, &mut out)?;
    Ok(out)
}

/// Values `Y_k` for the 1-based indices in `range`.
pub fn sample_y_block(model: &YModel, range: Range<u64>, seed: SeedStream) -> Result<Vec<f64>> {
    check_range(&range)?;
    let mut out = vec![0.0; (range.end.saturating_sub(range.start)) as usize];
    YSampler::new(model, seed).fill(range.start, &mut out);
    Ok(out)
}

/// Exact `P(|X_k| > x)`.
pub fn tail_x(model: &XModel, k: u64, x: f64) -> f64 {
    model.tail(k, x)
}

/// Exact `P(|Y_k|^a > x)`.
pub fn tail_y_pow_a(model: &YModel, k: u64, x: f64) -> f64 {
    model.tail(k, x)
}
