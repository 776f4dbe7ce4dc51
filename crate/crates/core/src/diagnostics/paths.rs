//! Streaming simulation of replica paths with checkpointed prefix sums.

use rayon::prelude::*;

use crate::error::Result;
use crate::generators::{XModel, XSampler, YModel, YSampler};
use crate::rng::{SeedStream, StreamTag};
use crate::schedule::MixSchedule;
use crate::summation::CompensatedSum;

const CHUNK: usize = 4096;

/// What to simulate. `None` for a source replaces it by zeros without
/// drawing from its stream.
#[derive(Clone, Copy)]
pub struct PathSpec<'a> {
    pub x: Option<&'a XModel>,
    pub y: Option<&'a YModel>,
    pub schedule: &'a MixSchedule,
    pub checkpoints: &'a [u64],
    pub master_seed: u64,
    pub replicas: u64,
}

/// Prefix sums of one replica at each checkpoint `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct PathTrace {
    pub replica: u64,
    /// `Σ_{k ≤ n} Z_k`, accumulated on its own.
    pub z_sum: Vec<f64>,
    /// `Σ_{k ≤ ψ(n)} X_k`.
    pub x_sum: Vec<f64>,
    /// `Σ_{k ≤ κ(n)} Y_k`.
    pub y_sum: Vec<f64>,
    /// `Σ_{k ≤ n} |Z_k|`.
    pub abs_sum: Vec<f64>,
    pub kappa: Vec<u64>,
}

impl PathTrace {
    pub fn s_over_n(&self, checkpoints: &[u64]) -> Vec<f64> {
        self.z_sum
            .iter()
            .zip(checkpoints)
            .map(|(s, &n)| s / n as f64)
            .collect()
    }
}

pub fn simulate_path(spec: &PathSpec<'_>, replica: u64) -> Result<PathTrace> {
    let horizon = *spec.checkpoints.last().unwrap_or(&0);
    let xs = spec
        .x
        .map(|m| XSampler::new(m, SeedStream::new(spec.master_seed, replica, StreamTag::X)));
    let ys = spec
        .y
        .map(|m| YSampler::new(m, SeedStream::new(spec.master_seed, replica, StreamTag::Y)));

    let cps = spec.checkpoints.len();
    let mut trace = PathTrace {
        replica,
        z_sum: Vec::with_capacity(cps),
        x_sum: Vec::with_capacity(cps),
        y_sum: Vec::with_capacity(cps),
        abs_sum: Vec::with_capacity(cps),
        kappa: Vec::with_capacity(cps),
    };
    let (mut sz, mut sx, mut sy, mut sa) = (
        CompensatedSum::new(),
        CompensatedSum::new(),
        CompensatedSum::new(),
        CompensatedSum::new(),
    );
    let mut cursor = spec.schedule.cursor();
    let mut alpha = vec![false; CHUNK];
    let mut xbuf = vec![0.0; CHUNK];
    let mut ybuf = vec![0.0; CHUNK];
    let (mut psi, mut kappa) = (0u64, 0u64);
    let mut next_cp = 0;
    let mut n = 1u64;
    while n <= horizon {
        let len = CHUNK.min((horizon - n + 1) as usize);
        let mut ny = 0;
        for (i, a) in alpha[..len].iter_mut().enumerate() {
            *a = cursor.step(n + i as u64);
            ny += usize::from(*a);
        }
        let nx = len - ny;
        match &xs {
            Some(s) if nx > 0 => s.fill(psi + 1, &mut xbuf[..nx])?,
            _ => xbuf[..nx].fill(0.0),
        }
        match &ys {
            Some(s) if ny > 0 => s.fill(kappa + 1, &mut ybuf[..ny]),
            _ => ybuf[..ny].fill(0.0),
        }
        let (mut xi, mut yi) = (0, 0);
        for (i, &a) in alpha[..len].iter().enumerate() {
            let z = if a {
                let v = ybuf[yi];
                yi += 1;
                sy.add(v);
                v
            } else {
                let v = xbuf[xi];
                xi += 1;
                sx.add(v);
                v
            };
            sz.add(z);
            sa.add(z.abs());
            if spec.checkpoints[next_cp] == n + i as u64 {
                trace.z_sum.push(sz.value());
                trace.x_sum.push(sx.value());
                trace.y_sum.push(sy.value());
                trace.abs_sum.push(sa.value());
                trace.kappa.push(kappa + yi as u64);
                next_cp = (next_cp + 1).min(cps - 1);
            }
        }
        psi += nx as u64;
        kappa += ny as u64;
        n += len as u64;
    }
    Ok(trace)
}

/// All replicas in parallel, returned in replica order.
pub fn simulate_paths(spec: &PathSpec<'_>) -> Result<Vec<PathTrace>> {
    (0..spec.replicas)
        .into_par_iter()
        .map(|r| simulate_path(spec, r))
        .collect()
}

/// `T_j = max_{i ≥ j} |v_i|`.
pub fn tail_sup_statistic(values: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; values.len()];
    let mut run = 0.0f64;
    for (o, v) in out.iter_mut().zip(values).rev() {
        run = run.max(v.abs());
        *o = run;
    }
    out
}
