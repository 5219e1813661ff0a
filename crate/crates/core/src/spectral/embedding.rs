//! Random lower-bound witnesses for `‖f‖_q ≤ C ‖(1 + 𝓛)^γ f‖_p` on the torus `T^n`.
//!
//! Each trial draws a trigonometric polynomial with frequencies in `[-k, k]^n`,
//! `k ≤ freq_cutoff`, and evaluates both norms on a uniform grid at least four
//! times finer than the cutoff. Even trials use independent complex Gaussian
//! coefficients, odd trials use coherent nonnegative coefficients
//! `(1 + |ξ|²)^{-β}` (peaked at the origin). The maximal ratio is a lower bound
//! for the embedding constant, never an upper bound.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::error::{Error, Result};

const FOUR_PI_SQ: f64 = 4.0 * std::f64::consts::PI * std::f64::consts::PI;

#[derive(Debug, Clone, Serialize)]
pub struct EmbeddingWitness {
    pub n: usize,
    pub p: f64,
    pub q: f64,
    pub gamma: f64,
    pub freq_cutoff: usize,
    pub trials: usize,
    pub seed: u64,
    /// Grid points per axis.
    pub grid_size: usize,
    pub max_ratio: f64,
    pub best_trial: usize,
    pub best_bandwidth: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct EmbeddingParams {
    pub n: usize,
    pub p: f64,
    pub q: f64,
    pub gamma: f64,
    pub trials: usize,
    pub freq_cutoff: usize,
    pub seed: u64,
}

/// In-place inverse DFT over every axis of an `m^n` row-major array (no normalization).
fn inverse_fft_nd(data: &mut [Complex64], m: usize, n: usize, planner: &mut FftPlanner<f64>) {
    let fft = planner.plan_fft_inverse(m);
    let mut line = vec![Complex64::new(0.0, 0.0); m];
    for axis in 0..n {
        let inner = m.pow((n - 1 - axis) as u32);
        let outer = m.pow(axis as u32);
        for o in 0..outer {
            for i in 0..inner {
                let base = o * m * inner + i;
                for (j, slot) in line.iter_mut().enumerate() {
                    *slot = data[base + j * inner];
                }
                fft.process(&mut line);
                for (j, v) in line.iter().enumerate() {
                    data[base + j * inner] = *v;
                }
            }
        }
    }
}

fn lp_norm(values: &[Complex64], p: f64) -> f64 {
    let mean = values.iter().map(|v| v.norm().powf(p)).sum::<f64>() / values.len() as f64;
    mean.powf(1.0 / p)
}

/// Frequencies `ξ ∈ [-k, k]^n` as index tuples.
fn frequencies(n: usize, k: usize) -> Vec<Vec<i64>> {
    let side = 2 * k + 1;
    (0..side.pow(n as u32))
        .map(|mut idx| {
            (0..n)
                .map(|_| {
                    let d = (idx % side) as i64 - k as i64;
                    idx /= side;
                    d
                })
                .collect()
        })
        .collect()
}

fn one_trial(params: &EmbeddingParams, m: usize, trial: usize) -> (f64, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(
        params
            .seed
            .wrapping_mul(0x9E37_79B9_7F4A_7C15)
            .wrapping_add(trial as u64),
    );
    let cutoff = params.freq_cutoff as f64;
    // log-uniform bandwidth in [1, cutoff]
    let k = ((rng.gen::<f64>() * cutoff.ln()).exp().round() as usize).clamp(1, params.freq_cutoff);
    let coherent = trial % 2 == 1;
    let beta: f64 = rng.gen_range(0.0..1.0);
    let size = m.pow(params.n as u32);
    let mut f = vec![Complex64::new(0.0, 0.0); size];
    let mut g = vec![Complex64::new(0.0, 0.0); size];
    for xi in frequencies(params.n, k) {
        let norm_sq: i64 = xi.iter().map(|d| d * d).sum();
        let c = if coherent {
            Complex64::new((1.0 + norm_sq as f64).powf(-beta), 0.0)
        } else {
            Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        };
        let idx = xi
            .iter()
            .fold(0usize, |acc, &d| acc * m + d.rem_euclid(m as i64) as usize);
        f[idx] = c;
        g[idx] = c * (1.0 + FOUR_PI_SQ * norm_sq as f64).powf(params.gamma);
    }
    let mut planner = FftPlanner::new();
    inverse_fft_nd(&mut f, m, params.n, &mut planner);
    inverse_fft_nd(&mut g, m, params.n, &mut planner);
    let denom = lp_norm(&g, params.p);
    let ratio = if denom > 0.0 {
        lp_norm(&f, params.q) / denom
    } else {
        0.0
    };
    (ratio, k)
}

/// Largest observed `‖f‖_q / ‖(1 + 𝓛)^γ f‖_p` over the random trials.
pub fn torus_embedding_witness(params: EmbeddingParams) -> Result<EmbeddingWitness> {
    let EmbeddingParams {
        n,
        p,
        q,
        gamma,
        trials,
        freq_cutoff,
        seed,
    } = params;
    if !(p > 1.0 && p <= 2.0 && q >= 2.0 && q.is_finite()) {
        return Err(Error::OutOfRange(format!(
            "need 1 < p <= 2 <= q < ∞, got p = {p}, q = {q}"
        )));
    }
    if !(gamma >= 0.0 && gamma.is_finite()) {
        return Err(Error::OutOfRange(format!(
            "γ = {gamma} must be nonnegative"
        )));
    }
    if freq_cutoff < 1 || n == 0 || trials == 0 {
        return Err(Error::OutOfRange(
            "need n >= 1, freq_cutoff >= 1 and at least one trial".into(),
        ));
    }
    let m = (4 * (2 * freq_cutoff + 1)).next_power_of_two();
    if m.checked_pow(n as u32).is_none_or(|s| s > 1 << 26) {
        return Err(Error::OutOfRange(format!("grid {m}^{n} is too large")));
    }
    let results: Vec<(f64, usize)> = (0..trials)
        .into_par_iter()
        .map(|t| one_trial(&params, m, t))
        .collect();
    let (best_trial, &(max_ratio, best_bandwidth)) =
        results
            .iter()
            .enumerate()
            .fold(
                (0, &results[0]),
                |acc, (i, r)| if r.0 > acc.1 .0 { (i, r) } else { acc },
            );
    Ok(EmbeddingWitness {
        n,
        p,
        q,
        gamma,
        freq_cutoff,
        trials,
        seed,
        grid_size: m,
        max_ratio,
        best_trial,
        best_bandwidth,
    })
}
