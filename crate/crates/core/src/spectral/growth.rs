//! Power-law fits of spectral counting functions.

use rayon::prelude::*;
use serde::Serialize;

use super::backend::{q_to_f64, SpectralBackend};
use crate::error::{Error, Result};
use crate::linalg::Q;

pub const DEFAULT_EXPONENT_TOL: f64 = 0.05;

/// Least-squares line through `(ln s, ln v)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerFit {
    pub exponent: f64,
    pub log_intercept: f64,
    /// Largest absolute deviation in `ln v`.
    pub residual: f64,
}

pub fn fit_power_exponent(samples: &[(f64, f64)]) -> Result<PowerFit> {
    if samples.len() < 3 {
        return Err(Error::OutOfRange(format!(
            "need at least 3 samples, got {}",
            samples.len()
        )));
    }
    if let Some((s, v)) = samples
        .iter()
        .find(|(s, v)| !(*s > 0.0 && *v > 0.0 && s.is_finite() && v.is_finite()))
    {
        return Err(Error::OutOfRange(format!(
            "sample ({s}, {v}) is not positive"
        )));
    }
    let n = samples.len() as f64;
    let xs: Vec<f64> = samples.iter().map(|(s, _)| s.ln()).collect();
    let ys: Vec<f64> = samples.iter().map(|(_, v)| v.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::OutOfRange("all sample abscissae coincide".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let exponent = sxy / sxx;
    let log_intercept = my - exponent * mx;
    let residual = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - log_intercept - exponent * x).abs())
        .fold(0.0, f64::max);
    Ok(PowerFit {
        exponent,
        log_intercept,
        residual,
    })
}

/// Log-uniform grid on `[from, to]` with `per_decade` points per decade, endpoints included.
pub fn log_grid(from: f64, to: f64, per_decade: usize) -> Result<Vec<f64>> {
    if !(from > 0.0 && to > from && to.is_finite()) || per_decade == 0 {
        return Err(Error::OutOfRange(format!(
            "invalid grid [{from}, {to}] with {per_decade} points per decade"
        )));
    }
    let decades = (to / from).log10();
    let steps = ((decades * per_decade as f64).ceil() as usize).max(2);
    let (a, b) = (from.ln(), to.ln());
    Ok((0..=steps)
        .map(|i| (a + (b - a) * i as f64 / steps as f64).exp())
        .collect())
}

#[derive(Debug, Clone, Serialize)]
pub struct GrowthReport {
    pub backend: String,
    pub normalization: String,
    pub samples: Vec<(f64, f64)>,
    pub fitted_exponent: f64,
    pub log_intercept: f64,
    /// `Q*/m` as an exact rational string.
    pub target: String,
    pub target_value: f64,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Samples `τ(E_(0,s))` on the grid and compares the log-log slope with `Q*/m`.
pub fn verify_growth(
    backend: &SpectralBackend,
    grid: &[f64],
    tolerance: f64,
) -> Result<GrowthReport> {
    if grid.len() < 3 || grid.windows(2).any(|w| !(w[1] > w[0])) || !(grid[0] > 0.0) {
        return Err(Error::OutOfRange(
            "grid must be positive and strictly increasing with >= 3 points".into(),
        ));
    }
    let span = (grid[grid.len() - 1] / grid[0]).log10();
    if span < 2.0 - 1e-9 {
        return Err(Error::OutOfRange(format!(
            "grid spans {span:.2} decades, need at least 2"
        )));
    }
    let samples = grid
        .par_iter()
        .map(|&s| backend.counting_function(s).map(|v| (s, v)))
        .collect::<Result<Vec<_>>>()?;
    let fit = fit_power_exponent(&samples)?;
    let target: Q = backend.growth_exponent();
    let target_value = q_to_f64(&target);
    Ok(GrowthReport {
        backend: backend.kind.to_string(),
        normalization: backend.normalization.to_string(),
        samples,
        fitted_exponent: fit.exponent,
        log_intercept: fit.log_intercept,
        target: target.to_string(),
        target_value,
        residual: fit.residual,
        tolerance,
        passed: (fit.exponent - target_value).abs() <= tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::BackendKind;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn exact_power() {
        let samples: Vec<_> = [1.0, 2.0, 5.0, 10.0].iter().map(|&s| (s, s * s)).collect();
        let fit = fit_power_exponent(&samples).unwrap();
        assert!((fit.exponent - 2.0).abs() < 1e-14);
        assert!(fit.residual < 1e-14);
        assert!(fit.log_intercept.abs() < 1e-14);
    }

    #[test]
    fn noisy_power() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let samples: Vec<_> = log_grid(1.0, 1e4, 20)
            .unwrap()
            .into_iter()
            .map(|s| (s, 3.0 * s.powf(1.5) * (1.0 + rng.gen_range(-0.01..0.01))))
            .collect();
        let fit = fit_power_exponent(&samples).unwrap();
        assert!((fit.exponent - 1.5).abs() < 0.02);
        assert!(fit.residual <= 0.02);
    }

    #[test]
    fn bad_samples() {
        assert!(fit_power_exponent(&[(1.0, 1.0), (2.0, 2.0)]).is_err());
        assert!(fit_power_exponent(&[(1.0, 1.0), (2.0, 0.0), (3.0, 1.0)]).is_err());
    }

    #[test]
    fn grid_shape() {
        let g = log_grid(1e3, 1e6, 20).unwrap();
        assert_eq!(g.len(), 61);
        assert!((g[0] - 1e3).abs() < 1e-9 && (g[60] / 1e6 - 1.0).abs() < 1e-12);
        assert!(log_grid(1.0, 1.0, 5).is_err());
    }

    #[test]
    fn torus2_exponent() {
        let b = SpectralBackend::new(BackendKind::Torus(2)).unwrap();
        let r = verify_growth(&b, &log_grid(1e3, 1e6, 20).unwrap(), DEFAULT_EXPONENT_TOL).unwrap();
        assert!(r.passed, "{}", r.fitted_exponent);
        assert_eq!(r.target, "1");
    }

    #[test]
    fn short_grid_rejected() {
        let b = SpectralBackend::new(BackendKind::Heisenberg).unwrap();
        assert!(verify_growth(&b, &log_grid(1.0, 50.0, 20).unwrap(), 0.05).is_err());
    }
}
