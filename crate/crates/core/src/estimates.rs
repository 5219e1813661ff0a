//! Gaussian heat-kernel envelope and the dyadic-annuli bound on `‖k_t‖²`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::spectral::h1_heat_kernel;

/// Certified remainders of the series below are smaller than this.
pub const TAIL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussianParams {
    pub c: f64,
    pub b: f64,
    pub omega: f64,
    pub m: f64,
    pub q_star: f64,
}

impl GaussianParams {
    pub fn validate(&self) -> Result<()> {
        let ok =
            self.c > 0.0 && self.b > 0.0 && self.omega >= 0.0 && self.m >= 2.0 && self.q_star > 0.0;
        if ok
            && [self.c, self.b, self.omega, self.m, self.q_star]
                .iter()
                .all(|v| v.is_finite())
        {
            Ok(())
        } else {
            Err(Error::OutOfRange(format!(
                "invalid Gaussian parameters {self:?}"
            )))
        }
    }
}

/// `|B_r| = r^{Q*}` for `r ≤ 1` and `e^{β(r-1)}` beyond.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VolumeModel {
    pub q_star: f64,
    pub beta: f64,
}

impl VolumeModel {
    pub fn validate(&self) -> Result<()> {
        if self.q_star > 0.0 && self.beta > 0.0 && self.q_star.is_finite() && self.beta.is_finite()
        {
            Ok(())
        } else {
            Err(Error::OutOfRange(format!("invalid volume model {self:?}")))
        }
    }

    pub fn ball(&self, r: f64) -> f64 {
        if r <= 1.0 {
            r.powf(self.q_star)
        } else {
            (self.beta * (r - 1.0)).exp()
        }
    }

    /// `ln |B_r|`, finite for `r > 0`.
    fn ln_ball(&self, r: f64) -> f64 {
        if r <= 1.0 {
            self.q_star * r.ln()
        } else {
            self.beta * (r - 1.0)
        }
    }
}

/// `c t^{-Q*/m} e^{ωt} exp(-b (r^m/t)^{1/(m-1)})`.
pub fn gaussian_envelope(t: f64, r: f64, p: &GaussianParams) -> Result<f64> {
    p.validate()?;
    if !(t > 0.0 && t.is_finite()) || !(r >= 0.0) {
        return Err(Error::OutOfRange(format!(
            "need t > 0 and r >= 0, got t = {t}, r = {r}"
        )));
    }
    let decay = p.b * (r.powf(p.m) / t).powf(1.0 / (p.m - 1.0));
    Ok(p.c * t.powf(-p.q_star / p.m) * (p.omega * t - decay).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesBound {
    pub value: f64,
    /// Upper bound on the omitted remainder.
    pub tail_bound: f64,
    pub terms: usize,
}

/// `Σ_{j≥1} exp(-2b·2^{j/(m-1)}) 2^{(j+1)Q*/m}`.
///
/// The ratio of consecutive terms,
/// `exp(-2b·2^{j/(m-1)}(2^{1/(m-1)} - 1)) 2^{Q*/m}`, decreases in `j`; once it is
/// below one the remainder after term `J` is at most `a_{J+1}/(1 - ρ_{J+1})`.
pub fn dyadic_series_bound(b: f64, m: f64, q_star: f64) -> Result<SeriesBound> {
    if !(b > 0.0 && m >= 2.0 && q_star > 0.0) || ![b, m, q_star].iter().all(|v| v.is_finite()) {
        return Err(Error::OutOfRange(format!(
            "need b > 0, m >= 2, Q* > 0; got ({b}, {m}, {q_star})"
        )));
    }
    let ln2 = std::f64::consts::LN_2;
    let ln_term = |j: f64| -2.0 * b * (j / (m - 1.0) * ln2).exp() + (j + 1.0) * q_star / m * ln2;
    let mut value = 0.0;
    let mut j = 1.0;
    loop {
        value += ln_term(j).exp();
        let next = ln_term(j + 1.0);
        let ratio = (ln_term(j + 2.0) - next).exp();
        if ratio < 1.0 {
            let tail = next.exp() / (1.0 - ratio);
            if tail < TAIL_TOL {
                return Ok(SeriesBound {
                    value,
                    tail_bound: tail,
                    terms: j as usize,
                });
            }
        }
        j += 1.0;
        if j > 10_000.0 {
            return Err(Error::NoConvergence(
                "dyadic series tail not certified".into(),
            ));
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AnnuliSample {
    pub t: f64,
    /// `Σ_j sup_{A_{j,t}} exp(-2b(|x|^m/t)^{1/(m-1)}) |A_{j,t}|`.
    pub integral: f64,
    /// `I(t) / t^{Q*/m}`.
    pub ratio: f64,
    pub tail_bound: f64,
    pub annuli: usize,
    pub certified: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnnuliReport {
    pub samples: Vec<AnnuliSample>,
    /// `lim_{t→0} I(t)/t^{Q*/m}`, the same sum in the pure `r^{Q*}` regime.
    pub small_t_limit: f64,
    /// Ratios ordered by decreasing `t` move monotonically towards the limit.
    pub monotone: bool,
    /// Largest `|ratio/limit - 1|`.
    pub max_relative_gap: f64,
    pub all_certified: bool,
}

/// `I(t)` over the dyadic annuli `A_{0,t} = B_{(2t)^{1/m}}` and
/// `A_{j,t} = B_{(2^{j+1}t)^{1/m}} \ B_{(2^j t)^{1/m}}`, `j ≥ 1`.
///
/// The prefactor `c² t^{-2Q*/m} e^{2ωt}` of the squared envelope is left out, so
/// `‖k_t‖² ≤ c² t^{-2Q*/m} e^{2ωt} I(t)`. On `A_{j,t}` the squared Gaussian factor
/// is at most `exp(-2b·2^{j/(m-1)})`. The remainder after annulus `J` is bounded
/// by the geometric tail of `U_j = exp(-2b·2^{j/(m-1)} + β(2^{j+1}t)^{1/m})`,
/// valid once consecutive ratios of `U_j` are below one and decreasing.
pub fn annuli_integral(t: f64, p: &GaussianParams, v: &VolumeModel) -> Result<AnnuliSample> {
    p.validate()?;
    v.validate()?;
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::OutOfRange(format!("t = {t} must be positive")));
    }
    let (b, m) = (p.b, p.m);
    let radius = |j: f64| (2f64.powf(j) * t).powf(1.0 / m);
    let ln_decay = |j: f64| -2.0 * b * 2f64.powf(j / (m - 1.0));
    let ln_upper = |j: f64| ln_decay(j) + v.beta * radius(j + 1.0);
    // ln(U_{i+1}/U_i) = -A e^{κi} + B e^{μi} with κ = ln2/(m-1) > μ = ln2/m; it has a
    // single critical point and decreases past it
    let (kappa, mu) = (
        std::f64::consts::LN_2 / (m - 1.0),
        std::f64::consts::LN_2 / m,
    );
    let big_a = 2.0 * b * (2f64.powf(1.0 / (m - 1.0)) - 1.0);
    let big_b = v.beta * t.powf(1.0 / m) * 2f64.powf(1.0 / m) * (2f64.powf(1.0 / m) - 1.0);
    let ratios_decrease_from =
        |i: f64| (big_a * kappa).ln() + kappa * i >= (big_b * mu).ln() + mu * i;
    let mut integral = v.ball(radius(1.0));
    let mut j = 1.0;
    loop {
        let outer = radius(j + 1.0);
        let inner = radius(j);
        // |A_j| = |B_outer| - |B_inner| = |B_outer| (1 - |B_inner|/|B_outer|)
        let shell = (ln_decay(j) + v.ln_ball(outer)).exp()
            * -(v.ln_ball(inner) - v.ln_ball(outer)).exp_m1();
        integral += shell;
        let (u1, u2) = (ln_upper(j + 1.0), ln_upper(j + 2.0));
        let r1 = (u2 - u1).exp();
        // U_j dominates |B_outer| exp(-2b..) since |B_r| ≤ e^{βr}
        if r1 < 1.0 && ratios_decrease_from(j + 1.0) {
            let tail = u1.exp() / (1.0 - r1);
            if tail < TAIL_TOL * integral {
                let ratio = integral / t.powf(p.q_star / p.m);
                return Ok(AnnuliSample {
                    t,
                    integral,
                    ratio,
                    tail_bound: tail,
                    annuli: j as usize + 1,
                    certified: true,
                });
            }
        }
        j += 1.0;
        if j > 4096.0 {
            let ratio = integral / t.powf(p.q_star / p.m);
            return Ok(AnnuliSample {
                t,
                integral,
                ratio,
                tail_bound: f64::INFINITY,
                annuli: j as usize,
                certified: false,
            });
        }
    }
}

/// `lim_{t→0} I(t)/t^{Q*/m} = 2^{Q*/m} + Σ_{j≥1} exp(-2b·2^{j/(m-1)}) (2^{(j+1)Q*/m} - 2^{jQ*/m})`.
pub fn annuli_small_t_limit(p: &GaussianParams) -> Result<f64> {
    p.validate()?;
    let e = p.q_star / p.m;
    let mut total = 2f64.powf(e);
    let mut j = 1.0;
    loop {
        let term = (-2.0 * p.b * 2f64.powf(j / (p.m - 1.0))).exp()
            * (2f64.powf((j + 1.0) * e) - 2f64.powf(j * e));
        total += term;
        if term < TAIL_TOL * total * 1e-3 && j > 3.0 {
            return Ok(total);
        }
        j += 1.0;
    }
}

pub fn annuli_integral_check(
    t_grid: &[f64],
    p: &GaussianParams,
    v: &VolumeModel,
) -> Result<AnnuliReport> {
    if t_grid.is_empty() {
        return Err(Error::OutOfRange("empty t grid".into()));
    }
    let samples = t_grid
        .par_iter()
        .map(|&t| annuli_integral(t, p, v))
        .collect::<Result<Vec<_>>>()?;
    let small_t_limit = annuli_small_t_limit(p)?;
    let mut ordered: Vec<&AnnuliSample> = samples.iter().collect();
    ordered.sort_by(|a, b| b.t.total_cmp(&a.t));
    let gaps: Vec<f64> = ordered
        .iter()
        .map(|s| (s.ratio / small_t_limit - 1.0).abs())
        .collect();
    let monotone = gaps.windows(2).all(|w| w[1] <= w[0] + 1e-12);
    let max_relative_gap = gaps.iter().copied().fold(0.0, f64::max);
    let all_certified = samples.iter().all(|s| s.certified);
    Ok(AnnuliReport {
        samples,
        small_t_limit,
        monotone,
        max_relative_gap,
        all_certified,
    })
}

/// Homogeneous quasi-norm `((x² + y²)² + u²)^{1/4}` on `H1`.
pub fn h1_quasi_norm((x, y, u): (f64, f64, f64)) -> f64 {
    let r2 = x * x + y * y;
    (r2 * r2 + u * u).sqrt().sqrt()
}

/// Point of quasi-norm `rho` in direction `theta ∈ [-π/2, π/2]`:
/// `(ρ √|cos θ|, 0, ρ² sin θ)`.
pub fn h1_point(rho: f64, theta: f64) -> (f64, f64, f64) {
    (rho * theta.cos().abs().sqrt(), 0.0, rho * rho * theta.sin())
}

#[derive(Debug, Clone, Serialize)]
pub struct EnvelopeFit {
    pub params: GaussianParams,
    /// `min (envelope - kernel)/envelope` over the grid.
    pub margin: f64,
    pub violations: usize,
    pub grid_points: usize,
    /// Largest `b` with `k_t(g) ≤ k_t(e) exp(-b|g|²/t)` on the grid.
    pub b_max: f64,
}

/// Fits `(c, b)` with `ω = 0`, `m = 2`, `Q* = 4` so that the `H1` heat kernel lies
/// below the envelope on `t_grid × points`.
///
/// `b` is half the largest decay rate compatible with the samples, and `c` is the
/// smallest constant dominating every sample at that `b`, inflated by `1 + slack`.
pub fn fit_h1_envelope(
    t_grid: &[f64],
    points: &[(f64, f64, f64)],
    slack: f64,
) -> Result<EnvelopeFit> {
    if t_grid.is_empty() || points.is_empty() {
        return Err(Error::OutOfRange("empty envelope grid".into()));
    }
    let pairs: Vec<(f64, (f64, f64, f64))> = t_grid
        .iter()
        .flat_map(|&t| points.iter().map(move |&g| (t, g)))
        .collect();
    let values = pairs
        .par_iter()
        .map(|&(t, g)| {
            Ok((
                t,
                h1_quasi_norm(g),
                h1_heat_kernel(t, g)?,
                h1_heat_kernel(t, (0.0, 0.0, 0.0))?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    // k_t(g) ≤ k_t(e) e^{-b ρ²/t}  ⇔  b ≤ t ln(k_t(e)/k_t(g)) / ρ²
    let b_max = values
        .iter()
        .filter(|(_, rho, k, _)| *rho > 0.0 && *k > 0.0)
        .map(|&(t, rho, k, k0)| t * (k0 / k).ln() / (rho * rho))
        .fold(f64::INFINITY, f64::min);
    if !(b_max > 0.0 && b_max.is_finite()) {
        return Err(Error::NoConvergence(format!(
            "no positive decay rate fits the samples (b_max = {b_max})"
        )));
    }
    let b = 0.5 * b_max;
    let c = values
        .iter()
        .map(|&(t, rho, k, _)| k * t * t * (b * rho * rho / t).exp())
        .fold(0.0, f64::max)
        * (1.0 + slack);
    let params = GaussianParams {
        c,
        b,
        omega: 0.0,
        m: 2.0,
        q_star: 4.0,
    };
    let mut margin = f64::INFINITY;
    let mut violations = 0;
    for &(t, rho, k, _) in &values {
        let env = gaussian_envelope(t, rho, &params)?;
        if k > env {
            violations += 1;
        }
        if env > 0.0 {
            margin = margin.min((env - k) / env);
        }
    }
    Ok(EnvelopeFit {
        params,
        margin,
        violations,
        grid_points: values.len(),
        b_max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(b: f64, q_star: f64) -> GaussianParams {
        GaussianParams {
            c: 1.0,
            b,
            omega: 0.0,
            m: 2.0,
            q_star,
        }
    }

    #[test]
    fn envelope_values() {
        let p = params(1.0, 4.0);
        assert!((gaussian_envelope(1.0, 1.0, &p).unwrap() - (-1f64).exp()).abs() < 1e-15);
        let q = GaussianParams {
            c: 2.0,
            omega: 0.5,
            ..p
        };
        assert!(
            (gaussian_envelope(0.5, 0.0, &q).unwrap() - 2.0 * 4.0 * 0.25f64.exp()).abs() < 1e-12
        );
        let vals: Vec<f64> = (0..10)
            .map(|i| gaussian_envelope(0.3, i as f64 * 0.2, &p).unwrap())
            .collect();
        assert!(vals.windows(2).all(|w| w[1] < w[0]));
        assert!(gaussian_envelope(0.0, 1.0, &p).is_err());
    }

    fn oracle(b: f64, m: f64, q_star: f64) -> f64 {
        (1..60)
            .map(|j| {
                (-2.0 * b * 2f64.powf(j as f64 / (m - 1.0))).exp()
                    * 2f64.powf((j + 1) as f64 * q_star / m)
            })
            .sum()
    }

    #[test]
    fn dyadic_series() {
        let s = dyadic_series_bound(1.0, 2.0, 4.0).unwrap();
        let literal = 16.0 * (-4f64).exp()
            + 64.0 * (-8f64).exp()
            + 256.0 * (-16f64).exp()
            + 1024.0 * (-32f64).exp();
        assert!((s.value - literal).abs() < 1e-12);
        assert!((s.value - 0.3146).abs() < 1e-4);
        assert!(s.tail_bound < TAIL_TOL);
        let s3 = dyadic_series_bound(1.0, 2.0, 3.0).unwrap();
        assert!((s3.value - 0.1541).abs() < 1e-4);
        for (b, m, q) in [(0.3, 2.0, 4.0), (1.0, 3.0, 6.0), (0.05, 2.5, 7.0)] {
            let s = dyadic_series_bound(b, m, q).unwrap();
            assert!(
                (s.value - oracle(b, m, q)).abs() < 1e-10 * s.value.max(1.0),
                "({b}, {m}, {q})"
            );
        }
        assert!(dyadic_series_bound(0.0, 2.0, 4.0).is_err());
    }

    #[test]
    fn dyadic_series_monotone() {
        let a = dyadic_series_bound(0.5, 2.0, 4.0).unwrap().value;
        assert!(dyadic_series_bound(1.0, 2.0, 4.0).unwrap().value < a);
        assert!(dyadic_series_bound(0.5, 2.0, 5.0).unwrap().value > a);
    }

    #[test]
    fn volume_model_is_continuous() {
        let v = VolumeModel {
            q_star: 4.0,
            beta: 2.0,
        };
        assert!((v.ball(1.0 - 1e-12) - v.ball(1.0 + 1e-12)).abs() < 1e-10);
        assert!((0..50)
            .map(|i| v.ball(i as f64 * 0.1))
            .collect::<Vec<_>>()
            .windows(2)
            .all(|w| w[1] >= w[0]));
    }

    #[test]
    fn annuli_small_t_against_direct_sum() {
        let p = params(1.0, 4.0);
        let v = VolumeModel {
            q_star: 4.0,
            beta: 1.0,
        };
        let r = annuli_integral_check(&[1e-2, 1e-3, 1e-4], &p, &v).unwrap();
        assert!(r.all_certified && r.monotone);
        // direct sum in the r^4 regime
        let direct = 4.0
            + (1..40)
                .map(|j| (-2.0 * 2f64.powi(j)).exp() * (4f64.powi(j + 1) - 4f64.powi(j)))
                .sum::<f64>();
        assert!((r.small_t_limit - direct).abs() < 1e-12);
        for s in &r.samples {
            assert!((s.ratio / direct - 1.0).abs() < 0.1);
            let chain =
                (2.0 * s.t).powf(2.0) * (1.0 + dyadic_series_bound(1.0, 2.0, 4.0).unwrap().value);
            assert!(s.integral <= chain * (1.0 + 1e-9));
        }
    }

    #[test]
    fn annuli_large_t_finite() {
        for beta in [1.0, 5.0] {
            let s = annuli_integral(10.0, &params(1.0, 4.0), &VolumeModel { q_star: 4.0, beta })
                .unwrap();
            assert!(s.certified && s.integral.is_finite(), "β = {beta}");
        }
    }

    #[test]
    fn quasi_norm_points() {
        for theta in [-1.2, 0.0, 0.7, std::f64::consts::FRAC_PI_2] {
            assert!((h1_quasi_norm(h1_point(1.7, theta)) - 1.7).abs() < 1e-12);
        }
    }
}
