//! Heat kernels and heat traces `‖k_t‖² = ∫ e^{-2tλ} dτ(E_(0,λ))`.

use num_complex::Complex64;

use super::backend::{heisenberg_plancherel_constant, BackendKind, SpectralBackend};
use crate::error::{Error, Result};
use crate::quad::{integrate, integrate_to_infinity, QuadOptions};

const PI: f64 = std::f64::consts::PI;
const FOUR_PI_SQ: f64 = 4.0 * PI * PI;

fn check_t(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::OutOfRange(format!(
            "t = {t} must be positive and finite"
        )))
    }
}

/// `ln(ν / sinh ν) - (R/4) ν coth ν` on the strip `|Im ν| < π`.
fn log_symbol(nu: Complex64, rr: f64) -> Complex64 {
    if nu.norm() < 1e-6 {
        // ν/sinh ν = 1 - ν²/6, ν coth ν = 1 + ν²/3
        let nu2 = nu * nu;
        return (-nu2 / 6.0) - rr / 4.0 * (1.0 + nu2 / 3.0);
    }
    (nu / nu.sinh()).ln() - rr / 4.0 * nu * nu.cosh() / nu.sinh()
}

/// Exponent of the integrand at `ν = iσ`: `-σU + ln(σ/sin σ) - (R/4) σ cot σ`.
fn saddle_exponent(sigma: f64, uu: f64, rr: f64) -> f64 {
    if sigma < 1e-6 {
        return -sigma * uu + sigma * sigma / 6.0 - rr / 4.0 * (1.0 - sigma * sigma / 3.0);
    }
    -sigma * uu + (sigma / sigma.sin()).ln() - rr / 4.0 * sigma / sigma.tan()
}

/// Minimizer of the convex saddle exponent on `[0, π)`.
fn saddle_point(uu: f64, rr: f64) -> f64 {
    if uu == 0.0 {
        return 0.0;
    }
    let (mut lo, mut hi) = (0.0, PI * (1.0 - 1e-12));
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (saddle_exponent(x1, uu, rr), saddle_exponent(x2, uu, rr));
    for _ in 0..200 {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = saddle_exponent(x1, uu, rr);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = saddle_exponent(x2, uu, rr);
        }
        if hi - lo < 1e-13 {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Heat kernel `k_t(x, y, u)` of `𝓛 = -(X² + Y²)` on `H1` at time `t`.
///
/// Fourier transform in the central variable turns `𝓛` into a magnetic
/// Laplacian with Mehler kernel, giving (Gaveau, Hulanicki)
///
/// ```text
/// k_t(x, y, u) = 1/(8π² t²) ∫_ℝ e^{iνu/t} ν/sinh ν · exp(-(r²/4t) ν coth ν) dν,   r² = x² + y².
/// ```
///
/// The integrand is entire in the strip `|Im ν| < π`; the contour is moved to
/// `Im ν = σ` at the saddle of the integrand, which removes the oscillatory
/// cancellation and keeps relative accuracy deep in the tails. The saddle
/// magnitude is factored out before integrating, so values far below the
/// smallest normal `f64` underflow to zero instead of turning into noise.
pub fn h1_heat_kernel(t: f64, point: (f64, f64, f64)) -> Result<f64> {
    h1_heat_kernel_with(t, point, QuadOptions::rel(1e-11))
}

pub fn h1_heat_kernel_with(t: f64, (x, y, u): (f64, f64, f64), opts: QuadOptions) -> Result<f64> {
    check_t(t)?;
    if ![x, y, u].iter().all(|v| v.is_finite()) {
        return Err(Error::OutOfRange("non-finite group element".into()));
    }
    let uu = u.abs() / t;
    let rr = (x * x + y * y) / t;
    let sigma = saddle_point(uu, rr);
    let scale = saddle_exponent(sigma, uu, rr);
    let integrand = |mu: f64| {
        let nu = Complex64::new(mu, sigma);
        let phase = Complex64::new(0.0, uu) * nu;
        (phase + log_symbol(nu, rr) - scale).exp().re
    };
    // the real part is even in μ; near σ = π the peak has width ~ π - σ
    let width = (PI - sigma).min(1.0);
    let panels = |f: &dyn Fn(f64) -> f64, opts: QuadOptions| -> Result<f64> {
        let mut value = 0.0;
        for (a, b) in [(0.0, width), (width, 8.0 * width)] {
            value += integrate(f, a, b, opts)?.value;
        }
        Ok(value + integrate_to_infinity(f, 8.0 * width, opts)?.value)
    };
    // accuracy is measured against ∫|f|: close to the pole at iπ the real part cancels
    let mass = panels(
        &|mu: f64| integrand(mu).abs(),
        QuadOptions {
            rel_tol: 1e-3,
            ..opts
        },
    )?;
    // e^{iUμ} oscillates about U/2π times per unit length
    let opts = QuadOptions {
        abs_tol: opts.abs_tol.max(opts.rel_tol * mass / 3.0),
        max_intervals: opts.max_intervals.max(64 * uu as usize),
        ..opts
    };
    let value = panels(&integrand, opts)?;
    if value <= 0.0 {
        // only possible when the true value is below quadrature resolution
        return Ok(0.0);
    }
    Ok((scale + value.ln() - (4.0 * PI * PI * t * t).ln()).exp())
}

/// `‖k_t‖²_{L²}` from the spectral data of the backend.
///
/// * torus, su2: `Σ mult · e^{-2tλ}` over the nonzero eigenvalues;
/// * heisenberg: `∫ e^{-2tλ} d(κλ²) = κ / (2t²)`.
pub fn heat_trace_l2(backend: &SpectralBackend, t: f64) -> Result<f64> {
    check_t(t)?;
    Ok(match backend.kind {
        BackendKind::Torus(n) => {
            // θ^n - 1 with θ = 1 + q, without cancellation for large t
            let q = theta_excess(2.0 * t * FOUR_PI_SQ);
            (n as f64 * q.ln_1p()).exp_m1()
        }
        BackendKind::Heisenberg => heisenberg_plancherel_constant() / (2.0 * t * t),
        BackendKind::Su2 => su2_heat_trace(2.0 * t),
    })
}

/// `Σ_{k∈ℤ} e^{-a k²} - 1`.
fn theta_excess(a: f64) -> f64 {
    let mut sum = 0.0;
    let mut k = 1.0f64;
    loop {
        let term = (-a * k * k).exp();
        sum += term;
        if term < 1e-18 * (1.0 + sum) {
            break;
        }
        k += 1.0;
    }
    2.0 * sum
}

/// `Σ_{l≥1} (2l+1) Σ_{|m|≤l} e^{-a(l(l+1)-m²)}`, dropping terms below `e^{-60}`.
fn su2_heat_trace(a: f64) -> f64 {
    const CUT: f64 = 60.0;
    let mut total = 0.0;
    let mut l: u64 = 1;
    // the smallest exponent on level l is a·l
    while a * (l as f64) <= CUT {
        let ll = (l * (l + 1)) as f64;
        let mut level = 0.0;
        let mut m = l;
        loop {
            let e = a * (ll - (m * m) as f64);
            if e > CUT {
                break;
            }
            let copies = if m == 0 { 1.0 } else { 2.0 };
            level += copies * (-e).exp();
            if m == 0 {
                break;
            }
            m -= 1;
        }
        total += (2 * l + 1) as f64 * level;
        l += 1;
    }
    total
}

/// `∫ e^{-2tλ} dN(λ)` evaluated from the counting function `N` alone.
///
/// For the discrete backends `N` is constant between consecutive points of the
/// lattice containing the spectrum (`4π²ℕ` on the torus, `ℕ` on su2) and the
/// Stieltjes integral is the sum of its jumps. On `H1` it is
/// `∫ 2t e^{-2tλ} N(λ) dλ` after integration by parts, evaluated by quadrature.
pub fn heat_trace_stieltjes(backend: &SpectralBackend, t: f64) -> Result<f64> {
    check_t(t)?;
    let lattice_step = match backend.kind {
        BackendKind::Torus(_) => FOUR_PI_SQ,
        BackendKind::Su2 => 1.0,
        BackendKind::Heisenberg => {
            let f = |lambda: f64| {
                if lambda <= 0.0 {
                    0.0
                } else {
                    2.0 * t
                        * (-2.0 * t * lambda).exp()
                        * backend.counting_function(lambda).unwrap_or(f64::NAN)
                }
            };
            // split at the mass concentration scale 1/t
            let head = integrate(f, 0.0, 1.0 / t, QuadOptions::rel(1e-12))?;
            let tail = integrate_to_infinity(f, 1.0 / t, QuadOptions::rel(1e-12))?;
            return Ok(head.value + tail.value);
        }
    };
    // jumps at λ_k = k·step: N(λ_{k+1}) - N(λ_k) counts eigenvalues equal to λ_k
    let mut total = 0.0;
    let mut prev = 0.0;
    let mut k = 1u64;
    loop {
        let lambda = k as f64 * lattice_step;
        let weight = (-2.0 * t * lambda).exp();
        let next = backend.counting_function((k + 1) as f64 * lattice_step)?;
        total += (next - prev) * weight;
        prev = next;
        // remaining mass is bounded by N(λ) e^{-2tλ}-type terms; stop deep in the tail
        if 2.0 * t * lambda > 60.0 {
            break;
        }
        k += 1;
    }
    Ok(total)
}
