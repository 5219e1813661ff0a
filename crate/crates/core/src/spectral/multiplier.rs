//! The functional `sup_{λ>0} φ(λ) λ^a` bounding `‖φ(𝓛)‖_{p→q}`, with
//! `a = (Q*/m)(1/p - 1/q)`, and the heat-semigroup case `φ = e^{-s·}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Samples of a grid multiplier must end below this value.
pub const TAIL_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MultiplierSpec {
    /// `φ(λ) = e^{-sλ}`.
    Exponential { s: f64 },
    /// `φ(λ) = (1 + λ)^{-k}`.
    InversePower { k: f64 },
    /// Piecewise linear through `(λ_i, φ_i)`, `λ_0 = 0`; the supremum is taken over `[0, λ_last]`.
    Grid { lambdas: Vec<f64>, values: Vec<f64> },
}

impl MultiplierSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            MultiplierSpec::Exponential { s } if !(*s > 0.0 && s.is_finite()) => Err(
                Error::OutOfRange(format!("decay rate s = {s} must be positive")),
            ),
            MultiplierSpec::InversePower { k } if !(*k > 0.0 && k.is_finite()) => {
                Err(Error::OutOfRange(format!("power k = {k} must be positive")))
            }
            MultiplierSpec::Grid { lambdas, values } => {
                if lambdas.len() != values.len() || lambdas.len() < 2 {
                    return Err(Error::OutOfRange(
                        "grid multiplier needs >= 2 matching samples".into(),
                    ));
                }
                if lambdas[0] != 0.0 || lambdas.windows(2).any(|w| !(w[1] > w[0])) {
                    return Err(Error::OutOfRange(
                        "grid must start at 0 and increase strictly".into(),
                    ));
                }
                if values.windows(2).any(|w| w[1] > w[0]) || values.iter().any(|v| !(*v >= 0.0)) {
                    return Err(Error::OutOfRange(
                        "multiplier samples are not non-increasing".into(),
                    ));
                }
                if (values[0] - 1.0).abs() > 1e-12 {
                    return Err(Error::OutOfRange(format!("φ(0) = {} is not 1", values[0])));
                }
                if values[values.len() - 1] >= TAIL_THRESHOLD {
                    return Err(Error::OutOfRange(
                        "multiplier tail does not decay below threshold".into(),
                    ));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn eval(&self, lambda: f64) -> f64 {
        match self {
            MultiplierSpec::Exponential { s } => (-s * lambda).exp(),
            MultiplierSpec::InversePower { k } => (1.0 + lambda).powf(-k),
            MultiplierSpec::Grid { lambdas, values } => {
                let i = lambdas.partition_point(|&l| l <= lambda);
                if i == 0 {
                    values[0]
                } else if i == lambdas.len() {
                    values[i - 1]
                } else {
                    let (l0, l1) = (lambdas[i - 1], lambdas[i]);
                    let w = (lambda - l0) / (l1 - l0);
                    values[i - 1] * (1.0 - w) + values[i] * w
                }
            }
        }
    }

    /// Range on which the supremum is searched.
    fn search_range(&self) -> (f64, f64) {
        match self {
            MultiplierSpec::Grid { lambdas, .. } => (lambdas[1] * 1e-6, lambdas[lambdas.len() - 1]),
            MultiplierSpec::Exponential { s } => (1e-12 / s, 1e12 / s),
            MultiplierSpec::InversePower { .. } => (1e-12, 1e12),
        }
    }
}

/// `a = (Q*/m)(1/p - 1/q)` for `1 < p ≤ 2 ≤ q < ∞`.
pub fn lp_lq_exponent(p: f64, q: f64, q_star: f64, m: f64) -> Result<f64> {
    if !(p > 1.0 && p <= 2.0 && q >= 2.0 && q.is_finite()) {
        return Err(Error::OutOfRange(format!(
            "need 1 < p <= 2 <= q < ∞, got p = {p}, q = {q}"
        )));
    }
    if !(q_star > 0.0 && m > 0.0) {
        return Err(Error::OutOfRange("Q* and m must be positive".into()));
    }
    Ok(q_star / m * (1.0 / p - 1.0 / q))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SupBound {
    pub value: f64,
    /// Point where the supremum is attained (`0` when `a = 0`).
    pub maximizer: f64,
    pub exponent: f64,
}

/// `sup_{λ>0} φ(λ) λ^a` by a dense log grid followed by golden-section refinement
/// around the best grid point.
pub fn sup_functional(phi: &MultiplierSpec, a: f64) -> Result<SupBound> {
    phi.validate()?;
    if !(a >= 0.0 && a.is_finite()) {
        return Err(Error::OutOfRange(format!(
            "exponent a = {a} must be nonnegative"
        )));
    }
    if a == 0.0 {
        return Ok(SupBound {
            value: phi.eval(0.0),
            maximizer: 0.0,
            exponent: 0.0,
        });
    }
    let (lo, hi) = phi.search_range();
    let log_g = |x: f64| {
        let v = phi.eval(x);
        if v > 0.0 {
            v.ln() + a * x.ln()
        } else {
            f64::NEG_INFINITY
        }
    };
    let points_per_decade = 200.0;
    let n = ((hi / lo).log10() * points_per_decade).ceil() as usize;
    let mut grid: Vec<f64> = (0..=n)
        .map(|i| lo * (hi / lo).powf(i as f64 / n as f64))
        .collect();
    if let MultiplierSpec::Grid { lambdas, .. } = phi {
        // piecewise linear φ: nodes are natural candidates
        grid.extend(lambdas.iter().skip(1).copied());
        grid.sort_by(f64::total_cmp);
    }
    let (best, _) = grid.iter().enumerate().map(|(i, &x)| (i, log_g(x))).fold(
        (0, f64::NEG_INFINITY),
        |acc, (i, v)| if v > acc.1 { (i, v) } else { acc },
    );
    if best + 1 == grid.len() && !matches!(phi, MultiplierSpec::Grid { .. }) {
        return Err(Error::OutOfRange(
            "supremum is not attained: φ(λ)λ^a does not decay".into(),
        ));
    }
    let mut left = grid[best.saturating_sub(1)];
    let mut right = grid[(best + 1).min(grid.len() - 1)];
    let golden = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = right - golden * (right - left);
    let mut x2 = left + golden * (right - left);
    let (mut f1, mut f2) = (log_g(x1), log_g(x2));
    let mut previous = f64::NEG_INFINITY;
    for _ in 0..200 {
        if f1 >= f2 {
            right = x2;
            x2 = x1;
            f2 = f1;
            x1 = right - golden * (right - left);
            f1 = log_g(x1);
        } else {
            left = x1;
            x1 = x2;
            f1 = f2;
            x2 = left + golden * (right - left);
            f2 = log_g(x2);
        }
        let current = f1.max(f2);
        // relative change of the bound below 1e-12 (in log scale)
        if (current - previous).abs() < 1e-12 && right - left < 1e-9 * right {
            break;
        }
        previous = current;
    }
    let candidates = [grid[best], x1, x2];
    let (maximizer, log_value) = candidates.iter().map(|&x| (x, log_g(x))).fold(
        (grid[best], f64::NEG_INFINITY),
        |acc, c| if c.1 > acc.1 { c } else { acc },
    );
    Ok(SupBound {
        value: log_value.exp(),
        maximizer,
        exponent: a,
    })
}

/// `sup_{λ>0} φ(λ) λ^{(Q*/m)(1/p - 1/q)}`.
pub fn multiplier_norm_bound(
    phi: &MultiplierSpec,
    p: f64,
    q: f64,
    q_star: f64,
    m: f64,
) -> Result<SupBound> {
    sup_functional(phi, lp_lq_exponent(p, q, q_star, m)?)
}

/// `s^{-(Q*/m)(1/p - 1/q)}`, the heat-semigroup bound with unit constant.
pub fn heat_lp_lq_bound(s: f64, p: f64, q: f64, q_star: f64, m: f64) -> Result<f64> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::OutOfRange(format!("s = {s} must be positive")));
    }
    Ok(s.powf(-lp_lq_exponent(p, q, q_star, m)?))
}
