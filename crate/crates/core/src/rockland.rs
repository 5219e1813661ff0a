//! Finite Rockland screen for forms on the Heisenberg algebra `h1`.
//!
//! Realization used for the Schrödinger representations `π_λ`, `λ ≠ 0`, on `L²(ℝ)`:
//!
//! ```text
//! dπ_λ(X) = d/dξ,   dπ_λ(Y) = iλξ,   dπ_λ(Z) = iλ
//! ```
//!
//! which satisfies `[dπ_λ(X), dπ_λ(Y)] = dπ_λ(Z)`. In the scaled Hermite basis
//! `h_k(|λ|^{1/2} ξ)` with ladder operators `a h_k = √k h_{k-1}` and
//! `a† h_k = √(k+1) h_{k+1}`,
//!
//! ```text
//! dπ_λ(X) = √|λ| (a - a†)/√2,   dπ_λ(Y) = i sgn(λ) √|λ| (a + a†)/√2
//! ```
//!
//! so `dπ_λ(-X² - Y²) = |λ|(2a†a + 1)` is diagonal with entries `(2k+1)|λ|`.
//! One-dimensional characters send `X ↦ ia`, `Y ↦ ib`, `Z ↦ 0`.
//!
//! The screen is a necessary condition only: a singular truncated block or a
//! vanishing character symbol rules a form out, passing does not prove the
//! Rockland property.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::{Form, CQ};
use crate::linalg::Q;

/// Where the screen found a (numerically) non-injective image.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum RocklandWitness {
    Schrodinger {
        lambda: f64,
        min_singular_value: f64,
    },
    Character {
        a: f64,
        b: f64,
        symbol_modulus: f64,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct HermiteSample {
    pub lambda: f64,
    /// Smallest singular value of the truncated `N × N` block.
    pub min_singular_value: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RocklandReport {
    pub passed: bool,
    pub truncation: usize,
    pub hermite: Vec<HermiteSample>,
    /// Smallest `|dπ(C)|` over the character grid.
    pub min_character_modulus: f64,
    pub witness: Option<RocklandWitness>,
}

#[derive(Debug, Clone, Copy)]
pub struct ScreenOptions {
    /// Number of equally spaced points `(cos θ, sin θ)` on the unit circle.
    pub characters: usize,
    pub tolerance: f64,
}

impl Default for ScreenOptions {
    fn default() -> Self {
        ScreenOptions {
            characters: 64,
            tolerance: 1e-9,
        }
    }
}

fn to_c64(c: &CQ) -> Complex64 {
    Complex64::new(
        c.re.to_f64().unwrap_or(f64::NAN),
        c.im.to_f64().unwrap_or(f64::NAN),
    )
}

fn check_h1_weights(form: &Form) -> Result<()> {
    let expected = [1, 1, 2].map(|n| Q::from_integer(n.into()));
    if form.weights() != expected {
        return Err(Error::InvalidForm(
            "Rockland screen needs the h1 basis X, Y, Z with weights 1, 1, 2".into(),
        ));
    }
    Ok(())
}

/// `dπ_λ` of the three basis elements as `size × size` Hermite matrices.
pub fn schrodinger_generators(lambda: f64, size: usize) -> [DMatrix<Complex64>; 3] {
    let s = lambda.abs().sqrt() / std::f64::consts::SQRT_2;
    let sign = lambda.signum();
    let mut x = DMatrix::zeros(size, size);
    let mut y = DMatrix::zeros(size, size);
    for k in 1..size {
        let r = (k as f64).sqrt();
        // a: (k-1, k), a†: (k, k-1)
        x[(k - 1, k)] = Complex64::new(s * r, 0.0);
        x[(k, k - 1)] = Complex64::new(-s * r, 0.0);
        y[(k - 1, k)] = Complex64::new(0.0, sign * s * r);
        y[(k, k - 1)] = Complex64::new(0.0, sign * s * r);
    }
    let z = DMatrix::from_diagonal_element(size, size, Complex64::new(0.0, lambda));
    [x, y, z]
}

/// Truncated `N × N` block of `dπ_λ(C)`.
///
/// The generators are tridiagonal, so products of up to `L` of them computed
/// at size `N + L` agree with the infinite matrix on the leading `N × N` block.
pub fn schrodinger_block(form: &Form, lambda: f64, n: usize) -> Result<DMatrix<Complex64>> {
    check_h1_weights(form)?;
    let size = n + form.max_euclidean_length();
    let gens = schrodinger_generators(lambda, size);
    let mut total = DMatrix::<Complex64>::zeros(size, size);
    for (alpha, c) in form.terms() {
        let mut prod = DMatrix::<Complex64>::identity(size, size);
        for &j in alpha.entries() {
            prod = &prod * &gens[j];
        }
        total += prod * to_c64(c);
    }
    Ok(total.view((0, 0), (n, n)).into_owned())
}

/// `dπ(C)` in the character `X ↦ ia, Y ↦ ib, Z ↦ 0`.
pub fn character_symbol(form: &Form, a: f64, b: f64) -> Complex64 {
    let images = [
        Complex64::new(0.0, a),
        Complex64::new(0.0, b),
        Complex64::zero(),
    ];
    form.terms()
        .map(|(alpha, c)| {
            alpha
                .entries()
                .iter()
                .fold(to_c64(c), |acc, &j| acc * images[j])
        })
        .sum()
}

fn min_singular_value(m: &DMatrix<Complex64>) -> f64 {
    m.clone()
        .singular_values()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

pub fn heisenberg_rockland_check(form: &Form, n: usize, lambdas: &[f64]) -> Result<RocklandReport> {
    heisenberg_rockland_check_with(form, n, lambdas, ScreenOptions::default())
}

pub fn heisenberg_rockland_check_with(
    form: &Form,
    n: usize,
    lambdas: &[f64],
    opts: ScreenOptions,
) -> Result<RocklandReport> {
    check_h1_weights(form)?;
    if n < 4 {
        return Err(Error::OutOfRange(format!("Hermite truncation {n} < 4")));
    }
    if lambdas.is_empty() || opts.characters == 0 {
        return Err(Error::OutOfRange("empty λ grid or character grid".into()));
    }
    if let Some(l) = lambdas.iter().find(|l| **l == 0.0 || !l.is_finite()) {
        return Err(Error::OutOfRange(format!("λ = {l} is not a nonzero real")));
    }
    let hermite = lambdas
        .par_iter()
        .map(|&lambda| {
            let block = schrodinger_block(form, lambda, n)?;
            Ok(HermiteSample {
                lambda,
                min_singular_value: min_singular_value(&block),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut witness = hermite
        .iter()
        .find(|h| h.min_singular_value <= opts.tolerance)
        .map(|h| RocklandWitness::Schrodinger {
            lambda: h.lambda,
            min_singular_value: h.min_singular_value,
        });

    let mut min_character_modulus = f64::INFINITY;
    for k in 0..opts.characters {
        let theta = std::f64::consts::TAU * k as f64 / opts.characters as f64;
        let (b, a) = theta.sin_cos();
        // snap to exact axis points so that (0, ±1) and (±1, 0) are hit exactly
        let (a, b) = (snap(a), snap(b));
        let modulus = character_symbol(form, a, b).norm();
        min_character_modulus = min_character_modulus.min(modulus);
        if modulus <= opts.tolerance && witness.is_none() {
            witness = Some(RocklandWitness::Character {
                a,
                b,
                symbol_modulus: modulus,
            });
        }
    }

    Ok(RocklandReport {
        passed: witness.is_none(),
        truncation: n,
        hermite,
        min_character_modulus,
        witness,
    })
}

fn snap(v: f64) -> f64 {
    let r = v.round();
    if (v - r).abs() < 1e-12 {
        r
    } else {
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{real, sublaplacian_form};
    use crate::lie::MultiIndex;

    fn q(n: i64) -> Q {
        Q::from_integer(n.into())
    }

    fn h1_form(terms: &[(&[usize], i64)]) -> Form {
        Form::new(
            vec![q(1), q(1), q(2)],
            terms
                .iter()
                .map(|(a, c)| (MultiIndex::new(a.to_vec()), real(q(*c)))),
        )
        .unwrap()
    }

    #[test]
    fn generators_satisfy_heisenberg_relation() {
        let n = 10;
        for lambda in [0.5, -2.0] {
            let [x, y, z] = schrodinger_generators(lambda, n + 2);
            let comm = &x * &y - &y * &x;
            let diff = comm.view((0, 0), (n, n)) - z.view((0, 0), (n, n));
            assert!(diff.norm() < 1e-12);
        }
    }

    #[test]
    fn sublaplacian_block_is_diagonal() {
        let f = h1_form(&[(&[0, 0], -1), (&[1, 1], -1)]);
        for lambda in [0.3, -1.7, 4.0] {
            let m = schrodinger_block(&f, lambda, 12).unwrap();
            for i in 0..12 {
                for j in 0..12 {
                    let expected = if i == j {
                        (2 * i + 1) as f64 * lambda.abs()
                    } else {
                        0.0
                    };
                    assert!((m[(i, j)] - Complex64::new(expected, 0.0)).norm() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn sublaplacian_passes() {
        let f = h1_form(&[(&[0, 0], -1), (&[1, 1], -1)]);
        let r = heisenberg_rockland_check(&f, 16, &[-2.0, -0.5, 0.5, 1.0, 3.0]).unwrap();
        assert!(r.passed);
        for h in &r.hermite {
            assert!((h.min_singular_value - h.lambda.abs()).abs() < 1e-10);
        }
        assert!((r.min_character_modulus - 1.0).abs() < 1e-12);
    }

    #[test]
    fn x_squared_fails_at_character() {
        let f = h1_form(&[(&[0, 0], -1)]);
        let r = heisenberg_rockland_check(&f, 16, &[1.0]).unwrap();
        assert!(!r.passed);
        assert_eq!(
            r.witness,
            Some(RocklandWitness::Character {
                a: 0.0,
                b: 1.0,
                symbol_modulus: 0.0
            })
        );
    }

    #[test]
    fn zero_z_coefficient_gives_same_verdict() {
        let mut terms: Vec<_> = sublaplacian_form(2)
            .unwrap()
            .terms()
            .map(|(a, c)| (a.clone(), c.clone()))
            .collect();
        terms.push((MultiIndex::new(vec![2]), real(q(0))));
        let f = Form::new(vec![q(1), q(1), q(2)], terms).unwrap();
        assert!(heisenberg_rockland_check(&f, 8, &[1.0]).unwrap().passed);
    }

    #[test]
    fn rejects_bad_inputs() {
        let f = h1_form(&[(&[0, 0], -1), (&[1, 1], -1)]);
        assert!(heisenberg_rockland_check(&f, 3, &[1.0]).is_err());
        assert!(heisenberg_rockland_check(&f, 8, &[]).is_err());
        assert!(heisenberg_rockland_check(&f, 8, &[0.0]).is_err());
        assert!(heisenberg_rockland_check(&sublaplacian_form(2).unwrap(), 8, &[1.0]).is_err());
    }
}
