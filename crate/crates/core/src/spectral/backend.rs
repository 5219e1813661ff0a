//! Concrete groups with computable spectral data for a sub-Laplacian `𝓛 ≥ 0`.
//!
//! Normalizations:
//!
//! * `torus(n)`: probability Haar measure on `[0,1)^n`, `𝓛 = -Δ`, eigenvalues `|2πξ|²`, `ξ ∈ ℤ^n`.
//! * `heisenberg`: Lebesgue measure on `ℝ³` in exponential coordinates,
//!   `𝓛 = -(X² + Y²)` with `X = ∂x - (y/2)∂u`, `Y = ∂y + (x/2)∂u`, `[X, Y] = ∂u`.
//! * `su2`: probability Haar measure, `𝓛 = -(e1² + e2²)` acting on the
//!   integer-spin representations, eigenvalues `l(l+1) - m²` with multiplicity `2l+1`.
//!
//! Counting functions use the open interval `(0, s)`; zero modes never count.

use std::fmt;
use std::sync::OnceLock;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::catalog;
use crate::error::{Error, Result};
use crate::forms::sublaplacian_form;
use crate::linalg::Q;
use crate::weighted::{contract, homogeneous_dimension, WeightedBasis};

const FOUR_PI_SQ: f64 = 4.0 * std::f64::consts::PI * std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum BackendKind {
    Torus(usize),
    Heisenberg,
    Su2,
}

impl fmt::Display for BackendKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BackendKind::Torus(n) => write!(f, "torus{n}"),
            BackendKind::Heisenberg => write!(f, "heisenberg"),
            BackendKind::Su2 => write!(f, "su2"),
        }
    }
}

impl std::str::FromStr for BackendKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        match lower.as_str() {
            "heisenberg" | "heisenberg1" | "h1" => Ok(BackendKind::Heisenberg),
            "su2" => Ok(BackendKind::Su2),
            _ => lower
                .strip_prefix("torus")
                .and_then(|n| {
                    n.trim_start_matches(['(', '_'])
                        .trim_end_matches(')')
                        .parse()
                        .ok()
                })
                .filter(|&n| n >= 1)
                .map(BackendKind::Torus)
                .ok_or_else(|| Error::OutOfRange(format!("unknown spectral backend `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralBackend {
    pub kind: BackendKind,
    /// Homogeneous dimension of the contraction of the backend's Lie algebra.
    #[serde(serialize_with = "crate::spectral::ser_rational")]
    pub q_star: Q,
    /// Order of the operator.
    #[serde(serialize_with = "crate::spectral::ser_rational")]
    pub m: Q,
    pub normalization: &'static str,
}

impl SpectralBackend {
    /// Builds the backend, computing `Q*` by contracting the group's Lie algebra
    /// with its canonical weighted basis and `m` from the sub-Laplacian form.
    pub fn new(kind: BackendKind) -> Result<Self> {
        let (entry, normalization) = match kind {
            BackendKind::Torus(0) => {
                return Err(Error::OutOfRange("torus dimension must be >= 1".into()))
            }
            BackendKind::Torus(n) => (
                catalog::lookup(&format!("abelian{n}"))?,
                "probability Haar on [0,1)^n, L = -Δ",
            ),
            BackendKind::Heisenberg => (
                catalog::lookup("heisenberg1")?,
                "Lebesgue on R^3 (exponential coordinates), L = -(X^2+Y^2), [X,Y] = d/du",
            ),
            BackendKind::Su2 => (
                catalog::lookup("su2")?,
                "probability Haar, L = -(e1^2+e2^2), integer spins",
            ),
        };
        let basis: WeightedBasis = entry.canonical_basis();
        let g = contract(&entry.algebra, &basis)?;
        let q_star = homogeneous_dimension(&g);
        let generators = match kind {
            BackendKind::Torus(n) => n,
            _ => 2,
        };
        let m = sublaplacian_form(generators)?.order().clone();
        Ok(SpectralBackend {
            kind,
            q_star,
            m,
            normalization,
        })
    }

    /// `Q*/m`, the exponent of `τ(E_(0,s))`.
    pub fn growth_exponent(&self) -> Q {
        &self.q_star / &self.m
    }

    /// `τ(E_(0,s)(𝓛))`.
    pub fn counting_function(&self, s: f64) -> Result<f64> {
        if !(s > 0.0) || !s.is_finite() {
            return Err(Error::OutOfRange(format!(
                "s = {s} must be positive and finite"
            )));
        }
        Ok(match self.kind {
            BackendKind::Torus(n) => torus_count(n, s),
            BackendKind::Heisenberg => heisenberg_plancherel_constant() * s * s,
            BackendKind::Su2 => su2_count(s),
        })
    }
}

/// Largest integer `N` with `4π² N < s`, or `None` when there is none.
fn torus_norm_bound(s: f64) -> Option<u64> {
    let mut n = (s / FOUR_PI_SQ).floor() as i64;
    while n >= 0 && FOUR_PI_SQ * n as f64 >= s {
        n -= 1;
    }
    while FOUR_PI_SQ * ((n + 1) as f64) < s {
        n += 1;
    }
    u64::try_from(n).ok()
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Number of `ξ ∈ ℤ^n` with `|ξ|² ≤ bound`.
fn lattice_points(n: usize, bound: u64) -> u64 {
    match n {
        0 => 1,
        1 => 2 * isqrt(bound) + 1,
        _ => {
            let r = isqrt(bound);
            let mut total = lattice_points(n - 1, bound);
            for k in 1..=r {
                total += 2 * lattice_points(n - 1, bound - k * k);
            }
            total
        }
    }
}

fn torus_count(n: usize, s: f64) -> f64 {
    match torus_norm_bound(s) {
        Some(bound) => (lattice_points(n, bound) - 1) as f64,
        None => 0.0,
    }
}

/// Number of integers `k` with `k ≥ 0` and `k² > c`, capped to `0..=l`; returns the
/// count of `m ∈ [-l, l]` with `m² > c`.
fn su2_m_count(l: u64, c: f64) -> u64 {
    if c < 0.0 {
        return 2 * l + 1;
    }
    let mut k0 = c.sqrt().floor() as u64;
    while (k0 * k0) as f64 <= c {
        k0 += 1;
    }
    while k0 > 0 && ((k0 - 1) * (k0 - 1)) as f64 > c {
        k0 -= 1;
    }
    if k0 > l {
        0
    } else if k0 == 0 {
        2 * l + 1
    } else {
        2 * (l - k0 + 1)
    }
}

fn su2_count(s: f64) -> f64 {
    // the smallest eigenvalue on level l >= 1 is l (at m = ±l)
    let mut total: u64 = 0;
    let mut l: u64 = 1;
    while (l as f64) < s {
        let c = (l * (l + 1)) as f64 - s;
        total += (2 * l + 1) * su2_m_count(l, c);
        l += 1;
    }
    total as f64
}

/// `κ` in `τ(E_(0,s)) = κ s²` on `H1`.
///
/// `π_λ(𝓛)` has eigenvalues `(2k+1)|λ|`, each of multiplicity one, and the Plancherel
/// measure in this normalization is `|λ| dλ / (4π²)`, so
/// `κ s² = (2/(4π²)) Σ_k ∫_0^{s/(2k+1)} λ dλ = s² Σ_k (2k+1)^{-2} / (4π²)`.
/// The series is summed directly with an Euler–Maclaurin remainder.
pub fn heisenberg_plancherel_constant() -> f64 {
    static KAPPA: OnceLock<f64> = OnceLock::new();
    *KAPPA.get_or_init(|| {
        const K: u64 = 1 << 20;
        // sum small terms first
        let mut sum = 0.0;
        for k in (0..K).rev() {
            let d = (2 * k + 1) as f64;
            sum += 1.0 / (d * d);
        }
        // Σ_{k≥K} (2k+1)^{-2} = 1/(2a) + 1/(2a²) + 1/(3a³) + O(a⁻⁵) with a = 2K+1
        let a = (2 * K + 1) as f64;
        let tail = 1.0 / (2.0 * a) + 1.0 / (2.0 * a * a) + 1.0 / (3.0 * a * a * a);
        (sum + tail) / FOUR_PI_SQ
    })
}

/// Aggregated spectrum `(eigenvalue, multiplicity)` of `-(e1² + e2²)` on the
/// integer-spin representations with `l ≤ l_max`, sorted by eigenvalue.
pub fn su2_sublaplacian_spectrum(l_max: u64) -> Vec<(u64, u64)> {
    let mut spec = std::collections::BTreeMap::new();
    for l in 0..=l_max {
        for m in 0..=l {
            let copies = if m == 0 { 1 } else { 2 };
            *spec.entry(l * (l + 1) - m * m).or_insert(0) += copies * (2 * l + 1);
        }
    }
    spec.into_iter().collect()
}

/// Matrices of `dπ(e1), dπ(e2), dπ(e3)` on the spin-`j` representation, `j = two_j/2`,
/// in the `J3` eigenbasis ordered `m = j, j-1, ..., -j`; `dπ(e_k) = -i J_k`.
pub fn su2_irrep(two_j: u32) -> [DMatrix<Complex64>; 3] {
    let dim = two_j as usize + 1;
    let j = f64::from(two_j) / 2.0;
    let m_of = |idx: usize| j - idx as f64;
    let mut jp = DMatrix::<Complex64>::zeros(dim, dim);
    for idx in 1..dim {
        // J+ |m> = sqrt(j(j+1) - m(m+1)) |m+1>
        let m = m_of(idx);
        jp[(idx - 1, idx)] = Complex64::new((j * (j + 1.0) - m * (m + 1.0)).sqrt(), 0.0);
    }
    let jm = jp.adjoint();
    let j1 = (&jp + &jm) * Complex64::new(0.5, 0.0);
    let j2 = (&jp - &jm) * Complex64::new(0.0, -0.5);
    let j3 = DMatrix::from_fn(dim, dim, |r, c| {
        if r == c {
            Complex64::new(m_of(r), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let minus_i = Complex64::new(0.0, -1.0);
    [j1 * minus_i, j2 * minus_i, j3 * minus_i]
}

pub(crate) fn q_to_f64(q: &Q) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn backend(kind: BackendKind) -> SpectralBackend {
        SpectralBackend::new(kind).unwrap()
    }

    fn q(n: i64) -> Q {
        Q::from_integer(n.into())
    }

    #[test]
    fn exponents_come_from_contraction() {
        assert_eq!(backend(BackendKind::Torus(3)).q_star, q(3));
        assert_eq!(backend(BackendKind::Heisenberg).q_star, q(4));
        assert_eq!(backend(BackendKind::Su2).q_star, q(4));
        assert_eq!(backend(BackendKind::Su2).m, q(2));
        assert_eq!(
            backend(BackendKind::Torus(1)).growth_exponent(),
            Q::new(1.into(), 2.into())
        );
    }

    #[test]
    fn parse_kinds() {
        assert_eq!(
            "torus3".parse::<BackendKind>().unwrap(),
            BackendKind::Torus(3)
        );
        assert_eq!(
            "H1".parse::<BackendKind>().unwrap(),
            BackendKind::Heisenberg
        );
        assert!("torus0".parse::<BackendKind>().is_err());
        assert!("se2".parse::<BackendKind>().is_err());
    }

    #[test]
    fn torus_counts() {
        let t1 = backend(BackendKind::Torus(1));
        assert_eq!(t1.counting_function(40.0).unwrap(), 2.0);
        assert_eq!(t1.counting_function(FOUR_PI_SQ).unwrap(), 0.0);
        // brute-force lattice oracle
        let t2 = backend(BackendKind::Torus(2));
        for s in [10.0, 100.0, 1000.0, 5000.0] {
            let mut count = 0;
            for a in -20i64..=20 {
                for b in -20i64..=20 {
                    let lam = FOUR_PI_SQ * (a * a + b * b) as f64;
                    if lam > 0.0 && lam < s {
                        count += 1;
                    }
                }
            }
            assert_eq!(t2.counting_function(s).unwrap(), count as f64, "s = {s}");
        }
    }

    #[test]
    fn su2_counts() {
        let b = backend(BackendKind::Su2);
        assert_eq!(b.counting_function(2.0).unwrap(), 6.0);
        assert_eq!(b.counting_function(1.0).unwrap(), 0.0);
        // l = 1: eigenvalues 1 (6) and 2 (3); l = 2: eigenvalue 2 at m = ±2 (10)
        assert_eq!(b.counting_function(2.5).unwrap(), 19.0);
        for s in [3.0, 7.5, 20.0, 57.0] {
            let brute: u64 = su2_sublaplacian_spectrum(60)
                .into_iter()
                .filter(|&(e, _)| e > 0 && (e as f64) < s)
                .map(|(_, mult)| mult)
                .sum();
            assert_eq!(b.counting_function(s).unwrap(), brute as f64, "s = {s}");
        }
    }

    #[test]
    fn heisenberg_constant() {
        let kappa = heisenberg_plancherel_constant();
        assert!((kappa - 1.0 / 32.0).abs() < 1e-15);
        let h = backend(BackendKind::Heisenberg);
        assert_eq!(
            h.counting_function(2.0).unwrap() / h.counting_function(1.0).unwrap(),
            4.0
        );
        assert!(h.counting_function(0.0).is_err());
    }

    #[test]
    fn spectrum_small_levels() {
        assert_eq!(su2_sublaplacian_spectrum(0), vec![(0, 1)]);
        assert_eq!(su2_sublaplacian_spectrum(1), vec![(0, 1), (1, 6), (2, 3)]);
    }

    #[test]
    fn irreps_match_spectrum() {
        for l in 0..5u32 {
            let [e1, e2, e3] = su2_irrep(2 * l);
            let comm = &e1 * &e2 - &e2 * &e1;
            assert!((comm - &e3).norm() < 1e-12);
            let op = -(&e1 * &e1 + &e2 * &e2);
            let mut eig: Vec<f64> = op.symmetric_eigen().eigenvalues.iter().copied().collect();
            eig.sort_by(f64::total_cmp);
            let l = l as i64;
            let mut expected: Vec<f64> = (-l..=l).map(|m| (l * (l + 1) - m * m) as f64).collect();
            expected.sort_by(f64::total_cmp);
            for (a, b) in eig.iter().zip(&expected) {
                assert!((a - b).abs() < 1e-10);
            }
            let casimir = -(&e1 * &e1 + &e2 * &e2 + &e3 * &e3);
            let target = DMatrix::identity(2 * l as usize + 1, 2 * l as usize + 1)
                * Complex64::new((l * (l + 1)) as f64, 0.0);
            assert!((casimir - target).norm() < 1e-10);
        }
    }
}
