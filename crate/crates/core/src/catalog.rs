//! Built-in Lie algebras.
//!
//! | name           | basis                         | nonzero brackets                                   |
//! |----------------|-------------------------------|----------------------------------------------------|
//! | `abelian<n>`   | `A1..An`                      | none                                               |
//! | `heisenberg<n>`| `X1..Xn, Y1..Yn, Z`           | `[Xi, Yi] = Z`                                     |
//! | `engel4`       | `E1, E2, E3, E4`              | `[E1, E2] = E3`, `[E1, E3] = E4`                   |
//! | `su2`          | `e1, e2, e3`                  | `[e1, e2] = e3`, `[e2, e3] = e1`, `[e3, e1] = e2`  |
//! | `so3`          | `L1, L2, L3`                  | `[L1, L2] = L3`, `[L2, L3] = L1`, `[L3, L1] = L2`  |
//! | `sl2r`         | `E, F, H`                     | `[E, F] = H`, `[H, E] = 2E`, `[H, F] = -2F`        |
//! | `se2`          | `R, P1, P2`                   | `[R, P1] = P2`, `[R, P2] = -P1`                    |
//!
//! Canonical weighted bases: the two-element generating sets `{e1, e2}`,
//! `{L1, L2}`, `{E, F}`, `{R, P1}` with weights `(1, 1)` for the 3-dimensional
//! non-nilpotent algebras; the full basis with its grading weights for the
//! graded ones (`1` on `Xi, Yi`, `2` on `Z`; `1, 1, 2, 3` for Engel; all `1`
//! for abelian).

use crate::error::{Error, Result};
use crate::lie::{LieAlgebra, Vector};
use crate::linalg::Q;
use crate::weighted::WeightedBasis;

fn labels(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

pub fn abelian(n: usize) -> LieAlgebra {
    let labels = (1..=n).map(|i| format!("A{i}")).collect();
    LieAlgebra::new(format!("abelian{n}"), labels, Vec::new()).expect("valid catalog entry")
}

/// `heisenberg(n)` has dimension `2n + 1`.
pub fn heisenberg(n: usize) -> LieAlgebra {
    let d = 2 * n + 1;
    let mut labels: Vec<String> = (1..=n).map(|i| format!("X{i}")).collect();
    labels.extend((1..=n).map(|i| format!("Y{i}")));
    labels.push("Z".into());
    let entries = (0..n).map(|i| (i, n + i, Vector::unit(d, d - 1)));
    LieAlgebra::new(format!("heisenberg{n}"), labels, entries).expect("valid catalog entry")
}

pub fn engel4() -> LieAlgebra {
    LieAlgebra::new(
        "engel4",
        labels(&["E1", "E2", "E3", "E4"]),
        vec![
            (0, 1, Vector::from_integers(&[0, 0, 1, 0])),
            (0, 2, Vector::from_integers(&[0, 0, 0, 1])),
        ],
    )
    .expect("valid catalog entry")
}

fn cyclic(name: &str, names: &[&str]) -> LieAlgebra {
    LieAlgebra::new(
        name,
        labels(names),
        vec![
            (0, 1, Vector::from_integers(&[0, 0, 1])),
            (1, 2, Vector::from_integers(&[1, 0, 0])),
            // [e1, e3] = -[e3, e1] = -e2
            (0, 2, Vector::from_integers(&[0, -1, 0])),
        ],
    )
    .expect("valid catalog entry")
}

pub fn su2() -> LieAlgebra {
    cyclic("su2", &["e1", "e2", "e3"])
}

/// Same structure constants as `su2` in the basis of infinitesimal rotations.
pub fn so3() -> LieAlgebra {
    cyclic("so3", &["L1", "L2", "L3"])
}

pub fn sl2r() -> LieAlgebra {
    LieAlgebra::new(
        "sl2r",
        labels(&["E", "F", "H"]),
        vec![
            (0, 1, Vector::from_integers(&[0, 0, 1])),
            // [E, H] = -2E, [F, H] = 2F
            (0, 2, Vector::from_integers(&[-2, 0, 0])),
            (1, 2, Vector::from_integers(&[0, 2, 0])),
        ],
    )
    .expect("valid catalog entry")
}

pub fn se2() -> LieAlgebra {
    LieAlgebra::new(
        "se2",
        labels(&["R", "P1", "P2"]),
        vec![
            (0, 1, Vector::from_integers(&[0, 0, 1])),
            (0, 2, Vector::from_integers(&[0, -1, 0])),
        ],
    )
    .expect("valid catalog entry")
}

/// A catalog algebra together with its canonical weighted basis.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub algebra: LieAlgebra,
    pub canonical_indices: Vec<usize>,
    pub canonical_weights: Vec<Q>,
    /// True when the canonical basis is the full basis of a graded algebra.
    pub graded: bool,
}

impl CatalogEntry {
    pub fn canonical_basis(&self) -> WeightedBasis {
        WeightedBasis::from_indices(
            &self.algebra,
            &self.canonical_indices,
            self.canonical_weights.clone(),
        )
        .expect("catalog bases are valid")
    }
}

fn trailing_number(name: &str, prefix: &str) -> Option<usize> {
    name.strip_prefix(prefix)?
        .trim_start_matches(['(', ':', '_'])
        .trim_end_matches(')')
        .parse()
        .ok()
}

/// Resolves a catalog name such as `su2`, `heisenberg2` or `abelian3`.
pub fn lookup(name: &str) -> Result<CatalogEntry> {
    let lower = name.trim().to_ascii_lowercase();
    let three_dim = |algebra: LieAlgebra| CatalogEntry {
        algebra,
        canonical_indices: vec![0, 1],
        canonical_weights: vec![q(1), q(1)],
        graded: false,
    };
    let entry = match lower.as_str() {
        "su2" => three_dim(su2()),
        "so3" => three_dim(so3()),
        "sl2r" => three_dim(sl2r()),
        "se2" => three_dim(se2()),
        "engel4" | "engel" => CatalogEntry {
            algebra: engel4(),
            canonical_indices: vec![0, 1, 2, 3],
            canonical_weights: vec![q(1), q(1), q(2), q(3)],
            graded: true,
        },
        "h1" => lookup("heisenberg1")?,
        _ => {
            if let Some(n) = trailing_number(&lower, "heisenberg").filter(|&n| n >= 1) {
                let d = 2 * n + 1;
                let mut weights = vec![q(1); 2 * n];
                weights.push(q(2));
                CatalogEntry {
                    algebra: heisenberg(n),
                    canonical_indices: (0..d).collect(),
                    canonical_weights: weights,
                    graded: true,
                }
            } else if let Some(n) = trailing_number(&lower, "abelian").filter(|&n| n >= 1) {
                CatalogEntry {
                    algebra: abelian(n),
                    canonical_indices: (0..n).collect(),
                    canonical_weights: vec![q(1); n],
                    graded: true,
                }
            } else {
                return Err(Error::OutOfRange(format!(
                    "unknown catalog algebra `{name}`"
                )));
            }
        }
    };
    Ok(entry)
}

/// The names used by [`standard_entries`].
pub const STANDARD_NAMES: &[&str] = &[
    "abelian1",
    "abelian3",
    "heisenberg1",
    "heisenberg2",
    "engel4",
    "su2",
    "so3",
    "sl2r",
    "se2",
];

/// One instance of every catalog family.
pub fn standard_entries() -> Vec<CatalogEntry> {
    STANDARD_NAMES
        .iter()
        .map(|n| lookup(n).expect("standard name"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_is_jacobi() {
        for e in standard_entries() {
            assert!(e.algebra.check_jacobi().passed(), "{}", e.algebra.name());
        }
    }

    #[test]
    fn lookup_names() {
        assert_eq!(lookup("heisenberg3").unwrap().algebra.dim(), 7);
        assert_eq!(lookup("abelian2").unwrap().algebra.dim(), 2);
        assert_eq!(lookup("H1").unwrap().algebra.name(), "heisenberg1");
        assert!(lookup("g2").is_err());
        assert!(lookup("heisenberg0").is_err());
    }

    #[test]
    fn sl2_relations() {
        let s = sl2r();
        let (e, f, h) = (s.basis_vector(0), s.basis_vector(1), s.basis_vector(2));
        assert_eq!(s.bracket(&h, &e).unwrap(), e.scale(&q(2)));
        assert_eq!(s.bracket(&h, &f).unwrap(), f.scale(&q(-2)));
        assert_eq!(s.bracket(&e, &f).unwrap(), h);
    }
}
