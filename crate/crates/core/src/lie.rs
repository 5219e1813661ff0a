//! Finite-dimensional Lie algebras over the rationals.
//!
//! Everything in this module is exact: structure constants, brackets and
//! subspaces are rational, and subspaces are identified by their reduced
//! row-echelon form so that two subspaces are equal iff their rows are.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, Q};

/// Coordinates of an element of a Lie algebra in its standard basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vector(Vec<Q>);

impl Vector {
    pub fn new(coords: Vec<Q>) -> Self {
        Vector(coords)
    }

    pub fn zero(dim: usize) -> Self {
        Vector(vec![Q::zero(); dim])
    }

    /// The `i`-th standard basis vector of a `dim`-dimensional space.
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zero(dim);
        v.0[i] = Q::one();
        v
    }

    pub fn from_integers(coords: &[i64]) -> Self {
        Vector(coords.iter().map(|&c| Q::from_integer(c.into())).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Q] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Q> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, c: &Q) -> Self {
        Vector(self.0.iter().map(|x| x * c).collect())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim(), other.dim())?;
        Ok(Vector(
            self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect(),
        ))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim(), other.dim())?;
        Ok(Vector(
            self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect(),
        ))
    }

    /// `self += c * other`, dimensions assumed equal.
    fn axpy(&mut self, c: &Q, other: &Self) {
        if c.is_zero() {
            return;
        }
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            if !b.is_zero() {
                *a += c * b;
            }
        }
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// A finite sequence of generator indices (0-based).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    pub fn new(entries: Vec<usize>) -> Self {
        MultiIndex(entries)
    }

    pub fn empty() -> Self {
        MultiIndex(Vec::new())
    }

    /// `(j, j, ..., j)` with `len` entries.
    pub fn repeated(j: usize, len: usize) -> Self {
        MultiIndex(vec![j; len])
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    /// Number of entries `|α|`.
    pub fn euclidean_length(&self) -> usize {
        self.0.len()
    }

    /// `‖α‖ = Σ_j w_{α_j}`; zero for the empty index.
    pub fn weighted_length(&self, weights: &[Q]) -> Result<Q> {
        let mut total = Q::zero();
        for &j in &self.0 {
            let w = weights.get(j).ok_or(Error::IndexOutOfRange {
                index: j,
                len: weights.len(),
            })?;
            total += w;
        }
        Ok(total)
    }

    pub fn reversed(&self) -> Self {
        MultiIndex(self.0.iter().rev().copied().collect())
    }

    pub fn pushed(&self, j: usize) -> Self {
        let mut e = self.0.clone();
        e.push(j);
        MultiIndex(e)
    }

    pub fn max_entry(&self) -> Option<usize> {
        self.0.iter().copied().max()
    }
}

/// Displays with 1-based entries, matching the usual mathematical notation.
impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, j) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", j + 1)?;
        }
        write!(f, ")")
    }
}

/// A linear subspace, stored as the reduced row-echelon basis of its span.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient_dim: usize,
    rows: Vec<Vector>,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            rows: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            rows: (0..ambient_dim)
                .map(|i| Vector::unit(ambient_dim, i))
                .collect(),
        }
    }

    /// Span of `vectors` inside a space of dimension `ambient_dim`.
    pub fn span<'a, I>(ambient_dim: usize, vectors: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a Vector>,
    {
        let mut rows = Vec::new();
        for v in vectors {
            check_dim(ambient_dim, v.dim())?;
            rows.push(v.coords().to_vec());
        }
        linalg::rref(&mut rows);
        Ok(Subspace {
            ambient_dim,
            rows: rows.into_iter().map(Vector).collect(),
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vector] {
        &self.rows
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ambient_dim
    }

    pub fn contains(&self, v: &Vector) -> Result<bool> {
        check_dim(self.ambient_dim, v.dim())?;
        let basis: Vec<Vec<Q>> = self.rows.iter().map(|r| r.coords().to_vec()).collect();
        Ok(linalg::solve_in_basis(&basis, v.coords()).is_some())
    }

    pub fn contains_subspace(&self, other: &Subspace) -> Result<bool> {
        for r in &other.rows {
            if !self.contains(r)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `self + other`.
    pub fn join(&self, other: &Subspace) -> Result<Subspace> {
        check_dim(self.ambient_dim, other.ambient_dim)?;
        Subspace::span(self.ambient_dim, self.rows.iter().chain(&other.rows))
    }

    /// `self ∩ other`.
    pub fn intersection(&self, other: &Subspace) -> Result<Subspace> {
        check_dim(self.ambient_dim, other.ambient_dim)?;
        let p = self.rows.len();
        let ncols = p + other.rows.len();
        // Columns a_1..a_p, -b_1..-b_q; kernel vectors give common elements.
        let m: Vec<Vec<Q>> = (0..self.ambient_dim)
            .map(|k| {
                self.rows
                    .iter()
                    .map(|a| a.coords()[k].clone())
                    .chain(other.rows.iter().map(|b| -b.coords()[k].clone()))
                    .collect()
            })
            .collect();
        let ker = linalg::kernel(&m, ncols);
        let mut common = Vec::with_capacity(ker.len());
        for x in ker {
            let mut v = Vector::zero(self.ambient_dim);
            for (c, a) in x[..p].iter().zip(&self.rows) {
                v.axpy(c, a);
            }
            common.push(v);
        }
        Subspace::span(self.ambient_dim, &common)
    }
}

/// Result of checking the Jacobi identity on all basis triples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum JacobiReport {
    Pass,
    /// First failing triple `i < j < k` (0-based) and the nonzero cyclic sum.
    Fail {
        triple: [usize; 3],
        residual: Vector,
    },
}

impl JacobiReport {
    pub fn passed(&self) -> bool {
        matches!(self, JacobiReport::Pass)
    }
}

/// Lower central series data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nilpotency {
    pub nilpotent: bool,
    /// Smallest `s` with `g^{s+1} = 0`, when nilpotent.
    pub step: Option<usize>,
    /// Dimensions of `g^1 ⊇ g^2 ⊇ ...` until stabilization.
    pub series_dims: Vec<usize>,
}

/// A Lie algebra given by rational structure constants `[e_i, e_j] = Σ_k c^k_{ij} e_k`.
///
/// Only the brackets with `i < j` are stored; the others follow from antisymmetry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieAlgebra {
    name: String,
    labels: Vec<String>,
    // Indexed by `pair_index(i, j)` for i < j.
    brackets: Vec<Vector>,
}

fn pair_index(dim: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < dim);
    i * dim - i * (i + 1) / 2 + (j - i - 1)
}

impl LieAlgebra {
    /// Builds an algebra from the nonzero brackets `[e_i, e_j]` with `i < j`.
    ///
    /// The Jacobi identity is not enforced here; see [`LieAlgebra::check_jacobi`].
    pub fn new<I>(name: impl Into<String>, labels: Vec<String>, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, Vector)>,
    {
        let dim = labels.len();
        if dim == 0 {
            return Err(Error::InvalidStructure("dimension must be positive".into()));
        }
        let mut brackets = vec![Vector::zero(dim); dim * (dim - 1) / 2];
        let mut seen = vec![false; brackets.len()];
        for (i, j, v) in entries {
            if i >= j {
                return Err(Error::InvalidStructure(format!(
                    "bracket entry ({}, {}) must have i < j",
                    i + 1,
                    j + 1
                )));
            }
            if j >= dim {
                return Err(Error::IndexOutOfRange { index: j, len: dim });
            }
            check_dim(dim, v.dim())?;
            let p = pair_index(dim, i, j);
            if seen[p] {
                return Err(Error::InvalidStructure(format!(
                    "duplicate bracket entry ({}, {})",
                    i + 1,
                    j + 1
                )));
            }
            seen[p] = true;
            brackets[p] = v;
        }
        Ok(LieAlgebra {
            name: name.into(),
            labels,
            brackets,
        })
    }

    /// Like [`LieAlgebra::new`] but rejects structure constants violating Jacobi.
    pub fn new_checked<I>(name: impl Into<String>, labels: Vec<String>, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, Vector)>,
    {
        let alg = Self::new(name, labels, entries)?;
        match alg.check_jacobi() {
            JacobiReport::Pass => Ok(alg),
            JacobiReport::Fail { triple, .. } => Err(Error::JacobiViolation(triple)),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn basis_vector(&self, i: usize) -> Vector {
        Vector::unit(self.dim(), i)
    }

    /// `[e_i, e_j]` with antisymmetric completion.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vector {
        let d = self.dim();
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.brackets[pair_index(d, i, j)].clone(),
            std::cmp::Ordering::Greater => self.brackets[pair_index(d, j, i)].scale(&-Q::one()),
            std::cmp::Ordering::Equal => Vector::zero(d),
        }
    }

    /// `c^k_{ij}` for arbitrary `i, j`.
    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> Q {
        self.bracket_basis(i, j).coords()[k].clone()
    }

    /// Stored brackets `(i, j, [e_i, e_j])` with `i < j` and nonzero value.
    pub fn nonzero_brackets(&self) -> impl Iterator<Item = (usize, usize, &Vector)> + '_ {
        let d = self.dim();
        (0..d)
            .flat_map(move |i| (i + 1..d).map(move |j| (i, j)))
            .map(move |(i, j)| (i, j, &self.brackets[pair_index(d, i, j)]))
            .filter(|(_, _, v)| !v.is_zero())
    }

    pub fn is_abelian(&self) -> bool {
        self.brackets.iter().all(Vector::is_zero)
    }

    /// Bilinear extension of the structure constants.
    pub fn bracket(&self, x: &Vector, y: &Vector) -> Result<Vector> {
        let d = self.dim();
        check_dim(d, x.dim())?;
        check_dim(d, y.dim())?;
        let mut out = Vector::zero(d);
        // Σ_{i<j} (x_i y_j - x_j y_i) [e_i, e_j]
        for i in 0..d {
            for j in i + 1..d {
                let c = &x.coords()[i] * &y.coords()[j] - &x.coords()[j] * &y.coords()[i];
                out.axpy(&c, &self.brackets[pair_index(d, i, j)]);
            }
        }
        Ok(out)
    }

    /// Checks `[e_i,[e_j,e_k]] + [e_j,[e_k,e_i]] + [e_k,[e_i,e_j]] = 0` for all `i < j < k`.
    pub fn check_jacobi(&self) -> JacobiReport {
        let d = self.dim();
        let e: Vec<Vector> = (0..d).map(|i| self.basis_vector(i)).collect();
        for i in 0..d {
            for j in i + 1..d {
                for k in j + 1..d {
                    let t1 = self
                        .bracket(&e[i], &self.bracket_basis(j, k))
                        .expect("dims");
                    let t2 = self
                        .bracket(&e[j], &self.bracket_basis(k, i))
                        .expect("dims");
                    let t3 = self
                        .bracket(&e[k], &self.bracket_basis(i, j))
                        .expect("dims");
                    let sum = t1.add(&t2).and_then(|s| s.add(&t3)).expect("dims");
                    if !sum.is_zero() {
                        return JacobiReport::Fail {
                            triple: [i, j, k],
                            residual: sum,
                        };
                    }
                }
            }
        }
        JacobiReport::Pass
    }

    /// Left-nested commutator `[...[X_{α1}, X_{α2}], ..., X_{αn}]` of the given generators.
    pub fn multi_commutator(&self, generators: &[Vector], alpha: &MultiIndex) -> Result<Vector> {
        let (&first, rest) = alpha
            .entries()
            .split_first()
            .ok_or(Error::EmptyMultiIndex)?;
        let get = |j: usize| {
            generators.get(j).ok_or(Error::IndexOutOfRange {
                index: j,
                len: generators.len(),
            })
        };
        let mut acc = get(first)?.clone();
        check_dim(self.dim(), acc.dim())?;
        for &j in rest {
            acc = self.bracket(&acc, get(j)?)?;
        }
        Ok(acc)
    }

    /// `[A, B]` as a subspace.
    pub fn bracket_spaces(&self, a: &Subspace, b: &Subspace) -> Result<Subspace> {
        let mut vs = Vec::with_capacity(a.dim() * b.dim());
        for x in a.rows() {
            for y in b.rows() {
                let z = self.bracket(x, y)?;
                if !z.is_zero() {
                    vs.push(z);
                }
            }
        }
        Subspace::span(self.dim(), &vs)
    }

    /// Computes the lower central series `g^1 = g`, `g^{k+1} = [g, g^k]`.
    pub fn nilpotency(&self) -> Nilpotency {
        let g = Subspace::full(self.dim());
        let mut current = g.clone();
        let mut dims = vec![current.dim()];
        loop {
            let next = self.bracket_spaces(&g, &current).expect("dims");
            if next == current {
                return Nilpotency {
                    nilpotent: current.is_zero(),
                    step: None,
                    series_dims: dims,
                }
                .finish();
            }
            dims.push(next.dim());
            if next.is_zero() {
                return Nilpotency {
                    nilpotent: true,
                    step: None,
                    series_dims: dims,
                }
                .finish();
            }
            current = next;
        }
    }

    pub fn is_nilpotent(&self) -> bool {
        self.nilpotency().nilpotent
    }

    /// `[g, g]`.
    pub fn derived_algebra(&self) -> Subspace {
        let g = Subspace::full(self.dim());
        self.bracket_spaces(&g, &g).expect("dims")
    }
}

impl Nilpotency {
    fn finish(mut self) -> Self {
        if self.nilpotent {
            // series_dims ends in 0; the number of nonzero terms is the step.
            self.step = Some(self.series_dims.iter().filter(|&&d| d > 0).count());
        }
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn v(c: &[i64]) -> Vector {
        Vector::from_integers(c)
    }

    #[test]
    fn heisenberg_bracket() {
        let h = catalog::heisenberg(1);
        assert_eq!(
            h.bracket(&v(&[1, 0, 0]), &v(&[0, 1, 0])).unwrap(),
            v(&[0, 0, 1])
        );
        assert_eq!(
            h.bracket(&v(&[0, 1, 0]), &v(&[1, 0, 0])).unwrap(),
            v(&[0, 0, -1])
        );
    }

    #[test]
    fn self_bracket_vanishes() {
        let su2 = catalog::su2();
        let x = v(&[3, -2, 5]);
        assert!(su2.bracket(&x, &x).unwrap().is_zero());
    }

    #[test]
    fn su2_e2_e3_is_e1() {
        let su2 = catalog::su2();
        assert_eq!(
            su2.bracket(&v(&[0, 1, 0]), &v(&[0, 0, 1])).unwrap(),
            v(&[1, 0, 0])
        );
    }

    #[test]
    fn bracket_dimension_mismatch() {
        let su2 = catalog::su2();
        assert!(matches!(
            su2.bracket(&v(&[1, 0]), &v(&[0, 1, 0])),
            Err(Error::DimensionMismatch {
                expected: 3,
                found: 2
            })
        ));
    }

    #[test]
    fn jacobi_catalog_and_violation() {
        assert!(catalog::su2().check_jacobi().passed());
        assert!(catalog::heisenberg(1).check_jacobi().passed());
        // [e1,e2] = e1, [e1,e3] = e2
        let bad = LieAlgebra::new(
            "bad",
            vec!["e1".into(), "e2".into(), "e3".into()],
            vec![(0, 1, v(&[1, 0, 0])), (0, 2, v(&[0, 1, 0]))],
        )
        .unwrap();
        assert_eq!(
            bad.check_jacobi(),
            JacobiReport::Fail {
                triple: [0, 1, 2],
                residual: v(&[0, -1, 0])
            }
        );
        assert!(matches!(
            LieAlgebra::new_checked(
                "bad",
                bad.labels().to_vec(),
                vec![(0, 1, v(&[1, 0, 0])), (0, 2, v(&[0, 1, 0]))]
            ),
            Err(Error::JacobiViolation([0, 1, 2]))
        ));
    }

    #[test]
    fn multi_commutators() {
        let h = catalog::heisenberg(1);
        let gens = [v(&[1, 0, 0]), v(&[0, 1, 0])];
        assert_eq!(
            h.multi_commutator(&gens, &MultiIndex::new(vec![0, 1]))
                .unwrap(),
            v(&[0, 0, 1])
        );
        assert!(h
            .multi_commutator(&gens, &MultiIndex::new(vec![0, 0]))
            .unwrap()
            .is_zero());
        assert_eq!(
            h.multi_commutator(&gens, &MultiIndex::new(vec![1]))
                .unwrap(),
            gens[1]
        );

        let su2 = catalog::su2();
        let gens = [v(&[1, 0, 0]), v(&[0, 1, 0])];
        assert_eq!(
            su2.multi_commutator(&gens, &MultiIndex::new(vec![1, 0, 1]))
                .unwrap(),
            v(&[1, 0, 0])
        );
        assert_eq!(
            h.multi_commutator(&gens, &MultiIndex::empty()),
            Err(Error::EmptyMultiIndex)
        );
        assert!(matches!(
            h.multi_commutator(&gens, &MultiIndex::new(vec![0, 2])),
            Err(Error::IndexOutOfRange { index: 2, len: 2 })
        ));
    }

    #[test]
    fn spans_and_membership() {
        let x = v(&[1, 0, 0]);
        let y = v(&[0, 1, 0]);
        let z = v(&[0, 0, 1]);
        let xy = x.add(&y).unwrap();
        let s = Subspace::span(3, [&x, &xy]).unwrap();
        assert_eq!(s, Subspace::span(3, [&x, &y]).unwrap());
        assert_eq!(s.dim(), 2);
        assert!(!s.contains(&z).unwrap());
        assert!(s.contains(&Vector::zero(3)).unwrap());
        assert!(s.contains(&y).unwrap());
        assert_eq!(Subspace::span(3, []).unwrap(), Subspace::zero(3));
        assert!(Subspace::span(3, [&x, &v(&[1, 0])]).is_err());
    }

    #[test]
    fn heisenberg_commutators_span_everything() {
        let h = catalog::heisenberg(1);
        let gens = [v(&[1, 0, 0]), v(&[0, 1, 0])];
        let mut all = Vec::new();
        for a in 0..2 {
            all.push(
                h.multi_commutator(&gens, &MultiIndex::new(vec![a]))
                    .unwrap(),
            );
            for b in 0..2 {
                all.push(
                    h.multi_commutator(&gens, &MultiIndex::new(vec![a, b]))
                        .unwrap(),
                );
            }
        }
        assert!(Subspace::span(3, &all).unwrap().is_full());
    }

    #[test]
    fn intersection() {
        let a = Subspace::span(3, [&v(&[1, 0, 0]), &v(&[0, 1, 0])]).unwrap();
        let b = Subspace::span(3, [&v(&[1, 1, 1]), &v(&[0, 0, 1])]).unwrap();
        let c = a.intersection(&b).unwrap();
        assert_eq!(c, Subspace::span(3, [&v(&[1, 1, 0])]).unwrap());
    }

    #[test]
    fn nilpotency() {
        let n = catalog::heisenberg(1).nilpotency();
        assert!(n.nilpotent);
        assert_eq!(n.step, Some(2));
        assert!(!catalog::su2().is_nilpotent());
        assert_eq!(catalog::engel4().nilpotency().step, Some(3));
        assert_eq!(catalog::abelian(2).nilpotency().step, Some(1));
    }

    #[test]
    fn multi_index_lengths() {
        let w: Vec<Q> = [1, 2, 2]
            .iter()
            .map(|&x| Q::from_integer(x.into()))
            .collect();
        let a = MultiIndex::new(vec![0, 2]);
        assert_eq!(a.weighted_length(&w).unwrap(), Q::from_integer(3.into()));
        assert_eq!(a.euclidean_length(), 2);
        assert_eq!(MultiIndex::empty().weighted_length(&w).unwrap(), Q::zero());
        assert!(MultiIndex::new(vec![3]).weighted_length(&w).is_err());
        assert_eq!(a.to_string(), "(1,3)");
    }
}
