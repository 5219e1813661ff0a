//! Weighted algebraic bases, their filtrations, reduced bases and the graded
//! contraction with its homogeneous dimension.

use std::collections::BTreeMap;
use std::ops::Range;

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lie::{LieAlgebra, MultiIndex, Subspace, Vector};
use crate::linalg::{self, Q};

/// Linearly independent elements of a Lie algebra, each with a rational weight `≥ 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedBasis {
    ambient_dim: usize,
    elements: Vec<Vector>,
    weights: Vec<Q>,
}

impl WeightedBasis {
    pub fn new(ambient_dim: usize, elements: Vec<Vector>, weights: Vec<Q>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::InvalidBasis("no elements".into()));
        }
        if elements.len() != weights.len() {
            return Err(Error::InvalidBasis(format!(
                "{} elements but {} weights",
                elements.len(),
                weights.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| **w < Q::one()) {
            return Err(Error::InvalidBasis(format!("weight {w} is below 1")));
        }
        let span = Subspace::span(ambient_dim, &elements)?;
        if span.dim() != elements.len() {
            return Err(Error::InvalidBasis(
                "elements are linearly dependent".into(),
            ));
        }
        Ok(WeightedBasis {
            ambient_dim,
            elements,
            weights,
        })
    }

    /// Basis made of the standard basis vectors `e_i`, `i ∈ indices`.
    pub fn from_indices(alg: &LieAlgebra, indices: &[usize], weights: Vec<Q>) -> Result<Self> {
        let d = alg.dim();
        let mut elements = Vec::with_capacity(indices.len());
        for &i in indices {
            if i >= d {
                return Err(Error::IndexOutOfRange { index: i, len: d });
            }
            elements.push(Vector::unit(d, i));
        }
        Self::new(d, elements, weights)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Vector] {
        &self.elements
    }

    pub fn weights(&self) -> &[Q] {
        &self.weights
    }

    /// Least positive rational lying in every `w_j ℕ`.
    pub fn common_weight(&self) -> Q {
        common_weight(&self.weights)
    }

    fn distinct_weights(&self) -> Vec<Q> {
        let mut ws = self.weights.clone();
        ws.sort();
        ws.dedup();
        ws
    }
}

/// Least common multiple of positive rationals: `lcm(numerators) / gcd(denominators)`.
pub fn common_weight(weights: &[Q]) -> Q {
    let mut num = num_bigint::BigInt::one();
    let mut den = num_bigint::BigInt::zero();
    for w in weights {
        num = num.lcm(w.numer());
        den = den.gcd(w.denom());
    }
    if den.is_zero() {
        return Q::one();
    }
    Q::new(num, den)
}

/// `‖α‖ = Σ_j w_{α_j}`.
pub fn weighted_length(alpha: &MultiIndex, weights: &[Q]) -> Result<Q> {
    alpha.weighted_length(weights)
}

/// True iff the basis elements together with their multi-commutators span the algebra.
pub fn is_algebraic_basis(alg: &LieAlgebra, basis: &WeightedBasis) -> Result<bool> {
    if basis.ambient_dim() != alg.dim() {
        return Err(Error::DimensionMismatch {
            expected: alg.dim(),
            found: basis.ambient_dim(),
        });
    }
    let gens = Subspace::span(alg.dim(), basis.elements())?;
    let mut s = gens.clone();
    loop {
        let next = s.join(&alg.bracket_spaces(&s, &gens)?)?;
        if next == s {
            return Ok(s.is_full());
        }
        s = next;
    }
}

/// The filtration `F_λ` recorded at its jumps `λ_1 < ... < λ_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Filtration {
    ambient_dim: usize,
    levels: Vec<(Q, Subspace)>,
}

impl Filtration {
    pub fn levels(&self) -> &[(Q, Subspace)] {
        &self.levels
    }

    pub fn jumps(&self) -> Vec<Q> {
        self.levels.iter().map(|(l, _)| l.clone()).collect()
    }

    /// `F_μ`: the space at the largest jump `≤ μ`.
    pub fn at(&self, mu: &Q) -> Subspace {
        self.levels
            .iter()
            .rev()
            .find(|(l, _)| l <= mu)
            .map(|(_, s)| s.clone())
            .unwrap_or_else(|| Subspace::zero(self.ambient_dim))
    }

    /// `F_λ⁻ = ⋃_{μ<λ} F_μ`.
    pub fn below(&self, lambda: &Q) -> Subspace {
        self.levels
            .iter()
            .rev()
            .find(|(l, _)| l < lambda)
            .map(|(_, s)| s.clone())
            .unwrap_or_else(|| Subspace::zero(self.ambient_dim))
    }

    /// Smallest jump whose space contains `v`.
    pub fn first_appearance(&self, v: &Vector) -> Result<Option<Q>> {
        for (l, s) in &self.levels {
            if s.contains(v)? {
                return Ok(Some(l.clone()));
            }
        }
        Ok(None)
    }

    /// Checks `[F_λ, F_μ] ⊆ F_{λ+μ}` for every pair of jumps.
    pub fn satisfies_bracket_law(&self, alg: &LieAlgebra) -> Result<bool> {
        for (a, sa) in &self.levels {
            for (b, sb) in &self.levels {
                if b < a {
                    continue;
                }
                let br = alg.bracket_spaces(sa, sb)?;
                if !self.at(&(a + b)).contains_subspace(&br)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Builds `F_λ = span{ multi-commutators with ‖α‖ ≤ λ }` by increasing weighted length.
pub fn build_filtration(alg: &LieAlgebra, basis: &WeightedBasis) -> Result<Filtration> {
    if !is_algebraic_basis(alg, basis)? {
        return Err(Error::NotAlgebraicBasis);
    }
    let d = alg.dim();
    // The commutators of exact weighted length λ span a space V_λ, and
    // V_{λ+w_j} ⊇ [V_λ, X_j]; only a basis of each V_λ needs to be carried forward.
    let mut pending: BTreeMap<Q, Vec<Vector>> = BTreeMap::new();
    for (x, w) in basis.elements().iter().zip(basis.weights()) {
        pending.entry(w.clone()).or_default().push(x.clone());
    }
    let mut current = Subspace::zero(d);
    let mut levels = Vec::new();
    while let Some((lambda, vs)) = pending.pop_first() {
        let layer = Subspace::span(d, &vs)?;
        let next = current.join(&layer)?;
        if next != current {
            levels.push((lambda.clone(), next.clone()));
            current = next;
        }
        if current.is_full() {
            break;
        }
        for v in layer.rows() {
            for (x, w) in basis.elements().iter().zip(basis.weights()) {
                let z = alg.bracket(v, x)?;
                if !z.is_zero() {
                    pending.entry(&lambda + w).or_default().push(z);
                }
            }
        }
    }
    if !current.is_full() {
        return Err(Error::NotAlgebraicBasis);
    }
    Ok(Filtration {
        ambient_dim: d,
        levels,
    })
}

/// Outcome of the reducedness test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reducedness {
    pub reduced: bool,
    /// A nonzero element of `span{X_j : w_j = λ} ∩ F_λ⁻`, with its `λ`.
    pub witness: Option<(Q, Vector)>,
}

/// Tests `span{X_j | w_j = λ} ∩ F_λ⁻ = {0}` for every weight `λ` of the basis.
pub fn is_reduced(alg: &LieAlgebra, basis: &WeightedBasis) -> Result<Reducedness> {
    let filt = build_filtration(alg, basis)?;
    is_reduced_against(&filt, basis)
}

fn layer_elements<'a>(basis: &'a WeightedBasis, lambda: &Q) -> Vec<&'a Vector> {
    basis
        .elements()
        .iter()
        .zip(basis.weights())
        .filter(|(_, w)| *w == lambda)
        .map(|(x, _)| x)
        .collect()
}

fn is_reduced_against(filt: &Filtration, basis: &WeightedBasis) -> Result<Reducedness> {
    let d = basis.ambient_dim();
    for lambda in basis.distinct_weights() {
        let layer = Subspace::span(d, layer_elements(basis, &lambda))?;
        let common = layer.intersection(&filt.below(&lambda))?;
        if let Some(w) = common.rows().first() {
            return Ok(Reducedness {
                reduced: false,
                witness: Some((lambda, w.clone())),
            });
        }
    }
    Ok(Reducedness {
        reduced: true,
        witness: None,
    })
}

/// Returns a reduced weighted basis defining the same filtration.
///
/// Each element's weight is first lowered to the jump at which it enters the
/// filtration; then, layer by layer, elements lying in `F_λ⁻ + span(rest of layer)`
/// are dropped (last one first) until every layer meets `F_λ⁻` trivially.
pub fn reduce(alg: &LieAlgebra, basis: &WeightedBasis) -> Result<WeightedBasis> {
    let filt = build_filtration(alg, basis)?;
    let d = alg.dim();
    let mut elements = basis.elements().to_vec();
    let mut weights = Vec::with_capacity(elements.len());
    for x in &elements {
        weights.push(
            filt.first_appearance(x)?
                .expect("the last level is the whole algebra"),
        );
    }

    'outer: loop {
        let current = WeightedBasis::new(d, elements.clone(), weights.clone())?;
        for lambda in current.distinct_weights() {
            let below = filt.below(&lambda);
            let layer: Vec<usize> = (0..elements.len())
                .filter(|&i| weights[i] == lambda)
                .collect();
            let layer_span = Subspace::span(d, layer.iter().map(|&i| &elements[i]))?;
            if layer_span.intersection(&below)?.is_zero() {
                continue;
            }
            for &k in layer.iter().rev() {
                let others = layer.iter().filter(|&&i| i != k).map(|&i| &elements[i]);
                let rest = Subspace::span(d, others)?.join(&below)?;
                if rest.contains(&elements[k])? {
                    elements.remove(k);
                    weights.remove(k);
                    continue 'outer;
                }
            }
            unreachable!("a nontrivial intersection always has a removable element");
        }
        break;
    }

    let reduced = WeightedBasis::new(d, elements, weights)?;
    if build_filtration(alg, &reduced)? != filt {
        return Err(Error::InvalidBasis(
            "reduction changed the filtration".into(),
        ));
    }
    Ok(reduced)
}

/// The contraction: a graded Lie algebra in an adapted basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedLieAlgebra {
    algebra: LieAlgebra,
    grade_weights: Vec<Q>,
    layers: Vec<(Q, Range<usize>)>,
    /// Adapted basis vectors expressed in the coordinates of the source algebra.
    adapted_basis: Vec<Vector>,
}

impl GradedLieAlgebra {
    /// Wraps an algebra whose basis vectors carry the given grade weights.
    /// Weights must be sorted non-decreasingly; the grading law is not checked
    /// here (see [`check_grading`]).
    pub fn from_parts(algebra: LieAlgebra, grade_weights: Vec<Q>) -> Result<Self> {
        if grade_weights.len() != algebra.dim() {
            return Err(Error::DimensionMismatch {
                expected: algebra.dim(),
                found: grade_weights.len(),
            });
        }
        if grade_weights.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidBasis("grade weights must be sorted".into()));
        }
        let layers = layers_of(&grade_weights);
        let d = algebra.dim();
        let adapted_basis = (0..d).map(|i| Vector::unit(d, i)).collect();
        Ok(GradedLieAlgebra {
            algebra,
            grade_weights,
            layers,
            adapted_basis,
        })
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn grade_weights(&self) -> &[Q] {
        &self.grade_weights
    }

    pub fn layers(&self) -> &[(Q, Range<usize>)] {
        &self.layers
    }

    pub fn adapted_basis(&self) -> &[Vector] {
        &self.adapted_basis
    }

    pub fn q_star(&self) -> Q {
        homogeneous_dimension(self)
    }

    /// The full standard basis weighted by the grading.
    pub fn as_weighted_basis(&self) -> WeightedBasis {
        WeightedBasis::from_indices(
            &self.algebra,
            &(0..self.algebra.dim()).collect::<Vec<_>>(),
            self.grade_weights.clone(),
        )
        .expect("standard basis is independent and weights are >= 1")
    }
}

fn layers_of(weights: &[Q]) -> Vec<(Q, Range<usize>)> {
    let mut layers: Vec<(Q, Range<usize>)> = Vec::new();
    for (i, w) in weights.iter().enumerate() {
        match layers.last_mut() {
            Some((l, r)) if l == w => r.end = i + 1,
            _ => layers.push((w.clone(), i..i + 1)),
        }
    }
    layers
}

/// Contracts a weighted Lie algebra to its associated graded algebra.
///
/// A non-reduced basis is reduced first. The adapted basis is built level by
/// level: at each jump `λ`, the basis elements of weight `λ` are taken first,
/// then rows of the echelon form of `F_λ` complete a basis modulo `F_λ⁻`.
/// Contracted brackets keep only components of weight exactly `w_i + w_j`.
pub fn contract(alg: &LieAlgebra, basis: &WeightedBasis) -> Result<GradedLieAlgebra> {
    let basis = if is_reduced(alg, basis)?.reduced {
        basis.clone()
    } else {
        reduce(alg, basis)?
    };
    let filt = build_filtration(alg, &basis)?;
    let d = alg.dim();

    let mut adapted: Vec<Vector> = Vec::with_capacity(d);
    let mut grade_weights: Vec<Q> = Vec::with_capacity(d);
    let mut span = Subspace::zero(d);
    for (lambda, level) in filt.levels() {
        let preferred = layer_elements(&basis, lambda).into_iter().cloned();
        for v in preferred.chain(level.rows().iter().cloned()) {
            if !span.contains(&v)? {
                span = span.join(&Subspace::span(d, [&v])?)?;
                adapted.push(v);
                grade_weights.push(lambda.clone());
            }
        }
    }
    debug_assert_eq!(adapted.len(), d);

    let coords: Vec<Vec<Q>> = adapted.iter().map(|v| v.coords().to_vec()).collect();
    let mut entries = Vec::new();
    for i in 0..d {
        for j in i + 1..d {
            let z = alg.bracket(&adapted[i], &adapted[j])?;
            if z.is_zero() {
                continue;
            }
            let top = &grade_weights[i] + &grade_weights[j];
            let c = linalg::solve_in_basis(&coords, z.coords())
                .expect("adapted basis spans the algebra");
            let kept: Vec<Q> = c
                .into_iter()
                .zip(&grade_weights)
                .map(|(x, w)| if *w == top { x } else { Q::zero() })
                .collect();
            let kept = Vector::new(kept);
            if !kept.is_zero() {
                entries.push((i, j, kept));
            }
        }
    }

    let labels = adapted
        .iter()
        .enumerate()
        .map(|(n, v)| match (0..d).find(|&k| *v == Vector::unit(d, k)) {
            Some(k) => alg.labels()[k].clone(),
            None => format!("v{}", n + 1),
        })
        .collect();
    let algebra = LieAlgebra::new(format!("{}*", alg.name()), labels, entries)?;
    let layers = layers_of(&grade_weights);
    Ok(GradedLieAlgebra {
        algebra,
        grade_weights,
        layers,
        adapted_basis: adapted,
    })
}

/// `Q* = Σ_k w_k` over an adapted basis.
pub fn homogeneous_dimension(g: &GradedLieAlgebra) -> Q {
    g.grade_weights.iter().fold(Q::zero(), |acc, w| acc + w)
}

/// Validation of a graded algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradingReport {
    pub grading_law: bool,
    /// First `(i, j, k)` with `c^k_{ij} ≠ 0` but `w_k ≠ w_i + w_j`.
    pub violation: Option<(usize, usize, usize)>,
    pub jacobi: bool,
    pub nilpotent: bool,
}

impl GradingReport {
    pub fn ok(&self) -> bool {
        self.grading_law && self.jacobi && self.nilpotent
    }
}

pub fn check_grading(g: &GradedLieAlgebra) -> GradingReport {
    let w = &g.grade_weights;
    let mut violation = None;
    'scan: for (i, j, v) in g.algebra.nonzero_brackets() {
        for (k, c) in v.coords().iter().enumerate() {
            if !c.is_zero() && w[k] != &w[i] + &w[j] {
                violation = Some((i, j, k));
                break 'scan;
            }
        }
    }
    GradingReport {
        grading_law: violation.is_none(),
        violation,
        jacobi: g.algebra.check_jacobi().passed(),
        nilpotent: g.algebra.is_nilpotent(),
    }
}

/// Coarse isomorphism class of an algebra of dimension at most 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LowDimClass {
    Abelian,
    Heisenberg,
    Other,
}

/// Distinguishes abelian, Heisenberg and the rest by the derived algebra and nilpotency.
pub fn classify_low_dim(alg: &LieAlgebra) -> LowDimClass {
    let derived = alg.derived_algebra().dim();
    if derived == 0 {
        LowDimClass::Abelian
    } else if alg.dim() == 3 && derived == 1 && alg.is_nilpotent() {
        LowDimClass::Heisenberg
    } else {
        LowDimClass::Other
    }
}

/// Rescales a 3-dimensional graded algebra with weights `(1, 1, 2)` and
/// `[v1, v2] = c v3`, `c ≠ 0`, to `[v1, v2] = v3`. Returns `None` when the
/// algebra does not have that shape.
pub fn heisenberg_normal_form(g: &GradedLieAlgebra) -> Option<LieAlgebra> {
    let one = Q::one();
    let two = &one + &one;
    if g.grade_weights != [one.clone(), one, two] {
        return None;
    }
    let alg = &g.algebra;
    let c = alg.structure_constant(0, 1, 2);
    let only_top = alg
        .nonzero_brackets()
        .all(|(i, j, v)| (i, j) == (0, 1) && v.coords()[0].is_zero() && v.coords()[1].is_zero());
    if c.is_zero() || !only_top {
        return None;
    }
    let normalized = LieAlgebra::new(
        "heisenberg1",
        crate::catalog::heisenberg(1).labels().to_vec(),
        vec![(0, 1, Vector::unit(3, 2))],
    )
    .ok()?;
    Some(normalized)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn q(n: i64) -> Q {
        Q::from_integer(n.into())
    }

    fn ws(w: &[i64]) -> Vec<Q> {
        w.iter().map(|&x| q(x)).collect()
    }

    fn basis(alg: &LieAlgebra, idx: &[usize], w: &[i64]) -> WeightedBasis {
        WeightedBasis::from_indices(alg, idx, ws(w)).unwrap()
    }

    #[test]
    fn weighted_lengths() {
        assert_eq!(
            weighted_length(&MultiIndex::new(vec![0, 2]), &ws(&[1, 2, 2])).unwrap(),
            q(3)
        );
        assert_eq!(
            weighted_length(&MultiIndex::new(vec![0, 0]), &ws(&[1, 1])).unwrap(),
            q(2)
        );
        assert_eq!(
            weighted_length(&MultiIndex::new(vec![1, 1, 0]), &ws(&[1, 2])).unwrap(),
            q(5)
        );
        assert!(weighted_length(&MultiIndex::new(vec![2]), &ws(&[1, 2])).is_err());
    }

    #[test]
    fn common_weights() {
        assert_eq!(common_weight(&ws(&[1, 1])), q(1));
        assert_eq!(common_weight(&ws(&[1, 2])), q(2));
        assert_eq!(common_weight(&ws(&[2, 3])), q(6));
        let half = Q::new(3.into(), 2.into());
        assert_eq!(common_weight(&[half, q(1)]), q(3));
    }

    #[test]
    fn basis_validation() {
        let h = catalog::heisenberg(1);
        assert!(
            WeightedBasis::from_indices(&h, &[0, 1], vec![q(1), Q::new(1.into(), 2.into())])
                .is_err()
        );
        assert!(
            WeightedBasis::new(3, vec![Vector::unit(3, 0), Vector::unit(3, 0)], ws(&[1, 1]))
                .is_err()
        );
        assert!(WeightedBasis::from_indices(&h, &[0, 5], ws(&[1, 1])).is_err());
    }

    #[test]
    fn algebraic_bases() {
        let h = catalog::heisenberg(1);
        assert!(is_algebraic_basis(&h, &basis(&h, &[0, 1], &[1, 1])).unwrap());
        assert!(!is_algebraic_basis(&h, &basis(&h, &[0], &[1])).unwrap());
        let s = catalog::su2();
        assert!(is_algebraic_basis(&s, &basis(&s, &[0, 1], &[1, 1])).unwrap());
    }

    #[test]
    fn filtrations() {
        let s = catalog::su2();
        let f = build_filtration(&s, &basis(&s, &[0, 1], &[1, 1])).unwrap();
        assert_eq!(f.jumps(), ws(&[1, 2]));
        assert_eq!(
            f.levels()[0].1,
            Subspace::span(3, [&Vector::unit(3, 0), &Vector::unit(3, 1)]).unwrap()
        );
        assert!(f.levels()[1].1.is_full());

        let h = catalog::heisenberg(1);
        let f = build_filtration(&h, &basis(&h, &[0, 1], &[1, 1])).unwrap();
        assert_eq!(f.jumps(), ws(&[1, 2]));
        let f3 = build_filtration(&h, &basis(&h, &[0, 1, 2], &[1, 1, 3])).unwrap();
        assert_eq!(f3, f);
        assert!(f.satisfies_bracket_law(&h).unwrap());
        assert_eq!(
            build_filtration(&h, &basis(&h, &[0], &[1])),
            Err(Error::NotAlgebraicBasis)
        );
    }

    #[test]
    fn reducedness() {
        let h = catalog::heisenberg(1);
        assert!(
            is_reduced(&h, &basis(&h, &[0, 1, 2], &[1, 1, 2]))
                .unwrap()
                .reduced
        );
        let r = is_reduced(&h, &basis(&h, &[0, 1, 2], &[1, 1, 3])).unwrap();
        assert!(!r.reduced);
        assert_eq!(r.witness, Some((q(3), Vector::unit(3, 2))));
        let h2 = catalog::heisenberg(2);
        assert!(
            is_reduced(&h2, &basis(&h2, &[0, 1, 2, 3], &[1, 1, 1, 1]))
                .unwrap()
                .reduced
        );
    }

    #[test]
    fn reduction() {
        let h = catalog::heisenberg(1);
        let b = basis(&h, &[0, 1, 2], &[1, 1, 3]);
        let r = reduce(&h, &b).unwrap();
        assert_eq!(r, basis(&h, &[0, 1, 2], &[1, 1, 2]));
        assert!(is_reduced(&h, &r).unwrap().reduced);
        assert_eq!(reduce(&h, &r).unwrap(), r);

        let s = catalog::su2();
        let b = basis(&s, &[0, 1, 2], &[1, 1, 1]);
        assert_eq!(reduce(&s, &b).unwrap(), b);
    }

    #[test]
    fn reduction_lowers_weights() {
        let h = catalog::heisenberg(1);
        let b = WeightedBasis::new(
            3,
            vec![Vector::unit(3, 0), Vector::unit(3, 1), Vector::unit(3, 2)],
            vec![q(1), q(1), Q::new(5.into(), 2.into())],
        )
        .unwrap();
        let r = reduce(&h, &b).unwrap();
        assert_eq!(r.weights(), &ws(&[1, 1, 2])[..]);

        // e1 + e2 + e3 enters at 2 and is not in F_2⁻ = span{e1, e2}.
        let s = catalog::su2();
        let b = WeightedBasis::new(
            3,
            vec![
                Vector::unit(3, 0),
                Vector::unit(3, 1),
                Vector::from_integers(&[1, 1, 1]),
            ],
            ws(&[1, 1, 2]),
        )
        .unwrap();
        assert_eq!(reduce(&s, &b).unwrap(), b);
    }

    #[test]
    fn reduction_drops_layer_member() {
        // {E1, E2, E4, E4 + E3} at (1, 1, 3, 3): the weight-3 layer meets
        // F_3⁻ = span{E1, E2, E3} in span{E3}.
        let e = catalog::engel4();
        let b = WeightedBasis::new(
            4,
            vec![
                Vector::unit(4, 0),
                Vector::unit(4, 1),
                Vector::unit(4, 3),
                Vector::from_integers(&[0, 0, 1, 1]),
            ],
            ws(&[1, 1, 3, 3]),
        )
        .unwrap();
        let r = is_reduced(&e, &b).unwrap();
        assert!(!r.reduced);
        assert_eq!(r.witness, Some((q(3), Vector::unit(4, 2))));
        let red = reduce(&e, &b).unwrap();
        assert_eq!(red, basis(&e, &[0, 1, 3], &[1, 1, 3]));
        assert_eq!(
            build_filtration(&e, &red).unwrap(),
            build_filtration(&e, &b).unwrap()
        );
    }

    #[test]
    fn reduction_drops_dependent_layer_member() {
        // engel4 with {E1, E2, E3} at weights (1, 1, 2): E3 = [E1, E2] ∈ F_2 already,
        // but weight-2 layer {E3} meets F_2⁻ = span{E1, E2} trivially, so it is kept.
        // With {E1, E2, E4} at weights (1, 1, 3): E4 = [E1, [E1, E2]] enters at 3 and stays.
        let e = catalog::engel4();
        let b = basis(&e, &[0, 1, 3], &[1, 1, 3]);
        assert_eq!(reduce(&e, &b).unwrap(), b);
        // With E3 at weight 4, it is lowered to 2.
        let b = basis(&e, &[0, 1, 2], &[1, 1, 4]);
        assert_eq!(reduce(&e, &b).unwrap().weights(), &ws(&[1, 1, 2])[..]);
    }

    #[test]
    fn contraction_examples() {
        let s = catalog::su2();
        let g = contract(&s, &basis(&s, &[0, 1], &[1, 1])).unwrap();
        assert_eq!(g.grade_weights(), &ws(&[1, 1, 2])[..]);
        assert_eq!(g.q_star(), q(4));
        assert_eq!(g.algebra().nonzero_brackets().count(), 1);
        assert_eq!(g.algebra().bracket_basis(0, 1), Vector::unit(3, 2));
        assert_eq!(heisenberg_normal_form(&g).unwrap(), catalog::heisenberg(1));

        let h = catalog::heisenberg(1);
        let g = contract(&h, &basis(&h, &[0, 1, 2], &[1, 1, 1])).unwrap();
        assert!(g.algebra().is_abelian());
        assert_eq!(g.q_star(), q(3));
        assert_eq!(classify_low_dim(g.algebra()), LowDimClass::Abelian);
    }

    #[test]
    fn homogeneous_dimensions() {
        for n in 1..=3 {
            let e = catalog::lookup(&format!("heisenberg{n}")).unwrap();
            let g = contract(&e.algebra, &e.canonical_basis()).unwrap();
            assert_eq!(homogeneous_dimension(&g), q(2 * n as i64 + 2));
        }
        let a = catalog::lookup("abelian4").unwrap();
        assert_eq!(
            contract(&a.algebra, &a.canonical_basis()).unwrap().q_star(),
            q(4)
        );
        let e = catalog::lookup("engel4").unwrap();
        assert_eq!(
            contract(&e.algebra, &e.canonical_basis()).unwrap().q_star(),
            q(7)
        );
    }

    #[test]
    fn grading_checks() {
        let s = catalog::su2();
        assert!(check_grading(&contract(&s, &basis(&s, &[0, 1], &[1, 1])).unwrap()).ok());
        for e in catalog::standard_entries() {
            let g = contract(&e.algebra, &e.canonical_basis()).unwrap();
            assert!(check_grading(&g).ok(), "{}", e.algebra.name());
        }
        // [v1, v2] = v3 with weights (1, 1, 3) violates the grading law.
        let bad = GradedLieAlgebra::from_parts(catalog::heisenberg(1), ws(&[1, 1, 3])).unwrap();
        let r = check_grading(&bad);
        assert!(!r.grading_law);
        assert_eq!(r.violation, Some((0, 1, 2)));
    }

    #[test]
    fn classification() {
        assert_eq!(
            classify_low_dim(&catalog::heisenberg(1)),
            LowDimClass::Heisenberg
        );
        assert_eq!(classify_low_dim(&catalog::su2()), LowDimClass::Other);
        assert_eq!(classify_low_dim(&catalog::abelian(3)), LowDimClass::Abelian);
    }
}
