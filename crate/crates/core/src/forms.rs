//! Operator forms `C: J(d'') -> ℂ` over a weighted basis.
//!
//! A form stands for the left-invariant operator `Σ_α C(α) X^α`. Coefficients
//! are complex numbers with exact rational real and imaginary parts.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lie::MultiIndex;
use crate::linalg::Q;
use crate::weighted::{common_weight, WeightedBasis};

/// Complex number with rational parts.
pub type CQ = Complex<Q>;

pub fn cq(re: Q, im: Q) -> CQ {
    Complex::new(re, im)
}

pub fn real(re: Q) -> CQ {
    Complex::new(re, Q::zero())
}

/// An `m`-th order form: finitely many nonzero coefficients, none beyond weighted length `m`,
/// at least one exactly at `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Form {
    weights: Vec<Q>,
    coefficients: BTreeMap<MultiIndex, CQ>,
    order: Q,
}

impl Form {
    /// Collects the terms (summing repeated indices, dropping zeros); the order is the
    /// largest weighted length carrying a nonzero coefficient.
    pub fn new<I>(weights: Vec<Q>, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, CQ)>,
    {
        if weights.is_empty() {
            return Err(Error::InvalidForm("empty weighted basis".into()));
        }
        let mut coefficients: BTreeMap<MultiIndex, CQ> = BTreeMap::new();
        for (alpha, c) in terms {
            if let Some(j) = alpha.max_entry().filter(|&j| j >= weights.len()) {
                return Err(Error::IndexOutOfRange {
                    index: j,
                    len: weights.len(),
                });
            }
            let slot = coefficients.entry(alpha).or_insert_with(CQ::zero);
            *slot = &*slot + &c;
        }
        coefficients.retain(|_, c| !c.is_zero());
        let order = coefficients
            .keys()
            .map(|a| a.weighted_length(&weights).expect("indices checked"))
            .max()
            .ok_or_else(|| Error::InvalidForm("all coefficients vanish".into()))?;
        Ok(Form {
            weights,
            coefficients,
            order,
        })
    }

    pub fn weights(&self) -> &[Q] {
        &self.weights
    }

    pub fn basis_dim(&self) -> usize {
        self.weights.len()
    }

    pub fn order(&self) -> &Q {
        &self.order
    }

    pub fn coefficient(&self, alpha: &MultiIndex) -> CQ {
        self.coefficients
            .get(alpha)
            .cloned()
            .unwrap_or_else(CQ::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &CQ)> {
        self.coefficients.iter()
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    fn weighted_length(&self, alpha: &MultiIndex) -> Q {
        alpha
            .weighted_length(&self.weights)
            .expect("indices checked at construction")
    }

    pub fn is_homogeneous(&self) -> bool {
        self.coefficients
            .keys()
            .all(|a| self.weighted_length(a) == self.order)
    }

    /// Longest multi-index in the support.
    pub fn max_euclidean_length(&self) -> usize {
        self.coefficients
            .keys()
            .map(MultiIndex::euclidean_length)
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, (alpha, c)) in self.coefficients.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            if c.im.is_zero() {
                write!(f, "({})X{alpha}", c.re)?;
            } else {
                write!(f, "({} + {}i)X{alpha}", c.re, c.im)?;
            }
        }
        Ok(())
    }
}

/// Terms of weighted length exactly `m`.
pub fn principal_part(form: &Form) -> Form {
    let coefficients = form
        .coefficients
        .iter()
        .filter(|(a, _)| form.weighted_length(a) == form.order)
        .map(|(a, c)| (a.clone(), c.clone()))
        .collect();
    Form {
        weights: form.weights.clone(),
        coefficients,
        order: form.order.clone(),
    }
}

/// `C⁺(α) = (-1)^{|α|} conj(C(α reversed))`.
pub fn adjoint(form: &Form) -> Form {
    let coefficients = form
        .coefficients
        .iter()
        .map(|(a, c)| {
            let conj = c.conj();
            let v = if a.euclidean_length() % 2 == 0 {
                conj
            } else {
                -conj
            };
            (a.reversed(), v)
        })
        .collect();
    Form {
        weights: form.weights.clone(),
        coefficients,
        order: form.order.clone(),
    }
}

pub fn is_symmetric(form: &Form) -> bool {
    adjoint(form) == *form
}

/// Form of the positive sub-Laplacian `-Σ_{j≤d'} X_j²` (all weights 1).
pub fn sublaplacian_form(generators: usize) -> Result<Form> {
    if generators == 0 {
        return Err(Error::InvalidForm("need at least one generator".into()));
    }
    let terms = (0..generators).map(|j| (MultiIndex::repeated(j, 2), real(-Q::one())));
    Form::new(vec![Q::one(); generators], terms)
}

/// `Σ_j (-1)^{m/(2u_j)} c_j X_j^{m/u_j}`, requiring `m ∈ 2 u_j ℕ` for every `j`.
pub fn rockland_power_form(weights: &[Q], coefficients: &[Q], order: &Q) -> Result<Form> {
    if weights.is_empty() || weights.len() != coefficients.len() {
        return Err(Error::InvalidForm(
            "need one positive coefficient per weight".into(),
        ));
    }
    if let Some(c) = coefficients.iter().find(|c| **c <= Q::zero()) {
        return Err(Error::InvalidForm(format!(
            "coefficient {c} is not positive"
        )));
    }
    let two = Q::from_integer(2.into());
    let mut terms = Vec::with_capacity(weights.len());
    for (j, (u, c)) in weights.iter().zip(coefficients).enumerate() {
        if *u <= Q::zero() {
            return Err(Error::InvalidForm(format!("weight {u} is not positive")));
        }
        let half_power = order / (&two * u);
        if !half_power.is_integer() || half_power <= Q::zero() {
            return Err(Error::InvalidForm(format!(
                "order {order} is not in 2·{u}·ℕ"
            )));
        }
        let power: num_bigint::BigInt = half_power.to_integer() * 2;
        let power: usize = power
            .try_into()
            .map_err(|_| Error::InvalidForm("power too large".into()))?;
        let sign = if half_power.to_integer().is_even() {
            Q::one()
        } else {
            -Q::one()
        };
        terms.push((MultiIndex::repeated(j, power), real(sign * c)));
    }
    Form::new(weights.to_vec(), terms)
}

/// `m ∈ 2wℕ` where `w` is the least common multiple of the weights.
pub fn order_compatibility_weights(form: &Form, weights: &[Q]) -> bool {
    let w = common_weight(weights);
    let ratio = form.order() / (Q::from_integer(2.into()) * w);
    ratio.is_integer() && ratio > Q::zero()
}

pub fn order_compatibility(form: &Form, basis: &WeightedBasis) -> bool {
    order_compatibility_weights(form, basis.weights())
}
