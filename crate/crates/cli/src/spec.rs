//! Algebra spec files.
//!
//! ```toml
//! name = "h1"
//! dim = 3
//! labels = ["X", "Y", "Z"]
//!
//! [[bracket]]          # [e_i, e_j] = Σ_k c^k_{ij} e_k, 1-based, i < j
//! i = 1
//! j = 2
//! coefficients = ["0", "0", "1"]
//!
//! [[basis]]            # optional weighted bases
//! name = "canonical"
//! indices = [1, 2]
//! weights = ["1", "1"]
//!
//! [metadata]           # optional free-form strings
//! source = "catalog"
//! ```

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use lietrace::catalog;
use lietrace::weighted::WeightedBasis;
use lietrace::{LieAlgebra, Vector, Q};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSpec {
    pub name: String,
    pub dim: usize,
    pub labels: Vec<String>,
    #[serde(default, rename = "bracket")]
    pub brackets: Vec<BracketEntry>,
    #[serde(default, rename = "basis", skip_serializing_if = "Vec::is_empty")]
    pub bases: Vec<BasisSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    pub coefficients: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisSpec {
    pub name: String,
    pub indices: Vec<usize>,
    pub weights: Vec<String>,
}

/// An algebra together with the weighted bases that came with it.
#[derive(Debug, Clone)]
pub struct LoadedAlgebra {
    pub algebra: LieAlgebra,
    pub bases: Vec<(String, WeightedBasis)>,
}

/// Exact rational from `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<Q, CliError> {
    let t = s.trim();
    if t.split('/')
        .nth(1)
        .is_some_and(|d| d.trim_start_matches(['+', '-']).chars().all(|c| c == '0'))
    {
        return Err(CliError::Parse(format!("zero denominator in \"{s}\"")));
    }
    Q::from_str(t)
        .map_err(|_| CliError::Parse(format!("\"{s}\" is not a rational of the form p/q")))
}

fn parse_indices(indices: &[usize], dim: usize, what: &str) -> Result<Vec<usize>, CliError> {
    indices
        .iter()
        .map(|&i| {
            if (1..=dim).contains(&i) {
                Ok(i - 1)
            } else {
                Err(CliError::Parse(format!(
                    "{what}: index {i} outside 1..={dim}"
                )))
            }
        })
        .collect()
}

impl AlgebraSpec {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("spec serializes")
    }

    /// Builds the algebra, checking index ranges, exact coefficients and the Jacobi identity.
    pub fn build(&self) -> Result<LoadedAlgebra, CliError> {
        if self.labels.len() != self.dim {
            return Err(CliError::Parse(format!(
                "{} labels for dimension {}",
                self.labels.len(),
                self.dim
            )));
        }
        let mut entries = Vec::with_capacity(self.brackets.len());
        for (n, b) in self.brackets.iter().enumerate() {
            let at = format!("bracket entry {}", n + 1);
            if !(1 <= b.i && b.i < b.j && b.j <= self.dim) {
                return Err(CliError::Parse(format!(
                    "{at}: need 1 <= i < j <= {}, got ({}, {})",
                    self.dim, b.i, b.j
                )));
            }
            if b.coefficients.len() != self.dim {
                return Err(CliError::Parse(format!(
                    "{at}: {} coefficients, expected {}",
                    b.coefficients.len(),
                    self.dim
                )));
            }
            let coords = b
                .coefficients
                .iter()
                .map(|c| parse_rational(c).map_err(|e| CliError::Parse(format!("{at}: {e}"))))
                .collect::<Result<Vec<_>, _>>()?;
            entries.push((b.i - 1, b.j - 1, Vector::new(coords)));
        }
        let algebra = LieAlgebra::new_checked(self.name.clone(), self.labels.clone(), entries)?;
        let mut bases = Vec::new();
        for b in &self.bases {
            let at = format!("basis \"{}\"", b.name);
            let idx = parse_indices(&b.indices, self.dim, &at)?;
            let weights = b
                .weights
                .iter()
                .map(|w| parse_rational(w))
                .collect::<Result<Vec<_>, _>>()?;
            bases.push((
                b.name.clone(),
                WeightedBasis::from_indices(&algebra, &idx, weights)?,
            ));
        }
        Ok(LoadedAlgebra { algebra, bases })
    }

    /// Spec of an algebra; bases are given as 1-based indices of standard basis vectors.
    pub fn from_algebra(alg: &LieAlgebra, bases: &[(String, Vec<usize>, Vec<Q>)]) -> Self {
        let brackets = alg
            .nonzero_brackets()
            .map(|(i, j, v)| BracketEntry {
                i: i + 1,
                j: j + 1,
                coefficients: v.coords().iter().map(|c| c.to_string()).collect(),
            })
            .collect();
        let bases = bases
            .iter()
            .map(|(name, idx, w)| BasisSpec {
                name: name.clone(),
                indices: idx.iter().map(|i| i + 1).collect(),
                weights: w.iter().map(|q| q.to_string()).collect(),
            })
            .collect();
        AlgebraSpec {
            name: alg.name().to_string(),
            dim: alg.dim(),
            labels: alg.labels().to_vec(),
            brackets,
            bases,
            metadata: BTreeMap::new(),
        }
    }

    /// Spec of a catalog entry including its canonical basis.
    pub fn from_catalog(name: &str) -> Result<Self, CliError> {
        let entry = catalog::lookup(name)?;
        Ok(Self::from_algebra(
            &entry.algebra,
            &[(
                "canonical".into(),
                entry.canonical_indices.clone(),
                entry.canonical_weights.clone(),
            )],
        ))
    }
}

/// Reads a spec file when `arg` names an existing file, otherwise resolves a catalog name.
pub fn load_algebra(arg: &str) -> Result<LoadedAlgebra, CliError> {
    let path = Path::new(arg);
    if path.is_file() {
        let text =
            std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{arg}: {e}")))?;
        return AlgebraSpec::from_toml(&text)
            .and_then(|s| s.build())
            .map_err(|e| e.context(arg));
    }
    let entry = catalog::lookup(arg)
        .map_err(|_| CliError::Parse(format!("\"{arg}\" is neither a file nor a catalog name")))?;
    let basis = entry.canonical_basis();
    Ok(LoadedAlgebra {
        algebra: entry.algebra,
        bases: vec![("canonical".into(), basis)],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const BROKEN: &str = r#"
name = "broken"
dim = 3
labels = ["a", "b", "c"]

[[bracket]]
i = 1
j = 2
coefficients = ["1", "0", "0"]

[[bracket]]
i = 1
j = 3
coefficients = ["0", "1", "0"]
"#;

    #[test]
    fn jacobi_violation_is_reported() {
        let err = AlgebraSpec::from_toml(BROKEN).unwrap().build().unwrap_err();
        assert!(err.to_string().contains("(1, 2, 3)"), "{err}");
    }

    #[test]
    fn rationals_are_exact() {
        assert_eq!(parse_rational("1/3").unwrap(), Q::new(1.into(), 3.into()));
        assert_eq!(parse_rational(" -4/6 ").unwrap().to_string(), "-2/3");
        assert!(parse_rational("0.5").is_err());
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn third_round_trips() {
        let text = r#"
name = "scaled"
dim = 3
labels = ["X", "Y", "Z"]

[[bracket]]
i = 1
j = 2
coefficients = ["0", "0", "1/3"]
"#;
        let spec = AlgebraSpec::from_toml(text).unwrap();
        let alg = spec.build().unwrap().algebra;
        assert_eq!(alg.structure_constant(0, 1, 2), Q::new(1.into(), 3.into()));
        assert_eq!(AlgebraSpec::from_toml(&spec.to_toml()).unwrap(), spec);
        assert_eq!(AlgebraSpec::from_algebra(&alg, &[]), spec);
    }

    #[test]
    fn catalog_round_trip() {
        for name in catalog::STANDARD_NAMES {
            let spec = AlgebraSpec::from_catalog(name).unwrap();
            let again = AlgebraSpec::from_toml(&spec.to_toml()).unwrap();
            assert_eq!(again, spec);
            let loaded = again.build().unwrap();
            assert_eq!(loaded.algebra, catalog::lookup(name).unwrap().algebra);
        }
    }

    #[test]
    fn malformed_files() {
        assert!(AlgebraSpec::from_toml("name = 3").is_err());
        let bad_order = BROKEN.replacen("i = 1\nj = 2", "i = 2\nj = 1", 1);
        assert!(AlgebraSpec::from_toml(&bad_order).unwrap().build().is_err());
        let short = BROKEN.replacen("[\"1\", \"0\", \"0\"]", "[\"1\"]", 1);
        assert!(AlgebraSpec::from_toml(&short).unwrap().build().is_err());
        assert!(load_algebra("no-such-algebra").is_err());
        assert_eq!(load_algebra("su2").unwrap().algebra.dim(), 3);
    }
}
