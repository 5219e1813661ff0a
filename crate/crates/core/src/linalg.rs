//! Exact row reduction over the rationals.

use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Q = BigRational;

/// Brings `rows` into reduced row-echelon form in place, dropping zero rows.
/// Returns the pivot column of every remaining row.
pub fn rref(rows: &mut Vec<Vec<Q>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = Q::one() / &rows[r][c];
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Basis of the right null space of the `nrows x ncols` matrix `m`.
pub fn kernel(m: &[Vec<Q>], ncols: usize) -> Vec<Vec<Q>> {
    let mut rows: Vec<Vec<Q>> = m.to_vec();
    let pivots = rref(&mut rows);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); ncols];
            v[f] = Q::one();
            for (row, &p) in rows.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// Solves `sum_i x_i * basis[i] = target` for `x`, if a solution exists.
/// The basis vectors must be linearly independent for the solution to be unique.
pub fn solve_in_basis(basis: &[Vec<Q>], target: &[Q]) -> Option<Vec<Q>> {
    let n = basis.len();
    let d = target.len();
    // Augmented system: columns are basis vectors, last column the target.
    let mut rows: Vec<Vec<Q>> = (0..d)
        .map(|k| {
            let mut row: Vec<Q> = basis.iter().map(|b| b[k].clone()).collect();
            row.push(target[k].clone());
            row
        })
        .collect();
    let pivots = rref(&mut rows);
    if pivots.contains(&n) {
        return None;
    }
    let mut x = vec![Q::zero(); n];
    for (row, &p) in rows.iter().zip(&pivots) {
        x[p] = row[n].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Q {
        Q::from_integer(n.into())
    }

    #[test]
    fn rref_of_dependent_rows() {
        let mut rows = vec![vec![q(1), q(2)], vec![q(2), q(4)], vec![q(0), q(1)]];
        let piv = rref(&mut rows);
        assert_eq!(piv, vec![0, 1]);
        assert_eq!(rows, vec![vec![q(1), q(0)], vec![q(0), q(1)]]);
    }

    #[test]
    fn kernel_of_rank_one() {
        let m = vec![vec![q(1), q(1), q(0)]];
        let k = kernel(&m, 3);
        assert_eq!(k.len(), 2);
        for v in k {
            assert!((&v[0] + &v[1]).is_zero());
        }
    }

    #[test]
    fn solve_inconsistent() {
        let basis = vec![vec![q(1), q(0), q(0)]];
        assert!(solve_in_basis(&basis, &[q(0), q(1), q(0)]).is_none());
        assert_eq!(
            solve_in_basis(&basis, &[q(3), q(0), q(0)]),
            Some(vec![q(3)])
        );
    }
}
