//! Perron root field and positive eigenvectors of an irreducible nonnegative matrix.

use std::cmp::Ordering;

use crate::field::{AlgebraicField, AlgebraicReal};
use crate::matrix::{charpoly, is_irreducible};
use crate::ExactError;

/// Exact Perron eigendata: `ξᵀA = λξᵀ`, `Aη = λη`, both normalized to a first entry of 1.
#[derive(Clone, Debug)]
pub struct PerronData {
    pub lambda: AlgebraicReal,
    pub xi: Vec<AlgebraicReal>,
    pub eta: Vec<AlgebraicReal>,
}

/// The field generated by the Perron root, which is the largest real root of the
/// characteristic polynomial.
pub fn build_field(m: &[Vec<u64>]) -> Result<AlgebraicField, ExactError> {
    if !is_irreducible(m) {
        return Err(ExactError::NotIrreducible);
    }
    AlgebraicField::from_largest_root(&charpoly(m))
}

pub fn perron_data(m: &[Vec<u64>], f: &AlgebraicField) -> Result<PerronData, ExactError> {
    if !is_irreducible(m) {
        return Err(ExactError::NotIrreducible);
    }
    let n = m.len();
    let lambda = f.lambda();
    let shifted = |i: usize, j: usize| {
        let a = f.from_int(m[i][j] as i64);
        if i == j {
            &a - &lambda
        } else {
            a
        }
    };
    let right: Vec<Vec<AlgebraicReal>> = (0..n).map(|i| (0..n).map(|j| shifted(i, j)).collect()).collect();
    let left: Vec<Vec<AlgebraicReal>> = (0..n).map(|i| (0..n).map(|j| shifted(j, i)).collect()).collect();
    let eta = positive_kernel_vector(right, f)?;
    let xi = positive_kernel_vector(left, f)?;
    Ok(PerronData { lambda, xi, eta })
}

/// Gauss–Jordan elimination; the kernel must be a line, returned with first entry 1.
fn positive_kernel_vector(
    mut a: Vec<Vec<AlgebraicReal>>,
    f: &AlgebraicField,
) -> Result<Vec<AlgebraicReal>, ExactError> {
    let n = a.len();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(p) = (row..n).find(|&r| !a[r][col].value_is_zero()) else {
            continue;
        };
        a.swap(row, p);
        let inv = a[row][col].inverse()?;
        for x in a[row].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r != row && !a[r][col].value_is_zero() {
                let factor = a[r][col].clone();
                let pivot_row = a[row].clone();
                for (x, y) in a[r].iter_mut().zip(&pivot_row) {
                    *x = &*x - &(y * &factor);
                }
            }
        }
        pivots.push((row, col));
        row += 1;
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.iter().any(|&(_, pc)| pc == *c)).collect();
    if free.len() != 1 {
        return Err(ExactError::DegenerateKernel(free.len()));
    }
    let fc = free[0];
    let mut v = vec![f.zero(); n];
    v[fc] = f.one();
    for &(r, c) in &pivots {
        v[c] = -&a[r][fc];
    }
    let first = v[0].clone();
    let inv = first.inverse()?;
    let v: Vec<AlgebraicReal> = v.iter().map(|x| x * &inv).collect();
    for (i, x) in v.iter().enumerate() {
        if x.sign() != Ordering::Greater {
            return Err(ExactError::NotPositive(i));
        }
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Poly;

    #[test]
    fn cat_matrix_eigendata() {
        let m = vec![vec![2, 1], vec![1, 1]];
        let f = build_field(&m).unwrap();
        assert_eq!(f.min_poly(), &Poly::from_ints(&[1, -3, 1]));
        let p = perron_data(&m, &f).unwrap();
        let expect = &p.lambda - &f.from_int(2);
        assert_eq!(p.eta, vec![f.one(), expect.clone()]);
        assert_eq!(p.xi, vec![f.one(), expect]);
    }

    #[test]
    fn lambda_one_cases() {
        for m in [vec![vec![1]], vec![vec![0, 1], vec![1, 0]]] {
            let f = build_field(&m).unwrap();
            assert_eq!(f.min_poly(), &Poly::from_ints(&[-1, 1]));
            let p = perron_data(&m, &f).unwrap();
            assert!(p.eta.iter().chain(&p.xi).all(|x| *x == f.one()));
        }
    }

    #[test]
    fn reducible_refused() {
        assert_eq!(build_field(&[vec![1, 1], vec![0, 1]]).unwrap_err(), ExactError::NotIrreducible);
    }
}
