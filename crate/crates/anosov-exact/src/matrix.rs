//! Small nonnegative integer matrices: characteristic polynomial and irreducibility.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::poly::Poly;

/// Strong connectivity of the directed graph with an edge `i -> j` whenever `m[i][j] > 0`.
pub fn is_irreducible(m: &[Vec<u64>]) -> bool {
    let n = m.len();
    if n == 0 || (n == 1 && m[0][0] == 0) {
        return false;
    }
    let reach = |forward: bool| {
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for j in 0..n {
                let e = if forward { m[i][j] } else { m[j][i] };
                if e > 0 && !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    };
    reach(true) && reach(false)
}

/// `det(xI - m)` by the Faddeev–LeVerrier recurrence.
pub fn charpoly(m: &[Vec<u64>]) -> Poly {
    let n = m.len();
    let a: Vec<Vec<BigRational>> = m
        .iter()
        .map(|row| row.iter().map(|&v| BigRational::from_integer(BigInt::from(v))).collect())
        .collect();
    // c[k] is the coefficient of x^(n-k).
    let mut c = vec![BigRational::zero(); n + 1];
    c[0] = BigRational::one();
    let mut mk = vec![vec![BigRational::zero(); n]; n];
    for k in 1..=n {
        // mk <- a * mk + c[k-1] I
        let mut next = vec![vec![BigRational::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = BigRational::zero();
                for l in 0..n {
                    if !a[i][l].is_zero() && !mk[l][j].is_zero() {
                        s += &a[i][l] * &mk[l][j];
                    }
                }
                if i == j {
                    s += &c[k - 1];
                }
                next[i][j] = s;
            }
        }
        mk = next;
        let mut tr = BigRational::zero();
        for i in 0..n {
            for l in 0..n {
                if !a[i][l].is_zero() && !mk[l][i].is_zero() {
                    tr += &a[i][l] * &mk[l][i];
                }
            }
        }
        c[k] = -tr / BigRational::from_integer(BigInt::from(k));
    }
    Poly::new(c.into_iter().rev().collect())
}
