//! Transition matrix of a geometric type and the symbolic invariants derived from it.

use anosov_exact::decimal;
use anosov_exact::log::ln_enclosure;
use anosov_exact::matrix::{charpoly, is_irreducible};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::geomtype::GeometricType;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SftError {
    #[error("matrix is not irreducible")]
    NotIrreducible,
    #[error("tolerance must be positive")]
    BadTolerance,
}

/// `a[i][j]` counts the horizontal handles of rectangle `i + 1` landing in rectangle `j + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TransitionMatrix {
    pub a: Vec<Vec<u64>>,
}

impl TransitionMatrix {
    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn is_irreducible(&self) -> bool {
        is_irreducible(&self.a)
    }

    pub fn row_sums(&self) -> Vec<u64> {
        self.a.iter().map(|r| r.iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<u64> {
        (0..self.n()).map(|j| self.a.iter().map(|r| r[j]).sum()).collect()
    }
}

pub fn transition_matrix(g: &GeometricType) -> TransitionMatrix {
    let n = g.n();
    let mut a = vec![vec![0u64; n]; n];
    for i in 1..=n {
        for k in 1..=g.h(i) {
            a[i - 1][g.phi(i, k).0 - 1] += 1;
        }
    }
    TransitionMatrix { a }
}

fn mat_mul(x: &[Vec<BigUint>], y: &[Vec<BigUint>]) -> Vec<Vec<BigUint>> {
    let n = x.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(BigUint::zero(), |s, l| s + &x[i][l] * &y[l][j]))
                .collect()
        })
        .collect()
}

/// Exact `m^k` by repeated squaring.
pub fn matrix_power(m: &TransitionMatrix, k: u32) -> Vec<Vec<BigUint>> {
    let n = m.n();
    let mut acc: Vec<Vec<BigUint>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { BigUint::one() } else { BigUint::zero() }).collect()).collect();
    let mut base: Vec<Vec<BigUint>> = m.a.iter().map(|r| r.iter().map(|&x| BigUint::from(x)).collect()).collect();
    let mut e = k;
    while e > 0 {
        if e & 1 == 1 {
            acc = mat_mul(&acc, &base);
        }
        base = mat_mul(&base, &base);
        e >>= 1;
    }
    acc
}

/// Number of periodic words of period `k`, i.e. `trace(m^k)`.
pub fn periodic_word_count(m: &TransitionMatrix, k: u32) -> BigUint {
    let p = matrix_power(m, k);
    (0..m.n()).fold(BigUint::zero(), |s, i| s + &p[i][i])
}

/// A certified enclosure `[lo, hi]` of the topological entropy `log λ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entropy {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Entropy {
    /// Bounds rounded outward to `digits` decimal places.
    pub fn to_decimal(&self, digits: usize) -> (String, String) {
        (decimal::format_floor(&self.lo, digits), decimal::format_ceil(&self.hi, digits))
    }
}

/// Collatz–Wielandt bracket for the Perron root from a few exact power-iteration steps.
fn perron_bracket(m: &TransitionMatrix) -> (BigRational, BigRational) {
    let n = m.n();
    let mut x: Vec<BigInt> = vec![BigInt::one(); n];
    let apply = |x: &[BigInt]| -> Vec<BigInt> {
        (0..n).map(|i| (0..n).fold(BigInt::zero(), |s, j| s + &x[j] * m.a[i][j])).collect()
    };
    let ratios = |x: &[BigInt], y: &[BigInt]| {
        let r: Vec<BigRational> = (0..n).map(|i| BigRational::new(y[i].clone(), x[i].clone())).collect();
        let lo = r.iter().min().expect("nonempty").clone();
        let hi = r.iter().max().expect("nonempty").clone();
        (lo, hi)
    };
    // Positive vectors stay positive under an irreducible matrix after mixing with x.
    let mut best = ratios(&x, &apply(&x));
    for _ in 0..24 {
        let y = apply(&x);
        x = x.iter().zip(&y).map(|(a, b)| a + b).collect();
        let (lo, hi) = ratios(&x, &apply(&x));
        best = (best.0.max(lo), best.1.min(hi));
    }
    best
}

/// Entropy `log λ` of an irreducible matrix with an enclosure of width at most `tol`.
pub fn entropy(m: &TransitionMatrix, tol: &BigRational) -> Result<Entropy, SftError> {
    if !m.is_irreducible() {
        return Err(SftError::NotIrreducible);
    }
    if *tol <= BigRational::zero() {
        return Err(SftError::BadTolerance);
    }
    let chi = charpoly(&m.a).squarefree_part();
    let (mut lo, mut hi) = perron_bracket(m);
    let two = BigRational::from_integer(2.into());
    // λ is the largest real root of χ and lies in [lo, hi].
    let half_tol = tol / &two;
    while lo != hi && (&hi - &lo) / &lo > half_tol {
        let mid = (&lo + &hi) / &two;
        if chi.count_roots(&mid, &hi) > 0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if lo == hi {
        let (a, b) = ln_enclosure(&lo, tol);
        return Ok(Entropy { lo: a.max(BigRational::zero()), hi: b });
    }
    let quarter = &half_tol / &two;
    let (a, _) = ln_enclosure(&lo, &quarter);
    let (_, b) = ln_enclosure(&hi, &quarter);
    Ok(Entropy { lo: a.max(BigRational::zero()), hi: b })
}
