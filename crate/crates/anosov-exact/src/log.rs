//! Certified natural logarithms of positive rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Enclosure of `2·atanh(t)` for `0 ≤ t < 1` with width at most `width`.
fn two_atanh(t: &BigRational, width: &BigRational) -> (BigRational, BigRational) {
    if t.is_zero() {
        return (BigRational::zero(), BigRational::zero());
    }
    let t2 = t * t;
    let one_minus = BigRational::one() - &t2;
    let mut sum = BigRational::zero();
    let mut pow = t.clone();
    let mut j: i64 = 0;
    loop {
        sum += &pow / BigRational::from_integer((2 * j + 1).into());
        pow *= &t2;
        j += 1;
        // Remaining terms are bounded by a geometric series.
        let tail = &pow / (BigRational::from_integer((2 * j + 1).into()) * &one_minus);
        let two = rat(2, 1);
        if &tail * &two <= *width {
            return (&sum * &two, (sum + tail) * two);
        }
    }
}

/// `[lo, hi]` containing `ln x`, with `hi - lo ≤ width`.
///
/// Panics unless `x > 0` and `width > 0`.
pub fn ln_enclosure(x: &BigRational, width: &BigRational) -> (BigRational, BigRational) {
    assert!(x.is_positive() && width.is_positive(), "ln needs positive input and width");
    // x = 2^k · y with 1 ≤ y < 2
    let mut y = x.clone();
    let mut k: i64 = 0;
    let two = rat(2, 1);
    while y >= two {
        y /= &two;
        k += 1;
    }
    while y < BigRational::one() {
        y *= &two;
        k -= 1;
    }
    let t = (&y - BigRational::one()) / (&y + BigRational::one());
    let half = width / rat(2, 1);
    let (ylo, yhi) = two_atanh(&t, &half);
    if k == 0 {
        return (ylo, yhi);
    }
    let kk = BigRational::from_integer(BigInt::from(k));
    let (l2lo, l2hi) = two_atanh(&rat(1, 3), &(&half / kk.abs()));
    if k > 0 {
        (ylo + &kk * l2lo, yhi + &kk * l2hi)
    } else {
        (ylo + &kk * l2hi, yhi + &kk * l2lo)
    }
}
