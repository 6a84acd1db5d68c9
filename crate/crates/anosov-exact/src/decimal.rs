//! Fixed-point decimal strings for rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

#[derive(Clone, Copy)]
enum Mode {
    Nearest,
    Floor,
    Ceil,
}

fn render(x: &BigRational, digits: usize, mode: Mode) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = x * BigRational::from_integer(scale.clone());
    let n = match mode {
        Mode::Floor => scaled.floor().to_integer(),
        Mode::Ceil => scaled.ceil().to_integer(),
        Mode::Nearest => scaled.round().to_integer(),
    };
    let neg = n.is_negative();
    let (int, frac) = n.abs().div_rem(&scale);
    let mut s = String::new();
    if neg && !(int.is_zero() && frac.is_zero()) {
        s.push('-');
    }
    s.push_str(&int.to_string());
    if digits > 0 {
        s.push('.');
        let f = frac.to_string();
        s.extend(std::iter::repeat_n('0', digits - f.len()));
        s.push_str(&f);
    }
    s
}

/// Nearest `digits`-place decimal, halves away from zero.
pub fn format_rounded(x: &BigRational, digits: usize) -> String {
    render(x, digits, Mode::Nearest)
}

/// Largest `digits`-place decimal not above `x`.
pub fn format_floor(x: &BigRational, digits: usize) -> String {
    render(x, digits, Mode::Floor)
}

/// Smallest `digits`-place decimal not below `x`.
pub fn format_ceil(x: &BigRational, digits: usize) -> String {
    render(x, digits, Mode::Ceil)
}
