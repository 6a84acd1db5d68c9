//! The real number field Q(λ) for a distinguished real root λ of a squarefree polynomial.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::decimal;
use crate::poly::Poly;
use crate::ExactError;

/// Bits of the isolating interval computed eagerly at construction.
const INITIAL_BITS: u32 = 96;
const REFINE_STEP: u32 = 32;

#[derive(Clone)]
struct Dyadic {
    lo: BigInt,
    hi: BigInt,
    shift: u32,
}

struct Inner {
    min_poly: Poly,
    min_int: Vec<BigInt>,
    irreducible: bool,
    /// Set when λ is rational; then every element is a plain rational.
    rational_root: Option<BigRational>,
    initial: (BigRational, BigRational),
    /// `f(hi) > 0` for the current isolating interval.
    hi_positive: bool,
    iso: RwLock<Dyadic>,
}

/// Shared handle to a number field with a fixed real embedding.
#[derive(Clone)]
pub struct AlgebraicField(Arc<Inner>);

impl fmt::Debug for AlgebraicField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (lo, hi) = self.isolating_interval();
        write!(f, "Q(λ), λ root of {} in [{lo}, {hi}]", self.0.min_poly)
    }
}

impl PartialEq for AlgebraicField {
    fn eq(&self, o: &Self) -> bool {
        Arc::ptr_eq(&self.0, &o.0)
            || (self.0.min_poly == o.0.min_poly && self.0.initial == o.0.initial)
    }
}
impl Eq for AlgebraicField {}

impl AlgebraicField {
    /// Field generated by the largest real root of `f`.
    ///
    /// `f` is reduced to its squarefree part, integer roots are split off, and an
    /// exactly verified minimal factor containing the root is kept when one is found.
    pub fn from_largest_root(f: &Poly) -> Result<Self, ExactError> {
        let f = f.squarefree_part();
        let Some(deg) = f.degree().filter(|&d| d >= 1) else {
            return Err(ExactError::NoRealRoot);
        };
        let bound = f.root_bound();
        if f.count_roots(&-bound.clone(), &bound) == 0 {
            return Err(ExactError::NoRealRoot);
        }
        let ints = f.integer_roots();
        let largest_int = ints.last().cloned();
        // Locate the largest real root as (a, b] with exactly one root.
        let (mut a, mut b) = (-bound.clone(), bound.clone());
        while f.count_roots(&a, &b) > 1 {
            let mid = (&a + &b) / BigRational::from_integer(2.into());
            if f.count_roots(&mid, &b) >= 1 {
                a = mid;
            } else {
                b = mid;
            }
        }
        if let Some(r) = largest_int {
            let r = BigRational::from_integer(r);
            if r > a && r <= b {
                return Ok(Self::rational(r));
            }
        }
        let _ = deg;
        // Strip integer-root linear factors; λ is irrational now.
        let mut g = f.clone();
        for r in &ints {
            let lin = Poly::new(vec![-BigRational::from_integer(r.clone()), BigRational::one()]);
            g = g.exact_div(&lin).expect("root gives a factor");
        }
        let (g, irreducible) = minimal_factor(&g, &a, &b);
        Ok(Self::irrational(g, a, b, irreducible))
    }

    fn rational(r: BigRational) -> Self {
        let min_poly = Poly::new(vec![-r.clone(), BigRational::one()]);
        let min_int = min_poly.primitive_int_coeffs();
        AlgebraicField(Arc::new(Inner {
            min_poly,
            min_int,
            irreducible: true,
            rational_root: Some(r.clone()),
            initial: (r.clone(), r),
            hi_positive: true,
            iso: RwLock::new(Dyadic { lo: BigInt::zero(), hi: BigInt::zero(), shift: 0 }),
        }))
    }

    fn irrational(g: Poly, a: BigRational, b: BigRational, irreducible: bool) -> Self {
        let min_poly = g.monic();
        let min_int = min_poly.primitive_int_coeffs();
        // Dyadic bracket: integer floor/ceil keeps the root, then bisect until isolated.
        let lo = a.floor().to_integer();
        let hi = b.ceil().to_integer();
        let mut d = Dyadic { lo, hi, shift: 0 };
        let count = |d: &Dyadic| {
            let den = BigRational::from_integer(BigInt::one() << d.shift);
            min_poly.count_roots(
                &(BigRational::from_integer(d.lo.clone()) / &den),
                &(BigRational::from_integer(d.hi.clone()) / &den),
            )
        };
        let root_in = |d: &Dyadic, lo: &BigInt, hi: &BigInt| {
            let den = BigRational::from_integer(BigInt::one() << d.shift);
            let x0 = BigRational::from_integer(lo.clone()) / &den;
            let x1 = BigRational::from_integer(hi.clone()) / &den;
            // λ is the root inside the original (a, b].
            let a2 = if x0 > a { x0 } else { a.clone() };
            let b2 = if x1 < b { x1 } else { b.clone() };
            a2 < b2 && min_poly.count_roots(&a2, &b2) == 1
        };
        while count(&d) != 1 || d.shift < 8 {
            let lo2 = &d.lo << 1u32;
            let hi2 = &d.hi << 1u32;
            let mid = &d.lo + &d.hi;
            let d2 = Dyadic { lo: lo2.clone(), hi: hi2.clone(), shift: d.shift + 1 };
            d = if root_in(&d2, &mid, &hi2) {
                Dyadic { lo: mid, hi: hi2, shift: d.shift + 1 }
            } else {
                Dyadic { lo: lo2, hi: mid, shift: d.shift + 1 }
            };
        }
        let hi_positive = eval_int_sign(&min_int, &d.hi, d.shift) == Ordering::Greater;
        let den = BigRational::from_integer(BigInt::one() << d.shift);
        let initial = (
            BigRational::from_integer(d.lo.clone()) / &den,
            BigRational::from_integer(d.hi.clone()) / &den,
        );
        let field = AlgebraicField(Arc::new(Inner {
            min_poly,
            min_int,
            irreducible,
            rational_root: None,
            initial,
            hi_positive,
            iso: RwLock::new(d),
        }));
        field.refine_to(INITIAL_BITS);
        field
    }

    pub fn min_poly(&self) -> &Poly {
        &self.0.min_poly
    }

    pub fn degree(&self) -> usize {
        self.0.min_poly.degree().unwrap_or(0)
    }

    /// True when the modulus is known to be irreducible, so representations are unique.
    pub fn certified_irreducible(&self) -> bool {
        self.0.irreducible
    }

    /// The current isolating interval (it only ever shrinks).
    pub fn isolating_interval(&self) -> (BigRational, BigRational) {
        if let Some(r) = &self.0.rational_root {
            return (r.clone(), r.clone());
        }
        let d = self.0.iso.read().expect("lock").clone();
        let den = BigRational::from_integer(BigInt::one() << d.shift);
        (
            BigRational::from_integer(d.lo) / &den,
            BigRational::from_integer(d.hi) / &den,
        )
    }

    /// The interval recorded when the field was built.
    pub fn initial_interval(&self) -> (BigRational, BigRational) {
        self.0.initial.clone()
    }

    fn refine_to(&self, bits: u32) {
        if self.0.rational_root.is_some() {
            return;
        }
        if self.0.iso.read().expect("lock").shift >= bits {
            return;
        }
        let mut d = self.0.iso.write().expect("lock");
        while d.shift < bits {
            let mid = &d.lo + &d.hi;
            let s = eval_int_sign(&self.0.min_int, &mid, d.shift + 1);
            let same_as_hi = (s == Ordering::Greater) == self.0.hi_positive;
            d.shift += 1;
            if same_as_hi {
                d.hi = mid;
                d.lo = &d.lo << 1u32;
            } else {
                d.lo = mid;
                d.hi = &d.hi << 1u32;
            }
        }
    }

    fn snapshot(&self) -> Dyadic {
        self.0.iso.read().expect("lock").clone()
    }

    pub fn element(&self, coeffs: Poly) -> AlgebraicReal {
        AlgebraicReal { field: self.clone(), value: coeffs.rem(&self.0.min_poly) }
    }

    pub fn from_rational(&self, r: BigRational) -> AlgebraicReal {
        self.element(Poly::constant(r))
    }

    pub fn from_int(&self, n: i64) -> AlgebraicReal {
        self.from_rational(BigRational::from_integer(n.into()))
    }

    pub fn zero(&self) -> AlgebraicReal {
        self.from_int(0)
    }

    pub fn one(&self) -> AlgebraicReal {
        self.from_int(1)
    }

    /// The generator λ itself.
    pub fn lambda(&self) -> AlgebraicReal {
        match &self.0.rational_root {
            Some(r) => self.from_rational(r.clone()),
            None => self.element(Poly::x()),
        }
    }
}

/// Sign of `Σ c_k (x/2^s)^k` at the dyadic point `x / 2^s`.
fn eval_int_sign(c: &[BigInt], x: &BigInt, s: u32) -> Ordering {
    let d = c.len().saturating_sub(1) as u32;
    let mut acc = BigInt::zero();
    for (k, ck) in c.iter().enumerate().rev() {
        acc = acc * x + (ck << (s * (d - k as u32)));
    }
    acc.cmp(&BigInt::zero())
}

/// Smallest exactly-verified factor of `f` with a root in `(a, b]`.
///
/// Candidates come from floating-point root clusters; each is accepted only after
/// exact division and an exact root count, so the float step can only cost
/// minimality, never correctness.
fn minimal_factor(f: &Poly, a: &BigRational, b: &BigRational) -> (Poly, bool) {
    let deg = f.degree().unwrap_or(0);
    let small_certified = |g: &Poly| g.degree().unwrap_or(0) <= 3 && g.integer_roots().is_empty();
    if deg <= 1 || small_certified(f) {
        return (f.clone(), true);
    }
    if deg > 20 {
        return (f.clone(), false);
    }
    let roots = match complex_roots(f) {
        Some(r) => r,
        None => return (f.clone(), false),
    };
    let approx = ((a + b) / BigRational::from_integer(2.into())).to_f64().unwrap_or(0.0);
    let li = (0..roots.len())
        .min_by(|&i, &j| {
            let di = (roots[i] - Complex64::new(approx, 0.0)).norm();
            let dj = (roots[j] - Complex64::new(approx, 0.0)).norm();
            di.partial_cmp(&dj).unwrap_or(Ordering::Equal)
        })
        .expect("nonempty");
    let others: Vec<usize> = (0..roots.len()).filter(|&i| i != li).collect();
    let mut best: Option<Poly> = None;
    'size: for size in 0..others.len() {
        for mask in 0u32..(1u32 << others.len()) {
            if mask.count_ones() as usize != size {
                continue;
            }
            let mut prod = vec![Complex64::new(1.0, 0.0)];
            let chosen = std::iter::once(li)
                .chain(others.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &i)| i));
            for i in chosen {
                let mut next = vec![Complex64::new(0.0, 0.0); prod.len() + 1];
                for (k, c) in prod.iter().enumerate() {
                    next[k + 1] += c;
                    next[k] -= c * roots[i];
                }
                prod = next;
            }
            let mut ints = Vec::with_capacity(prod.len());
            for c in &prod {
                let r = c.re.round();
                if (c.re - r).abs() > 1e-6 || c.im.abs() > 1e-6 || !r.is_finite() {
                    continue;
                }
                ints.push(BigInt::from(r as i64));
            }
            if ints.len() != prod.len() {
                continue;
            }
            let g = Poly::from_big_ints(&ints);
            if f.exact_div(&g).is_some() && g.count_roots(a, b) == 1 {
                best = Some(g);
                break 'size;
            }
        }
    }
    match best {
        Some(g) => {
            let cert = small_certified(&g);
            (g, cert)
        }
        None => (f.clone(), false),
    }
}

/// Durand–Kerner iteration; `None` when it fails to settle.
fn complex_roots(f: &Poly) -> Option<Vec<Complex64>> {
    let m = f.monic();
    let c: Vec<f64> = m.coeffs().iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect();
    if c.iter().any(|x| !x.is_finite()) {
        return None;
    }
    let n = c.len() - 1;
    let eval = |z: Complex64| c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &k| acc * z + k);
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32)).collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            if den.norm() == 0.0 {
                return None;
            }
            let step = eval(z[i]) / den;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-14 {
            return Some(z);
        }
    }
    Some(z)
}

/// An element of Q(λ): a rational polynomial in λ reduced modulo the minimal polynomial.
#[derive(Clone)]
pub struct AlgebraicReal {
    field: AlgebraicField,
    value: Poly,
}

impl PartialEq for AlgebraicReal {
    fn eq(&self, o: &Self) -> bool {
        self.value == o.value && self.field == o.field
    }
}
impl Eq for AlgebraicReal {}

impl Hash for AlgebraicReal {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.value.hash(state);
    }
}

impl fmt::Debug for AlgebraicReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ≈ {}", self.poly_string(), self.to_decimal(6))
    }
}

impl AlgebraicReal {
    pub fn field(&self) -> &AlgebraicField {
        &self.field
    }

    /// Coefficients in λ, lowest degree first, trailing zeros trimmed.
    pub fn coeffs(&self) -> &[BigRational] {
        self.value.coeffs()
    }

    pub fn as_poly(&self) -> &Poly {
        &self.value
    }

    pub fn is_zero_repr(&self) -> bool {
        self.value.is_zero()
    }

    /// The polynomial in λ, e.g. `λ - 2`.
    pub fn poly_string(&self) -> String {
        self.value.to_string().replace('x', "λ")
    }

    fn same_field(&self, o: &Self) -> Result<(), ExactError> {
        if self.field == o.field {
            Ok(())
        } else {
            Err(ExactError::FieldMismatch)
        }
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self, ExactError> {
        self.same_field(o)?;
        Ok(AlgebraicReal { field: self.field.clone(), value: self.value.add(&o.value) })
    }

    pub fn checked_sub(&self, o: &Self) -> Result<Self, ExactError> {
        self.same_field(o)?;
        Ok(AlgebraicReal { field: self.field.clone(), value: self.value.sub(&o.value) })
    }

    pub fn checked_mul(&self, o: &Self) -> Result<Self, ExactError> {
        self.same_field(o)?;
        Ok(self.field.element(self.value.mul(&o.value)))
    }

    pub fn checked_div(&self, o: &Self) -> Result<Self, ExactError> {
        self.same_field(o)?;
        let inv = o.inverse()?;
        Ok(self.field.element(self.value.mul(&inv.value)))
    }

    pub fn inverse(&self) -> Result<Self, ExactError> {
        if self.sign() == Ordering::Equal {
            return Err(ExactError::DivisionByZero);
        }
        let m = &self.field.0.min_poly;
        let (g, s) = self.value.gcd_inverse_mod(m);
        if g.degree() == Some(0) {
            return Ok(self.field.element(s));
        }
        // The modulus splits; λ is a root of m/g because the value is nonzero.
        let h = m.exact_div(&g).expect("gcd divides");
        let (g2, s2) = self.value.gcd_inverse_mod(&h);
        debug_assert_eq!(g2.degree(), Some(0));
        Ok(self.field.element(s2))
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        AlgebraicReal { field: self.field.clone(), value: self.value.scale(r) }
    }

    /// Integer powers; negative exponents need a nonzero base.
    pub fn pow(&self, e: i32) -> Result<Self, ExactError> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut acc = self.field.one();
        let mut b = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &b;
            }
            b = &b * &b;
            k >>= 1;
        }
        Ok(acc)
    }

    /// Exact value test: structural for certified fields, a gcd root check otherwise.
    fn is_exact_zero(&self) -> bool {
        if self.value.is_zero() {
            return true;
        }
        if self.field.0.irreducible || self.field.0.rational_root.is_some() {
            return false;
        }
        let g = self.value.gcd(&self.field.0.min_poly);
        if g.degree().unwrap_or(0) == 0 {
            return false;
        }
        let (lo, hi) = self.field.isolating_interval();
        g.count_roots(&lo, &hi) >= 1
    }

    /// Integer numerators over a common denominator (positive).
    fn integer_form(&self) -> (Vec<BigInt>, BigInt) {
        let den = self
            .value
            .coeffs()
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let nums = self
            .value
            .coeffs()
            .iter()
            .map(|c| (c * BigRational::from_integer(den.clone())).to_integer())
            .collect();
        (nums, den)
    }

    /// Interval enclosure `[lo, hi] · 2^(-s(d-1)) / den` at the given isolation.
    fn enclose(nums: &[BigInt], iso: &Dyadic) -> (BigInt, BigInt) {
        let d = nums.len() as u32;
        let s = iso.shift;
        let mut lo = BigInt::zero();
        let mut hi = BigInt::zero();
        for (k, ck) in nums.iter().enumerate().rev() {
            let add = ck << (s * (d - 1 - k as u32));
            if k as u32 == d - 1 {
                lo = add.clone();
                hi = add;
                continue;
            }
            let p = [&lo * &iso.lo, &lo * &iso.hi, &hi * &iso.lo, &hi * &iso.hi];
            let mn = p.iter().min().expect("four").clone();
            let mx = p.iter().max().expect("four").clone();
            lo = mn + &add;
            hi = mx + add;
        }
        (lo, hi)
    }

    pub fn sign(&self) -> Ordering {
        if let Some(c) = self.value.coeffs().first().filter(|_| self.value.degree() == Some(0)) {
            return c.cmp(&BigRational::zero());
        }
        if self.is_exact_zero() {
            return Ordering::Equal;
        }
        if let Some(r) = &self.field.0.rational_root {
            return self.value.eval(r).cmp(&BigRational::zero());
        }
        let (nums, _) = self.integer_form();
        let mut want = self.field.snapshot().shift;
        loop {
            let iso = self.field.snapshot();
            let (lo, hi) = Self::enclose(&nums, &iso);
            if lo.is_positive() {
                return Ordering::Greater;
            }
            if hi.is_negative() {
                return Ordering::Less;
            }
            want = want.max(iso.shift) + REFINE_STEP;
            self.field.refine_to(want);
        }
    }

    /// Exact comparison; panics on elements of different fields.
    pub fn cmp_exact(&self, o: &Self) -> Ordering {
        self.try_compare(o).expect("comparison across fields")
    }

    pub fn try_compare(&self, o: &Self) -> Result<Ordering, ExactError> {
        Ok(self.checked_sub(o)?.sign())
    }

    pub fn is_positive(&self) -> bool {
        self.sign() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.sign() == Ordering::Less
    }

    pub fn value_is_zero(&self) -> bool {
        self.sign() == Ordering::Equal
    }

    /// Rational enclosure of width at most `width`.
    pub fn enclosure(&self, width: &BigRational) -> (BigRational, BigRational) {
        if let Some(r) = &self.field.0.rational_root {
            let v = self.value.eval(r);
            return (v.clone(), v);
        }
        if self.value.degree().unwrap_or(0) == 0 {
            let v = self.value.coeff(0);
            return (v.clone(), v);
        }
        let (nums, den) = self.integer_form();
        let mut want = self.field.snapshot().shift;
        loop {
            let iso = self.field.snapshot();
            let (lo, hi) = Self::enclose(&nums, &iso);
            let d = nums.len() as u32;
            let scale = BigRational::from_integer(den.clone() << (iso.shift * (d - 1)));
            let lo = BigRational::from_integer(lo) / &scale;
            let hi = BigRational::from_integer(hi) / &scale;
            if &(&hi - &lo) <= width {
                return (lo, hi);
            }
            want = want.max(iso.shift) + REFINE_STEP;
            self.field.refine_to(want);
        }
    }

    /// Decimal rendering correct to within one unit in the last digit.
    pub fn to_decimal(&self, digits: usize) -> String {
        let w = BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(10), digits + 1));
        let (lo, hi) = self.enclosure(&w);
        let mid = (lo + hi) / BigRational::from_integer(2.into());
        decimal::format_rounded(&mid, digits)
    }

    /// Display-only floating approximation.
    pub fn to_f64(&self) -> f64 {
        let w = BigRational::new(BigInt::one(), BigInt::one() << 60);
        let (lo, hi) = self.enclosure(&w);
        ((lo + hi) / BigRational::from_integer(2.into())).to_f64().unwrap_or(f64::NAN)
    }

    pub fn to_repr(&self) -> ExactRepr {
        ExactRepr {
            coeffs: self
                .value
                .coeffs()
                .iter()
                .map(|c| (c.numer().to_string(), c.denom().to_string()))
                .collect(),
        }
    }

    pub fn from_repr(field: &AlgebraicField, r: &ExactRepr) -> Result<Self, ExactError> {
        let mut cs = Vec::with_capacity(r.coeffs.len());
        for (n, d) in &r.coeffs {
            let n: BigInt = n.parse().map_err(|_| ExactError::Parse(n.clone()))?;
            let d: BigInt = d.parse().map_err(|_| ExactError::Parse(d.clone()))?;
            if d.is_zero() {
                return Err(ExactError::DivisionByZero);
            }
            cs.push(BigRational::new(n, d));
        }
        Ok(field.element(Poly::new(cs)))
    }
}

/// Exact serialized form: rational coefficients of the polynomial in λ as
/// (numerator, denominator) decimal strings, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactRepr {
    pub coeffs: Vec<(String, String)>,
}

macro_rules! binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl std::ops::$tr<&AlgebraicReal> for &AlgebraicReal {
            type Output = AlgebraicReal;
            fn $m(self, o: &AlgebraicReal) -> AlgebraicReal {
                self.$checked(o).expect("arithmetic across fields or by zero")
            }
        }
        impl std::ops::$tr<AlgebraicReal> for AlgebraicReal {
            type Output = AlgebraicReal;
            fn $m(self, o: AlgebraicReal) -> AlgebraicReal {
                (&self).$m(&o)
            }
        }
        impl std::ops::$tr<&AlgebraicReal> for AlgebraicReal {
            type Output = AlgebraicReal;
            fn $m(self, o: &AlgebraicReal) -> AlgebraicReal {
                (&self).$m(o)
            }
        }
    };
}
binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);
binop!(Div, div, checked_div);

impl std::ops::Neg for &AlgebraicReal {
    type Output = AlgebraicReal;
    fn neg(self) -> AlgebraicReal {
        AlgebraicReal { field: self.field.clone(), value: self.value.neg() }
    }
}

impl std::ops::Neg for AlgebraicReal {
    type Output = AlgebraicReal;
    fn neg(self) -> AlgebraicReal {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn golden() -> AlgebraicField {
        AlgebraicField::from_largest_root(&Poly::from_ints(&[1, -3, 1])).unwrap()
    }

    #[test]
    fn golden_field_isolation() {
        let f = golden();
        assert_eq!(f.min_poly(), &Poly::from_ints(&[1, -3, 1]));
        let (lo, hi) = f.initial_interval();
        let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        assert!(lo >= r(5, 2) && hi <= r(3, 1));
        assert!(f.certified_irreducible());
    }

    #[test]
    fn relation_and_signs() {
        let f = golden();
        let l = f.lambda();
        assert_eq!((&l - &f.one()).sign(), Ordering::Greater);
        let l2 = &l * &l;
        let rhs = &l.scale(&BigRational::from_integer(3.into())) - &f.one();
        assert_eq!(l2.cmp_exact(&rhs), Ordering::Equal);
        assert_eq!(f.zero().sign(), Ordering::Equal);
        // λ - 2 ≈ 0.618 and 3 - λ ≈ 0.382 = 1/λ
        assert_eq!((&f.from_int(3) - &l), l.inverse().unwrap());
    }

    #[test]
    fn tiny_differences_resolve() {
        let f = golden();
        let l = f.lambda();
        // λ^40 is an integer combination; compare against its neighbours.
        let p = l.pow(40).unwrap();
        let lo = p.enclosure(&BigRational::new(1.into(), 1000.into())).0;
        let shifted = &p - &f.from_rational(lo);
        assert_eq!(shifted.sign(), Ordering::Greater);
        let q = l.pow(-30).unwrap();
        assert_eq!(q.sign(), Ordering::Greater);
    }

    #[test]
    fn rational_root_fields() {
        let f = AlgebraicField::from_largest_root(&Poly::from_ints(&[-1, 0, 1])).unwrap();
        assert_eq!(f.min_poly(), &Poly::from_ints(&[-1, 1]));
        assert_eq!(f.lambda(), f.one());
        let f1 = AlgebraicField::from_largest_root(&Poly::from_ints(&[-1, 1])).unwrap();
        assert_eq!(f1.lambda().sign(), Ordering::Greater);
    }

    #[test]
    fn reducible_input_is_split() {
        // (x^2 - 3x + 1)(x^2 - x - 1): largest root is the golden square.
        let p = Poly::from_ints(&[1, -3, 1]).mul(&Poly::from_ints(&[-1, -1, 1]));
        let f = AlgebraicField::from_largest_root(&p).unwrap();
        assert_eq!(f.min_poly(), &Poly::from_ints(&[1, -3, 1]));
    }

    #[test]
    fn repr_round_trip() {
        let f = golden();
        let x = &f.lambda().scale(&BigRational::new(3.into(), 7.into())) - &f.from_int(2);
        let r = x.to_repr();
        assert_eq!(AlgebraicReal::from_repr(&f, &r).unwrap(), x);
    }

    #[test]
    fn decimal_rendering() {
        let f = golden();
        assert_eq!(f.lambda().to_decimal(10), "2.6180339887");
    }
}
