//! Geometric types: the finite combinatorial data of a Markov partition.
//!
//! Rectangles and handle positions are 1-based throughout. Horizontal handles
//! `H_i^k` of rectangle `i` are ordered bottom to top, vertical handles `V_i^l`
//! left to right.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum HandleKind {
    Horizontal,
    Vertical,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SubrectHandle {
    pub kind: HandleKind,
    pub rect: usize,
    pub pos: usize,
}

impl fmt::Display for SubrectHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.kind {
            HandleKind::Horizontal => 'H',
            HandleKind::Vertical => 'V',
        };
        write!(f, "{k}_{}^{}", self.rect, self.pos)
    }
}

/// Reasons a candidate type is rejected, each carrying where the problem sits.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ValidationError {
    #[error("empty rectangle list")]
    EmptyRectangleList,
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("non-positive count: {0}")]
    NonPositiveCount(String),
    #[error("sum of h is {h} but sum of v is {v}")]
    SumMismatch { h: u64, v: u64 },
    #[error("phi is not a bijection: {0}")]
    PhiNotBijective(String),
    #[error("sign map incomplete: {0}")]
    SignMapIncomplete(String),
}

/// The interchange form, accepted before any validation.
///
/// `phi` entries `[i, j, k, l]` mean `φ(H_i^j) = V_k^l`; `u` entries `[i, j, s]` mean `u(H_i^j) = s`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawType {
    pub n: i64,
    pub h: Vec<i64>,
    pub v: Vec<i64>,
    pub phi: Vec<[i64; 4]>,
    pub u: Vec<[i64; 3]>,
}

/// A validated geometric type.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "RawType", try_from = "RawType")]
pub struct GeometricType {
    h: Vec<usize>,
    v: Vec<usize>,
    /// `phi[i-1][k-1] = (j, l)`.
    phi: Vec<Vec<(usize, usize)>>,
    u: Vec<Vec<i8>>,
    phi_inv: Vec<Vec<(usize, usize)>>,
}

impl From<GeometricType> for RawType {
    fn from(g: GeometricType) -> RawType {
        g.to_raw()
    }
}

impl TryFrom<RawType> for GeometricType {
    type Error = ValidationError;
    fn try_from(r: RawType) -> Result<Self, ValidationError> {
        validate(&r)
    }
}

fn count(x: i64, name: &str, i: usize) -> Result<usize, ValidationError> {
    if x <= 0 {
        Err(ValidationError::NonPositiveCount(format!("{name}[{i}] = {x}")))
    } else {
        Ok(x as usize)
    }
}

/// Check a raw candidate and return the validated type, or the first violated invariant.
pub fn validate(r: &RawType) -> Result<GeometricType, ValidationError> {
    use ValidationError::*;
    if r.n <= 0 || r.h.is_empty() || r.v.is_empty() {
        return Err(EmptyRectangleList);
    }
    let n = r.n as usize;
    if r.h.len() != n || r.v.len() != n {
        return Err(IndexOutOfRange(format!(
            "n = {n} but h has {} and v has {} entries",
            r.h.len(),
            r.v.len()
        )));
    }
    let h: Vec<usize> = r.h.iter().enumerate().map(|(i, &x)| count(x, "h", i + 1)).try_collect()?;
    let v: Vec<usize> = r.v.iter().enumerate().map(|(i, &x)| count(x, "v", i + 1)).try_collect()?;
    let (sh, sv) = (h.iter().sum::<usize>() as u64, v.iter().sum::<usize>() as u64);
    if sh != sv {
        return Err(SumMismatch { h: sh, v: sv });
    }
    let in_range = |i: i64, k: i64, counts: &[usize]| {
        i >= 1 && (i as usize) <= n && k >= 1 && (k as usize) <= counts[i as usize - 1]
    };
    let mut phi: Vec<Vec<Option<(usize, usize)>>> = h.iter().map(|&c| vec![None; c]).collect();
    let mut hit: Vec<Vec<bool>> = v.iter().map(|&c| vec![false; c]).collect();
    for (e, &[i, k, j, l]) in r.phi.iter().enumerate() {
        if !in_range(i, k, &h) {
            return Err(IndexOutOfRange(format!("phi entry {}: H_{i}^{k} does not exist", e + 1)));
        }
        if !in_range(j, l, &v) {
            return Err(IndexOutOfRange(format!("phi entry {}: V_{j}^{l} does not exist", e + 1)));
        }
        let slot = &mut phi[i as usize - 1][k as usize - 1];
        if slot.is_some() {
            return Err(PhiNotBijective(format!("H_{i}^{k} is assigned twice")));
        }
        let tgt = &mut hit[j as usize - 1][l as usize - 1];
        if *tgt {
            return Err(PhiNotBijective(format!("V_{j}^{l} is hit twice")));
        }
        *tgt = true;
        *slot = Some((j as usize, l as usize));
    }
    for (i, row) in phi.iter().enumerate() {
        if let Some(k) = row.iter().position(|x| x.is_none()) {
            return Err(PhiNotBijective(format!("H_{}^{} has no image", i + 1, k + 1)));
        }
    }
    let mut u: Vec<Vec<Option<i8>>> = h.iter().map(|&c| vec![None; c]).collect();
    for (e, &[i, k, s]) in r.u.iter().enumerate() {
        if !in_range(i, k, &h) {
            return Err(IndexOutOfRange(format!("u entry {}: H_{i}^{k} does not exist", e + 1)));
        }
        if s != 1 && s != -1 {
            return Err(SignMapIncomplete(format!("u(H_{i}^{k}) = {s} is not ±1")));
        }
        let slot = &mut u[i as usize - 1][k as usize - 1];
        if slot.is_some() {
            return Err(SignMapIncomplete(format!("u(H_{i}^{k}) is given twice")));
        }
        *slot = Some(s as i8);
    }
    for (i, row) in u.iter().enumerate() {
        if let Some(k) = row.iter().position(|x| x.is_none()) {
            return Err(SignMapIncomplete(format!("u(H_{}^{}) is missing", i + 1, k + 1)));
        }
    }
    let phi = phi.into_iter().map(|r| r.into_iter().flatten().collect()).collect();
    let u = u.into_iter().map(|r| r.into_iter().flatten().collect()).collect();
    Ok(GeometricType::from_parts(h, v, phi, u))
}

impl GeometricType {
    /// Assemble from already consistent parts; panics if φ is not a bijection.
    pub fn from_parts(h: Vec<usize>, v: Vec<usize>, phi: Vec<Vec<(usize, usize)>>, u: Vec<Vec<i8>>) -> Self {
        let mut inv: Vec<Vec<Option<(usize, usize)>>> = v.iter().map(|&c| vec![None; c]).collect();
        for (i, row) in phi.iter().enumerate() {
            for (k, &(j, l)) in row.iter().enumerate() {
                let slot = &mut inv[j - 1][l - 1];
                assert!(slot.is_none(), "phi not injective");
                *slot = Some((i + 1, k + 1));
            }
        }
        let phi_inv = inv
            .into_iter()
            .map(|r| r.into_iter().map(|x| x.expect("phi not surjective")).collect())
            .collect();
        GeometricType { h, v, phi, u, phi_inv }
    }

    pub fn n(&self) -> usize {
        self.h.len()
    }

    /// Number of horizontal handles of rectangle `i`.
    pub fn h(&self, i: usize) -> usize {
        self.h[i - 1]
    }

    pub fn v(&self, i: usize) -> usize {
        self.v[i - 1]
    }

    pub fn hs(&self) -> &[usize] {
        &self.h
    }

    pub fn vs(&self) -> &[usize] {
        &self.v
    }

    /// `φ(H_i^k) = V_j^l` as `(j, l)`.
    pub fn phi(&self, i: usize, k: usize) -> (usize, usize) {
        self.phi[i - 1][k - 1]
    }

    /// The horizontal handle mapped onto `V_j^l`.
    pub fn phi_inv(&self, j: usize, l: usize) -> (usize, usize) {
        self.phi_inv[j - 1][l - 1]
    }

    pub fn u(&self, i: usize, k: usize) -> i8 {
        self.u[i - 1][k - 1]
    }

    pub fn is_orientation_positive(&self) -> bool {
        self.u.iter().flatten().all(|&s| s == 1)
    }

    pub fn handle_count(&self) -> usize {
        self.h.iter().sum()
    }

    pub fn to_raw(&self) -> RawType {
        let mut phi = Vec::new();
        let mut u = Vec::new();
        for i in 1..=self.n() {
            for k in 1..=self.h(i) {
                let (j, l) = self.phi(i, k);
                phi.push([i as i64, k as i64, j as i64, l as i64]);
                u.push([i as i64, k as i64, self.u(i, k) as i64]);
            }
        }
        RawType {
            n: self.n() as i64,
            h: self.h.iter().map(|&x| x as i64).collect(),
            v: self.v.iter().map(|&x| x as i64).collect(),
            phi,
            u,
        }
    }

    /// Reverse the left-to-right order of every rectangle's vertical handles.
    pub fn flip_stable_orientation(&self) -> Self {
        let n = self.n();
        EquivalenceWitness { sigma: (1..=n).collect(), eps: vec![1; n], eps_prime: vec![-1; n] }.apply(self)
    }

    /// Reverse the bottom-to-top order of every rectangle's horizontal handles.
    pub fn flip_unstable_orientation(&self) -> Self {
        let n = self.n();
        EquivalenceWitness { sigma: (1..=n).collect(), eps: vec![-1; n], eps_prime: vec![1; n] }.apply(self)
    }

    /// Reverse both orders inside rectangle `i` only.
    pub fn flip_rectangle(&self, i: usize) -> Result<Self, ValidationError> {
        let n = self.n();
        if i == 0 || i > n {
            return Err(ValidationError::IndexOutOfRange(format!("rectangle {i} of {n}")));
        }
        let mut eps = vec![1; n];
        eps[i - 1] = -1;
        Ok(EquivalenceWitness { sigma: (1..=n).collect(), eps: eps.clone(), eps_prime: eps }.apply(self))
    }

    /// Rename rectangle `i` to `sigma[i-1]`.
    pub fn relabel(&self, sigma: &[usize]) -> Result<Self, ValidationError> {
        let n = self.n();
        let ok = sigma.len() == n && sigma.iter().copied().sorted().eq(1..=n);
        if !ok {
            return Err(ValidationError::IndexOutOfRange(format!("{sigma:?} is not a permutation of 1..{n}")));
        }
        Ok(EquivalenceWitness { sigma: sigma.to_vec(), eps: vec![1; n], eps_prime: vec![1; n] }.apply(self))
    }
}

/// Relabeling plus per-rectangle orientation signs.
///
/// Horizontal handles of rectangle `i` go to rectangle `sigma(i)`, keeping their order
/// when `eps_i = +1` and reversing it otherwise; vertical handles likewise with `eps'`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EquivalenceWitness {
    pub sigma: Vec<usize>,
    pub eps: Vec<i8>,
    pub eps_prime: Vec<i8>,
}

impl EquivalenceWitness {
    pub fn identity(n: usize) -> Self {
        EquivalenceWitness { sigma: (1..=n).collect(), eps: vec![1; n], eps_prime: vec![1; n] }
    }

    pub fn is_positive(&self) -> bool {
        self.eps.iter().chain(&self.eps_prime).all(|&e| e == 1)
    }

    /// Image of a horizontal handle of `g`.
    pub fn map_h(&self, g: &GeometricType, i: usize, k: usize) -> (usize, usize) {
        let kk = if self.eps[i - 1] > 0 { k } else { g.h(i) + 1 - k };
        (self.sigma[i - 1], kk)
    }

    /// Image of a vertical handle of `g`.
    pub fn map_v(&self, g: &GeometricType, j: usize, l: usize) -> (usize, usize) {
        let ll = if self.eps_prime[j - 1] > 0 { l } else { g.v(j) + 1 - l };
        (self.sigma[j - 1], ll)
    }

    /// The induced bijection on all handles of `g`.
    pub fn handle_map(&self, g: &GeometricType) -> Vec<(SubrectHandle, SubrectHandle)> {
        let mut out = Vec::with_capacity(2 * g.handle_count());
        for i in 1..=g.n() {
            for k in 1..=g.h(i) {
                let (a, b) = self.map_h(g, i, k);
                out.push((
                    SubrectHandle { kind: HandleKind::Horizontal, rect: i, pos: k },
                    SubrectHandle { kind: HandleKind::Horizontal, rect: a, pos: b },
                ));
            }
            for l in 1..=g.v(i) {
                let (a, b) = self.map_v(g, i, l);
                out.push((
                    SubrectHandle { kind: HandleKind::Vertical, rect: i, pos: l },
                    SubrectHandle { kind: HandleKind::Vertical, rect: a, pos: b },
                ));
            }
        }
        out
    }

    /// The unique type `g'` for which this witness is an equivalence `g → g'`.
    pub fn apply(&self, g: &GeometricType) -> GeometricType {
        let n = g.n();
        let mut h = vec![0; n];
        let mut v = vec![0; n];
        for i in 1..=n {
            h[self.sigma[i - 1] - 1] = g.h(i);
            v[self.sigma[i - 1] - 1] = g.v(i);
        }
        let mut phi: Vec<Vec<(usize, usize)>> = h.iter().map(|&c| vec![(0, 0); c]).collect();
        let mut u: Vec<Vec<i8>> = h.iter().map(|&c| vec![0; c]).collect();
        for i in 1..=n {
            for k in 1..=g.h(i) {
                let (j, l) = g.phi(i, k);
                let (a, b) = self.map_h(g, i, k);
                phi[a - 1][b - 1] = self.map_v(g, j, l);
                u[a - 1][b - 1] = self.eps[i - 1] * self.eps[j - 1] * g.u(i, k);
            }
        }
        GeometricType::from_parts(h, v, phi, u)
    }

    pub fn inverse(&self) -> Self {
        let n = self.sigma.len();
        let mut sigma = vec![0; n];
        let mut eps = vec![0; n];
        let mut eps_prime = vec![0; n];
        for i in 0..n {
            let t = self.sigma[i] - 1;
            sigma[t] = i + 1;
            eps[t] = self.eps[i];
            eps_prime[t] = self.eps_prime[i];
        }
        EquivalenceWitness { sigma, eps, eps_prime }
    }
}

/// All witnesses between types with matching profiles, in the deterministic search order:
/// `sigma` lexicographic, then `eps` with `+` before `-`, then `eps' = eps` before `eps' = -eps`.
fn candidate_witnesses<'a>(
    g1: &'a GeometricType,
    g2: &'a GeometricType,
    positive_only: bool,
) -> impl Iterator<Item = EquivalenceWitness> + 'a {
    let n = g1.n();
    let same_n = n == g2.n();
    (0..n)
        .permutations(n)
        .filter(move |_| same_n)
        .map(|p| p.into_iter().map(|x| x + 1).collect::<Vec<_>>())
        .filter(move |s: &Vec<usize>| (1..=n).all(|i| g1.h(i) == g2.h(s[i - 1]) && g1.v(i) == g2.v(s[i - 1])))
        .flat_map(move |sigma| {
            let sign_sets = if positive_only { 1u64 } else { 1u64 << n };
            (0..sign_sets).flat_map(move |mask| {
                let eps: Vec<i8> = (0..n).rev().map(|b| if mask >> b & 1 == 1 { -1 } else { 1 }).collect();
                let flips: &[i8] = if positive_only { &[1] } else { &[1, -1] };
                let sigma = sigma.clone();
                flips.iter().map(move |&t| EquivalenceWitness {
                    sigma: sigma.clone(),
                    eps: eps.clone(),
                    eps_prime: eps.iter().map(|e| e * t).collect(),
                })
            })
        })
}

/// Equality up to relabeling of rectangles, all orientation signs positive.
pub fn is_equal(g1: &GeometricType, g2: &GeometricType) -> bool {
    candidate_witnesses(g1, g2, true).any(|w| w.apply(g1) == *g2)
}

/// First witness (in search order) carrying `g1` onto `g2`.
pub fn is_equivalent(g1: &GeometricType, g2: &GeometricType) -> Option<EquivalenceWitness> {
    candidate_witnesses(g1, g2, false).find(|w| w.apply(g1) == *g2)
}

/// Every witness from `g1` onto `g2`, in search order.
pub fn all_equivalences(g1: &GeometricType, g2: &GeometricType) -> Vec<EquivalenceWitness> {
    candidate_witnesses(g1, g2, false).filter(|w| w.apply(g1) == *g2).collect()
}

/// Closure of `g` under the three flips and profile-preserving transpositions.
pub fn equivalence_class(g: &GeometricType) -> BTreeSet<GeometricType> {
    let n = g.n();
    let mut seen = BTreeSet::from([g.clone()]);
    let mut queue = VecDeque::from([g.clone()]);
    while let Some(x) = queue.pop_front() {
        let mut next = vec![x.flip_stable_orientation(), x.flip_unstable_orientation()];
        for i in 1..=n {
            next.push(x.flip_rectangle(i).expect("in range"));
        }
        for (a, b) in (1..=n).tuple_combinations() {
            if x.h(a) == x.h(b) && x.v(a) == x.v(b) {
                let mut s: Vec<usize> = (1..=n).collect();
                s.swap(a - 1, b - 1);
                next.push(x.relabel(&s).expect("permutation"));
            }
        }
        for y in next {
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    seen
}

/// The transversely oriented double cover; `g` itself when `u ≡ +1`.
///
/// Rectangle `i` lifts to `i⁺ = i` and `i⁻ = n + i`, the copy `i⁻` carrying both orders
/// reversed. A handle with `u = -1` joins opposite copies.
pub fn orientation_double_cover(g: &GeometricType) -> GeometricType {
    if g.is_orientation_positive() {
        return g.clone();
    }
    let n = g.n();
    let h: Vec<usize> = g.hs().iter().chain(g.hs()).copied().collect();
    let v: Vec<usize> = g.vs().iter().chain(g.vs()).copied().collect();
    let mut phi: Vec<Vec<(usize, usize)>> = h.iter().map(|&c| vec![(0, 0); c]).collect();
    for i in 1..=n {
        for k in 1..=g.h(i) {
            let (j, l) = g.phi(i, k);
            let rk = g.h(i) + 1 - k;
            let rl = g.v(j) + 1 - l;
            if g.u(i, k) == 1 {
                phi[i - 1][k - 1] = (j, l);
                phi[n + i - 1][rk - 1] = (n + j, rl);
            } else {
                phi[i - 1][k - 1] = (n + j, rl);
                phi[n + i - 1][rk - 1] = (j, l);
            }
        }
    }
    let u = h.iter().map(|&c| vec![1; c]).collect();
    GeometricType::from_parts(h, v, phi, u)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn t1(u: i64) -> GeometricType {
        validate(&RawType { n: 1, h: vec![1], v: vec![1], phi: vec![[1, 1, 1, 1]], u: vec![[1, 1, u]] }).unwrap()
    }

    fn tcat() -> GeometricType {
        validate(&RawType {
            n: 2,
            h: vec![3, 2],
            v: vec![3, 2],
            phi: vec![[1, 1, 2, 2], [1, 2, 1, 3], [1, 3, 1, 1], [2, 1, 2, 1], [2, 2, 1, 2]],
            u: vec![[1, 1, 1], [1, 2, 1], [1, 3, 1], [2, 1, 1], [2, 2, 1]],
        })
        .unwrap()
    }

    #[test]
    fn validation_errors_in_order() {
        let mut r = t1(1).to_raw();
        r.h = vec![2];
        assert!(matches!(validate(&r), Err(ValidationError::SumMismatch { h: 2, v: 1 })));
        let mut r = t1(1).to_raw();
        r.n = 0;
        assert_eq!(validate(&r), Err(ValidationError::EmptyRectangleList));
        let mut r = tcat().to_raw();
        r.phi[0] = [1, 1, 1, 3];
        assert!(matches!(validate(&r), Err(ValidationError::PhiNotBijective(_))));
        let mut r = tcat().to_raw();
        r.phi[0] = [1, 1, 3, 1];
        assert!(matches!(validate(&r), Err(ValidationError::IndexOutOfRange(_))));
        let mut r = tcat().to_raw();
        r.u.pop();
        assert!(matches!(validate(&r), Err(ValidationError::SignMapIncomplete(_))));
        let mut r = tcat().to_raw();
        r.v = vec![0, 5];
        assert!(matches!(validate(&r), Err(ValidationError::NonPositiveCount(_))));
    }

    #[test]
    fn raw_round_trip() {
        let g = tcat();
        assert_eq!(validate(&g.to_raw()).unwrap(), g);
        assert_eq!(g.phi_inv(1, 3), (1, 2));
    }

    #[test]
    fn flips_on_t1_are_trivial() {
        let g = t1(1);
        assert_eq!(g.flip_stable_orientation(), g);
        assert_eq!(g.flip_unstable_orientation(), g);
        assert_eq!(g.flip_rectangle(1).unwrap(), g);
        assert!(g.flip_rectangle(2).is_err());
    }

    #[test]
    fn rectangle_flip_rewrites_u_across_rectangles() {
        let g = tcat().flip_rectangle(1).unwrap();
        // H_1^1 → V_2^2 crosses between rectangles, H_1^2 → V_1^3 stays inside.
        assert_eq!(g.u(1, 3), -1);
        assert_eq!(g.phi(1, 3), (2, 2));
        assert_eq!(g.u(1, 2), 1);
        assert_eq!(g.phi(1, 2), (1, 1));
    }

    #[test]
    fn double_cover_of_reversed_t1() {
        let d = orientation_double_cover(&t1(-1));
        assert_eq!(d.hs(), &[1, 1]);
        assert_eq!(d.phi(1, 1), (2, 1));
        assert_eq!(d.phi(2, 1), (1, 1));
        assert!(d.is_orientation_positive());
        assert_eq!(orientation_double_cover(&t1(1)), t1(1));
    }

    #[test]
    fn witness_inverse() {
        let g = tcat();
        let w = EquivalenceWitness { sigma: vec![1, 2], eps: vec![-1, 1], eps_prime: vec![1, -1] };
        assert_eq!(w.inverse().apply(&w.apply(&g)), g);
    }
}
