//! Exact development of the Markovian family from a geometric type.
//!
//! A rectangle of type `t` and exponent `a` has width `ξ_t λ^a` and height `η_t λ^{-a}`.
//! Successors are wider and shorter (exponent `a + 1`), predecessors narrower and taller.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet, VecDeque};

use anosov_exact::{build_field, perron_data, AlgebraicField, AlgebraicReal, PerronData};
use anosov_type::{transition_matrix, GeometricType};
use rayon::prelude::*;

use crate::{PlaneError, Result};

pub type RectId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_rects: usize,
    pub max_scale_exp: i32,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_rects: 500, max_scale_exp: 12 }
    }
}

#[derive(Clone, Debug)]
pub struct DevelopedRectangle {
    pub id: RectId,
    pub type_idx: usize,
    pub scale_exp: i32,
    pub x0: AlgebraicReal,
    pub y0: AlgebraicReal,
    pub x1: AlgebraicReal,
    pub y1: AlgebraicReal,
    /// Display and filtering approximation `[x0, x1, y0, y1]`; never used for decisions.
    pub approx: [f64; 4],
}

pub type Key = (usize, i32, AlgebraicReal, AlgebraicReal);

fn lt(a: &AlgebraicReal, b: &AlgebraicReal) -> bool {
    a.cmp_exact(b) == Ordering::Less
}

fn le(a: &AlgebraicReal, b: &AlgebraicReal) -> bool {
    a.cmp_exact(b) != Ordering::Greater
}

fn max<'a>(a: &'a AlgebraicReal, b: &'a AlgebraicReal) -> &'a AlgebraicReal {
    if lt(a, b) {
        b
    } else {
        a
    }
}

fn min<'a>(a: &'a AlgebraicReal, b: &'a AlgebraicReal) -> &'a AlgebraicReal {
    if lt(b, a) {
        b
    } else {
        a
    }
}

impl DevelopedRectangle {
    pub fn width(&self) -> AlgebraicReal {
        &self.x1 - &self.x0
    }

    pub fn height(&self) -> AlgebraicReal {
        &self.y1 - &self.y0
    }

    pub fn same_footprint(&self, o: &Self) -> bool {
        self.x0 == o.x0 && self.x1 == o.x1 && self.y0 == o.y0 && self.y1 == o.y1
    }

    /// Whether the open rectangles meet.
    pub fn interiors_meet(&self, o: &Self) -> bool {
        lt(max(&self.x0, &o.x0), min(&self.x1, &o.x1)) && lt(max(&self.y0, &o.y0), min(&self.y1, &o.y1))
    }

    /// `[x0, x1] ⊆ [o.x0, o.x1]`.
    pub fn x_within(&self, o: &Self) -> bool {
        le(&o.x0, &self.x0) && le(&self.x1, &o.x1)
    }

    pub fn y_within(&self, o: &Self) -> bool {
        le(&o.y0, &self.y0) && le(&self.y1, &o.y1)
    }

    /// The Markovian intersection axiom for a pair with meeting interiors: one is a
    /// vertical subrectangle of the other's horizontal band.
    pub fn markov_compatible(&self, o: &Self) -> bool {
        (self.x_within(o) && o.y_within(self)) || (o.x_within(self) && self.y_within(o))
    }
}

/// An orientation-preserving affine map `(x, y) ↦ (λ^m x + tx, λ^{-m} y + ty)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeckTransform {
    pub pow_exp: i32,
    pub tx: AlgebraicReal,
    pub ty: AlgebraicReal,
}

impl DeckTransform {
    /// The map sending rectangle `a` onto `b` (same type assumed).
    pub fn between(p: &DevelopedPatch, a: &DevelopedRectangle, b: &DevelopedRectangle) -> Self {
        let m = b.scale_exp - a.scale_exp;
        DeckTransform {
            pow_exp: m,
            tx: &b.x0 - &(&p.lam_pow(m) * &a.x0),
            ty: &b.y0 - &(&p.lam_pow(-m) * &a.y0),
        }
    }

    pub fn apply(&self, p: &DevelopedPatch, x: &AlgebraicReal, y: &AlgebraicReal) -> (AlgebraicReal, AlgebraicReal) {
        (
            &(&p.lam_pow(self.pow_exp) * x) + &self.tx,
            &(&p.lam_pow(-self.pow_exp) * y) + &self.ty,
        )
    }

    pub fn inverse(&self, p: &DevelopedPatch) -> Self {
        let m = self.pow_exp;
        DeckTransform {
            pow_exp: -m,
            tx: -(&p.lam_pow(-m) * &self.tx),
            ty: -(&p.lam_pow(m) * &self.ty),
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, p: &DevelopedPatch, other: &Self) -> Self {
        let (tx, ty) = self.apply(p, &other.tx, &other.ty);
        DeckTransform { pow_exp: self.pow_exp + other.pow_exp, tx, ty }
    }

    pub fn power(&self, p: &DevelopedPatch, k: i32) -> Self {
        let f = p.field();
        let mut acc = DeckTransform { pow_exp: 0, tx: f.zero(), ty: f.zero() };
        let base = if k < 0 { self.inverse(p) } else { self.clone() };
        for _ in 0..k.unsigned_abs() {
            acc = base.compose(p, &acc);
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.pow_exp == 0 && self.tx.is_zero_repr() && self.ty.is_zero_repr()
    }

    /// The unique fixed point; needs `λ > 1` and `m ≠ 0`.
    pub fn fixed_point(&self, p: &DevelopedPatch) -> Result<(AlgebraicReal, AlgebraicReal)> {
        if p.lambda_is_one() || self.pow_exp == 0 {
            return Err(PlaneError::LambdaNotExpanding);
        }
        let one = p.field().one();
        let x = self.tx.checked_div(&(&one - &p.lam_pow(self.pow_exp)))?;
        let y = self.ty.checked_div(&(&one - &p.lam_pow(-self.pow_exp)))?;
        Ok((x, y))
    }

    /// Image of a rectangle's key; the caller looks it up in the patch.
    pub fn apply_rect(&self, p: &DevelopedPatch, r: &DevelopedRectangle) -> (usize, i32, AlgebraicReal, AlgebraicReal) {
        let (x, y) = self.apply(p, &r.x0, &r.y0);
        (r.type_idx, r.scale_exp + self.pow_exp, x, y)
    }
}

/// A finite piece of the Markovian family with exact coordinates.
///
/// A growable patch extends itself on demand (within its budget) whenever a neighbor
/// list is requested; a frozen one reports `FrontierIncomplete` instead.
pub struct DevelopedPatch {
    g: GeometricType,
    field: AlgebraicField,
    perron: PerronData,
    budget: Budget,
    growable: bool,
    lambda_one: bool,
    powers: Vec<AlgebraicReal>,
    pow_off: i32,
    /// `s_pref[t-1][k-1] = Σ_{m<k} η_{rect φ(t,m)}`, with a final total entry.
    s_pref: Vec<Vec<AlgebraicReal>>,
    /// `p_pref[t-1][l-1] = Σ_{m<l} ξ_{rect φ⁻¹(t,m)}`, with a final total entry.
    p_pref: Vec<Vec<AlgebraicReal>>,
    rects: Vec<DevelopedRectangle>,
    index: HashMap<Key, RectId>,
    succ: Vec<Option<Vec<RectId>>>,
    pred: Vec<Option<Vec<RectId>>>,
}

impl DevelopedPatch {
    /// A patch holding only the origin: type 1, exponent 0, lower-left corner at 0.
    pub fn new(g: &GeometricType, budget: Budget) -> Result<Self> {
        if !g.is_orientation_positive() {
            return Err(PlaneError::OrientationNotPositive);
        }
        let m = transition_matrix(g);
        let field = build_field(&m.a).map_err(|e| match e {
            anosov_exact::ExactError::NotIrreducible => PlaneError::NotIrreducible,
            e => PlaneError::Exact(e),
        })?;
        let perron = perron_data(&m.a, &field)?;
        let lambda_one = perron.lambda == field.one();
        let pow_off = budget.max_scale_exp + 4;
        let mut powers = Vec::with_capacity(2 * pow_off as usize + 1);
        let inv = perron.lambda.inverse()?;
        let mut acc = inv.pow(pow_off)?;
        for _ in -pow_off..=pow_off {
            powers.push(acc.clone());
            acc = &acc * &perron.lambda;
        }
        let n = g.n();
        let mut s_pref = Vec::with_capacity(n);
        let mut p_pref = Vec::with_capacity(n);
        for t in 1..=n {
            let mut s = vec![field.zero()];
            for k in 1..=g.h(t) {
                let next = &s[k - 1] + &perron.eta[g.phi(t, k).0 - 1];
                s.push(next);
            }
            s_pref.push(s);
            let mut p = vec![field.zero()];
            for l in 1..=g.v(t) {
                let next = &p[l - 1] + &perron.xi[g.phi_inv(t, l).0 - 1];
                p.push(next);
            }
            p_pref.push(p);
        }
        let mut patch = DevelopedPatch {
            g: g.clone(),
            field: field.clone(),
            perron,
            budget,
            growable: true,
            lambda_one,
            powers,
            pow_off,
            s_pref,
            p_pref,
            rects: Vec::new(),
            index: HashMap::new(),
            succ: Vec::new(),
            pred: Vec::new(),
        };
        patch.insert((1, 0, field.zero(), field.zero()));
        Ok(patch)
    }

    pub fn geometric_type(&self) -> &GeometricType {
        &self.g
    }

    pub fn field(&self) -> &AlgebraicField {
        &self.field
    }

    pub fn perron(&self) -> &PerronData {
        &self.perron
    }

    pub fn budget(&self) -> Budget {
        self.budget
    }

    pub fn lambda_is_one(&self) -> bool {
        self.lambda_one
    }

    pub fn origin(&self) -> RectId {
        0
    }

    pub fn len(&self) -> usize {
        self.rects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rects.is_empty()
    }

    pub fn rect(&self, r: RectId) -> &DevelopedRectangle {
        &self.rects[r]
    }

    pub fn rects(&self) -> &[DevelopedRectangle] {
        &self.rects
    }

    pub fn set_growable(&mut self, growable: bool) {
        self.growable = growable;
    }

    pub fn is_growable(&self) -> bool {
        self.growable
    }

    /// `λ^m`.
    pub fn lam_pow(&self, m: i32) -> AlgebraicReal {
        if m.abs() <= self.pow_off {
            self.powers[(m + self.pow_off) as usize].clone()
        } else {
            self.perron.lambda.pow(m).expect("λ > 0")
        }
    }

    /// Rectangles whose successor or predecessor list is not yet known.
    pub fn frontier(&self) -> Vec<RectId> {
        (0..self.len()).filter(|&r| self.succ[r].is_none() || self.pred[r].is_none()).collect()
    }

    pub fn is_developed(&self, r: RectId) -> bool {
        self.succ[r].is_some() && self.pred[r].is_some()
    }

    pub fn find(&self, key: &(usize, i32, AlgebraicReal, AlgebraicReal)) -> Option<RectId> {
        self.index.get(key).copied()
    }

    fn insert(&mut self, key: Key) -> RectId {
        if let Some(&id) = self.index.get(&key) {
            return id;
        }
        let (t, a, x0, y0) = key.clone();
        let x1 = &x0 + &(&self.perron.xi[t - 1] * &self.lam_pow(a));
        let y1 = &y0 + &(&self.perron.eta[t - 1] * &self.lam_pow(-a));
        let id = self.rects.len();
        let approx = [x0.to_f64(), x1.to_f64(), y0.to_f64(), y1.to_f64()];
        self.rects.push(DevelopedRectangle { id, type_idx: t, scale_exp: a, x0, y0, x1, y1, approx });
        self.index.insert(key, id);
        self.succ.push(None);
        self.pred.push(None);
        id
    }

    /// Look up or create a rectangle, respecting the budget.
    pub fn get_or_create(&mut self, key: Key) -> Result<RectId> {
        if let Some(&id) = self.index.get(&key) {
            return Ok(id);
        }
        if !self.growable {
            return Err(PlaneError::FrontierIncomplete(self.len()));
        }
        if self.rects.len() >= self.budget.max_rects || key.1.abs() > self.budget.max_scale_exp {
            return Err(PlaneError::BudgetExhausted { rects: self.rects.len() });
        }
        Ok(self.insert(key))
    }

    fn successor_keys(&self, r: RectId) -> Vec<Key> {
        let rect = &self.rects[r];
        let (t, a) = (rect.type_idx, rect.scale_exp);
        let dy = self.lam_pow(-(a + 1));
        let dx = self.lam_pow(a);
        (1..=self.g.h(t))
            .map(|k| {
                let (j, l) = self.g.phi(t, k);
                let y = &rect.y0 + &(&self.s_pref[t - 1][k - 1] * &dy);
                let x = &rect.x0 - &(&self.p_pref[j - 1][l - 1] * &dx);
                (j, a + 1, x, y)
            })
            .collect()
    }

    fn predecessor_keys(&self, r: RectId) -> Vec<Key> {
        let rect = &self.rects[r];
        let (t, a) = (rect.type_idx, rect.scale_exp);
        let dx = self.lam_pow(a - 1);
        let dy = self.lam_pow(-a);
        (1..=self.g.v(t))
            .map(|l| {
                let (i, k) = self.g.phi_inv(t, l);
                let x = &rect.x0 + &(&self.p_pref[t - 1][l - 1] * &dx);
                let y = &rect.y0 - &(&self.s_pref[i - 1][k - 1] * &dy);
                (i, a - 1, x, y)
            })
            .collect()
    }

    fn ensure(&mut self, r: RectId, successors: bool) -> Result<Vec<RectId>> {
        let known = if successors { &self.succ[r] } else { &self.pred[r] };
        if let Some(v) = known {
            return Ok(v.clone());
        }
        if !self.growable {
            return Err(PlaneError::FrontierIncomplete(r));
        }
        let keys = if successors { self.successor_keys(r) } else { self.predecessor_keys(r) };
        let exp = keys[0].1;
        let fresh = keys.iter().filter(|k| !self.index.contains_key(*k)).count();
        if exp.abs() > self.budget.max_scale_exp && fresh > 0 || self.rects.len() + fresh > self.budget.max_rects {
            return Err(PlaneError::BudgetExhausted { rects: self.rects.len() });
        }
        let ids: Vec<RectId> = keys.into_iter().map(|k| self.insert(k)).collect();
        if successors {
            self.succ[r] = Some(ids.clone());
        } else {
            self.pred[r] = Some(ids.clone());
        }
        Ok(ids)
    }

    /// Successors of `r`, bottom to top.
    pub fn successors(&mut self, r: RectId) -> Result<Vec<RectId>> {
        self.ensure(r, true)
    }

    /// Predecessors of `r`, left to right.
    pub fn predecessors(&mut self, r: RectId) -> Result<Vec<RectId>> {
        self.ensure(r, false)
    }

    pub fn known_successors(&self, r: RectId) -> Option<&[RectId]> {
        self.succ[r].as_deref()
    }

    pub fn known_predecessors(&self, r: RectId) -> Option<&[RectId]> {
        self.pred[r].as_deref()
    }

    /// Breadth-first extension: successors then predecessors of each rectangle in
    /// discovery order, skipping lists beyond the scale cap and stopping at the count cap.
    pub fn fill(&mut self) -> Result<()> {
        let mut queue: VecDeque<RectId> = (0..self.len()).collect();
        let mut seen: HashSet<RectId> = queue.iter().copied().collect();
        while let Some(r) = queue.pop_front() {
            for dir in [true, false] {
                match self.ensure(r, dir) {
                    Ok(ids) => {
                        for id in ids {
                            if seen.insert(id) {
                                queue.push_back(id);
                            }
                        }
                    }
                    Err(PlaneError::BudgetExhausted { .. }) => {
                        if self.rects.len() >= self.budget.max_rects {
                            return Ok(());
                        }
                    }
                    Err(e) => return Err(e),
                }
            }
        }
        Ok(())
    }

    /// The unique monotone path from `a` to `b`: all successor steps when `b` has the
    /// larger exponent, all predecessor steps otherwise.
    pub fn monotone_path(&mut self, a: RectId, b: RectId) -> Result<Vec<RectId>> {
        let mut path = vec![a];
        if a == b {
            return Ok(path);
        }
        let (ra, rb) = (self.rect(a).clone(), self.rect(b).clone());
        let up = rb.scale_exp > ra.scale_exp;
        let ok = if up { ra.x_within(&rb) && rb.y_within(&ra) } else { rb.x_within(&ra) && ra.y_within(&rb) };
        if rb.scale_exp == ra.scale_exp || !ok {
            return Err(PlaneError::NotComparable);
        }
        let mut cur = a;
        while cur != b {
            if self.rect(cur).scale_exp == rb.scale_exp {
                return Err(PlaneError::NotComparable);
            }
            let next = if up {
                let s = self.successors(cur)?;
                s.into_iter().find(|&s| rb.y_within(self.rect(s)))
            } else {
                let s = self.predecessors(cur)?;
                s.into_iter().find(|&s| rb.x_within(self.rect(s)))
            };
            cur = next.ok_or(PlaneError::NotComparable)?;
            path.push(cur);
        }
        Ok(path)
    }

    /// Pairs of distinct rectangles whose interiors meet but violate the Markovian
    /// intersection axiom, or that share a footprint.
    pub fn markov_violations(&self) -> Vec<(RectId, RectId)> {
        let mut order: Vec<RectId> = (0..self.len()).collect();
        order.sort_by(|&a, &b| self.rects[a].approx[0].total_cmp(&self.rects[b].approx[0]));
        let slack = |v: f64| 1e-9 * (1.0 + v.abs());
        let mut candidates = Vec::new();
        for (i, &a) in order.iter().enumerate() {
            let ra = &self.rects[a].approx;
            for &b in &order[i + 1..] {
                let rb = &self.rects[b].approx;
                if rb[0] > ra[1] + slack(ra[1]) {
                    break;
                }
                let y_overlap = rb[2] < ra[3] + slack(ra[3]) && ra[2] < rb[3] + slack(rb[3]);
                if y_overlap {
                    candidates.push((a.min(b), a.max(b)));
                }
            }
        }
        let lambda_one = self.lambda_one;
        let mut bad: Vec<(RectId, RectId)> = candidates
            .into_par_iter()
            .filter(|&(a, b)| {
                let (ra, rb) = (&self.rects[a], &self.rects[b]);
                ra.interiors_meet(rb) && (!ra.markov_compatible(rb) || (!lambda_one && ra.same_footprint(rb)))
            })
            .collect();
        bad.sort();
        bad
    }

    /// Developed rectangles whose successor strips or predecessor slabs fail to tile them exactly.
    pub fn tiling_violations(&self) -> Vec<RectId> {
        (0..self.len())
            .into_par_iter()
            .filter(|&r| {
                let rect = &self.rects[r];
                let strips_ok = self.succ[r].as_ref().map_or(true, |s| {
                    let mut y = rect.y0.clone();
                    for &id in s {
                        let c = &self.rects[id];
                        if c.y0 != y || !rect.x_within(c) {
                            return false;
                        }
                        y = c.y1.clone();
                    }
                    y == rect.y1
                });
                let slabs_ok = self.pred[r].as_ref().map_or(true, |p| {
                    let mut x = rect.x0.clone();
                    for &id in p {
                        let c = &self.rects[id];
                        if c.x0 != x || !rect.y_within(c) {
                            return false;
                        }
                        x = c.x1.clone();
                    }
                    x == rect.x1
                });
                !(strips_ok && slabs_ok)
            })
            .collect()
    }
}

/// Breadth-first development from the origin within the budget; the result is frozen.
///
/// Fails with `BudgetExhausted` only when not even the origin's neighbors fit.
pub fn develop(g: &GeometricType, budget: Budget) -> Result<DevelopedPatch> {
    let mut p = DevelopedPatch::new(g, budget)?;
    p.fill()?;
    if !p.is_developed(p.origin()) {
        return Err(PlaneError::BudgetExhausted { rects: p.len() });
    }
    p.set_growable(false);
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use anosov_type::geomtype::validate;
    use anosov_type::RawType;

    pub(crate) fn tcat() -> GeometricType {
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
    fn origin_neighbours() {
        let mut p = develop(&tcat(), Budget { max_rects: 50, max_scale_exp: 12 }).unwrap();
        assert_eq!(p.successors(0).unwrap().len(), 3);
        assert_eq!(p.predecessors(0).unwrap().len(), 3);
        let s = p.successors(0).unwrap();
        let total = s.iter().fold(p.field().zero(), |acc, &id| &acc + &p.rect(id).height());
        assert_eq!(total, p.field().one());
        assert!(p.markov_violations().is_empty());
        assert!(p.tiling_violations().is_empty());
    }

    #[test]
    fn t1_is_a_tower() {
        let g = validate(&RawType { n: 1, h: vec![1], v: vec![1], phi: vec![[1, 1, 1, 1]], u: vec![[1, 1, 1]] }).unwrap();
        let mut p = develop(&g, Budget { max_rects: 5, max_scale_exp: 12 }).unwrap();
        assert_eq!(p.len(), 5);
        for r in 0..p.len() {
            assert!(p.rect(r).x0.is_zero_repr());
        }
        assert_eq!(p.successors(0).unwrap().len(), 1);
        assert_eq!(p.predecessors(0).unwrap().len(), 1);
    }

    #[test]
    fn negative_orientation_refused() {
        let g = validate(&RawType { n: 1, h: vec![1], v: vec![1], phi: vec![[1, 1, 1, 1]], u: vec![[1, 1, -1]] }).unwrap();
        assert_eq!(DevelopedPatch::new(&g, Budget::default()).err(), Some(PlaneError::OrientationNotPositive));
    }

    #[test]
    fn frozen_patch_reports_frontier() {
        let mut p = develop(&tcat(), Budget { max_rects: 10, max_scale_exp: 12 }).unwrap();
        let f = p.frontier();
        assert!(!f.is_empty());
        assert!(matches!(p.successors(f[f.len() - 1]).or(p.predecessors(f[f.len() - 1])), Err(PlaneError::FrontierIncomplete(_))));
    }

    #[test]
    fn deck_round_trip() {
        let mut p = develop(&tcat(), Budget { max_rects: 40, max_scale_exp: 12 }).unwrap();
        let s = p.successors(0).unwrap();
        let same_type: Vec<_> = s.iter().copied().filter(|&r| p.rect(r).type_idx == 1).collect();
        let d = DeckTransform::between(&p, p.rect(0), p.rect(same_type[0]));
        let inv = d.inverse(&p);
        assert!(d.compose(&p, &inv).is_identity());
        let key = d.apply_rect(&p, p.rect(0));
        assert_eq!(p.find(&key), Some(same_type[0]));
    }
}
