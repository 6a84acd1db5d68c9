//! Crossing rectangles, boundary points and quadrant germs on a developed patch.

use std::cmp::Ordering;

use anosov_exact::AlgebraicReal;
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::develop::{DeckTransform, DevelopedPatch, DevelopedRectangle, RectId};
use crate::{PlaneError, Result};

pub type Point = (AlgebraicReal, AlgebraicReal);

/// A rectangle side. Bottom and top are stable (horizontal) boundaries and are crossed
/// by predecessors; left and right are unstable boundaries crossed by successors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    Bottom,
    Top,
    Left,
    Right,
}

impl Side {
    pub const ALL: [Side; 4] = [Side::Bottom, Side::Top, Side::Left, Side::Right];

    pub fn is_stable(self) -> bool {
        matches!(self, Side::Bottom | Side::Top)
    }
}

fn lt(a: &AlgebraicReal, b: &AlgebraicReal) -> bool {
    a.cmp_exact(b) == Ordering::Less
}

fn le(a: &AlgebraicReal, b: &AlgebraicReal) -> bool {
    a.cmp_exact(b) != Ordering::Greater
}

/// Whether `s` reaches strictly beyond `side` of `r`.
pub fn crosses(r: &DevelopedRectangle, s: &DevelopedRectangle, side: Side) -> bool {
    match side {
        Side::Bottom => lt(&s.y0, &r.y0),
        Side::Top => lt(&r.y1, &s.y1),
        Side::Left => lt(&s.x0, &r.x0),
        Side::Right => lt(&r.x1, &s.x1),
    }
}

fn neighbours(p: &mut DevelopedPatch, r: RectId, side: Side) -> Result<Vec<RectId>> {
    if side.is_stable() {
        p.predecessors(r)
    } else {
        p.successors(r)
    }
}

#[derive(Clone, Debug)]
pub struct Crossing {
    /// Crossing rectangles ordered along the side.
    pub rects: Vec<RectId>,
    /// Generator (with positive exponent) of the side leaf's stabilizer, when the
    /// side carries a periodic point; `rects` then spans one fundamental domain.
    pub deck: Option<DeckTransform>,
}

/// Crossing predecessors (stable sides) or successors (unstable sides) of `r`.
///
/// Neighbors sharing the side are descended until they cross it. A descendant with
/// the type of one of its ancestors closes a period: the deck map between them fixes
/// the side's leaf and the branch is not followed further.
pub fn crossing(p: &mut DevelopedPatch, r: RectId, side: Side, depth: usize) -> Result<Crossing> {
    let base = p.rect(r).clone();
    let mut out = Vec::new();
    let mut deck: Option<DeckTransform> = None;
    let mut stack: Vec<RectId> = vec![r];
    fn walk(
        p: &mut DevelopedPatch,
        base: &DevelopedRectangle,
        side: Side,
        depth: usize,
        stack: &mut Vec<RectId>,
        out: &mut Vec<RectId>,
        deck: &mut Option<DeckTransform>,
    ) -> Result<()> {
        if stack.len() > depth {
            return Err(PlaneError::DepthExceeded);
        }
        let node = *stack.last().expect("nonempty");
        for s in neighbours(p, node, side)? {
            let sr = p.rect(s).clone();
            if crosses(base, &sr, side) {
                out.push(s);
                continue;
            }
            if let Some(&a) = stack.iter().rev().find(|&&a| p.rect(a).type_idx == sr.type_idx) {
                let d = DeckTransform::between(p, p.rect(a), &sr);
                let d = if d.pow_exp < 0 { d.inverse(p) } else { d };
                deck.get_or_insert(d);
                continue;
            }
            stack.push(s);
            walk(p, base, side, depth, stack, out, deck)?;
            stack.pop();
        }
        Ok(())
    }
    walk(p, &base, side, depth, &mut stack, &mut out, &mut deck)?;
    let key = |p: &DevelopedPatch, id: RectId| {
        let s = p.rect(id);
        if side.is_stable() {
            s.x0.clone()
        } else {
            s.y0.clone()
        }
    };
    let mut keyed: Vec<(AlgebraicReal, RectId)> = out.into_iter().map(|id| (key(p, id), id)).collect();
    keyed.sort_by(|a, b| a.0.cmp_exact(&b.0));
    Ok(Crossing { rects: keyed.into_iter().map(|(_, id)| id).collect(), deck })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundaryKind {
    Arc,
    Periodic,
}

#[derive(Clone, Debug)]
pub enum BoundaryWitness {
    /// The crossing rectangle whose corner lies at the point.
    Arc { crossing: RectId },
    Periodic { deck: DeckTransform },
}

#[derive(Clone, Debug)]
pub struct BoundaryPoint {
    pub kind: BoundaryKind,
    pub x: AlgebraicReal,
    pub y: AlgebraicReal,
    pub rect: RectId,
    pub side: Side,
    pub witness: BoundaryWitness,
}

impl BoundaryPoint {
    pub fn point(&self) -> Point {
        (self.x.clone(), self.y.clone())
    }
}

fn side_line(r: &DevelopedRectangle, side: Side) -> &AlgebraicReal {
    match side {
        Side::Bottom => &r.y0,
        Side::Top => &r.y1,
        Side::Left => &r.x0,
        Side::Right => &r.x1,
    }
}

/// Endpoints of the crossing rectangles along `side`, the side's own corners included.
pub fn boundary_arc_points(p: &mut DevelopedPatch, r: RectId, side: Side, depth: usize) -> Result<Vec<BoundaryPoint>> {
    let c = crossing(p, r, side, depth)?;
    let fixed = match &c.deck {
        Some(d) if !p.lambda_is_one() => Some(d.fixed_point(p)?),
        _ => None,
    };
    let base = p.rect(r).clone();
    let line = side_line(&base, side).clone();
    let mut pts: Vec<BoundaryPoint> = Vec::new();
    for &s in &c.rects {
        let sr = p.rect(s);
        let ends = if side.is_stable() { [&sr.x0, &sr.x1] } else { [&sr.y0, &sr.y1] };
        for e in ends {
            let (x, y) = if side.is_stable() { (e.clone(), line.clone()) } else { (line.clone(), e.clone()) };
            if pts.iter().any(|q| q.x == x && q.y == y) {
                continue;
            }
            if fixed.as_ref().is_some_and(|f| f.0 == x && f.1 == y) {
                continue;
            }
            pts.push(BoundaryPoint {
                kind: BoundaryKind::Arc,
                x,
                y,
                rect: r,
                side,
                witness: BoundaryWitness::Arc { crossing: s },
            });
        }
    }
    Ok(pts)
}

/// The periodic point on `side`, if its leaf is periodic within `depth`.
pub fn boundary_periodic_points(p: &mut DevelopedPatch, r: RectId, side: Side, depth: usize) -> Result<Vec<BoundaryPoint>> {
    let c = crossing(p, r, side, depth)?;
    let Some(deck) = c.deck else {
        return Ok(Vec::new());
    };
    let (x, y) = deck.fixed_point(p)?;
    Ok(vec![BoundaryPoint { kind: BoundaryKind::Periodic, x, y, rect: r, side, witness: BoundaryWitness::Periodic { deck } }])
}

/// Which side of `r` has `pt` in its relative interior.
pub fn side_containing(r: &DevelopedRectangle, pt: &Point) -> Option<Side> {
    let (x, y) = pt;
    let inside_x = lt(&r.x0, x) && lt(x, &r.x1);
    let inside_y = lt(&r.y0, y) && lt(y, &r.y1);
    if inside_x && r.y0 == *y {
        Some(Side::Bottom)
    } else if inside_x && r.y1 == *y {
        Some(Side::Top)
    } else if inside_y && r.x0 == *x {
        Some(Side::Left)
    } else if inside_y && r.x1 == *x {
        Some(Side::Right)
    } else {
        None
    }
}

/// Descend from `r` toward the crossing neighbor (across `side`) that has `pt` in the
/// interior of its side `want`. `pt` lies on `side` of `r`.
pub fn cross_at(p: &mut DevelopedPatch, r: RectId, side: Side, pt: &Point, want: Side, depth: usize) -> Result<RectId> {
    let base = p.rect(r).clone();
    let mut node = r;
    for _ in 0..depth {
        let cand = neighbours(p, node, side)?;
        let pick = cand.into_iter().find(|&s| {
            let sr = p.rect(s);
            match want {
                // Neighbor lies left of the point: half-open range (x0, x1].
                Side::Right => lt(&sr.x0, &pt.0) && le(&pt.0, &sr.x1),
                Side::Left => le(&sr.x0, &pt.0) && lt(&pt.0, &sr.x1),
                Side::Top => lt(&sr.y0, &pt.1) && le(&pt.1, &sr.y1),
                Side::Bottom => le(&sr.y0, &pt.1) && lt(&pt.1, &sr.y1),
            }
        });
        let s = pick.ok_or(PlaneError::GermNotContained)?;
        if crosses(&base, p.rect(s), side) {
            return if side_containing(p.rect(s), pt) == Some(want) { Ok(s) } else { Err(PlaneError::GermNotContained) };
        }
        node = s;
    }
    Err(PlaneError::DepthExceeded)
}

/// A quadrant at a point, by the signs of its x and y directions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Quadrant {
    pub sx: i8,
    pub sy: i8,
}

/// Counterclockwise from the upper-right quadrant.
pub const QUADRANTS: [Quadrant; 4] = [
    Quadrant { sx: 1, sy: 1 },
    Quadrant { sx: -1, sy: 1 },
    Quadrant { sx: -1, sy: -1 },
    Quadrant { sx: 1, sy: -1 },
];

impl Quadrant {
    pub fn index(self) -> usize {
        QUADRANTS.iter().position(|&q| q == self).expect("quadrant")
    }
}

/// Whether `r` contains the germ at `pt` of quadrant `q`.
pub fn has_germ(r: &DevelopedRectangle, pt: &Point, q: Quadrant) -> bool {
    let (x, y) = pt;
    let okx = if q.sx > 0 { le(&r.x0, x) && lt(x, &r.x1) } else { lt(&r.x0, x) && le(x, &r.x1) };
    okx && if q.sy > 0 { le(&r.y0, y) && lt(y, &r.y1) } else { lt(&r.y0, y) && le(y, &r.y1) }
}

/// A ray from the point separating two adjacent quadrants.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ray {
    Up,
    Left,
    Down,
    Right,
}

impl Ray {
    pub fn between(a: Quadrant, b: Quadrant) -> Ray {
        let (i, j) = (a.index(), b.index());
        let lo = if (i + 1) % 4 == j { i } else { j };
        [Ray::Up, Ray::Left, Ray::Down, Ray::Right][lo]
    }

    pub fn is_vertical(self) -> bool {
        matches!(self, Ray::Up | Ray::Down)
    }
}

/// How far `r` reaches from `pt` along `ray`.
pub fn extent(r: &DevelopedRectangle, pt: &Point, ray: Ray) -> AlgebraicReal {
    match ray {
        Ray::Up => &r.y1 - &pt.1,
        Ray::Down => &pt.1 - &r.y0,
        Ray::Left => &pt.0 - &r.x0,
        Ray::Right => &r.x1 - &pt.0,
    }
}

/// Crossing neighbor of `r` across `side` containing `coord` in its open range, or `None` on a tie.
fn cross_through(p: &mut DevelopedPatch, r: RectId, side: Side, coord: &AlgebraicReal, depth: usize) -> Result<Option<RectId>> {
    let base = p.rect(r).clone();
    let mut node = r;
    for _ in 0..depth {
        let cand = neighbours(p, node, side)?;
        let pick = cand.into_iter().find(|&s| {
            let sr = p.rect(s);
            if side.is_stable() {
                lt(&sr.x0, coord) && lt(coord, &sr.x1)
            } else {
                lt(&sr.y0, coord) && lt(coord, &sr.y1)
            }
        });
        let Some(s) = pick else { return Ok(None) };
        if crosses(&base, p.rect(s), side) {
            return Ok(Some(s));
        }
        node = s;
    }
    Err(PlaneError::DepthExceeded)
}

/// Some rectangle containing the germ of `q` at `pt`, found by walking from `start`.
pub fn germ_member(p: &mut DevelopedPatch, start: RectId, pt: &Point, q: Quadrant, depth: usize) -> Result<RectId> {
    let f = p.field().clone();
    let r0 = p.rect(start).clone();
    let (wlo, _) = r0.width().enclosure(&BigRational::new(1.into(), BigInt::from(1u64) << 40));
    let (hlo, _) = r0.height().enclosure(&BigRational::new(1.into(), BigInt::from(1u64) << 40));
    let mut delta = wlo.min(hlo) / BigRational::from_integer(8.into());
    let zy = &r0.y0 + &r0.height().scale(&BigRational::new(50.into(), 97.into()));
    let rat = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    for _ in 0..24 {
        let qx = &pt.0 + &f.from_rational(&delta * rat(q.sx as i64 * 937, 1000));
        let qy = &pt.1 + &f.from_rational(&delta * rat(q.sy as i64 * 1013, 1000));
        delta /= BigRational::from_integer(3.into());
        if let Some(r) = locate(p, start, &zy, (&qx, &qy), pt, q, depth)? {
            return Ok(r);
        }
    }
    Err(PlaneError::GermNotContained)
}

fn locate(
    p: &mut DevelopedPatch,
    start: RectId,
    zy: &AlgebraicReal,
    target: (&AlgebraicReal, &AlgebraicReal),
    pt: &Point,
    q: Quadrant,
    depth: usize,
) -> Result<Option<RectId>> {
    let (qx, qy) = target;
    let mut r = start;
    // Horizontally through crossing successors at height zy, then vertically.
    for _ in 0..depth {
        let rr = p.rect(r);
        if lt(&rr.x0, qx) && lt(qx, &rr.x1) {
            break;
        }
        let side = if le(qx, &rr.x0) { Side::Left } else { Side::Right };
        match cross_through(p, r, side, zy, depth)? {
            Some(s) => r = s,
            None => return Ok(None),
        }
    }
    for _ in 0..depth {
        let rr = p.rect(r);
        if lt(&rr.y0, qy) && lt(qy, &rr.y1) {
            break;
        }
        let side = if le(qy, &rr.y0) { Side::Bottom } else { Side::Top };
        match cross_through(p, r, side, qx, depth)? {
            Some(s) => r = s,
            None => return Ok(None),
        }
    }
    let (xa, xb) = if lt(&pt.0, qx) { (&pt.0, qx) } else { (qx, &pt.0) };
    let (ya, yb) = if lt(&pt.1, qy) { (&pt.1, qy) } else { (qy, &pt.1) };
    for _ in 0..4 * depth {
        let rr = p.rect(r).clone();
        if has_germ(&rr, pt, q) {
            return Ok(Some(r));
        }
        let xok = le(&rr.x0, xa) && le(xb, &rr.x1);
        let yok = le(&rr.y0, ya) && le(yb, &rr.y1);
        let next = if !xok && yok {
            p.successors(r)?.into_iter().find(|&s| {
                let sr = p.rect(s);
                lt(&sr.y0, qy) && lt(qy, &sr.y1)
            })
        } else if xok && !yok {
            p.predecessors(r)?.into_iter().find(|&s| {
                let sr = p.rect(s);
                lt(&sr.x0, qx) && lt(qx, &sr.x1)
            })
        } else {
            None
        };
        match next {
            Some(s) => r = s,
            None => return Ok(None),
        }
    }
    Ok(None)
}

/// The neighbor of `r` in the chain of rectangles holding the germ of `q`:
/// the successor when `forward`, the predecessor otherwise.
pub fn chain_next(p: &mut DevelopedPatch, r: RectId, pt: &Point, q: Quadrant, forward: bool) -> Result<RectId> {
    let cand = if forward { p.successors(r)? } else { p.predecessors(r)? };
    let mut it = cand.into_iter().filter(|&s| has_germ(p.rect(s), pt, q));
    match (it.next(), it.next()) {
        (Some(s), None) => Ok(s),
        _ => Err(PlaneError::GermNotContained),
    }
}

/// Walk `steps` members along the germ chain (successor direction for positive steps).
pub fn chain_walk(p: &mut DevelopedPatch, r: RectId, pt: &Point, q: Quadrant, steps: i32) -> Result<RectId> {
    let mut cur = r;
    for _ in 0..steps.unsigned_abs() {
        cur = chain_next(p, cur, pt, q, steps > 0)?;
    }
    Ok(cur)
}
