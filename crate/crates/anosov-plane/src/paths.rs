//! Rectangle paths, their abstract projections, and the homotopy moves A, B and C.

use std::collections::HashMap;
use std::fmt;

use anosov_type::{EquivalenceWitness, GeometricType, HandleKind};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cycles::arc_cycle;
use crate::develop::{DevelopedPatch, RectId};
use crate::geometry::{boundary_arc_points, side_containing, Point, Side};
use crate::{PlaneError, Result};

/// A developed path: consecutive rectangles are successor/predecessor pairs.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RectanglePath(pub Vec<RectId>);

impl RectanglePath {
    pub fn trivial(r: RectId) -> Self {
        RectanglePath(vec![r])
    }

    pub fn start(&self) -> RectId {
        self.0[0]
    }

    pub fn end(&self) -> RectId {
        *self.0.last().expect("paths are nonempty")
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn reversed(&self) -> Self {
        RectanglePath(self.0.iter().rev().copied().collect())
    }

    /// Concatenate, sharing the junction rectangle.
    pub fn join(&self, other: &Self) -> Self {
        assert_eq!(self.end(), other.start(), "paths do not meet");
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0[1..]);
        RectanglePath(v)
    }
}

/// One transition of an abstract path: from a rectangle of type `rect` to its
/// `pos`-th successor (`Horizontal`) or predecessor (`Vertical`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbstractStep {
    pub rect: usize,
    pub kind: HandleKind,
    pub pos: usize,
}

impl fmt::Display for AbstractStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = if self.kind == HandleKind::Horizontal { "H" } else { "V" };
        write!(f, "{}{}{}", self.rect, k, self.pos)
    }
}

impl Serialize for AbstractStep {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let k = if self.kind == HandleKind::Horizontal { "H" } else { "V" };
        (self.rect, k, self.pos).serialize(s)
    }
}

impl<'de> Deserialize<'de> for AbstractStep {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let (rect, k, pos): (usize, String, usize) = Deserialize::deserialize(d)?;
        let kind = match k.as_str() {
            "H" => HandleKind::Horizontal,
            "V" => HandleKind::Vertical,
            other => return Err(D::Error::custom(format!("unknown step kind {other:?}"))),
        };
        Ok(AbstractStep { rect, kind, pos })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbstractPath {
    pub start: usize,
    pub steps: Vec<AbstractStep>,
}

/// Whether `steps` describe a path in `g` (each step leaves from the type the previous one reached).
pub fn is_word_in(g: &GeometricType, start: usize, steps: &[AbstractStep]) -> bool {
    let mut cur = start;
    for s in steps {
        if s.rect != cur || s.rect == 0 || s.rect > g.n() {
            return false;
        }
        cur = match s.kind {
            HandleKind::Horizontal if s.pos >= 1 && s.pos <= g.h(cur) => g.phi(cur, s.pos).0,
            HandleKind::Vertical if s.pos >= 1 && s.pos <= g.v(cur) => g.phi_inv(cur, s.pos).0,
            _ => return false,
        };
    }
    true
}

/// The type reached at the end of a word.
pub fn word_end(g: &GeometricType, start: usize, steps: &[AbstractStep]) -> usize {
    steps.iter().fold(start, |cur, s| match s.kind {
        HandleKind::Horizontal => g.phi(cur, s.pos).0,
        HandleKind::Vertical => g.phi_inv(cur, s.pos).0,
    })
}

/// Rename a word of `g` through an equivalence `w: g → w(g)`.
pub fn map_word(g: &GeometricType, w: &EquivalenceWitness, steps: &[AbstractStep]) -> Vec<AbstractStep> {
    steps
        .iter()
        .map(|s| {
            let (rect, pos) = match s.kind {
                HandleKind::Horizontal => w.map_h(g, s.rect, s.pos),
                HandleKind::Vertical => w.map_v(g, s.rect, s.pos),
            };
            AbstractStep { rect, kind: s.kind, pos }
        })
        .collect()
}

fn step_between(p: &mut DevelopedPatch, a: RectId, b: RectId) -> Result<Option<AbstractStep>> {
    let t = p.rect(a).type_idx;
    let ea = p.rect(a).scale_exp;
    let eb = p.rect(b).scale_exp;
    if eb == ea + 1 {
        if let Some(k) = p.successors(a)?.iter().position(|&s| s == b) {
            return Ok(Some(AbstractStep { rect: t, kind: HandleKind::Horizontal, pos: k + 1 }));
        }
    } else if eb == ea - 1 {
        if let Some(l) = p.predecessors(a)?.iter().position(|&s| s == b) {
            return Ok(Some(AbstractStep { rect: t, kind: HandleKind::Vertical, pos: l + 1 }));
        }
    }
    Ok(None)
}

/// Check that consecutive rectangles are neighbors.
pub fn validate_path(p: &mut DevelopedPatch, path: &RectanglePath) -> Result<()> {
    for (i, w) in path.0.windows(2).enumerate() {
        if step_between(p, w[0], w[1])?.is_none() {
            return Err(PlaneError::NotAPath(i));
        }
    }
    Ok(())
}

/// Replace each step by its (type, handle) datum.
pub fn abstract_projection(p: &mut DevelopedPatch, path: &RectanglePath) -> Result<AbstractPath> {
    let mut steps = Vec::with_capacity(path.len().saturating_sub(1));
    for (i, w) in path.0.windows(2).enumerate() {
        steps.push(step_between(p, w[0], w[1])?.ok_or(PlaneError::NotAPath(i))?);
    }
    Ok(AbstractPath { start: p.rect(path.start()).type_idx, steps })
}

/// Develop an abstract path from `start`, extending a growable patch as needed.
pub fn lift_abstract(p: &mut DevelopedPatch, a: &AbstractPath, start: RectId) -> Result<RectanglePath> {
    let found = p.rect(start).type_idx;
    if found != a.start {
        return Err(PlaneError::TypeMismatch { expected: a.start, found });
    }
    let mut out = vec![start];
    let mut cur = start;
    for s in &a.steps {
        let found = p.rect(cur).type_idx;
        if found != s.rect {
            return Err(PlaneError::TypeMismatch { expected: s.rect, found });
        }
        let list = match s.kind {
            HandleKind::Horizontal => p.successors(cur)?,
            HandleKind::Vertical => p.predecessors(cur)?,
        };
        cur = *list.get(s.pos - 1).ok_or(PlaneError::NotAPath(out.len() - 1))?;
        out.push(cur);
    }
    Ok(RectanglePath(out))
}

/// Concatenate monotone paths between consecutive comparable rectangles.
pub fn expand(p: &mut DevelopedPatch, gen: &[RectId]) -> Result<RectanglePath> {
    let mut out = vec![gen[0]];
    for w in gen.windows(2) {
        let seg = p.monotone_path(w[0], w[1])?;
        out.extend_from_slice(&seg[1..]);
    }
    Ok(RectanglePath(out))
}

pub fn is_closed(path: &RectanglePath) -> bool {
    path.start() == path.end()
}

pub fn endpoints_agree(a: &RectanglePath, b: &RectanglePath) -> bool {
    a.start() == b.start() && a.end() == b.end()
}

pub fn find_b_redex(path: &RectanglePath) -> Option<usize> {
    path.0.windows(3).position(|w| w[0] == w[2])
}

/// Delete backtracks `R, S, R → R`, always at the leftmost redex.
pub fn reduce_b(path: &RectanglePath) -> RectanglePath {
    let mut v = path.0.clone();
    while let Some(k) = v.windows(3).position(|w| w[0] == w[2]) {
        v.drain(k + 1..k + 3);
    }
    RectanglePath(v)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MoveKind {
    A,
    B,
    C,
}

/// Data of a C-move: the two cycles around `point` from `l0` agree up to `L_upto` as
/// endpoints; the prefix of the cycle with sign `from_positive` is replaced by the other's.
#[derive(Clone, Debug)]
pub struct CycleChoice {
    pub point: Point,
    pub l0: RectId,
    pub from_positive: bool,
    pub upto: usize,
}

#[derive(Clone, Debug)]
pub struct HomotopyMove {
    pub kind: MoveKind,
    pub locus: usize,
    pub cycle: Option<CycleChoice>,
}

/// Expanded prefixes of the positive and negative cycles from `l0` up to a shared rectangle.
pub fn cycle_prefixes(p: &mut DevelopedPatch, c: &CycleChoice, depth: usize) -> Result<(RectanglePath, RectanglePath)> {
    if !(1..=4).contains(&c.upto) {
        return Err(PlaneError::MoveNotApplicable(format!("cycle index {} not in 1..=4", c.upto)));
    }
    let pos = arc_cycle(p, c.l0, &c.point, true, depth)?;
    let neg = arc_cycle(p, c.l0, &c.point, false, depth)?;
    // The negative cycle visits L3, L2, L1, L4.
    let neg_index = [0, 3, 2, 1, 4][c.upto];
    let a = expand(p, &pos[..=c.upto])?;
    let b = expand(p, &neg[..=neg_index])?;
    Ok(if c.from_positive { (a, b) } else { (b, a) })
}

pub fn apply_move(p: &mut DevelopedPatch, path: &RectanglePath, mv: &HomotopyMove, depth: usize) -> Result<RectanglePath> {
    let v = &path.0;
    match mv.kind {
        MoveKind::A => Ok(path.clone()),
        MoveKind::B => {
            let k = mv.locus;
            if k + 2 < v.len() && v[k] == v[k + 2] {
                let mut w = v.clone();
                w.drain(k + 1..k + 3);
                Ok(RectanglePath(w))
            } else {
                Err(PlaneError::MoveNotApplicable(format!("no backtrack at step {k}")))
            }
        }
        MoveKind::C => {
            let c = mv.cycle.as_ref().ok_or_else(|| PlaneError::MoveNotApplicable("C-move without cycle data".into()))?;
            let (from, to) = cycle_prefixes(p, c, depth)?;
            let k = mv.locus;
            if k + from.len() > v.len() || v[k..k + from.len()] != from.0[..] {
                return Err(PlaneError::MoveNotApplicable(format!("cycle prefix not found at step {k}")));
            }
            let mut w = v[..k].to_vec();
            w.extend_from_slice(&to.0);
            w.extend_from_slice(&v[k + from.len()..]);
            Ok(RectanglePath(w))
        }
    }
}

/// Arc points in the relative interior of the sides of `r`.
pub fn interior_arc_points(p: &mut DevelopedPatch, r: RectId, depth: usize) -> Result<Vec<Point>> {
    let mut out = Vec::new();
    for side in Side::ALL {
        for b in boundary_arc_points(p, r, side, depth)? {
            let pt = b.point();
            if side_containing(p.rect(r), &pt) == Some(side) {
                out.push(pt);
            }
        }
    }
    Ok(out)
}

/// Greedy normal form: B-reduce, then try every applicable C-move and keep the first that
/// shortens the B-reduced path; repeat until nothing shortens.
pub fn normalize(p: &mut DevelopedPatch, path: &RectanglePath, depth: usize) -> Result<RectanglePath> {
    let mut cur = reduce_b(path);
    let mut arcs: HashMap<RectId, Vec<Point>> = HashMap::new();
    'outer: while cur.len() > 1 {
        for k in 0..cur.len() {
            let l0 = cur.0[k];
            if let std::collections::hash_map::Entry::Vacant(e) = arcs.entry(l0) {
                e.insert(interior_arc_points(p, l0, depth)?);
            }
            for pt in arcs[&l0].clone() {
                for from_positive in [true, false] {
                    for upto in 1..=4 {
                        let mv = HomotopyMove {
                            kind: MoveKind::C,
                            locus: k,
                            cycle: Some(CycleChoice { point: pt.clone(), l0, from_positive, upto }),
                        };
                        if let Ok(next) = apply_move(p, &cur, &mv, depth) {
                            let next = reduce_b(&next);
                            if next.len() < cur.len() {
                                cur = next;
                                continue 'outer;
                            }
                        }
                    }
                }
            }
        }
        break;
    }
    Ok(cur)
}

/// Splice `seg` (starting at `path[k]`) and its reverse into `path` after position `k`.
pub fn insert_out_and_back(path: &RectanglePath, k: usize, seg: &RectanglePath) -> RectanglePath {
    assert_eq!(path.0[k], seg.start(), "segment must start at the splice point");
    let mut v = path.0[..k].to_vec();
    v.extend_from_slice(&seg.join(&seg.reversed()).0);
    v.extend_from_slice(&path.0[k + 1..]);
    RectanglePath(v)
}

/// A closed path homotopic to the trivial path at `base`, built from `moves` random
/// B-inflations and C-twists. `choose(n)` must return a value below `n`.
///
/// Returns every intermediate path, the trivial one first.
pub fn generate_centered_path(
    p: &mut DevelopedPatch,
    base: RectId,
    moves: usize,
    depth: usize,
    choose: &mut dyn FnMut(usize) -> usize,
) -> Result<Vec<RectanglePath>> {
    let mut history = vec![RectanglePath::trivial(base)];
    let mut arcs: HashMap<RectId, Vec<Point>> = HashMap::new();
    for _ in 0..moves {
        let path = history.last().expect("nonempty").clone();
        let k = choose(path.len());
        let r = path.0[k];
        if choose(2) == 0 {
            let mut nbrs = p.successors(r)?;
            nbrs.extend(p.predecessors(r)?);
            let s = nbrs[choose(nbrs.len())];
            let back = RectanglePath(vec![r, s]);
            history.push(insert_out_and_back(&path, k, &back));
            continue;
        }
        if let std::collections::hash_map::Entry::Vacant(e) = arcs.entry(r) {
            e.insert(interior_arc_points(p, r, depth)?);
        }
        let pts = &arcs[&r];
        if pts.is_empty() {
            continue;
        }
        let choice = CycleChoice { point: pts[choose(pts.len())].clone(), l0: r, from_positive: choose(2) == 0, upto: 1 + choose(4) };
        let (from, _) = cycle_prefixes(p, &choice, depth)?;
        let inflated = insert_out_and_back(&path, k, &from);
        let mv = HomotopyMove { kind: MoveKind::C, locus: k, cycle: Some(choice) };
        let twisted = apply_move(p, &inflated, &mv, depth)?;
        history.push(inflated);
        history.push(twisted);
    }
    Ok(history)
}
