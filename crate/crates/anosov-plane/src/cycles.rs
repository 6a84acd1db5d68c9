//! Arc cycles, pre-cycles around periodic points, and the cycle invariant of a type.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, VecDeque};

use anosov_exact::AlgebraicReal;
use anosov_type::{all_equivalences, orientation_double_cover, EquivalenceWitness, GeometricType, HandleKind};
use serde::{Deserialize, Serialize};

use crate::develop::{Budget, DeckTransform, DevelopedPatch, RectId};
use crate::geometry::{
    chain_next, chain_walk, cross_at, crossing, extent, germ_member, has_germ, side_containing, Point, Quadrant, Ray,
    Side, QUADRANTS,
};
use crate::paths::{abstract_projection, expand, is_closed, lift_abstract, map_word, AbstractPath, AbstractStep, RectanglePath};
use crate::{PlaneError, Result};

fn next_side(s: Side, positive: bool) -> Side {
    // Counterclockwise around the point: above → left → below → right.
    let ccw = match s {
        Side::Bottom => Side::Right,
        Side::Right => Side::Top,
        Side::Top => Side::Left,
        Side::Left => Side::Bottom,
    };
    if positive {
        ccw
    } else {
        match s {
            Side::Bottom => Side::Left,
            Side::Left => Side::Top,
            Side::Top => Side::Right,
            Side::Right => Side::Bottom,
        }
    }
}

/// The rectangles `L0..L4` turning once around an arc point `pt` interior to a side of `l0`.
pub fn arc_cycle(p: &mut DevelopedPatch, l0: RectId, pt: &Point, positive: bool, depth: usize) -> Result<[RectId; 5]> {
    let mut out = [l0; 5];
    let mut cur = l0;
    for slot in out.iter_mut().skip(1) {
        let side = side_containing(p.rect(cur), pt).ok_or(PlaneError::GermNotContained)?;
        cur = cross_at(p, cur, side, pt, next_side(side, positive), depth)?;
        *slot = cur;
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArcCycles {
    pub positive: [RectId; 5],
    pub negative: [RectId; 5],
}

impl ArcCycles {
    /// Whether the negative cycle visits the positive one's rectangles in reverse.
    pub fn reversal_holds(&self) -> bool {
        let (a, b) = (&self.positive, &self.negative);
        b == &[a[0], a[3], a[2], a[1], a[4]]
    }
}

pub fn arc_cycles(p: &mut DevelopedPatch, l0: RectId, pt: &Point, depth: usize) -> Result<ArcCycles> {
    Ok(ArcCycles { positive: arc_cycle(p, l0, pt, true, depth)?, negative: arc_cycle(p, l0, pt, false, depth)? })
}

/// Expanded closed path `L0 → L1 → … → L4 → L0`.
pub fn arc_cycle_path(p: &mut DevelopedPatch, c: &[RectId; 5]) -> Result<RectanglePath> {
    let mut gen = c.to_vec();
    gen.push(c[0]);
    expand(p, &gen)
}

/// The member of the germ chain of `q` with the least extent along `ray` that is at least `target`.
pub fn minimal_member(
    p: &mut DevelopedPatch,
    start: RectId,
    pt: &Point,
    q: Quadrant,
    ray: Ray,
    target: &AlgebraicReal,
    depth: usize,
) -> Result<RectId> {
    // Heights grow toward predecessors, widths toward successors.
    let grow = !ray.is_vertical();
    let mut r = start;
    let mut steps = 0;
    while extent(p.rect(r), pt, ray).cmp_exact(target) == Ordering::Less {
        steps += 1;
        if steps > depth {
            return Err(PlaneError::DepthExceeded);
        }
        r = chain_next(p, r, pt, q, grow)?;
    }
    loop {
        let n = chain_next(p, r, pt, q, !grow)?;
        if extent(p.rect(n), pt, ray).cmp_exact(target) == Ordering::Less {
            return Ok(r);
        }
        r = n;
    }
}

/// Crossing neighbor of `x` through the far end of `x ∩ ray`. `None` when `x` straddles the ray.
pub fn connector(p: &mut DevelopedPatch, x: RectId, pt: &Point, ray: Ray, depth: usize) -> Result<Option<RectId>> {
    let base = p.rect(x).clone();
    let side = if ray.is_vertical() {
        if base.x0 == pt.0 {
            Side::Left
        } else if base.x1 == pt.0 {
            Side::Right
        } else {
            return Ok(None);
        }
    } else if base.y0 == pt.1 {
        Side::Bottom
    } else if base.y1 == pt.1 {
        Side::Top
    } else {
        return Ok(None);
    };
    let mut node = x;
    for _ in 0..depth {
        let pick = match ray {
            Ray::Up => p.successors(node)?.last().copied(),
            Ray::Down => p.successors(node)?.first().copied(),
            Ray::Left => p.predecessors(node)?.first().copied(),
            Ray::Right => p.predecessors(node)?.last().copied(),
        };
        let s = pick.ok_or(PlaneError::FrontierIncomplete(node))?;
        if crate::geometry::crosses(&base, p.rect(s), side) {
            return Ok(Some(s));
        }
        node = s;
    }
    Err(PlaneError::DepthExceeded)
}

#[derive(Clone, Debug)]
pub struct PreCycle {
    pub quadrants: [Quadrant; 4],
    pub rects: [RectId; 4],
    /// `L0, r, L1', …` before expansion into a rectangle path.
    pub generators: Vec<RectId>,
    pub path: RectanglePath,
}

/// Pre-cycle around a periodic point `pt` starting at `l0`, which holds the germ of `q0`.
/// `members[i]` is any rectangle holding the germ of `QUADRANTS[i]`.
pub fn pre_cycle(
    p: &mut DevelopedPatch,
    members: &[RectId; 4],
    pt: &Point,
    l0: RectId,
    q0: Quadrant,
    positive: bool,
    depth: usize,
) -> Result<PreCycle> {
    if !has_germ(p.rect(l0), pt, q0) {
        return Err(PlaneError::GermNotContained);
    }
    let order = if positive { QUADRANTS } else { [QUADRANTS[0], QUADRANTS[3], QUADRANTS[2], QUADRANTS[1]] };
    let k0 = order.iter().position(|&q| q == q0).expect("quadrant");
    let qs: [Quadrant; 4] = std::array::from_fn(|i| order[(k0 + i) % 4]);
    let mut ls = [l0; 4];
    for i in 1..4 {
        let prev = ls[i - 1];
        let q = qs[i];
        if has_germ(p.rect(prev), pt, q) {
            ls[i] = prev;
            continue;
        }
        if i == 3 && has_germ(p.rect(l0), pt, q) {
            ls[i] = l0;
            continue;
        }
        let ray = Ray::between(qs[i - 1], q);
        let target = extent(p.rect(prev), pt, ray);
        ls[i] = minimal_member(p, members[q.index()], pt, q, ray, &target, depth)?;
    }
    let mut gen = vec![l0];
    for i in 0..4 {
        let a = ls[i];
        let b = if i < 3 { ls[i + 1] } else { l0 };
        if a == b {
            continue;
        }
        let ray = Ray::between(qs[i], qs[(i + 1) % 4]);
        let ea = extent(p.rect(a), pt, ray);
        let eb = extent(p.rect(b), pt, ray);
        let x = if ea.cmp_exact(&eb) != Ordering::Greater { a } else { b };
        if let Some(r) = connector(p, x, pt, ray, depth)? {
            gen.push(r);
        }
        gen.push(b);
    }
    let path = expand(p, &gen)?;
    Ok(PreCycle { quadrants: qs, rects: ls, generators: gen, path })
}

/// A closed abstract word up to rotation, stored in its lexicographically least rotation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CycleWord(pub Vec<AbstractStep>);

impl CycleWord {
    pub fn canonical(steps: &[AbstractStep]) -> Self {
        let n = steps.len();
        let best = (0..n.max(1))
            .map(|r| steps[r.min(n)..].iter().chain(&steps[..r.min(n)]).copied().collect::<Vec<_>>())
            .min()
            .unwrap_or_default();
        CycleWord(best)
    }

    pub fn start_type(&self) -> Option<usize> {
        self.0.first().map(|s| s.rect)
    }
}

/// A geometric type paired with a finite set of cycle words.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeometricTypeWithCycles {
    #[serde(rename = "type")]
    pub g: GeometricType,
    pub cycles: BTreeSet<CycleWord>,
}

/// Type index, and the point's offsets from a rectangle's corner rescaled to exponent 0.
#[derive(Clone, Debug)]
pub struct Signature {
    pub type_idx: usize,
    pub x: AlgebraicReal,
    pub y: AlgebraicReal,
}

impl Signature {
    fn cmp(&self, o: &Self) -> Ordering {
        self.type_idx.cmp(&o.type_idx).then_with(|| self.x.cmp_exact(&o.x)).then_with(|| self.y.cmp_exact(&o.y))
    }
}

/// A periodic orbit seen at one lift: the point, its primitive generator, and a rectangle near it.
#[derive(Clone, Debug)]
pub struct PeriodicOrbit {
    pub point: Point,
    pub generator: DeckTransform,
    pub anchor: RectId,
    pub signature: Signature,
}

impl PeriodicOrbit {
    pub fn period(&self) -> i32 {
        self.generator.pow_exp
    }
}

fn signature(p: &mut DevelopedPatch, near: RectId, pt: &Point, period: i32, depth: usize) -> Result<Signature> {
    let q = QUADRANTS[0];
    let mut r = germ_member(p, near, pt, q, depth)?;
    let mut best: Option<Signature> = None;
    for _ in 0..period.unsigned_abs().max(1) {
        let rr = p.rect(r).clone();
        let s = Signature {
            type_idx: rr.type_idx,
            x: &(&pt.0 - &rr.x0) * &p.lam_pow(-rr.scale_exp),
            y: &(&pt.1 - &rr.y0) * &p.lam_pow(rr.scale_exp),
        };
        if best.as_ref().map_or(true, |b| s.cmp(b) == Ordering::Less) {
            best = Some(s);
        }
        r = chain_next(p, r, pt, q, true)?;
    }
    Ok(best.expect("at least one member"))
}

/// One developed rectangle of each type, found breadth-first from the origin.
pub fn type_representatives(p: &mut DevelopedPatch) -> Result<Vec<RectId>> {
    let n = p.geometric_type().n();
    let mut reps: Vec<Option<RectId>> = vec![None; n];
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::from([p.origin()]);
    while let Some(r) = queue.pop_front() {
        if !seen.insert(r) {
            continue;
        }
        let t = p.rect(r).type_idx;
        reps[t - 1].get_or_insert(r);
        if reps.iter().all(Option::is_some) {
            break;
        }
        queue.extend(p.successors(r)?);
        queue.extend(p.predecessors(r)?);
    }
    reps.into_iter().map(|r| r.ok_or(PlaneError::Inconsistent("type never developed".into()))).collect()
}

/// Index of the orbit through `pt` (fixed by a deck map of exponent `m`), if listed.
fn orbit_index(p: &mut DevelopedPatch, orbits: &[PeriodicOrbit], near: RectId, pt: &Point, m: i32, depth: usize) -> Result<Option<usize>> {
    let sig = signature(p, near, pt, m, depth)?;
    Ok(orbits.iter().position(|o| o.signature.cmp(&sig) == Ordering::Equal))
}

/// Periodic orbits met by the boundary of one rectangle of each type.
pub fn find_orbits(p: &mut DevelopedPatch, depth: usize) -> Result<Vec<PeriodicOrbit>> {
    if p.lambda_is_one() {
        return Err(PlaneError::LambdaNotExpanding);
    }
    let reps = type_representatives(p)?;
    let mut orbits: Vec<PeriodicOrbit> = Vec::new();
    for &r in &reps {
        for side in Side::ALL {
            let Some(deck) = crossing(p, r, side, depth)?.deck else { continue };
            let pt = deck.fixed_point(p)?;
            match orbit_index(p, &orbits, r, &pt, deck.pow_exp, depth)? {
                Some(i) => {
                    if deck.pow_exp < orbits[i].period() {
                        let signature = signature(p, r, &pt, deck.pow_exp, depth)?;
                        orbits[i] = PeriodicOrbit { point: pt, generator: deck, anchor: r, signature };
                    }
                }
                None => {
                    let signature = signature(p, r, &pt, deck.pow_exp, depth)?;
                    orbits.push(PeriodicOrbit { point: pt, generator: deck, anchor: r, signature });
                }
            }
        }
    }
    Ok(orbits)
}

/// Closed pre-cycle paths of one orbit: every quadrant, every start within a period, both signs.
/// With `shift = k`, each path is extended by the monotone path from `L0` to `g^k(L0)`.
pub fn orbit_cycle_paths(p: &mut DevelopedPatch, o: &PeriodicOrbit, shift: i32, depth: usize) -> Result<Vec<RectanglePath>> {
    let pt = o.point.clone();
    let mut members = [0; 4];
    for (i, q) in QUADRANTS.iter().enumerate() {
        members[i] = germ_member(p, o.anchor, &pt, *q, depth)?;
    }
    let mut out = Vec::new();
    for (qi, &q) in QUADRANTS.iter().enumerate() {
        for j in 0..o.period() {
            let l0 = chain_walk(p, members[qi], &pt, q, j)?;
            for positive in [true, false] {
                let pc = pre_cycle(p, &members, &pt, l0, q, positive, depth)?;
                if !is_closed(&pc.path) {
                    return Err(PlaneError::Inconsistent("pre-cycle path is not closed".into()));
                }
                let mut path = pc.path;
                if shift != 0 {
                    let target = chain_walk(p, l0, &pt, q, shift * o.period())?;
                    path = path.join(&RectanglePath(p.monotone_path(l0, target)?));
                }
                out.push(path);
            }
        }
    }
    Ok(out)
}

/// How a type is brought to one with `u ≡ +1` before developing.
#[derive(Clone, Debug)]
pub enum Model {
    Direct,
    /// Flipping the rectangles with `ε_i = -1` makes every sign positive.
    Recoloured(EquivalenceWitness),
    /// Neither: work in the orientation double cover and project words back.
    Cover,
}

fn recolouring(g: &GeometricType) -> Option<EquivalenceWitness> {
    let n = g.n();
    let mut eps: Vec<i8> = vec![0; n];
    for s in 1..=n {
        if eps[s - 1] != 0 {
            continue;
        }
        eps[s - 1] = 1;
        let mut queue = VecDeque::from([s]);
        while let Some(i) = queue.pop_front() {
            for k in 1..=g.h(i) {
                let j = g.phi(i, k).0;
                let want = eps[i - 1] * g.u(i, k);
                if eps[j - 1] == 0 {
                    eps[j - 1] = want;
                    queue.push_back(j);
                } else if eps[j - 1] != want {
                    return None;
                }
            }
            for l in 1..=g.v(i) {
                let (j, k) = g.phi_inv(i, l);
                let want = eps[i - 1] * g.u(j, k);
                if eps[j - 1] == 0 {
                    eps[j - 1] = want;
                    queue.push_back(j);
                } else if eps[j - 1] != want {
                    return None;
                }
            }
        }
    }
    Some(EquivalenceWitness { sigma: (1..=n).collect(), eps: eps.clone(), eps_prime: eps })
}

pub fn model_of(g: &GeometricType) -> (GeometricType, Model) {
    if g.is_orientation_positive() {
        return (g.clone(), Model::Direct);
    }
    match recolouring(g) {
        Some(w) => (w.apply(g), Model::Recoloured(w)),
        None => (orientation_double_cover(g), Model::Cover),
    }
}

fn word_from_model(g: &GeometricType, model: &Model, steps: &[AbstractStep]) -> Vec<AbstractStep> {
    match model {
        Model::Direct => steps.to_vec(),
        Model::Recoloured(w) => {
            let gm = w.apply(g);
            map_word(&gm, &w.inverse(), steps)
        }
        Model::Cover => {
            let n = g.n();
            steps
                .iter()
                .map(|s| {
                    if s.rect <= n {
                        *s
                    } else {
                        let t = s.rect - n;
                        let len = if s.kind == HandleKind::Horizontal { g.h(t) } else { g.v(t) };
                        AbstractStep { rect: t, kind: s.kind, pos: len + 1 - s.pos }
                    }
                })
                .collect()
        }
    }
}

fn word_to_model(g: &GeometricType, model: &Model, steps: &[AbstractStep]) -> Option<Vec<AbstractStep>> {
    match model {
        Model::Direct => Some(steps.to_vec()),
        Model::Recoloured(w) => Some(map_word(g, w, steps)),
        Model::Cover => None,
    }
}

/// Everything computed for one type: its model patch, orbits and cycle words.
pub struct Analysis {
    pub model: Model,
    pub patch: DevelopedPatch,
    pub orbits: Vec<PeriodicOrbit>,
    pub cycles: GeometricTypeWithCycles,
}

/// Cycle words of `g`, with orbit `i` shifted by `shifts[i]` periods.
pub fn analyze(g: &GeometricType, budget: Budget, depth: usize, shifts: &BTreeMap<usize, i32>) -> Result<Analysis> {
    let (gm, model) = model_of(g);
    let mut patch = DevelopedPatch::new(&gm, budget)?;
    if patch.lambda_is_one() {
        return Err(PlaneError::LambdaNotExpanding);
    }
    let orbits = find_orbits(&mut patch, depth)?;
    if matches!(model, Model::Cover) && shifts.values().any(|&k| k != 0) {
        return Err(PlaneError::OrientationNotPositive);
    }
    let mut cycles = BTreeSet::new();
    for (i, o) in orbits.iter().enumerate() {
        let shift = shifts.get(&i).copied().unwrap_or(0);
        for path in orbit_cycle_paths(&mut patch, o, shift, depth)? {
            let a = abstract_projection(&mut patch, &path)?;
            if a.steps.is_empty() {
                continue;
            }
            cycles.insert(CycleWord::canonical(&word_from_model(g, &model, &a.steps)));
        }
    }
    Ok(Analysis { model, patch, orbits, cycles: GeometricTypeWithCycles { g: g.clone(), cycles } })
}

pub fn invariant(g: &GeometricType, budget: Budget, depth: usize) -> Result<GeometricTypeWithCycles> {
    Ok(analyze(g, budget, depth, &BTreeMap::new())?.cycles)
}

/// The invariant of the flow obtained by surgeries along the listed orbits.
pub fn invariant_shifted(g: &GeometricType, budget: Budget, depth: usize, shifts: &BTreeMap<usize, i32>) -> Result<GeometricTypeWithCycles> {
    Ok(analyze(g, budget, depth, shifts)?.cycles)
}

/// Orbit and winding of the deck map obtained by lifting `word` (in model labels);
/// `None` when the lift closes up.
fn kappa(a: &mut Analysis, reps: &[RectId], word: &[AbstractStep], depth: usize) -> Result<Option<(usize, i32)>> {
    let start = word[0].rect;
    let r = reps[start - 1];
    let lift = lift_abstract(&mut a.patch, &AbstractPath { start, steps: word.to_vec() }, r)?;
    let end = lift.end();
    if end == r {
        return Ok(None);
    }
    let d = DeckTransform::between(&a.patch, a.patch.rect(r), a.patch.rect(end));
    if d.pow_exp == 0 {
        return Err(PlaneError::Inconsistent("closed word lifts to a translation".into()));
    }
    let pt = d.fixed_point(&a.patch)?;
    let i = orbit_index(&mut a.patch, &a.orbits, r, &pt, d.pow_exp, depth)?.ok_or(PlaneError::NotMatched)?;
    let m = a.orbits[i].period();
    if d.pow_exp % m != 0 {
        return Err(PlaneError::Inconsistent(format!("winding {} not a multiple of period {m}", d.pow_exp)));
    }
    Ok(Some((i, d.pow_exp / m)))
}

/// Per-orbit surgery coefficient carried by a word set (zero where no word winds).
fn orbit_kappas(a: &mut Analysis, g: &GeometricType, words: &BTreeSet<CycleWord>, depth: usize) -> Result<Vec<i32>> {
    let reps = type_representatives(&mut a.patch)?;
    let mut out: Vec<Option<i32>> = vec![None; a.orbits.len()];
    for w in words {
        let mw = word_to_model(g, &a.model, &w.0).ok_or(PlaneError::OrientationNotPositive)?;
        if let Some((i, k)) = kappa(a, &reps, &mw, depth)? {
            match out[i] {
                Some(prev) if prev != k => {
                    return Err(PlaneError::Inconsistent(format!("orbit {i} winds {prev} and {k}")));
                }
                _ => out[i] = Some(k),
            }
        }
    }
    Ok(out.into_iter().map(|k| k.unwrap_or(0)).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    OrbitEquivalent,
    EquivalentUpToSurgeries,
    NotEquivalent,
    Unknown,
}

#[derive(Clone, Debug, Serialize)]
pub struct Comparison {
    pub verdict: Verdict,
    /// Surgery coefficient per periodic orbit of the second type's model.
    pub offsets: Vec<i32>,
    pub witness: Option<EquivalenceWitness>,
    pub diagnostics: Vec<String>,
}

/// Compare two types with cycle sets.
pub fn compare(a: &GeometricTypeWithCycles, b: &GeometricTypeWithCycles, budget: Budget, depth: usize) -> Comparison {
    let witnesses = all_equivalences(&a.g, &b.g);
    if witnesses.is_empty() {
        return Comparison { verdict: Verdict::NotEquivalent, offsets: Vec::new(), witness: None, diagnostics: Vec::new() };
    }
    let mut diagnostics = Vec::new();
    let mapped = |w: &EquivalenceWitness| -> BTreeSet<CycleWord> {
        a.cycles.iter().map(|c| CycleWord::canonical(&map_word(&a.g, w, &c.0))).collect()
    };
    let analysis = analyze(&b.g, budget, depth, &BTreeMap::new());
    if let Some(w) = witnesses.iter().find(|w| mapped(w) == b.cycles) {
        let offsets = match &analysis {
            Ok(an) => vec![0; an.orbits.len()],
            Err(e) => {
                diagnostics.push(format!("no orbit list: {e}"));
                Vec::new()
            }
        };
        return Comparison { verdict: Verdict::OrbitEquivalent, offsets, witness: Some(w.clone()), diagnostics };
    }
    let mut an = match analysis {
        Ok(an) => an,
        Err(e) => {
            diagnostics.push(format!("second type could not be analyzed: {e}"));
            return Comparison { verdict: Verdict::Unknown, offsets: Vec::new(), witness: None, diagnostics };
        }
    };
    let kb = match orbit_kappas(&mut an, &b.g, &b.cycles, depth) {
        Ok(k) => k,
        Err(e) => {
            diagnostics.push(format!("second cycle set: {e}"));
            return Comparison { verdict: Verdict::Unknown, offsets: Vec::new(), witness: None, diagnostics };
        }
    };
    let mut best: Option<(i64, Vec<i32>, EquivalenceWitness)> = None;
    for w in &witnesses {
        let ka = match orbit_kappas(&mut an, &b.g, &mapped(w), depth) {
            Ok(k) => k,
            Err(e) => {
                diagnostics.push(format!("witness {:?}: {e}", w.sigma));
                continue;
            }
        };
        let off: Vec<i32> = kb.iter().zip(&ka).map(|(x, y)| x - y).collect();
        if off.iter().all(|&d| d == 0) {
            continue;
        }
        let cost: i64 = off.iter().map(|&d| i64::from(d).abs()).sum();
        if best.as_ref().map_or(true, |(c, _, _)| cost < *c) {
            best = Some((cost, off, w.clone()));
        }
    }
    match best {
        Some((_, offsets, w)) => Comparison { verdict: Verdict::EquivalentUpToSurgeries, offsets, witness: Some(w), diagnostics },
        None => {
            diagnostics.push("cycle sets differ without a surgery explanation".into());
            Comparison { verdict: Verdict::Unknown, offsets: Vec::new(), witness: None, diagnostics }
        }
    }
}

/// Surgery coefficients turning `a`'s flow into `b`'s, when the comparison finds them.
pub fn surgery_offset(a: &GeometricTypeWithCycles, b: &GeometricTypeWithCycles, budget: Budget, depth: usize) -> Option<Vec<i32>> {
    let c = compare(a, b, budget, depth);
    matches!(c.verdict, Verdict::OrbitEquivalent | Verdict::EquivalentUpToSurgeries).then_some(c.offsets)
}
