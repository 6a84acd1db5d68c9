//! The eight acceptance criteria, one PASS/FAIL line each.

#[path = "../../anosov-type/tests/mutations/mod.rs"]
mod mutations;

use std::collections::BTreeMap;
use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::time::{Duration, Instant};

use anosov_cli::read_type;
use anosov_plane::cycles::{
    arc_cycle_path, arc_cycles, compare, find_orbits, invariant, invariant_shifted, orbit_cycle_paths, Verdict,
};
use anosov_plane::paths::{
    endpoints_agree, find_b_redex, generate_centered_path, interior_arc_points, is_closed, reduce_b, validate_path,
    RectanglePath,
};
use anosov_plane::{develop, Budget, DevelopedPatch};
use anosov_type::geomtype::validate;
use anosov_type::{entropy, equivalence_class, periodic_word_count, transition_matrix, GeometricType};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const DEPTH: usize = 32;

fn is_equivalent(a: &GeometricType, b: &GeometricType) -> bool {
    anosov_type::is_equivalent(a, b).is_some()
}

fn fixture(name: &str) -> GeometricType {
    read_type(&Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)).unwrap()
}

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn validation() -> Outcome {
    for name in ["t1.json", "tcat.json"] {
        fixture(name);
    }
    let m = mutations::mutants();
    ensure(m.len() == 20, "corpus size")?;
    for (what, raw, broken) in &m {
        match validate(raw) {
            Ok(_) => return Err(format!("accepted: {what}")),
            Err(e) => ensure(mutations::classify(&e) == *broken, format!("{what}: wrong reason {e}"))?,
        }
    }
    let sum = m.iter().filter(|x| x.2 == mutations::Broken::Sum).count();
    Ok(format!("2 fixtures accepted, 20 mutants rejected ({sum} by handle totals)"))
}

fn random_relative(g: &GeometricType, rng: &mut ChaCha8Rng) -> GeometricType {
    let mut x = g.clone();
    for _ in 0..rng.gen_range(0..6) {
        x = match rng.gen_range(0..4) {
            0 => x.flip_stable_orientation(),
            1 => x.flip_unstable_orientation(),
            2 => x.flip_rectangle(rng.gen_range(1..=x.n())).unwrap(),
            _ => {
                let mut s: Vec<usize> = (1..=x.n()).collect();
                rand::seq::SliceRandom::shuffle(&mut s[..], rng);
                x.relabel(&s).unwrap()
            }
        };
    }
    x
}

fn equivalence_laws() -> Outcome {
    let seeds = [fixture("t1.json"), fixture("tcat.json"), fixture("tcat_flipped.json")];
    // Origin 2 is equivalent to origin 1; the oracle is "same underlying fixture class".
    let class_of = [0usize, 1, 1];
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let corpus: Vec<(usize, GeometricType)> = (0..200)
        .map(|i| {
            let o = i % 3;
            (class_of[o], random_relative(&seeds[o], &mut rng))
        })
        .collect();
    for (_, g) in &corpus {
        ensure(is_equivalent(g, g), "reflexivity")?;
    }
    for _ in 0..400 {
        let (a, b) = (&corpus[rng.gen_range(0..200)], &corpus[rng.gen_range(0..200)]);
        let ab = is_equivalent(&a.1, &b.1);
        ensure(ab == is_equivalent(&b.1, &a.1), "symmetry")?;
        ensure(ab == (a.0 == b.0), "disagrees with the construction")?;
        let c = &corpus[rng.gen_range(0..200)];
        if ab && is_equivalent(&b.1, &c.1) {
            ensure(is_equivalent(&a.1, &c.1), "transitivity")?;
        }
    }
    let class = equivalence_class(&seeds[1]);
    let members: Vec<_> = class.iter().collect();
    for a in &members {
        for b in &members {
            ensure(is_equivalent(a, b), "class members not equivalent")?;
        }
        let mut images = vec![a.flip_stable_orientation(), a.flip_unstable_orientation()];
        for i in 1..=a.n() {
            images.push(a.flip_rectangle(i).unwrap());
        }
        for (i, j) in (1..=a.n()).flat_map(|i| (i + 1..=a.n()).map(move |j| (i, j))) {
            if a.h(i) == a.h(j) && a.v(i) == a.v(j) {
                let mut s: Vec<usize> = (1..=a.n()).collect();
                s.swap(i - 1, j - 1);
                images.push(a.relabel(&s).unwrap());
            }
        }
        for im in images {
            ensure(class.contains(&im), "class not closed under a generator")?;
        }
    }
    Ok(format!("200 types, 400 sampled pairs/triples, class of size {}", class.len()))
}

/// Closed walks of length `k` in the handle graph, by brute force.
fn walk_count(g: &GeometricType, k: usize) -> u64 {
    fn go(g: &GeometricType, start: usize, at: usize, left: usize) -> u64 {
        if left == 0 {
            return u64::from(at == start);
        }
        (1..=g.h(at)).map(|m| go(g, start, g.phi(at, m).0, left - 1)).sum()
    }
    (1..=g.n()).map(|s| go(g, s, s, k)).sum()
}

fn sft_numbers() -> Outcome {
    let g = fixture("tcat.json");
    let m = transition_matrix(&g);
    ensure(m.a == vec![vec![2, 1], vec![1, 1]], format!("matrix {:?}", m.a))?;
    let mut counts = Vec::new();
    for k in 1..=3u32 {
        let c = periodic_word_count(&m, k).to_u64().unwrap();
        ensure(c == walk_count(&g, k as usize), format!("trace vs walks at {k}"))?;
        counts.push(c);
    }
    ensure(counts == [3, 7, 18], format!("counts {counts:?}"))?;
    let tol = BigRational::new(1.into(), BigInt::from(10u64.pow(9)));
    let e = entropy(&m, &tol).map_err(|e| e.to_string())?;
    ensure(&e.hi - &e.lo <= tol, "enclosure too wide")?;
    let exact = ((3.0 + 5f64.sqrt()) / 2.0).ln();
    let (lo, hi) = (e.lo.to_f64().unwrap(), e.hi.to_f64().unwrap());
    ensure(lo <= exact + 1e-15 && exact - 1e-15 <= hi, format!("[{lo}, {hi}] misses {exact}"))?;
    Ok(format!("counts {counts:?}, entropy in [{lo:.12}, {hi:.12}]"))
}

fn development() -> Outcome {
    let g = fixture("tcat.json");
    let p = develop(&g, Budget { max_rects: 500, max_scale_exp: 12 }).map_err(|e| e.to_string())?;
    ensure(p.markov_violations().is_empty(), "Markovian intersection violated")?;
    ensure(p.tiling_violations().is_empty(), "strips or slabs do not tile")?;
    let q = develop(&g, Budget { max_rects: 1000, max_scale_exp: 12 }).map_err(|e| e.to_string())?;
    for r in p.rects() {
        let id = q.find(&(r.type_idx, r.scale_exp, r.x0.clone(), r.y0.clone())).ok_or("rectangle lost")?;
        ensure(q.rect(id).x1 == r.x1 && q.rect(id).y1 == r.y1, "coordinates moved")?;
    }
    Ok(format!("{} rectangles, redeveloped to {}", p.len(), q.len()))
}

fn path_oracles() -> Outcome {
    let mut p = DevelopedPatch::new(&fixture("tcat.json"), Budget { max_rects: 20_000, max_scale_exp: 12 }).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut moves = 0;
    for i in 0..100 {
        let h = generate_centered_path(&mut p, i % 7, 5, DEPTH, &mut |n| rng.gen_range(0..n)).map_err(|e| e.to_string())?;
        for w in h.windows(2) {
            ensure(endpoints_agree(&w[0], &w[1]), "a move changed the endpoints")?;
            moves += 1;
        }
        let last = h.last().unwrap();
        validate_path(&mut p, last).map_err(|e| e.to_string())?;
        ensure(is_closed(last), "generated path not closed")?;
        ensure(find_b_redex(&reduce_b(last)).is_none(), "B-reduction left a redex")?;
    }
    for _ in 0..50 {
        let mut v = vec![rng.gen_range(0..5)];
        for _ in 0..rng.gen_range(1..10) {
            let r = *v.last().unwrap();
            let mut n = p.successors(r).unwrap();
            n.extend(p.predecessors(r).unwrap());
            v.push(n[rng.gen_range(0..n.len())]);
        }
        let path = RectanglePath(v);
        ensure(reduce_b(&path.join(&path.reversed())).len() == 1, "out-and-back not trivial")?;
    }
    Ok(format!("100 closed paths from {moves} moves, 50 out-and-back paths"))
}

fn cycle_structure() -> Outcome {
    let mut p = DevelopedPatch::new(&fixture("tcat.json"), Budget { max_rects: 20_000, max_scale_exp: 12 }).unwrap();
    let mut arcs = 0;
    let mut starts = 0;
    for l0 in 0..40 {
        for pt in interior_arc_points(&mut p, l0, DEPTH).map_err(|e| e.to_string())? {
            let c = arc_cycles(&mut p, l0, &pt, DEPTH).map_err(|e| e.to_string())?;
            ensure(c.positive != c.negative, "the two cycles coincide")?;
            ensure(c.reversal_holds(), "reversal law fails")?;
            // L1, L2, L3 are admissible starts as well.
            for &li in &c.positive[1..4] {
                let d = arc_cycles(&mut p, li, &pt, DEPTH).map_err(|e| e.to_string())?;
                ensure(d.positive != d.negative && d.reversal_holds(), "reversal law fails from another start")?;
                starts += 1;
            }
            for cyc in [&c.positive, &c.negative] {
                ensure(is_closed(&arc_cycle_path(&mut p, cyc).map_err(|e| e.to_string())?), "arc cycle path open")?;
            }
            arcs += 1;
        }
    }
    let orbits = find_orbits(&mut p, DEPTH).map_err(|e| e.to_string())?;
    let mut pre = 0;
    for o in &orbits {
        for path in orbit_cycle_paths(&mut p, o, 0, DEPTH).map_err(|e| e.to_string())? {
            ensure(is_closed(&path), "pre-cycle path open")?;
            pre += 1;
        }
    }
    Ok(format!("{arcs} arc points, {} starts with two cycles each, {pre} closed pre-cycle paths", arcs + starts))
}

fn invariant_stability() -> Outcome {
    let g = fixture("tcat.json");
    let base = invariant(&g, Budget::default(), DEPTH).map_err(|e| e.to_string())?;
    let class = equivalence_class(&g);
    for e in &class {
        let inv = invariant(e, Budget::default(), DEPTH).map_err(|e| e.to_string())?;
        let c = compare(&inv, &base, Budget::default(), DEPTH);
        ensure(c.verdict == Verdict::OrbitEquivalent, format!("{:?} {:?}", c.verdict, c.diagnostics))?;
        ensure(c.offsets.iter().all(|&k| k == 0), "nonzero offset")?;
    }
    Ok(format!("{} class members, {} cycle words each", class.len(), base.cycles.len()))
}

fn surgery_bookkeeping() -> Outcome {
    let g = fixture("tcat.json");
    let base = invariant(&g, Budget::default(), DEPTH).map_err(|e| e.to_string())?;
    let mut seen = Vec::new();
    for k in [1, 2] {
        let s = invariant_shifted(&g, Budget::default(), DEPTH, &BTreeMap::from([(0, k)])).map_err(|e| e.to_string())?;
        let c = compare(&base, &s, Budget::default(), DEPTH);
        ensure(c.verdict == Verdict::EquivalentUpToSurgeries, format!("{:?}", c.verdict))?;
        ensure(c.offsets.first() == Some(&k), format!("offsets {:?} for shift {k}", c.offsets))?;
        ensure(c.offsets[1..].iter().all(|&x| x == 0), "offset on another orbit")?;
        seen.push(c.offsets);
    }
    Ok(format!("offsets {:?} and {:?}", seen[0], seen[1]))
}

type Criterion = (&'static str, fn() -> Outcome, Option<u64>);

#[test]
fn acceptance() {
    let criteria: [Criterion; 8] = [
        ("validation and algebra", validation, Some(1)),
        ("equivalence laws", equivalence_laws, Some(30)),
        ("SFT numbers", sft_numbers, Some(1)),
        ("development soundness", development, Some(60)),
        ("path oracles", path_oracles, Some(30)),
        ("cycle structure", cycle_structure, Some(60)),
        ("invariant stability", invariant_stability, None),
        ("surgery bookkeeping", surgery_bookkeeping, None),
    ];
    let mut failed = Vec::new();
    let mut out = std::io::stdout().lock();
    for (i, (name, f, limit)) in criteria.into_iter().enumerate() {
        let t = Instant::now();
        let r = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or(e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let dt = t.elapsed();
        let r = match (r, limit) {
            (Ok(_), Some(s)) if dt > Duration::from_secs(s) => Err(format!("took {dt:.2?}, limit {s} s")),
            (r, _) => r,
        };
        let (tag, detail) = match &r {
            Ok(d) => ("PASS", d.clone()),
            Err(d) => ("FAIL", d.clone()),
        };
        writeln!(out, "criterion {}: {tag} {name} ({dt:.2?}): {detail}", i + 1).unwrap();
        if r.is_err() {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
