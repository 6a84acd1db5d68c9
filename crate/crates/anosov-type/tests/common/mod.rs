#![allow(dead_code)]

use anosov_type::geomtype::validate;
use anosov_type::{GeometricType, RawType};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn tcat() -> GeometricType {
    validate(&RawType {
        n: 2,
        h: vec![3, 2],
        v: vec![3, 2],
        phi: vec![[1, 1, 2, 2], [1, 2, 1, 3], [1, 3, 1, 1], [2, 1, 2, 1], [2, 2, 1, 2]],
        u: vec![[1, 1, 1], [1, 2, 1], [1, 3, 1], [2, 1, 1], [2, 2, 1]],
    })
    .unwrap()
}

pub fn t1(u: i64) -> GeometricType {
    validate(&RawType { n: 1, h: vec![1], v: vec![1], phi: vec![[1, 1, 1, 1]], u: vec![[1, 1, u]] }).unwrap()
}

/// A random valid type with up to `max_n` rectangles.
pub fn random_type(seed: u64, max_n: usize) -> GeometricType {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=max_n);
    let h: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=3)).collect();
    let total: usize = h.iter().sum();
    // Random composition of `total` into n positive parts.
    let mut cuts: Vec<usize> = (1..total).collect();
    cuts.shuffle(&mut rng);
    let mut cuts: Vec<usize> = cuts.into_iter().take(n - 1).collect();
    cuts.sort();
    let mut v = Vec::new();
    let mut prev = 0;
    for c in cuts.into_iter().chain([total]) {
        v.push(c - prev);
        prev = c;
    }
    let mut targets: Vec<(usize, usize)> =
        v.iter().enumerate().flat_map(|(j, &c)| (1..=c).map(move |l| (j + 1, l))).collect();
    targets.shuffle(&mut rng);
    let mut t = targets.into_iter();
    let phi = h.iter().map(|&c| (0..c).map(|_| t.next().unwrap()).collect()).collect();
    let u = h.iter().map(|&c| (0..c).map(|_| if rng.gen_bool(0.5) { 1 } else { -1 }).collect()).collect();
    GeometricType::from_parts(h, v, phi, u)
}
