//! Invalid types derived from the cat-map fixture, each breaking one validity condition.

#![allow(dead_code)]

use anosov_type::{RawType, ValidationError};

pub fn tcat_raw() -> RawType {
    RawType {
        n: 2,
        h: vec![3, 2],
        v: vec![3, 2],
        phi: vec![[1, 1, 2, 2], [1, 2, 1, 3], [1, 3, 1, 1], [2, 1, 2, 1], [2, 2, 1, 2]],
        u: vec![[1, 1, 1], [1, 2, 1], [1, 3, 1], [2, 1, 1], [2, 2, 1]],
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Broken {
    Empty,
    Index,
    Count,
    Sum,
    Bijection,
    Sign,
}

pub fn classify(e: &ValidationError) -> Broken {
    match e {
        ValidationError::EmptyRectangleList => Broken::Empty,
        ValidationError::IndexOutOfRange(_) => Broken::Index,
        ValidationError::NonPositiveCount(_) => Broken::Count,
        ValidationError::SumMismatch { .. } => Broken::Sum,
        ValidationError::PhiNotBijective(_) => Broken::Bijection,
        ValidationError::SignMapIncomplete(_) => Broken::Sign,
    }
}

fn with(f: impl FnOnce(&mut RawType)) -> RawType {
    let mut r = tcat_raw();
    f(&mut r);
    r
}

/// Twenty mutants with the condition each one breaks.
pub fn mutants() -> Vec<(&'static str, RawType, Broken)> {
    use Broken::*;
    vec![
        ("no rectangles", RawType { n: 0, h: vec![], v: vec![], phi: vec![], u: vec![] }, Empty),
        ("negative n", with(|r| r.n = -2), Empty),
        ("n larger than the lists", with(|r| r.n = 3), Index),
        ("v list too long", with(|r| r.v = vec![3, 1, 1]), Index),
        (
            "empty first rectangle",
            with(|r| {
                r.h = vec![0, 5];
                r.phi = vec![[2, 1, 2, 2], [2, 2, 1, 3], [2, 3, 1, 1], [2, 4, 2, 1], [2, 5, 1, 2]];
                r.u = (1..=5).map(|k| [2, k, 1]).collect();
            }),
            Count,
        ),
        (
            "no vertical handles in the second rectangle",
            with(|r| {
                r.v = vec![5, 0];
                r.phi = vec![[1, 1, 1, 1], [1, 2, 1, 2], [1, 3, 1, 3], [2, 1, 1, 4], [2, 2, 1, 5]];
            }),
            Count,
        ),
        ("handle totals differ", with(|r| r.h = vec![3, 3]), Sum),
        ("phi source rectangle out of range", with(|r| r.phi[4] = [3, 1, 1, 2]), Index),
        ("phi source handle out of range", with(|r| r.phi[2] = [1, 4, 1, 1]), Index),
        ("phi target handle out of range", with(|r| r.phi[2] = [1, 3, 1, 4]), Index),
        ("phi target rectangle zero", with(|r| r.phi[2] = [1, 3, 0, 1]), Index),
        ("horizontal handle mapped twice", with(|r| r.phi[1] = [1, 1, 1, 3]), Bijection),
        ("vertical handle hit twice", with(|r| r.phi[2] = [1, 3, 1, 3]), Bijection),
        ("missing phi entry", with(|r| { r.phi.pop(); }), Bijection),
        ("second rectangle's handles collide", with(|r| r.phi[3] = [2, 1, 1, 2]), Bijection),
        ("zero sign", with(|r| r.u[0] = [1, 1, 0]), Sign),
        ("sign two", with(|r| r.u[3] = [2, 1, 2]), Sign),
        ("missing sign", with(|r| { r.u.pop(); }), Sign),
        ("sign given twice", with(|r| r.u[4] = [2, 1, 1]), Sign),
        ("sign for a nonexistent handle", with(|r| r.u[4] = [2, 3, 1]), Index),
    ]
}
