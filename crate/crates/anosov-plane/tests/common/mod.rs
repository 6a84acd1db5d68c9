#![allow(dead_code)]

use anosov_type::geomtype::validate;
use anosov_type::{GeometricType, RawType};

pub const DEPTH: usize = 32;

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

pub fn t1() -> GeometricType {
    validate(&RawType { n: 1, h: vec![1], v: vec![1], phi: vec![[1, 1, 1, 1]], u: vec![[1, 1, 1]] }).unwrap()
}
