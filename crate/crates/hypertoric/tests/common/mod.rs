#![allow(dead_code)]

use std::collections::BTreeSet;

use hypertoric::{PolarizedArrangement, SignVector, Subset};

pub fn sv(s: &str) -> SignVector {
    s.parse().unwrap()
}

pub fn set(v: &[&str]) -> BTreeSet<SignVector> {
    v.iter().map(|s| sv(s)).collect()
}

/// Subset from 1-based digits, e.g. `"13"`.
pub fn x(s: &str) -> Subset {
    s.chars().map(|c| 1 << (c.to_digit(10).unwrap() - 1)).sum()
}

pub fn n4k2() -> PolarizedArrangement {
    PolarizedArrangement::from_json_str(include_str!("../../fixtures/n4k2.json")).unwrap()
}

#[allow(unused_imports)]
pub use hypertoric::random::random_arrangement;
