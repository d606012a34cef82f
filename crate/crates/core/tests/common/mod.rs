#![allow(dead_code)]

use bvc_core::graph::{generate, BipartiteGraph, GraphFamily};
use proptest::prelude::*;

pub fn random_graph(max_side: usize) -> impl Strategy<Value = BipartiteGraph> {
    (1..=max_side, 1..=max_side, 0.0..0.7f64, any::<u64>())
        .prop_map(|(a, b, p, seed)| generate(&GraphFamily::Random { a, b, p }, seed).unwrap())
}

pub fn graph(a: usize, b: usize, p: f64, seed: u64) -> BipartiteGraph {
    generate(&GraphFamily::Random { a, b, p }, seed).unwrap()
}

pub fn family(name: &str) -> BipartiteGraph {
    generate(&name.parse().unwrap(), 0).unwrap()
}
