#![allow(dead_code)]

use std::sync::Arc;

use ttk::examples::{fibonacci, rank3_example, rose2, tribonacci};
use ttk::survey::random_positive_automorphism;
use ttk::{Graph, GraphMap};

pub fn theta() -> Arc<Graph> {
    Arc::new(
        Graph::new(
            "theta",
            &["u", "w"],
            &[("a", "u", "w"), ("b", "u", "w"), ("c", "u", "w")],
        )
        .unwrap(),
    )
}

pub fn map(name: &str, graph: &Arc<Graph>, images: &[&str]) -> GraphMap {
    GraphMap::from_tokens(name, graph.clone(), images).unwrap()
}

/// Self-maps of the rank-2 rose.
pub fn rank2_maps() -> Vec<GraphMap> {
    let r = rose2();
    let f = fibonacci();
    vec![
        f.clone(),
        f.power(2).unwrap().with_name("F2"),
        f.power(3).unwrap().with_name("F3"),
        map("K", &r, &["a b b", "a b"]),
        map("L", &r, &["a a b", "a b"]),
        map("P", &r, &["b", "a"]),
        map("N", &r, &["a b", "b"]),
        map("M", &r, &["a ~b", "a"]),
        map("D", &r, &["a b", "a b"]),
        map("I", &r, &["~a", "b"]),
    ]
}

/// Self-maps used across property tests: ranks 2 and 3 and the theta graph.
pub fn self_maps() -> Vec<GraphMap> {
    let r3 = rank3_example();
    let th = theta();
    let mut maps = rank2_maps();
    maps.extend([
        tribonacci(),
        r3.f.clone(),
        r3.h.clone(),
        map("N3", &th, &["a ~b a", "b", "c ~a b"]),
        map("S3", &th, &["b", "c", "a"]),
    ]);
    maps.extend(small_random_automorphisms(6));
    maps
}

/// Seeded random positive automorphisms of ranks 2 and 3 with volume at
/// most 40, so that composites stay small.
pub fn small_random_automorphisms(count: usize) -> Vec<GraphMap> {
    (0..)
        .map(|i| random_positive_automorphism(2 + (i % 2) as usize, 17, i).unwrap())
        .filter(|m| m.cancellation_bound() <= 40)
        .take(count)
        .collect()
}

/// Composable pairs of self-maps on a common graph.
pub fn self_map_pairs() -> Vec<(GraphMap, GraphMap)> {
    let maps = self_maps();
    let mut pairs = Vec::new();
    for f in &maps {
        for g in &maps {
            if (Arc::ptr_eq(f.source(), g.source()) || f.source().name() == g.source().name())
                && GraphMap::compose(g, f).is_ok()
            {
                pairs.push((f.clone(), g.clone()));
            }
        }
    }
    pairs
}
