//! Small named examples used in documentation, tests and benchmarks.

use std::sync::Arc;

use crate::gates::GateStructure;
use crate::graph::Graph;
use crate::map::GraphMap;

pub fn rose2() -> Arc<Graph> {
    Arc::new(Graph::rose("R2", &["a", "b"]).expect("valid rose"))
}

pub fn rose3() -> Arc<Graph> {
    Arc::new(Graph::rose("R3", &["a", "b", "c"]).expect("valid rose"))
}

/// The Fibonacci map `a ↦ ab, b ↦ a`.
pub fn fibonacci() -> GraphMap {
    GraphMap::from_tokens("F", rose2(), &["a b", "a"]).expect("valid map")
}

/// `{a,b}, {~a}, {~b}`: the intrinsic gates of the Fibonacci map.
pub fn fibonacci_gates() -> GateStructure {
    GateStructure::from_tokens(rose2(), &["a b", "~a", "~b"]).expect("valid gates")
}

/// `{a,b}, {~a,~b}`: positive and negative directions.
pub fn sign_gates() -> GateStructure {
    GateStructure::sign_split(rose2())
}

/// The tribonacci map `a ↦ ab, b ↦ ac, c ↦ a`.
pub fn tribonacci() -> GraphMap {
    GraphMap::from_tokens("T", rose3(), &["a b", "a c", "a"]).expect("valid map")
}

/// A rank-3 setting where gate-stable elementary legalizers exist.
pub struct Rank3Example {
    /// `{a,b}, {c}, {~a}, {~b}, {~c}`.
    pub gates: GateStructure,
    /// Positive transition matrix, intrinsic gates equal to `gates`,
    /// connected gate-Whitehead graph, gate-stable, no periodic INP.
    pub f: GraphMap,
    /// Strongly expanding train track map with a periodic INP.
    pub h: GraphMap,
    /// A second map with the same properties as `f`.
    pub k: GraphMap,
}

pub fn rank3_example() -> Rank3Example {
    let g = rose3();
    Rank3Example {
        gates: GateStructure::from_tokens(g.clone(), &["a b", "c", "~a", "~b", "~c"])
            .expect("valid gates"),
        f: GraphMap::from_tokens("f", g.clone(), &["a c b a", "a c b", "c b ~a c"])
            .expect("valid map"),
        h: GraphMap::from_tokens("h", g.clone(), &["a c b a", "a c b", "c b a c"])
            .expect("valid map"),
        k: GraphMap::from_tokens("k", g, &["b c a", "b c a b", "c a ~b c"]).expect("valid map"),
    }
}
