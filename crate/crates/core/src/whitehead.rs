//! Gate-Whitehead graphs and gate index lists.

use std::collections::BTreeSet;
use std::fmt;

use num::rational::Ratio;
use num::Zero;

use crate::error::{Error, Result};
use crate::gates::{gate_morphism, GateMorphism, GateStructure};
use crate::graph::{Dir, VertexId};
use crate::map::GraphMap;

/// An unordered pair of distinct gates, stored with the smaller index first.
pub type GateTurn = (usize, usize);

fn gate_turn(a: usize, b: usize) -> Option<GateTurn> {
    match a.cmp(&b) {
        std::cmp::Ordering::Less => Some((a, b)),
        std::cmp::Ordering::Greater => Some((b, a)),
        std::cmp::Ordering::Equal => None,
    }
}

/// Gate turns crossed by a direction sequence.
pub fn crossed_gate_turns(gates: &GateStructure, dirs: &[Dir], out: &mut BTreeSet<GateTurn>) {
    for w in dirs.windows(2) {
        if let Some(t) = gate_turn(gates.gate_of(w[0].reversed()), gates.gate_of(w[1])) {
            out.insert(t);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GateWhiteheadGraph {
    pub vertex: VertexId,
    /// Gate indices at `vertex`, ascending.
    pub gates: Vec<usize>,
    pub edges: BTreeSet<GateTurn>,
}

impl GateWhiteheadGraph {
    pub fn is_connected(&self) -> bool {
        let Some(&root) = self.gates.first() else {
            return true;
        };
        let mut seen = BTreeSet::from([root]);
        let mut stack = vec![root];
        while let Some(g) = stack.pop() {
            for &(a, b) in &self.edges {
                let other = if a == g {
                    b
                } else if b == g {
                    a
                } else {
                    continue;
                };
                if seen.insert(other) {
                    stack.push(other);
                }
            }
        }
        seen.len() == self.gates.len()
    }

    pub fn is_subgraph_of(&self, other: &GateWhiteheadGraph) -> bool {
        self.vertex == other.vertex && self.edges.is_subset(&other.edges)
    }
}

fn induced_gate_map(map: &GraphMap, gates: &GateStructure) -> Result<Vec<usize>> {
    map.require_self_map()?;
    match gate_morphism(map, gates, gates)? {
        GateMorphism::Induced(m) => Ok(m),
        GateMorphism::Violation { gate } => Err(Error::NotGateMorphism(gates.gate_label(gate))),
    }
}

/// All gate turns crossed by some `f^t(e)`, `t ≥ 1`.
///
/// Seeds with the turns inside each `f(e)` and closes under the induced
/// action on gate turns.
pub fn whitehead_turns(map: &GraphMap, gates: &GateStructure) -> Result<BTreeSet<GateTurn>> {
    let fg = induced_gate_map(map, gates)?;
    let mut turns = BTreeSet::new();
    for e in map.source().edges() {
        crossed_gate_turns(gates, map.edge_image(e), &mut turns);
    }
    let mut stack: Vec<GateTurn> = turns.iter().copied().collect();
    while let Some((a, b)) = stack.pop() {
        if let Some(t) = gate_turn(fg[a], fg[b]) {
            if turns.insert(t) {
                stack.push(t);
            }
        }
    }
    Ok(turns)
}

fn project(gates: &GateStructure, v: VertexId, turns: &BTreeSet<GateTurn>) -> GateWhiteheadGraph {
    GateWhiteheadGraph {
        vertex: v,
        gates: gates.gates_at(v),
        edges: turns
            .iter()
            .copied()
            .filter(|&(a, _)| gates.gate(a).vertex == v)
            .collect(),
    }
}

pub fn gate_whitehead_graph(
    map: &GraphMap,
    gates: &GateStructure,
    v: VertexId,
) -> Result<GateWhiteheadGraph> {
    let turns = whitehead_turns(map, gates)?;
    Ok(project(gates, v, &turns))
}

/// Gate-Whitehead graphs at every vertex, in vertex order.
pub fn gate_whitehead_graphs(
    map: &GraphMap,
    gates: &GateStructure,
) -> Result<Vec<GateWhiteheadGraph>> {
    let turns = whitehead_turns(map, gates)?;
    Ok(map
        .source()
        .vertices()
        .map(|v| project(gates, v, &turns))
        .collect())
}

/// Periodic vertices carrying at least three gates.
pub fn essential_vertices(map: &GraphMap, gates: &GateStructure) -> Result<Vec<VertexId>> {
    gates.require_graph(map.require_self_map()?)?;
    Ok(map
        .periodic_vertices()?
        .into_iter()
        .filter(|&v| gates.gate_count_at(v) >= 3)
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexEntry {
    pub vertex: VertexId,
    pub vertex_name: String,
    pub gate_count: usize,
    pub index: Ratio<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexReport {
    /// Sorted by decreasing index, ties by vertex.
    pub entries: Vec<IndexEntry>,
    pub total: Ratio<i64>,
    pub rank: usize,
    pub certified_stable: bool,
}

impl IndexReport {
    pub fn indices(&self) -> Vec<Ratio<i64>> {
        self.entries.iter().map(|e| e.index).collect()
    }

    /// The list as text, e.g. `[1, 1/2]`.
    pub fn list_string(&self) -> String {
        let parts: Vec<String> = self.entries.iter().map(|e| e.index.to_string()).collect();
        format!("[{}]", parts.join(", "))
    }

    pub fn within_bound(&self) -> bool {
        self.total <= Ratio::from_integer(self.rank as i64 - 1)
    }
}

impl fmt::Display for IndexReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} sum {} rank {}",
            self.list_string(),
            self.total,
            self.rank
        )
    }
}

/// Index `g(v)/2 − 1` at every essential vertex.
pub fn gate_index_list(map: &GraphMap, gates: &GateStructure) -> Result<IndexReport> {
    let graph = map.require_self_map()?;
    let mut entries: Vec<IndexEntry> = essential_vertices(map, gates)?
        .into_iter()
        .map(|v| {
            let g = gates.gate_count_at(v);
            IndexEntry {
                vertex: v,
                vertex_name: graph.vertex_name(v).to_string(),
                gate_count: g,
                index: Ratio::new(g as i64, 2) - 1,
            }
        })
        .collect();
    entries.sort_by(|a, b| b.index.cmp(&a.index).then(a.vertex.cmp(&b.vertex)));
    let total = entries.iter().fold(Ratio::zero(), |acc, e| acc + e.index);
    Ok(IndexReport {
        entries,
        total,
        rank: graph.rank(),
        certified_stable: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use std::sync::Arc;

    fn setup() -> (Arc<Graph>, GraphMap, GateStructure) {
        let g = Arc::new(Graph::rose("R2", &["a", "b"]).unwrap());
        let f = GraphMap::from_tokens("F", g.clone(), &["a b", "a"]).unwrap();
        let gf = GateStructure::from_tokens(g.clone(), &["a b", "~a", "~b"]).unwrap();
        (g, f, gf)
    }

    fn brute_force(map: &GraphMap, gates: &GateStructure, v: VertexId) -> BTreeSet<GateTurn> {
        let all_turns = gates.gates_at(v).len().pow(2);
        let mut turns = BTreeSet::new();
        for t in 1..=all_turns + 1 {
            let ft = map.power(t).unwrap();
            for e in map.source().edges() {
                crossed_gate_turns(gates, ft.edge_image(e), &mut turns);
            }
        }
        turns
            .into_iter()
            .filter(|&(a, _)| gates.gate(a).vertex == v)
            .collect()
    }

    #[test]
    fn fibonacci_whitehead_graph() {
        let (g, f, gf) = setup();
        let v = g.vertex("v").unwrap();
        let wh = gate_whitehead_graph(&f, &gf, v).unwrap();
        let idx = |s: &str| gf.gate_of(g.parse_dir(s).unwrap());
        let expect: BTreeSet<GateTurn> = [
            gate_turn(idx("~a"), idx("a")).unwrap(),
            gate_turn(idx("~b"), idx("a")).unwrap(),
        ]
        .into();
        assert_eq!(wh.edges, expect);
        assert!(wh.is_connected());
        assert_eq!(wh.edges, brute_force(&f, &gf, v));
        let f2 = f.power(2).unwrap();
        assert_eq!(gate_whitehead_graph(&f2, &gf, v).unwrap().edges, expect);
    }

    #[test]
    fn identity_has_empty_whitehead_graph() {
        let (g, _, _) = setup();
        let id = GraphMap::identity(g.clone());
        let wh = gate_whitehead_graph(
            &id,
            &GateStructure::discrete(g.clone()),
            g.vertex("v").unwrap(),
        )
        .unwrap();
        assert!(wh.edges.is_empty());
        assert!(!wh.is_connected());
    }

    #[test]
    fn refuses_non_gate_morphisms() {
        let (g, _, _) = setup();
        let swap = GraphMap::from_tokens("s", g.clone(), &["b", "~a"]).unwrap();
        let gs = GateStructure::from_tokens(g, &["a b", "~a", "~b"]).unwrap();
        assert!(matches!(
            whitehead_turns(&swap, &gs),
            Err(Error::NotGateMorphism(_))
        ));
    }

    #[test]
    fn index_lists() {
        let (g, f, gf) = setup();
        let r = gate_index_list(&f, &gf).unwrap();
        assert_eq!(r.indices(), vec![Ratio::new(1, 2)]);
        assert_eq!(r.list_string(), "[1/2]");
        assert!(r.within_bound());
        let pm = GateStructure::sign_split(g);
        assert!(gate_index_list(&f, &pm).unwrap().entries.is_empty());
    }

    #[test]
    fn index_list_on_two_fixed_vertices() {
        // Two vertices joined by four edges, with a loop at u for a fourth gate.
        let g = Arc::new(
            Graph::new(
                "T",
                &["u", "w"],
                &[
                    ("a", "u", "w"),
                    ("b", "u", "w"),
                    ("c", "u", "w"),
                    ("d", "u", "u"),
                ],
            )
            .unwrap(),
        );
        let id = GraphMap::identity(g.clone());
        let gates =
            GateStructure::from_tokens(g.clone(), &["a", "b", "c", "d ~d", "~a", "~b", "~c"])
                .unwrap();
        let r = gate_index_list(&id, &gates).unwrap();
        assert_eq!(r.list_string(), "[1, 1/2]");
        let gates =
            GateStructure::from_tokens(g, &["a", "b", "c", "d", "~d", "~a", "~b", "~c"]).unwrap();
        let r = gate_index_list(&id, &gates).unwrap();
        assert_eq!(r.indices(), vec![Ratio::new(3, 2), Ratio::new(1, 2)]);
        assert_eq!(r.list_string(), "[3/2, 1/2]");
    }

    #[test]
    fn non_periodic_vertex_is_not_essential() {
        let g = Arc::new(
            Graph::new(
                "T",
                &["u", "w"],
                &[("a", "u", "w"), ("b", "u", "w"), ("c", "u", "w")],
            )
            .unwrap(),
        );
        // Every image is a loop at u, so w is not periodic.
        let f = GraphMap::from_tokens("f", g.clone(), &["a ~b", "b ~c", "c ~a"]).unwrap();
        let gates = GateStructure::discrete(g.clone());
        let ess = essential_vertices(&f, &gates).unwrap();
        assert_eq!(ess, vec![g.vertex("u").unwrap()]);
    }
}
