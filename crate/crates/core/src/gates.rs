//! Gate structures, legality and the morphism predicates built on them.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::{Dir, Graph, VertexId};
use crate::map::{same_graph, GraphMap};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gate {
    pub vertex: VertexId,
    pub dirs: Vec<Dir>,
}

/// A partition of the directions at every vertex into gates.
///
/// Gates are stored sorted by vertex, then by their least direction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GateStructure {
    graph: Arc<Graph>,
    gates: Vec<Gate>,
    gate_of: Vec<usize>,
}

impl GateStructure {
    pub fn from_blocks(graph: Arc<Graph>, blocks: Vec<Vec<Dir>>) -> Result<Self> {
        let mut gate_of = vec![usize::MAX; graph.dir_count()];
        let mut gates = Vec::with_capacity(blocks.len());
        for mut block in blocks {
            block.sort();
            block.dedup();
            let Some(&first) = block.first() else {
                return Err(Error::PartitionViolated("empty gate".into()));
            };
            let vertex = graph.init(first);
            if let Some(&d) = block.iter().find(|&&d| graph.init(d) != vertex) {
                return Err(Error::PartitionViolated(format!(
                    "gate mixes vertices `{}` and `{}`",
                    graph.vertex_name(vertex),
                    graph.vertex_name(graph.init(d))
                )));
            }
            gates.push(Gate {
                vertex,
                dirs: block,
            });
        }
        gates.sort();
        for (i, g) in gates.iter().enumerate() {
            for &d in &g.dirs {
                if d.edge().0 as usize >= graph.edge_count() {
                    return Err(Error::PartitionViolated(
                        "direction outside the graph".into(),
                    ));
                }
                if gate_of[d.index()] != usize::MAX {
                    return Err(Error::PartitionViolated(format!(
                        "`{}` lies in two gates",
                        graph.dir_name(d)
                    )));
                }
                gate_of[d.index()] = i;
            }
        }
        if let Some(i) = gate_of.iter().position(|&g| g == usize::MAX) {
            return Err(Error::PartitionViolated(format!(
                "`{}` is in no gate",
                graph.dir_name(Dir::from_index(i))
            )));
        }
        Ok(GateStructure {
            graph,
            gates,
            gate_of,
        })
    }

    /// Parses gates given as token lists, e.g. `["a b", "~a", "~b"]`.
    pub fn from_tokens(graph: Arc<Graph>, blocks: &[&str]) -> Result<Self> {
        let b = blocks
            .iter()
            .map(|s| graph.parse_dirs(s))
            .collect::<Result<Vec<_>>>()?;
        GateStructure::from_blocks(graph, b)
    }

    /// Every direction in its own gate.
    pub fn discrete(graph: Arc<Graph>) -> Self {
        let blocks = graph.directions().into_iter().map(|d| vec![d]).collect();
        GateStructure::from_blocks(graph, blocks).expect("singletons partition")
    }

    /// Positive and reversed directions separated at every vertex.
    pub fn sign_split(graph: Arc<Graph>) -> Self {
        let mut blocks = Vec::new();
        for v in graph.vertices() {
            for rev in [false, true] {
                let b: Vec<Dir> = graph
                    .out_dirs(v)
                    .iter()
                    .copied()
                    .filter(|d| d.is_reversed() == rev)
                    .collect();
                if !b.is_empty() {
                    blocks.push(b);
                }
            }
        }
        GateStructure::from_blocks(graph, blocks).expect("sign classes partition")
    }

    /// Every gate structure on a small graph (product of set partitions).
    pub fn enumerate_all(graph: Arc<Graph>) -> Vec<GateStructure> {
        let mut per_vertex: Vec<Vec<Vec<Vec<Dir>>>> = Vec::new();
        for v in graph.vertices() {
            per_vertex.push(set_partitions(graph.out_dirs(v)));
        }
        let mut acc: Vec<Vec<Vec<Dir>>> = vec![Vec::new()];
        for parts in per_vertex {
            let mut next = Vec::new();
            for a in &acc {
                for p in &parts {
                    let mut x = a.clone();
                    x.extend(p.iter().cloned());
                    next.push(x);
                }
            }
            acc = next;
        }
        acc.into_iter()
            .map(|blocks| {
                GateStructure::from_blocks(graph.clone(), blocks).expect("valid partition")
            })
            .collect()
    }

    pub fn graph(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn gate(&self, i: usize) -> &Gate {
        &self.gates[i]
    }

    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }

    pub fn gate_of(&self, d: Dir) -> usize {
        self.gate_of[d.index()]
    }

    pub fn gates_at(&self, v: VertexId) -> Vec<usize> {
        (0..self.gates.len())
            .filter(|&i| self.gates[i].vertex == v)
            .collect()
    }

    pub fn gate_count_at(&self, v: VertexId) -> usize {
        self.gates.iter().filter(|g| g.vertex == v).count()
    }

    pub fn same_gate(&self, a: Dir, b: Dir) -> bool {
        self.gate_of(a) == self.gate_of(b)
    }

    /// Legality of a turn; degenerate turns are illegal.
    pub fn is_legal_turn(&self, a: Dir, b: Dir) -> Result<bool> {
        if self.graph.init(a) != self.graph.init(b) {
            return Err(Error::TurnAcrossVertices);
        }
        Ok(!self.same_gate(a, b))
    }

    /// Every crossed turn `(~e_i, e_{i+1})` is legal.
    pub fn is_legal_dirs(&self, dirs: &[Dir]) -> bool {
        dirs.windows(2)
            .all(|w| !self.same_gate(w[0].reversed(), w[1]))
    }

    pub fn is_legal_path(&self, path: &crate::graph::EdgePath) -> bool {
        self.is_legal_dirs(path.dirs())
    }

    /// Number of illegal turns crossed by a direction sequence.
    pub fn illegal_turn_count(&self, dirs: &[Dir]) -> usize {
        dirs.windows(2)
            .filter(|w| self.same_gate(w[0].reversed(), w[1]))
            .count()
    }

    /// Directions that may legally follow `last`.
    pub fn continuations(&self, last: Dir) -> impl Iterator<Item = Dir> + '_ {
        let back = self.gate_of(last.reversed());
        self.graph
            .out_dirs(self.graph.term(last))
            .iter()
            .copied()
            .filter(move |&d| self.gate_of(d) != back)
    }

    /// Every gate of `self` lies inside a gate of `coarser`.
    pub fn refines(&self, coarser: &GateStructure) -> Result<bool> {
        self.require_graph(&coarser.graph)?;
        Ok(self.gates.iter().all(|g| {
            g.dirs
                .iter()
                .all(|&d| coarser.gate_of(d) == coarser.gate_of(g.dirs[0]))
        }))
    }

    pub(crate) fn require_graph(&self, g: &Arc<Graph>) -> Result<()> {
        if same_graph(&self.graph, g) {
            Ok(())
        } else {
            Err(Error::GraphMismatch {
                expected: g.name().to_string(),
                found: self.graph.name().to_string(),
            })
        }
    }

    pub fn gate_label(&self, i: usize) -> String {
        let names: Vec<String> = self.gates[i]
            .dirs
            .iter()
            .map(|&d| self.graph.dir_name(d))
            .collect();
        format!("{{{}}}", names.join(","))
    }

    pub fn blocks_as_tokens(&self) -> Vec<(String, Vec<String>)> {
        self.gates
            .iter()
            .map(|g| {
                (
                    self.graph.vertex_name(g.vertex).to_string(),
                    g.dirs.iter().map(|&d| self.graph.dir_name(d)).collect(),
                )
            })
            .collect()
    }
}

fn set_partitions(items: &[Dir]) -> Vec<Vec<Vec<Dir>>> {
    let mut out: Vec<Vec<Vec<Dir>>> = vec![Vec::new()];
    for &x in items {
        let mut next = Vec::new();
        for p in &out {
            for i in 0..p.len() {
                let mut q = p.clone();
                q[i].push(x);
                next.push(q);
            }
            let mut q = p.clone();
            q.push(vec![x]);
            next.push(q);
        }
        out = next;
    }
    out
}

/// The intrinsic gate structure: `e ~ e'` iff `Df^t(e) = Df^t(e')` for some `t ≥ 1`.
///
/// Coincidence persists under further iteration, so the partition by
/// `Df^T` with `T` the number of directions is the limit.
pub fn intrinsic_gates(map: &GraphMap) -> Result<GateStructure> {
    let graph = map.require_self_map()?.clone();
    let dirs = graph.directions();
    let steps = dirs.len();
    let iterate = |d: Dir, t: usize| (0..t).fold(d, |x, _| map.df(x));
    let partition = |t: usize| {
        let mut classes: BTreeMap<(VertexId, Dir), Vec<Dir>> = BTreeMap::new();
        for &d in &dirs {
            classes
                .entry((graph.init(d), iterate(d, t)))
                .or_default()
                .push(d);
        }
        let mut blocks: Vec<Vec<Dir>> = classes.into_values().collect();
        blocks.sort();
        blocks
    };
    let blocks = partition(steps);
    if blocks != partition(steps + 1) {
        return Err(Error::Internal(
            "intrinsic gate partition did not stabilize".into(),
        ));
    }
    GateStructure::from_blocks(graph, blocks)
}

/// Outcome of asking whether `Df` maps gates into gates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GateMorphism {
    /// Target gate index for every source gate index.
    Induced(Vec<usize>),
    /// A source gate whose directions land in more than one target gate.
    Violation { gate: usize },
}

impl GateMorphism {
    pub fn induced(&self) -> Option<&[usize]> {
        match self {
            GateMorphism::Induced(m) => Some(m),
            GateMorphism::Violation { .. } => None,
        }
    }
}

fn check_structures(map: &GraphMap, src: &GateStructure, tgt: &GateStructure) -> Result<()> {
    src.require_graph(map.source())?;
    tgt.require_graph(map.target())
}

pub fn gate_morphism(
    map: &GraphMap,
    src: &GateStructure,
    tgt: &GateStructure,
) -> Result<GateMorphism> {
    check_structures(map, src, tgt)?;
    let mut induced = Vec::with_capacity(src.gate_count());
    for (i, g) in src.gates.iter().enumerate() {
        let target = tgt.gate_of(map.df(g.dirs[0]));
        if g.dirs.iter().any(|&d| tgt.gate_of(map.df(d)) != target) {
            return Ok(GateMorphism::Violation { gate: i });
        }
        induced.push(target);
    }
    Ok(GateMorphism::Induced(induced))
}

/// Legal turns go to legal turns and every edge image is legal.
pub fn is_train_track_morphism(
    map: &GraphMap,
    src: &GateStructure,
    tgt: &GateStructure,
) -> Result<bool> {
    check_structures(map, src, tgt)?;
    let sg = map.source();
    for e in sg.edges() {
        if !tgt.is_legal_dirs(map.edge_image(e)) {
            return Ok(false);
        }
    }
    for v in sg.vertices() {
        let out = sg.out_dirs(v);
        for (i, &a) in out.iter().enumerate() {
            for &b in &out[i + 1..] {
                if !src.same_gate(a, b) && tgt.same_gate(map.df(a), map.df(b)) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Fixes every vertex and every gate.
pub fn is_gate_stable(map: &GraphMap, gates: &GateStructure) -> Result<bool> {
    let graph = map.require_self_map()?;
    gates.require_graph(graph)?;
    if graph.vertices().any(|v| map.vertex_image(v) != v) {
        return Ok(false);
    }
    Ok(match gate_morphism(map, gates, gates)? {
        GateMorphism::Induced(m) => m.iter().enumerate().all(|(i, &j)| i == j),
        GateMorphism::Violation { .. } => false,
    })
}
