//! Finite graphs with an edge involution, edge paths and free reduction.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub u32);

/// An oriented edge germ: a positive edge or its reversal.
///
/// The derived ordering lists every positive direction before every reversed
/// one, each group in edge declaration order. All canonical orderings in the
/// crate (gates, paths, long turns) are built on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dir {
    rev: bool,
    edge: EdgeId,
}

impl Dir {
    pub fn pos(edge: EdgeId) -> Self {
        Dir { rev: false, edge }
    }

    pub fn neg(edge: EdgeId) -> Self {
        Dir { rev: true, edge }
    }

    pub fn edge(self) -> EdgeId {
        self.edge
    }

    pub fn is_reversed(self) -> bool {
        self.rev
    }

    pub fn reversed(self) -> Self {
        Dir {
            rev: !self.rev,
            edge: self.edge,
        }
    }

    /// Dense index in `0..2 * edge_count`, pairing `e` and `~e`.
    pub fn index(self) -> usize {
        self.edge.0 as usize * 2 + self.rev as usize
    }

    pub fn from_index(i: usize) -> Self {
        Dir {
            rev: i % 2 == 1,
            edge: EdgeId((i / 2) as u32),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct EdgeData {
    name: String,
    from: VertexId,
    to: VertexId,
}

/// A finite connected graph without valence-one vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    name: String,
    vertices: Vec<String>,
    edges: Vec<EdgeData>,
    vertex_index: HashMap<String, VertexId>,
    edge_index: HashMap<String, EdgeId>,
    out: Vec<Vec<Dir>>,
}

fn valid_token(s: &str) -> bool {
    !s.is_empty()
        && !s.starts_with('~')
        && s.chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

impl Graph {
    /// Builds and validates a graph. Edges are `(label, from, to)` by vertex name.
    pub fn new<S: AsRef<str>>(name: &str, vertices: &[S], edges: &[(S, S, S)]) -> Result<Self> {
        let mut vertex_index = HashMap::new();
        let mut vnames = Vec::new();
        for v in vertices {
            let v = v.as_ref();
            if !valid_token(v) {
                return Err(Error::InvalidGraph(format!("bad vertex name `{v}`")));
            }
            if vertex_index
                .insert(v.to_string(), VertexId(vnames.len() as u32))
                .is_some()
            {
                return Err(Error::InvalidGraph(format!("duplicate vertex `{v}`")));
            }
            vnames.push(v.to_string());
        }
        if vnames.is_empty() {
            return Err(Error::InvalidGraph("graph has no vertices".into()));
        }
        let mut edge_index = HashMap::new();
        let mut edata = Vec::new();
        for (label, from, to) in edges {
            let (label, from, to) = (label.as_ref(), from.as_ref(), to.as_ref());
            if !valid_token(label) {
                return Err(Error::InvalidGraph(format!("bad edge label `{label}`")));
            }
            let lookup = |v: &str| {
                vertex_index.get(v).copied().ok_or_else(|| {
                    Error::InvalidGraph(format!("edge `{label}` uses undeclared vertex `{v}`"))
                })
            };
            let (f, t) = (lookup(from)?, lookup(to)?);
            if edge_index
                .insert(label.to_string(), EdgeId(edata.len() as u32))
                .is_some()
            {
                return Err(Error::InvalidGraph(format!("duplicate edge `{label}`")));
            }
            edata.push(EdgeData {
                name: label.to_string(),
                from: f,
                to: t,
            });
        }
        let mut out = vec![Vec::new(); vnames.len()];
        for (i, e) in edata.iter().enumerate() {
            let id = EdgeId(i as u32);
            out[e.from.0 as usize].push(Dir::pos(id));
            out[e.to.0 as usize].push(Dir::neg(id));
        }
        for dirs in &mut out {
            dirs.sort();
        }
        let g = Graph {
            name: name.to_string(),
            vertices: vnames,
            edges: edata,
            vertex_index,
            edge_index,
            out,
        };
        for (i, dirs) in g.out.iter().enumerate() {
            match dirs.len() {
                0 => {
                    return Err(Error::InvalidGraph(format!(
                        "dangling vertex `{}`",
                        g.vertices[i]
                    )))
                }
                1 => {
                    return Err(Error::InvalidGraph(format!(
                        "valence-1 vertex `{}`",
                        g.vertices[i]
                    )))
                }
                _ => {}
            }
        }
        if !g.is_connected() {
            return Err(Error::InvalidGraph("graph is not connected".into()));
        }
        Ok(g)
    }

    /// The rose with one vertex `v` and the given loop labels.
    pub fn rose(name: &str, labels: &[&str]) -> Result<Self> {
        let edges: Vec<(&str, &str, &str)> = labels.iter().map(|l| (*l, "v", "v")).collect();
        Graph::new(name, &["v"], &edges)
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.vertices.len()];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &d in &self.out[v] {
                let w = self.term(d).0 as usize;
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn dir_count(&self) -> usize {
        2 * self.edges.len()
    }

    /// First Betti number.
    pub fn rank(&self) -> usize {
        self.edges.len() + 1 - self.vertices.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.vertices.len() as u32).map(VertexId)
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.edges.len() as u32).map(EdgeId)
    }

    /// All directions in canonical order.
    pub fn directions(&self) -> Vec<Dir> {
        let mut v: Vec<Dir> = self
            .edges()
            .flat_map(|e| [Dir::pos(e), Dir::neg(e)])
            .collect();
        v.sort();
        v
    }

    /// Directions with initial vertex `v`, canonically ordered.
    pub fn out_dirs(&self, v: VertexId) -> &[Dir] {
        &self.out[v.0 as usize]
    }

    pub fn init(&self, d: Dir) -> VertexId {
        let e = &self.edges[d.edge.0 as usize];
        if d.rev {
            e.to
        } else {
            e.from
        }
    }

    pub fn term(&self, d: Dir) -> VertexId {
        self.init(d.reversed())
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v.0 as usize]
    }

    pub fn edge_name(&self, e: EdgeId) -> &str {
        &self.edges[e.0 as usize].name
    }

    pub fn vertex(&self, name: &str) -> Option<VertexId> {
        self.vertex_index.get(name).copied()
    }

    pub fn edge(&self, name: &str) -> Option<EdgeId> {
        self.edge_index.get(name).copied()
    }

    /// Endpoints `(from, to)` of a positive edge.
    pub fn edge_ends(&self, e: EdgeId) -> (VertexId, VertexId) {
        let d = &self.edges[e.0 as usize];
        (d.from, d.to)
    }

    /// Parses `a` or `~a`.
    pub fn parse_dir(&self, tok: &str) -> Result<Dir> {
        let (rev, name) = match tok.strip_prefix('~') {
            Some(rest) => (true, rest),
            None => (false, tok),
        };
        let e = self.edge(name).ok_or_else(|| {
            Error::InvalidPath(format!("unknown edge `{name}` in graph `{}`", self.name))
        })?;
        Ok(if rev { Dir::neg(e) } else { Dir::pos(e) })
    }

    /// Parses a whitespace separated token list.
    pub fn parse_dirs(&self, s: &str) -> Result<Vec<Dir>> {
        s.split_whitespace().map(|t| self.parse_dir(t)).collect()
    }

    pub fn dir_name(&self, d: Dir) -> String {
        let n = self.edge_name(d.edge);
        if d.rev {
            format!("~{n}")
        } else {
            n.to_string()
        }
    }

    pub fn fmt_dirs(&self, dirs: &[Dir]) -> String {
        dirs.iter()
            .map(|&d| self.dir_name(d))
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// True when consecutive directions are compatible.
    pub fn is_path(&self, dirs: &[Dir]) -> bool {
        dirs.windows(2).all(|w| self.term(w[0]) == self.init(w[1]))
    }

    /// Builds a path from tokens; an empty token list needs an anchor vertex.
    pub fn path(&self, tokens: &str) -> Result<EdgePath> {
        let dirs = self.parse_dirs(tokens)?;
        let start = dirs.first().map(|&d| self.init(d)).unwrap_or(VertexId(0));
        EdgePath::new(self, start, dirs)
    }
}

/// A finite edge path anchored at a vertex; may be empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgePath {
    start: VertexId,
    end: VertexId,
    dirs: Vec<Dir>,
}

impl EdgePath {
    pub fn new(graph: &Graph, start: VertexId, dirs: Vec<Dir>) -> Result<Self> {
        if start.0 as usize >= graph.vertex_count() {
            return Err(Error::InvalidPath("anchor vertex out of range".into()));
        }
        if dirs.iter().any(|d| d.edge.0 as usize >= graph.edge_count()) {
            return Err(Error::InvalidPath("edge out of range".into()));
        }
        if let Some(&first) = dirs.first() {
            if graph.init(first) != start {
                return Err(Error::InvalidPath(format!(
                    "path starts with `{}` away from its anchor `{}`",
                    graph.dir_name(first),
                    graph.vertex_name(start)
                )));
            }
        }
        if let Some(i) = dirs
            .windows(2)
            .position(|w| graph.term(w[0]) != graph.init(w[1]))
        {
            return Err(Error::InvalidPath(format!(
                "`{}` then `{}` are not consecutive",
                graph.dir_name(dirs[i]),
                graph.dir_name(dirs[i + 1])
            )));
        }
        let end = dirs.last().map(|&d| graph.term(d)).unwrap_or(start);
        Ok(EdgePath { start, end, dirs })
    }

    pub fn empty(at: VertexId) -> Self {
        EdgePath {
            start: at,
            end: at,
            dirs: Vec::new(),
        }
    }

    pub(crate) fn from_parts(start: VertexId, end: VertexId, dirs: Vec<Dir>) -> Self {
        EdgePath { start, end, dirs }
    }

    pub fn start(&self) -> VertexId {
        self.start
    }

    pub fn end(&self) -> VertexId {
        self.end
    }

    pub fn dirs(&self) -> &[Dir] {
        &self.dirs
    }

    pub fn into_dirs(self) -> Vec<Dir> {
        self.dirs
    }

    pub fn len(&self) -> usize {
        self.dirs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dirs.is_empty()
    }

    pub fn reversed(&self) -> EdgePath {
        EdgePath {
            start: self.end,
            end: self.start,
            dirs: reverse_dirs(&self.dirs),
        }
    }

    /// Concatenation; `None` when the endpoints do not match.
    pub fn concat(&self, other: &EdgePath) -> Option<EdgePath> {
        if self.end != other.start {
            return None;
        }
        let mut dirs = self.dirs.clone();
        dirs.extend_from_slice(&other.dirs);
        Some(EdgePath {
            start: self.start,
            end: other.end,
            dirs,
        })
    }

    /// The reduced representative `[γ]`.
    pub fn reduced(&self) -> EdgePath {
        EdgePath {
            start: self.start,
            end: self.end,
            dirs: reduce_dirs(&self.dirs),
        }
    }

    pub fn is_reduced(&self) -> bool {
        self.dirs.windows(2).all(|w| w[1] != w[0].reversed())
    }

    pub fn display(&self, graph: &Graph) -> String {
        if self.dirs.is_empty() {
            format!("(empty at {})", graph.vertex_name(self.start))
        } else {
            graph.fmt_dirs(&self.dirs)
        }
    }
}

impl fmt::Display for Dir {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rev {
            write!(f, "~e{}", self.edge.0)
        } else {
            write!(f, "e{}", self.edge.0)
        }
    }
}

pub fn reverse_dirs(dirs: &[Dir]) -> Vec<Dir> {
    dirs.iter().rev().map(|d| d.reversed()).collect()
}

/// Free reduction by a single stack pass.
pub fn reduce_dirs(dirs: &[Dir]) -> Vec<Dir> {
    let mut out: Vec<Dir> = Vec::with_capacity(dirs.len());
    for &d in dirs {
        if out.last() == Some(&d.reversed()) {
            out.pop();
        } else {
            out.push(d);
        }
    }
    out
}

/// Reduces a path; an empty result stays anchored at the start vertex.
pub fn reduce_path(path: &EdgePath) -> EdgePath {
    path.reduced()
}
