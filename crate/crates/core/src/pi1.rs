//! Markings and the decision whether a self-map induces a π1-automorphism.

use std::collections::{HashMap, VecDeque};

use num::{BigInt, Signed, Zero};

use crate::error::{Error, Result};
use crate::graph::{reduce_dirs, Dir, EdgeId, Graph, VertexId};
use crate::map::GraphMap;

/// A letter of a free basis, possibly inverted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub gen: u32,
    pub inv: bool,
}

impl Letter {
    pub fn inverse(self) -> Self {
        Letter {
            gen: self.gen,
            inv: !self.inv,
        }
    }
}

pub type Word = Vec<Letter>;

pub fn reduce_word(w: &[Letter]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &l in w {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

pub fn invert_word(w: &[Letter]) -> Word {
    w.iter().rev().map(|l| l.inverse()).collect()
}

/// Parses `a ~b c` style words over the given generator names.
pub fn parse_word(names: &[&str], s: &str) -> Option<Word> {
    s.split_whitespace()
        .map(|t| {
            let (inv, n) = t.strip_prefix('~').map_or((false, t), |r| (true, r));
            names
                .iter()
                .position(|x| *x == n)
                .map(|g| Letter { gen: g as u32, inv })
        })
        .collect()
}

pub fn format_word(names: &[String], w: &[Letter]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.iter()
        .map(|l| {
            let n = &names[l.gen as usize];
            if l.inv {
                format!("~{n}")
            } else {
                n.clone()
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Breadth-first spanning tree from the lowest vertex, with one basis loop
/// per non-tree edge.
#[derive(Debug, Clone)]
pub struct MarkedBasis {
    base: VertexId,
    tree: Vec<bool>,
    /// `tree_path[v]`: reduced tree path from the base vertex to `v`.
    tree_path: Vec<Vec<Dir>>,
    generators: Vec<EdgeId>,
    gen_of_edge: Vec<Option<u32>>,
    loops: Vec<Vec<Dir>>,
}

impl MarkedBasis {
    pub fn new(graph: &Graph) -> Self {
        let n = graph.vertex_count();
        let base = VertexId(0);
        let mut tree = vec![false; graph.edge_count()];
        let mut tree_path: Vec<Option<Vec<Dir>>> = vec![None; n];
        tree_path[0] = Some(Vec::new());
        let mut queue = VecDeque::from([base]);
        while let Some(v) = queue.pop_front() {
            for &d in graph.out_dirs(v) {
                let w = graph.term(d);
                if tree_path[w.0 as usize].is_none() {
                    tree[d.edge().0 as usize] = true;
                    let mut p = tree_path[v.0 as usize].clone().unwrap();
                    p.push(d);
                    tree_path[w.0 as usize] = Some(p);
                    queue.push_back(w);
                }
            }
        }
        let tree_path: Vec<Vec<Dir>> = tree_path.into_iter().map(Option::unwrap).collect();
        let mut generators = Vec::new();
        let mut gen_of_edge = vec![None; graph.edge_count()];
        let mut loops = Vec::new();
        for e in graph.edges() {
            if tree[e.0 as usize] {
                continue;
            }
            gen_of_edge[e.0 as usize] = Some(generators.len() as u32);
            generators.push(e);
            let (from, to) = graph.edge_ends(e);
            let mut l = tree_path[from.0 as usize].clone();
            l.push(Dir::pos(e));
            l.extend(tree_path[to.0 as usize].iter().rev().map(|d| d.reversed()));
            loops.push(reduce_dirs(&l));
        }
        MarkedBasis {
            base,
            tree,
            tree_path,
            generators,
            gen_of_edge,
            loops,
        }
    }

    pub fn base(&self) -> VertexId {
        self.base
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn is_tree_edge(&self, e: EdgeId) -> bool {
        self.tree[e.0 as usize]
    }

    pub fn loops(&self) -> &[Vec<Dir>] {
        &self.loops
    }

    pub fn generator_names(&self, graph: &Graph) -> Vec<String> {
        self.generators
            .iter()
            .map(|&e| graph.edge_name(e).to_string())
            .collect()
    }

    /// Reads a loop at the base vertex as a reduced word: every crossing of a
    /// non-tree edge contributes its generator.
    pub fn read_loop(&self, dirs: &[Dir]) -> Word {
        let w: Word = dirs
            .iter()
            .filter_map(|d| {
                self.gen_of_edge[d.edge().0 as usize].map(|g| Letter {
                    gen: g,
                    inv: d.is_reversed(),
                })
            })
            .collect();
        reduce_word(&w)
    }

    fn check(&self, graph: &Graph) -> Result<()> {
        if self.tree.len() != graph.edge_count() || self.tree_path.len() != graph.vertex_count() {
            return Err(Error::InvalidMap(
                "marking does not belong to this graph".into(),
            ));
        }
        if self.rank() != graph.rank() {
            return Err(Error::Internal(
                "basis size differs from the first Betti number".into(),
            ));
        }
        Ok(())
    }
}

/// For each basis loop, the reduced word of its image, conjugated back to
/// the base vertex along the tree.
pub fn induced_endomorphism(map: &GraphMap, basis: &MarkedBasis) -> Result<Vec<Word>> {
    let graph = map.require_self_map()?;
    basis.check(graph)?;
    let fb = map.vertex_image(basis.base);
    let to_fb = &basis.tree_path[fb.0 as usize];
    Ok(basis
        .loops
        .iter()
        .map(|l| {
            let mut p = to_fb.clone();
            p.extend(map.image_dirs(l));
            p.extend(to_fb.iter().rev().map(|d| d.reversed()));
            basis.read_loop(&reduce_dirs(&p))
        })
        .collect())
}

/// Whether `words` is a free basis of the free group of rank `rank`.
///
/// Folds the wedge of the word loops (Stallings); the subgroup is everything
/// exactly when the folded graph is the one-vertex rose carrying every
/// letter. With `rank` generators that already forces a basis.
pub fn is_automorphism(words: &[Word], rank: usize) -> bool {
    if words.len() != rank
        || words
            .iter()
            .any(|w| w.iter().any(|l| l.gen as usize >= rank))
    {
        return false;
    }
    let folded = fold(words);
    folded.vertex_count == 1 && folded.edges.len() == rank
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

struct Folded {
    vertex_count: usize,
    edges: Vec<(usize, u32, usize)>,
}

/// Union-find over vertices with one outgoing edge per signed label at each
/// representative; identifications are processed from a worklist, merging
/// the smaller adjacency into the larger.
struct Folder {
    parent: Vec<usize>,
    adj: Vec<HashMap<i64, usize>>,
    pending: Vec<(usize, usize)>,
}

impl Folder {
    fn find(&mut self, x: usize) -> usize {
        find(&mut self.parent, x)
    }

    fn new_vertex(&mut self) -> usize {
        self.parent.push(self.parent.len());
        self.adj.push(HashMap::new());
        self.parent.len() - 1
    }

    fn add_edge(&mut self, a: usize, label: i64, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        match self.adj[a].get(&label).copied() {
            Some(c) => {
                let c = self.find(c);
                if c != b {
                    self.pending.push((b, c));
                }
            }
            None => {
                self.adj[a].insert(label, b);
            }
        }
        match self.adj[b].get(&-label).copied() {
            Some(c) => {
                let c = self.find(c);
                if c != a {
                    self.pending.push((a, c));
                }
            }
            None => {
                self.adj[b].insert(-label, a);
            }
        }
    }

    fn merge(&mut self, u: usize, v: usize) {
        let (mut u, mut v) = (self.find(u), self.find(v));
        if u == v {
            return;
        }
        if self.adj[u].len() < self.adj[v].len() {
            std::mem::swap(&mut u, &mut v);
        }
        self.parent[v] = u;
        let moved = std::mem::take(&mut self.adj[v]);
        for (label, w) in moved {
            self.add_edge(u, label, w);
        }
    }

    fn run(&mut self) {
        while let Some((x, y)) = self.pending.pop() {
            self.merge(x, y);
        }
    }
}

/// Stallings folding of the based wedge of loops. Returns the folded graph
/// with positively labelled edges `(from, gen, to)`.
fn fold(words: &[Word]) -> Folded {
    let mut f = Folder {
        parent: Vec::new(),
        adj: Vec::new(),
        pending: Vec::new(),
    };
    let base = f.new_vertex();
    for w in words {
        let w = reduce_word(w);
        let mut cur = base;
        for (i, l) in w.iter().enumerate() {
            let next = if i + 1 == w.len() {
                base
            } else {
                f.new_vertex()
            };
            let label = l.gen as i64 + 1;
            f.add_edge(cur, if l.inv { -label } else { label }, next);
            f.run();
            cur = next;
        }
    }
    let mut edges = Vec::new();
    let mut reps = Vec::new();
    for x in 0..f.parent.len() {
        if f.find(x) != x {
            continue;
        }
        reps.push(x);
        let out: Vec<(i64, usize)> = f.adj[x].iter().map(|(&l, &w)| (l, w)).collect();
        for (label, w) in out {
            if label > 0 {
                let w = f.find(w);
                edges.push((x, (label - 1) as u32, w));
            }
        }
    }
    edges.sort();
    Folded {
        vertex_count: reps.len(),
        edges,
    }
}

/// Abelianization matrix: column `j` counts generator exponents of word `j`.
pub fn abelianization(words: &[Word], rank: usize) -> Vec<Vec<i64>> {
    let mut m = vec![vec![0i64; words.len()]; rank];
    for (j, w) in words.iter().enumerate() {
        for l in w {
            m[l.gen as usize][j] += if l.inv { -1 } else { 1 };
        }
    }
    m
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut sign = 1i32;
    let mut prev = BigInt::from(1);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

/// Unimodularity of the abelianization, a necessary condition for a basis.
pub fn abelian_unimodular(words: &[Word], rank: usize) -> bool {
    words.len() == rank && determinant(&abelianization(words, rank)).abs() == BigInt::from(1)
}

/// Whether a self-map induces an automorphism of the fundamental group.
pub fn map_is_automorphism(map: &GraphMap) -> Result<bool> {
    let graph = map.require_self_map()?;
    let basis = MarkedBasis::new(graph);
    let words = induced_endomorphism(map, &basis)?;
    Ok(is_automorphism(&words, basis.rank()))
}
