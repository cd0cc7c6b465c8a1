//! Graph maps: vertex map plus edge images.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::{reduce_dirs, reverse_dirs, Dir, EdgeId, EdgePath, Graph, VertexId};
use crate::matrix::TransitionMatrix;

/// A graph map without contracted edges. Images of reversed edges are the
/// reversed images; only positive edges are stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphMap {
    name: String,
    source: Arc<Graph>,
    target: Arc<Graph>,
    vmap: Vec<VertexId>,
    images: Vec<Vec<Dir>>,
}

pub(crate) fn same_graph(a: &Arc<Graph>, b: &Arc<Graph>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl GraphMap {
    pub fn new(
        name: &str,
        source: Arc<Graph>,
        target: Arc<Graph>,
        vmap: Vec<VertexId>,
        images: Vec<Vec<Dir>>,
    ) -> Result<Self> {
        if vmap.len() != source.vertex_count() {
            return Err(Error::InvalidMap(format!(
                "`{name}`: vertex map has wrong size"
            )));
        }
        if images.len() != source.edge_count() {
            return Err(Error::InvalidMap(format!(
                "`{name}`: edge image list has wrong size"
            )));
        }
        if vmap.iter().any(|v| v.0 as usize >= target.vertex_count()) {
            return Err(Error::InvalidMap(format!(
                "`{name}`: vertex image out of range"
            )));
        }
        for (i, img) in images.iter().enumerate() {
            let e = EdgeId(i as u32);
            let label = source.edge_name(e);
            if img.is_empty() {
                return Err(Error::ContractedEdge(label.to_string()));
            }
            if img
                .iter()
                .any(|d| d.edge().0 as usize >= target.edge_count())
            {
                return Err(Error::InvalidMap(format!(
                    "`{name}`: image of `{label}` leaves the target"
                )));
            }
            if !target.is_path(img) {
                return Err(Error::InvalidMap(format!(
                    "`{name}`: image of `{label}` is not an edge path"
                )));
            }
            let (from, to) = source.edge_ends(e);
            if target.init(img[0]) != vmap[from.0 as usize]
                || target.term(*img.last().unwrap()) != vmap[to.0 as usize]
            {
                return Err(Error::InvalidMap(format!(
                    "`{name}`: image of `{label}` does not join the images of its endpoints"
                )));
            }
        }
        Ok(GraphMap {
            name: name.to_string(),
            source,
            target,
            vmap,
            images,
        })
    }

    /// Self-map of a graph given by token strings per positive edge, in edge order.
    /// The vertex map is inferred from the images.
    pub fn from_tokens(name: &str, graph: Arc<Graph>, images: &[&str]) -> Result<Self> {
        let imgs: Vec<Vec<Dir>> = images
            .iter()
            .map(|s| graph.parse_dirs(s))
            .collect::<Result<_>>()?;
        let mut vmap = vec![None; graph.vertex_count()];
        for (i, img) in imgs.iter().enumerate() {
            let (from, to) = graph.edge_ends(EdgeId(i as u32));
            if let (Some(first), Some(last)) = (img.first(), img.last()) {
                vmap[from.0 as usize].get_or_insert(graph.init(*first));
                vmap[to.0 as usize].get_or_insert(graph.term(*last));
            }
        }
        let vmap = vmap
            .into_iter()
            .map(|v| {
                v.ok_or_else(|| Error::InvalidMap(format!("`{name}`: vertex image undetermined")))
            })
            .collect::<Result<Vec<_>>>()?;
        GraphMap::new(name, graph.clone(), graph, vmap, imgs)
    }

    pub fn identity(graph: Arc<Graph>) -> Self {
        let vmap = graph.vertices().collect();
        let images = graph.edges().map(|e| vec![Dir::pos(e)]).collect();
        GraphMap {
            name: "id".into(),
            source: graph.clone(),
            target: graph,
            vmap,
            images,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn source(&self) -> &Arc<Graph> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Graph> {
        &self.target
    }

    pub fn is_self_map(&self) -> bool {
        same_graph(&self.source, &self.target)
    }

    pub(crate) fn require_self_map(&self) -> Result<&Arc<Graph>> {
        if self.is_self_map() {
            Ok(&self.source)
        } else {
            Err(Error::NotSelfMap(self.name.clone()))
        }
    }

    pub fn vertex_image(&self, v: VertexId) -> VertexId {
        self.vmap[v.0 as usize]
    }

    pub fn vertex_map(&self) -> &[VertexId] {
        &self.vmap
    }

    /// Image of a positive edge.
    pub fn edge_image(&self, e: EdgeId) -> &[Dir] {
        &self.images[e.0 as usize]
    }

    /// Image of a direction (reversed edges map to reversed images).
    pub fn dir_image(&self, d: Dir) -> Vec<Dir> {
        let img = &self.images[d.edge().0 as usize];
        if d.is_reversed() {
            reverse_dirs(img)
        } else {
            img.clone()
        }
    }

    /// Length of the image of a direction.
    pub fn image_len(&self, d: Dir) -> usize {
        self.images[d.edge().0 as usize].len()
    }

    /// Appends the image of `d` to `out`.
    pub(crate) fn push_image(&self, d: Dir, out: &mut Vec<Dir>) {
        let img = &self.images[d.edge().0 as usize];
        if d.is_reversed() {
            out.extend(img.iter().rev().map(|x| x.reversed()));
        } else {
            out.extend_from_slice(img);
        }
    }

    /// Unreduced image of a direction sequence.
    pub fn image_dirs(&self, dirs: &[Dir]) -> Vec<Dir> {
        let mut out = Vec::new();
        for &d in dirs {
            self.push_image(d, &mut out);
        }
        out
    }

    /// Unreduced concatenation of edge images.
    pub fn apply(&self, path: &EdgePath) -> Result<EdgePath> {
        if path.start().0 as usize >= self.source.vertex_count()
            || path
                .dirs()
                .iter()
                .any(|d| d.edge().0 as usize >= self.source.edge_count())
            || !self.source.is_path(path.dirs())
        {
            return Err(Error::InvalidPath(format!(
                "path is not in the source of `{}`",
                self.name
            )));
        }
        let start = self.vertex_image(path.start());
        let end = self.vertex_image(path.end());
        Ok(EdgePath::from_parts(
            start,
            end,
            self.image_dirs(path.dirs()),
        ))
    }

    /// `outer ∘ inner`, images left unreduced.
    pub fn compose(outer: &GraphMap, inner: &GraphMap) -> Result<GraphMap> {
        if !same_graph(&inner.target, &outer.source) {
            return Err(Error::GraphMismatch {
                expected: outer.source.name().to_string(),
                found: inner.target.name().to_string(),
            });
        }
        let vmap = inner.vmap.iter().map(|&v| outer.vertex_image(v)).collect();
        let images = inner
            .images
            .iter()
            .map(|img| outer.image_dirs(img))
            .collect();
        Ok(GraphMap {
            name: format!("{}*{}", outer.name, inner.name),
            source: inner.source.clone(),
            target: outer.target.clone(),
            vmap,
            images,
        })
    }

    /// `f^k` for `k ≥ 1` by repeated squaring.
    pub fn power(&self, k: usize) -> Result<GraphMap> {
        self.require_self_map()?;
        assert!(k >= 1, "power exponent must be positive");
        let mut result: Option<GraphMap> = None;
        let mut base = self.clone();
        let exponent = k;
        let mut k = k;
        loop {
            if k & 1 == 1 {
                result = Some(match result {
                    None => base.clone(),
                    Some(r) => GraphMap::compose(&r, &base)?,
                });
            }
            k >>= 1;
            if k == 0 {
                break;
            }
            base = GraphMap::compose(&base, &base)?;
        }
        let mut r = result.unwrap();
        r.name = if exponent == 1 {
            self.name.clone()
        } else {
            format!("{}^{}", self.name, exponent)
        };
        Ok(r)
    }

    /// Same edge images, freely reduced.
    pub fn tightened(&self) -> GraphMap {
        let mut m = self.clone();
        for img in &mut m.images {
            *img = reduce_dirs(img);
        }
        m
    }

    /// First direction of the image: `Df`.
    pub fn df(&self, d: Dir) -> Dir {
        let img = &self.images[d.edge().0 as usize];
        if d.is_reversed() {
            img.last().unwrap().reversed()
        } else {
            img[0]
        }
    }

    /// `D²f` on a turn.
    pub fn d2f(&self, turn: (Dir, Dir)) -> (Dir, Dir) {
        (self.df(turn.0), self.df(turn.1))
    }

    pub fn transition_matrix(&self) -> TransitionMatrix {
        let rows = self.target.edge_count();
        let cols = self.source.edge_count();
        let mut counts = vec![vec![0u64; cols]; rows];
        for (j, img) in self.images.iter().enumerate() {
            for d in img {
                counts[d.edge().0 as usize][j] += 1;
            }
        }
        TransitionMatrix::from_counts(counts)
    }

    /// Combinatorial volume `Σ |f(e)|` over positive edges.
    pub fn cancellation_bound(&self) -> usize {
        self.images.iter().map(Vec::len).sum()
    }

    pub fn min_image_len(&self) -> usize {
        self.images.iter().map(Vec::len).min().unwrap_or(0)
    }

    /// Every edge eventually has an iterated image of length at least two.
    ///
    /// Edges with length-one images define a partial self-map of the edge set;
    /// an edge fails exactly when its orbit under that partial map never leaves
    /// its domain, i.e. runs into a cycle.
    pub fn is_expanding(&self) -> Result<bool> {
        self.require_self_map()?;
        let n = self.images.len();
        let next = |e: usize| -> Option<usize> {
            let img = &self.images[e];
            (img.len() == 1).then(|| img[0].edge().0 as usize)
        };
        for start in 0..n {
            let mut e = start;
            let mut grows = false;
            for _ in 0..=n {
                match next(e) {
                    None => {
                        grows = true;
                        break;
                    }
                    Some(x) => e = x,
                }
            }
            if !grows {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Vertices lying on cycles of the vertex map.
    pub fn periodic_vertices(&self) -> Result<Vec<VertexId>> {
        self.require_self_map()?;
        let n = self.vmap.len();
        Ok((0..n)
            .filter(|&v| {
                let mut w = v;
                for _ in 0..n {
                    w = self.vmap[w].0 as usize;
                    if w == v {
                        return true;
                    }
                }
                false
            })
            .map(|v| VertexId(v as u32))
            .collect())
    }

    /// Token rendering of every edge image, in edge order.
    pub fn image_strings(&self) -> Vec<(String, String)> {
        self.source
            .edges()
            .map(|e| {
                (
                    self.source.edge_name(e).to_string(),
                    self.target.fmt_dirs(self.edge_image(e)),
                )
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fib() -> GraphMap {
        let g = Arc::new(Graph::rose("R2", &["a", "b"]).unwrap());
        GraphMap::from_tokens("F", g, &["a b", "a"]).unwrap()
    }

    #[test]
    fn apply_examples() {
        let f = fib();
        let g = f.source().clone();
        assert_eq!(
            f.apply(&g.path("a b").unwrap()).unwrap().display(&g),
            "a b a"
        );
        assert_eq!(
            f.apply(&g.path("~b a").unwrap()).unwrap().display(&g),
            "~a a b"
        );
        let e = EdgePath::empty(g.vertex("v").unwrap());
        assert!(f.apply(&e).unwrap().is_empty());
    }

    #[test]
    fn compose_examples() {
        let f = fib();
        let f2 = GraphMap::compose(&f, &f).unwrap();
        assert_eq!(
            f2.image_strings(),
            vec![("a".into(), "a b a".into()), ("b".into(), "a b".into())]
        );
        let id = GraphMap::identity(f.source().clone());
        assert_eq!(GraphMap::compose(&id, &f).unwrap().images, f.images);
        assert_eq!(f.power(2).unwrap().images, f2.images);
        assert_eq!(
            f.power(5).unwrap().images,
            GraphMap::compose(&f2, &GraphMap::compose(&f2, &f).unwrap())
                .unwrap()
                .images
        );
    }

    #[test]
    fn differential_examples() {
        let f = fib();
        let g = f.source().clone();
        let d = |s: &str| g.parse_dir(s).unwrap();
        assert_eq!(f.df(d("a")), d("a"));
        assert_eq!(f.df(d("b")), d("a"));
        assert_eq!(f.df(d("~a")), d("~b"));
        assert_eq!(f.df(d("~b")), d("~a"));
        assert_eq!(f.d2f((d("a"), d("b"))), (d("a"), d("a")));
        assert_eq!(f.d2f((d("~a"), d("~b"))), (d("~b"), d("~a")));
    }

    #[test]
    fn volume_and_expansion() {
        let f = fib();
        let g = f.source().clone();
        assert_eq!(f.cancellation_bound(), 3);
        assert_eq!(f.power(2).unwrap().cancellation_bound(), 5);
        assert_eq!(GraphMap::identity(g.clone()).cancellation_bound(), 2);
        assert!(f.is_expanding().unwrap());
        assert!(f.power(2).unwrap().is_expanding().unwrap());
        let swap = GraphMap::from_tokens("s", g, &["b", "a"]).unwrap();
        assert!(!swap.is_expanding().unwrap());
    }

    #[test]
    fn rejects_contracted_and_disconnected_images() {
        let g = Arc::new(Graph::rose("R2", &["a", "b"]).unwrap());
        let v = g.vertex("v").unwrap();
        let err = GraphMap::new(
            "x",
            g.clone(),
            g.clone(),
            vec![v],
            vec![vec![Dir::pos(EdgeId(0))], vec![]],
        );
        assert!(matches!(err, Err(Error::ContractedEdge(_))));
        let theta = Arc::new(
            Graph::new(
                "t",
                &["u", "w"],
                &[("a", "u", "w"), ("b", "u", "w"), ("c", "u", "w")],
            )
            .unwrap(),
        );
        assert!(GraphMap::from_tokens("y", theta.clone(), &["a b", "a", "c"]).is_err());
        assert!(GraphMap::from_tokens("y", theta, &["a ~b a", "a", "c"]).is_ok());
    }
}
