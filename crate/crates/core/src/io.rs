//! Line-oriented text format for graphs, maps and gate structures.
//!
//! ```text
//! graph R2
//! vertex v
//! edge a v v
//! edge b v v
//! endgraph
//!
//! map F R2 -> R2
//! vmap v v
//! emap a a b
//! emap b a
//! endmap
//!
//! gates GF R2
//! gate v a b
//! gate v ~a
//! gate v ~b
//! endgates
//! ```

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gates::GateStructure;
use crate::graph::{Dir, EdgeId, Graph, VertexId};
use crate::map::GraphMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Item {
    Graph(Arc<Graph>),
    Map(GraphMap),
    Gates(String, GateStructure),
}

/// The objects of one file, in file order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Document {
    items: Vec<Item>,
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn at(line: usize) -> impl Fn(Error) -> Error {
    move |e| match e {
        Error::Parse { .. } => e,
        other => perr(line, other.to_string()),
    }
}

impl Document {
    pub fn new() -> Self {
        Document::default()
    }

    pub fn items(&self) -> &[Item] {
        &self.items
    }

    fn name_taken(&self, name: &str) -> bool {
        self.items.iter().any(|i| match i {
            Item::Graph(g) => g.name() == name,
            Item::Map(m) => m.name() == name,
            Item::Gates(n, _) => n == name,
        })
    }

    pub fn push(&mut self, item: Item) -> Result<()> {
        let name = match &item {
            Item::Graph(g) => g.name().to_string(),
            Item::Map(m) => m.name().to_string(),
            Item::Gates(n, _) => n.clone(),
        };
        if self.name_taken(&name) {
            return Err(Error::InvalidMap(format!("duplicate name `{name}`")));
        }
        self.items.push(item);
        Ok(())
    }

    pub fn graph(&self, name: &str) -> Option<&Arc<Graph>> {
        self.items.iter().find_map(|i| match i {
            Item::Graph(g) if g.name() == name => Some(g),
            _ => None,
        })
    }

    pub fn map(&self, name: &str) -> Option<&GraphMap> {
        self.items.iter().find_map(|i| match i {
            Item::Map(m) if m.name() == name => Some(m),
            _ => None,
        })
    }

    pub fn gates(&self, name: &str) -> Option<&GateStructure> {
        self.items.iter().find_map(|i| match i {
            Item::Gates(n, g) if n == name => Some(g),
            _ => None,
        })
    }

    pub fn maps(&self) -> impl Iterator<Item = &GraphMap> {
        self.items.iter().filter_map(|i| match i {
            Item::Map(m) => Some(m),
            _ => None,
        })
    }

    pub fn parse(text: &str) -> Result<Document> {
        let mut doc = Document::new();
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        while let Some((line, l)) = lines.next() {
            let words: Vec<&str> = l.split_whitespace().collect();
            let item = match words[0] {
                "graph" => {
                    let [_, name] = words[..] else {
                        return Err(perr(line, "expected `graph NAME`"));
                    };
                    Item::Graph(Arc::new(parse_graph(name, line, &mut lines)?))
                }
                "map" => {
                    let [_, name, src, "->", tgt] = words[..] else {
                        return Err(perr(line, "expected `map NAME SRC -> TGT`"));
                    };
                    let src = doc
                        .graph(src)
                        .ok_or_else(|| perr(line, format!("unknown graph `{src}`")))?
                        .clone();
                    let tgt = doc
                        .graph(tgt)
                        .ok_or_else(|| perr(line, format!("unknown graph `{tgt}`")))?
                        .clone();
                    Item::Map(parse_map(name, src, tgt, line, &mut lines)?)
                }
                "gates" => {
                    let [_, name, graph] = words[..] else {
                        return Err(perr(line, "expected `gates NAME GRAPH`"));
                    };
                    let g = doc
                        .graph(graph)
                        .ok_or_else(|| perr(line, format!("unknown graph `{graph}`")))?
                        .clone();
                    Item::Gates(name.to_string(), parse_gates(g, line, &mut lines)?)
                }
                other => return Err(perr(line, format!("unexpected `{other}`"))),
            };
            doc.push(item).map_err(at(line))?;
        }
        Ok(doc)
    }

    /// Canonical text: blocks in document order separated by blank lines.
    pub fn serialize(&self) -> String {
        let blocks: Vec<String> = self
            .items
            .iter()
            .map(|i| match i {
                Item::Graph(g) => serialize_graph(g),
                Item::Map(m) => serialize_map(m),
                Item::Gates(n, g) => serialize_gates(n, g),
            })
            .collect();
        blocks.join("\n")
    }
}

fn parse_graph<'a>(
    name: &str,
    start: usize,
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
) -> Result<Graph> {
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    for (line, l) in lines.by_ref() {
        let words: Vec<&str> = l.split_whitespace().collect();
        match words[0] {
            "vertex" if words.len() > 1 => {
                vertices.extend(words[1..].iter().map(|s| s.to_string()))
            }
            "edge" => {
                let [_, label, from, to] = words[..] else {
                    return Err(perr(line, "expected `edge LABEL FROM TO`"));
                };
                edges.push((label.to_string(), from.to_string(), to.to_string()));
            }
            "endgraph" => return Graph::new(name, &vertices, &edges).map_err(at(line)),
            _ => return Err(perr(line, format!("unexpected `{l}` in graph block"))),
        }
    }
    Err(perr(start, format!("graph `{name}` is missing `endgraph`")))
}

fn parse_map<'a>(
    name: &str,
    src: Arc<Graph>,
    tgt: Arc<Graph>,
    start: usize,
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
) -> Result<GraphMap> {
    let mut vmap: Vec<Option<VertexId>> = vec![None; src.vertex_count()];
    let mut images: Vec<Option<Vec<Dir>>> = vec![None; src.edge_count()];
    for (line, l) in lines.by_ref() {
        let words: Vec<&str> = l.split_whitespace().collect();
        match words[0] {
            "vmap" => {
                let [_, v, w] = words[..] else {
                    return Err(perr(line, "expected `vmap V V'`"));
                };
                let v = src
                    .vertex(v)
                    .ok_or_else(|| perr(line, format!("unknown vertex `{v}`")))?;
                let w = tgt
                    .vertex(w)
                    .ok_or_else(|| perr(line, format!("unknown vertex `{w}`")))?;
                if vmap[v.0 as usize].replace(w).is_some() {
                    return Err(perr(line, "vertex mapped twice"));
                }
            }
            "emap" => {
                let Some(&label) = words.get(1) else {
                    return Err(perr(line, "expected `emap LABEL TOK...`"));
                };
                let e = src
                    .edge(label)
                    .ok_or_else(|| perr(line, format!("unknown edge `{label}`")))?;
                if words.len() == 2 {
                    return Err(perr(
                        line,
                        Error::ContractedEdge(label.to_string()).to_string(),
                    ));
                }
                let img = words[2..]
                    .iter()
                    .map(|t| tgt.parse_dir(t))
                    .collect::<Result<Vec<_>>>()
                    .map_err(at(line))?;
                if images[e.0 as usize].replace(img).is_some() {
                    return Err(perr(line, format!("edge `{label}` mapped twice")));
                }
            }
            "endmap" => {
                let images = images
                    .into_iter()
                    .enumerate()
                    .map(|(i, img)| {
                        img.ok_or_else(|| {
                            perr(
                                line,
                                format!("missing image of `{}`", src.edge_name(EdgeId(i as u32))),
                            )
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                // Unlisted vertex images follow from the edge images.
                for (i, img) in images.iter().enumerate() {
                    let (from, to) = src.edge_ends(EdgeId(i as u32));
                    vmap[from.0 as usize].get_or_insert(tgt.init(img[0]));
                    vmap[to.0 as usize].get_or_insert(tgt.term(*img.last().unwrap()));
                }
                let vmap = vmap
                    .into_iter()
                    .map(|v| v.expect("every vertex has an edge"))
                    .collect();
                return GraphMap::new(name, src, tgt, vmap, images).map_err(at(line));
            }
            _ => return Err(perr(line, format!("unexpected `{l}` in map block"))),
        }
    }
    Err(perr(start, format!("map `{name}` is missing `endmap`")))
}

fn parse_gates<'a>(
    graph: Arc<Graph>,
    start: usize,
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
) -> Result<GateStructure> {
    let mut blocks = Vec::new();
    let mut seen = BTreeSet::new();
    for (line, l) in lines.by_ref() {
        let words: Vec<&str> = l.split_whitespace().collect();
        match words[0] {
            "gate" => {
                if words.len() < 3 {
                    return Err(perr(line, "expected `gate VERTEX TOK...`"));
                }
                let v = graph
                    .vertex(words[1])
                    .ok_or_else(|| perr(line, format!("unknown vertex `{}`", words[1])))?;
                let mut block = Vec::new();
                for t in &words[2..] {
                    let d = graph.parse_dir(t).map_err(at(line))?;
                    if graph.init(d) != v {
                        return Err(perr(
                            line,
                            format!("partition violated: `{t}` does not start at `{}`", words[1]),
                        ));
                    }
                    if !seen.insert(d) {
                        return Err(perr(
                            line,
                            format!("partition violated: `{t}` lies in two gates"),
                        ));
                    }
                    block.push(d);
                }
                blocks.push(block);
            }
            "endgates" => return GateStructure::from_blocks(graph, blocks).map_err(at(line)),
            _ => return Err(perr(line, format!("unexpected `{l}` in gates block"))),
        }
    }
    Err(perr(start, "gates block is missing `endgates`"))
}

pub fn serialize_graph(g: &Graph) -> String {
    let mut s = format!("graph {}\n", g.name());
    let names: Vec<&str> = g.vertices().map(|v| g.vertex_name(v)).collect();
    s += &format!("vertex {}\n", names.join(" "));
    for e in g.edges() {
        let (from, to) = g.edge_ends(e);
        s += &format!(
            "edge {} {} {}\n",
            g.edge_name(e),
            g.vertex_name(from),
            g.vertex_name(to)
        );
    }
    s + "endgraph\n"
}

pub fn serialize_map(m: &GraphMap) -> String {
    let (src, tgt) = (m.source(), m.target());
    let mut s = format!("map {} {} -> {}\n", m.name(), src.name(), tgt.name());
    for v in src.vertices() {
        s += &format!(
            "vmap {} {}\n",
            src.vertex_name(v),
            tgt.vertex_name(m.vertex_image(v))
        );
    }
    for (label, image) in m.image_strings() {
        s += &format!("emap {label} {image}\n");
    }
    s + "endmap\n"
}

pub fn serialize_gates(name: &str, gates: &GateStructure) -> String {
    let mut s = format!("gates {} {}\n", name, gates.graph().name());
    for (v, dirs) in gates.blocks_as_tokens() {
        s += &format!("gate {} {}\n", v, dirs.join(" "));
    }
    s + "endgates\n"
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIB: &str = "graph R2\nvertex v\nedge a v v\nedge b v v\nendgraph\n\nmap F R2 -> R2\nvmap v v\nemap a a b\nemap b a\nendmap\n\ngates GF R2\ngate v a b\ngate v ~a\ngate v ~b\nendgates\n";

    #[test]
    fn canonical_round_trip() {
        let doc = Document::parse(FIB).unwrap();
        assert_eq!(doc.serialize(), FIB);
        assert_eq!(doc.map("F").unwrap().image_strings()[0].1, "a b");
        assert_eq!(doc.gates("GF").unwrap().gate_count(), 3);
    }

    #[test]
    fn comments_and_inferred_vertex_map() {
        let text = "# fib\ngraph R2\nvertex v\nedge a v v # loop\nedge b v v\nendgraph\nmap F R2 -> R2\nemap a a b\nemap b a\nendmap\n";
        let doc = Document::parse(text).unwrap();
        assert_eq!(doc.map("F").unwrap().vertex_image(VertexId(0)), VertexId(0));
    }

    fn err(text: &str) -> (usize, String) {
        match Document::parse(text) {
            Err(Error::Parse { line, msg }) => (line, msg),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn diagnostics() {
        let (line, msg) = err("graph R2\nvertex v\nedge a v v\nedge b v v\nendgraph\nmap F R2 -> R2\nemap a a b\nemap b\nendmap\n");
        assert_eq!(line, 8);
        assert!(msg.contains("contracted edge"), "{msg}");
        let (line, msg) = err("graph R2\nvertex v\nedge a v v\nedge b v v\nendgraph\ngates G R2\ngate v a b\ngate v a ~a ~b\nendgates\n");
        assert_eq!(line, 8);
        assert!(msg.contains("partition violated"), "{msg}");
        let (_, msg) = err("graph T\nvertex v w\nedge a v v\nendgraph\n");
        assert!(msg.contains("dangling vertex"), "{msg}");
        let (_, msg) = err("graph T\nvertex v w\nedge a v v\nedge b v w\nendgraph\n");
        assert!(msg.contains("valence-1"), "{msg}");
        let (line, _) = err("graph R2\nvertex v\nedge a v v\n");
        assert_eq!(line, 1);
        let (line, _) = err("bogus\n");
        assert_eq!(line, 1);
    }
}
