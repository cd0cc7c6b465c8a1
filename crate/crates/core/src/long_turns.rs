//! Long turns, their images under train track maps, and the expansion
//! constants that make the induced map on `LT_C` well defined.

use num::{BigUint, One, Zero};

use crate::error::{Error, Result};
use crate::gates::{is_train_track_morphism, GateStructure};
use crate::graph::{Dir, EdgePath, Graph, VertexId};
use crate::map::GraphMap;

/// An unordered pair of legal paths with a common initial vertex and
/// distinct first directions, stored with the lexicographically smaller
/// branch first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LongTurn {
    first: Vec<Dir>,
    second: Vec<Dir>,
}

impl LongTurn {
    pub fn new(gates: &GateStructure, a: Vec<Dir>, b: Vec<Dir>) -> Result<Self> {
        let g = gates.graph();
        let (Some(&da), Some(&db)) = (a.first(), b.first()) else {
            return Err(Error::InvalidTurn("empty branch".into()));
        };
        for branch in [&a, &b] {
            if branch.iter().any(|d| d.edge().0 as usize >= g.edge_count()) || !g.is_path(branch) {
                return Err(Error::InvalidTurn("branch is not a path".into()));
            }
            if !gates.is_legal_dirs(branch) {
                return Err(Error::InvalidTurn(format!(
                    "branch `{}` is illegal",
                    g.fmt_dirs(branch)
                )));
            }
        }
        if g.init(da) != g.init(db) {
            return Err(Error::InvalidTurn(
                "branches start at different vertices".into(),
            ));
        }
        if da == db {
            return Err(Error::InvalidTurn(
                "branches share their first direction".into(),
            ));
        }
        Ok(LongTurn::canonical(a, b).0)
    }

    /// Orders the branches; the flag records whether they were swapped.
    pub(crate) fn canonical(a: Vec<Dir>, b: Vec<Dir>) -> (Self, bool) {
        if a <= b {
            (
                LongTurn {
                    first: a,
                    second: b,
                },
                false,
            )
        } else {
            (
                LongTurn {
                    first: b,
                    second: a,
                },
                true,
            )
        }
    }

    pub fn first(&self) -> &[Dir] {
        &self.first
    }

    pub fn second(&self) -> &[Dir] {
        &self.second
    }

    pub fn vertex(&self, graph: &Graph) -> VertexId {
        graph.init(self.first[0])
    }

    pub fn branch_lengths(&self) -> (usize, usize) {
        (self.first.len(), self.second.len())
    }

    pub fn display(&self, graph: &Graph) -> String {
        format!(
            "{{{}, {}}}",
            graph.fmt_dirs(&self.first),
            graph.fmt_dirs(&self.second)
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LtImage {
    Degenerate,
    Turn(LongTurn),
}

/// The first directions lie in distinct gates.
pub fn lt_is_legal(gates: &GateStructure, turn: &LongTurn) -> bool {
    !gates.same_gate(turn.first[0], turn.second[0])
}

fn common_prefix(a: &[Dir], b: &[Dir]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

/// Images of both branches with their maximal common prefix removed, in
/// the given branch order; `None` when a remainder is empty.
pub(crate) fn stripped_images(
    map: &GraphMap,
    a: &[Dir],
    b: &[Dir],
) -> Option<(Vec<Dir>, Vec<Dir>, usize)> {
    let ia = map.image_dirs(a);
    let ib = map.image_dirs(b);
    let p = common_prefix(&ia, &ib);
    if p == ia.len() || p == ib.len() {
        None
    } else {
        Some((ia[p..].to_vec(), ib[p..].to_vec(), p))
    }
}

pub fn lt_image(map: &GraphMap, gates: &GateStructure, turn: &LongTurn) -> Result<LtImage> {
    gates.require_graph(map.source())?;
    for branch in [&turn.first, &turn.second] {
        if !gates.is_legal_dirs(branch) {
            return Err(Error::InvalidTurn(
                "branch is illegal for the supplied gates".into(),
            ));
        }
    }
    Ok(match stripped_images(map, &turn.first, &turn.second) {
        None => LtImage::Degenerate,
        Some((a, b, _)) => LtImage::Turn(LongTurn::canonical(a, b).0),
    })
}

pub fn lt_truncate(turn: &LongTurn, c: usize) -> Result<LongTurn> {
    let shortest = turn.first.len().min(turn.second.len());
    if c == 0 || c > shortest {
        return Err(Error::BranchTooShort {
            length: shortest,
            requested: c,
        });
    }
    Ok(LongTurn::canonical(turn.first[..c].to_vec(), turn.second[..c].to_vec()).0)
}

/// Legal paths of length exactly `c` from `v`, in lexicographic order.
pub fn enumerate_legal_paths(gates: &GateStructure, v: VertexId, c: usize) -> Vec<EdgePath> {
    let g = gates.graph();
    let mut out = Vec::new();
    let mut stack: Vec<Dir> = Vec::with_capacity(c);
    fn rec(gates: &GateStructure, stack: &mut Vec<Dir>, c: usize, out: &mut Vec<Vec<Dir>>) {
        if stack.len() == c {
            out.push(stack.clone());
            return;
        }
        let last = *stack.last().unwrap();
        let next: Vec<Dir> = gates.continuations(last).collect();
        for d in next {
            stack.push(d);
            rec(gates, stack, c, out);
            stack.pop();
        }
    }
    if c == 0 {
        return vec![EdgePath::empty(v)];
    }
    let mut raw = Vec::new();
    for &d in g.out_dirs(v) {
        stack.push(d);
        rec(gates, &mut stack, c, &mut raw);
        stack.pop();
    }
    for dirs in raw {
        out.push(EdgePath::new(g, v, dirs).expect("legal paths are paths"));
    }
    out
}

/// Every long turn with both branches of length `c`, sorted.
pub fn enumerate_lt(gates: &GateStructure, c: usize) -> Vec<LongTurn> {
    let mut out = Vec::new();
    for v in gates.graph().vertices() {
        let paths = enumerate_legal_paths(gates, v, c);
        for (i, p) in paths.iter().enumerate() {
            for q in &paths[i + 1..] {
                if p.dirs()[0] != q.dirs()[0] {
                    out.push(LongTurn {
                        first: p.dirs().to_vec(),
                        second: q.dirs().to_vec(),
                    });
                }
            }
        }
    }
    out.sort();
    out
}

/// Number of legal paths of length `n` starting with each direction.
pub fn legal_path_counts(gates: &GateStructure, n: usize) -> Vec<BigUint> {
    let g = gates.graph();
    let dirs = g.dir_count();
    // counts[d] = legal paths of length k starting with d
    let mut counts = vec![BigUint::one(); dirs];
    if n == 0 {
        return vec![BigUint::zero(); dirs];
    }
    for _ in 1..n {
        let next = (0..dirs)
            .map(|i| {
                let d = Dir::from_index(i);
                gates
                    .continuations(d)
                    .fold(BigUint::zero(), |acc, x| acc + &counts[x.index()])
            })
            .collect();
        counts = next;
    }
    counts
}

/// `(|LT_c|, |LT_c^ill|)`.
pub fn count_lt(gates: &GateStructure, c: usize) -> (BigUint, BigUint) {
    let counts = legal_path_counts(gates, c);
    let g = gates.graph();
    let mut total = BigUint::zero();
    let mut illegal = BigUint::zero();
    for v in g.vertices() {
        let out = g.out_dirs(v);
        for (i, &a) in out.iter().enumerate() {
            for &b in &out[i + 1..] {
                let n = &counts[a.index()] * &counts[b.index()];
                if gates.same_gate(a, b) {
                    illegal += &n;
                }
                total += n;
            }
        }
    }
    (total, illegal)
}

/// Least image length over legal paths of length exactly `n`; `None` when
/// there is no such path.
pub fn min_legal_image_len(map: &GraphMap, gates: &GateStructure, n: usize) -> Option<usize> {
    min_image_table(map, gates, n).last().copied().flatten()
}

/// Entry `k-1` is the least image length over legal paths of length `k`.
fn min_image_table(map: &GraphMap, gates: &GateStructure, n: usize) -> Vec<Option<usize>> {
    let dirs = gates.graph().dir_count();
    // best[d] = least image length of a legal path of the current length ending in d
    let mut best: Vec<Option<usize>> = (0..dirs)
        .map(|i| Some(map.image_len(Dir::from_index(i))))
        .collect();
    let mut table = Vec::with_capacity(n);
    for k in 1..=n {
        if k > 1 {
            let mut next: Vec<Option<usize>> = vec![None; dirs];
            for (i, b) in best.iter().enumerate() {
                let Some(b) = b else { continue };
                for x in gates.continuations(Dir::from_index(i)) {
                    let cand = b + map.image_len(x);
                    let slot = &mut next[x.index()];
                    if slot.is_none_or(|s| cand < s) {
                        *slot = Some(cand);
                    }
                }
            }
            best = next;
        }
        table.push(best.iter().flatten().min().copied());
    }
    table
}

/// A minimal `f`-long extension of an illegal pair of first directions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LongSubturn {
    pub first: Vec<Dir>,
    pub second: Vec<Dir>,
    /// Length of the common prefix stripped from the two images.
    pub prefix: usize,
    pub first_rest: Vec<Dir>,
    pub second_rest: Vec<Dir>,
}

impl LongSubturn {
    pub fn image_is_legal(&self, gates: &GateStructure) -> bool {
        !gates.same_gate(self.first_rest[0], self.second_rest[0])
    }

    pub fn depth(&self) -> usize {
        self.first.len().max(self.second.len())
    }
}

/// For every illegal pair of first directions, the tree of shortest
/// extensions after which the two images diverge.
///
/// At each step the branch whose image is a prefix of the other's is
/// extended by every legal continuation. The leaves are exactly the
/// minimal `f`-long subturns: any illegal `f`-long turn restricts to one
/// of them, and its image starts with the leaf's image remainders. Branch
/// lengths beyond `volume + 1` mean the map violates bounded cancellation.
pub fn minimal_long_subturns(map: &GraphMap, gates: &GateStructure) -> Result<Vec<LongSubturn>> {
    gates.require_graph(map.source())?;
    let g = gates.graph();
    let cap = map.cancellation_bound() + 1;
    let mut leaves = Vec::new();
    for v in g.vertices() {
        let out = g.out_dirs(v);
        for (i, &a) in out.iter().enumerate() {
            for &b in &out[i + 1..] {
                if gates.same_gate(a, b) {
                    grow(map, gates, vec![a], vec![b], cap, &mut leaves)?;
                }
            }
        }
    }
    Ok(leaves)
}

fn grow(
    map: &GraphMap,
    gates: &GateStructure,
    a: Vec<Dir>,
    b: Vec<Dir>,
    cap: usize,
    leaves: &mut Vec<LongSubturn>,
) -> Result<()> {
    let mut stack = vec![(a, b)];
    while let Some((a, b)) = stack.pop() {
        if a.len() > cap || b.len() > cap {
            return Err(Error::InvalidMap(format!(
                "images of two legal paths agree beyond the cancellation bound {}; the map is not π1-injective",
                cap - 1
            )));
        }
        let ia = map.image_dirs(&a);
        let ib = map.image_dirs(&b);
        let p = common_prefix(&ia, &ib);
        let extend_first = match (p == ia.len(), p == ib.len()) {
            (false, false) => {
                leaves.push(LongSubturn {
                    first_rest: ia[p..].to_vec(),
                    second_rest: ib[p..].to_vec(),
                    first: a,
                    second: b,
                    prefix: p,
                });
                continue;
            }
            (true, _) => true,
            (false, true) => false,
        };
        let grown = if extend_first { &a } else { &b };
        let next: Vec<Dir> = gates.continuations(*grown.last().unwrap()).collect();
        // Reverse so the stack pops continuations in ascending order.
        for d in next.into_iter().rev() {
            let (mut na, mut nb) = (a.clone(), b.clone());
            if extend_first {
                na.push(d);
            } else {
                nb.push(d);
            }
            stack.push((na, nb));
        }
    }
    Ok(())
}

/// Expansion data of a train track map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpansionProfile {
    /// Least `k` with every legal path of length `k` strictly growing.
    pub k: Option<usize>,
    /// Combinatorial volume, bounding cancellation at one illegal turn.
    pub cancellation: usize,
    /// `max(K, K·C(f))`.
    pub star: Option<usize>,
    /// Largest common image prefix over minimal long subturns.
    pub max_prefix: usize,
    /// Longest branch over minimal long subturns.
    pub max_depth: usize,
    /// Least `C` with every turn of `LT_C` long and every image branch of
    /// length greater than `C`.
    pub lt_bound: Option<usize>,
}

impl ExpansionProfile {
    /// Least branch length accepted by the induced map on long turns.
    pub fn required_bound(&self) -> Option<usize> {
        match (self.star, self.lt_bound) {
            (Some(s), Some(l)) => Some(s.min(l)),
            (s, l) => s.or(l),
        }
    }
}

/// Default search bound for the strong expansion constant.
pub const EXPANSION_SEARCH_BOUND: usize = 64;

pub fn expansion_profile(
    map: &GraphMap,
    gates: &GateStructure,
    search_bound: usize,
) -> Result<ExpansionProfile> {
    map.require_self_map()?;
    if !is_train_track_morphism(map, gates, gates)? {
        return Err(Error::NotTrainTrack);
    }
    let table = min_image_table(map, gates, search_bound);
    let k = (1..=search_bound).find(|&n| table[n - 1].is_none_or(|m| m > n));
    let cancellation = map.cancellation_bound();
    let star = k.map(|k| k.max(k * cancellation));
    let leaves = minimal_long_subturns(map, gates)?;
    let max_prefix = leaves.iter().map(|l| l.prefix).max().unwrap_or(0);
    let max_depth = leaves.iter().map(LongSubturn::depth).max().unwrap_or(1);
    let lt_bound = k.map(|k| {
        // minImage(n) - n is nondecreasing and at least floor(n / k).
        let limit = k * (max_prefix + 1);
        let table = min_image_table(map, gates, limit);
        let grow = (1..=limit)
            .find(|&n| table[n - 1].is_none_or(|m| m > n + max_prefix))
            .unwrap_or(limit);
        grow.max(max_depth)
    });
    Ok(ExpansionProfile {
        k,
        cancellation,
        star,
        max_prefix,
        max_depth,
        lt_bound,
    })
}

/// The induced map `LT_C → LT_C`, materialized.
#[derive(Debug, Clone)]
pub struct LtMap {
    pub c: usize,
    pub turns: Vec<LongTurn>,
    /// Index of the image of each turn.
    pub image: Vec<usize>,
    /// Whether the image branches came out in swapped order.
    pub swapped: Vec<bool>,
}

impl LtMap {
    pub fn index_of(&self, turn: &LongTurn) -> Option<usize> {
        self.turns.binary_search(turn).ok()
    }
}

fn check_bound(map: &GraphMap, gates: &GateStructure, c: usize) -> Result<ExpansionProfile> {
    let profile = expansion_profile(map, gates, EXPANSION_SEARCH_BOUND)?;
    let required = profile.required_bound().ok_or(Error::NotExpanding)?;
    if c < required {
        return Err(Error::BoundTooSmall {
            requested: c,
            required,
        });
    }
    Ok(profile)
}

/// Image of a turn of `LT_C` truncated back to branch length `c`, with the
/// swap flag of the branch order.
pub(crate) fn lt_step(map: &GraphMap, a: &[Dir], b: &[Dir], c: usize) -> Result<(LongTurn, bool)> {
    let (ra, rb, _) = stripped_images(map, a, b)
        .ok_or_else(|| Error::Internal("turn of LT_C is not long".into()))?;
    if ra.len() < c || rb.len() < c {
        return Err(Error::Internal("image branch shorter than C".into()));
    }
    Ok(LongTurn::canonical(ra[..c].to_vec(), rb[..c].to_vec()))
}

pub fn lt_map_c(map: &GraphMap, gates: &GateStructure, c: usize) -> Result<LtMap> {
    check_bound(map, gates, c)?;
    let turns = enumerate_lt(gates, c);
    let mut image = Vec::with_capacity(turns.len());
    let mut swapped = Vec::with_capacity(turns.len());
    for t in &turns {
        let (img, sw) = lt_step(map, &t.first, &t.second, c)?;
        let j = turns
            .binary_search(&img)
            .map_err(|_| Error::Internal("image outside LT_C".into()))?;
        image.push(j);
        swapped.push(sw);
    }
    Ok(LtMap {
        c,
        turns,
        image,
        swapped,
    })
}

/// Least legal continuation of `dirs` to length `n`, if one exists.
pub(crate) fn pad_legal(gates: &GateStructure, dirs: &[Dir], n: usize) -> Option<Vec<Dir>> {
    fn rec(gates: &GateStructure, path: &mut Vec<Dir>, n: usize) -> bool {
        if path.len() >= n {
            return true;
        }
        let next: Vec<Dir> = gates.continuations(*path.last().unwrap()).collect();
        for d in next {
            path.push(d);
            if rec(gates, path, n) {
                return true;
            }
            path.pop();
        }
        false
    }
    let mut path = dirs.to_vec();
    rec(gates, &mut path, n).then_some(path)
}
