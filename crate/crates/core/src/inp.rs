//! Periodic illegal long turns, periodic indivisible Nielsen paths, and the
//! legalizing alternative.

use std::collections::BTreeMap;

use num::rational::Ratio;
use num::{BigUint, One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::gates::{is_train_track_morphism, GateStructure};
use crate::graph::{reduce_dirs, reverse_dirs, Dir, Graph};
use crate::long_turns::{
    count_lt, expansion_profile, lt_step, minimal_long_subturns, pad_legal, stripped_images,
    LongTurn, EXPANSION_SEARCH_BOUND,
};
use crate::map::GraphMap;

/// Default cap on explored search states.
pub const DEFAULT_BUDGET: usize = 1 << 20;

/// Cap on the total length of iterated edge images.
pub const IMAGE_VOLUME_CAP: u128 = 10_000_000;

/// Table `ext[m][d]`: legal continuations of `m` further edges after `d`.
struct Extensions {
    table: Vec<Vec<BigUint>>,
}

impl Extensions {
    fn new(gates: &GateStructure, c: usize) -> Self {
        let dirs = gates.graph().dir_count();
        let mut table = vec![vec![BigUint::one(); dirs]];
        for m in 1..=c {
            let row = (0..dirs)
                .map(|i| {
                    gates
                        .continuations(Dir::from_index(i))
                        .fold(BigUint::zero(), |acc, x| acc + &table[m - 1][x.index()])
                })
                .collect();
            table.push(row);
        }
        Extensions { table }
    }

    fn count(&self, last: Dir, more: usize) -> &BigUint {
        &self.table[more][last.index()]
    }
}

struct Budget {
    left: usize,
    total: usize,
}

impl Budget {
    fn spend(&mut self) -> Result<()> {
        if self.left == 0 {
            return Err(Error::BudgetExceeded(self.total));
        }
        self.left -= 1;
        Ok(())
    }
}

/// Truncated images of all length-`c` legal extensions of `branch`, given
/// that its image remainder so far is `rest`, weighted by the number of
/// extensions producing them.
fn completions(
    map: &GraphMap,
    gates: &GateStructure,
    ext: &Extensions,
    c: usize,
    branch: &[Dir],
    rest: Vec<Dir>,
    budget: &mut Budget,
) -> Result<BTreeMap<Vec<Dir>, BigUint>> {
    let mut out: BTreeMap<Vec<Dir>, BigUint> = BTreeMap::new();
    let mut stack = vec![(branch.len(), *branch.last().unwrap(), rest)];
    while let Some((len, last, rest)) = stack.pop() {
        budget.spend()?;
        if rest.len() >= c {
            *out.entry(rest[..c].to_vec()).or_default() += ext.count(last, c - len);
            continue;
        }
        if len == c {
            return Err(Error::Internal("image branch shorter than C".into()));
        }
        for x in gates.continuations(last) {
            if ext.count(x, c - len - 1).is_zero() {
                continue;
            }
            let mut r = rest.clone();
            map.push_image(x, &mut r);
            stack.push((len + 1, x, r));
        }
    }
    Ok(out)
}

/// Images under the induced map on `LT_c` of all illegal turns of `LT_c`,
/// restricted to illegal images and weighted by the number of preimages.
///
/// Branch pairs are grown from the illegal first-direction pairs until the
/// images diverge; after that the two branches extend independently.
pub fn illegal_image_multiset(
    map: &GraphMap,
    gates: &GateStructure,
    c: usize,
    budget: usize,
) -> Result<BTreeMap<LongTurn, BigUint>> {
    let ext = Extensions::new(gates, c);
    let mut budget = Budget {
        left: budget,
        total: budget,
    };
    let mut out: BTreeMap<LongTurn, BigUint> = BTreeMap::new();
    let g = gates.graph();
    for v in g.vertices() {
        let dirs = g.out_dirs(v);
        for (i, &a) in dirs.iter().enumerate() {
            for &b in &dirs[i + 1..] {
                if !gates.same_gate(a, b)
                    || ext.count(a, c - 1).is_zero()
                    || ext.count(b, c - 1).is_zero()
                {
                    continue;
                }
                let mut stack = vec![(vec![a], vec![b])];
                while let Some((pa, pb)) = stack.pop() {
                    budget.spend()?;
                    let Some((ra, rb, _)) = stripped_images(map, &pa, &pb) else {
                        let ia = map.image_dirs(&pa).len();
                        let ib = map.image_dirs(&pb).len();
                        let grow_first = ia <= ib;
                        let branch = if grow_first { &pa } else { &pb };
                        if branch.len() == c {
                            return Err(Error::Internal("turn of LT_C is not long".into()));
                        }
                        for x in gates.continuations(*branch.last().unwrap()) {
                            if ext.count(x, c - branch.len() - 1).is_zero() {
                                continue;
                            }
                            let (mut na, mut nb) = (pa.clone(), pb.clone());
                            if grow_first {
                                na.push(x);
                            } else {
                                nb.push(x);
                            }
                            stack.push((na, nb));
                        }
                        continue;
                    };
                    if !gates.same_gate(ra[0], rb[0]) {
                        continue;
                    }
                    let ca = completions(map, gates, &ext, c, &pa, ra, &mut budget)?;
                    let cb = completions(map, gates, &ext, c, &pb, rb, &mut budget)?;
                    for (xa, wa) in &ca {
                        for (xb, wb) in &cb {
                            budget.spend()?;
                            let t = LongTurn::canonical(xa.clone(), xb.clone()).0;
                            *out.entry(t).or_default() += wa * wb;
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicTurn {
    pub turn: LongTurn,
    /// Period as an unordered pair of branches.
    pub period: usize,
    /// Period as an ordered pair; equal to `period` or twice it.
    pub ordered_period: usize,
}

/// Dynamics of the induced map on the illegal images.
#[derive(Debug, Clone)]
pub struct IllegalDynamics {
    pub c: usize,
    pub periodic: Vec<PeriodicTurn>,
    /// When no illegal turn is periodic: least `k` with every illegal turn
    /// of `LT_c` legal after `k` steps.
    pub absorption: Option<usize>,
    pub image_count: usize,
}

pub fn illegal_dynamics(
    map: &GraphMap,
    gates: &GateStructure,
    c: usize,
    budget: usize,
) -> Result<IllegalDynamics> {
    let images: Vec<LongTurn> = illegal_image_multiset(map, gates, c, budget)?
        .into_keys()
        .collect();
    let n = images.len();
    let mut next = vec![None; n];
    let mut swap = vec![false; n];
    for (i, t) in images.iter().enumerate() {
        let (img, sw) = lt_step(map, t.first(), t.second(), c)?;
        swap[i] = sw;
        if gates.same_gate(img.first()[0], img.second()[0]) {
            let j = images
                .binary_search(&img)
                .map_err(|_| Error::Internal("illegal image outside the image set".into()))?;
            next[i] = Some(j);
        }
    }
    // 0 = unvisited, 1 = on current walk, 2 = done
    let mut state = vec![0u8; n];
    let mut periodic = Vec::new();
    for s in 0..n {
        let mut walk = Vec::new();
        let mut cur = Some(s);
        while let Some(i) = cur {
            if state[i] != 0 {
                break;
            }
            state[i] = 1;
            walk.push(i);
            cur = next[i];
        }
        if let Some(i) = cur {
            if state[i] == 1 {
                let start = walk.iter().position(|&w| w == i).unwrap();
                let cycle = &walk[start..];
                let odd = cycle.iter().filter(|&&w| swap[w]).count() % 2 == 1;
                let t = cycle.len();
                for &w in cycle {
                    periodic.push(PeriodicTurn {
                        turn: images[w].clone(),
                        period: t,
                        ordered_period: if odd { 2 * t } else { t },
                    });
                }
            }
        }
        for w in walk {
            state[w] = 2;
        }
    }
    periodic.sort_by(|a, b| a.turn.cmp(&b.turn));
    let absorption = periodic.is_empty().then(|| {
        let mut depth: Vec<Option<usize>> = vec![None; n];
        for s in 0..n {
            let mut chain = Vec::new();
            let mut cur = Some(s);
            let mut base = 0;
            while let Some(i) = cur {
                if let Some(d) = depth[i] {
                    base = d;
                    break;
                }
                chain.push(i);
                cur = next[i];
            }
            for i in chain.into_iter().rev() {
                base += 1;
                depth[i] = Some(base);
            }
        }
        1 + depth.into_iter().flatten().max().unwrap_or(0)
    });
    Ok(IllegalDynamics {
        c,
        periodic,
        absorption,
        image_count: n,
    })
}

/// Periodic illegal turns of `LT_c`.
pub fn periodic_illegal_turns(
    map: &GraphMap,
    gates: &GateStructure,
    c: usize,
) -> Result<Vec<PeriodicTurn>> {
    map.require_self_map()?;
    let profile = expansion_profile(map, gates, EXPANSION_SEARCH_BOUND)?;
    let required = profile.required_bound().ok_or(Error::NotExpanding)?;
    if c < required {
        return Err(Error::BoundTooSmall {
            requested: c,
            required,
        });
    }
    Ok(illegal_dynamics(map, gates, c, DEFAULT_BUDGET)?.periodic)
}

/// Point on a branch: inside edge `edge` (0-based) at fraction `offset` of
/// its length, with `offset` in `(0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BranchPoint {
    pub edge: usize,
    pub offset: Ratio<i64>,
}

impl BranchPoint {
    pub fn is_vertex(&self) -> bool {
        self.offset == Ratio::one()
    }

    /// Distance from the turn vertex measured in edges.
    pub fn position(&self) -> Ratio<i64> {
        Ratio::from_integer(self.edge as i64) + self.offset
    }
}

/// One affine equation `i + u = s + u·L − P` solved on a branch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedPointEquation {
    pub edge: usize,
    pub image_start: u64,
    pub image_len: u64,
    pub prefix: u64,
    pub solution: Ratio<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InpCertificate {
    pub turn: LongTurn,
    /// Exponent `p` of the power `f^p` under which the turn was found.
    pub power: usize,
    /// Branch length of the turn.
    pub c: usize,
    /// Unordered period of the turn under `f^p`.
    pub period: usize,
    /// Ordered period of the turn under `f^p`.
    pub ordered_period: usize,
    pub first_end: BranchPoint,
    pub second_end: BranchPoint,
    /// Edges of the first and second branch up to the fixed points.
    pub first_branch: Vec<Dir>,
    pub second_branch: Vec<Dir>,
    /// `reverse(first_branch) · second_branch`.
    pub eta: Vec<Dir>,
    pub equations: [FixedPointEquation; 2],
    /// `[f^{p·ordered_period}(η)] = η`, checked when both ends are vertices.
    pub reduction_verified: Option<bool>,
    /// Least `s` with `[f^s(η)] = η`, when both ends are vertices.
    pub map_ordered_period: Option<usize>,
    /// Least `s` with `[f^s(η)]` equal to `η` or its reverse.
    pub map_period: Option<usize>,
}

impl InpCertificate {
    pub fn endpoints_are_vertices(&self) -> bool {
        self.first_end.is_vertex() && self.second_end.is_vertex()
    }

    pub fn eta_string(&self, graph: &Graph) -> String {
        graph.fmt_dirs(&self.eta)
    }
}

/// Edge image lengths of `f^t`, failing once the volume exceeds the cap.
fn iterated_lengths(map: &GraphMap, t: usize) -> Result<Vec<u128>> {
    let g = map.source();
    let mut len = vec![1u128; g.edge_count()];
    for _ in 0..t {
        let next: Vec<u128> = g
            .edges()
            .map(|e| {
                map.edge_image(e)
                    .iter()
                    .map(|d| len[d.edge().0 as usize])
                    .sum()
            })
            .collect();
        if next.iter().sum::<u128>() > IMAGE_VOLUME_CAP {
            return Err(Error::BudgetExceeded(IMAGE_VOLUME_CAP as usize));
        }
        len = next;
    }
    Ok(len)
}

fn solve_branch(
    branch: &[Dir],
    lens: &[u128],
    prefix: u64,
) -> Result<(BranchPoint, FixedPointEquation)> {
    let mut start: u64 = 0;
    for (i, d) in branch.iter().enumerate() {
        let l = lens[d.edge().0 as usize] as u64;
        if l >= 2 {
            let u = Ratio::new(i as i64 - start as i64 + prefix as i64, l as i64 - 1);
            let x = Ratio::from_integer(i as i64) + u;
            if u >= Ratio::zero() && u <= Ratio::one() && x > Ratio::zero() {
                let point = if u.is_zero() {
                    BranchPoint {
                        edge: i - 1,
                        offset: Ratio::one(),
                    }
                } else {
                    BranchPoint { edge: i, offset: u }
                };
                let eq = FixedPointEquation {
                    edge: i,
                    image_start: start,
                    image_len: l,
                    prefix,
                    solution: x,
                };
                return Ok((point, eq));
            }
        }
        start += l;
    }
    Err(Error::Internal(
        "no positive fixed point on a branch".into(),
    ))
}

/// Extracts the periodic INP whose illegal turn is `turn`, periodic under
/// `map` with the given ordered period.
pub fn extract_inp(
    map: &GraphMap,
    turn: &LongTurn,
    ordered_period: usize,
) -> Result<(InpCertificate, GraphMap)> {
    let g = map.require_self_map()?.clone();
    let lens = iterated_lengths(map, ordered_period)?;
    if g.edges().any(|e| lens[e.0 as usize] < 2) {
        return Err(Error::Internal(
            "power used for extraction does not stretch every edge".into(),
        ));
    }
    let h = map.power(ordered_period)?;
    let (ra, rb, p) = stripped_images(&h, turn.first(), turn.second())
        .ok_or_else(|| Error::Internal("periodic turn is not long".into()))?;
    let c = turn.first().len();
    if ra.len() < c || rb.len() < c || ra[..c] != *turn.first() || rb[..c] != *turn.second() {
        return Err(Error::Internal(
            "turn is not periodic with the claimed period".into(),
        ));
    }
    let (first_end, eq1) = solve_branch(turn.first(), &lens, p as u64)?;
    let (second_end, eq2) = solve_branch(turn.second(), &lens, p as u64)?;
    let first_branch = turn.first()[..=first_end.edge].to_vec();
    let second_branch = turn.second()[..=second_end.edge].to_vec();
    let mut eta = reverse_dirs(&first_branch);
    eta.extend_from_slice(&second_branch);
    let cert = InpCertificate {
        turn: turn.clone(),
        power: 1,
        c,
        period: ordered_period,
        ordered_period,
        first_end,
        second_end,
        first_branch,
        second_branch,
        eta,
        equations: [eq1, eq2],
        reduction_verified: None,
        map_ordered_period: None,
        map_period: None,
    };
    Ok((cert, h))
}

/// Least `s ≤ limit` with `[f^s(η)] = η`, and least with `[f^s(η)] ∈ {η, η̄}`.
fn path_periods(map: &GraphMap, eta: &[Dir], limit: usize) -> (Option<usize>, Option<usize>) {
    let rev = reverse_dirs(eta);
    let mut cur = eta.to_vec();
    let (mut ordered, mut unordered) = (None, None);
    for s in 1..=limit {
        cur = reduce_dirs(&map.image_dirs(&cur));
        if cur.len() as u128 > IMAGE_VOLUME_CAP {
            break;
        }
        if unordered.is_none() && (cur == eta || cur == rev) {
            unordered = Some(s);
        }
        if cur == eta {
            ordered = Some(s);
            break;
        }
    }
    (ordered, unordered)
}

/// Least `p ≤ |E|` with every edge image of `f^p` of length at least two.
pub fn stretching_power(map: &GraphMap) -> Result<usize> {
    let edges = map.require_self_map()?.edge_count();
    for p in 1..=edges.max(1) {
        if iterated_lengths(map, p)?.iter().all(|&l| l >= 2) {
            return Ok(p);
        }
    }
    Err(Error::NoExpandingPower(edges))
}

/// The INP search carried out on a stretching power of the map.
#[derive(Debug, Clone)]
pub struct InpSearch {
    pub power: usize,
    pub c: usize,
    pub dynamics: IllegalDynamics,
    pub certificate: Option<InpCertificate>,
}

pub fn inp_search(map: &GraphMap, gates: &GateStructure) -> Result<InpSearch> {
    map.require_self_map()?;
    if !is_train_track_morphism(map, gates, gates)? {
        return Err(Error::NotTrainTrack);
    }
    if !map.is_expanding()? {
        return Err(Error::NotExpanding);
    }
    let power = stretching_power(map)?;
    let h = map.power(power)?;
    let profile = expansion_profile(&h, gates, EXPANSION_SEARCH_BOUND)?;
    let c = profile
        .required_bound()
        .ok_or(Error::NoExpandingPower(power))?;
    let dynamics = illegal_dynamics(&h, gates, c, DEFAULT_BUDGET)?;
    let certificate = match dynamics.periodic.first() {
        None => None,
        Some(pt) => {
            let (mut cert, hh) = extract_inp(&h, &pt.turn, pt.ordered_period)?;
            cert.power = power;
            cert.period = pt.period;
            cert.ordered_period = pt.ordered_period;
            if cert.endpoints_are_vertices() {
                let image = reduce_dirs(&hh.image_dirs(&cert.eta));
                cert.reduction_verified = Some(image == cert.eta);
                let (o, u) = path_periods(map, &cert.eta, power * pt.ordered_period);
                cert.map_ordered_period = o;
                cert.map_period = u;
            }
            Some(cert)
        }
    };
    Ok(InpSearch {
        power,
        c,
        dynamics,
        certificate,
    })
}

/// A periodic INP certificate, or `None` when the map has none.
pub fn has_periodic_inp(map: &GraphMap, gates: &GateStructure) -> Result<Option<InpCertificate>> {
    Ok(inp_search(map, gates)?.certificate)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LegalizingCheck {
    pub legalizing: bool,
    /// An illegal long turn with illegal image, padded to branch length
    /// `C(f) + 1` where possible.
    pub witness: Option<LongTurn>,
}

/// Every illegal `f`-long turn has legal image.
///
/// It suffices to inspect the minimal `f`-long subturns: every illegal
/// `f`-long turn contains one, and its image starts the same way.
pub fn is_legalizing(map: &GraphMap, gates: &GateStructure) -> Result<LegalizingCheck> {
    if !is_train_track_morphism(map, gates, gates)? {
        return Err(Error::NotTrainTrack);
    }
    let leaves = minimal_long_subturns(map, gates)?;
    let bad = leaves.into_iter().find(|l| !l.image_is_legal(gates));
    Ok(match bad {
        None => LegalizingCheck {
            legalizing: true,
            witness: None,
        },
        Some(l) => {
            let n = map.cancellation_bound() + 1;
            let a = pad_legal(gates, &l.first, n).unwrap_or(l.first);
            let b = pad_legal(gates, &l.second, n).unwrap_or(l.second);
            LegalizingCheck {
                legalizing: false,
                witness: Some(LongTurn::canonical(a, b).0),
            }
        }
    })
}

/// Cap on the volume of powers formed while scanning for a legalizing power.
pub const POWER_VOLUME_CAP: usize = 2_000_000;

/// Least `k ≤ max_power` with `f^k` legalizing; `None` when the map has a
/// periodic INP or no such power exists below the cap. The default cap is
/// `|LT_C|`.
pub fn legalizing_power(
    map: &GraphMap,
    gates: &GateStructure,
    max_power: Option<usize>,
) -> Result<Option<usize>> {
    let search = inp_search(map, gates)?;
    if search.certificate.is_some() {
        return Ok(None);
    }
    let cap = match max_power {
        Some(m) => m,
        None => {
            let (total, _) = count_lt(gates, search.c);
            total.to_usize().unwrap_or(usize::MAX)
        }
    };
    let absorption = search.dynamics.absorption.expect("no periodic turns");
    let hint = search.power.saturating_mul(absorption);
    let mut fk = map.clone();
    for k in 1..=cap.min(hint) {
        if k > 1 {
            fk = GraphMap::compose(map, &fk)?;
            if fk.cancellation_bound() > POWER_VOLUME_CAP {
                return Err(Error::BudgetExceeded(POWER_VOLUME_CAP));
            }
        }
        if is_legalizing(&fk, gates)?.legalizing {
            return Ok(Some(k));
        }
    }
    if cap >= hint {
        return Err(Error::Internal("absorbing power is not legalizing".into()));
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::long_turns::{enumerate_lt, lt_is_legal, lt_map_c};
    use std::sync::Arc;

    fn setup() -> (Arc<Graph>, GraphMap, GateStructure) {
        let g = Arc::new(Graph::rose("R2", &["a", "b"]).unwrap());
        let f = GraphMap::from_tokens("F", g.clone(), &["a b", "a"]).unwrap();
        let gf = GateStructure::from_tokens(g.clone(), &["a b", "~a", "~b"]).unwrap();
        (g, f, gf)
    }

    #[test]
    fn image_multiset_matches_materialized_map() {
        let (_, f, gf) = setup();
        let f2 = f.power(2).unwrap();
        for c in 5..7 {
            let m = lt_map_c(&f2, &gf, c).unwrap();
            let mut expect: BTreeMap<LongTurn, BigUint> = BTreeMap::new();
            for (i, t) in m.turns.iter().enumerate() {
                let img = &m.turns[m.image[i]];
                if !lt_is_legal(&gf, t) && !lt_is_legal(&gf, img) {
                    *expect.entry(img.clone()).or_default() += 1u32;
                }
            }
            assert_eq!(
                illegal_image_multiset(&f2, &gf, c, DEFAULT_BUDGET).unwrap(),
                expect
            );
        }
    }

    #[test]
    fn periodic_turns_of_fibonacci_square() {
        let (g, f, gf) = setup();
        let f2 = f.power(2).unwrap();
        let periodic = periodic_illegal_turns(&f2, &gf, 5).unwrap();
        let ab = g.parse_dirs("a b").unwrap();
        let ba = g.parse_dirs("b a").unwrap();
        let pt = periodic
            .iter()
            .find(|p| p.turn.first()[..2] == ab[..] && p.turn.second()[..2] == ba[..])
            .unwrap();
        assert_eq!((pt.period, pt.ordered_period), (1, 1));
        assert!(matches!(
            periodic_illegal_turns(&f2, &gf, 1),
            Err(Error::BoundTooSmall { .. })
        ));
        // Oracle: cycles of the materialized map.
        let m = lt_map_c(&f2, &gf, 5).unwrap();
        let n = m.turns.len();
        let on_cycle: Vec<LongTurn> = (0..n)
            .filter(|&i| {
                let mut j = m.image[i];
                for _ in 0..n {
                    if j == i {
                        return true;
                    }
                    j = m.image[j];
                }
                false
            })
            .map(|i| m.turns[i].clone())
            .filter(|t| !lt_is_legal(&gf, t))
            .collect();
        let found: Vec<LongTurn> = periodic.iter().map(|p| p.turn.clone()).collect();
        assert_eq!(found, on_cycle);
    }

    #[test]
    fn fibonacci_inp() {
        let (g, f, gf) = setup();
        let cert = has_periodic_inp(&f, &gf).unwrap().unwrap();
        assert_eq!(cert.power, 2);
        assert_eq!(cert.eta_string(&g), "~b ~a b a");
        assert!(cert.endpoints_are_vertices());
        assert_eq!(cert.first_end.position(), Ratio::from_integer(2));
        assert_eq!(cert.second_end.position(), Ratio::from_integer(2));
        assert_eq!(cert.reduction_verified, Some(true));
        assert_eq!(cert.map_period, Some(1));
        assert_eq!(cert.map_ordered_period, Some(2));
        let once = reduce_dirs(&f.image_dirs(&cert.eta));
        assert_eq!(g.fmt_dirs(&once), "~a ~b a b");
        assert_eq!(reduce_dirs(&f.image_dirs(&once)), cert.eta);
    }

    #[test]
    fn permutation_is_not_expanding() {
        let (g, _, _) = setup();
        let s = GraphMap::from_tokens("s", g.clone(), &["b", "a"]).unwrap();
        let gates = GateStructure::discrete(g);
        assert!(matches!(
            has_periodic_inp(&s, &gates),
            Err(Error::NotExpanding)
        ));
        assert!(is_legalizing(&s, &gates).unwrap().legalizing);
    }

    #[test]
    fn legalizing_examples() {
        let (g, f, gf) = setup();
        let f2 = f.power(2).unwrap();
        let check = is_legalizing(&f2, &gf).unwrap();
        assert!(!check.legalizing);
        let w = check.witness.unwrap();
        assert_eq!(w.branch_lengths(), (6, 6));
        assert!(!lt_is_legal(&gf, &w));
        let (ra, rb, _) = stripped_images(&f2, w.first(), w.second()).unwrap();
        assert!(gf.same_gate(ra[0], rb[0]));
        let pm = GateStructure::sign_split(g.clone());
        let check = is_legalizing(&f, &pm).unwrap();
        assert!(!check.legalizing);
        assert_eq!(legalizing_power(&f, &gf, None).unwrap(), None);
    }

    #[test]
    fn legalizing_by_exhaustive_check() {
        // Oracle: brute force over LT_{C(f)+1} on small maps.
        let (g, f, gf) = setup();
        for m in [f.power(2).unwrap(), f.clone()] {
            let n = m.cancellation_bound() + 1;
            let brute = enumerate_lt(&gf, n)
                .iter()
                .filter(|t| !lt_is_legal(&gf, t))
                .all(|t| match stripped_images(&m, t.first(), t.second()) {
                    None => true,
                    Some((a, b, _)) => !gf.same_gate(a[0], b[0]),
                });
            assert_eq!(
                is_legalizing(&m, &gf).unwrap().legalizing,
                brute,
                "{}",
                g.name()
            );
        }
    }
}
