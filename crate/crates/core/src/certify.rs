//! The iwip criterion, the composition theorem pipeline, monoid
//! certification and the legalizing factory.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigUint, Zero};

use crate::error::{Error, Result};
use crate::gates::{
    gate_morphism, intrinsic_gates, is_gate_stable, is_train_track_morphism, GateStructure,
};
use crate::graph::{Dir, VertexId};
use crate::inp::{
    illegal_image_multiset, inp_search, is_legalizing, legalizing_power, InpCertificate,
    DEFAULT_BUDGET,
};
use crate::long_turns::{
    expansion_profile, lt_step, lt_truncate, pad_legal, stripped_images, LongTurn,
    EXPANSION_SEARCH_BOUND,
};
use crate::map::{same_graph, GraphMap};
use crate::pi1::map_is_automorphism;
use crate::whitehead::{gate_index_list, gate_whitehead_graphs, IndexReport};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    CertifiedIwip,
    Inconclusive(Vec<String>),
}

impl Verdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, Verdict::CertifiedIwip)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::CertifiedIwip => write!(f, "Certified iwip"),
            Verdict::Inconclusive(reasons) => write!(f, "Inconclusive: {}", reasons.join("; ")),
        }
    }
}

/// Evidence that no illegal long turn is periodic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NoInpTranscript {
    /// The search ran on `f^power`.
    pub power: usize,
    pub c: usize,
    /// Distinct illegal images of illegal turns of `LT_c`.
    pub images: usize,
    /// Steps after which every illegal turn of `LT_c` is legal.
    pub absorption: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InpOutcome {
    NotChecked,
    Present(Box<InpCertificate>),
    Absent(NoInpTranscript),
    Failed(String),
}

fn search_inp(map: &GraphMap, gates: &GateStructure) -> InpOutcome {
    match inp_search(map, gates) {
        Err(e) => InpOutcome::Failed(e.to_string()),
        Ok(s) => match s.certificate {
            Some(c) => InpOutcome::Present(Box::new(c)),
            None => InpOutcome::Absent(NoInpTranscript {
                power: s.power,
                c: s.c,
                images: s.dynamics.image_count,
                absorption: s.dynamics.absorption.unwrap_or(1),
            }),
        },
    }
}

pub const FAIL_INP: &str = "periodic INP";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IwipReport {
    pub map_name: String,
    pub gates: GateStructure,
    pub automorphism: bool,
    pub expanding: bool,
    pub train_track: bool,
    pub primitive: bool,
    /// Vertices whose gate-Whitehead graph is disconnected.
    pub disconnected_at: Vec<VertexId>,
    pub inp: InpOutcome,
    pub verdict: Verdict,
}

impl IwipReport {
    pub fn whitehead_connected(&self) -> bool {
        self.disconnected_at.is_empty()
    }
}

/// Sufficient criterion for full irreducibility, evaluated with respect to
/// the intrinsic gate structure. Failure is never a proof of reducibility.
pub fn certify_iwip(map: &GraphMap) -> Result<IwipReport> {
    let graph = map.require_self_map()?.clone();
    let gates = intrinsic_gates(map)?;
    let automorphism = map_is_automorphism(map)?;
    let expanding = map.is_expanding()?;
    let train_track = is_train_track_morphism(map, &gates, &gates)?;
    let primitive = map.transition_matrix().is_primitive();
    let disconnected_at: Vec<VertexId> = gate_whitehead_graphs(map, &gates)?
        .into_iter()
        .filter(|w| !w.is_connected())
        .map(|w| w.vertex)
        .collect();
    let mut failed = Vec::new();
    if !automorphism {
        failed.push("not a π1-automorphism".to_string());
    }
    if !expanding {
        failed.push("not expanding".to_string());
    }
    if !train_track {
        failed.push("not a train track map for its intrinsic gates".to_string());
    }
    if !primitive {
        failed.push("M(f) not primitive".to_string());
    }
    for &v in &disconnected_at {
        failed.push(format!(
            "gate-Whitehead graph disconnected at {}",
            graph.vertex_name(v)
        ));
    }
    let inp = if automorphism && expanding && train_track {
        search_inp(map, &gates)
    } else {
        InpOutcome::NotChecked
    };
    match &inp {
        InpOutcome::Present(_) => failed.push(FAIL_INP.to_string()),
        InpOutcome::Failed(e) => failed.push(format!("INP search failed: {e}")),
        _ => {}
    }
    let verdict = if failed.is_empty() {
        Verdict::CertifiedIwip
    } else {
        Verdict::Inconclusive(failed)
    };
    Ok(IwipReport {
        map_name: map.name().to_string(),
        gates,
        automorphism,
        expanding,
        train_track,
        primitive,
        disconnected_at,
        inp,
        verdict,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypothesisCheck {
    pub name: String,
    pub passed: bool,
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoremConclusions {
    pub composite: GraphMap,
    pub inp: InpOutcome,
    pub iwip: IwipReport,
    pub index: IndexReport,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MainTheoremReport {
    /// `true` when the composite is `g∘f` rather than `f∘g`.
    pub swapped: bool,
    pub gates: GateStructure,
    pub hypotheses: Vec<HypothesisCheck>,
    pub conclusions: Option<TheoremConclusions>,
}

impl MainTheoremReport {
    pub fn hypotheses_hold(&self) -> bool {
        self.hypotheses.iter().all(|h| h.passed)
    }

    pub fn failed(&self) -> Vec<&HypothesisCheck> {
        self.hypotheses.iter().filter(|h| !h.passed).collect()
    }

    /// All hypotheses hold and every conclusion was verified.
    pub fn certified(&self) -> bool {
        self.conclusions.as_ref().is_some_and(|c| {
            c.iwip.verdict.is_certified()
                && matches!(c.inp, InpOutcome::Absent(_))
                && c.index.certified_stable
        })
    }
}

fn check(name: &str, passed: bool, detail: Option<String>) -> HypothesisCheck {
    HypothesisCheck {
        name: name.to_string(),
        passed,
        detail,
    }
}

/// Checks the hypotheses for `f∘g` with `G = G(f)` and verifies every
/// conclusion on the composite.
pub fn theorem_main(f: &GraphMap, g: &GraphMap) -> Result<MainTheoremReport> {
    let gates = intrinsic_gates(f)?;
    theorem_with_gates(f, g, &gates, false)
}

/// As [`theorem_main`] for the composite `g∘f`.
pub fn theorem_main_swapped(f: &GraphMap, g: &GraphMap) -> Result<MainTheoremReport> {
    let gates = intrinsic_gates(f)?;
    theorem_with_gates(f, g, &gates, true)
}

/// The theorem pipeline with an explicitly supplied gate structure.
pub fn theorem_with_gates(
    f: &GraphMap,
    g: &GraphMap,
    gates: &GateStructure,
    swapped: bool,
) -> Result<MainTheoremReport> {
    let graph = f.require_self_map()?.clone();
    g.require_self_map()?;
    if !same_graph(&graph, g.source()) {
        return Err(Error::GraphMismatch {
            expected: graph.name().to_string(),
            found: g.source().name().to_string(),
        });
    }
    gates.require_graph(&graph)?;
    let mut hyps = Vec::new();
    let m = f.transition_matrix();
    hyps.push(check(
        "M(f) positive",
        m.is_positive(),
        (!m.is_positive()).then(|| format!("M(f) = {m}")),
    ));
    let f_tt = is_train_track_morphism(f, gates, gates)?;
    hyps.push(check("f train track", f_tt, None));
    hyps.push(check("f π1-automorphism", map_is_automorphism(f)?, None));
    let periodic = f.periodic_vertices()?;
    let whs = gate_whitehead_graphs(f, gates);
    let detail_wh = match &whs {
        Err(e) => Some(e.to_string()),
        Ok(whs) => {
            let bad: Vec<&str> = whs
                .iter()
                .filter(|w| periodic.contains(&w.vertex) && !w.is_connected())
                .map(|w| graph.vertex_name(w.vertex))
                .collect();
            (!bad.is_empty()).then(|| format!("disconnected at {}", bad.join(", ")))
        }
    };
    hyps.push(check(
        "gate-Whitehead graphs of f connected",
        detail_wh.is_none(),
        detail_wh,
    ));
    if swapped {
        let gm = gate_morphism(f, gates, gates)?.induced().is_some();
        hyps.push(check("f gate structure morphism", gm, None));
    }
    let g_tt = is_train_track_morphism(g, gates, gates)?;
    hyps.push(check("g train track", g_tt, None));
    if g_tt {
        let leg = is_legalizing(g, gates)?;
        let detail = leg
            .witness
            .map(|w| format!("witness {}", w.display(&graph)));
        hyps.push(check("g legalizing", leg.legalizing, detail));
    } else {
        hyps.push(check(
            "g legalizing",
            false,
            Some("g is not a train track map".into()),
        ));
    }
    hyps.push(check("g gate-stable", is_gate_stable(g, gates)?, None));
    hyps.push(check("g π1-automorphism", map_is_automorphism(g)?, None));
    let mut report = MainTheoremReport {
        swapped,
        gates: gates.clone(),
        hypotheses: hyps,
        conclusions: None,
    };
    if !report.hypotheses_hold() {
        return Ok(report);
    }
    let composite = if swapped {
        GraphMap::compose(g, f)?
    } else {
        GraphMap::compose(f, g)?
    };
    let inp = search_inp(&composite, gates);
    let iwip = certify_iwip(&composite)?;
    let mut index = gate_index_list(f, gates)?;
    let verified = iwip.verdict.is_certified() && matches!(inp, InpOutcome::Absent(_));
    if verified {
        if !index.within_bound() {
            return Err(Error::Internal(format!(
                "certified index sum {} exceeds N - 1",
                index.total
            )));
        }
        index.certified_stable = true;
    }
    report.conclusions = Some(TheoremConclusions {
        composite,
        inp,
        iwip,
        index,
    });
    Ok(report)
}

/// Checks one monoid generator and returns its legalizing exponent.
fn setup_generator(index: usize, map: &GraphMap, gates: &GateStructure) -> Result<usize> {
    let reject = |reason: &str| Error::GeneratorRejected {
        index,
        reason: reason.to_string(),
    };
    if &intrinsic_gates(map)? != gates {
        return Err(reject("intrinsic gate structure differs"));
    }
    if !map.transition_matrix().is_positive() {
        return Err(reject("M(f) not positive"));
    }
    if !is_train_track_morphism(map, gates, gates)? {
        return Err(reject("not a train track map"));
    }
    if !gate_whitehead_graphs(map, gates)?
        .iter()
        .all(|w| w.is_connected())
    {
        return Err(reject("gate-Whitehead graph disconnected"));
    }
    if !is_gate_stable(map, gates)? {
        return Err(reject("not gate-stable"));
    }
    if !map_is_automorphism(map)? {
        return Err(reject("not a π1-automorphism"));
    }
    if inp_search(map, gates)?.certificate.is_some() {
        return Err(reject(FAIL_INP));
    }
    legalizing_power(map, gates, None)?.ok_or_else(|| reject("no legalizing power within |LT_C|"))
}

/// Legalizing exponents `m_i` of generators sharing one intrinsic gate
/// structure.
pub fn monoid_setup(maps: &[GraphMap]) -> Result<(GateStructure, Vec<usize>)> {
    let first = maps
        .first()
        .ok_or_else(|| Error::InvalidMap("no generators".into()))?;
    let gates = intrinsic_gates(first)?;
    let exps = maps
        .iter()
        .enumerate()
        .map(|(i, m)| setup_generator(i + 1, m, &gates))
        .collect::<Result<Vec<_>>>()?;
    Ok((gates, exps))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonoidReport {
    pub word: Vec<usize>,
    pub composite: GraphMap,
    pub legalizing: bool,
    pub iwip: IwipReport,
    pub index: IndexReport,
}

/// Certifies the product of `f_i^{m_i}` along a word of 1-based generator
/// indices, read left to right as composition.
pub fn monoid_certify(
    maps: &[GraphMap],
    exponents: &[usize],
    gates: &GateStructure,
    word: &[usize],
) -> Result<MonoidReport> {
    let mut composite: Option<GraphMap> = None;
    for &i in word {
        if i == 0 || i > maps.len() {
            return Err(Error::InvalidMap(format!("generator {i} out of range")));
        }
        let p = maps[i - 1].power(exponents[i - 1])?;
        composite = Some(match composite {
            None => p,
            Some(c) => GraphMap::compose(&c, &p)?,
        });
    }
    let composite = composite.ok_or_else(|| Error::InvalidMap("empty word".into()))?;
    let legalizing = is_legalizing(&composite, gates)?.legalizing;
    let iwip = certify_iwip(&composite)?;
    let mut index = gate_index_list(&composite, gates)?;
    if iwip.verdict.is_certified() && legalizing {
        if !index.within_bound() {
            return Err(Error::Internal(format!(
                "certified index sum {} exceeds N - 1",
                index.total
            )));
        }
        index.certified_stable = true;
    }
    Ok(MonoidReport {
        word: word.to_vec(),
        composite,
        legalizing,
        iwip,
        index,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoryStep {
    /// Least illegal image turn selected at this step.
    pub image: LongTurn,
    /// Its subturn of branch length `L`, whose legalizer was applied.
    pub subturn: LongTurn,
    /// `|LT_C^ill(g_{k+1})|` after the step.
    pub remaining: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoryReport {
    pub map: GraphMap,
    pub c: usize,
    pub initial: BigUint,
    pub steps: Vec<FactoryStep>,
}

/// Builds a legalizing map from elementary legalizers of the illegal turns
/// of branch length `l` and an expanding train track map `h`.
///
/// Tracks the illegal images of illegal turns of `LT_C` under the current
/// composite with multiplicities; each step removes the least image.
pub fn legalizing_factory(
    elementary: &BTreeMap<LongTurn, GraphMap>,
    expander: &GraphMap,
    gates: &GateStructure,
    l: usize,
) -> Result<FactoryReport> {
    let graph = gates.graph().clone();
    let hp = expansion_profile(expander, gates, EXPANSION_SEARCH_BOUND)?;
    if hp.k.is_none() {
        return Err(Error::NoExpandingPower(EXPANSION_SEARCH_BOUND));
    }
    let illegal_l: Vec<LongTurn> = crate::long_turns::enumerate_lt(gates, l)
        .into_iter()
        .filter(|t| gates.same_gate(t.first()[0], t.second()[0]))
        .collect();
    let mut composed: BTreeMap<LongTurn, GraphMap> = BTreeMap::new();
    let mut c = l;
    for t in &illegal_l {
        let gt = elementary
            .get(t)
            .ok_or_else(|| Error::MissingLegalizer(t.display(&graph)))?;
        if !is_train_track_morphism(gt, gates, gates)? {
            return Err(Error::InvalidMap(format!(
                "legalizer for {} is not a train track map",
                t.display(&graph)
            )));
        }
        match stripped_images(gt, t.first(), t.second()) {
            Some((a, b, _)) if !gates.same_gate(a[0], b[0]) => {}
            _ => {
                return Err(Error::InvalidMap(format!(
                    "map assigned to {} does not legalize it",
                    t.display(&graph)
                )))
            }
        }
        let composite = GraphMap::compose(expander, gt)?.with_name(&format!(
            "{}*{}",
            expander.name(),
            gt.name()
        ));
        let p = expansion_profile(&composite, gates, EXPANSION_SEARCH_BOUND)?;
        c = c.max(p.required_bound().ok_or(Error::NotExpanding)?);
        composed.insert(t.clone(), composite);
    }
    let identity = GraphMap::identity(graph.clone());
    let (_, initial) = crate::long_turns::count_lt(gates, c);
    let mut steps = Vec::new();
    if initial.is_zero() {
        return Ok(FactoryReport {
            map: identity,
            c,
            initial,
            steps,
        });
    }
    // The least illegal turn of LT_C: least legal extensions of an illegal pair.
    let mut least: Option<LongTurn> = None;
    for v in graph.vertices() {
        let out = graph.out_dirs(v);
        for (i, &a) in out.iter().enumerate() {
            for &b in &out[i + 1..] {
                if !gates.same_gate(a, b) {
                    continue;
                }
                if let (Some(pa), Some(pb)) = (pad_legal(gates, &[a], c), pad_legal(gates, &[b], c))
                {
                    let t = LongTurn::canonical(pa, pb).0;
                    if least.as_ref().is_none_or(|x| t < *x) {
                        least = Some(t);
                    }
                }
            }
        }
    }
    let first =
        least.ok_or_else(|| Error::Internal("illegal turns counted but none found".into()))?;
    let sub = lt_truncate(&first, l)?;
    let step_map = &composed[&sub];
    let mut current: BTreeMap<LongTurn, BigUint> =
        illegal_image_multiset(step_map, gates, c, DEFAULT_BUDGET)?;
    let mut g = step_map.clone();
    let mut total: BigUint = current.values().sum();
    if total >= initial {
        return Err(Error::Internal(
            "factory step did not decrease the illegal count".into(),
        ));
    }
    steps.push(FactoryStep {
        image: first,
        subturn: sub,
        remaining: total.clone(),
    });
    while let Some(s) = current.keys().next().cloned() {
        let sub = lt_truncate(&s, l)?;
        let step_map = &composed[&sub];
        let mut next: BTreeMap<LongTurn, BigUint> = BTreeMap::new();
        for (t, w) in &current {
            let (img, _) = lt_step(step_map, t.first(), t.second(), c)?;
            if gates.same_gate(img.first()[0], img.second()[0]) {
                *next.entry(img).or_default() += w;
            }
        }
        let new_total: BigUint = next.values().sum();
        if new_total >= total {
            return Err(Error::Internal(
                "factory step did not decrease the illegal count".into(),
            ));
        }
        g = GraphMap::compose(step_map, &g)?;
        total = new_total;
        current = next;
        steps.push(FactoryStep {
            image: s,
            subturn: sub,
            remaining: total.clone(),
        });
    }
    let g = g.with_name("g");
    if !is_legalizing(&g, gates)?.legalizing {
        return Err(Error::Internal("factory output is not legalizing".into()));
    }
    Ok(FactoryReport {
        map: g,
        c,
        initial,
        steps,
    })
}

/// Outcome of the bounded search for elementary legalizers.
#[derive(Debug, Clone)]
pub struct LegalizerSearch {
    pub assigned: BTreeMap<LongTurn, GraphMap>,
    pub missing: Vec<LongTurn>,
    pub candidates: usize,
}

/// Gate-stable train track π1-automorphisms with edge images of length at
/// most `max_len`, ordered by volume and then by images.
pub fn gate_stable_candidates(
    gates: &GateStructure,
    max_len: usize,
    budget: usize,
) -> Result<Vec<GraphMap>> {
    let graph = gates.graph().clone();
    let mut per_edge: Vec<Vec<Vec<Dir>>> = Vec::new();
    for e in graph.edges() {
        let start = Dir::pos(e);
        let end = Dir::neg(e);
        let mut words = Vec::new();
        let mut stack: Vec<Vec<Dir>> = graph
            .out_dirs(graph.init(start))
            .iter()
            .filter(|&&d| gates.same_gate(d, start))
            .map(|&d| vec![d])
            .collect();
        while let Some(w) = stack.pop() {
            let last = *w.last().unwrap();
            if graph.term(last) == graph.term(start) && gates.same_gate(last.reversed(), end) {
                words.push(w.clone());
            }
            if w.len() < max_len {
                for x in gates.continuations(last) {
                    let mut v = w.clone();
                    v.push(x);
                    stack.push(v);
                }
            }
        }
        words.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        per_edge.push(words);
    }
    let mut combos: Vec<Vec<usize>> = vec![Vec::new()];
    for words in &per_edge {
        let mut next = Vec::new();
        for c in &combos {
            for i in 0..words.len() {
                if next.len() >= budget {
                    return Err(Error::BudgetExceeded(budget));
                }
                let mut x = c.clone();
                x.push(i);
                next.push(x);
            }
        }
        combos = next;
    }
    let mut out = Vec::new();
    for combo in combos {
        let images: Vec<Vec<Dir>> = combo
            .iter()
            .enumerate()
            .map(|(e, &i)| per_edge[e][i].clone())
            .collect();
        let vmap = graph.vertices().collect();
        let m = GraphMap::new("l", graph.clone(), graph.clone(), vmap, images)?;
        if is_train_track_morphism(&m, gates, gates)?
            && is_gate_stable(&m, gates)?
            && map_is_automorphism(&m)?
        {
            out.push(m);
        }
    }
    out.sort_by(|a, b| {
        a.cancellation_bound()
            .cmp(&b.cancellation_bound())
            .then_with(|| a.image_strings().cmp(&b.image_strings()))
    });
    Ok(out)
}

/// Assigns to every illegal turn of branch length `l` the first candidate
/// that makes it long with legal image.
pub fn search_elementary_legalizers(
    gates: &GateStructure,
    l: usize,
    max_len: usize,
    budget: usize,
) -> Result<LegalizerSearch> {
    let candidates = gate_stable_candidates(gates, max_len, budget)?;
    let mut assigned = BTreeMap::new();
    let mut missing = Vec::new();
    for t in crate::long_turns::enumerate_lt(gates, l) {
        if !gates.same_gate(t.first()[0], t.second()[0]) {
            continue;
        }
        let found =
            candidates
                .iter()
                .position(|m| match stripped_images(m, t.first(), t.second()) {
                    Some((a, b, _)) => !gates.same_gate(a[0], b[0]),
                    None => false,
                });
        match found {
            Some(i) => {
                assigned.insert(t, candidates[i].clone().with_name(&format!("l{}", i + 1)));
            }
            None => missing.push(t),
        }
    }
    Ok(LegalizerSearch {
        assigned,
        missing,
        candidates: candidates.len(),
    })
}
