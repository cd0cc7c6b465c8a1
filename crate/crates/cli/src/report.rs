//! Text and JSON renderings of command results.

use std::fmt::Write as _;
use std::path::Path;

use serde_json::{json, Value};

use ttk::certify::{
    FactoryReport, InpOutcome, IwipReport, LegalizerSearch, MainTheoremReport, MonoidReport,
};
use ttk::inp::{BranchPoint, InpCertificate, InpSearch, LegalizingCheck};
use ttk::io::{Document, Item};
use ttk::long_turns::LongTurn;
use ttk::survey::SurveyReport;
use ttk::whitehead::IndexReport;
use ttk::{GateStructure, Graph, GraphMap};

use crate::Outcome;

pub fn status(code: u8) -> &'static str {
    if code == 0 {
        "ok"
    } else {
        "inconclusive"
    }
}

fn code(ok: bool) -> u8 {
    if ok {
        0
    } else {
        1
    }
}

fn turn_json(graph: &Graph, t: &LongTurn) -> Value {
    json!({ "first": graph.fmt_dirs(t.first()), "second": graph.fmt_dirs(t.second()) })
}

fn gates_json(gates: &GateStructure) -> Value {
    gates
        .blocks_as_tokens()
        .into_iter()
        .map(|(v, dirs)| json!({ "vertex": v, "directions": dirs }))
        .collect()
}

fn gates_text(gates: &GateStructure) -> String {
    let labels: Vec<String> = (0..gates.gate_count())
        .map(|i| gates.gate_label(i))
        .collect();
    labels.join(" ")
}

fn images_json(map: &GraphMap) -> Value {
    map.image_strings()
        .into_iter()
        .map(|(e, img)| json!({ "edge": e, "image": img }))
        .collect()
}

fn images_text(map: &GraphMap) -> String {
    let mut s = String::new();
    for (e, img) in map.image_strings() {
        let _ = writeln!(s, "  {e} -> {img}");
    }
    s
}

fn index_json(r: &IndexReport) -> Value {
    json!({
        "entries": r.entries.iter().map(|e| json!({
            "vertex": e.vertex_name,
            "gates": e.gate_count,
            "index": e.index.to_string(),
        })).collect::<Vec<_>>(),
        "list": r.list_string(),
        "sum": r.total.to_string(),
        "rank": r.rank,
        "within_bound": r.within_bound(),
        "certified_stable": r.certified_stable,
    })
}

fn point_json(p: &BranchPoint) -> Value {
    json!({ "edge": p.edge, "offset": p.offset.to_string(), "vertex": p.is_vertex() })
}

fn certificate_json(graph: &Graph, c: &InpCertificate) -> Value {
    json!({
        "turn": turn_json(graph, &c.turn),
        "power": c.power,
        "c": c.c,
        "period": c.period,
        "ordered_period": c.ordered_period,
        "first_branch": graph.fmt_dirs(&c.first_branch),
        "second_branch": graph.fmt_dirs(&c.second_branch),
        "first_end": point_json(&c.first_end),
        "second_end": point_json(&c.second_end),
        "eta": c.eta_string(graph),
        "reduction_verified": c.reduction_verified,
        "map_period": c.map_period,
        "map_ordered_period": c.map_ordered_period,
    })
}

fn opt(n: Option<usize>) -> String {
    n.map_or("n/a".to_string(), |n| n.to_string())
}

fn certificate_text(map: &GraphMap, c: &InpCertificate) -> String {
    let graph = map.source();
    let mut s = String::new();
    let _ = writeln!(
        s,
        "periodic INP of {} (found on power {}, branch length {})",
        map.name(),
        c.power,
        c.c
    );
    let _ = writeln!(s, "illegal turn: {}", c.turn.display(graph));
    let _ = writeln!(
        s,
        "branches: ({}, {})",
        graph.fmt_dirs(&c.first_branch),
        graph.fmt_dirs(&c.second_branch)
    );
    let _ = writeln!(s, "eta: {}", c.eta_string(graph));
    let _ = writeln!(
        s,
        "period: {} (ordered), {} (unordered)",
        opt(c.map_ordered_period),
        opt(c.map_period)
    );
    let _ = writeln!(
        s,
        "turn period under power: {} (ordered), {} (unordered)",
        c.ordered_period, c.period
    );
    let verified = match c.reduction_verified {
        Some(true) => "yes",
        Some(false) => "NO",
        None => "not applicable (endpoints inside edges)",
    };
    let _ = writeln!(s, "reduction check: {verified}");
    s
}

fn inp_outcome_json(graph: &Graph, inp: &InpOutcome) -> Value {
    match inp {
        InpOutcome::NotChecked => json!({ "outcome": "not_checked" }),
        InpOutcome::Present(c) => {
            json!({ "outcome": "present", "certificate": certificate_json(graph, c) })
        }
        InpOutcome::Absent(t) => json!({
            "outcome": "absent",
            "power": t.power,
            "c": t.c,
            "images": t.images,
            "absorption": t.absorption,
        }),
        InpOutcome::Failed(e) => json!({ "outcome": "failed", "error": e }),
    }
}

fn inp_outcome_text(map: &GraphMap, inp: &InpOutcome) -> String {
    match inp {
        InpOutcome::NotChecked => "INP search: not run\n".to_string(),
        InpOutcome::Present(c) => certificate_text(map, c),
        InpOutcome::Absent(t) => format!(
            "no periodic INP: power {}, branch length {}, {} illegal images, all legal after {} steps\n",
            t.power, t.c, t.images, t.absorption
        ),
        InpOutcome::Failed(e) => format!("INP search failed: {e}\n"),
    }
}

fn iwip_json(graph: &Graph, r: &IwipReport) -> Value {
    let reasons: Vec<String> = match &r.verdict {
        ttk::certify::Verdict::CertifiedIwip => Vec::new(),
        ttk::certify::Verdict::Inconclusive(v) => v.clone(),
    };
    json!({
        "verdict": if r.verdict.is_certified() { "certified" } else { "inconclusive" },
        "reasons": reasons,
        "gates": gates_json(&r.gates),
        "automorphism": r.automorphism,
        "expanding": r.expanding,
        "train_track": r.train_track,
        "primitive": r.primitive,
        "whitehead_disconnected_at": r.disconnected_at.iter().map(|&v| graph.vertex_name(v)).collect::<Vec<_>>(),
        "inp": inp_outcome_json(graph, &r.inp),
    })
}

pub fn validate(file: &Path, doc: &Document) -> Outcome {
    let mut text = format!("ok: {}\n", file.display());
    let mut items = Vec::new();
    for item in doc.items() {
        match item {
            Item::Graph(g) => {
                let _ = writeln!(
                    text,
                    "graph {}: {} vertices, {} edges, rank {}",
                    g.name(),
                    g.vertex_count(),
                    g.edge_count(),
                    g.rank()
                );
                items.push(json!({
                    "kind": "graph", "name": g.name(),
                    "vertices": g.vertex_count(), "edges": g.edge_count(), "rank": g.rank(),
                }));
            }
            Item::Map(m) => {
                let _ = writeln!(
                    text,
                    "map {}: {} -> {}",
                    m.name(),
                    m.source().name(),
                    m.target().name()
                );
                items.push(json!({
                    "kind": "map", "name": m.name(),
                    "source": m.source().name(), "target": m.target().name(),
                }));
            }
            Item::Gates(n, g) => {
                let _ = writeln!(
                    text,
                    "gates {}: {} gates on {}",
                    n,
                    g.gate_count(),
                    g.graph().name()
                );
                items.push(json!({
                    "kind": "gates", "name": n, "graph": g.graph().name(), "gates": g.gate_count(),
                }));
            }
        }
    }
    Outcome::new(
        0,
        text,
        json!({ "file": file.display().to_string(), "items": items }),
    )
}

pub fn gates(map: &GraphMap, gates: &GateStructure, block: String) -> Outcome {
    let text = format!(
        "intrinsic gates of {}: {}\n\n{}",
        map.name(),
        gates_text(gates),
        block
    );
    Outcome::new(
        0,
        text,
        json!({ "map": map.name(), "gates": gates_json(gates), "block": block }),
    )
}

pub fn certify(map: &GraphMap, r: &IwipReport, index: &IndexReport) -> Outcome {
    let graph = map.source();
    let mut text = format!("map {}\n", map.name());
    let _ = writeln!(text, "intrinsic gates: {}", gates_text(&r.gates));
    let _ = writeln!(text, "π1-automorphism: {}", r.automorphism);
    let _ = writeln!(text, "expanding: {}", r.expanding);
    let _ = writeln!(text, "train track: {}", r.train_track);
    let _ = writeln!(text, "M(f) primitive: {}", r.primitive);
    let _ = writeln!(
        text,
        "gate-Whitehead graphs connected: {}",
        r.whitehead_connected()
    );
    text += &inp_outcome_text(map, &r.inp);
    let _ = writeln!(text, "gate index list: {index}");
    let _ = writeln!(text, "{}", r.verdict);
    let mut j = iwip_json(graph, r);
    j["map"] = json!(map.name());
    j["index"] = index_json(index);
    Outcome::new(code(r.verdict.is_certified()), text, j)
}

pub fn inp(map: &GraphMap, s: &InpSearch) -> Outcome {
    let graph = map.source();
    match &s.certificate {
        Some(c) => Outcome::new(
            0,
            certificate_text(map, c),
            json!({ "map": map.name(), "found": true, "certificate": certificate_json(graph, c) }),
        ),
        None => {
            let text = format!(
                "no periodic INP for {}: power {}, branch length {}, {} illegal images, all legal after {} steps\n",
                map.name(),
                s.power,
                s.c,
                s.dynamics.image_count,
                opt(s.dynamics.absorption)
            );
            let j = json!({
                "map": map.name(),
                "found": false,
                "power": s.power,
                "c": s.c,
                "images": s.dynamics.image_count,
                "absorption": s.dynamics.absorption,
            });
            Outcome::new(0, text, j)
        }
    }
}

pub fn legalizing(
    map: &GraphMap,
    gates_name: &str,
    check: &LegalizingCheck,
    power: Option<Option<usize>>,
) -> Outcome {
    let graph = map.source();
    let mut text = if check.legalizing {
        format!("{} is legalizing for {}\n", map.name(), gates_name)
    } else {
        format!("{} is not legalizing for {}\n", map.name(), gates_name)
    };
    if let Some(w) = &check.witness {
        let _ = writeln!(text, "witness: {}", w.display(graph));
    }
    if let Some(p) = power {
        let _ = writeln!(text, "least legalizing power: {}", opt(p));
    }
    let j = json!({
        "map": map.name(),
        "gates": gates_name,
        "legalizing": check.legalizing,
        "witness": check.witness.as_ref().map(|w| turn_json(graph, w)),
        "legalizing_power": power.flatten(),
    });
    Outcome::new(code(check.legalizing), text, j)
}

pub fn index(map: &GraphMap, source: &str, r: &IndexReport) -> Outcome {
    let mut text = format!("gate index list of {} ({source} gates)\n", map.name());
    for e in &r.entries {
        let _ = writeln!(
            text,
            "  {}: {} gates, index {}",
            e.vertex_name, e.gate_count, e.index
        );
    }
    let _ = writeln!(text, "{r}");
    let mut j = index_json(r);
    j["map"] = json!(map.name());
    j["gates"] = json!(source);
    Outcome::new(0, text, j)
}

pub fn compose(map: &GraphMap, out: &Path) -> Outcome {
    let text = format!(
        "wrote {} to {}\n{}",
        map.name(),
        out.display(),
        images_text(map)
    );
    let j =
        json!({ "map": map.name(), "out": out.display().to_string(), "images": images_json(map) });
    Outcome::new(0, text, j)
}

pub fn theorem(f: &GraphMap, g: &GraphMap, r: &MainTheoremReport) -> Outcome {
    let graph = f.source();
    let comp = if r.swapped {
        format!("{}∘{}", g.name(), f.name())
    } else {
        format!("{}∘{}", f.name(), g.name())
    };
    let mut text = format!("composite {comp} with gates {}\n", gates_text(&r.gates));
    for h in &r.hypotheses {
        let mark = if h.passed { "pass" } else { "FAIL" };
        let _ = write!(text, "[{mark}] {}", h.name);
        if let Some(d) = &h.detail {
            let _ = write!(text, ": {d}");
        }
        text.push('\n');
    }
    let conclusions = match &r.conclusions {
        None => {
            text += "hypotheses fail; no conclusion\n";
            Value::Null
        }
        Some(c) => {
            text += &inp_outcome_text(&c.composite, &c.inp);
            let _ = writeln!(text, "{}", c.iwip.verdict);
            let label = if c.index.certified_stable {
                "certified index list"
            } else {
                "index list"
            };
            let _ = writeln!(text, "{label}: {}", c.index);
            json!({
                "composite": images_json(&c.composite),
                "inp": inp_outcome_json(graph, &c.inp),
                "iwip": iwip_json(graph, &c.iwip),
                "index": index_json(&c.index),
            })
        }
    };
    let j = json!({
        "f": f.name(),
        "g": g.name(),
        "swapped": r.swapped,
        "gates": gates_json(&r.gates),
        "hypotheses": r.hypotheses.iter().map(|h| json!({
            "name": h.name, "passed": h.passed, "detail": h.detail,
        })).collect::<Vec<_>>(),
        "certified": r.certified(),
        "conclusions": conclusions,
    });
    Outcome::new(code(r.certified()), text, j)
}

pub fn factory(r: &FactoryReport, g: &GraphMap, out: &Path) -> Outcome {
    let graph = g.source();
    let mut text = format!(
        "branch length {}, {} illegal turns initially\n",
        r.c, r.initial
    );
    for (i, s) in r.steps.iter().enumerate() {
        let _ = writeln!(
            text,
            "step {}: image {} via {} -> {} remaining",
            i + 1,
            s.image.display(graph),
            s.subturn.display(graph),
            s.remaining
        );
    }
    let _ = writeln!(text, "wrote {} to {}", g.name(), out.display());
    text += &images_text(g);
    let j = json!({
        "c": r.c,
        "initial": r.initial.to_string(),
        "steps": r.steps.iter().map(|s| json!({
            "image": turn_json(graph, &s.image),
            "subturn": turn_json(graph, &s.subturn),
            "remaining": s.remaining.to_string(),
        })).collect::<Vec<_>>(),
        "map": g.name(),
        "images": images_json(g),
        "out": out.display().to_string(),
    });
    Outcome::new(0, text, j)
}

pub fn legalizers(gates: &GateStructure, s: &LegalizerSearch, out: &Path) -> Outcome {
    let graph = gates.graph();
    let mut text = format!("{} gate-stable candidates\n", s.candidates);
    let mut assigned = Vec::new();
    for (t, m) in &s.assigned {
        let spec = format!(
            "{}:{}/{}",
            m.name(),
            dotted(graph, t.first()),
            dotted(graph, t.second())
        );
        let _ = writeln!(text, "{} <- {}", t.display(graph), m.name());
        assigned.push(json!({ "turn": turn_json(graph, t), "map": m.name(), "spec": spec }));
    }
    for t in &s.missing {
        let _ = writeln!(text, "{} <- none", t.display(graph));
    }
    let _ = writeln!(text, "wrote legalizers to {}", out.display());
    let j = json!({
        "candidates": s.candidates,
        "assigned": assigned,
        "missing": s.missing.iter().map(|t| turn_json(graph, t)).collect::<Vec<_>>(),
        "out": out.display().to_string(),
    });
    Outcome::new(code(s.missing.is_empty()), text, j)
}

fn dotted(graph: &Graph, dirs: &[ttk::Dir]) -> String {
    dirs.iter()
        .map(|&d| graph.dir_name(d))
        .collect::<Vec<_>>()
        .join(".")
}

pub fn monoid(exps: &[usize], r: &MonoidReport) -> Outcome {
    let graph = r.composite.source();
    let ok = r.legalizing && r.iwip.verdict.is_certified();
    let words: Vec<String> = r.word.iter().map(|i| i.to_string()).collect();
    let mut text = format!(
        "legalizing exponents {:?}, word {}\n",
        exps,
        words.join(" ")
    );
    let _ = writeln!(text, "legalizing: {}", r.legalizing);
    let _ = writeln!(text, "{}", r.iwip.verdict);
    let _ = writeln!(text, "index list: {}", r.index);
    let j = json!({
        "exponents": exps,
        "word": r.word,
        "legalizing": r.legalizing,
        "iwip": iwip_json(graph, &r.iwip),
        "index": index_json(&r.index),
    });
    Outcome::new(code(ok), text, j)
}

pub fn survey(r: &SurveyReport) -> Outcome {
    let j = json!({
        "rank": r.rank,
        "count": r.count,
        "seed": r.seed,
        "histogram": r.histogram.iter().map(|(k, n)| json!({ "outcome": k, "count": n })).collect::<Vec<_>>(),
    });
    Outcome::new(0, r.to_text(), j)
}
