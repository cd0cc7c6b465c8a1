use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use ttk::certify::{
    certify_iwip, legalizing_factory, monoid_certify, monoid_setup, search_elementary_legalizers,
    theorem_main, theorem_main_swapped,
};
use ttk::gates::intrinsic_gates;
use ttk::inp::{inp_search, is_legalizing, legalizing_power};
use ttk::io::{serialize_gates, Document, Item};
use ttk::long_turns::LongTurn;
use ttk::survey::{survey, threads_from_env};
use ttk::whitehead::gate_index_list;
use ttk::{Error, GateStructure, GraphMap};

mod report;

#[derive(Parser)]
#[command(
    name = "ttk",
    version,
    about = "Train track toolkit for free group automorphisms"
)]
struct Cli {
    /// Emit a machine-readable JSON report.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct MapArgs {
    file: PathBuf,
    #[arg(long)]
    map: String,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a file and list its objects.
    Validate { file: PathBuf },
    /// Intrinsic gate structure of a map.
    Gates(MapArgs),
    /// Sufficient iwip criterion on the intrinsic gate structure.
    Certify(MapArgs),
    /// Search for a periodic INP.
    Inp(MapArgs),
    /// Decide whether a map is legalizing for a gate structure.
    Legalizing {
        #[command(flatten)]
        target: MapArgs,
        #[arg(long)]
        gates: String,
        /// Also compute the least legalizing power.
        #[arg(long)]
        power: bool,
    },
    /// Gate index list at the essential vertices.
    Index {
        #[command(flatten)]
        target: MapArgs,
        /// Gate structure to use instead of the intrinsic one.
        #[arg(long)]
        gates: Option<String>,
    },
    /// Compose maps left to right as M1∘M2∘... and write the result.
    Compose {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        maps: Vec<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check the hypotheses for f∘g and certify the composite.
    Theorem {
        file: PathBuf,
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        /// Certify g∘f instead.
        #[arg(long)]
        swapped: bool,
    },
    /// Build a legalizing map from elementary legalizers and an expander.
    Factory {
        file: PathBuf,
        #[arg(long)]
        gates: String,
        /// Assignments `MAP:TURN` with TURN written `a.b/c.d`.
        #[arg(long, value_delimiter = ',', required = true)]
        legalizers: Vec<String>,
        #[arg(long)]
        expander: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Search gate-stable elementary legalizers for the illegal turns of a
    /// given branch length and write them as maps.
    Legalizers {
        file: PathBuf,
        #[arg(long)]
        gates: String,
        #[arg(long)]
        length: usize,
        #[arg(long, default_value_t = 4)]
        max_len: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Certify a product of legalizing powers of generators.
    Monoid {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        maps: Vec<String>,
        /// 1-based generator indices separated by spaces.
        #[arg(long)]
        word: String,
    },
    /// Histogram of outcomes over random positive automorphisms.
    Survey {
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        count: usize,
        #[arg(long)]
        seed: u64,
    },
}

/// A finished command: exit status plus both renderings of its report.
pub struct Outcome {
    pub code: u8,
    pub text: String,
    pub json: Value,
}

impl Outcome {
    fn new(code: u8, text: String, json: Value) -> Self {
        Outcome { code, text, json }
    }
}

/// Input errors exit with 2; analysis failures exit with 1 and a report.
enum Failure {
    Input(String),
    Analysis(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotGateMorphism(_)
            | Error::NotTrainTrack
            | Error::NotExpanding
            | Error::NoExpandingPower(_)
            | Error::BoundTooSmall { .. }
            | Error::BranchTooShort { .. }
            | Error::BudgetExceeded(_)
            | Error::MissingLegalizer(_)
            | Error::GeneratorRejected { .. } => Failure::Analysis(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

type Run<T> = std::result::Result<T, Failure>;

fn input(msg: impl Into<String>) -> Failure {
    Failure::Input(msg.into())
}

fn load(file: &Path) -> Run<Document> {
    let text = fs::read_to_string(file).map_err(|e| input(format!("{}: {e}", file.display())))?;
    Document::parse(&text).map_err(|e| input(format!("{}: {e}", file.display())))
}

fn get_map<'a>(doc: &'a Document, name: &str) -> Run<&'a GraphMap> {
    doc.map(name)
        .ok_or_else(|| input(format!("unknown map `{name}`")))
}

fn get_gates<'a>(doc: &'a Document, name: &str) -> Run<&'a GateStructure> {
    doc.gates(name)
        .ok_or_else(|| input(format!("unknown gate structure `{name}`")))
}

fn write_doc(path: &Path, doc: &Document) -> Run<()> {
    fs::write(path, doc.serialize()).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn doc_with_map(map: &GraphMap) -> Run<Document> {
    let mut doc = Document::new();
    doc.push(Item::Graph(map.source().clone()))?;
    if map.target().name() != map.source().name() {
        doc.push(Item::Graph(map.target().clone()))?;
    }
    doc.push(Item::Map(map.clone()))?;
    Ok(doc)
}

/// Parses `a.b/c.d` into a long turn; branch tokens are separated by dots.
fn parse_turn(gates: &GateStructure, s: &str) -> Run<LongTurn> {
    let (a, b) = s
        .split_once('/')
        .ok_or_else(|| input(format!("turn `{s}` must be written FIRST/SECOND")))?;
    let graph = gates.graph();
    let a = graph.parse_dirs(&a.replace('.', " "))?;
    let b = graph.parse_dirs(&b.replace('.', " "))?;
    Ok(LongTurn::new(gates, a, b)?)
}

fn parse_word(s: &str) -> Run<Vec<usize>> {
    s.split_whitespace()
        .map(|t| {
            t.parse()
                .map_err(|_| input(format!("bad generator index `{t}` in word")))
        })
        .collect()
}

fn run(command: &Command) -> Run<Outcome> {
    match command {
        Command::Validate { file } => {
            let doc = load(file)?;
            Ok(report::validate(file, &doc))
        }
        Command::Gates(a) => {
            let doc = load(&a.file)?;
            let map = get_map(&doc, &a.map)?;
            let gates = intrinsic_gates(map)?;
            let block = serialize_gates(&format!("G_{}", map.name()), &gates);
            Ok(report::gates(map, &gates, block))
        }
        Command::Certify(a) => {
            let doc = load(&a.file)?;
            let map = get_map(&doc, &a.map)?;
            let r = certify_iwip(map)?;
            let index = gate_index_list(map, &r.gates)?;
            Ok(report::certify(map, &r, &index))
        }
        Command::Inp(a) => {
            let doc = load(&a.file)?;
            let map = get_map(&doc, &a.map)?;
            let gates = intrinsic_gates(map)?;
            let s = inp_search(map, &gates)?;
            Ok(report::inp(map, &s))
        }
        Command::Legalizing {
            target,
            gates,
            power,
        } => {
            let doc = load(&target.file)?;
            let map = get_map(&doc, &target.map)?;
            let gs = get_gates(&doc, gates)?;
            let check = is_legalizing(map, gs)?;
            let p = if *power {
                Some(legalizing_power(map, gs, None)?)
            } else {
                None
            };
            Ok(report::legalizing(map, gates, &check, p))
        }
        Command::Index { target, gates } => {
            let doc = load(&target.file)?;
            let map = get_map(&doc, &target.map)?;
            let (source, gs) = match gates {
                Some(name) => (name.clone(), get_gates(&doc, name)?.clone()),
                None => ("intrinsic".to_string(), intrinsic_gates(map)?),
            };
            let r = gate_index_list(map, &gs)?;
            Ok(report::index(map, &source, &r))
        }
        Command::Compose { file, maps, out } => {
            let doc = load(file)?;
            let mut composite: Option<GraphMap> = None;
            for name in maps {
                let m = get_map(&doc, name)?;
                composite = Some(match composite {
                    None => m.clone(),
                    Some(c) => GraphMap::compose(&c, m)?,
                });
            }
            let composite = composite
                .ok_or_else(|| input("no maps given"))?
                .with_name(&maps.join("_"));
            write_doc(out, &doc_with_map(&composite)?)?;
            Ok(report::compose(&composite, out))
        }
        Command::Theorem {
            file,
            f,
            g,
            swapped,
        } => {
            let doc = load(file)?;
            let f = get_map(&doc, f)?;
            let g = get_map(&doc, g)?;
            let r = if *swapped {
                theorem_main_swapped(f, g)?
            } else {
                theorem_main(f, g)?
            };
            Ok(report::theorem(f, g, &r))
        }
        Command::Factory {
            file,
            gates,
            legalizers,
            expander,
            out,
        } => {
            let doc = load(file)?;
            let gs = get_gates(&doc, gates)?;
            let h = get_map(&doc, expander)?;
            let mut elementary = std::collections::BTreeMap::new();
            let mut length = None;
            for spec in legalizers {
                let (name, turn) = spec
                    .split_once(':')
                    .ok_or_else(|| input(format!("legalizer `{spec}` must be MAP:TURN")))?;
                let turn = parse_turn(gs, turn)?;
                let (l1, l2) = turn.branch_lengths();
                if l1 != l2 || length.is_some_and(|l| l != l1) {
                    return Err(input("all legalized turns must share one branch length"));
                }
                length = Some(l1);
                elementary.insert(turn, get_map(&doc, name)?.clone());
            }
            let l = length.ok_or_else(|| input("no legalizers given"))?;
            let r = legalizing_factory(&elementary, h, gs, l)?;
            let g = r.map.clone().with_name("g");
            let mut out_doc = doc_with_map(&g)?;
            out_doc.push(Item::Gates(gates.clone(), gs.clone()))?;
            write_doc(out, &out_doc)?;
            Ok(report::factory(&r, &g, out))
        }
        Command::Legalizers {
            file,
            gates,
            length,
            max_len,
            out,
        } => {
            let doc = load(file)?;
            let gs = get_gates(&doc, gates)?;
            let s = search_elementary_legalizers(gs, *length, *max_len, 1 << 20)?;
            let mut out_doc = Document::new();
            out_doc.push(Item::Graph(gs.graph().clone()))?;
            let mut used: Vec<&GraphMap> = s.assigned.values().collect();
            used.sort_by(|a, b| a.name().cmp(b.name()));
            used.dedup_by(|a, b| a.name() == b.name());
            for m in used {
                out_doc.push(Item::Map(m.clone()))?;
            }
            write_doc(out, &out_doc)?;
            Ok(report::legalizers(gs, &s, out))
        }
        Command::Monoid { file, maps, word } => {
            let doc = load(file)?;
            let gens: Vec<GraphMap> = maps
                .iter()
                .map(|n| get_map(&doc, n).cloned())
                .collect::<Run<_>>()?;
            let word = parse_word(word)?;
            let (gates, exps) = monoid_setup(&gens)?;
            let r = monoid_certify(&gens, &exps, &gates, &word)?;
            Ok(report::monoid(&exps, &r))
        }
        Command::Survey { rank, count, seed } => {
            if *rank < 2 {
                return Err(input("rank must be at least 2"));
            }
            let r = survey(*rank, *count, *seed, threads_from_env())?;
            Ok(report::survey(&r))
        }
    }
}

fn name(command: &Command) -> &'static str {
    match command {
        Command::Validate { .. } => "validate",
        Command::Gates(_) => "gates",
        Command::Certify(_) => "certify",
        Command::Inp(_) => "inp",
        Command::Legalizing { .. } => "legalizing",
        Command::Index { .. } => "index",
        Command::Compose { .. } => "compose",
        Command::Theorem { .. } => "theorem",
        Command::Factory { .. } => "factory",
        Command::Legalizers { .. } => "legalizers",
        Command::Monoid { .. } => "monoid",
        Command::Survey { .. } => "survey",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command = name(&cli.command);
    let outcome = match run(&cli.command) {
        Ok(o) => o,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
        Err(Failure::Analysis(msg)) => {
            Outcome::new(1, format!("failed: {msg}\n"), json!({ "error": msg }))
        }
    };
    if cli.json {
        let mut obj = json!({ "command": command, "status": report::status(outcome.code) });
        if let (Value::Object(o), Value::Object(extra)) = (&mut obj, outcome.json) {
            o.extend(extra);
        }
        println!(
            "{}",
            serde_json::to_string_pretty(&obj).expect("JSON values serialize")
        );
    } else {
        print!("{}", outcome.text);
    }
    ExitCode::from(outcome.code)
}
