use std::error::Error;
use std::fs;
use std::path::Path;
use std::time::Duration;

use qcdetect::coset::{self, CosetCaps, CosetError, SnapshotPolicy, SubgroupSpec, DEFAULT_COSET_CAP};
use qcdetect::fsa::{combine_capped, set_state_cap, state_cap, CombineMode, Fsa, DEFAULT_STATE_CAP};
use qcdetect::group::{Presentation, Symbols, Word};
use qcdetect::hyperbolic::{detect_quasiconvex, parse_rational, HyperbolicContext, QcOutcome};
use qcdetect::rational::{detect_rational, generates, member, DetectionBudget, DetectionOutcome};
use qcdetect::structure::{AutomaticStructure, Fixture};
use serde_json::json;

use crate::args::{Budget, Cli, Command, Emit, FsaOp, Output, Source, Subgroup, SubgroupTarget};

pub const POSITIVE: u8 = 0;
pub const USAGE: u8 = 1;
pub const EXHAUSTED: u8 = 2;
pub const NEGATIVE: u8 = 3;

type Res<T> = Result<T, Box<dyn Error>>;

pub struct Outcome {
    pub status: u8,
    pub report: String,
}

fn done(status: u8, report: String) -> Res<Outcome> {
    Ok(Outcome { status, report })
}

fn fail<T>(msg: impl Into<String>) -> Res<T> {
    Err(msg.into().into())
}

fn read(path: &Path) -> Res<String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()).into())
}

fn write(path: &Path, text: &str) -> Res<()> {
    fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()).into())
}

/// Renders a small record either as pretty JSON or as `key value` lines.
fn record(emit: Emit, value: serde_json::Value) -> String {
    match emit {
        Emit::Json => serde_json::to_string_pretty(&value).expect("serializable") + "\n",
        Emit::Text => {
            let mut out = String::new();
            for (k, v) in value.as_object().expect("record is an object") {
                match v {
                    serde_json::Value::String(s) => out.push_str(&format!("{k} {s}\n")),
                    serde_json::Value::Array(items) => {
                        for i in items {
                            out.push_str(&format!("{k} {}\n", i.as_str().map(String::from).unwrap_or_else(|| i.to_string())));
                        }
                    }
                    other => out.push_str(&format!("{k} {other}\n")),
                }
            }
            out
        }
    }
}

fn with_newline(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

struct Loaded {
    structure: AutomaticStructure,
    presentation: Option<Presentation>,
}

impl Loaded {
    fn presentation(&self) -> Res<&Presentation> {
        self.presentation.as_ref().ok_or_else(|| "this command needs --presentation alongside --structure".into())
    }
}

fn load_structure(src: &Source) -> Res<Loaded> {
    match (&src.fixture, &src.structure) {
        (Some(name), None) => {
            if src.presentation.is_some() {
                return fail("--presentation cannot be combined with --fixture");
            }
            let f = Fixture::load(name)?;
            Ok(Loaded { structure: f.structure, presentation: Some(f.presentation) })
        }
        (None, Some(path)) => {
            let structure = AutomaticStructure::from_text(&read(path)?)?;
            let presentation = match &src.presentation {
                Some(p) => {
                    let p = Presentation::parse(&read(p)?)?;
                    if p.alphabet() != structure.alphabet() {
                        return fail("presentation and structure use different alphabets");
                    }
                    Some(p)
                }
                None => None,
            };
            Ok(Loaded { structure, presentation })
        }
        _ => fail("exactly one of --fixture and --structure is required"),
    }
}

/// Presentation alone, for coset enumeration.
fn load_presentation(src: &Source) -> Res<Presentation> {
    match (&src.fixture, &src.structure, &src.presentation) {
        (Some(name), None, None) => Ok(Fixture::load(name)?.presentation),
        (None, _, Some(p)) => Ok(Presentation::parse(&read(p)?)?),
        _ => fail("give either --fixture or --presentation"),
    }
}

fn load_subgroup(p: &Presentation, sub: &Subgroup) -> Res<SubgroupSpec> {
    let mut words = Vec::new();
    for w in &sub.words {
        words.push(p.alphabet().parse_word(w)?);
    }
    if let Some(path) = &sub.subgroup_file {
        for line in read(path)?.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if !line.is_empty() {
                words.push(p.alphabet().parse_word(line)?);
            }
        }
    }
    Ok(SubgroupSpec::new(p.alphabet(), words)?)
}

fn detection_budget(b: &Budget) -> Res<DetectionBudget> {
    let wall_clock = match b.timeout {
        Some(t) if t.is_finite() && t >= 0.0 => Some(Duration::from_secs_f64(t)),
        Some(_) => return fail("--timeout must be a non-negative number of seconds"),
        None => None,
    };
    let max_states = b.max_states.unwrap_or(DEFAULT_STATE_CAP);
    if max_states == 0 || b.max_cosets == Some(0) {
        return fail("budgets must be positive");
    }
    set_state_cap(max_states);
    Ok(DetectionBudget {
        max_stage: b.max_stage,
        max_states,
        max_cosets: b.max_cosets.unwrap_or(DEFAULT_COSET_CAP),
        wall_clock,
    })
}

fn render_detection(outcome: &DetectionOutcome, emit: Emit) -> String {
    let report = outcome.report();
    match emit {
        Emit::Json => with_newline(report.to_json()),
        Emit::Text => {
            let mut out = report.to_text();
            if let Some(m) = outcome.m_h() {
                out.push_str("m_h\n");
                out.push_str(&m.to_text());
            }
            out
        }
    }
}

/// The subgroup automaton, read from a file or computed by detection.
/// `Err(report)` carries the rendered report of an exhausted run.
fn subgroup_automaton(
    loaded: &Loaded,
    target: &SubgroupTarget,
    budget: &Budget,
    emit: Emit,
) -> Res<Result<Fsa, String>> {
    let budget = detection_budget(budget)?;
    match &target.mh {
        Some(path) => {
            if !target.subgroup.words.is_empty() || target.subgroup.subgroup_file.is_some() {
                return fail("--mh cannot be combined with --subgroup");
            }
            let m = Fsa::from_text(&read(path)?)?;
            if !m.symbols().same_as(loaded.structure.alphabet().symbols()) {
                return fail("subgroup automaton and structure use different alphabets");
            }
            Ok(Ok(m))
        }
        None => {
            let p = loaded.presentation()?;
            let h = load_subgroup(p, &target.subgroup)?;
            let outcome = detect_rational(&loaded.structure, p, &h, budget)?;
            match outcome.m_h() {
                Some(m) => Ok(Ok(m.clone())),
                None => Ok(Err(render_detection(&outcome, emit))),
            }
        }
    }
}

pub fn run(cli: &Cli) -> Res<Outcome> {
    match &cli.command {
        Command::Reduce { source, word, out } => {
            let s = load_structure(source)?.structure;
            let w = s.alphabet().parse_word(word)?;
            let nf = s.reduce(&w)?;
            let alpha = s.alphabet();
            done(POSITIVE, record(out.emit, json!({"word": alpha.format_word(&w), "normal_form": alpha.format_word(&nf)})))
        }
        Command::Wp { source, word, out } => {
            let s = load_structure(source)?.structure;
            let w = s.alphabet().parse_word(word)?;
            let nf = s.reduce(&w)?;
            let trivial = nf.is_empty();
            let alpha = s.alphabet();
            let rec = json!({"word": alpha.format_word(&w), "trivial": trivial, "normal_form": alpha.format_word(&nf)});
            done(if trivial { POSITIVE } else { NEGATIVE }, record(out.emit, rec))
        }
        Command::DetectRational { source, subgroup, budget, out } => {
            let loaded = load_structure(source)?;
            let p = loaded.presentation()?;
            let h = load_subgroup(p, subgroup)?;
            let outcome = detect_rational(&loaded.structure, p, &h, detection_budget(budget)?)?;
            if let (Some(m), Some(path)) = (outcome.m_h(), &out.output) {
                write(path, &m.to_text())?;
            }
            let status = if outcome.is_found() { POSITIVE } else { EXHAUSTED };
            done(status, render_detection(&outcome, out.emit))
        }
        Command::Member { source, target, word, budget, out } => {
            let loaded = load_structure(source)?;
            let w = loaded.structure.alphabet().parse_word(word)?;
            let m = match subgroup_automaton(&loaded, target, budget, out.emit)? {
                Ok(m) => m,
                Err(report) => return done(EXHAUSTED, report),
            };
            let is_member = member(&loaded.structure, &m, &w)?;
            let rec = json!({"word": loaded.structure.alphabet().format_word(&w), "member": is_member});
            done(if is_member { POSITIVE } else { NEGATIVE }, record(out.emit, rec))
        }
        Command::Generates { source, target, budget, out } => {
            let loaded = load_structure(source)?;
            let m = match subgroup_automaton(&loaded, target, budget, out.emit)? {
                Ok(m) => m,
                Err(report) => return done(EXHAUSTED, report),
            };
            match generates(&loaded.structure, &m)? {
                None => done(POSITIVE, record(out.emit, json!({"generates": true}))),
                Some(w) => {
                    let rec = json!({"generates": false, "missing": loaded.structure.alphabet().format_word(&w)});
                    done(NEGATIVE, record(out.emit, rec))
                }
            }
        }
        Command::DetectQc { source, subgroup, delta, sample_depth, budget, out } => {
            let loaded = load_structure(source)?;
            let p = loaded.presentation()?;
            let h = load_subgroup(p, subgroup)?;
            let Some(delta) = parse_rational(delta) else {
                return fail(format!("cannot read delta {delta:?}"));
            };
            let budget = detection_budget(budget)?;
            let ctx = HyperbolicContext::new(&loaded.structure, delta, p, *sample_depth)?;
            let outcome = detect_quasiconvex(&ctx, &h, budget)?;
            let status = if matches!(outcome, QcOutcome::Certified(_)) { POSITIVE } else { EXHAUSTED };
            let report = match out.emit {
                Emit::Json => with_newline(outcome.to_json()),
                Emit::Text => outcome.to_text(),
            };
            done(status, report)
        }
        Command::Tc { source, subgroup, every, budget, out } => run_tc(source, subgroup, *every, budget, out),
        Command::Fsa { op, out } => run_fsa(op, out),
        Command::Validate { source, depth, out } => {
            let s = load_structure(source)?.structure;
            let report = s.validate(*depth);
            let status = if report.all_ok() { POSITIVE } else { NEGATIVE };
            let text = match out.emit {
                Emit::Json => with_newline(report.to_json()),
                Emit::Text => report.to_text(),
            };
            done(status, text)
        }
    }
}

fn run_tc(source: &Source, subgroup: &Subgroup, every: usize, budget: &Budget, out: &Output) -> Res<Outcome> {
    let p = load_presentation(source)?;
    let h = load_subgroup(&p, subgroup)?;
    let budget = detection_budget(budget)?;
    if every == 0 {
        return fail("--every must be positive");
    }
    if let Some(dir) = &out.output {
        fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    }
    let policy = if every == 1 { SnapshotPolicy::EveryWave } else { SnapshotPolicy::EveryNthWave(every) };
    let snapshots = coset::enumerate(&p, &h, policy, CosetCaps { max_cosets: budget.max_cosets })?;
    let mut rows = Vec::new();
    let mut status = EXHAUSTED;
    let mut reason = Some("max_stage");
    for snap in snapshots {
        let snap = match snap {
            Ok(s) => s,
            Err(CosetError::CosetCap { .. }) => {
                reason = Some("coset_cap");
                break;
            }
            Err(e) => return Err(e.into()),
        };
        if snap.stage() > budget.max_stage {
            break;
        }
        if let Some(dir) = &out.output {
            write(&dir.join(format!("snapshot-{:04}.txt", snap.stage())), &snap.to_text())?;
        }
        rows.push(json!({"stage": snap.stage(), "vertices": snap.num_vertices(), "complete": snap.is_complete()}));
        if snap.is_complete() {
            status = POSITIVE;
            reason = None;
            break;
        }
    }
    let report = match out.emit {
        Emit::Json => {
            let mut v = json!({"outcome": if status == POSITIVE { "complete" } else { "exhausted" }, "snapshots": rows});
            if let Some(r) = reason {
                v["reason"] = json!(r);
            }
            serde_json::to_string_pretty(&v).expect("serializable") + "\n"
        }
        Emit::Text => {
            let mut t = format!("outcome {}\n", if status == POSITIVE { "complete" } else { "exhausted" });
            if let Some(r) = reason {
                t.push_str(&format!("reason {r}\n"));
            }
            t.push_str("# stage vertices complete\n");
            for r in &rows {
                t.push_str(&format!("snapshot {} {} {}\n", r["stage"], r["vertices"], r["complete"]));
            }
            t
        }
    };
    done(status, report)
}

fn load_fsa(path: &Path) -> Res<Fsa> {
    Ok(Fsa::from_text(&read(path)?)?)
}

fn parse_over(symbols: &Symbols, text: &str) -> Res<Word> {
    let text = text.trim();
    if text.is_empty() || text == "ε" {
        return Ok(Word::empty());
    }
    text.split_whitespace()
        .map(|t| symbols.lookup(t).ok_or_else(|| format!("unknown symbol {t:?}").into()))
        .collect::<Res<Vec<_>>>()
        .map(Word)
}

fn format_over(symbols: &Symbols, w: &Word) -> String {
    if w.is_empty() {
        return "ε".into();
    }
    w.letters().iter().map(|&l| symbols.name(l)).collect::<Vec<_>>().join(" ")
}

fn emit_fsa(m: &Fsa, out: &Output) -> Res<Outcome> {
    let text = m.to_text();
    match &out.output {
        Some(path) => {
            write(path, &text)?;
            let rec = json!({"states": m.num_states(), "output": path.display().to_string()});
            done(POSITIVE, record(out.emit, rec))
        }
        None => match out.emit {
            Emit::Text => done(POSITIVE, text),
            Emit::Json => done(POSITIVE, record(Emit::Json, json!({"states": m.num_states(), "fsa": text}))),
        },
    }
}

fn run_fsa(op: &FsaOp, out: &Output) -> Res<Outcome> {
    let cap = state_cap();
    let binary = |a: &Path, b: &Path, mode| -> Res<Outcome> {
        let m = combine_capped(&load_fsa(a)?, &load_fsa(b)?, mode, cap)?.minimize_capped(cap)?.trim();
        emit_fsa(&m, out)
    };
    match op {
        FsaOp::Minimize { input } => emit_fsa(&load_fsa(input)?.minimize_capped(cap)?.trim(), out),
        FsaOp::Determinize { input } => emit_fsa(&load_fsa(input)?.determinize_capped(cap)?, out),
        FsaOp::Intersect { first, second } => binary(first, second, CombineMode::Intersection),
        FsaOp::Union { first, second } => binary(first, second, CombineMode::Union),
        FsaOp::Difference { first, second } => binary(first, second, CombineMode::Difference),
        FsaOp::Equivalent { first, second } => {
            let a = load_fsa(first)?;
            match a.distinguishing_word_capped(&load_fsa(second)?, cap)? {
                None => done(POSITIVE, record(out.emit, json!({"equivalent": true}))),
                Some(w) => {
                    let rec = json!({"equivalent": false, "witness": format_over(a.symbols(), &w)});
                    done(NEGATIVE, record(out.emit, rec))
                }
            }
        }
        FsaOp::Accepts { input, word } => {
            let m = load_fsa(input)?;
            let w = parse_over(m.symbols(), word)?;
            let yes = m.accepts(&w)?;
            let rec = json!({"word": format_over(m.symbols(), &w), "accepted": yes});
            done(if yes { POSITIVE } else { NEGATIVE }, record(out.emit, rec))
        }
        FsaOp::Enumerate { input, max_len } => {
            let m = load_fsa(input)?;
            let words: Vec<String> = m.enumerate_upto(*max_len).iter().map(|w| format_over(m.symbols(), w)).collect();
            done(POSITIVE, record(out.emit, json!({"count": words.len(), "word": words})))
        }
        FsaOp::IsEmpty { input } => {
            let empty = load_fsa(input)?.is_empty();
            done(if empty { POSITIVE } else { NEGATIVE }, record(out.emit, json!({"empty": empty})))
        }
    }
}
