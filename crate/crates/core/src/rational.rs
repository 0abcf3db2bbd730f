//! Detection of subgroups whose normal forms form a regular language.
//!
//! Each stage intersects the normal-form language with the loops at the
//! basepoint of the current coset-graph approximation and asks whether the
//! result is closed under right multiplication by every subgroup generator
//! and its inverse.  Once it is, the language is exactly the set of normal
//! forms of subgroup elements.

use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use crate::coset::{enumerate, CosetCaps, CosetError, CosetGraphApprox, SnapshotPolicy, SubgroupSpec, DEFAULT_COSET_CAP};
use crate::fsa::{combine_capped, CombineMode, Fsa, FsaError, DEFAULT_STATE_CAP};
use crate::group::{GroupError, Presentation, Word};
use crate::pair::{PairError, PairFsa, Tape};
use crate::structure::{AutomaticStructure, StructureError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DetectError {
    #[error("structure, presentation and subgroup use different alphabets")]
    AlphabetMismatch,
    #[error("complete coset graph at stage {stage} is not stable; the structure does not match the presentation")]
    Inconsistent { stage: usize },
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Coset(CosetError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

impl From<PairError> for DetectError {
    fn from(e: PairError) -> Self {
        DetectError::Structure(e.into())
    }
}

impl From<FsaError> for DetectError {
    fn from(e: FsaError) -> Self {
        DetectError::Structure(e.into())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DetectionBudget {
    pub max_stage: usize,
    pub max_states: usize,
    pub max_cosets: usize,
    pub wall_clock: Option<Duration>,
}

impl Default for DetectionBudget {
    fn default() -> Self {
        DetectionBudget { max_stage: 50, max_states: DEFAULT_STATE_CAP, max_cosets: DEFAULT_COSET_CAP, wall_clock: None }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExhaustReason {
    MaxStage,
    StateCap,
    CosetCap,
    WallClock,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StageStats {
    pub stage: usize,
    pub graph_vertices: usize,
    pub language_states: usize,
    pub stable_count: usize,
    /// The generator that failed and a word of the stage language whose
    /// product with it leaves the language.
    pub witness: Option<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DetectionOutcome {
    Found { m_h: Fsa, stage: usize, stats: Vec<StageStats> },
    Exhausted { stage: usize, reason: ExhaustReason, last_language_states: usize, stats: Vec<StageStats> },
}

impl DetectionOutcome {
    pub fn is_found(&self) -> bool {
        matches!(self, DetectionOutcome::Found { .. })
    }

    pub fn m_h(&self) -> Option<&Fsa> {
        match self {
            DetectionOutcome::Found { m_h, .. } => Some(m_h),
            DetectionOutcome::Exhausted { .. } => None,
        }
    }

    pub fn stats(&self) -> &[StageStats] {
        match self {
            DetectionOutcome::Found { stats, .. } | DetectionOutcome::Exhausted { stats, .. } => stats,
        }
    }

    pub fn report(&self) -> RationalReport {
        match self {
            DetectionOutcome::Found { m_h, stage, stats } => RationalReport {
                outcome: "found",
                stage: *stage,
                reason: None,
                last_language_states: m_h.num_states(),
                stages: stats.clone(),
                m_h: Some(m_h.to_text()),
            },
            DetectionOutcome::Exhausted { stage, reason, last_language_states, stats } => RationalReport {
                outcome: "exhausted",
                stage: *stage,
                reason: Some(*reason),
                last_language_states: *last_language_states,
                stages: stats.clone(),
                m_h: None,
            },
        }
    }
}

/// One-record summary of a run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RationalReport {
    pub outcome: &'static str,
    pub stage: usize,
    pub reason: Option<ExhaustReason>,
    pub last_language_states: usize,
    pub stages: Vec<StageStats>,
    pub m_h: Option<String>,
}

impl RationalReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("outcome {}\nstage {}\n", self.outcome, self.stage);
        if let Some(r) = self.reason {
            out.push_str(&format!("reason {}\n", serde_json::to_string(&r).expect("serializable").trim_matches('"')));
        }
        out.push_str(&format!("language-states {}\n", self.last_language_states));
        out.push_str("# stage graph-vertices language-states stable\n");
        for s in &self.stages {
            out.push_str(&format!("stage {} {} {} {}", s.stage, s.graph_vertices, s.language_states, s.stable_count));
            if let Some((g, w)) = &s.witness {
                out.push_str(&format!(" witness [{g}] [{w}]"));
            }
            out.push('\n');
        }
        out
    }
}

/// What an observer sees of each stage.
pub struct StageView<'a> {
    pub stage: usize,
    pub graph: &'a CosetGraphApprox,
    pub language: &'a Fsa,
}

/// Words of `l_i` whose product with `u` stays in `l_i`, as an automaton.
fn stable_part(l_i: &Fsa, m_u: &PairFsa, cap: usize) -> Result<Fsa, PairError> {
    let r = m_u.restrict_capped(Tape::First, l_i, cap)?.restrict_capped(Tape::Second, l_i, cap)?;
    Ok(r.project(Tape::First))
}

/// `None` when `l_i` is closed under the relation `m_u`; otherwise the
/// ShortLex-least word of `l_i` that leaves it.
pub fn stability_check(l_i: &Fsa, m_u: &PairFsa) -> Result<Option<Word>, PairError> {
    stability_check_capped(l_i, m_u, crate::fsa::state_cap())
}

pub fn stability_check_capped(l_i: &Fsa, m_u: &PairFsa, cap: usize) -> Result<Option<Word>, PairError> {
    let n = stable_part(l_i, m_u, cap)?;
    Ok(n.distinguishing_word_capped(l_i, cap)?)
}

pub fn detect_rational(
    s: &AutomaticStructure,
    p: &Presentation,
    h: &SubgroupSpec,
    budget: DetectionBudget,
) -> Result<DetectionOutcome, DetectError> {
    detect_rational_observed(s, p, h, budget, |_| {})
}

fn is_cap(e: &DetectError) -> bool {
    matches!(
        e,
        DetectError::Structure(StructureError::Fsa(FsaError::StateCap { .. }))
            | DetectError::Structure(StructureError::Pair(PairError::Fsa(FsaError::StateCap { .. })))
    )
}

/// As [`detect_rational`], calling `observe` with every stage language.
pub fn detect_rational_observed(
    s: &AutomaticStructure,
    p: &Presentation,
    h: &SubgroupSpec,
    budget: DetectionBudget,
    mut observe: impl FnMut(&StageView),
) -> Result<DetectionOutcome, DetectError> {
    if s.alphabet() != p.alphabet() || h.alphabet() != p.alphabet() {
        return Err(DetectError::AlphabetMismatch);
    }
    let start = Instant::now();
    let cap = budget.max_states;
    let mut stats: Vec<StageStats> = Vec::new();
    let exhausted = |stage, reason, stats: Vec<StageStats>| {
        let last_language_states = stats.last().map_or(0, |s: &StageStats| s.language_states);
        Ok(DetectionOutcome::Exhausted { stage, reason, last_language_states, stats })
    };

    let s = s.normalize_identity()?;
    let mut mults = Vec::new();
    for u in h.symmetrized() {
        match s.multiplier_for_word(u) {
            Ok(m) => mults.push(m),
            Err(e) => {
                let e = DetectError::from(e);
                return if is_cap(&e) { exhausted(0, ExhaustReason::StateCap, stats) } else { Err(e) };
            }
        }
    }

    let caps = CosetCaps { max_cosets: budget.max_cosets };
    let stream = enumerate(p, h, SnapshotPolicy::EveryWave, caps).map_err(DetectError::Coset)?;
    let mut stage = 0;
    for snap in stream {
        if stage >= budget.max_stage {
            return exhausted(stage, ExhaustReason::MaxStage, stats);
        }
        if budget.wall_clock.is_some_and(|limit| start.elapsed() > limit) {
            return exhausted(stage, ExhaustReason::WallClock, stats);
        }
        let graph = match snap {
            Ok(g) => g,
            Err(CosetError::CosetCap { .. }) => return exhausted(stage, ExhaustReason::CosetCap, stats),
            Err(e) => return Err(DetectError::Coset(e)),
        };
        stage += 1;
        match run_stage(&s, &graph, &mults, h, stage, cap, &mut observe) {
            Ok((l_i, st)) => {
                let stable = st.witness.is_none();
                stats.push(st);
                if stable {
                    return Ok(DetectionOutcome::Found { m_h: l_i, stage, stats });
                }
                if graph.is_complete() {
                    return Err(DetectError::Inconsistent { stage });
                }
            }
            Err(e) if is_cap(&e) => return exhausted(stage, ExhaustReason::StateCap, stats),
            Err(e) => return Err(e),
        }
    }
    exhausted(stage, ExhaustReason::MaxStage, stats)
}

fn run_stage(
    s: &AutomaticStructure,
    graph: &CosetGraphApprox,
    mults: &[PairFsa],
    h: &SubgroupSpec,
    stage: usize,
    cap: usize,
    observe: &mut impl FnMut(&StageView),
) -> Result<(Fsa, StageStats), DetectError> {
    let loops = graph.to_fsa();
    let l_i = combine_capped(s.acceptor(), &loops, CombineMode::Intersection, cap)?.minimize_capped(cap)?.trim();
    observe(&StageView { stage, graph, language: &l_i });
    let mut st = StageStats {
        stage,
        graph_vertices: graph.num_vertices(),
        language_states: l_i.num_states(),
        stable_count: 0,
        witness: None,
    };
    for (u, m_u) in h.symmetrized().iter().zip(mults) {
        match stability_check_capped(&l_i, m_u, cap)? {
            None => st.stable_count += 1,
            Some(w) => {
                st.witness = Some((s.alphabet().format_word(u), s.alphabet().format_word(&w)));
                break;
            }
        }
    }
    Ok((l_i, st))
}

/// Whether `v` represents an element of the subgroup recognized by `m_h`.
pub fn member(s: &AutomaticStructure, m_h: &Fsa, v: &Word) -> Result<bool, DetectError> {
    let nf = s.reduce(v)?;
    Ok(m_h.accepts(&nf).map_err(StructureError::from)?)
}

/// `Ok(None)` when the subgroup is the whole group; otherwise the shortest
/// normal form outside it.
pub fn generates(s: &AutomaticStructure, m_h: &Fsa) -> Result<Option<Word>, DetectError> {
    let rest = combine_capped(s.acceptor(), m_h, CombineMode::Difference, crate::fsa::state_cap())?;
    Ok(rest.shortest_accepted())
}
