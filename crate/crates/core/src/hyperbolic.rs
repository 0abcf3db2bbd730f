//! Quasiconvexity prober for subgroups of word hyperbolic groups.
//!
//! The subgroup is explored through its own Cayley graph over the
//! symmetrized generators `V`.  For stage `i`, every `V`-geodesic word of
//! length at most `2i` is substituted into a path over the group generators,
//! and the least `λ` making all those paths `λ`-quasigeodesic is computed.
//! The stage is accepted once all `V`-geodesic words up to length `2j`
//! satisfy the same `λ` for every `j` up to `⌊1000·K·i·δ·λ⌋`.
//!
//! All constants are exact rationals.

use std::collections::HashMap;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::coset::SubgroupSpec;
use crate::group::{Letter, Presentation, Word};
use crate::rational::{DetectionBudget, ExhaustReason};
use crate::structure::{AutomaticStructure, StructureError};

const NONE: u32 = u32::MAX;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HyperbolicError {
    #[error("delta must be non-negative")]
    NegativeDelta,
    #[error("distortion constant must be at least 1")]
    DistortionBelowOne,
    #[error("normal form of {word} is longer than the word; the structure is not geodesic")]
    NotGeodesic { word: String },
    #[error("structure, presentation and subgroup use different alphabets")]
    AlphabetMismatch,
    #[error("ball exceeds {cap} elements")]
    BallCap { cap: usize },
    #[error(transparent)]
    Structure(#[from] StructureError),
}

/// A geodesic automatic structure together with a thinness constant for
/// its triangles.
#[derive(Clone, Debug)]
pub struct HyperbolicContext {
    structure: AutomaticStructure,
    delta: BigRational,
    presentation: Presentation,
}

impl HyperbolicContext {
    /// Normalizes the identity and checks `|reduce(w)| ≤ |w|` for every
    /// word up to `sample_depth`.
    pub fn new(
        structure: &AutomaticStructure,
        delta: BigRational,
        presentation: &Presentation,
        sample_depth: usize,
    ) -> Result<HyperbolicContext, HyperbolicError> {
        if delta.is_negative() {
            return Err(HyperbolicError::NegativeDelta);
        }
        if structure.alphabet() != presentation.alphabet() {
            return Err(HyperbolicError::AlphabetMismatch);
        }
        let structure = structure.normalize_identity()?;
        let mut stack = vec![(Word::empty(), Word::empty())];
        while let Some((w, nf)) = stack.pop() {
            if nf.len() > w.len() {
                return Err(HyperbolicError::NotGeodesic { word: structure.alphabet().format_word(&w) });
            }
            if w.len() < sample_depth {
                for x in structure.alphabet().letters() {
                    let mut v = w.clone();
                    v.push(x);
                    let u = structure.multiply(&nf, &Word(vec![x]))?;
                    stack.push((v, u));
                }
            }
        }
        Ok(HyperbolicContext { structure, delta, presentation: presentation.clone() })
    }

    pub fn structure(&self) -> &AutomaticStructure {
        &self.structure
    }

    pub fn delta(&self) -> &BigRational {
        &self.delta
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    /// Word-metric distance between the endpoints of `w`.
    pub fn distance(&self, w: &[Letter]) -> Result<usize, HyperbolicError> {
        Ok(self.structure.reduce(&Word(w.to_vec()))?.len())
    }
}

/// Ball of the subgroup's Cayley graph over `V`, elements identified by
/// their normal forms.
#[derive(Clone, Debug)]
pub struct HBall {
    radius: usize,
    elements: Vec<Word>,
    dist: Vec<usize>,
    parent: Vec<Option<(u32, u32)>>,
    index: HashMap<Word, u32>,
    /// `adj[e][j]` is the element `e·V_j`; only filled for elements inside
    /// the radius.
    adj: Vec<Vec<u32>>,
    frontier: usize,
}

impl HBall {
    fn new() -> HBall {
        HBall {
            radius: 0,
            elements: vec![Word::empty()],
            dist: vec![0],
            parent: vec![None],
            index: HashMap::from([(Word::empty(), 0)]),
            adj: vec![Vec::new()],
            frontier: 0,
        }
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Normal forms in breadth-first order with their distances.
    pub fn elements(&self) -> impl Iterator<Item = (&Word, usize)> {
        self.elements.iter().zip(self.dist.iter().copied())
    }

    pub fn distance_of(&self, nf: &Word) -> Option<usize> {
        self.index.get(nf).map(|&i| self.dist[i as usize])
    }

    /// A geodesic word over `V` reaching the element, via parent pointers.
    pub fn geodesic_to(&self, nf: &Word) -> Option<Word> {
        let mut cur = *self.index.get(nf)?;
        let mut letters = Vec::new();
        while let Some((p, j)) = self.parent[cur as usize] {
            letters.push(Letter(j));
            cur = p;
        }
        letters.reverse();
        Some(Word(letters))
    }

    fn grow(&mut self, ctx: &HyperbolicContext, v: &[Word], radius: usize, cap: usize) -> Result<(), HyperbolicError> {
        while self.radius < radius {
            let end = self.elements.len();
            for e in self.frontier..end {
                let mut row = Vec::with_capacity(v.len());
                for (j, g) in v.iter().enumerate() {
                    let nf = ctx.structure.multiply(&self.elements[e], g)?;
                    let t = match self.index.get(&nf) {
                        Some(&t) => t,
                        None => {
                            if self.elements.len() >= cap {
                                return Err(HyperbolicError::BallCap { cap });
                            }
                            let t = self.elements.len() as u32;
                            self.index.insert(nf.clone(), t);
                            self.elements.push(nf);
                            self.dist.push(self.dist[e] + 1);
                            self.parent.push(Some((e as u32, j as u32)));
                            self.adj.push(Vec::new());
                            t
                        }
                    };
                    row.push(t);
                }
                self.adj[e] = row;
            }
            self.frontier = end;
            self.radius += 1;
        }
        Ok(())
    }

    /// `V`-geodesic words of exactly length `len`, in ShortLex order.
    fn geodesics_of_length(&self, len: usize, limit: usize) -> Option<Vec<Word>> {
        assert!(len <= self.radius);
        let mut layer: Vec<(Word, u32)> = vec![(Word::empty(), 0)];
        for _ in 0..len {
            let mut next = Vec::new();
            for (w, e) in &layer {
                for (j, &t) in self.adj[*e as usize].iter().enumerate() {
                    if t != NONE && self.dist[t as usize] == self.dist[*e as usize] + 1 {
                        let mut u = w.clone();
                        u.push(Letter(j as u32));
                        next.push((u, t));
                        if next.len() > limit {
                            return None;
                        }
                    }
                }
            }
            layer = next;
        }
        Some(layer.into_iter().map(|(w, _)| w).collect())
    }
}

pub fn h_ball(ctx: &HyperbolicContext, h: &SubgroupSpec, radius: usize, cap: usize) -> Result<HBall, HyperbolicError> {
    if h.alphabet() != ctx.structure.alphabet() {
        return Err(HyperbolicError::AlphabetMismatch);
    }
    let mut b = HBall::new();
    b.grow(ctx, h.symmetrized(), radius, cap)?;
    Ok(b)
}

/// All `V`-geodesic words of length at most `len`; letters index `V`.
pub fn v_geodesic_words(ball: &HBall, len: usize) -> Vec<Word> {
    (0..=len).flat_map(|l| ball.geodesics_of_length(l, usize::MAX).expect("no limit")).collect()
}

fn ratio(s: usize, d: usize) -> BigRational {
    BigRational::new(BigInt::from(s), BigInt::from(d + 1))
}

/// The path over the group generators spelled by a word over `V`.
pub fn substituted_path(word: &Word, images: &[Word]) -> Vec<Letter> {
    word.letters().iter().flat_map(|j| images[j.index()].letters().iter().copied()).collect()
}

/// Largest `s/(d+1)` over pairs of vertices of the substituted path, where
/// `s` is the arc length and `d` the distance between the two vertices.
fn path_lambda(ctx: &HyperbolicContext, path: &[Letter]) -> Result<BigRational, HyperbolicError> {
    let mut best = BigRational::zero();
    for p in 0..path.len() {
        let mut nf = Word::empty();
        for q in p + 1..=path.len() {
            nf = ctx.structure.multiply(&nf, &Word(vec![path[q - 1]]))?;
            let r = ratio(q - p, nf.len());
            if r > best {
                best = r;
            }
        }
    }
    Ok(best)
}

/// `max(1, max s/(d+1))` over all listed words.
pub fn min_lambda(ctx: &HyperbolicContext, words: &[Word], images: &[Word]) -> Result<BigRational, HyperbolicError> {
    let mut lambda = BigRational::one();
    for w in words {
        let l = path_lambda(ctx, &substituted_path(w, images))?;
        if l > lambda {
            lambda = l;
        }
    }
    Ok(lambda)
}

/// `1000·δ·(1 + log₂ C)` with `log₂ C` replaced by `m/1024` for the least
/// integer `m` with `2^m ≥ C^1024`.  The second component tells whether
/// the logarithm was exact.
pub fn epsilon_from(c: &BigRational, delta: &BigRational) -> Result<(BigRational, bool), HyperbolicError> {
    if *c < BigRational::one() {
        return Err(HyperbolicError::DistortionBelowOne);
    }
    let num = c.numer().pow(1024u32);
    let den = c.denom().pow(1024u32);
    let mut m = (num.bits() as i64 - den.bits() as i64 - 1).max(0) as u64;
    while (den.clone() << m) < num {
        m += 1;
    }
    let exact = (den << m) == num;
    let log = BigRational::new(BigInt::from(m), BigInt::from(1024));
    let eps = BigRational::from_integer(BigInt::from(1000)) * delta * (BigRational::one() + log);
    Ok((eps, exact))
}

/// Parses `p`, `p/q` or a decimal such as `0.25` exactly.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    if let Some((n, d)) = text.split_once('/') {
        let (n, d): (BigInt, BigInt) = (n.trim().parse().ok()?, d.trim().parse().ok()?);
        return (!d.is_zero()).then(|| BigRational::new(n, d));
    }
    if let Some((int, frac)) = text.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let negative = int.starts_with('-');
        let whole: BigInt = if int.is_empty() || int == "-" { BigInt::zero() } else { int.parse().ok()? };
        let scale = BigInt::from(10).pow(frac.len() as u32);
        let f = BigRational::new(frac.parse().ok()?, scale);
        let w = BigRational::from_integer(whole);
        return Some(if negative { w - f } else { w + f });
    }
    text.parse::<BigInt>().ok().map(BigRational::from_integer)
}

fn rat_str(r: &BigRational) -> String {
    r.to_string()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QcReport {
    pub stage: usize,
    pub lambda: String,
    pub distortion: String,
    pub epsilon: String,
    /// False when `ε` uses an upper bound for `log₂ C`.
    pub epsilon_exact: bool,
    pub k: usize,
    pub delta: String,
    pub delta_zero: bool,
    pub step3_vacuous: bool,
    /// `(j, number of new geodesic words checked)` for the final stage.
    pub words_checked: Vec<(usize, usize)>,
    #[serde(skip)]
    pub lambda_exact: BigRational,
    #[serde(skip)]
    pub epsilon_exact_value: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LambdaTrace {
    pub stage: usize,
    pub lambda: String,
    /// The `j` whose geodesic words broke the stage's `λ`, if any.
    pub failed_at: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QcOutcome {
    Certified(QcReport),
    Exhausted { stage: usize, reason: ExhaustReason, trace: Vec<LambdaTrace> },
}

#[derive(Serialize)]
struct QcRecord<'a> {
    outcome: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<&'a QcReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    stage: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<ExhaustReason>,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace: Option<&'a [LambdaTrace]>,
}

impl QcOutcome {
    fn record(&self) -> QcRecord<'_> {
        match self {
            QcOutcome::Certified(r) => {
                QcRecord { outcome: "certified", report: Some(r), stage: None, reason: None, trace: None }
            }
            QcOutcome::Exhausted { stage, reason, trace } => QcRecord {
                outcome: "exhausted",
                report: None,
                stage: Some(*stage),
                reason: Some(*reason),
                trace: Some(trace),
            },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.record()).expect("serializable")
    }

    pub fn to_text(&self) -> String {
        match self {
            QcOutcome::Certified(r) => {
                let mut out = format!(
                    "outcome certified\nstage {}\nlambda {}\nC {}\nepsilon {}{}\nK {}\ndelta {}\n",
                    r.stage,
                    r.lambda,
                    r.distortion,
                    r.epsilon,
                    if r.epsilon_exact { "" } else { " (upper bound)" },
                    r.k,
                    r.delta
                );
                if r.step3_vacuous {
                    out.push_str("step3 vacuous\n");
                }
                if r.delta_zero {
                    out.push_str("note delta is 0, epsilon degenerates to 0\n");
                }
                for (j, n) in &r.words_checked {
                    out.push_str(&format!("checked {j} {n}\n"));
                }
                out
            }
            QcOutcome::Exhausted { stage, reason, trace } => {
                let reason = serde_json::to_string(reason).expect("serializable");
                let mut out = format!("outcome exhausted\nstage {stage}\nreason {}\n", reason.trim_matches('"'));
                for t in trace {
                    out.push_str(&format!("stage {} lambda {}", t.stage, t.lambda));
                    if let Some(j) = t.failed_at {
                        out.push_str(&format!(" failed-at {j}"));
                    }
                    out.push('\n');
                }
                out
            }
        }
    }
}

/// Runs stages `i = 1, 2, …` until one is certified or the budget runs
/// out.  `max_states` bounds both the ball size and the number of geodesic
/// words examined per length.
pub fn detect_quasiconvex(
    ctx: &HyperbolicContext,
    h: &SubgroupSpec,
    budget: DetectionBudget,
) -> Result<QcOutcome, HyperbolicError> {
    if h.alphabet() != ctx.structure.alphabet() {
        return Err(HyperbolicError::AlphabetMismatch);
    }
    let start = Instant::now();
    let cap = budget.max_states;
    let v = h.symmetrized();
    let k = h.max_len();
    let mut ball = HBall::new();
    let mut trace = Vec::new();
    let exhausted = |stage, reason, trace| Ok(QcOutcome::Exhausted { stage, reason, trace });

    // λ over all geodesic words of length ≤ n, extended as n grows
    let mut lambda_upto: Vec<BigRational> = vec![BigRational::one()];
    let mut counts: Vec<usize> = vec![1];

    let extend = |ball: &mut HBall, lambda_upto: &mut Vec<BigRational>, counts: &mut Vec<usize>, n: usize| {
        while lambda_upto.len() <= n {
            let len = lambda_upto.len();
            match ball.grow(ctx, v, len, cap) {
                Err(HyperbolicError::BallCap { .. }) => return Ok(false),
                Err(e) => return Err(e),
                Ok(()) => {}
            }
            let Some(words) = ball.geodesics_of_length(len, cap) else {
                return Ok(false);
            };
            let l = min_lambda(ctx, &words, v)?;
            let prev = lambda_upto[len - 1].clone();
            lambda_upto.push(if l > prev { l } else { prev });
            counts.push(words.len());
        }
        Ok(true)
    };

    for i in 1..=budget.max_stage {
        if budget.wall_clock.is_some_and(|limit| start.elapsed() > limit) {
            return exhausted(i - 1, ExhaustReason::WallClock, trace);
        }
        if !extend(&mut ball, &mut lambda_upto, &mut counts, 2 * i)? {
            return exhausted(i - 1, ExhaustReason::StateCap, trace);
        }
        let lambda = lambda_upto[2 * i].clone();
        let bound = BigRational::from_integer(BigInt::from(1000 * k * i)) * &ctx.delta * &lambda;
        let j_max = bound.floor().to_integer();
        let mut failed_at = None;
        let mut checked = Vec::new();
        let mut j = i + 1;
        while BigInt::from(j) <= j_max {
            if budget.wall_clock.is_some_and(|limit| start.elapsed() > limit) {
                return exhausted(i - 1, ExhaustReason::WallClock, trace);
            }
            if !extend(&mut ball, &mut lambda_upto, &mut counts, 2 * j)? {
                return exhausted(i - 1, ExhaustReason::StateCap, trace);
            }
            checked.push((j, counts[2 * j - 1] + counts[2 * j]));
            if lambda_upto[2 * j] > lambda {
                failed_at = Some(j);
                break;
            }
            j += 1;
        }
        trace.push(LambdaTrace { stage: i, lambda: rat_str(&lambda), failed_at });
        if failed_at.is_none() {
            let c = BigRational::from_integer(BigInt::from(2)) * &lambda;
            let (eps, exact) = epsilon_from(&c, &ctx.delta)?;
            return Ok(QcOutcome::Certified(QcReport {
                stage: i,
                lambda: rat_str(&lambda),
                distortion: rat_str(&c),
                epsilon: rat_str(&eps),
                epsilon_exact: exact,
                k,
                delta: rat_str(&ctx.delta),
                delta_zero: ctx.delta.is_zero(),
                step3_vacuous: j_max <= BigInt::from(i),
                words_checked: checked,
                lambda_exact: lambda,
                epsilon_exact_value: eps,
            }));
        }
    }
    exhausted(budget.max_stage, ExhaustReason::MaxStage, trace)
}
