//! Finite-state acceptors and their boolean calculus.
//!
//! An [`Fsa`] may be nondeterministic; the operations that need determinism
//! (complement-style products, minimization, equivalence) run the subset
//! construction first.  Every operation that can blow up takes a state cap
//! and fails with [`FsaError::StateCap`] instead of exhausting memory.

mod determinize;
mod minimize;
mod product;
mod search;
mod text;

use std::sync::atomic::{AtomicUsize, Ordering};

use thiserror::Error;

use crate::group::{Letter, Symbols, Word};

pub use product::CombineMode;

pub type StateId = u32;

pub const DEFAULT_STATE_CAP: usize = 1_000_000;

static STATE_CAP: AtomicUsize = AtomicUsize::new(DEFAULT_STATE_CAP);

/// The cap used by the uncapped convenience methods.
pub fn state_cap() -> usize {
    STATE_CAP.load(Ordering::Relaxed)
}

pub fn set_state_cap(cap: usize) {
    STATE_CAP.store(cap.max(1), Ordering::Relaxed);
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FsaError {
    #[error("state budget of {cap} states exceeded")]
    StateCap { cap: usize },
    #[error("automata are over different alphabets")]
    AlphabetMismatch,
    #[error("letter {0} outside the alphabet")]
    LetterOutOfRange(u32),
    #[error("invalid automaton: {0}")]
    Invalid(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// A finite-state acceptor without ε-transitions.
///
/// Transition lists are kept sorted by `(label, target)`; two automata with
/// the same states, flags and transitions compare equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fsa {
    symbols: Symbols,
    initial: Vec<StateId>,
    accepting: Vec<bool>,
    edges: Vec<Vec<(Letter, StateId)>>,
    deterministic: bool,
}

impl Fsa {
    /// Builds and validates an automaton.  When `deterministic` is set the
    /// automaton must have one initial state and at most one transition per
    /// state and label.
    pub fn new(
        symbols: Symbols,
        num_states: usize,
        initial: impl IntoIterator<Item = StateId>,
        accepting: impl IntoIterator<Item = StateId>,
        transitions: impl IntoIterator<Item = (StateId, Letter, StateId)>,
        deterministic: bool,
    ) -> Result<Fsa, FsaError> {
        let in_range = |s: StateId| (s as usize) < num_states;
        let initial: Vec<StateId> = initial.into_iter().collect();
        if let Some(&s) = initial.iter().find(|&&s| !in_range(s)) {
            return Err(FsaError::Invalid(format!("initial state {s} does not exist")));
        }
        let mut acc = vec![false; num_states];
        for s in accepting {
            if !in_range(s) {
                return Err(FsaError::Invalid(format!("accepting state {s} does not exist")));
            }
            acc[s as usize] = true;
        }
        let mut edges = vec![Vec::new(); num_states];
        for (from, l, to) in transitions {
            if !in_range(from) || !in_range(to) {
                return Err(FsaError::Invalid(format!("transition {from} -> {to} uses a missing state")));
            }
            if l.index() >= symbols.len() {
                return Err(FsaError::LetterOutOfRange(l.0));
            }
            edges[from as usize].push((l, to));
        }
        let m = Fsa::from_raw(symbols, initial, acc, edges, deterministic);
        if deterministic && !m.is_structurally_deterministic() {
            return Err(FsaError::Invalid("flagged deterministic but is not".into()));
        }
        Ok(m)
    }

    pub(crate) fn from_raw(
        symbols: Symbols,
        mut initial: Vec<StateId>,
        accepting: Vec<bool>,
        mut edges: Vec<Vec<(Letter, StateId)>>,
        deterministic: bool,
    ) -> Fsa {
        initial.sort_unstable();
        initial.dedup();
        for e in &mut edges {
            e.sort_unstable();
            e.dedup();
        }
        debug_assert_eq!(accepting.len(), edges.len());
        Fsa { symbols, initial, accepting, edges, deterministic }
    }

    /// The automaton accepting every word.
    pub fn universal(symbols: Symbols) -> Fsa {
        let edges = vec![symbols.letters().map(|l| (l, 0)).collect()];
        Fsa::from_raw(symbols, vec![0], vec![true], edges, true)
    }

    /// The automaton with no states, accepting nothing.
    pub fn empty(symbols: Symbols) -> Fsa {
        Fsa::from_raw(symbols, Vec::new(), Vec::new(), Vec::new(), false)
    }

    /// Accepts exactly the given words (a trie).
    pub fn from_words<'a>(symbols: Symbols, words: impl IntoIterator<Item = &'a Word>) -> Fsa {
        let mut edges: Vec<Vec<(Letter, StateId)>> = vec![Vec::new()];
        let mut acc = vec![false];
        for w in words {
            let mut s = 0usize;
            for &l in w.letters() {
                let next = edges[s].iter().find(|e| e.0 == l).map(|e| e.1);
                s = match next {
                    Some(t) => t as usize,
                    None => {
                        let t = edges.len();
                        edges.push(Vec::new());
                        acc.push(false);
                        edges[s].push((l, t as StateId));
                        t
                    }
                };
            }
            acc[s] = true;
        }
        Fsa::from_raw(symbols, vec![0], acc, edges, true)
    }

    pub fn symbols(&self) -> &Symbols {
        &self.symbols
    }

    pub fn num_states(&self) -> usize {
        self.edges.len()
    }

    pub fn initial(&self) -> &[StateId] {
        &self.initial
    }

    pub fn is_accepting(&self, s: StateId) -> bool {
        self.accepting[s as usize]
    }

    pub fn accepting_states(&self) -> impl Iterator<Item = StateId> + '_ {
        (0..self.num_states() as StateId).filter(|&s| self.accepting[s as usize])
    }

    pub fn transitions(&self, s: StateId) -> &[(Letter, StateId)] {
        &self.edges[s as usize]
    }

    pub fn num_transitions(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    /// The declared determinism flag.
    pub fn is_deterministic(&self) -> bool {
        self.deterministic
    }

    pub fn is_structurally_deterministic(&self) -> bool {
        self.initial.len() == 1 && self.edges.iter().all(|e| e.windows(2).all(|p| p[0].0 != p[1].0))
    }

    /// Deterministic and total on every label.
    pub fn is_complete_dfa(&self) -> bool {
        self.is_structurally_deterministic() && self.edges.iter().all(|e| e.len() == self.symbols.len())
    }

    /// First successor of `s` on `l`; the only one when deterministic.
    pub fn successor(&self, s: StateId, l: Letter) -> Option<StateId> {
        let e = &self.edges[s as usize];
        let i = e.partition_point(|t| t.0 < l);
        e.get(i).filter(|t| t.0 == l).map(|t| t.1)
    }

    fn check_word(&self, w: &Word) -> Result<(), FsaError> {
        match w.letters().iter().find(|l| l.index() >= self.symbols.len()) {
            Some(l) => Err(FsaError::LetterOutOfRange(l.0)),
            None => Ok(()),
        }
    }

    pub fn accepts(&self, w: &Word) -> Result<bool, FsaError> {
        self.check_word(w)?;
        if self.is_structurally_deterministic() {
            let mut s = self.initial[0];
            for &l in w.letters() {
                match self.successor(s, l) {
                    Some(t) => s = t,
                    None => return Ok(false),
                }
            }
            return Ok(self.is_accepting(s));
        }
        let mut cur = self.initial.clone();
        let mut seen = vec![false; self.num_states()];
        for &l in w.letters() {
            let mut next = Vec::new();
            for &s in &cur {
                for &(m, t) in self.transitions(s) {
                    if m == l && !seen[t as usize] {
                        seen[t as usize] = true;
                        next.push(t);
                    }
                }
            }
            for &t in &next {
                seen[t as usize] = false;
            }
            if next.is_empty() {
                return Ok(false);
            }
            cur = next;
        }
        Ok(cur.iter().any(|&s| self.is_accepting(s)))
    }

    fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.num_states()];
        let mut stack: Vec<StateId> = self.initial.clone();
        for &s in &stack {
            seen[s as usize] = true;
        }
        while let Some(s) = stack.pop() {
            for &(_, t) in self.transitions(s) {
                if !seen[t as usize] {
                    seen[t as usize] = true;
                    stack.push(t);
                }
            }
        }
        seen
    }

    /// States from which some accepting state is reachable.
    pub(crate) fn coreachable(&self) -> Vec<bool> {
        let n = self.num_states();
        let mut rev: Vec<Vec<StateId>> = vec![Vec::new(); n];
        for s in 0..n {
            for &(_, t) in &self.edges[s] {
                rev[t as usize].push(s as StateId);
            }
        }
        let mut seen = self.accepting.clone();
        let mut stack: Vec<StateId> = self.accepting_states().collect();
        while let Some(s) = stack.pop() {
            for &p in &rev[s as usize] {
                if !seen[p as usize] {
                    seen[p as usize] = true;
                    stack.push(p);
                }
            }
        }
        seen
    }

    /// Keeps only states that are both reachable and co-reachable.
    /// Surviving states keep their relative order.
    pub fn trim(&self) -> Fsa {
        let reach = self.reachable();
        let coreach = self.coreachable();
        let keep: Vec<bool> = reach.iter().zip(&coreach).map(|(a, b)| *a && *b).collect();
        self.restrict_states(&keep)
    }

    fn restrict_states(&self, keep: &[bool]) -> Fsa {
        let mut map = vec![StateId::MAX; self.num_states()];
        let mut next = 0;
        for (s, &k) in keep.iter().enumerate() {
            if k {
                map[s] = next;
                next += 1;
            }
        }
        let mut edges = Vec::with_capacity(next as usize);
        let mut acc = Vec::with_capacity(next as usize);
        for (s, &k) in keep.iter().enumerate() {
            if !k {
                continue;
            }
            acc.push(self.accepting[s]);
            edges.push(
                self.edges[s]
                    .iter()
                    .filter(|e| keep[e.1 as usize])
                    .map(|&(l, t)| (l, map[t as usize]))
                    .collect(),
            );
        }
        let initial: Vec<StateId> = self.initial.iter().filter(|&&s| keep[s as usize]).map(|&s| map[s as usize]).collect();
        let det = self.deterministic && initial.len() == 1;
        Fsa::from_raw(self.symbols.clone(), initial, acc, edges, det)
    }

    /// Disjoint union; accepts `L(self) ∪ L(other)` without determinizing.
    pub fn union_nfa(&self, other: &Fsa) -> Result<Fsa, FsaError> {
        if !self.symbols.same_as(&other.symbols) {
            return Err(FsaError::AlphabetMismatch);
        }
        let off = self.num_states() as StateId;
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|e| e.iter().map(|&(l, t)| (l, t + off)).collect()));
        let mut acc = self.accepting.clone();
        acc.extend_from_slice(&other.accepting);
        let mut initial = self.initial.clone();
        initial.extend(other.initial.iter().map(|&s| s + off));
        Ok(Fsa::from_raw(self.symbols.clone(), initial, acc, edges, false))
    }

    /// Same language, no unreachable states; complete over the alphabet.
    pub fn determinize(&self) -> Result<Fsa, FsaError> {
        self.determinize_capped(state_cap())
    }

    pub fn determinize_capped(&self, cap: usize) -> Result<Fsa, FsaError> {
        Ok(self.to_dense(cap)?.into_fsa(self.symbols.clone()))
    }

    /// The minimal complete DFA, states numbered in breadth-first order from
    /// the initial state with labels visited in alphabet order.
    pub fn minimize(&self) -> Result<Fsa, FsaError> {
        self.minimize_capped(state_cap())
    }

    pub fn minimize_capped(&self, cap: usize) -> Result<Fsa, FsaError> {
        Ok(self.to_dense(cap)?.minimized().into_fsa(self.symbols.clone()))
    }

    pub fn is_empty(&self) -> bool {
        let reach = self.reachable();
        !reach.iter().zip(&self.accepting).any(|(r, a)| *r && *a)
    }

    pub fn equivalent(&self, other: &Fsa) -> Result<bool, FsaError> {
        Ok(self.distinguishing_word(other)?.is_none())
    }

    pub fn equivalent_capped(&self, other: &Fsa, cap: usize) -> Result<bool, FsaError> {
        Ok(self.distinguishing_word_capped(other, cap)?.is_none())
    }

    /// The ShortLex-least word in the symmetric difference, if any.
    pub fn distinguishing_word(&self, other: &Fsa) -> Result<Option<Word>, FsaError> {
        self.distinguishing_word_capped(other, state_cap())
    }

    pub fn distinguishing_word_capped(&self, other: &Fsa, cap: usize) -> Result<Option<Word>, FsaError> {
        product::distinguishing_word(self, other, cap)
    }

    /// Accepted words of length at most `n`, in ShortLex order.
    pub fn enumerate_upto(&self, n: usize) -> Vec<Word> {
        self.accepted_words(n, usize::MAX)
    }

    /// The first `limit` accepted words of length at most `max_len`, in
    /// ShortLex order.
    pub fn accepted_words(&self, max_len: usize, limit: usize) -> Vec<Word> {
        search::accepted_words(self, max_len, limit)
    }

    /// The ShortLex-least accepted word.
    pub fn shortest_accepted(&self) -> Option<Word> {
        search::shortest_accepted(self)
    }

    /// Number of accepted words when the language is finite.
    pub fn count_if_finite(&self) -> Option<u128> {
        search::count_if_finite(self)
    }
}

/// `L(a) ∘ L(b)` on the product of the completed automata.
pub fn combine(a: &Fsa, b: &Fsa, mode: CombineMode) -> Result<Fsa, FsaError> {
    product::combine(a, b, mode, state_cap())
}

pub fn combine_capped(a: &Fsa, b: &Fsa, mode: CombineMode, cap: usize) -> Result<Fsa, FsaError> {
    product::combine(a, b, mode, cap)
}

/// A complete DFA as a dense transition table.
#[derive(Clone, Debug)]
pub(crate) struct Dense {
    pub k: usize,
    pub start: StateId,
    pub delta: Vec<StateId>,
    pub accepting: Vec<bool>,
}

impl Dense {
    pub fn n(&self) -> usize {
        self.accepting.len()
    }

    #[inline]
    pub fn next(&self, s: StateId, l: usize) -> StateId {
        self.delta[s as usize * self.k + l]
    }

    pub fn into_fsa(self, symbols: Symbols) -> Fsa {
        let n = self.n();
        let edges = (0..n)
            .map(|s| (0..self.k).map(|l| (Letter::from_index(l), self.delta[s * self.k + l])).collect())
            .collect();
        Fsa::from_raw(symbols, vec![self.start], self.accepting, edges, true)
    }
}
