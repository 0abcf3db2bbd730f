//! Todd-Coxeter coset enumeration producing a sequence of partial Schreier
//! graphs.
//!
//! Definitions are made in waves: a wave fills every undefined table entry of
//! every coset alive at its start, in (coset, letter) order, and each new entry
//! is followed by Felsch deduction processing over the cyclic conjugates of the
//! relators and their inverses.  Subgroup generators are traced and closed at
//! the basepoint before the first wave.  Coincidences are resolved to
//! completion immediately.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use thiserror::Error;

use crate::fsa::{Fsa, StateId};
use crate::group::{GeneratorAlphabet, GroupError, Letter, Presentation, Word};

pub const DEFAULT_COSET_CAP: usize = 100_000;

const NONE: u32 = u32::MAX;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CosetError {
    #[error("coset cap of {cap} exceeded")]
    CosetCap { cap: usize, last: Option<Box<CosetGraphApprox>> },
    #[error("subgroup and presentation use different alphabets")]
    AlphabetMismatch,
    #[error("invalid coset graph: {0}")]
    Invalid(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Generators `v₁ … v_t` of a subgroup together with the symmetrized list
/// `v₁ … v_t, v₁⁻¹ … v_t⁻¹`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupSpec {
    alphabet: GeneratorAlphabet,
    words: Vec<Word>,
    symmetrized: Vec<Word>,
    max_len: usize,
}

impl SubgroupSpec {
    /// Empty words are dropped; an empty list means the trivial subgroup.
    pub fn new(alphabet: &GeneratorAlphabet, words: Vec<Word>) -> Result<SubgroupSpec, GroupError> {
        for w in &words {
            alphabet.check(w)?;
        }
        let words: Vec<Word> = words.into_iter().filter(|w| !w.is_empty()).collect();
        let mut symmetrized = words.clone();
        symmetrized.extend(words.iter().map(|w| alphabet.inverse(w)));
        let max_len = words.iter().map(Word::len).max().unwrap_or(0);
        Ok(SubgroupSpec { alphabet: alphabet.clone(), words, symmetrized, max_len })
    }

    pub fn parse(alphabet: &GeneratorAlphabet, words: &[&str]) -> Result<SubgroupSpec, GroupError> {
        let parsed = words.iter().map(|w| alphabet.parse_word(w)).collect::<Result<_, _>>()?;
        SubgroupSpec::new(alphabet, parsed)
    }

    pub fn alphabet(&self) -> &GeneratorAlphabet {
        &self.alphabet
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn symmetrized(&self) -> &[Word] {
        &self.symmetrized
    }

    /// Length of the longest generator; 0 for the trivial subgroup.
    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn is_trivial(&self) -> bool {
        self.words.is_empty()
    }
}

/// A partial Schreier graph with basepoint.  Edges are stored as a dense
/// table indexed by `vertex·|A| + letter`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetGraphApprox {
    alphabet: GeneratorAlphabet,
    stage: usize,
    basepoint: u32,
    table: Vec<u32>,
    complete: bool,
}

impl CosetGraphApprox {
    /// Builds and validates a graph: edges must form a partial function
    /// closed under `(v, x, w) ↦ (w, inv x, v)`, and `complete` requires a
    /// total table.
    pub fn from_parts(
        alphabet: &GeneratorAlphabet,
        n: usize,
        basepoint: u32,
        edges: impl IntoIterator<Item = (u32, Letter, u32)>,
        stage: usize,
        complete: bool,
    ) -> Result<CosetGraphApprox, CosetError> {
        let k = alphabet.len();
        if basepoint as usize >= n {
            return Err(CosetError::Invalid(format!("basepoint {basepoint} out of range")));
        }
        let mut table = vec![NONE; n * k];
        for (v, x, w) in edges {
            if v as usize >= n || w as usize >= n || x.index() >= k {
                return Err(CosetError::Invalid(format!("edge {v} {} {w} out of range", x.0)));
            }
            for (from, l, to) in [(v, x, w), (w, alphabet.inv(x), v)] {
                let slot = &mut table[from as usize * k + l.index()];
                if *slot != NONE && *slot != to {
                    return Err(CosetError::Invalid(format!("vertex {from} has two {} edges", alphabet.name(l))));
                }
                *slot = to;
            }
        }
        if complete && table.contains(&NONE) {
            return Err(CosetError::Invalid("graph marked complete has undefined edges".into()));
        }
        Ok(CosetGraphApprox { alphabet: alphabet.clone(), stage, basepoint, table, complete })
    }

    pub fn alphabet(&self) -> &GeneratorAlphabet {
        &self.alphabet
    }

    pub fn stage(&self) -> usize {
        self.stage
    }

    pub fn basepoint(&self) -> u32 {
        self.basepoint
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn num_vertices(&self) -> usize {
        self.table.len() / self.alphabet.len().max(1)
    }

    pub fn edge(&self, v: u32, x: Letter) -> Option<u32> {
        let t = self.table[v as usize * self.alphabet.len() + x.index()];
        (t != NONE).then_some(t)
    }

    pub fn edges(&self) -> impl Iterator<Item = (u32, Letter, u32)> + '_ {
        let k = self.alphabet.len();
        self.table
            .iter()
            .enumerate()
            .filter(|(_, &t)| t != NONE)
            .map(move |(i, &t)| ((i / k) as u32, Letter::from_index(i % k), t))
    }

    pub fn is_total(&self) -> bool {
        !self.table.contains(&NONE)
    }

    /// Endpoint of the path labelled `w` from `v`, if defined.
    pub fn trace(&self, v: u32, w: &Word) -> Option<u32> {
        w.letters().iter().try_fold(v, |cur, &x| self.edge(cur, x))
    }

    /// Every word closes into a loop at every vertex.
    pub fn closes_at_every_vertex(&self, words: &[Word]) -> bool {
        (0..self.num_vertices() as u32).all(|v| words.iter().all(|w| self.trace(v, w) == Some(v)))
    }

    /// Same vertex count, basepoint and edge table; ignores stage and the
    /// completeness flag.
    pub fn same_graph(&self, other: &CosetGraphApprox) -> bool {
        self.alphabet == other.alphabet && self.basepoint == other.basepoint && self.table == other.table
    }

    /// Vertices are states; the basepoint is both initial and accepting.
    pub fn to_fsa(&self) -> Fsa {
        let trans = self.edges().map(|(v, x, w)| (v as StateId, x, w as StateId));
        Fsa::new(self.alphabet.symbols().clone(), self.num_vertices(), [self.basepoint], [self.basepoint], trans, true)
            .expect("coset graph is a valid automaton")
    }

    /// Induced subgraph on vertices within distance `k` of the basepoint,
    /// renumbered in breadth-first order with the basepoint as 0.
    pub fn ball(&self, k: usize) -> CosetGraphApprox {
        let na = self.alphabet.len();
        let mut new_id = vec![NONE; self.num_vertices()];
        let mut order = vec![self.basepoint];
        new_id[self.basepoint as usize] = 0;
        let mut depth_end = 1;
        let mut i = 0;
        for _ in 0..k {
            while i < depth_end {
                let v = order[i];
                for x in self.alphabet.letters() {
                    if let Some(t) = self.edge(v, x) {
                        if new_id[t as usize] == NONE {
                            new_id[t as usize] = order.len() as u32;
                            order.push(t);
                        }
                    }
                }
                i += 1;
            }
            depth_end = order.len();
        }
        let mut table = vec![NONE; order.len() * na];
        for (nv, &v) in order.iter().enumerate() {
            for x in self.alphabet.letters() {
                if let Some(t) = self.edge(v, x) {
                    if new_id[t as usize] != NONE {
                        table[nv * na + x.index()] = new_id[t as usize];
                    }
                }
            }
        }
        let complete = self.complete && order.len() == self.num_vertices();
        CosetGraphApprox { alphabet: self.alphabet.clone(), stage: self.stage, basepoint: 0, table, complete }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "coset-graph {} {}", self.stage, self.num_vertices());
        let _ = writeln!(out, "base {}", self.basepoint);
        if self.complete {
            out.push_str("complete\n");
        }
        for (v, x, w) in self.edges() {
            let _ = writeln!(out, "edge {v} {} {w}", self.alphabet.name(x));
        }
        out
    }

    pub fn from_text(alphabet: &GeneratorAlphabet, text: &str) -> Result<CosetGraphApprox, CosetError> {
        let perr = |line: usize, m: &str| CosetError::Parse { line, message: m.to_string() };
        let mut header = None;
        let mut base = 0;
        let mut complete = false;
        let mut edges = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let toks: Vec<&str> = raw.split('#').next().unwrap_or("").split_whitespace().collect();
            let num = |t: &str| t.parse::<u32>().map_err(|_| perr(line, "bad number"));
            match toks.as_slice() {
                [] => {}
                ["coset-graph", stage, n] => header = Some((num(stage)? as usize, num(n)? as usize)),
                ["base", b] => base = num(b)?,
                ["complete"] => complete = true,
                ["edge", f, sym, t] => {
                    let x = alphabet.parse_letter(sym).map_err(|e| perr(line, &e.to_string()))?;
                    edges.push((num(f)?, x, num(t)?));
                }
                _ => return Err(perr(line, "expected coset-graph, base, complete or edge")),
            }
        }
        let (stage, n) = header.ok_or_else(|| perr(1, "missing coset-graph header"))?;
        CosetGraphApprox::from_parts(alphabet, n, base, edges, stage, complete)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SnapshotPolicy {
    EveryWave,
    EveryNthWave(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CosetCaps {
    pub max_cosets: usize,
}

impl Default for CosetCaps {
    fn default() -> Self {
        CosetCaps { max_cosets: DEFAULT_COSET_CAP }
    }
}

struct CapHit;

struct Table {
    k: usize,
    inv: Vec<usize>,
    rows: Vec<u32>,
    parent: Vec<u32>,
    live: usize,
    cap: usize,
    deductions: Vec<(u32, usize)>,
}

impl Table {
    fn new(alpha: &GeneratorAlphabet, cap: usize) -> Table {
        let k = alpha.len();
        Table {
            k,
            inv: alpha.letters().map(|x| alpha.inv(x).index()).collect(),
            rows: vec![NONE; k],
            parent: vec![0],
            live: 1,
            cap,
            deductions: Vec::new(),
        }
    }

    fn get(&self, c: u32, x: usize) -> u32 {
        self.rows[c as usize * self.k + x]
    }

    fn set(&mut self, c: u32, x: usize, d: u32) {
        self.rows[c as usize * self.k + x] = d;
    }

    fn is_live(&self, c: u32) -> bool {
        self.parent[c as usize] == c
    }

    fn rep(&mut self, c: u32) -> u32 {
        let mut r = c;
        while self.parent[r as usize] != r {
            r = self.parent[r as usize];
        }
        let mut cur = c;
        while self.parent[cur as usize] != r {
            let next = self.parent[cur as usize];
            self.parent[cur as usize] = r;
            cur = next;
        }
        r
    }

    fn define(&mut self, c: u32, x: usize) -> Result<u32, CapHit> {
        if self.live >= self.cap {
            return Err(CapHit);
        }
        let d = self.parent.len() as u32;
        self.parent.push(d);
        self.rows.extend(std::iter::repeat_n(NONE, self.k));
        self.live += 1;
        self.join(c, x, d);
        Ok(d)
    }

    fn join(&mut self, c: u32, x: usize, d: u32) {
        self.set(c, x, d);
        self.set(d, self.inv[x], c);
        self.deductions.push((c, x));
    }

    fn merge(&mut self, a: u32, b: u32, queue: &mut VecDeque<u32>) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a == b {
            return;
        }
        let (keep, gone) = (a.min(b), a.max(b));
        self.parent[gone as usize] = keep;
        self.live -= 1;
        queue.push_back(gone);
    }

    fn coincidence(&mut self, a: u32, b: u32) {
        let mut queue = VecDeque::new();
        self.merge(a, b, &mut queue);
        while let Some(g) = queue.pop_front() {
            for x in 0..self.k {
                let d = self.get(g, x);
                if d == NONE {
                    continue;
                }
                let xi = self.inv[x];
                if self.get(d, xi) == g {
                    self.set(d, xi, NONE);
                }
                let mu = self.rep(g);
                let nu = self.rep(d);
                let mx = self.get(mu, x);
                if mx != NONE {
                    self.merge(nu, mx, &mut queue);
                } else {
                    let nxi = self.get(nu, xi);
                    if nxi != NONE {
                        self.merge(mu, nxi, &mut queue);
                    } else {
                        self.join(mu, x, nu);
                    }
                }
            }
        }
    }

    /// Scans `w` at `c`, deducing a single missing entry or a coincidence.
    /// With `fill`, missing entries are defined until the cycle closes.
    fn scan(&mut self, c: u32, w: &[usize], fill: bool) -> Result<(), CapHit> {
        let n = w.len();
        loop {
            let (mut f, mut i) = (c, 0);
            while i < n && self.get(f, w[i]) != NONE {
                f = self.get(f, w[i]);
                i += 1;
            }
            if i == n {
                if f != c {
                    self.coincidence(f, c);
                }
                return Ok(());
            }
            let (mut b, mut j) = (c, n);
            while j > i && self.get(b, self.inv[w[j - 1]]) != NONE {
                b = self.get(b, self.inv[w[j - 1]]);
                j -= 1;
            }
            if j == i {
                self.coincidence(f, b);
                return Ok(());
            }
            if j == i + 1 {
                self.join(f, w[i], b);
                return Ok(());
            }
            if !fill {
                return Ok(());
            }
            self.define(f, w[i])?;
        }
    }

    fn process_deductions(&mut self, by_first: &[Vec<Vec<usize>>]) {
        while let Some((c, x)) = self.deductions.pop() {
            if !self.is_live(c) {
                continue;
            }
            for w in &by_first[x] {
                let _ = self.scan(c, w, false);
                if !self.is_live(c) {
                    break;
                }
            }
            if !self.is_live(c) {
                continue;
            }
            let d = self.get(c, x);
            if d == NONE || !self.is_live(d) {
                continue;
            }
            for w in &by_first[self.inv[x]] {
                let _ = self.scan(d, w, false);
                if !self.is_live(d) {
                    break;
                }
            }
        }
    }

    /// Renumbers live cosets in increasing order; coset 0 stays 0.
    fn compact(&mut self) {
        let n = self.parent.len();
        let mut new_id = vec![NONE; n];
        let mut next = 0u32;
        for c in 0..n as u32 {
            if self.is_live(c) {
                new_id[c as usize] = next;
                next += 1;
            }
        }
        let mut rows = Vec::with_capacity(next as usize * self.k);
        for c in 0..n as u32 {
            if self.is_live(c) {
                for x in 0..self.k {
                    let t = self.get(c, x);
                    rows.push(if t == NONE { NONE } else { new_id[t as usize] });
                }
            }
        }
        self.rows = rows;
        self.parent = (0..next).collect();
    }

    fn len(&self) -> usize {
        self.parent.len()
    }
}

/// The stream of snapshots `X₁, X₂, …`.  Ends after a complete snapshot or
/// after an error.
pub struct CosetEnumerator {
    alphabet: GeneratorAlphabet,
    by_first: Vec<Vec<Vec<usize>>>,
    relators: Vec<Vec<usize>>,
    subgroup: Vec<Vec<usize>>,
    table: Table,
    policy: SnapshotPolicy,
    cap: usize,
    waves: usize,
    started: bool,
    finished: bool,
    last: Option<CosetGraphApprox>,
}

pub fn enumerate(
    p: &Presentation,
    h: &SubgroupSpec,
    policy: SnapshotPolicy,
    caps: CosetCaps,
) -> Result<CosetEnumerator, CosetError> {
    let alpha = p.alphabet();
    if h.alphabet() != alpha {
        return Err(CosetError::AlphabetMismatch);
    }
    let idx = |w: &Word| w.letters().iter().map(|l| l.index()).collect::<Vec<_>>();
    let mut conjugates = BTreeSet::new();
    for r in p.relators() {
        for w in [r.clone(), alpha.inverse(r)] {
            let l = w.letters();
            for s in 0..l.len() {
                conjugates.insert(l[s..].iter().chain(&l[..s]).map(|x| x.index()).collect::<Vec<_>>());
            }
        }
    }
    let mut by_first = vec![Vec::new(); alpha.len()];
    for c in conjugates {
        by_first[c[0]].push(c);
    }
    Ok(CosetEnumerator {
        alphabet: alpha.clone(),
        by_first,
        relators: p.relators().iter().map(idx).collect(),
        subgroup: h.words().iter().map(idx).collect(),
        table: Table::new(alpha, caps.max_cosets.max(1)),
        policy,
        cap: caps.max_cosets.max(1),
        waves: 0,
        started: false,
        finished: false,
        last: None,
    })
}

impl CosetEnumerator {
    pub fn waves(&self) -> usize {
        self.waves
    }

    fn snapshot(&self, complete: bool) -> CosetGraphApprox {
        CosetGraphApprox {
            alphabet: self.alphabet.clone(),
            stage: self.waves,
            basepoint: 0,
            table: self.table.rows.clone(),
            complete,
        }
    }

    fn start(&mut self) -> Result<(), CapHit> {
        for i in 0..self.subgroup.len() {
            let w = self.subgroup[i].clone();
            self.table.scan(0, &w, true)?;
            self.table.process_deductions(&self.by_first);
        }
        self.table.compact();
        Ok(())
    }

    fn wave(&mut self) -> Result<(), CapHit> {
        let n = self.table.len() as u32;
        for c in 0..n {
            for x in 0..self.table.k {
                if !self.table.is_live(c) {
                    break;
                }
                if self.table.get(c, x) == NONE {
                    self.table.define(c, x)?;
                    self.table.process_deductions(&self.by_first);
                }
            }
        }
        self.table.compact();
        self.waves += 1;
        Ok(())
    }

    /// A total table is complete once every relator closes at every coset;
    /// a failing relator is scanned so the next wave sees its consequences.
    fn check_complete(&mut self) -> bool {
        if self.table.rows.contains(&NONE) {
            return false;
        }
        let mut ok = true;
        for c in 0..self.table.len() as u32 {
            for r in 0..self.relators.len() {
                let w = &self.relators[r];
                let end = w.iter().fold(c, |cur, &x| self.table.get(cur, x));
                if end != c {
                    ok = false;
                    let w = w.clone();
                    if self.table.is_live(c) {
                        let _ = self.table.scan(c, &w, false);
                        self.table.process_deductions(&self.by_first);
                    }
                }
            }
        }
        if !ok {
            self.table.compact();
        }
        ok
    }

    fn cap_error(&mut self) -> CosetError {
        self.finished = true;
        CosetError::CosetCap { cap: self.cap, last: self.last.take().map(Box::new) }
    }
}

impl Iterator for CosetEnumerator {
    type Item = Result<CosetGraphApprox, CosetError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.finished {
            return None;
        }
        if !self.started {
            self.started = true;
            if self.start().is_err() {
                return Some(Err(self.cap_error()));
            }
        }
        loop {
            if self.wave().is_err() {
                return Some(Err(self.cap_error()));
            }
            let complete = self.check_complete();
            let emit = match self.policy {
                SnapshotPolicy::EveryWave => true,
                SnapshotPolicy::EveryNthWave(k) => self.waves.is_multiple_of(k.max(1)),
            };
            if complete {
                self.finished = true;
                return Some(Ok(self.snapshot(true)));
            }
            if emit {
                let snap = self.snapshot(false);
                self.last = Some(snap.clone());
                return Some(Ok(snap));
            }
        }
    }
}
