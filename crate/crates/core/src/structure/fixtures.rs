//! Built-in structures: free groups, Z², and finite groups read off a
//! complete Cayley graph.

use std::collections::VecDeque;

use super::{AutomaticStructure, StructureError};
use crate::coset::{enumerate, CosetCaps, CosetGraphApprox, SnapshotPolicy, SubgroupSpec};
use crate::fsa::{state_cap, Fsa, StateId};
use crate::group::{GeneratorAlphabet, Letter, Presentation, Word};
use crate::pair::{PairAlphabet, PairFsa};

const NAMES: &str = "abcdefghijklmnopqrstuvwxyz";

fn pair_fsa(pairs: &PairAlphabet, n: usize, accepting: &[StateId], trans: Vec<(StateId, Letter, StateId)>) -> PairFsa {
    let fsa = Fsa::new(pairs.symbols().clone(), n, [0], accepting.iter().copied(), trans, true).expect("fixture automaton");
    PairFsa::new(pairs, fsa).expect("fixture relation is well padded")
}

/// ShortLex structure of the free group on the first `n` letters of the
/// alphabet: freely reduced words.
pub fn shortlex_free(n: usize) -> (AutomaticStructure, Presentation) {
    assert!((1..=NAMES.len()).contains(&n));
    let gens: Vec<&str> = (0..n).map(|i| &NAMES[i..i + 1]).collect();
    let alpha = GeneratorAlphabet::free(&gens);
    let pairs = PairAlphabet::new(&alpha);
    let k = alpha.len();
    // state 0: start; state i + 1: last letter was i
    let last = |s: usize| (s > 0).then(|| Letter::from_index(s - 1));
    let allowed = |s: usize, l: Letter| last(s).is_none_or(|p| alpha.inv(p) != l);
    let mut trans = Vec::new();
    for s in 0..=k {
        for l in alpha.letters() {
            if allowed(s, l) {
                trans.push((s as StateId, l, l.0 + 1));
            }
        }
    }
    let acceptor = Fsa::new(alpha.symbols().clone(), k + 1, [0], 0..=k as StateId, trans, true).expect("acceptor");
    let equality = PairFsa::diagonal(&pairs, &acceptor).expect("same alphabet");

    let fin = (k + 1) as StateId;
    let multipliers = alpha
        .letters()
        .map(|x| {
            let mut trans = Vec::new();
            for s in 0..=k {
                for l in alpha.letters() {
                    if allowed(s, l) {
                        trans.push((s as StateId, pairs.label(Some(l), Some(l)), l.0 + 1));
                    }
                }
                // append x, or cancel a trailing x⁻¹
                if allowed(s, x) {
                    trans.push((s as StateId, pairs.label(None, Some(x)), fin));
                }
                if allowed(s, alpha.inv(x)) {
                    trans.push((s as StateId, pairs.label(Some(alpha.inv(x)), None), fin));
                }
            }
            pair_fsa(&pairs, k + 2, &[fin], trans)
        })
        .collect();
    let p = Presentation::new(alpha.clone(), vec![]).expect("no relators");
    (AutomaticStructure::new(alpha, acceptor, equality, multipliers).expect("consistent fixture"), p)
}

/// ShortLex structure of Z² = ⟨x, y | x y x⁻¹ y⁻¹⟩ with order
/// `x < x^ < y < y^`: a block of `x` or of `x^`, then a block of `y` or `y^`.
pub fn shortlex_free_abelian() -> (AutomaticStructure, Presentation) {
    let p = Presentation::parse("gens x y\nrel x y x^ y^\n").expect("fixed text");
    let alpha = p.alphabet().clone();
    let pairs = PairAlphabet::new(&alpha);
    let [x, xi, y, yi] = [0, 1, 2, 3].map(Letter);
    // 0 start, 1 in x block, 2 in x^ block, 3 in y block, 4 in y^ block
    let acceptor_edges: Vec<(StateId, Letter, StateId)> = vec![
        (0, x, 1),
        (0, xi, 2),
        (1, x, 1),
        (2, xi, 2),
        (0, y, 3),
        (1, y, 3),
        (2, y, 3),
        (0, yi, 4),
        (1, yi, 4),
        (2, yi, 4),
        (3, y, 3),
        (4, yi, 4),
    ];
    let acceptor = Fsa::new(alpha.symbols().clone(), 5, [0], 0..5, acceptor_edges.clone(), true).expect("acceptor");
    let equality = PairFsa::diagonal(&pairs, &acceptor).expect("same alphabet");
    let diag = |upto: StateId| -> Vec<(StateId, Letter, StateId)> {
        acceptor_edges
            .iter()
            .filter(|e| e.0 < upto && e.2 < upto)
            .map(|&(f, l, t)| (f, pairs.label(Some(l), Some(l)), t))
            .collect()
    };
    let (s, o) = (Some, None::<Letter>);

    // y-multipliers: append the letter, or drop the last letter of the
    // opposite block
    let mult_y = |p: Letter, q: Letter, p_state: StateId, q_state: StateId| {
        let fin = 5;
        let mut t = diag(5);
        for st in [0, 1, 2, p_state] {
            t.push((st, pairs.label(o, s(p)), fin));
        }
        for st in [0, 1, 2, q_state] {
            t.push((st, pairs.label(s(q), o), fin));
        }
        pair_fsa(&pairs, 6, &[fin], t)
    };

    // x-multipliers: after the x block the y block shifts one place right
    // (block grows) or left (block shrinks)
    let mult_x = |p: Letter, q: Letter, p_state: StateId, q_state: StateId| {
        let fin = 3;
        let grow = [4, 5]; // the y block letter being carried: y, y^
        let shrink = [6, 7];
        let mut t = diag(3);
        for st in [0, p_state] {
            t.push((st, pairs.label(o, s(p)), fin));
            for (c, g) in [y, yi].into_iter().zip(grow) {
                t.push((st, pairs.label(s(c), s(p)), g));
            }
        }
        for st in [0, q_state] {
            t.push((st, pairs.label(s(q), o), fin));
            for (c, h) in [y, yi].into_iter().zip(shrink) {
                t.push((st, pairs.label(s(q), s(c)), h));
            }
        }
        for (c, (g, h)) in [y, yi].into_iter().zip(grow.into_iter().zip(shrink)) {
            t.push((g, pairs.label(s(c), s(c)), g));
            t.push((g, pairs.label(o, s(c)), fin));
            t.push((h, pairs.label(s(c), s(c)), h));
            t.push((h, pairs.label(s(c), o), fin));
        }
        pair_fsa(&pairs, 8, &[fin], t)
    };
    let multipliers = vec![mult_x(x, xi, 1, 2), mult_x(xi, x, 2, 1), mult_y(y, yi, 3, 4), mult_y(yi, y, 4, 3)];
    (AutomaticStructure::new(alpha, acceptor, equality, multipliers).expect("consistent fixture"), p)
}

/// Structure of a finite group read off its complete Cayley graph: each
/// element is represented by its ShortLex-least word, found by breadth-first
/// search in letter order.
pub fn from_cayley(p: &Presentation, graph: &CosetGraphApprox) -> Result<AutomaticStructure, StructureError> {
    if !graph.is_complete() || !graph.is_total() || !graph.closes_at_every_vertex(p.relators()) {
        return Err(StructureError::NotComplete);
    }
    if graph.alphabet() != p.alphabet() {
        return Err(StructureError::AlphabetMismatch);
    }
    let alpha = p.alphabet().clone();
    let pairs = PairAlphabet::new(&alpha);
    let n = graph.num_vertices();
    let mut word: Vec<Option<Word>> = vec![None; n];
    word[graph.basepoint() as usize] = Some(Word::empty());
    let mut queue = VecDeque::from([graph.basepoint()]);
    while let Some(v) = queue.pop_front() {
        for x in alpha.letters() {
            let t = graph.edge(v, x).expect("total graph");
            if word[t as usize].is_none() {
                let mut w = word[v as usize].clone().expect("visited");
                w.push(x);
                word[t as usize] = Some(w);
                queue.push_back(t);
            }
        }
    }
    let word: Vec<Word> = word.into_iter().map(|w| w.ok_or(StructureError::NotComplete)).collect::<Result<_, _>>()?;
    let cap = state_cap();
    let acceptor = Fsa::from_words(alpha.symbols().clone(), &word).minimize_capped(cap)?.trim();
    let equality = PairFsa::diagonal(&pairs, &acceptor)?.minimized(cap)?;
    let multipliers = alpha
        .letters()
        .map(|x| {
            let rel: Vec<(&Word, &Word)> =
                (0..n as u32).map(|v| (&word[v as usize], &word[graph.edge(v, x).expect("total") as usize])).collect();
            PairFsa::from_pairs(&pairs, rel).minimized(cap)
        })
        .collect::<Result<_, _>>()?;
    AutomaticStructure::new(alpha, acceptor, equality, multipliers)
}

fn finite(p: Presentation) -> Result<(AutomaticStructure, Presentation), StructureError> {
    let trivial = SubgroupSpec::new(p.alphabet(), vec![])?;
    let mut last = None;
    for snap in enumerate(&p, &trivial, SnapshotPolicy::EveryWave, CosetCaps::default())? {
        last = Some(snap?);
    }
    let g = last.ok_or(StructureError::NotComplete)?;
    Ok((from_cayley(&p, &g)?, p))
}

/// Z_n = ⟨a | aⁿ⟩ with `a` and `a^` distinct letters.
pub fn cyclic(n: usize) -> (AutomaticStructure, Presentation) {
    assert!(n >= 1);
    let rel = vec!["a"; n].join(" ");
    let p = Presentation::parse(&format!("gens a\nrel {rel}\n")).expect("cyclic presentation");
    finite(p).expect("finite group")
}

/// S₃ = ⟨a, b | a², b², (ab)³⟩ with self-inverse `a`, `b`.
pub fn s3() -> (AutomaticStructure, Presentation) {
    let p = Presentation::parse("gens a b\nselfinv a b\nrel a b a b a b\n").expect("fixed text");
    finite(p).expect("finite group")
}

/// Named fixture: `free:<n>`, `zz`, `cyclic:<n>` or `s3`.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: String,
    pub structure: AutomaticStructure,
    pub presentation: Presentation,
}

impl Fixture {
    pub fn load(name: &str) -> Result<Fixture, StructureError> {
        let unknown = || StructureError::UnknownFixture(name.to_string());
        let count = |s: &str, max: usize| s.parse::<usize>().ok().filter(|&n| (1..=max).contains(&n)).ok_or_else(unknown);
        let (structure, presentation) = match name.split_once(':') {
            Some(("free", n)) => shortlex_free(count(n, NAMES.len())?),
            Some(("cyclic", n)) => cyclic(count(n, 10_000)?),
            None if name == "zz" => shortlex_free_abelian(),
            None if name == "s3" => s3(),
            _ => return Err(unknown()),
        };
        Ok(Fixture { name: name.to_string(), structure, presentation })
    }
}
