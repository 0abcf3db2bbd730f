//! Brute-force oracles shared by the integration tests.  Nothing here goes
//! through the automata machinery of the crate.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

use num_rational::Ratio;

use qcdetect::fsa::Fsa;
use qcdetect::group::{GeneratorAlphabet, Letter, Presentation, Symbols, Word};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

// ---------------------------------------------------------------------------
// signed-integer words: generator k is k+1, its inverse -(k+1)

/// Translates by symbol names: `g` is positive, `g^` negative, generators
/// numbered in order of first appearance.
pub fn signed(alpha: &GeneratorAlphabet, w: &Word) -> Vec<i32> {
    let bases: Vec<&str> = alpha.symbols().names().iter().map(|n| n.as_str()).filter(|n| !n.ends_with('^')).collect();
    w.letters()
        .iter()
        .map(|&l| {
            let name = alpha.name(l);
            let (base, sign) = match name.strip_suffix('^') {
                Some(b) => (b, -1),
                None => (name, 1),
            };
            sign * (bases.iter().position(|b| *b == base).expect("known generator") as i32 + 1)
        })
        .collect()
}

pub fn unsigned(alpha: &GeneratorAlphabet, w: &[i32]) -> Word {
    let names: Vec<String> = w
        .iter()
        .map(|&g| {
            let base = alpha.symbols().names().iter().filter(|n| !n.ends_with('^')).nth(g.unsigned_abs() as usize - 1).unwrap();
            if g > 0 {
                base.clone()
            } else {
                format!("{base}^")
            }
        })
        .collect();
    alpha.parse_word(&names.join(" ")).unwrap()
}

pub fn reduce_signed(w: &[i32]) -> Vec<i32> {
    let mut out: Vec<i32> = Vec::with_capacity(w.len());
    for &g in w {
        if out.last() == Some(&-g) {
            out.pop();
        } else {
            out.push(g);
        }
    }
    out
}

pub fn invert_signed(w: &[i32]) -> Vec<i32> {
    w.iter().rev().map(|g| -g).collect()
}

/// All freely reduced words over `n` generators of length exactly `len`,
/// in ShortLex order for the ordering `1 < -1 < 2 < -2 < …`.
pub fn reduced_words(n: i32, len: usize) -> Vec<Vec<i32>> {
    let letters: Vec<i32> = (1..=n).flat_map(|g| [g, -g]).collect();
    let mut layer = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &layer {
            for &g in &letters {
                if w.last() != Some(&-g) {
                    let mut v: Vec<i32> = w.clone();
                    v.push(g);
                    next.push(v);
                }
            }
        }
        layer = next;
    }
    layer
}

/// Every word over the alphabet up to `len`, in ShortLex order.
pub fn all_words(alpha: &GeneratorAlphabet, len: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut layer = vec![Word::empty()];
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &layer {
            for x in alpha.letters() {
                let mut v = w.clone();
                v.push(x);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

// ---------------------------------------------------------------------------
// Stallings folding for subgroups of free groups

/// The folded core graph of a subgroup of a free group, basepoint 0.
#[derive(Clone, Debug)]
pub struct Stallings {
    out: Vec<BTreeMap<i32, usize>>,
}

impl Stallings {
    pub fn new(gens: &[Vec<i32>]) -> Stallings {
        let mut edges: Vec<(usize, i32, usize)> = Vec::new();
        let mut n = 1;
        for g in gens {
            let g = reduce_signed(g);
            if g.is_empty() {
                continue;
            }
            let mut cur = 0;
            for (i, &x) in g.iter().enumerate() {
                let next = if i + 1 == g.len() {
                    0
                } else {
                    n += 1;
                    n - 1
                };
                edges.push((cur, x, next));
                cur = next;
            }
        }
        // fold until no vertex has two edges with the same label
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut v: usize) -> usize {
            while p[v] != v {
                p[v] = p[p[v]];
                v = p[v];
            }
            v
        }
        loop {
            let mut seen: BTreeMap<(usize, i32), usize> = BTreeMap::new();
            let mut merge = None;
            for &(u, x, v) in &edges {
                let (u, v) = (find(&mut parent, u), find(&mut parent, v));
                for (a, l, b) in [(u, x, v), (v, -x, u)] {
                    match seen.get(&(a, l)) {
                        Some(&c) if c != b => {
                            merge = Some((c, b));
                            break;
                        }
                        _ => {
                            seen.insert((a, l), b);
                        }
                    }
                }
                if merge.is_some() {
                    break;
                }
            }
            match merge {
                Some((a, b)) => {
                    let (a, b) = (a.min(b), a.max(b));
                    parent[b] = a;
                }
                None => break,
            }
        }
        let mut ids = BTreeMap::new();
        for v in 0..n {
            let r = find(&mut parent, v);
            let next = ids.len();
            ids.entry(r).or_insert(next);
        }
        let mut out = vec![BTreeMap::new(); ids.len()];
        for &(u, x, v) in &edges {
            let (u, v) = (ids[&find(&mut parent, u)], ids[&find(&mut parent, v)]);
            out[u].insert(x, v);
            out[v].insert(-x, u);
        }
        Stallings { out }
    }

    pub fn num_vertices(&self) -> usize {
        self.out.len()
    }

    pub fn contains(&self, w: &[i32]) -> bool {
        let mut v = 0;
        for &x in &reduce_signed(w) {
            match self.out[v].get(&x) {
                Some(&t) => v = t,
                None => return false,
            }
        }
        v == 0
    }

    /// Ball of radius `k` in the Schreier coset graph, vertices renumbered
    /// breadth first (neighbours in the order `1, -1, 2, -2, …`), as a set
    /// of edges `(from, generator, to)` between vertices of the ball.
    pub fn schreier_ball(&self, n_gens: i32, k: usize) -> BTreeSet<(usize, i32, usize)> {
        let letters: Vec<i32> = (1..=n_gens).flat_map(|g| [g, -g]).collect();
        let mut reps: Vec<Vec<i32>> = vec![Vec::new()];
        let mut depth = vec![0usize];
        let find = |reps: &[Vec<i32>], w: &[i32]| {
            reps.iter().position(|r| {
                let mut t = w.to_vec();
                t.extend(invert_signed(r));
                self.contains(&t)
            })
        };
        let mut i = 0;
        while i < reps.len() {
            if depth[i] < k {
                for &x in &letters {
                    let mut w = reps[i].clone();
                    w.push(x);
                    let w = reduce_signed(&w);
                    if find(&reps, &w).is_none() {
                        reps.push(w);
                        depth.push(depth[i] + 1);
                    }
                }
            }
            i += 1;
        }
        let mut edges = BTreeSet::new();
        for (u, r) in reps.iter().enumerate() {
            for &x in &letters {
                let mut w = r.clone();
                w.push(x);
                if let Some(v) = find(&reps, &reduce_signed(&w)) {
                    edges.insert((u, x, v));
                }
            }
        }
        edges
    }
}

// ---------------------------------------------------------------------------
// concrete models of the fixture groups

/// A group given by an explicit element representation.
pub trait Model {
    type Elem: Clone + Ord + std::hash::Hash + std::fmt::Debug;
    fn identity(&self) -> Self::Elem;
    /// Right multiplication by a generator given by name (`g` or `g^`).
    fn step(&self, e: &Self::Elem, name: &str) -> Self::Elem;

    fn eval(&self, alpha: &GeneratorAlphabet, w: &Word) -> Self::Elem {
        w.letters().iter().fold(self.identity(), |e, &l| self.step(&e, alpha.name(l)))
    }
}

pub struct FreeModel;

impl Model for FreeModel {
    type Elem = Vec<String>;
    fn identity(&self) -> Vec<String> {
        Vec::new()
    }
    fn step(&self, e: &Vec<String>, name: &str) -> Vec<String> {
        let inv = match name.strip_suffix('^') {
            Some(b) => b.to_string(),
            None => format!("{name}^"),
        };
        let mut e = e.clone();
        if e.last() == Some(&inv) {
            e.pop();
        } else {
            e.push(name.to_string());
        }
        e
    }
}

/// Z² on generators `x`, `y`.
pub struct Z2Model;

impl Model for Z2Model {
    type Elem = (i64, i64);
    fn identity(&self) -> (i64, i64) {
        (0, 0)
    }
    fn step(&self, &(i, j): &(i64, i64), name: &str) -> (i64, i64) {
        match name {
            "x" => (i + 1, j),
            "x^" => (i - 1, j),
            "y" => (i, j + 1),
            "y^" => (i, j - 1),
            _ => panic!("not a generator of Z2: {name}"),
        }
    }
}

/// Z/n on generator `a`.
pub struct CyclicModel(pub i64);

impl Model for CyclicModel {
    type Elem = i64;
    fn identity(&self) -> i64 {
        0
    }
    fn step(&self, e: &i64, name: &str) -> i64 {
        match name {
            "a" => (e + 1).rem_euclid(self.0),
            "a^" => (e - 1).rem_euclid(self.0),
            _ => panic!("not a generator of Z/n: {name}"),
        }
    }
}

/// S3 with `a = (0 1)` and `b = (1 2)`, acting on the right.
pub struct S3Model;

impl Model for S3Model {
    type Elem = [u8; 3];
    fn identity(&self) -> [u8; 3] {
        [0, 1, 2]
    }
    fn step(&self, e: &[u8; 3], name: &str) -> [u8; 3] {
        let t: [u8; 3] = match name {
            "a" => [1, 0, 2],
            "b" => [0, 2, 1],
            _ => panic!("not a generator of S3: {name}"),
        };
        [t[e[0] as usize], t[e[1] as usize], t[e[2] as usize]]
    }
}

/// Every element of a finite group, by breadth-first closure.
pub fn elements<M: Model>(m: &M, alpha: &GeneratorAlphabet) -> BTreeSet<M::Elem> {
    let mut seen = BTreeSet::from([m.identity()]);
    let mut queue = VecDeque::from([m.identity()]);
    while let Some(e) = queue.pop_front() {
        for name in alpha.symbols().names() {
            let f = m.step(&e, name);
            if seen.insert(f.clone()) {
                queue.push_back(f);
            }
        }
    }
    seen
}

/// The subgroup of a finite group generated by the values of `gens`.
pub fn finite_subgroup<M: Model>(m: &M, alpha: &GeneratorAlphabet, gens: &[Word]) -> BTreeSet<M::Elem> {
    let gens: Vec<Word> = gens.iter().flat_map(|g| [g.clone(), alpha.inverse(g)]).collect();
    let mut seen = BTreeSet::from([m.identity()]);
    let mut queue = VecDeque::from([m.identity()]);
    while let Some(e) = queue.pop_front() {
        for g in &gens {
            let f = g.letters().iter().fold(e.clone(), |e, &l| m.step(&e, alpha.name(l)));
            if seen.insert(f.clone()) {
                queue.push_back(f);
            }
        }
    }
    seen
}

/// ShortLex normal form of `(i, j)` in Z² with `x < x^ < y < y^`.
pub fn z2_normal_form(alpha: &GeneratorAlphabet, (i, j): (i64, i64)) -> Word {
    let mut names = Vec::new();
    names.extend(std::iter::repeat_n(if i >= 0 { "x" } else { "x^" }, i.unsigned_abs() as usize));
    names.extend(std::iter::repeat_n(if j >= 0 { "y" } else { "y^" }, j.unsigned_abs() as usize));
    alpha.parse_word(&names.join(" ")).unwrap()
}

// ---------------------------------------------------------------------------
// normal-closure enumeration

/// Freely reduced words of length at most `bound` that can be brought to
/// the empty word by inserting conjugates of relators and multiplying by
/// subgroup generators on either side, without ever exceeding `bound`.
/// Every such word represents an element of the subgroup; with no
/// subgroup generators these are the words trivial in the group.
pub struct NormalClosure {
    inv: Vec<u32>,
    bound: usize,
    reached: HashSet<Vec<u32>>,
}

impl NormalClosure {
    pub fn new(p: &Presentation, subgroup: &[Word], bound: usize) -> NormalClosure {
        let alpha = p.alphabet();
        let inv: Vec<u32> = alpha.letters().map(|l| alpha.inv(l).0).collect();
        let raw = |w: &Word| w.letters().iter().map(|l| l.0).collect::<Vec<u32>>();
        let invert = |w: &[u32]| w.iter().rev().map(|&l| inv[l as usize]).collect::<Vec<u32>>();

        let mut inserts: BTreeSet<Vec<u32>> = BTreeSet::new();
        for r in p.relators() {
            let r = raw(r);
            for w in [r.clone(), invert(&r)] {
                for s in 0..w.len() {
                    inserts.insert(w[s..].iter().chain(&w[..s]).copied().collect());
                }
            }
        }
        let mut sides: Vec<Vec<u32>> = Vec::new();
        for g in subgroup {
            sides.push(raw(g));
            sides.push(invert(&raw(g)));
        }

        let mut nc = NormalClosure { inv, bound, reached: HashSet::new() };
        let start: Vec<u32> = Vec::new();
        nc.reached.insert(start.clone());
        let mut queue = VecDeque::from([start]);
        while let Some(w) = queue.pop_front() {
            let mut next = Vec::new();
            for c in &inserts {
                for pos in 0..=w.len() {
                    let mut v = w[..pos].to_vec();
                    v.extend(c);
                    v.extend(&w[pos..]);
                    next.push(v);
                }
            }
            for s in &sides {
                let mut v = s.clone();
                v.extend(&w);
                next.push(v);
                let mut v = w.clone();
                v.extend(s);
                next.push(v);
            }
            for v in next {
                let v = nc.reduce(&v);
                if v.len() <= nc.bound && !nc.reached.contains(&v) {
                    nc.reached.insert(v.clone());
                    queue.push_back(v);
                }
            }
        }
        nc
    }

    fn reduce(&self, w: &[u32]) -> Vec<u32> {
        let mut out: Vec<u32> = Vec::with_capacity(w.len());
        for &l in w {
            if out.last() == Some(&self.inv[l as usize]) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        out
    }

    pub fn size(&self) -> usize {
        self.reached.len()
    }

    pub fn confirms(&self, w: &Word) -> bool {
        let raw: Vec<u32> = w.letters().iter().map(|l| l.0).collect();
        self.reached.contains(&self.reduce(&raw))
    }
}

// ---------------------------------------------------------------------------
// random automata and independent language evaluation

pub fn symbols(n: usize) -> Symbols {
    Symbols::new(["p", "q", "r", "s"].iter().take(n).copied()).unwrap()
}

/// A random automaton with at most `max_states` states; deterministic
/// about half of the time.
pub fn random_fsa(rng: &mut ChaCha8Rng, syms: &Symbols, max_states: usize) -> Fsa {
    let n = rng.gen_range(1..=max_states);
    let det = rng.gen_bool(0.5);
    let mut trans = Vec::new();
    for s in 0..n as u32 {
        for l in syms.letters() {
            if det {
                if rng.gen_bool(0.8) {
                    trans.push((s, l, rng.gen_range(0..n as u32)));
                }
            } else {
                for t in 0..n as u32 {
                    if rng.gen_bool(0.25) {
                        trans.push((s, l, t));
                    }
                }
            }
        }
    }
    let initial: Vec<u32> = if det {
        vec![0]
    } else {
        (0..n as u32).filter(|_| rng.gen_bool(0.3)).collect()
    };
    let accepting: Vec<u32> = (0..n as u32).filter(|_| rng.gen_bool(0.4)).collect();
    Fsa::new(syms.clone(), n, initial, accepting, trans, det).unwrap()
}

/// Accepted words up to length `n` by subset simulation over the raw
/// transition lists.
pub fn language(m: &Fsa, n: usize) -> BTreeSet<Vec<u32>> {
    let k = m.symbols().len() as u32;
    let start: BTreeSet<u32> = m.initial().iter().copied().collect();
    let mut out = BTreeSet::new();
    let mut stack = vec![(Vec::new(), start)];
    while let Some((w, set)) = stack.pop() {
        if set.is_empty() {
            continue;
        }
        if set.iter().any(|&s| m.is_accepting(s)) {
            out.insert(w.clone());
        }
        if w.len() == n {
            continue;
        }
        for l in 0..k {
            let next: BTreeSet<u32> =
                set.iter().flat_map(|&s| m.transitions(s).iter().filter(|(x, _)| x.0 == l).map(|&(_, t)| t)).collect();
            let mut v = w.clone();
            v.push(l);
            stack.push((v, next));
        }
    }
    out
}

pub fn to_word(w: &[u32]) -> Word {
    Word(w.iter().map(|&l| Letter(l)).collect())
}

pub fn random_word(rng: &mut ChaCha8Rng, k: usize, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    Word((0..len).map(|_| Letter(rng.gen_range(0..k as u32))).collect())
}

// ---------------------------------------------------------------------------
// subgroups of free groups over their own generators

/// Elements of the subgroup generated by `gens` within `radius` steps of
/// the identity in its own word metric (generators and their inverses),
/// as reduced words, by breadth-first search using free reduction only.
pub fn subgroup_ball(gens: &[Vec<i32>], radius: usize) -> HashMap<Vec<i32>, usize> {
    let mut v: Vec<Vec<i32>> = gens.to_vec();
    v.extend(gens.iter().map(|g| invert_signed(g)));
    let mut dist: HashMap<Vec<i32>, usize> = HashMap::from([(Vec::new(), 0)]);
    let mut layer = vec![Vec::new()];
    for d in 1..=radius {
        let mut next = Vec::new();
        for e in &layer {
            for g in &v {
                let mut f = e.clone();
                f.extend(g);
                let f = reduce_signed(&f);
                if !dist.contains_key(&f) {
                    dist.insert(f.clone(), d);
                    next.push(f);
                }
            }
        }
        layer = next;
    }
    dist
}

/// λ over V-geodesic words of length ≤ `len`, by brute force: the subgroup's
/// elements as reduced words, distances by breadth-first search, then every
/// vertex pair of every substituted path.
pub fn brute_lambda(gens: &[Vec<i32>], len: usize) -> Ratio<i64> {
    let mut v: Vec<Vec<i32>> = gens.to_vec();
    v.extend(gens.iter().map(|g| invert_signed(g)));
    let dist = subgroup_ball(gens, len);
    let mut lambda = Ratio::from_integer(1);
    let mut words: Vec<Vec<usize>> = vec![vec![]];
    let mut layer = words.clone();
    for _ in 0..len {
        layer = layer.iter().flat_map(|w| (0..v.len()).map(move |i| [w.clone(), vec![i]].concat())).collect();
        words.extend(layer.iter().cloned());
    }
    for w in words {
        let path: Vec<i32> = w.iter().flat_map(|&i| v[i].clone()).collect();
        if dist.get(&reduce_signed(&path)) != Some(&w.len()) {
            continue;
        }
        for p in 0..path.len() {
            for q in p + 1..=path.len() {
                let d = reduce_signed(&path[p..q]).len() as i64;
                let r = Ratio::new((q - p) as i64, d + 1);
                if r > lambda {
                    lambda = r;
                }
            }
        }
    }
    lambda
}
