use std::collections::{HashMap, VecDeque};

use super::{Dense, Fsa, FsaError, StateId};
use crate::group::{Letter, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CombineMode {
    Intersection,
    Union,
    Difference,
}

impl CombineMode {
    fn accepts(self, a: bool, b: bool) -> bool {
        match self {
            CombineMode::Intersection => a && b,
            CombineMode::Union => a || b,
            CombineMode::Difference => a && !b,
        }
    }
}

struct PairIndex {
    nb: usize,
    dense: Option<Vec<StateId>>,
    sparse: HashMap<(StateId, StateId), StateId>,
}

impl PairIndex {
    fn new(na: usize, nb: usize) -> Self {
        let dense = (na.saturating_mul(nb) <= 1 << 22).then(|| vec![StateId::MAX; na * nb]);
        PairIndex { nb, dense, sparse: HashMap::new() }
    }

    fn get(&self, p: (StateId, StateId)) -> Option<StateId> {
        match &self.dense {
            Some(v) => Some(v[p.0 as usize * self.nb + p.1 as usize]).filter(|&x| x != StateId::MAX),
            None => self.sparse.get(&p).copied(),
        }
    }

    fn insert(&mut self, p: (StateId, StateId), id: StateId) {
        match &mut self.dense {
            Some(v) => v[p.0 as usize * self.nb + p.1 as usize] = id,
            None => {
                self.sparse.insert(p, id);
            }
        }
    }
}

/// Reachable part of the synchronous product of two complete DFAs, with
/// breadth-first numbering.  Returns the pair table alongside.
fn product(a: &Dense, b: &Dense, cap: usize) -> Result<(Vec<(StateId, StateId)>, Vec<StateId>), FsaError> {
    let k = a.k;
    let mut index = PairIndex::new(a.n(), b.n());
    let mut pairs = vec![(a.start, b.start)];
    index.insert((a.start, b.start), 0);
    let mut delta = Vec::new();
    let mut i = 0;
    while i < pairs.len() {
        let (p, q) = pairs[i];
        for l in 0..k {
            let t = (a.next(p, l), b.next(q, l));
            let id = match index.get(t) {
                Some(id) => id,
                None => {
                    if pairs.len() >= cap {
                        return Err(FsaError::StateCap { cap });
                    }
                    let id = pairs.len() as StateId;
                    index.insert(t, id);
                    pairs.push(t);
                    id
                }
            };
            delta.push(id);
        }
        i += 1;
    }
    Ok((pairs, delta))
}

pub(super) fn combine(a: &Fsa, b: &Fsa, mode: CombineMode, cap: usize) -> Result<Fsa, FsaError> {
    if !a.symbols().same_as(b.symbols()) {
        return Err(FsaError::AlphabetMismatch);
    }
    let da = a.to_dense(cap)?;
    let db = b.to_dense(cap)?;
    let (pairs, delta) = product(&da, &db, cap)?;
    let accepting = pairs
        .iter()
        .map(|&(p, q)| mode.accepts(da.accepting[p as usize], db.accepting[q as usize]))
        .collect();
    Ok(Dense { k: da.k, start: 0, delta, accepting }.into_fsa(a.symbols().clone()))
}

pub(super) fn distinguishing_word(a: &Fsa, b: &Fsa, cap: usize) -> Result<Option<Word>, FsaError> {
    if !a.symbols().same_as(b.symbols()) {
        return Err(FsaError::AlphabetMismatch);
    }
    let da = a.to_dense(cap)?;
    let db = b.to_dense(cap)?;
    let k = da.k;
    let mut index = PairIndex::new(da.n(), db.n());
    let mut pairs = vec![(da.start, db.start)];
    let mut parent: Vec<(StateId, Letter)> = vec![(StateId::MAX, Letter(0))];
    index.insert((da.start, db.start), 0);
    let mut queue = VecDeque::from([0 as StateId]);
    while let Some(id) = queue.pop_front() {
        let (p, q) = pairs[id as usize];
        if da.accepting[p as usize] != db.accepting[q as usize] {
            let mut letters = Vec::new();
            let mut cur = id;
            while parent[cur as usize].0 != StateId::MAX {
                let (up, l) = parent[cur as usize];
                letters.push(l);
                cur = up;
            }
            letters.reverse();
            return Ok(Some(Word(letters)));
        }
        for l in 0..k {
            let t = (da.next(p, l), db.next(q, l));
            if index.get(t).is_none() {
                if pairs.len() >= cap {
                    return Err(FsaError::StateCap { cap });
                }
                let nid = pairs.len() as StateId;
                index.insert(t, nid);
                pairs.push(t);
                parent.push((id, Letter::from_index(l)));
                queue.push_back(nid);
            }
        }
    }
    Ok(None)
}
