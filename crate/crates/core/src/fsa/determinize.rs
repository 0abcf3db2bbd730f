use std::collections::HashMap;
use std::collections::VecDeque;

use super::{Dense, Fsa, FsaError, StateId};

const SINK: StateId = StateId::MAX;

impl Fsa {
    /// Subset construction restricted to reachable subsets.  States of the
    /// result are numbered in breadth-first discovery order; the empty subset
    /// becomes a sink if it is reached.
    pub(crate) fn to_dense(&self, cap: usize) -> Result<Dense, FsaError> {
        if self.is_structurally_deterministic() {
            return self.complete_deterministic(cap);
        }
        let k = self.symbols().len();
        let mut ids: HashMap<Vec<StateId>, StateId> = HashMap::new();
        let mut sets: Vec<Vec<StateId>> = Vec::new();
        let mut delta: Vec<StateId> = Vec::new();
        let mut accepting = Vec::new();

        let start = self.initial().to_vec();
        ids.insert(start.clone(), 0);
        accepting.push(start.iter().any(|&s| self.is_accepting(s)));
        sets.push(start);

        let mut buckets: Vec<Vec<StateId>> = vec![Vec::new(); k];
        let mut i = 0;
        while i < sets.len() {
            for b in &mut buckets {
                b.clear();
            }
            for &s in &sets[i] {
                for &(l, t) in self.transitions(s) {
                    buckets[l.index()].push(t);
                }
            }
            for b in buckets.iter_mut() {
                b.sort_unstable();
                b.dedup();
                let id = match ids.get(b.as_slice()) {
                    Some(&id) => id,
                    None => {
                        if sets.len() >= cap {
                            return Err(FsaError::StateCap { cap });
                        }
                        let id = sets.len() as StateId;
                        ids.insert(b.clone(), id);
                        accepting.push(b.iter().any(|&s| self.is_accepting(s)));
                        sets.push(b.clone());
                        id
                    }
                };
                delta.push(id);
            }
            i += 1;
        }
        Ok(Dense { k, start: 0, delta, accepting })
    }

    fn complete_deterministic(&self, cap: usize) -> Result<Dense, FsaError> {
        let k = self.symbols().len();
        let mut map = vec![SINK; self.num_states()];
        let mut order: Vec<StateId> = Vec::new();
        let mut sink_id: Option<StateId> = None;
        let mut delta: Vec<StateId> = Vec::new();
        let mut accepting = Vec::new();

        let s0 = self.initial()[0];
        map[s0 as usize] = 0;
        order.push(s0);
        accepting.push(self.is_accepting(s0));
        let mut queue: VecDeque<StateId> = VecDeque::from([0]);
        while let Some(id) = queue.pop_front() {
            let old = order[id as usize];
            let base = delta.len();
            delta.resize(base + k, 0);
            if old == SINK {
                for l in 0..k {
                    delta[base + l] = id;
                }
                continue;
            }
            let mut row = vec![SINK; k];
            for &(l, t) in self.transitions(old) {
                row[l.index()] = t;
            }
            for (l, &t) in row.iter().enumerate() {
                let target = if t == SINK {
                    match sink_id {
                        Some(s) => s,
                        None => {
                            let s = order.len() as StateId;
                            sink_id = Some(s);
                            order.push(SINK);
                            accepting.push(false);
                            queue.push_back(s);
                            s
                        }
                    }
                } else if map[t as usize] != SINK {
                    map[t as usize]
                } else {
                    let s = order.len() as StateId;
                    map[t as usize] = s;
                    order.push(t);
                    accepting.push(self.is_accepting(t));
                    queue.push_back(s);
                    s
                };
                if order.len() > cap {
                    return Err(FsaError::StateCap { cap });
                }
                delta[base + l] = target;
            }
        }
        Ok(Dense { k, start: 0, delta, accepting })
    }
}
