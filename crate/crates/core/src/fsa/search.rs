use std::collections::{HashMap, VecDeque};

use super::{state_cap, Fsa, StateId};
use crate::group::{Letter, Word};

fn successors(m: &Fsa, set: &[StateId], l: Letter, alive: &[bool]) -> Vec<StateId> {
    let mut out: Vec<StateId> = set
        .iter()
        .flat_map(|&s| m.transitions(s).iter().filter(move |e| e.0 == l).map(|e| e.1))
        .filter(|&t| alive[t as usize])
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Layer-by-layer expansion over state sets.  Each layer is kept in
/// lexicographic order, so the concatenation of layers is ShortLex order.
pub(super) fn accepted_words(m: &Fsa, max_len: usize, limit: usize) -> Vec<Word> {
    let mut out = Vec::new();
    if limit == 0 {
        return out;
    }
    let alive = m.coreachable();
    let start: Vec<StateId> = m.initial().iter().copied().filter(|&s| alive[s as usize]).collect();
    if start.is_empty() {
        return out;
    }
    let k = m.symbols().len();
    let mut layer: Vec<(Word, Vec<StateId>)> = vec![(Word::empty(), start)];
    for len in 0..=max_len {
        for (w, set) in &layer {
            if set.iter().any(|&s| m.is_accepting(s)) {
                out.push(w.clone());
                if out.len() >= limit {
                    return out;
                }
            }
        }
        if len == max_len {
            break;
        }
        let mut next = Vec::new();
        for (w, set) in &layer {
            for l in (0..k).map(Letter::from_index) {
                let t = successors(m, set, l, &alive);
                if !t.is_empty() {
                    let mut v = w.clone();
                    v.push(l);
                    next.push((v, t));
                }
            }
        }
        if next.is_empty() {
            break;
        }
        layer = next;
    }
    out
}

pub(super) fn shortest_accepted(m: &Fsa) -> Option<Word> {
    let alive = m.coreachable();
    let start: Vec<StateId> = m.initial().iter().copied().filter(|&s| alive[s as usize]).collect();
    if start.is_empty() {
        return None;
    }
    let k = m.symbols().len();
    let mut ids: HashMap<Vec<StateId>, usize> = HashMap::new();
    let mut sets = vec![start.clone()];
    let mut parent: Vec<(usize, Letter)> = vec![(usize::MAX, Letter(0))];
    ids.insert(start, 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        if sets[i].iter().any(|&s| m.is_accepting(s)) {
            let mut letters = Vec::new();
            let mut cur = i;
            while parent[cur].0 != usize::MAX {
                letters.push(parent[cur].1);
                cur = parent[cur].0;
            }
            letters.reverse();
            return Some(Word(letters));
        }
        for l in (0..k).map(Letter::from_index) {
            let t = successors(m, &sets[i], l, &alive);
            if t.is_empty() || ids.contains_key(&t) {
                continue;
            }
            ids.insert(t.clone(), sets.len());
            sets.push(t);
            parent.push((i, l));
            queue.push_back(sets.len() - 1);
        }
    }
    None
}

pub(super) fn count_if_finite(m: &Fsa) -> Option<u128> {
    let d = m.determinize_capped(state_cap()).ok()?.trim();
    if d.initial().is_empty() {
        return Some(0);
    }
    let n = d.num_states();
    // iterative DFS for cycle detection and post-order
    let mut color = vec![0u8; n];
    let mut post = Vec::with_capacity(n);
    let mut stack: Vec<(StateId, usize)> = vec![(d.initial()[0], 0)];
    color[d.initial()[0] as usize] = 1;
    while let Some(&mut (s, ref mut i)) = stack.last_mut() {
        let tr = d.transitions(s);
        if *i < tr.len() {
            let t = tr[*i].1;
            *i += 1;
            match color[t as usize] {
                0 => {
                    color[t as usize] = 1;
                    stack.push((t, 0));
                }
                1 => return None,
                _ => {}
            }
        } else {
            color[s as usize] = 2;
            post.push(s);
            stack.pop();
        }
    }
    let mut count = vec![0u128; n];
    for &s in &post {
        let mut c = d.is_accepting(s) as u128;
        for &(_, t) in d.transitions(s) {
            c = c.saturating_add(count[t as usize]);
        }
        count[s as usize] = c;
    }
    Some(count[d.initial()[0] as usize])
}
