use std::collections::{HashMap, VecDeque};

use super::{Dense, StateId};

impl Dense {
    /// Moore partition refinement followed by canonical breadth-first
    /// renumbering.  Assumes every state is reachable from `start`.
    pub(crate) fn minimized(&self) -> Dense {
        let n = self.n();
        let k = self.k;
        let mut class: Vec<u32> = self.accepting.iter().map(|&a| a as u32).collect();
        let mut count = {
            let any_acc = self.accepting.iter().any(|&a| a);
            let any_rej = self.accepting.iter().any(|&a| !a);
            any_acc as usize + any_rej as usize
        };
        // make the two initial classes dense ids
        if count == 1 {
            class.iter_mut().for_each(|c| *c = 0);
        }
        let mut sig: Vec<u32> = Vec::with_capacity(k + 1);
        loop {
            let mut table: HashMap<Vec<u32>, u32> = HashMap::with_capacity(count * 2);
            let mut next = vec![0u32; n];
            for s in 0..n {
                sig.clear();
                sig.push(class[s]);
                sig.extend((0..k).map(|l| class[self.delta[s * k + l] as usize]));
                let fresh = table.len() as u32;
                next[s] = *table.entry(sig.clone()).or_insert(fresh);
            }
            let new_count = table.len();
            class = next;
            if new_count == count {
                break;
            }
            count = new_count;
        }

        // canonical numbering of the quotient
        let mut rep = vec![StateId::MAX; count];
        for s in (0..n).rev() {
            rep[class[s] as usize] = s as StateId;
        }
        let mut num = vec![StateId::MAX; count];
        let mut order: Vec<u32> = Vec::with_capacity(count);
        let c0 = class[self.start as usize];
        num[c0 as usize] = 0;
        order.push(c0);
        let mut queue = VecDeque::from([c0]);
        while let Some(c) = queue.pop_front() {
            let s = rep[c as usize] as usize;
            for l in 0..k {
                let d = class[self.delta[s * k + l] as usize];
                if num[d as usize] == StateId::MAX {
                    num[d as usize] = order.len() as StateId;
                    order.push(d);
                    queue.push_back(d);
                }
            }
        }
        let m = order.len();
        let mut delta = Vec::with_capacity(m * k);
        let mut accepting = Vec::with_capacity(m);
        for &c in &order {
            let s = rep[c as usize] as usize;
            accepting.push(self.accepting[s]);
            for l in 0..k {
                delta.push(num[class[self.delta[s * k + l] as usize] as usize]);
            }
        }
        Dense { k, start: 0, delta, accepting }
    }
}
