use serde::Serialize;

use super::AutomaticStructure;
use crate::fsa::{combine_capped, state_cap, CombineMode};
use crate::group::{Letter, Word};
use crate::pair::{PairFsa, Tape};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Counterexample {
    /// A pair accepted by exactly one of the equality recognizer and the
    /// diagonal of the acceptor.
    Uniqueness { first: String, second: String },
    /// A word on one tape of a multiplier that is not a normal form.
    Projection { symbol: String, tape: String, word: String },
    /// A pair separating `M_x ∘ M_inv(x)` from the diagonal.
    Consistency { symbol: String, first: String, second: String },
    /// A word that failed to reduce.
    Reduction { word: String, error: String },
    /// Some operation could not be carried out at all.
    Failure { check: String, error: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub uniqueness_ok: bool,
    pub projection_ok: Vec<(String, bool)>,
    pub consistency_ok: Vec<(String, bool)>,
    pub sampled_surjectivity_ok: bool,
    pub sample_depth: usize,
    pub counterexamples: Vec<Counterexample>,
}

impl ValidationReport {
    pub fn all_ok(&self) -> bool {
        self.counterexamples.is_empty()
    }

    pub fn projection_ok_for(&self, symbol: &str) -> Option<bool> {
        self.projection_ok.iter().find(|(s, _)| s == symbol).map(|p| p.1)
    }

    pub fn consistency_ok_for(&self, symbol: &str) -> Option<bool> {
        self.consistency_ok.iter().find(|(s, _)| s == symbol).map(|p| p.1)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("uniqueness {}\n", ok(self.uniqueness_ok));
        for (s, b) in &self.projection_ok {
            out.push_str(&format!("projection {s} {}\n", ok(*b)));
        }
        for (s, b) in &self.consistency_ok {
            out.push_str(&format!("consistency {s} {}\n", ok(*b)));
        }
        out.push_str(&format!("surjectivity depth {} {}\n", self.sample_depth, ok(self.sampled_surjectivity_ok)));
        for c in &self.counterexamples {
            out.push_str(&format!("counterexample {}\n", serde_json::to_string(c).expect("serializable")));
        }
        out
    }
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "FAILED"
    }
}

impl AutomaticStructure {
    /// Checks uniqueness, multiplier projections and consistency exactly,
    /// and surjectivity by reducing every word up to `sample_depth`.
    pub fn validate(&self, sample_depth: usize) -> ValidationReport {
        let cap = state_cap();
        let alpha = &self.alphabet;
        let fmt = |w: &Word| alpha.format_word(w);
        let mut cx = Vec::new();

        let uniqueness_ok = match PairFsa::diagonal(&self.pairs, &self.acceptor)
            .and_then(|d| self.equality.distinguishing_pair(&d, cap))
        {
            Ok(None) => true,
            Ok(Some((a, b))) => {
                cx.push(Counterexample::Uniqueness { first: fmt(&a), second: fmt(&b) });
                false
            }
            Err(e) => {
                cx.push(Counterexample::Failure { check: "uniqueness".into(), error: e.to_string() });
                false
            }
        };

        let mut projection_ok = Vec::new();
        for x in alpha.letters() {
            let mut good = true;
            for (tape, name) in [(Tape::First, "first"), (Tape::Second, "second")] {
                let proj = self.multiplier(x).project(tape);
                match combine_capped(&proj, &self.acceptor, CombineMode::Difference, cap) {
                    Ok(d) => {
                        if let Some(w) = d.shortest_accepted() {
                            good = false;
                            cx.push(Counterexample::Projection {
                                symbol: alpha.name(x).to_string(),
                                tape: name.into(),
                                word: fmt(&w),
                            });
                        }
                    }
                    Err(e) => {
                        good = false;
                        cx.push(Counterexample::Failure { check: format!("projection {}", alpha.name(x)), error: e.to_string() });
                    }
                }
            }
            projection_ok.push((alpha.name(x).to_string(), good));
        }

        let mut consistency_ok = Vec::new();
        let diag = PairFsa::diagonal(&self.pairs, &self.acceptor);
        for x in alpha.letters() {
            let r = diag.clone().and_then(|d| {
                let c = self.multiplier(x).compose(self.multiplier(alpha.inv(x)), cap)?;
                c.distinguishing_pair(&d, cap)
            });
            let good = match r {
                Ok(None) => true,
                Ok(Some((a, b))) => {
                    cx.push(Counterexample::Consistency { symbol: alpha.name(x).to_string(), first: fmt(&a), second: fmt(&b) });
                    false
                }
                Err(e) => {
                    cx.push(Counterexample::Failure { check: format!("consistency {}", alpha.name(x)), error: e.to_string() });
                    false
                }
            };
            consistency_ok.push((alpha.name(x).to_string(), good));
        }

        let sampled_surjectivity_ok = match self.identity_word() {
            Ok(id) => self.sample_reductions(&id, sample_depth, &mut cx),
            Err(e) => {
                cx.push(Counterexample::Failure { check: "identity".into(), error: e.to_string() });
                false
            }
        };

        ValidationReport { uniqueness_ok, projection_ok, consistency_ok, sampled_surjectivity_ok, sample_depth, counterexamples: cx }
    }

    /// Depth-first over all words up to `depth`, reusing the normal form of
    /// each prefix; stops at the first failure.
    fn sample_reductions(&self, id: &Word, depth: usize, cx: &mut Vec<Counterexample>) -> bool {
        let mut stack: Vec<(Word, Word)> = vec![(Word::empty(), id.clone())];
        while let Some((w, nf)) = stack.pop() {
            if w.len() == depth {
                continue;
            }
            for x in self.alphabet.letters().collect::<Vec<Letter>>().into_iter().rev() {
                let mut v = w.clone();
                v.push(x);
                let step = self.multiplier(x).singleton_image(&nf, None);
                match step {
                    Ok(u) if self.acceptor.accepts(&u).unwrap_or(false) => stack.push((v, u)),
                    Ok(u) => {
                        cx.push(Counterexample::Reduction {
                            word: self.alphabet.format_word(&v),
                            error: format!("image {} is not a normal form", self.alphabet.format_word(&u)),
                        });
                        return false;
                    }
                    Err(e) => {
                        cx.push(Counterexample::Reduction { word: self.alphabet.format_word(&v), error: e.to_string() });
                        return false;
                    }
                }
            }
        }
        true
    }
}
