//! Structure files:
//!
//! ```text
//! alphabet a a^ b b^
//! acceptor
//! <automaton>
//! equality
//! <pair automaton>
//! mult a
//! <pair automaton>
//! ...
//! ```
//!
//! Automata use the line format of [`crate::fsa`]; pair automata name their
//! labels `x:y` with `_` for padding.  Inverse pairs in the alphabet line are
//! inferred from the `^` suffix.

use super::{AutomaticStructure, StructureError};
use crate::fsa::Fsa;
use crate::group::GeneratorAlphabet;
use crate::pair::{PairAlphabet, PairFsa};

fn perr(line: usize, message: impl Into<String>) -> StructureError {
    StructureError::Parse { line, message: message.into() }
}

impl AutomaticStructure {
    pub fn to_text(&self) -> String {
        let mut out = String::from("alphabet");
        for n in self.alphabet.symbols().names() {
            out.push(' ');
            out.push_str(n);
        }
        out.push_str("\nacceptor\n");
        out.push_str(&self.acceptor.to_text());
        out.push_str("equality\n");
        out.push_str(&self.equality.to_text());
        for x in self.alphabet.letters() {
            out.push_str(&format!("mult {}\n", self.alphabet.name(x)));
            out.push_str(&self.multiplier(x).to_text());
        }
        out
    }

    pub fn from_text(text: &str) -> Result<AutomaticStructure, StructureError> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l)).peekable();
        let content = |l: &str| l.split('#').next().unwrap_or("").trim().to_string();

        let alphabet = loop {
            let Some((n, l)) = lines.next() else {
                return Err(perr(1, "missing alphabet line"));
            };
            let c = content(l);
            if c.is_empty() {
                continue;
            }
            let toks: Vec<String> = c.split_whitespace().map(String::from).collect();
            if toks[0] != "alphabet" {
                return Err(perr(n, "structure file must start with an alphabet line"));
            }
            break GeneratorAlphabet::from_symbol_names(&toks[1..]).map_err(|e| perr(n, e.to_string()))?;
        };
        let pairs = PairAlphabet::new(&alphabet);

        // split into sections headed by acceptor / equality / mult lines
        let mut sections: Vec<(usize, Vec<String>, Vec<(usize, &str)>)> = Vec::new();
        for (n, l) in lines {
            let c = content(l);
            let toks: Vec<String> = c.split_whitespace().map(String::from).collect();
            match toks.first().map(String::as_str) {
                Some("acceptor" | "equality" | "mult") => sections.push((n, toks, Vec::new())),
                None => {}
                Some(_) => match sections.last_mut() {
                    Some(s) => s.2.push((n, l)),
                    None => return Err(perr(n, "expected a section header")),
                },
            }
        }

        let mut acceptor = None;
        let mut equality = None;
        let mut mults: Vec<Option<PairFsa>> = vec![None; alphabet.len()];
        let wrap = |line: usize| move |e: crate::pair::PairError| perr(line, format!("{e}"));
        for (n, head, body) in sections {
            match (head[0].as_str(), head.len()) {
                ("acceptor", 1) if acceptor.is_none() => {
                    let m = Fsa::from_lines(body).map_err(|e| perr(n, e.to_string()))?;
                    if !m.symbols().same_as(alphabet.symbols()) {
                        return Err(perr(n, "acceptor alphabet differs from the structure alphabet"));
                    }
                    acceptor = Some(m);
                }
                ("equality", 1) if equality.is_none() => {
                    equality = Some(PairFsa::from_lines(&pairs, body).map_err(wrap(n))?);
                }
                ("mult", 2) => {
                    let x = alphabet.parse_letter(&head[1]).map_err(|e| perr(n, e.to_string()))?;
                    if alphabet.name(x) != head[1] {
                        return Err(perr(n, format!("unknown symbol {:?}", head[1])));
                    }
                    if mults[x.index()].is_some() {
                        return Err(perr(n, format!("duplicate multiplier for {}", head[1])));
                    }
                    mults[x.index()] = Some(PairFsa::from_lines(&pairs, body).map_err(wrap(n))?);
                }
                _ => return Err(perr(n, format!("unexpected section {:?}", head.join(" ")))),
            }
        }
        let last = text.lines().count().max(1);
        let acceptor = acceptor.ok_or_else(|| perr(last, "missing acceptor section"))?;
        let equality = equality.ok_or_else(|| perr(last, "missing equality section"))?;
        let multipliers = mults
            .into_iter()
            .enumerate()
            .map(|(i, m)| m.ok_or_else(|| perr(last, format!("missing multiplier for {}", alphabet.symbols().names()[i]))))
            .collect::<Result<_, _>>()?;
        AutomaticStructure::new(alphabet, acceptor, equality, multipliers)
    }
}
