//! Line-oriented automaton format:
//!
//! ```text
//! fsa <nstates> <alphabet-size>
//! alphabet <sym> ...
//! initial <id> ...
//! accepting <id> ...
//! det
//! trans <from> <sym> <to>
//! ```
//!
//! The `det` line is optional.  Blank lines and `#` comments are ignored.

use std::fmt::Write as _;

use super::{Fsa, FsaError, StateId};
use crate::group::{Letter, Symbols};

fn perr(line: usize, message: impl Into<String>) -> FsaError {
    FsaError::Parse { line, message: message.into() }
}

fn parse_ids(line: usize, toks: &[&str]) -> Result<Vec<StateId>, FsaError> {
    toks.iter()
        .map(|t| t.parse::<StateId>().map_err(|_| perr(line, format!("bad state id {t:?}"))))
        .collect()
}

impl Fsa {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "fsa {} {}", self.num_states(), self.symbols().len());
        out.push_str("alphabet");
        for n in self.symbols().names() {
            out.push(' ');
            out.push_str(n);
        }
        out.push('\n');
        out.push_str("initial");
        for s in self.initial() {
            let _ = write!(out, " {s}");
        }
        out.push('\n');
        out.push_str("accepting");
        for s in self.accepting_states() {
            let _ = write!(out, " {s}");
        }
        out.push('\n');
        if self.is_deterministic() {
            out.push_str("det\n");
        }
        for s in 0..self.num_states() as StateId {
            for &(l, t) in self.transitions(s) {
                let _ = writeln!(out, "trans {s} {} {t}", self.symbols().name(l));
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Fsa, FsaError> {
        Self::from_lines(text.lines().enumerate().map(|(i, l)| (i + 1, l)))
    }

    /// Parses from pre-numbered lines; used when an automaton is embedded in
    /// a larger file.
    pub(crate) fn from_lines<'a>(lines: impl IntoIterator<Item = (usize, &'a str)>) -> Result<Fsa, FsaError> {
        let mut header: Option<(usize, usize)> = None;
        let mut symbols: Option<Symbols> = None;
        let mut initial = Vec::new();
        let mut accepting = Vec::new();
        let mut det = false;
        let mut trans = Vec::new();
        let mut last_line = 0;

        for (line, raw) in lines {
            last_line = line;
            let content = raw.split('#').next().unwrap_or("");
            let toks: Vec<&str> = content.split_whitespace().collect();
            let Some(&head) = toks.first() else { continue };
            if header.is_none() && head != "fsa" {
                return Err(perr(line, "expected `fsa <nstates> <alphabet-size>` header"));
            }
            match head {
                "fsa" => {
                    if header.is_some() {
                        return Err(perr(line, "duplicate fsa header"));
                    }
                    if toks.len() != 3 {
                        return Err(perr(line, "header takes two numbers"));
                    }
                    let n = toks[1].parse().map_err(|_| perr(line, "bad state count"))?;
                    let k = toks[2].parse().map_err(|_| perr(line, "bad alphabet size"))?;
                    header = Some((n, k));
                }
                "alphabet" => {
                    let s = Symbols::new(toks[1..].iter().copied()).map_err(|e| perr(line, e.to_string()))?;
                    symbols = Some(s);
                }
                "initial" => initial.extend(parse_ids(line, &toks[1..])?),
                "accepting" => accepting.extend(parse_ids(line, &toks[1..])?),
                "det" => det = true,
                "trans" => {
                    if toks.len() != 4 {
                        return Err(perr(line, "trans takes <from> <sym> <to>"));
                    }
                    let syms = symbols.as_ref().ok_or_else(|| perr(line, "trans before alphabet"))?;
                    let from = parse_ids(line, &toks[1..2])?[0];
                    let l: Letter = syms.lookup(toks[2]).ok_or_else(|| perr(line, format!("unknown symbol {:?}", toks[2])))?;
                    let to = parse_ids(line, &toks[3..4])?[0];
                    trans.push((from, l, to));
                }
                other => return Err(perr(line, format!("unknown directive {other:?}"))),
            }
        }
        let (n, k) = header.ok_or_else(|| perr(last_line.max(1), "missing fsa header"))?;
        let symbols = symbols.ok_or_else(|| perr(last_line.max(1), "missing alphabet line"))?;
        if symbols.len() != k {
            return Err(perr(last_line.max(1), format!("alphabet has {} symbols, header says {k}", symbols.len())));
        }
        Fsa::new(symbols, n, initial, accepting, trans, det)
    }
}
