//! Alphabets with formal inversion, words, free reduction and finite
//! presentations.
//!
//! Every symbol of a [`GeneratorAlphabet`] is a distinct letter; the inverse
//! of `x` is another letter (conventionally named `x^`) except for generators
//! declared self-inverse, where `inv(x) = x`.  Words are plain letter
//! sequences and are never reduced implicitly.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Reserved padding token of the pair alphabet.
pub const PAD_NAME: &str = "_";

/// Index of a symbol inside an alphabet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(pub u32);

impl Letter {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn from_index(i: usize) -> Letter {
        Letter(i as u32)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("invalid symbol name {0:?}")]
    InvalidSymbol(String),
    #[error("duplicate symbol {0:?}")]
    DuplicateSymbol(String),
    #[error("inverse map is not an involution at symbol {0:?}")]
    NotInvolution(String),
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("letter {0} outside the alphabet")]
    LetterOutOfRange(u32),
    #[error("no image for letter {0:?}")]
    MissingImage(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PresentationError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown generator {name:?}")]
    UnknownGenerator { line: usize, name: String },
    #[error("line {line}: relator is empty after free reduction")]
    EmptyRelator { line: usize },
}

/// An ordered list of distinct printable symbol names.
///
/// Cloning is cheap; automata built over the same alphabet share one list.
#[derive(Clone, Debug)]
pub struct Symbols(Arc<[String]>);

impl Symbols {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Symbols, GroupError> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() || n.chars().any(char::is_whitespace) || n.starts_with('#') {
                return Err(GroupError::InvalidSymbol(n.clone()));
            }
            if names[..i].contains(n) {
                return Err(GroupError::DuplicateSymbol(n.clone()));
            }
        }
        Ok(Symbols(names.into()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn name(&self, l: Letter) -> &str {
        &self.0[l.index()]
    }

    pub fn lookup(&self, name: &str) -> Option<Letter> {
        self.0.iter().position(|n| n == name).map(Letter::from_index)
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + Clone {
        (0..self.0.len()).map(Letter::from_index)
    }

    /// True when both lists hold the same names in the same order.
    pub fn same_as(&self, other: &Symbols) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl PartialEq for Symbols {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

impl Eq for Symbols {}

/// A word: a finite letter sequence. The empty word is ε.
///
/// Words order by ShortLex: shorter first, then lexicographically by letter
/// index.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn push(&mut self, l: Letter) {
        self.0.push(l);
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word(v)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A finite generating set closed under inversion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorAlphabet {
    symbols: Symbols,
    inv: Arc<[Letter]>,
}

impl GeneratorAlphabet {
    pub fn new(symbols: Symbols, inv: Vec<Letter>) -> Result<GeneratorAlphabet, GroupError> {
        if inv.len() != symbols.len() {
            return Err(GroupError::NotInvolution(String::from("<length mismatch>")));
        }
        for (i, &j) in inv.iter().enumerate() {
            if j.index() >= inv.len() || inv[j.index()].index() != i {
                return Err(GroupError::NotInvolution(symbols.names()[i].clone()));
            }
        }
        for n in symbols.names() {
            if n == PAD_NAME || n.contains(':') || n == "ε" {
                return Err(GroupError::InvalidSymbol(n.clone()));
            }
        }
        Ok(GeneratorAlphabet { symbols, inv: inv.into() })
    }

    /// Builds the alphabet `x, x^` for each generator, or just `x` when the
    /// generator is self-inverse.  The symbol order follows `gens`.
    pub fn from_generators(gens: &[(&str, bool)]) -> Result<GeneratorAlphabet, GroupError> {
        let mut names = Vec::new();
        let mut inv = Vec::new();
        for &(g, selfinv) in gens {
            if g.ends_with('^') {
                return Err(GroupError::InvalidSymbol(g.to_string()));
            }
            let at = names.len();
            names.push(g.to_string());
            if selfinv {
                inv.push(Letter::from_index(at));
            } else {
                names.push(format!("{g}^"));
                inv.push(Letter::from_index(at + 1));
                inv.push(Letter::from_index(at));
            }
        }
        GeneratorAlphabet::new(Symbols::new(names)?, inv)
    }

    /// Free-group alphabet on the given generator names, none self-inverse.
    pub fn free(gens: &[&str]) -> GeneratorAlphabet {
        let g: Vec<(&str, bool)> = gens.iter().map(|&n| (n, false)).collect();
        GeneratorAlphabet::from_generators(&g).expect("valid generator names")
    }

    /// Recovers the inverse pairing from names alone: `x^` is the inverse of
    /// `x`, and a name without a `^` partner is self-inverse.
    pub fn from_symbol_names(names: &[String]) -> Result<GeneratorAlphabet, GroupError> {
        let symbols = Symbols::new(names.iter().cloned())?;
        let mut inv = Vec::with_capacity(names.len());
        for (i, n) in names.iter().enumerate() {
            let partner = match n.strip_suffix('^') {
                Some(stem) => symbols
                    .lookup(stem)
                    .ok_or_else(|| GroupError::NotInvolution(n.clone()))?,
                None => symbols.lookup(&format!("{n}^")).unwrap_or(Letter::from_index(i)),
            };
            inv.push(partner);
        }
        GeneratorAlphabet::new(symbols, inv)
    }

    pub fn symbols(&self) -> &Symbols {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + Clone {
        self.symbols.letters()
    }

    pub fn name(&self, l: Letter) -> &str {
        self.symbols.name(l)
    }

    #[inline]
    pub fn inv(&self, l: Letter) -> Letter {
        self.inv[l.index()]
    }

    pub fn is_self_inverse(&self, l: Letter) -> bool {
        self.inv(l) == l
    }

    pub fn contains(&self, w: &Word) -> bool {
        w.0.iter().all(|l| l.index() < self.len())
    }

    pub fn check(&self, w: &Word) -> Result<(), GroupError> {
        match w.0.iter().find(|l| l.index() >= self.len()) {
            Some(l) => Err(GroupError::LetterOutOfRange(l.0)),
            None => Ok(()),
        }
    }

    /// Resolves one token: a symbol name, or `x^` for the inverse of `x`.
    pub fn parse_letter(&self, token: &str) -> Result<Letter, GroupError> {
        if let Some(l) = self.symbols.lookup(token) {
            return Ok(l);
        }
        if let Some(stem) = token.strip_suffix('^') {
            if let Some(l) = self.symbols.lookup(stem) {
                return Ok(self.inv(l));
            }
        }
        Err(GroupError::UnknownGenerator(token.to_string()))
    }

    /// Parses whitespace-separated letters. An empty string, or the lone
    /// token `ε`, is the empty word.
    pub fn parse_word(&self, text: &str) -> Result<Word, GroupError> {
        let text = text.trim();
        if text == "ε" {
            return Ok(Word::empty());
        }
        text.split_whitespace()
            .map(|t| self.parse_letter(t))
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }

    pub fn format_word(&self, w: &Word) -> String {
        if w.is_empty() {
            return "ε".to_string();
        }
        let names: Vec<&str> = w.0.iter().map(|&l| self.name(l)).collect();
        names.join(" ")
    }

    /// The formal inverse: reversed word with every letter inverted.
    pub fn inverse(&self, w: &Word) -> Word {
        Word(w.0.iter().rev().map(|&l| self.inv(l)).collect())
    }

    /// Cancels adjacent `x inv(x)` pairs until none remain.
    pub fn free_reduce(&self, w: &Word) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(w.len());
        for &l in &w.0 {
            match out.last() {
                Some(&top) if top == self.inv(l) => {
                    out.pop();
                }
                _ => out.push(l),
            }
        }
        Word(out)
    }

    pub fn is_freely_reduced(&self, w: &Word) -> bool {
        w.0.windows(2).all(|p| p[1] != self.inv(p[0]))
    }

    /// Free reduction followed by removal of cancelling first/last letters.
    pub fn cyclically_reduce(&self, w: &Word) -> Word {
        let r = self.free_reduce(w);
        let mut lo = 0;
        let mut hi = r.len();
        while hi >= lo + 2 && r.0[hi - 1] == self.inv(r.0[lo]) {
            lo += 1;
            hi -= 1;
        }
        Word(r.0[lo..hi].to_vec())
    }
}

/// Replaces each letter of `w` by its image, without any reduction.
///
/// `images[i]` is the image of letter `i` of the auxiliary alphabet.
pub fn substitute(w: &Word, images: &[Word], aux: &GeneratorAlphabet) -> Result<Word, GroupError> {
    let mut out = Vec::new();
    for &l in &w.0 {
        let img = images
            .get(l.index())
            .ok_or_else(|| GroupError::MissingImage(aux.symbols().names().get(l.index()).cloned().unwrap_or_else(|| l.0.to_string())))?;
        out.extend_from_slice(&img.0);
    }
    Ok(Word(out))
}

/// A finite presentation `<A | R>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    alphabet: GeneratorAlphabet,
    relators: Vec<Word>,
}

impl Presentation {
    /// Relators are freely and cyclically reduced; empty results are dropped.
    pub fn new(alphabet: GeneratorAlphabet, relators: Vec<Word>) -> Result<Presentation, GroupError> {
        let mut rels = Vec::new();
        for r in relators {
            alphabet.check(&r)?;
            let r = alphabet.cyclically_reduce(&r);
            if !r.is_empty() {
                rels.push(r);
            }
        }
        Ok(Presentation { alphabet, relators: rels })
    }

    pub fn alphabet(&self) -> &GeneratorAlphabet {
        &self.alphabet
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    /// Parses the line-oriented presentation format.  `;` also ends a line.
    pub fn parse(text: &str) -> Result<Presentation, PresentationError> {
        let mut gens: Vec<(String, usize)> = Vec::new();
        let mut selfinv: Vec<(String, usize)> = Vec::new();
        let mut rels: Vec<(Vec<String>, usize)> = Vec::new();

        for (lineno, raw) in text.lines().enumerate() {
            let line = lineno + 1;
            let content = raw.split('#').next().unwrap_or("");
            for stmt in content.split(';') {
                let mut toks = stmt.split_whitespace();
                let Some(head) = toks.next() else { continue };
                let rest: Vec<String> = toks.map(str::to_string).collect();
                match head {
                    "gens" => {
                        if rest.is_empty() {
                            return Err(PresentationError::Syntax { line, message: "gens needs at least one name".into() });
                        }
                        for g in rest {
                            if g.ends_with('^') || g == PAD_NAME || g.contains(':') {
                                return Err(PresentationError::Syntax { line, message: format!("invalid generator name {g:?}") });
                            }
                            if gens.iter().any(|(n, _)| *n == g) {
                                return Err(PresentationError::Syntax { line, message: format!("generator {g:?} declared twice") });
                            }
                            gens.push((g, line));
                        }
                    }
                    "selfinv" => selfinv.extend(rest.into_iter().map(|g| (g, line))),
                    "rel" => rels.push((rest, line)),
                    other => {
                        return Err(PresentationError::Syntax { line, message: format!("unknown directive {other:?}") });
                    }
                }
            }
        }
        if gens.is_empty() {
            return Err(PresentationError::Syntax { line: 1, message: "missing gens line".into() });
        }
        for (g, line) in &selfinv {
            if !gens.iter().any(|(n, _)| n == g) {
                return Err(PresentationError::UnknownGenerator { line: *line, name: g.clone() });
            }
        }
        let spec: Vec<(&str, bool)> = gens
            .iter()
            .map(|(n, _)| (n.as_str(), selfinv.iter().any(|(s, _)| s == n)))
            .collect();
        let alphabet = GeneratorAlphabet::from_generators(&spec)
            .map_err(|e| PresentationError::Syntax { line: gens[0].1, message: e.to_string() })?;

        let mut relators = Vec::new();
        for (toks, line) in rels {
            let mut w = Vec::with_capacity(toks.len());
            for t in &toks {
                let l = alphabet
                    .parse_letter(t)
                    .map_err(|_| PresentationError::UnknownGenerator { line, name: t.clone() })?;
                w.push(l);
            }
            let r = alphabet.cyclically_reduce(&Word(w));
            if r.is_empty() {
                return Err(PresentationError::EmptyRelator { line });
            }
            relators.push(r);
        }
        Ok(Presentation { alphabet, relators })
    }

    /// Writes the presentation back in the text format.
    pub fn to_text(&self) -> String {
        let mut gens = Vec::new();
        let mut selfinv = Vec::new();
        for l in self.alphabet.letters() {
            let name = self.alphabet.name(l);
            if self.alphabet.is_self_inverse(l) {
                gens.push(name);
                selfinv.push(name);
            } else if !name.ends_with('^') {
                gens.push(name);
            }
        }
        let mut out = format!("gens {}\n", gens.join(" "));
        if !selfinv.is_empty() {
            out.push_str(&format!("selfinv {}\n", selfinv.join(" ")));
        }
        for r in &self.relators {
            out.push_str(&format!("rel {}\n", self.alphabet.format_word(r)));
        }
        out
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> GeneratorAlphabet {
        GeneratorAlphabet::free(&["a", "b"])
    }

    // Repeatedly deletes the first cancelling pair; independent of the stack
    // reduction in free_reduce.
    fn naive_reduce(alpha: &GeneratorAlphabet, w: &Word) -> Word {
        let mut v = w.0.clone();
        loop {
            let hit = v.windows(2).position(|p| p[1] == alpha.inv(p[0]));
            match hit {
                Some(i) => {
                    v.drain(i..i + 2);
                }
                None => return Word(v),
            }
        }
    }

    #[test]
    fn free_reduce_examples() {
        let a = ab();
        let w = |s: &str| a.parse_word(s).unwrap();
        assert_eq!(a.free_reduce(&w("a a^")), Word::empty());
        assert_eq!(a.free_reduce(&w("a b b^ a")), w("a a"));
        let tricky = w("a b a^ a b^ a^");
        assert_eq!(naive_reduce(&a, &tricky), Word::empty());
        assert_eq!(a.free_reduce(&tricky), Word::empty());
    }

    #[test]
    fn alphabet_order_and_inverses() {
        let a = ab();
        assert_eq!(a.symbols().names(), &["a", "a^", "b", "b^"]);
        assert_eq!(a.inv(Letter(0)), Letter(1));
        assert_eq!(a.inv(Letter(3)), Letter(2));
        let s = GeneratorAlphabet::from_generators(&[("s", true), ("t", false)]).unwrap();
        assert_eq!(s.symbols().names(), &["s", "t", "t^"]);
        assert!(s.is_self_inverse(Letter(0)));
        // `s^` names the self-inverse letter itself
        assert_eq!(s.parse_word("s^ s").unwrap(), Word(vec![Letter(0), Letter(0)]));
        assert_eq!(s.free_reduce(&s.parse_word("s s t").unwrap()), s.parse_word("t").unwrap());
        let back = GeneratorAlphabet::from_symbol_names(s.symbols().names()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn rejects_bad_names() {
        assert!(Symbols::new(["a", "a"]).is_err());
        assert!(GeneratorAlphabet::from_generators(&[("_", false)]).is_err());
        assert!(GeneratorAlphabet::from_generators(&[("a:b", false)]).is_err());
        let a = ab();
        assert_eq!(a.parse_word("a c"), Err(GroupError::UnknownGenerator("c".into())));
    }

    #[test]
    fn shortlex_order() {
        let a = ab();
        let w = |s: &str| a.parse_word(s).unwrap();
        assert!(w("") < w("a"));
        assert!(w("b") < w("a a"));
        assert!(w("a b") < w("a^ a^"));
    }

    #[test]
    fn parse_presentations() {
        let p = Presentation::parse("gens a b; rel a b a^ b^").unwrap();
        assert_eq!(p.alphabet().len(), 4);
        assert_eq!(p.relators().len(), 1);
        assert_eq!(p.alphabet().format_word(&p.relators()[0]), "a b a^ b^");

        let err = Presentation::parse("gens a b; rel ").unwrap_err();
        assert_eq!(err, PresentationError::EmptyRelator { line: 1 });

        let z3 = Presentation::parse("gens a; rel a a a").unwrap();
        assert_eq!(z3.relators()[0].len(), 3);

        let err = Presentation::parse("gens a\nrel a c\n").unwrap_err();
        assert_eq!(err, PresentationError::UnknownGenerator { line: 2, name: "c".into() });

        let err = Presentation::parse("gens a\nfoo\n").unwrap_err();
        assert!(matches!(err, PresentationError::Syntax { line: 2, .. }));

        // relators are stored cyclically reduced
        let p = Presentation::parse("gens a b\nrel b a a a b^   # comment\n").unwrap();
        assert_eq!(p.alphabet().format_word(&p.relators()[0]), "a a a");
        assert!(matches!(Presentation::parse("gens a\nrel a a^\n"), Err(PresentationError::EmptyRelator { line: 2 })));
    }

    #[test]
    fn presentation_text_round_trip() {
        let p = Presentation::parse("gens a b\nselfinv a\nrel a b a b a b\n").unwrap();
        let q = Presentation::parse(&p.to_text()).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn substitute_examples() {
        let aux = GeneratorAlphabet::from_symbol_names(&["v1".into(), "v1^".into(), "v2".into(), "v2^".into()]).unwrap();
        let a = ab();
        let w = |s: &str| a.parse_word(s).unwrap();
        let images = vec![w("a b"), w("b^ a^"), w("b b"), w("b^ b^")];
        let one = aux.parse_word("v1").unwrap();
        assert_eq!(substitute(&one, &images, &aux).unwrap(), w("a b"));
        let back = aux.parse_word("v1 v1^").unwrap();
        let path = substitute(&back, &images, &aux).unwrap();
        assert_eq!(path, w("a b b^ a^"));
        assert_eq!(path.len(), 4);
        let images2 = vec![w("a a"), w("a^ a^"), w("b b"), w("b^ b^")];
        assert_eq!(substitute(&aux.parse_word("v1 v2").unwrap(), &images2, &aux).unwrap(), w("a a b b"));
        assert!(matches!(substitute(&aux.parse_word("v2").unwrap(), &images[..1], &aux), Err(GroupError::MissingImage(_))));
    }
}
