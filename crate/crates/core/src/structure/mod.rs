//! Automatic structures with uniqueness: a regular language of normal forms,
//! an equality recognizer, and one multiplier per generator letter.

use thiserror::Error;

use crate::coset::CosetError;
use crate::fsa::{combine_capped, state_cap, CombineMode, Fsa, FsaError};
use crate::group::{GeneratorAlphabet, GroupError, Letter, Word};
use crate::pair::{PairAlphabet, PairError, PairFsa, Tape};

mod fixtures;
mod text;
mod validate;

pub use fixtures::{cyclic, from_cayley, s3, shortlex_free, shortlex_free_abelian, Fixture};
pub use validate::{Counterexample, ValidationReport};

/// Words of `L` examined when looking for the representative of the identity.
pub const IDENTITY_SEARCH_LIMIT: usize = 100_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructureError {
    #[error("component alphabets do not match the generator alphabet")]
    AlphabetMismatch,
    #[error("expected {expected} multipliers, got {got}")]
    MultiplierCount { expected: usize, got: usize },
    #[error("the empty word is not a normal form; normalize the identity first")]
    IdentityNotNormalized,
    #[error("no normal form of the identity found")]
    NoIdentity,
    #[error("Cayley graph is not complete")]
    NotComplete,
    #[error("unknown fixture {0:?}")]
    UnknownFixture(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Pair(#[from] PairError),
    #[error(transparent)]
    Fsa(#[from] FsaError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Coset(#[from] CosetError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutomaticStructure {
    alphabet: GeneratorAlphabet,
    pairs: PairAlphabet,
    acceptor: Fsa,
    equality: PairFsa,
    multipliers: Vec<PairFsa>,
}

impl AutomaticStructure {
    /// `multipliers[i]` is the multiplier for letter `i`.
    pub fn new(
        alphabet: GeneratorAlphabet,
        acceptor: Fsa,
        equality: PairFsa,
        multipliers: Vec<PairFsa>,
    ) -> Result<AutomaticStructure, StructureError> {
        let pairs = PairAlphabet::new(&alphabet);
        if !acceptor.symbols().same_as(alphabet.symbols())
            || equality.alphabet() != &pairs
            || multipliers.iter().any(|m| m.alphabet() != &pairs)
        {
            return Err(StructureError::AlphabetMismatch);
        }
        if multipliers.len() != alphabet.len() {
            return Err(StructureError::MultiplierCount { expected: alphabet.len(), got: multipliers.len() });
        }
        Ok(AutomaticStructure { alphabet, pairs, acceptor, equality, multipliers })
    }

    pub fn alphabet(&self) -> &GeneratorAlphabet {
        &self.alphabet
    }

    pub fn pair_alphabet(&self) -> &PairAlphabet {
        &self.pairs
    }

    pub fn acceptor(&self) -> &Fsa {
        &self.acceptor
    }

    pub fn equality(&self) -> &PairFsa {
        &self.equality
    }

    pub fn multiplier(&self, x: Letter) -> &PairFsa {
        &self.multipliers[x.index()]
    }

    pub fn multipliers(&self) -> &[PairFsa] {
        &self.multipliers
    }

    pub fn identity_is_empty_word(&self) -> bool {
        self.acceptor.accepts(&Word::empty()).unwrap_or(false)
    }

    /// Normal form of `nf · v`, applying one multiplier per letter.
    pub fn multiply(&self, nf: &Word, v: &Word) -> Result<Word, StructureError> {
        self.alphabet.check(v)?;
        let mut cur = nf.clone();
        for &x in v.letters() {
            cur = self.multipliers[x.index()].singleton_image(&cur, None)?;
        }
        Ok(cur)
    }

    /// The normal form of `v`.
    pub fn reduce(&self, v: &Word) -> Result<Word, StructureError> {
        if !self.identity_is_empty_word() {
            return Err(StructureError::IdentityNotNormalized);
        }
        self.multiply(&Word::empty(), v)
    }

    pub fn word_problem(&self, v: &Word) -> Result<bool, StructureError> {
        Ok(self.reduce(v)?.is_empty())
    }

    /// The word of `L` representing the identity.  When the empty word is
    /// not in `L`, the ShortLex-first `w ∈ L` with `w·w = w` is returned:
    /// an idempotent group element is the identity.
    pub fn identity_word(&self) -> Result<Word, StructureError> {
        if self.identity_is_empty_word() {
            return Ok(Word::empty());
        }
        let bound = self.acceptor.num_states() + self.equality.num_states() + 8;
        for w in self.acceptor.accepted_words(bound, IDENTITY_SEARCH_LIMIT) {
            if let Ok(sq) = self.multiply(&w, &w) {
                if sq == w {
                    return Ok(w);
                }
            }
        }
        Err(StructureError::NoIdentity)
    }

    /// `M_v`, the composite of the letter multipliers along `v`; the
    /// diagonal of `L` for the empty word.
    pub fn multiplier_for_word(&self, v: &Word) -> Result<PairFsa, StructureError> {
        self.alphabet.check(v)?;
        let cap = state_cap();
        let Some((&first, rest)) = v.letters().split_first() else {
            return Ok(PairFsa::diagonal(&self.pairs, &self.acceptor)?.minimized(cap)?);
        };
        let mut m = self.multipliers[first.index()].minimized(cap)?;
        for &x in rest {
            m = m.compose(&self.multipliers[x.index()], cap)?;
        }
        Ok(m)
    }

    /// Replaces the representative `w*` of the identity by the empty word.
    /// Each relation is split into four blocks according to whether each
    /// coordinate equals `w*`, and the blocks are reassembled with `w*`
    /// replaced by `ε`.
    pub fn normalize_identity(&self) -> Result<AutomaticStructure, StructureError> {
        let star = self.identity_word()?;
        if star.is_empty() {
            return Ok(self.clone());
        }
        let cap = state_cap();
        let syms = self.alphabet.symbols().clone();
        let only_star = Fsa::from_words(syms.clone(), [&star]);
        let others = combine_capped(&self.acceptor, &only_star, CombineMode::Difference, cap)?.minimize_capped(cap)?;
        let with_empty = Fsa::from_words(syms, [&Word::empty()]);
        let acceptor = combine_capped(&others, &with_empty, CombineMode::Union, cap)?.minimize_capped(cap)?.trim();

        let transport = |r: &PairFsa| -> Result<PairFsa, StructureError> {
            let mut out = r.restrict_capped(Tape::First, &others, cap)?.restrict_capped(Tape::Second, &others, cap)?;
            let from_star = r.restrict_capped(Tape::First, &only_star, cap)?;
            let to_star = r.restrict_capped(Tape::Second, &only_star, cap)?;
            let star_to_others = combine_capped(&from_star.project(Tape::Second), &only_star, CombineMode::Difference, cap)?;
            let others_to_star = combine_capped(&to_star.project(Tape::First), &only_star, CombineMode::Difference, cap)?;
            out = out.union(&PairFsa::against_empty(&self.pairs, &star_to_others, Tape::Second)?, cap)?;
            out = out.union(&PairFsa::against_empty(&self.pairs, &others_to_star, Tape::First)?, cap)?;
            if r.accepts_pair(&star, &star) {
                let e = Word::empty();
                out = out.union(&PairFsa::from_pairs(&self.pairs, [(&e, &e)]), cap)?;
            }
            Ok(out.minimized(cap)?)
        };
        let equality = transport(&self.equality)?;
        let multipliers = self.multipliers.iter().map(transport).collect::<Result<_, _>>()?;
        AutomaticStructure::new(self.alphabet.clone(), acceptor, equality, multipliers)
    }
}
