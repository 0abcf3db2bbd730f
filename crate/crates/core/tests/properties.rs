mod support;

use proptest::prelude::*;
use qcdetect::coset::{self, SnapshotPolicy, SubgroupSpec};
use qcdetect::fsa::Fsa;
use qcdetect::group::{substitute, GeneratorAlphabet, Letter, Word};
use qcdetect::hyperbolic::{h_ball, min_lambda, parse_rational, v_geodesic_words, HyperbolicContext};
use qcdetect::pair::{PairAlphabet, PairFsa, Tape};
use qcdetect::structure::{shortlex_free, Fixture};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use support::*;

const CAP: usize = 1_000_000;

fn word(k: usize, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0..k as u32, 0..=max_len).prop_map(|v| Word(v.into_iter().map(Letter).collect()))
}

fn fsa(seed: u64) -> Fsa {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = 1 + (seed % 3) as usize;
    random_fsa(&mut rng, &symbols(k), 6)
}

/// A relation over one generator: a finite set of pairs together with the
/// diagonal of a random language.
fn relation(pa: &PairAlphabet, seed: u64, pairs: &[(Word, Word)]) -> PairFsa {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = pa.base();
    let l = random_fsa(&mut rng, base.symbols(), 3);
    let finite = PairFsa::from_pairs(pa, pairs.iter().map(|(a, b)| (a, b)));
    finite.union(&PairFsa::diagonal(pa, &l).unwrap(), CAP).unwrap()
}

fn pairs(k: usize) -> impl Strategy<Value = Vec<(Word, Word)>> {
    prop::collection::vec((word(k, 3), word(k, 3)), 0..4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn free_reduction_is_idempotent_and_cancels_inverses(w in word(4, 12)) {
        let alpha = GeneratorAlphabet::free(&["a", "b"]);
        let r = alpha.free_reduce(&w);
        prop_assert_eq!(alpha.free_reduce(&r), r.clone());
        prop_assert!(alpha.free_reduce(&w.concat(&alpha.inverse(&w))).is_empty());
        prop_assert_eq!(signed(&alpha, &r), reduce_signed(&signed(&alpha, &w)));
    }

    #[test]
    fn substitution_preserves_letter_count(w in word(4, 8), i1 in word(4, 4), i2 in word(4, 4)) {
        let alpha = GeneratorAlphabet::free(&["a", "b"]);
        let aux = GeneratorAlphabet::free(&["u", "v"]);
        let images = vec![i1.clone(), alpha.inverse(&i1), i2.clone(), alpha.inverse(&i2)];
        let out = substitute(&w, &images, &aux).unwrap();
        let expected: usize = w.letters().iter().map(|l| images[l.index()].len()).sum();
        prop_assert_eq!(out.len(), expected);
    }

    #[test]
    fn determinize_and_minimize_preserve_language(seed in any::<u64>()) {
        let m = fsa(seed);
        let l = language(&m, 7);
        let d = m.determinize().unwrap();
        let min = m.minimize().unwrap();
        prop_assert_eq!(language(&d, 7), l.clone());
        prop_assert_eq!(language(&min, 7), l);
        prop_assert!(m.equivalent(&d).unwrap() && m.equivalent(&min).unwrap());
        prop_assert!(min.num_states() <= d.num_states().max(1));
    }

    #[test]
    fn minimization_is_canonical(seed in any::<u64>()) {
        let m = fsa(seed);
        let twin = m.union_nfa(&m).unwrap();
        prop_assert_eq!(twin.minimize().unwrap(), m.minimize().unwrap());
        prop_assert_eq!(m.determinize().unwrap().minimize().unwrap(), m.minimize().unwrap());
    }

    #[test]
    fn enumeration_is_shortlex_and_complete(seed in any::<u64>()) {
        let m = fsa(seed);
        let listed = m.enumerate_upto(6);
        prop_assert!(listed.windows(2).all(|p| p[0] < p[1]));
        let brute: Vec<Word> = {
            let mut v: Vec<Word> = language(&m, 6).iter().map(|w| to_word(w)).collect();
            v.sort();
            v
        };
        prop_assert_eq!(listed, brute);
    }

    #[test]
    fn shortest_accepted_is_the_least_word(seed in any::<u64>()) {
        let m = fsa(seed);
        prop_assert_eq!(m.shortest_accepted(), m.enumerate_upto(12).into_iter().next());
    }

    #[test]
    fn accepts_pair_agrees_with_padded_membership(seed in any::<u64>(), ps in pairs(2), probes in prop::collection::vec((word(2, 5), word(2, 5)), 1..8)) {
        let pa = PairAlphabet::new(&GeneratorAlphabet::free(&["a"]));
        let r = relation(&pa, seed, &ps);
        for (w, u) in probes {
            let padded = pa.pad(&w, &u);
            prop_assert_eq!(r.accepts_pair(&w, &u), r.fsa().accepts(&padded).unwrap());
            prop_assert_eq!(pa.unpad(&padded).unwrap(), (w, u));
        }
    }

    #[test]
    fn restriction_is_composition_with_a_diagonal(seed in any::<u64>(), ps in pairs(2), lseed in any::<u64>()) {
        let pa = PairAlphabet::new(&GeneratorAlphabet::free(&["a"]));
        let r = relation(&pa, seed, &ps);
        let mut rng = ChaCha8Rng::seed_from_u64(lseed);
        let l = random_fsa(&mut rng, pa.base().symbols(), 4);
        let diag = PairFsa::diagonal(&pa, &l).unwrap();
        let first = r.restrict(Tape::First, &l).unwrap();
        let second = r.restrict(Tape::Second, &l).unwrap();
        prop_assert!(first.is_well_padded() && second.is_well_padded());
        prop_assert!(first.equivalent(&diag.compose(&r, CAP).unwrap(), CAP).unwrap());
        prop_assert!(second.equivalent(&r.compose(&diag, CAP).unwrap(), CAP).unwrap());
    }

    #[test]
    fn composition_is_associative_and_well_padded(s1 in any::<u64>(), s2 in any::<u64>(), s3 in any::<u64>(), p1 in pairs(2), p2 in pairs(2), p3 in pairs(2)) {
        let pa = PairAlphabet::new(&GeneratorAlphabet::free(&["a"]));
        let (r, s, t) = (relation(&pa, s1, &p1), relation(&pa, s2, &p2), relation(&pa, s3, &p3));
        let rs = r.compose(&s, CAP).unwrap();
        let left = rs.compose(&t, CAP).unwrap();
        let right = r.compose(&s.compose(&t, CAP).unwrap(), CAP).unwrap();
        prop_assert!(rs.is_well_padded() && left.is_well_padded() && right.is_well_padded());
        prop_assert!(left.equivalent(&right, CAP).unwrap());
    }

    #[test]
    fn reduction_is_associative_on_fixtures(fixture in 0..4usize, v in word(4, 4), u in word(4, 4)) {
        let name = ["free:2", "zz", "s3", "cyclic:4"][fixture];
        let s = Fixture::load(name).unwrap().structure;
        let k = s.alphabet().len() as u32;
        let clip = |w: &Word| Word(w.letters().iter().map(|l| Letter(l.0 % k)).collect());
        let (v, u) = (clip(&v), clip(&u));
        let direct = s.reduce(&v.concat(&u)).unwrap();
        let staged = s.reduce(&s.reduce(&v).unwrap().concat(&u)).unwrap();
        prop_assert_eq!(&direct, &staged);
        prop_assert_eq!(s.reduce(&direct).unwrap(), direct);
    }

    #[test]
    fn coset_tables_stay_involutive(gens in prop::collection::vec(word(4, 3), 0..3), waves in 1..6usize) {
        let f = Fixture::load("zz").unwrap();
        let alpha = f.presentation.alphabet();
        let h = SubgroupSpec::new(alpha, gens).unwrap();
        for x in coset::enumerate(&f.presentation, &h, SnapshotPolicy::EveryWave, Default::default()).unwrap().take(waves) {
            let x = x.unwrap();
            for (u, l, v) in x.edges() {
                prop_assert_eq!(x.edge(v, alpha.inv(l)), Some(u));
            }
            for g in h.words() {
                prop_assert_eq!(x.trace(x.basepoint(), g), Some(x.basepoint()));
            }
        }
    }

    #[test]
    fn min_lambda_grows_with_the_word_set(g1 in word(4, 3), g2 in word(4, 3)) {
        let (s, p) = shortlex_free(2);
        let alpha = p.alphabet();
        let ctx = HyperbolicContext::new(&s, parse_rational("0").unwrap(), &p, 2).unwrap();
        let h = SubgroupSpec::new(alpha, vec![g1, g2]).unwrap();
        let ball = h_ball(&ctx, &h, 3, 1 << 20).unwrap();
        let mut prev = None;
        for len in 0..=3 {
            let l = min_lambda(&ctx, &v_geodesic_words(&ball, len), h.symmetrized()).unwrap();
            if let Some(p) = prev {
                prop_assert!(l >= p);
            }
            prev = Some(l);
        }
    }
}
