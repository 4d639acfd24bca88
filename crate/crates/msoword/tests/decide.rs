use msoword::decide::{
    decide_bi, decide_bi_via_representative, decide_finite, decide_gap, decide_up, indicator_up, rec_from_weak,
    weak_from_rec, weak_indicator_up, Indicator, WeakIndicator,
};
use msoword::formula::{corpus, not, parse_sentence, Formula};
use msoword::types::TypeConfig;
use msoword::words::{FiniteWord, GapPredicateWord, UpBiWord, UpOmegaWord};
use proptest::prelude::*;

fn small_corpus() -> Vec<Formula> {
    corpus().into_iter().filter(|f| f.qr() <= 2).take(12).collect()
}

fn up() -> impl Strategy<Value = UpOmegaWord> {
    ("[01]{0,3}", "[01]{1,3}").prop_map(|(u, v)| UpOmegaWord::of(&u, &v))
}

fn bi() -> impl Strategy<Value = UpBiWord> {
    ("[01]{1,2}", "[01]{0,2}", "[01]{1,2}").prop_map(|(x, y, z)| UpBiWord::of(&x, &y, &z))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn up_presentation_does_not_matter(a in up(), extra in 0usize..3) {
        let b = a.recut(a.u.len() + extra, 2 * a.v.len());
        for phi in small_corpus() {
            let x = decide_up(&a, &phi).unwrap();
            prop_assert_eq!(x, decide_up(&a.normalize(), &phi).unwrap(), "{}", phi);
            prop_assert_eq!(x, decide_up(&b, &phi).unwrap(), "{}", phi);
            prop_assert_eq!(!x, decide_up(&a, &not(phi.clone())).unwrap(), "{}", phi);
        }
    }

    #[test]
    fn bi_shift_invariant(xi in bi(), p in -3i64..=3) {
        for phi in small_corpus() {
            prop_assert_eq!(decide_bi(&xi, &phi).unwrap(), decide_bi(&xi.shift(p), &phi).unwrap(), "{}", phi);
        }
    }

    #[test]
    fn bi_fold_matches_representative(xi in bi()) {
        let cfg = TypeConfig::default();
        for phi in small_corpus() {
            prop_assert_eq!(decide_bi(&xi, &phi).unwrap(), decide_bi_via_representative(&xi, &phi, &cfg).unwrap(), "{}", phi);
        }
    }

    #[test]
    fn weak_and_rec_round_trip(a in up()) {
        let phi = parse_sentence("E x. P(x)").unwrap();
        let weak = weak_indicator_up(&a, &phi).unwrap();
        let rec = rec_from_weak(&phi, |psi| weak_indicator_up(&a, psi)).unwrap();
        prop_assert_eq!(rec, indicator_up(&a, &phi).unwrap());
        prop_assert_eq!(weak_from_rec(&a, &phi, |psi| indicator_up(&a, psi)).unwrap(), weak);
    }
}

#[test]
fn indicators_of_simple_words() {
    let phi = parse_sentence("E x. P(x)").unwrap();
    assert_eq!(indicator_up(&UpOmegaWord::of("1", "0"), &phi).unwrap(), Indicator::At(1));
    assert_eq!(indicator_up(&UpOmegaWord::of("", "0"), &phi).unwrap(), Indicator::At(0));
    assert_eq!(indicator_up(&UpOmegaWord::of("00", "01"), &phi).unwrap(), Indicator::Top);
    assert_eq!(weak_indicator_up(&UpOmegaWord::of("", "0"), &phi).unwrap(), WeakIndicator::Zero);
    assert_eq!(weak_indicator_up(&UpOmegaWord::of("1", "0"), &phi).unwrap(), WeakIndicator::One);
    assert_eq!(weak_indicator_up(&UpOmegaWord::of("", "10"), &phi).unwrap(), WeakIndicator::Top);
}

#[test]
fn finite_and_infinite_agree_on_first_letter() {
    let phi = parse_sentence("E x. P(x) & (A y. x <= y)").unwrap();
    for w in FiniteWord::all_up_to(4).filter(|w| !w.is_empty()) {
        let a = UpOmegaWord::new(w.clone(), "0".into()).unwrap();
        assert_eq!(decide_up(&a, &phi).unwrap(), w.letter(0) == 1, "{w}");
        assert_eq!(decide_finite(&w, &phi).unwrap(), w.letter(0) == 1, "{w}");
    }
}

#[test]
fn constant_gaps_match_lasso() {
    let phi = parse_sentence("E x. E y. succ(x, y) & P(x) & P(y)").unwrap();
    let psi = parse_sentence("A x. P(x) -> (E y. x < y & P(y))").unwrap();
    for c in 0..6u64 {
        let lasso = UpOmegaWord::new(FiniteWord::empty(), FiniteWord([vec![1], vec![0; c as usize]].concat())).unwrap();
        let g = GapPredicateWord::constant(c);
        assert_eq!(decide_gap(&g, &phi).unwrap(), decide_up(&lasso, &phi).unwrap(), "c={c}");
        assert_eq!(decide_gap(&g, &psi).unwrap(), decide_up(&lasso, &psi).unwrap(), "c={c}");
    }
}

#[test]
fn factorial_gaps_eventually_exceed_any_bound() {
    // some gap has length at least 3
    let phi = parse_sentence("E x. E y. x < y & P(x) & P(y) & (A z. (x < z & z < y) -> !P(z)) & (E a. E b. E c. x < a & a < b & b < c & c < y)").unwrap();
    assert!(decide_gap(&GapPredicateWord::factorial(), &phi).unwrap());
    assert!(!decide_gap(&GapPredicateWord::constant(2), &phi).unwrap());
}

#[test]
fn free_variables_are_rejected() {
    let f = msoword::formula::parse("P(x)").unwrap();
    assert!(decide_up(&UpOmegaWord::of("", "1"), &f).is_err());
}
