use msoword::biinf::{
    classify, decode_interleaved, decode_oracle, embed_oracle, enumerate_class, interleave_with_oracle, is_recurrent,
    mso_equivalent, parse_stream, period, realize_factors, shift_equivalent, Cardinality, Classification,
    SearchConfig, StreamItem,
};
use msoword::cli::selftest::{all_words, alternating, brute_period, brute_recurrent, golden_mean};
use msoword::decide::Presentation;
use msoword::words::{equal_bi, FactorEnumeration, FiniteWord, Language, OracleBits, UpBiWord};
use proptest::prelude::*;

fn bi() -> impl Strategy<Value = UpBiWord> {
    ("[01]{1,3}", "[01]{0,3}", "[01]{1,3}", -2i64..=2).prop_map(|(x, y, z, s)| {
        let mut b = UpBiWord::of(&x, &y, &z);
        b.start = s;
        b
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn shifts_are_found(xi in bi(), p in -6i64..=6) {
        let q = shift_equivalent(&xi, &xi.shift(p)).unwrap();
        prop_assert!(q.abs() <= p.abs());
        prop_assert!(equal_bi(&xi.shift(q), &xi.shift(p)));
    }

    #[test]
    fn mso_equivalence_is_reflexive_and_shift_invariant(xi in bi(), p in -4i64..=4) {
        prop_assert!(mso_equivalent(&Presentation::Bi(xi.clone()), &Presentation::Bi(xi.shift(p))).unwrap());
    }

    #[test]
    fn recurrence_and_period_match_windows(xi in bi()) {
        prop_assert_eq!(is_recurrent(&xi).unwrap(), brute_recurrent(&xi, 14));
        prop_assert_eq!(period(&xi), brute_period(&xi, 60));
    }

    #[test]
    fn classification_agrees_with_period(xi in bi()) {
        let r = classify(&Presentation::Bi(xi.clone())).unwrap();
        match (r.classification, period(&xi)) {
            (Classification::Periodic(p), Some(q)) => {
                prop_assert_eq!(p, q);
                prop_assert_eq!(r.cardinality, Cardinality::Finite(p));
                prop_assert_eq!(enumerate_class(&xi).unwrap().len() as u64, p);
            }
            (Classification::NonRecurrent, None) => prop_assert_eq!(r.cardinality, Cardinality::Aleph0),
            other => prop_assert!(false, "{:?}", other),
        }
    }

    #[test]
    fn stream_lines_round_trip(step in 0usize..50, w in "[01]{0,12}", cut in 0usize..13) {
        let word: FiniteWord = w.as_str().into();
        let item = StreamItem { step, origin: cut.min(word.len()), word };
        prop_assert_eq!(StreamItem::parse_line(&item.line()).unwrap(), item);
    }

    #[test]
    fn interleaving_decodes(bits in proptest::collection::vec(any::<bool>(), 1..6)) {
        let a = OracleBits(bits);
        let z = interleave_with_oracle(&a).nth(a.len() + 1).unwrap();
        prop_assert_eq!(decode_interleaved(&z.right_half(), a.len()).unwrap(), a);
    }
}

#[test]
fn embedding_round_trips() {
    let cfg = SearchConfig::default();
    for l in [all_words(), golden_mean()] {
        let f = FactorEnumeration::length_lex(Language::Regular(l.clone()));
        for bits in OracleBits::all_of_length(5) {
            let st = embed_oracle(&l, &bits, &cfg).unwrap();
            assert_eq!(st.stream.len(), bits.len() + 1);
            for item in &st.stream {
                assert!(l.accepts(item.word.letters()), "{}", item.line());
            }
            assert_eq!(decode_oracle(&st.last().right_half(), &f, &cfg).unwrap(), bits);
        }
    }
}

#[test]
fn embedding_needs_a_non_periodic_language() {
    assert!(embed_oracle(&alternating(), &OracleBits::parse("1").unwrap(), &SearchConfig::default()).is_err());
}

#[test]
fn realizer_stays_in_language_and_grows() {
    let l = golden_mean();
    let items: Vec<StreamItem> = realize_factors(&l).unwrap().take(6).map(|r| r.unwrap()).collect();
    for pair in items.windows(2) {
        assert!(pair[0].word.is_factor_of(&pair[1].word));
        assert!(pair[1].word.len() > pair[0].word.len());
    }
    for item in &items {
        assert!(l.accepts(item.word.letters()));
    }
    // every word of the language up to length 3 shows up
    let last = &items.last().unwrap().word;
    for w in FiniteWord::all_up_to(3).filter(|w| l.accepts(w.letters())) {
        assert!(w.is_factor_of(last), "{w}");
    }
}

#[test]
fn language_classification() {
    let c = classify(&Presentation::FactorLanguage(alternating())).unwrap();
    assert_eq!(c.classification, Classification::Periodic(2));
    let c = classify(&Presentation::FactorLanguage(golden_mean())).unwrap();
    assert_eq!(c.cardinality, Cardinality::Continuum);
    assert!(mso_equivalent(&Presentation::FactorLanguage(alternating()), &Presentation::Bi(UpBiWord::of("01", "", "01"))).unwrap());
    assert!(!mso_equivalent(&Presentation::FactorLanguage(golden_mean()), &Presentation::FactorLanguage(all_words())).unwrap());
}

#[test]
fn stream_files_skip_comments() {
    let s = parse_stream("# header\nz0 @1 010\n\nz1 @2 00100\n").unwrap();
    assert_eq!(s.len(), 2);
    assert_eq!(s[1].right_half().to_string(), "100");
    assert!(parse_stream("z0 @9 01\n").is_err());
}
