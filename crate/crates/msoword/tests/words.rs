use msoword::words::{equal_bi, equal_up, fold_word, parse_literal, FiniteWord, GapPredicateWord, OracleBits, UpBiWord, UpOmegaWord, WordLiteral};
use proptest::prelude::*;

fn up() -> impl Strategy<Value = UpOmegaWord> {
    ("[01]{0,4}", "[01]{1,4}").prop_map(|(u, v)| UpOmegaWord::of(&u, &v))
}

fn bi() -> impl Strategy<Value = UpBiWord> {
    ("[01]{1,3}", "[01]{0,3}", "[01]{1,3}", -3i64..=3).prop_map(|(x, y, z, s)| {
        let mut b = UpBiWord::of(&x, &y, &z);
        b.start = s;
        b
    })
}

proptest! {
    #[test]
    fn normalize_keeps_the_word(a in up()) {
        let n = a.normalize();
        prop_assert!(equal_up(&a, &n));
        prop_assert!(n.u.len() <= a.u.len());
        prop_assert!(n.v.len() <= a.v.len());
        prop_assert_eq!(n.normalize(), n);
    }

    #[test]
    fn recut_keeps_the_word(a in up(), extra in 0usize..4, mult in 1usize..3) {
        let n = a.normalize();
        let r = n.recut(n.u.len() + extra, n.v.len() * mult);
        prop_assert!(equal_up(&a, &r));
    }

    #[test]
    fn tail_is_suffix(a in up(), n in 0usize..10) {
        let t = a.tail(n);
        for i in 0..20u64 {
            prop_assert_eq!(t.letter_at(i), a.letter_at(i + n as u64));
        }
    }

    #[test]
    fn up_literal_round_trip(a in up()) {
        match parse_literal(&a.literal()).unwrap() {
            WordLiteral::Up(b) => prop_assert_eq!(b, a),
            other => prop_assert!(false, "parsed as {}", other.literal()),
        }
    }

    #[test]
    fn bi_literal_round_trip(b in bi()) {
        match parse_literal(&b.literal()).unwrap() {
            WordLiteral::Bi(c) => prop_assert_eq!(c, b),
            other => prop_assert!(false, "parsed as {}", other.literal()),
        }
    }

    #[test]
    fn bi_normalize_and_shift(b in bi(), p in -5i64..=5) {
        prop_assert!(equal_bi(&b, &b.normalize()));
        let s = b.shift(p);
        for n in -12i64..12 {
            prop_assert_eq!(s.letter_at(n), b.letter_at(n + p));
        }
    }

    #[test]
    fn reverse_is_involution(b in bi()) {
        let r = b.reverse();
        for n in -12i64..12 {
            prop_assert_eq!(r.letter_at(n), b.letter_at(-n));
        }
        prop_assert!(equal_bi(&r.reverse(), &b));
    }

    #[test]
    fn halves_and_fold(b in bi()) {
        let (r, l, f) = (b.right_half(), b.left_half_reversed(), fold_word(&b));
        for i in 0..20i64 {
            prop_assert_eq!(r.letter_at(i as u64), b.letter_at(i));
            prop_assert_eq!(l.letter_at(i as u64), b.letter_at(-i - 1));
            prop_assert_eq!(f.letter_at(i as u64), b.letter_at(i) | (b.letter_at(-i - 1) << 1));
        }
    }

    #[test]
    fn finite_word_json_is_a_string(w in "[01]{0,8}") {
        let fw: FiniteWord = w.as_str().into();
        let j = serde_json::to_string(&fw).unwrap();
        prop_assert_eq!(&j, &format!("\"{w}\""));
        let back: FiniteWord = serde_json::from_str(&j).unwrap();
        prop_assert_eq!(back, fw);
    }

    #[test]
    fn primitive_root_divides(w in "[01]{1,10}") {
        let fw: FiniteWord = w.as_str().into();
        let r = fw.primitive_root();
        prop_assert_eq!(fw.len() % r.len(), 0);
        prop_assert_eq!(r.pow(fw.len() / r.len()), fw);
        prop_assert_eq!(r.primitive_root(), r);
    }
}

#[test]
fn length_lex_enumeration() {
    let all: Vec<String> = FiniteWord::all_up_to(2).map(|w| w.to_string()).collect();
    assert_eq!(all, ["ε", "0", "1", "00", "01", "10", "11"]);
    assert_eq!(FiniteWord::all_of_length(5).count(), 32);
}

#[test]
fn gap_words_have_gaps() {
    let g = GapPredicateWord::constant(2);
    let w: String = (0..10).map(|i| char::from(b'0' + g.letter_at(i))).collect();
    assert_eq!(w, "1001001001");
    let f = GapPredicateWord::factorial();
    let ones: Vec<u64> = (0..40).filter(|&i| f.letter_at(i) == 1).collect();
    assert!(ones.len() >= 3);
    assert!(matches!(parse_literal("gap:factorial").unwrap(), WordLiteral::Gap(_)));
    assert!(matches!(parse_literal("gap:const:3").unwrap(), WordLiteral::Gap(_)));
}

#[test]
fn bad_literals_are_rejected() {
    for s in ["", "up:u=01", "up:u=0,v=", "bi:x=|y=0|z=1", "fin:014", "zz:01", "bi:x=1|z=0|s=q"] {
        assert!(parse_literal(s).is_err(), "{s}");
    }
}

#[test]
fn oracle_bits() {
    let b = OracleBits::parse("1011").unwrap();
    assert_eq!(b.len(), 4);
    assert!(b.contains(0) && !b.contains(1) && b.contains(3));
    assert!(OracleBits::parse("10x").is_err());
    assert_eq!(OracleBits::all_of_length(3).count(), 8);
}
