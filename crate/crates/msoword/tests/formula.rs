use msoword::compiler::{brute_force_eval_with, compile_finite, BruteForceLimits};
use msoword::formula::{self, corpus, parse, Formula, Valuation};
use msoword::words::FiniteWord;
use proptest::prelude::*;

const LIMITS: BruteForceLimits = BruteForceLimits { max_len: 4, max_rank: 6 };

const VARS: [&str; 3] = ["x", "y", "z"];

fn atom() -> impl Strategy<Value = Formula> {
    let v = || proptest::sample::select(VARS.to_vec());
    prop_oneof![
        v().prop_map(formula::letter),
        (v(), v()).prop_map(|(a, b)| formula::lt(a, b)),
        (v(), v()).prop_map(|(a, b)| formula::le(a, b)),
        (v(), v()).prop_map(|(a, b)| formula::eq(a, b)),
        (1u64..4, v(), v()).prop_map(|(n, a, b)| Formula::Cong { n, x: a.into(), y: b.into() }),
        (v(),).prop_map(|(a,)| formula::member("X", a)),
    ]
}

/// Closed formulas of modest size: the body is wrapped in quantifiers for
/// every variable it might use.
fn sentence() -> impl Strategy<Value = Formula> {
    let body = atom().prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| formula::or(a, b)),
            (proptest::sample::select(VARS.to_vec()), inner.clone()).prop_map(|(v, a)| formula::exists(v, a)),
            (proptest::sample::select(VARS.to_vec()), inner).prop_map(|(v, a)| formula::forall(v, a)),
        ]
    });
    (body, proptest::collection::vec(any::<bool>(), 4)).prop_map(|(b, q)| {
        let mut f = if q[0] { formula::exists2("X", b) } else { formula::forall2("X", b) };
        for (v, e) in VARS.iter().zip(&q[1..]) {
            f = if *e { formula::exists(v, f) } else { formula::forall(v, f) };
        }
        f
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn display_parse_round_trip(f in sentence()) {
        let back = parse(&f.to_string()).unwrap();
        prop_assert_eq!(&back, &f.canonicalize());
        prop_assert_eq!(parse(&back.to_string()).unwrap(), back);
    }

    #[test]
    fn compiled_matches_brute_force(f in sentence()) {
        let f = parse(&f.to_string()).unwrap();
        prop_assume!(f.qr() <= 5);
        let c = compile_finite(&f).unwrap();
        let nu = Valuation::new();
        for w in FiniteWord::all_up_to(4) {
            prop_assert_eq!(c.accepts(&w, &nu).unwrap(), brute_force_eval_with(&w, &f, &nu, LIMITS).unwrap(), "{} on {}", f, w);
        }
    }
}

#[test]
fn corpus_is_closed_and_reparses() {
    let c = corpus();
    assert!(c.len() >= 30);
    for f in c {
        assert!(f.free_vars().is_empty(), "{f}");
        assert_eq!(parse(&f.to_string()).unwrap(), f);
    }
}

#[test]
fn syntax_errors_are_rejected() {
    for s in ["E x P(x)", "P(x", "x <", "E2 x. X(x)", "cong(0,x,y)", "E x. P(x) &"] {
        assert!(parse(s).is_err(), "{s}");
    }
}
