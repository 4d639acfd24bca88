use msoword::automata::serial::{Automaton, AutomatonJson};
use msoword::automata::{factor_automaton_up, factorial_check, extension_check, Dfa, Nba, Nfa};
use msoword::words::{FiniteWord, UpOmegaWord};
use proptest::prelude::*;

fn dfa_strategy() -> impl Strategy<Value = Dfa> {
    (1usize..6).prop_flat_map(|n| {
        (
            proptest::collection::vec(0..n as u32, 2 * n),
            proptest::collection::vec(any::<bool>(), n),
        )
            .prop_map(move |(t, acc)| Dfa::new(1, false, t, 0, acc).unwrap())
    })
}

fn nba_strategy() -> impl Strategy<Value = Nba> {
    (1usize..4).prop_flat_map(|n| {
        (
            proptest::collection::vec(any::<bool>(), 2 * n * n),
            proptest::collection::vec(any::<bool>(), n),
        )
            .prop_map(move |(bits, acc)| {
                let mut edges = Vec::new();
                for p in 0..n {
                    for a in 0..2 {
                        for q in 0..n {
                            if bits[(p * 2 + a) * n + q] {
                                edges.push((p as u32, a as u32, q as u32));
                            }
                        }
                    }
                }
                Nba::from_edges(1, n, &edges, vec![0], acc).unwrap()
            })
    })
}

fn letters(w: &FiniteWord) -> Vec<u32> {
    w.letters().iter().map(|&b| b as u32).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn boolean_ops_pointwise(a in dfa_strategy(), b in dfa_strategy()) {
        let i = a.intersect(&b).unwrap();
        let u = a.union(&b).unwrap();
        let c = a.complement();
        for w in FiniteWord::all_up_to(6) {
            let (x, y) = (a.accepts(w.letters()), b.accepts(w.letters()));
            prop_assert_eq!(i.accepts(w.letters()), x && y);
            prop_assert_eq!(u.accepts(w.letters()), x || y);
            prop_assert_eq!(c.accepts(w.letters()), !x);
        }
    }

    #[test]
    fn minimize_preserves_language(a in dfa_strategy()) {
        let m = a.minimize();
        prop_assert!(m.num_states() <= a.num_states());
        prop_assert!(m.equivalent(&a).unwrap());
        prop_assert_eq!(m.minimize().num_states(), m.num_states());
    }

    #[test]
    fn inclusion_matches_intersection(a in dfa_strategy(), b in dfa_strategy()) {
        let inc = a.included_in(&b).unwrap();
        prop_assert_eq!(inc, a.intersect(&b.complement()).unwrap().is_empty());
    }

    #[test]
    fn shortest_accepted_is_accepted(a in dfa_strategy()) {
        match a.shortest_accepted() {
            Some(w) => prop_assert!(a.accepts_letters(&w)),
            None => prop_assert!(a.is_empty()),
        }
    }

    #[test]
    fn nba_complement_disjoint_and_covering(a in nba_strategy(), u in "[01]{0,3}", v in "[01]{1,3}") {
        let c = a.complement().unwrap();
        let (u, v) = (letters(&u.as_str().into()), letters(&v.as_str().into()));
        prop_assert_ne!(a.accepts_up(&u, &v).unwrap(), c.accepts_up(&u, &v).unwrap());
    }

    #[test]
    fn text_format_round_trip(a in dfa_strategy()) {
        let t = Automaton::Dfa(a.clone()).to_text();
        match Automaton::from_text(&t).unwrap() {
            Automaton::Dfa(b) => prop_assert_eq!(b, a),
            _ => prop_assert!(false, "kind changed"),
        }
    }

    #[test]
    fn factor_automaton_of_lasso(u in "[01]{0,3}", v in "[01]{1,3}") {
        let a = UpOmegaWord::of(&u, &v);
        let f = factor_automaton_up(&a).unwrap();
        let text: FiniteWord = a.prefix(u.len() + 8 * v.len() + 8);
        for w in FiniteWord::all_up_to(5) {
            prop_assert_eq!(f.accepts(w.letters()), w.is_factor_of(&text), "{}", w);
        }
        prop_assert!(factorial_check(&f).unwrap());
        if u.is_empty() {
            prop_assert!(extension_check(&f).unwrap());
        }
    }
}

#[test]
fn nfa_determinize_matches_nfa() {
    // words whose second letter from the end is 1
    let nfa = Nfa::new(1, false, vec![vec![0], vec![0, 1], vec![2], vec![2], vec![], vec![]], vec![0], vec![false, false, true]).unwrap();
    let d = nfa.determinize().unwrap();
    for w in FiniteWord::all_up_to(7) {
        let expect = w.len() >= 2 && w.letter(w.len() - 2) == 1;
        assert_eq!(nfa.accepts(w.letters()), expect, "{w}");
        assert_eq!(d.accepts(w.letters()), expect, "{w}");
    }
    assert_eq!(d.minimize().num_states(), 4);
}

#[test]
fn non_recurrent_factors_lack_extensions() {
    // in 1 0^ω the factor 1 cannot be joined to itself
    let f = factor_automaton_up(&UpOmegaWord::of("1", "0")).unwrap();
    assert!(factorial_check(&f).unwrap());
    assert!(!extension_check(&f).unwrap());
}

#[test]
fn json_rejects_unknown_kind() {
    let j = AutomatonJson { kind: "pda".into(), width: 1, states: 1, transitions: vec![], init: vec![0], acc: vec![] };
    assert!(Automaton::from_json(&j).is_err());
}

#[test]
fn text_rejects_bad_letter() {
    assert!(Automaton::from_text("dfa width=1 states=1\n0 2 0\ninit: 0\nacc: 0\n").is_err());
    assert!(Automaton::from_text("").is_err());
}

#[test]
fn universal_and_empty() {
    let u = Dfa::universal(1, false);
    let e = Dfa::empty(1, false);
    assert!(u.accepts(&[]) && u.accepts(&[0, 1, 1]));
    assert!(e.is_empty());
    assert!(e.included_in(&u).unwrap());
    assert!(!u.included_in(&e).unwrap());
}
