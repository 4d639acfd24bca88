use msoword::compiler::{brute_force_eval, compile_finite, compile_omega};
use msoword::formula::{corpus, parse, Valuation};
use msoword::words::{FiniteWord, UpOmegaWord};

#[test]
fn corpus_agrees_with_brute_force() {
    let nu = Valuation::new();
    for phi in corpus() {
        assert!(phi.qr() <= 3, "{phi}");
        let c = compile_finite(&phi).unwrap();
        assert_eq!(c.width(), 1);
        for w in FiniteWord::all_up_to(6) {
            assert_eq!(c.accepts(&w, &nu).unwrap(), brute_force_eval(&w, &phi, &nu).unwrap(), "{phi} on {w}");
        }
    }
}

#[test]
fn omega_excluded_middle() {
    for phi in corpus().into_iter().filter(|f| f.qr() <= 2) {
        let yes = compile_omega(&msoword::formula::or(phi.clone(), msoword::formula::not(phi.clone()))).unwrap();
        let no = compile_omega(&msoword::formula::and(phi.clone(), msoword::formula::not(phi.clone()))).unwrap();
        for (u, v) in [("", "0"), ("1", "0"), ("", "01"), ("110", "1"), ("0", "011")] {
            let a = UpOmegaWord::of(u, v);
            assert!(yes.accepts_word(&a).unwrap());
            assert!(!no.accepts_word(&a).unwrap());
        }
    }
}

#[test]
fn free_variable_formula() {
    let c = compile_finite(&parse("x < y & P(y)").unwrap()).unwrap();
    assert!(c.accepts(&"01".into(), &Valuation::new().with("x", 0).with("y", 1)).unwrap());
    assert!(!c.accepts(&"01".into(), &Valuation::new().with("x", 1).with("y", 0)).unwrap());
}
