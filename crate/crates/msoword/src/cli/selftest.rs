//! Randomised and exhaustive cross-checks against independent oracles.
//!
//! Each suite compares a decision procedure with a slower route that does
//! not share its code: brute-force evaluation, explicit shift search, window
//! comparison of factors and so on. Suites are deterministic for a seed.

use std::collections::BTreeSet;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::automata::nba::{DEFAULT_COMPLEMENT_CAP, DEFAULT_PROFILE_CAP};
use crate::automata::{factor_automaton_up, Dfa, Nba};
use crate::biinf::{
    self, check_conditions, classify, decode_oracle, embed_oracle, has_determining_word, is_recurrent, mso_equivalent,
    period, realize_language, shift_equivalent, Classification, ConditionBounds, SearchConfig,
};
use crate::compiler::{brute_force_eval, compile_finite};
use crate::decide::{decide_bi, decide_gap, decide_up, Presentation};
use crate::formula::{corpus, macro_divides, Formula, Valuation};
use crate::types::{
    equiv_k_with, type_function_up, unary_classify_with, uniformly_homogeneous_bi_with,
    uniformly_homogeneous_up_with, verify_homogeneous_bi, verify_homogeneous_up, TypeConfig,
};
use crate::words::{equal_bi, FactorEnumeration, FiniteWord, GapPredicateWord, Language, OracleBits, UpBiWord, UpOmegaWord};
use crate::{Error, Result};

/// Names and one-line descriptions of the suites, in run order.
pub const SUITES: &[(&str, &str)] = &[
    ("compiler", "compiled DFA vs brute-force evaluation on the corpus"),
    ("divides", "divisibility macro vs arithmetic"),
    ("unary", "unary classification vs brute-force types"),
    ("complement", "random NBA vs its complement on random lasso words"),
    ("shift", "shift equivalence vs explicit shift search"),
    ("mso", "MSO-equivalent pairs agree on the corpus"),
    ("gap", "constant-gap words: gap decider vs lasso decider"),
    ("realizer", "realized streams stay in L and cover short words"),
    ("embed", "oracle embedding round trip"),
    ("determining", "determining words vs classification"),
    ("recurrent-period", "recurrence and period vs window comparison"),
    ("homogeneous", "homogeneous sets pass the per-rank check"),
];

/// Knobs shared by all suites.
#[derive(Clone, Debug)]
pub struct SelftestConfig {
    pub seed: u64,
    /// Smaller case counts, for smoke runs.
    pub quick: bool,
    pub types: TypeConfig,
    pub search: SearchConfig,
    pub bounds: ConditionBounds,
    pub complement_state_cap: usize,
    pub complement_profile_cap: usize,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        SelftestConfig {
            seed: 0x5eed,
            quick: false,
            types: TypeConfig::default(),
            search: SearchConfig::default(),
            bounds: ConditionBounds::default(),
            complement_state_cap: DEFAULT_COMPLEMENT_CAP,
            complement_profile_cap: DEFAULT_PROFILE_CAP,
        }
    }
}

/// Outcome of one suite.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub cases: u64,
    pub failures: u64,
    /// The first mismatch, if any.
    pub first_failure: Option<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.cases > 0
    }
}

struct Tally {
    cases: u64,
    failures: u64,
    first: Option<String>,
}

impl Tally {
    fn new() -> Self {
        Tally { cases: 0, failures: 0, first: None }
    }

    fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first.is_none() {
                self.first = Some(detail());
            }
        }
    }

    fn finish(self, name: &str) -> SuiteReport {
        SuiteReport { name: name.into(), cases: self.cases, failures: self.failures, first_failure: self.first }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_word(rng: &mut impl Rng, min: usize, max: usize) -> FiniteWord {
    let n = rng.gen_range(min..=max);
    FiniteWord((0..n).map(|_| rng.gen_range(0..2u8)).collect())
}

/// A binary NBA with 1 to `max_states` states and random edges, initial
/// and accepting states.
pub fn random_nba(rng: &mut impl Rng, max_states: usize) -> Nba {
    let n = rng.gen_range(1..=max_states);
    let mut edges = Vec::new();
    for p in 0..n as u32 {
        for a in 0..2 {
            for q in 0..n as u32 {
                if rng.gen_bool(0.4) {
                    edges.push((p, a, q));
                }
            }
        }
    }
    let mut init = vec![0];
    init.extend((1..n as u32).filter(|_| rng.gen_bool(0.25)));
    let acc = (0..n).map(|_| rng.gen_bool(0.5)).collect();
    Nba::from_edges(1, n, &edges, init, acc).expect("generated NBA is well formed")
}

/// `u v^ω` with `|u| ≤ max_u` and `1 ≤ |v| ≤ max_v`.
pub fn random_up_word(rng: &mut impl Rng, max_u: usize, max_v: usize) -> UpOmegaWord {
    UpOmegaWord { u: random_word(rng, 0, max_u), v: random_word(rng, 1, max_v) }
}

/// `x^{ω*} y z^ω` with loops of length at most `max` and `|y| ≤ max`.
pub fn random_bi_word(rng: &mut impl Rng, max: usize) -> UpBiWord {
    let x = random_word(rng, 1, max);
    let y = random_word(rng, 0, max);
    let z = random_word(rng, 1, max);
    UpBiWord { x, y, z, start: rng.gen_range(-2..=2) }
}

fn as_letters(w: &FiniteWord) -> Vec<u32> {
    w.letters().iter().map(|&a| a as u32).collect()
}

/// `{0,1}*`.
pub fn all_words() -> Dfa {
    Dfa::universal(1, false)
}

/// Binary words without `11`.
pub fn golden_mean() -> Dfa {
    Dfa::from_fn(1, false, 3, 0, vec![true, true, false], |q, a| match (q, a) {
        (2, _) | (1, 1) => 2,
        (_, 1) => 1,
        _ => 0,
    })
}

/// Factors of `(01)^ω`.
pub fn alternating() -> Dfa {
    factor_automaton_up(&UpOmegaWord::of("", "01")).expect("factor automaton of a lasso word")
}

/// The three languages understood by `--lang`.
pub fn builtin_language(name: &str) -> Option<Dfa> {
    match name {
        "all" => Some(all_words()),
        "golden" => Some(golden_mean()),
        "alt" => Some(alternating()),
        _ => None,
    }
}

/// Least `p` with `|p| ≤ bound` and `ζ(n) = ξ(n + p)`, ties to the positive side.
pub fn brute_shift(a: &UpBiWord, b: &UpBiWord, bound: i64) -> Option<i64> {
    (0..=bound).flat_map(|m| [m, -m]).find(|&p| (-200..200).all(|n| a.letter_at(n + p) == b.letter_at(n)))
}

fn window_factors(xi: &UpBiWord, len: usize, from: i64, count: i64) -> BTreeSet<FiniteWord> {
    (from..from + count).map(|i| xi.factor(i, i + len as i64)).collect()
}

/// Recurrence judged on factors of one length: those around `y` must
/// reappear far out on both sides.
pub fn brute_recurrent(xi: &UpBiWord, len: usize) -> bool {
    let span = 3 * len as i64 + 24;
    let mid = window_factors(xi, len, xi.start - span, xi.y.len() as i64 + 2 * span);
    let left = window_factors(xi, len, xi.start - 40 * span, 24);
    let right = window_factors(xi, len, xi.end() + 40 * span, 24);
    mid.is_subset(&left) && mid.is_subset(&right)
}

/// Least period found by comparing letters on a window.
pub fn brute_period(xi: &UpBiWord, bound: i64) -> Option<u64> {
    (1..=bound)
        .find(|&p| (-300..300).all(|n| xi.letter_at(n + p) == xi.letter_at(n)))
        .map(|p| p as u64)
}

/// Smallest `(t, p)` by `t + p` with `0^t ≡_k 0^{t+p}` under brute-force types.
pub fn brute_unary_pair(k: usize, max: usize) -> Result<Option<(u64, u64)>> {
    let cfg = TypeConfig::brute();
    let z = |n: usize| FiniteWord(vec![0; n]);
    for s in 1..=max {
        for t in 0..s {
            let p = s - t;
            if equiv_k_with(&z(t), &z(t + p), k, &cfg)? {
                return Ok(Some((t as u64, p as u64)));
            }
        }
    }
    Ok(None)
}

/// Runs one suite by name.
pub fn run_suite(name: &str, cfg: &SelftestConfig) -> Result<SuiteReport> {
    let mut t = Tally::new();
    let mut r = rng(cfg.seed ^ fxhash(name));
    let q = cfg.quick;
    match name {
        "compiler" => {
            let len = if q { 4 } else { 6 };
            let nu = Valuation::new();
            for phi in corpus() {
                let c = compile_finite(&phi)?;
                for w in FiniteWord::all_up_to(len) {
                    let got = c.accepts(&w, &nu)?;
                    let want = brute_force_eval(&w, &phi, &nu)?;
                    t.check(got == want, || format!("{phi} on {w}: automaton {got}, brute force {want}"));
                }
            }
        }
        "divides" => {
            let len = if q { 5 } else { 8 };
            for n in 1..=4u64 {
                let c = compile_finite(&macro_divides(n, "x", "y")?)?;
                for w in FiniteWord::all_up_to(len) {
                    for i in 0..w.len() {
                        for j in 0..w.len() {
                            let nu = Valuation::new().with("x", i as i64).with("y", j as i64);
                            let got = c.accepts(&w, &nu)?;
                            let want = i <= j && (j - i) as u64 % n == 0;
                            t.check(got == want, || format!("n={n} i={i} j={j} on {w}: got {got}"));
                        }
                    }
                }
            }
        }
        "unary" => {
            for k in 1..=2 {
                let c = unary_classify_with(k, &cfg.types)?;
                let z = |n: u64| FiniteWord(vec![0; n as usize]);
                let ok = equiv_k_with(&z(c.l), &z(2 * c.l), k, &cfg.types)?;
                t.check(ok, || format!("k={k}: 0^{} and 0^{} differ", c.l, 2 * c.l));
                let bf = brute_unary_pair(k, 8)?;
                t.check(bf == Some((c.t, c.p)), || format!("k={k}: classified ({}, {}), brute force {bf:?}", c.t, c.p));
            }
        }
        "complement" => {
            let (automata, words) = if q { (20, 10) } else { (100, 20) };
            for _ in 0..automata {
                let a = random_nba(&mut r, 4);
                let c = a.complement_capped(cfg.complement_state_cap, cfg.complement_profile_cap)?;
                for _ in 0..words {
                    let w = random_up_word(&mut r, 4, 4);
                    let (u, v) = (as_letters(&w.u), as_letters(&w.v));
                    let (x, y) = (a.accepts_up(&u, &v)?, c.accepts_up(&u, &v)?);
                    t.check(x != y, || format!("{w}: A {x}, complement {y}, A = {a:?}"));
                }
            }
        }
        "shift" => {
            for _ in 0..if q { 60 } else { 300 } {
                let (a, b) = shifted_pair(&mut r);
                let got = shift_equivalent(&a, &b);
                let want = brute_shift(&a, &b, 50);
                t.check(got == want, || format!("{a} vs {b}: {got:?}, search {want:?}"));
            }
        }
        "mso" => {
            let sentences: Vec<Formula> = corpus().into_iter().filter(|f| f.qr() <= 2).collect();
            let mut pairs = 0;
            let mut tries = 0;
            while pairs < if q { 10 } else { 40 } && tries < 20_000 {
                tries += 1;
                let (a, b) = if tries % 2 == 0 { shifted_pair(&mut r) } else { (random_bi_word(&mut r, 2), random_bi_word(&mut r, 2)) };
                if !mso_equivalent(&Presentation::Bi(a.clone()), &Presentation::Bi(b.clone()))? {
                    continue;
                }
                pairs += 1;
                for phi in &sentences {
                    let (x, y) = (decide_bi(&a, phi)?, decide_bi(&b, phi)?);
                    t.check(x == y, || format!("{a} ~ {b} disagree on {phi}"));
                }
            }
        }
        "gap" => {
            let sentences = corpus();
            for _ in 0..if q { 40 } else { 200 } {
                let c = r.gen_range(0..6u64);
                let phi = &sentences[r.gen_range(0..sentences.len())];
                let g = GapPredicateWord::constant(c);
                let mut v = vec![1];
                v.extend(std::iter::repeat(0).take(c as usize));
                let a = UpOmegaWord { u: FiniteWord::empty(), v: FiniteWord(v) };
                let (x, y) = (decide_gap(&g, phi)?, decide_up(&a, phi)?);
                t.check(x == y, || format!("gap {c}, {phi}: gap route {x}, lasso route {y}"));
            }
        }
        "realizer" => {
            let steps = if q { 6 } else { 10 };
            for (name, l) in [("all", all_words()), ("alt", alternating())] {
                let lang = Language::Regular(l.clone());
                let items = realize_language(&lang, &cfg.bounds, &cfg.search)?.take(steps + 1).collect::<Result<Vec<_>>>()?;
                for it in &items {
                    t.check(lang.contains(&it.word), || format!("{name}: z{} = {} is not in L", it.step, it.word));
                }
                let last = &items.last().expect("at least one step").word;
                for w in FiniteWord::all_up_to(4).filter(|w| l.accepts(w.letters())) {
                    t.check(w.is_factor_of(last), || format!("{name}: {w} missing by step {steps}"));
                }
            }
        }
        "embed" => {
            let n = if q { 4 } else { 8 };
            for (name, l) in [("all", all_words()), ("golden", golden_mean())] {
                let f = FactorEnumeration::length_lex(Language::Regular(l.clone()));
                for bits in OracleBits::all_of_length(n) {
                    let st = embed_oracle(&l, &bits, &cfg.search)?;
                    let back = decode_oracle(&st.last().right_half(), &f, &cfg.search)?;
                    t.check(back == bits, || format!("{name}: {bits} decoded as {back}"));
                }
            }
        }
        "determining" => {
            let mut langs = vec![("all", all_words(), false), ("golden", golden_mean(), false), ("alt", alternating(), true)];
            for v in ["001", "0111", "01011"] {
                langs.push(("loop", factor_automaton_up(&UpOmegaWord::of("", v))?, true));
            }
            for (name, l, expect) in langs {
                check_conditions(&l)?;
                let d = has_determining_word(&l)?;
                t.check(d.is_some() == expect, || format!("{name}: determining word {d:?}"));
                if let Some(u) = &d {
                    let side = biinf::determining_check(&l, u)?;
                    t.check(side == biinf::Determining::Both, || format!("{name}: {u} is {side}"));
                }
                let c = classify(&Presentation::FactorLanguage(l.clone()))?;
                let periodic = matches!(c.classification, Classification::Periodic(_));
                t.check(periodic == expect, || format!("{name}: classified {c}"));
            }
        }
        "recurrent-period" => {
            for _ in 0..if q { 100 } else { 500 } {
                let xi = random_bi_word(&mut r, 4);
                let got = is_recurrent(&xi)?;
                let want = brute_recurrent(&xi, 14);
                t.check(got == want, || format!("{xi}: recurrent {got}, window {want}"));
                let (p, bp) = (period(&xi), brute_period(&xi, 60));
                t.check(p == bp, || format!("{xi}: period {p:?}, window {bp:?}"));
            }
        }
        "homogeneous" => {
            let count = if q { 3 } else { 10 };
            for _ in 0..count {
                let a = random_up_word(&mut r, 3, 3);
                let h = uniformly_homogeneous_up_with(&a, 2, &cfg.types)?;
                let ok = verify_homogeneous_up(&a, &h.positions, 2, &cfg.types)?;
                t.check(ok, || format!("{a}: {:?} fails", h.positions));
            }
            for _ in 0..count {
                let xi = random_bi_word(&mut r, 3);
                let h = uniformly_homogeneous_bi_with(&xi, 2, &cfg.types)?;
                let ok = verify_homogeneous_bi(&xi, &h, 2, &cfg.types)?;
                t.check(ok, || format!("{xi}: {h:?} fails"));
            }
            // rank k + 2 types decide the letter at k; ranks above 3 are out of reach
            for _ in 0..if q { 2 } else { 5 } {
                let a = random_up_word(&mut r, 3, 3);
                let rep = type_function_up(a.clone())(2)?;
                let w = rep.x.concat(&rep.y);
                t.check(w.letter(0) == a.letter_at(0), || format!("{a}: ({}, {}) gives the wrong first letter", rep.x, rep.y));
            }
        }
        _ => return Err(Error::invalid(format!("unknown suite `{name}`"))),
    }
    Ok(t.finish(name))
}

/// A random word and a recut, shifted copy of it, or an unrelated word.
fn shifted_pair(r: &mut impl Rng) -> (UpBiWord, UpBiWord) {
    let a = random_bi_word(r, 3);
    if r.gen_bool(0.25) {
        return (a, random_bi_word(r, 3));
    }
    let p = r.gen_range(-8..=8);
    let mut b = a.shift(p);
    // re-present the same word with a longer middle part
    let (extra_l, extra_r) = (r.gen_range(0..2), r.gen_range(0..2));
    let y = b.x.pow(extra_l).concat(&b.y).concat(&b.z.pow(extra_r));
    b = UpBiWord { start: b.start - (b.x.len() * extra_l) as i64, y, ..b };
    debug_assert!(equal_bi(&b, &a.shift(p)));
    (a, b)
}

fn fxhash(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3))
}

/// Runs the named suites, or all of them.
pub fn run_suites(names: &[String], cfg: &SelftestConfig) -> Result<Vec<SuiteReport>> {
    let chosen: Vec<&str> = if names.is_empty() { SUITES.iter().map(|s| s.0).collect() } else { names.iter().map(String::as_str).collect() };
    chosen.into_iter().map(|n| run_suite(n, cfg)).collect()
}
