//! Model checking on presented words, the gap-predicate decider, indicators
//! of recurrence and the theory dispatch.
//!
//! Factors are the nonempty infixes `α[i, j]` with `i ≤ j`.

use std::fmt;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::automata::{factor_automaton_up, lasso, Dfa};
use crate::compiler::{compile, compile_finite, compile_omega, Mode};
use crate::formula::{self, fold_to_omega, macro_back, relativize, reverse_formula, Formula};
use crate::types::{representative_bi_with, unary_classify_with, TypeConfig, UnaryClassification};
use crate::words::{fold_word, Certificate, FiniteWord, GapPredicateWord, UpBiWord, UpOmegaWord};
use crate::{Error, Result};

fn require_sentence(phi: &Formula) -> Result<()> {
    match phi.free_vars().into_iter().next() {
        Some(v) => Err(Error::Unbound(v)),
        None => Ok(()),
    }
}

fn require_binary(phi: &Formula) -> Result<()> {
    if phi.max_track().unwrap_or(0) > 0 {
        return Err(Error::AlphabetMismatch(1, phi.max_track().unwrap() + 1));
    }
    Ok(())
}

/// `w ⊨ φ`.
pub fn decide_finite(w: &FiniteWord, phi: &Formula) -> Result<bool> {
    require_sentence(phi)?;
    compile_finite(phi)?.accepts(w, &formula::Valuation::new())
}

/// `u v^ω ⊨ φ`.
pub fn decide_up(a: &UpOmegaWord, phi: &Formula) -> Result<bool> {
    require_sentence(phi)?;
    compile_omega(phi)?.accepts_word(a)
}

/// `x^{ω*} y z^ω ⊨ φ`, by folding both the word and the sentence onto ω.
pub fn decide_bi(xi: &UpBiWord, phi: &Formula) -> Result<bool> {
    require_sentence(phi)?;
    require_binary(phi)?;
    let folded = fold_to_omega(phi)?;
    let c = compile(&folded, Mode::Omega, 2)?;
    let w = fold_word(xi);
    c.accepts_up(w.u.letters(), w.v.letters(), &formula::Valuation::new())
}

/// `decide_bi` on the lasso word of the rank-`qr(φ)` representative of `ξ`.
pub fn decide_bi_via_representative(xi: &UpBiWord, phi: &Formula, cfg: &TypeConfig) -> Result<bool> {
    let r = representative_bi_with(xi, phi.qr(), cfg)?;
    decide_bi(&r.word(), phi)
}

/// Bounds for certificate search and the rank limit for the type route.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapConfig {
    pub max_n0: u64,
    pub max_q: u64,
    /// Validation window `R`: classes are compared on `n0 ≤ n < n0 + q·R`.
    pub window: u64,
    /// Sentences of higher rank classify gaps through the compiled automaton.
    pub max_type_rank: usize,
}

impl Default for GapConfig {
    fn default() -> Self {
        GapConfig { max_n0: 64, max_q: 8, window: 4, max_type_rank: 2 }
    }
}

/// How `0^g` is reduced to a canonical length.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GapClassifier {
    /// `≡_k` classes of unary words.
    Types(UnaryClassification),
    /// Powers of the letter `0` in the transition monoid of the sentence's
    /// lasso automaton; threshold `t` and period `p`.
    Automaton { t: u64, p: u64 },
}

impl GapClassifier {
    fn tp(&self) -> (u64, u64) {
        match *self {
            GapClassifier::Types(c) => (c.t, c.p),
            GapClassifier::Automaton { t, p } => (t, p),
        }
    }

    /// Canonical length `r` with `0^g` and `0^r` interchangeable.
    pub fn reduce(&self, g: &BigUint) -> u64 {
        let (t, p) = self.tp();
        match g.to_u64() {
            Some(g) if g < t => g,
            _ => t + ((g - t) % p).to_u64().unwrap(),
        }
    }

    pub fn for_rank(k: usize, types: &TypeConfig) -> Result<GapClassifier> {
        Ok(GapClassifier::Types(unary_classify_with(k, types)?))
    }

    /// Classifier read off the lasso DFA of `φ`.
    pub fn for_sentence(phi: &Formula) -> Result<GapClassifier> {
        Ok(GapClassifier::for_dfa(&compile_omega(phi)?.dfa))
    }

    /// Threshold and period of the powers of the letter `0` acting on `d`.
    pub fn for_dfa(d: &Dfa) -> GapClassifier {
        let step = |f: &Vec<u32>| f.iter().map(|&q| d.next(q, 0)).collect::<Vec<u32>>();
        let mut seen = std::collections::HashMap::new();
        let mut f: Vec<u32> = (0..d.num_states() as u32).collect();
        for n in 0u64.. {
            if let Some(&i) = seen.get(&f) {
                return GapClassifier::Automaton { t: i, p: n - i };
            }
            seen.insert(f.clone(), n);
            f = step(&f);
        }
        unreachable!()
    }
}

/// The lasso word that replaces a gap word for one classifier.
#[derive(Clone, Debug, Serialize)]
pub struct NormalForm {
    pub classifier: GapClassifier,
    pub certificate: Certificate,
    pub word: UpOmegaWord,
}

/// Checks `class(g(n)) = class(g(n+q))` on the validation window.
pub fn validate_certificate(g: &GapPredicateWord, c: Certificate, cls: &GapClassifier, cfg: &GapConfig) -> Result<()> {
    if c.q == 0 {
        return Err(Error::Certificate("period q must be positive".into()));
    }
    for n in c.n0..c.n0 + c.q * cfg.window {
        if cls.reduce(&g.gap(n)) != cls.reduce(&g.gap(n + c.q)) {
            return Err(Error::Certificate(format!(
                "gap classes at {n} and {} differ for `{}`",
                n + c.q,
                g.name()
            )));
        }
    }
    Ok(())
}

/// Least `(n0, q)` in lexicographic order passing [`validate_certificate`].
pub fn find_certificate(g: &GapPredicateWord, cls: &GapClassifier, cfg: &GapConfig) -> Result<Certificate> {
    let classes: Vec<u64> =
        (0..=cfg.max_n0 + cfg.max_q * (cfg.window + 1)).map(|n| cls.reduce(&g.gap(n))).collect();
    for n0 in 0..=cfg.max_n0 {
        for q in 1..=cfg.max_q {
            if (n0..n0 + q * cfg.window).all(|n| classes[n as usize] == classes[(n + q) as usize]) {
                return Ok(Certificate { n0, q });
            }
        }
    }
    Err(Error::Exhausted(format!(
        "no certificate for `{}` with n0 ≤ {} and q ≤ {}",
        g.name(),
        cfg.max_n0,
        cfg.max_q
    )))
}

fn blocks(g: &GapPredicateWord, cls: &GapClassifier, from: u64, to: u64) -> FiniteWord {
    let mut out = Vec::new();
    for n in from..to {
        out.push(1);
        out.extend(std::iter::repeat(0).take(cls.reduce(&g.gap(n)) as usize));
    }
    FiniteWord(out)
}

/// Normal form for a given classifier; a certificate on `g` is validated,
/// otherwise one is searched for.
pub fn normal_form_with(g: &GapPredicateWord, cls: GapClassifier, cfg: &GapConfig) -> Result<NormalForm> {
    let cert = match g.certificate {
        Some(c) => {
            validate_certificate(g, c, &cls, cfg)?;
            c
        }
        None => find_certificate(g, &cls, cfg)?,
    };
    // every gap is replaced by its canonical length, including those in u
    let word = UpOmegaWord { u: blocks(g, &cls, 0, cert.n0), v: blocks(g, &cls, cert.n0, cert.n0 + cert.q) };
    Ok(NormalForm { classifier: cls, certificate: cert, word })
}

/// Normal form of `g` for rank `k` through the `≡_k` classes of unary words.
pub fn gap_normal_form(g: &GapPredicateWord, k: usize, cfg: &GapConfig) -> Result<NormalForm> {
    normal_form_with(g, GapClassifier::for_rank(k, &TypeConfig::default())?, cfg)
}

/// Verdict of [`decide_gap_with`] with the data that produced it.
#[derive(Clone, Debug, Serialize)]
pub struct GapVerdict {
    pub value: bool,
    pub rank: usize,
    pub normal_form: NormalForm,
}

pub fn decide_gap(g: &GapPredicateWord, phi: &Formula) -> Result<bool> {
    Ok(decide_gap_with(g, phi, &GapConfig::default())?.value)
}

/// Replaces every gap by a canonical length of the same class and decides
/// the resulting lasso word. Sentences of rank at most `max_type_rank` use
/// unary `≡_k` classes; others use the sentence's own automaton.
pub fn decide_gap_with(g: &GapPredicateWord, phi: &Formula, cfg: &GapConfig) -> Result<GapVerdict> {
    require_sentence(phi)?;
    require_binary(phi)?;
    let k = phi.qr();
    let cls = if k <= cfg.max_type_rank {
        GapClassifier::for_rank(k, &TypeConfig::default())?
    } else {
        GapClassifier::for_sentence(phi)?
    };
    let nf = normal_form_with(g, cls, cfg)?;
    Ok(GapVerdict { value: decide_up(&nf.word, phi)?, rank: k, normal_form: nf })
}

/// Whether some factor of the gap word satisfies `ψ`, i.e. the truth of
/// `∃x, y: x ≤ y ∧ ψ_{x,y}`. Gaps are classified by the powers of `0` in a
/// DFA for words containing a satisfying factor; this avoids the lasso
/// automaton of the existential sentence, which grows quadratically in the
/// moduli of its counting atoms.
pub fn decide_gap_factor(g: &GapPredicateWord, psi: &Formula, cfg: &GapConfig) -> Result<GapVerdict> {
    let l = factor_language(psi)?;
    let e = contains_factor_dfa(&l);
    let cls = GapClassifier::for_dfa(&e);
    let nf = normal_form_with(g, cls, cfg)?;
    Ok(GapVerdict { value: meets_factors(&l, &nf.word)?.is_some(), rank: psi.qr(), normal_form: nf })
}

/// DFA of the words having a factor in `L(l)`; acceptance is absorbing.
fn contains_factor_dfa(l: &Dfa) -> Dfa {
    use std::collections::{BTreeSet, HashMap};
    let mut ids: HashMap<Option<BTreeSet<u32>>, u32> = HashMap::new();
    let mut states: Vec<Option<BTreeSet<u32>>> = Vec::new();
    let mut trans: Vec<u32> = Vec::new();
    let start = Some(BTreeSet::new());
    ids.insert(start.clone(), 0);
    states.push(start);
    let mut i = 0;
    while i < states.len() {
        for a in 0..2u32 {
            let next = match &states[i] {
                None => None,
                Some(set) => {
                    let moved: BTreeSet<u32> =
                        set.iter().copied().chain(std::iter::once(l.init())).map(|q| l.next(q, a)).collect();
                    if moved.iter().any(|&q| l.is_accepting(q)) {
                        None
                    } else {
                        Some(moved)
                    }
                }
            };
            let id = *ids.entry(next.clone()).or_insert_with(|| {
                states.push(next);
                states.len() as u32 - 1
            });
            trans.push(id);
        }
        i += 1;
    }
    let acc = states.iter().map(Option::is_none).collect();
    Dfa::from_fn(1, false, states.len(), 0, acc, |q, a| trans[q as usize * 2 + a as usize]).minimize()
}

/// Two consecutive ones at `x < y` whose gap `y - x - 1` is divisible by
/// `4^a` but not by `2·4^a`. On `α_e` this holds iff `a ∈ W`.
pub fn two_adic_gap_sentence(a: u32) -> Result<Formula> {
    use formula::*;
    let m = 4u64.checked_pow(a).filter(|m| *m <= u64::MAX / 2).ok_or_else(|| Error::invalid("modulus overflows"))?;
    let quiet = forall("z", implies(and(lt("x", "z"), lt("z", "y")), not(letter("z"))));
    let gap = exists("s", and_all(vec![macro_succ("x", "s"), cong(m, "s", "y")?, not(cong(2 * m, "s", "y")?)]));
    let body = and_all(vec![letter("x"), letter("y"), lt("x", "y"), quiet, gap]);
    Ok(exists("x", exists("y", body)).canonicalize())
}

/// Value of an indicator of recurrence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Indicator {
    /// No factor starting at or after this position satisfies the sentence.
    At(i64),
    /// Satisfying factors start arbitrarily far out.
    Top,
    /// No factor satisfies the sentence at all (bi-infinite words only).
    Nowhere,
}

/// Value of a weak indicator of recurrence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WeakIndicator {
    Zero,
    One,
    Top,
}

impl fmt::Display for Indicator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Indicator::At(n) => write!(f, "{n}"),
            Indicator::Top => write!(f, "top"),
            Indicator::Nowhere => write!(f, "nowhere"),
        }
    }
}

impl fmt::Display for WeakIndicator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WeakIndicator::Zero => "0",
            WeakIndicator::One => "1",
            WeakIndicator::Top => "top",
        })
    }
}

/// DFA of the nonempty words satisfying the sentence `φ`.
pub fn factor_language(phi: &Formula) -> Result<Dfa> {
    require_sentence(phi)?;
    require_binary(phi)?;
    let d = compile_finite(phi)?.dfa;
    let nonempty = Dfa::from_fn(1, false, 2, 0, vec![false, true], |_, _| 1);
    Ok(d.intersect(&nonempty)?.minimize())
}

/// A factor satisfying the sentence, for reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub start: i64,
    pub factor: FiniteWord,
}

/// Indicator value with a witness: for `At(n)` with `n > 0` a satisfying
/// factor starting at `n - 1`, for `Top` one inside the loop.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndicatorReport {
    pub value: Indicator,
    pub witness: Option<Witness>,
}

fn meets_factors(l: &Dfa, a: &UpOmegaWord) -> Result<Option<Vec<u32>>> {
    Ok(factor_automaton_up(a)?.intersect(l)?.shortest_accepted())
}

pub fn weak_indicator_up(a: &UpOmegaWord, phi: &Formula) -> Result<WeakIndicator> {
    let l = factor_language(phi)?;
    if meets_factors(&l, &UpOmegaWord { u: FiniteWord::empty(), v: a.v.clone() })?.is_some() {
        return Ok(WeakIndicator::Top);
    }
    Ok(if meets_factors(&l, a)?.is_some() { WeakIndicator::One } else { WeakIndicator::Zero })
}

pub fn indicator_up(a: &UpOmegaWord, phi: &Formula) -> Result<Indicator> {
    Ok(indicator_up_report(a, phi)?.value)
}

/// Least `n` with no satisfying factor in `α[n, ∞)`; tails from `|u| + |v|`
/// on repeat, so `n` is searched in `0..=|u|+|v|`.
pub fn indicator_up_report(a: &UpOmegaWord, phi: &Formula) -> Result<IndicatorReport> {
    let l = factor_language(phi)?;
    let stable = a.u.len() + a.v.len();
    if let Some(w) = meets_factors(&l, &a.tail(stable))? {
        let factor = FiniteWord(w.iter().map(|&x| x as u8).collect());
        let start = (stable..stable + a.v.len()).find(|&s| a.factor(s, s + factor.len()) == factor);
        return Ok(IndicatorReport {
            value: Indicator::Top,
            witness: start.map(|s| Witness { start: s as i64, factor }),
        });
    }
    for n in 0..=stable {
        if meets_factors(&l, &a.tail(n))?.is_none() {
            let witness = if n == 0 { None } else { first_factor_at(&l, |i| a.letter_at(i as u64), n as i64 - 1, stable as i64, a.v.len()) };
            return Ok(IndicatorReport { value: Indicator::At(n as i64), witness });
        }
    }
    unreachable!("tails stabilize by |u| + |v|")
}

/// The shortest satisfying factor starting at `p` of a word that is
/// `period`-periodic from `periodic_from` on.
fn first_factor_at(l: &Dfa, at: impl Fn(i64) -> u8, p: i64, periodic_from: i64, period: usize) -> Option<Witness> {
    let mut q = l.init();
    let mut seen = std::collections::HashSet::new();
    let mut i = p;
    loop {
        q = l.next(q, at(i) as u32);
        i += 1;
        if l.is_accepting(q) {
            return Some(Witness { start: p, factor: FiniteWord((p..i).map(&at).collect()) });
        }
        if i >= periodic_from && !seen.insert((q, (i - periodic_from) as usize % period)) {
            return None;
        }
    }
}

/// `rec_→` for a bi-infinite word.
pub fn bi_indicator_right(xi: &UpBiWord, phi: &Formula) -> Result<IndicatorReport> {
    let l = factor_language(phi)?;
    let at = |i: i64| xi.letter_at(i);
    let (end, zl) = (xi.end(), xi.z.len());
    for p in end..end + zl as i64 {
        if let Some(w) = first_factor_at(&l, at, p, end, zl) {
            return Ok(IndicatorReport { value: Indicator::Top, witness: Some(w) });
        }
    }
    // a satisfying factor starting further left than this bound can be
    // pumped down inside the left loop to one starting inside it
    let low = xi.start - xi.x.len() as i64 * (l.num_states() as i64 + 2);
    for p in (low..end).rev() {
        if let Some(w) = first_factor_at(&l, at, p, end, zl) {
            return Ok(IndicatorReport { value: Indicator::At(p + 1), witness: Some(w) });
        }
    }
    Ok(IndicatorReport { value: Indicator::Nowhere, witness: None })
}

/// Indicator of recurrence `(rec_←, rec_→)` of a bi-infinite word.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BiIndicator {
    pub left: Indicator,
    pub right: Indicator,
}

/// `rec_←` is obtained from `rec_→` of the mirrored word and sentence.
pub fn bi_indicator(xi: &UpBiWord, phi: &Formula) -> Result<BiIndicator> {
    let right = bi_indicator_right(xi, phi)?.value;
    let left = match bi_indicator_right(&xi.reverse(), &reverse_formula(phi))?.value {
        Indicator::At(n) => Indicator::At(-n),
        v => v,
    };
    Ok(BiIndicator { left, right })
}

/// Checks the defining conditions of `(rec_←, rec_→)` on the window
/// `[lo, hi]` for factors of length at most `max_len`.
pub fn check_bi_indicator(xi: &UpBiWord, phi: &Formula, ind: &BiIndicator, lo: i64, hi: i64, max_len: usize) -> Result<bool> {
    let l = factor_language(phi)?;
    let sat = |i: i64, j: i64| l.accepts(xi.factor(i, j + 1).letters());
    let any_sat = (lo..=hi).any(|i| (i..(i + max_len as i64).min(hi + 1)).any(|j| sat(i, j)));
    let ok_right = match ind.right {
        Indicator::At(n) => (n.max(lo)..=hi).all(|i| (i..(i + max_len as i64).min(hi + 1)).all(|j| !sat(i, j))),
        Indicator::Nowhere => !any_sat,
        Indicator::Top => {
            let s = xi.end();
            (s..s + xi.z.len() as i64 * 3).any(|i| (i..i + max_len as i64).any(|j| sat(i, j)))
        }
    };
    let ok_left = match ind.left {
        Indicator::At(n) => (lo..=n.min(hi)).all(|j| ((j - max_len as i64 + 1).max(lo)..=j).all(|i| !sat(i, j))),
        Indicator::Nowhere => !any_sat,
        Indicator::Top => {
            let s = xi.start;
            (s - xi.x.len() as i64 * 3..s).any(|j| (j - max_len as i64 + 1..=j).any(|i| sat(i, j)))
        }
    };
    Ok(ok_left && ok_right)
}

/// Weak indicators of `ξ(-∞, x]^R` and `ξ[y, ∞)`.
pub fn weak_bi_indicator(xi: &UpBiWord, phi: &Formula, x: i64, y: i64) -> Result<(WeakIndicator, WeakIndicator)> {
    let right = xi.shift(y).right_half();
    let left = xi.shift(x + 1).left_half_reversed();
    Ok((weak_indicator_up(&left, phi)?, weak_indicator_up(&right, phi)?))
}

fn fresh(phi: &Formula, base: &str) -> String {
    let vars = phi.all_vars();
    (0..).map(|i| format!("{base}{i}")).find(|v| !vars.contains(v)).unwrap()
}

/// `∃x, y: x ≤ y ∧ φ_{x,y}` where `φ_{x,y}` relativizes `φ` to `[x, y]`;
/// with `n > 0` additionally `n ≤ x`, i.e. `x` has `n` predecessors.
pub fn factor_sentence(phi: &Formula, n: usize) -> Result<Formula> {
    let (x, y) = (fresh(phi, "u"), fresh(phi, "w"));
    let rel = relativize(phi, &x, &y)?;
    let mut body = formula::and(formula::le(&x, &y), rel);
    if n > 0 {
        body = formula::and(macro_back(n, &x, |_| Formula::True), body);
    }
    Ok(formula::exists(&x, formula::exists(&y, body)).canonicalize())
}

/// Upper bound on the positions tried by [`rec_from_weak`].
pub const REC_SEARCH_LIMIT: usize = 256;

/// An indicator from a weak indicator: `⊤` stays `⊤`; otherwise the least
/// `n` for which no factor satisfies the sentence "some factor starting
/// after `n` letters satisfies `φ`".
pub fn rec_from_weak(phi: &Formula, weak: impl Fn(&Formula) -> Result<WeakIndicator>) -> Result<Indicator> {
    if weak(phi)? == WeakIndicator::Top {
        return Ok(Indicator::Top);
    }
    for n in 0..=REC_SEARCH_LIMIT {
        let psi = factor_sentence(phi, n)?;
        if weak(&psi)? == WeakIndicator::Zero {
            return Ok(Indicator::At(n as i64));
        }
    }
    Err(Error::Exhausted(format!("no cutoff below {REC_SEARCH_LIMIT} positions")))
}

/// The weak indicator from an indicator and the truth of `ψ_φ` on `α`.
pub fn weak_from_rec(a: &UpOmegaWord, phi: &Formula, rec: impl Fn(&Formula) -> Result<Indicator>) -> Result<WeakIndicator> {
    if !decide_up(a, &factor_sentence(phi, 0)?)? {
        return Ok(WeakIndicator::Zero);
    }
    Ok(match rec(phi)? {
        Indicator::Top => WeakIndicator::Top,
        _ => WeakIndicator::One,
    })
}

/// A presentation handed to [`decide_theory`].
#[derive(Clone, Debug)]
pub enum Presentation {
    Bi(UpBiWord),
    /// A recurrent word known only through its factor language.
    FactorLanguage(Dfa),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Support {
    /// Every sentence can be checked.
    FullChecker,
    /// Only indicator queries are answered.
    IndicatorOnly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TheoryReport {
    pub support: Support,
    pub factor_theory_decidable: bool,
    pub summary: String,
}

/// What can be decided about a presented word.
pub fn decide_theory(p: &Presentation) -> Result<TheoryReport> {
    match p {
        Presentation::Bi(_) => Ok(TheoryReport {
            support: Support::FullChecker,
            factor_theory_decidable: true,
            summary: "decidable; checker = decide_bi".into(),
        }),
        Presentation::FactorLanguage(l) => {
            crate::biinf::check_conditions(l)?;
            Ok(TheoryReport {
                support: Support::IndicatorOnly,
                factor_theory_decidable: true,
                summary: "decidable relative to the theory of the factor language; indicator functions available \
                          (top when some factor satisfies the sentence, else nowhere); full sentence checking unsupported"
                    .into(),
            })
        }
    }
}

/// The indicator of a recurrent word with factor language `L`: the same
/// value on both sides.
pub fn recurrent_indicator(l: &Dfa, phi: &Formula) -> Result<Indicator> {
    let d = factor_language(phi)?;
    Ok(if d.intersect(l)?.is_empty() { Indicator::Nowhere } else { Indicator::Top })
}

/// Whether the lasso DFA `d` of a sentence accepts `u v^ω`, for callers
/// holding a compiled automaton.
pub fn accepts_lasso(d: &Dfa, a: &UpOmegaWord) -> Result<bool> {
    let u: Vec<u32> = a.u.letters().iter().map(|&x| x as u32).collect();
    let v: Vec<u32> = a.v.letters().iter().map(|&x| x as u32).collect();
    lasso::accepts_up(d, &u, &v)
}
