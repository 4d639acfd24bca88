//! Bi-infinite words: recurrence, periods, shift- and MSO-equivalence, the
//! size of MSO-equivalence classes, determining words, and the stream
//! constructions (factor-language realizer, rich words, oracle embedding).

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::automata::{extension_check, factor_automaton_bi, factor_automaton_up, factorial_check, Dfa, TransitionMonoid};
use crate::decide::Presentation;
use crate::formula::{self, Formula};
use crate::words::{equal_bi, FactorEnumeration, FiniteWord, Language, OracleBits, Side, UpBiWord, UpOmegaWord};
use crate::{Error, Result};

fn nonempty_words() -> Dfa {
    Dfa::from_fn(1, false, 2, 0, vec![false, true], |_, _| 1)
}

fn require_binary(l: &Dfa) -> Result<()> {
    if l.width() != 1 || l.has_dollar() {
        return Err(Error::AlphabetMismatch(1, l.width()));
    }
    Ok(())
}

/// Checks that `L` is the factor set of some recurrent bi-infinite word:
/// (a) `L` has a nonempty word, (b) `L` is factorial, (c) any `u, w ∈ L`
/// have some `v` with `uvw ∈ L`.
pub fn check_conditions(l: &Dfa) -> Result<()> {
    require_binary(l)?;
    if l.intersect(&nonempty_words())?.is_empty() {
        return Err(Error::Condition('a', "the language has no nonempty word".into()));
    }
    if !factorial_check(l)? {
        return Err(Error::Condition('b', "the language is not closed under factors".into()));
    }
    if !extension_check(l)? {
        return Err(Error::Condition('c', "some u, w in the language admit no v with uvw in it".into()));
    }
    Ok(())
}

/// Bounds for checking (a), (b), (c) on languages given by a predicate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionBounds {
    /// Words up to this length are checked for (a) and (b).
    pub max_len: usize,
    /// Pairs `u, w` up to this length are checked for (c).
    pub max_ext_len: usize,
    /// Longest connector `v` tried for (c).
    pub max_gap: usize,
}

impl Default for ConditionBounds {
    fn default() -> Self {
        ConditionBounds { max_len: 8, max_ext_len: 3, max_gap: 8 }
    }
}

/// [`check_conditions`] for any language; predicate languages are checked
/// up to the given bounds only.
pub fn check_conditions_language(l: &Language, b: &ConditionBounds) -> Result<()> {
    let member = match l {
        Language::Regular(d) => return check_conditions(d),
        Language::Predicate { member, .. } => member,
    };
    let words: Vec<FiniteWord> = FiniteWord::all_up_to(b.max_len).filter(|w| member(w)).collect();
    if !words.iter().any(|w| !w.is_empty()) {
        return Err(Error::Condition('a', format!("no nonempty word up to length {}", b.max_len)));
    }
    for w in words.iter().filter(|w| !w.is_empty()) {
        for f in [w.slice(1, w.len()), w.slice(0, w.len() - 1)] {
            if !member(&f) {
                return Err(Error::Condition('b', format!("{w} is in the language but its factor {f} is not")));
            }
        }
    }
    let short: Vec<&FiniteWord> = words.iter().filter(|w| w.len() <= b.max_ext_len).collect();
    for u in &short {
        for w in &short {
            let found = FiniteWord::all_up_to(b.max_gap).any(|v| member(&u.concat(&v).concat(w)));
            if !found {
                return Err(Error::Condition('c', format!("no connector of length ≤ {} joins {u} and {w}", b.max_gap)));
            }
        }
    }
    Ok(())
}

fn loop_factors(v: &FiniteWord) -> Result<Dfa> {
    factor_automaton_up(&UpOmegaWord::new(FiniteWord::empty(), v.clone())?)
}

/// Every factor occurs arbitrarily far out on both sides, i.e. `F(ξ)` is
/// contained in the factor sets of `x^ω` and of `z^ω`.
pub fn is_recurrent(xi: &UpBiWord) -> Result<bool> {
    let f = factor_automaton_bi(xi)?;
    Ok(f.included_in(&loop_factors(&xi.x)?)? && f.included_in(&loop_factors(&xi.z)?)?)
}

/// Least `p > 0` with `ξ(n + p) = ξ(n)` for all `n`. A period of `ξ` is a
/// period of the left loop, so it divides `|x|` once `|x|` itself works.
pub fn period(xi: &UpBiWord) -> Option<u64> {
    let n = xi.x.len() as i64;
    if !equal_bi(&xi.shift(n), xi) {
        return None;
    }
    (1..=n).filter(|d| n % d == 0).find(|&d| equal_bi(&xi.shift(d), xi)).map(|d| d as u64)
}

/// Range searched by [`shift_equivalent`].
pub fn shift_bound(a: &UpBiWord, b: &UpBiWord) -> i64 {
    (a.y.len() + b.y.len() + a.x.len().lcm(&b.x.len()) + a.z.len().lcm(&b.z.len())) as i64
        + a.start.abs()
        + b.start.abs()
}

/// Some `p` of least absolute value with `ξ(n + p) = ζ(n)` for all `n`.
pub fn shift_equivalent(a: &UpBiWord, b: &UpBiWord) -> Option<i64> {
    (0..=shift_bound(a, b)).flat_map(|m| [m, -m]).find(|&p| equal_bi(&a.shift(p), b))
}

fn factor_dfa(p: &Presentation) -> Result<Dfa> {
    match p {
        Presentation::Bi(xi) => factor_automaton_bi(xi),
        Presentation::FactorLanguage(l) => {
            check_conditions(l)?;
            Ok(l.minimize())
        }
    }
}

fn recurrent(p: &Presentation) -> Result<bool> {
    match p {
        Presentation::Bi(xi) => is_recurrent(xi),
        Presentation::FactorLanguage(_) => Ok(true),
    }
}

/// Shift-equivalent, or both recurrent with the same factors.
pub fn mso_equivalent(a: &Presentation, b: &Presentation) -> Result<bool> {
    if let (Presentation::Bi(x), Presentation::Bi(y)) = (a, b) {
        if shift_equivalent(x, y).is_some() {
            return Ok(true);
        }
    }
    if !(recurrent(a)? && recurrent(b)?) {
        return Ok(false);
    }
    factor_dfa(a)?.equivalent(&factor_dfa(b)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    Periodic(u64),
    NonRecurrent,
    RecurrentNonPeriodic,
}

/// Number of words MSO-equivalent to a given one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Cardinality {
    Finite(u64),
    Aleph0,
    Continuum,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassWitness {
    /// One period of the word, read from position 0.
    Period { period: u64, word: FiniteWord },
    /// A factor that does not recur on the named side.
    MissingFactor { factor: FiniteWord, side: String },
    /// A determining word of a periodic factor language.
    Determining { word: FiniteWord, period: u64 },
    /// The factor language, by size, when no determining word exists.
    FactorLanguage { states: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivalenceClassReport {
    pub classification: Classification,
    pub cardinality: Cardinality,
    pub witness: ClassWitness,
}

impl fmt::Display for EquivalenceClassReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.classification {
            Classification::Periodic(p) => write!(f, "periodic with period {p}; class cardinality {p}"),
            Classification::NonRecurrent => write!(f, "non-recurrent; class cardinality aleph0"),
            Classification::RecurrentNonPeriodic => write!(f, "recurrent non-periodic; class cardinality 2^aleph0"),
        }
    }
}

fn missing_factor(f: &Dfa, side: &FiniteWord) -> Result<Option<FiniteWord>> {
    let w = f.intersect(&loop_factors(side)?.complement())?.shortest_accepted();
    Ok(w.map(|w| FiniteWord(w.into_iter().map(|a| a as u8).collect())))
}

/// Number of words of length `n` in `L(d)`.
fn count_words(d: &Dfa, n: usize) -> u128 {
    let mut ways = vec![0u128; d.num_states()];
    ways[d.init() as usize] = 1;
    for _ in 0..n {
        let mut next = vec![0u128; d.num_states()];
        for (q, &c) in ways.iter().enumerate() {
            if c > 0 {
                for a in 0..2 {
                    let t = d.next(q as u32, a) as usize;
                    next[t] = next[t].saturating_add(c);
                }
            }
        }
        ways = next;
    }
    (0..d.num_states()).filter(|&q| d.is_accepting(q as u32)).map(|q| ways[q]).fold(0, u128::saturating_add)
}

/// The period of the periodic word with factor language `L`: a periodic
/// word of least period `p` has exactly `p` factors of each length `n ≥ p`.
fn language_period(l: &Dfa) -> Result<u64> {
    let n = 4 * l.num_states() + 4;
    let (a, b) = (count_words(l, n), count_words(l, n + 1));
    if a != b || a == 0 || a > n as u128 {
        return Err(Error::invalid("factor counts do not settle to a period"));
    }
    Ok(a as u64)
}

/// Position in the trichotomy periodic / non-recurrent / recurrent non-periodic.
pub fn classify(p: &Presentation) -> Result<EquivalenceClassReport> {
    match p {
        Presentation::Bi(xi) => {
            if let Some(per) = period(xi) {
                return Ok(EquivalenceClassReport {
                    classification: Classification::Periodic(per),
                    cardinality: Cardinality::Finite(per),
                    witness: ClassWitness::Period { period: per, word: xi.factor(0, per as i64) },
                });
            }
            let f = factor_automaton_bi(xi)?;
            for (side, lp) in [("left", &xi.x), ("right", &xi.z)] {
                if let Some(factor) = missing_factor(&f, lp)? {
                    return Ok(EquivalenceClassReport {
                        classification: Classification::NonRecurrent,
                        cardinality: Cardinality::Aleph0,
                        witness: ClassWitness::MissingFactor { factor, side: side.into() },
                    });
                }
            }
            Err(Error::invalid(format!("{xi} is recurrent without a period, which no lasso presentation allows")))
        }
        Presentation::FactorLanguage(l) => {
            check_conditions(l)?;
            Ok(match has_determining_word(l)? {
                Some(word) => {
                    let per = language_period(l)?;
                    EquivalenceClassReport {
                        classification: Classification::Periodic(per),
                        cardinality: Cardinality::Finite(per),
                        witness: ClassWitness::Determining { word, period: per },
                    }
                }
                None => EquivalenceClassReport {
                    classification: Classification::RecurrentNonPeriodic,
                    cardinality: Cardinality::Continuum,
                    witness: ClassWitness::FactorLanguage { states: l.minimize().num_states() },
                },
            })
        }
    }
}

/// The `p` distinct shifts of a periodic word, each as `w^{ω*} w^ω`.
pub fn enumerate_class(xi: &UpBiWord) -> Result<Vec<UpBiWord>> {
    let p = period(xi).ok_or_else(|| Error::invalid(format!("{xi} is not periodic")))? as i64;
    (0..p)
        .map(|i| {
            let w = xi.factor(i, i + p);
            UpBiWord::new(w.clone(), FiniteWord::empty(), w)
        })
        .collect()
}

/// Sides on which a word extends uniquely.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Determining {
    Left,
    Right,
    Both,
    Neither,
}

impl fmt::Display for Determining {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Determining::Left => "left",
            Determining::Right => "right",
            Determining::Both => "both",
            Determining::Neither => "neither",
        })
    }
}

fn require_factorial(l: &Dfa) -> Result<()> {
    require_binary(l)?;
    if !factorial_check(l)? {
        return Err(Error::Condition('b', "the language is not closed under factors".into()));
    }
    Ok(())
}

fn reversed(l: &Dfa) -> Result<Dfa> {
    Ok(l.reverse().determinize()?.minimize())
}

/// In a factorial language the extensions of `u` are the paths from
/// `δ(q₀, u)` through accepting states, so exactly one per length means a
/// single accepting successor at every step.
fn extends_uniquely(l: &Dfa, mut q: u32) -> bool {
    if !l.is_accepting(q) {
        return false;
    }
    let mut seen = HashSet::new();
    while seen.insert(q) {
        let next: Vec<u32> = (0..2).map(|a| l.next(q, a)).filter(|&t| l.is_accepting(t)).collect();
        if next.len() != 1 {
            return false;
        }
        q = next[0];
    }
    true
}

fn run_word(l: &Dfa, w: impl IntoIterator<Item = u8>) -> u32 {
    l.run(l.init(), w.into_iter().map(u32::from))
}

fn sides(right: bool, left: bool) -> Determining {
    match (left, right) {
        (true, true) => Determining::Both,
        (true, false) => Determining::Left,
        (false, true) => Determining::Right,
        (false, false) => Determining::Neither,
    }
}

pub fn determining_check(l: &Dfa, u: &FiniteWord) -> Result<Determining> {
    require_factorial(l)?;
    let lr = reversed(l)?;
    let right = extends_uniquely(l, run_word(l, u.letters().iter().copied()));
    let left = extends_uniquely(&lr, run_word(&lr, u.letters().iter().rev().copied()));
    Ok(sides(right, left))
}

/// A shortest determining word of `L`, if any. Whether `u` is determining
/// only depends on the map `q ↦ δ(q, u)`, so one word per element of the
/// transition monoid is tried.
pub fn has_determining_word(l: &Dfa) -> Result<Option<FiniteWord>> {
    require_factorial(l)?;
    let l = l.minimize();
    let lr = reversed(&l)?;
    let m = TransitionMonoid::of(&l)?;
    for i in 0..m.len() {
        if !extends_uniquely(&l, m.element(i)[l.init() as usize]) {
            continue;
        }
        let w: Vec<u8> = m.word(i).iter().map(|&a| a as u8).collect();
        if extends_uniquely(&lr, run_word(&lr, w.iter().rev().copied())) {
            return Ok(Some(FiniteWord(w)));
        }
    }
    Ok(None)
}

/// Limits for the searches inside the stream constructions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Longest middle part tried for predicate languages.
    pub max_gap: usize,
    /// Indices scanned in explicit enumerations.
    pub budget: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { max_gap: 12, budget: 100_000 }
    }
}

/// One finite approximation `z_s` of a bi-infinite word; `origin` is the
/// index in `word` of position 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StreamItem {
    pub step: usize,
    pub origin: usize,
    pub word: FiniteWord,
}

impl StreamItem {
    pub fn right_half(&self) -> FiniteWord {
        self.word.slice(self.origin, self.word.len())
    }

    pub fn left_half(&self) -> FiniteWord {
        self.word.slice(0, self.origin)
    }

    /// `z<step> @<origin> <word>`.
    pub fn line(&self) -> String {
        format!("z{} @{} {}", self.step, self.origin, self.word)
    }

    pub fn parse_line(line: &str) -> Result<StreamItem> {
        let bad = || Error::invalid(format!("bad stream line `{line}`"));
        let mut parts = line.split_whitespace();
        let step = parts.next().and_then(|s| s.strip_prefix('z')).and_then(|s| s.parse().ok()).ok_or_else(bad)?;
        let origin = parts.next().and_then(|s| s.strip_prefix('@')).and_then(|s| s.parse().ok()).ok_or_else(bad)?;
        let word = FiniteWord::parse(parts.next().ok_or_else(bad)?)?;
        if origin > word.len() || parts.next().is_some() {
            return Err(bad());
        }
        Ok(StreamItem { step, origin, word })
    }
}

/// Parses a stream file, one item per nonempty line.
pub fn parse_stream(text: &str) -> Result<Vec<StreamItem>> {
    text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).map(StreamItem::parse_line).collect()
}

/// The length-lex least word of `L` containing all of `words` as factors,
/// joined greedily left to right with shortest connectors.
pub fn join_words(l: &Language, words: &[FiniteWord], cfg: &SearchConfig) -> Result<FiniteWord> {
    let ll = FactorEnumeration::length_lex(l.clone());
    let mut cur = match words.first() {
        Some(w) => w.clone(),
        None => return Ok(FiniteWord::empty()),
    };
    for w in &words[1..] {
        if !w.is_factor_of(&cur) {
            cur = ll.first_matching(&cur, w, cfg.max_gap, cfg.budget)?;
        }
    }
    Ok(cur)
}

/// A word of `L` containing every word of `L` of length `n`.
pub fn tour(l: &Language, n: usize, cfg: &SearchConfig) -> Result<FiniteWord> {
    let words: Vec<FiniteWord> = FiniteWord::all_of_length(n).filter(|w| l.contains(w)).collect();
    join_words(l, &words, cfg)
}

/// Length-lex order on `L` with `tour(L, 2)`, …, `tour(L, tours + 1)`
/// inserted at the odd indices, so short words surface in early steps.
pub fn touring_enumeration(l: Language, tours: usize, cfg: &SearchConfig) -> Result<FactorEnumeration> {
    let extras = (2..tours + 2).map(|n| tour(&l, n, cfg)).collect::<Result<Vec<_>>>()?;
    Ok(FactorEnumeration::dovetail(l, extras))
}

/// The words `w_i` of the realizer: `w_0 = f(0)`, and `w_i = f(k)` where
/// `f(j) = u_i x_i w_{i-1}` has least `j` and `f(k) = u_i x_i w_{i-1} y_i u_i`
/// has least `k`, for `u_i = f(i)`. Position 0 sits at the start of `u_0`.
pub struct RealizerStream {
    f: FactorEnumeration,
    lang: Language,
    cfg: SearchConfig,
    step: usize,
    current: Option<(FiniteWord, usize)>,
    failed: bool,
}

impl RealizerStream {
    pub fn new(f: FactorEnumeration, lang: Language, cfg: SearchConfig) -> Self {
        RealizerStream { f, lang, cfg, step: 0, current: None, failed: false }
    }

    pub fn language(&self) -> &Language {
        &self.lang
    }

    pub fn enumeration(&self) -> &FactorEnumeration {
        &self.f
    }

    fn advance(&mut self) -> Result<StreamItem> {
        let i = self.step;
        let (word, origin) = match &self.current {
            None => (self.f.get(0)?, 0),
            Some((prev, off)) => {
                let u = self.f.get(i as u64)?;
                let uxw = self.f.first_matching(&u, prev, self.cfg.max_gap, self.cfg.budget)?;
                let x_len = uxw.len() - u.len() - prev.len();
                let w = self.f.first_matching(&uxw, &u, self.cfg.max_gap, self.cfg.budget)?;
                (w, off + u.len() + x_len)
            }
        };
        if !self.lang.contains(&word) {
            return Err(Error::invalid(format!("step {i} produced {word}, which is not in the language")));
        }
        self.current = Some((word.clone(), origin));
        self.step += 1;
        Ok(StreamItem { step: i, origin, word })
    }
}

impl Iterator for RealizerStream {
    type Item = Result<StreamItem>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        let r = self.advance();
        self.failed = r.is_err();
        Some(r)
    }
}

/// Tours inserted by [`realize_factors`].
pub const REALIZER_TOURS: usize = 3;

/// A recurrent word with factor set `L(l)`.
pub fn realize_factors(l: &Dfa) -> Result<RealizerStream> {
    realize_language(&Language::Regular(l.clone()), &ConditionBounds::default(), &SearchConfig::default())
}

pub fn realize_language(l: &Language, bounds: &ConditionBounds, cfg: &SearchConfig) -> Result<RealizerStream> {
    check_conditions_language(l, bounds)?;
    let f = touring_enumeration(l.clone(), REALIZER_TOURS, cfg)?;
    Ok(RealizerStream::new(f, l.clone(), *cfg))
}

type GapMap = Arc<dyn Fn(u64) -> u64 + Send + Sync>;

/// Zero-block lengths between consecutive ones.
fn zero_runs(w: &FiniteWord) -> Vec<usize> {
    let ones: Vec<usize> = (0..w.len()).filter(|&i| w.letter(i) == 1).collect();
    ones.windows(2).map(|p| p[1] - p[0] - 1).collect()
}

/// The words in which every factor `1 0^{2i+1} 1 0^{2j} 1` has `j = f(i)`.
/// Its factor theory is decidable while the word realizing it encodes the
/// range of `f`.
pub fn pair_constraint_language(name: &str, f: GapMap) -> Language {
    Language::predicate(format!("pairs({name})"), move |w| {
        zero_runs(w).windows(2).all(|r| !(r[0] % 2 == 1 && r[1] % 2 == 0) || (r[1] / 2) as u64 == f(((r[0] - 1) / 2) as u64))
    })
}

/// `1 0^{2i+1} 1 0^{2f(i)} 1`.
pub fn pair_witness(f: &GapMap, i: u64) -> FiniteWord {
    let mut w = vec![1];
    w.extend(std::iter::repeat(0).take(2 * i as usize + 1));
    w.push(1);
    w.extend(std::iter::repeat(0).take(2 * f(i) as usize));
    w.push(1);
    FiniteWord(w)
}

/// Some factor lies in `1(00)*01 0^{2j} 1`: ones at `x`, `y` and `y + 2j + 1`
/// with an odd gap `y - x - 1` and no other one in between.
pub fn pair_sentence(j: usize) -> Formula {
    use formula::*;
    let between = |c: &str| {
        and(
            letter(c),
            forall("z", implies(and_all(vec![lt("x", "z"), lt("z", c), letter("z")]), eq("z", "y"))),
        )
    };
    let odd_gap = exists("s", and(macro_succ("x", "s"), not(cong(2, "s", "y").expect("modulus 2"))));
    let body = and_all(vec![lt("x", "y"), letter("x"), letter("y"), odd_gap, macro_forward(2 * j + 1, "y", between)]);
    exists("x", exists("y", body)).canonicalize()
}

/// Enumeration of [`pair_constraint_language`] whose odd entries join a tour
/// with two witnesses: entry `k` holds `tour(k + 2)` and the witnesses for
/// `i = 2k, 2k + 1`.
pub fn pair_constraint_enumeration(l: &Language, f: &GapMap, entries: usize, cfg: &SearchConfig) -> Result<FactorEnumeration> {
    let extras = (0..entries)
        .map(|k| {
            let parts = [tour(l, k + 2, cfg)?, pair_witness(f, 2 * k as u64), pair_witness(f, 2 * k as u64 + 1)];
            join_words(l, &parts, cfg)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FactorEnumeration::dovetail(l.clone(), extras))
}

/// `g(i)`: the `i`-th binary word in length-lex order.
pub fn canonical_word(i: u64) -> FiniteWord {
    let n = 63 - (i + 1).leading_zeros() as usize;
    let r = i + 1 - (1 << n);
    FiniteWord((0..n).map(|b| ((r >> (n - 1 - b)) & 1) as u8).collect())
}

/// `z_s = g(s) ⋯ g(1) g(0) g(1) ⋯ g(s)`, position 0 at `g(0)`.
pub fn rich_word_stream() -> impl Iterator<Item = StreamItem> {
    (0usize..).map(|s| {
        let left: Vec<u8> = (1..=s as u64).rev().flat_map(|i| canonical_word(i).0).collect();
        let right: Vec<u8> = (0..=s as u64).flat_map(|i| canonical_word(i).0).collect();
        let origin = left.len();
        StreamItem { step: s, origin, word: FiniteWord([left, right].concat()) }
    })
}

/// `β_s = χ(0) g(0) ⋯ χ(s) g(s)` and `z_s = β_s^R β_s`.
pub fn interleave_with_oracle(a: &OracleBits) -> impl Iterator<Item = StreamItem> {
    let a = a.clone();
    (0usize..).map(move |s| {
        let beta: Vec<u8> = (0..=s).flat_map(|i| std::iter::once(a.contains(i) as u8).chain(canonical_word(i as u64).0)).collect();
        let left: Vec<u8> = beta.iter().rev().copied().collect();
        StreamItem { step: s, origin: beta.len(), word: FiniteWord([left, beta].concat()) }
    })
}

/// `Σ_{i<n} (1 + |g(i)|)` for `n < count`.
pub fn marker_positions(count: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(count);
    let mut p = 0;
    for i in 0..count {
        out.push(p);
        p += 1 + canonical_word(i as u64).len();
    }
    out
}

/// Reads `n` oracle bits off the right half of an interleaved word.
pub fn decode_interleaved(right: &FiniteWord, n: usize) -> Result<OracleBits> {
    marker_positions(n)
        .into_iter()
        .map(|p| {
            (p < right.len())
                .then(|| right.letter(p) == 1)
                .ok_or_else(|| Error::invalid(format!("right half too short for {n} bits")))
        })
        .collect::<Result<Vec<bool>>>()
        .map(OracleBits)
}

/// `t_s = (u_s, v_s, x_s, y_s)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Tuple {
    pub u: FiniteWord,
    pub v: FiniteWord,
    pub x: FiniteWord,
    pub y: FiniteWord,
}

/// Result of [`embed_oracle`]: the tuples, every `z_s`, and the bits used.
#[derive(Clone, Debug, Serialize)]
pub struct EmbeddingState {
    pub tuples: Vec<Tuple>,
    pub stream: Vec<StreamItem>,
    pub bits: OracleBits,
}

impl EmbeddingState {
    pub fn last(&self) -> &StreamItem {
        self.stream.last().expect("the stream always holds z_0")
    }
}

/// `z_s = w_s y_s v_s z_{s-1} u_s x_s w_s` with `w_s = f(s)`; position 0 is at
/// the start of the right block `u_0 x_0 w_0`.
#[derive(Clone)]
struct Embedder<'a> {
    f: &'a FactorEnumeration,
    cfg: &'a SearchConfig,
    tuples: Vec<Tuple>,
    z: FiniteWord,
    origin: usize,
}

fn middle(w: &FiniteWord, head: usize, tail: usize) -> FiniteWord {
    w.slice(head, w.len() - tail)
}

impl<'a> Embedder<'a> {
    fn start(f: &'a FactorEnumeration, cfg: &'a SearchConfig) -> Result<Self> {
        let w0 = f.get(0)?;
        let z = f.first_matching(&w0, &w0, cfg.max_gap, cfg.budget)?;
        let y = middle(&z, w0.len(), w0.len());
        let origin = w0.len() + y.len();
        let e = FiniteWord::empty();
        Ok(Embedder { f, cfg, tuples: vec![Tuple { u: e.clone(), v: e.clone(), x: e, y }], z, origin })
    }

    fn right(&self) -> FiniteWord {
        self.z.slice(self.origin, self.z.len())
    }

    fn item(&self) -> StreamItem {
        StreamItem { step: self.tuples.len() - 1, origin: self.origin, word: self.z.clone() }
    }

    /// Builds `t_{s+1}` and `z_{s+1}` under `s ∈ A` iff `bit`.
    fn step(&mut self, bit: bool) -> Result<()> {
        let (f, g, b) = (self.f, self.cfg.max_gap, self.cfg.budget);
        let w = f.get(self.tuples.len() as u64)?;
        let (k, l) = f.min_pair(&self.z, Side::Right, g, b)?;
        let zu = if bit { k } else { l };
        let u = zu.slice(self.z.len(), zu.len());
        let zuxw = f.first_matching(&zu, &w, g, b)?;
        let x = middle(&zuxw, zu.len(), w.len());
        let (k, l) = f.min_pair(&zuxw, Side::Left, g, b)?;
        let vz = if bit { k } else { l };
        let v = vz.slice(0, vz.len() - zuxw.len());
        let full = f.first_matching(&w, &vz, g, b)?;
        let y = middle(&full, w.len(), vz.len());
        self.origin += w.len() + y.len() + v.len();
        self.z = full;
        self.tuples.push(Tuple { u, v, x, y });
        Ok(())
    }
}

/// Runs the embedding over the enumeration `f` of a factor language; every
/// `z_s` is checked against `lang`.
pub fn embed_with(f: &FactorEnumeration, lang: &Language, a: &OracleBits, cfg: &SearchConfig) -> Result<EmbeddingState> {
    let mut e = Embedder::start(f, cfg)?;
    let mut stream = vec![e.item()];
    for s in 0..a.len() {
        e.step(a.contains(s))?;
        stream.push(e.item());
    }
    for it in &stream {
        if !lang.contains(&it.word) {
            return Err(Error::invalid(format!("z{} = {} is not in the language", it.step, it.word)));
        }
    }
    Ok(EmbeddingState { tuples: e.tuples, stream, bits: a.clone() })
}

/// Embeds `A` into a recurrent word with factor set `L(l)`, enumerated in
/// length-lex order. `L` must have no determining word, i.e. the word is
/// not periodic.
pub fn embed_oracle(l: &Dfa, a: &OracleBits, cfg: &SearchConfig) -> Result<EmbeddingState> {
    check_conditions(l)?;
    if let Some(u) = has_determining_word(l)? {
        return Err(Error::invalid(format!("{u} is determining, so the realized word is periodic")));
    }
    let lang = Language::Regular(l.clone());
    embed_with(&FactorEnumeration::length_lex(lang.clone()), &lang, a, cfg)
}

/// Replays the embedding against the right half of its last word: at each
/// step the branch `s ∈ A` is taken iff its right half is a prefix.
pub fn decode_oracle(right: &FiniteWord, f: &FactorEnumeration, cfg: &SearchConfig) -> Result<OracleBits> {
    let mut e = Embedder::start(f, cfg)?;
    let mut bits = Vec::new();
    let inconsistent = || Error::invalid("the stream does not follow the embedding");
    if !right.starts_with(&e.right()) {
        return Err(inconsistent());
    }
    while e.right().len() < right.len() {
        let mut trial = e.clone();
        trial.step(true)?;
        if right.starts_with(&trial.right()) {
            e = trial;
            bits.push(true);
        } else {
            e.step(false)?;
            if !right.starts_with(&e.right()) {
                return Err(inconsistent());
            }
            bits.push(false);
        }
    }
    Ok(OracleBits(bits))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::factor_automaton_up;

    fn alternating() -> Dfa {
        factor_automaton_up(&UpOmegaWord::of("", "01")).unwrap()
    }

    #[test]
    fn recurrence_and_period() {
        assert!(is_recurrent(&UpBiWord::of("01", "", "01")).unwrap());
        assert_eq!(period(&UpBiWord::of("01", "", "01")), Some(2));
        assert!(!is_recurrent(&UpBiWord::of("0", "1", "0")).unwrap());
        assert_eq!(period(&UpBiWord::of("0", "", "0")), Some(1));
        assert_eq!(period(&UpBiWord::of("0", "1", "0")), None);
    }

    #[test]
    fn shifts() {
        let xi0 = UpBiWord::of("01", "0", "10");
        let xi1 = UpBiWord::of("10", "1", "01");
        assert_eq!(shift_equivalent(&xi0, &xi1).map(i64::abs), Some(1));
        assert_eq!(shift_equivalent(&UpBiWord::of("0", "1", "0"), &UpBiWord::of("0", "11", "0")), None);
        let xi = UpBiWord::of("0", "1", "0");
        assert_eq!(shift_equivalent(&xi, &xi.shift(3)), Some(3));
    }

    #[test]
    fn determining_examples() {
        let alt = alternating();
        assert_eq!(determining_check(&alt, &"0".into()).unwrap(), Determining::Both);
        let all = Dfa::universal(1, false);
        for u in FiniteWord::all_up_to(3) {
            assert_eq!(determining_check(&all, &u).unwrap(), Determining::Neither);
        }
        assert!(has_determining_word(&alt).unwrap().is_some());
        assert_eq!(has_determining_word(&all).unwrap(), None);
    }

    #[test]
    fn classify_examples() {
        let r = classify(&Presentation::Bi(UpBiWord::of("01", "", "01"))).unwrap();
        assert_eq!(r.cardinality, Cardinality::Finite(2));
        let r = classify(&Presentation::Bi(UpBiWord::of("0", "1", "0"))).unwrap();
        assert_eq!(r.to_string(), "non-recurrent; class cardinality aleph0");
        let r = classify(&Presentation::FactorLanguage(Dfa::universal(1, false))).unwrap();
        assert_eq!(r.cardinality, Cardinality::Continuum);
        let r = classify(&Presentation::FactorLanguage(alternating())).unwrap();
        assert_eq!(r.classification, Classification::Periodic(2));
    }

    #[test]
    fn conditions_name_the_failure() {
        let zeros_or_ones = Dfa::from_fn(1, false, 4, 0, vec![true, true, true, false], |q, a| match (q, a) {
            (0, 0) | (1, 0) => 1,
            (0, 1) | (2, 1) => 2,
            _ => 3,
        });
        assert!(matches!(check_conditions(&zeros_or_ones), Err(Error::Condition('c', _))));
        let only_eps = Dfa::from_fn(1, false, 2, 0, vec![true, false], |_, _| 1);
        assert!(matches!(check_conditions(&only_eps), Err(Error::Condition('a', _))));
    }

    #[test]
    fn canonical_words() {
        let g: Vec<String> = (0..7).map(|i| canonical_word(i).to_string()).collect();
        assert_eq!(g, ["ε", "0", "1", "00", "01", "10", "11"]);
    }

    #[test]
    fn stream_lines_round_trip() {
        let it = StreamItem { step: 3, origin: 2, word: "0110".into() };
        assert_eq!(StreamItem::parse_line(&it.line()).unwrap(), it);
        let e = StreamItem { step: 0, origin: 0, word: FiniteWord::empty() };
        assert_eq!(StreamItem::parse_line(&e.line()).unwrap(), e);
    }

    #[test]
    fn embed_decode_small() {
        let all = Dfa::universal(1, false);
        let a = OracleBits::parse("10110").unwrap();
        let st = embed_oracle(&all, &a, &SearchConfig::default()).unwrap();
        let f = FactorEnumeration::length_lex(Language::Regular(all));
        assert_eq!(decode_oracle(&st.last().right_half(), &f, &SearchConfig::default()).unwrap(), a);
    }
}
