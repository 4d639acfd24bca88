//! Finitely presented words and their primitive manipulations.
//!
//! Letters are small bit-vectors: bit `t` is track `t`. Ordinary binary
//! words only use track 0; folded words use tracks 0 and 1.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::automata::Dfa;
use crate::{Error, Result};

/// A finite word `w: {0,..,n-1} -> letters`.
/// Serialized as its digit string.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct FiniteWord(pub Vec<u8>);

impl From<FiniteWord> for String {
    fn from(w: FiniteWord) -> String {
        w.0.iter().map(|a| char::from(b'0' + a)).collect()
    }
}

impl TryFrom<String> for FiniteWord {
    type Error = Error;

    fn try_from(s: String) -> Result<FiniteWord> {
        FiniteWord::parse(&s)
    }
}

impl FiniteWord {
    pub fn new(letters: Vec<u8>) -> Self {
        FiniteWord(letters)
    }

    pub fn empty() -> Self {
        FiniteWord(Vec::new())
    }

    /// Parses a digit string such as `0110`; `ε` or the empty string give the empty word.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "ε" || s == "eps" {
            return Ok(FiniteWord::empty());
        }
        s.chars()
            .map(|c| {
                c.to_digit(10)
                    .filter(|d| *d < 4)
                    .map(|d| d as u8)
                    .ok_or_else(|| Error::invalid(format!("bad letter `{c}` in word `{s}`")))
            })
            .collect::<Result<Vec<u8>>>()
            .map(FiniteWord)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn letter(&self, i: usize) -> u8 {
        self.0[i]
    }

    pub fn concat(&self, other: &FiniteWord) -> FiniteWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        FiniteWord(v)
    }

    pub fn pow(&self, n: usize) -> FiniteWord {
        FiniteWord(self.0.repeat(n))
    }

    pub fn reverse(&self) -> FiniteWord {
        FiniteWord(self.0.iter().rev().copied().collect())
    }

    /// The factor `w[i, j)`.
    pub fn slice(&self, i: usize, j: usize) -> FiniteWord {
        FiniteWord(self.0[i..j].to_vec())
    }

    /// Left rotation by `k` letters.
    pub fn rotate(&self, k: usize) -> FiniteWord {
        if self.is_empty() {
            return self.clone();
        }
        let k = k % self.len();
        let mut v = self.0[k..].to_vec();
        v.extend_from_slice(&self.0[..k]);
        FiniteWord(v)
    }

    pub fn starts_with(&self, p: &FiniteWord) -> bool {
        self.0.starts_with(&p.0)
    }

    pub fn ends_with(&self, s: &FiniteWord) -> bool {
        self.0.ends_with(&s.0)
    }

    pub fn is_factor_of(&self, other: &FiniteWord) -> bool {
        self.is_empty() || other.0.windows(self.len()).any(|w| w == self.0.as_slice())
    }

    /// Shortest `r` with `self = r^m`.
    pub fn primitive_root(&self) -> FiniteWord {
        let n = self.len();
        for d in 1..=n {
            if n % d == 0 && (d..n).all(|i| self.0[i] == self.0[i - d]) {
                return self.slice(0, d);
            }
        }
        self.clone()
    }

    /// Length-lexicographic comparison (shorter first, then lexicographic).
    pub fn length_lex_cmp(&self, other: &FiniteWord) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }

    /// All binary words of length exactly `n`, in lexicographic order.
    pub fn all_of_length(n: usize) -> impl Iterator<Item = FiniteWord> {
        (0u64..(1u64 << n)).map(move |m| {
            FiniteWord((0..n).map(|i| ((m >> (n - 1 - i)) & 1) as u8).collect())
        })
    }

    /// All binary words of length at most `n`, in length-lexicographic order.
    pub fn all_up_to(n: usize) -> impl Iterator<Item = FiniteWord> {
        (0..=n).flat_map(FiniteWord::all_of_length)
    }
}

impl fmt::Display for FiniteWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "ε");
        }
        for &a in &self.0 {
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for FiniteWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

impl From<&str> for FiniteWord {
    /// Panics on malformed input; meant for literals in code and tests.
    fn from(s: &str) -> Self {
        FiniteWord::parse(s).expect("malformed word literal")
    }
}

/// The ultimately periodic ω-word `u v^ω`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UpOmegaWord {
    pub u: FiniteWord,
    pub v: FiniteWord,
}

impl UpOmegaWord {
    pub fn new(u: FiniteWord, v: FiniteWord) -> Result<Self> {
        if v.is_empty() {
            return Err(Error::invalid("the loop of an ultimately periodic word must be nonempty"));
        }
        Ok(UpOmegaWord { u, v })
    }

    /// Convenience constructor from digit strings; panics on bad input.
    pub fn of(u: &str, v: &str) -> Self {
        UpOmegaWord::new(u.into(), v.into()).expect("bad ultimately periodic word")
    }

    pub fn letter_at(&self, i: u64) -> u8 {
        let i = i as usize;
        if i < self.u.len() {
            self.u.letter(i)
        } else {
            self.v.letter((i - self.u.len()) % self.v.len())
        }
    }

    /// The first `n` letters.
    pub fn prefix(&self, n: usize) -> FiniteWord {
        FiniteWord((0..n).map(|i| self.letter_at(i as u64)).collect())
    }

    /// The factor at positions `[i, j)`.
    pub fn factor(&self, i: usize, j: usize) -> FiniteWord {
        FiniteWord((i..j).map(|p| self.letter_at(p as u64)).collect())
    }

    /// The suffix `α[n, ∞)`.
    pub fn tail(&self, n: usize) -> UpOmegaWord {
        if n <= self.u.len() {
            UpOmegaWord { u: self.u.slice(n, self.u.len()), v: self.v.clone() }
        } else {
            UpOmegaWord { u: FiniteWord::empty(), v: self.v.rotate(n - self.u.len()) }
        }
    }

    /// Shortest presentation of the same ω-word.
    pub fn normalize(&self) -> UpOmegaWord {
        let mut u = self.u.0.clone();
        let mut v = self.v.primitive_root().0;
        while let (Some(&a), Some(&b)) = (u.last(), v.last()) {
            if a != b {
                break;
            }
            u.pop();
            v.rotate_right(1);
        }
        UpOmegaWord { u: FiniteWord(u), v: FiniteWord(v) }
    }

    /// Presentation whose prefix has length `p` and whose loop has length `q`
    /// (requires `p ≥ |u|` after normalisation and `|v|` dividing `q`).
    pub fn recut(&self, p: usize, q: usize) -> UpOmegaWord {
        UpOmegaWord { u: self.prefix(p), v: self.factor(p, p + q) }
    }

    pub fn literal(&self) -> String {
        format!("up:u={},v={}", lit(&self.u), lit(&self.v))
    }
}

impl fmt::Display for UpOmegaWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})^ω", lit(&self.u), self.v)
    }
}

impl fmt::Debug for UpOmegaWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.literal())
    }
}

fn lit(w: &FiniteWord) -> String {
    w.0.iter().map(|a| char::from(b'0' + a)).collect()
}

fn lcm(a: usize, b: usize) -> usize {
    a.lcm(&b)
}

/// `u v^ω = u' v'^ω`, checked on a prefix of length `max(|u|,|u'|) + lcm(|v|,|v'|)`.
pub fn equal_up(a: &UpOmegaWord, b: &UpOmegaWord) -> bool {
    let n = a.u.len().max(b.u.len()) + lcm(a.v.len(), b.v.len());
    (0..n as u64).all(|i| a.letter_at(i) == b.letter_at(i))
}

/// The bi-infinite word `x^{ω*} y z^ω` with `y` starting at position `start`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UpBiWord {
    pub x: FiniteWord,
    pub y: FiniteWord,
    pub z: FiniteWord,
    #[serde(default)]
    pub start: i64,
}

impl UpBiWord {
    pub fn new(x: FiniteWord, y: FiniteWord, z: FiniteWord) -> Result<Self> {
        if x.is_empty() || z.is_empty() {
            return Err(Error::invalid("both loops of a bi-infinite word must be nonempty"));
        }
        Ok(UpBiWord { x, y, z, start: 0 })
    }

    /// Convenience constructor from digit strings; panics on bad input.
    pub fn of(x: &str, y: &str, z: &str) -> Self {
        UpBiWord::new(x.into(), y.into(), z.into()).expect("bad bi-infinite word")
    }

    pub fn letter_at(&self, n: i64) -> u8 {
        let end = self.start + self.y.len() as i64;
        if n < self.start {
            self.x.letter((n - self.start).rem_euclid(self.x.len() as i64) as usize)
        } else if n < end {
            self.y.letter((n - self.start) as usize)
        } else {
            self.z.letter(((n - end) as usize) % self.z.len())
        }
    }

    /// Letters at positions `[i, j)`.
    pub fn factor(&self, i: i64, j: i64) -> FiniteWord {
        FiniteWord((i..j).map(|n| self.letter_at(n)).collect())
    }

    /// Position just after `y`.
    pub fn end(&self) -> i64 {
        self.start + self.y.len() as i64
    }

    /// `ζ(n) = ξ(n + p)`.
    pub fn shift(&self, p: i64) -> UpBiWord {
        UpBiWord { start: self.start - p, ..self.clone() }
    }

    /// `ξ^R(n) = ξ(-n)`.
    pub fn reverse(&self) -> UpBiWord {
        UpBiWord {
            x: self.z.reverse(),
            y: self.y.reverse(),
            z: self.x.reverse(),
            start: 1 - self.start - self.y.len() as i64,
        }
    }

    /// Primitive loops, with letters of `y` absorbed into the loops where possible.
    pub fn normalize(&self) -> UpBiWord {
        let mut x = self.x.primitive_root();
        let mut z = self.z.primitive_root();
        let mut y = self.y.0.clone();
        let mut start = self.start;
        while !y.is_empty() && y[0] == x.letter(0) {
            y.remove(0);
            start += 1;
            x = x.rotate(1);
        }
        while !y.is_empty() && *y.last().unwrap() == z.letter(z.len() - 1) {
            y.pop();
            z = z.rotate(z.len() - 1);
        }
        UpBiWord { x, y: FiniteWord(y), z, start }
    }

    /// The ω-word `ξ[0, ∞)`.
    pub fn right_half(&self) -> UpOmegaWord {
        let p = self.end().max(0) as usize;
        UpOmegaWord {
            u: self.factor(0, p as i64),
            v: self.factor(p as i64, (p + self.z.len()) as i64),
        }
    }

    /// The ω-word `ξ(-1) ξ(-2) ξ(-3) ⋯`.
    pub fn left_half_reversed(&self) -> UpOmegaWord {
        let p = (-self.start).max(0) as usize;
        let at = |i: usize| self.letter_at(-(i as i64) - 1);
        UpOmegaWord {
            u: FiniteWord((0..p).map(at).collect()),
            v: FiniteWord((p..p + self.x.len()).map(at).collect()),
        }
    }

    pub fn literal(&self) -> String {
        let mut s = format!("bi:x={}|y={}|z={}", lit(&self.x), lit(&self.y), lit(&self.z));
        if self.start != 0 {
            s.push_str(&format!("|s={}", self.start));
        }
        s
    }
}

impl fmt::Display for UpBiWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})^ω*·{}·({})^ω", self.x, lit(&self.y), self.z)?;
        if self.start != 0 {
            write!(f, " @{}", self.start)?;
        }
        Ok(())
    }
}

impl fmt::Debug for UpBiWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.literal())
    }
}

/// `ξ(n) = ζ(n)` for all `n ∈ ℤ`, via the two halves.
pub fn equal_bi(a: &UpBiWord, b: &UpBiWord) -> bool {
    equal_up(&a.right_half(), &b.right_half())
        && equal_up(&a.left_half_reversed(), &b.left_half_reversed())
}

/// Folds `ξ` into the ω-word `β(i) = (ξ(i), ξ(-i-1))` over two tracks:
/// track 0 carries the right half, track 1 the reversed left half.
pub fn fold_word(xi: &UpBiWord) -> UpOmegaWord {
    let p = xi.end().max(-xi.start).max(0) as usize;
    let q = lcm(xi.x.len(), xi.z.len());
    let at = |i: usize| {
        let i = i as i64;
        xi.letter_at(i) | (xi.letter_at(-i - 1) << 1)
    };
    UpOmegaWord {
        u: FiniteWord((0..p).map(at).collect()),
        v: FiniteWord((p..p + q).map(at).collect()),
    }
}

/// A claim that the gap-type sequence is `q`-periodic from index `n0` on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub n0: u64,
    pub q: u64,
}

type GapFn = dyn Fn(u64) -> BigUint + Send + Sync;

/// The ω-word `1 0^{g(0)} 1 0^{g(1)} 1 ⋯`.
#[derive(Clone)]
pub struct GapPredicateWord {
    name: String,
    gap: Arc<GapFn>,
    pub certificate: Option<Certificate>,
}

impl GapPredicateWord {
    pub fn new(name: impl Into<String>, gap: impl Fn(u64) -> BigUint + Send + Sync + 'static) -> Self {
        GapPredicateWord { name: name.into(), gap: Arc::new(gap), certificate: None }
    }

    pub fn with_certificate(mut self, n0: u64, q: u64) -> Self {
        self.certificate = Some(Certificate { n0, q });
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn gap(&self, n: u64) -> BigUint {
        (self.gap)(n)
    }

    /// All gaps equal to `c`: the word `(1 0^c)^ω`.
    pub fn constant(c: u64) -> Self {
        GapPredicateWord::new(format!("const:{c}"), move |_| BigUint::from(c))
    }

    /// Gaps `n!`.
    pub fn factorial() -> Self {
        GapPredicateWord::new("factorial", |n| (1..=n).fold(BigUint::one(), |acc, k| acc * k))
    }

    /// Gaps `2^n`.
    pub fn pow2() -> Self {
        GapPredicateWord::new("pow2", |n| BigUint::one() << (n as usize))
    }

    /// Letter at position `i`, by a partial-sum search over the gaps.
    pub fn letter_at(&self, i: u64) -> u8 {
        let target = BigUint::from(i);
        let mut pos = BigUint::zero();
        let mut n = 0;
        loop {
            if pos == target {
                return 1;
            }
            let next = &pos + self.gap(n) + 1u32;
            if target < next {
                return 0;
            }
            pos = next;
            n += 1;
        }
    }

    /// The finite word `1 0^{g(0)} ⋯ 1 0^{g(m-1)}`; gaps must fit in memory.
    pub fn blocks(&self, m: u64) -> Result<FiniteWord> {
        let mut out = Vec::new();
        for n in 0..m {
            let g = self.gap(n).to_usize().filter(|g| *g <= 1 << 24).ok_or_else(|| {
                Error::budget("gap word", format!("gap {n} of `{}` is too large to materialise", self.name))
            })?;
            out.push(1);
            out.extend(std::iter::repeat(0).take(g));
        }
        Ok(FiniteWord(out))
    }

    pub fn literal(&self) -> String {
        format!("gap:{}", self.name)
    }
}

impl fmt::Debug for GapPredicateWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.literal())
    }
}

/// Decidable sets used as `W` in [`alpha_e_word`], by name.
pub fn named_predicate(name: &str) -> Option<Arc<dyn Fn(u64) -> bool + Send + Sync>> {
    let p: Arc<dyn Fn(u64) -> bool + Send + Sync> = match name {
        "evens" => Arc::new(|a| a % 2 == 0),
        "odds" => Arc::new(|a| a % 2 == 1),
        "empty" => Arc::new(|_| false),
        "all" => Arc::new(|_| true),
        "squares" => Arc::new(|a| {
            let r = (a as f64).sqrt() as u64;
            (r.saturating_sub(1)..=r + 1).any(|s| s * s == a)
        }),
        "primes" => Arc::new(|a| a >= 2 && (2..).take_while(|d| d * d <= a).all(|d| a % d != 0)),
        _ => return None,
    };
    Some(p)
}

/// First `count` values of `Φ_f`, an injective enumeration of `{2a : a ∈ W} ∪ (2ℕ+1)`.
///
/// Order: for `a = 0, 1, 2, …` emit `2a` when `a ∈ W`, then emit `2a + 1`.
pub fn phi_enumeration(w: &dyn Fn(u64) -> bool, count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count + 1);
    let mut a = 0;
    while out.len() < count {
        if w(a) {
            out.push(2 * a);
        }
        out.push(2 * a + 1);
        a += 1;
    }
    out.truncate(count);
    out
}

/// `x_i = 2^{Φ_f(i)} · ∏_{0≤j≤i} (2j+1)`.
pub fn alpha_e_gap(w: &dyn Fn(u64) -> bool, i: u64) -> BigUint {
    let phi = *phi_enumeration(w, i as usize + 1).last().unwrap();
    let odd = (0..=i).fold(BigUint::one(), |acc, j| acc * (2 * j + 1));
    odd << (phi as usize)
}

/// The word `α_e = 1 0^{x_0} 1 0^{x_1} ⋯` for the decidable set `W`.
pub fn alpha_e_word(name: &str, w: Arc<dyn Fn(u64) -> bool + Send + Sync>) -> GapPredicateWord {
    let cache: Arc<Mutex<HashMap<u64, BigUint>>> = Arc::default();
    GapPredicateWord::new(format!("alpha_e:{name}"), move |i| {
        if let Some(g) = cache.lock().unwrap().get(&i) {
            return g.clone();
        }
        let g = alpha_e_gap(w.as_ref(), i);
        cache.lock().unwrap().insert(i, g.clone());
        g
    })
}

/// A finite bit string standing in for a set `A ⊆ ℕ`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OracleBits(pub Vec<bool>);

impl OracleBits {
    pub fn parse(s: &str) -> Result<Self> {
        s.trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::invalid(format!("bad oracle bit `{c}`"))),
            })
            .collect::<Result<Vec<bool>>>()
            .map(OracleBits)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, s: usize) -> bool {
        self.0.get(s).copied().unwrap_or(false)
    }

    /// All bit strings of length `n`.
    pub fn all_of_length(n: usize) -> impl Iterator<Item = OracleBits> {
        FiniteWord::all_of_length(n).map(|w| OracleBits(w.0.iter().map(|&b| b == 1).collect()))
    }
}

impl fmt::Display for OracleBits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            write!(f, "{}", b as u8)?;
        }
        Ok(())
    }
}

type MemberFn = dyn Fn(&FiniteWord) -> bool + Send + Sync;

/// A language of finite binary words: regular (with a DFA) or a decidable predicate.
#[derive(Clone)]
pub enum Language {
    Regular(Dfa),
    Predicate { name: String, member: Arc<MemberFn> },
}

impl Language {
    pub fn predicate(name: impl Into<String>, f: impl Fn(&FiniteWord) -> bool + Send + Sync + 'static) -> Self {
        Language::Predicate { name: name.into(), member: Arc::new(f) }
    }

    pub fn contains(&self, w: &FiniteWord) -> bool {
        match self {
            Language::Regular(d) => d.accepts(w.letters()),
            Language::Predicate { member, .. } => member(w),
        }
    }

    pub fn dfa(&self) -> Option<&Dfa> {
        match self {
            Language::Regular(d) => Some(d),
            Language::Predicate { .. } => None,
        }
    }

    pub fn name(&self) -> String {
        match self {
            Language::Regular(d) => format!("dfa({} states)", d.num_states()),
            Language::Predicate { name, .. } => name.clone(),
        }
    }
}

impl fmt::Debug for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Language({})", self.name())
    }
}

/// A deterministic surjection `f: ℕ → L`.
#[derive(Clone)]
pub enum FactorEnumeration {
    /// `L` in length-lexicographic order.
    LengthLex(Language),
    /// An explicit finite prefix of an enumeration.
    List(Vec<FiniteWord>),
    /// The words of `base` in length-lex order with `extras[n]` inserted as
    /// `f(2n+1)`: `f(2n)` is the `n`-th base word while `n < extras.len()`,
    /// after that the base order continues. Extras must belong to `base`.
    Dovetail { base: Language, extras: Arc<Vec<FiniteWord>> },
}

/// Which side of a word is extended.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl FactorEnumeration {
    pub fn length_lex(l: Language) -> Self {
        FactorEnumeration::LengthLex(l)
    }

    pub fn dovetail(base: Language, extras: Vec<FiniteWord>) -> Self {
        FactorEnumeration::Dovetail { base, extras: Arc::new(extras) }
    }

    /// Index in a dovetail of the base word with length-lex rank `r`.
    fn base_index(extras: usize, r: u64) -> u64 {
        if r < extras as u64 {
            2 * r
        } else {
            extras as u64 + r
        }
    }

    /// The language enumerated, when known.
    pub fn language(&self) -> Option<&Language> {
        match self {
            FactorEnumeration::LengthLex(l) | FactorEnumeration::Dovetail { base: l, .. } => Some(l),
            FactorEnumeration::List(_) => None,
        }
    }

    /// `f(n)`.
    pub fn get(&self, n: u64) -> Result<FiniteWord> {
        match self {
            FactorEnumeration::LengthLex(Language::Regular(d)) => d
                .unrank_length_lex(n as u128)
                .map(FiniteWord)
                .ok_or_else(|| Error::Exhausted(format!("language has fewer than {} words", n + 1))),
            FactorEnumeration::LengthLex(l) => {
                let mut seen = 0;
                for len in 0..=40 {
                    for w in FiniteWord::all_of_length(len) {
                        if l.contains(&w) {
                            if seen == n {
                                return Ok(w);
                            }
                            seen += 1;
                        }
                    }
                }
                Err(Error::Exhausted(format!("no word with index {n} up to length 40")))
            }
            FactorEnumeration::List(v) => v
                .get(n as usize)
                .cloned()
                .ok_or_else(|| Error::Exhausted(format!("enumeration list has no index {n}"))),
            FactorEnumeration::Dovetail { base, extras } => {
                let e = extras.len() as u64;
                let base_rank = if n >= 2 * e {
                    n - e
                } else if n % 2 == 0 {
                    n / 2
                } else {
                    return Ok(extras[(n / 2) as usize].clone());
                };
                FactorEnumeration::LengthLex(base.clone()).get(base_rank)
            }
        }
    }

    /// Number of words before `w` in the length-lex order of `l`, capped at `cap`.
    fn rank_capped(l: &Language, w: &FiniteWord, cap: u64) -> u64 {
        if let Language::Regular(d) = l {
            return d.rank_length_lex(w.letters()).min(cap as u128) as u64;
        }
        let mut r = 0;
        for len in 0..=w.len() {
            for v in FiniteWord::all_of_length(len) {
                if v.length_lex_cmp(w) != Ordering::Less {
                    return r;
                }
                if l.contains(&v) {
                    r += 1;
                    if r >= cap {
                        return cap;
                    }
                }
            }
        }
        r
    }

    /// The word of minimal index in `prefix · {0,1}* · suffix`.
    ///
    /// `max_gap` bounds the middle part for predicate languages and `budget`
    /// bounds index scans over explicit enumerations.
    pub fn first_matching(&self, prefix: &FiniteWord, suffix: &FiniteWord, max_gap: usize, budget: u64) -> Result<FiniteWord> {
        let shape = |w: &FiniteWord| w.len() >= prefix.len() + suffix.len() && w.starts_with(prefix) && w.ends_with(suffix);
        match self {
            FactorEnumeration::LengthLex(l) => first_in_shape(l, prefix, suffix, max_gap),
            FactorEnumeration::List(_) => {
                for n in 0..budget {
                    let w = self.get(n)?;
                    if shape(&w) {
                        return Ok(w);
                    }
                }
                Err(Error::Exhausted(format!("no enumerated word in {prefix}·Σ*·{suffix} within {budget} indices")))
            }
            FactorEnumeration::Dovetail { base, extras } => {
                let from_base = first_in_shape(base, prefix, suffix, max_gap).ok();
                let limit = match &from_base {
                    Some(w) => FactorEnumeration::base_index(extras.len(), FactorEnumeration::rank_capped(base, w, extras.len() as u64)),
                    None => u64::MAX,
                };
                for (n, w) in extras.iter().enumerate() {
                    if 2 * n as u64 + 1 < limit && shape(w) {
                        return Ok(w.clone());
                    }
                }
                from_base.ok_or_else(|| Error::Exhausted(format!("no enumerated word in {prefix}·Σ*·{suffix}")))
            }
        }
    }

    /// The lexicographically least index pair `(k, ℓ)` of distinct words of equal
    /// length in `z·{0,1}*` (side `Right`) or `{0,1}*·z` (side `Left`).
    pub fn min_pair(&self, z: &FiniteWord, side: Side, max_gap: usize, budget: u64) -> Result<(FiniteWord, FiniteWord)> {
        let fits = |w: &FiniteWord| match side {
            Side::Right => w.len() > z.len() && w.starts_with(z),
            Side::Left => w.len() > z.len() && w.ends_with(z),
        };
        match self {
            FactorEnumeration::LengthLex(Language::Regular(d)) => {
                let bound = d.num_states() * d.num_states() + d.num_states() + 2;
                d.first_two_extensions(z.letters(), side == Side::Right, bound)
                    .map(|(a, b)| (FiniteWord(a), FiniteWord(b)))
                    .ok_or_else(|| Error::Exhausted(format!("no two distinct extensions of {z} up to length {bound}")))
            }
            FactorEnumeration::LengthLex(l) => {
                for g in 1..=max_gap {
                    let mut found = Vec::new();
                    for x in FiniteWord::all_of_length(g) {
                        let w = match side {
                            Side::Right => z.concat(&x),
                            Side::Left => x.concat(z),
                        };
                        if l.contains(&w) {
                            found.push(w);
                            if found.len() == 2 {
                                let b = found.pop().unwrap();
                                return Ok((found.pop().unwrap(), b));
                            }
                        }
                    }
                }
                Err(Error::Exhausted(format!("no two distinct extensions of {z} within {max_gap} letters")))
            }
            _ => {
                let mut first_by_len: HashMap<usize, FiniteWord> = HashMap::new();
                let mut best: Option<(u64, FiniteWord, FiniteWord)> = None;
                let mut first_index: HashMap<usize, u64> = HashMap::new();
                for n in 0..budget {
                    let w = self.get(n)?;
                    if !fits(&w) {
                        continue;
                    }
                    match first_by_len.get(&w.len()) {
                        None => {
                            first_by_len.insert(w.len(), w.clone());
                            first_index.insert(w.len(), n);
                        }
                        Some(a) if *a != w => {
                            let k = first_index[&w.len()];
                            if best.as_ref().map_or(true, |(bk, _, _)| k < *bk) {
                                best = Some((k, a.clone(), w.clone()));
                            }
                        }
                        _ => {}
                    }
                }
                best.map(|(_, a, b)| (a, b))
                    .ok_or_else(|| Error::Exhausted(format!("no pair of extensions of {z} within {budget} indices")))
            }
        }
    }
}

fn first_in_shape(l: &Language, prefix: &FiniteWord, suffix: &FiniteWord, max_gap: usize) -> Result<FiniteWord> {
    match l {
        Language::Regular(d) => d
            .shortest_lexmin_between(prefix.letters(), suffix.letters())
            .map(|x| prefix.concat(&FiniteWord(x)).concat(suffix))
            .ok_or_else(|| Error::Exhausted(format!("language has no word in {prefix}·Σ*·{suffix}"))),
        Language::Predicate { .. } => {
            for g in 0..=max_gap {
                for x in FiniteWord::all_of_length(g) {
                    let w = prefix.concat(&x).concat(suffix);
                    if l.contains(&w) {
                        return Ok(w);
                    }
                }
            }
            Err(Error::Exhausted(format!("no word in {prefix}·Σ*·{suffix} with a middle of at most {max_gap} letters")))
        }
    }
}

/// A parsed word literal.
#[derive(Clone, Debug)]
pub enum WordLiteral {
    Finite(FiniteWord),
    Up(UpOmegaWord),
    Bi(UpBiWord),
    Gap(GapPredicateWord),
}

impl WordLiteral {
    pub fn literal(&self) -> String {
        match self {
            WordLiteral::Finite(w) => format!("fin:{}", lit(w)),
            WordLiteral::Up(a) => a.literal(),
            WordLiteral::Bi(b) => b.literal(),
            WordLiteral::Gap(g) => g.literal(),
        }
    }
}

fn fields<'a>(body: &'a str, sep: char, lit_text: &str) -> Result<HashMap<&'a str, &'a str>> {
    let mut out = HashMap::new();
    for part in body.split(sep) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::invalid(format!("expected key=value in `{lit_text}`")))?;
        out.insert(k.trim(), v.trim());
    }
    Ok(out)
}

/// Parses `fin:0110`, `up:u=01,v=10`, `bi:x=01|y=0|z=10`, `gap:factorial`,
/// `gap:pow2`, `gap:const:<c>` and `gap:alpha_e:<predicate>`.
pub fn parse_literal(s: &str) -> Result<WordLiteral> {
    let s = s.trim();
    let (kind, body) = s
        .split_once(':')
        .ok_or_else(|| Error::invalid(format!("word literal `{s}` lacks a kind prefix")))?;
    let get = |m: &HashMap<&str, &str>, k: &str| -> Result<FiniteWord> {
        FiniteWord::parse(m.get(k).copied().unwrap_or(""))
    };
    match kind {
        "fin" => Ok(WordLiteral::Finite(FiniteWord::parse(body)?)),
        "up" => {
            let m = fields(body, ',', s)?;
            Ok(WordLiteral::Up(UpOmegaWord::new(get(&m, "u")?, get(&m, "v")?)?))
        }
        "bi" => {
            let m = fields(body, '|', s)?;
            let mut b = UpBiWord::new(get(&m, "x")?, get(&m, "y")?, get(&m, "z")?)?;
            if let Some(st) = m.get("s") {
                b.start = st.parse().map_err(|_| Error::invalid(format!("bad start offset in `{s}`")))?;
            }
            Ok(WordLiteral::Bi(b))
        }
        "gap" => {
            let g = match body.split_once(':') {
                None if body == "factorial" => GapPredicateWord::factorial(),
                None if body == "pow2" => GapPredicateWord::pow2(),
                Some(("const", c)) => GapPredicateWord::constant(
                    c.parse().map_err(|_| Error::invalid(format!("bad constant gap in `{s}`")))?,
                ),
                Some(("alpha_e", name)) => {
                    let w = named_predicate(name).ok_or_else(|| Error::invalid(format!("unknown predicate `{name}`")))?;
                    alpha_e_word(name, w)
                }
                _ => return Err(Error::invalid(format!("unknown gap word `{s}`"))),
            };
            Ok(WordLiteral::Gap(g))
        }
        _ => Err(Error::invalid(format!("unknown word kind `{kind}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bi_letter_before_origin_is_last_letter_of_x() {
        assert_eq!(UpBiWord::of("01", "", "10").letter_at(-1), 1);
    }

    #[test]
    fn gap_word_starts_with_one() {
        assert_eq!(GapPredicateWord::factorial().letter_at(0), 1);
        let g = GapPredicateWord::factorial();
        // gaps 1, 1, 2, 6: ones at 0, 2, 4, 7, 14
        let ones: Vec<u64> = (0..20).filter(|&i| g.letter_at(i) == 1).collect();
        assert_eq!(ones, vec![0, 2, 4, 7, 14]);
    }

    #[test]
    fn fold_examples() {
        assert!(equal_up(&fold_word(&UpBiWord::of("0", "", "0")), &UpOmegaWord::of("", "0")));
        let f = fold_word(&UpBiWord::of("0", "1", "0"));
        assert!(equal_up(&f, &UpOmegaWord::of("1", "0")));
    }

    #[test]
    fn equal_up_examples() {
        assert!(equal_up(&UpOmegaWord::of("", "01"), &UpOmegaWord::of("01", "01")));
        assert!(!equal_up(&UpOmegaWord::of("", "01"), &UpOmegaWord::of("1", "01")));
    }

    #[test]
    fn shift_of_alternating_word() {
        // ξ0(n) = |n| mod 2 and ξ1(n) = (|n|+1) mod 2
        let xi0 = UpBiWord::of("01", "0", "10");
        let xi1 = UpBiWord::of("10", "1", "01");
        for n in -10..10i64 {
            assert_eq!(xi0.letter_at(n), (n.unsigned_abs() % 2) as u8);
            assert_eq!(xi1.letter_at(n), ((n.unsigned_abs() + 1) % 2) as u8);
        }
        assert!(!equal_bi(&xi0, &xi1));
        assert!(equal_bi(&xi0.shift(1), &xi1));
        assert!(equal_bi(&xi0.shift(0), &xi0));
    }

    #[test]
    fn literals_round_trip() {
        for s in ["fin:0110", "up:u=01,v=10", "bi:x=01|y=0|z=10", "bi:x=1|y=|z=0|s=-3", "gap:factorial", "gap:alpha_e:evens"] {
            assert_eq!(parse_literal(s).unwrap().literal(), s);
        }
        assert!(parse_literal("up:u=1,v=").is_err());
    }

    #[test]
    fn phi_enumeration_orders() {
        assert_eq!(phi_enumeration(&|a| a % 2 == 0, 7), vec![0, 1, 3, 4, 5, 7, 8]);
        assert!(phi_enumeration(&|_| false, 20).iter().all(|p| p % 2 == 1));
    }
}
