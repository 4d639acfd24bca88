//! Rank-k Hintikka types of finite words and what is built on them.
//!
//! A type is a hash-consed tree. At rank 0 it is the atomic diagram of the
//! valuation; at rank `r` it adds the sets of rank `r-1` types of every
//! single first-order extension and every single set extension. Children are
//! sorted by interned id, so type equality is id equality.
//!
//! Types are produced two ways that land on the same interned nodes:
//! [`ktype`] enumerates all extensions of the word (the literal definition,
//! guarded by a length budget), and the concatenation operator combines the
//! types of two words. The latter makes long words cheap. To concatenate, a
//! valuation may leave a first-order variable *absent* (it lives in the other
//! factor).

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;

use crate::formula::Valuation;
use crate::words::{FiniteWord, GapPredicateWord, UpBiWord, UpOmegaWord};
use crate::{Error, Result};

/// Length limits for brute-force enumeration, per rank.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TypeBudget {
    /// Longest word for ranks 0, 1 and 2.
    pub max_len_low: usize,
    /// Longest word for rank 3.
    pub max_len_rank3: usize,
    /// Longest word above rank 3.
    pub max_len_high: usize,
}

impl Default for TypeBudget {
    fn default() -> Self {
        TypeBudget { max_len_low: 10, max_len_rank3: 7, max_len_high: 4 }
    }
}

impl TypeBudget {
    pub fn max_len(&self, k: usize) -> usize {
        match k {
            0..=2 => self.max_len_low,
            3 => self.max_len_rank3,
            _ => self.max_len_high,
        }
    }

    pub fn check(&self, len: usize, k: usize) -> Result<()> {
        if len > self.max_len(k) {
            return Err(Error::budget(
                "k-type enumeration",
                format!("word length {len} exceeds {} at rank {k}", self.max_len(k)),
            ));
        }
        Ok(())
    }
}

/// How [`TypeConfig`]-aware functions obtain types.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Strategy {
    /// Enumerate extensions; words beyond the budget are an error.
    Brute,
    /// Concatenate letter types.
    Compose,
    /// Enumerate up to `brute_len` letters, concatenate beyond.
    Auto { brute_len: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TypeConfig {
    pub budget: TypeBudget,
    pub strategy: Strategy,
    /// Highest rank handled by concatenation.
    pub max_compose_rank: usize,
    /// Longest word searched by [`unary_classify`] and idempotent-exponent searches.
    pub max_search_len: usize,
}

impl Default for TypeConfig {
    fn default() -> Self {
        TypeConfig {
            budget: TypeBudget::default(),
            strategy: Strategy::Auto { brute_len: 4 },
            max_compose_rank: 3,
            max_search_len: 4096,
        }
    }
}

impl TypeConfig {
    pub fn brute() -> Self {
        TypeConfig { strategy: Strategy::Brute, ..TypeConfig::default() }
    }
}

/// Cap on interned nodes before the arena refuses to grow.
pub const NODE_CAP: usize = 4_000_000;

/// Cap on child references held by interned nodes, which bounds memory.
pub const ENTRY_CAP: usize = 150_000_000;

const NA: u8 = u8::MAX;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Node {
    rank: u8,
    /// Bit `i` set when variable `i` is a set variable.
    sig: u32,
    nvars: u8,
    /// Per variable: the letter under a present first-order variable, else `NA`.
    letter: Vec<u8>,
    /// Row-major `nvars²`: 0 for `<`, 1 for `=`, 2 for `>`, `NA` otherwise.
    order: Vec<u8>,
    /// Row-major `nvars²`: entry `(i, j)` says whether first-order `i` lies in set `j`.
    member: Vec<u8>,
    fo: Vec<u32>,
    so: Vec<u32>,
}

impl Node {
    fn is_set(&self, i: usize) -> bool {
        self.sig >> i & 1 == 1
    }
}

#[derive(Default)]
struct Arena {
    // shared between the vector and the index so child lists are stored once
    nodes: Vec<Arc<Node>>,
    index: HashMap<Arc<Node>, u32>,
    compose_memo: HashMap<(u32, u32), u32>,
    absent_memo: HashMap<(u32, u8), u32>,
    lower_memo: HashMap<u32, u32>,
    letter_memo: HashMap<(u8, usize), u32>,
    entries: usize,
    /// Bumped by [`clear_type_arena`]; types from older epochs are rejected.
    epoch: u32,
}

fn arena() -> &'static Mutex<Arena> {
    static A: OnceLock<Mutex<Arena>> = OnceLock::new();
    A.get_or_init(Mutex::default)
}

fn lock() -> std::sync::MutexGuard<'static, Arena> {
    arena().lock().unwrap_or_else(|e| e.into_inner())
}

/// Interned types and the child references they hold.
pub fn type_arena_size() -> (usize, usize) {
    let a = lock();
    (a.nodes.len(), a.entries)
}

/// Frees every interned type. Types computed before the call become invalid
/// and operations on them return an error.
pub fn clear_type_arena() {
    let mut a = lock();
    let epoch = a.epoch + 1;
    *a = Arena { epoch, ..Arena::default() };
}

/// An assignment for brute-force enumeration.
#[derive(Clone)]
struct Assign {
    sig: u32,
    /// First-order positions; `None` for absent variables and set variables.
    pos: Vec<Option<usize>>,
    /// Set bitmasks; zero for first-order variables.
    sets: Vec<u64>,
}

impl Arena {
    fn intern(&mut self, mut node: Node) -> Result<u32> {
        node.fo.sort_unstable();
        node.fo.dedup();
        node.so.sort_unstable();
        node.so.dedup();
        if let Some(&id) = self.index.get(&node) {
            return Ok(id);
        }
        if self.nodes.len() >= NODE_CAP {
            return Err(Error::Resource { stage: "k-type arena".into(), detail: "too many distinct types".into(), cap: NODE_CAP });
        }
        self.entries += node.fo.len() + node.so.len();
        if self.entries > ENTRY_CAP {
            return Err(Error::Resource { stage: "k-type arena".into(), detail: "types too large".into(), cap: ENTRY_CAP });
        }
        let id = self.nodes.len() as u32;
        let node = Arc::new(node);
        self.nodes.push(node.clone());
        self.index.insert(node, id);
        Ok(id)
    }

    fn atoms(w: &[u8], a: &Assign) -> Node {
        let m = a.pos.len();
        let mut letter = vec![NA; m];
        let mut order = vec![NA; m * m];
        let mut member = vec![NA; m * m];
        for i in 0..m {
            let Some(p) = a.pos[i] else { continue };
            letter[i] = w[p];
            for j in 0..m {
                if let Some(q) = a.pos[j] {
                    order[i * m + j] = match p.cmp(&q) {
                        std::cmp::Ordering::Less => 0,
                        std::cmp::Ordering::Equal => 1,
                        std::cmp::Ordering::Greater => 2,
                    };
                }
                if a.sig >> j & 1 == 1 {
                    member[i * m + j] = (a.sets[j] >> p & 1) as u8;
                }
            }
        }
        Node { rank: 0, sig: a.sig, nvars: m as u8, letter, order, member, fo: vec![], so: vec![] }
    }

    fn brute(&mut self, w: &[u8], a: &mut Assign, r: usize) -> Result<u32> {
        let mut node = Self::atoms(w, a);
        node.rank = r as u8;
        if r > 0 {
            let m = a.pos.len();
            a.pos.push(None);
            a.sets.push(0);
            for p in 0..w.len() {
                a.pos[m] = Some(p);
                node.fo.push(self.brute(w, a, r - 1)?);
            }
            a.pos[m] = None;
            a.sig |= 1 << m;
            for mask in 0..1u64 << w.len() {
                a.sets[m] = mask;
                node.so.push(self.brute(w, a, r - 1)?);
            }
            a.sig &= !(1 << m);
            a.pos.pop();
            a.sets.pop();
        }
        self.intern(node)
    }

    /// The same type with an absent first-order variable inserted at index `at`.
    fn insert_absent(&mut self, id: u32, at: usize) -> Result<u32> {
        if let Some(&r) = self.absent_memo.get(&(id, at as u8)) {
            return Ok(r);
        }
        let n = self.nodes[id as usize].clone();
        let m = n.nvars as usize;
        let old = |i: usize| -> Option<usize> {
            match i.cmp(&at) {
                std::cmp::Ordering::Less => Some(i),
                std::cmp::Ordering::Equal => None,
                std::cmp::Ordering::Greater => Some(i - 1),
            }
        };
        let low = n.sig & ((1u32 << at) - 1);
        let high = (n.sig >> at) << (at + 1);
        let mut out = Node {
            rank: n.rank,
            sig: low | high,
            nvars: (m + 1) as u8,
            letter: vec![NA; m + 1],
            order: vec![NA; (m + 1) * (m + 1)],
            member: vec![NA; (m + 1) * (m + 1)],
            fo: Vec::with_capacity(n.fo.len()),
            so: Vec::with_capacity(n.so.len()),
        };
        for i in 0..=m {
            let Some(oi) = old(i) else { continue };
            out.letter[i] = n.letter[oi];
            for j in 0..=m {
                let Some(oj) = old(j) else { continue };
                out.order[i * (m + 1) + j] = n.order[oi * m + oj];
                out.member[i * (m + 1) + j] = n.member[oi * m + oj];
            }
        }
        for &c in &n.fo {
            out.fo.push(self.insert_absent(c, at)?);
        }
        for &c in &n.so {
            out.so.push(self.insert_absent(c, at)?);
        }
        let r = self.intern(out)?;
        self.absent_memo.insert((id, at as u8), r);
        Ok(r)
    }

    /// The type of the concatenation of two words whose valuations split the
    /// first-order variables between them.
    fn compose(&mut self, a: u32, b: u32) -> Result<u32> {
        if let Some(&r) = self.compose_memo.get(&(a, b)) {
            return Ok(r);
        }
        let (na, nb) = (self.nodes[a as usize].clone(), self.nodes[b as usize].clone());
        if na.rank != nb.rank || na.sig != nb.sig || na.nvars != nb.nvars {
            return Err(Error::invalid("concatenated types differ in rank or signature"));
        }
        let m = na.nvars as usize;
        let mut out = Node {
            rank: na.rank,
            sig: na.sig,
            nvars: na.nvars,
            letter: vec![NA; m],
            order: vec![NA; m * m],
            member: vec![NA; m * m],
            fo: vec![],
            so: vec![],
        };
        for i in 0..m {
            let (in_a, in_b) = (na.letter[i] != NA, nb.letter[i] != NA);
            if in_a && in_b {
                return Err(Error::invalid("a first-order variable is placed in both factors"));
            }
            let src = if in_a { &na } else { &nb };
            out.letter[i] = src.letter[i];
            if !(in_a || in_b) {
                continue;
            }
            for j in 0..m {
                out.member[i * m + j] = src.member[i * m + j];
                if src.is_set(j) {
                    continue;
                }
                out.order[i * m + j] = if na.letter[j] != NA {
                    if in_a { na.order[i * m + j] } else { 2 }
                } else if nb.letter[j] != NA {
                    if in_b { nb.order[i * m + j] } else { 0 }
                } else {
                    NA
                };
            }
        }
        if na.rank > 0 {
            if !na.fo.is_empty() {
                let bc = self.absent_child(b, m)?;
                for &c in &na.fo {
                    out.fo.push(self.compose(c, bc)?);
                }
            }
            if !nb.fo.is_empty() {
                let ac = self.absent_child(a, m)?;
                for &c in &nb.fo {
                    out.fo.push(self.compose(ac, c)?);
                }
            }
            for &c in &na.so {
                for &d in &nb.so {
                    out.so.push(self.compose(c, d)?);
                }
            }
        }
        let r = self.intern(out)?;
        self.compose_memo.insert((a, b), r);
        Ok(r)
    }

    /// The rank `r-1` type of `t`'s word with a new absent first-order variable.
    fn absent_child(&mut self, t: u32, m: usize) -> Result<u32> {
        let lowered = self.lower(t)?;
        self.insert_absent(lowered, m)
    }

    /// The same word and valuation one rank lower.
    fn lower(&mut self, t: u32) -> Result<u32> {
        if let Some(&r) = self.lower_memo.get(&t) {
            return Ok(r);
        }
        let n = self.nodes[t as usize].clone();
        if n.rank == 0 {
            return Err(Error::invalid("cannot lower a rank-0 type"));
        }
        // rank r-1 data is determined by the children one level down
        let mut out = Node {
            rank: n.rank - 1,
            sig: n.sig,
            nvars: n.nvars,
            letter: n.letter.clone(),
            order: n.order.clone(),
            member: n.member.clone(),
            fo: vec![],
            so: vec![],
        };
        if out.rank > 0 {
            for &c in &n.fo {
                out.fo.push(self.lower(c)?);
            }
            for &c in &n.so {
                out.so.push(self.lower(c)?);
            }
        }
        let r = self.intern(out)?;
        self.lower_memo.insert(t, r);
        Ok(r)
    }

    fn letter_type(&mut self, a: u8, k: usize) -> Result<u32> {
        if let Some(&id) = self.letter_memo.get(&(a, k)) {
            return Ok(id);
        }
        let id = self.brute(&[a], &mut Assign { sig: 0, pos: vec![], sets: vec![] }, k)?;
        self.letter_memo.insert((a, k), id);
        Ok(id)
    }
}

/// A rank-k type; equal values mean `≡_k`-equivalent structures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct KType {
    rank: usize,
    id: u32,
    epoch: u32,
}

/// Sizes of a type's top-level structure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TypeSummary {
    pub rank: usize,
    pub id: u32,
    pub variables: usize,
    pub first_order_extensions: usize,
    pub set_extensions: usize,
}

impl KType {
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Interned id, stable within one process.
    pub fn id(&self) -> u32 {
        self.id
    }

    pub fn summary(&self) -> Result<TypeSummary> {
        let a = lock();
        check_epoch(&a, self)?;
        let n = &a.nodes[self.id as usize];
        Ok(TypeSummary {
            rank: self.rank,
            id: self.id,
            variables: n.nvars as usize,
            first_order_extensions: n.fo.len(),
            set_extensions: n.so.len(),
        })
    }

    /// The type of the concatenation of the two underlying words (sentence types).
    pub fn concat(&self, other: &KType) -> Result<KType> {
        if self.rank != other.rank {
            return Err(Error::invalid("concatenated types differ in rank"));
        }
        if self.rank > 0 && self.summary()?.variables != 0 {
            return Err(Error::invalid("only sentence types can be concatenated"));
        }
        let mut a = lock();
        check_epoch(&a, other)?;
        Ok(KType { rank: self.rank, id: a.compose(self.id, other.id)?, epoch: a.epoch })
    }
}

fn check_epoch(a: &Arena, t: &KType) -> Result<()> {
    if t.epoch != a.epoch {
        return Err(Error::invalid("type computed before the type arena was cleared"));
    }
    Ok(())
}

fn assignment(w: &FiniteWord, nu: &Valuation) -> Result<Assign> {
    let mut a = Assign { sig: 0, pos: vec![], sets: vec![] };
    if nu.fo.len() + nu.sets.len() > 16 {
        return Err(Error::invalid("too many variables in the valuation"));
    }
    for (v, &p) in &nu.fo {
        if p < 0 || p as usize >= w.len() {
            return Err(Error::invalid(format!("position {p} of `{v}` outside the word")));
        }
        a.pos.push(Some(p as usize));
        a.sets.push(0);
    }
    for (v, s) in &nu.sets {
        let mut mask = 0u64;
        for &p in s {
            if p < 0 || p as usize >= w.len() {
                return Err(Error::invalid(format!("position {p} of `{v}` outside the word")));
            }
            mask |= 1 << p;
        }
        a.sig |= 1 << a.pos.len();
        a.pos.push(None);
        a.sets.push(mask);
    }
    if w.len() > 63 && !nu.sets.is_empty() {
        return Err(Error::invalid("set valuations are limited to 63 positions"));
    }
    Ok(a)
}

/// Brute-force `k`-type of `(w, ν)`; first-order variables come first in
/// name order, then set variables in name order.
pub fn ktype(w: &FiniteWord, nu: &Valuation, k: usize) -> Result<KType> {
    ktype_with(w, nu, k, &TypeConfig::brute())
}

pub fn ktype_with(w: &FiniteWord, nu: &Valuation, k: usize, cfg: &TypeConfig) -> Result<KType> {
    let brute = match cfg.strategy {
        Strategy::Brute => true,
        Strategy::Compose => false,
        Strategy::Auto { brute_len } => w.len() <= brute_len,
    };
    let mut a = assignment(w, nu)?;
    if brute {
        cfg.budget.check(w.len(), k)?;
        let mut ar = lock();
        let id = ar.brute(w.letters(), &mut a, k)?;
        return Ok(KType { rank: k, id, epoch: ar.epoch });
    }
    if k > cfg.max_compose_rank {
        return Err(Error::budget("k-type concatenation", format!("rank {k} exceeds {}", cfg.max_compose_rank)));
    }
    let mut ar = lock();
    let m = a.pos.len();
    let mut acc = ar.brute(&[], &mut Assign { sig: a.sig, pos: vec![None; m], sets: vec![0; m] }, k)?;
    for (p, &letter) in w.letters().iter().enumerate() {
        let mut one = Assign {
            sig: a.sig,
            pos: a.pos.iter().map(|q| q.filter(|&q| q == p).map(|_| 0)).collect(),
            sets: a.sets.iter().map(|s| s >> p & 1).collect(),
        };
        let t = if m == 0 { ar.letter_type(letter, k)? } else { ar.brute(&[letter], &mut one, k)? };
        acc = ar.compose(acc, t)?;
    }
    Ok(KType { rank: k, id: acc, epoch: ar.epoch })
}

/// Sentence type of `w` under the default configuration.
pub fn sentence_type(w: &FiniteWord, k: usize) -> Result<KType> {
    ktype_with(w, &Valuation::new(), k, &TypeConfig::default())
}

/// `u ≡_k v`.
pub fn equiv_k(u: &FiniteWord, v: &FiniteWord, k: usize) -> Result<bool> {
    equiv_k_with(u, v, k, &TypeConfig::default())
}

pub fn equiv_k_with(u: &FiniteWord, v: &FiniteWord, k: usize, cfg: &TypeConfig) -> Result<bool> {
    let nu = Valuation::new();
    Ok(ktype_with(u, &nu, k, cfg)? == ktype_with(v, &nu, k, cfg)?)
}

/// Threshold `t` and period `p` of the unary words under `≡_k`, with `ℓ = t·p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct UnaryClassification {
    pub k: usize,
    pub t: u64,
    pub p: u64,
    pub l: u64,
}

impl UnaryClassification {
    /// The least length `≡_k`-equivalent to `0^g`.
    pub fn reduce(&self, g: u64) -> u64 {
        if g < self.t {
            g
        } else {
            self.t + (g - self.t) % self.p
        }
    }

    pub fn reduce_big(&self, g: &num_bigint::BigUint) -> u64 {
        use num_traits::ToPrimitive;
        match g.to_u64() {
            Some(g) => self.reduce(g),
            None => self.t + ((g - self.t) % self.p).to_u64().unwrap(),
        }
    }
}

pub fn unary_classify(k: usize) -> Result<UnaryClassification> {
    unary_classify_with(k, &TypeConfig::default())
}

/// Least `(t, p)` with `0^t ≡_k 0^{t+p}`, found as the first repetition in
/// the type sequence of `0, 00, 000, …`.
pub fn unary_classify_with(k: usize, cfg: &TypeConfig) -> Result<UnaryClassification> {
    let (t, p) = first_repeat(&FiniteWord(vec![0]), k, cfg)?;
    let c = UnaryClassification { k, t: t as u64, p: p as u64, l: (t * p) as u64 };
    let zeros = |n: u64| FiniteWord(vec![0; n as usize]);
    if !equiv_k_with(&zeros(c.l), &zeros(2 * c.l), k, cfg)? {
        return Err(Error::invalid(format!("0^{} and 0^{} differ at rank {k}", c.l, 2 * c.l)));
    }
    Ok(c)
}

/// Least `(i, j)` with `i, j ≥ 1` and `v^i ≡_k v^{i+j}`.
fn first_repeat(v: &FiniteWord, k: usize, cfg: &TypeConfig) -> Result<(usize, usize)> {
    let mut seen: HashMap<KType, usize> = HashMap::new();
    let mut tv: Option<KType> = None;
    let mut acc: Option<KType> = None;
    for n in 1.. {
        let len = v.len() * n;
        if len > cfg.max_search_len {
            return Err(Error::budget("idempotent search", format!("no repetition up to length {}", cfg.max_search_len)));
        }
        let brute = matches!(cfg.strategy, Strategy::Brute)
            || matches!(cfg.strategy, Strategy::Auto { brute_len } if len <= brute_len);
        let t = if brute {
            ktype_with(&v.pow(n), &Valuation::new(), k, cfg)?
        } else {
            // extend the previous power by one copy of v
            let one = match &tv {
                Some(t) => t.clone(),
                None => tv.insert(ktype_with(v, &Valuation::new(), k, cfg)?).clone(),
            };
            match &acc {
                Some(prev) if n > 1 => prev.concat(&one)?,
                _ => ktype_with(&v.pow(n - 1), &Valuation::new(), k, cfg)?.concat(&one)?,
            }
        };
        if let Some(&i) = seen.get(&t) {
            return Ok((i, n - i));
        }
        seen.insert(t.clone(), n);
        acc = Some(t);
    }
    unreachable!()
}

/// Least `b ≥ 1` with `v^b ≡_k v^{2b}`.
pub fn idempotent_exponent(v: &FiniteWord, k: usize) -> Result<usize> {
    idempotent_exponent_with(v, k, &TypeConfig::default())
}

pub fn idempotent_exponent_with(v: &FiniteWord, k: usize, cfg: &TypeConfig) -> Result<usize> {
    if v.is_empty() {
        return Err(Error::invalid("idempotent exponent of the empty word"));
    }
    let (i, j) = first_repeat(v, k, cfg)?;
    // v^b is idempotent iff b ≥ i and j | b
    Ok(i.div_ceil(j) * j)
}

/// `(x, y)` with `xy ≡_k x`, `yy ≡_k y` and `α = x y^ω`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RepresentativeUp {
    pub x: FiniteWord,
    pub y: FiniteWord,
}

/// `(x, y, z)` with `xy ≡_k yz ≡_k y`, `xx ≡_k x`, `zz ≡_k z` and `ξ = x^{ω*} y z^ω` up to shift.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RepresentativeBi {
    pub x: FiniteWord,
    pub y: FiniteWord,
    pub z: FiniteWord,
}

impl RepresentativeUp {
    pub fn word(&self) -> UpOmegaWord {
        UpOmegaWord { u: self.x.clone(), v: self.y.clone() }
    }

    pub fn check(&self, k: usize, cfg: &TypeConfig) -> Result<bool> {
        Ok(equiv_k_with(&self.x.concat(&self.y), &self.x, k, cfg)?
            && equiv_k_with(&self.y.concat(&self.y), &self.y, k, cfg)?)
    }
}

impl RepresentativeBi {
    pub fn word(&self) -> UpBiWord {
        UpBiWord { x: self.x.clone(), y: self.y.clone(), z: self.z.clone(), start: 0 }
    }

    pub fn check(&self, k: usize, cfg: &TypeConfig) -> Result<bool> {
        let e = |a: &FiniteWord, b: &FiniteWord| equiv_k_with(a, b, k, cfg);
        Ok(e(&self.x.concat(&self.y), &self.y)?
            && e(&self.y.concat(&self.z), &self.y)?
            && e(&self.x.concat(&self.x), &self.x)?
            && e(&self.z.concat(&self.z), &self.z)?)
    }
}

pub fn representative_up(a: &UpOmegaWord, k: usize) -> Result<RepresentativeUp> {
    representative_up_with(a, k, &TypeConfig::default())
}

pub fn representative_up_with(a: &UpOmegaWord, k: usize, cfg: &TypeConfig) -> Result<RepresentativeUp> {
    let b = idempotent_exponent_with(&a.v, k, cfg)?;
    let y = a.v.pow(b);
    let r = RepresentativeUp { x: a.u.concat(&y), y };
    if !r.check(k, cfg)? {
        return Err(Error::invalid(format!("representative of {a} fails its defining equations")));
    }
    Ok(r)
}

pub fn representative_bi(xi: &UpBiWord, k: usize) -> Result<RepresentativeBi> {
    representative_bi_with(xi, k, &TypeConfig::default())
}

pub fn representative_bi_with(xi: &UpBiWord, k: usize, cfg: &TypeConfig) -> Result<RepresentativeBi> {
    let b = idempotent_exponent_with(&xi.x, k, cfg)?;
    let c = idempotent_exponent_with(&xi.z, k, cfg)?;
    let (x, z) = (xi.x.pow(b), xi.z.pow(c));
    let r = RepresentativeBi { y: x.concat(&xi.y).concat(&z), x, z };
    if !r.check(k, cfg)? {
        return Err(Error::invalid(format!("representative of {xi} fails its defining equations")));
    }
    Ok(r)
}

/// Cut positions for ranks `0..=K`: `{h_i : i ≥ k}` is `k`-homogeneous.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomogeneousSet {
    pub positions: Vec<u64>,
    /// `exponents[k]` is the rank-k idempotent exponent of the loop.
    pub exponents: Vec<usize>,
}

/// Multipliers `c_i = (i+1)·∏_{k≤i} b_k`: each `c_i` with `i ≥ k` is a
/// multiple of `∏_{j≤k} b_j`, and the sequence strictly increases.
fn multipliers(exps: &[usize]) -> Vec<u64> {
    let mut prod = 1u64;
    exps.iter()
        .enumerate()
        .map(|(i, &b)| {
            prod *= b as u64;
            (i as u64 + 1) * prod
        })
        .collect()
}

fn exponents(v: &FiniteWord, big_k: usize, cfg: &TypeConfig) -> Result<Vec<usize>> {
    // one extra rank so the emitted prefix has K + 2 positions
    (0..=big_k + 1).map(|k| idempotent_exponent_with(v, k.min(big_k), cfg)).collect()
}

pub fn uniformly_homogeneous_up(a: &UpOmegaWord, big_k: usize) -> Result<HomogeneousSet> {
    uniformly_homogeneous_up_with(a, big_k, &TypeConfig::default())
}

pub fn uniformly_homogeneous_up_with(a: &UpOmegaWord, big_k: usize, cfg: &TypeConfig) -> Result<HomogeneousSet> {
    let exps = exponents(&a.v, big_k, cfg)?;
    let positions = multipliers(&exps).iter().map(|c| (a.u.len() + a.v.len() * *c as usize) as u64).collect();
    let h = HomogeneousSet { positions, exponents: exps };
    if !verify_homogeneous_up(a, &h.positions, big_k, cfg)? {
        return Err(Error::invalid(format!("homogeneous positions for {a} fail verification")));
    }
    Ok(h)
}

/// For each `k ≤ K`: all prefixes `α[0, h_i)` and all segments `α[h_i, h_j)`
/// with `k ≤ i < j` share a `k`-type.
pub fn verify_homogeneous_up(a: &UpOmegaWord, h: &[u64], big_k: usize, cfg: &TypeConfig) -> Result<bool> {
    if h.windows(2).any(|w| w[0] >= w[1]) {
        return Ok(false);
    }
    for k in 0..=big_k {
        let idx: Vec<usize> = (k..h.len()).collect();
        let prefixes: Vec<FiniteWord> = idx.iter().map(|&i| a.prefix(h[i] as usize)).collect();
        let mut segments = Vec::new();
        for (n, &i) in idx.iter().enumerate() {
            for &j in &idx[n + 1..] {
                segments.push(a.factor(h[i] as usize, h[j] as usize));
            }
        }
        if !all_equivalent(&prefixes, k, cfg)? || !all_equivalent(&segments, k, cfg)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn all_equivalent(ws: &[FiniteWord], k: usize, cfg: &TypeConfig) -> Result<bool> {
    let Some(first) = ws.first() else { return Ok(true) };
    let t = ktype_with(first, &Valuation::new(), k, cfg)?;
    for w in &ws[1..] {
        if ktype_with(w, &Valuation::new(), k, cfg)? != t {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Descending cut positions left of `y` and ascending ones right of it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomogeneousPair {
    pub left: Vec<i64>,
    pub right: Vec<i64>,
}

pub fn uniformly_homogeneous_bi(xi: &UpBiWord, big_k: usize) -> Result<HomogeneousPair> {
    uniformly_homogeneous_bi_with(xi, big_k, &TypeConfig::default())
}

pub fn uniformly_homogeneous_bi_with(xi: &UpBiWord, big_k: usize, cfg: &TypeConfig) -> Result<HomogeneousPair> {
    let lx = multipliers(&exponents(&xi.x, big_k, cfg)?);
    let lz = multipliers(&exponents(&xi.z, big_k, cfg)?);
    let pair = HomogeneousPair {
        left: lx.iter().map(|c| xi.start - xi.x.len() as i64 * *c as i64).collect(),
        right: lz.iter().map(|c| xi.end() + xi.z.len() as i64 * *c as i64).collect(),
    };
    if !verify_homogeneous_bi(xi, &pair, big_k, cfg)? {
        return Err(Error::invalid(format!("homogeneous pair for {xi} fails verification")));
    }
    Ok(pair)
}

/// For each `k ≤ K` and indices `≥ k`: left segments share a `k`-type, right
/// segments share a `k`-type, and every middle part `ξ[l_i, r_j)` shares a `k`-type.
pub fn verify_homogeneous_bi(xi: &UpBiWord, h: &HomogeneousPair, big_k: usize, cfg: &TypeConfig) -> Result<bool> {
    if h.left.windows(2).any(|w| w[0] <= w[1]) || h.right.windows(2).any(|w| w[0] >= w[1]) {
        return Ok(false);
    }
    if h.left.first().zip(h.right.first()).is_some_and(|(l, r)| l >= r) {
        return Ok(false);
    }
    for k in 0..=big_k {
        let (mut left, mut right, mut middle) = (Vec::new(), Vec::new(), Vec::new());
        for i in k..h.left.len() {
            for j in i + 1..h.left.len() {
                left.push(xi.factor(h.left[j], h.left[i]));
            }
        }
        for i in k..h.right.len() {
            for j in i + 1..h.right.len() {
                right.push(xi.factor(h.right[i], h.right[j]));
            }
        }
        for &l in &h.left[k.min(h.left.len())..] {
            for &r in &h.right[k.min(h.right.len())..] {
                middle.push(xi.factor(l, r));
            }
        }
        if !all_equivalent(&left, k, cfg)? || !all_equivalent(&right, k, cfg)? || !all_equivalent(&middle, k, cfg)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// An ω-word given either by a lasso or by gaps.
#[derive(Clone, Debug)]
pub enum OmegaWord {
    Up(UpOmegaWord),
    Gap(GapPredicateWord),
}

impl From<UpOmegaWord> for OmegaWord {
    fn from(a: UpOmegaWord) -> Self {
        OmegaWord::Up(a)
    }
}

impl From<GapPredicateWord> for OmegaWord {
    fn from(g: GapPredicateWord) -> Self {
        OmegaWord::Gap(g)
    }
}

/// `k ↦ (u, v)` with the word `k`-homogeneously factorised into `(u, v)`.
///
/// Gap words go through the normal form of [`crate::decide::gap_normal_form`],
/// which needs a certificate (given or found).
pub fn type_function_up(a: impl Into<OmegaWord>) -> impl Fn(usize) -> Result<RepresentativeUp> {
    let a = a.into();
    move |k| match &a {
        OmegaWord::Up(up) => representative_up(up, k),
        OmegaWord::Gap(g) => {
            let nf = crate::decide::gap_normal_form(g, k, &crate::decide::GapConfig::default())?;
            representative_up(&nf.word, k)
        }
    }
}

/// `k ↦ (u, v, w)` for a bi-infinite lasso word.
pub fn type_function_bi(xi: &UpBiWord) -> impl Fn(usize) -> Result<RepresentativeBi> {
    let xi = xi.clone();
    move |k| representative_bi(&xi, k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> FiniteWord {
        s.into()
    }

    #[test]
    fn small_examples() {
        let nu = Valuation::new();
        assert_eq!(ktype(&w("0"), &nu, 0).unwrap(), ktype(&w("1101"), &nu, 0).unwrap());
        assert_eq!(ktype(&w("0"), &nu, 1).unwrap(), ktype(&w("00"), &nu, 1).unwrap());
        assert_ne!(ktype(&w("0"), &nu, 2).unwrap(), ktype(&w("00"), &nu, 2).unwrap());
        assert!(equiv_k(&w("01"), &w("01"), 3).unwrap());
        assert!(!equiv_k(&w(""), &w("0"), 1).unwrap());
    }

    #[test]
    fn concatenation_matches_enumeration() {
        let brute = TypeConfig::brute();
        let comp = TypeConfig { strategy: Strategy::Compose, ..TypeConfig::default() };
        for k in 0..=2 {
            for u in FiniteWord::all_up_to(5) {
                let nu = Valuation::new();
                assert_eq!(ktype_with(&u, &nu, k, &brute).unwrap(), ktype_with(&u, &nu, k, &comp).unwrap(), "{u} k={k}");
            }
        }
        for u in FiniteWord::all_up_to(4).filter(|u| !u.is_empty()) {
            let last = u.len() as i64 - 1;
            let nu = Valuation::new().with("x", 0).with("y", last).with_set("X", [last]);
            for k in 0..=2 {
                assert_eq!(ktype_with(&u, &nu, k, &brute).unwrap(), ktype_with(&u, &nu, k, &comp).unwrap(), "{u} k={k}");
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let e = ktype(&FiniteWord(vec![0; 11]), &Valuation::new(), 2).unwrap_err();
        assert!(e.is_budget());
        assert!(ktype(&FiniteWord(vec![0; 8]), &Valuation::new(), 3).unwrap_err().is_budget());
    }

    #[test]
    fn unary_rank_one() {
        let c = unary_classify(1).unwrap();
        assert_eq!((c.t, c.p, c.l), (1, 1, 1));
        let c2 = unary_classify(2).unwrap();
        assert!(equiv_k(&FiniteWord(vec![0; c2.l as usize]), &FiniteWord(vec![0; 2 * c2.l as usize]), 2).unwrap());
    }

    #[test]
    fn representatives() {
        let r = representative_up(&UpOmegaWord::of("", "0"), 1).unwrap();
        assert_eq!((r.x.to_string(), r.y.to_string()), ("0".into(), "0".into()));
        let r = representative_bi(&UpBiWord::of("0", "", "0"), 1).unwrap();
        assert_eq!(r.y, w("00"));
        assert!(representative_bi(&UpBiWord::of("01", "0", "10"), 2).unwrap().check(2, &TypeConfig::default()).unwrap());
    }

    #[test]
    fn homogeneous_positions_verify() {
        let h = uniformly_homogeneous_up(&UpOmegaWord::of("1", "01"), 2).unwrap();
        assert_eq!(h.positions.len(), 4);
        let p = uniformly_homogeneous_bi(&UpBiWord::of("01", "1", "10"), 2).unwrap();
        assert_eq!(p.left.len(), 4);
    }
}
