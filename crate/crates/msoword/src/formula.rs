//! MSO syntax over labelled linear orders.
//!
//! First-order variables are lowercase identifiers, set variables uppercase.
//! `P(x)` reads track 0 of the word; `P1(x)` reads track 1 (used by folded
//! two-track words). Bound variables are renamed at parse time to `x<d>` /
//! `X<d>` where `d` is the binder depth plus an offset that keeps them apart
//! from free variables of the same shape, so alpha-equivalent inputs yield
//! equal values.
//!
//! Macros (`succ`, `divides`) are expanded into core syntax. `cong(n,x,y)` is a
//! native atom with the meaning of `divides(n,x,y)` that keeps automata small
//! for large moduli; its quantifier rank is that of the expansion.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    /// Letter predicate on a track: `P(x)` (track 0) or `P<t>(x)`.
    Letter { track: usize, var: String },
    Le(String, String),
    Lt(String, String),
    Eq(String, String),
    /// Set membership `X(x)`.
    In { set: String, var: String },
    /// `x ≤ y` and `n` divides `y − x`.
    Cong { n: u64, x: String, y: String },
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists2(String, Box<Formula>),
    Forall2(String, Box<Formula>),
}

use Formula::*;

pub fn is_set_var(name: &str) -> bool {
    name.chars().next().is_some_and(|c| c.is_ascii_uppercase())
}

/// Assignment of free variables: positions for first-order variables and
/// position sets for set variables.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Valuation {
    pub fo: BTreeMap<String, i64>,
    pub sets: BTreeMap<String, BTreeSet<i64>>,
}

impl Valuation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, var: &str, pos: i64) -> Self {
        self.fo.insert(var.to_string(), pos);
        self
    }

    pub fn with_set(mut self, var: &str, set: impl IntoIterator<Item = i64>) -> Self {
        self.sets.insert(var.to_string(), set.into_iter().collect());
        self
    }
}

// ---------------------------------------------------------------- builders

pub fn not(a: Formula) -> Formula {
    Not(Box::new(a))
}

pub fn and(a: Formula, b: Formula) -> Formula {
    And(Box::new(a), Box::new(b))
}

pub fn or(a: Formula, b: Formula) -> Formula {
    Or(Box::new(a), Box::new(b))
}

pub fn implies(a: Formula, b: Formula) -> Formula {
    Implies(Box::new(a), Box::new(b))
}

pub fn exists(x: &str, a: Formula) -> Formula {
    Exists(x.into(), Box::new(a))
}

pub fn forall(x: &str, a: Formula) -> Formula {
    Forall(x.into(), Box::new(a))
}

pub fn exists2(x: &str, a: Formula) -> Formula {
    Exists2(x.into(), Box::new(a))
}

pub fn forall2(x: &str, a: Formula) -> Formula {
    Forall2(x.into(), Box::new(a))
}

pub fn letter(x: &str) -> Formula {
    Letter { track: 0, var: x.into() }
}

pub fn le(x: &str, y: &str) -> Formula {
    Le(x.into(), y.into())
}

pub fn lt(x: &str, y: &str) -> Formula {
    Lt(x.into(), y.into())
}

pub fn eq(x: &str, y: &str) -> Formula {
    Eq(x.into(), y.into())
}

pub fn member(set: &str, x: &str) -> Formula {
    In { set: set.into(), var: x.into() }
}

/// Conjunction of a nonempty list.
pub fn and_all(mut items: Vec<Formula>) -> Formula {
    let first = items.remove(0);
    items.into_iter().fold(first, and)
}

impl Formula {
    /// Quantifier rank; `cong(n,…)` counts as its macro expansion.
    pub fn qr(&self) -> usize {
        match self {
            True | False | Letter { .. } | Le(..) | Lt(..) | Eq(..) | In { .. } => 0,
            Cong { n, .. } => divides_rank(*n),
            Not(a) => a.qr(),
            And(a, b) | Or(a, b) | Implies(a, b) => a.qr().max(b.qr()),
            Exists(_, a) | Forall(_, a) | Exists2(_, a) | Forall2(_, a) => a.qr() + 1,
        }
    }

    /// Free variables in order of first occurrence.
    pub fn free_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut bound = Vec::new();
        self.collect_free(&mut bound, &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut Vec<String>) {
        let mut add = |v: &String, bound: &Vec<String>| {
            if !bound.contains(v) && !out.contains(v) {
                out.push(v.clone());
            }
        };
        match self {
            True | False => {}
            Letter { var, .. } => add(var, bound),
            Le(x, y) | Lt(x, y) | Eq(x, y) | Cong { x, y, .. } => {
                add(x, bound);
                add(y, bound);
            }
            In { set, var } => {
                add(set, bound);
                add(var, bound);
            }
            Not(a) => a.collect_free(bound, out),
            And(a, b) | Or(a, b) | Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Exists(v, a) | Forall(v, a) | Exists2(v, a) | Forall2(v, a) => {
                bound.push(v.clone());
                a.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// All variable names occurring anywhere, bound or free.
    pub fn all_vars(&self) -> BTreeSet<String> {
        let mut s = BTreeSet::new();
        self.visit(&mut |f| match f {
            Letter { var, .. } => {
                s.insert(var.clone());
            }
            Le(x, y) | Lt(x, y) | Eq(x, y) | Cong { x, y, .. } => {
                s.insert(x.clone());
                s.insert(y.clone());
            }
            In { set, var } => {
                s.insert(set.clone());
                s.insert(var.clone());
            }
            Exists(v, _) | Forall(v, _) | Exists2(v, _) | Forall2(v, _) => {
                s.insert(v.clone());
            }
            _ => {}
        });
        s
    }

    fn visit(&self, f: &mut impl FnMut(&Formula)) {
        f(self);
        match self {
            Not(a) | Exists(_, a) | Forall(_, a) | Exists2(_, a) | Forall2(_, a) => a.visit(f),
            And(a, b) | Or(a, b) | Implies(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            _ => {}
        }
    }

    /// Largest letter track read by the formula.
    pub fn max_track(&self) -> Option<usize> {
        let mut m = None;
        self.visit(&mut |f| {
            if let Letter { track, .. } = f {
                m = Some(m.map_or(*track, |x: usize| x.max(*track)));
            }
        });
        m
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }

    /// Renames bound variables canonically (see the module documentation).
    pub fn canonicalize(&self) -> Formula {
        self.canonicalize_avoiding(&[])
    }

    /// Canonical renaming that also keeps bound names distinct from `avoid`.
    pub fn canonicalize_avoiding(&self, avoid: &[String]) -> Formula {
        let mut off = 0;
        for v in self.free_vars().iter().chain(avoid) {
            if let Some(d) = v.strip_prefix(['x', 'X']).and_then(|d| d.parse::<usize>().ok()) {
                off = off.max(d + 1);
            }
        }
        self.rename(&mut HashMap::new(), 0, off)
    }

    fn rename(&self, env: &mut HashMap<String, Vec<String>>, depth: usize, off: usize) -> Formula {
        let r = |v: &String, env: &HashMap<String, Vec<String>>| env.get(v).and_then(|s| s.last()).cloned().unwrap_or_else(|| v.clone());
        match self {
            True => True,
            False => False,
            Letter { track, var } => Letter { track: *track, var: r(var, env) },
            Le(x, y) => Le(r(x, env), r(y, env)),
            Lt(x, y) => Lt(r(x, env), r(y, env)),
            Eq(x, y) => Eq(r(x, env), r(y, env)),
            Cong { n, x, y } => Cong { n: *n, x: r(x, env), y: r(y, env) },
            In { set, var } => In { set: r(set, env), var: r(var, env) },
            Not(a) => not(a.rename(env, depth, off)),
            And(a, b) => and(a.rename(env, depth, off), b.rename(env, depth, off)),
            Or(a, b) => or(a.rename(env, depth, off), b.rename(env, depth, off)),
            Implies(a, b) => implies(a.rename(env, depth, off), b.rename(env, depth, off)),
            Exists(v, a) | Forall(v, a) | Exists2(v, a) | Forall2(v, a) => {
                let name = format!("{}{}", if is_set_var(v) { 'X' } else { 'x' }, depth + off);
                env.entry(v.clone()).or_default().push(name.clone());
                let body = Box::new(a.rename(env, depth + 1, off));
                env.get_mut(v).unwrap().pop();
                match self {
                    Exists(..) => Exists(name, body),
                    Forall(..) => Forall(name, body),
                    Exists2(..) => Exists2(name, body),
                    _ => Forall2(name, body),
                }
            }
        }
    }

    /// Replaces every `cong` atom by its macro expansion.
    pub fn expand_native(&self) -> Formula {
        self.map_atoms(&|f| match f {
            Cong { n, x, y } => Some(divides_expansion(*n, x, y)),
            _ => None,
        })
        .canonicalize()
    }

    fn map_atoms(&self, f: &impl Fn(&Formula) -> Option<Formula>) -> Formula {
        if let Some(g) = f(self) {
            return g;
        }
        match self {
            Not(a) => not(a.map_atoms(f)),
            And(a, b) => and(a.map_atoms(f), b.map_atoms(f)),
            Or(a, b) => or(a.map_atoms(f), b.map_atoms(f)),
            Implies(a, b) => implies(a.map_atoms(f), b.map_atoms(f)),
            Exists(v, a) => exists(v, a.map_atoms(f)),
            Forall(v, a) => forall(v, a.map_atoms(f)),
            Exists2(v, a) => exists2(v, a.map_atoms(f)),
            Forall2(v, a) => forall2(v, a.map_atoms(f)),
            other => other.clone(),
        }
    }
}

// ---------------------------------------------------------------- macros

/// A first-order name starting with `base` that is not in `avoid`.
fn fresh(base: &str, avoid: &mut BTreeSet<String>) -> String {
    let mut i = 0;
    loop {
        let c = format!("{base}{i}");
        if !avoid.contains(&c) {
            avoid.insert(c.clone());
            return c;
        }
        i += 1;
    }
}

fn succ_with(x: &str, z: &str, avoid: &mut BTreeSet<String>) -> Formula {
    let y = fresh("s", avoid);
    and(lt(x, z), not(exists(&y, and(lt(x, &y), lt(&y, z)))))
}

/// `succ(x,z)`: `z` is the successor of `x`.
pub fn macro_succ(x: &str, z: &str) -> Formula {
    let mut avoid = BTreeSet::from([x.to_string(), z.to_string()]);
    succ_with(x, z, &mut avoid).canonicalize()
}

/// `φ(z − n)`: there is a position `n` steps before `z` satisfying `body`.
/// The successor chain is nested so that at most three first-order
/// variables are live at any point.
pub fn macro_back(n: usize, z: &str, body: impl Fn(&str) -> Formula) -> Formula {
    let mut avoid = BTreeSet::from([z.to_string()]);
    back_with(n, z, &body, &mut avoid).canonicalize()
}

fn back_with(n: usize, z: &str, body: &dyn Fn(&str) -> Formula, avoid: &mut BTreeSet<String>) -> Formula {
    if n == 0 {
        return body(z);
    }
    let vars: Vec<String> = (0..n).map(|_| fresh("c", avoid)).collect();
    // innermost: ∃ v_{n-1} (succ(v_{n-2}, v_{n-1}) ∧ succ(v_{n-1}, z))
    let mut inner = succ_with(&vars[n - 1], z, avoid);
    for i in (1..n).rev() {
        inner = exists(&vars[i], and(succ_with(&vars[i - 1], &vars[i], avoid), inner));
    }
    exists(&vars[0], and(body(&vars[0]), inner))
}

/// `φ(y + n)`: there is a position `n` steps after `y` satisfying `body`.
pub fn macro_forward(n: usize, y: &str, body: impl Fn(&str) -> Formula) -> Formula {
    let mut avoid = BTreeSet::from([y.to_string()]);
    forward_with(n, y, &body, &mut avoid).canonicalize()
}

fn forward_with(n: usize, y: &str, body: &dyn Fn(&str) -> Formula, avoid: &mut BTreeSet<String>) -> Formula {
    if n == 0 {
        return body(y);
    }
    let next = fresh("c", avoid);
    let rest = forward_with(n - 1, &next, body, avoid);
    exists(&next, and(succ_with(y, &next, avoid), rest))
}

/// Quantifier rank of `divides(n,x,y)`.
pub fn divides_rank(n: u64) -> usize {
    n as usize + 3
}

fn divides_expansion(n: u64, x: &str, y: &str) -> Formula {
    let mut avoid = BTreeSet::from([x.to_string(), y.to_string()]);
    let set = {
        let mut i = 0;
        loop {
            let c = format!("D{i}");
            if !avoid.contains(&c) {
                break c;
            }
            i += 1;
        }
    };
    let z = fresh("d", &mut avoid);
    let step = back_with(n as usize, &z, &|v| member(&set, v), &mut avoid);
    let rhs = or(eq(&z, x), and(lt(x, &z), step));
    let body = and(implies(member(&set, &z), rhs.clone()), implies(rhs, member(&set, &z)));
    exists2(&set, and(forall(&z, body), member(&set, y)))
}

/// `divides(n,x,y)`: `x ≤ y` and `n ∣ y − x`, expanded into core syntax.
pub fn macro_divides(n: u64, x: &str, y: &str) -> Result<Formula> {
    if n == 0 {
        return Err(Error::invalid("divides needs a positive modulus"));
    }
    Ok(divides_expansion(n, x, y).canonicalize())
}

/// The native atom with the meaning of `divides(n,x,y)`.
pub fn cong(n: u64, x: &str, y: &str) -> Result<Formula> {
    if n == 0 {
        return Err(Error::invalid("cong needs a positive modulus"));
    }
    Ok(Cong { n, x: x.into(), y: y.into() })
}

// ---------------------------------------------------------------- transformations

/// Restricts all quantifiers of the sentence `phi` to the interval `[x, y]`.
pub fn relativize(phi: &Formula, x: &str, y: &str) -> Result<Formula> {
    if is_set_var(x) || is_set_var(y) || x == y {
        return Err(Error::invalid("relativization needs two distinct first-order variables"));
    }
    for v in phi.free_vars() {
        if v == x || v == y {
            return Err(Error::Capture(v));
        }
        return Err(Error::Unbound(v));
    }
    let avoid = [x.to_string(), y.to_string()];
    let phi = phi.canonicalize_avoiding(&avoid);
    fn go(f: &Formula, x: &str, y: &str) -> Formula {
        let guard = |z: &str| and(le(x, z), le(z, y));
        match f {
            Not(a) => not(go(a, x, y)),
            And(a, b) => and(go(a, x, y), go(b, x, y)),
            Or(a, b) => or(go(a, x, y), go(b, x, y)),
            Implies(a, b) => implies(go(a, x, y), go(b, x, y)),
            Exists(z, a) => exists(z, and(guard(z), go(a, x, y))),
            Forall(z, a) => forall(z, implies(guard(z), go(a, x, y))),
            Exists2(z, a) => exists2(z, go(a, x, y)),
            Forall2(z, a) => forall2(z, go(a, x, y)),
            other => other.clone(),
        }
    }
    Ok(go(&phi, x, y).canonicalize())
}

/// Swaps the sides of every order atom: `w ⊨ φ` iff `wᴿ ⊨ reverse_formula(φ)`.
pub fn reverse_formula(phi: &Formula) -> Formula {
    phi.map_atoms(&|f| match f {
        Le(x, y) => Some(Le(y.clone(), x.clone())),
        Lt(x, y) => Some(Lt(y.clone(), x.clone())),
        Cong { n, x, y } => Some(Cong { n: *n, x: y.clone(), y: x.clone() }),
        _ => None,
    })
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    Right,
    Left,
}

/// Translates a sentence over ℤ into a sentence over two-track ω-words, where
/// position `n ≥ 0` becomes `(n, Right)` (track 0) and `n < 0` becomes
/// `(−n−1, Left)` (track 1).
pub fn fold_to_omega(phi: &Formula) -> Result<Formula> {
    if let Some(v) = phi.free_vars().into_iter().next() {
        return Err(Error::Unbound(v));
    }
    if phi.max_track().unwrap_or(0) > 0 {
        return Err(Error::invalid("folding expects formulas over track 0 only"));
    }
    let phi = phi.expand_native();
    fn go(f: &Formula, side: &HashMap<String, Side>) -> Formula {
        let s = |v: &String| side[v];
        match f {
            True => True,
            False => False,
            Letter { var, .. } => Letter { track: (s(var) == Side::Left) as usize, var: var.clone() },
            In { set, var } => member(&format!("{set}{}", if s(var) == Side::Left { "_l" } else { "_r" }), var),
            Le(x, y) | Lt(x, y) => {
                let strict = matches!(f, Lt(..));
                let atom = |a: &String, b: &String| if strict { Lt(a.clone(), b.clone()) } else { Le(a.clone(), b.clone()) };
                match (s(x), s(y)) {
                    (Side::Right, Side::Right) => atom(x, y),
                    (Side::Left, Side::Left) => atom(y, x),
                    (Side::Left, Side::Right) => True,
                    (Side::Right, Side::Left) => False,
                }
            }
            Eq(x, y) => {
                if s(x) == s(y) {
                    Eq(x.clone(), y.clone())
                } else {
                    False
                }
            }
            Cong { .. } => unreachable!("expanded before folding"),
            Not(a) => not(go(a, side)),
            And(a, b) => and(go(a, side), go(b, side)),
            Or(a, b) => or(go(a, side), go(b, side)),
            Implies(a, b) => implies(go(a, side), go(b, side)),
            Exists(v, a) | Forall(v, a) => {
                let mut r = side.clone();
                r.insert(v.clone(), Side::Right);
                let mut l = side.clone();
                l.insert(v.clone(), Side::Left);
                if matches!(f, Exists(..)) {
                    or(exists(v, go(a, &r)), exists(v, go(a, &l)))
                } else {
                    and(forall(v, go(a, &r)), forall(v, go(a, &l)))
                }
            }
            Exists2(v, a) | Forall2(v, a) => {
                let (r, l) = (format!("{v}_r"), format!("{v}_l"));
                let body = go(a, side);
                if matches!(f, Exists2(..)) {
                    exists2(&r, exists2(&l, body))
                } else {
                    forall2(&r, forall2(&l, body))
                }
            }
        }
    }
    Ok(go(&phi, &HashMap::new()).canonicalize())
}

// ---------------------------------------------------------------- printing

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print(self, 0))
    }
}

fn print(phi: &Formula, ctx: u8) -> String {
    let wrap = |s: String, level: u8| if ctx > level { format!("({s})") } else { s };
    match phi {
        True => "true".into(),
        False => "false".into(),
        Letter { track: 0, var } => format!("P({var})"),
        Letter { track, var } => format!("P{track}({var})"),
        Le(x, y) => format!("{x} <= {y}"),
        Lt(x, y) => format!("{x} < {y}"),
        Eq(x, y) => format!("{x} = {y}"),
        In { set, var } => format!("{set}({var})"),
        Cong { n, x, y } => format!("cong({n},{x},{y})"),
        Not(a) => format!("!{}", print(a, 3)),
        And(a, b) => wrap(format!("{} & {}", print(a, 2), print(b, 3)), 2),
        Or(a, b) => wrap(format!("{} | {}", print(a, 1), print(b, 2)), 1),
        Implies(a, b) => wrap(format!("{} -> {}", print(a, 1), print(b, 0)), 0),
        Exists(v, a) => wrap(format!("E {v}. {}", print(a, 0)), 0),
        Forall(v, a) => wrap(format!("A {v}. {}", print(a, 0)), 0),
        Exists2(v, a) => wrap(format!("E2 {v}. {}", print(a, 0)), 0),
        Forall2(v, a) => wrap(format!("A2 {v}. {}", print(a, 0)), 0),
    }
}

// ---------------------------------------------------------------- parsing

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Num(u64),
    LParen,
    RParen,
    Comma,
    Dot,
    Bang,
    Amp,
    Bar,
    Arrow,
    LeTok,
    LtTok,
    EqTok,
    End,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), col));
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            let n = s.parse().map_err(|_| Error::Syntax { column: col, message: "number too large".into() })?;
            out.push((Tok::Num(n), col));
            continue;
        }
        let two: String = chars[i..(i + 2).min(chars.len())].iter().collect();
        let (tok, len) = match (c, two.as_str()) {
            (_, "->") => (Tok::Arrow, 2),
            (_, "<=") => (Tok::LeTok, 2),
            ('<', _) => (Tok::LtTok, 1),
            ('=', _) => (Tok::EqTok, 1),
            ('(', _) => (Tok::LParen, 1),
            (')', _) => (Tok::RParen, 1),
            (',', _) => (Tok::Comma, 1),
            ('.', _) => (Tok::Dot, 1),
            ('!', _) => (Tok::Bang, 1),
            ('&', _) => (Tok::Amp, 1),
            ('|', _) => (Tok::Bar, 1),
            _ => return Err(Error::Syntax { column: col, message: format!("unexpected character `{c}`") }),
        };
        out.push((tok, col));
        i += len;
    }
    out.push((Tok::End, chars.len() + 1));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

fn letter_track(name: &str) -> Option<usize> {
    let rest = name.strip_prefix('P')?;
    if rest.is_empty() {
        Some(0)
    } else if rest.chars().all(|c| c.is_ascii_digit()) {
        rest.parse().ok()
    } else {
        None
    }
}

const KEYWORDS: [&str; 9] = ["E", "A", "E2", "A2", "true", "false", "succ", "divides", "cong"];

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn col(&self) -> usize {
        self.toks[self.pos].1
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { column: self.col(), message: msg.into() })
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<()> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn fvar(&mut self) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(s) if !is_set_var(&s) && !KEYWORDS.contains(&s.as_str()) => {
                self.bump();
                Ok(s)
            }
            _ => self.err("expected a first-order variable"),
        }
    }

    fn svar(&mut self) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(s) if is_set_var(&s) && !KEYWORDS.contains(&s.as_str()) && letter_track(&s).is_none() => {
                self.bump();
                Ok(s)
            }
            _ => self.err("expected a set variable"),
        }
    }

    fn num(&mut self) -> Result<u64> {
        match self.peek().clone() {
            Tok::Num(n) => {
                self.bump();
                Ok(n)
            }
            _ => self.err("expected a number"),
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.formula()?;
            return Ok(implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut f = self.conjunction()?;
        while *self.peek() == Tok::Bar {
            self.bump();
            f = or(f, self.conjunction()?);
        }
        Ok(f)
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut f = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            f = and(f, self.unary()?);
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek().clone() {
            Tok::Bang => {
                self.bump();
                Ok(not(self.unary()?))
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Tok::Ident(s) => match s.as_str() {
                "E" | "A" => {
                    self.bump();
                    let v = self.fvar()?;
                    self.expect(Tok::Dot, "`.` after the quantified variable")?;
                    let body = self.formula()?;
                    Ok(if s == "E" { exists(&v, body) } else { forall(&v, body) })
                }
                "E2" | "A2" => {
                    self.bump();
                    let v = self.svar()?;
                    self.expect(Tok::Dot, "`.` after the quantified variable")?;
                    let body = self.formula()?;
                    Ok(if s == "E2" { exists2(&v, body) } else { forall2(&v, body) })
                }
                "true" => {
                    self.bump();
                    Ok(True)
                }
                "false" => {
                    self.bump();
                    Ok(False)
                }
                "succ" => {
                    self.bump();
                    self.expect(Tok::LParen, "`(`")?;
                    let x = self.fvar()?;
                    self.expect(Tok::Comma, "`,`")?;
                    let y = self.fvar()?;
                    self.expect(Tok::RParen, "`)`")?;
                    Ok(macro_succ(&x, &y))
                }
                "divides" | "cong" => {
                    self.bump();
                    self.expect(Tok::LParen, "`(`")?;
                    let c = self.col();
                    let n = self.num()?;
                    if n == 0 {
                        return Err(Error::Syntax { column: c, message: "modulus must be positive".into() });
                    }
                    self.expect(Tok::Comma, "`,`")?;
                    let x = self.fvar()?;
                    self.expect(Tok::Comma, "`,`")?;
                    let y = self.fvar()?;
                    self.expect(Tok::RParen, "`)`")?;
                    if s == "cong" {
                        cong(n, &x, &y)
                    } else {
                        macro_divides(n, &x, &y)
                    }
                }
                _ if letter_track(&s).is_some() => {
                    self.bump();
                    self.expect(Tok::LParen, "`(`")?;
                    let x = self.fvar()?;
                    self.expect(Tok::RParen, "`)`")?;
                    Ok(Letter { track: letter_track(&s).unwrap(), var: x })
                }
                _ if is_set_var(&s) => {
                    let set = self.svar()?;
                    self.expect(Tok::LParen, "`(`")?;
                    let x = self.fvar()?;
                    self.expect(Tok::RParen, "`)`")?;
                    Ok(member(&set, &x))
                }
                _ => {
                    let x = self.fvar()?;
                    let op = self.bump();
                    let y = self.fvar()?;
                    match op {
                        Tok::LeTok => Ok(le(&x, &y)),
                        Tok::LtTok => Ok(lt(&x, &y)),
                        Tok::EqTok => Ok(eq(&x, &y)),
                        _ => {
                            self.pos -= 2;
                            self.err("expected `<=`, `<` or `=`")
                        }
                    }
                }
            },
            Tok::End => self.err("unexpected end of input"),
            _ => self.err("expected a formula"),
        }
    }
}

/// Parses a formula; free variables are allowed.
pub fn parse(text: &str) -> Result<Formula> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let f = p.formula()?;
    if *p.peek() != Tok::End {
        return p.err("unexpected trailing input");
    }
    Ok(f.canonicalize())
}

/// Parses a sentence, rejecting free variables.
pub fn parse_sentence(text: &str) -> Result<Formula> {
    let f = parse(text)?;
    match f.free_vars().into_iter().next() {
        Some(v) => Err(Error::Unbound(v)),
        None => Ok(f),
    }
}

/// A fixed corpus of sentences of quantifier rank at most 3 over track 0.
pub const CORPUS: &[&str] = &[
    "true",
    "false",
    "E x. P(x)",
    "A x. P(x)",
    "E x. !P(x)",
    "E x. A y. x <= y",
    "E x. A y. y <= x",
    "E x. P(x) & (A y. y <= x)",
    "E x. P(x) & (A y. x <= y)",
    "E x. E y. x < y & P(x) & P(y)",
    "E x. E y. succ(x, y) & P(x) & P(y)",
    "A x. A y. succ(x, y) -> !(P(x) & P(y))",
    "E x. E y. !(x = y)",
    "A x. A y. x = y",
    "E2 X. A z. X(z)",
    "E2 X. (E x. X(x)) & (A y. X(y) -> P(y))",
    "E2 X. A x. (X(x) -> P(x)) & (P(x) -> X(x))",
    "A x. P(x) -> (E y. x < y & !P(y))",
    "A x. E y. x <= y & P(y)",
    "E x. A y. x < y -> !P(y)",
    "E2 X. (A x. X(x) -> P(x)) & (E y. X(y))",
    "A2 X. (E x. X(x)) -> (E y. X(y) & (A z. X(z) -> y <= z))",
    "A2 X. E x. X(x)",
    "E2 X. E2 Y. A x. X(x) | Y(x)",
    "E x. E y. E z. x < y & y < z & P(x) & !P(y) & P(z)",
    "A x. A y. A z. (P(x) & P(y) & P(z)) -> (x = y | y = z | x = z)",
    "E x. P(x) & (E y. y < x & P(y))",
    "E x. E y. x < y & !P(x) & !P(y)",
    "A x. !P(x) -> (A y. x < y -> !P(y))",
    "A x. P(x) -> (A y. y < x -> P(y))",
    "E x. P(x) & (A y. P(y) -> y = x)",
    "A x. E y. y < x | x = y",
    "E x. x < x",
    "A x. P(x) | !P(x)",
    "E x. A y. y <= x -> P(y)",
    "A x. A y. (x < y & P(x)) -> P(y)",
    "E2 X. (A x. X(x) -> !P(x)) & (A x. !P(x) -> X(x)) & (E y. X(y))",
    "E x. P(x) & (E y. succ(x, y) & !P(y))",
    "A x. P(x) -> (E y. succ(x, y))",
    "E x. E y. succ(x, y) & !P(x) & P(y)",
    "A2 X. (A x. X(x) -> P(x)) -> (A y. X(y) -> P(y))",
    "E2 X. (E x. X(x) & !P(x)) & (A y. X(y) -> (E z. z < y))",
    "A x. E y. x < y",
    "E x. E y. succ(x, y) & (A z. z <= y)",
];

/// The parsed [`CORPUS`].
pub fn corpus() -> Vec<Formula> {
    CORPUS.iter().map(|s| parse_sentence(s).expect("corpus sentence")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        let f = parse("E x. P(x)").unwrap();
        assert_eq!(f, exists("x0", letter("x0")));
        let g = parse("E2 X. A z. X(z)").unwrap();
        assert_eq!(g, exists2("X0", forall("x1", member("X0", "x1"))));
        match parse("P(x") {
            Err(Error::Syntax { column, .. }) => assert_eq!(column, 4),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn ranks() {
        assert_eq!(parse("P(x)").unwrap().qr(), 0);
        assert_eq!(parse("E x. P(x)").unwrap().qr(), 1);
        assert_eq!(parse("E x. A y. x <= y").unwrap().qr(), 2);
        for n in 1..5 {
            assert_eq!(macro_divides(n, "x", "y").unwrap().qr(), divides_rank(n));
        }
    }

    #[test]
    fn alpha_equivalent_inputs_are_equal() {
        assert_eq!(parse("E u. A v. u <= v").unwrap(), parse("E a. A b. a <= b").unwrap());
    }

    #[test]
    fn free_variable_clash_shifts_bound_names() {
        let f = parse("x0 < x1 & E y. y = x0").unwrap();
        assert_eq!(f.free_vars(), vec!["x0".to_string(), "x1".to_string()]);
        assert!(f.all_vars().contains("x2"));
    }

    #[test]
    fn print_round_trip() {
        for s in [
            "E x. P(x) & !x < x",
            "(E x. P(x)) & true",
            "A x. E y. x <= y & P(y)",
            "P(a) -> P(b) -> P(c)",
            "(P(a) -> P(b)) -> P(c)",
            "x < y | (y < z | z = x)",
            "!(E2 X. X(x)) -> P1(y)",
            "cong(5,x,y)",
            "succ(x, y)",
        ]
        {
            let f = parse(s).unwrap();
            assert_eq!(parse(&f.to_string()).unwrap(), f, "{s}");
        }
    }

    #[test]
    fn unbound_sentence() {
        assert_eq!(parse_sentence("P(x)"), Err(Error::Unbound("x".into())));
    }

    #[test]
    fn reverse_swaps_order() {
        assert_eq!(reverse_formula(&le("x", "y")), le("y", "x"));
    }

    #[test]
    fn fold_of_exists_letter() {
        let f = fold_to_omega(&parse("E x. P(x)").unwrap()).unwrap();
        let expected = or(exists("x0", letter("x0")), exists("x0", Letter { track: 1, var: "x0".into() }));
        assert_eq!(f, expected);
    }

    #[test]
    fn relativize_rejects_capture() {
        let f = parse("E z. P(z)").unwrap();
        assert!(relativize(&f, "x", "y").is_ok());
        assert!(matches!(relativize(&parse("P(x)").unwrap(), "x", "y"), Err(Error::Capture(_))));
    }
}
