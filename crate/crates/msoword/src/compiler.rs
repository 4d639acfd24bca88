//! Translation of formulas into automata.
//!
//! A subformula with free variables `v₁ … v_m` (first-occurrence order) is
//! compiled over `base + m` tracks: the `base` letter tracks followed by one
//! track per variable. First-order variables are arbitrary tracks inside the
//! induction; the "exactly one mark" constraint is conjoined when the variable
//! is quantified, and for free first-order variables at the top level.
//!
//! Finite-word semantics compile to DFAs. ω-word semantics compile to lasso
//! DFAs (see [`crate::automata::lasso`]); an NBA is derived on demand.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::automata::{lasso, Dfa, Nba};
use crate::formula::{is_set_var, Formula, Valuation};
use crate::words::{FiniteWord, UpOmegaWord};
use crate::{Error, Result};

/// Which semantics a compiled automaton realizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Finite,
    Omega,
}

/// Peak sizes seen during one compilation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    pub peak_states: usize,
    pub final_states: usize,
}

/// A formula together with its automaton.
#[derive(Clone, Debug)]
pub struct CompiledFormula {
    pub formula: Formula,
    pub mode: Mode,
    /// Number of letter tracks preceding the variable tracks.
    pub base: usize,
    /// Free variables; variable `vars[i]` occupies track `base + i`.
    pub vars: Vec<String>,
    /// A DFA for finite semantics, a lasso DFA for ω semantics.
    pub dfa: Dfa,
    pub stats: Stats,
}

impl CompiledFormula {
    pub fn width(&self) -> usize {
        self.base + self.vars.len()
    }

    fn track_of(&self, v: &str) -> Option<usize> {
        self.vars.iter().position(|x| x == v).map(|i| self.base + i)
    }

    /// Letters of `w` with the valuation's marks added on the variable tracks.
    pub fn encode(&self, w: &[u8], nu: &Valuation, len: usize) -> Result<Vec<u32>> {
        let mut out: Vec<u32> = (0..len).map(|i| w.get(i).copied().unwrap_or(0) as u32).collect();
        for v in &self.vars {
            let t = self.track_of(v).unwrap();
            if is_set_var(v) {
                let s = nu.sets.get(v).ok_or_else(|| Error::Unbound(v.clone()))?;
                for &p in s {
                    if p < 0 || p as usize >= len {
                        return Err(Error::invalid(format!("position {p} of `{v}` outside the encoded prefix")));
                    }
                    out[p as usize] |= 1 << t;
                }
            } else {
                let &p = nu.fo.get(v).ok_or_else(|| Error::Unbound(v.clone()))?;
                if p < 0 || p as usize >= len {
                    return Err(Error::invalid(format!("position {p} of `{v}` outside the encoded prefix")));
                }
                out[p as usize] |= 1 << t;
            }
        }
        Ok(out)
    }

    /// Finite-word acceptance of `(w, ν)`.
    pub fn accepts(&self, w: &FiniteWord, nu: &Valuation) -> Result<bool> {
        if self.mode != Mode::Finite {
            return Err(Error::invalid("automaton was compiled for ω-words"));
        }
        Ok(self.dfa.accepts_letters(&self.encode(w.letters(), nu, w.len())?))
    }

    /// ω-word acceptance of `(u v^ω, ν)`; marks must lie inside `u`.
    pub fn accepts_up(&self, u: &[u8], v: &[u8], nu: &Valuation) -> Result<bool> {
        if self.mode != Mode::Omega {
            return Err(Error::invalid("automaton was compiled for finite words"));
        }
        let pre = self.encode(u, nu, u.len())?;
        let lp: Vec<u32> = v.iter().map(|&a| a as u32).collect();
        lasso::accepts_up(&self.dfa, &pre, &lp)
    }

    pub fn accepts_word(&self, a: &UpOmegaWord) -> Result<bool> {
        self.accepts_up(a.u.letters(), a.v.letters(), &Valuation::new())
    }

    /// A Büchi automaton for the ω-language (ω mode only).
    pub fn nba(&self) -> Result<Nba> {
        if self.mode != Mode::Omega {
            return Err(Error::invalid("an NBA exists only for ω-compiled formulas"));
        }
        lasso::to_nba(&self.dfa)
    }
}

/// Letter tracks needed by `phi` (at least one).
pub fn base_tracks(phi: &Formula) -> usize {
    phi.max_track().map_or(1, |t| t + 1)
}

pub fn compile_finite(phi: &Formula) -> Result<CompiledFormula> {
    compile(phi, Mode::Finite, base_tracks(phi))
}

pub fn compile_omega(phi: &Formula) -> Result<CompiledFormula> {
    compile(phi, Mode::Omega, base_tracks(phi))
}

/// Compiles `phi` over `base` letter tracks.
pub fn compile(phi: &Formula, mode: Mode, base: usize) -> Result<CompiledFormula> {
    if base_tracks(phi) > base {
        return Err(Error::invalid(format!("formula reads track {} but only {base} letter tracks exist", base_tracks(phi) - 1)));
    }
    let mut c = Compiler { mode, base, stats: Stats::default() };
    let vars = phi.free_vars();
    let mut d = c.build(phi)?;
    // free first-order variables denote single positions
    for (i, v) in vars.iter().enumerate() {
        if !is_set_var(v) {
            d = c.and(&d, &c.singleton(base + vars.len(), base + i))?;
        }
    }
    c.stats.final_states = d.num_states();
    Ok(CompiledFormula { formula: phi.clone(), mode, base, vars, dfa: d, stats: c.stats })
}

const MEMO_LIMIT: usize = 20_000;

type MemoKey = (Mode, usize, String);

fn memo() -> &'static Mutex<HashMap<MemoKey, Dfa>> {
    static MEMO: OnceLock<Mutex<HashMap<MemoKey, Dfa>>> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Key invariant under renaming: free variables become positional names and
/// bound variables follow binder depth.
fn memo_key(phi: &Formula) -> String {
    let map: HashMap<String, String> = phi
        .free_vars()
        .iter()
        .enumerate()
        .map(|(i, v)| (v.clone(), if is_set_var(v) { format!("F{i}") } else { format!("f{i}") }))
        .collect();
    rename_free(&phi.canonicalize(), &map).canonicalize().to_string()
}

fn rename_free(phi: &Formula, map: &HashMap<String, String>) -> Formula {
    use Formula::*;
    let r = |v: &String| map.get(v).cloned().unwrap_or_else(|| v.clone());
    match phi {
        True => True,
        False => False,
        Letter { track, var } => Letter { track: *track, var: r(var) },
        Le(x, y) => Le(r(x), r(y)),
        Lt(x, y) => Lt(r(x), r(y)),
        Eq(x, y) => Eq(r(x), r(y)),
        Cong { n, x, y } => Cong { n: *n, x: r(x), y: r(y) },
        In { set, var } => In { set: r(set), var: r(var) },
        Not(a) => Not(Box::new(rename_free(a, map))),
        And(a, b) => And(Box::new(rename_free(a, map)), Box::new(rename_free(b, map))),
        Or(a, b) => Or(Box::new(rename_free(a, map)), Box::new(rename_free(b, map))),
        Implies(a, b) => Implies(Box::new(rename_free(a, map)), Box::new(rename_free(b, map))),
        Exists(v, a) | Forall(v, a) | Exists2(v, a) | Forall2(v, a) => {
            let mut inner = map.clone();
            inner.remove(v);
            let body = Box::new(rename_free(a, &inner));
            match phi {
                Exists(..) => Exists(v.clone(), body),
                Forall(..) => Forall(v.clone(), body),
                Exists2(..) => Exists2(v.clone(), body),
                _ => Forall2(v.clone(), body),
            }
        }
    }
}

/// Clears the compilation cache.
pub fn clear_cache() {
    memo().lock().unwrap().clear();
}

const ACCEPT: u32 = 1;
const REJECT: u32 = 2;

/// A DFA whose states 1 and 2 are absorbing verdicts.
fn verdict_dfa(width: usize, n: usize, step: impl Fn(u32, u32) -> u32) -> Dfa {
    let acc = (0..n).map(|q| q == ACCEPT as usize).collect();
    Dfa::from_fn(width, false, n, 0, acc, |q, a| if q == ACCEPT || q == REJECT { q } else { step(q, a) })
}

struct Compiler {
    mode: Mode,
    base: usize,
    stats: Stats,
}

impl Compiler {
    fn note(&mut self, d: &Dfa) {
        self.stats.peak_states = self.stats.peak_states.max(d.num_states());
    }

    fn universe(&self, width: usize) -> Dfa {
        match self.mode {
            Mode::Finite => Dfa::universal(width, false),
            Mode::Omega => lasso::shape(width),
        }
    }

    fn nothing(&self, width: usize) -> Dfa {
        Dfa::empty(width, self.mode == Mode::Omega)
    }

    /// Lifts a finite verdict automaton (all marks read before `$`) to a lasso DFA.
    fn lift(&self, d: Dfa) -> Dfa {
        if self.mode == Mode::Finite {
            return d;
        }
        let n = d.num_states() as u32;
        let dollar = 1u32 << d.width();
        // n: frozen accept with empty loop, n+1: frozen accept, n+2: reject
        Dfa::from_fn(d.width(), true, n as usize + 3, d.init(), (0..n + 3).map(|q| q == n + 1).collect(), |q, a| {
            if q < n {
                if a == dollar {
                    if d.is_accepting(q) {
                        n
                    } else {
                        n + 2
                    }
                } else {
                    d.next(q, a)
                }
            } else if (q == n || q == n + 1) && a != dollar {
                n + 1
            } else {
                n + 2
            }
        })
        .minimize()
    }

    /// "Exactly one position carries a mark on `track`".
    fn singleton(&self, width: usize, track: usize) -> Dfa {
        let bit = |a: u32| a >> track & 1 == 1;
        match self.mode {
            Mode::Finite => Dfa::from_fn(width, false, 3, 0, vec![false, true, false], |q, a| match (q, bit(a)) {
                (0, false) => 0,
                (0, true) | (1, false) => 1,
                _ => 2,
            }),
            Mode::Omega => {
                let dollar = 1u32 << width;
                // 0: none yet, 1: one mark, 2: one mark then `$`, 3: accepted, 4: reject
                Dfa::from_fn(width, true, 5, 0, vec![false, false, false, true, false], move |q, a| {
                    if a == dollar {
                        return if q == 1 { 2 } else { 4 };
                    }
                    match (q, bit(a)) {
                        (0, false) => 0,
                        (0, true) | (1, false) => 1,
                        (2, false) | (3, false) => 3,
                        _ => 4,
                    }
                })
            }
        }
    }

    fn and(&self, a: &Dfa, b: &Dfa) -> Result<Dfa> {
        Ok(a.intersect(b)?.minimize())
    }

    fn atom(&mut self, phi: &Formula, vars: &[String]) -> Result<Dfa> {
        use Formula::*;
        let width = self.base + vars.len();
        let bit = |v: &String, a: u32| a >> (self.base + vars.iter().position(|x| x == v).unwrap()) & 1 == 1;
        let d = match phi {
            True => return Ok(self.universe(width)),
            False => return Ok(self.nothing(width)),
            Le(x, y) | Eq(x, y) if x == y => return Ok(self.universe(width)),
            Lt(x, y) if x == y => return Ok(self.nothing(width)),
            Cong { x, y, .. } if x == y => return Ok(self.universe(width)),
            Letter { track, var } => verdict_dfa(width, 3, |_, a| match (bit(var, a), a >> track & 1 == 1) {
                (false, _) => 0,
                (true, true) => ACCEPT,
                (true, false) => REJECT,
            }),
            In { set, var } => verdict_dfa(width, 3, |_, a| match (bit(var, a), bit(set, a)) {
                (false, _) => 0,
                (true, true) => ACCEPT,
                (true, false) => REJECT,
            }),
            Le(x, y) | Lt(x, y) | Eq(x, y) => {
                // state 3: x seen, y not yet
                let strict = matches!(phi, Lt(..));
                let equal = matches!(phi, Eq(..));
                verdict_dfa(width, 4, |q, a| match (q, bit(x, a), bit(y, a)) {
                    (0, true, true) => if strict { REJECT } else { ACCEPT },
                    (0, true, false) => if equal { REJECT } else { 3 },
                    (0, false, true) => REJECT,
                    (0, false, false) => 0,
                    (_, _, true) => if equal { REJECT } else { ACCEPT },
                    _ => 3,
                })
            }
            Cong { n, x, y } => {
                // states 3 + c: x seen, the next position lies at distance ≡ c (mod n)
                let n = *n;
                if n > 1 << 20 {
                    return Err(Error::Resource { stage: "cong atom".into(), detail: format!("modulus {n}"), cap: 1 << 20 });
                }
                let n32 = n as u32;
                verdict_dfa(width, 3 + n as usize, |q, a| match (q, bit(x, a), bit(y, a)) {
                    (0, true, true) => ACCEPT,
                    (0, true, false) => 3 + 1 % n32,
                    (0, false, true) => REJECT,
                    (0, false, false) => 0,
                    (q, _, true) => if q == 3 { ACCEPT } else { REJECT },
                    (q, _, false) => 3 + (q - 3 + 1) % n32,
                })
            }
            _ => unreachable!(),
        };
        Ok(self.lift(d.minimize()))
    }

    /// Re-indexes `d` (over `from`) to the variable order `to ⊇ from`.
    fn lift_to(&self, d: &Dfa, from: &[String], to: &[String]) -> Result<Dfa> {
        if from == to {
            return Ok(d.clone());
        }
        let base = self.base;
        let pos: Vec<usize> = from.iter().map(|v| to.iter().position(|x| x == v).unwrap()).collect();
        d.remap(base + to.len(), |a| {
            let mut old = a & ((1 << base) - 1);
            for (i, &p) in pos.iter().enumerate() {
                old |= (a >> (base + p) & 1) << (base + i);
            }
            old
        })
    }

    fn complement(&self, d: &Dfa) -> Result<Dfa> {
        match self.mode {
            Mode::Finite => Ok(d.complement().minimize()),
            Mode::Omega => lasso::complement(d),
        }
    }

    fn project(&self, d: &Dfa, track: usize) -> Result<Dfa> {
        match self.mode {
            Mode::Finite => Ok(d.project(track)?.determinize()?.minimize()),
            Mode::Omega => lasso::project(d, track),
        }
    }

    /// DFA over `base + free_vars(phi)` tracks.
    fn build(&mut self, phi: &Formula) -> Result<Dfa> {
        let key = (self.mode, self.base, memo_key(phi));
        if let Some(d) = memo().lock().unwrap().get(&key) {
            return Ok(d.clone());
        }
        let d = self.build_uncached(phi)?;
        self.note(&d);
        let mut m = memo().lock().unwrap();
        if m.len() >= MEMO_LIMIT {
            m.clear();
        }
        m.insert(key, d.clone());
        Ok(d)
    }

    fn build_uncached(&mut self, phi: &Formula) -> Result<Dfa> {
        use Formula::*;
        let vars = phi.free_vars();
        if self.base + vars.len() > crate::automata::MAX_WIDTH {
            return Err(Error::Resource {
                stage: format!("compiling `{}`", short(phi)),
                detail: format!("{} simultaneous variable tracks", vars.len()),
                cap: crate::automata::MAX_WIDTH - self.base,
            });
        }
        match phi {
            Not(a) => {
                let d = self.build(a)?;
                self.complement(&d)
            }
            And(a, b) | Or(a, b) | Implies(a, b) => {
                let da = self.build(a)?;
                let da = self.lift_to(&da, &a.free_vars(), &vars)?;
                let db = self.build(b)?;
                let db = self.lift_to(&db, &b.free_vars(), &vars)?;
                let d = match phi {
                    And(..) => da.intersect(&db)?,
                    Or(..) => da.union(&db)?,
                    _ => da.product(&db, |x, y| !x || y)?,
                };
                let d = if self.mode == Mode::Omega && matches!(phi, Implies(..)) {
                    d.intersect(&lasso::shape(d.width()))?
                } else {
                    d
                };
                self.note(&d);
                Ok(d.minimize())
            }
            Exists(v, a) | Exists2(v, a) => {
                let inner_vars = a.free_vars();
                if !inner_vars.contains(v) && matches!(phi, Exists2(..)) {
                    return self.build(a);
                }
                let mut order = vars.clone();
                order.push(v.clone());
                let da = self.build(a)?;
                let mut d = self.lift_to(&da, &inner_vars, &order)?;
                let track = self.base + vars.len();
                if !is_set_var(v) {
                    d = self.and(&d, &self.singleton(self.base + order.len(), track))?;
                }
                self.note(&d);
                self.project(&d, track).map_err(|e| blame(e, phi))
            }
            Forall(v, a) => self.build(&Not(Box::new(Exists(v.clone(), Box::new(Not(a.clone())))))),
            Forall2(v, a) => self.build(&Not(Box::new(Exists2(v.clone(), Box::new(Not(a.clone())))))),
            atom => self.atom(atom, &vars),
        }
    }
}

fn short(phi: &Formula) -> String {
    let s = phi.to_string();
    if s.chars().count() > 80 {
        format!("{}…", s.chars().take(80).collect::<String>())
    } else {
        s
    }
}

fn blame(e: Error, phi: &Formula) -> Error {
    match e {
        Error::Resource { stage, detail, cap } if !stage.contains("compiling") => {
            Error::Resource { stage: format!("{stage} while compiling `{}`", short(phi)), detail, cap }
        }
        other => other,
    }
}

/// Cost guard of the brute-force evaluator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BruteForceLimits {
    pub max_len: usize,
    pub max_rank: usize,
}

impl Default for BruteForceLimits {
    fn default() -> Self {
        BruteForceLimits { max_len: 12, max_rank: 3 }
    }
}

/// Direct recursive semantics on a finite word.
pub fn brute_force_eval(w: &FiniteWord, phi: &Formula, nu: &Valuation) -> Result<bool> {
    brute_force_eval_with(w, phi, nu, BruteForceLimits::default())
}

pub fn brute_force_eval_with(w: &FiniteWord, phi: &Formula, nu: &Valuation, limits: BruteForceLimits) -> Result<bool> {
    if w.len() > limits.max_len || phi.qr() > limits.max_rank {
        return Err(Error::budget(
            "brute_force_eval",
            format!("|w| = {}, qr = {} exceeds |w| ≤ {}, qr ≤ {}", w.len(), phi.qr(), limits.max_len, limits.max_rank),
        ));
    }
    let mut fo: HashMap<String, i64> = nu.fo.iter().map(|(k, v)| (k.clone(), *v)).collect();
    let mut sets: HashMap<String, u64> = HashMap::new();
    for (k, s) in &nu.sets {
        let mut m = 0u64;
        for &p in s {
            if p >= 0 && (p as usize) < w.len() {
                m |= 1 << p;
            }
        }
        sets.insert(k.clone(), m);
    }
    for v in phi.free_vars() {
        let bound = if is_set_var(&v) { sets.contains_key(&v) } else { fo.contains_key(&v) };
        if !bound {
            return Err(Error::Unbound(v));
        }
    }
    for (v, &p) in &fo {
        if p < 0 || p as usize >= w.len() {
            return Err(Error::invalid(format!("position {p} of `{v}` outside the word")));
        }
    }
    Ok(eval(w.letters(), phi, &mut fo, &mut sets))
}

fn eval(w: &[u8], phi: &Formula, fo: &mut HashMap<String, i64>, sets: &mut HashMap<String, u64>) -> bool {
    use Formula::*;
    let n = w.len() as i64;
    match phi {
        True => true,
        False => false,
        Letter { track, var } => w[fo[var] as usize] >> track & 1 == 1,
        Le(x, y) => fo[x] <= fo[y],
        Lt(x, y) => fo[x] < fo[y],
        Eq(x, y) => fo[x] == fo[y],
        Cong { n, x, y } => fo[x] <= fo[y] && (fo[y] - fo[x]) % *n as i64 == 0,
        In { set, var } => sets[set] >> fo[var] & 1 == 1,
        Not(a) => !eval(w, a, fo, sets),
        And(a, b) => eval(w, a, fo, sets) && eval(w, b, fo, sets),
        Or(a, b) => eval(w, a, fo, sets) || eval(w, b, fo, sets),
        Implies(a, b) => !eval(w, a, fo, sets) || eval(w, b, fo, sets),
        Exists(v, a) | Forall(v, a) => {
            let saved = fo.get(v).copied();
            let want = matches!(phi, Exists(..));
            let mut result = !want;
            for p in 0..n {
                fo.insert(v.clone(), p);
                if eval(w, a, fo, sets) == want {
                    result = want;
                    break;
                }
            }
            match saved {
                Some(p) => fo.insert(v.clone(), p),
                None => fo.remove(v),
            };
            result
        }
        Exists2(v, a) | Forall2(v, a) => {
            let saved = sets.get(v).copied();
            let want = matches!(phi, Exists2(..));
            let mut result = !want;
            for m in 0..1u64 << n {
                sets.insert(v.clone(), m);
                if eval(w, a, fo, sets) == want {
                    result = want;
                    break;
                }
            }
            match saved {
                Some(m) => sets.insert(v.clone(), m),
                None => sets.remove(v),
            };
            result
        }
    }
}
