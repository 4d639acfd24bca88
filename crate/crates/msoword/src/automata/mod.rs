//! Automata over bit-track alphabets.
//!
//! A letter of width `w` is an integer below `2^w`; bit `t` is track `t`.
//! Automata may carry one extra letter `$` (index `2^w`) used by the lasso
//! encoding of ultimately periodic ω-words, see [`lasso`].

use std::collections::{HashMap, VecDeque};

use crate::{Error, Result};

pub mod lasso;
pub mod monoid;
pub mod nba;
pub mod serial;

pub use monoid::{extension_check, factor_automaton_bi, factor_automaton_up, factor_closure, factorial_check, TransitionMonoid};
pub use nba::{Nba, Profile};

/// Upper bound on the number of tracks.
pub const MAX_WIDTH: usize = 16;

/// Number of letters of an alphabet.
pub fn letter_count(width: usize, dollar: bool) -> usize {
    (1usize << width) + dollar as usize
}

fn check_width(width: usize) -> Result<()> {
    if width > MAX_WIDTH {
        return Err(Error::Resource {
            stage: "alphabet".into(),
            detail: format!("{width} tracks requested"),
            cap: MAX_WIDTH,
        });
    }
    Ok(())
}

/// Complete deterministic finite automaton.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfa {
    width: usize,
    dollar: bool,
    n: usize,
    trans: Vec<u32>,
    init: u32,
    acc: Vec<bool>,
}

impl Dfa {
    pub fn new(width: usize, dollar: bool, trans: Vec<u32>, init: u32, acc: Vec<bool>) -> Result<Dfa> {
        check_width(width)?;
        let k = letter_count(width, dollar);
        let n = acc.len();
        if n == 0 || trans.len() != n * k || init as usize >= n || trans.iter().any(|&t| t as usize >= n) {
            return Err(Error::invalid("malformed DFA transition table"));
        }
        Ok(Dfa { width, dollar, n, trans, init, acc })
    }

    /// Builds a DFA with `n` states from a transition function.
    pub fn from_fn(width: usize, dollar: bool, n: usize, init: u32, acc: Vec<bool>, f: impl Fn(u32, u32) -> u32) -> Dfa {
        let k = letter_count(width, dollar);
        let mut trans = Vec::with_capacity(n * k);
        for q in 0..n as u32 {
            for a in 0..k as u32 {
                trans.push(f(q, a));
            }
        }
        Dfa { width, dollar, n, trans, init, acc }
    }

    pub fn universal(width: usize, dollar: bool) -> Dfa {
        Dfa::from_fn(width, dollar, 1, 0, vec![true], |_, _| 0)
    }

    pub fn empty(width: usize, dollar: bool) -> Dfa {
        Dfa::from_fn(width, dollar, 1, 0, vec![false], |_, _| 0)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn has_dollar(&self) -> bool {
        self.dollar
    }

    pub fn num_letters(&self) -> usize {
        letter_count(self.width, self.dollar)
    }

    pub fn dollar_letter(&self) -> u32 {
        1 << self.width
    }

    pub fn num_states(&self) -> usize {
        self.n
    }

    pub fn init(&self) -> u32 {
        self.init
    }

    pub fn is_accepting(&self, q: u32) -> bool {
        self.acc[q as usize]
    }

    pub fn accepting(&self) -> &[bool] {
        &self.acc
    }

    #[inline]
    pub fn next(&self, q: u32, a: u32) -> u32 {
        self.trans[q as usize * self.num_letters() + a as usize]
    }

    pub fn run(&self, q: u32, word: impl IntoIterator<Item = u32>) -> u32 {
        word.into_iter().fold(q, |q, a| self.next(q, a))
    }

    pub fn accepts_letters(&self, word: &[u32]) -> bool {
        self.acc[self.run(self.init, word.iter().copied()) as usize]
    }

    /// Acceptance of a word whose letters are given as bytes.
    pub fn accepts(&self, word: &[u8]) -> bool {
        self.acc[self.run(self.init, word.iter().map(|&a| a as u32)) as usize]
    }

    pub fn complement(&self) -> Dfa {
        Dfa { acc: self.acc.iter().map(|b| !b).collect(), ..self.clone() }
    }

    fn check_compatible(&self, other: &Dfa) -> Result<()> {
        if self.width != other.width || self.dollar != other.dollar {
            return Err(Error::AlphabetMismatch(self.width, other.width));
        }
        Ok(())
    }

    /// Reachable product automaton, accepting by `f(acc_a, acc_b)`.
    pub fn product(&self, other: &Dfa, f: impl Fn(bool, bool) -> bool) -> Result<Dfa> {
        self.check_compatible(other)?;
        let k = self.num_letters();
        let mut index: HashMap<(u32, u32), u32> = HashMap::new();
        let mut pairs = vec![(self.init, other.init)];
        index.insert((self.init, other.init), 0);
        let mut trans = Vec::new();
        let mut i = 0;
        while i < pairs.len() {
            let (p, q) = pairs[i];
            for a in 0..k as u32 {
                let t = (self.next(p, a), other.next(q, a));
                let id = *index.entry(t).or_insert_with(|| {
                    pairs.push(t);
                    (pairs.len() - 1) as u32
                });
                trans.push(id);
            }
            i += 1;
        }
        let acc = pairs.iter().map(|&(p, q)| f(self.acc[p as usize], other.acc[q as usize])).collect();
        Ok(Dfa { width: self.width, dollar: self.dollar, n: pairs.len(), trans, init: 0, acc })
    }

    pub fn intersect(&self, other: &Dfa) -> Result<Dfa> {
        self.product(other, |a, b| a && b)
    }

    pub fn union(&self, other: &Dfa) -> Result<Dfa> {
        self.product(other, |a, b| a || b)
    }

    /// Restriction to states reachable from the initial state.
    pub fn reachable(&self) -> Dfa {
        let k = self.num_letters();
        let mut id = vec![u32::MAX; self.n];
        let mut order = vec![self.init];
        id[self.init as usize] = 0;
        let mut i = 0;
        while i < order.len() {
            let q = order[i];
            for a in 0..k as u32 {
                let t = self.next(q, a);
                if id[t as usize] == u32::MAX {
                    id[t as usize] = order.len() as u32;
                    order.push(t);
                }
            }
            i += 1;
        }
        let mut trans = Vec::with_capacity(order.len() * k);
        for &q in &order {
            for a in 0..k as u32 {
                trans.push(id[self.next(q, a) as usize]);
            }
        }
        let acc = order.iter().map(|&q| self.acc[q as usize]).collect();
        Dfa { width: self.width, dollar: self.dollar, n: order.len(), trans, init: 0, acc }
    }

    /// Minimal equivalent DFA (reachable part, Moore partition refinement).
    pub fn minimize(&self) -> Dfa {
        let d = self.reachable();
        let k = d.num_letters();
        let mut class: Vec<u32> = d.acc.iter().map(|&b| b as u32).collect();
        let mut count = {
            let mut seen = [false; 2];
            for &c in &class {
                seen[c as usize] = true;
            }
            seen.iter().filter(|b| **b).count()
        };
        loop {
            let mut sig_index: HashMap<Vec<u32>, u32> = HashMap::new();
            let mut next_class = Vec::with_capacity(d.n);
            for q in 0..d.n {
                let mut sig = Vec::with_capacity(k + 1);
                sig.push(class[q]);
                for a in 0..k {
                    sig.push(class[d.trans[q * k + a] as usize]);
                }
                let len = sig_index.len() as u32;
                next_class.push(*sig_index.entry(sig).or_insert(len));
            }
            let new_count = sig_index.len();
            class = next_class;
            if new_count == count {
                break;
            }
            count = new_count;
        }
        // renumber so that the initial state is 0 and numbering follows BFS order
        let mut rep = vec![u32::MAX; count];
        for q in 0..d.n {
            if rep[class[q] as usize] == u32::MAX {
                rep[class[q] as usize] = q as u32;
            }
        }
        let quotient = Dfa::from_fn(
            d.width,
            d.dollar,
            count,
            class[d.init as usize],
            (0..count).map(|c| d.acc[rep[c] as usize]).collect(),
            |c, a| class[d.next(rep[c as usize], a) as usize],
        );
        quotient.reachable()
    }

    /// Re-indexes letters: the new automaton has `width` tracks and reads
    /// letter `a` as the old letter `f(a)`; `$` stays `$`.
    pub fn remap(&self, width: usize, f: impl Fn(u32) -> u32) -> Result<Dfa> {
        check_width(width)?;
        let old_k = self.num_letters();
        let map: Vec<u32> = (0..1u32 << width).map(&f).collect();
        Ok(Dfa::from_fn(width, self.dollar, self.n, self.init, self.acc.clone(), |q, a| {
            let old = if (a as usize) < map.len() { map[a as usize] } else { (old_k - 1) as u32 };
            self.trans[q as usize * old_k + old as usize]
        }))
    }

    /// Existential projection of `track`: an NFA over one track less.
    pub fn project(&self, track: usize) -> Result<Nfa> {
        if track >= self.width {
            return Err(Error::invalid(format!("no track {track} in width {}", self.width)));
        }
        let w = self.width - 1;
        let k = letter_count(w, self.dollar);
        let low = (1u32 << track) - 1;
        let widen = |a: u32, bit: u32| (a & low) | (bit << track) | ((a & !low) << 1);
        let mut trans = Vec::with_capacity(self.n * k);
        for q in 0..self.n as u32 {
            for a in 0..k as u32 {
                if self.dollar && a as usize == k - 1 {
                    trans.push(vec![self.next(q, self.dollar_letter())]);
                } else {
                    let mut s = vec![self.next(q, widen(a, 0)), self.next(q, widen(a, 1))];
                    s.sort_unstable();
                    s.dedup();
                    trans.push(s);
                }
            }
        }
        Ok(Nfa { width: w, dollar: self.dollar, n: self.n, trans, init: vec![self.init], acc: self.acc.clone() })
    }

    pub fn to_nfa(&self) -> Nfa {
        Nfa {
            width: self.width,
            dollar: self.dollar,
            n: self.n,
            trans: self.trans.iter().map(|&t| vec![t]).collect(),
            init: vec![self.init],
            acc: self.acc.clone(),
        }
    }

    /// NFA for the reversed language.
    pub fn reverse(&self) -> Nfa {
        let k = self.num_letters();
        let mut trans = vec![Vec::new(); self.n * k];
        for q in 0..self.n {
            for a in 0..k {
                let t = self.trans[q * k + a] as usize;
                trans[t * k + a].push(q as u32);
            }
        }
        Nfa {
            width: self.width,
            dollar: self.dollar,
            n: self.n,
            trans,
            init: (0..self.n as u32).filter(|&q| self.acc[q as usize]).collect(),
            acc: (0..self.n).map(|q| q as u32 == self.init).collect(),
        }
    }

    /// States from which some accepting state is reachable.
    pub fn live_states(&self) -> Vec<bool> {
        let k = self.num_letters();
        let mut live = self.acc.clone();
        let mut changed = true;
        while changed {
            changed = false;
            for q in 0..self.n {
                if !live[q] && (0..k).any(|a| live[self.trans[q * k + a] as usize]) {
                    live[q] = true;
                    changed = true;
                }
            }
        }
        live
    }

    /// States reachable from the initial state.
    pub fn reachable_states(&self) -> Vec<bool> {
        self.reachable_from(&[self.init])
    }

    pub fn reachable_from(&self, start: &[u32]) -> Vec<bool> {
        let mut seen = vec![false; self.n];
        let mut stack: Vec<u32> = start.to_vec();
        for &q in start {
            seen[q as usize] = true;
        }
        while let Some(q) = stack.pop() {
            for a in 0..self.num_letters() as u32 {
                let t = self.next(q, a);
                if !seen[t as usize] {
                    seen[t as usize] = true;
                    stack.push(t);
                }
            }
        }
        seen
    }

    pub fn is_empty(&self) -> bool {
        let r = self.reachable_states();
        !(0..self.n).any(|q| r[q] && self.acc[q])
    }

    /// A shortest accepted word (breadth-first, lexicographically least letters).
    pub fn shortest_accepted(&self) -> Option<Vec<u32>> {
        let mut parent: Vec<Option<(u32, u32)>> = vec![None; self.n];
        let mut seen = vec![false; self.n];
        seen[self.init as usize] = true;
        let mut queue = VecDeque::from([self.init]);
        while let Some(q) = queue.pop_front() {
            if self.acc[q as usize] {
                let mut w = Vec::new();
                let mut c = q;
                while let Some((p, a)) = parent[c as usize] {
                    w.push(a);
                    c = p;
                }
                w.reverse();
                return Some(w);
            }
            for a in 0..self.num_letters() as u32 {
                let t = self.next(q, a);
                if !seen[t as usize] {
                    seen[t as usize] = true;
                    parent[t as usize] = Some((q, a));
                    queue.push_back(t);
                }
            }
        }
        None
    }

    /// Language equality.
    pub fn equivalent(&self, other: &Dfa) -> Result<bool> {
        Ok(self.product(other, |a, b| a != b)?.is_empty())
    }

    /// `L(self) ⊆ L(other)`.
    pub fn included_in(&self, other: &Dfa) -> Result<bool> {
        Ok(self.product(other, |a, b| a && !b)?.is_empty())
    }

    /// `counts[m][q]`: number of words of length `m` leading from `q` into
    /// `target`, saturated at `cap`.
    fn count_table(&self, target: &[bool], max_len: usize, cap: u128) -> Vec<Vec<u128>> {
        let k = self.num_letters();
        let mut table = vec![target.iter().map(|&b| b as u128).collect::<Vec<_>>()];
        for _ in 0..max_len {
            let prev = table.last().unwrap();
            let row = (0..self.n)
                .map(|q| {
                    (0..k).fold(0u128, |s, a| s.saturating_add(prev[self.trans[q * k + a] as usize]).min(cap))
                })
                .collect();
            table.push(row);
        }
        table
    }

    /// The `n`-th accepted word (0-based) in length-lexicographic order.
    pub fn unrank_length_lex(&self, mut n: u128) -> Option<Vec<u8>> {
        const MAX_LEN: usize = 256;
        let table = self.count_table(&self.acc, MAX_LEN, u128::MAX);
        let k = self.num_letters();
        for m in 0..=MAX_LEN {
            let total = table[m][self.init as usize];
            if n >= total {
                n -= total;
                continue;
            }
            let mut q = self.init;
            let mut w = Vec::with_capacity(m);
            for rem in (1..=m).rev() {
                for a in 0..k as u32 {
                    let c = table[rem - 1][self.next(q, a) as usize];
                    if n < c {
                        w.push(a as u8);
                        q = self.next(q, a);
                        break;
                    }
                    n -= c;
                }
            }
            return Some(w);
        }
        None
    }

    /// Number of accepted words strictly before `w` in length-lexicographic order.
    pub fn rank_length_lex(&self, w: &[u8]) -> u128 {
        let table = self.count_table(&self.acc, w.len(), u128::MAX);
        let mut r: u128 = (0..w.len()).fold(0u128, |s, m| s.saturating_add(table[m][self.init as usize]));
        let mut q = self.init;
        for (i, &letter) in w.iter().enumerate() {
            let rem = w.len() - i - 1;
            for a in 0..letter as u32 {
                r = r.saturating_add(table[rem][self.next(q, a) as usize]);
            }
            q = self.next(q, letter as u32);
        }
        r
    }

    /// Shortest, then lexicographically least, `x` with `prefix·x·suffix` accepted.
    pub fn shortest_lexmin_between(&self, prefix: &[u8], suffix: &[u8]) -> Option<Vec<u8>> {
        let start = self.run(self.init, prefix.iter().map(|&a| a as u32));
        let target: Vec<bool> = (0..self.n as u32)
            .map(|q| self.acc[self.run(q, suffix.iter().map(|&a| a as u32)) as usize])
            .collect();
        let k = self.num_letters();
        let mut dist: Vec<usize> = target.iter().map(|&t| if t { 0 } else { usize::MAX }).collect();
        let mut changed = true;
        while changed {
            changed = false;
            for q in 0..self.n {
                let best = (0..k).map(|a| dist[self.trans[q * k + a] as usize]).min().unwrap_or(usize::MAX);
                if best != usize::MAX && best + 1 < dist[q] {
                    dist[q] = best + 1;
                    changed = true;
                }
            }
        }
        if dist[start as usize] == usize::MAX {
            return None;
        }
        let mut q = start;
        let mut x = Vec::new();
        while dist[q as usize] > 0 {
            let a = (0..k as u32).find(|&a| dist[self.next(q, a) as usize].checked_add(1) == Some(dist[q as usize])).unwrap();
            x.push(a as u8);
            q = self.next(q, a);
        }
        Some(x)
    }

    /// The first two accepted words, in lexicographic order, of the least length
    /// admitting two distinct words of the form `z·x` (`right`) or `x·z`, `|x| ≥ 1`.
    pub fn first_two_extensions(&self, z: &[u8], right: bool, max_len: usize) -> Option<(Vec<u8>, Vec<u8>)> {
        let zl = z.iter().map(|&a| a as u32);
        let (start, target): (u32, Vec<bool>) = if right {
            (self.run(self.init, zl), self.acc.clone())
        } else {
            (self.init, (0..self.n as u32).map(|q| self.acc[self.run(q, zl.clone()) as usize]).collect())
        };
        let table = self.count_table(&target, max_len, 2);
        let m = (1..=max_len).find(|&m| table[m][start as usize] >= 2)?;
        let mut found = Vec::new();
        let mut path = Vec::new();
        self.lex_words(start, m, &table, &mut path, &mut found, 2);
        let join = |x: Vec<u8>| if right { [z, &x].concat() } else { [&x, z].concat() };
        let b = join(found.pop()?);
        let a = join(found.pop()?);
        Some((a, b))
    }

    fn lex_words(&self, q: u32, rem: usize, table: &[Vec<u128>], path: &mut Vec<u8>, out: &mut Vec<Vec<u8>>, limit: usize) {
        if out.len() >= limit {
            return;
        }
        if rem == 0 {
            out.push(path.clone());
            return;
        }
        for a in 0..self.num_letters() as u32 {
            let t = self.next(q, a);
            if table[rem - 1][t as usize] > 0 {
                path.push(a as u8);
                self.lex_words(t, rem - 1, table, path, out, limit);
                path.pop();
                if out.len() >= limit {
                    return;
                }
            }
        }
    }
}

/// Nondeterministic finite automaton.
#[derive(Clone, Debug)]
pub struct Nfa {
    width: usize,
    dollar: bool,
    n: usize,
    trans: Vec<Vec<u32>>,
    init: Vec<u32>,
    acc: Vec<bool>,
}

/// Default cap on the number of subsets built by determinisation.
pub const DEFAULT_SUBSET_CAP: usize = 2_000_000;

impl Nfa {
    pub fn new(width: usize, dollar: bool, trans: Vec<Vec<u32>>, init: Vec<u32>, acc: Vec<bool>) -> Result<Nfa> {
        check_width(width)?;
        let n = acc.len();
        if trans.len() != n * letter_count(width, dollar) || trans.iter().flatten().chain(&init).any(|&q| q as usize >= n) {
            return Err(Error::invalid("malformed NFA transition table"));
        }
        Ok(Nfa { width, dollar, n, trans, init, acc })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn has_dollar(&self) -> bool {
        self.dollar
    }

    pub fn num_states(&self) -> usize {
        self.n
    }

    pub fn num_letters(&self) -> usize {
        letter_count(self.width, self.dollar)
    }

    pub fn init(&self) -> &[u32] {
        &self.init
    }

    pub fn accepting(&self) -> &[bool] {
        &self.acc
    }

    pub fn succ(&self, q: u32, a: u32) -> &[u32] {
        &self.trans[q as usize * self.num_letters() + a as usize]
    }

    pub fn accepts(&self, word: &[u8]) -> bool {
        let mut cur: Vec<u32> = self.init.clone();
        for &a in word {
            let mut next: Vec<u32> = cur.iter().flat_map(|&q| self.succ(q, a as u32).iter().copied()).collect();
            next.sort_unstable();
            next.dedup();
            cur = next;
        }
        cur.iter().any(|&q| self.acc[q as usize])
    }

    /// Subset construction.
    pub fn determinize(&self) -> Result<Dfa> {
        self.determinize_capped(DEFAULT_SUBSET_CAP)
    }

    pub fn determinize_capped(&self, cap: usize) -> Result<Dfa> {
        let k = self.num_letters();
        let mut start = self.init.clone();
        start.sort_unstable();
        start.dedup();
        let mut index: HashMap<Vec<u32>, u32> = HashMap::new();
        index.insert(start.clone(), 0);
        let mut sets = vec![start];
        let mut trans = Vec::new();
        let mut mark = vec![false; self.n];
        let mut i = 0;
        while i < sets.len() {
            for a in 0..k {
                let mut next = Vec::new();
                for &q in &sets[i] {
                    for &t in &self.trans[q as usize * k + a] {
                        if !mark[t as usize] {
                            mark[t as usize] = true;
                            next.push(t);
                        }
                    }
                }
                for &t in &next {
                    mark[t as usize] = false;
                }
                next.sort_unstable();
                let id = match index.get(&next) {
                    Some(&id) => id,
                    None => {
                        if sets.len() >= cap {
                            return Err(Error::Resource {
                                stage: "determinisation".into(),
                                detail: "too many subset states".into(),
                                cap,
                            });
                        }
                        let id = sets.len() as u32;
                        index.insert(next.clone(), id);
                        sets.push(next);
                        id
                    }
                };
                trans.push(id);
            }
            i += 1;
        }
        let acc = sets.iter().map(|s| s.iter().any(|&q| self.acc[q as usize])).collect();
        Ok(Dfa { width: self.width, dollar: self.dollar, n: sets.len(), trans, init: 0, acc })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Width-1 DFA for "contains a 1".
    fn contains_one() -> Dfa {
        Dfa::from_fn(1, false, 2, 0, vec![false, true], |q, a| if q == 1 || a == 1 { 1 } else { 0 })
    }

    #[test]
    fn complement_accepts_zeros() {
        assert!(contains_one().complement().accepts(&[0, 0, 0]));
        assert!(!contains_one().complement().accepts(&[0, 1, 0]));
    }

    #[test]
    fn intersection_with_complement_is_empty() {
        let a = contains_one();
        let m = a.intersect(&a.complement()).unwrap().minimize();
        assert!(m.is_empty());
        assert_eq!(m.num_states(), 1);
    }

    #[test]
    fn projection_of_marked_letter() {
        // width 2: track 0 = P, track 1 = x; accepts when x marks a position with P
        let d = Dfa::from_fn(2, false, 2, 0, vec![false, true], |q, a| if q == 1 || a == 3 { 1 } else { 0 });
        let p = d.project(1).unwrap().determinize().unwrap().minimize();
        assert!(p.accepts(&[0, 1, 0]));
        assert!(!p.accepts(&[0, 0]));
        assert!(p.equivalent(&contains_one()).unwrap());
    }

    #[test]
    fn minimize_preserves_language() {
        let a = contains_one();
        let b = a.union(&a).unwrap();
        assert_eq!(b.minimize().num_states(), 2);
        assert!(b.minimize().equivalent(&a).unwrap());
    }

    #[test]
    fn length_lex_rank_and_unrank() {
        let u = Dfa::universal(1, false);
        assert_eq!(u.unrank_length_lex(0), Some(vec![]));
        assert_eq!(u.unrank_length_lex(3), Some(vec![0, 0]));
        assert_eq!(u.unrank_length_lex(6), Some(vec![1, 1]));
        for n in 0..40u128 {
            let w = u.unrank_length_lex(n).unwrap();
            assert_eq!(u.rank_length_lex(&w), n);
        }
    }

    #[test]
    fn shortest_lexmin_and_pairs() {
        let u = Dfa::universal(1, false);
        assert_eq!(u.shortest_lexmin_between(&[1], &[0]), Some(vec![]));
        let ones = contains_one();
        assert_eq!(ones.shortest_lexmin_between(&[0], &[0]), Some(vec![1]));
        assert_eq!(u.first_two_extensions(&[1], true, 5), Some((vec![1, 0], vec![1, 1])));
        assert_eq!(u.first_two_extensions(&[1], false, 5), Some((vec![0, 1], vec![1, 1])));
    }
}
