//! Büchi automata, transition profiles, lasso membership and Ramsey-based
//! complementation.

use std::collections::HashMap;

use super::{check_width, letter_count};
use crate::{Error, Result};

/// Default cap on the input size of [`Nba::complement`].
pub const DEFAULT_COMPLEMENT_CAP: usize = 12;
/// Default cap on the number of reachable profiles during complementation.
pub const DEFAULT_PROFILE_CAP: usize = 50_000;

/// Nondeterministic Büchi automaton (no `$` letter).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nba {
    width: usize,
    n: usize,
    trans: Vec<Vec<u32>>,
    init: Vec<u32>,
    acc: Vec<bool>,
}

/// Summary of a finite word `v` for an NBA: entry `(p,q)` is 0 when no run on
/// `v` leads from `p` to `q`, 1 when some run does, 2 when some run does while
/// visiting an accepting state (its endpoints included).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Profile {
    n: usize,
    m: Vec<u8>,
}

impl Profile {
    pub fn identity(n: usize) -> Profile {
        let mut m = vec![0; n * n];
        for i in 0..n {
            m[i * n + i] = 1;
        }
        Profile { n, m }
    }

    pub fn get(&self, p: usize, q: usize) -> u8 {
        self.m[p * self.n + q]
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// The profile of `self` followed by `other`.
    pub fn then(&self, other: &Profile) -> Profile {
        let n = self.n;
        let mut m = vec![0u8; n * n];
        for p in 0..n {
            for r in 0..n {
                let x = self.m[p * n + r];
                if x == 0 {
                    continue;
                }
                for q in 0..n {
                    let y = other.m[r * n + q];
                    if y != 0 {
                        let c = x.max(y);
                        if c > m[p * n + q] {
                            m[p * n + q] = c;
                        }
                    }
                }
            }
        }
        Profile { n, m }
    }

    /// Least power `v^m`, `m ≥ 1`, that is idempotent.
    pub fn idempotent_power(&self) -> Profile {
        let mut seen: HashMap<Profile, usize> = HashMap::new();
        let mut powers = vec![self.clone()];
        seen.insert(self.clone(), 1);
        let (first, period) = loop {
            let next = powers.last().unwrap().then(self);
            let i = powers.len() + 1;
            if let Some(&j) = seen.get(&next) {
                break (j, i - j);
            }
            seen.insert(next.clone(), i);
            powers.push(next);
        };
        let m = first.div_ceil(period) * period;
        powers[m - 1].clone()
    }

    /// States reachable from `set` under this profile.
    pub fn image(&self, set: &[bool]) -> Vec<bool> {
        let n = self.n;
        (0..n).map(|q| (0..n).any(|p| set[p] && self.m[p * n + q] != 0)).collect()
    }
}

impl Nba {
    pub fn new(width: usize, trans: Vec<Vec<u32>>, init: Vec<u32>, acc: Vec<bool>) -> Result<Nba> {
        check_width(width)?;
        let n = acc.len();
        if trans.len() != n * letter_count(width, false) || trans.iter().flatten().chain(&init).any(|&q| q as usize >= n) {
            return Err(Error::invalid("malformed NBA transition table"));
        }
        let mut trans = trans;
        for t in &mut trans {
            t.sort_unstable();
            t.dedup();
        }
        Ok(Nba { width, n, trans, init, acc })
    }

    /// NBA from an edge list `(src, letter, dst)`.
    pub fn from_edges(width: usize, n: usize, edges: &[(u32, u32, u32)], init: Vec<u32>, acc: Vec<bool>) -> Result<Nba> {
        let k = letter_count(width, false);
        let mut trans = vec![Vec::new(); n * k];
        for &(p, a, q) in edges {
            if p as usize >= n || a as usize >= k {
                return Err(Error::invalid("NBA edge out of range"));
            }
            trans[p as usize * k + a as usize].push(q);
        }
        Nba::new(width, trans, init, acc)
    }

    /// The empty language.
    pub fn empty(width: usize) -> Nba {
        Nba { width, n: 1, trans: vec![Vec::new(); letter_count(width, false)], init: vec![0], acc: vec![false] }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn num_states(&self) -> usize {
        self.n
    }

    pub fn num_letters(&self) -> usize {
        letter_count(self.width, false)
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

    pub fn letter_profile(&self, a: u32) -> Profile {
        let n = self.n;
        let mut m = vec![0u8; n * n];
        for p in 0..n {
            for &q in self.succ(p as u32, a) {
                let tag = if self.acc[p] || self.acc[q as usize] { 2 } else { 1 };
                m[p * n + q as usize] = m[p * n + q as usize].max(tag);
            }
        }
        Profile { n, m }
    }

    pub fn profile(&self, word: &[u32]) -> Profile {
        word.iter().fold(Profile::identity(self.n), |p, &a| p.then(&self.letter_profile(a)))
    }

    fn initial_set(&self) -> Vec<bool> {
        let mut s = vec![false; self.n];
        for &q in &self.init {
            s[q as usize] = true;
        }
        s
    }

    /// Whether `u v^ω` is accepted.
    pub fn accepts_up(&self, u: &[u32], v: &[u32]) -> Result<bool> {
        if v.is_empty() {
            return Err(Error::invalid("the loop of an ultimately periodic word must be nonempty"));
        }
        let s = self.profile(u).image(&self.initial_set());
        Ok(Self::lasso_accepted(&s, &self.profile(v)))
    }

    /// Acceptance of `u v^ω` given the state set after `u` and the profile of `v`.
    pub(crate) fn lasso_accepted(after_u: &[bool], pv: &Profile) -> bool {
        let e = pv.idempotent_power();
        let reach = e.image(after_u);
        (0..e.n).any(|r| reach[r] && e.get(r, r) == 2)
    }

    /// Removes states that are unreachable or cannot reach an accepting cycle.
    pub fn trim(&self) -> Nba {
        let k = self.num_letters();
        let mut reach = vec![false; self.n];
        let mut stack: Vec<u32> = self.init.clone();
        for &q in &self.init {
            reach[q as usize] = true;
        }
        while let Some(q) = stack.pop() {
            for a in 0..k as u32 {
                for &t in self.succ(q, a) {
                    if !reach[t as usize] {
                        reach[t as usize] = true;
                        stack.push(t);
                    }
                }
            }
        }
        // states that can reach some accepting state lying on a cycle
        let succs: Vec<Vec<u32>> = (0..self.n)
            .map(|q| {
                let mut s: Vec<u32> = (0..k).flat_map(|a| self.trans[q * k + a].iter().copied()).collect();
                s.sort_unstable();
                s.dedup();
                s
            })
            .collect();
        let reaches = |from: usize| {
            let mut seen = vec![false; self.n];
            let mut st: Vec<u32> = succs[from].clone();
            for &t in &st {
                seen[t as usize] = true;
            }
            while let Some(q) = st.pop() {
                for &t in &succs[q as usize] {
                    if !seen[t as usize] {
                        seen[t as usize] = true;
                        st.push(t);
                    }
                }
            }
            seen
        };
        let mut good = vec![false; self.n];
        for q in 0..self.n {
            if reach[q] && self.acc[q] && reaches(q)[q] {
                good[q] = true;
            }
        }
        let mut changed = true;
        while changed {
            changed = false;
            for q in 0..self.n {
                if !good[q] && succs[q].iter().any(|&t| good[t as usize]) {
                    good[q] = true;
                    changed = true;
                }
            }
        }
        let keep: Vec<bool> = (0..self.n).map(|q| reach[q] && good[q]).collect();
        let mut id = vec![u32::MAX; self.n];
        let mut count = 0u32;
        for q in 0..self.n {
            if keep[q] {
                id[q] = count;
                count += 1;
            }
        }
        if count == 0 {
            return Nba::empty(self.width);
        }
        let mut trans = Vec::with_capacity(count as usize * k);
        for q in 0..self.n {
            if !keep[q] {
                continue;
            }
            for a in 0..k {
                trans.push(self.trans[q * k + a].iter().filter(|&&t| keep[t as usize]).map(|&t| id[t as usize]).collect());
            }
        }
        Nba {
            width: self.width,
            n: count as usize,
            trans,
            init: self.init.iter().filter(|&&q| keep[q as usize]).map(|&q| id[q as usize]).collect(),
            acc: (0..self.n).filter(|&q| keep[q]).map(|q| self.acc[q]).collect(),
        }
    }

    pub fn complement(&self) -> Result<Nba> {
        self.complement_capped(DEFAULT_COMPLEMENT_CAP, DEFAULT_PROFILE_CAP)
    }

    /// Ramsey-based complement: the union of `[s][e]^ω` over linked profile
    /// pairs (`s·e = s`, `e·e = e`) whose language is disjoint from `L(self)`.
    pub fn complement_capped(&self, state_cap: usize, profile_cap: usize) -> Result<Nba> {
        if self.n > state_cap {
            return Err(Error::Resource {
                stage: "nba_complement".into(),
                detail: format!("input has {} states", self.n),
                cap: state_cap,
            });
        }
        let k = self.num_letters();
        let letters: Vec<Profile> = (0..k as u32).map(|a| self.letter_profile(a)).collect();
        // index 0 is the identity (profile of ε), the rest are profiles of nonempty words
        let mut elems = vec![Profile::identity(self.n)];
        let mut index: HashMap<Profile, u32> = HashMap::new();
        let mut step: Vec<Vec<u32>> = Vec::new();
        let mut i = 0;
        while i < elems.len() {
            let mut row = Vec::with_capacity(k);
            for l in &letters {
                let next = elems[i].then(l);
                let id = match index.get(&next) {
                    Some(&id) => id,
                    None => {
                        if elems.len() > profile_cap {
                            return Err(Error::Resource {
                                stage: "nba_complement".into(),
                                detail: "too many transition profiles".into(),
                                cap: profile_cap,
                            });
                        }
                        let id = elems.len() as u32;
                        index.insert(next.clone(), id);
                        elems.push(next);
                        id
                    }
                };
                row.push(id);
            }
            step.push(row);
            i += 1;
        }
        // elements of the semigroup of nonempty words; a nonempty word with the
        // identity profile gets its own index, distinct from 0
        let words: Vec<usize> = (1..elems.len()).collect();
        let init = self.initial_set();
        let accepted = |s: &Profile, e: &Profile| {
            let after = s.image(&init);
            (0..self.n).any(|r| after[r] && e.get(r, r) == 2)
        };
        let idempotents: Vec<usize> = words.iter().copied().filter(|&e| elems[e].then(&elems[e]) == elems[e]).collect();
        // rejected linked pairs (s, e)
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        for &s in &words {
            for &e in &idempotents {
                if elems[s].then(&elems[e]) == elems[s] && !accepted(&elems[s], &elems[e]) {
                    pairs.push((s, e));
                }
            }
        }
        let loop_es: Vec<usize> = {
            let mut v: Vec<usize> = pairs.iter().map(|&(_, e)| e).collect();
            v.sort_unstable();
            v.dedup();
            v
        };
        let m = elems.len();
        // states: pre(j) = j for j < m; per loop idempotent e (index t):
        //   loop(t, j) = m + t*(m+1) + j for j in 1..m, done(t) = m + t*(m+1)
        let base = |t: usize| m + t * (m + 1);
        let n = m + loop_es.len() * (m + 1);
        let mut trans = vec![Vec::new(); n * k];
        let mut acc = vec![false; n];
        for j in 0..m {
            for a in 0..k {
                let nx = step[j][a] as usize;
                trans[j * k + a].push(nx as u32);
                for (t, &e) in loop_es.iter().enumerate() {
                    if pairs.contains(&(nx, e)) {
                        trans[j * k + a].push(base(t) as u32);
                    }
                }
            }
        }
        for (t, &e) in loop_es.iter().enumerate() {
            acc[base(t)] = true;
            for j in 0..m {
                let from = base(t) + j;
                for a in 0..k {
                    let nx = step[j][a] as usize;
                    trans[from * k + a].push((base(t) + nx) as u32);
                    if nx == e {
                        trans[from * k + a].push(base(t) as u32);
                    }
                }
            }
        }
        Ok(Nba::new(self.width, trans, vec![0], acc)?.trim())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Infinitely many 1s: state 1 is entered on each 1.
    fn inf_ones() -> Nba {
        Nba::from_edges(1, 2, &[(0, 0, 0), (0, 1, 1), (1, 0, 0), (1, 1, 1)], vec![0], vec![false, true]).unwrap()
    }

    #[test]
    fn membership_examples() {
        let a = inf_ones();
        assert!(a.accepts_up(&[], &[1, 0]).unwrap());
        assert!(!a.accepts_up(&[1], &[0]).unwrap());
        assert!(a.accepts_up(&[], &[]).is_err());
    }

    #[test]
    fn complement_examples() {
        let c = inf_ones().complement().unwrap();
        assert!(c.accepts_up(&[], &[0]).unwrap());
        assert!(!c.accepts_up(&[0], &[0, 1]).unwrap());
        let all = Nba::empty(1).complement().unwrap();
        for (u, v) in [(vec![], vec![0]), (vec![1], vec![1, 0]), (vec![0, 0], vec![1])] {
            assert!(all.accepts_up(&u, &v).unwrap());
        }
    }

    #[test]
    fn complement_cap_is_reported() {
        let big = Nba::from_edges(1, 13, &[(0, 0, 0)], vec![0], vec![false; 13]).unwrap();
        match big.complement() {
            Err(Error::Resource { cap, .. }) => assert_eq!(cap, DEFAULT_COMPLEMENT_CAP),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn idempotent_power_is_idempotent() {
        let a = inf_ones();
        let e = a.profile(&[0, 1, 1]).idempotent_power();
        assert_eq!(e.then(&e), e);
    }
}
