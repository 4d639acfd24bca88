//! Transition monoids and factor-language utilities.

use std::collections::HashMap;

use super::{Dfa, Nfa};
use crate::words::{UpBiWord, UpOmegaWord};
use crate::{Error, Result};

/// Default cap on the number of monoid elements.
pub const DEFAULT_MONOID_CAP: usize = 200_000;

/// The transition monoid of a DFA: all maps `q ↦ δ(q, w)`, each with a
/// length-lex least generator word.
#[derive(Clone, Debug)]
pub struct TransitionMonoid {
    n: usize,
    elements: Vec<Vec<u32>>,
    words: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

impl TransitionMonoid {
    pub fn of(d: &Dfa) -> Result<TransitionMonoid> {
        Self::of_capped(d, DEFAULT_MONOID_CAP)
    }

    /// Elements are generated breadth-first, so `words[i]` is a shortest word
    /// realizing `elements[i]`; index 0 is the identity.
    pub fn of_capped(d: &Dfa, cap: usize) -> Result<TransitionMonoid> {
        let n = d.num_states();
        let id: Vec<u32> = (0..n as u32).collect();
        let mut m = TransitionMonoid { n, elements: vec![id.clone()], words: vec![vec![]], index: HashMap::from([(id, 0)]) };
        let mut i = 0;
        while i < m.elements.len() {
            for a in 0..d.num_letters() as u32 {
                let next: Vec<u32> = m.elements[i].iter().map(|&q| d.next(q, a)).collect();
                if !m.index.contains_key(&next) {
                    if m.elements.len() >= cap {
                        return Err(Error::Resource { stage: "transition monoid".into(), detail: "too many elements".into(), cap });
                    }
                    let mut w = m.words[i].clone();
                    w.push(a);
                    m.index.insert(next.clone(), m.elements.len());
                    m.elements.push(next);
                    m.words.push(w);
                }
            }
            i += 1;
        }
        Ok(m)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element(&self, i: usize) -> &[u32] {
        &self.elements[i]
    }

    pub fn word(&self, i: usize) -> &[u32] {
        &self.words[i]
    }

    /// Index of the map "first `i`, then `j`".
    pub fn compose(&self, i: usize, j: usize) -> usize {
        let f: Vec<u32> = self.elements[i].iter().map(|&q| self.elements[j][q as usize]).collect();
        self.index[&f]
    }

    pub fn states(&self) -> usize {
        self.n
    }
}

fn positions_nfa(letters: &[u8], succ: &[Vec<u32>]) -> Result<Dfa> {
    // every position is initial and accepting; reading the letter at a
    // position moves to its successors
    let n = letters.len();
    let mut trans = vec![Vec::new(); n * 2];
    for p in 0..n {
        trans[p * 2 + letters[p] as usize] = succ[p].clone();
    }
    let nfa = Nfa::new(1, false, trans, (0..n as u32).collect(), vec![true; n])?;
    Ok(nfa.determinize()?.minimize())
}

/// Minimal DFA of the factors of `u v^ω`.
pub fn factor_automaton_up(a: &UpOmegaWord) -> Result<Dfa> {
    let (u, v) = (a.u.letters(), a.v.letters());
    let letters = [u, v].concat();
    let n = letters.len();
    let succ: Vec<Vec<u32>> = (0..n).map(|p| vec![if p + 1 < n { p as u32 + 1 } else { u.len() as u32 }]).collect();
    positions_nfa(&letters, &succ)
}

/// Minimal DFA of the factors of `x^{ω*} y z^ω`.
pub fn factor_automaton_bi(xi: &UpBiWord) -> Result<Dfa> {
    let (x, y, z) = (xi.x.letters(), xi.y.letters(), xi.z.letters());
    let letters = [x, y, z].concat();
    let (lx, ly) = (x.len(), y.len());
    let n = letters.len();
    let first_after_x = lx as u32;
    let succ: Vec<Vec<u32>> = (0..n)
        .map(|p| {
            if p + 1 == lx {
                vec![0, first_after_x]
            } else if p + 1 == n {
                vec![(lx + ly) as u32]
            } else {
                vec![p as u32 + 1]
            }
        })
        .collect();
    positions_nfa(&letters, &succ)
}

/// Minimal DFA of the factors of words of `L(d)` (width-1 alphabets).
pub fn factor_closure(d: &Dfa) -> Result<Dfa> {
    let nfa = d.to_nfa();
    let reach = d.reachable_states();
    let live = d.live_states();
    let n = d.num_states();
    let keep: Vec<bool> = (0..n).map(|q| reach[q] && live[q]).collect();
    let k = d.num_letters();
    let mut trans = vec![Vec::new(); n * k];
    for q in 0..n as u32 {
        for a in 0..k as u32 {
            if keep[q as usize] {
                trans[q as usize * k + a as usize] =
                    nfa.succ(q, a).iter().copied().filter(|&t| keep[t as usize]).collect();
            }
        }
    }
    let init: Vec<u32> = (0..n as u32).filter(|&q| keep[q as usize]).collect();
    if init.is_empty() {
        return Ok(Dfa::empty(d.width(), d.has_dollar()));
    }
    Ok(Nfa::new(d.width(), d.has_dollar(), trans, init, keep)?.determinize()?.minimize())
}

/// Whether `L(d)` is closed under taking factors.
pub fn factorial_check(d: &Dfa) -> Result<bool> {
    factor_closure(d)?.equivalent(d)
}

/// Whether for all `u, w ∈ L` some `v` has `uvw ∈ L`.
///
/// `p = δ(q₀, u)` ranges over reachable accepting states and `w` over monoid
/// elements `m` with `m(q₀)` accepting; the condition asks for a state `r`
/// reachable from `p` with `m(r)` accepting.
pub fn extension_check(d: &Dfa) -> Result<bool> {
    let d = d.minimize();
    let m = TransitionMonoid::of(&d)?;
    let q0 = d.init() as usize;
    let reach = d.reachable_states();
    for p in 0..d.num_states() {
        if !(reach[p] && d.is_accepting(p as u32)) {
            continue;
        }
        let from_p = d.reachable_from(&[p as u32]);
        for i in 0..m.len() {
            let e = m.element(i);
            if !d.is_accepting(e[q0]) {
                continue;
            }
            if !(0..d.num_states()).any(|r| from_p[r] && d.is_accepting(e[r])) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
