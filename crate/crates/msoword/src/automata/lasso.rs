//! Lasso DFAs: an ω-regular language `L` is represented by a DFA over the
//! alphabet extended with `$` accepting `L$ = { u$v : v ≠ ε, u v^ω ∈ L }`.
//!
//! Every operation here keeps the represented set saturated (membership of
//! `u$v` depends only on the ω-word `u v^ω`), so boolean operations are plain
//! DFA operations and complement is relative to the shape `Σ*$Σ⁺`.

use std::collections::HashMap;

use super::nba::{Nba, Profile};
use super::{Dfa, DEFAULT_SUBSET_CAP};
use crate::{Error, Result};

/// DFA for `Σ*$Σ⁺` over `width` tracks.
pub fn shape(width: usize) -> Dfa {
    let dollar = 1u32 << width;
    Dfa::from_fn(width, true, 4, 0, vec![false, false, true, false], move |q, a| match (q, a == dollar) {
        (0, false) => 0,
        (0, true) => 1,
        (1, false) | (2, false) => 2,
        _ => 3,
    })
}

/// Complement relative to `Σ*$Σ⁺`.
pub fn complement(d: &Dfa) -> Result<Dfa> {
    Ok(d.complement().intersect(&shape(d.width()))?.minimize())
}

/// Whether the lasso DFA accepts `u v^ω`.
pub fn accepts_up(d: &Dfa, u: &[u32], v: &[u32]) -> Result<bool> {
    if v.is_empty() {
        return Err(Error::invalid("the loop of an ultimately periodic word must be nonempty"));
    }
    let q = d.run(d.init(), u.iter().copied());
    let q = d.next(q, d.dollar_letter());
    Ok(d.is_accepting(d.run(q, v.iter().copied())))
}

/// Converts an NBA into a minimal lasso DFA.
pub fn from_nba(a: &Nba) -> Result<Dfa> {
    from_nba_capped(a, DEFAULT_SUBSET_CAP)
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum NbaKey {
    Pre(Vec<bool>),
    Post(Vec<bool>, Option<Profile>),
    Sink,
}

pub fn from_nba_capped(a: &Nba, cap: usize) -> Result<Dfa> {
    let w = a.width();
    let k = a.num_letters();
    let letters: Vec<Profile> = (0..k as u32).map(|x| a.letter_profile(x)).collect();
    let mut init = vec![false; a.num_states()];
    for &q in a.init() {
        init[q as usize] = true;
    }
    let step = |key: &NbaKey, x: usize| -> NbaKey {
        match key {
            NbaKey::Pre(s) if x == k => NbaKey::Post(s.clone(), None),
            NbaKey::Pre(s) => NbaKey::Pre(letters[x].image(s)),
            NbaKey::Post(_, _) if x == k => NbaKey::Sink,
            NbaKey::Post(s, p) => {
                let next = match p {
                    None => letters[x].clone(),
                    Some(p) => p.then(&letters[x]),
                };
                NbaKey::Post(s.clone(), Some(next))
            }
            NbaKey::Sink => NbaKey::Sink,
        }
    };
    let accept = |key: &NbaKey| match key {
        NbaKey::Post(s, Some(p)) => Nba::lasso_accepted(s, p),
        _ => false,
    };
    explore(w, NbaKey::Pre(init), k + 1, cap, step, accept)
}

/// Builds the DFA of all keys reachable from `start`.
fn explore<K: Clone + Eq + std::hash::Hash>(
    width: usize,
    start: K,
    letters: usize,
    cap: usize,
    step: impl Fn(&K, usize) -> K,
    accept: impl Fn(&K) -> bool,
) -> Result<Dfa> {
    let mut index: HashMap<K, u32> = HashMap::new();
    index.insert(start.clone(), 0);
    let mut keys = vec![start];
    let mut trans = Vec::new();
    let mut i = 0;
    while i < keys.len() {
        for x in 0..letters {
            let next = step(&keys[i], x);
            let id = match index.get(&next) {
                Some(&id) => id,
                None => {
                    if keys.len() >= cap {
                        return Err(Error::Resource {
                            stage: "lasso construction".into(),
                            detail: "too many states".into(),
                            cap,
                        });
                    }
                    let id = keys.len() as u32;
                    index.insert(next.clone(), id);
                    keys.push(next);
                    id
                }
            };
            trans.push(id);
        }
        i += 1;
    }
    let acc = keys.iter().map(accept).collect();
    Ok(Dfa::new(width, true, trans, 0, acc)?.minimize())
}

/// Boolean relation over `n` states stored as bit rows.
#[derive(Clone, PartialEq, Eq, Hash)]
struct Rel {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl Rel {
    fn zero(n: usize) -> Rel {
        let words = n.div_ceil(64).max(1);
        Rel { n, words, bits: vec![0; n * words] }
    }

    fn set(&mut self, p: usize, q: usize) {
        self.bits[p * self.words + q / 64] |= 1 << (q % 64);
    }

    fn get(&self, p: usize, q: usize) -> bool {
        self.bits[p * self.words + q / 64] >> (q % 64) & 1 == 1
    }

    fn row(&self, p: usize) -> &[u64] {
        &self.bits[p * self.words..(p + 1) * self.words]
    }

    /// `self` followed by `other`.
    fn then(&self, other: &Rel) -> Rel {
        let mut out = Rel::zero(self.n);
        for p in 0..self.n {
            let mut row = vec![0u64; self.words];
            for r in 0..self.n {
                if self.get(p, r) {
                    for (a, b) in row.iter_mut().zip(other.row(r)) {
                        *a |= b;
                    }
                }
            }
            out.bits[p * self.words..(p + 1) * self.words].copy_from_slice(&row);
        }
        out
    }

    fn image(&self, set: &[bool]) -> Vec<bool> {
        let mut out = vec![false; self.n];
        for p in 0..self.n {
            if set[p] {
                for (q, o) in out.iter_mut().enumerate() {
                    if self.get(p, q) {
                        *o = true;
                    }
                }
            }
        }
        out
    }

    /// States reachable from `set` in zero or more steps.
    fn star_image(&self, set: &[bool]) -> Vec<bool> {
        let mut cur = set.to_vec();
        loop {
            let next = self.image(&cur);
            let mut changed = false;
            for (c, x) in cur.iter_mut().zip(next) {
                if x && !*c {
                    *c = true;
                    changed = true;
                }
            }
            if !changed {
                return cur;
            }
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum ProjKey {
    Pre(Vec<bool>),
    Post(Vec<bool>, Option<Rel>),
    Sink,
}

/// Existential projection of `track` on a lasso DFA.
///
/// Before `$` the construction tracks the subset `S` of states reachable on
/// some extension of the prefix; after `$` it tracks `S` together with the
/// relation `R` of extensions of the loop word over all states. The word is
/// accepted iff some state of `δ(S·R*, $)·R⁺` is accepting.
pub fn project(d: &Dfa, track: usize) -> Result<Dfa> {
    project_capped(d, track, DEFAULT_SUBSET_CAP)
}

pub fn project_capped(d: &Dfa, track: usize, cap: usize) -> Result<Dfa> {
    if !d.has_dollar() {
        return Err(Error::invalid("lasso projection needs a DFA with the $ letter"));
    }
    if track >= d.width() {
        return Err(Error::invalid(format!("no track {track} in width {}", d.width())));
    }
    let n = d.num_states();
    let w = d.width() - 1;
    let k = 1usize << w;
    let low = (1u32 << track) - 1;
    let widen = |a: u32, bit: u32| (a & low) | (bit << track) | ((a & !low) << 1);
    let letter_rel: Vec<Rel> = (0..k as u32)
        .map(|a| {
            let mut r = Rel::zero(n);
            for q in 0..n as u32 {
                r.set(q as usize, d.next(q, widen(a, 0)) as usize);
                r.set(q as usize, d.next(q, widen(a, 1)) as usize);
            }
            r
        })
        .collect();
    let dollar = d.dollar_letter();
    let mut init = vec![false; n];
    init[d.init() as usize] = true;
    let step = |key: &ProjKey, x: usize| -> ProjKey {
        match key {
            ProjKey::Pre(s) if x == k => ProjKey::Post(s.clone(), None),
            ProjKey::Pre(s) => ProjKey::Pre(letter_rel[x].image(s)),
            ProjKey::Post(..) if x == k => ProjKey::Sink,
            ProjKey::Post(s, r) => ProjKey::Post(
                s.clone(),
                Some(match r {
                    None => letter_rel[x].clone(),
                    Some(r) => r.then(&letter_rel[x]),
                }),
            ),
            ProjKey::Sink => ProjKey::Sink,
        }
    };
    let accept = |key: &ProjKey| match key {
        ProjKey::Post(s, Some(r)) => {
            let p = r.star_image(s);
            let mut t = vec![false; n];
            for q in 0..n {
                if p[q] {
                    t[d.next(q as u32, dollar) as usize] = true;
                }
            }
            let plus = r.star_image(&r.image(&t));
            (0..n).any(|q| plus[q] && d.is_accepting(q as u32))
        }
        _ => false,
    };
    explore(w, ProjKey::Pre(init), k + 1, cap, step, accept)
}

/// An NBA for the ω-language of a lasso DFA: the union over pairs `(q, p)`,
/// `p` accepting, of `U_q · N_{q,p}^ω` where `U_q` leads from the initial
/// state to `q` and `N_{q,p}` is the set of nonempty `v` with `q·v = q`,
/// `(q·$)·v = p` and `p·v = p`.
pub fn to_nba(d: &Dfa) -> Result<Nba> {
    let w = d.width();
    let k = 1usize << w;
    let dollar = d.dollar_letter();
    let n = d.num_states();
    // prefix copy: DFA states reachable without `$`
    let mut pre_reach = vec![false; n];
    pre_reach[d.init() as usize] = true;
    let mut stack = vec![d.init()];
    while let Some(q) = stack.pop() {
        for a in 0..k as u32 {
            let t = d.next(q, a);
            if !pre_reach[t as usize] {
                pre_reach[t as usize] = true;
                stack.push(t);
            }
        }
    }
    let mut edges: Vec<(u32, u32, u32)> = Vec::new();
    for q in 0..n as u32 {
        if pre_reach[q as usize] {
            for a in 0..k as u32 {
                edges.push((q, a, d.next(q, a)));
            }
        }
    }
    let mut count = n as u32;
    let mut acc = vec![false; n];
    let mut init = vec![d.init()];
    for q in 0..n as u32 {
        if !pre_reach[q as usize] {
            continue;
        }
        let qd = d.next(q, dollar);
        for p in 0..n as u32 {
            if !d.is_accepting(p) {
                continue;
            }
            // triples (q·v, (q$)·v, p·v) reachable from (q, q$, p); the hub (local
            // id 0) starts a block and is entered whenever a block completes
            let target = (q, p, p);
            let start = (q, qd, p);
            let mut index: HashMap<(u32, u32, u32), u32> = HashMap::from([(start, 0)]);
            let mut triples = vec![start];
            let hub = count;
            let mut local: Vec<(u32, u32, u32)> = Vec::new();
            let mut closes = false;
            let mut i = 0;
            while i < triples.len() {
                let (x, y, z) = triples[i];
                for a in 0..k as u32 {
                    let t = (d.next(x, a), d.next(y, a), d.next(z, a));
                    let id = *index.entry(t).or_insert_with(|| {
                        triples.push(t);
                        (triples.len() - 1) as u32
                    });
                    local.push((i as u32 + 1, a, id + 1));
                    if i == 0 {
                        local.push((0, a, id + 1));
                    }
                    if t == target {
                        closes = true;
                        local.push((i as u32 + 1, a, 0));
                        if i == 0 {
                            local.push((0, a, 0));
                        }
                    }
                }
                i += 1;
            }
            if !closes {
                continue;
            }
            let ids = triples.len() as u32 + 1;
            for &(s, a, t) in &local {
                edges.push((hub + s, a, hub + t));
            }
            acc.resize((count + ids) as usize, false);
            acc[hub as usize] = true;
            for pq in 0..n as u32 {
                if pre_reach[pq as usize] {
                    for a in 0..k as u32 {
                        if d.next(pq, a) == q {
                            edges.push((pq, a, hub));
                        }
                    }
                }
            }
            if q == d.init() {
                init.push(hub);
            }
            count += ids;
        }
    }
    acc.resize(count as usize, false);
    Ok(Nba::from_edges(w, count as usize, &edges, init, acc)?.trim())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inf_ones() -> Nba {
        Nba::from_edges(1, 2, &[(0, 0, 0), (0, 1, 1), (1, 0, 0), (1, 1, 1)], vec![0], vec![false, true]).unwrap()
    }

    #[test]
    fn nba_to_lasso_and_back() {
        let l = from_nba(&inf_ones()).unwrap();
        assert!(accepts_up(&l, &[], &[1, 0]).unwrap());
        assert!(accepts_up(&l, &[0, 0], &[0, 1]).unwrap());
        assert!(!accepts_up(&l, &[1], &[0]).unwrap());
        let back = to_nba(&l).unwrap();
        assert!(back.accepts_up(&[], &[1, 0]).unwrap());
        assert!(!back.accepts_up(&[1, 1], &[0]).unwrap());
    }

    #[test]
    fn complement_flips_membership() {
        let l = from_nba(&inf_ones()).unwrap();
        let c = complement(&l).unwrap();
        assert!(accepts_up(&c, &[1], &[0]).unwrap());
        assert!(!accepts_up(&c, &[], &[0, 1]).unwrap());
    }

    #[test]
    fn projection_of_second_track() {
        // width 2: infinitely many positions where both tracks are 1
        let a = Nba::from_edges(
            2,
            2,
            &[(0, 0, 0), (0, 1, 0), (0, 2, 0), (0, 3, 1), (1, 0, 0), (1, 1, 0), (1, 2, 0), (1, 3, 1)],
            vec![0],
            vec![false, true],
        )
        .unwrap();
        let p = project(&from_nba(&a).unwrap(), 1).unwrap();
        assert!(accepts_up(&p, &[], &[0, 1]).unwrap());
        assert!(!accepts_up(&p, &[1, 1], &[0]).unwrap());
        assert!(p.equivalent(&from_nba(&inf_ones()).unwrap()).unwrap());
    }
}
