//! Line-oriented text and JSON serialization of automata.
//!
//! ```text
//! dfa width=1 states=2
//! 0 0 0
//! 0 1 1
//! 1 0 1
//! 1 1 1
//! init: 0
//! acc: 1
//! ```
//!
//! Letters are written as bit strings, track 0 first; `$` is the lasso letter.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{letter_count, Dfa, Nba, Nfa};
use crate::{Error, Result};

/// Any of the three automaton kinds.
#[derive(Clone, Debug)]
pub enum Automaton {
    Dfa(Dfa),
    Nfa(Nfa),
    Nba(Nba),
}

/// JSON mirror of the text format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutomatonJson {
    pub kind: String,
    pub width: usize,
    pub states: usize,
    pub transitions: Vec<(u32, String, u32)>,
    pub init: Vec<u32>,
    pub acc: Vec<u32>,
}

fn letter_bits(a: u32, width: usize) -> String {
    if a == 1 << width {
        return "$".into();
    }
    (0..width).map(|t| if a >> t & 1 == 1 { '1' } else { '0' }).collect()
}

fn parse_bits(s: &str, width: usize) -> Result<u32> {
    if s == "$" {
        return Ok(1 << width);
    }
    if s.len() != width || !s.chars().all(|c| c == '0' || c == '1') {
        return Err(Error::invalid(format!("bad letter `{s}` for width {width}")));
    }
    Ok(s.chars().enumerate().map(|(t, c)| ((c == '1') as u32) << t).sum())
}

impl Automaton {
    pub fn to_json(&self) -> AutomatonJson {
        let mut transitions = Vec::new();
        let (kind, width, states, init, acc): (&str, usize, usize, Vec<u32>, &[bool]) = match self {
            Automaton::Dfa(d) => {
                for q in 0..d.num_states() as u32 {
                    for a in 0..d.num_letters() as u32 {
                        transitions.push((q, letter_bits(a, d.width()), d.next(q, a)));
                    }
                }
                ("dfa", d.width(), d.num_states(), vec![d.init()], d.accepting())
            }
            Automaton::Nfa(d) => {
                for q in 0..d.num_states() as u32 {
                    for a in 0..d.num_letters() as u32 {
                        for &t in d.succ(q, a) {
                            transitions.push((q, letter_bits(a, d.width()), t));
                        }
                    }
                }
                ("nfa", d.width(), d.num_states(), d.init().to_vec(), d.accepting())
            }
            Automaton::Nba(d) => {
                for q in 0..d.num_states() as u32 {
                    for a in 0..d.num_letters() as u32 {
                        for &t in d.succ(q, a) {
                            transitions.push((q, letter_bits(a, d.width()), t));
                        }
                    }
                }
                ("nba", d.width(), d.num_states(), d.init().to_vec(), d.accepting())
            }
        };
        AutomatonJson {
            kind: kind.into(),
            width,
            states,
            transitions,
            init,
            acc: (0..acc.len() as u32).filter(|&q| acc[q as usize]).collect(),
        }
    }

    pub fn from_json(j: &AutomatonJson) -> Result<Automaton> {
        let dollar = j.transitions.iter().any(|(_, l, _)| l == "$");
        let k = letter_count(j.width, dollar && j.kind != "nba");
        let mut acc = vec![false; j.states];
        for &q in &j.acc {
            *acc.get_mut(q as usize).ok_or_else(|| Error::invalid("accepting state out of range"))? = true;
        }
        let mut rel = vec![Vec::new(); j.states * k];
        for (p, l, q) in &j.transitions {
            let a = parse_bits(l, j.width)? as usize;
            if *p as usize >= j.states || a >= k {
                return Err(Error::invalid("transition out of range"));
            }
            rel[*p as usize * k + a].push(*q);
        }
        match j.kind.as_str() {
            "dfa" => {
                if rel.iter().any(|t| t.len() != 1) || j.init.len() != 1 {
                    return Err(Error::invalid("DFA must have exactly one transition per state and letter"));
                }
                let trans = rel.into_iter().map(|t| t[0]).collect();
                Ok(Automaton::Dfa(Dfa::new(j.width, dollar, trans, j.init[0], acc)?))
            }
            "nfa" => Ok(Automaton::Nfa(Nfa::new(j.width, dollar, rel, j.init.clone(), acc)?)),
            "nba" => Ok(Automaton::Nba(Nba::new(j.width, rel, j.init.clone(), acc)?)),
            other => Err(Error::invalid(format!("unknown automaton kind `{other}`"))),
        }
    }

    pub fn to_text(&self) -> String {
        let j = self.to_json();
        let mut s = format!("{} width={} states={}\n", j.kind, j.width, j.states);
        for (p, l, q) in &j.transitions {
            let _ = writeln!(s, "{p} {l} {q}");
        }
        let list = |v: &[u32]| v.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(" ");
        let _ = writeln!(s, "init: {}", list(&j.init));
        let _ = writeln!(s, "acc: {}", list(&j.acc));
        s
    }

    pub fn from_text(text: &str) -> Result<Automaton> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::invalid("empty automaton file"))?;
        let mut parts = header.split_whitespace();
        let kind = parts.next().unwrap_or_default().to_string();
        let mut width = None;
        let mut states = None;
        for p in parts {
            match p.split_once('=') {
                Some(("width", v)) => width = v.parse().ok(),
                Some(("states", v)) => states = v.parse().ok(),
                _ => return Err(Error::invalid(format!("bad header field `{p}`"))),
            }
        }
        let (width, states) = width.zip(states).ok_or_else(|| Error::invalid("header needs width= and states="))?;
        let mut j = AutomatonJson { kind, width, states, transitions: Vec::new(), init: Vec::new(), acc: Vec::new() };
        let ids = |s: &str| -> Result<Vec<u32>> {
            s.split_whitespace().map(|t| t.parse().map_err(|_| Error::invalid(format!("bad state `{t}`")))).collect()
        };
        for line in lines {
            if let Some(rest) = line.strip_prefix("init:") {
                j.init = ids(rest)?;
            } else if let Some(rest) = line.strip_prefix("acc:") {
                j.acc = ids(rest)?;
            } else {
                let f: Vec<&str> = line.split_whitespace().collect();
                if f.len() != 3 {
                    return Err(Error::invalid(format!("bad transition line `{line}`")));
                }
                let p = f[0].parse().map_err(|_| Error::invalid(format!("bad state `{}`", f[0])))?;
                let q = f[2].parse().map_err(|_| Error::invalid(format!("bad state `{}`", f[2])))?;
                j.transitions.push((p, f[1].to_string(), q));
            }
        }
        Automaton::from_json(&j)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let d = Dfa::from_fn(2, true, 3, 0, vec![false, true, false], |q, a| (q + a) % 3);
        let t = Automaton::Dfa(d.clone()).to_text();
        assert!(t.starts_with("dfa width=2 states=3\n"));
        match Automaton::from_text(&t).unwrap() {
            Automaton::Dfa(e) => assert_eq!(e, d),
            _ => panic!("kind changed"),
        }
    }

    #[test]
    fn json_round_trip_nba() {
        let a = Nba::from_edges(1, 2, &[(0, 0, 0), (0, 1, 1), (1, 1, 1)], vec![0], vec![false, true]).unwrap();
        let j = Automaton::Nba(a.clone()).to_json();
        let s = serde_json::to_string(&j).unwrap();
        let back: AutomatonJson = serde_json::from_str(&s).unwrap();
        assert_eq!(back, j);
        match Automaton::from_json(&back).unwrap() {
            Automaton::Nba(b) => assert_eq!(b, a),
            _ => panic!("kind changed"),
        }
    }
}
