use std::collections::HashMap;
use std::fmt::Write as _;

use serde::Serialize;

use super::{transitions, ActionClasses};
use crate::error::{Error, Result};
use crate::word::GenWord;
use crate::wreath::Recursion;

/// Moore diagram of a state-closed set: `states[i]` goes to
/// `transitions[i][x]` on letter `x`.
#[derive(Clone, Debug, PartialEq)]
pub struct MooreDiagram {
    pub states: Vec<GenWord>,
    pub transitions: Vec<[usize; 2]>,
    pub active: Vec<bool>,
}

#[derive(Serialize)]
struct JsonEdge {
    from: String,
    letter: u8,
    to: String,
}

#[derive(Serialize)]
struct JsonDiagram {
    states: Vec<String>,
    active: Vec<String>,
    transitions: Vec<JsonEdge>,
}

impl MooreDiagram {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn active_states(&self) -> Vec<&GenWord> {
        self.states.iter().zip(&self.active).filter(|(_, a)| **a).map(|(s, _)| s).collect()
    }

    /// Same states with the letters 0 and 1 exchanged.
    pub fn swap_letters(&self) -> MooreDiagram {
        MooreDiagram {
            states: self.states.clone(),
            transitions: self.transitions.iter().map(|t| [t[1], t[0]]).collect(),
            active: self.active.clone(),
        }
    }

    pub fn to_dot(&self, name: &str) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "digraph \"{name}\" {{");
        for (i, w) in self.states.iter().enumerate() {
            let fill = if self.active[i] { "grey" } else { "white" };
            let _ = writeln!(s, "  s{i} [label=\"{w}\", style=filled, fillcolor={fill}];");
        }
        for (i, t) in self.transitions.iter().enumerate() {
            for (x, &j) in t.iter().enumerate() {
                let _ = writeln!(s, "  s{i} -> s{j} [label=\"{x}\"];");
            }
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        let name = |i: usize| self.states[i].to_string();
        let doc = JsonDiagram {
            states: (0..self.len()).map(name).collect(),
            active: (0..self.len()).filter(|&i| self.active[i]).map(name).collect(),
            transitions: self
                .transitions
                .iter()
                .enumerate()
                .flat_map(|(i, t)| {
                    t.iter().enumerate().map(move |(x, &j)| JsonEdge { from: name(i), letter: x as u8, to: name(j) })
                })
                .collect(),
        };
        serde_json::to_value(doc).expect("diagram serializes")
    }
}

/// Diagram on `states`, which must be closed under restriction as words.
pub fn moore_diagram(rec: &Recursion, states: &[GenWord]) -> Result<MooreDiagram> {
    let mut sorted = states.to_vec();
    sorted.sort();
    sorted.dedup();
    let (succ, active) = transitions(rec, &sorted)?;
    Ok(MooreDiagram { states: sorted, transitions: succ, active })
}

/// Diagram on `states` where restrictions are matched to states of equal
/// tree action rather than equal words.
pub fn moore_diagram_modulo_action(rec: &Recursion, states: &[GenWord], bound: usize) -> Result<MooreDiagram> {
    let mut sorted = states.to_vec();
    sorted.sort();
    sorted.dedup();
    let mut classes = ActionClasses::new(rec, bound);
    let mut slot: HashMap<usize, usize> = HashMap::new();
    for (i, w) in sorted.iter().enumerate() {
        let c = classes.class_of(w)?;
        if slot.insert(c, i).is_some() {
            return Err(Error::Invalid(format!("{w} duplicates another state's action")));
        }
    }
    let mut succ = Vec::with_capacity(sorted.len());
    let mut active = Vec::with_capacity(sorted.len());
    for w in &sorted {
        let e = rec.phi(w)?;
        let mut t = [0usize; 2];
        for (x, c) in [&e.c0, &e.c1].into_iter().enumerate() {
            let k = classes.class_of(c)?;
            t[x] = *slot.get(&k).ok_or_else(|| Error::NotStateClosed { state: w.to_string(), letter: x as u8 })?;
        }
        succ.push(t);
        active.push(e.active);
    }
    Ok(MooreDiagram { states: sorted, transitions: succ, active })
}

/// Joint colour refinement of two diagrams; colours are comparable across them.
fn refine(d1: &MooreDiagram, d2: &MooreDiagram) -> (Vec<usize>, Vec<usize>) {
    let mut c1: Vec<usize> = d1.active.iter().map(|&a| a as usize).collect();
    let mut c2: Vec<usize> = d2.active.iter().map(|&a| a as usize).collect();
    loop {
        let mut palette: HashMap<(usize, usize, usize), usize> = HashMap::new();
        let mut sig = |c: &[usize], d: &MooreDiagram, i: usize| {
            let key = (c[i], c[d.transitions[i][0]], c[d.transitions[i][1]]);
            let next = palette.len();
            *palette.entry(key).or_insert(next)
        };
        let n1: Vec<usize> = (0..d1.len()).map(|i| sig(&c1, d1, i)).collect();
        let n2: Vec<usize> = (0..d2.len()).map(|i| sig(&c2, d2, i)).collect();
        let classes = |a: &[usize], b: &[usize]| {
            let mut u: Vec<usize> = a.iter().chain(b).copied().collect();
            u.sort();
            u.dedup();
            u.len()
        };
        let stable = classes(&n1, &n2) == classes(&c1, &c2);
        c1 = n1;
        c2 = n2;
        if stable {
            return (c1, c2);
        }
    }
}

fn extend(d1: &MooreDiagram, d2: &MooreDiagram, map: &mut [Option<usize>], used: &mut [bool], s: usize, t: usize) -> bool {
    let mut stack = vec![(s, t)];
    while let Some((s, t)) = stack.pop() {
        match map[s] {
            Some(u) if u == t => continue,
            Some(_) => return false,
            None => {
                if used[t] || d1.active[s] != d2.active[t] {
                    return false;
                }
                map[s] = Some(t);
                used[t] = true;
                for x in 0..2 {
                    stack.push((d1.transitions[s][x], d2.transitions[t][x]));
                }
            }
        }
    }
    true
}

fn search(
    d1: &MooreDiagram,
    d2: &MooreDiagram,
    col1: &[usize],
    col2: &[usize],
    map: &mut Vec<Option<usize>>,
    used: &mut Vec<bool>,
) -> bool {
    let Some(s) = (0..d1.len()).find(|&i| map[i].is_none()) else {
        return true;
    };
    for t in 0..d2.len() {
        if used[t] || col1[s] != col2[t] {
            continue;
        }
        let (saved_map, saved_used) = (map.clone(), used.clone());
        if extend(d1, d2, map, used, s, t) && search(d1, d2, col1, col2, map, used) {
            return true;
        }
        *map = saved_map;
        *used = saved_used;
    }
    false
}

/// Isomorphism of labelled diagrams with the letters held fixed.
pub fn automata_isomorphic(d1: &MooreDiagram, d2: &MooreDiagram) -> bool {
    if d1.len() != d2.len() {
        return false;
    }
    let (col1, col2) = refine(d1, d2);
    let mut h1 = col1.clone();
    let mut h2 = col2.clone();
    h1.sort();
    h2.sort();
    if h1 != h2 {
        return false;
    }
    let mut map = vec![None; d1.len()];
    let mut used = vec![false; d2.len()];
    search(d1, d2, &col1, &col2, &mut map, &mut used)
}

/// No isomorphism exists, neither directly nor after exchanging 0 and 1.
pub fn automata_distinct(d1: &MooreDiagram, d2: &MooreDiagram) -> bool {
    !automata_isomorphic(d1, d2) && !automata_isomorphic(d1, &d2.swap_letters())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::Alphabet;

    fn mcg() -> Recursion {
        let a = Alphabet::new("mcg", &["T", "S"]).unwrap();
        Recursion::parse("mcg", &a, &[("1", "S' T'", true), ("T", "1", false)]).unwrap()
    }

    #[test]
    fn trivial_diagram() {
        let r = mcg();
        let d = moore_diagram(&r, &[r.word("1").unwrap()]).unwrap();
        assert_eq!(d.transitions, vec![[0, 0]]);
        assert_eq!(d.active, vec![false]);
    }

    #[test]
    fn not_closed() {
        let r = mcg();
        let e = moore_diagram(&r, &[r.word("T").unwrap()]).unwrap_err();
        assert!(matches!(e, Error::NotStateClosed { letter: 0, .. }));
    }

    #[test]
    fn mcg_nucleus_diagram() {
        let r = mcg();
        let gens = [r.word("T").unwrap(), r.word("S").unwrap()];
        let n = super::super::nucleus(&r, &gens, 100).unwrap();
        let d = moore_diagram(&r, &n).unwrap();
        assert_eq!(d.len(), 7);
        let act: Vec<String> = d.active_states().iter().map(|w| w.to_string()).collect();
        // activity is the parity of the T-exponent
        assert_eq!(act, vec!["T", "T'", "T S", "S' T'"]);
        assert!(automata_isomorphic(&d, &d));
        assert!(!automata_distinct(&d, &d));
        let j = d.to_json();
        assert_eq!(j["states"].as_array().unwrap().len(), 7);
        assert_eq!(j["transitions"].as_array().unwrap().len(), 14);
        assert!(d.to_dot("mcg").contains("fillcolor=grey"));
    }

    #[test]
    fn swap_is_detected() {
        // a two-state odometer and its mirror
        let a = Alphabet::new("x", &["p", "q"]).unwrap();
        let d = MooreDiagram {
            states: vec![GenWord::generator(&a, 0), GenWord::identity(&a)],
            transitions: vec![[1, 0], [1, 1]],
            active: vec![true, false],
        };
        let m = d.swap_letters();
        assert!(!automata_isomorphic(&d, &m));
        assert!(!automata_distinct(&d, &m));
    }
}
