//! Contraction machinery: restriction closures, nuclei, the word problem.

mod moore;
mod virtual_endo;

use std::collections::{HashMap, HashSet, VecDeque};

pub use moore::{automata_distinct, automata_isomorphic, moore_diagram, moore_diagram_modulo_action, MooreDiagram};
pub use virtual_endo::{recursion_from_virtual_endo, FoldedSubgroup, VirtualEndo};

use crate::error::{Error, Result};
use crate::word::GenWord;
use crate::wreath::{Recursion, WreathElem};

pub const DEFAULT_BOUND: usize = 10_000;

/// Smallest set containing `seeds` and closed under restriction, in
/// breadth-first order (letter 0 before letter 1).
pub fn restriction_closure(rec: &Recursion, seeds: &[GenWord], bound: usize) -> Result<Vec<GenWord>> {
    let mut seen: HashSet<GenWord> = HashSet::new();
    let mut order = Vec::new();
    let mut queue = VecDeque::new();
    for s in seeds {
        if seen.insert(s.clone()) {
            order.push(s.clone());
            queue.push_back(s.clone());
        }
    }
    if order.len() > bound {
        return Err(Error::BoundExceeded { bound });
    }
    while let Some(g) = queue.pop_front() {
        let e = rec.phi(&g)?;
        for c in [e.c0, e.c1] {
            if seen.insert(c.clone()) {
                order.push(c.clone());
                queue.push_back(c);
                if order.len() > bound {
                    return Err(Error::BoundExceeded { bound });
                }
            }
        }
    }
    Ok(order)
}

/// States of a closed transition system that are reachable from a cycle:
/// repeatedly strip states nobody points to.
fn core_indices(succ: &[[usize; 2]]) -> Vec<bool> {
    let n = succ.len();
    let mut alive = vec![true; n];
    let mut indeg = vec![0usize; n];
    for s in succ {
        indeg[s[0]] += 1;
        indeg[s[1]] += 1;
    }
    let mut stack: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
    while let Some(i) = stack.pop() {
        if !alive[i] {
            continue;
        }
        alive[i] = false;
        for &j in &succ[i] {
            indeg[j] -= 1;
            if indeg[j] == 0 && alive[j] {
                stack.push(j);
            }
        }
    }
    alive
}

fn transitions(rec: &Recursion, states: &[GenWord]) -> Result<(Vec<[usize; 2]>, Vec<bool>)> {
    let index: HashMap<&GenWord, usize> = states.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let mut succ = Vec::with_capacity(states.len());
    let mut active = Vec::with_capacity(states.len());
    for w in states {
        let e = rec.phi(w)?;
        let t0 = *index.get(&e.c0).ok_or_else(|| not_closed(w, 0))?;
        let t1 = *index.get(&e.c1).ok_or_else(|| not_closed(w, 1))?;
        succ.push([t0, t1]);
        active.push(e.active);
    }
    Ok((succ, active))
}

fn not_closed(w: &GenWord, letter: u8) -> Error {
    Error::NotStateClosed { state: w.to_string(), letter }
}

fn symmetrize(gens: &[GenWord]) -> Vec<GenWord> {
    let mut out: Vec<GenWord> = Vec::new();
    for g in gens.iter().flat_map(|g| [g.clone(), g.inverse()]) {
        if !g.is_identity() && !out.contains(&g) {
            out.push(g);
        }
    }
    out
}

/// Nucleus of a contracting recursion, with states compared as free-group
/// words. Iterates `N ← core(closure(N ∪ N·S))` from `N = {1}` until stable.
pub fn nucleus(rec: &Recursion, gens: &[GenWord], bound: usize) -> Result<Vec<GenWord>> {
    let s = symmetrize(gens);
    let mut current: Vec<GenWord> = vec![GenWord::identity(rec.alphabet())];
    loop {
        let mut cand = current.clone();
        for g in &current {
            for x in &s {
                cand.push(g.try_mul(x)?);
            }
        }
        if cand.len() > bound {
            return Err(Error::BoundExceeded { bound });
        }
        let closure = restriction_closure(rec, &cand, bound)?;
        let (succ, _) = transitions(rec, &closure)?;
        let alive = core_indices(&succ);
        let mut next: Vec<GenWord> =
            closure.into_iter().zip(alive).filter(|(_, a)| *a).map(|(w, _)| w).collect();
        next.sort();
        if next == current {
            return Ok(next);
        }
        current = next;
    }
}

/// Restriction graph on conjugacy classes: each restriction is replaced by
/// its cyclic normal form. Triviality, and membership in the kernel of all
/// iterates of `Φ`, are invariant under conjugation, so both can be read off
/// this graph; it stays finite in cases where the plain word closure does not.
fn conjugacy_closure(rec: &Recursion, w: &GenWord, bound: usize) -> Result<(Vec<GenWord>, Vec<[usize; 2]>, Vec<bool>)> {
    let start = w.cyclic_normal_form();
    let mut index: HashMap<GenWord, usize> = HashMap::from([(start.clone(), 0)]);
    let mut states = vec![start];
    let mut succ = Vec::new();
    let mut active = Vec::new();
    let mut i = 0;
    while i < states.len() {
        let e = rec.phi(&states[i])?;
        active.push(e.active);
        if e.active {
            // one active state settles both predicates
            return Ok((states, succ, active));
        }
        let mut t = [0usize; 2];
        for (x, c) in [e.c0, e.c1].into_iter().enumerate() {
            let c = c.cyclic_normal_form();
            t[x] = match index.get(&c) {
                Some(&k) => k,
                None => {
                    if states.len() >= bound {
                        return Err(Error::BoundExceeded { bound });
                    }
                    index.insert(c.clone(), states.len());
                    states.push(c);
                    states.len() - 1
                }
            };
        }
        succ.push(t);
        i += 1;
    }
    Ok((states, succ, active))
}

/// True iff `w` acts trivially on the tree: nothing reachable from it by
/// restriction and conjugation moves the first letter.
pub fn is_trivial_action(rec: &Recursion, w: &GenWord, bound: usize) -> Result<bool> {
    let (_, _, active) = conjugacy_closure(rec, w, bound)?;
    Ok(!active.iter().any(|&a| a))
}

/// True iff `Φⁿ(w)` is the identity of `G ≀ Sym(Xⁿ)` for some `n`: every
/// restriction is inactive and every cycle of restrictions sits on the
/// empty word. Stronger than trivial action when the recursion has a kernel
/// on the free group that is not reached at a finite level.
pub fn is_eventually_trivial(rec: &Recursion, w: &GenWord, bound: usize) -> Result<bool> {
    let (states, succ, active) = conjugacy_closure(rec, w, bound)?;
    if active.iter().any(|&a| a) {
        return Ok(false);
    }
    let alive = core_indices(&succ);
    Ok(states.iter().zip(alive).all(|(g, a)| !a || g.is_identity()))
}

pub fn action_equal(rec: &Recursion, u: &GenWord, v: &GenWord, bound: usize) -> Result<bool> {
    is_trivial_action(rec, &u.try_mul(&v.inverse())?, bound)
}

/// Sorts words into classes of equal tree action. Candidates are first
/// bucketed by their activity portrait to a fixed depth, then confirmed by
/// the word problem.
pub struct ActionClasses<'a> {
    rec: &'a Recursion,
    bound: usize,
    depth: usize,
    buckets: HashMap<Vec<bool>, Vec<usize>>,
    known: HashMap<GenWord, usize>,
    reps: Vec<GenWord>,
    best: Vec<GenWord>,
}

impl<'a> ActionClasses<'a> {
    pub fn new(rec: &'a Recursion, bound: usize) -> ActionClasses<'a> {
        ActionClasses {
            rec,
            bound,
            depth: 6,
            buckets: HashMap::new(),
            known: HashMap::new(),
            reps: Vec::new(),
            best: Vec::new(),
        }
    }

    fn portrait(&self, w: &GenWord) -> Result<Vec<bool>> {
        let mut out = Vec::new();
        let mut level = vec![w.clone()];
        for _ in 0..self.depth {
            let mut next = Vec::with_capacity(level.len() * 2);
            for g in &level {
                let e = self.rec.phi(g)?;
                out.push(e.active);
                next.push(e.c0);
                next.push(e.c1);
            }
            level = next;
        }
        Ok(out)
    }

    pub fn class_of(&mut self, w: &GenWord) -> Result<usize> {
        if let Some(&c) = self.known.get(w) {
            return Ok(c);
        }
        let p = self.portrait(w)?;
        let mut found = None;
        if let Some(cands) = self.buckets.get(&p) {
            for &c in cands {
                if action_equal(self.rec, w, &self.reps[c], self.bound)? {
                    found = Some(c);
                    break;
                }
            }
        }
        let c = match found {
            Some(c) => {
                if w < &self.best[c] {
                    self.best[c] = w.clone();
                }
                c
            }
            None => {
                let c = self.reps.len();
                self.reps.push(w.clone());
                self.best.push(w.clone());
                self.buckets.entry(p).or_default().push(c);
                c
            }
        };
        self.known.insert(w.clone(), c);
        Ok(c)
    }

    /// Shortlex-least word seen so far in class `c`.
    pub fn best(&self, c: usize) -> &GenWord {
        &self.best[c]
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    fn successors(&mut self, c: usize) -> Result<[usize; 2]> {
        let e: WreathElem = self.rec.phi(&self.reps[c].clone())?;
        Ok([self.class_of(&e.c0)?, self.class_of(&e.c1)?])
    }
}

/// Nucleus with states identified up to tree action, for recursions whose
/// free-group presentation is not itself contracting (torsion generators).
/// Each state is reported by the shortlex-least word met in its class.
pub fn nucleus_modulo_action(rec: &Recursion, gens: &[GenWord], bound: usize) -> Result<Vec<GenWord>> {
    let s = symmetrize(gens);
    let mut classes = ActionClasses::new(rec, bound);
    let one = classes.class_of(&GenWord::identity(rec.alphabet()))?;
    let mut current: Vec<usize> = vec![one];
    let mut rounds = 0;
    loop {
        rounds += 1;
        if rounds > bound {
            return Err(Error::BoundExceeded { bound });
        }
        let mut order: Vec<usize> = Vec::new();
        let mut seen: HashSet<usize> = HashSet::new();
        for &c in &current {
            let g = classes.reps[c].clone();
            for w in std::iter::once(g.clone()).chain(s.iter().map(|x| &g * x)) {
                let k = classes.class_of(&w)?;
                if seen.insert(k) {
                    order.push(k);
                }
            }
        }
        let mut i = 0;
        let mut succ_of: HashMap<usize, [usize; 2]> = HashMap::new();
        while i < order.len() {
            let c = order[i];
            let succ = classes.successors(c)?;
            succ_of.insert(c, succ);
            for k in succ {
                if seen.insert(k) {
                    order.push(k);
                    if order.len() > bound {
                        return Err(Error::BoundExceeded { bound });
                    }
                }
            }
            i += 1;
        }
        let local: HashMap<usize, usize> = order.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let succ: Vec<[usize; 2]> =
            order.iter().map(|c| succ_of[c].map(|k| local[&k])).collect();
        let alive = core_indices(&succ);
        let mut next: Vec<usize> = order.iter().zip(alive).filter(|(_, a)| *a).map(|(&c, _)| c).collect();
        next.sort();
        let mut prev = current.clone();
        prev.sort();
        if next == prev {
            let mut out: Vec<GenWord> = next.iter().map(|&c| classes.best(c).clone()).collect();
            out.sort();
            return Ok(out);
        }
        current = next;
    }
}

/// True iff there is a bijection between `a` and `b` matching elements of
/// equal tree action.
pub fn same_modulo_action(rec: &Recursion, a: &[GenWord], b: &[GenWord], bound: usize) -> Result<bool> {
    if a.len() != b.len() {
        return Ok(false);
    }
    let mut classes = ActionClasses::new(rec, bound);
    let mut ka = a.iter().map(|w| classes.class_of(w)).collect::<Result<Vec<_>>>()?;
    let mut kb = b.iter().map(|w| classes.class_of(w)).collect::<Result<Vec<_>>>()?;
    ka.sort();
    kb.sort();
    let distinct = ka.windows(2).all(|p| p[0] != p[1]);
    Ok(distinct && ka == kb)
}

/// Smallest `|n| ≤ nmax` (trying 0, 1, −1, 2, …) with
/// `Φ_A(γ) = Φ_B(aⁿ γ a⁻ⁿ)` on every generator.
pub fn homotopy_shift(rec_a: &Recursion, rec_b: &Recursion, a_word: &GenWord, nmax: u32) -> Option<i64> {
    if rec_a.alphabet().id() != rec_b.alphabet().id() || !a_word.same_alphabet(&rec_a.word("1").ok()?) {
        return None;
    }
    let alphabet = rec_a.alphabet();
    let mut candidates = vec![0i64];
    for k in 1..=nmax as i64 {
        candidates.push(k);
        candidates.push(-k);
    }
    'next: for n in candidates {
        let h = a_word.pow(-n);
        for g in 0..alphabet.len() {
            let gamma = GenWord::generator(alphabet, g);
            let lhs = rec_a.entry(g);
            let rhs = match gamma.conjugate(&h).and_then(|c| rec_b.phi(&c)) {
                Ok(e) => e,
                Err(_) => return None,
            };
            if lhs != &rhs {
                continue 'next;
            }
        }
        return Some(n);
    }
    None
}

/// The recursion `γ ↦ Φ(h⁻¹γh)`, the image of `rec` under an inner shift.
pub fn conjugated_recursion(rec: &Recursion, h: &GenWord) -> Result<Recursion> {
    let alphabet = rec.alphabet();
    let table = (0..alphabet.len())
        .map(|g| rec.phi(&GenWord::generator(alphabet, g).conjugate(h)?))
        .collect::<Result<Vec<_>>>()?;
    Recursion::new(&format!("{}^{}", rec.name(), h), alphabet, table)
}
