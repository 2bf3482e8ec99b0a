//! Virtual endomorphisms and the recursions they induce.
//!
//! To evaluate a virtual endomorphism on an arbitrary element of its domain
//! the element has to be rewritten in the domain generators. This is done on
//! the folded (Stallings) graph of the domain, whose edges carry tags: words
//! in abstract domain generators that record how each edge was produced.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::word::{Alphabet, GenWord, Letter};
use crate::wreath::{Recursion, WreathElem};

#[derive(Clone, Debug)]
pub struct VirtualEndo {
    pub domain_gens: Vec<GenWord>,
    pub images: Vec<GenWord>,
    /// `coset_reps[0]` must be the identity.
    pub coset_reps: Vec<GenWord>,
}

impl VirtualEndo {
    pub fn new(domain_gens: Vec<GenWord>, images: Vec<GenWord>, coset_reps: Vec<GenWord>) -> Result<VirtualEndo> {
        if domain_gens.len() != images.len() {
            return Err(Error::Invalid("domain generators and images differ in number".into()));
        }
        if coset_reps.first().is_none_or(|r| !r.is_identity()) {
            return Err(Error::Coset("first coset representative must be the identity".into()));
        }
        let alphabet = coset_reps[0].alphabet();
        if domain_gens.iter().chain(&images).chain(&coset_reps).any(|w| w.alphabet().id() != alphabet.id()) {
            return Err(Error::AlphabetMismatch { left: alphabet.name().into(), right: "mixed".into() });
        }
        Ok(VirtualEndo { domain_gens, images, coset_reps })
    }

    pub fn parse(alphabet: &Arc<Alphabet>, pairs: &[(&str, &str)], reps: &[&str]) -> Result<VirtualEndo> {
        let mut dom = Vec::new();
        let mut img = Vec::new();
        for (d, i) in pairs {
            dom.push(GenWord::parse(alphabet, d)?);
            img.push(GenWord::parse(alphabet, i)?);
        }
        let reps = reps.iter().map(|r| GenWord::parse(alphabet, r)).collect::<Result<Vec<_>>>()?;
        VirtualEndo::new(dom, img, reps)
    }
}

#[derive(Clone, Debug)]
struct Edge {
    from: usize,
    to: usize,
    gen: usize,
    tag: GenWord,
}

/// Folded graph of a finitely generated subgroup.
#[derive(Clone, Debug)]
pub struct FoldedSubgroup {
    alphabet: Arc<Alphabet>,
    tags: Arc<Alphabet>,
    vertices: Vec<usize>,
    edges: Vec<Edge>,
}

fn tag_alphabet(n: usize) -> Result<Arc<Alphabet>> {
    let names: Vec<String> = (0..n)
        .map(|i| {
            let mut s = String::from("x");
            let mut k = i;
            loop {
                s.push((b'a' + (k % 26) as u8) as char);
                k /= 26;
                if k == 0 {
                    break;
                }
            }
            s
        })
        .collect();
    let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    Alphabet::new("domain", &refs)
}

impl FoldedSubgroup {
    pub fn new(alphabet: &Arc<Alphabet>, gens: &[GenWord]) -> Result<FoldedSubgroup> {
        let tags = tag_alphabet(gens.len())?;
        let mut g = FoldedSubgroup { alphabet: alphabet.clone(), tags: tags.clone(), vertices: vec![0], edges: Vec::new() };
        let mut next = 1;
        for (j, w) in gens.iter().enumerate() {
            if w.alphabet().id() != alphabet.id() {
                return Err(Error::AlphabetMismatch { left: alphabet.name().into(), right: w.alphabet().name().into() });
            }
            let n = w.len();
            if n == 0 {
                continue;
            }
            let mut prev = 0;
            for (k, &l) in w.letters().iter().enumerate() {
                let here = if k + 1 == n {
                    0
                } else {
                    g.vertices.push(next);
                    next += 1;
                    next - 1
                };
                let t = if k == 0 { GenWord::generator(&tags, j) } else { GenWord::identity(&tags) };
                g.edges.push(if l.is_inverse() {
                    Edge { from: here, to: prev, gen: l.gen(), tag: t.inverse() }
                } else {
                    Edge { from: prev, to: here, gen: l.gen(), tag: t }
                });
                prev = here;
            }
        }
        g.fold();
        Ok(g)
    }

    /// Identify `drop` with `keep`; `c` converts the frame of `keep` into
    /// that of `drop`.
    fn merge(&mut self, keep: usize, drop: usize, c: &GenWord) {
        let ci = c.inverse();
        for e in &mut self.edges {
            if e.from == drop {
                e.from = keep;
                e.tag = c * &e.tag;
            }
            if e.to == drop {
                e.to = keep;
                e.tag = &e.tag * &ci;
            }
        }
        self.vertices.retain(|&v| v != drop);
    }

    fn fold(&mut self) {
        loop {
            let mut action = None;
            'scan: for i in 0..self.edges.len() {
                for j in i + 1..self.edges.len() {
                    let (a, b) = (&self.edges[i], &self.edges[j]);
                    if a.gen != b.gen {
                        continue;
                    }
                    if a.from == b.from {
                        action = Some((i, j, true));
                        break 'scan;
                    }
                    if a.to == b.to {
                        action = Some((i, j, false));
                        break 'scan;
                    }
                }
            }
            let Some((i, j, forward)) = action else { return };
            let (a, b) = (self.edges[i].clone(), self.edges[j].clone());
            let (v1, v2, t1, t2) = if forward {
                (a.to, b.to, a.tag.clone(), b.tag.clone())
            } else {
                (a.from, b.from, a.tag.inverse(), b.tag.inverse())
            };
            if v1 != v2 {
                if v2 == 0 {
                    self.merge(v2, v1, &(&t2.inverse() * &t1));
                } else {
                    self.merge(v1, v2, &(&t1.inverse() * &t2));
                }
            }
            // edge j now duplicates edge i; any tag difference is a relation
            self.edges.remove(j);
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Every vertex has exactly one outgoing and one incoming edge per
    /// generator, i.e. the subgroup has finite index equal to the vertex count.
    pub fn is_complete(&self) -> bool {
        let n = self.alphabet.len();
        self.vertices.iter().all(|&v| {
            (0..n).all(|g| {
                self.edges.iter().filter(|e| e.gen == g && e.from == v).count() == 1
                    && self.edges.iter().filter(|e| e.gen == g && e.to == v).count() == 1
            })
        })
    }

    fn step(&self, v: usize, l: Letter) -> Option<(usize, GenWord)> {
        if l.is_inverse() {
            self.edges.iter().find(|e| e.gen == l.gen() && e.to == v).map(|e| (e.from, e.tag.inverse()))
        } else {
            self.edges.iter().find(|e| e.gen == l.gen() && e.from == v).map(|e| (e.to, e.tag.clone()))
        }
    }

    /// End vertex of the path reading `w` from the base, with the product of
    /// tags along it.
    pub fn read(&self, w: &GenWord) -> Option<(usize, GenWord)> {
        let mut v = 0;
        let mut tag = GenWord::identity(&self.tags);
        for &l in w.letters() {
            let (u, t) = self.step(v, l)?;
            v = u;
            tag = &tag * &t;
        }
        Some((v, tag))
    }

    pub fn contains(&self, w: &GenWord) -> bool {
        matches!(self.read(w), Some((0, _)))
    }

    /// `w` as a word in the subgroup generators, if `w` lies in the subgroup.
    pub fn rewrite(&self, w: &GenWord) -> Option<GenWord> {
        match self.read(w) {
            Some((0, t)) => Some(t),
            _ => None,
        }
    }
}

impl VirtualEndo {
    pub fn domain(&self) -> Result<FoldedSubgroup> {
        FoldedSubgroup::new(self.coset_reps[0].alphabet(), &self.domain_gens)
    }

    /// `φ(w)` for `w` in the domain.
    pub fn eval(&self, dom: &FoldedSubgroup, w: &GenWord) -> Result<GenWord> {
        let t = dom.rewrite(w).ok_or_else(|| Error::Coset(format!("{w} is not in the domain")))?;
        t.substitute(self.coset_reps[0].alphabet(), &self.images)
    }
}

/// The recursion `Φ(g) = ⟨h_i⁻¹ φ(r_i g r_{k_i}⁻¹) h_{k_i}⟩_i π` where
/// `r_i g` lies in the coset of `r_{k_i}` and `π: i ↦ k_i`. Letter `i` of
/// the tree is the coset of `r_i`. Pass an empty slice for trivial `h`.
pub fn recursion_from_virtual_endo(v: &VirtualEndo, h_words: &[GenWord]) -> Result<Recursion> {
    let alphabet = v.coset_reps[0].alphabet().clone();
    let dom = v.domain()?;
    if !dom.is_complete() {
        return Err(Error::Coset("domain generators do not span a finite-index subgroup".into()));
    }
    if dom.vertex_count() != 2 || v.coset_reps.len() != 2 {
        return Err(Error::Coset(format!(
            "need index 2 with 2 representatives, found index {} and {} representatives",
            dom.vertex_count(),
            v.coset_reps.len()
        )));
    }
    let h: Vec<GenWord> =
        if h_words.is_empty() { vec![GenWord::identity(&alphabet); 2] } else { h_words.to_vec() };
    if h.len() != 2 {
        return Err(Error::Coset("need one correction word per coset".into()));
    }
    let coset_of = |w: &GenWord| -> Result<usize> {
        let (end, _) = dom.read(w).ok_or_else(|| Error::Coset(format!("cannot read {w}")))?;
        let mut hit = None;
        for (i, r) in v.coset_reps.iter().enumerate() {
            if dom.read(r).map(|(e, _)| e) == Some(end) {
                if hit.is_some() {
                    return Err(Error::Coset("two representatives of one coset".into()));
                }
                hit = Some(i);
            }
        }
        hit.ok_or_else(|| Error::Coset(format!("no representative for the coset of {w}")))
    };
    let mut table = Vec::new();
    for g in 0..alphabet.len() {
        let gen = GenWord::generator(&alphabet, g);
        let mut coords = Vec::new();
        let mut target = [0usize; 2];
        for i in 0..2 {
            let rg = &v.coset_reps[i] * &gen;
            let k = coset_of(&rg)?;
            target[i] = k;
            let inner = v.eval(&dom, &(&rg * &v.coset_reps[k].inverse()))?;
            coords.push(GenWord::product(&[&h[i].inverse(), &inner, &h[k]])?);
        }
        let active = target[0] == 1;
        table.push(WreathElem::new(coords[0].clone(), coords[1].clone(), active)?);
    }
    Recursion::new("virtual", &alphabet, table)
}
