//! Wreath recursions over the binary alphabet X = {0, 1}.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::word::{Alphabet, Endo, GenWord};

/// `⟨c0, c1⟩` or `⟨c0, c1⟩σ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WreathElem {
    pub c0: GenWord,
    pub c1: GenWord,
    pub active: bool,
}

impl WreathElem {
    pub fn new(c0: GenWord, c1: GenWord, active: bool) -> Result<WreathElem> {
        if !c0.same_alphabet(&c1) {
            return Err(Error::AlphabetMismatch {
                left: c0.alphabet().name().to_string(),
                right: c1.alphabet().name().to_string(),
            });
        }
        Ok(WreathElem { c0, c1, active })
    }

    pub fn identity(alphabet: &Arc<Alphabet>) -> WreathElem {
        WreathElem { c0: GenWord::identity(alphabet), c1: GenWord::identity(alphabet), active: false }
    }

    pub fn coord(&self, x: u8) -> &GenWord {
        if x == 0 {
            &self.c0
        } else {
            &self.c1
        }
    }

    /// Image of the letter `x` under the root permutation.
    pub fn perm(&self, x: u8) -> u8 {
        if self.active {
            1 - x
        } else {
            x
        }
    }

    /// `(g·h)` has coordinate `g_x h_{x^g}` at `x`.
    pub fn try_mul(&self, other: &WreathElem) -> Result<WreathElem> {
        let c0 = self.c0.try_mul(other.coord(self.perm(0)))?;
        let c1 = self.c1.try_mul(other.coord(self.perm(1)))?;
        Ok(WreathElem { c0, c1, active: self.active ^ other.active })
    }

    pub fn inverse(&self) -> WreathElem {
        if self.active {
            WreathElem { c0: self.c1.inverse(), c1: self.c0.inverse(), active: true }
        } else {
            WreathElem { c0: self.c0.inverse(), c1: self.c1.inverse(), active: false }
        }
    }

    pub fn is_identity(&self) -> bool {
        !self.active && self.c0.is_identity() && self.c1.is_identity()
    }

    /// The same endomorphism applied to both coordinates.
    pub fn map_diagonal(&self, e: &Endo) -> Result<WreathElem> {
        Ok(WreathElem { c0: e.apply(&self.c0)?, c1: e.apply(&self.c1)?, active: self.active })
    }
}

impl fmt::Display for WreathElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}, {}>", self.c0, self.c1)?;
        if self.active {
            write!(f, "s")?;
        }
        Ok(())
    }
}

/// A wreath recursion `Φ: G → G ≀ Sym(X)` on a free group, given on generators.
#[derive(Clone, Debug)]
pub struct Recursion {
    name: String,
    alphabet: Arc<Alphabet>,
    table: Vec<WreathElem>,
    inverses: Vec<WreathElem>,
    adding_machine: Option<GenWord>,
}

impl Recursion {
    pub fn new(name: &str, alphabet: &Arc<Alphabet>, table: Vec<WreathElem>) -> Result<Recursion> {
        if table.len() != alphabet.len() {
            return Err(Error::Invalid(format!(
                "recursion needs {} entries, got {}",
                alphabet.len(),
                table.len()
            )));
        }
        for e in &table {
            if e.c0.alphabet().id() != alphabet.id() {
                return Err(Error::AlphabetMismatch {
                    left: alphabet.name().to_string(),
                    right: e.c0.alphabet().name().to_string(),
                });
            }
        }
        let inverses = table.iter().map(|e| e.inverse()).collect();
        Ok(Recursion { name: name.to_string(), alphabet: alphabet.clone(), table, inverses, adding_machine: None })
    }

    /// Table given as `(c0, c1, active)` strings in generator order.
    pub fn parse(name: &str, alphabet: &Arc<Alphabet>, rows: &[(&str, &str, bool)]) -> Result<Recursion> {
        let table = rows
            .iter()
            .map(|&(a, b, s)| WreathElem::new(GenWord::parse(alphabet, a)?, GenWord::parse(alphabet, b)?, s))
            .collect::<Result<Vec<_>>>()?;
        Recursion::new(name, alphabet, table)
    }

    /// Fails unless `Φ(w) = ⟨1, w⟩σ`.
    pub fn with_adding_machine(mut self, w: GenWord) -> Result<Recursion> {
        let img = self.phi(&w)?;
        if !(img.active && img.c0.is_identity() && img.c1 == w) {
            return Err(Error::Invalid(format!("{w} is not an adding machine: Φ = {img}")));
        }
        self.adding_machine = Some(w);
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(mut self, name: &str) -> Recursion {
        self.name = name.to_string();
        self
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn table(&self) -> &[WreathElem] {
        &self.table
    }

    pub fn entry(&self, gen: usize) -> &WreathElem {
        &self.table[gen]
    }

    pub fn adding_machine(&self) -> Option<&GenWord> {
        self.adding_machine.as_ref()
    }

    pub fn word(&self, text: &str) -> Result<GenWord> {
        GenWord::parse(&self.alphabet, text)
    }

    /// Homomorphic extension of the table.
    pub fn phi(&self, w: &GenWord) -> Result<WreathElem> {
        if w.alphabet().id() != self.alphabet.id() {
            return Err(Error::AlphabetMismatch {
                left: self.alphabet.name().to_string(),
                right: w.alphabet().name().to_string(),
            });
        }
        let mut coords = [Vec::new(), Vec::new()];
        // pos[i]: letter currently sitting above the original position i
        let mut pos = [0u8, 1u8];
        for &l in w.letters() {
            let e = if l.is_inverse() { &self.inverses[l.gen()] } else { &self.table[l.gen()] };
            for i in 0..2 {
                coords[i].push(e.coord(pos[i]).clone());
                pos[i] = e.perm(pos[i]);
            }
        }
        let c0 = product(&self.alphabet, &coords[0]);
        let c1 = product(&self.alphabet, &coords[1]);
        Ok(WreathElem { c0, c1, active: pos[0] == 1 })
    }

    /// `w|_x` for a single letter.
    pub fn section(&self, w: &GenWord, x: u8) -> Result<GenWord> {
        Ok(self.phi(w)?.coord(x).clone())
    }

    /// `w|_v`, using `g|_{vx} = (g|_v)|_x`.
    pub fn restrict(&self, w: &GenWord, v: &[u8]) -> Result<GenWord> {
        let mut g = w.clone();
        for &x in v {
            check_letter(x)?;
            g = self.section(&g, x)?;
        }
        Ok(g)
    }

    /// Image of a vertex: `(xv)^g = x^g v^{g|_x}`.
    pub fn act(&self, w: &GenWord, v: &[u8]) -> Result<Vec<u8>> {
        let mut g = w.clone();
        let mut out = Vec::with_capacity(v.len());
        for &x in v {
            check_letter(x)?;
            let e = self.phi(&g)?;
            out.push(e.perm(x));
            g = e.coord(x).clone();
        }
        Ok(out)
    }
}

fn check_letter(x: u8) -> Result<()> {
    if x > 1 {
        Err(Error::Invalid(format!("tree letter {x} is not in {{0,1}}")))
    } else {
        Ok(())
    }
}

fn product(alphabet: &Arc<Alphabet>, parts: &[GenWord]) -> GenWord {
    let refs: Vec<&GenWord> = parts.iter().collect();
    if refs.is_empty() {
        GenWord::identity(alphabet)
    } else {
        GenWord::product(&refs).expect("coordinates share the recursion alphabet")
    }
}

/// The twisted recursion `g ↦ Φ(g)` with `e` applied to both coordinates.
/// `e` is the inverse of the twist's action; it is not checked for
/// invertibility.
pub fn twist_recursion(base: &Recursion, e: &Endo) -> Result<Recursion> {
    let table = base.table.iter().map(|x| x.map_diagonal(e)).collect::<Result<Vec<_>>>()?;
    let mut rec = Recursion::new(&format!("{}~twisted", base.name), &base.alphabet, table)?;
    if let Some(m) = &base.adding_machine {
        let img = rec.phi(m)?;
        if img.active && img.c0.is_identity() && &img.c1 == m {
            rec.adding_machine = Some(m.clone());
        }
    }
    Ok(rec)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mcg() -> Recursion {
        let a = Alphabet::new("mcg", &["T", "S"]).unwrap();
        Recursion::parse("mcg", &a, &[("1", "S' T'", true), ("T", "1", false)]).unwrap()
    }

    #[test]
    fn square_of_t() {
        let r = mcg();
        let e = r.phi(&r.word("T^2").unwrap()).unwrap();
        assert_eq!(e.to_string(), "<S' T', S' T'>");
    }

    #[test]
    fn restrictions() {
        let r = mcg();
        let t = r.word("T").unwrap();
        assert!(r.restrict(&t, &[0]).unwrap().is_identity());
        assert_eq!(r.restrict(&t, &[]).unwrap(), t);
        assert_eq!(r.restrict(&t, &[1, 0]).unwrap(), r.word("S").unwrap());
        assert!(r.restrict(&t, &[2]).is_err());
    }

    #[test]
    fn inverse_and_product() {
        let r = mcg();
        let w = r.word("T S' T^2").unwrap();
        let e = r.phi(&w).unwrap();
        let prod = e.try_mul(&e.inverse()).unwrap();
        assert!(prod.is_identity());
        assert_eq!(r.phi(&w.inverse()).unwrap(), e.inverse());
    }

    #[test]
    fn diagonal_twist_identity() {
        let r = mcg();
        let t = twist_recursion(&r, &Endo::identity(r.alphabet())).unwrap();
        assert_eq!(t.table(), r.table());
    }
}
