//! Free-group words over named alphabets.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::Mul;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::Arc;

use crate::error::{Error, Result};

static NEXT_ALPHABET_ID: AtomicU64 = AtomicU64::new(1);

/// A finite ordered set of generator names. Two alphabets with the same
/// names are still different alphabets.
#[derive(Debug)]
pub struct Alphabet {
    id: u64,
    name: String,
    gens: Vec<String>,
}

impl Alphabet {
    pub fn new(name: &str, gens: &[&str]) -> Result<Arc<Alphabet>> {
        for (i, g) in gens.iter().enumerate() {
            if g.is_empty() || !g.chars().all(|c| c.is_alphabetic()) {
                return Err(Error::Invalid(format!("bad generator name `{g}`")));
            }
            if gens[..i].contains(g) {
                return Err(Error::Invalid(format!("duplicate generator `{g}`")));
            }
        }
        Ok(Arc::new(Alphabet {
            id: NEXT_ALPHABET_ID.fetch_add(1, AtomicOrdering::Relaxed),
            name: name.to_string(),
            gens: gens.iter().map(|s| s.to_string()).collect(),
        }))
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn gen_name(&self, i: usize) -> &str {
        &self.gens[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g == name)
    }
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}

impl Eq for Alphabet {}

/// A generator or its inverse, packed as ±(index+1).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Letter(i32);

impl Letter {
    pub fn new(gen: usize, inverse: bool) -> Letter {
        let c = gen as i32 + 1;
        Letter(if inverse { -c } else { c })
    }

    pub fn gen(self) -> usize {
        (self.0.unsigned_abs() - 1) as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 < 0
    }

    pub fn inverse(self) -> Letter {
        Letter(-self.0)
    }

    fn key(self) -> (usize, bool) {
        (self.gen(), self.is_inverse())
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Letter {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

fn push_reduced(buf: &mut Vec<Letter>, l: Letter) {
    if buf.last() == Some(&l.inverse()) {
        buf.pop();
    } else {
        buf.push(l);
    }
}

/// A freely reduced word. Equality is letter-by-letter equality within the
/// same alphabet, which is equality in the free group.
#[derive(Clone)]
pub struct GenWord {
    alphabet: Arc<Alphabet>,
    letters: Vec<Letter>,
}

impl GenWord {
    pub fn identity(alphabet: &Arc<Alphabet>) -> GenWord {
        GenWord { alphabet: alphabet.clone(), letters: Vec::new() }
    }

    pub fn generator(alphabet: &Arc<Alphabet>, gen: usize) -> GenWord {
        assert!(gen < alphabet.len(), "generator index out of range");
        GenWord { alphabet: alphabet.clone(), letters: vec![Letter::new(gen, false)] }
    }

    /// Free reduction of a raw letter sequence.
    pub fn reduce(alphabet: &Arc<Alphabet>, raw: &[Letter]) -> Result<GenWord> {
        let mut buf = Vec::with_capacity(raw.len());
        for &l in raw {
            if l.gen() >= alphabet.len() {
                return Err(Error::UnknownGenerator(format!("#{}", l.gen())));
            }
            push_reduced(&mut buf, l);
        }
        Ok(GenWord { alphabet: alphabet.clone(), letters: buf })
    }

    /// Reduced product of several words, all of which must share one alphabet.
    pub fn product(parts: &[&GenWord]) -> Result<GenWord> {
        let first = parts
            .first()
            .ok_or_else(|| Error::Invalid("empty product has no alphabet".into()))?;
        let mut buf = Vec::new();
        for p in parts {
            first.check_same(p)?;
            for &l in &p.letters {
                push_reduced(&mut buf, l);
            }
        }
        Ok(GenWord { alphabet: first.alphabet.clone(), letters: buf })
    }

    pub fn parse(alphabet: &Arc<Alphabet>, text: &str) -> Result<GenWord> {
        let mut p = Parser { alphabet, chars: text.char_indices().collect(), at: 0, text };
        let raw = p.sequence()?;
        p.skip_ws();
        if p.at < p.chars.len() {
            return Err(p.error("unexpected input"));
        }
        GenWord::reduce(alphabet, &raw)
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn same_alphabet(&self, other: &GenWord) -> bool {
        self.alphabet.id == other.alphabet.id
    }

    fn check_same(&self, other: &GenWord) -> Result<()> {
        if self.same_alphabet(other) {
            Ok(())
        } else {
            Err(Error::AlphabetMismatch {
                left: self.alphabet.name.clone(),
                right: other.alphabet.name.clone(),
            })
        }
    }

    pub fn inverse(&self) -> GenWord {
        GenWord {
            alphabet: self.alphabet.clone(),
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    pub fn try_mul(&self, other: &GenWord) -> Result<GenWord> {
        self.check_same(other)?;
        let mut buf = self.letters.clone();
        for &l in &other.letters {
            push_reduced(&mut buf, l);
        }
        Ok(GenWord { alphabet: self.alphabet.clone(), letters: buf })
    }

    pub fn pow(&self, k: i64) -> GenWord {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut buf = Vec::new();
        for _ in 0..k.unsigned_abs() {
            for &l in &base.letters {
                push_reduced(&mut buf, l);
            }
        }
        GenWord { alphabet: self.alphabet.clone(), letters: buf }
    }

    /// `h⁻¹ · self · h`.
    pub fn conjugate(&self, h: &GenWord) -> Result<GenWord> {
        self.check_same(h)?;
        GenWord::product(&[&h.inverse(), self, h])
    }

    pub fn commutator(&self, other: &GenWord) -> Result<GenWord> {
        self.check_same(other)?;
        GenWord::product(&[&self.inverse(), &other.inverse(), self, other])
    }

    pub fn exponent_sum(&self, gen: usize) -> i64 {
        self.letters
            .iter()
            .filter(|l| l.gen() == gen)
            .map(|l| if l.is_inverse() { -1 } else { 1 })
            .sum()
    }

    /// Replace generator `i` by `images[i]`; the images may live in another
    /// alphabet, which must be common to all of them.
    pub fn substitute(&self, target: &Arc<Alphabet>, images: &[GenWord]) -> Result<GenWord> {
        if images.len() != self.alphabet.len() {
            return Err(Error::Invalid(format!(
                "substitution needs {} images, got {}",
                self.alphabet.len(),
                images.len()
            )));
        }
        if let Some(bad) = images.iter().find(|im| im.alphabet.id != target.id) {
            return Err(Error::AlphabetMismatch { left: target.name.clone(), right: bad.alphabet.name.clone() });
        }
        let mut buf = Vec::new();
        for &l in &self.letters {
            let im = &images[l.gen()];
            if l.is_inverse() {
                for &m in im.letters.iter().rev() {
                    push_reduced(&mut buf, m.inverse());
                }
            } else {
                for &m in &im.letters {
                    push_reduced(&mut buf, m);
                }
            }
        }
        Ok(GenWord { alphabet: target.clone(), letters: buf })
    }

    /// Canonical representative of the conjugacy class: cyclically reduce,
    /// then take the least rotation.
    pub fn cyclic_normal_form(&self) -> GenWord {
        let l = &self.letters;
        let (mut i, mut j) = (0, l.len());
        while j - i >= 2 && l[i] == l[j - 1].inverse() {
            i += 1;
            j -= 1;
        }
        let core = &l[i..j];
        let best = (0..core.len().max(1))
            .map(|r| {
                let mut v = core[r.min(core.len())..].to_vec();
                v.extend_from_slice(&core[..r.min(core.len())]);
                v
            })
            .min()
            .unwrap_or_default();
        GenWord { alphabet: self.alphabet.clone(), letters: best }
    }

    pub fn first(&self) -> Option<Letter> {
        self.letters.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.letters.last().copied()
    }
}

impl PartialEq for GenWord {
    fn eq(&self, other: &Self) -> bool {
        self.alphabet.id == other.alphabet.id && self.letters == other.letters
    }
}

impl Eq for GenWord {}

impl Hash for GenWord {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.alphabet.id.hash(state);
        self.letters.hash(state);
    }
}

// shortlex
impl Ord for GenWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.letters
            .len()
            .cmp(&other.letters.len())
            .then_with(|| self.letters.cmp(&other.letters))
            .then_with(|| self.alphabet.id.cmp(&other.alphabet.id))
    }
}

impl PartialOrd for GenWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Mul for &GenWord {
    type Output = GenWord;

    /// Panics on alphabet mismatch; use `try_mul` when that can happen.
    fn mul(self, rhs: &GenWord) -> GenWord {
        self.try_mul(rhs).expect("alphabet mismatch")
    }
}

impl Mul for GenWord {
    type Output = GenWord;

    fn mul(self, rhs: GenWord) -> GenWord {
        &self * &rhs
    }
}

impl fmt::Display for GenWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let mut i = 0;
        let mut first = true;
        while i < self.letters.len() {
            let l = self.letters[i];
            let mut j = i;
            while j < self.letters.len() && self.letters[j] == l {
                j += 1;
            }
            let run = (j - i) as i64;
            if !first {
                write!(f, " ")?;
            }
            first = false;
            let name = self.alphabet.gen_name(l.gen());
            match (run, l.is_inverse()) {
                (1, false) => write!(f, "{name}")?,
                (1, true) => write!(f, "{name}'")?,
                (k, false) => write!(f, "{name}^{k}")?,
                (k, true) => write!(f, "{name}^-{k}")?,
            }
            i = j;
        }
        Ok(())
    }
}

impl fmt::Debug for GenWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GenWord({self})")
    }
}

struct Parser<'a> {
    alphabet: &'a Arc<Alphabet>,
    chars: Vec<(usize, char)>,
    at: usize,
    text: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.at).map(|&(_, c)| c)
    }

    fn pos(&self) -> usize {
        self.chars.get(self.at).map(|&(p, _)| p).unwrap_or(self.text.len())
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.at += 1;
        }
    }

    fn error(&self, msg: &str) -> Error {
        let pos = self.pos();
        let rest = &self.text[pos..];
        let token: String = match rest.chars().next() {
            Some(c) if c.is_alphabetic() => rest.chars().take_while(|c| c.is_alphabetic()).collect(),
            Some(c) => c.to_string(),
            None => "<end>".to_string(),
        };
        Error::Parse { token, pos, msg: msg.to_string() }
    }

    fn sequence(&mut self) -> Result<Vec<Letter>> {
        let mut out = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                None | Some(')') => return Ok(out),
                _ => {
                    let term = self.term()?;
                    for l in term {
                        push_reduced(&mut out, l);
                    }
                }
            }
        }
    }

    fn term(&mut self) -> Result<Vec<Letter>> {
        let mut w = self.atom()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some('\'') => {
                    self.at += 1;
                    w = w.iter().rev().map(|l| l.inverse()).collect();
                }
                Some('^') => {
                    self.at += 1;
                    self.skip_ws();
                    let k = self.integer()?;
                    let base: Vec<Letter> =
                        if k < 0 { w.iter().rev().map(|l| l.inverse()).collect() } else { w.clone() };
                    let mut buf = Vec::new();
                    for _ in 0..k.unsigned_abs() {
                        for &l in &base {
                            push_reduced(&mut buf, l);
                        }
                    }
                    w = buf;
                }
                _ => return Ok(w),
            }
        }
    }

    fn integer(&mut self) -> Result<i64> {
        let start = self.at;
        if matches!(self.peek(), Some('-') | Some('+')) {
            self.at += 1;
        }
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.at += 1;
        }
        let s: String = self.chars[start..self.at].iter().map(|&(_, c)| c).collect();
        s.parse::<i64>().map_err(|_| {
            self.at = start;
            self.error("expected an integer exponent")
        })
    }

    fn atom(&mut self) -> Result<Vec<Letter>> {
        match self.peek() {
            Some('(') => {
                self.at += 1;
                let inner = self.sequence()?;
                self.skip_ws();
                if self.peek() != Some(')') {
                    return Err(self.error("expected `)`"));
                }
                self.at += 1;
                Ok(inner)
            }
            Some('1') => {
                self.at += 1;
                Ok(Vec::new())
            }
            Some(c) if c.is_alphabetic() => {
                // greedy: longest generator name that matches here
                let rest: String = self.chars[self.at..].iter().map(|&(_, c)| c).collect();
                let mut best: Option<(usize, usize)> = None;
                for i in 0..self.alphabet.len() {
                    let g = self.alphabet.gen_name(i);
                    if rest.starts_with(g) {
                        let n = g.chars().count();
                        if best.is_none_or(|(_, m)| n > m) {
                            best = Some((i, n));
                        }
                    }
                }
                match best {
                    Some((i, n)) => {
                        self.at += n;
                        Ok(vec![Letter::new(i, false)])
                    }
                    None => Err(self.error("unknown generator")),
                }
            }
            _ => Err(self.error("unexpected character")),
        }
    }
}

/// All reduced words of exactly `len` letters, in shortlex order.
pub fn reduced_words(alphabet: &Arc<Alphabet>, len: usize) -> Vec<GenWord> {
    let letters: Vec<Letter> = (0..alphabet.len())
        .flat_map(|g| [Letter::new(g, false), Letter::new(g, true)])
        .collect();
    let mut layer: Vec<Vec<Letter>> = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &layer {
            for &l in &letters {
                if w.last() != Some(&l.inverse()) {
                    let mut v = w.clone();
                    v.push(l);
                    next.push(v);
                }
            }
        }
        layer = next;
    }
    let mut out: Vec<GenWord> =
        layer.into_iter().map(|letters| GenWord { alphabet: alphabet.clone(), letters }).collect();
    out.sort();
    out
}

/// An endomorphism of the free group, given by generator images.
#[derive(Clone, Debug, PartialEq)]
pub struct Endo {
    alphabet: Arc<Alphabet>,
    images: Vec<GenWord>,
}

impl Endo {
    pub fn new(alphabet: &Arc<Alphabet>, images: Vec<GenWord>) -> Result<Endo> {
        if images.len() != alphabet.len() {
            return Err(Error::Invalid(format!(
                "endomorphism needs {} images, got {}",
                alphabet.len(),
                images.len()
            )));
        }
        for im in &images {
            if im.alphabet.id != alphabet.id {
                return Err(Error::AlphabetMismatch {
                    left: alphabet.name.clone(),
                    right: im.alphabet.name.clone(),
                });
            }
        }
        Ok(Endo { alphabet: alphabet.clone(), images })
    }

    pub fn parse(alphabet: &Arc<Alphabet>, images: &[&str]) -> Result<Endo> {
        let ims = images.iter().map(|s| GenWord::parse(alphabet, s)).collect::<Result<Vec<_>>>()?;
        Endo::new(alphabet, ims)
    }

    pub fn identity(alphabet: &Arc<Alphabet>) -> Endo {
        let images = (0..alphabet.len()).map(|i| GenWord::generator(alphabet, i)).collect();
        Endo { alphabet: alphabet.clone(), images }
    }

    /// Conjugation `x ↦ h⁻¹xh`.
    pub fn inner(h: &GenWord) -> Endo {
        let alphabet = h.alphabet.clone();
        let images = (0..alphabet.len())
            .map(|i| GenWord::generator(&alphabet, i).conjugate(h).unwrap())
            .collect();
        Endo { alphabet, images }
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn image(&self, gen: usize) -> &GenWord {
        &self.images[gen]
    }

    pub fn apply(&self, w: &GenWord) -> Result<GenWord> {
        if w.alphabet.id != self.alphabet.id {
            return Err(Error::AlphabetMismatch {
                left: self.alphabet.name.clone(),
                right: w.alphabet.name.clone(),
            });
        }
        w.substitute(&self.alphabet, &self.images)
    }

    /// Right-action product: `self` acts first, then `next`.
    pub fn then(&self, next: &Endo) -> Result<Endo> {
        let images = self.images.iter().map(|w| next.apply(w)).collect::<Result<Vec<_>>>()?;
        Endo::new(&self.alphabet, images)
    }

    pub fn pow(&self, n: u32) -> Endo {
        let mut acc = Endo::identity(&self.alphabet);
        for _ in 0..n {
            acc = acc.then(self).unwrap();
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abc() -> Arc<Alphabet> {
        Alphabet::new("pi1", &["alpha", "beta", "gamma"]).unwrap()
    }

    fn w(a: &Arc<Alphabet>, s: &str) -> GenWord {
        GenWord::parse(a, s).unwrap()
    }

    #[test]
    fn cancellation() {
        let a = abc();
        assert_eq!(w(&a, "alpha alpha' beta"), w(&a, "beta"));
        assert!(w(&a, "").is_identity());
        let ba = w(&a, "beta alpha");
        let got = GenWord::product(&[&ba.inverse(), &w(&a, "alpha"), &ba]).unwrap();
        assert_eq!(got.to_string(), "alpha' beta' alpha beta alpha");
    }

    #[test]
    fn conjugation() {
        let a = abc();
        assert_eq!(w(&a, "beta").conjugate(&w(&a, "alpha")).unwrap(), w(&a, "alpha' beta alpha"));
        let x = w(&a, "gamma beta'");
        assert_eq!(x.conjugate(&GenWord::identity(&a)).unwrap(), x);
        assert_eq!(
            w(&a, "alpha").conjugate(&w(&a, "beta alpha")).unwrap().to_string(),
            "alpha' beta' alpha beta alpha"
        );
    }

    #[test]
    fn cyclic_normal_form() {
        let a = abc();
        let n = |s: &str| w(&a, s).cyclic_normal_form().to_string();
        assert_eq!(n("alpha' beta gamma alpha"), "beta gamma");
        assert_eq!(n("gamma beta"), "beta gamma");
        assert_eq!(n("gamma alpha beta'"), "alpha beta' gamma");
        assert_eq!(n("beta beta'"), "1");
        assert_eq!(n("alpha"), "alpha");
        let x = w(&a, "gamma alpha beta' alpha");
        assert_eq!(x.conjugate(&w(&a, "beta gamma'")).unwrap().cyclic_normal_form(), x.cyclic_normal_form());
    }

    #[test]
    fn mismatch() {
        let a = abc();
        let b = Alphabet::new("other", &["alpha", "beta", "gamma"]).unwrap();
        let e = w(&a, "alpha").try_mul(&w(&b, "alpha")).unwrap_err();
        assert!(matches!(e, Error::AlphabetMismatch { .. }));
        assert!(GenWord::product(&[&w(&a, "beta"), &w(&b, "beta")]).is_err());
    }

    #[test]
    fn grammar() {
        let ts = Alphabet::new("mcg", &["T", "S"]).unwrap();
        let x = w(&ts, "(S T)^-3 T'");
        assert_eq!(x, w(&ts, "T' S' T' S' T' S' T'"));
        assert_eq!(w(&ts, "T^2 S'").to_string(), "T^2 S'");
        assert_eq!(w(&ts, "TTS^-2").to_string(), "T^2 S^-2");
        assert_eq!(w(&ts, "1"), GenWord::identity(&ts));
        assert_eq!(w(&ts, "(TS)'"), w(&ts, "S'T'"));
        assert_eq!(w(&ts, "T^ 0"), GenWord::identity(&ts));
        match GenWord::parse(&ts, "T Q") {
            Err(Error::Parse { token, pos, .. }) => {
                assert_eq!(token, "Q");
                assert_eq!(pos, 2);
            }
            other => panic!("{other:?}"),
        }
        assert!(GenWord::parse(&ts, "(T").is_err());
        assert!(GenWord::parse(&ts, "T^x").is_err());
    }

    #[test]
    fn greedy_names() {
        let a = abc();
        assert_eq!(w(&a, "alphabeta'"), w(&a, "alpha beta'"));
    }

    #[test]
    fn endo_application() {
        let a = abc();
        // T acts by α ↦ α^{βα}, β ↦ β^α, γ ↦ γ
        let t = Endo::parse(&a, &["(beta alpha)' alpha beta alpha", "alpha' beta alpha", "gamma"]).unwrap();
        assert_eq!(t.apply(&w(&a, "alpha")).unwrap().to_string(), "alpha' beta' alpha beta alpha");
        assert_eq!(t.apply(&w(&a, "gamma")).unwrap(), w(&a, "gamma"));
        let x = w(&a, "gamma beta' alpha^3");
        assert_eq!(Endo::identity(&a).apply(&x).unwrap(), x);
        let inner = Endo::inner(&w(&a, "beta"));
        assert_eq!(inner.apply(&w(&a, "alpha")).unwrap(), w(&a, "beta' alpha beta"));
    }

    #[test]
    fn composition_order() {
        let a = abc();
        let e1 = Endo::parse(&a, &["beta", "beta", "gamma"]).unwrap();
        let e2 = Endo::parse(&a, &["alpha", "gamma", "gamma"]).unwrap();
        let x = w(&a, "alpha");
        assert_eq!(e1.then(&e2).unwrap().apply(&x).unwrap(), e2.apply(&e1.apply(&x).unwrap()).unwrap());
        assert_eq!(e1.then(&e2).unwrap().apply(&x).unwrap(), w(&a, "gamma"));
    }

    #[test]
    fn word_enumeration() {
        let ab = Alphabet::new("ab", &["a", "b"]).unwrap();
        assert_eq!(reduced_words(&ab, 0).len(), 1);
        assert_eq!(reduced_words(&ab, 1).len(), 4);
        assert_eq!(reduced_words(&ab, 3).len(), 36);
        assert!(reduced_words(&ab, 3).iter().all(|x| x.len() == 3));
    }
}
