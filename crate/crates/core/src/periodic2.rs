//! The family of `z² ± i` and the obstructed maps next to it.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::alphabets::{pi1, twists_ab};
use crate::error::{Error, Result};
use crate::label::{ClassLabel, Verdict};
use crate::selfsim;
use crate::word::{Endo, GenWord};
use crate::wreath::{twist_recursion, Recursion};

pub const DEFAULT_K_MAX: i64 = 64;
pub const DEFAULT_ITER_MAX: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct GaussInt {
    pub re: i64,
    pub im: i64,
}

impl GaussInt {
    pub const ZERO: GaussInt = GaussInt { re: 0, im: 0 };
    pub const ONE: GaussInt = GaussInt { re: 1, im: 0 };
    pub const I: GaussInt = GaussInt { re: 0, im: 1 };

    pub const fn new(re: i64, im: i64) -> GaussInt {
        GaussInt { re, im }
    }

    pub fn norm(self) -> i64 {
        self.re * self.re + self.im * self.im
    }

    pub fn conj(self) -> GaussInt {
        GaussInt::new(self.re, -self.im)
    }

    /// `iᵏ·self`.
    pub fn rotate(self, k: u8) -> GaussInt {
        (0..k % 4).fold(self, |z, _| GaussInt::new(-z.im, z.re))
    }

    pub fn divisible_by(self, d: GaussInt) -> bool {
        let n = d.norm();
        if n == 0 {
            return self == GaussInt::ZERO;
        }
        let p = self * d.conj();
        p.re % n == 0 && p.im % n == 0
    }

    /// Componentwise residue in `0..m`.
    pub fn rem(self, m: i64) -> GaussInt {
        GaussInt::new(self.re.rem_euclid(m), self.im.rem_euclid(m))
    }
}

impl Add for GaussInt {
    type Output = GaussInt;
    fn add(self, o: GaussInt) -> GaussInt {
        GaussInt::new(self.re + o.re, self.im + o.im)
    }
}

impl Sub for GaussInt {
    type Output = GaussInt;
    fn sub(self, o: GaussInt) -> GaussInt {
        GaussInt::new(self.re - o.re, self.im - o.im)
    }
}

impl Neg for GaussInt {
    type Output = GaussInt;
    fn neg(self) -> GaussInt {
        GaussInt::new(-self.re, -self.im)
    }
}

impl Mul for GaussInt {
    type Output = GaussInt;
    fn mul(self, o: GaussInt) -> GaussInt {
        GaussInt::new(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)
    }
}

impl fmt::Display for GaussInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re, self.im) {
            (r, 0) => write!(f, "{r}"),
            (0, i) => write!(f, "{i}i"),
            (r, i) if i < 0 => write!(f, "{r}-{}i", -i),
            (r, i) => write!(f, "{r}+{i}i"),
        }
    }
}

/// `z ↦ iᵏz + c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AffineMap {
    pub k: u8,
    pub c: GaussInt,
}

impl AffineMap {
    pub const IDENTITY: AffineMap = AffineMap { k: 0, c: GaussInt::ZERO };

    pub fn new(k: i64, c: GaussInt) -> AffineMap {
        AffineMap { k: k.rem_euclid(4) as u8, c }
    }

    /// `self ∘ other`.
    pub fn compose(self, other: AffineMap) -> AffineMap {
        AffineMap { k: (self.k + other.k) % 4, c: self.c + other.c.rotate(self.k) }
    }

    pub fn inverse(self) -> AffineMap {
        let k = (4 - self.k) % 4;
        AffineMap { k, c: -self.c.rotate(k) }
    }

    pub fn apply(self, z: GaussInt) -> GaussInt {
        z.rotate(self.k) + self.c
    }
}

/// Element of `(ℤ[i]/5) ⋊ ℤ/4`, residues kept in `0..5`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QElem {
    pub k: u8,
    pub c: (u8, u8),
}

impl From<AffineMap> for QElem {
    fn from(m: AffineMap) -> QElem {
        let c = m.c.rem(5);
        QElem { k: m.k, c: (c.re as u8, c.im as u8) }
    }
}

fn a_map() -> AffineMap {
    AffineMap::new(2, GaussInt::ONE)
}

fn b_map() -> AffineMap {
    AffineMap::new(1, GaussInt::new(1, -1))
}

fn ab(text: &str) -> GenWord {
    GenWord::parse(twists_ab(), text).expect("built-in word")
}

fn loops(text: &str) -> GenWord {
    GenWord::parse(pi1(), text).expect("built-in word")
}

fn check_ab(w: &GenWord) -> Result<()> {
    if w.alphabet().id() != twists_ab().id() {
        return Err(Error::AlphabetMismatch { left: twists_ab().name().into(), right: w.alphabet().name().into() });
    }
    Ok(())
}

/// `Φ_{f_i}`: `α ↦ ⟨α⁻¹β⁻¹, βα⟩σ`, `β ↦ ⟨α, γ⟩`, `γ ↦ ⟨β, 1⟩`.
pub fn fi_recursion() -> Recursion {
    Recursion::parse("fi", pi1(), &[("alpha' beta'", "beta alpha", true), ("alpha", "gamma", false), ("beta", "1", false)])
        .expect("built-in recursion")
}

/// `Φ_{f₊}`: `α ↦ ⟨α⁻¹, α⟩σ`, `β ↦ ⟨α, γ⟩`, `γ ↦ ⟨1, γβγ⁻¹⟩`.
pub fn fstar_recursion() -> Recursion {
    Recursion::parse("fstar", pi1(), &[("alpha'", "alpha", true), ("alpha", "gamma", false), ("1", "gamma beta gamma'", false)])
        .expect("built-in recursion")
}

/// Action of the twist `a` on the loops:
/// `α ↦ α^{β⁻¹γβα}`, `β ↦ β`, `γ ↦ γ^{βαβ⁻¹}`.
pub fn a_action() -> Endo {
    Endo::new(
        pi1(),
        vec![
            loops("alpha").conjugate(&loops("beta' gamma beta alpha")).unwrap(),
            loops("beta"),
            loops("gamma").conjugate(&loops("beta alpha beta'")).unwrap(),
        ],
    )
    .unwrap()
}

/// Inverse of [`a_action`]: `α ↦ α^{β⁻¹γ⁻¹β}`, `β ↦ β`,
/// `γ ↦ γ^{βα⁻¹β⁻¹γ⁻¹}`.
pub fn a_inverse_action() -> Endo {
    Endo::new(
        pi1(),
        vec![
            loops("alpha").conjugate(&loops("beta' gamma' beta")).unwrap(),
            loops("beta"),
            loops("gamma").conjugate(&loops("beta alpha' beta' gamma'")).unwrap(),
        ],
    )
    .unwrap()
}

/// `Φ_{f_i·a}`: the `f_i` table with the inverse of the `a`-action applied
/// to both coordinates.
pub fn fi_twisted_by_a() -> Result<Recursion> {
    Ok(twist_recursion(&fi_recursion(), &a_inverse_action())?.renamed("fi*a"))
}

/// The recursion on twists, `a ↦ σ`, `b ↦ ⟨b⁻¹a⁻¹, b⟩`.
pub fn moduli_i_recursion() -> Recursion {
    Recursion::parse("moduli-i", twists_ab(), &[("1", "1", true), ("b' a'", "b", false)]).expect("built-in recursion")
}

/// `π(w)` with `π(a): z ↦ −z+1`, `π(b): z ↦ iz+1−i` and `π(gh) = π(g)∘π(h)`.
pub fn affine_image(w: &GenWord) -> Result<AffineMap> {
    check_ab(w)?;
    let (a, b) = (a_map(), b_map());
    let mut acc = AffineMap::IDENTITY;
    for l in w.letters() {
        let m = if l.gen() == 0 { a } else { b };
        acc = acc.compose(if l.is_inverse() { m.inverse() } else { m });
    }
    Ok(acc)
}

pub fn q_image(w: &GenWord) -> Result<QElem> {
    affine_image(w).map(QElem::from)
}

fn label_of(m: AffineMap) -> ClassLabel {
    let d = m.c - GaussInt::new(1, 1);
    match m.k {
        0 if !d.divisible_by(GaussInt::new(2, 1)) => ClassLabel::Fi,
        1 if !d.divisible_by(GaussInt::new(1, 2)) => ClassLabel::FminusI,
        _ => ClassLabel::Obstructed(0),
    }
}

/// Three-way split of `f_i·w`. The obstructed index is left at 0; see
/// [`classify_full`].
pub fn classify_mod5(w: &GenWord) -> Result<ClassLabel> {
    affine_image(w).map(label_of)
}

/// Same answer computed from the image in `Q` alone.
pub fn classify_q(q: QElem) -> ClassLabel {
    label_of(AffineMap::new(q.k as i64, GaussInt::new(q.c.0 as i64, q.c.1 as i64)))
}

/// `φ̄(g)`: the second coordinate `g₁` of `Φ(g)` when `g` is inactive,
/// `a·g₁` otherwise.
pub fn phi_bar(w: &GenWord) -> Result<GenWord> {
    check_ab(w)?;
    let e = moduli_i_recursion().phi(w)?;
    Ok(if e.active { ab("a").try_mul(&e.c1)? } else { e.c1 })
}

/// Equality in `Gx`, the quotient by the kernel of all iterates of `Φ`.
pub fn gx_equal(w1: &GenWord, w2: &GenWord, bound: usize) -> Result<bool> {
    check_ab(w1)?;
    selfsim::is_eventually_trivial(&moduli_i_recursion(), &w1.try_mul(&w2.inverse())?, bound)
}

fn candidates(k_max: i64, residue: i64) -> impl Iterator<Item = i64> {
    (0..=k_max)
        .flat_map(|n| if n == 0 { vec![0] } else { vec![n, -n] })
        .filter(move |n| (n - residue).rem_euclid(4) == 0)
}

/// The `n` with `f₊·w ≃ f₊·bⁿ`: iterate `φ̄` until the orbit meets a power
/// of `b` in `Gx`.
pub fn obstructed_index(w: &GenWord, k_max: i64, iter_max: usize) -> Result<Verdict> {
    check_ab(w)?;
    let bound = selfsim::DEFAULT_BOUND;
    let b = ab("b");
    let mut g = w.clone();
    for it in 0..iter_max {
        // b-exponent mod 4 survives in Gx through the quotient Z/4
        let residue = g.exponent_sum(1).rem_euclid(4);
        if g.exponent_sum(0).rem_euclid(2) == 0 {
            let mut tested = false;
            for n in candidates(k_max, residue) {
                tested = true;
                if gx_equal(&g, &b.pow(n), bound)? {
                    return Ok(Verdict { label: ClassLabel::Obstructed(n), iterations: it, witness: g });
                }
            }
            if !tested {
                return Err(Error::BoundExceeded { bound: k_max as usize });
            }
        }
        g = phi_bar(&g)?;
    }
    Err(Error::Diverged { iters: iter_max })
}

/// Full label of `f_i·w`; obstructed maps carry the `n` with `f_i·w ≃ f₊·bⁿ`.
pub fn classify_full(w: &GenWord, k_max: i64, iter_max: usize) -> Result<Verdict> {
    match classify_mod5(w)? {
        ClassLabel::Obstructed(_) => {
            let g = ab("a'").try_mul(w)?;
            obstructed_index(&g, k_max, iter_max)
        }
        label => Ok(Verdict { label, iterations: 0, witness: w.clone() }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::selfsim::{
        automata_isomorphic, is_eventually_trivial, is_trivial_action, moore_diagram_modulo_action,
        nucleus_modulo_action,
    };
    use crate::word::reduced_words;
    use proptest::prelude::*;

    const BOUND: usize = selfsim::DEFAULT_BOUND;

    fn gx(u: &str, v: &str) -> bool {
        gx_equal(&ab(u), &ab(v), BOUND).unwrap()
    }

    #[test]
    fn gaussian_arithmetic() {
        let z = GaussInt::new(3, -2);
        assert_eq!(z.norm(), 13);
        assert_eq!(z * z.conj(), GaussInt::new(13, 0));
        assert_eq!(GaussInt::I.rotate(1), GaussInt::new(-1, 0));
        assert_eq!(z.rotate(4), z);
        assert!(GaussInt::new(5, 0).divisible_by(GaussInt::new(2, 1)));
        assert!(GaussInt::new(1, 7).divisible_by(GaussInt::new(1, 2)));
        assert!(!GaussInt::new(-1, -1).divisible_by(GaussInt::new(2, 1)));
        assert_eq!(GaussInt::new(-3, 7).rem(5), GaussInt::new(2, 2));
        assert_eq!(z.to_string(), "3-2i");
    }

    #[test]
    fn affine_images() {
        assert_eq!(affine_image(&ab("1")).unwrap(), AffineMap::IDENTITY);
        assert_eq!(affine_image(&ab("a")).unwrap(), AffineMap::new(2, GaussInt::new(1, 0)));
        assert_eq!(affine_image(&ab("b")).unwrap(), AffineMap::new(1, GaussInt::new(1, -1)));
        assert_eq!(affine_image(&ab("a b")).unwrap(), AffineMap::new(3, GaussInt::new(0, 1)));
        let m = affine_image(&ab("a b' a b^3")).unwrap();
        let z = GaussInt::new(2, 5);
        assert_eq!(m.compose(m.inverse()), AffineMap::IDENTITY);
        assert_eq!(m.inverse().apply(m.apply(z)), z);
        assert!(affine_image(&loops("alpha")).is_err());
    }

    #[test]
    fn mod5_anchors() {
        let c = |s: &str| classify_mod5(&ab(s)).unwrap();
        assert_eq!(c("1"), ClassLabel::Fi);
        assert_eq!(c("a^2"), ClassLabel::Fi);
        assert_eq!(c("a^2 b"), ClassLabel::FminusI);
        assert_eq!(c("a b' a b"), ClassLabel::Fi);
        assert_eq!(c("a"), ClassLabel::Obstructed(0));
    }

    #[test]
    fn q_has_order_100() {
        let gens = [q_image(&ab("a")).unwrap(), q_image(&ab("b")).unwrap()];
        let mul = |x: QElem, y: QElem| -> QElem {
            let f = |q: QElem| AffineMap::new(q.k as i64, GaussInt::new(q.c.0 as i64, q.c.1 as i64));
            f(x).compose(f(y)).into()
        };
        let mut seen = std::collections::BTreeSet::from([q_image(&ab("1")).unwrap()]);
        let mut frontier: Vec<QElem> = seen.iter().copied().collect();
        while let Some(x) = frontier.pop() {
            for g in gens {
                let y = mul(x, g);
                if seen.insert(y) {
                    frontier.push(y);
                }
            }
        }
        assert_eq!(seen.len(), 100);
        assert_eq!(q_image(&ab("a")).unwrap(), QElem { k: 2, c: (1, 0) });
    }

    #[test]
    fn labels_factor_through_q() {
        for w in (0..=6).flat_map(|n| reduced_words(twists_ab(), n)) {
            assert_eq!(classify_q(q_image(&w).unwrap()), classify_mod5(&w).unwrap(), "{w}");
        }
    }

    #[test]
    fn twisted_fi_is_fstar() {
        let gens: Vec<GenWord> = (0..3).map(|i| GenWord::generator(pi1(), i)).collect();
        let diagram = |r: &Recursion| {
            let n = nucleus_modulo_action(r, &gens, BOUND).unwrap();
            moore_diagram_modulo_action(r, &n, BOUND).unwrap()
        };
        let t = fi_twisted_by_a().unwrap();
        for g in ["alpha", "beta", "gamma"] {
            let x = loops(g);
            assert_eq!(a_action().then(&a_inverse_action()).unwrap().apply(&x).unwrap(), x);
        }
        let d = diagram(&t);
        assert_eq!(d.len(), 14);
        assert!(automata_isomorphic(&d, &diagram(&fstar_recursion())));
        assert!(!automata_isomorphic(&d, &diagram(&fi_recursion())));
    }

    #[test]
    fn involutions() {
        let (fi, fs) = (fi_recursion(), fstar_recursion());
        for x in ["alpha^2", "beta^2", "gamma^2"] {
            assert!(is_trivial_action(&fi, &loops(x), BOUND).unwrap());
            assert!(is_trivial_action(&fs, &loops(x), BOUND).unwrap());
        }
        let comm = loops("beta' gamma' beta gamma");
        assert!(is_trivial_action(&fs, &comm, BOUND).unwrap());
        assert!(!is_trivial_action(&fi, &comm, BOUND).unwrap());
        assert!(!is_trivial_action(&fi, &loops("alpha beta"), BOUND).unwrap());
    }

    #[test]
    fn gx_relations() {
        assert!(gx("a^2", "1"));
        assert!(gx("(a b)^4", "1"));
        for w in ["a", "b", "a b", "b a", "a' b"] {
            let b4 = ab("b^4");
            let r = b4.commutator(&b4.conjugate(&ab(w)).unwrap()).unwrap();
            assert!(gx_equal(&r, &ab("1"), BOUND).unwrap(), "{w}");
        }
        for k in 1..=16 {
            assert!(!gx_equal(&ab("b").pow(k), &ab("1"), BOUND).unwrap(), "b^{k}");
        }
        // b^4 acts trivially on the tree all the same
        assert!(is_trivial_action(&moduli_i_recursion(), &ab("b^4"), BOUND).unwrap());
        assert!(!is_eventually_trivial(&moduli_i_recursion(), &ab("b^4"), BOUND).unwrap());
    }

    #[test]
    fn phi_bar_values() {
        assert_eq!(phi_bar(&ab("b")).unwrap(), ab("b"));
        assert_eq!(phi_bar(&ab("a^2")).unwrap(), ab("1"));
        assert_eq!(phi_bar(&ab("a")).unwrap(), ab("a"));
        assert_eq!(phi_bar(&ab("a' b a")).unwrap(), ab("b' a'"));
    }

    #[test]
    fn phi_bar_cycles() {
        let step = |w: &GenWord| phi_bar(w).unwrap();
        for k in -8..=8 {
            let b = ab("b").pow(k);
            assert!(gx_equal(&step(&b), &b, BOUND).unwrap(), "b^{k}");
        }
        let x = ab("a b");
        let y = ab("b'").conjugate(&ab("a")).unwrap();
        assert!(gx_equal(&step(&x), &y, BOUND).unwrap());
        assert!(gx_equal(&step(&y), &x, BOUND).unwrap());
        let p = ab("a").conjugate(&ab("b")).unwrap();
        let q = ab("b^-2").conjugate(&ab("a")).unwrap();
        let r = ab("a b a b");
        assert!(gx_equal(&step(&p), &q, BOUND).unwrap());
        assert!(gx_equal(&step(&q), &r, BOUND).unwrap());
        assert!(gx_equal(&step(&r), &p, BOUND).unwrap());
    }

    #[test]
    fn phi_of_relator() {
        let phi = |w: &str| {
            let e = moduli_i_recursion().phi(&ab(w)).unwrap();
            assert!(!e.active);
            e.c1
        };
        assert!(gx_equal(&phi("(a b)^4"), &ab("b' a^-2 b"), BOUND).unwrap());
        assert!(gx_equal(&phi("a' (a b)^4 a"), &ab("a^-2"), BOUND).unwrap());
    }

    #[test]
    fn obstructed_indices() {
        for r in -5..=5 {
            let v = obstructed_index(&ab("b").pow(r), DEFAULT_K_MAX, DEFAULT_ITER_MAX).unwrap();
            assert_eq!(v.label, ClassLabel::Obstructed(r));
            assert_eq!(v.iterations, 0);
        }
        let v = obstructed_index(&ab("1"), DEFAULT_K_MAX, DEFAULT_ITER_MAX).unwrap();
        assert_eq!(v.label.index(), Some(0));
        let v = obstructed_index(&ab("a' b a"), DEFAULT_K_MAX, DEFAULT_ITER_MAX).unwrap();
        assert_eq!(v.label, ClassLabel::Obstructed(1));
        assert_eq!(v.iterations, 3);
    }

    #[test]
    fn full_classification() {
        let c = |s: &str| classify_full(&ab(s), DEFAULT_K_MAX, DEFAULT_ITER_MAX).unwrap().label;
        assert_eq!(c("a"), ClassLabel::Obstructed(0));
        assert_eq!(c("a b^5"), ClassLabel::Obstructed(5));
        assert_eq!(c("a^2 b"), ClassLabel::FminusI);
        assert_eq!(c("1"), ClassLabel::Fi);
    }

    #[test]
    fn obstructed_words_land_on_powers() {
        for w in (0..=4).flat_map(|n| reduced_words(twists_ab(), n)) {
            let full = ab("a").try_mul(&w).unwrap();
            if let ClassLabel::Obstructed(_) = classify_mod5(&full).unwrap() {
                let v = obstructed_index(&w, DEFAULT_K_MAX, DEFAULT_ITER_MAX).unwrap();
                let n = v.label.index().unwrap();
                assert!(gx_equal(&v.witness, &ab("b").pow(n), BOUND).unwrap(), "{w}");
            }
        }
    }

    fn ab_word() -> impl Strategy<Value = GenWord> {
        prop::collection::vec((0usize..2, any::<bool>()), 0..10).prop_map(|v| {
            let letters: Vec<_> = v.into_iter().map(|(g, i)| crate::word::Letter::new(g, i)).collect();
            GenWord::reduce(twists_ab(), &letters).unwrap()
        })
    }

    proptest! {
        #[test]
        fn affine_image_is_a_homomorphism(u in ab_word(), v in ab_word()) {
            let uv = u.try_mul(&v).unwrap();
            prop_assert_eq!(affine_image(&uv).unwrap(), affine_image(&u).unwrap().compose(affine_image(&v).unwrap()));
        }

        #[test]
        fn phi_bar_respects_q_kernel(u in ab_word()) {
            // a twist in the kernel of π changes nothing
            let k = ab("(a b)^4");
            prop_assert_eq!(classify_mod5(&u.try_mul(&k).unwrap()).unwrap(), classify_mod5(&u).unwrap());
        }
    }
}
