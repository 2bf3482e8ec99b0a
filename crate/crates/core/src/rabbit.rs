//! The period-3 family: rabbit, airplane and corabbit.

use std::collections::HashSet;

use crate::alphabets::{pi1, twists_ts};
use crate::error::{Error, Result};
use crate::label::{ClassLabel, Verdict};
use crate::selfsim::{self, VirtualEndo};
use crate::word::{Endo, GenWord};
use crate::wreath::Recursion;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RabbitVariant {
    R,
    A,
    C,
}

impl RabbitVariant {
    pub fn label(self) -> ClassLabel {
        match self {
            RabbitVariant::R => ClassLabel::Rabbit,
            RabbitVariant::A => ClassLabel::Airplane,
            RabbitVariant::C => ClassLabel::Corabbit,
        }
    }
}

fn w(text: &str) -> GenWord {
    GenWord::parse(pi1(), text).expect("built-in word")
}

fn t(text: &str) -> GenWord {
    GenWord::parse(twists_ts(), text).expect("built-in word")
}

/// The circle at infinity, `γβα`.
pub fn adding_machine() -> GenWord {
    w("gamma beta alpha")
}

pub fn rabbit_recursion(v: RabbitVariant) -> Recursion {
    let rows: [(&str, &str, bool); 3] = match v {
        RabbitVariant::R => [
            ("alpha' beta'", "gamma beta alpha", true),
            ("alpha", "1", false),
            ("beta", "1", false),
        ],
        RabbitVariant::A => [
            ("alpha'", "gamma alpha", true),
            ("alpha", "1", false),
            ("1", "gamma beta gamma'", false),
        ],
        RabbitVariant::C => [
            ("alpha' beta'", "gamma beta alpha", true),
            ("(beta alpha)' alpha beta alpha", "1", false),
            ("alpha' beta alpha", "1", false),
        ],
    };
    let name = match v {
        RabbitVariant::R => "rabbit",
        RabbitVariant::A => "airplane",
        RabbitVariant::C => "corabbit",
    };
    Recursion::parse(name, pi1(), &rows)
        .and_then(|r| r.with_adding_machine(adding_machine()))
        .expect("built-in recursion")
}

/// Action of `T` on the loops: `α ↦ α^{βα}`, `β ↦ β^α`, `γ ↦ γ`.
pub fn t_action() -> Endo {
    Endo::new(pi1(), vec![w("alpha").conjugate(&w("beta alpha")).unwrap(), w("alpha' beta alpha"), w("gamma")])
        .unwrap()
}

pub fn t_inverse_action() -> Endo {
    Endo::new(pi1(), vec![w("beta alpha beta'"), w("beta alpha beta alpha' beta'"), w("gamma")]).unwrap()
}

/// Action of `S`: `α ↦ α`, `β ↦ β^{γβ}`, `γ ↦ γ^β`.
pub fn s_action() -> Endo {
    Endo::new(pi1(), vec![w("alpha"), w("beta").conjugate(&w("gamma beta")).unwrap(), w("beta' gamma beta")]).unwrap()
}

pub fn s_inverse_action() -> Endo {
    Endo::new(pi1(), vec![w("alpha"), w("gamma beta gamma'"), w("gamma").conjugate(&w("beta' gamma'")).unwrap()])
        .unwrap()
}

/// Right action of a mapping class word on the loops, letter by letter.
pub fn mcg_action(g: &GenWord) -> Result<Endo> {
    if g.alphabet().id() != twists_ts().id() {
        return Err(Error::AlphabetMismatch { left: twists_ts().name().into(), right: g.alphabet().name().into() });
    }
    let steps = [t_action(), s_action(), t_inverse_action(), s_inverse_action()];
    let mut acc = Endo::identity(pi1());
    for l in g.letters() {
        let k = l.gen() + if l.is_inverse() { 2 } else { 0 };
        acc = acc.then(&steps[k])?;
    }
    Ok(acc)
}

/// `Φ_{T^m·f_R}` written out: `β ↦ ⟨α^{(α⁻¹β⁻¹)^m}, 1⟩`, `γ ↦ ⟨β^{(α⁻¹β⁻¹)^m}, 1⟩`.
pub fn twisted_rabbit_recursion(m: i64) -> Recursion {
    let h = w("alpha' beta'").pow(m);
    let b = w("alpha").conjugate(&h).unwrap().to_string();
    let c = w("beta").conjugate(&h).unwrap().to_string();
    let rows = [("alpha' beta'", "gamma beta alpha", true), (b.as_str(), "1", false), (c.as_str(), "1", false)];
    Recursion::parse(&format!("rabbit-T^{m}"), pi1(), &rows)
        .and_then(|r| r.with_adding_machine(adding_machine()))
        .expect("built-in recursion")
}

/// The recursion on the mapping class group, `T ↦ ⟨1, S⁻¹T⁻¹⟩σ`, `S ↦ ⟨T, 1⟩`.
pub fn mcg_recursion() -> Recursion {
    Recursion::parse("mcg-rabbit", twists_ts(), &[("1", "S' T'", true), ("T", "1", false)]).expect("built-in recursion")
}

/// The lift `ψ` of twists through `f_R`, on `⟨T², S, S^T⟩` with coset
/// representatives `1, T`.
pub fn psi_virtual_endo() -> VirtualEndo {
    VirtualEndo::parse(twists_ts(), &[("T^2", "S' T'"), ("S", "T"), ("T' S T", "1")], &["1", "T"]).unwrap()
}

/// `ψ̄(g)`: `g₀` when `Φ(g) = ⟨g₀, g₁⟩`, and `T·g₀` when `Φ(g) = ⟨g₀, g₁⟩σ`.
pub fn psi_bar(g: &GenWord) -> Result<GenWord> {
    let e = mcg_recursion().phi(g)?;
    Ok(if e.active { &t("T") * &e.c0 } else { e.c0 })
}

fn terminal(g: &GenWord) -> Option<ClassLabel> {
    if g.is_identity() {
        return Some(ClassLabel::Rabbit);
    }
    if *g == t("T") {
        return Some(ClassLabel::Airplane);
    }
    if [t("T'"), t("T^2 S"), t("S'")].contains(g) {
        return Some(ClassLabel::Corabbit);
    }
    None
}

/// Class of `f_R·g`, by iterating `ψ̄` until the orbit reaches `1`, `T` or the
/// cycle `T⁻¹ → T²S → S⁻¹`.
pub fn classify_mcg(g: &GenWord, max_iters: usize) -> Result<Verdict> {
    let rec = mcg_recursion();
    let tw = t("T");
    let mut cur = g.clone();
    let mut seen = HashSet::new();
    for i in 0..=max_iters {
        if let Some(label) = terminal(&cur) {
            return Ok(Verdict { label, iterations: i, witness: cur });
        }
        if !seen.insert(cur.clone()) {
            break;
        }
        let e = rec.phi(&cur)?;
        cur = if e.active { &tw * &e.c0 } else { e.c0 };
    }
    Err(Error::Diverged { iters: max_iters })
}

pub fn four_adic_digits(mut m: i64) -> Vec<u8> {
    let mut out = Vec::new();
    while m != 0 && m != -1 {
        let d = m.rem_euclid(4);
        out.push(d as u8);
        m = (m - d) / 4;
    }
    out
}

/// Class of `T^m·f_R` read off the 4-adic digits of `m`.
pub fn classify_twist_power(m: i64) -> ClassLabel {
    if four_adic_digits(m).iter().any(|&d| d == 1 || d == 2) {
        ClassLabel::Airplane
    } else if m >= 0 {
        ClassLabel::Rabbit
    } else {
        ClassLabel::Corabbit
    }
}

pub fn classify_st_power(m: i64, max_iters: usize) -> Result<Verdict> {
    classify_mcg(&t("S T").pow(m), max_iters)
}

pub fn rabbit_nucleus(v: RabbitVariant, bound: usize) -> Result<Vec<GenWord>> {
    let gens = [w("alpha"), w("beta"), w("gamma")];
    selfsim::nucleus(&rabbit_recursion(v), &gens, bound)
}
