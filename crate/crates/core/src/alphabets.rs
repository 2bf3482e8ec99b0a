//! The three generator alphabets shared across the crate.

use std::sync::{Arc, OnceLock};

use crate::word::Alphabet;

/// Loops around the finite post-critical points: `alpha`, `beta`, `gamma`.
pub fn pi1() -> &'static Arc<Alphabet> {
    static A: OnceLock<Arc<Alphabet>> = OnceLock::new();
    A.get_or_init(|| Alphabet::new("pi1", &["alpha", "beta", "gamma"]).unwrap())
}

/// Dehn twists `T`, `S` of the period-3 family.
pub fn twists_ts() -> &'static Arc<Alphabet> {
    static A: OnceLock<Arc<Alphabet>> = OnceLock::new();
    A.get_or_init(|| Alphabet::new("mcg-ts", &["T", "S"]).unwrap())
}

/// Moduli-space loops `a`, `b`.
pub fn twists_ab() -> &'static Arc<Alphabet> {
    static A: OnceLock<Arc<Alphabet>> = OnceLock::new();
    A.get_or_init(|| Alphabet::new("mcg-ab", &["a", "b"]).unwrap())
}
