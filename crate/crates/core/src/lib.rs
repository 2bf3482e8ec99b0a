//! Thurston equivalence classes of twisted quadratic polynomials with three
//! finite post-critical points, decided through wreath recursions on free
//! groups, virtual endomorphism iteration and arithmetic invariants.

pub mod alphabets;
pub mod cli;
pub mod error;
pub mod label;
pub mod moduli;
pub mod periodic2;
pub mod preperiod2;
pub mod rabbit;
pub mod selfsim;
pub mod word;
pub mod wreath;

pub use error::{Error, Result};
pub use label::{ClassLabel, Verdict};
pub use word::{Alphabet, Endo, GenWord, Letter};
pub use wreath::{twist_recursion, Recursion, WreathElem};
