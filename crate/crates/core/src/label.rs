use std::fmt;

use serde::Serialize;

use crate::word::GenWord;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClassLabel {
    Rabbit,
    Corabbit,
    Airplane,
    Fi,
    FminusI,
    /// Equivalent to `f₊·bⁿ`.
    Obstructed(i64),
    F14,
    F34,
    F512,
}

impl ClassLabel {
    pub fn name(&self) -> &'static str {
        match self {
            ClassLabel::Rabbit => "rabbit",
            ClassLabel::Corabbit => "corabbit",
            ClassLabel::Airplane => "airplane",
            ClassLabel::Fi => "f_i",
            ClassLabel::FminusI => "f_-i",
            ClassLabel::Obstructed(_) => "obstructed",
            ClassLabel::F14 => "f_1/4",
            ClassLabel::F34 => "f_3/4",
            ClassLabel::F512 => "f_5/12",
        }
    }

    pub fn index(&self) -> Option<i64> {
        match self {
            ClassLabel::Obstructed(n) => Some(*n),
            _ => None,
        }
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassLabel::Obstructed(n) => write!(f, "obstructed (f_+ b^{n})"),
            l => write!(f, "{}", l.name()),
        }
    }
}

impl Serialize for ClassLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// Result of an iterative classifier: the class, how many steps it took,
/// and the terminal element the orbit reached.
#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub label: ClassLabel,
    pub iterations: usize,
    pub witness: GenWord,
}
