use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::PolyError;

/// A named variable: one lowercase letter optionally followed by a decimal
/// index, e.g. `x3`, `z12`, `w`.
///
/// Variables are totally ordered by letter, then index; a smaller variable is
/// more significant in the lexicographic tie-break of the monomial order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(u32);

const INDEX_BITS: u32 = 24;
const INDEX_MASK: u32 = (1 << INDEX_BITS) - 1;

impl Var {
    /// `letter` followed by `index`, e.g. `Var::new('x', 1)` is `x1`.
    pub fn new(letter: char, index: u32) -> Self {
        assert!(letter.is_ascii_lowercase(), "variable letter must be a-z");
        assert!(index < INDEX_MASK, "variable index too large");
        Var(((letter as u32 - 'a' as u32) << INDEX_BITS) | (index + 1))
    }

    /// A bare letter with no index, e.g. `w`.
    pub fn plain(letter: char) -> Self {
        assert!(letter.is_ascii_lowercase(), "variable letter must be a-z");
        Var((letter as u32 - 'a' as u32) << INDEX_BITS)
    }

    pub fn x(i: u32) -> Self {
        Var::new('x', i)
    }

    pub fn y(i: u32) -> Self {
        Var::new('y', i)
    }

    pub fn z(i: u32) -> Self {
        Var::new('z', i)
    }

    pub fn letter(self) -> char {
        char::from(b'a' + (self.0 >> INDEX_BITS) as u8)
    }

    pub fn index(self) -> Option<u32> {
        match self.0 & INDEX_MASK {
            0 => None,
            i => Some(i - 1),
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.index() {
            Some(i) => write!(f, "{}{}", self.letter(), i),
            None => write!(f, "{}", self.letter()),
        }
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Var {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || PolyError::Parse(format!("invalid variable name {s:?}"));
        let mut chars = s.chars();
        let letter = chars.next().ok_or_else(bad)?;
        if !letter.is_ascii_lowercase() {
            return Err(bad());
        }
        let rest = chars.as_str();
        if rest.is_empty() {
            return Ok(Var::plain(letter));
        }
        if !rest.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let index: u32 = rest.parse().map_err(|_| bad())?;
        if index >= INDEX_MASK {
            return Err(bad());
        }
        Ok(Var::new(letter, index))
    }
}

impl Serialize for Var {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Var {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for s in ["x1", "x0", "w", "z12", "y3", "a"] {
            assert_eq!(s.parse::<Var>().unwrap().to_string(), s);
        }
        assert!("X1".parse::<Var>().is_err());
        assert!("x1a".parse::<Var>().is_err());
        assert!("".parse::<Var>().is_err());
    }

    #[test]
    fn ordering_is_letter_then_index() {
        assert!(Var::x(1) < Var::x(2));
        assert!(Var::x(9) < Var::y(1));
        assert!(Var::plain('w') < Var::x(1));
        assert!(Var::plain('x') < Var::x(0));
    }
}
