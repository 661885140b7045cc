//! Natural numbers extended by an infinite value.

use std::fmt;
use std::ops::{Add, Mul};

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Extended {
    Finite(u64),
    Infinite,
}

impl Serialize for Extended {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Extended::Finite(n) => s.serialize_u64(*n),
            Extended::Infinite => s.serialize_str("infinite"),
        }
    }
}

impl<'de> Deserialize<'de> for Extended {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            N(u64),
            S(String),
        }
        match Raw::deserialize(d)? {
            Raw::N(n) => Ok(Extended::Finite(n)),
            Raw::S(s) if s == "infinite" => Ok(Extended::Infinite),
            Raw::S(s) => Err(serde::de::Error::custom(format!(
                "expected a number or \"infinite\", got {s:?}"
            ))),
        }
    }
}

impl Extended {
    pub fn is_finite(self) -> bool {
        matches!(self, Extended::Finite(_))
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            Extended::Finite(n) => Some(n),
            Extended::Infinite => None,
        }
    }
}

impl From<u64> for Extended {
    fn from(n: u64) -> Self {
        Extended::Finite(n)
    }
}

impl Add for Extended {
    type Output = Extended;
    fn add(self, rhs: Extended) -> Extended {
        match (self, rhs) {
            (Extended::Finite(a), Extended::Finite(b)) => Extended::Finite(a + b),
            _ => Extended::Infinite,
        }
    }
}

/// `0 · ∞ = 0`: the zero ring absorbs.
impl Mul for Extended {
    type Output = Extended;
    fn mul(self, rhs: Extended) -> Extended {
        match (self, rhs) {
            (Extended::Finite(a), Extended::Finite(b)) => Extended::Finite(a * b),
            (Extended::Finite(0), _) | (_, Extended::Finite(0)) => Extended::Finite(0),
            _ => Extended::Infinite,
        }
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(n) => write!(f, "{n}"),
            Extended::Infinite => write!(f, "infinite"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn serializes_as_number_or_marker() {
        assert_eq!(serde_json::to_string(&Extended::Finite(3)).unwrap(), "3");
        assert_eq!(
            serde_json::to_string(&Extended::Infinite).unwrap(),
            "\"infinite\""
        );
        let back: Extended = serde_json::from_str("\"infinite\"").unwrap();
        assert_eq!(back, Extended::Infinite);
    }

    #[test]
    fn infinity_absorbs() {
        assert_eq!(Extended::Infinite * Extended::Finite(2), Extended::Infinite);
        assert_eq!(Extended::Finite(2) + Extended::Infinite, Extended::Infinite);
        assert_eq!(
            Extended::Finite(2) * Extended::Finite(3),
            Extended::Finite(6)
        );
    }
}
