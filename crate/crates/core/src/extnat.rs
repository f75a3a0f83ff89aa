//! Natural numbers extended with a top element.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul};

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

/// A value in ℕ ∪ {∞}.
///
/// `Infinity + k = Infinity`, `k · Infinity = Infinity` for `k ≥ 1`, and
/// `0 · Infinity = 0`. The order is total with `Infinity` maximal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExtNat {
    Finite(u64),
    Infinity,
}

impl ExtNat {
    pub const ZERO: ExtNat = ExtNat::Finite(0);
    pub const ONE: ExtNat = ExtNat::Finite(1);

    pub fn is_finite(self) -> bool {
        matches!(self, ExtNat::Finite(_))
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            ExtNat::Finite(k) => Some(k),
            ExtNat::Infinity => None,
        }
    }
}

impl From<u64> for ExtNat {
    fn from(k: u64) -> Self {
        ExtNat::Finite(k)
    }
}

impl From<usize> for ExtNat {
    fn from(k: usize) -> Self {
        ExtNat::Finite(k as u64)
    }
}

impl Add for ExtNat {
    type Output = ExtNat;

    fn add(self, rhs: ExtNat) -> ExtNat {
        match (self, rhs) {
            (ExtNat::Finite(a), ExtNat::Finite(b)) => ExtNat::Finite(a + b),
            _ => ExtNat::Infinity,
        }
    }
}

impl Add<u64> for ExtNat {
    type Output = ExtNat;

    fn add(self, rhs: u64) -> ExtNat {
        self + ExtNat::Finite(rhs)
    }
}

impl Mul for ExtNat {
    type Output = ExtNat;

    fn mul(self, rhs: ExtNat) -> ExtNat {
        match (self, rhs) {
            (ExtNat::Finite(a), ExtNat::Finite(b)) => ExtNat::Finite(a * b),
            (ExtNat::Finite(0), ExtNat::Infinity) | (ExtNat::Infinity, ExtNat::Finite(0)) => {
                ExtNat::ZERO
            }
            _ => ExtNat::Infinity,
        }
    }
}

impl Ord for ExtNat {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtNat::Finite(a), ExtNat::Finite(b)) => a.cmp(b),
            (ExtNat::Finite(_), ExtNat::Infinity) => Ordering::Less,
            (ExtNat::Infinity, ExtNat::Finite(_)) => Ordering::Greater,
            (ExtNat::Infinity, ExtNat::Infinity) => Ordering::Equal,
        }
    }
}

impl PartialOrd for ExtNat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ExtNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtNat::Finite(k) => write!(f, "{k}"),
            ExtNat::Infinity => f.write_str("inf"),
        }
    }
}

impl Serialize for ExtNat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            ExtNat::Finite(k) => serializer.serialize_u64(*k),
            ExtNat::Infinity => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtNat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct ExtNatVisitor;

        impl Visitor<'_> for ExtNatVisitor {
            type Value = ExtNat;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a non-negative integer or \"inf\"")
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<ExtNat, E> {
                Ok(ExtNat::Finite(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<ExtNat, E> {
                u64::try_from(v)
                    .map(ExtNat::Finite)
                    .map_err(|_| E::custom("negative value"))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<ExtNat, E> {
                if v == "inf" {
                    Ok(ExtNat::Infinity)
                } else {
                    Err(E::custom(format!("expected \"inf\", got {v:?}")))
                }
            }
        }

        deserializer.deserialize_any(ExtNatVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_contract() {
        let inf = ExtNat::Infinity;
        assert_eq!(inf + 1, inf);
        assert_eq!(ExtNat::Finite(3) * inf, inf);
        assert_eq!(ExtNat::ONE * inf, inf);
        assert_eq!(ExtNat::ZERO * inf, ExtNat::ZERO);
        assert_eq!(ExtNat::Finite(2) * ExtNat::Finite(3), ExtNat::Finite(6));
        assert!(ExtNat::Finite(u64::MAX) < inf);
        assert!(ExtNat::Finite(1) < ExtNat::Finite(2));
    }

    #[test]
    fn json_forms() {
        assert_eq!(serde_json::to_string(&ExtNat::Finite(4)).unwrap(), "4");
        assert_eq!(serde_json::to_string(&ExtNat::Infinity).unwrap(), "\"inf\"");
        let back: ExtNat = serde_json::from_str("\"inf\"").unwrap();
        assert_eq!(back, ExtNat::Infinity);
        let back: ExtNat = serde_json::from_str("7").unwrap();
        assert_eq!(back, ExtNat::Finite(7));
        assert!(serde_json::from_str::<ExtNat>("\"infinity\"").is_err());
    }
}
