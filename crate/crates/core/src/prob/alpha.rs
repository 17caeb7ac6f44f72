use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{LeakageError, Result};

/// Order parameter of the Rényi family.
///
/// The two limit cases are exact tags so that `One` and `Infinity` never go
/// through the finite-order formulas. A `Finite` value is never exactly 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlphaOrder {
    One,
    Infinity,
    Finite(f64),
}

impl AlphaOrder {
    /// Maps 1 to `One` and `+inf` to `Infinity`; rejects NaN and values `<= 0`.
    pub fn new(value: f64) -> Result<Self> {
        if value.is_nan() || value <= 0.0 {
            return Err(LeakageError::AlphaOutOfRange(value));
        }
        Ok(if value == 1.0 {
            AlphaOrder::One
        } else if value == f64::INFINITY {
            AlphaOrder::Infinity
        } else {
            AlphaOrder::Finite(value)
        })
    }

    pub fn value(self) -> f64 {
        match self {
            AlphaOrder::One => 1.0,
            AlphaOrder::Infinity => f64::INFINITY,
            AlphaOrder::Finite(a) => a,
        }
    }

    /// True for orders in `[1, inf]`, the range on which leakage is defined.
    pub fn is_leakage_order(self) -> bool {
        self.value() >= 1.0
    }

    pub(crate) fn require_leakage_order(self) -> Result<()> {
        if self.is_leakage_order() {
            Ok(())
        } else {
            Err(LeakageError::AlphaOutOfRange(self.value()))
        }
    }
}

impl fmt::Display for AlphaOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlphaOrder::One => f.write_str("1"),
            AlphaOrder::Infinity => f.write_str("inf"),
            AlphaOrder::Finite(a) => write!(f, "{a}"),
        }
    }
}

impl FromStr for AlphaOrder {
    type Err = LeakageError;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        match t.to_ascii_lowercase().as_str() {
            "inf" | "+inf" | "infinity" | "∞" => return Ok(AlphaOrder::Infinity),
            _ => {}
        }
        let v: f64 = t
            .parse()
            .map_err(|_| LeakageError::InvalidArgument(format!("cannot parse alpha {t:?}")))?;
        AlphaOrder::new(v)
    }
}

impl Serialize for AlphaOrder {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            AlphaOrder::Infinity => serializer.serialize_str("inf"),
            other => serializer.serialize_f64(other.value()),
        }
    }
}

impl<'de> Deserialize<'de> for AlphaOrder {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        let parsed = match Raw::deserialize(deserializer)? {
            Raw::Num(v) => AlphaOrder::new(v),
            Raw::Text(s) => s.parse(),
        };
        parsed.map_err(serde::de::Error::custom)
    }
}
