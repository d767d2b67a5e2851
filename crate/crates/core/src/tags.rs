//! Formal transcendental unit factors.
//!
//! Some exact series carry an overall factor that is not in any cyclotomic
//! field, such as `i`, `2*pi*i` or `Gamma(-1/2)`. They are tracked as integer
//! exponents alongside the exact value; exact comparison is only allowed once
//! every exponent has cancelled.

use std::f64::consts::PI;
use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// `i^a * (2 pi i)^b * Gamma(-1/2)^c`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UnitTag {
    pub i: i32,
    pub two_pi_i: i32,
    pub gamma_neg_half: i32,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("uncancelled unit factor {0}")]
pub struct UncancelledTag(pub UnitTag);

impl UnitTag {
    pub const ONE: UnitTag = UnitTag {
        i: 0,
        two_pi_i: 0,
        gamma_neg_half: 0,
    };
    pub const I: UnitTag = UnitTag {
        i: 1,
        two_pi_i: 0,
        gamma_neg_half: 0,
    };
    pub const TWO_PI_I: UnitTag = UnitTag {
        i: 0,
        two_pi_i: 1,
        gamma_neg_half: 0,
    };
    pub const GAMMA_NEG_HALF: UnitTag = UnitTag {
        i: 0,
        two_pi_i: 0,
        gamma_neg_half: 1,
    };

    pub fn pow(self, e: i32) -> UnitTag {
        UnitTag {
            i: self.i * e,
            two_pi_i: self.two_pi_i * e,
            gamma_neg_half: self.gamma_neg_half * e,
        }
    }

    pub fn inverse(self) -> UnitTag {
        self.pow(-1)
    }

    /// `i^4 = 1` is the only relation applied.
    pub fn normalized(self) -> UnitTag {
        UnitTag {
            i: self.i.rem_euclid(4),
            ..self
        }
    }

    /// The tag after `i`-normalization, as a sign if it is `+-1`.
    pub fn as_sign(self) -> Option<i64> {
        let t = self.normalized();
        if t.two_pi_i != 0 || t.gamma_neg_half != 0 {
            return None;
        }
        match t.i {
            0 => Some(1),
            2 => Some(-1),
            _ => None,
        }
    }

    pub fn is_one(self) -> bool {
        self.normalized() == UnitTag::ONE
    }

    pub fn numeric(self) -> Complex64 {
        let i = Complex64::i().powi(self.i.rem_euclid(4));
        let two_pi_i = Complex64::new(0.0, 2.0 * PI).powi(self.two_pi_i);
        let gamma = (-2.0 * PI.sqrt()).powi(self.gamma_neg_half);
        i * two_pi_i * gamma
    }
}

impl Mul for UnitTag {
    type Output = UnitTag;
    fn mul(self, rhs: UnitTag) -> UnitTag {
        UnitTag {
            i: self.i + rhs.i,
            two_pi_i: self.two_pi_i + rhs.two_pi_i,
            gamma_neg_half: self.gamma_neg_half + rhs.gamma_neg_half,
        }
    }
}

impl fmt::Display for UnitTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        let t = self.normalized();
        if t.i != 0 {
            parts.push(format!("i^{}", t.i));
        }
        if t.two_pi_i != 0 {
            parts.push(format!("(2*pi*i)^{}", t.two_pi_i));
        }
        if t.gamma_neg_half != 0 {
            parts.push(format!("Gamma(-1/2)^{}", t.gamma_neg_half));
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("*"))
        }
    }
}

/// An exact value times a formal unit factor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tagged<T> {
    pub tag: UnitTag,
    pub value: T,
}

impl<T> Tagged<T> {
    pub fn new(tag: UnitTag, value: T) -> Self {
        Tagged { tag, value }
    }

    pub fn untagged(value: T) -> Self {
        Tagged {
            tag: UnitTag::ONE,
            value,
        }
    }

    /// The value, provided the tag has cancelled to 1.
    pub fn into_exact(self) -> Result<T, UncancelledTag> {
        if self.tag.is_one() {
            Ok(self.value)
        } else {
            Err(UncancelledTag(self.tag))
        }
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Tagged<U> {
        Tagged {
            tag: self.tag,
            value: f(self.value),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cancellation() {
        let t = UnitTag::GAMMA_NEG_HALF * UnitTag::GAMMA_NEG_HALF.inverse();
        assert!(t.is_one());
        assert!(UnitTag::I.pow(4).is_one());
        assert_eq!(UnitTag::I.pow(2).as_sign(), Some(-1));
        assert!(Tagged::new(UnitTag::I, 3).into_exact().is_err());
        assert_eq!(Tagged::new(UnitTag::I.pow(-4), 3).into_exact(), Ok(3));
    }

    #[test]
    fn numeric_values() {
        let g = UnitTag::GAMMA_NEG_HALF.numeric();
        assert!((g.re + 3.5449077018110318).abs() < 1e-14);
        let v = (UnitTag::I * UnitTag::TWO_PI_I).numeric();
        assert!((v.re + 2.0 * PI).abs() < 1e-14 && v.im.abs() < 1e-14);
    }
}
