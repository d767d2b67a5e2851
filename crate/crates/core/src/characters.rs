//! Dirichlet characters with exact cyclotomic values.
//!
//! Every character carries its full value table modulo its modulus, so
//! evaluation is an index lookup. `chi(0) = 0` for every character, including
//! the trivial character of modulus 1.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::{parse_rational, CyclotomicNumber};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CharacterError {
    #[error("{0} is not a fundamental discriminant")]
    NotDiscriminant(i64),
    #[error("modulus must be positive")]
    ZeroModulus,
    #[error("table for modulus {modulus} has {got} entries")]
    WrongLength { modulus: u64, got: usize },
    #[error("value at residue {0} must vanish (not a unit)")]
    ValueOnNonUnit(u64),
    #[error("value at unit residue {0} is not a root of unity of order dividing phi(M)")]
    NonUnitValue(u64),
    #[error("table is not multiplicative: chi({a}*{b}) != chi({a})*chi({b})")]
    NonMultiplicative { a: u64, b: u64 },
    #[error("cannot parse character spec: {0}")]
    Parse(String),
}

/// Kronecker symbol `(d / n)` for arbitrary integers.
pub fn kronecker(d: i64, n: i64) -> i8 {
    if n == 0 {
        return if d == 1 || d == -1 { 1 } else { 0 };
    }
    if d % 2 == 0 && n % 2 == 0 {
        return 0;
    }
    let mut result: i8 = 1;
    let mut n = n;
    if n < 0 {
        n = -n;
        if d < 0 {
            result = -result;
        }
    }
    let mut v = 0;
    while n % 2 == 0 {
        n /= 2;
        v += 1;
    }
    if v % 2 == 1 {
        // (d/2): d odd here
        let r = d.rem_euclid(8);
        if r == 3 || r == 5 {
            result = -result;
        }
    }
    result * jacobi(d.rem_euclid(n), n)
}

/// Jacobi symbol `(a / n)` for odd positive `n`.
fn jacobi(a: i64, n: i64) -> i8 {
    debug_assert!(n > 0 && n % 2 == 1);
    let mut a = a.rem_euclid(n);
    let mut n = n;
    let mut t: i8 = 1;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

fn is_squarefree(mut n: u64) -> bool {
    let mut p = 2;
    while p * p <= n {
        if n % (p * p) == 0 {
            return false;
        }
        if n % p == 0 {
            n /= p;
        }
        p += 1;
    }
    true
}

/// Whether `d` is the discriminant of a quadratic field (or 1).
pub fn is_fundamental_discriminant(d: i64) -> bool {
    if d == 1 {
        return true;
    }
    if d == 0 {
        return false;
    }
    match d.rem_euclid(4) {
        1 => is_squarefree(d.unsigned_abs()),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && is_squarefree(m.unsigned_abs())
        }
        _ => false,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CharacterKind {
    Trivial,
    Kronecker(i64),
    Table,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DirichletCharacter {
    modulus: u64,
    kind: CharacterKind,
    odd: bool,
    order: u64,
    values: Vec<CyclotomicNumber>,
}

impl PartialEq for DirichletCharacter {
    fn eq(&self, other: &Self) -> bool {
        self.modulus == other.modulus && self.values == other.values
    }
}

impl DirichletCharacter {
    /// The character of modulus 1, `n -> 1` for `n != 0`.
    pub fn one() -> Self {
        DirichletCharacter {
            modulus: 1,
            kind: CharacterKind::Trivial,
            odd: false,
            order: 1,
            values: vec![CyclotomicNumber::one()],
        }
    }

    /// The principal character modulo `m`.
    pub fn principal(m: u64) -> Result<Self, CharacterError> {
        if m == 0 {
            return Err(CharacterError::ZeroModulus);
        }
        if m == 1 {
            return Ok(Self::one());
        }
        let values = (0..m)
            .map(|r| {
                if r.gcd(&m) == 1 {
                    CyclotomicNumber::one()
                } else {
                    CyclotomicNumber::zero()
                }
            })
            .collect();
        Ok(DirichletCharacter {
            modulus: m,
            kind: CharacterKind::Trivial,
            odd: false,
            order: 1,
            values,
        })
    }

    /// The quadratic character `n -> (D / n)` of a fundamental discriminant.
    /// `D = 2` is accepted as an alias for `D = 8`.
    pub fn kronecker(d: i64) -> Result<Self, CharacterError> {
        if d == 1 {
            return Ok(Self::one());
        }
        let disc = if d == 2 { 8 } else { d };
        if !is_fundamental_discriminant(disc) {
            return Err(CharacterError::NotDiscriminant(d));
        }
        let m = disc.unsigned_abs();
        let values: Vec<_> = (0..m)
            .map(|r| CyclotomicNumber::from_int(kronecker(disc, r as i64) as i64))
            .collect();
        Ok(DirichletCharacter {
            modulus: m,
            kind: CharacterKind::Kronecker(d),
            odd: disc < 0,
            order: 2,
            values,
        })
    }

    /// A character from its full value table `chi(0), ..., chi(M-1)`,
    /// validated exhaustively.
    pub fn from_table(m: u64, values: Vec<CyclotomicNumber>) -> Result<Self, CharacterError> {
        if m == 0 {
            return Err(CharacterError::ZeroModulus);
        }
        if values.len() as u64 != m {
            return Err(CharacterError::WrongLength {
                modulus: m,
                got: values.len(),
            });
        }
        let phi = crate::exactnum::euler_phi(m);
        for (r, v) in values.iter().enumerate() {
            let r = r as u64;
            let unit = r.gcd(&m) == 1;
            if !unit {
                if !v.is_zero() {
                    return Err(CharacterError::ValueOnNonUnit(r));
                }
            } else if !v.is_root_of_unity_dividing(phi) {
                return Err(CharacterError::NonUnitValue(r));
            }
        }
        for a in 1..m {
            if a.gcd(&m) != 1 {
                continue;
            }
            for b in a..m {
                if b.gcd(&m) != 1 {
                    continue;
                }
                let ab = ((a as u128 * b as u128) % m as u128) as usize;
                if values[ab] != &values[a as usize] * &values[b as usize] {
                    return Err(CharacterError::NonMultiplicative { a, b });
                }
            }
        }
        let order = values
            .iter()
            .filter_map(|v| v.root_order())
            .fold(1u64, |acc, o| acc.lcm(&o));
        let odd = m > 2 && values[(m - 1) as usize] == CyclotomicNumber::from_int(-1);
        Ok(DirichletCharacter {
            modulus: m,
            kind: CharacterKind::Table,
            odd,
            order,
            values,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn kind(&self) -> &CharacterKind {
        &self.kind
    }

    pub fn is_odd(&self) -> bool {
        self.odd
    }

    pub fn is_even(&self) -> bool {
        !self.odd
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// True only for the character of modulus 1.
    pub fn is_trivial(&self) -> bool {
        self.modulus == 1
    }

    /// `chi(n)`; zero at `n = 0`.
    pub fn eval(&self, n: i64) -> CyclotomicNumber {
        self.value(n).clone()
    }

    /// Borrowing form of [`eval`](Self::eval).
    pub fn value(&self, n: i64) -> &CyclotomicNumber {
        static ZERO: std::sync::OnceLock<CyclotomicNumber> = std::sync::OnceLock::new();
        if n == 0 {
            return ZERO.get_or_init(CyclotomicNumber::zero);
        }
        let r = n.rem_euclid(self.modulus as i64) as usize;
        &self.values[r]
    }

    /// `chi(n)` as an integer when the character is rational-valued.
    pub fn int_value(&self, n: i64) -> Option<i64> {
        use num_traits::ToPrimitive;
        let v = self.value(n).as_rational()?;
        if v.is_integer() {
            v.to_integer().to_i64()
        } else {
            None
        }
    }

    pub fn is_rational_valued(&self) -> bool {
        self.values.iter().all(|v| v.as_rational().is_some())
    }

    pub fn conjugate(&self) -> Self {
        DirichletCharacter {
            modulus: self.modulus,
            kind: self.kind.clone(),
            odd: self.odd,
            order: self.order,
            values: self.values.iter().map(|v| v.conjugate()).collect(),
        }
    }

    /// Canonical spec string accepted by [`FromStr`].
    pub fn spec(&self) -> String {
        match self.kind {
            CharacterKind::Trivial => format!("trivial:{}", self.modulus),
            CharacterKind::Kronecker(d) => format!("kronecker:{}", d),
            CharacterKind::Table => {
                let vals: Vec<String> = self.values.iter().map(value_spec).collect();
                format!("table:{}:{}", self.modulus, vals.join(","))
            }
        }
    }
}

fn value_spec(v: &CyclotomicNumber) -> String {
    if let Some(r) = v.as_rational() {
        return r.to_string();
    }
    // a folded conductor 2m hides roots of order 2m
    let n = v.root_order().unwrap_or(v.conductor());
    for k in 0..n as i64 {
        let z = CyclotomicNumber::root_of_unity(n, k);
        if &z == v {
            return format!("zeta({})^{}", n, k);
        }
    }
    v.to_string()
}

fn parse_value(s: &str) -> Result<CyclotomicNumber, CharacterError> {
    let s = s.trim();
    let err = || CharacterError::Parse(format!("bad character value {s:?}"));
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) if rest.trim_start().starts_with("zeta") => (true, rest.trim_start()),
        _ => (false, s),
    };
    if let Some(rest) = body.strip_prefix("zeta(") {
        let close = rest.find(')').ok_or_else(err)?;
        let n: u64 = rest[..close].trim().parse().map_err(|_| err())?;
        if n == 0 {
            return Err(err());
        }
        let tail = rest[close + 1..].trim();
        let k: i64 = if tail.is_empty() {
            1
        } else {
            tail.strip_prefix('^')
                .ok_or_else(err)?
                .trim()
                .parse()
                .map_err(|_| err())?
        };
        let z = CyclotomicNumber::root_of_unity(n, k);
        return Ok(if neg { -z } else { z });
    }
    parse_rational(body)
        .map(CyclotomicNumber::from_rational)
        .ok_or_else(err)
}

impl FromStr for DirichletCharacter {
    type Err = CharacterError;

    /// Accepts `kronecker:D`, `trivial:M` and `table:M:v0,v1,...` where each
    /// value is `p/q` or `zeta(n)^k` (optionally negated).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let perr = || CharacterError::Parse(s.to_string());
        let (head, rest) = s.split_once(':').ok_or_else(perr)?;
        match head.trim() {
            "kronecker" => {
                let d: i64 = rest.trim().parse().map_err(|_| perr())?;
                Self::kronecker(d)
            }
            "trivial" => {
                let m: u64 = rest.trim().parse().map_err(|_| perr())?;
                Self::principal(m)
            }
            "table" => {
                let (m, vals) = rest.split_once(':').ok_or_else(perr)?;
                let m: u64 = m.trim().parse().map_err(|_| perr())?;
                let values = vals
                    .split(',')
                    .map(parse_value)
                    .collect::<Result<Vec<_>, _>>()?;
                Self::from_table(m, values)
            }
            _ => Err(perr()),
        }
    }
}

impl fmt::Display for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spec())
    }
}
