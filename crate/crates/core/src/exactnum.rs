//! Exact scalars: arbitrary-precision rationals and elements of cyclotomic
//! fields `Q(zeta_n)`.
//!
//! A [`CyclotomicNumber`] of conductor `n` is stored as its coefficient vector
//! in the power basis `1, zeta, ..., zeta^(phi(n)-1)`, i.e. reduced modulo the
//! `n`-th cyclotomic polynomial. This representation is unique, so equality is
//! a coefficient comparison once both sides live at a common conductor.
//!
//! Conductors `n = 2m` with `m` odd are folded to `m` on construction
//! (`Q(zeta_2m) = Q(zeta_m)`), which keeps every rational-valued quantity at
//! conductor 1 where multiplication is a single rational product.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Arbitrary-precision rational number in lowest terms.
pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let r = Rational::from_str(s).ok()?;
    Some(r)
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // Scale down huge numerators/denominators before dividing.
            let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(1000);
            let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
            let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
            n / d
        }
    }
}

/// Euler's totient.
pub fn euler_phi(n: u64) -> u64 {
    let mut n = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// The `n`-th cyclotomic polynomial, coefficients low to high (monic).
pub fn cyclotomic_polynomial(n: u64) -> Arc<Vec<i64>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 = prod_{d | n} Phi_d(x)
    let mut poly = vec![0i64; n as usize + 1];
    poly[0] = -1;
    poly[n as usize] = 1;
    for d in divisors(n) {
        if d == n {
            continue;
        }
        let phi_d = cyclotomic_polynomial(d);
        poly = exact_monic_quotient(&poly, &phi_d);
    }
    let poly = Arc::new(poly);
    cache.lock().unwrap().insert(n, poly.clone());
    poly
}

fn exact_monic_quotient(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let qlen = num.len() - dn;
    let mut quot = vec![0i64; qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dn];
        quot[i] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[i + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

fn fold_conductor(n: u64) -> u64 {
    if n % 4 == 2 {
        n / 2
    } else {
        n
    }
}

/// An element of `Q(zeta_n)` in canonical power-basis form.
#[derive(Clone, Debug)]
pub struct CyclotomicNumber {
    conductor: u64,
    coeffs: Vec<Rational>,
}

impl CyclotomicNumber {
    pub fn zero() -> Self {
        Self::from_rational(Rational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_rational(r: Rational) -> Self {
        CyclotomicNumber {
            conductor: 1,
            coeffs: vec![r],
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(int(n))
    }

    /// `zeta_conductor ^ power` for the canonical primitive root
    /// `zeta_n = exp(2 pi i / n)`.
    pub fn root_of_unity(conductor: u64, power: i64) -> Self {
        assert!(conductor >= 1, "conductor must be positive");
        let k = power.rem_euclid(conductor as i64) as u64;
        if conductor % 4 == 2 {
            // zeta_{2m} = -zeta_m^{(m+1)/2} for odd m
            let m = conductor / 2;
            let e = ((k * ((m + 1) / 2)) % m) as i64;
            let r = Self::root_of_unity(m, e);
            return if k % 2 == 1 { -r } else { r };
        }
        let mut coeffs = vec![Rational::zero(); k as usize + 1];
        coeffs[k as usize] = Rational::one();
        Self::from_poly(conductor, coeffs)
    }

    /// `exp(2 pi i r)` for rational `r`.
    pub fn exp_2pi_i(r: &Rational) -> Self {
        let den = r.denom().to_u64().expect("root of unity order too large");
        let num = (r.numer() % r.denom()).to_i64().unwrap();
        Self::root_of_unity(den, num)
    }

    /// Builds from an arbitrary polynomial in `zeta_n`, reducing it.
    pub fn from_poly(conductor: u64, mut poly: Vec<Rational>) -> Self {
        let folded = fold_conductor(conductor);
        if folded != conductor {
            // Substitute zeta_{2m}^k = (-1)^k zeta_m^{k(m+1)/2}.
            let m = folded;
            let mut out = vec![Rational::zero(); m as usize];
            for (k, c) in poly.into_iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let e = ((k as u64 * ((m + 1) / 2)) % m) as usize;
                if k % 2 == 1 {
                    out[e] -= c;
                } else {
                    out[e] += c;
                }
            }
            return Self::from_poly(m, out);
        }
        let n = conductor;
        let phi = cyclotomic_polynomial(n);
        let deg = phi.len() - 1;
        // First fold modulo x^n - 1, then reduce modulo Phi_n.
        if poly.len() > n as usize {
            let mut folded = vec![Rational::zero(); n as usize];
            for (k, c) in poly.into_iter().enumerate() {
                if !c.is_zero() {
                    folded[k % n as usize] += c;
                }
            }
            poly = folded;
        }
        for i in (deg..poly.len()).rev() {
            if poly[i].is_zero() {
                continue;
            }
            let c = std::mem::replace(&mut poly[i], Rational::zero());
            for (j, &pj) in phi.iter().enumerate().take(deg) {
                if pj != 0 {
                    let t = &c * BigInt::from(pj);
                    poly[i - deg + j] -= t;
                }
            }
        }
        poly.resize(deg, Rational::zero());
        CyclotomicNumber {
            conductor: n,
            coeffs: poly,
        }
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    /// Coefficients in the power basis of `zeta_conductor`.
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The value as a rational number, if it is one.
    pub fn as_rational(&self) -> Option<&Rational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    /// Re-expresses `self` in `Q(zeta_target)`; `target` must be a multiple
    /// of the conductor.
    pub fn lift(&self, target: u64) -> Self {
        let target = fold_conductor(target);
        if target == self.conductor {
            return self.clone();
        }
        assert!(
            target % self.conductor == 0,
            "cannot lift conductor {} to {}",
            self.conductor,
            target
        );
        let step = (target / self.conductor) as usize;
        let mut poly = vec![Rational::zero(); (self.coeffs.len() - 1) * step + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            poly[k * step] = c.clone();
        }
        Self::from_poly(target, poly)
    }

    fn common_conductor(&self, other: &Self) -> u64 {
        fold_conductor(self.conductor.lcm(&other.conductor))
    }

    fn binary<F>(&self, other: &Self, f: F) -> Self
    where
        F: Fn(&Self, &Self) -> Self,
    {
        if self.conductor == other.conductor {
            f(self, other)
        } else {
            let n = self.common_conductor(other);
            f(&self.lift(n), &other.lift(n))
        }
    }

    /// The Galois automorphism `zeta -> zeta^k`, `gcd(k, n) = 1`.
    pub fn galois(&self, k: i64) -> Self {
        let n = self.conductor;
        if n == 1 {
            return self.clone();
        }
        let k = k.rem_euclid(n as i64) as usize;
        let mut poly = vec![Rational::zero(); n as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                poly[(i * k) % n as usize] += c;
            }
        }
        Self::from_poly(n, poly)
    }

    /// Complex conjugation, `zeta -> zeta^{-1}`.
    pub fn conjugate(&self) -> Self {
        self.galois(-1)
    }

    /// Field inverse via the norm: `a^{-1} = prod_{k != 1} sigma_k(a) / N(a)`.
    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.conductor == 1 {
            return Some(Self::from_rational(self.coeffs[0].recip()));
        }
        let n = self.conductor as i64;
        let mut others = Self::one();
        for k in 2..n {
            if k.gcd(&n) == 1 {
                others = &others * &self.galois(k);
            }
        }
        let norm = &others * self;
        let norm = norm.as_rational()?.clone();
        Some(others.scale(&norm.recip()))
    }

    pub fn scale(&self, r: &Rational) -> Self {
        CyclotomicNumber {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Whether `self` is a root of unity whose order divides `exponent`.
    pub fn is_root_of_unity_dividing(&self, exponent: u64) -> bool {
        self.pow(exponent).is_one()
    }

    /// Multiplicative order if `self` is a root of unity.
    pub fn root_order(&self) -> Option<u64> {
        if self.is_zero() {
            return None;
        }
        // Roots of unity in Q(zeta_n) have order dividing lcm(2, n).
        let bound = 2u64.lcm(&self.conductor);
        let mut acc = self.clone();
        for k in 1..=bound {
            if acc.is_one() {
                return Some(k);
            }
            acc = &acc * self;
        }
        None
    }

    /// Complex embedding sending `zeta_n` to `exp(2 pi i / n)`, evaluated in
    /// double precision.
    pub fn embed(&self) -> Complex64 {
        let n = self.conductor as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let angle = 2.0 * std::f64::consts::PI * k as f64 / n;
            acc += Complex64::from_polar(rational_to_f64(c), angle);
        }
        acc
    }

    /// Like [`embed`](Self::embed) with an explicit working precision in bits;
    /// only double precision is available.
    pub fn embed_with_precision(&self, bits: u32) -> Option<Complex64> {
        if (1..=53).contains(&bits) {
            Some(self.embed())
        } else {
            None
        }
    }

    /// Common denominator of all coefficients.
    pub fn denominator_lcm(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }
}

impl PartialEq for CyclotomicNumber {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor == other.conductor {
            self.coeffs == other.coeffs
        } else {
            let n = self.common_conductor(other);
            self.lift(n).coeffs == other.lift(n).coeffs
        }
    }
}

impl Eq for CyclotomicNumber {}

impl From<Rational> for CyclotomicNumber {
    fn from(r: Rational) -> Self {
        Self::from_rational(r)
    }
}

impl From<i64> for CyclotomicNumber {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl<'a> Add<&'a CyclotomicNumber> for &'a CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn add(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        self.binary(rhs, |a, b| CyclotomicNumber {
            conductor: a.conductor,
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect(),
        })
    }
}

impl<'a> Sub<&'a CyclotomicNumber> for &'a CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn sub(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        self.binary(rhs, |a, b| CyclotomicNumber {
            conductor: a.conductor,
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x - y).collect(),
        })
    }
}

impl<'a> Mul<&'a CyclotomicNumber> for &'a CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn mul(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        if self.conductor == 1 && rhs.conductor == 1 {
            return CyclotomicNumber::from_rational(&self.coeffs[0] * &rhs.coeffs[0]);
        }
        if rhs.conductor == 1 {
            return self.scale(&rhs.coeffs[0]);
        }
        if self.conductor == 1 {
            return rhs.scale(&self.coeffs[0]);
        }
        self.binary(rhs, |a, b| {
            let mut poly = vec![Rational::zero(); a.coeffs.len() + b.coeffs.len() - 1];
            for (i, x) in a.coeffs.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                for (j, y) in b.coeffs.iter().enumerate() {
                    if !y.is_zero() {
                        poly[i + j] += x * y;
                    }
                }
            }
            CyclotomicNumber::from_poly(a.conductor, poly)
        })
    }
}

impl Neg for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(self) -> CyclotomicNumber {
        CyclotomicNumber {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(mut self) -> CyclotomicNumber {
        for c in &mut self.coeffs {
            *c = -std::mem::take(c);
        }
        self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<CyclotomicNumber> for CyclotomicNumber {
            type Output = CyclotomicNumber;
            fn $m(self, rhs: CyclotomicNumber) -> CyclotomicNumber {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a CyclotomicNumber> for CyclotomicNumber {
            type Output = CyclotomicNumber;
            fn $m(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl AddAssign<&CyclotomicNumber> for CyclotomicNumber {
    fn add_assign(&mut self, rhs: &CyclotomicNumber) {
        if self.conductor == rhs.conductor {
            for (x, y) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
                *x += y;
            }
        } else {
            *self = &*self + rhs;
        }
    }
}

impl SubAssign<&CyclotomicNumber> for CyclotomicNumber {
    fn sub_assign(&mut self, rhs: &CyclotomicNumber) {
        if self.conductor == rhs.conductor {
            for (x, y) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
                *x -= y;
            }
        } else {
            *self = &*self - rhs;
        }
    }
}

impl Zero for CyclotomicNumber {
    fn zero() -> Self {
        CyclotomicNumber::zero()
    }
    fn is_zero(&self) -> bool {
        CyclotomicNumber::is_zero(self)
    }
}

impl One for CyclotomicNumber {
    fn one() -> Self {
        CyclotomicNumber::one()
    }
}

impl fmt::Display for CyclotomicNumber {
    /// Rational values print as `p/q`; others as a sum of `c*zeta(n)^k` terms.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return write!(f, "{}", r);
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() {
                ("-", -c)
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", sign)?;
            }
            first = false;
            match k {
                0 => write!(f, "{}", mag)?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{}*", mag)?;
                    }
                    write!(f, "zeta({})", self.conductor)?;
                    if k > 1 {
                        write!(f, "^{}", k)?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct CyclotomicRepr {
    conductor: u64,
    coeffs: Vec<String>,
}

impl Serialize for CyclotomicNumber {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CyclotomicRepr {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| c.to_string()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CyclotomicNumber {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = CyclotomicRepr::deserialize(d)?;
        if repr.conductor == 0 {
            return Err(D::Error::custom("conductor must be positive"));
        }
        let coeffs = repr
            .coeffs
            .iter()
            .map(|s| parse_rational(s).ok_or_else(|| D::Error::custom(format!("bad rational {s:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        let expected = euler_phi(repr.conductor) as usize;
        if coeffs.len() != expected {
            return Err(D::Error::custom(format!(
                "conductor {} needs {} coefficients, got {}",
                repr.conductor,
                expected,
                coeffs.len()
            )));
        }
        Ok(CyclotomicNumber::from_poly(repr.conductor, coeffs))
    }
}

/// Serde adapter writing a rational as `"p/q"`.
pub mod rational_string {
    use super::{parse_rational, Rational};
    use serde::de::Error;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).ok_or_else(|| D::Error::custom(format!("bad rational {s:?}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u64, k: i64) -> CyclotomicNumber {
        CyclotomicNumber::root_of_unity(n, k)
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(*cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(15).len() - 1, 8);
    }

    #[test]
    fn root_examples() {
        assert_eq!(z(4, 2), CyclotomicNumber::from_int(-1));
        assert_eq!(&z(3, 1) + &z(3, 2), CyclotomicNumber::from_int(-1));
        assert!(z(7, 0).is_one());
        let e = z(8, 1).embed();
        assert!((e.re - 0.5f64.sqrt()).abs() < 1e-15 && (e.im - 0.5f64.sqrt()).abs() < 1e-15);
        let e = z(3, 1).embed();
        assert!((e.re + 0.5).abs() < 1e-15 && (e.im - 3f64.sqrt() / 2.0).abs() < 1e-15);
        let e = z(4, 1).embed();
        assert!(e.re.abs() < 1e-15 && (e.im - 1.0).abs() < 1e-15);
    }

    #[test]
    fn conductor_two_mod_four_folds() {
        assert_eq!(z(2, 1).conductor(), 1);
        assert_eq!(z(6, 1).conductor(), 3);
        let e = z(6, 1).embed();
        assert!((e.re - 0.5).abs() < 1e-14 && (e.im - 3f64.sqrt() / 2.0).abs() < 1e-14);
        let e = z(10, 3).embed();
        let t = 2.0 * std::f64::consts::PI * 3.0 / 10.0;
        assert!((e.re - t.cos()).abs() < 1e-14 && (e.im - t.sin()).abs() < 1e-14);
    }

    #[test]
    fn products() {
        assert_eq!(&z(4, 1) * &z(4, 1), CyclotomicNumber::from_int(-1));
        assert!((&z(3, 1) * &z(3, 2)).is_one());
        let a = &CyclotomicNumber::one() + &z(5, 1);
        let b = &CyclotomicNumber::one() + &z(5, 4);
        let p = (&a * &b).embed();
        let q = a.embed() * b.embed();
        assert!((p - q).norm() < 1e-12);
        // mixed conductors lift to the lcm
        let m = &z(4, 1) * &z(3, 1);
        assert_eq!(m.conductor(), 12);
        assert_eq!(m, z(12, 7));
    }

    #[test]
    fn inverse_and_conjugate() {
        let a = &CyclotomicNumber::from_int(2) + &z(7, 3);
        let inv = a.inverse().unwrap();
        assert!((&a * &inv).is_one());
        assert_eq!(a.conjugate().conjugate(), a);
        assert_eq!(z(9, 2).conjugate(), z(9, 7));
        let one_minus = &CyclotomicNumber::one() - &z(3, 1);
        assert!((&one_minus * &one_minus.inverse().unwrap()).is_one());
        assert!(CyclotomicNumber::zero().inverse().is_none());
    }

    #[test]
    fn root_orders() {
        assert_eq!(z(12, 3).root_order(), Some(4));
        assert_eq!(z(5, 2).root_order(), Some(5));
        assert_eq!(CyclotomicNumber::from_int(-1).root_order(), Some(2));
        assert_eq!(CyclotomicNumber::from_int(2).root_order(), None);
    }

    #[test]
    fn json_schema() {
        let a = &z(4, 1).scale(&rat(3, 2)) + &CyclotomicNumber::from_int(-1);
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"{"conductor":4,"coeffs":["-1","3/2"]}"#);
        let back: CyclotomicNumber = serde_json::from_str(&s).unwrap();
        assert_eq!(back, a);
        assert!(serde_json::from_str::<CyclotomicNumber>(r#"{"conductor":4,"coeffs":["1"]}"#).is_err());
    }

    #[test]
    fn display() {
        assert_eq!(CyclotomicNumber::from_rational(rat(-3, 4)).to_string(), "-3/4");
        assert_eq!(z(4, 1).to_string(), "zeta(4)");
        let a = &z(5, 2).scale(&rat(1, 2)) - &CyclotomicNumber::one();
        assert_eq!(a.to_string(), "-1 + 1/2*zeta(5)^2");
    }
}
