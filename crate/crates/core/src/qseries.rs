//! Truncated exact series in a fractional power of `q`.
//!
//! A [`QSeries`] stores coefficients for exponents `k/den` with
//! `offset <= k < prec`. Everything below `offset` is known to vanish,
//! everything at or above `prec` is unknown. Each operation derives the
//! precision it can actually guarantee.

use std::borrow::Cow;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::{CyclotomicNumber, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("divisor is zero to its precision")]
    ZeroDivisor,
    #[error("leading coefficient of divisor is not invertible")]
    NonUnitLeading,
    #[error("operator needs integer exponents (den = {0})")]
    FractionalExponents(u64),
    #[error("x-exponent {0} outside the stored range")]
    OutOfRange(String),
    #[error("weight must exceed 1 and level must be positive")]
    BadSturmInput,
    #[error("{0}")]
    Invalid(String),
}

fn ceil_div(a: i64, b: i64) -> i64 {
    -((-a).div_euclid(b))
}

/// Truncated series `sum c_k q^{k/den}`, `offset <= k < prec`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QSeries {
    den: u64,
    offset: i64,
    prec: i64,
    coeffs: Vec<CyclotomicNumber>,
}

impl QSeries {
    /// The zero series known up to (not including) `q^{prec/den}`.
    pub fn zero(den: u64, prec: i64) -> Self {
        assert!(den >= 1);
        QSeries {
            den,
            offset: prec,
            prec,
            coeffs: Vec::new(),
        }
    }

    pub fn one(prec: i64) -> Self {
        Self::monomial(1, 0, CyclotomicNumber::one(), prec)
    }

    /// `c q^{exp/den}` known to precision `prec`.
    pub fn monomial(den: u64, exp: i64, c: CyclotomicNumber, prec: i64) -> Self {
        Self::from_terms(den, prec, [(exp, c)])
    }

    /// Dense series from coefficients starting at exponent numerator `offset`;
    /// precision is `offset + coeffs.len()`.
    pub fn from_coeffs(den: u64, offset: i64, coeffs: Vec<CyclotomicNumber>) -> Self {
        assert!(den >= 1);
        QSeries {
            den,
            offset,
            prec: offset + coeffs.len() as i64,
            coeffs,
        }
    }

    /// Sparse constructor: terms at or above `prec` are dropped, repeated
    /// exponents accumulate.
    pub fn from_terms<I>(den: u64, prec: i64, terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, CyclotomicNumber)>,
    {
        let mut map: BTreeMap<i64, CyclotomicNumber> = BTreeMap::new();
        for (e, c) in terms {
            if e >= prec || c.is_zero() {
                continue;
            }
            *map.entry(e).or_insert_with(CyclotomicNumber::zero) += &c;
        }
        let offset = match map.keys().next() {
            Some(&e) => e,
            None => return Self::zero(den, prec),
        };
        let mut coeffs = vec![CyclotomicNumber::zero(); (prec - offset) as usize];
        for (e, c) in map {
            coeffs[(e - offset) as usize] = c;
        }
        QSeries {
            den,
            offset,
            prec,
            coeffs,
        }
    }

    pub fn from_rational_terms<I>(den: u64, prec: i64, terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, Rational)>,
    {
        Self::from_terms(
            den,
            prec,
            terms
                .into_iter()
                .map(|(e, r)| (e, CyclotomicNumber::from_rational(r))),
        )
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    /// Exponent numerators `< prec` are known.
    pub fn prec(&self) -> i64 {
        self.prec
    }

    /// Precision as an exponent, `prec/den`.
    pub fn prec_exponent(&self) -> Rational {
        Rational::new(BigInt::from(self.prec), BigInt::from(self.den))
    }

    pub fn coeffs(&self) -> &[CyclotomicNumber] {
        &self.coeffs
    }

    /// Coefficient of `q^{k/den}`; zero below the offset.
    ///
    /// # Panics
    /// If `k >= prec`.
    pub fn coeff(&self, k: i64) -> CyclotomicNumber {
        assert!(k < self.prec, "coefficient {k} beyond precision {}", self.prec);
        if k < self.offset {
            CyclotomicNumber::zero()
        } else {
            self.coeffs[(k - self.offset) as usize].clone()
        }
    }

    /// Coefficient of `q^e` for a rational exponent, if known.
    pub fn coeff_at(&self, e: &Rational) -> Option<CyclotomicNumber> {
        let scaled = e * Rational::from_integer(BigInt::from(self.den));
        if !scaled.is_integer() {
            return Some(CyclotomicNumber::zero());
        }
        let k = scaled.to_integer().to_i64()?;
        (k < self.prec).then(|| self.coeff(k))
    }

    /// Iterator over `(exponent numerator, coefficient)` for nonzero terms.
    pub fn nonzero_terms(&self) -> impl Iterator<Item = (i64, &CyclotomicNumber)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.offset + i as i64, c))
    }

    /// Exponent numerator of the first nonzero coefficient.
    pub fn valuation(&self) -> Option<i64> {
        self.nonzero_terms().next().map(|(k, _)| k)
    }

    pub fn is_zero(&self) -> bool {
        self.valuation().is_none()
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().all(|c| c.as_rational().is_some())
    }

    /// Drops leading zero coefficients.
    pub fn trimmed(&self) -> Self {
        let start = self.valuation().unwrap_or(self.prec);
        let skip = (start - self.offset) as usize;
        QSeries {
            den: self.den,
            offset: start,
            prec: self.prec,
            coeffs: self.coeffs[skip..].to_vec(),
        }
    }

    /// Forgets coefficients at exponent numerators `>= prec`.
    pub fn truncate(&self, prec: i64) -> Self {
        if prec >= self.prec {
            return self.clone();
        }
        if prec <= self.offset {
            return Self::zero(self.den, prec);
        }
        QSeries {
            den: self.den,
            offset: self.offset,
            prec,
            coeffs: self.coeffs[..(prec - self.offset) as usize].to_vec(),
        }
    }

    /// Same series with exponents over `new_den`, a multiple of `den`.
    pub fn with_den(&self, new_den: u64) -> Self {
        if new_den == self.den {
            return self.clone();
        }
        assert!(new_den % self.den == 0, "{} is not a multiple of {}", new_den, self.den);
        let f = (new_den / self.den) as i64;
        let offset = self.offset * f;
        let prec = self.prec * f;
        let mut coeffs = vec![CyclotomicNumber::zero(); (prec - offset) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                coeffs[i * f as usize] = c.clone();
            }
        }
        QSeries {
            den: new_den,
            offset,
            prec,
            coeffs,
        }
    }

    fn unify<'a>(a: &'a Self, b: &'a Self) -> (Cow<'a, Self>, Cow<'a, Self>) {
        let d = a.den.lcm(&b.den);
        let lift = |s: &'a Self| {
            if s.den == d {
                Cow::Borrowed(s)
            } else {
                Cow::Owned(s.with_den(d))
            }
        };
        (lift(a), lift(b))
    }

    /// Smallest denominator representing the same series; also trims
    /// leading zeros.
    pub fn canonicalize(&self) -> Self {
        let t = self.trimmed();
        let mut g = t.den;
        for (k, _) in t.nonzero_terms() {
            g = g.gcd(&k.unsigned_abs());
            if g == 1 {
                break;
            }
        }
        if g <= 1 {
            return t;
        }
        let gi = g as i64;
        let offset = ceil_div(t.offset, gi);
        let prec = ceil_div(t.prec, gi);
        let coeffs = (offset..prec).map(|k| t.coeff(k * gi)).collect();
        QSeries {
            den: t.den / g,
            offset,
            prec,
            coeffs,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = Self::unify(self, other);
        let prec = a.prec.min(b.prec);
        let offset = a.offset.min(b.offset).min(prec);
        let coeffs = (offset..prec)
            .map(|k| {
                let mut c = if k >= a.offset { a.coeff(k) } else { CyclotomicNumber::zero() };
                if k >= b.offset {
                    c += &b.coeffs[(k - b.offset) as usize];
                }
                c
            })
            .collect();
        QSeries {
            den: a.den,
            offset,
            prec,
            coeffs,
        }
    }

    pub fn neg(&self) -> Self {
        QSeries {
            den: self.den,
            offset: self.offset,
            prec: self.prec,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &CyclotomicNumber) -> Self {
        QSeries {
            den: self.den,
            offset: self.offset,
            prec: self.prec,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        QSeries {
            den: self.den,
            offset: self.offset,
            prec: self.prec,
            coeffs: self.coeffs.iter().map(|c| c.scale(r)).collect(),
        }
    }

    /// Multiplication by `q^{k/den}`.
    pub fn shift(&self, k: i64) -> Self {
        QSeries {
            den: self.den,
            offset: self.offset + k,
            prec: self.prec + k,
            coeffs: self.coeffs.clone(),
        }
    }

    /// Multiplication by `q^e` for a rational exponent.
    pub fn shift_by(&self, e: &Rational) -> Self {
        let d = self.den.lcm(&e.denom().to_u64().expect("exponent denominator too large"));
        let s = self.with_den(d);
        let k = (e * Rational::from_integer(BigInt::from(d)))
            .to_integer()
            .to_i64()
            .expect("shift too large");
        s.shift(k)
    }

    /// Exact truncated product. With valuations `va`, `vb`, the result is
    /// known below `min(Pa + vb, Pb + va)`.
    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = Self::unify(self, other);
        let va = a.valuation().unwrap_or(a.prec);
        let vb = b.valuation().unwrap_or(b.prec);
        let prec = (a.prec + vb).min(b.prec + va);
        let offset = (va + vb).min(prec);
        let mut coeffs = vec![CyclotomicNumber::zero(); (prec - offset) as usize];
        let ta: Vec<_> = a.nonzero_terms().collect();
        let tb: Vec<_> = b.nonzero_terms().collect();
        let (outer, inner) = if ta.len() <= tb.len() { (&ta, &tb) } else { (&tb, &ta) };
        for &(i, x) in outer.iter() {
            for &(j, y) in inner.iter() {
                let k = i + j;
                if k >= prec {
                    break;
                }
                let p = x * y;
                coeffs[(k - offset) as usize] += &p;
            }
        }
        QSeries {
            den: a.den,
            offset,
            prec,
            coeffs,
        }
    }

    /// Exact quotient `self / other`. With `v = val(other)`, the result is
    /// known below `min(Pa - v, Pb - 2v + val(self))`.
    pub fn div(&self, other: &Self) -> Result<Self, SeriesError> {
        let (a, b) = Self::unify(self, other);
        let vb = b.valuation().ok_or(SeriesError::ZeroDivisor)?;
        let lead = b.coeff(vb);
        let inv = lead.inverse().ok_or(SeriesError::NonUnitLeading)?;
        let va = a.valuation().unwrap_or(a.prec);
        let prec = (a.prec - vb).min(b.prec - 2 * vb + va);
        let offset = (va - vb).min(prec);
        let tail: Vec<(i64, CyclotomicNumber)> = b
            .nonzero_terms()
            .skip(1)
            .map(|(k, c)| (k - vb, c.clone()))
            .collect();
        let mut out: Vec<CyclotomicNumber> = Vec::with_capacity((prec - offset).max(0) as usize);
        for k in offset..prec {
            let mut s = if k + vb >= a.offset {
                a.coeff(k + vb)
            } else {
                CyclotomicNumber::zero()
            };
            for (i, c) in &tail {
                let j = k - i;
                if j < offset {
                    break;
                }
                let prev = &out[(j - offset) as usize];
                if !prev.is_zero() {
                    s -= &(c * prev);
                }
            }
            out.push(if s.is_zero() { s } else { &s * &inv });
        }
        Ok(QSeries {
            den: a.den,
            offset,
            prec,
            coeffs: out,
        })
    }

    /// `sum c(pn) q^n`; requires integer exponents after canonicalization.
    pub fn u_operator(&self, p: u64) -> Result<Self, SeriesError> {
        assert!(p >= 1);
        let s = if self.den == 1 { self.clone() } else { self.canonicalize() };
        if s.den != 1 {
            return Err(SeriesError::FractionalExponents(s.den));
        }
        let p = p as i64;
        let offset = ceil_div(s.offset, p);
        let prec = ceil_div(s.prec, p);
        let coeffs = (offset..prec).map(|n| s.coeff(n * p)).collect();
        Ok(QSeries {
            den: 1,
            offset,
            prec,
            coeffs,
        })
    }

    /// Substitution `q -> q^m`.
    pub fn v_operator(&self, m: u64) -> Self {
        assert!(m >= 1);
        let m = m as i64;
        let offset = self.offset * m;
        let prec = self.prec * m;
        let mut coeffs = vec![CyclotomicNumber::zero(); (prec - offset) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                coeffs[i * m as usize] = c.clone();
            }
        }
        QSeries {
            den: self.den,
            offset,
            prec,
            coeffs,
        }
    }

    /// Substitution `q -> q^t` for positive rational `t`.
    pub fn scale_exponents(&self, t: &Rational) -> Self {
        assert!(t > &Rational::zero());
        let num = t.numer().to_u64().expect("scale numerator too large");
        let tden = t.denom().to_u64().expect("scale denominator too large");
        let s = self.v_operator(num);
        QSeries {
            den: s.den * tden,
            ..s
        }
        .canonicalize()
    }

    /// Galois conjugation applied coefficientwise.
    pub fn map_coeffs(&self, f: impl Fn(&CyclotomicNumber) -> CyclotomicNumber) -> Self {
        QSeries {
            den: self.den,
            offset: self.offset,
            prec: self.prec,
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    /// First exponent numerator (over the common denominator) below the
    /// shared precision where the two series differ.
    pub fn first_difference(&self, other: &Self) -> Option<(Rational, CyclotomicNumber, CyclotomicNumber)> {
        let (a, b) = Self::unify(self, other);
        let prec = a.prec.min(b.prec);
        let start = a.offset.min(b.offset);
        for k in start..prec {
            let x = a.coeff(k);
            let y = b.coeff(k);
            if x != y {
                return Some((Rational::new(BigInt::from(k), BigInt::from(a.den)), x, y));
            }
        }
        None
    }

    /// Equality on the common known range.
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.first_difference(other).is_none()
    }

    /// Numerical value at `tau` in the upper half plane, from the stored terms.
    pub fn eval(&self, tau: Complex64) -> Complex64 {
        let two_pi_i = Complex64::new(0.0, 2.0 * std::f64::consts::PI);
        let mut acc = Complex64::zero();
        for (k, c) in self.nonzero_terms() {
            let e = k as f64 / self.den as f64;
            acc += c.embed() * (two_pi_i * tau * e).exp();
        }
        acc
    }

    /// One line per stored coefficient: `exponent<TAB>value`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            let e = Rational::new(BigInt::from(self.offset + i as i64), BigInt::from(self.den));
            s.push_str(&format!("{}\t{}\n", e, c));
        }
        s
    }
}

impl PartialEq for QSeries {
    /// Same precision and same coefficients.
    fn eq(&self, other: &Self) -> bool {
        self.prec_exponent() == other.prec_exponent() && self.agrees_with(other)
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.nonzero_terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let e = Rational::new(BigInt::from(k), BigInt::from(self.den));
            if e.is_zero() {
                write!(f, "({})", c)?;
            } else {
                write!(f, "({})*q^{}", c, e)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.prec_exponent())
    }
}

/// Sturm bound `floor(k m / 12)` with `m = [SL2(Z) : Gamma0(N)]`.
pub fn sturm_bound(weight: &Rational, level: u64) -> Result<u64, SeriesError> {
    if weight <= &Rational::one() || level == 0 {
        return Err(SeriesError::BadSturmInput);
    }
    let mut index: u64 = 1;
    let mut n = level;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut pe = 1;
            while n % p == 0 {
                n /= p;
                pe *= p;
            }
            index *= pe / p * (p + 1);
        }
        p += 1;
    }
    if n > 1 {
        index *= n + 1;
    }
    let b = (weight * Rational::from_integer(BigInt::from(index)) / Rational::from_integer(BigInt::from(12)))
        .floor()
        .to_integer();
    Ok(b.to_u64().unwrap_or(0))
}

/// Laurent polynomial in an auxiliary variable `x^{j/xden}` with truncated
/// q-series coefficients sharing a denominator and precision.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TwoVarSeries {
    xden: u64,
    xmin: i64,
    xmax: i64,
    den: u64,
    prec: i64,
    terms: BTreeMap<i64, QSeries>,
}

impl TwoVarSeries {
    /// Zero series covering x-exponents `xmin/xden ..= xmax/xden`.
    pub fn zero(xden: u64, xmin: i64, xmax: i64, den: u64, prec: i64) -> Self {
        TwoVarSeries {
            xden,
            xmin,
            xmax,
            den,
            prec,
            terms: BTreeMap::new(),
        }
    }

    pub fn xden(&self) -> u64 {
        self.xden
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn x_range(&self) -> (i64, i64) {
        (self.xmin, self.xmax)
    }

    /// Adds `x^{j/xden} * f`; the x-range grows to include `j`.
    pub fn add_term(&mut self, j: i64, f: &QSeries) {
        let f = f.with_den(self.den.lcm(&f.den()));
        if f.den() != self.den {
            self.set_den(f.den());
        }
        if f.prec() < self.prec {
            self.set_prec(f.prec());
        }
        let f = f.truncate(self.prec);
        self.xmin = self.xmin.min(j);
        self.xmax = self.xmax.max(j);
        let entry = self
            .terms
            .entry(j)
            .or_insert_with(|| QSeries::zero(f.den(), f.prec()));
        *entry = entry.add(&f);
    }

    fn set_den(&mut self, d: u64) {
        self.prec = self.prec * (d / self.den) as i64;
        self.den = d;
        for v in self.terms.values_mut() {
            *v = v.with_den(d);
        }
    }

    /// Lowers the shared precision.
    pub fn set_prec(&mut self, prec: i64) {
        self.prec = self.prec.min(prec);
        for v in self.terms.values_mut() {
            *v = v.truncate(self.prec);
        }
    }

    /// Coefficient of `x^{j/xden}`.
    pub fn extract(&self, j: i64) -> Result<QSeries, SeriesError> {
        if j < self.xmin || j > self.xmax {
            return Err(SeriesError::OutOfRange(format!("{}/{}", j, self.xden)));
        }
        Ok(self
            .terms
            .get(&j)
            .map(|f| f.truncate(self.prec))
            .unwrap_or_else(|| QSeries::zero(self.den, self.prec)))
    }

    /// Nonzero components in increasing x-exponent.
    pub fn components(&self) -> impl Iterator<Item = (i64, &QSeries)> + '_ {
        self.terms.iter().filter(|(_, f)| !f.is_zero()).map(|(&j, f)| (j, f))
    }

    /// Same series with q-exponents over `d`, a multiple of `den`.
    pub fn with_den(&self, d: u64) -> Self {
        let mut out = self.clone();
        if d != self.den {
            out.set_den(d);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.xden, other.xden, "x denominators differ");
        let d = self.den.lcm(&other.den);
        let mut out = self.with_den(d);
        let other = other.with_den(d);
        out.set_prec(other.prec);
        out.xmin = out.xmin.min(other.xmin);
        out.xmax = out.xmax.max(other.xmax);
        for (&j, f) in &other.terms {
            out.add_term(j, f);
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = v.neg();
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Multiplies by `c x^{j/xden} q^{k_num/k_den}`.
    pub fn mul_monomial(&self, j: i64, k_num: i64, k_den: u64, c: &CyclotomicNumber) -> Self {
        let d = self.den.lcm(&k_den);
        let k = k_num * (d / k_den) as i64;
        let s = self.with_den(d);
        TwoVarSeries {
            xden: self.xden,
            xmin: self.xmin + j,
            xmax: self.xmax + j,
            den: d,
            prec: s.prec + k,
            terms: s.terms.iter().map(|(&x, f)| (x + j, f.shift(k).scale(c))).collect(),
        }
    }

    /// Product with an x-independent series.
    pub fn mul_series(&self, g: &QSeries) -> Self {
        let d = self.den.lcm(&g.den());
        let s = self.with_den(d);
        let g = g.with_den(d);
        let vg = g.valuation().unwrap_or(g.prec());
        // x-powers without stored terms are O(q^prec), hence O(q^{prec+vg}) after multiplying.
        let mut prec = s.prec + vg;
        let parts: Vec<(i64, QSeries)> = s.terms.iter().map(|(&j, f)| (j, f.mul(&g))).collect();
        for (_, p) in &parts {
            prec = prec.min(p.prec());
        }
        TwoVarSeries {
            xden: self.xden,
            xmin: self.xmin,
            xmax: self.xmax,
            den: d,
            prec,
            terms: parts.into_iter().map(|(j, p)| (j, p.truncate(prec))).collect(),
        }
    }

    /// Product of two-variable series; x-exponents add.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.xden, other.xden, "x denominators differ");
        let mut acc: Option<TwoVarSeries> = None;
        for (&j, f) in &other.terms {
            let part = self.mul_series(f);
            let shifted = part.mul_monomial(j, 0, 1, &CyclotomicNumber::one());
            acc = Some(match acc {
                None => shifted,
                Some(a) => a.add(&shifted),
            });
        }
        acc.unwrap_or_else(|| {
            TwoVarSeries::zero(self.xden, self.xmin + other.xmin, self.xmax + other.xmax, self.den, self.prec.min(other.prec))
        })
    }

    /// `x -> x^{-1}`.
    pub fn invert_x(&self) -> Self {
        TwoVarSeries {
            xden: self.xden,
            xmin: -self.xmax,
            xmax: -self.xmin,
            den: self.den,
            prec: self.prec,
            terms: self.terms.iter().map(|(&j, f)| (-j, f.clone())).collect(),
        }
    }

    /// Sets `x = exp(2 pi i nu)`; every x-power outside the stored range has
    /// only terms at or beyond the precision, so the sum is exact.
    pub fn specialize_root_of_unity(&self, nu: &Rational) -> QSeries {
        let mut acc = QSeries::zero(self.den, self.prec);
        for (&j, f) in &self.terms {
            let e = nu * Rational::new(BigInt::from(j), BigInt::from(self.xden));
            let z = CyclotomicNumber::exp_2pi_i(&e);
            acc = acc.add(&f.scale(&z));
        }
        acc
    }

    /// Whether every component agrees on the shared precision.
    pub fn agrees_with(&self, other: &Self) -> Option<(i64, Rational)> {
        let lo = self.xmin.min(other.xmin);
        let hi = self.xmax.max(other.xmax);
        for j in lo..=hi {
            let a = self.terms.get(&j).cloned().unwrap_or_else(|| QSeries::zero(self.den, self.prec));
            let b = other.terms.get(&j).cloned().unwrap_or_else(|| QSeries::zero(other.den, other.prec));
            let a = a.truncate(self.prec);
            let b = b.truncate(other.prec);
            if let Some((e, _, _)) = a.first_difference(&b) {
                return Some((j, e));
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};

    fn series(den: u64, prec: i64, terms: &[(i64, i64)]) -> QSeries {
        QSeries::from_rational_terms(den, prec, terms.iter().map(|&(e, c)| (e, int(c))))
    }

    #[test]
    fn basic_products() {
        let q = series(1, 10, &[(1, 1)]);
        assert_eq!(q.mul(&q).coeff(2), CyclotomicNumber::one());
        let q8 = series(8, 40, &[(1, 1)]);
        let sq = q8.mul(&q8).canonicalize();
        assert_eq!(sq.den(), 4);
        assert_eq!(sq.coeff(1), CyclotomicNumber::one());
        let one_minus_q = series(1, 20, &[(0, 1), (1, -1)]);
        let geom = series(1, 20, &(0..20).map(|k| (k, 1)).collect::<Vec<_>>());
        let p = one_minus_q.mul(&geom);
        assert!(p.agrees_with(&QSeries::one(20)));
        assert_eq!(p.prec(), 20);
    }

    #[test]
    fn division_examples() {
        let a = series(1, 30, &[(3, 1), (5, 1)]);
        let b = series(1, 30, &[(1, 1), (3, 1)]);
        let c = a.div(&b).unwrap();
        assert_eq!(c.prec(), 29);
        assert!(c.agrees_with(&series(1, 29, &[(2, 1)])));
        let inv = QSeries::one(15).div(&series(1, 15, &[(0, 1), (1, -1)])).unwrap();
        for k in 0..15 {
            assert!(inv.coeff(k).is_one());
        }
        assert_eq!(
            QSeries::one(5).div(&QSeries::zero(1, 5)),
            Err(SeriesError::ZeroDivisor)
        );
    }

    #[test]
    fn u_and_v() {
        let f = series(1, 12, &[(1, 1), (3, 2), (9, 3)]);
        let u = f.u_operator(3).unwrap();
        assert_eq!(u.prec(), 4);
        assert!(u.agrees_with(&series(1, 4, &[(1, 2), (3, 3)])));
        assert!(f.u_operator(1).unwrap() == f);
        let g = series(1, 10, &[(1, 1), (9, -3)]);
        let v = g.v_operator(9);
        assert_eq!(v.prec(), 90);
        assert_eq!(v.coeff(81), CyclotomicNumber::from_int(-3));
        assert!(v.u_operator(9).unwrap() == g);
        assert_eq!(
            series(2, 10, &[(1, 1)]).u_operator(2),
            Err(SeriesError::FractionalExponents(2))
        );
        // den 2 but only even numerators: accepted after canonicalization
        assert!(series(2, 10, &[(2, 1)]).u_operator(1).is_ok());
    }

    #[test]
    fn sturm_examples() {
        assert_eq!(sturm_bound(&int(3), 4), Ok(1));
        assert_eq!(sturm_bound(&int(3), 64), Ok(24));
        assert_eq!(sturm_bound(&int(2), 1), Ok(0));
        assert_eq!(sturm_bound(&rat(3, 2), 4), Ok(0));
        assert_eq!(sturm_bound(&int(1), 4), Err(SeriesError::BadSturmInput));
    }

    #[test]
    fn canonical_form_keeps_values() {
        let f = series(6, 60, &[(3, 2), (9, -1), (-3, 5)]);
        let c = f.canonicalize();
        assert_eq!(c.den(), 2);
        for k in -3..60 {
            let e = rat(k, 6);
            assert_eq!(f.coeff_at(&e), c.coeff_at(&e));
        }
    }

    #[test]
    fn laurent_extraction() {
        let mut t = TwoVarSeries::zero(1, -2, 0, 1, 10);
        t.add_term(-2, &series(1, 10, &[(1, 1)]));
        t.add_term(0, &series(1, 10, &[(2, 1)]));
        assert!(t.extract(-2).unwrap().agrees_with(&series(1, 10, &[(1, 1)])));
        assert!(t.extract(-1).unwrap().is_zero());
        assert!(matches!(t.extract(3), Err(SeriesError::OutOfRange(_))));
        let only = {
            let mut s = TwoVarSeries::zero(1, -2, -2, 1, 10);
            s.add_term(-2, &series(1, 10, &[(0, 1)]));
            s
        };
        assert!(matches!(only.extract(0), Err(SeriesError::OutOfRange(_))));
        let s = only.specialize_root_of_unity(&int(0));
        assert_eq!(s.coeff(0), CyclotomicNumber::one());
    }

    #[test]
    fn two_variable_product() {
        // (x + x^{-1}) * (x - x^{-1}) = x^2 - x^{-2}
        let one = QSeries::one(5);
        let mut a = TwoVarSeries::zero(1, -1, 1, 1, 5);
        a.add_term(1, &one);
        a.add_term(-1, &one);
        let mut b = TwoVarSeries::zero(1, -1, 1, 1, 5);
        b.add_term(1, &one);
        b.add_term(-1, &one.neg());
        let p = a.mul(&b);
        assert!(p.extract(2).unwrap().coeff(0).is_one());
        assert_eq!(p.extract(-2).unwrap().coeff(0), CyclotomicNumber::from_int(-1));
        assert!(p.extract(0).unwrap().is_zero());
    }

    #[test]
    fn text_and_json() {
        let f = series(2, 3, &[(1, 4)]);
        assert_eq!(f.to_text(), "1/2\t4\n1\t0\n");
        let j = serde_json::to_value(&f).unwrap();
        assert_eq!(j["den"], 2);
        assert_eq!(j["offset"], 1);
        assert_eq!(j["prec"], 3);
        let back: QSeries = serde_json::from_value(j).unwrap();
        assert!(back == f);
    }
}
