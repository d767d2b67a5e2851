//! Exact combinatorics of holomorphic projection: Jacobi polynomials,
//! terminating hypergeometric sums, the homogeneous polynomial `P_{a,b}`, and
//! the projection defect series on the square lattice.
//!
//! Gamma ratios are always rising factorials so every value stays rational.
//! The few genuine Gamma values that appear (`Gamma(-1/2)`, `sqrt(pi)`) are
//! carried as unit tags and must cancel before a result is returned.

pub mod analytic;

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arithfn::ArithError;
use crate::characters::DirichletCharacter;
use crate::exactnum::{int, rat, Rational};
use crate::qseries::QSeries;
use crate::report::VerificationReport;
use crate::tags::{Tagged, UnitTag};

pub use analytic::*;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HoloError {
    #[error("pole in parameter: {0}")]
    PoleInParameter(String),
    #[error("hypergeometric sum does not terminate")]
    NotTerminating,
    #[error("parameter outside the admissible range: {0}")]
    ExcludedParameter(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Tag(#[from] crate::tags::UncancelledTag),
}

/// `twice / 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HalfInteger {
    pub twice: i64,
}

impl HalfInteger {
    pub fn new(twice: i64) -> Self {
        HalfInteger { twice }
    }

    pub fn int(n: i64) -> Self {
        HalfInteger { twice: 2 * n }
    }

    pub fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }

    pub fn to_rational(self) -> Rational {
        rat(self.twice, 2)
    }

    pub fn to_f64(self) -> f64 {
        self.twice as f64 / 2.0
    }
}

impl Add for HalfInteger {
    type Output = HalfInteger;
    fn add(self, o: HalfInteger) -> HalfInteger {
        HalfInteger::new(self.twice + o.twice)
    }
}

impl Sub for HalfInteger {
    type Output = HalfInteger;
    fn sub(self, o: HalfInteger) -> HalfInteger {
        HalfInteger::new(self.twice - o.twice)
    }
}

impl Neg for HalfInteger {
    type Output = HalfInteger;
    fn neg(self) -> HalfInteger {
        HalfInteger::new(-self.twice)
    }
}

impl fmt::Display for HalfInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

fn is_nonpositive_integer(x: &Rational) -> bool {
    x.is_integer() && *x <= Rational::zero()
}

/// `x (x+1) ... (x+k-1)`.
pub fn rising(x: &Rational, k: u64) -> Rational {
    let mut acc = Rational::one();
    let mut t = x.clone();
    for _ in 0..k {
        acc *= &t;
        t += Rational::one();
    }
    acc
}

/// Generalized binomial `C(x, k) = x (x-1) ... (x-k+1) / k!`.
pub fn binomial(x: &Rational, k: u64) -> Rational {
    let mut acc = Rational::one();
    for i in 0..k {
        acc *= x - int(i as i64);
        acc /= int(i as i64 + 1);
    }
    acc
}

fn check_jacobi_params(r: u64, a: &Rational) -> Result<(), HoloError> {
    for j in 0..=r {
        let t = a + int(j as i64 + 1);
        if is_nonpositive_integer(&t) {
            return Err(HoloError::PoleInParameter(format!("Gamma({t}) in a denominator")));
        }
    }
    Ok(())
}

/// Jacobi polynomial by the finite sum,
/// `sum_j C(r,j)/r! (a+b+r+1)_j (a+j+1)_{r-j} ((z-1)/2)^j`.
pub fn jacobi_poly(r: u64, a: HalfInteger, b: HalfInteger, z: &Rational) -> Result<Rational, HoloError> {
    jacobi_poly_q(r, &a.to_rational(), &b.to_rational(), z)
}

pub fn jacobi_poly_q(r: u64, a: &Rational, b: &Rational, z: &Rational) -> Result<Rational, HoloError> {
    check_jacobi_params(r, a)?;
    let w = (z - Rational::one()) / int(2);
    let top = a + b + int(r as i64 + 1);
    let mut acc = Rational::zero();
    let mut wj = Rational::one();
    let mut fact = Rational::one();
    for i in 1..=r {
        fact *= int(i as i64);
    }
    for j in 0..=r {
        let term = binomial(&int(r as i64), j)
            * rising(&top, j)
            * rising(&(a + int(j as i64 + 1)), r - j)
            * &wj;
        acc += term;
        wj *= &w;
    }
    Ok(acc / fact)
}

/// Jacobi polynomial by its terminating `2F1` form,
/// `(a+1)_r / r! * 2F1(-r, a+b+r+1; a+1; (1-z)/2)`.
pub fn jacobi_poly_hyp(r: u64, a: HalfInteger, b: HalfInteger, z: &Rational) -> Result<Rational, HoloError> {
    let (a, b) = (a.to_rational(), b.to_rational());
    check_jacobi_params(r, &a)?;
    let mut fact = Rational::one();
    for i in 1..=r {
        fact *= int(i as i64);
    }
    let pre = rising(&(&a + Rational::one()), r) / fact;
    let f = hyp2f1_terminating_q(
        &int(-(r as i64)),
        &(&a + &b + int(r as i64 + 1)),
        &(&a + Rational::one()),
        &((Rational::one() - z) / int(2)),
    )?;
    Ok(pre * f)
}

/// Terminating Gauss hypergeometric sum; `a` or `b` must be a nonpositive
/// integer.
pub fn hyp2f1_terminating(a: HalfInteger, b: HalfInteger, c: HalfInteger, z: &Rational) -> Result<Rational, HoloError> {
    hyp2f1_terminating_q(&a.to_rational(), &b.to_rational(), &c.to_rational(), z)
}

pub fn hyp2f1_terminating_q(a: &Rational, b: &Rational, c: &Rational, z: &Rational) -> Result<Rational, HoloError> {
    let len = |x: &Rational| is_nonpositive_integer(x).then(|| (-x).to_integer());
    let n = match (len(a), len(b)) {
        (Some(x), Some(y)) => x.min(y),
        (Some(x), None) | (None, Some(x)) => x,
        (None, None) => return Err(HoloError::NotTerminating),
    };
    let n: u64 = n.try_into().map_err(|_| HoloError::NotTerminating)?;
    let mut acc = Rational::one();
    let mut term = Rational::one();
    for k in 0..n {
        let k = int(k as i64);
        let ck = c + &k;
        if ck.is_zero() {
            return Err(HoloError::PoleInParameter(format!("c + {k} = 0")));
        }
        term = term * (a + &k) * (b + &k) * z / (ck * (&k + Rational::one()));
        acc += &term;
    }
    Ok(acc)
}

/// `sum_{j=0}^{a-2} C(j+b-2, j) X^j (X+Y)^{a-j-2}`.
pub fn homogeneous_p(a: u64, b: HalfInteger, x: &Rational, y: &Rational) -> Rational {
    assert!(a >= 2, "homogeneous_p needs a >= 2");
    let b = b.to_rational();
    let s = x + y;
    let mut acc = Rational::zero();
    for j in 0..=a - 2 {
        let c = binomial(&(&b + int(j as i64 - 2)), j);
        acc += c * pow(x, j) * pow(&s, a - 2 - j);
    }
    acc
}

/// `sum_j C(a+b-3, a-2-j) C(j+b-2, j) (X+Y)^{a-2-j} (-Y)^j`, valid for
/// `b != 1, 2`.
pub fn homogeneous_p_alt(a: u64, b: HalfInteger, x: &Rational, y: &Rational) -> Result<Rational, HoloError> {
    assert!(a >= 2, "homogeneous_p_alt needs a >= 2");
    if b == HalfInteger::int(1) || b == HalfInteger::int(2) {
        return Err(HoloError::ExcludedParameter(format!("b = {b}")));
    }
    let b = b.to_rational();
    let s = x + y;
    let my = -y;
    let top = &b + int(a as i64 - 3);
    let mut acc = Rational::zero();
    for j in 0..=a - 2 {
        let c = binomial(&top, a - 2 - j) * binomial(&(&b + int(j as i64 - 2)), j);
        acc += c * pow(&s, a - 2 - j) * pow(&my, j);
    }
    Ok(acc)
}

fn pow(x: &Rational, e: u64) -> Rational {
    num_traits::pow(x.clone(), e as usize)
}

/// `N^{1/2} P_1^{(-1/2,-2)}(1 - 2M/N) - M^{1/2}` at `M = m^2`, `N = n^2`,
/// which is `(n-m)^2 / (2n)`.
pub fn defect_factor_theta(m: u64, n: u64) -> Rational {
    assert!(m >= 1 && n >= 1);
    let (m, n) = (m as i64, n as i64);
    // through the polynomial rather than the closed form
    let p = jacobi_poly(1, HalfInteger::new(-1), HalfInteger::int(-2), &(Rational::one() - rat(2 * m * m, n * n)))
        .expect("no pole at a = -1/2");
    p * int(n) - int(m)
}

/// The correction `-Gamma(1-k_f) sum alpha(m^2) beta(n^2) defect q^{n^2-m^2}`
/// at `k_f = 3/2`, `kappa = 3`, with `alpha(m^2) = 2 chi(m) / Gamma(-1/2)` and
/// `beta(n^2) = psi(n) n`. The `Gamma(-1/2)` factors are carried as tags.
pub fn projection_correction_tagged(
    chi: &DirichletCharacter,
    psi: &DirichletCharacter,
    prec: i64,
) -> Result<Tagged<QSeries>, HoloError> {
    check_pair(chi, psi)?;
    // -Gamma(1 - 3/2) and alpha(m^2) contribute Gamma(-1/2)^{+1} and ^{-1}
    let tag = UnitTag::GAMMA_NEG_HALF * UnitTag::GAMMA_NEG_HALF.inverse();
    let mut terms = Vec::new();
    let mut n: i64 = 2;
    while 2 * n - 1 < prec {
        let y = psi.value(n);
        if !y.is_zero() {
            for m in 1..n {
                let e = n * n - m * m;
                if e >= prec {
                    continue;
                }
                let x = chi.value(m);
                if x.is_zero() {
                    continue;
                }
                let scalar = int(-1) * int(2) * int(n) * defect_factor_theta(m as u64, n as u64);
                terms.push((e, (x * y).scale(&scalar)));
            }
        }
        n += 1;
    }
    Ok(Tagged::new(tag, QSeries::from_terms(1, prec, terms)))
}

/// `sum_{m >= 1} sum_{n-m >= 1} chi(m) psi(n) (n-m)^2 q^{n^2-m^2}`, obtained
/// from the projection formula after the tags cancel.
pub fn projection_defect_series(chi: &DirichletCharacter, psi: &DirichletCharacter, prec: i64) -> Result<QSeries, HoloError> {
    Ok(projection_correction_tagged(chi, psi, prec)?.into_exact()?.neg())
}

/// Projection of the constant `-1/(2 pi v^{1/2})` times `theta_psi` at weight
/// 3, tagged. Uses `pi_3(v^{-1/2} q^N) = pi n q^N` for `N = n^2` and
/// `sqrt(pi) = -Gamma(-1/2)/2`.
pub fn constant_term_correction_tagged(psi: &DirichletCharacter, prec: i64) -> Tagged<QSeries> {
    // -1/(2 pi) = -2 / Gamma(-1/2)^2, and pi n = n Gamma(-1/2)^2 / 4
    let tag = UnitTag::GAMMA_NEG_HALF.pow(-2) * UnitTag::GAMMA_NEG_HALF.pow(2);
    let mut terms = Vec::new();
    let mut n: i64 = 1;
    while n * n < prec {
        let y = psi.value(n);
        if !y.is_zero() {
            // beta(n^2) = psi(n) n
            let scalar = int(-2) * rat(n, 4) * int(n);
            terms.push((n * n, y.scale(&scalar)));
        }
        n += 1;
    }
    Tagged::new(tag, QSeries::from_terms(1, prec, terms))
}

/// Everything that `pi_3` subtracts from `F^+ theta_psi`, so that vanishing
/// of the projection is equality with [`crate::arithfn::mock_numerator`].
pub fn projection_defect_series_full(
    chi: &DirichletCharacter,
    psi: &DirichletCharacter,
    prec: i64,
) -> Result<QSeries, HoloError> {
    let mut s = projection_defect_series(chi, psi, prec)?;
    if chi.is_trivial() {
        let extra = constant_term_correction_tagged(psi, prec).into_exact()?.neg();
        s = s.add(&extra);
    }
    Ok(s)
}

fn check_pair(chi: &DirichletCharacter, psi: &DirichletCharacter) -> Result<(), HoloError> {
    if !psi.is_odd() {
        return Err(ArithError::OddnessViolation.into());
    }
    if chi.is_odd() {
        return Err(ArithError::OddChi.into());
    }
    Ok(())
}

/// Exact check that the projection vanishes: numerator against defect.
pub fn verify_projection(chi: &DirichletCharacter, psi: &DirichletCharacter, prec: i64) -> Result<VerificationReport, HoloError> {
    let num = crate::arithfn::mock_numerator(chi, psi, prec)?;
    let defect = projection_defect_series_full(chi, psi, prec)?;
    let report = VerificationReport::new("holoproj")
        .param("chi", chi)
        .param("psi", psi)
        .param("prec", prec)
        .coverage(format!("q^0 .. q^{}", prec - 1));
    Ok(match num.first_difference(&defect) {
        None => report,
        Some((e, a, b)) => report.fail_at(format!("q^{e}"), b, a),
    })
}

/// Random positive rational in `(0, 1)` with denominator at most `max_den`.
fn random_unit_rational(rng: &mut StdRng, max_den: i64) -> (i64, i64) {
    let n = rng.random_range(2..=max_den);
    let m = rng.random_range(1..n);
    (m, n)
}

/// The three exact cross-checks of the Jacobi polynomial machinery: finite sum
/// against the `2F1` form, finite sum against `P_{kappa, 2-k_f}(n-m, m)/n^{kappa-2}`,
/// and `P_{a,b}` against its alternate form.
pub fn verify_jacobi_poly(max_degree: u64, trials: usize, seed: u64) -> VerificationReport {
    let mut rng = StdRng::seed_from_u64(seed);
    let report = VerificationReport::new("jacobi-poly")
        .param("max_degree", max_degree)
        .param("trials", trials)
        .param("seed", seed);
    let mut checked = 0usize;
    // finite sum vs 2F1, half-integer a, integer or half-integer b
    for r in 0..=max_degree {
        for (a, b) in [(-1, -4), (-1, -2 * (r as i64) - 2), (1, 3), (-3, -5), (3, 0)] {
            let (a, b) = (HalfInteger::new(a), HalfInteger::new(b));
            for _ in 0..trials {
                let (num, den) = random_unit_rational(&mut rng, 1000);
                let sign = if rng.random_range(0..2) == 0 { 1 } else { -1 };
                let z = rat(sign * num, den);
                let lhs = jacobi_poly(r, a, b, &z);
                let rhs = jacobi_poly_hyp(r, a, b, &z);
                if lhs != rhs {
                    return report.fail_at(
                        format!("r={r} a={a} b={b} z={z}"),
                        format!("{rhs:?}"),
                        format!("{lhs:?}"),
                    );
                }
                checked += 1;
            }
        }
    }
    // finite sum vs homogeneous polynomial, kappa in [2, 8], half-integer k_f
    for kappa in 2..=8i64.min(max_degree as i64 + 2) {
        for kf2 in [1, 3, 5] {
            let kf = HalfInteger::new(kf2);
            let a = HalfInteger::int(1) - kf;
            let b = HalfInteger::int(1 - kappa);
            let pb = HalfInteger::int(2) - kf;
            for _ in 0..trials {
                let (m, n) = random_unit_rational(&mut rng, 1000);
                let z = Rational::one() - rat(2 * m, n);
                let lhs = jacobi_poly((kappa - 2) as u64, a, b, &z).expect("half-integer a has no poles");
                let rhs = homogeneous_p(kappa as u64, pb, &int(n - m), &int(m)) / pow(&int(n), (kappa - 2) as u64);
                if lhs != rhs {
                    return report.fail_at(format!("kappa={kappa} k_f={kf} t={m}/{n}"), rhs, lhs);
                }
                checked += 1;
            }
        }
    }
    // P_{a,b} vs alternate form
    for a in 2..=8u64 {
        for b2 in [1, 3, 5] {
            let b = HalfInteger::new(b2);
            for _ in 0..trials {
                let x = rat(rng.random_range(-500..=500), rng.random_range(1..=97));
                let y = rat(rng.random_range(-500..=500), rng.random_range(1..=97));
                let lhs = homogeneous_p(a, b, &x, &y);
                let rhs = homogeneous_p_alt(a, b, &x, &y).expect("b is not 1 or 2");
                if lhs != rhs {
                    return report.fail_at(format!("a={a} b={b} X={x} Y={y}"), rhs, lhs);
                }
                checked += 1;
            }
        }
    }
    report.coverage(format!("{checked} exact comparisons"))
}

/// `2F1(a,b;c;z) = (1-z)^{c-a-b} 2F1(c-a,c-b;c;z)` on instances with
/// `a = -r` and `b = c + s`, where both sides terminate.
pub fn verify_euler_transformation(max_r: u64, trials: usize, seed: u64) -> VerificationReport {
    let mut rng = StdRng::seed_from_u64(seed);
    let report = VerificationReport::new("euler-transformation")
        .param("max_r", max_r)
        .param("trials", trials)
        .param("seed", seed);
    let mut checked = 0usize;
    for r in 0..=max_r {
        for s in 0..=max_r {
            for _ in 0..trials {
                // c positive half-integer keeps every (c)_k nonzero
                let c = rat(2 * rng.random_range(0..10) + 1, 2);
                let (num, den) = random_unit_rational(&mut rng, 200);
                let z = rat(num, den);
                let a = int(-(r as i64));
                let b = &c + int(s as i64);
                let lhs = hyp2f1_terminating_q(&a, &b, &c, &z).expect("terminates");
                let f = hyp2f1_terminating_q(&(&c - &a), &(&c - &b), &c, &z).expect("terminates");
                let e = r as i64 - s as i64;
                let one_minus = Rational::one() - &z;
                let factor = if e >= 0 {
                    pow(&one_minus, e as u64)
                } else {
                    Rational::one() / pow(&one_minus, (-e) as u64)
                };
                let rhs = factor * f;
                if lhs != rhs {
                    return report.fail_at(format!("r={r} s={s} c={c} z={z}"), rhs, lhs);
                }
                checked += 1;
            }
        }
    }
    report.coverage(format!("{checked} exact comparisons"))
}

/// Jacobi polynomial in floating point, for non-lattice parameters.
pub fn jacobi_poly_f64(r: u64, a: f64, b: f64, z: f64) -> f64 {
    let w = (z - 1.0) / 2.0;
    let rising = |x: f64, k: u64| (0..k).fold(1.0, |acc, i| acc * (x + i as f64));
    let mut fact = 1.0;
    for i in 1..=r {
        fact *= i as f64;
    }
    let mut acc = 0.0;
    let mut binom = 1.0;
    for j in 0..=r {
        acc += binom * rising(a + b + r as f64 + 1.0, j) * rising(a + j as f64 + 1.0, r - j) * w.powi(j as i32);
        binom = binom * (r - j) as f64 / (j + 1) as f64;
    }
    acc / fact
}

/// Coefficient of `q^N` in the general projection formula,
/// `-Gamma(1-k_f) sum_{m >= 1} alpha(m) beta(m+N) ((m+N)^{k_f-1} P(1-2m/(m+N)) - m^{k_f-1})`,
/// truncated at `m <= m_max`.
pub fn general_projection_coefficient(
    k_f: f64,
    kappa: i64,
    alpha: impl Fn(u64) -> f64,
    beta: impl Fn(u64) -> f64,
    n_target: u64,
    m_max: u64,
) -> Result<f64, HoloError> {
    let k_g = kappa as f64 - k_f;
    if k_f.fract() == 0.0 && k_f >= 1.0 {
        return Err(HoloError::ExcludedParameter(format!("k_f = {k_f} is a positive integer")));
    }
    if k_g.fract() == 0.0 && k_g <= -1.0 {
        return Err(HoloError::ExcludedParameter(format!("k_g = {k_g} is a negative integer")));
    }
    if kappa < 2 {
        return Err(HoloError::ExcludedParameter(format!("kappa = {kappa} < 2")));
    }
    let gamma = statrs::function::gamma::gamma(1.0 - k_f);
    let (pa, pb) = (1.0 - k_f, 1.0 - kappa as f64);
    let mut acc = 0.0;
    for m in 1..=m_max {
        let al = alpha(m);
        if al == 0.0 {
            continue;
        }
        let n = m + n_target;
        let be = beta(n);
        if be == 0.0 {
            continue;
        }
        let (mf, nf) = (m as f64, n as f64);
        let p = jacobi_poly_f64((kappa - 2) as u64, pa, pb, 1.0 - 2.0 * mf / nf);
        acc += al * be * (nf.powf(k_f - 1.0) * p - mf.powf(k_f - 1.0));
    }
    Ok(-gamma * acc)
}
