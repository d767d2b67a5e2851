//! Jacobi theta function, Appell-Lerch sums and their derivatives, and
//! specialization at torsion points to one-variable q-series.
//!
//! Sum side of theta: `S = sum_{nu in Z+1/2} (-1)^{nu-1/2} q^{nu^2/2} zeta^nu`,
//! and `theta = i S`. The product side is
//! `-i zeta^{-1/2} q^{1/8} prod (1-q^{j+1})(1-zeta q^j)(1-zeta^{-1} q^{j+1})`,
//! so both carry the unit `i` as a tag. Theta series live in `zeta^{1/2}`
//! (`xden = 2`) and `q^{1/8}`.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::characters::DirichletCharacter;
use crate::exactnum::{int, rat, CyclotomicNumber, Rational};
use crate::holoproj::{integrate_complex, ComplexPoint, NumericError};
use crate::qseries::{QSeries, SeriesError, TwoVarSeries};
use crate::report::VerificationReport;
use crate::tags::{Tagged, UnitTag};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum JacobiError {
    #[error("denominator 1 - e(w) q^n vanishes identically at n = {0}")]
    PoleAtSpecialization(i64),
    #[error("n-sum needs more than {0} terms")]
    TruncationBoundExceeded(u64),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Numeric(#[from] NumericError),
}

const MAX_TERMS: u64 = 1_000_000;

/// `mu tau + nu` with rational `mu`, `nu`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TorsionPoint {
    #[serde(with = "crate::exactnum::rational_string")]
    pub mu: Rational,
    #[serde(with = "crate::exactnum::rational_string")]
    pub nu: Rational,
}

impl TorsionPoint {
    pub fn new(mu: Rational, nu: Rational) -> Self {
        TorsionPoint { mu, nu }
    }

    pub fn zero() -> Self {
        TorsionPoint::new(Rational::zero(), Rational::zero())
    }

    /// Numerical value at `tau`.
    pub fn at(&self, tau: Complex64) -> Complex64 {
        tau * f(&self.mu) + f(&self.nu)
    }
}

impl fmt::Display for TorsionPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*tau + {}", self.mu, self.nu)
    }
}

fn f(r: &Rational) -> f64 {
    crate::exactnum::rational_to_f64(r)
}

fn den_u64(r: &Rational) -> u64 {
    r.denom().to_u64().expect("denominator too large")
}

/// `e^{2 pi i r}` with a cache keyed by `r mod 1`.
#[derive(Default)]
struct RootCache(HashMap<Rational, CyclotomicNumber>);

impl RootCache {
    fn get(&mut self, r: &Rational) -> CyclotomicNumber {
        let key = r - r.floor();
        self.0
            .entry(key.clone())
            .or_insert_with(|| CyclotomicNumber::exp_2pi_i(&key))
            .clone()
    }
}

/// Half-integer `nu = t + 1/2` as `2 nu`, with sign `(-1)^t`.
fn half_integer_terms(prec8: i64) -> impl Iterator<Item = (i64, i64)> {
    // exponent (2nu)^2 / 8 in units of 1/8
    (0..)
        .map(|t: i64| 2 * t + 1)
        .take_while(move |&m| m * m < prec8)
        .flat_map(|m| {
            let t = (m - 1) / 2;
            let s = if t % 2 == 0 { 1 } else { -1 };
            // nu = -m/2 has t' = -t-1 and the opposite sign
            [(m, s), (-m, -s)]
        })
}

/// `S(z) = -i theta(z)` with exponents below `q^prec`, tagged with `i`.
pub fn jacobi_theta_series(prec: i64) -> Tagged<TwoVarSeries> {
    let p8 = 8 * prec;
    let mut s = TwoVarSeries::zero(2, 0, 0, 8, p8);
    for (m, sign) in half_integer_terms(p8) {
        s.add_term(m, &QSeries::monomial(8, m * m, CyclotomicNumber::from_int(sign), p8));
    }
    Tagged::new(UnitTag::I, s)
}

/// The triple product `-i zeta^{-1/2} q^{1/8} prod (...)`, as tag `i` times
/// `-zeta^{-1/2} q^{1/8} prod (...)`.
pub fn jacobi_theta_product(prec: i64) -> Tagged<TwoVarSeries> {
    let p8 = 8 * prec;
    let one = CyclotomicNumber::one();
    let minus = CyclotomicNumber::from_int(-1);
    let poly = |parts: &[(i64, i64, &CyclotomicNumber)]| {
        let mut t = TwoVarSeries::zero(2, 0, 0, 8, p8);
        for &(x, e, c) in parts {
            t.add_term(x, &QSeries::monomial(8, e, c.clone(), p8));
        }
        t
    };
    // -zeta^{-1/2} q^{1/8}
    let mut acc = poly(&[(-1, 1, &minus)]);
    for j in 0..prec {
        let e = 8 * j;
        if e + 8 < p8 {
            acc = acc.mul(&poly(&[(0, 0, &one), (0, e + 8, &minus)]));
            acc = acc.mul(&poly(&[(0, 0, &one), (-2, e + 8, &minus)]));
        }
        acc = acc.mul(&poly(&[(0, 0, &one), (2, e, &minus)]));
    }
    acc.set_prec(p8);
    Tagged::new(UnitTag::I, acc)
}

/// Sum and product sides agree with equal tags.
pub fn verify_triple_product(prec: i64) -> VerificationReport {
    let s = jacobi_theta_series(prec);
    let p = jacobi_theta_product(prec);
    let report = VerificationReport::new("triple-product").param("prec", prec);
    if s.tag != p.tag {
        return report.fail_at("unit tag", p.tag, s.tag);
    }
    if let Some((j, e)) = s.value.agrees_with(&p.value) {
        let a = s.value.extract(j).map(|x| x.coeff_at(&e)).ok().flatten();
        let b = p.value.extract(j).map(|x| x.coeff_at(&e)).ok().flatten();
        return report.fail_at(format!("zeta^({j}/2) q^{e}"), format!("{b:?}"), format!("{a:?}"));
    }
    let (lo, hi) = s.value.x_range();
    let mut report = report.coverage(format!("q-exponents below {prec}, zeta^(k/2) for {lo} <= k <= {hi}"));
    // vanishing at zeta = 1 and oddness in zeta
    if !s.value.specialize_root_of_unity(&Rational::zero()).is_zero() {
        report = report.fail_at("zeta = 1", "0", "nonzero");
    } else if s.value.invert_x().agrees_with(&s.value.neg()).is_some() {
        report = report.fail_at("zeta -> 1/zeta", "-S", "different");
    }
    report
}

/// `S(z + lambda tau + mu)` generated termwise.
fn theta_series_shifted(lambda: i64, mu: i64, prec: i64) -> TwoVarSeries {
    let p8 = 8 * prec;
    let mut s = TwoVarSeries::zero(2, 0, 0, 8, p8);
    let msign = if mu.rem_euclid(2) == 0 { 1 } else { -1 };
    // q^{nu^2/2 + lambda nu} = q^{(m^2 + 4 lambda m)/8} with m = 2 nu
    let mut m: i64 = 1;
    loop {
        let mut any = false;
        for mm in [m, -m] {
            let e = mm * mm + 4 * lambda * mm;
            if e < p8 {
                any = true;
                let t = (mm - 1).div_euclid(2);
                let sign = if t.rem_euclid(2) == 0 { 1 } else { -1 };
                s.add_term(mm, &QSeries::monomial(8, e, CyclotomicNumber::from_int(sign * msign), p8));
            }
        }
        if !any && m > 4 * lambda.abs() {
            break;
        }
        m += 2;
    }
    s
}

/// `theta(z + lambda tau + mu) = (-1)^{lambda+mu} q^{-lambda^2/2} zeta^{-lambda} theta(z)`.
pub fn verify_elliptic(lambda: i64, mu: i64, prec: i64) -> VerificationReport {
    let report = VerificationReport::new("elliptic").param("lambda", lambda).param("mu", mu).param("prec", prec);
    let lhs = theta_series_shifted(lambda, mu, prec);
    let extra = (lambda * lambda + 1) / 2;
    let base = jacobi_theta_series(prec + extra).value;
    let sign = if (lambda + mu).rem_euclid(2) == 0 { 1 } else { -1 };
    let mut rhs = base.mul_monomial(-2 * lambda, -lambda * lambda, 2, &CyclotomicNumber::from_int(sign));
    rhs.set_prec(8 * prec);
    match lhs.agrees_with(&rhs) {
        None => report.coverage(format!("q-exponents below {prec}, all zeta-powers")),
        Some((j, e)) => report.fail_at(format!("zeta^({j}/2) q^{e}"), "rhs", "lhs"),
    }
}

/// Truncated sum side at a numerical point.
pub fn eval_theta_numeric(z: Complex64, tau: ComplexPoint, trunc: u64) -> Complex64 {
    let t = tau.to_complex();
    let two_pi_i = Complex64::new(0.0, 2.0 * PI);
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..=trunc as i64 {
        for nu in [k as f64 + 0.5, -(k as f64) - 0.5] {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let sign = if nu > 0.0 { sign } else { -sign };
            acc += (two_pi_i * (t * (nu * nu / 2.0) + z * nu)).exp() * sign;
        }
    }
    acc * Complex64::i()
}

/// Number of half-integer terms needed for a tail below `1e-17` relative.
fn theta_trunc(z: Complex64, tau: ComplexPoint) -> u64 {
    let v = tau.im;
    let y = z.im.abs();
    let mut k = 1u64;
    // |q^{nu^2/2} zeta^nu| = exp(-pi v nu^2 + 2 pi |nu| |Im z|)
    while {
        let nu = k as f64 + 0.5;
        -PI * v * nu * nu + 2.0 * PI * nu * y > -45.0 || nu < 2.0 * y / v
    } {
        k += 1;
    }
    k
}

/// Theta by the triple product at a numerical point.
pub fn eval_theta_product(z: Complex64, tau: ComplexPoint) -> Complex64 {
    let t = tau.to_complex();
    let two_pi_i = Complex64::new(0.0, 2.0 * PI);
    let q = (two_pi_i * t).exp();
    let zeta = (two_pi_i * z).exp();
    let mut acc = -Complex64::i() * (-two_pi_i * z / 2.0).exp() * (two_pi_i * t / 8.0).exp();
    let mut qj = Complex64::new(1.0, 0.0);
    for _ in 0..10_000 {
        let next = qj * q;
        acc *= (1.0 - next) * (1.0 - zeta * qj) * (1.0 - next / zeta);
        qj = next;
        if qj.norm() * (1.0 + zeta.norm() + 1.0 / zeta.norm()) < 1e-18 {
            break;
        }
    }
    acc
}

/// One term `x^{xidx/2} q^{exp/den} c` of an Appell-Lerch expansion.
struct AlTerm {
    x: i64,
    exp: i64,
    coeff: CyclotomicNumber,
}

/// Enumerates every term of `D_z^j A_l(w, z; tau)` with q-exponent below
/// `prec`. With `formal_x`, `w` is `t + w` and `e^{2 pi i t}` stays a
/// variable (tracked as `x^{1/2}` powers). `branch` filters the `n` summands.
fn appell_lerch_terms(
    level: i64,
    j: u32,
    w: &TorsionPoint,
    z: &TorsionPoint,
    prec: &Rational,
    formal_x: bool,
    branch: &dyn Fn(i64) -> bool,
) -> Result<(u64, Vec<AlTerm>), JacobiError> {
    if level < 1 {
        return Err(JacobiError::Precondition("level must be positive".into()));
    }
    let l = int(level);
    let half_l_mu = &l * &w.mu / int(2);
    let den = den_u64(&w.mu).lcm(&den_u64(&z.mu)).lcm(&den_u64(&half_l_mu)).lcm(&den_u64(prec));
    let d = int(den as i64);
    let to_units = |r: &Rational| -> i64 { (r * &d).to_integer().to_i64().expect("exponent overflow") };
    let pu = to_units(prec);
    let base = |n: i64| -> i64 {
        let n_r = int(n);
        to_units(&(&l * int(n * (n + 1)) / int(2) + &n_r * &z.mu + &half_l_mu))
    };
    let e_of = |n: i64| to_units(&(int(n) + &w.mu));
    let min_exp = |n: i64| {
        let e = e_of(n);
        base(n) + if e < 0 { -e } else { 0 }
    };
    // a vanishing denominator is a pole however far out its term sits
    if w.mu.is_integer() {
        let n = -w.mu.to_integer().to_i64().expect("mu_w overflow");
        let weighted = j == 0 || n != 0;
        if weighted && branch(n) && (formal_x || w.nu.is_integer()) {
            return Err(JacobiError::PoleAtSpecialization(n));
        }
    }
    // base is convex with vertex near -(l/2 + mu_z)/l
    let vertex = (-(f(&l) / 2.0 + f(&z.mu)) / f(&l)).round() as i64;
    let mut ns = Vec::new();
    for dir in [1i64, -1] {
        let mut n = if dir == 1 { vertex } else { vertex - 1 };
        let mut steps = 0u64;
        loop {
            let past_vertex = (n - vertex) * dir >= 1;
            if past_vertex && base(n) >= pu {
                break;
            }
            if min_exp(n) < pu {
                ns.push(n);
            }
            n += dir;
            steps += 1;
            if steps > MAX_TERMS {
                return Err(JacobiError::TruncationBoundExceeded(MAX_TERMS));
            }
        }
    }
    ns.sort_unstable();
    let mut roots = RootCache::default();
    let mut out = Vec::new();
    let half = rat(1, 2);
    for n in ns {
        if !branch(n) {
            continue;
        }
        let weight = num_traits::pow(BigInt::from(n), j as usize);
        if weight.is_zero() {
            continue;
        }
        let weight = Rational::from_integer(weight);
        let angle0 = &l * int(n) * &half + int(n) * &z.nu + &l * &w.nu * &half;
        let b = base(n);
        let e = e_of(n);
        // e^{pi i l t} contributes x^{l/2}, i.e. index l
        let x0 = if formal_x { level } else { 0 };
        if e > 0 {
            let mut k = 0i64;
            while b + k * e < pu {
                let c = roots.get(&(&angle0 + int(k) * &w.nu)).scale(&weight);
                out.push(AlTerm {
                    x: x0 + if formal_x { 2 * k } else { 0 },
                    exp: b + k * e,
                    coeff: c,
                });
                k += 1;
            }
        } else if e < 0 {
            let mut k = 1i64;
            while b - k * e < pu {
                let c = -roots.get(&(&angle0 - int(k) * &w.nu)).scale(&weight);
                out.push(AlTerm {
                    x: x0 - if formal_x { 2 * k } else { 0 },
                    exp: b - k * e,
                    coeff: c,
                });
                k += 1;
            }
        } else {
            if formal_x {
                return Err(JacobiError::PoleAtSpecialization(n));
            }
            let rho = roots.get(&w.nu);
            let inv = (&CyclotomicNumber::one() - &rho)
                .inverse()
                .ok_or(JacobiError::PoleAtSpecialization(n))?;
            if b < pu {
                let c = &roots.get(&angle0) * &inv;
                out.push(AlTerm {
                    x: x0,
                    exp: b,
                    coeff: c.scale(&weight),
                });
            }
        }
    }
    Ok((den, out))
}

/// `(D_z^j A_l)(w, z; tau)` at torsion points, exact below `q^prec`.
pub fn appell_lerch_specialized(
    level: i64,
    j: u32,
    w: &TorsionPoint,
    z: &TorsionPoint,
    prec: &Rational,
) -> Result<QSeries, JacobiError> {
    let (den, terms) = appell_lerch_terms(level, j, w, z, prec, false, &|_| true)?;
    let pu = (prec * int(den as i64)).to_integer().to_i64().unwrap();
    Ok(QSeries::from_terms(den, pu, terms.into_iter().map(|t| (t.exp, t.coeff))))
}

/// `A_l(t + w, z; tau)` as a series in `x = e^{2 pi i t}` (x-indices count
/// halves), restricted to summands `n` with `branch(n)`.
pub fn appell_lerch_two_var(
    level: i64,
    w: &TorsionPoint,
    z: &TorsionPoint,
    prec: &Rational,
    branch: &dyn Fn(i64) -> bool,
) -> Result<TwoVarSeries, JacobiError> {
    let (den, terms) = appell_lerch_terms(level, 0, w, z, prec, true, branch)?;
    let pu = (prec * int(den as i64)).to_integer().to_i64().unwrap();
    let mut groups: std::collections::BTreeMap<i64, Vec<(i64, CyclotomicNumber)>> = Default::default();
    for t in terms {
        groups.entry(t.x).or_default().push((t.exp, t.coeff));
    }
    let lo = groups.keys().next().copied().unwrap_or(0).min(-8);
    let hi = groups.keys().last().copied().unwrap_or(0).max(8);
    // every term below q^prec was enumerated, so missing x-powers are zero
    let mut s = TwoVarSeries::zero(2, lo, hi, den, pu);
    for (x, ts) in groups {
        s.add_term(x, &QSeries::from_terms(den, pu, ts));
    }
    Ok(s)
}

/// Direct numerical summation of the defining series of `D_z^j A_l`.
pub fn appell_lerch_numeric(level: i64, j: u32, w: Complex64, z: Complex64, tau: Complex64) -> Complex64 {
    appell_lerch_summed(level, j, w, z, tau).0
}

/// The sum together with the sum of the absolute values of its terms. The
/// second is the scale that floating-point cancellation errors live on.
fn appell_lerch_summed(level: i64, j: u32, w: Complex64, z: Complex64, tau: Complex64) -> (Complex64, f64) {
    let two_pi_i = Complex64::new(0.0, 2.0 * PI);
    let l = level as f64;
    let ew = (two_pi_i * w).exp();
    let mut acc = Complex64::new(0.0, 0.0);
    let mut mass = 0.0;
    let mut quiet = 0;
    for step in 0..200_000i64 {
        let n = if step % 2 == 0 { step / 2 } else { -(step + 1) / 2 };
        if n == 0 && j > 0 {
            // weight n^j kills the term, pole or not
            continue;
        }
        let nf = n as f64;
        let sign = if (level * n).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        let log_num = two_pi_i * (tau * (l * nf * (nf + 1.0) / 2.0) + z * nf);
        let term = if n >= 0 {
            log_num.exp() / (1.0 - ew * (two_pi_i * tau * nf).exp())
        } else {
            // divide through by q^n to keep magnitudes bounded
            (log_num - two_pi_i * tau * nf).exp() / ((-two_pi_i * tau * nf).exp() - ew)
        };
        let term = term * nf.powi(j as i32) * sign;
        acc += term;
        mass += term.norm();
        if term.norm() < 1e-20 * acc.norm().max(1e-300) {
            quiet += 1;
            if quiet > 8 {
                break;
            }
        } else {
            quiet = 0;
        }
    }
    let prefactor = (Complex64::new(0.0, PI * l) * w).exp();
    (acc * prefactor, mass * prefactor.norm())
}

/// Compares the exact expansion with direct summation at `tau`. The residual
/// is relative to the larger of 1, the value, and the total size of the
/// summed terms, since torsion points far from the real axis make the direct
/// sum cancel heavily.
pub fn appell_lerch_numeric_check(
    level: i64,
    j: u32,
    w: &TorsionPoint,
    z: &TorsionPoint,
    prec: i64,
    tau: ComplexPoint,
) -> Result<f64, JacobiError> {
    let s = appell_lerch_specialized(level, j, w, z, &int(prec))?;
    let t = tau.to_complex();
    let exact = s.eval(t);
    let (direct, mass) = appell_lerch_summed(level, j, w.at(t), z.at(t), t);
    Ok((exact - direct).norm() / direct.norm().max(mass).max(1.0))
}

fn alprop_preconditions(chi: &DirichletCharacter, psi: &DirichletCharacter) -> Result<(), JacobiError> {
    if chi.is_trivial() {
        return Err(JacobiError::Precondition("chi must be non-trivial".into()));
    }
    if chi.is_odd() {
        return Err(JacobiError::Precondition("chi must be even".into()));
    }
    if !psi.is_odd() {
        return Err(JacobiError::Precondition("psi must be odd".into()));
    }
    if chi.modulus() % psi.modulus() != 0 {
        return Err(JacobiError::Precondition(format!(
            "modulus of psi ({}) must divide modulus of chi ({})",
            psi.modulus(),
            chi.modulus()
        )));
    }
    Ok(())
}

/// The right-hand side of the Appell-Lerch identity for
/// `sum sigma^sm_{2,chi}(n) q^n`, exact below `q^prec`.
pub fn alprop_rhs(chi: &DirichletCharacter, psi: &DirichletCharacter, prec: i64) -> Result<QSeries, JacobiError> {
    alprop_preconditions(chi, psi)?;
    let m = chi.modulus() as i64;
    let scale = 2 * m * m;
    let pairs: Vec<(i64, i64)> = (1..m)
        .flat_map(|b| (0..m).map(move |c| (b, c)))
        .filter(|&(b, c)| !chi.value(b).is_zero() && !psi.value(b + c).is_zero())
        .collect();
    let parts: Vec<QSeries> = pairs
        .par_iter()
        .map(|&(b, c)| -> Result<QSeries, JacobiError> {
            let shift = c * (c + 2 * b - m);
            // precision in tau' = 2 M^2 tau so that scaling and shifting reach prec
            let p_tau = Rational::new(BigInt::from(prec - shift), BigInt::from(scale)).ceil() + int(1);
            let w = TorsionPoint::new(rat(c, m), Rational::zero());
            let z = TorsionPoint::new(rat(2 * (b + c) - m, 2 * m), rat(1, 2));
            let mut acc: Option<QSeries> = None;
            for (jj, coef) in [(2u32, m * m), (1, 2 * c * m), (0, c * c)] {
                if coef == 0 {
                    continue;
                }
                let s = appell_lerch_specialized(1, jj, &w, &z, &p_tau)?.scale_rational(&int(coef));
                acc = Some(match acc {
                    None => s,
                    Some(a) => a.add(&s),
                });
            }
            let s = acc.expect("M^2 is nonzero");
            let weight = chi.value(b) * psi.value(b + c);
            Ok(s.scale_exponents(&int(scale)).shift(shift).scale(&weight).truncate(prec))
        })
        .collect::<Result<_, _>>()?;
    let mut total = QSeries::zero(1, prec);
    for p in &parts {
        total = total.add(p);
    }
    Ok(total.scale_rational(&rat(1, 2)).canonicalize())
}

/// Exact check of the Appell-Lerch form of `sum sigma^sm_{2,chi}(n) q^n`.
pub fn verify_alprop(chi: &DirichletCharacter, psi: &DirichletCharacter, prec: i64) -> Result<VerificationReport, JacobiError> {
    let rhs = alprop_rhs(chi, psi, prec)?;
    let lhs = crate::arithfn::mock_numerator(chi, psi, prec).map_err(|e| JacobiError::Precondition(e.to_string()))?;
    let report = VerificationReport::new("alprop")
        .param("chi", chi)
        .param("psi", psi)
        .param("prec", prec);
    if rhs.prec_exponent() < lhs.prec_exponent() {
        return Ok(report.fail_at("precision", lhs.prec_exponent(), rhs.prec_exponent()));
    }
    Ok(match lhs.first_difference(&rhs) {
        None => report.coverage(format!("q^0 .. q^{}", prec - 1)),
        Some((e, a, b)) => report.fail_at(format!("q^{e}"), a, b),
    })
}

/// The x^{-2} Fourier coefficient of each summand range of
/// `A_2(t - tau/2, 0; tau)`.
#[derive(Clone, Debug)]
pub struct PartialThetaBranches {
    pub positive: QSeries,
    pub zero: QSeries,
    pub negative: QSeries,
}

impl PartialThetaBranches {
    pub fn total(&self) -> QSeries {
        self.positive.add(&self.zero).add(&self.negative)
    }
}

pub fn partial_theta_branches(prec: i64) -> Result<PartialThetaBranches, JacobiError> {
    let w = TorsionPoint::new(rat(-1, 2), Rational::zero());
    let z = TorsionPoint::zero();
    let p = int(prec);
    // x = e^{2 pi i t}, indices count x^{1/2}
    let get = |f: &dyn Fn(i64) -> bool| -> Result<QSeries, JacobiError> {
        Ok(appell_lerch_two_var(2, &w, &z, &p, f)?.extract(-4)?.canonicalize())
    };
    Ok(PartialThetaBranches {
        positive: get(&|n| n >= 1)?,
        zero: get(&|n| n == 0)?,
        negative: get(&|n| n <= -1)?,
    })
}

/// `J(tau) = int_{-1/2}^{1/2} e^{4 pi i t} A_2(t - tau/2, 0; tau) dt`, i.e. the
/// `x^{-2}` coefficient.
pub fn partial_theta_extraction(prec: i64) -> Result<QSeries, JacobiError> {
    Ok(partial_theta_branches(prec)?.total())
}

pub fn verify_partial_theta(prec: i64) -> Result<VerificationReport, JacobiError> {
    let br = partial_theta_branches(prec)?;
    let j = br.total();
    let squares = QSeries::from_rational_terms(1, prec, (1..).map(|n: i64| n * n).take_while(|&e| e < prec).map(|e| (e, int(1))));
    let report = VerificationReport::new("partial-theta").param("prec", prec);
    if let Some((e, a, b)) = j.first_difference(&squares.neg()) {
        return Ok(report.fail_at(format!("q^{e}"), b, a));
    }
    if !br.positive.is_zero() {
        return Ok(report.fail_at("n >= 1 branch", "0", &br.positive));
    }
    let minus_q = QSeries::monomial(1, 1, CyclotomicNumber::from_int(-1), prec);
    if br.zero.first_difference(&minus_q).is_some() {
        return Ok(report.fail_at("n = 0 branch", "-q", &br.zero));
    }
    Ok(report.coverage(format!("q^0 .. q^{}; branches n>=1: 0, n=0: -q", prec - 1)))
}

/// `1/theta(z)^2 = D_2/(2 pi i z)^2 + D_1/(2 pi i z) + O(1)`.
#[derive(Clone, Debug)]
pub struct LaurentData {
    pub d1: QSeries,
    pub d2: QSeries,
    /// Exponent of `2 pi i` left over after normalizing by `zhat = 2 pi i z`.
    pub two_pi_i_exponent: i32,
    /// `zhat`-coefficients of `S = -i theta`.
    pub theta_coeffs: Vec<QSeries>,
}

/// Expands `S` in `zhat = 2 pi i z` to order `order_k + 1`, squares, and inverts.
pub fn theta_reciprocal_laurent(order_k: usize, prec: i64) -> Result<LaurentData, JacobiError> {
    if order_k < 2 {
        return Err(JacobiError::Precondition("order must be at least 2".into()));
    }
    let kmax = order_k + 1;
    // theta^2 starts at zhat^2 with a q^{1/4} leading coefficient, so the
    // inverse loses q^{1/4}; extend the input by one
    let p8 = 8 * (prec + 1);
    let mut a = Vec::with_capacity(kmax + 1);
    let mut fact = Rational::one();
    for k in 0..=kmax {
        if k > 0 {
            fact *= int(k as i64);
        }
        let terms = half_integer_terms(p8).map(|(m, sign)| {
            // nu^k / k! with nu = m/2
            let v = num_traits::pow(rat(m, 2), k) / &fact * int(sign);
            (m * m, v)
        });
        a.push(QSeries::from_rational_terms(8, p8, terms));
    }
    // S^2 coefficients
    let sq: Vec<QSeries> = (0..=kmax)
        .map(|k| {
            (0..=k).fold(QSeries::zero(8, p8), |acc, i| acc.add(&a[i].mul(&a[k - i])))
        })
        .collect();
    if !sq[0].is_zero() || !sq[1].is_zero() {
        return Err(JacobiError::Precondition("theta must vanish at z = 0".into()));
    }
    // invert T = sq[2] + sq[3] zhat + ...
    let t: Vec<&QSeries> = sq[2..].iter().collect();
    let mut b: Vec<QSeries> = Vec::new();
    for k in 0..t.len() {
        let mut s = if k == 0 { QSeries::monomial(8, 0, CyclotomicNumber::one(), p8) } else { QSeries::zero(8, p8) };
        for i in 1..=k {
            s = s.sub(&t[i].mul(&b[k - i]));
        }
        b.push(s.div(t[0])?);
    }
    // theta^2 = i^2 S^2
    let sign = UnitTag::I.pow(-2).as_sign().expect("i^-2 is a sign");
    let d2 = b[0].scale_rational(&int(sign)).canonicalize().truncate_exponent(prec);
    let d1 = b[1].scale_rational(&int(sign)).canonicalize().truncate_exponent(prec);
    Ok(LaurentData {
        d1,
        d2,
        two_pi_i_exponent: 0,
        theta_coeffs: a,
    })
}

trait TruncateExponent {
    fn truncate_exponent(&self, prec: i64) -> QSeries;
}

impl TruncateExponent for QSeries {
    /// Truncates at the integer exponent `prec`.
    fn truncate_exponent(&self, prec: i64) -> QSeries {
        self.truncate(prec * self.den() as i64)
    }
}

/// `D_1 sum q^{n^2} + 2 D_2 sum n q^{n^2}` against
/// `int_{-1/2}^{1/2} e^{4 pi i t} / theta(t - tau/2)^2 dt`.
pub fn verify_prop_ii(tau: ComplexPoint, quad_tol: f64, tol: f64) -> Result<VerificationReport, JacobiError> {
    if tau.im <= 0.0 {
        return Err(NumericError::NotInUpperHalfPlane.into());
    }
    let laurent = theta_reciprocal_laurent(2, 50)?;
    let t = tau.to_complex();
    let two_pi_i = Complex64::new(0.0, 2.0 * PI);
    let mut s0 = Complex64::new(0.0, 0.0);
    let mut s1 = Complex64::new(0.0, 0.0);
    for n in 1..200 {
        let e = (two_pi_i * t * (n * n) as f64).exp();
        if e.norm() < 1e-300 {
            break;
        }
        s0 += e;
        s1 += e * n as f64;
    }
    let lhs = laurent.d1.eval(t) * s0 + laurent.d2.eval(t) * s1 * 2.0;
    let integrand = |x: f64| {
        let z = Complex64::new(x, 0.0) - t / 2.0;
        let th = eval_theta_numeric(z, tau, theta_trunc(z, tau));
        (Complex64::new(0.0, 4.0 * PI * x)).exp() / (th * th)
    };
    let rhs = if tau.re == 0.0 {
        // integrand(-t) = conj(integrand(t)) for purely imaginary tau
        let half = integrate_complex(&integrand, 0.0, 0.5, quad_tol / 2.0)?;
        Complex64::new(2.0 * half.re, 0.0)
    } else {
        integrate_complex(&integrand, -0.5, 0.5, quad_tol)?
    };
    let residual = (lhs - rhs).norm();
    let d1_zero = laurent.d1.is_zero();
    Ok(VerificationReport::new("prop-ii")
        .param("tau", tau)
        .param("quad_tol", format!("{quad_tol:e}"))
        .with_residual(residual, tol)
        .note(format!("lhs {lhs:.12e}, integral {rhs:.12e}"))
        .note(if d1_zero {
            "D_1 = 0 to q^50".to_string()
        } else {
            format!("D_1 nonzero: {}", laurent.d1)
        }))
}
