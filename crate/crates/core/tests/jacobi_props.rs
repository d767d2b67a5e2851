use num_complex::Complex64;
use proptest::prelude::*;
use smalldiv::characters::DirichletCharacter;
use smalldiv::exactnum::{int, rat, Rational};
use smalldiv::holoproj::ComplexPoint;
use smalldiv::jacobi::{
    alprop_rhs, appell_lerch_numeric_check, appell_lerch_specialized, eval_theta_numeric, eval_theta_product,
    partial_theta_branches, partial_theta_extraction, verify_alprop, verify_elliptic, verify_triple_product, JacobiError,
    TorsionPoint,
};
use smalldiv::qseries::QSeries;

fn chr(s: &str) -> DirichletCharacter {
    s.parse().unwrap()
}

fn torsion() -> impl Strategy<Value = TorsionPoint> {
    (1i64..=6, -12i64..=12, 1i64..=6, 0i64..6).prop_map(|(d1, n1, d2, n2)| TorsionPoint::new(rat(n1, d1), rat(n2, d2)))
}

#[test]
fn triple_product_and_elliptic() {
    assert!(verify_triple_product(20).passed());
    for (l, m) in [(0, 0), (0, 1), (1, 0), (1, 1), (-1, 0), (2, 3)] {
        assert!(verify_elliptic(l, m, 16).passed(), "{l} {m}");
    }
}

#[test]
fn partial_theta_values() {
    let j = partial_theta_extraction(100).unwrap();
    let squares = QSeries::from_rational_terms(1, 100, (1..10i64).map(|n| (n * n, int(1))));
    assert!(j.add(&squares).is_zero());
    let b = partial_theta_branches(50).unwrap();
    assert!(b.positive.is_zero());
    assert_eq!(b.zero.nonzero_terms().map(|(e, c)| (e, c.clone())).collect::<Vec<_>>(), vec![(1, (-1).into())]);
    let tail = QSeries::from_rational_terms(1, 50, (2..8i64).map(|n| (n * n, int(-1))));
    assert!(b.negative.agrees_with(&tail));
}

#[test]
fn alprop_pairs() {
    for (c, p, prec) in [("kronecker:8", "kronecker:-4", 300), ("kronecker:12", "kronecker:-4", 200), ("kronecker:12", "kronecker:-3", 200), ("kronecker:24", "kronecker:-8", 150)] {
        let r = verify_alprop(&chr(c), &chr(p), prec).unwrap();
        assert!(r.passed(), "{r}");
    }
    assert!(matches!(alprop_rhs(&DirichletCharacter::one(), &chr("kronecker:-4"), 10), Err(JacobiError::Precondition(_))));
}

#[test]
fn pole_is_reported() {
    let w = TorsionPoint::new(int(2), int(0));
    let z = TorsionPoint::new(int(1), rat(1, 2));
    assert_eq!(appell_lerch_specialized(1, 0, &w, &z, &int(5)), Err(JacobiError::PoleAtSpecialization(-2)));
    // D_z kills the n = 0 summand, so its pole is harmless there
    let w0 = TorsionPoint::zero();
    assert!(appell_lerch_specialized(1, 0, &w0, &z, &int(5)).is_err());
    assert!(appell_lerch_specialized(1, 1, &w0, &z, &int(5)).is_ok());
}

#[test]
fn theta_numeric_examples() {
    let tau = ComplexPoint::new(0.0, 1.0);
    assert!(eval_theta_numeric(Complex64::new(0.0, 0.0), tau, 12).norm() < 1e-14);
    let z = Complex64::new(0.25, 0.0);
    assert!((eval_theta_numeric(z, tau, 12) - eval_theta_product(z, tau)).norm() < 1e-12);
}

#[test]
fn pole_beyond_precision_is_still_a_pole() {
    // 1 - e^{2 pi i w} q^n vanishes at n = -7, whose term starts at q^42
    let w = TorsionPoint::new(int(7), int(0));
    let r = appell_lerch_specialized(2, 0, &w, &TorsionPoint::zero(), &int(40));
    assert!(matches!(r, Err(JacobiError::PoleAtSpecialization(-7))));
    // zero weight removes the n = 0 pole
    assert!(appell_lerch_specialized(1, 1, &TorsionPoint::zero(), &TorsionPoint::zero(), &int(20)).is_ok());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn appell_lerch_matches_direct_sum(w in torsion(), z in torsion(), level in 1i64..=2, j in 0u32..=2) {
        let tau = ComplexPoint::new(0.0, 0.4);
        match appell_lerch_numeric_check(level, j, &w, &z, 40, tau) {
            Ok(r) => prop_assert!(r < 1e-9, "residual {}", r),
            Err(JacobiError::PoleAtSpecialization(_)) => {}
            Err(e) => prop_assert!(false, "{}", e),
        }
    }

    #[test]
    fn theta_is_odd(x in -1.0f64..1.0, y in -0.3f64..0.3, u in -0.5f64..0.5, v in 0.5f64..2.0) {
        let tau = ComplexPoint::new(u, v);
        let z = Complex64::new(x, y);
        let a = eval_theta_numeric(z, tau, 40);
        prop_assert!((a + eval_theta_numeric(-z, tau, 40)).norm() < 1e-13);
        prop_assert!((a - eval_theta_product(z, tau)).norm() < 1e-11 * (1.0 + a.norm()));
    }

    #[test]
    fn specialization_precision_is_honest(w in torsion(), z in torsion(), p in 5i64..30) {
        // raising the precision only appends terms
        let lo = appell_lerch_specialized(1, 0, &w, &z, &int(p));
        let hi = appell_lerch_specialized(1, 0, &w, &z, &int(p + 7));
        if let (Ok(lo), Ok(hi)) = (lo, hi) {
            prop_assert!(lo.agrees_with(&hi));
            prop_assert_eq!(lo.prec_exponent(), Rational::from_integer(p.into()));
        }
    }
}
