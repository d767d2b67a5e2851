use proptest::prelude::*;
use smalldiv::exactnum::{int, rat, CyclotomicNumber, Rational};
use smalldiv::qseries::{sturm_bound, QSeries};

/// Random rational series over `q^{1/den}` with a nonzero leading term.
fn series(den: u64, prec: i64) -> impl Strategy<Value = QSeries> {
    (-3i64..=3, prop::collection::vec(-5i64..=5, 1..20), 1i64..=4).prop_map(move |(offset, cs, lead)| {
        let terms = cs
            .into_iter()
            .enumerate()
            .map(|(k, c)| (offset + k as i64, if k == 0 { int(lead) } else { int(c) }));
        QSeries::from_rational_terms(den, prec, terms)
    })
}

fn cyclo_series(prec: i64) -> impl Strategy<Value = QSeries> {
    prop::collection::vec((-3i64..=3, 0i64..6), 1..12).prop_map(move |cs| {
        let terms = cs
            .into_iter()
            .enumerate()
            .map(|(k, (c, e))| (k as i64, CyclotomicNumber::root_of_unity(6, e).scale(&int(c))));
        QSeries::from_terms(1, prec, terms)
    })
}

#[test]
fn sturm_examples() {
    assert_eq!(sturm_bound(&int(3), 64).unwrap(), 24);
    assert_eq!(sturm_bound(&int(2), 1).unwrap(), 0);
    assert_eq!(sturm_bound(&rat(3, 2), 4).unwrap(), 0);
    assert!(sturm_bound(&Rational::from_integer(1.into()), 4).is_err());
}

#[test]
fn json_schema_round_trip() {
    let s = QSeries::from_rational_terms(2, 9, [(-1, rat(1, 2)), (3, int(-4))]);
    let v = serde_json::to_value(&s).unwrap();
    for key in ["den", "offset", "prec", "coeffs"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    let back: QSeries = serde_json::from_value(v).unwrap();
    assert_eq!(back, s);
}

proptest! {
    #[test]
    fn mul_commutative_associative(a in series(2, 30), b in series(1, 25), c in series(3, 40)) {
        prop_assert!(a.mul(&b).agrees_with(&b.mul(&a)));
        prop_assert!(a.mul(&b).mul(&c).agrees_with(&a.mul(&b.mul(&c))));
    }

    #[test]
    fn cyclotomic_mul_commutes(a in cyclo_series(15), b in cyclo_series(15)) {
        prop_assert!(a.mul(&b).agrees_with(&b.mul(&a)));
    }

    #[test]
    fn div_undoes_mul(a in series(1, 30), b in series(2, 30)) {
        let q = a.mul(&b).div(&b).unwrap();
        prop_assert!(q.agrees_with(&a));
        // the quotient never claims more than the inputs support
        prop_assert!(q.prec_exponent() <= a.prec_exponent() + Rational::from_integer(40.into()));
    }

    #[test]
    fn u_operator_composes(a in series(1, 200), p in prop::sample::select(vec![2u64, 3, 5])) {
        for b in 2..=3u32 {
            let lhs = a.u_operator(p).unwrap().u_operator(p.pow(b - 1)).unwrap();
            let rhs = a.u_operator(p.pow(b)).unwrap();
            prop_assert!(lhs.agrees_with(&rhs));
            prop_assert_eq!(lhs.prec_exponent(), rhs.prec_exponent());
        }
    }

    #[test]
    fn canonicalize_keeps_values(a in series(1, 20), d in 1u64..=6) {
        let lifted = a.with_den(d * 2);
        let c = lifted.canonicalize();
        prop_assert!(c.agrees_with(&lifted));
        prop_assert!(c.den() <= lifted.den());
        for k in -3..20i64 {
            let e = rat(k, 1);
            prop_assert_eq!(c.coeff_at(&e), lifted.coeff_at(&e));
        }
    }
}
