use num_bigint::BigInt;
use proptest::prelude::*;
use smalldiv::exactnum::{rat, CyclotomicNumber, Rational};

fn cyclo(max_conductor: u64) -> impl Strategy<Value = CyclotomicNumber> {
    (1..=max_conductor).prop_flat_map(|n| {
        prop::collection::vec((-20i64..=20, 1i64..=6), n as usize).prop_map(move |cs| {
            let poly: Vec<Rational> = cs.into_iter().map(|(p, q)| rat(p, q)).collect();
            CyclotomicNumber::from_poly(n, poly)
        })
    })
}

#[test]
fn spec_examples() {
    assert_eq!(CyclotomicNumber::root_of_unity(4, 2), CyclotomicNumber::from_int(-1));
    let s = &CyclotomicNumber::root_of_unity(3, 1) + &CyclotomicNumber::root_of_unity(3, 2);
    assert_eq!(s, CyclotomicNumber::from_int(-1));
    let z8 = CyclotomicNumber::root_of_unity(8, 1).embed();
    assert!((z8.re - 0.5f64.sqrt()).abs() < 1e-15 && (z8.im - 0.5f64.sqrt()).abs() < 1e-15);
    let i = CyclotomicNumber::root_of_unity(4, 1);
    assert_eq!(&i * &i, CyclotomicNumber::from_int(-1));
    let z3 = CyclotomicNumber::root_of_unity(3, 1);
    assert_eq!(&z3 * &CyclotomicNumber::root_of_unity(3, 2), CyclotomicNumber::one());
    let z5 = CyclotomicNumber::root_of_unity(5, 1);
    let z54 = CyclotomicNumber::root_of_unity(5, 4);
    let p = &(&CyclotomicNumber::one() + &z5) * &(&CyclotomicNumber::one() + &z54);
    let q = (num_complex::Complex64::new(1.0, 0.0) + z5.embed()) * (num_complex::Complex64::new(1.0, 0.0) + z54.embed());
    assert!((p.embed() - q).norm() < 1e-12);
    let e = z3.embed();
    assert!((e.re + 0.5).abs() < 1e-15 && (e.im - 0.75f64.sqrt()).abs() < 1e-15);
    assert_eq!(CyclotomicNumber::one().embed(), num_complex::Complex64::new(1.0, 0.0));
}

#[test]
fn json_shape() {
    let z = CyclotomicNumber::root_of_unity(3, 1).scale(&rat(-2, 3));
    let v = serde_json::to_value(&z).unwrap();
    assert_eq!(v["conductor"], 3);
    assert!(v["coeffs"].as_array().unwrap().iter().all(|c| c.is_string()));
    let back: CyclotomicNumber = serde_json::from_value(v).unwrap();
    assert_eq!(back, z);
}

proptest! {
    #[test]
    fn ring_axioms(a in cyclo(12), b in cyclo(12), c in cyclo(12)) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) - &b, a);
    }

    #[test]
    fn embed_is_homomorphism(a in cyclo(24), b in cyclo(24)) {
        let lhs = (&a * &b).embed();
        let rhs = a.embed() * b.embed();
        prop_assert!((lhs - rhs).norm() <= 1e-10 * (1.0 + rhs.norm()));
        let sum = (&a + &b).embed();
        prop_assert!((sum - a.embed() - b.embed()).norm() <= 1e-10 * (1.0 + sum.norm()));
    }

    #[test]
    fn conjugation_is_involution(a in cyclo(24)) {
        prop_assert_eq!(a.conjugate().conjugate(), a.clone());
        let e = a.conjugate().embed();
        let f = a.embed().conj();
        prop_assert!((e - f).norm() <= 1e-10 * (1.0 + f.norm()));
    }

    #[test]
    fn inverse(a in cyclo(15)) {
        if !a.is_zero() {
            let inv = a.inverse().unwrap();
            prop_assert!((&a * &inv).is_one());
        }
    }

    #[test]
    fn rational_arithmetic(p in -1000i64..1000, q in 1i64..1000) {
        let r = rat(p, q);
        prop_assert!(r.denom() > &BigInt::from(0));
        let g = num_integer::Integer::gcd(r.numer(), r.denom());
        prop_assert!(p == 0 || g == BigInt::from(1));
    }
}
