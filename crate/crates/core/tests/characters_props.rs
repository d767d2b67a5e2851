use smalldiv::characters::{kronecker, DirichletCharacter};
use smalldiv::exactnum::CyclotomicNumber;

fn chr(s: &str) -> DirichletCharacter {
    s.parse().unwrap()
}

/// A varied set of characters with modulus at most 24.
fn sample() -> Vec<DirichletCharacter> {
    let mut out = vec![DirichletCharacter::one()];
    for d in [-24i64, -23, -20, -19, -15, -11, -8, -7, -4, -3, 5, 8, 12, 13, 17, 21, 24] {
        out.push(DirichletCharacter::kronecker(d).unwrap());
    }
    for m in [2u64, 6, 9, 16, 24] {
        out.push(DirichletCharacter::principal(m).unwrap());
    }
    // order 4 mod 5 (2 -> i) and order 6 mod 7 (3 -> zeta_6)
    out.push(chr("table:5:0,1,zeta(4)^1,-zeta(4)^1,-1"));
    out.push(chr("table:7:0,1,zeta(6)^2,zeta(6)^1,zeta(6)^4,zeta(6)^5,-1"));
    out
}

#[test]
fn parity_matches_value_at_minus_one() {
    for c in sample() {
        let expected = CyclotomicNumber::from_int(if c.is_odd() { -1 } else { 1 });
        assert_eq!(c.eval(-1), expected, "{c}");
    }
}

#[test]
fn completely_multiplicative() {
    for c in sample() {
        let m = c.modulus() as i64;
        for a in 0..m {
            for b in 0..m {
                assert_eq!(c.eval(a * b), &c.eval(a) * &c.eval(b), "{c} at {a}, {b}");
            }
        }
    }
}

#[test]
fn kronecker_characters_of_the_set() {
    for d in [-8i64, -4, -3, 2, 12, 24] {
        let c = DirichletCharacter::kronecker(d).unwrap();
        for n in 1..=1000i64 {
            assert_eq!(c.int_value(n), Some(kronecker(d, n) as i64), "D = {d}, n = {n}");
        }
    }
    assert_eq!(DirichletCharacter::kronecker(2).unwrap().modulus(), 8);
    assert!(chr("kronecker:-4").is_odd());
}

#[test]
fn conjugation() {
    for c in sample() {
        let cc = c.conjugate();
        for n in 0..c.modulus() as i64 {
            assert_eq!(cc.eval(n), c.eval(n).conjugate());
        }
        assert_eq!(cc.conjugate(), c);
    }
}

#[test]
fn zero_convention_and_spec_round_trip() {
    for c in sample() {
        assert!(c.eval(0).is_zero(), "{c}");
        let again: DirichletCharacter = c.spec().parse().unwrap();
        assert_eq!(again, c);
    }
    assert!("kronecker:x".parse::<DirichletCharacter>().is_err());
    assert!("table:3:1,1".parse::<DirichletCharacter>().is_err());
}
