use proptest::prelude::*;
use umps_core::arith::{
    nth_root_of_minus_one, rat, rat_int, rational_reconstruct, reconstruction_bound, ComplexF,
    Field, Fp, FromRational, QuadExt, Rational, Ring, DEFAULT_PRIME, SECOND_PRIME,
};

fn field_axioms<K: Field>(a: &K, b: &K, c: &K) {
    assert_eq!(a.clone() + b, b.clone() + a);
    assert_eq!(a.clone() * b, b.clone() * a);
    assert_eq!((a.clone() + b) + c, a.clone() + &(b.clone() + c));
    assert_eq!((a.clone() * b) * c, a.clone() * &(b.clone() * c));
    assert_eq!(
        a.clone() * &(b.clone() + c),
        a.clone() * b + &(a.clone() * c)
    );
    assert!((a.clone() - a).is_zero());
    assert!((a.clone() + &(-a.clone())).is_zero());
    assert_eq!(a.clone() * &a.one_like(), a.clone());
    match a.inv() {
        Some(i) => assert!((i * a).is_one()),
        None => assert!(a.is_zero()),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn rationals_form_a_field(v in proptest::collection::vec((-50i64..50, 1i64..50), 3)) {
        let q: Vec<Rational> = v.iter().map(|&(n, d)| rat(n, d)).collect();
        field_axioms(&q[0], &q[1], &q[2]);
    }

    #[test]
    fn quadratic_extension_forms_a_field(v in proptest::collection::vec((-20i64..20, -20i64..20, 1i64..20), 3)) {
        let q: Vec<QuadExt> = v.iter().map(|&(a, b, d)| QuadExt::new(rat(a, d), rat(b, d))).collect();
        field_axioms(&q[0], &q[1], &q[2]);
    }

    #[test]
    fn prime_field_axioms(v in proptest::collection::vec(any::<u64>(), 3)) {
        for p in [DEFAULT_PRIME, SECOND_PRIME, 1_000_000_007] {
            let x: Vec<Fp> = v.iter().map(|&n| Fp::new(n % p, p)).collect();
            field_axioms(&x[0], &x[1], &x[2]);
        }
    }

    #[test]
    fn reconstruction_inverts_reduction(n in -1_000_000_000i64..1_000_000_000, d in 1i64..1_000_000_000) {
        let q = rat(n, d);
        let like = Fp::new(0, DEFAULT_PRIME);
        let r = like.from_rational_like(&q).unwrap();
        prop_assert_eq!(rational_reconstruct(r, reconstruction_bound(DEFAULT_PRIME)), Some(q));
    }
}

#[test]
fn reconstruction_examples() {
    let p = DEFAULT_PRIME;
    assert_eq!(rational_reconstruct(Fp::new(1, p), 10), Some(rat_int(1)));
    let half = Fp::new(2, p).inv().unwrap();
    assert_eq!(rational_reconstruct(half, 10), Some(rat(1, 2)));
    assert_eq!(
        rational_reconstruct(Fp::new(p - 1, p), 10),
        Some(rat_int(-1))
    );
}

#[test]
fn reconstruction_fails_outside_the_bound() {
    let p = DEFAULT_PRIME;
    let x = Fp::new(0, p).from_rational_like(&rat(12345, 6789)).unwrap();
    assert_eq!(rational_reconstruct(x, 100), None);
}

#[test]
fn sqrt2_squares_to_two() {
    let s = QuadExt::sqrt2();
    assert_eq!(s.clone() * &s, QuadExt::new(rat_int(2), rat_int(0)));
    let x = QuadExt::new(rat_int(1), rat_int(1));
    assert_eq!(x.norm(), rat_int(-1));
    assert!((x.inv().unwrap() * &x).is_one());
}

#[test]
fn roots_of_minus_one() {
    let close = |a: ComplexF, b: ComplexF| (a - b).norm() < 1e-12;
    assert!(close(nth_root_of_minus_one(1), ComplexF::new(-1.0, 0.0)));
    assert!(close(nth_root_of_minus_one(2), ComplexF::new(0.0, 1.0)));
    for n in 1..=16u32 {
        let z = nth_root_of_minus_one(n);
        assert!(
            (z.powi(n as i32) + ComplexF::new(1.0, 0.0)).norm() < 1e-12,
            "N = {n}"
        );
    }
}

#[test]
fn primes_are_primes() {
    use umps_core::arith::is_prime_u64;
    assert!(is_prime_u64(DEFAULT_PRIME) && is_prime_u64(SECOND_PRIME));
    const { assert!(DEFAULT_PRIME < 1 << 62 && SECOND_PRIME < 1 << 62) };
    assert!(!is_prime_u64(DEFAULT_PRIME - 2));
}
