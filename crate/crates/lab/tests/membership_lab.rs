use proptest::prelude::*;
use umps_core::arith::{rat, rat_int, QuadExt, Rational};
use umps_core::necklace::{CyclicTensor, NecklaceBasis};
use umps_core::poly::PolyFile;
use umps_core::sample::{random_rational_tuple, rng_from_seed};
use umps_core::umps::{evaluate_umps, MatrixTuple};
use umps_lab::golden;
use umps_lab::membership_lab::*;

/// `‖T_N(ℳ_λ) − target‖` computed through the plain uMPS map.
fn residual_by_evaluation(family: &LimitFamily, lambda: &Rational) -> f64 {
    let field = family.base.like().field().clone();
    let mats = family
        .base
        .mats()
        .iter()
        .zip(&family.exponents)
        .map(|(m, &e)| {
            let s = field.from_rational(lambda.pow(e as i32));
            m.map(|x| x.clone() * &s)
        })
        .collect();
    let t = evaluate_umps(&MatrixTuple::new(mats).unwrap(), family.n).unwrap();
    t.sub(&family.target)
        .coords()
        .iter()
        .map(|c| c.to_complex().norm_sqr())
        .sum::<f64>()
        .sqrt()
}

fn basis_point(terms: &[(&str, QuadExt)]) -> CyclicTensor<QuadExt> {
    let mut t = CyclicTensor::zero(
        NecklaceBasis::new(4, 2),
        &QuadExt::from_rational(rat_int(0)),
    );
    for (label, c) in terms {
        t.set_coord(label, c.clone()).unwrap();
    }
    t
}

#[test]
fn e012_residual_is_lambda_to_the_sixth() {
    let family = builtin_family("e012").unwrap();
    assert_eq!((family.bond(), family.phys(), family.n), (2, 3, 3));
    for lambda in [0.5, 0.1, 0.03] {
        assert!((family.residual_norm(lambda) - lambda.powi(6)).abs() <= 1e-12 * lambda.powi(6));
    }
    let exact = family.evaluate_exact(&rat(1, 2)).unwrap();
    assert_eq!(exact.coord("012").unwrap().to_complex().re, 1.0);
    assert!((exact.coord("000").unwrap().to_complex().re - 1.0 / 64.0).abs() < 1e-15);
    assert!(family.evaluate_exact(&rat_int(0)).is_err());
}

#[test]
fn residuals_match_direct_evaluation() {
    for name in [
        "e012",
        "wstate(3)",
        "wstate(4)",
        "wstate(5)",
        "wstate_real(4)",
        "wstate_real(5)",
    ] {
        let family = builtin_family(name).unwrap();
        for (lambda, approx) in [(rat(1, 2), 0.5), (rat(1, 4), 0.25), (rat(3, 4), 0.75)] {
            let direct = residual_by_evaluation(&family, &lambda);
            let fast = family.residual_norm(approx);
            assert!(
                (direct - fast).abs() <= 1e-9 * direct.max(1e-300),
                "{name}: {direct} vs {fast}"
            );
        }
    }
}

#[test]
fn fitted_rates() {
    let grid = default_grid();
    for (name, rate) in [
        ("e012", 6.0),
        ("wstate(4)", 8.0),
        ("wstate(5)", 10.0),
        ("wstate_real(4)", 4.0),
        ("wstate_real(5)", 5.0),
    ] {
        let family = builtin_family(name).unwrap();
        assert_eq!(family.residual_order(), Some(rate as i64));
        let report = limit_experiment(&family, &grid).unwrap();
        let slope = report.slope.unwrap();
        assert!(
            (slope - rate).abs() <= RATE_TOLERANCE,
            "{name}: slope {slope}"
        );
        assert!(report.pass && !report.exact);
    }
}

#[test]
fn limit_edge_cases() {
    let tuple =
        MatrixTuple::from_rows(vec![vec![vec![rat_int(2)]], vec![vec![rat_int(3)]]]).unwrap();
    let constant = LimitFamily::constant("const", &tuple, 4).unwrap();
    assert_eq!(constant.residual_order(), None);
    let report = limit_experiment(&constant, &default_grid()).unwrap();
    assert!(report.exact && report.pass && report.slope.is_none());

    let family = builtin_family("wstate(4)").unwrap();
    assert!(limit_experiment(&family, &[0.1, 0.01]).is_err());
    assert!(limit_experiment(&family, &[0.01, 0.1, 0.001]).is_err());
    assert!(limit_experiment(&family, &[0.1, -0.01, -0.1]).is_err());
    assert!(limit_experiment(&builtin_family("wstate(8)").unwrap(), &default_grid()).is_err());

    for bad in ["wstate(2)", "wstate(x)", "ghz(4)", "e013", "wstate_real(1)"] {
        assert!(builtin_family(bad).is_err(), "{bad}");
    }
}

#[test]
fn e012_certificate() {
    let cert = certify_not_member_e012().unwrap();
    assert!(cert.jordan.infeasible && cert.diagonal.infeasible && cert.certified);
    assert!(cert.condensed_match);
    assert!(!cert.control.infeasible);
    assert!(cert.condensed_diagonal.infeasible);
    let json = cert.to_json();
    assert_eq!(json["verdict"], true);
    assert_eq!(json["systems"].as_array().unwrap().len(), 5);
    assert!(!cert.condensed_jordan.infeasible);
}

#[test]
fn wstate_certificates() {
    for n in 4..=8 {
        let cert = certify_not_member_wstate(n, None).unwrap();
        assert!(cert.certified && !cert.member(), "N = {n}");
    }
    let three = certify_not_member_wstate(3, None).unwrap();
    assert!(three.member() && !three.certified);
    assert!(certify_not_member_wstate(2, None).is_err());
    assert!(certify_not_member_wstate(9, None).is_err());
}

#[test]
fn reference_points() {
    let zero = QuadExt::from_rational(rat_int(0));
    let one = QuadExt::from_rational(rat_int(1));
    let s2 = QuadExt::new(rat_int(0), rat_int(1));

    let v = decide_membership_224(&basis_point(&[("0101", one.clone())])).unwrap();
    assert_eq!((v.in_closure, v.in_set), (true, Some(true)));

    let v = decide_membership_224(&basis_point(&[("0001", one.clone())])).unwrap();
    assert_eq!((v.in_closure, v.in_set), (true, Some(false)));
    assert!(v.certificate.iter().any(|c| c.contains("V(I1)")));

    for sign in [s2.clone(), -s2.clone()] {
        let v =
            decide_membership_224(&basis_point(&[("0011", one.clone()), ("0101", sign)])).unwrap();
        assert_eq!((v.in_closure, v.in_set), (true, Some(false)));
    }

    let v = decide_membership_224(&basis_point(&[
        ("0000", one.clone()),
        ("1111", one.clone()),
    ]))
    .unwrap();
    assert!(v.in_closure && v.in_set == Some(true));

    let v = decide_membership_224(&basis_point(&[("0000", one.clone()), ("0011", one)])).unwrap();
    assert_eq!((v.in_closure, v.in_set), (false, Some(false)));

    assert!(decide_membership_224(&CyclicTensor::zero(NecklaceBasis::new(5, 2), &zero)).is_err());
}

#[test]
fn random_points_are_members() {
    let mut rng = rng_from_seed(11);
    for _ in 0..1000 {
        let t = evaluate_umps(&random_rational_tuple(&mut rng, 2, 2, 100), 4).unwrap();
        let v = decide_membership_224_rational(&t).unwrap();
        assert!(
            v.in_closure && v.in_set == Some(true),
            "{:?}",
            v.certificate
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn membership_is_scale_invariant(seed in any::<u64>(), num in 1i64..50, den in 1i64..50, neg in any::<bool>()) {
        let mut rng = rng_from_seed(seed);
        let t = evaluate_umps(&random_rational_tuple(&mut rng, 2, 2, 20), 4).unwrap();
        let c = rat(if neg { -num } else { num }, den);
        let a = decide_membership_224_rational(&t).unwrap();
        let b = decide_membership_224_rational(&t.scale(&c)).unwrap();
        prop_assert_eq!((a.in_closure, a.in_set), (b.in_closure, b.in_set));
    }
}

#[test]
fn trivial_cases() {
    use TrivialCase::*;
    assert_eq!(
        trivial_case_check(3, 1, 5),
        Closed(TrivialReason::FullSpace)
    );
    assert_eq!(
        trivial_case_check(3, 2, 1),
        Closed(TrivialReason::FullSpace)
    );
    assert_eq!(trivial_case_check(1, 2, 7), Closed(TrivialReason::Veronese));
    assert_eq!(
        trivial_case_check(4, 3, 2),
        Closed(TrivialReason::BoundedRankSymmetric)
    );
    assert_eq!(trivial_case_check(2, 2, 4), Nontrivial);
}

#[test]
fn golden_files_round_trip() {
    for (name, text) in golden::FILES {
        let rendered = if text.contains("over QQ(sqrt2)") {
            let file = PolyFile::<QuadExt>::parse(text).unwrap();
            let again = PolyFile::<QuadExt>::parse(&file.render()).unwrap();
            assert_eq!(again, file, "{name}");
            file.render()
        } else {
            let file = PolyFile::<Rational>::parse(text).unwrap();
            let again = PolyFile::<Rational>::parse(&file.render()).unwrap();
            assert_eq!(again, file, "{name}");
            file.render()
        };
        assert!(!rendered.is_empty());
    }
    assert_eq!(golden::f224().degree(), Some(6));
}
