use proptest::prelude::*;
use umps_core::arith::{nth_root_of_minus_one, rat_int, ComplexF, CyclotomicField, Rational, Ring};
use umps_core::linalg::Mat;
use umps_core::necklace::{CyclicTensor, NecklaceBasis};
use umps_core::poly::{Ideal, MonomialOrder, MultiPoly, PolyRing};
use umps_core::sample::{random_invertible, random_rational_tuple, rng_from_seed};
use umps_core::umps::{
    act_cyclic_tensor, act_gl, conjugate, embed_physical, evaluate_umps,
    generic_injectivity_estimate, join_tuples, project_physical, InjectivityEstimate, MatrixSpace,
    MatrixTuple,
};

const HEIGHT: i64 = 9;

fn q(rows: &[&[i64]]) -> Mat<Rational> {
    Mat::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|&x| rat_int(x)).collect())
            .collect(),
    )
}

fn scalars(vals: &[i64]) -> MatrixTuple<Rational> {
    MatrixTuple::new(vals.iter().map(|&v| q(&[&[v]])).collect()).unwrap()
}

fn tensor(n: usize, d: u8, entries: &[(&str, i64)]) -> CyclicTensor<Rational> {
    let mut t = CyclicTensor::zero(NecklaceBasis::new(n, d), &rat_int(0));
    for (label, v) in entries {
        t.set_coord(label, rat_int(*v)).unwrap();
    }
    t
}

#[test]
fn veronese_points() {
    let t = evaluate_umps(&scalars(&[2, 3]), 3).unwrap();
    assert_eq!(
        t,
        tensor(3, 2, &[("000", 8), ("001", 12), ("011", 18), ("111", 27)])
    );
}

#[test]
fn symbolic_e012_family() {
    // mu stands for 1/lambda
    let ring = PolyRing::grevlex(["lambda", "mu"]);
    let zero = MultiPoly::zero(ring.clone(), &rat_int(0));
    let l = MultiPoly::var(ring.clone(), 0, &rat_int(0));
    let m = MultiPoly::var(ring.clone(), 1, &rat_int(0));
    let e = |i: usize, j: usize, x: &MultiPoly<Rational>| {
        let mut rows = vec![vec![zero.clone(); 2]; 2];
        rows[i][j] = x.clone();
        rows
    };
    let tuple =
        MatrixTuple::from_rows(vec![e(0, 0, &(l.clone() * &l)), e(0, 1, &m), e(1, 0, &m)]).unwrap();
    let t = evaluate_umps(&tuple, 3).unwrap();
    let one = MultiPoly::constant(ring.clone(), rat_int(1));
    let inverse = Ideal::new(ring.clone(), vec![l.clone() * &m - &one]).unwrap();
    let inverse = inverse.groebner(MonomialOrder::GrevLex, None).unwrap();
    for (w, c) in t.iter() {
        let nf = inverse.reduce(c).unwrap();
        match w.label().as_str() {
            "000" => assert_eq!(nf, l.pow(6)),
            "012" => assert_eq!(nf, one),
            _ => assert!(nf.is_zero(), "{w}"),
        }
    }
}

#[test]
fn wstate_family_at_one() {
    let z = nth_root_of_minus_one(4);
    let c = |x: f64| ComplexF::new(x, 0.0);
    let tuple = MatrixTuple::from_rows(vec![
        vec![vec![c(1.0), c(0.0)], vec![c(0.0), z]],
        vec![vec![c(1.0), c(0.0)], vec![c(0.0), -z]],
    ])
    .unwrap();
    let t = evaluate_umps(&tuple, 4).unwrap();
    assert!((t.coord("0001").unwrap() - c(2.0)).norm() < 1e-12);
    assert!((t.coord("0011").unwrap()).norm() < 1e-12);
}

#[test]
fn joins() {
    let a = scalars(&[2, 3]);
    let b = scalars(&[5, 7]);
    let joined = join_tuples(&[a.clone(), b.clone()]).unwrap();
    let want = evaluate_umps(&a, 2)
        .unwrap()
        .add(&evaluate_umps(&b, 2).unwrap());
    assert_eq!(evaluate_umps(&joined, 2).unwrap(), want);
    assert_eq!(want, tensor(2, 2, &[("00", 29), ("01", 41), ("11", 58)]));
    assert_eq!(
        evaluate_umps(&join_tuples(std::slice::from_ref(&a)).unwrap(), 5),
        evaluate_umps(&a, 5)
    );
    assert!(join_tuples(&[a, scalars(&[1, 2, 3])]).is_err());
}

#[test]
fn diagonal_action_scales_by_zero_count() {
    let mut rng = rng_from_seed(3);
    let t = random_rational_tuple(&mut rng, 2, 2, HEIGHT);
    let c = rat_int(5);
    let a = Mat::from_rows(vec![
        vec![c.clone(), rat_int(0)],
        vec![rat_int(0), rat_int(1)],
    ]);
    let before = evaluate_umps(&t, 4).unwrap();
    let after = evaluate_umps(&act_gl(&a, &t).unwrap(), 4).unwrap();
    for ((w, x), (_, y)) in before.iter().zip(after.iter()) {
        assert_eq!(y.clone(), x.clone() * &Ring::pow(&c, w.count(0) as u32));
    }
    assert_eq!(act_gl(&Mat::identity(2, &rat_int(0)), &t).unwrap(), t);
    assert!(act_gl(&q(&[&[1, 1], &[1, 1]]), &t).is_err());
}

#[test]
fn tensor_action_examples() {
    let e1111 = tensor(4, 2, &[("1111", 1)]);
    let shear = q(&[&[1, 1], &[0, 1]]);
    let all_ones = tensor(
        4,
        2,
        &[
            ("0000", 1),
            ("0001", 1),
            ("0011", 1),
            ("0101", 1),
            ("0111", 1),
            ("1111", 1),
        ],
    );
    assert_eq!(act_cyclic_tensor(&shear, &e1111).unwrap(), all_ones);
    let kill = q(&[&[0, 0], &[0, 1]]);
    assert!(act_cyclic_tensor(&kill, &tensor(4, 2, &[("0001", 1)]))
        .unwrap()
        .is_zero());
    assert_eq!(
        act_cyclic_tensor(&Mat::identity(2, &rat_int(0)), &all_ones).unwrap(),
        all_ones
    );
}

#[test]
fn conjugation_examples() {
    let mut rng = rng_from_seed(11);
    let t = random_rational_tuple(&mut rng, 3, 2, HEIGHT);
    let perm = q(&[&[0, 1, 0], &[0, 0, 1], &[1, 0, 0]]);
    assert_eq!(
        evaluate_umps(&conjugate(&t, &perm).unwrap(), 4),
        evaluate_umps(&t, 4)
    );
    assert_eq!(conjugate(&t, &Mat::identity(3, &rat_int(0))).unwrap(), t);
    assert!(conjugate(&t, &q(&[&[1, 0, 0], &[0, 0, 0], &[0, 0, 1]])).is_err());
}

#[test]
fn physical_embedding() {
    let mut rng = rng_from_seed(5);
    let t = random_rational_tuple(&mut rng, 2, 2, HEIGHT);
    let big = evaluate_umps(&embed_physical(&t, 3).unwrap(), 3).unwrap();
    for (w, c) in big.iter() {
        if w.count(2) > 0 {
            assert!(c.is_zero());
        }
    }
    assert_eq!(embed_physical(&t, 2).unwrap(), t);
    assert!(embed_physical(&t, 1).is_err());
    let t4 = evaluate_umps(&embed_physical(&t, 3).unwrap(), 4).unwrap();
    assert_eq!(
        project_physical(&t4, 2).unwrap(),
        evaluate_umps(&t, 4).unwrap()
    );
}

#[test]
fn span_growth_examples() {
    let id = MatrixSpace::new(3, vec![Mat::identity(3, &rat_int(0))]).unwrap();
    for k in 1..5 {
        assert_eq!(id.span_growth(k).unwrap(), 1);
    }
    let mut rng = rng_from_seed(2);
    let pair = random_rational_tuple(&mut rng, 2, 2, HEIGHT);
    let space = MatrixSpace::spanned_by(2, pair.mats()).unwrap();
    assert_eq!(space.span_growth(2).unwrap(), 4);
    let upper = MatrixSpace::new(
        3,
        vec![
            q(&[&[0, 1, 0], &[0, 0, 0], &[0, 0, 0]]),
            q(&[&[0, 0, 1], &[0, 0, 0], &[0, 0, 0]]),
            q(&[&[0, 0, 0], &[0, 0, 1], &[0, 0, 0]]),
        ],
    )
    .unwrap();
    assert_eq!(upper.span_growth(3).unwrap(), 0);
    assert_eq!(
        generic_injectivity_estimate(2, 2, 10, 1).unwrap(),
        InjectivityEstimate::Index(2)
    );
    assert_eq!(
        generic_injectivity_estimate(1, 1, 3, 1).unwrap(),
        InjectivityEstimate::Index(1)
    );
    // 2^3 = 8 words of length 3 cannot span the 9-dimensional Mat_3
    assert_eq!(
        generic_injectivity_estimate(3, 2, 10, 1).unwrap(),
        InjectivityEstimate::Index(4)
    );
}

fn tuple(seed: u64, bond: usize, d: usize) -> MatrixTuple<Rational> {
    random_rational_tuple(&mut rng_from_seed(seed), bond, d, HEIGHT)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn gl_equivariance(seed in any::<u64>(), n in 2usize..6) {
        let t = tuple(seed, 2, 2);
        let a = random_invertible(&mut rng_from_seed(seed ^ 0x9e37), 2, HEIGHT);
        let lhs = evaluate_umps(&act_gl(&a, &t).unwrap(), n).unwrap();
        let rhs = act_cyclic_tensor(&a, &evaluate_umps(&t, n).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn join_additivity(seed in any::<u64>(), n in 1usize..6, d1 in 1usize..3, d2 in 1usize..3) {
        let a = tuple(seed, d1, 2);
        let b = tuple(seed.wrapping_add(1), d2, 2);
        let lhs = evaluate_umps(&join_tuples(&[a.clone(), b.clone()]).unwrap(), n).unwrap();
        let rhs = evaluate_umps(&a, n).unwrap().add(&evaluate_umps(&b, n).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn conjugation_invariance(seed in any::<u64>(), n in 1usize..6, bond in 1usize..4) {
        let t = tuple(seed, bond, 2);
        let p = random_invertible(&mut rng_from_seed(!seed), bond, HEIGHT);
        prop_assert_eq!(evaluate_umps(&conjugate(&t, &p).unwrap(), n).unwrap(), evaluate_umps(&t, n).unwrap());
    }

    #[test]
    fn root_of_unity_invariance(seed in any::<u64>(), n in 2usize..7) {
        let field = CyclotomicField::new(n as u32);
        let t = tuple(seed, 2, 2).map(|x| field.from_rational(x.clone()));
        let zeta = field.zeta_pow(1);
        prop_assert_eq!(evaluate_umps(&t.scale(&zeta), n).unwrap(), evaluate_umps(&t, n).unwrap());
        let finer = CyclotomicField::new(2 * n as u32);
        let t = tuple(seed, 2, 2).map(|x| finer.from_rational(x.clone()));
        let root = finer.zeta_pow(1);
        let scaled = evaluate_umps(&t.scale(&root), n).unwrap();
        prop_assert_eq!(scaled, evaluate_umps(&t, n).unwrap().scale(&root.pow(n as u32)));
    }

    #[test]
    fn trace_is_cyclic(seed in any::<u64>(), word in proptest::collection::vec(0u8..3, 1..9), r in 0usize..9) {
        let t = tuple(seed, 2, 3);
        let r = r % word.len();
        let rotated = [&word[r..], &word[..r]].concat();
        prop_assert_eq!(t.trace_word(&word), t.trace_word(&rotated));
    }

    #[test]
    fn two_site_rank_bound(seed in any::<u64>(), bond in 1usize..3) {
        let d = 6;
        let t = evaluate_umps(&tuple(seed, bond, d), 2).unwrap();
        let m = Mat::from_fn(d, d, |i, j| {
            let (a, b) = (i.min(j), i.max(j));
            t.coord(&format!("{a}{b}")).unwrap().clone()
        });
        prop_assert!(m.rank() <= bond * bond);
    }
}
