//! Dimension, linear span, implicitization, surjectivity and fiber counts
//! for uMPS varieties.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigUint;
use serde_json::{json, Value};
use umps_core::arith::{
    rat_int, rational_reconstruct, reconstruction_bound, Fp, FromRational, Rational, Ring,
    DEFAULT_PRIME, SECOND_PRIME,
};
use umps_core::linalg::{rank, Mat, RowEchelon};
use umps_core::necklace::{binomial, count_binary_necklaces, cyc_dim, CyclicTensor, NecklaceBasis};
use umps_core::poly::{
    dimension_from_leading, format_poly, groebner_mod_p, quotient_degree_from_leading,
    reduce_mod_p, Ideal, Monomial, MonomialOrder, MultiPoly, PolyFile, PolyRing,
};
use umps_core::sample::{
    random_fp, random_rational, random_rational_tuple, rng_from_seed, SeededRng,
};
use umps_core::umps::{evaluate_in_basis, MatrixTuple};
use umps_core::{Error, Result};

use crate::golden;
use crate::trace_algebra::trace_parametrization;

/// Height of the random rational entries used for Jacobians and spans.
const SAMPLE_HEIGHT: i64 = 30;

/// `(d − 1) D² + 1`.
pub fn parameter_bound(bond: usize, d: usize) -> u64 {
    ((d - 1) * bond * bond + 1) as u64
}

/// `min{(d − 1) D² + 1, dim Cyc^N(K^d)}`.
pub fn expected_dimension(bond: usize, d: usize, n: usize) -> u64 {
    parameter_bound(bond, d).min(cyc_dim(n, d as u64))
}

/// Jacobian of `T_N` at `tuple`: one row per necklace, one column per
/// entry `(M_i)_{rc}` in the order `i, r, c`.
pub fn jacobian_matrix<K: Ring>(tuple: &MatrixTuple<K>, basis: &NecklaceBasis) -> Vec<Vec<K>> {
    let bond = tuple.bond();
    let cols = tuple.phys() * bond * bond;
    let like = tuple.like().zero_like();
    let mats = tuple.mats();
    let n = basis.n();
    basis
        .necklaces()
        .iter()
        .map(|w| {
            let word = w.word();
            let mut row = vec![like.clone(); cols];
            for k in 0..n {
                // product of the other letters, read cyclically after position k
                let mut p = if n == 1 {
                    Mat::identity(bond, tuple.like())
                } else {
                    mats[word[(k + 1) % n] as usize].clone()
                };
                for s in 2..n {
                    p = p.mul(&mats[word[(k + s) % n] as usize]);
                }
                let base = word[k] as usize * bond * bond;
                for r in 0..bond {
                    for c in 0..bond {
                        let v = p.get(c, r);
                        if !v.is_zero() {
                            row[base + r * bond + c] = row[base + r * bond + c].clone() + v;
                        }
                    }
                }
            }
            row
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct DimensionReport {
    pub bond: usize,
    pub d: usize,
    pub n: usize,
    pub jacobian_rank: u64,
    pub expected: u64,
    pub ambient: u64,
    pub fills_ambient: bool,
    pub points_sampled: usize,
    pub seed: u64,
}

impl DimensionReport {
    pub fn to_json(&self) -> Value {
        json!({
            "D": self.bond,
            "d": self.d,
            "N": self.n,
            "jacobian_rank": self.jacobian_rank,
            "expected": self.expected,
            "ambient": self.ambient,
            "fills_ambient": self.fills_ambient,
            "points_sampled": self.points_sampled,
            "seed": self.seed,
        })
    }
}

/// Largest exact Jacobian rank of `T_N` over `trials` random rational tuples.
/// Stops early once the upper bound is reached.
pub fn jacobian_dimension(
    bond: usize,
    d: usize,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<DimensionReport> {
    if bond == 0 || d == 0 || n == 0 || trials == 0 {
        return Err(Error::InvalidArgument(
            "D, d, N and trials must be positive".into(),
        ));
    }
    if d > 36 {
        return Err(Error::InvalidArgument(format!(
            "d = {d} exceeds the necklace alphabet"
        )));
    }
    let basis = NecklaceBasis::new(n, d as u8);
    let expected = expected_dimension(bond, d, n);
    let mut rng = rng_from_seed(seed);
    let mut best = 0u64;
    let mut used = 0;
    for _ in 0..trials {
        used += 1;
        let t = random_rational_tuple(&mut rng, bond, d, SAMPLE_HEIGHT);
        best = best.max(rank(&jacobian_matrix(&t, &basis)) as u64);
        if best == expected {
            break;
        }
    }
    let ambient = basis.len() as u64;
    Ok(DimensionReport {
        bond,
        d,
        n,
        jacobian_rank: best,
        expected,
        ambient,
        fills_ambient: best == ambient,
        points_sampled: used,
        seed,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpanReport {
    pub bond: usize,
    pub d: usize,
    pub n: usize,
    pub rank: usize,
    pub ambient: usize,
    pub samples: usize,
    pub primes: [u64; 2],
    pub seed: u64,
}

impl SpanReport {
    pub fn to_json(&self) -> Value {
        json!({
            "D": self.bond,
            "d": self.d,
            "N": self.n,
            "span_dimension": self.rank,
            "ambient": self.ambient,
            "samples": self.samples,
            "primes": self.primes,
            "seed": self.seed,
        })
    }
}

/// Dimension of the linear span of uMPS(D, d, N): the exact rank of
/// `samples` evaluations, cross-checked modulo two primes.
pub fn linear_span_dimension(
    bond: usize,
    d: usize,
    n: usize,
    samples: usize,
    seed: u64,
) -> Result<SpanReport> {
    if bond == 0 || d == 0 || d > 36 || n == 0 {
        return Err(Error::InvalidArgument(
            "D, d, N must be positive and d ≤ 36".into(),
        ));
    }
    let basis = NecklaceBasis::new(n, d as u8);
    if samples < basis.len() {
        return Err(Error::InvalidArgument(format!(
            "need at least {} samples, got {samples}",
            basis.len()
        )));
    }
    let mut rng = rng_from_seed(seed);
    let rows: Vec<Vec<Rational>> = (0..samples)
        .map(|_| {
            evaluate_in_basis(
                &random_rational_tuple(&mut rng, bond, d, SAMPLE_HEIGHT),
                &basis,
            )
            .into_coords()
        })
        .collect();
    let r = rank(&rows);
    let primes = [DEFAULT_PRIME, SECOND_PRIME];
    for p in primes {
        let like = Fp::new(0, p);
        let reduced: Option<Vec<Vec<Fp>>> = rows
            .iter()
            .map(|row| row.iter().map(|q| like.from_rational_like(q)).collect())
            .collect();
        let reduced = reduced
            .ok_or_else(|| Error::InvalidArgument(format!("prime {p} divides a denominator")))?;
        let rp = rank(&reduced);
        if rp != r {
            return Err(Error::Reconstruction(format!(
                "span rank {r} over QQ but {rp} mod {p}"
            )));
        }
    }
    Ok(SpanReport {
        bond,
        d,
        n,
        rank: r,
        ambient: basis.len(),
        samples,
        primes,
        seed,
    })
}

/// Both sides of the necklace-count inequality for words with `n0` zeros
/// and `n1` ones.
#[derive(Clone, Debug, PartialEq)]
pub struct SubspacePrediction {
    pub necklaces: BigUint,
    pub bound: BigUint,
    pub holds: bool,
}

/// True iff `C(N₀, N₁) > binom(N₀ + D − 1, D − 1) · binom(N₁ + D² − D, D² − D)`,
/// in which case the closure lies in a strict linear subspace.
pub fn strict_subspace_predictor(bond: u64, n0: u64, n1: u64) -> Result<SubspacePrediction> {
    if n0 + n1 == 0 || bond == 0 {
        return Err(Error::InvalidArgument("need N₀ + N₁ ≥ 1 and D ≥ 1".into()));
    }
    let necklaces = count_binary_necklaces(n0, n1);
    let sq = bond * bond - bond;
    let bound = binomial(n0 + bond - 1, bond - 1) * binomial(n1 + sq, sq);
    let holds = necklaces > bound;
    Ok(SubspacePrediction {
        necklaces,
        bound,
        holds,
    })
}

/// Exponent vectors of all monomials of degree `k` in `m` variables, in
/// lexicographically decreasing order.
pub fn exponent_vectors(m: usize, k: u32) -> Vec<Vec<u32>> {
    fn rec(m: usize, k: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == m - 1 {
            prefix.push(k);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=k).rev() {
            prefix.push(e);
            rec(m, k - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if m > 0 {
        rec(m, k, &mut Vec::with_capacity(m), &mut out);
    } else if k == 0 {
        out.push(Vec::new());
    }
    out
}

fn monomial_values<K: Ring>(exps: &[Vec<u32>], x: &[K], k: u32) -> Vec<K> {
    let one = x[0].one_like();
    let powers: Vec<Vec<K>> = x
        .iter()
        .map(|xi| {
            let mut v = vec![one.clone()];
            for e in 1..=k as usize {
                let next = v[e - 1].clone() * xi;
                v.push(next);
            }
            v
        })
        .collect();
    exps.iter()
        .map(|e| {
            let mut acc = one.clone();
            for (i, &ei) in e.iter().enumerate() {
                if ei > 0 {
                    acc = acc * &powers[i][ei as usize];
                }
            }
            acc
        })
        .collect()
}

/// Consecutive non-increasing samples after which a rank is considered
/// stable.
const STABLE_AFTER: usize = 32;

#[derive(Clone, Debug, PartialEq)]
pub struct DegreeCount {
    pub degree: u32,
    pub monomials: usize,
    pub vanishing_dim: usize,
    pub minimal_generators: usize,
    pub samples: usize,
}

#[derive(Clone, Debug)]
pub struct LiftedGenerators {
    pub degree: u32,
    pub polys: Vec<MultiPoly<Rational>>,
}

#[derive(Clone, Debug)]
pub struct GeneratorCountReport {
    pub bond: usize,
    pub d: usize,
    pub n: usize,
    pub degree_bound: u32,
    pub degrees: Vec<DegreeCount>,
    pub counts_agree: bool,
    pub lifted: Vec<LiftedGenerators>,
    /// Set for N = 4 when a sextic was lifted.
    pub matches_golden: Option<bool>,
    pub primes: [u64; 2],
    pub seed: u64,
}

impl GeneratorCountReport {
    pub fn generator_counts(&self) -> Vec<(u32, usize)> {
        self.degrees
            .iter()
            .map(|c| (c.degree, c.minimal_generators))
            .collect()
    }

    pub fn total_generators(&self) -> usize {
        self.degrees.iter().map(|c| c.minimal_generators).sum()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "D": self.bond,
            "d": self.d,
            "N": self.n,
            "degree_bound": self.degree_bound,
            "degrees": self.degrees.iter().map(|c| json!({
                "degree": c.degree,
                "monomials": c.monomials,
                "vanishing_dim": c.vanishing_dim,
                "minimal_generators": c.minimal_generators,
                "samples": c.samples,
            })).collect::<Vec<_>>(),
            "counts_agree": self.counts_agree,
            "lifted": self.lifted.iter().map(|l| json!({
                "degree": l.degree,
                "polys": l.polys.iter().map(format_poly).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "matches_golden_f224": self.matches_golden,
            "primes": self.primes,
            "seed": self.seed,
        })
    }
}

/// Ring on the necklace coordinates of `N`, variables `x<label>`.
pub fn necklace_ring(n: usize, d: u8) -> Arc<PolyRing> {
    let basis = NecklaceBasis::new(n, d);
    PolyRing::grevlex(basis.necklaces().iter().map(|w| format!("x{}", w.label())))
}

struct PrimeRun {
    counts: Vec<DegreeCount>,
    kernels: Vec<Vec<Vec<Fp>>>,
}

fn implicitize_mod_p(
    phi: &[MultiPoly<Fp>],
    bound: u32,
    rng: &mut SeededRng,
    p: u64,
) -> Result<PrimeRun> {
    let m = phi.len();
    let mut counts = Vec::new();
    let mut kernels: Vec<Vec<Vec<Fp>>> = Vec::new();
    let mut prev_exps: Vec<Vec<u32>> = Vec::new();
    for k in 1..=bound {
        let exps = exponent_vectors(m, k);
        let cols = exps.len();
        let mut ech = RowEchelon::<Fp>::new(cols);
        let mut stale = 0;
        let mut samples = 0;
        while ech.rank() < cols && stale < STABLE_AFTER {
            let t: Vec<Fp> = (0..5).map(|_| random_fp(rng, p)).collect();
            let x: Vec<Fp> = phi.iter().map(|f| f.evaluate(&t)).collect::<Result<_>>()?;
            samples += 1;
            if ech.insert(monomial_values(&exps, &x, k)) {
                stale = 0;
            } else {
                stale += 1;
            }
        }
        let kernel = ech.null_space(&Fp::new(0, p));
        let lower = match kernels.last() {
            Some(prev) if !prev.is_empty() => {
                let index: HashMap<&[u32], usize> = exps
                    .iter()
                    .enumerate()
                    .map(|(i, e)| (e.as_slice(), i))
                    .collect();
                let mut prod = RowEchelon::<Fp>::new(cols);
                'outer: for g in prev {
                    for i in 0..m {
                        let mut v = vec![Fp::new(0, p); cols];
                        for (c, e) in g.iter().zip(&prev_exps) {
                            if c.is_zero() {
                                continue;
                            }
                            let mut e = e.clone();
                            e[i] += 1;
                            v[index[e.as_slice()]] = *c;
                        }
                        prod.insert(v);
                        if prod.rank() == kernel.len() {
                            break 'outer;
                        }
                    }
                }
                prod.rank()
            }
            _ => 0,
        };
        counts.push(DegreeCount {
            degree: k,
            monomials: cols,
            vanishing_dim: kernel.len(),
            minimal_generators: kernel.len() - lower,
            samples,
        });
        kernels.push(kernel);
        prev_exps = exps;
    }
    Ok(PrimeRun { counts, kernels })
}

/// Per-degree dimensions of the forms vanishing on uMPS(2, 2, N) and the
/// number of minimal generators in each degree, computed from sampled
/// evaluations of the trace parametrization modulo two primes.
pub fn implicitize_by_degree(
    bond: usize,
    d: usize,
    n: usize,
    degree_bound: u32,
    seed: u64,
) -> Result<GeneratorCountReport> {
    implicitize_with_primes(
        bond,
        d,
        n,
        degree_bound,
        seed,
        [DEFAULT_PRIME, SECOND_PRIME],
    )
}

pub fn implicitize_with_primes(
    bond: usize,
    d: usize,
    n: usize,
    degree_bound: u32,
    seed: u64,
    primes: [u64; 2],
) -> Result<GeneratorCountReport> {
    if bond != 2 || d != 2 {
        return Err(Error::InvalidArgument(
            "implicitization needs D = d = 2".into(),
        ));
    }
    if degree_bound == 0 || n == 0 {
        return Err(Error::InvalidArgument(
            "need N ≥ 1 and a degree bound ≥ 1".into(),
        ));
    }
    let phi = trace_parametrization(n)?;
    let runs: Vec<Result<PrimeRun>> = std::thread::scope(|s| {
        let handles: Vec<_> = primes
            .iter()
            .enumerate()
            .map(|(i, &p)| {
                let phi = &phi;
                s.spawn(move || {
                    let phip = phi
                        .iter()
                        .map(|f| reduce_mod_p(f, p))
                        .collect::<Option<Vec<_>>>()
                        .ok_or_else(|| {
                            Error::InvalidArgument(format!("prime {p} divides a denominator"))
                        })?;
                    let mut rng = rng_from_seed(seed.wrapping_add(i as u64));
                    implicitize_mod_p(&phip, degree_bound, &mut rng, p)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker panicked"))
            .collect()
    });
    let mut runs = runs.into_iter();
    let (a, b) = (runs.next().unwrap()?, runs.next().unwrap()?);
    let counts_agree = a.counts.iter().zip(&b.counts).all(|(x, y)| {
        x.vanishing_dim == y.vanishing_dim && x.minimal_generators == y.minimal_generators
    });
    let ring = necklace_ring(n, 2);
    let mut lifted = Vec::new();
    for (i, c) in a.counts.iter().enumerate() {
        if !(1..=3).contains(&c.minimal_generators) || c.minimal_generators != c.vanishing_dim {
            continue;
        }
        if let Some(polys) = lift_kernel(&ring, c.degree, &a.kernels[i], &b.kernels[i], &phi, seed)?
        {
            lifted.push(LiftedGenerators {
                degree: c.degree,
                polys,
            });
        }
    }
    let matches_golden = if n == 4 {
        lifted
            .iter()
            .find(|l| l.degree == 6 && l.polys.len() == 1)
            .map(|l| proportional(&l.polys[0], &golden::f224()))
    } else {
        None
    };
    Ok(GeneratorCountReport {
        bond,
        d,
        n,
        degree_bound,
        degrees: a.counts,
        counts_agree,
        lifted,
        matches_golden,
        primes,
        seed,
    })
}

/// Reconstructs kernel vectors over ℚ, checks them against the second prime
/// and confirms vanishing on the exact image at a few rational points.
fn lift_kernel(
    ring: &Arc<PolyRing>,
    k: u32,
    ka: &[Vec<Fp>],
    kb: &[Vec<Fp>],
    phi: &[MultiPoly<Rational>],
    seed: u64,
) -> Result<Option<Vec<MultiPoly<Rational>>>> {
    if ka.len() != kb.len() {
        return Ok(None);
    }
    let exps = exponent_vectors(ring.nvars(), k);
    let zero = rat_int(0);
    let mut out = Vec::new();
    for (va, vb) in ka.iter().zip(kb) {
        let bound = reconstruction_bound(va[0].modulus());
        let mut terms = Vec::new();
        for ((ca, cb), e) in va.iter().zip(vb).zip(&exps) {
            let Some(q) = rational_reconstruct(*ca, bound) else {
                return Ok(None);
            };
            if cb.from_rational_like(&q) != Some(*cb) {
                return Ok(None);
            }
            if !q.is_zero() {
                terms.push((Monomial::from_exponents(e), q));
            }
        }
        out.push(MultiPoly::from_terms(ring.clone(), &zero, terms));
    }
    let mut rng = rng_from_seed(seed ^ 0x5eed);
    for _ in 0..3 {
        let t: Vec<Rational> = (0..5)
            .map(|_| random_rational(&mut rng, SAMPLE_HEIGHT))
            .collect();
        let x: Vec<Rational> = phi.iter().map(|f| f.evaluate(&t)).collect::<Result<_>>()?;
        for g in &out {
            if !g.evaluate(&x)?.is_zero() {
                return Ok(None);
            }
        }
    }
    Ok(Some(out))
}

/// Whether `f` and `g` (in rings with the same variable names) differ by a
/// nonzero scalar.
pub fn proportional(f: &MultiPoly<Rational>, g: &MultiPoly<Rational>) -> bool {
    let Ok(f) = f.clone().into_ring(g.ring().clone()) else {
        return false;
    };
    match (f.leading_coeff(), g.leading_coeff()) {
        (Some(a), Some(b)) => f.scale(b) == g.scale(a),
        _ => f.is_zero() && g.is_zero(),
    }
}

/// A linear parametrization of D×D matrix tuples: every entry is a linear
/// form in the parameters.
#[derive(Clone, Debug)]
pub struct LinearSubspace {
    pub ring: Arc<PolyRing>,
    pub tuple: MatrixTuple<MultiPoly<Rational>>,
}

impl LinearSubspace {
    /// Entries listed matrix by matrix, row-major.
    pub fn from_file(file: &PolyFile<Rational>, bond: usize, d: usize) -> Result<Self> {
        if file.polys.len() != d * bond * bond {
            return Err(Error::Shape(format!(
                "expected {} entries, got {}",
                d * bond * bond,
                file.polys.len()
            )));
        }
        let mats = file
            .polys
            .chunks(bond * bond)
            .map(|m| m.chunks(bond).map(|r| r.to_vec()).collect())
            .collect();
        Ok(LinearSubspace {
            ring: file.ring.clone(),
            tuple: MatrixTuple::from_rows(mats)?,
        })
    }

    pub fn from_text(text: &str, bond: usize, d: usize) -> Result<Self> {
        Self::from_file(&PolyFile::parse(text)?, bond, d)
    }

    /// The six-parameter (3,2,4) subspace shipped with the crate.
    pub fn example_324() -> Self {
        Self::from_file(&golden::subspace_324(), 3, 2).expect("golden subspace is well formed")
    }

    pub fn params(&self) -> usize {
        self.ring.nvars()
    }
}

/// How an ideal dimension was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroebnerMethod {
    Rational,
    Modular,
}

impl GroebnerMethod {
    pub fn name(self) -> &'static str {
        match self {
            GroebnerMethod::Rational => "groebner over QQ",
            GroebnerMethod::Modular => "two-prime modular groebner",
        }
    }
}

/// Leading monomials of the reduced grevlex basis. Homogeneous ideals go
/// straight to two primes: a nontrivial zero over ℚ reduces to one mod p,
/// so the modular dimension is an upper bound and dimension 0 is certified.
/// Other ideals are tried over ℚ within `budget` first.
fn leading_monomials(
    ideal: &Ideal<Rational>,
    budget: Option<u64>,
) -> Result<(Vec<Monomial>, GroebnerMethod)> {
    if !ideal.generators().iter().all(MultiPoly::is_homogeneous) {
        match ideal.groebner(MonomialOrder::GrevLex, budget) {
            Ok(g) => return Ok((g.leading_monomials()?, GroebnerMethod::Rational)),
            Err(Error::BudgetExceeded(_)) => {}
            Err(e) => return Err(e),
        }
    }
    let (g1, g2) = std::thread::scope(|s| {
        let h = s.spawn(|| groebner_mod_p(ideal, MonomialOrder::GrevLex, SECOND_PRIME, None));
        let g1 = groebner_mod_p(ideal, MonomialOrder::GrevLex, DEFAULT_PRIME, None);
        (g1, h.join().expect("worker panicked"))
    });
    let (g1, g2) = (g1?, g2?);
    let (l1, l2) = (g1.leading_monomials()?, g2.leading_monomials()?);
    if l1 != l2 {
        return Err(Error::Reconstruction(
            "leading monomials differ between the two primes".into(),
        ));
    }
    Ok((l1, GroebnerMethod::Modular))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SurjectivityVerdict {
    /// Ideal dimension 0 and the variety has full dimension.
    ClosedAndFills,
    /// Fewer parameters than the projective image needs.
    PreconditionViolated,
    NoConclusion,
}

impl SurjectivityVerdict {
    pub fn name(&self) -> &'static str {
        match self {
            SurjectivityVerdict::ClosedAndFills => "image closed and fills",
            SurjectivityVerdict::PreconditionViolated => "precondition violated",
            SurjectivityVerdict::NoConclusion => "no conclusion",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SurjectivityReport {
    pub bond: usize,
    pub d: usize,
    pub n: usize,
    pub params: usize,
    pub ideal_dim: i64,
    pub image_dim: u64,
    pub fills_ambient: bool,
    pub verdict: SurjectivityVerdict,
    pub method: GroebnerMethod,
    pub seed: u64,
}

impl SurjectivityReport {
    pub fn to_json(&self) -> Value {
        json!({
            "D": self.bond,
            "d": self.d,
            "N": self.n,
            "params": self.params,
            "ideal_dim": self.ideal_dim,
            "jacobian_rank": self.image_dim,
            "fills_ambient": self.fills_ambient,
            "verdict": self.verdict.name(),
            "method": self.method.name(),
            "seed": self.seed,
        })
    }
}

/// Dimension of the ideal of all necklace coordinates of `T_N` restricted
/// to a linear subspace. Dimension 0 means the restricted map misses the
/// base locus, so its image is closed.
pub fn surjectivity_check(
    subspace: &LinearSubspace,
    n: usize,
    budget: Option<u64>,
    seed: u64,
) -> Result<SurjectivityReport> {
    let (bond, d) = (subspace.tuple.bond(), subspace.tuple.phys());
    let dims = jacobian_dimension(bond, d, n, 4, seed)?;
    let basis = NecklaceBasis::new(n, d as u8);
    let coords = evaluate_in_basis(&subspace.tuple, &basis).into_coords();
    let ideal = Ideal::new(subspace.ring.clone(), coords)?;
    let (ideal_dim, method) = if ideal.is_zero_ideal() {
        (subspace.params() as i64, GroebnerMethod::Rational)
    } else {
        let (lms, method) = leading_monomials(&ideal, budget)?;
        (dimension_from_leading(&lms, subspace.params()), method)
    };
    let params = subspace.params();
    let verdict = if (params as u64) < dims.jacobian_rank {
        SurjectivityVerdict::PreconditionViolated
    } else if ideal_dim == 0 && dims.fills_ambient {
        SurjectivityVerdict::ClosedAndFills
    } else {
        SurjectivityVerdict::NoConclusion
    };
    Ok(SurjectivityReport {
        bond,
        d,
        n,
        params,
        ideal_dim,
        image_dim: dims.jacobian_rank,
        fills_ambient: dims.fills_ambient,
        verdict,
        method,
        seed,
    })
}

#[derive(Clone, Debug)]
pub struct FiberReport {
    pub n: usize,
    pub seed: u64,
    pub invariants: Vec<Rational>,
    pub target: CyclicTensor<Rational>,
    pub ideal_dim: i64,
    pub degree: Option<u64>,
    pub matches_n: bool,
    pub method: GroebnerMethod,
}

impl FiberReport {
    pub fn to_json(&self) -> Value {
        json!({
            "N": self.n,
            "seed": self.seed,
            "invariants": self.invariants.iter().map(|q| q.to_string()).collect::<Vec<_>>(),
            "target": self.target.to_json(),
            "ideal_dim": self.ideal_dim,
            "degree": self.degree,
            "matches_N": self.matches_n,
            "method": self.method.name(),
        })
    }
}

/// Rank of the Jacobian of `phi` (polynomials in t1..t5) at `t`.
pub fn parametrization_jacobian_rank(phi: &[MultiPoly<Rational>], t: &[Rational]) -> Result<usize> {
    let mut rows = Vec::with_capacity(phi.len());
    for f in phi {
        rows.push(
            (0..5)
                .map(|j| f.derivative(j).evaluate(t))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    Ok(rank(&rows))
}

/// Height of the random invariant vectors used as generic targets.
const TARGET_HEIGHT: i64 = 20;

/// Number of invariant vectors with the same image as a random one.
/// Targets where the Jacobian of φ_N drops rank are resampled.
pub fn fiber_count(n: usize, seed: u64, budget: Option<u64>) -> Result<FiberReport> {
    if n < 5 {
        return Err(Error::InvalidArgument(format!(
            "fiber count needs N ≥ 5, got {n}"
        )));
    }
    let phi = trace_parametrization(n)?;
    let mut rng = rng_from_seed(seed);
    for _ in 0..16 {
        let t: Vec<Rational> = (0..5)
            .map(|_| random_rational(&mut rng, TARGET_HEIGHT))
            .collect();
        if parametrization_jacobian_rank(&phi, &t)? < 5 {
            continue;
        }
        let coords: Vec<Rational> = phi.iter().map(|f| f.evaluate(&t)).collect::<Result<_>>()?;
        let target = CyclicTensor::new(NecklaceBasis::new(n, 2), coords);
        let mut report = fiber_for_target(&phi, &target, budget)?;
        report.seed = seed;
        report.invariants = t;
        return Ok(report);
    }
    Err(Error::InvalidArgument("no generic target found".into()))
}

/// Fiber of φ_N over a given tensor. The zero tensor is refused: its fiber
/// contains every nilpotent pair and is not finite.
pub fn fiber_for_target(
    phi: &[MultiPoly<Rational>],
    target: &CyclicTensor<Rational>,
    budget: Option<u64>,
) -> Result<FiberReport> {
    if target.is_zero() {
        return Err(Error::InvalidArgument("zero target is not generic".into()));
    }
    if phi.len() != target.coords().len() {
        return Err(Error::Shape(
            "target and parametrization sizes differ".into(),
        ));
    }
    let ring = phi[0].ring().clone();
    let gens = phi
        .iter()
        .zip(target.coords())
        .map(|(f, c)| f.clone() - MultiPoly::constant(ring.clone(), c.clone()))
        .collect();
    let ideal = Ideal::new(ring, gens)?;
    let (lms, method) = leading_monomials(&ideal, budget)?;
    let ideal_dim = dimension_from_leading(&lms, 5);
    let degree = if ideal_dim == 0 {
        Some(quotient_degree_from_leading(&lms, 5)?)
    } else {
        None
    };
    let n = target.n();
    Ok(FiberReport {
        n,
        seed: 0,
        invariants: Vec::new(),
        target: target.clone(),
        ideal_dim,
        degree,
        matches_n: ideal_dim == 0 && degree == Some(n as u64),
        method,
    })
}

/// Letters of the closedness table for d = 2, rows D = 1..4, columns
/// N = 1.. (`F` fills, `C` closed, `N` not closed).
pub const TABLE_LETTERS: [&str; 4] = ["FCCCCCC", "FFFNNNN", "FFFF", "FFFF"];

/// Reference row labels of the expected-dimension column.
pub const TABLE_ROW_LABELS: [u64; 4] = [2, 5, 10, 27];

pub fn table_letter(bond: usize, n: usize) -> Option<char> {
    TABLE_LETTERS
        .get(bond.checked_sub(1)?)?
        .chars()
        .nth(n.checked_sub(1)?)
}

/// Rows whose reference label differs from `(d − 1) D² + 1` at d = 2, as
/// `(D, reference, computed)`.
pub fn row_label_discrepancies() -> Vec<(usize, u64, u64)> {
    TABLE_ROW_LABELS
        .iter()
        .enumerate()
        .map(|(i, &l)| (i + 1, l, parameter_bound(i + 1, 2)))
        .filter(|(_, l, c)| l != c)
        .collect()
}
