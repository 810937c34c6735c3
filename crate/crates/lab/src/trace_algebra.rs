//! The trace parametrization for pairs of 2×2 matrices.
//!
//! The ring of conjugation invariants of a pair `(M₀, M₁)` is the free
//! polynomial ring on `t1 = tr M₀, t2 = tr M₁, t3 = tr M₀², t4 = tr M₀M₁,
//! t5 = tr M₁²`. Every trace word is therefore a unique polynomial in the
//! `t`'s; we find it by fitting over a prime field and confirm it over ℚ.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use umps_core::arith::{
    rat_int, rational_reconstruct, reconstruction_bound, Fp, Rational, Ring, DEFAULT_PRIME,
    SECOND_PRIME,
};
use umps_core::linalg::{solve_unique, Mat};
use umps_core::necklace::{canonicalize, NecklaceBasis};
use umps_core::poly::{Monomial, MultiPoly, PolyRing};
use umps_core::sample::{random_fp_tuple, random_rational_tuple, rng_from_seed};
use umps_core::umps::MatrixTuple;
use umps_core::{Error, Result};

/// `(tr M₀, tr M₁, tr M₀², tr M₀M₁, tr M₁²)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceInvariants<K>(pub [K; 5]);

impl<K: Ring> TraceInvariants<K> {
    pub fn as_slice(&self) -> &[K] {
        &self.0
    }
}

pub fn invariants_of<K: Ring>(tuple: &MatrixTuple<K>) -> Result<TraceInvariants<K>> {
    if tuple.bond() != 2 || tuple.phys() != 2 {
        return Err(Error::Shape(format!(
            "trace invariants need D = d = 2, got D = {}, d = {}",
            tuple.bond(),
            tuple.phys()
        )));
    }
    let [m0, m1] = [&tuple.mats()[0], &tuple.mats()[1]];
    Ok(TraceInvariants([
        m0.trace(),
        m1.trace(),
        m0.mul(m0).trace(),
        m0.mul(m1).trace(),
        m1.mul(m1).trace(),
    ]))
}

/// The ring `ℚ[t1, …, t5]`.
pub fn trace_ring() -> Arc<PolyRing> {
    static RING: OnceLock<Arc<PolyRing>> = OnceLock::new();
    RING.get_or_init(|| PolyRing::grevlex(["t1", "t2", "t3", "t4", "t5"]))
        .clone()
}

/// A trace word together with its expression in the invariants.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceWordPoly {
    pub word: Vec<u8>,
    pub poly: MultiPoly<Rational>,
}

/// Exponent vectors `(i, j, k, l, m)` of `t1^i t2^j t3^k t4^l t5^m` with
/// `i + 2k + l = a` and `j + l + 2m = b`.
pub fn monomials_of_multidegree(a: u32, b: u32) -> Vec<[u32; 5]> {
    let mut out = Vec::new();
    for l in 0..=a.min(b) {
        for k in 0..=(a - l) / 2 {
            for m in 0..=(b - l) / 2 {
                out.push([a - 2 * k - l, b - l - 2 * m, k, l, m]);
            }
        }
    }
    out
}

fn cache() -> &'static Mutex<HashMap<Vec<u8>, MultiPoly<Rational>>> {
    static CACHE: OnceLock<Mutex<HashMap<Vec<u8>, MultiPoly<Rational>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The polynomial in `t1..t5` equal to the trace of `word` for every pair
/// of 2×2 matrices.
pub fn reduce_trace_word(word: &[u8]) -> Result<TraceWordPoly> {
    if word.is_empty() {
        return Err(Error::InvalidArgument("empty trace word".into()));
    }
    let key = canonicalize(word, 2)?.word().to_vec();
    if let Some(p) = cache().lock().unwrap().get(&key) {
        return Ok(TraceWordPoly {
            word: word.to_vec(),
            poly: p.clone(),
        });
    }
    let mut last_err = None;
    for p in [DEFAULT_PRIME, SECOND_PRIME] {
        match fit_word(&key, p) {
            Ok(poly) => {
                cache().lock().unwrap().insert(key, poly.clone());
                return Ok(TraceWordPoly {
                    word: word.to_vec(),
                    poly,
                });
            }
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.unwrap())
}

fn word_seed(word: &[u8], p: u64) -> u64 {
    word.iter().fold(p ^ 0x9e37_79b9_7f4a_7c15, |h, &s| {
        h.rotate_left(7) ^ (s as u64 + 1).wrapping_mul(0x100_0000_01b3)
    })
}

fn fit_word(word: &[u8], p: u64) -> Result<MultiPoly<Rational>> {
    let a = word.iter().filter(|&&s| s == 0).count() as u32;
    let b = word.len() as u32 - a;
    let monos = monomials_of_multidegree(a, b);
    let mut rng = rng_from_seed(word_seed(word, p));
    let target = monos.len() + 8;
    let mut rows = Vec::with_capacity(target);
    let mut rhs = Vec::with_capacity(target);
    let mut solution = None;
    for round in 0..4 {
        while rows.len() < target * (round + 1) {
            let t = random_fp_tuple(&mut rng, 2, 2, p);
            let inv = invariants_of(&t)?;
            rows.push(
                monos
                    .iter()
                    .map(|e| eval_exponents(e, inv.as_slice()))
                    .collect::<Vec<Fp>>(),
            );
            rhs.push(t.trace_word(word));
        }
        if let Some(x) = solve_unique(&rows, &rhs) {
            solution = Some(x);
            break;
        }
    }
    let x = solution
        .ok_or_else(|| Error::Reconstruction(format!("no unique fit for word {word:?} mod {p}")))?;
    let bound = reconstruction_bound(p);
    let mut terms = Vec::new();
    for (e, c) in monos.iter().zip(&x) {
        let q = rational_reconstruct(*c, bound).ok_or_else(|| {
            Error::Reconstruction(format!("coefficient of {e:?} in word {word:?}"))
        })?;
        terms.push((Monomial::from_exponents(e), q));
    }
    let poly = MultiPoly::from_terms(trace_ring(), &rat_int(0), terms);
    // confirm over ℚ at fresh tuples
    let mut qrng = rng_from_seed(word_seed(word, p).wrapping_add(1));
    for _ in 0..3 {
        let t = random_rational_tuple(&mut qrng, 2, 2, 30);
        let inv = invariants_of(&t)?;
        if poly.evaluate(inv.as_slice())? != t.trace_word(word) {
            return Err(Error::Reconstruction(format!(
                "fit for word {word:?} fails over QQ"
            )));
        }
    }
    Ok(poly)
}

fn eval_exponents<K: Ring>(e: &[u32; 5], t: &[K]) -> K {
    let mut acc = t[0].one_like();
    for (x, &k) in t.iter().zip(e) {
        if k > 0 {
            acc = acc * &x.pow(k);
        }
    }
    acc
}

/// `φ_N`: one polynomial per necklace of length `N` over `{0, 1}`.
pub fn trace_parametrization(n: usize) -> Result<Vec<MultiPoly<Rational>>> {
    if n == 0 {
        return Err(Error::InvalidArgument("N must be at least 1".into()));
    }
    let basis = NecklaceBasis::new(n, 2);
    basis
        .necklaces()
        .iter()
        .map(|w| reduce_trace_word(w.word()).map(|r| r.poly))
        .collect()
}

/// Whether two trace words agree as functions of every pair of 2×2 matrices.
pub fn verify_word_identity(w1: &[u8], w2: &[u8]) -> Result<bool> {
    let count = |w: &[u8]| (w.iter().filter(|&&s| s == 0).count(), w.len());
    if count(w1) != count(w2) {
        return Ok(false);
    }
    Ok(reduce_trace_word(w1)?.poly == reduce_trace_word(w2)?.poly)
}

/// Parses a word such as `"110010"`.
pub fn parse_word(s: &str) -> Result<Vec<u8>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            _ => Err(Error::Parse(format!("binary word expected, got {s:?}"))),
        })
        .collect()
}

/// Evaluates `φ_N` at a point of invariant space.
pub fn evaluate_parametrization<K: Ring>(
    phi: &[MultiPoly<Rational>],
    t: &[K],
    embed: impl Fn(&Rational) -> K,
) -> Result<Vec<K>> {
    phi.iter()
        .map(|f| {
            let like = t[0].zero_like();
            f.map_coeffs(&like, &embed).evaluate(t)
        })
        .collect()
}

/// Entry-wise 2×2 matrices as rationals, for tests and examples.
pub fn pair(m0: [[i64; 2]; 2], m1: [[i64; 2]; 2]) -> MatrixTuple<Rational> {
    let conv = |m: [[i64; 2]; 2]| {
        Mat::from_rows(
            m.iter()
                .map(|r| r.iter().map(|&x| rat_int(x)).collect())
                .collect(),
        )
    };
    MatrixTuple::new(vec![conv(m0), conv(m1)]).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use umps_core::arith::rat;
    use umps_core::poly::parse_poly;

    #[test]
    fn multidegree_monomial_counts() {
        assert_eq!(monomials_of_multidegree(1, 0).len(), 1);
        assert_eq!(monomials_of_multidegree(2, 0).len(), 2);
        // t1 t2, t4
        assert_eq!(monomials_of_multidegree(1, 1).len(), 2);
    }

    #[test]
    fn generators_and_cayley_hamilton() {
        let r = trace_ring();
        assert_eq!(
            reduce_trace_word(&[0]).unwrap().poly,
            parse_poly(&r, "t1").unwrap()
        );
        assert_eq!(
            reduce_trace_word(&[0, 0]).unwrap().poly,
            parse_poly(&r, "t3").unwrap()
        );
        let cubic = reduce_trace_word(&[0, 0, 0]).unwrap().poly;
        let want = parse_poly(&r, "3/2*t1*t3 - 1/2*t1^3").unwrap();
        assert_eq!(cubic, want);
        assert_eq!(cubic.coeff_of(&Monomial::from_exponents(&[3])), rat(-1, 2));
    }

    #[test]
    fn invariants_examples() {
        let t = pair([[1, 0], [0, 0]], [[0, 1], [0, 0]]);
        let want: Vec<Rational> = [1, 0, 1, 0, 0].iter().map(|&x| rat_int(x)).collect();
        assert_eq!(invariants_of(&t).unwrap().as_slice(), &want[..]);
        let id = pair([[1, 0], [0, 1]], [[1, 0], [0, 1]]);
        assert!(invariants_of(&id)
            .unwrap()
            .as_slice()
            .iter()
            .all(|x| *x == rat_int(2)));
    }

    #[test]
    fn small_parametrizations() {
        let r = trace_ring();
        let p1 = trace_parametrization(1).unwrap();
        assert_eq!(
            p1,
            vec![parse_poly(&r, "t1").unwrap(), parse_poly(&r, "t2").unwrap()]
        );
        let p2 = trace_parametrization(2).unwrap();
        let want: Vec<_> = ["t3", "t4", "t5"]
            .iter()
            .map(|s| parse_poly(&r, s).unwrap())
            .collect();
        assert_eq!(p2, want);
    }
}
