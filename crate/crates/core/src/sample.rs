//! Seeded random sampling of exact scalars and matrix tuples.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{rat, Fp, Rational};
use crate::linalg::Mat;
use crate::umps::MatrixTuple;

/// Default bound on numerators and denominators of sampled rationals.
pub const DEFAULT_HEIGHT: i64 = 100;

pub type SeededRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform numerator in `[-h, h]`, denominator in `[1, h]`.
pub fn random_rational(rng: &mut SeededRng, h: i64) -> Rational {
    let n = rng.gen_range(-h..=h);
    let d = rng.gen_range(1..=h);
    rat(n, d)
}

pub fn random_integer(rng: &mut SeededRng, h: i64) -> Rational {
    rat(rng.gen_range(-h..=h), 1)
}

pub fn random_fp(rng: &mut SeededRng, p: u64) -> Fp {
    Fp::new(rng.gen_range(0..p), p)
}

pub fn random_rational_matrix(
    rng: &mut SeededRng,
    rows: usize,
    cols: usize,
    h: i64,
) -> Mat<Rational> {
    Mat::from_fn(rows, cols, |_, _| random_rational(rng, h))
}

pub fn random_rational_tuple(
    rng: &mut SeededRng,
    bond: usize,
    d: usize,
    h: i64,
) -> MatrixTuple<Rational> {
    let mats = (0..d)
        .map(|_| random_rational_matrix(rng, bond, bond, h))
        .collect();
    MatrixTuple::new(mats).expect("square matrices of equal size")
}

pub fn random_fp_tuple(rng: &mut SeededRng, bond: usize, d: usize, p: u64) -> MatrixTuple<Fp> {
    let mats = (0..d)
        .map(|_| Mat::from_fn(bond, bond, |_, _| random_fp(rng, p)))
        .collect();
    MatrixTuple::new(mats).expect("square matrices of equal size")
}

/// Random invertible matrix: resampled until the determinant is nonzero.
pub fn random_invertible(rng: &mut SeededRng, n: usize, h: i64) -> Mat<Rational> {
    loop {
        let m = random_rational_matrix(rng, n, n, h);
        if m.rank() == n {
            return m;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible() {
        let a = random_rational_tuple(&mut rng_from_seed(7), 2, 2, DEFAULT_HEIGHT);
        let b = random_rational_tuple(&mut rng_from_seed(7), 2, 2, DEFAULT_HEIGHT);
        assert_eq!(a, b);
        let c = random_rational_tuple(&mut rng_from_seed(8), 2, 2, DEFAULT_HEIGHT);
        assert_ne!(a, c);
    }
}
