//! Scalar rings used throughout the workbench.
//!
//! Everything downstream (matrices, cyclic tensors, polynomials, linear
//! algebra) is generic over [`Ring`] or [`Field`]. Several of the rings carry
//! runtime parameters (the modulus of a prime field, the order of a
//! cyclotomic field, the variable set of a polynomial ring), so constants are
//! produced from an existing element via [`Ring::zero_like`] and friends
//! rather than from a context-free `zero()`.

mod complex;
mod cyclotomic;
mod prime;
mod quad;
mod rational;
mod text;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

pub use complex::{nth_root_of_minus_one, ComplexF, DEFAULT_REL_TOL};
pub use cyclotomic::{Cyclotomic, CyclotomicField};
pub use prime::reconstruction_bound;
pub use prime::{is_prime_u64, rational_reconstruct, Fp, DEFAULT_PRIME, SECOND_PRIME};
pub use quad::QuadExt;
pub use rational::{height, parse_rational, rat, rat_int, Rational};
pub use text::ScalarText;

/// A commutative ring with identity.
pub trait Ring:
    Sized
    + Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
{
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    /// The image of the integer `n` in the ring of `self`.
    fn from_i64_like(&self, n: i64) -> Self;

    fn is_one(&self) -> bool {
        *self == self.one_like()
    }

    fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * &base;
            }
        }
        acc
    }
}

/// A field: every nonzero element is invertible.
pub trait Field: Ring {
    /// `None` exactly when `self` is zero.
    fn inv(&self) -> Option<Self>;

    fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.clone() * &i)
    }
}

/// Rings that embed the rationals (characteristic zero, or a prime field
/// where the denominator is invertible).
pub trait FromRational: Ring {
    fn from_rational_like(&self, q: &Rational) -> Option<Self>;
}
