use num_complex::Complex64;
use num_traits::ToPrimitive;

use super::{Field, FromRational, Rational, Ring};

/// Double-precision complex scalar used by the numeric limit experiments.
pub type ComplexF = Complex64;

/// Default relative tolerance for floating-point comparisons.
pub const DEFAULT_REL_TOL: f64 = 1e-9;

/// `exp(iπ/N)`, a root of `ζ^N = −1`.
pub fn nth_root_of_minus_one(n: u32) -> ComplexF {
    assert!(n >= 1, "N must be positive");
    ComplexF::from_polar(1.0, std::f64::consts::PI / n as f64)
}

impl Ring for ComplexF {
    fn zero_like(&self) -> Self {
        ComplexF::new(0.0, 0.0)
    }
    fn one_like(&self) -> Self {
        ComplexF::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn from_i64_like(&self, n: i64) -> Self {
        ComplexF::new(n as f64, 0.0)
    }
}

impl Field for ComplexF {
    fn inv(&self) -> Option<Self> {
        if Ring::is_zero(self) {
            None
        } else {
            Some(ComplexF::new(1.0, 0.0) / self)
        }
    }
}

impl FromRational for ComplexF {
    fn from_rational_like(&self, q: &Rational) -> Option<Self> {
        q.to_f64().map(|x| ComplexF::new(x, 0.0))
    }
}

impl Ring for f64 {
    fn zero_like(&self) -> Self {
        0.0
    }
    fn one_like(&self) -> Self {
        1.0
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn from_i64_like(&self, n: i64) -> Self {
        n as f64
    }
}

impl Field for f64 {
    fn inv(&self) -> Option<Self> {
        if *self == 0.0 {
            None
        } else {
            Some(1.0 / self)
        }
    }
}

impl FromRational for f64 {
    fn from_rational_like(&self, q: &Rational) -> Option<Self> {
        q.to_f64()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_of_minus_one() {
        assert!((nth_root_of_minus_one(1) - ComplexF::new(-1.0, 0.0)).norm() < 1e-15);
        assert!((nth_root_of_minus_one(2) - ComplexF::new(0.0, 1.0)).norm() < 1e-15);
        for n in 1..=12 {
            let z = nth_root_of_minus_one(n);
            assert!((z.powu(n) + 1.0).norm() < 1e-12, "N = {n}");
        }
    }
}
