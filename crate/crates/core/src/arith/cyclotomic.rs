use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::ToPrimitive;

use super::rational::rat_int;
use super::{ComplexF, Rational, Ring};

/// The cyclotomic field ℚ(ζ_m), elements stored as polynomials in ζ of
/// degree < φ(m), reduced modulo the m-th cyclotomic polynomial.
#[derive(Debug, PartialEq, Eq)]
pub struct CyclotomicField {
    order: u32,
    /// Φ_m, coefficients from low to high degree; monic.
    modulus: Vec<i64>,
}

impl CyclotomicField {
    pub fn new(order: u32) -> Arc<Self> {
        assert!(order >= 1);
        Arc::new(CyclotomicField {
            order,
            modulus: cyclotomic_poly(order),
        })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    /// ζ^k for any integer k.
    pub fn zeta_pow(self: &Arc<Self>, k: i64) -> Cyclotomic {
        let e = k.rem_euclid(self.order as i64) as usize;
        let mut c = vec![rat_int(0); e + 1];
        c[e] = rat_int(1);
        Cyclotomic::from_coeffs(self.clone(), c)
    }

    pub fn from_rational(self: &Arc<Self>, q: Rational) -> Cyclotomic {
        Cyclotomic::from_coeffs(self.clone(), vec![q])
    }
}

fn poly_divide_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dl = den.len();
    let mut q = vec![0i64; num.len() + 1 - dl];
    for i in (0..q.len()).rev() {
        let c = rem[i + dl - 1] / den[dl - 1];
        q[i] = c;
        for (j, &d) in den.iter().enumerate() {
            rem[i + j] -= c * d;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    q
}

fn cyclotomic_poly(m: u32) -> Vec<i64> {
    // x^m − 1 = Π_{d | m} Φ_d
    let mut p = vec![0i64; m as usize + 1];
    p[0] = -1;
    p[m as usize] = 1;
    for d in 1..m {
        if m.is_multiple_of(d) {
            p = poly_divide_exact(&p, &cyclotomic_poly(d));
        }
    }
    p
}

/// Element of a [`CyclotomicField`].
#[derive(Clone)]
pub struct Cyclotomic {
    field: Arc<CyclotomicField>,
    coeffs: Vec<Rational>,
}

impl Cyclotomic {
    fn from_coeffs(field: Arc<CyclotomicField>, mut coeffs: Vec<Rational>) -> Self {
        let n = field.degree();
        let m = &field.modulus;
        for k in (n..coeffs.len()).rev() {
            let c = std::mem::take(&mut coeffs[k]);
            if c.is_zero() {
                continue;
            }
            for (j, &mj) in m.iter().enumerate().take(n) {
                coeffs[k - n + j] -= &c * rat_int(mj);
            }
        }
        coeffs.resize(n, rat_int(0));
        Cyclotomic { field, coeffs }
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Numeric value under ζ ↦ exp(2πi/m).
    pub fn to_complex(&self) -> ComplexF {
        let z = ComplexF::from_polar(1.0, 2.0 * std::f64::consts::PI / self.field.order as f64);
        let mut acc = ComplexF::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + ComplexF::new(c.to_f64().unwrap_or(f64::NAN), 0.0);
        }
        acc
    }

    fn same_field(&self, o: &Self) {
        assert!(
            Arc::ptr_eq(&self.field, &o.field) || self.field == o.field,
            "mixing elements of different cyclotomic fields"
        );
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, o: &Self) -> bool {
        self.field.order == o.field.order && self.coeffs == o.coeffs
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*z{}", self.field.order)?,
                _ => write!(f, "{c}*z{}^{k}", self.field.order)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Add for Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, o: Cyclotomic) -> Cyclotomic {
        self + &o
    }
}
impl Add<&Cyclotomic> for Cyclotomic {
    type Output = Cyclotomic;
    fn add(mut self, o: &Cyclotomic) -> Cyclotomic {
        self.same_field(o);
        for (a, b) in self.coeffs.iter_mut().zip(&o.coeffs) {
            *a += b;
        }
        self
    }
}
impl Sub for Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, o: Cyclotomic) -> Cyclotomic {
        self - &o
    }
}
impl Sub<&Cyclotomic> for Cyclotomic {
    type Output = Cyclotomic;
    fn sub(mut self, o: &Cyclotomic) -> Cyclotomic {
        self.same_field(o);
        for (a, b) in self.coeffs.iter_mut().zip(&o.coeffs) {
            *a -= b;
        }
        self
    }
}
impl Mul for Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, o: Cyclotomic) -> Cyclotomic {
        self * &o
    }
}
impl Mul<&Cyclotomic> for Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, o: &Cyclotomic) -> Cyclotomic {
        self.same_field(o);
        let n = self.coeffs.len();
        let mut prod = vec![rat_int(0); (2 * n).saturating_sub(1).max(1)];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        Cyclotomic::from_coeffs(self.field, prod)
    }
}
impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(mut self) -> Cyclotomic {
        for a in &mut self.coeffs {
            *a = -std::mem::take(a);
        }
        self
    }
}

impl Ring for Cyclotomic {
    fn zero_like(&self) -> Self {
        Cyclotomic::from_coeffs(self.field.clone(), vec![])
    }
    fn one_like(&self) -> Self {
        self.field.from_rational(rat_int(1))
    }
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
    fn from_i64_like(&self, n: i64) -> Self {
        self.field.from_rational(rat_int(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(2), vec![1, 1]);
        assert_eq!(cyclotomic_poly(8), vec![1, 0, 0, 0, 1]);
        assert_eq!(cyclotomic_poly(10), vec![1, -1, 1, -1, 1]);
        assert_eq!(cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn zeta_has_the_right_order() {
        for m in [1u32, 2, 6, 8, 10, 16, 20] {
            let f = CyclotomicField::new(m);
            let z = f.zeta_pow(1);
            assert!(z.pow(m).is_one(), "m = {m}");
            if m % 2 == 0 {
                assert!((z.pow(m / 2) + &z.one_like()).is_zero());
            }
            let c = z.to_complex();
            let want = ComplexF::from_polar(1.0, 2.0 * std::f64::consts::PI / m as f64);
            assert!((c - want).norm() < 1e-12);
        }
    }

    #[test]
    fn inverse_power() {
        let f = CyclotomicField::new(16);
        let z = f.zeta_pow(1);
        assert!((z * &f.zeta_pow(-1)).is_one());
    }
}
