use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};

use super::{Field, FromRational, Rational, Ring};

/// Largest prime below 2^62.
pub const DEFAULT_PRIME: u64 = 4_611_686_018_427_387_847;
/// Next prime below [`DEFAULT_PRIME`]; used for two-prime cross-checks.
pub const SECOND_PRIME: u64 = 4_611_686_018_427_387_817;

/// Element of ℤ/pℤ. The modulus travels with the value so that generic code
/// can build constants from any element.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    v: u64,
    p: u64,
}

impl Fp {
    pub fn new(v: u64, p: u64) -> Self {
        Fp { v: v % p, p }
    }

    pub fn from_i64(n: i64, p: u64) -> Self {
        let r = (n as i128).rem_euclid(p as i128) as u64;
        Fp { v: r, p }
    }

    pub fn from_bigint(n: &BigInt, p: u64) -> Self {
        let r = n.mod_floor(&BigInt::from(p));
        Fp {
            v: r.to_u64().expect("reduced residue fits u64"),
            p,
        }
    }

    pub fn value(&self) -> u64 {
        self.v
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn mulmod(a: u64, b: u64, p: u64) -> u64 {
        ((a as u128 * b as u128) % p as u128) as u64
    }
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.v, self.p)
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, o: Fp) -> Fp {
        debug_assert_eq!(self.p, o.p);
        let (s, over) = self.v.overflowing_add(o.v);
        let s = if over || s >= self.p {
            s.wrapping_sub(self.p)
        } else {
            s
        };
        Fp { v: s, p: self.p }
    }
}
impl Add<&Fp> for Fp {
    type Output = Fp;
    fn add(self, o: &Fp) -> Fp {
        self + *o
    }
}
impl Sub for Fp {
    type Output = Fp;
    fn sub(self, o: Fp) -> Fp {
        debug_assert_eq!(self.p, o.p);
        let v = if self.v >= o.v {
            self.v - o.v
        } else {
            self.v + (self.p - o.v)
        };
        Fp { v, p: self.p }
    }
}
impl Sub<&Fp> for Fp {
    type Output = Fp;
    fn sub(self, o: &Fp) -> Fp {
        self - *o
    }
}
impl Mul for Fp {
    type Output = Fp;
    fn mul(self, o: Fp) -> Fp {
        debug_assert_eq!(self.p, o.p);
        Fp {
            v: Fp::mulmod(self.v, o.v, self.p),
            p: self.p,
        }
    }
}
impl Mul<&Fp> for Fp {
    type Output = Fp;
    fn mul(self, o: &Fp) -> Fp {
        self * *o
    }
}
impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp {
            v: if self.v == 0 { 0 } else { self.p - self.v },
            p: self.p,
        }
    }
}

impl Ring for Fp {
    fn zero_like(&self) -> Self {
        Fp { v: 0, p: self.p }
    }
    fn one_like(&self) -> Self {
        Fp { v: 1, p: self.p }
    }
    fn is_zero(&self) -> bool {
        self.v == 0
    }
    fn from_i64_like(&self, n: i64) -> Self {
        Fp::from_i64(n, self.p)
    }
}

impl Field for Fp {
    fn inv(&self) -> Option<Self> {
        if self.v == 0 {
            return None;
        }
        // extended Euclid on (v, p)
        let (mut r0, mut r1) = (self.p as i128, self.v as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1, "modulus is not prime");
        Some(Fp {
            v: t0.rem_euclid(self.p as i128) as u64,
            p: self.p,
        })
    }
}

impl FromRational for Fp {
    fn from_rational_like(&self, q: &Rational) -> Option<Self> {
        let n = Fp::from_bigint(q.numer(), self.p);
        let d = Fp::from_bigint(q.denom(), self.p);
        d.inv().map(|di| n * di)
    }
}

fn powmod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = Fp::mulmod(acc, b, m);
        }
        b = Fp::mulmod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = Fp::mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Recovers `n/d` with `|n|, d ≤ bound` and `n ≡ residue·d (mod p)`.
///
/// Requires `2·bound² < p`, which makes the answer unique when it exists.
/// Returns `None` when no such fraction exists; callers treat that as a
/// signal to retry with another prime or a larger bound.
pub fn rational_reconstruct(residue: Fp, bound: u64) -> Option<Rational> {
    let p = residue.p;
    assert!(
        2 * (bound as u128) * (bound as u128) < p as u128,
        "reconstruction bound too large for modulus"
    );
    let bound = bound as i128;
    let (mut r0, mut r1) = (p as i128, residue.v as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 > bound {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if t1 == 0 || t1.abs() > bound {
        return None;
    }
    let (n, d) = if t1 < 0 { (-r1, -t1) } else { (r1, t1) };
    if n.abs().gcd(&d) != 1 {
        return None;
    }
    let q = Rational::new(BigInt::from(n), BigInt::from(d));
    debug_assert!(!q.denom().is_negative());
    Some(q)
}

/// Largest bound admissible for [`rational_reconstruct`] modulo `p`.
pub fn reconstruction_bound(p: u64) -> u64 {
    (((p / 2) as f64).sqrt() as u64).saturating_sub(1)
}
