use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Signed;

use super::rational::{parse_rational, rat_int};
use super::{Field, FromRational, Rational, Ring};

/// An element `a + b·√2` of ℚ(√2).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadExt {
    pub a: Rational,
    pub b: Rational,
}

impl QuadExt {
    pub fn new(a: Rational, b: Rational) -> Self {
        QuadExt { a, b }
    }

    pub fn from_rational(a: Rational) -> Self {
        QuadExt { a, b: rat_int(0) }
    }

    pub fn sqrt2() -> Self {
        QuadExt {
            a: rat_int(0),
            b: rat_int(1),
        }
    }

    /// Galois conjugate `a − b·√2`.
    pub fn conj(&self) -> Self {
        QuadExt {
            a: self.a.clone(),
            b: -self.b.clone(),
        }
    }

    /// Field norm `a² − 2b²`.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - rat_int(2) * &self.b * &self.b
    }

    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.a.to_f64().unwrap_or(f64::NAN)
            + self.b.to_f64().unwrap_or(f64::NAN) * std::f64::consts::SQRT_2
    }

    /// Accepts `"q"`, `"sqrt2"`, `"-sqrt2"`, `"q*sqrt2"`, `"a+b*sqrt2"`,
    /// `"a-b*sqrt2"`, optionally wrapped in parentheses.
    pub fn parse(s: &str) -> Option<Self> {
        let mut s = s.trim();
        if s.starts_with('(') && s.ends_with(')') {
            s = s[1..s.len() - 1].trim();
        }
        if !s.contains("sqrt2") {
            return parse_rational(s).map(QuadExt::from_rational);
        }
        let body = s.strip_suffix("sqrt2")?.trim_end();
        // body is "", "-", "q*", "a+q*", "a-q*", "a+", "a-"
        let body = body.strip_suffix('*').map(str::trim_end).unwrap_or(body);
        // find the sign separating a from the √2 coefficient, skipping a
        // leading sign and any sign directly after '/'
        let bytes = body.as_bytes();
        let mut split = None;
        for i in (1..bytes.len()).rev() {
            if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'/' {
                split = Some(i);
                break;
            }
        }
        let (a_str, b_str) = match split {
            Some(i) => (&body[..i], &body[i..]),
            None => ("0", body),
        };
        let a = parse_rational(a_str)?;
        let b = match b_str.trim() {
            "" | "+" => rat_int(1),
            "-" => rat_int(-1),
            t => parse_rational(t.strip_prefix('+').unwrap_or(t))?,
        };
        Some(QuadExt { a, b })
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            write!(f, "{}*sqrt2", self.b)
        } else if self.b.is_negative() {
            write!(f, "{}-{}*sqrt2", self.a, -self.b.clone())
        } else {
            write!(f, "{}+{}*sqrt2", self.a, self.b)
        }
    }
}

impl Add for QuadExt {
    type Output = QuadExt;
    fn add(self, o: QuadExt) -> QuadExt {
        self + &o
    }
}
impl Add<&QuadExt> for QuadExt {
    type Output = QuadExt;
    fn add(self, o: &QuadExt) -> QuadExt {
        QuadExt {
            a: self.a + &o.a,
            b: self.b + &o.b,
        }
    }
}
impl Sub for QuadExt {
    type Output = QuadExt;
    fn sub(self, o: QuadExt) -> QuadExt {
        self - &o
    }
}
impl Sub<&QuadExt> for QuadExt {
    type Output = QuadExt;
    fn sub(self, o: &QuadExt) -> QuadExt {
        QuadExt {
            a: self.a - &o.a,
            b: self.b - &o.b,
        }
    }
}
impl Mul for QuadExt {
    type Output = QuadExt;
    fn mul(self, o: QuadExt) -> QuadExt {
        self * &o
    }
}
impl Mul<&QuadExt> for QuadExt {
    type Output = QuadExt;
    fn mul(self, o: &QuadExt) -> QuadExt {
        let a = &self.a * &o.a + rat_int(2) * &self.b * &o.b;
        let b = &self.a * &o.b + &self.b * &o.a;
        QuadExt { a, b }
    }
}
impl Neg for QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt {
            a: -self.a,
            b: -self.b,
        }
    }
}

impl Ring for QuadExt {
    fn zero_like(&self) -> Self {
        QuadExt {
            a: rat_int(0),
            b: rat_int(0),
        }
    }
    fn one_like(&self) -> Self {
        QuadExt::from_rational(rat_int(1))
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
    fn from_i64_like(&self, n: i64) -> Self {
        QuadExt::from_rational(rat_int(n))
    }
}

impl Field for QuadExt {
    fn inv(&self) -> Option<Self> {
        // √2 is irrational, so the norm vanishes only at zero
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        let c = self.conj();
        Some(QuadExt {
            a: c.a / &n,
            b: c.b / &n,
        })
    }
}

impl FromRational for QuadExt {
    fn from_rational_like(&self, q: &Rational) -> Option<Self> {
        Some(QuadExt::from_rational(q.clone()))
    }
}
