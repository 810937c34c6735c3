use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::monomial::{Monomial, MonomialOrder, MAX_VARS};
use crate::arith::{Field, Ring};
use crate::error::{Error, Result};

/// Variable names plus a term order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyRing {
    vars: Vec<String>,
    order: MonomialOrder,
}

impl PolyRing {
    pub fn new<S: Into<String>>(
        vars: impl IntoIterator<Item = S>,
        order: MonomialOrder,
    ) -> Result<Arc<Self>> {
        let vars: Vec<String> = vars.into_iter().map(Into::into).collect();
        if vars.len() > MAX_VARS {
            return Err(Error::TooManyVariables(vars.len(), MAX_VARS));
        }
        for (i, v) in vars.iter().enumerate() {
            if v.is_empty() || vars[..i].contains(v) {
                return Err(Error::InvalidArgument(format!(
                    "bad or duplicate variable name {v:?}"
                )));
            }
        }
        Ok(Arc::new(PolyRing { vars, order }))
    }

    pub fn grevlex<S: Into<String>>(vars: impl IntoIterator<Item = S>) -> Arc<Self> {
        Self::new(vars, MonomialOrder::GrevLex).expect("valid variable list")
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn with_order(&self, order: MonomialOrder) -> Arc<Self> {
        Arc::new(PolyRing {
            vars: self.vars.clone(),
            order,
        })
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        self.order.cmp(a, b, self.vars.len())
    }
}

/// Sparse polynomial: nonzero terms sorted by decreasing monomial.
#[derive(Clone)]
pub struct MultiPoly<K> {
    ring: Arc<PolyRing>,
    terms: Vec<(Monomial, K)>,
    /// Coefficient used to manufacture constants when `terms` is empty.
    like: K,
}

impl<K: Ring> MultiPoly<K> {
    pub fn zero(ring: Arc<PolyRing>, like: &K) -> Self {
        MultiPoly {
            ring,
            terms: Vec::new(),
            like: like.zero_like(),
        }
    }

    pub fn constant(ring: Arc<PolyRing>, c: K) -> Self {
        let like = c.zero_like();
        let terms = if c.is_zero() {
            vec![]
        } else {
            vec![(Monomial::one(), c)]
        };
        MultiPoly { ring, terms, like }
    }

    pub fn var(ring: Arc<PolyRing>, i: usize, like: &K) -> Self {
        assert!(i < ring.nvars());
        MultiPoly {
            ring,
            terms: vec![(Monomial::var(i), like.one_like())],
            like: like.zero_like(),
        }
    }

    pub fn var_named(ring: Arc<PolyRing>, name: &str, like: &K) -> Result<Self> {
        let i = ring
            .var_index(name)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown variable {name}")))?;
        Ok(Self::var(ring, i, like))
    }

    /// Builds a polynomial from arbitrary (possibly repeated, unsorted,
    /// zero) terms.
    pub fn from_terms(
        ring: Arc<PolyRing>,
        like: &K,
        terms: impl IntoIterator<Item = (Monomial, K)>,
    ) -> Self {
        let mut acc: HashMap<Monomial, K> = HashMap::new();
        for (m, c) in terms {
            match acc.get_mut(&m) {
                Some(e) => *e = std::mem::replace(e, like.zero_like()) + &c,
                None => {
                    acc.insert(m, c);
                }
            }
        }
        let mut terms: Vec<(Monomial, K)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| ring.cmp(&b.0, &a.0));
        MultiPoly {
            ring,
            terms,
            like: like.zero_like(),
        }
    }

    /// Wraps terms already sorted decreasingly with no zero coefficients.
    pub(crate) fn from_sorted_terms(
        ring: Arc<PolyRing>,
        like: K,
        terms: Vec<(Monomial, K)>,
    ) -> Self {
        debug_assert!(terms
            .windows(2)
            .all(|w| ring.cmp(&w[0].0, &w[1].0) == Ordering::Greater));
        debug_assert!(terms.iter().all(|(_, c)| !c.is_zero()));
        MultiPoly { ring, terms, like }
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn terms(&self) -> &[(Monomial, K)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, K)> {
        self.terms
    }

    pub fn coeff_like(&self) -> &K {
        &self.like
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn leading_coeff(&self) -> Option<&K> {
        self.terms.first().map(|t| &t.1)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.terms
            .windows(2)
            .all(|w| w[0].0.degree() == w[1].0.degree())
    }

    pub fn coeff_of(&self, m: &Monomial) -> K {
        self.terms
            .iter()
            .find(|(t, _)| t == m)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| self.like.zero_like())
    }

    pub fn scale(&self, c: &K) -> Self {
        if c.is_zero() {
            return Self::zero(self.ring.clone(), &self.like);
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, a)| (*m, a.clone() * c))
            .filter(|(_, a)| !a.is_zero())
            .collect();
        MultiPoly {
            ring: self.ring.clone(),
            terms,
            like: self.like.clone(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &K) -> Self {
        if c.is_zero() {
            return Self::zero(self.ring.clone(), &self.like);
        }
        let terms = self
            .terms
            .iter()
            .map(|(t, a)| (t.mul(m), a.clone() * c))
            .filter(|(_, a)| !a.is_zero())
            .collect();
        MultiPoly {
            ring: self.ring.clone(),
            terms,
            like: self.like.clone(),
        }
    }

    /// `self − c·m·g`, by merging sorted term lists.
    pub fn sub_scaled(&self, c: &K, m: &Monomial, g: &Self) -> Self {
        let ring = &self.ring;
        let mut out = Vec::with_capacity(self.terms.len() + g.terms.len());
        let mut a = self.terms.iter().peekable();
        let mut b = g.terms.iter().map(|(t, x)| (t.mul(m), x)).peekable();
        loop {
            let ord = match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some(_), None) => Ordering::Greater,
                (None, Some(_)) => Ordering::Less,
                (Some(x), Some(y)) => ring.cmp(&x.0, &y.0),
            };
            match ord {
                Ordering::Greater => {
                    let (t, x) = a.next().unwrap();
                    out.push((*t, x.clone()));
                }
                Ordering::Less => {
                    let (t, y) = b.next().unwrap();
                    let v = -(c.clone() * y);
                    if !v.is_zero() {
                        out.push((t, v));
                    }
                }
                Ordering::Equal => {
                    let (t, x) = a.next().unwrap();
                    let (_, y) = b.next().unwrap();
                    let v = x.clone() - &(c.clone() * y);
                    if !v.is_zero() {
                        out.push((*t, v));
                    }
                }
            }
        }
        MultiPoly {
            ring: self.ring.clone(),
            terms: out,
            like: self.like.clone(),
        }
    }

    pub fn evaluate(&self, point: &[K]) -> Result<K> {
        if point.len() != self.ring.nvars() {
            return Err(Error::Shape(format!(
                "point has {} coordinates, ring has {} variables",
                point.len(),
                self.ring.nvars()
            )));
        }
        let n = point.len();
        let mut acc = self.like.zero_like();
        // cache powers lazily
        let mut powers: Vec<Vec<K>> = point
            .iter()
            .map(|x| vec![x.one_like(), x.clone()])
            .collect();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for i in 0..n {
                let e = m.exponent(i) as usize;
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e {
                    let next = powers[i].last().unwrap().clone() * &point[i];
                    powers[i].push(next);
                }
                t = t * &powers[i][e];
            }
            acc = acc + &t;
        }
        Ok(acc)
    }

    /// Applies `f` to every coefficient, landing in another ring.
    pub fn map_coeffs<L: Ring>(&self, like: &L, mut f: impl FnMut(&K) -> L) -> MultiPoly<L> {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (*m, f(c)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        MultiPoly {
            ring: self.ring.clone(),
            terms,
            like: like.zero_like(),
        }
    }

    /// Fallible coefficient map; used for reduction modulo a prime.
    pub fn try_map_coeffs<L: Ring>(
        &self,
        like: &L,
        mut f: impl FnMut(&K) -> Option<L>,
    ) -> Option<MultiPoly<L>> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let v = f(c)?;
            if !v.is_zero() {
                terms.push((*m, v));
            }
        }
        Some(MultiPoly {
            ring: self.ring.clone(),
            terms,
            like: like.zero_like(),
        })
    }

    /// Same polynomial in a ring with the same variables but another order.
    pub fn reorder(&self, ring: Arc<PolyRing>) -> Self {
        assert_eq!(ring.vars(), self.ring.vars(), "reorder keeps the variables");
        let mut terms = self.terms.clone();
        terms.sort_by(|a, b| ring.cmp(&b.0, &a.0));
        MultiPoly {
            ring,
            terms,
            like: self.like.clone(),
        }
    }

    /// Moves the polynomial into `ring`, matching variables by name.
    pub fn into_ring(&self, ring: Arc<PolyRing>) -> Result<Self> {
        let mut to = Vec::with_capacity(self.ring.nvars());
        for v in self.ring.vars() {
            let j = ring.var_index(v).ok_or_else(|| {
                Error::InvalidArgument(format!("variable {v} missing in target ring"))
            })?;
            to.push(j);
        }
        Ok(Self::from_terms(
            ring,
            &self.like,
            self.terms.iter().map(|(m, c)| (m.permuted(&to), c.clone())),
        ))
    }

    /// Substitutes `value` for variable `var`.
    pub fn substitute(&self, var: usize, value: &K) -> Self {
        let terms = self.terms.iter().map(|(m, c)| {
            let e = m.exponent(var);
            let mut m2 = *m;
            if e > 0 {
                m2 = Monomial::var_pow(var, e as u16).quotient_of(m).unwrap();
            }
            (m2, c.clone() * &value.pow(e))
        });
        Self::from_terms(self.ring.clone(), &self.like, terms)
    }

    /// Partial derivative with respect to variable `var`.
    pub fn derivative(&self, var: usize) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.exponent(var) > 0)
            .map(|(m, c)| {
                let e = m.exponent(var);
                let q = Monomial::var(var).quotient_of(m).unwrap();
                (q, c.clone() * &c.from_i64_like(e as i64))
            });
        Self::from_terms(self.ring.clone(), &self.like, terms)
    }

    pub fn homogeneous_part(&self, deg: u32) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.degree() == deg)
            .cloned()
            .collect();
        MultiPoly {
            ring: self.ring.clone(),
            terms,
            like: self.like.clone(),
        }
    }

    fn combine(&self, o: &Self, negate: bool) -> Self {
        assert_eq!(
            self.ring.vars(),
            o.ring.vars(),
            "polynomials from different rings"
        );
        let one = self.like.one_like();
        let c = if negate { one } else { -one };
        self.sub_scaled(&c, &Monomial::one(), o)
    }

    fn product(&self, o: &Self) -> Self {
        assert_eq!(
            self.ring.vars(),
            o.ring.vars(),
            "polynomials from different rings"
        );
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.ring.clone(), &self.like);
        }
        if o.terms.len() == 1 {
            return self.mul_monomial(&o.terms[0].0, &o.terms[0].1);
        }
        if self.terms.len() == 1 {
            return o.mul_monomial(&self.terms[0].0, &self.terms[0].1);
        }
        let mut acc: HashMap<Monomial, K> =
            HashMap::with_capacity(self.terms.len() * o.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                let m = ma.mul(mb);
                let v = ca.clone() * cb;
                match acc.get_mut(&m) {
                    Some(e) => *e = std::mem::replace(e, self.like.zero_like()) + &v,
                    None => {
                        acc.insert(m, v);
                    }
                }
            }
        }
        let mut terms: Vec<(Monomial, K)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        let ring = &self.ring;
        terms.sort_by(|a, b| ring.cmp(&b.0, &a.0));
        MultiPoly {
            ring: self.ring.clone(),
            terms,
            like: self.like.clone(),
        }
    }
}

impl<K: Field> MultiPoly<K> {
    /// Scales so the leading coefficient is one.
    pub fn monic(&self) -> Self {
        match self.leading_coeff() {
            None => self.clone(),
            Some(c) => self.scale(&c.inv().expect("nonzero leading coefficient")),
        }
    }
}

impl<K: PartialEq> PartialEq for MultiPoly<K> {
    fn eq(&self, o: &Self) -> bool {
        self.ring.vars() == o.ring.vars() && self.terms == o.terms
    }
}

impl<K: fmt::Debug> fmt::Debug for MultiPoly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c:?})")?;
            for (v, name) in self.ring.vars().iter().enumerate() {
                match m.exponent(v) {
                    0 => {}
                    1 => write!(f, "*{name}")?,
                    e => write!(f, "*{name}^{e}")?,
                }
            }
        }
        Ok(())
    }
}

impl<K: fmt::Display> fmt::Display for MultiPoly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            for (v, name) in self.ring.vars().iter().enumerate() {
                match m.exponent(v) {
                    0 => {}
                    1 => write!(f, "*{name}")?,
                    e => write!(f, "*{name}^{e}")?,
                }
            }
        }
        Ok(())
    }
}

impl<K: Ring> Add for MultiPoly<K> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        self.combine(&o, false)
    }
}
impl<K: Ring> Add<&MultiPoly<K>> for MultiPoly<K> {
    type Output = Self;
    fn add(self, o: &Self) -> Self {
        self.combine(o, false)
    }
}
impl<K: Ring> Sub for MultiPoly<K> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self.combine(&o, true)
    }
}
impl<K: Ring> Sub<&MultiPoly<K>> for MultiPoly<K> {
    type Output = Self;
    fn sub(self, o: &Self) -> Self {
        self.combine(o, true)
    }
}
impl<K: Ring> Mul for MultiPoly<K> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        self.product(&o)
    }
}
impl<K: Ring> Mul<&MultiPoly<K>> for MultiPoly<K> {
    type Output = Self;
    fn mul(self, o: &Self) -> Self {
        self.product(o)
    }
}
impl<K: Ring> Neg for MultiPoly<K> {
    type Output = Self;
    fn neg(self) -> Self {
        let terms = self.terms.into_iter().map(|(m, c)| (m, -c)).collect();
        MultiPoly {
            ring: self.ring,
            terms,
            like: self.like,
        }
    }
}

impl<K: Ring> Ring for MultiPoly<K> {
    fn zero_like(&self) -> Self {
        Self::zero(self.ring.clone(), &self.like)
    }
    fn one_like(&self) -> Self {
        Self::constant(self.ring.clone(), self.like.one_like())
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn from_i64_like(&self, n: i64) -> Self {
        Self::constant(self.ring.clone(), self.like.from_i64_like(n))
    }
}
