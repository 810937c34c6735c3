use std::sync::Arc;

use super::groebner::{groebner_basis, normal_form, same_leading_monomials, Budget};
use super::homogeneous::groebner_homogeneous_mod_p;
use super::monomial::{Monomial, MonomialOrder};
use super::multipoly::{MultiPoly, PolyRing};
use crate::arith::{
    rational_reconstruct, reconstruction_bound, Field, Fp, FromRational, Rational, Ring,
};
use crate::error::{Error, Result};

/// An ideal given by generators, optionally with a cached reduced Gröbner
/// basis for the order of `ring`.
#[derive(Clone, Debug)]
pub struct Ideal<K> {
    ring: Arc<PolyRing>,
    gens: Vec<MultiPoly<K>>,
    basis: Option<Vec<MultiPoly<K>>>,
}

impl<K: Ring> Ideal<K> {
    /// Zero generators are dropped.
    pub fn new(ring: Arc<PolyRing>, gens: Vec<MultiPoly<K>>) -> Result<Self> {
        for g in &gens {
            if g.ring().vars() != ring.vars() {
                return Err(Error::InvalidArgument(
                    "generator from a different ring".into(),
                ));
            }
        }
        let gens = gens
            .into_iter()
            .filter(|g| !g.is_zero())
            .map(|g| g.reorder(ring.clone()))
            .collect();
        Ok(Ideal {
            ring,
            gens,
            basis: None,
        })
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn generators(&self) -> &[MultiPoly<K>] {
        &self.gens
    }

    pub fn basis(&self) -> Option<&[MultiPoly<K>]> {
        self.basis.as_deref()
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.gens.is_empty()
    }

    /// True iff every generator vanishes at `point`.
    pub fn vanishes_at(&self, point: &[K]) -> Result<bool> {
        for g in &self.gens {
            if !g.evaluate(point)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl<K: Field> Ideal<K> {
    /// Computes and caches the reduced Gröbner basis for `order`.
    pub fn groebner(&self, order: MonomialOrder, budget: Option<u64>) -> Result<Ideal<K>> {
        let ring = self.ring.with_order(order);
        let gens: Vec<MultiPoly<K>> = self.gens.iter().map(|g| g.reorder(ring.clone())).collect();
        let mut b = Budget::new(budget);
        let basis = groebner_basis(&gens, &mut b)?;
        Ok(Ideal {
            ring,
            gens,
            basis: Some(basis),
        })
    }

    /// Installs a basis computed elsewhere (e.g. lifted from a prime field).
    /// The caller is responsible for it being the reduced basis.
    pub fn with_basis(mut self, basis: Vec<MultiPoly<K>>) -> Self {
        let ring = self.ring.clone();
        self.basis = Some(basis.into_iter().map(|g| g.reorder(ring.clone())).collect());
        self
    }

    /// Normal form of `f`; zero iff `f` lies in the ideal.
    pub fn reduce(&self, f: &MultiPoly<K>) -> Result<MultiPoly<K>> {
        let basis = self.basis.as_ref().ok_or(Error::MissingBasis)?;
        if f.ring().vars() != self.ring.vars() {
            return Err(Error::InvalidArgument(
                "polynomial from a different ring".into(),
            ));
        }
        let f = f.reorder(self.ring.clone());
        let refs: Vec<&MultiPoly<K>> = basis.iter().collect();
        normal_form(&f, &refs, &mut Budget::unlimited())
    }

    pub fn contains(&self, f: &MultiPoly<K>) -> Result<bool> {
        Ok(self.reduce(f)?.is_zero())
    }

    pub fn leading_monomials(&self) -> Result<Vec<Monomial>> {
        let basis = self.basis.as_ref().ok_or(Error::MissingBasis)?;
        Ok(basis
            .iter()
            .filter_map(|g| g.leading_monomial().copied())
            .collect())
    }

    /// Krull dimension of the affine zero set: −1 for the unit ideal.
    pub fn dimension(&self) -> Result<i64> {
        let lms = self.leading_monomials()?;
        Ok(dimension_from_leading(&lms, self.ring.nvars()))
    }

    /// Number of standard monomials of a zero-dimensional ideal.
    pub fn quotient_degree(&self) -> Result<u64> {
        let lms = self.leading_monomials()?;
        quotient_degree_from_leading(&lms, self.ring.nvars())
    }
}

/// Size of the largest variable set `S` with no leading monomial supported
/// inside `S`.
pub fn dimension_from_leading(lms: &[Monomial], nvars: usize) -> i64 {
    if lms.iter().any(|m| m.is_one()) {
        return -1;
    }
    // supports as bitmasks; S is independent iff no support is a subset
    let supports: Vec<u32> = lms
        .iter()
        .map(|m| m.support().fold(0u32, |a, i| a | (1 << i)))
        .collect();
    let mut best = 0;
    fn search(i: usize, n: usize, set: u32, size: usize, supports: &[u32], best: &mut usize) {
        if size + (n - i) <= *best {
            return;
        }
        if i == n {
            *best = size;
            return;
        }
        let with = set | (1 << i);
        if supports.iter().all(|&s| s & !with != 0) {
            search(i + 1, n, with, size + 1, supports, best);
        }
        search(i + 1, n, set, size, supports, best);
    }
    search(0, nvars, 0, 0, &supports, &mut best);
    best as i64
}

pub fn quotient_degree_from_leading(lms: &[Monomial], nvars: usize) -> Result<u64> {
    let dim = dimension_from_leading(lms, nvars);
    if dim != 0 {
        return Err(Error::NotZeroDimensional(dim));
    }
    // depth-first walk of the staircase; each monomial is reached once by
    // only ever raising variables with index ≥ the last one raised
    let mut count = 0u64;
    let mut stack = vec![(Monomial::one(), 0usize)];
    while let Some((m, last)) = stack.pop() {
        count += 1;
        for v in last..nvars {
            let next = m.mul(&Monomial::var(v));
            if !lms.iter().any(|l| l.divides(&next)) {
                stack.push((next, v));
            }
        }
    }
    Ok(count)
}

/// Maps a rational polynomial into `F_p`; `None` when a denominator
/// vanishes mod `p`.
pub fn reduce_mod_p(f: &MultiPoly<Rational>, p: u64) -> Option<MultiPoly<Fp>> {
    let like = Fp::new(0, p);
    f.try_map_coeffs(&like, |c| like.from_rational_like(c))
}

/// Gröbner basis mod `p` of the reduction of a rational ideal.
pub fn groebner_mod_p(
    ideal: &Ideal<Rational>,
    order: MonomialOrder,
    p: u64,
    budget: Option<u64>,
) -> Result<Ideal<Fp>> {
    let gens = ideal
        .generators()
        .iter()
        .map(|g| reduce_mod_p(g, p))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::InvalidArgument(format!("prime {p} divides a denominator")))?;
    let reduced = Ideal::new(ideal.ring().clone(), gens)?;
    if order == MonomialOrder::GrevLex && reduced.gens.iter().all(MultiPoly::is_homogeneous) {
        let basis = groebner_homogeneous_mod_p(&reduced.gens, &mut Budget::new(budget))?;
        let ring = reduced.ring.with_order(order);
        let gens = reduced
            .gens
            .iter()
            .map(|g| g.reorder(ring.clone()))
            .collect();
        return Ok(Ideal {
            ring,
            gens,
            basis: Some(basis),
        });
    }
    reduced.groebner(order, budget)
}

/// Outcome of the modular pipeline.
#[derive(Clone, Debug)]
pub struct ModularGroebner {
    /// Leading monomials agreed between the two primes.
    pub leading: Vec<Monomial>,
    /// Lifted basis over ℚ, present when reconstruction and verification
    /// both succeeded.
    pub lifted: Option<Ideal<Rational>>,
    pub primes: [u64; 2],
}

/// Computes mod two primes, compares leading monomials, reconstructs the
/// coefficients and verifies the lift over ℚ (generators reduce to zero,
/// S-pairs reduce to zero).
pub fn groebner_modular(
    ideal: &Ideal<Rational>,
    order: MonomialOrder,
    primes: [u64; 2],
    budget: Option<u64>,
) -> Result<ModularGroebner> {
    let g1 = groebner_mod_p(ideal, order, primes[0], budget)?;
    let g2 = groebner_mod_p(ideal, order, primes[1], budget)?;
    let (b1, b2) = (g1.basis().unwrap(), g2.basis().unwrap());
    if !same_leading_monomials(b1, b2) {
        return Err(Error::Reconstruction(
            "leading monomials differ between the two primes".into(),
        ));
    }
    let leading = g1.leading_monomials()?;
    let lifted = lift_basis(ideal, order, b1, b2, primes[0]);
    Ok(ModularGroebner {
        leading,
        lifted,
        primes,
    })
}

fn lift_basis(
    ideal: &Ideal<Rational>,
    order: MonomialOrder,
    b1: &[MultiPoly<Fp>],
    b2: &[MultiPoly<Fp>],
    p: u64,
) -> Option<Ideal<Rational>> {
    let bound = reconstruction_bound(p);
    let zero = crate::arith::rat_int(0);
    let ring = ideal.ring().with_order(order);
    let mut lifted = Vec::with_capacity(b1.len());
    for (f, g) in b1.iter().zip(b2) {
        let q = f.try_map_coeffs(&zero, |c| rational_reconstruct(*c, bound))?;
        // the second prime must see the same rational numbers
        let check = reduce_mod_p(&q, g.coeff_like().modulus())?;
        if check.terms() != g.terms() {
            return None;
        }
        lifted.push(q.reorder(ring.clone()));
    }
    let mut b = Budget::unlimited();
    if !super::groebner::is_groebner(&lifted, &mut b).ok()? {
        return None;
    }
    let candidate = Ideal {
        ring: ring.clone(),
        gens: ideal.gens.iter().map(|g| g.reorder(ring.clone())).collect(),
        basis: Some(lifted),
    };
    for g in candidate.generators() {
        if !candidate.contains(g).ok()? {
            return None;
        }
    }
    Some(candidate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat_int, DEFAULT_PRIME, SECOND_PRIME};
    use crate::poly::text::parse_poly;

    fn ideal(vars: &[&str], gens: &[&str]) -> Ideal<Rational> {
        let ring = PolyRing::grevlex(vars.iter().copied());
        let gens = gens.iter().map(|g| parse_poly(&ring, g).unwrap()).collect();
        Ideal::new(ring, gens).unwrap()
    }

    #[test]
    fn coordinate_ideal() {
        let i = ideal(&["x", "y"], &["x", "y"])
            .groebner(MonomialOrder::GrevLex, None)
            .unwrap();
        assert_eq!(i.basis().unwrap().len(), 2);
        assert_eq!(i.dimension().unwrap(), 0);
        assert_eq!(i.quotient_degree().unwrap(), 1);
    }

    #[test]
    fn zero_and_unit_ideals() {
        let z = ideal(&["a", "b", "c", "d", "e", "f"], &["0"])
            .groebner(MonomialOrder::GrevLex, None)
            .unwrap();
        assert_eq!(z.dimension().unwrap(), 6);
        let u = ideal(&["x", "y"], &["x*y - 1", "x"])
            .groebner(MonomialOrder::GrevLex, None)
            .unwrap();
        assert_eq!(u.dimension().unwrap(), -1);
        assert!(u.contains(&parse_poly(u.ring(), "1").unwrap()).unwrap());
    }

    #[test]
    fn reduce_examples() {
        let i = ideal(&["x"], &["x - 1"])
            .groebner(MonomialOrder::GrevLex, None)
            .unwrap();
        let x = parse_poly(i.ring(), "x").unwrap();
        assert_eq!(i.reduce(&x).unwrap(), parse_poly(i.ring(), "1").unwrap());
        let no_basis = ideal(&["x"], &["x - 1"]);
        assert_eq!(no_basis.reduce(&x), Err(Error::MissingBasis));
    }

    #[test]
    fn quotient_degrees() {
        let a = ideal(&["x"], &["x^2 - 1"])
            .groebner(MonomialOrder::GrevLex, None)
            .unwrap();
        assert_eq!(a.quotient_degree().unwrap(), 2);
        let b = ideal(&["x", "y"], &["x^2", "y"])
            .groebner(MonomialOrder::GrevLex, None)
            .unwrap();
        assert_eq!(b.quotient_degree().unwrap(), 2);
        let c = ideal(&["x", "y"], &["x*y"])
            .groebner(MonomialOrder::GrevLex, None)
            .unwrap();
        assert_eq!(c.quotient_degree(), Err(Error::NotZeroDimensional(1)));
    }

    #[test]
    fn twisted_cubic_lex() {
        // t ↦ (t, t^2, t^3), eliminate t
        let i = ideal(&["t", "x", "y", "z"], &["x - t", "y - t^2", "z - t^3"]);
        let g = i.groebner(MonomialOrder::Block { split: 1 }, None).unwrap();
        let elim: Vec<_> = g
            .basis()
            .unwrap()
            .iter()
            .filter(|f| f.leading_monomial().unwrap().exponent(0) == 0)
            .collect();
        assert!(!elim.is_empty());
        let xz = parse_poly(g.ring(), "x*z - y^2").unwrap();
        assert!(g.contains(&xz).unwrap());
        assert_eq!(g.dimension().unwrap(), 1);
    }

    #[test]
    fn budget_is_enforced() {
        let i = ideal(
            &["x", "y", "z"],
            &["x*y - z^2", "x*z - y^2", "y*z - x^2 + 1"],
        );
        assert!(matches!(
            i.groebner(MonomialOrder::GrevLex, Some(3)),
            Err(Error::BudgetExceeded(3))
        ));
    }

    #[test]
    fn modular_pipeline_lifts() {
        let i = ideal(
            &["x", "y", "z"],
            &["x^2 + 1/2*y - z", "x*y - 3/7", "y^2 - z*x + 2"],
        );
        let exact = i.groebner(MonomialOrder::GrevLex, None).unwrap();
        let m = groebner_modular(
            &i,
            MonomialOrder::GrevLex,
            [DEFAULT_PRIME, SECOND_PRIME],
            None,
        )
        .unwrap();
        assert_eq!(m.leading, exact.leading_monomials().unwrap());
        let lifted = m.lifted.expect("lift verifies");
        assert_eq!(lifted.basis().unwrap(), exact.basis().unwrap());
        let _ = rat_int(0);
    }
}
