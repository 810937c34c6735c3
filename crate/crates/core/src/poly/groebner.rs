//! Buchberger's algorithm with the normal selection strategy and the
//! Gebauer–Möller pair criteria.

use std::cmp::Ordering;

use super::monomial::Monomial;
use super::multipoly::MultiPoly;
use crate::arith::Field;
use crate::error::{Error, Result};

/// Counts reduction steps and aborts once the limit is passed.
#[derive(Clone, Copy, Debug)]
pub struct Budget {
    limit: Option<u64>,
    used: u64,
}

impl Budget {
    pub fn new(limit: Option<u64>) -> Self {
        Budget { limit, used: 0 }
    }

    pub fn unlimited() -> Self {
        Self::new(None)
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub(crate) fn tick(&mut self) -> Result<()> {
        self.used += 1;
        match self.limit {
            Some(l) if self.used > l => Err(Error::BudgetExceeded(l)),
            _ => Ok(()),
        }
    }
}

/// Full normal form of `f` modulo `basis` (which need not be a Gröbner
/// basis). Basis elements must be monic.
pub fn normal_form<K: Field>(
    f: &MultiPoly<K>,
    basis: &[&MultiPoly<K>],
    budget: &mut Budget,
) -> Result<MultiPoly<K>> {
    let ring = f.ring().clone();
    let like = f.coeff_like().clone();
    let mut p = f.clone();
    let mut rem: Vec<(Monomial, K)> = Vec::new();
    while let Some((lm, lc)) = p.terms().first().cloned() {
        let div = basis
            .iter()
            .find(|g| g.leading_monomial().is_some_and(|gm| gm.divides(&lm)));
        match div {
            Some(g) => {
                budget.tick()?;
                let q = g.leading_monomial().unwrap().quotient_of(&lm).unwrap();
                p = p.sub_scaled(&lc, &q, g);
            }
            None => {
                rem.push((lm, lc));
                let mut terms = p.into_terms();
                terms.remove(0);
                p = MultiPoly::from_sorted_terms(ring.clone(), like.clone(), terms);
            }
        }
    }
    Ok(MultiPoly::from_sorted_terms(ring, like, rem))
}

fn s_polynomial<K: Field>(f: &MultiPoly<K>, g: &MultiPoly<K>) -> MultiPoly<K> {
    let (fm, gm) = (f.leading_monomial().unwrap(), g.leading_monomial().unwrap());
    let l = fm.lcm(gm);
    let one = f.coeff_like().one_like();
    f.mul_monomial(&fm.quotient_of(&l).unwrap(), &one)
        .sub_scaled(&one, &gm.quotient_of(&l).unwrap(), g)
}

#[derive(Clone, Copy, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

struct State<K> {
    polys: Vec<MultiPoly<K>>,
    active: Vec<usize>,
    pairs: Vec<Pair>,
}

impl<K: Field> State<K> {
    fn lm(&self, i: usize) -> &Monomial {
        self.polys[i].leading_monomial().unwrap()
    }

    /// Gebauer–Möller update after adding the polynomial with index `h`.
    fn update(&mut self, h: usize) {
        let lh = *self.lm(h);
        let mut c: Vec<Pair> = self
            .active
            .iter()
            .map(|&g| Pair {
                i: g,
                j: h,
                lcm: self.lm(g).lcm(&lh),
            })
            .collect();
        let mut d: Vec<Pair> = Vec::new();
        while let Some(p) = c.pop() {
            let coprime = self.lm(p.i).is_coprime(&lh);
            let dominated = c.iter().chain(d.iter()).any(|q| q.lcm.divides(&p.lcm));
            if coprime || !dominated {
                d.push(p);
            }
        }
        let e: Vec<Pair> = d
            .into_iter()
            .filter(|p| !self.lm(p.i).is_coprime(&lh))
            .collect();
        let keep: Vec<Pair> = self
            .pairs
            .iter()
            .filter(|p| {
                !(lh.divides(&p.lcm)
                    && self.lm(p.i).lcm(&lh) != p.lcm
                    && self.lm(p.j).lcm(&lh) != p.lcm)
            })
            .copied()
            .collect();
        self.pairs = keep;
        self.pairs.extend(e);
        let lms: Vec<Monomial> = self.active.iter().map(|&g| *self.lm(g)).collect();
        self.active = self
            .active
            .iter()
            .zip(lms)
            .filter(|(_, m)| !lh.divides(m))
            .map(|(&g, _)| g)
            .collect();
        self.active.push(h);
    }
}

/// Reduced Gröbner basis of the ideal generated by `gens`, with respect to
/// the order of their common ring. Output is monic and sorted by
/// increasing leading monomial; the unit ideal gives `[1]` and the zero
/// ideal gives `[]`.
pub fn groebner_basis<K: Field>(
    gens: &[MultiPoly<K>],
    budget: &mut Budget,
) -> Result<Vec<MultiPoly<K>>> {
    let mut st = State {
        polys: Vec::new(),
        active: Vec::new(),
        pairs: Vec::new(),
    };
    // seed with interreduced generators, smallest first
    let mut input: Vec<MultiPoly<K>> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| g.monic())
        .collect();
    if input.is_empty() {
        return Ok(Vec::new());
    }
    let ring = input[0].ring().clone();
    input.sort_by(|a, b| ring.cmp(a.leading_monomial().unwrap(), b.leading_monomial().unwrap()));
    for g in input {
        let basis: Vec<&MultiPoly<K>> = st.active.iter().map(|&i| &st.polys[i]).collect();
        let r = normal_form(&g, &basis, budget)?;
        if r.is_zero() {
            continue;
        }
        if r.is_constant() {
            return Ok(vec![MultiPoly::constant(
                ring.clone(),
                r.coeff_like().one_like(),
            )]);
        }
        st.polys.push(r.monic());
        let h = st.polys.len() - 1;
        st.update(h);
    }
    while !st.pairs.is_empty() {
        let (k, _) = st
            .pairs
            .iter()
            .enumerate()
            .min_by(|a, b| {
                ring.cmp(&a.1.lcm, &b.1.lcm)
                    .then_with(|| (a.1.j, a.1.i).cmp(&(b.1.j, b.1.i)))
            })
            .unwrap();
        let p = st.pairs.swap_remove(k);
        let s = s_polynomial(&st.polys[p.i], &st.polys[p.j]);
        let basis: Vec<&MultiPoly<K>> = st.active.iter().map(|&i| &st.polys[i]).collect();
        let r = normal_form(&s, &basis, budget)?;
        if r.is_zero() {
            continue;
        }
        if r.is_constant() {
            return Ok(vec![MultiPoly::constant(
                ring.clone(),
                r.coeff_like().one_like(),
            )]);
        }
        st.polys.push(r.monic());
        let h = st.polys.len() - 1;
        st.update(h);
    }
    let mut minimal: Vec<MultiPoly<K>> = st.active.iter().map(|&i| st.polys[i].clone()).collect();
    minimal.sort_by(|a, b| ring.cmp(a.leading_monomial().unwrap(), b.leading_monomial().unwrap()));
    interreduce(minimal, budget)
}

/// Tail-reduces a minimal basis into the reduced one.
fn interreduce<K: Field>(
    minimal: Vec<MultiPoly<K>>,
    budget: &mut Budget,
) -> Result<Vec<MultiPoly<K>>> {
    let mut out = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<&MultiPoly<K>> = minimal
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, g)| g)
            .collect();
        let g = &minimal[i];
        let lead = MultiPoly::from_sorted_terms(
            g.ring().clone(),
            g.coeff_like().clone(),
            g.terms()[..1].to_vec(),
        );
        let tail = MultiPoly::from_sorted_terms(
            g.ring().clone(),
            g.coeff_like().clone(),
            g.terms()[1..].to_vec(),
        );
        let tail = normal_form(&tail, &others, budget)?;
        out.push((lead + &tail).monic());
    }
    Ok(out)
}

/// Checks the Buchberger criterion: every S-polynomial reduces to zero.
pub fn is_groebner<K: Field>(basis: &[MultiPoly<K>], budget: &mut Budget) -> Result<bool> {
    let monic: Vec<MultiPoly<K>> = basis
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| g.monic())
        .collect();
    let refs: Vec<&MultiPoly<K>> = monic.iter().collect();
    for i in 0..monic.len() {
        for j in i + 1..monic.len() {
            let (a, b) = (
                monic[i].leading_monomial().unwrap(),
                monic[j].leading_monomial().unwrap(),
            );
            if a.is_coprime(b) {
                continue;
            }
            if !normal_form(&s_polynomial(&monic[i], &monic[j]), &refs, budget)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Compares two reduced bases leading monomial by leading monomial.
pub fn same_leading_monomials<K: Field, L: Field>(a: &[MultiPoly<K>], b: &[MultiPoly<L>]) -> bool {
    a.len() == b.len()
        && a.iter().zip(b).all(|(f, g)| {
            let (fm, gm) = (f.leading_monomial(), g.leading_monomial());
            match (fm, gm) {
                (Some(x), Some(y)) => f.ring().cmp(x, y) == Ordering::Equal,
                _ => fm.is_none() && gm.is_none(),
            }
        })
}
