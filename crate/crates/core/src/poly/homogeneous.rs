//! Gröbner bases of homogeneous ideals over a prime field, degree by
//! degree, with reductions carried out in a dense vector indexed by the
//! monomials of the current degree.

use super::groebner::Budget;
use super::monomial::{Monomial, MonomialOrder};
use super::multipoly::MultiPoly;
use crate::arith::{Field, Fp};
use crate::error::{Error, Result};

const NONE: u32 = u32::MAX;
/// Largest number of monomials in one degree we are willing to store densely.
const DENSE_LIMIT: usize = 1 << 26;

/// Grevlex rank of monomials of a fixed degree; rank 0 is `x0^k`.
struct Ranker {
    n: usize,
    binom: Vec<Vec<u64>>,
}

impl Ranker {
    fn new(n: usize) -> Self {
        let rows = 600;
        let mut binom = vec![vec![0u64; n + 1]; rows];
        for a in 0..rows {
            binom[a][0] = 1;
            for b in 1..=n.min(a) {
                binom[a][b] = binom[a - 1][b - 1].saturating_add(binom[a - 1][b]);
            }
        }
        Ranker { n, binom }
    }

    fn c(&self, a: usize, b: usize) -> u64 {
        self.binom[a][b]
    }

    fn count(&self, k: u32) -> u64 {
        if self.n == 0 {
            return u64::from(k == 0);
        }
        self.c(k as usize + self.n - 1, self.n - 1)
    }

    fn rank(&self, m: &Monomial) -> usize {
        let mut r = m.degree() as usize;
        let mut idx = 0u64;
        for j in (1..self.n).rev() {
            let a = m.exponent(j) as usize;
            idx += self.c(r + j, j) - self.c(r - a + j, j);
            r -= a;
        }
        idx as usize
    }
}

struct Elem {
    lt: Monomial,
    /// Monic, leading term first.
    terms: Vec<(Monomial, u64)>,
}

struct Table {
    monos: Vec<Monomial>,
    reducer: Vec<u32>,
}

#[derive(Clone, Copy)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

struct Engine {
    p: u64,
    n: usize,
    ranker: Ranker,
    elems: Vec<Elem>,
    active: Vec<usize>,
    pairs: Vec<Pair>,
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn submod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + (p - b)
    }
}

fn addmod(a: u64, b: u64, p: u64) -> u64 {
    submod(a, p - b, p)
}

impl Engine {
    fn monomials_of_degree(&self, k: u32) -> Vec<Monomial> {
        fn rec(n: usize, i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if i + 1 == n {
                cur.push(left);
                out.push(Monomial::from_exponents(cur));
                cur.pop();
                return;
            }
            for e in 0..=left {
                cur.push(e);
                rec(n, i + 1, left - e, cur, out);
                cur.pop();
            }
        }
        let mut found = Vec::new();
        if self.n == 0 {
            found.push(Monomial::one());
        } else {
            rec(self.n, 0, k, &mut Vec::with_capacity(self.n), &mut found);
        }
        let mut monos = vec![Monomial::one(); found.len()];
        for m in found {
            let r = self.ranker.rank(&m);
            monos[r] = m;
        }
        monos
    }

    fn table(&self, k: u32, prev: Option<&Table>) -> Table {
        let monos = self.monomials_of_degree(k);
        let reducer = monos
            .iter()
            .map(|m| {
                let Some(prev) = prev else { return NONE };
                for v in m.support() {
                    let q = Monomial::var(v).quotient_of(m).unwrap();
                    let g = prev.reducer[self.ranker.rank(&q)];
                    if g != NONE {
                        return g;
                    }
                }
                NONE
            })
            .collect();
        Table { monos, reducer }
    }

    /// Fully reduces the dense vector, leaving it zeroed, and returns the
    /// remainder in decreasing order.
    fn reduce(
        &self,
        acc: &mut [u64],
        t: &Table,
        start: usize,
        budget: &mut Budget,
    ) -> Result<Vec<(Monomial, u64)>> {
        let p = self.p;
        let mut out = Vec::new();
        for i in start..acc.len() {
            let c = acc[i];
            if c == 0 {
                continue;
            }
            acc[i] = 0;
            let g = t.reducer[i];
            if g == NONE {
                out.push((t.monos[i], c));
                continue;
            }
            budget.tick()?;
            let e = &self.elems[g as usize];
            let q = e.lt.quotient_of(&t.monos[i]).unwrap();
            for (m, tc) in &e.terms[1..] {
                let j = self.ranker.rank(&q.mul(m));
                acc[j] = submod(acc[j], mulmod(c, *tc, p), p);
            }
        }
        Ok(out)
    }

    fn load(&self, acc: &mut [u64], e: &Elem, q: &Monomial, c: u64) -> usize {
        let mut first = usize::MAX;
        for (m, tc) in &e.terms {
            let j = self.ranker.rank(&q.mul(m));
            first = first.min(j);
            acc[j] = addmod(acc[j], mulmod(c, *tc, self.p), self.p);
        }
        first
    }

    fn push(&mut self, mut terms: Vec<(Monomial, u64)>, t: &mut Table) -> usize {
        let inv = Fp::new(terms[0].1, self.p).inv().unwrap().value();
        for (_, c) in terms.iter_mut() {
            *c = mulmod(*c, inv, self.p);
        }
        let lt = terms[0].0;
        self.elems.push(Elem { lt, terms });
        let h = self.elems.len() - 1;
        t.reducer[self.ranker.rank(&lt)] = h as u32;
        self.update(h);
        h
    }

    /// Gebauer–Möller pair update after adding element `h`.
    fn update(&mut self, h: usize) {
        let lh = self.elems[h].lt;
        let lm = |i: usize| self.elems[i].lt;
        let mut c: Vec<Pair> = self
            .active
            .iter()
            .map(|&g| Pair {
                i: g,
                j: h,
                lcm: lm(g).lcm(&lh),
            })
            .collect();
        let mut d: Vec<Pair> = Vec::new();
        while let Some(p) = c.pop() {
            let coprime = lm(p.i).is_coprime(&lh);
            let dominated = c.iter().chain(d.iter()).any(|q| q.lcm.divides(&p.lcm));
            if coprime || !dominated {
                d.push(p);
            }
        }
        let e: Vec<Pair> = d.into_iter().filter(|p| !lm(p.i).is_coprime(&lh)).collect();
        let keep: Vec<Pair> = self
            .pairs
            .iter()
            .filter(|p| {
                !(lh.divides(&p.lcm) && lm(p.i).lcm(&lh) != p.lcm && lm(p.j).lcm(&lh) != p.lcm)
            })
            .copied()
            .collect();
        self.pairs = keep;
        self.pairs.extend(e);
        self.active.retain(|&g| !lh.divides(&self.elems[g].lt));
        self.active.push(h);
    }
}

/// Reduced grevlex Gröbner basis of a homogeneous ideal over `F_p`, sorted
/// by increasing leading monomial. Stops early once some degree is entirely
/// made of leading monomials, since the basis is then complete.
pub fn groebner_homogeneous_mod_p(
    gens: &[MultiPoly<Fp>],
    budget: &mut Budget,
) -> Result<Vec<MultiPoly<Fp>>> {
    let gens: Vec<&MultiPoly<Fp>> = gens.iter().filter(|g| !g.is_zero()).collect();
    let Some(first) = gens.first() else {
        return Ok(Vec::new());
    };
    let p = first.coeff_like().modulus();
    let ring = first.ring().with_order(MonomialOrder::GrevLex);
    if gens.iter().any(|g| !g.is_homogeneous()) {
        return Err(Error::InvalidArgument(
            "generators must be homogeneous".into(),
        ));
    }
    if gens.iter().any(|g| g.is_constant()) {
        return Ok(vec![MultiPoly::constant(ring, Fp::new(1, p))]);
    }
    let n = ring.nvars();
    let mut eng = Engine {
        p,
        n,
        ranker: Ranker::new(n),
        elems: Vec::new(),
        active: Vec::new(),
        pairs: Vec::new(),
    };
    let mut pending: Vec<(u32, Vec<(Monomial, u64)>)> = gens
        .iter()
        .map(|g| {
            (
                g.degree().unwrap(),
                g.terms().iter().map(|(m, c)| (*m, c.value())).collect(),
            )
        })
        .collect();
    pending.sort_by_key(|(d, _)| *d);
    pending.reverse();
    let mut k = pending.last().unwrap().0;
    let mut prev: Option<Table> = None;
    loop {
        if pending.is_empty() && eng.pairs.is_empty() {
            break;
        }
        let size = eng.ranker.count(k);
        if size > DENSE_LIMIT as u64 || k as usize + n + 1 >= eng.ranker.binom.len() {
            return Err(Error::InvalidArgument(format!(
                "degree {k} is too large for dense reduction"
            )));
        }
        let mut t = eng.table(k, prev.as_ref());
        let mut acc = vec![0u64; size as usize];
        let start_elems = eng.elems.len();
        while pending.last().is_some_and(|(d, _)| *d == k) {
            let (_, terms) = pending.pop().unwrap();
            let mut first = usize::MAX;
            for (m, c) in terms {
                let j = eng.ranker.rank(&m);
                first = first.min(j);
                acc[j] = addmod(acc[j], c, p);
            }
            let r = eng.reduce(&mut acc, &t, first, budget)?;
            if !r.is_empty() {
                eng.push(r, &mut t);
            }
        }
        while let Some(idx) = eng.pairs.iter().position(|q| q.lcm.degree() == k) {
            let pair = eng.pairs.swap_remove(idx);
            let (a, b) = (&eng.elems[pair.i], &eng.elems[pair.j]);
            let qa = a.lt.quotient_of(&pair.lcm).unwrap();
            let qb = b.lt.quotient_of(&pair.lcm).unwrap();
            let s1 = eng.load(&mut acc, a, &qa, 1);
            let s2 = eng.load(&mut acc, b, &qb, p - 1);
            let r = eng.reduce(&mut acc, &t, s1.min(s2), budget)?;
            if !r.is_empty() {
                eng.push(r, &mut t);
            }
        }
        // tail-reduce the elements found in this degree
        for h in start_elems..eng.elems.len() {
            let e = &eng.elems[h];
            let lead = e.terms[0];
            let mut first = usize::MAX;
            for (m, c) in &e.terms[1..] {
                let j = eng.ranker.rank(m);
                first = first.min(j);
                acc[j] = *c;
            }
            let tail = if first == usize::MAX {
                Vec::new()
            } else {
                eng.reduce(&mut acc, &t, first, budget)?
            };
            let mut terms = vec![lead];
            terms.extend(tail);
            eng.elems[h].terms = terms;
        }
        if t.reducer.iter().all(|&g| g != NONE) {
            break;
        }
        prev = Some(t);
        k += 1;
    }
    let mut out: Vec<MultiPoly<Fp>> = eng
        .elems
        .iter()
        .map(|e| {
            let terms = e.terms.iter().map(|(m, c)| (*m, Fp::new(*c, p))).collect();
            MultiPoly::from_sorted_terms(ring.clone(), Fp::new(0, p), terms)
        })
        .collect();
    out.sort_by(|a, b| ring.cmp(a.leading_monomial().unwrap(), b.leading_monomial().unwrap()));
    Ok(out)
}
