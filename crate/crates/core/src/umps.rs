//! The uniform MPS map `T_N(M)_w = tr(M_{w_1} ⋯ M_{w_N})` and the
//! operations that interact with it.

use std::sync::Arc;

use serde_json::{json, Value};

use crate::arith::{Field, Rational, Ring, ScalarText};
use crate::error::{Error, Result};
use crate::linalg::{Mat, RowEchelon};
use crate::necklace::{CyclicTensor, NecklaceBasis};
use crate::sample::{random_rational_tuple, rng_from_seed, DEFAULT_HEIGHT};

/// `d` square matrices of a common size `D`.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixTuple<K> {
    bond: usize,
    mats: Vec<Mat<K>>,
}

impl<K: Ring> MatrixTuple<K> {
    pub fn new(mats: Vec<Mat<K>>) -> Result<Self> {
        let first = mats
            .first()
            .ok_or_else(|| Error::InvalidArgument("a tuple needs at least one matrix".into()))?;
        let bond = first.rows();
        if bond == 0 {
            return Err(Error::Shape("bond dimension must be positive".into()));
        }
        for (i, m) in mats.iter().enumerate() {
            if m.rows() != bond || m.cols() != bond {
                return Err(Error::Shape(format!(
                    "matrix {i} is {}x{}, expected {bond}x{bond}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        Ok(MatrixTuple { bond, mats })
    }

    pub fn from_rows(mats: Vec<Vec<Vec<K>>>) -> Result<Self> {
        for m in &mats {
            let c = m.first().map_or(0, Vec::len);
            if m.iter().any(|r| r.len() != c) {
                return Err(Error::Shape("ragged matrix".into()));
            }
        }
        Self::new(mats.into_iter().map(Mat::from_rows).collect())
    }

    /// Bond dimension `D`.
    pub fn bond(&self) -> usize {
        self.bond
    }

    /// Physical dimension `d`.
    pub fn phys(&self) -> usize {
        self.mats.len()
    }

    pub fn mats(&self) -> &[Mat<K>] {
        &self.mats
    }

    pub fn like(&self) -> &K {
        self.mats[0].get(0, 0)
    }

    pub fn map<L: Ring>(&self, mut f: impl FnMut(&K) -> L) -> MatrixTuple<L> {
        MatrixTuple {
            bond: self.bond,
            mats: self.mats.iter().map(|m| m.map(&mut f)).collect(),
        }
    }

    /// Trace of the product along `word`.
    pub fn trace_word(&self, word: &[u8]) -> K {
        let mut it = word.iter();
        let Some(&first) = it.next() else {
            return self.like().from_i64_like(self.bond as i64);
        };
        let mut acc = self.mats[first as usize].clone();
        for &s in it {
            acc = acc.mul(&self.mats[s as usize]);
        }
        acc.trace()
    }

    /// Every matrix multiplied by `c`.
    pub fn scale(&self, c: &K) -> Self {
        MatrixTuple {
            bond: self.bond,
            mats: self.mats.iter().map(|m| m.scale(c)).collect(),
        }
    }
}

impl<K: ScalarText> MatrixTuple<K> {
    /// `{"D": …, "d": …, "mats": [[[scalar, …], …], …]}` with scalars as strings.
    pub fn to_json(&self) -> Value {
        let mats: Vec<Vec<Vec<String>>> = self
            .mats
            .iter()
            .map(|m| {
                m.to_rows()
                    .iter()
                    .map(|r| r.iter().map(ScalarText::render).collect())
                    .collect()
            })
            .collect();
        json!({ "D": self.bond, "d": self.phys(), "mats": mats })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let mats = v
            .get("mats")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing mats".into()))?;
        let mut out = Vec::with_capacity(mats.len());
        for m in mats {
            let rows = m
                .as_array()
                .ok_or_else(|| Error::Parse("matrix is not an array".into()))?;
            let mut mrows = Vec::with_capacity(rows.len());
            for r in rows {
                let r = r
                    .as_array()
                    .ok_or_else(|| Error::Parse("row is not an array".into()))?;
                let mut row = Vec::with_capacity(r.len());
                for x in r {
                    let text = match x {
                        Value::String(s) => s.clone(),
                        Value::Number(n) => n.to_string(),
                        _ => return Err(Error::Parse("matrix entry is not a scalar".into())),
                    };
                    row.push(
                        K::parse_text(&text)
                            .ok_or_else(|| Error::Parse(format!("bad scalar {text:?}")))?,
                    );
                }
                mrows.push(row);
            }
            out.push(mrows);
        }
        let t = Self::from_rows(out)?;
        let check = |key: &str, want: usize| -> Result<()> {
            match v.get(key).and_then(Value::as_u64) {
                Some(x) if x as usize != want => Err(Error::Shape(format!(
                    "{key} = {x} but the matrices say {want}"
                ))),
                _ => Ok(()),
            }
        };
        check("D", t.bond)?;
        check("d", t.phys())?;
        Ok(t)
    }
}

/// `T_N(M)` in necklace coordinates.
pub fn evaluate_umps<K: Ring>(tuple: &MatrixTuple<K>, n: usize) -> Result<CyclicTensor<K>> {
    if n == 0 {
        return Err(Error::InvalidArgument("N must be at least 1".into()));
    }
    let d = u8::try_from(tuple.phys())
        .map_err(|_| Error::InvalidArgument("too many matrices".into()))?;
    let basis = NecklaceBasis::new(n, d);
    Ok(evaluate_in_basis(tuple, &basis))
}

pub fn evaluate_in_basis<K: Ring>(
    tuple: &MatrixTuple<K>,
    basis: &Arc<NecklaceBasis>,
) -> CyclicTensor<K> {
    // necklaces come in lexicographic order, so consecutive words share
    // long prefixes; keep the stack of prefix products
    let mut prefix: Vec<(u8, Mat<K>)> = Vec::new();
    let mut coords = Vec::with_capacity(basis.len());
    for w in basis.necklaces() {
        let word = w.word();
        let common = prefix
            .iter()
            .zip(word)
            .take_while(|((s, _), c)| s == *c)
            .count();
        prefix.truncate(common);
        for &s in &word[common..] {
            let next = match prefix.last() {
                Some((_, m)) => m.mul(&tuple.mats[s as usize]),
                None => tuple.mats[s as usize].clone(),
            };
            prefix.push((s, next));
        }
        coords.push(prefix.last().expect("nonempty word").1.trace());
    }
    CyclicTensor::new(basis.clone(), coords)
}

/// Block-diagonal sum of tuples sharing `d`.
pub fn join_tuples<K: Ring>(tuples: &[MatrixTuple<K>]) -> Result<MatrixTuple<K>> {
    let first = tuples
        .first()
        .ok_or_else(|| Error::InvalidArgument("nothing to join".into()))?;
    let d = first.phys();
    if let Some(t) = tuples.iter().find(|t| t.phys() != d) {
        return Err(Error::Shape(format!(
            "cannot join tuples with d = {d} and d = {}",
            t.phys()
        )));
    }
    let total: usize = tuples.iter().map(MatrixTuple::bond).sum();
    let like = first.like().zero_like();
    let mut mats = vec![Mat::zeros(total, total, &like); d];
    let mut off = 0;
    for t in tuples {
        for (i, m) in t.mats.iter().enumerate() {
            for r in 0..t.bond {
                for c in 0..t.bond {
                    mats[i].set(off + r, off + c, m.get(r, c).clone());
                }
            }
        }
        off += t.bond;
    }
    MatrixTuple::new(mats)
}

/// `M'_i = Σ_j a_{ij} M_j`.
pub fn act_gl<K: Field>(a: &Mat<K>, tuple: &MatrixTuple<K>) -> Result<MatrixTuple<K>> {
    let d = tuple.phys();
    if a.rows() != d || a.cols() != d {
        return Err(Error::Shape(format!("expected a {d}x{d} matrix")));
    }
    if a.rank() < d {
        return Err(Error::Singular);
    }
    Ok(linear_combine(a, tuple))
}

pub(crate) fn linear_combine<K: Ring>(a: &Mat<K>, tuple: &MatrixTuple<K>) -> MatrixTuple<K> {
    let like = tuple.like().zero_like();
    let mats = (0..a.rows())
        .map(|i| {
            let mut acc = Mat::zeros(tuple.bond, tuple.bond, &like);
            for j in 0..a.cols() {
                if !a.get(i, j).is_zero() {
                    acc = acc.add(&tuple.mats[j].scale(a.get(i, j)));
                }
            }
            acc
        })
        .collect();
    MatrixTuple {
        bond: tuple.bond,
        mats,
    }
}

/// The diagonal action `A^{⊗N}` on a cyclic tensor, in necklace coordinates.
pub fn act_cyclic_tensor<K: Ring>(a: &Mat<K>, t: &CyclicTensor<K>) -> Result<CyclicTensor<K>> {
    let d = t.d() as usize;
    if a.rows() != d || a.cols() != d {
        return Err(Error::Shape(format!("expected a {d}x{d} matrix")));
    }
    let basis = t.basis().clone();
    let n = t.n();
    let like = t
        .coords()
        .first()
        .map(|c| c.zero_like())
        .unwrap_or_else(|| a.get(0, 0).zero_like());
    // expand every input necklace into its distinct rotations once
    let mut words: Vec<(Vec<u8>, &K)> = Vec::new();
    for (w, c) in t.iter() {
        if c.is_zero() {
            continue;
        }
        let word = w.word();
        for r in 0..w.orbit_size() {
            let rot: Vec<u8> = (0..n).map(|k| word[(k + r) % n]).collect();
            words.push((rot, c));
        }
    }
    let coords = basis
        .necklaces()
        .iter()
        .map(|v| {
            let vw = v.word();
            let mut acc = like.clone();
            for (u, c) in &words {
                let mut term = (*c).clone();
                for k in 0..n {
                    let x = a.get(vw[k] as usize, u[k] as usize);
                    if x.is_zero() {
                        term = like.clone();
                        break;
                    }
                    term = term * x;
                }
                acc = acc + &term;
            }
            acc
        })
        .collect();
    Ok(CyclicTensor::new(basis, coords))
}

/// `P^{-1} M_i P` for every `i`.
pub fn conjugate<K: Field>(tuple: &MatrixTuple<K>, p: &Mat<K>) -> Result<MatrixTuple<K>> {
    if p.rows() != tuple.bond || p.cols() != tuple.bond {
        return Err(Error::Shape(format!(
            "expected a {0}x{0} matrix",
            tuple.bond
        )));
    }
    let inv = p.inverse().ok_or(Error::Singular)?;
    let mats = tuple.mats.iter().map(|m| inv.mul(m).mul(p)).collect();
    MatrixTuple::new(mats)
}

/// Appends zero matrices up to physical dimension `d2`.
pub fn embed_physical<K: Ring>(tuple: &MatrixTuple<K>, d2: usize) -> Result<MatrixTuple<K>> {
    if d2 < tuple.phys() {
        return Err(Error::InvalidArgument(format!(
            "cannot embed d = {} into d' = {d2}",
            tuple.phys()
        )));
    }
    let mut mats = tuple.mats.clone();
    let zero = Mat::zeros(tuple.bond, tuple.bond, &tuple.like().zero_like());
    mats.resize(d2, zero);
    MatrixTuple::new(mats)
}

/// Restricts a cyclic tensor to necklaces over the first `d2` symbols.
pub fn project_physical<K: Ring>(t: &CyclicTensor<K>, d2: u8) -> Result<CyclicTensor<K>> {
    if d2 == 0 || d2 > t.d() {
        return Err(Error::InvalidArgument(format!(
            "cannot project d = {} to d' = {d2}",
            t.d()
        )));
    }
    let basis = NecklaceBasis::new(t.n(), d2);
    let coords = basis
        .necklaces()
        .iter()
        .map(|w| {
            t.coord(&w.label())
                .expect("smaller alphabet necklace")
                .clone()
        })
        .collect();
    Ok(CyclicTensor::new(basis, coords))
}

/// A linear space of square matrices given by an independent basis.
#[derive(Clone, Debug)]
pub struct MatrixSpace<K> {
    size: usize,
    basis: Vec<Mat<K>>,
}

impl<K: Field> MatrixSpace<K> {
    pub fn new(size: usize, basis: Vec<Mat<K>>) -> Result<Self> {
        if basis.iter().any(|m| m.rows() != size || m.cols() != size) {
            return Err(Error::Shape(format!(
                "basis matrices must be {size}x{size}"
            )));
        }
        let mut e = RowEchelon::new(size * size);
        for m in &basis {
            if !e.insert(m.entries().to_vec()) {
                return Err(Error::InvalidArgument(
                    "basis matrices are linearly dependent".into(),
                ));
            }
        }
        Ok(MatrixSpace { size, basis })
    }

    /// Span of the given matrices, with dependent ones dropped.
    pub fn spanned_by(size: usize, mats: &[Mat<K>]) -> Result<Self> {
        let mut e = RowEchelon::new(size * size);
        let mut basis = Vec::new();
        for m in mats {
            if m.rows() != size || m.cols() != size {
                return Err(Error::Shape(format!("matrices must be {size}x{size}")));
            }
            if e.insert(m.entries().to_vec()) {
                basis.push(m.clone());
            }
        }
        Ok(MatrixSpace { size, basis })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Mat<K>] {
        &self.basis
    }

    /// Dimensions of `L, L^2, …, L^k`.
    pub fn span_growth_sequence(&self, k: usize) -> Vec<usize> {
        let n2 = self.size * self.size;
        let mut out = Vec::with_capacity(k);
        let mut current: Vec<Mat<K>> = self.basis.clone();
        for step in 1..=k {
            if step > 1 {
                let mut e = RowEchelon::new(n2);
                let mut next = Vec::new();
                'outer: for a in &current {
                    for b in &self.basis {
                        let p = a.mul(b);
                        if e.insert(p.entries().to_vec()) {
                            next.push(p);
                            if e.rank() == n2 {
                                break 'outer;
                            }
                        }
                    }
                }
                current = next;
            }
            out.push(current.len());
        }
        out
    }

    /// `dim L^k`, the span of all products of `k` elements of `L`.
    pub fn span_growth(&self, k: usize) -> Result<usize> {
        if k == 0 {
            return Err(Error::InvalidArgument("k must be at least 1".into()));
        }
        Ok(*self.span_growth_sequence(k).last().unwrap())
    }
}

/// Result of [`generic_injectivity_estimate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InjectivityEstimate {
    /// Smallest `k ≤ D²` that worked for every sample.
    Index(usize),
    /// Some sample never reached full span by `k = D²`.
    Failed { trial: usize },
}

/// Smallest `k` such that words of length `k` in random `d`-tuples of
/// `D×D` rational matrices span all of `Mat_D`.
pub fn generic_injectivity_estimate(
    bond: usize,
    d: usize,
    trials: usize,
    seed: u64,
) -> Result<InjectivityEstimate> {
    if trials == 0 || bond == 0 || d == 0 {
        return Err(Error::InvalidArgument(
            "trials, D and d must be positive".into(),
        ));
    }
    let mut rng = rng_from_seed(seed);
    let full = bond * bond;
    let mut worst = 1;
    for trial in 0..trials {
        let t: MatrixTuple<Rational> = random_rational_tuple(&mut rng, bond, d, DEFAULT_HEIGHT);
        let space = MatrixSpace::spanned_by(bond, t.mats())?;
        let seq = space.span_growth_sequence(full);
        match seq.iter().position(|&x| x == full) {
            Some(i) => worst = worst.max(i + 1),
            None => return Ok(InjectivityEstimate::Failed { trial }),
        }
    }
    Ok(InjectivityEstimate::Index(worst))
}
