//! Dense exact linear algebra over any [`Field`].

use crate::arith::{Field, Ring};

/// Square or rectangular dense matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat<K> {
    rows: usize,
    cols: usize,
    data: Vec<K>,
}

impl<K: Ring> Mat<K> {
    pub fn from_rows(rows: Vec<Vec<K>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> K) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize, like: &K) -> Self {
        Mat {
            rows,
            cols,
            data: vec![like.zero_like(); rows * cols],
        }
    }

    pub fn identity(n: usize, like: &K) -> Self {
        Mat::from_fn(n, n, |i, j| {
            if i == j {
                like.one_like()
            } else {
                like.zero_like()
            }
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &K {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: K) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[K] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<K>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> &[K] {
        &self.data
    }

    pub fn map<L>(&self, f: impl FnMut(&K) -> L) -> Mat<L> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn mul(&self, o: &Mat<K>) -> Mat<K> {
        assert_eq!(self.cols, o.rows, "dimension mismatch in product");
        let like = self
            .data
            .first()
            .or(o.data.first())
            .expect("empty matrix product");
        let mut out = Mat::zeros(self.rows, o.cols, like);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * o.cols + j;
                    let cur = std::mem::replace(&mut out.data[idx], a.zero_like());
                    out.data[idx] = cur + &(a.clone() * b);
                }
            }
        }
        out
    }

    pub fn add(&self, o: &Mat<K>) -> Mat<K> {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&o.data)
                .map(|(a, b)| a.clone() + b)
                .collect(),
        }
    }

    pub fn scale(&self, c: &K) -> Mat<K> {
        self.map(|a| a.clone() * c)
    }

    pub fn trace(&self) -> K {
        assert!(self.is_square());
        let mut acc = self.data[0].zero_like();
        for i in 0..self.rows {
            acc = acc + self.get(i, i);
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Ring::is_zero)
    }
}

impl<K: Field> Mat<K> {
    pub fn rank(&self) -> usize {
        rank(&self.to_rows())
    }

    /// Inverse via Gauss–Jordan; `None` when singular.
    pub fn inverse(&self) -> Option<Mat<K>> {
        assert!(self.is_square());
        let n = self.rows;
        let like = &self.data[0];
        let mut a = self.to_rows();
        let mut inv = Mat::identity(n, like).to_rows();
        for col in 0..n {
            let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
            a.swap(col, piv);
            inv.swap(col, piv);
            let s = a[col][col].inv().expect("nonzero pivot");
            for j in 0..n {
                a[col][j] = a[col][j].clone() * &s;
                inv[col][j] = inv[col][j].clone() * &s;
            }
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let f = a[r][col].clone();
                for j in 0..n {
                    let t = f.clone() * &a[col][j];
                    a[r][j] = a[r][j].clone() - &t;
                    let t = f.clone() * &inv[col][j];
                    inv[r][j] = inv[r][j].clone() - &t;
                }
            }
        }
        Some(Mat::from_rows(inv))
    }
}

/// Incrementally maintained reduced row echelon form.
///
/// Rows are inserted one at a time; each stored row has a leading 1 in its
/// pivot column and zeros in every other stored row's pivot column.
#[derive(Clone, Debug)]
pub struct RowEchelon<K> {
    cols: usize,
    rows: Vec<Vec<K>>,
    pivots: Vec<usize>,
}

impl<K: Field> RowEchelon<K> {
    pub fn new(cols: usize) -> Self {
        RowEchelon {
            cols,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn rows(&self) -> &[Vec<K>] {
        &self.rows
    }

    /// Reduces `v` against the stored rows in place.
    pub fn reduce(&self, v: &mut [K]) {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let f = v[p].clone();
            for j in 0..self.cols {
                if row[j].is_zero() {
                    continue;
                }
                let t = f.clone() * &row[j];
                v[j] = v[j].clone() - &t;
            }
        }
    }

    pub fn contains(&self, v: &[K]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(Ring::is_zero)
    }

    /// Inserts `v`; returns whether the rank grew.
    pub fn insert(&mut self, mut v: Vec<K>) -> bool {
        assert_eq!(v.len(), self.cols);
        self.reduce(&mut v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let s = v[p].inv().expect("nonzero pivot");
        for x in v.iter_mut() {
            if !x.is_zero() {
                *x = x.clone() * &s;
            }
        }
        for row in self.rows.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let f = row[p].clone();
            for j in 0..self.cols {
                if v[j].is_zero() {
                    continue;
                }
                let t = f.clone() * &v[j];
                row[j] = row[j].clone() - &t;
            }
        }
        self.rows.push(v);
        self.pivots.push(p);
        true
    }

    /// Basis of `{x : r·x = 0 for every stored row r}`.
    pub fn null_space(&self, like: &K) -> Vec<Vec<K>> {
        let mut is_pivot = vec![false; self.cols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        let mut out = Vec::new();
        for free in (0..self.cols).filter(|&j| !is_pivot[j]) {
            let mut x = vec![like.zero_like(); self.cols];
            x[free] = like.one_like();
            for (row, &p) in self.rows.iter().zip(&self.pivots) {
                if !row[free].is_zero() {
                    x[p] = -row[free].clone();
                }
            }
            out.push(x);
        }
        out
    }
}

pub fn rank<K: Field>(rows: &[Vec<K>]) -> usize {
    let Some(first) = rows.first() else { return 0 };
    let mut e = RowEchelon::new(first.len());
    for r in rows {
        e.insert(r.clone());
        if e.rank() == e.cols() {
            break;
        }
    }
    e.rank()
}

/// Basis of the right kernel `{x : A x = 0}` where `A` has the given rows.
pub fn kernel<K: Field>(rows: &[Vec<K>], cols: usize, like: &K) -> Vec<Vec<K>> {
    let mut e = RowEchelon::new(cols);
    for r in rows {
        e.insert(r.clone());
    }
    e.null_space(like)
}

/// The unique solution of `A x = b`, or `None` if the system is inconsistent
/// or underdetermined.
pub fn solve_unique<K: Field>(rows: &[Vec<K>], rhs: &[K]) -> Option<Vec<K>> {
    assert_eq!(rows.len(), rhs.len());
    let cols = rows.first()?.len();
    let mut e = RowEchelon::new(cols + 1);
    for (r, b) in rows.iter().zip(rhs) {
        let mut v = r.clone();
        v.push(b.clone());
        e.insert(v);
    }
    if e.pivots().contains(&cols) || e.rank() != cols {
        return None;
    }
    let like = &rhs[0];
    let mut x = vec![like.zero_like(); cols];
    for (row, &p) in e.rows().iter().zip(e.pivots()) {
        x[p] = row[cols].clone();
    }
    Some(x)
}
