//! Necklaces and the cyclic tensor space Cyc^N(K^d).
//!
//! A basis vector `e_w` of Cyc^N(K^d) is the sum of the distinct cyclic
//! rotations of a word `w`; we index it by the lexicographically least
//! rotation. All tensors in this crate store dense coordinates in the
//! lexicographic order of these canonical words.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::arith::{Ring, ScalarText};
use crate::error::{Error, Result};

/// A canonical cyclic word over the alphabet `{0, …, d−1}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Necklace {
    word: Vec<u8>,
    d: u8,
}

impl Necklace {
    pub fn word(&self) -> &[u8] {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn alphabet(&self) -> u8 {
        self.d
    }

    /// Number of occurrences of `symbol`.
    pub fn count(&self, symbol: u8) -> usize {
        self.word.iter().filter(|&&s| s == symbol).count()
    }

    /// Size of the rotation orbit of the word (N divided by its period).
    pub fn orbit_size(&self) -> usize {
        let n = self.word.len();
        (1..=n)
            .find(|&k| {
                n.is_multiple_of(k) && (0..n).all(|i| self.word[i] == self.word[(i + k) % n])
            })
            .unwrap_or(n)
    }

    /// Digit-string serialization, e.g. `"0011"`.
    pub fn label(&self) -> String {
        self.word
            .iter()
            .map(|&s| char::from_digit(s as u32, 36).unwrap())
            .collect()
    }

    pub fn parse(label: &str, d: u8) -> Result<Necklace> {
        let word = label
            .chars()
            .map(|c| {
                c.to_digit(36)
                    .map(|v| v as u8)
                    .ok_or_else(|| Error::Parse(format!("bad symbol {c:?} in {label:?}")))
            })
            .collect::<Result<Vec<u8>>>()?;
        canonicalize(&word, d)
    }
}

impl fmt::Debug for Necklace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e_{}", self.label())
    }
}

impl fmt::Display for Necklace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Start index of the lexicographically least rotation (linear-time
/// two-pointer least-rotation search).
pub fn least_rotation(s: &[u8]) -> usize {
    let n = s.len();
    let (mut i, mut j, mut k) = (0usize, 1usize, 0usize);
    while i < n && j < n && k < n {
        let a = s[(i + k) % n];
        let b = s[(j + k) % n];
        if a == b {
            k += 1;
            continue;
        }
        if a > b {
            i += k + 1;
        } else {
            j += k + 1;
        }
        if i == j {
            j += 1;
        }
        k = 0;
    }
    i.min(j)
}

/// Minimal rotation of `word` as a [`Necklace`].
pub fn canonicalize(word: &[u8], d: u8) -> Result<Necklace> {
    if word.is_empty() {
        return Err(Error::InvalidArgument("empty word".into()));
    }
    if d == 0 {
        return Err(Error::InvalidArgument(
            "alphabet size must be positive".into(),
        ));
    }
    if let Some(&s) = word.iter().find(|&&s| s >= d) {
        return Err(Error::InvalidArgument(format!(
            "symbol {s} out of range for d = {d}"
        )));
    }
    let k = least_rotation(word);
    let mut w = Vec::with_capacity(word.len());
    w.extend_from_slice(&word[k..]);
    w.extend_from_slice(&word[..k]);
    Ok(Necklace { word: w, d })
}

/// All necklaces of length `n` over `d` symbols in lexicographic order
/// (Fredricksen–Kessler–Maiorana).
pub fn enumerate_necklaces(n: usize, d: u8) -> Vec<Necklace> {
    assert!(n >= 1 && d >= 1);
    let mut out = Vec::new();
    let mut a = vec![0u8; n + 1];
    fkm(1, 1, n, d, &mut a, &mut out);
    out
}

fn fkm(t: usize, p: usize, n: usize, d: u8, a: &mut Vec<u8>, out: &mut Vec<Necklace>) {
    if t > n {
        if n.is_multiple_of(p) {
            out.push(Necklace {
                word: a[1..=n].to_vec(),
                d,
            });
        }
        return;
    }
    a[t] = a[t - p];
    fkm(t + 1, p, n, d, a, out);
    for s in a[t - p] + 1..d {
        a[t] = s;
        fkm(t + 1, t, n, d, a, out);
    }
}

fn totient(mut n: u64) -> u64 {
    let mut r = n;
    let mut q = 2;
    while q * q <= n {
        if n.is_multiple_of(q) {
            while n.is_multiple_of(q) {
                n /= q;
            }
            r -= r / q;
        }
        q += 1;
    }
    if n > 1 {
        r -= r / n;
    }
    r
}

/// dim Cyc^N(K^d) = (1/N) Σ_{ℓ | N} φ(ℓ) d^{N/ℓ}.
pub fn cyc_dim(n: usize, d: u64) -> u64 {
    assert!(n >= 1 && d >= 1);
    let mut s = BigUint::zero();
    for l in 1..=n {
        if n.is_multiple_of(l) {
            s += BigUint::from(totient(l as u64)) * BigUint::from(d).pow((n / l) as u32);
        }
    }
    (s / BigUint::from(n)).to_u64().expect("dimension fits u64")
}

fn binom(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut r = BigUint::from(1u32);
    for i in 0..k {
        r = r * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    r
}

/// Binomial coefficient as an arbitrary-precision integer.
pub fn binomial(n: u64, k: u64) -> BigUint {
    binom(n, k)
}

/// Number of rotation classes of binary words with `n0` zeros and `n1` ones:
/// (1/N) Σ_{g | gcd(n0, n1)} φ(g) C(N/g, n0/g).
pub fn count_binary_necklaces(n0: u64, n1: u64) -> BigUint {
    assert!(n0 + n1 >= 1);
    let n = n0 + n1;
    let g = n0.gcd(&n1);
    let mut s = BigUint::zero();
    for t in 1..=g {
        if g.is_multiple_of(t) {
            s += BigUint::from(totient(t)) * binom(n / t, n0 / t);
        }
    }
    s / BigUint::from(n)
}

/// Ordered necklace basis of Cyc^N(K^d) with a label index.
#[derive(Debug, PartialEq, Eq)]
pub struct NecklaceBasis {
    n: usize,
    d: u8,
    necklaces: Vec<Necklace>,
    index: HashMap<Vec<u8>, usize>,
}

impl NecklaceBasis {
    pub fn new(n: usize, d: u8) -> Arc<Self> {
        let necklaces = enumerate_necklaces(n, d);
        let index = necklaces
            .iter()
            .enumerate()
            .map(|(i, w)| (w.word.clone(), i))
            .collect();
        Arc::new(NecklaceBasis {
            n,
            d,
            necklaces,
            index,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> u8 {
        self.d
    }

    pub fn len(&self) -> usize {
        self.necklaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.necklaces.is_empty()
    }

    pub fn necklaces(&self) -> &[Necklace] {
        &self.necklaces
    }

    /// Position of a canonical word.
    pub fn index_of(&self, w: &Necklace) -> Option<usize> {
        self.index.get(&w.word).copied()
    }

    /// Position of the necklace of an arbitrary (not necessarily canonical) word.
    pub fn index_of_word(&self, word: &[u8]) -> Option<usize> {
        let w = canonicalize(word, self.d).ok()?;
        self.index_of(&w)
    }

    /// Variable names `x<label>` used for coordinates on this space.
    pub fn coordinate_names(&self) -> Vec<String> {
        self.necklaces
            .iter()
            .map(|w| format!("x{}", w.label()))
            .collect()
    }
}

/// Dense coordinate vector over the necklace basis of Cyc^N(K^d).
#[derive(Clone, Debug, PartialEq)]
pub struct CyclicTensor<K> {
    basis: Arc<NecklaceBasis>,
    coords: Vec<K>,
}

impl<K: Ring> CyclicTensor<K> {
    pub fn new(basis: Arc<NecklaceBasis>, coords: Vec<K>) -> Self {
        assert_eq!(
            basis.len(),
            coords.len(),
            "coordinate count must match basis"
        );
        CyclicTensor { basis, coords }
    }

    pub fn zero(basis: Arc<NecklaceBasis>, like: &K) -> Self {
        let coords = vec![like.zero_like(); basis.len()];
        CyclicTensor { basis, coords }
    }

    /// The basis vector `e_w` scaled by one.
    pub fn basis_vector(basis: Arc<NecklaceBasis>, label: &str, like: &K) -> Result<Self> {
        let w = Necklace::parse(label, basis.d)?;
        let i = basis.index_of(&w).ok_or_else(|| {
            Error::InvalidArgument(format!("{label} is not a length-{} word", basis.n))
        })?;
        let mut t = CyclicTensor::zero(basis, like);
        t.coords[i] = like.one_like();
        Ok(t)
    }

    pub fn basis(&self) -> &Arc<NecklaceBasis> {
        &self.basis
    }

    pub fn n(&self) -> usize {
        self.basis.n
    }

    pub fn d(&self) -> u8 {
        self.basis.d
    }

    pub fn coords(&self) -> &[K] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<K> {
        self.coords
    }

    pub fn coord(&self, label: &str) -> Option<&K> {
        let w = Necklace::parse(label, self.basis.d).ok()?;
        self.basis.index_of(&w).map(|i| &self.coords[i])
    }

    pub fn set_coord(&mut self, label: &str, v: K) -> Result<()> {
        let w = Necklace::parse(label, self.basis.d)?;
        let i = self
            .basis
            .index_of(&w)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown necklace {label}")))?;
        self.coords[i] = v;
        Ok(())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Necklace, &K)> {
        self.basis.necklaces.iter().zip(&self.coords)
    }

    pub fn map<L: Ring>(&self, f: impl FnMut(&K) -> L) -> CyclicTensor<L> {
        CyclicTensor {
            basis: self.basis.clone(),
            coords: self.coords.iter().map(f).collect(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.basis, o.basis, "tensors live in different spaces");
        CyclicTensor {
            basis: self.basis.clone(),
            coords: self
                .coords
                .iter()
                .zip(&o.coords)
                .map(|(a, b)| a.clone() + b)
                .collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!(self.basis, o.basis, "tensors live in different spaces");
        CyclicTensor {
            basis: self.basis.clone(),
            coords: self
                .coords
                .iter()
                .zip(&o.coords)
                .map(|(a, b)| a.clone() - b)
                .collect(),
        }
    }

    pub fn scale(&self, c: &K) -> Self {
        self.map(|a| a.clone() * c)
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Ring::is_zero)
    }
}

impl<K: ScalarText> CyclicTensor<K> {
    /// `{"N": …, "d": …, "coords": {"0011": "<scalar>", …}}`.
    pub fn to_json(&self) -> Value {
        let coords: serde_json::Map<String, Value> = self
            .iter()
            .map(|(w, c)| (w.label(), Value::String(c.render())))
            .collect();
        json!({ "N": self.n(), "d": self.d(), "coords": coords })
    }

    /// Inverse of [`CyclicTensor::to_json`]. Missing coordinates are zero.
    pub fn from_json(v: &Value) -> Result<Self> {
        let n = v
            .get("N")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("missing N".into()))?;
        let d = v
            .get("d")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("missing d".into()))?;
        if n == 0 || d == 0 || d > 36 {
            return Err(Error::Parse(format!("invalid shape N = {n}, d = {d}")));
        }
        let basis = NecklaceBasis::new(n as usize, d as u8);
        let mut t = CyclicTensor::zero(basis, &K::zero());
        let coords = v
            .get("coords")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::Parse("missing coords object".into()))?;
        for (label, c) in coords {
            let text = match c {
                Value::String(s) => s.clone(),
                Value::Number(x) => x.to_string(),
                _ => return Err(Error::Parse(format!("coordinate {label} is not a scalar"))),
            };
            let x = K::parse_text(&text)
                .ok_or_else(|| Error::Parse(format!("bad scalar {text:?} at {label}")))?;
            let w = Necklace::parse(label, d as u8)?;
            if w.label() != *label {
                return Err(Error::Parse(format!(
                    "{label} is not in canonical form ({})",
                    w.label()
                )));
            }
            if w.len() != n as usize {
                return Err(Error::Parse(format!(
                    "{label} has length {}, expected {n}",
                    w.len()
                )));
            }
            t.set_coord(label, x)?;
        }
        Ok(t)
    }
}

/// The W-state `e_{0⋯01}` in Cyc^N(K^2).
pub fn w_state<K: Ring>(n: usize, like: &K) -> CyclicTensor<K> {
    assert!(n >= 1);
    let basis = NecklaceBasis::new(n, 2);
    let mut word = vec![0u8; n];
    word[n - 1] = 1;
    let i = basis.index_of_word(&word).expect("0…01 is a word");
    let mut t = CyclicTensor::zero(basis, like);
    t.coords[i] = like.one_like();
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat_int, QuadExt, Rational};
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    fn brute_force_necklaces(n: usize, d: u8) -> Vec<Vec<u8>> {
        let mut set = BTreeSet::new();
        let total = (d as usize).pow(n as u32);
        for mut code in 0..total {
            let mut w = vec![0u8; n];
            for i in (0..n).rev() {
                w[i] = (code % d as usize) as u8;
                code /= d as usize;
            }
            let min = (0..n)
                .map(|k| w[k..].iter().chain(&w[..k]).copied().collect::<Vec<u8>>())
                .min()
                .unwrap();
            set.insert(min);
        }
        set.into_iter().collect()
    }

    fn labels(v: &[Necklace]) -> Vec<String> {
        v.iter().map(Necklace::label).collect()
    }

    #[test]
    fn canonicalize_examples() {
        assert_eq!(
            canonicalize(&[1, 0, 1, 0], 2).unwrap().word(),
            &[0, 1, 0, 1]
        );
        assert_eq!(canonicalize(&[1, 1, 0], 2).unwrap().word(), &[0, 1, 1]);
        assert_eq!(canonicalize(&[0, 0, 0], 2).unwrap().word(), &[0, 0, 0]);
        assert!(canonicalize(&[0, 2], 2).is_err());
        assert!(canonicalize(&[], 2).is_err());
    }

    #[test]
    fn enumerate_examples() {
        assert_eq!(
            labels(&enumerate_necklaces(4, 2)),
            ["0000", "0001", "0011", "0101", "0111", "1111"]
        );
        assert_eq!(
            labels(&enumerate_necklaces(3, 2)),
            ["000", "001", "011", "111"]
        );
        assert_eq!(labels(&enumerate_necklaces(1, 3)), ["0", "1", "2"]);
    }

    #[test]
    fn enumeration_matches_brute_force_and_formula() {
        for d in 1..=3u8 {
            for n in 1..=12usize {
                if (d as usize).pow(n as u32) > 600_000 {
                    continue;
                }
                let fast: Vec<Vec<u8>> = enumerate_necklaces(n, d)
                    .into_iter()
                    .map(|w| w.word)
                    .collect();
                assert_eq!(fast, brute_force_necklaces(n, d), "N = {n}, d = {d}");
                assert_eq!(fast.len() as u64, cyc_dim(n, d as u64));
            }
        }
    }

    #[test]
    fn cyc_dim_table_values() {
        assert_eq!(cyc_dim(6, 2), 14);
        assert_eq!(cyc_dim(7, 2), 20);
        assert_eq!(cyc_dim(5, 2), (32 + 4 * 2) / 5);
    }

    #[test]
    fn binary_necklace_counts() {
        assert_eq!(count_binary_necklaces(3, 3), BigUint::from(4u32));
        for n0 in 1..10 {
            assert_eq!(count_binary_necklaces(n0, 0), BigUint::from(1u32));
        }
        assert_eq!(count_binary_necklaces(1, 1), BigUint::from(1u32));
        // brute force: group canonical words by content
        for n in 1..=12usize {
            let mut by_content = vec![0u64; n + 1];
            for w in enumerate_necklaces(n, 2) {
                by_content[w.count(1)] += 1;
            }
            let mut total = 0u64;
            for n1 in 0..=n {
                let c = count_binary_necklaces((n - n1) as u64, n1 as u64);
                assert_eq!(c, BigUint::from(by_content[n1]), "N = {n}, N1 = {n1}");
                total += c.to_u64().unwrap();
            }
            assert_eq!(total, cyc_dim(n, 2));
        }
    }

    #[test]
    fn w_state_coordinates() {
        let w = w_state(4, &rat_int(0));
        let ones: Vec<Rational> = [0, 1, 0, 0, 0, 0].iter().map(|&x| rat_int(x)).collect();
        assert_eq!(w.coords(), &ones[..]);
        assert_eq!(w_state(3, &rat_int(0)).coord("001"), Some(&rat_int(1)));
        let w1 = w_state(1, &rat_int(0));
        assert_eq!(w1.coords(), &[rat_int(0), rat_int(1)]);
    }

    #[test]
    fn json_round_trip_quad() {
        let basis = NecklaceBasis::new(4, 2);
        let mut t = CyclicTensor::zero(basis, &QuadExt::sqrt2());
        t.set_coord("0011", QuadExt::parse("1").unwrap()).unwrap();
        t.set_coord("0101", QuadExt::sqrt2()).unwrap();
        let v = t.to_json();
        assert_eq!(v["coords"]["0101"], "1*sqrt2");
        assert_eq!(CyclicTensor::<QuadExt>::from_json(&v).unwrap(), t);
    }

    #[test]
    fn json_rejects_non_canonical_labels() {
        let v = json!({"N": 4, "d": 2, "coords": {"1000": "1"}});
        assert!(CyclicTensor::<Rational>::from_json(&v).is_err());
    }

    #[test]
    fn orbit_sizes() {
        assert_eq!(Necklace::parse("0101", 2).unwrap().orbit_size(), 2);
        assert_eq!(Necklace::parse("0011", 2).unwrap().orbit_size(), 4);
        assert_eq!(Necklace::parse("000", 2).unwrap().orbit_size(), 1);
    }

    proptest! {
        #[test]
        fn canonicalize_is_rotation_invariant(word in prop::collection::vec(0u8..3, 1..14), k in 0usize..14) {
            let c = canonicalize(&word, 3).unwrap();
            let k = k % word.len();
            let rotated: Vec<u8> = word[k..].iter().chain(&word[..k]).copied().collect();
            prop_assert_eq!(canonicalize(&rotated, 3).unwrap(), c.clone());
            prop_assert_eq!(canonicalize(c.word(), 3).unwrap(), c);
        }
    }
}
