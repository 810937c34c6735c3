use std::cmp::Ordering;
use std::fmt;

/// Upper bound on the number of variables of a polynomial ring.
pub const MAX_VARS: usize = 24;

/// Exponent vector with cached total degree. Unused trailing slots are zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: [u16; MAX_VARS],
    deg: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial {
        exps: [0; MAX_VARS],
        deg: 0,
    };

    pub fn one() -> Self {
        Self::ONE
    }

    pub fn var(i: usize) -> Self {
        Self::var_pow(i, 1)
    }

    pub fn var_pow(i: usize, e: u16) -> Self {
        assert!(i < MAX_VARS);
        let mut m = Self::ONE;
        m.exps[i] = e;
        m.deg = e as u32;
        m
    }

    pub fn from_exponents(exps: &[u32]) -> Self {
        assert!(exps.len() <= MAX_VARS, "too many variables");
        let mut m = Self::ONE;
        for (i, &e) in exps.iter().enumerate() {
            m.exps[i] = u16::try_from(e).expect("exponent overflow");
            m.deg += e;
        }
        m
    }

    pub fn exponent(&self, i: usize) -> u32 {
        self.exps[i] as u32
    }

    pub fn exponents(&self, nvars: usize) -> &[u16] {
        &self.exps[..nvars]
    }

    pub fn degree(&self) -> u32 {
        self.deg
    }

    pub fn is_one(&self) -> bool {
        self.deg == 0
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        let mut m = *self;
        for i in 0..MAX_VARS {
            m.exps[i] += o.exps[i];
        }
        m.deg += o.deg;
        m
    }

    pub fn divides(&self, o: &Monomial) -> bool {
        self.deg <= o.deg && self.exps.iter().zip(&o.exps).all(|(a, b)| a <= b)
    }

    /// `o / self` when `self` divides `o`.
    pub fn quotient_of(&self, o: &Monomial) -> Option<Monomial> {
        if !self.divides(o) {
            return None;
        }
        let mut m = *o;
        for i in 0..MAX_VARS {
            m.exps[i] -= self.exps[i];
        }
        m.deg -= self.deg;
        Some(m)
    }

    pub fn lcm(&self, o: &Monomial) -> Monomial {
        let mut m = Self::ONE;
        for i in 0..MAX_VARS {
            m.exps[i] = self.exps[i].max(o.exps[i]);
            m.deg += m.exps[i] as u32;
        }
        m
    }

    pub fn is_coprime(&self, o: &Monomial) -> bool {
        self.exps
            .iter()
            .zip(&o.exps)
            .all(|(&a, &b)| a == 0 || b == 0)
    }

    /// Variables with positive exponent.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, _)| i)
    }

    /// Exponent vector with variables `from` moved to positions `to[from]`.
    pub fn permuted(&self, to: &[usize]) -> Monomial {
        let mut m = Self::ONE;
        for (i, &j) in to.iter().enumerate() {
            m.exps[j] = self.exps[i];
        }
        m.deg = self.deg;
        m
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let last = self.exps.iter().rposition(|&e| e > 0).map_or(0, |i| i + 1);
        write!(f, "{:?}", &self.exps[..last])
    }
}

/// Term orders on monomials.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    /// Graded reverse lexicographic.
    GrevLex,
    /// Pure lexicographic, x0 > x1 > ….
    Lex,
    /// Elimination order: grevlex on the first `split` variables, ties
    /// broken by grevlex on the remaining ones.
    Block { split: usize },
}

impl MonomialOrder {
    pub fn name(&self) -> String {
        match self {
            MonomialOrder::GrevLex => "grevlex".into(),
            MonomialOrder::Lex => "lex".into(),
            MonomialOrder::Block { split } => format!("block{split}"),
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "grevlex" => Some(MonomialOrder::GrevLex),
            "lex" => Some(MonomialOrder::Lex),
            _ => s
                .strip_prefix("block")?
                .parse()
                .ok()
                .map(|split| MonomialOrder::Block { split }),
        }
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial, nvars: usize) -> Ordering {
        match *self {
            MonomialOrder::GrevLex => grevlex(&a.exps[..nvars], &b.exps[..nvars], a.deg, b.deg),
            MonomialOrder::Lex => a.exps[..nvars].cmp(&b.exps[..nvars]),
            MonomialOrder::Block { split } => {
                let s = split.min(nvars);
                let (a1, a2) = a.exps[..nvars].split_at(s);
                let (b1, b2) = b.exps[..nvars].split_at(s);
                let da: u32 = a1.iter().map(|&e| e as u32).sum();
                let db: u32 = b1.iter().map(|&e| e as u32).sum();
                grevlex(a1, b1, da, db).then_with(|| grevlex(a2, b2, a.deg - da, b.deg - db))
            }
        }
    }
}

fn grevlex(a: &[u16], b: &[u16], da: u32, db: u32) -> Ordering {
    da.cmp(&db).then_with(|| {
        for i in (0..a.len()).rev() {
            if a[i] != b[i] {
                return b[i].cmp(&a[i]);
            }
        }
        Ordering::Equal
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::from_exponents(e)
    }

    #[test]
    fn grevlex_examples() {
        let o = MonomialOrder::GrevLex;
        // x^2 > xy > y^2 > xz > yz > z^2 in grevlex with x > y > z
        let seq = [
            m(&[2, 0, 0]),
            m(&[1, 1, 0]),
            m(&[0, 2, 0]),
            m(&[1, 0, 1]),
            m(&[0, 1, 1]),
            m(&[0, 0, 2]),
        ];
        for w in seq.windows(2) {
            assert_eq!(
                o.cmp(&w[0], &w[1], 3),
                Ordering::Greater,
                "{:?} vs {:?}",
                w[0],
                w[1]
            );
        }
        assert_eq!(o.cmp(&m(&[0, 0, 3]), &m(&[2, 0, 0]), 3), Ordering::Greater);
    }

    #[test]
    fn lex_and_block() {
        assert_eq!(
            MonomialOrder::Lex.cmp(&m(&[1, 0]), &m(&[0, 5]), 2),
            Ordering::Greater
        );
        let b = MonomialOrder::Block { split: 1 };
        assert_eq!(b.cmp(&m(&[1, 0, 0]), &m(&[0, 4, 4]), 3), Ordering::Greater);
        assert_eq!(b.cmp(&m(&[1, 2, 0]), &m(&[1, 0, 1]), 3), Ordering::Greater);
    }

    #[test]
    fn divisibility_and_lcm() {
        let a = m(&[1, 2]);
        let b = m(&[2, 1]);
        assert_eq!(a.lcm(&b), m(&[2, 2]));
        assert!(a.divides(&m(&[1, 3])));
        assert!(!a.divides(&b));
        assert_eq!(a.quotient_of(&m(&[3, 2])), Some(m(&[2, 0])));
        assert!(m(&[1, 0]).is_coprime(&m(&[0, 4])));
        assert_eq!(
            MonomialOrder::parse("block3"),
            Some(MonomialOrder::Block { split: 3 })
        );
    }
}
