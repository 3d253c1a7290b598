//! Exterior algebra on the dual of an `n`-dimensional space with basis `alpha_1..alpha_n`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::exact::{ExactMatrix, Gq};

/// Largest supported ambient dimension.
pub const MAX_DIM: usize = 16;

/// Wedge monomial `alpha_{i1} ^ ... ^ alpha_{ik}` with `i1 < ... < ik`, stored
/// as a bit mask of zero-based indices.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial(u32);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    /// From one-based indices; `None` when an index repeats or is zero.
    pub fn from_indices(indices: &[usize]) -> Option<Monomial> {
        let mut mask = 0u32;
        for &i in indices {
            if i == 0 || i > MAX_DIM || mask & (1 << (i - 1)) != 0 {
                return None;
            }
            mask |= 1 << (i - 1);
        }
        Some(Monomial(mask))
    }

    pub fn from_mask(mask: u32) -> Monomial {
        Monomial(mask)
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Increasing one-based indices.
    pub fn indices(self) -> Vec<usize> {
        (0..32).filter(|b| self.0 & (1 << b) != 0).map(|b| b + 1).collect()
    }

    /// `self ^ other = sign * (self | other)`; sign 0 when they share an index.
    pub fn wedge_sign(self, other: Monomial) -> i8 {
        if self.0 & other.0 != 0 {
            return 0;
        }
        // count pairs (i in self, j in other) with i > j
        let mut inversions = 0u32;
        let mut rest = other.0;
        while rest != 0 {
            let j = rest.trailing_zeros();
            rest &= rest - 1;
            inversions += (self.0 >> (j + 1)).count_ones();
        }
        if inversions % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn key(self) -> String {
        if self.0 == 0 {
            return "1".into();
        }
        self.indices().iter().map(|i| format!("e{i}")).collect::<Vec<_>>().join("^")
    }

    pub fn parse_key(key: &str) -> Option<Monomial> {
        if key == "1" {
            return Some(Monomial::ONE);
        }
        let mut idx = Vec::new();
        for part in key.split('^') {
            let i: usize = part.strip_prefix('e')?.parse().ok()?;
            idx.push(i);
        }
        if idx.windows(2).any(|w| w[0] >= w[1]) {
            return None;
        }
        Monomial::from_indices(&idx)
    }
}

impl Ord for Monomial {
    /// Degree first, then lexicographic on the increasing index sequence.
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.degree().cmp(&o.degree()).then_with(|| {
            let x = self.0 ^ o.0;
            if x == 0 {
                std::cmp::Ordering::Equal
            } else if self.0 & (1 << x.trailing_zeros()) != 0 {
                // the first differing index belongs to self, so self sorts first
                std::cmp::Ordering::Less
            } else {
                std::cmp::Ordering::Greater
            }
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key())
    }
}

/// Canonical monomial bases of every `Λ^k`, k = 0..=n.
#[derive(Clone, Debug)]
pub struct ExteriorBasis {
    n: usize,
    by_degree: Vec<Vec<Monomial>>,
    position: Vec<usize>,
}

impl ExteriorBasis {
    pub fn new(n: usize) -> Self {
        assert!(n <= MAX_DIM, "dimension {n} exceeds {MAX_DIM}");
        let mut by_degree = vec![Vec::new(); n + 1];
        for mask in 0u32..(1u32 << n) {
            let m = Monomial(mask);
            by_degree[m.degree()].push(m);
        }
        let mut position = vec![0; 1 << n];
        for monos in &mut by_degree {
            monos.sort();
            for (p, m) in monos.iter().enumerate() {
                position[m.0 as usize] = p;
            }
        }
        ExteriorBasis { n, by_degree, position }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self, k: usize) -> usize {
        self.by_degree.get(k).map_or(0, Vec::len)
    }

    pub fn monomials(&self, k: usize) -> &[Monomial] {
        &self.by_degree[k]
    }

    pub fn position(&self, m: Monomial) -> usize {
        self.position[m.0 as usize]
    }

    /// The top-degree monomial `alpha_1 ^ ... ^ alpha_n`.
    pub fn top(&self) -> Monomial {
        Monomial(((1u64 << self.n) - 1) as u32)
    }
}

/// A (possibly inhomogeneous) complex form; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct FormValue {
    n: usize,
    terms: BTreeMap<Monomial, Gq>,
}

impl FormValue {
    pub fn zero(n: usize) -> Self {
        FormValue { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: Gq) -> Self {
        FormValue::monomial(n, Monomial::ONE, c)
    }

    pub fn monomial(n: usize, m: Monomial, c: Gq) -> Self {
        let mut f = FormValue::zero(n);
        f.add_term(m, c);
        f
    }

    /// `alpha_{i1} ^ ... ^ alpha_{ik}` in given order (one-based), with sign.
    pub fn alpha(n: usize, indices: &[usize]) -> Self {
        let mut f = FormValue::constant(n, Gq::one());
        for &i in indices {
            let m = Monomial::from_indices(&[i]).filter(|_| i <= n).expect("index in range");
            f = f.wedge(&FormValue::monomial(n, m, Gq::one()));
        }
        f
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Gq)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: Monomial) -> Gq {
        self.terms.get(&m).cloned().unwrap_or_else(Gq::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, c: Gq) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m).or_insert_with(Gq::zero);
        *e += &c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    /// Degrees present, ascending.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.terms.keys().map(|m| m.degree()).collect();
        d.dedup();
        d
    }

    /// Degree when homogeneous and non-zero.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        match self.degrees().as_slice() {
            [k] => Some(*k),
            _ => None,
        }
    }

    pub fn component(&self, k: usize) -> FormValue {
        FormValue {
            n: self.n,
            terms: self.terms.iter().filter(|(m, _)| m.degree() == k).map(|(m, c)| (*m, c.clone())).collect(),
        }
    }

    pub fn add(&self, o: &FormValue) -> FormValue {
        assert_eq!(self.n, o.n, "form dimension mismatch");
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, o: &FormValue) -> FormValue {
        self.add(&o.scale(&Gq::from_int(-1)))
    }

    pub fn scale(&self, s: &Gq) -> FormValue {
        let mut out = FormValue::zero(self.n);
        for (m, c) in &self.terms {
            out.add_term(*m, c * s);
        }
        out
    }

    pub fn conj(&self) -> FormValue {
        FormValue { n: self.n, terms: self.terms.iter().map(|(m, c)| (*m, c.conj())).collect() }
    }

    pub fn try_wedge(&self, o: &FormValue) -> Result<FormValue, String> {
        if self.n != o.n {
            return Err(format!("wedge of forms on dimensions {} and {}", self.n, o.n));
        }
        let mut out = FormValue::zero(self.n);
        for (a, ca) in &self.terms {
            for (b, cb) in &o.terms {
                let s = a.wedge_sign(*b);
                if s == 0 {
                    continue;
                }
                let c = ca * cb;
                out.add_term(Monomial(a.0 | b.0), if s > 0 { c } else { -c });
            }
        }
        Ok(out)
    }

    pub fn wedge(&self, o: &FormValue) -> FormValue {
        self.try_wedge(o).expect("wedge dimension mismatch")
    }

    /// Coordinates of the degree-`k` part in the canonical basis.
    pub fn to_vector(&self, basis: &ExteriorBasis, k: usize) -> Vec<Gq> {
        let mut v = vec![Gq::zero(); basis.dim(k)];
        for (m, c) in &self.terms {
            if m.degree() == k {
                v[basis.position(*m)] = c.clone();
            }
        }
        v
    }

    pub fn from_vector(basis: &ExteriorBasis, k: usize, v: &[Gq]) -> FormValue {
        let mut f = FormValue::zero(basis.n());
        for (m, c) in basis.monomials(k).iter().zip(v) {
            f.add_term(*m, c.clone());
        }
        f
    }
}

impl fmt::Debug for FormValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FormValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(m, c)| format!("({c}) {}", m.key())).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Serialize for FormValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(Some(self.terms.len()))?;
        for (m, c) in &self.terms {
            map.serialize_entry(&m.key(), c)?;
        }
        map.end()
    }
}

/// Deserialization needs the ambient dimension, so forms are read as a raw
/// key map and then checked with [`FormValue::from_key_map`].
#[derive(Debug, Clone, Deserialize)]
#[serde(transparent)]
pub struct FormKeyMap(pub BTreeMap<String, Gq>);

impl FormValue {
    pub fn from_key_map(n: usize, raw: &FormKeyMap) -> Result<FormValue, String> {
        let mut f = FormValue::zero(n);
        for (k, c) in &raw.0 {
            let m = Monomial::parse_key(k).ok_or_else(|| format!("bad monomial key {k:?}"))?;
            if m.indices().last().is_some_and(|&i| i > n) {
                return Err(format!("monomial {k:?} out of range for dimension {n}"));
            }
            f.add_term(m, c.clone());
        }
        Ok(f)
    }

    pub fn deserialize_with_dim<'de, D: Deserializer<'de>>(n: usize, d: D) -> Result<FormValue, D::Error> {
        let raw = FormKeyMap::deserialize(d)?;
        FormValue::from_key_map(n, &raw).map_err(D::Error::custom)
    }
}

/// Matrix of the degree-`k` compound of an `n x n` matrix `a` in the
/// canonical monomial bases: entry `(I, J)` is `det a[I, J]`.
pub fn compound(a: &ExactMatrix, basis: &ExteriorBasis, k: usize) -> ExactMatrix {
    let monos = basis.monomials(k);
    let idx: Vec<Vec<usize>> = monos.iter().map(|m| m.indices().iter().map(|i| i - 1).collect()).collect();
    ExactMatrix::from_fn(monos.len(), monos.len(), |r, c| {
        if k == 0 {
            Gq::one()
        } else {
            a.select(&idx[r], &idx[c]).det().expect("square minor")
        }
    })
}

/// Sesquilinear pairing `<a, b>` induced by the 1-form Gram matrix
/// `gram1[i][j] = <alpha_j, alpha_i>` (conjugate-linear in `b`); mixed
/// degrees pair to zero.
pub fn inner_product(a: &FormValue, b: &FormValue, gram1: &ExactMatrix) -> Gq {
    let basis = ExteriorBasis::new(a.n());
    let mut acc = Gq::zero();
    for k in 0..=a.n() {
        let va = a.to_vector(&basis, k);
        let vb = b.to_vector(&basis, k);
        if va.iter().all(Zero::is_zero) || vb.iter().all(Zero::is_zero) {
            continue;
        }
        let g = compound(gram1, &basis, k);
        acc += &hermitian_pair(&g, &va, &vb);
    }
    acc
}

/// `b^H g a`.
pub fn hermitian_pair(g: &ExactMatrix, a: &[Gq], b: &[Gq]) -> Gq {
    let ga = g.mul_vec(a);
    b.iter().zip(&ga).fold(Gq::zero(), |acc, (x, y)| &acc + &(&x.conj() * y))
}
