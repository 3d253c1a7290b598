//! Degree-graded linear operators on the exterior algebra.

use std::fmt;

use num_traits::One;

use crate::exact::{ExactMatrix, Gq};
use crate::exterior::{ExteriorBasis, FormValue};

/// Affine degree map `k -> scale * k + offset` with `scale = ±1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DegreeMap {
    pub scale: i8,
    pub offset: i32,
}

impl DegreeMap {
    pub const fn shift(s: i32) -> Self {
        DegreeMap { scale: 1, offset: s }
    }

    /// `k -> n - k`, the degree map of the star operators.
    pub const fn reflect(n: usize) -> Self {
        DegreeMap { scale: -1, offset: n as i32 }
    }

    pub fn apply(self, k: usize, n: usize) -> Option<usize> {
        let t = self.scale as i32 * k as i32 + self.offset;
        (0..=n as i32).contains(&t).then_some(t as usize)
    }

    /// `self ∘ first`.
    pub fn after(self, first: DegreeMap) -> DegreeMap {
        DegreeMap { scale: self.scale * first.scale, offset: self.scale as i32 * first.offset + self.offset }
    }

    pub fn inverse(self) -> DegreeMap {
        DegreeMap { scale: self.scale, offset: -(self.scale as i32) * self.offset }
    }

    pub fn shift_amount(self) -> Option<i32> {
        (self.scale == 1).then_some(self.offset)
    }
}

/// Linear operator on `Λ^•` given by one matrix per source degree in the
/// canonical monomial bases. A `None` block means the target degree is out of
/// range, so the operator vanishes on that degree.
#[derive(Clone, PartialEq, Eq)]
pub struct GradedOperator {
    pub label: String,
    n: usize,
    map: DegreeMap,
    bidegree: Option<(i32, i32)>,
    blocks: Vec<Option<ExactMatrix>>,
}

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

impl GradedOperator {
    /// Builds from a block generator; `f(k, target)` returns the block for
    /// source degree `k` mapping into degree `target`.
    pub fn from_fn(
        label: impl Into<String>,
        n: usize,
        map: DegreeMap,
        mut f: impl FnMut(usize, usize) -> ExactMatrix,
    ) -> Self {
        let blocks = (0..=n)
            .map(|k| {
                map.apply(k, n).map(|t| {
                    let b = f(k, t);
                    debug_assert_eq!((b.rows(), b.cols()), (binom(n, t), binom(n, k)), "block shape in degree {k}");
                    b
                })
            })
            .collect();
        GradedOperator { label: label.into(), n, map, bidegree: None, blocks }
    }

    pub fn zero(n: usize, map: DegreeMap) -> Self {
        Self::from_fn("0", n, map, |k, t| ExactMatrix::zeros(binom(n, t), binom(n, k)))
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn("1", n, DegreeMap::shift(0), |k, _| ExactMatrix::identity(binom(n, k)))
    }

    /// Scalar `c_k` on each degree `k`.
    pub fn degree_scalar(label: &str, n: usize, mut c: impl FnMut(usize) -> Gq) -> Self {
        Self::from_fn(label, n, DegreeMap::shift(0), |k, _| ExactMatrix::identity(binom(n, k)).scale(&c(k)))
    }

    pub fn with_bidegree(mut self, b: (i32, i32)) -> Self {
        self.bidegree = Some(b);
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn map(&self) -> DegreeMap {
        self.map
    }

    pub fn bidegree(&self) -> Option<(i32, i32)> {
        self.bidegree
    }

    /// Degree shift for shifting operators.
    pub fn shift(&self) -> Option<i32> {
        self.map.shift_amount()
    }

    pub fn target(&self, k: usize) -> Option<usize> {
        self.map.apply(k, self.n)
    }

    pub fn block(&self, k: usize) -> Option<&ExactMatrix> {
        self.blocks.get(k).and_then(Option::as_ref)
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().flatten().all(ExactMatrix::is_zero)
    }

    pub fn is_zero_on(&self, k: usize) -> bool {
        self.block(k).is_none_or(ExactMatrix::is_zero)
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &GradedOperator) -> GradedOperator {
        assert_eq!(self.n, first.n, "compose: dimension mismatch");
        let n = self.n;
        let map = self.map.after(first.map);
        let mut out = Self::from_fn(format!("{}{}", self.label, first.label), n, map, |k, t| {
            match (first.block(k), first.target(k).and_then(|m| self.block(m))) {
                (Some(b1), Some(b2)) => b2.mul(b1),
                _ => ExactMatrix::zeros(binom(n, t), binom(n, k)),
            }
        });
        out.bidegree = match (self.bidegree, first.bidegree) {
            (Some((a, b)), Some((c, d))) => Some((a + c, b + d)),
            _ => None,
        };
        out
    }

    fn zip(&self, o: &GradedOperator, label: String, f: impl Fn(&ExactMatrix, &ExactMatrix) -> ExactMatrix) -> Self {
        assert_eq!(self.n, o.n, "dimension mismatch");
        assert_eq!(self.map, o.map, "cannot combine {} and {} with different degree maps", self.label, o.label);
        let blocks = self
            .blocks
            .iter()
            .zip(&o.blocks)
            .map(|(a, b)| match (a, b) {
                (Some(a), Some(b)) => Some(f(a, b)),
                _ => None,
            })
            .collect();
        let bidegree = if self.bidegree == o.bidegree { self.bidegree } else { None };
        GradedOperator { label, n: self.n, map: self.map, bidegree, blocks }
    }

    pub fn add(&self, o: &GradedOperator) -> GradedOperator {
        self.zip(o, format!("({}+{})", self.label, o.label), ExactMatrix::add)
    }

    pub fn sub(&self, o: &GradedOperator) -> GradedOperator {
        self.zip(o, format!("({}-{})", self.label, o.label), ExactMatrix::sub)
    }

    pub fn scale(&self, s: &Gq) -> GradedOperator {
        GradedOperator {
            label: format!("({s})*{}", self.label),
            n: self.n,
            map: self.map,
            bidegree: self.bidegree,
            blocks: self.blocks.iter().map(|b| b.as_ref().map(|m| m.scale(s))).collect(),
        }
    }

    pub fn neg(&self) -> GradedOperator {
        self.scale(&Gq::from_int(-1)).with_label(format!("-{}", self.label))
    }

    /// Graded commutator `[A, B] = AB - (-1)^{|A||B|} BA` of shifting operators.
    pub fn commutator(&self, b: &GradedOperator) -> GradedOperator {
        let (da, db) = match (self.shift(), b.shift()) {
            (Some(x), Some(y)) => (x, y),
            _ => panic!("commutator of non-shifting operators {} and {}", self.label, b.label),
        };
        let ab = self.compose(b);
        let ba = b.compose(self);
        let out = if (da * db) % 2 == 0 { ab.sub(&ba) } else { ab.add(&ba) };
        out.with_label(format!("[{},{}]", self.label, b.label))
    }

    pub fn pow(&self, l: usize) -> GradedOperator {
        let mut out = GradedOperator::identity(self.n);
        for _ in 0..l {
            out = self.compose(&out);
        }
        out.with_label(format!("{}^{l}", self.label))
    }

    /// Adjoint with respect to per-degree Gram matrices `<x, y>_k = y^H G_k x`.
    pub fn adjoint(&self, grams: &[ExactMatrix], gram_invs: &[ExactMatrix]) -> GradedOperator {
        let inv = self.map.inverse();
        let mut out = Self::from_fn(format!("{}*", self.label), self.n, inv, |t, k| {
            let blk = self.block(k).expect("adjoint source block exists");
            gram_invs[k].mul(&blk.conj_transpose()).mul(&grams[t])
        });
        out.bidegree = self.bidegree.map(|(a, b)| (-a, -b));
        out
    }

    pub fn apply(&self, basis: &ExteriorBasis, f: &FormValue) -> FormValue {
        let mut out = FormValue::zero(self.n);
        for k in f.degrees() {
            let (Some(blk), Some(t)) = (self.block(k), self.target(k)) else {
                continue;
            };
            let v = blk.mul_vec(&f.to_vector(basis, k));
            out = out.add(&FormValue::from_vector(basis, t, &v));
        }
        out
    }

    /// Apply the degree-`k` block to a coordinate vector.
    pub fn apply_vec(&self, k: usize, v: &[Gq]) -> Option<Vec<Gq>> {
        self.block(k).map(|b| b.mul_vec(v))
    }

    /// First differing entry `(degree, row, col, self - other)`.
    pub fn first_difference(&self, o: &GradedOperator) -> Option<(usize, usize, usize, Gq)> {
        assert_eq!(self.n, o.n);
        for k in 0..=self.n {
            let zero_a;
            let zero_b;
            let (a, b) = match (self.block(k), o.block(k)) {
                (None, None) => continue,
                (Some(a), Some(b)) => (a, b),
                (Some(a), None) => {
                    zero_b = ExactMatrix::zeros(a.rows(), a.cols());
                    (a, &zero_b)
                }
                (None, Some(b)) => {
                    zero_a = ExactMatrix::zeros(b.rows(), b.cols());
                    (&zero_a, b)
                }
            };
            if a.same_shape(b) && a == b {
                continue;
            }
            if !a.same_shape(b) {
                return Some((k, 0, 0, Gq::one()));
            }
            for (i, j, x) in a.entries() {
                if *x != b[(i, j)] {
                    return Some((k, i, j, x - &b[(i, j)]));
                }
            }
        }
        None
    }

    /// Structural equality of the linear maps (ignores labels).
    pub fn same_map(&self, o: &GradedOperator) -> bool {
        self.first_difference(o).is_none()
    }

    /// Linear operator given by wedge on the left with a homogeneous form.
    pub fn left_multiplication(label: &str, basis: &ExteriorBasis, form: &FormValue) -> GradedOperator {
        let n = basis.n();
        let deg = form.homogeneous_degree().unwrap_or(0) as i32;
        GradedOperator::from_fn(label, n, DegreeMap::shift(deg), |k, t| {
            let cols: Vec<Vec<Gq>> = basis
                .monomials(k)
                .iter()
                .map(|m| form.wedge(&FormValue::monomial(n, *m, Gq::one())).to_vector(basis, t))
                .collect();
            ExactMatrix::from_columns(binom(n, t), &cols)
        })
    }

    /// Extends `alpha_i -> images[i]` (each homogeneous of degree `1 + s`) to a
    /// graded derivation of degree `s`:
    /// `D(a ^ b) = Da ^ b + (-1)^{s|a|} a ^ Db`.
    pub fn derivation(label: &str, basis: &ExteriorBasis, images: &[FormValue], s: i32) -> GradedOperator {
        let n = basis.n();
        assert_eq!(images.len(), n);
        GradedOperator::from_fn(label, n, DegreeMap::shift(s), |k, t| {
            let cols: Vec<Vec<Gq>> = basis
                .monomials(k)
                .iter()
                .map(|m| {
                    let idx = m.indices();
                    let mut acc = FormValue::zero(n);
                    for r in 0..idx.len() {
                        let before = FormValue::alpha(n, &idx[..r]);
                        let after = FormValue::alpha(n, &idx[r + 1..]);
                        let term = before.wedge(&images[idx[r] - 1]).wedge(&after);
                        let sign = if (s.rem_euclid(2) as usize * r) % 2 == 0 { 1 } else { -1 };
                        acc = acc.add(&term.scale(&Gq::from_int(sign)));
                    }
                    acc.to_vector(basis, t)
                })
                .collect();
            ExactMatrix::from_columns(binom(n, t), &cols)
        })
    }
}

impl fmt::Debug for GradedOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "GradedOperator {} ({:?}, bidegree {:?})", self.label, self.map, self.bidegree)?;
        for (k, b) in self.blocks.iter().enumerate() {
            if let Some(b) = b {
                writeln!(f, "degree {k}: {b:?}")?;
            }
        }
        Ok(())
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> usize {
    binom(n, k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_maps_compose() {
        let s = DegreeMap::shift(1);
        let r = DegreeMap::reflect(4);
        assert_eq!(r.after(s).apply(1, 4), Some(2));
        assert_eq!(s.after(r).apply(1, 4), Some(4));
        assert_eq!(r.inverse(), r);
        assert_eq!(DegreeMap::shift(2).inverse(), DegreeMap::shift(-2));
        assert_eq!(s.apply(4, 4), None);
    }

    #[test]
    fn wedge_operator_and_derivation() {
        let b = ExteriorBasis::new(3);
        let a1 = FormValue::alpha(3, &[1]);
        let l = GradedOperator::left_multiplication("a1", &b, &a1);
        assert!(l.compose(&l).is_zero());
        // interior-free check: the degree-0 derivation sending every alpha_i to
        // itself is the degree-counting operator
        let imgs: Vec<FormValue> = (1..=3).map(|i| FormValue::alpha(3, &[i])).collect();
        let count = GradedOperator::derivation("N", &b, &imgs, 0);
        let expected = GradedOperator::degree_scalar("k", 3, |k| Gq::from_int(k as i64));
        assert!(count.same_map(&expected));
    }

    #[test]
    fn commutator_signs() {
        let b = ExteriorBasis::new(2);
        let a1 = GradedOperator::left_multiplication("a1", &b, &FormValue::alpha(2, &[1]));
        let a2 = GradedOperator::left_multiplication("a2", &b, &FormValue::alpha(2, &[2]));
        // odd operators anticommute: graded commutator is the anticommutator = 0
        assert!(a1.commutator(&a2).is_zero());
        assert!(!a1.compose(&a2).is_zero());
    }
}
