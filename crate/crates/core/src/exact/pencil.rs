//! Best constant `c` with `<A x, x> >= c <B x, x>` on a subspace.

use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use super::matrix::ExactMatrix;
use super::roots::{isolate_real_roots, RealAlgebraicRoot};
use super::scalar::{Gq, Rational};
use crate::error::AlgebraError;

/// Minimum finite pencil eigenvalue, or `+inf` when `B` vanishes on the subspace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PencilValue {
    Finite(RealAlgebraicRoot),
    Infinite,
}

impl PencilValue {
    pub fn is_infinite(&self) -> bool {
        matches!(self, PencilValue::Infinite)
    }

    pub fn finite(&self) -> Option<&RealAlgebraicRoot> {
        match self {
            PencilValue::Finite(r) => Some(r),
            PencilValue::Infinite => None,
        }
    }

    pub fn exact_value(&self) -> Option<&Rational> {
        self.finite().and_then(RealAlgebraicRoot::exact_value)
    }

    /// Strict comparison `value > t`; `+inf` exceeds every rational.
    pub fn exceeds(&self, t: &Rational) -> bool {
        match self {
            PencilValue::Infinite => true,
            PencilValue::Finite(r) => r.cmp_rational(t).is_gt(),
        }
    }

    pub fn at_least(&self, t: &Rational) -> bool {
        match self {
            PencilValue::Infinite => true,
            PencilValue::Finite(r) => !r.cmp_rational(t).is_lt(),
        }
    }
}

impl fmt::Display for PencilValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PencilValue::Finite(r) => write!(f, "{r}"),
            PencilValue::Infinite => write!(f, "+inf"),
        }
    }
}

impl Serialize for PencilValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Checks that a Hermitian matrix is positive semidefinite by symmetric
/// elimination, returning a vector `x` with `x^H h x < 0` on failure.
pub fn psd_witness(h: &ExactMatrix) -> Option<(Vec<Gq>, Rational)> {
    let n = h.rows();
    let mut m = h.clone();
    let mut t = ExactMatrix::identity(n);
    let mut active: Vec<usize> = (0..n).collect();
    let quad = |x: &[Gq]| -> Rational {
        let hx = h.mul_vec(x);
        x.iter().zip(&hx).fold(Gq::zero(), |acc, (a, b)| &acc + &(&a.conj() * b)).re
    };
    while !active.is_empty() {
        if let Some(&i) = active.iter().find(|&&i| m[(i, i)].re.is_negative()) {
            let x = t.column(i);
            let v = quad(&x);
            return Some((x, v));
        }
        let Some(pos) = active.iter().position(|&i| !m[(i, i)].is_zero()) else {
            // zero diagonal: any non-zero off-diagonal entry yields a witness
            for &i in &active {
                for &j in &active {
                    if i != j && !m[(i, j)].is_zero() {
                        let s = -m[(i, j)].conj();
                        let x: Vec<Gq> = t.column(i).iter().zip(t.column(j)).map(|(a, b)| a + &(&s * &b)).collect();
                        let v = quad(&x);
                        return Some((x, v));
                    }
                }
            }
            return None;
        };
        let i = active.remove(pos);
        let inv = m[(i, i)].inv();
        for &j in &active {
            let f = &m[(i, j)] * &inv;
            if f.is_zero() {
                continue;
            }
            // x_j <- x_j - f x_i keeps the transformed form block-diagonal
            for r in 0..n {
                let d = &f * &t[(r, i)];
                t[(r, j)] -= &d;
            }
        }
        let snapshot = m.clone();
        for &j in &active {
            for &k in &active {
                let d = &(&snapshot[(j, i)] * &snapshot[(i, k)]) * &inv;
                m[(j, k)] -= &d;
            }
        }
    }
    None
}

fn is_hermitian(m: &ExactMatrix) -> bool {
    *m == m.conj_transpose()
}

fn check_psd(h: &ExactMatrix, which: &'static str) -> Result<(), AlgebraError> {
    if !is_hermitian(h) {
        return Err(AlgebraError::NotHermitian(which));
    }
    match psd_witness(h) {
        None => Ok(()),
        Some((x, v)) => {
            let xs: Vec<String> = x.iter().map(ToString::to_string).collect();
            Err(AlgebraError::NotPositiveSemidefinite { which, witness: format!("x=({}), <x,x>={v}", xs.join(", ")) })
        }
    }
}

/// Basis of the column space of a Hermitian matrix (its pivot columns); this
/// is the standard-orthogonal complement of its kernel.
fn range_basis(h: &ExactMatrix) -> Vec<Vec<Gq>> {
    h.rref().pivots.iter().map(|&j| h.column(j)).collect()
}

/// `sup { c : A - cB >= 0 on span(subspace) }` for operators `a`, `b`
/// self-adjoint with respect to `<x, y> = y^H gram x`.
pub fn pencil_min_finite_eigenvalue(
    a: &ExactMatrix,
    b: &ExactMatrix,
    gram: &ExactMatrix,
    subspace: &[Vec<Gq>],
    width: &Rational,
) -> Result<PencilValue, AlgebraError> {
    let n = gram.rows();
    if !a.is_square() || !b.is_square() || a.rows() != n || b.rows() != n || subspace.iter().any(|v| v.len() != n) {
        return Err(AlgebraError::DimensionMismatch(format!(
            "pencil on {}-dim space with A {}x{}, B {}x{}",
            n,
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    if subspace.is_empty() {
        return Ok(PencilValue::Infinite);
    }
    let v = ExactMatrix::from_columns(n, subspace);
    if v.rank() < subspace.len() {
        return Err(AlgebraError::DependentBasis);
    }
    let vh = v.conj_transpose();
    let ah = vh.mul(&gram.mul(a)).mul(&v);
    let bh = vh.mul(&gram.mul(b)).mul(&v);
    check_psd(&ah, "A")?;
    check_psd(&bh, "B")?;
    if bh.is_zero() {
        return Ok(PencilValue::Infinite);
    }
    let m = ah.rows();
    let w = ExactMatrix::from_columns(m, &range_basis(&bh));
    let kernel = bh.nullspace();
    let bww = w.conj_transpose().mul(&bh).mul(&w);
    let aww = w.conj_transpose().mul(&ah).mul(&w);
    let schur = if kernel.is_empty() {
        aww
    } else {
        let k = ExactMatrix::from_columns(m, &kernel);
        let akk = k.conj_transpose().mul(&ah).mul(&k);
        let r = range_basis(&akk);
        if r.is_empty() {
            aww
        } else {
            // kernel directions of A restricted to ker B never lower the bound
            let k2 = k.mul(&ExactMatrix::from_columns(kernel.len(), &r));
            let a22 = k2.conj_transpose().mul(&ah).mul(&k2);
            let a12 = w.conj_transpose().mul(&ah).mul(&k2);
            aww.sub(&a12.mul(&a22.inverse()?).mul(&a12.conj_transpose()))
        }
    };
    let reduced = bww.inverse()?.mul(&schur);
    let cp = reduced.char_poly()?.to_real()?;
    let roots = isolate_real_roots(&cp, width)?;
    Ok(PencilValue::Finite(roots.into_iter().next().expect("nonempty reduced pencil has a real root")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::scalar::int;
    use num_traits::One;

    fn e(n: usize, i: usize) -> Vec<Gq> {
        let mut v = vec![Gq::zero(); n];
        v[i] = Gq::one();
        v
    }

    #[test]
    fn pencil_examples() {
        let id = ExactMatrix::identity(2);
        let w = int(1);
        let full = [e(2, 0), e(2, 1)];
        let two = id.scale(&Gq::from_int(2));
        let r = pencil_min_finite_eigenvalue(&two, &id, &id, &full, &w).unwrap();
        assert_eq!(r.exact_value(), Some(&int(2)));
        let r = pencil_min_finite_eigenvalue(&id, &ExactMatrix::zeros(2, 2), &id, &full, &w).unwrap();
        assert!(r.is_infinite());
        let a = ExactMatrix::diagonal(&[Gq::from_int(1), Gq::from_int(3)]);
        let r = pencil_min_finite_eigenvalue(&a, &id, &id, &[e(2, 1)], &w).unwrap();
        assert_eq!(r.exact_value(), Some(&int(3)));
    }

    #[test]
    fn kernel_of_b_is_eliminated() {
        // A = [[2,1],[1,1]], B = diag(1,0): min_y (x,y)A(x,y)^T / x^2 = 2 - 1 = 1
        let a = ExactMatrix::from_int_rows(&[&[2, 1], &[1, 1]]);
        let b = ExactMatrix::from_int_rows(&[&[1, 0], &[0, 0]]);
        let id = ExactMatrix::identity(2);
        let r = pencil_min_finite_eigenvalue(&a, &b, &id, &[e(2, 0), e(2, 1)], &int(1)).unwrap();
        assert_eq!(r.exact_value(), Some(&int(1)));
    }

    #[test]
    fn rejects_indefinite_input() {
        let a = ExactMatrix::diagonal(&[Gq::from_int(1), Gq::from_int(-1)]);
        let id = ExactMatrix::identity(2);
        let err = pencil_min_finite_eigenvalue(&a, &id, &id, &[e(2, 0), e(2, 1)], &int(1)).unwrap_err();
        assert!(matches!(err, AlgebraError::NotPositiveSemidefinite { which: "A", .. }));
        let off = ExactMatrix::from_int_rows(&[&[0, 1], &[1, 0]]);
        assert!(psd_witness(&off).unwrap().1 < Rational::zero());
    }

    #[test]
    fn invariant_under_change_of_subspace_basis() {
        let a = ExactMatrix::from_int_rows(&[&[5, 1, 0], &[1, 4, 1], &[0, 1, 3]]);
        let b = ExactMatrix::from_int_rows(&[&[1, 0, 0], &[0, 2, 0], &[0, 0, 0]]);
        let id = ExactMatrix::identity(3);
        let w = crate::exact::roots::default_width();
        let s1 = [e(3, 0), e(3, 1), e(3, 2)];
        let mixed: Vec<Vec<Gq>> = vec![
            vec![Gq::from_int(1), Gq::from_int(2), Gq::zero()],
            vec![Gq::zero(), Gq::from_int(1), Gq::from_int(-3)],
            vec![Gq::from_int(1), Gq::zero(), Gq::from_int(1)],
        ];
        let r1 = pencil_min_finite_eigenvalue(&a, &b, &id, &s1, &w).unwrap();
        let r2 = pencil_min_finite_eigenvalue(&a, &b, &id, &mixed, &w).unwrap();
        let (x, y) = (r1.finite().unwrap(), r2.finite().unwrap());
        // same algebraic number: brackets overlap and both refine the same root
        assert!(x.lower() < y.upper() && y.lower() < x.upper());
    }
}
