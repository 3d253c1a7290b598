//! Almost Kähler structures on Lie algebras and their operator calculus.
//!
//! Conventions: `J ξ_i = Σ_j J[j][i] ξ_j`; `Ω[i][j] = ω(ξ_i, ξ_j)`; the metric
//! is `g(X, Y) = ω(JX, Y)`, i.e. the matrix `Jᵀ Ω`; the 1-form Gram matrix is
//! `g⁻¹`. J acts on 1-forms by `(Jα)(X) = -α(JX)`, whose `+i` eigenspace is
//! `Ω^{1,0}`.

mod nijenhuis;
mod ops;

use std::sync::OnceLock;

use num_traits::{One, Signed, Zero};

use crate::calc::Laplacians;
use crate::error::StructureError;
use crate::exact::{ExactMatrix, Gq, Rational};
use crate::exterior::{compound, ExteriorBasis, FormValue, Monomial, MAX_DIM};
use crate::lie::LieAlgebraData;
use crate::operator::GradedOperator;

pub use nijenhuis::{convention_factor, ConventionFactor, NijenhuisTensor};
pub use ops::StructureOps;

/// A validated almost Kähler Lie algebra `(g, ω, J)`.
pub struct AKManifold {
    name: String,
    algebra: LieAlgebraData,
    j: ExactMatrix,
    omega: FormValue,
    omega_matrix: ExactMatrix,
    metric: ExactMatrix,
    basis: ExteriorBasis,
    gram1: ExactMatrix,
    grams: Vec<ExactMatrix>,
    gram_invs: Vec<ExactMatrix>,
    volume: FormValue,
    d: GradedOperator,
    ops: OnceLock<StructureOps>,
    laplacians: OnceLock<Laplacians>,
}

impl Clone for AKManifold {
    fn clone(&self) -> Self {
        AKManifold {
            name: self.name.clone(),
            algebra: self.algebra.clone(),
            j: self.j.clone(),
            omega: self.omega.clone(),
            omega_matrix: self.omega_matrix.clone(),
            metric: self.metric.clone(),
            basis: self.basis.clone(),
            gram1: self.gram1.clone(),
            grams: self.grams.clone(),
            gram_invs: self.gram_invs.clone(),
            volume: self.volume.clone(),
            d: self.d.clone(),
            ops: OnceLock::new(),
            laplacians: OnceLock::new(),
        }
    }
}

impl std::fmt::Debug for AKManifold {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("AKManifold")
            .field("name", &self.name)
            .field("dimension", &self.dim())
            .field("omega", &self.omega)
            .finish_non_exhaustive()
    }
}

/// `ω = Σ c (α^i ∧ α^j)` from `(i, j, c)` terms; `i != j` in any order.
pub fn omega_from_terms(n: usize, terms: &[(usize, usize, Rational)]) -> Result<FormValue, StructureError> {
    let mut omega = FormValue::zero(n);
    for (i, j, c) in terms {
        let (i, j) = (*i, *j);
        if i == j || !(1..=n).contains(&i) || !(1..=n).contains(&j) {
            return Err(StructureError::BadOmegaTerm { i, j, n });
        }
        omega = omega.add(&FormValue::alpha(n, &[i, j]).scale(&Gq::real(c.clone())));
    }
    Ok(omega)
}

fn factorial(n: usize) -> Rational {
    (1..=n).fold(Rational::one(), |acc, i| acc * Rational::from_integer((i as i64).into()))
}

/// Symmetric positive definiteness by leading principal minors.
fn is_spd(m: &ExactMatrix) -> bool {
    if *m != m.transpose() || !m.is_real() {
        return false;
    }
    (1..=m.rows()).all(|r| {
        let idx: Vec<usize> = (0..r).collect();
        m.select(&idx, &idx).det().is_ok_and(|d| d.re.is_positive())
    })
}

impl AKManifold {
    /// Validates the axioms in order: even dimension, shape of J, `J² = -1`,
    /// Jacobi, `dω = 0`, `ωⁿ ≠ 0`, J-invariance of ω, positivity of `g`.
    pub fn new(
        name: impl Into<String>,
        algebra: LieAlgebraData,
        j: ExactMatrix,
        omega: FormValue,
    ) -> Result<AKManifold, StructureError> {
        let dim = algebra.dim();
        if dim == 0 || dim % 2 == 1 || dim > MAX_DIM {
            return Err(StructureError::OddDimension(dim));
        }
        if j.rows() != dim || j.cols() != dim {
            return Err(StructureError::BadJShape { rows: j.rows(), cols: j.cols(), n: dim });
        }
        if j.mul(&j) != ExactMatrix::identity(dim).neg() {
            return Err(StructureError::JSquaredNotMinusOne);
        }
        let basis = ExteriorBasis::new(dim);
        let d = algebra.ce_differential(&basis)?;
        if omega.n() != dim || omega.terms().any(|(m, _)| m.degree() != 2) {
            return Err(StructureError::BadOmegaTerm { i: 0, j: 0, n: dim });
        }
        if !d.apply(&basis, &omega).is_zero() {
            return Err(StructureError::OmegaNotClosed);
        }
        let n = dim / 2;
        let mut top = FormValue::constant(dim, Gq::one());
        for _ in 0..n {
            top = top.wedge(&omega);
        }
        if top.is_zero() {
            return Err(StructureError::OmegaDegenerate);
        }
        let omega_matrix = ExactMatrix::from_fn(dim, dim, |a, b| {
            if a == b {
                return Gq::zero();
            }
            let (lo, hi, s) = if a < b { (a, b, 1) } else { (b, a, -1) };
            let c = omega.coeff(Monomial::from_indices(&[lo + 1, hi + 1]).expect("valid"));
            if s > 0 {
                c
            } else {
                -c
            }
        });
        if j.transpose().mul(&omega_matrix).mul(&j) != omega_matrix {
            return Err(StructureError::OmegaNotJInvariant);
        }
        let metric = j.transpose().mul(&omega_matrix);
        if !is_spd(&metric) {
            return Err(StructureError::MetricNotPositive);
        }
        let gram1 = metric.inverse().expect("positive definite metric is invertible");
        let grams: Vec<ExactMatrix> = (0..=dim).map(|k| compound(&gram1, &basis, k)).collect();
        let gram_invs = grams.iter().map(|g| g.inverse().expect("Gram matrices are invertible")).collect();
        let volume = top.scale(&Gq::real(factorial(n).recip()));
        Ok(AKManifold {
            name: name.into(),
            algebra,
            j,
            omega,
            omega_matrix,
            metric,
            basis,
            gram1,
            grams,
            gram_invs,
            volume,
            d,
            ops: OnceLock::new(),
            laplacians: OnceLock::new(),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Real dimension `2n`.
    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    /// Complex dimension `n`.
    pub fn complex_dim(&self) -> usize {
        self.dim() / 2
    }

    pub fn algebra(&self) -> &LieAlgebraData {
        &self.algebra
    }

    pub fn j(&self) -> &ExactMatrix {
        &self.j
    }

    pub fn omega(&self) -> &FormValue {
        &self.omega
    }

    pub fn omega_matrix(&self) -> &ExactMatrix {
        &self.omega_matrix
    }

    pub fn metric(&self) -> &ExactMatrix {
        &self.metric
    }

    pub fn basis(&self) -> &ExteriorBasis {
        &self.basis
    }

    pub fn gram1(&self) -> &ExactMatrix {
        &self.gram1
    }

    pub fn gram(&self, k: usize) -> &ExactMatrix {
        &self.grams[k]
    }

    pub fn gram_inv(&self, k: usize) -> &ExactMatrix {
        &self.gram_invs[k]
    }

    pub fn volume(&self) -> &FormValue {
        &self.volume
    }

    pub fn d(&self) -> &GradedOperator {
        &self.d
    }

    /// All structure operators, built on first use.
    pub fn ops(&self) -> &StructureOps {
        self.ops.get_or_init(|| StructureOps::build(self))
    }

    /// The Laplacians of the split differentials, built on first use.
    pub fn laplacians(&self) -> &Laplacians {
        self.laplacians.get_or_init(|| Laplacians::build(self))
    }

    /// Gram adjoint.
    pub fn adjoint(&self, op: &GradedOperator) -> GradedOperator {
        op.adjoint(&self.grams, &self.gram_invs)
    }

    /// `Δ_δ = δδ* + δ*δ`.
    pub fn laplacian(&self, op: &GradedOperator) -> GradedOperator {
        let adj = self.adjoint(op);
        op.compose(&adj).add(&adj.compose(op)).with_label(format!("Δ[{}]", op.label))
    }

    /// `<a, b> = b^H G a` on degree-`k` coordinate vectors.
    pub fn pair(&self, k: usize, a: &[Gq], b: &[Gq]) -> Gq {
        crate::exterior::hermitian_pair(&self.grams[k], a, b)
    }

    pub fn norm_sq(&self, k: usize, a: &[Gq]) -> Rational {
        self.pair(k, a, a).re
    }

    pub fn inner(&self, a: &FormValue, b: &FormValue) -> Gq {
        crate::exterior::inner_product(a, b, &self.gram1)
    }

    pub fn vector(&self, f: &FormValue, k: usize) -> Vec<Gq> {
        f.to_vector(&self.basis, k)
    }

    pub fn form(&self, k: usize, v: &[Gq]) -> FormValue {
        FormValue::from_vector(&self.basis, k, v)
    }

    pub fn apply(&self, op: &GradedOperator, f: &FormValue) -> FormValue {
        op.apply(&self.basis, f)
    }

    /// Valid `p` for bidegrees `(p, k - p)`.
    pub fn bidegree_range(&self, k: usize) -> std::ops::RangeInclusive<usize> {
        let n = self.complex_dim();
        k.saturating_sub(n)..=k.min(n)
    }

    pub fn nijenhuis(&self) -> NijenhuisTensor {
        NijenhuisTensor::compute(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    pub(crate) fn kt() -> AKManifold {
        let alg = LieAlgebraData::new(4, vec![(1, 4, vec![(2, int(1))])]).unwrap();
        let j = ExactMatrix::from_int_rows(&[&[0, 0, -1, 0], &[0, 0, 0, -1], &[1, 0, 0, 0], &[0, 1, 0, 0]]);
        let omega = omega_from_terms(4, &[(3, 1, int(1)), (4, 2, int(1))]).unwrap();
        AKManifold::new("kt", alg, j, omega).unwrap()
    }

    #[test]
    fn example_validates_with_identity_metric() {
        let m = kt();
        assert_eq!(*m.metric(), ExactMatrix::identity(4));
        assert_eq!(*m.volume(), FormValue::alpha(4, &[1, 2, 3, 4]).scale(&Gq::from_int(-1)));
    }

    #[test]
    fn axiom_violations_are_distinct() {
        let alg = || LieAlgebraData::new(4, vec![(1, 4, vec![(2, int(1))])]).unwrap();
        let j = ExactMatrix::from_int_rows(&[&[0, 0, -1, 0], &[0, 0, 0, -1], &[1, 0, 0, 0], &[0, 1, 0, 0]]);
        let degenerate = omega_from_terms(4, &[(1, 2, int(1))]).unwrap();
        assert_eq!(
            AKManifold::new("x", alg(), j.clone(), degenerate).unwrap_err(),
            StructureError::OmegaDegenerate
        );
        // d(α2∧α3) = α1∧α3∧α4
        let not_closed = omega_from_terms(4, &[(1, 3, int(1)), (2, 3, int(1)), (2, 4, int(1))]).unwrap();
        let e = AKManifold::new("x", alg(), j.clone(), not_closed).unwrap_err();
        assert_eq!(e, StructureError::OmegaNotClosed);
        let good = omega_from_terms(4, &[(3, 1, int(1)), (4, 2, int(1))]).unwrap();
        let flipped = omega_from_terms(4, &[(1, 3, int(1)), (2, 4, int(1))]).unwrap();
        assert_eq!(AKManifold::new("x", alg(), j.clone(), flipped).unwrap_err(), StructureError::MetricNotPositive);
        let bad_j = ExactMatrix::identity(4);
        assert_eq!(
            AKManifold::new("x", alg(), bad_j, good.clone()).unwrap_err(),
            StructureError::JSquaredNotMinusOne
        );
        // J² = -1 but ω not J-invariant
        let s = ExactMatrix::from_int_rows(&[&[1, 1, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]);
        let j2 = s.mul(&j).mul(&s.inverse().unwrap());
        assert_eq!(AKManifold::new("x", alg(), j2, good).unwrap_err(), StructureError::OmegaNotJInvariant);
    }

    #[test]
    fn operator_conventions_on_example() {
        let m = kt();
        let o = m.ops();
        let a = |i: &[usize]| FormValue::alpha(4, i);
        let q = Gq::from_ratio(1, 4);
        assert!(o.mu.add(&o.del).add(&o.delbar).add(&o.mubar).same_map(&o.d));
        assert_eq!(m.apply(&o.projection(1, 1).unwrap(), m.omega()), *m.omega());
        let mm = o.mu.add(&o.mubar);
        assert_eq!(m.apply(&mm, &a(&[2])), a(&[2, 3]).sub(&a(&[1, 4])).scale(&q));
        assert_eq!(m.apply(&mm, &a(&[4])), a(&[3, 4]).sub(&a(&[1, 2])).scale(&q));
        assert!(o.star_inv.compose(&o.l).compose(&o.star).same_map(&o.lambda));
        assert!(o.lambda.commutator(&o.l).same_map(&o.h));
        let via_j = o.star.compose(&o.cal_j_inv).compose(&o.d).compose(&o.cal_j).compose(&o.star).neg();
        assert!(via_j.same_map(&o.d_lambda));
        let eps = StructureOps::degree_sign(4, |k| k % 2 == 1);
        assert!(o.star_s.compose(&o.d).compose(&o.star_s).compose(&eps).same_map(&o.d_lambda));
        assert!(o.star_s.compose(&o.star_s).same_map(&GradedOperator::identity(4)));
        assert!(o.cal_j_inv.compose(&o.d).compose(&o.cal_j).same_map(&o.d_lambda_star));
        assert!(o.l.commutator(&o.d_star).same_map(&o.d_lambda_star));
        let conj = |x: &GradedOperator| o.star.compose(x).compose(&o.star).neg();
        assert!(conj(&o.del).same_map(&o.delbar_star));
        assert!(conj(&o.delbar).same_map(&o.del_star));
        assert!(conj(&o.mubar).same_map(&o.mu_star));
        assert!(conj(&o.d).same_map(&o.d_star));
        let nt = m.nijenhuis();
        assert_eq!(nt.value(1, 2), vec![int(0), int(0), int(0), int(1)]);
        assert!(nt.anticommutes_with_j(&m));
        assert_eq!(convention_factor(&mm, &nt.dual_derivation(&m)), ConventionFactor::Constant(Gq::from_ratio(-1, 4)));
        // primitive 1-forms: ∗s B = -L B
        for i in 1..=4 {
            assert_eq!(m.apply(&o.star_s, &a(&[i])), m.apply(&o.l, &a(&[i])).scale(&Gq::from_int(-1)));
        }
        let one = FormValue::constant(4, Gq::one());
        assert_eq!(m.apply(&o.star_s, &one), *m.volume());
        assert_eq!(m.apply(&o.star, &one), *m.volume());
        assert_eq!(m.apply(&o.star, &a(&[1, 2])), a(&[3, 4]).scale(&Gq::from_int(-1)));
    }
}
