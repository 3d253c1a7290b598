//! Harmonic spaces, Betti and Hodge numbers, and the audits built on them.

mod audit;
mod constants;
mod decompose;
mod report;

use num_traits::Zero;
use serde::Serialize;

use crate::calc::{joint_kernel, LaplacianSelection};
use crate::error::AnalysisError;
use crate::exact::matrix::{same_span, span_rank};
use crate::exact::{ExactMatrix, Gq};
use crate::exterior::FormValue;
use crate::structure::AKManifold;

pub use audit::{
    b2_plus, hlc_audit, hodge_decomposition_check, pure_full_check, theorem_audit, DecompositionVerdict, HlcAudit,
    HlcDegree, PureFullVerdict, TheoremCheck,
};
pub use constants::{
    inequality_audit, lemma_l1_audit, membership_constant, mu_norms, spectral_gap, Family, InequalityAudit,
    InequalityKind, LemmaAudit, LemmaEntry, MembershipResult, MuNorms, SpectralResult,
};
pub use decompose::{decompose_form, BidegreePart, FormDecomposition, LefschetzPart};
pub use report::{HodgeReport, ReportOptions};

/// Which harmonic space to compute.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HarmonicSelection {
    /// Kernel of the Laplacian of a split differential.
    Laplacian(LaplacianSelection),
    /// `ker d ∩ ker dΛ ∩ ker (ddΛ)*`
    DPlusDLambda,
    /// `ker ddΛ ∩ ker d* ∩ ker dΛ*`
    DDLambda,
    /// `ker Λ`
    Primitive,
}

impl HarmonicSelection {
    pub fn parse(s: &str) -> Result<Self, AnalysisError> {
        match s {
            "d+dLambda" => Ok(HarmonicSelection::DPlusDLambda),
            "ddLambda" => Ok(HarmonicSelection::DDLambda),
            "primitive" => Ok(HarmonicSelection::Primitive),
            other => LaplacianSelection::parse(other).map(HarmonicSelection::Laplacian),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            HarmonicSelection::Laplacian(l) => l.name(),
            HarmonicSelection::DPlusDLambda => "d+dLambda",
            HarmonicSelection::DDLambda => "ddLambda",
            HarmonicSelection::Primitive => "primitive",
        }
    }
}

/// A harmonic space with its canonical basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HarmonicSpace {
    pub operator: String,
    pub degree: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bidegree: Option<(usize, usize)>,
    pub dimension: usize,
    pub basis: Vec<FormValue>,
    #[serde(skip)]
    pub vectors: Vec<Vec<Gq>>,
}

impl HarmonicSpace {
    fn new(m: &AKManifold, operator: &str, degree: usize, bidegree: Option<(usize, usize)>, vectors: Vec<Vec<Gq>>) -> Self {
        HarmonicSpace {
            operator: operator.to_string(),
            degree,
            bidegree,
            dimension: vectors.len(),
            basis: vectors.iter().map(|v| m.form(degree, v)).collect(),
            vectors,
        }
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn same_as(&self, m: &AKManifold, other: &[Vec<Gq>]) -> bool {
        same_span(m.basis().dim(self.degree), &self.vectors, other)
    }
}

fn check_degree(m: &AKManifold, k: usize) -> Result<(), AnalysisError> {
    if k > m.dim() {
        return Err(AnalysisError::DegreeOutOfRange { k, max: m.dim() });
    }
    Ok(())
}

fn selection_kernel(m: &AKManifold, sel: HarmonicSelection, k: usize) -> Vec<Vec<Gq>> {
    let o = m.ops();
    match sel {
        HarmonicSelection::Laplacian(l) => joint_kernel(m, k, &[l.laplacian(m)]),
        HarmonicSelection::DPlusDLambda => {
            let ddl_star = m.adjoint(&o.d.compose(&o.d_lambda));
            joint_kernel(m, k, &[&o.d, &o.d_lambda, &ddl_star])
        }
        HarmonicSelection::DDLambda => {
            let ddl = o.d.compose(&o.d_lambda);
            joint_kernel(m, k, &[&ddl, &o.d_star, &o.d_lambda_star])
        }
        HarmonicSelection::Primitive => joint_kernel(m, k, &[&o.lambda]),
    }
}

/// Harmonic space of the selection in degree `k`.
pub fn harmonic_space(m: &AKManifold, sel: HarmonicSelection, k: usize) -> Result<HarmonicSpace, AnalysisError> {
    check_degree(m, k)?;
    Ok(HarmonicSpace::new(m, sel.name(), k, None, selection_kernel(m, sel, k)))
}

/// `ker(Π^{p,q} - 1)` intersected with the selection's kernel.
pub fn bidegree_harmonic_space(m: &AKManifold, sel: HarmonicSelection, p: usize, q: usize) -> Result<HarmonicSpace, AnalysisError> {
    let n = m.complex_dim();
    if p > n || q > n {
        return Err(AnalysisError::BidegreeOutOfRange { p, q, n });
    }
    let k = p + q;
    let within = selection_kernel(m, sel, k);
    Ok(HarmonicSpace::new(m, sel.name(), k, Some((p, q)), restrict_to_bidegree(m, k, p, &within)))
}

/// Vectors of `span(vs)` lying in bidegree `(p, k - p)`.
pub(crate) fn restrict_to_bidegree(m: &AKManifold, k: usize, p: usize, vs: &[Vec<Gq>]) -> Vec<Vec<Gq>> {
    if vs.is_empty() {
        return Vec::new();
    }
    let size = m.basis().dim(k);
    let proj = m.ops().projection_block(k, p).expect("valid bidegree");
    let v = ExactMatrix::from_columns(size, vs);
    // coefficients c with (Π - 1) V c = 0
    let defect = proj.sub(&ExactMatrix::identity(size)).mul(&v);
    let coeffs = defect.nullspace();
    let out: Vec<Vec<Gq>> = coeffs.iter().map(|c| v.mul_vec(c)).collect();
    canonical(size, &out)
}

/// Canonical RREF basis of a span.
pub(crate) fn canonical(size: usize, vs: &[Vec<Gq>]) -> Vec<Vec<Gq>> {
    if vs.is_empty() {
        return Vec::new();
    }
    let rows = ExactMatrix::from_rows(vs.to_vec());
    let r = rows.rref();
    debug_assert!(vs.iter().all(|v| v.len() == size));
    (0..r.pivots.len()).map(|i| r.matrix.row(i).to_vec()).collect()
}

/// Invariant Betti numbers `bᵏ = dim ker d_k - rank d_{k-1}`.
pub fn betti_numbers(m: &AKManifold) -> Vec<usize> {
    let d = m.d();
    (0..=m.dim())
        .map(|k| {
            let kernel = joint_kernel(m, k, &[d]).len();
            let exact = if k == 0 { 0 } else { d.block(k - 1).map_or(0, ExactMatrix::rank) };
            kernel - exact
        })
        .collect()
}

/// `h^{p,q} = dim 𝓗^{p,q}_d`, indexed `[p][q]`, together with the two
/// alternative counts `dim(𝓗^{p,q}_∂̄ ∩ 𝓗^{p,q}_μ)` and
/// `dim(𝓗^{p,q}_∂ ∩ 𝓗^{p,q}_μ̄)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HodgeNumbers {
    pub h: Vec<Vec<usize>>,
    pub via_dbar_mu: Vec<Vec<usize>>,
    pub via_del_mubar: Vec<Vec<usize>>,
}

impl HodgeNumbers {
    pub fn get(&self, p: usize, q: usize) -> usize {
        self.h[p][q]
    }

    pub fn cross_checks_agree(&self) -> bool {
        self.h == self.via_dbar_mu && self.h == self.via_del_mubar
    }

    /// `h^{p,q} = h^{q,p} = h^{n-p,n-q}`
    pub fn diamond_symmetric(&self) -> bool {
        let n = self.h.len() - 1;
        (0..=n).all(|p| (0..=n).all(|q| self.h[p][q] == self.h[q][p] && self.h[p][q] == self.h[n - p][n - q]))
    }

    /// `Σ_{p+q=k} h^{p,q}`
    pub fn degree_sum(&self, k: usize) -> usize {
        let n = self.h.len() - 1;
        (0..=n).filter(|&p| k >= p && k - p <= n).map(|p| self.h[p][k - p]).sum()
    }
}

/// Spaces `𝓗^{p,q}_δ` for all bidegrees, from one kernel per degree.
pub(crate) fn bidegree_spaces(m: &AKManifold, sel: HarmonicSelection) -> Vec<Vec<Vec<Vec<Gq>>>> {
    let n = m.complex_dim();
    let mut out = vec![vec![Vec::new(); n + 1]; n + 1];
    for k in 0..=m.dim() {
        let kernel = selection_kernel(m, sel, k);
        for p in m.bidegree_range(k) {
            out[p][k - p] = restrict_to_bidegree(m, k, p, &kernel);
        }
    }
    out
}

/// `[𝓗^{p,k-p}_δ for p]` in one degree (empty outside the bidegree range).
pub(crate) fn bidegree_spaces_in_degree(m: &AKManifold, sel: HarmonicSelection, k: usize) -> Vec<Vec<Vec<Gq>>> {
    let kernel = selection_kernel(m, sel, k);
    (0..=m.complex_dim())
        .map(|p| if m.bidegree_range(k).contains(&p) { restrict_to_bidegree(m, k, p, &kernel) } else { Vec::new() })
        .collect()
}

pub fn hodge_numbers(m: &AKManifold) -> HodgeNumbers {
    let n = m.complex_dim();
    let sel = |l| HarmonicSelection::Laplacian(l);
    let hd = bidegree_spaces(m, sel(LaplacianSelection::D));
    let count_pair = |a: LaplacianSelection, b: LaplacianSelection| {
        let sa = bidegree_spaces(m, sel(a));
        let sb = bidegree_spaces(m, sel(b));
        (0..=n)
            .map(|p| {
                (0..=n)
                    .map(|q| {
                        let size = m.basis().dim(p + q);
                        let (x, y) = (&sa[p][q], &sb[p][q]);
                        x.len() + y.len() - span_rank(size, &[x.clone(), y.clone()].concat())
                    })
                    .collect()
            })
            .collect()
    };
    HodgeNumbers {
        h: hd.iter().map(|row| row.iter().map(Vec::len).collect()).collect(),
        via_dbar_mu: count_pair(LaplacianSelection::Dbar, LaplacianSelection::Mu),
        via_del_mubar: count_pair(LaplacianSelection::Del, LaplacianSelection::Mubar),
    }
}

/// Orthogonal complement of `span(w)` in `Λᵏ` under the Gram product.
pub fn orthocomplement(m: &AKManifold, k: usize, w: &[Vec<Gq>]) -> Vec<Vec<Gq>> {
    let size = m.basis().dim(k);
    if w.is_empty() {
        return (0..size).map(|i| crate::calc::unit(size, i)).collect();
    }
    // rows w_iᴴ G
    let g = m.gram(k);
    let rows: Vec<Vec<Gq>> = w
        .iter()
        .map(|x| {
            let conj: Vec<Gq> = x.iter().map(Gq::conj).collect();
            (0..size).map(|c| conj.iter().enumerate().fold(Gq::zero(), |acc, (r, a)| &acc + &(a * &g[(r, c)]))).collect()
        })
        .collect();
    ExactMatrix::from_rows(rows).nullspace()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;
    use crate::lie::LieAlgebraData;
    use crate::structure::omega_from_terms;

    pub(crate) fn kt() -> AKManifold {
        let alg = LieAlgebraData::new(4, vec![(1, 4, vec![(2, int(1))])]).unwrap();
        let j = ExactMatrix::from_int_rows(&[&[0, 0, -1, 0], &[0, 0, 0, -1], &[1, 0, 0, 0], &[0, 1, 0, 0]]);
        let omega = omega_from_terms(4, &[(3, 1, int(1)), (4, 2, int(1))]).unwrap();
        AKManifold::new("kt", alg, j, omega).unwrap()
    }

    #[test]
    fn betti_and_harmonic_one_forms() {
        let m = kt();
        assert_eq!(betti_numbers(&m), vec![1, 3, 4, 3, 1]);
        let h1 = harmonic_space(&m, HarmonicSelection::Laplacian(LaplacianSelection::D), 1).unwrap();
        let expected: Vec<Vec<Gq>> = [1, 3, 4].iter().map(|&i| m.vector(&FormValue::alpha(4, &[i]), 1)).collect();
        assert!(h1.same_as(&m, &expected));
        let h = harmonic_space(&m, HarmonicSelection::Laplacian(LaplacianSelection::DbarMu), 1).unwrap();
        assert!(h.same_as(&m, &expected[..2]));
    }

    #[test]
    fn hodge_numbers_on_example() {
        let m = kt();
        let h = hodge_numbers(&m);
        assert!(h.cross_checks_agree());
        assert!(h.diamond_symmetric());
        assert_eq!(h.get(2, 0), 0);
        assert_eq!(h.get(1, 0) + h.get(0, 1), 2);
    }

    #[test]
    fn complement_is_orthogonal() {
        let m = kt();
        let w = vec![m.vector(&FormValue::alpha(4, &[1]).add(&FormValue::alpha(4, &[2])), 1)];
        let c = orthocomplement(&m, 1, &w);
        assert_eq!(c.len(), 3);
        assert!(c.iter().all(|v| m.pair(1, v, &w[0]) .is_zero()));
    }
}
