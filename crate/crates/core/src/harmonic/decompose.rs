//! Bidegree, Lefschetz and harmonic decomposition of a single form.

use num_traits::Zero;
use serde::Serialize;

use super::{selection_kernel, HarmonicSelection};
use crate::calc::LaplacianSelection;
use crate::error::AnalysisError;
use crate::exact::{ExactMatrix, Gq};
use crate::exterior::FormValue;
use crate::structure::AKManifold;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BidegreePart {
    pub p: usize,
    pub q: usize,
    pub form: FormValue,
}

/// `L^power β` with `β` primitive.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LefschetzPart {
    pub power: usize,
    pub primitive: FormValue,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FormDecomposition {
    pub degree: usize,
    pub form: FormValue,
    pub closed: bool,
    pub bidegree: Vec<BidegreePart>,
    pub lefschetz: Vec<LefschetzPart>,
    /// Orthogonal projection onto `𝓗ᵏ_d`.
    pub harmonic_part: FormValue,
}

/// Coefficients `x` with `Σ x_i basis_i = v`, if `v` lies in the span.
pub(crate) fn solve_in_span(len: usize, basis: &[Vec<Gq>], v: &[Gq]) -> Option<Vec<Gq>> {
    if basis.is_empty() {
        return v.iter().all(Zero::is_zero).then(Vec::new);
    }
    let a = ExactMatrix::from_columns(len, basis).hstack(&ExactMatrix::from_columns(len, &[v.to_vec()]));
    let r = a.rref();
    let last = basis.len();
    if r.pivots.contains(&last) {
        return None;
    }
    // reduced rows read off x for the pivot columns; free columns are zero
    let mut x = vec![Gq::zero(); last];
    for (row, &col) in r.pivots.iter().enumerate() {
        x[col] = r.matrix[(row, last)].clone();
    }
    Some(x)
}

pub fn decompose_form(m: &AKManifold, form: &FormValue) -> Result<FormDecomposition, AnalysisError> {
    let k = form
        .homogeneous_degree()
        .ok_or_else(|| AnalysisError::Form("form must be homogeneous".to_string()))?;
    if form.n() != m.dim() {
        return Err(AnalysisError::Form(format!("form lives in dimension {}, manifold has {}", form.n(), m.dim())));
    }
    let n = m.complex_dim();
    let size = m.basis().dim(k);
    let v = m.vector(form, k);
    let o = m.ops();

    let bidegree = m
        .bidegree_range(k)
        .map(|p| BidegreePart { p, q: k - p, form: m.form(k, &o.project_vec(k, p, &v)) })
        .filter(|b| !b.form.is_zero())
        .collect();

    // α = Σ_r L^r β_r with β_r ∈ P^{k-2r}, r ≥ max(0, k-n)
    let mut columns = Vec::new();
    let mut owners = Vec::new();
    for r in k.saturating_sub(n)..=k / 2 {
        let j = k - 2 * r;
        let lr = o.l.pow(r);
        for p in selection_kernel(m, HarmonicSelection::Primitive, j) {
            columns.push(lr.apply_vec(j, &p).expect("L^r in range"));
            owners.push((r, p));
        }
    }
    let coeffs = solve_in_span(size, &columns, &v).expect("Lefschetz decomposition spans every degree");
    let mut lefschetz: Vec<LefschetzPart> = Vec::new();
    for (c, (r, p)) in coeffs.iter().zip(&owners) {
        if c.is_zero() {
            continue;
        }
        let j = k - 2 * r;
        let term = m.form(j, &p.iter().map(|x| x * c).collect::<Vec<_>>());
        match lefschetz.iter_mut().find(|part| part.power == *r) {
            Some(part) => part.primitive = part.primitive.add(&term),
            None => lefschetz.push(LefschetzPart { power: *r, primitive: term }),
        }
    }

    let h = selection_kernel(m, HarmonicSelection::Laplacian(LaplacianSelection::D), k);
    let harmonic_part = if h.is_empty() {
        FormValue::zero(m.dim())
    } else {
        let gram = ExactMatrix::from_fn(h.len(), h.len(), |i, j| m.pair(k, &h[j], &h[i]));
        let rhs: Vec<Gq> = h.iter().map(|b| m.pair(k, &v, b)).collect();
        let c = gram.inverse()?.mul_vec(&rhs);
        let mut acc = vec![Gq::zero(); size];
        for (ci, b) in c.iter().zip(&h) {
            for (a, x) in acc.iter_mut().zip(b) {
                *a += &(ci * x);
            }
        }
        m.form(k, &acc)
    };
    let closed = m.d().apply_vec(k, &v).is_none_or(|w| w.iter().all(Zero::is_zero));
    Ok(FormDecomposition { degree: k, form: form.clone(), closed, bidegree, lefschetz, harmonic_part })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonic::tests::kt;

    #[test]
    fn decomposition_reassembles() {
        let m = kt();
        let f = FormValue::alpha(4, &[1, 2]).add(&FormValue::alpha(4, &[1, 3]).scale(&Gq::from_int(3)));
        let dec = decompose_form(&m, &f).unwrap();
        let sum = dec.bidegree.iter().fold(FormValue::zero(4), |acc, b| acc.add(&b.form));
        assert_eq!(sum, f);
        let l = &m.ops().l;
        let sum = dec.lefschetz.iter().fold(FormValue::zero(4), |acc, part| {
            acc.add(&m.apply(&l.pow(part.power), &part.primitive))
        });
        assert_eq!(sum, f);
        assert!(dec.closed);
        assert_eq!(dec.harmonic_part, f);
        // ω is L(1)
        let dec = decompose_form(&m, m.omega()).unwrap();
        assert_eq!(dec.lefschetz.len(), 1);
        assert_eq!(dec.lefschetz[0].power, 1);
    }
}
