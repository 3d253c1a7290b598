//! Hodge decomposition, purity and fullness, the hard Lefschetz condition,
//! and the theorem audit tying them to the spectral constants.

use serde::Serialize;

use super::constants::{membership_constant, Family};
use super::{betti_numbers, bidegree_spaces_in_degree, hodge_numbers, restrict_to_bidegree, selection_kernel, HarmonicSelection};
use crate::calc::{joint_kernel, LaplacianSelection};
use crate::error::AnalysisError;
use crate::exact::matrix::{same_span, span_contains, span_intersection, span_rank};
use crate::exact::{ExactMatrix, Gq, Rational};
use crate::exterior::FormValue;
use crate::structure::AKManifold;

const D: HarmonicSelection = HarmonicSelection::Laplacian(LaplacianSelection::D);
const DLAMBDA: HarmonicSelection = HarmonicSelection::Laplacian(LaplacianSelection::DLambda);

fn check_degree(m: &AKManifold, k: usize) -> Result<(), AnalysisError> {
    if k > m.dim() {
        return Err(AnalysisError::DegreeOutOfRange { k, max: m.dim() });
    }
    Ok(())
}

/// Whether `𝓗ᵏ_d = ⊕_{p+q=k} 𝓗^{p,q}_d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompositionVerdict {
    pub degree: usize,
    pub holds: bool,
    pub harmonic_dim: usize,
    pub bigraded_dim: usize,
    /// `h^{p,k-p}` indexed by `p`.
    pub dims: Vec<usize>,
    /// A d-harmonic form outside `⊕𝓗^{p,q}_d`, when the decomposition fails.
    pub witness: Option<FormValue>,
    /// `𝓗ᵏ_d ∩ 𝓗ᵏ_μ ∩ 𝓗ᵏ_μ̄` splits into bidegrees.
    pub lemma_consistent: bool,
}

/// Whether a span equals the sum of its bidegree components inside it.
fn splits(m: &AKManifold, k: usize, vs: &[Vec<Gq>]) -> bool {
    let size = m.basis().dim(k);
    let parts: Vec<Vec<Gq>> = m.bidegree_range(k).flat_map(|p| restrict_to_bidegree(m, k, p, vs)).collect();
    same_span(size, vs, &parts)
}

pub fn hodge_decomposition_check(m: &AKManifold, k: usize) -> Result<DecompositionVerdict, AnalysisError> {
    check_degree(m, k)?;
    let size = m.basis().dim(k);
    let harmonic = selection_kernel(m, D, k);
    let pieces = bidegree_spaces_in_degree(m, D, k);
    let union: Vec<Vec<Gq>> = pieces.concat();
    let bigraded_dim = span_rank(size, &union);
    let holds = bigraded_dim == harmonic.len();
    let witness = if holds {
        None
    } else {
        harmonic.iter().find(|h| !span_contains(size, &union, std::slice::from_ref(h))).map(|h| m.form(k, h))
    };
    let l = m.laplacians();
    let triple = joint_kernel(m, k, &[&l.d, &l.mu, &l.mubar]);
    Ok(DecompositionVerdict {
        degree: k,
        holds,
        harmonic_dim: harmonic.len(),
        bigraded_dim,
        dims: pieces.iter().map(Vec::len).collect(),
        witness,
        lemma_consistent: splits(m, k, &triple),
    })
}

/// Purity and fullness of `Hᵏ` with respect to the almost complex structure,
/// with `H^{p,q} = (ker d ∩ Ω^{p,q} + im d) / im d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PureFullVerdict {
    pub degree: usize,
    /// `dim H^{p,k-p}` indexed by `p`.
    pub dims: Vec<usize>,
    /// `dim Σ_p H^{p,k-p}`
    pub span_dim: usize,
    pub betti: usize,
    /// The sum of the `H^{p,q}` is direct.
    pub pure: bool,
    /// The sum of the `H^{p,q}` is all of `Hᵏ`.
    pub full: bool,
}

pub fn pure_full_check(m: &AKManifold, k: usize) -> Result<PureFullVerdict, AnalysisError> {
    check_degree(m, k)?;
    let size = m.basis().dim(k);
    let closed = joint_kernel(m, k, &[m.d()]);
    let exact: Vec<Vec<Gq>> = if k == 0 {
        Vec::new()
    } else {
        m.d().block(k - 1).map_or_else(Vec::new, ExactMatrix::columns)
    };
    let rank_b = span_rank(size, &exact);
    let n = m.complex_dim();
    let mut dims = vec![0; n + 1];
    let mut all = exact.clone();
    for p in m.bidegree_range(k) {
        let z = restrict_to_bidegree(m, k, p, &closed);
        dims[p] = span_rank(size, &[z.clone(), exact.clone()].concat()) - rank_b;
        all.extend(z);
    }
    let span_dim = span_rank(size, &all) - rank_b;
    let betti = closed.len() - rank_b;
    Ok(PureFullVerdict { degree: k, pure: dims.iter().sum::<usize>() == span_dim, full: span_dim == betti, dims, span_dim, betti })
}

/// The four formulations of the hard Lefschetz condition in degree `k < n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HlcDegree {
    pub degree: usize,
    /// `𝓗ᵏ_d = 𝓗ᵏ_{dΛ}`
    pub d_equals_dlambda: bool,
    /// `L^{n-k}: 𝓗ᵏ_d → 𝓗^{2n-k}_d` is an isomorphism.
    pub lefschetz_d: bool,
    /// `L^{n-k}: 𝓗ᵏ_{dΛ} → 𝓗^{2n-k}_{dΛ}` is an isomorphism.
    pub lefschetz_dlambda: bool,
    /// `𝓗ᵏ_d ⊂ 𝓗ᵏ_{ddΛ}`
    pub d_in_ddlambda: bool,
    pub harmonic_dim: usize,
    /// `L^{n-k}` maps `𝓗ᵏ_d` into `𝓗^{2n-k}_d`.
    pub image_harmonic_d: bool,
    /// Rank of the pairing of `L^{n-k}𝓗ᵏ_d` with `𝓗^{2n-k}_d`, i.e. the rank
    /// of the induced map on harmonic representatives.
    pub projected_rank_d: usize,
    pub image_harmonic_dlambda: bool,
    pub projected_rank_dlambda: usize,
    /// `𝓗ᵏ_{ddΛ} = 𝓗ᵏ_d`
    pub ddlambda_equals_d: bool,
    /// `𝓗ᵏ_{d+dΛ} = 𝓗ᵏ_d`
    pub d_plus_dlambda_equals_d: bool,
    pub h_d_plus_dlambda: usize,
    pub h_ddlambda: usize,
}

impl HlcDegree {
    pub fn statements(&self) -> [bool; 4] {
        [self.d_equals_dlambda, self.lefschetz_d, self.lefschetz_dlambda, self.d_in_ddlambda]
    }

    pub fn statements_agree(&self) -> bool {
        let s = self.statements();
        s.iter().all(|&x| x == s[0])
    }
}

/// Defect of the HLC in degree `k`: `2(h_{d+dΛ} - b)` and the symmetric form
/// `h_{d+dΛ} + h_{ddΛ} - 2b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NonHlcDefect {
    pub degree: usize,
    pub betti: usize,
    pub twice_excess: i64,
    pub symmetric_excess: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HlcAudit {
    pub degrees: Vec<HlcDegree>,
    /// The HLC (the Lefschetz isomorphism on d-harmonic forms) in every degree `k < n`.
    pub hlc: bool,
    pub statements_agree: bool,
    /// Degrees `k < n` where the HLC fails.
    pub non_hlc: Vec<NonHlcDefect>,
}

/// Whether `L^s` maps `source` into `target` and the rank of the induced
/// map onto `span(target)` (pairing rank).
fn lefschetz_map(m: &AKManifold, k: usize, s: usize, source: &[Vec<Gq>], target: &[Vec<Gq>]) -> (bool, usize) {
    let t = k + 2 * s;
    let lp = m.ops().l.pow(s);
    let size = m.basis().dim(t);
    let images: Vec<Vec<Gq>> = source.iter().map(|h| lp.apply_vec(k, h).expect("L^s in range")).collect();
    let inside = span_contains(size, target, &images);
    if images.is_empty() || target.is_empty() {
        return (inside, 0);
    }
    let pairing = ExactMatrix::from_fn(images.len(), target.len(), |i, j| m.pair(t, &images[i], &target[j]));
    (inside, pairing.rank())
}

pub fn hlc_audit(m: &AKManifold) -> HlcAudit {
    let n = m.complex_dim();
    let betti = betti_numbers(m);
    let mut degrees = Vec::new();
    for k in 0..n {
        let size = m.basis().dim(k);
        let s = n - k;
        let hd = selection_kernel(m, D, k);
        let hdl = selection_kernel(m, DLAMBDA, k);
        let hdd = selection_kernel(m, HarmonicSelection::DDLambda, k);
        let hdp = selection_kernel(m, HarmonicSelection::DPlusDLambda, k);
        let (inside_d, rank_d) = lefschetz_map(m, k, s, &hd, &selection_kernel(m, D, 2 * n - k));
        let (inside_dl, rank_dl) = lefschetz_map(m, k, s, &hdl, &selection_kernel(m, DLAMBDA, 2 * n - k));
        let dual_d = selection_kernel(m, D, 2 * n - k).len();
        let dual_dl = selection_kernel(m, DLAMBDA, 2 * n - k).len();
        let lefschetz = |inside: bool, rank: usize, dim: usize, dual: usize| inside && rank == dim && dim == dual;
        degrees.push(HlcDegree {
            degree: k,
            d_equals_dlambda: same_span(size, &hd, &hdl),
            lefschetz_d: lefschetz(inside_d, rank_d, hd.len(), dual_d),
            lefschetz_dlambda: lefschetz(inside_dl, rank_dl, hdl.len(), dual_dl),
            d_in_ddlambda: span_contains(size, &hdd, &hd),
            harmonic_dim: hd.len(),
            image_harmonic_d: inside_d,
            projected_rank_d: rank_d,
            image_harmonic_dlambda: inside_dl,
            projected_rank_dlambda: rank_dl,
            ddlambda_equals_d: same_span(size, &hdd, &hd),
            d_plus_dlambda_equals_d: same_span(size, &hdp, &hd),
            h_d_plus_dlambda: hdp.len(),
            h_ddlambda: hdd.len(),
        });
    }
    let hlc = degrees.iter().all(|d| d.lefschetz_d);
    let statements_agree = degrees.iter().all(HlcDegree::statements_agree);
    let non_hlc = degrees
        .iter()
        .filter(|d| !d.lefschetz_d)
        .map(|d| {
            let b = betti[d.degree] as i64;
            NonHlcDefect {
                degree: d.degree,
                betti: betti[d.degree],
                twice_excess: 2 * (d.h_d_plus_dlambda as i64 - b),
                symmetric_excess: d.h_d_plus_dlambda as i64 + d.h_ddlambda as i64 - 2 * b,
            }
        })
        .collect();
    HlcAudit { degrees, hlc, statements_agree, non_hlc }
}

/// `b₂⁺`, the dimension of self-dual d-harmonic 2-forms; `None` unless the
/// real dimension is 4.
pub fn b2_plus(m: &AKManifold) -> Option<usize> {
    if m.dim() != 4 {
        return None;
    }
    let lap = m.laplacians().d.block(2).expect("Δd on 2-forms");
    let star = m.ops().star.block(2).expect("∗ on 2-forms");
    let sd = star.sub(&ExactMatrix::identity(star.rows()));
    Some(lap.vstack(&sd).nullspace().len())
}

/// One implication (or identity) checked on the manifold.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TheoremCheck {
    pub id: String,
    pub statement: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    /// `None` for unconditional statements.
    pub premise: Option<bool>,
    pub conclusion: bool,
    /// `premise ⟹ conclusion`
    pub consistent: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl TheoremCheck {
    fn new(id: &str, statement: &str, degree: Option<usize>, premise: Option<bool>, conclusion: bool) -> Self {
        TheoremCheck {
            id: id.to_string(),
            statement: statement.to_string(),
            degree,
            premise,
            conclusion,
            consistent: premise == Some(false) || conclusion,
            note: None,
        }
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

fn intersect_all(len: usize, spaces: &[Vec<Vec<Gq>>]) -> Vec<Vec<Gq>> {
    let mut it = spaces.iter();
    let first = it.next().cloned().unwrap_or_default();
    it.fold(first, |acc, s| span_intersection(len, &acc, s))
}

/// Checks every implication between the spectral constants, harmonic spaces,
/// the Hodge decomposition and the HLC that applies to `m`.
pub fn theorem_audit(m: &AKManifold, width: &Rational) -> Result<Vec<TheoremCheck>, AnalysisError> {
    let n = m.complex_dim();
    let dim = m.dim();
    let half = Rational::new(1.into(), 2.into());
    let mut out = Vec::new();
    let decomposition: Vec<DecompositionVerdict> = (0..=dim).map(|k| hodge_decomposition_check(m, k)).collect::<Result<_, _>>()?;
    let hlc = hlc_audit(m);
    let hodge = hodge_numbers(m);
    let betti = betti_numbers(m);
    let kernel = |sel: LaplacianSelection, k: usize| selection_kernel(m, HarmonicSelection::Laplacian(sel), k);

    for k in 1..=n {
        let cm = membership_constant(m, Family::M, k, width)?;
        out.push(
            TheoremCheck::new(
                "decomposition.sufficient_constant",
                "c_M > 20 implies H^k_d = ⊕ H^{p,q}_d",
                Some(k),
                Some(cm.best_constant.exceeds(&Rational::from_integer(20.into()))),
                decomposition[k].holds,
            )
            .with_note(format!("c_M = {}", cm.best_constant)),
        );
        out.push(
            TheoremCheck::new("membership.baseline", "c_M >= 1/2", Some(k), None, cm.best_constant.at_least(&half))
                .with_note(format!("c_M = {}", cm.best_constant)),
        );
        if k == 1 || (k == 2 && dim == 4) {
            out.push(TheoremCheck::new("membership.strict_half", "c_M > 1/2", Some(k), None, cm.best_constant.exceeds(&half)));
        }
        if k == 1 {
            out.push(TheoremCheck::new(
                "membership.one_forms_decompose",
                "c_M > 2 on 1-forms implies H^1_d = H^{1,0}_d ⊕ H^{0,1}_d",
                Some(1),
                Some(cm.best_constant.exceeds(&Rational::from_integer(2.into()))),
                decomposition[1].holds,
            ));
        }

        let ct = membership_constant(m, Family::Mtilde, k, width)?;
        let size = m.basis().dim(k);
        let equal = same_span(size, &kernel(LaplacianSelection::D, k), &kernel(LaplacianSelection::DLambda, k));
        let mut check = TheoremCheck::new(
            "dlambda.sufficient_constant",
            "c̃ above its threshold implies H^k_d = H^k_dΛ",
            Some(k),
            ct.meets_threshold,
            equal,
        );
        let sharp = ct.threshold_status == "threshold not strictly met" && !equal;
        check = check.with_note(format!(
            "c̃ = {}, threshold {}{}",
            ct.best_constant,
            ct.threshold.as_ref().map_or("none".to_string(), crate::exact::format_rational),
            if sharp { "; constant equals the threshold and the conclusion fails, so the threshold is sharp" } else { "" }
        ));
        out.push(check);
    }

    let l = m.laplacians();
    for k in 0..=dim {
        let size = m.basis().dim(k);
        let ker_dm = kernel(LaplacianSelection::DbarMu, k);
        let both = joint_kernel(m, k, &[&l.d, &l.d_lambda]);
        let ker_dmb = kernel(LaplacianSelection::DelMubar, k);
        out.push(TheoremCheck::new(
            "kernel.delbar_mu",
            "ker Δ(∂̄+μ) = H_d ∩ H_dΛ = ker Δ(∂+μ̄)",
            Some(k),
            None,
            same_span(size, &ker_dm, &both) && same_span(size, &ker_dmb, &both),
        ));
        out.push(TheoremCheck::new(
            "decomposition.lemma",
            "H_d ∩ H_μ ∩ H_μ̄ splits into bidegrees",
            Some(k),
            None,
            decomposition[k].lemma_consistent,
        ));
        let pf = pure_full_check(m, k)?;
        out.push(TheoremCheck::new(
            "decomposition.pure_and_full",
            "H^k_d = ⊕ H^{p,q}_d implies H^k is pure and full",
            Some(k),
            Some(decomposition[k].holds),
            pf.pure && pf.full,
        ));
        if k == 2 && dim == 4 {
            out.push(TheoremCheck::new("pure.two_forms", "H^2 is pure in real dimension 4", Some(2), None, pf.pure));
        }
        let sum = hodge.degree_sum(k);
        out.push(
            TheoremCheck::new(
                "hodge.sum_bound",
                "Σ h^{p,q} <= b_k, with equality iff H^k_d = ⊕ H^{p,q}_d",
                Some(k),
                None,
                sum <= betti[k] && ((sum == betti[k]) == decomposition[k].holds),
            )
            .with_note(format!("Σ h = {sum}, b = {}", betti[k])),
        );
        if k % 2 == 1 {
            out.push(TheoremCheck::new("hodge.odd_degree_even", "Σ h^{p,q} is even in odd degree", Some(k), None, sum % 2 == 0));
        }
    }

    for (p, row) in hodge.h.iter().enumerate() {
        for (q, _) in row.iter().enumerate() {
            let k = p + q;
            if k > dim {
                continue;
            }
            let size = m.basis().dim(k);
            let piece = |s: LaplacianSelection| restrict_to_bidegree(m, k, p, &kernel(s, k));
            let hd = piece(LaplacianSelection::D);
            let a = span_intersection(size, &piece(LaplacianSelection::Dbar), &piece(LaplacianSelection::Mu));
            let b = span_intersection(size, &piece(LaplacianSelection::Del), &piece(LaplacianSelection::Mubar));
            out.push(
                TheoremCheck::new(
                    "harmonic.bidegree_characterisation",
                    "H^{p,q}_d = H^{p,q}_∂̄ ∩ H^{p,q}_μ = H^{p,q}_∂ ∩ H^{p,q}_μ̄",
                    Some(k),
                    None,
                    same_span(size, &hd, &a) && same_span(size, &hd, &b),
                )
                .with_note(format!("(p,q) = ({p},{q})")),
            );
        }
    }

    if dim >= 2 {
        let size = m.basis().dim(1);
        let hd = kernel(LaplacianSelection::D, 1);
        let hdp = selection_kernel(m, HarmonicSelection::DPlusDLambda, 1);
        out.push(TheoremCheck::new(
            "harmonic.one_forms_d_plus_dlambda",
            "H^1_{d+dΛ} = H^1_d",
            Some(1),
            None,
            same_span(size, &hdp, &hd),
        ));
        let left = span_intersection(size, &hd, &kernel(LaplacianSelection::DLambda, 1));
        let right = intersect_all(
            size,
            &[
                kernel(LaplacianSelection::Del, 1),
                kernel(LaplacianSelection::Dbar, 1),
                kernel(LaplacianSelection::Mu, 1),
                kernel(LaplacianSelection::Mubar, 1),
            ],
        );
        out.push(TheoremCheck::new(
            "harmonic.one_forms_split",
            "H^1_d ∩ H^1_dΛ = H^1_∂ ∩ H^1_∂̄ ∩ H^1_μ ∩ H^1_μ̄",
            Some(1),
            None,
            same_span(size, &left, &right),
        ));
    }

    let integrable = m.nijenhuis().is_zero();
    if dim == 4 {
        out.push(TheoremCheck::new(
            "dim4.nonintegrable_h20",
            "a non-integrable structure in dimension 4 has h^{2,0} = 0",
            Some(2),
            Some(!integrable),
            hodge.get(2, 0) == 0,
        ));
        let b2p = b2_plus(m).expect("dimension 4");
        out.push(
            TheoremCheck::new(
                "dim4.b2_plus",
                "H^2_d = ⊕ H^{p,q}_d implies b2+ = 1 + 2h^{2,0}",
                Some(2),
                Some(decomposition[2].holds),
                b2p == 1 + 2 * hodge.get(2, 0),
            )
            .with_note(format!("b2+ = {b2p}, h^(2,0) = {}", hodge.get(2, 0))),
        );
        let size = m.basis().dim(2);
        let hd = kernel(LaplacianSelection::D, 2);
        out.push(TheoremCheck::new(
            "dim4.d_plus_dlambda_two_forms",
            "H^2_{d+dΛ} = H^2_d implies H^2_d = H^2_dΛ",
            Some(2),
            Some(same_span(size, &selection_kernel(m, HarmonicSelection::DPlusDLambda, 2), &hd)),
            same_span(size, &hd, &kernel(LaplacianSelection::DLambda, 2)),
        ));
    }

    out.push(TheoremCheck::new(
        "hlc.d_plus_dlambda",
        "HLC implies H^k_{d+dΛ} = H^k_d for k < n",
        None,
        Some(hlc.hlc),
        hlc.degrees.iter().all(|d| d.d_plus_dlambda_equals_d),
    ));
    out.push(TheoremCheck::new(
        "hlc.statements_agree",
        "the four formulations of the HLC agree in every degree k < n",
        None,
        None,
        hlc.statements_agree,
    ));
    out.push(TheoremCheck::new(
        "hlc.ddlambda_equivalence",
        "H^k_{ddΛ} = H^k_d for all k < n iff HLC",
        None,
        None,
        hlc.degrees.iter().all(|d| d.ddlambda_equals_d) == hlc.hlc,
    ));

    let mu_zero = m.ops().mu.is_zero();
    let delbar_sq_zero = m.ops().delbar.compose(&m.ops().delbar).is_zero();
    out.push(
        TheoremCheck::new(
            "integrability.detectors",
            "N = 0 iff μ = 0 iff ∂̄² = 0",
            None,
            None,
            integrable == mu_zero && mu_zero == delbar_sq_zero,
        )
        .with_note(format!("N = 0: {integrable}, μ = 0: {mu_zero}, ∂̄² = 0: {delbar_sq_zero}")),
    );
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonic::tests::kt;

    #[test]
    fn example_decomposition_and_hlc() {
        let m = kt();
        for k in 0..=4 {
            let v = hodge_decomposition_check(&m, k).unwrap();
            assert!(v.lemma_consistent);
            let pf = pure_full_check(&m, k).unwrap();
            assert_eq!(pf.betti, [1, 3, 4, 3, 1][k]);
        }
        assert!(!hodge_decomposition_check(&m, 1).unwrap().holds);
        assert!(hodge_decomposition_check(&m, 1).unwrap().witness.is_some());
        let h = hlc_audit(&m);
        assert!(!h.hlc);
        assert!(h.statements_agree);
        let d1 = &h.degrees[1];
        assert_eq!(d1.statements(), [false; 4]);
        assert_eq!(d1.projected_rank_d, 2);
        // α12 - α34 and α13 + α24 are closed and self-dual
        assert_eq!(b2_plus(&m), Some(2));
    }

    #[test]
    fn example_theorems_consistent() {
        let m = kt();
        let checks = theorem_audit(&m, &crate::exact::roots::default_width()).unwrap();
        let bad: Vec<_> = checks.iter().filter(|c| !c.consistent).collect();
        assert!(bad.is_empty(), "{bad:#?}");
        let dl = checks.iter().find(|c| c.id == "dlambda.sufficient_constant" && c.degree == Some(1)).unwrap();
        assert!(dl.note.as_deref().unwrap().contains("sharp"));
    }
}
