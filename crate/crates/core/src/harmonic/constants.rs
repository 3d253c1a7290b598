//! Spectral gaps, membership constants, and the inequality and energy audits.

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{bidegree_spaces_in_degree, orthocomplement, HarmonicSelection};
use crate::calc::{joint_kernel, LaplacianSelection};
use crate::error::AnalysisError;
use crate::exact::roots::smallest_positive;
use crate::exact::{
    format_rational, isolate_real_roots, pencil_min_finite_eigenvalue, ExactMatrix, Gq, PencilValue, Rational,
    RealAlgebraicRoot,
};
use crate::operator::GradedOperator;
use crate::structure::AKManifold;

fn ser_opt_rational<S: serde::Serializer>(v: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(r) => s.serialize_str(&format_rational(r)),
        None => s.serialize_none(),
    }
}

fn ser_rational<S: serde::Serializer>(v: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(v))
}

/// Eigenvalues of a Laplacian block and its smallest positive one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectralResult {
    pub operator: String,
    pub degree: usize,
    pub eigenvalues: Vec<RealAlgebraicRoot>,
    pub smallest_positive: Option<RealAlgebraicRoot>,
    pub all_nonnegative: bool,
}

/// Real spectrum of a square block whose eigenvalues are known to be real.
pub(crate) fn real_spectrum(blk: &ExactMatrix, width: &Rational) -> Result<Vec<RealAlgebraicRoot>, AnalysisError> {
    if blk.is_zero() {
        return Ok(vec![RealAlgebraicRoot::exact(Rational::zero(), blk.rows())]);
    }
    let p = blk.char_poly()?.to_real()?;
    Ok(isolate_real_roots(&p, width)?)
}

pub fn spectral_gap(m: &AKManifold, sel: LaplacianSelection, k: usize, width: &Rational) -> Result<SpectralResult, AnalysisError> {
    if k > m.dim() {
        return Err(AnalysisError::DegreeOutOfRange { k, max: m.dim() });
    }
    let blk = sel.laplacian(m).block(k).expect("Laplacian blocks exist in every degree");
    let eigenvalues = real_spectrum(blk, width)?;
    Ok(SpectralResult {
        operator: sel.name().to_string(),
        degree: k,
        smallest_positive: smallest_positive(&eigenvalues).cloned(),
        all_nonnegative: eigenvalues.iter().all(|r| r.signum() >= 0),
        eigenvalues,
    })
}

/// The three spectral families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Family {
    /// `⟨(Δ∂̄+Δμ)α,α⟩ ≥ c⟨(Δμ+Δμ̄)α,α⟩` on `(⊕𝓗^{p,q}_d)^⊥`
    M,
    /// `⟨Δ(∂̄+μ)α,α⟩ ≥ c⟨(Δμ+Δμ̄)α,α⟩` on `(𝓗ᵏ_{∂̄+μ})^⊥`
    Mtilde,
    /// `⟨Δd α,α⟩ ≥ c⟨(Δμ+Δμ̄)α,α⟩` on `(𝓗ᵏ_d)^⊥`
    Mbar,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::M, Family::Mtilde, Family::Mbar];

    pub fn parse(s: &str) -> Result<Family, AnalysisError> {
        match s {
            "M" => Ok(Family::M),
            "Mtilde" => Ok(Family::Mtilde),
            "Mbar" => Ok(Family::Mbar),
            other => Err(AnalysisError::UnknownFamily(other.to_string())),
        }
    }

    /// Sufficient threshold for the family's conclusion, if one is known.
    pub fn threshold(self, k: usize) -> Option<Rational> {
        match self {
            Family::M => Some(Rational::from_integer(20.into())),
            Family::Mtilde if k <= 1 => Some(Rational::from_integer(2.into())),
            Family::Mtilde => Some(Rational::from_integer(4.into())),
            Family::Mbar => None,
        }
    }

    fn operator(self, m: &AKManifold) -> &GradedOperator {
        let l = m.laplacians();
        match self {
            Family::M => &l.delbar_plus_mu,
            Family::Mtilde => &l.delbar_mu,
            Family::Mbar => &l.d,
        }
    }

    /// Basis of the subspace the family's inequality is tested on.
    pub fn subspace(self, m: &AKManifold, k: usize) -> Vec<Vec<Gq>> {
        let excluded = match self {
            Family::M => bidegree_spaces_in_degree(m, HarmonicSelection::Laplacian(LaplacianSelection::D), k).concat(),
            Family::Mtilde => joint_kernel(m, k, &[&m.laplacians().delbar_mu]),
            Family::Mbar => joint_kernel(m, k, &[&m.laplacians().d]),
        };
        orthocomplement(m, k, &excluded)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MembershipResult {
    pub family: Family,
    pub degree: usize,
    pub subspace_dim: usize,
    pub best_constant: PencilValue,
    #[serde(serialize_with = "ser_opt_rational")]
    pub threshold: Option<Rational>,
    pub meets_threshold: Option<bool>,
    /// `met`, `not met`, `threshold not strictly met` or `no threshold`.
    pub threshold_status: String,
}

impl MembershipResult {
    /// Largest rational known to be at most the constant (`None` for `+∞`).
    pub fn lower_bound(&self) -> Option<Rational> {
        self.best_constant.finite().map(|r| r.lower().clone())
    }
}

pub fn membership_constant(m: &AKManifold, family: Family, k: usize, width: &Rational) -> Result<MembershipResult, AnalysisError> {
    if k > m.dim() {
        return Err(AnalysisError::DegreeOutOfRange { k, max: m.dim() });
    }
    let subspace = family.subspace(m, k);
    let a = family.operator(m).block(k).expect("Laplacian block");
    let b = m.laplacians().mu_plus_mubar.block(k).expect("Laplacian block");
    let best = pencil_min_finite_eigenvalue(a, b, m.gram(k), &subspace, width)?;
    let threshold = family.threshold(k);
    let (meets, status) = match &threshold {
        None => (None, "no threshold".to_string()),
        Some(t) => {
            let at_threshold = best.exact_value() == Some(t);
            let exceeds = best.exceeds(t);
            let status = if exceeds {
                "met"
            } else if at_threshold {
                "threshold not strictly met"
            } else {
                "not met"
            };
            (Some(exceeds), status.to_string())
        }
    };
    Ok(MembershipResult {
        family,
        degree: k,
        subspace_dim: subspace.len(),
        best_constant: best,
        threshold,
        meets_threshold: meets,
        threshold_status: status,
    })
}

fn quad(m: &AKManifold, k: usize, op: &ExactMatrix, v: &[Gq]) -> Rational {
    m.pair(k, &op.mul_vec(v), v).re
}

/// The three quadratic inequalities checked on orthocomplements.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InequalityKind {
    /// `⟨(Δ∂̄+Δμ)α,α⟩ ≥ ½⟨(Δμ+Δμ̄)α,α⟩`, unconditional.
    Baseline,
    /// `⟨Δd α,α⟩ ≥ 4/3(c-20)⟨(Δμ+Δμ̄)α,α⟩` with `c` the family-M constant.
    DecompositionBound,
    /// `⟨Δd α,α⟩ ≥ (c̃-8)⟨(Δμ+Δμ̄)α,α⟩` with `c̃` the family-Mtilde constant.
    DLambdaBound,
}

impl InequalityKind {
    pub const ALL: [InequalityKind; 3] =
        [InequalityKind::Baseline, InequalityKind::DecompositionBound, InequalityKind::DLambdaBound];

    fn family(self) -> Family {
        match self {
            InequalityKind::Baseline | InequalityKind::DecompositionBound => Family::M,
            InequalityKind::DLambdaBound => Family::Mtilde,
        }
    }

    fn premise_threshold(self) -> Option<Rational> {
        match self {
            InequalityKind::Baseline => None,
            InequalityKind::DecompositionBound => Some(Rational::from_integer(20.into())),
            InequalityKind::DLambdaBound => Some(Rational::from_integer(8.into())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InequalityAudit {
    pub kind: InequalityKind,
    pub degree: usize,
    pub family: Family,
    pub constant: Option<PencilValue>,
    /// Rational value substituted for the constant (the exact value, or the
    /// lower end of its isolating interval); `None` for `+∞`.
    #[serde(serialize_with = "ser_opt_rational")]
    pub constant_used: Option<Rational>,
    #[serde(serialize_with = "ser_opt_rational")]
    pub coefficient: Option<Rational>,
    /// Whether the constant strictly exceeds the premise threshold.
    pub premise_met: bool,
    pub status: String,
    pub vectors_tested: usize,
    #[serde(serialize_with = "ser_opt_rational")]
    pub min_slack: Option<Rational>,
    /// `min_slack ≥ 0`.
    pub holds: bool,
    pub seed: u64,
}

impl InequalityAudit {
    /// A negative slack where the premise holds is a consistency failure.
    pub fn consistent(&self) -> bool {
        self.holds || !self.premise_met
    }
}

/// Pseudorandom Gaussian-rational combination of `basis`.
pub(crate) fn random_combination(rng: &mut ChaCha8Rng, basis: &[Vec<Gq>]) -> Vec<Gq> {
    let size = basis.first().map_or(0, Vec::len);
    let mut out = vec![Gq::zero(); size];
    for b in basis {
        let re = Rational::new(rng.gen_range(-6i64..=6).into(), rng.gen_range(1i64..=4).into());
        let im = Rational::new(rng.gen_range(-6i64..=6).into(), rng.gen_range(1i64..=4).into());
        let c = Gq::new(re, im);
        for (o, x) in out.iter_mut().zip(b) {
            *o += &(&c * x);
        }
    }
    out
}

/// Number of pseudorandom combinations per inequality audit.
pub const RANDOM_VECTORS: usize = 50;

pub fn inequality_audit(
    m: &AKManifold,
    kind: InequalityKind,
    k: usize,
    seed: u64,
    width: &Rational,
) -> Result<InequalityAudit, AnalysisError> {
    let family = kind.family();
    let membership = membership_constant(m, family, k, width)?;
    let subspace = family.subspace(m, k);
    let lap = m.laplacians();
    let b = lap.mu_plus_mubar.block(k).expect("block");
    let (lhs_op, constant, constant_used, coefficient) = match kind {
        InequalityKind::Baseline => (lap.delbar_plus_mu.block(k).expect("block"), None, None, Some(Rational::new(1.into(), 2.into()))),
        _ => {
            let used = membership.best_constant.exact_value().cloned().or_else(|| membership.lower_bound());
            let shift = kind.premise_threshold().expect("bounded kinds have thresholds");
            let coefficient = used.as_ref().map(|c| match kind {
                InequalityKind::DecompositionBound => (c - &shift) * Rational::new(4.into(), 3.into()),
                _ => c - &shift,
            });
            (lap.d.block(k).expect("block"), Some(membership.best_constant.clone()), used, coefficient)
        }
    };
    let premise_met = match kind.premise_threshold() {
        None => true,
        Some(t) => membership.best_constant.exceeds(&t),
    };
    let status = match (kind, premise_met) {
        (InequalityKind::Baseline, _) => "unconditional".to_string(),
        (_, true) => "threshold met".to_string(),
        (_, false) => "threshold not met".to_string(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(31).wrapping_add(k as u64 * 7 + kind as u64));
    let mut vectors = subspace.clone();
    if !subspace.is_empty() {
        vectors.extend((0..RANDOM_VECTORS).map(|_| random_combination(&mut rng, &subspace)));
    }
    let mut min_slack: Option<Rational> = None;
    for v in &vectors {
        let lhs = quad(m, k, lhs_op, v);
        let rhs_q = quad(m, k, b, v);
        let slack = match &coefficient {
            Some(c) => lhs - c * rhs_q,
            // +∞ constant: Δμ+Δμ̄ vanishes on the subspace
            None if rhs_q.is_zero() => lhs,
            None => -Rational::one(),
        };
        if min_slack.as_ref().is_none_or(|s| slack < *s) {
            min_slack = Some(slack);
        }
    }
    let holds = min_slack.as_ref().is_none_or(|s| !s.is_negative());
    Ok(InequalityAudit {
        kind,
        degree: k,
        family,
        constant,
        constant_used,
        coefficient,
        premise_met,
        status,
        vectors_tested: vectors.len(),
        min_slack,
        holds,
        seed,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaEntry {
    /// Index into the canonical basis of `𝓗ᵏ_d`.
    pub form: usize,
    #[serde(serialize_with = "ser_rational")]
    pub lhs: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub rhs: Rational,
    pub holds: bool,
}

/// `‖dΛα‖²+‖dΛ*α‖² = 4Re⟨𝒥⁻¹(μ+μ̄)𝒥α, dΛ*α⟩ + 4Re⟨𝒥⁻¹(μ*+μ̄*)𝒥α, dΛα⟩` on
/// each d-harmonic basis form and, in degree 1,
/// `‖dΛ*α‖² = 8(‖μα^{0,1}‖² + ‖μ̄α^{1,0}‖²)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaAudit {
    pub degree: usize,
    pub energy_identity: Vec<LemmaEntry>,
    pub one_form_identity: Vec<LemmaEntry>,
}

impl LemmaAudit {
    pub fn holds(&self) -> bool {
        self.energy_identity.iter().chain(&self.one_form_identity).all(|e| e.holds)
    }
}

pub fn lemma_l1_audit(m: &AKManifold, k: usize) -> Result<LemmaAudit, AnalysisError> {
    let n = m.complex_dim();
    if k == 0 || k > n {
        return Err(AnalysisError::DegreeOutOfRange { k, max: n });
    }
    let o = m.ops();
    let norm = |deg: Option<usize>, v: &Option<Vec<Gq>>| match (deg, v) {
        (Some(d), Some(v)) => m.norm_sq(d, v),
        _ => Rational::zero(),
    };
    let pair_re = |deg: Option<usize>, a: &Option<Vec<Gq>>, b: &Option<Vec<Gq>>| match (deg, a, b) {
        (Some(d), Some(a), Some(b)) => m.pair(d, a, b).re,
        _ => Rational::zero(),
    };
    let mm = o.cal_j_inv.compose(&o.mu.add(&o.mubar)).compose(&o.cal_j);
    let mm_star = o.cal_j_inv.compose(&o.mu_star.add(&o.mubar_star)).compose(&o.cal_j);
    let four = Rational::from_integer(4.into());
    let harmonic = joint_kernel(m, k, &[&m.laplacians().d]);
    let (up, down) = (Some(k + 1).filter(|&t| t <= m.dim()), k.checked_sub(1));
    let mut energy = Vec::new();
    let mut one_form = Vec::new();
    for (i, h) in harmonic.iter().enumerate() {
        let dl = o.d_lambda.apply_vec(k, h);
        let dls = o.d_lambda_star.apply_vec(k, h);
        let lhs = norm(down, &dl) + norm(up, &dls);
        let rhs = &four * pair_re(up, &mm.apply_vec(k, h), &dls) + &four * pair_re(down, &mm_star.apply_vec(k, h), &dl);
        energy.push(LemmaEntry { form: i, holds: lhs == rhs, lhs, rhs });
        if k == 1 {
            let lhs = norm(up, &dls);
            let h01 = o.project_vec(1, 0, h);
            let h10 = o.project_vec(1, 1, h);
            let a = norm(Some(2), &o.mu.apply_vec(1, &h01));
            let b = norm(Some(2), &o.mubar.apply_vec(1, &h10));
            let rhs = Rational::from_integer(8.into()) * (a + b);
            one_form.push(LemmaEntry { form: i, holds: lhs == rhs, lhs, rhs });
        }
    }
    Ok(LemmaAudit { degree: k, energy_identity: energy, one_form_identity: one_form })
}

/// Norms of `μ` on invariant 1-forms. The squared values are exact; the
/// flags name the ones equal to `1/16`, i.e. a norm of `1/4`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MuNorms {
    /// `sup ‖μα‖²/‖α‖²` over complex 1-forms.
    pub operator_norm_sq: RealAlgebraicRoot,
    /// `sup ‖μα‖²/‖α‖²` over real 1-forms.
    pub real_operator_norm_sq: RealAlgebraicRoot,
    /// `max |μ_{IJ}|²` over the matrix of `μ` on 1-forms.
    #[serde(serialize_with = "ser_rational")]
    pub max_coefficient_sq: Rational,
    pub equal_to_quarter: Vec<String>,
}

fn largest(roots: Vec<RealAlgebraicRoot>) -> RealAlgebraicRoot {
    roots.into_iter().last().expect("a non-empty spectrum")
}

pub fn mu_norms(m: &AKManifold, width: &Rational) -> Result<MuNorms, AnalysisError> {
    let mu = m.ops().mu.block(1).expect("μ on 1-forms");
    let q = mu.conj_transpose().mul(m.gram(2)).mul(mu);
    let g_inv = m.gram_inv(1);
    let operator = largest(real_spectrum(&g_inv.mul(&q), width)?);
    let re_q = q.add(&q.conj()).scale(&Gq::from_ratio(1, 2));
    let real = largest(real_spectrum(&g_inv.mul(&re_q), width)?);
    let max_coefficient_sq = mu.entries().map(|(_, _, x)| x.norm_sq()).max().unwrap_or_else(Rational::zero);
    let target = Rational::new(1.into(), 16.into());
    let mut equal = Vec::new();
    if operator.exact_value() == Some(&target) {
        equal.push("operator_norm".to_string());
    }
    if real.exact_value() == Some(&target) {
        equal.push("real_operator_norm".to_string());
    }
    if max_coefficient_sq == target {
        equal.push("max_coefficient".to_string());
    }
    Ok(MuNorms { operator_norm_sq: operator, real_operator_norm_sq: real, max_coefficient_sq, equal_to_quarter: equal })
}
