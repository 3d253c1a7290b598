//! The combined report: every invariant, constant and audit for one manifold.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use super::audit::{b2_plus, hlc_audit, hodge_decomposition_check, pure_full_check, theorem_audit};
use super::constants::{inequality_audit, lemma_l1_audit, membership_constant, mu_norms, spectral_gap};
use super::{betti_numbers, harmonic_space, hodge_numbers, HarmonicSelection, HarmonicSpace};
use super::{
    DecompositionVerdict, Family, HlcAudit, InequalityAudit, InequalityKind, LemmaAudit, MembershipResult, MuNorms,
    PureFullVerdict, SpectralResult, TheoremCheck,
};
use crate::calc::{identity_suite, LaplacianSelection};
use crate::error::AnalysisError;
use crate::exact::roots::default_width;
use crate::exact::{format_rational, Rational};
use crate::harmonic::audit::NonHlcDefect;
use crate::structure::AKManifold;

/// Schema version of the JSON report.
pub const REPORT_SCHEMA: u32 = 1;

/// Laplacians whose spectra are included in the report.
pub const REPORTED_SPECTRA: [LaplacianSelection; 3] =
    [LaplacianSelection::D, LaplacianSelection::DLambda, LaplacianSelection::DbarMu];

#[derive(Clone, Debug)]
pub struct ReportOptions {
    pub seed: u64,
    /// Maximum width of isolating intervals for irrational eigenvalues.
    pub width: Rational,
    /// Invariant cohomology is known to be de Rham cohomology of the quotient.
    pub cohomology_is_topological: bool,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions { seed: 0, width: default_width(), cohomology_is_topological: false }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Conventions {
    pub metric: &'static str,
    pub volume: &'static str,
    pub lefschetz: &'static str,
    pub dual_j: &'static str,
    pub scope: &'static str,
}

const CONVENTIONS: Conventions = Conventions {
    metric: "g(X,Y) = ω(JX,Y)",
    volume: "vol = ω^n/n!",
    lefschetz: "[Λ,L] = H = (n-k) on k-forms",
    dual_j: "J acts on 1-forms by α ↦ -α∘J; 𝒥 = Σ i^{p-q} Π^{p,q}",
    scope: "left-invariant forms",
};

const CAVEAT: &str = "All spaces are computed on left-invariant forms. On a compact quotient the invariant \
complex computes de Rham cohomology only for algebras where the inclusion is a quasi-isomorphism (e.g. \
nilpotent with rational structure constants); harmonic spaces of the quotient may be larger than their \
invariant parts.";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NijenhuisEntry {
    /// 1-based basis indices `(i, j)` with `i < j`.
    pub pair: (usize, usize),
    /// Coordinates of `N(ξᵢ, ξⱼ)`.
    pub value: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentitySummary {
    pub total: usize,
    pub passed: usize,
    pub failed: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HodgeNumbersSummary {
    /// `h^{p,q}` indexed `[p][q]`.
    pub values: Vec<Vec<usize>>,
    pub cross_checks_agree: bool,
    pub diamond_symmetric: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HodgeReport {
    pub schema: u32,
    pub manifold: String,
    pub dimension: usize,
    pub conventions: Conventions,
    pub betti_label: &'static str,
    pub b: Vec<usize>,
    pub h: HodgeNumbersSummary,
    pub harmonic: Vec<HarmonicSpace>,
    pub decomposition: Vec<DecompositionVerdict>,
    pub pure_full: Vec<PureFullVerdict>,
    /// `kᵢ` for `1 ≤ i < n`: the Lefschetz isomorphism on d-harmonic forms.
    pub hlc: BTreeMap<String, bool>,
    pub hlc_audit: HlcAudit,
    pub non_hlc: Vec<NonHlcDefect>,
    pub b2_plus: Option<usize>,
    pub integrable: bool,
    pub nijenhuis: Vec<NijenhuisEntry>,
    pub mu_norms: MuNorms,
    pub spectral_gaps: Vec<SpectralResult>,
    pub membership: Vec<MembershipResult>,
    pub inequalities: Vec<InequalityAudit>,
    pub lemma_audits: Vec<LemmaAudit>,
    pub theorems: Vec<TheoremCheck>,
    pub identities: IdentitySummary,
    pub seed: u64,
    pub eig_width: String,
    pub caveat: &'static str,
}

impl HodgeReport {
    pub fn build(m: &AKManifold, opts: &ReportOptions) -> Result<HodgeReport, AnalysisError> {
        let dim = m.dim();
        let n = m.complex_dim();
        let width = &opts.width;
        let hodge = hodge_numbers(m);
        let d = HarmonicSelection::Laplacian(LaplacianSelection::D);
        let harmonic = (0..=dim).map(|k| harmonic_space(m, d, k)).collect::<Result<_, _>>()?;
        let decomposition = (0..=dim).map(|k| hodge_decomposition_check(m, k)).collect::<Result<_, _>>()?;
        let pure_full = (0..=dim).map(|k| pure_full_check(m, k)).collect::<Result<_, _>>()?;
        let audit = hlc_audit(m);
        let hlc = audit.degrees.iter().filter(|x| x.degree >= 1).map(|x| (format!("k{}", x.degree), x.lefschetz_d)).collect();
        let nij = m.nijenhuis();
        let nijenhuis = nij
            .nonzero_values()
            .iter()
            .map(|(&(i, j), v)| NijenhuisEntry { pair: (i, j), value: v.iter().map(format_rational).collect() })
            .collect();
        let mut spectral_gaps = Vec::new();
        for sel in REPORTED_SPECTRA {
            for k in 0..=dim {
                spectral_gaps.push(spectral_gap(m, sel, k, width)?);
            }
        }
        let mut membership = Vec::new();
        let mut inequalities = Vec::new();
        let mut lemma_audits = Vec::new();
        for k in 1..=n {
            for family in Family::ALL {
                membership.push(membership_constant(m, family, k, width)?);
            }
            for kind in InequalityKind::ALL {
                inequalities.push(inequality_audit(m, kind, k, opts.seed, width)?);
            }
            lemma_audits.push(lemma_l1_audit(m, k)?);
        }
        let suite = identity_suite(m, opts.seed);
        let identities = IdentitySummary {
            total: suite.entries.len(),
            passed: suite.entries.len() - suite.failures().count(),
            failed: suite.failures().map(|e| e.id.clone()).collect(),
        };
        Ok(HodgeReport {
            schema: REPORT_SCHEMA,
            manifold: m.name().to_string(),
            dimension: dim,
            conventions: CONVENTIONS,
            betti_label: if opts.cohomology_is_topological { "Betti numbers" } else { "invariant Betti numbers" },
            b: betti_numbers(m),
            h: HodgeNumbersSummary {
                cross_checks_agree: hodge.cross_checks_agree(),
                diamond_symmetric: hodge.diamond_symmetric(),
                values: hodge.h,
            },
            harmonic,
            decomposition,
            pure_full,
            hlc,
            non_hlc: audit.non_hlc.clone(),
            hlc_audit: audit,
            b2_plus: b2_plus(m),
            integrable: nij.is_zero(),
            nijenhuis,
            mu_norms: mu_norms(m, width)?,
            spectral_gaps,
            membership,
            inequalities,
            lemma_audits,
            theorems: theorem_audit(m, width)?,
            identities,
            seed: opts.seed,
            eig_width: format_rational(width),
            caveat: CAVEAT,
        })
    }

    /// Compact JSON.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    /// Descriptions of every internal inconsistency: a failed identity, an
    /// asserted implication whose conclusion fails, or a failed energy identity.
    pub fn consistency_failures(&self) -> Vec<String> {
        let mut out: Vec<String> = self.identities.failed.iter().map(|id| format!("identity {id} failed")).collect();
        for t in self.theorems.iter().filter(|t| !t.consistent) {
            out.push(format!("{} (degree {:?}): premise holds but conclusion fails", t.id, t.degree));
        }
        for a in self.inequalities.iter().filter(|a| !a.consistent()) {
            out.push(format!("inequality {:?} in degree {} has negative slack", a.kind, a.degree));
        }
        for l in self.lemma_audits.iter().filter(|l| !l.holds()) {
            out.push(format!("energy identity fails in degree {}", l.degree));
        }
        if !self.h.cross_checks_agree {
            out.push("bidegree harmonic counts disagree between operators".to_string());
        }
        out
    }

    pub fn to_markdown(&self) -> String {
        let n = self.dimension / 2;
        let mut s = String::new();
        let _ = writeln!(s, "# Hodge report for `{}` (real dimension {})\n", self.manifold, self.dimension);
        let _ = writeln!(s, "Betti numbers: {:?}\n", self.b);
        let _ = writeln!(s, "## Hodge numbers h^(p,q) of d-harmonic forms\n");
        let _ = writeln!(s, "Rows are degrees k, columns p - q.\n");
        let header: Vec<String> = (-(n as i64)..=n as i64).map(|c| c.to_string()).collect();
        let _ = writeln!(s, "| k | {} |", header.join(" | "));
        let _ = writeln!(s, "|---|{}", "---|".repeat(header.len()));
        for k in 0..=self.dimension {
            let cells: Vec<String> = (-(n as i64)..=n as i64)
                .map(|c| {
                    // p - q = c, p + q = k
                    let twice_p = k as i64 + c;
                    if twice_p < 0 || twice_p % 2 != 0 {
                        return String::new();
                    }
                    let p = (twice_p / 2) as usize;
                    match k.checked_sub(p) {
                        Some(q) if p <= n && q <= n => self.h.values[p][q].to_string(),
                        _ => String::new(),
                    }
                })
                .collect();
            let _ = writeln!(s, "| {k} | {} |", cells.join(" | "));
        }
        let _ = writeln!(s, "\n## Verdicts\n");
        let _ = writeln!(s, "| k | b | Σh | decomposition | pure | full | HLC |");
        let _ = writeln!(s, "|---|---|---|---|---|---|---|");
        for k in 0..=self.dimension {
            let dec = &self.decomposition[k];
            let pf = &self.pure_full[k];
            let hlc = self.hlc.get(&format!("k{k}")).map_or("-".to_string(), |v| v.to_string());
            let _ = writeln!(
                s,
                "| {k} | {} | {} | {} | {} | {} | {hlc} |",
                self.b[k], dec.bigraded_dim, dec.holds, pf.pure, pf.full
            );
        }
        let _ = writeln!(s, "\nIntegrable: {}. b2+: {}.", self.integrable, self.b2_plus.map_or("-".to_string(), |b| b.to_string()));
        let _ = writeln!(
            s,
            "μ norms squared on 1-forms: operator {}, real operator {}, max coefficient {}; equal to 1/4: {}.",
            self.mu_norms.operator_norm_sq,
            self.mu_norms.real_operator_norm_sq,
            format_rational(&self.mu_norms.max_coefficient_sq),
            if self.mu_norms.equal_to_quarter.is_empty() { "none".to_string() } else { self.mu_norms.equal_to_quarter.join(", ") }
        );
        let _ = writeln!(s, "\n## Spectral constants\n");
        let _ = writeln!(s, "| family | k | subspace dim | constant | threshold | status |");
        let _ = writeln!(s, "|---|---|---|---|---|---|");
        for r in &self.membership {
            let _ = writeln!(
                s,
                "| {:?} | {} | {} | {} | {} | {} |",
                r.family,
                r.degree,
                r.subspace_dim,
                r.best_constant,
                r.threshold.as_ref().map_or("-".to_string(), format_rational),
                r.threshold_status
            );
        }
        let _ = writeln!(s, "\n## Theorem audit\n");
        let _ = writeln!(s, "| id | k | premise | conclusion | consistent | note |");
        let _ = writeln!(s, "|---|---|---|---|---|---|");
        for t in &self.theorems {
            let _ = writeln!(
                s,
                "| {} | {} | {} | {} | {} | {} |",
                t.id,
                t.degree.map_or("-".to_string(), |k| k.to_string()),
                t.premise.map_or("-".to_string(), |p| p.to_string()),
                t.conclusion,
                t.consistent,
                t.note.as_deref().unwrap_or("")
            );
        }
        let _ = writeln!(s, "\nIdentities: {}/{} pass.", self.identities.passed, self.identities.total);
        let _ = writeln!(s, "\n_{}_", self.caveat);
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_report() {
        let m = crate::harmonic::tests::kt();
        let r = HodgeReport::build(&m, &ReportOptions::default()).unwrap();
        let json = r.to_json();
        assert!(json.contains(r#""b":[1,3,4,3,1]"#));
        assert!(json.contains(r#""hlc":{"k1":false}"#));
        assert!(r.consistency_failures().is_empty(), "{:?}", r.consistency_failures());
        assert_eq!(r.nijenhuis[0].pair, (1, 2));
        assert!(r.to_markdown().contains("| 2 | 0 |  | 3 |  | 0 |"));
    }
}
