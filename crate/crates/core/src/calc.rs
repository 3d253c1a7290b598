//! Laplacians, identity suites for the operator calculus, and orthogonal
//! decomposition checks.

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::AnalysisError;
use crate::exact::pencil::psd_witness;
use crate::exact::{matrix::same_span, matrix::span_contains, ExactMatrix, Gq, Rational};
use crate::exterior::FormValue;
use crate::operator::{binomial, GradedOperator};
use crate::structure::{convention_factor, AKManifold, ConventionFactor, StructureOps};

/// The Laplacians used throughout, built once per manifold.
#[derive(Clone, Debug)]
pub struct Laplacians {
    pub d: GradedOperator,
    pub d_lambda: GradedOperator,
    pub del: GradedOperator,
    pub delbar: GradedOperator,
    pub mu: GradedOperator,
    pub mubar: GradedOperator,
    /// `Δ_{∂̄+μ}`
    pub delbar_mu: GradedOperator,
    /// `Δ_{∂+μ̄}`
    pub del_mubar: GradedOperator,
    /// `Δ_{μ+μ̄}`
    pub mu_mubar: GradedOperator,
    /// `Δ_∂̄ + Δ_μ`
    pub delbar_plus_mu: GradedOperator,
    /// `Δ_μ + Δ_μ̄`
    pub mu_plus_mubar: GradedOperator,
}

impl Laplacians {
    pub fn build(m: &AKManifold) -> Laplacians {
        let o = m.ops();
        let lap = |op: &GradedOperator| m.laplacian(op);
        let delbar = lap(&o.delbar);
        let mu = lap(&o.mu);
        let mubar = lap(&o.mubar);
        Laplacians {
            d: lap(&o.d).with_label("Δd"),
            d_lambda: lap(&o.d_lambda).with_label("ΔdΛ"),
            del: lap(&o.del).with_label("Δ∂"),
            delbar_mu: lap(&o.delbar.add(&o.mu)).with_label("Δ(∂̄+μ)"),
            del_mubar: lap(&o.del.add(&o.mubar)).with_label("Δ(∂+μ̄)"),
            mu_mubar: lap(&o.mu.add(&o.mubar)).with_label("Δ(μ+μ̄)"),
            delbar_plus_mu: delbar.add(&mu).with_label("Δ∂̄+Δμ"),
            mu_plus_mubar: mu.add(&mubar).with_label("Δμ+Δμ̄"),
            delbar: delbar.with_label("Δ∂̄"),
            mu: mu.with_label("Δμ"),
            mubar: mubar.with_label("Δμ̄"),
        }
    }
}

/// Operators with a Laplacian that the CLI and spectral routines can select.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LaplacianSelection {
    D,
    DLambda,
    Dbar,
    Del,
    Mu,
    Mubar,
    DbarMu,
    DelMubar,
}

impl LaplacianSelection {
    pub const ALL: [LaplacianSelection; 8] = [
        LaplacianSelection::D,
        LaplacianSelection::DLambda,
        LaplacianSelection::Dbar,
        LaplacianSelection::Del,
        LaplacianSelection::Mu,
        LaplacianSelection::Mubar,
        LaplacianSelection::DbarMu,
        LaplacianSelection::DelMubar,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LaplacianSelection::D => "d",
            LaplacianSelection::DLambda => "dLambda",
            LaplacianSelection::Dbar => "dbar",
            LaplacianSelection::Del => "del",
            LaplacianSelection::Mu => "mu",
            LaplacianSelection::Mubar => "mubar",
            LaplacianSelection::DbarMu => "dbar-mu",
            LaplacianSelection::DelMubar => "del-mubar",
        }
    }

    pub fn parse(s: &str) -> Result<Self, AnalysisError> {
        Self::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| AnalysisError::UnknownOperator(s.to_string()))
    }

    pub fn laplacian(self, m: &AKManifold) -> &GradedOperator {
        let l = m.laplacians();
        match self {
            LaplacianSelection::D => &l.d,
            LaplacianSelection::DLambda => &l.d_lambda,
            LaplacianSelection::Dbar => &l.delbar,
            LaplacianSelection::Del => &l.del,
            LaplacianSelection::Mu => &l.mu,
            LaplacianSelection::Mubar => &l.mubar,
            LaplacianSelection::DbarMu => &l.delbar_mu,
            LaplacianSelection::DelMubar => &l.del_mubar,
        }
    }

    /// The operator whose Laplacian this is.
    pub fn operator(self, m: &AKManifold) -> GradedOperator {
        let o = m.ops();
        match self {
            LaplacianSelection::D => o.d.clone(),
            LaplacianSelection::DLambda => o.d_lambda.clone(),
            LaplacianSelection::Dbar => o.delbar.clone(),
            LaplacianSelection::Del => o.del.clone(),
            LaplacianSelection::Mu => o.mu.clone(),
            LaplacianSelection::Mubar => o.mubar.clone(),
            LaplacianSelection::DbarMu => o.delbar.add(&o.mu),
            LaplacianSelection::DelMubar => o.del.add(&o.mubar),
        }
    }
}

/// Common kernel of the degree-`k` blocks of `ops` (all of `Λ^k` when every
/// block vanishes for range reasons).
pub fn joint_kernel(m: &AKManifold, k: usize, ops: &[&GradedOperator]) -> Vec<Vec<Gq>> {
    let size = m.basis().dim(k);
    let stacked = ops.iter().filter_map(|op| op.block(k)).fold(None::<ExactMatrix>, |acc, b| match acc {
        None => Some(b.clone()),
        Some(a) => Some(a.vstack(b)),
    });
    match stacked {
        Some(s) => s.nullspace(),
        None => (0..size).map(|i| unit(size, i)).collect(),
    }
}

pub(crate) fn unit(size: usize, i: usize) -> Vec<Gq> {
    let mut v = vec![Gq::zero(); size];
    v[i] = Gq::one();
    v
}

/// Where an identity first fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Defect {
    /// First differing matrix entry `lhs - rhs` on source degree `degree`.
    Entry { degree: usize, row: usize, col: usize, value: Gq },
    /// First differing coordinate when both sides are applied to the
    /// `vector`-th test form of degree `degree`.
    Vector { degree: usize, vector: usize, coordinate: usize, value: Gq },
    /// Two subspaces that should agree have different spans.
    Span { degree: usize, left_dim: usize, right_dim: usize },
    Message { degree: Option<usize>, message: String },
}

impl Defect {
    fn entry((degree, row, col, value): (usize, usize, usize, Gq)) -> Defect {
        Defect::Entry { degree, row, col, value }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityEntry {
    pub id: String,
    pub anchor: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub defect: Option<Defect>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentitySuiteReport {
    pub suite: String,
    pub manifold: String,
    pub seed: u64,
    pub entries: Vec<IdentityEntry>,
}

impl IdentitySuiteReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.status == Status::Pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &IdentityEntry> {
        self.entries.iter().filter(|e| e.status == Status::Fail)
    }

    pub fn entry(&self, id: &str) -> Option<&IdentityEntry> {
        self.entries.iter().find(|e| e.id == id)
    }

    pub fn to_markdown(&self) -> String {
        let mut s = format!("# Identity suite `{}` on `{}`\n\n| id | identity | status |\n|---|---|---|\n", self.suite, self.manifold);
        for e in &self.entries {
            let status = match (&e.status, &e.defect) {
                (Status::Pass, _) => "pass".to_string(),
                (Status::Fail, Some(d)) => format!("FAIL {}", serde_json::to_string(d).unwrap_or_default()),
                (Status::Fail, None) => "FAIL".to_string(),
            };
            s.push_str(&format!("| {} | `{}` | {} |\n", e.id, e.anchor, status));
        }
        let failed = self.failures().count();
        s.push_str(&format!("\n{} identities, {} failed\n", self.entries.len(), failed));
        s
    }
}

struct Suite {
    entries: Vec<IdentityEntry>,
}

impl Suite {
    fn push(&mut self, id: &str, anchor: &str, defect: Option<Defect>, note: Option<String>) {
        let status = if defect.is_none() { Status::Pass } else { Status::Fail };
        self.entries.push(IdentityEntry { id: id.into(), anchor: anchor.into(), status, defect, note });
    }

    fn eq(&mut self, id: &str, anchor: &str, lhs: &GradedOperator, rhs: &GradedOperator) {
        let defect = if lhs.map() != rhs.map() {
            Some(Defect::Message { degree: None, message: format!("degree maps differ: {:?} vs {:?}", lhs.map(), rhs.map()) })
        } else {
            lhs.first_difference(rhs).map(Defect::entry)
        };
        self.push(id, anchor, defect, None);
    }

    fn zero(&mut self, id: &str, anchor: &str, op: &GradedOperator) {
        self.eq(id, anchor, op, &GradedOperator::zero(op.n(), op.map()));
    }

    /// Restricted equality: both operators applied to each listed test vector.
    fn eq_on(&mut self, id: &str, anchor: &str, lhs: &GradedOperator, rhs: &GradedOperator, tests: &[(usize, Vec<Vec<Gq>>)]) {
        let defect = tests.iter().find_map(|(k, vs)| {
            vs.iter().enumerate().find_map(|(vi, v)| {
                let a = lhs.apply_vec(*k, v);
                let b = rhs.apply_vec(*k, v);
                vec_defect(*k, vi, a.as_deref(), b.as_deref())
            })
        });
        self.push(id, anchor, defect, None);
    }
}

fn vec_defect(degree: usize, vector: usize, a: Option<&[Gq]>, b: Option<&[Gq]>) -> Option<Defect> {
    let zero_diff = |x: &[Gq], sign: i64| {
        x.iter().position(|c| !c.is_zero()).map(|coordinate| Defect::Vector {
            degree,
            vector,
            coordinate,
            value: &x[coordinate] * &Gq::from_int(sign),
        })
    };
    match (a, b) {
        (None, None) => None,
        (Some(a), None) => zero_diff(a, 1),
        (None, Some(b)) => zero_diff(b, -1),
        (Some(a), Some(b)) => a.iter().zip(b).position(|(x, y)| x != y).map(|coordinate| Defect::Vector {
            degree,
            vector,
            coordinate,
            value: &a[coordinate] - &b[coordinate],
        }),
    }
}

fn factorial(n: usize) -> Rational {
    (1..=n).fold(Rational::one(), |acc, i| acc * Rational::from_integer((i as i64).into()))
}

fn sign(odd: bool) -> Gq {
    if odd {
        Gq::from_int(-1)
    } else {
        Gq::one()
    }
}

/// Graded Jacobi defect `Σ_cyc (-1)^{|C||A|} [A, [B, C]]`.
pub fn graded_jacobi(a: &GradedOperator, b: &GradedOperator, c: &GradedOperator) -> GradedOperator {
    let deg = |x: &GradedOperator| x.shift().expect("Jacobi operands shift degrees") as i64;
    let (da, db, dc) = (deg(a), deg(b), deg(c));
    let t1 = a.commutator(&b.commutator(c)).scale(&sign((dc * da) % 2 != 0));
    let t2 = b.commutator(&c.commutator(a)).scale(&sign((da * db) % 2 != 0));
    let t3 = c.commutator(&a.commutator(b)).scale(&sign((db * dc) % 2 != 0));
    t1.add(&t2).add(&t3)
}

/// Number of seeded triples used by the graded Jacobi check.
pub const JACOBI_TRIPLES: usize = 8;

/// Evaluates every identity of the operator calculus on `m`. `seed` drives
/// the choice of graded-Jacobi triples.
pub fn identity_suite(m: &AKManifold, seed: u64) -> IdentitySuiteReport {
    let o = m.ops();
    let lap = m.laplacians();
    let dim = m.dim();
    let n = m.complex_dim();
    let i = Gq::i();
    let neg_i = -Gq::i();
    let quarter = Gq::from_ratio(1, 4);
    let mut s = Suite { entries: Vec::new() };

    // Lefschetz sl2
    s.eq("sl2.lambda_l", "[Λ,L]=H", &o.lambda.commutator(&o.l), &o.h);
    s.eq("sl2.h_l", "[H,L]=-2L", &o.h.commutator(&o.l), &o.l.scale(&Gq::from_int(-2)));
    s.eq("sl2.h_lambda", "[H,Λ]=2Λ", &o.h.commutator(&o.lambda), &o.lambda.scale(&Gq::from_int(2)));
    s.eq("lefschetz.lambda_star", "Λ=∗⁻¹L∗", &o.star_inv.compose(&o.l).compose(&o.star), &o.lambda);
    s.zero("lefschetz.l_d", "[L,d]=0", &o.l.commutator(&o.d));
    let mixed = o.d_star.compose(&o.d).add(&o.d_lambda_star.compose(&o.d_lambda));
    s.zero("lefschetz.mixed_laplacian_l", "[d*d+dΛ*dΛ,L]=0", &mixed.commutator(&o.l));
    s.zero("lefschetz.mixed_laplacian_lambda", "[d*d+dΛ*dΛ,Λ]=0", &mixed.commutator(&o.lambda));
    let prim_defect = (0..=n).find_map(|k| {
        let found = joint_kernel(m, k, &[&o.lambda]).len();
        let expected = binomial(dim, k) - if k >= 2 { binomial(dim, k - 2) } else { 0 };
        (found != expected).then(|| Defect::Span { degree: k, left_dim: found, right_dim: expected })
    });
    s.push("lefschetz.primitive_dims", "dim Pᵏ = C(2n,k) - C(2n,k-2) for k ≤ n", prim_defect, None);

    // bidegree split of d
    s.eq("split.sum", "d=μ+∂+∂̄+μ̄", &o.mu.add(&o.del).add(&o.delbar).add(&o.mubar), &o.d);
    s.zero("dsq.d", "d²=0", &o.d.compose(&o.d));
    s.zero("dsq.mu_mu", "μ²=0", &o.mu.compose(&o.mu));
    s.zero("dsq.mu_del", "μ∂+∂μ=0", &o.mu.compose(&o.del).add(&o.del.compose(&o.mu)));
    s.zero(
        "dsq.del_del",
        "∂²+μ∂̄+∂̄μ=0",
        &o.del.compose(&o.del).add(&o.mu.compose(&o.delbar)).add(&o.delbar.compose(&o.mu)),
    );
    s.zero(
        "dsq.mixed",
        "∂∂̄+∂̄∂+μμ̄+μ̄μ=0",
        &o.del
            .compose(&o.delbar)
            .add(&o.delbar.compose(&o.del))
            .add(&o.mu.compose(&o.mubar))
            .add(&o.mubar.compose(&o.mu)),
    );
    s.zero(
        "dsq.delbar_delbar",
        "∂̄²+μ̄∂+∂μ̄=0",
        &o.delbar.compose(&o.delbar).add(&o.mubar.compose(&o.del)).add(&o.del.compose(&o.mubar)),
    );
    s.zero("dsq.mubar_delbar", "μ̄∂̄+∂̄μ̄=0", &o.mubar.compose(&o.delbar).add(&o.delbar.compose(&o.mubar)));
    s.zero("dsq.mubar_mubar", "μ̄²=0", &o.mubar.compose(&o.mubar));

    // commutators with L and Λ
    s.zero("comm.l_mubar", "[L,μ̄]=0", &o.l.commutator(&o.mubar));
    s.zero("comm.l_mu", "[L,μ]=0", &o.l.commutator(&o.mu));
    s.zero("comm.lambda_mubar_star", "[Λ,μ̄*]=0", &o.lambda.commutator(&o.mubar_star));
    s.zero("comm.lambda_mu_star", "[Λ,μ*]=0", &o.lambda.commutator(&o.mu_star));
    s.zero("comm.l_delbar", "[L,∂̄]=0", &o.l.commutator(&o.delbar));
    s.zero("comm.l_del", "[L,∂]=0", &o.l.commutator(&o.del));
    s.zero("comm.lambda_delbar_star", "[Λ,∂̄*]=0", &o.lambda.commutator(&o.delbar_star));
    s.zero("comm.lambda_del_star", "[Λ,∂*]=0", &o.lambda.commutator(&o.del_star));
    s.eq("comm.l_mubar_star", "[L,μ̄*]=iμ", &o.l.commutator(&o.mubar_star), &o.mu.scale(&i));
    s.eq("comm.l_mu_star", "[L,μ*]=-iμ̄", &o.l.commutator(&o.mu_star), &o.mubar.scale(&neg_i));
    s.eq("comm.lambda_mubar", "[Λ,μ̄]=iμ*", &o.lambda.commutator(&o.mubar), &o.mu_star.scale(&i));
    s.eq("comm.lambda_mu", "[Λ,μ]=-iμ̄*", &o.lambda.commutator(&o.mu), &o.mubar_star.scale(&neg_i));
    s.eq("comm.l_delbar_star", "[L,∂̄*]=-i∂", &o.l.commutator(&o.delbar_star), &o.del.scale(&neg_i));
    s.eq("comm.l_del_star", "[L,∂*]=i∂̄", &o.l.commutator(&o.del_star), &o.delbar.scale(&i));
    s.eq("comm.lambda_delbar", "[Λ,∂̄]=-i∂*", &o.lambda.commutator(&o.delbar), &o.del_star.scale(&neg_i));
    s.eq("comm.lambda_del", "[Λ,∂]=i∂̄*", &o.lambda.commutator(&o.del), &o.delbar_star.scale(&i));

    // mixed commutators
    s.zero("mixed.mubar_mu_star", "[μ̄,μ*]=0", &o.mubar.commutator(&o.mu_star));
    s.zero("mixed.mu_mubar_star", "[μ,μ̄*]=0", &o.mu.commutator(&o.mubar_star));
    s.eq("mixed.mubar_del_star", "[μ̄,∂*]=[∂̄,μ*]", &o.mubar.commutator(&o.del_star), &o.delbar.commutator(&o.mu_star));
    s.eq("mixed.mu_delbar_star", "[μ,∂̄*]=[∂,μ̄*]", &o.mu.commutator(&o.delbar_star), &o.del.commutator(&o.mubar_star));
    s.eq(
        "mixed.del_delbar_star",
        "[∂,∂̄*]=[μ̄*,∂̄]+[μ,∂*]",
        &o.del.commutator(&o.delbar_star),
        &o.mubar_star.commutator(&o.delbar).add(&o.mu.commutator(&o.del_star)),
    );
    s.eq(
        "mixed.delbar_del_star",
        "[∂̄,∂*]=[μ*,∂]+[μ̄,∂̄*]",
        &o.delbar.commutator(&o.del_star),
        &o.mu_star.commutator(&o.del).add(&o.mubar.commutator(&o.delbar_star)),
    );

    // Laplacian identities
    s.eq("lap.mu_mubar_split", "Δ(μ̄+μ)=Δμ̄+Δμ", &lap.mu_mubar, &lap.mu_plus_mubar);
    s.eq("lap.balance", "Δ∂̄+Δμ=Δ∂+Δμ̄", &lap.delbar_plus_mu, &lap.del.add(&lap.mubar));
    let expansion = lap
        .delbar_plus_mu
        .add(&o.mubar.commutator(&o.del_star))
        .add(&o.mu.commutator(&o.delbar_star))
        .add(&o.del.commutator(&o.delbar_star))
        .add(&o.delbar.commutator(&o.del_star))
        .scale(&Gq::from_int(2));
    s.eq("lap.d_expansion", "Δd=2(Δ∂̄+Δμ+[μ̄,∂*]+[μ,∂̄*]+[∂,∂̄*]+[∂̄,∂*])", &lap.d, &expansion);
    let quarter_sum = lap.d.add(&lap.d_lambda).scale(&quarter);
    s.eq("lap.delbar_mu_quarter", "Δ(∂̄+μ)=¼(Δd+ΔdΛ)", &lap.delbar_mu, &quarter_sum);
    s.eq("lap.del_mubar_quarter", "Δ(∂+μ̄)=¼(Δd+ΔdΛ)", &lap.del_mubar, &quarter_sum);
    let one_forms: Vec<(usize, Vec<Vec<Gq>>)> = vec![(1, (0..dim).map(|r| unit(dim, r)).collect())];
    s.eq_on("lap.one_forms_quarter", "(Δ∂̄+Δμ)|Ω¹=¼(Δd+ΔdΛ)|Ω¹", &lap.delbar_plus_mu, &quarter_sum, &one_forms);
    for (name, l, op) in [
        ("d", &lap.d, &o.d),
        ("d_lambda", &lap.d_lambda, &o.d_lambda),
        ("del", &lap.del, &o.del),
        ("delbar", &lap.delbar, &o.delbar),
        ("mu", &lap.mu, &o.mu),
        ("mubar", &lap.mubar, &o.mubar),
    ] {
        let adj = m.adjoint(op);
        let mut self_adjoint = None;
        let mut psd = None;
        let mut kernel = None;
        for k in 0..=dim {
            let blk = l.block(k).expect("Laplacian block");
            let gl = m.gram(k).mul(blk);
            if self_adjoint.is_none() && gl != gl.conj_transpose() {
                self_adjoint = Some(Defect::Message { degree: Some(k), message: "G·Δ is not Hermitian".into() });
            }
            if psd.is_none() {
                if let Some((_, v)) = psd_witness(&gl) {
                    psd = Some(Defect::Message { degree: Some(k), message: format!("negative quadratic value {v}") });
                }
            }
            let ka = joint_kernel(m, k, &[l]);
            let kb = joint_kernel(m, k, &[op, &adj]);
            if kernel.is_none() && !same_span(blk.cols(), &ka, &kb) {
                kernel = Some(Defect::Span { degree: k, left_dim: ka.len(), right_dim: kb.len() });
            }
        }
        s.push(&format!("lap.self_adjoint.{name}"), "G_kΔ = (G_kΔ)ᴴ", self_adjoint, None);
        s.push(&format!("lap.psd.{name}"), "⟨Δα,α⟩ ≥ 0", psd, None);
        s.push(&format!("lap.kernel.{name}"), "ker Δδ = ker δ ∩ ker δ*", kernel, None);
    }
    let w = m.vector(m.omega(), 2);
    let lw = lap.d.apply_vec(2, &w).expect("degree 2 block");
    s.push("harmonic.omega", "Δd ω = 0", vec_defect(2, 0, Some(&lw), Some(&vec![Gq::zero(); lw.len()])), None);

    // d^Λ
    s.zero("dlambda.square", "(dΛ)²=0", &o.d_lambda.compose(&o.d_lambda));
    s.eq(
        "dlambda.cal_j",
        "dΛ=-∗𝒥⁻¹d𝒥∗",
        &o.d_lambda,
        &o.star.compose(&o.cal_j_inv).compose(&o.d).compose(&o.cal_j).compose(&o.star).neg(),
    );
    let odd = StructureOps::degree_sign(dim, |k| k % 2 == 1);
    let even = StructureOps::degree_sign(dim, |k| k % 2 == 0);
    s.eq("dlambda.symplectic_star", "dΛ=(-1)^{k+1}∗s d ∗s", &o.d_lambda, &o.star_s.compose(&o.d).compose(&o.star_s).compose(&odd));
    s.eq("dlambda_star.cal_j", "dΛ*=𝒥⁻¹d𝒥", &o.d_lambda_star, &o.cal_j_inv.compose(&o.d).compose(&o.cal_j));
    s.eq("dlambda_star.l_dstar", "dΛ*=[L,d*]", &o.d_lambda_star, &o.l.commutator(&o.d_star));
    s.eq(
        "dlambda_star.symplectic_star",
        "dΛ*=(-1)^k ∗s d* ∗s",
        &o.d_lambda_star,
        &o.star_s.compose(&o.d_star).compose(&o.star_s).compose(&even),
    );
    let dl_omega = m.apply(&o.d_lambda, m.omega());
    s.push(
        "dlambda.omega",
        "dΛω=0",
        (!dl_omega.is_zero()).then(|| Defect::Message { degree: Some(2), message: format!("dΛω = {dl_omega}") }),
        None,
    );

    // adjoints from star formulas
    let conj = |x: &GradedOperator| o.star.compose(x).compose(&o.star).neg();
    s.eq("adjoint.delbar", "∂̄*=-∗∂∗", &o.delbar_star, &conj(&o.del));
    s.eq("adjoint.del", "∂*=-∗∂̄∗", &o.del_star, &conj(&o.delbar));
    s.eq("adjoint.mu", "μ*=-∗μ̄∗", &o.mu_star, &conj(&o.mubar));
    s.eq("adjoint.mubar", "μ̄*=-∗μ∗", &o.mubar_star, &conj(&o.mu));
    s.eq("adjoint.d", "d*=-∗d∗", &o.d_star, &conj(&o.d));
    s.eq("adjoint.l", "L*=Λ", &m.adjoint(&o.l), &o.lambda);

    // Hodge star
    let star_sq = StructureOps::degree_sign(dim, |k| (k * (dim - k)) % 2 == 0);
    s.eq("star.involution", "∗∗=(-1)^{k(2n-k)}", &o.star.compose(&o.star), &star_sq);
    let iso = (0..=dim).find_map(|k| {
        let st = o.star.block(k).expect("star block");
        let lhs = st.conj_transpose().mul(m.gram(dim - k)).mul(st);
        (lhs != *m.gram(k)).then(|| Defect::Message { degree: Some(k), message: "∗ᴴG∗ ≠ G".into() })
    });
    s.push("star.isometry", "⟨∗α,∗β⟩=⟨α,β⟩", iso, None);
    let defining = (0..=dim).find_map(|k| {
        let mons = m.basis().monomials(k);
        for (a, ma) in mons.iter().enumerate() {
            let ea = FormValue::monomial(dim, *ma, Gq::one());
            for (b, mb) in mons.iter().enumerate() {
                let eb = FormValue::monomial(dim, *mb, Gq::one());
                let lhs = ea.wedge(&m.apply(&o.star, &eb.conj()));
                let rhs = m.volume().scale(&m.gram(k)[(b, a)]);
                if lhs != rhs {
                    return Some(Defect::Entry { degree: k, row: a, col: b, value: Gq::one() });
                }
            }
        }
        None
    });
    s.push("star.defining", "α∧∗β̄=⟨α,β⟩ωⁿ/n!", defining, None);
    let one = FormValue::constant(dim, Gq::one());
    let star_one = m.apply(&o.star, &one);
    s.push(
        "star.one",
        "∗1=ωⁿ/n!",
        (star_one != *m.volume()).then(|| Defect::Message { degree: Some(0), message: format!("∗1 = {star_one}") }),
        None,
    );
    let star_bideg = (0..=dim).find_map(|k| {
        let st = o.star.block(k).expect("star block");
        m.bidegree_range(k).find_map(|p| {
            let q = k - p;
            let lhs = st.mul(o.projection_block(k, p).expect("projection"));
            let rhs = o.projection_block(dim - k, n - q).expect("projection").mul(st);
            (lhs != rhs).then(|| Defect::Message { degree: Some(k), message: format!("∗Π^({p},{q}) ≠ Π^({},{})∗", n - q, n - p) })
        })
    });
    s.push("star.bidegree", "∗Π^{p,q}=Π^{n-q,n-p}∗", star_bideg, None);

    // symplectic star
    s.eq("sstar.involution", "∗s∗s=1", &o.star_s.compose(&o.star_s), &GradedOperator::identity(dim));
    let sstar_one = m.apply(&o.star_s, &one);
    s.push(
        "sstar.one",
        "∗s1=ωⁿ/n!",
        (sstar_one != *m.volume()).then(|| Defect::Message { degree: Some(0), message: format!("∗s1 = {sstar_one}") }),
        None,
    );
    let primitive_defect = (0..=n).find_map(|k| {
        let coeff = sign((k * (k + 1) / 2) % 2 == 1).scale(&factorial(n - k).recip());
        let lp = o.l.pow(n - k);
        joint_kernel(m, k, &[&o.lambda]).iter().enumerate().find_map(|(vi, b)| {
            let lhs = o.star_s.apply_vec(k, b);
            let rhs = lp.apply_vec(k, b).map(|v| v.iter().map(|x| x * &coeff).collect::<Vec<_>>());
            vec_defect(k, vi, lhs.as_deref(), rhs.as_deref())
        })
    });
    s.push("sstar.primitive", "∗sB=(-1)^{k(k+1)/2}/(n-k)! L^{n-k}B on ker Λ", primitive_defect, None);

    // 𝒥 and the bidegree projections
    let j_sq = StructureOps::degree_sign(dim, |k| k % 2 == 0);
    s.eq("calj.square", "𝒥²=(-1)^k", &o.cal_j.compose(&o.cal_j), &j_sq);
    let calj_from_proj = GradedOperator::from_fn("Σi^{p-q}Π", dim, crate::operator::DegreeMap::shift(0), |k, _| {
        m.bidegree_range(k).fold(ExactMatrix::zeros(binomial(dim, k), binomial(dim, k)), |acc, p| {
            let q = k - p;
            acc.add(&o.projection_block(k, p).expect("projection").scale(&Gq::one().mul_i_pow(p as i64 - q as i64)))
        })
    });
    s.eq("calj.projections", "𝒥=Σi^{p-q}Π^{p,q}", &o.cal_j, &calj_from_proj);
    let real = (0..=dim).find(|&k| !o.cal_j.block(k).expect("𝒥 block").is_real());
    s.push(
        "calj.real",
        "𝒥 is real",
        real.map(|k| Defect::Message { degree: Some(k), message: "non-real entry".into() }),
        None,
    );
    let jw = m.apply(&o.cal_j, m.omega());
    s.push(
        "calj.omega",
        "𝒥ω=ω",
        (jw != *m.omega()).then(|| Defect::Message { degree: Some(2), message: format!("𝒥ω = {jw}") }),
        None,
    );
    let mut idem = None;
    let mut orth = None;
    let mut part = None;
    let mut selfadj = None;
    for k in 0..=dim {
        let size = binomial(dim, k);
        let mut total = ExactMatrix::zeros(size, size);
        for p in m.bidegree_range(k) {
            let pp = o.projection_block(k, p).expect("projection");
            total = total.add(pp);
            if idem.is_none() && pp.mul(pp) != *pp {
                idem = Some(Defect::Message { degree: Some(k), message: format!("Π^({p},{})² ≠ Π", k - p) });
            }
            let g = m.gram(k).mul(pp);
            if selfadj.is_none() && g != g.conj_transpose() {
                selfadj = Some(Defect::Message { degree: Some(k), message: format!("Π^({p},{}) not Gram-orthogonal", k - p) });
            }
            for p2 in m.bidegree_range(k).filter(|&p2| p2 != p) {
                if orth.is_none() && !pp.mul(o.projection_block(k, p2).expect("projection")).is_zero() {
                    orth = Some(Defect::Message { degree: Some(k), message: format!("Π^{p}Π^{p2} ≠ 0") });
                }
            }
        }
        if part.is_none() && total != ExactMatrix::identity(size) {
            part = Some(Defect::Message { degree: Some(k), message: "ΣΠ ≠ 1".into() });
        }
    }
    s.push("proj.idempotent", "(Π^{p,q})²=Π^{p,q}", idem, None);
    s.push("proj.orthogonal", "Π^{p,q}Π^{p',q'}=0", orth, None);
    s.push("proj.partition", "Σ_{p+q=k}Π^{p,q}=1", part, None);
    s.push("proj.self_adjoint", "(Π^{p,q})*=Π^{p,q}", selfadj, None);
    let pw = o.projection(1, 1).map(|p| m.apply(&p, m.omega()));
    s.push(
        "proj.omega",
        "Π^{1,1}ω=ω",
        (pw.as_ref() != Some(m.omega())).then(|| Defect::Message { degree: Some(2), message: "ω is not of type (1,1)".into() }),
        None,
    );

    // Nijenhuis tensor versus μ, μ̄
    let nt = m.nijenhuis();
    let flags = [nt.is_zero(), o.mu.is_zero(), o.mubar.is_zero()];
    s.push(
        "nijenhuis.agreement",
        "N=0 ⟺ μ=0 ⟺ μ̄=0",
        (flags[0] != flags[1] || flags[1] != flags[2])
            .then(|| Defect::Message { degree: None, message: format!("N=0: {}, μ=0: {}, μ̄=0: {}", flags[0], flags[1], flags[2]) }),
        None,
    );
    s.push(
        "nijenhuis.anti_j",
        "N(JX,Y)=-JN(X,Y)",
        (!nt.anticommutes_with_j(m)).then(|| Defect::Message { degree: None, message: "fails on a basis pair".into() }),
        None,
    );
    let factor = convention_factor(&o.mu.add(&o.mubar), &nt.dual_derivation(m));
    let (defect, note) = match &factor {
        ConventionFactor::BothZero => (None, Some("both vanish".to_string())),
        ConventionFactor::Constant(c) => (None, Some(format!("measured factor {c}"))),
        ConventionFactor::Inconsistent => {
            (Some(Defect::Message { degree: None, message: "no single factor".into() }), None)
        }
    };
    s.push("nijenhuis.factor", "μ+μ̄=c·N* with constant c (c=-1/4)", defect, note);
    if let ConventionFactor::Constant(c) = &factor {
        let expected = Gq::from_ratio(-1, 4);
        if *c != expected {
            s.push(
                "nijenhuis.factor_value",
                "c=-1/4",
                Some(Defect::Message { degree: None, message: format!("measured {c}") }),
                None,
            );
        }
    }

    // commutators with powers of L on harmonic forms
    let harmonic_d: Vec<(usize, Vec<Vec<Gq>>)> = (0..=dim).map(|k| (k, joint_kernel(m, k, &[&lap.d]))).collect();
    let harmonic_dl: Vec<(usize, Vec<Vec<Gq>>)> = (0..=dim).map(|k| (k, joint_kernel(m, k, &[&lap.d_lambda]))).collect();
    let mut first_d = None;
    let mut first_dl = None;
    for l in 1..=n {
        let ll = o.l.pow(l);
        let ll1 = o.l.pow(l - 1);
        let lg = Gq::from_int(l as i64);
        let lhs = o.d_star.commutator(&ll);
        let rhs = ll1.compose(&o.d_lambda_star).scale(&-lg.clone());
        let mut sub = Suite { entries: Vec::new() };
        sub.eq_on("", "", &lhs, &rhs, &harmonic_d);
        if first_d.is_none() {
            first_d = sub.entries.pop().and_then(|e| e.defect);
        }
        let lhs = o.d_lambda.commutator(&ll);
        let rhs = ll1.compose(&o.d).scale(&lg);
        sub.eq_on("", "", &lhs, &rhs, &harmonic_dl);
        if first_dl.is_none() {
            first_dl = sub.entries.pop().and_then(|e| e.defect);
        }
    }
    s.push("lefschetz.dstar_power_harmonic", "[d*,L^l]h=-lL^{l-1}dΛ*h on 𝓗_d", first_d, None);
    s.push("lefschetz.dlambda_power_harmonic", "[dΛ,L^l]β=lL^{l-1}dβ on 𝓗_dΛ", first_dl, None);

    // graded Jacobi on seeded triples
    let pool: [(&str, &GradedOperator); 6] =
        [("∂", &o.del), ("∂̄", &o.delbar), ("μ", &o.mu), ("μ̄", &o.mubar), ("L", &o.l), ("Λ", &o.lambda)];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut names = Vec::new();
    let mut jac = None;
    for _ in 0..JACOBI_TRIPLES {
        let t: Vec<&(&str, &GradedOperator)> = (0..3).map(|_| pool.choose(&mut rng).expect("non-empty pool")).collect();
        names.push(format!("({},{},{})", t[0].0, t[1].0, t[2].0));
        let defect = graded_jacobi(t[0].1, t[1].1, t[2].1);
        if jac.is_none() && !defect.is_zero() {
            jac = defect.first_difference(&GradedOperator::zero(dim, defect.map())).map(Defect::entry);
        }
    }
    s.push("jacobi.graded", "Σ_cyc (-1)^{|C||A|}[A,[B,C]]=0", jac, Some(names.join(" ")));

    IdentitySuiteReport { suite: "operator-calculus".into(), manifold: m.name().into(), seed, entries: s.entries }
}

/// Kernel/image split of a self-adjoint operator in one degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompositionCheck {
    pub operator: String,
    pub degree: usize,
    pub dimension: usize,
    pub kernel_dim: usize,
    pub image_dim: usize,
    pub dims_add_up: bool,
    pub kernel_orthogonal_to_image: bool,
    #[serde(skip)]
    pub kernel: Vec<Vec<Gq>>,
}

impl DecompositionCheck {
    pub fn holds(&self) -> bool {
        self.dims_add_up && self.kernel_orthogonal_to_image
    }

    /// Whether the kernel equals the span of `other`.
    pub fn kernel_equals(&self, other: &[Vec<Gq>]) -> bool {
        same_span(self.dimension, &self.kernel, other)
    }
}

/// `Ωᵏ = ker T ⊕ im T` for a degree-preserving, Gram-self-adjoint `T`.
pub fn orthogonal_decomposition_check(m: &AKManifold, op: &GradedOperator, k: usize) -> Result<DecompositionCheck, AnalysisError> {
    let max = m.dim();
    if k > max {
        return Err(AnalysisError::DegreeOutOfRange { k, max });
    }
    let blk = match (op.shift(), op.block(k)) {
        (Some(0), Some(b)) => b,
        _ => return Err(AnalysisError::NotSelfAdjoint(op.label.clone(), k)),
    };
    let g = m.gram(k).mul(blk);
    if g != g.conj_transpose() {
        return Err(AnalysisError::NotSelfAdjoint(op.label.clone(), k));
    }
    let kernel = blk.nullspace();
    let image: Vec<Vec<Gq>> = blk.rref().pivots.iter().map(|&j| blk.column(j)).collect();
    let orthogonal = kernel.iter().all(|x| image.iter().all(|y| m.pair(k, x, y).is_zero()));
    let dimension = blk.cols();
    Ok(DecompositionCheck {
        operator: op.label.clone(),
        degree: k,
        dimension,
        kernel_dim: kernel.len(),
        image_dim: image.len(),
        dims_add_up: kernel.len() + image.len() == dimension,
        kernel_orthogonal_to_image: orthogonal,
        kernel,
    })
}

/// Whether `span(a) ⊆ span(b)` inside `Λᵏ`.
pub fn subspace_of(len: usize, a: &[Vec<Gq>], b: &[Vec<Gq>]) -> bool {
    span_contains(len, b, a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;
    use crate::lie::LieAlgebraData;
    use crate::structure::omega_from_terms;

    fn kt() -> AKManifold {
        let alg = LieAlgebraData::new(4, vec![(1, 4, vec![(2, int(1))])]).unwrap();
        let j = ExactMatrix::from_int_rows(&[&[0, 0, -1, 0], &[0, 0, 0, -1], &[1, 0, 0, 0], &[0, 1, 0, 0]]);
        let omega = omega_from_terms(4, &[(3, 1, int(1)), (4, 2, int(1))]).unwrap();
        AKManifold::new("kt", alg, j, omega).unwrap()
    }

    #[test]
    fn suite_passes_on_example() {
        let r = identity_suite(&kt(), 0);
        let bad: Vec<_> = r.failures().map(|e| (e.id.clone(), e.defect.clone())).collect();
        assert!(bad.is_empty(), "{bad:?}");
        assert!(r.entries.len() > 60);
        assert_eq!(r.entry("nijenhuis.factor").unwrap().note.as_deref(), Some("measured factor -1/4"));
    }

    #[test]
    fn laplacian_values_on_example() {
        let m = kt();
        let a2 = FormValue::alpha(4, &[2]);
        assert_eq!(m.apply(&m.laplacians().d, &a2), a2);
        assert_eq!(m.apply(&m.laplacians().d, m.omega()), FormValue::zero(4));
        let a4 = FormValue::alpha(4, &[4]);
        assert_eq!(m.apply(&m.laplacians().d_lambda, &a4), a4);
    }

    #[test]
    fn decomposition_on_one_forms() {
        let m = kt();
        let c = orthogonal_decomposition_check(&m, &m.laplacians().delbar_plus_mu, 1).unwrap();
        assert!(c.holds());
        assert_eq!(c.kernel_dim + c.image_dim, 4);
        let d = orthogonal_decomposition_check(&m, &m.laplacians().delbar_mu, 1).unwrap();
        let hd = joint_kernel(&m, 1, &[&m.laplacians().d]);
        let hdl = joint_kernel(&m, 1, &[&m.laplacians().d_lambda]);
        let both = crate::exact::matrix::span_intersection(4, &hd, &hdl);
        assert!(d.kernel_equals(&both));
        assert!(orthogonal_decomposition_check(&m, &m.ops().d, 1).is_err());
    }
}
