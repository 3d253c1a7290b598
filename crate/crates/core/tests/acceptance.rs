//! Acceptance criteria. Prints one PASS/FAIL line per criterion and fails
//! only on unexpected results; a criterion recorded as unattainable prints
//! FAIL together with the observed values, which are asserted instead.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use akhodge_core::calc::subspace_of;
use akhodge_core::harmonic::{
    b2_plus, hlc_audit, hodge_decomposition_check, lemma_l1_audit, theorem_audit, HarmonicSelection,
};
use akhodge_core::{
    betti_numbers, builtin, harmonic_space, hodge_numbers, identity_suite, membership_constant, orthogonal_decomposition_check,
    parse_manifest, parse_rational, random_compatible, spectral_gap, AKManifold, ExactMatrix, Family, FormValue, Gq,
    HodgeReport, LaplacianSelection, Rational, ReportOptions, BUILTIN_NAMES,
};
use num_traits::{One, Signed, Zero};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn width() -> Rational {
    parse_rational("1/1000000000000000000000000000000").unwrap()
}

fn r(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn kt() -> AKManifold {
    builtin("kodaira_thurston").unwrap()
}

fn alpha(idx: &[usize]) -> FormValue {
    FormValue::alpha(4, idx)
}

fn manifests_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../manifests")
}

fn catalog() -> Vec<AKManifold> {
    let mut out: Vec<AKManifold> = BUILTIN_NAMES.iter().map(|n| builtin(n).unwrap()).collect();
    let mut files: Vec<PathBuf> = std::fs::read_dir(manifests_dir())
        .map(|d| d.filter_map(|e| e.ok().map(|e| e.path())).collect())
        .unwrap_or_default();
    files.sort();
    for f in files.iter().filter(|f| f.extension().is_some_and(|e| e == "json")) {
        let text = std::fs::read_to_string(f).unwrap();
        out.push(parse_manifest(&text).unwrap().build().unwrap());
    }
    out
}

// ---------------------------------------------------------------------------
// Independent oracle: a tiny Chevalley–Eilenberg complex over the rationals,
// monomials as bitmasks, sharing nothing with the engine.

mod oracle {
    use super::*;

    pub type Form = BTreeMap<u32, Rational>;

    /// Sign of `e_a ∧ e_b` relative to the sorted monomial.
    fn wedge_sign(a: u32, b: u32) -> Option<i64> {
        if a & b != 0 {
            return None;
        }
        let mut swaps = 0;
        for i in 0..32 {
            if b >> i & 1 == 1 {
                swaps += (a >> (i + 1)).count_ones();
            }
        }
        Some(if swaps % 2 == 0 { 1 } else { -1 })
    }

    pub fn wedge(x: &Form, y: &Form) -> Form {
        let mut out = Form::new();
        for (a, ca) in x {
            for (b, cb) in y {
                if let Some(s) = wedge_sign(*a, *b) {
                    *out.entry(a | b).or_insert_with(Rational::zero) += ca * cb * r(s);
                }
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// `dξ^k = -Σ_{i<j} c_{ij}^k ξ^i ∧ ξ^j`, extended as an antiderivation.
    pub struct Complex {
        pub dim: usize,
        d1: Vec<Form>,
    }

    impl Complex {
        pub fn new(dim: usize, brackets: &[(usize, usize, usize, i64)]) -> Self {
            let mut d1 = vec![Form::new(); dim];
            for &(i, j, k, c) in brackets {
                *d1[k - 1].entry(1 << (i - 1) | 1 << (j - 1)).or_insert_with(Rational::zero) -= r(c);
            }
            Complex { dim, d1 }
        }

        pub fn monomials(&self, k: usize) -> Vec<u32> {
            (0u32..1 << self.dim).filter(|m| m.count_ones() as usize == k).collect()
        }

        fn d_monomial(&self, m: u32) -> Form {
            let mut out = Form::new();
            let idx: Vec<usize> = (0..self.dim).filter(|i| m >> i & 1 == 1).collect();
            for (pos, &i) in idx.iter().enumerate() {
                let before: u32 = idx[..pos].iter().map(|&b| 1 << b).sum();
                let after: u32 = idx[pos + 1..].iter().map(|&b| 1 << b).sum();
                let sign = if pos % 2 == 0 { r(1) } else { r(-1) };
                let left: Form = [(before, sign)].into_iter().collect();
                let right: Form = [(after, r(1))].into_iter().collect();
                for (mono, c) in wedge(&wedge(&left, &self.d1[i]), &right) {
                    *out.entry(mono).or_insert_with(Rational::zero) += c;
                }
            }
            out.retain(|_, c| !c.is_zero());
            out
        }

        /// Matrix of `d: Λᵏ → Λᵏ⁺¹` in the monomial bases.
        pub fn d_matrix(&self, k: usize) -> Vec<Vec<Rational>> {
            let src = self.monomials(k);
            let tgt = self.monomials(k + 1);
            let mut mat = vec![vec![Rational::zero(); src.len()]; tgt.len()];
            for (c, m) in src.iter().enumerate() {
                for (mono, v) in self.d_monomial(*m) {
                    let row = tgt.iter().position(|t| *t == mono).unwrap();
                    mat[row][c] = v;
                }
            }
            mat
        }

        pub fn betti(&self) -> Vec<usize> {
            let ranks: Vec<usize> = (0..=self.dim).map(|k| rank(self.d_matrix(k))).collect();
            (0..=self.dim)
                .map(|k| self.monomials(k).len() - ranks[k] - if k == 0 { 0 } else { ranks[k - 1] })
                .collect()
        }
    }

    pub fn rank(mut a: Vec<Vec<Rational>>) -> usize {
        let rows = a.len();
        let cols = a.first().map_or(0, Vec::len);
        let mut rank = 0;
        for c in 0..cols {
            let Some(p) = (rank..rows).find(|&i| !a[i][c].is_zero()) else { continue };
            a.swap(rank, p);
            for i in 0..rows {
                if i != rank && !a[i][c].is_zero() {
                    let f = &a[i][c] / &a[rank][c];
                    for j in 0..cols {
                        let t = &f * &a[rank][j];
                        a[i][j] -= t;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    /// Characteristic polynomial coefficients `[1, c_1, …, c_n]` of
    /// `det(tI - A)` by Faddeev–LeVerrier.
    pub fn char_poly(a: &[Vec<Rational>]) -> Vec<Rational> {
        let n = a.len();
        let mul = |x: &[Vec<Rational>], y: &[Vec<Rational>]| -> Vec<Vec<Rational>> {
            (0..n)
                .map(|i| (0..n).map(|j| (0..n).fold(Rational::zero(), |acc, k| acc + &x[i][k] * &y[k][j])).collect())
                .collect()
        };
        let mut coeffs = vec![Rational::one()];
        let mut m = vec![vec![Rational::zero(); n]; n];
        for k in 1..=n {
            // M_k = A M_{k-1} + c_{k-1} I
            let mut next = mul(a, &m);
            for (i, row) in next.iter_mut().enumerate() {
                row[i] += coeffs[k - 1].clone();
            }
            m = next;
            let am = mul(a, &m);
            let trace = (0..n).fold(Rational::zero(), |acc, i| acc + &am[i][i]);
            coeffs.push(-trace / r(k as i64));
        }
        coeffs
    }

    /// Positive inertia of a real symmetric matrix (Descartes' rule is exact
    /// for real-rooted polynomials).
    pub fn positive_eigenvalues(a: &[Vec<Rational>]) -> usize {
        let signs: Vec<bool> = char_poly(a).iter().filter(|c| !c.is_zero()).map(Signed::is_positive).collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }
}

fn kt_oracle() -> oracle::Complex {
    oracle::Complex::new(4, &[(1, 4, 2, 1)])
}

fn oracle_form(f: &FormValue) -> oracle::Form {
    f.terms()
        .map(|(m, c)| {
            assert!(c.im.is_zero());
            (m.mask(), c.re.clone())
        })
        .collect()
}

// ---------------------------------------------------------------------------

fn betti_and_harmonic_one_forms() -> Outcome {
    let start = Instant::now();
    let m = kt();
    let b = betti_numbers(&m);
    let oracle = kt_oracle().betti();
    ensure!(b == oracle, "betti {b:?}, oracle {oracle:?}");
    ensure!(b[1] == 3 && b[3] == 3, "b1 = {}, b3 = {}", b[1], b[3]);
    let h1 = harmonic_space(&m, HarmonicSelection::Laplacian(LaplacianSelection::D), 1).unwrap();
    let expected: Vec<Vec<Gq>> = [1, 3, 4].iter().map(|&i| m.vector(&alpha(&[i]), 1)).collect();
    ensure!(h1.same_as(&m, &expected), "H1_d = {:?}", h1.basis);
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    Ok(format!("b = {b:?}, H1_d = span(a1, a3, a4), {} ms", elapsed.as_millis()))
}

fn laplacian_on_alpha2() -> Outcome {
    let m = kt();
    let lap = &m.laplacians().d;
    let a2 = alpha(&[2]);
    ensure!(m.apply(lap, &a2) == a2, "Δd α2 = {:?}", m.apply(lap, &a2));

    // oracle: orthonormal coframe, d = 0 on functions, so Δd = dᵀd on 1-forms
    ensure!(*m.metric() == ExactMatrix::identity(4), "oracle assumes the coframe is orthonormal");
    let d1 = kt_oracle().d_matrix(1);
    let lap1: Vec<Vec<Rational>> = (0..4)
        .map(|i| (0..4).map(|j| d1.iter().fold(Rational::zero(), |acc, row| acc + &row[i] * &row[j])).collect())
        .collect();
    for (i, row) in lap1.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            let engine = &lap.block(1).unwrap()[(i, j)];
            ensure!(*engine == Gq::real(x.clone()), "Δd[{i}][{j}] = {engine:?}, oracle {x}");
            ensure!(i == j || x.is_zero(), "oracle Laplacian not diagonal");
        }
    }
    let oracle_gap = (0..4).map(|i| lap1[i][i].clone()).filter(|x| x.is_positive()).min();

    let gap = spectral_gap(&m, LaplacianSelection::D, 1, &width()).unwrap();
    let smallest = gap.smallest_positive.as_ref().and_then(|x| x.exact_value()).cloned();
    ensure!(smallest == Some(r(1)) && oracle_gap == Some(r(1)), "smallest positive {smallest:?}, oracle {oracle_gap:?}");
    Ok("Δd α2 = α2, smallest positive eigenvalue on 1-forms = 1".into())
}

fn membership_and_hlc() -> Outcome {
    let m = kt();
    let c = membership_constant(&m, Family::Mtilde, 1, &width()).unwrap();
    ensure!(c.best_constant.exact_value() == Some(&r(2)), "c̃(1) = {:?}", c.best_constant);
    let audit = hlc_audit(&m);
    let k1 = audit.degrees.iter().find(|d| d.degree == 1).unwrap();
    ensure!(!audit.hlc && !k1.lefschetz_d, "HLC holds at k = 1");
    ensure!(k1.projected_rank_d == 2, "rank L on H1_d = {}", k1.projected_rank_d);
    ensure!(k1.statements() == [false; 4], "statements {:?}", k1.statements());

    // oracle: L: H¹ → H³ has the rank of the Lefschetz pairing ∫ ω ∧ a ∧ b on
    // H¹ (Poincaré duality)
    let h1 = harmonic_space(&m, HarmonicSelection::Laplacian(LaplacianSelection::D), 1).unwrap();
    let omega = oracle_form(m.omega());
    let pairing: Vec<Vec<Rational>> = h1
        .basis
        .iter()
        .map(|a| {
            let la = oracle::wedge(&omega, &oracle_form(a));
            h1.basis
                .iter()
                .map(|b| oracle::wedge(&la, &oracle_form(b)).get(&0b1111).cloned().unwrap_or_else(Rational::zero))
                .collect()
        })
        .collect();
    let oracle_rank = oracle::rank(pairing);
    ensure!(oracle_rank == 2, "oracle Lefschetz rank {oracle_rank}");
    Ok("c̃(1) = 2; HLC fails at k = 1 with rank 2; all four statements false".into())
}

fn mu_on_one_forms() -> Outcome {
    let m = kt();
    let o = m.ops();
    let op = o.mu.add(&o.mubar);
    let quarter = Gq::from_ratio(1, 4);
    let expect2 = alpha(&[2, 3]).sub(&alpha(&[1, 4])).scale(&quarter);
    let expect4 = alpha(&[3, 4]).sub(&alpha(&[1, 2])).scale(&quarter);
    for (i, want) in [(1, FormValue::zero(4)), (2, expect2), (3, FormValue::zero(4)), (4, expect4)] {
        let got = m.apply(&op, &alpha(&[i]));
        ensure!(got == want, "(μ+μ̄)α{i} = {got:?}, expected {want:?}");
    }
    Ok("(μ+μ̄)α2, (μ+μ̄)α4 as stated; α1, α3 ↦ 0".into())
}

/// Returns `(criterion met, detail)`. The stated `b₂⁺ = 1` does not hold on
/// this structure; the observed values are asserted by the caller.
fn h20_and_b2_plus() -> (bool, Result<String, String>) {
    let m = kt();
    let h = hodge_numbers(&m);
    let o = m.ops();
    let detectors = [!m.nijenhuis().is_zero(), !o.mu.is_zero(), !o.delbar.compose(&o.delbar).is_zero()];
    let theorems = theorem_audit(&m, &width()).unwrap();
    let agreement = theorems.iter().find(|t| t.id == "integrability.detectors").is_some_and(|t| t.consistent && t.conclusion);
    let b2p = b2_plus(&m);

    // oracle: positive inertia of the intersection form on harmonic 2-forms,
    // oriented by ω²/2
    let vol = oracle::wedge(&oracle_form(m.omega()), &oracle_form(m.omega()));
    let orientation = vol.get(&0b1111).cloned().unwrap() / r(2);
    let h2 = harmonic_space(&m, HarmonicSelection::Laplacian(LaplacianSelection::D), 2).unwrap();
    let q: Vec<Vec<Rational>> = h2
        .basis
        .iter()
        .map(|a| {
            h2.basis
                .iter()
                .map(|b| {
                    let top = oracle::wedge(&oracle_form(a), &oracle_form(b));
                    top.get(&0b1111).cloned().unwrap_or_else(Rational::zero) / &orientation
                })
                .collect()
        })
        .collect();
    let oracle_b2p = oracle::positive_eigenvalues(&q);

    let detail = format!(
        "h20 = {}, h02 = {}, b2+ = {b2p:?} (intersection-form oracle {oracle_b2p}, b2 = {}), N≠0 / μ≠0 / ∂̄²≠0 = {detectors:?}, detectors agree = {agreement}",
        h.get(2, 0),
        h.get(0, 2),
        h2.dim()
    );
    let observed_ok = h.get(2, 0) == 0
        && h.get(0, 2) == 0
        && detectors == [true; 3]
        && agreement
        && b2p == Some(oracle_b2p);
    if !observed_ok {
        return (false, Err(detail));
    }
    // closed self-dual witnesses for the second positive direction
    let sd = [alpha(&[1, 2]).sub(&alpha(&[3, 4])), alpha(&[1, 3]).add(&alpha(&[2, 4]))];
    let witnesses_ok = sd.iter().all(|f| {
        let v = m.vector(f, 2);
        subspace_of(6, std::slice::from_ref(&v), &h2.vectors) && m.apply(&o.star, f) == *f
    });
    if b2p == Some(1) {
        (true, Ok(detail))
    } else if b2p == Some(2) && witnesses_ok {
        (false, Ok(format!("{detail}; α12−α34 and α13+α24 are closed, self-dual and harmonic, signature 0, so b2+ = 1 is unattainable")))
    } else {
        (false, Err(detail))
    }
}

fn flat_tori() -> Outcome {
    for name in ["torus4", "torus6"] {
        let m = builtin(name).unwrap();
        let suite = identity_suite(&m, 0);
        ensure!(suite.passed(), "{name}: identity {:?} fails", suite.failures().next().map(|e| &e.id));
        for k in 0..=m.dim() {
            ensure!(hodge_decomposition_check(&m, k).unwrap().holds, "{name}: decomposition fails at k = {k}");
        }
        ensure!(hlc_audit(&m).hlc, "{name}: HLC fails");
        for family in Family::ALL {
            for k in 1..=m.complex_dim() {
                let c = membership_constant(&m, family, k, &width()).unwrap();
                ensure!(c.best_constant.is_infinite(), "{name}: {family:?}({k}) = {:?}", c.best_constant);
            }
        }
    }
    Ok("identity suites pass; HLC and decomposition in all degrees; constants +∞".into())
}

fn kt_identities_and_lemma() -> Outcome {
    let m = kt();
    let suite = identity_suite(&m, 0);
    ensure!(suite.passed(), "identity {:?} fails", suite.failures().next().map(|e| &e.id));
    let mut forms = 0;
    for k in 1..=m.complex_dim() {
        let a = lemma_l1_audit(&m, k).unwrap();
        ensure!(a.holds(), "lemma audit fails at k = {k}: {a:?}");
        forms += a.energy_identity.len();
    }
    Ok(format!("{} identities pass; energy identities hold on {forms} harmonic forms", suite.entries.len()))
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn perturbation_properties() -> Outcome {
    const ADJOINTS: [&str; 6] = ["adjoint.d", "adjoint.del", "adjoint.delbar", "adjoint.mu", "adjoint.mubar", "adjoint.l"];
    let mut count = 0;
    for base in ["torus4", "kodaira_thurston"] {
        let b = builtin(base).unwrap();
        for seed in 0..10 {
            let m = random_compatible(&b, seed).unwrap();
            let suite = identity_suite(&m, seed);
            for id in ADJOINTS {
                let e = suite.entry(id).unwrap();
                ensure!(e.defect.is_none(), "{}: {id} fails", m.name());
            }
            // ⟨dα, β⟩ = ⟨α, d*β⟩ on basis vectors
            let o = m.ops();
            for k in 0..m.dim() {
                let (s, t) = (m.basis().dim(k), m.basis().dim(k + 1));
                for i in 0..s {
                    let a = unit(s, i);
                    let da = o.d.apply_vec(k, &a).unwrap();
                    for j in 0..t {
                        let bv = unit(t, j);
                        let dsb = o.d_star.apply_vec(k + 1, &bv).unwrap();
                        ensure!(m.pair(k + 1, &da, &bv) == m.pair(k, &a, &dsb), "{}: d* is not the Gram adjoint", m.name());
                    }
                }
            }
            for sel in [LaplacianSelection::D, LaplacianSelection::DbarMu] {
                for k in 0..=m.dim() {
                    let c = orthogonal_decomposition_check(&m, sel.laplacian(&m), k).unwrap();
                    ensure!(
                        c.holds() && c.kernel_dim + c.image_dim == binomial(m.dim(), k),
                        "{}: kernel ⊕ image fails for {} at k = {k}",
                        m.name(),
                        sel.name()
                    );
                }
            }
            let h = hodge_numbers(&m);
            let betti = betti_numbers(&m);
            ensure!(h.diamond_symmetric(), "{}: diamond not symmetric", m.name());
            for (k, bk) in betti.iter().enumerate() {
                let s = h.degree_sum(k);
                ensure!(s <= *bk, "{}: Σh = {s} > b{k} = {bk}", m.name());
                ensure!(k % 2 == 0 || s % 2 == 0, "{}: odd degree {k} has Σh = {s}", m.name());
            }
            count += 1;
        }
    }
    Ok(format!("{count} perturbations: adjoints, kernel ⊕ image, diamond symmetry, Σh ≤ b, odd Σh even"))
}

fn unit(n: usize, i: usize) -> Vec<Gq> {
    let mut v = vec![Gq::zero(); n];
    v[i] = Gq::one();
    v
}

fn kernel_equality() -> Outcome {
    let cat = catalog();
    for m in &cat {
        let l = m.laplacians();
        for k in 0..=m.dim() {
            let size = m.basis().dim(k);
            let lhs = harmonic_space(m, HarmonicSelection::Laplacian(LaplacianSelection::DbarMu), k).unwrap();
            let hd = harmonic_space(m, HarmonicSelection::Laplacian(LaplacianSelection::D), k).unwrap();
            let hdl = harmonic_space(m, HarmonicSelection::Laplacian(LaplacianSelection::DLambda), k).unwrap();
            // dim(A ∩ B) = dim A + dim B - dim(A + B)
            let union: Vec<Vec<Gq>> = hd.vectors.iter().chain(&hdl.vectors).cloned().collect();
            let union_dim = if union.is_empty() { 0 } else { ExactMatrix::from_columns(size, &union).rank() };
            let meet = hd.dim() + hdl.dim() - union_dim;
            let killed = lhs.vectors.iter().all(|v| {
                [&l.d, &l.d_lambda].iter().all(|op| op.apply_vec(k, v).unwrap().iter().all(Zero::is_zero))
            });
            ensure!(killed && lhs.dim() == meet, "{}: k = {k}, dim ker = {}, dim meet = {meet}", m.name(), lhs.dim());
        }
    }
    Ok(format!("ker Δ(∂̄+μ) = H_d ∩ H_dΛ in every degree on {} catalog manifolds", cat.len()))
}

fn performance_and_determinism() -> Outcome {
    let mut notes = Vec::new();
    for m in catalog() {
        let limit = if m.dim() == 4 { Duration::from_secs(1) } else { Duration::from_secs(30) };
        let opts = ReportOptions { seed: 7, ..ReportOptions::default() };
        let start = Instant::now();
        let first = HodgeReport::build(&m, &opts).unwrap();
        let elapsed = start.elapsed();
        ensure!(elapsed < limit, "{}: report took {elapsed:?}", m.name());
        let again = HodgeReport::build(&m, &opts).unwrap();
        ensure!(first.to_json() == again.to_json(), "{}: output differs between runs", m.name());
        ensure!(first.to_markdown() == again.to_markdown(), "{}: markdown differs between runs", m.name());
        notes.push(format!("{} {} ms", m.name(), elapsed.as_millis()));
    }
    Ok(notes.join(", "))
}

fn report(n: usize, outcome: Outcome) -> bool {
    match outcome {
        Ok(detail) => {
            println!("criterion {n:>2}: PASS  {detail}");
            true
        }
        Err(detail) => {
            println!("criterion {n:>2}: FAIL  {detail}");
            false
        }
    }
}

fn main() -> ExitCode {
    let mut unexpected = 0;
    let mut check = |n: usize, outcome: Outcome| unexpected += usize::from(!report(n, outcome));
    check(1, betti_and_harmonic_one_forms());
    check(2, laplacian_on_alpha2());
    check(3, membership_and_hlc());
    check(4, mu_on_one_forms());
    match h20_and_b2_plus() {
        (false, Ok(detail)) => println!("criterion  5: FAIL  (expected, documented) {detail}"),
        (true, outcome) => check(5, outcome),
        (false, Err(detail)) => check(5, Err(detail)),
    }
    check(6, flat_tori());
    check(7, kt_identities_and_lemma());
    check(8, perturbation_properties());
    check(9, kernel_equality());
    check(10, performance_and_determinism());
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{unexpected} unexpected failure(s)");
        ExitCode::FAILURE
    }
}
