//! Manifest parsing and serialization, the built-in catalog, and seeded
//! compatible perturbations of a structure.

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::ManifestError;
use crate::exact::{format_rational, parse_rational, ExactMatrix, Gq, Rational};
use crate::lie::LieAlgebraData;
use crate::structure::{omega_from_terms, AKManifold};

pub const MANIFEST_SCHEMA: u32 = 1;

pub const BUILTIN_NAMES: [&str; 3] = ["torus4", "torus6", "kodaira_thurston"];

const KT_PRINT_NOTE: &str = "The printed structure equations list dα2 = -α2∧α4, but the bracket [ξ1,ξ4] = ξ2 \
(and the coordinate form α2 = dz - x dy) give dα2 = -α1∧α4; the brackets are authoritative.";

/// Whether the invariant complex is taken to model a compact quotient.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CompactQuotient {
    /// A lattice is assumed to exist; not checked.
    Assumed,
    /// Nilpotent with a lattice, so invariant cohomology is de Rham cohomology.
    Nilmanifold,
    /// No quotient is claimed; results concern the Lie algebra only.
    None,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTerm {
    k: usize,
    c: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBracket {
    i: usize,
    j: usize,
    terms: Vec<RawTerm>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOmegaTerm {
    i: usize,
    j: usize,
    c: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawManifest {
    schema: u32,
    name: String,
    dimension: usize,
    brackets: Vec<RawBracket>,
    omega: Vec<RawOmegaTerm>,
    #[serde(rename = "J")]
    j: Vec<Vec<String>>,
    compact_quotient: CompactQuotient,
    #[serde(default)]
    annotations: Vec<String>,
}

/// `[ξ_i, ξ_j] = Σ c ξ_k` with `i < j` (1-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    pub terms: Vec<(usize, Rational)>,
}

/// A parsed manifest; rationals are exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManifoldManifest {
    pub name: String,
    pub dimension: usize,
    pub brackets: Vec<BracketEntry>,
    /// `ω = Σ c α^i ∧ α^j`
    pub omega: Vec<(usize, usize, Rational)>,
    /// Row-major; `Jξ_i = Σ_j J[j][i] ξ_j`.
    pub j: Vec<Vec<Rational>>,
    pub compact_quotient: CompactQuotient,
    pub annotations: Vec<String>,
}

fn pointer_of(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for seg in path.iter() {
        match seg {
            Segment::Seq { index } => out.push_str(&format!("/{index}")),
            Segment::Map { key } => out.push_str(&format!("/{}", key.replace('~', "~0").replace('/', "~1"))),
            Segment::Enum { variant } => out.push_str(&format!("/{variant}")),
            Segment::Unknown => out.push_str("/?"),
        }
    }
    out
}

fn rational_at(text: &str, pointer: String) -> Result<Rational, ManifestError> {
    parse_rational(text).map_err(|_| ManifestError::Rational { pointer, text: text.to_string() })
}

fn schema(pointer: impl Into<String>, message: impl Into<String>) -> ManifestError {
    ManifestError::Schema { pointer: pointer.into(), message: message.into() }
}

/// Parses a manifest. Unknown keys are rejected and every error carries a
/// JSON pointer.
pub fn parse_manifest(text: &str) -> Result<ManifoldManifest, ManifestError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let raw: RawManifest = serde_path_to_error::deserialize(de).map_err(|e| {
        let pointer = pointer_of(e.path());
        let inner = e.into_inner();
        if inner.is_data() {
            schema(pointer, inner.to_string())
        } else {
            ManifestError::Json { pointer, message: inner.to_string() }
        }
    })?;
    if raw.schema != MANIFEST_SCHEMA {
        return Err(schema("/schema", format!("unsupported schema version {}", raw.schema)));
    }
    let n = raw.dimension;
    let mut seen = BTreeSet::new();
    let mut brackets = Vec::new();
    for (b, br) in raw.brackets.iter().enumerate() {
        if !(1 <= br.i && br.i < br.j && br.j <= n) {
            return Err(schema(format!("/brackets/{b}"), format!("need 1 <= i < j <= {n}, got ({}, {})", br.i, br.j)));
        }
        if !seen.insert((br.i, br.j)) {
            return Err(ManifestError::DuplicateBracket { pointer: format!("/brackets/{b}"), i: br.i, j: br.j });
        }
        let mut terms = Vec::new();
        for (t, term) in br.terms.iter().enumerate() {
            if !(1..=n).contains(&term.k) {
                return Err(schema(format!("/brackets/{b}/terms/{t}/k"), format!("need 1 <= k <= {n}")));
            }
            terms.push((term.k, rational_at(&term.c, format!("/brackets/{b}/terms/{t}/c"))?));
        }
        brackets.push(BracketEntry { i: br.i, j: br.j, terms });
    }
    let mut omega = Vec::new();
    for (t, term) in raw.omega.iter().enumerate() {
        if term.i == term.j || !(1..=n).contains(&term.i) || !(1..=n).contains(&term.j) {
            return Err(schema(format!("/omega/{t}"), format!("need distinct indices in 1..={n}")));
        }
        omega.push((term.i, term.j, rational_at(&term.c, format!("/omega/{t}/c"))?));
    }
    if raw.j.len() != n {
        return Err(schema("/J", format!("expected {n} rows, got {}", raw.j.len())));
    }
    let mut j = Vec::new();
    for (r, row) in raw.j.iter().enumerate() {
        if row.len() != n {
            return Err(schema(format!("/J/{r}"), format!("expected {n} entries, got {}", row.len())));
        }
        j.push(row.iter().enumerate().map(|(c, x)| rational_at(x, format!("/J/{r}/{c}"))).collect::<Result<_, _>>()?);
    }
    Ok(ManifoldManifest {
        name: raw.name,
        dimension: n,
        brackets,
        omega,
        j,
        compact_quotient: raw.compact_quotient,
        annotations: raw.annotations,
    })
}

impl ManifoldManifest {
    fn to_raw(&self) -> RawManifest {
        RawManifest {
            schema: MANIFEST_SCHEMA,
            name: self.name.clone(),
            dimension: self.dimension,
            brackets: self
                .brackets
                .iter()
                .map(|b| RawBracket {
                    i: b.i,
                    j: b.j,
                    terms: b.terms.iter().map(|(k, c)| RawTerm { k: *k, c: format_rational(c) }).collect(),
                })
                .collect(),
            omega: self.omega.iter().map(|(i, j, c)| RawOmegaTerm { i: *i, j: *j, c: format_rational(c) }).collect(),
            j: self.j.iter().map(|row| row.iter().map(format_rational).collect()).collect(),
            compact_quotient: self.compact_quotient,
            annotations: self.annotations.clone(),
        }
    }

    /// Pretty-printed JSON with canonical rational strings.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_raw()).expect("manifest serializes")
    }

    pub fn j_matrix(&self) -> ExactMatrix {
        ExactMatrix::from_rational_rows(&self.j)
    }

    /// Validates every axiom and builds the manifold.
    pub fn build(&self) -> Result<AKManifold, ManifestError> {
        let entries = self.brackets.iter().map(|b| (b.i, b.j, b.terms.clone())).collect();
        let algebra = LieAlgebraData::new(self.dimension, entries).map_err(crate::error::StructureError::from)?;
        let omega = omega_from_terms(self.dimension, &self.omega)?;
        Ok(AKManifold::new(self.name.clone(), algebra, self.j_matrix(), omega)?)
    }

    /// Invariant cohomology is de Rham cohomology of the quotient.
    pub fn cohomology_is_topological(&self) -> bool {
        self.compact_quotient == CompactQuotient::Nilmanifold
    }
}

fn r(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Standard Kähler structure on the abelian algebra of dimension `2n`:
/// `ω = Σ α^{2i-1} ∧ α^{2i}`, `Jξ_{2i} = ξ_{2i-1}`.
fn flat_torus(name: &str, n: usize) -> ManifoldManifest {
    let dim = 2 * n;
    let mut j = vec![vec![r(0); dim]; dim];
    for b in 0..n {
        let (x, y) = (2 * b, 2 * b + 1);
        // Jξ_x = -ξ_y, Jξ_y = ξ_x
        j[y][x] = r(-1);
        j[x][y] = r(1);
    }
    ManifoldManifest {
        name: name.to_string(),
        dimension: dim,
        brackets: Vec::new(),
        omega: (0..n).map(|b| (2 * b + 1, 2 * b + 2, r(1))).collect(),
        j,
        compact_quotient: CompactQuotient::Nilmanifold,
        annotations: vec!["flat torus; Kähler".to_string()],
    }
}

/// Kodaira–Thurston nilmanifold: `[ξ1,ξ4] = ξ2`, `ω = α3∧α1 + α4∧α2`,
/// `Jξ1 = ξ3`, `Jξ2 = ξ4`.
fn kodaira_thurston() -> ManifoldManifest {
    let j = [[0, 0, -1, 0], [0, 0, 0, -1], [1, 0, 0, 0], [0, 1, 0, 0]];
    ManifoldManifest {
        name: "kodaira_thurston".to_string(),
        dimension: 4,
        brackets: vec![BracketEntry { i: 1, j: 4, terms: vec![(2, r(1))] }],
        omega: vec![(3, 1, r(1)), (4, 2, r(1))],
        j: j.iter().map(|row| row.iter().map(|&x| r(x)).collect()).collect(),
        compact_quotient: CompactQuotient::Nilmanifold,
        annotations: vec![
            "Kodaira-Thurston manifold, a non-Kähler symplectic nilmanifold with a non-integrable compatible J".to_string(),
            KT_PRINT_NOTE.to_string(),
        ],
    }
}

pub fn builtin_manifest(name: &str) -> Result<ManifoldManifest, ManifestError> {
    match name {
        "torus4" => Ok(flat_torus("torus4", 2)),
        "torus6" => Ok(flat_torus("torus6", 3)),
        "kodaira_thurston" => Ok(kodaira_thurston()),
        other => Err(ManifestError::UnknownBuiltin(other.to_string())),
    }
}

pub fn builtin(name: &str) -> Result<AKManifold, ManifestError> {
    builtin_manifest(name)?.build()
}

fn small_rational(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> Rational {
    Rational::new(rng.gen_range(lo..=hi).into(), rng.gen_range(1i64..=3).into())
}

/// Diagonal automorphism `ξ_i ↦ d_i ξ_i` for algebras whose brackets each have
/// a single target; the identity when none is found.
fn diagonal_automorphism(alg: &LieAlgebraData, rng: &mut ChaCha8Rng) -> Vec<Rational> {
    let n = alg.dim();
    let mut d: Vec<Rational> = (0..n).map(|_| small_rational(rng, 1, 4)).collect();
    for ((i, j), terms) in alg.brackets() {
        if let [(k, _)] = terms.as_slice() {
            d[k - 1] = &d[i - 1] * &d[j - 1];
        }
    }
    let preserves = alg.brackets().iter().all(|((i, j), terms)| {
        terms.iter().all(|(k, _)| d[k - 1] == &d[i - 1] * &d[j - 1])
    });
    if preserves {
        d
    } else {
        vec![Rational::one(); n]
    }
}

/// A seeded compatible pair `(ω', J')` on the same algebra: `ω` is pulled back
/// by a diagonal automorphism and scaled, and `J` is conjugated by a product
/// of symplectic transvections `x ↦ x + c ω(v,x) v`.
pub fn random_compatible(base: &AKManifold, seed: u64) -> Result<AKManifold, ManifestError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = base.dim();
    let alg = base.algebra().clone();
    let d = diagonal_automorphism(&alg, &mut rng);
    let dm = ExactMatrix::diagonal(&d.iter().cloned().map(Gq::real).collect::<Vec<_>>());
    let scale = Gq::real(small_rational(&mut rng, 1, 5));
    let omega = dm.transpose().mul(base.omega_matrix()).mul(&dm).scale(&scale);
    let mut j = dm.inverse().expect("automorphism").mul(base.j()).mul(&dm);
    for _ in 0..2 {
        let v: Vec<Gq> = (0..n).map(|_| Gq::real(small_rational(&mut rng, -2, 2))).collect();
        if v.iter().all(Zero::is_zero) {
            continue;
        }
        let c = Gq::real(small_rational(&mut rng, -2, 2));
        // T = I + c v vᵀ Ω, T⁻¹ = I - c v vᵀ Ω
        let vvt = ExactMatrix::from_fn(n, n, |a, b| &v[a] * &v[b]);
        let core = vvt.mul(&omega);
        let t = ExactMatrix::identity(n).add(&core.scale(&c));
        let t_inv = ExactMatrix::identity(n).sub(&core.scale(&c));
        j = t.mul(&j).mul(&t_inv);
    }
    let mut terms = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let c = &omega[(a, b)];
            if !c.is_zero() {
                terms.push((a + 1, b + 1, c.re.clone()));
            }
        }
    }
    let omega_form = omega_from_terms(n, &terms)?;
    Ok(AKManifold::new(format!("{}~{seed}", base.name()), alg, j, omega_form)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_validate_and_round_trip() {
        for name in BUILTIN_NAMES {
            let man = builtin_manifest(name).unwrap();
            let back = parse_manifest(&man.to_json()).unwrap();
            assert_eq!(back, man);
            assert_eq!(back.to_json(), man.to_json());
            man.build().unwrap();
        }
        let kt = builtin("kodaira_thurston").unwrap();
        assert!(!kt.nijenhuis().is_zero());
        assert!(builtin("torus4").unwrap().nijenhuis().is_zero());
        assert!(matches!(builtin("nope"), Err(ManifestError::UnknownBuiltin(_))));
    }

    fn kt_text() -> String {
        builtin_manifest("kodaira_thurston").unwrap().to_json()
    }

    #[test]
    fn manifest_errors_carry_pointers() {
        let bad = kt_text().replace(r#""c": "1""#, r#""c": "1/0""#);
        match parse_manifest(&bad) {
            Err(ManifestError::Rational { pointer, text }) => {
                assert_eq!(text, "1/0");
                assert!(pointer.ends_with("/c"), "{pointer}");
            }
            other => panic!("{other:?}"),
        }
        let bad = kt_text().replacen(r#""i": 1,"#, r#""i": 4,"#, 1);
        assert!(matches!(parse_manifest(&bad), Err(ManifestError::Schema { pointer, .. }) if pointer == "/brackets/0"));
        let mut man = builtin_manifest("kodaira_thurston").unwrap();
        man.brackets.push(man.brackets[0].clone());
        assert!(matches!(parse_manifest(&man.to_json()), Err(ManifestError::DuplicateBracket { i: 1, j: 4, .. })));
        let bad = kt_text().replacen(r#""name""#, r#""extra": 1, "name""#, 1);
        assert!(matches!(parse_manifest(&bad), Err(ManifestError::Schema { .. })));
        let bad = kt_text().replacen(r#""dimension": 4"#, r#""dimension": "four""#, 1);
        assert!(matches!(parse_manifest(&bad), Err(ManifestError::Schema { pointer, .. }) if pointer == "/dimension"));
        assert!(matches!(parse_manifest("{"), Err(ManifestError::Json { .. })));
    }

    #[test]
    fn degenerate_omega_is_rejected() {
        let mut man = builtin_manifest("kodaira_thurston").unwrap();
        man.omega = vec![(1, 2, r(1))];
        assert!(man.build().is_err());
    }

    #[test]
    fn perturbations_are_compatible_and_distinct() {
        let kt = builtin("kodaira_thurston").unwrap();
        let a = random_compatible(&kt, 1).unwrap();
        let b = random_compatible(&kt, 2).unwrap();
        assert_ne!(a.j(), b.j());
        assert_eq!(random_compatible(&kt, 1).unwrap().j(), a.j());
        for s in 0..5 {
            random_compatible(&builtin("torus4").unwrap(), s).unwrap();
        }
    }
}
