use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use akhodge_core::calc::IdentitySuiteReport;
use akhodge_core::exterior::FormKeyMap;
use akhodge_core::harmonic::{
    decompose_form, hlc_audit, membership_constant, spectral_gap, Family, FormDecomposition, HlcAudit, HodgeReport,
    MembershipResult, ReportOptions, SpectralResult,
};
use akhodge_core::{
    builtin_manifest, format_rational, identity_suite, parse_manifest, parse_rational, AKManifold, FormValue, Gq,
    LaplacianSelection, ManifestError, ManifoldManifest, Rational, StructureError,
};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "akhodge", version, about = "Exact Hodge theory of invariant almost Kähler structures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the almost Kähler axioms.
    Validate(Common),
    /// Full report: Betti and Hodge numbers, decompositions, HLC, constants, audits.
    Report(Common),
    /// Operator identity suite.
    Identities(Common),
    /// Spectrum of a Laplacian.
    Spectrum(Common),
    /// Hard Lefschetz audit.
    Hlc(Common),
    /// Spectral membership constants.
    Constants(Common),
    /// Bidegree, Lefschetz and harmonic decomposition of a form.
    Decompose(Common),
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Json,
    Markdown,
}

#[derive(Args)]
struct Common {
    /// Built-in manifold (torus4, torus6, kodaira_thurston).
    #[arg(long, conflicts_with = "file", required_unless_present = "file")]
    builtin: Option<String>,
    /// Manifest file.
    #[arg(long)]
    file: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "markdown")]
    format: Format,
    /// Maximum width of isolating intervals for irrational eigenvalues.
    #[arg(long, default_value = "1/1000000000000000000000000000000")]
    eig_width: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    degree: Option<usize>,
    /// M, Mtilde or Mbar.
    #[arg(long)]
    family: Option<String>,
    /// d, dLambda, dbar, del, mu, mubar, dbar-mu or del-mubar.
    #[arg(long)]
    operator: Option<String>,
    /// Form to decompose, as `e1^e2=1,e3^e4=-1/2`.
    #[arg(long)]
    form: Option<String>,
}

/// Exit statuses.
const INVALID: u8 = 1;
const INCONSISTENT: u8 = 2;
const IO: u8 = 3;

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }
}

fn load_manifest(c: &Common) -> Result<ManifoldManifest, Failure> {
    match (&c.builtin, &c.file) {
        (Some(name), _) => builtin_manifest(name).map_err(|e| Failure::new(IO, e.to_string())),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|e| Failure::new(IO, format!("{}: {e}", path.display())))?;
            parse_manifest(&text).map_err(|e| Failure::new(INVALID, e.to_string()))
        }
        (None, None) => Err(Failure::new(IO, "one of --builtin or --file is required")),
    }
}

fn width(c: &Common) -> Result<Rational, Failure> {
    let w = parse_rational(&c.eig_width).map_err(|e| Failure::new(IO, format!("--eig-width: {e}")))?;
    if w <= Rational::from_integer(0.into()) {
        return Err(Failure::new(IO, "--eig-width must be positive"));
    }
    Ok(w)
}

fn build(man: &ManifoldManifest) -> Result<AKManifold, Failure> {
    man.build().map_err(|e| Failure::new(INVALID, e.to_string()))
}

fn json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("serializable output")
}

const AXIOMS: [&str; 8] = [
    "even_dimension",
    "j_shape",
    "j_squared_minus_one",
    "jacobi",
    "omega_closed",
    "omega_nondegenerate",
    "omega_j_invariant",
    "metric_positive_definite",
];

fn failed_axiom(e: &ManifestError) -> Option<usize> {
    let ManifestError::Structure(s) = e else { return None };
    Some(match s {
        StructureError::OddDimension(_) => 0,
        StructureError::BadJShape { .. } => 1,
        StructureError::JSquaredNotMinusOne => 2,
        StructureError::Lie(_) => 3,
        StructureError::OmegaNotClosed | StructureError::BadOmegaTerm { .. } => 4,
        StructureError::OmegaDegenerate => 5,
        StructureError::OmegaNotJInvariant => 6,
        StructureError::MetricNotPositive => 7,
    })
}

fn validate(c: &Common) -> Result<(String, u8), Failure> {
    let man = load_manifest(c)?;
    let result = man.build();
    let failed = result.as_ref().err().and_then(failed_axiom);
    let axioms: Vec<(&str, &str)> = AXIOMS
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let status = match failed {
                None if result.is_ok() => "pass",
                Some(f) if i < f => "pass",
                Some(f) if i == f => "fail",
                _ => "not checked",
            };
            (*a, status)
        })
        .collect();
    let error = result.as_ref().err().map(ToString::to_string);
    let code = if result.is_ok() { 0 } else { INVALID };
    let out = match c.format {
        Format::Json => {
            let map: BTreeMap<&str, &str> = axioms.iter().copied().collect();
            json(&serde_json::json!({ "name": man.name, "valid": result.is_ok(), "axioms": map, "error": error }))
        }
        Format::Markdown => {
            let mut s = format!("# Validation of `{}`\n\n| axiom | status |\n|---|---|\n", man.name);
            for (a, st) in &axioms {
                let _ = writeln!(s, "| {a} | {st} |");
            }
            if let Some(e) = error {
                let _ = writeln!(s, "\nError: {e}");
            }
            s
        }
    };
    Ok((out, code))
}

fn report(c: &Common) -> Result<(String, u8), Failure> {
    let man = load_manifest(c)?;
    let m = build(&man)?;
    let opts = ReportOptions { seed: c.seed, width: width(c)?, cohomology_is_topological: man.cohomology_is_topological() };
    let r = HodgeReport::build(&m, &opts).map_err(|e| Failure::new(INCONSISTENT, e.to_string()))?;
    let failures = r.consistency_failures();
    for f in &failures {
        eprintln!("consistency failure: {f}");
    }
    let out = match c.format {
        Format::Json => r.to_json(),
        Format::Markdown => r.to_markdown(),
    };
    Ok((out, if failures.is_empty() { 0 } else { INCONSISTENT }))
}

fn identities(c: &Common) -> Result<(String, u8), Failure> {
    let m = build(&load_manifest(c)?)?;
    let r: IdentitySuiteReport = identity_suite(&m, c.seed);
    let code = if r.passed() { 0 } else { INCONSISTENT };
    let out = match c.format {
        Format::Json => json(&r),
        Format::Markdown => r.to_markdown(),
    };
    Ok((out, code))
}

fn degrees(c: &Common, lo: usize, hi: usize) -> Result<Vec<usize>, Failure> {
    match c.degree {
        Some(k) if k < lo || k > hi => Err(Failure::new(IO, format!("--degree {k} out of range {lo}..={hi}"))),
        Some(k) => Ok(vec![k]),
        None => Ok((lo..=hi).collect()),
    }
}

fn spectrum(c: &Common) -> Result<(String, u8), Failure> {
    let m = build(&load_manifest(c)?)?;
    let sel = LaplacianSelection::parse(c.operator.as_deref().unwrap_or("d")).map_err(|e| Failure::new(IO, e.to_string()))?;
    let w = width(c)?;
    let results: Vec<SpectralResult> = degrees(c, 0, m.dim())?
        .into_iter()
        .map(|k| spectral_gap(&m, sel, k, &w))
        .collect::<Result<_, _>>()
        .map_err(|e| Failure::new(INCONSISTENT, e.to_string()))?;
    let out = match c.format {
        Format::Json => json(&results),
        Format::Markdown => {
            let mut s = format!("# Spectrum of Δ_{} on `{}`\n\n| k | eigenvalues | smallest positive |\n|---|---|---|\n", sel.name(), m.name());
            for r in &results {
                let eig: Vec<String> = r.eigenvalues.iter().map(|e| format!("{e} (×{})", e.multiplicity)).collect();
                let gap = r.smallest_positive.as_ref().map_or("none".to_string(), ToString::to_string);
                let _ = writeln!(s, "| {} | {} | {gap} |", r.degree, eig.join(", "));
            }
            s
        }
    };
    let code = if results.iter().all(|r| r.all_nonnegative) { 0 } else { INCONSISTENT };
    Ok((out, code))
}

fn hlc(c: &Common) -> Result<(String, u8), Failure> {
    let m = build(&load_manifest(c)?)?;
    let a: HlcAudit = hlc_audit(&m);
    let out = match c.format {
        Format::Json => json(&a),
        Format::Markdown => {
            let mut s = format!(
                "# Hard Lefschetz audit on `{}`\n\nHLC: {}\n\n| k | H_d = H_dΛ | L iso on H_d | L iso on H_dΛ | H_d ⊂ H_ddΛ | dim H_d | projected rank |\n|---|---|---|---|---|---|---|\n",
                m.name(),
                a.hlc
            );
            for d in &a.degrees {
                let _ = writeln!(
                    s,
                    "| {} | {} | {} | {} | {} | {} | {} |",
                    d.degree, d.d_equals_dlambda, d.lefschetz_d, d.lefschetz_dlambda, d.d_in_ddlambda, d.harmonic_dim, d.projected_rank_d
                );
            }
            for d in &a.non_hlc {
                let _ = writeln!(s, "\nNon-HLC degree {}: 2(h_(d+dΛ) - b) = {}, h_(d+dΛ) + h_(ddΛ) - 2b = {}", d.degree, d.twice_excess, d.symmetric_excess);
            }
            s
        }
    };
    Ok((out, if a.statements_agree { 0 } else { INCONSISTENT }))
}

fn constants(c: &Common) -> Result<(String, u8), Failure> {
    let m = build(&load_manifest(c)?)?;
    let families = match &c.family {
        Some(f) => vec![Family::parse(f).map_err(|e| Failure::new(IO, e.to_string()))?],
        None => Family::ALL.to_vec(),
    };
    let w = width(c)?;
    let mut results: Vec<MembershipResult> = Vec::new();
    for k in degrees(c, 1, m.complex_dim())? {
        for &f in &families {
            results.push(membership_constant(&m, f, k, &w).map_err(|e| Failure::new(INCONSISTENT, e.to_string()))?);
        }
    }
    let out = match c.format {
        Format::Json => json(&results),
        Format::Markdown => {
            let mut s = format!("# Membership constants on `{}`\n\n| family | k | constant | threshold | status |\n|---|---|---|---|---|\n", m.name());
            for r in &results {
                let t = r.threshold.as_ref().map_or("-".to_string(), format_rational);
                let _ = writeln!(s, "| {:?} | {} | {} | {t} | {} |", r.family, r.degree, r.best_constant, r.threshold_status);
            }
            s
        }
    };
    Ok((out, 0))
}

/// `e1^e2=1,e3^e4=-1/2` (a coefficient may be `re+im*i` written as `re:im`).
fn parse_form(n: usize, text: &str) -> Result<FormValue, Failure> {
    let mut map = BTreeMap::new();
    for term in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let (key, coeff) = term.split_once('=').ok_or_else(|| Failure::new(IO, format!("--form term {term:?} lacks '='")))?;
        let (re, im) = coeff.split_once(':').unwrap_or((coeff, "0"));
        let parse = |s: &str| parse_rational(s.trim()).map_err(|e| Failure::new(IO, format!("--form: {e}")));
        map.insert(key.trim().to_string(), Gq::new(parse(re)?, parse(im)?));
    }
    FormValue::from_key_map(n, &FormKeyMap(map)).map_err(|e| Failure::new(IO, format!("--form: {e}")))
}

fn decompose(c: &Common) -> Result<(String, u8), Failure> {
    let m = build(&load_manifest(c)?)?;
    let text = c.form.as_deref().ok_or_else(|| Failure::new(IO, "decompose needs --form"))?;
    let f = parse_form(m.dim(), text)?;
    let d: FormDecomposition = decompose_form(&m, &f).map_err(|e| Failure::new(IO, e.to_string()))?;
    let out = match c.format {
        Format::Json => json(&d),
        Format::Markdown => {
            let mut s = format!("# Decomposition of {} on `{}`\n\nClosed: {}\n\n## Bidegree parts\n\n", d.form, m.name(), d.closed);
            for b in &d.bidegree {
                let _ = writeln!(s, "- ({},{}): {}", b.p, b.q, b.form);
            }
            let _ = writeln!(s, "\n## Lefschetz parts\n");
            for l in &d.lefschetz {
                let _ = writeln!(s, "- L^{} of primitive {}", l.power, l.primitive);
            }
            let _ = writeln!(s, "\nHarmonic part: {}", d.harmonic_part);
            s
        }
    };
    Ok((out, 0))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { IO } else { 0 });
        }
    };
    let result = match &cli.command {
        Command::Validate(c) => validate(c),
        Command::Report(c) => report(c),
        Command::Identities(c) => identities(c),
        Command::Spectrum(c) => spectrum(c),
        Command::Hlc(c) => hlc(c),
        Command::Constants(c) => constants(c),
        Command::Decompose(c) => decompose(c),
    };
    match result {
        Ok((out, code)) => {
            // a closed pipe is not an error worth reporting
            let _ = writeln!(std::io::stdout().lock(), "{out}");
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
