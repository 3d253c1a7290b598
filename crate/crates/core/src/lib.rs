//! Exact operator calculus for almost Kähler structures on Lie algebras:
//! the bidegree split of `d`, Hodge and symplectic stars, Lefschetz
//! operators, Laplacians, harmonic spaces and the spectral constants that
//! control when harmonic forms split into bidegrees.

pub mod calc;
pub mod catalog;
pub mod error;
pub mod exact;
pub mod exterior;
pub mod harmonic;
pub mod lie;
pub mod operator;
pub mod structure;

pub use calc::{identity_suite, orthogonal_decomposition_check, IdentitySuiteReport, LaplacianSelection, Laplacians};
pub use catalog::{
    builtin, builtin_manifest, parse_manifest, random_compatible, CompactQuotient, ManifoldManifest, BUILTIN_NAMES,
};
pub use error::{AlgebraError, AnalysisError, LieError, ManifestError, StructureError};
pub use exact::{format_rational, parse_rational, ExactMatrix, Gq, PencilValue, RealAlgebraicRoot, Rational};
pub use exterior::FormValue;
pub use harmonic::{
    betti_numbers, decompose_form, harmonic_space, hlc_audit, hodge_numbers, membership_constant, spectral_gap,
    theorem_audit, Family, HarmonicSelection, HodgeReport, ReportOptions,
};
pub use lie::LieAlgebraData;
pub use operator::GradedOperator;
pub use structure::AKManifold;
