use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed rational {0:?}")]
pub struct ParseRationalError(pub String);

/// Failures of the exact linear-algebra layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("the zero polynomial has no isolated roots")]
    ZeroPolynomial,
    #[error("isolation width must be positive")]
    NonPositiveWidth,
    #[error("polynomial has non-real coefficients")]
    NonRealPolynomial,
    #[error("matrix is singular")]
    Singular,
    #[error("{which} is not positive semidefinite on the subspace (negative Rayleigh quotient witness {witness})")]
    NotPositiveSemidefinite { which: &'static str, witness: String },
    #[error("{0} is not self-adjoint on the subspace")]
    NotHermitian(&'static str),
    #[error("subspace basis is linearly dependent")]
    DependentBasis,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LieError {
    #[error("bracket indices ({i},{j}) invalid for dimension {n}: need 1 <= i < j <= n")]
    BadBracket { i: usize, j: usize, n: usize },
    #[error("bracket target index {k} out of range for dimension {n}")]
    BadTarget { k: usize, n: usize },
    #[error("Jacobi identity fails on {0} triple(s)")]
    JacobiFails(usize),
}

/// Violated axiom of an almost Kähler structure. Each axiom is a distinct case.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("dimension {0} is not even and positive")]
    OddDimension(usize),
    #[error("J has shape {rows}x{cols}, expected {n}x{n}")]
    BadJShape { rows: usize, cols: usize, n: usize },
    #[error("J^2 != -I")]
    JSquaredNotMinusOne,
    #[error("omega is not closed: d(omega) != 0")]
    OmegaNotClosed,
    #[error("omega is degenerate: omega^n = 0")]
    OmegaDegenerate,
    #[error("omega is not J-invariant: omega(J.,J.) != omega")]
    OmegaNotJInvariant,
    #[error("metric g(X,Y) = omega(JX,Y) is not symmetric positive definite")]
    MetricNotPositive,
    #[error("omega term ({i},{j}) invalid for dimension {n}")]
    BadOmegaTerm { i: usize, j: usize, n: usize },
    #[error(transparent)]
    Lie(#[from] LieError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ManifestError {
    #[error("malformed JSON at {pointer}: {message}")]
    Json { pointer: String, message: String },
    #[error("malformed rational at {pointer}: {text:?}")]
    Rational { pointer: String, text: String },
    #[error("schema violation at {pointer}: {message}")]
    Schema { pointer: String, message: String },
    #[error("duplicate bracket key ({i},{j}) at {pointer}")]
    DuplicateBracket { pointer: String, i: usize, j: usize },
    #[error("unknown builtin manifold {0:?}")]
    UnknownBuiltin(String),
    #[error(transparent)]
    Structure(#[from] StructureError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("unknown operator selection {0:?}")]
    UnknownOperator(String),
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
    #[error("degree {k} out of range 0..={max}")]
    DegreeOutOfRange { k: usize, max: usize },
    #[error("bidegree ({p},{q}) out of range for complex dimension {n}")]
    BidegreeOutOfRange { p: usize, q: usize, n: usize },
    #[error("operator {0} is not self-adjoint in degree {1}")]
    NotSelfAdjoint(String, usize),
    #[error("{0}")]
    Algebra(#[from] AlgebraError),
    #[error("form: {0}")]
    Form(String),
}
