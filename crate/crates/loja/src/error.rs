//! Error type shared by every module.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LojaError {
    /// Text input did not match the polynomial grammar. Offset is in bytes.
    Parse { offset: usize, message: String },
    /// An operation was called on the zero polynomial.
    ZeroPolynomial,
    /// Variable counts of the operands disagree.
    DimensionMismatch { expected: usize, found: usize },
    /// `n` or the support size exceeds the configured guard.
    GuardExceeded(String),
    /// A weight vector with d(P) = 0 has no normalized form.
    NotNormalizable,
    /// The invulnerable variable set required by the ratio map is empty.
    EmptyInvulnerableSet { cell: String },
    /// The polynomial misses a required axis monomial.
    NotConvenient { missing: Vec<usize> },
    /// No coordinate axis meets the Newton boundary.
    NoAxisMonomial,
    /// Curve input is malformed (zero leading coefficient, exponent order, ...).
    BadCurve(String),
    /// Every order group cancelled below the truncation bound.
    TruncationExceeded { bound: String },
    /// The curve lies in the zero set of the polynomial.
    CurveInZeroSet,
    /// Restriction target is a vanishing coordinate subspace.
    VanishingSubspace { indices: Vec<usize> },
    /// Milnor-number stabilization did not converge within the budget.
    StabilizationFailed,
    /// A precondition on a numeric argument failed.
    Domain(String),
    /// Unsupported operation for the given dimension (e.g. SVG for n != 3).
    UnsupportedDimension { n: usize, need: usize },
    /// I/O or serialization failure surfaced through the CLI.
    Io(String),
}

impl fmt::Display for LojaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LojaError::Parse { offset, message } => {
                write!(f, "parse error at byte {offset}: {message}")
            }
            LojaError::ZeroPolynomial => write!(f, "operation undefined for the zero polynomial"),
            LojaError::DimensionMismatch { expected, found } => {
                write!(f, "variable count mismatch: expected {expected}, found {found}")
            }
            LojaError::GuardExceeded(what) => write!(f, "guard exceeded: {what}"),
            LojaError::NotNormalizable => {
                write!(f, "weight vector with d(P) = 0 has no normalized form")
            }
            LojaError::EmptyInvulnerableSet { cell } => {
                write!(f, "invulnerable variable set empty for cell {cell}")
            }
            LojaError::NotConvenient { missing } => {
                write!(f, "polynomial is not convenient: no axis monomial for z{missing:?}")
            }
            LojaError::NoAxisMonomial => write!(f, "no coordinate axis meets the Newton boundary"),
            LojaError::BadCurve(msg) => write!(f, "invalid curve: {msg}"),
            LojaError::TruncationExceeded { bound } => {
                write!(f, "order exceeds truncation bound {bound}")
            }
            LojaError::CurveInZeroSet => write!(f, "curve lies in the zero set of f"),
            LojaError::VanishingSubspace { indices } => {
                write!(f, "coordinate subspace {indices:?} is vanishing for f")
            }
            LojaError::StabilizationFailed => {
                write!(f, "Newton-number stabilization failed within the budget")
            }
            LojaError::Domain(msg) => write!(f, "{msg}"),
            LojaError::UnsupportedDimension { n, need } => {
                write!(f, "operation needs n = {need}, got n = {n}")
            }
            LojaError::Io(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for LojaError {}
