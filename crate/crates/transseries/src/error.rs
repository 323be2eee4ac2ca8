use thiserror::Error;

/// Errors raised anywhere in the engine.
///
/// Errors are `Clone` so that memoized lazy streams can replay a failure
/// to every consumer that forces the same cell.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("exponent vectors have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("series is not infinitesimal")]
    NotInfinitesimal,
    #[error("division by zero")]
    DivisionByZero,
    #[error("the zero polynomial has no root bound")]
    ZeroPolynomial,
    #[error("certificate is not finitely enumerable below the bound: {0}")]
    InfiniteEnumeration(String),
    #[error("transbasis axiom {axiom} violated: {reason}")]
    Axiom { axiom: Axiom, reason: String },
    #[error("constant-field extension required: {0}")]
    ConstantFieldExtension(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("resonance at exponent {0}: log-extension required")]
    Resonance(String),
    #[error("solution leaves the ambient field: {0}")]
    NotInAmbientField(String),
    #[error("not quasi-linear: {0}")]
    NotQuasiLinear(String),
    #[error("level mismatch: {0}")]
    Level(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("contract violation: {0}")]
    Contract(String),
}

/// The three transbasis axioms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axiom {
    Tb1,
    Tb2,
    Tb3,
}

impl std::fmt::Display for Axiom {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Axiom::Tb1 => "TB1",
            Axiom::Tb2 => "TB2",
            Axiom::Tb3 => "TB3",
        })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
