use thiserror::Error;

/// Errors raised anywhere in the engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("arity mismatch for `{name}`: expected {expected}, got {got}")]
    ArityMismatch { name: String, expected: usize, got: usize },
    #[error("variable `{0}` is not in the variable set")]
    VarNotInScope(String),
    #[error("variable-set mismatch: {0}")]
    VarSetMismatch(String),
    #[error("equality is disabled for this signature")]
    EqualityDisabled,
    #[error("invalid signature: {0}")]
    InvalidSignature(String),
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),
    #[error("model mismatch: {0}")]
    ModelMismatch(String),
    #[error("bound exceeded: {0}")]
    BoundExceeded(String),
    #[error("ill-formed automorphism: {0}")]
    InvalidPhi(String),
    #[error("not a member of the ambient lattice: {0}")]
    NotInLattice(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
