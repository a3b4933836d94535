use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("modules live over different rings")]
    RingMismatch,
    #[error("map is not well defined: {0}")]
    NotWellDefined(String),
    #[error("map is not injective")]
    NotInjective,
    #[error("submodule is not pure: {0}")]
    NotPure(String),
    #[error("diagram hypothesis fails: {0}")]
    Diagram(String),
    #[error("operation needs a ring that is not a field")]
    FieldInstance,
    #[error("empty input: {0}")]
    Empty(&'static str),
    #[error("incompatible tower tails: {0}")]
    IncompatibleTails(String),
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
