use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("element shape mismatch: expected {expected} coordinates, found {found}")]
    Shape { expected: usize, found: usize },

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("modulus must be at least 2, got {0}")]
    InvalidModulus(u64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{what} exceeds the cap of {limit}")]
    ResourceCap { what: &'static str, limit: usize },

    #[error("generators do not generate the quotient: reached {reached} of {order} vertices")]
    Disconnected { reached: usize, order: usize },

    #[error("invalid point {0}")]
    InvalidPoint(usize),

    #[error("growth bound violated at radius {radius}: |B(e,{radius})| = {size} > {bound}")]
    GrowthViolation { radius: u32, size: usize, bound: String },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("no witness with at most {n_cap} + 1 families")]
    ExceedsCap { n_cap: usize },

    #[error("insufficient input radii: {0}")]
    InsufficientInputRadii(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("cache format: {0}")]
    CacheFormat(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Coarse classification used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Input,
    Resource,
    Verification,
    Io,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Shape { .. }
            | Error::InvalidModulus(_)
            | Error::InvalidParameter(_)
            | Error::InvalidPoint(_)
            | Error::Disconnected { .. }
            | Error::GrowthViolation { .. }
            | Error::Precondition(_)
            | Error::InsufficientInputRadii(_) => ErrorKind::Input,
            Error::Overflow(_) | Error::ResourceCap { .. } | Error::ExceedsCap { .. } => ErrorKind::Resource,
            Error::Verification(_) => ErrorKind::Verification,
            Error::CacheFormat(_) | Error::Io(_) => ErrorKind::Io,
        }
    }
}
