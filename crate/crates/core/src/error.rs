use crate::Mask;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the library can report.
///
/// The CLI maps these onto exit codes through [`Error::exit_code`]; the FFI
/// layer maps them onto status codes the same way.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid instance: {field}: {message}")]
    Schema { field: String, message: String },

    #[error("i/o error: {0}")]
    Io(String),

    #[error("subset mask {mask:#x} has bits outside a ground set of size {n}")]
    InvalidMask { mask: Mask, n: usize },

    #[error("ground set of size {n} exceeds the brute-force limit {max_n}")]
    GroundSetTooLarge { n: usize, max_n: usize },

    #[error("perturbation eta must be non-negative, got {0}")]
    NegativeEta(String),

    #[error("instance is not dual-modular: {0}")]
    NotDualModular(String),

    #[error("complementing requires a strictly monotone reward; {0}")]
    NotStrictlyMonotone(String),

    #[error("total value f(V) or g(V) is zero")]
    ZeroTotal,

    #[error("subset {0:#x} has zero cost but positive reward (infinite density); perturb the cost function")]
    InfiniteDensity(Mask),

    #[error("no subset of the residual ground set has positive cost")]
    UndefinedDensity,

    #[error("residual by the full ground set is empty")]
    EmptyResidual,

    #[error("element {0} has zero cost share; its induced density is undefined")]
    ZeroCostCoordinate(usize),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("weights of a permutation mixture sum to {0}, expected 1")]
    WeightSum(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("the greedy++ variant requires a linear cost function")]
    NotLinearCost,

    #[error("contract parameter alpha = {0} lies outside [0, 1]")]
    AlphaOutOfRange(String),

    #[error("divergence {0} is not strictly convex; no error bounds are available")]
    NotStrictlyConvex(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn schema(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema {
            field: field.into(),
            message: message.into(),
        }
    }

    /// 1 for input problems, 2 for structural failures, 3 for domain errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Schema { .. }
            | Error::Io(_)
            | Error::InvalidMask { .. }
            | Error::InvalidArgument(_)
            | Error::InvalidPermutation(_)
            | Error::LengthMismatch(..)
            | Error::WeightSum(_)
            | Error::NegativeEta(_)
            | Error::AlphaOutOfRange(_) => 1,
            Error::GroundSetTooLarge { .. }
            | Error::NotStrictlyMonotone(_)
            | Error::NotDualModular(_)
            | Error::NotLinearCost
            | Error::EmptyResidual => 2,
            Error::ZeroTotal
            | Error::InfiniteDensity(_)
            | Error::UndefinedDensity
            | Error::ZeroCostCoordinate(_)
            | Error::Domain(_)
            | Error::NotStrictlyConvex(_) => 3,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
