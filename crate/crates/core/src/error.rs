use thiserror::Error;

use crate::posetal::LocalityReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every domain error raised by the kernel.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),

    #[error("unknown element `{0}`")]
    UnknownElement(String),

    #[error("order relation has a cycle through `{0}` and `{1}`")]
    CycleError(String, String),

    #[error("map is not monotone: `{0}` <= `{1}` but images are not ordered")]
    NotMonotone(String, String),

    #[error("malformed map: {0}")]
    MalformedMap(String),

    #[error("not a lattice: {0}")]
    NotALattice(String),

    #[error("lattice is not distributive at ({0}, {1}, {2})")]
    NotDistributive(String, String, String),

    #[error("not a lattice homomorphism: {op} of `{a}` and `{b}` is not preserved")]
    NotLatticeHom { a: String, b: String, op: &'static str },

    #[error("not a cospan: {0}")]
    NotACospan(String),

    #[error("morphisms are not composable: {0}")]
    NotComposable(String),

    #[error("not a functor at arrow `{arrow}`: {reason}")]
    NotAFunctor { arrow: String, reason: String },

    #[error("not natural at arrow `{0}`")]
    NotNatural(String),

    #[error("not a cone: {0}")]
    NotACone(String),

    #[error("square does not commute")]
    NonCommuting,

    #[error("base category does not support {0}")]
    CapabilityMissing(&'static str),

    #[error("limit does not exist: {0}")]
    NoLimit(String),

    #[error("base category has no initial object")]
    NoInitialObject,

    #[error("mismatch: {0}")]
    Mismatch(String),

    #[error("pointwise limit failed at interval {interval}")]
    FailureAt {
        interval: String,
        /// Every failing interval in canonical order, when all failures were collected.
        all: Vec<String>,
    },

    #[error("labelling is not local ({} failing squares)", .0.failures().count())]
    NotLocal(Box<LocalityReport>),

    #[error("universal property fails for probe {probe}: {mediators} mediating morphisms")]
    CounterExample { probe: usize, mediators: usize },

    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DuplicateElement(_) => "DuplicateElement",
            Error::UnknownElement(_) => "UnknownElement",
            Error::CycleError(..) => "CycleError",
            Error::NotMonotone(..) => "NotMonotone",
            Error::MalformedMap(_) => "MalformedMap",
            Error::NotALattice(_) => "NotALattice",
            Error::NotDistributive(..) => "NotDistributive",
            Error::NotLatticeHom { .. } => "NotLatticeHom",
            Error::NotACospan(_) => "NotACospan",
            Error::NotComposable(_) => "NotComposable",
            Error::NotAFunctor { .. } => "NotAFunctor",
            Error::NotNatural(_) => "NotNatural",
            Error::NotACone(_) => "NotACone",
            Error::NonCommuting => "NonCommuting",
            Error::CapabilityMissing(_) => "CapabilityMissing",
            Error::NoLimit(_) => "NoLimit",
            Error::NoInitialObject => "NoInitialObject",
            Error::Mismatch(_) => "Mismatch",
            Error::FailureAt { .. } => "FailureAt",
            Error::NotLocal(_) => "NotLocal",
            Error::CounterExample { .. } => "CounterExample",
            Error::InternalInvariantViolation(_) => "InternalInvariantViolation",
            Error::Parse(_) => "Parse",
        }
    }
}
