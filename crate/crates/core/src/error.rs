use thiserror::Error;

/// Every failure the library reports.
///
/// Variants are grouped loosely as input errors, precondition errors and
/// numerical failures; [`Error::is_numerical`] distinguishes the last group.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),
    #[error("edge {edge} references unknown vertex `{id}`")]
    UnknownEndpoint { edge: usize, id: String },
    #[error("edge {edge} is a self-loop at `{id}`")]
    SelfLoop { edge: usize, id: String },
    #[error("vertex `{id}` has non-positive or non-finite measure")]
    NonpositiveMass { id: String },
    #[error("edge {edge} ({u}, {v}) has a non-positive or non-finite weight")]
    NegativeWeight { edge: usize, u: String, v: String },
    #[error("vertex `{id}` has a negative or non-finite potential")]
    NegativePotential { id: String },
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("the Dirichlet set is empty")]
    EmptyDirichletSet,
    #[error("exponent p = {0} lies outside the supported window [1.05, 20]")]
    InvalidExponent(f64),
    #[error("exponent q = {0} must exceed 1")]
    InvalidQ(f64),
    #[error("{0}")]
    InvalidArgument(String),
    #[error("weight of ({u}, {v}) would increase")]
    WeightIncreased { u: String, v: String },
    #[error("guest graph has nonzero potential at `{id}`")]
    NonzeroGuestPotential { id: String },
    #[error("attachment at `{id}` touches the Dirichlet set")]
    DirichletAttachment { id: String },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("operation needs at least {needed} vertices, got {got}")]
    TooFewVertices { needed: usize, got: usize },
    #[error("function has {got} values but the graph has {expected} vertices")]
    DomainMismatch { expected: usize, got: usize },
    #[error("function is nonzero on Dirichlet vertex `{id}`")]
    DirichletViolation { id: String },
    #[error("function vanishes on the free vertices")]
    ZeroFunction,
    #[error("energy is zero")]
    ZeroEnergy,
    #[error("problem is not well-posed: no Dirichlet vertices and zero potential")]
    IllPosed,
    #[error("free component containing `{id}` touches neither the Dirichlet set nor a potential")]
    UnboundedComponent { id: String },
    #[error("symmetric path needs an odd number of vertices, got {0}")]
    EvenVertexCount(usize),
    #[error("unsupported combination: {0}")]
    UnsupportedCombination(String),
    #[error("invalid size: {0}")]
    InvalidSize(String),
    #[error("mirror symmetry violated at index {0}")]
    AsymmetricData(usize),
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("schema error: {0}")]
    Schema(String),
}

impl Error {
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NoConvergence { .. })
    }

    /// Stable identifier used in structured error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DuplicateVertex(_) => "DuplicateVertex",
            Error::UnknownEndpoint { .. } => "UnknownEndpoint",
            Error::SelfLoop { .. } => "SelfLoop",
            Error::NonpositiveMass { .. } => "NonpositiveMass",
            Error::NegativeWeight { .. } => "NegativeWeight",
            Error::NegativePotential { .. } => "NegativePotential",
            Error::UnknownVertex(_) => "UnknownVertex",
            Error::EmptyDirichletSet => "EmptyDirichletSet",
            Error::InvalidExponent(_) => "InvalidExponent",
            Error::InvalidQ(_) => "InvalidQ",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::WeightIncreased { .. } => "WeightIncreased",
            Error::NonzeroGuestPotential { .. } => "NonzeroGuestPotential",
            Error::DirichletAttachment { .. } => "DirichletAttachment",
            Error::Disconnected => "Disconnected",
            Error::TooFewVertices { .. } => "TooFewVertices",
            Error::DomainMismatch { .. } => "DomainMismatch",
            Error::DirichletViolation { .. } => "DirichletViolation",
            Error::ZeroFunction => "ZeroFunction",
            Error::ZeroEnergy => "ZeroEnergy",
            Error::IllPosed => "IllPosed",
            Error::UnboundedComponent { .. } => "UnboundedComponent",
            Error::EvenVertexCount(_) => "EvenVertexCount",
            Error::UnsupportedCombination(_) => "UnsupportedCombination",
            Error::InvalidSize(_) => "InvalidSize",
            Error::AsymmetricData(_) => "AsymmetricData",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::Schema(_) => "SchemaError",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
