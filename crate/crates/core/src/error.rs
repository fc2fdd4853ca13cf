use thiserror::Error;

/// Errors raised by the algebra, spectral, order and isomorphism layers.
///
/// Every variant maps to a stable machine-readable code (see [`Error::code`]).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("non-finite entry in {0}")]
    NonFinite(String),
    #[error("block is not Hermitian (asymmetry {asymmetry:e} exceeds {tolerance:e})")]
    NotHermitian { asymmetry: f64, tolerance: f64 },
    #[error("function is undefined at eigenvalue {0}")]
    UndefinedFunction(f64),
    #[error("element is not in the positive cone (min eigenvalue {0:e})")]
    NotInCone(f64),
    #[error("element is outside the required interval: {0}")]
    NotInInterval(String),
    #[error("element is singular (|min eigenvalue| {0:e})")]
    Singular(f64),
    #[error("element is not a projection")]
    NotProjection,
    #[error("element is not an atom")]
    NotAtom,
    #[error("projection is not central")]
    NotCentral,
    #[error("phi parameter {0} must be < 1")]
    PhiParamRange(f64),
    #[error("matrix is not an isometry (residual {0:e})")]
    NotIsometry(f64),
    #[error("matrix is not orthogonal (residual {0:e})")]
    NotOrthogonal(f64),
    #[error("lambda {lambda} must exceed the spectral bound {bound}")]
    LambdaTooSmall { lambda: f64, bound: f64 },
    #[error("invalid scalar order isomorphism: {0}")]
    InvalidScalarIso(String),
    #[error("index map is not a bijection: {0}")]
    NotBijection(String),
    #[error("probed map is not linear (residual {0:e})")]
    NotLinear(f64),
    #[error("recovered map is not a Jordan isomorphism (residual {0:e})")]
    NotJordanHomomorphism(f64),
    #[error("schema violation at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::ShapeMismatch(_) => "SHAPE_MISMATCH",
            Error::InvalidDescriptor(_) => "INVALID_DESCRIPTOR",
            Error::NonFinite(_) => "NON_FINITE",
            Error::NotHermitian { .. } => "NOT_HERMITIAN",
            Error::UndefinedFunction(_) => "UNDEFINED_FUNCTION",
            Error::NotInCone(_) => "NOT_IN_CONE",
            Error::NotInInterval(_) => "NOT_IN_INTERVAL",
            Error::Singular(_) => "SINGULAR",
            Error::NotProjection => "NOT_PROJECTION",
            Error::NotAtom => "NOT_ATOM",
            Error::NotCentral => "NOT_CENTRAL",
            Error::PhiParamRange(_) => "PHI_PARAM_RANGE",
            Error::NotIsometry(_) => "NOT_ISOMETRY",
            Error::NotOrthogonal(_) => "NOT_ORTHOGONAL",
            Error::LambdaTooSmall { .. } => "LAMBDA_TOO_SMALL",
            Error::InvalidScalarIso(_) => "INVALID_SCALAR_ISO",
            Error::NotBijection(_) => "NOT_BIJECTION",
            Error::NotLinear(_) => "NOT_LINEAR",
            Error::NotJordanHomomorphism(_) => "NOT_JORDAN_HOMOMORPHISM",
            Error::Schema { .. } => "SCHEMA",
            Error::Io(_) => "IO",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
