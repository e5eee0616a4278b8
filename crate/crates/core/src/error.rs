use thiserror::Error;

use crate::fan::ConeRef;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid invariant factors: {0}")]
    InvalidGroup(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("homomorphism is not well defined: {0}")]
    IllDefinedHom(String),

    #[error("kernel requested for a homomorphism with torsion in its source")]
    NonFreeSource,

    #[error("the vectors b_1..b_m do not span N_Q, so the cokernel of beta is infinite")]
    InfiniteCokernel,

    #[error("ray {0} has zero image in N_Q")]
    ZeroRay(usize),

    #[error("cone {0} is not simplicial")]
    NotSimplicial(ConeRef),

    #[error("cones {0} and {1} do not meet along a common face")]
    BadIntersection(ConeRef, ConeRef),

    #[error("ray index {index} out of range (fan has {count} rays)")]
    RayOutOfRange { index: usize, count: usize },

    #[error("{0} is not a cone of the fan")]
    NotACone(ConeRef),

    #[error("link ray {0} projects to zero in the quotient")]
    DegenerateImage(usize),

    #[error("point lies outside the support of the fan")]
    OutsideSupport,

    #[error("no cone contains both box elements")]
    NoCommonCone,

    #[error("element is not in Box")]
    NotABoxElement,

    #[error("the fan is not complete")]
    IncompleteFan,

    #[error("sector {sector} still has basis elements at degree level {level}; the presentation is not finite dimensional")]
    InfiniteDimensional { sector: usize, level: usize },

    #[error("base ring has {found} twist classes, the stacky fan needs {expected}")]
    TwistArityMismatch { expected: usize, found: usize },

    #[error("invalid base ring: {0}")]
    InvalidBaseRing(String),

    #[error("structure constants violate {0}")]
    StructureViolation(String),

    #[error("triple does not form a 3-twisted sector")]
    NotASector,

    #[error("ray {ray} has coefficient {value} in g1+g2+g3, expected 1 or 2")]
    UnexpectedCoefficient { ray: usize, value: String },

    #[error("no support function with values in [1, {0}] on the new rays")]
    Unsatisfiable(u64),

    #[error("support function rejected: {0}")]
    Inconsistent(String),

    #[error("invalid subdivision: {0}")]
    InvalidSubdivision(String),

    #[error("{pointer}: {message}")]
    InvalidDocument { pointer: String, message: String },
}

impl Error {
    /// Stable variant name, used in machine-readable diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidGroup(_) => "InvalidGroup",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::IllDefinedHom(_) => "IllDefinedHom",
            Error::NonFreeSource => "NonFreeSource",
            Error::InfiniteCokernel => "InfiniteCokernel",
            Error::ZeroRay(_) => "ZeroRay",
            Error::NotSimplicial(_) => "NotSimplicial",
            Error::BadIntersection(..) => "BadIntersection",
            Error::RayOutOfRange { .. } => "RayOutOfRange",
            Error::NotACone(_) => "NotACone",
            Error::DegenerateImage(_) => "DegenerateImage",
            Error::OutsideSupport => "OutsideSupport",
            Error::NoCommonCone => "NoCommonCone",
            Error::NotABoxElement => "NotABoxElement",
            Error::IncompleteFan => "IncompleteFan",
            Error::InfiniteDimensional { .. } => "InfiniteDimensional",
            Error::TwistArityMismatch { .. } => "TwistArityMismatch",
            Error::InvalidBaseRing(_) => "InvalidBaseRing",
            Error::StructureViolation(_) => "StructureViolation",
            Error::NotASector => "NotASector",
            Error::UnexpectedCoefficient { .. } => "UnexpectedCoefficient",
            Error::Unsatisfiable(_) => "Unsatisfiable",
            Error::Inconsistent(_) => "Inconsistent",
            Error::InvalidSubdivision(_) => "InvalidSubdivision",
            Error::InvalidDocument { .. } => "InvalidDocument",
        }
    }
}
