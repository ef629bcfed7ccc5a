use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("box has lower >= upper on axis {axis}")]
    DegenerateBox { axis: usize },

    #[error("domain needs at least one box or an included mask cell")]
    EmptyDomain,

    #[error("boxes {first} and {second} have overlapping interiors")]
    OverlappingBoxes { first: usize, second: usize },

    #[error("invalid grid mask: {0}")]
    InvalidMask(String),

    #[error("box and mask measures disagree: {boxes} vs {mask}")]
    MeasureMismatch { boxes: f64, mask: f64 },

    #[error("value must be finite and positive: {0}")]
    NonPositive(&'static str),

    #[error("matrix is not Hermitian at ({row}, {col})")]
    NotHermitian { row: usize, col: usize },

    #[error("matrix order {order} exceeds the cap of {cap}; shrink the truncation")]
    OrderTooLarge { order: usize, cap: usize },

    #[error("order mismatch: {0}")]
    OrderMismatch(String),

    #[error("Jacobi iteration did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("eigen residual {residual:e} exceeds {limit:e}")]
    EigenResidual { residual: f64, limit: f64 },

    #[error("frequency set is empty")]
    EmptyFrequencySet,

    #[error("frequencies {first} and {second} coincide")]
    DuplicateFrequency { first: usize, second: usize },

    #[error("closed form needs a box domain; use the quadrature path for mask-only domains")]
    MaskOnlyDomain,

    #[error("weight is sampled on a different domain or quadrature rule")]
    IncompatibleWeight,

    #[error("weight vanishes on part of the domain (min |phi^| = {inf_mod:e}); use the frame transfer instead")]
    VanishingWeight { inf_mod: f64 },

    #[error("weight support E_phi is empty")]
    EmptySupport,

    #[error("domain must be [-1/2, 1/2]")]
    WrongBand,

    #[error("domain must lie inside [0, 1]")]
    OutsideUnitInterval,

    #[error("profile has no compact support")]
    NonCompactProfile,

    #[error("side {side} does not divide modulus {modulus}")]
    SideNotDividing { side: u32, modulus: u32 },

    #[error("invalid group instance: {0}")]
    InvalidInstance(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
