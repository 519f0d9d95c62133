use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("interval [{a}, {b}] is empty")]
    EmptyInterval { a: f64, b: f64 },
    #[error("inner knots must be strictly increasing (position {position})")]
    NonIncreasingKnots { position: usize },
    #[error("knot {value} lies outside the open interval ({a}, {b})")]
    KnotOutsideInterval { value: f64, a: f64, b: f64 },
    #[error("index {index} outside the valid range {min}..={max}")]
    IndexOutOfRange {
        index: isize,
        min: isize,
        max: isize,
    },
    #[error("point {x} outside the domain [{a}, {b}]")]
    PointOutsideDomain { x: f64, a: f64, b: f64 },
    #[error("derivative order {order} exceeds the admissible maximum {max}")]
    DerivOrderTooHigh { order: usize, max: usize },
    #[error("the zero-integral spline space is degenerate (g + k = 0)")]
    DegenerateSpace,
    #[error("expected {expected} coefficients, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("splines are defined on different knot sequences")]
    KnotMismatch,
    #[error("g = {g} inner knots is not dyadic for degree {k}: need g = (2^N - 1)(k + 1) - k")]
    NonDyadicKnots { g: usize, k: usize },
    #[error("norm {norm:e} fell below the breakdown tolerance; input functions are dependent")]
    NumericalBreakdown { norm: f64 },
    #[error("density must be strictly positive (found {value} at position {position})")]
    NonpositiveDensity { position: usize, value: f64 },
    #[error("relative frequency at position {position} is zero")]
    ZeroFrequency { position: usize },
    #[error("value {value} would overflow the exponential")]
    OverflowRisk { value: f64 },
    #[error("grid functions are sampled on different abscissae")]
    GridMismatch,
    #[error("grid has {len} points; at most {max} are supported")]
    GridTooLarge { len: usize, max: usize },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("the smoothing system is not positive definite")]
    SingularSystem,
    #[error("collocation matrix is rank deficient: no data point for interlacing index {index}")]
    InfeasibleDesign { index: isize },
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("need at least 2 observations, got {n}")]
    TooFewObservations { n: usize },
    #[error("component {component} out of range (have {count})")]
    ComponentOutOfRange { component: usize, count: usize },
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn name(&self) -> &'static str {
        match self {
            Error::EmptyInterval { .. } => "EmptyInterval",
            Error::NonIncreasingKnots { .. } => "NonIncreasingKnots",
            Error::KnotOutsideInterval { .. } => "KnotOutsideInterval",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::PointOutsideDomain { .. } => "PointOutsideDomain",
            Error::DerivOrderTooHigh { .. } => "DerivOrderTooHigh",
            Error::DegenerateSpace => "DegenerateSpace",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::KnotMismatch => "KnotMismatch",
            Error::NonDyadicKnots { .. } => "NonDyadicKnots",
            Error::NumericalBreakdown { .. } => "NumericalBreakdown",
            Error::NonpositiveDensity { .. } => "NonpositiveDensity",
            Error::ZeroFrequency { .. } => "ZeroFrequency",
            Error::OverflowRisk { .. } => "OverflowRisk",
            Error::GridMismatch => "GridMismatch",
            Error::GridTooLarge { .. } => "GridTooLarge",
            Error::InvalidGrid(_) => "InvalidGrid",
            Error::SingularSystem => "SingularSystem",
            Error::InfeasibleDesign { .. } => "InfeasibleDesign",
            Error::InvalidParameter { .. } => "InvalidParameter",
            Error::TooFewObservations { .. } => "TooFewObservations",
            Error::ComponentOutOfRange { .. } => "ComponentOutOfRange",
        }
    }
}
