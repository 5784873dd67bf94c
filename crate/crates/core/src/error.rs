use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Point lies in the singular band of the spherical chart.
    SingularChartPoint {
        theta: f64,
    },
    /// Coordinates outside the chart domain (e.g. outside the Poincaré disk).
    OutsideChart,
    /// Polar coordinates requested at or beyond the cut locus of the pole.
    CutLocus {
        distance: f64,
    },
    ZeroVector,
    InvalidProfile(String),
    /// A boundary zero of `<K, ν>` that is not transversal at sampling resolution.
    DegenerateTangency {
        t: f64,
    },
    /// `K` is tangent to the whole boundary.
    IdenticallyTangent,
    GridTooCoarse {
        n_s: usize,
        n_t: usize,
    },
    SolverDiverged {
        iterations: usize,
        residual: f64,
    },
    NewtonStalled {
        iterations: usize,
        residual: f64,
    },
    NonPositiveSolution {
        min_value: f64,
    },
    RefinementFailed,
    ZeroOnCircle,
    NotApplicable(String),
    IdenticallyZero,
    ProfileInvalid(String),
    InvalidNonlinearity(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::SingularChartPoint { theta } => {
                write!(f, "chart point in the singular band (theta = {theta})")
            }
            Error::OutsideChart => f.write_str("coordinates outside the chart domain"),
            Error::CutLocus { distance } => {
                write!(f, "point at distance {distance} is on or beyond the cut locus")
            }
            Error::ZeroVector => f.write_str("zero tangent vector"),
            Error::InvalidProfile(msg) => write!(f, "invalid domain profile: {msg}"),
            Error::DegenerateTangency { t } => {
                write!(f, "non-transversal boundary tangency near t = {t}")
            }
            Error::IdenticallyTangent => f.write_str("Killing field tangent to the whole boundary"),
            Error::GridTooCoarse { n_s, n_t } => {
                write!(f, "grid {n_s}x{n_t} below the minimum 16x32")
            }
            Error::SolverDiverged { iterations, residual } => {
                write!(f, "linear solver diverged after {iterations} iterations (residual {residual:e})")
            }
            Error::NewtonStalled { iterations, residual } => {
                write!(f, "Newton iteration stalled after {iterations} steps (residual {residual:e})")
            }
            Error::NonPositiveSolution { min_value } => {
                write!(f, "solution is not positive (min interior value {min_value:e})")
            }
            Error::RefinementFailed => f.write_str("critical point refinement failed"),
            Error::ZeroOnCircle => f.write_str("vector field vanishes on the sampling circle"),
            Error::NotApplicable(msg) => write!(f, "not applicable: {msg}"),
            Error::IdenticallyZero => f.write_str("field vanishes identically"),
            Error::ProfileInvalid(msg) => write!(f, "invalid revolution profile: {msg}"),
            Error::InvalidNonlinearity(msg) => write!(f, "invalid nonlinearity: {msg}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
