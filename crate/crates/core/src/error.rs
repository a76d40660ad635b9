use thiserror::Error;

/// Errors raised by the geometry kernels and family constructors.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite component in vector ({x}, {y}, {z})")]
    NonFinite { x: f64, y: f64, z: f64 },

    #[error("domain error: {what} = {value} outside [{lo}, {hi}]")]
    Domain {
        what: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("derivative of order {order} unavailable (curve carries up to {max})")]
    OrderUnavailable { order: usize, max: usize },

    #[error("degenerate tangent plane at (s, t) = ({s}, {t}): EG - F^2 = {disc}")]
    Degenerate { s: f64, t: f64, disc: f64 },

    #[error("degenerate grid point at node ({i}, {j}): EG - F^2 = {disc}")]
    DegenerateNode { i: usize, j: usize, disc: f64 },

    #[error("zero mean curvature at (s, t) = ({s}, {t}): H = {h}")]
    ZeroMeanCurvature { s: f64, t: f64, h: f64 },

    #[error("zero mean curvature at step {step}, node ({i}, {j}): H = {h}")]
    ZeroMeanCurvatureNode { step: usize, i: usize, j: usize, h: f64 },

    #[error("ZeroC: the soliton constant C must be nonzero")]
    ZeroC,

    #[error("causal error: {0}")]
    Causal(String),

    #[error("parameter error: {0}")]
    Param(String),

    #[error("hypothesis error: {0}")]
    Hypothesis(String),

    #[error("ZeroB: b(s) vanishes or changes sign near s = {s}")]
    ZeroB { s: f64 },

    #[error("SingularityError: profile function f vanishes in the interval near s = {s}")]
    Singularity { s: f64 },

    #[error("NegativeRadicand: quadrature radicand is {value} < 0 at s = {s}")]
    NegativeRadicand { s: f64, value: f64 },

    #[error("quadrature failed to reach tolerance {tol} (estimate {estimate}) after {intervals} subintervals")]
    Quadrature {
        tol: f64,
        estimate: f64,
        intervals: usize,
    },

    #[error("step size too large at step {step}: max |dt/H| = {displacement} exceeds {limit}")]
    StepTooLarge {
        step: usize,
        displacement: f64,
        limit: f64,
    },

    #[error("grid error: {0}")]
    Grid(String),
}

impl Error {
    /// True for failures of the numerics (singular profiles, degenerate
    /// points, vanishing curvature) as opposed to invalid input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Degenerate { .. }
                | Error::DegenerateNode { .. }
                | Error::ZeroMeanCurvature { .. }
                | Error::ZeroMeanCurvatureNode { .. }
                | Error::Singularity { .. }
                | Error::NegativeRadicand { .. }
                | Error::Quadrature { .. }
                | Error::StepTooLarge { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
