use thiserror::Error;

/// Crate-wide error type.
///
/// Variants split into two broad classes: domain problems (bad parameters,
/// inputs outside the support, unusable data) and numeric failures
/// (quadrature or optimization that did not converge). [`Error::is_numeric`]
/// distinguishes the two so callers can map them to distinct exit codes.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter {name} must be {requirement}, got {value}")]
    InvalidParameter {
        name: &'static str,
        requirement: &'static str,
        value: f64,
    },

    #[error("{name} must be finite, got {value}")]
    NonFinite { name: &'static str, value: f64 },

    #[error("{name} = {value} lies outside the support (0, 1]")]
    OutsideSupport { name: &'static str, value: f64 },

    #[error("probability must lie in {range}, got {value}")]
    InvalidProbability { range: &'static str, value: f64 },

    #[error("moment order k must be a positive integer")]
    ZeroMomentOrder,

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("dataset value at row {row} is {value}, outside (0, 1]")]
    InvalidDatum { row: u64, value: f64 },

    #[error("csv error at line {line}: {message}")]
    Csv { line: u64, message: String },

    #[error("io error on {path}: {message}")]
    Io { path: String, message: String },

    #[error("likelihood undefined: {reason}")]
    UndefinedLikelihood { reason: String },

    #[error("no applicable model: {0}")]
    NoApplicableModel(String),

    #[error(
        "quadrature stopped at estimated error {error:.3e} after {subdivisions} subdivisions \
         (requested {requested:.3e})"
    )]
    QuadratureAccuracy {
        error: f64,
        requested: f64,
        subdivisions: usize,
    },

    #[error("root finding failed: {0}")]
    RootFinding(String),

    #[error("optimization failed: {0}")]
    Optimization(String),
}

impl Error {
    /// True for numeric failures (non-convergence), false for domain and
    /// data errors. The CLI maps numeric failures to exit code 3 and
    /// everything else to exit code 2.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::QuadratureAccuracy { .. } | Error::RootFinding(_) | Error::Optimization(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_finite(name: &'static str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite { name, value: x })
    }
}

/// The common support (0, 1]: zero excluded, exact one included.
pub(crate) fn check_unit_support(name: &'static str, t: f64) -> Result<()> {
    check_finite(name, t)?;
    if t > 0.0 && t <= 1.0 {
        Ok(())
    } else {
        Err(Error::OutsideSupport { name, value: t })
    }
}

/// Probability in (0, 1], the domain used by quantile-style inversions here.
pub(crate) fn check_probability_open_closed(p: f64) -> Result<()> {
    check_finite("p", p)?;
    if p > 0.0 && p <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidProbability {
            range: "(0, 1]",
            value: p,
        })
    }
}
