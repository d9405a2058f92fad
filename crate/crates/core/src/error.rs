use thiserror::Error;

/// Errors raised by the transform, moment and detection routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not symplectic: |ad - bc - 1| = {residual:e}")]
    NotSymplectic { residual: f64 },

    #[error("matrix entry `{entry}` must be non-zero")]
    ZeroEntry { entry: &'static str },

    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),

    #[error("invalid width `{name}` = {value}: must be positive")]
    InvalidWidth { name: &'static str, value: f64 },

    #[error("linear canonical kernel needs b != 0")]
    ZeroB,

    #[error("signal has unbounded support; window it first")]
    UnboundedSupport,

    #[error("signal vanishes at the origin (|f(0)| = {0:e})")]
    ZeroAtOrigin(f64),

    #[error("grids have mismatched axes")]
    AxisMismatch,

    #[error("signal has zero energy")]
    ZeroEnergy,

    #[error("direct and decomposed uncertainty products disagree: {direct} vs {decomposed}")]
    DecompositionMismatch { direct: f64, decomposed: f64 },

    #[error("slope-to-rate map is degenerate (b1*d1 - a1*c1 = 0)")]
    DegenerateMap,

    #[error("empty grid")]
    EmptyGrid,

    #[error("invalid axis: {0}")]
    InvalidAxis(String),

    #[error("side condition violated: {0}")]
    SideCondition(&'static str),

    #[error("signal declared real-valued but has imaginary part {0:e}")]
    NotRealValued(f64),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
