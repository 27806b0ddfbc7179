use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operands belong to different coefficient algebras")]
    AlgebraMismatch,
    #[error("exponent {exponent} falls outside the degree window [{lo}, {hi}]")]
    WindowOverflow { exponent: i64, lo: i64, hi: i64 },
    #[error("functional value requested outside its sampled range (exponent {0})")]
    FunctionalOutOfRange(i64),
    #[error("operation needs a finite basis but the algebra is infinite-dimensional")]
    InfiniteDimensionalAlgebra,
    #[error("ideal is the whole algebra")]
    ImproperIdeal,
    #[error("unsupported algebra kind: {0}")]
    UnsupportedKind(String),
    #[error("mode {mode} exceeds the configured bound {max}")]
    ModeOutOfRange { mode: i64, max: i64 },
    #[error("letter has a component outside the negative part (mode {0})")]
    NotLowering(i64),
    #[error("a basis window is required for infinite-dimensional algebras")]
    MissingWindow,
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("invalid functional: {0}")]
    InvalidFunctional(String),
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("vector is not homogeneous: {0}")]
    MixedWeight(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Errors caused by malformed input rather than by a computation running
    /// out of its configured bounds.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidAlgebra(_)
                | Error::InvalidFunctional(_)
                | Error::InvalidModule(_)
                | Error::Parse(_)
                | Error::MissingWindow
                | Error::AlgebraMismatch
                | Error::MixedWeight(_)
                | Error::NotLowering(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
