use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("{what} did not converge: achieved error {achieved:e}, requested {requested:e}")]
    Convergence {
        what: &'static str,
        achieved: f64,
        requested: f64,
    },

    #[error("solver error: {0}")]
    Solver(String),

    #[error(
        "degenerate coupling alpha = {alpha}: the shifted ground state vanishes at the origin \
         (relative value {ratio:e}); retry with a perturbed alpha"
    )]
    DegenerateCoupling { alpha: f64, ratio: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn validation<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Validation(msg.into()))
}
