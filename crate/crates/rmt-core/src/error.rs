use thiserror::Error;

/// Errors shared by every module in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite input: {what} = {value}")]
    NonFinite { what: &'static str, value: f64 },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("capability limit exceeded: {0}")]
    Capability(String),

    #[error("kernel evaluated to a non-finite value at nodes ({x}, {y})")]
    KernelValue { x: f64, y: f64 },

    #[error("(I - K) is numerically singular (smallest pivot {pivot:.3e})")]
    Singular { pivot: f64 },

    #[error("kernel spectral radius >= 1 on ({lower}, inf); resolvent does not exist")]
    SpectralRadius { lower: f64 },

    #[error("accuracy target {target:.3e} not reached: achieved {achieved:.3e}")]
    Accuracy { target: f64, achieved: f64 },

    #[error("truncation tail too large: |f({at})| = {value:.3e} exceeds {limit:.3e}")]
    Truncation { at: f64, value: f64, limit: f64 },

    #[error("unstable integration: {0}")]
    Instability(String),

    #[error("{0} requires a resolved nu identification (run identify_nu first)")]
    NuUnresolved(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_finite(what: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite { what, value })
    }
}
