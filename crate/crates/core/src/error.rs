use thiserror::Error;

use crate::spin::Transition;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("state is not normalized: norm² = {norm_sq}")]
    NotNormalized { norm_sq: f64 },

    #[error("invalid value for {name}: {value}")]
    InvalidParameter { name: &'static str, value: f64 },

    #[error("norm drifted to {norm} at t = {time} (step too large?)")]
    NormDrift { time: f64, norm: f64 },

    #[error("length of spin {spin} drifted to {length} at t = {time} (step too large?)")]
    LengthDrift { time: f64, spin: u8, length: f64 },

    #[error("eigendecomposition residual {residual:e} exceeds tolerance")]
    EigenResidual { residual: f64 },

    #[error("π-pulse on {target} needs a nonzero Rabi frequency for the driven spin")]
    ZeroRabi { target: Transition },

    #[error("transition {target} at {frequency} coincides with a transition of the other spin; no selective excitation possible")]
    NonSelective { target: Transition, frequency: f64 },

    #[error("initial state kind does not match the requested engine")]
    EngineMismatch,
}

impl Error {
    /// Whether the error reports a violated numerical invariant rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NormDrift { .. } | Error::LengthDrift { .. } | Error::EigenResidual { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
