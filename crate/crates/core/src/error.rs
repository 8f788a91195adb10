use thiserror::Error;

/// Errors raised by the scattering and experiment routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("spinor has zero norm")]
    ZeroNorm,

    #[error("negative-energy mode at |p| = 0 is degenerate (E - m vanishes)")]
    DegenerateRestMode,

    #[error("overlap requested between modes with different momentum or volume")]
    MomentumMismatch,

    #[error("mode is off shell: |E^2 - p^2 - m^2| = {residual:.3e}")]
    OffShell { residual: f64 },

    #[error("singular continuity system (condition number {condition:.3e})")]
    SingularSystem { condition: f64 },

    #[error(
        "resonance: cavity denominator {denominator:.3e} below floor {floor:.1e} \
         at k/m = {k}, eA/m = {ea}, m tau = {tau}"
    )]
    Resonance {
        denominator: f64,
        floor: f64,
        k: f64,
        ea: f64,
        tau: f64,
    },

    #[error("integrator failure: {0}")]
    Integrator(String),

    #[error("oracle did not converge under width refinement (Richardson residual {residual:.3e})")]
    NonConvergence { residual: f64 },

    #[error("incomplete outcome set: probabilities sum to {sum} (residual {residual:.3e})")]
    Incomplete { sum: f64, residual: f64 },

    #[error("matrix is not unitary (|U^dag U - I| = {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("singular fixed-point operator (condition number {condition:.3e})")]
    SingularFixedPoint { condition: f64 },

    #[error("Monte Carlo estimate requested with zero trials")]
    ZeroTrials,

    #[error("strict Deutsch regime requires R = 1, got R = {reflectivity}")]
    NotDeutschRegime { reflectivity: f64 },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// True for failures of the numerics (resonances, singular solves,
    /// integrator trouble) as opposed to rejected inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::SingularSystem { .. }
                | Error::Resonance { .. }
                | Error::Integrator(_)
                | Error::NonConvergence { .. }
                | Error::SingularFixedPoint { .. }
                | Error::Incomplete { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_finite(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::invalid(name, format!("must be finite, got {value}")))
    }
}

pub(crate) fn ensure_positive(name: &'static str, value: f64) -> Result<f64> {
    ensure_finite(name, value)?;
    if value > 0.0 {
        Ok(value)
    } else {
        Err(Error::invalid(name, format!("must be > 0, got {value}")))
    }
}

pub(crate) fn ensure_non_negative(name: &'static str, value: f64) -> Result<f64> {
    ensure_finite(name, value)?;
    if value >= 0.0 {
        Ok(value)
    } else {
        Err(Error::invalid(name, format!("must be >= 0, got {value}")))
    }
}
