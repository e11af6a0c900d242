use std::path::PathBuf;

use thiserror::Error;

use crate::gaussian::Stability;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: String, reason: String },

    #[error(
        "band solve at depth {depth} not converged: energies moved by {change:.3e} (relative) \
         when the plane-wave cutoff was raised from {cutoff} to {}",
        cutoff + 5
    )]
    BandNotConverged { depth: f64, cutoff: usize, change: f64 },

    #[error("Wannier phase fixing failed at k = {k}: |psi_k(0)| = {amplitude:e}")]
    PhaseFixing { k: f64, amplitude: f64 },

    #[error("Wannier functions live on different position grids")]
    GridMismatch,

    #[error("Lieb-Liniger parameter gamma = {0} is not below (2 pi)^2; phonon correction is imaginary")]
    GammaOutOfRange(f64),

    #[error("backscattering amplitude g1perp = {g1perp} outside the weak-coupling window |g1perp| < 2 pi v_f = {limit}")]
    SpinSectorOutOfRange { g1perp: f64, limit: f64 },

    #[error("operation requires a stable theory, found {0}")]
    Unstable(Stability),

    #[error("unknown preset `{0}` (expected one of fig1, fig2a, fig2b, fig3a, fig3b)")]
    UnknownPreset(String),

    #[error("configuration: {0}")]
    Config(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn param(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name: name.into(),
            reason: reason.into(),
        }
    }

    /// Whether the error stems from user configuration rather than numerics.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::UnknownPreset(_) | Error::Config(_) | Error::Io { .. }
        )
    }
}
