use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Side tangent has vanishing norm; curvature is undefined.
    #[error("lightlike surface point (W = {w:e})")]
    LightlikeSurface { w: f64 },

    /// Both x-partials vanish: the tangent plane is pseudo-Euclidean.
    #[error("inadmissible patch: x_1 = x_2 = 0")]
    InadmissiblePatch,

    /// Denominator of a specialized factorable-surface formula vanishes.
    #[error("lightlike locus of factorable surface (denominator = {denominator:e})")]
    LightlikeLocus { denominator: f64 },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("outside domain: {0}")]
    DomainError(String),

    #[error("grid rejected: {0}")]
    GridRejected(String),

    /// Integration reached or crossed the branch boundary of a radicand.
    #[error("branch violation at t = {t}: {reason}")]
    BranchViolation { t: f64, reason: String },

    #[error("integration blew up at t = {t} (|y| = {magnitude:e})")]
    BlowUp { t: f64, magnitude: f64 },

    #[error("non-finite value in ODE right-hand side at t = {t}")]
    NonFinite { t: f64 },
}
