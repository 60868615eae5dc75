//! Error taxonomy shared by every module in the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// All failure modes of the library.
///
/// Variants carry enough context to reconstruct where the failure happened;
/// batch drivers record them per row instead of aborting whole runs.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("evaluator returned a non-finite value at s = {s}: {what}")]
    NonFiniteEvaluation { what: String, s: f64 },

    #[error("profile domain is empty (D = {d})")]
    EmptyDomain { d: f64 },

    #[error("coordinate s = {s} lies within the pole exclusion zone (tau = {tau}) and no limit rule is enabled")]
    PoleSingularity { s: f64, tau: f64 },

    #[error("quadrature failed to reach tolerance {tol} on [{a}, {b}] (best error estimate {achieved})")]
    QuadratureFailure { a: f64, b: f64, tol: f64, achieved: f64 },

    #[error("f' is not of constant nonzero sign on the band [{lo}, {hi}]")]
    NotMonotone { lo: f64, hi: f64 },

    #[error("two critical leaves closer than the resolution limit near s = {s}")]
    ResolutionLimit { s: f64 },

    #[error("geodesic shooting failed to converge for (s1={s1}, s2={s2}, dphi={dphi})")]
    ShootingDivergence { s1: f64, s2: f64, dphi: f64 },

    #[error("sampled distance {found} exceeds the provable diameter {diameter} beyond tolerance")]
    DiameterViolation { found: f64, diameter: f64 },

    #[error("charts fail to cover the band at eta = {eta}: {why}")]
    ChartsDontCover { eta: f64, why: String },

    #[error("profile does not have a unique maximal-leaf structure: {why}")]
    NotUniqueMinimal { why: String },

    #[error("every eta in the sweep grid failed; last error: {last}")]
    AllEtaFailed { last: String },

    #[error("eps = {eps} outside [0, 1)")]
    BadEps { eps: f64 },

    #[error("argument outside its domain: {what}")]
    DomainError { what: String },

    #[error("w0 = {w0} is at or below the sharp threshold 1/sqrt(Lambda~) = {threshold}")]
    ThresholdViolation { w0: f64, threshold: f64 },

    #[error("conformal factor lacks second-derivative data")]
    DerivativeUnavailable,

    #[error("segment is not a hemisphere: {why}")]
    NotHemisphere { why: String },

    #[error("prescribed curvature never closes the sphere: V(r) > 0 up to r_max = {r_max}")]
    NoClosure { r_max: f64 },

    #[error("integrated V dips below zero at r = {r} before closing")]
    NegativeV { r: f64 },

    #[error("generated profile violates its hypothesis: {check}")]
    HypothesisViolated { check: String },

    #[error("C2 gluing failed: {why}")]
    GluingFailure { why: String },

    #[error("invalid configuration: {why}")]
    ConfigError { why: String },

    #[error("i/o error: {why}")]
    Io { why: String },

    #[error("profile file parse error: {why}")]
    Parse { why: String },
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io { why: e.to_string() }
    }
}
