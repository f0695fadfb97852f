use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Error)]
pub enum Error {
    /// A point left the open half-plane r > 0.
    #[error("point outside the half-plane: r = {r} (must be > 0)")]
    Domain { r: f64 },

    /// Curve too short or collapsed to evaluate geometry on.
    #[error("degenerate curve: total Euclidean length {length:.3e} below threshold")]
    DegenerateCurve { length: f64 },

    /// A flow step would produce an invalid curve.
    #[error("flow step rejected at t = {t}: {reason}")]
    StepRejected { t: f64, reason: String },

    /// Conservation diagnostics exceeded the configured tolerance.
    #[error("scheme quality abort at t = {t}: Gauss area drift {drift:.3e} exceeds tolerance {tol:.3e}")]
    SchemeQuality { t: f64, drift: f64, tol: f64 },

    /// No b > a closes the Gauss-area equation for this rectangle family member.
    #[error("no solution: Gauss area 2*pi unreachable for a = {a} (minimum attainable {ga_min:.6})")]
    NoSolution { a: f64, ga_min: f64 },

    /// Bisection bracket endpoints did not classify as (Left, Right).
    #[error("invalid bracket: flow of a = {a_lo} gave {lo_kind}, a = {a_hi} gave {hi_kind} (need ExitedLeft / ExitedRight)")]
    BracketInvalid {
        a_lo: f64,
        a_hi: f64,
        lo_kind: String,
        hi_kind: String,
    },

    /// Shooting miss function has the same sign at both bracket ends.
    #[error("no sign change of the shooting miss function on [{a_lo}, {a_hi}]")]
    NoSignChange { a_lo: f64, a_hi: f64 },

    /// Geodesic integration left the search window r < R_escape.
    #[error("trajectory escaped: r = {r} exceeded bound {bound}")]
    Escape { r: f64, bound: f64 },

    /// Geodesic integration reached the axis r = 0.
    #[error("trajectory collapsed: r = {r} below {floor:.1e}")]
    Collapse { r: f64, floor: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
