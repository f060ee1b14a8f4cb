use num_complex::Complex64 as C64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("pole at z = {0}")]
    PoleAtPoint(C64),
    #[error("series expansion requested at a pole (denominator vanishes at 0)")]
    ExpansionAtPole,
    #[error("root finding failed: {0}")]
    RootFindingFailed(String),
    #[error("pole strictly inside the unit disk at {0}")]
    PoleInDisk(C64),
    #[error("derivative has a multiple zero on the unit circle at {0}")]
    NotInRO(C64),
    #[error("pole of order {order} on the unit circle at {at}: not classified")]
    NotClassified { at: C64, order: usize },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("branch tracking failed: closure defect {0:e}")]
    BranchTrackingFailed(f64),
    #[error("quadrature budget exceeded at r = {r} ({panels} panels)")]
    QuadratureBudgetExceeded { r: f64, panels: usize },
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("invalid weight parameter alpha = {0}")]
    InvalidWeight(f64),
    #[error("series truncation unreliable: tail {tail:e} vs partial sum {partial:e}")]
    TruncationUnreliable { tail: f64, partial: f64 },
    #[error("unknown catalog entry `{0}`")]
    UnknownEntry(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by the caller's input rather than by a numerical failure.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Invalid(_) | Error::Config(_) | Error::UnknownEntry(_) | Error::Io(_)
        )
    }
}
