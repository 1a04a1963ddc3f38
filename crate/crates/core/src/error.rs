use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },
    #[error("path passes within {guard:e} of branch point {index}")]
    BranchPointHit { index: usize, guard: f64 },
    #[error("point lies on a branch point")]
    OnBranchPoint,
    #[error("kernel singular: |s| = {0:e} below guard")]
    SingularKernel(f64),
    #[error("contour precondition violated: {0}")]
    Precondition(String),
    #[error("quadrature did not converge: {0}")]
    Quadrature(String),
    #[error("strip solve did not converge: tail ratio {tail:e} at N = {order}")]
    NonConvergence { order: usize, tail: f64 },
    #[error("contour pinched: {0}")]
    Pinch(String),
    #[error("geometry: {0}")]
    Geometry(String),
    #[error("singular matrix (condition estimate {0:e})")]
    Singular(f64),
    #[error("rounding residual {residual:e} exceeds {threshold:e}")]
    Rounding { residual: f64, threshold: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
