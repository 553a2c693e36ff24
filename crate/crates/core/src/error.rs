use serde::Serialize;
use thiserror::Error;

use crate::quaternion::Quaternion;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error, Serialize)]
#[serde(tag = "error", rename_all = "snake_case")]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A known singularity sits closer to the stencil centre than the configured clearance.
    #[error("singularity at distance {distance:.3e} is inside the required clearance {required:.3e}")]
    Clearance { distance: f64, required: f64 },

    #[error("integrand is singular at a quadrature node after {attempts} grid rotations")]
    SingularNode { attempts: usize },

    #[error("point {point} is simultaneously a zero and a pole of the function")]
    AmbiguousPoint { point: Quaternion },

    #[error("degenerate linear fractional transformation: rows are left-proportional")]
    DegenerateTransform,

    /// Routing signal: some zero or pole lies on the integration sphere.
    #[error("{count} zero/pole entries lie on the sphere of radius {rho}")]
    BoundaryContact { rho: f64, count: usize },

    /// Routing signal: the function vanishes or blows up at the origin.
    #[error("function has a zero or pole of order {order} at the origin")]
    OriginSingular { order: i64 },

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("radius extrapolation unstable: successive extrapolants differ by {spread:.3e}")]
    ExtrapolationUnstable { spread: f64 },
}
