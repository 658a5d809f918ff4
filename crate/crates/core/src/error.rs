use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point ({s}, {t}) lies outside the patch domain (or within the finite-difference margin)")]
    OutOfDomain { s: f64, t: f64 },

    #[error("parameter {value} lies outside the curve domain [{lo}, {hi}]")]
    OutOfCurveDomain { value: f64, lo: f64, hi: f64 },

    #[error("degenerate patch: |psi_s x psi_t| = {0:e}")]
    DegeneratePatch(f64),

    #[error("degenerate metric: determinant {0:e}")]
    DegenerateMetric(f64),

    #[error("degenerate plane basis: |u x v|^2 = {0:e}")]
    DegenerateBasis(f64),

    #[error("frame is not orthonormal (deviation {0:e})")]
    NonOrthonormalFrame(f64),

    #[error("vector field C must be nonzero and finite")]
    ZeroVectorField,

    #[error("ruling direction must be a nonzero vector orthogonal to the profile plane axis")]
    InvalidRuling,

    #[error("finite-difference step must be positive, got {0}")]
    InvalidStep(f64),

    #[error("profile point lies on the rotation axis (x = {0:e})")]
    AxisPoint(f64),

    #[error("closed form requires C = (0, 0, 1), got ({0}, {1}, {2})")]
    NotAxisAligned(f64, f64, f64),

    #[error("initial state lies on the singular set |2z' - x x'| = {0:e}")]
    SingularStart(f64),

    #[error("line crosses the rotation axis at s = {0}")]
    LineCrossesAxis(f64),

    #[error("circle of radius {r} centred at x = {c1} touches the rotation axis")]
    CircleTouchesAxis { r: f64, c1: f64 },

    #[error("quadratic in z' has no root at x = {0}")]
    NoRoot(f64),

    #[error("root branch lost realness or continuity at x = {0}")]
    BranchLost(f64),

    #[error("parameter c = {0} is excluded from the separable solution family")]
    ExcludedParameter(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("empty domain: {0}")]
    EmptyDomain(String),
}

pub type Result<T> = std::result::Result<T, Error>;
