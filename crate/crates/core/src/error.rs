use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate metric at X = ({}, {}): |g1 x g2|^2 = {det:e}", point[0], point[1])]
    DegenerateMetric { point: [f64; 2], det: f64 },

    #[error("boundary tangent vanishes at X = ({}, {})", point[0], point[1])]
    ZeroTangent { point: [f64; 2] },

    #[error("mesh generation failed: {0}")]
    MeshFailure(String),

    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("unsupported quadrature order {0} (expected 1..=4)")]
    UnsupportedOrder(usize),

    #[error("incompatible load: compatibility defect {defect:e} exceeds threshold {threshold:e}")]
    IncompatibleLoad { defect: f64, threshold: f64 },

    #[error("conjugate gradients did not converge in {iterations} iterations (relative residual {residual:e})")]
    MaxIterExceeded { iterations: usize, residual: f64 },

    #[error("interior block of the stiffness matrix is singular")]
    SingularInteriorBlock,

    #[error("no Dirichlet value supplied for boundary vertex {0}")]
    MissingBoundaryValue(usize),

    #[error("inverse power iteration did not converge in {iterations} iterations")]
    EigenNoConvergence { iterations: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
