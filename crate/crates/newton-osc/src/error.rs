use thiserror::Error;

/// Errors surfaced by the analysis pipeline and its building blocks.
#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at byte {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("axis {axis} out of range for dimension {dim}")]
    AxisOutOfRange { axis: usize, dim: usize },

    #[error("the zero polynomial is not a valid phase")]
    ZeroPolynomial,

    #[error("phase has a nonzero constant term; f(0) = 0 is required")]
    NonzeroConstantTerm,

    #[error("phase has a degree-one term; the gradient must vanish at the origin")]
    GradientAtOrigin,

    #[error("no facet with positive offset; the origin lies in the polyhedron")]
    NoPositiveFacet,

    #[error("face is not compact")]
    NonCompactFace,

    #[error("cone is not simplicial")]
    NonSimplicialCone,

    #[error("cone is not smooth (lattice index {index})")]
    NonSmoothCone { index: i64 },

    #[error("zero vector has no primitive form")]
    ZeroVector,

    #[error("monomial pullback identity failed on a chart; fan or polyhedron is inconsistent")]
    PullbackIdentity,

    #[error("chart residual has zero constant term; fan or polyhedron is inconsistent")]
    ZeroResidualConstant,

    #[error("phase is degenerate: gradient of a face part vanishes at {witness}")]
    DegeneratePhase { witness: String },

    #[error("nondegeneracy check inconclusive: numeric minimum {minimum:e} in the ambiguous band")]
    InconclusiveNondegeneracy { minimum: f64 },

    #[error("quadrature did not converge at lambda = {lambda}: last relative delta {delta:e} after {nodes} nodes per axis")]
    QuadratureNonConvergence { lambda: f64, delta: f64, nodes: usize },

    #[error("quadrature produced a non-finite value at lambda = {lambda}")]
    NonFiniteIntegral { lambda: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
