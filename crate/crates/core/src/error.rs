use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("input domain error: {0}")]
    InputDomain(String),

    #[error("degenerate vacuum manifold: {0}")]
    DegenerateManifold(String),

    #[error("projection onto the vacuum manifold is undefined: {0}")]
    ProjectionUndefined(String),

    #[error("geodesic between the endpoints is not unique: {0}")]
    NonuniqueGeodesic(String),

    /// Balls, masks and grids that do not fit together.
    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error(
        "line search stagnated at iteration {iteration} \
         (energy {energy:.12e}, max residual {max_residual:.3e}, last step {step:.3e})"
    )]
    Stagnation {
        iteration: usize,
        energy: f64,
        max_residual: f64,
        step: f64,
    },

    #[error("sweep stage {stage} (eps = {epsilon}) failed: {source}")]
    Stage {
        stage: usize,
        epsilon: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("smallness hypothesis violated on face {face}: {reason}")]
    SmallnessViolation { face: usize, reason: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("construction failed at sample {sample}: {reason}")]
    Construction { sample: usize, reason: String },

    #[error("snapshot format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::InputDomain(msg.into())
    }

    pub(crate) fn geometry(msg: impl Into<String>) -> Self {
        Error::Geometry(msg.into())
    }
}
