use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter is outside its documented domain (a ≤ 0, α ≤ 0, s < 1, ...).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A grid cannot deliver the accuracy it promises for the requested use
    /// (tail beyond kMax too heavy, oscillation beyond the grid's capacity, ...).
    #[error("accuracy policy violated: {0}")]
    Accuracy(String),

    /// A phase-space or half-plane window is inadequate (isometry defect too
    /// large, dropped tail mass above policy, ...).
    #[error("window error: {0}")]
    Window(String),

    /// The exponential-fit window is unusable (fewer than 8 nodes).
    #[error("degenerate fit window: {0}")]
    DegenerateFit(String),

    /// Bad run configuration (unknown key, malformed value, out-of-range).
    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
