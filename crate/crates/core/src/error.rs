use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("vertex-count mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("cannot sample {m} vertices out of {n}")]
    SampleTooLarge { n: usize, m: usize },

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("graph is not chordal")]
    NotChordal,

    #[error("guard exceeded: {0}")]
    Guard(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("color {color:#b} is not in the list of vertex {vertex}")]
    ColorNotInList { vertex: usize, color: u64 },

    #[error("coloring is partial: vertex {0} has no color")]
    PartialColoring(usize),

    #[error("vertex {0} is on both sides of the bipartite view")]
    OverlappingParts(usize),

    #[error("invalid subtree for vertex {vertex}: {reason}")]
    InvalidSubtree { vertex: usize, reason: String },

    #[error("unknown {kind}: {name}")]
    Unknown { kind: &'static str, name: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
