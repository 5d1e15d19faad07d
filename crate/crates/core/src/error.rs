use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed document: {0}")]
    Parse(String),
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("edge `{edge}` names unknown endpoint `{vertex}`")]
    UnknownEndpoint { edge: String, vertex: String },
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("graph is not connected")]
    Disconnected,
    #[error("graph has no vertices")]
    Empty,
    #[error("tree must have {expected} edges, got {got}")]
    WrongCardinality { expected: usize, got: usize },
    #[error("tree edges enclose a cycle through `{0}`")]
    ContainsCycle(String),
    #[error("tree does not span all vertices")]
    NotSpanning,
    #[error("self-loop `{0}` cannot belong to a spanning tree")]
    ContainsSelfLoop(String),
    #[error("`{0}` is not a chord of the selected tree")]
    NotAChord(String),
    #[error("`{0}` is not a cochord of the selected tree")]
    NotACochord(String),
    #[error("{edges} edges exceeds the brute-force limit of {limit}")]
    TooLarge { edges: usize, limit: usize },
    #[error("graph is not simple: {0}")]
    NotSimple(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("matrix has a non-integer entry at ({0}, {1})")]
    NonInteger(usize, usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("eigensolver did not converge")]
    NoConvergence,
    #[error("bad rotation system: {0}")]
    BadRotation(String),
    #[error("bad face list: {0}")]
    BadFaces(String),
    #[error("Euler characteristic violated: |V| - |E| + |F| = {0}")]
    EulerViolation(i64),
    #[error("cotree is not a spanning tree of the dual graph")]
    NonSpanningCotree,
    #[error("graph has no planar embedding attached")]
    MissingEmbedding,
    #[error("rank {rank} is outside 0 < k < n = {n}")]
    InvalidRank { n: usize, rank: usize },
    #[error("no invertible B·A found after {0} attempts")]
    GenerationFailed(usize),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
