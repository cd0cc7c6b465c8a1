use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("contracted edge: `{0}` has an empty image")]
    ContractedEdge(String),
    #[error("graph mismatch: expected `{expected}`, found `{found}`")]
    GraphMismatch { expected: String, found: String },
    #[error("map `{0}` is not a self-map")]
    NotSelfMap(String),
    #[error("partition violated: {0}")]
    PartitionViolated(String),
    #[error("turn directions start at different vertices")]
    TurnAcrossVertices,
    #[error("map is not a gate structure morphism: gate {0} is split")]
    NotGateMorphism(String),
    #[error("map is not a train track morphism for the given gate structures")]
    NotTrainTrack,
    #[error("map is not expanding")]
    NotExpanding,
    #[error("no strongly expanding power up to exponent {0}")]
    NoExpandingPower(usize),
    #[error("branch length {requested} is below the admissible bound {required}")]
    BoundTooSmall { requested: usize, required: usize },
    #[error("branch too short: length {length} < {requested}")]
    BranchTooShort { length: usize, requested: usize },
    #[error("invalid long turn: {0}")]
    InvalidTurn(String),
    #[error("search budget of {0} states exceeded")]
    BudgetExceeded(usize),
    #[error("missing elementary legalizer for turn {0}")]
    MissingLegalizer(String),
    #[error("generator {index} rejected: {reason}")]
    GeneratorRejected { index: usize, reason: String },
    #[error("internal inconsistency: {0}")]
    Internal(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
