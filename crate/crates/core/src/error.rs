use thiserror::Error;

use crate::graph::Vertex;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge ({u}, {v}) has an endpoint outside 0..{n}")]
    EndpointOutOfRange { u: Vertex, v: Vertex, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(Vertex, Vertex),
    #[error("label {name:?} points at vertex {vertex} outside 0..{n}")]
    LabelOutOfRange { name: String, vertex: Vertex, n: usize },
    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),
    #[error("missing label {0:?}")]
    MissingLabel(String),
    #[error("vertex {vertex} outside 0..{n}")]
    VertexOutOfRange { vertex: Vertex, n: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GameError {
    #[error("graph has {0} vertices, need at least two")]
    TooFewVertices(usize),
    #[error("start vertices must differ, both are {0}")]
    IdenticalStarts(Vertex),
    #[error("start vertex {0} does not exist")]
    InvalidStart(Vertex),
    #[error("handicap moves cannot be combined with given starts")]
    HandicapWithGivenStarts,
    #[error("Bob start whitelist is empty")]
    EmptyWhitelist,
    #[error("Bob start whitelist has capacity {got}, graph has {expected} vertices")]
    WhitelistSize { got: usize, expected: usize },
    #[error("game is already over")]
    Terminal,
    #[error("illegal move {0}")]
    IllegalMove(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error(transparent)]
    Game(#[from] GameError),
    #[error("scripted policy {policy} chose illegal move {chosen} in state {state}")]
    IllegalPolicyMove {
        policy: String,
        chosen: String,
        state: String,
    },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("height {h} too small: could not place {needed} leaves at pairwise distance {min_dist}")]
    HeightTooSmall {
        h: usize,
        needed: usize,
        min_dist: usize,
    },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QbfError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("quantifier prefix must alternate starting with an existential block: {0}")]
    Alternation(String),
    #[error("clause {clause} has {arity} literals, expected 3")]
    Arity { clause: usize, arity: usize },
    #[error("clause {clause} references undeclared variable {var}")]
    UndeclaredVariable { clause: usize, var: usize },
    #[error("formula needs at least one clause")]
    NoClauses,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("start vertices must differ, both are {0}")]
    IdenticalStarts(Vertex),
    #[error("start vertex {0} does not exist")]
    InvalidStart(Vertex),
    #[error("expected a {expected} graph")]
    Directedness { expected: &'static str },
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalysisError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("expected an undirected graph")]
    Directed,
    #[error("input is not a tree")]
    NotATree,
    #[error("node budget exhausted")]
    BudgetExhausted,
    #[error(transparent)]
    Solve(#[from] SolveError),
}
