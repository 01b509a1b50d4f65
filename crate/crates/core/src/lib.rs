//! Exact solving, extremal constructions and hardness reductions for Tron,
//! the two-player game in which each player walks a simple path through a
//! graph and nobody may enter a vertex already visited by either player.

pub mod analysis;
pub mod constructions;
pub mod enumerate;
pub mod error;
pub mod game;
pub mod graph;
pub mod policies;
pub mod qbf;
pub mod reductions;
pub mod solver;

pub use error::{
    AnalysisError, ConstructionError, GameError, GraphError, QbfError, ReductionError, SolveError,
};
pub use game::{
    apply_move, initial_state, legal_moves, replay, Classification, GameRules, GameState, Move,
    Objective, Outcome, Phase, Player, StartMode,
};
pub use graph::{Graph, GraphBuilder, GraphJson, Vertex, VertexSet};
pub use qbf::{parse_qdimacs, qbf_eval, Literal, Qbf};
pub use reductions::{ReductionOutput, Stage};
pub use solver::{
    alice_wins, optimal_start_report, solve, solve_vs_policy, solve_with, FnPolicy,
    ScriptedPolicy, SolveOptions, SolveResult,
};
