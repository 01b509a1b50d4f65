//! Tron rules: placement, optional Alice handicap, alternating movement,
//! pass-when-stuck and scoring.
//!
//! Alice always acts first. A player without a legal vertex must pass and the
//! opponent keeps moving; two consecutive passes end the game. Start vertices
//! count toward each player's total.

use std::cmp::Ordering;
use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::GameError;
use crate::graph::{Graph, Vertex, VertexSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Player {
    Alice,
    Bob,
}

impl Player {
    pub fn other(self) -> Self {
        match self {
            Player::Alice => Player::Bob,
            Player::Bob => Player::Alice,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StartMode {
    Free,
    Given(Vertex, Vertex),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Objective {
    /// Bob maximizes the exact ratio beta/alpha, Alice minimizes it.
    #[default]
    Ratio,
    /// Three-valued minimax over AliceWins < Tie < BobWins.
    Classification,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameRules {
    pub start_mode: StartMode,
    pub bob_start_whitelist: Option<VertexSet>,
    /// Moves Alice makes after placing and before Bob places (free starts only).
    pub alice_handicap_moves: usize,
    pub objective: Objective,
}

impl GameRules {
    pub fn free() -> Self {
        Self {
            start_mode: StartMode::Free,
            bob_start_whitelist: None,
            alice_handicap_moves: 0,
            objective: Objective::Ratio,
        }
    }

    pub fn given(alice: Vertex, bob: Vertex) -> Self {
        Self {
            start_mode: StartMode::Given(alice, bob),
            ..Self::free()
        }
    }

    pub fn with_objective(mut self, objective: Objective) -> Self {
        self.objective = objective;
        self
    }

    pub fn with_handicap(mut self, moves: usize) -> Self {
        self.alice_handicap_moves = moves;
        self
    }

    pub fn with_whitelist(mut self, whitelist: VertexSet) -> Self {
        self.bob_start_whitelist = Some(whitelist);
        self
    }

    pub fn validate(&self, g: &Graph) -> Result<(), GameError> {
        let n = g.vertex_count();
        match self.start_mode {
            StartMode::Free => {
                if n < 2 {
                    return Err(GameError::TooFewVertices(n));
                }
            }
            StartMode::Given(a, b) => {
                if a >= n {
                    return Err(GameError::InvalidStart(a));
                }
                if b >= n {
                    return Err(GameError::InvalidStart(b));
                }
                if a == b {
                    return Err(GameError::IdenticalStarts(a));
                }
                if self.alice_handicap_moves > 0 {
                    return Err(GameError::HandicapWithGivenStarts);
                }
            }
        }
        if let Some(w) = &self.bob_start_whitelist {
            if w.capacity() != n {
                return Err(GameError::WhitelistSize {
                    got: w.capacity(),
                    expected: n,
                });
            }
            if w.is_empty() {
                return Err(GameError::EmptyWhitelist);
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Phase {
    AlicePlacement,
    /// Alice is making her handicap moves; Bob has not placed yet.
    AliceHandicap,
    BobPlacement,
    Movement,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Move {
    /// Place on (placement phases) or step to (movement phases) a vertex.
    To(Vertex),
    Pass,
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::To(v) => write!(f, "{v}"),
            Move::Pass => f.write_str("pass"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GameState {
    pub phase: Phase,
    pub alice_pos: Option<Vertex>,
    pub bob_pos: Option<Vertex>,
    pub used: VertexSet,
    pub to_move: Player,
    pub alice_count: u32,
    pub bob_count: u32,
    pub consecutive_passes: u8,
    pub handicap_left: u32,
}

impl GameState {
    pub fn is_terminal(&self) -> bool {
        self.consecutive_passes >= 2
    }

    pub fn position(&self, p: Player) -> Option<Vertex> {
        match p {
            Player::Alice => self.alice_pos,
            Player::Bob => self.bob_pos,
        }
    }

    pub fn outcome(&self) -> Outcome {
        Outcome::new(self.alice_count, self.bob_count)
    }
}

impl fmt::Display for GameState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pos = |p: Option<Vertex>| p.map_or("-".to_string(), |v| v.to_string());
        write!(
            f,
            "{:?} to_move={:?} alice@{} bob@{} alpha={} beta={} passes={} used={:?}",
            self.phase,
            self.to_move,
            pos(self.alice_pos),
            pos(self.bob_pos),
            self.alice_count,
            self.bob_count,
            self.consecutive_passes,
            self.used.iter().collect::<Vec<_>>()
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Classification {
    AliceWins,
    Tie,
    BobWins,
}

impl Classification {
    /// Score with Alice minimizing: -1, 0, +1.
    pub fn score(self) -> i8 {
        match self {
            Classification::AliceWins => -1,
            Classification::Tie => 0,
            Classification::BobWins => 1,
        }
    }

    pub fn from_score(s: i8) -> Self {
        match s.signum() {
            -1 => Classification::AliceWins,
            0 => Classification::Tie,
            _ => Classification::BobWins,
        }
    }
}

/// Final vertex counts. The ratio beta/alpha is derived exactly on demand.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Outcome {
    pub alpha: u32,
    pub beta: u32,
}

impl Outcome {
    pub fn new(alpha: u32, beta: u32) -> Self {
        Self { alpha, beta }
    }

    /// Exact beta/alpha. Alice always places, so alpha >= 1 for any real outcome.
    pub fn ratio(&self) -> Ratio<u64> {
        Ratio::new(self.beta as u64, self.alpha.max(1) as u64)
    }

    pub fn classification(&self) -> Classification {
        match self.alpha.cmp(&self.beta) {
            Ordering::Greater => Classification::AliceWins,
            Ordering::Equal => Classification::Tie,
            Ordering::Less => Classification::BobWins,
        }
    }

    /// Compares by ratio beta/alpha without division.
    pub fn cmp_ratio(&self, other: &Outcome) -> Ordering {
        (self.beta as u64 * other.alpha as u64).cmp(&(other.beta as u64 * self.alpha as u64))
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:?} alpha={} beta={} ratio={}",
            self.classification(),
            self.alpha,
            self.beta,
            self.ratio()
        )
    }
}

pub fn initial_state(g: &Graph, rules: &GameRules) -> Result<GameState, GameError> {
    rules.validate(g)?;
    let n = g.vertex_count();
    let mut state = GameState {
        phase: Phase::AlicePlacement,
        alice_pos: None,
        bob_pos: None,
        used: VertexSet::new(n),
        to_move: Player::Alice,
        alice_count: 0,
        bob_count: 0,
        consecutive_passes: 0,
        handicap_left: rules.alice_handicap_moves as u32,
    };
    if let StartMode::Given(a, b) = rules.start_mode {
        state.phase = Phase::Movement;
        state.alice_pos = Some(a);
        state.bob_pos = Some(b);
        state.used.insert(a);
        state.used.insert(b);
        state.alice_count = 1;
        state.bob_count = 1;
    }
    Ok(state)
}

/// Legal moves in ascending vertex order; `[Pass]` when the mover is stuck.
pub fn legal_moves(g: &Graph, rules: &GameRules, s: &GameState) -> Vec<Move> {
    let mut out = Vec::new();
    for_each_legal(g, rules, s, |m| out.push(m));
    out
}

pub(crate) fn for_each_legal(
    g: &Graph,
    rules: &GameRules,
    s: &GameState,
    mut f: impl FnMut(Move),
) {
    if s.is_terminal() {
        return;
    }
    let mut any = false;
    match s.phase {
        Phase::AlicePlacement => {
            for v in 0..g.vertex_count() {
                any = true;
                f(Move::To(v));
            }
        }
        Phase::BobPlacement => {
            for v in 0..g.vertex_count() {
                let allowed = rules
                    .bob_start_whitelist
                    .as_ref()
                    .map_or(true, |w| w.contains(v));
                if allowed && !s.used.contains(v) {
                    any = true;
                    f(Move::To(v));
                }
            }
        }
        Phase::AliceHandicap | Phase::Movement => {
            if let Some(p) = s.position(s.to_move) {
                for &v in g.neighbors(p) {
                    if !s.used.contains(v) {
                        any = true;
                        f(Move::To(v));
                    }
                }
            }
        }
    }
    if !any {
        f(Move::Pass);
    }
}

pub fn is_legal(g: &Graph, rules: &GameRules, s: &GameState, m: Move) -> bool {
    let mut found = false;
    for_each_legal(g, rules, s, |x| found |= x == m);
    found
}

pub fn apply_move(
    g: &Graph,
    rules: &GameRules,
    s: &GameState,
    m: Move,
) -> Result<GameState, GameError> {
    if s.is_terminal() {
        return Err(GameError::Terminal);
    }
    if !is_legal(g, rules, s, m) {
        return Err(GameError::IllegalMove(m.to_string()));
    }
    let mut next = s.clone();
    apply_unchecked(rules, &mut next, m);
    Ok(next)
}

/// Applies a move known to be legal.
pub(crate) fn apply_unchecked(rules: &GameRules, s: &mut GameState, m: Move) {
    let mover = s.to_move;
    match m {
        Move::Pass => s.consecutive_passes += 1,
        Move::To(v) => {
            s.consecutive_passes = 0;
            s.used.insert(v);
            match mover {
                Player::Alice => {
                    s.alice_pos = Some(v);
                    s.alice_count += 1;
                }
                Player::Bob => {
                    s.bob_pos = Some(v);
                    s.bob_count += 1;
                }
            }
        }
    }
    match s.phase {
        Phase::AlicePlacement => {
            if rules.alice_handicap_moves > 0 {
                s.phase = Phase::AliceHandicap;
                s.handicap_left = rules.alice_handicap_moves as u32;
                s.to_move = Player::Alice;
            } else {
                s.phase = Phase::BobPlacement;
                s.to_move = Player::Bob;
            }
        }
        Phase::AliceHandicap => {
            s.handicap_left -= 1;
            if s.handicap_left == 0 {
                s.phase = Phase::BobPlacement;
                s.to_move = Player::Bob;
                // passes during the handicap do not count toward termination
                s.consecutive_passes = 0;
            }
        }
        Phase::BobPlacement => {
            s.phase = Phase::Movement;
            s.to_move = Player::Alice;
        }
        Phase::Movement => s.to_move = mover.other(),
    }
}

/// Replays a move sequence from the initial state.
pub fn replay(g: &Graph, rules: &GameRules, moves: &[Move]) -> Result<GameState, GameError> {
    let mut s = initial_state(g, rules)?;
    for &m in moves {
        s = apply_move(g, rules, &s, m)?;
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn und(n: usize, edges: &[(usize, usize)]) -> Graph {
        Graph::build(false, n, edges, &[]).unwrap()
    }

    fn path(n: usize) -> Graph {
        let e: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        und(n, &e)
    }

    fn cycle(n: usize) -> Graph {
        let mut e: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        e.push((n - 1, 0));
        und(n, &e)
    }

    #[test]
    fn given_start_initial_state() {
        let p2 = path(2);
        let s = initial_state(&p2, &GameRules::given(0, 1)).unwrap();
        assert_eq!(s.phase, Phase::Movement);
        assert_eq!((s.alice_count, s.bob_count), (1, 1));
        assert_eq!(s.to_move, Player::Alice);
        assert_eq!(
            initial_state(&p2, &GameRules::given(0, 0)),
            Err(GameError::IdenticalStarts(0))
        );
        assert_eq!(
            initial_state(&p2, &GameRules::given(0, 1).with_handicap(1)),
            Err(GameError::HandicapWithGivenStarts)
        );
    }

    #[test]
    fn free_start_initial_state() {
        let k3 = und(3, &[(0, 1), (1, 2), (0, 2)]);
        let s = initial_state(&k3, &GameRules::free()).unwrap();
        assert_eq!(s.phase, Phase::AlicePlacement);
        assert!(s.used.is_empty());
        assert_eq!(
            initial_state(&und(1, &[]), &GameRules::free()),
            Err(GameError::TooFewVertices(1))
        );
    }

    #[test]
    fn legal_moves_examples() {
        let p3 = path(3);
        let rules = GameRules::given(1, 0);
        let s = initial_state(&p3, &rules).unwrap();
        assert_eq!(legal_moves(&p3, &rules, &s), vec![Move::To(2)]);

        let c4 = cycle(4);
        let rules = GameRules::given(0, 2);
        let s = initial_state(&c4, &rules).unwrap();
        assert_eq!(legal_moves(&c4, &rules, &s), vec![Move::To(1), Move::To(3)]);

        let k2 = path(2);
        let rules = GameRules::given(0, 1);
        let s = initial_state(&k2, &rules).unwrap();
        assert_eq!(legal_moves(&k2, &rules, &s), vec![Move::Pass]);
    }

    #[test]
    fn forced_line_on_p3() {
        let p3 = path(3);
        let rules = GameRules::given(0, 1);
        let s = replay(&p3, &rules, &[Move::Pass, Move::To(2), Move::Pass]).unwrap();
        // Bob at 2 is stuck too, so one more pass is still owed by him
        assert!(!s.is_terminal());
        let s = apply_move(&p3, &rules, &s, Move::Pass).unwrap();
        assert!(s.is_terminal());
        assert_eq!(s.outcome(), Outcome::new(1, 2));
    }

    #[test]
    fn k2_double_pass_is_tie() {
        let k2 = path(2);
        let rules = GameRules::given(0, 1);
        let s = replay(&k2, &rules, &[Move::Pass, Move::Pass]).unwrap();
        assert!(s.is_terminal());
        assert_eq!(s.outcome().classification(), Classification::Tie);
        assert_eq!(
            apply_move(&k2, &rules, &s, Move::Pass),
            Err(GameError::Terminal)
        );
    }

    #[test]
    fn illegal_move_rejected() {
        let p3 = path(3);
        let rules = GameRules::given(0, 1);
        let s = initial_state(&p3, &rules).unwrap();
        assert!(matches!(
            apply_move(&p3, &rules, &s, Move::To(2)),
            Err(GameError::IllegalMove(_))
        ));
    }

    #[test]
    fn handicap_order() {
        let c8 = cycle(8);
        let rules = GameRules::free().with_handicap(2);
        let mut s = initial_state(&c8, &rules).unwrap();
        s = apply_move(&c8, &rules, &s, Move::To(0)).unwrap();
        assert_eq!((s.phase, s.to_move), (Phase::AliceHandicap, Player::Alice));
        s = apply_move(&c8, &rules, &s, Move::To(1)).unwrap();
        assert_eq!(s.phase, Phase::AliceHandicap);
        s = apply_move(&c8, &rules, &s, Move::To(2)).unwrap();
        assert_eq!((s.phase, s.to_move), (Phase::BobPlacement, Player::Bob));
        assert_eq!(s.alice_count, 3);
        // Bob may not place on Alice's trail
        assert!(!legal_moves(&c8, &rules, &s).contains(&Move::To(1)));
        s = apply_move(&c8, &rules, &s, Move::To(3)).unwrap();
        assert_eq!((s.phase, s.to_move), (Phase::Movement, Player::Alice));
    }

    #[test]
    fn whitelist_restricts_bob() {
        let c8 = cycle(8);
        let w = VertexSet::from_iter_with_len(8, [0, 4]);
        let rules = GameRules::free().with_whitelist(w);
        let s = initial_state(&c8, &rules).unwrap();
        let s = apply_move(&c8, &rules, &s, Move::To(0)).unwrap();
        assert_eq!(legal_moves(&c8, &rules, &s), vec![Move::To(4)]);
    }

    #[test]
    fn star_opponent_continues_after_pass() {
        let star = und(4, &[(0, 1), (0, 2), (0, 3)]);
        let rules = GameRules::given(0, 1);
        let s = replay(&star, &rules, &[Move::To(2), Move::Pass, Move::Pass]).unwrap();
        assert!(s.is_terminal());
        assert_eq!(s.outcome(), Outcome::new(2, 1));
    }

    #[test]
    fn outcome_ratio_exact() {
        let o = Outcome::new(4, 6);
        assert_eq!(o.ratio(), Ratio::new(3, 2));
        assert_eq!(o.classification(), Classification::BobWins);
        assert_eq!(
            Outcome::new(2, 3).cmp_ratio(&Outcome::new(4, 6)),
            Ordering::Equal
        );
    }
}
