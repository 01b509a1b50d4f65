//! Exact game values by full-depth minimax.
//!
//! Two objectives are supported. `Ratio` is plain minimax over the exact
//! rational beta/alpha. `Classification` runs fail-soft alpha-beta over the
//! scores -1 (Alice wins), 0 (tie), +1 (Bob wins), with a transposition table
//! holding lower/upper bounds.
//!
//! Whenever the two players can no longer reach a common vertex the remaining
//! game decomposes: each side simply gains its longest simple path in its own
//! region. The search stops there and adds both longest paths, which is exact.
//!
//! The memo key is the full canonical state: used set, both positions, phase,
//! side to move, pass counter, handicap counter and Alice's count (Bob's count
//! follows from the used set). With memoization disabled the search only
//! keeps the current line, so its stack depth is bounded by the game length.

use std::collections::BTreeMap;

use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::error::SolveError;
use crate::game::{
    apply_unchecked, for_each_legal, initial_state, Classification, GameRules, GameState, Move,
    Objective, Outcome, Phase, Player,
};
use crate::graph::{Graph, Vertex};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolveResult {
    pub outcome: Outcome,
    pub principal_variation: Vec<Move>,
    pub nodes_expanded: u64,
    pub max_stack_depth: usize,
    pub budget_exhausted: bool,
}

impl SolveResult {
    pub fn classification(&self) -> Classification {
        self.outcome.classification()
    }
}

/// A fixed strategy for one player.
pub trait ScriptedPolicy {
    fn name(&self) -> &str;
    fn choose(&self, g: &Graph, rules: &GameRules, state: &GameState) -> Move;
}

/// Adapts a closure into a [`ScriptedPolicy`].
pub struct FnPolicy<F> {
    name: String,
    f: F,
}

impl<F> FnPolicy<F>
where
    F: Fn(&Graph, &GameRules, &GameState) -> Move,
{
    pub fn new(name: impl Into<String>, f: F) -> Self {
        Self {
            name: name.into(),
            f,
        }
    }
}

impl<F> ScriptedPolicy for FnPolicy<F>
where
    F: Fn(&Graph, &GameRules, &GameState) -> Move,
{
    fn name(&self) -> &str {
        &self.name
    }

    fn choose(&self, g: &Graph, rules: &GameRules, state: &GameState) -> Move {
        (self.f)(g, rules, state)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolveOptions {
    pub node_budget: Option<u64>,
    /// `false` selects the linear-space mode.
    pub memoize: bool,
    /// Stop at the point where the players are separated and add longest paths.
    pub separation_cutoff: bool,
    /// Vertices credited to Bob when ratios are compared, so the search
    /// optimizes (beta + bonus)/alpha. Reported outcomes exclude the bonus.
    pub bob_bonus: u32,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            node_budget: None,
            memoize: true,
            separation_cutoff: true,
            bob_bonus: 0,
        }
    }
}

impl SolveOptions {
    pub fn budget(node_budget: Option<u64>) -> Self {
        Self {
            node_budget,
            ..Self::default()
        }
    }

    pub fn linear_space(mut self) -> Self {
        self.memoize = false;
        self
    }
}

/// Solves from the initial position.
pub fn solve(
    g: &Graph,
    rules: &GameRules,
    node_budget: Option<u64>,
) -> Result<SolveResult, SolveError> {
    solve_with(g, rules, SolveOptions::budget(node_budget))
}

pub fn solve_with(
    g: &Graph,
    rules: &GameRules,
    options: SolveOptions,
) -> Result<SolveResult, SolveError> {
    let root = initial_state(g, rules)?;
    Solver::new(g, rules, options).run(&root)
}

/// Exact value when `scripted_side` always follows `policy` and the other side optimizes.
pub fn solve_vs_policy(
    g: &Graph,
    rules: &GameRules,
    policy: &dyn ScriptedPolicy,
    scripted_side: Player,
    node_budget: Option<u64>,
) -> Result<SolveResult, SolveError> {
    let root = initial_state(g, rules)?;
    Solver::new(g, rules, SolveOptions::budget(node_budget))
        .with_policy(policy, scripted_side)
        .run(&root)
}

/// Solved outcome for every Alice start vertex (free-start rules), keyed by vertex.
pub fn optimal_start_report(
    g: &Graph,
    rules: &GameRules,
    node_budget: Option<u64>,
) -> Result<BTreeMap<Vertex, SolveResult>, SolveError> {
    let root = initial_state(g, rules)?;
    let mut report = BTreeMap::new();
    if root.phase != Phase::AlicePlacement {
        let r = Solver::new(g, rules, SolveOptions::budget(node_budget)).run(&root)?;
        report.insert(root.alice_pos.expect("given start"), r);
        return Ok(report);
    }
    for v in 0..g.vertex_count() {
        let mut s = root.clone();
        apply_unchecked(rules, &mut s, Move::To(v));
        let mut r = Solver::new(g, rules, SolveOptions::budget(node_budget)).run(&s)?;
        r.principal_variation.insert(0, Move::To(v));
        report.insert(v, r);
    }
    Ok(report)
}

/// Whether Alice has a strategy that ends with strictly more vertices than Bob.
/// `None` when the budget ran out.
pub fn alice_wins(
    g: &Graph,
    rules: &GameRules,
    node_budget: Option<u64>,
) -> Result<Option<bool>, SolveError> {
    let root = initial_state(g, rules)?;
    let mut solver = Solver::new(g, rules, SolveOptions::budget(node_budget));
    match solver.alphabeta(&root, -1, 0, 0) {
        Ok(v) => Ok(Some(v <= -1)),
        Err(Abort::Budget) => Ok(None),
        Err(Abort::Policy(e)) => Err(e),
    }
}

#[derive(Clone, Copy, Debug, Default)]
struct Bounds {
    lower: i8,
    upper: i8,
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct Key {
    used: Box<[u64]>,
    alice: u32,
    bob: u32,
    alpha: u32,
    misc: u32,
}

const NONE_POS: u32 = u32::MAX;

fn key_of(s: &GameState) -> Key {
    let phase = match s.phase {
        Phase::AlicePlacement => 0,
        Phase::AliceHandicap => 1,
        Phase::BobPlacement => 2,
        Phase::Movement => 3,
    };
    let to_move = matches!(s.to_move, Player::Bob) as u32;
    Key {
        used: s.used.words().into(),
        alice: s.alice_pos.map_or(NONE_POS, |v| v as u32),
        bob: s.bob_pos.map_or(NONE_POS, |v| v as u32),
        alpha: s.alice_count,
        misc: phase | to_move << 2 | (s.consecutive_passes as u32) << 3 | s.handicap_left << 5,
    }
}

enum Abort {
    Budget,
    Policy(SolveError),
}

pub struct Solver<'a> {
    g: &'a Graph,
    rules: &'a GameRules,
    options: SolveOptions,
    policy: Option<(&'a dyn ScriptedPolicy, Player)>,
    ratio_memo: FxHashMap<Key, Outcome>,
    bounds_memo: FxHashMap<Key, Bounds>,
    nodes: u64,
    max_depth: usize,
}

impl<'a> Solver<'a> {
    pub fn new(g: &'a Graph, rules: &'a GameRules, options: SolveOptions) -> Self {
        Self {
            g,
            rules,
            options,
            policy: None,
            ratio_memo: FxHashMap::default(),
            bounds_memo: FxHashMap::default(),
            nodes: 0,
            max_depth: 0,
        }
    }

    pub fn with_policy(mut self, policy: &'a dyn ScriptedPolicy, side: Player) -> Self {
        self.policy = Some((policy, side));
        self
    }

    /// Solves the subgame rooted at `root`.
    /// Win/tie/loss value of `s` under optimal play, sharing this solver's table
    /// and node count across calls. `None` once the budget is spent.
    pub fn classify(&mut self, s: &GameState) -> Result<Option<Classification>, SolveError> {
        match self.alphabeta(s, -2, 2, 0) {
            Ok(v) => Ok(Some(Classification::from_score(v))),
            Err(Abort::Budget) => Ok(None),
            Err(Abort::Policy(e)) => Err(e),
        }
    }

    pub fn run(&mut self, root: &GameState) -> Result<SolveResult, SolveError> {
        let outcome = match self.value(root, 0) {
            Ok(o) => o,
            Err(Abort::Budget) => return Ok(self.exhausted(root)),
            Err(Abort::Policy(e)) => return Err(e),
        };
        let pv = match self.principal_variation(root) {
            Ok(pv) => pv,
            Err(Abort::Budget) => return Ok(self.exhausted(root)),
            Err(Abort::Policy(e)) => return Err(e),
        };
        let outcome = match self.rules.objective {
            Objective::Ratio => outcome,
            // alpha-beta only knows the class; report the counts the line reaches
            Objective::Classification => pv.1,
        };
        Ok(SolveResult {
            outcome,
            principal_variation: pv.0,
            nodes_expanded: self.nodes,
            max_stack_depth: self.max_depth,
            budget_exhausted: false,
        })
    }

    fn exhausted(&self, root: &GameState) -> SolveResult {
        SolveResult {
            outcome: root.outcome(),
            principal_variation: Vec::new(),
            nodes_expanded: self.nodes,
            max_stack_depth: self.max_depth,
            budget_exhausted: true,
        }
    }

    fn value(&mut self, s: &GameState, depth: usize) -> Result<Outcome, Abort> {
        match self.rules.objective {
            Objective::Ratio => self.minimax(s, depth),
            Objective::Classification => {
                let v = self.alphabeta(s, -2, 2, depth)?;
                // only the class matters here; encode it as a representative outcome
                Ok(match Classification::from_score(v) {
                    Classification::AliceWins => Outcome::new(1, 0),
                    Classification::Tie => Outcome::new(1, 1),
                    Classification::BobWins => Outcome::new(1, 2),
                })
            }
        }
    }

    fn tick(&mut self, depth: usize) -> Result<(), Abort> {
        self.nodes += 1;
        self.max_depth = self.max_depth.max(depth + 1);
        match self.options.node_budget {
            Some(b) if self.nodes > b => Err(Abort::Budget),
            _ => Ok(()),
        }
    }

    fn moves(&self, s: &GameState) -> Result<Vec<Move>, Abort> {
        if let Some((policy, side)) = self.policy {
            if s.to_move == side {
                let m = policy.choose(self.g, self.rules, s);
                if !crate::game::is_legal(self.g, self.rules, s, m) {
                    return Err(Abort::Policy(SolveError::IllegalPolicyMove {
                        policy: policy.name().to_string(),
                        chosen: m.to_string(),
                        state: s.to_string(),
                    }));
                }
                return Ok(vec![m]);
            }
        }
        let mut out = Vec::new();
        for_each_legal(self.g, self.rules, s, |m| out.push(m));
        Ok(out)
    }

    fn child(&self, s: &GameState, m: Move) -> GameState {
        let mut c = s.clone();
        apply_unchecked(self.rules, &mut c, m);
        c
    }

    /// Longest-path gains for both players when their regions are disjoint.
    fn separated_gains(&mut self, s: &GameState, depth: usize) -> Result<Option<(u32, u32)>, Abort> {
        if !self.options.separation_cutoff || s.phase != Phase::Movement {
            return Ok(None);
        }
        let ra = region(self.g, s, s.alice_pos);
        let rb = region(self.g, s, s.bob_pos);
        if ra.intersects(&rb) {
            return Ok(None);
        }
        if let Some((_, side)) = self.policy {
            // the scripted side need not follow a longest path unless it is stuck
            let scripted_region = if side == Player::Alice { &ra } else { &rb };
            if !scripted_region.is_empty() {
                return Ok(None);
            }
        }
        let mut used = s.used.clone();
        let ga = match s.alice_pos {
            Some(p) => self.longest_from(p, &mut used, depth)?,
            None => 0,
        };
        let gb = match s.bob_pos {
            Some(p) => self.longest_from(p, &mut used, depth)?,
            None => 0,
        };
        Ok(Some((ga, gb)))
    }

    fn longest_from(
        &mut self,
        p: Vertex,
        used: &mut crate::graph::VertexSet,
        depth: usize,
    ) -> Result<u32, Abort> {
        self.tick(depth)?;
        let mut best = 0;
        let g = self.g;
        for &v in g.neighbors(p) {
            if !used.contains(v) {
                used.insert(v);
                let r = self.longest_from(v, used, depth + 1);
                used.remove(v);
                best = best.max(1 + r?);
            }
        }
        Ok(best)
    }

    fn minimax(&mut self, s: &GameState, depth: usize) -> Result<Outcome, Abort> {
        self.tick(depth)?;
        if s.is_terminal() {
            return Ok(s.outcome());
        }
        let key = self.options.memoize.then(|| key_of(s));
        if let Some(k) = &key {
            if let Some(&o) = self.ratio_memo.get(k) {
                return Ok(o);
            }
        }
        let result = if let Some((ga, gb)) = self.separated_gains(s, depth)? {
            Outcome::new(s.alice_count + ga, s.bob_count + gb)
        } else {
            let mover = s.to_move;
            let bonus = self.options.bob_bonus;
            let shifted = |o: Outcome| Outcome::new(o.alpha, o.beta + bonus);
            let mut best: Option<Outcome> = None;
            for m in self.moves(s)? {
                let c = self.child(s, m);
                let o = self.minimax(&c, depth + 1)?;
                let better = match best {
                    None => true,
                    Some(b) => match mover {
                        Player::Alice => shifted(o).cmp_ratio(&shifted(b)).is_lt(),
                        Player::Bob => shifted(o).cmp_ratio(&shifted(b)).is_gt(),
                    },
                };
                if better {
                    best = Some(o);
                }
            }
            best.expect("a non-terminal state always has a legal move")
        };
        if let Some(k) = key {
            self.ratio_memo.insert(k, result);
        }
        Ok(result)
    }

    /// Fail-soft alpha-beta on scores; the window is exclusive `(lo, hi)`.
    fn alphabeta(&mut self, s: &GameState, mut lo: i8, mut hi: i8, depth: usize) -> Result<i8, Abort> {
        self.tick(depth)?;
        if s.is_terminal() {
            return Ok(score(s.alice_count, s.bob_count));
        }
        let key = self.options.memoize.then(|| key_of(s));
        if let Some(k) = &key {
            if let Some(b) = self.bounds_memo.get(k) {
                if b.lower == b.upper || b.lower >= hi {
                    return Ok(b.lower);
                }
                if b.upper <= lo {
                    return Ok(b.upper);
                }
                lo = lo.max(b.lower);
                hi = hi.min(b.upper);
            }
        }
        let best = if let Some((ga, gb)) = self.separated_gains(s, depth)? {
            score(s.alice_count + ga, s.bob_count + gb)
        } else {
            match s.to_move {
                Player::Bob => {
                    let mut best = -2;
                    let mut a = lo;
                    for m in self.moves(s)? {
                        let c = self.child(s, m);
                        let v = self.alphabeta(&c, a, hi, depth + 1)?;
                        best = best.max(v);
                        a = a.max(best);
                        if best >= hi || best == 1 {
                            break;
                        }
                    }
                    best
                }
                Player::Alice => {
                    let mut best = 2;
                    let mut b = hi;
                    for m in self.moves(s)? {
                        let c = self.child(s, m);
                        let v = self.alphabeta(&c, lo, b, depth + 1)?;
                        best = best.min(v);
                        b = b.min(best);
                        if best <= lo || best == -1 {
                            break;
                        }
                    }
                    best
                }
            }
        };
        if let Some(k) = key {
            let entry = self.bounds_memo.entry(k).or_insert(Bounds {
                lower: -1,
                upper: 1,
            });
            if best <= lo {
                entry.upper = entry.upper.min(best);
            } else if best >= hi {
                entry.lower = entry.lower.max(best);
            } else {
                entry.lower = best;
                entry.upper = best;
            }
        }
        Ok(best)
    }

    /// Walks the optimal line with fixed tie-breaking (lowest vertex, pass last).
    fn principal_variation(&mut self, root: &GameState) -> Result<(Vec<Move>, Outcome), Abort> {
        let mut pv = Vec::new();
        let mut s = root.clone();
        while !s.is_terminal() {
            if let Some(_) = self.separated_gains(&s, 0)? {
                let tail = self.play_out_separated(&s);
                for m in tail {
                    apply_unchecked(self.rules, &mut s, m);
                    pv.push(m);
                }
                break;
            }
            let target = self.value(&s, 0)?;
            let mut chosen = None;
            for m in self.moves(&s)? {
                let c = self.child(&s, m);
                let v = self.value(&c, 0)?;
                let same = match self.rules.objective {
                    Objective::Ratio => v == target,
                    Objective::Classification => v.classification() == target.classification(),
                };
                if same {
                    chosen = Some(m);
                    break;
                }
            }
            let m = chosen.expect("some child attains the node value");
            apply_unchecked(self.rules, &mut s, m);
            pv.push(m);
        }
        Ok((pv, s.outcome()))
    }

    /// Both players follow a longest path in their own region until stuck.
    fn play_out_separated(&self, s: &GameState) -> Vec<Move> {
        let mut used = s.used.clone();
        let pa = s
            .alice_pos
            .map(|p| longest_path(self.g, p, &mut used))
            .unwrap_or_default();
        let pb = s
            .bob_pos
            .map(|p| longest_path(self.g, p, &mut used))
            .unwrap_or_default();
        let (mut ia, mut ib) = (0, 0);
        let mut passes = s.consecutive_passes;
        let mut to_move = s.to_move;
        let mut out = Vec::new();
        while passes < 2 {
            let m = match to_move {
                Player::Alice if ia < pa.len() => {
                    ia += 1;
                    Move::To(pa[ia - 1])
                }
                Player::Bob if ib < pb.len() => {
                    ib += 1;
                    Move::To(pb[ib - 1])
                }
                _ => Move::Pass,
            };
            passes = if m == Move::Pass { passes + 1 } else { 0 };
            out.push(m);
            to_move = to_move.other();
        }
        out
    }
}

fn score(alpha: u32, beta: u32) -> i8 {
    match beta.cmp(&alpha) {
        std::cmp::Ordering::Less => -1,
        std::cmp::Ordering::Equal => 0,
        std::cmp::Ordering::Greater => 1,
    }
}

/// Unused vertices reachable from `pos` through unused vertices (excluding `pos`).
fn region(g: &Graph, s: &GameState, pos: Option<Vertex>) -> crate::graph::VertexSet {
    let mut seen = crate::graph::VertexSet::new(g.vertex_count());
    let Some(p) = pos else { return seen };
    let mut stack = vec![p];
    while let Some(u) = stack.pop() {
        for &v in g.neighbors(u) {
            if !s.used.contains(v) && seen.insert(v) {
                stack.push(v);
            }
        }
    }
    seen
}

/// A longest simple path from `p` through vertices not in `used` (lowest indices first
/// on ties), excluding `p` itself. Marks the path in `used`.
pub(crate) fn longest_path(
    g: &Graph,
    p: Vertex,
    used: &mut crate::graph::VertexSet,
) -> Vec<Vertex> {
    fn rec(g: &Graph, p: Vertex, used: &mut crate::graph::VertexSet) -> Vec<Vertex> {
        let mut best: Vec<Vertex> = Vec::new();
        for &v in g.neighbors(p) {
            if !used.contains(v) {
                used.insert(v);
                let mut tail = rec(g, v, used);
                used.remove(v);
                if tail.len() + 1 > best.len() {
                    tail.insert(0, v);
                    best = tail;
                }
            }
        }
        best
    }
    let path = rec(g, p, used);
    for &v in &path {
        used.insert(v);
    }
    path
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::replay;

    fn und(n: usize, edges: &[(usize, usize)]) -> Graph {
        Graph::build(false, n, edges, &[]).unwrap()
    }

    fn complete(n: usize) -> Graph {
        let mut e = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                e.push((u, v));
            }
        }
        und(n, &e)
    }

    fn path(n: usize) -> Graph {
        let e: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        und(n, &e)
    }

    #[test]
    fn small_complete_graphs() {
        let r = solve(&complete(3), &GameRules::free(), None).unwrap();
        assert_eq!(r.outcome, Outcome::new(2, 1));
        let r = solve(&complete(5), &GameRules::free(), None).unwrap();
        assert_eq!(r.classification(), Classification::AliceWins);
        let r = solve(&path(2), &GameRules::free(), None).unwrap();
        assert_eq!(r.outcome, Outcome::new(1, 1));
    }

    #[test]
    fn pv_replays_to_outcome() {
        for g in [complete(4), path(5), complete(3)] {
            for obj in [Objective::Ratio, Objective::Classification] {
                let rules = GameRules::free().with_objective(obj);
                let r = solve(&g, &rules, None).unwrap();
                let end = replay(&g, &rules, &r.principal_variation).unwrap();
                assert!(end.is_terminal());
                assert_eq!(end.outcome(), r.outcome);
            }
        }
    }

    #[test]
    fn separation_cutoff_matches_plain_search() {
        let g = und(7, &[(0, 1), (1, 2), (2, 3), (1, 4), (4, 5), (5, 6), (6, 3)]);
        let plain = SolveOptions {
            separation_cutoff: false,
            ..SolveOptions::default()
        };
        for obj in [Objective::Ratio, Objective::Classification] {
            let rules = GameRules::free().with_objective(obj);
            let a = solve_with(&g, &rules, SolveOptions::default()).unwrap();
            let b = solve_with(&g, &rules, plain).unwrap();
            assert_eq!(a.classification(), b.classification());
            if obj == Objective::Ratio {
                assert_eq!(a.outcome, b.outcome);
            }
        }
    }

    #[test]
    fn budget_exhaustion_is_flagged() {
        let r = solve(&complete(6), &GameRules::free(), Some(10)).unwrap();
        assert!(r.budget_exhausted);
        assert!(r.principal_variation.is_empty());
    }

    #[test]
    fn p3_scripted_alice() {
        let p3 = path(3);
        let policy = FnPolicy::new("center-then-lowest", |g: &Graph, r: &GameRules, s: &GameState| {
            if s.phase == Phase::AlicePlacement {
                return Move::To(1);
            }
            crate::game::legal_moves(g, r, s)[0]
        });
        let r = solve_vs_policy(&p3, &GameRules::free(), &policy, Player::Alice, None).unwrap();
        assert_eq!(r.outcome, Outcome::new(2, 1));
    }

    #[test]
    fn illegal_policy_is_reported() {
        let p3 = path(3);
        let policy = FnPolicy::new("bad", |_: &Graph, _: &GameRules, _: &GameState| Move::To(7));
        let err = solve_vs_policy(&p3, &GameRules::free(), &policy, Player::Bob, None).unwrap_err();
        assert!(matches!(err, SolveError::IllegalPolicyMove { .. }));
    }

    #[test]
    fn start_report_p3() {
        let report = optimal_start_report(&path(3), &GameRules::free(), None).unwrap();
        assert_eq!(report[&1].classification(), Classification::AliceWins);
        assert_eq!(report[&0].classification(), Classification::BobWins);
        assert_eq!(report[&2].classification(), Classification::BobWins);
    }

    #[test]
    fn alice_wins_decision() {
        assert_eq!(alice_wins(&complete(3), &GameRules::free(), None).unwrap(), Some(true));
        assert_eq!(alice_wins(&path(2), &GameRules::free(), None).unwrap(), Some(false));
    }
}
