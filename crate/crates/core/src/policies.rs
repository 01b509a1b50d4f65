//! Scripted strategies taken from the constructive proofs, for use with
//! [`solve_vs_policy`](crate::solver::solve_vs_policy).

use crate::game::{legal_moves, GameRules, GameState, Move, Phase, Player};
use crate::error::GraphError;
use crate::graph::{Graph, Vertex, VertexSet};
use crate::solver::ScriptedPolicy;

/// Bob's strategy on the ordinary visage.
///
/// Bob always starts inside the overhead graph and eats it while Alice is
/// elsewhere. Then, by where Alice is:
///
/// * back in the overhead graph after leaving through a bottleneck vertex: Bob
///   seals the other one;
/// * out on the cycle after passing a bottleneck vertex: Bob follows her in
///   through the free one;
/// * on the cycle without ever coming in: Bob takes whichever bottleneck vertex
///   she is about to step onto, then crosses the overhead graph to close the
///   other one as well.
///
/// Local choices (which overhead vertex, which attachment, which direction) are
/// greedy on a territory count.
#[derive(Clone, Debug)]
pub struct VisageBob {
    bottleneck: [Vertex; 2],
    overhead: VertexSet,
}

impl VisageBob {
    pub const NAME: &'static str = "visage-bob";

    /// Reads the structure from the `box` and `cross` labels; the overhead graph is
    /// their common neighbourhood.
    pub fn from_graph(g: &Graph) -> Result<Self, GraphError> {
        let bx = g.landmark("box")?;
        let cr = g.landmark("cross")?;
        let overhead = VertexSet::from_iter_with_len(
            g.vertex_count(),
            g.neighbors(bx).iter().copied().filter(|&v| g.has_edge(cr, v)),
        );
        Ok(Self {
            bottleneck: [bx, cr],
            overhead,
        })
    }

    fn is_bottleneck(&self, v: Vertex) -> bool {
        self.bottleneck.contains(&v)
    }

    fn in_overhead(&self, v: Vertex) -> bool {
        self.overhead.contains(v)
    }

    fn in_cycle(&self, v: Vertex) -> bool {
        !self.in_overhead(v) && !self.is_bottleneck(v)
    }

    fn placement(&self, g: &Graph, s: &GameState) -> Move {
        let a = s.alice_pos.expect("Alice placed first");
        // Inside the overhead graph, judged on the overhead graph alone.
        let outside = self.outside_overhead(g);
        let candidates: Vec<Vertex> = self.overhead.iter().filter(|&v| v != a).collect();
        let mut best = (i64::MIN, Move::Pass);
        for v in candidates {
            let mut used = outside.clone();
            used.insert(a);
            used.insert(v);
            let score = longest_from(g, v, &used) as i64 - longest_from(g, a, &used) as i64;
            if score > best.0 {
                best = (score, Move::To(v));
            }
        }
        best.1
    }

    fn outside_overhead(&self, g: &Graph) -> VertexSet {
        VertexSet::from_iter_with_len(
            g.vertex_count(),
            (0..g.vertex_count()).filter(|&v| !self.in_overhead(v)),
        )
    }

    fn movement(&self, g: &Graph, rules: &GameRules, s: &GameState) -> Move {
        let a = s.alice_pos.expect("placed");
        let b = s.bob_pos.expect("placed");
        let moves = legal_moves(g, rules, s);
        let free = |v: Vertex| !s.used.contains(v);
        let free_bottleneck: Vec<Vertex> = self.bottleneck.iter().copied().filter(|&v| free(v)).collect();
        let can = |v: Vertex| moves.contains(&Move::To(v));

        if self.in_overhead(b) {
            if self.in_overhead(a) {
                // Alice came back from a bottleneck vertex: seal the last exit.
                if free_bottleneck.len() == 1 && can(free_bottleneck[0]) {
                    return Move::To(free_bottleneck[0]);
                }
                return self.best_where(g, s, &moves, |v| self.in_overhead(v));
            }
            if self.in_cycle(a) && free_bottleneck.len() == 1 && can(free_bottleneck[0]) {
                // She left through the other bottleneck vertex: follow her in.
                return Move::To(free_bottleneck[0]);
            }
            if self.in_cycle(a) {
                // She never came in: seal the door she is about to reach.
                if let Some(&x) = free_bottleneck.iter().find(|&&x| can(x) && g.has_edge(a, x)) {
                    return Move::To(x);
                }
            }
            let stay = self.best_where(g, s, &moves, |v| self.in_overhead(v));
            if stay != Move::Pass {
                return stay;
            }
            if let Some(&x) = free_bottleneck.iter().find(|&&x| can(x)) {
                return Move::To(x);
            }
        }
        if self.is_bottleneck(b) && self.in_cycle(a) && free_bottleneck.len() == 1 {
            // Cross the overhead graph to the other bottleneck vertex.
            let other = free_bottleneck[0];
            let via = moves.iter().copied().find(
                |m| matches!(m, Move::To(v) if self.in_overhead(*v) && g.has_edge(*v, other)),
            );
            if let Some(m) = via {
                return m;
            }
        }
        self.best_where(g, s, &moves, |_| true)
    }

    /// Legal move in `allowed` maximizing Bob's margin, Pass if there is none.
    fn best_where(
        &self,
        g: &Graph,
        s: &GameState,
        moves: &[Move],
        allowed: impl Fn(Vertex) -> bool,
    ) -> Move {
        let a = s.alice_pos.expect("placed");
        let mut best = (i64::MIN, Move::Pass);
        for &m in moves {
            let Move::To(v) = m else { continue };
            if !allowed(v) {
                continue;
            }
            let mut used = s.used.clone();
            used.insert(v);
            let score = margin(g, a, v, &used);
            if score > best.0 {
                best = (score, m);
            }
        }
        best.1
    }
}

/// Territory margin with Alice to move: vertices Bob reaches strictly before
/// Alice minus those she reaches first (ties go to her).
fn margin(g: &Graph, a: Vertex, b: Vertex, used: &VertexSet) -> i64 {
    let da = g.bfs_avoiding(a, Some(used)).expect("in range");
    let db = g.bfs_avoiding(b, Some(used)).expect("in range");
    let mut m = 0i64;
    for v in 0..g.vertex_count() {
        if used.contains(v) {
            continue;
        }
        match (da[v], db[v]) {
            (Some(x), Some(y)) if y < x => m += 1,
            (Some(_), _) => m -= 1,
            (None, Some(_)) => m += 1,
            (None, None) => {}
        }
    }
    m
}

/// Longest path (in vertices after `v`) from `v` through unused vertices.
fn longest_from(g: &Graph, v: Vertex, used: &VertexSet) -> usize {
    let mut used = used.clone();
    fn rec(g: &Graph, v: Vertex, used: &mut VertexSet) -> usize {
        let mut best = 0;
        for &w in g.neighbors(v) {
            if !used.contains(w) {
                used.insert(w);
                best = best.max(1 + rec(g, w, used));
                used.remove(w);
            }
        }
        best
    }
    rec(g, v, &mut used)
}

impl ScriptedPolicy for VisageBob {
    fn name(&self) -> &str {
        Self::NAME
    }

    fn choose(&self, g: &Graph, rules: &GameRules, s: &GameState) -> Move {
        debug_assert_eq!(s.to_move, Player::Bob);
        match s.phase {
            Phase::BobPlacement => self.placement(g, s),
            _ => self.movement(g, rules, s),
        }
    }
}

/// Policy names accepted by [`policy_by_name`].
pub const POLICY_NAMES: &[&str] = &[VisageBob::NAME];

/// Builds a named policy for `g`, with the side it plays.
pub fn policy_by_name(name: &str, g: &Graph) -> Option<Result<(Box<dyn ScriptedPolicy>, Player), GraphError>> {
    match name {
        VisageBob::NAME => Some(
            VisageBob::from_graph(g).map(|p| (Box::new(p) as Box<dyn ScriptedPolicy>, Player::Bob)),
        ),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{two_paths, visage};
    use crate::game::{Classification, Objective};
    use crate::solver::{solve, solve_vs_policy};

    #[test]
    fn visage_two_policy_wins() {
        let (g, _) = visage(2, &two_paths(4).unwrap()).unwrap();
        let p = VisageBob::from_graph(&g).unwrap();
        let rules = GameRules::free().with_objective(Objective::Classification);
        let scripted = solve_vs_policy(&g, &rules, &p, Player::Bob, None).unwrap();
        assert_eq!(scripted.classification(), Classification::BobWins);
        // restricting Bob can only help Alice
        let full = solve(&g, &rules, None).unwrap();
        assert!(scripted.classification().score() <= full.classification().score());
    }

    #[test]
    fn needs_labels() {
        assert!(VisageBob::from_graph(&two_paths(3).unwrap()).is_err());
        assert!(policy_by_name("nope", &two_paths(3).unwrap()).is_none());
    }
}
