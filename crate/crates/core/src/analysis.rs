//! Independent checks used as oracles against generators and the solver:
//! vertex connectivity, longest paths, Hamilton paths and the small lemmas
//! about trees, super-vertices and vertex deletion.

use std::collections::VecDeque;

use num_rational::Ratio;
use serde::Serialize;

use crate::constructions::add_super_vertex;
use crate::error::AnalysisError;
use crate::game::{GameRules, Move, Objective, Outcome};
use crate::graph::{Graph, Vertex, VertexSet};
use crate::solver::{solve, solve_with, SolveOptions, SolveResult};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConnectivityReport {
    pub kappa: usize,
    /// A minimum vertex cut; `None` for complete graphs.
    pub witness_cut: Option<Vec<Vertex>>,
    /// The pair whose local connectivity attained `kappa`.
    pub critical_pair: Option<(Vertex, Vertex)>,
    /// `kappa` internally disjoint paths between the critical pair.
    pub menger_paths: Vec<Vec<Vertex>>,
}

/// Unit-capacity flow network with every vertex split into in/out halves.
struct SplitNetwork {
    head: Vec<usize>,
    cap: Vec<i32>,
    to: Vec<usize>,
    adj: Vec<Vec<usize>>,
}

impl SplitNetwork {
    fn new(g: &Graph, s: Vertex, t: Vertex) -> Self {
        let n = g.vertex_count();
        let mut net = Self {
            head: Vec::new(),
            cap: Vec::new(),
            to: Vec::new(),
            adj: vec![Vec::new(); 2 * n],
        };
        let big = n as i32 + 1;
        for v in 0..n {
            let c = if v == s || v == t { big } else { 1 };
            net.arc(2 * v, 2 * v + 1, c);
        }
        for (u, v) in g.edges() {
            net.arc(2 * u + 1, 2 * v, big);
            if !g.is_directed() {
                net.arc(2 * v + 1, 2 * u, big);
            }
        }
        net
    }

    fn arc(&mut self, u: usize, v: usize, c: i32) {
        self.adj[u].push(self.to.len());
        self.head.push(u);
        self.to.push(v);
        self.cap.push(c);
        self.adj[v].push(self.to.len());
        self.head.push(v);
        self.to.push(u);
        self.cap.push(0);
    }

    /// Augments until no path remains or `limit` units flow.
    fn max_flow(&mut self, src: usize, sink: usize, limit: usize) -> usize {
        let mut flow = 0;
        while flow < limit {
            let mut prev = vec![usize::MAX; self.adj.len()];
            let mut seen = vec![false; self.adj.len()];
            seen[src] = true;
            let mut q = VecDeque::from([src]);
            while let Some(u) = q.pop_front() {
                for &e in &self.adj[u] {
                    let v = self.to[e];
                    if self.cap[e] > 0 && !seen[v] {
                        seen[v] = true;
                        prev[v] = e;
                        q.push_back(v);
                    }
                }
            }
            if !seen[sink] {
                break;
            }
            let mut v = sink;
            while v != src {
                let e = prev[v];
                self.cap[e] -= 1;
                self.cap[e ^ 1] += 1;
                v = self.head[e];
            }
            flow += 1;
        }
        flow
    }

    fn residual_reachable(&self, src: usize) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        seen[src] = true;
        let mut stack = vec![src];
        while let Some(u) = stack.pop() {
            for &e in &self.adj[u] {
                if self.cap[e] > 0 && !seen[self.to[e]] {
                    seen[self.to[e]] = true;
                    stack.push(self.to[e]);
                }
            }
        }
        seen
    }

    /// Splits the current flow into vertex paths (original indices).
    fn paths(&mut self, src: usize, sink: usize) -> Vec<Vec<Vertex>> {
        let mut out = Vec::new();
        loop {
            let mut path = vec![src / 2];
            let mut u = src;
            let mut found = false;
            while u != sink {
                // a forward arc carrying flow has its reverse arc positive
                let next = self.adj[u]
                    .iter()
                    .copied()
                    .find(|&e| e % 2 == 0 && self.cap[e ^ 1] > 0);
                let Some(e) = next else { break };
                self.cap[e ^ 1] -= 1;
                self.cap[e] += 1;
                u = self.to[e];
                if u % 2 == 0 {
                    path.push(u / 2);
                }
                found = true;
            }
            if !found || u != sink {
                break;
            }
            out.push(path);
        }
        out
    }
}

/// Number of internally vertex-disjoint paths between `s` and `t` (capped at `limit`).
pub fn local_connectivity(g: &Graph, s: Vertex, t: Vertex, limit: usize) -> usize {
    let mut net = SplitNetwork::new(g, s, t);
    net.max_flow(2 * s + 1, 2 * t, limit)
}

/// Maximum family of internally vertex-disjoint `s`-`t` paths.
pub fn menger_paths(g: &Graph, s: Vertex, t: Vertex) -> Vec<Vec<Vertex>> {
    let mut net = SplitNetwork::new(g, s, t);
    net.max_flow(2 * s + 1, 2 * t, g.vertex_count());
    net.paths(2 * s + 1, 2 * t)
}

/// Exact vertex connectivity by max-flow over Even's pair schedule.
pub fn vertex_connectivity(g: &Graph) -> Result<ConnectivityReport, AnalysisError> {
    if g.is_directed() {
        return Err(AnalysisError::Directed);
    }
    let n = g.vertex_count();
    if n < 2 {
        // complete-graph convention: no cut exists
        return Ok(ConnectivityReport {
            kappa: 0,
            witness_cut: None,
            critical_pair: None,
            menger_paths: Vec::new(),
        });
    }
    if !g.is_connected() {
        return Ok(ConnectivityReport {
            kappa: 0,
            witness_cut: Some(Vec::new()),
            critical_pair: None,
            menger_paths: Vec::new(),
        });
    }
    let mut kappa = n - 1;
    let mut critical = None;
    let mut i = 0;
    while i <= kappa && i < n {
        for j in 0..n {
            if j != i && !g.has_edge(i, j) {
                let c = local_connectivity(g, i, j, kappa);
                if c < kappa || critical.is_none() && c == kappa {
                    kappa = c;
                    critical = Some((i, j));
                }
            }
        }
        i += 1;
    }
    let Some((s, t)) = critical else {
        return Ok(ConnectivityReport {
            kappa: n - 1,
            witness_cut: None,
            critical_pair: None,
            menger_paths: Vec::new(),
        });
    };
    let mut net = SplitNetwork::new(g, s, t);
    net.max_flow(2 * s + 1, 2 * t, n);
    let reach = net.residual_reachable(2 * s + 1);
    let cut: Vec<Vertex> = (0..n)
        .filter(|&v| v != s && v != t && reach[2 * v] && !reach[2 * v + 1])
        .collect();
    let paths = net.paths(2 * s + 1, 2 * t);
    Ok(ConnectivityReport {
        kappa,
        witness_cut: Some(cut),
        critical_pair: Some((s, t)),
        menger_paths: paths,
    })
}

/// Whether removing `cut` leaves at least two vertices in different components.
pub fn disconnects(g: &Graph, cut: &VertexSet) -> bool {
    let rest: Vec<Vertex> = (0..g.vertex_count()).filter(|&v| !cut.contains(v)).collect();
    let Some(&first) = rest.first() else {
        return false;
    };
    let d = g.bfs_avoiding(first, Some(cut)).expect("in range");
    rest.iter().any(|&v| d[v].is_none())
}

/// Vertex connectivity by enumerating vertex subsets in increasing size.
/// Exponential; an oracle for small graphs only.
pub fn connectivity_by_cut_enumeration(g: &Graph) -> usize {
    let n = g.vertex_count();
    for size in 0..n.saturating_sub(1) {
        let mut found = false;
        for_each_subset(n, size, |subset| {
            if !found && disconnects(g, &VertexSet::from_iter_with_len(n, subset.iter().copied())) {
                found = true;
            }
        });
        if found {
            return size;
        }
    }
    n.saturating_sub(1)
}

fn for_each_subset(n: usize, size: usize, mut f: impl FnMut(&[Vertex])) {
    fn rec(start: usize, n: usize, size: usize, cur: &mut Vec<Vertex>, f: &mut dyn FnMut(&[Vertex])) {
        if cur.len() == size {
            f(cur);
            return;
        }
        for v in start..n {
            cur.push(v);
            rec(v + 1, n, size, cur, f);
            cur.pop();
        }
    }
    rec(0, n, size, &mut Vec::new(), &mut f);
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LongestPath {
    /// Edge count.
    pub length: usize,
    pub start: Vertex,
    pub path: Vec<Vertex>,
}

/// Exact longest simple path (edge count) respecting direction. Vertices in
/// `forbidden_transit` may only appear as the first vertex of the path. With
/// `source = None` the maximum over all admissible starts is returned, ties to the
/// lowest start index. The search counts visited nodes against `node_budget`.
pub fn longest_path_length(
    g: &Graph,
    source: Option<Vertex>,
    forbidden_transit: &VertexSet,
    node_budget: Option<u64>,
) -> Result<LongestPath, AnalysisError> {
    let n = g.vertex_count();
    let mut nodes = 0u64;
    let starts: Vec<Vertex> = match source {
        Some(s) => vec![s],
        None => (0..n).collect(),
    };
    let mut best: Option<LongestPath> = None;
    for s in starts {
        let mut used = forbidden_transit.clone();
        used.insert(s);
        let mut cur = vec![s];
        let mut best_path = vec![s];
        dfs(g, s, &mut used, &mut cur, &mut best_path, &mut nodes, node_budget)?;
        let len = best_path.len() - 1;
        if best.as_ref().map_or(true, |b| len > b.length) {
            best = Some(LongestPath {
                length: len,
                start: s,
                path: best_path,
            });
        }
    }
    best.ok_or(AnalysisError::Graph(crate::error::GraphError::VertexOutOfRange {
        vertex: 0,
        n,
    }))
}

fn dfs(
    g: &Graph,
    u: Vertex,
    used: &mut VertexSet,
    cur: &mut Vec<Vertex>,
    best: &mut Vec<Vertex>,
    nodes: &mut u64,
    budget: Option<u64>,
) -> Result<(), AnalysisError> {
    *nodes += 1;
    if budget.is_some_and(|b| *nodes > b) {
        return Err(AnalysisError::BudgetExhausted);
    }
    if cur.len() > best.len() {
        best.clone_from(cur);
    }
    for &v in g.neighbors(u) {
        if !used.contains(v) {
            used.insert(v);
            cur.push(v);
            let r = dfs(g, v, used, cur, best, nodes, budget);
            cur.pop();
            used.remove(v);
            r?;
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum HamiltonViolation {
    Empty,
    OutOfRange { index: usize, vertex: Vertex },
    NotAdjacent { index: usize, from: Vertex, to: Vertex },
    Repeated { index: usize, vertex: Vertex },
    Missing { vertex: Vertex },
}

/// `Ok(())` when `seq` visits every vertex exactly once along edges.
pub fn check_hamilton_path(g: &Graph, seq: &[Vertex]) -> Result<(), HamiltonViolation> {
    let n = g.vertex_count();
    if seq.is_empty() {
        return Err(HamiltonViolation::Empty);
    }
    let mut seen = VertexSet::new(n);
    for (i, &v) in seq.iter().enumerate() {
        if v >= n {
            return Err(HamiltonViolation::OutOfRange { index: i, vertex: v });
        }
        if !seen.insert(v) {
            return Err(HamiltonViolation::Repeated { index: i, vertex: v });
        }
        if i > 0 && !g.has_edge(seq[i - 1], v) {
            return Err(HamiltonViolation::NotAdjacent {
                index: i,
                from: seq[i - 1],
                to: v,
            });
        }
    }
    match (0..n).find(|&v| !seen.contains(v)) {
        Some(v) => Err(HamiltonViolation::Missing { vertex: v }),
        None => Ok(()),
    }
}

pub fn is_tree(g: &Graph) -> bool {
    !g.is_directed() && g.vertex_count() >= 1 && g.edge_count() + 1 == g.vertex_count() && g.is_connected()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreeLemmaReport {
    pub outcome: Outcome,
    /// alpha <= beta + 1
    pub alice_bound: bool,
    /// beta <= 2 alpha
    pub bob_bound: bool,
}

impl TreeLemmaReport {
    pub fn holds(&self) -> bool {
        self.alice_bound && self.bob_bound
    }
}

fn solve_exact(g: &Graph, node_budget: Option<u64>) -> Result<SolveResult, AnalysisError> {
    let r = solve(g, &GameRules::free().with_objective(Objective::Ratio), node_budget)?;
    if r.budget_exhausted {
        return Err(AnalysisError::BudgetExhausted);
    }
    Ok(r)
}

/// Solves a tree under optimal ratio play and checks both tree inequalities.
pub fn verify_tree_lemma(t: &Graph, node_budget: Option<u64>) -> Result<TreeLemmaReport, AnalysisError> {
    if !is_tree(t) || t.vertex_count() < 2 {
        return Err(AnalysisError::NotATree);
    }
    let o = solve_exact(t, node_budget)?.outcome;
    Ok(TreeLemmaReport {
        outcome: o,
        alice_bound: o.alpha <= o.beta + 1,
        bob_bound: o.beta <= 2 * o.alpha,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum LemmaCheck {
    /// Precondition on beta/alpha not met.
    Skipped { ratio: Ratio<u64> },
    Checked {
        holds: bool,
        /// Left-hand side of the inequality (the derived graph's quantity).
        lhs: Ratio<u64>,
        /// Right-hand side (the original graph's quantity).
        rhs: Ratio<u64>,
        original: Outcome,
        derived: Outcome,
    },
}

impl LemmaCheck {
    pub fn violated(&self) -> bool {
        matches!(self, LemmaCheck::Checked { holds: false, .. })
    }
}

/// For Bob-favoured `g`: adding a vertex adjacent to everything gives
/// (alpha/beta) of the new graph >= (beta/alpha) of `g`.
pub fn verify_supervertex_lemma(g: &Graph, node_budget: Option<u64>) -> Result<LemmaCheck, AnalysisError> {
    if g.is_directed() {
        return Err(AnalysisError::Directed);
    }
    let og = solve_exact(g, node_budget)?.outcome;
    let ratio = og.ratio();
    if ratio <= Ratio::from_integer(1) {
        return Ok(LemmaCheck::Skipped { ratio });
    }
    let f = add_super_vertex(g, None).map_err(|e| match e {
        crate::error::ConstructionError::Graph(g) => AnalysisError::Graph(g),
        _ => AnalysisError::Directed,
    })?;
    let of = solve_exact(&f, node_budget)?.outcome;
    let lhs = Ratio::new(of.alpha as u64, of.beta.max(1) as u64);
    Ok(LemmaCheck::Checked {
        holds: lhs >= ratio,
        lhs,
        rhs: ratio,
        original: og,
        derived: of,
    })
}

/// For Alice-favoured `g`: deleting her optimal start gives
/// ((beta + 1)/alpha) of the smaller graph >= (alpha/beta) of `g`.
///
/// Several outcomes of the smaller graph can share the optimal ratio while
/// differing in (beta + 1)/alpha (two disjoint edges: 1:1 and 2:2), so that
/// side is solved with Bob maximizing (beta + 1)/alpha itself.
pub fn verify_deletion_lemma(g: &Graph, node_budget: Option<u64>) -> Result<LemmaCheck, AnalysisError> {
    if g.is_directed() {
        return Err(AnalysisError::Directed);
    }
    let rg = solve_exact(g, node_budget)?;
    let og = rg.outcome;
    let ratio = og.ratio();
    if ratio >= Ratio::from_integer(1) {
        return Ok(LemmaCheck::Skipped { ratio });
    }
    let Some(Move::To(start)) = rg.principal_variation.first().copied() else {
        unreachable!("free-start play begins with Alice's placement");
    };
    let (h, _) = g.without_vertices(&VertexSet::from_iter_with_len(g.vertex_count(), [start]));
    let options = SolveOptions {
        bob_bonus: 1,
        ..SolveOptions::budget(node_budget)
    };
    let rh = solve_with(&h, &GameRules::free().with_objective(Objective::Ratio), options)?;
    if rh.budget_exhausted {
        return Err(AnalysisError::BudgetExhausted);
    }
    let oh = rh.outcome;
    let lhs = Ratio::new(oh.beta as u64 + 1, oh.alpha as u64);
    let rhs = Ratio::new(og.alpha as u64, og.beta.max(1) as u64);
    Ok(LemmaCheck::Checked {
        holds: lhs >= rhs,
        lhs,
        rhs,
        original: og,
        derived: oh,
    })
}
