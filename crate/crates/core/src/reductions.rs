//! Hardness pipeline: formula graphs with given starts (directed and undirected)
//! and the overhead graphs that force the start positions.
//!
//! Every gadget length lives in a calibration record that is emitted with the
//! graph, so the oracle-equivalence suites pin the exact constants used.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::json;

use crate::analysis::longest_path_length;
use crate::error::ReductionError;
use crate::game::{
    apply_move, initial_state, legal_moves, Classification, GameRules, GameState, Move, Objective,
};
use crate::graph::{Graph, GraphBuilder, Vertex, VertexSet};
use crate::solver::{SolveOptions, Solver};
use crate::qbf::Qbf;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Stage {
    #[serde(rename = "G_phi")]
    GPhi,
    #[serde(rename = "G_phi_prime")]
    GPhiPrime,
    H,
    #[serde(rename = "H_prime")]
    HPrime,
    F,
}

impl Stage {
    pub fn name(self) -> &'static str {
        match self {
            Stage::GPhi => "G_phi",
            Stage::GPhiPrime => "G_phi_prime",
            Stage::H => "H",
            Stage::HPrime => "H_prime",
            Stage::F => "F",
        }
    }
}

/// Gadget sizes of a formula graph. All lengths count edges unless noted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FormulaCalibration {
    /// Edges from a clause vertex to a literal's complement branch vertex.
    pub slow_path: usize,
    /// Edges of each private clause-to-dummy path.
    pub dummy_path: usize,
    /// Pendant path on every branch vertex and on the dummy (0 = none).
    pub spare_path: usize,
    /// Vertices Alice walks after her chain before her queue ends; the clause
    /// vertex follows.
    pub queue_vertices: usize,
    /// Shared entry vertices of the split queue (0 = plain queue).
    pub queue_stem: usize,
    /// Vertices of each queue branch after the stem.
    pub queue_branch: usize,
    /// Vertices Bob walks after his chain before the clause cycle.
    pub bob_lead_in: usize,
}

impl FormulaCalibration {
    pub fn directed(k: usize) -> Self {
        Self {
            slow_path: 1,
            dummy_path: 1,
            spare_path: 0,
            queue_vertices: k - 1,
            queue_stem: 0,
            queue_branch: 0,
            bob_lead_in: 0,
        }
    }

    /// Undirected sizes. Slow paths and private dummy paths share one length
    /// `max(2k+n, 2n+k)`: at least 2k+n so returning from the dummy is slower than
    /// sweeping the clauses, and at least 2n+k so no slow path reaches the clause
    /// gadget before the opponent's chain does. Spare paths get 2n+k edges,
    /// stretched when needed so that climbing back up a dead-end path never beats
    /// them. From four clauses on, the queue of k-1 vertices splits after 2
    /// vertices into k branches (one per clause) so Bob cannot cut it; shorter
    /// queues stay plain, since a split that early hands Bob a blocking move.
    pub fn undirected(n: usize, k: usize) -> Self {
        let split = k >= 4;
        let slow = (2 * k + n).max(2 * n + k);
        Self {
            slow_path: slow,
            dummy_path: slow,
            spare_path: (2 * n + k).max(slow - 1),
            queue_vertices: k - 1,
            queue_stem: if split { 2 } else { 0 },
            queue_branch: if split { k - 3 } else { 0 },
            bob_lead_in: 0,
        }
    }
}

/// Overhead sizes; `n_padded = max(|V(g)|, 4)`. The start paths have 2n edges in
/// both variants; without arc directions a longest path may run u1 -> g -> u2,
/// which is what the larger undirected bounds account for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OverheadCalibration {
    pub n_padded: usize,
    pub l_low: usize,
    pub l_up: usize,
    /// Edges from u_i to v_i.
    pub start_path: usize,
    /// Edges of each auxiliary path.
    pub aux_path: usize,
    /// Edges of an auxiliary path below s2's attachment vertex.
    pub s2_below: usize,
}

impl OverheadCalibration {
    fn new(n: usize, directed: bool) -> Self {
        let n_padded = n.max(4);
        let (l_low, l_up) = if directed {
            (2 * n_padded, 3 * n_padded)
        } else {
            (4 * n_padded, 5 * n_padded)
        };
        Self {
            n_padded,
            l_low,
            l_up,
            start_path: 2 * n_padded,
            aux_path: l_up + 1,
            s2_below: l_low - 2,
        }
    }

    pub fn s2_above(&self) -> usize {
        self.aux_path - self.s2_below
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Calibration {
    Formula(FormulaCalibration),
    Overhead(OverheadCalibration),
}

#[derive(Clone, Debug)]
pub struct ReductionOutput {
    pub stage: Stage,
    pub graph: Graph,
    pub alice_start: Option<Vertex>,
    pub bob_start: Option<Vertex>,
    pub calibration: Calibration,
}

impl ReductionOutput {
    pub fn landmarks(&self) -> &BTreeMap<String, Vertex> {
        self.graph.labels()
    }

    pub fn landmark(&self, name: &str) -> Result<Vertex, ReductionError> {
        Ok(self.graph.landmark(name)?)
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "stage": self.stage,
            "alice_start": self.alice_start,
            "bob_start": self.bob_start,
            "calibration": self.calibration,
            "landmarks": self.landmarks(),
            "graph": self.graph.to_json(),
        })
    }
}

fn formula_graph(
    phi: &Qbf,
    directed: bool,
    cal: FormulaCalibration,
) -> Result<ReductionOutput, ReductionError> {
    let n = phi.var_count();
    let k = phi.clause_count();
    let mut b = GraphBuilder::new(directed);
    let alice = b.add_vertex();
    let bob = b.add_vertex();
    b.label("alice_start", alice);
    b.label("bob_start", bob);

    // Variable gadgets: the owner crosses a diamond, the opponent a two-vertex relay.
    let mut t_branch = Vec::with_capacity(n);
    let mut f_branch = Vec::with_capacity(n);
    let (mut end_a, mut end_b) = (alice, bob);
    for var in 0..n {
        let (owner, other) = if Qbf::is_existential(var) {
            (&mut end_a, &mut end_b)
        } else {
            (&mut end_b, &mut end_a)
        };
        let t = b.add_vertex();
        let f = b.add_vertex();
        let out = b.add_vertex();
        for branch in [t, f] {
            b.add_edge(*owner, branch);
            b.add_edge(branch, out);
        }
        *owner = out;
        *other = *b.add_tail(*other, 2).last().expect("two vertices");
        b.label(format!("T_x{}", var + 1), t);
        b.label(format!("F_x{}", var + 1), f);
        t_branch.push(t);
        f_branch.push(f);
    }
    b.label("alice_chain_end", end_a);
    b.label("bob_chain_end", end_b);

    let clauses = b.add_vertices(k);
    for (j, &c) in clauses.iter().enumerate() {
        b.label(format!("C_{}", j + 1), c);
    }
    if k >= 2 {
        for j in 0..k {
            b.add_edge_once(clauses[j], clauses[(j + 1) % k]);
        }
    }
    let dummy = b.add_vertex();
    b.label("dummy", dummy);

    // Alice's waiting queue.
    if cal.queue_stem == 0 {
        let queue = b.add_tail(end_a, cal.queue_vertices);
        let last = queue.last().copied().unwrap_or(end_a);
        if let Some(&q) = queue.first() {
            b.label("queue_entry", q);
        }
        for &c in &clauses {
            b.add_edge(last, c);
        }
    } else {
        let stem = b.add_tail(end_a, cal.queue_stem);
        b.label("queue_entry", stem[0]);
        let split = *stem.last().expect("non-empty stem");
        for (j, &c) in clauses.iter().enumerate() {
            let branch = b.add_tail(split, cal.queue_branch);
            let last = branch.last().copied().unwrap_or(split);
            b.add_edge(last, c);
            if let Some(&first) = branch.first() {
                b.label(format!("queue_branch_{}", j + 1), first);
            }
        }
    }

    // Bob's entry into the clause cycle. With a single clause Alice takes it, so
    // Bob gets his own way to the dummy instead.
    let lead = b.add_tail(end_b, cal.bob_lead_in);
    let bob_entry = lead.last().copied().unwrap_or(end_b);
    b.label("bob_clause_entry", bob_entry);
    for &c in &clauses {
        b.add_edge(bob_entry, c);
    }
    let connect = |b: &mut GraphBuilder, from: Vertex, to: Vertex, len: usize| {
        if len <= 1 {
            b.add_edge_once(from, to);
        } else {
            b.add_path_between(from, to, len);
        }
    };
    if k == 1 {
        connect(&mut b, bob_entry, dummy, cal.dummy_path);
    }

    // Clause wiring: complement branch of each literal, then the dummy.
    for (j, clause) in phi.clauses().iter().enumerate() {
        let mut targets: Vec<Vertex> = clause
            .iter()
            .map(|l| if l.negated { t_branch[l.var] } else { f_branch[l.var] })
            .collect();
        targets.sort_unstable();
        targets.dedup();
        for t in targets {
            connect(&mut b, clauses[j], t, cal.slow_path);
        }
        connect(&mut b, clauses[j], dummy, cal.dummy_path);
    }

    if cal.spare_path > 0 {
        for &v in t_branch.iter().chain(&f_branch).chain([&dummy]) {
            b.add_tail(v, cal.spare_path);
        }
    }

    Ok(ReductionOutput {
        stage: if directed { Stage::GPhi } else { Stage::GPhiPrime },
        graph: b.finish()?,
        alice_start: Some(alice),
        bob_start: Some(bob),
        calibration: Calibration::Formula(cal),
    })
}

/// Directed formula graph with given starts; Alice wins iff `phi` is true.
pub fn build_g_phi(phi: &Qbf) -> Result<ReductionOutput, ReductionError> {
    formula_graph(phi, true, FormulaCalibration::directed(phi.clause_count()))
}

/// Undirected formula graph with given starts and the four anti-shortcut gadgets.
pub fn build_g_phi_prime(phi: &Qbf) -> Result<ReductionOutput, ReductionError> {
    let cal = FormulaCalibration::undirected(phi.var_count(), phi.clause_count());
    formula_graph(phi, false, cal)
}

/// Same as [`build_g_phi_prime`] with caller-chosen gadget sizes.
pub fn build_g_phi_prime_with(
    phi: &Qbf,
    cal: FormulaCalibration,
) -> Result<ReductionOutput, ReductionError> {
    formula_graph(phi, false, cal)
}

fn check_starts(g: &Graph, v1: Vertex, v2: Vertex) -> Result<(), ReductionError> {
    for v in [v1, v2] {
        if v >= g.vertex_count() {
            return Err(ReductionError::InvalidStart(v));
        }
    }
    if v1 == v2 {
        return Err(ReductionError::IdenticalStarts(v1));
    }
    Ok(())
}

/// Adds the overhead around an embedded copy of `g`; returns (s1, s2).
fn overhead_into(
    b: &mut GraphBuilder,
    g: &Graph,
    v1: Vertex,
    v2: Vertex,
    cal: &OverheadCalibration,
    prefix: &str,
) -> (Vertex, Vertex) {
    let off = b.embed(g, Some(prefix));
    let (v1, v2) = (v1 + off, v2 + off);
    b.label(format!("{prefix}v1"), v1);
    b.label(format!("{prefix}v2"), v2);
    let s1 = b.add_vertex();
    let s2 = b.add_vertex();
    let u1 = b.add_vertex();
    let u2 = b.add_vertex();
    b.add_path_between(u1, v1, cal.start_path);
    b.add_path_between(u2, v2, cal.start_path);
    b.add_edge(s1, u1);
    b.add_edge(s2, u2);
    let above = cal.s2_above();
    for i in 1..=2 {
        let top = b.add_vertex();
        let rest = b.add_tail(top, cal.aux_path);
        b.add_edge(s1, top);
        b.add_edge(s2, rest[above - 1]);
        b.label(format!("{prefix}aux{i}_top"), top);
        b.label(format!("{prefix}aux{i}_s2_attach"), rest[above - 1]);
    }
    for (name, v) in [("s1", s1), ("s2", s2), ("u1", u1), ("u2", u2)] {
        b.label(format!("{prefix}{name}"), v);
    }
    (s1, s2)
}

/// Directed overhead graph: free-start play on it mirrors play on `g` from (v1, v2).
pub fn build_h(g: &Graph, v1: Vertex, v2: Vertex) -> Result<ReductionOutput, ReductionError> {
    if !g.is_directed() {
        return Err(ReductionError::Directedness { expected: "directed" });
    }
    check_starts(g, v1, v2)?;
    let cal = OverheadCalibration::new(g.vertex_count(), true);
    let mut b = GraphBuilder::new(true);
    overhead_into(&mut b, g, v1, v2, &cal, "");
    Ok(ReductionOutput {
        stage: Stage::H,
        graph: b.finish()?,
        alice_start: None,
        bob_start: None,
        calibration: Calibration::Overhead(cal),
    })
}

/// Undirected overhead graph with the longer bounds needed without arc directions.
/// The bounds assume `v1` and `v2` lie in one component of `g`; for a
/// disconnected pair the equivalence with play on `g` can break.
pub fn build_h_prime(g: &Graph, v1: Vertex, v2: Vertex) -> Result<ReductionOutput, ReductionError> {
    if g.is_directed() {
        return Err(ReductionError::Directedness { expected: "undirected" });
    }
    check_starts(g, v1, v2)?;
    let cal = OverheadCalibration::new(g.vertex_count(), false);
    let mut b = GraphBuilder::new(false);
    overhead_into(&mut b, g, v1, v2, &cal, "");
    Ok(ReductionOutput {
        stage: Stage::HPrime,
        graph: b.finish()?,
        alice_start: None,
        bob_start: None,
        calibration: Calibration::Overhead(cal),
    })
}

/// Two copies of the undirected overhead graph joined through t1 and t2.
/// Like [`build_h_prime`], this needs a `v1`-`v2` path in `g`.
pub fn build_f(g: &Graph, v1: Vertex, v2: Vertex) -> Result<ReductionOutput, ReductionError> {
    if g.is_directed() {
        return Err(ReductionError::Directedness { expected: "undirected" });
    }
    check_starts(g, v1, v2)?;
    let cal = OverheadCalibration::new(g.vertex_count(), false);
    let mut b = GraphBuilder::new(false);
    let (s1a, s2a) = overhead_into(&mut b, g, v1, v2, &cal, "a.");
    let (s1b, s2b) = overhead_into(&mut b, g, v1, v2, &cal, "b.");
    let t1 = b.add_vertex();
    let t2 = b.add_vertex();
    b.label("t1", t1);
    b.label("t2", t2);
    for (x, y) in connector_edges(t1, t2, s1a, s2a, s1b, s2b) {
        b.add_edge(x, y);
    }
    for (name, v) in [("box.t1", t1), ("box.s1a", s1a), ("box.s1b", s1b)] {
        b.label(name, v);
    }
    for (name, v) in [("dot.t2", t2), ("dot.s2a", s2a), ("dot.s2b", s2b)] {
        b.label(name, v);
    }
    Ok(ReductionOutput {
        stage: Stage::F,
        graph: b.finish()?,
        alice_start: None,
        bob_start: None,
        calibration: Calibration::Overhead(cal),
    })
}

fn connector_edges(
    t1: Vertex,
    t2: Vertex,
    s1a: Vertex,
    s2a: Vertex,
    s1b: Vertex,
    s2b: Vertex,
) -> [(Vertex, Vertex); 10] {
    [
        (t1, s1a),
        (t1, s1b),
        (t1, s2a),
        (t1, s2b),
        (t2, s2a),
        (t2, s2b),
        (s1a, s2a),
        (s1b, s2b),
        (s1a, s1b),
        (s2a, s2b),
    ]
}

/// Result of one structural or behavioural check on H'(g).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "detail", rename_all = "snake_case")]
pub enum Check {
    Holds(String),
    Fails(String),
    Exhausted,
}

impl Check {
    pub fn holds(&self) -> bool {
        matches!(self, Check::Holds(_))
    }

    fn from_bool(ok: bool, detail: String) -> Self {
        if ok {
            Check::Holds(detail)
        } else {
            Check::Fails(detail)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OverheadProperties {
    /// From (s1, s2) the moves to u1 and then u2 are optimal.
    pub p1: Check,
    /// From (s2, s1) Bob wins.
    pub p2: Check,
    /// With s1, s2 usable only as start, a longest single-player path starts at s1.
    pub p3: Check,
    /// Every s1-s2 path leaves one auxiliary path untouched.
    pub p4: Check,
    /// dist(s1, s2) >= 3.
    pub p5: Check,
}

impl OverheadProperties {
    pub fn all(&self) -> [(&'static str, &Check); 5] {
        [
            ("p1", &self.p1),
            ("p2", &self.p2),
            ("p3", &self.p3),
            ("p4", &self.p4),
            ("p5", &self.p5),
        ]
    }

    pub fn all_hold(&self) -> bool {
        self.all().iter().all(|(_, c)| c.holds())
    }
}

/// Checks p1-p5 on `H'(g)` with starts `v1`, `v2`. Solves share `node_budget` each.
pub fn check_overhead_properties(
    g: &Graph,
    v1: Vertex,
    v2: Vertex,
    node_budget: Option<u64>,
) -> Result<OverheadProperties, ReductionError> {
    let h = build_h_prime(g, v1, v2)?;
    let hg = &h.graph;
    let [s1, s2, u1, u2] = ["s1", "s2", "u1", "u2"].map(|l| hg.landmark(l).expect("labelled"));
    Ok(OverheadProperties {
        p1: check_p1(hg, s1, s2, u1, u2, node_budget)?,
        p2: check_p2(hg, s1, s2, node_budget)?,
        p3: check_p3(hg, s1, s2)?,
        p4: check_p4(hg, s1, s2),
        p5: {
            let d = hg.bfs_distances(s1)?[s2];
            Check::from_bool(d.is_some_and(|d| d >= 3), format!("dist(s1, s2) = {d:?}"))
        },
    })
}

fn check_p1(
    g: &Graph,
    s1: Vertex,
    s2: Vertex,
    u1: Vertex,
    u2: Vertex,
    budget: Option<u64>,
) -> Result<Check, ReductionError> {
    let rules = GameRules::given(s1, s2).with_objective(Objective::Classification);
    let mut solver = Solver::new(g, &rules, SolveOptions::budget(budget));
    let root = initial_state(g, &rules)?;
    let best_for = |solver: &mut Solver, s: &GameState| -> Result<Option<i8>, ReductionError> {
        Ok(solver.classify(s)?.map(Classification::score))
    };
    // Alice minimizes the score: u1 must be at least as good as every alternative.
    let after_u1 = apply_move(g, &rules, &root, Move::To(u1))?;
    let Some(via_u1) = best_for(&mut solver, &after_u1)? else {
        return Ok(Check::Exhausted);
    };
    for m in legal_moves(g, &rules, &root) {
        let c = apply_move(g, &rules, &root, m)?;
        match best_for(&mut solver, &c)? {
            None => return Ok(Check::Exhausted),
            Some(v) if v < via_u1 => {
                return Ok(Check::Fails(format!("Alice does better with {m} than with {u1}")))
            }
            Some(_) => {}
        }
    }
    // Bob maximizes: after Alice's u1, u2 must be at least as good as every alternative.
    let after_u2 = apply_move(g, &rules, &after_u1, Move::To(u2))?;
    let Some(via_u2) = best_for(&mut solver, &after_u2)? else {
        return Ok(Check::Exhausted);
    };
    for m in legal_moves(g, &rules, &after_u1) {
        let c = apply_move(g, &rules, &after_u1, m)?;
        match best_for(&mut solver, &c)? {
            None => return Ok(Check::Exhausted),
            Some(v) if v > via_u2 => {
                return Ok(Check::Fails(format!("Bob does better with {m} than with {u2}")))
            }
            Some(_) => {}
        }
    }
    Ok(Check::Holds(format!(
        "value {:?}",
        Classification::from_score(via_u2)
    )))
}

fn check_p2(g: &Graph, s1: Vertex, s2: Vertex, budget: Option<u64>) -> Result<Check, ReductionError> {
    let rules = GameRules::given(s2, s1).with_objective(Objective::Classification);
    let root = initial_state(g, &rules)?;
    let mut solver = Solver::new(g, &rules, SolveOptions::budget(budget));
    Ok(match solver.classify(&root)? {
        None => Check::Exhausted,
        Some(c) => Check::from_bool(c == Classification::BobWins, format!("{c:?}")),
    })
}

fn check_p3(g: &Graph, s1: Vertex, s2: Vertex) -> Result<Check, ReductionError> {
    let forbidden = VertexSet::from_iter_with_len(g.vertex_count(), [s1, s2]);
    let best = longest_path_length(g, None, &forbidden, None)?;
    let from_s1 = longest_path_length(g, Some(s1), &forbidden, None)?;
    Ok(Check::from_bool(
        from_s1.length == best.length,
        format!("longest {} (from {}), from s1 {}", best.length, best.start, from_s1.length),
    ))
}

/// Enumerates simple s1-s2 paths; each must miss an entire auxiliary path.
fn check_p4(g: &Graph, s1: Vertex, s2: Vertex) -> Check {
    const PATH_CAP: usize = 100_000;
    let n = g.vertex_count();
    let blocked = VertexSet::from_iter_with_len(n, [s1, s2]);
    let aux: Vec<Vec<Vertex>> = ["aux1_top", "aux2_top"]
        .iter()
        .map(|l| {
            let top = g.landmark(l).expect("labelled");
            let d = g.bfs_avoiding(top, Some(&blocked)).expect("in range");
            (0..n).filter(|&v| d[v].is_some()).collect()
        })
        .collect();
    let mut used = VertexSet::new(n);
    used.insert(s1);
    let mut path = vec![s1];
    let mut checked = 0usize;
    let mut failure = None;
    fn walk(
        g: &Graph,
        s2: Vertex,
        aux: &[Vec<Vertex>],
        used: &mut VertexSet,
        path: &mut Vec<Vertex>,
        checked: &mut usize,
        failure: &mut Option<Vec<Vertex>>,
    ) {
        if failure.is_some() || *checked >= PATH_CAP {
            return;
        }
        let u = *path.last().expect("non-empty");
        if u == s2 {
            *checked += 1;
            if !aux.iter().any(|a| a.iter().all(|&v| !used.contains(v))) {
                *failure = Some(path.clone());
            }
            return;
        }
        for &v in g.neighbors(u) {
            if !used.contains(v) {
                used.insert(v);
                path.push(v);
                walk(g, s2, aux, used, path, checked, failure);
                path.pop();
                used.remove(v);
            }
        }
    }
    walk(g, s2, &aux, &mut used, &mut path, &mut checked, &mut failure);
    match failure {
        Some(p) => Check::Fails(format!("path {p:?} touches both auxiliary paths")),
        None => Check::Holds(format!("{checked} paths checked")),
    }
}
