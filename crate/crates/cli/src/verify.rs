use std::fs;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, ValueEnum};
use serde_json::{json, Value};
use tron_core::analysis::{
    check_hamilton_path, connectivity_by_cut_enumeration, disconnects, verify_deletion_lemma,
    verify_supervertex_lemma, verify_tree_lemma, vertex_connectivity, LemmaCheck,
};
use tron_core::constructions::{double_tree, double_tree_hamilton};
use tron_core::enumerate::{connected_graphs, graphs, labeled_graphs, trees};
use tron_core::qbf::sample_formulas;
use tron_core::reductions::{build_g_phi, build_g_phi_prime, check_overhead_properties, Check};
use tron_core::{alice_wins, qbf_eval, AnalysisError, GameRules, Graph, Objective, VertexSet};

use crate::io::emit_json;
use crate::{BudgetArgs, OutputArgs, EXIT_BUDGET, EXIT_FAIL, EXIT_PASS};

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Suite {
    Trees,
    Lemmas,
    DoubleTree,
    Connectivity,
    QbfEquivalence,
    HProperties,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    suite: Suite,
    /// Largest graph size to enumerate (trees 9, lemmas 7, connectivity 7, h-properties 3).
    #[arg(long)]
    max_n: Option<usize>,
    /// Largest degree for double-tree.
    #[arg(long, default_value_t = 3)]
    max_d: usize,
    /// Largest height for double-tree.
    #[arg(long, default_value_t = 3)]
    max_h: usize,
    /// Largest variable count for qbf-equivalence.
    #[arg(long, default_value_t = 3)]
    n: usize,
    /// Largest clause count for qbf-equivalence.
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// Formulas sampled per (variables, clauses) size.
    #[arg(long, default_value_t = 20)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Use the undirected formula graph in qbf-equivalence.
    #[arg(long)]
    undirected: bool,
    /// File that receives failing instances.
    #[arg(long, default_value = "tron-counterexample.json")]
    dump: PathBuf,
    #[command(flatten)]
    budget: BudgetArgs,
}

const SUITE_BUDGET: u64 = 10_000_000;

#[derive(Default)]
struct Tally {
    checked: usize,
    skipped: usize,
    exhausted: Vec<Value>,
    failures: Vec<Value>,
}

impl Tally {
    fn record(&mut self, ok: bool, case: impl FnOnce() -> Value) {
        self.checked += 1;
        if !ok {
            self.failures.push(case());
        }
    }
}

fn graph_value(g: &Graph) -> Value {
    serde_json::to_value(g.to_json()).expect("graph serializes")
}

fn trees_suite(max_n: usize, budget: Option<u64>, t: &mut Tally) -> Result<()> {
    for n in 2..=max_n {
        for tree in trees(n) {
            match verify_tree_lemma(&tree, budget) {
                Ok(r) => t.record(r.holds(), || json!({ "graph": graph_value(&tree), "report": r })),
                Err(AnalysisError::BudgetExhausted) => t.exhausted.push(graph_value(&tree)),
                Err(e) => return Err(e.into()),
            }
        }
    }
    Ok(())
}

fn lemmas_suite(max_n: usize, budget: Option<u64>, t: &mut Tally) -> Result<()> {
    for n in 2..=max_n {
        for g in connected_graphs(n) {
            for (name, check) in [
                ("super-vertex", verify_supervertex_lemma(&g, budget)),
                ("deletion", verify_deletion_lemma(&g, budget)),
            ] {
                match check {
                    Ok(LemmaCheck::Skipped { .. }) => t.skipped += 1,
                    Ok(c) => t.record(!c.violated(), || {
                        json!({ "lemma": name, "graph": graph_value(&g), "check": c })
                    }),
                    Err(AnalysisError::BudgetExhausted) => {
                        t.exhausted.push(json!({ "lemma": name, "graph": graph_value(&g) }))
                    }
                    Err(e) => return Err(e.into()),
                }
            }
        }
    }
    Ok(())
}

fn double_tree_suite(max_d: usize, max_h: usize, t: &mut Tally) -> Result<()> {
    for d in 2..=max_d {
        for h in 2..=max_h {
            let (g, _) = double_tree(d, h)?;
            let seq = double_tree_hamilton(d, h)?;
            let res = check_hamilton_path(&g, &seq);
            t.record(res.is_ok(), || {
                json!({ "d": d, "h": h, "check": "hamilton", "violation": res.err(), "sequence": seq })
            });
        }
        let (g, _) = double_tree(d, 2)?;
        let kappa = vertex_connectivity(&g)?.kappa;
        let brute = connectivity_by_cut_enumeration(&g);
        t.record(kappa == d && brute == d, || {
            json!({ "d": d, "h": 2, "check": "connectivity", "kappa": kappa, "brute_force": brute })
        });
    }
    Ok(())
}

fn connectivity_suite(max_n: usize, t: &mut Tally) -> Result<()> {
    for n in 1..=max_n {
        for g in graphs(n) {
            let r = vertex_connectivity(&g)?;
            let brute = connectivity_by_cut_enumeration(&g);
            let cut_ok = r.witness_cut.as_ref().map_or(true, |c| {
                c.len() == r.kappa && disconnects(&g, &VertexSet::from_iter_with_len(n, c.iter().copied()))
            });
            let paths_ok = r.critical_pair.is_none() || r.menger_paths.len() == r.kappa;
            t.record(r.kappa == brute && cut_ok && paths_ok, || {
                json!({ "graph": graph_value(&g), "report": r, "brute_force": brute })
            });
        }
    }
    Ok(())
}

fn qbf_suite(a: &VerifyArgs, budget: Option<u64>, t: &mut Tally) -> Result<()> {
    for n in 1..=a.n {
        for k in 1..=a.k {
            for phi in sample_formulas(n, k, a.count, a.seed) {
                let red = if a.undirected {
                    build_g_phi_prime(&phi)?
                } else {
                    build_g_phi(&phi)?
                };
                let (Some(v1), Some(v2)) = (red.alice_start, red.bob_start) else {
                    unreachable!("formula graphs fix both starts");
                };
                let rules = GameRules::given(v1, v2).with_objective(Objective::Classification);
                let want = qbf_eval(&phi);
                let case = || json!({ "formula": phi.to_qdimacs(), "qbf_true": want, "reduction": red.to_json() });
                match alice_wins(&red.graph, &rules, budget)? {
                    Some(got) => t.record(got == want, || {
                        let mut c = case();
                        c["alice_wins"] = json!(got);
                        c
                    }),
                    None => t.exhausted.push(case()),
                }
            }
        }
    }
    Ok(())
}

fn h_suite(max_n: usize, budget: Option<u64>, t: &mut Tally) -> Result<()> {
    for n in 2..=max_n {
        for g in labeled_graphs(n).into_iter().filter(Graph::is_connected) {
            for v1 in 0..n {
                for v2 in (0..n).filter(|&v| v != v1) {
                    let p = check_overhead_properties(&g, v1, v2, budget)?;
                    let case = || json!({ "graph": graph_value(&g), "v1": v1, "v2": v2, "properties": p });
                    if p.all().iter().any(|(_, c)| matches!(c, Check::Fails(_))) {
                        t.record(false, case);
                    } else if p.all_hold() {
                        t.record(true, case);
                    } else {
                        t.exhausted.push(case());
                    }
                }
            }
        }
    }
    Ok(())
}

pub fn run(a: &VerifyArgs) -> Result<u8> {
    let budget = a.budget.resolve(Some(SUITE_BUDGET));
    let mut t = Tally::default();
    let (name, params) = match a.suite {
        Suite::Trees => {
            let m = a.max_n.unwrap_or(9);
            trees_suite(m, budget, &mut t)?;
            ("trees", json!({ "max_n": m }))
        }
        Suite::Lemmas => {
            let m = a.max_n.unwrap_or(7);
            lemmas_suite(m, budget, &mut t)?;
            ("lemmas", json!({ "max_n": m }))
        }
        Suite::DoubleTree => {
            double_tree_suite(a.max_d, a.max_h, &mut t)?;
            ("double-tree", json!({ "max_d": a.max_d, "max_h": a.max_h }))
        }
        Suite::Connectivity => {
            let m = a.max_n.unwrap_or(7);
            connectivity_suite(m, &mut t)?;
            ("connectivity", json!({ "max_n": m }))
        }
        Suite::QbfEquivalence => {
            qbf_suite(a, budget, &mut t)?;
            (
                "qbf-equivalence",
                json!({ "n": a.n, "k": a.k, "count": a.count, "seed": a.seed, "undirected": a.undirected }),
            )
        }
        Suite::HProperties => {
            let m = a.max_n.unwrap_or(3);
            h_suite(m, budget, &mut t)?;
            ("h-properties", json!({ "max_n": m }))
        }
    };

    let (status, code) = if !t.failures.is_empty() {
        ("fail", EXIT_FAIL)
    } else if !t.exhausted.is_empty() {
        ("exhausted", EXIT_BUDGET)
    } else {
        ("pass", EXIT_PASS)
    };
    let mut report = json!({
        "suite": name,
        "status": status,
        "params": params,
        "budget": budget,
        "checked": t.checked,
        "failed": t.failures.len(),
        "skipped": t.skipped,
        "exhausted": t.exhausted.len(),
        "counterexample_file": Value::Null,
    });
    if !t.failures.is_empty() {
        let dump = json!({ "suite": name, "params": params, "failures": t.failures });
        fs::write(&a.dump, serde_json::to_string_pretty(&dump)?)
            .with_context(|| format!("writing {}", a.dump.display()))?;
        report["counterexample_file"] = json!(a.dump.display().to_string());
    }
    let stdout = OutputArgs { dot: false, out: None };
    emit_json(&stdout, &report)?;
    Ok(code)
}
