use std::path::PathBuf;

use anyhow::{anyhow, bail, Result};
use clap::Args;
use serde_json::json;
use tron_core::policies::{policy_by_name, POLICY_NAMES};
use tron_core::solver::Solver;
use tron_core::{initial_state, GameRules, Objective, SolveOptions, SolveResult, VertexSet};

use crate::io::{emit_json, read_graph};
use crate::{BudgetArgs, ObjectiveArg, OutputArgs, EXIT_BUDGET, EXIT_PASS};

#[derive(Args, Debug)]
pub struct SolveArgs {
    /// Graph JSON file ("-" for stdin).
    graph: PathBuf,
    /// Fixed start vertices for Alice and Bob.
    #[arg(long, num_args = 2, value_names = ["V1", "V2"])]
    given: Option<Vec<usize>>,
    /// Moves Alice makes before Bob places.
    #[arg(long, default_value_t = 0)]
    handicap: usize,
    /// Comma-separated vertices Bob may start on.
    #[arg(long, value_delimiter = ',')]
    whitelist: Option<Vec<usize>>,
    #[arg(long, value_enum, default_value = "ratio")]
    objective: ObjectiveArg,
    /// Let Bob follow a named scripted strategy while Alice plays optimally.
    #[arg(long)]
    vs_policy: Option<String>,
    /// Search without a transposition table (memory linear in the game length).
    #[arg(long)]
    linear_space: bool,
    #[command(flatten)]
    budget: BudgetArgs,
    #[command(flatten)]
    out: OutputArgs,
}

pub fn rules_from(
    n: usize,
    given: Option<&[usize]>,
    handicap: usize,
    whitelist: Option<&[usize]>,
    objective: ObjectiveArg,
) -> Result<GameRules> {
    let mut rules = match given {
        Some(&[a, b]) => GameRules::given(a, b),
        Some(_) => bail!("--given takes exactly two vertices"),
        None => GameRules::free(),
    };
    rules = rules.with_handicap(handicap).with_objective(match objective {
        ObjectiveArg::Ratio => Objective::Ratio,
        ObjectiveArg::Classification => Objective::Classification,
    });
    if let Some(w) = whitelist {
        if let Some(&v) = w.iter().find(|&&v| v >= n) {
            bail!("whitelist vertex {v} outside 0..{n}");
        }
        rules = rules.with_whitelist(VertexSet::from_iter_with_len(n, w.iter().copied()));
    }
    Ok(rules)
}

pub fn result_json(r: &SolveResult) -> serde_json::Value {
    json!({
        "classification": r.classification(),
        "alpha": r.outcome.alpha,
        "beta": r.outcome.beta,
        "ratio": r.outcome.ratio().to_string(),
        "principal_variation": r.principal_variation.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "nodes_expanded": r.nodes_expanded,
        "max_stack_depth": r.max_stack_depth,
        "budget_exhausted": r.budget_exhausted,
    })
}

pub fn run(a: &SolveArgs) -> Result<u8> {
    let g = read_graph(&a.graph)?;
    let rules = rules_from(
        g.vertex_count(),
        a.given.as_deref(),
        a.handicap,
        a.whitelist.as_deref(),
        a.objective,
    )?;
    rules.validate(&g)?;
    let mut options = SolveOptions::budget(a.budget.resolve(None));
    if a.linear_space {
        options = options.linear_space();
    }
    let root = initial_state(&g, &rules)?;
    let policy = match &a.vs_policy {
        Some(name) => Some(policy_by_name(name, &g).ok_or_else(|| {
            anyhow!("unknown policy {name:?}; known: {}", POLICY_NAMES.join(", "))
        })??),
        None => None,
    };
    let mut solver = Solver::new(&g, &rules, options);
    if let Some((p, side)) = &policy {
        solver = solver.with_policy(p.as_ref(), *side);
    }
    let r = solver.run(&root)?;
    let mut report = result_json(&r);
    if let Some((p, _)) = &policy {
        report["policy"] = json!(p.name());
    }
    emit_json(&a.out, &report)?;
    Ok(if r.budget_exhausted { EXIT_BUDGET } else { EXIT_PASS })
}
