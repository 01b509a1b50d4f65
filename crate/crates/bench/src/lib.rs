//! Fixed instances shared by the benchmarks.

use tron_core::constructions::{complete, cycle, double_tree, path, two_paths, visage};
use tron_core::qbf::sample_formulas;
use tron_core::reductions::build_g_phi;
use tron_core::{GameRules, Graph, Objective};

pub struct Instance {
    pub name: String,
    pub graph: Graph,
    pub rules: GameRules,
}

fn inst(name: impl Into<String>, graph: Graph, rules: GameRules) -> Instance {
    Instance { name: name.into(), graph, rules }
}

/// Small free-start games, cheap enough to solve many times per sample.
pub fn solver_instances() -> Vec<Instance> {
    let ratio = GameRules::free().with_objective(Objective::Ratio);
    let class = GameRules::free().with_objective(Objective::Classification);
    vec![
        inst("complete_7", complete(7), ratio.clone()),
        inst("cycle_14_handicap_2", cycle(14).unwrap(), ratio.clone().with_handicap(2)),
        inst("path_24_handicap_2", path(24), ratio.clone().with_handicap(2)),
        inst("two_paths_10", two_paths(10).unwrap(), ratio),
        inst("double_tree_2_2", double_tree(2, 2).unwrap().0, class.clone()),
        inst("visage_2", visage(2, &two_paths(4).unwrap()).unwrap().0, class),
    ]
}

/// Directed formula graphs for a fixed seed.
pub fn formula_instances() -> Vec<Instance> {
    sample_formulas(2, 2, 3, 11)
        .iter()
        .enumerate()
        .map(|(i, phi)| {
            let red = build_g_phi(phi).unwrap();
            let rules = GameRules::given(red.alice_start.unwrap(), red.bob_start.unwrap())
                .with_objective(Objective::Classification);
            inst(format!("g_phi_{i}"), red.graph, rules)
        })
        .collect()
}
