use std::path::PathBuf;

use anyhow::{anyhow, Result};
use clap::{Args, Subcommand, ValueEnum};
use tron_core::constructions::{self, PlanarSide};
use tron_core::Graph;

use crate::io::{emit_graph, read_graph};
use crate::{OutputArgs, EXIT_PASS};

#[derive(Args, Debug)]
pub struct GenArgs {
    #[command(subcommand)]
    what: Construction,
    #[command(flatten)]
    out: OutputArgs,
}

/// Overhead graph for the visage family: two disjoint paths, or a graph file.
#[derive(Args, Debug, Clone)]
struct OverheadArgs {
    /// Vertices per overhead path.
    #[arg(long, default_value_t = 4)]
    overhead_m: usize,
    /// Use this graph file as the overhead graph instead.
    #[arg(long, conflicts_with = "overhead_m")]
    overhead: Option<PathBuf>,
}

impl OverheadArgs {
    fn graph(&self) -> Result<Graph> {
        match &self.overhead {
            Some(p) => read_graph(p),
            None => Ok(constructions::two_paths(self.overhead_m)?),
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Side {
    Bob,
    Alice,
}

#[derive(Subcommand, Debug)]
enum Construction {
    /// Path on n vertices.
    Path {
        #[arg(long)]
        n: usize,
    },
    /// Cycle on n vertices.
    Cycle {
        #[arg(long)]
        n: usize,
    },
    /// Complete graph on n vertices.
    Complete {
        #[arg(long)]
        n: usize,
    },
    /// Star with the given number of leaves.
    Star {
        #[arg(long)]
        leaves: usize,
    },
    /// Two disjoint paths of m vertices each.
    TwoPaths {
        #[arg(long)]
        m: usize,
    },
    /// A graph file plus one vertex adjacent to everything.
    SuperVertex {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Overhead graph, two bottleneck vertices and a cycle of 4l vertices.
    Visage {
        #[arg(long)]
        l: usize,
        #[command(flatten)]
        overhead: OverheadArgs,
    },
    /// Visage with the cycle replaced by a long path.
    PlanarVisage {
        #[arg(long, value_enum, default_value = "bob")]
        side: Side,
        /// Vertices on the long path.
        #[arg(long)]
        len: usize,
        /// Distance between attachments (4 or 7).
        #[arg(long, default_value_t = 4)]
        spacing: usize,
        #[command(flatten)]
        overhead: OverheadArgs,
    },
    /// Two complete d-ary trees of height h glued leaf to leaf.
    DoubleTree {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        h: usize,
    },
    /// k-connected visage on a necklace of double-trees.
    KVisage {
        #[arg(long)]
        k: usize,
        /// Double-tree height; defaults to the smallest that fits the attachments.
        #[arg(long)]
        h: Option<usize>,
        /// Vertices per overhead path.
        #[arg(long, default_value_t = 4)]
        path_len: usize,
    },
}

pub fn run(a: &GenArgs) -> Result<u8> {
    let g = match &a.what {
        Construction::Path { n } => constructions::path(*n),
        Construction::Cycle { n } => constructions::cycle(*n)?,
        Construction::Complete { n } => constructions::complete(*n),
        Construction::Star { leaves } => constructions::star(*leaves),
        Construction::TwoPaths { m } => constructions::two_paths(*m)?,
        Construction::SuperVertex { graph } => constructions::add_super_vertex(&read_graph(graph)?, None)?,
        Construction::Visage { l, overhead } => constructions::visage(*l, &overhead.graph()?)?.0,
        Construction::PlanarVisage {
            side,
            len,
            spacing,
            overhead,
        } => {
            let side = match side {
                Side::Bob => PlanarSide::Bob,
                Side::Alice => PlanarSide::Alice,
            };
            constructions::planar_visage(side, *len, *spacing, &overhead.graph()?)?.0
        }
        Construction::DoubleTree { d, h } => constructions::double_tree(*d, *h)?.0,
        Construction::KVisage { k, h, path_len } => {
            let h = match h {
                Some(h) => *h,
                None => {
                    constructions::minimal_afar_height(*k, *k, 2 * k, 12)
                        .ok_or_else(|| anyhow!("no double-tree height up to 12 fits k = {k}"))?
                        .0
                }
            };
            constructions::k_connected_visage(*k, h, *path_len)?.0
        }
    };
    emit_graph(&a.out, &g)?;
    Ok(EXIT_PASS)
}
