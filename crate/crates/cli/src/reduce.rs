use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use tron_core::reductions::{build_f, build_g_phi, build_g_phi_prime, build_h, build_h_prime};
use tron_core::{parse_qdimacs, ReductionOutput};

use crate::io::{emit, emit_json, read_graph, read_text};
use crate::{OutputArgs, EXIT_PASS};

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum StageArg {
    GPhi,
    GPhiPrime,
    H,
    HPrime,
    F,
}

#[derive(Args, Debug)]
pub struct ReduceArgs {
    #[arg(value_enum)]
    stage: StageArg,
    /// QDIMACS formula for the g-phi stages ("-" for stdin).
    formula: Option<PathBuf>,
    /// Graph JSON for the h, h-prime and f stages.
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Alice's start in the input graph.
    #[arg(long)]
    v1: Option<usize>,
    /// Bob's start in the input graph.
    #[arg(long)]
    v2: Option<usize>,
    #[command(flatten)]
    out: OutputArgs,
}

fn build(a: &ReduceArgs) -> Result<ReductionOutput> {
    match a.stage {
        StageArg::GPhi | StageArg::GPhiPrime => {
            let Some(path) = &a.formula else {
                bail!("this stage needs a QDIMACS formula file");
            };
            let phi = parse_qdimacs(&read_text(path)?)
                .with_context(|| format!("parsing {}", path.display()))?;
            Ok(if a.stage == StageArg::GPhi {
                build_g_phi(&phi)?
            } else {
                build_g_phi_prime(&phi)?
            })
        }
        StageArg::H | StageArg::HPrime | StageArg::F => {
            let (Some(path), Some(v1), Some(v2)) = (&a.graph, a.v1, a.v2) else {
                bail!("this stage needs --graph, --v1 and --v2");
            };
            let g = read_graph(path)?;
            Ok(match a.stage {
                StageArg::H => build_h(&g, v1, v2)?,
                StageArg::HPrime => build_h_prime(&g, v1, v2)?,
                _ => build_f(&g, v1, v2)?,
            })
        }
    }
}

pub fn run(a: &ReduceArgs) -> Result<u8> {
    let r = build(a)?;
    if a.out.dot {
        emit(&a.out, &r.graph.to_dot())?;
    } else {
        emit_json(&a.out, &r.to_json())?;
    }
    Ok(EXIT_PASS)
}
