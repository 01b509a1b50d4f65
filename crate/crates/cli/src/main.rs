use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod gen;
mod io;
mod reduce;
mod solve;
mod verify;

/// Exit codes. Clap itself uses 2 for malformed command lines, which shares
/// the slot with unreadable or invalid inputs.
pub const EXIT_PASS: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_BUDGET: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "tron", version, about = "Solve, build and check instances of the graph game Tron")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Emit a construction as graph JSON (or DOT).
    Gen(gen::GenArgs),
    /// Solve a game on a graph file and print the result as JSON.
    Solve(solve::SolveArgs),
    /// Compile a formula or a graph through one reduction stage.
    Reduce(reduce::ReduceArgs),
    /// Run a verification suite and print a JSON report.
    Verify(verify::VerifyArgs),
}

/// Where output goes and in which format.
#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// Emit Graphviz DOT instead of JSON.
    #[arg(long, global = true)]
    pub dot: bool,
    /// Write to this file instead of stdout.
    #[arg(long, short, global = true)]
    pub out: Option<PathBuf>,
}

/// Search limit shared by the solving subcommands.
#[derive(Args, Debug, Clone)]
pub struct BudgetArgs {
    /// Node budget per solve; 0 means unlimited. Falls back to TRON_NODE_BUDGET.
    #[arg(long, env = "TRON_NODE_BUDGET")]
    pub budget: Option<u64>,
}

impl BudgetArgs {
    pub fn resolve(&self, default: Option<u64>) -> Option<u64> {
        match self.budget {
            Some(0) => None,
            Some(b) => Some(b),
            None => default,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ObjectiveArg {
    Ratio,
    Classification,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => gen::run(&a),
        Command::Solve(a) => solve::run(&a),
        Command::Reduce(a) => reduce::run(&a),
        Command::Verify(a) => verify::run(&a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
