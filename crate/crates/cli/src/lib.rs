//! `fdx`: check, solve, generate, reduce and welfare commands over JSON
//! documents. See [`doc`] for the file formats.
//!
//! Exit codes: 0 fair / exists / done, 1 unfair / no fair allocation,
//! 2 usage or input error, 3 search budget exceeded.

pub mod commands;
pub mod doc;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fdx_core::solvers::Engine;
use fdx_core::FairnessNotion;

pub const EXIT_FAIR: i32 = 0;
pub const EXIT_UNFAIR: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "fdx", version, about = "Fair division of indivisible items with externalities")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct BudgetArg {
    /// Largest search space (allocations or bundle-type guesses) to explore.
    #[arg(long, env = "FDX_BUDGET", default_value_t = 10_000_000)]
    pub budget: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check an allocation against a fairness notion.
    Check {
        instance: PathBuf,
        allocation: PathBuf,
        #[arg(long, value_parser = parse_notion)]
        notion: FairnessNotion,
        /// Write the report here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Decide whether a fair allocation exists.
    Solve {
        instance: PathBuf,
        #[arg(long, value_parser = parse_notion)]
        notion: FairnessNotion,
        #[arg(long, value_parser = parse_engine, default_value = "auto")]
        engine: Engine,
        #[command(flatten)]
        budget: BudgetArg,
        /// Also write the witness allocation document here.
        #[arg(long)]
        witness: Option<PathBuf>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Build an instance from a combinatorial seed.
    Generate {
        #[command(subcommand)]
        kind: GenerateKind,
    },
    /// Transform an instance or correlated specification.
    Reduce {
        kind: ReduceKind,
        input: PathBuf,
        /// For `correlated`: emit the full externality instance instead of the
        /// plain one.
        #[arg(long)]
        expand: bool,
        #[arg(long)]
        output: PathBuf,
    },
    /// Report or maximize welfare.
    Welfare {
        instance: PathBuf,
        #[arg(required_unless_present = "maximize")]
        allocation: Option<PathBuf>,
        #[arg(long, conflicts_with = "allocation")]
        maximize: Option<Objective>,
        #[command(flatten)]
        budget: BudgetArg,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct GenerateOutput {
    /// Instance document path.
    #[arg(long)]
    pub output: PathBuf,
    /// Witness allocation path, used when a certificate is given.
    #[arg(long)]
    pub witness: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum GenerateKind {
    /// Three-agent EFX instance from an even-length number sequence.
    Partition {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        values: Vec<i64>,
        /// 1-based positions of one half of an equal split.
        #[arg(long, value_delimiter = ',')]
        subset: Option<Vec<usize>>,
        #[command(flatten)]
        out: GenerateOutput,
    },
    /// EFX instance from a cubic graph and a cut size.
    Bisection {
        /// One of k4, prism, k33, cube, wagner.
        #[arg(long, group = "source")]
        graph: Option<String>,
        /// A `graph` document.
        #[arg(long, group = "source")]
        graph_file: Option<PathBuf>,
        /// Random cubic graph on this many vertices.
        #[arg(long, group = "source")]
        random_vertices: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        cut: usize,
        /// 1-based vertices of one side of a bisection cutting `cut` edges.
        #[arg(long, value_delimiter = ',')]
        side: Option<Vec<usize>>,
        #[command(flatten)]
        out: GenerateOutput,
    },
    /// Binary EF instance from a multicolored graph.
    Clique {
        #[arg(long)]
        colors: usize,
        #[arg(long)]
        class_size: usize,
        /// Edges as `u-v`, vertices numbered from 1 color by color.
        #[arg(long, value_delimiter = ',', value_parser = parse_edge)]
        edges: Vec<(usize, usize)>,
        /// 1-based vertices of a multicolored clique.
        #[arg(long, value_delimiter = ',')]
        clique: Option<Vec<usize>>,
        #[command(flatten)]
        out: GenerateOutput,
    },
    /// Uniformly random values from a finite set.
    Random {
        #[arg(long)]
        agents: usize,
        #[arg(long)]
        items: usize,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "0,1")]
        values: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: GenerateOutput,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReduceKind {
    /// Shift every value so the smallest holder value per item is 0.
    Normalize,
    /// Map a two-valued instance to 0/1 values.
    Binary,
    /// Collapse a correlated, team or network specification.
    Correlated,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Objective {
    Utilitarian,
    Nash,
}

fn parse_notion(s: &str) -> Result<FairnessNotion, String> {
    s.parse().map_err(|e: fdx_core::Error| e.to_string())
}

fn parse_engine(s: &str) -> Result<Engine, String> {
    s.parse().map_err(|e: fdx_core::Error| e.to_string())
}

fn parse_edge(s: &str) -> Result<(usize, usize), String> {
    let (u, v) = s.split_once('-').ok_or_else(|| format!("edge `{s}` is not of the form u-v"))?;
    let p = |x: &str| x.trim().parse::<usize>().map_err(|e| format!("edge `{s}`: {e}"));
    Ok((p(u)?, p(v)?))
}

/// Parse `args` (program name first), run the command and return the exit
/// code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_FAIR };
        }
    };
    let echo = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    commands::dispatch(cli.command, echo)
}
