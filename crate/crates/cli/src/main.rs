//! `kneser`: enumeration, exact chromatic numbers, table verification,
//! Tucker property suites and LP export for stable Kneser hypergraphs.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use stable_kneser::solver::Budget;
use stable_kneser::{Error, StabilityVariant};

use crate::output::Format;

#[derive(Parser, Debug)]
#[command(
    name = "kneser",
    version,
    about = "Stable Kneser hypergraphs at desk scale"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Worker threads for parallel searches (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(flatten)]
    budget: BudgetArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct BudgetArgs {
    /// Refuse exact solves above this many vertices.
    #[arg(
        long,
        env = "KNESER_MAX_VERTICES",
        default_value_t = 200,
        global = true
    )]
    max_vertices: usize,

    /// Stop a single solve after this many search nodes.
    #[arg(long, env = "KNESER_MAX_NODES", global = true)]
    max_nodes: Option<u64>,

    /// Stop a single solve after this many seconds.
    #[arg(long, env = "KNESER_TIME_LIMIT", global = true)]
    time_limit: Option<f64>,
}

impl BudgetArgs {
    fn budget(&self) -> Result<Budget, Error> {
        let time_limit = match self.time_limit {
            Some(t) if !(t.is_finite() && t > 0.0) => {
                return Err(Error::InvalidParameter(format!(
                    "time limit {t} must be positive"
                )))
            }
            Some(t) => Some(Duration::from_secs_f64(t)),
            None => None,
        };
        if self.max_vertices == 0 || self.max_nodes == Some(0) {
            return Err(Error::InvalidParameter("budgets must be positive".into()));
        }
        Ok(Budget {
            max_vertices: self.max_vertices,
            max_nodes: self.max_nodes,
            time_limit,
        })
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum VariantKind {
    Almost,
    Cyclic,
    Unrestricted,
}

#[derive(Args, Debug, Clone)]
struct InstanceArgs {
    /// Ground set size.
    #[arg(short = 'n', long)]
    n: usize,

    /// Subset size.
    #[arg(short = 'k', long)]
    k: usize,

    /// Stability gap.
    #[arg(short = 's', long, default_value_t = 1)]
    s: usize,

    #[arg(long, value_enum, default_value_t = VariantKind::Almost)]
    variant: VariantKind,
}

impl InstanceArgs {
    fn variant(&self) -> StabilityVariant {
        match self.variant {
            VariantKind::Almost => StabilityVariant::almost(self.s),
            VariantKind::Cyclic => StabilityVariant::cyclic(self.s),
            VariantKind::Unrestricted => StabilityVariant::Unrestricted,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the stable k-subsets in colex order.
    Enumerate {
        #[command(flatten)]
        instance: InstanceArgs,
    },
    /// Exact chromatic number of KG^r restricted to the stable sets.
    Chi {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Uniformity.
        #[arg(short = 'r', long, default_value_t = 2)]
        r: usize,
    },
    /// Compare exact chromatic numbers with the closed formula, row by row.
    VerifyTable {
        /// Row set: table (six cyclic rows plus the r = 2 sweep), schrijver,
        /// almost (prime almost 2-stable rows), all.
        #[arg(long, value_enum, default_value_t = commands::RowSet::Table)]
        rows: commands::RowSet,
        /// A single custom row `k,r,n_max,variant,s`, e.g. `2,3,9,cyclic,3`.
        #[arg(long, conflicts_with = "rows")]
        row: Option<String>,
    },
    /// Check the Z_p labeling properties (and the signed suite for p = 2).
    Tucker {
        #[arg(short = 'p', long)]
        p: usize,
        #[arg(short = 'n', long)]
        n: usize,
        #[arg(short = 'k', long)]
        k: usize,
        /// erdos, constant:C, random:C, under (random with one color too
        /// few), or all-2-colorings (p = 2 only).
        #[arg(long, default_value = "erdos")]
        coloring: String,
        /// Random chains per run when n is beyond exhaustive range.
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Write the t-coloring feasibility model in LP format.
    ExportIlp {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(short = 'r', long, default_value_t = 2)]
        r: usize,
        /// Number of colors.
        #[arg(short = 't', long)]
        t: usize,
        #[arg(long, value_enum, default_value_t = commands::Dialect::Lpsolve)]
        dialect: commands::Dialect,
        /// Model file; standard output when absent.
        #[arg(long)]
        model: Option<PathBuf>,
        /// Refuse models with more edges than this.
        #[arg(long, env = "KNESER_MAX_EDGES", default_value_t = 2_000_000)]
        max_edges: usize,
    },
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::InvalidParameter(_) | Error::ShapeMismatch(_) => 2,
        Error::BudgetExceeded { .. } => 3,
        Error::InvariantViolated(_) => 4,
        Error::Io(_) => 5,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if threads == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .ok();
    }
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn run(cli: &Cli) -> Result<u8, Error> {
    let budget = cli.budget.budget()?;
    let outcome = match &cli.command {
        Command::Enumerate { instance } => {
            commands::enumerate(instance.n, instance.k, instance.variant(), cli.format)?
        }
        Command::Chi { instance, r } => commands::chi(
            instance.n,
            instance.k,
            *r,
            instance.variant(),
            &budget,
            cli.format,
        )?,
        Command::VerifyTable { rows, row } => {
            let rows = match row {
                Some(spec) => vec![commands::parse_row(spec)?],
                None => rows.rows(),
            };
            commands::verify_table(&rows, &budget, cli.format)?
        }
        Command::Tucker {
            p,
            n,
            k,
            coloring,
            samples,
            seed,
        } => {
            let choice = commands::ColoringChoice::parse(coloring)?;
            commands::tucker(*p, *n, *k, &choice, *samples, *seed, cli.format)?
        }
        Command::ExportIlp {
            instance,
            r,
            t,
            dialect,
            model,
            max_edges,
        } => commands::export_ilp(
            instance.n,
            instance.k,
            *r,
            instance.variant(),
            *t,
            *dialect,
            model.as_deref(),
            *max_edges,
            cli.format,
        )?,
    };
    output::emit(&outcome.body, cli.output.as_deref())?;
    Ok(outcome.code)
}
