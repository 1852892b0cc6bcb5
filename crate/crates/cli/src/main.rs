mod commands;
mod output;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use subgrowth::cover::DEFAULT_CELL_BUDGET;
use subgrowth::Prime;

use commands::{AsymptoteArgs, AsymptoteMode, CliError, Context};
use output::Format;

/// Mod-p homology of abelian covers, cocycle constructions and subgroup
/// growth bounds for finitely presented groups.
#[derive(Parser)]
#[command(name = "subgrowth", version)]
struct Cli {
    /// Prime for coefficients and covers.
    #[arg(long, global = true, default_value_t = 2)]
    p: u64,
    /// Largest cover, in cells, that may be built.
    #[arg(long, global = true, default_value_t = DEFAULT_CELL_BUDGET)]
    budget: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Epimorphism onto (Z/p)^n: `full`, or rows such as `1 0; 0 1; 0 0`.
    #[arg(long, global = true)]
    epi: Option<String>,
    /// File of `generator = word` lines eliminating generators.
    #[arg(long, global = true)]
    witnesses: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Betti numbers, deficiency and b2/b1 conditions of a presentation.
    Analyze { file: PathBuf },
    /// Compare cover b1 with the lower bound at every level.
    Verify {
        file: PathBuf,
        /// Check every quotient (one per kernel) that fits the budget.
        #[arg(long)]
        sweep: bool,
    },
    /// Build the cover and its Reidemeister–Schreier presentation.
    Cover {
        file: PathBuf,
        /// Write the rewritten presentation to this file.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Build the cocycle spaces level by level and check them.
    Cochains {
        file: PathBuf,
        #[arg(long)]
        level: Option<usize>,
    },
    /// Evaluate the homology lower bound.
    Bound {
        #[arg(long)]
        b1: u64,
        #[arg(long)]
        b2: u64,
        #[arg(long)]
        n: u64,
        #[arg(long, conflicts_with = "sweep")]
        level: Option<u64>,
        /// Every level 0..=n (the default when no level is given).
        #[arg(long)]
        sweep: bool,
    },
    /// Iterate the derived p-series.
    Series {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        steps: usize,
    },
    /// Count subgroups of small index and compare with floors.
    Census {
        file: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_index: usize,
        /// Series steps used to derive subnormal floors.
        #[arg(long, default_value_t = 2)]
        series_steps: usize,
        /// Base of the `k^{n log n}` ceiling; defaults to 2^|X|.
        #[arg(long)]
        k: Option<u64>,
    },
    /// Growth functions, the derived 2-series recurrence and related checks.
    Asymptote {
        #[arg(long, value_enum)]
        mode: AsymptoteMode,
        #[arg(long)]
        n: Option<String>,
        #[arg(long, default_value_t = 2)]
        k: u64,
        #[arg(long, default_value_t = 20)]
        x1: u64,
        #[arg(long, default_value_t = 0)]
        cap: i64,
        /// Iterations after the seed.
        #[arg(long, default_value_t = 2)]
        steps: usize,
        #[arg(long, default_value = "79/100")]
        lambda: String,
        #[arg(long, default_value_t = 0)]
        b1: u64,
        #[arg(long, default_value_t = 1)]
        m: u64,
        #[arg(long, value_delimiter = ',')]
        x: Vec<u64>,
    },
}

fn run(cli: Cli) -> Result<output::Report, CliError> {
    let p = Prime::new(cli.p)?;
    if cli.budget == 0 {
        return Err(CliError::Input("budget must be at least 1".into()));
    }
    let ctx = Context { p, budget: cli.budget, epi: cli.epi, witnesses: cli.witnesses };
    match cli.command {
        Command::Analyze { file } => commands::analyze(&ctx, &file),
        Command::Verify { file, sweep } => commands::verify(&ctx, &file, sweep),
        Command::Cover { file, emit } => commands::cover(&ctx, &file, emit.as_deref()),
        Command::Cochains { file, level } => commands::cochains(&ctx, &file, level),
        Command::Bound { b1, b2, n, level, sweep: _ } => commands::bound(&ctx, b1, b2, n, level),
        Command::Series { file, steps } => commands::series_cmd(&ctx, &file, steps),
        Command::Census { file, max_index, series_steps, k } => commands::census_cmd(&ctx, &file, max_index, series_steps, k),
        Command::Asymptote { mode, n, k, x1, cap, steps, lambda, b1, m, x } => {
            commands::asymptote(&ctx, &AsymptoteArgs { mode, n, k, x1, cap, steps, lambda, b1, m, x })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    match run(cli) {
        Ok(report) => {
            let stdout = io::stdout();
            let mut out = stdout.lock();
            match report.render(format, &mut out).and_then(|_| out.flush()) {
                Err(e) if e.kind() == io::ErrorKind::BrokenPipe => return ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
                Ok(()) => {}
            }
            if report.violations > 0 {
                eprintln!("error: {} invariant violation(s)", report.violations);
                return ExitCode::from(4);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
