//! Command-line front end for essence-core.

mod commands;
mod input;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use essence_core::capsearch::SearchMode;
use essence_core::diagram::Color;

const EXIT_CODES: &str = "\
Exit codes:
  0  success
  2  invalid command line
  3  unreadable input or PD parse error (with line and column)
  4  the input does not meet the command's hypotheses
  5  cap search node budget exceeded; the answer is undecided
  6  integrity failure: two certified bounds contradict each other
  7  selftest: at least one check failed";

#[derive(Parser)]
#[command(name = "essence-kit", version, about = "Spanning-surface invariants of link diagrams")]
#[command(after_help = EXIT_CODES)]
struct Cli {
    /// Output format; JSON is the stable machine interface.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads for cap searches and selftest (0 for the default).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Search nodes allowed per cap search.
    #[arg(long, global = true, default_value_t = 50_000_000)]
    budget: u64,
    /// Seed for the randomized selftest checks.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// Every input is a PD file, `-` for stdin, or a fixture name (see `fixtures`).
/// State words list one letter per crossing in file order; `allA`, `allB`
/// and `seifert` are also accepted.
#[derive(Subcommand)]
enum Command {
    /// Structural flags: alternating, reduced, prime, genus.
    Classify { input: String },
    /// Tait graphs, or the state graph of `--state`.
    Graphs {
        input: String,
        #[arg(long)]
        color: Option<Color>,
        #[arg(long, conflicts_with = "color")]
        state: Option<String>,
    },
    /// Goeritz form of a checkerboard surface and its minimum.
    Goeritz {
        input: String,
        #[arg(long)]
        color: Option<Color>,
    },
    /// Essence bounds with certificates.
    Essence {
        input: String,
        #[arg(long)]
        color: Option<Color>,
        #[arg(long, conflicts_with = "color")]
        state: Option<String>,
        /// Also run geometric and algebraic cap searches to this height and
        /// merge their bounds (checkerboard surfaces only).
        #[arg(long, conflicts_with = "state")]
        cap_height: Option<u32>,
    },
    /// Height-bounded search for compressing caps of a checkerboard surface.
    Capsearch {
        input: String,
        #[arg(long)]
        color: Option<Color>,
        #[arg(long, default_value_t = 2)]
        height: u32,
        #[arg(long, default_value = "geometric")]
        mode: SearchMode,
        /// Link touches allowed per subdisk (default 1 in boundary mode, else 0).
        #[arg(long)]
        touches: Option<usize>,
        /// Largest number of cap chords on a subdisk of positive height.
        #[arg(long, default_value_t = 6)]
        max_chords: usize,
        /// Print every subdisk type by height.
        #[arg(long)]
        dump_strata: bool,
    },
    /// Plumbing decomposition of a state surface, or the twisted hierarchy
    /// of a checkerboard surface.
    Deplumb {
        input: String,
        #[arg(long, required_unless_present = "twisted")]
        state: Option<String>,
        #[arg(long, conflicts_with = "state")]
        twisted: bool,
        /// Split while the least cap complexity is below this (`inf` for always).
        #[arg(long, default_value = "inf", requires = "twisted")]
        threshold: String,
        #[arg(long, requires = "twisted")]
        color: Option<Color>,
    },
    /// Runs the property checks and exits 7 if any fails.
    Selftest {
        /// Run only these check ids.
        #[arg(long)]
        check: Vec<u32>,
    },
    /// Lists the fixture names usable as inputs.
    Fixtures,
}

/// A failure class; each maps to one exit code.
#[derive(Debug)]
pub enum Failure {
    Input(String),
    Hypotheses(String),
    Budget(String),
    Integrity(String),
    Selftest(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 3,
            Failure::Hypotheses(_) => 4,
            Failure::Budget(_) => 5,
            Failure::Integrity(_) => 6,
            Failure::Selftest(_) => 7,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m)
            | Failure::Hypotheses(m)
            | Failure::Budget(m)
            | Failure::Integrity(m)
            | Failure::Selftest(m) => m,
        }
    }
}

pub struct Global {
    pub format: Format,
    pub threads: usize,
    pub budget: u64,
    pub seed: u64,
}

fn run(cli: Cli) -> Result<String, Failure> {
    let g = Global {
        format: cli.format,
        threads: cli.threads,
        budget: cli.budget,
        seed: cli.seed,
    };
    match cli.command {
        Command::Classify { input } => commands::classify(&g, &input),
        Command::Graphs {
            input,
            color,
            state,
        } => commands::graphs(&g, &input, color, state.as_deref()),
        Command::Goeritz { input, color } => commands::goeritz(&g, &input, color),
        Command::Essence {
            input,
            color,
            state,
            cap_height,
        } => commands::essence(&g, &input, color, state.as_deref(), cap_height),
        Command::Capsearch {
            input,
            color,
            height,
            mode,
            touches,
            max_chords,
            dump_strata,
        } => commands::capsearch(
            &g,
            &input,
            color,
            commands::SearchArgs {
                height,
                mode,
                touches,
                max_chords,
                dump_strata,
            },
        ),
        Command::Deplumb {
            input,
            state,
            twisted,
            threshold,
            color,
        } => {
            if twisted {
                commands::deplumb_twisted(&g, &input, color, &threshold)
            } else {
                let state = state.expect("clap requires --state without --twisted");
                commands::deplumb_state(&g, &input, &state)
            }
        }
        Command::Selftest { check } => commands::selftest(&g, &check),
        Command::Fixtures => Ok(commands::fixtures(&g)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Selftest(out)) => {
            print!("{out}");
            ExitCode::from(7)
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
