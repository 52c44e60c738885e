//! `strat`: command-line front end for filtered simplicial sets over finite
//! posets.
//!
//! Exit codes: 0 pass, 1 verdict fail, 2 input error, 3 budget exceeded.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use strat_core::gen::DEFAULT_SEED;

use commands::{Globals, H217};
use report::{error_code, Input, Outcome};

#[derive(Parser)]
#[command(
    name = "strat",
    version,
    about = "Filtered simplicial sets, stratified π₀ and lifting problems over finite posets"
)]
struct Cli {
    /// Print the full report as JSON
    #[arg(long, global = true)]
    json: bool,

    /// Print a DOT digraph where the command has one
    #[arg(long, global = true)]
    dot: bool,

    /// Seed for randomized suites
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Search budget (terms or search nodes); for `rlp`, squares per cell
    #[arg(long, global = true)]
    budget: Option<usize>,

    /// Zigzag length bound for `almost-filtered` (default: complete)
    #[arg(long, global = true)]
    bound: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Chain census of a poset
    Nerve { poset: PathBuf },
    /// Stratified π₀ of a filtered simplicial set
    Spi0 {
        fss: PathBuf,
        /// Only this chain, as `a<b<c`
        #[arg(long)]
        chain: Option<String>,
    },
    /// Whether the nerve of the base maps into a filtered simplicial set
    Pointing { fss: PathBuf },
    /// Colimit of a diagram or cell complex over the chains of a poset
    Colim { diagram: PathBuf },
    /// The almost-filtered conditions on a set-valued diagram
    AlmostFiltered {
        diagram: PathBuf,
        /// Print the violation in text output
        #[arg(long)]
        witness: bool,
    },
    /// Solve a lifting square
    Lift { square: PathBuf },
    /// Right lifting property of a filtered map against generating cells
    Rlp {
        map: PathBuf,
        /// `I` (boundaries) or `J` (horns)
        #[arg(long, default_value = "I")]
        cells: String,
        /// Largest cell dimension
        #[arg(long, default_value_t = 1)]
        nmax: usize,
    },
    /// A degenerate simplex as a retract of a product with a chain
    Retract {
        /// Weakly increasing tuple, e.g. `0,0,1`
        phi: String,
        /// Poset for named elements (default: integers in order)
        #[arg(long)]
        poset: Option<PathBuf>,
    },
    /// Numeric homotopy formulas on realized chains
    Numeric {
        #[command(subcommand)]
        command: NumericCommand,
    },
    /// Compare stratified π₀ through both factorizations of a stratified map
    Compare { map: PathBuf },
    /// Evaluate a built-in instance (lists them when no name is given)
    Builtin { name: Option<String> },
    /// Export a poset, its chains, a set diagram shape or sπ₀ as DOT
    ExportDot {
        /// `poset`, `chains`, `setdiagram` or `spi0`
        kind: String,
        input: PathBuf,
    },
}

#[derive(Subcommand)]
enum NumericCommand {
    /// Evaluate the straight-line homotopy at one point
    H217 {
        #[arg(long)]
        psi: String,
        #[arg(long)]
        targets: String,
        /// Coordinates on `psi`, comma separated
        #[arg(long)]
        point: String,
        #[arg(long)]
        s: f64,
        /// Poset (default: the named elements ordered by name)
        #[arg(long)]
        poset: Option<PathBuf>,
        /// Evaluate in single precision
        #[arg(long)]
        f32: bool,
    },
    /// Sampled sums, endpoints and gluing of the homotopy over every chain pair
    Glue {
        #[arg(long)]
        poset: PathBuf,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
}

fn run(cli: &Cli, inputs: &mut Vec<Input>) -> strat_core::Result<Outcome> {
    let g = Globals {
        seed: cli.seed,
        budget: cli.budget,
        bound: cli.bound,
    };
    let mut read = |p: &PathBuf| -> strat_core::Result<usize> {
        inputs.push(Input::read(p)?);
        Ok(inputs.len() - 1)
    };
    match &cli.command {
        Command::Nerve { poset } => {
            let i = read(poset)?;
            commands::nerve(&inputs[i])
        }
        Command::Spi0 { fss, chain } => {
            let i = read(fss)?;
            commands::spi0(&inputs[i], chain.as_deref(), &g)
        }
        Command::Pointing { fss } => {
            let i = read(fss)?;
            commands::pointing(&inputs[i], &g)
        }
        Command::Colim { diagram } => {
            let i = read(diagram)?;
            commands::colim(&inputs[i], &g)
        }
        Command::AlmostFiltered { diagram, witness } => {
            let i = read(diagram)?;
            commands::almost_filtered_cmd(&inputs[i], *witness, &g)
        }
        Command::Lift { square } => {
            let i = read(square)?;
            commands::lift(&inputs[i], &g)
        }
        Command::Rlp { map, cells, nmax } => {
            let i = read(map)?;
            commands::rlp(&inputs[i], cells, *nmax, &g)
        }
        Command::Retract { phi, poset } => {
            let i = poset.as_ref().map(&mut read).transpose()?;
            commands::retract(phi, i.map(|i| &inputs[i]))
        }
        Command::Numeric {
            command:
                NumericCommand::H217 {
                    psi,
                    targets,
                    point,
                    s,
                    poset,
                    f32,
                },
        } => {
            let i = poset.as_ref().map(&mut read).transpose()?;
            let args = H217 {
                psi,
                targets,
                point,
                s: *s,
                f32: *f32,
            };
            commands::h217(&args, i.map(|i| &inputs[i]))
        }
        Command::Numeric {
            command: NumericCommand::Glue { poset, samples },
        } => {
            let i = read(poset)?;
            commands::glue(&inputs[i], *samples, &g)
        }
        Command::Compare { map } => {
            let i = read(map)?;
            commands::compare(&inputs[i])
        }
        Command::Builtin { name } => commands::builtin_cmd(name.as_deref()),
        Command::ExportDot { kind, input } => {
            let i = read(input)?;
            commands::export_dot_cmd(kind, &inputs[i], &g)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let mut inputs = Vec::new();
    match run(&cli, &mut inputs) {
        Ok(out) => {
            if cli.json {
                let r = report::report(&argv, &inputs, &out);
                println!("{}", serde_json::to_string_pretty(&r).expect("reports serialize"));
            } else if cli.dot {
                match &out.dot {
                    Some(d) => print!("{d}"),
                    None => {
                        eprintln!("error: this command has no DOT output");
                        return ExitCode::from(2);
                    }
                }
            } else {
                for line in &out.text {
                    println!("{line}");
                }
            }
            ExitCode::from(out.verdict.exit_code())
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(error_code(&e))
        }
    }
}
