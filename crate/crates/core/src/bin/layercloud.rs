use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use layercloud::cli::{self, GenOptions, Mode, SolveOptions};
use layercloud::io::parse_rational;
use layercloud::{Error, Q};

#[derive(Parser)]
#[command(name = "layercloud", version, about = "Layered rectangle contact layouts")]
struct Cli {
    /// Print the run report as JSON instead of text.
    #[arg(long, global = true)]
    report_json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check an instance file; exit 1 with a violation listing if it is invalid.
    Validate { instance: PathBuf },
    /// Minimize total gap width.
    AreaMin(SolveArgs),
    /// Minimize the bounding box width.
    BboxMin(SolveArgs),
    /// Maximize realized contacts.
    MaxContacts(SolveArgs),
    /// Solve by exhaustive grid search.
    Oracle {
        #[arg(long, value_enum, default_value_t = OracleMode::MaxContacts)]
        mode: OracleMode,
        #[command(flatten)]
        args: SolveArgs,
    },
    /// Generate a random valid instance.
    Gen {
        #[arg(long, default_value_t = 2)]
        layers: usize,
        /// Comma separated layer sizes; random when omitted.
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 10)]
        max_total: usize,
        #[arg(long, default_value_t = 1)]
        min_width: i64,
        #[arg(long, default_value_t = 5)]
        max_width: i64,
        #[arg(long, default_value = "1", value_parser = rational)]
        epsilon: Q,
        /// Overridden by LAYERCLOUD_SEED.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw a stored representation as SVG.
    Render {
        instance: PathBuf,
        representation: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleMode {
    AreaMin,
    BboxMin,
    MaxContacts,
}

#[derive(Args)]
struct SolveArgs {
    instance: PathBuf,
    /// Branch and bound even on two layers.
    #[arg(long)]
    exact: bool,
    /// Write the integer program in LP format.
    #[arg(long, value_name = "PATH")]
    emit_lp: Option<PathBuf>,
    /// Re-solve with the oracle and fail with exit 3 on disagreement.
    #[arg(long)]
    oracle_check: bool,
    #[arg(long, value_name = "PATH")]
    svg: Option<PathBuf>,
    /// Write the representation JSON.
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Write the flow network arc list.
    #[arg(long, value_name = "PATH")]
    dump_network: Option<PathBuf>,
}

impl SolveArgs {
    fn options(&self) -> SolveOptions {
        SolveOptions {
            exact: self.exact,
            emit_lp: self.emit_lp.clone(),
            oracle_check: self.oracle_check,
            svg: self.svg.clone(),
            json: self.json.clone(),
            dump_network: self.dump_network.clone(),
        }
    }
}

fn rational(s: &str) -> Result<Q, String> {
    parse_rational(s)
}

fn run(cli: Cli) -> Result<(), Error> {
    let solved = match &cli.cmd {
        Cmd::Validate { instance } => {
            let violations = cli::cmd_validate(instance)?;
            if violations.is_empty() {
                println!("valid");
                return Ok(());
            }
            return Err(Error::InvalidGraph(violations));
        }
        Cmd::AreaMin(a) => cli::cmd_solve(&a.instance, Mode::AreaMin, &a.options())?,
        Cmd::BboxMin(a) => cli::cmd_solve(&a.instance, Mode::BboxMin, &a.options())?,
        Cmd::MaxContacts(a) => cli::cmd_solve(&a.instance, Mode::MaxContacts, &a.options())?,
        Cmd::Oracle { mode, args } => {
            let mode = match mode {
                OracleMode::AreaMin => Mode::AreaMin,
                OracleMode::BboxMin => Mode::BboxMin,
                OracleMode::MaxContacts => Mode::MaxContacts,
            };
            cli::cmd_oracle(&args.instance, mode, &args.options())?
        }
        Cmd::Gen { layers, sizes, max_total, min_width, max_width, epsilon, seed, out } => {
            let opts = GenOptions {
                layers: *layers,
                sizes: sizes.clone(),
                max_total: *max_total,
                widths: (*min_width, *max_width),
                epsilon: *epsilon,
                seed: *seed,
            };
            let inst = cli::cmd_gen(&opts)?;
            match out {
                Some(p) => inst.save(p)?,
                None => println!("{}", inst.to_json()),
            }
            return Ok(());
        }
        Cmd::Render { instance, representation, out } => {
            let svg = cli::cmd_render(instance, representation)?;
            match out {
                Some(p) => std::fs::write(p, svg)?,
                None => print!("{svg}"),
            }
            return Ok(());
        }
    };
    if cli.report_json {
        println!("{}", solved.report.to_json());
    } else {
        println!("{}", solved.report);
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            match &e {
                Error::InvalidGraph(vs) => {
                    eprintln!("invalid instance:");
                    for v in vs {
                        eprintln!("  {v}");
                    }
                }
                other => eprintln!("error: {other}"),
            }
            ExitCode::from(cli::exit_code(&e) as u8)
        }
    }
}
