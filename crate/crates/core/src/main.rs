use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;

use dslice::cli::{
    cmd_blanchfield, cmd_fox, cmd_livingston, cmd_reproduce_paper, cmd_rho, parse_tolerance, read_input,
    BlanchfieldInput, DeltaInput, Format, Report, RunConfig, DEFAULT_R_MAX,
};
use dslice::covers::AlexanderPresentation;
use dslice::numbers::DEFAULT_MAX_PRECISION_BITS;
use dslice::rho::{HermMatrix, RhoMode};
use dslice::Error;

/// Metabelian doubly-slice obstructions: rho-invariants, branched cover orders,
/// Livingston's criterion, and Blanchfield lagrangians.
#[derive(Parser)]
#[command(name = "dslice", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand)]
enum Command {
    /// rho-invariant of a Hermitian matrix file
    Rho { input: PathBuf },
    /// Orders of H_1 of cyclic branched covers for an Alexander presentation file
    Fox { input: PathBuf },
    /// Livingston's criterion and the prime-power cover sweep for an Alexander polynomial
    Livingston { input: PathBuf },
    /// Algebraic double sliceness of a Blanchfield form with two submodules
    Blanchfield { input: PathBuf },
    /// Recompute the worked example and compare against stored golden values
    ReproducePaper,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Numeric,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Text,
}

#[derive(Args)]
struct Opts {
    #[arg(long, global = true, value_enum, default_value = "exact")]
    mode: ModeArg,
    /// Enclosure width for numeric integrals, as p/q or a decimal
    #[arg(long, global = true, default_value = "1/1000000000", value_parser = tol_parser)]
    tol: BigRational,
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_PRECISION_BITS)]
    max_precision_bits: u32,
    /// Number of boundary copies r in the 1/r normalization
    #[arg(long, global = true, default_value_t = 1)]
    copies: u32,
    /// Primes p for additional F_p rows, comma separated
    #[arg(long, global = true, value_delimiter = ',')]
    primes: Vec<u64>,
    #[arg(long, global = true, default_value_t = DEFAULT_R_MAX)]
    r_max: u64,
    /// Explicit cover indices, comma separated; 2..=r-max otherwise
    #[arg(long, global = true, value_delimiter = ',')]
    covers: Option<Vec<u64>>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: FormatArg,
}

fn tol_parser(s: &str) -> Result<BigRational, String> {
    parse_tolerance(s).map_err(|e| e.to_string())
}

impl Opts {
    fn config(&self) -> RunConfig {
        RunConfig {
            mode: match self.mode {
                ModeArg::Exact => RhoMode::ExactIfPossible,
                ModeArg::Numeric => RhoMode::Numeric,
            },
            tol: self.tol.clone(),
            max_precision_bits: self.max_precision_bits,
            copies: self.copies,
            primes: self.primes.clone(),
            r_max: self.r_max,
            covers: self.covers.clone(),
            format: match self.format {
                FormatArg::Json => Format::Json,
                FormatArg::Text => Format::Text,
            },
        }
    }
}

fn emit<R: Report>(report: R, format: Format) -> i32 {
    let out = report.render(format);
    print!("{out}");
    if !out.ends_with('\n') {
        println!();
    }
    report.exit_code()
}

fn run(cli: Cli) -> Result<i32, Error> {
    let cfg = cli.opts.config();
    cfg.validate()?;
    let f = cfg.format;
    Ok(match cli.command {
        Command::Rho { input } => emit(cmd_rho(&read_input::<HermMatrix>(&input)?, &cfg)?, f),
        Command::Fox { input } => emit(cmd_fox(&read_input::<AlexanderPresentation>(&input)?, &cfg)?, f),
        Command::Livingston { input } => {
            emit(cmd_livingston(&read_input::<DeltaInput>(&input)?.into_poly(), &cfg)?, f)
        }
        Command::Blanchfield { input } => emit(cmd_blanchfield(read_input::<BlanchfieldInput>(&input)?, &cfg)?, f),
        Command::ReproducePaper => emit(cmd_reproduce_paper(&cfg)?, f),
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
