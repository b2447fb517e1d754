use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use lf_kernel::frontend::driver::{fol_signature_text, DriverError, Session};
use lf_kernel::reduction::Fuel;

#[derive(Parser)]
#[command(
    name = "lf",
    version,
    about = "Check LF signatures, compare and normalize terms"
)]
struct Cli {
    /// Reduction step budget per command.
    #[arg(long, global = true, default_value_t = Fuel::DEFAULT_STEPS)]
    fuel: u64,

    /// Ambient context, e.g. "x:iota, y:iota".
    #[arg(long, global = true)]
    ctx: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a signature file.
    Check { file: PathBuf },
    /// Synthesize the type of an object, the kind of a family, or check a kind.
    Synth { file: PathBuf, term: String },
    /// Decide definitional equality of two objects at a type.
    Eq {
        file: PathBuf,
        #[arg(long = "type")]
        ty: String,
        m: String,
        n: String,
    },
    /// Print the quasi-canonical form of an object at a type.
    Canon {
        file: PathBuf,
        #[arg(long = "type")]
        ty: String,
        m: String,
    },
    /// Round-trip a first-order formula through its LF representation.
    FolDemo { file: PathBuf, formula: String },
    /// Print the LF signature for first-order logic over SYMBOL/ARITY pairs.
    FolSig { symbols: Vec<String> },
}

fn read(path: &PathBuf) -> Result<String, (i32, String)> {
    std::fs::read_to_string(path).map_err(|e| (2, format!("{}: {e}", path.display())))
}

fn session(cli: &Cli, path: &PathBuf) -> Result<Session, (i32, String)> {
    let mut s = Session::load(&read(path)?, cli.fuel).map_err(fail)?;
    if let Some(ctx) = &cli.ctx {
        s.set_context(ctx).map_err(fail)?;
    }
    Ok(s)
}

fn fail(e: DriverError) -> (i32, String) {
    (e.exit_code(), e.to_string())
}

fn parse_symbol(s: &str) -> Result<(String, usize), (i32, String)> {
    let bad = || (2, format!("expected SYMBOL/ARITY, found `{s}`"));
    let (name, arity) = s.split_once('/').ok_or_else(bad)?;
    Ok((name.to_string(), arity.parse().map_err(|_| bad())?))
}

fn run(cli: &Cli) -> Result<String, (i32, String)> {
    match &cli.command {
        Command::Check { file } => Ok(session(cli, file)?.check()),
        Command::Synth { file, term } => session(cli, file)?.synth(term).map_err(fail),
        Command::Eq { file, ty, m, n } => session(cli, file)?.eq(ty, m, n).map_err(fail),
        Command::Canon { file, ty, m } => session(cli, file)?.canon(ty, m).map_err(fail),
        Command::FolDemo { file, formula } => session(cli, file)?.fol_demo(formula).map_err(fail),
        Command::FolSig { symbols } => {
            let symbols = symbols
                .iter()
                .map(|s| parse_symbol(s))
                .collect::<Result<Vec<_>, _>>()?;
            fol_signature_text(&symbols).map_err(fail)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err((code, msg)) => {
            eprintln!("{msg}");
            ExitCode::from(code as u8)
        }
    }
}
