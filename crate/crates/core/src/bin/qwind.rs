use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use qwind::cli::{execute, report_error, CliError, Command, InputSource, JobSpec, OutputFormat};

#[derive(Clone, Copy, ValueEnum)]
enum Cmd {
    Wind,
    SymplecticWind,
    Identities,
    Homotopy,
    PoincareBohl,
    Rouche,
    Roots,
    Preimage,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Wind => Command::Wind,
            Cmd::SymplecticWind => Command::SymplecticWind,
            Cmd::Identities => Command::Identities,
            Cmd::Homotopy => Command::Homotopy,
            Cmd::PoincareBohl => Command::PoincareBohl,
            Cmd::Rouche => Command::Rouche,
            Cmd::Roots => Command::Roots,
            Cmd::Preimage => Command::Preimage,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

/// Quaternionic winding numbers and root localization.
#[derive(Parser)]
#[command(name = "qwind", version)]
struct Args {
    command: Cmd,
    /// Job file, inline JSON, or `-` for standard input.
    #[arg(short, long)]
    input: String,
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(short, long, value_enum, default_value = "json")]
    format: Format,
    /// Quadrature panels.
    #[arg(long)]
    panels: Option<usize>,
    /// Residual below which a winding number counts as certified.
    #[arg(long)]
    threshold: Option<f64>,
    /// Enclosure size for roots and preimage.
    #[arg(long)]
    tol: Option<f64>,
    /// Slice direction `a,b,c`.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    slice: Option<Vec<f64>>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn main() -> ExitCode {
    // Usage errors exit 1 so that 2 keeps meaning "not certified".
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let slice = match args.slice.as_deref() {
        None => None,
        Some(&[a, b, c]) => Some([a, b, c]),
        Some(_) => {
            report_error(&CliError::Usage("--slice takes three numbers".into()));
            return ExitCode::from(1);
        }
    };
    let spec = JobSpec {
        command: args.command.into(),
        input: InputSource::from_arg(&args.input),
        format: match args.format {
            Format::Json => OutputFormat::Json,
            Format::Csv => OutputFormat::Csv,
        },
        output: args.output,
        panels: args.panels,
        threshold: args.threshold,
        tol: args.tol,
        slice,
        seed: args.seed,
    };
    ExitCode::from(execute(&spec) as u8)
}
