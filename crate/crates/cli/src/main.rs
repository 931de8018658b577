use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use qcircle_cli::{run_lines, Config};

/// Reads one JSON request per line and writes one JSON response per line.
#[derive(Parser)]
#[command(name = "qcircle", version)]
struct Args {
    /// Default seed for requests that do not carry one.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Default refinement cap for irrational comparisons.
    #[arg(long, default_value_t = 20)]
    precision: u32,
    /// Default sample count for randomized checks.
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    /// Request file; standard input when omitted.
    input: Option<PathBuf>,
    /// Response file; standard output when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let config = Config { seed: args.seed, precision: args.precision, samples: args.samples };
    let input: Box<dyn BufRead> = match &args.input {
        Some(path) => match File::open(path) {
            Ok(f) => Box::new(BufReader::new(f)),
            Err(e) => {
                eprintln!("qcircle: {}: {e}", path.display());
                return ExitCode::from(2);
            }
        },
        None => Box::new(io::stdin().lock()),
    };
    let mut output: Box<dyn Write> = match &args.output {
        Some(path) => match File::create(path) {
            Ok(f) => Box::new(f),
            Err(e) => {
                eprintln!("qcircle: {}: {e}", path.display());
                return ExitCode::from(2);
            }
        },
        None => Box::new(io::stdout().lock()),
    };
    match run_lines(input, &mut output, &config) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("qcircle: {e}");
            ExitCode::from(2)
        }
    }
}
