use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use eisenstark::cli::{batch, compute_row, render, validate, Format, RowRequest, RowStatus};
use eisenstark::modsym::cache::set_cache_dir;
use eisenstark::{selftest, Error};

#[derive(Parser)]
#[command(name = "eisenstark", version, about = "Merel units, Stark units and Eisenstein components mod p")]
struct Cli {
    /// Directory for cached modular-symbol data
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a single row
    Row {
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        verbose: bool,
    },
    /// Compute every admissible row up to the given bounds
    Table {
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
        #[arg(long, default_value_t = 100)]
        pmax: u64,
        #[arg(long, default_value_t = 150)]
        qmax: u64,
        #[arg(long, value_enum, default_value_t = Format::Md)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Rows computed concurrently (0 = one per core)
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// Run the algebraic property suites
    Selftest,
}

const EXIT_VALIDATION: u8 = 1;
const EXIT_INTERNAL: u8 = 2;

fn exit_for(e: &Error) -> ExitCode {
    ExitCode::from(if e.is_internal() { EXIT_INTERNAL } else { EXIT_VALIDATION })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    set_cache_dir(cli.cache_dir);
    match cli.command {
        Command::Row { disc, p, q, verbose } => {
            let req = RowRequest { disc, p, q };
            if verbose {
                for (name, ok) in validate(&req) {
                    eprintln!("{name}: {}", if ok { "pass" } else { "FAIL" });
                }
            }
            match compute_row(&req) {
                Ok(row) => {
                    print!("{}", render(&[row], Format::Md));
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    exit_for(&e)
                }
            }
        }
        Command::Table { disc, pmax, qmax, format, out, jobs } => {
            let rows = match batch(disc, pmax, qmax, jobs) {
                Ok(rows) => rows,
                Err(e) => {
                    eprintln!("error: {e}");
                    return exit_for(&e);
                }
            };
            let text = render(&rows, format);
            match out {
                Some(path) => {
                    if let Err(e) = fs::write(&path, text) {
                        eprintln!("error: {}: {e}", path.display());
                        return ExitCode::from(EXIT_VALIDATION);
                    }
                }
                None => print!("{text}"),
            }
            for r in rows.iter().filter(|r| r.status == RowStatus::Failed) {
                eprintln!("row ({}, {}): {}", r.p, r.q, r.error.as_deref().unwrap_or("failed"));
            }
            if rows.iter().any(|r| r.status == RowStatus::Failed) {
                ExitCode::from(EXIT_INTERNAL)
            } else {
                ExitCode::SUCCESS
            }
        }
        Command::Selftest => {
            let mut failed = false;
            for r in selftest::run_all() {
                match &r.outcome {
                    Ok(()) => println!("pass  {:<34} {:>7.2}s", r.name, r.seconds),
                    Err(msg) => {
                        failed = true;
                        println!("FAIL  {:<34} {:>7.2}s  {msg}", r.name, r.seconds);
                    }
                }
            }
            if failed {
                ExitCode::from(EXIT_INTERNAL)
            } else {
                ExitCode::SUCCESS
            }
        }
    }
}
