use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use annihilator_core::report::{self, Check, Format, RunConfig};
use annihilator_core::Epsilon;
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "annihilator", version, about = "Exact checks of quadratic annihilator identities for so(2n) and sp(2n)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run check families and print a report.
    Run(RunArgs),
    /// Describe what a check certifies.
    Explain { id: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum Algebra {
    So,
    Sp,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Json,
    Text,
}

#[derive(clap::Args)]
struct RunArgs {
    #[arg(long, value_enum)]
    algebra: Algebra,
    #[arg(long)]
    n: usize,
    /// Check family; repeat for several. Defaults to all.
    #[arg(long = "check", value_parser = parse_check)]
    checks: Vec<Check>,
    #[arg(long, default_value_t = 4)]
    m_max: usize,
    /// Bosonic degree bound for the Fock state family.
    #[arg(long, default_value_t = 6)]
    d_check: u32,
    #[arg(long, value_enum, default_value_t = OutFormat::Text)]
    format: OutFormat,
    /// Largest symmetric-square dimension the projector suite will build.
    #[arg(long, default_value_t = 10_000)]
    cap_dim: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Attach wall-clock times (makes reports run-dependent).
    #[arg(long)]
    timings: bool,
}

fn parse_check(s: &str) -> Result<Check, String> {
    s.parse().map_err(|e: annihilator_core::Error| {
        let names: Vec<&str> = Check::ALL.iter().map(|c| c.name()).collect();
        format!("{e}; expected one of {}", names.join(", "))
    })
}

fn usage_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match cli.command {
        Command::Explain { id } => match report::explain(&id) {
            Ok(text) => {
                print!("{text}");
                ExitCode::SUCCESS
            }
            Err(e) => usage_error(e),
        },
        Command::Run(args) => run(args),
    }
}

fn run(args: RunArgs) -> ExitCode {
    let algebra = match args.algebra {
        Algebra::So => Epsilon::Orthogonal,
        Algebra::Sp => Epsilon::Symplectic,
    };
    let mut cfg = RunConfig::new(algebra, args.n);
    if !args.checks.is_empty() {
        cfg.checks = args.checks;
    }
    cfg.m_max = args.m_max;
    cfg.d_check = args.d_check;
    cfg.cap_dim = args.cap_dim;
    cfg.timings = args.timings;
    let format = match args.format {
        OutFormat::Json => Format::Json,
        OutFormat::Text => Format::Text,
    };
    let rep = match report::run(&cfg) {
        Ok(r) => r,
        Err(e) => return usage_error(e),
    };
    let body = rep.render(format);
    match &args.out {
        Some(path) => {
            if let Err(e) = fs::write(path, &body) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{body}"),
    }
    ExitCode::from(rep.exit_code() as u8)
}
