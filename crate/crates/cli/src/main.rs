//! `jtheta`: evaluate θ₁ and η, query multipliers, and run verification sweeps.
//!
//! Exit codes: 0 pass, 1 verification failure, 2 usage error, 3 domain error.

mod commands;
mod report;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use jacobi_theta::sweep::DEFAULT_SEED;
use jacobi_theta::{Complex, TruncationControl};

use commands::{Failure, ResidueArgs};
use report::Format;

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_DOMAIN: u8 = 3;
const TOL_RANGE: (f64, f64) = (1e-15, 1e-3);

#[derive(Parser)]
#[command(
    name = "jtheta",
    version,
    about = "Jacobi theta and Dedekind eta toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Truncation tolerance for evaluations, pass threshold for verifications.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// θ₁(z, τ), reduced to the fundamental domain when that helps.
    Eval {
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        z: Complex,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        tau: Complex,
    },
    /// η(τ).
    Eta {
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        tau: Complex,
    },
    /// The matrix taking τ into the fundamental domain.
    Reduce {
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        tau: Complex,
    },
    /// ε(A) and ε₁(A) for A given as a,b,c,d.
    Multiplier {
        #[arg(
            long,
            value_delimiter = ',',
            required = true,
            allow_hyphen_values = true
        )]
        matrix: Vec<i64>,
    },
    /// The Dedekind sum s(h, k) as an exact rational.
    Dedekind {
        #[arg(long, allow_hyphen_values = true)]
        h: i64,
        #[arg(long)]
        k: i64,
    },
    /// The θ₁ transformation law on seeded random cases.
    VerifyTransform {
        #[arg(long, default_value_t = 200)]
        count: usize,
    },
    /// Residues, closure, log-sum identity and contour gap for one kernel.
    VerifyResidues {
        #[arg(long, default_value_t = 3)]
        m: u32,
        #[arg(long)]
        k: i64,
        #[arg(long)]
        h: i64,
        #[arg(long)]
        v: f64,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        z: Complex,
    },
    /// The θ₁ and η transformation laws together on seeded random cases.
    Sweep {
        #[arg(long, default_value_t = 200)]
        count: usize,
    },
}

/// `a+bi` / `a-bi`, no spaces.
fn parse_complex(s: &str) -> Result<Complex, String> {
    if s.chars().any(char::is_whitespace) {
        return Err(format!("complex literal {s:?} must not contain spaces"));
    }
    let z: Complex = s
        .parse()
        .map_err(|_| format!("{s:?} is not a complex literal like 0.2+0.1i"))?;
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(format!("{s:?} is not finite"));
    }
    Ok(z)
}

fn usage(msg: impl std::fmt::Display) -> Failure {
    Failure::Usage(msg.to_string())
}

/// Truncation control for the evaluating commands.
fn eval_control(tol: Option<f64>) -> Result<TruncationControl, Failure> {
    match tol {
        None => Ok(TruncationControl::default()),
        Some(t) if t < TOL_RANGE.0 => Err(usage(format!("--tol {t:e} is below {:e}", TOL_RANGE.0))),
        Some(t) => {
            TruncationControl::new(t, TruncationControl::default().max_terms()).map_err(usage)
        }
    }
}

fn run(cli: &Cli) -> commands::Outcome {
    if let Some(t) = cli.tol {
        // A threshold below working precision is accepted: it simply cannot pass.
        if !(t > 0.0 && t <= TOL_RANGE.1) {
            return Err(usage(format!("--tol must lie in (0, {:e}]", TOL_RANGE.1)));
        }
    }
    let seed = cli.seed;
    match &cli.command {
        Command::Eval { z, tau } => commands::eval(*z, *tau, eval_control(cli.tol)?, seed),
        Command::Eta { tau } => commands::eta(*tau, eval_control(cli.tol)?, seed),
        Command::Reduce { tau } => commands::reduce(*tau, seed),
        Command::Multiplier { matrix } => {
            let m: [i64; 4] = matrix
                .as_slice()
                .try_into()
                .map_err(|_| usage("--matrix takes a,b,c,d"))?;
            commands::multiplier(m, seed)
        }
        Command::Dedekind { h, k } => commands::dedekind(*h, *k, seed),
        Command::VerifyTransform { count } => {
            commands::verify_transform(*count, cli.tol, TruncationControl::default(), seed)
        }
        Command::VerifyResidues { m, k, h, v, z } => {
            let args = ResidueArgs {
                m: *m,
                k: *k,
                h: *h,
                v: *v,
                z: *z,
            };
            commands::verify_residues(&args, cli.tol, seed)
        }
        Command::Sweep { count } => {
            commands::sweep(*count, cli.tol, TruncationControl::default(), seed)
        }
    }
}

fn emit(cli: &Cli, report: &report::Report) -> io::Result<()> {
    match &cli.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            report.render(cli.format, &mut w)?;
            w.flush()
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            report.render(cli.format, &mut w)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(&cli) {
        Ok(report) => {
            if let Err(e) = emit(&cli, &report) {
                eprintln!("jtheta: cannot write report: {e}");
                return ExitCode::from(EXIT_USAGE);
            }
            if report.pass {
                ExitCode::SUCCESS
            } else {
                for note in report.notes.iter().filter(|n| n.starts_with("exceeds")) {
                    eprintln!("jtheta: {note}");
                }
                ExitCode::from(EXIT_FAIL)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("jtheta: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Domain(e)) => {
            eprintln!("jtheta: {e}");
            ExitCode::from(EXIT_DOMAIN)
        }
    }
}
