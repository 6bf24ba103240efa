use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use rayleigh_mi::check::{run_checks, CheckOptions};
use rayleigh_mi::quadrature::QuadratureRule;
use rayleigh_mi::sweep::{
    db_grid, format_number, run_sweep, write_csv_header, write_csv_row, SweepConfig, DEFAULT_ORDER,
    DEFAULT_SNR_DB_MAX, DEFAULT_SNR_DB_MIN, DEFAULT_SNR_DB_STEP, DEFAULT_TOL,
};
use rayleigh_mi::Error;

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

#[derive(Parser)]
#[command(
    name = "rayleigh-mi",
    version,
    about = "Gaussian-input mutual information of the non-coherent Rayleigh fading channel"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Domain {
    Half,
    Full,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate entropies, mutual information and bounds over an SNR grid.
    Sweep {
        #[arg(long, default_value_t = DEFAULT_SNR_DB_MIN, allow_hyphen_values = true)]
        snr_db_min: f64,
        #[arg(long, default_value_t = DEFAULT_SNR_DB_MAX, allow_hyphen_values = true)]
        snr_db_max: f64,
        #[arg(long, default_value_t = DEFAULT_SNR_DB_STEP)]
        snr_db_step: f64,
        /// Comma-separated linear powers; overrides the dB grid.
        #[arg(long, value_delimiter = ',')]
        omega_sq: Option<Vec<f64>>,
        #[arg(long, default_value_t = DEFAULT_ORDER)]
        quad_order: usize,
        #[arg(long, default_value_t = DEFAULT_ORDER)]
        inner_order: usize,
        /// Add the two-point discrete capacity column (slow).
        #[arg(long)]
        with_discrete: bool,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
        /// Accepted for interface symmetry; the sweep is deterministic.
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Print the nodes and weights of a Gauss-Hermite rule.
    Quad {
        #[arg(long)]
        order: usize,
        #[arg(long, value_enum, default_value_t = Domain::Half)]
        domain: Domain,
    },
    /// Run the oracle comparisons and invariants; prints a JSON report.
    Check {
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1_000_000)]
        mc_samples: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Domain(_) | Error::InvalidArgument(_) => EXIT_USAGE,
        Error::Convergence(_) | Error::Evaluation(_) => EXIT_NUMERICAL,
    }
}

fn open_output(path: Option<&PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("rayleigh-mi: {msg}");
    ExitCode::from(code)
}

#[allow(clippy::too_many_arguments)]
fn sweep(
    snr_db_min: f64,
    snr_db_max: f64,
    snr_db_step: f64,
    omega_sq: Option<Vec<f64>>,
    quad_order: usize,
    inner_order: usize,
    with_discrete: bool,
    format: Format,
    output: Option<PathBuf>,
    tol: f64,
) -> io::Result<ExitCode> {
    let omegas = match omega_sq {
        Some(list) => list,
        None => match db_grid(snr_db_min, snr_db_max, snr_db_step) {
            Ok(g) => g,
            Err(e) => return Ok(fail(EXIT_USAGE, e)),
        },
    };
    if !tol.is_finite() || tol <= 0.0 {
        return Ok(fail(
            EXIT_USAGE,
            format!("--tol must be positive, got {tol}"),
        ));
    }
    let cfg = SweepConfig {
        omegas,
        quad_order,
        inner_order,
        with_discrete,
        tol,
    };
    let outcome = match run_sweep(&cfg) {
        Ok(o) => o,
        Err(e) => return Ok(fail(exit_code(&e), e)),
    };
    let mut w = open_output(output.as_ref())?;
    match format {
        Format::Csv => {
            write_csv_header(&mut w)?;
            for row in &outcome.rows {
                write_csv_row(&mut w, row)?;
            }
            if let Some(e) = &outcome.error {
                writeln!(w, "# error: {e}")?;
            }
        }
        Format::Json => {
            let doc = serde_json::json!({
                "rows": outcome.rows,
                "error": outcome.error.as_ref().map(|e| e.to_string()),
            });
            serde_json::to_writer_pretty(&mut w, &doc)?;
            writeln!(w)?;
        }
    }
    w.flush()?;
    for row in outcome.rows.iter().filter(|r| r.point.mi_clamped) {
        eprintln!(
            "rayleigh-mi: warning: mutual information clamped to 0 at omega_sq = {}",
            format_number(row.point.omega_sq)
        );
    }
    Ok(match &outcome.error {
        Some(e) => fail(exit_code(e), e),
        None => ExitCode::SUCCESS,
    })
}

fn quad(order: usize, domain: Domain) -> io::Result<ExitCode> {
    let rule = match domain {
        Domain::Half => QuadratureRule::half_range(order),
        Domain::Full => QuadratureRule::full_range(order),
    };
    let rule = match rule {
        Ok(r) => r,
        Err(e) => return Ok(fail(exit_code(&e), e)),
    };
    let mut w = open_output(None)?;
    writeln!(w, "node,weight")?;
    for (v, wt) in rule.iter() {
        writeln!(w, "{},{}", format_number(v), format_number(wt))?;
    }
    w.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn check(tol: f64, seed: u64, mc_samples: usize, output: Option<PathBuf>) -> io::Result<ExitCode> {
    let opts = CheckOptions {
        tol,
        seed,
        mc_samples,
        ..CheckOptions::default()
    };
    let report = match run_checks(&opts) {
        Ok(r) => r,
        Err(e) => return Ok(fail(exit_code(&e), e)),
    };
    let mut w = open_output(output.as_ref())?;
    serde_json::to_writer_pretty(&mut w, &report)?;
    writeln!(w)?;
    w.flush()?;
    if report.passed {
        return Ok(ExitCode::SUCCESS);
    }
    for c in report.failures() {
        eprintln!("rayleigh-mi: check failed: {} ({})", c.name, c.detail);
    }
    Ok(ExitCode::from(EXIT_CHECK_FAILED))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Sweep {
            snr_db_min,
            snr_db_max,
            snr_db_step,
            omega_sq,
            quad_order,
            inner_order,
            with_discrete,
            format,
            output,
            seed: _,
            tol,
        } => sweep(
            snr_db_min,
            snr_db_max,
            snr_db_step,
            omega_sq,
            quad_order,
            inner_order,
            with_discrete,
            format,
            output,
            tol,
        ),
        Command::Quad { order, domain } => quad(order, domain),
        Command::Check {
            tol,
            seed,
            mc_samples,
            output,
        } => check(tol, seed, mc_samples, output),
    };
    result.unwrap_or_else(|e| fail(EXIT_USAGE, e))
}
