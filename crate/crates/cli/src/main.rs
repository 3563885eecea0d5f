//! `spheregap`: spectra, gaps and gap variations of spherical lunes and
//! triangles from the command line.

mod commands;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use output::OutputFormat;

#[derive(Debug, Parser)]
#[command(name = "spheregap", version, about = "Dirichlet spectra and fundamental gaps of spherical lunes and triangles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DomainKind {
    Lune,
    Triangle,
}

/// An opening angle given in radians or as a multiple of π.
#[derive(Debug, Clone, Copy, Args)]
#[group(required = true, multiple = false)]
pub struct BetaArg {
    /// Opening angle in radians.
    #[arg(long, allow_negative_numbers = true)]
    beta: Option<f64>,
    /// Opening angle as a multiple of π.
    #[arg(long = "beta-pi", allow_negative_numbers = true)]
    beta_pi: Option<f64>,
}

impl BetaArg {
    pub fn radians(&self) -> f64 {
        match (self.beta, self.beta_pi) {
            (Some(b), _) => b,
            (_, Some(x)) => x * std::f64::consts::PI,
            _ => unreachable!("clap requires one of the group"),
        }
    }
}

#[derive(Debug, Clone, Copy, Args)]
pub struct FormatArg {
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
}

/// Deformation direction `(a, b)`; rescaled to unit length.
#[derive(Debug, Clone, Copy, Args)]
pub struct DirectionArg {
    #[arg(long, allow_negative_numbers = true)]
    a: f64,
    #[arg(long, allow_negative_numbers = true)]
    b: f64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Lowest distinct eigenvalues with their (k, j) modes.
    Spectrum {
        #[arg(long, value_enum)]
        domain: DomainKind,
        #[command(flatten)]
        beta: BetaArg,
        #[arg(long, default_value_t = 5)]
        count: usize,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Fundamental gap sampled over an interval of opening angles.
    GapCurve {
        #[arg(long, value_enum)]
        domain: DomainKind,
        #[arg(long = "beta-min", group = "lo", allow_negative_numbers = true)]
        beta_min: Option<f64>,
        #[arg(long = "beta-min-pi", group = "lo", allow_negative_numbers = true)]
        beta_min_pi: Option<f64>,
        #[arg(long = "beta-max", group = "hi", allow_negative_numbers = true)]
        beta_max: Option<f64>,
        #[arg(long = "beta-max-pi", group = "hi", allow_negative_numbers = true)]
        beta_max_pi: Option<f64>,
        #[arg(long, default_value_t = 100)]
        steps: usize,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Samples of the first-variation functional I(z) and its minimum.
    Variation {
        /// Restrict to one direction; both --a and --b are needed.
        #[arg(long, requires = "b", allow_negative_numbers = true)]
        a: Option<f64>,
        #[arg(long, requires = "a", allow_negative_numbers = true)]
        b: Option<f64>,
        #[arg(long = "z-steps", default_value_t = 72)]
        z_steps: usize,
        #[arg(long = "b-steps", default_value_t = 10)]
        b_steps: usize,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Recomputes the tabulated bilinear terms; exits 3 on any mismatch.
    VerifyAppendix {
        #[command(flatten)]
        format: FormatArg,
    },
    /// Finite-element eigenvalues of the deformed triangle.
    Solve {
        #[command(flatten)]
        direction: DirectionArg,
        #[arg(long, default_value_t = 0.0)]
        t: f64,
        #[arg(long = "grid-n", default_value_t = 96)]
        grid_n: usize,
        #[arg(long, default_value_t = 3)]
        modes: usize,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Extrapolated slope of the numerical gap at t = 0.
    GapSlope {
        #[command(flatten)]
        direction: DirectionArg,
        /// Decreasing positive deformation parameters.
        #[arg(long = "t-list", value_delimiter = ',', default_values_t = [0.02, 0.01, 0.005])]
        t_list: Vec<f64>,
        #[arg(long = "grid-n", default_value_t = spheregap_core::eigensolver::GAP_SLOPE_GRID)]
        grid_n: usize,
        #[command(flatten)]
        format: FormatArg,
    },
}

/// Why a command did not succeed; each maps to one exit code.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Numerical(String),
    Verification(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Numerical(_) => 2,
            Failure::Verification(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Numerical(m) | Failure::Verification(m) => m,
        }
    }
}

impl From<spheregap_core::Error> for Failure {
    fn from(e: spheregap_core::Error) -> Self {
        use spheregap_core::Error as E;
        match e {
            E::InvalidParameter(_) | E::Domain { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Numerical(e.to_string()),
        }
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("SPHEREGAP_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| Failure::Usage(format!("SPHEREGAP_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Usage(format!("cannot configure thread pool: {e}")))
}

fn pick(radians: Option<f64>, pi_multiple: Option<f64>) -> commands::Angle {
    match (radians, pi_multiple) {
        (Some(r), _) => commands::Angle::Radians(r),
        (_, Some(x)) => commands::Angle::PiMultiple(x),
        _ => unreachable!("clap requires one of the group"),
    }
}

fn run(cli: Cli) -> Result<(output::Report, OutputFormat), Failure> {
    configure_threads()?;
    Ok(match cli.command {
        Command::Spectrum {
            domain,
            beta,
            count,
            format,
        } => (commands::spectrum(domain, beta.radians(), count)?, format.format),
        Command::GapCurve {
            domain,
            beta_min,
            beta_min_pi,
            beta_max,
            beta_max_pi,
            steps,
            format,
        } => {
            let lo = pick(beta_min, beta_min_pi);
            let hi = pick(beta_max, beta_max_pi);
            (commands::gap_curve(domain, lo, hi, steps)?, format.format)
        }
        Command::Variation {
            a,
            b,
            z_steps,
            b_steps,
            format,
        } => (commands::variation(a.zip(b), z_steps, b_steps)?, format.format),
        Command::VerifyAppendix { format } => {
            let report = commands::verify_appendix()?;
            // the table is still printed when verification fails
            let failed = report.rows.iter().filter(|r| r.last() == Some(&output::Cell::Bool(false))).count();
            if failed > 0 {
                emit(&report, format.format)?;
                return Err(Failure::Verification(format!("{failed} appendix rows disagree")));
            }
            (report, format.format)
        }
        Command::Solve {
            direction,
            t,
            grid_n,
            modes,
            format,
        } => (commands::solve(direction.a, direction.b, t, grid_n, modes)?, format.format),
        Command::GapSlope {
            direction,
            t_list,
            grid_n,
            format,
        } => (commands::gap_slope(direction.a, direction.b, &t_list, grid_n)?, format.format),
    })
}

fn emit(report: &output::Report, format: OutputFormat) -> Result<(), Failure> {
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    report
        .write(format, &mut lock)
        .and_then(|_| lock.flush())
        .map_err(|e| Failure::Numerical(format!("cannot write output: {e}")))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli).and_then(|(report, format)| emit(&report, format)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("spheregap: {}", f.message());
            ExitCode::from(f.exit_code())
        }
    }
}
