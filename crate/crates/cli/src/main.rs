//! `birkhoff`: B-angles, γ, γ* and the cosine analog k from the command line.

mod output;

use std::io::{self, Write};
use std::process::ExitCode;

use birkhoff::oracle::{run_suite, SuiteConfig};
use birkhoff::{
    compare_same_base, compare_same_target, isosceles_angle, pythagorean_angle, report, sweep_k, Error,
    Execution, NormSpec, Vector,
};
use clap::{Parser, Subcommand, ValueEnum};

use output::{Angles, ReportView};

#[derive(Parser, Debug)]
#[command(name = "birkhoff", version, about = "Birkhoff orthogonality, B-angles and the cosine analog k")]
struct Cli {
    /// Norm: l1, l2, linf, lp:<p>, wlp:<p>:[w1,..], ip:[[..],..]
    #[arg(long, global = true, default_value = "l2")]
    norm: String,

    /// Absolute tolerance on interval endpoints.
    #[arg(long, global = true, default_value_t = birkhoff::DEFAULT_TOL)]
    tol: f64,

    /// Output format; sweeps default to csv, everything else to human.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Seed for the property suite.
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Human,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify the B-angle from X to Y and report γ, γ*, k.
    Classify {
        #[arg(allow_hyphen_values = true)] x: String,
        #[arg(allow_hyphen_values = true)] y: String,
    },
    /// γ(X, Y) and γ*(X, Y).
    Gamma {
        #[arg(allow_hyphen_values = true)] x: String,
        #[arg(allow_hyphen_values = true)] y: String,
    },
    /// The cosine analog k(X, Y).
    Cosine {
        #[arg(allow_hyphen_values = true)] x: String,
        #[arg(allow_hyphen_values = true)] y: String,
    },
    /// Compare the angle X→Y1 with X→Y2.
    CompareBase {
        #[arg(allow_hyphen_values = true)] x: String,
        #[arg(allow_hyphen_values = true)] y1: String,
        #[arg(allow_hyphen_values = true)] y2: String,
        /// Band within which two γ̂ values count as equal.
        #[arg(long, default_value_t = birkhoff::DEFAULT_TIE_TOL)]
        tie_tol: f64,
    },
    /// Compare the angle X1→Y with X2→Y.
    CompareTarget {
        #[arg(allow_hyphen_values = true)] x1: String,
        #[arg(allow_hyphen_values = true)] x2: String,
        #[arg(allow_hyphen_values = true)] y: String,
        #[arg(long, default_value_t = birkhoff::DEFAULT_TIE_TOL)]
        tie_tol: f64,
    },
    /// k(X, (cos θ, sin θ)) on an even grid of STEPS angles; planar norms only.
    #[command(allow_negative_numbers = true)]
    Sweep {
        #[arg(allow_hyphen_values = true)] x: String,
        theta_min: f64,
        theta_max: f64,
        steps: usize,
    },
    /// The Pythagorean and isosceles angles between X and Y.
    Angles {
        #[arg(allow_hyphen_values = true)] x: String,
        #[arg(allow_hyphen_values = true)] y: String,
    },
    /// Run the randomized property suite over the built-in norms.
    Verify {
        #[arg(long, default_value_t = 500)]
        trials: usize,
        /// Add a non-convex gauge that the oracle checks must reject.
        #[arg(long)]
        inject_bad_norm: bool,
        /// Run trials sequentially.
        #[arg(long)]
        sequential: bool,
    },
}

/// Failure of a command, carrying its exit status.
enum Failure {
    Usage(String),
    Domain(String),
    Property,
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::ZeroVector | Error::Domain(_) | Error::NonConvergence(_) => Failure::Domain(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn vector(label: &str, text: &str) -> Result<Vector, Failure> {
    text.parse().map_err(|e: Error| match e {
        Error::ZeroVector => Failure::Domain(format!("{label}: {e}")),
        _ => Failure::Usage(format!("{label}: {e}")),
    })
}

fn sweep_grid(min: f64, max: f64, steps: usize) -> Result<Vec<f64>, Failure> {
    if steps < 2 {
        return Err(Failure::Usage(format!("sweep needs at least 2 steps, got {steps}")));
    }
    if !(min.is_finite() && max.is_finite() && min < max) {
        return Err(Failure::Usage(format!("sweep range [{min}, {max}] is not an increasing finite interval")));
    }
    let last = (steps - 1) as f64;
    Ok((0..steps)
        .map(|i| if i == steps - 1 { max } else { min + (max - min) * i as f64 / last })
        .collect())
}

fn run(cli: Cli, out: &mut impl Write) -> Result<(), Failure> {
    let norm: NormSpec = cli.norm.parse().map_err(|e: Error| Failure::Usage(format!("--norm: {e}")))?;
    if !(cli.tol.is_finite() && cli.tol > 0.0) {
        return Err(Failure::Usage(format!("--tol must be positive and finite, got {}", cli.tol)));
    }
    let tol = cli.tol;
    let format = cli.format;
    let pair_format = format.unwrap_or(Format::Human);

    let pair = |x: &str, y: &str, view: ReportView, out: &mut dyn Write| -> Result<(), Failure> {
        let (x, y) = (vector("X", x)?, vector("Y", y)?);
        let r = report(&norm, &x, &y, tol)?;
        match pair_format {
            Format::Json => output::report_json(out, &r, view)?,
            Format::Csv => output::report_csv(out, &r, view)?,
            Format::Human => output::report_human(out, &r, view)?,
        }
        Ok(())
    };

    match cli.command {
        Command::Classify { x, y } => pair(&x, &y, ReportView::Full, out)?,
        Command::Gamma { x, y } => pair(&x, &y, ReportView::Gamma, out)?,
        Command::Cosine { x, y } => pair(&x, &y, ReportView::Cosine, out)?,
        Command::CompareBase { x, y1, y2, tie_tol } => {
            let (x, y1, y2) = (vector("X", &x)?, vector("Y1", &y1)?, vector("Y2", &y2)?);
            let c = compare_same_base(&norm, &x, &y1, &y2, tie_tol, tol)?;
            match pair_format {
                Format::Json => output::json(out, &c)?,
                Format::Csv => output::comparison_csv(out, &c)?,
                Format::Human => output::comparison_human(out, &c)?,
            }
        }
        Command::CompareTarget { x1, x2, y, tie_tol } => {
            let (x1, x2, y) = (vector("X1", &x1)?, vector("X2", &x2)?, vector("Y", &y)?);
            let c = compare_same_target(&norm, &x1, &x2, &y, tie_tol, tol)?;
            match pair_format {
                Format::Json => output::json(out, &c)?,
                Format::Csv => output::comparison_csv(out, &c)?,
                Format::Human => output::comparison_human(out, &c)?,
            }
        }
        Command::Sweep { x, theta_min, theta_max, steps } => {
            let x = vector("X", &x)?;
            let grid = sweep_grid(theta_min, theta_max, steps)?;
            let rows = sweep_k(&norm, &x, &grid, tol, Execution::default())?;
            match format.unwrap_or(Format::Csv) {
                Format::Json => output::json(out, &rows)?,
                Format::Csv => output::sweep_csv(out, &rows)?,
                Format::Human => output::sweep_human(out, &rows)?,
            }
        }
        Command::Angles { x, y } => {
            let (x, y) = (vector("X", &x)?, vector("Y", &y)?);
            let a = Angles { pythagorean: pythagorean_angle(&norm, &x, &y)?, isosceles: isosceles_angle(&norm, &x, &y)? };
            match pair_format {
                Format::Json => output::json(out, &a)?,
                Format::Csv => output::angles_csv(out, &a)?,
                Format::Human => writeln!(out, "A_P={} A_I={}", a.pythagorean, a.isosceles)?,
            }
        }
        Command::Verify { trials, inject_bad_norm, sequential } => {
            if trials == 0 {
                return Err(Failure::Usage("--trials must be at least 1".into()));
            }
            let config = SuiteConfig {
                trials,
                seed: cli.seed.unwrap_or(SuiteConfig::default().seed),
                inject_bad_norm,
                exec: if sequential { Execution::Sequential } else { Execution::default() },
                ..SuiteConfig::default()
            };
            let suite = run_suite(&config);
            match pair_format {
                Format::Json => output::json(out, &suite)?,
                Format::Csv => output::suite_csv(out, &suite)?,
                Format::Human => output::suite_human(out, &suite)?,
            }
            if !suite.all_passed() {
                out.flush()?;
                return Err(Failure::Property);
            }
        }
    }
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    match run(cli, &mut out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Property) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
