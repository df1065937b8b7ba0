//! Batch front end: problem-file ingestion, command dispatch, and
//! deterministic report/CSV emission.
//!
//! Exit codes: 0 success (hypotheses hold), 1 check failed or resonance
//! (report still emitted), 2 usage or parse error, 3 numerical failure
//! (boundary roots or non-convergence after retries).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use apdelay_core::apfun::{beurling_estimate, parse_rational, Frequency, SampledSignal};
use apdelay_core::chroots::{find_roots, sigma_i, Region};
use apdelay_core::error::Error;
use apdelay_core::massera::{
    check_conditions_with, decompose_solution, harmonic_solve, nonexistence_certificate,
    periodic_nonexistence_certificate, ForcedProblem,
};
use apdelay_core::schema::{
    canonical_json, certify_report, check_report, decompose_report, parse_signal_csv,
    roots_report, root_set_csv, sigma_i_report, simulate_report, solve_report, spectrum_report,
    trajectory_csv, ProblemFile,
};
use apdelay_core::simulate::{compare, integrate, History};

#[derive(Parser)]
#[command(name = "apdelay", version, about = "Almost periodic solutions of linear delay equations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct OutputArgs {
    /// Write the result to this file in addition to standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// File format for --out.
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct WindowArgs {
    /// Half-width of the imaginary-axis window (defaults to the problem
    /// file's option, then 10).
    #[arg(long)]
    xi_max: Option<f64>,
    /// Tolerance for classifying a root as lying on the axis (defaults to
    /// the problem file's option, then 1e-6).
    #[arg(long)]
    axis_tol: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Characteristic roots in a rectangle.
    #[command(allow_negative_numbers = true)]
    Roots {
        problem: PathBuf,
        #[arg(long, default_value_t = -1.0)]
        re_min: f64,
        #[arg(long, default_value_t = 1.0)]
        re_max: f64,
        #[arg(long, default_value_t = -10.0)]
        im_min: f64,
        #[arg(long, default_value_t = 10.0)]
        im_max: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Imaginary-axis characteristic set within a window.
    SigmaI {
        problem: PathBuf,
        #[command(flatten)]
        window: WindowArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Existence-theorem hypothesis report.
    Check {
        problem: PathBuf,
        #[command(flatten)]
        window: WindowArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Harmonic-balance solution with residuals.
    Solve {
        problem: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Split the harmonic-balance solution by a frequency set.
    Decompose {
        problem: PathBuf,
        /// Frequency to place in the first part, as comma-separated rational
        /// coordinates over the generator list (repeatable).
        #[arg(long = "freq")]
        freqs: Vec<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Non-existence certificate for k-quasi-periodic or periodic solutions.
    Certify {
        problem: PathBuf,
        /// Certify against k-quasi-periodic solutions.
        #[arg(long)]
        k: Option<usize>,
        /// Certify against solutions of period tau = r * 2*pi, r rational.
        #[arg(long)]
        period_two_pi: Option<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Integrate the constructed solution from its own history and compare.
    Simulate {
        problem: PathBuf,
        /// Integration horizon (defaults to the problem file's option, then 20).
        #[arg(long = "T")]
        t_end: Option<f64>,
        /// Step size (defaults to the problem file's option, then a quarter
        /// of the smallest lag divided by two, or 0.01 without delays).
        #[arg(long)]
        dt: Option<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Beurling spectrum estimate of a sampled signal CSV.
    #[command(allow_negative_numbers = true)]
    Spectrum {
        signal: PathBuf,
        #[arg(long)]
        grid_min: f64,
        #[arg(long)]
        grid_max: f64,
        #[arg(long)]
        grid_step: f64,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        #[arg(long, default_value_t = 1e-3)]
        threshold: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::BoundaryRoot { .. }
        | Error::NoConvergence { .. }
        | Error::SingularAtPoint { .. }
        | Error::EigenvalueOnContour => 3,
        Error::Resonance { .. } => 1,
        _ => 2,
    }
}

fn load_problem(path: &PathBuf) -> Result<(ForcedProblem<f64>, ProblemFile), Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))?;
    let file = ProblemFile::parse(&text)?;
    let (p, _basis) = file.to_problem()?;
    Ok((p, file))
}

fn emit(
    report: &serde_json::Value,
    csv: Option<String>,
    output: &OutputArgs,
) -> Result<(), Error> {
    let json = canonical_json(report);
    print!("{json}");
    if let Some(path) = &output.out {
        let payload = match output.format {
            Format::Json => json,
            Format::Csv => csv.ok_or_else(|| {
                Error::Invalid("this command has no CSV representation".into())
            })?,
        };
        std::fs::write(path, payload)
            .map_err(|e| Error::Invalid(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn run(command: Command) -> Result<u8, Error> {
    match command {
        Command::Roots { problem, re_min, re_max, im_min, im_max, output } => {
            let (p, _) = load_problem(&problem)?;
            let region = Region::new(re_min, re_max, im_min, im_max)?;
            let set = find_roots(p.sys(), &region, 1e-10)?;
            emit(&roots_report(&set), Some(root_set_csv(&set)), &output)?;
            Ok(0)
        }
        Command::SigmaI { problem, window, output } => {
            let (p, file) = load_problem(&problem)?;
            let (xi_max, axis_tol) = window_defaults(&window, &file);
            let w = sigma_i(p.sys(), xi_max, axis_tol)?;
            emit(&sigma_i_report(&w), None, &output)?;
            Ok(0)
        }
        Command::Check { problem, window, output } => {
            let (p, file) = load_problem(&problem)?;
            let (xi_max, axis_tol) = window_defaults(&window, &file);
            let report = check_conditions_with(&p, xi_max, axis_tol)?;
            let ok = report.solvable_directly;
            emit(&check_report(&report), None, &output)?;
            Ok(if ok { 0 } else { 1 })
        }
        Command::Solve { problem, output } => {
            let (p, _) = load_problem(&problem)?;
            match harmonic_solve(&p) {
                Ok(bundle) => {
                    emit(&solve_report(&bundle), None, &output)?;
                    Ok(0)
                }
                Err(Error::Resonance { lambda }) => {
                    let report = serde_json::json!({
                        "schema_version": 1,
                        "command": "solve",
                        "error": {"type": "resonance", "lambda": lambda},
                    });
                    emit(&report, None, &output)?;
                    Ok(1)
                }
                Err(e) => Err(e),
            }
        }
        Command::Decompose { problem, freqs, output } => {
            let (p, _) = load_problem(&problem)?;
            let basis = p.forcing().basis().clone();
            let mut lambda1 = Vec::with_capacity(freqs.len());
            for spec in &freqs {
                let coords = spec
                    .split(',')
                    .map(parse_rational)
                    .collect::<Result<Vec<_>, _>>()?;
                lambda1.push(Frequency::new(&basis, coords)?);
            }
            let bundle = harmonic_solve(&p)?;
            let (u1, u2) = decompose_solution(&bundle.u, &lambda1)?;
            emit(&decompose_report(&u1, &u2), None, &output)?;
            Ok(0)
        }
        Command::Certify { problem, k, period_two_pi, output } => {
            let (p, _) = load_problem(&problem)?;
            let outcome = match (k, period_two_pi) {
                (Some(k), None) => nonexistence_certificate(&p, k)?,
                (None, Some(r)) => {
                    let r = parse_rational(&r)?;
                    let base = apdelay_core::apfun::period_base_two_pi_multiple(
                        p.forcing().basis(),
                        &r,
                    )?;
                    periodic_nonexistence_certificate(&p, &base)?
                }
                _ => {
                    return Err(Error::Invalid(
                        "certify needs exactly one of --k or --period-two-pi".into(),
                    ))
                }
            };
            emit(&certify_report(&outcome), None, &output)?;
            Ok(0)
        }
        Command::Simulate { problem, t_end, dt, output } => {
            let (p, file) = load_problem(&problem)?;
            let t_end = t_end.or(file.options.t_end).unwrap_or(20.0);
            let dt = dt.or(file.options.dt).unwrap_or_else(|| {
                p.sys().min_lag().map_or(0.01, |lag| lag / 8.0)
            });
            let bundle = harmonic_solve(&p)?;
            let traj = integrate(
                p.sys(),
                p.forcing(),
                &History::new(bundle.u.clone()),
                t_end,
                dt,
            )?;
            let deviation = compare(&traj, &bundle.u)?;
            emit(
                &simulate_report(&traj, deviation),
                Some(trajectory_csv(&traj)),
                &output,
            )?;
            Ok(0)
        }
        Command::Spectrum {
            signal,
            grid_min,
            grid_max,
            grid_step,
            eps,
            threshold,
            output,
        } => {
            let text = std::fs::read_to_string(&signal)
                .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", signal.display())))?;
            let g: SampledSignal<f64> = parse_signal_csv(&text)?;
            if !(grid_step > 0.0 && grid_max >= grid_min) {
                return Err(Error::Invalid(
                    "need grid_step > 0 and grid_max >= grid_min".into(),
                ));
            }
            let n = ((grid_max - grid_min) / grid_step).round() as usize;
            let grid: Vec<f64> = (0..=n).map(|i| grid_min + grid_step * i as f64).collect();
            let report = beurling_estimate(&g, &grid, eps, threshold)?;
            let mut csv = String::from("xi,response\n");
            for (xi, r) in grid.iter().zip(&report.responses) {
                csv.push_str(&format!(
                    "{},{}\n",
                    apdelay_core::schema::fmt_float(*xi),
                    apdelay_core::schema::fmt_float(*r)
                ));
            }
            emit(&spectrum_report(&report, &grid), Some(csv), &output)?;
            Ok(0)
        }
    }
}

fn window_defaults(window: &WindowArgs, file: &ProblemFile) -> (f64, f64) {
    let xi_max = window.xi_max.or(file.options.xi_max).unwrap_or(10.0);
    let axis_tol = window.axis_tol.or(file.options.axis_tol).unwrap_or(1e-6);
    (xi_max, axis_tol)
}
