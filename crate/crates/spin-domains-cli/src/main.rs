//! Command-line front end: trajectory data, steady-state reports, sweeps
//! over the larger domain size, and the oracle verification suite.
//!
//! Exit codes: 0 success, 1 verification or runtime failure, 2 usage error.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use spin_domains::dynamics::{self, evolve_to_steady, integrate, EvolutionParams};
use spin_domains::oracle::{build_liouvillian, evolve_oracle};
use spin_domains::state::{
    from_tensor_product, initial_state, initial_state_tensor_product, to_tensor_product,
    BlockLayout, CMatrix, Trajectory,
};
use spin_domains::steady::{report_from_state, steady_state, steady_state_matrix};

#[derive(Parser)]
#[command(
    name = "spin-domains",
    about = "Relaxation, steady states, and entanglement of two collective spin domains \
             coupled to a common reservoir",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate the block equations of motion and emit element trajectories.
    Evolve(EvolveArgs),
    /// Emit the steady-state report for one configuration.
    Steady(SteadyArgs),
    /// Tabulate steady-state observables over a range of n_a.
    Sweep(SweepArgs),
    /// Run the oracle verification suite and report residuals.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct EvolveArgs {
    /// Number of spins in domain A.
    #[arg(long)]
    na: u32,
    /// Number of spins in domain B.
    #[arg(long)]
    nb: u32,
    /// Damping rate; outputs use t_tilde = gamma * t either way.
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
    /// End of the run in dimensionless time.
    #[arg(long = "t-end", default_value_t = 5.0)]
    t_end: f64,
    /// Integrator step in dimensionless time (default 1e-3 * min(1, 1/na)).
    #[arg(long)]
    step: Option<f64>,
    /// Comma-separated element labels like rho_2_5 (1-based flat indices);
    /// all elements when omitted.
    #[arg(long, value_delimiter = ',')]
    elements: Vec<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args)]
struct SteadyArgs {
    #[arg(long)]
    na: u32,
    #[arg(long)]
    nb: u32,
    /// Recompute by long-time integration instead of the closed form.
    #[arg(long)]
    numeric: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct SweepArgs {
    /// Range of domain-A sizes, inclusive: `1..20` or a single integer.
    #[arg(long)]
    na: String,
    #[arg(long)]
    nb: u32,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args)]
struct VerifyArgs {
    /// Residual tolerance applied to every check.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Validate the general-block steady-state structure against the oracle
    /// instead of the default equivalence suite.
    #[arg(long)]
    conjecture: bool,
    /// Domain-A sizes for --conjecture, e.g. `3..5`.
    #[arg(long)]
    na: Option<String>,
    /// Domain-B size for --conjecture.
    #[arg(long)]
    nb: Option<u32>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Evolve(args) => cmd_evolve(args),
        Command::Steady(args) => cmd_steady(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Verify(args) => cmd_verify(args),
    };
    match outcome {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("{}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

struct Failure {
    code: u8,
    message: String,
}

fn usage_error(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn run_error(error: spin_domains::Error) -> Failure {
    Failure {
        code: 1,
        message: error.to_string(),
    }
}

/// 17 significant digits, fixed exponent notation, for byte-stable output.
fn fmt_float(value: f64) -> String {
    format!("{value:.16e}")
}

fn emit(out: Option<&PathBuf>, content: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, content).map_err(|e| Failure {
            code: 1,
            message: format!("cannot write {}: {e}", path.display()),
        }),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn parse_range(text: &str) -> Result<(u32, u32), Failure> {
    let parsed = if let Some((lo, hi)) = text.split_once("..") {
        match (lo.parse::<u32>(), hi.parse::<u32>()) {
            (Ok(lo), Ok(hi)) => Some((lo, hi)),
            _ => None,
        }
    } else {
        text.parse::<u32>().ok().map(|v| (v, v))
    };
    match parsed {
        Some((lo, hi)) if lo <= hi => Ok((lo, hi)),
        _ => Err(usage_error(format!(
            "invalid range {text:?}: expected lo..hi with lo <= hi, or a single integer"
        ))),
    }
}

/// Parse `rho_<i>_<j>` into 0-based indices, checked against `dim`.
fn parse_element(label: &str, dim: usize) -> Result<(usize, usize), Failure> {
    let bad = || usage_error(format!("invalid element label: {label}"));
    let rest = label.strip_prefix("rho_").ok_or_else(bad)?;
    let (i, j) = rest.split_once('_').ok_or_else(bad)?;
    let i: usize = i.parse().map_err(|_| bad())?;
    let j: usize = j.parse().map_err(|_| bad())?;
    if i < 1 || j < 1 || i > dim || j > dim {
        return Err(bad());
    }
    Ok((i - 1, j - 1))
}

fn cmd_evolve(args: EvolveArgs) -> Result<ExitCode, Failure> {
    let layout =
        BlockLayout::for_domains(args.na, args.nb).map_err(|e| usage_error(e.to_string()))?;
    let dim = layout.dim();

    let labels: Vec<String> = if args.elements.is_empty() {
        (1..=dim)
            .flat_map(|i| (1..=dim).map(move |j| format!("rho_{i}_{j}")))
            .collect()
    } else {
        args.elements.clone()
    };
    let mut selections = Vec::with_capacity(labels.len());
    for label in &labels {
        selections.push(parse_element(label, dim)?);
    }

    let params = EvolutionParams {
        gamma: args.gamma,
        t_end: args.t_end,
        step: args
            .step
            .unwrap_or_else(|| dynamics::recommended_step(args.na)),
        sample_every: sample_stride(args.t_end, args.step, args.na),
    };
    params.validate().map_err(|e| usage_error(e.to_string()))?;
    let trajectory = integrate(&initial_state(&layout), &params).map_err(run_error)?;

    let content = match args.format {
        Format::Csv => trajectory_csv(&trajectory, &labels, &selections),
        Format::Json => trajectory_json(&trajectory, args.na, args.nb, &labels, &selections),
    };
    emit(args.out.as_ref(), &content)?;
    Ok(ExitCode::SUCCESS)
}

fn sample_stride(t_end: f64, step: Option<f64>, n_a: u32) -> usize {
    let step = step.unwrap_or_else(|| dynamics::recommended_step(n_a));
    let n_steps = (t_end / step).ceil().max(1.0) as usize;
    (n_steps / 500).max(1)
}

fn trajectory_csv(
    trajectory: &Trajectory,
    labels: &[String],
    selections: &[(usize, usize)],
) -> String {
    let mut out = String::from("t_tilde");
    for label in labels {
        let _ = write!(out, ",re_{label},im_{label}");
    }
    out.push('\n');
    for (t, rho) in trajectory.times().iter().zip(trajectory.states()) {
        let _ = write!(out, "{}", fmt_float(*t));
        for &(i, j) in selections {
            let z = rho.data()[(i, j)];
            let _ = write!(out, ",{},{}", fmt_float(z.re), fmt_float(z.im));
        }
        out.push('\n');
    }
    out
}

fn trajectory_json(
    trajectory: &Trajectory,
    n_a: u32,
    n_b: u32,
    labels: &[String],
    selections: &[(usize, usize)],
) -> String {
    let times: Vec<f64> = trajectory.times().to_vec();
    let elements: Vec<serde_json::Value> = labels
        .iter()
        .zip(selections)
        .map(|(label, &(i, j))| {
            let re: Vec<f64> = trajectory
                .states()
                .iter()
                .map(|s| s.data()[(i, j)].re)
                .collect();
            let im: Vec<f64> = trajectory
                .states()
                .iter()
                .map(|s| s.data()[(i, j)].im)
                .collect();
            serde_json::json!({"label": label, "re": re, "im": im})
        })
        .collect();
    let value = serde_json::json!({
        "n_a": n_a,
        "n_b": n_b,
        "times": times,
        "elements": elements,
    });
    let mut text = serde_json::to_string_pretty(&value).expect("trajectory serialization");
    text.push('\n');
    text
}

fn cmd_steady(args: SteadyArgs) -> Result<ExitCode, Failure> {
    let layout =
        BlockLayout::for_domains(args.na, args.nb).map_err(|e| usage_error(e.to_string()))?;
    let report = if args.numeric {
        let (state, _) =
            evolve_to_steady(&initial_state(&layout), 1e-12, 200.0).map_err(run_error)?;
        report_from_state(state).map_err(run_error)?
    } else {
        steady_state(&layout).map_err(run_error)?
    };

    let content = match args.format {
        Format::Json => {
            let mut text = report.to_json();
            text.push('\n');
            text
        }
        Format::Csv => {
            let mut header = String::from("n_a,n_b,jz_a,jz_b,negativity,entropy");
            for k in 1..=report.weights.len() {
                let _ = write!(header, ",weight_{k}");
            }
            let mut row = format!(
                "{},{},{},{},{},{}",
                report.n_a,
                report.n_b,
                fmt_float(report.jz_a),
                fmt_float(report.jz_b),
                fmt_float(report.negativity),
                fmt_float(report.entropy)
            );
            for w in &report.weights {
                let _ = write!(row, ",{}", fmt_float(*w));
            }
            format!("{header}\n{row}\n")
        }
    };
    emit(args.out.as_ref(), &content)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_sweep(args: SweepArgs) -> Result<ExitCode, Failure> {
    let (lo, hi) = parse_range(&args.na)?;
    if lo < args.nb.max(1) {
        return Err(usage_error(format!(
            "sweep range starts at n_a = {lo} below n_b = {}",
            args.nb
        )));
    }
    let mut rows = Vec::with_capacity((hi - lo + 1) as usize);
    for n_a in lo..=hi {
        let layout =
            BlockLayout::for_domains(n_a, args.nb).map_err(|e| usage_error(e.to_string()))?;
        rows.push(steady_state(&layout).map_err(run_error)?);
    }

    let content = match args.format {
        Format::Csv => {
            let mut out = String::from("n_a,jz_a,jz_b,negativity,entropy\n");
            for r in &rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    r.n_a,
                    fmt_float(r.jz_a),
                    fmt_float(r.jz_b),
                    fmt_float(r.negativity),
                    fmt_float(r.entropy)
                );
            }
            out
        }
        Format::Json => {
            let values: Vec<serde_json::Value> = rows
                .iter()
                .map(|r| {
                    serde_json::json!({
                        "n_a": r.n_a,
                        "jz_a": r.jz_a,
                        "jz_b": r.jz_b,
                        "negativity": r.negativity,
                        "entropy": r.entropy,
                    })
                })
                .collect();
            let mut text =
                serde_json::to_string_pretty(&serde_json::Value::Array(values)).expect("sweep");
            text.push('\n');
            text
        }
    };
    emit(args.out.as_ref(), &content)?;
    Ok(ExitCode::SUCCESS)
}

struct Check {
    name: String,
    residual: f64,
    tolerance: f64,
}

impl Check {
    fn passed(&self) -> bool {
        self.residual <= self.tolerance
    }
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode, Failure> {
    if !(args.tol.is_finite() && args.tol > 0.0) {
        return Err(usage_error(format!(
            "tolerance {} must be positive",
            args.tol
        )));
    }
    let checks = if args.conjecture {
        let nb = args
            .nb
            .ok_or_else(|| usage_error("--conjecture requires --nb"))?;
        let (lo, hi) = parse_range(
            args.na
                .as_deref()
                .ok_or_else(|| usage_error("--conjecture requires --na lo..hi"))?,
        )?;
        if lo < nb.max(1) {
            return Err(usage_error(format!(
                "conjecture range starts at n_a = {lo} below n_b = {nb}"
            )));
        }
        conjecture_checks(lo, hi, nb, args.tol)?
    } else {
        equivalence_checks(args.tol)?
    };

    let all_pass = checks.iter().all(Check::passed);
    let listed: Vec<serde_json::Value> = checks
        .iter()
        .map(|c| {
            serde_json::json!({
                "name": c.name,
                "residual": c.residual,
                "tolerance": c.tolerance,
                "pass": c.passed(),
            })
        })
        .collect();
    let value = serde_json::json!({
        "suite": if args.conjecture { "conjecture" } else { "equivalence" },
        "checks": listed,
        "passed": all_pass,
    });
    let mut text = serde_json::to_string_pretty(&value).expect("verify serialization");
    text.push('\n');
    emit(args.out.as_ref(), &text)?;
    Ok(if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn frobenius(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).map(|z| z.norm_sqr()).sum().sqrt()
}

/// Default suite: reduced-engine trajectories against the Liouvillian
/// propagator, long-time block weights, and dark-state stationarity.
fn equivalence_checks(tol: f64) -> Result<Vec<Check>, Failure> {
    let mut checks = Vec::new();
    for (n_a, n_b) in [(3u32, 1u32), (4, 1), (3, 2), (4, 2)] {
        let layout = BlockLayout::for_domains(n_a, n_b).map_err(|e| usage_error(e.to_string()))?;
        let liouvillian = build_liouvillian(n_a, n_b, 1.0, 0.0).map_err(run_error)?;
        let rho0_tp = initial_state_tensor_product(n_a, n_b).map_err(run_error)?;

        for t in [0.1, 0.5, 1.0, 5.0] {
            let params = EvolutionParams {
                gamma: 1.0,
                t_end: t,
                step: dynamics::recommended_step(n_a),
                sample_every: usize::MAX,
            };
            let reduced = integrate(&initial_state(&layout), &params).map_err(run_error)?;
            let reduced_tp = to_tensor_product(reduced.last()).map_err(run_error)?;
            let oracle = evolve_oracle(&liouvillian, &rho0_tp, t).map_err(run_error)?;
            checks.push(Check {
                name: format!("equivalence_na{n_a}_nb{n_b}_t{t}"),
                residual: frobenius(reduced_tp.data(), oracle.data()),
                tolerance: tol,
            });
        }

        let evolved = evolve_oracle(&liouvillian, &rho0_tp, 20.0).map_err(run_error)?;
        let ds = from_tensor_product(&evolved).map_err(run_error)?;
        let predicted = steady_state_matrix(&layout);
        checks.push(Check {
            name: format!("steady_weights_na{n_a}_nb{n_b}"),
            residual: (ds.data() - predicted.data()).map(|z| z.norm()).max(),
            tolerance: tol,
        });

        let dark_residual = (0..layout.num_blocks())
            .map(|block| {
                let mut data = CMatrix::zeros(layout.dim(), layout.dim());
                let p = layout.bottom_index(block);
                data[(p, p)] = num_complex::Complex64::new(1.0, 0.0);
                let projector = spin_domains::state::DensityMatrix::new(
                    data,
                    spin_domains::state::Basis::DirectSum(layout.clone()),
                )
                .expect("projector matches layout");
                let tp = to_tensor_product(&projector).expect("conversion");
                liouvillian.residual(&tp)
            })
            .fold(0.0, f64::max);
        checks.push(Check {
            name: format!("dark_states_na{n_a}_nb{n_b}"),
            residual: dark_residual,
            tolerance: tol,
        });
    }
    Ok(checks)
}

/// Steady-state structure for general n_b: oracle long-time state against
/// the dark-state mixture carrying the initial block weights.
fn conjecture_checks(lo: u32, hi: u32, n_b: u32, tol: f64) -> Result<Vec<Check>, Failure> {
    let mut checks = Vec::new();
    for n_a in lo..=hi {
        let layout = BlockLayout::for_domains(n_a, n_b).map_err(|e| usage_error(e.to_string()))?;
        let liouvillian = build_liouvillian(n_a, n_b, 1.0, 0.0).map_err(run_error)?;
        let rho0_tp = initial_state_tensor_product(n_a, n_b).map_err(run_error)?;
        let evolved = evolve_oracle(&liouvillian, &rho0_tp, 20.0).map_err(run_error)?;
        let ds = from_tensor_product(&evolved).map_err(run_error)?;
        let predicted = steady_state_matrix(&layout);
        checks.push(Check {
            name: format!("conjecture_na{n_a}_nb{n_b}"),
            residual: frobenius(ds.data(), predicted.data()),
            tolerance: tol,
        });
    }
    Ok(checks)
}
