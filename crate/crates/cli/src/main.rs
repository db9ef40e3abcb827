//! `gevfit`: fit generalized extreme value models by profile likelihood,
//! simulate samples, dump profile curves, and run the verification-lab
//! experiments.
//!
//! Exit codes: 0 success, 1 usage/input error, 2 numerical failure.

mod ingest;

use std::io::Read;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gevfit_core::dist::sample;
use gevfit_core::emit::{csv_float, fit_report_json};
use gevfit_core::inference::infer;
use gevfit_core::profile::curve;
use gevfit_core::special::GammaDerivOrder;
use gevfit_core::{fit, DataSample, Error, GevParams, SearchConfig};
use gevfit_lab::{
    boundary_divergence_check, figure2_report, pseudo_lln_experiment, rate_experiment,
    seitz_experiment, uniform_consistency_experiment, ExperimentConfig, ExperimentReport,
};
use ingest::{BlockSpec, ColumnSelector};

#[derive(Parser)]
#[command(
    name = "gevfit",
    version,
    about = "GEV maximum-likelihood fitting via profile likelihood"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit the three GEV parameters to a data column.
    Fit(FitArgs),
    /// Evaluate the profile likelihood on a shape grid and emit the curve.
    Profile(ProfileArgs),
    /// Draw a seeded sample and emit it as CSV.
    Simulate(SimulateArgs),
    /// Run a verification-lab experiment and write its report files.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct InputArgs {
    /// Input CSV path; '-' or omitted reads standard input.
    #[arg(long)]
    input: Option<String>,
    /// Column to read: header name or zero-based index.
    #[arg(long, default_value = "value")]
    column: String,
    /// Reduce the raw series to block maxima of this window length first.
    #[arg(long, default_value_t = 1)]
    block_size: usize,
    /// Keep a trailing partial block instead of dropping it.
    #[arg(long, default_value_t = false)]
    keep_partial: bool,
}

impl InputArgs {
    fn load(&self) -> Result<DataSample, CliError> {
        let text = match self.input.as_deref() {
            None | Some("-") => {
                let mut buf = String::new();
                std::io::stdin()
                    .read_to_string(&mut buf)
                    .map_err(CliError::Io)?;
                buf
            }
            Some(path) => std::fs::read_to_string(path).map_err(CliError::Io)?,
        };
        let spec = BlockSpec {
            block_size: self.block_size,
            drop_partial: !self.keep_partial,
        };
        ingest::ingest(&text, &ColumnSelector::parse(&self.column), &spec)
            .map_err(CliError::Numeric)
    }
}

#[derive(Args)]
struct SearchArgs {
    /// Lower end of the shape search interval.
    #[arg(long, default_value_t = -0.99, allow_negative_numbers = true)]
    xi_min: f64,
    /// Upper end of the shape search interval (clamped to n - 1 - 1e-6).
    #[arg(long, default_value_t = 5.0, allow_negative_numbers = true)]
    xi_max: f64,
    /// Number of coarse grid points.
    #[arg(long, default_value_t = 256)]
    grid: usize,
    /// Relative tolerance for the slice root solve.
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
}

impl SearchArgs {
    fn config(&self) -> SearchConfig {
        SearchConfig {
            xi_lower: self.xi_min,
            xi_upper: self.xi_max,
            coarse_grid_size: self.grid,
            beta_tol: self.tol,
            ..Default::default()
        }
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Write here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Output format; each subcommand has its natural default.
    #[arg(long, value_enum)]
    format: Option<Format>,
}

impl OutputArgs {
    fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    fn emit(&self, content: &str) -> Result<(), CliError> {
        match &self.output {
            Some(path) => std::fs::write(path, content).map_err(CliError::Io),
            None => {
                print!("{content}");
                Ok(())
            }
        }
    }
}

#[derive(Args)]
struct FitArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    search: SearchArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct ProfileArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    search: SearchArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    tau: f64,
    #[arg(long, allow_negative_numbers = true)]
    mu: f64,
    #[arg(long, allow_negative_numbers = true)]
    xi: f64,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExperimentName {
    Rate,
    PseudoLln,
    Uniform,
    Seitz,
    Boundary,
    Figure2,
}

#[derive(Args)]
struct VerifyArgs {
    /// Which experiment to run.
    #[arg(value_enum)]
    experiment: ExperimentName,
    /// True scale / location / shape of the simulated replicates.
    #[arg(long, default_value_t = 0.5)]
    tau: f64,
    #[arg(long, default_value_t = 20.0, allow_negative_numbers = true)]
    mu: f64,
    #[arg(long, default_value_t = 0.2, allow_negative_numbers = true)]
    xi: f64,
    /// Sample-size grid, comma separated.
    #[arg(long, default_value = "1000,10000")]
    n_grid: String,
    #[arg(long, default_value_t = 100)]
    replicates: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Rate exponent gamma (rate experiment).
    #[arg(long, default_value_t = 0.5)]
    gamma: f64,
    /// Power term k (pseudo-lln).
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    k: i32,
    /// Power term a (pseudo-lln).
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    a: i32,
    /// Log-power order b (pseudo-lln, uniform).
    #[arg(long, default_value_t = 0)]
    b: u8,
    /// Power interval lower end m (uniform).
    #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
    alpha_m: f64,
    /// Power interval upper end M (uniform).
    #[arg(
        long = "alpha-upper",
        default_value_t = 3.0,
        allow_negative_numbers = true
    )]
    alpha_upper: f64,
    /// Number of randomized instantiations (seitz).
    #[arg(long, default_value_t = 1000)]
    instantiations: usize,
    /// Small dataset for the boundary check (defaults to a built-in n=5 fixture).
    #[arg(long)]
    input: Option<String>,
    #[arg(long, default_value = ".")]
    output: PathBuf,
}

enum CliError {
    Usage(String),
    Io(std::io::Error),
    Numeric(Error),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 1,
            // Bad numeric arguments are usage errors; solver/numerics are not.
            CliError::Numeric(Error::Domain(_)) | CliError::Numeric(Error::DegenerateData(_)) => 1,
            CliError::Numeric(_) => 2,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) => m.clone(),
            CliError::Io(e) => format!("i/o error: {e}"),
            CliError::Numeric(e) => e.to_string(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Numeric(e)
    }
}

fn main() {
    if let Ok(threads) = std::env::var("GEVFIT_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
        }
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let result = match cli.command {
        Command::Fit(args) => run_fit(args),
        Command::Profile(args) => run_profile(args),
        Command::Simulate(args) => run_simulate(args),
        Command::Verify(args) => run_verify(args),
    };
    if let Err(e) = result {
        eprintln!("gevfit: {}", e.message());
        std::process::exit(e.exit_code());
    }
}

fn run_fit(args: FitArgs) -> Result<(), CliError> {
    let data = args.input.load()?;
    let fitted = fit(&data, &args.search.config())?;
    let inference = infer(&fitted.params, &data).ok();
    let content = match args.out.format_or(Format::Json) {
        Format::Json => {
            let json = fit_report_json(&fitted, inference.as_ref());
            serde_json::to_string_pretty(&json).expect("fit report serializes") + "\n"
        }
        Format::Csv => {
            let se = inference.as_ref().and_then(|i| i.se.as_ref());
            let fmt_se = |f: Option<f64>| f.map(csv_float).unwrap_or_default();
            format!(
                "tau,mu,xi,beta,loglik,se_mu,se_tau,se_xi\n{},{},{},{},{},{},{},{}\n",
                csv_float(fitted.params.tau()),
                csv_float(fitted.params.mu()),
                csv_float(fitted.params.xi()),
                fitted.beta_hat.map(csv_float).unwrap_or_default(),
                csv_float(fitted.loglik),
                fmt_se(se.map(|s| s.mu)),
                fmt_se(se.map(|s| s.tau)),
                fmt_se(se.map(|s| s.xi)),
            )
        }
    };
    for w in &fitted.warnings {
        eprintln!("gevfit: warning: {w}");
    }
    args.out.emit(&content)
}

fn run_profile(args: ProfileArgs) -> Result<(), CliError> {
    let data = args.input.load()?;
    let s = &args.search;
    if s.grid < 1 {
        return Err(CliError::Usage(
            "profile needs a grid of at least 1 point".into(),
        ));
    }
    let grid: Vec<f64> = if s.grid == 1 {
        vec![s.xi_min]
    } else {
        (0..s.grid)
            .map(|j| s.xi_min + (s.xi_max - s.xi_min) * j as f64 / (s.grid - 1) as f64)
            .collect()
    };
    let curve = curve(&data, &grid, s.tol)?;
    for (xi, msg) in &curve.failures {
        eprintln!("gevfit: warning: xi = {xi}: {msg}");
    }
    let content = match args.out.format_or(Format::Csv) {
        Format::Csv => curve.to_csv(),
        Format::Json => {
            let points: Vec<serde_json::Value> = curve
                .points
                .iter()
                .map(|p| {
                    serde_json::json!({
                        "xi": p.xi,
                        "beta_n": if p.beta_n.is_finite() { Some(p.beta_n) } else { None },
                        "tau_n": p.tau_n,
                        "mu_n": p.mu_n,
                        "pl": p.pl,
                        "pl_deriv": p.pl_deriv,
                        "iters": p.solver_iterations,
                    })
                })
                .collect();
            serde_json::to_string_pretty(&serde_json::json!({
                "n": curve.n,
                "y_min": curve.y_min,
                "y_max": curve.y_max,
                "data_fingerprint": format!("{:016x}", curve.data_fingerprint),
                "points": points,
            }))
            .expect("curve serializes")
                + "\n"
        }
    };
    args.out.emit(&content)
}

fn run_simulate(args: SimulateArgs) -> Result<(), CliError> {
    let params = GevParams::new(args.tau, args.mu, args.xi)?;
    let data = sample(&params, args.n, args.seed)?;
    let content = match args.out.format_or(Format::Csv) {
        Format::Csv => {
            let mut out = String::from("value\n");
            for &y in data.values() {
                out.push_str(&csv_float(y));
                out.push('\n');
            }
            out
        }
        Format::Json => {
            serde_json::to_string_pretty(&data.values().to_vec()).expect("values serialize") + "\n"
        }
    };
    args.out.emit(&content)
}

fn run_verify(args: VerifyArgs) -> Result<(), CliError> {
    let theta0 = GevParams::new(args.tau, args.mu, args.xi)?;
    let n_grid: Vec<usize> = args
        .n_grid
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| CliError::Usage(format!("cannot parse sample size '{t}'")))
        })
        .collect::<Result<_, _>>()?;
    let mut config = ExperimentConfig::new(theta0, n_grid, args.replicates, args.seed);
    config.gamma = args.gamma;
    config.alpha_interval = (args.alpha_m, args.alpha_upper);
    config.b = GammaDerivOrder::from_order(args.b)?;

    let report: ExperimentReport = match args.experiment {
        ExperimentName::Rate => rate_experiment(&config)?,
        ExperimentName::PseudoLln => pseudo_lln_experiment(&config, args.k, args.a)?,
        ExperimentName::Uniform => uniform_consistency_experiment(&config)?,
        ExperimentName::Seitz => seitz_experiment(&config, args.instantiations)?,
        ExperimentName::Boundary => {
            let data = match &args.input {
                Some(path) => {
                    let text = std::fs::read_to_string(path).map_err(CliError::Io)?;
                    ingest::ingest(
                        &text,
                        &ColumnSelector::parse("value"),
                        &BlockSpec::default(),
                    )?
                }
                None => DataSample::new(vec![0.0, 1.0, 2.0, 3.0, 10.0])?,
            };
            boundary_divergence_check(&config, &data)?
        }
        ExperimentName::Figure2 => figure2_report(&config)?,
    };

    let (json_path, csv_path) = report.write(&args.output).map_err(CliError::Io)?;
    for v in &report.verdicts {
        println!(
            "{}: {} ({})",
            v.name,
            if v.pass { "pass" } else { "FAIL" },
            v.detail
        );
    }
    println!("report: {}", json_path.display());
    println!("raw:    {}", csv_path.display());
    Ok(())
}
