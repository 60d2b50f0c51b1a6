//! Command-line surface: exact Gini queries, bias tables, Monte Carlo
//! runs, and SVG chart emission.
//!
//! Exit codes are stable contracts: 0 success, 2 parameter error,
//! 3 convergence failure, 4 config/output error, 5 data error.

mod config;
mod report;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ginibias::{
    DistributionModel, ExpectationError, Family, McError, ModelError, QuadratureError,
    QuadratureSettings,
};
use report::fmt_g10;

const EXIT_PARAMETER: u8 = 2;
const EXIT_CONVERGENCE: u8 = 3;
const EXIT_CONFIG: u8 = 4;
const EXIT_DATA: u8 = 5;

#[derive(Parser)]
#[command(
    name = "ginibias",
    version,
    about = "Exact Gini coefficients, finite-sample Gini-estimator bias, and Monte Carlo studies"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the population Gini coefficient (closed form and the
    /// independent CDF-series evaluation)
    Gini(FamilyArgs),
    /// Print population Gini, E[Ghat], bias, and the analytic bias bounds
    /// for one (model, n) pair
    Bias {
        #[command(flatten)]
        family: FamilyArgs,
        /// Sample size (>= 2)
        #[arg(long)]
        n: usize,
    },
    /// Run a Monte Carlo study described by a key-value config file;
    /// writes mc_results.csv and manifest.json
    Mc {
        /// Path to the config file
        config: PathBuf,
        /// Worker threads (default: machine parallelism)
        #[arg(long)]
        threads: Option<usize>,
        /// Output directory
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Override the seed from the config file
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Render one panel of an mc_results.csv as a static SVG line chart
    Plot {
        /// Path to mc_results.csv
        results: PathBuf,
        #[arg(long, value_enum)]
        panel: PanelArg,
        /// Output SVG path
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct FamilyArgs {
    /// poisson, geometric, or gamma
    #[arg(long)]
    family: String,
    /// Rate parameter (poisson and gamma)
    #[arg(long)]
    lambda: Option<f64>,
    /// Success probability (geometric)
    #[arg(long)]
    p: Option<f64>,
    /// Shape parameter (gamma)
    #[arg(long)]
    alpha: Option<f64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PanelArg {
    #[value(name = "relbias_n")]
    RelbiasN,
    #[value(name = "rmse_n")]
    RmseN,
    #[value(name = "relbias_param")]
    RelbiasParam,
    #[value(name = "rmse_param")]
    RmseParam,
}

impl From<PanelArg> for svg::Panel {
    fn from(p: PanelArg) -> Self {
        match p {
            PanelArg::RelbiasN => svg::Panel::RelbiasN,
            PanelArg::RmseN => svg::Panel::RmseN,
            PanelArg::RelbiasParam => svg::Panel::RelbiasParam,
            PanelArg::RmseParam => svg::Panel::RmseParam,
        }
    }
}

impl FamilyArgs {
    fn build(&self) -> Result<(DistributionModel, String), String> {
        let family: Family = self.family.parse().map_err(|e| format!("{e}"))?;
        let require = |name: &str, v: Option<f64>| {
            v.ok_or_else(|| format!("family {family} requires --{name}"))
        };
        let forbid = |name: &str, v: Option<f64>| {
            if v.is_some() {
                Err(format!("family {family} does not take --{name}"))
            } else {
                Ok(())
            }
        };
        match family {
            Family::Poisson => {
                forbid("p", self.p)?;
                forbid("alpha", self.alpha)?;
                let lambda = require("lambda", self.lambda)?;
                let model = DistributionModel::poisson(lambda).map_err(|e| format!("{e}"))?;
                Ok((model, format!("lambda={lambda}")))
            }
            Family::Geometric => {
                forbid("lambda", self.lambda)?;
                forbid("alpha", self.alpha)?;
                let p = require("p", self.p)?;
                let model = DistributionModel::geometric(p).map_err(|e| format!("{e}"))?;
                Ok((model, format!("p={p}")))
            }
            Family::Gamma => {
                forbid("p", self.p)?;
                let alpha = require("alpha", self.alpha)?;
                let lambda = require("lambda", self.lambda)?;
                let model = DistributionModel::gamma(alpha, lambda).map_err(|e| format!("{e}"))?;
                Ok((model, format!("alpha={alpha};lambda={lambda}")))
            }
        }
    }
}

fn fail(code: u8, message: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(code)
}

fn is_no_convergence_model(e: &ModelError) -> bool {
    matches!(
        e,
        ModelError::Quadrature(QuadratureError::NoConvergence { .. })
            | ModelError::Gini(ginibias::gini::GiniError::Quadrature(
                QuadratureError::NoConvergence { .. }
            ))
    )
}

fn is_no_convergence(e: &ExpectationError) -> bool {
    match e {
        ExpectationError::Quadrature(QuadratureError::NoConvergence { .. }) => true,
        ExpectationError::Model(m) => is_no_convergence_model(m),
        _ => false,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Gini(args) => cmd_gini(&args),
        Command::Bias { family, n } => cmd_bias(&family, n),
        Command::Mc {
            config,
            threads,
            out,
            seed,
        } => cmd_mc(&config, threads, &out, seed),
        Command::Plot {
            results,
            panel,
            out,
        } => cmd_plot(&results, panel.into(), &out),
    }
}

fn cmd_gini(args: &FamilyArgs) -> ExitCode {
    let (model, label) = match args.build() {
        Ok(v) => v,
        Err(e) => return fail(EXIT_PARAMETER, e),
    };
    let exact = match model.gini_exact() {
        Ok(v) => v,
        Err(e) => return fail(EXIT_PARAMETER, e),
    };
    let series = match model.gini_series() {
        Ok(v) => v,
        Err(e) if is_no_convergence_model(&e) => return fail(EXIT_CONVERGENCE, e),
        Err(e) => return fail(EXIT_PARAMETER, e),
    };
    println!("family,params,gini_exact,gini_series,abs_diff");
    println!(
        "{},{},{},{},{}",
        model.family().name(),
        label,
        fmt_g10(exact),
        fmt_g10(series),
        fmt_g10((exact - series).abs()),
    );
    ExitCode::SUCCESS
}

fn cmd_bias(args: &FamilyArgs, n: usize) -> ExitCode {
    let (model, label) = match args.build() {
        Ok(v) => v,
        Err(e) => return fail(EXIT_PARAMETER, e),
    };
    let report = match ginibias::bias(&model, n, &QuadratureSettings::default()) {
        Ok(r) => r,
        Err(e) if is_no_convergence(&e) => return fail(EXIT_CONVERGENCE, e),
        Err(e) => return fail(EXIT_PARAMETER, e),
    };
    println!("family,params,n,gini,expected_ghat,bias,lower_bound,upper_bound,quad_abs_error");
    println!(
        "{},{},{},{},{},{},{},{},{}",
        model.family().name(),
        label,
        n,
        fmt_g10(report.gini),
        fmt_g10(report.expectation),
        fmt_g10(report.bias),
        fmt_g10(report.lower_bound),
        fmt_g10(report.upper_bound),
        fmt_g10(report.abs_error_estimate),
    );
    ExitCode::SUCCESS
}

fn cmd_mc(
    config_path: &PathBuf,
    threads: Option<usize>,
    out: &PathBuf,
    seed: Option<u64>,
) -> ExitCode {
    let text = match std::fs::read_to_string(config_path) {
        Ok(t) => t,
        Err(e) => return fail(EXIT_CONFIG, format!("{}: {e}", config_path.display())),
    };
    let mut mc_config = match config::parse_config(&text) {
        Ok(c) => c,
        Err(e) => return fail(EXIT_CONFIG, format!("{}: {e}", config_path.display())),
    };
    if let Some(seed) = seed {
        mc_config.base_seed = seed;
    }

    let run = || ginibias::run_mc(&mc_config);
    let result = match threads {
        None => run(),
        Some(n) => {
            let pool = match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
                Ok(p) => p,
                Err(e) => return fail(EXIT_CONFIG, e),
            };
            pool.install(run)
        }
    };
    let report = match result {
        Ok(r) => r,
        Err(McError::Expectation(e)) if is_no_convergence(&e) => return fail(EXIT_CONVERGENCE, e),
        Err(e) => return fail(EXIT_CONFIG, e),
    };

    if let Err(e) = std::fs::create_dir_all(out) {
        return fail(EXIT_CONFIG, format!("{}: {e}", out.display()));
    }
    let csv_path = out.join("mc_results.csv");
    let manifest_path = out.join("manifest.json");
    let csv = report::mc_csv(&report);
    if let Err(e) = std::fs::write(&csv_path, &csv) {
        return fail(EXIT_CONFIG, format!("{}: {e}", csv_path.display()));
    }
    let manifest = report::RunManifest::for_mc(&mc_config);
    let manifest_json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    if let Err(e) = std::fs::write(&manifest_path, manifest_json + "\n") {
        return fail(EXIT_CONFIG, format!("{}: {e}", manifest_path.display()));
    }

    println!("family,cells,rows,replications,csv,manifest");
    println!(
        "{},{},{},{},{},{}",
        mc_config.family.name(),
        report.cells.len(),
        report.cells.len() * 2,
        mc_config.replications,
        csv_path.display(),
        manifest_path.display(),
    );
    ExitCode::SUCCESS
}

fn cmd_plot(results: &PathBuf, panel: svg::Panel, out: &PathBuf) -> ExitCode {
    let text = match std::fs::read_to_string(results) {
        Ok(t) => t,
        Err(e) => return fail(EXIT_DATA, format!("{}: {e}", results.display())),
    };
    let rows = match report::parse_mc_csv(&text) {
        Ok(r) => r,
        Err(e) => return fail(EXIT_DATA, format!("{}: {e}", results.display())),
    };
    let series = svg::panel_series(&rows, panel);
    let points = series.iter().map(|s| s.points.len()).max().unwrap_or(0);
    let title = format!("{} {}", rows[0].family, panel.name().replace('_', " vs "));
    let chart = svg::line_chart(&title, panel, &rows);
    if let Err(e) = std::fs::write(out, chart) {
        return fail(EXIT_CONFIG, format!("{}: {e}", out.display()));
    }
    println!("panel,series,points,svg");
    println!(
        "{},{},{},{}",
        panel.name(),
        series.len(),
        points,
        out.display()
    );
    ExitCode::SUCCESS
}
