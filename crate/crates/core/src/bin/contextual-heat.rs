use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use contextual_heat::contextuality::{choi_matrix, extract_stochastic_reversibility, find_minimal_pd};
use contextual_heat::scenario::{
    builtin, emit, run_sweep, write_csv, write_json, Model, NamedInteraction, OutputFormat, Prepared,
    ScenarioConfig, StateConfig,
};
use contextual_heat::thermo::clausius_report_with;
use contextual_heat::{Error, Result};
use serde_json::json;

const OUT_DIR_ENV: &str = "CONTEXTUAL_HEAT_OUT_DIR";

#[derive(Parser)]
#[command(name = "contextual-heat", version, about = "Anomalous heat flow and noncontextuality bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a time sweep and write CSV or JSON records.
    Sweep(SweepArgs),
    /// Print only the crossing times of a sweep.
    CriticalTime(ConfigArgs),
    /// Check the stochastic-reversibility decomposition of a named unitary.
    VerifyDecomposition(DecompositionArgs),
    /// Print the Choi spectrum of the extracted channel.
    Choi(DecompositionArgs),
    /// Thermodynamic bookkeeping at a single time.
    Clausius(ClausiusArgs),
    /// Print a reference config as JSON.
    Builtin {
        #[arg(value_parser = ["micadei", "qutrit-demo"])]
        name: String,
        /// Write the config here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ConfigArgs {
    /// JSON config file.
    #[arg(long, conflicts_with = "builtin")]
    config: Option<PathBuf>,
    /// Start from a reference config (micadei or qutrit-demo).
    #[arg(long)]
    builtin: Option<String>,
    #[arg(long)]
    t_min: Option<f64>,
    #[arg(long)]
    t_max: Option<f64>,
    #[arg(long)]
    n_points: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    g: Option<f64>,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    theta: Option<f64>,
    /// Coherence of a two-qubit state.
    #[arg(long, allow_hyphen_values = true)]
    eta: Option<f64>,
    #[arg(long)]
    check_fraction: Option<f64>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    config: ConfigArgs,
    /// Output file; defaults to the config's path, then to the directory in
    /// CONTEXTUAL_HEAT_OUT_DIR, then to stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        }
    }
}

#[derive(Args)]
struct DecompositionArgs {
    /// partial-swap, partial-swap-qutrit, nonresonant, resonant-theta or resonant-a
    #[arg(long)]
    interaction: NamedInteraction,
    #[arg(long, default_value_t = 1.0)]
    g: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    a: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    theta: f64,
    #[arg(long)]
    t: f64,
    /// Disturbance probability to test; defaults to the analytic value.
    #[arg(long)]
    p_d: Option<f64>,
    /// Also search for the smallest feasible p_d.
    #[arg(long)]
    search: bool,
}

#[derive(Args)]
struct ClausiusArgs {
    #[command(flatten)]
    config: ConfigArgs,
    #[arg(long)]
    t: f64,
}

fn load_config(args: &ConfigArgs) -> Result<ScenarioConfig> {
    let mut c = match (&args.config, &args.builtin) {
        (Some(path), _) => ScenarioConfig::load(path)?,
        (None, Some(name)) => builtin(name)?,
        (None, None) => return Err(Error::Config { field: "config".into(), message: "pass --config or --builtin".into() }),
    };
    if let Some(v) = args.t_min {
        c.time_grid.t_min = v;
    }
    if let Some(v) = args.t_max {
        c.time_grid.t_max = v;
    }
    if let Some(v) = args.n_points {
        c.time_grid.n_points = v;
    }
    if let Some(v) = args.seed {
        c.seed = v;
    }
    if let Some(v) = args.g {
        c.interaction.g = v;
    }
    if let Some(v) = args.a {
        c.interaction.a = v;
    }
    if let Some(v) = args.theta {
        c.interaction.theta = v;
    }
    if let Some(v) = args.check_fraction {
        c.check_fraction = v;
    }
    if let Some(v) = args.eta {
        match &mut c.state {
            StateConfig::TwoQubit { eta, .. } => *eta = v,
            StateConfig::TwoQutrit { .. } => {
                return Err(Error::Config { field: "eta".into(), message: "--eta applies to two-qubit states".into() })
            }
        }
    }
    c.validate()?;
    Ok(c)
}

fn print_json(value: &impl serde::Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value).expect("serializable");
    println!("{text}");
    Ok(())
}

fn sweep(args: SweepArgs) -> Result<()> {
    let mut config = load_config(&args.config)?;
    if let Some(f) = args.format {
        config.output.format = f.into();
    }
    let format = config.output.format;
    let ext = match format {
        OutputFormat::Csv => "csv",
        OutputFormat::Json => "json",
    };
    let path = args.output.or_else(|| config.output.path.clone()).or_else(|| {
        std::env::var_os(OUT_DIR_ENV).map(|dir| PathBuf::from(dir).join(format!("sweep.{ext}")))
    });
    let out = run_sweep(&config)?;
    match path {
        Some(p) => {
            emit(&out, format, &p)?;
            eprintln!(
                "wrote {} records to {} (first crossing: {})",
                out.records.len(),
                p.display(),
                out.critical_times.first().map_or("none".to_string(), |t| format!("{t:e}"))
            );
        }
        None => {
            let stdout = std::io::stdout().lock();
            let res = match format {
                OutputFormat::Csv => write_csv(&out.records, stdout),
                OutputFormat::Json => write_json(&out, stdout),
            };
            res.map_err(|source| Error::Io { path: "<stdout>".into(), source })?;
        }
    }
    Ok(())
}

fn critical_time(args: ConfigArgs) -> Result<()> {
    let config = load_config(&args)?;
    let model = Model::new(&config)?;
    let found = model.critical_times(&config.time_grid)?;
    print_json(&json!({
        "tau_c": found.first(),
        "crossings": found.crossings,
        "grazing": found.grazing,
    }))
}

fn decomposition(args: &DecompositionArgs) -> Result<contextual_heat::contextuality::DecompositionReport> {
    let u = args.interaction.unitary(args.g, args.a, args.theta, args.t)?;
    let p_d = args.p_d.unwrap_or_else(|| args.interaction.analytic_pd(args.g, args.a, args.t));
    extract_stochastic_reversibility(&u, p_d)
}

fn verify_decomposition(args: DecompositionArgs) -> Result<()> {
    let report = decomposition(&args)?;
    let minimal = if args.search {
        let u = args.interaction.unitary(args.g, args.a, args.theta, args.t)?;
        Some(find_minimal_pd(&u)?.0)
    } else {
        None
    };
    print_json(&json!({
        "interaction": args.interaction,
        "p_d": report.p_d,
        "is_cptp": report.is_cptp,
        "residual_norm": report.residual_norm,
        "trace_residual": report.trace_residual,
        "choi_eigenvalues": report.choi_eigenvalues,
        "minimal_p_d": minimal,
    }))
}

fn choi(args: DecompositionArgs) -> Result<()> {
    let report = decomposition(&args)?;
    let choi = choi_matrix(&report.residual_channel)?;
    print_json(&json!({
        "interaction": args.interaction,
        "p_d": report.p_d,
        "trace": choi.matrix().trace().re,
        "eigenvalues": report.choi_eigenvalues,
    }))
}

fn clausius(args: ClausiusArgs) -> Result<()> {
    let config = load_config(&args.config)?;
    let model = Model::new(&config)?;
    let (h_b, beta_a, beta_b) = match model.prepared() {
        Prepared::Qubits { params, .. } => (
            contextual_heat::HermitianOp::from_real_diag(&[0.0, params.omega_b()]),
            params.beta_a,
            params.beta_b,
        ),
        Prepared::Qutrits { params, .. } => {
            (model.h_a().clone(), params.beta_a, params.beta_b)
        }
    };
    let u = model.unitary(args.t)?;
    let report = clausius_report_with(model.rho(), &u, model.h_a(), &h_b, beta_a, beta_b)?;
    print_json(&json!({
        "t": args.t,
        "beta_a": beta_a,
        "beta_b": beta_b,
        "result": report,
        "identity_holds": report.identity_holds(),
        "clausius_holds": report.clausius_holds(1e-12),
    }))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Sweep(a) => sweep(a),
        Command::CriticalTime(a) => critical_time(a),
        Command::VerifyDecomposition(a) => verify_decomposition(a),
        Command::Choi(a) => choi(a),
        Command::Clausius(a) => clausius(a),
        Command::Builtin { name, output } => {
            let text = builtin(&name)?.to_json();
            match output {
                Some(p) => std::fs::write(&p, text + "\n").map_err(|source| Error::Io { path: p, source }),
                None => {
                    let mut out = std::io::stdout().lock();
                    writeln!(out, "{text}").map_err(|source| Error::Io { path: "<stdout>".into(), source })
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_config_error() { 2 } else { 3 })
        }
    }
}
