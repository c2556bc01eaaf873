//! Command-line runner for the master-equation sweeps: each subcommand
//! starts from a named preset, applies config-file values and then flag
//! overrides, and writes one flat CSV table. Exit codes: 0 success, 1
//! validation failure, 2 configuration error, 3 numerical failure.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use qme::builders::QmeKind;
use qme::lattice::ChainSpec;
use qme::scenarios::{
    run_calibration, run_populations, run_scenario, run_validation, Scenario, COMPARISON_HEADER,
    POPULATIONS_HEADER,
};
use qme::Error as QmeError;

const EXIT_VALIDATION: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

#[derive(Parser)]
#[command(
    name = "qme",
    about = "Steady-state sweeps for boundary-driven fermion chains under five master equations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Kernel distance of local generators against the Redfield reference
    Distance(SweepArgs),
    /// Steady-state covariance deviation over the same grid
    Steady(SweepArgs),
    /// Eigenmode populations against the Gibbs profile (equal temperatures)
    Populations(SweepArgs),
    /// Calibrated coupling J_int versus bath timescale
    Calibration(SweepArgs),
    /// Dense radius sweep showing the accuracy trade-off
    Tradeoff(SweepArgs),
    /// Consecutive radii, odd included, with edge temperatures swapped
    OddEven(SweepArgs),
    /// Oracle equivalence and invariant self-checks
    Validate(ValidateArgs),
}

#[derive(Args)]
struct SweepArgs {
    /// Plain-text config with key = value lines; flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output CSV path; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
    /// Chain length
    #[arg(long = "L")]
    l: Option<usize>,
    /// Bath sites per edge
    #[arg(long = "N")]
    n: Option<usize>,
    /// Target system-bath relaxation time
    #[arg(long = "tau-sb")]
    tau_sb: Option<f64>,
    /// Inverse temperature of the left edge
    #[arg(long = "beta-l")]
    beta_l: Option<f64>,
    /// Inverse temperature of the right edge
    #[arg(long = "beta-r")]
    beta_r: Option<f64>,
    /// Hopping amplitude
    #[arg(long = "J")]
    j: Option<f64>,
    /// On-site energy
    #[arg(long)]
    omega0: Option<f64>,
    /// Window radii, comma separated
    #[arg(long, value_delimiter = ',')]
    radii: Option<Vec<usize>>,
    /// Bath timescales, comma separated
    #[arg(long = "tau-b-grid", value_delimiter = ',')]
    tau_b_grid: Option<Vec<f64>>,
    /// Generator kinds, comma separated
    #[arg(long, value_delimiter = ',')]
    kinds: Option<Vec<String>>,
    /// Include the principal-value (Lamb shift) weights
    #[arg(long = "include-eta")]
    include_eta: bool,
    /// Replace the default radius grid with consecutive radii 2..=8
    #[arg(long = "odd-radii")]
    odd_radii: bool,
    /// Worker threads; defaults to all cores
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct ValidateArgs {
    /// Plain-text config; only the threads key applies here
    #[arg(long)]
    config: Option<PathBuf>,
    /// Worker threads; defaults to all cores
    #[arg(long)]
    threads: Option<usize>,
}

/// Terminal failure with its process exit code.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

fn config_failure(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_CONFIG, message: message.into() }
}

/// Structural problems are configuration errors; everything else that the
/// library reports is a numerical failure.
fn classify(err: &QmeError) -> u8 {
    match err {
        QmeError::InvalidChain(_)
        | QmeError::InvalidScenario(_)
        | QmeError::InvalidRadius { .. }
        | QmeError::SiteOutsideWindow { .. }
        | QmeError::DimensionMismatch { .. }
        | QmeError::OracleTooLarge { .. } => EXIT_CONFIG,
        _ => EXIT_NUMERICAL,
    }
}

fn library_failure(err: QmeError) -> Failure {
    Failure { code: classify(&err), message: err.to_string() }
}

/// Scenario fields that config and flags may replace.
#[derive(Debug)]
#[derive(Default)]
struct Overrides {
    l: Option<usize>,
    n: Option<usize>,
    j: Option<f64>,
    omega0: Option<f64>,
    beta_l: Option<f64>,
    beta_r: Option<f64>,
    tau_sb: Option<f64>,
    radii: Option<Vec<usize>>,
    tau_b_grid: Option<Vec<f64>>,
    kinds: Option<Vec<QmeKind>>,
    include_eta: Option<bool>,
    out: Option<PathBuf>,
    threads: Option<usize>,
}

impl Overrides {
    /// Field-wise precedence: values in `top` win over `base`.
    fn merged(base: Overrides, top: Overrides) -> Overrides {
        Overrides {
            l: top.l.or(base.l),
            n: top.n.or(base.n),
            j: top.j.or(base.j),
            omega0: top.omega0.or(base.omega0),
            beta_l: top.beta_l.or(base.beta_l),
            beta_r: top.beta_r.or(base.beta_r),
            tau_sb: top.tau_sb.or(base.tau_sb),
            radii: top.radii.or(base.radii),
            tau_b_grid: top.tau_b_grid.or(base.tau_b_grid),
            kinds: top.kinds.or(base.kinds),
            include_eta: top.include_eta.or(base.include_eta),
            out: top.out.or(base.out),
            threads: top.threads.or(base.threads),
        }
    }
}

fn parse_scalar<T: FromStr>(value: &str, line: usize) -> Result<T, String>
where
    T::Err: std::fmt::Display,
{
    value.trim().parse().map_err(|e| format!("config line {line}: {e}"))
}

fn parse_list<T: FromStr>(value: &str, line: usize) -> Result<Vec<T>, String>
where
    T::Err: std::fmt::Display,
{
    value.split(',').map(|item| parse_scalar(item, line)).collect()
}

/// key = value lines; # starts a comment; lists are comma separated. Keys
/// mirror the scenario fields.
fn parse_config(text: &str) -> Result<Overrides, String> {
    let mut o = Overrides::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or(format!("config line {line}: expected key = value"))?;
        match key.trim() {
            "L" | "l" => o.l = Some(parse_scalar(value, line)?),
            "N" | "n" => o.n = Some(parse_scalar(value, line)?),
            "J" | "j" => o.j = Some(parse_scalar(value, line)?),
            "omega0" => o.omega0 = Some(parse_scalar(value, line)?),
            "beta_l" => o.beta_l = Some(parse_scalar(value, line)?),
            "beta_r" => o.beta_r = Some(parse_scalar(value, line)?),
            "tau_sb" => o.tau_sb = Some(parse_scalar(value, line)?),
            "radii" => o.radii = Some(parse_list(value, line)?),
            "tau_b_grid" => o.tau_b_grid = Some(parse_list(value, line)?),
            "kinds" => o.kinds = Some(parse_list(value, line)?),
            "include_eta" => o.include_eta = Some(parse_scalar(value, line)?),
            "out" => o.out = Some(PathBuf::from(value.trim())),
            "threads" => o.threads = Some(parse_scalar(value, line)?),
            other => return Err(format!("config line {line}: unknown key '{other}'")),
        }
    }
    Ok(o)
}

fn flag_overrides(args: &SweepArgs) -> Result<Overrides, Failure> {
    let kinds = match &args.kinds {
        Some(names) => Some(
            names
                .iter()
                .map(|name| QmeKind::from_str(name))
                .collect::<Result<Vec<QmeKind>, QmeError>>()
                .map_err(|e| config_failure(e.to_string()))?,
        ),
        None => None,
    };
    Ok(Overrides {
        l: args.l,
        n: args.n,
        j: args.j,
        omega0: args.omega0,
        beta_l: args.beta_l,
        beta_r: args.beta_r,
        tau_sb: args.tau_sb,
        radii: args.radii.clone(),
        tau_b_grid: args.tau_b_grid.clone(),
        kinds,
        include_eta: if args.include_eta { Some(true) } else { None },
        out: args.out.clone(),
        threads: args.threads,
    })
}

fn gather_overrides(args: &SweepArgs) -> Result<Overrides, Failure> {
    let mut base = Overrides::default();
    if args.odd_radii {
        base.radii = Some((2..=8).collect());
    }
    if let Some(path) = &args.config {
        let text = fs::read_to_string(path)
            .map_err(|e| config_failure(format!("cannot read {}: {e}", path.display())))?;
        let from_file = parse_config(&text).map_err(config_failure)?;
        base = Overrides::merged(base, from_file);
    }
    Ok(Overrides::merged(base, flag_overrides(args)?))
}

fn apply(mut scenario: Scenario, o: &Overrides) -> Result<Scenario, Failure> {
    let chain = &scenario.chain;
    scenario.chain = ChainSpec::new(
        o.l.unwrap_or(chain.l),
        o.n.unwrap_or(chain.n),
        o.j.unwrap_or(chain.j),
        o.omega0.unwrap_or(chain.omega0),
        o.beta_l.unwrap_or(chain.beta_left),
        o.beta_r.unwrap_or(chain.beta_right),
    )
    .map_err(|e| config_failure(e.to_string()))?;
    if let Some(tau_sb) = o.tau_sb {
        scenario.tau_sb = tau_sb;
    }
    if let Some(radii) = &o.radii {
        scenario.radii = radii.clone();
    }
    if let Some(grid) = &o.tau_b_grid {
        scenario.tau_b_grid = grid.clone();
    }
    if let Some(kinds) = &o.kinds {
        scenario.kinds = kinds.clone();
    }
    if let Some(include_eta) = o.include_eta {
        scenario.include_eta = include_eta;
    }
    scenario.validate().map_err(|e| config_failure(e.to_string()))?;
    Ok(scenario)
}

fn init_threads(threads: Option<usize>) -> Result<(), Failure> {
    if let Some(count) = threads {
        if count == 0 {
            return Err(config_failure("threads must be positive"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(count)
            .build_global()
            .map_err(|e| config_failure(format!("cannot size the worker pool: {e}")))?;
    }
    Ok(())
}

fn write_table(out: &Option<PathBuf>, header: &str, lines: Vec<String>) -> Result<(), Failure> {
    fn render(w: &mut dyn Write, header: &str, lines: &[String]) -> io::Result<()> {
        writeln!(w, "{header}")?;
        for line in lines {
            writeln!(w, "{line}")?;
        }
        w.flush()
    }
    let outcome = match out {
        Some(path) => fs::File::create(path)
            .and_then(|file| render(&mut io::BufWriter::new(file), header, &lines)),
        None => render(&mut io::stdout().lock(), header, &lines),
    };
    outcome.map_err(|e| config_failure(format!("cannot write output: {e}")))
}

fn run_sweep(preset: Scenario, args: &SweepArgs, calibration_only: bool) -> Result<(), Failure> {
    let mut overrides = gather_overrides(args)?;
    if calibration_only {
        // no generator is built, so the radius grid is irrelevant; pin it to
        // the chain length instead of forcing the caller to keep them in sync
        overrides.radii = Some(vec![overrides.l.unwrap_or(preset.chain.l)]);
    }
    init_threads(overrides.threads)?;
    let scenario = apply(preset, &overrides)?;
    let rows = if calibration_only {
        run_calibration(&scenario)
    } else {
        run_scenario(&scenario)
    }
    .map_err(library_failure)?;
    let faulted = rows.iter().filter(|r| r.error.is_some()).count();
    if faulted > 0 {
        eprintln!("{faulted} of {} grid points recorded errors", rows.len());
    }
    write_table(&overrides.out, COMPARISON_HEADER, rows.iter().map(|r| r.csv_line()).collect())
}

fn run_population_sweep(args: &SweepArgs) -> Result<(), Failure> {
    let overrides = gather_overrides(args)?;
    init_threads(overrides.threads)?;
    let scenario = apply(Scenario::equilibrium_populations(), &overrides)?;
    let rows = run_populations(&scenario).map_err(library_failure)?;
    for row in rows.iter().filter(|r| r.error.is_some()) {
        if row.mode_index == 1 {
            eprintln!(
                "{} R={} failed: {}",
                row.kind,
                row.radius,
                row.error.as_deref().unwrap_or("")
            );
        }
    }
    write_table(&overrides.out, POPULATIONS_HEADER, rows.iter().map(|r| r.csv_line()).collect())
}

fn run_validate(args: &ValidateArgs) -> Result<u8, Failure> {
    let threads = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| config_failure(format!("cannot read {}: {e}", path.display())))?;
            parse_config(&text).map_err(config_failure)?.threads.or(args.threads)
        }
        None => args.threads,
    };
    init_threads(threads)?;
    let checks = run_validation();
    let mut failed = 0;
    for check in &checks {
        println!("{}", check.line());
        if !check.passed {
            failed += 1;
        }
    }
    if failed > 0 {
        eprintln!("{failed} of {} checks failed", checks.len());
        Ok(EXIT_VALIDATION)
    } else {
        println!("all {} checks passed", checks.len());
        Ok(0)
    }
}

fn dispatch(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Distance(args) => {
            run_sweep(Scenario::kernel_distance_sweep(), &args, false).map(|_| 0)
        }
        Command::Steady(args) => {
            run_sweep(Scenario::steady_deviation_sweep(), &args, false).map(|_| 0)
        }
        Command::Populations(args) => run_population_sweep(&args).map(|_| 0),
        Command::Calibration(args) => {
            run_sweep(Scenario::calibration_curve(), &args, true).map(|_| 0)
        }
        Command::Tradeoff(args) => run_sweep(Scenario::radius_tradeoff(), &args, false).map(|_| 0),
        Command::OddEven(args) => run_sweep(Scenario::odd_even_radii(), &args, false).map(|_| 0),
        Command::Validate(args) => run_validate(&args),
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
