//! Command-line interface for the hearthledger toolkit.
//!
//! Exit codes: 0 on success, 1 on data errors (unreadable or invalid
//! input), 2 on usage errors (bad flags or flag combinations). A computed
//! value disagreeing with a reported reference value is a finding recorded
//! in the report, never a nonzero exit.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use hearthledger::{
    atkinson, atkinson_ratio, audit_report, bundled, decompose, ede, epsilon_sweep, gini,
    ingest, run_two_stage, EvaluationMode, IncomeDistribution, InequalityAversion, RunOptions,
    SweepInput, SweepRow, DEFAULT_EPSILON_SWEEP, DEFAULT_TOLERANCE,
};

/// Environment variable that overrides where `bundled:` data is read from.
const DATA_DIR_ENV: &str = "HEARTHLEDGER_DATA_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Ratio,
    Distribution,
}

impl From<Mode> for EvaluationMode {
    fn from(mode: Mode) -> Self {
        match mode {
            Mode::Ratio => EvaluationMode::Ratio,
            Mode::Distribution => EvaluationMode::Distribution,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "hearthledger",
    version,
    about = "Atkinson inequality measures and household-labor GDP imputation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format (sweep defaults to csv instead)
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Write output to this file (atomically) instead of standard output
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Inequality aversion; repeatable for sweeps, `inf` accepted
    #[arg(long, global = true, allow_negative_numbers = true)]
    epsilon: Vec<f64>,

    /// Verdict tolerance on |i1 - i2|
    #[arg(long, global = true, default_value_t = DEFAULT_TOLERANCE)]
    tolerance: f64,

    /// Annualize the imputed labor (multiply by 12) before adding it to GDP
    #[arg(long, global = true)]
    annualize: bool,

    /// Index evaluation mode for the model
    #[arg(long, global = true, value_enum, default_value_t = Mode::Ratio)]
    mode: Mode,

    /// Distribution mode: include zero-income persons at a 1 TL floor
    /// instead of excluding them
    #[arg(long = "include-zero-as-epsilon", global = true)]
    include_zero_as_epsilon: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Atkinson index of a distribution CSV or an income/mean ratio pair
    Atkinson {
        /// Distribution CSV (`income,weight`)
        #[arg(long)]
        input: Option<PathBuf>,
        /// Representative income for ratio mode
        #[arg(long)]
        income: Option<f64>,
        /// Reference mean for ratio mode
        #[arg(long)]
        mean: Option<f64>,
    },
    /// Gini coefficient of a distribution CSV
    Gini {
        #[arg(long)]
        input: PathBuf,
    },
    /// Equally distributed equivalent income of a distribution CSV
    Ede {
        #[arg(long)]
        input: PathBuf,
    },
    /// Impute housewife labor into GDP for an accounts snapshot
    Impute {
        /// Accounts CSV path or `bundled:turkey2014`
        #[arg(long)]
        accounts: String,
    },
    /// Run the two-stage comparison and emit the audit report
    Model {
        /// Accounts CSV path or `bundled:turkey2014`
        #[arg(long)]
        accounts: String,
    },
    /// Index per epsilon, as plot-ready CSV (default list 0.5, 1, 2)
    Sweep {
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        income: Option<f64>,
        #[arg(long)]
        mean: Option<f64>,
    },
    /// Between/within decomposition of a labeled CSV (`income,weight,group`)
    Decompose {
        #[arg(long)]
        input: PathBuf,
    },
    /// Check a CSV file against the schema its header declares
    Validate {
        /// File path or `bundled:<name>`
        path: String,
    },
}

enum CliError {
    /// Bad flags or flag combinations: exit 2.
    Usage(String),
    /// Unreadable or invalid data: exit 1.
    Data(String),
}

impl CliError {
    fn usage(msg: impl Into<String>) -> Self {
        Self::Usage(msg.into())
    }

    fn data(msg: impl std::fmt::Display) -> Self {
        Self::Data(msg.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(output) => match write_output(&output, cli.output.as_deref()) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(1)
            }
        },
        Err(CliError::Data(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Atkinson {
            input,
            income,
            mean,
        } => cmd_atkinson(cli, input.as_deref(), *income, *mean),
        Command::Gini { input } => cmd_gini(cli, input),
        Command::Ede { input } => cmd_ede(cli, input),
        Command::Impute { accounts } => cmd_impute(cli, accounts),
        Command::Model { accounts } => cmd_model(cli, accounts),
        Command::Sweep {
            input,
            income,
            mean,
        } => cmd_sweep(cli, input.as_deref(), *income, *mean),
        Command::Decompose { input } => cmd_decompose(cli, input),
        Command::Validate { path } => cmd_validate(path),
    }
}

fn format_or(cli: &Cli, default: Format) -> Format {
    cli.format.unwrap_or(default)
}

/// Exactly one validated ε.
fn single_epsilon(cli: &Cli) -> Result<InequalityAversion, CliError> {
    match cli.epsilon.as_slice() {
        [] => Err(CliError::usage("--epsilon is required")),
        [e] => parse_epsilon(*e),
        more => Err(CliError::usage(format!(
            "expected one --epsilon, got {}",
            more.len()
        ))),
    }
}

fn parse_epsilon(e: f64) -> Result<InequalityAversion, CliError> {
    InequalityAversion::new(e).map_err(|err| CliError::usage(err.to_string()))
}

fn epsilon_list(cli: &Cli) -> Result<Vec<InequalityAversion>, CliError> {
    if cli.epsilon.is_empty() {
        return Ok(DEFAULT_EPSILON_SWEEP
            .iter()
            .map(|&e| InequalityAversion::finite(e))
            .collect());
    }
    cli.epsilon.iter().map(|&e| parse_epsilon(e)).collect()
}

fn load_distribution(path: &Path) -> Result<IncomeDistribution, CliError> {
    ingest::load_distribution(path).map_err(CliError::data)
}

/// Resolves an accounts argument: a plain path, or `bundled:<name>` served
/// from `HEARTHLEDGER_DATA_DIR` when set and from the embedded copy
/// otherwise.
fn resolve_accounts(arg: &str) -> Result<hearthledger::AccountsSnapshot, CliError> {
    match arg.strip_prefix("bundled:") {
        Some("turkey2014") => match std::env::var_os(DATA_DIR_ENV) {
            Some(dir) => {
                ingest::load_accounts(Path::new(&dir).join("turkey2014.csv"))
                    .map_err(CliError::data)
            }
            None => ingest::parse_accounts(bundled::TURKEY_2014_CSV).map_err(CliError::data),
        },
        Some(other) => Err(CliError::data(format!(
            "unknown bundled data set `{other}` (available: turkey2014)"
        ))),
        None => ingest::load_accounts(Path::new(arg)).map_err(CliError::data),
    }
}

fn cmd_atkinson(
    cli: &Cli,
    input: Option<&Path>,
    income: Option<f64>,
    mean: Option<f64>,
) -> Result<String, CliError> {
    let eps = single_epsilon(cli)?;
    let format = format_or(cli, Format::Text);
    match (input, income, mean) {
        (Some(path), None, None) => {
            let dist = load_distribution(path)?;
            let r = atkinson(&dist, eps);
            Ok(match format {
                Format::Text => format!(
                    "atkinson index = {:.4}\nede = {:.4} TL\nmean = {:.4} TL\n",
                    round_half_up(r.index, 4),
                    round_half_up(r.ede, 4),
                    round_half_up(r.mean, 4)
                ),
                Format::Csv => format!(
                    "key,value\nepsilon,{}\nindex,{}\nede,{}\nmean,{}\nwelfare,{}\n",
                    r.epsilon, r.index, r.ede, r.mean, r.welfare
                ),
                Format::Json => pretty_json(serde_json::json!({
                    "epsilon": epsilon_json(r.epsilon),
                    "index": r.index,
                    "ede": r.ede,
                    "mean": r.mean,
                    "welfare": r.welfare,
                })),
            })
        }
        (None, Some(income), Some(mean)) => {
            if !eps.is_finite() {
                return Err(CliError::usage("ratio input requires a finite --epsilon"));
            }
            let index = atkinson_ratio(income, mean, eps).map_err(CliError::data)?;
            Ok(match format {
                Format::Text => format!("atkinson index (ratio) = {:.4}\n", round_half_up(index, 4)),
                Format::Csv => format!(
                    "key,value\nepsilon,{eps}\nincome,{income}\nreference_mean,{mean}\nindex,{index}\n"
                ),
                Format::Json => pretty_json(serde_json::json!({
                    "epsilon": epsilon_json(eps),
                    "income": income,
                    "reference_mean": mean,
                    "index": index,
                })),
            })
        }
        _ => Err(CliError::usage(
            "provide either --input FILE or both --income and --mean",
        )),
    }
}

fn cmd_gini(cli: &Cli, input: &Path) -> Result<String, CliError> {
    let dist = load_distribution(input)?;
    let g = gini(&dist);
    Ok(match format_or(cli, Format::Text) {
        Format::Text => format!("gini = {:.4}\n", round_half_up(g, 4)),
        Format::Csv => format!("key,value\ngini,{g}\n"),
        Format::Json => pretty_json(serde_json::json!({ "gini": g })),
    })
}

fn cmd_ede(cli: &Cli, input: &Path) -> Result<String, CliError> {
    let eps = single_epsilon(cli)?;
    let dist = load_distribution(input)?;
    let value = ede(&dist, eps);
    let mean = dist.mean();
    Ok(match format_or(cli, Format::Text) {
        Format::Text => format!(
            "ede = {:.4} TL (mean {:.4} TL)\n",
            round_half_up(value, 4),
            round_half_up(mean, 4)
        ),
        Format::Csv => format!("key,value\nepsilon,{eps}\nede,{value}\nmean,{mean}\n"),
        Format::Json => pretty_json(serde_json::json!({
            "epsilon": epsilon_json(eps),
            "ede": value,
            "mean": mean,
        })),
    })
}

fn cmd_impute(cli: &Cli, accounts: &str) -> Result<String, CliError> {
    let snapshot = resolve_accounts(accounts)?;
    let r = hearthledger::impute_snapshot(&snapshot, cli.annualize).map_err(CliError::data)?;
    Ok(match format_or(cli, Format::Text) {
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "l_kev = {} TL", r.l_kev);
            let _ = writeln!(out, "l_gdp = {} TL", r.l_gdp);
            let _ = writeln!(
                out,
                "mu = {:.0} TL/month",
                round_half_up(r.mu_baseline_monthly, 0)
            );
            let _ = writeln!(
                out,
                "mu_kev = {:.0} TL/month ({:.2} TL/year)",
                round_half_up(r.mu_kev_monthly, 0),
                round_half_up(r.mu_kev_annual, 2)
            );
            if r.annualized {
                let _ = writeln!(out, "flag: NON_PAPER_ANNUALIZATION");
            }
            out
        }
        Format::Csv => format!(
            "key,value\nl_kev,{}\nl_gdp,{}\nmu_kev_annual,{}\nmu_kev_monthly,{}\nmu_baseline_monthly,{}\nannualized,{}\n",
            r.l_kev, r.l_gdp, r.mu_kev_annual, r.mu_kev_monthly, r.mu_baseline_monthly, r.annualized
        ),
        Format::Json => pretty_json(serde_json::json!({
            "l_kev": r.l_kev,
            "l_gdp": r.l_gdp,
            "mu_kev_annual": r.mu_kev_annual,
            "mu_kev_monthly": r.mu_kev_monthly,
            "mu_baseline_monthly": r.mu_baseline_monthly,
            "annualized": r.annualized,
        })),
    })
}

fn cmd_model(cli: &Cli, accounts: &str) -> Result<String, CliError> {
    let eps = single_epsilon(cli)?;
    if cli.tolerance.is_nan() || cli.tolerance < 0.0 {
        return Err(CliError::usage(format!(
            "--tolerance must be >= 0, got {}",
            cli.tolerance
        )));
    }
    if cli.mode == Mode::Ratio && !eps.is_finite() {
        return Err(CliError::usage(
            "--mode ratio requires a finite --epsilon",
        ));
    }
    let snapshot = resolve_accounts(accounts)?;
    let mut options = RunOptions::new(eps, cli.mode.into());
    options.tolerance = cli.tolerance;
    options.annualize = cli.annualize;
    options.include_zero_as_floor = cli.include_zero_as_epsilon;
    let result = run_two_stage(&snapshot, &options).map_err(CliError::data)?;
    let report = audit_report(&result);
    Ok(match format_or(cli, Format::Text) {
        Format::Text => report.to_text(),
        Format::Csv => report.to_csv(),
        Format::Json => report.to_json(),
    })
}

fn cmd_sweep(
    cli: &Cli,
    input: Option<&Path>,
    income: Option<f64>,
    mean: Option<f64>,
) -> Result<String, CliError> {
    let eps_list = epsilon_list(cli)?;
    let dist;
    let sweep_input = match (input, income, mean) {
        (Some(path), None, None) => {
            dist = load_distribution(path)?;
            SweepInput::Distribution(&dist)
        }
        (None, Some(income), Some(mean)) => {
            if eps_list.iter().any(|e| !e.is_finite()) {
                return Err(CliError::usage("ratio input requires finite --epsilon values"));
            }
            SweepInput::Ratio {
                income,
                reference_mean: mean,
            }
        }
        _ => {
            return Err(CliError::usage(
                "provide either --input FILE or both --income and --mean",
            ))
        }
    };
    let rows = epsilon_sweep(sweep_input, &eps_list).map_err(CliError::data)?;
    Ok(match format_or(cli, Format::Csv) {
        Format::Csv => {
            let mut out = String::from("epsilon,index\n");
            for SweepRow { epsilon, index } in &rows {
                let _ = writeln!(out, "{epsilon},{index}");
            }
            out
        }
        Format::Text => {
            let mut out = String::from("epsilon    index\n");
            for SweepRow { epsilon, index } in &rows {
                let _ = writeln!(out, "{epsilon:>7}   {:.4}", round_half_up(*index, 4));
            }
            out
        }
        Format::Json => {
            let items: Vec<serde_json::Value> = rows
                .iter()
                .map(|r| {
                    serde_json::json!({
                        "epsilon": epsilon_json(r.epsilon),
                        "index": r.index,
                    })
                })
                .collect();
            pretty_json(serde_json::Value::Array(items))
        }
    })
}

fn cmd_decompose(cli: &Cli, input: &Path) -> Result<String, CliError> {
    let eps = single_epsilon(cli)?;
    if !eps.is_finite() {
        return Err(CliError::usage("decompose requires a finite --epsilon"));
    }
    let (dist, labels) = ingest::load_labeled_distribution(input).map_err(CliError::data)?;
    let r = decompose(&dist, &labels, eps).map_err(CliError::data)?;
    Ok(match format_or(cli, Format::Text) {
        Format::Text => format!(
            "total = {:.4}\nbetween = {:.4}\nwithin = {:.4}\n",
            round_half_up(r.total, 4),
            round_half_up(r.between, 4),
            round_half_up(r.within, 4)
        ),
        Format::Csv => format!(
            "key,value\nepsilon,{}\ntotal,{}\nbetween,{}\nwithin,{}\n",
            eps, r.total, r.between, r.within
        ),
        Format::Json => pretty_json(serde_json::json!({
            "epsilon": epsilon_json(eps),
            "total": r.total,
            "between": r.between,
            "within": r.within,
        })),
    })
}

fn cmd_validate(path: &str) -> Result<String, CliError> {
    let bundled_content = |name: &str, embedded: &str| match std::env::var_os(DATA_DIR_ENV) {
        Some(dir) => {
            let file = Path::new(&dir).join(format!("{name}.csv"));
            fs::read_to_string(&file)
                .map_err(|e| CliError::data(format!("{}: {e}", file.display())))
        }
        None => Ok(embedded.to_string()),
    };
    let content = match path.strip_prefix("bundled:") {
        Some("turkey2014") => bundled_content("turkey2014", bundled::TURKEY_2014_CSV)?,
        Some("participation") => bundled_content("participation", bundled::PARTICIPATION_CSV)?,
        Some(other) => {
            return Err(CliError::data(format!(
                "unknown bundled data set `{other}` (available: turkey2014, participation)"
            )))
        }
        None => fs::read_to_string(path)
            .map_err(|e| CliError::data(format!("{path}: {e}")))?,
    };
    let header = content.lines().next().unwrap_or("");
    match header {
        ingest::ACCOUNTS_HEADER => {
            let snapshot = ingest::parse_accounts(&content).map_err(CliError::data)?;
            Ok(format!(
                "valid accounts snapshot for year {} (population {})\n",
                snapshot.year, snapshot.population
            ))
        }
        ingest::DISTRIBUTION_HEADER => {
            let dist = ingest::parse_distribution(&content).map_err(CliError::data)?;
            Ok(format!("valid distribution with {} points\n", dist.len()))
        }
        ingest::LABELED_DISTRIBUTION_HEADER => {
            let (dist, _) =
                ingest::parse_labeled_distribution(&content).map_err(CliError::data)?;
            Ok(format!(
                "valid labeled distribution with {} points\n",
                dist.len()
            ))
        }
        ingest::PARTICIPATION_HEADER => {
            let table = ingest::parse_participation(&content).map_err(CliError::data)?;
            let mut out = format!("valid participation table with {} rows\n", table.rows.len());
            for warning in &table.warnings {
                let _ = writeln!(out, "warning: {warning}");
            }
            Ok(out)
        }
        other => Err(CliError::data(format!(
            "unrecognized header `{other}`; expected one of the supported schemas"
        ))),
    }
}

fn epsilon_json(eps: InequalityAversion) -> serde_json::Value {
    match eps {
        InequalityAversion::Finite(e) => serde_json::json!(e),
        InequalityAversion::Infinite => serde_json::json!("infinity"),
    }
}

fn pretty_json(value: serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(&value).expect("json serializes");
    s.push('\n');
    s
}

fn round_half_up(x: f64, decimals: u32) -> f64 {
    let factor = 10f64.powi(decimals as i32);
    if x >= 0.0 {
        (x * factor + 0.5).floor() / factor
    } else {
        -((-x * factor + 0.5).floor() / factor)
    }
}

/// Writes to stdout, or atomically (temp file + rename) when a path is
/// given.
fn write_output(content: &str, path: Option<&Path>) -> Result<(), String> {
    match path {
        None => {
            print!("{content}");
            Ok(())
        }
        Some(path) => {
            let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
            let mut tmp = dir.map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from("."));
            tmp.push(format!(
                ".{}.tmp-{}",
                path.file_name()
                    .map(|n| n.to_string_lossy().into_owned())
                    .unwrap_or_else(|| "output".into()),
                std::process::id()
            ));
            fs::write(&tmp, content).map_err(|e| format!("{}: {e}", tmp.display()))?;
            fs::rename(&tmp, path).map_err(|e| {
                let _ = fs::remove_file(&tmp);
                format!("{}: {e}", path.display())
            })
        }
    }
}
