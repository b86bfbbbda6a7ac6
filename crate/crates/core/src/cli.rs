//! Command-line front end.
//!
//! Options come from flags and, optionally, a `key=value` file given with
//! `--config`; flags win. Keys in the file use the long flag names without
//! dashes prefix (`gamma=2`, `vsq-min=-1`, ...). Lines starting with `#` are
//! comments.
//!
//! Output formats:
//!
//! * `distribution`: CSV header `vsq,N,scaledN`; JSON list of
//!   `{"vsq", "N", "scaledN"}`. The linear density diverges at `v^2 = 0`; that
//!   row holds `inf` in CSV and `null` in JSON.
//! * `moments`: CSV columns `l`, then `<route>_re,<route>_im` for each route,
//!   `routes_agree`, `m`, `factorized_re`, `factorized_im`; unavailable routes
//!   are empty. JSON list of `{"l", "routes": {route: [re, im] | null},
//!   "routes_agree", "m", "factorized": [re, im]}`.
//! * `singularities`: CSV header `n,re,im,order`; JSON list of those fields.
//! * `verify`: CSV format prints one text line per check; JSON is the list of
//!   check reports.
//!
//! Exit codes: 0 success, 1 failed check or evaluation error, 2 usage error.

use std::collections::{BTreeMap, HashMap};
use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::closed_form::{self, DistributionError};
use crate::moments::{self, ModelParams, Route, Variant};
use crate::xcheck::{self, CheckGroup, SuiteConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Relative agreement required for the `routes_agree` column.
pub const ROUTE_AGREEMENT: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Sample the area distribution on a uniform v^2 grid.
    Distribution,
    /// Scalar moments for l = 0..=L on every available route.
    Moments,
    /// List the excluded points v^2 = 4 n^2 (1 + i/gamma)^-2.
    Singularities,
    /// Run the verification suite.
    Verify,
}

#[derive(Debug, Parser)]
#[command(
    name = "regge-area",
    version,
    about = "Area distribution and moments of the Regge connection integral"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true)]
    pub gamma: Option<f64>,
    #[arg(long, global = true)]
    pub variant: Option<Variant>,
    #[arg(long = "vsq-min", global = true, allow_hyphen_values = true)]
    pub vsq_min: Option<f64>,
    #[arg(long = "vsq-max", global = true, allow_hyphen_values = true)]
    pub vsq_max: Option<f64>,
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    #[arg(long, global = true)]
    pub l: Option<usize>,
    #[arg(long, global = true)]
    pub m: Option<usize>,
    #[arg(long = "n-max", global = true)]
    pub n_max: Option<u32>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Comma-separated check groups for `verify`.
    #[arg(long, global = true, value_delimiter = ',')]
    pub only: Option<Vec<String>>,
    /// Override every check tolerance in `verify`.
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliConfig {
    pub gamma: f64,
    pub variant: Variant,
    pub vsq_min: f64,
    pub vsq_max: f64,
    pub samples: usize,
    pub l: usize,
    pub m: usize,
    pub n_max: u32,
    pub output_format: OutputFormat,
    pub output_path: Option<PathBuf>,
    pub only: Option<Vec<CheckGroup>>,
    pub tolerance: Option<f64>,
}

impl Default for CliConfig {
    fn default() -> Self {
        Self {
            gamma: 1.0,
            variant: Variant::Arcsin,
            vsq_min: -10.0,
            vsq_max: 10.0,
            samples: 201,
            l: 0,
            m: 0,
            n_max: 3,
            output_format: OutputFormat::Csv,
            output_path: None,
            only: None,
            tolerance: None,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Evaluation(String),
    #[error("cannot write output: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Evaluation(_) | CliError::Io(_) => EXIT_FAILURE,
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn parse_file(text: &str) -> Result<HashMap<String, String>, CliError> {
    let mut map = HashMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| usage(format!("config line {}: expected key=value", i + 1)))?;
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

fn file_value<T: std::str::FromStr>(
    map: &HashMap<String, String>,
    key: &str,
) -> Result<Option<T>, CliError>
where
    T::Err: std::fmt::Display,
{
    map.get(key)
        .map(|v| {
            v.parse::<T>()
                .map_err(|e| usage(format!("config key `{key}`: {e}")))
        })
        .transpose()
}

const FILE_KEYS: [&str; 12] = [
    "gamma",
    "variant",
    "vsq-min",
    "vsq-max",
    "samples",
    "l",
    "m",
    "n-max",
    "format",
    "output",
    "only",
    "tolerance",
];

impl Cli {
    /// Merges flags over the optional config file over defaults, then validates.
    pub fn resolve(&self) -> Result<CliConfig, CliError> {
        let file = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
                parse_file(&text)?
            }
            None => HashMap::new(),
        };
        if let Some(key) = file.keys().find(|k| !FILE_KEYS.contains(&k.as_str())) {
            return Err(usage(format!("unknown config key `{key}`")));
        }
        let d = CliConfig::default();
        let format = match self.format {
            Some(f) => f,
            None => match file.get("format") {
                Some(s) => OutputFormat::from_str(s, true)
                    .map_err(|e| usage(format!("config key `format`: {e}")))?,
                None => d.output_format,
            },
        };
        let only_names = match &self.only {
            Some(v) => Some(v.clone()),
            None => file.get("only").map(|s| {
                s.split(',')
                    .map(|x| x.trim().to_string())
                    .filter(|x| !x.is_empty())
                    .collect()
            }),
        };
        let only = only_names
            .map(|names: Vec<String>| {
                names
                    .iter()
                    .map(|n| n.parse::<CheckGroup>().map_err(usage))
                    .collect::<Result<Vec<_>, _>>()
            })
            .transpose()?;
        let config = CliConfig {
            gamma: self
                .gamma
                .or(file_value(&file, "gamma")?)
                .unwrap_or(d.gamma),
            variant: self
                .variant
                .or(file_value(&file, "variant")?)
                .unwrap_or(d.variant),
            vsq_min: self
                .vsq_min
                .or(file_value(&file, "vsq-min")?)
                .unwrap_or(d.vsq_min),
            vsq_max: self
                .vsq_max
                .or(file_value(&file, "vsq-max")?)
                .unwrap_or(d.vsq_max),
            samples: self
                .samples
                .or(file_value(&file, "samples")?)
                .unwrap_or(d.samples),
            l: self.l.or(file_value(&file, "l")?).unwrap_or(d.l),
            m: self.m.or(file_value(&file, "m")?).unwrap_or(d.m),
            n_max: self
                .n_max
                .or(file_value(&file, "n-max")?)
                .unwrap_or(d.n_max),
            output_format: format,
            output_path: self.output.clone().or(file_value(&file, "output")?),
            only,
            tolerance: self.tolerance.or(file_value(&file, "tolerance")?),
        };
        config.validate()?;
        Ok(config)
    }
}

impl CliConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(usage(format!(
                "--gamma must be positive and finite, got {}",
                self.gamma
            )));
        }
        if self.samples < 2 {
            return Err(usage(format!(
                "--samples must be at least 2, got {}",
                self.samples
            )));
        }
        if !(self.vsq_min < self.vsq_max) || !self.vsq_min.is_finite() || !self.vsq_max.is_finite()
        {
            return Err(usage(format!(
                "--vsq-min must be below --vsq-max, got {} and {}",
                self.vsq_min, self.vsq_max
            )));
        }
        if self.n_max == 0 {
            return Err(usage("--n-max must be positive"));
        }
        if let Some(t) = self.tolerance {
            if !(t > 0.0) {
                return Err(usage(format!("--tolerance must be positive, got {t}")));
            }
        }
        Ok(())
    }

    fn params(&self) -> Result<ModelParams, CliError> {
        ModelParams::new(self.gamma, self.variant).map_err(|e| usage(e.to_string()))
    }
}

/// 17 significant digits, decimal point, no grouping.
fn num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{x:.16e}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DistributionRow {
    pub vsq: f64,
    #[serde(rename = "N")]
    pub n: f64,
    #[serde(rename = "scaledN")]
    pub scaled_n: f64,
}

pub fn distribution_rows(config: &CliConfig) -> Result<Vec<DistributionRow>, CliError> {
    let step = (config.vsq_max - config.vsq_min) / (config.samples - 1) as f64;
    (0..config.samples)
        .map(|i| {
            let vsq = if i + 1 == config.samples {
                config.vsq_max
            } else {
                config.vsq_min + step * i as f64
            };
            let n = match closed_form::distribution(
                Complex64::new(vsq, 0.0),
                config.gamma,
                config.variant,
            ) {
                Ok(n) => n,
                Err(DistributionError::Divergent) => f64::INFINITY,
                Err(e) => return Err(CliError::Evaluation(e.to_string())),
            };
            let sample = closed_form::DistributionSample::new(vsq, n);
            Ok(DistributionRow {
                vsq,
                n,
                scaled_n: sample.scaled,
            })
        })
        .collect()
}

pub fn cmd_distribution(config: &CliConfig) -> Result<String, CliError> {
    let rows = distribution_rows(config)?;
    Ok(match config.output_format {
        OutputFormat::Csv => {
            let mut out = String::from("vsq,N,scaledN\n");
            for r in &rows {
                let _ = writeln!(out, "{},{},{}", num(r.vsq), num(r.n), num(r.scaled_n));
            }
            out
        }
        OutputFormat::Json => json(&rows),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentRow {
    pub l: usize,
    pub routes: BTreeMap<&'static str, Option<Complex64>>,
    pub routes_agree: bool,
    pub m: usize,
    pub factorized: Complex64,
}

pub fn moment_rows(config: &CliConfig) -> Result<Vec<MomentRow>, CliError> {
    let params = config.params()?;
    let eval = |e: moments::MomentError| CliError::Evaluation(e.to_string());
    (0..=config.l)
        .map(|l| {
            let mut routes = BTreeMap::new();
            let mut values = Vec::new();
            for route in Route::ALL {
                let value = if route.supports(config.variant) {
                    let v = moments::moment_scalar(l, &params, route)
                        .map_err(eval)?
                        .value;
                    values.push(v);
                    Some(v)
                } else {
                    None
                };
                routes.insert(route.name(), value);
            }
            let reference = values[0];
            let routes_agree = values
                .iter()
                .all(|v| (v - reference).norm() <= ROUTE_AGREEMENT * reference.norm());
            let factorized = moments::factorized_moment(l, config.m, &params).map_err(eval)?;
            Ok(MomentRow {
                l,
                routes,
                routes_agree,
                m: config.m,
                factorized,
            })
        })
        .collect()
}

pub fn cmd_moments(config: &CliConfig) -> Result<String, CliError> {
    let rows = moment_rows(config)?;
    Ok(match config.output_format {
        OutputFormat::Csv => {
            let mut out = String::from("l");
            for route in Route::ALL {
                let _ = write!(out, ",{0}_re,{0}_im", route.name());
            }
            out.push_str(",routes_agree,m,factorized_re,factorized_im\n");
            for r in &rows {
                let _ = write!(out, "{}", r.l);
                for route in Route::ALL {
                    match r.routes[route.name()] {
                        Some(v) => {
                            let _ = write!(out, ",{},{}", num(v.re), num(v.im));
                        }
                        None => out.push_str(",,"),
                    }
                }
                let _ = writeln!(
                    out,
                    ",{},{},{},{}",
                    r.routes_agree,
                    r.m,
                    num(r.factorized.re),
                    num(r.factorized.im)
                );
            }
            out
        }
        OutputFormat::Json => json(&rows),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SingularityRow {
    pub n: u32,
    pub re: f64,
    pub im: f64,
    pub order: u32,
}

pub fn cmd_singularities(config: &CliConfig) -> Result<String, CliError> {
    let points = closed_form::singular_points(config.gamma, config.n_max)
        .map_err(|e| usage(e.to_string()))?;
    let rows: Vec<SingularityRow> = points
        .iter()
        .map(|p| SingularityRow {
            n: p.n,
            re: p.location.re,
            im: p.location.im,
            order: p.order,
        })
        .collect();
    Ok(match config.output_format {
        OutputFormat::Csv => {
            let mut out = String::from("n,re,im,order\n");
            for r in &rows {
                let _ = writeln!(out, "{},{},{},{}", r.n, num(r.re), num(r.im), r.order);
            }
            out
        }
        OutputFormat::Json => json(&rows),
    })
}

/// Returns the rendered report and whether every check passed.
pub fn cmd_verify(config: &CliConfig) -> (String, bool) {
    let suite = SuiteConfig {
        only: config.only.clone(),
        tolerance_override: config.tolerance,
        ..SuiteConfig::default()
    };
    let reports = xcheck::run_all(&suite);
    let ok = xcheck::count_failures(&reports) == 0;
    let text = match config.output_format {
        OutputFormat::Csv => xcheck::to_text(&reports),
        OutputFormat::Json => xcheck::to_json(&reports) + "\n",
    };
    (text, ok)
}

fn json<T: Serialize + ?Sized>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("rows serialize") + "\n"
}

fn emit(config: &CliConfig, text: &str) -> Result<(), CliError> {
    match &config.output_path {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Runs one already-parsed invocation and returns the exit code.
pub fn execute(cli: &Cli) -> i32 {
    let result = cli.resolve().and_then(|config| {
        let (text, ok) = match cli.command {
            Command::Distribution => (cmd_distribution(&config)?, true),
            Command::Moments => (cmd_moments(&config)?, true),
            Command::Singularities => (cmd_singularities(&config)?, true),
            Command::Verify => cmd_verify(&config),
        };
        emit(&config, &text)?;
        Ok(ok)
    });
    match result {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli),
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_OK
            }
        }
    }
}
