//! Command-line front end: configuration, data loading, and the `eval`,
//! `verify`, `profile` and `ingest-check` commands.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::automorphic::maass::{finalize_forms, parse_maass_data, spot_check_point, SPOT_CHECK_STEP};
use crate::automorphic::{load_maass_data, HPoint};
use crate::checks::{run_suite, CheckContext, LONG_TIME_NORM_BOUND};
use crate::heat::initial_condition_gap;
use crate::spectral_model::{GridConfig, SobolevIndex, SpectralGrid};
use crate::synthesis::evaluate_heat_kernel;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_WARNING: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

pub const DATA_ENV: &str = "AUTOHEAT_DATA";
pub const DEFAULT_DATA_PATH: &str = "data/maass_sl2z.txt";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub maass_data_path: PathBuf,
    pub r_max: f64,
    pub panels: usize,
    pub nodes_per_panel: usize,
    pub oracle_norm_bound: f64,
    pub long_time_norm_bound: f64,
    pub tolerances: BTreeMap<String, f64>,
    pub output_format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        let grid = GridConfig::default();
        Self {
            maass_data_path: PathBuf::from(DEFAULT_DATA_PATH),
            r_max: grid.r_max,
            panels: grid.panels,
            nodes_per_panel: grid.nodes_per_panel,
            oracle_norm_bound: 25.0,
            long_time_norm_bound: LONG_TIME_NORM_BOUND,
            tolerances: BTreeMap::new(),
            output_format: OutputFormat::Csv,
        }
    }
}

impl RunConfig {
    /// Defaults, then `AUTOHEAT_DATA`, then the file (if any).
    pub fn load(file: Option<&Path>, env_data: Option<PathBuf>) -> Result<Self, String> {
        let config = match file {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
                let bad = |e: &dyn std::fmt::Display| format!("bad config {}: {e}", path.display());
                let table: toml::Table = text.parse().map_err(|e| bad(&e))?;
                let has_path = table.contains_key("maass_data_path");
                let mut c: RunConfig = table.try_into().map_err(|e| bad(&e))?;
                if !has_path {
                    if let Some(p) = env_data.clone() {
                        c.maass_data_path = p;
                    }
                }
                c
            }
            None => {
                let mut c = RunConfig::default();
                if let Some(p) = env_data {
                    c.maass_data_path = p;
                }
                c
            }
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), String> {
        if !(self.r_max > 0.0) || !self.r_max.is_finite() {
            return Err(format!("r_max must be positive, got {}", self.r_max));
        }
        if self.panels == 0 || self.nodes_per_panel == 0 {
            return Err("panels and nodes_per_panel must be positive".into());
        }
        if !(self.oracle_norm_bound >= 4.0) || !(self.long_time_norm_bound >= 4.0) {
            return Err("oracle norm bounds must be at least 4".into());
        }
        if let Some((k, v)) = self.tolerances.iter().find(|(_, v)| !(**v > 0.0)) {
            return Err(format!("tolerance {k} must be positive, got {v}"));
        }
        Ok(())
    }

    pub fn grid_config(&self) -> GridConfig {
        GridConfig {
            r_max: self.r_max,
            panels: self.panels,
            nodes_per_panel: self.nodes_per_panel,
            ..GridConfig::default()
        }
    }

    /// Loads the cusp forms and builds the spectral grid.
    pub fn build_grid(&self) -> Result<Arc<SpectralGrid>, String> {
        let forms = load_maass_data(&self.maass_data_path).map_err(|e| e.to_string())?;
        let grid = SpectralGrid::build(forms, self.grid_config()).map_err(|e| e.to_string())?;
        Ok(Arc::new(grid))
    }
}

#[derive(Debug, Parser)]
#[command(name = "autoheat", version, about = "Heat kernel on the modular surface")]
pub struct Cli {
    /// TOML file of key = value settings; flags override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long = "r-max", global = true)]
    pub r_max: Option<f64>,
    #[arg(long = "norm-bound", global = true)]
    pub norm_bound: Option<f64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// U(t)(z) by spectral synthesis.
    Eval {
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
        #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
        x: f64,
        #[arg(long, allow_negative_numbers = true)]
        y: f64,
    },
    /// Runs a verification suite: sobolev, semigroup, heat, oracle or all.
    Verify {
        #[arg(conflicts_with = "suite_flag")]
        suite: Option<String>,
        #[arg(long = "suite")]
        suite_flag: Option<String>,
    },
    /// Initial-condition gap and Sobolev norms of Ũ(t) for each t.
    Profile {
        #[arg(long = "t-list", value_delimiter = ',', allow_hyphen_values = true)]
        t_list: Vec<f64>,
        #[arg(long = "s-list", value_delimiter = ',', default_values_t = [0, 4, 8], allow_hyphen_values = true)]
        s_list: Vec<i32>,
        #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
        x: f64,
        #[arg(long, allow_negative_numbers = true, default_value_t = 1.0)]
        y: f64,
    },
    /// Parses and validates a Maass form data file.
    IngestCheck {
        path: Option<PathBuf>,
    },
}

/// One output cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Bool(bool),
}

/// `%.12e` as in C: twelve digits after the point, two-digit signed exponent.
pub fn format_e12(v: f64) -> String {
    if !v.is_finite() {
        return format!("{v}");
    }
    let s = format!("{v:.12e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(v) => format_e12(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => if *b { "pass" } else { "fail" }.to_string(),
        }
    }

    fn json(&self) -> serde_json::Value {
        match self {
            Cell::Num(v) => format_e12(*v)
                .parse::<f64>()
                .ok()
                .and_then(serde_json::Number::from_f64)
                .map(serde_json::Value::Number)
                .unwrap_or(serde_json::Value::Null),
            Cell::Int(v) => (*v).into(),
            Cell::Text(s) => s.clone().into(),
            Cell::Bool(b) => (*b).into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => {
                let mut out = self.header.join(",");
                out.push('\n');
                for row in &self.rows {
                    out.push_str(&row.iter().map(Cell::csv).collect::<Vec<_>>().join(","));
                    out.push('\n');
                }
                out
            }
            OutputFormat::Json => {
                let records: Vec<serde_json::Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let map: serde_json::Map<String, serde_json::Value> = self
                            .header
                            .iter()
                            .cloned()
                            .zip(row.iter().map(Cell::json))
                            .collect();
                        serde_json::Value::Object(map)
                    })
                    .collect();
                let mut s = serde_json::to_string_pretty(&records).expect("serializable");
                s.push('\n');
                s
            }
        }
    }
}

/// Outcome of a command: exit code plus what goes to stdout and stderr.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(code: i32, stdout: String) -> Self {
        Self {
            code,
            stdout,
            stderr: String::new(),
        }
    }

    fn fail(code: i32, message: impl Into<String>) -> Self {
        let mut stderr = message.into();
        stderr.push('\n');
        Self {
            code,
            stdout: String::new(),
            stderr,
        }
    }
}

pub fn cmd_eval(t: f64, x: f64, y: f64, config: &RunConfig) -> Outcome {
    let z = match HPoint::new(x, y) {
        Ok(z) => z,
        Err(e) => return Outcome::fail(EXIT_USAGE, format!("error: {e}")),
    };
    if !(t > 0.0) || !t.is_finite() {
        return Outcome::fail(EXIT_ERROR, format!("error: eval requires t > 0, got t = {t}"));
    }
    let grid = match config.build_grid() {
        Ok(g) => g,
        Err(e) => return Outcome::fail(EXIT_ERROR, format!("error: {e}")),
    };
    let report = match evaluate_heat_kernel(t, z, &grid) {
        Ok(r) => r,
        Err(e) => return Outcome::fail(EXIT_ERROR, format!("error: {e}")),
    };
    let mut table = Table::new(&[
        "t",
        "x",
        "y",
        "value",
        "cusp_part",
        "residual_part",
        "eisenstein_part",
        "tail_estimate",
    ]);
    table.rows.push(
        [
            t,
            x,
            y,
            report.value.re,
            report.cusp_part.re,
            report.residual_part.re,
            report.eisenstein_part.re,
            report.tail_estimate,
        ]
        .into_iter()
        .map(Cell::Num)
        .collect(),
    );
    let mut out = Outcome::ok(EXIT_OK, table.render(config.output_format));
    if report.tail_warning {
        out.code = EXIT_WARNING;
        out.stderr = format!(
            "warning: omitted r > {} contribution estimated at {:e}\n",
            grid.r_max(),
            report.tail_estimate
        );
    }
    out
}

pub fn cmd_verify(suite: &str, config: &RunConfig) -> Outcome {
    if !crate::checks::SUITES.contains(&suite) {
        return Outcome::fail(
            EXIT_USAGE,
            format!(
                "error: unknown suite '{suite}' (expected one of {})",
                crate::checks::SUITES.join(", ")
            ),
        );
    }
    let grid = match config.build_grid() {
        Ok(g) => g,
        Err(e) => return Outcome::fail(EXIT_ERROR, format!("error: {e}")),
    };
    let mut ctx = CheckContext::new(grid);
    ctx.oracle_norm_bound = config.oracle_norm_bound;
    ctx.long_time_norm_bound = config.long_time_norm_bound;
    ctx.tolerances = config.tolerances.clone();
    let rows = match run_suite(suite, &ctx).expect("suite name checked") {
        Ok(rows) => rows,
        Err(e) => return Outcome::fail(EXIT_ERROR, format!("error: {e}")),
    };
    let mut table = Table::new(&["name", "measured", "bound", "pass"]);
    for r in &rows {
        table.rows.push(vec![
            Cell::Text(r.name.clone()),
            Cell::Num(r.measured),
            Cell::Text(r.bound.to_string()),
            Cell::Bool(r.pass),
        ]);
    }
    let code = if rows.iter().all(|r| r.pass) { EXIT_OK } else { EXIT_ERROR };
    Outcome::ok(code, table.render(config.output_format))
}

pub fn cmd_profile(t_list: &[f64], s_list: &[i32], z: (f64, f64), config: &RunConfig) -> Outcome {
    if t_list.is_empty() {
        return Outcome::fail(EXIT_USAGE, "error: --t-list must not be empty");
    }
    if s_list.is_empty() {
        return Outcome::fail(EXIT_USAGE, "error: --s-list must not be empty");
    }
    if let Some(t) = t_list.iter().find(|t| !(**t > 0.0) || !t.is_finite()) {
        return Outcome::fail(EXIT_USAGE, format!("error: profile times must be positive, got {t}"));
    }
    let increasing = t_list.windows(2).all(|w| w[0] < w[1]);
    let decreasing = t_list.windows(2).all(|w| w[0] > w[1]);
    if !(increasing || decreasing) {
        return Outcome::fail(EXIT_USAGE, "error: --t-list must be strictly monotone");
    }
    if let Err(e) = HPoint::new(z.0, z.1) {
        return Outcome::fail(EXIT_USAGE, format!("error: {e}"));
    }
    let grid = match config.build_grid() {
        Ok(g) => g,
        Err(e) => return Outcome::fail(EXIT_ERROR, format!("error: {e}")),
    };
    let s_idx: Vec<SobolevIndex> = s_list.iter().copied().map(SobolevIndex).collect();
    let mut header = vec!["t".to_string(), "gap".to_string()];
    header.extend(s_list.iter().map(|s| format!("s{s}")));
    let mut table = Table {
        header,
        rows: Vec::new(),
    };
    for &t in t_list {
        let gap = match initial_condition_gap(&grid, t) {
            Ok(g) => g,
            Err(e) => return Outcome::fail(EXIT_ERROR, format!("error: {e}")),
        };
        let u = match crate::heat::heat_coefficients(t, &grid) {
            Ok(h) => h.coeffs,
            Err(e) => return Outcome::fail(EXIT_ERROR, format!("error: {e}")),
        };
        let mut row = vec![Cell::Num(t), Cell::Num(gap)];
        row.extend(s_idx.iter().map(|&s| Cell::Num(u.norm_vs(s))));
        table.rows.push(row);
    }
    Outcome::ok(EXIT_OK, table.render(config.output_format))
}

pub fn cmd_ingest_check(path: &Path, format: OutputFormat) -> Outcome {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return Outcome::fail(EXIT_ERROR, format!("error: cannot read {}: {e}", path.display())),
    };
    let raw = match parse_maass_data(&text, &path.display().to_string()) {
        Ok(f) => f,
        Err(e) => return Outcome::fail(EXIT_ERROR, format!("error: {e}")),
    };
    let mut forms = raw.clone();
    if let Err(e) = finalize_forms(&mut forms) {
        return Outcome::fail(EXIT_ERROR, format!("error: {e}"));
    }
    let mut table = Table::new(&["r", "parity", "coefficients", "laplacian_residual", "norm_constant"]);
    for f in &forms {
        let residual = f.laplacian_residual(spot_check_point(), SPOT_CHECK_STEP).unwrap_or(f64::NAN);
        table.rows.push(vec![
            Cell::Num(f.r),
            Cell::Text(f.parity.to_string()),
            Cell::Int(f.coeffs.len() as i64),
            Cell::Num(residual),
            Cell::Num(f.c_norm),
        ]);
    }
    Outcome::ok(EXIT_OK, table.render(format))
}

/// Parses arguments and runs one command.
pub fn run<I, T>(args: I, env_data: Option<PathBuf>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome::ok(code, text)
            } else {
                Outcome::fail(code, text.trim_end())
            };
        }
    };
    let mut config = match RunConfig::load(cli.config.as_deref(), env_data) {
        Ok(c) => c,
        Err(e) => return Outcome::fail(EXIT_USAGE, format!("error: {e}")),
    };
    if let Some(r) = cli.r_max {
        config.r_max = r;
    }
    if let Some(b) = cli.norm_bound {
        config.oracle_norm_bound = b;
    }
    if let Some(f) = cli.format {
        config.output_format = f;
    }
    if let Err(e) = config.validate() {
        return Outcome::fail(EXIT_USAGE, format!("error: {e}"));
    }
    match cli.command {
        Command::Eval { t, x, y } => cmd_eval(t, x, y, &config),
        Command::Verify { suite, suite_flag } => match suite.or(suite_flag) {
            Some(s) => cmd_verify(&s, &config),
            None => Outcome::fail(EXIT_USAGE, "error: verify needs a suite name"),
        },
        Command::Profile { t_list, s_list, x, y } => cmd_profile(&t_list, &s_list, (x, y), &config),
        Command::IngestCheck { path } => {
            let path = path.unwrap_or_else(|| config.maass_data_path.clone());
            cmd_ingest_check(&path, config.output_format)
        }
    }
}

/// Writes an outcome to the given streams and returns its exit code.
pub fn emit<O: Write, E: Write>(outcome: &Outcome, out: &mut O, err: &mut E) -> i32 {
    let _ = out.write_all(outcome.stdout.as_bytes());
    let _ = err.write_all(outcome.stderr.as_bytes());
    outcome.code
}
