//! Library side of the `qj` command-line tool: spec parsing, command dispatch and report output.

pub mod run;
pub mod spec;

use std::path::PathBuf;

use clap::Parser;
use serde_json::Value;

use quatjensen::diffops::FdConfig;
use quatjensen::quadrature::GridSize;

pub use run::{Command, Diagnostic, Report, Settings};
pub use spec::FunctionSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "qj", version, about = "Jensen formulas, Riesz pairings and Blaschke checks for quaternionic functions")]
pub struct Cli {
    pub command: Command,
    /// JSON function spec
    pub spec: PathBuf,
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long = "r")]
    pub r: Option<f64>,
    #[arg(long = "R")]
    pub big_r: Option<f64>,
    /// S3 grid as n_psi,n_theta,n_phi
    #[arg(long, value_parser = parse_grid)]
    pub grid: Option<GridSize>,
    /// Fixed finite-difference step (default 1e-2 max(|x|, 1))
    #[arg(long = "fd-h")]
    pub fd_h: Option<f64>,
    /// Richardson levels
    #[arg(long, default_value_t = 2)]
    pub richardson: usize,
    /// Mollifier widths for the riesz command, strictly decreasing
    #[arg(long = "eps-list", value_delimiter = ',')]
    pub eps_list: Option<Vec<f64>>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Residual tolerance; each command has its own default
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Bump centre for riesz
    #[arg(long, value_parser = parse_quat, default_value = "0,0,0,0")]
    pub center: [f64; 4],
    /// Bump radius for riesz
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
    /// Evaluation point for eval (repeatable)
    #[arg(long, value_parser = parse_quat)]
    pub at: Vec<[f64; 4]>,
    /// Also run the brute-force 4D pairing in riesz
    #[arg(long)]
    pub direct: bool,
    /// Boundary sample count for blaschke-verify
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
}

fn parse_numbers(s: &str) -> Result<Vec<f64>, String> {
    s.split(',').map(|t| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"))).collect()
}

fn parse_quat(s: &str) -> Result<[f64; 4], String> {
    parse_numbers(s)?.try_into().map_err(|v: Vec<f64>| format!("expected 4 components, got {}", v.len()))
}

fn parse_grid(s: &str) -> Result<GridSize, String> {
    let n: Vec<usize> = s.split(',').map(|t| t.trim().parse::<usize>().map_err(|e| format!("{t:?}: {e}"))).collect::<Result<_, _>>()?;
    match n[..] {
        [a, b, c] => GridSize::new(a, b, c).map_err(|e| e.to_string()),
        _ => Err(format!("expected n_psi,n_theta,n_phi, got {} values", n.len())),
    }
}

impl Cli {
    pub fn settings(&self) -> Settings {
        Settings {
            rho: self.rho,
            r: self.r,
            big_r: self.big_r,
            grid: self.grid.unwrap_or_default(),
            fd: FdConfig { h: self.fd_h, richardson_levels: self.richardson, min_clearance: None },
            eps_list: self.eps_list.clone(),
            seed: self.seed,
            tolerance: self.tolerance.unwrap_or(self.command.default_tolerance()),
            center: self.center,
            radius: self.radius,
            at: self.at.clone(),
            direct: self.direct,
            samples: self.samples,
        }
    }
}

/// Caps the global rayon pool at `QJ_THREADS` when set.
pub fn configure_threads(value: Option<&str>) -> Result<(), Diagnostic> {
    let Some(v) = value else { return Ok(()) };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Diagnostic::new("environment", format!("QJ_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Diagnostic::new("environment", e.to_string()))
}

/// Parse the spec file and run the command.
pub fn execute(cli: &Cli) -> Result<Report, Diagnostic> {
    let text = std::fs::read_to_string(&cli.spec)
        .map_err(|e| Diagnostic::new("io", format!("{}: {e}", cli.spec.display())))?;
    let spec = FunctionSpec::parse(&text).map_err(|e| {
        let mut d = Diagnostic::from_json(&e, &text);
        let at = match (d.line, d.column) {
            (Some(l), Some(c)) => format!(":{l}:{c}"),
            (Some(l), None) => format!(":{l}"),
            _ => String::new(),
        };
        d.message = format!("{}{at}: {}", cli.spec.display(), d.message);
        d
    })?;
    run::run(cli.command, spec, cli.settings())
}

/// Process exit code: 0 within tolerance, 2 on a breach, 1 on input errors.
pub fn exit_code(outcome: &Result<Report, Diagnostic>) -> i32 {
    match outcome {
        Ok(r) if r.within_tolerance => 0,
        Ok(_) => 2,
        Err(_) => 1,
    }
}

pub fn render(outcome: &Result<Report, Diagnostic>, format: Format) -> String {
    let value = match outcome {
        Ok(r) => serde_json::to_value(r),
        Err(d) => serde_json::to_value(serde_json::json!({ "error": d })),
    }
    .expect("reports serialize");
    match format {
        Format::Json => serde_json::to_string_pretty(&value).expect("reports serialize") + "\n",
        Format::Text => text_table(&value),
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.iter().all(|x| x.is_number()) => {
            Some(format!("[{}]", a.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")))
        }
        _ => None,
    }
}

fn flatten(prefix: &str, v: &Value, rows: &mut Vec<(String, String)>) {
    if let Some(s) = scalar(v) {
        rows.push((prefix.to_string(), s));
        return;
    }
    let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(m) => m.iter().for_each(|(k, x)| flatten(&join(k), x, rows)),
        Value::Array(a) if a.is_empty() => rows.push((prefix.to_string(), "[]".into())),
        Value::Array(a) => a.iter().enumerate().for_each(|(i, x)| flatten(&join(&i.to_string()), x, rows)),
        _ => unreachable!(),
    }
}

fn text_table(v: &Value) -> String {
    let mut rows = Vec::new();
    flatten("", v, &mut rows);
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    rows.iter().map(|(k, x)| format!("{k:<width$}  {x}\n")).collect()
}
