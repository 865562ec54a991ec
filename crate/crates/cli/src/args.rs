use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(
    name = "ncpii",
    version,
    about = "Noncommutative PII hierarchy toolkit"
)]
pub struct Cli {
    /// Write the artifact here instead of stdout.
    #[arg(long, short = 'o', global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Lenard polynomial L_n[U].
    Lenard(SymbolicArgs),
    /// The n-th hierarchy member, solved for W_{2nS}.
    Hierarchy(SymbolicArgs),
    /// Lax pair coefficients and compatibility checks.
    Lax(LaxArgs),
    /// Generalized Airy function values on a grid.
    Airy(AiryArgs),
    /// Fredholm determinant along the diagonal flow.
    Fredholm(FredholmArgs),
    /// Compare -Tr W^2 from the ODE with (d/dt)^2 ln F.
    VerifyIdentity(VerifyArgs),
    /// Run the symbolic golden suite.
    Selftest,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SymbolicFormat {
    Text,
    Json,
    Latex,
}

#[derive(Args, Debug)]
pub struct SymbolicArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = SymbolicFormat::Text)]
    pub format: SymbolicFormat,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LaxCheck {
    Symbolic,
    Numeric,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Text,
    Json,
}

#[derive(Args, Debug)]
pub struct LaxArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = LaxCheck::Symbolic)]
    pub check: LaxCheck,
    #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
    pub format: ReportFormat,
    /// Matrix size for numeric checks.
    #[arg(long, default_value_t = 2)]
    pub r: usize,
    /// Random consistent jets for numeric checks.
    #[arg(long, default_value_t = 3)]
    pub jets: usize,
    /// Spectral parameters per jet.
    #[arg(long, default_value_t = 5)]
    pub lambdas: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Largest accepted relative residual for numeric checks.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TableFormat {
    Csv,
    Json,
}

#[derive(Args, Debug)]
pub struct AiryArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub deriv: usize,
    /// Grid `a:b:step`.
    #[arg(long, allow_hyphen_values = true)]
    pub x: GridSpec,
    #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
    pub out: TableFormat,
    /// Gauss-Legendre nodes per contour panel.
    #[arg(long, default_value_t = 20)]
    pub nodes: usize,
}

#[derive(Args, Debug)]
pub struct FredholmArgs {
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    /// Coupling JSON `{"r": .., "C": [[..]], "sigma": [..]}`.
    #[arg(long)]
    pub coupling: PathBuf,
    /// Grid `a:b:step`.
    #[arg(long, allow_hyphen_values = true)]
    pub t: GridSpec,
    #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
    pub out: TableFormat,
    /// Quadrature nodes on [0, T].
    #[arg(long, default_value_t = 100)]
    pub m: usize,
    /// Truncation point T (default depends on n).
    #[arg(long = "t-max")]
    pub t_max: Option<f64>,
    /// Also evaluate with 2m nodes and report the difference.
    #[arg(long)]
    pub estimate_error: bool,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[arg(long)]
    pub coupling: PathBuf,
    /// Grid `a:b:step`; the step is also the finite-difference step.
    #[arg(long, allow_hyphen_values = true)]
    pub t: GridSpec,
    /// ODE start time (default depends on n).
    #[arg(long, allow_hyphen_values = true)]
    pub t0: Option<f64>,
    #[arg(long, value_enum, default_value_t = TableFormat::Json)]
    pub report: TableFormat,
    #[arg(long, default_value_t = 100)]
    pub m: usize,
    #[arg(long = "t-max")]
    pub t_max: Option<f64>,
    /// Nominal RK4 step.
    #[arg(long, default_value_t = 1e-3)]
    pub dt: f64,
    /// Largest accepted residual.
    #[arg(long, default_value_t = 1e-3)]
    pub tol: f64,
}

/// `a:b:step` with `a <= b` and `step > 0`.
#[derive(Copy, Clone, Debug, PartialEq, Serialize)]
pub struct GridSpec {
    pub a: f64,
    pub b: f64,
    pub step: f64,
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("expected a:b:step, got `{s}`"));
        }
        let num = |p: &str| p.trim().parse::<f64>().map_err(|e| format!("`{p}`: {e}"));
        let g = GridSpec {
            a: num(parts[0])?,
            b: num(parts[1])?,
            step: num(parts[2])?,
        };
        if !(g.step > 0.0) || !(g.b >= g.a) || !g.a.is_finite() || !g.b.is_finite() {
            return Err(format!("grid `{s}` needs a <= b and step > 0"));
        }
        Ok(g)
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.a, self.b, self.step)
    }
}
