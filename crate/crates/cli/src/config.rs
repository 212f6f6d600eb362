use clap::{Args, Parser, Subcommand, ValueEnum};
use fracradon::fracradon::{Method, TransformKind};
use fracradon::{Error, Grid1D, Result, TestFunction};
use serde::Serialize;
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(name = "fracradon", version, about = "Fractional Radon-type transforms: evaluation, verification and norm audits")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate R, T, T* or P of a corpus function along one line.
    Transform(TransformArgs),
    /// Tabulate a fractional transform along one line, with a spectral cross-check.
    Fracint(FracintArgs),
    /// Run a verification suite; exits 1 if any check fails.
    Verify(VerifyArgs),
    /// Weighted norm audits against the sharp constants.
    Norms(NormsArgs),
    /// Plot-ready tables.
    Report(ReportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Input function, e.g. `gaussian:a=1` or `bandlimited:r0=1,r1=3,seed=7`.
    #[arg(long = "fn", default_value = "gaussian:a=1")]
    pub function: String,
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// Fills in the seed of a bandlimited input that does not name one.
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub out: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Axis {
    #[arg(long, default_value_t = -4.0, allow_negative_numbers = true)]
    pub lo: f64,
    #[arg(long, default_value_t = 4.0, allow_negative_numbers = true)]
    pub hi: f64,
    #[arg(long, default_value_t = 513)]
    pub count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LineOp {
    Radon,
    Transversal,
    Dual,
    Parabolic,
}

#[derive(Debug, Args)]
pub struct TransformArgs {
    #[arg(long, value_enum)]
    pub op: LineOp,
    /// Direction angles: one for n=2, polar and azimuth for n=3.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub theta: Vec<f64>,
    /// Fixed x' of a vertical line (T, T*, P).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub xprime: Vec<f64>,
    #[command(flatten)]
    pub axis: Axis,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct FracintArgs {
    /// R, T, Tstar or P.
    #[arg(long)]
    pub op: TransformKind,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub alpha_im: f64,
    /// direct, continued, hypersingular or spectral.
    #[arg(long, default_value = "continued")]
    pub method: Method,
    /// Difference order of the hypersingular integral.
    #[arg(long, default_value_t = 1)]
    pub ell: usize,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub theta: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub xprime: Vec<f64>,
    #[command(flatten)]
    pub axis: Axis,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Identities,
    Constants,
    Sharpness,
    All,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::Identities)]
    pub suite: Suite,
    /// Multiplies every tolerance of the suite.
    #[arg(long, default_value_t = 1.0)]
    pub tol_scale: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NormOp {
    Radon,
    Transversal,
    Both,
    /// `R^alpha_+` in the weighted and unweighted regimes that admit `p`.
    Fractional,
    Parabolic,
}

#[derive(Debug, Args)]
pub struct NormsArgs {
    #[arg(long, value_enum, default_value_t = NormOp::Both)]
    pub op: NormOp,
    #[arg(long, default_value_t = 1.0)]
    pub p: f64,
    /// Offset cells per unit length of the cylinder grid.
    #[arg(long, default_value_t = 100)]
    pub density: usize,
    /// Order of the fractional audit.
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    /// Right end of the offset grid of the fractional audit; a closed-form tail covers the rest.
    #[arg(long, default_value_t = 40.0)]
    pub reach: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TableKind {
    /// Riemann-Liouville integrals of e^{-t^2} for several orders.
    Rl,
    /// Partial integrals of the logdecay witnesses.
    Ladder,
    /// Distribution function of R^{1/2} of a mollifier.
    Weak,
    /// Error of the |Gamma(a+ib)| asymptotic in b.
    Gamma,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[arg(long, value_enum)]
    pub table: TableKind,
    /// Orders of the rl table.
    #[arg(long, value_delimiter = ',', default_value = "0.25,0.5,1")]
    pub alpha: Vec<f64>,
    #[command(flatten)]
    pub axis: Axis,
    #[command(flatten)]
    pub common: Common,
}

/// The effective configuration after defaulting, echoed into every report header.
#[derive(Debug, Clone, Default, Serialize)]
pub struct RunConfig {
    pub subcommand: String,
    pub function: String,
    pub n: usize,
    pub seed: u64,
    pub format: Option<Format>,
    pub grid: Option<String>,
    pub op: Option<String>,
    pub alpha: Option<String>,
    pub method: Option<String>,
    pub ell: Option<usize>,
    pub theta: Option<String>,
    pub xprime: Option<String>,
    pub suite: Option<Suite>,
    pub tol_scale: Option<f64>,
    pub p: Option<f64>,
    pub table: Option<TableKind>,
}

impl Common {
    /// Parses the DSL, letting `--seed` fill in a missing bandlimited seed.
    pub fn input(&self) -> Result<TestFunction> {
        let spec = self.function.trim();
        let spec = if spec.starts_with("bandlimited") && !spec.contains("seed=") {
            let sep = if spec.contains(':') { "," } else { ":" };
            format!("{spec}{sep}seed={}", self.seed)
        } else {
            spec.to_string()
        };
        let f = TestFunction::parse(&spec, self.n)?;
        if f.dimension() != self.n {
            return Err(Error::InvalidParameter(format!("--fn has n={} but --n is {}", f.dimension(), self.n)));
        }
        Ok(f)
    }

    pub fn config(&self, subcommand: &str, f: &TestFunction) -> RunConfig {
        RunConfig {
            subcommand: subcommand.to_string(),
            function: f.to_string(),
            n: self.n,
            seed: self.seed,
            format: Some(self.out),
            ..Default::default()
        }
    }
}

impl Axis {
    pub fn grid(&self) -> Result<Grid1D> {
        Grid1D::new(self.lo, self.hi, self.count)
    }

    pub fn label(&self) -> String {
        format!("[{}, {}] x {}", self.lo, self.hi, self.count)
    }
}

pub fn list(v: &[f64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(";")
}

/// Unit vector from `n - 1` angles: `(cos a, sin a)` or
/// `(sin a cos b, sin a sin b, cos a)` with `a` measured from `e_n`.
pub fn direction(angles: &[f64], n: usize) -> Result<Vec<f64>> {
    let mut a = angles.to_vec();
    a.resize(n - 1, 0.0);
    if angles.len() > n - 1 {
        return Err(Error::DimensionMismatch { expected: n - 1, got: angles.len() });
    }
    match n {
        2 => Ok(vec![a[0].cos(), a[0].sin()]),
        3 => Ok(vec![a[0].sin() * a[1].cos(), a[0].sin() * a[1].sin(), a[0].cos()]),
        _ => Err(Error::InvalidParameter(format!("directions need n in {{2,3}}, got {n}"))),
    }
}

/// `x'` padded with zeros to `n - 1` coordinates.
pub fn xprime(v: &[f64], n: usize) -> Result<Vec<f64>> {
    if v.len() > n - 1 {
        return Err(Error::DimensionMismatch { expected: n - 1, got: v.len() });
    }
    let mut x = v.to_vec();
    x.resize(n - 1, 0.0);
    Ok(x)
}
