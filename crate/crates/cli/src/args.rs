//! Command-line surface and parsers for its value syntaxes.

use std::f64::consts::PI;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use paircorr_core::grid::{Grid, PlanarVector, Rational};
use paircorr_core::pair::{RenormSpec, ScalingSpec};

use crate::CliError;

#[derive(Parser, Debug)]
#[command(name = "paircorr", version, about = "Pair correlations of logarithms of lattice points")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Empirical pair correlation histogram.
    Empirical(EmpiricalArgs),
    /// Limiting density tabulated on a histogram layout.
    Theory(TheoryArgs),
    /// Distance between an empirical and a theory CSV.
    Compare(CompareArgs),
    /// Brute-force arithmetic sums against their leading terms.
    Sums(SumsArgs),
    /// Pair measure of the counts of `x² + d y² = n`.
    R2d(R2dArgs),
    /// Ortholength spectrum and its pair measure.
    Ortho(OrthoArgs),
    /// Euler-product constants of a field.
    Constants(ConstantsArgs),
}

/// Where the points come from: a named or explicit grid, or an ideal.
#[derive(Args, Debug, Clone)]
pub struct SourceArgs {
    /// `gauss`, `eisenstein` or `basis:x1,y1,x2,y2` (rational entries).
    #[arg(long)]
    pub grid: Option<String>,
    /// Offset `ax,ay` of an explicit grid.
    #[arg(long)]
    pub offset: Option<String>,
    /// Field discriminant, e.g. -4.
    #[arg(long, allow_negative_numbers = true)]
    pub field: Option<i64>,
    /// Ideal generator `x,y` meaning `x + y·ω`.
    #[arg(long, allow_hyphen_values = true)]
    pub ideal: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct LayoutArgs {
    /// Histogram layout; defaults to a cylinder strip when unscaled and a
    /// square window otherwise.
    #[arg(long, value_enum)]
    pub geometry: Option<GeometryKind>,
    /// Half-width of the window or strip, or radius of a disk.
    #[arg(long, default_value_t = 5.0)]
    pub window: f64,
    /// Bins along the first axis (and the second unless `--bins-im` is set).
    #[arg(long, default_value_t = 100)]
    pub bins: usize,
    /// Bins along the second axis.
    #[arg(long)]
    pub bins_im: Option<usize>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum GeometryKind {
    Plane,
    Cylinder,
    Polar,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum WeightArg {
    Unit,
    Euler,
}

#[derive(Args, Debug)]
#[command(args_override_self = true)]
pub struct EmpiricalArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Horizon N.
    #[arg(long = "N", alias = "horizon")]
    pub n: u64,
    /// `one`, `power:α` or `n-over-log`.
    #[arg(long, default_value = "one")]
    pub scaling: String,
    #[command(flatten)]
    pub layout: LayoutArgs,
    #[arg(long, value_enum, default_value_t = WeightArg::Unit)]
    pub weight: WeightArg,
    /// `probability`, `psi`, `n4-psi2`, `psi2`, `n6` or `value:x`; defaults
    /// to the natural divisor of the scaling regime.
    #[arg(long)]
    pub renorm: Option<String>,
    /// Include the pairs `x = y`.
    #[arg(long)]
    pub diagonal: bool,
    /// Allow probability renormalization in scaled regimes.
    #[arg(long)]
    pub force: bool,
    /// Worker threads; 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON summary path; printed to stdout when absent.
    #[arg(long)]
    pub summary: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum DensityKind {
    UnscaledUnit,
    UnscaledEuler,
    Poissonian,
    ThetaInfty,
    WeightedLinear,
}

#[derive(Args, Debug)]
#[command(args_override_self = true)]
pub struct TheoryArgs {
    #[arg(long, value_enum)]
    pub density: DensityKind,
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    #[command(flatten)]
    pub layout: LayoutArgs,
    /// `midpoint` or `sub:n` for n×n sub-sampling per bin.
    #[arg(long, default_value = "sub:4")]
    pub quadrature: String,
    #[arg(long, default_value_t = 1_000_000)]
    pub prime_bound: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[command(args_override_self = true)]
pub struct CompareArgs {
    #[arg(long)]
    pub empirical: PathBuf,
    #[arg(long)]
    pub theory: PathBuf,
    /// JSON report path; printed to stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SumKind {
    Mertens,
    Mirsky,
    IdealCount,
    Cubic,
}

#[derive(Args, Debug)]
#[command(args_override_self = true)]
pub struct SumsArgs {
    #[arg(long, value_enum)]
    pub kind: SumKind,
    #[arg(long, allow_negative_numbers = true, default_value_t = -4)]
    pub field: i64,
    /// Generator `x,y` of the ideal `𝔪`.
    #[arg(long, allow_hyphen_values = true, default_value = "1,0")]
    pub m: String,
    /// Shift `x,y`.
    #[arg(long, allow_hyphen_values = true, default_value = "1,0")]
    pub k: String,
    /// Sector direction as an element `x,y`.
    #[arg(long, allow_hyphen_values = true, default_value = "1,0")]
    pub direction: String,
    /// Sector aperture in radians.
    #[arg(long, default_value_t = 2.0 * PI)]
    pub aperture: f64,
    /// Radius, or norm bound for `ideal-count` and `cubic`.
    #[arg(long)]
    pub x: f64,
    #[arg(long, default_value_t = 1_000_000)]
    pub prime_bound: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[command(args_override_self = true)]
pub struct R2dArgs {
    #[arg(long)]
    pub d: u64,
    #[arg(long = "N", alias = "horizon")]
    pub n: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[command(args_override_self = true)]
pub struct OrthoArgs {
    #[arg(long, allow_negative_numbers = true, default_value_t = -4)]
    pub field: i64,
    #[arg(long, allow_hyphen_values = true, default_value = "1,0")]
    pub ideal: String,
    #[arg(long = "N", alias = "horizon")]
    pub n: u64,
    /// Spectrum CSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Exact pair-measure atoms CSV.
    #[arg(long)]
    pub pairs: Option<PathBuf>,
    /// Probability-renormalized 1D histogram CSV of length differences.
    #[arg(long)]
    pub hist: Option<PathBuf>,
    #[arg(long, default_value_t = -3.0, allow_negative_numbers = true)]
    pub lo: f64,
    #[arg(long, default_value_t = 3.0, allow_negative_numbers = true)]
    pub hi: f64,
    #[arg(long, default_value_t = 60)]
    pub bins: usize,
    /// Check the identity with the Euler-weighted lattice pair measure.
    #[arg(long)]
    pub verify: bool,
}

#[derive(Args, Debug)]
#[command(args_override_self = true)]
pub struct ConstantsArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub field: i64,
    #[arg(long, default_value_t = 1_000_000)]
    pub prime_bound: u64,
    /// Also evaluate `c_{𝔪,k}` for `𝔪 = (m)`.
    #[arg(long, allow_hyphen_values = true)]
    pub m: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub k: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

pub fn parse_rational(s: &str) -> Result<Rational, CliError> {
    let s = s.trim();
    let bad = || usage(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        Some((a, b)) => {
            let (a, b): (i128, i128) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
            if b == 0 {
                return Err(bad());
            }
            Ok(Rational::new(a, b))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn parse_pair(s: &str) -> Result<(i64, i64), CliError> {
    let bad = || usage(format!("expected `x,y` with integers, got {s:?}"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn parse_vector(s: &str) -> Result<PlanarVector, CliError> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(usage(format!("expected `x,y`, got {s:?}")));
    }
    Ok(PlanarVector::new(parse_rational(parts[0])?, parse_rational(parts[1])?))
}

pub fn parse_grid(name: &str, offset: Option<&str>) -> Result<Grid, CliError> {
    let g = match name {
        "gauss" => Grid::gauss(),
        "eisenstein" => Grid::eisenstein(),
        other => {
            let body = other
                .strip_prefix("basis:")
                .ok_or_else(|| usage(format!("unknown grid {other:?}; use gauss, eisenstein or basis:x1,y1,x2,y2")))?;
            let parts: Vec<&str> = body.split(',').collect();
            if parts.len() != 4 {
                return Err(usage("basis needs four entries x1,y1,x2,y2"));
            }
            let v1 = PlanarVector::new(parse_rational(parts[0])?, parse_rational(parts[1])?);
            let v2 = PlanarVector::new(parse_rational(parts[2])?, parse_rational(parts[3])?);
            return Grid::new(v1, v2, offset.map(parse_vector).transpose()?.unwrap_or_else(PlanarVector::zero), 1)
                .map_err(CliError::Core);
        }
    };
    match offset {
        Some(_) => Err(usage("--offset applies only to an explicit basis")),
        None => Ok(g),
    }
}

pub fn parse_scaling(s: &str) -> Result<ScalingSpec, CliError> {
    match s {
        "one" | "1" => Ok(ScalingSpec::ConstantOne),
        "n-over-log" => Ok(ScalingSpec::NOverLog),
        other => {
            let a = other
                .strip_prefix("power:")
                .ok_or_else(|| usage(format!("unknown scaling {other:?}; use one, power:α or n-over-log")))?;
            let a: f64 = a.parse().map_err(|_| usage(format!("bad exponent in {other:?}")))?;
            ScalingSpec::power(a).map_err(|e| usage(e.to_string()))
        }
    }
}

pub fn parse_renorm(s: &str) -> Result<RenormSpec, CliError> {
    match s {
        "probability" => Ok(RenormSpec::Probability),
        "psi" => Ok(RenormSpec::ByPsi),
        "n4-psi2" => Ok(RenormSpec::ByN4OverPsi2),
        "psi2" => Ok(RenormSpec::ByPsi2),
        "n6" => Ok(RenormSpec::ByN6),
        other => {
            let v = other.strip_prefix("value:").ok_or_else(|| {
                usage(format!("unknown renorm {other:?}; use probability, psi, n4-psi2, psi2, n6 or value:x"))
            })?;
            let v: f64 = v.parse().map_err(|_| usage(format!("bad value in {other:?}")))?;
            if !(v > 0.0 && v.is_finite()) {
                return Err(usage("explicit renormalizer must be positive"));
            }
            Ok(RenormSpec::Explicit(v))
        }
    }
}

pub fn renorm_name(r: &RenormSpec) -> String {
    match r {
        RenormSpec::Probability => "probability".into(),
        RenormSpec::ByPsi => "psi".into(),
        RenormSpec::ByN4OverPsi2 => "n4-psi2".into(),
        RenormSpec::ByPsi2 => "psi2".into(),
        RenormSpec::ByN6 => "n6".into(),
        RenormSpec::Explicit(v) => format!("value:{v}"),
    }
}
