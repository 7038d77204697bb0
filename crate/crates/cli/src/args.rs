use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use crofton_core::crofton::{Epsilon, Method};
use crofton_core::shapes::{Shape, PEANUT_ALPHA_B, PEANUT_C};

use crate::CliError;

#[derive(Parser, Debug)]
#[command(name = "crofton", version, about = "Boundary measure estimation from point samples")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Draw a point cloud from a shape, iid or along a reflected Brownian path.
    Sample(SampleArgs),
    /// Estimate the boundary measure of the set behind a point cloud.
    Estimate(EstimateArgs),
    /// Sweep sample sizes on a known shape and report errors as CSV.
    Bench(BenchArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShapeName {
    Disk,
    Annulus,
    RoundedSquare,
    Peanut,
    #[value(alias = "ball")]
    Ball3,
    #[value(alias = "shell")]
    Shell3,
    Torus,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum MethodName {
    Dw,
    DwCapped,
    Alpha,
}

impl MethodName {
    pub fn label(self) -> &'static str {
        match self {
            MethodName::Dw => "dw",
            MethodName::DwCapped => "dw-capped",
            MethodName::Alpha => "alpha",
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct ShapeArgs {
    #[arg(long, value_enum)]
    pub shape: ShapeName,
    /// Radius of a disk or ball; tube radius of a torus.
    #[arg(long)]
    pub r: Option<f64>,
    #[arg(long)]
    pub r1: Option<f64>,
    #[arg(long)]
    pub r2: Option<f64>,
    #[arg(long)]
    pub side: Option<f64>,
    #[arg(long)]
    pub rho: Option<f64>,
    /// Peanut lobe offset.
    #[arg(long)]
    pub c: Option<f64>,
    /// Peanut bridge radius.
    #[arg(long = "alpha-b")]
    pub alpha_b: Option<f64>,
    /// Torus core radius.
    #[arg(long = "R")]
    pub big_r: Option<f64>,
}

impl ShapeArgs {
    pub fn build(&self) -> Result<Shape, CliError> {
        let or = |v: Option<f64>, d: f64| v.unwrap_or(d);
        let shape = match self.shape {
            ShapeName::Disk => Shape::disk(or(self.r, 1.0)),
            ShapeName::Annulus => Shape::annulus(or(self.r1, 1.0), or(self.r2, 2.0)),
            ShapeName::RoundedSquare => Shape::rounded_square(or(self.side, 2.0), or(self.rho, 0.3)),
            ShapeName::Peanut => Shape::peanut(or(self.c, PEANUT_C), or(self.alpha_b, PEANUT_ALPHA_B)),
            ShapeName::Ball3 => Shape::ball3(or(self.r, 1.0)),
            ShapeName::Shell3 => Shape::shell3(or(self.r1, 1.0), or(self.r2, 2.0)),
            ShapeName::Torus => Shape::torus(or(self.big_r, 2.0), or(self.r, 0.5)),
        };
        shape.map_err(|e| CliError::Usage(e.to_string()))
    }
}

#[derive(Args, Debug)]
pub struct SampleArgs {
    #[command(flatten)]
    pub shape: ShapeArgs,
    /// Number of iid points. Ignored when --t-end is given.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Record a reflected Brownian path up to this time instead of iid points.
    #[arg(long = "t-end")]
    pub t_end: Option<f64>,
    #[arg(long, default_value_t = 1e-3)]
    pub dt: f64,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_epsilon(s: &str) -> Result<Epsilon, String> {
    if s.eq_ignore_ascii_case("auto") {
        return Ok(Epsilon::Auto);
    }
    s.parse::<f64>()
        .map(Epsilon::Fixed)
        .map_err(|_| format!("`{s}` is neither `auto` nor a number"))
}

#[derive(Args, Debug, Clone)]
pub struct MethodArgs {
    /// Ball radius: `auto` or a positive number.
    #[arg(long, default_value = "auto", value_parser = parse_epsilon)]
    pub epsilon: Epsilon,
    /// Radius for the alpha method.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Crossing cap for dw-capped.
    #[arg(long)]
    pub cap: Option<usize>,
    /// Number of directions.
    #[arg(long, default_value_t = 50)]
    pub k: usize,
    /// Lines per direction.
    #[arg(long, default_value_t = 200)]
    pub l: usize,
}

impl MethodArgs {
    pub fn method(&self, name: MethodName) -> Result<Method, CliError> {
        match name {
            MethodName::Dw => Ok(Method::Dw { epsilon: self.epsilon }),
            MethodName::DwCapped => {
                let cap = self
                    .cap
                    .ok_or_else(|| CliError::Usage("--cap is required for dw-capped".into()))?;
                Ok(Method::DwCapped {
                    epsilon: self.epsilon,
                    cap,
                })
            }
            MethodName::Alpha => {
                let alpha = self
                    .alpha
                    .ok_or_else(|| CliError::Usage("--alpha is required for the alpha method".into()))?;
                Ok(Method::Alpha { alpha })
            }
        }
    }

    pub fn epsilon_label(&self) -> String {
        match self.epsilon {
            Epsilon::Auto => "auto".into(),
            Epsilon::Fixed(v) => v.to_string(),
        }
    }
}

#[derive(Args, Debug)]
pub struct EstimateArgs {
    /// Point cloud in the crofton-points CSV format.
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub method: MethodName,
    #[command(flatten)]
    pub params: MethodArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[command(flatten)]
    pub shape: ShapeArgs,
    /// Comma-separated sample sizes; may be empty.
    #[arg(long, default_value = "1000,4000,16000")]
    pub sweep: String,
    #[arg(long, default_value_t = 5)]
    pub reps: u64,
    /// Comma-separated methods.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "dw")]
    pub method: Vec<MethodName>,
    #[command(flatten)]
    pub params: MethodArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl BenchArgs {
    pub fn sizes(&self) -> Result<Vec<usize>, CliError> {
        self.sweep
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse()
                    .map_err(|_| CliError::Usage(format!("--sweep: `{s}` is not a sample size")))
            })
            .collect()
    }
}
