use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::Path;

use crofton_core::cloud::PointCloud;
use crofton_core::crofton::{estimate as run_estimate, Estimate};
use crofton_core::rbm::{simulate_rbm, RbmConfig};
use crofton_core::shapes::sample_iid;
use serde::Serialize;

use crate::args::{BenchArgs, EstimateArgs, SampleArgs};
use crate::record::{RunContext, RunRecord, HEADER};
use crate::CliError;

fn open_out(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    match path {
        None => Ok(Box::new(BufWriter::new(io::stdout().lock()))),
        Some(p) => File::create(p)
            .map(|f| Box::new(BufWriter::new(f)) as Box<dyn Write>)
            .map_err(|e| CliError::Data(format!("cannot write {}: {e}", p.display()))),
    }
}

fn io_err(e: impl std::fmt::Display) -> CliError {
    CliError::Data(format!("write failed: {e}"))
}

fn checked(est: Estimate) -> Result<Estimate, CliError> {
    if est.value.is_finite() && est.stderr.is_finite() {
        Ok(est)
    } else {
        Err(CliError::Numerical(format!(
            "estimate is not finite (value {}, stderr {})",
            est.value, est.stderr
        )))
    }
}

pub fn sample(a: &SampleArgs) -> Result<(), CliError> {
    let shape = a.shape.build()?;
    let cloud = match a.t_end {
        Some(t_end) => {
            let cfg = RbmConfig::new(shape.clone(), RbmConfig::default_start(&shape), a.dt, t_end, a.seed);
            simulate_rbm(&cfg)?
        }
        None => {
            let n = a
                .n
                .ok_or_else(|| CliError::Usage("--n is required unless --t-end is given".into()))?;
            sample_iid(&shape, n, a.seed)?
        }
    };
    let mut out = open_out(a.out.as_deref())?;
    cloud.write_csv(&mut out).map_err(io_err)?;
    out.flush().map_err(io_err)
}

#[derive(Serialize)]
struct EstimateOutput<'a> {
    command: &'static str,
    input: String,
    dim: usize,
    method: &'static str,
    seed: u64,
    #[serde(flatten)]
    estimate: &'a Estimate,
}

pub fn estimate(a: &EstimateArgs) -> Result<(), CliError> {
    let file = File::open(&a.input).map_err(|e| CliError::Data(format!("cannot read {}: {e}", a.input.display())))?;
    let cloud = PointCloud::read_csv(BufReader::new(file))
        .map_err(|e| CliError::Data(format!("{}: {e}", a.input.display())))?;
    let method = a.params.method(a.method)?;
    let est = checked(run_estimate(&cloud, method, a.params.k, a.params.l, a.seed)?)?;
    let doc = EstimateOutput {
        command: "estimate",
        input: a.input.display().to_string(),
        dim: cloud.dim(),
        method: a.method.label(),
        seed: a.seed,
        estimate: &est,
    };
    let mut out = open_out(a.out.as_deref())?;
    serde_json::to_writer_pretty(&mut out, &doc).map_err(io_err)?;
    writeln!(out).map_err(io_err)?;
    out.flush().map_err(io_err)
}

/// Runs every (size, replicate, method) combination. Replicate `r` uses
/// seed `seed + r` for both the sample and the lines, so methods are
/// compared on the same data.
pub fn bench(a: &BenchArgs) -> Result<(), CliError> {
    let shape = a.shape.build()?;
    let sizes = a.sizes()?;
    let methods = a
        .method
        .iter()
        .map(|&m| a.params.method(m).map(|method| (m, method)))
        .collect::<Result<Vec<_>, _>>()?;
    let epsilon_arg = a.params.epsilon_label();

    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(open_out(a.out.as_deref())?);
    w.write_record(HEADER).map_err(io_err)?;
    for &n in &sizes {
        for rep in 0..a.reps {
            let seed = a.seed.wrapping_add(rep);
            let cloud = sample_iid(&shape, n, seed)?;
            for &(name, method) in &methods {
                let est = checked(run_estimate(&cloud, method, a.params.k, a.params.l, seed)?)?;
                let ctx = RunContext {
                    shape: &shape,
                    n,
                    rep,
                    seed,
                    method: name.label(),
                    epsilon_arg: &epsilon_arg,
                };
                w.serialize(RunRecord::new(&ctx, &est)).map_err(io_err)?;
            }
        }
    }
    w.flush().map_err(io_err)
}
