use crofton_core::crofton::Estimate;
use serde::{Deserialize, Serialize};

/// One row of `bench` output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub command: String,
    pub shape: String,
    /// The shape with all its parameters, as JSON.
    pub shape_params: String,
    pub n: usize,
    pub rep: u64,
    pub seed: u64,
    pub method: String,
    pub epsilon_arg: String,
    pub k: usize,
    pub l: usize,
    pub half_width: f64,
    pub value: f64,
    pub stderr: f64,
    pub epsilon: Option<f64>,
    pub alpha: Option<f64>,
    pub cap: Option<usize>,
    pub centers_filtered: Option<bool>,
    pub n_points: usize,
    pub runtime_ms: f64,
    pub truth: Option<f64>,
    pub abs_error: Option<f64>,
    pub rel_error: Option<f64>,
}

/// Column names in field order. Written up front so that an empty sweep
/// still produces a header.
pub const HEADER: [&str; 22] = [
    "command",
    "shape",
    "shape_params",
    "n",
    "rep",
    "seed",
    "method",
    "epsilon_arg",
    "k",
    "l",
    "half_width",
    "value",
    "stderr",
    "epsilon",
    "alpha",
    "cap",
    "centers_filtered",
    "n_points",
    "runtime_ms",
    "truth",
    "abs_error",
    "rel_error",
];

pub struct RunContext<'a> {
    pub shape: &'a crofton_core::shapes::Shape,
    pub n: usize,
    pub rep: u64,
    pub seed: u64,
    pub method: &'a str,
    pub epsilon_arg: &'a str,
}

impl RunRecord {
    pub fn new(ctx: &RunContext, est: &Estimate) -> Self {
        let truth = Some(ctx.shape.boundary_measure());
        let abs_error = truth.map(|t| (est.value - t).abs());
        RunRecord {
            command: "bench".into(),
            shape: ctx.shape.name().into(),
            shape_params: serde_json::to_string(ctx.shape).expect("shape serializes"),
            n: ctx.n,
            rep: ctx.rep,
            seed: ctx.seed,
            method: ctx.method.into(),
            epsilon_arg: ctx.epsilon_arg.into(),
            k: est.plan.k,
            l: est.plan.l,
            half_width: est.plan.half_width,
            value: est.value,
            stderr: est.stderr,
            epsilon: est.epsilon,
            alpha: est.alpha,
            cap: est.cap,
            centers_filtered: est.centers_filtered,
            n_points: est.n_points,
            runtime_ms: est.runtime_ms,
            truth,
            abs_error,
            rel_error: truth.zip(abs_error).map(|(t, a)| a / t),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crofton_core::crofton::{estimate, Epsilon, Method};
    use crofton_core::shapes::{sample_iid, Shape};

    fn record() -> RunRecord {
        let shape = Shape::annulus(1.0, 2.0).unwrap();
        let cloud = sample_iid(&shape, 300, 1).unwrap();
        let est = estimate(&cloud, Method::Dw { epsilon: Epsilon::Auto }, 4, 5, 1).unwrap();
        let ctx = RunContext {
            shape: &shape,
            n: 300,
            rep: 0,
            seed: 1,
            method: "dw",
            epsilon_arg: "auto",
        };
        RunRecord::new(&ctx, &est)
    }

    #[test]
    fn header_matches_serialized_fields() {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.serialize(record()).unwrap();
        let text = String::from_utf8(w.into_inner().unwrap()).unwrap();
        let first = text.lines().next().unwrap();
        assert_eq!(first, HEADER.join(","));
    }

    #[test]
    fn csv_round_trip_is_lossless() {
        let rec = record();
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
        w.write_record(HEADER).unwrap();
        w.serialize(&rec).unwrap();
        let bytes = w.into_inner().unwrap();
        let mut r = csv::Reader::from_reader(bytes.as_slice());
        let back: Vec<RunRecord> = r.deserialize().collect::<Result<_, _>>().unwrap();
        assert_eq!(back, vec![rec.clone()]);
        let rel = (rec.value - rec.truth.unwrap()).abs() / rec.truth.unwrap();
        assert_eq!(rec.rel_error, Some(rel));
    }
}
