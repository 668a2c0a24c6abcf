//! End-to-end analysis: saturate, reduce, classify, search separatrices,
//! recognize a logarithmic model, build divisor holonomy, decide.

use std::time::Instant;

use log::{info, log_enabled, Level};

use crate::error::Error;
use crate::exactalg::OneFormGerm;
use crate::reduction::{reduce_singularities, ReductionOptions};
use crate::report::{Report, ReportInput};
use crate::request::AnalysisRequest;
use crate::stability::{decide_l_stability, divisor_holonomy, separatrices_from_tree, HolonomyEvidence};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Saturate,
    Reduce,
    Separatrices,
    Holonomy,
    Verdict,
}

impl std::fmt::Display for Stage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Stage::Saturate => "saturate",
            Stage::Reduce => "reduce",
            Stage::Separatrices => "separatrices",
            Stage::Holonomy => "holonomy",
            Stage::Verdict => "verdict",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{stage}: {error}")]
pub struct StageError {
    pub stage: Stage,
    pub error: Error,
}

fn at(stage: Stage) -> impl FnOnce(Error) -> StageError {
    move |error| StageError { stage, error }
}

/// Stage timings go to the log. The clock is only read when the log is on,
/// since `Instant` is unavailable on `wasm32-unknown-unknown`.
fn timed<T>(stage: Stage, f: impl FnOnce() -> T) -> T {
    if !log_enabled!(Level::Info) {
        return f();
    }
    let t = Instant::now();
    let out = f();
    info!("{stage}: {:.3} ms", t.elapsed().as_secs_f64() * 1e3);
    out
}

pub fn run_pipeline(req: &AnalysisRequest) -> Result<Report, StageError> {
    let opts = req.options;
    let sat = timed(Stage::Saturate, || OneFormGerm::saturate(req.a.clone(), req.b.clone())).map_err(at(Stage::Saturate))?;
    let red = ReductionOptions {
        max_blowups: opts.max_blowups,
        jet_order: opts.jet_order,
        force_initial_blowup: false,
    };
    let tree = timed(Stage::Reduce, || reduce_singularities(&sat.form, &req.field, &red)).map_err(at(Stage::Reduce))?;
    info!("reduce: {} blow-ups, {} points", tree.blowups.len(), tree.points.len());
    let seps = timed(Stage::Separatrices, || separatrices_from_tree(&tree, opts.degree_bound));
    let components = timed(Stage::Holonomy, || divisor_holonomy(&tree, opts.jet_order, opts.word_budget))
        .map_err(at(Stage::Holonomy))?;
    let evidence = HolonomyEvidence {
        components,
        orbit: opts.orbit_evidence,
    };
    let stability = timed(Stage::Verdict, || decide_l_stability(&tree, &seps, &evidence, opts.jet_order))
        .map_err(at(Stage::Verdict))?;
    info!("verdict: {}", stability.verdict.label());
    Ok(Report::build(&ReportInput {
        kind: req.kind,
        input_a: &req.a,
        input_b: &req.b,
        removed: &sat.removed,
        options: opts,
        tree: &tree,
        separatrices: &seps,
        stability: &stability,
    }))
}
