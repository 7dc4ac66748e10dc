//! Request/report layer behind the `annulus` binary. A [`CommandRequest`]
//! names one operation of `annulus-core`, its inputs and context overrides;
//! [`run`] produces a JSON [`Report`].

mod commands;
mod inputs;
mod verify;

use std::path::PathBuf;
use std::time::Instant;

use annulus_core::Context;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

pub use inputs::{parse_complex, parse_terms, Inputs};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Norm,
    Eval,
    Kernel,
    MultNorm,
    MixedBound,
    FactorDisk,
    FactorAnnulus,
    FreeOuter,
    Subinner,
    MomentsEqual,
    Cyclicity,
    Embed,
    IsometryCheck,
    FockResidual,
    ExtremalSearch,
    ExampleTable,
    Verify,
}

/// Context and algorithm parameters that may be set per request.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Overrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub restarts: Option<usize>,
    #[serde(default, rename = "trunc_M", skip_serializing_if = "Option::is_none")]
    pub trunc_m: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CommandRequest {
    pub command: Command,
    /// JSON files holding [`Inputs`]; later files and inline inputs win.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub input_paths: Vec<PathBuf>,
    #[serde(default)]
    pub inputs: Inputs,
    #[serde(default)]
    pub overrides: Overrides,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

impl CommandRequest {
    pub fn new(command: Command) -> Self {
        CommandRequest {
            command,
            input_paths: Vec::new(),
            inputs: Inputs::default(),
            overrides: Overrides::default(),
            out: None,
        }
    }
}

/// The context a report was computed in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContextEcho {
    pub annulus: Context,
    pub grid: usize,
    pub restarts: usize,
    #[serde(rename = "trunc_M")]
    pub trunc_m: usize,
    pub degree: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub command: Command,
    pub context: ContextEcho,
    pub results: Value,
    pub certificates: Vec<Value>,
    /// False whenever any reported quantity came from a heuristic path.
    pub certified: bool,
    pub warnings: Vec<String>,
    pub wall_time_ms: f64,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("{op}: {source}")]
    Module {
        op: &'static str,
        #[source]
        source: annulus_core::Error,
    },
    #[error("io error on {path}: {message}")]
    Io { path: String, message: String },
}

impl CliError {
    /// Process exit code: 2 for bad input, 3 for failures inside a module.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Validation(_) | CliError::Io { .. } => 2,
            CliError::Module { .. } => 3,
        }
    }
}

pub(crate) fn module(op: &'static str) -> impl FnOnce(annulus_core::Error) -> CliError {
    move |source| CliError::Module { op, source }
}

pub const DEFAULT_R: f64 = 0.5;
pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_GRID: usize = 40;
pub const DEFAULT_M: usize = 40;
pub const DEFAULT_RESTARTS: usize = 20;

/// Resolved parameters shared by all commands.
pub(crate) struct Params {
    pub ctx: Context,
    pub grid: usize,
    pub restarts: usize,
    pub trunc_m: usize,
    pub degree: Option<usize>,
}

fn resolve(o: &Overrides) -> Result<Params, CliError> {
    let r = o.r.unwrap_or(DEFAULT_R);
    let mut ctx = Context::new(r).map_err(|e| CliError::Validation(e.to_string()))?;
    ctx = ctx.with_seed(o.seed.unwrap_or(DEFAULT_SEED));
    ctx.tol_exact = o.tol.unwrap_or(DEFAULT_TOL);
    ctx.validate()
        .map_err(|e| CliError::Validation(e.to_string()))?;
    let grid = o.grid.unwrap_or(DEFAULT_GRID);
    let restarts = o.restarts.unwrap_or(DEFAULT_RESTARTS);
    if grid == 0 || restarts == 0 {
        return Err(CliError::Validation(
            "grid and restarts must be positive".into(),
        ));
    }
    Ok(Params {
        ctx,
        grid,
        restarts,
        trunc_m: o.trunc_m.unwrap_or(DEFAULT_M),
        degree: o.degree,
    })
}

/// Output of a single command before it is wrapped into a [`Report`].
pub(crate) struct Outcome {
    pub results: Value,
    pub certificates: Vec<Value>,
    pub certified: bool,
    pub warnings: Vec<String>,
}

pub fn run(req: &CommandRequest) -> Result<Report, CliError> {
    let start = Instant::now();
    let params = resolve(&req.overrides)?;
    let mut inputs = Inputs::default();
    for p in &req.input_paths {
        let text = std::fs::read_to_string(p).map_err(|e| CliError::Io {
            path: p.display().to_string(),
            message: e.to_string(),
        })?;
        let file: Inputs = serde_json::from_str(&text)
            .map_err(|e| CliError::Parse(format!("{}: {e}", p.display())))?;
        inputs.merge(file);
    }
    inputs.merge(req.inputs.clone());
    let out = commands::dispatch(req.command, &inputs, &params)?;
    Ok(Report {
        command: req.command,
        context: ContextEcho {
            annulus: params.ctx.clone(),
            grid: params.grid,
            restarts: params.restarts,
            trunc_m: params.trunc_m,
            degree: params.degree,
        },
        results: out.results,
        certificates: out.certificates,
        certified: out.certified,
        warnings: out.warnings,
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

pub fn to_json(report: &Report) -> String {
    serde_json::to_string_pretty(report).expect("report serialization is infallible")
}
