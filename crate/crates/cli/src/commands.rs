//! Subcommand implementations. Each writes its files under `cfg.out` and
//! returns an outcome the caller maps to an exit code.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::time::Instant;

use qreset_core::experiment::{
    self, infer_phi, swap_phi, swap_sweep, verify_inputs, AlphaSource, ExperimentError, PhiReport,
    Protocol, VerifyOptions, VerifyOutcome,
};
use qreset_core::qmath::{bloch_to_density, trace_distance, von_neumann_entropy};
use qreset_core::swapreset::swap_outcome;
use qreset_core::{BlochVector, QubitState};
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::config::{ConfigError, ExperimentConfig};

pub const TRAJECTORY_HEADER: [&str; 7] = ["t", "ax", "ay", "az", "Q", "S", "EP"];
pub const VERIFY_HEADER: [&str; 12] = [
    "index",
    "ax",
    "ay",
    "az",
    "EP",
    "EP_minus_EP_alpha",
    "D0",
    "kl",
    "coherence",
    "Dtau",
    "residual",
    "eps_final",
];
pub const SWAP_HEADER: [&str; 6] = ["beta_Eb", "input", "Q", "dS", "EP", "D"];

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("numerical failure: {0}")]
    Numerical(#[from] ExperimentError),
    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{0}")]
    Assertion(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Assertion(_) => 1,
            CliError::Config(_) | CliError::Io { .. } => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn csv_err(path: &Path) -> impl FnOnce(csv::Error) -> CliError + '_ {
    move |e| CliError::Io {
        path: path.to_path_buf(),
        source: e.into(),
    }
}

/// Shortest representation that parses back to the same `f64`.
fn num(x: f64) -> String {
    format!("{x:?}")
}

fn write_csv<I>(path: &Path, header: &[&str], rows: I) -> Result<(), CliError>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut w = csv::Writer::from_path(path).map_err(csv_err(path))?;
    w.write_record(header).map_err(csv_err(path))?;
    for row in rows {
        w.write_record(&row).map_err(csv_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

fn write_json(path: &Path, value: &serde_json::Value) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).expect("JSON values always serialise");
    fs::write(path, text + "\n").map_err(io_err(path))
}

fn prepare_out(cfg: &ExperimentConfig) -> Result<&Path, CliError> {
    fs::create_dir_all(&cfg.out).map_err(io_err(&cfg.out))?;
    Ok(&cfg.out)
}

fn inputs(cfg: &ExperimentConfig) -> Vec<BlochVector> {
    match cfg.initial {
        Some(a) => vec![a.into()],
        None => experiment::sample_inputs(cfg.seed, cfg.samples, cfg.sampling),
    }
}

fn target_state(cfg: &ExperimentConfig) -> Result<QubitState, CliError> {
    bloch_to_density(&cfg.target_bloch()).map_err(|e| {
        CliError::Config(ConfigError::Invalid {
            field: "target",
            reason: e.to_string(),
        })
    })
}

fn phi_for(protocol: &Protocol) -> Result<PhiReport, CliError> {
    Ok(match protocol {
        Protocol::Swap { bath } => swap_phi(bath),
        Protocol::Lindblad { .. } => infer_phi(protocol, None)?,
    })
}

fn phi_json(phi: &PhiReport) -> serde_json::Value {
    json!({
        "ef_mixed": phi.vector.ef_mixed,
        "phi": phi.vector.phi.to_array(),
        "phi_norm": phi.vector.phi_norm,
        "alpha0_bloch": phi.alpha0_bloch.to_array(),
        "condition_number": if phi.condition_number.is_finite() {
            json!(phi.condition_number)
        } else {
            serde_json::Value::Null
        },
    })
}

#[derive(Serialize)]
struct Endpoint {
    index: usize,
    initial: [f64; 3],
    r#final: [f64; 3],
    heat: f64,
    work: f64,
    entropy_production: f64,
    eps_final: f64,
}

/// One trajectory CSV per input plus `summary.json`.
pub fn simulate(cfg: &ExperimentConfig) -> Result<(), CliError> {
    let start = Instant::now();
    let out = prepare_out(cfg)?;
    let protocol = cfg.protocol()?;
    let target = target_state(cfg)?;
    let inputs = inputs(cfg);

    // (index, rows, endpoint)
    let runs: Vec<(usize, Vec<[f64; 7]>, Endpoint)> = match &protocol {
        Protocol::Lindblad {
            schedule,
            cfg: lcfg,
        } => experiment::simulate(schedule, lcfg, &inputs)?
            .into_iter()
            .map(|s| {
                let t = &s.trajectory;
                let rows = (0..t.len())
                    .map(|i| {
                        let a = t.states[i].bloch();
                        [
                            t.times[i],
                            a.x,
                            a.y,
                            a.z,
                            t.heat[i],
                            t.entropy[i],
                            t.entropy_production_at(i),
                        ]
                    })
                    .collect();
                let last = t.len() - 1;
                let endpoint = Endpoint {
                    index: s.index,
                    initial: s.initial.to_array(),
                    r#final: t.final_state().bloch().to_array(),
                    heat: t.total_heat(),
                    work: t.total_work(),
                    entropy_production: t.entropy_production_at(last),
                    eps_final: trace_distance(t.final_state(), &target),
                };
                (s.index, rows, endpoint)
            })
            .collect(),
        Protocol::Swap { bath } => inputs
            .iter()
            .enumerate()
            .map(|(index, a)| {
                let rho = bloch_to_density(a).map_err(ExperimentError::from)?;
                let o = swap_outcome(&rho, bath);
                let (s0, s1) = (
                    von_neumann_entropy(&rho),
                    von_neumann_entropy(&o.final_state),
                );
                let ep = o.heat + s1 - s0;
                let b = o.final_state.bloch();
                let rows = vec![
                    [0.0, a.x, a.y, a.z, 0.0, s0, 0.0],
                    [1.0, b.x, b.y, b.z, o.heat, s1, ep],
                ];
                let endpoint = Endpoint {
                    index,
                    initial: a.to_array(),
                    r#final: b.to_array(),
                    heat: o.heat,
                    work: o.work,
                    entropy_production: ep,
                    eps_final: trace_distance(&o.final_state, &target),
                };
                Ok((index, rows, endpoint))
            })
            .collect::<Result<_, CliError>>()?,
    };

    let width = (inputs.len().max(1) - 1).to_string().len().max(4);
    for (index, rows, _) in &runs {
        let path = out.join(format!("trajectory_{index:0width$}.csv"));
        write_csv(
            &path,
            &TRAJECTORY_HEADER,
            rows.iter().map(|r| r.iter().map(|x| num(*x)).collect()),
        )?;
    }
    let phi = phi_for(&protocol)?;
    let epsilon = runs.iter().map(|r| r.2.eps_final).fold(0.0, f64::max);
    let endpoints: Vec<&Endpoint> = runs.iter().map(|r| &r.2).collect();
    write_json(
        &out.join("summary.json"),
        &json!({
            "command": "simulate",
            "config": cfg,
            "epsilon": epsilon,
            "alpha0": phi.alpha0_bloch.to_array(),
            "alpha0_source": "phi",
            "phi": phi_json(&phi),
            "endpoints": endpoints,
            "timing_seconds": start.elapsed().as_secs_f64(),
        }),
    )
}

/// Prints the inferred entropy-flow vector and writes `phi.json`.
pub fn infer(cfg: &ExperimentConfig) -> Result<serde_json::Value, CliError> {
    let start = Instant::now();
    let out = prepare_out(cfg)?;
    let phi = phi_for(&cfg.protocol()?)?;
    let value = phi_json(&phi);
    write_json(&out.join("phi.json"), &value)?;
    write_json(
        &out.join("summary.json"),
        &json!({
            "command": "infer-phi",
            "config": cfg,
            "alpha0": phi.alpha0_bloch.to_array(),
            "alpha0_source": "phi",
            "phi": value,
            "timing_seconds": start.elapsed().as_secs_f64(),
        }),
    )?;
    Ok(value)
}

fn verify_row(r: &experiment::VerifyRecord) -> Vec<String> {
    let t = &r.report;
    let mut row = vec![r.index.to_string()];
    row.extend(
        [
            r.initial.x,
            r.initial.y,
            r.initial.z,
            t.ep,
            t.ep - t.ep_alpha,
            t.d0,
            t.kl,
            t.coherence,
            t.dtau,
            t.residual(),
            t.eps_final,
        ]
        .map(num),
    );
    row
}

/// `verify.csv` and `summary.json`; fails when a residual exceeds the
/// tolerance. Files are written before the check.
pub fn verify(cfg: &ExperimentConfig) -> Result<VerifyOutcome, CliError> {
    let start = Instant::now();
    let out = prepare_out(cfg)?;
    let protocol = cfg.protocol()?;
    let target = target_state(cfg)?;
    let opts = VerifyOptions {
        samples: cfg.samples,
        seed: cfg.seed,
        sampling: cfg.sampling,
        alpha_source: if cfg.alpha0_from_phi {
            AlphaSource::Phi
        } else {
            AlphaSource::Minimizer
        },
        minimizer_tol: cfg.minimizer_tol,
        reliability_samples: cfg.reliability_samples,
    };
    let outcome = verify_inputs(&protocol, &target, &opts, &inputs(cfg))?;
    write_csv(
        &out.join("verify.csv"),
        &VERIFY_HEADER,
        outcome.records.iter().map(verify_row),
    )?;
    let max_residual = outcome.max_abs_residual();
    let failures = outcome
        .records
        .iter()
        .filter(|r| !(r.residual().abs() <= cfg.tolerance))
        .count();
    write_json(
        &out.join("summary.json"),
        &json!({
            "command": "verify",
            "config": cfg,
            "epsilon": outcome.epsilon,
            "alpha0": outcome.alpha0.to_array(),
            "alpha0_source": outcome.alpha_source,
            "phi": phi_json(&outcome.phi),
            "max_abs_residual": max_residual,
            "kl_fraction": outcome.kl_fraction(),
            "tolerance": cfg.tolerance,
            "failures": failures,
            "passed": failures == 0,
            "timing_seconds": start.elapsed().as_secs_f64(),
        }),
    )?;
    if failures > 0 {
        return Err(CliError::Assertion(format!(
            "{failures} of {} samples exceed |residual| ≤ {} (max {max_residual:e})",
            outcome.records.len(),
            cfg.tolerance
        )));
    }
    Ok(outcome)
}

/// Closed-form swap table over `cfg.eb_grid`.
pub fn swap_demo(cfg: &ExperimentConfig) -> Result<(), CliError> {
    let start = Instant::now();
    let out = prepare_out(cfg)?;
    let rows = swap_sweep(&cfg.eb_grid)?;
    write_csv(
        &out.join("swap_demo.csv"),
        &SWAP_HEADER,
        rows.iter().map(|r| {
            vec![
                num(r.beta_eb),
                r.input.name().to_string(),
                num(r.heat),
                num(r.entropy_change),
                num(r.entropy_production),
                num(r.relative_entropy),
            ]
        }),
    )?;
    write_json(
        &out.join("summary.json"),
        &json!({
            "command": "swap-demo",
            "config": cfg,
            "rows": rows.len(),
            "timing_seconds": start.elapsed().as_secs_f64(),
        }),
    )
}
