//! Experiment configuration: a JSON document with command-line overrides.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use qreset_core::dynamics::{ControlParams, REFERENCE_COUPLING, REFERENCE_DURATION};
use qreset_core::dynamics::{REFERENCE_FINAL_GAP, REFERENCE_INITIAL_GAP, REFERENCE_STEP};
use qreset_core::experiment::Protocol;
use qreset_core::{gibbs_qubit, BlochVector, LindbladConfig, ProtocolSchedule, SamplingMode};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot parse config {path}: {source}")]
    Parse {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("invalid `{field}`: {reason}")]
    Invalid { field: &'static str, reason: String },
}

fn invalid(field: &'static str, reason: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        field,
        reason: reason.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProtocolName {
    Fig1Rotating,
    Fig2FixedAngle,
    Fig3Relaxation,
    Swap,
    Custom,
}

impl ProtocolName {
    pub fn as_str(&self) -> &'static str {
        match self {
            ProtocolName::Fig1Rotating => "fig1-rotating",
            ProtocolName::Fig2FixedAngle => "fig2-fixed-angle",
            ProtocolName::Fig3Relaxation => "fig3-relaxation",
            ProtocolName::Swap => "swap",
            ProtocolName::Custom => "custom",
        }
    }
}

impl fmt::Display for ProtocolName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProtocolName {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "fig1-rotating" => Ok(ProtocolName::Fig1Rotating),
            "fig2-fixed-angle" => Ok(ProtocolName::Fig2FixedAngle),
            "fig3-relaxation" => Ok(ProtocolName::Fig3Relaxation),
            "swap" => Ok(ProtocolName::Swap),
            "custom" => Ok(ProtocolName::Custom),
            other => Err(format!(
                "unknown protocol '{other}' (expected fig1-rotating, fig2-fixed-angle, \
                 fig3-relaxation, swap or custom)"
            )),
        }
    }
}

/// One knot of a piecewise-linear custom schedule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Knot {
    pub t: f64,
    #[serde(rename = "E")]
    pub energy: f64,
    pub theta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub protocol: ProtocolName,
    pub c: f64,
    pub tau: f64,
    pub dt: f64,
    #[serde(rename = "E0")]
    pub e0: f64,
    #[serde(rename = "Etau")]
    pub etau: f64,
    #[serde(rename = "Eb")]
    pub eb: f64,
    pub samples: usize,
    pub seed: u64,
    pub sampling: SamplingMode,
    pub target: [f64; 3],
    pub tolerance: f64,
    pub alpha0_from_phi: bool,
    pub initial: Option<[f64; 3]>,
    pub out: PathBuf,
    pub minimizer_tol: f64,
    pub reliability_samples: usize,
    /// Grid of `βE_b` for `swap-demo`.
    pub eb_grid: Vec<f64>,
    /// Knots of the `custom` protocol, linearly interpolated.
    pub custom_schedule: Vec<Knot>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            protocol: ProtocolName::Fig1Rotating,
            c: REFERENCE_COUPLING,
            tau: REFERENCE_DURATION,
            dt: REFERENCE_STEP,
            e0: REFERENCE_INITIAL_GAP,
            etau: REFERENCE_FINAL_GAP,
            eb: 1.0,
            samples: 10,
            seed: 1,
            sampling: SamplingMode::Ball,
            target: [0.0, 0.0, 1.0],
            tolerance: 1e-5,
            alpha0_from_phi: false,
            initial: None,
            out: PathBuf::from("qreset-out"),
            minimizer_tol: qreset_core::experiment::DEFAULT_MINIMIZER_TOL,
            reliability_samples: 200,
            eb_grid: (0..=20).map(|k| 0.25 * k as f64).collect(),
            custom_schedule: Vec::new(),
        }
    }
}

/// Command-line overrides; `None` leaves the config value untouched.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub protocol: Option<ProtocolName>,
    pub c: Option<f64>,
    pub tau: Option<f64>,
    pub dt: Option<f64>,
    pub e0: Option<f64>,
    pub etau: Option<f64>,
    pub eb: Option<f64>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub sampling: Option<SamplingMode>,
    pub target: Option<[f64; 3]>,
    pub tolerance: Option<f64>,
    pub alpha0_from_phi: bool,
    pub initial: Option<[f64; 3]>,
    pub out: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn load(path: Option<&Path>, overrides: &Overrides) -> Result<Self, ConfigError> {
        let mut cfg = match path {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
                    path: path.to_path_buf(),
                    source,
                })?;
                serde_json::from_str(&text).map_err(|source| ConfigError::Parse {
                    path: path.to_path_buf(),
                    source,
                })?
            }
            None => Self::default(),
        };
        cfg.apply(overrides);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn apply(&mut self, o: &Overrides) {
        macro_rules! take {
            ($($field:ident),*) => { $( if let Some(v) = o.$field.clone() { self.$field = v; } )* };
        }
        take!(protocol, c, tau, dt, e0, etau, eb, samples, seed, sampling, target, tolerance, out);
        if o.initial.is_some() {
            self.initial = o.initial;
        }
        self.alpha0_from_phi |= o.alpha0_from_phi;
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let positive = |field: &'static str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(invalid(
                    field,
                    format!("must be positive and finite, got {v}"),
                ))
            }
        };
        positive("c", self.c)?;
        positive("tau", self.tau)?;
        positive("dt", self.dt)?;
        positive("E0", self.e0)?;
        positive("Etau", self.etau)?;
        positive("Eb", self.eb)?;
        positive("tolerance", self.tolerance)?;
        positive("minimizer_tol", self.minimizer_tol)?;
        if self.samples == 0 {
            return Err(invalid("samples", "must be at least 1"));
        }
        if self.reliability_samples == 0 {
            return Err(invalid("reliability_samples", "must be at least 1"));
        }
        let ratio = self.tau / self.dt;
        if (ratio - ratio.round()).abs() > 1e-9 * ratio.max(1.0) {
            return Err(invalid(
                "dt",
                format!("must divide tau = {} exactly", self.tau),
            ));
        }
        check_bloch("target", self.target)?;
        if let Some(a) = self.initial {
            check_bloch("initial", a)?;
        }
        if self.eb_grid.iter().any(|x| !(*x >= 0.0 && x.is_finite())) {
            return Err(invalid(
                "eb_grid",
                "entries must be finite and non-negative",
            ));
        }
        if self.protocol == ProtocolName::Custom {
            self.validate_custom()?;
        }
        Ok(())
    }

    fn validate_custom(&self) -> Result<(), ConfigError> {
        let knots = &self.custom_schedule;
        if knots.len() < 2 {
            return Err(invalid("custom_schedule", "needs at least two knots"));
        }
        if knots[0].t > 0.0 || knots[knots.len() - 1].t < self.tau {
            return Err(invalid("custom_schedule", "knots must cover [0, tau]"));
        }
        if knots.windows(2).any(|w| !(w[1].t > w[0].t)) {
            return Err(invalid(
                "custom_schedule",
                "knot times must increase strictly",
            ));
        }
        if knots
            .iter()
            .any(|k| !(k.energy > 0.0) || !k.theta.is_finite())
        {
            return Err(invalid(
                "custom_schedule",
                "E must be positive and theta finite",
            ));
        }
        Ok(())
    }

    pub fn target_bloch(&self) -> BlochVector {
        self.target.into()
    }

    pub fn lindblad(&self) -> LindbladConfig {
        LindbladConfig {
            coupling: self.c,
            tau: self.tau,
            dt: self.dt,
            beta: 1.0,
        }
    }

    pub fn schedule(&self) -> Option<ProtocolSchedule> {
        Some(match self.protocol {
            ProtocolName::Fig1Rotating => {
                ProtocolSchedule::rotating_gap(self.e0, self.etau, self.tau)
            }
            ProtocolName::Fig2FixedAngle => {
                ProtocolSchedule::fixed_angle_gap(self.e0, self.etau, self.tau)
            }
            ProtocolName::Fig3Relaxation => ProtocolSchedule::relaxation(self.etau),
            ProtocolName::Custom => {
                let knots = self.custom_schedule.clone();
                ProtocolSchedule::custom("custom", move |t| interpolate(&knots, t))
            }
            ProtocolName::Swap => return None,
        })
    }

    pub fn protocol(&self) -> Result<Protocol, ConfigError> {
        match self.schedule() {
            Some(schedule) => Ok(Protocol::Lindblad {
                schedule,
                cfg: self.lindblad(),
            }),
            None => Ok(Protocol::Swap {
                bath: gibbs_qubit(self.eb, 1.0).map_err(|e| invalid("Eb", e.to_string()))?,
            }),
        }
    }
}

fn check_bloch(field: &'static str, a: [f64; 3]) -> Result<(), ConfigError> {
    let v = BlochVector::from(a);
    if !v.is_finite() || v.norm() > 1.0 + qreset_core::qmath::BLOCH_TOL {
        return Err(invalid(
            field,
            format!("{a:?} is not inside the Bloch ball"),
        ));
    }
    Ok(())
}

fn interpolate(knots: &[Knot], t: f64) -> ControlParams {
    let i = knots.partition_point(|k| k.t <= t);
    if i == 0 {
        return ControlParams::new(knots[0].energy, knots[0].theta);
    }
    if i == knots.len() {
        let k = knots[knots.len() - 1];
        return ControlParams::new(k.energy, k.theta);
    }
    let (a, b) = (knots[i - 1], knots[i]);
    let s = (t - a.t) / (b.t - a.t);
    ControlParams::new(
        a.energy + s * (b.energy - a.energy),
        a.theta + s * (b.theta - a.theta),
    )
}

/// Parses `ax,ay,az`.
pub fn parse_triple(s: &str) -> Result<[f64; 3], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("expected three comma-separated numbers, got '{s}'"));
    }
    let mut out = [0.0; 3];
    for (slot, p) in out.iter_mut().zip(&parts) {
        *slot = p.parse().map_err(|_| format!("'{p}' is not a number"))?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        ExperimentConfig::default().validate().unwrap();
    }

    #[test]
    fn json_fields_and_overrides() {
        let cfg: ExperimentConfig =
            serde_json::from_str(r#"{"protocol":"swap","Eb":2.5,"samples":3,"sampling":"sphere"}"#)
                .unwrap();
        assert_eq!(cfg.protocol, ProtocolName::Swap);
        assert_eq!(cfg.eb, 2.5);
        assert_eq!(cfg.sampling, SamplingMode::Sphere);
        let mut cfg = cfg;
        cfg.apply(&Overrides {
            samples: Some(7),
            ..Overrides::default()
        });
        assert_eq!(cfg.samples, 7);
        assert!(serde_json::from_str::<ExperimentConfig>(r#"{"bogus":1}"#).is_err());
    }

    #[test]
    fn validation_names_the_field() {
        let cfg = ExperimentConfig {
            c: -1.0,
            ..ExperimentConfig::default()
        };
        let msg = cfg.validate().unwrap_err().to_string();
        assert!(msg.contains("`c`"), "{msg}");
        let cfg = ExperimentConfig {
            samples: 0,
            ..ExperimentConfig::default()
        };
        assert!(cfg
            .validate()
            .unwrap_err()
            .to_string()
            .contains("`samples`"));
        let cfg = ExperimentConfig {
            dt: 0.3,
            ..ExperimentConfig::default()
        };
        assert!(cfg.validate().unwrap_err().to_string().contains("`dt`"));
        let cfg = ExperimentConfig {
            target: [1.0, 1.0, 0.0],
            ..ExperimentConfig::default()
        };
        assert!(cfg.validate().unwrap_err().to_string().contains("`target`"));
    }

    #[test]
    fn custom_schedule_interpolates() {
        let knots = [
            Knot {
                t: 0.0,
                energy: 1.0,
                theta: 0.0,
            },
            Knot {
                t: 2.0,
                energy: 3.0,
                theta: 1.0,
            },
        ];
        let p = interpolate(&knots, 1.0);
        assert_eq!((p.energy, p.theta), (2.0, 0.5));
        assert_eq!(interpolate(&knots, 5.0).energy, 3.0);
        let cfg = ExperimentConfig {
            protocol: ProtocolName::Custom,
            tau: 2.0,
            dt: 0.01,
            custom_schedule: knots.to_vec(),
            ..ExperimentConfig::default()
        };
        cfg.validate().unwrap();
        let bad = ExperimentConfig {
            custom_schedule: vec![knots[0]],
            ..cfg
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn triples() {
        assert_eq!(parse_triple("0, 0.5,-1").unwrap(), [0.0, 0.5, -1.0]);
        assert!(parse_triple("1,2").is_err());
        assert!(parse_triple("a,b,c").is_err());
    }
}
