//! Configuration files: a single estimation run, and the verification
//! suite with its default protocols.

use std::path::Path;

use anyhow::{Context, Result};
use hpol_core::dynamics::{MapSpec, SystemDescriptor};
use hpol_core::entropy::{Budget, Protocol, Sampler, Target};
use serde::{Deserialize, Serialize};

/// One estimation run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub system: SystemDescriptor,
    pub target: Target,
    pub protocol: Protocol,
    pub seed: u64,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        self.protocol.validate()?;
        self.system.classify()?;
        Ok(())
    }
}

pub fn load_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn dyadic(from: u32, to: u32) -> Vec<usize> {
    (from..=to).map(|k| 1usize << k).collect()
}

fn protocol(sampler: Sampler, eps: &[f64], n: Vec<usize>) -> Protocol {
    Protocol {
        sampler,
        eps: eps.to_vec(),
        n,
        budget: Budget::default(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IsometryCheck {
    pub alpha: f64,
    pub trials: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverCheck {
    pub system: SystemDescriptor,
    pub n: Vec<usize>,
    pub eps: f64,
    pub arcs: usize,
    pub pairs: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnCheck {
    pub eps: f64,
    pub max_level: usize,
    pub witness_level: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductCheck {
    pub nw: Protocol,
    pub y: Protocol,
    pub arcs: usize,
    pub steps: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassifyCheck {
    pub system: SystemDescriptor,
    pub hyperspace: Protocol,
    /// Base-space protocol for the reduction to `f^q`.
    #[serde(default)]
    pub base: Option<Protocol>,
}

/// Settings of `verify`. Missing sections take their defaults.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyConfig {
    pub isometry: IsometryCheck,
    pub cover: CoverCheck,
    pub an: AnCheck,
    pub product: ProductCheck,
    pub classify: Vec<ClassifyCheck>,
}

impl Default for IsometryCheck {
    fn default() -> Self {
        IsometryCheck {
            alpha: std::f64::consts::SQRT_2 - 1.0,
            trials: 10_000,
        }
    }
}

impl Default for CoverCheck {
    fn default() -> Self {
        CoverCheck {
            system: SystemDescriptor::new("arnold", MapSpec::Arnold { omega: 0.0, k: 0.8 }),
            n: vec![16, 64, 256],
            eps: 0.1,
            arcs: 10_000,
            pairs: 1_000,
        }
    }
}

impl Default for AnCheck {
    fn default() -> Self {
        AnCheck {
            eps: 0.02,
            max_level: 10_000,
            witness_level: 64,
        }
    }
}

impl Default for ProductCheck {
    fn default() -> Self {
        ProductCheck {
            nw: protocol(
                Sampler::DenjoyNw {
                    depth: 2000,
                    angles: 2000,
                },
                &[0.05, 0.02, 0.01],
                dyadic(3, 9),
            ),
            y: denjoy_window(dyadic(3, 7)),
            arcs: 10_000,
            steps: 50,
        }
    }
}

fn denjoy_window(n: Vec<usize>) -> Protocol {
    protocol(
        Sampler::DenjoyWindow {
            back: 8,
            ahead: 8,
            stride: 1,
            angles: 8,
        },
        &[0.05],
        n,
    )
}

fn orbit(per_domain: usize, stride: usize) -> Sampler {
    Sampler::Orbit {
        per_domain,
        stride,
        back: 32,
        forward: 32,
    }
}

impl ClassifyCheck {
    /// Desk-scale protocols for the built-in systems, reduced from the
    /// acceptance protocols so that the whole suite runs in about a minute.
    pub fn defaults() -> Vec<ClassifyCheck> {
        SystemDescriptor::builtins()
            .into_iter()
            .map(|system| {
                let (hyperspace, base) = match system.map {
                    MapSpec::Rotation { .. } => (
                        protocol(Sampler::Grid { delta: 1.0 / 128.0 }, &[0.2, 0.1, 0.05], dyadic(3, 8)),
                        None,
                    ),
                    MapSpec::Arnold { .. } => (protocol(orbit(2, 16), &[0.05], dyadic(3, 8)), None),
                    MapSpec::RationalMs { .. } => (
                        protocol(orbit(2, 8), &[0.05], dyadic(3, 8)),
                        Some(protocol(orbit(4, 1), &[0.05], dyadic(3, 8))),
                    ),
                    MapSpec::Denjoy { .. } => (denjoy_window(dyadic(3, 6)), None),
                };
                ClassifyCheck {
                    system,
                    hyperspace,
                    base,
                }
            })
            .collect()
    }
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            isometry: IsometryCheck::default(),
            cover: CoverCheck::default(),
            an: AnCheck::default(),
            product: ProductCheck::default(),
            classify: ClassifyCheck::defaults(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn run_config_requires_seed() {
        let text = r#"{
            "system": {"name": "r", "map": {"kind": "rotation", "alpha": 0.4}},
            "target": "hyperspace",
            "protocol": {"sampler": {"kind": "grid", "delta": 0.0625},
                         "eps": [0.1], "n": [8, 16, 32, 64]}
        }"#;
        let err = serde_json::from_str::<RunConfig>(text).unwrap_err();
        assert!(err.to_string().contains("seed"));
        let with_seed = text.replace("\"target\"", "\"seed\": 3, \"target\"");
        let c: RunConfig = serde_json::from_str(&with_seed).unwrap();
        c.validate().unwrap();
        assert_eq!(c.protocol.budget, Budget::default());
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let text = r#"{"isometry": {"alpha": 0.1, "trials": 5, "extra": 1}}"#;
        assert!(serde_json::from_str::<VerifyConfig>(text).is_err());
        let partial: VerifyConfig = serde_json::from_str(r#"{"an": {"eps": 0.03, "max_level": 50, "witness_level": 8}}"#).unwrap();
        assert_eq!(partial.isometry, IsometryCheck::default());
        assert_eq!(partial.an.max_level, 50);
    }

    #[test]
    fn default_suite_round_trips() {
        let v = VerifyConfig::default();
        let text = serde_json::to_string(&v).unwrap();
        assert_eq!(serde_json::from_str::<VerifyConfig>(&text).unwrap(), v);
        assert_eq!(v.classify.len(), 4);
        for c in &v.classify {
            c.hyperspace.validate().unwrap();
        }
    }
}
