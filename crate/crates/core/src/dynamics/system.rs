use alloc::string::String;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use super::denjoy::{golden_alpha, DenjoyMap};
use super::lift::{Family, LiftMap};
use crate::error::{Error, Result};

fn default_power() -> u32 {
    1
}

fn default_denjoy_alpha() -> f64 {
    golden_alpha()
}

/// Map parameters as they appear in configuration files.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MapSpec {
    Rotation {
        alpha: f64,
    },
    Arnold {
        omega: f64,
        k: f64,
    },
    RationalMs {
        p: i64,
        q: u64,
        k: f64,
    },
    Denjoy {
        #[serde(default = "default_denjoy_alpha")]
        alpha: f64,
    },
}

/// Kind of the non-wandering set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NwKind {
    All,
    Finite,
    Cantor,
}

/// A named system: map parameters and a power `f^power`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemDescriptor {
    pub name: String,
    pub map: MapSpec,
    #[serde(default = "default_power")]
    pub power: u32,
}

/// Derived facts about a system, used by reports and the classifier.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    /// Rotation number in closed form, if known.
    pub declared_rotation: Option<f64>,
    pub nw_kind: NwKind,
    pub conjugate_to_rotation: bool,
    /// `h_pol(C(f))`: 0 for maps conjugate to a rotation, 2 otherwise.
    pub expected_hyperspace_hpol: u32,
}

/// A constructed system.
#[derive(Clone, Debug)]
pub enum System {
    Lift(LiftMap),
    Denjoy(DenjoyMap),
}

impl SystemDescriptor {
    pub fn new(name: &str, map: MapSpec) -> Self {
        SystemDescriptor {
            name: name.into(),
            map,
            power: 1,
        }
    }

    /// The built-in systems with their default parameters.
    pub fn builtins() -> Vec<SystemDescriptor> {
        alloc::vec![
            SystemDescriptor::new(
                "rotation",
                MapSpec::Rotation {
                    alpha: core::f64::consts::SQRT_2 - 1.0,
                },
            ),
            SystemDescriptor::new("arnold", MapSpec::Arnold { omega: 0.0, k: 0.8 }),
            SystemDescriptor::new("rational_ms", MapSpec::RationalMs { p: 1, q: 2, k: 0.5 }),
            SystemDescriptor::new(
                "denjoy",
                MapSpec::Denjoy {
                    alpha: golden_alpha(),
                },
            ),
        ]
    }

    fn family(&self) -> Option<Family> {
        match self.map {
            MapSpec::Rotation { alpha } => Some(Family::Rotation { alpha }),
            MapSpec::Arnold { omega, k } => Some(Family::Arnold { omega, k }),
            MapSpec::RationalMs { p, q, k } => Some(Family::RationalMs { p, q, k }),
            MapSpec::Denjoy { .. } => None,
        }
    }

    pub fn lift_map(&self) -> Result<LiftMap> {
        match self.family() {
            Some(f) => LiftMap::new(f, self.power),
            None => Err(Error::Unsupported("the Denjoy system has no numeric lift")),
        }
    }

    /// Builds the system. The Denjoy embedding tables take a few tens of
    /// megabytes.
    pub fn build(&self) -> Result<System> {
        match self.map {
            MapSpec::Denjoy { alpha } => {
                if self.power != 1 {
                    return Err(Error::Unsupported("powers of the Denjoy system"));
                }
                Ok(System::Denjoy(DenjoyMap::new(alpha)?))
            }
            _ => Ok(System::Lift(self.lift_map()?)),
        }
    }

    /// Rotation-number and non-wandering classification.
    ///
    /// Lift maps with periodic points and a nonlinear term have wandering
    /// orbits, so they are not conjugate to a rotation. Analytic lift maps
    /// without periodic points have irrational rotation number and are
    /// conjugate to a rotation. The Denjoy system is not transitive.
    pub fn classify(&self) -> Result<Classification> {
        if let MapSpec::Denjoy { alpha } = self.map {
            if self.power != 1 {
                return Err(Error::Unsupported("powers of the Denjoy system"));
            }
            return Ok(Classification {
                declared_rotation: Some(alpha),
                nw_kind: NwKind::Cantor,
                conjugate_to_rotation: false,
                expected_hyperspace_hpol: 2,
            });
        }
        let map = self.lift_map()?;
        let rigid = match self.map {
            MapSpec::Rotation { .. } => true,
            MapSpec::Arnold { k, .. } | MapSpec::RationalMs { k, .. } => k == 0.0,
            MapSpec::Denjoy { .. } => false,
        };
        let nw_kind = if rigid {
            NwKind::All
        } else {
            nw_description(&System::Lift(map.clone())).kind
        };
        let conj = nw_kind == NwKind::All;
        Ok(Classification {
            declared_rotation: map.declared_rotation(),
            nw_kind,
            conjugate_to_rotation: conj,
            expected_hyperspace_hpol: if conj { 0 } else { 2 },
        })
    }
}

/// Description of `NW(f)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NwReport {
    pub kind: NwKind,
    /// Rotation number `p/q` when rational and found.
    pub rotation: Option<(i64, u64)>,
    /// Periodic points in `[0, 1)`, for the finite kind.
    pub periodic_points: Vec<f64>,
    /// Gaps `J_n` used by the embedding, for the Cantor kind.
    pub gap_count: Option<u64>,
}

/// `NW(f)`: the whole circle for maps conjugate to a rotation, the periodic
/// points for Morse–Smale lift maps, and the complement of the gaps for the
/// Denjoy system.
pub fn nw_description(system: &System) -> NwReport {
    match system {
        System::Denjoy(d) => NwReport {
            kind: NwKind::Cantor,
            rotation: None,
            periodic_points: Vec::new(),
            gap_count: Some(2 * d.truncation() as u64 + 1),
        },
        System::Lift(m) => {
            let rigid = match m.family() {
                Family::Rotation { .. } => true,
                Family::Arnold { k, .. } | Family::RationalMs { k, .. } => k == 0.0,
            };
            if rigid {
                return NwReport {
                    kind: NwKind::All,
                    rotation: m.rational_rotation(),
                    periodic_points: Vec::new(),
                    gap_count: None,
                };
            }
            match m.rational_rotation() {
                Some((p, q)) => {
                    let pts = m.fixed_points_of_power(p, q);
                    NwReport {
                        kind: if pts.is_empty() { NwKind::All } else { NwKind::Finite },
                        rotation: Some((p, q)),
                        periodic_points: pts,
                        gap_count: None,
                    }
                }
                None => NwReport {
                    kind: NwKind::All,
                    rotation: None,
                    periodic_points: Vec::new(),
                    gap_count: None,
                },
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::lift::rotation_number_estimate;

    #[test]
    fn builtins_classify_per_theorem() {
        let expected = [("rotation", 0), ("arnold", 2), ("rational_ms", 2), ("denjoy", 2)];
        for (d, (name, e)) in SystemDescriptor::builtins().iter().zip(expected) {
            assert_eq!(d.name, name);
            assert_eq!(d.classify().unwrap().expected_hyperspace_hpol, e);
        }
    }

    #[test]
    fn declared_rotation_matches_estimate() {
        for d in SystemDescriptor::builtins() {
            if let Ok(m) = d.lift_map() {
                let n = 10_000;
                let est = rotation_number_estimate(&m, n).unwrap();
                let dec = d.classify().unwrap().declared_rotation.unwrap();
                assert!((est - dec).abs() <= 2.0 / n as f64, "{}", d.name);
            }
        }
    }

    #[test]
    fn nw_examples() {
        let rot = System::Lift(LiftMap::rotation(core::f64::consts::SQRT_2 - 1.0).unwrap());
        assert_eq!(nw_description(&rot).kind, NwKind::All);
        let arn = System::Lift(LiftMap::arnold(0.0, 0.8).unwrap());
        let r = nw_description(&arn);
        assert_eq!(r.kind, NwKind::Finite);
        assert_eq!(r.periodic_points.len(), 2);
        assert!(r.periodic_points[0].abs() < 1e-12);
        assert!((r.periodic_points[1] - 0.5).abs() < 1e-12);
        let den = SystemDescriptor::new("d", MapSpec::Denjoy { alpha: golden_alpha() });
        assert_eq!(den.classify().unwrap().nw_kind, NwKind::Cantor);
    }

    #[test]
    fn descriptor_round_trips_through_json_shape() {
        let d = SystemDescriptor::new("arnold", MapSpec::Arnold { omega: 0.0, k: 0.8 });
        assert_eq!(d.power, 1);
        assert!(d.build().is_ok());
        let mut sq = d.clone();
        sq.power = 2;
        assert_eq!(sq.lift_map().unwrap().power(), 2);
    }

    #[test]
    fn irrational_arnold_is_conjugate_to_rotation() {
        // Far outside the low-order tongues for small K.
        let d = SystemDescriptor::new(
            "a",
            MapSpec::Arnold {
                omega: golden_alpha(),
                k: 0.05,
            },
        );
        assert!(d.classify().unwrap().conjugate_to_rotation);
    }
}
