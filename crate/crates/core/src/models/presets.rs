//! Model configs and the named presets shipped with the crate.
//!
//! ```toml
//! model = "rwre"
//! generators = [[1, 0]]
//! environment = [
//!     [{ step = "(1)", weight = "2/3" }, { step = "(-1)", weight = "1/3" }],
//!     [{ step = "(1)", weight = "1/3" }, { step = "(-1)", weight = "2/3" }],
//! ]
//!
//! [group]
//! type = "lattice"
//! dim = 1
//! ```

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::environment::{
    build_rwidf, build_rwre, build_rwrtp, DrivingSystem, EnvironmentMap, EnvironmentOperator,
};
use super::random::random_weights;
use crate::error::{Error, Result};
use crate::group::{AnyElem, AnyGroup, Group, GroupSpec};
use crate::groupoid::{
    build_groupoid, check_isomorphism, ActionMorphism, AnyGroupoid, AnyMorphism, AnyObject,
    CoveringGroupoid, FiniteAction, GroupoidDescription, StructureReport, Support,
    DEFAULT_ACTION_CHECK_DEPTH,
};
use crate::weight::Weight;

/// One atom of `π_x`; `to` is the next environment point and is used by RWIDF only.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Atom {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub to: Option<usize>,
    pub step: String,
    pub weight: String,
}

impl Atom {
    pub fn new(step: impl Into<String>, weight: impl Into<String>) -> Self {
        Atom {
            to: None,
            step: step.into(),
            weight: weight.into(),
        }
    }

    pub fn moving(to: usize, step: impl Into<String>, weight: impl Into<String>) -> Self {
        Atom {
            to: Some(to),
            step: step.into(),
            weight: weight.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum ModelDescription {
    Rwidf {
        group: GroupSpec,
        environment: Vec<Vec<Atom>>,
    },
    Rwrtp {
        group: GroupSpec,
        /// Image of each point under `T`.
        map: Vec<usize>,
        environment: Vec<Vec<Atom>>,
    },
    Rwre {
        group: GroupSpec,
        /// Image table of each abstract generator acting on the points.
        generators: Vec<Vec<usize>>,
        environment: Vec<Vec<Atom>>,
    },
}

impl ModelDescription {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::ConfigInvalid(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("model descriptions always serialize")
    }

    pub fn points(&self) -> usize {
        match self {
            ModelDescription::Rwidf { environment, .. }
            | ModelDescription::Rwrtp { environment, .. }
            | ModelDescription::Rwre { environment, .. } => environment.len(),
        }
    }
}

fn steps<W: Weight>(
    group: &AnyGroup,
    environment: &[Vec<Atom>],
) -> Result<EnvironmentMap<AnyElem, W>> {
    let measures = environment
        .iter()
        .map(|m| {
            m.iter()
                .map(|a| {
                    if a.to.is_some() {
                        return Err(Error::ConfigInvalid(format!(
                            "atom {a:?} names a target point, which only RWIDF uses"
                        )));
                    }
                    Ok((group.parse_elem(&a.step)?, W::from_text(&a.weight)?))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    EnvironmentMap::new(measures)
}

/// Builds the operator a description names.
pub fn build_model<W: Weight>(
    description: &ModelDescription,
) -> Result<EnvironmentOperator<AnyGroup, W>> {
    match description {
        ModelDescription::Rwidf { group, environment } => {
            let group = AnyGroup::from_spec(group)?;
            let measures = environment
                .iter()
                .map(|m| {
                    m.iter()
                        .map(|a| {
                            let to = a.to.ok_or_else(|| {
                                Error::ConfigInvalid(format!(
                                    "RWIDF atom {a:?} needs a target point"
                                ))
                            })?;
                            Ok(((to, group.parse_elem(&a.step)?), W::from_text(&a.weight)?))
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            build_rwidf(group, &EnvironmentMap::new(measures)?)
        }
        ModelDescription::Rwrtp {
            group,
            map,
            environment,
        } => {
            let group = AnyGroup::from_spec(group)?;
            let env = steps(&group, environment)?;
            build_rwrtp(group, &DrivingSystem::new(map.clone())?, &env)
        }
        ModelDescription::Rwre {
            group,
            generators,
            environment,
        } => {
            let group = AnyGroup::from_spec(group)?;
            let env = steps(&group, environment)?;
            let action = FiniteAction::from_tables(environment.len(), generators)?;
            build_rwre(group, action, &env)
        }
    }
}

/// Compares an RWRE groupoid with the action groupoid built from the same
/// data, under `(x, y, g) ↦ (x, g, y)`.
pub fn action_isomorphism_check(
    groupoid: &CoveringGroupoid<AnyGroup>,
    radius: usize,
) -> Result<StructureReport> {
    let Support::ActionGraph(action) = groupoid.support() else {
        return Err(Error::ConfigInvalid(
            "only action-graph groupoids come from an action".into(),
        ));
    };
    let tables = action
        .images()
        .iter()
        .map(|p| (0..action.size()).map(|i| p.apply(i)).collect())
        .collect();
    let description = GroupoidDescription::Action {
        group: groupoid.group().spec(),
        points: groupoid.size(),
        generators: tables,
        check_depth: DEFAULT_ACTION_CHECK_DEPTH,
    };
    let target = build_groupoid(&description)?;
    if !matches!(target, AnyGroupoid::Action(_)) {
        return Err(Error::ConfigInvalid("expected an action groupoid".into()));
    }
    let objects: Vec<(usize, AnyObject)> = (0..groupoid.size())
        .map(|x| (x, AnyObject::Point(x as u64)))
        .collect();
    Ok(check_isomorphism(
        groupoid,
        &target,
        &objects,
        |m| {
            AnyMorphism::Action(ActionMorphism {
                target: m.target,
                label: m.label.clone(),
                source: m.source,
            })
        },
        radius,
    ))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Preset {
    pub name: &'static str,
    pub summary: &'static str,
    pub description: ModelDescription,
}

const Z: GroupSpec = GroupSpec::Lattice { dim: 1 };

fn biased(right: &str, left: &str) -> Vec<Atom> {
    vec![Atom::new("(1)", right), Atom::new("(-1)", left)]
}

/// Bits of a periodic window of length 4, read as `x(k) = (x >> k) & 1`.
const WINDOW: usize = 4;

fn shift_table() -> Vec<usize> {
    // (1·x)(k) = x(k − 1): the walker at g reads x(g) at the origin of g⁻¹x.
    (0..1 << WINDOW)
        .map(|x: usize| ((x << 1) | (x >> (WINDOW - 1))) & ((1 << WINDOW) - 1))
        .collect()
}

fn random_four_point() -> Vec<Vec<Atom>> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    (0..4)
        .map(|_| {
            let weights = random_weights(&mut rng, 3);
            weights
                .into_iter()
                .map(|w| {
                    Atom::moving(
                        rng.random_range(0..4),
                        rng.random_range(0..3).to_string(),
                        w.to_string(),
                    )
                })
                .collect()
        })
        .collect()
}

/// Every shipped model, in catalog order.
pub fn presets() -> Vec<Preset> {
    vec![
        Preset {
            name: "rwidf-singleton",
            summary: "RWIDF over a one-point space: the simple random walk on Z",
            description: ModelDescription::Rwidf {
                group: Z,
                environment: vec![vec![
                    Atom::moving(0, "(1)", "1/2"),
                    Atom::moving(0, "(-1)", "1/2"),
                ]],
            },
        },
        Preset {
            name: "rwidf-swap",
            summary: "RWIDF on {0,1} with a deterministic swap; +1 from 0 and -1 from 1",
            description: ModelDescription::Rwidf {
                group: Z,
                environment: vec![
                    vec![Atom::moving(1, "(1)", "1")],
                    vec![Atom::moving(0, "(-1)", "1")],
                ],
            },
        },
        Preset {
            name: "rwidf-random4",
            summary: "RWIDF on a seeded random 4-point space over Z/3",
            description: ModelDescription::Rwidf {
                group: GroupSpec::Cyclic { order: 3 },
                environment: random_four_point(),
            },
        },
        Preset {
            name: "rwrtp-identity",
            summary: "RWRTP with T the identity: one fixed walk on Z per point",
            description: ModelDescription::Rwrtp {
                group: Z,
                map: vec![0, 1, 2],
                environment: vec![
                    biased("1/2", "1/2"),
                    biased("3/4", "1/4"),
                    biased("1/5", "4/5"),
                ],
            },
        },
        Preset {
            name: "rwrtp-periodic",
            summary: "RWRTP driven by the swap of Z/2: a 2-periodic deterministic walk",
            description: ModelDescription::Rwrtp {
                group: Z,
                map: vec![1, 0],
                environment: vec![vec![Atom::new("(1)", "1")], vec![Atom::new("(-1)", "1")]],
            },
        },
        Preset {
            name: "rwre-constant",
            summary: "RWRE with the same step law everywhere: an ordinary walk on Z",
            description: ModelDescription::Rwre {
                group: Z,
                generators: vec![vec![1, 2, 0]],
                environment: vec![biased("2/3", "1/3"); 3],
            },
        },
        Preset {
            name: "rwre-parity",
            summary: "RWRE on Z/2 with Z acting by parity and opposite biases",
            description: ModelDescription::Rwre {
                group: Z,
                generators: vec![vec![1, 0]],
                environment: vec![biased("2/3", "1/3"), biased("1/3", "2/3")],
            },
        },
        Preset {
            name: "rwre-two-environment",
            summary:
                "RWRE on Z over periodic binary windows of length 4 with right-step odds 3/4 or 1/3",
            description: ModelDescription::Rwre {
                group: Z,
                generators: vec![shift_table()],
                environment: (0..1 << WINDOW)
                    .map(|x| {
                        if x & 1 == 0 {
                            biased("3/4", "1/4")
                        } else {
                            biased("1/3", "2/3")
                        }
                    })
                    .collect(),
            },
        },
    ]
}

pub fn preset(name: &str) -> Result<Preset> {
    presets()
        .into_iter()
        .find(|p| p.name == name)
        .ok_or_else(|| Error::ConfigInvalid(format!("unknown model preset {name:?}")))
}
