//! Walks whose steps depend on a point of a finite environment space `X`.
//!
//! All three models live on subgroupoids of `X × X × G`. A morphism
//! `(x, y, g)` in the fiber over `x` records a walker at group position `g`
//! whose environment is currently `y`; one step appends a morphism of the
//! fiber over `y`.

use crate::error::{Error, Result};
use crate::group::Group;
use crate::groupoid::{
    check_action, CoveringGroupoid, CoveringMorphism, FiniteAction, GroupAction, Groupoid, Support,
    DEFAULT_ACTION_CHECK_DEPTH,
};
use crate::measure::{MeasureSystem, SparseMeasure};
use crate::operator::{DenseChain, InvariantOperator};
use crate::weight::Weight;

pub type EnvironmentOperator<G, W> = InvariantOperator<CoveringGroupoid<G>, W>;

/// `x ↦ π_x` on the points `0..n` of a finite base space.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvironmentMap<E, W> {
    measures: Vec<Vec<(E, W)>>,
}

impl<E: std::fmt::Debug, W: Weight> EnvironmentMap<E, W> {
    /// Checks that every `π_x` is a probability measure.
    pub fn new(measures: Vec<Vec<(E, W)>>) -> Result<Self> {
        if measures.is_empty() {
            return Err(Error::ConfigInvalid("the base space is empty".into()));
        }
        let tol = if W::EXACT {
            W::zero()
        } else {
            W::from_ratio(1, 1_000_000_000)
        };
        for (x, m) in measures.iter().enumerate() {
            if let Some((e, w)) = m.iter().find(|(_, w)| !w.is_positive()) {
                return Err(Error::MassDeficit {
                    object: x.to_string(),
                    mass: format!("{} at {e:?}", w.to_text()),
                });
            }
            let total = m.iter().fold(W::zero(), |s, (_, w)| s + w.clone());
            if (total.clone() - W::one()).abs() > tol {
                return Err(Error::MassDeficit {
                    object: x.to_string(),
                    mass: total.to_text(),
                });
            }
        }
        Ok(EnvironmentMap { measures })
    }

    pub fn points(&self) -> usize {
        self.measures.len()
    }

    pub fn at(&self, x: usize) -> &[(E, W)] {
        &self.measures[x]
    }
}

/// A bijection `T` of `0..n`, driving the environment forward in time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DrivingSystem {
    map: Vec<usize>,
}

impl DrivingSystem {
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; map.len()];
        for &y in &map {
            if y >= map.len() || std::mem::replace(&mut seen[y], true) {
                return Err(Error::ConfigInvalid(format!(
                    "driving map {map:?} is not a bijection"
                )));
            }
        }
        Ok(DrivingSystem { map })
    }

    pub fn identity(n: usize) -> Self {
        DrivingSystem {
            map: (0..n).collect(),
        }
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn points(&self) -> usize {
        self.map.len()
    }

    /// Orbits of `T`, each listed from its smallest point.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.map.len()];
        let mut out = Vec::new();
        for start in 0..self.map.len() {
            if seen[start] {
                continue;
            }
            let mut orbit = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                orbit.push(x);
                x = self.map[x];
            }
            out.push(orbit);
        }
        out
    }
}

fn system<G: Group, W: Weight>(
    groupoid: &CoveringGroupoid<G>,
    atoms: Vec<Vec<(CoveringMorphism<G::Elem>, W)>>,
) -> Result<EnvironmentOperator<G, W>> {
    let system = MeasureSystem::new(move |x: &usize| {
        SparseMeasure::from_atoms(*x, atoms[*x].iter().cloned())
    });
    InvariantOperator::from_system(groupoid, system, &[])
}

/// Walk in an i.i.d.-driven field: from `(y, g)` move to `(z, gh)` with
/// probability `π_y(z, h)`. Lives on the full groupoid `X × X × G`.
pub fn build_rwidf<G: Group, W: Weight>(
    group: G,
    env: &EnvironmentMap<(usize, G::Elem), W>,
) -> Result<EnvironmentOperator<G, W>> {
    let n = env.points();
    let groupoid = CoveringGroupoid::full(group, n);
    let atoms = (0..n)
        .map(|y| {
            env.at(y)
                .iter()
                .map(|((z, h), w)| Ok((groupoid.morphism(y, *z, h.clone())?, w.clone())))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    system(&groupoid, atoms)
}

/// Walk in a random time-dependent environment: at time `n` the step law is
/// `π_{T^n x}`. Lives on the orbit relation of `T` times `G`.
pub fn build_rwrtp<G: Group, W: Weight>(
    group: G,
    driving: &DrivingSystem,
    env: &EnvironmentMap<G::Elem, W>,
) -> Result<EnvironmentOperator<G, W>> {
    let n = env.points();
    if driving.points() != n {
        return Err(Error::ConfigInvalid(format!(
            "driving map on {} points, environment on {n}",
            driving.points()
        )));
    }
    let groupoid = CoveringGroupoid::new(group, n, Support::Partition(driving.orbits()))?;
    let atoms = (0..n)
        .map(|y| {
            env.at(y)
                .iter()
                .map(|(h, w)| {
                    (
                        CoveringMorphism {
                            target: y,
                            source: driving.apply(y),
                            label: h.clone(),
                        },
                        w.clone(),
                    )
                })
                .collect()
        })
        .collect();
    system(&groupoid, atoms)
}

/// Walk in a random environment: a walker at `g` steps by `h` with
/// probability `π_{g⁻¹x}(h)`. Lives on the action graph `{(x, g⁻¹x, g)}`.
pub fn build_rwre<G: Group, W: Weight>(
    group: G,
    action: FiniteAction,
    env: &EnvironmentMap<G::Elem, W>,
) -> Result<EnvironmentOperator<G, W>> {
    let n = env.points();
    check_action(&group, &action, DEFAULT_ACTION_CHECK_DEPTH)?;
    let groupoid = CoveringGroupoid::new(group.clone(), n, Support::ActionGraph(action.clone()))?;
    let atoms = (0..n)
        .map(|y| {
            env.at(y)
                .iter()
                .map(|(h, w)| {
                    (
                        CoveringMorphism {
                            target: y,
                            source: action.act(&group, &group.inv(h), &y),
                            label: h.clone(),
                        },
                        w.clone(),
                    )
                })
                .collect()
        })
        .collect();
    system(&groupoid, atoms)
}

/// Image of a fiber measure under the source map: the law of the
/// environment currently seen by the walker.
pub fn source_marginal<G: Groupoid<Object = usize>, W: Weight>(
    op: &InvariantOperator<G, W>,
    mu: &SparseMeasure<G::Morphism, W, usize>,
) -> SparseMeasure<usize, W, u8> {
    let g = op.groupoid();
    SparseMeasure::from_atoms(
        0u8,
        mu.atoms().iter().map(|(m, w)| (g.source(m), w.clone())),
    )
}

/// The chain on objects obtained by forgetting the group coordinate.
pub fn environment_chain<G: Groupoid<Object = usize>, W: Weight>(
    op: &InvariantOperator<G, W>,
) -> Result<DenseChain> {
    let objects = op.groupoid().objects().ok_or_else(|| {
        Error::ConfigInvalid("environment chains need finitely many objects".into())
    })?;
    let rows = objects
        .iter()
        .map(|x| {
            source_marginal(op, &op.base_at(x))
                .atoms()
                .iter()
                .map(|(y, w)| (*y, w.to_f64()))
                .collect()
        })
        .collect();
    DenseChain::from_rows(rows)
}
