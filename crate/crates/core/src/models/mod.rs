//! Randomized walks on groups and the operators they induce on groupoids.

mod environment;
mod presets;
pub mod random;

pub use environment::{
    build_rwidf, build_rwre, build_rwrtp, environment_chain, source_marginal, DrivingSystem,
    EnvironmentMap, EnvironmentOperator,
};
pub use presets::{
    action_isomorphism_check, build_model, preset, presets, Atom, ModelDescription, Preset,
};

use crate::group::Group;
use crate::groupoid::GroupGroupoid;
use crate::measure::MeasureSystem;
use crate::operator::InvariantOperator;
use crate::weight::Weight;

/// Uniform measure on the symmetric generating set of `group`.
pub fn simple_random_walk<G: Group, W: Weight>(group: G) -> InvariantOperator<GroupGroupoid<G>, W> {
    let groupoid = GroupGroupoid::new(group.clone());
    let gens = group.generators();
    let w = W::from_ratio(1, gens.len() as i64);
    let system = MeasureSystem::constant(
        &groupoid,
        gens.into_iter().map(|s| (s, w.clone())).collect(),
    );
    InvariantOperator::from_system(&groupoid, system, &[])
        .expect("generator measures are probability measures")
}
