//! Discrete groupoids: objects, morphisms, composition, inversion, fibers.
//!
//! Morphisms are read right to left. `compose(later, earlier)` is defined
//! when `source(later) == target(earlier)` and has the source of `earlier`
//! and the target of `later`. The fiber `G^x` is the set of morphisms with
//! target `x`; left multiplication by `γ` maps `G^{s(γ)}` bijectively onto
//! `G^{t(γ)}`.

mod action;
mod any;
mod covering;
mod group;
mod haar;
mod relation;

use std::collections::HashSet;
use std::fmt::{self, Debug, Display};
use std::hash::Hash;

use serde::{Deserialize, Serialize};

pub use action::{
    check_action, ActionGroupoid, ActionMorphism, FiniteAction, GroupAction,
    DEFAULT_ACTION_CHECK_DEPTH,
};
pub use any::{build_groupoid, AnyGroupoid, AnyMorphism, AnyObject, GroupoidDescription};
pub use covering::{CoveringGroupoid, CoveringMorphism, Support};
pub use group::GroupGroupoid;
pub use haar::{haar_invariance_check, HaarReport, HaarSystem};
pub use relation::{RelationGroupoid, RelationMorphism};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupoidKind {
    Group,
    Relation,
    Action,
    Semidirect,
    Covering,
}

/// The single object of a group viewed as a groupoid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Singleton;

impl Display for Singleton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "*")
    }
}

pub trait Groupoid: Clone + Send + Sync + 'static {
    type Object: Clone + Eq + Hash + Ord + Debug + Display + Send + Sync + 'static;
    type Morphism: Clone + Eq + Hash + Ord + Debug + Display + Send + Sync + 'static;

    fn kind(&self) -> GroupoidKind;

    fn source(&self, g: &Self::Morphism) -> Self::Object;

    fn target(&self, g: &Self::Morphism) -> Self::Object;

    fn unit(&self, x: &Self::Object) -> Self::Morphism;

    /// `later ∘ earlier`, assuming the pair is composable.
    fn compose_unchecked(&self, later: &Self::Morphism, earlier: &Self::Morphism)
        -> Self::Morphism;

    fn invert(&self, g: &Self::Morphism) -> Self::Morphism;

    /// Generating morphisms with target `x`, in a fixed order.
    fn generators_at(&self, x: &Self::Object) -> Vec<Self::Morphism>;

    /// All objects, when there are finitely many.
    fn objects(&self) -> Option<Vec<Self::Object>>;

    fn parse_object(&self, text: &str) -> Result<Self::Object>;

    fn parse_morphism(&self, text: &str) -> Result<Self::Morphism>;

    fn compose(&self, later: &Self::Morphism, earlier: &Self::Morphism) -> Result<Self::Morphism> {
        let (s, t) = (self.source(later), self.target(earlier));
        if s != t {
            return Err(Error::NonComposable {
                source_obj: s.to_string(),
                target_obj: t.to_string(),
            });
        }
        Ok(self.compose_unchecked(later, earlier))
    }

    fn is_unit(&self, g: &Self::Morphism) -> bool {
        *g == self.unit(&self.target(g))
    }
}

/// Morphisms of `G^x` that are products of at most `radius` generators.
///
/// The result is ordered by word length, then by the morphism order, so
/// a smaller radius always yields a prefix of a larger one.
pub fn fiber_ball<G: Groupoid>(groupoid: &G, x: &G::Object, radius: usize) -> Vec<G::Morphism> {
    let unit = groupoid.unit(x);
    let mut seen: HashSet<G::Morphism> = HashSet::from([unit.clone()]);
    let mut out = vec![unit.clone()];
    let mut frontier = vec![unit];
    for _ in 0..radius {
        let mut next = Vec::new();
        for g in &frontier {
            for h in groupoid.generators_at(&groupoid.source(g)) {
                let gh = groupoid.compose_unchecked(g, &h);
                if seen.insert(gh.clone()) {
                    next.push(gh);
                }
            }
        }
        next.sort();
        out.extend(next.iter().cloned());
        frontier = next;
        if frontier.is_empty() {
            break;
        }
    }
    out
}

/// Morphisms with source `x` in the ball of the given radius (inverses of the fiber ball).
pub fn source_ball<G: Groupoid>(groupoid: &G, x: &G::Object, radius: usize) -> Vec<G::Morphism> {
    fiber_ball(groupoid, x, radius)
        .iter()
        .map(|g| groupoid.invert(g))
        .collect()
}

/// Outcome of the structural checks run on generator balls.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StructureReport {
    pub morphisms_checked: usize,
    pub triples_checked: usize,
    pub failures: Vec<String>,
}

impl StructureReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Associativity on composable triples and the unit/inverse laws, on the
/// balls of the given radius around each listed object.
pub fn check_structure<G: Groupoid>(
    groupoid: &G,
    objects: &[G::Object],
    radius: usize,
) -> StructureReport {
    let mut report = StructureReport::default();
    let mut fail = |msg: String| {
        if report.failures.len() < 16 {
            report.failures.push(msg);
        }
    };
    let mut triples = 0usize;
    let mut singles = 0usize;
    for x in objects {
        let ball = fiber_ball(groupoid, x, radius);
        for g in &ball {
            singles += 1;
            let inv = groupoid.invert(g);
            if groupoid.source(&inv) != groupoid.target(g)
                || groupoid.target(&inv) != groupoid.source(g)
            {
                fail(format!("inverse of {g} has wrong endpoints"));
            }
            if groupoid.invert(&inv) != *g {
                fail(format!("inverse of inverse of {g} differs"));
            }
            match groupoid.compose(g, &inv) {
                Ok(u) if u == groupoid.unit(&groupoid.target(g)) => {}
                _ => fail(format!(
                    "{g} times its inverse is not the unit at its target"
                )),
            }
            match groupoid.compose(&inv, g) {
                Ok(u) if u == groupoid.unit(&groupoid.source(g)) => {}
                _ => fail(format!(
                    "inverse of {g} times {g} is not the unit at its source"
                )),
            }
            let left = groupoid.compose(&groupoid.unit(&groupoid.target(g)), g);
            let right = groupoid.compose(g, &groupoid.unit(&groupoid.source(g)));
            if left.as_ref() != Ok(g) || right.as_ref() != Ok(g) {
                fail(format!("units do not act trivially on {g}"));
            }
        }
        // Triples g1 ∘ g2 ∘ g3 with g1 ∈ G^x, g2 ∈ G^{s(g1)}, g3 ∈ G^{s(g2)}.
        for g1 in &ball {
            let b2 = fiber_ball(groupoid, &groupoid.source(g1), radius);
            for g2 in &b2 {
                let b3 = fiber_ball(groupoid, &groupoid.source(g2), radius);
                for g3 in &b3 {
                    triples += 1;
                    let a = groupoid.compose_unchecked(&groupoid.compose_unchecked(g1, g2), g3);
                    let b = groupoid.compose_unchecked(g1, &groupoid.compose_unchecked(g2, g3));
                    if a != b {
                        fail(format!("associativity fails on ({g1}, {g2}, {g3})"));
                    }
                }
            }
        }
    }
    report.morphisms_checked = singles;
    report.triples_checked = triples;
    report
}

/// A structure-preserving bijection check between two groupoids, given a
/// candidate map on morphisms. Verifies source, target, composition and
/// inversion on balls around the listed objects, and injectivity.
pub fn check_isomorphism<G: Groupoid, H: Groupoid>(
    left: &G,
    right: &H,
    objects: &[(G::Object, H::Object)],
    map_morphism: impl Fn(&G::Morphism) -> H::Morphism,
    radius: usize,
) -> StructureReport {
    let mut report = StructureReport::default();
    let mut images: HashSet<H::Morphism> = HashSet::new();
    let mut triples = 0;
    for (x, y) in objects {
        let ball = fiber_ball(left, x, radius);
        let ball_right = fiber_ball(right, y, radius);
        if ball.len() != ball_right.len() {
            report.failures.push(format!(
                "balls at {x} and {y} have sizes {} and {}",
                ball.len(),
                ball_right.len()
            ));
        }
        let ball_right: HashSet<_> = ball_right.into_iter().collect();
        for g in &ball {
            let fg = map_morphism(g);
            if !ball_right.contains(&fg) {
                report
                    .failures
                    .push(format!("image of {g} is not in the target ball"));
            }
            if right.target(&fg) != right.target(&map_morphism(&left.unit(&left.target(g)))) {
                report.failures.push(format!("target of {g} not preserved"));
            }
            if map_morphism(&left.invert(g)) != right.invert(&fg) {
                report
                    .failures
                    .push(format!("inverse of {g} not preserved"));
            }
            if !images.insert(fg.clone()) {
                report.failures.push(format!("map is not injective at {g}"));
            }
            for h in fiber_ball(left, &left.source(g), 1) {
                triples += 1;
                let gh = left.compose_unchecked(g, &h);
                if right.compose(&fg, &map_morphism(&h)).ok() != Some(map_morphism(&gh)) {
                    report
                        .failures
                        .push(format!("composition of {g} and {h} not preserved"));
                }
            }
        }
        report.morphisms_checked += ball.len();
    }
    report.triples_checked = triples;
    report.failures.truncate(16);
    report
}

/// Morphisms of the ball at `x` that are loops at `x`.
pub fn isotropy<G: Groupoid>(groupoid: &G, x: &G::Object, radius: usize) -> Vec<G::Morphism> {
    fiber_ball(groupoid, x, radius)
        .into_iter()
        .filter(|g| groupoid.source(g) == *x)
        .collect()
}

#[cfg(test)]
mod tests;
