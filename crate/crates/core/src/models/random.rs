//! Seeded generators of small random operators, for property tests and the
//! acceptance suite.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::Result;
use crate::group::{Perm, PermGroup};
use crate::groupoid::{fiber_ball, ActionGroupoid, FiniteAction, Groupoid, RelationGroupoid};
use crate::measure::{MeasureSystem, SparseMeasure};
use crate::operator::{DenseChain, InvariantOperator};
use crate::weight::{rational, Rational};

/// `k` positive rationals summing to one, with small denominators.
pub fn random_weights<R: Rng>(rng: &mut R, k: usize) -> Vec<Rational> {
    let raw: Vec<i64> = (0..k).map(|_| rng.random_range(1..=6)).collect();
    let total: i64 = raw.iter().sum();
    raw.into_iter().map(|w| rational(w, total)).collect()
}

pub fn random_perm<R: Rng>(rng: &mut R, degree: usize) -> Perm {
    let mut images: Vec<usize> = (0..degree).collect();
    images.shuffle(rng);
    Perm::from_images(&images).expect("shuffles are permutations")
}

pub type PermActionGroupoid = ActionGroupoid<PermGroup, FiniteAction>;

/// A permutation group with 1–3 random generators acting on its points.
pub fn random_perm_action<R: Rng>(rng: &mut R, max_degree: usize) -> PermActionGroupoid {
    let degree = rng.random_range(2..=max_degree.max(2));
    let gens: Vec<Perm> = (0..rng.random_range(1..=3))
        .map(|_| random_perm(rng, degree))
        .collect();
    let group = PermGroup::new(degree, gens.clone()).expect("generators share the degree");
    let action = FiniteAction::new(degree, gens).expect("generators share the degree");
    ActionGroupoid::new(group, action)
}

/// Random rational base measures on the radius-1 fiber balls.
pub fn random_action_operator<R: Rng>(
    rng: &mut R,
    max_degree: usize,
) -> InvariantOperator<PermActionGroupoid, Rational> {
    let groupoid = random_perm_action(rng, max_degree);
    let objects = groupoid.objects().expect("finite action");
    let table: Vec<Vec<_>> = objects
        .iter()
        .map(|x| {
            let ball = fiber_ball(&groupoid, x, 1);
            let weights = random_weights(rng, ball.len());
            ball.into_iter().zip(weights).collect()
        })
        .collect();
    let system =
        MeasureSystem::new(move |x: &usize| SparseMeasure::from_atoms(*x, table[*x].clone()));
    InvariantOperator::from_system(&groupoid, system, &[]).expect("random systems are valid")
}

/// Rows of a random chain on `states` points with 1–3 closed classes and
/// possibly some transient states, each of which has a path into a closed
/// class.
pub fn random_chain_rows<R: Rng>(rng: &mut R, states: usize) -> Vec<Vec<(usize, Rational)>> {
    let mut order: Vec<usize> = (0..states).collect();
    order.shuffle(rng);
    let classes = if states < 2 || rng.random_bool(0.5) {
        1
    } else {
        rng.random_range(2..=3.min(states))
    };
    let recurrent = if rng.random_bool(0.3) {
        states
    } else {
        rng.random_range(classes..=states)
    };
    // Class boundaries inside order[..recurrent].
    let mut cuts: Vec<usize> = (1..recurrent).collect();
    cuts.shuffle(rng);
    cuts.truncate(classes - 1);
    cuts.sort_unstable();
    let mut bounds = vec![0];
    bounds.extend(cuts);
    bounds.push(recurrent);

    let mut targets: Vec<Vec<usize>> = vec![Vec::new(); states];
    for w in bounds.windows(2) {
        let class = &order[w[0]..w[1]];
        for (i, &x) in class.iter().enumerate() {
            targets[x].push(class[(i + 1) % class.len()]);
            for _ in 0..rng.random_range(0..=2) {
                targets[x].push(class[rng.random_range(0..class.len())]);
            }
        }
    }
    for i in recurrent..states {
        let x = order[i];
        // One edge strictly down the transient order, or into a closed class.
        targets[x].push(order[rng.random_range(0..i)]);
        for _ in 0..rng.random_range(0..=2) {
            targets[x].push(rng.random_range(0..states));
        }
    }
    targets
        .into_iter()
        .map(|mut t| {
            t.sort_unstable();
            t.dedup();
            let w = random_weights(rng, t.len());
            t.into_iter().zip(w).collect()
        })
        .collect()
}

/// A random invariant operator on the full relation on `states` points.
/// Its fibers are copies of a random chain on the points.
pub fn random_relation_operator<R: Rng>(
    rng: &mut R,
    states: usize,
) -> InvariantOperator<RelationGroupoid, Rational> {
    let groupoid = RelationGroupoid::full(states as u64);
    let rows = random_chain_rows(rng, states);
    let g = groupoid.clone();
    let system = MeasureSystem::new(move |x: &u64| {
        SparseMeasure::from_atoms(
            *x,
            rows[*x as usize]
                .iter()
                .map(|(y, w)| (g.morphism(*x, *y as u64).expect("full relation"), w.clone())),
        )
    });
    InvariantOperator::from_system(&groupoid, system, &[]).expect("random systems are valid")
}

/// The whole fiber `G^x` of a relation operator as a dense chain.
pub fn relation_fiber_chain(
    op: &InvariantOperator<RelationGroupoid, Rational>,
    x: u64,
) -> Result<DenseChain> {
    let g = op.groupoid();
    let states: Vec<_> = g
        .class_of(x)
        .iter()
        .map(|&y| g.morphism(x, y).expect("same class"))
        .collect();
    DenseChain::from_states(&op.fiber_operator(&x), &states)
}
