//! Markov kernels, invariant operators on groupoids, and measure evolution.
//!
//! An invariant operator is given by its transition measures `π_x` at the
//! units; the measure at any other morphism is `π_γ = γ π_{s(γ)}`, so the
//! chain started in the fiber `G^x` never leaves it.

mod dense;

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::sync::{Arc, RwLock};

use num_traits::{One, Zero};
use rayon::prelude::*;
use rustc_hash::FxHashMap;

pub use dense::{DenseChain, DENSE_STATE_LIMIT};

use crate::error::{Error, Result};
use crate::groupoid::{fiber_ball, Groupoid};
use crate::measure::{
    accumulate, convolve_systems, pushforward, FiberMeasure, MeasureSystem, SparseMeasure,
};
use crate::weight::{Weight, DEFAULT_TRUNCATION};

/// A transition rule on a countable state space.
pub trait MarkovKernel: Send + Sync {
    type State: Clone + Eq + Hash + Ord + Debug + Display + Send + Sync + 'static;
    type W: Weight;

    /// Outgoing transitions from `s`, weights summing to one.
    fn row(&self, s: &Self::State) -> Vec<(Self::State, Self::W)>;

    /// Atoms lighter than this are moved to the leak ledger after each step.
    fn truncation(&self) -> Option<Self::W> {
        None
    }
}

impl<K: MarkovKernel + ?Sized> MarkovKernel for &K {
    type State = K::State;
    type W = K::W;

    fn row(&self, s: &Self::State) -> Vec<(Self::State, Self::W)> {
        (**self).row(s)
    }

    fn truncation(&self) -> Option<Self::W> {
        (**self).truncation()
    }
}

impl<K: MarkovKernel + ?Sized> MarkovKernel for Arc<K> {
    type State = K::State;
    type W = K::W;

    fn row(&self, s: &Self::State) -> Vec<(Self::State, Self::W)> {
        (**self).row(s)
    }

    fn truncation(&self) -> Option<Self::W> {
        (**self).truncation()
    }
}

/// The default per-atom truncation: none for exact weights, `1e-12` for floats.
pub fn default_truncation<W: Weight>() -> Option<W> {
    if W::EXACT {
        None
    } else {
        Some(W::from_ratio(1, (1.0 / DEFAULT_TRUNCATION) as i64))
    }
}

/// Supports at least this large are split into fixed-size chunks. The chunk
/// size does not depend on the worker count, so float sums are reproducible.
const PAR_THRESHOLD: usize = 1 << 16;
const CHUNK: usize = 1 << 13;

/// `μ ↦ μP`, followed by truncation if the kernel asks for it.
pub fn step<K, T>(
    kernel: &K,
    mu: &SparseMeasure<K::State, K::W, T>,
) -> SparseMeasure<K::State, K::W, T>
where
    K: MarkovKernel,
    T: Clone + PartialEq + Display + Send + Sync,
{
    let atoms = mu.atoms();
    let next = if atoms.len() < PAR_THRESHOLD {
        accumulate(atoms.iter().flat_map(|(s, w)| {
            kernel
                .row(s)
                .into_iter()
                .map(move |(t, p)| (t, p * w.clone()))
        }))
    } else {
        let parts: Vec<Vec<(K::State, K::W)>> = atoms
            .par_chunks(CHUNK)
            .map(|chunk| {
                accumulate(chunk.iter().flat_map(|(s, w)| {
                    kernel
                        .row(s)
                        .into_iter()
                        .map(move |(t, p)| (t, p * w.clone()))
                }))
            })
            .collect();
        accumulate(parts.into_iter().flatten())
    };
    let mut out = SparseMeasure::from_sorted(mu.fiber().clone(), next, mu.leaked().clone());
    if let Some(th) = kernel.truncation() {
        out.truncate_in_place(&th);
    }
    out
}

/// `θ, θP, θP², …`, each term computed from the previous one.
pub struct Trajectory<'a, K: MarkovKernel, T> {
    kernel: &'a K,
    current: Option<SparseMeasure<K::State, K::W, T>>,
}

impl<K, T> Iterator for Trajectory<'_, K, T>
where
    K: MarkovKernel,
    T: Clone + PartialEq + Display + Send + Sync,
{
    type Item = SparseMeasure<K::State, K::W, T>;

    fn next(&mut self) -> Option<Self::Item> {
        let cur = self.current.take()?;
        self.current = Some(step(self.kernel, &cur));
        Some(cur)
    }
}

pub fn trajectory<K, T>(kernel: &K, start: SparseMeasure<K::State, K::W, T>) -> Trajectory<'_, K, T>
where
    K: MarkovKernel,
    T: Clone + PartialEq + Display + Send + Sync,
{
    Trajectory {
        kernel,
        current: Some(start),
    }
}

/// `θP^n`.
pub fn power<K, T>(
    kernel: &K,
    start: &SparseMeasure<K::State, K::W, T>,
    n: usize,
) -> SparseMeasure<K::State, K::W, T>
where
    K: MarkovKernel,
    T: Clone + PartialEq + Display + Send + Sync,
{
    trajectory(kernel, start.clone())
        .nth(n)
        .expect("trajectories are infinite")
}

/// `(1/(n+1)) Σ_{k=0}^{n} θP^k`.
pub fn cesaro_average<K, T>(
    kernel: &K,
    start: &SparseMeasure<K::State, K::W, T>,
    n: usize,
) -> SparseMeasure<K::State, K::W, T>
where
    K: MarkovKernel,
    T: Clone + PartialEq + Display + Send + Sync,
{
    let mut sum: FxHashMap<K::State, K::W> = FxHashMap::default();
    let mut leak = K::W::zero();
    for m in trajectory(kernel, start.clone()).take(n + 1) {
        leak = leak + m.leaked().clone();
        for (k, w) in m.atoms() {
            match sum.get_mut(k) {
                Some(v) => *v = v.clone() + w.clone(),
                None => {
                    sum.insert(k.clone(), w.clone());
                }
            }
        }
    }
    let c = K::W::one() / K::W::from_usize(n + 1);
    SparseMeasure::with_leak(
        start.fiber().clone(),
        sum.into_iter().map(|(k, w)| (k, w * c.clone())),
        leak * c.clone(),
    )
}

/// `Q = (P + P²)/2` for an arbitrary kernel.
#[derive(Debug, Clone)]
pub struct BinomialKernel<K>(pub K);

impl<K: MarkovKernel> MarkovKernel for BinomialKernel<K> {
    type State = K::State;
    type W = K::W;

    fn row(&self, s: &Self::State) -> Vec<(Self::State, Self::W)> {
        let half = K::W::from_ratio(1, 2);
        let first = self.0.row(s);
        let mut items: Vec<(Self::State, Self::W)> = first
            .iter()
            .map(|(t, p)| (t.clone(), p.clone() * half.clone()))
            .collect();
        for (t, p) in &first {
            let c = p.clone() * half.clone();
            items.extend(self.0.row(t).into_iter().map(|(u, r)| (u, r * c.clone())));
        }
        accumulate(items)
    }

    fn truncation(&self) -> Option<Self::W> {
        self.0.truncation()
    }
}

type Cache<G, W> = RwLock<FxHashMap<<G as Groupoid>::Object, Arc<FiberMeasure<G, W>>>>;

/// Cached base measures are dropped wholesale past this many objects.
const CACHE_LIMIT: usize = 1 << 18;

/// An invariant Markov operator: `π_γ = γ π_{s(γ)}`.
pub struct InvariantOperator<G: Groupoid, W: Weight> {
    groupoid: G,
    base: MeasureSystem<G, W>,
    truncation: Option<W>,
    cache: Arc<Cache<G, W>>,
}

impl<G: Groupoid, W: Weight> Clone for InvariantOperator<G, W> {
    fn clone(&self) -> Self {
        InvariantOperator {
            groupoid: self.groupoid.clone(),
            base: self.base.clone(),
            truncation: self.truncation.clone(),
            cache: Arc::clone(&self.cache),
        }
    }
}

impl<G: Groupoid, W: Weight> Debug for InvariantOperator<G, W> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("InvariantOperator")
            .field("kind", &self.groupoid.kind())
            .field("truncation", &self.truncation)
            .finish()
    }
}

impl<G: Groupoid, W: Weight> InvariantOperator<G, W> {
    /// Extends the system `x ↦ π_x` to all morphisms. Every object of a finite
    /// groupoid is checked, plus the given sample.
    pub fn from_system(
        groupoid: &G,
        system: MeasureSystem<G, W>,
        sample: &[G::Object],
    ) -> Result<Self> {
        let mut objects: Vec<G::Object> = groupoid
            .objects()
            .filter(|o| o.len() <= DENSE_STATE_LIMIT)
            .unwrap_or_default();
        objects.extend(sample.iter().cloned());
        for x in &objects {
            let m = system.validate_at(groupoid, x)?;
            if let Some((k, w)) = m.atoms().iter().find(|(_, w)| *w > W::one()) {
                return Err(Error::MassDeficit {
                    object: x.to_string(),
                    mass: format!("{} at {k}", w.to_text()),
                });
            }
        }
        Ok(Self::new_unchecked(groupoid, system))
    }

    pub fn new_unchecked(groupoid: &G, system: MeasureSystem<G, W>) -> Self {
        InvariantOperator {
            groupoid: groupoid.clone(),
            base: system,
            truncation: default_truncation(),
            cache: Arc::new(RwLock::new(FxHashMap::default())),
        }
    }

    pub fn identity(groupoid: &G) -> Self {
        Self::new_unchecked(groupoid, MeasureSystem::units(groupoid))
    }

    pub fn with_truncation(mut self, threshold: Option<W>) -> Self {
        self.truncation = threshold;
        self
    }

    pub fn groupoid(&self) -> &G {
        &self.groupoid
    }

    pub fn system(&self) -> &MeasureSystem<G, W> {
        &self.base
    }

    /// `π_x`, the transition measure at the unit `ε_x`.
    pub fn base_at(&self, x: &G::Object) -> Arc<FiberMeasure<G, W>> {
        if let Some(m) = self.cache.read().expect("cache lock").get(x) {
            return Arc::clone(m);
        }
        let m = Arc::new(self.base.at(x));
        let mut cache = self.cache.write().expect("cache lock");
        if cache.len() >= CACHE_LIMIT {
            cache.clear();
        }
        cache.insert(x.clone(), Arc::clone(&m));
        m
    }

    /// `π_γ = γ π_{s(γ)}`.
    pub fn transition(&self, gamma: &G::Morphism) -> FiberMeasure<G, W> {
        let base = self.base_at(&self.groupoid.source(gamma));
        pushforward(&self.groupoid, gamma, &base).expect("source of γ is the fiber of π_{s(γ)}")
    }

    /// `μ ↦ μP = Σ_γ μ(γ) π_γ`.
    pub fn apply_dual(&self, mu: &FiberMeasure<G, W>) -> FiberMeasure<G, W> {
        step(self, mu)
    }

    pub fn start(&self, x: &G::Object) -> FiberMeasure<G, W> {
        SparseMeasure::dirac(x.clone(), self.groupoid.unit(x))
    }

    /// The restriction `P_x` to one fiber.
    pub fn fiber_operator(&self, x: &G::Object) -> FiberOperator<G, W> {
        FiberOperator {
            op: self.clone(),
            fiber: x.clone(),
        }
    }

    /// `Q = (P + P²)/2`, with base system `(π + π∗π)/2`.
    pub fn binomial_average(&self) -> Self {
        let g = self.groupoid.clone();
        let (one, two) = (
            self.base.clone(),
            convolve_systems(&g, &self.base, &self.base),
        );
        let half = W::from_ratio(1, 2);
        let system = MeasureSystem::new(move |x| {
            let (a, b) = (one.at(x), two.at(x));
            SparseMeasure::combine(x.clone(), &[(half.clone(), &a), (half.clone(), &b)])
                .expect("same fiber")
        });
        Self::new_unchecked(&self.groupoid, system).with_truncation(self.truncation.clone())
    }
}

impl<G: Groupoid, W: Weight> MarkovKernel for InvariantOperator<G, W> {
    type State = G::Morphism;
    type W = W;

    fn row(&self, gamma: &G::Morphism) -> Vec<(G::Morphism, W)> {
        let base = self.base_at(&self.groupoid.source(gamma));
        base.atoms()
            .iter()
            .map(|(k, w)| (self.groupoid.compose_unchecked(gamma, k), w.clone()))
            .collect()
    }

    fn truncation(&self) -> Option<W> {
        self.truncation.clone()
    }
}

/// The operator `P_x` on the single fiber `G^x`.
#[derive(Debug, Clone)]
pub struct FiberOperator<G: Groupoid, W: Weight> {
    op: InvariantOperator<G, W>,
    fiber: G::Object,
}

impl<G: Groupoid, W: Weight> FiberOperator<G, W> {
    pub fn fiber(&self) -> &G::Object {
        &self.fiber
    }

    pub fn operator(&self) -> &InvariantOperator<G, W> {
        &self.op
    }

    pub fn start(&self) -> FiberMeasure<G, W> {
        self.op.start(&self.fiber)
    }
}

impl<G: Groupoid, W: Weight> MarkovKernel for FiberOperator<G, W> {
    type State = G::Morphism;
    type W = W;

    fn row(&self, gamma: &G::Morphism) -> Vec<(G::Morphism, W)> {
        debug_assert!(
            self.op.groupoid.target(gamma) == self.fiber,
            "state outside the fiber"
        );
        self.op.row(gamma)
    }

    fn truncation(&self) -> Option<W> {
        self.op.truncation.clone()
    }
}

/// `P ∘ P'`: first a step of `first`, then a step of `second`.
pub fn compose_operators<G: Groupoid, W: Weight>(
    first: &InvariantOperator<G, W>,
    second: &InvariantOperator<G, W>,
) -> InvariantOperator<G, W> {
    let system = convolve_systems(&first.groupoid, &first.base, &second.base);
    InvariantOperator::new_unchecked(&first.groupoid, system)
        .with_truncation(first.truncation.clone())
}

/// `(P_1 + … + P_d)/d`.
pub fn average_operators<G: Groupoid, W: Weight>(
    ops: &[InvariantOperator<G, W>],
) -> InvariantOperator<G, W> {
    assert!(!ops.is_empty(), "cannot average an empty family");
    let bases: Vec<MeasureSystem<G, W>> = ops.iter().map(|o| o.base.clone()).collect();
    let c = W::one() / W::from_usize(ops.len());
    let system = MeasureSystem::new(move |x: &G::Object| {
        let parts: Vec<_> = bases.iter().map(|b| b.at(x)).collect();
        let terms: Vec<_> = parts.iter().map(|m| (c.clone(), m)).collect();
        SparseMeasure::combine(x.clone(), &terms).expect("same fiber")
    });
    InvariantOperator::new_unchecked(&ops[0].groupoid, system)
        .with_truncation(ops[0].truncation.clone())
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct EquivarianceReport {
    pub pairs_checked: usize,
    pub max_discrepancy: f64,
    pub mismatches: Vec<String>,
}

impl EquivarianceReport {
    pub fn exact(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Checks `π_{γ'γ} = γ' π_γ` atom by atom for `γ'` in the ball at each
/// object and `γ` in the ball at `s(γ')`.
pub fn equivariance_check<G: Groupoid, W: Weight>(
    op: &InvariantOperator<G, W>,
    objects: &[G::Object],
    radius: usize,
) -> EquivarianceReport {
    let g = &op.groupoid;
    let mut report = EquivarianceReport::default();
    for x in objects {
        for outer in fiber_ball(g, x, radius) {
            for inner in fiber_ball(g, &g.source(&outer), radius) {
                report.pairs_checked += 1;
                let lhs = op.transition(&g.compose_unchecked(&outer, &inner));
                let rhs = pushforward(g, &outer, &op.transition(&inner)).expect("composable");
                if lhs != rhs {
                    let d = lhs
                        .tv_distance(&rhs)
                        .map(|t| t.raw.to_f64())
                        .unwrap_or(f64::INFINITY);
                    report.max_discrepancy = report.max_discrepancy.max(d);
                    if report.mismatches.len() < 8 {
                        report.mismatches.push(format!("{outer} after {inner}"));
                    }
                }
            }
        }
    }
    report
}

#[cfg(test)]
mod tests;
