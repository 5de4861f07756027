use std::collections::HashMap;

use super::{fiber_ball, Groupoid};

/// A family of weightings `λ^x` on the fibers: counting measure, optionally
/// with individual morphism weights overridden.
#[derive(Debug, Clone)]
pub struct HaarSystem<M> {
    overrides: HashMap<M, f64>,
}

impl<M: Eq + std::hash::Hash + Clone> HaarSystem<M> {
    pub fn counting() -> Self {
        HaarSystem {
            overrides: HashMap::new(),
        }
    }

    pub fn with_weight(mut self, morphism: M, weight: f64) -> Self {
        self.overrides.insert(morphism, weight);
        self
    }

    pub fn weight(&self, morphism: &M) -> f64 {
        self.overrides.get(morphism).copied().unwrap_or(1.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HaarReport {
    pub pairs_checked: usize,
    pub max_discrepancy: f64,
    pub worst: Option<String>,
}

/// Checks `γλ^{s(γ)} = λ^{t(γ)}` pointwise: `λ^{s(γ)}(η) = λ^{t(γ)}(γη)` for
/// every `γ` in the ball at each object and every `η` in the ball at `s(γ)`.
pub fn haar_invariance_check<G: Groupoid>(
    groupoid: &G,
    haar: &HaarSystem<G::Morphism>,
    objects: &[G::Object],
    radius: usize,
) -> HaarReport {
    let mut report = HaarReport {
        pairs_checked: 0,
        max_discrepancy: 0.0,
        worst: None,
    };
    for x in objects {
        for gamma in fiber_ball(groupoid, x, radius) {
            for eta in fiber_ball(groupoid, &groupoid.source(&gamma), radius) {
                report.pairs_checked += 1;
                let moved = groupoid.compose_unchecked(&gamma, &eta);
                let d = (haar.weight(&eta) - haar.weight(&moved)).abs();
                if d > report.max_discrepancy {
                    report.max_discrepancy = d;
                    report.worst = Some(format!("{gamma} moving {eta}"));
                }
            }
        }
    }
    report
}
