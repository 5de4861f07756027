//! Positive harmonic functions, Doob transforms and minimality.
//!
//! A positive `φ` with `Pφ = λφ` reweights `P` into the Markov kernel
//! `p^φ(s, t) = p(s, t) φ(t) / (λ φ(s))`. The function is minimal iff the
//! transformed chain is Liouville, which is what [`minimality_test`] probes.

mod boundary;
mod extension;
mod lumped;
mod strong;
mod tree;

use std::fmt;
use std::sync::Arc;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

pub use boundary::{
    cylinder_mass, harmonic_measure_linear_solve, harmonic_measure_monte_carlo,
    harmonic_measure_oracle, BoundaryMeasure, MonteCarloEstimate,
};
pub use extension::{
    boundary_equivariance_test, conditional_extension, kernel_cocycle_check, poisson_extension,
    CocycleReport, ExtensionGroupoid, SrwOperator,
};
pub use lumped::{Geometry, LumpedTree, ProductKernel, TreeClass};
pub use strong::{
    commutation_check, strong_harmonic_residual, AverageKernel, DynKernel, StrongResidual,
};
pub use tree::{busemann, tree_kernel, two_end_kernel};

use crate::diagnostics::{binomial_two_start, zero_two_decay, DecayCurve, Thresholds, Verdict};
use crate::error::{Error, Result};
use crate::measure::SparseMeasure;
use crate::operator::MarkovKernel;
use crate::weight::Weight;

/// A positive function on kernel states with `Pφ = λφ` claimed.
pub struct HarmonicFunction<S, W> {
    rule: Arc<dyn Fn(&S) -> W + Send + Sync>,
    pub lambda: W,
    pub label: String,
}

impl<S, W: Clone> Clone for HarmonicFunction<S, W> {
    fn clone(&self) -> Self {
        HarmonicFunction {
            rule: Arc::clone(&self.rule),
            lambda: self.lambda.clone(),
            label: self.label.clone(),
        }
    }
}

impl<S, W: fmt::Debug> fmt::Debug for HarmonicFunction<S, W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HarmonicFunction({}, λ = {:?})", self.label, self.lambda)
    }
}

impl<S: 'static, W: Weight> HarmonicFunction<S, W> {
    pub fn new(
        label: impl Into<String>,
        lambda: W,
        rule: impl Fn(&S) -> W + Send + Sync + 'static,
    ) -> Self {
        HarmonicFunction {
            rule: Arc::new(rule),
            lambda,
            label: label.into(),
        }
    }

    pub fn constant() -> Self {
        Self::new("1", W::one(), |_| W::one())
    }

    pub fn eval(&self, s: &S) -> W {
        (self.rule)(s)
    }

    /// `cφ`, with the same eigenvalue.
    pub fn scaled(&self, c: W) -> Self {
        let rule = Arc::clone(&self.rule);
        Self::new(
            format!("{:?}·{}", c, self.label),
            self.lambda.clone(),
            move |s| c.clone() * rule(s),
        )
    }

    /// `Σ c_i φ_i` for functions sharing one eigenvalue.
    pub fn mixture(terms: Vec<(W, HarmonicFunction<S, W>)>) -> Self {
        let lambda = terms[0].1.lambda.clone();
        let label = terms
            .iter()
            .map(|(c, h)| format!("{c:?}·{}", h.label))
            .collect::<Vec<_>>()
            .join(" + ");
        Self::new(label, lambda, move |s| {
            terms
                .iter()
                .fold(W::zero(), |acc, (c, h)| acc + c.clone() * h.eval(s))
        })
    }
}

fn positive<S: fmt::Display + 'static, W: Weight>(
    phi: &HarmonicFunction<S, W>,
    s: &S,
) -> Result<W> {
    let v = phi.eval(s);
    if v.is_positive() {
        Ok(v)
    } else {
        Err(Error::NonPositiveValue {
            state: s.to_string(),
            value: format!("{v:?}"),
        })
    }
}

/// `sup_s |Pφ(s) − λφ(s)| / φ(s)` over the given states.
pub fn harmonic_residual<K: MarkovKernel>(
    kernel: &K,
    phi: &HarmonicFunction<K::State, K::W>,
    states: &[K::State],
) -> Result<K::W> {
    let mut worst = K::W::zero();
    for s in states {
        let here = positive(phi, s)?;
        let mut mean = K::W::zero();
        for (t, p) in kernel.row(s) {
            mean = mean + p * positive(phi, &t)?;
        }
        let r = (mean - phi.lambda.clone() * here.clone()).abs() / here;
        if r > worst {
            worst = r;
        }
    }
    Ok(worst)
}

/// Residual tolerance for certifying `φ` before transforming.
pub const DOOB_TOLERANCE: f64 = 1e-12;

/// `P^φ`, the kernel `p(s, t) φ(t) / (λ φ(s))`.
pub struct DoobKernel<K: MarkovKernel> {
    inner: K,
    phi: HarmonicFunction<K::State, K::W>,
}

impl<K: MarkovKernel + Clone> Clone for DoobKernel<K> {
    fn clone(&self) -> Self {
        DoobKernel {
            inner: self.inner.clone(),
            phi: self.phi.clone(),
        }
    }
}

impl<K: MarkovKernel> DoobKernel<K> {
    pub fn inner(&self) -> &K {
        &self.inner
    }

    pub fn function(&self) -> &HarmonicFunction<K::State, K::W> {
        &self.phi
    }
}

impl<K: MarkovKernel> MarkovKernel for DoobKernel<K> {
    type State = K::State;
    type W = K::W;

    fn row(&self, s: &K::State) -> Vec<(K::State, K::W)> {
        let denom = self.phi.lambda.clone() * self.phi.eval(s);
        self.inner
            .row(s)
            .into_iter()
            .map(|(t, p)| {
                let w = p * self.phi.eval(&t) / denom.clone();
                (t, w)
            })
            .collect()
    }

    fn truncation(&self) -> Option<K::W> {
        self.inner.truncation()
    }
}

/// Checks `φ` on `check` and returns the transformed kernel.
pub fn doob_transform<K: MarkovKernel>(
    kernel: K,
    phi: HarmonicFunction<K::State, K::W>,
    check: &[K::State],
) -> Result<DoobKernel<K>> {
    let residual = harmonic_residual(&kernel, &phi, check)?.to_f64();
    if residual >= DOOB_TOLERANCE {
        return Err(Error::ResidualTooLarge {
            residual,
            tolerance: DOOB_TOLERANCE,
        });
    }
    Ok(DoobKernel { inner: kernel, phi })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinimalityReport {
    pub function: String,
    pub cesaro: Vec<DecayCurve>,
    pub binomial: Vec<DecayCurve>,
    pub thresholds: Thresholds,
    pub verdict: Verdict,
}

impl MinimalityReport {
    pub fn worst_hi(&self) -> f64 {
        self.cesaro
            .iter()
            .chain(&self.binomial)
            .map(|c| c.last().hi)
            .fold(0.0, f64::max)
    }

    pub fn best_lo(&self) -> f64 {
        self.cesaro
            .iter()
            .chain(&self.binomial)
            .map(|c| c.min_lo(0))
            .fold(0.0, f64::max)
    }

    fn judge(
        function: String,
        cesaro: Vec<DecayCurve>,
        binomial: Vec<DecayCurve>,
        thresholds: Thresholds,
    ) -> Self {
        let mut report = MinimalityReport {
            function,
            cesaro,
            binomial,
            thresholds,
            verdict: Verdict::Inconclusive,
        };
        let horizon = report.cesaro.first().map_or(0, DecayCurve::horizon);
        report.verdict = if report.worst_hi() < thresholds.epsilon {
            Verdict::MinimalConsistent { horizon }
        } else if report.best_lo() > thresholds.floor {
            Verdict::NonMinimal {
                bound: report.best_lo(),
            }
        } else {
            Verdict::Inconclusive
        };
        report
    }
}

/// Two-start Cesaro and binomial curves of `P^φ` between `δ_base` and
/// `δ_g` for each `g` in `others`.
pub fn minimality_test<K: MarkovKernel>(
    kernel: K,
    phi: HarmonicFunction<K::State, K::W>,
    check: &[K::State],
    base: &K::State,
    others: &[K::State],
    horizon: usize,
    thresholds: Thresholds,
) -> Result<MinimalityReport> {
    let label = phi.label.clone();
    let doob = doob_transform(kernel, phi, check)?;
    let start = SparseMeasure::dirac(0u8, base.clone());
    let mut cesaro = Vec::new();
    let mut binomial = Vec::new();
    for g in others {
        let other = SparseMeasure::dirac(0u8, g.clone());
        cesaro.push(zero_two_decay(&doob, &other, &start, horizon)?);
        binomial.push(binomial_two_start(&doob, &other, &start, horizon)?);
    }
    Ok(MinimalityReport::judge(label, cesaro, binomial, thresholds))
}
