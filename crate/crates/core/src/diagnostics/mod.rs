//! Total-variation diagnostics for the 0–2 law and approximate invariance.
//!
//! A chain is Liouville iff `‖(1/(n+1)) Σ_{k≤n} (θ1 − θ2)P^k‖ → 0` for all
//! pairs of starting measures on one fiber; otherwise the norm stays bounded
//! below. Curves record certified brackets for this norm at each `n`.

mod oracle;
mod radial;

use std::fmt::{self, Display, Write as _};

use num_traits::Zero;
use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

pub use oracle::{
    dense_zero_two, finite_fiber_oracle, kernel_fiber_oracle, DenseZeroTwo, OracleVerdict,
    ZeroTwoThresholds,
};
pub use radial::{free_group_radial_series, radial_sphere_masses};

use crate::error::{Error, Result};
use crate::groupoid::Groupoid;
use crate::measure::{Interval, SparseMeasure, TvInterval};
use crate::operator::{step, BinomialKernel, InvariantOperator, MarkovKernel};
use crate::weight::Weight;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Averaging {
    Cesaro,
    Binomial,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub n: usize,
    pub lo: f64,
    pub hi: f64,
}

/// `n ↦ [lo, hi]` for one pair of starting measures.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayCurve {
    pub averaging: Averaging,
    pub start: String,
    pub points: Vec<CurvePoint>,
}

impl DecayCurve {
    pub fn from_intervals<W: Weight>(
        averaging: Averaging,
        start: impl Into<String>,
        series: &[TvInterval<W>],
    ) -> Self {
        let points = series
            .iter()
            .enumerate()
            .map(|(n, t)| {
                let i = t.to_f64();
                CurvePoint {
                    n,
                    lo: i.lo,
                    hi: i.hi,
                }
            })
            .collect();
        DecayCurve {
            averaging,
            start: start.into(),
            points,
        }
    }

    pub fn horizon(&self) -> usize {
        self.points.last().map_or(0, |p| p.n)
    }

    pub fn last(&self) -> Interval {
        let p = self.points.last().expect("curves are nonempty");
        Interval { lo: p.lo, hi: p.hi }
    }

    pub fn at(&self, n: usize) -> Interval {
        let p = &self.points[n];
        Interval { lo: p.lo, hi: p.hi }
    }

    /// Smallest lower endpoint over `n ≥ from`.
    pub fn min_lo(&self, from: usize) -> f64 {
        self.points
            .iter()
            .filter(|p| p.n >= from)
            .map(|p| p.lo)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn hi_nonincreasing(&self) -> bool {
        self.points.windows(2).all(|w| w[1].hi <= w[0].hi)
    }

    /// Pointwise maximum of both endpoints, for curves of equal length.
    pub fn sup(curves: &[DecayCurve], start: impl Into<String>) -> DecayCurve {
        let first = &curves[0];
        let points = (0..first.points.len())
            .map(|i| CurvePoint {
                n: first.points[i].n,
                lo: curves.iter().map(|c| c.points[i].lo).fold(0.0, f64::max),
                hi: curves.iter().map(|c| c.points[i].hi).fold(0.0, f64::max),
            })
            .collect();
        DecayCurve {
            averaging: first.averaging,
            start: start.into(),
            points,
        }
    }

    /// `n,tv_lo,tv_hi` with one row per point.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,tv_lo,tv_hi\n");
        for p in &self.points {
            writeln!(out, "{},{:?},{:?}", p.n, p.lo, p.hi).unwrap();
        }
        out
    }

    pub fn from_csv(averaging: Averaging, start: &str, text: &str) -> Result<Self> {
        let mut lines = text.lines();
        if lines.next().map(str::trim) != Some("n,tv_lo,tv_hi") {
            return Err(Error::Parse(
                "curve CSV must start with n,tv_lo,tv_hi".into(),
            ));
        }
        let mut points = Vec::new();
        for line in lines.filter(|l| !l.trim().is_empty()) {
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 3 {
                return Err(Error::Parse(format!("bad curve row {line:?}")));
            }
            let bad = |e: &dyn Display| Error::Parse(format!("{line}: {e}"));
            points.push(CurvePoint {
                n: f[0].trim().parse().map_err(|e| bad(&e))?,
                lo: f[1].trim().parse().map_err(|e| bad(&e))?,
                hi: f[2].trim().parse().map_err(|e| bad(&e))?,
            });
        }
        Ok(DecayCurve {
            averaging,
            start: start.to_string(),
            points,
        })
    }
}

/// Verdict thresholds: `hi < epsilon` at the horizon, or `lo > floor` throughout.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub epsilon: f64,
    pub floor: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            epsilon: 0.35,
            floor: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Verdict {
    LiouvilleConsistent { horizon: usize },
    AmenableConsistent { horizon: usize },
    NonLiouville { bound: f64 },
    MinimalConsistent { horizon: usize },
    NonMinimal { bound: f64 },
    Inconclusive,
}

impl Verdict {
    /// Short tag, independent of the numbers attached.
    pub fn tag(&self) -> &'static str {
        match self {
            Verdict::LiouvilleConsistent { .. } => "liouville-consistent",
            Verdict::AmenableConsistent { .. } => "amenable-consistent",
            Verdict::NonLiouville { .. } => "non-liouville",
            Verdict::MinimalConsistent { .. } => "minimal-consistent",
            Verdict::NonMinimal { .. } => "non-minimal",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

impl Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::LiouvilleConsistent { horizon } => {
                write!(f, "liouville-consistent at horizon {horizon}")
            }
            Verdict::AmenableConsistent { horizon } => {
                write!(f, "amenable-consistent at horizon {horizon}")
            }
            Verdict::NonLiouville { bound } => write!(f, "non-liouville: lower bound {bound}"),
            Verdict::MinimalConsistent { horizon } => {
                write!(f, "minimal-consistent at horizon {horizon}")
            }
            Verdict::NonMinimal { bound } => write!(f, "non-minimal: lower bound {bound}"),
            Verdict::Inconclusive => write!(f, "inconclusive"),
        }
    }
}

/// Reads a curve against thresholds: `Some(true)` if it decays below
/// `epsilon` by its horizon, `Some(false)` if `lo > floor` at every `n`.
pub fn decay_reading(curve: &DecayCurve, t: Thresholds) -> Option<bool> {
    if curve.last().hi < t.epsilon {
        Some(true)
    } else if curve.min_lo(0) > t.floor {
        Some(false)
    } else {
        None
    }
}

pub fn liouville_verdict(curve: &DecayCurve, t: Thresholds) -> Verdict {
    match decay_reading(curve, t) {
        Some(true) => Verdict::LiouvilleConsistent {
            horizon: curve.horizon(),
        },
        Some(false) => Verdict::NonLiouville {
            bound: curve.min_lo(0),
        },
        None => Verdict::Inconclusive,
    }
}

fn add_into<K: Clone + Eq + std::hash::Hash, W: Weight>(
    acc: &mut FxHashMap<K, W>,
    atoms: &[(K, W)],
    sign: bool,
) {
    for (k, w) in atoms {
        let w = if sign { w.clone() } else { -w.clone() };
        match acc.get_mut(k) {
            Some(v) => *v = v.clone() + w,
            None => {
                acc.insert(k.clone(), w);
            }
        }
    }
}

fn l1<K: Ord + Clone, W: Weight>(acc: &FxHashMap<K, W>) -> W {
    // Key order keeps float sums independent of hashing.
    let mut vals: Vec<(&K, &W)> = acc.iter().collect();
    vals.sort_unstable_by(|a, b| a.0.cmp(b.0));
    vals.into_iter().fold(W::zero(), |s, (_, w)| s + w.abs())
}

fn check_pair<K, W, T>(a: &SparseMeasure<K, W, T>, b: &SparseMeasure<K, W, T>) -> Result<()>
where
    K: Clone + Eq + std::hash::Hash + Ord,
    W: Weight,
    T: Clone + PartialEq + Display,
{
    if a.fiber() != b.fiber() {
        return Err(Error::FiberMismatch {
            left: a.fiber().to_string(),
            right: b.fiber().to_string(),
        });
    }
    Ok(())
}

/// Exact Cesaro brackets `‖(1/(n+1)) Σ_{k≤n} (θ1 − θ2)P^k‖` for `n = 0..=horizon`.
pub fn cesaro_tv_series<K, T>(
    kernel: &K,
    first: &SparseMeasure<K::State, K::W, T>,
    second: &SparseMeasure<K::State, K::W, T>,
    horizon: usize,
) -> Result<Vec<TvInterval<K::W>>>
where
    K: MarkovKernel,
    T: Clone + PartialEq + Display + Send + Sync,
{
    check_pair(first, second)?;
    let mut diff: FxHashMap<K::State, K::W> = FxHashMap::default();
    let mut leak = K::W::zero();
    let (mut a, mut b) = (first.clone(), second.clone());
    let mut out = Vec::with_capacity(horizon + 1);
    for n in 0..=horizon {
        add_into(&mut diff, a.atoms(), true);
        add_into(&mut diff, b.atoms(), false);
        diff.retain(|_, w| !w.is_zero());
        leak = leak + a.leaked().clone() + b.leaked().clone();
        let c = K::W::from_usize(n + 1);
        out.push(TvInterval::from_raw(
            l1(&diff) / c.clone(),
            leak.clone() / c,
        ));
        if n < horizon {
            a = step(kernel, &a);
            b = step(kernel, &b);
        }
    }
    Ok(out)
}

/// The 0–2 curve for the Cesaro averages of two starting measures.
pub fn zero_two_decay<K, T>(
    kernel: &K,
    first: &SparseMeasure<K::State, K::W, T>,
    second: &SparseMeasure<K::State, K::W, T>,
    horizon: usize,
) -> Result<DecayCurve>
where
    K: MarkovKernel,
    T: Clone + PartialEq + Display + Send + Sync,
{
    let series = cesaro_tv_series(kernel, first, second, horizon)?;
    let label = format!("{} vs {}", describe(first), describe(second));
    Ok(DecayCurve::from_intervals(
        Averaging::Cesaro,
        label,
        &series,
    ))
}

fn describe<K, W, T>(m: &SparseMeasure<K, W, T>) -> String
where
    K: Display + Clone + Eq + std::hash::Hash + Ord,
    W: Weight,
    T: Clone + PartialEq + Display,
{
    match m.atoms() {
        [(k, _)] if m.leaked().is_zero() => format!("δ[{k}]"),
        atoms => format!("measure with {} atoms", atoms.len()),
    }
}

/// Brackets for `‖(θ1 − θ2)Q^n‖` with `Q = (P + P²)/2`, no further averaging.
pub fn binomial_tv_series<K, T>(
    kernel: &K,
    first: &SparseMeasure<K::State, K::W, T>,
    second: &SparseMeasure<K::State, K::W, T>,
    horizon: usize,
) -> Result<Vec<TvInterval<K::W>>>
where
    K: MarkovKernel,
    T: Clone + PartialEq + Display + Send + Sync,
{
    check_pair(first, second)?;
    let q = BinomialKernel(kernel);
    let (mut a, mut b) = (first.clone(), second.clone());
    let mut out = Vec::with_capacity(horizon + 1);
    for n in 0..=horizon {
        out.push(a.tv_distance(&b)?);
        if n < horizon {
            a = step(&q, &a);
            b = step(&q, &b);
        }
    }
    Ok(out)
}

/// Binomial two-start curve. `Q` never increases the true norm, so each
/// upper endpoint is also capped by the previous one.
pub fn binomial_two_start<K, T>(
    kernel: &K,
    first: &SparseMeasure<K::State, K::W, T>,
    second: &SparseMeasure<K::State, K::W, T>,
    horizon: usize,
) -> Result<DecayCurve>
where
    K: MarkovKernel,
    T: Clone + PartialEq + Display + Send + Sync,
{
    let series = binomial_tv_series(kernel, first, second, horizon)?;
    let label = format!("{} vs {}", describe(first), describe(second));
    let mut curve = DecayCurve::from_intervals(Averaging::Binomial, label, &series);
    tighten_monotone(&mut curve);
    Ok(curve)
}

pub(crate) fn tighten_monotone(curve: &mut DecayCurve) {
    for i in 1..curve.points.len() {
        let prev = curve.points[i - 1].hi;
        let p = &mut curve.points[i];
        p.hi = p.hi.min(prev);
        p.lo = p.lo.min(p.hi);
    }
}

/// `‖(δ_γ − δ_{ε_{t(γ)}}) Q^n‖` on the fiber `G^{t(γ)}`.
pub fn binomial_decay<G: Groupoid, W: Weight>(
    op: &InvariantOperator<G, W>,
    gamma: &G::Morphism,
    horizon: usize,
) -> Result<DecayCurve> {
    let x = op.groupoid().target(gamma);
    let first = SparseMeasure::dirac(x.clone(), gamma.clone());
    binomial_two_start(op, &first, &op.start(&x), horizon)
}

/// Record of an approximate-invariance run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmenabilityCertificate {
    pub generators: Vec<String>,
    pub basepoints: Vec<String>,
    pub horizon: usize,
    pub thresholds: Thresholds,
    /// `sup_{γ} ‖γθ_N^{s(γ)} − θ_N^{t(γ)}‖` over the generator/basepoint sample.
    pub residual: Interval,
    pub residual_curve: DecayCurve,
    pub verdict: Verdict,
    pub verdict_text: String,
    pub seed: u64,
}

impl AmenabilityCertificate {
    pub fn from_curves(
        generators: Vec<String>,
        basepoints: Vec<String>,
        curves: &[DecayCurve],
        thresholds: Thresholds,
        seed: u64,
        consistent: impl Fn(usize) -> Verdict,
        failing: impl Fn(f64) -> Verdict,
    ) -> Self {
        let sup = DecayCurve::sup(curves, "sup over sample");
        let horizon = sup.horizon();
        let verdict = if sup.last().hi < thresholds.epsilon {
            consistent(horizon)
        } else if sup.min_lo(0) > thresholds.floor {
            failing(sup.min_lo(0))
        } else {
            Verdict::Inconclusive
        };
        AmenabilityCertificate {
            generators,
            basepoints,
            horizon,
            thresholds,
            residual: sup.last(),
            residual_curve: sup,
            verdict_text: verdict.to_string(),
            verdict,
            seed,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificates serialize")
    }
}

/// Cesaro systems `θ_n^x = (1/(n+1)) Σ δ_{ε_x} P^k` and the residual
/// `‖γθ_n^{s(γ)} − θ_n^{t(γ)}‖` for each generator `γ` at each basepoint.
///
/// By invariance `γθ_n^{s(γ)}` is the Cesaro average started at `δ_γ`, so
/// each residual is a two-start curve inside `G^{t(γ)}`.
pub fn approx_invariance_certificate<G: Groupoid, W: Weight>(
    op: &InvariantOperator<G, W>,
    generators: Option<&[G::Morphism]>,
    basepoints: &[G::Object],
    horizon: usize,
    thresholds: Thresholds,
    seed: u64,
) -> Result<AmenabilityCertificate> {
    let g = op.groupoid();
    let pairs: Vec<G::Morphism> = match generators {
        Some(gens) => gens
            .iter()
            .filter(|m| basepoints.contains(&g.target(m)))
            .cloned()
            .collect(),
        None => basepoints.iter().flat_map(|x| g.generators_at(x)).collect(),
    };
    if pairs.is_empty() {
        return Err(Error::ConfigInvalid(
            "no generator has its target among the basepoints".into(),
        ));
    }
    let curves: Vec<DecayCurve> = pairs
        .par_iter()
        .map(|gamma| {
            let x = g.target(gamma);
            let first = SparseMeasure::dirac(x.clone(), gamma.clone());
            let series = cesaro_tv_series(op, &first, &op.start(&x), horizon)?;
            Ok(DecayCurve::from_intervals(
                Averaging::Cesaro,
                gamma.to_string(),
                &series,
            ))
        })
        .collect::<Result<_>>()?;
    Ok(AmenabilityCertificate::from_curves(
        pairs.iter().map(|m| m.to_string()).collect(),
        basepoints.iter().map(|x| x.to_string()).collect(),
        &curves,
        thresholds,
        seed,
        |horizon| Verdict::AmenableConsistent { horizon },
        |bound| Verdict::NonLiouville { bound },
    ))
}

#[cfg(test)]
mod tests;
