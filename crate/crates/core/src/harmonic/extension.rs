//! Conditioning the walk on `F_k` by its boundary point.
//!
//! Conditioning on the exit point `ξ` turns the simple random walk into the
//! Doob transform by `h_ξ`. Together these chains form one invariant
//! operator on the semi-direct product `F_k ⋉ ∂T`, whose fiber over `ξ` is
//! `{(ξ, g, g⁻¹ξ)}` and whose base measure over `ξ` is `s ↦ h_ξ(s)/2k`. The
//! cocycle identity `h_ξ(gs)/h_ξ(g) = h_{g⁻¹ξ}(s)` makes the two
//! descriptions agree.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{doob_transform, DoobKernel, LumpedTree, TreeClass};
use crate::diagnostics::{binomial_two_start, AmenabilityCertificate, Thresholds, Verdict};
use crate::error::Result;
use crate::group::{BoundaryAction, BoundaryPoint, FreeGroup, Group, Word};
use crate::groupoid::{fiber_ball, ActionGroupoid, GroupGroupoid, Singleton};
use crate::measure::{MeasureSystem, SparseMeasure};
use crate::models::simple_random_walk;
use crate::operator::{InvariantOperator, MarkovKernel};
use crate::weight::{Rational, Weight};

use super::tree::{busemann, tree_kernel};

pub type SrwOperator<W> = InvariantOperator<GroupGroupoid<FreeGroup>, W>;
pub type ExtensionGroupoid = ActionGroupoid<FreeGroup, BoundaryAction>;

fn branching(group: &FreeGroup) -> usize {
    2 * group.rank() - 1
}

/// `P^ξ`, the walk conditioned to exit at `ξ`, checked on the radius-2 ball.
pub fn conditional_extension<W: Weight>(
    op: &SrwOperator<W>,
    xi: &BoundaryPoint,
) -> Result<DoobKernel<SrwOperator<W>>> {
    let q = branching(op.groupoid().group());
    let check = fiber_ball(op.groupoid(), &Singleton, 2);
    doob_transform(op.clone(), tree_kernel(xi, q), &check)
}

/// The invariant operator on `F_k ⋉ ∂T` assembling every `P^ξ`.
pub fn poisson_extension<W: Weight>(
    rank: usize,
) -> Result<InvariantOperator<ExtensionGroupoid, W>> {
    let group = FreeGroup::new(rank);
    let q = branching(&group) as i64;
    let groupoid = ActionGroupoid::semidirect(group, BoundaryAction { rank });
    let g = groupoid.clone();
    let gens = group.generators();
    let system = MeasureSystem::new(move |xi: &BoundaryPoint| {
        SparseMeasure::from_atoms(
            xi.clone(),
            gens.iter().map(|s| {
                (
                    g.morphism_to(xi.clone(), s.clone()),
                    W::int_pow(q, busemann(xi, s) as i32) / W::from_ratio(q + 1, 1),
                )
            }),
        )
    });
    let sample = [BoundaryPoint::parse("|a")?, BoundaryPoint::parse("b|A")?];
    InvariantOperator::from_system(&groupoid, system, &sample)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CocycleReport {
    pub checked: usize,
    pub mismatches: Vec<String>,
}

impl CocycleReport {
    pub fn exact(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// `g · π^{h_ξ}_x = π^{h_{gξ}}_{gx}` for every `g`, `ξ`, `x` given.
pub fn kernel_cocycle_check<W: Weight>(
    op: &SrwOperator<W>,
    generators: &[Word],
    ends: &[BoundaryPoint],
    vertices: &[Word],
) -> Result<CocycleReport> {
    let group = op.groupoid().group();
    let mut report = CocycleReport {
        checked: 0,
        mismatches: Vec::new(),
    };
    for xi in ends {
        let here = conditional_extension(op, xi)?;
        for g in generators {
            let there = conditional_extension(op, &xi.translate(g))?;
            for x in vertices {
                let moved = SparseMeasure::from_atoms(
                    0u8,
                    here.row(x).into_iter().map(|(t, p)| (group.mul(g, &t), p)),
                );
                let direct = SparseMeasure::from_atoms(0u8, there.row(&group.mul(g, x)));
                report.checked += 1;
                if moved != direct {
                    report
                        .mismatches
                        .push(format!("g = {g}, ξ = {xi}, x = {x}"));
                }
            }
        }
    }
    Ok(report)
}

/// Binomial two-start curves `‖θ_n(g, gξ) − θ_n(e, gξ)‖`, `θ_n(x, η) = δ_x Q_η^n`
/// with `Q_η` the binomial average of `P^η`, for each generator and sampled
/// end, plus the exact cocycle check on `vertices`.
///
/// The curves run on the walk lumped around the ray toward `gξ`, which
/// preserves these distances.
pub fn boundary_equivariance_test(
    rank: usize,
    generators: &[Word],
    sample: &[BoundaryPoint],
    vertices: &[Word],
    horizon: usize,
    thresholds: Thresholds,
    truncation: Option<f64>,
) -> Result<(CocycleReport, AmenabilityCertificate)> {
    let group = FreeGroup::new(rank);
    let q = branching(&group);
    let op: SrwOperator<Rational> = simple_random_walk(group);
    let cocycle = kernel_cocycle_check(&op, generators, sample, vertices)?;

    let pairs: Vec<(Word, BoundaryPoint)> = generators
        .iter()
        .flat_map(|s| sample.iter().map(move |xi| (s.clone(), xi.clone())))
        .collect();
    let curves = pairs
        .par_iter()
        .map(|(s, xi)| {
            let eta = xi.translate(s);
            let lumped = LumpedTree::<f64>::ray(q, &eta, Some(s)).with_truncation(truncation);
            let check: Vec<TreeClass> = [lumped.classify(&Word::empty()), lumped.classify(s)]
                .into_iter()
                .collect();
            let phi = lumped.end_kernel();
            let doob = doob_transform(lumped.clone(), phi, &check)?;
            let mut curve = binomial_two_start(
                &doob,
                &SparseMeasure::dirac(0u8, lumped.classify(s)),
                &SparseMeasure::dirac(0u8, TreeClass::Spine(0)),
                horizon,
            )?;
            curve.start = format!("{s} toward {eta}");
            Ok(curve)
        })
        .collect::<Result<Vec<_>>>()?;
    let certificate = AmenabilityCertificate::from_curves(
        pairs.iter().map(|(s, xi)| format!("{s}@{xi}")).collect(),
        sample.iter().map(|xi| xi.to_string()).collect(),
        &curves,
        thresholds,
        0,
        |horizon| Verdict::AmenableConsistent { horizon },
        |bound| Verdict::NonLiouville { bound },
    );
    Ok((cocycle, certificate))
}
