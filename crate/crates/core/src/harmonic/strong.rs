//! Functions harmonic for every member of a commuting family.

use serde::{Deserialize, Serialize};

use super::{harmonic_residual, HarmonicFunction};
use crate::error::{Error, Result};
use crate::measure::SparseMeasure;
use crate::operator::{step, MarkovKernel};
use crate::weight::Weight;

pub type DynKernel<'a, S, W> = &'a dyn MarkovKernel<State = S, W = W>;

/// `(P_1 + ⋯ + P_d) / d`.
pub struct AverageKernel<'a, S, W> {
    pub parts: Vec<DynKernel<'a, S, W>>,
}

impl<S, W> MarkovKernel for AverageKernel<'_, S, W>
where
    S: Clone
        + Eq
        + std::hash::Hash
        + Ord
        + std::fmt::Debug
        + std::fmt::Display
        + Send
        + Sync
        + 'static,
    W: Weight,
{
    type State = S;
    type W = W;

    fn row(&self, s: &S) -> Vec<(S, W)> {
        let c = W::from_ratio(1, self.parts.len() as i64);
        self.parts
            .iter()
            .flat_map(|k| k.row(s))
            .map(|(t, p)| (t, p * c.clone()))
            .collect()
    }

    fn truncation(&self) -> Option<W> {
        self.parts.iter().find_map(|k| k.truncation())
    }
}

/// Checks `δ_s AB = δ_s BA` for each `s`; exact for rationals, to 1e-12 otherwise.
pub fn commutation_check<S, W>(family: &[DynKernel<'_, S, W>], states: &[S]) -> Result<()>
where
    S: Clone
        + Eq
        + std::hash::Hash
        + Ord
        + std::fmt::Debug
        + std::fmt::Display
        + Send
        + Sync
        + 'static,
    W: Weight,
{
    let tolerance = if W::EXACT {
        W::zero()
    } else {
        W::from_ratio(1, 1_000_000_000_000)
    };
    for (i, a) in family.iter().enumerate() {
        for (j, b) in family.iter().enumerate().skip(i + 1) {
            for s in states {
                let d = SparseMeasure::dirac(0u8, s.clone());
                let ab = step(b, &step(a, &d));
                let ba = step(a, &step(b, &d));
                if ab.tv_distance(&ba)?.raw > tolerance {
                    return Err(Error::NonCommutingFamily {
                        left: i,
                        right: j,
                        state: s.to_string(),
                    });
                }
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrongResidual {
    pub per_operator: Vec<f64>,
    pub max: f64,
    pub average: f64,
}

/// Residual of `φ` for each `P_i` and for their average, after checking
/// that the family commutes on `states`.
pub fn strong_harmonic_residual<S, W>(
    family: &[DynKernel<'_, S, W>],
    phi: &HarmonicFunction<S, W>,
    states: &[S],
) -> Result<StrongResidual>
where
    S: Clone
        + Eq
        + std::hash::Hash
        + Ord
        + std::fmt::Debug
        + std::fmt::Display
        + Send
        + Sync
        + 'static,
    W: Weight,
{
    commutation_check(family, states)?;
    let per_operator = family
        .iter()
        .map(|k| harmonic_residual(k, phi, states).map(|r| r.to_f64()))
        .collect::<Result<Vec<_>>>()?;
    let average = harmonic_residual(
        &AverageKernel {
            parts: family.to_vec(),
        },
        phi,
        states,
    )?
    .to_f64();
    let max = per_operator.iter().copied().fold(0.0, f64::max);
    Ok(StrongResidual {
        per_operator,
        max,
        average,
    })
}
