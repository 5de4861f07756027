//! Minimal harmonic functions of the simple random walk on a regular tree.

use super::HarmonicFunction;
use crate::group::{BoundaryPoint, Word};
use crate::weight::Weight;

/// Horofunction `β_ξ(x) = 2·c − |x|`, `c` the confluence of `x` with `ξ`,
/// normalized by `β_ξ(e) = 0` and increasing toward `ξ`.
pub fn busemann(xi: &BoundaryPoint, x: &Word) -> i64 {
    2 * xi.confluence(x) as i64 - x.len() as i64
}

/// `h_ξ(x) = q^{β_ξ(x)}`, harmonic for the simple random walk on the
/// `(q+1)`-regular tree.
pub fn tree_kernel<W: Weight>(xi: &BoundaryPoint, q: usize) -> HarmonicFunction<Word, W> {
    let end = xi.clone();
    HarmonicFunction::new(format!("h[{xi}]"), W::one(), move |x: &Word| {
        W::int_pow(q as i64, busemann(&end, x) as i32)
    })
}

/// `(h_{ξ1} + h_{ξ2}) / 2`, harmonic but not minimal.
pub fn two_end_kernel<W: Weight>(
    first: &BoundaryPoint,
    second: &BoundaryPoint,
    q: usize,
) -> HarmonicFunction<Word, W> {
    let half = W::from_ratio(1, 2);
    HarmonicFunction::mixture(vec![
        (half.clone(), tree_kernel(first, q)),
        (half, tree_kernel(second, q)),
    ])
}
