//! Exact two-start curves for the simple random walk on `F_k`, through the
//! radial chain `|X_n|`.
//!
//! The law of `X_m` from `e` is uniform on each sphere, so it is the vector
//! `r_m(i)` of sphere masses divided by `|S_i| = 2k(2k−1)^{i−1}`. Writing
//! `f(i)` for the resulting per-vertex weight of `Σ c_m P^m`, the walk from
//! `a` is `x ↦ f(|a⁻¹x|)`; `|a⁻¹x|` is `|x| − 1` on the `(2k−1)^{i−1}` words
//! of length `i` starting with `a` and `|x| + 1` on the other `(2k−1)^i`.

use super::Averaging;
use crate::measure::TvInterval;
use crate::weight::Weight;

/// `r_m(i) = P(|X_m| = i)` for `m = 0..=steps`.
pub fn radial_sphere_masses<W: Weight>(rank: usize, steps: usize) -> Vec<Vec<W>> {
    let d = 2 * rank as i64;
    let (up, down) = (W::from_ratio(d - 1, d), W::from_ratio(1, d));
    let mut out = vec![vec![W::one()]];
    for m in 0..steps {
        let prev = &out[m];
        let mut next = vec![W::zero(); prev.len() + 1];
        for (i, w) in prev.iter().enumerate() {
            if w.is_zero() {
                continue;
            }
            if i == 0 {
                next[1] = next[1].clone() + w.clone();
            } else {
                next[i + 1] = next[i + 1].clone() + w.clone() * up.clone();
                next[i - 1] = next[i - 1].clone() + w.clone() * down.clone();
            }
        }
        out.push(next);
    }
    out
}

fn two_start_tv<W: Weight>(rank: usize, radial: &[W]) -> W {
    let q = 2 * rank as i64 - 1;
    let len = radial.len();
    // Per-vertex weights, zero past the support.
    let f: Vec<W> = (0..len + 2)
        .map(|i| match i {
            0 => radial[0].clone(),
            i if i < len => {
                radial[i].clone()
                    / (W::from_ratio(2 * rank as i64, 1) * W::int_pow(q, i as i32 - 1))
            }
            _ => W::zero(),
        })
        .collect();
    let mut tv = (f[0].clone() - f[1].clone()).abs();
    for i in 1..=len {
        tv = tv + W::int_pow(q, i as i32 - 1) * (f[i].clone() - f[i - 1].clone()).abs();
        tv = tv + W::int_pow(q, i as i32) * (f[i].clone() - f[i + 1].clone()).abs();
    }
    tv
}

/// `‖(δ_a − δ_e) A_n‖` for `n = 0..=horizon`, where `A_n` is the Cesaro
/// average, `Q^n` for the binomial average, or `P^n`.
pub fn free_group_radial_series<W: Weight>(
    rank: usize,
    horizon: usize,
    averaging: Averaging,
) -> Vec<TvInterval<W>> {
    let steps = match averaging {
        Averaging::Binomial => 2 * horizon,
        _ => horizon,
    };
    let r = radial_sphere_masses::<W>(rank, steps);
    let padded = |m: usize, len: usize| {
        let mut v = r[m].clone();
        v.resize(len, W::zero());
        v
    };
    let mut out = Vec::with_capacity(horizon + 1);
    let mut running = vec![W::zero(); 1];
    for n in 0..=horizon {
        let mix: Vec<W> = match averaging {
            Averaging::Cesaro => {
                running.resize(n + 1, W::zero());
                for (acc, w) in running.iter_mut().zip(&r[n]) {
                    *acc = acc.clone() + w.clone();
                }
                let c = W::from_usize(n + 1);
                running.iter().map(|w| w.clone() / c.clone()).collect()
            }
            Averaging::Binomial => {
                let mut mix = vec![W::zero(); 2 * n + 1];
                // 2^{-n} C(n, j), built up in j.
                let mut c = W::int_pow(2, -(n as i32));
                for j in 0..=n {
                    if j > 0 {
                        c = c * W::from_ratio((n + 1 - j) as i64, j as i64);
                    }
                    for (acc, w) in mix.iter_mut().zip(padded(n + j, 2 * n + 1)) {
                        *acc = acc.clone() + c.clone() * w;
                    }
                }
                mix
            }
            Averaging::None => r[n].clone(),
        };
        out.push(TvInterval::from_raw(two_start_tv(rank, &mix), W::zero()));
    }
    out
}
