//! Harmonic measure of the simple random walk on the `(q+1)`-regular tree.
//!
//! From a vertex at distance `r` the walk ever reaches a given neighbor one
//! step closer with probability `u = 1/q`, the root of
//! `u = 1/(q+1) + (q/(q+1)) u²` below one. First-passage decomposition gives
//! every cylinder mass in closed form; the linear solve and Monte Carlo
//! estimators below are independent checks.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::group::{Letter, Word};
use crate::weight::Weight;

/// Masses of the cylinders `C(w)` for words of one length, started at `start`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryMeasure<W> {
    pub q: usize,
    pub start: Word,
    pub cylinders: Vec<(Word, W)>,
}

impl<W: Weight> BoundaryMeasure<W> {
    pub fn total(&self) -> W {
        self.cylinders
            .iter()
            .fold(W::zero(), |s, (_, w)| s + w.clone())
    }

    pub fn mass(&self, w: &Word) -> W {
        self.cylinders
            .iter()
            .find(|(c, _)| c == w)
            .map_or_else(W::zero, |(_, m)| m.clone())
    }

    /// `Σ_C |ν(C) − ν'(C)|` over the shared cylinders.
    pub fn tv(&self, other: &Self) -> W {
        self.cylinders
            .iter()
            .zip(&other.cylinders)
            .fold(W::zero(), |s, ((_, a), (_, b))| {
                s + (a.clone() - b.clone()).abs()
            })
    }
}

fn first_letters(q: usize) -> Vec<Letter> {
    let rank = q.div_ceil(2);
    (0..rank)
        .flat_map(|g| [Letter::new(g, false), Letter::new(g, true)])
        .collect()
}

/// `ν_x(C(w))` for the walk started at `x`.
pub fn cylinder_mass<W: Weight>(q: usize, x: &Word, w: &Word) -> W {
    if w.is_empty() {
        return W::one();
    }
    let q = q as i64;
    let common = x.common_prefix_len(w);
    let exit = W::from_ratio(1, q + 1);
    if common == w.len() {
        // Inside the subtree below w, r levels down.
        let r = (x.len() - w.len()) as i32;
        W::one() - W::int_pow(q, -r) * exit
    } else {
        let d = (x.len() + w.len() - 2 * common) as i32;
        W::int_pow(q, -d) * W::from_ratio(q, 1) * exit
    }
}

/// Exact depth-`depth` cylinder masses from `start`.
pub fn harmonic_measure_oracle<W: Weight>(
    q: usize,
    start: &Word,
    depth: usize,
) -> BoundaryMeasure<W> {
    let mut words = vec![Word::empty()];
    for _ in 0..depth {
        words = words
            .iter()
            .flat_map(|w| {
                first_letters(q)
                    .into_iter()
                    .filter(|l| w.last_letter() != Some(l.inverted()))
                    .map(move |l| w.times_letter(l))
            })
            .collect();
    }
    let cylinders = words
        .into_iter()
        .map(|w| {
            let m = cylinder_mass(q, start, &w);
            (w, m)
        })
        .collect();
    BoundaryMeasure {
        q,
        start: start.clone(),
        cylinders,
    }
}

/// Depth-1 masses by solving the Dirichlet problem on the ball of radius
/// `radius`, with boundary value 1 on leaves in the target cylinder.
/// Unknowns are lumped by branch and depth.
pub fn harmonic_measure_linear_solve(
    q: usize,
    start: &Word,
    radius: usize,
) -> BoundaryMeasure<f64> {
    assert!(radius > start.len(), "start must lie inside the ball");
    let qf = q as f64;
    let (up, down) = (qf / (qf + 1.0), 1.0 / (qf + 1.0));
    // Unknowns: 0 is the base, 1..radius the target branch, then the others.
    let n = 2 * radius - 1;
    let inside = |d: usize| d;
    let outside = |d: usize| radius - 1 + d;
    let mut a = DMatrix::<f64>::identity(n, n);
    let mut b = DVector::<f64>::zeros(n);
    a[(0, inside(1))] -= down;
    a[(0, outside(1))] -= up;
    for (branch, boundary) in [(0, 1.0), (1, 0.0)] {
        let idx = |d: usize| if branch == 0 { inside(d) } else { outside(d) };
        for d in 1..radius {
            let row = idx(d);
            let parent = if d == 1 { 0 } else { idx(d - 1) };
            a[(row, parent)] -= down;
            if d + 1 == radius {
                b[row] += up * boundary;
            } else {
                a[(row, idx(d + 1))] -= up;
            }
        }
    }
    let f = a
        .lu()
        .solve(&b)
        .expect("the Dirichlet system is nonsingular");
    let cylinders = first_letters(q)
        .into_iter()
        .map(|l| {
            let w = Word::from_letters([l]);
            let value = match start.first_letter() {
                None => f[0],
                Some(s) if s == l => f[inside(start.len())],
                Some(_) => f[outside(start.len())],
            };
            (w, value)
        })
        .collect();
    BoundaryMeasure {
        q,
        start: start.clone(),
        cylinders,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloEstimate {
    pub paths: usize,
    pub seed: u64,
    pub cylinders: Vec<(String, f64, f64)>,
}

impl MonteCarloEstimate {
    /// `(mean, standard error)` for a depth-1 cylinder.
    pub fn get(&self, w: &Word) -> (f64, f64) {
        let key = w.to_string();
        self.cylinders
            .iter()
            .find(|(c, _, _)| *c == key)
            .map(|&(_, m, s)| (m, s))
            .expect("depth-1 cylinder")
    }
}

const MC_CHUNK: usize = 1 << 14;
/// Paths are stopped at this distance; returning from it has probability `q^-40`.
const MC_ESCAPE: usize = 40;

/// Depth-1 exit frequencies of `paths` walks from `start`. Chunk `c` draws from
/// stream `c` of a ChaCha generator seeded with `seed`, so the estimate does
/// not depend on the worker count.
pub fn harmonic_measure_monte_carlo(
    q: usize,
    start: &Word,
    paths: usize,
    seed: u64,
) -> MonteCarloEstimate {
    let letters = first_letters(q);
    let start_branch = start
        .first_letter()
        .map(|l| letters.iter().position(|&m| m == l).unwrap());
    let chunks = paths.div_ceil(MC_CHUNK);
    let counts: Vec<Vec<u64>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let mut counts = vec![0u64; letters.len()];
            for _ in 0..MC_CHUNK.min(paths - c * MC_CHUNK) {
                // The walk projected to (first letter, length) is Markov.
                let (mut branch, mut len) = (start_branch, start.len());
                while len < MC_ESCAPE {
                    if len == 0 {
                        branch = Some(rng.random_range(0..letters.len()));
                        len = 1;
                    } else if rng.random_range(0..=q) == 0 {
                        len -= 1;
                    } else {
                        len += 1;
                    }
                }
                counts[branch.unwrap()] += 1;
            }
            counts
        })
        .collect();
    let n = paths as f64;
    let cylinders = letters
        .iter()
        .enumerate()
        .map(|(i, &l)| {
            let hits: u64 = counts.iter().map(|c| c[i]).sum();
            let p = hits as f64 / n;
            (
                Word::from_letters([l]).to_string(),
                p,
                (p * (1.0 - p) / n).sqrt(),
            )
        })
        .collect();
    MonteCarloEstimate {
        paths,
        seed,
        cylinders,
    }
}
