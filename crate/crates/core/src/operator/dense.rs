use std::collections::{HashMap, VecDeque};

use nalgebra::DMatrix;

use super::MarkovKernel;
use crate::error::{Error, Result};
use crate::weight::Weight;

/// Largest fiber the dense path will materialize.
pub const DENSE_STATE_LIMIT: usize = 10_000;

/// A finite chain in compressed-row form, for oracle cross-checks.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseChain {
    rows: Vec<Vec<(usize, f64)>>,
}

impl DenseChain {
    pub fn from_rows(rows: Vec<Vec<(usize, f64)>>) -> Result<Self> {
        let n = rows.len();
        if n > DENSE_STATE_LIMIT {
            return Err(Error::FiberTooLarge {
                size: n,
                max: DENSE_STATE_LIMIT,
            });
        }
        for (i, row) in rows.iter().enumerate() {
            let total: f64 = row.iter().map(|&(_, p)| p).sum();
            if row.iter().any(|&(j, p)| j >= n || p < 0.0) || (total - 1.0).abs() > 1e-9 {
                return Err(Error::MassDeficit {
                    object: i.to_string(),
                    mass: total.to_string(),
                });
            }
        }
        Ok(DenseChain { rows })
    }

    pub fn from_matrix(matrix: &[Vec<f64>]) -> Result<Self> {
        Self::from_rows(
            matrix
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|(_, &p)| p != 0.0)
                        .map(|(j, &p)| (j, p))
                        .collect()
                })
                .collect(),
        )
    }

    /// Enumerates the states reachable from `start` (breadth first) and
    /// records the kernel on them. Fails past [`DENSE_STATE_LIMIT`] states.
    pub fn from_kernel<K: MarkovKernel>(
        kernel: &K,
        start: &K::State,
    ) -> Result<(Self, Vec<K::State>)> {
        let mut index: HashMap<K::State, usize> = HashMap::from([(start.clone(), 0)]);
        let mut states = vec![start.clone()];
        let mut raw: Vec<Vec<(K::State, f64)>> = Vec::new();
        let mut queue = VecDeque::from([start.clone()]);
        while let Some(s) = queue.pop_front() {
            let row: Vec<(K::State, f64)> = kernel
                .row(&s)
                .into_iter()
                .map(|(t, p)| (t, p.to_f64()))
                .collect();
            for (t, _) in &row {
                if !index.contains_key(t) {
                    if states.len() == DENSE_STATE_LIMIT {
                        return Err(Error::FiberTooLarge {
                            size: DENSE_STATE_LIMIT + 1,
                            max: DENSE_STATE_LIMIT,
                        });
                    }
                    index.insert(t.clone(), states.len());
                    states.push(t.clone());
                    queue.push_back(t.clone());
                }
            }
            raw.push(row);
        }
        let rows = raw
            .into_iter()
            .map(|r| r.into_iter().map(|(t, p)| (index[&t], p)).collect())
            .collect();
        Ok((Self::from_rows(rows)?, states))
    }

    /// Records the kernel on a given state list, which must be closed under it.
    pub fn from_states<K: MarkovKernel>(kernel: &K, states: &[K::State]) -> Result<Self> {
        if states.len() > DENSE_STATE_LIMIT {
            return Err(Error::FiberTooLarge {
                size: states.len(),
                max: DENSE_STATE_LIMIT,
            });
        }
        let index: HashMap<&K::State, usize> =
            states.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let rows = states
            .iter()
            .map(|s| {
                kernel
                    .row(s)
                    .into_iter()
                    .map(|(t, p)| match index.get(&t) {
                        Some(&j) => Ok((j, p.to_f64())),
                        None => Err(Error::FiberViolation {
                            object: s.to_string(),
                            morphism: t.to_string(),
                        }),
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        Self::from_rows(rows)
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<(usize, f64)>] {
        &self.rows
    }

    /// `v ↦ vP` on a dense row vector.
    pub fn step_vec(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.size()];
        for (i, &vi) in v.iter().enumerate() {
            if vi != 0.0 {
                for &(j, p) in &self.rows[i] {
                    out[j] += vi * p;
                }
            }
        }
        out
    }

    pub fn matrix(&self) -> DMatrix<f64> {
        let n = self.size();
        let mut m = DMatrix::zeros(n, n);
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, p) in row {
                m[(i, j)] += p;
            }
        }
        m
    }

    /// `Σ_{k=0}^{n} P^k`, by binary doubling.
    pub fn power_sum(&self, n: usize) -> DMatrix<f64> {
        let p = self.matrix();
        let size = self.size();
        let id = DMatrix::<f64>::identity(size, size);
        // s = Σ_{k<m} P^k and pm = P^m, for m the bits of n+1 read so far.
        let mut s = DMatrix::<f64>::zeros(size, size);
        let mut pm = id.clone();
        let m = n + 1;
        for bit in (0..usize::BITS - m.leading_zeros()).rev() {
            s = &s + &pm * &s;
            pm = &pm * &pm;
            if (m >> bit) & 1 == 1 {
                s = &id + &p * &s;
                pm = &p * &pm;
            }
        }
        s
    }
}

impl MarkovKernel for DenseChain {
    type State = usize;
    type W = f64;

    fn row(&self, s: &usize) -> Vec<(usize, f64)> {
        self.rows[*s].clone()
    }
}
