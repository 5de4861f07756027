//! Ground truth on finite fibers.

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::{Deserialize, Serialize};

use super::{Averaging, CurvePoint, DecayCurve, Verdict};
use crate::error::Result;
use crate::operator::{DenseChain, MarkovKernel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleVerdict {
    pub states: usize,
    pub recurrent_classes: usize,
    pub liouville: bool,
}

/// Counts the closed strongly connected classes of the transition digraph.
/// Bounded harmonic functions on a finite chain are determined by their
/// values on these classes, so the chain is Liouville iff there is one.
pub fn finite_fiber_oracle(chain: &DenseChain) -> OracleVerdict {
    let n = chain.size();
    let mut graph = DiGraph::<(), ()>::with_capacity(n, 0);
    let nodes: Vec<_> = (0..n).map(|_| graph.add_node(())).collect();
    for (i, row) in chain.rows().iter().enumerate() {
        for &(j, p) in row {
            if p > 0.0 {
                graph.add_edge(nodes[i], nodes[j], ());
            }
        }
    }
    let components = tarjan_scc(&graph);
    let mut class = vec![0usize; n];
    for (c, members) in components.iter().enumerate() {
        for v in members {
            class[v.index()] = c;
        }
    }
    let closed = components
        .iter()
        .enumerate()
        .filter(|(c, members)| {
            members.iter().all(|v| {
                chain.rows()[v.index()]
                    .iter()
                    .all(|&(j, p)| p == 0.0 || class[j] == *c)
            })
        })
        .count();
    OracleVerdict {
        states: n,
        recurrent_classes: closed,
        liouville: closed == 1,
    }
}

/// [`finite_fiber_oracle`] on the states reachable from `start`.
pub fn kernel_fiber_oracle<K: MarkovKernel>(kernel: &K, start: &K::State) -> Result<OracleVerdict> {
    let (chain, _) = DenseChain::from_kernel(kernel, start)?;
    Ok(finite_fiber_oracle(&chain))
}

/// Verdict thresholds for the dense path: `hi < decay` at the horizon for
/// Liouville, `lo > floor` at every `n` for non-Liouville.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroTwoThresholds {
    pub decay: f64,
    pub floor: f64,
}

impl Default for ZeroTwoThresholds {
    fn default() -> Self {
        ZeroTwoThresholds {
            decay: 1e-6,
            floor: 0.01,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenseZeroTwo {
    pub worst_pair: (usize, usize),
    pub curve: DecayCurve,
    pub verdict: Verdict,
}

/// Numeric 0–2 verdict on a finite chain. The pair of starting states
/// maximizing `‖(δ_i − δ_j) Σ_{k≤N} P^k‖` is located from the power sum;
/// its Cesaro curve is then computed step by step.
pub fn dense_zero_two(
    chain: &DenseChain,
    horizon: usize,
    thresholds: ZeroTwoThresholds,
) -> DenseZeroTwo {
    let n = chain.size();
    let s = chain.power_sum(horizon);
    let mut worst = (0, 0);
    let mut best = -1.0;
    for i in 0..n {
        for j in i + 1..n {
            let d: f64 = (0..n).map(|k| (s[(i, k)] - s[(j, k)]).abs()).sum();
            if d > best {
                best = d;
                worst = (i, j);
            }
        }
    }
    let (mut a, mut b) = (vec![0.0; n], vec![0.0; n]);
    a[worst.0] = 1.0;
    b[worst.1] = 1.0;
    let mut diff = vec![0.0f64; n];
    let mut points = Vec::with_capacity(horizon + 1);
    for step in 0..=horizon {
        for k in 0..n {
            diff[k] += a[k] - b[k];
        }
        let tv = (diff.iter().map(|d| d.abs()).sum::<f64>() / (step + 1) as f64).min(2.0);
        points.push(CurvePoint {
            n: step,
            lo: tv,
            hi: tv,
        });
        if step < horizon {
            a = chain.step_vec(&a);
            b = chain.step_vec(&b);
        }
    }
    let curve = DecayCurve {
        averaging: Averaging::Cesaro,
        start: format!("δ[{}] vs δ[{}]", worst.0, worst.1),
        points,
    };
    let verdict = if curve.last().hi < thresholds.decay {
        Verdict::LiouvilleConsistent { horizon }
    } else if curve.min_lo(0) > thresholds.floor {
        Verdict::NonLiouville {
            bound: curve.min_lo(0),
        }
    } else {
        Verdict::Inconclusive
    };
    DenseZeroTwo {
        worst_pair: worst,
        curve,
        verdict,
    }
}
