//! The simple random walk on a regular tree, lumped by symmetry.
//!
//! Fix a spine through the base vertex (a ray toward one end, or a line
//! between two ends) and optionally one marked neighbor of the base off the
//! spine. Tree automorphisms fixing the spine pointwise and the marked
//! vertex commute with the walk and preserve any function of `(j, d)`, the
//! spine position and distance to the spine. Their orbits are the classes
//! below, and measures started on a class stay constant on classes, so total
//! variation distances can be read off class masses.

use std::fmt;

use super::HarmonicFunction;
use crate::group::{BoundaryPoint, Pair, Word};
use crate::operator::MarkovKernel;
use crate::weight::Weight;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TreeClass {
    Spine(i64),
    Off { at: i64, depth: u32, marked: bool },
}

impl TreeClass {
    /// `(j, d)`: spine position of the nearest spine vertex and distance to it.
    pub fn coordinates(&self) -> (i64, i64) {
        match *self {
            TreeClass::Spine(j) => (j, 0),
            TreeClass::Off { at, depth, .. } => (at, depth as i64),
        }
    }
}

impl fmt::Display for TreeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeClass::Spine(j) => write!(f, "spine({j})"),
            TreeClass::Off {
                at,
                depth,
                marked: false,
            } => write!(f, "off({at},{depth})"),
            TreeClass::Off {
                at,
                depth,
                marked: true,
            } => write!(f, "marked({at},{depth})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Geometry {
    /// Spine positions `j ≥ 0`, from the base toward one end.
    Ray,
    /// Spine positions `j ∈ Z`, from the second end to the first.
    Line,
}

#[derive(Debug, Clone)]
pub struct LumpedTree<W> {
    q: usize,
    geometry: Geometry,
    ends: Vec<BoundaryPoint>,
    marked: Option<Word>,
    truncation: Option<W>,
}

impl<W: Weight> LumpedTree<W> {
    /// Spine toward `xi`, with `other` (a neighbor of the base) marked if it
    /// is off the spine.
    pub fn ray(q: usize, xi: &BoundaryPoint, other: Option<&Word>) -> Self {
        let marked = other.filter(|g| xi.confluence(g) == 0).cloned();
        LumpedTree {
            q,
            geometry: Geometry::Ray,
            ends: vec![xi.clone()],
            marked,
            truncation: None,
        }
    }

    /// Spine from `second` to `first`; the two ends must leave the base
    /// through different neighbors.
    pub fn line(
        q: usize,
        first: &BoundaryPoint,
        second: &BoundaryPoint,
        other: Option<&Word>,
    ) -> Self {
        assert_ne!(
            first.code_at(0),
            second.code_at(0),
            "ends must diverge at the base"
        );
        let marked = other
            .filter(|g| first.confluence(g) == 0 && second.confluence(g) == 0)
            .cloned();
        LumpedTree {
            q,
            geometry: Geometry::Line,
            ends: vec![first.clone(), second.clone()],
            marked,
            truncation: None,
        }
    }

    pub fn with_truncation(mut self, threshold: Option<W>) -> Self {
        self.truncation = threshold;
        self
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn is_marked(&self) -> bool {
        self.marked.is_some()
    }

    fn branches(&self, j: i64) -> i64 {
        match (self.geometry, j) {
            (Geometry::Ray, 0) => self.q as i64,
            _ => self.q as i64 - 1,
        }
    }

    /// The class of a vertex, given as a reduced word.
    pub fn classify(&self, x: &Word) -> TreeClass {
        let c1 = self.ends[0].confluence(x) as i64;
        let c2 = self.ends.get(1).map_or(0, |e| e.confluence(x) as i64);
        let len = x.len() as i64;
        let (at, depth) = if c1 > 0 {
            (c1, len - c1)
        } else if c2 > 0 {
            (-c2, len - c2)
        } else {
            (0, len)
        };
        if depth == 0 {
            return TreeClass::Spine(at);
        }
        let marked = at == 0
            && self
                .marked
                .as_ref()
                .is_some_and(|g| g.common_prefix_len(x) == 1);
        TreeClass::Off {
            at,
            depth: depth as u32,
            marked,
        }
    }

    /// Number of vertices in a class.
    pub fn class_size(&self, c: &TreeClass) -> W {
        match *c {
            TreeClass::Spine(_) => W::one(),
            TreeClass::Off { at, depth, marked } => {
                let branches = if marked {
                    1
                } else {
                    self.branches(at) - i64::from(at == 0 && self.marked.is_some())
                };
                W::from_ratio(branches, 1) * W::int_pow(self.q as i64, depth as i32 - 1)
            }
        }
    }

    /// `h_ξ` on classes, for the end the spine heads toward (`β = j − d`).
    pub fn end_kernel(&self) -> HarmonicFunction<TreeClass, W> {
        let q = self.q as i64;
        HarmonicFunction::new(
            format!("h[{}]", self.ends[0]),
            W::one(),
            move |c: &TreeClass| {
                let (j, d) = c.coordinates();
                W::int_pow(q, (j - d) as i32)
            },
        )
    }

    /// `(h_{ξ1} + h_{ξ2}) / 2` on classes of a line.
    pub fn two_end_kernel(&self) -> HarmonicFunction<TreeClass, W> {
        assert_eq!(self.geometry, Geometry::Line);
        let q = self.q as i64;
        let label = format!("(h[{}] + h[{}])/2", self.ends[0], self.ends[1]);
        HarmonicFunction::new(label, W::one(), move |c: &TreeClass| {
            let (j, d) = c.coordinates();
            (W::int_pow(q, (j - d) as i32) + W::int_pow(q, (-j - d) as i32)) / W::from_ratio(2, 1)
        })
    }
}

impl<W: Weight> MarkovKernel for LumpedTree<W> {
    type State = TreeClass;
    type W = W;

    fn row(&self, c: &TreeClass) -> Vec<(TreeClass, W)> {
        let deg = (self.q + 1) as i64;
        let w = |m: i64| W::from_ratio(m, deg);
        match *c {
            TreeClass::Spine(j) => {
                let mut out = vec![(TreeClass::Spine(j + 1), w(1))];
                if self.geometry == Geometry::Line || j > 0 {
                    out.push((TreeClass::Spine(j - 1), w(1)));
                }
                let marked_here = j == 0 && self.marked.is_some();
                let plain = self.branches(j) - i64::from(marked_here);
                if plain > 0 {
                    out.push((
                        TreeClass::Off {
                            at: j,
                            depth: 1,
                            marked: false,
                        },
                        w(plain),
                    ));
                }
                if marked_here {
                    out.push((
                        TreeClass::Off {
                            at: 0,
                            depth: 1,
                            marked: true,
                        },
                        w(1),
                    ));
                }
                out
            }
            TreeClass::Off { at, depth, marked } => {
                let parent = if depth == 1 {
                    TreeClass::Spine(at)
                } else {
                    TreeClass::Off {
                        at,
                        depth: depth - 1,
                        marked,
                    }
                };
                vec![
                    (parent, w(1)),
                    (
                        TreeClass::Off {
                            at,
                            depth: depth + 1,
                            marked,
                        },
                        w(self.q as i64),
                    ),
                ]
            }
        }
    }

    fn truncation(&self) -> Option<W> {
        self.truncation.clone()
    }
}

/// `(K_1 ⊗ I + I ⊗ K_2) / 2` on pairs of states.
#[derive(Debug, Clone)]
pub struct ProductKernel<A, B> {
    pub left: A,
    pub right: B,
}

impl<A, B> MarkovKernel for ProductKernel<A, B>
where
    A: MarkovKernel,
    B: MarkovKernel<W = A::W>,
{
    type State = Pair<A::State, B::State>;
    type W = A::W;

    fn row(&self, s: &Self::State) -> Vec<(Self::State, A::W)> {
        let half = A::W::from_ratio(1, 2);
        let mut out: Vec<_> = self
            .left
            .row(&s.0)
            .into_iter()
            .map(|(t, p)| (Pair(t, s.1.clone()), p * half.clone()))
            .collect();
        out.extend(
            self.right
                .row(&s.1)
                .into_iter()
                .map(|(t, p)| (Pair(s.0.clone(), t), p * half.clone())),
        );
        out
    }

    fn truncation(&self) -> Option<A::W> {
        self.left.truncation().or_else(|| self.right.truncation())
    }
}
