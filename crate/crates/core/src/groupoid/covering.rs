use std::fmt;

use super::{FiniteAction, GroupAction, Groupoid, GroupoidKind};
use crate::error::{Error, Result};
use crate::group::Group;
use crate::text::{split_top_level, strip_parens};

/// The triple `(x, y, g)` with target `x`, source `y` and group label `g`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoveringMorphism<E> {
    pub target: usize,
    pub source: usize,
    pub label: E,
}

impl<E: fmt::Display> fmt::Display for CoveringMorphism<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({};{};{})", self.target, self.source, self.label)
    }
}

/// Which triples of `X × X × G` are morphisms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Support {
    /// `(x, y, g)` for `x ~ y` in the partition and any `g`.
    Partition(Vec<Vec<usize>>),
    /// `(x, g^{-1}x, g)`: the graph of an action of `G` on `X`.
    ActionGraph(FiniteAction),
}

/// Subgroupoids of `X × X × G` with composition `(x,y,g)(y,z,h) = (x,z,gh)`.
#[derive(Debug, Clone)]
pub struct CoveringGroupoid<G> {
    group: G,
    size: usize,
    support: Support,
    class_of: Vec<usize>,
}

impl<G: Group> CoveringGroupoid<G> {
    pub fn new(group: G, size: usize, support: Support) -> Result<Self> {
        let mut class_of = vec![usize::MAX; size];
        match &support {
            Support::Partition(classes) => {
                for (i, class) in classes.iter().enumerate() {
                    for &x in class {
                        if x >= size || class_of[x] != usize::MAX {
                            return Err(Error::ConfigInvalid(format!(
                                "point {x} is out of range or repeated"
                            )));
                        }
                        class_of[x] = i;
                    }
                }
                if class_of.contains(&usize::MAX) {
                    return Err(Error::ConfigInvalid(
                        "partition does not cover the base space".into(),
                    ));
                }
            }
            Support::ActionGraph(action) => {
                if action.size() != size {
                    return Err(Error::IllFormedAction(format!(
                        "action on {} points, base space has {size}",
                        action.size()
                    )));
                }
                class_of.iter_mut().for_each(|c| *c = 0);
            }
        }
        Ok(CoveringGroupoid {
            group,
            size,
            support,
            class_of,
        })
    }

    /// `X × X × G` itself.
    pub fn full(group: G, size: usize) -> Self {
        Self::new(group, size, Support::Partition(vec![(0..size).collect()])).expect("valid")
    }

    pub fn group(&self) -> &G {
        &self.group
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn support(&self) -> &Support {
        &self.support
    }

    pub fn contains(&self, m: &CoveringMorphism<G::Elem>) -> bool {
        if m.target >= self.size || m.source >= self.size {
            return false;
        }
        match &self.support {
            Support::Partition(_) => self.class_of[m.target] == self.class_of[m.source],
            Support::ActionGraph(action) => {
                action.act(&self.group, &self.group.inv(&m.label), &m.target) == m.source
            }
        }
    }

    pub fn morphism(
        &self,
        target: usize,
        source: usize,
        label: G::Elem,
    ) -> Result<CoveringMorphism<G::Elem>> {
        let m = CoveringMorphism {
            target,
            source,
            label,
        };
        if !self.contains(&m) {
            return Err(Error::Parse(format!(
                "{m} is not a morphism of this groupoid"
            )));
        }
        Ok(m)
    }
}

impl<G: Group> Groupoid for CoveringGroupoid<G> {
    type Object = usize;
    type Morphism = CoveringMorphism<G::Elem>;

    fn kind(&self) -> GroupoidKind {
        GroupoidKind::Covering
    }

    fn source(&self, g: &Self::Morphism) -> usize {
        g.source
    }

    fn target(&self, g: &Self::Morphism) -> usize {
        g.target
    }

    fn unit(&self, x: &usize) -> Self::Morphism {
        CoveringMorphism {
            target: *x,
            source: *x,
            label: self.group.identity(),
        }
    }

    fn compose_unchecked(
        &self,
        later: &Self::Morphism,
        earlier: &Self::Morphism,
    ) -> Self::Morphism {
        CoveringMorphism {
            target: later.target,
            source: earlier.source,
            label: self.group.mul(&later.label, &earlier.label),
        }
    }

    fn invert(&self, g: &Self::Morphism) -> Self::Morphism {
        CoveringMorphism {
            target: g.source,
            source: g.target,
            label: self.group.inv(&g.label),
        }
    }

    fn generators_at(&self, x: &usize) -> Vec<Self::Morphism> {
        match &self.support {
            Support::Partition(classes) => {
                let mut out: Vec<_> = classes[self.class_of[*x]]
                    .iter()
                    .filter(|&&y| y != *x)
                    .map(|&y| CoveringMorphism {
                        target: *x,
                        source: y,
                        label: self.group.identity(),
                    })
                    .collect();
                out.extend(
                    self.group
                        .generators()
                        .into_iter()
                        .map(|g| CoveringMorphism {
                            target: *x,
                            source: *x,
                            label: g,
                        }),
                );
                out
            }
            Support::ActionGraph(action) => self
                .group
                .generators()
                .into_iter()
                .map(|g| {
                    let source = action.act(&self.group, &self.group.inv(&g), x);
                    CoveringMorphism {
                        target: *x,
                        source,
                        label: g,
                    }
                })
                .collect(),
        }
    }

    fn objects(&self) -> Option<Vec<usize>> {
        Some((0..self.size).collect())
    }

    fn parse_object(&self, text: &str) -> Result<usize> {
        let x: usize = text
            .trim()
            .parse()
            .map_err(|e| Error::Parse(format!("{text}: {e}")))?;
        if x >= self.size {
            return Err(Error::Parse(format!("point {x} out of range")));
        }
        Ok(x)
    }

    fn parse_morphism(&self, text: &str) -> Result<Self::Morphism> {
        let inner =
            strip_parens(text).ok_or_else(|| Error::Parse(format!("bad triple {text:?}")))?;
        let parts = split_top_level(inner, ';');
        if parts.len() != 3 {
            return Err(Error::Parse(format!("bad triple {text:?}")));
        }
        self.morphism(
            self.parse_object(parts[0])?,
            self.parse_object(parts[1])?,
            self.group.parse_elem(parts[2])?,
        )
    }
}
