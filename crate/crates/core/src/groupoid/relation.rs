use std::collections::BTreeMap;
use std::fmt;

use super::{Groupoid, GroupoidKind};
use crate::error::{Error, Result};
use crate::text::{split_top_level, strip_parens};

/// The pair `(target, source)` of a relation groupoid; `(x,y)(y,z) = (x,z)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RelationMorphism {
    pub target: u64,
    pub source: u64,
}

impl fmt::Display for RelationMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({};{})", self.target, self.source)
    }
}

/// Groupoid of an equivalence relation on a finite set, given by its classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationGroupoid {
    classes: Vec<Vec<u64>>,
    class_of: BTreeMap<u64, usize>,
}

impl RelationGroupoid {
    pub fn new(partition: Vec<Vec<u64>>) -> Result<Self> {
        let mut class_of = BTreeMap::new();
        let mut classes = Vec::with_capacity(partition.len());
        for (i, mut class) in partition.into_iter().enumerate() {
            if class.is_empty() {
                return Err(Error::ConfigInvalid("empty class in partition".into()));
            }
            class.sort_unstable();
            for &x in &class {
                if class_of.insert(x, i).is_some() {
                    return Err(Error::ConfigInvalid(format!(
                        "object {x} appears in two classes"
                    )));
                }
            }
            classes.push(class);
        }
        Ok(RelationGroupoid { classes, class_of })
    }

    /// The full relation on `0..n`.
    pub fn full(n: u64) -> Self {
        Self::new(vec![(0..n).collect()]).expect("nonempty")
    }

    pub fn classes(&self) -> &[Vec<u64>] {
        &self.classes
    }

    pub fn class_of(&self, x: u64) -> &[u64] {
        &self.classes[self.class_of[&x]]
    }

    pub fn related(&self, x: u64, y: u64) -> bool {
        matches!((self.class_of.get(&x), self.class_of.get(&y)), (Some(a), Some(b)) if a == b)
    }

    pub fn morphism_count(&self) -> usize {
        self.classes.iter().map(|c| c.len() * c.len()).sum()
    }

    pub fn morphism(&self, target: u64, source: u64) -> Result<RelationMorphism> {
        if !self.related(target, source) {
            return Err(Error::Parse(format!(
                "{target} and {source} are not related"
            )));
        }
        Ok(RelationMorphism { target, source })
    }
}

impl Groupoid for RelationGroupoid {
    type Object = u64;
    type Morphism = RelationMorphism;

    fn kind(&self) -> GroupoidKind {
        GroupoidKind::Relation
    }

    fn source(&self, g: &RelationMorphism) -> u64 {
        g.source
    }

    fn target(&self, g: &RelationMorphism) -> u64 {
        g.target
    }

    fn unit(&self, x: &u64) -> RelationMorphism {
        RelationMorphism {
            target: *x,
            source: *x,
        }
    }

    fn compose_unchecked(
        &self,
        later: &RelationMorphism,
        earlier: &RelationMorphism,
    ) -> RelationMorphism {
        RelationMorphism {
            target: later.target,
            source: earlier.source,
        }
    }

    fn invert(&self, g: &RelationMorphism) -> RelationMorphism {
        RelationMorphism {
            target: g.source,
            source: g.target,
        }
    }

    fn generators_at(&self, x: &u64) -> Vec<RelationMorphism> {
        self.class_of(*x)
            .iter()
            .filter(|&&y| y != *x)
            .map(|&y| RelationMorphism {
                target: *x,
                source: y,
            })
            .collect()
    }

    fn objects(&self) -> Option<Vec<u64>> {
        Some(self.class_of.keys().copied().collect())
    }

    fn parse_object(&self, text: &str) -> Result<u64> {
        let x: u64 = text
            .trim()
            .parse()
            .map_err(|e| Error::Parse(format!("{text}: {e}")))?;
        if !self.class_of.contains_key(&x) {
            return Err(Error::Parse(format!("unknown object {x}")));
        }
        Ok(x)
    }

    fn parse_morphism(&self, text: &str) -> Result<RelationMorphism> {
        let inner = strip_parens(text).ok_or_else(|| Error::Parse(format!("bad pair {text:?}")))?;
        let parts = split_top_level(inner, ';');
        if parts.len() != 2 {
            return Err(Error::Parse(format!("bad pair {text:?}")));
        }
        self.morphism(self.parse_object(parts[0])?, self.parse_object(parts[1])?)
    }
}
