use std::collections::HashMap;
use std::fmt::{self, Debug, Display};
use std::hash::Hash;

use super::{Groupoid, GroupoidKind};
use crate::error::{Error, Result};
use crate::group::{words_up_to, Group, Perm};
use crate::text::{split_top_level, strip_parens};

/// Default word length up to which generator images are checked against the group's relations.
pub const DEFAULT_ACTION_CHECK_DEPTH: usize = 4;

/// A left action of `G` on a set of points.
pub trait GroupAction<G: Group>: Clone + Debug + Send + Sync + 'static {
    type Point: Clone + Eq + Hash + Ord + Debug + Display + Send + Sync + 'static;

    fn act(&self, group: &G, g: &G::Elem, x: &Self::Point) -> Self::Point;

    fn points(&self) -> Option<Vec<Self::Point>>;

    fn parse_point(&self, text: &str) -> Result<Self::Point>;
}

/// An action on `0..size` given by one permutation per abstract generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAction {
    size: usize,
    images: Vec<Perm>,
    inverse_images: Vec<Perm>,
}

impl FiniteAction {
    pub fn new(size: usize, images: Vec<Perm>) -> Result<Self> {
        if images.iter().any(|p| p.degree() != size) {
            return Err(Error::IllFormedAction(format!(
                "generator images must permute {size} points"
            )));
        }
        let inverse_images = images.iter().map(Perm::inverse).collect();
        Ok(FiniteAction {
            size,
            images,
            inverse_images,
        })
    }

    pub fn from_tables(size: usize, tables: &[Vec<usize>]) -> Result<Self> {
        let images = tables
            .iter()
            .map(|t| Perm::from_images(t))
            .collect::<Result<Vec<_>>>()?;
        Self::new(size, images)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn images(&self) -> &[Perm] {
        &self.images
    }

    fn apply_word<G: Group>(&self, group: &G, g: &G::Elem, x: usize) -> usize {
        group.word_of(g).iter().rev().fold(x, |y, l| {
            let table = if l.inverse {
                &self.inverse_images
            } else {
                &self.images
            };
            table[l.generator].apply(y)
        })
    }
}

impl<G: Group> GroupAction<G> for FiniteAction {
    type Point = usize;

    fn act(&self, group: &G, g: &G::Elem, x: &usize) -> usize {
        self.apply_word(group, g, *x)
    }

    fn points(&self) -> Option<Vec<usize>> {
        Some((0..self.size).collect())
    }

    fn parse_point(&self, text: &str) -> Result<usize> {
        let x: usize = text
            .trim()
            .parse()
            .map_err(|e| Error::Parse(format!("{text}: {e}")))?;
        if x >= self.size {
            return Err(Error::Parse(format!("point {x} out of range")));
        }
        Ok(x)
    }
}

/// Checks that generator images define a genuine action: any two words of
/// length at most `depth` that are equal in the group act identically.
pub fn check_action<G: Group>(group: &G, action: &FiniteAction, depth: usize) -> Result<()> {
    if action.images.len() != group.rank() {
        return Err(Error::IllFormedAction(format!(
            "{} generator images given for a group of rank {}",
            action.images.len(),
            group.rank()
        )));
    }
    let mut seen: HashMap<G::Elem, (Vec<usize>, String)> = HashMap::new();
    for word in words_up_to(group.rank(), depth) {
        let g = group.eval_word(&word);
        let image: Vec<usize> = (0..action.size)
            .map(|x| {
                word.iter().rev().fold(x, |y, l| {
                    let table = if l.inverse {
                        &action.inverse_images
                    } else {
                        &action.images
                    };
                    table[l.generator].apply(y)
                })
            })
            .collect();
        let label = format!("{word:?}");
        match seen.get(&g) {
            Some((prev, prev_label)) if *prev != image => {
                return Err(Error::IllFormedAction(format!(
                    "words {prev_label} and {label} are both {g} in the group but act differently"
                )));
            }
            Some(_) => {}
            None => {
                seen.insert(g, (image, label));
            }
        }
    }
    Ok(())
}

/// The morphism `(g·x, g, x)` of an action groupoid, stored as `(target, label, source)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ActionMorphism<E, P> {
    pub target: P,
    pub label: E,
    pub source: P,
}

impl<E: Display, P: Display> Display for ActionMorphism<E, P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({};{};{})", self.target, self.label, self.source)
    }
}

/// The action groupoid, equivalently the semi-direct product `G ⋉ X`:
/// `(g'·g x, g', g x)(g x, g, x) = (g'g x, g'g, x)` and
/// `(g x, g, x)^{-1} = (x, g^{-1}, g x)`.
#[derive(Debug, Clone)]
pub struct ActionGroupoid<G, A> {
    group: G,
    action: A,
    kind: GroupoidKind,
}

impl<G: Group, A: GroupAction<G>> ActionGroupoid<G, A> {
    pub fn new(group: G, action: A) -> Self {
        ActionGroupoid {
            group,
            action,
            kind: GroupoidKind::Action,
        }
    }

    /// Same structure, reported as a semi-direct product over an infinite space.
    pub fn semidirect(group: G, action: A) -> Self {
        ActionGroupoid {
            group,
            action,
            kind: GroupoidKind::Semidirect,
        }
    }

    pub fn group(&self) -> &G {
        &self.group
    }

    pub fn action(&self) -> &A {
        &self.action
    }

    pub fn act(&self, g: &G::Elem, x: &A::Point) -> A::Point {
        self.action.act(&self.group, g, x)
    }

    /// `(g·x, g, x)`.
    pub fn morphism(&self, g: G::Elem, source: A::Point) -> ActionMorphism<G::Elem, A::Point> {
        ActionMorphism {
            target: self.act(&g, &source),
            label: g,
            source,
        }
    }

    /// The element of `G^target` with label `g`: `(target, g, g^{-1}·target)`.
    pub fn morphism_to(&self, target: A::Point, g: G::Elem) -> ActionMorphism<G::Elem, A::Point> {
        let source = self.act(&self.group.inv(&g), &target);
        ActionMorphism {
            target,
            label: g,
            source,
        }
    }
}

impl<G: Group, A: GroupAction<G>> Groupoid for ActionGroupoid<G, A> {
    type Object = A::Point;
    type Morphism = ActionMorphism<G::Elem, A::Point>;

    fn kind(&self) -> GroupoidKind {
        self.kind
    }

    fn source(&self, g: &Self::Morphism) -> A::Point {
        g.source.clone()
    }

    fn target(&self, g: &Self::Morphism) -> A::Point {
        g.target.clone()
    }

    fn unit(&self, x: &A::Point) -> Self::Morphism {
        ActionMorphism {
            target: x.clone(),
            label: self.group.identity(),
            source: x.clone(),
        }
    }

    fn compose_unchecked(
        &self,
        later: &Self::Morphism,
        earlier: &Self::Morphism,
    ) -> Self::Morphism {
        ActionMorphism {
            target: later.target.clone(),
            label: self.group.mul(&later.label, &earlier.label),
            source: earlier.source.clone(),
        }
    }

    fn invert(&self, g: &Self::Morphism) -> Self::Morphism {
        ActionMorphism {
            target: g.source.clone(),
            label: self.group.inv(&g.label),
            source: g.target.clone(),
        }
    }

    fn generators_at(&self, x: &A::Point) -> Vec<Self::Morphism> {
        self.group
            .generators()
            .into_iter()
            .map(|g| self.morphism_to(x.clone(), g))
            .collect()
    }

    fn objects(&self) -> Option<Vec<A::Point>> {
        self.action.points()
    }

    fn parse_object(&self, text: &str) -> Result<A::Point> {
        self.action.parse_point(text)
    }

    fn parse_morphism(&self, text: &str) -> Result<Self::Morphism> {
        let inner = strip_parens(text)
            .ok_or_else(|| Error::Parse(format!("bad action morphism {text:?}")))?;
        let parts = split_top_level(inner, ';');
        if parts.len() != 3 {
            return Err(Error::Parse(format!("bad action morphism {text:?}")));
        }
        let label = self.group.parse_elem(parts[1])?;
        let source = self.action.parse_point(parts[2])?;
        let m = self.morphism(label, source);
        if m.target != self.action.parse_point(parts[0])? {
            return Err(Error::Parse(format!("{text}: target is not label·source")));
        }
        Ok(m)
    }
}
