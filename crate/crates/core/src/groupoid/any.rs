use std::fmt;

use serde::{Deserialize, Serialize};

use super::{
    check_action, ActionGroupoid, ActionMorphism, FiniteAction, GroupGroupoid, Groupoid,
    GroupoidKind, RelationGroupoid, RelationMorphism, Singleton, DEFAULT_ACTION_CHECK_DEPTH,
};
use crate::error::{Error, Result};
use crate::group::{AnyElem, AnyGroup, BoundaryAction, BoundaryPoint, FreeGroup, GroupSpec, Word};

fn default_depth() -> usize {
    DEFAULT_ACTION_CHECK_DEPTH
}

/// A groupoid as written in a config file.
///
/// ```toml
/// kind = "action"
/// points = 2
/// generators = [[1, 0]]
///
/// [group]
/// type = "cyclic"
/// order = 2
/// ```
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GroupoidDescription {
    Group {
        group: GroupSpec,
    },
    Relation {
        partition: Vec<Vec<u64>>,
    },
    Action {
        group: GroupSpec,
        points: usize,
        /// Image table of each abstract generator.
        generators: Vec<Vec<usize>>,
        #[serde(default = "default_depth")]
        check_depth: usize,
    },
    /// A free group acting on the ends of its Cayley tree.
    Semidirect {
        rank: usize,
    },
}

impl GroupoidDescription {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::ConfigInvalid(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("descriptions always serialize")
    }
}

#[derive(Debug, Clone)]
pub enum AnyGroupoid {
    Group(GroupGroupoid<AnyGroup>),
    Relation(RelationGroupoid),
    Action(ActionGroupoid<AnyGroup, FiniteAction>),
    Semidirect(ActionGroupoid<FreeGroup, BoundaryAction>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AnyObject {
    Unit,
    Point(u64),
    End(BoundaryPoint),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AnyMorphism {
    Group(AnyElem),
    Relation(RelationMorphism),
    Action(ActionMorphism<AnyElem, usize>),
    Semidirect(ActionMorphism<Word, BoundaryPoint>),
}

impl fmt::Display for AnyObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnyObject::Unit => Singleton.fmt(f),
            AnyObject::Point(x) => x.fmt(f),
            AnyObject::End(xi) => xi.fmt(f),
        }
    }
}

impl fmt::Display for AnyMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnyMorphism::Group(g) => g.fmt(f),
            AnyMorphism::Relation(g) => g.fmt(f),
            AnyMorphism::Action(g) => g.fmt(f),
            AnyMorphism::Semidirect(g) => g.fmt(f),
        }
    }
}

/// Builds a groupoid from its description, validating action data on all
/// words up to the configured length.
pub fn build_groupoid(description: &GroupoidDescription) -> Result<AnyGroupoid> {
    Ok(match description {
        GroupoidDescription::Group { group } => {
            AnyGroupoid::Group(GroupGroupoid::new(AnyGroup::from_spec(group)?))
        }
        GroupoidDescription::Relation { partition } => {
            AnyGroupoid::Relation(RelationGroupoid::new(partition.clone())?)
        }
        GroupoidDescription::Action {
            group,
            points,
            generators,
            check_depth,
        } => {
            let group = AnyGroup::from_spec(group)?;
            let action = FiniteAction::from_tables(*points, generators)?;
            check_action(&group, &action, *check_depth)?;
            AnyGroupoid::Action(ActionGroupoid::new(group, action))
        }
        GroupoidDescription::Semidirect { rank } => {
            if !(1..=crate::group::MAX_FREE_RANK).contains(rank) {
                return Err(Error::ConfigInvalid(format!(
                    "free rank {rank} out of range"
                )));
            }
            AnyGroupoid::Semidirect(ActionGroupoid::semidirect(
                FreeGroup::new(*rank),
                BoundaryAction { rank: *rank },
            ))
        }
    })
}

fn wrong(kind: GroupoidKind, what: &dyn fmt::Display) -> ! {
    panic!("{what} does not belong to a {kind:?} groupoid")
}

impl AnyGroupoid {
    fn point(&self, x: &AnyObject) -> u64 {
        match x {
            AnyObject::Point(p) => *p,
            other => wrong(self.kind(), other),
        }
    }
}

impl Groupoid for AnyGroupoid {
    type Object = AnyObject;
    type Morphism = AnyMorphism;

    fn kind(&self) -> GroupoidKind {
        match self {
            AnyGroupoid::Group(g) => g.kind(),
            AnyGroupoid::Relation(g) => g.kind(),
            AnyGroupoid::Action(g) => g.kind(),
            AnyGroupoid::Semidirect(g) => g.kind(),
        }
    }

    fn source(&self, g: &AnyMorphism) -> AnyObject {
        match (self, g) {
            (AnyGroupoid::Group(_), AnyMorphism::Group(_)) => AnyObject::Unit,
            (AnyGroupoid::Relation(_), AnyMorphism::Relation(m)) => AnyObject::Point(m.source),
            (AnyGroupoid::Action(_), AnyMorphism::Action(m)) => AnyObject::Point(m.source as u64),
            (AnyGroupoid::Semidirect(_), AnyMorphism::Semidirect(m)) => {
                AnyObject::End(m.source.clone())
            }
            _ => wrong(self.kind(), g),
        }
    }

    fn target(&self, g: &AnyMorphism) -> AnyObject {
        match (self, g) {
            (AnyGroupoid::Group(_), AnyMorphism::Group(_)) => AnyObject::Unit,
            (AnyGroupoid::Relation(_), AnyMorphism::Relation(m)) => AnyObject::Point(m.target),
            (AnyGroupoid::Action(_), AnyMorphism::Action(m)) => AnyObject::Point(m.target as u64),
            (AnyGroupoid::Semidirect(_), AnyMorphism::Semidirect(m)) => {
                AnyObject::End(m.target.clone())
            }
            _ => wrong(self.kind(), g),
        }
    }

    fn unit(&self, x: &AnyObject) -> AnyMorphism {
        match (self, x) {
            (AnyGroupoid::Group(g), _) => AnyMorphism::Group(g.unit(&Singleton)),
            (AnyGroupoid::Relation(g), _) => AnyMorphism::Relation(g.unit(&self.point(x))),
            (AnyGroupoid::Action(g), _) => AnyMorphism::Action(g.unit(&(self.point(x) as usize))),
            (AnyGroupoid::Semidirect(g), AnyObject::End(xi)) => AnyMorphism::Semidirect(g.unit(xi)),
            _ => wrong(self.kind(), x),
        }
    }

    fn compose_unchecked(&self, later: &AnyMorphism, earlier: &AnyMorphism) -> AnyMorphism {
        match (self, later, earlier) {
            (AnyGroupoid::Group(g), AnyMorphism::Group(a), AnyMorphism::Group(b)) => {
                AnyMorphism::Group(g.compose_unchecked(a, b))
            }
            (AnyGroupoid::Relation(g), AnyMorphism::Relation(a), AnyMorphism::Relation(b)) => {
                AnyMorphism::Relation(g.compose_unchecked(a, b))
            }
            (AnyGroupoid::Action(g), AnyMorphism::Action(a), AnyMorphism::Action(b)) => {
                AnyMorphism::Action(g.compose_unchecked(a, b))
            }
            (
                AnyGroupoid::Semidirect(g),
                AnyMorphism::Semidirect(a),
                AnyMorphism::Semidirect(b),
            ) => AnyMorphism::Semidirect(g.compose_unchecked(a, b)),
            _ => wrong(self.kind(), later),
        }
    }

    fn invert(&self, g: &AnyMorphism) -> AnyMorphism {
        match (self, g) {
            (AnyGroupoid::Group(gr), AnyMorphism::Group(a)) => AnyMorphism::Group(gr.invert(a)),
            (AnyGroupoid::Relation(gr), AnyMorphism::Relation(a)) => {
                AnyMorphism::Relation(gr.invert(a))
            }
            (AnyGroupoid::Action(gr), AnyMorphism::Action(a)) => AnyMorphism::Action(gr.invert(a)),
            (AnyGroupoid::Semidirect(gr), AnyMorphism::Semidirect(a)) => {
                AnyMorphism::Semidirect(gr.invert(a))
            }
            _ => wrong(self.kind(), g),
        }
    }

    fn generators_at(&self, x: &AnyObject) -> Vec<AnyMorphism> {
        match (self, x) {
            (AnyGroupoid::Group(g), _) => g
                .generators_at(&Singleton)
                .into_iter()
                .map(AnyMorphism::Group)
                .collect(),
            (AnyGroupoid::Relation(g), _) => g
                .generators_at(&self.point(x))
                .into_iter()
                .map(AnyMorphism::Relation)
                .collect(),
            (AnyGroupoid::Action(g), _) => g
                .generators_at(&(self.point(x) as usize))
                .into_iter()
                .map(AnyMorphism::Action)
                .collect(),
            (AnyGroupoid::Semidirect(g), AnyObject::End(xi)) => g
                .generators_at(xi)
                .into_iter()
                .map(AnyMorphism::Semidirect)
                .collect(),
            _ => wrong(self.kind(), x),
        }
    }

    fn objects(&self) -> Option<Vec<AnyObject>> {
        match self {
            AnyGroupoid::Group(_) => Some(vec![AnyObject::Unit]),
            AnyGroupoid::Relation(g) => g
                .objects()
                .map(|v| v.into_iter().map(AnyObject::Point).collect()),
            AnyGroupoid::Action(g) => g
                .objects()
                .map(|v| v.into_iter().map(|x| AnyObject::Point(x as u64)).collect()),
            AnyGroupoid::Semidirect(_) => None,
        }
    }

    fn parse_object(&self, text: &str) -> Result<AnyObject> {
        Ok(match self {
            AnyGroupoid::Group(g) => {
                g.parse_object(text)?;
                AnyObject::Unit
            }
            AnyGroupoid::Relation(g) => AnyObject::Point(g.parse_object(text)?),
            AnyGroupoid::Action(g) => AnyObject::Point(g.parse_object(text)? as u64),
            AnyGroupoid::Semidirect(g) => AnyObject::End(g.parse_object(text)?),
        })
    }

    fn parse_morphism(&self, text: &str) -> Result<AnyMorphism> {
        Ok(match self {
            AnyGroupoid::Group(g) => AnyMorphism::Group(g.parse_morphism(text)?),
            AnyGroupoid::Relation(g) => AnyMorphism::Relation(g.parse_morphism(text)?),
            AnyGroupoid::Action(g) => AnyMorphism::Action(g.parse_morphism(text)?),
            AnyGroupoid::Semidirect(g) => AnyMorphism::Semidirect(g.parse_morphism(text)?),
        })
    }
}
