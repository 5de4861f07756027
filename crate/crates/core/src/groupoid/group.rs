use super::{Groupoid, GroupoidKind, Singleton};
use crate::error::{Error, Result};
use crate::group::Group;

/// A group as a groupoid with one object; every element is a morphism.
#[derive(Debug, Clone)]
pub struct GroupGroupoid<G> {
    group: G,
}

impl<G: Group> GroupGroupoid<G> {
    pub fn new(group: G) -> Self {
        GroupGroupoid { group }
    }

    pub fn group(&self) -> &G {
        &self.group
    }
}

impl<G: Group> Groupoid for GroupGroupoid<G> {
    type Object = Singleton;
    type Morphism = G::Elem;

    fn kind(&self) -> GroupoidKind {
        GroupoidKind::Group
    }

    fn source(&self, _g: &G::Elem) -> Singleton {
        Singleton
    }

    fn target(&self, _g: &G::Elem) -> Singleton {
        Singleton
    }

    fn unit(&self, _x: &Singleton) -> G::Elem {
        self.group.identity()
    }

    fn compose_unchecked(&self, later: &G::Elem, earlier: &G::Elem) -> G::Elem {
        self.group.mul(later, earlier)
    }

    fn invert(&self, g: &G::Elem) -> G::Elem {
        self.group.inv(g)
    }

    fn generators_at(&self, _x: &Singleton) -> Vec<G::Elem> {
        self.group.generators()
    }

    fn objects(&self) -> Option<Vec<Singleton>> {
        Some(vec![Singleton])
    }

    fn parse_object(&self, text: &str) -> Result<Singleton> {
        match text.trim() {
            "*" => Ok(Singleton),
            other => Err(Error::Parse(format!(
                "a group groupoid has the single object *, got {other:?}"
            ))),
        }
    }

    fn parse_morphism(&self, text: &str) -> Result<G::Elem> {
        self.group.parse_elem(text)
    }
}
