use std::fmt;

use serde::{Deserialize, Serialize};

use super::{
    Cyclic, FreeGroup, Group, Lattice, LatticePoint, Letter, Perm, PermGroup, Residue, Word,
};
use crate::error::{Error, Result};

/// Group description as it appears in config files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum GroupSpec {
    Free {
        rank: usize,
    },
    Lattice {
        dim: usize,
    },
    Cyclic {
        order: u32,
    },
    Perm {
        degree: usize,
        generators: Vec<Vec<usize>>,
    },
}

/// A group chosen at run time.
#[derive(Debug, Clone)]
pub enum AnyGroup {
    Free(FreeGroup),
    Lattice(Lattice),
    Cyclic(Cyclic),
    Perm(PermGroup),
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum AnyElem {
    Free(Word),
    Lattice(LatticePoint),
    Cyclic(Residue),
    Perm(Perm),
}

impl fmt::Display for AnyElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnyElem::Free(w) => w.fmt(f),
            AnyElem::Lattice(p) => p.fmt(f),
            AnyElem::Cyclic(r) => r.fmt(f),
            AnyElem::Perm(p) => p.fmt(f),
        }
    }
}

impl AnyGroup {
    pub fn from_spec(spec: &GroupSpec) -> Result<Self> {
        Ok(match spec {
            GroupSpec::Free { rank } => {
                if !(1..=super::free::MAX_FREE_RANK).contains(rank) {
                    return Err(Error::ConfigInvalid(format!(
                        "free rank {rank} out of range"
                    )));
                }
                AnyGroup::Free(FreeGroup::new(*rank))
            }
            GroupSpec::Lattice { dim } => {
                if *dim == 0 {
                    return Err(Error::ConfigInvalid(
                        "lattice dimension must be positive".into(),
                    ));
                }
                AnyGroup::Lattice(Lattice::new(*dim))
            }
            GroupSpec::Cyclic { order } => {
                if *order == 0 {
                    return Err(Error::ConfigInvalid("cyclic order must be positive".into()));
                }
                AnyGroup::Cyclic(Cyclic::new(*order))
            }
            GroupSpec::Perm { degree, generators } => {
                let gens = generators
                    .iter()
                    .map(|g| Perm::from_images(g))
                    .collect::<Result<Vec<_>>>()?;
                AnyGroup::Perm(PermGroup::new(*degree, gens)?)
            }
        })
    }

    pub fn spec(&self) -> GroupSpec {
        match self {
            AnyGroup::Free(g) => GroupSpec::Free { rank: g.rank() },
            AnyGroup::Lattice(g) => GroupSpec::Lattice { dim: g.dim() },
            AnyGroup::Cyclic(g) => GroupSpec::Cyclic { order: g.order() },
            AnyGroup::Perm(g) => GroupSpec::Perm {
                degree: g.degree(),
                generators: g
                    .gens()
                    .iter()
                    .map(|p| p.0.iter().map(|&i| i as usize).collect())
                    .collect(),
            },
        }
    }
}

fn mismatch(a: &AnyElem) -> ! {
    panic!("element {a} does not belong to this group")
}

impl Group for AnyGroup {
    type Elem = AnyElem;

    fn identity(&self) -> AnyElem {
        match self {
            AnyGroup::Free(g) => AnyElem::Free(g.identity()),
            AnyGroup::Lattice(g) => AnyElem::Lattice(g.identity()),
            AnyGroup::Cyclic(g) => AnyElem::Cyclic(g.identity()),
            AnyGroup::Perm(g) => AnyElem::Perm(g.identity()),
        }
    }

    fn mul(&self, a: &AnyElem, b: &AnyElem) -> AnyElem {
        match (self, a, b) {
            (AnyGroup::Free(g), AnyElem::Free(x), AnyElem::Free(y)) => AnyElem::Free(g.mul(x, y)),
            (AnyGroup::Lattice(g), AnyElem::Lattice(x), AnyElem::Lattice(y)) => {
                AnyElem::Lattice(g.mul(x, y))
            }
            (AnyGroup::Cyclic(g), AnyElem::Cyclic(x), AnyElem::Cyclic(y)) => {
                AnyElem::Cyclic(g.mul(x, y))
            }
            (AnyGroup::Perm(g), AnyElem::Perm(x), AnyElem::Perm(y)) => AnyElem::Perm(g.mul(x, y)),
            _ => mismatch(a),
        }
    }

    fn inv(&self, a: &AnyElem) -> AnyElem {
        match (self, a) {
            (AnyGroup::Free(g), AnyElem::Free(x)) => AnyElem::Free(g.inv(x)),
            (AnyGroup::Lattice(g), AnyElem::Lattice(x)) => AnyElem::Lattice(g.inv(x)),
            (AnyGroup::Cyclic(g), AnyElem::Cyclic(x)) => AnyElem::Cyclic(g.inv(x)),
            (AnyGroup::Perm(g), AnyElem::Perm(x)) => AnyElem::Perm(g.inv(x)),
            _ => mismatch(a),
        }
    }

    fn rank(&self) -> usize {
        match self {
            AnyGroup::Free(g) => g.rank(),
            AnyGroup::Lattice(g) => g.rank(),
            AnyGroup::Cyclic(g) => g.rank(),
            AnyGroup::Perm(g) => g.rank(),
        }
    }

    fn letter(&self, letter: Letter) -> AnyElem {
        match self {
            AnyGroup::Free(g) => AnyElem::Free(g.letter(letter)),
            AnyGroup::Lattice(g) => AnyElem::Lattice(g.letter(letter)),
            AnyGroup::Cyclic(g) => AnyElem::Cyclic(g.letter(letter)),
            AnyGroup::Perm(g) => AnyElem::Perm(g.letter(letter)),
        }
    }

    fn word_of(&self, a: &AnyElem) -> Vec<Letter> {
        match (self, a) {
            (AnyGroup::Free(g), AnyElem::Free(x)) => g.word_of(x),
            (AnyGroup::Lattice(g), AnyElem::Lattice(x)) => g.word_of(x),
            (AnyGroup::Cyclic(g), AnyElem::Cyclic(x)) => g.word_of(x),
            (AnyGroup::Perm(g), AnyElem::Perm(x)) => g.word_of(x),
            _ => mismatch(a),
        }
    }

    fn parse_elem(&self, text: &str) -> Result<AnyElem> {
        Ok(match self {
            AnyGroup::Free(g) => AnyElem::Free(g.parse_elem(text)?),
            AnyGroup::Lattice(g) => AnyElem::Lattice(g.parse_elem(text)?),
            AnyGroup::Cyclic(g) => AnyElem::Cyclic(g.parse_elem(text)?),
            AnyGroup::Perm(g) => AnyElem::Perm(g.parse_elem(text)?),
        })
    }
}
