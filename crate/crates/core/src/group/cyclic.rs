use std::fmt;

use super::{Group, Letter};
use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Residue(pub u32);

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The cyclic group `Z/n` with generator `1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cyclic {
    order: u32,
}

impl Cyclic {
    pub fn new(order: u32) -> Self {
        assert!(order >= 1, "cyclic group order must be positive");
        Cyclic { order }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn elem(&self, k: i64) -> Residue {
        Residue(k.rem_euclid(self.order as i64) as u32)
    }
}

impl Group for Cyclic {
    type Elem = Residue;

    fn identity(&self) -> Residue {
        Residue(0)
    }

    fn mul(&self, a: &Residue, b: &Residue) -> Residue {
        Residue(((a.0 as u64 + b.0 as u64) % self.order as u64) as u32)
    }

    fn inv(&self, a: &Residue) -> Residue {
        Residue((self.order - a.0) % self.order)
    }

    fn rank(&self) -> usize {
        1
    }

    fn letter(&self, letter: Letter) -> Residue {
        self.elem(if letter.inverse { -1 } else { 1 })
    }

    fn word_of(&self, g: &Residue) -> Vec<Letter> {
        vec![Letter::new(0, false); g.0 as usize]
    }

    fn parse_elem(&self, text: &str) -> Result<Residue> {
        let k: i64 = text
            .trim()
            .parse()
            .map_err(|e| Error::Parse(format!("{text}: {e}")))?;
        Ok(self.elem(k))
    }
}
