use std::fmt;

use smallvec::SmallVec;

use super::{Group, Letter};
use crate::error::{Error, Result};

/// A point of `Z^d`. Displayed as a bare integer when `d = 1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct LatticePoint(pub SmallVec<[i64; 4]>);

impl LatticePoint {
    pub fn coords(&self) -> &[i64] {
        &self.0
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == 1 {
            return write!(f, "{}", self.0[0]);
        }
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lattice {
    dim: usize,
}

impl Lattice {
    pub fn new(dim: usize) -> Self {
        assert!(dim >= 1, "lattice dimension must be positive");
        Lattice { dim }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, coords: &[i64]) -> LatticePoint {
        assert_eq!(coords.len(), self.dim);
        LatticePoint(SmallVec::from_slice(coords))
    }
}

impl Group for Lattice {
    type Elem = LatticePoint;

    fn identity(&self) -> LatticePoint {
        LatticePoint(SmallVec::from_elem(0, self.dim))
    }

    fn mul(&self, a: &LatticePoint, b: &LatticePoint) -> LatticePoint {
        LatticePoint(a.0.iter().zip(b.0.iter()).map(|(x, y)| x + y).collect())
    }

    fn inv(&self, a: &LatticePoint) -> LatticePoint {
        LatticePoint(a.0.iter().map(|x| -x).collect())
    }

    fn rank(&self) -> usize {
        self.dim
    }

    fn letter(&self, letter: Letter) -> LatticePoint {
        let mut p = self.identity();
        p.0[letter.generator] = if letter.inverse { -1 } else { 1 };
        p
    }

    fn word_of(&self, g: &LatticePoint) -> Vec<Letter> {
        g.0.iter()
            .enumerate()
            .flat_map(|(i, &x)| {
                std::iter::repeat_n(Letter::new(i, x < 0), x.unsigned_abs() as usize)
            })
            .collect()
    }

    fn parse_elem(&self, text: &str) -> Result<LatticePoint> {
        let inner = text.trim().trim_start_matches('(').trim_end_matches(')');
        let coords = inner
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<i64>()
                    .map_err(|e| Error::Parse(format!("{text}: {e}")))
            })
            .collect::<Result<SmallVec<[i64; 4]>>>()?;
        if coords.len() != self.dim {
            return Err(Error::Parse(format!(
                "{text}: expected {} coordinates",
                self.dim
            )));
        }
        Ok(LatticePoint(coords))
    }
}
