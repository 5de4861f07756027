//! Discrete groups with canonical element forms.

mod any;
mod cyclic;
mod free;
mod lattice;
mod perm;
mod product;

use std::fmt::{Debug, Display};
use std::hash::Hash;

pub use any::{AnyElem, AnyGroup, GroupSpec};
pub use cyclic::{Cyclic, Residue};
pub use free::{BoundaryAction, BoundaryPoint, FreeGroup, Word, MAX_FREE_RANK};
pub use lattice::{Lattice, LatticePoint};
pub use perm::{Perm, PermGroup};
pub use product::{DirectProduct, Pair};

use crate::error::Result;

/// One abstract generator or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Letter { generator, inverse }
    }

    pub fn inverted(self) -> Self {
        Letter {
            generator: self.generator,
            inverse: !self.inverse,
        }
    }
}

pub trait Group: Clone + Debug + Send + Sync + 'static {
    type Elem: Clone + Eq + Hash + Ord + Debug + Display + Send + Sync + 'static;

    fn identity(&self) -> Self::Elem;

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    fn inv(&self, a: &Self::Elem) -> Self::Elem;

    /// Number of abstract generators (inverses not counted).
    fn rank(&self) -> usize;

    fn letter(&self, letter: Letter) -> Self::Elem;

    /// Some expression of `g` as a product of letters, read left to right.
    fn word_of(&self, g: &Self::Elem) -> Vec<Letter>;

    fn parse_elem(&self, text: &str) -> Result<Self::Elem>;

    fn is_identity(&self, g: &Self::Elem) -> bool {
        *g == self.identity()
    }

    /// Symmetric generating set in a fixed order, without duplicates or the identity.
    fn generators(&self) -> Vec<Self::Elem> {
        let mut out: Vec<Self::Elem> = Vec::new();
        for i in 0..self.rank() {
            for inverse in [false, true] {
                let g = self.letter(Letter::new(i, inverse));
                if !self.is_identity(&g) && !out.contains(&g) {
                    out.push(g);
                }
            }
        }
        out
    }

    fn eval_word(&self, word: &[Letter]) -> Self::Elem {
        word.iter()
            .fold(self.identity(), |acc, &l| self.mul(&acc, &self.letter(l)))
    }

    fn pow(&self, g: &Self::Elem, mut n: i64) -> Self::Elem {
        let mut base = if n < 0 { self.inv(g) } else { g.clone() };
        n = n.abs();
        let mut acc = self.identity();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            n >>= 1;
        }
        acc
    }
}

/// All letter sequences of length at most `depth`, shortest first.
pub fn words_up_to(rank: usize, depth: usize) -> Vec<Vec<Letter>> {
    let letters: Vec<Letter> = (0..rank)
        .flat_map(|i| [Letter::new(i, false), Letter::new(i, true)])
        .collect();
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for w in &frontier {
            for &l in &letters {
                // Skip freely cancelling pairs; they add nothing to relation checks.
                if w.last().is_some_and(|&last: &Letter| last == l.inverted()) {
                    continue;
                }
                let mut v = w.clone();
                v.push(l);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}
