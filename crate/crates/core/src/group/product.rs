use super::{Group, Letter};
use crate::error::{Error, Result};

/// Direct product `A × B`; generators of `A` come first.
#[derive(Debug, Clone)]
pub struct DirectProduct<A, B> {
    pub left: A,
    pub right: B,
}

impl<A: Group, B: Group> DirectProduct<A, B> {
    pub fn new(left: A, right: B) -> Self {
        DirectProduct { left, right }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Pair<X, Y>(pub X, pub Y);

impl<X: std::fmt::Display, Y: std::fmt::Display> std::fmt::Display for Pair<X, Y> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "<{},{}>", self.0, self.1)
    }
}

impl<A: Group, B: Group> Group for DirectProduct<A, B> {
    type Elem = Pair<A::Elem, B::Elem>;

    fn identity(&self) -> Self::Elem {
        Pair(self.left.identity(), self.right.identity())
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        Pair(self.left.mul(&a.0, &b.0), self.right.mul(&a.1, &b.1))
    }

    fn inv(&self, a: &Self::Elem) -> Self::Elem {
        Pair(self.left.inv(&a.0), self.right.inv(&a.1))
    }

    fn rank(&self) -> usize {
        self.left.rank() + self.right.rank()
    }

    fn letter(&self, letter: Letter) -> Self::Elem {
        let r = self.left.rank();
        if letter.generator < r {
            Pair(self.left.letter(letter), self.right.identity())
        } else {
            Pair(
                self.left.identity(),
                self.right
                    .letter(Letter::new(letter.generator - r, letter.inverse)),
            )
        }
    }

    fn word_of(&self, g: &Self::Elem) -> Vec<Letter> {
        let r = self.left.rank();
        let mut w = self.left.word_of(&g.0);
        w.extend(
            self.right
                .word_of(&g.1)
                .into_iter()
                .map(|l| Letter::new(l.generator + r, l.inverse)),
        );
        w
    }

    fn parse_elem(&self, text: &str) -> Result<Self::Elem> {
        let inner = text
            .trim()
            .strip_prefix('<')
            .and_then(|s| s.strip_suffix('>'))
            .ok_or_else(|| {
                Error::Parse(format!("product element {text:?} must look like <x,y>"))
            })?;
        let parts = crate::text::split_top_level(inner, ',');
        if parts.len() != 2 {
            return Err(Error::Parse(format!(
                "product element {text:?} needs two components"
            )));
        }
        Ok(Pair(
            self.left.parse_elem(parts[0])?,
            self.right.parse_elem(parts[1])?,
        ))
    }
}
