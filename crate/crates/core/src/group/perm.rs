use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::{Arc, OnceLock};

use super::{Group, Letter};
use crate::error::{Error, Result};

/// A permutation of `0..n`, stored as its image table. Products compose
/// right to left: `(p·q)(i) = p(q(i))`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Perm(pub Vec<u16>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n as u16).collect())
    }

    pub fn from_images(images: &[usize]) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in images {
            if i >= n || seen[i] {
                return Err(Error::IllFormedAction(format!(
                    "{images:?} is not a permutation"
                )));
            }
            seen[i] = true;
        }
        Ok(Perm(images.iter().map(|&i| i as u16).collect()))
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn compose(&self, inner: &Perm) -> Perm {
        Perm(inner.0.iter().map(|&i| self.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut out = vec![0u16; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            out[j as usize] = i as u16;
        }
        Perm(out)
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "]")
    }
}

/// The subgroup of `Sym(n)` generated by a list of permutations.
#[derive(Clone)]
pub struct PermGroup {
    degree: usize,
    gens: Vec<Perm>,
    words: Arc<OnceLock<HashMap<Perm, Vec<Letter>>>>,
}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PermGroup")
            .field("degree", &self.degree)
            .field("gens", &self.gens)
            .finish()
    }
}

impl PermGroup {
    pub fn new(degree: usize, gens: Vec<Perm>) -> Result<Self> {
        if gens.iter().any(|g| g.degree() != degree) {
            return Err(Error::IllFormedAction("generator degrees differ".into()));
        }
        Ok(PermGroup {
            degree,
            gens,
            words: Arc::new(OnceLock::new()),
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn gens(&self) -> &[Perm] {
        &self.gens
    }

    /// Shortest words for every element, by breadth-first search of the Cayley graph.
    fn word_table(&self) -> &HashMap<Perm, Vec<Letter>> {
        self.words.get_or_init(|| {
            let mut table = HashMap::new();
            let id = Perm::identity(self.degree);
            table.insert(id.clone(), Vec::new());
            let mut queue = VecDeque::from([id]);
            while let Some(p) = queue.pop_front() {
                let w = table[&p].clone();
                for i in 0..self.gens.len() {
                    for inverse in [false, true] {
                        let l = Letter::new(i, inverse);
                        let q = p.compose(&self.letter(l));
                        if !table.contains_key(&q) {
                            let mut v = w.clone();
                            v.push(l);
                            table.insert(q.clone(), v);
                            queue.push_back(q);
                        }
                    }
                }
            }
            table
        })
    }

    pub fn order(&self) -> usize {
        self.word_table().len()
    }

    pub fn elements(&self) -> Vec<Perm> {
        let mut v: Vec<Perm> = self.word_table().keys().cloned().collect();
        v.sort();
        v
    }
}

impl Group for PermGroup {
    type Elem = Perm;

    fn identity(&self) -> Perm {
        Perm::identity(self.degree)
    }

    fn mul(&self, a: &Perm, b: &Perm) -> Perm {
        a.compose(b)
    }

    fn inv(&self, a: &Perm) -> Perm {
        a.inverse()
    }

    fn rank(&self) -> usize {
        self.gens.len()
    }

    fn letter(&self, letter: Letter) -> Perm {
        let g = &self.gens[letter.generator];
        if letter.inverse {
            g.inverse()
        } else {
            g.clone()
        }
    }

    fn word_of(&self, g: &Perm) -> Vec<Letter> {
        self.word_table()
            .get(g)
            .cloned()
            .unwrap_or_else(|| panic!("{g} is not in the group"))
    }

    fn parse_elem(&self, text: &str) -> Result<Perm> {
        let inner = text.trim().trim_start_matches('[').trim_end_matches(']');
        let images = inner
            .split_whitespace()
            .map(|s| {
                s.parse::<usize>()
                    .map_err(|e| Error::Parse(format!("{text}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if images.len() != self.degree {
            return Err(Error::Parse(format!(
                "{text}: expected degree {}",
                self.degree
            )));
        }
        let p = Perm::from_images(&images).map_err(|e| Error::Parse(e.to_string()))?;
        if !self.word_table().contains_key(&p) {
            return Err(Error::Parse(format!("{text} is not in the group")));
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_group_order() {
        let s3 = PermGroup::new(
            3,
            vec![
                Perm::from_images(&[1, 0, 2]).unwrap(),
                Perm::from_images(&[1, 2, 0]).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(s3.order(), 6);
        for g in s3.elements() {
            assert_eq!(s3.eval_word(&s3.word_of(&g)), g);
        }
    }
}
