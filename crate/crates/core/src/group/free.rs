//! Free groups as reduced words, and their boundary of eventually periodic ends.

use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use super::{Group, Letter};
use crate::error::{Error, Result};
use crate::groupoid::GroupAction;

const NAMES: [char; 4] = ['a', 'b', 'c', 'd'];
pub const MAX_FREE_RANK: usize = NAMES.len();

/// Letters are packed as `2 * generator + inverse`.
#[inline]
fn code(l: Letter) -> u8 {
    (2 * l.generator + usize::from(l.inverse)) as u8
}

#[inline]
fn decode(c: u8) -> Letter {
    Letter::new((c / 2) as usize, c % 2 == 1)
}

#[inline]
fn inv_code(c: u8) -> u8 {
    c ^ 1
}

fn letter_char(c: u8) -> char {
    let l = decode(c);
    let ch = NAMES[l.generator];
    if l.inverse {
        ch.to_ascii_uppercase()
    } else {
        ch
    }
}

fn char_code(ch: char) -> Option<u8> {
    let lower = ch.to_ascii_lowercase();
    let generator = NAMES.iter().position(|&n| n == lower)?;
    Some(code(Letter::new(generator, ch.is_ascii_uppercase())))
}

/// A freely reduced word. Uppercase letters denote inverses, `e` the empty word.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(SmallVec<[u8; 24]>);

impl Word {
    pub fn empty() -> Self {
        Word(SmallVec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn codes(&self) -> &[u8] {
        &self.0
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        self.0.iter().map(|&c| decode(c))
    }

    pub fn first_letter(&self) -> Option<Letter> {
        self.0.first().map(|&c| decode(c))
    }

    pub fn last_letter(&self) -> Option<Letter> {
        self.0.last().map(|&c| decode(c))
    }

    /// Right multiplication by one letter, with free cancellation.
    pub fn push(&mut self, l: Letter) {
        let c = code(l);
        if self.0.last() == Some(&inv_code(c)) {
            self.0.pop();
        } else {
            self.0.push(c);
        }
    }

    pub fn times_letter(&self, l: Letter) -> Word {
        let mut w = self.clone();
        w.push(l);
        w
    }

    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Word {
        let mut w = Word::empty();
        for l in letters {
            w.push(l);
        }
        w
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut cancel = 0;
        let (a, b) = (&self.0, &other.0);
        while cancel < a.len() && cancel < b.len() && a[a.len() - 1 - cancel] == inv_code(b[cancel])
        {
            cancel += 1;
        }
        let mut out: SmallVec<[u8; 24]> = SmallVec::with_capacity(a.len() + b.len() - 2 * cancel);
        out.extend_from_slice(&a[..a.len() - cancel]);
        out.extend_from_slice(&b[cancel..]);
        Word(out)
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|&c| inv_code(c)).collect())
    }

    pub fn common_prefix_len(&self, other: &Word) -> usize {
        self.0
            .iter()
            .zip(other.0.iter())
            .take_while(|(x, y)| x == y)
            .count()
    }

    fn from_codes(codes: &[u8]) -> Word {
        Word(SmallVec::from_slice(codes))
    }

    pub fn parse(text: &str) -> Result<Word> {
        let text = text.trim();
        if text == "e" || text.is_empty() {
            return Ok(Word::empty());
        }
        let mut w = Word::empty();
        for ch in text.chars() {
            let c = char_code(ch)
                .ok_or_else(|| Error::Parse(format!("bad letter {ch:?} in word {text:?}")))?;
            w.push(decode(c));
        }
        Ok(w)
    }

    /// True when the stored letters contain no cancelling neighbours.
    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|p| p[0] != inv_code(p[1]))
    }

    fn fmt_letters(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &c in &self.0 {
            write!(f, "{}", letter_char(c))?;
        }
        Ok(())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            write!(f, "e")
        } else {
            self.fmt_letters(f)
        }
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

/// Free group on `rank` generators named `a, b, c, d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreeGroup {
    rank: usize,
}

impl FreeGroup {
    pub fn new(rank: usize) -> Self {
        assert!(
            (1..=MAX_FREE_RANK).contains(&rank),
            "free rank must be in 1..={MAX_FREE_RANK}"
        );
        FreeGroup { rank }
    }

    /// Branching number of the Cayley tree: each vertex has `q + 1` neighbours.
    pub fn branching(&self) -> usize {
        2 * self.rank - 1
    }
}

impl Group for FreeGroup {
    type Elem = Word;

    fn identity(&self) -> Word {
        Word::empty()
    }

    fn mul(&self, a: &Word, b: &Word) -> Word {
        a.concat(b)
    }

    fn inv(&self, a: &Word) -> Word {
        a.inverse()
    }

    fn rank(&self) -> usize {
        self.rank
    }

    fn letter(&self, letter: Letter) -> Word {
        Word::from_letters([letter])
    }

    fn word_of(&self, g: &Word) -> Vec<Letter> {
        g.letters().collect()
    }

    fn parse_elem(&self, text: &str) -> Result<Word> {
        let w = Word::parse(text)?;
        if w.letters().any(|l| l.generator >= self.rank) {
            return Err(Error::Parse(format!(
                "word {text:?} uses letters beyond rank {}",
                self.rank
            )));
        }
        Ok(w)
    }
}

/// An eventually periodic end of the Cayley tree: the infinite reduced word
/// `preperiod · period · period · …`, stored in a unique canonical form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoundaryPoint {
    preperiod: Word,
    period: Word,
}

impl BoundaryPoint {
    pub fn new(preperiod: Word, period: Word) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::Parse("boundary period must be nonempty".into()));
        }
        if !preperiod.is_reduced() || !period.is_reduced() {
            return Err(Error::Parse("boundary words must be reduced".into()));
        }
        let (first, last) = (period.0[0], period.0[period.len() - 1]);
        if last == inv_code(first) {
            return Err(Error::Parse(format!(
                "period {period} cancels against itself"
            )));
        }
        if preperiod.0.last() == Some(&inv_code(first)) {
            return Err(Error::Parse(format!(
                "preperiod {preperiod} cancels against period {period}"
            )));
        }
        Ok(Self::canonical(preperiod.0.to_vec(), period.0.to_vec()))
    }

    /// The end `w^∞` for a cyclically reduced word `w`.
    pub fn periodic(period: &Word) -> Result<Self> {
        Self::new(Word::empty(), period.clone())
    }

    fn canonical(mut pre: Vec<u8>, mut period: Vec<u8>) -> Self {
        // Primitive root of the period.
        let n = period.len();
        if let Some(d) = (1..n).find(|&d| n.is_multiple_of(d) && (d..n).all(|i| period[i] == period[i - d]))
        {
            period.truncate(d);
        }
        // Absorb the tail of the preperiod into the period.
        while let Some(&last) = pre.last() {
            if last != *period.last().unwrap() {
                break;
            }
            pre.pop();
            period.rotate_right(1);
        }
        BoundaryPoint {
            preperiod: Word::from_codes(&pre),
            period: Word::from_codes(&period),
        }
    }

    pub fn preperiod(&self) -> &Word {
        &self.preperiod
    }

    pub fn period(&self) -> &Word {
        &self.period
    }

    pub fn code_at(&self, i: usize) -> u8 {
        let p = self.preperiod.len();
        if i < p {
            self.preperiod.0[i]
        } else {
            self.period.0[(i - p) % self.period.len()]
        }
    }

    pub fn letter_at(&self, i: usize) -> Letter {
        decode(self.code_at(i))
    }

    /// The finite prefix of length `n`.
    pub fn prefix(&self, n: usize) -> Word {
        Word((0..n).map(|i| self.code_at(i)).collect())
    }

    /// Length of the common prefix of the finite word `w` with this end.
    pub fn confluence(&self, w: &Word) -> usize {
        w.0.iter()
            .enumerate()
            .take_while(|&(i, &c)| c == self.code_at(i))
            .count()
    }

    /// The translated end `g · ξ`.
    pub fn translate(&self, g: &Word) -> BoundaryPoint {
        let copies = g.len() / self.period.len() + 2;
        let mut tail: Vec<u8> = self.preperiod.0.to_vec();
        for _ in 0..copies {
            tail.extend_from_slice(&self.period.0);
        }
        let mut cancel = 0;
        while cancel < g.len() && g.0[g.len() - 1 - cancel] == inv_code(tail[cancel]) {
            cancel += 1;
        }
        let mut pre: Vec<u8> = g.0[..g.len() - cancel].to_vec();
        pre.extend_from_slice(&tail[cancel..]);
        Self::canonical(pre, self.period.0.to_vec())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let (pre, period) = text.trim().split_once('|').ok_or_else(|| {
            Error::Parse(format!(
                "boundary point {text:?} must look like preperiod|period"
            ))
        })?;
        let pre = if pre.is_empty() {
            Word::empty()
        } else {
            Word::parse(pre)?
        };
        let period = Word::parse(period)?;
        Self::new(pre, period)
    }
}

impl fmt::Display for BoundaryPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.preperiod.fmt_letters(f)?;
        write!(f, "|")?;
        self.period.fmt_letters(f)
    }
}

impl fmt::Debug for BoundaryPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "End({self})")
    }
}

/// Left action of a free group on its eventually periodic ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundaryAction {
    pub rank: usize,
}

impl GroupAction<FreeGroup> for BoundaryAction {
    type Point = BoundaryPoint;

    fn act(&self, _group: &FreeGroup, g: &Word, x: &BoundaryPoint) -> BoundaryPoint {
        x.translate(g)
    }

    fn points(&self) -> Option<Vec<BoundaryPoint>> {
        None
    }

    fn parse_point(&self, text: &str) -> Result<BoundaryPoint> {
        BoundaryPoint::parse(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn reduction_and_inverse() {
        let f = FreeGroup::new(2);
        assert_eq!(f.mul(&w("a"), &w("Ab")), w("b"));
        assert_eq!(w("aAb"), w("b"));
        assert_eq!(w("aB").inverse(), w("bA"));
        assert_eq!(f.mul(&w("aB"), &w("bA")), Word::empty());
        assert_eq!(Word::empty().to_string(), "e");
    }

    #[test]
    fn boundary_canonical_form() {
        let x = BoundaryPoint::parse("aa|a").unwrap();
        assert_eq!(x, BoundaryPoint::parse("|a").unwrap());
        let y = BoundaryPoint::parse("b|abab").unwrap();
        assert_eq!(y.to_string(), "|ba");
        assert_eq!(y.prefix(5), w("babab"));
        assert!(BoundaryPoint::parse("A|a").is_err());
        assert!(BoundaryPoint::parse("|aA").is_err());
        assert!(BoundaryPoint::parse("|aBA").is_err());
    }

    #[test]
    fn translation_cancels_into_period() {
        let xi = BoundaryPoint::parse("|a").unwrap();
        assert_eq!(xi.translate(&w("AAA")), xi);
        assert_eq!(xi.translate(&w("b")).to_string(), "b|a");
        let eta = BoundaryPoint::parse("|ab").unwrap();
        assert_eq!(eta.translate(&w("BA")).to_string(), "|ab");
        assert_eq!(eta.translate(&w("A")).to_string(), "|ba");
        // Action axiom on a few words.
        for g in ["a", "bA", "BBa", "ab"] {
            for h in ["A", "b", "aab", "BA"] {
                let gh = w(g).concat(&w(h));
                assert_eq!(eta.translate(&w(h)).translate(&w(g)), eta.translate(&gh));
            }
        }
    }

    #[test]
    fn confluence_with_end() {
        let xi = BoundaryPoint::parse("|a").unwrap();
        assert_eq!(xi.confluence(&w("aab")), 2);
        assert_eq!(xi.confluence(&w("b")), 0);
        assert_eq!(xi.confluence(&Word::empty()), 0);
    }
}
