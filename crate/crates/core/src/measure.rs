//! Finite-support measures on fibers, with a ledger of truncated mass.

use std::fmt::{self, Debug, Display, Write as _};
use std::hash::Hash;
use std::sync::Arc;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groupoid::Groupoid;
use crate::weight::Weight;

/// A certified bracket around a total-variation norm `‖μ − ν‖ ∈ [0, 2]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TvInterval<W> {
    pub raw: W,
    pub lo: W,
    pub hi: W,
}

impl<W: Weight> TvInterval<W> {
    pub fn from_raw(raw: W, leak: W) -> Self {
        let two = W::from_usize(2);
        let lo = W::max_of(W::zero(), raw.clone() - leak.clone());
        let hi = W::min_of(two, raw.clone() + leak);
        TvInterval { raw, lo, hi }
    }

    pub fn to_f64(&self) -> Interval {
        Interval {
            lo: self.lo.to_f64(),
            hi: self.hi.to_f64(),
        }
    }
}

/// Float form of a TV bracket, as stored in curves and certificates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    pub fn sup(self, other: Interval) -> Interval {
        Interval {
            lo: self.lo.max(other.lo),
            hi: self.hi.max(other.hi),
        }
    }
}

impl Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.6e}, {:.6e}]", self.lo, self.hi)
    }
}

/// Nonnegative weights on finitely many keys of one fiber.
///
/// Atoms are kept sorted by key with no zero weights, so equal measures
/// have equal representations. `leaked` is mass removed by truncation.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMeasure<K, W, T> {
    fiber: T,
    atoms: Vec<(K, W)>,
    leaked: W,
}

/// Sums weights per key in arrival order, then sorts.
pub(crate) fn accumulate<K: Hash + Eq + Ord, W: Weight>(
    items: impl IntoIterator<Item = (K, W)>,
) -> Vec<(K, W)> {
    let mut acc: FxHashMap<K, W> = FxHashMap::default();
    for (k, w) in items {
        match acc.get_mut(&k) {
            Some(v) => *v = v.clone() + w,
            None => {
                acc.insert(k, w);
            }
        }
    }
    let mut atoms: Vec<(K, W)> = acc.into_iter().filter(|(_, w)| !w.is_zero()).collect();
    atoms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
    atoms
}

impl<K, W, T> SparseMeasure<K, W, T>
where
    K: Clone + Eq + Hash + Ord,
    W: Weight,
    T: Clone + PartialEq + Display,
{
    pub fn from_atoms(fiber: T, atoms: impl IntoIterator<Item = (K, W)>) -> Self {
        Self::with_leak(fiber, atoms, W::zero())
    }

    pub fn with_leak(fiber: T, atoms: impl IntoIterator<Item = (K, W)>, leaked: W) -> Self {
        let atoms = accumulate(atoms);
        debug_assert!(
            atoms.iter().all(|(_, w)| w.is_positive()),
            "negative weight"
        );
        SparseMeasure {
            fiber,
            atoms,
            leaked,
        }
    }

    /// Trusted constructor for atoms already sorted, distinct and positive.
    pub(crate) fn from_sorted(fiber: T, atoms: Vec<(K, W)>, leaked: W) -> Self {
        SparseMeasure {
            fiber,
            atoms,
            leaked,
        }
    }

    pub fn dirac(fiber: T, key: K) -> Self {
        SparseMeasure {
            fiber,
            atoms: vec![(key, W::one())],
            leaked: W::zero(),
        }
    }

    pub fn fiber(&self) -> &T {
        &self.fiber
    }

    pub fn atoms(&self) -> &[(K, W)] {
        &self.atoms
    }

    pub fn into_atoms(self) -> Vec<(K, W)> {
        self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn leaked(&self) -> &W {
        &self.leaked
    }

    pub fn get(&self, key: &K) -> W {
        match self.atoms.binary_search_by(|(k, _)| k.cmp(key)) {
            Ok(i) => self.atoms[i].1.clone(),
            Err(_) => W::zero(),
        }
    }

    /// Total weight of the atoms, summed in key order.
    pub fn mass(&self) -> W {
        self.atoms
            .iter()
            .fold(W::zero(), |acc, (_, w)| acc + w.clone())
    }

    /// Atom mass plus leaked mass; 1 for probability measures.
    pub fn mass_with_leak(&self) -> W {
        self.mass() + self.leaked.clone()
    }

    fn check_fiber(&self, other: &Self) -> Result<()> {
        if self.fiber != other.fiber {
            return Err(Error::FiberMismatch {
                left: self.fiber.to_string(),
                right: other.fiber.to_string(),
            });
        }
        Ok(())
    }

    /// `Σ|μ − ν|` over the union of supports, bracketed by both leak ledgers.
    pub fn tv_distance(&self, other: &Self) -> Result<TvInterval<W>> {
        self.check_fiber(other)?;
        let (a, b) = (&self.atoms, &other.atoms);
        let (mut i, mut j) = (0, 0);
        let mut raw = W::zero();
        while i < a.len() || j < b.len() {
            let ord = match (a.get(i), b.get(j)) {
                (Some(x), Some(y)) => x.0.cmp(&y.0),
                (Some(_), None) => std::cmp::Ordering::Less,
                _ => std::cmp::Ordering::Greater,
            };
            match ord {
                std::cmp::Ordering::Less => {
                    raw = raw + a[i].1.clone();
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    raw = raw + b[j].1.clone();
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    raw = raw + (a[i].1.clone() - b[j].1.clone()).abs();
                    i += 1;
                    j += 1;
                }
            }
        }
        Ok(TvInterval::from_raw(
            raw,
            self.leaked.clone() + other.leaked.clone(),
        ))
    }

    /// Moves every atom lighter than `threshold` into the leak ledger.
    pub fn truncate(&self, threshold: &W) -> Self {
        let mut out = self.clone();
        out.truncate_in_place(threshold);
        out
    }

    pub fn truncate_in_place(&mut self, threshold: &W) {
        if threshold.is_zero() {
            return;
        }
        let mut leaked = self.leaked.clone();
        self.atoms.retain(|(_, w)| {
            if w < threshold {
                leaked = leaked.clone() + w.clone();
                false
            } else {
                true
            }
        });
        self.leaked = leaked;
    }

    /// Relabels atoms by `f` into a new fiber; colliding images are summed.
    pub fn map_keys<K2, T2>(&self, fiber: T2, f: impl Fn(&K) -> K2) -> SparseMeasure<K2, W, T2>
    where
        K2: Clone + Eq + Hash + Ord,
        T2: Clone + PartialEq + Display,
    {
        SparseMeasure::with_leak(
            fiber,
            self.atoms.iter().map(|(k, w)| (f(k), w.clone())),
            self.leaked.clone(),
        )
    }

    pub fn scale(&self, c: &W) -> Self {
        SparseMeasure {
            fiber: self.fiber.clone(),
            atoms: self
                .atoms
                .iter()
                .map(|(k, w)| (k.clone(), w.clone() * c.clone()))
                .filter(|(_, w)| !w.is_zero())
                .collect(),
            leaked: self.leaked.clone() * c.clone(),
        }
    }

    /// `Σ c_i μ_i` for measures on this fiber.
    pub fn combine(fiber: T, terms: &[(W, &Self)]) -> Result<Self> {
        let mut leaked = W::zero();
        for (c, m) in terms {
            if m.fiber != fiber {
                return Err(Error::FiberMismatch {
                    left: fiber.to_string(),
                    right: m.fiber.to_string(),
                });
            }
            leaked = leaked + c.clone() * m.leaked.clone();
        }
        let atoms = terms.iter().flat_map(|(c, m)| {
            m.atoms
                .iter()
                .map(move |(k, w)| (k.clone(), c.clone() * w.clone()))
        });
        Ok(Self::with_leak(fiber, atoms, leaked))
    }

    pub fn map_weights<W2: Weight>(&self, f: impl Fn(&W) -> W2) -> SparseMeasure<K, W2, T> {
        SparseMeasure::with_leak(
            self.fiber.clone(),
            self.atoms.iter().map(|(k, w)| (k.clone(), f(w))),
            f(&self.leaked),
        )
    }
}

impl<K: Display, W: Weight, T: Display> SparseMeasure<K, W, T> {
    /// Line format: `# fiber <tag>`, `# leaked <w>`, then `<key>\t<weight>` per atom.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "# fiber {}", self.fiber).unwrap();
        writeln!(out, "# leaked {}", self.leaked.to_text()).unwrap();
        for (k, w) in &self.atoms {
            writeln!(out, "{k}\t{}", w.to_text()).unwrap();
        }
        out
    }
}

impl<K, W, T> SparseMeasure<K, W, T>
where
    K: Clone + Eq + Hash + Ord,
    W: Weight,
    T: Clone + PartialEq + Display,
{
    pub fn from_text(
        text: &str,
        parse_fiber: impl Fn(&str) -> Result<T>,
        parse_key: impl Fn(&str) -> Result<K>,
    ) -> Result<Self> {
        let mut fiber = None;
        let mut leaked = W::zero();
        let mut atoms = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            if let Some(rest) = line.strip_prefix("# fiber ") {
                fiber = Some(parse_fiber(rest.trim())?);
            } else if let Some(rest) = line.strip_prefix("# leaked ") {
                leaked = W::from_text(rest)?;
            } else if line.starts_with('#') {
                continue;
            } else {
                let (k, w) = line.rsplit_once('\t').ok_or_else(|| {
                    Error::Parse(format!("atom line {line:?} needs a tab before the weight"))
                })?;
                let w = W::from_text(w)?;
                if w.is_negative() {
                    return Err(Error::Parse(format!("negative weight in {line:?}")));
                }
                atoms.push((parse_key(k)?, w));
            }
        }
        let fiber = fiber.ok_or_else(|| Error::Parse("missing '# fiber' header".into()))?;
        Ok(Self::with_leak(fiber, atoms, leaked))
    }
}

pub type FiberMeasure<G, W> = SparseMeasure<<G as Groupoid>::Morphism, W, <G as Groupoid>::Object>;

/// `γ·μ`: moves the atom `η ∈ G^{s(γ)}` to `γη ∈ G^{t(γ)}`.
pub fn pushforward<G: Groupoid, W: Weight>(
    groupoid: &G,
    gamma: &G::Morphism,
    mu: &FiberMeasure<G, W>,
) -> Result<FiberMeasure<G, W>> {
    let s = groupoid.source(gamma);
    if s != *mu.fiber() {
        return Err(Error::FiberMismatch {
            left: s.to_string(),
            right: mu.fiber().to_string(),
        });
    }
    // Left multiplication is injective, so no atoms merge.
    let mut atoms: Vec<_> = mu
        .atoms()
        .iter()
        .map(|(k, w)| (groupoid.compose_unchecked(gamma, k), w.clone()))
        .collect();
    atoms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
    Ok(SparseMeasure::from_sorted(
        groupoid.target(gamma),
        atoms,
        mu.leaked().clone(),
    ))
}

type Rule<G, W> = dyn Fn(&<G as Groupoid>::Object) -> FiberMeasure<G, W> + Send + Sync;

/// A rule `x ↦ θ^x`, a measure on the fiber `G^x`.
pub struct MeasureSystem<G: Groupoid, W> {
    rule: Arc<Rule<G, W>>,
}

impl<G: Groupoid, W> Clone for MeasureSystem<G, W> {
    fn clone(&self) -> Self {
        MeasureSystem {
            rule: Arc::clone(&self.rule),
        }
    }
}

impl<G: Groupoid, W> Debug for MeasureSystem<G, W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("MeasureSystem")
    }
}

impl<G: Groupoid, W: Weight> MeasureSystem<G, W> {
    pub fn new(rule: impl Fn(&G::Object) -> FiberMeasure<G, W> + Send + Sync + 'static) -> Self {
        MeasureSystem {
            rule: Arc::new(rule),
        }
    }

    /// `x ↦ δ_{ε_x}`.
    pub fn units(groupoid: &G) -> Self {
        let g = groupoid.clone();
        Self::new(move |x| SparseMeasure::dirac(x.clone(), g.unit(x)))
    }

    /// The same atoms at every object; for groups and other one-object groupoids.
    pub fn constant(_groupoid: &G, atoms: Vec<(G::Morphism, W)>) -> Self {
        Self::new(move |x| {
            SparseMeasure::from_atoms(x.clone(), atoms.iter().map(|(m, w)| (m.clone(), w.clone())))
        })
    }

    pub fn at(&self, x: &G::Object) -> FiberMeasure<G, W> {
        (self.rule)(x)
    }

    /// Checks that `θ^x` lives on `G^x` and has mass one up to its leak.
    pub fn validate_at(&self, groupoid: &G, x: &G::Object) -> Result<FiberMeasure<G, W>> {
        let m = self.at(x);
        for (k, _) in m.atoms() {
            if groupoid.target(k) != *x {
                return Err(Error::FiberViolation {
                    object: x.to_string(),
                    morphism: k.to_string(),
                });
            }
        }
        let total = m.mass_with_leak();
        let tol = if W::EXACT {
            W::zero()
        } else {
            W::from_ratio(1, 1_000_000_000)
        };
        if (total.clone() - W::one()).abs() > tol {
            return Err(Error::MassDeficit {
                object: x.to_string(),
                mass: total.to_text(),
            });
        }
        Ok(m)
    }
}

/// `(θ∗θ')^x = Σ_η θ^x(η) · η θ'^{s(η)}`.
pub fn convolve_systems<G: Groupoid, W: Weight>(
    groupoid: &G,
    first: &MeasureSystem<G, W>,
    second: &MeasureSystem<G, W>,
) -> MeasureSystem<G, W> {
    let (g, first, second) = (groupoid.clone(), first.clone(), second.clone());
    MeasureSystem::new(move |x| {
        let outer = first.at(x);
        let mut leaked = outer.leaked().clone();
        let mut items = Vec::new();
        for (eta, w) in outer.atoms() {
            let inner = second.at(&g.source(eta));
            leaked = leaked + w.clone() * inner.leaked().clone();
            items.extend(
                inner
                    .atoms()
                    .iter()
                    .map(|(z, v)| (g.compose_unchecked(eta, z), w.clone() * v.clone())),
            );
        }
        SparseMeasure::with_leak(x.clone(), items, leaked)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{FreeGroup, Group, Lattice};
    use crate::groupoid::{GroupGroupoid, Singleton};
    use crate::weight::{rational, Rational};

    type M = SparseMeasure<&'static str, f64, u8>;

    #[test]
    fn tv_examples() {
        let a = M::dirac(0, "a");
        let b = M::dirac(0, "b");
        let t = a.tv_distance(&b).unwrap();
        assert_eq!((t.lo, t.hi), (2.0, 2.0));
        let t = a.tv_distance(&a).unwrap();
        assert_eq!((t.lo, t.hi), (0.0, 0.0));
    }

    #[test]
    fn fiber_mismatch() {
        let a = SparseMeasure::<u8, f64, u8>::dirac(0, 1);
        let b = SparseMeasure::<u8, f64, u8>::dirac(1, 1);
        assert!(matches!(
            a.tv_distance(&b),
            Err(Error::FiberMismatch { .. })
        ));
    }

    #[test]
    fn truncation_moves_mass_to_ledger() {
        let m = M::from_atoms(0, [("e", 0.9), ("a", 0.1)]);
        let t = m.truncate(&0.2);
        assert_eq!(t.atoms(), &[("e", 0.9)]);
        assert_eq!(*t.leaked(), 0.1);
        assert_eq!(t.truncate(&0.2), t);
        assert_eq!(m.truncate(&0.0), m);
        // Leaks widen the TV bracket.
        let tv = t.tv_distance(&M::dirac(0, "e")).unwrap();
        assert!(tv.lo <= 0.1 + 1e-15 && tv.hi >= 0.2 - 1e-15);
    }

    #[test]
    fn pushforward_in_free_group() {
        let f = FreeGroup::new(2);
        let g = GroupGroupoid::new(f);
        let a = f.parse_elem("a").unwrap();
        let d: SparseMeasure<_, Rational, _> = SparseMeasure::dirac(Singleton, f.identity());
        let out = pushforward(&g, &a, &d).unwrap();
        assert_eq!(out.atoms(), &[(a, rational(1, 1))]);
        assert_eq!(pushforward(&g, &f.identity(), &d).unwrap(), d);
    }

    #[test]
    fn convolving_simple_walk_on_z() {
        let z = Lattice::new(1);
        let g = GroupGroupoid::new(z);
        let step = MeasureSystem::constant(
            &g,
            vec![
                (z.point(&[1]), rational(1, 2)),
                (z.point(&[-1]), rational(1, 2)),
            ],
        );
        let two = convolve_systems(&g, &step, &step).at(&Singleton);
        assert_eq!(
            two.atoms(),
            &[
                (z.point(&[-2]), rational(1, 4)),
                (z.point(&[0]), rational(1, 2)),
                (z.point(&[2]), rational(1, 4))
            ]
        );
        let id = convolve_systems(&g, &MeasureSystem::units(&g), &step).at(&Singleton);
        assert_eq!(id, step.at(&Singleton));
    }

    #[test]
    fn text_round_trip() {
        let z = Lattice::new(2);
        let m: SparseMeasure<_, Rational, _> = SparseMeasure::with_leak(
            Singleton,
            [
                (z.point(&[1, 0]), rational(1, 3)),
                (z.point(&[0, -1]), rational(1, 2)),
            ],
            rational(1, 6),
        );
        let text = m.to_text();
        assert!(text.starts_with("# fiber *\n# leaked 1/6\n"));
        let back = SparseMeasure::from_text(&text, |_| Ok(Singleton), |s| z.parse_elem(s)).unwrap();
        assert_eq!(back, m);
    }
}
