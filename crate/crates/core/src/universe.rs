//! Finite universes, densities, codensities and set operations on realized
//! subsets.
//!
//! Elements of a universe of size `n` are the integers `0..n`. A labeled
//! ground set is brought into this form once with a [`Labeling`].

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

use crate::error::{domain, Result};

/// Slack allowed when checking that a real density lies in `[0, 1]`.
pub const DENSITY_SLACK: f64 = 1e-12;

/// Number of elements of a finite universe; always at least 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UniverseSize(u64);

impl UniverseSize {
    pub fn new(n: u64) -> Result<Self> {
        if n < 2 {
            return domain(format!("universe size must be at least 2, got {n}"));
        }
        Ok(Self(n))
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn ln(self) -> f64 {
        (self.0 as f64).ln()
    }
}

impl fmt::Display for UniverseSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A density value in `{-∞} ∪ [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub enum Density {
    /// Density of the empty set.
    NegInfinity,
    Finite(f64),
}

impl Density {
    /// Builds a finite density, clamping values within [`DENSITY_SLACK`] of
    /// the unit interval.
    pub fn finite(value: f64) -> Result<Self> {
        if !value.is_finite() || !(-DENSITY_SLACK..=1.0 + DENSITY_SLACK).contains(&value) {
            return domain(format!("density {value} is outside [0, 1]"));
        }
        Ok(Density::Finite(value.clamp(0.0, 1.0)))
    }

    pub fn is_neg_infinity(self) -> bool {
        matches!(self, Density::NegInfinity)
    }

    /// The finite value, or `None` for `-∞`.
    pub fn value(self) -> Option<f64> {
        match self {
            Density::NegInfinity => None,
            Density::Finite(v) => Some(v),
        }
    }

    /// The value as an `f64`, mapping `-∞` to `f64::NEG_INFINITY`.
    pub fn as_f64(self) -> f64 {
        self.value().unwrap_or(f64::NEG_INFINITY)
    }

    /// Compares with a caller-supplied tolerance; `-∞` only equals `-∞`.
    pub fn approx_eq(self, other: Density, tol: f64) -> bool {
        match (self, other) {
            (Density::NegInfinity, Density::NegInfinity) => true,
            (Density::Finite(a), Density::Finite(b)) => (a - b).abs() <= tol,
            _ => false,
        }
    }
}

impl fmt::Display for Density {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Density::NegInfinity => f.write_str("-inf"),
            Density::Finite(v) => v.fmt(f),
        }
    }
}

/// `log_n(cardinality)`, with the empty set mapped to `-∞`.
pub fn density_of(cardinality: u64, universe: UniverseSize) -> Result<Density> {
    let n = universe.get();
    if cardinality > n {
        return domain(format!("cardinality {cardinality} exceeds universe size {n}"));
    }
    if cardinality == 0 {
        return Ok(Density::NegInfinity);
    }
    if cardinality == n {
        return Ok(Density::Finite(1.0));
    }
    Density::finite((cardinality as f64).ln() / universe.ln())
}

/// `1 - d`; undefined for `-∞`.
pub fn codensity(d: Density) -> Result<Density> {
    match d {
        Density::NegInfinity => domain("codensity of density -inf is undefined"),
        Density::Finite(v) => Density::finite(1.0 - v),
    }
}

/// `⌊n^d⌋` for `d ∈ [0, 1]`, robust to `powf` landing just below an integer.
pub fn floor_pow(n: u64, d: f64) -> u64 {
    if d >= 1.0 {
        return n;
    }
    if d <= 0.0 {
        return 1;
    }
    let x = (n as f64).powf(d);
    let r = x.round();
    let k = if (x - r).abs() <= 1e-9 * r.max(1.0) { r } else { x.floor() };
    (k as u64).min(n)
}

/// An immutable realized subset of `{0..n-1}` with strictly increasing ids.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubsetSample {
    universe: UniverseSize,
    members: Vec<u64>,
}

impl SubsetSample {
    /// Builds a subset from arbitrary ids; duplicates are merged.
    pub fn new(universe: UniverseSize, mut members: Vec<u64>) -> Result<Self> {
        members.sort_unstable();
        members.dedup();
        if let Some(&last) = members.last() {
            if last >= universe.get() {
                return domain(format!("element {last} outside universe of size {universe}"));
            }
        }
        Ok(Self { universe, members })
    }

    /// Caller guarantees the ids are strictly increasing and `< n`.
    pub(crate) fn from_sorted(universe: UniverseSize, members: Vec<u64>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(members.last().is_none_or(|&x| x < universe.get()));
        Self { universe, members }
    }

    pub fn empty(universe: UniverseSize) -> Self {
        Self { universe, members: Vec::new() }
    }

    pub fn full(universe: UniverseSize) -> Self {
        Self { universe, members: (0..universe.get()).collect() }
    }

    pub fn universe(&self) -> UniverseSize {
        self.universe
    }

    pub fn members(&self) -> &[u64] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: u64) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    pub fn density(&self) -> Density {
        density_of(self.members.len() as u64, self.universe).expect("subset cardinality never exceeds its universe")
    }

    fn check_same_universe(&self, other: &SubsetSample) -> Result<()> {
        if self.universe != other.universe {
            return domain(format!("universe mismatch: {} vs {}", self.universe, other.universe));
        }
        Ok(())
    }

    pub fn intersect(&self, other: &SubsetSample) -> Result<SubsetSample> {
        self.check_same_universe(other)?;
        let (a, b) = (&self.members, &other.members);
        let mut out = Vec::with_capacity(a.len().min(b.len()));
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    out.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        Ok(Self::from_sorted(self.universe, out))
    }

    /// `|self ∩ other|` without materializing the intersection.
    pub fn intersection_len(&self, other: &SubsetSample) -> Result<usize> {
        self.check_same_universe(other)?;
        let (a, b) = (&self.members, &other.members);
        let (mut i, mut j, mut count) = (0, 0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    count += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        Ok(count)
    }

    pub fn union(&self, other: &SubsetSample) -> Result<SubsetSample> {
        self.check_same_universe(other)?;
        let (a, b) = (&self.members, &other.members);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Ok(Self::from_sorted(self.universe, out))
    }

    pub fn complement(&self) -> SubsetSample {
        let n = self.universe.get();
        let mut out = Vec::with_capacity((n as usize).saturating_sub(self.members.len()));
        let mut next = 0u64;
        for &x in &self.members {
            out.extend(next..x);
            next = x + 1;
        }
        out.extend(next..n);
        Self::from_sorted(self.universe, out)
    }
}

/// A bijection between arbitrary labels and the canonical ids `0..n`.
#[derive(Debug, Clone)]
pub struct Labeling<T: Hash + Eq + Clone> {
    labels: Vec<T>,
    index: HashMap<T, u64>,
}

impl<T: Hash + Eq + Clone> Labeling<T> {
    pub fn new(labels: Vec<T>) -> Result<Self> {
        let mut index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i as u64).is_some() {
                return domain("duplicate label in universe");
            }
        }
        UniverseSize::new(labels.len() as u64)?;
        Ok(Self { labels, index })
    }

    pub fn universe(&self) -> UniverseSize {
        UniverseSize(self.labels.len() as u64)
    }

    pub fn id(&self, label: &T) -> Option<u64> {
        self.index.get(label).copied()
    }

    pub fn label(&self, id: u64) -> Option<&T> {
        self.labels.get(id as usize)
    }

    pub fn subset<'a>(&self, items: impl IntoIterator<Item = &'a T>) -> Result<SubsetSample>
    where
        T: 'a,
    {
        let ids = items
            .into_iter()
            .map(|l| self.id(l).ok_or_else(|| crate::Error::Domain("unknown label".into())))
            .collect::<Result<Vec<_>>>()?;
        SubsetSample::new(self.universe(), ids)
    }
}
