//! Tuple universes `E^{(k)}` of `k`-tuples with pairwise-distinct entries,
//! self-intersection profiles of fixed tuple sets, and the small
//! self-intersection condition.
//!
//! Two tuples intersect in the number of element values they share, so
//! `(a, b)` and `(b, a)` share 2 entries.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::rng::SeedSpec;
use crate::samplers::uniform_members;
use crate::universe::{SubsetSample, UniverseSize};

/// Largest tuple set kept in memory.
pub const MAX_EXPLICIT_TUPLES: u64 = 10_000_000;

/// `n (n-1) .. (n-k+1)`, or `None` on `u128` overflow.
pub fn falling_factorial(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    (0..k).try_fold(1u128, |acc, i| acc.checked_mul((n - i) as u128))
}

fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// `|E^{(k)}|` for a universe of size `n`.
pub fn tuple_universe_size(n: UniverseSize, k: usize) -> Result<u128> {
    falling_factorial(n.get(), k as u64)
        .ok_or_else(|| Error::Overflow(format!("|E^({k})| for n = {n} exceeds 128 bits")))
}

/// `|A^{(k)}| = |a| (|a|-1) .. (|a|-k+1)`.
pub fn induced_tuple_count(a: &SubsetSample, k: usize) -> u128 {
    falling_factorial(a.len() as u64, k as u64).unwrap_or(u128::MAX)
}

/// An explicit set of `k`-tuples of pairwise-distinct elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TupleSet {
    universe: UniverseSize,
    k: usize,
    /// Row-major, lexicographically sorted, no repeated rows.
    flat: Vec<u64>,
}

impl TupleSet {
    pub fn new(universe: UniverseSize, k: usize, tuples: Vec<Vec<u64>>) -> Result<Self> {
        if k == 0 {
            return domain("tuple arity must be at least 1");
        }
        let mut rows = Vec::with_capacity(tuples.len());
        for t in tuples {
            if t.len() != k {
                return domain(format!("tuple {t:?} does not have arity {k}"));
            }
            if let Some(&x) = t.iter().find(|&&x| x >= universe.get()) {
                return domain(format!("element {x} outside universe of size {universe}"));
            }
            let mut sorted = t.clone();
            sorted.sort_unstable();
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return domain(format!("tuple {t:?} repeats an entry"));
            }
            rows.push(t);
        }
        rows.sort_unstable();
        rows.dedup();
        Ok(Self { universe, k, flat: rows.concat() })
    }

    /// All of `E^{(k)}`.
    pub fn full(universe: UniverseSize, k: usize) -> Result<Self> {
        let size = tuple_universe_size(universe, k)?;
        if size > MAX_EXPLICIT_TUPLES as u128 {
            return domain(format!("|E^({k})| = {size} is too large to materialize"));
        }
        let flat = (0..size as u64).flat_map(|i| decode_tuple(universe.get(), k, i)).collect();
        Ok(Self { universe, k, flat })
    }

    /// A uniformly random subset of `E^{(k)}` of size `⌊|E^{(k)}|^alpha⌋`.
    pub fn random_fixed(universe: UniverseSize, k: usize, alpha: f64, seed: SeedSpec) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return domain(format!("tuple density {alpha} outside [0, 1]"));
        }
        if k == 0 {
            return domain("tuple arity must be at least 1");
        }
        let total = tuple_universe_size(universe, k)?;
        let total =
            u64::try_from(total).map_err(|_| Error::Overflow(format!("|E^({k})| = {total} exceeds 64 bits")))?;
        let size = crate::universe::floor_pow(total, alpha);
        if size > MAX_EXPLICIT_TUPLES {
            return domain(format!("{size} tuples is too many to materialize"));
        }
        let mut rng = seed.rng();
        let flat = uniform_members(&mut rng, total, size)
            .into_iter()
            .flat_map(|i| decode_tuple(universe.get(), k, i))
            .collect();
        Ok(Self { universe, k, flat })
    }

    pub fn universe(&self) -> UniverseSize {
        self.universe
    }

    pub fn arity(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.flat.len() / self.k
    }

    pub fn is_empty(&self) -> bool {
        self.flat.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u64]> + '_ {
        self.flat.chunks_exact(self.k)
    }
}

/// Decodes `index ∈ [0, |E^{(k)}|)` to a tuple; the map is a bijection and
/// preserves lexicographic order.
pub fn decode_tuple(n: u64, k: usize, mut index: u64) -> Vec<u64> {
    let mut digits = vec![0u64; k];
    for j in (0..k).rev() {
        let radix = n - j as u64;
        digits[j] = index % radix;
        index /= radix;
    }
    let mut used: Vec<u64> = Vec::with_capacity(k);
    let mut out = Vec::with_capacity(k);
    for c in digits {
        let mut v = c;
        for &u in &used {
            if u <= v {
                v += 1;
            }
        }
        out.push(v);
        let pos = used.partition_point(|&u| u < v);
        used.insert(pos, v);
    }
    out
}

/// Sizes `|Y_0|, .., |Y_k|` where `Y_i` holds the ordered pairs of tuples
/// sharing exactly `i` entries.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelfIntersectionProfile {
    k: usize,
    sizes: Vec<u128>,
}

impl SelfIntersectionProfile {
    pub fn from_sizes(k: usize, sizes: Vec<u128>) -> Self {
        Self { k, sizes }
    }

    pub fn arity(&self) -> usize {
        self.k
    }

    pub fn sizes(&self) -> &[u128] {
        &self.sizes
    }

    /// `Σ|Y_i| = |X|²` and `|Y_k| ≥ |X|` (the diagonal lies in `Y_k`).
    pub fn check_consistent(&self, size_x: u64, k: usize) -> Result<()> {
        if self.k != k || self.sizes.len() != k + 1 {
            return domain(format!("profile has arity {} but {k} was expected", self.k));
        }
        let total = self.sizes.iter().try_fold(0u128, |acc, &y| acc.checked_add(y));
        let sq = size_x as u128 * size_x as u128;
        if total != Some(sq) {
            return domain(format!("profile sums to {total:?}, expected |X|² = {sq}"));
        }
        if self.sizes[k] < size_x as u128 {
            return domain(format!("|Y_{k}| = {} is below |X| = {size_x}", self.sizes[k]));
        }
        Ok(())
    }
}

/// Profile of an explicit tuple set in `O(|X| 2^k)` hash operations.
///
/// With `deg(S)` the number of tuples whose entry set contains `S`,
/// `M_j = Σ_{|S|=j} deg(S)² = Σ_{i≥j} C(i, j) |Y_i|`, which is solved from
/// `i = k` downwards.
pub fn self_intersection_profile(x: &TupleSet) -> SelfIntersectionProfile {
    let k = x.arity();
    let mut deg: HashMap<Vec<u64>, u64> = HashMap::with_capacity(x.len() * ((1 << k) - 1));
    let mut sorted = vec![0u64; k];
    for t in x.iter() {
        sorted.copy_from_slice(t);
        sorted.sort_unstable();
        for mask in 1u32..(1 << k) {
            let key: Vec<u64> = (0..k).filter(|&b| mask & (1 << b) != 0).map(|b| sorted[b]).collect();
            *deg.entry(key).or_insert(0) += 1;
        }
    }
    let mut m = vec![0u128; k + 1];
    for (key, d) in &deg {
        m[key.len()] += *d as u128 * *d as u128;
    }
    let mut sizes = vec![0u128; k + 1];
    for j in (1..=k).rev() {
        let higher: u128 = (j + 1..=k).map(|i| binomial(i as u64, j as u64) * sizes[i]).sum();
        sizes[j] = m[j] - higher;
    }
    let n = x.len() as u128;
    sizes[0] = n * n - sizes[1..].iter().sum::<u128>();
    SelfIntersectionProfile { k, sizes }
}

/// Finite-`n` evaluation of the small self-intersection condition.
#[derive(Debug, Clone, Serialize)]
pub struct SmallSelfIntersectionReport {
    pub d: f64,
    pub alpha: f64,
    /// `dens Y_i` over `|E^{(k)}|²` for `i = 1..k-1`; `None` for empty classes.
    pub dens_y: Vec<Option<f64>>,
    /// `α + (d-1) i/(2k) - dens Y_i` for `i = 1..k-1`; `+∞` for empty classes.
    pub per_i_margin: Vec<f64>,
    pub epsilon0: f64,
    pub holds: bool,
}

pub fn small_self_intersection_check(
    profile: &SelfIntersectionProfile,
    size_x: u64,
    n: UniverseSize,
    k: usize,
    d: f64,
) -> Result<SmallSelfIntersectionReport> {
    if !(d > 0.0 && d < 1.0) {
        return domain(format!("density {d} must lie in (0, 1)"));
    }
    if size_x == 0 {
        return domain("tuple set must be nonempty");
    }
    profile.check_consistent(size_x, k)?;
    let ln_universe: f64 = (0..k as u64).map(|i| ((n.get() - i) as f64).ln()).sum();
    if ln_universe.is_nan() || ln_universe <= 0.0 {
        return domain(format!("|E^({k})| must exceed 1"));
    }
    let alpha = (size_x as f64).ln() / ln_universe;
    let mut dens_y = Vec::with_capacity(k.saturating_sub(1));
    let mut per_i_margin = Vec::with_capacity(k.saturating_sub(1));
    for i in 1..k {
        let y = profile.sizes()[i];
        if y == 0 {
            dens_y.push(None);
            per_i_margin.push(f64::INFINITY);
        } else {
            let dy = (y as f64).ln() / (2.0 * ln_universe);
            dens_y.push(Some(dy));
            per_i_margin.push(alpha + (d - 1.0) * i as f64 / (2.0 * k as f64) - dy);
        }
    }
    let epsilon0 = per_i_margin.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(SmallSelfIntersectionReport { d, alpha, dens_y, per_i_margin, epsilon0, holds: epsilon0 > 0.0 })
}

/// `|A^{(k)} ∩ X|`: the tuples of `X` whose entries all lie in `a`.
pub fn intersect_tuples(a: &SubsetSample, x: &TupleSet) -> Result<u64> {
    Ok(intersect_tuples_with_witnesses(a, x, 0)?.0)
}

/// Like [`intersect_tuples`], also returning up to `limit` matching tuples.
pub fn intersect_tuples_with_witnesses(a: &SubsetSample, x: &TupleSet, limit: usize) -> Result<(u64, Vec<Vec<u64>>)> {
    if a.universe() != x.universe() {
        return domain("subset and tuple set live in different universes");
    }
    let mut member = vec![false; a.universe().get() as usize];
    for &e in a.members() {
        member[e as usize] = true;
    }
    let mut count = 0;
    let mut witnesses = Vec::new();
    for t in x.iter() {
        if t.iter().all(|&e| member[e as usize]) {
            count += 1;
            if witnesses.len() < limit {
                witnesses.push(t.to_vec());
            }
        }
    }
    Ok((count, witnesses))
}

/// A named way to build a fixed tuple set for a given universe.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum TupleFamily {
    /// All of `E^{(k)}`.
    Full {
        k: usize,
    },
    /// `{center} × (E \ {center})`.
    Star {
        #[serde(default)]
        center: u64,
    },
    /// Uniform subset of `E^{(k)}` with density `alpha`, fixed by `seed`.
    RandomFixed {
        k: usize,
        alpha: f64,
        seed: u64,
    },
    Explicit {
        k: usize,
        tuples: Vec<Vec<u64>>,
    },
}

impl TupleFamily {
    pub fn arity(&self) -> usize {
        match self {
            TupleFamily::Full { k } | TupleFamily::RandomFixed { k, .. } | TupleFamily::Explicit { k, .. } => *k,
            TupleFamily::Star { .. } => 2,
        }
    }

    pub fn build(&self, n: UniverseSize) -> Result<FixedTuples> {
        match self {
            TupleFamily::Full { k } => {
                if *k == 0 || *k as u64 > n.get() {
                    return domain(format!("arity {k} must lie in [1, {n}]"));
                }
                tuple_universe_size(n, *k)?;
                Ok(FixedTuples::Full { universe: n, k: *k })
            }
            TupleFamily::Star { center } => {
                if *center >= n.get() {
                    return domain(format!("star center {center} outside universe of size {n}"));
                }
                Ok(FixedTuples::Star { universe: n, center: *center })
            }
            TupleFamily::RandomFixed { k, alpha, seed } => {
                Ok(FixedTuples::Explicit(TupleSet::random_fixed(n, *k, *alpha, SeedSpec::new(*seed, 0))?))
            }
            TupleFamily::Explicit { k, tuples } => Ok(FixedTuples::Explicit(TupleSet::new(n, *k, tuples.clone())?)),
        }
    }
}

/// A fixed tuple set, stored explicitly or described by a formula.
#[derive(Debug, Clone)]
pub enum FixedTuples {
    Full { universe: UniverseSize, k: usize },
    Star { universe: UniverseSize, center: u64 },
    Explicit(TupleSet),
}

impl FixedTuples {
    pub fn universe(&self) -> UniverseSize {
        match self {
            FixedTuples::Full { universe, .. } | FixedTuples::Star { universe, .. } => *universe,
            FixedTuples::Explicit(x) => x.universe(),
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            FixedTuples::Full { k, .. } => *k,
            FixedTuples::Star { .. } => 2,
            FixedTuples::Explicit(x) => x.arity(),
        }
    }

    pub fn len(&self) -> u128 {
        match self {
            FixedTuples::Full { universe, k } => falling_factorial(universe.get(), *k as u64).unwrap_or(u128::MAX),
            FixedTuples::Star { universe, .. } => (universe.get() - 1) as u128,
            FixedTuples::Explicit(x) => x.len() as u128,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn profile(&self) -> Result<SelfIntersectionProfile> {
        match self {
            FixedTuples::Full { universe, k } => {
                let n = universe.get();
                let kk = *k as u64;
                let size = self.len();
                let orderings = falling_factorial(kk, kk).unwrap_or(1);
                let sizes = (0..=kk)
                    .map(|i| {
                        size.checked_mul(binomial(kk, i))
                            .and_then(|v| v.checked_mul(binomial(n - kk, kk - i)))
                            .and_then(|v| v.checked_mul(orderings))
                            .ok_or_else(|| Error::Overflow("full profile exceeds 128 bits".into()))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(SelfIntersectionProfile { k: *k, sizes })
            }
            FixedTuples::Star { universe, .. } => {
                let m = (universe.get() - 1) as u128;
                Ok(SelfIntersectionProfile { k: 2, sizes: vec![0, m * (m - 1), m] })
            }
            FixedTuples::Explicit(x) => Ok(self_intersection_profile(x)),
        }
    }

    /// `|A^{(k)} ∩ X|`.
    pub fn intersect(&self, a: &SubsetSample) -> Result<u128> {
        if a.universe() != self.universe() {
            return domain("subset and tuple set live in different universes");
        }
        match self {
            FixedTuples::Full { k, .. } => Ok(induced_tuple_count(a, *k)),
            FixedTuples::Star { center, .. } => Ok(if a.contains(*center) { (a.len() - 1) as u128 } else { 0 }),
            FixedTuples::Explicit(x) => Ok(intersect_tuples(a, x)? as u128),
        }
    }
}
