//! Random subset models: Bernoulli, uniform `k`-subsets, general
//! permutation-invariant laws and images of uniform random functions.
//!
//! All samplers are pure functions of their parameters and a [`SeedSpec`].

use std::collections::HashSet;

use crate::error::{domain, Result};
use crate::rng::{SeedSpec, StreamRng};
use crate::universe::{SubsetSample, UniverseSize};

/// Tolerance on the total mass of an explicit cardinality law.
pub const LAW_MASS_TOLERANCE: f64 = 1e-9;

/// Law of `|A|` for a permutation-invariant random subset. Together with
/// conditional uniformity given `|A| = k` it determines the model.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum CardinalityLaw {
    PointMass {
        k: u64,
    },
    Binomial {
        n: u64,
        p: f64,
    },
    /// `weights[k] = Pr(|A| = k)`; missing tail entries are zero.
    ExplicitVector {
        weights: Vec<f64>,
    },
}

impl CardinalityLaw {
    pub fn validate(&self, universe: UniverseSize) -> Result<()> {
        let n = universe.get();
        match self {
            CardinalityLaw::PointMass { k } if *k > n => domain(format!("point mass at {k} exceeds universe size {n}")),
            CardinalityLaw::PointMass { .. } => Ok(()),
            CardinalityLaw::Binomial { n: bn, p } => {
                if *bn != n {
                    return domain(format!("binomial law over {bn} trials on universe of size {n}"));
                }
                if !(0.0..=1.0).contains(p) {
                    return domain(format!("binomial parameter {p} outside [0, 1]"));
                }
                Ok(())
            }
            CardinalityLaw::ExplicitVector { weights } => {
                if weights.len() as u64 > n + 1 {
                    return domain("explicit law has support beyond the universe size");
                }
                if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
                    return domain("explicit law has a negative or non-finite weight");
                }
                let total: f64 = weights.iter().sum();
                if (total - 1.0).abs() > LAW_MASS_TOLERANCE {
                    return domain(format!("explicit law weights sum to {total}, not 1"));
                }
                Ok(())
            }
        }
    }

    /// `E|A|`.
    pub fn mean(&self) -> f64 {
        match self {
            CardinalityLaw::PointMass { k } => *k as f64,
            CardinalityLaw::Binomial { n, p } => *n as f64 * p,
            CardinalityLaw::ExplicitVector { weights } => weights.iter().enumerate().map(|(k, w)| k as f64 * w).sum(),
        }
    }

    fn draw(&self, rng: &mut StreamRng) -> u64 {
        match self {
            CardinalityLaw::PointMass { k } => *k,
            CardinalityLaw::Binomial { n, p } => binomial(rng, *n, *p),
            CardinalityLaw::ExplicitVector { weights } => {
                let u = rng.unit_f64() * weights.iter().sum::<f64>();
                let mut acc = 0.0;
                let mut last_positive = 0;
                for (k, &w) in weights.iter().enumerate() {
                    if w > 0.0 {
                        last_positive = k;
                    }
                    acc += w;
                    if u < acc && w > 0.0 {
                        return k as u64;
                    }
                }
                last_positive as u64
            }
        }
    }
}

/// Bernoulli sampling: each element independently with probability `n^{d-1}`.
///
/// Runs in time proportional to the output by skipping geometric gaps
/// between successes.
pub fn sample_bernoulli(n: UniverseSize, d: f64, seed: SeedSpec) -> Result<SubsetSample> {
    if d.is_nan() || d > 1.0 {
        return domain(format!("Bernoulli density {d} must be at most 1"));
    }
    let p = if d == 1.0 { 1.0 } else { (n.get() as f64).powf(d - 1.0) };
    let mut rng = seed.rng();
    Ok(SubsetSample::from_sorted(n, bernoulli_members(&mut rng, n.get(), p)))
}

pub(crate) fn bernoulli_members(rng: &mut StreamRng, n: u64, p: f64) -> Vec<u64> {
    if p >= 1.0 {
        return (0..n).collect();
    }
    if p <= 0.0 {
        return Vec::new();
    }
    let expected = (n as f64 * p).ceil() as usize;
    let mut out = Vec::with_capacity(expected + 4 * (expected as f64).sqrt() as usize + 4);
    if p > 0.25 {
        for x in 0..n {
            if rng.unit_f64() < p {
                out.push(x);
            }
        }
        return out;
    }
    // gap ~ Geometric(p) on {0, 1, ...}: floor(ln U / ln(1-p))
    let log_q = (-p).ln_1p();
    let mut pos: u64 = 0;
    loop {
        let gap = (rng.unit_open_f64().ln() / log_q).floor();
        if !gap.is_finite() || gap >= (n - pos) as f64 {
            break;
        }
        pos += gap as u64;
        out.push(pos);
        pos += 1;
        if pos >= n {
            break;
        }
    }
    out
}

/// Uniform `k`-subset of `{0..n-1}`; every `k`-subset has probability
/// `C(n, k)^{-1}`.
pub fn sample_uniform(n: UniverseSize, k: u64, seed: SeedSpec) -> Result<SubsetSample> {
    if k > n.get() {
        return domain(format!("cannot draw {k} elements from a universe of size {n}"));
    }
    let mut rng = seed.rng();
    Ok(SubsetSample::from_sorted(n, uniform_members(&mut rng, n.get(), k)))
}

/// Floyd's selection of `k` distinct values in `0..n`, returned sorted.
/// For `k > n/2` the complement is selected instead.
pub(crate) fn uniform_members(rng: &mut StreamRng, n: u64, k: u64) -> Vec<u64> {
    if k == 0 {
        return Vec::new();
    }
    if k == n {
        return (0..n).collect();
    }
    if k > n / 2 {
        let excluded = floyd(rng, n, n - k);
        let mut out = Vec::with_capacity(k as usize);
        let mut next = 0;
        for x in excluded {
            out.extend(next..x);
            next = x + 1;
        }
        out.extend(next..n);
        return out;
    }
    floyd(rng, n, k)
}

fn floyd(rng: &mut StreamRng, n: u64, k: u64) -> Vec<u64> {
    let mut chosen: HashSet<u64> = HashSet::with_capacity(k as usize * 2);
    for j in (n - k)..n {
        let t = rng.below(j + 1);
        if !chosen.insert(t) {
            chosen.insert(j);
        }
    }
    let mut out: Vec<u64> = chosen.into_iter().collect();
    out.sort_unstable();
    out
}

/// Draws `K` from `law`, then a uniform `K`-subset.
pub fn sample_perm_invariant(n: UniverseSize, law: &CardinalityLaw, seed: SeedSpec) -> Result<SubsetSample> {
    law.validate(n)?;
    let mut rng = seed.rng();
    let k = law.draw(&mut rng).min(n.get());
    Ok(SubsetSample::from_sorted(n, uniform_members(&mut rng, n.get(), k)))
}

/// Image of a uniform random function from a set of size `domain_size` to
/// `{0..n-1}`.
pub fn sample_function_image(domain_size: u64, n: UniverseSize, seed: SeedSpec) -> Result<SubsetSample> {
    if domain_size == 0 {
        return domain("random function needs a non-empty domain");
    }
    let mut rng = seed.rng();
    let mut values: Vec<u64> = (0..domain_size).map(|_| rng.below(n.get())).collect();
    values.sort_unstable();
    values.dedup();
    Ok(SubsetSample::from_sorted(n, values))
}

/// Binomial(n, p) variate: inversion when `n·min(p, 1-p) < 30`, otherwise
/// Hörmann's BTRD transformed rejection.
pub fn binomial(rng: &mut StreamRng, n: u64, p: f64) -> u64 {
    if n == 0 || p <= 0.0 {
        return 0;
    }
    if p >= 1.0 {
        return n;
    }
    let flipped = p > 0.5;
    let q = if flipped { 1.0 - p } else { p };
    let k = if (n as f64) * q < 30.0 { binomial_inversion(rng, n, q) } else { binomial_btrd(rng, n, q) };
    if flipped {
        n - k
    } else {
        k
    }
}

fn binomial_inversion(rng: &mut StreamRng, n: u64, p: f64) -> u64 {
    let q = 1.0 - p;
    let s = p / q;
    let a = (n as f64 + 1.0) * s;
    'outer: loop {
        let mut r = q.powf(n as f64);
        let mut u = rng.unit_f64();
        let mut x = 0u64;
        while u > r {
            u -= r;
            x += 1;
            if x > n {
                continue 'outer;
            }
            r *= a / x as f64 - s;
        }
        return x;
    }
}

/// Stirling-series remainder `ln k! - [(k+1/2) ln(k+1) - (k+1) + ln √(2π)]`.
fn stirling_tail(k: u64) -> f64 {
    const TABLE: [f64; 10] = [
        0.081_061_466_795_327_26,
        0.041_340_695_955_409_29,
        0.027_677_925_684_998_34,
        0.020_790_672_103_765_09,
        0.016_644_691_189_821_19,
        0.013_876_128_823_070_75,
        0.011_896_709_945_891_77,
        0.010_411_265_261_972_09,
        0.009_255_462_182_712_733,
        0.008_330_563_433_362_87,
    ];
    if k < 10 {
        return TABLE[k as usize];
    }
    let kp1 = k as f64 + 1.0;
    let kp1sq = kp1 * kp1;
    (1.0 / 12.0 - (1.0 / 360.0 - 1.0 / 1260.0 / kp1sq) / kp1sq) / kp1
}

fn binomial_btrd(rng: &mut StreamRng, n: u64, p: f64) -> u64 {
    let nf = n as f64;
    let q = 1.0 - p;
    let npq = nf * p * q;
    let spq = npq.sqrt();
    let b = 1.15 + 2.53 * spq;
    let a = -0.0873 + 0.0248 * b + 0.01 * p;
    let c = nf * p + 0.5;
    let alpha = (2.83 + 5.1 / b) * spq;
    let v_r = 0.92 - 4.2 / b;
    let u_rv_r = 0.86 * v_r;
    let m = ((nf + 1.0) * p).floor();
    let r = p / q;
    let nr = (nf + 1.0) * r;

    loop {
        let mut v = rng.unit_f64();
        let u;
        if v <= u_rv_r {
            let uu = v / v_r - 0.43;
            let k = ((2.0 * a / (0.5 - uu.abs()) + b) * uu + c).floor();
            if k >= 0.0 && k <= nf {
                return k as u64;
            }
            continue;
        }
        if v >= v_r {
            u = rng.unit_f64() - 0.5;
        } else {
            let uu = v / v_r - 0.93;
            u = 0.5f64.copysign(uu) - uu;
            v = rng.unit_f64() * v_r;
        }
        let us = 0.5 - u.abs();
        let kf = ((2.0 * a / us + b) * u + c).floor();
        if kf < 0.0 || kf > nf {
            continue;
        }
        v *= alpha / (a / (us * us) + b);
        let km = (kf - m).abs();
        if km <= 15.0 {
            // product of successive pmf ratios f(k)/f(m)
            let mut f = 1.0;
            if m < kf {
                let mut i = m;
                while i < kf {
                    i += 1.0;
                    f *= nr / i - r;
                }
            } else if m > kf {
                let mut i = kf;
                while i < m {
                    i += 1.0;
                    v *= nr / i - r;
                }
            }
            if v <= f {
                return kf as u64;
            }
            continue;
        }
        let v_ln = v.ln();
        let rho = (km / npq) * (((km / 3.0 + 0.625) * km + 1.0 / 6.0) / npq + 0.5);
        let t = -km * km / (2.0 * npq);
        if v_ln < t - rho {
            return kf as u64;
        }
        if v_ln > t + rho {
            continue;
        }
        let nm = nf - m + 1.0;
        let h = (m + 0.5) * ((m + 1.0) / (r * nm)).ln() + stirling_tail(m as u64) + stirling_tail(n - m as u64);
        let nk = nf - kf + 1.0;
        let bound = h + (nf + 1.0) * (nm / nk).ln() + (kf + 0.5) * (nk * r / (kf + 1.0)).ln()
            - stirling_tail(kf as u64)
            - stirling_tail(n - kf as u64);
        if v_ln <= bound {
            return kf as u64;
        }
    }
}
