//! Closed-form means and variances of intersection sizes, plus evaluators for
//! the finite-`n` concentration bounds that accompany them.
//!
//! Floating-point versions live at the top level; [`exact`] recomputes the
//! same quantities in rational arithmetic for small universes.

use serde::Serialize;

use crate::error::{domain, Result};
use crate::multidim::SelfIntersectionProfile;
use crate::universe::{floor_pow, UniverseSize};

/// Above this many factors inclusion probabilities are accumulated in log space.
pub const LOG_SPACE_CUTOFF: u64 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentPair {
    pub mean: f64,
    pub variance: f64,
}

impl MomentPair {
    fn new(mean: f64, variance: f64) -> Self {
        // cancellation can leave a tiny negative residue
        Self { mean, variance: variance.max(0.0) }
    }

    pub fn std_dev(&self) -> f64 {
        self.variance.sqrt()
    }
}

/// `Pr({x_1..x_r} ⊂ A)` for a uniform `k`-subset `A` of an `n`-set:
/// the falling-factorial ratio `k(k-1)..(k-r+1) / n(n-1)..(n-r+1)`.
pub fn uniform_inclusion_prob(n: UniverseSize, k: u64, r: u64) -> Result<f64> {
    let n = n.get();
    if k > n {
        return domain(format!("cardinality {k} exceeds universe size {n}"));
    }
    if r > n {
        return domain(format!("cannot pick {r} distinct elements from {n}"));
    }
    if r > k {
        return Ok(0.0);
    }
    if r > LOG_SPACE_CUTOFF {
        let log: f64 = (0..r).map(|i| ((k - i) as f64).ln() - ((n - i) as f64).ln()).sum();
        return Ok(log.exp());
    }
    Ok((0..r).map(|i| (k - i) as f64 / (n - i) as f64).product())
}

/// Moments of `|A ∩ B|` for independent uniform subsets of sizes `ka`, `kb`.
pub fn intersection_moments_uniform(n: UniverseSize, ka: u64, kb: u64) -> Result<MomentPair> {
    let nn = n.get();
    if ka > nn || kb > nn {
        return domain(format!("cardinalities ({ka}, {kb}) exceed universe size {nn}"));
    }
    let (nf, a, b) = (nn as f64, ka as f64, kb as f64);
    let mean = a * b / nf;
    let variance = a * b / (nf * nf * (nf - 1.0)) * (nf * nf - nf * a - nf * b + a * b);
    Ok(MomentPair::new(mean, variance))
}

/// Moments of `|A|` under Bernoulli sampling with `p = n^{d-1}`.
pub fn bernoulli_moments(n: UniverseSize, d: f64) -> Result<MomentPair> {
    if d.is_nan() || d > 1.0 {
        return domain(format!("Bernoulli density {d} must be at most 1"));
    }
    let nf = n.get() as f64;
    let p = if d == 1.0 { 1.0 } else { nf.powf(d - 1.0) };
    Ok(MomentPair::new(nf * p, nf * p * (1.0 - p)))
}

/// Moments of `|A|` for a permutation-invariant `A` with one-point inclusion
/// probability `p1` and two-point inclusion probability `p2`.
pub fn perm_invariant_moments(n: UniverseSize, p1: f64, p2: f64) -> Result<MomentPair> {
    if !(0.0..=1.0).contains(&p1) || !(0.0..=1.0).contains(&p2) {
        return domain("inclusion probabilities must lie in [0, 1]");
    }
    if p2 > p1 {
        return domain(format!("two-point probability {p2} exceeds one-point probability {p1}"));
    }
    let nf = n.get() as f64;
    let mean = nf * p1;
    Ok(MomentPair::new(mean, mean + nf * (nf - 1.0) * p2 - mean * mean))
}

/// Moments of `|A^{(k)} ∩ X|` for a uniform `ka`-subset `A`.
pub fn multidim_moments(
    profile: &SelfIntersectionProfile,
    size_x: u64,
    n: UniverseSize,
    ka: u64,
    k: usize,
) -> Result<MomentPair> {
    if ka > n.get() {
        return domain(format!("cardinality {ka} exceeds universe size {n}"));
    }
    // r > n distinct points cannot all lie in A
    multidim_moments_with(profile, size_x, k, |r| uniform_inclusion_prob(n, ka, r as u64).unwrap_or(0.0))
}

/// Moments of `|A^{(k)} ∩ X|` for any permutation-invariant `A` given its
/// `r`-point inclusion probabilities `incl(r)`, `r = 0..=2k`.
pub fn multidim_moments_with(
    profile: &SelfIntersectionProfile,
    size_x: u64,
    k: usize,
    incl: impl Fn(usize) -> f64,
) -> Result<MomentPair> {
    profile.check_consistent(size_x, k)?;
    if size_x == 0 {
        return Ok(MomentPair::new(0.0, 0.0));
    }
    let x = size_x as f64;
    let pk = incl(k);
    let p2k = incl(2 * k);
    let mean = x * pk;
    let mut variance = x * x * (p2k - pk * pk);
    for (i, &y) in profile.sizes().iter().enumerate().skip(1) {
        variance += y as f64 * (incl(2 * k - i) - p2k);
    }
    Ok(MomentPair::new(mean, variance))
}

fn check_open_unit(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v < 1.0) {
        return domain(format!("{name} = {v} must lie in (0, 1)"));
    }
    Ok(())
}

fn supercritical_exponent(alpha: f64, beta: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&alpha) || !(0.0..=1.0).contains(&beta) {
        return domain("densities must lie in [0, 1]");
    }
    let e = alpha + beta - 1.0;
    if e <= 0.0 {
        return domain(format!("alpha + beta - 1 = {e} must be positive"));
    }
    Ok(e)
}

/// Chebyshev tail `12 / (c² n^{α+β-1})` for `| |A∩B| - n^{α+β-1} | > c n^{α+β-1}`.
pub fn uniform_tail_bound(n: UniverseSize, alpha: f64, beta: f64, c: f64) -> Result<f64> {
    check_open_unit("c", c)?;
    let e = supercritical_exponent(alpha, beta)?;
    Ok(12.0 / (c * c * (n.get() as f64).powf(e)))
}

/// Smallest `n` from which [`uniform_tail_bound`] is valid: `(4/c)^{1/(α+β-1)}`.
pub fn uniform_tail_threshold(alpha: f64, beta: f64, c: f64) -> Result<f64> {
    check_open_unit("c", c)?;
    let e = supercritical_exponent(alpha, beta)?;
    Ok((4.0 / c).powf(1.0 / e))
}

/// Failure bound `48 / n^{α+β-1-ε}` for the window `[n^{α+β-1-ε}, n^{α+β-1+ε}]`.
pub fn window_tail_bound(n: UniverseSize, alpha: f64, beta: f64, eps: f64) -> Result<f64> {
    let e = supercritical_exponent(alpha, beta)?;
    if !(eps > 0.0 && eps < e) {
        return domain(format!("window slack {eps} must lie in (0, {e})"));
    }
    Ok(48.0 / (n.get() as f64).powf(e - eps))
}

/// Bracket `[n^{α+β-1} - 2, n^{α+β-1}]` on the mean intersection size.
pub fn intersection_mean_bracket(n: UniverseSize, alpha: f64, beta: f64) -> (f64, f64) {
    let t = (n.get() as f64).powf(alpha + beta - 1.0);
    (t - 2.0, t)
}

/// Variance ceiling `3 n^{α+β-1}`, valid for `n ≥ 3`.
pub fn intersection_variance_ceiling(n: UniverseSize, alpha: f64, beta: f64) -> f64 {
    3.0 * (n.get() as f64).powf(alpha + beta - 1.0)
}

/// Smallest `n` from which the uniform include bounds apply: `(1+2k)^{1/ε}`.
pub fn uniform_include_threshold(k: u64, eps: f64) -> Result<f64> {
    if k == 0 {
        return domain("arity must be at least 1");
    }
    if eps.is_nan() || eps <= 0.0 {
        return domain(format!("slack {eps} must be positive"));
    }
    Ok((1.0 + 2.0 * k as f64).powf(1.0 / eps))
}

/// `(n^{r(d-1-ε)}, n^{r(d-1+ε)})`.
pub fn uniform_include_bounds(n: UniverseSize, d: f64, eps: f64, r: u64) -> (f64, f64) {
    let nf = n.get() as f64;
    let r = r as f64;
    (nf.powf(r * (d - 1.0 - eps)), nf.powf(r * (d - 1.0 + eps)))
}

/// `n^{2k(d-1+ε)-d}`, the ceiling on `P_k² - P_{2k}`.
pub fn uniform_include_gap_bound(n: UniverseSize, d: f64, eps: f64, k: u64) -> f64 {
    (n.get() as f64).powf(2.0 * k as f64 * (d - 1.0 + eps) - d)
}

/// Outcome of checking the include sandwich against exact probabilities.
#[derive(Debug, Clone, Serialize)]
pub struct SandwichCheck {
    pub n: u64,
    pub d: f64,
    pub eps: f64,
    pub k: u64,
    pub threshold: f64,
    pub applies: bool,
    /// `(r, lower, exact, upper)` for `r = 1..=2k`.
    pub rows: Vec<(u64, f64, f64, f64)>,
    pub gap: f64,
    pub gap_bound: f64,
    pub holds: bool,
}

/// Evaluates the exact `r`-point inclusion probabilities of a uniform
/// `⌊n^d⌋`-subset and tests them against their bounds.
pub fn check_uniform_include_sandwich(n: UniverseSize, d: f64, eps: f64, k: u64) -> Result<SandwichCheck> {
    check_open_unit("d", d)?;
    if !(eps > 0.0 && eps < d) {
        return domain(format!("slack {eps} must lie in (0, d)"));
    }
    let threshold = uniform_include_threshold(k, eps)?;
    let size = floor_pow(n.get(), d);
    let mut rows = Vec::with_capacity(2 * k as usize);
    let mut holds = true;
    for r in 1..=2 * k {
        let exact = uniform_inclusion_prob(n, size, r)?;
        let (lo, hi) = uniform_include_bounds(n, d, eps, r);
        holds &= lo <= exact && exact <= hi;
        rows.push((r, lo, exact, hi));
    }
    let pk = uniform_inclusion_prob(n, size, k)?;
    let p2k = uniform_inclusion_prob(n, size, 2 * k)?;
    let gap = pk * pk - p2k;
    let gap_bound = uniform_include_gap_bound(n, d, eps, k);
    // relative slack absorbs rounding in pk² - p2k
    holds &= gap >= -1e-12 * pk * pk && gap <= gap_bound;
    Ok(SandwichCheck {
        n: n.get(),
        d,
        eps,
        k,
        threshold,
        applies: n.get() as f64 >= threshold,
        rows,
        gap,
        gap_bound,
        holds,
    })
}

/// Rational-arithmetic counterparts used for small universes.
pub mod exact {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::{One, Zero};

    use crate::error::{domain, Result};
    use crate::multidim::SelfIntersectionProfile;

    #[derive(Debug, Clone, PartialEq, Eq)]
    pub struct ExactMoments {
        pub mean: BigRational,
        pub variance: BigRational,
    }

    fn int(v: u64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    pub fn uniform_inclusion_prob(n: u64, k: u64, r: u64) -> Result<BigRational> {
        if k > n {
            return domain(format!("cardinality {k} exceeds universe size {n}"));
        }
        if r > n {
            return domain(format!("cannot pick {r} distinct elements from {n}"));
        }
        if r > k {
            return Ok(BigRational::zero());
        }
        let mut p = BigRational::one();
        for i in 0..r {
            p *= BigRational::new(BigInt::from(k - i), BigInt::from(n - i));
        }
        Ok(p)
    }

    pub fn intersection_moments_uniform(n: u64, ka: u64, kb: u64) -> Result<ExactMoments> {
        if n < 2 {
            return domain("universe size must be at least 2");
        }
        if ka > n || kb > n {
            return domain(format!("cardinalities ({ka}, {kb}) exceed universe size {n}"));
        }
        let (nf, a, b) = (int(n), int(ka), int(kb));
        let mean = &a * &b / &nf;
        let variance = &a * &b / (&nf * &nf * (&nf - int(1))) * (&nf * &nf - &nf * &a - &nf * &b + &a * &b);
        Ok(ExactMoments { mean, variance })
    }

    pub fn perm_invariant_moments(n: u64, p1: &BigRational, p2: &BigRational) -> Result<ExactMoments> {
        if p2 > p1 {
            return domain("two-point probability exceeds one-point probability");
        }
        let nf = int(n);
        let mean = &nf * p1;
        let variance = &mean + &nf * (&nf - int(1)) * p2 - &mean * &mean;
        Ok(ExactMoments { mean, variance })
    }

    /// Moments of `|A^{(k)} ∩ X|` for a uniform `ka`-subset of an `n`-set.
    pub fn multidim_moments(
        profile: &SelfIntersectionProfile,
        size_x: u64,
        n: u64,
        ka: u64,
        k: usize,
    ) -> Result<ExactMoments> {
        profile.check_consistent(size_x, k)?;
        let p = |r: usize| -> Result<BigRational> {
            if r as u64 > n {
                Ok(BigRational::zero())
            } else {
                uniform_inclusion_prob(n, ka, r as u64)
            }
        };
        let x = int(size_x);
        let pk = p(k)?;
        let mean = &x * &pk;
        let mut variance = BigRational::zero();
        for (i, &y) in profile.sizes().iter().enumerate() {
            let y = BigRational::from_integer(BigInt::from(y));
            variance += y * (p(2 * k - i)? - &pk * &pk);
        }
        Ok(ExactMoments { mean, variance })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multidim::{self_intersection_profile, TupleSet};
    use num_traits::ToPrimitive;

    fn u(n: u64) -> UniverseSize {
        UniverseSize::new(n).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn inclusion_examples() {
        assert_eq!(uniform_inclusion_prob(u(100), 10, 0).unwrap(), 1.0);
        assert!(close(uniform_inclusion_prob(u(100), 10, 2).unwrap(), 90.0 / 9900.0, 1e-15));
        assert!(close(uniform_inclusion_prob(u(6), 3, 3).unwrap(), 0.05, 1e-15));
        assert_eq!(uniform_inclusion_prob(u(6), 3, 4).unwrap(), 0.0);
        assert!(uniform_inclusion_prob(u(6), 3, 7).is_err());
        assert!(uniform_inclusion_prob(u(6), 7, 1).is_err());
    }

    #[test]
    fn log_space_agrees_with_direct_product() {
        let n = u(1000);
        let direct: f64 = (0..25).map(|i| (400 - i) as f64 / (1000 - i) as f64).product();
        assert!(close(uniform_inclusion_prob(n, 400, 25).unwrap(), direct, 1e-12));
    }

    #[test]
    fn intersection_examples() {
        let m = intersection_moments_uniform(u(100), 10, 10).unwrap();
        assert!(close(m.mean, 1.0, 1e-15));
        assert!(close(m.variance, 100.0 / 990_000.0 * 8100.0, 1e-14));
        let full = intersection_moments_uniform(u(50), 50, 7).unwrap();
        assert_eq!(full.variance, 0.0);
        assert_eq!(full.mean, 7.0);
        assert!(intersection_moments_uniform(u(5), 6, 1).is_err());
    }

    #[test]
    fn intersection_variance_by_simulation() {
        use crate::rng::SeedSpec;
        use crate::samplers::sample_uniform;
        let n = u(12);
        let trials = 20_000u64;
        let mut sum = 0.0;
        let mut sq = 0.0;
        for t in 0..trials {
            let a = sample_uniform(n, 4, SeedSpec::new(1, 2 * t)).unwrap();
            let b = sample_uniform(n, 4, SeedSpec::new(1, 2 * t + 1)).unwrap();
            let c = a.intersection_len(&b).unwrap() as f64;
            sum += c;
            sq += c * c;
        }
        let mean = sum / trials as f64;
        let var = sq / trials as f64 - mean * mean;
        let m = intersection_moments_uniform(n, 4, 4).unwrap();
        // sd of sample variance is about sqrt((mu4 - var^2)/T); 0.03 is > 3 of them here
        assert!((mean - m.mean).abs() < 3.0 * (m.variance / trials as f64).sqrt() + 1e-9);
        assert!((var - m.variance).abs() < 0.03, "{var} vs {}", m.variance);
    }

    #[test]
    fn bernoulli_examples() {
        let full = bernoulli_moments(u(1000), 1.0).unwrap();
        assert_eq!((full.mean, full.variance), (1000.0, 0.0));
        let half = bernoulli_moments(u(10_000), 0.5).unwrap();
        assert!(close(half.mean, 100.0, 1e-12));
        assert!(close(half.variance, 99.0, 1e-12));
        assert!(close(bernoulli_moments(u(777), 0.0).unwrap().mean, 1.0, 1e-12));
        assert!(bernoulli_moments(u(10), 1.5).is_err());
    }

    #[test]
    fn perm_invariant_specializations() {
        let n = u(10);
        let full = perm_invariant_moments(n, 1.0, 1.0).unwrap();
        assert_eq!((full.mean, full.variance), (10.0, 0.0));
        let p = 0.3;
        let b = perm_invariant_moments(n, p, p * p).unwrap();
        assert!(close(b.variance, 10.0 * p * (1.0 - p), 1e-12));
        // uniform k-subset against the intersection formula with B = E
        let k = 4.0;
        let uni = perm_invariant_moments(n, k / 10.0, k * (k - 1.0) / 90.0).unwrap();
        let via = intersection_moments_uniform(n, 4, 10).unwrap();
        assert!(close(uni.mean, via.mean, 1e-12));
        assert!(uni.variance.abs() < 1e-12 && via.variance.abs() < 1e-12);
        assert!(perm_invariant_moments(n, 0.2, 0.3).is_err());
    }

    #[test]
    fn perm_invariant_bernoulli_identity_is_exact() {
        use num_bigint::BigInt;
        use num_rational::BigRational;
        let p = BigRational::new(BigInt::from(3), BigInt::from(10));
        let m = exact::perm_invariant_moments(10, &p, &(&p * &p)).unwrap();
        let expected =
            BigRational::from_integer(BigInt::from(10)) * &p * (BigRational::from_integer(BigInt::from(1)) - &p);
        assert_eq!(m.variance, expected);
    }

    #[test]
    fn multidim_full_pairs_mean() {
        let x = TupleSet::full(u(4), 2).unwrap();
        let prof = self_intersection_profile(&x);
        let m = multidim_moments(&prof, x.len() as u64, u(4), 2, 2).unwrap();
        assert!(close(m.mean, 2.0, 1e-12));
        // A^{(2)} ∩ E^{(2)} = A^{(2)} has exactly 2 tuples: zero variance
        assert!(m.variance.abs() < 1e-12);
        let e = exact::multidim_moments(&prof, x.len() as u64, 4, 2, 2).unwrap();
        assert_eq!(e.mean.to_f64().unwrap(), 2.0);
        assert_eq!(e.variance.to_f64().unwrap(), 0.0);
    }

    #[test]
    fn multidim_empty_x() {
        let x = TupleSet::new(u(5), 2, vec![]).unwrap();
        let prof = self_intersection_profile(&x);
        assert_eq!(multidim_moments(&prof, 0, u(5), 3, 2).unwrap(), MomentPair { mean: 0.0, variance: 0.0 });
    }

    #[test]
    fn multidim_k1_reduces_to_perm_invariant() {
        let n = u(9);
        let x = TupleSet::full(n, 1).unwrap();
        let prof = self_intersection_profile(&x);
        let md = multidim_moments(&prof, 9, n, 4, 1).unwrap();
        let p1 = uniform_inclusion_prob(n, 4, 1).unwrap();
        let p2 = uniform_inclusion_prob(n, 4, 2).unwrap();
        let pi = perm_invariant_moments(n, p1, p2).unwrap();
        assert!(close(md.mean, pi.mean, 1e-12));
        assert!((md.variance - pi.variance).abs() < 1e-12);
    }

    #[test]
    fn multidim_bernoulli_square_term_vanishes() {
        let n = u(20);
        let x = TupleSet::full(n, 2).unwrap();
        let prof = self_intersection_profile(&x);
        let p: f64 = 0.3;
        let m = multidim_moments_with(&prof, x.len() as u64, 2, |r| p.powi(r as i32)).unwrap();
        let expected: f64 =
            prof.sizes().iter().enumerate().skip(1).map(|(i, &y)| y as f64 * (p.powi(4 - i as i32) - p.powi(4))).sum();
        assert!(close(m.variance, expected, 1e-12));
    }

    #[test]
    fn multidim_rejects_inconsistent_profile() {
        let prof = SelfIntersectionProfile::from_sizes(2, vec![1, 0, 1]);
        assert!(multidim_moments(&prof, 3, u(10), 4, 2).is_err());
    }

    #[test]
    fn bound_examples() {
        let t = uniform_tail_bound(u(10_000), 0.8, 0.8, 0.5).unwrap();
        assert!(close(t, 12.0 / (0.25 * 10f64.powf(2.4)), 1e-12));
        assert!(close(t, 0.191_09, 1e-4));
        let w = window_tail_bound(u(10_000), 0.8, 0.8, 0.05).unwrap();
        assert!(close(w, 48.0 / 10f64.powf(2.2), 1e-12));
        assert!(close(uniform_include_threshold(2, 0.1).unwrap(), 5f64.powi(10), 1e-12));
        assert!(uniform_tail_bound(u(100), 0.4, 0.4, 0.5).is_err());
        assert!(uniform_tail_bound(u(100), 0.8, 0.8, 1.5).is_err());
        assert!(uniform_include_threshold(0, 0.1).is_err());
    }

    #[test]
    fn sandwich_at_threshold() {
        let n = u(5u64.pow(10));
        let check = check_uniform_include_sandwich(n, 0.5, 0.1, 1).unwrap();
        assert!(check.applies);
        assert!(check.holds, "{check:?}");
    }

    #[test]
    fn sandwich_grid() {
        let mut tuples = 0;
        for &k in &[1u64, 2] {
            for &eps in &[0.2, 0.3, 0.45] {
                for &d in &[0.5, 0.6, 0.7, 0.8, 0.9] {
                    if eps >= d {
                        continue;
                    }
                    let thr = uniform_include_threshold(k, eps).unwrap().ceil() as u64;
                    for mult in [1u64, 2, 3, 5, 10] {
                        let n = u(thr * mult);
                        let c = check_uniform_include_sandwich(n, d, eps, k).unwrap();
                        assert!(c.holds, "{c:?}");
                        tuples += 1;
                    }
                }
            }
        }
        assert!(tuples >= 100, "{tuples}");
    }

    #[test]
    fn tail_bound_holds_over_grid() {
        // the Chebyshev route uses |mean - n^e| <= c n^e / 2 and Var <= 3 n^e
        let mut tuples = 0;
        for &c in &[0.3, 0.5, 0.8] {
            for &a in &[0.6, 0.7, 0.8, 0.9] {
                for &b in &[0.6, 0.75, 0.9] {
                    let thr = uniform_tail_threshold(a, b, c).unwrap().ceil() as u64;
                    for n in [thr.max(4), thr.max(4) * 3, thr.max(4) * 10] {
                        let nn = u(n);
                        let m = intersection_moments_uniform(nn, floor_pow(n, a), floor_pow(n, b)).unwrap();
                        let target = (n as f64).powf(a + b - 1.0);
                        assert!((m.mean - target).abs() <= c / 2.0 * target + 1e-9);
                        let cheb = 4.0 * m.variance / (c * c * target * target);
                        assert!(cheb <= uniform_tail_bound(nn, a, b, c).unwrap() + 1e-12);
                        tuples += 1;
                    }
                }
            }
        }
        assert!(tuples >= 100);
    }

    #[test]
    fn exact_matches_float() {
        for n in 2..=12u64 {
            for ka in 0..=n {
                for kb in 0..=n {
                    let e = exact::intersection_moments_uniform(n, ka, kb).unwrap();
                    let f = intersection_moments_uniform(u(n), ka, kb).unwrap();
                    assert!(close(f.mean, e.mean.to_f64().unwrap(), 1e-12));
                    assert!((f.variance - e.variance.to_f64().unwrap()).abs() < 1e-10);
                }
            }
        }
    }
}
