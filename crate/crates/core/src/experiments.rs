//! Monte Carlo harness: seeded sweeps over parameter grids, one CSV row per
//! cell plus a JSON summary with per-cell details.
//!
//! Trial `t` of cell `c` draws all its randomness from
//! `SeedSpec::for_trial(seed, c, t)`, so results do not depend on how trials
//! are scheduled across threads.

use std::collections::HashSet;
use std::io::Write;

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::moments::{intersection_moments_uniform, multidim_moments, window_tail_bound};
use crate::multidim::{small_self_intersection_check, TupleFamily};
use crate::rng::{SeedSpec, StreamRng};
use crate::samplers::{bernoulli_members, uniform_members, CardinalityLaw};
use crate::smallcancel::{find_trivializing_pair, satisfies_c_prime_with, PieceRule, RelatorSet};
use crate::universe::{floor_pow, SubsetSample, UniverseSize};
use crate::words::{enumerate_cyclically_reduced, Letter, Word, WordSampler};

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Tolerance for deciding that a cell sits on a critical line.
pub const CRITICAL_TOLERANCE: f64 = 1e-9;

/// Balls up to this size may be enumerated when drawing many relators.
pub const ENUMERATION_LIMIT: u64 = 1 << 20;

/// Wilson score interval at 95% confidence.
pub fn wilson_interval(successes: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let center = p + z2 / (2.0 * n);
    let half = Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    let lo = if successes == 0 { 0.0 } else { ((center - half) / denom).max(0.0) };
    let hi = if successes == trials { 1.0 } else { ((center + half) / denom).min(1.0) };
    (lo, hi)
}

fn default_epsilon() -> f64 {
    0.05
}

fn default_trials() -> u32 {
    200
}

fn default_pass_fraction() -> f64 {
    0.95
}

fn default_mixture_width() -> f64 {
    0.02
}

fn default_group_low() -> f64 {
    0.8
}

fn default_group_high() -> f64 {
    0.2
}

fn default_trivial_pass() -> f64 {
    0.9
}

fn default_zero() -> Vec<f64> {
    vec![0.0]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubsetModel {
    Uniform,
    Bernoulli,
    /// Uniform subsets whose size is `⌊n^{α-w}⌋` or `⌊n^{α+w}⌋` with equal odds.
    Mixture,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntersectionConfig {
    #[serde(default = "default_model")]
    pub model: SubsetModel,
    pub n: Vec<u64>,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default = "default_trials")]
    pub trials: u32,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_pass_fraction")]
    pub pass_fraction: f64,
    #[serde(default = "default_mixture_width")]
    pub mixture_width: f64,
}

fn default_model() -> SubsetModel {
    SubsetModel::Uniform
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultidimConfig {
    pub family: TupleFamily,
    pub n: Vec<u64>,
    pub d: Vec<f64>,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default = "default_trials")]
    pub trials: u32,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_pass_fraction")]
    pub pass_fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BernoulliEmptyConfig {
    pub n: Vec<u64>,
    #[serde(default = "default_zero")]
    pub d: Vec<f64>,
    #[serde(default = "default_trials")]
    pub trials: u32,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupSweepConfig {
    pub m: u32,
    pub ell: Vec<usize>,
    pub d: Vec<f64>,
    pub lambda: f64,
    #[serde(default = "default_trials")]
    pub trials: u32,
    #[serde(default)]
    pub seed: u64,
    /// Required `Pr(C'(λ))` below `λ/2`.
    #[serde(default = "default_group_low")]
    pub low_pass: f64,
    /// Allowed `Pr(C'(λ))` above `λ/2`.
    #[serde(default = "default_group_high")]
    pub high_pass: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrivializationConfig {
    pub m: u32,
    pub ell: Vec<usize>,
    pub d: Vec<f64>,
    #[serde(default = "default_trials")]
    pub trials: u32,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_trivial_pass")]
    pub pass_fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExperimentConfig {
    Intersection(IntersectionConfig),
    Multidim(MultidimConfig),
    BernoulliEmpty(BernoulliEmptyConfig),
    GroupCprimeSweep(GroupSweepConfig),
    TrivializationSweep(TrivializationConfig),
}

/// One CSV row; empty fields mean "not applicable".
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellRow {
    pub kind: String,
    pub m: Option<u32>,
    pub n_or_ell: u64,
    pub alpha: Option<f64>,
    pub beta_or_d: Option<f64>,
    pub lambda: Option<f64>,
    pub k: Option<usize>,
    pub trials: u64,
    pub successes: u64,
    pub p_hat: f64,
    pub wilson_lo: f64,
    pub wilson_hi: f64,
    pub verdict: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct CellSummary {
    pub row: CellRow,
    pub details: Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepSummary {
    pub kind: String,
    pub config: ExperimentConfig,
    pub cells: Vec<CellSummary>,
    pub warnings: Vec<String>,
}

impl SweepSummary {
    pub fn rows(&self) -> impl Iterator<Item = &CellRow> {
        self.cells.iter().map(|c| &c.row)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for row in self.rows() {
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is UTF-8"))
    }

    pub fn summary_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

fn config_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

fn check_common(trials: u32, grids: &[(&str, usize)]) -> Result<()> {
    if trials == 0 {
        return Err(config_err("trials must be at least 1"));
    }
    for (name, len) in grids {
        if *len == 0 {
            return Err(config_err(format!("grid `{name}` is empty")));
        }
    }
    Ok(())
}

fn check_unit(name: &str, values: &[f64]) -> Result<()> {
    match values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
        Some(v) => Err(config_err(format!("{name} value {v} outside [0, 1]"))),
        None => Ok(()),
    }
}

fn check_universe(ns: &[u64]) -> Result<Vec<UniverseSize>> {
    ns.iter().map(|&n| UniverseSize::new(n).map_err(|e| config_err(e.to_string()))).collect()
}

fn row(kind: &str, n_or_ell: u64, trials: u64, successes: u64, verdict: &str) -> CellRow {
    let (wilson_lo, wilson_hi) = wilson_interval(successes, trials);
    CellRow {
        kind: kind.to_string(),
        m: None,
        n_or_ell,
        alpha: None,
        beta_or_d: None,
        lambda: None,
        k: None,
        trials,
        successes,
        p_hat: successes as f64 / trials as f64,
        wilson_lo,
        wilson_hi,
        verdict: verdict.to_string(),
    }
}

fn median(mut xs: Vec<f64>) -> Option<f64> {
    if xs.is_empty() {
        return None;
    }
    xs.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let mid = xs.len() / 2;
    Some(if xs.len() % 2 == 1 { xs[mid] } else { (xs[mid - 1] + xs[mid]) / 2.0 })
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<SweepSummary> {
    match cfg {
        ExperimentConfig::Intersection(c) => run_intersection_experiment(c),
        ExperimentConfig::Multidim(c) => run_multidim_experiment(c),
        ExperimentConfig::BernoulliEmpty(c) => run_bernoulli_empty(c),
        ExperimentConfig::GroupCprimeSweep(c) => run_group_sweep(c),
        ExperimentConfig::TrivializationSweep(c) => run_trivialization_sweep(c),
    }
}

fn draw_subset(rng: &mut StreamRng, model: SubsetModel, n: UniverseSize, density: f64, width: f64) -> SubsetSample {
    let nn = n.get();
    let members = match model {
        SubsetModel::Uniform => uniform_members(rng, nn, floor_pow(nn, density)),
        SubsetModel::Bernoulli => {
            let p = if density >= 1.0 { 1.0 } else { (nn as f64).powf(density - 1.0) };
            bernoulli_members(rng, nn, p)
        }
        SubsetModel::Mixture => {
            let lo = floor_pow(nn, (density - width).max(0.0));
            let hi = floor_pow(nn, (density + width).min(1.0));
            let k = if rng.below(2) == 0 { lo } else { hi };
            uniform_members(rng, nn, k)
        }
    };
    SubsetSample::from_sorted(n, members)
}

/// Per cell `(n, α, β)`: for `α + β > 1`, the fraction of trials with
/// `|A∩B| ∈ [n^{α+β-1-ε}, n^{α+β-1+ε}]`; for `α + β < 1`, the fraction with
/// `A ∩ B = ∅`.
pub fn run_intersection_experiment(cfg: &IntersectionConfig) -> Result<SweepSummary> {
    check_common(cfg.trials, &[("n", cfg.n.len()), ("alpha", cfg.alpha.len()), ("beta", cfg.beta.len())])?;
    check_unit("alpha", &cfg.alpha)?;
    check_unit("beta", &cfg.beta)?;
    if cfg.epsilon.is_nan() || cfg.epsilon <= 0.0 {
        return Err(config_err("epsilon must be positive"));
    }
    let ns = check_universe(&cfg.n)?;
    let kind = "intersection";
    let mut cells = Vec::new();
    let mut cell_index = 0u32;
    for &n in &ns {
        for &alpha in &cfg.alpha {
            for &beta in &cfg.beta {
                let cell = cell_index;
                cell_index += 1;
                let e = alpha + beta - 1.0;
                let critical = e.abs() < CRITICAL_TOLERANCE;
                let nf = n.get() as f64;
                let (lo, hi) = (nf.powf(e - cfg.epsilon), nf.powf(e + cfg.epsilon));
                let sizes: Vec<usize> = (0..cfg.trials)
                    .into_par_iter()
                    .map(|t| {
                        let mut rng = SeedSpec::for_trial(cfg.seed, cell, t).rng();
                        let a = draw_subset(&mut rng, cfg.model, n, alpha, cfg.mixture_width);
                        let b = draw_subset(&mut rng, cfg.model, n, beta, cfg.mixture_width);
                        a.intersection_len(&b).expect("same universe")
                    })
                    .collect();
                let successes = sizes
                    .iter()
                    .filter(|&&s| if e > 0.0 && !critical { (s as f64) >= lo && (s as f64) <= hi } else { s == 0 })
                    .count() as u64;
                let trials = cfg.trials as u64;
                let p_hat = successes as f64 / trials as f64;
                let verdict = if critical {
                    "critical"
                } else if p_hat >= cfg.pass_fraction {
                    "pass"
                } else {
                    "fail"
                };
                let mut r = row(kind, n.get(), trials, successes, verdict);
                r.alpha = Some(alpha);
                r.beta_or_d = Some(beta);
                let mean = sizes.iter().sum::<usize>() as f64 / trials as f64;
                let mut details = json!({
                    "model": cfg.model,
                    "event": if critical { "empty (no prediction)" } else if e > 0.0 { "window" } else { "empty" },
                    "window": [lo, hi],
                    "mean_size": mean,
                    "empty_fraction": sizes.iter().filter(|&&s| s == 0).count() as f64 / trials as f64,
                });
                if cfg.model == SubsetModel::Uniform {
                    let m = intersection_moments_uniform(n, floor_pow(n.get(), alpha), floor_pow(n.get(), beta))?;
                    details["exact_moments"] = json!(m);
                }
                if e > cfg.epsilon && !critical {
                    details["tail_bound"] = json!(window_tail_bound(n, alpha, beta, cfg.epsilon)?);
                }
                cells.push(CellSummary { row: r, details });
            }
        }
    }
    Ok(SweepSummary { kind: kind.into(), config: ExperimentConfig::Intersection(cfg.clone()), cells, warnings: vec![] })
}

/// Per cell `(n, d)` with a uniform `⌊n^d⌋`-subset `A`: the distribution of
/// `log_{n^k} |A^{(k)} ∩ X|`, and the fraction of trials matching the
/// prediction `α + d - 1` within `ε` (or empty when `α + d < 1`).
pub fn run_multidim_experiment(cfg: &MultidimConfig) -> Result<SweepSummary> {
    check_common(cfg.trials, &[("n", cfg.n.len()), ("d", cfg.d.len())])?;
    check_unit("d", &cfg.d)?;
    let ns = check_universe(&cfg.n)?;
    let kind = "multidim";
    let k = cfg.family.arity();
    let mut cells = Vec::new();
    let mut warnings = Vec::new();
    let mut cell_index = 0u32;
    for &n in &ns {
        let x = cfg.family.build(n).map_err(|e| config_err(e.to_string()))?;
        let size_x = x.len();
        let size_x64 = u64::try_from(size_x).map_err(|_| config_err("tuple set too large"))?;
        if size_x64 == 0 {
            return Err(config_err("tuple set is empty"));
        }
        let profile = x.profile()?;
        let ln_universe: f64 = (0..k as u64).map(|i| ((n.get() - i) as f64).ln()).sum();
        let alpha = (size_x as f64).ln() / ln_universe;
        let scale = k as f64 * n.ln();
        for &d in &cfg.d {
            let cell = cell_index;
            cell_index += 1;
            let e = alpha + d - 1.0;
            let critical = e.abs() < CRITICAL_TOLERANCE;
            let report = if d > 0.0 && d < 1.0 {
                Some(small_self_intersection_check(&profile, size_x64, n, k, d)?)
            } else {
                warnings.push(format!("n = {n}, d = {d}: condition check needs 0 < d < 1"));
                None
            };
            let ka = floor_pow(n.get(), d);
            let counts: Vec<u128> = (0..cfg.trials)
                .into_par_iter()
                .map(|t| {
                    let mut rng = SeedSpec::for_trial(cfg.seed, cell, t).rng();
                    let a = SubsetSample::from_sorted(n, uniform_members(&mut rng, n.get(), ka));
                    x.intersect(&a).expect("same universe")
                })
                .collect();
            let exponents: Vec<f64> = counts.iter().filter(|&&c| c > 0).map(|&c| (c as f64).ln() / scale).collect();
            let successes = counts
                .iter()
                .filter(|&&c| {
                    if e > 0.0 && !critical {
                        c > 0 && ((c as f64).ln() / scale - e).abs() <= cfg.epsilon
                    } else {
                        c == 0
                    }
                })
                .count() as u64;
            let trials = cfg.trials as u64;
            let p_hat = successes as f64 / trials as f64;
            let condition_failed = report.as_ref().is_some_and(|r| !r.holds);
            let verdict = if critical {
                "critical"
            } else if condition_failed && e > 0.0 {
                "condition_failed"
            } else if p_hat >= cfg.pass_fraction {
                "pass"
            } else {
                "fail"
            };
            let mut r = row(kind, n.get(), trials, successes, verdict);
            r.alpha = Some(alpha);
            r.beta_or_d = Some(d);
            r.k = Some(k);
            let moments = multidim_moments(&profile, size_x64, n, ka, k).ok();
            let details = json!({
                "family": cfg.family_label(),
                "size_x": size_x.to_string(),
                "profile": profile.sizes().iter().map(|y| y.to_string()).collect::<Vec<_>>(),
                "prediction": e,
                "median_exponent": median(exponents.clone()),
                "nonempty_trials": exponents.len(),
                "empty_fraction": 1.0 - exponents.len() as f64 / trials as f64,
                "moments": moments,
                "report": report,
                "counts": counts.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            });
            cells.push(CellSummary { row: r, details });
        }
    }
    Ok(SweepSummary { kind: kind.into(), config: ExperimentConfig::Multidim(cfg.clone()), cells, warnings })
}

impl MultidimConfig {
    fn family_label(&self) -> &'static str {
        match self.family {
            TupleFamily::Full { .. } => "full",
            TupleFamily::Star { .. } => "star",
            TupleFamily::RandomFixed { .. } => "random_fixed",
            TupleFamily::Explicit { .. } => "explicit",
        }
    }
}

/// Per cell `(n, d)`: the fraction of Bernoulli samples that are empty,
/// against the exact `(1 - n^{d-1})^n`. A cell passes when the Wilson
/// interval covers the exact value.
pub fn run_bernoulli_empty(cfg: &BernoulliEmptyConfig) -> Result<SweepSummary> {
    check_common(cfg.trials, &[("n", cfg.n.len()), ("d", cfg.d.len())])?;
    check_unit("d", &cfg.d)?;
    let ns = check_universe(&cfg.n)?;
    let kind = "bernoulli_empty";
    let mut cells = Vec::new();
    let mut cell_index = 0u32;
    for &n in &ns {
        for &d in &cfg.d {
            let cell = cell_index;
            cell_index += 1;
            let nf = n.get() as f64;
            let p = if d >= 1.0 { 1.0 } else { nf.powf(d - 1.0) };
            let successes = (0..cfg.trials)
                .into_par_iter()
                .filter(|&t| {
                    let mut rng = SeedSpec::for_trial(cfg.seed, cell, t).rng();
                    bernoulli_members(&mut rng, n.get(), p).is_empty()
                })
                .count() as u64;
            let exact = (nf * (-p).ln_1p()).exp();
            let trials = cfg.trials as u64;
            let (lo, hi) = wilson_interval(successes, trials);
            let verdict = if lo <= exact && exact <= hi { "pass" } else { "fail" };
            let mut r = row(kind, n.get(), trials, successes, verdict);
            r.beta_or_d = Some(d);
            let details =
                json!({ "exact": exact, "limit": if d == 0.0 { Some(std::f64::consts::E.recip()) } else { None } });
            cells.push(CellSummary { row: r, details });
        }
    }
    Ok(SweepSummary {
        kind: kind.into(),
        config: ExperimentConfig::BernoulliEmpty(cfg.clone()),
        cells,
        warnings: vec![],
    })
}

/// How many relators a density-`d` presentation gets, and whether the count
/// had to be clamped to `|B_ell|`.
pub fn relator_count(sampler: &WordSampler, d: f64) -> (u64, bool) {
    let ball = sampler.ball_size().to_f64().unwrap_or(f64::INFINITY);
    let want = (d * ball.ln()).exp().round();
    if want > ball {
        (ball as u64, true)
    } else {
        (want as u64, false)
    }
}

/// `count` distinct relators drawn uniformly from `B_ell`. Large requests on
/// small balls enumerate the ball; otherwise draws are repeated until
/// `count` distinct words are collected.
pub fn sample_relators(sampler: &WordSampler, count: u64, rng: &mut StreamRng) -> Result<RelatorSet> {
    let ell = sampler.table().ell();
    let ball = sampler.ball_size().to_u64();
    let m = sampler.rank();
    if let Some(b) = ball {
        if count > b {
            return Err(Error::Domain(format!("cannot draw {count} distinct relators from {b}")));
        }
        if b <= ENUMERATION_LIMIT && count > b / 4 {
            let mut all = Vec::with_capacity(b as usize);
            for t in 1..=ell {
                all.extend(enumerate_cyclically_reduced(m, t)?);
            }
            let picks = uniform_members(rng, b, count);
            let words = picks.into_iter().map(|i| all[i as usize].clone()).collect();
            return Ok(RelatorSet::from_trusted(m, words));
        }
    }
    let mut seen: HashSet<Word> = HashSet::with_capacity(count as usize);
    let mut words = Vec::with_capacity(count as usize);
    while (words.len() as u64) < count {
        let w = sampler.sample(rng);
        if seen.insert(w.clone()) {
            words.push(w);
        }
    }
    Ok(RelatorSet::from_trusted(m, words))
}

fn check_group(m: u32, ell: &[usize], d: &[f64], trials: u32) -> Result<()> {
    check_common(trials, &[("ell", ell.len()), ("d", d.len())])?;
    check_unit("d", d)?;
    if !(2..=crate::words::MAX_RANK).contains(&m) {
        return Err(config_err(format!("rank {m} must lie in [2, {}]", crate::words::MAX_RANK)));
    }
    if ell.contains(&0) {
        return Err(config_err("ell must be at least 1"));
    }
    Ok(())
}

/// Per cell `(ell, d)`: the fraction of density-`d` presentations on `B_ell`
/// satisfying `C'(λ)`. Below `λ/2` a cell passes when that fraction is at
/// least `low_pass`; above, when it is at most `high_pass`.
pub fn run_group_sweep(cfg: &GroupSweepConfig) -> Result<SweepSummary> {
    check_group(cfg.m, &cfg.ell, &cfg.d, cfg.trials)?;
    if !(cfg.lambda > 0.0 && cfg.lambda < 1.0) {
        return Err(config_err(format!("lambda {} must lie in (0, 1)", cfg.lambda)));
    }
    let kind = "group_cprime_sweep";
    let mut cells = Vec::new();
    let mut warnings = Vec::new();
    let mut cell_index = 0u32;
    for &ell in &cfg.ell {
        let sampler = WordSampler::new(cfg.m, ell)?;
        for &d in &cfg.d {
            let cell = cell_index;
            cell_index += 1;
            let (count, clamped) = relator_count(&sampler, d);
            if clamped {
                warnings.push(format!("ell = {ell}, d = {d}: |B_ell|^d exceeds |B_ell|; clamped to {count}"));
            }
            let outcomes: Vec<(bool, bool)> = (0..cfg.trials)
                .into_par_iter()
                .map(|t| -> Result<(bool, bool)> {
                    let mut rng = SeedSpec::for_trial(cfg.seed, cell, t).rng();
                    let r = sample_relators(&sampler, count, &mut rng)?;
                    let classical = satisfies_c_prime_with(&r, cfg.lambda, PieceRule::Classical)?.holds;
                    let non_strict = classical || satisfies_c_prime_with(&r, cfg.lambda, PieceRule::NonStrict)?.holds;
                    Ok((classical, non_strict))
                })
                .collect::<Result<_>>()?;
            let successes = outcomes.iter().filter(|o| o.0).count() as u64;
            let non_strict_successes = outcomes.iter().filter(|o| o.1).count() as u64;
            let trials = cfg.trials as u64;
            let p_hat = successes as f64 / trials as f64;
            let half = cfg.lambda / 2.0;
            let verdict = if (d - half).abs() < CRITICAL_TOLERANCE {
                "critical"
            } else if (d < half && p_hat >= cfg.low_pass) || (d > half && p_hat <= cfg.high_pass) {
                "pass"
            } else {
                "fail"
            };
            let mut r = row(kind, ell as u64, trials, successes, verdict);
            r.m = Some(cfg.m);
            r.beta_or_d = Some(d);
            r.lambda = Some(cfg.lambda);
            let details = json!({
                "relators": count,
                "ball_size": sampler.ball_size().to_string(),
                "clamped": clamped,
                "non_strict_successes": non_strict_successes,
                "non_strict_p_hat": non_strict_successes as f64 / trials as f64,
            });
            cells.push(CellSummary { row: r, details });
        }
    }
    Ok(SweepSummary { kind: kind.into(), config: ExperimentConfig::GroupCprimeSweep(cfg.clone()), cells, warnings })
}

/// Per cell `(ell, d)`: the fraction of presentations in which every
/// generator `x` has a witness `w, x·w ∈ R`.
pub fn run_trivialization_sweep(cfg: &TrivializationConfig) -> Result<SweepSummary> {
    check_group(cfg.m, &cfg.ell, &cfg.d, cfg.trials)?;
    let kind = "trivialization_sweep";
    let mut cells = Vec::new();
    let mut warnings = Vec::new();
    let mut cell_index = 0u32;
    for &ell in &cfg.ell {
        let sampler = WordSampler::new(cfg.m, ell)?;
        for &d in &cfg.d {
            let cell = cell_index;
            cell_index += 1;
            let (count, clamped) = relator_count(&sampler, d);
            if clamped {
                warnings.push(format!("ell = {ell}, d = {d}: |B_ell|^d exceeds |B_ell|; clamped to {count}"));
            }
            let found: Vec<Vec<bool>> = (0..cfg.trials)
                .into_par_iter()
                .map(|t| -> Result<Vec<bool>> {
                    let mut rng = SeedSpec::for_trial(cfg.seed, cell, t).rng();
                    let r = sample_relators(&sampler, count, &mut rng)?;
                    Ok((0..cfg.m).map(|g| find_trivializing_pair(&r, Letter::generator(g)).is_some()).collect())
                })
                .collect::<Result<_>>()?;
            let successes = found.iter().filter(|f| f.iter().all(|&b| b)).count() as u64;
            let trials = cfg.trials as u64;
            let p_hat = successes as f64 / trials as f64;
            let verdict = if (d - 0.5).abs() < CRITICAL_TOLERANCE {
                "critical"
            } else if d < 0.5 {
                "no_prediction"
            } else if p_hat >= cfg.pass_fraction {
                "pass"
            } else {
                "fail"
            };
            let per_generator: Vec<f64> =
                (0..cfg.m as usize).map(|g| found.iter().filter(|f| f[g]).count() as f64 / trials as f64).collect();
            let mut r = row(kind, ell as u64, trials, successes, verdict);
            r.m = Some(cfg.m);
            r.beta_or_d = Some(d);
            let details = json!({
                "relators": count,
                "ball_size": sampler.ball_size().to_string(),
                "clamped": clamped,
                "per_generator": per_generator,
            });
            cells.push(CellSummary { row: r, details });
        }
    }
    Ok(SweepSummary { kind: kind.into(), config: ExperimentConfig::TrivializationSweep(cfg.clone()), cells, warnings })
}

/// Law of `|A|` for the mixture model, exposed for callers that sample
/// through [`crate::samplers::sample_perm_invariant`].
pub fn mixture_law(n: UniverseSize, density: f64, width: f64) -> CardinalityLaw {
    let nn = n.get();
    let lo = floor_pow(nn, (density - width).max(0.0)) as usize;
    let hi = floor_pow(nn, (density + width).min(1.0)) as usize;
    let mut weights = vec![0.0; hi + 1];
    weights[lo] += 0.5;
    weights[hi] += 0.5;
    CardinalityLaw::ExplicitVector { weights }
}
