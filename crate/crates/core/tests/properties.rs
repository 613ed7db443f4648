mod common;

use proptest::prelude::*;

use subdens::experiments::{
    run_experiment, sample_relators, wilson_interval, ExperimentConfig, GroupSweepConfig, IntersectionConfig,
    SubsetModel,
};
use subdens::rng::SeedSpec;
use subdens::samplers::{binomial, sample_bernoulli, sample_perm_invariant, CardinalityLaw};
use subdens::smallcancel::{format_presentation, max_piece_ratio, parse_presentation, satisfies_c_prime, RelatorSet};
use subdens::universe::UniverseSize;
use subdens::words::{Word, WordSampler};

fn relator_set() -> impl Strategy<Value = RelatorSet> {
    any::<u64>().prop_map(|seed| common::random_relator_sets(1, 30, seed).pop().unwrap())
}

fn pieces(r: &RelatorSet) -> Vec<usize> {
    max_piece_ratio(r).per_relator.iter().map(|p| p.max_piece).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn pieces_survive_rotation_and_inversion(r in relator_set(), shift in 0usize..64, pick in 0usize..8) {
        let before = pieces(&r);
        let i = pick % r.len();
        let mut rotated = r.relators().to_vec();
        rotated[i] = rotated[i].rotate(shift);
        let mut inverted = r.relators().to_vec();
        inverted[i] = inverted[i].inverse();
        // rotating or inverting can collide with another relator; skip those
        if let Ok(rr) = RelatorSet::new(r.rank(), rotated) {
            prop_assert_eq!(pieces(&rr), before.clone());
        }
        if let Ok(ri) = RelatorSet::new(r.rank(), inverted) {
            prop_assert_eq!(pieces(&ri), before);
        }
    }

    #[test]
    fn c_prime_is_monotone_in_lambda(r in relator_set(), a in 0.01f64..0.99, b in 0.01f64..0.99) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        if satisfies_c_prime(&r, lo).unwrap().holds {
            prop_assert!(satisfies_c_prime(&r, hi).unwrap().holds);
        }
    }

    #[test]
    fn fast_verdict_matches_report(r in relator_set(), lambda in 0.01f64..0.99) {
        let v = satisfies_c_prime(&r, lambda).unwrap();
        prop_assert_eq!(v.holds, max_piece_ratio(&r).classical_holds(lambda));
        if let Some(w) = v.witness {
            // a witness really is a piece long enough to break the condition
            let host = &r.relators()[w.host.relator];
            prop_assert!(w.len() as f64 >= lambda * host.len() as f64 - 1e-9);
            prop_assert_eq!(host.rotate(w.host.offset).letters()[..w.len()].to_vec(), w.piece.letters().to_vec());
        }
    }

    #[test]
    fn presentation_text_round_trips(r in relator_set()) {
        let back = parse_presentation(&format_presentation(&r)).unwrap();
        prop_assert_eq!(back.relators(), r.relators());
        prop_assert_eq!(back.rank(), r.rank());
    }

    #[test]
    fn sampled_words_are_cyclically_reduced(m in 2u32..5, ell in 1usize..20, seed in any::<u64>()) {
        let sampler = WordSampler::new(m, ell).unwrap();
        let mut rng = SeedSpec::new(seed, 0).rng();
        for _ in 0..20 {
            let w = sampler.sample(&mut rng);
            prop_assert!(w.is_cyclically_reduced() && w.len() <= ell && w.min_rank() <= m);
        }
    }

    #[test]
    fn word_text_round_trips(codes in prop::collection::vec(0u8..8, 0..30)) {
        let w = Word::from_codes(&codes);
        prop_assert_eq!(w.to_string().parse::<Word>().unwrap(), w);
    }

    #[test]
    fn sampled_relators_are_distinct(seed in any::<u64>(), count in 1u64..200) {
        let sampler = WordSampler::new(2, 6).unwrap();
        let mut rng = SeedSpec::new(seed, 1).rng();
        let r = sample_relators(&sampler, count, &mut rng).unwrap();
        prop_assert_eq!(r.len() as u64, count);
    }
}

/// Two-sample Kolmogorov-Smirnov statistic for integer samples.
fn ks_statistic(mut a: Vec<u64>, mut b: Vec<u64>) -> f64 {
    a.sort_unstable();
    b.sort_unstable();
    let (mut i, mut j, mut d) = (0, 0, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] == x {
            i += 1;
        }
        while j < b.len() && b[j] == x {
            j += 1;
        }
        d = d.max((i as f64 / a.len() as f64 - j as f64 / b.len() as f64).abs());
    }
    d
}

#[test]
fn binomial_law_reproduces_bernoulli_model() {
    let n = UniverseSize::new(2_000).unwrap();
    let d = 0.6;
    let p = (n.get() as f64).powf(d - 1.0);
    let law = CardinalityLaw::Binomial { n: n.get(), p };
    let draws = 3_000u32;
    let (mut sizes_a, mut sizes_b) = (Vec::new(), Vec::new());
    let (mut zero_a, mut zero_b) = (0, 0);
    for t in 0..draws {
        let a = sample_bernoulli(n, d, SeedSpec::for_trial(5, 0, t)).unwrap();
        let b = sample_perm_invariant(n, &law, SeedSpec::for_trial(5, 1, t)).unwrap();
        zero_a += a.contains(0) as u32;
        zero_b += b.contains(0) as u32;
        sizes_a.push(a.len() as u64);
        sizes_b.push(b.len() as u64);
    }
    // KS critical value at level 0.001 is 1.95·sqrt(2/N)
    let crit = 1.95 * (2.0 / draws as f64).sqrt();
    let ks = ks_statistic(sizes_a, sizes_b);
    assert!(ks < crit, "KS {ks} vs {crit}");
    // both include a fixed element with probability p
    let sd = (p * (1.0 - p) / draws as f64).sqrt();
    for z in [zero_a, zero_b] {
        assert!((z as f64 / draws as f64 - p).abs() < 4.0 * sd + 1.0 / draws as f64);
    }
}

#[test]
fn wilson_interval_covers_at_nominal_rate() {
    for (i, p) in [0.05, 0.2, 0.5, 0.8, 0.95].into_iter().enumerate() {
        let reps = 1_000u32;
        let trials = 100;
        let mut rng = SeedSpec::new(77, i as u64).rng();
        let covered = (0..reps)
            .filter(|_| {
                let (lo, hi) = wilson_interval(binomial(&mut rng, trials, p), trials);
                lo <= p && p <= hi
            })
            .count();
        assert!(covered as f64 / reps as f64 >= 0.9, "p = {p}: coverage {covered}/{reps}");
    }
}

#[test]
fn intersection_size_grows_with_density() {
    let cfg = ExperimentConfig::Intersection(IntersectionConfig {
        model: SubsetModel::Bernoulli,
        n: vec![5_000],
        alpha: vec![0.6, 0.7, 0.8, 0.9],
        beta: vec![0.8],
        epsilon: 0.05,
        trials: 60,
        seed: 3,
        pass_fraction: 0.95,
        mixture_width: 0.02,
    });
    let s = run_experiment(&cfg).unwrap();
    let means: Vec<f64> = s.cells.iter().map(|c| c.details["mean_size"].as_f64().unwrap()).collect();
    assert!(means.windows(2).all(|w| w[0] < w[1]), "{means:?}");
}

#[test]
fn small_cancellation_becomes_rarer_with_density() {
    let cfg = ExperimentConfig::GroupCprimeSweep(GroupSweepConfig {
        m: 2,
        ell: vec![16],
        d: vec![0.05, 0.45],
        lambda: 0.5,
        trials: 30,
        seed: 4,
        low_pass: 0.8,
        high_pass: 0.2,
    });
    let s = run_experiment(&cfg).unwrap();
    let p: Vec<f64> = s.rows().map(|r| r.p_hat).collect();
    assert!(p[0] > p[1], "{p:?}");
}
