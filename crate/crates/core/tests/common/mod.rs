//! Brute-force oracles shared by the integration and acceptance tests. None of
//! these reuse library internals beyond the plain data types.
#![allow(dead_code)]

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use subdens::rng::SeedSpec;
use subdens::smallcancel::RelatorSet;
use subdens::words::{Word, WordSampler};

/// Mean and variance of `|A ∩ B|` for every `(|A|, |B|)`, by walking all
/// pairs of subsets of `{0..n}` as bitmasks.
pub fn brute_intersection_moments(n: u32) -> HashMap<(u32, u32), (BigRational, BigRational)> {
    let size = 1usize << n;
    // sums[ka][kb][s] = number of pairs with |A∩B| = s
    let mut sums = vec![vec![vec![0u64; n as usize + 1]; n as usize + 1]; n as usize + 1];
    for a in 0..size as u32 {
        let ka = a.count_ones() as usize;
        let row = &mut sums[ka];
        for b in 0..size as u32 {
            row[b.count_ones() as usize][(a & b).count_ones() as usize] += 1;
        }
    }
    let mut out = HashMap::new();
    for ka in 0..=n {
        for kb in 0..=n {
            let hist = &sums[ka as usize][kb as usize];
            let total: u64 = hist.iter().sum();
            let (mut s1, mut s2) = (0u64, 0u64);
            for (s, &c) in hist.iter().enumerate() {
                s1 += s as u64 * c;
                s2 += (s * s) as u64 * c;
            }
            let t = BigInt::from(total);
            let mean = BigRational::new(BigInt::from(s1), t.clone());
            let var = BigRational::new(BigInt::from(s2), t) - &mean * &mean;
            out.insert((ka, kb), (mean, var));
        }
    }
    out
}

/// All cyclically reduced words of length `t` over `m` generators, by filtering
/// every code sequence.
pub fn brute_cyclically_reduced(m: u32, t: usize) -> Vec<Word> {
    let base = 2 * m as u64;
    let total = base.pow(t as u32);
    let mut out = Vec::new();
    for mut idx in 0..total {
        let mut codes = vec![0u8; t];
        for c in codes.iter_mut().rev() {
            *c = (idx % base) as u8;
            idx /= base;
        }
        if (0..t).all(|i| codes[i] ^ 1 != codes[(i + 1) % t]) {
            out.push(Word::from_codes(&codes));
        }
    }
    out
}

fn cyclic_read(w: &[u8], inverse: bool, offset: usize, i: usize) -> u8 {
    let n = w.len();
    if inverse {
        // the inverse word is w reversed with every letter inverted
        w[n - 1 - (offset + i) % n] ^ 1
    } else {
        w[(offset + i) % n]
    }
}

/// Longest piece hosted by each relator, comparing every pair of cyclic
/// readings letter by letter.
pub fn brute_max_pieces(r: &RelatorSet) -> Vec<usize> {
    let words: Vec<Vec<u8>> = r.relators().iter().map(Word::codes).collect();
    let mut best = vec![0; words.len()];
    for (i, wi) in words.iter().enumerate() {
        for inv_a in [false, true] {
            for off_a in 0..wi.len() {
                for (j, wj) in words.iter().enumerate() {
                    for inv_b in [false, true] {
                        for off_b in 0..wj.len() {
                            if (i, inv_a, off_a) == (j, inv_b, off_b) {
                                continue;
                            }
                            let mut cap = wi.len().min(wj.len());
                            if i == j {
                                cap = wi.len() - 1;
                            }
                            let mut l = 0;
                            while l < cap && cyclic_read(wi, inv_a, off_a, l) == cyclic_read(wj, inv_b, off_b, l) {
                                l += 1;
                            }
                            best[i] = best[i].max(l);
                        }
                    }
                }
            }
        }
    }
    best
}

/// Relator sets with total length at most `max_total`, mixing random words
/// with proper powers and shared-prefix pairs so that long pieces show up.
pub fn random_relator_sets(count: usize, max_total: usize, seed: u64) -> Vec<RelatorSet> {
    let mut rng = SeedSpec::new(seed, 7).rng();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let m = 2 + rng.below(2) as u32;
        let sampler = WordSampler::new(m, 12).unwrap();
        let target = 1 + rng.below(6) as usize;
        let mut words: Vec<Word> = Vec::new();
        let mut total = 0;
        for _ in 0..target {
            let t = 1 + rng.below(12) as usize;
            let (mut w, _) = sampler.sample_exact_length(&mut rng, t);
            match rng.below(4) {
                0 if 2 * w.len() <= 12 => w = w.concat(&w),
                1 if !words.is_empty() => {
                    // prefix of an earlier relator followed by fresh letters
                    let src = words[rng.below(words.len() as u64) as usize].clone();
                    let cut = 1 + rng.below(src.len() as u64) as usize;
                    let rot = src.rotate(rng.below(src.len() as u64) as usize);
                    let tail_len = 1 + rng.below(6) as usize;
                    let (tail, _) = sampler.sample_exact_length(&mut rng, tail_len);
                    let cand = Word::from_letters(rot.letters()[..cut].iter().chain(tail.letters()).copied().collect());
                    if cand.is_cyclically_reduced() {
                        w = cand;
                    }
                }
                _ => {}
            }
            if total + w.len() > max_total || words.contains(&w) {
                continue;
            }
            total += w.len();
            words.push(w);
        }
        if let Ok(r) = RelatorSet::new(m, words) {
            out.push(r);
        }
    }
    out
}

pub fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}
