//! Words in the free group on `m` generators.
//!
//! A letter is a code in `0..2m`: generator `g` is `2g` and its inverse is
//! `2g + 1`, so inversion is `code ^ 1`. As text, generators are `a, b, c, ..`
//! and inverses `A, B, C, ..`, which caps the rank at 26.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::rng::{SeedSpec, StreamRng};

pub const MAX_RANK: u32 = 26;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(u8);

impl Letter {
    /// Generator `g` (0-based).
    pub fn generator(g: u32) -> Self {
        debug_assert!(g < MAX_RANK);
        Letter((2 * g) as u8)
    }

    pub fn from_code(code: u8) -> Self {
        Letter(code)
    }

    pub fn code(self) -> u8 {
        self.0
    }

    pub fn generator_index(self) -> u32 {
        (self.0 >> 1) as u32
    }

    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    #[inline]
    pub fn inverse(self) -> Self {
        Letter(self.0 ^ 1)
    }

    pub fn to_char(self) -> char {
        let base = if self.is_positive() { b'a' } else { b'A' };
        (base + (self.0 >> 1)) as char
    }

    pub fn from_char(c: char) -> Result<Self> {
        match c {
            'a'..='z' => Ok(Letter(2 * (c as u8 - b'a'))),
            'A'..='Z' => Ok(Letter(2 * (c as u8 - b'A') + 1)),
            _ => domain(format!("'{c}' is not a letter")),
        }
    }
}

/// A sequence of letters. Constructors that promise reduction say so.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Self { letters }
    }

    pub fn from_codes(codes: &[u8]) -> Self {
        Self { letters: codes.iter().map(|&c| Letter(c)).collect() }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn codes(&self) -> Vec<u8> {
        self.letters.iter().map(|l| l.0).collect()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Smallest `m` whose alphabet contains every letter.
    pub fn min_rank(&self) -> u32 {
        self.letters.iter().map(|l| l.generator_index() + 1).max().unwrap_or(0)
    }

    pub fn is_freely_reduced(&self) -> bool {
        self.letters.windows(2).all(|w| w[0] != w[1].inverse())
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.is_freely_reduced()
            && match (self.letters.first(), self.letters.last()) {
                (Some(&f), Some(&l)) if self.len() >= 2 => f != l.inverse(),
                _ => true,
            }
    }

    pub fn inverse(&self) -> Word {
        Word { letters: self.letters.iter().rev().map(|l| l.inverse()).collect() }
    }

    /// Cyclic rotation starting at `offset`.
    pub fn rotate(&self, offset: usize) -> Word {
        if self.is_empty() {
            return self.clone();
        }
        let o = offset % self.len();
        let mut letters = self.letters[o..].to_vec();
        letters.extend_from_slice(&self.letters[..o]);
        Word { letters }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars().map(Letter::from_char).collect::<Result<Vec<_>>>().map(Word::from_letters)
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Free reduction by a single stack pass.
pub fn free_reduce(letters: &[Letter]) -> Word {
    let mut out: Vec<Letter> = Vec::with_capacity(letters.len());
    for &l in letters {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    Word { letters: out }
}

/// Free reduction followed by stripping inverse first/last pairs.
pub fn cyclic_reduce(w: &Word) -> Word {
    let reduced = free_reduce(&w.letters);
    let l = &reduced.letters;
    let (mut i, mut j) = (0, l.len());
    while j - i >= 2 && l[i] == l[j - 1].inverse() {
        i += 1;
        j -= 1;
    }
    Word { letters: l[i..j].to_vec() }
}

fn check_rank(m: u32) -> Result<()> {
    if !(2..=MAX_RANK).contains(&m) {
        return domain(format!("rank {m} must lie in [2, {MAX_RANK}]"));
    }
    Ok(())
}

/// `|S_t|` (cyclically reduced words of length exactly `t`) and
/// `|B_t| = Σ_{s≤t} |S_s|` for `t = 1..=ell`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordCountTable {
    pub m: u32,
    pub counts: Vec<BigUint>,
    pub cumulative: Vec<BigUint>,
}

impl WordCountTable {
    pub fn ell(&self) -> usize {
        self.counts.len()
    }

    pub fn exact(&self, t: usize) -> &BigUint {
        &self.counts[t - 1]
    }

    pub fn ball(&self, t: usize) -> &BigUint {
        &self.cumulative[t - 1]
    }

    /// `2m(2m-1)^{t-2}(2m-2) ≤ |S_t| ≤ 2m(2m-1)^{t-1}` for every `t ≥ 2`.
    pub fn sandwich_holds(&self) -> bool {
        let two_m = BigUint::from(2 * self.m);
        let q = BigUint::from(2 * self.m - 1);
        (2..=self.ell()).all(|t| {
            let lower = &two_m * q.pow(t as u32 - 2) * BigUint::from(2 * self.m - 2);
            let upper = &two_m * q.pow(t as u32 - 1);
            let s = self.exact(t);
            &lower <= s && s <= &upper
        })
    }
}

/// Counts by a transfer matrix over the current letter, with the first letter
/// fixed by symmetry.
pub fn count_cyclically_reduced(m: u32, ell: usize) -> Result<WordCountTable> {
    check_rank(m)?;
    if ell == 0 {
        return domain("length must be at least 1");
    }
    let alphabet = 2 * m as usize;
    // v[c]: reduced words of the current length starting with letter 0 and ending with c
    let mut v = vec![BigUint::zero(); alphabet];
    v[0] = BigUint::one();
    let mut counts = Vec::with_capacity(ell);
    let mut cumulative = Vec::with_capacity(ell);
    let mut running = BigUint::zero();
    for t in 1..=ell {
        if t > 1 {
            let total: BigUint = v.iter().sum();
            v = (0..alphabet).map(|c| &total - &v[c ^ 1]).collect();
        }
        let closing: BigUint = (0..alphabet).filter(|&c| c != 1 || t == 1).map(|c| &v[c]).sum();
        let s = closing * BigUint::from(alphabet);
        running += &s;
        counts.push(s);
        cumulative.push(running.clone());
    }
    Ok(WordCountTable { m, counts, cumulative })
}

/// All cyclically reduced words of length exactly `t`, in code order.
pub fn enumerate_cyclically_reduced(m: u32, t: usize) -> Result<Vec<Word>> {
    check_rank(m)?;
    if t == 0 {
        return Ok(vec![Word::empty()]);
    }
    let count = count_cyclically_reduced(m, t)?;
    let expected = count
        .exact(t)
        .to_usize()
        .filter(|&c| c <= 50_000_000)
        .ok_or_else(|| Error::Domain(format!("too many words of length {t} to enumerate")))?;
    let alphabet = 2 * m as u8;
    let mut out = Vec::with_capacity(expected);
    let mut cur: Vec<u8> = Vec::with_capacity(t);
    fn rec(cur: &mut Vec<u8>, t: usize, alphabet: u8, out: &mut Vec<Word>) {
        if cur.len() == t {
            if t < 2 || cur[0] != cur[t - 1] ^ 1 {
                out.push(Word::from_codes(cur));
            }
            return;
        }
        for c in 0..alphabet {
            if cur.last().is_some_and(|&p| p == c ^ 1) {
                continue;
            }
            cur.push(c);
            rec(cur, t, alphabet, out);
            cur.pop();
        }
    }
    rec(&mut cur, t, alphabet, &mut out);
    Ok(out)
}

/// Uniform sampler over `B_ell`, with the count table cached.
#[derive(Debug, Clone)]
pub struct WordSampler {
    m: u32,
    table: WordCountTable,
    small: Option<Vec<u128>>,
}

impl WordSampler {
    pub fn new(m: u32, ell_max: usize) -> Result<Self> {
        let table = count_cyclically_reduced(m, ell_max)?;
        let small = table.cumulative.iter().map(|c| c.to_u128()).collect::<Option<Vec<_>>>();
        Ok(Self { m, table, small })
    }

    pub fn rank(&self) -> u32 {
        self.m
    }

    pub fn table(&self) -> &WordCountTable {
        &self.table
    }

    /// `|B_ell|`.
    pub fn ball_size(&self) -> &BigUint {
        self.table.cumulative.last().expect("ell >= 1")
    }

    /// Length drawn with probability `|S_t| / |B_ell|`.
    pub fn sample_length(&self, rng: &mut StreamRng) -> usize {
        match &self.small {
            Some(cum) => {
                let x = rng.below_u128(*cum.last().expect("ell >= 1"));
                cum.partition_point(|&c| c <= x) + 1
            }
            None => {
                let x = rng.below_big(self.ball_size());
                self.table.cumulative.partition_point(|c| c <= &x) + 1
            }
        }
    }

    /// Uniform word in `S_t`, with the number of attempts the rejection took.
    pub fn sample_exact_length(&self, rng: &mut StreamRng, t: usize) -> (Word, u32) {
        let alphabet = 2 * self.m as u64;
        let mut attempts = 0;
        loop {
            attempts += 1;
            let mut codes: Vec<u8> = Vec::with_capacity(t);
            codes.push(rng.below(alphabet) as u8);
            for _ in 1..t {
                let prev_inv = codes[codes.len() - 1] ^ 1;
                let mut c = rng.below(alphabet - 1) as u8;
                if c >= prev_inv {
                    c += 1;
                }
                codes.push(c);
            }
            if t < 2 || codes[0] != codes[t - 1] ^ 1 {
                return (Word::from_codes(&codes), attempts);
            }
        }
    }

    pub fn sample(&self, rng: &mut StreamRng) -> Word {
        let t = self.sample_length(rng);
        self.sample_exact_length(rng, t).0
    }
}

/// One uniform draw from the cyclically reduced words of length at most `ell_max`.
pub fn sample_cyclically_reduced(m: u32, ell_max: usize, seed: SeedSpec) -> Result<Word> {
    let sampler = WordSampler::new(m, ell_max)?;
    Ok(sampler.sample(&mut seed.rng()))
}

/// Smallest period of the letter sequence (KMP failure function).
pub fn smallest_period(letters: &[Letter]) -> usize {
    let n = letters.len();
    if n == 0 {
        return 0;
    }
    let mut fail = vec![0usize; n];
    let mut j = 0;
    for i in 1..n {
        while j > 0 && letters[i] != letters[j] {
            j = fail[j - 1];
        }
        if letters[i] == letters[j] {
            j += 1;
        }
        fail[i] = j;
    }
    n - fail[n - 1]
}

/// Whether `w = u^k` for some `k ≥ 2`.
pub fn is_true_power(w: &Word) -> Result<bool> {
    if w.is_empty() {
        return domain("the empty word has no root");
    }
    let p = smallest_period(w.letters());
    Ok(p < w.len() && w.len().is_multiple_of(p))
}
