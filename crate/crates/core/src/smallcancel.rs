//! Relator sets, pieces and the `C'(λ)` small cancellation condition,
//! trivialization witnesses, and the explicit density thresholds.
//!
//! An occurrence is a triple (relator, orientation, offset): it reads the
//! relator (or its inverse) cyclically from `offset`. A piece of length `L`
//! is a word read at two distinct occurrences, with `L` at most the length of
//! both relators and, when both occurrences lie on the same relator `r`,
//! `L < |r|`.

use std::collections::{HashMap, HashSet};

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::words::{Letter, Word};

/// A finite set of distinct, nonempty, cyclically reduced relators of rank `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelatorSet {
    m: u32,
    relators: Vec<Word>,
}

impl RelatorSet {
    pub fn new(m: u32, relators: Vec<Word>) -> Result<Self> {
        if !(1..=crate::words::MAX_RANK).contains(&m) {
            return domain(format!("rank {m} must lie in [1, {}]", crate::words::MAX_RANK));
        }
        let mut seen = HashSet::with_capacity(relators.len());
        for r in &relators {
            if r.is_empty() {
                return domain("relators must be nonempty");
            }
            if !r.is_cyclically_reduced() {
                return domain(format!("relator {r} is not cyclically reduced"));
            }
            if r.min_rank() > m {
                return domain(format!("relator {r} uses a generator beyond rank {m}"));
            }
            if !seen.insert(r) {
                return domain(format!("relator {r} is repeated"));
            }
        }
        Ok(Self { m, relators })
    }

    /// Builds a set from relators already known to be valid and distinct.
    pub(crate) fn from_trusted(m: u32, relators: Vec<Word>) -> Self {
        Self { m, relators }
    }

    pub fn rank(&self) -> u32 {
        self.m
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn len(&self) -> usize {
        self.relators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relators.is_empty()
    }

    pub fn total_length(&self) -> usize {
        self.relators.iter().map(Word::len).sum()
    }

    fn cyclic(&self) -> Vec<Cyclic> {
        self.relators.iter().map(Cyclic::new).collect()
    }
}

/// Parses `rank m` followed by one relator per line. Blank lines and lines
/// starting with `#` are skipped.
pub fn parse_presentation(text: &str) -> Result<RelatorSet> {
    let mut lines =
        text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (line, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "missing `rank m` header".into() })?;
    let m: u32 = header
        .strip_prefix("rank")
        .map(str::trim)
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| Error::Parse { line, msg: format!("expected `rank m`, found `{header}`") })?;
    if !(1..=crate::words::MAX_RANK).contains(&m) {
        return Err(Error::Parse { line, msg: format!("rank {m} outside [1, {}]", crate::words::MAX_RANK) });
    }
    let mut relators = Vec::new();
    let mut seen = HashSet::new();
    for (line, text) in lines {
        let w: Word = text.parse().map_err(|e: Error| Error::Parse { line, msg: e.to_string() })?;
        let bad = |msg: String| Err(Error::Parse { line, msg });
        if !w.is_cyclically_reduced() {
            return bad(format!("relator {w} is not cyclically reduced"));
        }
        if w.min_rank() > m {
            return bad(format!("relator {w} uses a generator beyond rank {m}"));
        }
        if !seen.insert(w.clone()) {
            return bad(format!("relator {w} is repeated"));
        }
        relators.push(w);
    }
    Ok(RelatorSet::from_trusted(m, relators))
}

pub fn format_presentation(r: &RelatorSet) -> String {
    let mut out = format!("rank {}\n", r.rank());
    for w in r.relators() {
        out.push_str(&w.to_string());
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Occurrence {
    pub relator: usize,
    pub inverse: bool,
    pub offset: usize,
}

/// One cyclic reading of a relator in the symmetrized set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SymmetrizedEntry {
    pub word: Word,
    pub origin: Occurrence,
}

/// Every rotation of every relator and of its inverse, tagged by origin.
pub fn symmetrize(r: &RelatorSet) -> Vec<SymmetrizedEntry> {
    let mut out = Vec::with_capacity(2 * r.total_length());
    for (id, w) in r.relators().iter().enumerate() {
        let inv = w.inverse();
        for (inverse, base) in [(false, w), (true, &inv)] {
            for offset in 0..w.len() {
                out.push(SymmetrizedEntry {
                    word: base.rotate(offset),
                    origin: Occurrence { relator: id, inverse, offset },
                });
            }
        }
    }
    out
}

struct Cyclic {
    fwd: Vec<u8>,
    inv: Vec<u8>,
}

impl Cyclic {
    fn new(w: &Word) -> Self {
        Self { fwd: w.codes(), inv: w.inverse().codes() }
    }

    fn len(&self) -> usize {
        self.fwd.len()
    }

    #[inline]
    fn at(&self, inverse: bool, offset: usize, i: usize) -> u8 {
        let s = if inverse { &self.inv } else { &self.fwd };
        s[(offset + i) % s.len()]
    }
}

const MOD: u64 = (1 << 61) - 1;
const BASE: u64 = 0x1F3D_5B79_A3C1_E5B7 % MOD;

#[inline]
fn mulmod(a: u64, b: u64) -> u64 {
    let p = a as u128 * b as u128;
    let v = ((p >> 61) as u64) + ((p as u64) & MOD);
    if v >= MOD {
        v - MOD
    } else {
        v
    }
}

#[inline]
fn addmod(a: u64, b: u64) -> u64 {
    let v = a + b;
    if v >= MOD {
        v - MOD
    } else {
        v
    }
}

fn powmod(mut b: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b);
        }
        b = mulmod(b, b);
        e >>= 1;
    }
    r
}

/// Calls `f(offset, hash)` for every cyclic window of length `len` of `s`;
/// `top = BASE^{len-1}`.
fn for_each_window(s: &[u8], len: usize, top: u64, mut f: impl FnMut(usize, u64) -> bool) -> bool {
    let n = s.len();
    let mut h = 0;
    for i in 0..len {
        h = addmod(mulmod(h, BASE), s[i % n] as u64 + 1);
    }
    for offset in 0..n {
        if f(offset, h) {
            return true;
        }
        let out = mulmod(s[offset] as u64 + 1, top);
        h = addmod(h, MOD - out);
        h = addmod(mulmod(h, BASE), s[(offset + len) % n] as u64 + 1);
    }
    false
}

fn windows_equal(c: &[Cyclic], a: Occurrence, b: Occurrence, len: usize) -> bool {
    let (ra, rb) = (&c[a.relator], &c[b.relator]);
    (0..len).all(|i| ra.at(a.inverse, a.offset, i) == rb.at(b.inverse, b.offset, i))
}

fn pair_allowed(c: &[Cyclic], a: Occurrence, b: Occurrence, len: usize) -> bool {
    a != b
        && len <= c[a.relator].len()
        && len <= c[b.relator].len()
        && (a.relator != b.relator || len < c[a.relator].len())
}

fn read(c: &[Cyclic], o: Occurrence, len: usize) -> Word {
    Word::from_codes(&(0..len).map(|i| c[o.relator].at(o.inverse, o.offset, i)).collect::<Vec<_>>())
}

/// A piece occurring at `host` and at `other`. `host` is read forwards.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PieceWitness {
    pub piece: Word,
    pub host: Occurrence,
    pub other: Occurrence,
}

impl PieceWitness {
    pub fn len(&self) -> usize {
        self.piece.len()
    }

    pub fn is_empty(&self) -> bool {
        self.piece.is_empty()
    }
}

/// Orients a matching pair so the host reads forwards (inverting both reads
/// the inverse word at mirrored offsets).
fn forward_host(c: &[Cyclic], host: Occurrence, other: Occurrence, len: usize) -> (Occurrence, Occurrence) {
    if !host.inverse {
        return (host, other);
    }
    let flip = |o: Occurrence| {
        let n = c[o.relator].len();
        Occurrence { relator: o.relator, inverse: !o.inverse, offset: (2 * n - o.offset - len % n) % n }
    };
    (flip(host), flip(other))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelatorPieces {
    pub length: usize,
    pub max_piece: usize,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PieceReport {
    pub per_relator: Vec<RelatorPieces>,
    pub max_ratio: f64,
    /// A longest piece of the relator attaining `max_ratio`.
    pub witness: Option<PieceWitness>,
}

impl PieceReport {
    /// `max_piece(r) < λ|r|` for every relator.
    pub fn classical_holds(&self, lambda: f64) -> bool {
        self.per_relator.iter().all(|p| (p.max_piece as f64) < lambda * p.length as f64 - 1e-9)
    }

    /// `max_piece(r) ≤ λ|r|` for every relator.
    pub fn non_strict_holds(&self, lambda: f64) -> bool {
        self.per_relator.iter().all(|p| (p.max_piece as f64) <= lambda * p.length as f64 + 1e-9)
    }
}

/// Longest piece hosted by each relator, found by hashing all windows of each
/// length in increasing order. A relator that hosts a piece of length `L`
/// hosts one of every shorter length, so the scan stops at the first length
/// with no host.
pub fn max_piece_ratio(r: &RelatorSet) -> PieceReport {
    let c = r.cyclic();
    let mut best: Vec<Option<PieceWitness>> = vec![None; c.len()];
    let max_len = c.iter().map(Cyclic::len).max().unwrap_or(0);
    for len in 1..=max_len {
        let top = powmod(BASE, len as u64 - 1);
        let mut buckets: HashMap<u64, Vec<Occurrence>> = HashMap::new();
        for (id, cy) in c.iter().enumerate() {
            if cy.len() < len {
                continue;
            }
            for inverse in [false, true] {
                let s = if inverse { &cy.inv } else { &cy.fwd };
                for_each_window(s, len, top, |offset, h| {
                    buckets.entry(h).or_default().push(Occurrence { relator: id, inverse, offset });
                    false
                });
            }
        }
        let mut any = false;
        for bucket in buckets.values().filter(|b| b.len() >= 2) {
            // split hash collisions into classes of equal words
            let mut classes: Vec<Vec<Occurrence>> = Vec::new();
            for &o in bucket {
                match classes.iter_mut().find(|cl| windows_equal(&c, cl[0], o, len)) {
                    Some(cl) => cl.push(o),
                    None => classes.push(vec![o]),
                }
            }
            for class in classes.iter().filter(|cl| cl.len() >= 2) {
                for &a in class {
                    if best[a.relator].as_ref().is_some_and(|w| w.len() >= len) {
                        continue;
                    }
                    if let Some(&b) = class.iter().find(|&&b| pair_allowed(&c, a, b, len)) {
                        let (host, other) = forward_host(&c, a, b, len);
                        best[a.relator] = Some(PieceWitness { piece: read(&c, host, len), host, other });
                        any = true;
                    }
                }
            }
        }
        if !any {
            break;
        }
    }
    let per_relator: Vec<RelatorPieces> = c
        .iter()
        .zip(&best)
        .map(|(cy, w)| {
            let max_piece = w.as_ref().map_or(0, PieceWitness::len);
            RelatorPieces { length: cy.len(), max_piece, ratio: max_piece as f64 / cy.len() as f64 }
        })
        .collect();
    let arg = (0..per_relator.len())
        .max_by(|&i, &j| per_relator[i].ratio.partial_cmp(&per_relator[j].ratio).unwrap().then(j.cmp(&i)));
    let max_ratio = arg.map_or(0.0, |i| per_relator[i].ratio);
    let witness = arg.and_then(|i| best[i].clone());
    PieceReport { per_relator, max_ratio, witness }
}

/// Which inequality a piece must satisfy against its host.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PieceRule {
    /// `|p| < λ|r|`.
    Classical,
    /// `|p| ≤ λ|r|`.
    NonStrict,
}

impl PieceRule {
    /// Shortest piece length in a relator of length `t` that violates the rule.
    pub fn threshold(self, lambda: f64, t: usize) -> usize {
        let x = lambda * t as f64;
        let v = match self {
            PieceRule::Classical => (x - 1e-9).ceil(),
            PieceRule::NonStrict => (x + 1e-9).floor() + 1.0,
        };
        (v.max(1.0) as usize).min(t)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CPrimeVerdict {
    pub lambda: f64,
    pub rule: PieceRule,
    pub holds: bool,
    pub witness: Option<PieceWitness>,
}

/// Whether every piece hosted in a relator `r` has `|p| < λ|r|`.
pub fn satisfies_c_prime(r: &RelatorSet, lambda: f64) -> Result<CPrimeVerdict> {
    satisfies_c_prime_with(r, lambda, PieceRule::Classical)
}

/// `C'(λ)` check under `rule`: relator `r` violates it iff it hosts a piece of
/// length `t_r = rule.threshold(λ, |r|)` (a longer piece has such a prefix).
///
/// For each threshold value `L`, the windows of length `L` of the relators
/// with `t_r = L` are indexed in both orientations; the forward windows of
/// relators with `t_r > L` are then looked up in that index. A violating pair
/// whose other relator has a smaller threshold is found in that relator's
/// pass. Stops at the first violation.
pub fn satisfies_c_prime_with(r: &RelatorSet, lambda: f64, rule: PieceRule) -> Result<CPrimeVerdict> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return domain(format!("λ = {lambda} must lie in (0, 1)"));
    }
    let c = r.cyclic();
    let thr: Vec<usize> = c.iter().map(|cy| rule.threshold(lambda, cy.len())).collect();
    let mut by_thr: HashMap<usize, Vec<usize>> = HashMap::new();
    for (id, &t) in thr.iter().enumerate() {
        by_thr.entry(t).or_default().push(id);
    }
    let mut order: Vec<(usize, Vec<usize>)> = by_thr.into_iter().collect();
    // big classes first: that is where violations show up soonest
    order.sort_by(|a, b| b.1.len().cmp(&a.1.len()).then(a.0.cmp(&b.0)));
    for (len, hosts) in &order {
        if let Some(w) = detect_at_length(&c, &thr, *len, hosts) {
            return Ok(CPrimeVerdict { lambda, rule, holds: false, witness: Some(w) });
        }
    }
    Ok(CPrimeVerdict { lambda, rule, holds: true, witness: None })
}

const NIL: u32 = u32::MAX;

fn detect_at_length(c: &[Cyclic], thr: &[usize], len: usize, hosts: &[usize]) -> Option<PieceWitness> {
    let top = powmod(BASE, len as u64 - 1);
    let cap: usize = hosts.iter().map(|&h| 2 * c[h].len()).sum();
    let mut heads: HashMap<u64, u32> = HashMap::with_capacity(cap);
    let mut entries: Vec<(Occurrence, u32)> = Vec::with_capacity(cap);
    let mut found = None;
    for &id in hosts {
        for inverse in [false, true] {
            let s = if inverse { &c[id].inv } else { &c[id].fwd };
            let stop = for_each_window(s, len, top, |offset, h| {
                let o = Occurrence { relator: id, inverse, offset };
                let head = heads.get(&h).copied().unwrap_or(NIL);
                let mut cur = head;
                while cur != NIL {
                    let (prev, next) = entries[cur as usize];
                    if pair_allowed(c, o, prev, len) && windows_equal(c, o, prev, len) {
                        found = Some((o, prev));
                        return true;
                    }
                    cur = next;
                }
                entries.push((o, head));
                heads.insert(h, (entries.len() - 1) as u32);
                false
            });
            if stop {
                let (a, b) = found.expect("set on stop");
                return Some(extend_witness(c, a, b, len));
            }
        }
    }
    for (id, cy) in c.iter().enumerate() {
        if thr[id] <= len {
            continue;
        }
        let stop = for_each_window(&cy.fwd, len, top, |offset, h| {
            let o = Occurrence { relator: id, inverse: false, offset };
            let mut cur = heads.get(&h).copied().unwrap_or(NIL);
            while cur != NIL {
                let (prev, next) = entries[cur as usize];
                if windows_equal(c, o, prev, len) {
                    found = Some((prev, o));
                    return true;
                }
                cur = next;
            }
            false
        });
        if stop {
            let (a, b) = found.expect("set on stop");
            return Some(extend_witness(c, a, b, len));
        }
    }
    None
}

/// Extends a matching pair forwards while letters agree and the pair stays a
/// piece; `host` is the relator whose threshold was hit.
fn extend_witness(c: &[Cyclic], host: Occurrence, other: Occurrence, len: usize) -> PieceWitness {
    let mut l = len;
    loop {
        let next = l + 1;
        if !pair_allowed(c, host, other, next)
            || c[host.relator].at(host.inverse, host.offset, l) != c[other.relator].at(other.inverse, other.offset, l)
        {
            break;
        }
        l = next;
    }
    let (host, other) = forward_host(c, host, other, l);
    PieceWitness { piece: read(c, host, l), host, other }
}

/// A relator `w` with `x·w` also a relator, where `w` neither starts nor
/// ends with `x⁻¹`; then `x = 1` in the presented group.
pub fn find_trivializing_pair(r: &RelatorSet, x: Letter) -> Option<Word> {
    let set: HashSet<&Word> = r.relators().iter().collect();
    let xi = x.inverse();
    r.relators()
        .iter()
        .filter(|w| w.letters().first() != Some(&xi) && w.letters().last() != Some(&xi))
        .find(|w| set.contains(&Word::from_letters(std::iter::once(x).chain(w.letters().iter().copied()).collect())))
        .cloned()
}

/// Explicit constants for rank `m` and slack `ε`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Thresholds {
    pub m: u32,
    pub epsilon: f64,
    pub mu: f64,
    pub lambda: f64,
    pub d_ao: f64,
    pub dens_m: f64,
    /// `λ/2 > d_AO`.
    pub half_lambda_exceeds_d_ao: bool,
    /// `d_AO < 1 - dens_M`.
    pub d_ao_below_codensity: bool,
    /// `λ > 1/(60 m² ln 2m)`.
    pub lambda_exceeds_floor: bool,
}

impl Thresholds {
    pub fn all_hold(&self) -> bool {
        self.half_lambda_exceeds_d_ao && self.d_ao_below_codensity && self.lambda_exceeds_floor
    }
}

/// `μ = log_{2m}(1 + 1/(4m-4)) - ε`, `λ = μ/(15m + 3μ)`,
/// `d_AO = 1/(120 m² ln 2m)` and `dens_M = log_{2m-1}(2m - 5/4)`.
/// `ε = 0` gives the limiting values.
pub fn thresholds(m: u32, epsilon: f64) -> Result<Thresholds> {
    if m < 2 {
        return domain(format!("rank {m} must be at least 2"));
    }
    if epsilon.is_nan() || epsilon < 0.0 {
        return domain(format!("slack {epsilon} must be non-negative"));
    }
    let mf = m as f64;
    let ln2m = (2.0 * mf).ln();
    let mu = (1.0 + 1.0 / (4.0 * mf - 4.0)).ln() / ln2m - epsilon;
    if mu <= 0.0 {
        return domain(format!("slack {epsilon} leaves μ = {mu} non-positive"));
    }
    let lambda = mu / (15.0 * mf + 3.0 * mu);
    let d_ao = 1.0 / (120.0 * mf * mf * ln2m);
    let dens_m = (2.0 * mf - 1.25).ln() / (2.0 * mf - 1.0).ln();
    Ok(Thresholds {
        m,
        epsilon,
        mu,
        lambda,
        d_ao,
        dens_m,
        half_lambda_exceeds_d_ao: lambda / 2.0 > d_ao,
        d_ao_below_codensity: d_ao < 1.0 - dens_m,
        lambda_exceeds_floor: lambda > 1.0 / (60.0 * mf * mf * ln2m),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rs(m: u32, words: &[&str]) -> RelatorSet {
        RelatorSet::new(m, words.iter().map(|w| w.parse().unwrap()).collect()).unwrap()
    }

    #[test]
    fn relator_set_validation() {
        assert!(RelatorSet::new(2, vec!["aA".parse().unwrap()]).is_err());
        assert!(RelatorSet::new(2, vec!["abA".parse().unwrap()]).is_err());
        assert!(RelatorSet::new(2, vec![Word::empty()]).is_err());
        assert!(RelatorSet::new(2, vec!["ab".parse().unwrap(), "ab".parse().unwrap()]).is_err());
        assert!(RelatorSet::new(2, vec!["ac".parse().unwrap()]).is_err());
    }

    #[test]
    fn symmetrize_examples() {
        let s = symmetrize(&rs(2, &["a"]));
        let words: Vec<String> = s.iter().map(|e| e.word.to_string()).collect();
        assert_eq!(words, ["a", "A"]);
        let s = symmetrize(&rs(2, &["ab"]));
        let words: Vec<String> = s.iter().map(|e| e.word.to_string()).collect();
        assert_eq!(words, ["ab", "ba", "BA", "AB"]);
        assert_eq!(symmetrize(&rs(2, &["aab"])).len(), 6);
    }

    #[test]
    fn piece_examples() {
        let single = max_piece_ratio(&rs(2, &["a"]));
        assert_eq!(single.max_ratio, 0.0);
        assert!(single.witness.is_none());

        let power = max_piece_ratio(&rs(2, &["abab"]));
        assert_eq!(power.max_ratio, 0.75);
        assert_eq!(power.witness.as_ref().unwrap().piece.len(), 3);

        let cross = max_piece_ratio(&rs(2, &["aab", "abb"]));
        assert!((cross.max_ratio - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(cross.per_relator[0].max_piece, 2);
        assert_eq!(cross.per_relator[1].max_piece, 2);
        assert_eq!(cross.witness.unwrap().piece.len(), 2);
    }

    #[test]
    fn c_prime_examples() {
        let power = rs(2, &["abab"]);
        assert!(satisfies_c_prime(&power, 0.8).unwrap().holds);
        let v = satisfies_c_prime(&power, 0.5).unwrap();
        assert!(!v.holds);
        let w = v.witness.unwrap();
        assert_eq!(w.piece.len(), 3);
        for lambda in [0.1, 0.5, 0.99] {
            assert!(satisfies_c_prime(&rs(2, &["a"]), lambda).unwrap().holds);
        }
        assert!(satisfies_c_prime(&power, 1.0).is_err());
        // 3 ≤ 0.75·4 holds under the non-strict rule only
        assert!(!satisfies_c_prime(&power, 0.75).unwrap().holds);
        assert!(satisfies_c_prime_with(&power, 0.75, PieceRule::NonStrict).unwrap().holds);
    }

    #[test]
    fn witnesses_read_the_piece_at_both_occurrences() {
        let r = rs(3, &["abcab", "cabbc", "aBcc"]);
        let c = r.cyclic();
        let report = max_piece_ratio(&r);
        if let Some(w) = &report.witness {
            assert_eq!(read(&c, w.host, w.len()), w.piece);
            assert_eq!(read(&c, w.other, w.len()), w.piece);
            assert!(!w.host.inverse);
        }
        let v = satisfies_c_prime(&r, 0.3).unwrap();
        let w = v.witness.unwrap();
        assert_eq!(read(&c, w.host, w.len()), w.piece);
        assert_eq!(read(&c, w.other, w.len()), w.piece);
    }

    #[test]
    fn threshold_rules() {
        assert_eq!(PieceRule::Classical.threshold(0.5, 4), 2);
        assert_eq!(PieceRule::NonStrict.threshold(0.5, 4), 3);
        assert_eq!(PieceRule::Classical.threshold(0.5, 5), 3);
        assert_eq!(PieceRule::NonStrict.threshold(0.5, 5), 3);
        assert_eq!(PieceRule::Classical.threshold(0.1, 1), 1);
    }

    #[test]
    fn trivializing_examples() {
        let a = Letter::generator(0);
        assert_eq!(find_trivializing_pair(&rs(2, &["b", "ab"]), a), Some("b".parse().unwrap()));
        assert_eq!(find_trivializing_pair(&rs(2, &["a", "b"]), a), None);
        assert_eq!(find_trivializing_pair(&rs(2, &["ab", "aab", "b"]), a), Some("ab".parse().unwrap()));
        assert_eq!(find_trivializing_pair(&rs(2, &["a", "Ba"]), Letter::generator(1)), None);
    }

    #[test]
    fn presentation_round_trip() {
        let text = "# two relators\nrank 2\nabAB\n\nbbA\n";
        let r = parse_presentation(text).unwrap();
        assert_eq!(r.rank(), 2);
        assert_eq!(r.len(), 2);
        assert_eq!(parse_presentation(&format_presentation(&r)).unwrap(), r);
    }

    #[test]
    fn presentation_errors_carry_lines() {
        match parse_presentation("rank 2\nab\naA\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_presentation("rnk 2\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_presentation(""), Err(Error::Parse { .. })));
        assert!(matches!(parse_presentation("rank 2\nac\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_presentation("rank 2\nab\nab\n"), Err(Error::Parse { line: 3, .. })));
    }

    #[test]
    fn threshold_values() {
        let t = thresholds(2, 0.0).unwrap();
        assert!((t.mu - 1.25f64.ln() / 4f64.ln()).abs() < 1e-15);
        assert!((t.mu - 0.160_964).abs() < 1e-6);
        assert!((t.d_ao - 1.0 / (480.0 * 4f64.ln())).abs() < 1e-18);
        assert!((t.d_ao - 1.5028e-3).abs() < 1e-7);
        assert!((t.lambda - 5.281e-3).abs() < 1e-6);
        assert!(t.all_hold());
        assert!(thresholds(2, 0.2).is_err());
        assert!(thresholds(1, 0.0).is_err());
    }
}
