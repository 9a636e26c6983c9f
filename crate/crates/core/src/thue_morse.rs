//! Thue-Morse factors of length `2^m + 1`.
//!
//! `A_m` is enumerated two ways: by scanning a long prefix of the fixed point
//! of `0 ↦ 01, 1 ↦ 10`, and by growing `A_1` through the descendant maps
//! `δ` (prefix) and `ε` (suffix) of the Thue-Morse image. The verifiers here
//! check the lexicographic structure of `A_m` under its quarter partition.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::report::{Claim, ClaimResult};
use crate::substitution::{Letter, Substitution};
use crate::words::{BinaryWord, WordError};

/// Largest supported `m`.
pub const MAX_ORDER: u32 = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ThueMorseError {
    #[error("m = {m} is outside the supported range {min}..={max}")]
    UnsupportedOrder { m: u32, min: u32, max: u32 },
    #[error("found {found} distinct factors of length {len}, expected at most {expected}")]
    TooManyFactors { found: usize, expected: usize, len: usize },
    #[error(transparent)]
    Word(#[from] WordError),
}

pub(crate) fn check_order(m: u32, min: u32, max: u32) -> Result<(), ThueMorseError> {
    if (min..=max).contains(&m) {
        Ok(())
    } else {
        Err(ThueMorseError::UnsupportedOrder { m, min, max })
    }
}

/// `N = 2^m + 1`.
#[inline]
pub fn block_length(m: u32) -> usize {
    (1usize << m) + 1
}

/// `|A_m| = 3 · 2^m`.
#[inline]
pub fn factor_count(m: u32) -> usize {
    3usize << m
}

/// Prefix of length `len` of the Thue-Morse sequence, `t(n) = popcount(n) mod 2`.
pub fn thue_morse_prefix(len: usize) -> BinaryWord {
    BinaryWord::from_bits((0..len).map(|n| n.count_ones() % 2 == 1))
}

/// The lexicographically ordered set `A_m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorSet {
    m: u32,
    words: Vec<BinaryWord>,
}

impl FactorSet {
    fn from_sorted(m: u32, words: Vec<BinaryWord>) -> Self {
        debug_assert!(words.windows(2).all(|p| p[0] < p[1]));
        Self { m, words }
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Length of every word in the set.
    pub fn word_length(&self) -> usize {
        block_length(self.m)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[BinaryWord] {
        &self.words
    }

    /// `w_i`, 1-based.
    pub fn w(&self, i: usize) -> &BinaryWord {
        &self.words[i - 1]
    }

    /// 0-based position of `word`.
    pub fn index_of(&self, word: &BinaryWord) -> Option<usize> {
        self.words.binary_search(word).ok()
    }

    pub fn contains(&self, word: &BinaryWord) -> bool {
        self.index_of(word).is_some()
    }

    pub fn quarter_len(&self) -> usize {
        self.words.len() / 4
    }

    /// `Q_k` for `k = 1..=4`.
    pub fn quarter(&self, k: usize) -> &[BinaryWord] {
        assert!((1..=4).contains(&k), "quarters are numbered 1..=4");
        let q = self.quarter_len();
        &self.words[(k - 1) * q..k * q]
    }

    /// Quarter (1..=4) holding the 0-based position `idx`.
    pub fn quarter_of(&self, idx: usize) -> usize {
        quarter_of_index(idx, self.words.len())
    }
}

/// Quarter (1..=4) of the 0-based position `idx` in an alphabet of size `k`.
#[inline]
pub fn quarter_of_index(idx: usize, k: usize) -> usize {
    idx / (k / 4) + 1
}

/// Enumerates `A_m` from windows of the Thue-Morse fixed point, doubling the
/// scanned prefix until all `3·2^m` factors are seen.
pub fn enumerate_by_scan(m: u32) -> Result<FactorSet, ThueMorseError> {
    check_order(m, 1, MAX_ORDER)?;
    let n = block_length(m);
    let target = factor_count(m);
    let theta = Substitution::thue_morse();
    let mut prefix_len = 16 * n;
    loop {
        let letters = theta
            .fixed_point_prefix(Letter(0), prefix_len)
            .expect("0 is a growing seed of the Thue-Morse substitution");
        let text = BinaryWord::from_bits(letters.iter().map(|a| a.0 == 1));
        let mut seen = BTreeSet::new();
        for start in 0..=text.len() - n {
            seen.insert(text.slice(start, n)?);
        }
        if seen.len() > target {
            return Err(ThueMorseError::TooManyFactors { found: seen.len(), expected: target, len: n });
        }
        if seen.len() == target {
            return Ok(FactorSet::from_sorted(m, seen.into_iter().collect()));
        }
        prefix_len *= 2;
    }
}

/// `δ(w)` and `ε(w)`: the prefix and suffix of length `2|w| - 1` of the
/// Thue-Morse image of `w`.
pub fn descendants(w: &BinaryWord) -> (BinaryWord, BinaryWord) {
    assert!(!w.is_empty(), "descendants of the empty word are undefined");
    let image = w.thue_morse_image();
    let len = 2 * w.len() - 1;
    let delta = image.prefix(len).expect("image has length 2|w|");
    let eps = image.suffix(len).expect("image has length 2|w|");
    (delta, eps)
}

/// `A_1 = {001, 010, 011, 100, 101, 110}`.
pub fn base_factor_set() -> FactorSet {
    let words = ["001", "010", "011", "100", "101", "110"].iter().map(|s| s.parse().expect("binary literal")).collect();
    FactorSet::from_sorted(1, words)
}

/// Grows `A_m` from `A_1` by applying `δ` and `ε` to every word, `m - 1` times.
pub fn enumerate_by_descendants(m: u32) -> Result<FactorSet, ThueMorseError> {
    check_order(m, 1, MAX_ORDER)?;
    let mut set = base_factor_set();
    for level in 2..=m {
        let mut next = BTreeSet::new();
        for w in &set.words {
            let (d, e) = descendants(w);
            next.insert(d);
            next.insert(e);
        }
        set = FactorSet::from_sorted(level, next.into_iter().collect());
    }
    Ok(set)
}

/// Minima of the quarters together with the fixed-point prefixes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuarterMarkers {
    pub q: [BinaryWord; 4],
    /// 1-based indices of `q_1..q_4` in `A_m`.
    pub q_index: [usize; 4],
    pub f0: BinaryWord,
    pub f1: BinaryWord,
    pub f0_index: Option<usize>,
    pub f1_index: Option<usize>,
}

pub fn quarter_markers(set: &FactorSet) -> QuarterMarkers {
    let q_len = set.quarter_len();
    let q_index = [1, q_len + 1, 2 * q_len + 1, 3 * q_len + 1];
    let q = q_index.map(|i| set.w(i).clone());
    let f0 = thue_morse_prefix(set.word_length());
    let f1 = f0.mirror();
    QuarterMarkers {
        q,
        q_index,
        f0_index: set.index_of(&f0).map(|i| i + 1),
        f1_index: set.index_of(&f1).map(|i| i + 1),
        f0,
        f1,
    }
}

fn literal(s: &str) -> BinaryWord {
    s.parse().expect("binary literal")
}

/// `(p)⁻¹ f_1 s` as used in the expressions for `q_1, q_2, q_4`.
fn cancel_and_extend(f1: &BinaryWord, strip: &str, append: &str) -> Result<BinaryWord, WordError> {
    Ok(f1.strip_prefix(&literal(strip))?.concat(&literal(append)))
}

/// The quarter minima as expressions in `f_1`:
/// `q_1 = 1⁻¹f_1 1`, `q_2 = (10)⁻¹f_1 11`, `q_3 = f_1`, `q_4 = (100)⁻¹f_1 110`.
pub fn verify_prop_qandf(m: u32) -> Result<ClaimResult, ThueMorseError> {
    check_order(m, 2, MAX_ORDER)?;
    let set = enumerate_by_scan(m)?;
    Ok(qandf_checks(&set))
}

pub fn qandf_checks(set: &FactorSet) -> ClaimResult {
    let markers = quarter_markers(set);
    let f1 = &markers.f1;
    let mut res = ClaimResult::new(set.m(), Claim::Qandf);
    let expected = [
        cancel_and_extend(f1, "1", "1"),
        cancel_and_extend(f1, "10", "11"),
        Ok(f1.clone()),
        cancel_and_extend(f1, "100", "110"),
    ];
    let formulas = ["1^-1 f1 1", "(10)^-1 f1 11", "f1", "(100)^-1 f1 110"];
    for (k, (exp, formula)) in expected.into_iter().zip(formulas).enumerate() {
        let q = &markers.q[k];
        let (ok, detail) = match exp {
            Ok(e) if &e == q => (true, format!("q{} = {formula} = {q}", k + 1)),
            Ok(e) => (false, format!("q{} = {q} but {formula} = {e}", k + 1)),
            Err(err) => (false, format!("{formula}: {err}")),
        };
        res.check(format!("q{}", k + 1), ok, detail);
    }
    res
}

fn image_set(words: &[BinaryWord], map: impl Fn(&BinaryWord) -> BinaryWord) -> Vec<BinaryWord> {
    let set: BTreeSet<_> = words.iter().map(map).collect();
    set.into_iter().collect()
}

/// The quarters of `A_{m+1}` as `δ`/`ε` images of the half-sets of `A_m`.
pub fn verify_prop_quarters(m: u32) -> Result<ClaimResult, ThueMorseError> {
    check_order(m, 2, MAX_ORDER - 1)?;
    let cur = enumerate_by_scan(m)?;
    let next = enumerate_by_scan(m + 1)?;
    Ok(quarters_checks(&cur, &next))
}

pub fn quarters_checks(cur: &FactorSet, next: &FactorSet) -> ClaimResult {
    let half = cur.len() / 2;
    let low = &cur.words()[..half];
    let high = &cur.words()[half..];
    let delta = |w: &BinaryWord| descendants(w).0;
    let eps = |w: &BinaryWord| descendants(w).1;
    let cases = [
        ("Q1 = eps(Q3 u Q4)", 1, image_set(high, eps)),
        ("Q2 = delta(Q1 u Q2)", 2, image_set(low, delta)),
        ("Q3 = delta(Q3 u Q4)", 3, image_set(high, delta)),
        ("Q4 = eps(Q1 u Q2)", 4, image_set(low, eps)),
    ];
    let mut res = ClaimResult::new(cur.m(), Claim::Quarters);
    for (name, k, image) in cases {
        let quarter = next.quarter(k);
        let ok = image.as_slice() == quarter;
        let detail = if ok {
            format!("{} words", quarter.len())
        } else {
            let missing = quarter.iter().filter(|w| image.binary_search(w).is_err()).count();
            format!("image has {} words, quarter has {}, {missing} quarter words missing", image.len(), quarter.len())
        };
        res.check(name, ok, detail);
    }
    res
}

/// `Pref_N(w^{m+1}_{2i-1}) = Pref_N(w^{m+1}_{2i}) = w^m_i` for every `i`.
pub fn verify_lemma_firsthalf(m: u32) -> Result<ClaimResult, ThueMorseError> {
    check_order(m, 1, MAX_ORDER - 1)?;
    let cur = enumerate_by_scan(m)?;
    let next = enumerate_by_scan(m + 1)?;
    Ok(firsthalf_checks(&cur, &next))
}

pub fn firsthalf_checks(cur: &FactorSet, next: &FactorSet) -> ClaimResult {
    let n = cur.word_length();
    let mut res = ClaimResult::new(cur.m(), Claim::Firsthalf);
    let sizes_ok = next.len() == 2 * cur.len();
    res.check("size", sizes_ok, format!("|A_m+1| = {}, 2|A_m| = {}", next.len(), 2 * cur.len()));
    if !sizes_ok {
        return res;
    }
    for (parity, offset) in [("odd", 0usize), ("even", 1)] {
        let bad = (0..cur.len()).find(|&i| next.words()[2 * i + offset].prefix(n).as_ref() != Ok(&cur.words()[i]));
        let detail = match bad {
            None => format!("all {} indices", cur.len()),
            Some(i) => format!(
                "Pref_{n}(w_{}) = {} but w_{} = {}",
                2 * i + offset + 1,
                next.words()[2 * i + offset].prefix(n).map(|p| p.to_string()).unwrap_or_default(),
                i + 1,
                cur.words()[i]
            ),
        };
        res.check(format!("{parity} indices"), bad.is_none(), detail);
    }
    res
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::w;

    const EXAMPLE_1: [&str; 12] =
        ["00101", "00110", "01001", "01011", "01100", "01101", "10010", "10011", "10100", "10110", "11001", "11010"];

    #[test]
    fn scan_m1_and_m2() {
        let a1 = enumerate_by_scan(1).unwrap();
        assert_eq!(a1, base_factor_set());
        let a2 = enumerate_by_scan(2).unwrap();
        let got: Vec<String> = a2.words().iter().map(|x| x.to_string()).collect();
        assert_eq!(got, EXAMPLE_1);
    }

    #[test]
    fn scan_m3_w13() {
        let a3 = enumerate_by_scan(3).unwrap();
        assert_eq!(a3.len(), 24);
        assert_eq!(a3.w(13), &w("100101100"));
    }

    #[test]
    fn order_limits() {
        assert!(matches!(enumerate_by_scan(0), Err(ThueMorseError::UnsupportedOrder { .. })));
        assert!(matches!(enumerate_by_descendants(13), Err(ThueMorseError::UnsupportedOrder { .. })));
        assert!(verify_prop_qandf(1).is_err());
        assert!(verify_prop_quarters(12).is_err());
    }

    #[test]
    fn descendant_examples() {
        assert_eq!(descendants(&w("00101")), (w("010110011"), w("101100110")));
        assert_eq!(descendants(&w("10010")).0, w("100101100"));
        let (d, _) = descendants(&w("01101"));
        assert_eq!(d, w("011010011"));
        let a3 = enumerate_by_scan(3).unwrap();
        // w_12 = f_0 of A_3
        assert_eq!(a3.index_of(&d), Some(11));
    }

    #[test]
    fn descendants_match_scan_small() {
        for m in 1..=6 {
            assert_eq!(enumerate_by_descendants(m).unwrap(), enumerate_by_scan(m).unwrap(), "m = {m}");
        }
    }

    #[test]
    fn markers_m2_m3() {
        let mk = quarter_markers(&enumerate_by_scan(2).unwrap());
        assert_eq!(mk.q, [w("00101"), w("01011"), w("10010"), w("10110")]);
        assert_eq!((mk.f0.clone(), mk.f1.clone()), (w("01101"), w("10010")));
        let mk = quarter_markers(&enumerate_by_scan(3).unwrap());
        assert_eq!(mk.q_index, [1, 7, 13, 19]);
        assert_eq!((mk.f0_index, mk.f1_index), (Some(12), Some(13)));
        assert_eq!(mk.q[2], mk.f1);
    }

    #[test]
    fn qandf_small() {
        for m in 2..=5 {
            let r = verify_prop_qandf(m).unwrap();
            assert!(r.passed(), "{r}");
        }
        let r = verify_prop_qandf(2).unwrap();
        assert_eq!(r.check_named("q4").unwrap().detail, "q4 = (100)^-1 f1 110 = 10110");
    }

    #[test]
    fn quarters_small() {
        let r = verify_prop_quarters(2).unwrap();
        assert!(r.passed(), "{r}");
        let a3 = enumerate_by_scan(3).unwrap();
        let a2 = enumerate_by_scan(2).unwrap();
        let img = image_set(&a2.words()[..6], |x| descendants(x).0);
        assert_eq!(img.as_slice(), &a3.words()[6..12]);
    }

    #[test]
    fn firsthalf_examples() {
        let a2 = enumerate_by_scan(2).unwrap();
        let a3 = enumerate_by_scan(3).unwrap();
        assert_eq!(a3.w(1).prefix(5).unwrap(), *a2.w(1));
        assert_eq!(a3.w(2).prefix(5).unwrap(), w("00101"));
        assert_eq!(a3.w(23), &w("110100101"));
        assert_eq!(a3.w(23).prefix(5).unwrap(), *a2.w(12));
        for m in 1..=4 {
            let r = verify_lemma_firsthalf(m).unwrap();
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn firsthalf_detects_a_broken_set() {
        let a2 = enumerate_by_scan(2).unwrap();
        let mut a3 = enumerate_by_scan(3).unwrap();
        a3.words.swap(0, 23);
        let r = firsthalf_checks(&a2, &a3);
        assert!(!r.passed());
    }

    #[test]
    fn popcount_prefix_matches_iteration() {
        let theta = Substitution::thue_morse();
        let it = theta.iterate(Letter(0), 10).unwrap();
        let bits = BinaryWord::from_bits(it.iter().map(|a| a.0 == 1));
        assert_eq!(thue_morse_prefix(1024), bits);
    }
}
