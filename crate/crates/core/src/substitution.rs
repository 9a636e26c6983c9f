//! Substitutions over a finite ordered alphabet.
//!
//! Letters are opaque indices into an [`Alphabet`]; the alphabet carries a
//! display label for each letter (for block alphabets, the underlying binary
//! word). Images may have different lengths.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SubstitutionError {
    #[error("alphabet must contain at least one letter")]
    EmptyAlphabet,
    #[error("duplicate letter label `{0}`")]
    DuplicateLabel(String),
    #[error("expected {expected} images, got {got}")]
    ImageCount { expected: usize, got: usize },
    #[error("image of letter {0} is empty")]
    EmptyImage(usize),
    #[error("letter index {letter} is outside an alphabet of size {size}")]
    UnknownLetter { letter: usize, size: usize },
    #[error("letter {0} is not a growing seed (its image must start with it and have length >= 2)")]
    NotAFixedPointSeed(usize),
    #[error("no letter of this substitution or of its first {0} powers is a growing seed")]
    NoGrowingSeed(usize),
    #[error("power iteration did not converge within {iterations} iterations (bracket width {width:e})")]
    NoConvergence { iterations: usize, width: f64 },
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),
    #[error("integer overflow in incidence-matrix power {0}")]
    Overflow(u32),
    #[error("alphabets differ, substitutions cannot be composed")]
    AlphabetMismatch,
    #[error("malformed substitution JSON: {0}")]
    Json(String),
}

/// A letter of an [`Alphabet`], stored as its 0-based position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Letter(pub u32);

impl Letter {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn from_index(i: usize) -> Self {
        Letter(u32::try_from(i).expect("alphabet index fits in u32"))
    }

    /// 1-based position, as in `w_i`.
    #[inline]
    pub fn number(self) -> usize {
        self.index() + 1
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "w_{}", self.number())
    }
}

/// Writes a letter word as `w_i w_j …`.
pub fn format_letters(word: &[Letter]) -> String {
    let mut out = String::new();
    for (i, a) in word.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        let _ = write!(out, "{a}");
    }
    out
}

/// Ordered alphabet of distinct labelled letters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    labels: Vec<String>,
    lookup: HashMap<String, Letter>,
}

impl Alphabet {
    pub fn new(labels: Vec<String>) -> Result<Self, SubstitutionError> {
        if labels.is_empty() {
            return Err(SubstitutionError::EmptyAlphabet);
        }
        let mut lookup = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if lookup.insert(l.clone(), Letter::from_index(i)).is_some() {
                return Err(SubstitutionError::DuplicateLabel(l.clone()));
            }
        }
        Ok(Self { labels, lookup })
    }

    pub fn binary() -> Self {
        Self::new(vec!["0".into(), "1".into()]).expect("distinct labels")
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, a: Letter) -> &str {
        &self.labels[a.index()]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn letter(&self, label: &str) -> Option<Letter> {
        self.lookup.get(label).copied()
    }

    pub fn letters(&self) -> impl ExactSizeIterator<Item = Letter> {
        (0..self.labels.len()).map(Letter::from_index)
    }

    pub fn contains(&self, a: Letter) -> bool {
        a.index() < self.labels.len()
    }
}

/// A substitution: one nonempty image word per letter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Substitution {
    alphabet: Alphabet,
    images: Vec<Vec<Letter>>,
}

impl Substitution {
    pub fn new(alphabet: Alphabet, images: Vec<Vec<Letter>>) -> Result<Self, SubstitutionError> {
        if images.len() != alphabet.len() {
            return Err(SubstitutionError::ImageCount { expected: alphabet.len(), got: images.len() });
        }
        for (i, img) in images.iter().enumerate() {
            if img.is_empty() {
                return Err(SubstitutionError::EmptyImage(i));
            }
            if let Some(bad) = img.iter().find(|a| !alphabet.contains(**a)) {
                return Err(SubstitutionError::UnknownLetter { letter: bad.index(), size: alphabet.len() });
            }
        }
        Ok(Self { alphabet, images })
    }

    /// Builds a substitution on an unlabelled alphabet `0..k`.
    pub fn from_indices(images: Vec<Vec<usize>>) -> Result<Self, SubstitutionError> {
        let alphabet = Alphabet::new((0..images.len()).map(|i| i.to_string()).collect())?;
        let images = images.into_iter().map(|img| img.into_iter().map(Letter::from_index).collect()).collect();
        Self::new(alphabet, images)
    }

    /// The Thue-Morse substitution `0 ↦ 01, 1 ↦ 10`.
    pub fn thue_morse() -> Self {
        Self::new(Alphabet::binary(), vec![vec![Letter(0), Letter(1)], vec![Letter(1), Letter(0)]]).expect("valid")
    }

    /// The period-doubling substitution `0 ↦ 01, 1 ↦ 00`.
    pub fn period_doubling() -> Self {
        Self::new(Alphabet::binary(), vec![vec![Letter(0), Letter(1)], vec![Letter(0), Letter(0)]]).expect("valid")
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn size(&self) -> usize {
        self.alphabet.len()
    }

    pub fn image(&self, a: Letter) -> &[Letter] {
        &self.images[a.index()]
    }

    pub fn images(&self) -> &[Vec<Letter>] {
        &self.images
    }

    /// `Some(L)` when every image has length `L`.
    pub fn constant_length(&self) -> Option<usize> {
        let l = self.images[0].len();
        self.images.iter().all(|img| img.len() == l).then_some(l)
    }

    fn check_word(&self, word: &[Letter]) -> Result<(), SubstitutionError> {
        match word.iter().find(|a| !self.alphabet.contains(**a)) {
            Some(bad) => Err(SubstitutionError::UnknownLetter { letter: bad.index(), size: self.size() }),
            None => Ok(()),
        }
    }

    pub fn apply(&self, word: &[Letter]) -> Result<Vec<Letter>, SubstitutionError> {
        self.check_word(word)?;
        Ok(self.apply_unchecked(word))
    }

    fn apply_unchecked(&self, word: &[Letter]) -> Vec<Letter> {
        let len = word.iter().map(|a| self.images[a.index()].len()).sum();
        let mut out = Vec::with_capacity(len);
        for a in word {
            out.extend_from_slice(&self.images[a.index()]);
        }
        out
    }

    /// `s^n(a)`.
    pub fn iterate(&self, a: Letter, n: u32) -> Result<Vec<Letter>, SubstitutionError> {
        self.iterate_word(&[a], n)
    }

    pub fn iterate_word(&self, word: &[Letter], n: u32) -> Result<Vec<Letter>, SubstitutionError> {
        self.check_word(word)?;
        let mut cur = word.to_vec();
        for _ in 0..n {
            cur = self.apply_unchecked(&cur);
        }
        Ok(cur)
    }

    pub fn is_growing_seed(&self, a: Letter) -> bool {
        self.alphabet.contains(a) && {
            let img = self.image(a);
            img.len() >= 2 && img[0] == a
        }
    }

    /// A prefix of length at least `min_len` of the one-sided fixed point
    /// starting with `a`.
    pub fn fixed_point_prefix(&self, a: Letter, min_len: usize) -> Result<Vec<Letter>, SubstitutionError> {
        if !self.is_growing_seed(a) {
            return Err(SubstitutionError::NotAFixedPointSeed(a.index()));
        }
        let mut cur = vec![a];
        while cur.len() < min_len {
            let next = self.apply_unchecked(&cur);
            debug_assert!(next.starts_with(&cur));
            cur = next;
        }
        Ok(cur)
    }

    /// `self ∘ other`, i.e. `a ↦ self(other(a))`.
    pub fn compose(&self, other: &Substitution) -> Result<Substitution, SubstitutionError> {
        if self.alphabet != other.alphabet {
            return Err(SubstitutionError::AlphabetMismatch);
        }
        let images = other.images.iter().map(|img| self.apply_unchecked(img)).collect();
        Substitution::new(self.alphabet.clone(), images)
    }

    pub fn incidence_matrix(&self) -> IncidenceMatrix {
        let k = self.size();
        let mut entries = vec![0u64; k * k];
        for (b, img) in self.images.iter().enumerate() {
            for a in img {
                entries[a.index() * k + b] += 1;
            }
        }
        IncidenceMatrix { k, entries }
    }

    /// Letter images pairwise distinct.
    pub fn is_injective(&self) -> bool {
        let mut seen = HashSet::with_capacity(self.size());
        self.images.iter().all(|img| seen.insert(img.as_slice()))
    }

    pub fn is_primitive(&self) -> bool {
        self.incidence_matrix().is_primitive()
    }

    /// Letters occurring in `s^n(a)` for some `n ≥ 1`.
    pub fn reachable_from(&self, a: Letter) -> Vec<bool> {
        let mut seen = vec![false; self.size()];
        let mut queue: VecDeque<Letter> = self.image(a).iter().copied().collect();
        while let Some(b) = queue.pop_front() {
            if !std::mem::replace(&mut seen[b.index()], true) {
                queue.extend(self.image(b).iter().copied());
            }
        }
        seen
    }

    /// Cycles of letters whose images are single letters, such as
    /// `a ↦ b ↦ a`. Any such cycle on a proper subset of the alphabet
    /// makes the substitution non-primitive.
    pub fn single_letter_cycles(&self) -> Vec<Vec<Letter>> {
        let k = self.size();
        let next = |a: usize| match self.images[a].as_slice() {
            [b] => Some(b.index()),
            _ => None,
        };
        // 0 = unvisited, 1 = on current path, 2 = done
        let mut state = vec![0u8; k];
        let mut cycles = Vec::new();
        for start in 0..k {
            let mut path = Vec::new();
            let mut cur = Some(start);
            while let Some(a) = cur {
                match state[a] {
                    0 => {
                        state[a] = 1;
                        path.push(a);
                        cur = next(a);
                    }
                    1 => {
                        let pos = path.iter().position(|&x| x == a).expect("on path");
                        cycles.push(path[pos..].iter().map(|&x| Letter::from_index(x)).collect());
                        break;
                    }
                    _ => break,
                }
            }
            for a in path {
                state[a] = 2;
            }
        }
        cycles
    }

    /// Whether `|s^n(a)| = 2^n` for `n = 1..=n_max`.
    pub fn length_growth_check(&self, a: Letter, n_max: u32) -> bool {
        if !self.alphabet.contains(a) {
            return false;
        }
        let mut cur = vec![a];
        for n in 1..=n_max {
            cur = self.apply_unchecked(&cur);
            if cur.len() as u128 != 1u128 << n {
                return false;
            }
        }
        true
    }

    /// A letter that is a growing seed of `self^p` for the smallest `p ≤ k`.
    pub fn growing_seed_power(&self) -> Result<(Letter, Substitution), SubstitutionError> {
        let k = self.size();
        let mut power = self.clone();
        for _ in 0..k.max(1) {
            if let Some(a) = power.alphabet.letters().find(|&a| power.is_growing_seed(a)) {
                return Ok((a, power));
            }
            power = self.compose(&power)?;
        }
        Err(SubstitutionError::NoGrowingSeed(k))
    }

    /// All factors of length `len` of the fixed point grown from `seed`, in
    /// alphabet order.
    ///
    /// Iterates until two consecutive iterates have the same factor set and
    /// the iterate is longer than `2 * len`.
    pub fn language(&self, len: usize, seed: Letter) -> Result<Vec<Vec<Letter>>, SubstitutionError> {
        if !self.is_growing_seed(seed) {
            return Err(SubstitutionError::NotAFixedPointSeed(seed.index()));
        }
        let factors_of = |word: &[Letter]| -> HashSet<Vec<Letter>> {
            if len == 0 {
                return std::iter::once(Vec::new()).collect();
            }
            word.windows(len).map(<[Letter]>::to_vec).collect()
        };
        let mut cur = vec![seed];
        let mut prev = factors_of(&cur);
        loop {
            cur = self.apply_unchecked(&cur);
            let next = factors_of(&cur);
            if next == prev && cur.len() > 2 * len {
                let mut out: Vec<_> = next.into_iter().collect();
                out.sort_unstable();
                return Ok(out);
            }
            prev = next;
        }
    }

    /// Initial letters of the images, `a ↦ first(s(a))`.
    pub fn initials(&self) -> Vec<Letter> {
        self.images.iter().map(|img| img[0]).collect()
    }

    pub fn to_json(&self) -> SubstitutionJson {
        SubstitutionJson {
            alphabet: self.alphabet.labels.clone(),
            images: self.images.iter().map(|img| img.iter().map(|a| a.index()).collect()).collect(),
        }
    }

    pub fn from_json(json: SubstitutionJson) -> Result<Self, SubstitutionError> {
        let alphabet = Alphabet::new(json.alphabet)?;
        let images = json
            .images
            .into_iter()
            .map(|img| {
                img.into_iter()
                    .map(|i| {
                        if i < alphabet.len() {
                            Ok(Letter::from_index(i))
                        } else {
                            Err(SubstitutionError::UnknownLetter { letter: i, size: alphabet.len() })
                        }
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(alphabet, images)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("plain data serializes")
    }

    pub fn from_json_str(s: &str) -> Result<Self, SubstitutionError> {
        let json: SubstitutionJson = serde_json::from_str(s).map_err(|e| SubstitutionError::Json(e.to_string()))?;
        Self::from_json(json)
    }

    /// Graphviz rendering: one node per letter, one edge `b -> a` per
    /// occurrence of `a` in the image of `b`.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "digraph \"{name}\" {{");
        for a in self.alphabet.letters() {
            let _ = writeln!(out, "  w{0} [label=\"w{0}:{1}\"];", a.number(), self.alphabet.label(a));
        }
        for b in self.alphabet.letters() {
            for a in self.image(b) {
                let _ = writeln!(out, "  w{} -> w{};", b.number(), a.number());
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Wire form: labels plus 0-based image indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubstitutionJson {
    pub alphabet: Vec<String>,
    pub images: Vec<Vec<usize>>,
}

/// `k × k` non-negative integer matrix; `M[a][b]` counts `a` in the image of `b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceMatrix {
    k: usize,
    entries: Vec<u64>,
}

impl IncidenceMatrix {
    pub fn from_rows(rows: Vec<Vec<u64>>) -> Self {
        let k = rows.len();
        assert!(rows.iter().all(|r| r.len() == k), "matrix must be square");
        Self { k, entries: rows.into_iter().flatten().collect() }
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> u64 {
        self.entries[row * self.k + col]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u64]> {
        self.entries.chunks(self.k.max(1))
    }

    pub fn column_sums(&self) -> Vec<u64> {
        let mut sums = vec![0; self.k];
        for row in self.rows() {
            for (s, x) in sums.iter_mut().zip(row) {
                *s += x;
            }
        }
        sums
    }

    pub fn checked_mul(&self, other: &IncidenceMatrix) -> Option<IncidenceMatrix> {
        assert_eq!(self.k, other.k);
        let k = self.k;
        let mut entries = vec![0u64; k * k];
        for i in 0..k {
            for j in 0..k {
                let a = self.get(i, j);
                if a == 0 {
                    continue;
                }
                for c in 0..k {
                    let t = a.checked_mul(other.get(j, c))?;
                    entries[i * k + c] = entries[i * k + c].checked_add(t)?;
                }
            }
        }
        Some(IncidenceMatrix { k, entries })
    }

    pub fn checked_pow(&self, n: u32) -> Option<IncidenceMatrix> {
        let mut acc = IncidenceMatrix {
            k: self.k,
            entries: (0..self.k * self.k).map(|x| u64::from(x / self.k == x % self.k)).collect(),
        };
        for _ in 0..n {
            acc = acc.checked_mul(self)?;
        }
        Some(acc)
    }

    /// `left^T · M^n · right`, exact, failing on overflow.
    pub fn bilinear_power(&self, left: &[u128], right: &[u128], n: u32) -> Result<u128, SubstitutionError> {
        assert_eq!(left.len(), self.k);
        assert_eq!(right.len(), self.k);
        // row vector times M, n times
        let mut row = left.to_vec();
        for step in 1..=n {
            let mut next = vec![0u128; self.k];
            for (i, &r) in row.iter().enumerate() {
                if r == 0 {
                    continue;
                }
                for (j, out) in next.iter_mut().enumerate() {
                    let e = u128::from(self.get(i, j));
                    let t = r.checked_mul(e).ok_or(SubstitutionError::Overflow(step))?;
                    *out = out.checked_add(t).ok_or(SubstitutionError::Overflow(step))?;
                }
            }
            row = next;
        }
        row.iter().zip(right).try_fold(0u128, |acc, (r, x)| {
            r.checked_mul(*x).and_then(|t| acc.checked_add(t)).ok_or(SubstitutionError::Overflow(n))
        })
    }

    pub fn transpose(&self) -> IncidenceMatrix {
        let k = self.k;
        let mut entries = vec![0; k * k];
        for i in 0..k {
            for j in 0..k {
                entries[j * k + i] = self.get(i, j);
            }
        }
        IncidenceMatrix { k, entries }
    }

    /// Some power has all entries positive. Squares the boolean pattern
    /// until the exponent passes the Wielandt bound `(k-1)^2 + 1`.
    pub fn is_primitive(&self) -> bool {
        let bound = (self.k as u128 - 1).pow(2) + 1;
        let mut pattern = BoolMatrix::from_incidence(self);
        let mut exponent: u128 = 1;
        loop {
            if pattern.is_full() {
                return true;
            }
            if exponent >= bound {
                return false;
            }
            pattern = pattern.square();
            exponent *= 2;
        }
    }
}

/// Row-major bit matrix used for primitivity.
#[derive(Clone)]
struct BoolMatrix {
    k: usize,
    words_per_row: usize,
    bits: Vec<u64>,
}

impl BoolMatrix {
    fn from_incidence(m: &IncidenceMatrix) -> Self {
        let k = m.size();
        let words_per_row = k.div_ceil(64);
        let mut bits = vec![0u64; k * words_per_row];
        for i in 0..k {
            for j in 0..k {
                if m.get(i, j) > 0 {
                    bits[i * words_per_row + j / 64] |= 1 << (j % 64);
                }
            }
        }
        Self { k, words_per_row, bits }
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words_per_row..(i + 1) * self.words_per_row]
    }

    fn square(&self) -> Self {
        let w = self.words_per_row;
        let mut bits = vec![0u64; self.k * w];
        for i in 0..self.k {
            let out = &mut bits[i * w..(i + 1) * w];
            for j in 0..self.k {
                if self.row(i)[j / 64] >> (j % 64) & 1 == 1 {
                    for (o, x) in out.iter_mut().zip(self.row(j)) {
                        *o |= x;
                    }
                }
            }
        }
        Self { k: self.k, words_per_row: w, bits }
    }

    fn is_full(&self) -> bool {
        let tail = self.k % 64;
        let last_mask = if tail == 0 { !0 } else { (1u64 << tail) - 1 };
        (0..self.k).all(|i| {
            let row = self.row(i);
            row[..row.len() - 1].iter().all(|&x| x == !0) && row[row.len() - 1] & last_mask == last_mask
        })
    }
}

/// Default tolerance for [`pf_eigenvalue`].
pub const DEFAULT_TOL: f64 = 1e-9;
/// Iteration cap for [`pf_eigenvalue`].
pub const MAX_POWER_ITERATIONS: usize = 10_000;

/// Perron-Frobenius eigenvalue by power iteration from the all-ones vector.
///
/// For a positive vector `x`, `min_i (Mx)_i / x_i ≤ λ ≤ max_i (Mx)_i / x_i`
/// (Collatz-Wielandt). Iteration stops once that bracket is narrower than
/// `tol`, and returns its midpoint.
pub fn pf_eigenvalue(m: &IncidenceMatrix, tol: f64) -> Result<f64, SubstitutionError> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(SubstitutionError::BadTolerance(tol));
    }
    let k = m.size();
    let mut x = vec![1.0f64; k];
    let mut width = f64::INFINITY;
    for _ in 0..MAX_POWER_ITERATIONS {
        let mut y = vec![0.0f64; k];
        for (i, row) in m.rows().enumerate() {
            y[i] = row.iter().zip(&x).map(|(&a, &b)| a as f64 * b).sum();
        }
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for (yi, xi) in y.iter().zip(&x) {
            if *xi <= 0.0 {
                lo = 0.0;
                hi = f64::INFINITY;
                break;
            }
            let r = yi / xi;
            lo = lo.min(r);
            hi = hi.max(r);
        }
        width = hi - lo;
        if width < tol {
            return Ok(0.5 * (lo + hi));
        }
        let norm: f64 = y.iter().sum();
        if !norm.is_finite() || norm <= 0.0 {
            break;
        }
        x = y.into_iter().map(|v| v / norm).collect();
    }
    Err(SubstitutionError::NoConvergence { iterations: MAX_POWER_ITERATIONS, width })
}
