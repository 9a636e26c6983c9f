//! N-block substitutions.
//!
//! For a constant-length substitution `α` of length `L` and a block length
//! `N`, the block alphabet is the set of length-`N` factors of the language of
//! `α`. A block `b` maps to the `L` consecutive width-`N` windows of `α(b)`.
//! For Thue-Morse with `N = 2^m + 1` the result also has a closed form, built
//! by [`theta_n_explicit`].

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::report::{Claim, ClaimResult};
use crate::substitution::{format_letters, Alphabet, Letter, Substitution, SubstitutionError};
use crate::thue_morse::{
    block_length, check_order, enumerate_by_descendants, factor_count, quarter_of_index, thue_morse_prefix,
    ThueMorseError, MAX_ORDER,
};
use crate::words::BinaryWord;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NBlockError {
    #[error("base substitution must have constant length >= 2")]
    NotConstantLength,
    #[error("base substitution is not primitive")]
    NotPrimitive,
    #[error("block length must be positive")]
    ZeroBlockLength,
    #[error("window {window} of block {block} is not a block of the language")]
    ClosureViolation { block: String, window: String },
    #[error(transparent)]
    Substitution(#[from] SubstitutionError),
    #[error(transparent)]
    ThueMorse(#[from] ThueMorseError),
}

/// A base substitution together with its `N`-block substitution.
#[derive(Debug, Clone)]
pub struct NBlockSystem {
    base: Substitution,
    block_len: usize,
    blocks: Vec<Vec<Letter>>,
    theta: Substitution,
}

impl NBlockSystem {
    pub fn base(&self) -> &Substitution {
        &self.base
    }

    pub fn block_len(&self) -> usize {
        self.block_len
    }

    /// The block alphabet's letters as words over the base alphabet.
    pub fn blocks(&self) -> &[Vec<Letter>] {
        &self.blocks
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.theta.alphabet()
    }

    /// The `N`-block substitution.
    pub fn substitution(&self) -> &Substitution {
        &self.theta
    }

    pub fn into_substitution(self) -> Substitution {
        self.theta
    }

    /// Block letter with the given binary label, for binary bases.
    pub fn letter_of(&self, word: &BinaryWord) -> Option<Letter> {
        self.alphabet().letter(&word.to_string())
    }
}

pub fn build_nblock(base: &Substitution, block_len: usize) -> Result<NBlockSystem, NBlockError> {
    let l = match base.constant_length() {
        Some(l) if l >= 2 => l,
        _ => return Err(NBlockError::NotConstantLength),
    };
    if block_len == 0 {
        return Err(NBlockError::ZeroBlockLength);
    }
    if !base.is_primitive() {
        return Err(NBlockError::NotPrimitive);
    }
    let (seed, power) = base.growing_seed_power()?;
    let blocks = power.language(block_len, seed)?;
    let labels: Vec<String> = blocks.iter().map(|b| b.iter().map(|a| base.alphabet().label(*a)).collect()).collect();
    let index: HashMap<&[Letter], Letter> =
        blocks.iter().enumerate().map(|(i, b)| (b.as_slice(), Letter::from_index(i))).collect();

    let mut images = Vec::with_capacity(blocks.len());
    for (i, b) in blocks.iter().enumerate() {
        let v = base.apply(b)?;
        let mut image = Vec::with_capacity(l);
        for start in 0..l {
            let window = &v[start..start + block_len];
            match index.get(window) {
                Some(&a) => image.push(a),
                None => {
                    return Err(NBlockError::ClosureViolation {
                        block: labels[i].clone(),
                        window: window.iter().map(|a| base.alphabet().label(*a)).collect(),
                    })
                }
            }
        }
        images.push(image);
    }
    let theta = Substitution::new(Alphabet::new(labels)?, images)?;
    Ok(NBlockSystem { base: base.clone(), block_len, blocks, theta })
}

/// `θ_N` for `N = 2^m + 1`, built from windows.
pub fn thue_morse_nblock(m: u32) -> Result<NBlockSystem, NBlockError> {
    check_order(m, 1, MAX_ORDER)?;
    build_nblock(&Substitution::thue_morse(), block_length(m))
}

/// Translation by half the alphabet on 1-based indices:
/// `τ(i) = ((i - 1 + k/2) mod k) + 1`. An involution.
pub fn tau(i: usize, k: usize) -> usize {
    assert!(k.is_multiple_of(2) && (1..=k).contains(&i), "tau needs even k and 1 <= i <= k");
    (i - 1 + k / 2) % k + 1
}

/// [`tau`] on letters.
#[inline]
pub fn tau_letter(a: Letter, k: usize) -> Letter {
    Letter::from_index(tau(a.number(), k) - 1)
}

/// First and second image letters of a length-2 substitution,
/// `θ_N(w_i) = w_{F(i)} w_{G(i)}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairMaps {
    pub f: Vec<Letter>,
    pub g: Vec<Letter>,
}

impl PairMaps {
    /// `F` and `G` from the closed form: `F(2i-1) = F(2i) = k/4 + i`, `G = τ∘F`.
    pub fn explicit(m: u32) -> Self {
        let k = factor_count(m);
        let f: Vec<Letter> = (0..k).map(|j| Letter::from_index(k / 4 + j / 2)).collect();
        let g = f.iter().map(|&a| tau_letter(a, k)).collect();
        Self { f, g }
    }

    /// Reads `F` and `G` off a substitution of constant length 2.
    pub fn from_substitution(s: &Substitution) -> Option<Self> {
        if s.constant_length() != Some(2) {
            return None;
        }
        let (f, g) = s.images().iter().map(|img| (img[0], img[1])).unzip();
        Some(Self { f, g })
    }

    pub fn len(&self) -> usize {
        self.f.len()
    }

    pub fn is_empty(&self) -> bool {
        self.f.is_empty()
    }

    pub fn pair(&self, j: Letter) -> [Letter; 2] {
        [self.f[j.index()], self.g[j.index()]]
    }

    /// `w_i ↦ w_{F(i)} w_{G(i)}` on `alphabet`.
    pub fn assemble(&self, alphabet: Alphabet) -> Result<Substitution, SubstitutionError> {
        let images = self.f.iter().zip(&self.g).map(|(&a, &b)| vec![a, b]).collect();
        Substitution::new(alphabet, images)
    }
}

/// `θ_N` on `A_m` from the closed form.
pub fn theta_n_explicit(m: u32) -> Result<Substitution, NBlockError> {
    check_order(m, 2, MAX_ORDER)?;
    let set = enumerate_by_descendants(m)?;
    let alphabet = Alphabet::new(set.words().iter().map(|w| w.to_string()).collect())?;
    Ok(PairMaps::explicit(m).assemble(alphabet)?)
}

fn letters_in_quarters(k: usize, quarters: &[usize]) -> impl Iterator<Item = Letter> + '_ {
    (0..k).filter(move |&i| quarters.contains(&quarter_of_index(i, k))).map(Letter::from_index)
}

/// Closed form against the window construction, plus the structure of `F`.
pub fn verify_prop_nblock(m: u32) -> Result<ClaimResult, NBlockError> {
    check_order(m, 2, MAX_ORDER)?;
    let built = thue_morse_nblock(m)?;
    let explicit = theta_n_explicit(m)?;
    Ok(nblock_checks(m, &built, &explicit))
}

pub fn nblock_checks(m: u32, built: &NBlockSystem, explicit: &Substitution) -> ClaimResult {
    let mut res = ClaimResult::new(m, Claim::Nblock);
    let theta = built.substitution();
    let k = theta.size();

    let alphabet_ok = theta.alphabet() == explicit.alphabet();
    res.check("alphabet", alphabet_ok, format!("{} block letters, |A_m| = {}", k, factor_count(m)));
    if !alphabet_ok {
        return res;
    }

    let mismatches: Vec<Letter> = theta.alphabet().letters().filter(|&a| theta.image(a) != explicit.image(a)).collect();
    let detail = match mismatches.first() {
        None => format!("all {k} images agree"),
        Some(&a) => format!(
            "{} images differ, first at {a}: windows give {}, formula gives {}",
            mismatches.len(),
            format_letters(theta.image(a)),
            format_letters(explicit.image(a))
        ),
    };
    res.check("images", mismatches.is_empty(), detail);

    let Some(maps) = PairMaps::from_substitution(theta) else {
        res.check("constant length 2", false, "window construction is not of length 2");
        return res;
    };
    let f_image =
        |qs: &[usize]| -> BTreeSet<Letter> { letters_in_quarters(k, qs).map(|a| maps.f[a.index()]).collect() };
    let quarter = |q: usize| -> BTreeSet<Letter> { letters_in_quarters(k, &[q]).collect() };
    res.check("F(Q1 u Q2) = Q2", f_image(&[1, 2]) == quarter(2), "");
    res.check("F(Q3 u Q4) = Q3", f_image(&[3, 4]) == quarter(3), "");

    let mut counts: HashMap<&[Letter], usize> = HashMap::new();
    for img in theta.images() {
        *counts.entry(img.as_slice()).or_default() += 1;
    }
    let two_to_one = counts.values().all(|&c| c == 2);
    res.check("exactly 2-to-1", two_to_one, format!("{} distinct images", counts.len()));

    let f0 = thue_morse_prefix(block_length(m));
    match built.letter_of(&f0) {
        Some(a) => {
            let expected = [a, tau_letter(a, k)];
            let ok = theta.image(a) == expected;
            res.check("theta_N(f0) = f0 tau(f0)", ok, format!("f0 = {a}, image {}", format_letters(theta.image(a))));
        }
        None => {
            res.check("theta_N(f0) = f0 tau(f0)", false, format!("f0 = {f0} is not a block"));
        }
    }
    res
}
