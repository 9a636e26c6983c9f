//! Injective, primitive, non-constant-length conjugates of `θ_N`.
//!
//! `θ_N` is exactly 2-to-1 on letters. `η_N` keeps `θ_N` on even-indexed
//! letters and moves letters between the images of odd-indexed letters that
//! always occur side by side at even positions of the fixed point, so that
//! the two substitutions agree on every such pair while `η_N` becomes
//! injective:
//!
//! | odd `w_i` in | `η_N(w_i)`                      |
//! |--------------|---------------------------------|
//! | `Q_1`        | `w_{G(i)}`                      |
//! | `Q_2`        | `w_{F(i)}`                      |
//! | `Q_3`        | `θ_N(w_i) w_{F(τ(i))}`          |
//! | `Q_4`        | `w_{G(τ(i))} θ_N(w_i)`          |
//!
//! Quarters and parities are taken on 1-based indices of the lexicographically
//! ordered alphabet `A_m`.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::nblock::{build_nblock, tau_letter, NBlockError, NBlockSystem, PairMaps};
use crate::report::{Claim, ClaimResult};
use crate::substitution::{format_letters, pf_eigenvalue, Alphabet, Letter, Substitution, SubstitutionError};
use crate::thue_morse::{block_length, check_order, quarter_of_index, thue_morse_prefix, ThueMorseError, MAX_ORDER};

/// Default iteration depth for fixed-point and growth checks.
pub const DEFAULT_DEPTH: u32 = 12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EtaError {
    #[error(transparent)]
    NBlock(#[from] NBlockError),
    #[error(transparent)]
    Substitution(#[from] SubstitutionError),
    #[error(transparent)]
    ThueMorse(#[from] ThueMorseError),
    #[error("block substitution for m = {0} is not of constant length 2")]
    NotPairs(u32),
    #[error("fixed-point prefix {0} is missing from the block alphabet")]
    MissingFixedPoint(String),
}

/// 1-based parity: `w_i` with even `i`.
#[inline]
pub fn is_even_letter(a: Letter) -> bool {
    a.number().is_multiple_of(2)
}

/// `θ_N`, its pair maps `F`, `G`, and `η_N`.
#[derive(Debug, Clone)]
pub struct EtaSystem {
    m: u32,
    nblock: NBlockSystem,
    maps: PairMaps,
    eta: Substitution,
    f0: Letter,
    f1: Letter,
}

impl EtaSystem {
    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn nblock(&self) -> &NBlockSystem {
        &self.nblock
    }

    pub fn theta(&self) -> &Substitution {
        self.nblock.substitution()
    }

    pub fn eta(&self) -> &Substitution {
        &self.eta
    }

    pub fn maps(&self) -> &PairMaps {
        &self.maps
    }

    /// Letter of `f_0`, the `N`-prefix of `0110…`.
    pub fn f0(&self) -> Letter {
        self.f0
    }

    /// Letter of `f_1`, the `N`-prefix of `1001…`.
    pub fn f1(&self) -> Letter {
        self.f1
    }

    pub fn size(&self) -> usize {
        self.eta.size()
    }

    /// Quarter (1..=4) of a letter.
    pub fn quarter(&self, a: Letter) -> usize {
        quarter_of_index(a.index(), self.size())
    }
}

/// Image of the odd letter `a` under `η_N`.
fn odd_image(theta: &Substitution, maps: &PairMaps, a: Letter, k: usize) -> Vec<Letter> {
    let i = a.index();
    match quarter_of_index(i, k) {
        1 => vec![maps.g[i]],
        2 => vec![maps.f[i]],
        3 => {
            let mut img = theta.image(a).to_vec();
            img.push(maps.f[tau_letter(a, k).index()]);
            img
        }
        _ => {
            let mut img = vec![maps.g[tau_letter(a, k).index()]];
            img.extend_from_slice(theta.image(a));
            img
        }
    }
}

/// `η_N` on the alphabet of `theta`.
pub fn eta_from_theta(theta: &Substitution) -> Option<Substitution> {
    let maps = PairMaps::from_substitution(theta)?;
    let k = theta.size();
    if !k.is_multiple_of(4) {
        return None;
    }
    let images = theta
        .alphabet()
        .letters()
        .map(|a| if is_even_letter(a) { theta.image(a).to_vec() } else { odd_image(theta, &maps, a, k) })
        .collect();
    Substitution::new(theta.alphabet().clone(), images).ok()
}

pub fn build_eta(m: u32) -> Result<EtaSystem, EtaError> {
    check_order(m, 2, MAX_ORDER)?;
    let nblock = build_nblock(&Substitution::thue_morse(), block_length(m))?;
    let theta = nblock.substitution();
    let maps = PairMaps::from_substitution(theta).ok_or(EtaError::NotPairs(m))?;
    let eta = eta_from_theta(theta).ok_or(EtaError::NotPairs(m))?;
    let f0_word = thue_morse_prefix(block_length(m));
    let f1_word = f0_word.mirror();
    let f0 = nblock.letter_of(&f0_word).ok_or_else(|| EtaError::MissingFixedPoint(f0_word.to_string()))?;
    let f1 = nblock.letter_of(&f1_word).ok_or_else(|| EtaError::MissingFixedPoint(f1_word.to_string()))?;
    Ok(EtaSystem { m, nblock, maps, eta, f0, f1 })
}

/// Alphabet `A_2`, the twelve factors of length 5.
fn a2_alphabet() -> Alphabet {
    let labels =
        ["00101", "00110", "01001", "01011", "01100", "01101", "10010", "10011", "10100", "10110", "11001", "11010"];
    Alphabet::new(labels.iter().map(|s| s.to_string()).collect()).expect("distinct labels")
}

/// The injective but non-primitive `ζ_5` on `A_2`.
pub fn zeta_5_fixture() -> Substitution {
    const IMAGES: [&[usize]; 12] = [
        &[10],
        &[4, 10],
        &[11],
        &[5, 11],
        &[6, 12, 9],
        &[6, 12],
        &[7, 1, 4],
        &[7, 1],
        &[8, 2, 5],
        &[8, 2],
        &[3],
        &[9, 3],
    ];
    let images = IMAGES.iter().map(|img| img.iter().map(|&i| Letter::from_index(i - 1)).collect()).collect();
    Substitution::new(a2_alphabet(), images).expect("valid fixture")
}

/// `η_N(w_{F(j)} w_{G(j)}) = θ_N(w_{F(j)} w_{G(j)})` for every `j`.
pub fn verify_pair_images(sys: &EtaSystem) -> ClaimResult {
    let mut res = ClaimResult::new(sys.m, Claim::Pairs);
    let mut failures = Vec::new();
    for j in sys.theta().alphabet().letters() {
        let pair = sys.maps.pair(j);
        let lhs = sys.eta.apply(&pair).expect("alphabet letters");
        let rhs = sys.theta().apply(&pair).expect("alphabet letters");
        if lhs != rhs {
            failures.push((j, lhs, rhs));
        }
    }
    let detail = match failures.first() {
        None => format!("all {} pairs", sys.size()),
        Some((j, lhs, rhs)) => format!(
            "{} pairs differ, first j = {}: eta gives {}, theta gives {}",
            failures.len(),
            j.number(),
            format_letters(lhs),
            format_letters(rhs)
        ),
    };
    res.check("pair images", failures.is_empty(), detail);
    res
}

/// Fixed-point agreement between a candidate and `θ_N`.
///
/// Checks `cand^n(f_0) = θ_N^n(f_0)` with `|θ_N^n(f_0)| = 2^n`, and that
/// `θ_N^n(f_1)` is a prefix of `cand^n(f_1)`, for `n = 1..=n_max`.
pub fn fixed_point_checks(
    m: u32,
    candidate: &Substitution,
    theta: &Substitution,
    f0: Letter,
    f1: Letter,
    n_max: u32,
) -> ClaimResult {
    let mut res = ClaimResult::new(m, Claim::Fixedpoint);

    let mut c = vec![f0];
    let mut t = vec![f0];
    let mut first_bad = None;
    for n in 1..=n_max {
        c = candidate.apply(&c).expect("alphabet letters");
        t = theta.apply(&t).expect("alphabet letters");
        if c != t || t.len() != 1usize << n {
            first_bad = Some((n, c.len(), t.len()));
            break;
        }
    }
    let detail = match first_bad {
        None => format!("n = 1..={n_max}, lengths 2^n"),
        Some((n, lc, lt)) => format!("first difference at n = {n} (lengths {lc} and {lt})"),
    };
    res.check("eta^n(f0) = theta^n(f0)", first_bad.is_none(), detail);

    let mut c = vec![f1];
    let mut t = vec![f1];
    let mut first_bad = None;
    for n in 1..=n_max {
        c = candidate.apply(&c).expect("alphabet letters");
        t = theta.apply(&t).expect("alphabet letters");
        if !c.starts_with(&t) {
            first_bad = Some(n);
            break;
        }
    }
    let detail = match first_bad {
        None => format!("n = 1..={n_max}"),
        Some(n) => format!("fails at n = {n}"),
    };
    res.check("theta^n(f1) prefix of eta^n(f1)", first_bad.is_none(), detail);
    res
}

pub fn verify_fixed_point(sys: &EtaSystem, n_max: u32) -> ClaimResult {
    fixed_point_checks(sys.m, &sys.eta, sys.theta(), sys.f0, sys.f1, n_max)
}

/// A map sending each letter to the first letter of its image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InitialsMap(Vec<Letter>);

impl InitialsMap {
    pub fn apply(&self, a: Letter) -> Letter {
        self.0[a.index()]
    }

    pub fn iterate(&self, a: Letter, n: usize) -> Letter {
        (0..n).fold(a, |x, _| self.apply(x))
    }

    /// Smallest `n ≤ max_steps` with `map^n(a)` in `targets`.
    pub fn steps_to(&self, a: Letter, targets: &[Letter], max_steps: usize) -> Option<usize> {
        let mut x = a;
        for n in 0..=max_steps {
            if targets.contains(&x) {
                return Some(n);
            }
            x = self.apply(x);
        }
        None
    }

    pub fn as_slice(&self) -> &[Letter] {
        &self.0
    }
}

/// `φ` for `θ_N`, `ψ` for `η_N`.
pub fn initials_map(s: &Substitution) -> InitialsMap {
    InitialsMap(s.initials())
}

/// Reachability argument for primitivity of `η_N`, checked directly on the
/// initials maps and the image graph, alongside the boolean-matrix test.
pub fn verify_primitivity_argument(sys: &EtaSystem) -> ClaimResult {
    let mut res = ClaimResult::new(sys.m, Claim::Primitivity);
    let k = sys.size();
    let letters: Vec<Letter> = sys.eta.alphabet().letters().collect();
    let phi = initials_map(sys.theta());
    let psi = initials_map(&sys.eta);
    let (f0, f1) = (sys.f0, sys.f1);

    // (a)
    let half = k / 2;
    let phi_bad: Vec<Letter> = letters
        .iter()
        .copied()
        .filter(|&a| {
            let target = if sys.quarter(a) <= 2 { f0 } else { f1 };
            phi.steps_to(a, &[target], half).is_none() || phi.apply(target) != target
        })
        .collect();
    res.check(
        "phi reaches f0 from Q1uQ2 and f1 from Q3uQ4",
        phi_bad.is_empty(),
        match phi_bad.first() {
            None => format!("within {half} steps"),
            Some(a) => format!("{} letters fail, first {a}", phi_bad.len()),
        },
    );

    // (b)
    let psi_steps: Vec<Option<usize>> = letters.iter().map(|&a| psi.steps_to(a, &[f0, f1], k)).collect();
    let worst = psi_steps.iter().flatten().max().copied().unwrap_or(0);
    let psi_bad = psi_steps.iter().filter(|s| s.is_none()).count();
    res.check(
        "psi reaches f0 or f1",
        psi_bad == 0,
        if psi_bad == 0 { format!("at most {worst} steps") } else { format!("{psi_bad} letters never reach f0 or f1") },
    );

    // (c)
    let not_increasing: Vec<Letter> =
        letters.iter().copied().filter(|&a| !is_even_letter(a) && sys.quarter(a) == 4 && psi.apply(a) <= a).collect();
    res.check(
        "psi increasing on Od n Q4",
        not_increasing.is_empty(),
        match not_increasing.first() {
            None => String::new(),
            Some(&a) => format!("psi({a}) = {}", psi.apply(a)),
        },
    );

    // (d)
    let odd_q1_ok =
        letters.iter().filter(|&&a| !is_even_letter(a) && sys.quarter(a) == 1).all(|&a| sys.quarter(psi.apply(a)) == 4);
    let even_q1_ok =
        letters.iter().filter(|&&a| is_even_letter(a) && sys.quarter(a) == 1).all(|&a| sys.quarter(psi.apply(a)) == 2);
    res.check(
        "psi(Od n Q1) in Q4, psi(E n Q1) in Q2",
        odd_q1_ok && even_q1_ok,
        format!("odd: {odd_q1_ok}, even: {even_q1_ok}"),
    );

    // psi = phi on Q2 u Q3
    let agree = letters.iter().filter(|&&a| matches!(sys.quarter(a), 2 | 3)).all(|&a| psi.apply(a) == phi.apply(a));
    res.check("psi = phi on Q2uQ3", agree, "");

    // (e)
    res.check("incidence matrix primitive", sys.eta.is_primitive(), format!("{k} x {k}"));

    // (f)
    for (name, seed) in [("f0", f0), ("f1", f1)] {
        let reach = sys.eta.reachable_from(seed);
        let missing = reach.iter().filter(|r| !**r).count();
        res.check(
            format!("every letter occurs in some eta^n({name})"),
            missing == 0,
            if missing == 0 { String::new() } else { format!("{missing} letters unreachable") },
        );
    }

    if sys.m == 2 {
        res.note("m = 2 lies below the m >= 3 range stated for the construction; outcome reported as computed");
    }
    res
}

/// Options for [`verify_theorem`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TheoremOptions {
    pub tol: f64,
    pub depth: u32,
}

impl Default for TheoremOptions {
    fn default() -> Self {
        Self { tol: crate::substitution::DEFAULT_TOL, depth: DEFAULT_DEPTH }
    }
}

/// Injective, primitive, PF eigenvalue 2, lengths `2^n`, shared fixed point.
pub fn theorem_checks(
    m: u32,
    candidate: &Substitution,
    theta: &Substitution,
    f0: Letter,
    f1: Letter,
    opts: TheoremOptions,
) -> ClaimResult {
    let mut res = ClaimResult::new(m, Claim::Theorem);
    res.check("injective", candidate.is_injective(), "letter images pairwise distinct");

    let primitive = candidate.is_primitive();
    let cycles = candidate.single_letter_cycles();
    let detail = match cycles.first() {
        Some(c) if !primitive => format!("single-letter cycle {}", format_letters(c)),
        _ => String::new(),
    };
    res.check("primitive", primitive, detail);

    let matrix = candidate.incidence_matrix();
    match pf_eigenvalue(&matrix, opts.tol) {
        Ok(pf) => res.check("PF eigenvalue 2", (pf - 2.0).abs() < opts.tol, format!("{pf:.12} (tol {:e})", opts.tol)),
        Err(e) => res.check("PF eigenvalue 2", false, e.to_string()),
    };

    // e^T M^n d_{f0} is the length of cand^n(f0) when M[a][b] counts a in cand(b).
    let k = candidate.size();
    let ones = vec![1u128; k];
    let mut d = vec![0u128; k];
    d[f0.index()] = 1;
    let mut word = vec![f0];
    let mut identity_bad = None;
    for n in 1..=opts.depth {
        word = candidate.apply(&word).expect("alphabet letters");
        match matrix.bilinear_power(&ones, &d, n) {
            Ok(v) if v == 1u128 << n && v == word.len() as u128 => {}
            Ok(v) => {
                identity_bad = Some(format!("n = {n}: matrix gives {v}, iterate has {}", word.len()));
                break;
            }
            Err(e) => {
                identity_bad = Some(e.to_string());
                break;
            }
        }
    }
    res.check(
        "length identity e^T M^n d = 2^n",
        identity_bad.is_none(),
        identity_bad.unwrap_or_else(|| format!("n = 1..={}", opts.depth)),
    );

    res.check("length growth 2^n", candidate.length_growth_check(f0, opts.depth), format!("seed {f0}"));

    let fp = fixed_point_checks(m, candidate, theta, f0, f1, opts.depth);
    let fp_detail: Vec<String> = fp.failures().map(|c| format!("{}: {}", c.name, c.detail)).collect();
    res.check("fixed point shared with theta_N", fp.passed(), fp_detail.join("; "));
    res
}

pub fn verify_theorem(m: u32, opts: TheoremOptions) -> Result<ClaimResult, EtaError> {
    let sys = build_eta(m)?;
    Ok(theorem_checks(m, &sys.eta, sys.theta(), sys.f0, sys.f1, opts))
}

/// Image-length profile: letters with image length 1, 2 and 3.
pub fn image_length_profile(s: &Substitution) -> [BTreeSet<Letter>; 3] {
    let mut out: [BTreeSet<Letter>; 3] = Default::default();
    for a in s.alphabet().letters() {
        let len = s.image(a).len();
        if (1..=3).contains(&len) {
            out[len - 1].insert(a);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(i: usize) -> Letter {
        Letter::from_index(i - 1)
    }

    fn ls(v: &[usize]) -> Vec<Letter> {
        v.iter().map(|&i| l(i)).collect()
    }

    /// Independent evaluation of the odd-letter rule from the listed θ_5 table.
    fn eta5_oracle() -> Vec<Vec<usize>> {
        let theta5: [(usize, usize); 12] =
            [(4, 10), (4, 10), (5, 11), (5, 11), (6, 12), (6, 12), (7, 1), (7, 1), (8, 2), (8, 2), (9, 3), (9, 3)];
        let tau = |i: usize| if i > 6 { i - 6 } else { i + 6 };
        let f = |i: usize| theta5[i - 1].0;
        let g = |i: usize| theta5[i - 1].1;
        (1..=12)
            .map(|i| {
                let (a, b) = theta5[i - 1];
                if i % 2 == 0 {
                    vec![a, b]
                } else {
                    match (i - 1) / 3 {
                        0 => vec![g(i)],
                        1 => vec![f(i)],
                        2 => vec![a, b, f(tau(i))],
                        _ => vec![g(tau(i)), a, b],
                    }
                }
            })
            .collect()
    }

    #[test]
    fn eta_5_images() {
        let sys = build_eta(2).unwrap();
        let eta = sys.eta();
        assert_eq!(eta.image(l(1)), ls(&[10]));
        assert_eq!(eta.image(l(3)), ls(&[11]));
        assert_eq!(eta.image(l(7)), ls(&[7, 1, 4]));
        assert_eq!(eta.image(l(9)), ls(&[8, 2, 5]));
        assert_eq!(eta.image(l(6)), ls(&[6, 12]));
        assert_eq!(eta.image(l(11)), ls(&[12, 9, 3]));
        for (i, img) in eta5_oracle().into_iter().enumerate() {
            assert_eq!(eta.image(l(i + 1)), ls(&img), "eta_5(w_{})", i + 1);
        }
        assert_ne!(eta, &zeta_5_fixture());
        assert_eq!(sys.f0(), l(6));
        assert_eq!(sys.f1(), l(7));
    }

    #[test]
    fn eta_5_column_sums() {
        let sys = build_eta(2).unwrap();
        assert_eq!(sys.eta().incidence_matrix().column_sums(), [1, 2, 1, 2, 1, 2, 3, 2, 3, 2, 3, 2]);
    }

    #[test]
    fn zeta_5_properties() {
        let z = zeta_5_fixture();
        assert!(z.is_injective());
        assert!(!z.is_primitive());
        assert_eq!(z.iterate(l(3), 2).unwrap(), ls(&[3]));
        assert!(z.single_letter_cycles().contains(&ls(&[3, 11])));
        let theta5 = build_eta(2).unwrap().theta().clone();
        assert_eq!(z.alphabet(), theta5.alphabet());
        for n in 1..=10 {
            assert_eq!(z.iterate(l(6), n).unwrap(), theta5.iterate(l(6), n).unwrap());
        }
        assert_eq!(z.incidence_matrix().column_sums()[2], 1);
        assert_eq!(z.incidence_matrix().get(10, 2), 1);
    }

    #[test]
    fn pair_images_m2() {
        let sys = build_eta(2).unwrap();
        let pair = sys.maps().pair(l(7));
        assert_eq!(pair, [l(7), l(1)]);
        assert_eq!(sys.eta().apply(&pair).unwrap(), ls(&[7, 1, 4, 10]));
        assert!(verify_pair_images(&sys).passed());
    }

    #[test]
    fn f1_prefix_runs_the_other_way() {
        let sys = build_eta(2).unwrap();
        let e = sys.eta().iterate(sys.f1(), 1).unwrap();
        let t = sys.theta().iterate(sys.f1(), 1).unwrap();
        // eta(f1) is not a prefix of theta(f1): it is one letter longer
        assert!(!t.starts_with(&e));
        assert!(e.starts_with(&t));
        assert!(verify_fixed_point(&sys, 12).passed());
    }

    #[test]
    fn initials_examples() {
        let sys = build_eta(2).unwrap();
        let phi = initials_map(sys.theta());
        let psi = initials_map(sys.eta());
        assert_eq!(phi.apply(l(1)), l(4));
        assert_eq!(psi.apply(l(1)), l(10));
        for i in 4..=9 {
            assert_eq!(psi.apply(l(i)), phi.apply(l(i)));
        }
        // the literal psi(Q1) ⊆ Q4 fails on even letters of Q1
        assert_eq!(psi.apply(l(2)), l(4));
        assert_eq!(sys.quarter(l(4)), 2);
    }

    #[test]
    fn primitivity_argument_m2_m3() {
        for m in [2, 3] {
            let sys = build_eta(m).unwrap();
            let r = verify_primitivity_argument(&sys);
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn theorem_m3_and_zeta() {
        let r = verify_theorem(3, TheoremOptions::default()).unwrap();
        assert!(r.passed(), "{r}");

        let sys = build_eta(2).unwrap();
        let z = zeta_5_fixture();
        let r = theorem_checks(2, &z, sys.theta(), sys.f0(), sys.f1(), TheoremOptions::default());
        let failed: Vec<&str> = r.failures().map(|c| c.name.as_str()).collect();
        assert_eq!(failed, ["primitive"], "{r}");
        assert!(r.check_named("primitive").unwrap().detail.contains("w_3 w_11"));
    }

    #[test]
    fn length_profile_m2() {
        let sys = build_eta(2).unwrap();
        let [one, two, three] = image_length_profile(sys.eta());
        assert_eq!(one.into_iter().collect::<Vec<_>>(), ls(&[1, 3, 5]));
        assert_eq!(two.len(), 6);
        assert_eq!(three.into_iter().collect::<Vec<_>>(), ls(&[7, 9, 11]));
    }

    #[test]
    fn eta_needs_m_at_least_2() {
        assert!(matches!(build_eta(1), Err(EtaError::ThueMorse(_))));
    }
}
