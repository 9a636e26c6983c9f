//! Thue-Morse factors of length `2^m + 1`, the `N`-block substitutions `θ_N`
//! of the Thue-Morse substitution, and the injective primitive substitutions
//! `η_N` sharing a fixed point with them.
//!
//! The crate is organized bottom-up:
//!
//! - [`words`]: bit-packed binary words with lexicographic order;
//! - [`substitution`]: general substitutions, incidence matrices,
//!   primitivity and Perron-Frobenius eigenvalues;
//! - [`thue_morse`]: enumeration and quarter structure of `A_m`;
//! - [`nblock`]: `N`-block substitutions and the closed form of `θ_N`;
//! - [`injectivize`]: `η_N`, the `ζ_5` fixture and the theorem checks;
//! - [`report`]: pass/fail records consumed by the command-line tool.

pub mod injectivize;
pub mod nblock;
pub mod report;
pub mod substitution;
pub mod thue_morse;
pub mod words;

pub use injectivize::{build_eta, zeta_5_fixture, EtaError, EtaSystem, InitialsMap, TheoremOptions};
pub use nblock::{build_nblock, tau, theta_n_explicit, NBlockError, NBlockSystem, PairMaps};
pub use report::{Check, Claim, ClaimResult, VerificationReport};
pub use substitution::{pf_eigenvalue, Alphabet, IncidenceMatrix, Letter, Substitution, SubstitutionError};
pub use thue_morse::{enumerate_by_descendants, enumerate_by_scan, FactorSet, QuarterMarkers, ThueMorseError};
pub use words::{BinaryWord, WordError};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    ThueMorse(#[from] ThueMorseError),
    #[error(transparent)]
    NBlock(#[from] NBlockError),
    #[error(transparent)]
    Eta(#[from] EtaError),
}

/// Smallest `m` for which `claim` is defined.
pub fn min_order(claim: Claim) -> u32 {
    match claim {
        Claim::Firsthalf => 1,
        _ => 2,
    }
}

/// Runs one claim for one `m`.
pub fn verify_claim(m: u32, claim: Claim, opts: TheoremOptions) -> Result<ClaimResult, Error> {
    use injectivize::*;
    Ok(match claim {
        Claim::Qandf => thue_morse::verify_prop_qandf(m)?,
        Claim::Quarters => thue_morse::verify_prop_quarters(m)?,
        Claim::Firsthalf => thue_morse::verify_lemma_firsthalf(m)?,
        Claim::Nblock => nblock::verify_prop_nblock(m)?,
        Claim::Pairs => verify_pair_images(&build_eta(m)?),
        Claim::Fixedpoint => verify_fixed_point(&build_eta(m)?, opts.depth),
        Claim::Primitivity => verify_primitivity_argument(&build_eta(m)?),
        Claim::Theorem => verify_theorem(m, opts)?,
    })
}

/// Runs `claims` for one `m`, sharing the enumerations and `η_N` between them.
pub fn verify_order(m: u32, claims: &[Claim], opts: TheoremOptions) -> Result<VerificationReport, Error> {
    use injectivize::*;
    let needs_sets = claims.iter().any(|c| matches!(c, Claim::Qandf | Claim::Quarters | Claim::Firsthalf));
    let needs_eta =
        claims.iter().any(|c| matches!(c, Claim::Pairs | Claim::Fixedpoint | Claim::Primitivity | Claim::Theorem));
    let sets = if needs_sets { Some((enumerate_by_scan(m)?, enumerate_by_scan(m + 1)?)) } else { None };
    let eta = if needs_eta { Some(build_eta(m)?) } else { None };

    let mut report = VerificationReport::new();
    for &claim in claims {
        let min = min_order(claim);
        if m < min {
            return Err(ThueMorseError::UnsupportedOrder { m, min, max: thue_morse::MAX_ORDER }.into());
        }
        let result = match (claim, &sets, &eta) {
            (Claim::Qandf, Some((cur, _)), _) => thue_morse::qandf_checks(cur),
            (Claim::Quarters, Some((cur, next)), _) => thue_morse::quarters_checks(cur, next),
            (Claim::Firsthalf, Some((cur, next)), _) => thue_morse::firsthalf_checks(cur, next),
            (Claim::Pairs, _, Some(sys)) => verify_pair_images(sys),
            (Claim::Fixedpoint, _, Some(sys)) => verify_fixed_point(sys, opts.depth),
            (Claim::Primitivity, _, Some(sys)) => verify_primitivity_argument(sys),
            (Claim::Theorem, _, Some(sys)) => theorem_checks(m, sys.eta(), sys.theta(), sys.f0(), sys.f1(), opts),
            (claim, _, _) => verify_claim(m, claim, opts)?,
        };
        report.push(result);
    }
    Ok(report)
}
