//! Acceptance criteria. Each criterion prints one PASS/FAIL line; the test
//! fails if any criterion fails.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use morse_blocks::injectivize::{
    build_eta, image_length_profile, initials_map, is_even_letter, theorem_checks, verify_fixed_point,
    verify_pair_images, verify_primitivity_argument, zeta_5_fixture, TheoremOptions,
};
use morse_blocks::nblock::{build_nblock, theta_n_explicit, verify_prop_nblock};
use morse_blocks::substitution::{pf_eigenvalue, Letter, Substitution};
use morse_blocks::thue_morse::{
    descendants, enumerate_by_descendants, enumerate_by_scan, factor_count, quarter_markers, verify_lemma_firsthalf,
    verify_prop_qandf, verify_prop_quarters,
};
use morse_blocks::{verify_order, BinaryWord, Claim};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const TOL: f64 = 1e-9;
const DEPTH: u32 = 12;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn l(i: usize) -> Letter {
    Letter::from_index(i - 1)
}

fn words(list: &[&str]) -> Vec<BinaryWord> {
    list.iter().map(|s| s.parse().unwrap()).collect()
}

fn ac1_cardinality() -> Outcome {
    let start = Instant::now();
    for m in 1..=10 {
        let scan = enumerate_by_scan(m).map_err(|e| e.to_string())?;
        let desc = enumerate_by_descendants(m).map_err(|e| e.to_string())?;
        ensure(scan.len() == 3 << m, || format!("m={m}: scan found {}", scan.len()))?;
        ensure(desc.len() == 3 << m, || format!("m={m}: descendants found {}", desc.len()))?;
        ensure(scan == desc, || format!("m={m}: methods disagree"))?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(5), || format!("took {elapsed:?}"))?;
    Ok(format!("m=1..10, both methods, {elapsed:.2?}"))
}

fn ac2_golden_tables() -> Outcome {
    let a2 = enumerate_by_scan(2).unwrap();
    let a2_table = words(&[
        "00101", "00110", "01001", "01011", "01100", "01101", "10010", "10011", "10100", "10110", "11001", "11010",
    ]);
    ensure(a2.words() == a2_table.as_slice(), || "A_2 differs from the reference table".into())?;
    let mk2 = quarter_markers(&a2);
    ensure(
        mk2.q.to_vec() == words(&["00101", "01011", "10010", "10110"])
            && mk2.f0 == "01101".parse().unwrap()
            && mk2.f1 == "10010".parse().unwrap(),
        || "A_2 markers".into(),
    )?;

    let a3 = enumerate_by_scan(3).unwrap();
    let a3_table = words(&[
        "001011001",
        "001011010",
        "001100101",
        "001101001",
        "010010110",
        "010011001",
        "010110011",
        "010110100",
        "011001011",
        "011001101",
        "011010010",
        "011010011",
        "100101100",
        "100101101",
        "100110010",
        "100110100",
        "101001011",
        "101001100",
        "101100110",
        "101101001",
        "110010110",
        "110011010",
        "110100101",
        "110100110",
    ]);
    ensure(a3.words() == a3_table.as_slice(), || "A_3 differs from the reference table".into())?;
    let mk3 = quarter_markers(&a3);
    ensure(mk3.q_index == [1, 7, 13, 19], || format!("q indices {:?}", mk3.q_index))?;
    ensure(mk3.f0_index == Some(12) && mk3.f1_index == Some(13), || {
        format!("f0 at {:?}, f1 at {:?}", mk3.f0_index, mk3.f1_index)
    })?;
    Ok("A_2 and A_3 match the reference tables; q = w_1,w_7,w_13,w_19, f0 = w_12, f1 = w_13".into())
}

fn claim_range(
    name: &str,
    ms: std::ops::RangeInclusive<u32>,
    run: impl Fn(u32) -> Result<morse_blocks::ClaimResult, String>,
) -> Outcome {
    for m in ms.clone() {
        let r = run(m)?;
        ensure(r.passed(), || format!("{r}"))?;
    }
    Ok(format!("{name} for m={}..{}", ms.start(), ms.end()))
}

fn ac3_prop_qandf() -> Outcome {
    claim_range("q_k identities", 2..=8, |m| verify_prop_qandf(m).map_err(|e| e.to_string()))
}

fn ac4_prop_quarters() -> Outcome {
    claim_range("quarter images", 2..=8, |m| verify_prop_quarters(m).map_err(|e| e.to_string()))
}

fn ac5_lemma_firsthalf() -> Outcome {
    claim_range("prefix pairing", 1..=8, |m| verify_lemma_firsthalf(m).map_err(|e| e.to_string()))
}

fn ac6_prop_nblock() -> Outcome {
    for m in 2..=8 {
        let built = build_nblock(&Substitution::thue_morse(), (1 << m) + 1).map_err(|e| e.to_string())?;
        let explicit = theta_n_explicit(m).map_err(|e| e.to_string())?;
        ensure(built.substitution() == &explicit, || format!("m={m}: closed form differs"))?;
        let r = verify_prop_nblock(m).map_err(|e| e.to_string())?;
        ensure(r.passed(), || format!("{r}"))?;
    }
    let theta5_table =
        [(4, 10), (4, 10), (5, 11), (5, 11), (6, 12), (6, 12), (7, 1), (7, 1), (8, 2), (8, 2), (9, 3), (9, 3)];
    let t5 = theta_n_explicit(2).unwrap();
    for (i, (a, b)) in theta5_table.into_iter().enumerate() {
        ensure(t5.image(l(i + 1)) == [l(a), l(b)], || format!("theta_5(w_{})", i + 1))?;
    }
    let t3 = build_nblock(&Substitution::thue_morse(), 3).unwrap();
    let theta3_table = [(2, 5), (3, 6), (3, 6), (4, 1), (4, 1), (5, 2)];
    for (i, (a, b)) in theta3_table.into_iter().enumerate() {
        ensure(t3.substitution().image(l(i + 1)) == [l(a), l(b)], || format!("theta_3(w_{})", i + 1))?;
    }
    Ok("closed form = windows for m=2..8; theta_5 and theta_3 tables reproduced".into())
}

fn ac7_zeta5() -> Outcome {
    let z = zeta_5_fixture();
    ensure(z.is_injective(), || "not injective".into())?;
    ensure(!z.is_primitive(), || "reported primitive".into())?;
    ensure(z.iterate(l(3), 1).unwrap() == [l(11)] && z.iterate(l(3), 2).unwrap() == [l(3)], || {
        "zeta_5^2(w_3) != w_3".into()
    })?;
    ensure(z.single_letter_cycles().contains(&vec![l(3), l(11)]), || "2-cycle not detected".into())?;
    let theta5 = build_nblock(&Substitution::thue_morse(), 5).unwrap().into_substitution();
    for n in 1..=10 {
        ensure(z.iterate(l(6), n).unwrap() == theta5.iterate(l(6), n).unwrap(), || format!("n={n}"))?;
    }
    Ok("injective, not primitive (cycle w_3 -> w_11 -> w_3), fixed point of w_6 shared for n<=10".into())
}

fn ac8_eta() -> Outcome {
    for m in 2..=8 {
        let sys = build_eta(m).map_err(|e| e.to_string())?;
        let eta = sys.eta();
        ensure(eta.is_injective(), || format!("m={m}: images not distinct"))?;
        let [one, two, three] = image_length_profile(eta);
        ensure(one.len() + two.len() + three.len() == eta.size(), || format!("m={m}: length outside 1..3"))?;
        for a in eta.alphabet().letters() {
            let q = sys.quarter(a);
            let expected = if is_even_letter(a) {
                2
            } else if q <= 2 {
                1
            } else {
                3
            };
            ensure(eta.image(a).len() == expected, || format!("m={m}: |eta({a})| = {}", eta.image(a).len()))?;
        }
        let pairs = verify_pair_images(&sys);
        ensure(pairs.passed(), || format!("{pairs}"))?;
        let fp = verify_fixed_point(&sys, DEPTH);
        ensure(fp.passed(), || format!("{fp}"))?;
        let mut word = vec![sys.f0()];
        for n in 1..=DEPTH {
            word = eta.apply(&word).unwrap();
            ensure(word.len() == 1 << n, || format!("m={m}: |eta^{n}(f0)| = {}", word.len()))?;
        }
    }
    Ok("m=2..8: injective, length profile 1/3/2, pair identity, eta^n(f0) = theta^n(f0) with length 2^n, n<=12".into())
}

fn ac9_primitivity() -> Outcome {
    let mut m2 = String::new();
    for m in 2..=8 {
        let sys = build_eta(m).map_err(|e| e.to_string())?;
        let r = verify_primitivity_argument(&sys);
        let phi = initials_map(sys.theta());
        let psi = initials_map(sys.eta());
        let k = sys.size();
        let letters: Vec<Letter> = sys.eta().alphabet().letters().collect();
        let phi_ok = letters.iter().all(|&a| phi.steps_to(a, &[sys.f0(), sys.f1()], k / 2).is_some());
        let psi_ok = letters.iter().all(|&a| psi.steps_to(a, &[sys.f0(), sys.f1()], k).is_some());
        let agree = letters.iter().filter(|&&a| matches!(sys.quarter(a), 2 | 3)).all(|&a| phi.apply(a) == psi.apply(a));
        let increasing =
            letters.iter().filter(|&&a| !is_even_letter(a) && sys.quarter(a) == 4).all(|&a| psi.apply(a) > a);
        let all = r.passed() && phi_ok && psi_ok && agree && increasing && sys.eta().is_primitive();
        if m == 2 {
            m2 = format!("m=2 outcome: {}", if all { "primitive" } else { "NOT primitive" });
            continue;
        }
        ensure(all, || format!("m={m}: {r}"))?;
    }
    Ok(format!("m=3..8 all reachability checks and boolean-matrix test pass; {m2}"))
}

fn ac10_theorem() -> Outcome {
    for m in 2..=8 {
        let sys = build_eta(m).map_err(|e| e.to_string())?;
        let matrix = sys.eta().incidence_matrix();
        let pf = pf_eigenvalue(&matrix, TOL).map_err(|e| format!("m={m}: {e}"))?;
        ensure((pf - 2.0).abs() < TOL, || format!("m={m}: PF = {pf}"))?;
        let k = sys.size();
        let mut d = vec![0u128; k];
        d[sys.f0().index()] = 1;
        for n in 1..=DEPTH {
            let v = matrix.bilinear_power(&vec![1; k], &d, n).map_err(|e| e.to_string())?;
            ensure(v == 1u128 << n, || format!("m={m}, n={n}: {v}"))?;
        }
        let r =
            theorem_checks(m, sys.eta(), sys.theta(), sys.f0(), sys.f1(), TheoremOptions { tol: TOL, depth: DEPTH });
        ensure(r.passed(), || format!("{r}"))?;
    }
    let start = Instant::now();
    for m in 2..=8 {
        let rep = verify_order(m, &Claim::ALL, TheoremOptions { tol: TOL, depth: DEPTH }).map_err(|e| e.to_string())?;
        ensure(rep.passed(), || format!("{rep}"))?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(30), || format!("suite took {elapsed:?}"))?;
    Ok(format!("PF = 2 within 1e-9 and e^T M^n d = 2^n for m=2..8; full suite {elapsed:.2?}"))
}

fn ac11_properties() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed_7a1e);
    let mut pairs = 0usize;
    for m in 2..=8 {
        let set = enumerate_by_scan(m).unwrap();
        let ws = set.words();
        for _ in 0..2000 {
            let i = rng.gen_range(0..ws.len());
            let j = rng.gen_range(0..ws.len());
            if i == j {
                continue;
            }
            let (u, v) = if ws[i] < ws[j] { (&ws[i], &ws[j]) } else { (&ws[j], &ws[i]) };
            pairs += 1;
            ensure(u.thue_morse_image() < v.thue_morse_image(), || format!("theta order: {u} {v}"))?;
            let (du, eu) = descendants(u);
            let (dv, ev) = descendants(v);
            ensure(du < dv, || format!("delta order: {u} {v}"))?;
            if u.first() == v.first() {
                ensure(eu < ev, || format!("eps order: {u} {v}"))?;
            }
        }
    }
    ensure(pairs >= 10_000, || format!("only {pairs} pairs sampled"))?;

    let zzz: BinaryWord = "000".parse().unwrap();
    let ooo: BinaryWord = "111".parse().unwrap();
    for m in 1..=10 {
        let set = enumerate_by_scan(m).unwrap();
        let k = set.len();
        ensure(k == factor_count(m), || format!("m={m}"))?;
        for (i, w) in set.words().iter().enumerate() {
            ensure(set.words()[k - 1 - i] == w.mirror(), || {
                format!("m={m}: mirror of w_{} is not w_{}", i + 1, k - i)
            })?;
            ensure(!w.contains(&zzz) && !w.contains(&ooo), || format!("m={m}: {w} has a cube"))?;
        }
        let set_of: HashSet<_> = set.words().iter().collect();
        ensure(set.words().iter().all(|w| set_of.contains(&w.mirror())), || format!("m={m}: not mirror closed"))?;
    }
    Ok(format!("{pairs} random pairs ordered; mirror reversal and no 000/111 for m=1..10"))
}

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 11] = [
        ("AC1 cardinality", ac1_cardinality),
        ("AC2 golden tables", ac2_golden_tables),
        ("AC3 q_k identities", ac3_prop_qandf),
        ("AC4 quarter images", ac4_prop_quarters),
        ("AC5 prefix pairing", ac5_lemma_firsthalf),
        ("AC6 closed form of theta_N", ac6_prop_nblock),
        ("AC7 zeta_5 fixture", ac7_zeta5),
        ("AC8 eta_N construction", ac8_eta),
        ("AC9 primitivity", ac9_primitivity),
        ("AC10 PF eigenvalue 2", ac10_theorem),
        ("AC11 property suites", ac11_properties),
    ];
    let mut failed = Vec::new();
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(detail) => {
                println!("FAIL {name}: {detail}");
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
