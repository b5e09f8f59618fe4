//! One PASS/FAIL line per acceptance criterion. Exits nonzero if any fails.

mod support;

use std::path::Path;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use zerosum_core::abelian::{canonicalize, parse_grid, GroupSpec};
use zerosum_core::decidability::{constants_ledger, generic_c, generic_estimates, NnMode};
use zerosum_core::intlinalg::{smith_normal_form, solvability_pattern, IntMat};
use zerosum_core::proof335::candidates::canonical_forms;
use zerosum_core::proof335::{
    enumerate_candidates, prove_nofunc1, prove_nofunc2, verify_certificate, verify_length3,
    CandidateOptions, Certificate, SearchConfig,
};
use zerosum_core::rank2::{ben_check, corcd_check, property_b, verify_completions};
use zerosum_core::zerosum::{davenport, davenport_m, davenport_short, SearchOptions};

type Outcome = Result<String, String>;

fn criterion(n: u32, limit: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let t = Instant::now();
    let res = f();
    let took = t.elapsed();
    let (ok, detail) = match res {
        Ok(d) if took <= limit => (true, d),
        Ok(d) => (false, format!("{d}; over the {limit:?} limit")),
        Err(d) => (false, d),
    };
    println!("criterion {n:>2}: {} ({detail}; {:.2?})", if ok { "PASS" } else { "FAIL" }, took);
    ok
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    format!("error: {err}")
}

fn one() -> Outcome {
    let opts = SearchOptions::default();
    let g = GroupSpec::parse("3,3").map_err(e)?;
    let d = davenport(&g, &opts).map_err(e)?.value;
    let mut dm = Vec::new();
    for m in 1..=4 {
        dm.push(davenport_m(&g, m, &opts).map_err(e)?.value);
    }
    check(d == 5 && dm == [5, 8, 11, 14], format!("D = {d}, D_1..D_4 = {dm:?}"))
}

fn two() -> Outcome {
    let opts = SearchOptions::default();
    let g = GroupSpec::parse("3^3").map_err(e)?;
    let d = davenport(&g, &opts).map_err(e)?.value;
    let d3 = davenport_short(&g, 3, &opts).map_err(e)?.value;
    check(d == 7 && d3 == 17, format!("D = {d}, D^3 = {d3}"))
}

fn three() -> Outcome {
    let r = verify_length3().map_err(e)?;
    check(
        r.nine_survivors() == 0 && r.orbits_of_8.len() == 1 && r.explicit_is_survivor && r.explicit_in_orbit,
        format!(
            "9-survivors {}, 8-survivors {} in {} orbit(s), explicit set in orbit {}",
            r.nine_survivors(),
            r.eight_survivors(),
            r.orbits_of_8.len(),
            r.explicit_in_orbit
        ),
    )
}

fn four() -> Outcome {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/a13_grids.txt");
    let text = std::fs::read_to_string(path).map_err(e)?;
    let lines: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty() && !l.starts_with('#')).collect();
    let fixture = lines
        .chunks(3)
        .map(|c| parse_grid(&c.join("\n")).and_then(|m| canonicalize(&m)))
        .collect::<Result<Vec<_>, _>>()
        .map_err(e)?;
    let reps = enumerate_candidates(13, 2, &CandidateOptions::default()).map_err(e)?;
    let same = canonical_forms(&reps).map_err(e)? == canonical_forms(&fixture).map_err(e)?;
    check(
        reps.len() == 15 && fixture.len() == 15 && same,
        format!("{} representatives, {} fixture grids, equal canonical forms {same}", reps.len(), fixture.len()),
    )
}

fn five() -> Outcome {
    let dir = tempfile::tempdir().map_err(e)?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().map_err(e)?;
    let summary = pool
        .install(|| prove_nofunc2(&CandidateOptions::default(), &SearchConfig::default(), Some(dir.path())))
        .map_err(e)?;
    let mut replayed = 0;
    for f in &summary.files {
        let cert = Certificate::parse(&std::fs::read_to_string(f).map_err(e)?).map_err(e)?;
        if verify_certificate(&cert).map_err(e)?.valid {
            replayed += 1;
        }
    }
    check(
        summary.certificates.len() == 45 && summary.ok() && replayed == 45,
        format!(
            "{}/{} REFUTED at 1 worker, {replayed}/{} certificate files replay",
            summary.refuted(),
            summary.certificates.len(),
            summary.files.len()
        ),
    )
}

fn six() -> Outcome {
    let s = prove_nofunc1(&CandidateOptions::default()).map_err(e)?;
    check(s.ok(), format!("{}/{} ten-element candidates refuted", s.refuted, s.candidates))
}

fn seven() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut mismatches = 0;
    let mut snf_failures = 0;
    for _ in 0..1000 {
        let (a, b) = support::random_system(&mut rng);
        let am = IntMat::from_rows(&a).map_err(e)?;
        let pattern = solvability_pattern(&am, &IntMat::column(&b)).map_err(e)?;
        mismatches += (1..=60).filter(|&n| pattern.contains(n) != support::solvable_by_search(&a, &b, n)).count();
        snf_failures += usize::from(!smith_normal_form(&am).verify(&am));
    }
    check(
        mismatches == 0 && snf_failures == 0,
        format!("1000 systems, {mismatches} pattern mismatches for n <= 60, {snf_failures} SNF failures"),
    )
}

fn eight() -> Outcome {
    let opts = SearchOptions::default();
    let b5 = property_b(5, &opts).map_err(e)?.holds;
    let b7 = property_b(7, &opts).map_err(e)?.holds;
    let mut bad = Vec::new();
    for n in 2..=12 {
        if !ben_check(n, &opts).map_err(e)? || !corcd_check(n, &opts).map_err(e)? {
            bad.push(n);
        }
    }
    check(b5 && b7 && bad.is_empty(), format!("property B: n=5 {b5}, n=7 {b7}; ben/corcd failures {bad:?}"))
}

fn nine() -> Outcome {
    let opts = SearchOptions::default();
    let mut parts = Vec::new();
    let mut ok = true;
    for n in [5u32, 7] {
        for size in [2 * n as usize - 3, 2 * n as usize - 4] {
            let s = verify_completions(n, size, &opts).map_err(e)?;
            ok &= s.ok();
            parts.push(format!(
                "n={n} size={size}: {} bases, NONE {}, missing F {}",
                s.bases, s.none, s.missing_homomorphism
            ));
        }
    }
    check(ok, parts.join("; "))
}

fn ten() -> Outcome {
    let mut points = 0;
    let mut violations = Vec::new();
    for k in 2..=5 {
        for l in 3..=5 {
            for delta in 2..=10 {
                let c = generic_c(k, l).map_err(e)?;
                let ledger = constants_ledger(k, l, delta, c, NnMode::Expression).map_err(e)?;
                for (name, value, bound) in generic_estimates(&ledger).map_err(e)? {
                    if value > bound {
                        violations.push(format!("{name}({k},{l},{delta})"));
                    }
                }
                points += 1;
            }
        }
    }
    check(violations.is_empty(), format!("{points} grid points, violations {violations:?}"))
}

fn main() {
    let min = |m: u64| Duration::from_secs(60 * m);
    let results = [
        criterion(1, Duration::from_secs(10), one),
        criterion(2, min(10), two),
        criterion(3, min(5), three),
        criterion(4, min(30), four),
        criterion(5, min(120), five),
        criterion(6, min(30), six),
        criterion(7, Duration::MAX, seven),
        criterion(8, min(10), eight),
        criterion(9, min(30), nine),
        criterion(10, Duration::from_secs(1), ten),
    ];
    let passed = results.iter().filter(|&&r| r).count();
    println!("acceptance: {passed}/{} criteria pass", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
