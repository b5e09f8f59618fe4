use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use zerosum_core::abelian::{canonicalize, parse_grid, to_grid, GMultiSet, GroupSpec};
use zerosum_core::decidability::{
    bound_finite_symbolic, bound_infinite, constants_ledger, generic_c, generic_estimates, NnMode,
};
use zerosum_core::intlinalg::{smith_normal_form, solvability_pattern, solvable_mod, IntMat};
use zerosum_core::proof335::{
    self, enumerate_candidates, prove_nofunc1, prove_nofunc2, verify_certificate, verify_length3,
    CandidateOptions, Certificate, SearchConfig,
};
use zerosum_core::rank2::{ben_check, completion_report, corcd_check, property_b, verify_completions};
use zerosum_core::zerosum::{self, SearchOptions};
use zerosum_core::Error;

const SCHEMA: &str = "zerosum-cli";
const SCHEMA_VERSION: u32 = 1;

/// Exit status when a computation finished but the checked claim is false.
const EXIT_CLAIM: u8 = 1;
const EXIT_PARSE: u8 = 3;
const EXIT_BUDGET: u8 = 4;
const EXIT_ARGUMENT: u8 = 5;
const EXIT_IO: u8 = 6;
const EXIT_CERTIFICATE: u8 = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    /// One JSON object per line after a schema header line.
    Structured,
}

#[derive(Parser, Debug)]
#[command(name = "zerosum", version, about = "Zero-sum constants, modular solvability and certificates for Z_3^3")]
struct Cli {
    /// Worker threads. Results do not depend on this.
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,
    /// Node budget for exhaustive searches.
    #[arg(long, global = true, default_value_t = zerosum::DEFAULT_NODE_BUDGET)]
    budget: u64,
    /// Directory for certificates and listings.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Davenport constant D(G).
    ///
    /// Example: `zerosum davenport 3,3` prints 5.
    Davenport {
        /// Invariant factors, e.g. `3,3` or `3^3`.
        group: String,
    },
    /// D_m(G), the least N forcing m disjoint zero-sums.
    ///
    /// Example: `zerosum dm 3,3 2` prints 8.
    Dm { group: String, m: usize },
    /// D^k(G), the least N forcing a zero-sum of length at most k.
    ///
    /// Example: `zerosum dk 3^3 3` prints 17.
    Dk { group: String, k: usize },
    /// Smith normal form `D = P A Q^-1` of a matrix written as `"2 4; 6 8"`.
    Snf { matrix: String },
    /// Solvability of `A x = b` modulo n, or the full pattern without `--n`.
    ///
    /// Example: `zerosum solve-mod "2" "1" --n 4` prints unsolvable.
    SolveMod {
        matrix: String,
        rhs: String,
        #[arg(long)]
        n: Option<u64>,
    },
    /// Property B for Z_n^2, with the ben and corcd checks for the same n.
    ///
    /// Example: `zerosum property-b 5` prints true.
    PropertyB { n: u32 },
    /// Classify completions of zero-sum free multisets of the given size in
    /// Z_n^2, or of one multiset given with `--base`.
    Completions {
        n: u32,
        size: Option<usize>,
        /// A single multiset, e.g. `"(1,0)^3 (0,1)^3"`.
        #[arg(long)]
        base: Option<String>,
    },
    /// Search for homomorphisms of the zero-sum graphs of the 13-element
    /// candidates into C1, C2, C3 and write one certificate per pair to --out.
    ProveNofunc2 {
        /// Run the exact solvability check on leaves the witness cannot close.
        #[arg(long)]
        exact: bool,
    },
    /// Show that no function on a 10-element candidate sums to 1 on every zero-sum.
    ProveNofunc1,
    /// Zero-sums of length at most 3 among distinct elements of Z_3^3.
    #[command(name = "lemma-length3")]
    Lemma3,
    /// Orbit representatives of the 13-element candidates in grid form.
    EnumerateA13 {
        /// Compare against grids in this file (blocks of three lines).
        #[arg(long)]
        fixture: Option<PathBuf>,
    },
    /// Replay certificates; arguments may be files or directories.
    VerifyCert {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
    },
    /// The constants ledger and bounds for parameters k, l, delta.
    ///
    /// Example: `zerosum constants 3 3 4`.
    Constants {
        k: i64,
        l: i64,
        delta: i64,
        /// `bound` for c = k^(l+1), `exact` for the searched D^k(Z_k^l) - k,
        /// or an explicit integer.
        #[arg(long, default_value = "bound")]
        c: String,
        /// Use 0 for the non-neatness constant.
        #[arg(long)]
        nn_zero: bool,
    },
}

struct Printer {
    format: Format,
}

impl Printer {
    fn header(&self, command: &str) {
        if self.format == Format::Structured {
            println!(
                "{}",
                json!({"schema": SCHEMA, "version": SCHEMA_VERSION, "command": command})
            );
        }
    }

    fn emit(&self, text: impl AsRef<str>, record: Value) {
        match self.format {
            Format::Text => println!("{}", text.as_ref()),
            Format::Structured => println!("{record}"),
        }
    }
}

fn exit_for(e: &Error) -> u8 {
    match e {
        Error::Parse(_) | Error::Structure(_) => EXIT_PARSE,
        Error::Budget { .. } => EXIT_BUDGET,
        Error::Unsupported(_) | Error::Argument(_) => EXIT_ARGUMENT,
        Error::Io(_) => EXIT_IO,
        Error::Certificate(_) => EXIT_CERTIFICATE,
    }
}

fn claim(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_CLAIM)
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Davenport { .. } => "davenport",
        Command::Dm { .. } => "dm",
        Command::Dk { .. } => "dk",
        Command::Snf { .. } => "snf",
        Command::SolveMod { .. } => "solve-mod",
        Command::PropertyB { .. } => "property-b",
        Command::Completions { .. } => "completions",
        Command::ProveNofunc2 { .. } => "prove-nofunc2",
        Command::ProveNofunc1 => "prove-nofunc1",
        Command::Lemma3 => "lemma-length3",
        Command::EnumerateA13 { .. } => "enumerate-a13",
        Command::VerifyCert { .. } => "verify-cert",
        Command::Constants { .. } => "constants",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.workers == 0 {
        eprintln!("error: --workers must be at least 1");
        return ExitCode::from(EXIT_ARGUMENT);
    }
    if cli.budget == 0 {
        eprintln!("error: --budget must be positive");
        return ExitCode::from(EXIT_ARGUMENT);
    }
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.workers).build_global() {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_ARGUMENT);
    }
    let printer = Printer { format: cli.format };
    printer.header(command_name(&cli.command));
    match run(&cli, &printer) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_for(&e))
        }
    }
}

fn run(cli: &Cli, p: &Printer) -> zerosum_core::Result<ExitCode> {
    let opts = SearchOptions { node_budget: cli.budget };
    match &cli.command {
        Command::Davenport { group } => {
            let g = GroupSpec::parse(group)?;
            let r = zerosum::davenport(&g, &opts)?;
            p.emit(
                r.value.to_string(),
                json!({"group": group, "value": r.value, "witness": r.witness.to_string(), "nodes": r.nodes}),
            );
        }
        Command::Dm { group, m } => {
            let g = GroupSpec::parse(group)?;
            let r = zerosum::davenport_m(&g, *m, &opts)?;
            p.emit(
                r.value.to_string(),
                json!({"group": group, "m": m, "value": r.value, "witness": r.witness.to_string(), "nodes": r.nodes}),
            );
        }
        Command::Dk { group, k } => {
            let g = GroupSpec::parse(group)?;
            let r = zerosum::davenport_short(&g, *k, &opts)?;
            p.emit(
                r.value.to_string(),
                json!({"group": group, "k": k, "value": r.value, "witness": r.witness.to_string(), "nodes": r.nodes}),
            );
        }
        Command::Snf { matrix } => {
            let a = IntMat::parse(matrix)?;
            let s = smith_normal_form(&a);
            let diag: Vec<String> = s.diagonal().iter().map(ToString::to_string).collect();
            p.emit(
                format!("D = {}\nP = {}\nQ = {}\ndiagonal {}", s.d, s.p, s.q, diag.join(" ")),
                json!({"d": s.d.to_string(), "p": s.p.to_string(), "q": s.q.to_string(),
                       "diagonal": diag, "rank": s.rank(), "verified": s.verify(&a)}),
            );
        }
        Command::SolveMod { matrix, rhs, n } => {
            let a = IntMat::parse(matrix)?;
            let b = IntMat::parse(rhs)?;
            match n {
                Some(n) => {
                    let ok = solvable_mod(&a, &b, *n)?;
                    let word = if ok { "solvable" } else { "unsolvable" };
                    p.emit(word, json!({"n": n, "solvable": ok}));
                }
                None => {
                    let pat = solvability_pattern(&a, &b)?;
                    p.emit(pat.to_string(), json!({"pattern": pat}));
                }
            }
        }
        Command::PropertyB { n } => {
            let pb = property_b(*n, &opts)?;
            let ben = ben_check(*n, &opts)?;
            let corcd = corcd_check(*n, &opts)?;
            let cex = pb.counterexample.as_ref().map(ToString::to_string);
            let mut text = format!("{}\nben {ben}\ncorcd {corcd}", pb.holds);
            if let Some(c) = &cex {
                text.push_str(&format!("\ncounterexample {c}"));
            }
            p.emit(text, json!({"n": n, "holds": pb.holds, "ben": ben, "corcd": corcd, "counterexample": cex}));
            return Ok(claim(pb.holds && ben && corcd));
        }
        Command::Completions { n, size, base } => {
            let g = GroupSpec::new(vec![*n, *n])?;
            if let Some(base) = base {
                let ms = GMultiSet::parse(&g, base)?;
                let r = completion_report(&ms)?;
                let pairs: Vec<String> = r.pairs.iter().map(|(a, b)| format!("{a}+{b}")).collect();
                let singles: Vec<String> = r.singles.iter().map(ToString::to_string).collect();
                p.emit(
                    format!(
                        "classification {}\nexceptional {}\nsingles {}\npairs {}\nhomomorphism {}",
                        r.classification,
                        r.exceptional,
                        singles.join(" "),
                        pairs.join(" "),
                        r.homomorphism.map_or("none".into(), |(u, v)| format!("{u}x+{v}y")),
                    ),
                    json!({"base": ms.to_string(), "classification": r.classification, "exceptional": r.exceptional,
                           "singles": singles, "pairs": pairs, "automorphism": r.automorphism,
                           "homomorphism": r.homomorphism}),
                );
                return Ok(claim(r.classification != zerosum_core::rank2::Classification::None));
            }
            let sizes = match size {
                Some(s) => vec![*s],
                None => vec![2 * *n as usize - 3, 2 * *n as usize - 4],
            };
            let mut ok = true;
            for s in sizes {
                let sum = verify_completions(*n, s, &opts)?;
                ok &= sum.ok();
                p.emit(
                    format!(
                        "n={} size={} bases={} C1={} C2={} C3={} EXCEPTION={} NONE={} exceptional={} missing_F={}",
                        sum.n, sum.size, sum.bases, sum.c1, sum.c2, sum.c3, sum.exception, sum.none,
                        sum.exceptional_bases, sum.missing_homomorphism
                    ),
                    serde_json::to_value(&sum).expect("plain data"),
                );
            }
            return Ok(claim(ok));
        }
        Command::ProveNofunc2 { exact } => {
            let config = SearchConfig { exact_leaves: *exact, node_budget: cli.budget };
            let copts = CandidateOptions { seeded: true, node_budget: cli.budget };
            let summary = prove_nofunc2(&copts, &config, cli.out.as_deref())?;
            for (i, cert) in summary.certificates.iter().enumerate() {
                let (r, e, w, f) = cert.leaf_counts();
                let file = summary.files.get(i).map(|f| f.display().to_string());
                p.emit(
                    format!(
                        "{:<3} {} {} vertices={} edges={} nodes={} leaves R={r} E={e} W={w} F={f}",
                        i / 3,
                        cert.target,
                        cert.status,
                        cert.vertices,
                        cert.edges,
                        cert.nodes_visited
                    ),
                    json!({"candidate_index": i / 3, "candidate": cert.candidate.to_string(), "target": cert.target,
                           "status": cert.status, "vertices": cert.vertices, "edges": cert.edges,
                           "nodes_visited": cert.nodes_visited, "refuted_leaves": r, "exact_leaves": e,
                           "wipeouts": w, "failed_leaves": f, "failure": cert.failure, "file": file}),
                );
            }
            for cert in summary.failures() {
                eprintln!(
                    "FAILED {} {}: {}",
                    cert.target,
                    cert.candidate,
                    cert.failure.as_deref().unwrap_or("")
                );
            }
            p.emit(
                format!("refuted {}/{}", summary.refuted(), summary.certificates.len()),
                json!({"candidates": summary.candidates.len(), "certificates": summary.certificates.len(),
                       "refuted": summary.refuted()}),
            );
            return Ok(claim(summary.ok()));
        }
        Command::ProveNofunc1 => {
            let s = prove_nofunc1(&CandidateOptions { seeded: true, node_budget: cli.budget })?;
            for c in &s.cases {
                let fac = c.factorization.map_or("-".into(), |(a, b)| format!("2^{a}*3^{b}"));
                p.emit(
                    format!(
                        "{} equations={} witness={} {}",
                        c.candidate,
                        c.equations,
                        c.witness.as_deref().unwrap_or("none"),
                        fac
                    ),
                    serde_json::to_value(c).expect("plain data"),
                );
            }
            p.emit(
                format!("refuted {}/{}", s.refuted, s.candidates),
                json!({"candidates": s.candidates, "refuted": s.refuted}),
            );
            return Ok(claim(s.ok()));
        }
        Command::Lemma3 => {
            let r = verify_length3()?;
            p.emit(
                format!(
                    "9-element survivors {}\n8-element survivors {}\norbits of 8-element survivors {}\nexplicit set {}\nexplicit set is a survivor {}\nexplicit set in the orbit {}\ndoubled explicit set has a zero-sum of length <= 3: {}\ndisjoint zero-sums in the doubled set {}",
                    r.nine_survivors(),
                    r.eight_survivors(),
                    r.orbits_of_8.len(),
                    r.explicit_set,
                    r.explicit_is_survivor,
                    r.explicit_in_orbit,
                    r.doubled_has_short_zero_sum,
                    r.doubled_disjoint.join(" | ")
                ),
                serde_json::to_value(&r).expect("plain data"),
            );
            return Ok(claim(r.ok()));
        }
        Command::EnumerateA13 { fixture } => {
            let reps = enumerate_candidates(13, 2, &CandidateOptions { seeded: true, node_budget: cli.budget })?;
            let mut listing = String::new();
            for (i, r) in reps.iter().enumerate() {
                let grid = to_grid(r)?;
                listing.push_str(&format!("{grid}\n\n"));
                p.emit(
                    format!("# {i}  {r}\n{grid}\n"),
                    json!({"index": i, "multiset": r.to_string(), "grid": grid}),
                );
            }
            if let Some(dir) = &cli.out {
                std::fs::create_dir_all(dir)?;
                std::fs::write(dir.join("a13.txt"), listing)?;
            }
            let mut ok = reps.len() == 15;
            if let Some(path) = fixture {
                let expected = read_grids(path)?;
                let found = proof335::candidates::canonical_forms(&reps)?;
                let wanted = proof335::candidates::canonical_forms(&expected)?;
                let matches = found == wanted;
                ok &= matches;
                p.emit(
                    format!("fixture {} grids, match {matches}", expected.len()),
                    json!({"fixture_grids": expected.len(), "match": matches}),
                );
            }
            p.emit(format!("representatives {}", reps.len()), json!({"representatives": reps.len()}));
            return Ok(claim(ok));
        }
        Command::VerifyCert { paths } => {
            let files = certificate_files(paths)?;
            let mut valid = 0;
            for f in &files {
                let cert = Certificate::parse(&std::fs::read_to_string(f)?)?;
                let v = verify_certificate(&cert)?;
                let ok = v.valid && cert.status == proof335::CertificateStatus::Refuted;
                valid += usize::from(ok);
                p.emit(
                    format!(
                        "{} {} {}{}",
                        f.display(),
                        cert.status,
                        if v.valid { "valid" } else { "INVALID" },
                        v.problem.as_ref().map_or(String::new(), |e| format!(": {e}"))
                    ),
                    json!({"file": f.display().to_string(), "status": cert.status, "valid": v.valid,
                           "problem": v.problem, "refuted_leaves": v.refuted, "exact_leaves": v.exact,
                           "wipeouts": v.wipeouts, "failed_leaves": v.failed}),
                );
            }
            p.emit(format!("verified {valid}/{}", files.len()), json!({"files": files.len(), "verified": valid}));
            return Ok(claim(valid == files.len()));
        }
        Command::Constants { k, l, delta, c, nn_zero } => {
            let c_value = match c.as_str() {
                "bound" => generic_c(*k, *l)?,
                "exact" => {
                    let k32 = u32::try_from(*k).map_err(|_| Error::Argument(format!("k = {k} too large")))?;
                    let l = usize::try_from(*l).map_err(|_| Error::Argument(format!("l = {l} invalid")))?;
                    zerosum::c_const(k32, l, &opts)? as i64
                }
                other => other.parse().map_err(|_| Error::Parse(format!("bad --c value {other:?}")))?,
            };
            let nn = if *nn_zero { NnMode::Zero } else { NnMode::Expression };
            let ledger = constants_ledger(*k, *l, *delta, c_value, nn)?;
            let estimates = if c_value == generic_c(*k, *l)? { generic_estimates(&ledger)? } else { Vec::new() };
            let infinite = bound_infinite(*k, *l, *delta).ok();
            let finite = bound_finite_symbolic(*k, *l, *delta).ok();
            let mut text = ledger.to_string();
            let mut ok = true;
            for (name, value, bound) in &estimates {
                ok &= value <= bound;
                text.push_str(&format!("{name} = {value} <= {bound}: {}\n", value <= bound));
            }
            if let Some(b) = infinite {
                text.push_str(&format!("bound (infinitely many) {b}\n"));
            }
            if let Some(b) = &finite {
                text.push_str(&format!("bound (finitely many) {b}\n"));
            }
            let est: Vec<Value> = estimates
                .iter()
                .map(|(n, v, b)| json!({"name": n, "value": v, "bound": b, "holds": v <= b}))
                .collect();
            p.emit(
                text.trim_end(),
                json!({"ledger": ledger, "eq_count_bound": format!("2^{}", ledger.eq_count_log2),
                       "estimates": est, "bound_infinite": infinite,
                       "bound_finite": finite.map(|b| b.to_string())}),
            );
            return Ok(claim(ok));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn read_grids(path: &Path) -> zerosum_core::Result<Vec<GMultiSet>> {
    let text = std::fs::read_to_string(path)?;
    let lines: Vec<&str> =
        text.lines().filter(|l| !l.trim().is_empty() && !l.starts_with('#')).collect();
    if lines.len() % 3 != 0 {
        return Err(Error::Parse(format!("{}: grid lines not a multiple of 3", path.display())));
    }
    lines
        .chunks(3)
        .map(|c| parse_grid(&c.join("\n")).and_then(|m| canonicalize(&m)))
        .collect()
}

fn certificate_files(paths: &[PathBuf]) -> zerosum_core::Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for p in paths {
        if p.is_dir() {
            let mut entries: Vec<PathBuf> = std::fs::read_dir(p)?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|f| f.extension().is_some_and(|x| x == "cert"))
                .collect();
            entries.sort();
            out.extend(entries);
        } else {
            out.push(p.clone());
        }
    }
    Ok(out)
}
