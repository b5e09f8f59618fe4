//! The two non-existence statements for functions on the candidate
//! multisets: no function into `Z_n` with every zero-sum adding up to 1
//! (10-element candidates), and no homomorphism of the zero-sum graph into
//! C1, C2 or C3 (13-element candidates).

use std::path::Path;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use super::candidates::{enumerate_candidates, CandidateOptions};
use super::certificate::{Certificate, CertificateStatus};
use super::graph::{build_zero_sum_graph, zero_sum_subsets};
use super::search::{hom_refute, SearchConfig};
use super::target::{target_graph, TargetKind};
use crate::abelian::GMultiSet;
use crate::error::{Error, Result};
use crate::intlinalg::{smooth_2_3, witness_from_rows};

#[derive(Clone, Debug, Serialize)]
pub struct NoFunc1Case {
    pub candidate: String,
    pub equations: usize,
    pub witness: Option<String>,
    /// Exponents `(a, b)` with `witness = 2^a 3^b`.
    pub factorization: Option<(u32, u32)>,
}

impl NoFunc1Case {
    pub fn refuted(&self) -> bool {
        self.factorization.is_some()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NoFunc1Summary {
    pub candidates: usize,
    pub refuted: usize,
    pub cases: Vec<NoFunc1Case>,
}

impl NoFunc1Summary {
    pub fn ok(&self) -> bool {
        self.candidates > 0 && self.refuted == self.candidates
    }
}

/// Unsolvability witness for `sum_{z in Z} g(z) = 1` over every zero-sum
/// `Z` of `ms`, one variable per copy.
pub fn nofunc1_case(ms: &GMultiSet) -> Result<NoFunc1Case> {
    let zs = zero_sum_subsets(ms)?;
    let vars = ms.cardinality();
    let rows: Vec<Vec<BigInt>> = zs
        .iter()
        .map(|&mask| {
            let mut r: Vec<BigInt> =
                (0..vars).map(|i| BigInt::from(mask >> i & 1)).collect();
            r.push(BigInt::from(1));
            r
        })
        .collect();
    let witness = witness_from_rows(rows, vars);
    Ok(NoFunc1Case {
        candidate: ms.to_string(),
        equations: zs.len(),
        factorization: witness.as_ref().and_then(smooth_2_3),
        witness: witness.map(|g| g.to_string()),
    })
}

pub fn prove_nofunc1(opts: &CandidateOptions) -> Result<NoFunc1Summary> {
    let reps = enumerate_candidates(10, 1, opts)?;
    let cases: Vec<NoFunc1Case> = reps.par_iter().map(nofunc1_case).collect::<Result<_>>()?;
    Ok(NoFunc1Summary {
        candidates: cases.len(),
        refuted: cases.iter().filter(|c| c.refuted()).count(),
        cases,
    })
}

#[derive(Clone, Debug)]
pub struct NoFunc2Summary {
    pub candidates: Vec<GMultiSet>,
    /// Candidate-major, targets in C1, C2, C3 order.
    pub certificates: Vec<Certificate>,
    /// Files written, in certificate order.
    pub files: Vec<std::path::PathBuf>,
}

impl NoFunc2Summary {
    pub fn refuted(&self) -> usize {
        self.certificates.iter().filter(|c| c.status == CertificateStatus::Refuted).count()
    }

    pub fn ok(&self) -> bool {
        !self.certificates.is_empty() && self.refuted() == self.certificates.len()
    }

    pub fn failures(&self) -> impl Iterator<Item = &Certificate> {
        self.certificates.iter().filter(|c| c.status != CertificateStatus::Refuted)
    }
}

/// Searches all candidate × target pairs. With `out`, each certificate is
/// written there as `nofunc2-<index>-<target>.cert`.
pub fn prove_nofunc2(
    candidates: &CandidateOptions,
    config: &SearchConfig,
    out: Option<&Path>,
) -> Result<NoFunc2Summary> {
    let reps = enumerate_candidates(13, 2, candidates)?;
    let jobs: Vec<(usize, TargetKind)> = (0..reps.len())
        .flat_map(|i| TargetKind::ALL.into_iter().map(move |t| (i, t)))
        .collect();
    let certificates: Vec<Certificate> = jobs
        .par_iter()
        .map(|&(i, t)| {
            let graph = build_zero_sum_graph(&reps[i])?;
            hom_refute(&graph, &target_graph(t), "nofunc2", config)
        })
        .collect::<Result<_>>()?;
    let mut files = Vec::new();
    if let Some(dir) = out {
        std::fs::create_dir_all(dir)?;
        for (cert, &(i, _)) in certificates.iter().zip(&jobs) {
            let path = dir.join(format!("{}.cert", cert.file_stem(i)));
            std::fs::write(&path, cert.to_text()?)?;
            files.push(path);
        }
    }
    Ok(NoFunc2Summary { candidates: reps, certificates, files })
}

/// Describes the failed certificates of a run, one line each.
pub fn failure_report(summary: &NoFunc2Summary) -> Result<String> {
    if summary.ok() {
        return Ok(String::new());
    }
    let lines: Vec<String> = summary
        .failures()
        .map(|c| {
            format!(
                "{} {} {}",
                c.target,
                c.candidate,
                c.failure.as_deref().unwrap_or("(no assignment recorded)")
            )
        })
        .collect();
    if lines.is_empty() {
        return Err(Error::Argument("no certificates".into()));
    }
    Ok(lines.join("\n"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proof335::cube;

    #[test]
    fn equation_count_is_zero_sum_count() {
        let ms = GMultiSet::parse(&cube(), "(1,0,0)^2 (0,1,0)^2 (1,1,0) (2,2,1) (0,0,1)").unwrap();
        let case = nofunc1_case(&ms).unwrap();
        assert_eq!(case.equations, zero_sum_subsets(&ms).unwrap().len());
    }

    #[test]
    fn single_zero_sum_is_solvable() {
        // one zero-sum {a, b, c, d}: g = (1, 0, 0, 0) works for every n
        let ms = GMultiSet::parse(&cube(), "(1,0,0) (0,1,0) (1,1,1) (1,1,2)").unwrap();
        let case = nofunc1_case(&ms).unwrap();
        assert_eq!(case.equations, 1);
        assert!(!case.refuted());
    }
}
