//! Search certificates: a versioned text record of the homomorphism search
//! tree, replayable without repeating the search.
//!
//! ```text
//! zerosum-certificate 1
//! problem nofunc2
//! target C2
//! candidate (0,0,1)^2 (0,1,0)^2 ...
//! grid
//! .2. ... ...
//! ...
//! vertices 312
//! edges 1840
//! nodes_visited 5521
//! status REFUTED
//! tree 5521
//! B 17
//! R 6
//! W 3
//! ...
//! end
//! ```
//!
//! The tree is written in preorder. `B v` branches on vertex `v`; its
//! children follow, one per node of the target that is still compatible with
//! the already assigned neighbours of `v`, in increasing node order. Leaves
//! are `R g` (the conditions so far have unsolvability witness `g = 2^a 3^b`),
//! `E` (no modulus coprime to 6 solves the conditions of a complete
//! assignment), `W u` (vertex `u` has no compatible node left) and `F`
//! (a complete assignment that could not be refuted).

use std::fmt::{self, Write as _};
use std::str::FromStr;

use num_bigint::BigInt;
use serde::Serialize;

use super::cube;
use super::graph::{build_zero_sum_graph, ZeroSumGraph};
use super::search::{augmented, exactly_refuted, system_rows, UNASSIGNED};
use super::target::{target_graph, TargetGraph, TargetKind};
use crate::abelian::{to_grid, GMultiSet};
use crate::error::{Error, Result};
use crate::intlinalg::{smooth_2_3, witness_from_rows};

pub const CERTIFICATE_VERSION: u32 = 1;
const MAGIC: &str = "zerosum-certificate";

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Token {
    Branch(u32),
    Refuted(BigInt),
    Exact,
    Wipeout(u32),
    Failed,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Branch(v) => write!(f, "B {v}"),
            Token::Refuted(g) => write!(f, "R {g}"),
            Token::Exact => f.write_str("E"),
            Token::Wipeout(u) => write!(f, "W {u}"),
            Token::Failed => f.write_str("F"),
        }
    }
}

impl FromStr for Token {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Certificate(format!("bad tree token {s:?}"));
        let mut parts = s.split_whitespace();
        let tag = parts.next().ok_or_else(bad)?;
        let arg = parts.next();
        if parts.next().is_some() {
            return Err(bad());
        }
        match (tag, arg) {
            ("B", Some(v)) => v.parse().map(Token::Branch).map_err(|_| bad()),
            ("R", Some(g)) => g.parse().map(Token::Refuted).map_err(|_| bad()),
            ("W", Some(u)) => u.parse().map(Token::Wipeout).map_err(|_| bad()),
            ("E", None) => Ok(Token::Exact),
            ("F", None) => Ok(Token::Failed),
            _ => Err(bad()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CertificateStatus {
    Refuted,
    Failed,
}

impl fmt::Display for CertificateStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Refuted => "REFUTED",
            Self::Failed => "FAILED",
        })
    }
}

#[derive(Clone, Debug)]
pub struct Certificate {
    pub problem: String,
    pub target: TargetKind,
    pub candidate: GMultiSet,
    pub vertices: usize,
    pub edges: usize,
    pub nodes_visited: u64,
    pub status: CertificateStatus,
    /// First complete assignment that could not be refuted, as
    /// `vertex:node` pairs.
    pub failure: Option<String>,
    pub tokens: Vec<Token>,
}

impl Certificate {
    /// `(refuted, exact, wipeout, failed)` leaf counts.
    pub fn leaf_counts(&self) -> (usize, usize, usize, usize) {
        let mut c = (0, 0, 0, 0);
        for t in &self.tokens {
            match t {
                Token::Refuted(_) => c.0 += 1,
                Token::Exact => c.1 += 1,
                Token::Wipeout(_) => c.2 += 1,
                Token::Failed => c.3 += 1,
                Token::Branch(_) => {}
            }
        }
        c
    }

    /// Distinct witnesses with their exponents of 2 and 3.
    pub fn witness_factorizations(&self) -> Vec<(BigInt, (u32, u32))> {
        let mut ws: Vec<BigInt> = self
            .tokens
            .iter()
            .filter_map(|t| match t {
                Token::Refuted(g) => Some(g.clone()),
                _ => None,
            })
            .collect();
        ws.sort();
        ws.dedup();
        ws.into_iter().filter_map(|g| smooth_2_3(&g).map(|f| (g, f))).collect()
    }

    /// File name stem from the problem, candidate index and target.
    pub fn file_stem(&self, index: usize) -> String {
        format!("{}-{:02}-{}", self.problem, index, self.target)
    }

    pub fn to_text(&self) -> Result<String> {
        let mut s = String::new();
        let w = |s: &mut String, line: fmt::Arguments| {
            s.write_fmt(line).expect("writing to a string");
            s.push('\n');
        };
        w(&mut s, format_args!("{MAGIC} {CERTIFICATE_VERSION}"));
        w(&mut s, format_args!("problem {}", self.problem));
        w(&mut s, format_args!("target {}", self.target));
        w(&mut s, format_args!("candidate {}", self.candidate));
        w(&mut s, format_args!("grid"));
        w(&mut s, format_args!("{}", to_grid(&self.candidate)?));
        w(&mut s, format_args!("vertices {}", self.vertices));
        w(&mut s, format_args!("edges {}", self.edges));
        w(&mut s, format_args!("nodes_visited {}", self.nodes_visited));
        w(&mut s, format_args!("status {}", self.status));
        if let Some(f) = &self.failure {
            w(&mut s, format_args!("failure {f}"));
        }
        w(&mut s, format_args!("tree {}", self.tokens.len()));
        for t in &self.tokens {
            w(&mut s, format_args!("{t}"));
        }
        w(&mut s, format_args!("end"));
        Ok(s)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let mut next = |what: &str| -> Result<&str> {
            lines.next().ok_or_else(|| Error::Certificate(format!("missing {what}")))
        };
        let field = |line: &str, key: &str| -> Result<String> {
            line.strip_prefix(key)
                .and_then(|r| r.strip_prefix(' '))
                .map(str::to_string)
                .ok_or_else(|| Error::Certificate(format!("expected {key:?}, got {line:?}")))
        };
        let num = |v: String, key: &str| -> Result<u64> {
            v.parse().map_err(|_| Error::Certificate(format!("bad {key} value {v:?}")))
        };

        let header = next("header")?;
        let version = field(header, MAGIC)?;
        if version != CERTIFICATE_VERSION.to_string() {
            return Err(Error::Certificate(format!("unsupported version {version}")));
        }
        let problem = field(next("problem")?, "problem")?;
        let target: TargetKind = field(next("target")?, "target")?.parse()?;
        let candidate = GMultiSet::parse(&cube(), &field(next("candidate")?, "candidate")?)?;
        if next("grid")? != "grid" {
            return Err(Error::Certificate("expected grid".into()));
        }
        let grid = [next("grid")?, next("grid")?, next("grid")?].join("\n");
        if crate::abelian::parse_grid(&grid)? != candidate {
            return Err(Error::Certificate("grid and candidate disagree".into()));
        }
        let vertices = num(field(next("vertices")?, "vertices")?, "vertices")? as usize;
        let edges = num(field(next("edges")?, "edges")?, "edges")? as usize;
        let nodes_visited = num(field(next("nodes_visited")?, "nodes_visited")?, "nodes_visited")?;
        let status = match field(next("status")?, "status")?.as_str() {
            "REFUTED" => CertificateStatus::Refuted,
            "FAILED" => CertificateStatus::Failed,
            other => return Err(Error::Certificate(format!("bad status {other:?}"))),
        };
        let mut line = next("tree")?;
        let mut failure = None;
        if let Ok(f) = field(line, "failure") {
            failure = Some(f);
            line = next("tree")?;
        }
        let count = num(field(line, "tree")?, "tree")? as usize;
        let mut tokens = Vec::with_capacity(count);
        for _ in 0..count {
            tokens.push(next("tree token")?.parse()?);
        }
        if next("end")? != "end" {
            return Err(Error::Certificate("expected end".into()));
        }
        Ok(Self { problem, target, candidate, vertices, edges, nodes_visited, status, failure, tokens })
    }
}

/// Result of replaying a certificate.
#[derive(Clone, Debug, Serialize)]
pub struct Verification {
    pub valid: bool,
    /// Description of the first leaf or structural check that failed.
    pub problem: Option<String>,
    pub refuted: usize,
    pub exact: usize,
    pub wipeouts: usize,
    pub failed: usize,
}

struct Replay<'a> {
    graph: &'a ZeroSumGraph,
    target: &'a TargetGraph,
    tokens: &'a [Token],
    pos: usize,
    assign: Vec<u8>,
    counts: (usize, usize, usize, usize),
}

impl Replay<'_> {
    fn domain(&self, v: usize) -> u8 {
        let mut d = self.target.all_nodes();
        for &u in &self.graph.adjacency[v] {
            let a = self.assign[u as usize];
            if a != UNASSIGNED {
                d &= self.target.adjacent[a as usize];
            }
        }
        d
    }

    fn vertex(&self, v: u32) -> std::result::Result<usize, String> {
        let v = v as usize;
        if v >= self.assign.len() {
            return Err(format!("vertex {v} out of range"));
        }
        if self.assign[v] != UNASSIGNED {
            return Err(format!("vertex {v} is already assigned"));
        }
        Ok(v)
    }

    fn complete(&self) -> bool {
        self.assign.iter().all(|&a| a != UNASSIGNED)
    }

    fn leaf_at(&self) -> String {
        format!("token {} ({})", self.pos, self.tokens[self.pos])
    }

    fn run(&mut self) -> std::result::Result<(), String> {
        let Some(token) = self.tokens.get(self.pos) else {
            return Err("tree ends early".into());
        };
        match token {
            Token::Branch(v) => {
                let v = self.vertex(*v).map_err(|e| format!("{}: {e}", self.leaf_at()))?;
                let dom = self.domain(v);
                self.pos += 1;
                for a in 0..8u8 {
                    if dom >> a & 1 == 1 {
                        self.assign[v] = a;
                        self.run()?;
                    }
                }
                self.assign[v] = UNASSIGNED;
                Ok(())
            }
            Token::Refuted(g) => {
                let rows = system_rows(self.graph, self.target, &self.assign);
                let copies = self.graph.copies.len();
                let recomputed = witness_from_rows(augmented(&rows, copies), 2 * copies);
                if recomputed.as_ref() != Some(g) {
                    return Err(format!(
                        "{}: recomputed witness is {}",
                        self.leaf_at(),
                        recomputed.map_or("none".to_string(), |r| r.to_string())
                    ));
                }
                if smooth_2_3(g).is_none() {
                    return Err(format!("{}: witness has a prime factor above 3", self.leaf_at()));
                }
                self.counts.0 += 1;
                self.pos += 1;
                Ok(())
            }
            Token::Exact => {
                let rows = system_rows(self.graph, self.target, &self.assign);
                let ok = self.complete()
                    && exactly_refuted(&rows, self.graph.copies.len()).unwrap_or(false);
                if !ok {
                    return Err(format!("{}: exact check does not refute", self.leaf_at()));
                }
                self.counts.1 += 1;
                self.pos += 1;
                Ok(())
            }
            Token::Wipeout(u) => {
                let u = self.vertex(*u).map_err(|e| format!("{}: {e}", self.leaf_at()))?;
                if self.domain(u) != 0 {
                    return Err(format!("{}: vertex {u} still has a compatible node", self.leaf_at()));
                }
                self.counts.2 += 1;
                self.pos += 1;
                Ok(())
            }
            Token::Failed => {
                if !self.complete() {
                    return Err(format!("{}: assignment is incomplete", self.leaf_at()));
                }
                self.counts.3 += 1;
                self.pos += 1;
                Ok(())
            }
        }
    }
}

/// Replays every leaf of the certificate's tree against the graph rebuilt
/// from the candidate.
pub fn verify_certificate(cert: &Certificate) -> Result<Verification> {
    let graph = build_zero_sum_graph(&cert.candidate)?;
    let target = target_graph(cert.target);
    let mut v = Verification {
        valid: false,
        problem: None,
        refuted: 0,
        exact: 0,
        wipeouts: 0,
        failed: 0,
    };
    if graph.vertices.len() != cert.vertices || graph.edge_count() != cert.edges {
        v.problem = Some(format!(
            "graph has {} vertices and {} edges, certificate says {} and {}",
            graph.vertices.len(),
            graph.edge_count(),
            cert.vertices,
            cert.edges
        ));
        return Ok(v);
    }
    if cert.tokens.is_empty() {
        v.problem = Some("empty search tree".into());
        return Ok(v);
    }
    let mut replay = Replay {
        graph: &graph,
        target: &target,
        tokens: &cert.tokens,
        pos: 0,
        assign: vec![UNASSIGNED; graph.vertices.len()],
        counts: (0, 0, 0, 0),
    };
    let outcome = replay.run();
    (v.refuted, v.exact, v.wipeouts, v.failed) = replay.counts;
    match outcome {
        Err(e) => v.problem = Some(e),
        Ok(()) if replay.pos != cert.tokens.len() => {
            v.problem = Some(format!("{} tokens after the end of the tree", cert.tokens.len() - replay.pos));
        }
        Ok(()) => {
            let expected =
                if v.failed == 0 { CertificateStatus::Refuted } else { CertificateStatus::Failed };
            if expected != cert.status {
                v.problem = Some(format!("status {} does not match the tree", cert.status));
            } else {
                v.valid = true;
            }
        }
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proof335::search::{hom_refute, SearchConfig};

    fn toy() -> Certificate {
        let host = GMultiSet::parse(&cube(), "(1,0,0) (2,0,0) (0,1,0) (0,2,0) (0,0,1) (0,0,2)")
            .unwrap();
        let graph = build_zero_sum_graph(&host).unwrap();
        hom_refute(&graph, &target_graph(TargetKind::C2), "toy", &SearchConfig::default()).unwrap()
    }

    #[test]
    fn text_round_trip() {
        let cert = toy();
        let text = cert.to_text().unwrap();
        let back = Certificate::parse(&text).unwrap();
        assert_eq!(back.to_text().unwrap(), text);
        assert_eq!(back.tokens, cert.tokens);
    }

    #[test]
    fn replay_and_tampering() {
        let cert = toy();
        let v = verify_certificate(&cert).unwrap();
        assert!(v.valid, "{v:?}");

        let mut tampered = cert.clone();
        let pos = tampered.tokens.iter().position(|t| matches!(t, Token::Refuted(_)));
        if let Some(p) = pos {
            if let Token::Refuted(g) = &tampered.tokens[p] {
                tampered.tokens[p] = Token::Refuted(g * 5);
            }
            assert!(!verify_certificate(&tampered).unwrap().valid);
        }

        let mut empty = cert.clone();
        empty.tokens.clear();
        let v = verify_certificate(&empty).unwrap();
        assert!(!v.valid);

        let mut truncated = cert.clone();
        truncated.tokens.pop();
        assert!(!verify_certificate(&truncated).unwrap().valid);
    }

    /// At every witness leaf of a real candidate the system is unsolvable
    /// modulo small primes above 3.
    #[test]
    fn witness_leaves_agree_with_direct_check() {
        use crate::intlinalg::{solvable_mod, IntMat};
        use crate::proof335::candidates::{enumerate_candidates, CandidateOptions};

        let reps = enumerate_candidates(13, 2, &CandidateOptions::default()).unwrap();
        let graph = build_zero_sum_graph(&reps[0]).unwrap();
        let target = target_graph(TargetKind::C3);
        let cert = hom_refute(&graph, &target, "nofunc2", &SearchConfig::default()).unwrap();
        let copies = graph.copies.len();
        let mut replay = Replay {
            graph: &graph,
            target: &target,
            tokens: &cert.tokens,
            pos: 0,
            assign: vec![UNASSIGNED; graph.vertices.len()],
            counts: (0, 0, 0, 0),
        };
        let mut checked = 0;
        // walk the tree like the verifier, stopping at every tenth witness leaf
        fn walk(r: &mut Replay, copies: usize, checked: &mut usize) {
            match r.tokens[r.pos].clone() {
                Token::Branch(v) => {
                    let dom = r.domain(v as usize);
                    r.pos += 1;
                    for a in 0..8u8 {
                        if dom >> a & 1 == 1 {
                            r.assign[v as usize] = a;
                            walk(r, copies, checked);
                        }
                    }
                    r.assign[v as usize] = UNASSIGNED;
                }
                Token::Refuted(_) => {
                    r.pos += 1;
                    r.counts.0 += 1;
                    if r.counts.0 % 10 != 1 {
                        return;
                    }
                    let aug = augmented(&system_rows(r.graph, r.target, &r.assign), copies);
                    let a = IntMat::from_rows(&aug.iter().map(|x| x[..2 * copies].to_vec()).collect::<Vec<_>>())
                        .unwrap();
                    let b = IntMat::column(&aug.iter().map(|x| x[2 * copies].clone()).collect::<Vec<_>>());
                    for n in [5, 7, 11, 13] {
                        assert!(!solvable_mod(&a, &b, n).unwrap());
                    }
                    *checked += 1;
                }
                _ => r.pos += 1,
            }
        }
        walk(&mut replay, copies, &mut checked);
        assert_eq!(replay.pos, cert.tokens.len());
        assert!(checked > 0);
    }

    #[test]
    fn rejects_bad_headers() {
        let text = toy().to_text().unwrap();
        assert!(Certificate::parse(&text.replace("zerosum-certificate 1", "zerosum-certificate 9")).is_err());
        assert!(Certificate::parse(&text.replace("\nend\n", "\n")).is_err());
        assert!(Certificate::parse("garbage").is_err());
    }
}
