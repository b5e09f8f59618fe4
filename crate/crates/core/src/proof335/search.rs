//! Backtracking over graph homomorphisms from a zero-sum graph into a target
//! graph, pruning a branch as soon as its linear conditions have an
//! unsolvability witness of the form `2^a 3^b`.
//!
//! Variables: `x_i` and `y_i` for every copy `i` of the host. A vertex mapped
//! to a node contributes that node's conditions over its copies; two adjacent
//! vertices mapped to the same node with a loop condition contribute that
//! condition over the union of their copies.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::certificate::{Certificate, CertificateStatus, Token};
use super::graph::{ZeroSumGraph, MAX_HOST};
use super::target::{Coord, TargetGraph};
use crate::error::{Error, Result};
use crate::intlinalg::{smooth_2_3, solvability_pattern, witness_from_rows, IntMat};

pub(crate) const UNASSIGNED: u8 = u8::MAX;

#[derive(Clone, Copy, Debug)]
pub struct SearchConfig {
    /// Run the exact solvability check on leaves the witness cannot refute.
    pub exact_leaves: bool,
    pub node_budget: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self { exact_leaves: false, node_budget: crate::zerosum::DEFAULT_NODE_BUDGET }
    }
}

/// One linear condition: `sum over copies in mask of coord = rhs`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Row {
    pub coord: Coord,
    pub mask: u32,
    pub rhs: i64,
}

/// The conditions added by mapping vertex `v` to node `a`, given the
/// assignment of the other vertices.
pub(crate) fn rows_for(
    graph: &ZeroSumGraph,
    target: &TargetGraph,
    assign: &[u8],
    v: usize,
    a: u8,
    out: &mut Vec<Row>,
) {
    let node = &target.nodes[a as usize];
    for c in &node.conditions {
        out.push(Row { coord: c.coord, mask: graph.vertices[v], rhs: c.rhs });
    }
    if let Some(c) = node.loop_condition {
        for &u in &graph.adjacency[v] {
            if assign[u as usize] == a {
                out.push(Row {
                    coord: c.coord,
                    mask: graph.vertices[v] | graph.vertices[u as usize],
                    rhs: c.rhs,
                });
            }
        }
    }
}

/// All conditions of a (partial) assignment, each loop condition once.
pub(crate) fn system_rows(graph: &ZeroSumGraph, target: &TargetGraph, assign: &[u8]) -> Vec<Row> {
    let mut rows = Vec::new();
    let mut partial = vec![UNASSIGNED; assign.len()];
    for v in 0..assign.len() {
        if assign[v] != UNASSIGNED {
            rows_for(graph, target, &partial, v, assign[v], &mut rows);
            partial[v] = assign[v];
        }
    }
    rows
}

/// Augmented integer rows over `2 * copies` variables, `x` block first.
pub(crate) fn augmented(rows: &[Row], copies: usize) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|r| {
            let mut v = vec![BigInt::zero(); 2 * copies + 1];
            let off = match r.coord {
                Coord::X => 0,
                Coord::Y => copies,
            };
            for i in 0..copies {
                if r.mask >> i & 1 == 1 {
                    v[off + i] = BigInt::from(1);
                }
            }
            v[2 * copies] = BigInt::from(r.rhs);
            v
        })
        .collect()
}

/// `true` when no modulus `n > 1` coprime to 6 solves the system.
pub(crate) fn exactly_refuted(rows: &[Row], copies: usize) -> Result<bool> {
    if rows.is_empty() {
        return Ok(false);
    }
    let aug = augmented(rows, copies);
    let a = IntMat::from_rows(&aug.iter().map(|r| r[..2 * copies].to_vec()).collect::<Vec<_>>())?;
    let b = IntMat::column(&aug.iter().map(|r| r[2 * copies].clone()).collect::<Vec<_>>());
    Ok(!solvability_pattern(&a, &b)?.admits_modulus_coprime_to_6())
}

const WIDTH: usize = MAX_HOST + 1;

/// Integer echelon form of one coordinate block, built with unimodular row
/// combinations; `None` from [`Echelon::add`] signals `i64` overflow.
#[derive(Clone)]
struct Echelon {
    vars: usize,
    rows: [[i64; WIDTH]; MAX_HOST],
    present: u32,
}

impl Echelon {
    fn new(vars: usize) -> Self {
        Self { vars, rows: [[0; WIDTH]; MAX_HOST], present: 0 }
    }

    /// Adds a row; returns the right-hand side left over when the row
    /// reduces to zero coefficients (0 if it became a new pivot).
    fn add(&mut self, mask: u32, rhs: i64) -> Option<i64> {
        let n = self.vars;
        let mut row = [0i64; WIDTH];
        for (i, v) in row.iter_mut().enumerate().take(n) {
            *v = (mask >> i & 1) as i64;
        }
        row[n] = rhs;
        for col in 0..n {
            if row[col] == 0 {
                continue;
            }
            if self.present >> col & 1 == 0 {
                if row[col] < 0 {
                    for v in row.iter_mut().take(n + 1) {
                        *v = v.checked_neg()?;
                    }
                }
                self.rows[col] = row;
                self.present |= 1 << col;
                return Some(0);
            }
            let piv = &mut self.rows[col];
            let e = piv[col].extended_gcd(&row[col]);
            let (g, s, t) = if e.gcd < 0 { (-e.gcd, -e.x, -e.y) } else { (e.gcd, e.x, e.y) };
            let a = piv[col] / g;
            let b = row[col] / g;
            for k in col..=n {
                let p = piv[k];
                let r = row[k];
                piv[k] = p.checked_mul(s)?.checked_add(r.checked_mul(t)?)?;
                row[k] = r.checked_mul(a)?.checked_sub(p.checked_mul(b)?)?;
            }
        }
        Some(row[n])
    }
}

#[derive(Clone)]
struct State {
    assign: Vec<u8>,
    domain: Vec<u8>,
    ech: Option<[Echelon; 2]>,
    /// gcd of the leftover right-hand sides; 0 while there is none.
    g: i64,
}

struct Search<'a> {
    graph: &'a ZeroSumGraph,
    target: &'a TargetGraph,
    config: SearchConfig,
    /// Vertices by decreasing degree, ties by index.
    by_degree: Vec<usize>,
    copies: usize,
    nodes: u64,
    tokens: Vec<Token>,
    failure: Option<Vec<u8>>,
    scratch: Vec<Row>,
}

impl Search<'_> {
    fn witness(&self, st: &State) -> Option<BigInt> {
        if st.ech.is_some() {
            return (st.g != 0).then(|| BigInt::from(st.g.abs()));
        }
        let rows = system_rows(self.graph, self.target, &st.assign);
        witness_from_rows(augmented(&rows, self.copies), 2 * self.copies)
    }

    fn assign(&mut self, st: &State, v: usize, a: u8) -> State {
        let mut next = st.clone();
        self.scratch.clear();
        rows_for(self.graph, self.target, &st.assign, v, a, &mut self.scratch);
        if let Some(ech) = next.ech.as_mut() {
            let mut ok = true;
            for r in &self.scratch {
                let block = match r.coord {
                    Coord::X => &mut ech[0],
                    Coord::Y => &mut ech[1],
                };
                match block.add(r.mask, r.rhs) {
                    Some(left) => next.g = next.g.gcd(&left),
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                next.ech = None;
            }
        }
        next.assign[v] = a;
        next.domain[v] = 1 << a;
        let allowed = self.target.adjacent[a as usize];
        for &u in &self.graph.adjacency[v] {
            if next.assign[u as usize] == UNASSIGNED {
                next.domain[u as usize] &= allowed;
            }
        }
        next
    }

    fn visit(&mut self, st: State) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.config.node_budget {
            return Err(Error::Budget { budget: self.config.node_budget });
        }
        if let Some(g) = self.witness(&st) {
            if smooth_2_3(&g).is_some() {
                self.tokens.push(Token::Refuted(g));
                return Ok(());
            }
        }
        let unassigned = |v: &usize| st.assign[*v] == UNASSIGNED;
        if let Some(u) = (0..st.assign.len()).filter(unassigned).find(|&u| st.domain[u] == 0) {
            self.tokens.push(Token::Wipeout(u as u32));
            return Ok(());
        }
        let forced = (0..st.assign.len()).filter(unassigned).find(|&u| st.domain[u].count_ones() == 1);
        let Some(v) = forced.or_else(|| self.by_degree.iter().copied().find(unassigned)) else {
            let rows = system_rows(self.graph, self.target, &st.assign);
            if self.config.exact_leaves && exactly_refuted(&rows, self.copies)? {
                self.tokens.push(Token::Exact);
            } else {
                self.tokens.push(Token::Failed);
                if self.failure.is_none() {
                    self.failure = Some(st.assign.clone());
                }
            }
            return Ok(());
        };
        self.tokens.push(Token::Branch(v as u32));
        let dom = st.domain[v];
        for a in 0..8u8 {
            if dom >> a & 1 == 1 {
                let child = self.assign(&st, v, a);
                self.visit(child)?;
            }
        }
        Ok(())
    }
}

/// Searches every homomorphism from `graph` to `target` and records the
/// search tree. The result is REFUTED iff every leaf is closed by a witness,
/// an exact check, or an empty domain.
pub fn hom_refute(
    graph: &ZeroSumGraph,
    target: &TargetGraph,
    problem: &str,
    config: &SearchConfig,
) -> Result<Certificate> {
    let copies = graph.copies.len();
    let nv = graph.vertices.len();
    let mut by_degree: Vec<usize> = (0..nv).collect();
    by_degree.sort_by_key(|&v| (std::cmp::Reverse(graph.adjacency[v].len()), v));
    let mut search = Search {
        graph,
        target,
        config: *config,
        by_degree,
        copies,
        nodes: 0,
        tokens: Vec::new(),
        failure: None,
        scratch: Vec::new(),
    };
    let root = State {
        assign: vec![UNASSIGNED; nv],
        domain: vec![target.all_nodes(); nv],
        ech: Some([Echelon::new(copies), Echelon::new(copies)]),
        g: 0,
    };
    search.visit(root)?;
    let failed = search.tokens.iter().any(|t| matches!(t, Token::Failed));
    let failure = search.failure.map(|assign| {
        assign
            .iter()
            .enumerate()
            .map(|(v, &a)| format!("{v}:{}", target.nodes[a as usize].label))
            .collect::<Vec<_>>()
            .join(" ")
    });
    Ok(Certificate {
        problem: problem.to_string(),
        target: target.kind,
        candidate: graph.host.clone(),
        vertices: nv,
        edges: graph.edge_count(),
        nodes_visited: search.nodes,
        status: if failed { CertificateStatus::Failed } else { CertificateStatus::Refuted },
        failure,
        tokens: search.tokens,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::GMultiSet;
    use crate::intlinalg::unsolvability_witness;
    use crate::proof335::cube;
    use crate::proof335::graph::build_zero_sum_graph;
    use crate::proof335::target::{target_graph, TargetKind};

    #[test]
    fn echelon_matches_one_shot_witness() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let vars = rng.gen_range(1..=13);
            let count = rng.gen_range(1..=30);
            let mut ech = Echelon::new(vars);
            let mut g = 0i64;
            let mut a = Vec::new();
            let mut b = Vec::new();
            for _ in 0..count {
                let mask: u32 = rng.gen_range(0..1u32 << vars);
                let rhs: i64 = rng.gen_range(-3..=3);
                g = g.gcd(&ech.add(mask, rhs).unwrap());
                a.push((0..vars).map(|i| (mask >> i & 1) as i64).collect::<Vec<_>>());
                b.push(rhs);
            }
            let want = unsolvability_witness(&IntMat::from_rows(&a).unwrap(), &IntMat::column(&b))
                .unwrap()
                .unwrap_or_default();
            assert_eq!(BigInt::from(g), want);
        }
    }

    #[test]
    fn single_vertex_is_not_refuted() {
        // one vertex {a, b, c}, no edges: the conditions X = 1, Y = 0 are
        // solvable for every n, so the search must report a failure
        let g = cube();
        let host = GMultiSet::parse(&g, "(1,0,0) (0,1,0) (2,2,0)").unwrap();
        let graph = ZeroSumGraph::from_parts(&host, vec![0b111]).unwrap();
        let cert =
            hom_refute(&graph, &target_graph(TargetKind::C3), "test", &SearchConfig::default())
                .unwrap();
        assert_eq!(cert.status, CertificateStatus::Failed);
        assert!(cert.failure.is_some());
    }

    #[test]
    fn loop_on_c1_is_refuted() {
        // three pairs {a, -a}: the union of two pairs is a vertex as well,
        // and y = 1 on all three gives 1 + 1 = 1
        let g = cube();
        let host =
            GMultiSet::parse(&g, "(1,0,0) (2,0,0) (0,1,0) (0,2,0) (0,0,1) (0,0,2)").unwrap();
        let graph = build_zero_sum_graph(&host).unwrap();
        assert!(!graph.vertices.is_empty());
        let cert =
            hom_refute(&graph, &target_graph(TargetKind::C1), "test", &SearchConfig::default())
                .unwrap();
        assert_eq!(cert.status, CertificateStatus::Refuted);
    }
}
