//! Quotients of the pair graphs `C1`, `C2`, `C3` over `Z_n^2`, each node
//! carrying the linear conditions it imposes on the values of a vertex.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum TargetKind {
    C1,
    C2,
    C3,
}

impl TargetKind {
    pub const ALL: [TargetKind; 3] = [TargetKind::C1, TargetKind::C2, TargetKind::C3];
}

impl fmt::Display for TargetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for TargetKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "C1" | "c1" => Ok(Self::C1),
            "C2" | "c2" => Ok(Self::C2),
            "C3" | "c3" => Ok(Self::C3),
            _ => Err(Error::Parse(format!("unknown target {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Coord {
    X,
    Y,
}

/// `sum of the coord-values over the copies = rhs`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Condition {
    pub coord: Coord,
    pub rhs: i64,
}

const fn cond(coord: Coord, rhs: i64) -> Condition {
    Condition { coord, rhs }
}

#[derive(Clone, Debug, Serialize)]
pub struct TargetNode {
    pub label: &'static str,
    /// Conditions on a single vertex mapped here.
    pub conditions: Vec<Condition>,
    /// Condition on the union of two adjacent vertices both mapped here.
    pub loop_condition: Option<Condition>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TargetGraph {
    pub kind: TargetKind,
    pub nodes: Vec<TargetNode>,
    /// `adjacent[a]` has bit `b` set iff `a` and `b` are adjacent; bit `a`
    /// marks a loop.
    pub adjacent: Vec<u8>,
}

impl TargetGraph {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn all_nodes(&self) -> u8 {
        ((1u16 << self.nodes.len()) - 1) as u8
    }

    pub fn loops(&self) -> usize {
        (0..self.len()).filter(|&a| self.adjacent[a] >> a & 1 == 1).count()
    }

    /// Edges between distinct nodes.
    pub fn proper_edges(&self) -> usize {
        (0..self.len())
            .map(|a| (a + 1..self.len()).filter(|&b| self.adjacent[a] >> b & 1 == 1).count())
            .sum()
    }
}

fn build(
    kind: TargetKind,
    nodes: Vec<TargetNode>,
    edges: &[(usize, usize)],
) -> TargetGraph {
    let mut adjacent = vec![0u8; nodes.len()];
    for &(a, b) in edges {
        adjacent[a] |= 1 << b;
        adjacent[b] |= 1 << a;
    }
    TargetGraph { kind, nodes, adjacent }
}

fn node(label: &'static str, conditions: Vec<Condition>, loop_condition: Option<Condition>) -> TargetNode {
    TargetNode { label, conditions, loop_condition }
}

pub fn target_graph(kind: TargetKind) -> TargetGraph {
    use Coord::{X, Y};
    match kind {
        // all points (x, 1) merged into one
        TargetKind::C1 => build(kind, vec![node("(*,1)", vec![cond(Y, 1)], None)], &[(0, 0)]),
        // points (1, y) and (x, 1) with x, y not in {0, 1} merged
        TargetKind::C2 => build(
            kind,
            vec![
                node("(1,0)", vec![cond(X, 1), cond(Y, 0)], None),
                node("(0,1)", vec![cond(X, 0), cond(Y, 1)], None),
                node("(1,1)", vec![cond(X, 1), cond(Y, 1)], None),
                // {(1, y), (1, 1 - y)}
                node("(1,>=2)", vec![cond(X, 1)], Some(cond(Y, 1))),
                // {(x, 1), (1 - x, 1)}
                node("(>=2,1)", vec![cond(Y, 1)], Some(cond(X, 1))),
            ],
            &[(1, 0), (1, 2), (1, 3), (0, 2), (0, 4), (3, 3), (4, 4)],
        ),
        TargetKind::C3 => build(
            kind,
            vec![
                node("(1,0)", vec![cond(X, 1), cond(Y, 0)], None),
                node("(-1,1)", vec![cond(X, -1), cond(Y, 1)], None),
                node("(0,1)", vec![cond(X, 0), cond(Y, 1)], None),
                node("(1,-1)", vec![cond(X, 1), cond(Y, -1)], None),
            ],
            &[(0, 0), (0, 1), (2, 2), (2, 3)],
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes() {
        let c1 = target_graph(TargetKind::C1);
        assert_eq!((c1.len(), c1.loops(), c1.proper_edges()), (1, 1, 0));
        let c2 = target_graph(TargetKind::C2);
        assert_eq!((c2.len(), c2.loops(), c2.proper_edges()), (5, 2, 5));
        assert!(c2.nodes[3].loop_condition.is_some() && c2.nodes[4].loop_condition.is_some());
        let c3 = target_graph(TargetKind::C3);
        assert_eq!((c3.len(), c3.loops(), c3.proper_edges()), (4, 2, 2));
        assert!(c3.nodes.iter().all(|n| n.conditions.len() == 2));
    }

    /// Maps each pair of the C2 set over `Z_n^2` to merged nodes and checks
    /// that the image is an edge of the quotient.
    #[test]
    fn c2_quotient_is_a_homomorphic_image() {
        let n = 11i64;
        let c2 = target_graph(TargetKind::C2);
        let class = |x: i64, y: i64| -> usize {
            match (x.rem_euclid(n), y.rem_euclid(n)) {
                (1, 0) => 0,
                (0, 1) => 1,
                (1, 1) => 2,
                (1, _) => 3,
                (_, 1) => 4,
                p => panic!("{p:?} not in C2"),
            }
        };
        for x in 0..n {
            for (a, b) in [
                (class(1, 0), class(x, 1)),
                (class(x, 1), class(1 - x, 1)),
                (class(0, 1), class(1, x)),
                (class(1, x), class(1, 1 - x)),
            ] {
                assert!(c2.adjacent[a] >> b & 1 == 1, "{a} {b}");
            }
        }
    }
}
