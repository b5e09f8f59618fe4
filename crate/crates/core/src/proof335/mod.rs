//! The `Z_3^3` part of the proof of `D(Z_3 + Z_3n + Z_3n) = 6n + 1` for `n`
//! coprime to 6: short zero-sums in `Z_3^3`, the candidate multisets, the
//! graph of disjoint zero-sums, and a certified search showing that no
//! (multi-)function into `Z_n` or `Z_n^2` has the required zero-sum values.

pub mod candidates;
pub mod certificate;
pub mod graph;
pub mod length3;
pub mod nofunc;
pub mod search;
pub mod target;

pub use candidates::{enumerate_candidates, is_candidate, CandidateOptions};
pub use certificate::{verify_certificate, Certificate, CertificateStatus};
pub use graph::{build_zero_sum_graph, ZeroSumGraph};
pub use length3::{verify_length3, Length3Report};
pub use nofunc::{prove_nofunc1, prove_nofunc2, NoFunc1Summary, NoFunc2Summary};
pub use search::{hom_refute, SearchConfig};
pub use target::{target_graph, TargetGraph, TargetKind};

use crate::abelian::GroupSpec;

/// `Z_3^3`.
pub fn cube() -> GroupSpec {
    GroupSpec::elementary(3, 3).expect("Z_3^3 is a valid group")
}

/// Elements of `Z_3^3` as bits of a `u32`.
type Mask27 = u32;

/// Sums of one and of two elements of a multiset over `Z_3^3`, enough to
/// decide in constant time whether adding an element creates a zero-sum of
/// length at most 3.
#[derive(Clone, Copy, Debug, Default)]
struct ShortSumGuard {
    ones: Mask27,
    twos: Mask27,
}

impl ShortSumGuard {
    /// The guard after adding `e`, or `None` if that creates a zero-sum of
    /// length at most 3.
    fn push(&self, t: &crate::abelian::GroupTables, e: usize) -> Option<Self> {
        let ne = t.neg(e);
        if e == 0 || self.ones >> ne & 1 == 1 || self.twos >> ne & 1 == 1 {
            return None;
        }
        let mut twos = self.twos;
        let mut ones = self.ones;
        while ones != 0 {
            let a = ones.trailing_zeros() as usize;
            ones &= ones - 1;
            twos |= 1 << t.add(a, e);
        }
        Some(Self { ones: self.ones | 1 << e, twos })
    }
}
