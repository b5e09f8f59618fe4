//! Short zero-sums in `Z_3^3`: 9 distinct elements always contain a
//! zero-sum of length at most 3, and up to automorphism exactly one set of 8
//! distinct elements avoids them.

use std::collections::BTreeSet;

use serde::Serialize;

use super::{cube, ShortSumGuard};
use crate::abelian::{canonicalize, GMultiSet, GroupTables};
use crate::error::Result;
use crate::zerosum::{disjoint_zero_sum_system, has_short_zero_sum};

#[derive(Clone, Debug, Serialize)]
pub struct Length3Report {
    /// `survivors[k]`: sets of `k` distinct elements without a zero-sum of
    /// length at most 3.
    pub survivors: Vec<u64>,
    /// Canonical representatives of the 8-element survivors.
    pub orbits_of_8: Vec<String>,
    /// `{x, y, z, x+y, x+y+z, x+2y+z, 2x+z, y+2z}` for the standard basis.
    pub explicit_set: String,
    pub explicit_is_survivor: bool,
    pub explicit_in_orbit: bool,
    /// Each element has multiplicity at most 2 in a multiset without
    /// length-3 zero-sums, so 17 elements include 9 distinct ones. The doubled
    /// explicit set shows 16 is not enough.
    pub doubled_has_short_zero_sum: bool,
    /// Four disjoint zero-sums in the doubled explicit set.
    pub doubled_disjoint: Vec<String>,
}

impl Length3Report {
    pub fn nine_survivors(&self) -> u64 {
        self.survivors.get(9).copied().unwrap_or(0)
    }

    pub fn eight_survivors(&self) -> u64 {
        self.survivors.get(8).copied().unwrap_or(0)
    }

    /// All claims hold.
    pub fn ok(&self) -> bool {
        self.nine_survivors() == 0
            && self.orbits_of_8.len() == 1
            && self.explicit_is_survivor
            && self.explicit_in_orbit
            && !self.doubled_has_short_zero_sum
            && self.doubled_disjoint.len() == 4
    }
}

/// The explicit 8-element set, doubled when `mult = 2`.
pub fn explicit_set(mult: u32) -> GMultiSet {
    let g = cube();
    let mut ms = GMultiSet::new(&g);
    for c in [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 0], [1, 1, 1], [1, 2, 1], [2, 0, 1], [0, 1, 2]] {
        ms.insert(&g.elem(&c).expect("coordinates in range"), mult).expect("same group");
    }
    ms
}

pub fn verify_length3() -> Result<Length3Report> {
    let g = cube();
    let t = g.tables()?;
    let mut survivors = vec![0u64; 10];
    let mut eights: Vec<Vec<u32>> = Vec::new();

    fn walk(
        t: &GroupTables,
        guard: ShortSumGuard,
        from: usize,
        chosen: &mut Vec<usize>,
        survivors: &mut Vec<u64>,
        eights: &mut Vec<Vec<u32>>,
    ) {
        let k = chosen.len();
        if k >= survivors.len() {
            survivors.resize(k + 1, 0);
        }
        survivors[k] += 1;
        if k == 8 {
            let mut counts = vec![0u32; t.order()];
            for &e in chosen.iter() {
                counts[e] = 1;
            }
            eights.push(counts);
        }
        for e in from..t.order() {
            if let Some(next) = guard.push(t, e) {
                chosen.push(e);
                walk(t, next, e + 1, chosen, survivors, eights);
                chosen.pop();
            }
        }
    }
    walk(&t, ShortSumGuard::default(), 1, &mut Vec::new(), &mut survivors, &mut eights);

    let mut orbits = BTreeSet::new();
    for counts in eights {
        let ms = GMultiSet::from_counts(&g, counts)?;
        orbits.insert(canonicalize(&ms)?.counts().to_vec());
    }
    let orbits: Vec<GMultiSet> =
        orbits.into_iter().map(|c| GMultiSet::from_counts(&g, c)).collect::<Result<_>>()?;

    let explicit = explicit_set(1);
    let explicit_is_survivor = explicit.cardinality() == 8 && !has_short_zero_sum(&explicit, 3)?;
    let explicit_canon = canonicalize(&explicit)?;
    let explicit_in_orbit = orbits.iter().any(|o| *o == explicit_canon);

    let doubled = explicit_set(2);
    let doubled_has_short_zero_sum = has_short_zero_sum(&doubled, 3)?;
    let system = disjoint_zero_sum_system(&doubled, 4)?;
    let doubled_disjoint = if system.is_valid() {
        system.parts.iter().map(ToString::to_string).collect()
    } else {
        Vec::new()
    };

    Ok(Length3Report {
        survivors,
        orbits_of_8: orbits.iter().map(ToString::to_string).collect(),
        explicit_set: explicit.to_string(),
        explicit_is_survivor,
        explicit_in_orbit,
        doubled_has_short_zero_sum,
        doubled_disjoint,
    })
}
