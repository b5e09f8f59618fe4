//! Multisets over `Z_3^3` of a given size with no zero-sum of length at most
//! 3 and a bounded number of disjoint zero-sums, up to automorphism.

use std::collections::{BTreeSet, HashSet};

use rayon::prelude::*;

use super::{cube, ShortSumGuard};
use crate::abelian::{automorphism_table, canonicalize, GMultiSet, GroupSpec, GroupTables};
use crate::error::{Error, Result};
use crate::zerosum::{has_short_zero_sum, max_disjoint_zero_sums};

#[derive(Clone, Copy, Debug)]
pub struct CandidateOptions {
    /// Fix a doubled standard basis (three vectors for size 13, two for
    /// size 10) before searching. Disable to enumerate every multiset.
    pub seeded: bool,
    pub node_budget: u64,
}

impl Default for CandidateOptions {
    fn default() -> Self {
        Self { seeded: true, node_budget: crate::zerosum::DEFAULT_NODE_BUDGET }
    }
}

/// Post-hoc filter: cardinality, no zero-sum of length at most 3, at most
/// `max_disjoint` pairwise disjoint zero-sums.
pub fn is_candidate(ms: &GMultiSet, size: usize, max_disjoint: usize) -> Result<bool> {
    Ok(ms.group().as_elementary() == Some((3, 3))
        && ms.cardinality() == size
        && !has_short_zero_sum(ms, 3)?
        && max_disjoint_zero_sums(ms, max_disjoint + 1)? <= max_disjoint)
}

/// A zero-sum of length at least 4 needs that many elements, so
/// `max_disjoint + 1` disjoint ones need `4 (max_disjoint + 1)`.
fn disjoint_check_from(max_disjoint: usize) -> usize {
    4 * (max_disjoint + 1)
}

struct Walk<'a> {
    g: &'a GroupSpec,
    t: &'a GroupTables,
    size: usize,
    max_disjoint: usize,
    fixed: Vec<bool>,
    counts: Vec<u32>,
    budget: u64,
    nodes: u64,
    found: Vec<Vec<u32>>,
}

impl Walk<'_> {
    fn go(&mut self, guard: ShortSumGuard, card: usize, from: usize) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::Budget { budget: self.budget });
        }
        if card >= disjoint_check_from(self.max_disjoint) {
            let ms = GMultiSet::from_counts(self.g, self.counts.clone())?;
            if max_disjoint_zero_sums(&ms, self.max_disjoint + 1)? > self.max_disjoint {
                return Ok(());
            }
        }
        if card == self.size {
            self.found.push(self.counts.clone());
            return Ok(());
        }
        let order = self.counts.len();
        for e in from..order {
            if self.fixed[e] {
                continue;
            }
            // two copies of every later element must still be able to fill up
            let free_after = (e + 1..order).filter(|&j| !self.fixed[j]).count();
            if card + 2 + 2 * free_after < self.size {
                break;
            }
            let mut gd = guard;
            for m in 1..=2u32 {
                if card + m as usize > self.size {
                    break;
                }
                match gd.push(self.t, e) {
                    Some(next) => gd = next,
                    None => break,
                }
                self.counts[e] = m;
                self.go(gd, card + m as usize, e + 1)?;
            }
            self.counts[e] = 0;
        }
        Ok(())
    }
}

fn seed_for(size: usize, seeded: bool) -> Vec<usize> {
    let g = cube();
    let basis: Vec<usize> = (0..3).map(|i| g.index_of(&g.basis(i))).collect();
    match (seeded, size) {
        // at most 8 distinct elements, each at most twice: 13 elements have
        // at least 5 doubled ones, and 5 elements of Z_3^3 without a pair
        // {a, -a} span the whole space
        (true, s) if s >= 13 => basis,
        // 10 elements have at least 2 doubled ones, necessarily independent
        (true, s) if s >= 10 => basis[..2].to_vec(),
        _ => Vec::new(),
    }
}

/// Raw (not deduplicated) multisets found by the depth-first search.
pub fn raw_candidates(
    size: usize,
    max_disjoint: usize,
    opts: &CandidateOptions,
) -> Result<Vec<GMultiSet>> {
    let g = cube();
    let t = g.tables()?;
    let seed = seed_for(size, opts.seeded);
    let mut guard = ShortSumGuard::default();
    let mut counts = vec![0u32; g.order()];
    let mut fixed = vec![false; g.order()];
    for &e in &seed {
        for _ in 0..2 {
            guard = guard.push(&t, e).expect("doubled basis has no short zero-sum");
        }
        counts[e] = 2;
        fixed[e] = true;
    }
    let card = 2 * seed.len();
    // split on the first free element for parallelism; each branch is an
    // independent subtree
    let firsts: Vec<usize> = (1..g.order()).filter(|&e| !fixed[e]).collect();
    let branches: Vec<Vec<Vec<u32>>> = firsts
        .par_iter()
        .map(|&first| -> Result<Vec<Vec<u32>>> {
            let mut walk = Walk {
                g: &g,
                t: &t,
                size,
                max_disjoint,
                fixed: fixed.clone(),
                counts: counts.clone(),
                budget: opts.node_budget,
                nodes: 0,
                found: Vec::new(),
            };
            // elements below `first` are excluded in this branch
            for e in 1..first {
                walk.fixed[e] = true;
            }
            let mut gd = guard;
            for m in 1..=2u32 {
                if card + m as usize > size {
                    break;
                }
                match gd.push(&t, first) {
                    Some(next) => gd = next,
                    None => break,
                }
                walk.counts[first] = m;
                walk.go(gd, card + m as usize, first + 1)?;
            }
            Ok(walk.found)
        })
        .collect::<Result<_>>()?;
    let mut out = Vec::new();
    if card == size {
        out.push(GMultiSet::from_counts(&g, counts.clone())?);
    }
    for b in branches {
        for c in b {
            out.push(GMultiSet::from_counts(&g, c)?);
        }
    }
    Ok(out)
}

/// Canonical orbit representatives, sorted by their multiplicity vectors.
pub fn enumerate_candidates(
    size: usize,
    max_disjoint: usize,
    opts: &CandidateOptions,
) -> Result<Vec<GMultiSet>> {
    let raw = raw_candidates(size, max_disjoint, opts)?;
    let table = automorphism_table(&cube())?;
    let canon: BTreeSet<Vec<u32>> = raw.par_iter().map(|m| table.canonical(m.counts())).collect();
    let g = cube();
    canon.into_iter().map(|c| GMultiSet::from_counts(&g, c)).collect()
}

/// Every multiset in the orbit of `ms`.
pub fn orbit(ms: &GMultiSet) -> Result<HashSet<Vec<u32>>> {
    let table = automorphism_table(ms.group())?;
    Ok((0..table.len()).map(|a| table.image(a, ms.counts())).collect())
}

/// Checks that the orbits of `reps` are exactly the multisets found by an
/// unseeded search: same count, and every raw multiset lies in some orbit.
pub fn cross_check_unseeded(
    reps: &[GMultiSet],
    size: usize,
    max_disjoint: usize,
    node_budget: u64,
) -> Result<bool> {
    let mut union: HashSet<Vec<u32>> = HashSet::new();
    for r in reps {
        union.extend(orbit(r)?);
    }
    let raw = raw_candidates(size, max_disjoint, &CandidateOptions { seeded: false, node_budget })?;
    let distinct: HashSet<&[u32]> = raw.iter().map(|m| m.counts()).collect();
    Ok(distinct.len() == raw.len()
        && raw.len() == union.len()
        && raw.iter().all(|m| union.contains(m.counts())))
}

/// Canonical forms of candidates, for comparing against a reference list.
pub fn canonical_forms(list: &[GMultiSet]) -> Result<BTreeSet<Vec<u32>>> {
    list.iter().map(|m| canonicalize(m).map(|c| c.counts().to_vec())).collect()
}
