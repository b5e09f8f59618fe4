//! Zero-sum free multisets in `Z_n` and `Z_n^2`: Property B, the
//! multiplicity lemma for long zero-sum free sequences in `Z_n`, the
//! unit-scaling characterisation, and the completions of zero-sum free sets
//! of size `2n - 3` and `2n - 4` in `Z_n^2`.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::abelian::{automorphism_table, automorphisms, GElem, GMultiSet, GroupSpec, GroupTables};
use crate::error::{Error, Result};
use crate::zerosum::{Bits, SearchOptions};

/// Depth-first walk over zero-sum free multisets built in increasing
/// element order on top of a fixed seed.
struct ZsfWalk<'a> {
    t: &'a GroupTables,
    allowed: Vec<bool>,
    cap: u32,
    target: usize,
    budget: u64,
    nodes: u64,
    counts: Vec<u32>,
}

impl ZsfWalk<'_> {
    fn go(
        &mut self,
        reach: &Bits,
        size: usize,
        from: usize,
        visit: &mut dyn FnMut(&[u32]) -> bool,
    ) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::Budget { budget: self.budget });
        }
        if size == self.target {
            return Ok(visit(&self.counts));
        }
        for j in from..self.allowed.len() {
            if !self.allowed[j] {
                continue;
            }
            let mut r = reach.clone();
            let mut added = 0;
            while added < self.cap && size + (added as usize) < self.target {
                r = r.extended(self.t, j);
                if r.get(0) {
                    break;
                }
                added += 1;
                self.counts[j] = added;
                if !self.go(&r, size + added as usize, j + 1, visit)? {
                    self.counts[j] = 0;
                    return Ok(false);
                }
            }
            self.counts[j] = 0;
        }
        Ok(true)
    }
}

/// Calls `visit` on zero-sum free multisets of cardinality `size` that
/// contain `seed` and otherwise use only `allowed` elements with
/// multiplicity at most `cap`. Stops early when `visit` returns false.
/// Returns the number of search nodes.
fn walk_zero_sum_free(
    g: &GroupSpec,
    seed: &[(usize, u32)],
    allowed: Vec<bool>,
    cap: u32,
    size: usize,
    opts: &SearchOptions,
    visit: &mut dyn FnMut(&[u32]) -> bool,
) -> Result<u64> {
    let t = g.tables()?;
    let mut counts = vec![0u32; g.order()];
    let mut reach = Bits::new(g.order());
    let mut seeded = 0usize;
    for &(e, m) in seed {
        for _ in 0..m {
            reach = reach.extended(&t, e);
            if reach.get(0) {
                return Ok(0);
            }
        }
        counts[e] += m;
        seeded += m as usize;
    }
    if seeded > size {
        return Ok(0);
    }
    let mut walk =
        ZsfWalk { t: &t, allowed, cap, target: size, budget: opts.node_budget, nodes: 0, counts };
    walk.go(&reach, seeded, 0, visit)?;
    Ok(walk.nodes)
}

fn rank2_modulus(g: &GroupSpec) -> Result<u32> {
    match g.as_elementary() {
        Some((n, 2)) => Ok(n),
        _ => Err(Error::Argument(format!("expected a group Z_n^2, got {g}"))),
    }
}

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Zero-sum free multisets of cardinality `size` over `Z_n^2` with maximal
/// multiplicity at most `max_mult`, covering every automorphism class at
/// least once.
///
/// For prime `n` the automorphism group acts transitively on nonzero
/// elements, so a most frequent element can be assumed to be `(1,0)`; for
/// other `n` the enumeration is complete.
pub fn zero_sum_free_rank2(
    n: u32,
    size: usize,
    max_mult: u32,
    opts: &SearchOptions,
) -> Result<Vec<GMultiSet>> {
    let g = GroupSpec::elementary(n, 2)?;
    let mut found = Vec::new();
    let mut collect = |c: &[u32]| {
        found.push(c.to_vec());
        true
    };
    if is_prime(n) {
        let e1 = g.index_of(&g.basis(0));
        let mut allowed = vec![true; g.order()];
        allowed[0] = false;
        allowed[e1] = false;
        let mut spent = 0;
        for m in 1..=max_mult.min(n - 1) {
            let budget = SearchOptions { node_budget: opts.node_budget.saturating_sub(spent) };
            spent += walk_zero_sum_free(&g, &[(e1, m)], allowed.clone(), m, size, &budget, &mut collect)?;
        }
    } else {
        let mut allowed = vec![true; g.order()];
        allowed[0] = false;
        walk_zero_sum_free(&g, &[], allowed, max_mult, size, opts, &mut collect)?;
    }
    found.into_iter().map(|c| GMultiSet::from_counts(&g, c)).collect()
}

/// Outcome of a Property B check.
#[derive(Clone, Debug)]
pub struct PropertyB {
    pub n: u32,
    pub holds: bool,
    /// A maximal zero-sum free multiset without an element of multiplicity
    /// at least `n - 2`.
    pub counterexample: Option<GMultiSet>,
}

/// Property B for `Z_n^2`: every zero-sum free multiset of the maximal
/// cardinality `2n - 2` contains an element of multiplicity at least `n - 2`.
pub fn property_b(n: u32, opts: &SearchOptions) -> Result<PropertyB> {
    if n < 2 {
        return Err(Error::Argument(format!("n must be at least 2, got {n}")));
    }
    if n <= 3 {
        return Ok(PropertyB { n, holds: true, counterexample: None });
    }
    let g = GroupSpec::elementary(n, 2)?;
    let size = 2 * n as usize - 2;
    let mut counterexample: Option<Vec<u32>> = None;
    let mut stop = |c: &[u32]| {
        counterexample = Some(c.to_vec());
        false
    };
    let cap = n - 3;
    if is_prime(n) {
        let e1 = g.index_of(&g.basis(0));
        let mut allowed = vec![true; g.order()];
        allowed[0] = false;
        allowed[e1] = false;
        for m in 1..=cap {
            walk_zero_sum_free(&g, &[(e1, m)], allowed.clone(), m, size, opts, &mut stop)?;
        }
    } else {
        let mut allowed = vec![true; g.order()];
        allowed[0] = false;
        walk_zero_sum_free(&g, &[], allowed, cap, size, opts, &mut stop)?;
    }
    let counterexample = counterexample.map(|c| GMultiSet::from_counts(&g, c)).transpose()?;
    Ok(PropertyB { n, holds: counterexample.is_none(), counterexample })
}

fn for_each_cyclic_zsf(
    n: u32,
    min_size: usize,
    opts: &SearchOptions,
    mut visit: impl FnMut(&[u32], usize) -> bool,
) -> Result<bool> {
    let g = GroupSpec::cyclic(n)?;
    let mut ok = true;
    for size in min_size..n as usize {
        let mut allowed = vec![true; n as usize];
        allowed[0] = false;
        walk_zero_sum_free(&g, &[], allowed, n - 1, size, opts, &mut |c| {
            ok = visit(c, size);
            ok
        })?;
        if !ok {
            break;
        }
    }
    Ok(ok)
}

/// Every zero-sum free `A` in `Z_n` with `N = |A| >= 2n/3` has an element
/// of multiplicity greater than `2N - n`, and such an element generates `Z_n`.
pub fn ben_check(n: u32, opts: &SearchOptions) -> Result<bool> {
    check_cyclic(n)?;
    let min_size = (2 * n as usize).div_ceil(3);
    for_each_cyclic_zsf(n, min_size, opts, |counts, size| {
        let threshold = 2 * size as i64 - n as i64;
        counts.iter().enumerate().any(|(a, &m)| {
            m as i64 > threshold && num_integer::gcd(a as u32, n) == 1
        })
    })
}

fn check_cyclic(n: u32) -> Result<()> {
    if !(2..=30).contains(&n) {
        return Err(Error::Argument(format!("n must lie in 2..=30, got {n}")));
    }
    Ok(())
}

/// Least nonnegative representative sum `sum iota(alpha a)` minimised over
/// units `alpha`.
fn min_unit_scaled_sum(n: u32, counts: &[u32]) -> u64 {
    (1..n.max(2))
        .filter(|&u| num_integer::gcd(u, n) == 1)
        .map(|u| {
            counts
                .iter()
                .enumerate()
                .map(|(a, &m)| m as u64 * ((a as u64 * u as u64) % n as u64))
                .sum::<u64>()
        })
        .min()
        .unwrap_or(0)
}

/// For every multiset `A` over `Z_n` with `|A| >= 3n/4`: `A` is zero-sum free
/// iff `0` is not in `A` and some unit `alpha` has
/// `sum iota(alpha a) <= n - 1`.
///
/// Multisets with at least `n` elements satisfy neither side, so only
/// cardinalities below `n` are enumerated.
pub fn corcd_check(n: u32, opts: &SearchOptions) -> Result<bool> {
    check_cyclic(n)?;
    let g = GroupSpec::cyclic(n)?;
    let t = g.tables()?;
    let min_size = (3 * n as usize).div_ceil(4);
    struct Walk<'a> {
        t: &'a GroupTables,
        n: u32,
        min_size: usize,
        budget: u64,
        nodes: u64,
        counts: Vec<u32>,
    }
    impl Walk<'_> {
        // `reach` is None once a zero-sum has appeared
        fn go(&mut self, reach: Option<&Bits>, size: usize, from: usize) -> Result<bool> {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::Budget { budget: self.budget });
            }
            if size >= self.min_size {
                let zsf = reach.is_some();
                let rhs = self.counts[0] == 0
                    && min_unit_scaled_sum(self.n, &self.counts) <= self.n as u64 - 1;
                if zsf != rhs {
                    return Ok(false);
                }
            }
            if size + 1 >= self.n as usize {
                return Ok(true);
            }
            for j in from..self.n as usize {
                let next = reach.map(|r| r.extended(self.t, j)).filter(|r| !r.get(0));
                self.counts[j] += 1;
                let ok = self.go(next.as_ref(), size + 1, j)?;
                self.counts[j] -= 1;
                if !ok {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
    let mut walk = Walk {
        t: &t,
        n,
        min_size,
        budget: opts.node_budget,
        nodes: 0,
        counts: vec![0; n as usize],
    };
    walk.go(Some(&Bits::new(n as usize)), 0, 0)
}

/// Which of the three model pair sets contains the completion pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Classification {
    C1,
    C2,
    C3,
    Exception,
    None,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::C1 => "C1",
            Self::C2 => "C2",
            Self::C3 => "C3",
            Self::Exception => "EXCEPTION",
            Self::None => "NONE",
        })
    }
}

/// The elements and element pairs that extend `base` to a zero-sum free
/// multiset.
#[derive(Clone, Debug)]
pub struct CompletionReport {
    pub base: GMultiSet,
    pub singles: Vec<GElem>,
    /// Unordered, `c1 <= c2` by element index; `c1 = c2` is allowed.
    pub pairs: Vec<(GElem, GElem)>,
    /// First of `C1`, `C2`, `C3` that contains an automorphic image of the
    /// pair set; `Exception` or `None` when none does.
    pub classification: Classification,
    /// Row-major matrix of an automorphism mapping the pairs into the class.
    pub automorphism: Option<Vec<u32>>,
    /// `base = {b1^(n-2), b2^(n-2)}` for a basis `b1, b2`.
    pub exceptional: bool,
    /// `(u, v)` of a homomorphism `F(x, y) = ux + vy` with the completion
    /// property: `F(c) = 1` for every single when `|base| = 2n - 3`; for
    /// `2n - 4`, `F(c1), F(c2)` in `{0, 1}` with at least one equal to 1.
    pub homomorphism: Option<(u32, u32)>,
}

/// Indices of `C1`, `C2`, `C3` pair sets as symmetric membership tables.
fn model_pair_sets(g: &GroupSpec) -> Result<[Vec<bool>; 3]> {
    let n = rank2_modulus(g)? as i64;
    let order = g.order();
    let idx = |x: i64, y: i64| g.index_of(&g.elem(&[x, y]).expect("in range"));
    let mut sets = [vec![false; order * order], vec![false; order * order], vec![false; order * order]];
    let mut put = |s: usize, a: usize, b: usize| {
        sets[s][a * order + b] = true;
        sets[s][b * order + a] = true;
    };
    for x1 in 0..n {
        for x2 in 0..n {
            put(0, idx(x1, 1), idx(x2, 1));
        }
    }
    for x in 0..n {
        put(1, idx(1, 0), idx(x, 1));
        put(1, idx(x, 1), idx(1 - x, 1));
        put(1, idx(0, 1), idx(1, x));
        put(1, idx(1, x), idx(1, 1 - x));
    }
    put(2, idx(1, 0), idx(1, 0));
    put(2, idx(1, 0), idx(-1, 1));
    put(2, idx(0, 1), idx(0, 1));
    put(2, idx(0, 1), idx(1, -1));
    Ok(sets)
}

fn is_exceptional(base: &GMultiSet, n: u32) -> bool {
    let support: Vec<(GElem, u32)> = base.entries().collect();
    if support.len() != 2 || support.iter().any(|(_, m)| *m != n - 2) {
        return false;
    }
    let (a, b) = (support[0].0.coords(), support[1].0.coords());
    let det = (a[0] as i64 * b[1] as i64 - a[1] as i64 * b[0] as i64).rem_euclid(n as i64);
    num_integer::gcd(det as u32, n) == 1
}

fn find_homomorphism(
    n: u32,
    singles: &[GElem],
    pairs: &[(GElem, GElem)],
    two_point: bool,
) -> Option<(u32, u32)> {
    let f = |u: u32, v: u32, c: &GElem| {
        (u as u64 * c.coords()[0] as u64 + v as u64 * c.coords()[1] as u64) % n as u64
    };
    (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).find(|&(u, v)| {
        if two_point {
            pairs.iter().all(|(a, b)| {
                let (fa, fb) = (f(u, v, a), f(u, v, b));
                fa <= 1 && fb <= 1 && fa + fb >= 1
            })
        } else {
            singles.iter().all(|c| f(u, v, c) == 1)
        }
    })
}

/// Scans all one- and two-element completions of `base` and classifies the
/// pair set up to automorphisms of `Z_n^2`.
pub fn completion_report(base: &GMultiSet) -> Result<CompletionReport> {
    let g = base.group().clone();
    let n = rank2_modulus(&g)?;
    let size = base.cardinality();
    let two_point = if size + 4 == 2 * n as usize {
        true
    } else if size + 3 == 2 * n as usize {
        false
    } else {
        return Err(Error::Argument(format!(
            "base must have 2n-3 or 2n-4 = {} or {} elements, got {size}",
            2 * n - 3,
            2 * n - 4
        )));
    };
    let t = g.tables()?;
    let order = g.order();

    let mut reach = Bits::new(order);
    let mut zsf = true;
    for i in base.expanded_indices() {
        reach = reach.extended(&t, i);
        if reach.get(0) {
            zsf = false;
            break;
        }
    }
    let mut single_idx = Vec::new();
    let mut pair_idx = Vec::new();
    if zsf {
        single_idx = (1..order).filter(|&c| !reach.get(t.neg(c))).collect();
        for (p, &c1) in single_idx.iter().enumerate() {
            let r1 = reach.extended(&t, c1);
            for &c2 in &single_idx[p..] {
                if !r1.get(t.neg(c2)) {
                    pair_idx.push((c1, c2));
                }
            }
        }
    }

    let sets = model_pair_sets(&g)?;
    let table = automorphism_table(&g)?;
    let mut classification = Classification::None;
    let mut automorphism = None;
    'classes: for (s, class) in [Classification::C1, Classification::C2, Classification::C3]
        .into_iter()
        .enumerate()
    {
        for a in 0..table.len() {
            let inside = pair_idx
                .iter()
                .all(|&(x, y)| sets[s][table.map(a, x) * order + table.map(a, y)]);
            if inside {
                classification = class;
                automorphism = automorphisms(&g)?.nth(a).map(|m| m.matrix().to_vec());
                break 'classes;
            }
        }
    }
    let exceptional = two_point && is_exceptional(base, n);
    if classification == Classification::None && exceptional {
        classification = Classification::Exception;
    }

    let singles: Vec<GElem> = single_idx.iter().map(|&i| g.elem_at(i)).collect();
    let pairs: Vec<(GElem, GElem)> =
        pair_idx.iter().map(|&(a, b)| (g.elem_at(a), g.elem_at(b))).collect();
    let homomorphism = find_homomorphism(n, &singles, &pairs, two_point);
    Ok(CompletionReport {
        base: base.clone(),
        singles,
        pairs,
        classification,
        automorphism,
        exceptional,
        homomorphism,
    })
}

/// Aggregate over all zero-sum free bases of one size.
#[derive(Clone, Debug, Default, Serialize)]
pub struct CompletionSummary {
    pub n: u32,
    pub size: usize,
    pub bases: usize,
    pub c1: usize,
    pub c2: usize,
    pub c3: usize,
    pub exception: usize,
    pub none: usize,
    pub exceptional_bases: usize,
    /// Non-exceptional bases without a suitable homomorphism.
    pub missing_homomorphism: usize,
    /// Bases classified as NONE or missing a homomorphism, as text.
    pub failures: Vec<String>,
}

impl CompletionSummary {
    pub fn ok(&self) -> bool {
        self.none == 0 && self.missing_homomorphism == 0
    }
}

/// Runs [`completion_report`] on a representative of every automorphism
/// class of zero-sum free bases of cardinality `size` in `Z_n^2`.
pub fn verify_completions(n: u32, size: usize, opts: &SearchOptions) -> Result<CompletionSummary> {
    let bases = zero_sum_free_rank2(n, size, n - 1, opts)?;
    let reports: Vec<CompletionReport> =
        bases.par_iter().map(completion_report).collect::<Result<_>>()?;
    let mut s = CompletionSummary { n, size, bases: reports.len(), ..Default::default() };
    for r in &reports {
        match r.classification {
            Classification::C1 => s.c1 += 1,
            Classification::C2 => s.c2 += 1,
            Classification::C3 => s.c3 += 1,
            Classification::Exception => s.exception += 1,
            Classification::None => s.none += 1,
        }
        s.exceptional_bases += r.exceptional as usize;
        let missing = !r.exceptional && r.homomorphism.is_none();
        s.missing_homomorphism += missing as usize;
        if missing || r.classification == Classification::None {
            s.failures.push(r.base.to_string());
        }
    }
    Ok(s)
}
