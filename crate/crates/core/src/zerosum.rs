//! Zero-sum detection, disjoint zero-sum packings and the Davenport family
//! `D(G)`, `D_m(G)` and `D^L(G)`.

use std::collections::HashSet;

use crate::abelian::{GMultiSet, GroupSpec, GroupTables};
use crate::error::{Error, Result};

/// Default node limit for exhaustive searches.
pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000_000;

#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    pub node_budget: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self { node_budget: DEFAULT_NODE_BUDGET }
    }
}

/// Fixed-size bitset over element indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Bits(Vec<u64>);

impl Bits {
    pub(crate) fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }

    #[inline]
    pub(crate) fn get(&self, i: usize) -> bool {
        self.0[i >> 6] >> (i & 63) & 1 == 1
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize) {
        self.0[i >> 6] |= 1 << (i & 63);
    }

    pub(crate) fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &word)| {
            let mut word = word;
            std::iter::from_fn(move || {
                if word == 0 {
                    None
                } else {
                    let b = word.trailing_zeros() as usize;
                    word &= word - 1;
                    Some(w * 64 + b)
                }
            })
        })
    }

    /// `self | (self + g) | {g}`: the nonempty subset sums after adding one
    /// copy of `g` to a multiset whose nonempty subset sums are `self`.
    pub(crate) fn extended(&self, t: &GroupTables, g: usize) -> Bits {
        let mut out = self.clone();
        out.set(g);
        for i in self.ones() {
            out.set(t.add(i, g));
        }
        out
    }
}

/// Nonempty subset sums, as element indices.
fn subset_sums_generic(ms: &GMultiSet) -> HashSet<usize> {
    let g = ms.group();
    let mut reach: HashSet<usize> = HashSet::new();
    for i in ms.expanded_indices() {
        let e = g.elem_at(i);
        let shifted: Vec<usize> =
            reach.iter().map(|&r| g.index_of(&g.add(&g.elem_at(r), &e))).collect();
        reach.extend(shifted);
        reach.insert(i);
        if reach.contains(&0) {
            break;
        }
    }
    reach
}

/// True iff no nonempty sub-multiset sums to zero.
pub fn is_zero_sum_free(ms: &GMultiSet) -> bool {
    let Ok(t) = ms.group().tables() else {
        return !subset_sums_generic(ms).contains(&0);
    };
    let mut reach = Bits::new(t.order());
    for i in ms.expanded_indices() {
        reach = reach.extended(&t, i);
        if reach.get(0) {
            return false;
        }
    }
    true
}

/// True iff some nonempty sub-multiset of at most `max_len` elements sums to zero.
pub fn has_short_zero_sum(ms: &GMultiSet, max_len: usize) -> Result<bool> {
    let t = ms.group().tables()?;
    let mut state = ShortSums::root(t.order(), max_len);
    for i in ms.expanded_indices() {
        match state.push(&t, i) {
            Some(s) => state = s,
            None => return Ok(true),
        }
    }
    Ok(false)
}

/// `levels[j]` holds the sums of sub-multisets of size exactly `j + 1`.
#[derive(Clone)]
struct ShortSums {
    levels: Vec<Bits>,
}

impl ShortSums {
    fn root(order: usize, max_len: usize) -> Self {
        Self { levels: vec![Bits::new(order); max_len] }
    }

    fn push(&self, t: &GroupTables, g: usize) -> Option<Self> {
        let mut levels = self.levels.clone();
        levels[0].set(g);
        for j in 1..levels.len() {
            for s in self.levels[j - 1].ones() {
                levels[j].set(t.add(s, g));
            }
        }
        if levels.iter().any(|b| b.get(0)) {
            None
        } else {
            Some(Self { levels })
        }
    }
}

/// A zero-sum sub-multiset in sparse form: `(element index, multiplicity)`
/// sorted by element index.
pub type SparseZeroSum = Vec<(usize, u32)>;

/// All minimal zero-sum sub-multisets of `ms` (zero-sums with no proper
/// zero-sum sub-multiset), each listed once.
///
/// A zero-sum `S` is minimal iff `S` minus one copy of any of its elements is
/// zero-sum free, so each minimal zero-sum is produced as a zero-sum free
/// `P` (built in index order) plus one copy of `-sum(P)`, which must be the
/// largest element of `S`.
pub fn minimal_zero_sums(ms: &GMultiSet) -> Result<Vec<SparseZeroSum>> {
    let g = ms.group();
    let t = g.tables()?;
    let counts = ms.counts();
    let support: Vec<usize> = (0..counts.len()).filter(|&i| counts[i] > 0).collect();
    let mut out = Vec::new();
    let mut partial: Vec<(usize, u32)> = Vec::new();
    minimal_rec(&t, counts, &support, 0, &Bits::new(t.order()), 0, &mut partial, &mut out);
    out.sort();
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn minimal_rec(
    t: &GroupTables,
    counts: &[u32],
    support: &[usize],
    from: usize,
    reach: &Bits,
    sum: usize,
    partial: &mut Vec<(usize, u32)>,
    out: &mut Vec<SparseZeroSum>,
) {
    // close P with x = -sum(P) when x is not below the last element of P
    let x = t.neg(sum);
    let last = partial.last().map(|&(e, _)| e);
    if last.is_none_or(|l| x >= l) {
        let have = match last {
            Some(l) if l == x => partial.last().unwrap().1,
            _ => 0,
        };
        if counts[x] > have {
            let mut s = partial.clone();
            match s.last_mut() {
                Some(l) if l.0 == x => l.1 += 1,
                _ => s.push((x, 1)),
            }
            out.push(s);
        }
    }
    for (pos, &e) in support.iter().enumerate().skip(from) {
        let used = match partial.last() {
            Some(&(l, c)) if l == e => c,
            _ => 0,
        };
        if used >= counts[e] {
            continue;
        }
        let next = reach.extended(t, e);
        if next.get(0) {
            continue;
        }
        match partial.last_mut() {
            Some(l) if l.0 == e => l.1 += 1,
            _ => partial.push((e, 1)),
        }
        minimal_rec(t, counts, support, pos, &next, t.add(sum, e), partial, out);
        match partial.last_mut() {
            Some(l) if l.1 > 1 => l.1 -= 1,
            _ => {
                partial.pop();
            }
        }
    }
}

/// Pairwise disjoint zero-sum sub-multisets of `host`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroSumSystem {
    pub host: GMultiSet,
    pub parts: Vec<GMultiSet>,
}

impl ZeroSumSystem {
    /// Checks that every part is a nonempty zero-sum and that the parts fit
    /// into the host together.
    pub fn is_valid(&self) -> bool {
        let mut used = GMultiSet::new(self.host.group());
        for p in &self.parts {
            if p.is_empty() || !crate::abelian::sum_of(p).is_zero() {
                return false;
            }
            match used.union(p) {
                Ok(u) => used = u,
                Err(_) => return false,
            }
        }
        used.is_sub_multiset_of(&self.host)
    }
}

/// A largest system of disjoint zero-sums, stopping early once `cap` parts
/// are found. Parts are minimal zero-sums.
pub fn disjoint_zero_sum_system(ms: &GMultiSet, cap: usize) -> Result<ZeroSumSystem> {
    let minimal = minimal_zero_sums(ms)?;
    let mut by_first: Vec<Vec<usize>> = vec![Vec::new(); ms.group().order()];
    for (i, z) in minimal.iter().enumerate() {
        by_first[z[0].0].push(i);
    }
    let min_len = minimal
        .iter()
        .map(|z| z.iter().map(|&(_, c)| c as usize).sum::<usize>())
        .min()
        .unwrap_or(usize::MAX);
    let mut packer = Packer {
        minimal: &minimal,
        by_first: &by_first,
        min_len,
        cap,
        rem: ms.counts().to_vec(),
        rem_card: ms.cardinality(),
        chosen: Vec::new(),
        best: Vec::new(),
    };
    if cap > 0 && !minimal.is_empty() {
        packer.run();
    }
    let parts = packer
        .best
        .iter()
        .map(|&i| {
            let mut p = GMultiSet::new(ms.group());
            for &(e, c) in &minimal[i] {
                p.insert(&ms.group().elem_at(e), c).expect("index within group");
            }
            p
        })
        .collect();
    Ok(ZeroSumSystem { host: ms.clone(), parts })
}

struct Packer<'a> {
    minimal: &'a [SparseZeroSum],
    by_first: &'a [Vec<usize>],
    min_len: usize,
    cap: usize,
    rem: Vec<u32>,
    rem_card: usize,
    chosen: Vec<usize>,
    best: Vec<usize>,
}

impl Packer<'_> {
    fn run(&mut self) {
        if self.best.len() >= self.cap {
            return;
        }
        if self.chosen.len() > self.best.len() {
            self.best = self.chosen.clone();
            if self.best.len() >= self.cap {
                return;
            }
        }
        if self.chosen.len() + self.rem_card / self.min_len <= self.best.len() {
            return;
        }
        let Some(first) = self.rem.iter().position(|&c| c > 0) else {
            return;
        };
        let by_first = self.by_first;
        let minimal = self.minimal;
        for &zi in &by_first[first] {
            let z = &minimal[zi];
            if z.iter().all(|&(e, c)| self.rem[e] >= c) {
                let len: usize = z.iter().map(|&(_, c)| c as usize).sum();
                for &(e, c) in z {
                    self.rem[e] -= c;
                }
                self.rem_card -= len;
                self.chosen.push(zi);
                self.run();
                self.chosen.pop();
                self.rem_card += len;
                for &(e, c) in z {
                    self.rem[e] += c;
                }
                if self.best.len() >= self.cap {
                    return;
                }
            }
        }
        // leave the remaining copies of `first` unused
        let saved = self.rem[first];
        self.rem[first] = 0;
        self.rem_card -= saved as usize;
        self.run();
        self.rem_card += saved as usize;
        self.rem[first] = saved;
    }
}

/// `min(cap, maximum number of pairwise disjoint nonempty zero-sums)`.
pub fn max_disjoint_zero_sums(ms: &GMultiSet, cap: usize) -> Result<usize> {
    Ok(disjoint_zero_sum_system(ms, cap)?.parts.len())
}

/// `M(G) = 1 + sum (n_i - 1)`.
pub fn m_of(g: &GroupSpec) -> u64 {
    g.m_value()
}

/// The zero-sum free multiset `{e_1^{n_1-1}, ..., e_k^{n_k-1}}` of length `M(G) - 1`.
pub fn m_witness(g: &GroupSpec) -> GMultiSet {
    let mut ms = GMultiSet::new(g);
    for (i, &n) in g.factors().iter().enumerate() {
        ms.insert(&g.basis(i), n - 1).expect("basis element");
    }
    ms
}

/// Result of an extremal search: the constant and a longest multiset that
/// still avoids the property.
#[derive(Clone, Debug)]
pub struct Extremal {
    pub value: u64,
    pub witness: GMultiSet,
    pub nodes: u64,
}

/// A property of multisets that is closed under taking sub-multisets,
/// maintained incrementally as elements are appended.
trait Hereditary {
    type State: Clone;
    fn root(&self) -> Self::State;
    fn push(&self, state: &Self::State, elem: usize) -> Option<Self::State>;
}

struct ZeroSumFree<'a> {
    t: &'a GroupTables,
}

impl Hereditary for ZeroSumFree<'_> {
    type State = Bits;

    fn root(&self) -> Bits {
        Bits::new(self.t.order())
    }

    fn push(&self, state: &Bits, elem: usize) -> Option<Bits> {
        let next = state.extended(self.t, elem);
        (!next.get(0)).then_some(next)
    }
}

struct NoShortZeroSum<'a> {
    t: &'a GroupTables,
    max_len: usize,
}

impl Hereditary for NoShortZeroSum<'_> {
    type State = ShortSums;

    fn root(&self) -> ShortSums {
        ShortSums::root(self.t.order(), self.max_len)
    }

    fn push(&self, state: &ShortSums, elem: usize) -> Option<ShortSums> {
        state.push(self.t, elem)
    }
}

struct FewerDisjoint<'a> {
    group: &'a GroupSpec,
    m: usize,
}

impl Hereditary for FewerDisjoint<'_> {
    type State = Vec<u32>;

    fn root(&self) -> Vec<u32> {
        vec![0; self.group.order()]
    }

    fn push(&self, state: &Vec<u32>, elem: usize) -> Option<Vec<u32>> {
        let mut counts = state.clone();
        counts[elem] += 1;
        let ms = GMultiSet::from_counts(self.group, counts).ok()?;
        let k = max_disjoint_zero_sums(&ms, self.m).ok()?;
        (k < self.m).then(|| ms.counts().to_vec())
    }
}

/// Longest multiset (explored as non-decreasing index sequences) whose every
/// prefix satisfies `prop`.
fn longest<P: Hereditary>(g: &GroupSpec, prop: &P, opts: &SearchOptions) -> Result<Extremal> {
    struct Walk<'a, P: Hereditary> {
        prop: &'a P,
        order: usize,
        budget: u64,
        nodes: u64,
        seq: Vec<usize>,
        best: Vec<usize>,
    }
    impl<P: Hereditary> Walk<'_, P> {
        fn go(&mut self, state: &P::State, from: usize) -> Result<()> {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::Budget { budget: self.budget });
            }
            if self.seq.len() > self.best.len() {
                self.best = self.seq.clone();
            }
            for e in from..self.order {
                if let Some(next) = self.prop.push(state, e) {
                    self.seq.push(e);
                    self.go(&next, e)?;
                    self.seq.pop();
                }
            }
            Ok(())
        }
    }
    let mut walk = Walk {
        prop,
        order: g.order(),
        budget: opts.node_budget,
        nodes: 0,
        seq: Vec::new(),
        best: Vec::new(),
    };
    let root = prop.root();
    walk.go(&root, 0)?;
    Ok(Extremal {
        value: walk.best.len() as u64 + 1,
        witness: GMultiSet::from_indices(g, walk.best.iter().copied()),
        nodes: walk.nodes,
    })
}

/// `D(G)`: one more than the length of a longest zero-sum free multiset.
pub fn davenport(g: &GroupSpec, opts: &SearchOptions) -> Result<Extremal> {
    let t = g.tables()?;
    longest(g, &ZeroSumFree { t: &t }, opts)
}

/// `D_m(G)`: least `N` such that every `N`-multiset has `m` disjoint zero-sums.
pub fn davenport_m(g: &GroupSpec, m: usize, opts: &SearchOptions) -> Result<Extremal> {
    if m == 0 {
        return Err(Error::Argument("m must be at least 1".into()));
    }
    g.tables()?;
    longest(g, &FewerDisjoint { group: g, m }, opts)
}

/// `D^L(G)`: least `N` such that every `N`-multiset has a nonempty zero-sum
/// of length at most `L`.
pub fn davenport_short(g: &GroupSpec, max_len: usize, opts: &SearchOptions) -> Result<Extremal> {
    if max_len == 0 {
        return Err(Error::Argument("zero-sum length bound must be at least 1".into()));
    }
    let t = g.tables()?;
    longest(g, &NoShortZeroSum { t: &t, max_len }, opts)
}

/// `D^k(Z_k^l) - k`, the sharp additive constant in `D_m(Z_k^l) <= km + c`.
pub fn c_const(k: u32, l: usize, opts: &SearchOptions) -> Result<u64> {
    let g = GroupSpec::elementary(k, l)?;
    Ok(davenport_short(&g, k as usize, opts)?.value - k as u64)
}

/// The coarse constant `(k-1) k^l` obtained by pairing up copies into `{a^k}`.
pub fn c_formula(k: u32, l: usize) -> u64 {
    (k as u64 - 1) * (k as u64).pow(l as u32)
}
