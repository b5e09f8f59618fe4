//! Finite abelian groups `Z_{n_1} + ... + Z_{n_k}`, their elements and
//! multisets, automorphisms of `Z_k^l` and canonical forms under them.
//!
//! Elements are addressed by a mixed-radix index with the first coordinate
//! most significant, so index order is the lexicographic order of coordinate
//! tuples and the zero element always has index 0. A multiset is stored as a
//! multiplicity vector over that index.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

/// Largest group order for which addition tables are materialised.
pub const MAX_TABLE_ORDER: usize = 4096;

/// Precomputed addition and negation on element indices.
#[derive(Debug)]
pub struct GroupTables {
    order: usize,
    add: Vec<u32>,
    neg: Vec<u32>,
}

impl GroupTables {
    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.order + b] as usize
    }

    #[inline]
    pub fn neg(&self, a: usize) -> usize {
        self.neg[a] as usize
    }

    pub fn order(&self) -> usize {
        self.order
    }
}

#[derive(Debug)]
struct GroupData {
    factors: Vec<u32>,
    strides: Vec<usize>,
    order: usize,
    tables: OnceLock<Arc<GroupTables>>,
}

/// A finite abelian group given by its invariant factors `n_1 | n_2 | ... | n_k`.
#[derive(Clone)]
pub struct GroupSpec {
    inner: Arc<GroupData>,
}

impl PartialEq for GroupSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner.factors == other.inner.factors
    }
}

impl Eq for GroupSpec {}

impl std::hash::Hash for GroupSpec {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.inner.factors.hash(state);
    }
}

impl fmt::Debug for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupSpec({self})")
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.inner.factors.iter().map(|n| n.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

impl GroupSpec {
    pub fn new(factors: Vec<u32>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Structure("a group needs at least one invariant factor".into()));
        }
        if let Some(bad) = factors.iter().find(|&&n| n < 2) {
            return Err(Error::Structure(format!("invariant factor {bad} is smaller than 2")));
        }
        for w in factors.windows(2) {
            if w[1] % w[0] != 0 {
                return Err(Error::Structure(format!(
                    "invariant factors must form a divisibility chain, but {} does not divide {}",
                    w[0], w[1]
                )));
            }
        }
        let mut order: usize = 1;
        for &n in &factors {
            order = order
                .checked_mul(n as usize)
                .filter(|&o| o <= u32::MAX as usize)
                .ok_or_else(|| Error::Unsupported("group order exceeds 2^32".into()))?;
        }
        let mut strides = vec![1usize; factors.len()];
        for i in (0..factors.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * factors[i + 1] as usize;
        }
        Ok(Self {
            inner: Arc::new(GroupData {
                factors,
                strides,
                order,
                tables: OnceLock::new(),
            }),
        })
    }

    pub fn cyclic(n: u32) -> Result<Self> {
        Self::new(vec![n])
    }

    /// `Z_k^l`.
    pub fn elementary(k: u32, l: usize) -> Result<Self> {
        Self::new(vec![k; l])
    }

    /// Parses `"3,3,15"`, `"3^3"` or mixed forms such as `"3^2,15"`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut factors = Vec::new();
        for part in text.split(',').map(str::trim) {
            if part.is_empty() {
                return Err(Error::Parse(format!("empty component in group spec {text:?}")));
            }
            let (base, exp) = match part.split_once('^') {
                Some((b, e)) => (b.trim(), e.trim()),
                None => (part, "1"),
            };
            let base: u32 = base
                .parse()
                .map_err(|_| Error::Parse(format!("bad invariant factor {base:?} in {text:?}")))?;
            let exp: usize = exp
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent {exp:?} in {text:?}")))?;
            factors.extend(std::iter::repeat(base).take(exp));
        }
        Self::new(factors)
    }

    pub fn factors(&self) -> &[u32] {
        &self.inner.factors
    }

    pub fn rank(&self) -> usize {
        self.inner.factors.len()
    }

    pub fn order(&self) -> usize {
        self.inner.order
    }

    /// The exponent of the group, i.e. the largest invariant factor.
    pub fn exponent(&self) -> u32 {
        *self.inner.factors.last().expect("nonempty")
    }

    /// `Some((k, l))` when the group is `Z_k^l`.
    pub fn as_elementary(&self) -> Option<(u32, usize)> {
        let f = &self.inner.factors;
        f.iter().all(|&n| n == f[0]).then(|| (f[0], f.len()))
    }

    /// `M(G) = 1 + sum (n_i - 1)`.
    pub fn m_value(&self) -> u64 {
        1 + self.inner.factors.iter().map(|&n| (n - 1) as u64).sum::<u64>()
    }

    pub fn zero(&self) -> GElem {
        GElem { coords: vec![0; self.rank()] }
    }

    /// Builds an element, reducing every coordinate modulo its factor.
    pub fn elem(&self, coords: &[i64]) -> Result<GElem> {
        if coords.len() != self.rank() {
            return Err(Error::Structure(format!(
                "element of rank {} used in group {self} of rank {}",
                coords.len(),
                self.rank()
            )));
        }
        let coords = coords
            .iter()
            .zip(self.factors())
            .map(|(&c, &n)| c.rem_euclid(n as i64) as u32)
            .collect();
        Ok(GElem { coords })
    }

    /// The standard generator `e_i`.
    pub fn basis(&self, i: usize) -> GElem {
        let mut coords = vec![0; self.rank()];
        coords[i] = 1;
        GElem { coords }
    }

    pub fn contains(&self, e: &GElem) -> bool {
        e.coords.len() == self.rank() && e.coords.iter().zip(self.factors()).all(|(&c, &n)| c < n)
    }

    fn check(&self, e: &GElem) -> Result<()> {
        if self.contains(e) {
            Ok(())
        } else {
            Err(Error::Structure(format!("element {e} does not belong to {self}")))
        }
    }

    pub fn index_of(&self, e: &GElem) -> usize {
        e.coords.iter().zip(&self.inner.strides).map(|(&c, &s)| c as usize * s).sum()
    }

    pub fn elem_at(&self, mut index: usize) -> GElem {
        let mut coords = vec![0; self.rank()];
        for (i, &s) in self.inner.strides.iter().enumerate() {
            coords[i] = (index / s) as u32;
            index %= s;
        }
        GElem { coords }
    }

    pub fn elements(&self) -> impl Iterator<Item = GElem> + '_ {
        (0..self.order()).map(move |i| self.elem_at(i))
    }

    pub fn add(&self, a: &GElem, b: &GElem) -> GElem {
        let coords = a
            .coords
            .iter()
            .zip(&b.coords)
            .zip(self.factors())
            .map(|((&x, &y), &n)| ((x as u64 + y as u64) % n as u64) as u32)
            .collect();
        GElem { coords }
    }

    pub fn neg(&self, a: &GElem) -> GElem {
        let coords = a
            .coords
            .iter()
            .zip(self.factors())
            .map(|(&x, &n)| (n - x) % n)
            .collect();
        GElem { coords }
    }

    pub fn scale(&self, a: &GElem, s: i64) -> GElem {
        let coords = a
            .coords
            .iter()
            .zip(self.factors())
            .map(|(&x, &n)| ((x as i64 * s).rem_euclid(n as i64)) as u32)
            .collect();
        GElem { coords }
    }

    /// Order of an element: lcm over coordinates of `n_i / gcd(c_i, n_i)`.
    pub fn elem_order(&self, a: &GElem) -> u64 {
        a.coords
            .iter()
            .zip(self.factors())
            .map(|(&c, &n)| (n / gcd_u32(c, n)) as u64)
            .fold(1, |acc, o| acc / gcd_u64(acc, o) * o)
    }

    /// Addition tables on indices, built once per group value.
    pub fn tables(&self) -> Result<Arc<GroupTables>> {
        let n = self.order();
        if n > MAX_TABLE_ORDER {
            return Err(Error::Unsupported(format!(
                "group {self} of order {n} is too large for table-driven search"
            )));
        }
        Ok(self
            .inner
            .tables
            .get_or_init(|| {
                let elems: Vec<GElem> = self.elements().collect();
                let mut add = vec![0u32; n * n];
                for (i, a) in elems.iter().enumerate() {
                    for (j, b) in elems.iter().enumerate() {
                        add[i * n + j] = self.index_of(&self.add(a, b)) as u32;
                    }
                }
                let neg = elems.iter().map(|a| self.index_of(&self.neg(a)) as u32).collect();
                Arc::new(GroupTables { order: n, add, neg })
            })
            .clone())
    }
}

pub(crate) fn gcd_u32(a: u32, b: u32) -> u32 {
    gcd_u64(a as u64, b as u64) as u32
}

pub(crate) fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// An element of a [`GroupSpec`], stored as reduced residues.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GElem {
    coords: Vec<u32>,
}

impl GElem {
    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for GElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A multiset of group elements, stored as a multiplicity vector indexed by
/// element index.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GMultiSet {
    group: GroupSpec,
    counts: Vec<u32>,
}

impl fmt::Debug for GMultiSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GMultiSet[{}]{{{self}}}", self.group)
    }
}

impl GMultiSet {
    pub fn new(group: &GroupSpec) -> Self {
        Self { group: group.clone(), counts: vec![0; group.order()] }
    }

    pub fn from_counts(group: &GroupSpec, counts: Vec<u32>) -> Result<Self> {
        if counts.len() != group.order() {
            return Err(Error::Structure(format!(
                "multiplicity vector of length {} for group of order {}",
                counts.len(),
                group.order()
            )));
        }
        Ok(Self { group: group.clone(), counts })
    }

    /// Builds a multiset from element indices, one entry per copy.
    pub fn from_indices(group: &GroupSpec, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut ms = Self::new(group);
        for i in indices {
            ms.counts[i] += 1;
        }
        ms
    }

    pub fn from_elems<'a>(
        group: &GroupSpec,
        elems: impl IntoIterator<Item = (&'a GElem, u32)>,
    ) -> Result<Self> {
        let mut ms = Self::new(group);
        for (e, m) in elems {
            ms.insert(e, m)?;
        }
        Ok(ms)
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn insert(&mut self, e: &GElem, mult: u32) -> Result<()> {
        self.group.check(e)?;
        let i = self.group.index_of(e);
        self.counts[i] += mult;
        Ok(())
    }

    /// Removes one copy of `e`; an entry whose multiplicity drops to zero
    /// disappears from the support.
    pub fn remove_one(&mut self, e: &GElem) -> Result<()> {
        self.group.check(e)?;
        let i = self.group.index_of(e);
        if self.counts[i] == 0 {
            return Err(Error::Argument(format!("{e} is not in the multiset")));
        }
        self.counts[i] -= 1;
        Ok(())
    }

    pub fn multiplicity(&self, e: &GElem) -> u32 {
        if self.group.contains(e) {
            self.counts[self.group.index_of(e)]
        } else {
            0
        }
    }

    pub fn cardinality(&self) -> usize {
        self.counts.iter().map(|&c| c as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.iter().all(|&c| c == 0)
    }

    pub fn max_multiplicity(&self) -> u32 {
        self.counts.iter().copied().max().unwrap_or(0)
    }

    /// `(element, multiplicity)` pairs of the support in index order.
    pub fn entries(&self) -> impl Iterator<Item = (GElem, u32)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, &c)| (self.group.elem_at(i), c))
    }

    /// One element index per copy, in index order.
    pub fn expanded_indices(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.cardinality());
        for (i, &c) in self.counts.iter().enumerate() {
            out.extend(std::iter::repeat(i).take(c as usize));
        }
        out
    }

    pub fn union(&self, other: &GMultiSet) -> Result<GMultiSet> {
        if self.group != other.group {
            return Err(Error::Structure(format!(
                "cannot combine multisets over {} and {}",
                self.group, other.group
            )));
        }
        let counts = self.counts.iter().zip(&other.counts).map(|(a, b)| a + b).collect();
        Ok(GMultiSet { group: self.group.clone(), counts })
    }

    /// True when every multiplicity is at most the corresponding one in `host`.
    pub fn is_sub_multiset_of(&self, host: &GMultiSet) -> bool {
        self.group == host.group && self.counts.iter().zip(&host.counts).all(|(a, b)| a <= b)
    }

    /// Parses `"(1,0)^3 (0,1)^3"`; a bare residue like `"4^2"` is accepted for
    /// cyclic groups. `"{}"` or an empty string is the empty multiset.
    pub fn parse(group: &GroupSpec, text: &str) -> Result<Self> {
        let mut ms = Self::new(group);
        let text = text.trim();
        if text.is_empty() || text == "{}" {
            return Ok(ms);
        }
        let mut rest = text;
        while !rest.is_empty() {
            let (coords, tail) = if let Some(stripped) = rest.strip_prefix('(') {
                let close = stripped
                    .find(')')
                    .ok_or_else(|| Error::Parse(format!("unclosed '(' in {text:?}")))?;
                let coords = stripped[..close]
                    .split(',')
                    .map(|c| c.trim().parse::<i64>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| Error::Parse(format!("bad coordinates in {text:?}")))?;
                (coords, &stripped[close + 1..])
            } else {
                let end = rest
                    .find(|c: char| !(c.is_ascii_digit() || c == '-'))
                    .unwrap_or(rest.len());
                let v = rest[..end]
                    .parse::<i64>()
                    .map_err(|_| Error::Parse(format!("unexpected token in {text:?}")))?;
                (vec![v], &rest[end..])
            };
            let (mult, tail) = if let Some(t) = tail.strip_prefix('^') {
                let end = t.find(|c: char| !c.is_ascii_digit()).unwrap_or(t.len());
                let m = t[..end]
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad multiplicity in {text:?}")))?;
                (m, &t[end..])
            } else {
                (1, tail)
            };
            let e = group.elem(&coords).map_err(|e| Error::Parse(e.to_string()))?;
            ms.insert(&e, mult)?;
            rest = tail.trim_start_matches(|c: char| c.is_whitespace() || c == ',');
        }
        Ok(ms)
    }
}

impl fmt::Display for GMultiSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("{}");
        }
        let mut first = true;
        for (e, m) in self.entries() {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            if m == 1 {
                write!(f, "{e}")?;
            } else {
                write!(f, "{e}^{m}")?;
            }
        }
        Ok(())
    }
}

/// Componentwise sum of all elements counted with multiplicity.
pub fn sum_of(ms: &GMultiSet) -> GElem {
    let g = ms.group();
    let mut acc = vec![0u64; g.rank()];
    for (e, m) in ms.entries() {
        for (i, &c) in e.coords().iter().enumerate() {
            acc[i] = (acc[i] + c as u64 * m as u64) % g.factors()[i] as u64;
        }
    }
    GElem { coords: acc.into_iter().map(|c| c as u32).collect() }
}

/// An invertible `l x l` matrix over `Z_k`, acting on column vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automorphism {
    k: u32,
    dim: usize,
    matrix: Vec<u32>,
}

impl Automorphism {
    pub fn new(k: u32, dim: usize, matrix: Vec<u32>) -> Result<Self> {
        if matrix.len() != dim * dim || matrix.iter().any(|&v| v >= k) {
            return Err(Error::Argument("automorphism matrix has wrong shape or entries".into()));
        }
        let det = det_mod(&matrix, dim, k);
        if gcd_u32(det, k) != 1 {
            return Err(Error::Argument(format!("matrix is not invertible over Z_{k}")));
        }
        Ok(Self { k, dim, matrix })
    }

    pub fn identity(k: u32, dim: usize) -> Self {
        let mut matrix = vec![0; dim * dim];
        for i in 0..dim {
            matrix[i * dim + i] = 1;
        }
        Self { k, dim, matrix }
    }

    /// Row-major entries.
    pub fn matrix(&self) -> &[u32] {
        &self.matrix
    }

    pub fn apply(&self, e: &GElem) -> GElem {
        let coords = (0..self.dim)
            .map(|r| {
                let s: u64 = (0..self.dim)
                    .map(|c| self.matrix[r * self.dim + c] as u64 * e.coords[c] as u64)
                    .sum();
                (s % self.k as u64) as u32
            })
            .collect();
        GElem { coords }
    }

    pub fn apply_multiset(&self, ms: &GMultiSet) -> GMultiSet {
        let g = ms.group();
        let mut out = GMultiSet::new(g);
        for (e, m) in ms.entries() {
            let img = self.apply(&e);
            out.counts[g.index_of(&img)] += m;
        }
        out
    }
}

fn det_mod(m: &[u32], dim: usize, k: u32) -> u32 {
    let signed: Vec<i64> = m.iter().map(|&v| v as i64).collect();
    det_i64(&signed, dim).rem_euclid(k as i64) as u32
}

fn det_i64(m: &[i64], dim: usize) -> i64 {
    match dim {
        0 => 1,
        1 => m[0],
        2 => m[0] * m[3] - m[1] * m[2],
        _ => {
            let mut total = 0;
            for c in 0..dim {
                let mut minor = Vec::with_capacity((dim - 1) * (dim - 1));
                for r in 1..dim {
                    for cc in 0..dim {
                        if cc != c {
                            minor.push(m[r * dim + cc]);
                        }
                    }
                }
                let term = m[c] * det_i64(&minor, dim - 1);
                total += if c % 2 == 0 { term } else { -term };
            }
            total
        }
    }
}

/// Largest number of matrices scanned when enumerating `GL_l(Z_k)`.
const MAX_MATRIX_SPACE: u64 = 1 << 25;

fn elementary_params(g: &GroupSpec) -> Result<(u32, usize)> {
    let (k, l) = g.as_elementary().ok_or_else(|| {
        Error::Unsupported(format!("automorphisms are only supported for Z_k^l, not {g}"))
    })?;
    let space = (k as u64).checked_pow((l * l) as u32);
    if l > 4 || space.map_or(true, |s| s > MAX_MATRIX_SPACE) {
        return Err(Error::Unsupported(format!("GL_{l}(Z_{k}) is too large to enumerate")));
    }
    Ok((k, l))
}

/// Iterator over `GL_l(Z_k)` in lexicographic order of row-major entries.
pub struct Automorphisms {
    k: u32,
    dim: usize,
    next: Option<Vec<u32>>,
}

impl Iterator for Automorphisms {
    type Item = Automorphism;

    fn next(&mut self) -> Option<Automorphism> {
        loop {
            let current = self.next.take()?;
            let mut succ = current.clone();
            let mut carry = true;
            for v in succ.iter_mut().rev() {
                *v += 1;
                if *v == self.k {
                    *v = 0;
                } else {
                    carry = false;
                    break;
                }
            }
            if !carry {
                self.next = Some(succ);
            }
            if gcd_u32(det_mod(&current, self.dim, self.k), self.k) == 1 {
                return Some(Automorphism { k: self.k, dim: self.dim, matrix: current });
            }
        }
    }
}

/// Every automorphism of `G = Z_k^l`, each exactly once.
pub fn automorphisms(g: &GroupSpec) -> Result<Automorphisms> {
    let (k, l) = elementary_params(g)?;
    Ok(Automorphisms { k, dim: l, next: Some(vec![0; l * l]) })
}

/// `|GL_l(Z_k)|` for prime `k`.
pub fn gl_order(k: u64, l: u32) -> u64 {
    let q = k.pow(l);
    (0..l).map(|i| q - k.pow(i)).product()
}

/// Element index permutations, one per automorphism.
pub struct AutomorphismTable {
    forward: Vec<Vec<u32>>,
    inverse: Vec<Vec<u32>>,
}

impl AutomorphismTable {
    pub fn len(&self) -> usize {
        self.inverse.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inverse.is_empty()
    }

    /// Index of the image of element `i` under automorphism number `a`.
    pub fn map(&self, a: usize, i: usize) -> usize {
        self.forward[a][i] as usize
    }

    /// Image of a multiplicity vector under automorphism number `a`.
    pub fn image(&self, a: usize, counts: &[u32]) -> Vec<u32> {
        self.inverse[a].iter().map(|&j| counts[j as usize]).collect()
    }

    /// Lexicographically smallest image of `counts` over the whole group.
    pub fn canonical(&self, counts: &[u32]) -> Vec<u32> {
        let mut best = counts.to_vec();
        for inv in &self.inverse {
            let mut less = false;
            for (j, &src) in inv.iter().enumerate() {
                let c = counts[src as usize];
                if c != best[j] {
                    less = c < best[j];
                    break;
                }
            }
            if less {
                for (b, &src) in best.iter_mut().zip(inv) {
                    *b = counts[src as usize];
                }
            }
        }
        best
    }
}

type TableCache = Mutex<HashMap<(u32, usize), Arc<AutomorphismTable>>>;

/// Cached permutation table for the automorphism group of `Z_k^l`.
pub fn automorphism_table(g: &GroupSpec) -> Result<Arc<AutomorphismTable>> {
    static CACHE: OnceLock<TableCache> = OnceLock::new();
    let (k, l) = elementary_params(g)?;
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.lock().expect("cache poisoned").get(&(k, l)) {
        return Ok(t.clone());
    }
    let elems: Vec<GElem> = g.elements().collect();
    let mut forward = Vec::new();
    let mut inverse = Vec::new();
    for aut in automorphisms(g)? {
        let mut fwd = vec![0u32; elems.len()];
        let mut inv = vec![0u32; elems.len()];
        for (i, e) in elems.iter().enumerate() {
            let j = g.index_of(&aut.apply(e));
            fwd[i] = j as u32;
            inv[j] = i as u32;
        }
        forward.push(fwd);
        inverse.push(inv);
    }
    let table = Arc::new(AutomorphismTable { forward, inverse });
    cache.lock().expect("cache poisoned").insert((k, l), table.clone());
    Ok(table)
}

/// The lexicographically minimal multiplicity vector in the orbit of `ms`.
/// Two multisets are equivalent under automorphisms iff their canonical
/// forms coincide.
pub fn canonicalize(ms: &GMultiSet) -> Result<GMultiSet> {
    let table = automorphism_table(ms.group())?;
    let counts = table.canonical(ms.counts());
    GMultiSet::from_counts(ms.group(), counts)
}

pub fn equivalent(a: &GMultiSet, b: &GMultiSet) -> Result<bool> {
    if a.group() != b.group() {
        return Ok(false);
    }
    Ok(canonicalize(a)? == canonicalize(b)?)
}

/// Three 3x3 planes side by side, one per value of the third coordinate.
/// Row `y = 2` is printed first so that `(0,0,0)` sits at the lower left of
/// the first plane; the column is the first coordinate. Digits give the
/// multiplicity and `.` marks an absent element.
pub fn to_grid(ms: &GMultiSet) -> Result<String> {
    require_z3_cubed(ms.group())?;
    let g = ms.group();
    let mut lines = Vec::with_capacity(3);
    for y in (0..3).rev() {
        let mut line = String::with_capacity(11);
        for z in 0..3 {
            if z > 0 {
                line.push(' ');
            }
            for x in 0..3 {
                let m = ms.counts[g.index_of(&GElem { coords: vec![x, y, z] })];
                match m {
                    0 => line.push('.'),
                    1..=9 => line.push(char::from(b'0' + m as u8)),
                    _ => {
                        return Err(Error::Argument(format!(
                            "multiplicity {m} does not fit in a grid cell"
                        )))
                    }
                }
            }
        }
        lines.push(line);
    }
    Ok(lines.join("\n"))
}

pub fn parse_grid(text: &str) -> Result<GMultiSet> {
    let g = GroupSpec::elementary(3, 3)?;
    let lines: Vec<&str> = text.trim_end_matches('\n').split('\n').collect();
    if lines.len() != 3 {
        return Err(Error::Parse(format!("a grid has 3 lines, got {}", lines.len())));
    }
    let mut ms = GMultiSet::new(&g);
    for (row, line) in lines.iter().enumerate() {
        let y = 2 - row as u32;
        let bytes = line.as_bytes();
        if bytes.len() != 11 || bytes[3] != b' ' || bytes[7] != b' ' {
            return Err(Error::Parse(format!("malformed grid line {line:?}")));
        }
        for z in 0..3u32 {
            for x in 0..3u32 {
                let ch = bytes[(z * 4 + x) as usize];
                let m = match ch {
                    b'.' => 0,
                    b'1'..=b'9' => (ch - b'0') as u32,
                    _ => return Err(Error::Parse(format!("bad grid cell {:?}", ch as char))),
                };
                ms.counts[g.index_of(&GElem { coords: vec![x, y, z] })] = m;
            }
        }
    }
    Ok(ms)
}

fn require_z3_cubed(g: &GroupSpec) -> Result<()> {
    if g.factors() == [3, 3, 3] {
        Ok(())
    } else {
        Err(Error::Unsupported(format!("grid format is defined for Z_3^3, not {g}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z33() -> GroupSpec {
        GroupSpec::elementary(3, 3).unwrap()
    }

    #[test]
    fn divisibility_chain_is_enforced() {
        assert!(GroupSpec::new(vec![3, 3, 15]).is_ok());
        assert!(matches!(GroupSpec::new(vec![15, 3]), Err(Error::Structure(_))));
        assert!(matches!(GroupSpec::new(vec![1, 3]), Err(Error::Structure(_))));
        assert_eq!(GroupSpec::parse("3^2,15").unwrap().factors(), &[3, 3, 15]);
        assert_eq!(GroupSpec::parse("3^3").unwrap().order(), 27);
    }

    #[test]
    fn index_round_trip_and_zero() {
        let g = GroupSpec::new(vec![2, 4, 12]).unwrap();
        assert_eq!(g.index_of(&g.zero()), 0);
        for i in 0..g.order() {
            assert_eq!(g.index_of(&g.elem_at(i)), i);
        }
        let t = g.tables().unwrap();
        let a = g.elem(&[1, 3, 7]).unwrap();
        let b = g.elem(&[1, 2, 9]).unwrap();
        assert_eq!(g.elem_at(t.add(g.index_of(&a), g.index_of(&b))), g.elem(&[0, 1, 4]).unwrap());
        assert_eq!(g.elem_order(&g.elem(&[0, 2, 4]).unwrap()), 6);
    }

    #[test]
    fn sums() {
        let z5 = GroupSpec::cyclic(5).unwrap();
        assert_eq!(sum_of(&GMultiSet::new(&z5)), z5.zero());
        let ms = GMultiSet::parse(&z5, "1^4").unwrap();
        assert_eq!(sum_of(&ms), z5.elem(&[4]).unwrap());
        let g = z33();
        let ms = GMultiSet::parse(&g, "(1,0,0) (0,1,0) (1,1,0)^2").unwrap();
        assert!(sum_of(&ms).is_zero());
    }

    #[test]
    fn removing_last_copy_drops_entry() {
        let g = z33();
        let mut ms = GMultiSet::parse(&g, "(1,0,0)^2 (0,1,0)").unwrap();
        let e = g.elem(&[0, 1, 0]).unwrap();
        ms.remove_one(&e).unwrap();
        assert_eq!(ms.cardinality(), 2);
        assert_eq!(ms.entries().count(), 1);
        assert!(ms.remove_one(&e).is_err());
    }

    #[test]
    fn mixed_groups_are_rejected() {
        let a = GMultiSet::parse(&z33(), "(1,0,0)").unwrap();
        let b = GMultiSet::parse(&GroupSpec::cyclic(5).unwrap(), "2").unwrap();
        assert!(matches!(a.union(&b), Err(Error::Structure(_))));
        let mut c = a.clone();
        assert!(c.insert(&GroupSpec::cyclic(5).unwrap().elem(&[1]).unwrap(), 1).is_err());
    }

    #[test]
    fn automorphism_counts() {
        assert_eq!(automorphisms(&GroupSpec::elementary(3, 1).unwrap()).unwrap().count(), 2);
        assert_eq!(automorphisms(&GroupSpec::elementary(3, 2).unwrap()).unwrap().count(), 48);
        assert_eq!(automorphisms(&z33()).unwrap().count(), 11232);
        for (k, l) in [(2u32, 1usize), (2, 2), (2, 3), (5, 2), (7, 2)] {
            let g = GroupSpec::elementary(k, l).unwrap();
            assert_eq!(
                automorphisms(&g).unwrap().count() as u64,
                gl_order(k as u64, l as u32),
                "GL_{l}(F_{k})"
            );
        }
        assert!(matches!(
            automorphisms(&GroupSpec::new(vec![3, 9]).unwrap()),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn canonical_forms() {
        let g = z33();
        let a = GMultiSet::parse(&g, "(1,0,0)").unwrap();
        let b = GMultiSet::parse(&g, "(0,1,0)").unwrap();
        assert_eq!(canonicalize(&a).unwrap(), canonicalize(&b).unwrap());
        let z = GMultiSet::parse(&g, "(0,0,0)").unwrap();
        assert_eq!(canonicalize(&z).unwrap(), z);
        let c = canonicalize(&a).unwrap();
        assert_eq!(canonicalize(&c).unwrap(), c);
    }

    #[test]
    fn grid_round_trip() {
        let g = z33();
        let ms = GMultiSet::parse(&g, "(1,0,0)^2 (0,1,0)^2 (0,0,1)^2 (2,2,1) (0,2,2)").unwrap();
        let text = to_grid(&ms).unwrap();
        assert_eq!(text, "... ..1 1..\n2.. ... ...\n.2. 2.. ...");
        // the first-plane lower-left cell is (0,0,0)
        let zero = GMultiSet::parse(&g, "(0,0,0)^3").unwrap();
        assert_eq!(to_grid(&zero).unwrap(), "... ... ...\n... ... ...\n3.. ... ...");
        assert_eq!(parse_grid(&text).unwrap(), ms);
        assert!(parse_grid("... ...\n").is_err());
    }

    #[test]
    fn multiset_text_round_trip() {
        let g = GroupSpec::elementary(5, 2).unwrap();
        let ms = GMultiSet::parse(&g, "(1,0)^3 (0,1)^3").unwrap();
        assert_eq!(ms.to_string(), "(0,1)^3 (1,0)^3");
        assert_eq!(GMultiSet::parse(&g, &ms.to_string()).unwrap(), ms);
        assert_eq!(GMultiSet::parse(&g, "{}").unwrap().cardinality(), 0);
    }
}
