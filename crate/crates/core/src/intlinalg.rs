//! Exact integer linear algebra: Smith normal form with unimodular
//! transformation matrices, the set of moduli `n` for which `Ax = b` is
//! solvable over `Z_n`, and an elimination-based unsolvability witness.
//!
//! Everything here is arbitrary precision. No floating point.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// A dense integer matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMat[{}x{}]({self})", self.rows, self.cols)
    }
}

/// `"2 4; 6 8"`.
impl fmt::Display for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            if r > 0 {
                f.write_str("; ")?;
            }
            let row: Vec<String> = self.row(r).iter().map(|v| v.to_string()).collect();
            f.write_str(&row.join(" "))?;
        }
        Ok(())
    }
}

impl IntMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Argument("matrix rows have different lengths".into()));
        }
        let data = rows.iter().flat_map(|r| r.iter().cloned().map(Into::into)).collect();
        Ok(Self { rows: rows.len(), cols, data })
    }

    pub fn column<T: Into<BigInt> + Clone>(values: &[T]) -> Self {
        Self { rows: values.len(), cols: 1, data: values.iter().cloned().map(Into::into).collect() }
    }

    /// Rows separated by `;`, entries by whitespace or commas.
    pub fn parse(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for row in text.split(';') {
            let entries = row
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.parse::<BigInt>()
                        .map_err(|_| Error::Parse(format!("bad matrix entry {s:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            if !entries.is_empty() {
                rows.push(entries);
            }
        }
        if rows.is_empty() {
            return Err(Error::Parse("empty matrix".into()));
        }
        Self::from_rows(&rows).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMat) -> Result<IntMat> {
        if self.cols != other.rows {
            return Err(Error::Argument(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let v = a * other.get(k, c);
                    out.data[r * other.cols + c] += v;
                }
            }
        }
        Ok(out)
    }

    /// Largest absolute value of an entry.
    pub fn max_abs(&self) -> BigInt {
        self.data.iter().map(|v| v.abs()).max().unwrap_or_default()
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<BigInt> {
        if self.rows != self.cols {
            return Err(Error::Argument("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut m = self.data.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if m[k * n + k].is_zero() {
                let Some(p) = (k + 1..n).find(|&r| !m[r * n + k].is_zero()) else {
                    return Ok(BigInt::zero());
                };
                for c in 0..n {
                    m.swap(k * n + c, p * n + c);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &m[k * n + k] * &m[i * n + j] - &m[i * n + k] * &m[k * n + j];
                    m[i * n + j] = v / &prev;
                }
                m[i * n + k] = BigInt::zero();
            }
            prev = m[k * n + k].clone();
        }
        Ok(sign * if n == 0 { BigInt::one() } else { m[n * n - 1].clone() })
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for r in 0..self.rows {
                self.data.swap(r * self.cols + a, r * self.cols + b);
            }
        }
    }

    /// `row[dst] += factor * row[src]`
    fn add_row(&mut self, dst: usize, src: usize, factor: &BigInt) {
        for c in 0..self.cols {
            let v = factor * &self.data[src * self.cols + c];
            self.data[dst * self.cols + c] += v;
        }
    }

    /// `col[dst] += factor * col[src]`
    fn add_col(&mut self, dst: usize, src: usize, factor: &BigInt) {
        for r in 0..self.rows {
            let v = factor * &self.data[r * self.cols + src];
            self.data[r * self.cols + dst] += v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = -std::mem::take(&mut self.data[r * self.cols + c]);
            self.data[r * self.cols + c] = v;
        }
    }
}

/// `D = P A Q^{-1}` with `P`, `Q` unimodular and `D` diagonal with
/// `d_11 | d_22 | ...`, all `d_ii >= 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfDecomposition {
    pub p: IntMat,
    pub q: IntMat,
    pub d: IntMat,
}

impl SnfDecomposition {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols)).map(|i| self.d.get(i, i).clone()).collect()
    }

    /// Number of nonzero diagonal entries.
    pub fn rank(&self) -> usize {
        self.diagonal().iter().take_while(|v| !v.is_zero()).count()
    }

    /// Checks `P A = D Q`, unimodularity, the diagonal shape and the
    /// divisibility chain.
    pub fn verify(&self, a: &IntMat) -> bool {
        let Ok(lhs) = self.p.mul(a) else { return false };
        let Ok(rhs) = self.d.mul(&self.q) else { return false };
        if lhs != rhs {
            return false;
        }
        let unit = |m: &IntMat| m.det().map(|d| d.abs().is_one()).unwrap_or(false);
        if !unit(&self.p) || !unit(&self.q) {
            return false;
        }
        for r in 0..self.d.rows {
            for c in 0..self.d.cols {
                if r != c && !self.d.get(r, c).is_zero() {
                    return false;
                }
            }
        }
        let diag = self.diagonal();
        diag.iter().all(|v| !v.is_negative())
            && diag.windows(2).all(|w| {
                if w[0].is_zero() {
                    w[1].is_zero()
                } else {
                    w[1].is_multiple_of(&w[0])
                }
            })
    }
}

/// Smith normal form by repeated smallest-pivot reduction.
pub fn smith_normal_form(a: &IntMat) -> SnfDecomposition {
    let (rows, cols) = (a.rows, a.cols);
    let mut d = a.clone();
    let mut p = IntMat::identity(rows);
    // `q` accumulates the inverse of the column operations: d = p a q^{-1}
    let mut q = IntMat::identity(cols);

    for t in 0..rows.min(cols) {
        let Some((pr, pc)) = smallest_nonzero(&d, t, |_, _| true) else {
            break;
        };
        d.swap_rows(t, pr);
        p.swap_rows(t, pr);
        d.swap_cols(t, pc);
        q.swap_rows(t, pc);
        loop {
            let pivot = d.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..rows {
                if !d.get(i, t).is_zero() {
                    let f = -d.get(i, t).div_floor(&pivot);
                    d.add_row(i, t, &f);
                    p.add_row(i, t, &f);
                    clean &= d.get(i, t).is_zero();
                }
            }
            for j in t + 1..cols {
                if !d.get(t, j).is_zero() {
                    let f = -d.get(t, j).div_floor(&pivot);
                    d.add_col(j, t, &f);
                    // inverse column operation, applied to the rows of q
                    q.add_row(t, j, &-&f);
                    clean &= d.get(t, j).is_zero();
                }
            }
            if !clean {
                let (pr, pc) = smallest_nonzero(&d, t, |r, c| r == t || c == t)
                    .expect("row or column still has a nonzero entry");
                d.swap_rows(t, pr);
                p.swap_rows(t, pr);
                d.swap_cols(t, pc);
                q.swap_rows(t, pc);
                continue;
            }
            // pivot must divide the rest of the matrix
            let offender = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !d.get(i, j).is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    d.add_row(t, i, &one);
                    p.add_row(t, i, &one);
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            p.negate_row(t);
        }
    }
    SnfDecomposition { p, q, d }
}

fn smallest_nonzero(
    m: &IntMat,
    t: usize,
    allowed: impl Fn(usize, usize) -> bool,
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for r in t..m.rows {
        for c in t..m.cols {
            let v = m.get(r, c);
            if v.is_zero() || !allowed(r, c) {
                continue;
            }
            let a = v.abs();
            if best.as_ref().is_none_or(|(_, _, b)| a < *b) {
                best = Some((r, c, a));
            }
        }
    }
    best.map(|(r, c, _)| (r, c))
}

/// The set of moduli `n >= 1` for which a system is solvable over `Z_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "variant")]
pub enum SolvabilityPattern {
    /// Solvable exactly for the listed moduli (sorted, no duplicates).
    Finite { moduli: Vec<u64> },
    /// Solvable exactly for the `n` with `gcd(n, d)` in `divisors`.
    Cofinite { d: u64, divisors: Vec<u64> },
}

impl SolvabilityPattern {
    pub fn contains(&self, n: u64) -> bool {
        match self {
            Self::Finite { moduli } => moduli.binary_search(&n).is_ok(),
            Self::Cofinite { d, divisors } => {
                divisors.binary_search(&num_integer::gcd(n, *d)).is_ok()
            }
        }
    }

    /// True when some `n > 1` coprime to 6 is in the set.
    pub fn admits_modulus_coprime_to_6(&self) -> bool {
        match self {
            Self::Finite { moduli } => moduli.iter().any(|&n| n > 1 && num_integer::gcd(n, 6) == 1),
            // 1 is always in the divisor set, so every n coprime to 6d works
            Self::Cofinite { .. } => true,
        }
    }
}

impl fmt::Display for SolvabilityPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        match self {
            Self::Finite { moduli } => write!(f, "finite N={{{}}}", list(moduli)),
            Self::Cofinite { d, divisors } => {
                write!(f, "cofinite d={d} T={{{}}}", list(divisors))
            }
        }
    }
}

fn check_rhs(a: &IntMat, b: &IntMat) -> Result<()> {
    if b.cols != 1 || b.rows != a.rows {
        return Err(Error::Argument(format!(
            "right-hand side must be a {}x1 column, got {}x{}",
            a.rows, b.rows, b.cols
        )));
    }
    Ok(())
}

/// `b' = P b` split into the head (rows with nonzero `d_ii`) and the tail.
struct Reduced {
    diag: Vec<BigInt>,
    head: Vec<BigInt>,
    tail: Vec<BigInt>,
}

fn reduce(a: &IntMat, b: &IntMat) -> Result<Reduced> {
    check_rhs(a, b)?;
    let snf = smith_normal_form(a);
    let bp = snf.p.mul(b)?;
    let r = snf.rank();
    let diag = snf.diagonal()[..r].to_vec();
    let head = (0..r).map(|i| bp.get(i, 0).clone()).collect();
    let tail = (r..a.rows).map(|i| bp.get(i, 0).clone()).collect();
    Ok(Reduced { diag, head, tail })
}

fn head_ok(diag: &[BigInt], head: &[BigInt], n: &BigInt) -> bool {
    diag.iter().zip(head).all(|(d, b)| b.is_multiple_of(&n.gcd(d)))
}

fn to_u64(v: &BigInt, what: &str) -> Result<u64> {
    v.to_u64()
        .ok_or_else(|| Error::Unsupported(format!("{what} {v} does not fit in 64 bits")))
}

/// Exact description of the `n` for which `Ax = b` is solvable over `Z_n`.
pub fn solvability_pattern(a: &IntMat, b: &IntMat) -> Result<SolvabilityPattern> {
    let red = reduce(a, b)?;
    let tail_gcd = red.tail.iter().fold(BigInt::zero(), |g, v| g.gcd(v));
    if !tail_gcd.is_zero() {
        let g = to_u64(&tail_gcd, "modulus bound")?;
        let moduli = divisors(g)
            .into_iter()
            .filter(|&n| head_ok(&red.diag, &red.head, &BigInt::from(n)))
            .collect();
        return Ok(SolvabilityPattern::Finite { moduli });
    }
    let d = match red.diag.last() {
        Some(v) => to_u64(v, "divisor modulus")?,
        None => 1,
    };
    let divisors = divisors(d)
        .into_iter()
        .filter(|&t| head_ok(&red.diag, &red.head, &BigInt::from(t)))
        .collect();
    Ok(SolvabilityPattern::Cofinite { d, divisors })
}

/// True iff `Ax = b` has a solution modulo `n`.
pub fn solvable_mod(a: &IntMat, b: &IntMat, n: u64) -> Result<bool> {
    if n == 0 {
        return Err(Error::Argument("modulus must be at least 1".into()));
    }
    let red = reduce(a, b)?;
    let n = BigInt::from(n);
    Ok(red.tail.iter().all(|v| v.is_multiple_of(&n)) && head_ok(&red.diag, &red.head, &n))
}

/// True iff some `n` in `[z, 2z]` is in the pattern.
pub fn interval_solvable(pattern: &SolvabilityPattern, z: u64) -> Result<bool> {
    if z == 0 {
        return Err(Error::Argument("interval start must be at least 1".into()));
    }
    Ok((z..=2 * z).any(|n| pattern.contains(n)))
}

/// Integer arithmetic used by the elimination, with overflow reported as `None`.
trait ElimInt: Clone + PartialEq + fmt::Debug {
    fn origin() -> Self;
    fn nil(&self) -> bool;
    fn below_zero(&self) -> bool;
    fn negated(&self) -> Option<Self>;
    /// `x*self + y*other`
    fn comb(&self, x: &Self, other: &Self, y: &Self) -> Option<Self>;
    /// `(g, s, t)` with `s*self + t*other = g = gcd >= 0`.
    fn ext_gcd(&self, other: &Self) -> Option<(Self, Self, Self)>;
    fn div_exact(&self, other: &Self) -> Self;
    fn gcd_with(&self, other: &Self) -> Self;
    fn to_big(&self) -> BigInt;
}

impl ElimInt for i128 {
    fn origin() -> Self {
        0
    }
    fn nil(&self) -> bool {
        *self == 0
    }
    fn below_zero(&self) -> bool {
        *self < 0
    }
    fn negated(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn comb(&self, x: &Self, other: &Self, y: &Self) -> Option<Self> {
        self.checked_mul(*x)?.checked_add(other.checked_mul(*y)?)
    }
    fn ext_gcd(&self, other: &Self) -> Option<(Self, Self, Self)> {
        let (mut r0, mut r1) = (*self, *other);
        let (mut s0, mut s1) = (1i128, 0i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0.checked_sub(q.checked_mul(r1)?)?);
            (s0, s1) = (s1, s0.checked_sub(q.checked_mul(s1)?)?);
            (t0, t1) = (t1, t0.checked_sub(q.checked_mul(t1)?)?);
        }
        if r0 < 0 {
            Some((r0.checked_neg()?, s0.checked_neg()?, t0.checked_neg()?))
        } else {
            Some((r0, s0, t0))
        }
    }
    fn div_exact(&self, other: &Self) -> Self {
        self / other
    }
    fn gcd_with(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl ElimInt for BigInt {
    fn origin() -> Self {
        Zero::zero()
    }
    fn nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn below_zero(&self) -> bool {
        Signed::is_negative(self)
    }
    fn negated(&self) -> Option<Self> {
        Some(-self)
    }
    fn comb(&self, x: &Self, other: &Self, y: &Self) -> Option<Self> {
        Some(self * x + other * y)
    }
    fn ext_gcd(&self, other: &Self) -> Option<(Self, Self, Self)> {
        let e = self.extended_gcd(other);
        if Signed::is_negative(&e.gcd) {
            Some((-e.gcd, -e.x, -e.y))
        } else {
            Some((e.gcd, e.x, e.y))
        }
    }
    fn div_exact(&self, other: &Self) -> Self {
        self / other
    }
    fn gcd_with(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

/// Row echelon form over the integers using only unimodular 2x2 row
/// combinations. Returns the gcd of the right-hand sides of all rows whose
/// coefficient part vanished, or `None` on overflow.
fn eliminate<T: ElimInt>(rows: Vec<Vec<T>>, vars: usize) -> Option<T> {
    let mut basis: Vec<Option<Vec<T>>> = vec![None; vars];
    let mut g = T::origin();
    for mut row in rows {
        for col in 0..vars {
            if row[col].nil() {
                continue;
            }
            match basis[col].take() {
                None => {
                    if row[col].below_zero() {
                        row = row.iter().map(|v| v.negated()).collect::<Option<Vec<_>>>()?;
                    }
                    basis[col] = Some(row);
                    row = Vec::new();
                    break;
                }
                Some(piv) => {
                    let (gc, s, t) = piv[col].ext_gcd(&row[col])?;
                    let a = piv[col].div_exact(&gc);
                    let b = row[col].div_exact(&gc);
                    let nb = b.negated()?;
                    let mut new_piv = Vec::with_capacity(row.len());
                    let mut rest = Vec::with_capacity(row.len());
                    for (p, r) in piv.iter().zip(&row) {
                        new_piv.push(p.comb(&s, r, &t)?);
                        rest.push(r.comb(&a, p, &nb)?);
                    }
                    basis[col] = Some(new_piv);
                    row = rest;
                }
            }
        }
        if let Some(rhs) = row.last() {
            if !rhs.nil() {
                g = g.gcd_with(rhs);
            }
        }
    }
    Some(g)
}

/// An unsolvability witness `g`: every `n` with `Ax = b` solvable over
/// `Z_n` divides `g`. `None` when elimination derives no constraint `0 = a`
/// with `a != 0`; absence proves nothing.
///
/// The witness is the gcd of `y.b` over all integer `y` with `yA = 0`, which
/// is what unimodular elimination leaves on the vanished rows.
pub fn unsolvability_witness(a: &IntMat, b: &IntMat) -> Result<Option<BigInt>> {
    check_rhs(a, b)?;
    let rows: Vec<Vec<BigInt>> = (0..a.rows)
        .map(|r| {
            let mut row = a.row(r).to_vec();
            row.push(b.get(r, 0).clone());
            row
        })
        .collect();
    Ok(witness_from_rows(rows, a.cols))
}

/// Same as [`unsolvability_witness`] on augmented rows `[coefficients | rhs]`.
pub fn witness_from_rows(rows: Vec<Vec<BigInt>>, vars: usize) -> Option<BigInt> {
    let small: Option<Vec<Vec<i128>>> = rows
        .iter()
        .map(|r| r.iter().map(|v| v.to_i128().filter(|x| x.abs() < 1 << 60)).collect())
        .collect();
    let g = match small.and_then(|s| eliminate::<i128>(s, vars)) {
        Some(g) => g.to_big(),
        None => eliminate::<BigInt>(rows, vars).expect("bigint elimination cannot overflow"),
    };
    (!g.is_zero()).then_some(g)
}

/// Exponents `(a, b)` with `g = 2^a 3^b`, if `g` has no other prime factor.
pub fn smooth_2_3(g: &BigInt) -> Option<(u32, u32)> {
    if g.is_zero() {
        return None;
    }
    let mut v = g.abs();
    let (two, three) = (BigInt::from(2), BigInt::from(3));
    let mut a = 0;
    while v.is_multiple_of(&two) {
        v /= &two;
        a += 1;
    }
    let mut b = 0;
    while v.is_multiple_of(&three) {
        v /= &three;
        b += 1;
    }
    v.is_one().then_some((a, b))
}

/// All positive divisors of `n >= 1`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut divs = vec![1u64];
    for (p, e) in factorize(n) {
        let current = divs.clone();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            divs.extend(current.iter().map(|d| d * pk));
        }
    }
    divs.sort_unstable();
    divs
}

/// Prime factorisation as `(prime, exponent)` pairs, ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut primes = Vec::new();
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        while n % p == 0 {
            primes.push(p);
            n /= p;
        }
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime(m) {
            primes.push(m);
            continue;
        }
        let f = pollard_rho(m);
        stack.push(f);
        stack.push(m / f);
    }
    primes.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for 64-bit inputs.
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A nontrivial factor of an odd composite `n`.
fn pollard_rho(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = num_integer::gcd(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(text: &str) -> IntMat {
        IntMat::parse(text).unwrap()
    }

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn snf_examples() {
        let id = m("1 0; 0 1");
        let s = smith_normal_form(&id);
        assert_eq!(s.d, id);
        assert_eq!(s.p, id);
        assert_eq!(s.q, id);

        let a = m("2 4; 6 8");
        let s = smith_normal_form(&a);
        assert_eq!(s.diagonal(), vec![big(2), big(4)]);
        assert!(s.verify(&a));

        let z = m("0 0");
        let s = smith_normal_form(&z);
        assert_eq!(s.d, z);
        assert_eq!(s.rank(), 0);
        assert!(s.verify(&z));
    }

    #[test]
    fn snf_rectangular_and_negative() {
        for text in ["3 -6 9; 0 4 7", "0; 5; -10", "6 10 15", "-4", "2 0 0; 0 3 0; 0 0 5"] {
            let a = m(text);
            let s = smith_normal_form(&a);
            assert!(s.verify(&a), "{text}: {:?}", s);
        }
        let s = smith_normal_form(&m("2 0 0; 0 3 0; 0 0 5"));
        assert_eq!(s.diagonal(), vec![big(1), big(1), big(30)]);
    }

    #[test]
    fn pattern_examples() {
        assert_eq!(
            solvability_pattern(&m("2"), &m("1")).unwrap(),
            SolvabilityPattern::Cofinite { d: 2, divisors: vec![1] }
        );
        assert_eq!(
            solvability_pattern(&m("0"), &m("3")).unwrap(),
            SolvabilityPattern::Finite { moduli: vec![1, 3] }
        );
        assert_eq!(
            solvability_pattern(&m("1"), &m("7")).unwrap(),
            SolvabilityPattern::Cofinite { d: 1, divisors: vec![1] }
        );
    }

    #[test]
    fn solvable_mod_examples() {
        assert!(solvable_mod(&m("2"), &m("1"), 5).unwrap());
        assert!(!solvable_mod(&m("2"), &m("1"), 4).unwrap());
        assert!(solvable_mod(&m("2"), &m("1"), 1).unwrap());
        assert!(solvable_mod(&m("2"), &m("1"), 0).is_err());
        assert!(solvable_mod(&m("2 1"), &m("1; 2"), 4).is_err());
    }

    #[test]
    fn witness_examples() {
        // x = 0, 3x = 1
        assert_eq!(unsolvability_witness(&m("1; 3"), &m("0; 1")).unwrap(), Some(big(1)));
        // 2x = 0, x = 1
        assert_eq!(unsolvability_witness(&m("2; 1"), &m("0; 1")).unwrap(), Some(big(2)));
        // x + y = 1, x + y = 4
        assert_eq!(unsolvability_witness(&m("1 1; 1 1"), &m("1; 4")).unwrap(), Some(big(3)));
        // consistent system
        assert_eq!(unsolvability_witness(&m("1 1; 1 -1"), &m("2; 0")).unwrap(), None);
    }

    #[test]
    fn witness_falls_back_to_bigint() {
        let huge = BigInt::from(1u64 << 62) * BigInt::from(1u64 << 62);
        let rows = vec![
            vec![huge.clone(), big(5)],
            vec![huge.clone() * 2, big(14)],
        ];
        assert_eq!(witness_from_rows(rows, 1), Some(big(4)));
    }

    #[test]
    fn interval_examples() {
        let odd = SolvabilityPattern::Cofinite { d: 2, divisors: vec![1] };
        assert!(interval_solvable(&odd, 21).unwrap());
        let three = SolvabilityPattern::Finite { moduli: vec![3] };
        assert!(!interval_solvable(&three, 4).unwrap());
        let six = SolvabilityPattern::Cofinite { d: 6, divisors: vec![1] };
        assert!(interval_solvable(&six, 5).unwrap());
    }

    #[test]
    fn smoothness() {
        assert_eq!(smooth_2_3(&big(72)), Some((3, 2)));
        assert_eq!(smooth_2_3(&big(-1)), Some((0, 0)));
        assert_eq!(smooth_2_3(&big(10)), None);
        assert_eq!(smooth_2_3(&big(0)), None);
    }

    #[test]
    fn factoring() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(factorize(600851475143), vec![(71, 1), (839, 1), (1471, 1), (6857, 1)]);
        let p = 1_000_000_007u64;
        assert_eq!(factorize(p * 998_244_353), vec![(998_244_353, 1), (p, 1)]);
    }

    #[test]
    fn determinant() {
        assert_eq!(m("2 4; 6 8").det().unwrap(), big(-8));
        assert_eq!(m("0 1; 1 0").det().unwrap(), big(-1));
        assert_eq!(m("1 2 3; 4 5 6; 7 8 10").det().unwrap(), big(-3));
    }
}
