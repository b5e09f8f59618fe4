//! Oracles shared by the integration tests.

#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Image of `A` modulo `q` small enough to enumerate.
const ENUMERATION_LIMIT: u64 = 1 << 16;

pub fn random_system(rng: &mut ChaCha8Rng) -> (Vec<Vec<i64>>, Vec<i64>) {
    let rows = rng.gen_range(1..=4);
    let cols = rng.gen_range(1..=5);
    let a = (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(-9..=9)).collect()).collect();
    let b = (0..rows).map(|_| rng.gen_range(-9..=9)).collect();
    (a, b)
}

fn prime_powers(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Whether `b` lies in the subgroup of `Z_q^rows` generated by the columns
/// of `A`, by enumerating that subgroup.
fn in_column_span(a: &[Vec<i64>], b: &[i64], q: u64) -> bool {
    let rows = a.len();
    let size = q.pow(rows as u32) as usize;
    let enc = |v: &[u64]| v.iter().fold(0usize, |acc, &x| acc * q as usize + x as usize);
    let dec = |mut i: usize| {
        let mut v = vec![0u64; rows];
        for r in (0..rows).rev() {
            v[r] = (i % q as usize) as u64;
            i /= q as usize;
        }
        v
    };
    let m = |x: i64| x.rem_euclid(q as i64) as u64;
    let cols: Vec<Vec<u64>> = (0..a[0].len()).map(|c| a.iter().map(|row| m(row[c])).collect()).collect();
    let mut seen = vec![false; size];
    seen[0] = true;
    let mut queue = vec![0usize];
    while let Some(h) = queue.pop() {
        let hv = dec(h);
        for c in &cols {
            let s: Vec<u64> = hv.iter().zip(c).map(|(x, y)| (x + y) % q).collect();
            let i = enc(&s);
            if !seen[i] {
                seen[i] = true;
                queue.push(i);
            }
        }
    }
    let target: Vec<u64> = b.iter().map(|&x| m(x)).collect();
    seen[enc(&target)]
}

fn valuation(x: u64, p: u64, e: u32) -> u32 {
    if x == 0 {
        return e;
    }
    let mut v = 0;
    let mut x = x;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

fn inverse(u: u64, q: u64) -> u64 {
    (1..q).find(|&t| u * t % q == 1).expect("unit")
}

/// Diagonalization over the local ring `Z/p^e` with minimal-valuation
/// pivots.
fn local_solvable(a: &[Vec<i64>], b: &[i64], p: u64, e: u32) -> bool {
    let q = p.pow(e);
    let m = |x: i64| x.rem_euclid(q as i64) as u64;
    let rows = a.len();
    let cols = a[0].len();
    let mut mat: Vec<Vec<u64>> = a.iter().map(|r| r.iter().map(|&x| m(x)).collect()).collect();
    let mut rhs: Vec<u64> = b.iter().map(|&x| m(x)).collect();
    let mut t = 0;
    while t < rows.min(cols) {
        let mut best: Option<(u32, usize, usize)> = None;
        for r in t..rows {
            for c in t..cols {
                let v = valuation(mat[r][c], p, e);
                if v < e && best.is_none_or(|(bv, _, _)| v < bv) {
                    best = Some((v, r, c));
                }
            }
        }
        let Some((v, r, c)) = best else { break };
        mat.swap(t, r);
        rhs.swap(t, r);
        for row in mat.iter_mut() {
            row.swap(t, c);
        }
        let pv = p.pow(v);
        let u_inv = inverse(mat[t][t] / pv, q);
        for i in 0..rows {
            if i != t && mat[i][t] != 0 {
                let f = (mat[i][t] / pv) * u_inv % q;
                for j in 0..cols {
                    mat[i][j] = (mat[i][j] + q * q - f * mat[t][j] % q) % q;
                }
                rhs[i] = (rhs[i] + q * q - f * rhs[t] % q) % q;
            }
        }
        for j in 0..cols {
            if j != t && mat[t][j] != 0 {
                let f = (mat[t][j] / pv) * u_inv % q;
                for row in mat.iter_mut() {
                    row[j] = (row[j] + q * q - f * row[t] % q) % q;
                }
            }
        }
        t += 1;
    }
    (0..rows).all(|i| {
        if i < t {
            valuation(rhs[i], p, e) >= valuation(mat[i][i], p, e)
        } else {
            rhs[i] == 0
        }
    })
}

/// Solvability of `A x = b` over `Z_n`, decided per prime power of `n`:
/// by enumerating the column span when it is small, otherwise by local
/// elimination.
pub fn solvable_by_search(a: &[Vec<i64>], b: &[i64], n: u64) -> bool {
    prime_powers(n).into_iter().all(|(p, e)| {
        let q = p.pow(e);
        if q.checked_pow(a.len() as u32).is_some_and(|s| s <= ENUMERATION_LIMIT) {
            in_column_span(a, b, q)
        } else {
            local_solvable(a, b, p, e)
        }
    })
}

/// Both oracles agree wherever enumeration is feasible.
pub fn oracles_agree(a: &[Vec<i64>], b: &[i64], q_max: u64) -> bool {
    (2..=q_max).all(|q| {
        let pp = prime_powers(q);
        if pp.len() != 1 {
            return true;
        }
        let (p, e) = pp[0];
        q.pow(a.len() as u32) > ENUMERATION_LIMIT || in_column_span(a, b, q) == local_solvable(a, b, p, e)
    })
}
