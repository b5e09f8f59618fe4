//! Size bounds for deciding `D(Z_k^l + Z_n) <= delta + kn` over all `n`
//! coprime to `k`: the ledger of intermediate constants, the validity
//! threshold on `n`, and the two bounds on the least counterexample.

use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};

/// How the count of non-neat sets is evaluated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum NnMode {
    /// `max{0, ceil((k-1)k^(l-1) - delta/k - c_defect)}`.
    #[default]
    Expression,
    /// Always 0, the value obtained once `c_defect` is replaced by its upper
    /// bound `3k^l`.
    Zero,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstantsLedger {
    pub k: i64,
    pub l: i64,
    pub delta: i64,
    pub c: i64,
    pub c_defect: i64,
    pub c_less: i64,
    pub c_more: i64,
    pub c_card: i64,
    pub c_ws: i64,
    pub c_nn: i64,
    pub c_var: i64,
    pub c_eq: i64,
    /// Every threshold on `n` used along the way, in order of appearance.
    pub thresholds: Vec<(String, i64)>,
    pub n_min: i64,
    pub var_count: i64,
    pub coefficient_bound: i64,
    pub rhs_bound: i64,
    /// `eq_count_bound = 2^eq_count_log2`.
    pub eq_count_log2: i64,
}

impl ConstantsLedger {
    pub fn eq_count_bound(&self) -> BigUint {
        BigUint::one() << self.eq_count_log2 as u64
    }

    /// Named scalar entries in display order.
    pub fn entries(&self) -> Vec<(&'static str, i64)> {
        vec![
            ("k", self.k),
            ("l", self.l),
            ("delta", self.delta),
            ("c", self.c),
            ("c_defect", self.c_defect),
            ("c_less", self.c_less),
            ("c_more", self.c_more),
            ("c_card", self.c_card),
            ("c_ws", self.c_ws),
            ("c_nn", self.c_nn),
            ("c_var", self.c_var),
            ("c_eq", self.c_eq),
            ("n_min", self.n_min),
            ("var_count", self.var_count),
            ("coefficient_bound", self.coefficient_bound),
            ("rhs_bound", self.rhs_bound),
        ]
    }
}

impl fmt::Display for ConstantsLedger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let entries = self.entries();
        let width = entries.iter().map(|(n, _)| n.len()).max().unwrap_or(0).max(14);
        for (name, value) in entries {
            writeln!(f, "{name:<width$}  {value}")?;
        }
        writeln!(f, "{:<width$}  2^{}", "eq_count_bound", self.eq_count_log2)?;
        for (name, value) in &self.thresholds {
            writeln!(f, "{:<width$}  {value}", format!("n >= [{name}]"))?;
        }
        Ok(())
    }
}

fn ceil_div(a: i64, b: i64) -> i64 {
    a.div_euclid(b) + i64::from(a.rem_euclid(b) != 0)
}

fn checked_pow(k: i64, e: i64) -> Result<i64> {
    u32::try_from(e)
        .ok()
        .and_then(|e| k.checked_pow(e))
        .ok_or_else(|| Error::Argument(format!("{k}^{e} overflows")))
}

/// Evaluates every constant for the given `c = c(k, l)`.
pub fn constants_ledger(k: i64, l: i64, delta: i64, c: i64, nn: NnMode) -> Result<ConstantsLedger> {
    if k < 2 {
        return Err(Error::Argument(format!("k must be at least 2, got {k}")));
    }
    if l < 1 {
        return Err(Error::Argument(format!("l must be at least 1, got {l}")));
    }
    if c < 0 || delta < 0 {
        return Err(Error::Argument("c and delta must be nonnegative".into()));
    }
    let kl = checked_pow(k, l)?;
    if kl > 1 << 40 || c > 1 << 40 || delta > 1 << 40 {
        return Err(Error::Argument("parameters too large".into()));
    }

    let c_defect = (1 + ceil_div(2 * c - delta, k)).max(0);
    let c_less = (c - delta - 1).max(0);
    let c_more = delta + k * c_defect + c_less;
    let c_card = c_more + c_less;
    let c_ws = (c_defect - 1).max(0);
    let c_nn = match nn {
        // (k-1)k^(l-1) - delta/k - c_defect over the common denominator k
        NnMode::Expression => ceil_div((k - 1) * kl - delta - k * c_defect, k).max(0),
        NnMode::Zero => 0,
    };
    let c_var = delta + k * (c_defect + c_nn + c_ws + kl - 1);
    let c_eq = c_card + c_var;

    let thresholds = vec![
        ("3 c_defect".to_string(), 3 * c_defect),
        (
            "c_defect + c_more + 2 c_ws + 1 + k(c_ws + 1)".to_string(),
            c_defect + c_more + 2 * c_ws + 1 + k * (c_ws + 1),
        ),
        ("((k-1)k^l + c_var - delta) / k".to_string(), ceil_div((k - 1) * kl + c_var - delta, k)),
        ("4 c_defect".to_string(), 4 * c_defect),
        ("2(c_defect + c_eq)".to_string(), 2 * (c_defect + c_eq)),
    ];
    let n_min = thresholds.iter().map(|(_, v)| *v).max().unwrap_or(0).max(0);

    Ok(ConstantsLedger {
        k,
        l,
        delta,
        c,
        c_defect,
        c_less,
        c_more,
        c_card,
        c_ws,
        c_nn,
        c_var,
        c_eq,
        thresholds,
        n_min,
        var_count: c_var,
        coefficient_bound: k,
        rhs_bound: k * (c_defect + c_eq),
        eq_count_log2: c_var,
    })
}

/// The generic value `c = k^(l+1)`.
pub fn generic_c(k: i64, l: i64) -> Result<i64> {
    checked_pow(k, l + 1)
}

/// The upper estimates each ledger entry satisfies when `c = k^(l+1)`,
/// as `(name, value, bound)`.
pub fn generic_estimates(ledger: &ConstantsLedger) -> Result<Vec<(&'static str, i64, i64)>> {
    let (k, l, delta) = (ledger.k, ledger.l, ledger.delta);
    let kl = checked_pow(k, l)?;
    let kl1 = kl * k;
    Ok(vec![
        ("c_defect", ledger.c_defect, 3 * kl),
        ("c_less", ledger.c_less, kl1 - delta),
        ("c_more", ledger.c_more, 4 * kl1),
        ("c_card", ledger.c_card, 5 * kl1),
        ("c_ws", ledger.c_ws, 3 * kl),
        ("c_var", ledger.c_var, 7 * kl1 + delta),
        ("c_eq", ledger.c_eq, 12 * kl1 + delta),
        ("n_min", ledger.n_min, 27 * kl1 + 2 * delta),
        ("rhs_bound", ledger.rhs_bound, 14 * kl1 * k + k * delta),
    ])
}

fn check_standing(k: i64, l: i64, delta: i64) -> Result<()> {
    if k < 2 || l < 3 || delta < 2 {
        return Err(Error::Argument(format!(
            "bounds need k >= 2, l >= 3, delta >= 2; got k={k}, l={l}, delta={delta}"
        )));
    }
    Ok(())
}

/// `ceil(6 l (7k^(l+1) + delta) ln(k delta))`, the bound on the least
/// counterexample when there are infinitely many.
pub fn bound_infinite(k: i64, l: i64, delta: i64) -> Result<u64> {
    check_standing(k, l, delta)?;
    let kl1 = generic_c(k, l)?;
    let factor = 6.0 * l as f64 * (7.0 * kl1 as f64 + delta as f64);
    let value = factor * ((k * delta) as f64).ln();
    if !value.is_finite() || value > 9.0e15 {
        return Err(Error::Argument("bound exceeds exact floating range".into()));
    }
    Ok(value.ceil() as u64)
}

/// `2^(2^(c * m))` with `m = k^(l+1) + delta` and `c` an unspecified
/// absolute constant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymbolicBound {
    pub m: i64,
}

impl fmt::Display for SymbolicBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "2^(2^(c*{}))", self.m)
    }
}

pub fn bound_finite_symbolic(k: i64, l: i64, delta: i64) -> Result<SymbolicBound> {
    check_standing(k, l, delta)?;
    Ok(SymbolicBound { m: generic_c(k, l)? + delta })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_ledger() {
        let led = constants_ledger(3, 2, 4, 4, NnMode::Expression).unwrap();
        assert_eq!(led.c_defect, 3);
        assert_eq!(led.c_ws, 2);
        assert_eq!(led.c_less, 0);
        assert_eq!(led.c_more, 4 + 9);
        assert_eq!(led.c_card, led.c_more + led.c_less);
        assert_eq!(led.c_eq, led.c_card + led.c_var);
        assert_eq!(led.rhs_bound, 3 * (led.c_defect + led.c_eq));
        assert_eq!(led.eq_count_bound(), BigUint::one() << led.c_var as u64);
        assert!(led.thresholds.iter().all(|(_, v)| led.n_min >= *v));
    }

    #[test]
    fn generic_estimates_on_grid() {
        for k in 2..=5 {
            for l in 3..=5 {
                for delta in 2..=10 {
                    let c = generic_c(k, l).unwrap();
                    let led = constants_ledger(k, l, delta, c, NnMode::Expression).unwrap();
                    for (name, v, bound) in generic_estimates(&led).unwrap() {
                        assert!(v <= bound, "{name} = {v} > {bound} at k={k} l={l} delta={delta}");
                    }
                }
            }
        }
    }

    #[test]
    fn nn_modes() {
        // (k-1)k^(l-1) - delta/k - c_defect = 2*3 - 0 - 1 = 5 with c=0, delta=0
        let e = constants_ledger(3, 2, 0, 0, NnMode::Expression).unwrap();
        assert_eq!(e.c_defect, 1);
        assert_eq!(e.c_nn, 5);
        let z = constants_ledger(3, 2, 0, 0, NnMode::Zero).unwrap();
        assert_eq!(z.c_nn, 0);
        // rational part rounds up: 6 - 1/3 - 1 = 4.67
        assert_eq!(constants_ledger(3, 2, 1, 0, NnMode::Expression).unwrap().c_nn, 5);
    }

    #[test]
    fn floors() {
        let led = constants_ledger(2, 3, 100, 1, NnMode::Expression).unwrap();
        assert_eq!(led.c_defect, 0);
        assert_eq!(led.c_less, 0);
        assert_eq!(led.c_ws, 0);
        assert!(led.entries().iter().all(|(_, v)| *v >= 0));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(constants_ledger(1, 2, 2, 0, NnMode::Expression).is_err());
        assert!(constants_ledger(2, 0, 2, 0, NnMode::Expression).is_err());
        assert!(bound_infinite(2, 2, 2).is_err());
        assert!(bound_finite_symbolic(2, 3, 1).is_err());
    }

    #[test]
    fn infinite_bound() {
        let expect = (18.0 * 1798.0 * 24f64.ln()).ceil() as u64;
        assert_eq!(bound_infinite(4, 3, 6).unwrap(), expect);
        assert!((102_800..102_900).contains(&expect));
        assert_eq!(bound_infinite(2, 3, 2).unwrap(), (18.0 * 114.0 * 4f64.ln()).ceil() as u64);
        let base = bound_infinite(3, 3, 3).unwrap();
        assert!(bound_infinite(4, 3, 3).unwrap() > base);
        assert!(bound_infinite(3, 4, 3).unwrap() > base);
        assert!(bound_infinite(3, 3, 4).unwrap() > base);
    }

    #[test]
    fn symbolic_bound() {
        let b = bound_finite_symbolic(4, 3, 6).unwrap();
        assert_eq!(b.m, 262);
        assert_eq!(b.to_string(), "2^(2^(c*262))");
    }
}
