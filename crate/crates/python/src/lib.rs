//! Python module `zerosum`: thin wrappers over `zerosum-core`.

use num_bigint::BigInt;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use zerosum_core::abelian::{to_grid, GMultiSet, GroupSpec};
use zerosum_core::decidability::{constants_ledger, generic_c, NnMode};
use zerosum_core::intlinalg::{self, IntMat};
use zerosum_core::proof335::{self, CandidateOptions, Certificate};
use zerosum_core::rank2;
use zerosum_core::zerosum::{self as zs, SearchOptions};
use zerosum_core::Error;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Budget { .. } | Error::Io(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn group(text: &str) -> PyResult<GroupSpec> {
    GroupSpec::parse(text).map_err(py_err)
}

fn opts(budget: Option<u64>) -> SearchOptions {
    SearchOptions { node_budget: budget.unwrap_or(zs::DEFAULT_NODE_BUDGET) }
}

fn matrix(rows: Vec<Vec<BigInt>>) -> PyResult<IntMat> {
    IntMat::from_rows(&rows).map_err(py_err)
}

fn rows_of(m: &IntMat) -> Vec<Vec<BigInt>> {
    (0..m.rows()).map(|r| m.row(r).to_vec()).collect()
}

/// D(G) for a group such as "3,3" or "3^3".
#[pyfunction]
#[pyo3(signature = (group_spec, budget=None))]
fn davenport(py: Python<'_>, group_spec: &str, budget: Option<u64>) -> PyResult<u64> {
    let g = group(group_spec)?;
    py.detach(|| zs::davenport(&g, &opts(budget))).map(|r| r.value).map_err(py_err)
}

/// D_m(G).
#[pyfunction]
#[pyo3(signature = (group_spec, m, budget=None))]
fn davenport_m(py: Python<'_>, group_spec: &str, m: usize, budget: Option<u64>) -> PyResult<u64> {
    let g = group(group_spec)?;
    py.detach(|| zs::davenport_m(&g, m, &opts(budget))).map(|r| r.value).map_err(py_err)
}

/// D^k(G): least N forcing a zero-sum of length at most k.
#[pyfunction]
#[pyo3(signature = (group_spec, k, budget=None))]
fn davenport_short(py: Python<'_>, group_spec: &str, k: usize, budget: Option<u64>) -> PyResult<u64> {
    let g = group(group_spec)?;
    py.detach(|| zs::davenport_short(&g, k, &opts(budget))).map(|r| r.value).map_err(py_err)
}

/// `(D, P, Q)` with `D = P A Q^-1`.
#[pyfunction]
fn smith_normal_form(a: Vec<Vec<BigInt>>) -> PyResult<(Vec<Vec<BigInt>>, Vec<Vec<BigInt>>, Vec<Vec<BigInt>>)> {
    let s = intlinalg::smith_normal_form(&matrix(a)?);
    Ok((rows_of(&s.d), rows_of(&s.p), rows_of(&s.q)))
}

#[pyfunction]
fn solvable_mod(a: Vec<Vec<BigInt>>, b: Vec<BigInt>, n: u64) -> PyResult<bool> {
    intlinalg::solvable_mod(&matrix(a)?, &IntMat::column(&b), n).map_err(py_err)
}

/// The set of moduli for which `A x = b` is solvable, as text.
#[pyfunction]
fn solvability_pattern(a: Vec<Vec<BigInt>>, b: Vec<BigInt>) -> PyResult<String> {
    intlinalg::solvability_pattern(&matrix(a)?, &IntMat::column(&b)).map(|p| p.to_string()).map_err(py_err)
}

#[pyfunction]
fn unsolvability_witness(a: Vec<Vec<BigInt>>, b: Vec<BigInt>) -> PyResult<Option<BigInt>> {
    intlinalg::unsolvability_witness(&matrix(a)?, &IntMat::column(&b)).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (n, budget=None))]
fn property_b(py: Python<'_>, n: u32, budget: Option<u64>) -> PyResult<bool> {
    py.detach(|| rank2::property_b(n, &opts(budget))).map(|r| r.holds).map_err(py_err)
}

/// Classification ("C1", "C2", "C3", "EXCEPTION" or "NONE") of a zero-sum
/// free multiset over Z_n^2 written as "(1,0)^3 (0,1)^3".
#[pyfunction]
fn completion_class(n: u32, base: &str) -> PyResult<String> {
    let g = GroupSpec::new(vec![n, n]).map_err(py_err)?;
    let ms = GMultiSet::parse(&g, base).map_err(py_err)?;
    rank2::completion_report(&ms).map(|r| r.classification.to_string()).map_err(py_err)
}

/// Ledger entries as `(name, value)` pairs; `c` defaults to `k^(l+1)`.
#[pyfunction]
#[pyo3(signature = (k, l, delta, c=None))]
fn constants(k: i64, l: i64, delta: i64, c: Option<i64>) -> PyResult<Vec<(String, i64)>> {
    let c = match c {
        Some(c) => c,
        None => generic_c(k, l).map_err(py_err)?,
    };
    let ledger = constants_ledger(k, l, delta, c, NnMode::Expression).map_err(py_err)?;
    Ok(ledger.entries().into_iter().map(|(n, v)| (n.to_string(), v)).collect())
}

/// Grids of the 13-element candidates in Z_3^3.
#[pyfunction]
fn enumerate_a13(py: Python<'_>) -> PyResult<Vec<String>> {
    py.detach(|| {
        let reps = proof335::enumerate_candidates(13, 2, &CandidateOptions::default())?;
        reps.iter().map(to_grid).collect::<zerosum_core::Result<Vec<_>>>()
    })
    .map_err(py_err)
}

/// `(nine-element survivors, orbits of eight-element survivors, all claims hold)`.
#[pyfunction]
fn lemma_length3(py: Python<'_>) -> PyResult<(u64, usize, bool)> {
    let r = py.detach(proof335::verify_length3).map_err(py_err)?;
    Ok((r.nine_survivors(), r.orbits_of_8.len(), r.ok()))
}

/// Parses and replays a certificate; `(valid, first problem)`.
#[pyfunction]
fn verify_certificate(py: Python<'_>, text: &str) -> PyResult<(bool, Option<String>)> {
    let cert = Certificate::parse(text).map_err(py_err)?;
    let v = py.detach(|| proof335::verify_certificate(&cert)).map_err(py_err)?;
    Ok((v.valid, v.problem))
}

#[pymodule]
fn zerosum(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(davenport, m)?)?;
    m.add_function(wrap_pyfunction!(davenport_m, m)?)?;
    m.add_function(wrap_pyfunction!(davenport_short, m)?)?;
    m.add_function(wrap_pyfunction!(smith_normal_form, m)?)?;
    m.add_function(wrap_pyfunction!(solvable_mod, m)?)?;
    m.add_function(wrap_pyfunction!(solvability_pattern, m)?)?;
    m.add_function(wrap_pyfunction!(unsolvability_witness, m)?)?;
    m.add_function(wrap_pyfunction!(property_b, m)?)?;
    m.add_function(wrap_pyfunction!(completion_class, m)?)?;
    m.add_function(wrap_pyfunction!(constants, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_a13, m)?)?;
    m.add_function(wrap_pyfunction!(lemma_length3, m)?)?;
    m.add_function(wrap_pyfunction!(verify_certificate, m)?)?;
    Ok(())
}
