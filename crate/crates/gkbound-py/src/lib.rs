//! Python module `pygkbound`.

use gkbound::bell::{self, Backend};
use gkbound::ccp::{self, BoundReport, DEFAULT_ORDER};
use gkbound::matgt::{self, ComplexMatrix, RealMatrix};
use gkbound::series::TruncatedSeries;
use gkbound::Error;
use num_complex::Complex64;
use num_rational::BigRational;
use pyo3::exceptions::{PyOverflowError, PyValueError};
use pyo3::prelude::*;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::SizeGuard(_) => PyOverflowError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn backend(name: &str) -> PyResult<Backend> {
    name.parse().map_err(to_py)
}

/// Upper-bound report for a catalog function.
#[pyclass(name = "BoundReport", frozen, get_all)]
struct PyBoundReport {
    name: String,
    order: usize,
    backend: String,
    route: String,
    c_star: f64,
    bound: f64,
    abs_inverse_at_r: f64,
    tail_indicator: f64,
    notes: Vec<String>,
}

#[pymethods]
impl PyBoundReport {
    fn __repr__(&self) -> String {
        format!(
            "BoundReport(name={:?}, order={}, route={:?}, bound={})",
            self.name, self.order, self.route, self.bound
        )
    }
}

impl From<BoundReport> for PyBoundReport {
    fn from(r: BoundReport) -> Self {
        let route = serde_json::to_value(r.route)
            .ok()
            .and_then(|v| v.as_str().map(str::to_owned))
            .unwrap_or_default();
        PyBoundReport {
            name: r.name,
            order: r.order,
            backend: r.backend,
            route,
            c_star: r.c_star,
            bound: r.bound,
            abs_inverse_at_r: r.abs_inverse_at_r,
            tail_indicator: r.tail_indicator,
            notes: r.notes,
        }
    }
}

#[pyfunction]
#[pyo3(signature = (function, order = DEFAULT_ORDER, backend = "bell"))]
fn bound(py: Python<'_>, function: &str, order: usize, backend: &str) -> PyResult<PyBoundReport> {
    let b = self::backend(backend)?;
    py.detach(|| ccp::bound(function, order, b)).map(Into::into).map_err(to_py)
}

/// Compositional inverse of `Σ a_n x^n`; `a[0]` must be 0 and `a[1]` nonzero.
#[pyfunction]
#[pyo3(signature = (coeffs, order = None, backend = "bell"))]
fn invert(coeffs: Vec<f64>, order: Option<usize>, backend: &str) -> PyResult<Vec<f64>> {
    let s = TruncatedSeries::with_inferred_parity(coeffs, 1.0).map_err(to_py)?;
    let order = order.unwrap_or(s.order());
    let inv = bell::invert(&s, order, self::backend(backend)?).map_err(to_py)?;
    Ok(inv.coeffs().to_vec())
}

/// Exact inverse over `fractions.Fraction` coefficients.
#[pyfunction]
#[pyo3(signature = (coeffs, order = None, backend = "bell"))]
fn invert_exact(coeffs: Vec<BigRational>, order: Option<usize>, backend: &str) -> PyResult<Vec<BigRational>> {
    let s = TruncatedSeries::with_inferred_parity(coeffs, 1.0).map_err(to_py)?;
    let order = order.unwrap_or(s.order());
    let inv = bell::invert(&s, order, self::backend(backend)?).map_err(to_py)?;
    Ok(inv.coeffs().to_vec())
}

/// Entry `(nu, mu)` (1-based) of the normalized Walsh–Hadamard matrix of size `2^m`.
#[pyfunction]
fn wht_entry(m: u32, nu: usize, mu: usize) -> PyResult<f64> {
    matgt::wht_entry(m, nu, mu).map_err(to_py)
}

/// Normalized Walsh–Hadamard matrix as a list of rows.
#[pyfunction]
fn wht(m: u32) -> PyResult<Vec<Vec<f64>>> {
    let h = matgt::wht(m).map_err(to_py)?;
    Ok((0..h.rows()).map(|i| (0..h.cols()).map(|j| h.get(i, j)).collect()).collect())
}

fn flatten<T: Copy>(rows: &[Vec<T>]) -> PyResult<(usize, usize, Vec<T>)> {
    let m = rows.len();
    let n = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != n) {
        return Err(PyValueError::new_err("ragged matrix rows"));
    }
    Ok((m, n, rows.concat()))
}

/// `‖A‖∞,1` of a real matrix by sign enumeration: `(value, p, q)`.
#[pyfunction]
fn norm(py: Python<'_>, rows: Vec<Vec<f64>>) -> PyResult<(f64, Vec<f64>, Vec<f64>)> {
    let (m, n, data) = flatten(&rows)?;
    let a = RealMatrix::new(m, n, data).map_err(to_py)?;
    let w = py.detach(|| matgt::norm_inf1_real(&a)).map_err(to_py)?;
    Ok((w.value, w.p, w.q))
}

/// Lower estimate of the complex `‖A‖∞,1`: `(value, phases)`.
#[pyfunction]
#[pyo3(signature = (rows, grid = 64))]
fn norm_complex(py: Python<'_>, rows: Vec<Vec<Complex64>>, grid: usize) -> PyResult<(f64, Vec<f64>)> {
    let (m, n, data) = flatten(&rows)?;
    let a = ComplexMatrix::new(m, n, data).map_err(to_py)?;
    let est = py.detach(|| matgt::norm_inf1_complex_estimate(&a, grid)).map_err(to_py)?;
    Ok((est.value, est.phases))
}

/// Haagerup's function at `|ζ| <= 1`; closed form unless `order` is given.
#[pyfunction]
#[pyo3(signature = (zeta, order = None))]
fn haagerup_eval(zeta: Complex64, order: Option<usize>) -> PyResult<Complex64> {
    ccp::haagerup_eval(zeta, order).map_err(to_py)
}

/// Power-series coefficients of `h_φ` for a catalog function.
#[pyfunction]
#[pyo3(signature = (function, order = DEFAULT_ORDER))]
fn h_series(function: &str, order: usize) -> PyResult<Vec<f64>> {
    let d = ccp::catalog(function).map_err(to_py)?;
    Ok(ccp::h_series(&d, order).map_err(to_py)?.coeffs().to_vec())
}

#[pymodule]
fn pygkbound(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyBoundReport>()?;
    m.add_function(wrap_pyfunction!(bound, m)?)?;
    m.add_function(wrap_pyfunction!(invert, m)?)?;
    m.add_function(wrap_pyfunction!(invert_exact, m)?)?;
    m.add_function(wrap_pyfunction!(wht_entry, m)?)?;
    m.add_function(wrap_pyfunction!(wht, m)?)?;
    m.add_function(wrap_pyfunction!(norm, m)?)?;
    m.add_function(wrap_pyfunction!(norm_complex, m)?)?;
    m.add_function(wrap_pyfunction!(haagerup_eval, m)?)?;
    m.add_function(wrap_pyfunction!(h_series, m)?)?;
    m.add("DEFAULT_ORDER", DEFAULT_ORDER)?;
    Ok(())
}
