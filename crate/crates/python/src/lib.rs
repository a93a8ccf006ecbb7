//! Python module `qcircle`.

use num_bigint::BigInt;
use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use ::qcircle::{asymptotic, farey, mainterm, nearpole, series, specfun, LogMagnitude};

fn err(e: ::qcircle::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Reduced fraction `h/k` labelling a Farey arc.
#[pyclass(name = "Arc", frozen, eq, hash, skip_from_py_object)]
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
struct PyArc(mainterm::ArcParams);

#[pymethods]
impl PyArc {
    #[new]
    fn new(h: i64, k: i64) -> PyResult<Self> {
        mainterm::ArcParams::new(h, k).map(Self).map_err(err)
    }

    #[getter]
    fn h(&self) -> i64 {
        self.0.h()
    }

    #[getter]
    fn k(&self) -> i64 {
        self.0.k()
    }

    /// Case 1..4 of the main-term closed form.
    fn case(&self) -> PyResult<u8> {
        mainterm::case_classify(self.0.k()).map(|c| c.index()).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Arc({}, {})", self.0.h(), self.0.k())
    }
}

/// `τ = 1/X + 2πiY` with `N = floor(sqrt(2πX))`.
#[pyclass(name = "Tau", frozen, skip_from_py_object)]
#[derive(Clone, Copy)]
struct PyTau(mainterm::TauParam);

#[pymethods]
impl PyTau {
    #[new]
    #[pyo3(signature = (x, y = 0.0))]
    fn new(x: f64, y: f64) -> PyResult<Self> {
        mainterm::TauParam::new(x, y).map(Self).map_err(err)
    }

    /// Like `Tau(x, y)` but also checks `|Y| <= 1/(kN)` for the given arc.
    #[staticmethod]
    fn on_arc(x: f64, y: f64, arc: &PyArc) -> PyResult<Self> {
        farey::make_tau(x, y, arc.0).map(Self).map_err(err)
    }

    #[getter]
    fn x(&self) -> f64 {
        self.0.x()
    }

    #[getter]
    fn y(&self) -> f64 {
        self.0.y()
    }

    #[getter]
    fn big_n(&self) -> u64 {
        self.0.big_n()
    }

    fn value(&self) -> Complex64 {
        self.0.tau()
    }

    fn __repr__(&self) -> String {
        format!("Tau(x={}, y={})", self.0.x(), self.0.y())
    }
}

/// `g(0..=n)` as Python ints.
#[pyfunction]
fn g_coefficients(n: usize) -> Vec<BigInt> {
    series::g_series(n).into_coeffs()
}

/// Coefficients of `1/(q^a; q^M)_inf` (or of `1/(-q^a; q^M)_inf` with `negative=True`).
#[pyfunction]
#[pyo3(signature = (a, modulus, n, negative = false))]
fn pochhammer_inverse(a: i64, modulus: i64, n: usize, negative: bool) -> PyResult<Vec<BigInt>> {
    let s = if negative {
        series::inv_neg_pochhammer_series(a, modulus, n)
    } else {
        series::inv_pochhammer_series(a, modulus, n)
    };
    s.map(|s| s.into_coeffs()).map_err(err)
}

/// Smallest `n` with `g(n) < 0`, or `None`.
#[pyfunction]
fn first_negative(n: usize) -> Option<(usize, BigInt)> {
    series::g_series(n)
        .first_negative()
        .map(|(i, v)| (i, v.clone()))
}

/// `log G(q)` at `q = exp(2πi h/k - τ)`.
#[pyfunction]
#[pyo3(signature = (tau, arc, tol = 1e-10))]
fn log_g(tau: &PyTau, arc: &PyArc, tol: f64) -> PyResult<Complex64> {
    let q = series::ComplexPoint::from_tau(tau.0.x(), tau.0.y(), arc.0.h(), arc.0.k()).map_err(err)?;
    series::eval_log_g(q, tol).map_err(err)
}

/// `Φ_{a,M}(q) = -log (q^a; q^M)_inf` at `q = exp(2πi h/k - τ)`.
#[pyfunction]
#[pyo3(signature = (a, modulus, tau, arc, tol = 1e-10))]
fn phi(a: i64, modulus: i64, tau: &PyTau, arc: &PyArc, tol: f64) -> PyResult<Complex64> {
    let q = series::ComplexPoint::from_tau(tau.0.x(), tau.0.y(), arc.0.h(), arc.0.k()).map_err(err)?;
    series::eval_phi(a, modulus, q, tol).map_err(err)
}

#[pyfunction]
fn main_term(a: i64, modulus: i64, arc: &PyArc, tau: &PyTau) -> PyResult<Complex64> {
    mainterm::main_term(a, modulus, arc.0, &tau.0).map_err(err)
}

#[pyfunction]
fn main_term_g(arc: &PyArc, tau: &PyTau) -> PyResult<Complex64> {
    mainterm::main_term_g(arc.0, &tau.0).map_err(err)
}

/// `(m*, b, b*, K)` for residue `a` mod `M` on the arc `h/k`.
#[pyfunction]
fn residue_data(h: i64, a: i64, k: i64, modulus: i64) -> PyResult<(i64, i64, i64, i64)> {
    let r = mainterm::compute_residue_data(h, a, k, modulus).map_err(err)?;
    Ok((r.m_star, r.b, r.b_star, r.big_k))
}

/// Arc error bound for `log G - 𝔐_G` on arcs of the given case.
#[pyfunction]
fn error_bound(case: u8, x: f64) -> PyResult<f64> {
    let case = match case {
        1 => mainterm::ArcCase::Case1,
        2 => mainterm::ArcCase::Case2,
        3 => mainterm::ArcCase::Case3,
        4 => mainterm::ArcCase::Case4,
        _ => return Err(PyValueError::new_err(format!("case must be 1..=4, got {case}"))),
    };
    mainterm::error_bound_g(case, x).map_err(err)
}

#[pyfunction]
fn farey_sequence(order: u64) -> PyResult<Vec<PyArc>> {
    farey::farey_sequence(order)
        .map(|f| f.fractions().iter().copied().map(PyArc).collect())
        .map_err(err)
}

#[pyfunction]
fn arc_of(t: f64, order: u64) -> PyResult<PyArc> {
    farey::arc_of(t, order).map(PyArc).map_err(err)
}

/// Exact covering verdict; `True` when arcs cover the circle and every
/// neighbour pair satisfies the mediant and determinant conditions.
#[pyfunction]
fn covering_check(order: u64) -> PyResult<bool> {
    farey::covering_check(order).map(|r| r.passed()).map_err(err)
}

/// `(value, error_bound)` of the expansion of `log G` near `q = 1`.
#[pyfunction]
fn log_g_near_plus1(tau: &PyTau) -> PyResult<(Complex64, f64)> {
    nearpole::log_g_near_plus1(&tau.0)
        .map(|a| (a.value, a.err_bound))
        .map_err(err)
}

/// `(value, error_bound)` of the expansion of `log G` near `q = -1`.
#[pyfunction]
fn log_g_near_minus1(tau: &PyTau) -> PyResult<(Complex64, f64)> {
    nearpole::log_g_near_minus1(&tau.0)
        .map(|a| (a.value, a.err_bound))
        .map_err(err)
}

#[pyfunction]
fn hurwitz_zeta(s: f64, alpha: f64) -> PyResult<f64> {
    specfun::hurwitz_zeta(s, alpha).map_err(err)
}

/// `∂ζ(s, α)/∂s` at `s = -1`.
#[pyfunction]
fn hurwitz_zeta_deriv_minus1(alpha: f64) -> PyResult<f64> {
    specfun::hurwitz_zeta_deriv_minus1(alpha).map_err(err)
}

#[pyfunction]
fn digamma(x: f64) -> PyResult<f64> {
    specfun::digamma(x).map_err(err)
}

fn signed_log(v: LogMagnitude) -> (i8, f64) {
    (v.sign(), v.log_abs())
}

/// Error budget for `n`; every magnitude as `(sign, log|value|)`.
#[pyfunction]
fn error_budget<'py>(py: Python<'py>, n: u128) -> PyResult<Bound<'py, PyDict>> {
    let b = asymptotic::error_budget(n).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("n", b.n)?;
    d.set_item("x", b.x)?;
    d.set_item("main1", signed_log(b.main1))?;
    d.set_item("main2", signed_log(b.main2_abs))?;
    d.set_item("e_g1", signed_log(b.e_g1))?;
    d.set_item("e_g2", signed_log(b.e_g2))?;
    d.set_item("g3", signed_log(b.g3))?;
    d.set_item("margin", signed_log(b.margin()))?;
    d.set_item("certified", asymptotic::certificate_from_budget(&b).is_certified())?;
    Ok(d)
}

/// Whether `g(n) > 0` is certified by the analytic bounds.
#[pyfunction]
fn certify(n: u128) -> PyResult<bool> {
    asymptotic::positivity_certificate(n)
        .map(|c| c.is_certified())
        .map_err(err)
}

#[pyfunction]
fn find_certified_threshold(lo: u128, hi: u128) -> PyResult<u128> {
    asymptotic::find_certified_threshold(lo, hi).map_err(err)
}

#[pymodule]
#[pyo3(name = "qcircle")]
fn qcircle_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyArc>()?;
    m.add_class::<PyTau>()?;
    m.add("C_PLUS", nearpole::c_plus())?;
    m.add("C_MINUS", nearpole::c_minus())?;
    m.add_function(wrap_pyfunction!(g_coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(pochhammer_inverse, m)?)?;
    m.add_function(wrap_pyfunction!(first_negative, m)?)?;
    m.add_function(wrap_pyfunction!(log_g, m)?)?;
    m.add_function(wrap_pyfunction!(phi, m)?)?;
    m.add_function(wrap_pyfunction!(main_term, m)?)?;
    m.add_function(wrap_pyfunction!(main_term_g, m)?)?;
    m.add_function(wrap_pyfunction!(residue_data, m)?)?;
    m.add_function(wrap_pyfunction!(error_bound, m)?)?;
    m.add_function(wrap_pyfunction!(farey_sequence, m)?)?;
    m.add_function(wrap_pyfunction!(arc_of, m)?)?;
    m.add_function(wrap_pyfunction!(covering_check, m)?)?;
    m.add_function(wrap_pyfunction!(log_g_near_plus1, m)?)?;
    m.add_function(wrap_pyfunction!(log_g_near_minus1, m)?)?;
    m.add_function(wrap_pyfunction!(hurwitz_zeta, m)?)?;
    m.add_function(wrap_pyfunction!(hurwitz_zeta_deriv_minus1, m)?)?;
    m.add_function(wrap_pyfunction!(digamma, m)?)?;
    m.add_function(wrap_pyfunction!(error_budget, m)?)?;
    m.add_function(wrap_pyfunction!(certify, m)?)?;
    m.add_function(wrap_pyfunction!(find_certified_threshold, m)?)?;
    Ok(())
}
