//! Python module `triadic`.
//!
//! Triads are accepted either as `Triad` objects or as `(t12, t13, t23)`
//! tuples. Reports come back as plain dicts with the same layout as the
//! CLI's JSON output; errors raise `ValueError`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyTuple;
use serde::Serialize;

use triadic_core::analysis;
use triadic_core::cli::{audit_document, concordance_document, independence_document};
use triadic_core::indices;
use triadic_core::report::to_fixed_json;
use triadic_core::{AuditConfig, Axiom, Permutation};

fn err(e: triadic_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<T: Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let text = to_fixed_json(value).map_err(err)?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

fn config(samples: usize, seed: u64) -> PyResult<AuditConfig> {
    let cfg = AuditConfig::default().with_samples(samples).with_seed(seed);
    cfg.validate().map_err(err)?;
    Ok(cfg)
}

fn index(id: &str) -> PyResult<&'static indices::IndexDescriptor> {
    indices::lookup(id).map_err(err)
}

fn axiom(name: &str) -> PyResult<Axiom> {
    name.parse().map_err(err)
}

#[pyclass(name = "Triad", module = "triadic", frozen, eq, skip_from_py_object)]
#[derive(Clone, Copy, PartialEq)]
pub struct PyTriad(pub triadic_core::Triad);

fn triad_arg(obj: &Bound<'_, PyAny>) -> PyResult<triadic_core::Triad> {
    if let Ok(t) = obj.cast::<PyTriad>() {
        return Ok(t.get().0);
    }
    let (a, b, c): (f64, f64, f64) = obj
        .extract()
        .map_err(|_| PyValueError::new_err("expected a Triad or a (t12, t13, t23) tuple"))?;
    triadic_core::Triad::new(a, b, c).map_err(err)
}

#[pymethods]
impl PyTriad {
    #[new]
    fn new(t12: f64, t13: f64, t23: f64) -> PyResult<Self> {
        triadic_core::Triad::new(t12, t13, t23).map(PyTriad).map_err(err)
    }

    /// Consistent triad with entries `w_i / w_j`.
    #[staticmethod]
    fn from_weights(w1: f64, w2: f64, w3: f64) -> PyResult<Self> {
        triadic_core::Triad::from_weights(w1, w2, w3).map(PyTriad).map_err(err)
    }

    #[getter]
    fn t12(&self) -> f64 {
        self.0.t12()
    }

    #[getter]
    fn t13(&self) -> f64 {
        self.0.t13()
    }

    #[getter]
    fn t23(&self) -> f64 {
        self.0.t23()
    }

    fn consistency_ratio(&self) -> f64 {
        self.0.consistency_ratio()
    }

    fn is_consistent(&self) -> bool {
        self.0.is_consistent()
    }

    #[allow(clippy::wrong_self_convention)]
    fn to_rows(&self) -> [[f64; 3]; 3] {
        self.0.to_rows()
    }

    fn transpose(&self) -> Self {
        PyTriad(self.0.transpose())
    }

    fn power(&self, b: f64) -> PyResult<Self> {
        self.0.power(b).map(PyTriad).map_err(err)
    }

    fn scale(&self, k: f64) -> PyResult<Self> {
        self.0.scale(k).map(PyTriad).map_err(err)
    }

    fn hta_reduce(&self) -> Self {
        PyTriad(self.0.hta_reduce())
    }

    /// Relabel alternatives by a 1-based permutation such as `[3, 2, 1]`.
    fn permuted(&self, perm: Vec<usize>) -> PyResult<Self> {
        let p = Permutation::from_one_based(&perm).map_err(err)?;
        self.0.permuted(&p).map(PyTriad).map_err(err)
    }

    /// `{"ratio": r, "trace": [...]}` reducing the triad to `(1; r; 1)`.
    fn canonicalize(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, &self.0.canonicalize())
    }

    fn __repr__(&self) -> String {
        format!("Triad({:?}, {:?}, {:?})", self.0.t12(), self.0.t13(), self.0.t23())
    }

    fn __getnewargs__<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyTuple>> {
        PyTuple::new(py, [self.0.t12(), self.0.t13(), self.0.t23()])
    }
}

#[pyfunction]
fn natural_index(t: &Bound<'_, PyAny>) -> PyResult<f64> {
    Ok(indices::natural_index(&triad_arg(t)?))
}

#[pyfunction]
fn scale_dependent_index(t: &Bound<'_, PyAny>) -> PyResult<f64> {
    Ok(indices::scale_dependent_index(&triad_arg(t)?))
}

#[pyfunction]
fn koczkodaj_index(t: &Bound<'_, PyAny>) -> PyResult<f64> {
    Ok(indices::koczkodaj_index(&triad_arg(t)?))
}

#[pyfunction]
fn saaty_ci(t: &Bound<'_, PyAny>) -> PyResult<f64> {
    Ok(indices::saaty_ci(&triad_arg(t)?))
}

#[pyfunction]
fn saaty_lambda_max(t: &Bound<'_, PyAny>) -> PyResult<f64> {
    Ok(indices::saaty_lambda_max(&triad_arg(t)?))
}

/// Evaluate a catalog index by id.
#[pyfunction]
fn eval_index(id: &str, t: &Bound<'_, PyAny>) -> PyResult<f64> {
    indices::eval_catalog(id, &triad_arg(t)?).map_err(err)
}

#[pyfunction]
fn index_ids() -> Vec<String> {
    indices::index_ids()
}

#[pyfunction]
fn axiom_names() -> Vec<&'static str> {
    Axiom::ALL.iter().map(|a| a.as_str()).collect()
}

/// Audit report dict for `index` over `axioms` ("all" or "URS,SI,...").
#[pyfunction]
#[pyo3(signature = (index_id, axioms = "all", samples = 1000, seed = 42))]
fn audit(py: Python<'_>, index_id: &str, axioms: &str, samples: usize, seed: u64) -> PyResult<Py<PyAny>> {
    let list = Axiom::parse_list(axioms).map_err(err)?;
    let cfg = config(samples, seed)?;
    let report = py.detach(|| triadic_core::audit(index(index_id)?, &list, &cfg).map_err(err))?;
    to_py(py, &audit_document(&report, false))
}

#[pyfunction]
#[pyo3(signature = (index_id, axiom_name, samples = 1000, seed = 42))]
fn check_axiom(py: Python<'_>, index_id: &str, axiom_name: &str, samples: usize, seed: u64) -> PyResult<Py<PyAny>> {
    let a = axiom(axiom_name)?;
    let cfg = config(samples, seed)?;
    let verdict = py.detach(|| triadic_core::check_axiom(index(index_id)?, a, &cfg).map_err(err))?;
    to_py(py, &verdict)
}

#[pyfunction]
#[pyo3(signature = (samples = 1000, seed = 42))]
fn independence_table(py: Python<'_>, samples: usize, seed: u64) -> PyResult<Py<PyAny>> {
    let cfg = config(samples, seed)?;
    let table = py.detach(|| analysis::independence_table(&cfg).map_err(err))?;
    to_py(py, &independence_document(&table, &cfg))
}

#[pyfunction]
#[pyo3(signature = (index_a, index_b, samples = 1000, seed = 42))]
fn ranking_concordance(py: Python<'_>, index_a: &str, index_b: &str, samples: usize, seed: u64) -> PyResult<Py<PyAny>> {
    let cfg = config(samples, seed)?;
    let (a, b) = (index(index_a)?, index(index_b)?);
    let stats = py.detach(|| analysis::ranking_concordance(a, b, &cfg).map_err(err))?;
    to_py(py, &concordance_document(&stats, &cfg))
}

#[pyfunction]
#[pyo3(signature = (index_id, samples = 1000, seed = 42))]
fn characterization_check(py: Python<'_>, index_id: &str, samples: usize, seed: u64) -> PyResult<Py<PyAny>> {
    let cfg = config(samples, seed)?;
    let i = index(index_id)?;
    let c = py.detach(|| analysis::characterization_check(i, &cfg).map_err(err))?;
    to_py(py, &c)
}

#[pyfunction]
#[pyo3(signature = (premises, conclusion, index_id, samples = 1000, seed = 42))]
fn implication_audit(
    py: Python<'_>,
    premises: Vec<String>,
    conclusion: &str,
    index_id: &str,
    samples: usize,
    seed: u64,
) -> PyResult<Py<PyAny>> {
    let premises = premises.iter().map(|p| axiom(p)).collect::<PyResult<Vec<_>>>()?;
    let conclusion = axiom(conclusion)?;
    let cfg = config(samples, seed)?;
    let i = index(index_id)?;
    let v = py.detach(|| analysis::implication_audit(&premises, conclusion, i, &cfg).map_err(err))?;
    to_py(py, &v)
}

/// Read a JSON or CSV matrix file holding a triad.
#[pyfunction]
#[pyo3(signature = (path, complete_lower = false))]
fn read_triad(path: &str, complete_lower: bool) -> PyResult<PyTriad> {
    let completion = if complete_lower {
        triadic_core::Completion::CompleteLower
    } else {
        triadic_core::Completion::Validate
    };
    let file = triadic_core::io::MatrixFile::read(path.as_ref(), completion).map_err(err)?;
    file.triad().map(PyTriad).map_err(err)
}

#[pymodule]
pub fn triadic(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyTriad>()?;
    m.add_function(wrap_pyfunction!(natural_index, m)?)?;
    m.add_function(wrap_pyfunction!(scale_dependent_index, m)?)?;
    m.add_function(wrap_pyfunction!(koczkodaj_index, m)?)?;
    m.add_function(wrap_pyfunction!(saaty_ci, m)?)?;
    m.add_function(wrap_pyfunction!(saaty_lambda_max, m)?)?;
    m.add_function(wrap_pyfunction!(eval_index, m)?)?;
    m.add_function(wrap_pyfunction!(index_ids, m)?)?;
    m.add_function(wrap_pyfunction!(axiom_names, m)?)?;
    m.add_function(wrap_pyfunction!(audit, m)?)?;
    m.add_function(wrap_pyfunction!(check_axiom, m)?)?;
    m.add_function(wrap_pyfunction!(independence_table, m)?)?;
    m.add_function(wrap_pyfunction!(ranking_concordance, m)?)?;
    m.add_function(wrap_pyfunction!(characterization_check, m)?)?;
    m.add_function(wrap_pyfunction!(implication_audit, m)?)?;
    m.add_function(wrap_pyfunction!(read_triad, m)?)?;
    Ok(())
}
