//! Python bindings. Results come back as the same dictionaries the CLI
//! prints as JSON.

use germcalc::corpus::{self, default_selectors, parse_p3_param, parse_selectors};
use germcalc::germ::{parse_germ, MapGerm, SOURCE_VARS};
use germcalc::oracles::{self, DEFAULT_SEED};
use germcalc::pipeline::{analyze as run_analysis, Analysis, AnalysisError, Options};
use germcalc::poly::{self, parse_poly};
use germcalc::report::{self, TableRow};
use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde_json::Value;

create_exception!(germcalc_py, RejectedGerm, PyValueError, "The germ is outside the class the formulas cover.");

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (v.to_string(),))
}

fn analysis_err(e: AnalysisError) -> PyErr {
    if e.is_rejection() {
        RejectedGerm::new_err(e.reason())
    } else {
        PyRuntimeError::new_err(e.reason())
    }
}

fn resolve(text: &str, p3: &str) -> PyResult<MapGerm> {
    let t = text.trim();
    let src = if t.starts_with('(') {
        t.to_string()
    } else {
        let c = parse_p3_param(p3).map_err(|e| PyValueError::new_err(e.to_string()))?;
        corpus::lookup(t, &c).map(|e| e.germ).ok_or_else(|| RejectedGerm::new_err(format!("unknown germ or corpus name `{t}`")))?
    };
    parse_germ(&src).map_err(|e| RejectedGerm::new_err(e.to_string()))
}

/// A parsed map germ (f1, f2, f3) in the source variables x, y.
#[pyclass(name = "Germ", frozen)]
struct PyGerm {
    inner: MapGerm,
}

#[pymethods]
impl PyGerm {
    #[new]
    #[pyo3(signature = (text, p3_param = "2"))]
    fn new(text: &str, p3_param: &str) -> PyResult<Self> {
        Ok(PyGerm { inner: resolve(text, p3_param)? })
    }

    #[getter]
    fn components(&self) -> Vec<String> {
        self.inner.coords().iter().map(|p| p.to_string()).collect()
    }

    #[pyo3(signature = (oracles = true, seed = DEFAULT_SEED))]
    fn analyze(&self, oracles: bool, seed: u64) -> PyResult<PyAnalysis> {
        run_analysis(&self.inner, &Options { oracles, seed }).map(|a| PyAnalysis { inner: a }).map_err(analysis_err)
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Germ('{}')", self.inner)
    }
}

/// Result of a successful analysis.
#[pyclass(name = "Analysis", frozen)]
struct PyAnalysis {
    inner: Analysis,
}

#[pymethods]
impl PyAnalysis {
    #[getter]
    fn lambda_(&self) -> String {
        self.inner.lambda.to_string()
    }

    #[getter]
    fn qh_type(&self) -> (u64, u64, u64, u64, u64) {
        let q = &self.inner.input_type;
        (q.d1(), q.d2(), q.d3(), q.a, q.b)
    }

    #[getter]
    fn r_i(&self) -> u32 {
        self.inner.invariants.r_i
    }

    #[getter]
    fn r_f(&self) -> u32 {
        self.inner.invariants.r_f
    }

    #[getter]
    fn m(&self) -> i64 {
        self.inner.invariants.m_fd.value
    }

    #[getter]
    #[allow(non_snake_case)]
    fn J(&self) -> i64 {
        self.inner.invariants.j.value
    }

    #[getter]
    #[allow(non_snake_case)]
    fn C(&self) -> i64 {
        self.inner.invariants.c.value
    }

    #[getter]
    #[allow(non_snake_case)]
    fn T(&self) -> i64 {
        self.inner.invariants.t.value
    }

    #[getter]
    fn mu_d(&self) -> i64 {
        self.inner.invariants.mu_d.value
    }

    fn to_dict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &report::analysis_json(&self.inner))
    }

    fn __repr__(&self) -> String {
        let i = &self.inner.invariants;
        format!("Analysis(r_i={}, r_f={}, m={}, J={})", i.r_i, i.r_f, i.m_fd.value, i.j.value)
    }
}

/// Analyzes a germ given as text or corpus name and returns the report dictionary.
#[pyfunction]
#[pyo3(signature = (germ, oracles = true, seed = DEFAULT_SEED, p3_param = "2"))]
fn analyze<'py>(py: Python<'py>, germ: &str, oracles: bool, seed: u64, p3_param: &str) -> PyResult<Bound<'py, PyAny>> {
    let g = resolve(germ, p3_param)?;
    let a = py.detach(|| run_analysis(&g, &Options { oracles, seed })).map_err(analysis_err)?;
    to_py(py, &report::analysis_json(&a))
}

/// Parses a germ and returns it in canonical form.
#[pyfunction]
fn parse(germ: &str) -> PyResult<PyGerm> {
    PyGerm::new(germ, "2")
}

/// Recomputes table rows; `selectors` follow the CLI syntax, e.g. ["B=3..5", "crosscap"].
#[pyfunction]
#[pyo3(signature = (selectors = None, oracles = false, seed = DEFAULT_SEED, p3_param = "2"))]
fn table<'py>(
    py: Python<'py>,
    selectors: Option<Vec<String>>,
    oracles: bool,
    seed: u64,
    p3_param: &str,
) -> PyResult<Bound<'py, PyAny>> {
    let bad = |e: corpus::CorpusError| PyValueError::new_err(e.to_string());
    let p3 = parse_p3_param(p3_param).map_err(bad)?;
    let sel = match selectors {
        Some(s) if !s.is_empty() => parse_selectors(&s).map_err(bad)?,
        _ => default_selectors(),
    };
    let mut entries = Vec::new();
    for s in &sel {
        entries.extend(s.entries(&p3).map_err(bad)?);
    }
    let opts = Options { oracles, seed };
    let rows: Vec<TableRow> = py.detach(|| {
        entries
            .into_iter()
            .map(|entry| {
                let outcome = parse_germ(&entry.germ).map_err(AnalysisError::from).and_then(|g| run_analysis(&g, &opts));
                TableRow { entry, outcome }
            })
            .collect()
    });
    to_py(py, &report::table_json(&rows))
}

fn parse_in(src: &str, vars: &[&str]) -> PyResult<poly::Poly> {
    parse_poly(src, vars).map_err(|e| PyValueError::new_err(e.to_string()))
}

/// Resultant of two polynomials with respect to `var`.
#[pyfunction]
#[pyo3(signature = (p, q, var = "y", variables = vec!["x".to_string(), "y".to_string()]))]
fn resultant(p: &str, q: &str, var: &str, variables: Vec<String>) -> PyResult<String> {
    let vars: Vec<&str> = variables.iter().map(String::as_str).collect();
    let r = poly::resultant(&parse_in(p, &vars)?, &parse_in(q, &vars)?, var).map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(r.to_string())
}

/// Intersection multiplicity at the origin of two plane curves in x, y.
#[pyfunction]
#[pyo3(signature = (p, q, seed = DEFAULT_SEED))]
fn intersection(p: &str, q: &str, seed: u64) -> PyResult<u64> {
    let (p, q) = (parse_in(p, &SOURCE_VARS)?, parse_in(q, &SOURCE_VARS)?);
    oracles::intersection_multiplicity(&p, &q, seed).map_err(|e| PyValueError::new_err(e.to_string()))
}

#[pymodule]
fn germcalc_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("RejectedGerm", m.py().get_type::<RejectedGerm>())?;
    m.add("DEFAULT_SEED", DEFAULT_SEED)?;
    m.add_class::<PyGerm>()?;
    m.add_class::<PyAnalysis>()?;
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    m.add_function(wrap_pyfunction!(parse, m)?)?;
    m.add_function(wrap_pyfunction!(table, m)?)?;
    m.add_function(wrap_pyfunction!(resultant, m)?)?;
    m.add_function(wrap_pyfunction!(intersection, m)?)?;
    Ok(())
}
