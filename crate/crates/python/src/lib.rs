//! Python bindings. Structured results cross the boundary as JSON and are
//! decoded with Python's `json` module, so they arrive as plain dicts and
//! lists.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde_json::Value;

use mlattice::cli::format;
use mlattice::coxeter::{coxeter_arrangement, near_constant_exponents, CoxeterSpec, CoxeterType};
use mlattice::dermod::{self, SaitoVerdict};
use mlattice::explorer::{self, ScanOptions, ScanResult, Window};
use mlattice::lattice::{Multiplicity, ScanBox};
use mlattice::theorems::{self, ThetaTable, Verdict};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_python<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (v.to_string(),))
}

/// A central line arrangement in the plane.
#[pyclass(name = "Arrangement", module = "mlattice_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyArrangement {
    inner: mlattice::Arrangement,
}

#[pymethods]
impl PyArrangement {
    /// Parses the JSON arrangement file format.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        format::parse_arrangement(text)
            .map(|inner| PyArrangement { inner })
            .map_err(value_error)
    }

    /// Lines `a x + b y` over the rationals from integer pairs.
    #[staticmethod]
    fn from_pairs(pairs: Vec<(i64, i64)>) -> PyResult<Self> {
        mlattice::Arrangement::from_int_pairs(&pairs)
            .map(|inner| PyArrangement { inner })
            .map_err(value_error)
    }

    /// One of A1A1, A2, B2, G2 over its default field.
    #[staticmethod]
    fn coxeter(kind: &str) -> PyResult<Self> {
        let kind: CoxeterType = kind.parse().map_err(value_error)?;
        coxeter_arrangement(&CoxeterSpec::new(kind))
            .map(|inner| PyArrangement { inner })
            .map_err(value_error)
    }

    fn to_json(&self) -> String {
        format::write_arrangement(&self.inner)
    }

    #[getter]
    fn field(&self) -> String {
        self.inner.field().to_string()
    }

    #[getter]
    fn hash(&self) -> String {
        self.inner.canonical_hash()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        let forms: Vec<String> = self.inner.forms().iter().map(|f| f.to_string()).collect();
        format!("Arrangement([{}] over {})", forms.join(", "), self.inner.field())
    }
}

fn multiplicity(arr: &mlattice::Arrangement, mu: Vec<u32>) -> PyResult<Multiplicity> {
    if mu.len() != arr.len() {
        return Err(PyValueError::new_err(format!(
            "multiplicity has {} entries, the arrangement has {} lines",
            mu.len(),
            arr.len()
        )));
    }
    Ok(Multiplicity::new(mu))
}

fn solver_error(e: dermod::SolverError) -> PyErr {
    match e {
        dermod::SolverError::InternalInconsistency { .. } => PyRuntimeError::new_err(e.to_string()),
        other => value_error(other),
    }
}

fn exponents_value(r: &dermod::ExponentResult) -> Value {
    let mut v = r.to_json();
    v["theta_text"] = Value::String(r.theta_min.to_string());
    v
}

/// Exponents `(d1, d2)`, `delta` and the minimal generator as a dict.
#[pyfunction]
fn exponents<'py>(py: Python<'py>, arrangement: &PyArrangement, mu: Vec<u32>) -> PyResult<Bound<'py, PyAny>> {
    let mu = multiplicity(&arrangement.inner, mu)?;
    let r = py.detach(|| dermod::exponents(&arrangement.inner, &mu)).map_err(solver_error)?;
    to_python(py, &exponents_value(&r))
}

/// A homogeneous basis as two strings plus whether Saito's criterion
/// accepts it.
#[pyfunction]
fn full_basis(arrangement: &PyArrangement, mu: Vec<u32>) -> PyResult<(String, String, bool)> {
    let arr = &arrangement.inner;
    let mu = multiplicity(arr, mu)?;
    let (a, b) = dermod::full_basis(arr, &mu).map_err(solver_error)?;
    let ok = matches!(dermod::verify_saito(arr, &mu, &a, &b), SaitoVerdict::Accept);
    Ok((a.to_string(), b.to_string(), ok))
}

/// Memoizing solver for one arrangement.
#[pyclass(name = "Solver", module = "mlattice_py", frozen)]
struct PySolver {
    inner: dermod::Solver,
}

#[pymethods]
impl PySolver {
    #[new]
    fn new(arrangement: &PyArrangement) -> Self {
        PySolver {
            inner: dermod::Solver::new(arrangement.inner.clone()),
        }
    }

    fn exponents<'py>(&self, py: Python<'py>, mu: Vec<u32>) -> PyResult<Bound<'py, PyAny>> {
        let mu = multiplicity(self.inner.arrangement(), mu)?;
        let r = self.inner.exponents(&mu).map_err(solver_error)?;
        to_python(py, &exponents_value(&r))
    }

    fn delta(&self, mu: Vec<u32>) -> PyResult<usize> {
        let mu = multiplicity(self.inner.arrangement(), mu)?;
        self.inner.delta(&mu).map_err(solver_error)
    }

    fn __len__(&self) -> usize {
        self.inner.memo_len()
    }
}

/// Exponents over a window of multiplicities.
#[pyclass(name = "Scan", module = "mlattice_py", frozen)]
struct PyScan {
    inner: ScanResult,
}

#[pymethods]
impl PyScan {
    /// Loads a scan written by `to_json` or the command line.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let v: Value = serde_json::from_str(text).map_err(value_error)?;
        ScanResult::from_json(&v).map(|inner| PyScan { inner }).map_err(value_error)
    }

    fn to_json(&self) -> String {
        self.inner.to_json_string()
    }

    fn delta(&self, mu: Vec<u32>) -> Option<u64> {
        self.inner.delta(&Multiplicity::new(mu))
    }

    /// Components of the support with their classification.
    fn components<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let comps = explorer::components(&self.inner);
        to_python(py, &serde_json::to_value(&comps).map_err(value_error)?)
    }

    /// Centres of the certified components.
    fn centers<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let comps = explorer::components(&self.inner);
        to_python(py, &serde_json::to_value(explorer::centers(&comps)).map_err(value_error)?)
    }

    fn to_dot(&self) -> String {
        explorer::to_dot(&self.inner, &explorer::components(&self.inner))
    }

    fn to_csv(&self) -> String {
        explorer::to_csv(&self.inner, &explorer::components(&self.inner))
    }

    /// Structural checks; returns a list of verdict dicts.
    #[pyo3(signature = (jobs = 0))]
    fn verify<'py>(&self, py: Python<'py>, jobs: usize) -> PyResult<Bound<'py, PyAny>> {
        let s = &self.inner;
        let verdicts = py
            .detach(|| -> Result<Vec<Verdict>, theorems::TheoremError> {
                let comps = explorer::components(s);
                let thetas = ThetaTable::for_scan(s, jobs)?;
                Ok(vec![
                    theorems::check_covering_steps(s),
                    theorems::check_scan_invariants(s),
                    theorems::check_isolated_zeros(s),
                    theorems::check_ball_structure(s, &comps),
                    theorems::check_basis_step_and_path(s, &comps, &thetas),
                    theorems::check_independency(&comps, &thetas),
                    theorems::check_saito_bases(s, &comps, &thetas, jobs)?,
                ])
            })
            .map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
        let list: Vec<Value> = verdicts.iter().map(Verdict::to_json).collect();
        to_python(py, &Value::Array(list))
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }
}

/// Scans the box `[0, b1] x ... x [0, bn]`.
#[pyfunction]
#[pyo3(signature = (arrangement, bounds, jobs = 0))]
fn scan_box(py: Python<'_>, arrangement: &PyArrangement, bounds: Vec<u32>, jobs: usize) -> PyResult<PyScan> {
    let window = Window::Box(ScanBox::new(bounds));
    let options = ScanOptions {
        jobs,
        balanced_only: false,
    };
    py.detach(|| explorer::scan(&arrangement.inner, &window, &options, None))
        .map(|inner| PyScan { inner })
        .map_err(value_error)
}

/// Scans the closed L1 ball of `radius` around `center`.
#[pyfunction]
#[pyo3(signature = (arrangement, center, radius, jobs = 0))]
fn scan_ball(
    py: Python<'_>,
    arrangement: &PyArrangement,
    center: Vec<u32>,
    radius: u64,
    jobs: usize,
) -> PyResult<PyScan> {
    let window = Window::Ball {
        center: Multiplicity::new(center),
        radius,
    };
    let options = ScanOptions {
        jobs,
        balanced_only: false,
    };
    py.detach(|| explorer::scan(&arrangement.inner, &window, &options, None))
        .map(|inner| PyScan { inner })
        .map_err(value_error)
}

/// Exponents at `(2k+1, ..., 2k+1) + offset` for B2 or G2 with the
/// predicted and printed formulas.
#[pyfunction]
fn near_constant<'py>(py: Python<'py>, kind: &str, k: u32, offset: Vec<i64>) -> PyResult<Bound<'py, PyAny>> {
    let kind: CoxeterType = kind.parse().map_err(value_error)?;
    let arr = coxeter_arrangement(&CoxeterSpec::new(kind)).map_err(value_error)?;
    let solver = dermod::Solver::new(arr);
    let r = near_constant_exponents(&solver, kind, k, &offset).map_err(value_error)?;
    to_python(py, &r.to_json())
}

#[pymodule]
pub fn mlattice_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyArrangement>()?;
    m.add_class::<PySolver>()?;
    m.add_class::<PyScan>()?;
    m.add_function(wrap_pyfunction!(exponents, m)?)?;
    m.add_function(wrap_pyfunction!(full_basis, m)?)?;
    m.add_function(wrap_pyfunction!(scan_box, m)?)?;
    m.add_function(wrap_pyfunction!(scan_ball, m)?)?;
    m.add_function(wrap_pyfunction!(near_constant, m)?)?;
    Ok(())
}
