//! Python bindings for the `wassdeg` crate.
//!
//! Exact numbers cross the boundary as `fractions.Fraction`; structured results
//! arrive as plain dicts decoded from the same JSON the CLI writes.

use std::path::PathBuf;
use std::time::Duration;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyList;

use wassdeg::exact::Rational;
use wassdeg::groebner::{projective_dimension_and_degree, Arithmetic, Budget};
use wassdeg::metric::{FiniteMetric, MetricSpec};
use wassdeg::polar::{fixture_multidegree, formula_multidegree, polar_degrees_slicing, ConormalRoute, SlicingOptions};
use wassdeg::polytope::{face_lattice, wasserstein_ball, Face, FaceLattice};
use wassdeg::toric::{IdealRoute, ModelSpec, ToricModel};
use wassdeg::wdeg::{
    degree_table_on_lattice, distance_candidate as candidate, wasserstein_degree as degree, wasserstein_lp,
    FaceFilter, SimplexPoint, TableOptions, WdegError, WdegOptions,
};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn wdeg_err(e: WdegError) -> PyErr {
    match e {
        WdegError::DimensionMismatch { .. } | WdegError::InvalidPoint(_) => value_err(e),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn budget(timeout: Option<f64>) -> Budget {
    timeout.map_or_else(Budget::unlimited, |s| Budget::with_timeout(Duration::from_secs_f64(s)))
}

/// Accepts anything whose `str()` is an integer, decimal or `p/q`.
fn rational(obj: &Bound<'_, PyAny>) -> PyResult<Rational> {
    obj.str()?.to_cow()?.parse().map_err(value_err)
}

fn rationals(objs: &[Bound<'_, PyAny>]) -> PyResult<Vec<Rational>> {
    objs.iter().map(rational).collect()
}

fn fraction<'py>(py: Python<'py>, r: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((r.to_string(),))
}

fn from_json<'py>(py: Python<'py>, s: &str) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (s,))
}

fn arithmetic(name: &str) -> PyResult<Arithmetic> {
    match name {
        "modular" => Ok(Arithmetic::Modular),
        "exact" => Ok(Arithmetic::Exact),
        _ => Err(value_err(format!("unknown arithmetic {name:?}"))),
    }
}

fn simplex_point(mu: Option<Vec<Bound<'_, PyAny>>>, n: usize, seed: u64) -> PyResult<SimplexPoint> {
    match mu {
        None => Ok(SimplexPoint::random(seed, n)),
        Some(v) => {
            let v = rationals(&v)?;
            if v.len() != n {
                return Err(value_err(format!("point has {} entries, expected {n}", v.len())));
            }
            SimplexPoint::new(v).map_err(wdeg_err)
        }
    }
}

/// A finite metric space.
#[pyclass(name = "Metric", module = "wassdeg", frozen)]
struct PyMetric {
    inner: FiniteMetric,
    label: String,
}

#[pymethods]
impl PyMetric {
    /// `spec` is shorthand such as `"hamming:2,2,2"` or a JSON object.
    #[new]
    fn new(spec: &str) -> PyResult<Self> {
        let spec = match MetricSpec::parse_short(spec) {
            Some(s) => s,
            None => serde_json::from_str(spec).map_err(value_err)?,
        };
        let inner = spec.build().map_err(value_err)?;
        Ok(PyMetric { inner, label: spec.label() })
    }

    /// Metric from a distance matrix of ints, fractions or strings.
    #[staticmethod]
    fn from_matrix(d: Vec<Vec<Bound<'_, PyAny>>>) -> PyResult<Self> {
        let d = d.iter().map(|row| rationals(row)).collect::<PyResult<Vec<_>>>()?;
        let spec = MetricSpec::Explicit { d };
        let inner = spec.build().map_err(value_err)?;
        Ok(PyMetric { inner, label: spec.label() })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn label(&self) -> &str {
        &self.label
    }

    fn distance<'py>(&self, py: Python<'py>, i: usize, j: usize) -> PyResult<Bound<'py, PyAny>> {
        if i >= self.n() || j >= self.n() {
            return Err(value_err("state out of range"));
        }
        fraction(py, self.inner.dist(i, j))
    }

    /// Face lattice of the Wasserstein ball.
    fn ball(&self) -> PyBall {
        PyBall { lattice: face_lattice(&wasserstein_ball(&self.inner)) }
    }

    /// Exact Wasserstein distance between two distributions.
    fn wasserstein<'py>(
        &self,
        py: Python<'py>,
        mu: Vec<Bound<'py, PyAny>>,
        nu: Vec<Bound<'py, PyAny>>,
    ) -> PyResult<Bound<'py, PyAny>> {
        let (mu, nu) = (simplex_point(Some(mu), self.n(), 0)?, simplex_point(Some(nu), self.n(), 0)?);
        let w = wasserstein_lp(mu.coords(), nu.coords(), &self.inner).map_err(wdeg_err)?;
        fraction(py, &w)
    }

    fn __repr__(&self) -> String {
        format!("Metric({:?})", self.label)
    }
}

/// Face lattice of a Wasserstein ball.
#[pyclass(name = "Ball", module = "wassdeg", frozen)]
struct PyBall {
    lattice: FaceLattice,
}

impl PyBall {
    fn face(&self, dim: usize, index: usize) -> PyResult<&Face> {
        if dim >= self.lattice.dim() {
            return Err(value_err(format!("faces have dimension below {}", self.lattice.dim())));
        }
        self.lattice.faces(dim).get(index).ok_or_else(|| value_err(format!("no face {index} of dimension {dim}")))
    }
}

#[pymethods]
impl PyBall {
    #[getter]
    fn dim(&self) -> usize {
        self.lattice.dim()
    }

    #[getter]
    fn f_vector(&self) -> Vec<usize> {
        self.lattice.f_vector()
    }

    /// Vertices as lists of fractions.
    fn vertices<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyList>> {
        let rows = self
            .lattice
            .polytope()
            .vertices
            .iter()
            .map(|v| PyList::new(py, v.iter().map(|x| fraction(py, x)).collect::<PyResult<Vec<_>>>()?))
            .collect::<PyResult<Vec<_>>>()?;
        PyList::new(py, rows)
    }

    fn num_faces(&self, dim: usize) -> usize {
        if dim < self.lattice.dim() {
            self.lattice.faces(dim).len()
        } else {
            0
        }
    }

    /// Vertices, functional and span of one face.
    fn face_info<'py>(&self, py: Python<'py>, dim: usize, index: usize) -> PyResult<Bound<'py, PyAny>> {
        let face = self.face(dim, index)?;
        from_json(py, &serde_json::to_string(&self.lattice.face_json(face)).unwrap())
    }
}

/// A toric model with its ideal.
#[pyclass(name = "Model", module = "wassdeg", frozen)]
struct PyModel {
    inner: ToricModel,
}

#[pymethods]
impl PyModel {
    /// `spec` is a JSON object such as `{"type": "scroll", "n": [1, 2]}`.
    #[new]
    #[pyo3(signature = (spec, timeout=None))]
    fn new(spec: &str, timeout: Option<f64>) -> PyResult<Self> {
        let spec: ModelSpec = serde_json::from_str(spec).map_err(value_err)?;
        Ok(PyModel { inner: spec.build(&budget(timeout)).map_err(value_err)? })
    }

    /// Model of an integer matrix with optional scaling.
    #[staticmethod]
    #[pyo3(signature = (a, scaling=None, route="lattice", timeout=None))]
    fn from_matrix(
        a: Vec<Vec<i64>>,
        scaling: Option<Vec<Bound<'_, PyAny>>>,
        route: &str,
        timeout: Option<f64>,
    ) -> PyResult<Self> {
        let route = match route {
            "lattice" => IdealRoute::Lattice,
            "elimination" => IdealRoute::Elimination,
            _ => return Err(value_err(format!("unknown route {route:?}"))),
        };
        let scaling = scaling.map(|s| rationals(&s)).transpose()?;
        let inner = ToricModel::from_matrix(a, scaling, route, &budget(timeout)).map_err(value_err)?;
        Ok(PyModel { inner })
    }

    #[getter]
    fn label(&self) -> &str {
        &self.inner.label
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    /// Projective dimension.
    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim_projective
    }

    #[getter]
    fn a(&self) -> Vec<Vec<i64>> {
        self.inner.a.clone()
    }

    #[getter]
    fn scaling<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyAny>>> {
        self.inner.scaling.iter().map(|x| fraction(py, x)).collect()
    }

    /// Generators of the ideal as strings.
    fn ideal(&self) -> Vec<String> {
        self.inner.ideal.gens().iter().map(|g| self.inner.ring().display(g)).collect()
    }

    /// `(dimension, degree)` of the projective variety.
    #[pyo3(signature = (timeout=None))]
    fn degree(&self, timeout: Option<f64>) -> PyResult<(i64, u128)> {
        projective_dimension_and_degree(&self.inner.ideal, &budget(timeout)).map_err(|e| PyRuntimeError::new_err(e.to_string()))
    }

    /// Conormal multidegree as a dict, or `None` when the method does not apply.
    #[pyo3(signature = (method="formula", seed=0, route="jacobian", arithmetic="modular", timeout=None))]
    fn polar_degrees<'py>(
        &self,
        py: Python<'py>,
        method: &str,
        seed: u64,
        route: &str,
        arithmetic: &str,
        timeout: Option<f64>,
    ) -> PyResult<Option<Bound<'py, PyAny>>> {
        let md = match method {
            "formula" => formula_multidegree(&self.inner),
            "fixture" => fixture_multidegree(&self.inner.label),
            "slicing" => {
                let route = match route {
                    "jacobian" => ConormalRoute::Jacobian,
                    "toric" => ConormalRoute::Toric,
                    _ => return Err(value_err(format!("unknown route {route:?}"))),
                };
                let opts = SlicingOptions { seed, route, arithmetic: self::arithmetic(arithmetic)?, budget: budget(timeout) };
                Some(polar_degrees_slicing(&self.inner, &opts).map_err(|e| PyRuntimeError::new_err(e.to_string()))?)
            }
            _ => return Err(value_err(format!("unknown method {method:?}"))),
        };
        let Some(md) = md else { return Ok(None) };
        let dim = self.inner.dim_projective;
        let v = serde_json::json!({
            "delta": md.delta,
            "polynomial": md.to_string(),
            "polar_degrees": md.polar_degrees(dim),
        });
        from_json(py, &v.to_string()).map(Some)
    }

    fn __repr__(&self) -> String {
        format!("Model({:?}, n={}, dim={})", self.inner.label, self.inner.n(), self.inner.dim_projective)
    }
}

fn wdeg_options(seed: u64, arithmetic: &str, saturate_singular: bool, timeout: Option<f64>) -> PyResult<WdegOptions> {
    Ok(WdegOptions {
        arithmetic: self::arithmetic(arithmetic)?,
        saturate_singular,
        seed,
        face_timeout: timeout.map(Duration::from_secs_f64),
        max_steps: None,
    })
}

fn check_sizes(model: &PyModel, n: usize) -> PyResult<()> {
    if model.inner.n() != n {
        return Err(value_err(format!("model has {} coordinates, metric has {n} states", model.inner.n())));
    }
    Ok(())
}

/// Wasserstein degree of one face, as `"3"`, `"-"` or `"timeout"`.
#[pyfunction]
#[pyo3(signature = (model, ball, dim, index, mu=None, seed=1, arithmetic="modular", saturate_singular=false, timeout=None))]
#[allow(clippy::too_many_arguments)]
fn wasserstein_degree(
    model: &PyModel,
    ball: &PyBall,
    dim: usize,
    index: usize,
    mu: Option<Vec<Bound<'_, PyAny>>>,
    seed: u64,
    arithmetic: &str,
    saturate_singular: bool,
    timeout: Option<f64>,
) -> PyResult<String> {
    let face = ball.face(dim, index)?;
    let mu = simplex_point(mu, model.inner.n(), seed)?;
    let opts = wdeg_options(seed, arithmetic, saturate_singular, timeout)?;
    Ok(degree(&model.inner, face, &mu, &opts).map_err(wdeg_err)?.to_string())
}

/// Degree table over the faces of the ball of `metric`.
#[pyfunction]
#[pyo3(signature = (model, metric, mu=None, seed=1, dims=vec![], codims=vec![], jobs=0, journal=None, arithmetic="modular", timeout=None))]
#[allow(clippy::too_many_arguments)]
fn degree_table<'py>(
    py: Python<'py>,
    model: &PyModel,
    metric: &PyMetric,
    mu: Option<Vec<Bound<'py, PyAny>>>,
    seed: u64,
    dims: Vec<usize>,
    codims: Vec<usize>,
    jobs: usize,
    journal: Option<PathBuf>,
    arithmetic: &str,
    timeout: Option<f64>,
) -> PyResult<Bound<'py, PyAny>> {
    check_sizes(model, metric.n())?;
    let mu = simplex_point(mu, model.inner.n(), seed)?;
    let opts = TableOptions {
        filter: FaceFilter { dims, codims },
        wdeg: wdeg_options(seed, arithmetic, false, timeout)?,
        jobs,
        journal,
    };
    let lattice = face_lattice(&wasserstein_ball(&metric.inner));
    let (model, label) = (&model.inner, metric.label.as_str());
    let table = py.detach(|| degree_table_on_lattice(model, &lattice, label, &mu, &opts)).map_err(wdeg_err)?;
    from_json(py, &table.to_json())
}

/// Best real critical point over the chosen faces.
#[pyfunction]
#[pyo3(signature = (model, metric, mu, dims=None, seed=1))]
fn distance_candidate<'py>(
    py: Python<'py>,
    model: &PyModel,
    metric: &PyMetric,
    mu: Vec<Bound<'py, PyAny>>,
    dims: Option<Vec<usize>>,
    seed: u64,
) -> PyResult<Bound<'py, PyAny>> {
    check_sizes(model, metric.n())?;
    let mu = simplex_point(Some(mu), model.inner.n(), seed)?;
    let lattice = face_lattice(&wasserstein_ball(&metric.inner));
    let faces: Vec<(usize, usize, &Face)> = (0..lattice.dim())
        .filter(|d| dims.as_ref().is_none_or(|ds| ds.contains(d)))
        .flat_map(|d| lattice.faces(d).iter().enumerate().map(move |(k, f)| (d, k, f)))
        .collect();
    let opts = wdeg_options(seed, "modular", false, None)?;
    let c = py.detach(|| candidate(&model.inner, &metric.inner, &mu, &faces, &opts)).map_err(wdeg_err)?;
    from_json(py, &serde_json::to_string(&c).unwrap())
}

/// Module initializer, public so embedded interpreters can register it.
#[pymodule]
#[pyo3(name = "wassdeg")]
pub fn wassdeg_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMetric>()?;
    m.add_class::<PyBall>()?;
    m.add_class::<PyModel>()?;
    m.add_function(wrap_pyfunction!(wasserstein_degree, m)?)?;
    m.add_function(wrap_pyfunction!(degree_table, m)?)?;
    m.add_function(wrap_pyfunction!(distance_candidate, m)?)?;
    Ok(())
}
