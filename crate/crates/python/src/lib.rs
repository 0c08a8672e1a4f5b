//! Python bindings. Distributions are built from the same expression syntax
//! as the command line (`gamma(3, 1.5)`, `gconv(1:1, 2:2)`, ...); reports
//! come back as JSON text identical to the CLI output.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use storder_core::compare::{self, CompareOptions};
use storder_core::criteria;
use storder_core::dist::{self, GammaConvolutionSpec, NegBinConvolutionSpec, PoissonBinomialSpec, DEFAULT_TAIL_TOL};
use storder_core::expr::DistSpec;
use storder_core::oracle::{self, OracleConfig, Relation, DEFAULT_GRID_POINTS, DEFAULT_TOL};

fn py_err(e: storder_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn relation(name: &str) -> PyResult<Relation> {
    name.parse().map_err(py_err)
}

/// A distribution built from an expression.
#[pyclass(name = "Distribution", module = "storder", frozen)]
struct PyDistribution {
    spec: DistSpec,
    inner: dist::Distribution,
}

#[pymethods]
impl PyDistribution {
    #[new]
    #[pyo3(signature = (expr, tail_tol = DEFAULT_TAIL_TOL))]
    fn new(expr: &str, tail_tol: f64) -> PyResult<Self> {
        let spec = DistSpec::parse(expr).map_err(py_err)?;
        let inner = spec.build(tail_tol).map_err(py_err)?;
        Ok(Self { spec, inner })
    }

    /// Canonical expression.
    #[getter]
    fn expr(&self) -> String {
        self.spec.to_string()
    }

    #[getter]
    fn is_discrete(&self) -> bool {
        self.inner.is_discrete()
    }

    /// pmf or pdf.
    fn density(&self, x: f64) -> PyResult<f64> {
        self.inner.density(x).map_err(py_err)
    }

    fn cdf(&self, x: f64) -> PyResult<f64> {
        self.inner.cdf(x).map_err(py_err)
    }

    fn survival(&self, x: f64) -> PyResult<f64> {
        self.inner.survival(x).map_err(py_err)
    }

    fn hazard(&self, x: f64) -> PyResult<f64> {
        self.inner.hazard(x).map_err(py_err)
    }

    fn reversed_hazard(&self, x: f64) -> PyResult<f64> {
        self.inner.reversed_hazard(x).map_err(py_err)
    }

    fn mean(&self) -> f64 {
        self.inner.mean()
    }

    fn __repr__(&self) -> String {
        format!("Distribution('{}')", self.spec)
    }
}

/// Result of one grid-oracle check.
#[pyclass(name = "OrderVerdict", module = "storder", frozen, get_all)]
struct PyOrderVerdict {
    relation: String,
    holds: bool,
    marginal: bool,
    tolerance: f64,
    points_checked: usize,
    max_excess: f64,
    /// Failing points, or `None` when the order holds.
    witness: Option<Vec<f64>>,
}

#[pymethods]
impl PyOrderVerdict {
    fn __bool__(&self) -> bool {
        self.holds
    }

    fn __repr__(&self) -> String {
        format!("OrderVerdict(relation='{}', holds={})", self.relation, if self.holds { "True" } else { "False" })
    }
}

/// Decides `x ≤ y` in `relation` (st, hr, rh, lr, lc, disp, star) on the
/// default grid.
#[pyfunction]
#[pyo3(signature = (relation_name, x, y, tol = DEFAULT_TOL, grid_points = DEFAULT_GRID_POINTS))]
fn check(
    relation_name: &str,
    x: &PyDistribution,
    y: &PyDistribution,
    tol: f64,
    grid_points: usize,
) -> PyResult<PyOrderVerdict> {
    let cfg = OracleConfig {
        tol,
        grid_points,
        ..OracleConfig::default()
    };
    let v = oracle::check(relation(relation_name)?, &x.inner, &y.inner, &cfg).map_err(py_err)?;
    Ok(PyOrderVerdict {
        relation: v.relation.to_string(),
        holds: v.holds,
        marginal: v.marginal,
        tolerance: v.tolerance,
        points_checked: v.points_checked,
        max_excess: v.max_excess,
        witness: v.witness.map(|w| w.points),
    })
}

/// Full comparison report as JSON text.
#[pyfunction]
#[pyo3(signature = (x, y, orders = None, tol = DEFAULT_TOL, grid_points = DEFAULT_GRID_POINTS, tail_tol = DEFAULT_TAIL_TOL))]
fn compare_report(
    x: &str,
    y: &str,
    orders: Option<Vec<String>>,
    tol: f64,
    grid_points: usize,
    tail_tol: f64,
) -> PyResult<String> {
    let x = DistSpec::parse(x).map_err(py_err)?;
    let y = DistSpec::parse(y).map_err(py_err)?;
    let orders = orders
        .unwrap_or_default()
        .iter()
        .map(|s| relation(s))
        .collect::<PyResult<Vec<_>>>()?;
    let opts = CompareOptions {
        tol,
        grid_points,
        tail_tol,
        ..CompareOptions::default()
    };
    Ok(compare::compare(&x, &y, &orders, &opts).map_err(py_err)?.to_json())
}

/// Threshold table of a gconv, nbconv or pbin expression as JSON text.
#[pyfunction]
fn threshold_report(expr: &str) -> PyResult<String> {
    let spec = DistSpec::parse(expr).map_err(py_err)?;
    Ok(compare::thresholds(&spec).map_err(py_err)?.to_json())
}

/// Canonical form of an expression.
#[pyfunction]
fn canonical(expr: &str) -> PyResult<String> {
    Ok(DistSpec::parse(expr).map_err(py_err)?.to_string())
}

/// `(st/hr, lr/rh)` upper bounds on β for `Gam(α₊, β)` against the
/// convolution `Σ βᵢ Gam(αᵢ, 1)`.
#[pyfunction]
fn gamma_convolution_thresholds(shapes: Vec<f64>, scales: Vec<f64>) -> PyResult<(f64, f64)> {
    let spec = GammaConvolutionSpec::new(shapes, scales).map_err(py_err)?;
    let t = criteria::gamma_convolution_thresholds(&spec);
    Ok((t.st_hr, t.lr_rh))
}

/// `(st/hr, lr/rh)` lower bounds on p for `NB(k₊, p)` against `Σ NB(kᵢ, pᵢ)`.
#[pyfunction]
fn negbin_convolution_thresholds(sizes: Vec<f64>, probs: Vec<f64>) -> PyResult<(f64, f64)> {
    let spec = NegBinConvolutionSpec::new(sizes, probs).map_err(py_err)?;
    let t = criteria::negbin_convolution_thresholds(&spec);
    Ok((t.st_hr, t.lr_rh))
}

/// `(st_up, lr_up, st_down, lr_down)` for a Poisson-binomial against
/// `Bin(n, p)`.
#[pyfunction]
fn poisson_binomial_thresholds(probs: Vec<f64>) -> PyResult<(f64, f64, f64, f64)> {
    let spec = PoissonBinomialSpec::new(probs).map_err(py_err)?;
    let t = criteria::poisson_binomial_thresholds(&spec);
    Ok((t.st_up, t.lr_up, t.st_down, t.lr_down))
}

/// `(E[(Σ βᵢDᵢ)^{−α₊}], E[(Σ βᵢDᵢ)^{−α₊−1}])` for `D ~ Dirichlet(α)`.
#[pyfunction]
fn dirichlet_negative_moments(shapes: Vec<f64>, scales: Vec<f64>) -> PyResult<(f64, f64)> {
    let spec = GammaConvolutionSpec::new(shapes, scales).map_err(py_err)?;
    Ok((
        criteria::dirichlet_negative_moment(&spec, criteria::MomentOrder::AlphaPlus),
        criteria::dirichlet_negative_moment(&spec, criteria::MomentOrder::AlphaPlusPlusOne),
    ))
}

#[pymodule]
fn storder(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", compare::TOOL_VERSION)?;
    m.add_class::<PyDistribution>()?;
    m.add_class::<PyOrderVerdict>()?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    m.add_function(wrap_pyfunction!(compare_report, m)?)?;
    m.add_function(wrap_pyfunction!(threshold_report, m)?)?;
    m.add_function(wrap_pyfunction!(canonical, m)?)?;
    m.add_function(wrap_pyfunction!(gamma_convolution_thresholds, m)?)?;
    m.add_function(wrap_pyfunction!(negbin_convolution_thresholds, m)?)?;
    m.add_function(wrap_pyfunction!(poisson_binomial_thresholds, m)?)?;
    m.add_function(wrap_pyfunction!(dirichlet_negative_moments, m)?)?;
    Ok(())
}
