use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use regge_area::closed_form::{self, Region};
use regge_area::moments::{self, ModelParams, ProbePolynomial, Route, Variant};
use regge_area::series::{Elementary, TruncatedSeries};
use regge_area::xcheck::{self, CheckGroup, SuiteConfig};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_variant(name: &str) -> PyResult<Variant> {
    name.parse().map_err(value_error)
}

fn parse_route(name: &str) -> PyResult<Route> {
    Route::ALL
        .into_iter()
        .find(|r| r.name() == name)
        .ok_or_else(|| value_error(format!("unknown route `{name}`")))
}

fn parse_region(name: &str) -> PyResult<Region> {
    match name {
        "spacelike" => Ok(Region::Spacelike),
        "timelike" => Ok(Region::Timelike),
        other => Err(value_error(format!("unknown region `{other}`"))),
    }
}

#[pyclass(name = "ModelParams", frozen)]
struct PyModelParams {
    inner: ModelParams,
}

#[pymethods]
impl PyModelParams {
    #[new]
    #[pyo3(signature = (gamma, variant = "arcsin"))]
    fn new(gamma: f64, variant: &str) -> PyResult<Self> {
        let inner = ModelParams::new(gamma, parse_variant(variant)?).map_err(value_error)?;
        Ok(Self { inner })
    }

    #[getter]
    fn gamma(&self) -> f64 {
        self.inner.gamma()
    }

    #[getter]
    fn variant(&self) -> String {
        self.inner.variant().to_string()
    }

    #[getter]
    fn rescaling(&self) -> Complex64 {
        self.inner.rescaling()
    }

    #[getter]
    fn x0(&self) -> Complex64 {
        self.inner.x0()
    }

    /// Scalar moment for index `l` on the given route.
    #[pyo3(signature = (l, route = "series_rescaled"))]
    fn moment(&self, l: usize, route: &str) -> PyResult<Complex64> {
        moments::moment_scalar(l, &self.inner, parse_route(route)?)
            .map(|m| m.value)
            .map_err(value_error)
    }

    fn factorized_moment(&self, l: usize, m: usize) -> PyResult<Complex64> {
        moments::factorized_moment(l, m, &self.inner).map_err(value_error)
    }

    /// Moment of the polynomial probe with coefficients `coeffs` in `x = v^2`.
    fn moment_of_polynomial(&self, coeffs: Vec<Complex64>) -> PyResult<Complex64> {
        let probe = ProbePolynomial::new(coeffs, &self.inner);
        moments::moment_of_polynomial(&probe, &self.inner).map_err(value_error)
    }

    /// `(a, b)` with the singular part of a probe equal to `a f(x0) + b f'(x0)`.
    fn singular_coefficients(&self) -> (Complex64, Complex64) {
        let c = moments::singular_coefficients(&self.inner);
        (c.a, c.b)
    }

    fn distribution(&self, vsq: f64) -> PyResult<f64> {
        closed_form::distribution(vsq.into(), self.inner.gamma(), self.inner.variant())
            .map_err(value_error)
    }

    fn __repr__(&self) -> String {
        format!(
            "ModelParams(gamma={}, variant='{}')",
            self.inner.gamma(),
            self.inner.variant()
        )
    }
}

#[pyclass(name = "TruncatedSeries", frozen)]
struct PyTruncatedSeries {
    inner: TruncatedSeries,
}

#[pymethods]
impl PyTruncatedSeries {
    #[new]
    fn new(coeffs: Vec<Complex64>) -> PyResult<Self> {
        let inner = TruncatedSeries::new(coeffs).map_err(value_error)?;
        Ok(Self { inner })
    }

    /// Maclaurin series of `sin`, `cos`, `sqrt1m`, `ln1p` or `arcsin`.
    #[staticmethod]
    fn elementary(kind: &str, order: usize) -> PyResult<Self> {
        let kind = match kind {
            "sin" => Elementary::Sin,
            "cos" => Elementary::Cos,
            "sqrt1m" => Elementary::Sqrt1m,
            "ln1p" => Elementary::Ln1p,
            "arcsin" => Elementary::Arcsin,
            other => {
                return Err(value_error(format!(
                    "unknown elementary function `{other}`"
                )))
            }
        };
        Ok(Self {
            inner: TruncatedSeries::elementary(kind, order),
        })
    }

    #[getter]
    fn order(&self) -> usize {
        self.inner.order()
    }

    #[getter]
    fn coeffs(&self) -> Vec<Complex64> {
        self.inner.coeffs().to_vec()
    }

    fn compose(&self, inner: &PyTruncatedSeries) -> PyResult<Self> {
        let inner = self.inner.compose(&inner.inner).map_err(value_error)?;
        Ok(Self { inner })
    }

    fn derivative_at_zero(&self, k: usize) -> PyResult<Complex64> {
        self.inner.derivative_at_zero(k).map_err(value_error)
    }

    fn __mul__(&self, other: &PyTruncatedSeries) -> Self {
        Self {
            inner: &self.inner * &other.inner,
        }
    }

    fn __add__(&self, other: &PyTruncatedSeries) -> Self {
        Self {
            inner: &self.inner + &other.inner,
        }
    }

    fn __repr__(&self) -> String {
        format!("TruncatedSeries(order={})", self.inner.order())
    }
}

#[pyfunction]
#[pyo3(signature = (vsq, gamma, variant = "arcsin"))]
fn distribution(vsq: f64, gamma: f64, variant: &str) -> PyResult<f64> {
    closed_form::distribution(vsq.into(), gamma, parse_variant(variant)?).map_err(value_error)
}

/// `(n, location, order)` for the first `n_max` excluded points.
#[pyfunction]
fn singular_points(gamma: f64, n_max: u32) -> PyResult<Vec<(u32, Complex64, u32)>> {
    let points = closed_form::singular_points(gamma, n_max).map_err(value_error)?;
    Ok(points
        .into_iter()
        .map(|p| (p.n, p.location, p.order))
        .collect())
}

/// `(vsq, N)` for every interior local maximum on `[lo, hi]`.
#[pyfunction]
#[pyo3(signature = (gamma, lo, hi, variant = "arcsin"))]
fn local_maxima(gamma: f64, lo: f64, hi: f64, variant: &str) -> PyResult<Vec<(f64, f64)>> {
    let maxima =
        closed_form::local_maxima(gamma, lo, hi, parse_variant(variant)?).map_err(value_error)?;
    Ok(maxima.into_iter().map(|m| (m.vsq, m.n_value)).collect())
}

/// `(fitted, theoretical)` exponential decay rate in `|A|`.
#[pyfunction]
#[pyo3(signature = (gamma, region, variant = "arcsin"))]
fn decay_rate(gamma: f64, region: &str, variant: &str) -> PyResult<(f64, f64)> {
    let fit = closed_form::decay_rate(gamma, parse_region(region)?, parse_variant(variant)?)
        .map_err(value_error)?;
    Ok((fit.fitted, fit.theoretical))
}

#[pyfunction]
fn ki1(x: Complex64) -> PyResult<Complex64> {
    closed_form::ki1(x).map_err(value_error)
}

/// Runs the verification suite and returns one dict per check.
#[pyfunction]
#[pyo3(signature = (only = None))]
fn verify<'py>(py: Python<'py>, only: Option<Vec<String>>) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let only = only
        .map(|names| {
            names
                .iter()
                .map(|n| n.parse::<CheckGroup>())
                .collect::<Result<Vec<_>, _>>()
        })
        .transpose()
        .map_err(value_error)?;
    let config = SuiteConfig {
        only,
        ..SuiteConfig::default()
    };
    xcheck::run_all(&config)
        .into_iter()
        .map(|r| {
            let d = PyDict::new(py);
            d.set_item("name", r.name)?;
            d.set_item("lhs", r.lhs)?;
            d.set_item("rhs", r.rhs)?;
            d.set_item("abs_err", r.abs_err)?;
            d.set_item("rel_err", r.rel_err)?;
            d.set_item("tolerance", r.tolerance)?;
            d.set_item("passed", r.passed)?;
            d.set_item("informational", r.informational)?;
            d.set_item("note", r.note)?;
            Ok(d)
        })
        .collect()
}

#[pymodule]
#[pyo3(name = "regge_area")]
fn regge_area_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyModelParams>()?;
    m.add_class::<PyTruncatedSeries>()?;
    m.add_function(wrap_pyfunction!(distribution, m)?)?;
    m.add_function(wrap_pyfunction!(singular_points, m)?)?;
    m.add_function(wrap_pyfunction!(local_maxima, m)?)?;
    m.add_function(wrap_pyfunction!(decay_rate, m)?)?;
    m.add_function(wrap_pyfunction!(ki1, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
