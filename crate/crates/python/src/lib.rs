//! Python bindings. Structured results come back as plain dicts and lists.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use serde::Serialize;

use ::gic_region as core;
use core::{ChannelParams, GicError, PowerSplit};

pyo3::create_exception!(gic_region, RegimeError, PyValueError);

fn to_py(e: GicError) -> PyErr {
    match e {
        GicError::Regime(r) => RegimeError::new_err(r.to_string()),
        GicError::NonConvergence { .. } => PyRuntimeError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn to_object<T: Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

fn split(rho: f64, theta: f64) -> PyResult<PowerSplit> {
    PowerSplit::new(rho, theta).map_err(to_py)
}

/// Weak Gaussian interference channel `(a, b, p1, p2)` with unit noise.
#[pyclass(name = "ChannelParams", module = "gic_region", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyChannelParams {
    inner: ChannelParams,
}

#[pymethods]
impl PyChannelParams {
    #[new]
    fn new(a: f64, b: f64, p1: f64, p2: f64) -> PyResult<Self> {
        Ok(Self { inner: ChannelParams::new(a, b, p1, p2).map_err(to_py)? })
    }

    #[getter]
    fn a(&self) -> f64 {
        self.inner.a()
    }
    #[getter]
    fn b(&self) -> f64 {
        self.inner.b()
    }
    #[getter]
    fn p1(&self) -> f64 {
        self.inner.p1()
    }
    #[getter]
    fn p2(&self) -> f64 {
        self.inner.p2()
    }
    #[getter]
    fn t1(&self) -> f64 {
        self.inner.t1()
    }
    #[getter]
    fn t2(&self) -> f64 {
        self.inner.t2()
    }

    fn swapped(&self) -> Self {
        Self { inner: self.inner.swapped() }
    }

    fn corner_rates(&self, py: Python<'_>, rho: f64, theta: f64) -> PyResult<Py<PyAny>> {
        let c = core::corner_rates(&self.inner, split(rho, theta)?);
        let out = to_object(py, &c)?;
        let case = core::classify(&c);
        let d = out.bind(py).cast::<PyDict>()?;
        d.set_item("case_id", case.case_id.as_str())?;
        d.set_item("requires_joint_decoding_y1", case.requires_joint_decoding_y1)?;
        Ok(out)
    }

    fn public_rate_pair(&self, py: Python<'_>, rho: f64, theta: f64) -> PyResult<Py<PyAny>> {
        to_object(py, &core::public_rate_pair(&self.inner, split(rho, theta)?))
    }

    fn sum_rate_front(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_object(py, &core::sum_rate_front(&self.inner).map_err(to_py)?)
    }

    fn key_points(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_object(py, &core::key_points(&self.inner).map_err(to_py)?)
    }

    #[pyo3(signature = (num_points=200, upper=false))]
    fn trace(&self, py: Python<'_>, num_points: usize, upper: bool) -> PyResult<Py<PyAny>> {
        let params = self.inner;
        let t = py
            .detach(|| {
                if upper {
                    core::trace_upper_boundary(&params, num_points)
                } else {
                    core::trace_lower_boundary(&params, num_points)
                }
            })
            .map_err(to_py)?;
        to_object(py, &core::export::trace_json(&t))
    }

    fn hk_bounds(&self, py: Python<'_>, rho: f64, theta: f64) -> PyResult<Py<PyAny>> {
        to_object(py, &core::hk_bounds(&self.inner, split(rho, theta)?))
    }

    #[pyo3(signature = (rho, theta, mu, reduced=false))]
    fn hk_optimize(&self, py: Python<'_>, rho: f64, theta: f64, mu: f64, reduced: bool) -> PyResult<Py<PyAny>> {
        let s = split(rho, theta)?;
        let r = if reduced {
            core::lp_optimize_reduced(&self.inner, s, mu)
        } else {
            core::lp_optimize_full(&self.inner, s, mu)
        }
        .map_err(to_py)?;
        to_object(py, &r)
    }

    #[pyo3(signature = (mu, resolution=201, reference_value=0.0))]
    fn grid_oracle(&self, py: Python<'_>, mu: f64, resolution: usize, reference_value: f64) -> PyResult<Py<PyAny>> {
        let params = self.inner;
        let r = py.detach(|| core::grid_oracle(&params, mu, resolution, reference_value)).map_err(to_py)?;
        to_object(py, &r)
    }

    fn mu1(&self, p1hat: f64, p2hat: f64) -> f64 {
        core::mu1_closed(&self.inner, p1hat, p2hat)
    }

    fn mu2(&self, p1hat: f64, p2hat: f64) -> f64 {
        core::mu2_closed(&self.inner, p1hat, p2hat)
    }

    fn __repr__(&self) -> String {
        let p = &self.inner;
        format!("ChannelParams(a={}, b={}, p1={}, p2={})", p.a(), p.b(), p.p1(), p.p2())
    }
}

#[pyfunction]
#[pyo3(signature = (total_power, noise_power=1.0, num_layers=2))]
fn scsd_layer_rates(total_power: f64, noise_power: f64, num_layers: usize) -> PyResult<Vec<f64>> {
    core::scsd_layer_rates(total_power, noise_power, num_layers).map_err(to_py)
}

#[pyfunction]
fn awgn_capacity(signal_power: f64, noise_power: f64) -> PyResult<f64> {
    core::awgn_capacity(signal_power, noise_power).map_err(to_py)
}

#[pymodule]
fn gic_region(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyChannelParams>()?;
    m.add_function(wrap_pyfunction!(scsd_layer_rates, m)?)?;
    m.add_function(wrap_pyfunction!(awgn_capacity, m)?)?;
    m.add("RegimeError", m.py().get_type::<RegimeError>())?;
    Ok(())
}
