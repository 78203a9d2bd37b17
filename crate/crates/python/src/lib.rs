//! Python bindings for the Active Flux shallow water solver.
//!
//! Exposes scenarios, the time-stepping driver, cell reconstructions and the
//! convergence helpers. Arrays are returned as Python lists of floats.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::PathBuf;

use active_flux_swe::bottom::BottomCell;
use active_flux_swe::cli;
use active_flux_swe::config::{load_config, render_config};
use active_flux_swe::driver::{Simulation, StepReport};
use active_flux_swe::error::SweError;
use active_flux_swe::reconstruction::{self, CaseTag, CellReconstruction, ReconOptions};
use active_flux_swe::scenarios::{scenario, scenario_names, ScenarioConfig};
use active_flux_swe::snapshot::Snapshot;
use active_flux_swe::state::{ConservedPair, Constants};
use pyo3::exceptions::{PyIOError, PyKeyError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn to_py(err: SweError) -> PyErr {
    match err {
        SweError::Io { .. } | SweError::Csv { .. } => PyIOError::new_err(err.to_string()),
        SweError::UnknownScenario { .. } => PyKeyError::new_err(err.to_string()),
        SweError::Internal(_) => PyRuntimeError::new_err(err.to_string()),
        _ => PyValueError::new_err(err.to_string()),
    }
}

/// A complete run description: domain, grid, bottom, initial data and
/// scheme switches.
#[pyclass(name = "Scenario", module = "active_flux_swe", skip_from_py_object)]
#[derive(Clone)]
struct PyScenario {
    inner: ScenarioConfig,
}

#[pymethods]
impl PyScenario {
    /// Built-in scenario by name.
    #[new]
    fn new(name: &str) -> PyResult<Self> {
        Ok(PyScenario { inner: scenario(name).map_err(to_py)? })
    }

    /// Reads a `key = value` configuration file.
    #[staticmethod]
    fn from_config(path: PathBuf) -> PyResult<Self> {
        Ok(PyScenario { inner: load_config(&path).map_err(to_py)? })
    }

    /// Changes one setting, using the configuration file keys.
    fn set(&mut self, key: &str, value: &str) -> PyResult<()> {
        self.inner.set(key, value).map_err(to_py)
    }

    fn with_cells(&self, n: usize) -> Self {
        PyScenario { inner: self.inner.clone().with_cells(n) }
    }

    /// Configuration text that reads back to this scenario.
    fn to_config(&self) -> String {
        render_config(&self.inner)
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name.clone()
    }

    #[getter]
    fn n_cells(&self) -> usize {
        self.inner.n_cells
    }

    #[getter]
    fn t_end(&self) -> f64 {
        self.inner.t_end
    }

    #[getter]
    fn domain(&self) -> (f64, f64) {
        (self.inner.x_min, self.inner.x_max)
    }

    /// Exact `(h, m)` at time `t` and position `x`, for setups that have one.
    fn exact(&self, t: f64, x: f64) -> Option<(f64, f64)> {
        self.inner.exact().map(|s| (s.height(t, x), s.momentum(t, x)))
    }

    fn build(&self) -> PyResult<PySimulation> {
        Ok(PySimulation { inner: self.inner.build().map_err(to_py)? })
    }

    fn __repr__(&self) -> String {
        format!("Scenario({:?}, n_cells={}, t_end={})", self.inner.name, self.inner.n_cells, self.inner.t_end)
    }
}

fn report_dict<'py>(py: Python<'py>, r: &StepReport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("step", r.step)?;
    d.set_item("t", r.t)?;
    d.set_item("dt", r.dt)?;
    d.set_item("n_drained_cells", r.n_drained_cells)?;
    d.set_item("n_frozen_points", r.n_frozen_points)?;
    d.set_item("max_froude", r.max_froude)?;
    d.set_item("drain_cap_hit", r.drain_cap_hit)?;
    let cases = PyDict::new(py);
    for tag in CaseTag::ALL {
        cases.set_item(tag.name(), r.n_cells_per_case[tag.index()])?;
    }
    d.set_item("cases", cases)?;
    Ok(d)
}

/// A running simulation.
#[pyclass(name = "Simulation", module = "active_flux_swe")]
struct PySimulation {
    inner: Simulation,
}

#[pymethods]
impl PySimulation {
    /// One time step, limited to `max_dt` if given. Returns the step report.
    #[pyo3(signature = (max_dt=None))]
    fn step<'py>(&mut self, py: Python<'py>, max_dt: Option<f64>) -> PyResult<Bound<'py, PyDict>> {
        let r = self.inner.step(max_dt).map_err(to_py)?;
        report_dict(py, &r)
    }

    /// Advances to `t_end` exactly and returns the number of steps taken.
    fn run_until(&mut self, py: Python<'_>, t_end: f64) -> PyResult<usize> {
        let sim = &mut self.inner;
        py.detach(|| sim.run_until(t_end, |_| {})).map_err(to_py)
    }

    #[getter]
    fn time(&self) -> f64 {
        self.inner.time()
    }

    #[getter]
    fn steps(&self) -> usize {
        self.inner.steps()
    }

    #[getter]
    fn dx(&self) -> f64 {
        self.inner.grid().dx
    }

    fn total_mass(&self) -> f64 {
        self.inner.total_mass()
    }

    /// Mass that has left through the boundaries.
    fn boundary_outflow(&self) -> f64 {
        self.inner.boundary_outflow()
    }

    /// Interface positions and point values: `(x, h, m, b)`.
    fn points(&self) -> (Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>) {
        let snap = Snapshot::from_simulation(&self.inner);
        let p = &snap.points;
        (p.iter().map(|r| r.x).collect(), p.iter().map(|r| r.h).collect(), p.iter().map(|r| r.m).collect(), p.iter().map(|r| r.b).collect())
    }

    /// Cell centers and averages: `(x, h, m)`.
    fn averages(&self) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
        let st = self.inner.state();
        let g = self.inner.grid();
        ((0..g.n_cells).map(|i| g.center(i as isize)).collect(), st.avg.iter().map(|q| q.h()).collect(), st.avg.iter().map(|q| q.m()).collect())
    }

    /// Reconstruction case of every cell.
    fn case_tags(&self) -> Vec<&'static str> {
        let r = self.inner.reconstructions();
        r[1..r.len() - 1].iter().map(|c| c.tag().name()).collect()
    }

    /// Writes `PREFIX.points.csv` and `PREFIX.averages.csv`.
    fn write_snapshot(&self, prefix: PathBuf) -> PyResult<(PathBuf, PathBuf)> {
        Snapshot::from_simulation(&self.inner).write(&prefix).map_err(to_py)
    }
}

/// Reconstruction of one cell in the local coordinate `[-dx/2, dx/2]`.
#[pyclass(name = "Reconstruction", module = "active_flux_swe")]
struct PyReconstruction {
    inner: CellReconstruction,
}

#[pymethods]
impl PyReconstruction {
    /// Builds the reconstruction from `(h, m)` of the average and the two
    /// point values and the bottom samples `(left, center, right)`.
    #[new]
    #[pyo3(signature = (avg, left, right, bottom, dx, limiting=true, positivity=true))]
    fn new(
        avg: (f64, f64),
        left: (f64, f64),
        right: (f64, f64),
        bottom: (f64, f64, f64),
        dx: f64,
        limiting: bool,
        positivity: bool,
    ) -> PyResult<Self> {
        if !(dx > 0.0) {
            return Err(PyValueError::new_err(format!("dx must be positive, got {dx}")));
        }
        let cell = BottomCell::from_samples(bottom.0, bottom.1, bottom.2, dx);
        let inner = reconstruction::build_from_raw(
            avg.0,
            left.0,
            right.0,
            avg.1,
            left.1,
            right.1,
            cell,
            &Constants::default(),
            ReconOptions { limiting, positivity },
        )
        .map_err(to_py)?;
        Ok(PyReconstruction { inner })
    }

    #[getter]
    fn tag(&self) -> &'static str {
        self.inner.tag().name()
    }

    /// Shore position of a half-wet cell.
    #[getter]
    fn shore(&self) -> Option<f64> {
        self.inner.shore()
    }

    /// `(h, m)` at local position `x`.
    fn eval(&self, x: f64) -> PyResult<(f64, f64)> {
        let half = 0.5 * self.inner.dx();
        if x.abs() > half {
            return Err(PyValueError::new_err(format!("x = {x} outside [-{half}, {half}]")));
        }
        let q: ConservedPair = self.inner.eval(x);
        Ok((q.h(), q.m()))
    }
}

/// Whether the parabola with end values `hl`, `hr` and mean `hbar` dips
/// below zero.
#[pyfunction]
fn parabola_goes_negative(hbar: f64, hl: f64, hr: f64) -> bool {
    reconstruction::parabola_goes_negative(hbar, hl, hr)
}

#[pyfunction]
fn scenarios() -> Vec<String> {
    scenario_names()
}

/// L1 point-value errors on each grid. Without `exact` the last grid serves
/// as reference. Returns one dict per grid.
#[pyfunction]
#[pyo3(signature = (scenario, grids, exact=false))]
fn convergence<'py>(py: Python<'py>, scenario: &PyScenario, grids: Vec<usize>, exact: bool) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let cfg = scenario.inner.clone();
    let rows = py.detach(|| cli::convergence(&cfg, &grids, exact)).map_err(to_py)?;
    rows.iter()
        .map(|r| {
            let d = PyDict::new(py);
            d.set_item("cells", r.cells)?;
            d.set_item("err_h", r.err_h)?;
            d.set_item("err_m", r.err_m)?;
            d.set_item("order_h", r.order_h)?;
            d.set_item("order_m", r.order_m)?;
            Ok(d)
        })
        .collect()
}

/// Largest level deviation at wet points and largest `|m|` over `steps`
/// steps of a lake at rest.
#[pyfunction]
fn wb_check(py: Python<'_>, scenario: &PyScenario, steps: usize) -> PyResult<(f64, f64)> {
    let cfg = scenario.inner.clone();
    py.detach(|| cli::wb_check(&cfg, steps)).map_err(to_py)
}

#[pymodule]
#[pyo3(name = "active_flux_swe")]
fn python_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyScenario>()?;
    m.add_class::<PySimulation>()?;
    m.add_class::<PyReconstruction>()?;
    m.add_function(wrap_pyfunction!(parabola_goes_negative, m)?)?;
    m.add_function(wrap_pyfunction!(scenarios, m)?)?;
    m.add_function(wrap_pyfunction!(convergence, m)?)?;
    m.add_function(wrap_pyfunction!(wb_check, m)?)?;
    Ok(())
}
