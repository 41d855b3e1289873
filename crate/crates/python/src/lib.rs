use kropina::catalog;
use kropina::chart::{ChartConfig, ChartEngine};
use kropina::kropina as kr;
use kropina::lie::{Bracket, InnerProduct, LieAlgebra};
use kropina::{riemann, WKind};
use nalgebra::{DMatrix, DVector};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn err(e: kropina::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_matrix(rows: &[Vec<f64>]) -> PyResult<DMatrix<f64>> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(PyValueError::new_err(format!("expected a square {n}x{n} matrix")));
    }
    Ok(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

fn from_matrix(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().cloned().collect()).collect()
}

fn metric(rows: Option<Vec<Vec<f64>>>, dim: usize) -> PyResult<InnerProduct> {
    match rows {
        Some(r) => InnerProduct::new(to_matrix(&r)?).map_err(err),
        None => Ok(InnerProduct::identity(dim)),
    }
}

fn kind(s: &str) -> PyResult<WKind> {
    s.parse().map_err(err)
}

fn chart_config(series_order: usize, radius: f64, samples: usize, seed: u64) -> PyResult<ChartConfig> {
    let cfg = ChartConfig { series_order, radius, sample_count: samples, rng_seed: seed, ..Default::default() };
    cfg.validate().map_err(err)?;
    Ok(cfg)
}

/// Real Lie algebra given by structure constants in a fixed basis.
#[pyclass(name = "LieAlgebra", module = "kropina", frozen)]
struct PyLieAlgebra {
    inner: LieAlgebra,
}

#[pymethods]
impl PyLieAlgebra {
    /// `brackets` lists `(i, j, coeffs)` once per pair with `i < j`.
    #[new]
    fn new(basis: Vec<String>, brackets: Vec<(usize, usize, Vec<f64>)>) -> PyResult<Self> {
        let b: Vec<Bracket> = brackets.into_iter().map(|(i, j, c)| Bracket::new(i, j, c)).collect();
        Ok(Self { inner: LieAlgebra::from_brackets(basis, &b).map_err(err)? })
    }

    #[staticmethod]
    fn builtin(name: &str, params: Option<&str>) -> PyResult<Self> {
        Ok(Self { inner: entry(name, params)?.algebra })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn basis(&self) -> Vec<String> {
        self.inner.basis_names().to_vec()
    }

    fn bracket(&self, u: Vec<f64>, v: Vec<f64>) -> PyResult<Vec<f64>> {
        let w = self.inner.bracket(&DVector::from_vec(u), &DVector::from_vec(v)).map_err(err)?;
        Ok(w.iter().cloned().collect())
    }

    fn jacobi_defect(&self) -> f64 {
        self.inner.jacobi_defect()
    }

    fn killing_form(&self) -> Vec<Vec<f64>> {
        from_matrix(&self.inner.killing_form().m)
    }

    fn center(&self) -> Vec<Vec<f64>> {
        self.inner.center().iter().map(|v| v.iter().cloned().collect()).collect()
    }

    fn __repr__(&self) -> String {
        format!("LieAlgebra(dim={}, basis={:?})", self.inner.dim(), self.inner.basis_names())
    }
}

fn entry(name: &str, params: Option<&str>) -> PyResult<catalog::CatalogEntry> {
    let p = match params {
        Some(s) => catalog::parse_params(s).map_err(err)?,
        None => Vec::new(),
    };
    catalog::get(name, &p).map_err(err)
}

#[pyfunction]
fn catalog_names() -> Vec<&'static str> {
    catalog::NAMES.to_vec()
}

type NamedVectors = Vec<(String, Vec<f64>)>;

/// Catalog entry as `(algebra, metric, vectors)`.
#[pyfunction]
#[pyo3(signature = (name, params=None))]
fn builtin(name: &str, params: Option<&str>) -> PyResult<(PyLieAlgebra, Vec<Vec<f64>>, NamedVectors)> {
    let e = entry(name, params)?;
    let vectors = e.vectors.iter().map(|(n, v)| (n.clone(), v.iter().cloned().collect())).collect();
    Ok((PyLieAlgebra { inner: e.algebra }, from_matrix(e.metric.matrix()), vectors))
}

#[pyfunction]
#[pyo3(signature = (algebra, metric=None))]
fn ricci(algebra: &PyLieAlgebra, metric: Option<Vec<Vec<f64>>>) -> PyResult<Vec<Vec<f64>>> {
    let g = self::metric(metric, algebra.inner.dim())?;
    Ok(from_matrix(&riemann::riemann_ricci(&algebra.inner, &g).map_err(err)?))
}

/// `(sigma, residual)` of the least-squares fit `Ric = σg`.
#[pyfunction]
#[pyo3(signature = (algebra, metric=None))]
fn einstein_fit(algebra: &PyLieAlgebra, metric: Option<Vec<Vec<f64>>>) -> PyResult<(f64, f64)> {
    let g = self::metric(metric, algebra.inner.dim())?;
    let fit = riemann::einstein_fit(&algebra.inner, &g).map_err(err)?;
    Ok((fit.sigma, fit.residual))
}

#[pyfunction]
#[pyo3(signature = (algebra, metric=None))]
fn killing_space(algebra: &PyLieAlgebra, metric: Option<Vec<Vec<f64>>>) -> PyResult<Vec<Vec<f64>>> {
    let g = self::metric(metric, algebra.inner.dim())?;
    let space = riemann::killing_space(&algebra.inner, &g).map_err(err)?;
    Ok(space.iter().map(|v| v.iter().cloned().collect()).collect())
}

/// `F(y) = h(y, y) / (2 h(W, y))`.
#[pyfunction]
fn kropina_f(h: Vec<Vec<f64>>, w: Vec<f64>, y: Vec<f64>) -> PyResult<f64> {
    let nav = kr::NavigationData::new(InnerProduct::new(to_matrix(&h)?).map_err(err)?, DVector::from_vec(w)).map_err(err)?;
    kr::eval_f_navigation(&nav, &DVector::from_vec(y)).map_err(err)
}

/// `(h, W, scale)` for `F = a(y, y) / a(X, y)`.
#[pyfunction]
fn to_navigation(a: Vec<Vec<f64>>, x: Vec<f64>) -> PyResult<(Vec<Vec<f64>>, Vec<f64>, f64)> {
    let k = kr::KropinaAlgebraic::new(InnerProduct::new(to_matrix(&a)?).map_err(err)?, DVector::from_vec(x)).map_err(err)?;
    let n = kr::to_navigation(&k).map_err(err)?;
    Ok((from_matrix(n.h().matrix()), n.w().iter().cloned().collect(), n.scale()))
}

#[pyfunction]
fn from_navigation(h: Vec<Vec<f64>>, w: Vec<f64>) -> PyResult<(Vec<Vec<f64>>, Vec<f64>)> {
    let nav = kr::NavigationData::new(InnerProduct::new(to_matrix(&h)?).map_err(err)?, DVector::from_vec(w)).map_err(err)?;
    let k = kr::from_navigation(&nav).map_err(err)?;
    Ok((from_matrix(k.a().matrix()), k.x().iter().cloned().collect()))
}

/// Algebraic certificate; `w` is normalized to unit length first.
#[pyfunction]
#[pyo3(signature = (algebra, w, kind="left", metric=None))]
fn einstein_certificate<'py>(
    py: Python<'py>,
    algebra: &PyLieAlgebra,
    w: Vec<f64>,
    kind: &str,
    metric: Option<Vec<Vec<f64>>>,
) -> PyResult<Bound<'py, PyDict>> {
    let g = self::metric(metric, algebra.inner.dim())?;
    let nav = kr::NavigationData::normalized(g, DVector::from_vec(w)).map_err(err)?;
    let cert = kr::einstein_certificate(&algebra.inner, &nav, self::kind(kind)?).map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("verdict", cert.verdict.as_str())?;
    out.set_item("verified", cert.verified())?;
    out.set_item("sigma", cert.sigma)?;
    out.set_item("residual", cert.fit.residual)?;
    let checks: Vec<(String, bool, f64, f64)> =
        cert.checks.iter().map(|c| (c.name.clone(), c.pass, c.value, c.tolerance)).collect();
    out.set_item("checks", checks)?;
    Ok(out)
}

/// Finsler data of the Kropina metric at chart point `x`, direction `y`.
#[pyfunction]
#[pyo3(signature = (algebra, w, x, y, kind="left", metric=None, series_order=10))]
#[allow(clippy::too_many_arguments)]
fn finsler_sample<'py>(
    py: Python<'py>,
    algebra: &PyLieAlgebra,
    w: Vec<f64>,
    x: Vec<f64>,
    y: Vec<f64>,
    kind: &str,
    metric: Option<Vec<Vec<f64>>>,
    series_order: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let g = self::metric(metric, algebra.inner.dim())?;
    let nav = kr::NavigationData::normalized(g, DVector::from_vec(w)).map_err(err)?;
    let cfg = chart_config(series_order, 0.3, 0, 0)?;
    let engine = ChartEngine::kropina(&algebra.inner, &nav, self::kind(kind)?, &cfg).map_err(err)?;
    let s = engine.sample(&DVector::from_vec(x), &DVector::from_vec(y)).map_err(err)?;
    let n = s.y.len();
    let out = PyDict::new(py);
    out.set_item("f", s.f)?;
    out.set_item("fundamental_tensor", s.g_y.chunks(n).map(|r| r.to_vec()).collect::<Vec<_>>())?;
    out.set_item("spray", s.spray)?;
    out.set_item("ric", s.ric)?;
    Ok(out)
}

/// Maximal `|Ric − σF²| / F²` over seeded chart samples.
#[pyfunction]
#[pyo3(signature = (algebra, w, sigma, kind="left", metric=None, samples=20, seed=0, radius=0.3, series_order=10))]
#[allow(clippy::too_many_arguments)]
fn einstein_scan(
    algebra: &PyLieAlgebra,
    w: Vec<f64>,
    sigma: f64,
    kind: &str,
    metric: Option<Vec<Vec<f64>>>,
    samples: usize,
    seed: u64,
    radius: f64,
    series_order: usize,
) -> PyResult<f64> {
    let g = self::metric(metric, algebra.inner.dim())?;
    let nav = kr::NavigationData::normalized(g, DVector::from_vec(w)).map_err(err)?;
    let cfg = chart_config(series_order, radius, samples, seed)?;
    let engine = ChartEngine::kropina(&algebra.inner, &nav, self::kind(kind)?, &cfg).map_err(err)?;
    Ok(kropina::chart::einstein_scan(&engine, sigma).map_err(err)?.max_residual)
}

/// Runs a command-line invocation; returns `(exit_code, stdout, stderr)`.
#[pyfunction]
fn run_command(args: Vec<String>) -> (i32, String, String) {
    let o = kropina::cli::run(std::iter::once("kropina".to_string()).chain(args));
    (o.code, o.stdout, o.stderr)
}

#[pymodule]
#[pyo3(name = "kropina")]
fn kropina_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyLieAlgebra>()?;
    m.add_function(wrap_pyfunction!(catalog_names, m)?)?;
    m.add_function(wrap_pyfunction!(builtin, m)?)?;
    m.add_function(wrap_pyfunction!(ricci, m)?)?;
    m.add_function(wrap_pyfunction!(einstein_fit, m)?)?;
    m.add_function(wrap_pyfunction!(killing_space, m)?)?;
    m.add_function(wrap_pyfunction!(kropina_f, m)?)?;
    m.add_function(wrap_pyfunction!(to_navigation, m)?)?;
    m.add_function(wrap_pyfunction!(from_navigation, m)?)?;
    m.add_function(wrap_pyfunction!(einstein_certificate, m)?)?;
    m.add_function(wrap_pyfunction!(finsler_sample, m)?)?;
    m.add_function(wrap_pyfunction!(einstein_scan, m)?)?;
    m.add_function(wrap_pyfunction!(run_command, m)?)?;
    Ok(())
}
