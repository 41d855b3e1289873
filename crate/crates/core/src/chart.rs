//! Exponential chart of the first kind around the identity.
//!
//! At the chart point `x` the differential of `exp` is `dl_{exp x} Φ(x)` with
//! `Φ(x) = Σ_k (−ad x)^k/(k+1)!` (left trivialization) and `dr_{exp x} Ψ(x)`
//! with `Ψ(x) = Σ_k (ad x)^k/(k+1)!` (right trivialization). Invariant frames
//! and the chart components of a left-invariant metric follow directly, and
//! are polynomial in `x` once the series is truncated.
//!
//! Derivatives of the Finsler quantities are propagated with jets
//! ([`crate::jet`]); finite differences are used only by the tests.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{check_len, Error, Result};
use crate::jet::{mat, Arith, Jet, JetSpace, Real};
use crate::kropina::{NavigationData, WKind};
use crate::lie::{InnerProduct, LieAlgebra};
use crate::linalg;

/// Largest condition number of `Φ(x)` accepted at a chart point.
pub const MAX_FRAME_CONDITION: f64 = 1e6;
/// Largest condition number of the fundamental tensor accepted in a sample.
pub const MAX_FUNDAMENTAL_CONDITION: f64 = 1e10;
/// Sampled `y` satisfy `⟨W, y⟩ >= CONE_MARGIN ‖W‖ ‖y‖` in the chart metric.
pub const CONE_MARGIN: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChartConfig {
    pub series_order: usize,
    pub radius: f64,
    pub fd_step: f64,
    pub sample_count: usize,
    pub rng_seed: u64,
}

impl Default for ChartConfig {
    fn default() -> Self {
        Self { series_order: 10, radius: 0.3, fd_step: 1e-4, sample_count: 20, rng_seed: 0 }
    }
}

impl ChartConfig {
    pub fn validate(&self) -> Result<()> {
        if self.series_order < 4 {
            return Err(Error::Input(format!("series_order must be >= 4, got {}", self.series_order)));
        }
        if !(self.radius > 0.0) || !self.radius.is_finite() {
            return Err(Error::Input(format!("radius must be positive, got {}", self.radius)));
        }
        if !(self.fd_step > 0.0) {
            return Err(Error::Input(format!("fd_step must be positive, got {}", self.fd_step)));
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// generic series code

fn ad_of<A: Arith>(ar: &A, alg: &LieAlgebra, x: &[A::T]) -> Vec<A::T> {
    let n = alg.dim();
    let mut m = vec![ar.zero(); n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let c = alg.c(i, j, k);
                if c != 0.0 {
                    let t = ar.scale(&x[i], c);
                    ar.add_assign(&mut m[k * n + j], &t);
                }
            }
        }
    }
    m
}

/// `Σ_{k=0..order} (sign · ad x)^k / (k + shift)!` with `shift` 1 for the
/// exponential differential and 0 for `exp(ad x)` itself.
fn ad_series<A: Arith>(ar: &A, alg: &LieAlgebra, x: &[A::T], order: usize, sign: f64, shift: usize) -> Vec<A::T> {
    let n = alg.dim();
    let ad: Vec<A::T> = ad_of(ar, alg, x).iter().map(|e| ar.scale(e, sign)).collect();
    let mut power = mat::identity(ar, n);
    let mut sum: Vec<A::T> = power.iter().map(|e| ar.scale(e, 1.0 / factorial(shift))).collect();
    for k in 1..=order {
        power = mat::mul(ar, &power, &ad, n);
        let f = 1.0 / factorial(k + shift);
        for (s, p) in sum.iter_mut().zip(&power) {
            let t = ar.scale(p, f);
            ar.add_assign(s, &t);
        }
    }
    sum
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|v| v as f64).product()
}

/// Chart metric `Φᵀ g Φ` and, for Kropina data, the covector `G V` of the
/// navigation field `V` in the chart.
struct ChartFields<T> {
    metric: Vec<T>,
    field: Option<Vec<T>>,
    covector: Option<Vec<T>>,
}

fn chart_fields<A: Arith>(
    ar: &A,
    alg: &LieAlgebra,
    g: &InnerProduct,
    x: &[A::T],
    order: usize,
    field: Option<(&DVector<f64>, WKind)>,
) -> Result<ChartFields<A::T>> {
    let n = alg.dim();
    let phi = ad_series(ar, alg, x, order, -1.0, 1);
    let gm: Vec<A::T> = (0..n * n).map(|i| ar.constant(g.matrix()[(i / n, i % n)])).collect();
    let metric = mat::mul(ar, &mat::mul(ar, &mat::transpose::<A>(&phi, n), &gm, n), &phi, n);
    let (field, covector) = match field {
        None => (None, None),
        Some((w, kind)) => {
            let wc: Vec<A::T> = w.iter().map(|&v| ar.constant(v)).collect();
            let frame_inv = match kind {
                WKind::Left | WKind::Central => phi,
                WKind::Right => ad_series(ar, alg, x, order, 1.0, 1),
            };
            let v = mat::solve(ar, &frame_inv, &wc, n).ok_or_else(|| Error::Chart("singular frame series".into()))?;
            let cov = mat::mul_vec(ar, &metric, &v, n);
            (Some(v), Some(cov))
        }
    };
    Ok(ChartFields { metric, field, covector })
}

fn to_dmatrix(v: &[f64], n: usize) -> DMatrix<f64> {
    DMatrix::from_row_slice(n, n, v)
}

fn real_vec(x: &DVector<f64>) -> Vec<f64> {
    x.iter().cloned().collect()
}

// ---------------------------------------------------------------------------
// frames and chart metric

/// `Φ(x) = Σ_{k=0..order} (−ad x)^k/(k+1)!`.
pub fn phi_series(alg: &LieAlgebra, x: &DVector<f64>, order: usize) -> Result<DMatrix<f64>> {
    check_len(alg.dim(), x.len())?;
    Ok(to_dmatrix(&ad_series(&Real, alg, &real_vec(x), order, -1.0, 1), alg.dim()))
}

/// `Ψ(x) = Σ_{k=0..order} (ad x)^k/(k+1)!`.
pub fn psi_series(alg: &LieAlgebra, x: &DVector<f64>, order: usize) -> Result<DMatrix<f64>> {
    check_len(alg.dim(), x.len())?;
    Ok(to_dmatrix(&ad_series(&Real, alg, &real_vec(x), order, 1.0, 1), alg.dim()))
}

/// Truncated `exp(ad x) = Σ_{k=0..order} (ad x)^k/k!`.
pub fn exp_ad(alg: &LieAlgebra, x: &DVector<f64>, order: usize) -> Result<DMatrix<f64>> {
    check_len(alg.dim(), x.len())?;
    Ok(to_dmatrix(&ad_series(&Real, alg, &real_vec(x), order, 1.0, 0), alg.dim()))
}

fn invert_frame(m: DMatrix<f64>) -> Result<DMatrix<f64>> {
    let cond = linalg::condition_number(&m);
    if !(cond < MAX_FRAME_CONDITION) {
        return Err(Error::Chart(format!("frame series condition number {cond:e} exceeds {MAX_FRAME_CONDITION:e}")));
    }
    m.try_inverse().ok_or_else(|| Error::Chart("singular frame series".into()))
}

/// Columns are the chart components of the left-invariant fields `e_i` at `x`.
pub fn left_frame(alg: &LieAlgebra, x: &DVector<f64>, cfg: &ChartConfig) -> Result<DMatrix<f64>> {
    invert_frame(phi_series(alg, x, cfg.series_order)?)
}

/// Columns are the chart components of the right-invariant fields `e_i` at `x`.
pub fn right_frame(alg: &LieAlgebra, x: &DVector<f64>, cfg: &ChartConfig) -> Result<DMatrix<f64>> {
    invert_frame(psi_series(alg, x, cfg.series_order)?)
}

/// Chart components `G(x) = Φ(x)ᵀ g Φ(x)` of the left-invariant metric `g`.
pub fn metric_chart(alg: &LieAlgebra, g: &InnerProduct, x: &DVector<f64>, cfg: &ChartConfig) -> Result<DMatrix<f64>> {
    check_len(alg.dim(), g.dim())?;
    let phi = phi_series(alg, x, cfg.series_order)?;
    invert_frame(phi.clone())?;
    Ok(phi.transpose() * g.matrix() * phi)
}

/// Chart components at `x` of the field extending `w` according to `kind`.
pub fn chart_field(alg: &LieAlgebra, w: &DVector<f64>, kind: WKind, x: &DVector<f64>, cfg: &ChartConfig) -> Result<DVector<f64>> {
    check_len(alg.dim(), w.len())?;
    let frame = match kind {
        WKind::Left | WKind::Central => left_frame(alg, x, cfg)?,
        WKind::Right => right_frame(alg, x, cfg)?,
    };
    Ok(frame * w)
}

// ---------------------------------------------------------------------------
// Finsler pipeline

/// Which Finsler function the chart pipeline evaluates.
#[derive(Debug, Clone, PartialEq)]
pub enum FinslerModel {
    /// `F = h(y,y) / (2 h(W, y))` for the navigation field `W`.
    Kropina { w: DVector<f64>, kind: WKind },
    /// `F = sqrt(h(y,y))`, used to cross-check the pipeline.
    Riemannian,
}

/// Pointwise Finsler data at a chart point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FinslerSample {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub f: f64,
    /// fundamental tensor `½ ∂²F²/∂y∂y`, row-major
    pub g_y: Vec<f64>,
    /// spray coefficients `G^i`
    pub spray: Vec<f64>,
    /// `Ric = R^m_m`
    pub ric: f64,
}

impl FinslerSample {
    pub fn fundamental_tensor(&self) -> DMatrix<f64> {
        let n = self.x.len();
        DMatrix::from_row_slice(n, n, &self.g_y)
    }
}

/// All derivatives used to assemble a [`FinslerSample`].
#[derive(Debug, Clone)]
pub struct FinslerDerivatives {
    pub f2: f64,
    pub df2_dx: DVector<f64>,
    pub df2_dy: DVector<f64>,
    /// `[i][l] = ∂²F²/∂y^i∂y^l`
    pub d2f2_dydy: DMatrix<f64>,
    /// `[k][l] = ∂²F²/∂x^k∂y^l`
    pub d2f2_dxdy: DMatrix<f64>,
    pub spray: DVector<f64>,
    /// `[i][k] = ∂G^i/∂x^k`
    pub dspray_dx: DMatrix<f64>,
    /// `[i][k] = ∂G^i/∂y^k`
    pub dspray_dy: DMatrix<f64>,
    /// `[i][j * n + k] = ∂²G^i/∂x^j∂y^k`
    pub d2spray_dxdy: DMatrix<f64>,
    /// `[i][j * n + k] = ∂²G^i/∂y^j∂y^k`
    pub d2spray_dydy: DMatrix<f64>,
    /// `R^i_k`
    pub riemann: DMatrix<f64>,
    pub ric: f64,
}

// chart metric, navigation field, navigation covector
type RealFields = (DMatrix<f64>, Option<DVector<f64>>, Option<DVector<f64>>);

/// Evaluates a Finsler metric built from left-invariant data in the
/// exponential chart. Jet spaces are built once per engine.
#[derive(Debug, Clone)]
pub struct ChartEngine<'a> {
    alg: &'a LieAlgebra,
    h: InnerProduct,
    model: FinslerModel,
    cfg: ChartConfig,
    // x only, degree 2
    sx: JetSpace,
    // (x, y), total degree 4, x-degree 2
    sxy: JetSpace,
    // (x, y), total degree 3, x-degree 2
    s3: JetSpace,
    // (x, y), total degree 2, x-degree 1
    s2: JetSpace,
}

impl<'a> ChartEngine<'a> {
    pub fn new(alg: &'a LieAlgebra, h: &InnerProduct, model: FinslerModel, cfg: &ChartConfig) -> Result<Self> {
        cfg.validate()?;
        check_len(alg.dim(), h.dim())?;
        if let FinslerModel::Kropina { w, .. } = &model {
            check_len(alg.dim(), w.len())?;
        }
        let n = alg.dim();
        Ok(Self {
            alg,
            h: h.clone(),
            model,
            cfg: cfg.clone(),
            sx: JetSpace::new(n, n, 2, 2),
            sxy: JetSpace::new(2 * n, n, 4, 2),
            s3: JetSpace::new(2 * n, n, 3, 2),
            s2: JetSpace::new(2 * n, n, 2, 1),
        })
    }

    /// Engine for the Kropina metric of navigation data `(h, W)`.
    pub fn kropina(alg: &'a LieAlgebra, nav: &NavigationData, kind: WKind, cfg: &ChartConfig) -> Result<Self> {
        Self::new(alg, nav.h(), FinslerModel::Kropina { w: nav.w().clone(), kind }, cfg)
    }

    pub fn config(&self) -> &ChartConfig {
        &self.cfg
    }

    pub fn model(&self) -> &FinslerModel {
        &self.model
    }

    fn field_spec(&self) -> Option<(&DVector<f64>, WKind)> {
        match &self.model {
            FinslerModel::Kropina { w, kind } => Some((w, *kind)),
            FinslerModel::Riemannian => None,
        }
    }

    fn check_point(&self, x: &DVector<f64>) -> Result<()> {
        check_len(self.alg.dim(), x.len())?;
        invert_frame(phi_series(self.alg, x, self.cfg.series_order)?)?;
        if let FinslerModel::Kropina { kind: WKind::Right, .. } = self.model {
            invert_frame(psi_series(self.alg, x, self.cfg.series_order)?)?;
        }
        Ok(())
    }

    /// Chart metric and navigation covector at `x` (real path).
    fn real_fields(&self, x: &DVector<f64>) -> Result<RealFields> {
        self.check_point(x)?;
        let n = self.alg.dim();
        let f = chart_fields(&Real, self.alg, &self.h, &real_vec(x), self.cfg.series_order, self.field_spec())?;
        Ok((
            to_dmatrix(&f.metric, n),
            f.field.map(DVector::from_vec),
            f.covector.map(DVector::from_vec),
        ))
    }

    /// Chart components of the navigation field at `x` (`None` for the
    /// Riemannian model).
    pub fn field_at(&self, x: &DVector<f64>) -> Result<Option<DVector<f64>>> {
        Ok(self.real_fields(x)?.1)
    }

    /// `F(x, y)` evaluated directly in floating point.
    pub fn f_value(&self, x: &DVector<f64>, y: &DVector<f64>) -> Result<f64> {
        check_len(self.alg.dim(), y.len())?;
        let (gm, _, cov) = self.real_fields(x)?;
        let q = (y.transpose() * &gm * y)[(0, 0)];
        match cov {
            None => Ok(q.sqrt()),
            Some(c) => {
                let l = c.dot(y);
                if !(l > 0.0) {
                    return Err(Error::Domain(format!("⟨W, y⟩ = {l:e} is not positive")));
                }
                Ok(q / (2.0 * l))
            }
        }
    }

    /// `⟨W(x), y⟩_{G(x)}`; always 1 for the Riemannian model.
    pub fn cone_value(&self, x: &DVector<f64>, y: &DVector<f64>) -> Result<f64> {
        let (_, _, cov) = self.real_fields(x)?;
        Ok(cov.map(|c| c.dot(y)).unwrap_or(1.0))
    }

    /// Full jet evaluation of `F²`, the spray and the Finsler Riemann
    /// curvature at `(x, y)`.
    pub fn derivatives(&self, x: &DVector<f64>, y: &DVector<f64>) -> Result<FinslerDerivatives> {
        check_len(self.alg.dim(), y.len())?;
        self.check_point(x)?;
        let n = self.alg.dim();
        let (sx, sxy, s3, s2) = (&self.sx, &self.sxy, &self.s3, &self.s2);

        let xj: Vec<Jet> = (0..n).map(|i| sx.variable(i, x[i])).collect();
        let fields = chart_fields(sx, self.alg, &self.h, &xj, self.cfg.series_order, self.field_spec())?;

        let lift = |j: &Jet| sx.transfer(j, sxy);
        let metric: Vec<Jet> = fields.metric.iter().map(lift).collect();
        let yj: Vec<Jet> = (0..n).map(|i| sxy.variable(n + i, y[i])).collect();

        let mut q = sxy.zero();
        for i in 0..n {
            let mut row = sxy.zero();
            for j in 0..n {
                sxy.fma_assign(&mut row, &metric[i * n + j], &yj[j]);
            }
            sxy.fma_assign(&mut q, &yj[i], &row);
        }
        let f2 = match &fields.covector {
            None => q,
            Some(cov) => {
                let mut l = sxy.zero();
                for i in 0..n {
                    sxy.fma_assign(&mut l, &lift(&cov[i]), &yj[i]);
                }
                let lv = sxy.value(&l);
                if !(lv > 0.0) {
                    return Err(Error::Domain(format!("⟨W, y⟩ = {lv:e} is not positive")));
                }
                let f = sxy.mul(&q, &sxy.recip(&sxy.scale(&l, 2.0)));
                sxy.mul(&f, &f)
            }
        };

        // first and second derivatives of F², re-expanded to degree 2
        let dy3: Vec<Jet> = (0..n).map(|l| sxy.differentiate(&f2, n + l, s3)).collect();
        let df2_dx: Vec<Jet> = (0..n).map(|l| sxy.differentiate(&f2, l, s2)).collect();
        let mut d2xy = Vec::with_capacity(n * n);
        let mut gy = Vec::with_capacity(n * n);
        for k in 0..n {
            for l in 0..n {
                d2xy.push(s3.differentiate(&dy3[l], k, s2));
            }
        }
        for i in 0..n {
            for l in 0..n {
                gy.push(s2.scale(&s3.differentiate(&dy3[l], n + i, s2), 0.5));
            }
        }

        let gy0 = DMatrix::from_fn(n, n, |i, l| s2.value(&gy[i * n + l]));
        let eig = gy0.clone().symmetric_eigen();
        let min_eig = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
        let max_eig = eig.eigenvalues.iter().cloned().fold(0.0_f64, f64::max);
        if !(min_eig > 0.0) || max_eig / min_eig > MAX_FUNDAMENTAL_CONDITION {
            return Err(Error::SampleRejected(format!(
                "fundamental tensor ill-conditioned (eigenvalues in [{min_eig:e}, {max_eig:e}])"
            )));
        }
        let ginv = mat::inverse(s2, &gy, n).ok_or_else(|| Error::SampleRejected("singular fundamental tensor".into()))?;

        let ys: Vec<Jet> = (0..n).map(|k| s2.variable(n + k, y[k])).collect();
        let mut spray_j = Vec::with_capacity(n);
        let mut bracket = Vec::with_capacity(n);
        for l in 0..n {
            let mut b = s2.scale(&df2_dx[l], -1.0);
            for k in 0..n {
                s2.fma_assign(&mut b, &d2xy[k * n + l], &ys[k]);
            }
            bracket.push(b);
        }
        for i in 0..n {
            let mut gi = s2.zero();
            for l in 0..n {
                s2.fma_assign(&mut gi, &ginv[i * n + l], &bracket[l]);
            }
            spray_j.push(s2.scale(&gi, 0.25));
        }

        let e = |pairs: &[(usize, u8)]| {
            let mut v = vec![0u8; 2 * n];
            for &(var, p) in pairs {
                v[var] += p;
            }
            v
        };
        let d = |jet: &Jet, pairs: &[(usize, u8)]| s2.derivative_at(jet, &e(pairs));

        let spray = DVector::from_fn(n, |i, _| s2.value(&spray_j[i]));
        let dspray_dx = DMatrix::from_fn(n, n, |i, k| d(&spray_j[i], &[(k, 1)]));
        let dspray_dy = DMatrix::from_fn(n, n, |i, k| d(&spray_j[i], &[(n + k, 1)]));
        let d2spray_dxdy = DMatrix::from_fn(n, n * n, |i, jk| d(&spray_j[i], &[(jk / n, 1), (n + jk % n, 1)]));
        let d2spray_dydy = DMatrix::from_fn(n, n * n, |i, jk| d(&spray_j[i], &[(n + jk / n, 1), (n + jk % n, 1)]));

        let mut riemann = DMatrix::zeros(n, n);
        for i in 0..n {
            for k in 0..n {
                let mut r = 2.0 * dspray_dx[(i, k)];
                for j in 0..n {
                    r -= y[j] * d2spray_dxdy[(i, j * n + k)];
                    r += 2.0 * spray[j] * d2spray_dydy[(i, j * n + k)];
                    r -= dspray_dy[(i, j)] * dspray_dy[(j, k)];
                }
                riemann[(i, k)] = r;
            }
        }
        let ric = riemann.trace();

        let f2v = sxy.value(&f2);
        let zero_n = vec![0u8; 2 * n];
        debug_assert_eq!(s2.derivative_at(&df2_dx[0], &zero_n), s2.value(&df2_dx[0]));
        Ok(FinslerDerivatives {
            f2: f2v,
            df2_dx: DVector::from_fn(n, |l, _| s2.value(&df2_dx[l])),
            df2_dy: DVector::from_fn(n, |l, _| s3.value(&dy3[l])),
            d2f2_dydy: gy0 * 2.0,
            d2f2_dxdy: DMatrix::from_fn(n, n, |k, l| s2.value(&d2xy[k * n + l])),
            spray,
            dspray_dx,
            dspray_dy,
            d2spray_dxdy,
            d2spray_dydy,
            riemann,
            ric,
        })
    }

    pub fn sample(&self, x: &DVector<f64>, y: &DVector<f64>) -> Result<FinslerSample> {
        let d = self.derivatives(x, y)?;
        let g_y = d.d2f2_dydy * 0.5;
        Ok(FinslerSample {
            x: real_vec(x),
            y: real_vec(y),
            f: d.f2.sqrt(),
            g_y: g_y.transpose().iter().cloned().collect(),
            spray: real_vec(&d.spray),
            ric: d.ric,
        })
    }

    /// Seeded `(x, y)` pairs: `x` uniform in the ball of radius
    /// `cfg.radius`, `y` Gaussian restricted to the admissible cone.
    pub fn sample_points(&self) -> Result<Vec<(DVector<f64>, DVector<f64>)>> {
        let n = self.alg.dim();
        let mut rng = ChaCha8Rng::seed_from_u64(self.cfg.rng_seed);
        let mut out = Vec::with_capacity(self.cfg.sample_count);
        for _ in 0..self.cfg.sample_count {
            let x = sample_ball(&mut rng, n, self.cfg.radius);
            let (gm, field, _) = self.real_fields(&x)?;
            let y = match field {
                None => gaussian(&mut rng, n),
                Some(w) => sample_cone(&mut rng, &gm, &w)?,
            };
            out.push((x, y));
        }
        Ok(out)
    }
}

fn gaussian(rng: &mut ChaCha8Rng, n: usize) -> DVector<f64> {
    DVector::from_fn(n, |_, _| rng.sample::<f64, _>(StandardNormal))
}

fn sample_ball(rng: &mut ChaCha8Rng, n: usize, radius: f64) -> DVector<f64> {
    let dir = gaussian(rng, n);
    let u: f64 = rng.random();
    let r = radius * u.powf(1.0 / n as f64);
    let nrm = dir.norm();
    if nrm == 0.0 {
        return DVector::zeros(n);
    }
    dir * (r / nrm)
}

fn sample_cone(rng: &mut ChaCha8Rng, gm: &DMatrix<f64>, w: &DVector<f64>) -> Result<DVector<f64>> {
    let n = w.len();
    let dot = |a: &DVector<f64>, b: &DVector<f64>| (a.transpose() * gm * b)[(0, 0)];
    let wn = dot(w, w).sqrt();
    for _ in 0..1000 {
        let y = gaussian(rng, n);
        let yn = dot(&y, &y).sqrt();
        if dot(w, &y) >= CONE_MARGIN * wn * yn {
            return Ok(y);
        }
    }
    Err(Error::SampleRejected("could not sample an admissible direction".into()))
}

/// Finsler data of the Kropina metric with navigation data `nav` at `(x, y)`.
pub fn finsler_data(
    alg: &LieAlgebra,
    nav: &NavigationData,
    kind: WKind,
    x: &DVector<f64>,
    y: &DVector<f64>,
    cfg: &ChartConfig,
) -> Result<FinslerSample> {
    ChartEngine::kropina(alg, nav, kind, cfg)?.sample(x, y)
}

/// Summary of an Einstein-equation scan over seeded samples.
#[derive(Debug, Clone, Serialize)]
pub struct EinsteinScan {
    pub sigma: f64,
    pub samples: Vec<FinslerSample>,
    pub rejected: Vec<String>,
    /// `max |Ric − σF²| / F²`
    pub max_residual: f64,
    /// smallest and largest `Ric / F²`
    pub ratio_range: (f64, f64),
}

/// Samples `Ric_F − σ F²` at the engine's seeded points.
pub fn einstein_scan(engine: &ChartEngine<'_>, sigma: f64) -> Result<EinsteinScan> {
    let mut samples = Vec::new();
    let mut rejected = Vec::new();
    let mut max_residual = 0.0_f64;
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for (x, y) in engine.sample_points()? {
        match engine.sample(&x, &y) {
            Ok(s) => {
                let f2 = s.f * s.f;
                let ratio = s.ric / f2;
                max_residual = max_residual.max((s.ric - sigma * f2).abs() / f2);
                lo = lo.min(ratio);
                hi = hi.max(ratio);
                samples.push(s);
            }
            Err(e @ Error::SampleRejected(_)) => rejected.push(e.to_string()),
            Err(e) => return Err(e),
        }
    }
    if samples.is_empty() {
        max_residual = f64::INFINITY;
    }
    Ok(EinsteinScan { sigma, samples, rejected, max_residual, ratio_range: (lo, hi) })
}

// ---------------------------------------------------------------------------
// Riemannian oracle and invariance checks

/// Ricci tensor of the chart metric at `x` from Christoffel symbols, in
/// chart components.
pub fn riemann_ricci_chart(alg: &LieAlgebra, g: &InnerProduct, x: &DVector<f64>, cfg: &ChartConfig) -> Result<DMatrix<f64>> {
    check_len(alg.dim(), x.len())?;
    check_len(alg.dim(), g.dim())?;
    cfg.validate()?;
    invert_frame(phi_series(alg, x, cfg.series_order)?)?;
    let n = alg.dim();
    let s2 = JetSpace::new(n, n, 2, 2);
    let s1 = JetSpace::new(n, n, 1, 1);
    let xj: Vec<Jet> = (0..n).map(|i| s2.variable(i, x[i])).collect();
    let metric = chart_fields(&s2, alg, g, &xj, cfg.series_order, None)?.metric;

    // dg[(k * n + i) * n + j] = ∂_k G_ij as a degree-1 jet
    let mut dg = Vec::with_capacity(n * n * n);
    for k in 0..n {
        for ij in 0..n * n {
            dg.push(s2.differentiate(&metric[ij], k, &s1));
        }
    }
    let metric1: Vec<Jet> = metric.iter().map(|j| s2.transfer(j, &s1)).collect();
    let ginv = mat::inverse(&s1, &metric1, n).ok_or_else(|| Error::Chart("singular chart metric".into()))?;
    let dgi = |k: usize, i: usize, j: usize| &dg[(k * n + i) * n + j];

    // gamma[(a * n + b) * n + c] = Γ^a_{bc}
    let mut gamma = Vec::with_capacity(n * n * n);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let mut s = s1.zero();
                for d in 0..n {
                    let t = s1.sub(&s1.add(dgi(b, d, c), dgi(c, d, b)), dgi(d, b, c));
                    s1.fma_assign(&mut s, &ginv[a * n + d], &t);
                }
                gamma.push(s1.scale(&s, 0.5));
            }
        }
    }
    let gv = |a: usize, b: usize, c: usize| s1.value(&gamma[(a * n + b) * n + c]);
    let dgam = |m: usize, a: usize, b: usize, c: usize| {
        let mut e = vec![0u8; n];
        e[m] = 1;
        s1.derivative_at(&gamma[(a * n + b) * n + c], &e)
    };

    // Ric_{bd} = R^a_{bad}, R^a_{bcd} = ∂_c Γ^a_{db} − ∂_d Γ^a_{cb} + Γ^a_{ce}Γ^e_{db} − Γ^a_{de}Γ^e_{cb}
    let mut ric = DMatrix::zeros(n, n);
    for b in 0..n {
        for d in 0..n {
            let mut s = 0.0;
            for a in 0..n {
                s += dgam(a, a, d, b) - dgam(d, a, a, b);
                for e in 0..n {
                    s += gv(a, a, e) * gv(e, d, b) - gv(a, d, e) * gv(e, a, b);
                }
            }
            ric[(b, d)] = s;
        }
    }
    Ok(ric)
}

/// [`riemann_ricci_chart`] expressed in the left-invariant frame at `x`,
/// comparable with the algebraic Ricci tensor.
pub fn riemann_ricci_chart_pulled_back(alg: &LieAlgebra, g: &InnerProduct, x: &DVector<f64>, cfg: &ChartConfig) -> Result<DMatrix<f64>> {
    let ric = riemann_ricci_chart(alg, g, x, cfg)?;
    let p = left_frame(alg, x, cfg)?;
    Ok(p.transpose() * ric * p)
}

/// `(L_V G)_{ij} = V^k ∂_k G_ij + G_kj ∂_i V^k + G_ik ∂_j V^k` at `x`, with
/// `V` the chart field extending `w` per `kind`.
pub fn lie_derivative_metric(
    alg: &LieAlgebra,
    g: &InnerProduct,
    w: &DVector<f64>,
    kind: WKind,
    x: &DVector<f64>,
    cfg: &ChartConfig,
) -> Result<DMatrix<f64>> {
    check_len(alg.dim(), x.len())?;
    check_len(alg.dim(), w.len())?;
    check_len(alg.dim(), g.dim())?;
    cfg.validate()?;
    invert_frame(phi_series(alg, x, cfg.series_order)?)?;
    if kind == WKind::Right {
        invert_frame(psi_series(alg, x, cfg.series_order)?)?;
    }
    let n = alg.dim();
    let s1 = JetSpace::new(n, n, 1, 1);
    let xj: Vec<Jet> = (0..n).map(|i| s1.variable(i, x[i])).collect();
    let fields = chart_fields(&s1, alg, g, &xj, cfg.series_order, Some((w, kind)))?;
    let gm = &fields.metric;
    let v = fields.field.expect("field requested");
    let d = |j: &Jet, k: usize| {
        let mut e = vec![0u8; n];
        e[k] = 1;
        s1.derivative_at(j, &e)
    };
    let mut out = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut s = 0.0;
            for k in 0..n {
                s += s1.value(&v[k]) * d(&gm[i * n + j], k);
                s += s1.value(&gm[k * n + j]) * d(&v[k], i);
                s += s1.value(&gm[i * n + k]) * d(&v[k], j);
            }
            out[(i, j)] = s;
        }
    }
    Ok(out)
}

/// Seeded chart points in the ball of radius `cfg.radius`.
pub fn sample_chart_points(n: usize, cfg: &ChartConfig) -> Vec<DVector<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    (0..cfg.sample_count).map(|_| sample_ball(&mut rng, n, cfg.radius)).collect()
}

/// Max over sampled chart points of the largest entry of `L_V h`.
pub fn max_lie_derivative(alg: &LieAlgebra, g: &InnerProduct, w: &DVector<f64>, kind: WKind, cfg: &ChartConfig) -> Result<f64> {
    let mut worst = 0.0_f64;
    for x in sample_chart_points(alg.dim(), cfg) {
        worst = worst.max(linalg::max_abs(&lie_derivative_metric(alg, g, w, kind, &x, cfg)?));
    }
    Ok(worst)
}

/// `max |F(x, P(x) u) − F(0, u)| / F(0, u)` over seeded samples; zero for a
/// left-invariant Finsler metric.
pub fn left_invariance_check(alg: &LieAlgebra, nav: &NavigationData, kind: WKind, cfg: &ChartConfig) -> Result<f64> {
    let engine = ChartEngine::kropina(alg, nav, kind, cfg)?;
    let n = alg.dim();
    let origin = DVector::zeros(n);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let mut worst = 0.0_f64;
    for _ in 0..cfg.sample_count {
        let x = sample_ball(&mut rng, n, cfg.radius);
        let u = sample_cone(&mut rng, nav.h().matrix(), nav.w())?;
        let p = left_frame(alg, &x, cfg)?;
        let y = &p * &u;
        if !(engine.cone_value(&x, &y)? > 0.0) {
            // the translated vector left the cone: maximal violation
            return Ok(f64::INFINITY);
        }
        let f0 = engine.f_value(&origin, &u)?;
        let fx = engine.f_value(&x, &y)?;
        worst = worst.max((fx - f0).abs() / f0);
    }
    Ok(worst)
}

/// `max | ‖exp(ad x) W‖_g − 1 |` over seeded chart points.
pub fn ad_orbit_norm(alg: &LieAlgebra, g: &InnerProduct, w: &DVector<f64>, cfg: &ChartConfig) -> Result<f64> {
    check_len(alg.dim(), w.len())?;
    check_len(alg.dim(), g.dim())?;
    cfg.validate()?;
    let mut worst = 0.0_f64;
    for x in sample_chart_points(alg.dim(), cfg) {
        let v = exp_ad(alg, &x, cfg.series_order)? * w;
        worst = worst.max((g.norm(&v) - 1.0).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::Bracket;

    fn names3() -> Vec<String> {
        vec!["x".into(), "y".into(), "z".into()]
    }

    fn su2() -> LieAlgebra {
        LieAlgebra::from_brackets(
            names3(),
            &[
                Bracket::new(0, 1, vec![0.0, 0.0, 1.0]),
                Bracket::new(0, 2, vec![0.0, -1.0, 0.0]),
                Bracket::new(1, 2, vec![1.0, 0.0, 0.0]),
            ],
        )
        .unwrap()
    }

    fn v(xs: &[f64]) -> DVector<f64> {
        DVector::from_column_slice(xs)
    }

    #[test]
    fn phi_at_origin_and_abelian() {
        let a = su2();
        assert_eq!(phi_series(&a, &v(&[0.0; 3]), 10).unwrap(), DMatrix::identity(3, 3));
        let r3 = LieAlgebra::abelian(3).unwrap();
        assert_eq!(phi_series(&r3, &v(&[0.2, -0.1, 0.3]), 10).unwrap(), DMatrix::identity(3, 3));
    }

    #[test]
    fn phi_first_order() {
        let a = su2();
        let x = v(&[0.01, -0.02, 0.015]);
        let phi = phi_series(&a, &x, 10).unwrap();
        let first = DMatrix::identity(3, 3) - a.ad_matrix(&x).unwrap() * 0.5;
        assert!((phi - first).amax() < x.norm_squared());
    }

    #[test]
    fn frames_invert_series() {
        let a = su2();
        let cfg = ChartConfig::default();
        let x = v(&[0.1, 0.0, 0.0]);
        let p = left_frame(&a, &x, &cfg).unwrap();
        let phi = phi_series(&a, &x, cfg.series_order).unwrap();
        assert!((&p * &phi - DMatrix::identity(3, 3)).amax() < 1e-12);
        let q = right_frame(&a, &x, &cfg).unwrap();
        assert!((&q - &p).amax() > 0.0);
        assert_eq!(left_frame(&a, &v(&[0.0; 3]), &cfg).unwrap(), DMatrix::identity(3, 3));
        assert_eq!(right_frame(&a, &v(&[0.0; 3]), &cfg).unwrap(), DMatrix::identity(3, 3));
    }

    #[test]
    fn abelian_frames_coincide() {
        let a = LieAlgebra::abelian(3).unwrap();
        let cfg = ChartConfig::default();
        let x = v(&[0.2, 0.1, -0.1]);
        assert_eq!(left_frame(&a, &x, &cfg).unwrap(), DMatrix::identity(3, 3));
        assert_eq!(right_frame(&a, &x, &cfg).unwrap(), left_frame(&a, &x, &cfg).unwrap());
        let g = InnerProduct::diagonal(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(&metric_chart(&a, &g, &x, &cfg).unwrap(), g.matrix());
    }

    #[test]
    fn metric_chart_frame_compatibility() {
        let a = su2();
        let g = InnerProduct::diagonal(&[1.0, 2.0, 3.0]).unwrap();
        let cfg = ChartConfig { sample_count: 20, rng_seed: 7, ..Default::default() };
        for x in sample_chart_points(3, &cfg) {
            let gm = metric_chart(&a, &g, &x, &cfg).unwrap();
            let p = left_frame(&a, &x, &cfg).unwrap();
            assert!((p.transpose() * gm * p - g.matrix()).amax() < 1e-12);
        }
    }

    #[test]
    fn large_radius_is_rejected() {
        let a = su2();
        let cfg = ChartConfig { series_order: 60, ..Default::default() };
        // ‖ad x‖ = 2π makes Φ singular for the exact series
        let x = v(&[2.0 * std::f64::consts::PI, 0.0, 0.0]);
        assert!(matches!(left_frame(&a, &x, &cfg), Err(Error::Chart(_))));
    }

    #[test]
    fn invalid_config_rejected() {
        let cfg = ChartConfig { series_order: 3, ..Default::default() };
        assert!(cfg.validate().is_err());
        let cfg = ChartConfig { radius: -1.0, ..Default::default() };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn abelian_kropina_is_ricci_flat() {
        let a = LieAlgebra::abelian(3).unwrap();
        let nav = NavigationData::new(InnerProduct::identity(3), v(&[1.0, 0.0, 0.0])).unwrap();
        let engine = ChartEngine::kropina(&a, &nav, WKind::Left, &ChartConfig::default()).unwrap();
        for (x, y) in engine.sample_points().unwrap() {
            let s = engine.sample(&x, &y).unwrap();
            assert!(s.spray.iter().all(|g| g.abs() < 1e-14));
            assert!(s.ric.abs() < 1e-14);
        }
    }

    #[test]
    fn bi_invariant_right_field_is_einstein() {
        let a = su2();
        let nav = NavigationData::new(InnerProduct::identity(3), v(&[1.0, 0.0, 0.0])).unwrap();
        let cfg = ChartConfig { sample_count: 5, ..Default::default() };
        let engine = ChartEngine::kropina(&a, &nav, WKind::Right, &cfg).unwrap();
        let scan = einstein_scan(&engine, 0.5).unwrap();
        assert_eq!(scan.samples.len(), 5);
        assert!(scan.max_residual < 1e-6, "{scan:?}");
    }

    #[test]
    fn riemannian_model_matches_christoffel_ricci() {
        let a = su2();
        let g = InnerProduct::diagonal(&[1.0, 2.0, 3.0]).unwrap();
        let cfg = ChartConfig { sample_count: 4, rng_seed: 3, ..Default::default() };
        let engine = ChartEngine::new(&a, &g, FinslerModel::Riemannian, &cfg).unwrap();
        for (x, y) in engine.sample_points().unwrap() {
            let s = engine.sample(&x, &y).unwrap();
            let ric = riemann_ricci_chart(&a, &g, &x, &cfg).unwrap();
            let q = (y.transpose() * ric * &y)[(0, 0)];
            assert!((s.ric - q).abs() < 1e-9, "{} vs {}", s.ric, q);
        }
    }

    #[test]
    fn chart_ricci_at_origin_matches_algebra() {
        let a = su2();
        let g = InnerProduct::diagonal(&[1.0, 2.0, 3.0]).unwrap();
        let cfg = ChartConfig::default();
        let chart = riemann_ricci_chart(&a, &g, &v(&[0.0; 3]), &cfg).unwrap();
        let alg = crate::riemann::riemann_ricci(&a, &g).unwrap();
        assert!((chart - alg).amax() < 1e-12);
    }
}
