//! Reductive homogeneous spaces `G/H` with `𝔤 = 𝔥 ⊕ 𝔪`, `[𝔥, 𝔪] ⊆ 𝔪`.
//!
//! `G`-invariant metrics are inner products on `𝔪` invariant under `ad 𝔥`.
//! Curvature uses the Nomizu operator `Λ(X)Y = ½[X,Y]_𝔪 + U(X,Y)` with
//! `⟨U(X,Y),Z⟩ = ½(⟨[Z,X]_𝔪,Y⟩ + ⟨X,[Z,Y]_𝔪⟩)` and
//! `R(X,Y) = [Λ(X), Λ(Y)] − Λ([X,Y]_𝔪) − ad([X,Y]_𝔥)`.
//!
//! Isotropy invariance is tested infinitesimally (`[𝔥, W] = 0`), which is
//! the same as `Ad(H)`-invariance for connected `H`.

use nalgebra::{DMatrix, DVector};

use crate::error::{check_len, Error, Result};
use crate::kropina::{Certificate, Check, Verdict};
use crate::lie::{InnerProduct, LieAlgebra};
use crate::linalg;
use crate::riemann::EinsteinFit;

/// Tolerance for the subalgebra, reductivity and invariance tests.
pub const STRUCTURE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct ReductiveSpace {
    ambient: LieAlgebra,
    h_basis: Vec<DVector<f64>>,
    m_basis: Vec<DVector<f64>>,
    metric_m: InnerProduct,
    // inverse of [h_basis | m_basis]
    split: DMatrix<f64>,
}

impl ReductiveSpace {
    pub fn ambient(&self) -> &LieAlgebra {
        &self.ambient
    }

    pub fn h_basis(&self) -> &[DVector<f64>] {
        &self.h_basis
    }

    pub fn m_basis(&self) -> &[DVector<f64>] {
        &self.m_basis
    }

    pub fn metric_m(&self) -> &InnerProduct {
        &self.metric_m
    }

    pub fn dim_m(&self) -> usize {
        self.m_basis.len()
    }

    /// Same decomposition with another `ad 𝔥`-invariant metric on `𝔪`.
    pub fn with_metric(&self, metric_m: InnerProduct) -> Result<Self> {
        check_len(self.dim_m(), metric_m.dim())?;
        let out = Self { metric_m, ..self.clone() };
        out.check_metric_invariance()?;
        Ok(out)
    }

    /// Ambient vector with the given `𝔪` coordinates.
    pub fn m_vector(&self, coords: &DVector<f64>) -> DVector<f64> {
        let mut v = DVector::zeros(self.ambient.dim());
        for (c, b) in coords.iter().zip(&self.m_basis) {
            v += b * *c;
        }
        v
    }

    /// Splits an ambient vector into (`𝔥` part as an ambient vector, `𝔪`
    /// coordinates).
    pub fn split(&self, v: &DVector<f64>) -> (DVector<f64>, DVector<f64>) {
        let coords = &self.split * v;
        let k = self.h_basis.len();
        let mut h = DVector::zeros(self.ambient.dim());
        for (i, b) in self.h_basis.iter().enumerate() {
            h += b * coords[i];
        }
        (h, coords.rows(k, self.dim_m()).into_owned())
    }

    /// `𝔪` coordinates of an ambient vector that lies in `𝔪`.
    pub fn to_m_coords(&self, v: &DVector<f64>) -> Result<DVector<f64>> {
        check_len(self.ambient.dim(), v.len())?;
        let (h, m) = self.split(v);
        if h.amax() > STRUCTURE_TOL * v.amax().max(1.0) {
            return Err(Error::Input("vector has a component along the isotropy subalgebra".into()));
        }
        Ok(m)
    }

    /// `[X, Y]` for `𝔪` coordinates, split as (`𝔥` part, `𝔪` coordinates).
    pub fn bracket_m(&self, x: &DVector<f64>, y: &DVector<f64>) -> (DVector<f64>, DVector<f64>) {
        self.split(&self.ambient.bracket_unchecked(&self.m_vector(x), &self.m_vector(y)))
    }

    /// Matrix of `ad(h)` restricted to `𝔪`, for an ambient `h`.
    pub fn isotropy_action(&self, h: &DVector<f64>) -> DMatrix<f64> {
        let p = self.dim_m();
        let mut m = DMatrix::zeros(p, p);
        for j in 0..p {
            let (_, col) = self.split(&self.ambient.bracket_unchecked(h, &self.m_basis[j]));
            m.set_column(j, &col);
        }
        m
    }

    fn check_metric_invariance(&self) -> Result<()> {
        let g = self.metric_m.matrix();
        let scale = g.amax();
        for (a, h) in self.h_basis.iter().enumerate() {
            let act = self.isotropy_action(h);
            let defect = linalg::max_abs(&(act.transpose() * g + g * &act));
            if defect > STRUCTURE_TOL * scale.max(1.0) * h.amax().max(1.0) {
                return Err(Error::NotReductive {
                    invariant: "metric_invariance",
                    detail: format!("metric on 𝔪 is not invariant under isotropy generator {a} (defect {defect:e})"),
                });
            }
        }
        Ok(())
    }
}

/// `𝔪` = `Q`-orthogonal complement of span(`h_basis`), with the restriction
/// of `Q` as metric.
pub fn build_reductive(ambient: &LieAlgebra, h_basis: &[DVector<f64>], q: &InnerProduct) -> Result<ReductiveSpace> {
    let n = ambient.dim();
    check_len(n, q.dim())?;
    for h in h_basis {
        check_len(n, h.len())?;
    }
    let k = h_basis.len();
    if k > 0 {
        let hm = DMatrix::from_columns(h_basis);
        let rank = k - linalg::kernel_basis(&hm).len();
        if rank < k {
            return Err(Error::Input("subalgebra basis is linearly dependent".into()));
        }
    }
    let mut rows = DMatrix::zeros(k, n);
    for (i, h) in h_basis.iter().enumerate() {
        rows.set_row(i, &(q.matrix() * h).transpose());
    }
    let m_basis = linalg::kernel_basis(&rows);
    let p = m_basis.len();
    let mut full = DMatrix::zeros(n, n);
    for (i, b) in h_basis.iter().chain(&m_basis).enumerate() {
        full.set_column(i, b);
    }
    let split = full.try_inverse().ok_or_else(|| Error::Input("degenerate decomposition".into()))?;
    let metric = DMatrix::from_fn(p, p, |i, j| q.dot(&m_basis[i], &m_basis[j]));
    let metric_m = InnerProduct::from_symmetrized(metric)?;
    let space = ReductiveSpace { ambient: ambient.clone(), h_basis: h_basis.to_vec(), m_basis, metric_m, split };

    let scale = h_basis.iter().map(|h| h.amax()).fold(1.0_f64, f64::max);
    let tol = STRUCTURE_TOL * scale * scale;
    for (a, ha) in h_basis.iter().enumerate() {
        for (b, hb) in h_basis.iter().enumerate().skip(a + 1) {
            let (_, m) = space.split(&ambient.bracket_unchecked(ha, hb));
            if m.amax() > tol {
                return Err(Error::NotReductive {
                    invariant: "subalgebra",
                    detail: format!("[h_{a}, h_{b}] leaves the subalgebra (𝔪 component {:e})", m.amax()),
                });
            }
        }
        for (j, mj) in space.m_basis.iter().enumerate() {
            let (h, _) = space.split(&ambient.bracket_unchecked(ha, mj));
            if h.amax() > tol {
                return Err(Error::NotReductive {
                    invariant: "reductive",
                    detail: format!("[h_{a}, m_{j}] has a component along the subalgebra ({:e})", h.amax()),
                });
            }
        }
    }
    space.check_metric_invariance()?;
    Ok(space)
}

/// `metric_m`-orthonormal basis (in `𝔪` coordinates) of
/// `𝔪₀ = {W ∈ 𝔪 : [h, W] = 0 for all h ∈ 𝔥}`.
pub fn invariant_vectors(s: &ReductiveSpace) -> Vec<DVector<f64>> {
    let p = s.dim_m();
    let k = s.h_basis.len();
    let mut m = DMatrix::zeros(k * p, p);
    let mut reference = 0.0_f64;
    for (a, h) in s.h_basis.iter().enumerate() {
        reference = reference.max(s.ambient.ad_unchecked(h).norm());
        m.view_mut((a * p, 0), (p, p)).copy_from(&s.isotropy_action(h));
    }
    let euclid = linalg::kernel_basis_scaled(&m, reference);
    linalg::gram_schmidt(&euclid, s.metric_m.matrix()).into_iter().map(linalg::fix_sign).collect()
}

/// Levi-Civita data of the invariant metric on `G/H`.
#[derive(Debug, Clone)]
pub struct NomizuCurvature<'a> {
    space: &'a ReductiveSpace,
    // lambda[i] = matrix of Y -> Λ(m_i) Y
    lambda: Vec<DMatrix<f64>>,
}

impl<'a> NomizuCurvature<'a> {
    pub fn new(space: &'a ReductiveSpace) -> Self {
        let p = space.dim_m();
        let g = space.metric_m.matrix();
        let e = |i: usize| linalg::unit(p, i);
        // bm[i][j] = [m_i, m_j]_𝔪
        let bm: Vec<Vec<DVector<f64>>> = (0..p).map(|i| (0..p).map(|j| space.bracket_m(&e(i), &e(j)).1).collect()).collect();
        let dot = |a: &DVector<f64>, b: &DVector<f64>| (a.transpose() * g * b)[(0, 0)];
        let mut lambda = Vec::with_capacity(p);
        for i in 0..p {
            let mut l = DMatrix::zeros(p, p);
            for j in 0..p {
                // ⟨U(m_i, m_j), m_z⟩ = ½(⟨[m_z, m_i]_𝔪, m_j⟩ + ⟨m_i, [m_z, m_j]_𝔪⟩)
                let u_low = DVector::from_fn(p, |z, _| 0.5 * (dot(&bm[z][i], &e(j)) + dot(&e(i), &bm[z][j])));
                let col = &bm[i][j] * 0.5 + space.metric_m.inverse() * u_low;
                l.set_column(j, &col);
            }
            lambda.push(l);
        }
        Self { space, lambda }
    }

    pub fn lambda(&self, x: &DVector<f64>) -> DMatrix<f64> {
        let p = self.space.dim_m();
        let mut m = DMatrix::zeros(p, p);
        for (c, l) in x.iter().zip(&self.lambda) {
            if *c != 0.0 {
                m += l * *c;
            }
        }
        m
    }

    /// Matrix of `Z -> R(X, Y) Z` on `𝔪` coordinates.
    pub fn operator(&self, x: &DVector<f64>, y: &DVector<f64>) -> DMatrix<f64> {
        let lx = self.lambda(x);
        let ly = self.lambda(y);
        let (bh, bm) = self.space.bracket_m(x, y);
        &lx * &ly - &ly * &lx - self.lambda(&bm) - self.space.isotropy_action(&bh)
    }

    /// `⟨R(X,Y)Y, X⟩ / (|X|²|Y|² − ⟨X,Y⟩²)`.
    pub fn sectional(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        let g = self.space.metric_m();
        let num = g.dot(&(self.operator(x, y) * y), x);
        let den = g.dot(x, x) * g.dot(y, y) - g.dot(x, y).powi(2);
        num / den
    }

    /// `Ric(u, v) = Σ_k ⟨R(ê_k, u) v, ê_k⟩` on `𝔪` coordinates.
    pub fn ricci(&self) -> DMatrix<f64> {
        let p = self.space.dim_m();
        let gm = self.space.metric_m.matrix();
        let frame = linalg::orthonormal_frame(gm);
        let mut ric = DMatrix::zeros(p, p);
        for k in 0..p {
            let ek = frame.column(k).into_owned();
            let gek = gm * &ek;
            for i in 0..p {
                let row = gek.transpose() * self.operator(&ek, &linalg::unit(p, i));
                for j in 0..p {
                    ric[(i, j)] += row[(0, j)];
                }
            }
        }
        (&ric + ric.transpose()) * 0.5
    }
}

pub fn nomizu_ricci(s: &ReductiveSpace) -> DMatrix<f64> {
    NomizuCurvature::new(s).ricci()
}

pub fn nomizu_einstein_fit(s: &ReductiveSpace) -> EinsteinFit {
    EinsteinFit::from_tensors(&nomizu_ricci(s), s.metric_m.matrix())
}

#[derive(Debug, Clone, PartialEq)]
pub struct HomogeneousOptions {
    pub tol_einstein: f64,
    pub tol_unit: f64,
    pub tol_invariant: f64,
}

impl Default for HomogeneousOptions {
    fn default() -> Self {
        Self { tol_einstein: 1e-8, tol_unit: crate::kropina::UNIT_TOL, tol_invariant: 1e-10 }
    }
}

/// Certificate for the Kropina metric with navigation data
/// `(metric_m, W)` on `G/H`, `W` given in `𝔪` coordinates.
pub fn homogeneous_kropina_certificate(s: &ReductiveSpace, w: &DVector<f64>, opts: &HomogeneousOptions) -> Result<Certificate> {
    check_len(s.dim_m(), w.len())?;
    let g = s.metric_m();
    let wn = g.norm(w);
    if !(wn > 0.0) {
        return Err(Error::Input("navigation vector must be nonzero".into()));
    }
    let fit = nomizu_einstein_fit(s);
    let m0 = invariant_vectors(s);
    let dist = linalg::distance_to_span(w, &m0, g.matrix()) / wn;
    let checks = vec![
        Check::below("einstein", fit.residual, opts.tol_einstein),
        Check::below("unit_norm", (wn - 1.0).abs(), opts.tol_unit),
        Check::below("isotropy_invariant", dist, opts.tol_invariant),
    ];
    let verdict = match (checks[0].pass && checks[1].pass, checks[2].pass) {
        (true, true) => Verdict::HomogeneousEinsteinKropina,
        (true, false) => Verdict::EinsteinNonHomogeneous,
        _ => Verdict::Falsified,
    };
    let ricci_constant = verdict != Verdict::Falsified && s.dim_m() >= 3;
    Ok(Certificate { checks, verdict, sigma: fit.sigma, fit, ricci_constant })
}
