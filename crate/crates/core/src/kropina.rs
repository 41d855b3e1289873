//! Kropina metrics `F = α²/β` built from left-invariant data, their
//! navigation representation `F = h²/(2W₀)`, and Einstein certificates.

use std::fmt;
use std::str::FromStr;

use nalgebra::DVector;
use serde::Serialize;

use crate::chart::{self, ChartConfig};
use crate::error::{check_len, Error, Result};
use crate::lie::{InnerProduct, LieAlgebra};
use crate::linalg;
use crate::riemann::{self, EinsteinFit};

/// Tolerance on `‖W‖_h = 1` for navigation data.
pub const UNIT_TOL: f64 = 1e-12;

/// How the navigation vector at the identity is extended to a field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WKind {
    Left,
    Right,
    Central,
}

impl WKind {
    pub fn as_str(self) -> &'static str {
        match self {
            WKind::Left => "left",
            WKind::Right => "right",
            WKind::Central => "central",
        }
    }
}

impl fmt::Display for WKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for WKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "left" => Ok(WKind::Left),
            "right" => Ok(WKind::Right),
            "central" => Ok(WKind::Central),
            other => Err(Error::Input(format!("unknown w_kind {other:?} (expected left, right or central)"))),
        }
    }
}

/// `F(y) = a(y,y) / a(X,y)` on the cone `a(X,y) > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct KropinaAlgebraic {
    a: InnerProduct,
    x: DVector<f64>,
}

impl KropinaAlgebraic {
    pub fn new(a: InnerProduct, x: DVector<f64>) -> Result<Self> {
        check_len(a.dim(), x.len())?;
        if !(a.dot(&x, &x) > 0.0) {
            return Err(Error::Input("the defining vector X must be nonzero".into()));
        }
        Ok(Self { a, x })
    }

    pub fn a(&self) -> &InnerProduct {
        &self.a
    }

    pub fn x(&self) -> &DVector<f64> {
        &self.x
    }

    /// `b = ‖β‖_α = sqrt(a(X,X))`.
    pub fn b(&self) -> f64 {
        self.a.norm(&self.x)
    }
}

/// Navigation data `(h, W)` with `‖W‖_h = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct NavigationData {
    h: InnerProduct,
    w: DVector<f64>,
    scale: f64,
}

impl NavigationData {
    /// Requires `‖W‖_h = 1` within [`UNIT_TOL`].
    pub fn new(h: InnerProduct, w: DVector<f64>) -> Result<Self> {
        check_len(h.dim(), w.len())?;
        let nrm = h.norm(&w);
        if (nrm - 1.0).abs() > UNIT_TOL {
            return Err(Error::Input(format!("navigation vector must have unit h-norm, got {nrm}")));
        }
        Ok(Self { h, w, scale: 1.0 })
    }

    /// Rescales `w` to unit `h`-norm.
    pub fn normalized(h: InnerProduct, w: DVector<f64>) -> Result<Self> {
        check_len(h.dim(), w.len())?;
        let nrm = h.norm(&w);
        if !(nrm > 0.0) || !nrm.is_finite() {
            return Err(Error::Input("navigation vector must be nonzero".into()));
        }
        Ok(Self { h, w: w / nrm, scale: 1.0 })
    }

    pub fn h(&self) -> &InnerProduct {
        &self.h
    }

    pub fn w(&self) -> &DVector<f64> {
        &self.w
    }

    /// Conformal factor relating `h` to the `a` it was converted from.
    pub fn scale(&self) -> f64 {
        self.scale
    }
}

pub fn eval_f_algebraic(k: &KropinaAlgebraic, y: &DVector<f64>) -> Result<f64> {
    check_len(k.a.dim(), y.len())?;
    let beta = k.a.dot(&k.x, y);
    if !(beta > 0.0) {
        return Err(Error::Domain(format!("a(X, y) = {beta:e} is not positive")));
    }
    Ok(k.a.dot(y, y) / beta)
}

pub fn eval_f_navigation(n: &NavigationData, y: &DVector<f64>) -> Result<f64> {
    check_len(n.h.dim(), y.len())?;
    let w0 = n.h.dot(&n.w, y);
    if !(w0 > 0.0) {
        return Err(Error::Domain(format!("h(W, y) = {w0:e} is not positive")));
    }
    Ok(n.h.dot(y, y) / (2.0 * w0))
}

/// `scale = 4/b²`, `h = scale · a`, `W = X/2`.
pub fn to_navigation(k: &KropinaAlgebraic) -> Result<NavigationData> {
    let b2 = k.a.dot(&k.x, &k.x);
    if !(b2 > 0.0) {
        return Err(Error::Input("a(X, X) must be positive".into()));
    }
    let scale = 4.0 / b2;
    let h = k.a.scaled(scale)?;
    let w = &k.x * 0.5;
    let nrm = h.norm(&w);
    if (nrm - 1.0).abs() > UNIT_TOL {
        return Err(Error::Input(format!("converted navigation vector has h-norm {nrm}")));
    }
    Ok(NavigationData { h, w, scale })
}

/// `(a, X) = (h, 2W)`.
pub fn from_navigation(n: &NavigationData) -> Result<KropinaAlgebraic> {
    let nrm = n.h.norm(&n.w);
    if (nrm - 1.0).abs() > UNIT_TOL {
        return Err(Error::Input(format!("navigation vector must have unit h-norm, got {nrm}")));
    }
    KropinaAlgebraic::new(n.h.clone(), &n.w * 2.0)
}

/// `φ(s) − sφ′(s) + (b² − s²)φ″(s)` for an `(α, β)`-metric `α φ(β/α)`.
pub fn alpha_beta_condition(phi: impl Fn(f64) -> f64, dphi: impl Fn(f64) -> f64, ddphi: impl Fn(f64) -> f64, b: f64, s: f64) -> f64 {
    phi(s) - s * dphi(s) + (b * b - s * s) * ddphi(s)
}

/// The positivity expression for `φ(s) = 1/s`, valid for `0 < s <= b`.
pub fn finsler_condition(b: f64, s: f64) -> Result<f64> {
    if !(b > 0.0) {
        return Err(Error::Input(format!("b must be positive, got {b}")));
    }
    if !(s > 0.0) {
        return Err(Error::Domain(format!("s = {s} is outside the Kropina cone")));
    }
    if s > b {
        return Err(Error::Domain(format!("s = {s} exceeds b = {b}")));
    }
    Ok(alpha_beta_condition(|s| 1.0 / s, |s| -1.0 / (s * s), |s| 2.0 / (s * s * s), b, s))
}

/// Closed form `2b²/s³` of [`finsler_condition`].
pub fn finsler_condition_closed(b: f64, s: f64) -> f64 {
    2.0 * b * b / (s * s * s)
}

/// One named check in a certificate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub value: f64,
    pub tolerance: f64,
}

impl Check {
    /// Passes iff `value < tolerance`.
    pub fn below(name: &str, value: f64, tolerance: f64) -> Self {
        Self { name: name.to_string(), pass: value < tolerance, value, tolerance }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    EinsteinKropina,
    HomogeneousEinsteinKropina,
    EinsteinNonHomogeneous,
    Falsified,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::EinsteinKropina => "einstein_kropina",
            Verdict::HomogeneousEinsteinKropina => "homogeneous_einstein_kropina",
            Verdict::EinsteinNonHomogeneous => "einstein_non_homogeneous",
            Verdict::Falsified => "falsified",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub checks: Vec<Check>,
    pub verdict: Verdict,
    pub sigma: f64,
    pub fit: EinsteinFit,
    /// Set for verified verdicts in dimension at least 3.
    pub ricci_constant: bool,
}

impl Certificate {
    pub fn verified(&self) -> bool {
        self.verdict != Verdict::Falsified
    }

    pub fn failing(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect()
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateOptions {
    /// Einstein-fit residual bound on the algebraic path.
    pub tol_einstein: f64,
    /// Distance from the Killing space, relative to `‖W‖_h`.
    pub tol_killing: f64,
    pub tol_unit: f64,
    /// Max entry of the sampled Lie derivative of `h` (right-invariant `W`).
    pub tol_lie: f64,
    pub tol_orbit: f64,
    pub chart: ChartConfig,
}

impl Default for CertificateOptions {
    fn default() -> Self {
        Self {
            tol_einstein: 1e-8,
            tol_killing: 1e-8,
            tol_unit: UNIT_TOL,
            tol_lie: 1e-6,
            tol_orbit: 1e-8,
            chart: ChartConfig::default(),
        }
    }
}

pub fn einstein_certificate(alg: &LieAlgebra, nav: &NavigationData, kind: WKind) -> Result<Certificate> {
    einstein_certificate_with(alg, nav, kind, &CertificateOptions::default())
}

/// Checks that `h` is Einstein, that `W` generates isometries of `h`, and
/// that `W` has unit length along its extension.
pub fn einstein_certificate_with(alg: &LieAlgebra, nav: &NavigationData, kind: WKind, opts: &CertificateOptions) -> Result<Certificate> {
    check_len(alg.dim(), nav.h.dim())?;
    let (h, w) = (&nav.h, &nav.w);
    let wn = h.norm(w);
    if !(wn > 0.0) {
        return Err(Error::Input("navigation vector must be nonzero".into()));
    }
    let fit = riemann::einstein_fit(alg, h)?;
    let mut checks = vec![Check::below("einstein", fit.residual, opts.tol_einstein)];

    match kind {
        WKind::Left => {
            let space = riemann::killing_space(alg, h)?;
            let dist = linalg::distance_to_span(w, &space, h.matrix()) / wn;
            checks.push(Check::below("killing", dist, opts.tol_killing));
        }
        WKind::Central => {
            let defect = linalg::max_abs(&alg.ad_matrix(w)?) / wn;
            checks.push(Check::below("central", defect, opts.tol_killing));
        }
        WKind::Right => {
            let lie = chart::max_lie_derivative(alg, h, w, kind, &opts.chart)?;
            checks.push(Check::below("killing_lie_derivative", lie, opts.tol_lie));
        }
    }

    checks.push(Check::below("unit_norm", (wn - 1.0).abs(), opts.tol_unit));
    if kind != WKind::Left {
        // the norm of a left-invariant field is constant; other extensions
        // move W around its adjoint orbit
        let orbit = chart::ad_orbit_norm(alg, h, w, &opts.chart)?;
        checks.push(Check::below("ad_orbit_norm", orbit, opts.tol_orbit));
    }

    let all = checks.iter().all(|c| c.pass);
    let verdict = if all { Verdict::EinsteinKropina } else { Verdict::Falsified };
    Ok(Certificate { checks, verdict, sigma: fit.sigma, fit, ricci_constant: all && alg.dim() >= 3 })
}
