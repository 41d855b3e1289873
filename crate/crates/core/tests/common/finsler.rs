//! Property checks on the jet-based Finsler pipeline, shared by the property
//! tests and the acceptance harness.

use kropina::catalog::{self, Param};
use kropina::chart::{ChartConfig, ChartEngine};
use kropina::kropina::{einstein_certificate, NavigationData, WKind};
use kropina::lie::LieAlgebra;
use nalgebra::DVector;

pub struct Certified {
    pub label: String,
    pub algebra: LieAlgebra,
    pub nav: NavigationData,
    pub kind: WKind,
}

/// Catalog instances whose certificate verifies, with their navigation data.
pub fn certified_instances() -> Vec<Certified> {
    let p = |k: &str, v: f64| vec![Param { name: Some(k.into()), value: v }];
    let cases: Vec<(&str, Vec<Param>, &str, WKind)> = vec![
        ("r3_abelian", vec![], "W_thm3", WKind::Left),
        ("e0tilde2", p("nu", 0.5), "W_thm3", WKind::Left),
        ("e0tilde2", p("nu", 1.0), "W_thm3", WKind::Left),
        ("e0tilde2", p("nu", 2.0), "W_thm3", WKind::Left),
        ("su2_round", p("lambda", 0.5), "W_thm3", WKind::Left),
        ("su2_round", p("lambda", 1.0), "W_thm3", WKind::Left),
        ("su2_round", p("lambda", 2.0), "W_thm3", WKind::Left),
        ("su2_round", p("lambda", 1.0), "y", WKind::Right),
        ("so_n", p("n", 3.0), "W_thm3", WKind::Right),
        ("so_n", p("n", 4.0), "W_thm3", WKind::Right),
    ];
    cases
        .into_iter()
        .map(|(name, params, w, kind)| {
            let e = catalog::get(name, &params).unwrap();
            let nav = NavigationData::normalized(e.metric.clone(), e.vector(w).unwrap().clone()).unwrap();
            let cert = einstein_certificate(&e.algebra, &nav, kind).unwrap();
            assert!(cert.verified(), "{name} {params:?}: {:?}", cert.failing());
            Certified { label: format!("{name}{params:?}/{w}/{kind}"), algebra: e.algebra, nav, kind }
        })
        .collect()
}

/// Largest violations found over the seeded samples of one instance.
#[derive(Debug, Default, Clone, Copy)]
pub struct PropertyErrors {
    pub samples: usize,
    /// `|y·∂_y F² − 2F²| / F²` and `|g_y(y, y) − F²| / F²`
    pub euler: f64,
    /// `|g_y(x, ty) − g_y(x, y)|` for `t ∈ {0.5, 3}`
    pub fundamental_homogeneity: f64,
    /// `|G(x, ty) − t² G(x, y)|` and `|y·∂_y G − 2G|`, relative to `|G| + F²`
    pub spray_homogeneity: f64,
    /// jets against Richardson-extrapolated central differences
    pub jet_vs_fd: f64,
    /// smallest eigenvalue of `g_y` (normalized by its largest)
    pub min_eigenvalue: f64,
}

fn richardson(f: &dyn Fn(f64) -> f64, h: f64) -> f64 {
    let d = |h: f64| (f(h) - f(-h)) / (2.0 * h);
    (4.0 * d(h / 2.0) - d(h)) / 3.0
}

fn richardson_vec(f: &dyn Fn(f64) -> DVector<f64>, h: f64) -> DVector<f64> {
    let d = |h: f64| (f(h) - f(-h)) / (2.0 * h);
    (d(h / 2.0) * 4.0 - d(h)) / 3.0
}

fn unit(n: usize, k: usize) -> DVector<f64> {
    DVector::from_fn(n, |i, _| if i == k { 1.0 } else { 0.0 })
}

pub fn check_instance(c: &Certified, cfg: &ChartConfig) -> PropertyErrors {
    let n = c.algebra.dim();
    let engine = ChartEngine::kropina(&c.algebra, &c.nav, c.kind, cfg).unwrap();
    let mut e = PropertyErrors { min_eigenvalue: f64::INFINITY, ..Default::default() };
    let h = 1e-3;
    for (x, y) in engine.sample_points().unwrap() {
        let d = engine.derivatives(&x, &y).unwrap();
        let f2 = d.f2;
        e.samples += 1;

        let gy = &d.d2f2_dydy * 0.5;
        e.euler = e.euler.max((y.dot(&d.df2_dy) - 2.0 * f2).abs() / f2);
        e.euler = e.euler.max(((y.transpose() * &gy * &y)[(0, 0)] - f2).abs() / f2);

        let eig = gy.clone().symmetric_eigen().eigenvalues;
        e.min_eigenvalue = e.min_eigenvalue.min(eig.min() / eig.max());

        let gscale = d.spray.amax() + f2;
        for t in [0.5, 3.0] {
            let dt = engine.derivatives(&x, &(&y * t)).unwrap();
            e.fundamental_homogeneity = e.fundamental_homogeneity.max((&dt.d2f2_dydy * 0.5 - &gy).amax() / gy.amax());
            e.spray_homogeneity = e.spray_homogeneity.max((&dt.spray - &d.spray * (t * t)).amax() / (t * t * gscale));
        }
        e.spray_homogeneity = e.spray_homogeneity.max((&d.dspray_dy * &y - &d.spray * 2.0).amax() / gscale);

        // first derivatives of F² and of the spray against finite differences
        let f2_at = |xx: &DVector<f64>, yy: &DVector<f64>| engine.f_value(xx, yy).unwrap().powi(2);
        let spray_at = |xx: &DVector<f64>, yy: &DVector<f64>| engine.derivatives(xx, yy).unwrap().spray;
        let mut worst = 0.0_f64;
        for k in 0..n {
            let ek = unit(n, k);
            let fx = richardson(&|s| f2_at(&(&x + &ek * s), &y), h);
            let fy = richardson(&|s| f2_at(&x, &(&y + &ek * s)), h);
            worst = worst.max((fx - d.df2_dx[k]).abs() / f2).max((fy - d.df2_dy[k]).abs() / f2);
            let gx = richardson_vec(&|s| spray_at(&(&x + &ek * s), &y), h);
            let gy = richardson_vec(&|s| spray_at(&x, &(&y + &ek * s)), h);
            worst = worst.max((gx - d.dspray_dx.column(k)).amax() / gscale);
            worst = worst.max((gy - d.dspray_dy.column(k)).amax() / gscale);
        }
        e.jet_vs_fd = e.jet_vs_fd.max(worst);
    }
    e
}
