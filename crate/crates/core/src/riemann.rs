//! Curvature of left-invariant Riemannian metrics, computed on the Lie
//! algebra from structure constants.
//!
//! Every left-invariant field is a constant combination of the basis fields,
//! so the Levi-Civita connection is a bilinear map on the algebra and the
//! whole curvature computation is finite-dimensional linear algebra.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{check_len, Result};
use crate::lie::{InnerProduct, LieAlgebra};
use crate::linalg;

/// `gamma[i * dim + j]` holds `∇_{e_i} e_j` in basis coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectionTable {
    dim: usize,
    gamma: Vec<DVector<f64>>,
}

impl ConnectionTable {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `∇_{e_i} e_j`.
    pub fn nabla(&self, i: usize, j: usize) -> &DVector<f64> {
        &self.gamma[i * self.dim + j]
    }

    /// Matrix of `v -> ∇_u v`.
    pub fn nabla_matrix(&self, u: &DVector<f64>) -> DMatrix<f64> {
        let n = self.dim;
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            if u[i] == 0.0 {
                continue;
            }
            for j in 0..n {
                let col = self.nabla(i, j) * u[i];
                for k in 0..n {
                    m[(k, j)] += col[k];
                }
            }
        }
        m
    }
}

/// Least-squares Einstein scalar and normalized residual for `Ric ≈ σ g`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EinsteinFit {
    pub sigma: f64,
    /// `‖Ric − σ g‖_F / ‖g‖_F`
    pub residual: f64,
}

impl EinsteinFit {
    pub fn from_tensors(ric: &DMatrix<f64>, g: &DMatrix<f64>) -> Self {
        let gg = linalg::frobenius_dot(g, g);
        let sigma = linalg::frobenius_dot(ric, g) / gg;
        let residual = (ric - g * sigma).norm() / gg.sqrt();
        Self { sigma, residual }
    }

    pub fn is_einstein(&self, tol: f64) -> bool {
        self.residual < tol
    }
}

/// Levi-Civita connection from the Koszul formula on left-invariant fields:
/// `2⟨∇_u v, w⟩ = ⟨[u,v],w⟩ − ⟨[v,w],u⟩ + ⟨[w,u],v⟩`.
pub fn koszul_connection(alg: &LieAlgebra, g: &InnerProduct) -> Result<ConnectionTable> {
    check_len(alg.dim(), g.dim())?;
    let n = alg.dim();
    let gm = g.matrix();
    // t[(a * n + b) * n + c] = ⟨[e_a, e_b], e_c⟩
    let mut t = vec![0.0; n * n * n];
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                t[(a * n + b) * n + c] = (0..n).map(|m| alg.c(a, b, m) * gm[(m, c)]).sum();
            }
        }
    }
    let tt = |a: usize, b: usize, c: usize| t[(a * n + b) * n + c];
    let mut gamma = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let rhs = DVector::from_fn(n, |k, _| 0.5 * (tt(i, j, k) - tt(j, k, i) + tt(k, i, j)));
            gamma.push(g.inverse() * rhs);
        }
    }
    Ok(ConnectionTable { dim: n, gamma })
}

/// Curvature of a left-invariant metric, `R(u,v) = [∇_u, ∇_v] − ∇_{[u,v]}`.
#[derive(Debug, Clone)]
pub struct Curvature<'a> {
    alg: &'a LieAlgebra,
    conn: ConnectionTable,
}

impl<'a> Curvature<'a> {
    pub fn new(alg: &'a LieAlgebra, g: &InnerProduct) -> Result<Self> {
        Ok(Self { alg, conn: koszul_connection(alg, g)? })
    }

    pub fn connection(&self) -> &ConnectionTable {
        &self.conn
    }

    /// Matrix of `w -> R(u, v) w`.
    pub fn operator(&self, u: &DVector<f64>, v: &DVector<f64>) -> DMatrix<f64> {
        let lu = self.conn.nabla_matrix(u);
        let lv = self.conn.nabla_matrix(v);
        let luv = self.conn.nabla_matrix(&self.alg.bracket_unchecked(u, v));
        &lu * &lv - &lv * &lu - luv
    }

    pub fn apply(&self, u: &DVector<f64>, v: &DVector<f64>, w: &DVector<f64>) -> DVector<f64> {
        self.operator(u, v) * w
    }
}

/// Ricci tensor `Ric(u, v) = Σ_k ⟨R(ê_k, u) v, ê_k⟩` over a `g`-orthonormal
/// frame, in basis coordinates.
pub fn riemann_ricci(alg: &LieAlgebra, g: &InnerProduct) -> Result<DMatrix<f64>> {
    let curv = Curvature::new(alg, g)?;
    let n = alg.dim();
    let frame = linalg::orthonormal_frame(g.matrix());
    let gm = g.matrix();
    let mut ric = DMatrix::zeros(n, n);
    for k in 0..n {
        let ek = frame.column(k).into_owned();
        let gek = gm * &ek;
        for i in 0..n {
            let r = curv.operator(&ek, &alg.basis_vector(i));
            // row i of Ric: j -> ⟨R(ê_k, e_i) e_j, ê_k⟩
            let row = gek.transpose() * r;
            for j in 0..n {
                ric[(i, j)] += row[(0, j)];
            }
        }
    }
    Ok((&ric + ric.transpose()) * 0.5)
}

pub fn einstein_fit(alg: &LieAlgebra, g: &InnerProduct) -> Result<EinsteinFit> {
    let ric = riemann_ricci(alg, g)?;
    Ok(EinsteinFit::from_tensors(&ric, g.matrix()))
}

/// Matrix `ad w + ad* w`; zero iff the left-invariant field `w` is Killing.
pub fn killing_operator(alg: &LieAlgebra, g: &InnerProduct, w: &DVector<f64>) -> Result<DMatrix<f64>> {
    Ok(alg.ad_matrix(w)? + alg.ad_star_matrix(g, w)?)
}

/// `g`-orthonormal basis of left-invariant Killing fields, i.e. the kernel
/// of `w -> ad w + ad* w`.
pub fn killing_space(alg: &LieAlgebra, g: &InnerProduct) -> Result<Vec<DVector<f64>>> {
    check_len(alg.dim(), g.dim())?;
    let n = alg.dim();
    let mut m = DMatrix::zeros(n * n, n);
    let mut reference = 0.0_f64;
    for i in 0..n {
        let e = alg.basis_vector(i);
        let ad = alg.ad_matrix(&e)?;
        reference = reference.max(ad.norm() + alg.ad_star_matrix(g, &e)?.norm());
        let op = ad + alg.ad_star_matrix(g, &e)?;
        for r in 0..n {
            for c in 0..n {
                m[(r * n + c, i)] = op[(r, c)];
            }
        }
    }
    let euclid = linalg::kernel_basis_scaled(&m, reference);
    Ok(linalg::gram_schmidt(&euclid, g.matrix()).into_iter().map(linalg::fix_sign).collect())
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

    fn e0tilde2() -> LieAlgebra {
        LieAlgebra::from_brackets(
            names3(),
            &[Bracket::new(0, 2, vec![0.0, 1.0, 0.0]), Bracket::new(1, 2, vec![-1.0, 0.0, 0.0])],
        )
        .unwrap()
    }

    fn heisenberg() -> LieAlgebra {
        LieAlgebra::from_brackets(names3(), &[Bracket::new(0, 1, vec![0.0, 0.0, 1.0])]).unwrap()
    }

    fn check_connection_invariants(alg: &LieAlgebra, g: &InnerProduct) {
        let conn = koszul_connection(alg, g).unwrap();
        let n = alg.dim();
        for i in 0..n {
            for j in 0..n {
                let torsion = conn.nabla(i, j) - conn.nabla(j, i) - alg.bracket(&alg.basis_vector(i), &alg.basis_vector(j)).unwrap();
                assert!(torsion.amax() < 1e-12);
                for k in 0..n {
                    let a = g.dot(conn.nabla(i, j), &alg.basis_vector(k));
                    let b = g.dot(&alg.basis_vector(j), conn.nabla(i, k));
                    assert!((a + b).abs() < 1e-12, "metric compatibility at ({i},{j},{k})");
                }
            }
        }
    }

    #[test]
    fn abelian_connection_vanishes() {
        let a = LieAlgebra::abelian(3).unwrap();
        let conn = koszul_connection(&a, &InnerProduct::identity(3)).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(conn.nabla(i, j).amax(), 0.0);
            }
        }
        assert_eq!(riemann_ricci(&a, &InnerProduct::identity(3)).unwrap(), DMatrix::zeros(3, 3));
    }

    #[test]
    fn su2_round_connection_is_half_bracket() {
        let a = su2();
        let g = InnerProduct::diagonal(&[3.0, 3.0, 3.0]).unwrap();
        let conn = koszul_connection(&a, &g).unwrap();
        assert!((conn.nabla(0, 1) - DVector::from_column_slice(&[0.0, 0.0, 0.5])).amax() < 1e-15);
        assert!((conn.nabla(1, 2) - DVector::from_column_slice(&[0.5, 0.0, 0.0])).amax() < 1e-15);
        check_connection_invariants(&a, &g);
    }

    #[test]
    fn case_ii_connection_invariants_and_flatness() {
        let a = e0tilde2();
        let g = InnerProduct::diagonal(&[1.0, 1.0, 2.0]).unwrap();
        check_connection_invariants(&a, &g);
        assert!(riemann_ricci(&a, &g).unwrap().amax() < 1e-14);
    }

    #[test]
    fn su2_round_sigma() {
        for lambda in [0.5, 1.0, 2.0, 7.0] {
            let g = InnerProduct::diagonal(&[lambda; 3]).unwrap();
            let fit = einstein_fit(&su2(), &g).unwrap();
            assert!((fit.sigma - 1.0 / (2.0 * lambda)).abs() < 1e-14);
            assert!(fit.residual < 1e-14);
        }
    }

    #[test]
    fn su2_diag_not_einstein() {
        let g = InnerProduct::diagonal(&[1.0, 2.0, 3.0]).unwrap();
        assert!(einstein_fit(&su2(), &g).unwrap().residual > 0.01);
        assert!(killing_space(&su2(), &g).unwrap().is_empty());
    }

    #[test]
    fn heisenberg_ricci() {
        let ric = riemann_ricci(&heisenberg(), &InnerProduct::identity(3)).unwrap();
        let expected = DMatrix::from_diagonal(&DVector::from_column_slice(&[-0.5, -0.5, 0.5]));
        assert!((ric - expected).amax() < 1e-14);
    }

    #[test]
    fn killing_space_dimensions() {
        let r3 = LieAlgebra::abelian(3).unwrap();
        assert_eq!(killing_space(&r3, &InnerProduct::identity(3)).unwrap().len(), 3);
        for nu in [0.5, 1.0, 3.0] {
            let g = InnerProduct::diagonal(&[1.0, 1.0, nu]).unwrap();
            let k = killing_space(&e0tilde2(), &g).unwrap();
            assert_eq!(k.len(), 1);
            let expected = DVector::from_column_slice(&[0.0, 0.0, 1.0 / nu.sqrt()]);
            assert!((&k[0] - expected).amax() < 1e-12);
        }
        let k = killing_space(&heisenberg(), &InnerProduct::identity(3)).unwrap();
        assert_eq!(k.len(), 1);
    }

    #[test]
    fn killing_criterion_consistency() {
        let a = e0tilde2();
        let g = InnerProduct::diagonal(&[1.0, 1.0, 2.0]).unwrap();
        let k = killing_space(&a, &g).unwrap();
        assert!(killing_operator(&a, &g, &k[0]).unwrap().amax() < 1e-10);
        // x is g-orthogonal to the Killing space and is not Killing
        let x = DVector::from_column_slice(&[1.0, 0.0, 0.0]);
        assert!(killing_operator(&a, &g, &x).unwrap().amax() > 0.1);
    }

    #[test]
    fn dimension_mismatch_rejected() {
        assert!(riemann_ricci(&su2(), &InnerProduct::identity(2)).is_err());
    }
}
