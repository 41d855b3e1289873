//! Finite-dimensional real Lie algebras given by structure constants.

use nalgebra::{DMatrix, DVector};

use crate::error::{check_len, Error, Result};
use crate::linalg;

/// Jacobi tolerance applied when an algebra is constructed.
pub const JACOBI_TOL: f64 = 1e-12;

/// A real Lie algebra on a fixed basis `e_0, ..., e_{n-1}` with
/// `[e_i, e_j] = sum_k c^k_{ij} e_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct LieAlgebra {
    dim: usize,
    basis_names: Vec<String>,
    // c[(i * dim + j) * dim + k] = c^k_{ij}
    c: Vec<f64>,
}

/// One bracket relation `[e_i, e_j] = sum_k coeffs[k] e_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Bracket {
    pub i: usize,
    pub j: usize,
    pub coeffs: Vec<f64>,
}

impl Bracket {
    pub fn new(i: usize, j: usize, coeffs: Vec<f64>) -> Self {
        Self { i, j, coeffs }
    }
}

impl LieAlgebra {
    /// Builds an algebra from a dense `dim^3` array of structure constants.
    ///
    /// Antisymmetry is checked exactly and the Jacobi identity within
    /// [`JACOBI_TOL`].
    pub fn new(basis_names: Vec<String>, c: Vec<f64>) -> Result<Self> {
        let dim = basis_names.len();
        if dim == 0 {
            return Err(Error::InvalidAlgebra("dimension must be positive".into()));
        }
        check_len(dim * dim * dim, c.len())?;
        if c.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidAlgebra("non-finite structure constant".into()));
        }
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    let a = c[(i * dim + j) * dim + k];
                    let b = c[(j * dim + i) * dim + k];
                    if a != -b {
                        return Err(Error::InvalidAlgebra(format!(
                            "antisymmetry fails: c^{k}_({i},{j}) = {a} but c^{k}_({j},{i}) = {b}"
                        )));
                    }
                }
            }
        }
        let defect = jacobi_defect_of(dim, &c);
        if defect > JACOBI_TOL {
            return Err(Error::InvalidAlgebra(format!("Jacobi identity fails (defect {defect:e})")));
        }
        Ok(Self { dim, basis_names, c })
    }

    /// Builds an algebra from bracket relations listed once per pair `i < j`;
    /// unlisted pairs bracket to zero.
    pub fn from_brackets(basis_names: Vec<String>, brackets: &[Bracket]) -> Result<Self> {
        let c = constants_from_brackets(basis_names.len(), brackets)?;
        Self::new(basis_names, c)
    }

    /// Abelian algebra of dimension `dim` with basis names `e0, e1, ...`.
    pub fn abelian(dim: usize) -> Result<Self> {
        let names = (0..dim).map(|i| format!("e{i}")).collect();
        Self::new(names, vec![0.0; dim * dim * dim])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis_names
    }

    /// `c^k_{ij}`.
    #[inline]
    pub fn c(&self, i: usize, j: usize, k: usize) -> f64 {
        self.c[(i * self.dim + j) * self.dim + k]
    }

    pub fn structure_constants(&self) -> &[f64] {
        &self.c
    }

    /// Bracket relations with `i < j` and at least one nonzero coefficient.
    pub fn brackets(&self) -> Vec<Bracket> {
        let n = self.dim;
        let mut out = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                let coeffs: Vec<f64> = (0..n).map(|k| self.c(i, j, k)).collect();
                if coeffs.iter().any(|v| *v != 0.0) {
                    out.push(Bracket::new(i, j, coeffs));
                }
            }
        }
        out
    }

    pub fn basis_vector(&self, i: usize) -> DVector<f64> {
        linalg::unit(self.dim, i)
    }

    pub fn bracket(&self, u: &DVector<f64>, v: &DVector<f64>) -> Result<DVector<f64>> {
        check_len(self.dim, u.len())?;
        check_len(self.dim, v.len())?;
        Ok(self.bracket_unchecked(u, v))
    }

    pub(crate) fn bracket_unchecked(&self, u: &DVector<f64>, v: &DVector<f64>) -> DVector<f64> {
        let n = self.dim;
        let mut w = DVector::zeros(n);
        for i in 0..n {
            if u[i] == 0.0 {
                continue;
            }
            for j in 0..n {
                let uv = u[i] * v[j];
                if uv == 0.0 {
                    continue;
                }
                let base = (i * n + j) * n;
                for k in 0..n {
                    w[k] += self.c[base + k] * uv;
                }
            }
        }
        w
    }

    pub fn jacobi_defect(&self) -> f64 {
        jacobi_defect_of(self.dim, &self.c)
    }

    /// Matrix of `v -> [w, v]`.
    pub fn ad_matrix(&self, w: &DVector<f64>) -> Result<DMatrix<f64>> {
        check_len(self.dim, w.len())?;
        Ok(self.ad_unchecked(w))
    }

    pub(crate) fn ad_unchecked(&self, w: &DVector<f64>) -> DMatrix<f64> {
        let n = self.dim;
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            if w[i] == 0.0 {
                continue;
            }
            for j in 0..n {
                for k in 0..n {
                    m[(k, j)] += self.c(i, j, k) * w[i];
                }
            }
        }
        m
    }

    /// The `g`-adjoint of `ad w`: `g^{-1} (ad w)^T g`.
    pub fn ad_star_matrix(&self, g: &InnerProduct, w: &DVector<f64>) -> Result<DMatrix<f64>> {
        check_len(self.dim, g.dim())?;
        let ad = self.ad_matrix(w)?;
        Ok(g.inverse() * ad.transpose() * g.matrix())
    }

    /// `B(u, v) = tr(ad u ad v)`.
    pub fn killing_form(&self) -> BilinearForm {
        let n = self.dim;
        let ads: Vec<DMatrix<f64>> = (0..n).map(|i| self.ad_unchecked(&self.basis_vector(i))).collect();
        let mut b = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = (&ads[i] * &ads[j]).trace();
                b[(i, j)] = v;
                b[(j, i)] = v;
            }
        }
        BilinearForm { m: b }
    }

    /// Euclidean-orthonormal basis of the center.
    pub fn center(&self) -> Vec<DVector<f64>> {
        let n = self.dim;
        // rows (j, k), column i: c^k_{ij}
        let mut m = DMatrix::zeros(n * n, n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    m[(j * n + k, i)] = self.c(i, j, k);
                }
            }
        }
        linalg::kernel_basis(&m)
    }

    /// Direct sum `self ⊕ other`, basis of `self` first.
    pub fn direct_sum(&self, other: &LieAlgebra) -> Result<LieAlgebra> {
        let (a, b) = (self.dim, other.dim);
        let n = a + b;
        let mut c = vec![0.0; n * n * n];
        for i in 0..a {
            for j in 0..a {
                for k in 0..a {
                    c[(i * n + j) * n + k] = self.c(i, j, k);
                }
            }
        }
        for i in 0..b {
            for j in 0..b {
                for k in 0..b {
                    c[((a + i) * n + a + j) * n + a + k] = other.c(i, j, k);
                }
            }
        }
        let mut names = self.basis_names.clone();
        for nm in &other.basis_names {
            if names.contains(nm) {
                names.push(format!("{nm}'"));
            } else {
                names.push(nm.clone());
            }
        }
        LieAlgebra::new(names, c)
    }
}

/// Dense structure constants from bracket relations, checking indices.
pub fn constants_from_brackets(dim: usize, brackets: &[Bracket]) -> Result<Vec<f64>> {
    let mut c = vec![0.0; dim * dim * dim];
    let mut seen = std::collections::BTreeSet::new();
    for br in brackets {
        if br.i >= dim || br.j >= dim {
            return Err(Error::InvalidAlgebra(format!("bracket index ({}, {}) out of range", br.i, br.j)));
        }
        if br.i >= br.j {
            return Err(Error::InvalidAlgebra(format!(
                "bracket ({}, {}) must be listed with i < j",
                br.i, br.j
            )));
        }
        if !seen.insert((br.i, br.j)) {
            return Err(Error::InvalidAlgebra(format!("bracket ({}, {}) listed twice", br.i, br.j)));
        }
        check_len(dim, br.coeffs.len())?;
        for (k, &v) in br.coeffs.iter().enumerate() {
            c[(br.i * dim + br.j) * dim + k] = v;
            c[(br.j * dim + br.i) * dim + k] = -v;
        }
    }
    Ok(c)
}

/// Max over basis triples of the sup-norm of the cyclic Jacobi sum.
/// Works on raw (possibly invalid) constants.
pub fn jacobi_defect_of(dim: usize, c: &[f64]) -> f64 {
    let n = dim;
    let cc = |i: usize, j: usize, k: usize| c[(i * n + j) * n + k];
    // [e_a, [e_b, e_c]] = sum_m c^m_{bc} [e_a, e_m] = sum_m c^m_{bc} c^k_{am} e_k
    let nested = |a: usize, b: usize, cidx: usize, k: usize| -> f64 { (0..n).map(|m| cc(b, cidx, m) * cc(a, m, k)).sum() };
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            for l in 0..n {
                for k in 0..n {
                    let v = nested(i, j, l, k) + nested(j, l, i, k) + nested(l, i, j, k);
                    worst = worst.max(v.abs());
                }
            }
        }
    }
    worst
}

/// A symmetric positive-definite bilinear form on the algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct InnerProduct {
    g: DMatrix<f64>,
    g_inv: DMatrix<f64>,
}

impl InnerProduct {
    pub fn new(g: DMatrix<f64>) -> Result<Self> {
        if g.nrows() != g.ncols() || g.nrows() == 0 {
            return Err(Error::InvalidMetric(format!("matrix must be square and nonempty, got {}x{}", g.nrows(), g.ncols())));
        }
        if g.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidMetric("non-finite entry".into()));
        }
        if g != g.transpose() {
            return Err(Error::InvalidMetric("matrix is not symmetric".into()));
        }
        let eig = g.clone().symmetric_eigen();
        let min = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
        if min <= 0.0 {
            return Err(Error::InvalidMetric(format!("not positive definite (smallest eigenvalue {min:e})")));
        }
        let g_inv = g
            .clone()
            .cholesky()
            .ok_or_else(|| Error::InvalidMetric("Cholesky factorization failed".into()))?
            .inverse();
        Ok(Self { g, g_inv })
    }

    /// Symmetrizes `(m + m^T) / 2` before validation.
    pub fn from_symmetrized(m: DMatrix<f64>) -> Result<Self> {
        let s = (&m + m.transpose()) * 0.5;
        Self::new(s)
    }

    pub fn identity(dim: usize) -> Self {
        Self::new(DMatrix::identity(dim, dim)).expect("identity is positive definite")
    }

    pub fn diagonal(entries: &[f64]) -> Result<Self> {
        Self::new(DMatrix::from_diagonal(&DVector::from_column_slice(entries)))
    }

    pub fn dim(&self) -> usize {
        self.g.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.g
    }

    pub fn inverse(&self) -> &DMatrix<f64> {
        &self.g_inv
    }

    pub fn dot(&self, u: &DVector<f64>, v: &DVector<f64>) -> f64 {
        (u.transpose() * &self.g * v)[(0, 0)]
    }

    pub fn norm(&self, u: &DVector<f64>) -> f64 {
        self.dot(u, u).max(0.0).sqrt()
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(&self.g * c)
    }
}

/// A symmetric bilinear form, possibly indefinite or degenerate.
#[derive(Debug, Clone, PartialEq)]
pub struct BilinearForm {
    pub m: DMatrix<f64>,
}

impl BilinearForm {
    pub fn eval(&self, u: &DVector<f64>, v: &DVector<f64>) -> f64 {
        (u.transpose() * &self.m * v)[(0, 0)]
    }

    /// `-B` as an inner product, when it is positive definite.
    pub fn negated_inner_product(&self) -> Result<InnerProduct> {
        InnerProduct::from_symmetrized(-&self.m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

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

    fn v(xs: &[f64]) -> DVector<f64> {
        DVector::from_column_slice(xs)
    }

    #[test]
    fn su2_bracket_x_y_is_z() {
        let a = su2();
        let w = a.bracket(&v(&[1.0, 0.0, 0.0]), &v(&[0.0, 1.0, 0.0])).unwrap();
        assert_eq!(w, v(&[0.0, 0.0, 1.0]));
    }

    #[test]
    fn bracket_dimension_mismatch() {
        let a = su2();
        let err = a.bracket(&v(&[1.0, 0.0]), &v(&[0.0, 1.0, 0.0])).unwrap_err();
        assert_eq!(err, Error::Dimension { expected: 3, got: 2 });
    }

    #[test]
    fn invalid_jacobi_defect_is_two() {
        let c = constants_from_brackets(
            3,
            &[
                Bracket::new(0, 1, vec![0.0, 0.0, 1.0]),
                Bracket::new(0, 2, vec![1.0, 0.0, 0.0]),
                Bracket::new(1, 2, vec![0.0, 1.0, 0.0]),
            ],
        )
        .unwrap();
        assert!((jacobi_defect_of(3, &c) - 2.0).abs() < 1e-15);
        assert!(matches!(LieAlgebra::new(names3(), c), Err(Error::InvalidAlgebra(_))));
    }

    #[test]
    fn antisymmetry_checked_exactly() {
        let mut c = vec![0.0; 27];
        // c^2_01 and c^2_10
        c[5] = 1.0;
        c[11] = -1.0 + 1e-15;
        assert!(matches!(LieAlgebra::new(names3(), c), Err(Error::InvalidAlgebra(_))));
    }

    #[test]
    fn duplicate_and_misordered_brackets_rejected() {
        let dup = [Bracket::new(0, 1, vec![0.0; 3]), Bracket::new(0, 1, vec![0.0; 3])];
        assert!(LieAlgebra::from_brackets(names3(), &dup).is_err());
        let mis = [Bracket::new(1, 0, vec![0.0; 3])];
        assert!(LieAlgebra::from_brackets(names3(), &mis).is_err());
    }

    #[test]
    fn ad_matrix_case_ii_z() {
        let a = e0tilde2();
        let m = a.ad_matrix(&v(&[0.0, 0.0, 1.0])).unwrap();
        // x -> -y, y -> x, z -> 0
        let expected = DMatrix::from_row_slice(3, 3, &[0.0, 1.0, 0.0, -1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(m, expected);
    }

    #[test]
    fn ad_matrix_su2_x() {
        let m = su2().ad_matrix(&v(&[1.0, 0.0, 0.0])).unwrap();
        assert_eq!(&m * v(&[0.0, 1.0, 0.0]), v(&[0.0, 0.0, 1.0]));
        assert_eq!(&m * v(&[0.0, 0.0, 1.0]), v(&[0.0, -1.0, 0.0]));
    }

    #[test]
    fn ad_star_case_ii_is_antisymmetric_partner() {
        let a = e0tilde2();
        let g = InnerProduct::diagonal(&[1.0, 1.0, 2.5]).unwrap();
        let z = v(&[0.0, 0.0, 1.0]);
        let ad = a.ad_matrix(&z).unwrap();
        let ads = a.ad_star_matrix(&g, &z).unwrap();
        assert!((&ads - ad.transpose()).amax() < 1e-15);
        assert!((ad + ads).amax() < 1e-15);
    }

    #[test]
    fn ad_star_bi_invariant_is_minus_ad() {
        let a = su2();
        let g = a.killing_form().negated_inner_product().unwrap();
        for w in [v(&[1.0, 0.0, 0.0]), v(&[0.3, -1.2, 0.7])] {
            let ad = a.ad_matrix(&w).unwrap();
            let ads = a.ad_star_matrix(&g, &w).unwrap();
            assert!((ad + ads).amax() < 1e-14);
        }
    }

    #[test]
    fn killing_form_su2_is_minus_two_identity() {
        let b = su2().killing_form();
        assert!((b.m + DMatrix::identity(3, 3) * 2.0).amax() < 1e-15);
    }

    #[test]
    fn abelian_is_trivial() {
        let a = LieAlgebra::abelian(3).unwrap();
        assert_eq!(a.jacobi_defect(), 0.0);
        assert_eq!(a.killing_form().m, DMatrix::zeros(3, 3));
        assert_eq!(a.ad_matrix(&v(&[1.0, 2.0, 3.0])).unwrap(), DMatrix::zeros(3, 3));
        let g = InnerProduct::identity(3);
        assert_eq!(a.ad_star_matrix(&g, &v(&[1.0, 2.0, 3.0])).unwrap(), DMatrix::zeros(3, 3));
        assert_eq!(a.center().len(), 3);
    }

    #[test]
    fn center_of_su2_and_su2_plus_r() {
        let a = su2();
        assert!(a.center().is_empty());
        assert_eq!(a.jacobi_defect(), 0.0);
        let s = a.direct_sum(&LieAlgebra::abelian(1).unwrap()).unwrap();
        let z = s.center();
        assert_eq!(z.len(), 1);
        assert!((&z[0] - linalg::unit(4, 3)).norm() < 1e-14);
    }

    #[test]
    fn inner_product_validation() {
        assert!(InnerProduct::new(DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.4, 1.0])).is_err());
        assert!(InnerProduct::new(DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0])).is_err());
        assert!(InnerProduct::new(DMatrix::zeros(2, 3)).is_err());
        let g = InnerProduct::diagonal(&[1.0, 4.0]).unwrap();
        assert_eq!(g.norm(&v(&[0.0, 1.0])), 2.0);
    }
}
