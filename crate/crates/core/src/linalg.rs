//! Small dense linear-algebra helpers shared by the geometry modules.

use nalgebra::{DMatrix, DVector};

/// Relative singular-value threshold used for every rank decision.
pub const KERNEL_RTOL: f64 = 1e-10;

/// Orthonormal (Euclidean) basis of the kernel of `m`.
///
/// Rank is decided by singular-value thresholding relative to the largest
/// singular value. See [`kernel_basis_scaled`] when `m` may consist of
/// rounding noise only. The returned basis does not depend on the rotation
/// freedom of the SVD: it is extracted from the kernel projector by
/// pivoted Gram-Schmidt, and each vector has its first nonzero coordinate
/// positive.
pub fn kernel_basis(m: &DMatrix<f64>) -> Vec<DVector<f64>> {
    kernel_basis_scaled(m, 0.0)
}

/// As [`kernel_basis`], with the threshold taken relative to
/// `max(largest singular value, reference)`. `reference` is the magnitude
/// the operator would have if it were not identically zero.
pub fn kernel_basis_scaled(m: &DMatrix<f64>, reference: f64) -> Vec<DVector<f64>> {
    let n = m.ncols();
    if n == 0 {
        return Vec::new();
    }
    let rows = m.nrows().max(n);
    let mut padded = DMatrix::zeros(rows, n);
    padded.view_mut((0, 0), (m.nrows(), n)).copy_from(m);

    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let s_max = svd.singular_values.iter().cloned().fold(0.0_f64, f64::max);
    let threshold = KERNEL_RTOL * s_max.max(reference);

    let null_rows: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] <= threshold)
        .collect();
    if null_rows.is_empty() {
        return Vec::new();
    }
    let mut v = DMatrix::zeros(n, null_rows.len());
    for (c, &r) in null_rows.iter().enumerate() {
        v.set_column(c, &v_t.row(r).transpose());
    }
    let projector = &v * v.transpose();
    canonical_span_basis(&projector, null_rows.len())
}

/// Picks `rank` orthonormal vectors spanning the column space of a projector.
fn canonical_span_basis(projector: &DMatrix<f64>, rank: usize) -> Vec<DVector<f64>> {
    let n = projector.ncols();
    let mut residuals: Vec<DVector<f64>> = (0..n).map(|j| projector.column(j).into_owned()).collect();
    let mut basis: Vec<DVector<f64>> = Vec::with_capacity(rank);
    while basis.len() < rank {
        let norms: Vec<f64> = residuals.iter().map(|r| r.norm()).collect();
        let best = norms.iter().cloned().fold(0.0_f64, f64::max);
        if best <= 1e-14 {
            break;
        }
        let pick = norms
            .iter()
            .position(|&nrm| nrm >= best * (1.0 - 1e-12))
            .unwrap_or(0);
        let mut q = residuals[pick].clone() / norms[pick];
        // one reorthogonalization pass against accepted vectors
        for b in &basis {
            let d = b.dot(&q);
            q -= b * d;
        }
        q /= q.norm();
        for r in residuals.iter_mut() {
            let d = q.dot(r);
            *r -= &q * d;
        }
        basis.push(q);
    }
    basis.into_iter().map(fix_sign).collect()
}

/// Flips `v` so that its first non-negligible coordinate is positive.
pub fn fix_sign(mut v: DVector<f64>) -> DVector<f64> {
    let scale = v.amax();
    if let Some(first) = v.iter().find(|c| c.abs() > 1e-12 * scale.max(1e-300)) {
        if *first < 0.0 {
            v.neg_mut();
        }
    }
    v
}

/// Gram-Schmidt in the inner product `g`, keeping the input order.
/// Vectors that become numerically dependent are dropped.
pub fn gram_schmidt(vectors: &[DVector<f64>], g: &DMatrix<f64>) -> Vec<DVector<f64>> {
    let dot = |a: &DVector<f64>, b: &DVector<f64>| (a.transpose() * g * b)[(0, 0)];
    let mut out: Vec<DVector<f64>> = Vec::with_capacity(vectors.len());
    for v in vectors {
        let scale = dot(v, v).sqrt();
        let mut q = v.clone();
        for _ in 0..2 {
            for b in &out {
                let d = dot(b, &q);
                q -= b * d;
            }
        }
        let nrm = dot(&q, &q).sqrt();
        if nrm > 1e-10 * scale.max(1e-300) {
            out.push(q / nrm);
        }
    }
    out
}

/// Columns of the returned matrix form a `g`-orthonormal frame obtained
/// from the standard basis by Gram-Schmidt in index order.
pub fn orthonormal_frame(g: &DMatrix<f64>) -> DMatrix<f64> {
    let n = g.nrows();
    let std: Vec<DVector<f64>> = (0..n).map(|i| DVector::from_fn(n, |k, _| if k == i { 1.0 } else { 0.0 })).collect();
    let frame = gram_schmidt(&std, g);
    DMatrix::from_columns(&frame)
}

pub fn frobenius_dot(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.component_mul(b).sum()
}

/// Largest absolute entry, 0 for empty matrices.
pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

/// Distance from `v` to span(`basis`), where `basis` is orthonormal in `g`,
/// measured in the `g` norm.
pub fn distance_to_span(v: &DVector<f64>, basis: &[DVector<f64>], g: &DMatrix<f64>) -> f64 {
    let mut r = v.clone();
    for b in basis {
        let d = (b.transpose() * g * &r)[(0, 0)];
        r -= b * d;
    }
    (r.transpose() * g * &r)[(0, 0)].max(0.0).sqrt()
}

/// 2-norm condition number via singular values.
pub fn condition_number(m: &DMatrix<f64>) -> f64 {
    let s = m.clone().singular_values();
    let max = s.iter().cloned().fold(0.0_f64, f64::max);
    let min = s.iter().cloned().fold(f64::INFINITY, f64::min);
    if min <= 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

pub fn unit(n: usize, i: usize) -> DVector<f64> {
    let mut v = DVector::zeros(n);
    v[i] = 1.0;
    v
}
