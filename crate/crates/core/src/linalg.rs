//! Dense linear-algebra helpers shared by the structural modules.
//!
//! Everything here works on `nalgebra::DMatrix<f64>`; subspaces are stored as
//! matrices with orthonormal columns.

use nalgebra::{DMatrix, DVector, Matrix3};

/// Absolute floor used when thresholding singular values of orthonormal data.
const TINY: f64 = 1e-300;

/// Singular value decomposition with values sorted in decreasing order.
///
/// Returns `(u, sigma, v)` with `m = u * diag(sigma) * v^T`. `v` is square
/// (`ncols × ncols`) so that kernels can be read off its trailing columns.
pub fn full_svd(m: &DMatrix<f64>) -> (DMatrix<f64>, DVector<f64>, DMatrix<f64>) {
    let (rows, cols) = m.shape();
    // Pad with zero rows so that the right factor is square.
    let padded;
    let work = if rows < cols {
        padded = {
            let mut p = DMatrix::zeros(cols, cols);
            p.view_mut((0, 0), (rows, cols)).copy_from(m);
            p
        };
        &padded
    } else {
        m
    };
    let svd = work.clone().svd(true, true);
    let u = svd.u.expect("svd requested u");
    let vt = svd.v_t.expect("svd requested v_t");
    let s = svd.singular_values;
    let mut order: Vec<usize> = (0..s.len()).collect();
    order.sort_by(|&a, &b| s[b].partial_cmp(&s[a]).unwrap_or(std::cmp::Ordering::Equal));
    let k = s.len();
    let mut us = DMatrix::zeros(work.nrows(), k);
    let mut ss = DVector::zeros(k);
    let mut vs = DMatrix::zeros(cols, k);
    for (dst, &src) in order.iter().enumerate() {
        us.set_column(dst, &u.column(src));
        ss[dst] = s[src];
        vs.set_column(dst, &vt.row(src).transpose());
    }
    let us = us.rows(0, rows).into_owned();
    (us, ss, vs)
}

/// Numerical rank with singular values below `rel_tol · σ_max` discarded.
pub fn rank(m: &DMatrix<f64>, rel_tol: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let s = m.clone().singular_values();
    let smax = s.iter().cloned().fold(0.0, f64::max);
    if smax <= TINY {
        return 0;
    }
    s.iter().filter(|&&x| x > rel_tol * smax).count()
}

/// Orthonormal basis (as columns) of the column span of `m`.
pub fn orthonormal_span(m: &DMatrix<f64>, rel_tol: f64) -> DMatrix<f64> {
    if m.ncols() == 0 {
        return DMatrix::zeros(m.nrows(), 0);
    }
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("svd requested u");
    let s = &svd.singular_values;
    let smax = s.iter().cloned().fold(0.0, f64::max);
    let keep: Vec<usize> = (0..s.len())
        .filter(|&i| smax > TINY && s[i] > rel_tol * smax)
        .collect();
    let mut out = DMatrix::zeros(m.nrows(), keep.len());
    for (j, &i) in keep.iter().enumerate() {
        out.set_column(j, &u.column(i));
    }
    out
}

/// Orthonormal basis of the null space of `m`, thresholding singular values
/// at `abs_tol` (absolute) or `rel_tol · σ_max`, whichever is larger.
pub fn kernel(m: &DMatrix<f64>, rel_tol: f64, abs_tol: f64) -> DMatrix<f64> {
    let cols = m.ncols();
    if m.nrows() == 0 {
        return DMatrix::identity(cols, cols);
    }
    let (_, s, v) = full_svd(m);
    let smax = s.iter().cloned().fold(0.0, f64::max);
    let thr = (rel_tol * smax).max(abs_tol);
    let nonzero = s.iter().filter(|&&x| x > thr).count();
    v.columns(nonzero, cols - nonzero).into_owned()
}

/// Largest singular value.
pub fn op_norm(m: &DMatrix<f64>) -> f64 {
    if m.nrows() == m.ncols() {
        return op_norm_flat(m.as_slice(), m.nrows());
    }
    m.clone().singular_values().iter().cloned().fold(0.0, f64::max)
}

/// Operator norm of a square matrix stored in a flat column-major slice.
pub fn op_norm_flat(m: &[f64], n: usize) -> f64 {
    match n {
        0 => 0.0,
        1 => m[0].abs(),
        2 => {
            let (a, c, b, d) = (m[0], m[1], m[2], m[3]);
            let s = a * a + b * b + c * c + d * d;
            let det = a * d - b * c;
            let disc = (s * s - 4.0 * det * det).max(0.0).sqrt();
            ((s + disc) / 2.0).sqrt()
        }
        3 => {
            let mm = Matrix3::from_column_slice(m);
            let g = mm.transpose() * mm;
            g.symmetric_eigenvalues().max().max(0.0).sqrt()
        }
        _ => DMatrix::from_column_slice(n, n, m)
            .singular_values()
            .iter()
            .cloned()
            .fold(0.0, f64::max),
    }
}

/// Spectral condition number `σ_max / σ_min` (infinite for singular input).
pub fn cond(m: &DMatrix<f64>) -> f64 {
    let s = m.clone().singular_values();
    let smax = s.iter().cloned().fold(0.0, f64::max);
    let smin = s.iter().cloned().fold(f64::INFINITY, f64::min);
    if smin <= 0.0 {
        f64::INFINITY
    } else {
        smax / smin
    }
}

/// Matrix exponential.
pub fn expm(m: &DMatrix<f64>) -> DMatrix<f64> {
    m.clone().exp()
}

/// Logarithm of a unipotent matrix by its terminating series.
pub fn log_unipotent(u: &DMatrix<f64>) -> DMatrix<f64> {
    let n = u.nrows();
    let x = u - DMatrix::identity(n, n);
    let mut power = x.clone();
    let mut out = DMatrix::zeros(n, n);
    for k in 1..=n {
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        out += &power * (sign / k as f64);
        power = &power * &x;
    }
    out
}

/// Largest sine of the principal angles between two subspaces given by
/// orthonormal columns of equal count.
pub fn max_principal_sine(v: &DMatrix<f64>, w: &DMatrix<f64>) -> f64 {
    if v.ncols() == 0 {
        return 0.0;
    }
    // sin θ_max = ‖(I − V Vᵀ) W‖₂, accurate for small angles.
    let resid = w - v * (v.transpose() * w);
    op_norm(&resid).min(1.0)
}

/// Row-major nested representation used by the JSON interfaces.
pub fn to_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

/// Inverse of [`to_rows`]; `None` for ragged or empty input.
pub fn from_rows(rows: &[Vec<f64>]) -> Option<DMatrix<f64>> {
    let r = rows.len();
    if r == 0 {
        return None;
    }
    let c = rows[0].len();
    if c == 0 || rows.iter().any(|row| row.len() != c) {
        return None;
    }
    Some(DMatrix::from_fn(r, c, |i, j| rows[i][j]))
}
