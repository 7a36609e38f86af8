use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{Family, Group};
use crate::error::{Error, Result};
use crate::linalg;

/// Which global factorization to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FactorMode {
    /// `g = k·a·n`.
    Kan,
    /// `g = n·a·k`.
    Nak,
    /// `g = k₁·a·k₂` with `a` in the closed negative chamber.
    Kak,
}

/// Condition number beyond which factorizations are refused.
const COND_CAP: f64 = 1e12;

/// `QR` with the diagonal of `R` made positive.
fn qr_positive(m: &DMatrix<f64>) -> (DMatrix<f64>, DMatrix<f64>) {
    let qr = m.clone().qr();
    let (mut q, mut r) = (qr.q(), qr.r());
    for i in 0..r.nrows() {
        if r[(i, i)] < 0.0 {
            q.column_mut(i).neg_mut();
            r.row_mut(i).neg_mut();
        }
    }
    (q, r)
}

fn reversal(n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |i, j| if i + j + 1 == n { 1.0 } else { 0.0 })
}

/// `m = R·Q` with `R` upper triangular with positive diagonal and `Q`
/// orthogonal.
pub fn rq_positive(m: &DMatrix<f64>) -> (DMatrix<f64>, DMatrix<f64>) {
    let n = m.nrows();
    let j = reversal(n);
    // J mᵀ J = Q₁ R₁ gives m = (J R₁ᵀ J)(J Q₁ᵀ J).
    let (q1, r1) = qr_positive(&(&j * m.transpose() * &j));
    let r = &j * r1.transpose() * &j;
    let q = &j * q1.transpose() * &j;
    (r, q)
}

/// Within each cluster of equal singular values, rotate the right singular
/// vectors to the orthonormalized projection of the matching coordinate
/// vectors (and the left ones accordingly), so that ties are resolved
/// independently of the SVD routine.
fn canonicalize_ties(u: &mut DMatrix<f64>, vt: &mut DMatrix<f64>, s: &nalgebra::DVector<f64>) {
    let n = s.len();
    let scale = s.amax().max(1e-300);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (s[end] - s[end - 1]).abs() <= 1e-12 * scale {
            end += 1;
        }
        let len = end - start;
        if len > 1 {
            let v_c = vt.rows(start, len).transpose();
            let proj = &v_c * v_c.rows(start, len).transpose();
            if linalg::rank(&proj, 1e-8) == len {
                let (v_new, _) = qr_positive(&proj);
                let w = v_c.transpose() * &v_new;
                let u_new = u.columns(start, len) * &w;
                u.columns_mut(start, len).copy_from(&u_new);
                vt.rows_mut(start, len).copy_from(&v_new.transpose());
            }
        }
        start = end;
    }
}

fn split_diagonal(r: &DMatrix<f64>) -> DMatrix<f64> {
    DMatrix::from_diagonal(&r.diagonal())
}

impl Group {
    /// Compute `KAN`, `NAK` or `KAK`.
    ///
    /// For raw backends the matrix factors are checked to lie in the group;
    /// realizations where they do not are reported as unsupported.
    pub fn factorize(
        &self,
        g: &DMatrix<f64>,
        mode: FactorMode,
    ) -> Result<(DMatrix<f64>, DMatrix<f64>, DMatrix<f64>)> {
        self.check_element(g)?;
        let kappa = linalg::cond(g);
        if !(kappa <= COND_CAP) {
            return Err(Error::NumericalBreakdown(format!("condition number {kappa:.3e}")));
        }
        let out = match mode {
            FactorMode::Kan => {
                let (q, r) = qr_positive(g);
                let a = split_diagonal(&r);
                let a_inv = DMatrix::from_diagonal(&r.diagonal().map(|x| 1.0 / x));
                let n = &a_inv * &r;
                (q, a, n)
            }
            FactorMode::Nak => {
                let (r, q) = rq_positive(g);
                let a = split_diagonal(&r);
                let a_inv = DMatrix::from_diagonal(&r.diagonal().map(|x| 1.0 / x));
                let n = &r * &a_inv;
                (n, a, q)
            }
            FactorMode::Kak => {
                let (mut u, s, v) = linalg::full_svd(g);
                let nn = s.len();
                let mut vt = v.transpose();
                // Ascending singular values put a in the closed negative chamber.
                let rev: Vec<usize> = (0..nn).rev().collect();
                let mut u2 = DMatrix::zeros(nn, nn);
                let mut vt2 = DMatrix::zeros(nn, nn);
                let mut sd = DMatrix::zeros(nn, nn);
                for (dst, &src) in rev.iter().enumerate() {
                    u2.set_column(dst, &u.column(src));
                    vt2.set_row(dst, &vt.row(src));
                    sd[(dst, dst)] = s[src];
                }
                u = u2;
                vt = vt2;
                canonicalize_ties(&mut u, &mut vt, &sd.diagonal());
                if u.determinant() < 0.0 {
                    u.column_mut(0).neg_mut();
                    vt.row_mut(0).neg_mut();
                }
                (u, sd, vt)
            }
        };
        if self.family == Family::Raw {
            self.check_factors(mode, &out)?;
        }
        Ok(out)
    }

    fn check_factors(
        &self,
        mode: FactorMode,
        (x, a, y): &(DMatrix<f64>, DMatrix<f64>, DMatrix<f64>),
    ) -> Result<()> {
        let tol = self.tol.fact * 10.0;
        let in_n = |m: &DMatrix<f64>| {
            let log = linalg::log_unipotent(m);
            let (c, resid) = self.coords_with_residual(&log);
            resid <= tol * log.norm().max(1.0) && self.roots.n_space().residual(&c) <= tol * c.norm().max(1.0)
        };
        let ok_a = self.log_a(a).is_ok();
        let ok = match mode {
            FactorMode::Kan => self.k_membership(x, tol) && ok_a && in_n(y),
            FactorMode::Nak => in_n(x) && ok_a && self.k_membership(y, tol),
            FactorMode::Kak => self.k_membership(x, tol) && ok_a && self.k_membership(y, tol),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Unsupported(
                "matrix factors leave the group for this realization".into(),
            ))
        }
    }
}
