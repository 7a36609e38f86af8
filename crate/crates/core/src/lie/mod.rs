//! Cartan data, restricted roots, the abelian group `A` and the Iwasawa and
//! Cartan factorizations.

mod factor;
mod group;
mod roots;

use std::ops::Deref;

use nalgebra::{DMatrix, DVector};

pub use factor::{rq_positive, FactorMode};
pub use group::{Family, GroupSpec, RawAlgebra, ReductiveGroupData};
pub use roots::{RestrictedRootDatum, RootSpace};

use crate::error::{Error, Result};
use crate::Tolerances;

/// Group data together with its restricted root system. This is the context
/// object threaded through the rest of the crate.
#[derive(Debug, Clone)]
pub struct Group {
    pub data: ReductiveGroupData,
    pub roots: RestrictedRootDatum,
}

impl Deref for Group {
    type Target = ReductiveGroupData;
    fn deref(&self) -> &ReductiveGroupData {
        &self.data
    }
}

impl Group {
    pub fn new(spec: &GroupSpec, tol: Tolerances) -> Result<Self> {
        let data = ReductiveGroupData::build(spec, tol)?;
        let roots = RestrictedRootDatum::compute(&data)?;
        Ok(Group { data, roots })
    }

    /// `SL(n, R)` with default tolerances.
    pub fn sl(n: usize) -> Result<Self> {
        Group::new(&GroupSpec::sl(n), Tolerances::default())
    }

    /// Number of simple roots `|Σ|`.
    pub fn n_simple(&self) -> usize {
        self.roots.n_simple
    }

    /// `exp(Σ x_i a_i)`.
    pub fn a_from_log(&self, x: &DVector<f64>) -> DMatrix<f64> {
        let mut h = DMatrix::zeros(self.n, self.n);
        for (xi, ai) in x.iter().zip(self.a_basis.iter()) {
            h += ai * *xi;
        }
        if self.diagonal_a {
            DMatrix::from_diagonal(&h.diagonal().map(f64::exp))
        } else {
            crate::linalg::expm(&h)
        }
    }

    /// Logarithm of an element of `A`, in coordinates of the `a` basis.
    pub fn log_a(&self, m: &DMatrix<f64>) -> Result<DVector<f64>> {
        if !self.diagonal_a {
            return Err(Error::Unsupported("A-logarithm for a non-diagonal a".into()));
        }
        if m.shape() != (self.n, self.n) {
            return Err(Error::NotInA("wrong shape".into()));
        }
        let scale = m.amax().max(1.0);
        let mut off = m.clone();
        off.fill_diagonal(0.0);
        if off.amax() > self.tol.fact * scale {
            return Err(Error::NotInA("not diagonal".into()));
        }
        if m.diagonal().iter().any(|&x| x <= 0.0 || !x.is_finite()) {
            return Err(Error::NotInA("diagonal entries must be positive".into()));
        }
        let logs = m.diagonal().map(f64::ln);
        let r = self.rank_a();
        let mut basis = DMatrix::zeros(self.n, r);
        for (j, a) in self.a_basis.iter().enumerate() {
            basis.set_column(j, &a.diagonal());
        }
        let x = basis
            .clone()
            .svd(true, true)
            .solve(&logs, 1e-14)
            .map_err(|e| Error::NumericalBreakdown(e.to_string()))?;
        let resid = (&basis * &x - &logs).amax();
        if resid > self.tol.fact * logs.amax().max(1.0) {
            return Err(Error::NotInA(format!("outside exp(a) (residual {resid:.3e})")));
        }
        Ok(x)
    }

    /// `a^α = e^{α(log a)}` for each simple root.
    pub fn simple_weights(&self, log_a: &DVector<f64>) -> Vec<f64> {
        self.roots.positive[..self.n_simple()]
            .iter()
            .map(|r| r.eval(log_a).exp())
            .collect()
    }

    /// The section `t ↦ a_t`: logarithm of the element with `a^α = |t_α|`
    /// where `t_α ≠ 0` and `a^α = 1` elsewhere.
    pub fn a_section(&self, t: &[f64]) -> Result<DVector<f64>> {
        let p = self.n_simple();
        if t.len() != p {
            return Err(Error::DimensionMismatch(t.len(), p));
        }
        let b = DVector::from_iterator(p, t.iter().map(|&x| if x == 0.0 { 0.0 } else { x.abs().ln() }));
        let s = self.roots.simple_matrix().transpose();
        if p < self.rank_a() && !self.min_norm_section {
            return Err(Error::CenterAmbiguity);
        }
        s.svd(true, true)
            .solve(&b, 1e-14)
            .map_err(|e| Error::NumericalBreakdown(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn sl2_root_alpha_is_twice_x() {
        let g = Group::sl(2).unwrap();
        assert_eq!(g.dim_g, 3);
        assert_eq!(g.rank_a(), 1);
        assert_eq!(g.n_simple(), 1);
        assert_eq!(g.roots.m_basis.ncols(), 0);
        // diag(x, −x) with x = 0.7 is 1.4 · a_1.
        let x = DVector::from_element(1, 1.4);
        assert_abs_diff_eq!(g.roots.positive[0].eval(&x), 1.4, epsilon = 1e-12);
        let e = g.matrix(&g.roots.positive[0].basis.column(0).into_owned());
        let expected = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert_abs_diff_eq!((e - expected).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn sl3_roots_match_a2() {
        let g = Group::sl(3).unwrap();
        assert_eq!(g.dim_g, 8);
        assert_eq!(g.rank_a(), 2);
        assert_eq!(g.n_simple(), 2);
        assert_eq!(g.roots.positive.len(), 3);
        assert_eq!(g.roots.positive[2].coefficients, vec![1, 1]);
        let c = g.roots.cartan_matrix();
        let a2 = DMatrix::from_row_slice(2, 2, &[2.0, -1.0, -1.0, 2.0]);
        assert_abs_diff_eq!((c - a2).norm(), 0.0, epsilon = 1e-10);
        // α₁ = e1 − e2 lives at entry (0, 1).
        let e = g.matrix(&g.roots.positive[0].basis.column(0).into_owned());
        assert_abs_diff_eq!(e[(0, 1)], 1.0, epsilon = 1e-12);
        let e = g.matrix(&g.roots.positive[1].basis.column(0).into_owned());
        assert_abs_diff_eq!(e[(1, 2)], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn sl4_cartan_matrix_is_a3() {
        let g = Group::sl(4).unwrap();
        assert_eq!(g.roots.positive.len(), 6);
        let c = g.roots.cartan_matrix();
        let a3 = DMatrix::from_row_slice(3, 3, &[2.0, -1.0, 0.0, -1.0, 2.0, -1.0, 0.0, -1.0, 2.0]);
        assert_abs_diff_eq!((c - a3).norm(), 0.0, epsilon = 1e-10);
    }

    #[test]
    fn a_log_roundtrip_and_weights() {
        let g = Group::sl(2).unwrap();
        let a = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 0.5]);
        let x = g.log_a(&a).unwrap();
        assert_abs_diff_eq!(g.simple_weights(&x)[0], 4.0, epsilon = 1e-12);
        assert_abs_diff_eq!((g.a_from_log(&x) - a).norm(), 0.0, epsilon = 1e-12);
        let bad = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 1.0]);
        assert!(matches!(g.log_a(&bad), Err(Error::NotInA(_))));
        let neg = DMatrix::from_row_slice(2, 2, &[-1.0, 0.0, 0.0, -1.0]);
        assert!(matches!(g.log_a(&neg), Err(Error::NotInA(_))));
    }

    #[test]
    fn section_realizes_weights() {
        let g = Group::sl(3).unwrap();
        let x = g.a_section(&[2.0, -0.25]).unwrap();
        let w = g.simple_weights(&x);
        assert_abs_diff_eq!(w[0], 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(w[1], 0.25, epsilon = 1e-12);
        let x = g.a_section(&[0.0, 3.0]).unwrap();
        let w = g.simple_weights(&x);
        assert_abs_diff_eq!(w[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(w[1], 3.0, epsilon = 1e-12);
    }
}
