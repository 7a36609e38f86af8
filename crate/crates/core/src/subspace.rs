use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::lie::ReductiveGroupData;
use crate::linalg;

/// A linear subspace of a Lie algebra, stored as orthonormal coordinate
/// columns with respect to the Cartan-orthonormal basis of the algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct Subalgebra {
    basis: DMatrix<f64>,
}

impl Subalgebra {
    /// Wrap columns that are already orthonormal.
    pub fn from_orthonormal(basis: DMatrix<f64>) -> Self {
        Subalgebra { basis }
    }

    /// Span of arbitrary columns, dropping directions below `rel_tol`.
    pub fn span(vectors: &DMatrix<f64>, rel_tol: f64) -> Self {
        Subalgebra {
            basis: linalg::orthonormal_span(vectors, rel_tol),
        }
    }

    pub fn zero(ambient: usize) -> Self {
        Subalgebra {
            basis: DMatrix::zeros(ambient, 0),
        }
    }

    pub fn whole(ambient: usize) -> Self {
        Subalgebra {
            basis: DMatrix::identity(ambient, ambient),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    /// Basis vectors realized as matrices.
    pub fn matrices(&self, g: &ReductiveGroupData) -> Vec<DMatrix<f64>> {
        self.basis
            .column_iter()
            .map(|c| g.matrix(&c.into_owned()))
            .collect()
    }

    /// Component of `v` orthogonal to the subspace.
    pub fn reject(&self, v: &DVector<f64>) -> DVector<f64> {
        v - &self.basis * (self.basis.transpose() * v)
    }

    /// Distance of `v` from the subspace.
    pub fn residual(&self, v: &DVector<f64>) -> f64 {
        self.reject(v).norm()
    }

    /// `‖(1 − P) W‖₂` where `W` is an orthonormal basis of `other`: zero iff
    /// `other` is contained in `self`.
    pub fn containment_residual(&self, other: &Subalgebra) -> f64 {
        if other.dim() == 0 {
            return 0.0;
        }
        linalg::max_principal_sine(&self.basis, &other.basis)
    }

    /// Largest component of a pairwise bracket of basis vectors outside the
    /// subspace.
    pub fn closure_residual(&self, g: &ReductiveGroupData) -> f64 {
        let k = self.dim();
        let ads: Vec<DMatrix<f64>> = (0..k)
            .map(|i| g.ad(&self.basis.column(i).into_owned()))
            .collect();
        let mut worst: f64 = 0.0;
        for i in 0..k {
            let images = &ads[i] * &self.basis;
            let outside = &images - &self.basis * (self.basis.transpose() * &images);
            for j in (i + 1)..k {
                worst = worst.max(outside.column(j).norm());
            }
        }
        worst
    }

    /// Sum of subspaces.
    pub fn sum(parts: &[&Subalgebra], rel_tol: f64) -> Subalgebra {
        let ambient = parts.first().map_or(0, |p| p.ambient_dim());
        let total: usize = parts.iter().map(|p| p.dim()).sum();
        let mut m = DMatrix::zeros(ambient, total);
        let mut col = 0;
        for p in parts {
            m.columns_mut(col, p.dim()).copy_from(&p.basis);
            col += p.dim();
        }
        Subalgebra::span(&m, rel_tol)
    }

    /// Rank of the stacked bases (equals the sum of dimensions iff the sum is
    /// direct).
    pub fn stacked_rank(parts: &[&Subalgebra], rel_tol: f64) -> usize {
        Subalgebra::sum(parts, rel_tol).dim()
    }

    /// Intersection computed as the common kernel of the two complementary
    /// projectors.
    pub fn intersect(&self, other: &Subalgebra, rel_tol: f64) -> Subalgebra {
        let d = self.ambient_dim();
        let id = DMatrix::<f64>::identity(d, d);
        let p1 = &id - &self.basis * self.basis.transpose();
        let p2 = &id - &other.basis * other.basis.transpose();
        let mut stacked = DMatrix::zeros(2 * d, d);
        stacked.rows_mut(0, d).copy_from(&p1);
        stacked.rows_mut(d, d).copy_from(&p2);
        // Projector singular values are 0 or 1, so an absolute cut is natural.
        Subalgebra::from_orthonormal(linalg::kernel(&stacked, 0.0, rel_tol.max(1e-12)))
    }

    /// Image under a linear map of the ambient space.
    pub fn image(&self, map: &DMatrix<f64>, rel_tol: f64) -> Subalgebra {
        Subalgebra::span(&(map * &self.basis), rel_tol)
    }

    /// Largest principal-angle sine to a subspace of the same dimension.
    pub fn distance(&self, other: &Subalgebra) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(self.dim(), other.dim()));
        }
        Ok(linalg::max_principal_sine(&self.basis, &other.basis))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn intersection_of_coordinate_planes() {
        let xy = Subalgebra::span(&DMatrix::from_column_slice(3, 2, &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0]), 1e-12);
        let yz = Subalgebra::span(&DMatrix::from_column_slice(3, 2, &[0.0, 1.0, 0.0, 0.0, 0.0, 1.0]), 1e-12);
        let y = xy.intersect(&yz, 1e-8);
        assert_eq!(y.dim(), 1);
        assert_abs_diff_eq!(y.basis()[(1, 0)].abs(), 1.0, epsilon = 1e-12);
        assert_eq!(Subalgebra::sum(&[&xy, &yz], 1e-10).dim(), 3);
    }

    #[test]
    fn distance_requires_equal_dimension() {
        let a = Subalgebra::whole(2);
        let b = Subalgebra::zero(2);
        assert_eq!(a.distance(&b), Err(Error::DimensionMismatch(2, 0)));
        assert_eq!(a.distance(&a).unwrap(), 0.0);
    }
}
