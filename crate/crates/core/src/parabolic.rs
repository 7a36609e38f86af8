//! Standard parabolic data `p_I = m_I ⊕ a_I ⊕ n_I` and the subalgebras
//! `k_I`, `h_I = k_I ⊕ n̄_I` for subsets `I` of the simple roots.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::lie::{Group, RootSpace};
use crate::linalg;
use crate::subspace::Subalgebra;

/// Subspaces attached to a subset `I` of the simple roots.
#[derive(Debug, Clone)]
pub struct ParabolicDatum {
    /// Sorted indices of the simple roots in `I`.
    pub subset: Vec<usize>,
    pub a_i: Subalgebra,
    pub m_i: Subalgebra,
    pub n_i: Subalgebra,
    pub nbar_i: Subalgebra,
    pub k_i: Subalgebra,
    pub h_i: Subalgebra,
    pub p_i: Subalgebra,
    /// Representatives of the components of `K_I` (and of `H_I`) beyond the
    /// identity component.
    pub m_representatives: Vec<DMatrix<f64>>,
}

/// Whether a root lies in the span of the simple roots of `subset`.
pub fn in_levi(root: &RootSpace, subset: &[usize]) -> bool {
    root.coefficients
        .iter()
        .enumerate()
        .all(|(k, &c)| c == 0 || subset.contains(&k))
}

/// Validate and normalize a subset of simple-root indices.
pub fn normalize_subset(group: &Group, subset: &[usize]) -> Result<Vec<usize>> {
    let mut s = subset.to_vec();
    s.sort_unstable();
    s.dedup();
    if let Some(&bad) = s.iter().find(|&&k| k >= group.n_simple()) {
        return Err(Error::UnknownRoot(bad));
    }
    Ok(s)
}

/// All subsets of the simple roots, ordered by bitmask.
pub fn all_subsets(p: usize) -> Vec<Vec<usize>> {
    (0u32..(1 << p))
        .map(|mask| (0..p).filter(|k| mask & (1 << k) != 0).collect())
        .collect()
}

fn columns(d: usize, parts: &[&DMatrix<f64>]) -> DMatrix<f64> {
    let total = parts.iter().map(|p| p.ncols()).sum();
    let mut m = DMatrix::zeros(d, total);
    let mut at = 0;
    for p in parts {
        m.columns_mut(at, p.ncols()).copy_from(p);
        at += p.ncols();
    }
    m
}

/// `a_I = ∩_{α∈I} ker α` as a subspace of `g`.
pub fn a_subspace(group: &Group, subset: &[usize]) -> Subalgebra {
    let r = group.rank_a();
    let mut constraints = DMatrix::zeros(subset.len(), r);
    for (row, &k) in subset.iter().enumerate() {
        constraints.set_row(row, &group.roots.positive[k].values.transpose());
    }
    let x = if subset.is_empty() {
        DMatrix::identity(r, r)
    } else {
        linalg::kernel(&constraints, group.tol.rank, 1e-14)
    };
    Subalgebra::span(&(&group.a_coords * x), group.tol.rank)
}

/// Compute the parabolic datum for `I`.
pub fn parabolic_datum(group: &Group, subset: &[usize]) -> Result<ParabolicDatum> {
    let subset = normalize_subset(group, subset)?;
    let d = group.dim_g;
    let tol = group.tol.rank;
    let roots = &group.roots;

    let a_i = a_subspace(group, &subset);
    // Orthogonal complement of a_I inside a, spanned by the duals of α ∈ I.
    let a_perp = {
        let mut duals = DMatrix::zeros(group.rank_a(), subset.len());
        for (col, &k) in subset.iter().enumerate() {
            duals.set_column(col, &roots.positive[k].values);
        }
        Subalgebra::span(&(&group.a_coords * duals), tol)
    };

    let mut levi: Vec<&DMatrix<f64>> = vec![&roots.m_basis, a_perp.basis()];
    let mut upper: Vec<&DMatrix<f64>> = Vec::new();
    let mut lower: Vec<&DMatrix<f64>> = Vec::new();
    for (pos, neg) in roots.positive.iter().zip(roots.negative.iter()) {
        if in_levi(pos, &subset) {
            levi.push(&pos.basis);
            levi.push(&neg.basis);
        } else {
            upper.push(&pos.basis);
            lower.push(&neg.basis);
        }
    }
    let m_i = Subalgebra::span(&columns(d, &levi), tol);
    let n_i = Subalgebra::from_orthonormal(columns(d, &upper));
    let nbar_i = Subalgebra::from_orthonormal(columns(d, &lower));
    let k = Subalgebra::from_orthonormal(group.k_space.clone());
    let k_i = k.intersect(&m_i, tol);
    let h_i = Subalgebra::sum(&[&k_i, &nbar_i], tol);
    let p_i = Subalgebra::sum(&[&m_i, &a_i, &n_i], tol);

    Ok(ParabolicDatum {
        subset,
        a_i,
        m_i,
        n_i,
        nbar_i,
        k_i,
        h_i,
        p_i,
        m_representatives: group.m_representatives(),
    })
}

impl ParabolicDatum {
    /// `(dim a_I, dim m_I, dim n_I, dim k_I, dim h_I)`.
    pub fn dims(&self) -> (usize, usize, usize, usize, usize) {
        (
            self.a_i.dim(),
            self.m_i.dim(),
            self.n_i.dim(),
            self.k_i.dim(),
            self.h_i.dim(),
        )
    }

    /// Largest component of `[k_I, n̄_I]` outside `n̄_I`.
    pub fn semidirect_residual(&self, group: &Group) -> f64 {
        let mut worst: f64 = 0.0;
        for x in self.k_i.basis().column_iter() {
            let ad = group.ad(&x.into_owned());
            for y in self.nbar_i.basis().column_iter() {
                worst = worst.max(self.nbar_i.residual(&(&ad * y)));
            }
        }
        worst
    }
}

/// `{X ∈ g : [X, h] ⊆ h}`.
pub fn normalizer_subalgebra(group: &Group, h: &Subalgebra) -> Subalgebra {
    let d = group.dim_g;
    if h.dim() == 0 || h.dim() == d {
        return Subalgebra::whole(d);
    }
    let basis = h.basis();
    let proj_perp = DMatrix::<f64>::identity(d, d) - basis * basis.transpose();
    let mut stacked = DMatrix::zeros(d * h.dim(), d);
    for (j, y) in basis.column_iter().enumerate() {
        // [X, y] = −ad_y X.
        let ad_y = group.ad(&y.into_owned());
        stacked.rows_mut(j * d, d).copy_from(&(&proj_perp * ad_y));
    }
    Subalgebra::from_orthonormal(linalg::kernel(&stacked, group.tol.rank, 1e-13))
}

/// Whether `ad_X` is nilpotent, tested on the normalized operator.
pub fn is_ad_nilpotent(group: &Group, x: &DVector<f64>) -> bool {
    let ad = group.ad(x);
    let scale = ad.norm();
    if scale <= 1e-300 {
        return true;
    }
    let a = ad / scale;
    let d = group.dim_g;
    let mut power = a.clone();
    for _ in 1..d {
        power = &power * &a;
    }
    power.norm() <= group.tol.alg * d as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn sl3_single_root_dimensions() {
        let g = Group::sl(3).unwrap();
        let p = parabolic_datum(&g, &[0]).unwrap();
        assert_eq!(p.dims(), (1, 3, 2, 1, 3));
        assert_eq!(p.p_i.dim(), 6);
    }

    #[test]
    fn langlands_dimensions_sum_to_g() {
        for n in [2, 3, 4] {
            let g = Group::sl(n).unwrap();
            for s in all_subsets(n - 1) {
                let p = parabolic_datum(&g, &s).unwrap();
                let total = p.a_i.dim() + p.m_i.dim() + p.n_i.dim() + p.nbar_i.dim();
                assert_eq!(total, g.dim_g, "sl{n}, I = {s:?}");
            }
        }
    }

    #[test]
    fn full_subset_gives_k() {
        for n in [2, 3] {
            let g = Group::sl(n).unwrap();
            let all: Vec<usize> = (0..g.n_simple()).collect();
            let p = parabolic_datum(&g, &all).unwrap();
            assert_eq!(p.a_i.dim(), 0);
            assert_eq!(p.n_i.dim(), 0);
            let k = Subalgebra::from_orthonormal(g.k_space.clone());
            assert!(p.h_i.distance(&k).unwrap() < 1e-9);
        }
    }

    #[test]
    fn sl2_empty_subset_is_span_f() {
        let g = Group::sl(2).unwrap();
        let p = parabolic_datum(&g, &[]).unwrap();
        assert_eq!(p.h_i.dim(), 1);
        let f = g.matrix(&p.h_i.basis().column(0).into_owned());
        assert_abs_diff_eq!(f[(1, 0)].abs(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(f[(0, 1)], 0.0, epsilon = 1e-12);
    }

    #[test]
    fn normalizer_of_span_f_is_borel() {
        let g = Group::sl(2).unwrap();
        let p = parabolic_datum(&g, &[]).unwrap();
        let nz = normalizer_subalgebra(&g, &p.h_i);
        assert_eq!(nz.dim(), 2);
        // H and F lie in it, E does not.
        let h = g.coords(&DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]));
        let e = g.coords(&DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]));
        assert!(nz.residual(&h) < 1e-12);
        assert!(nz.residual(&e) > 0.5);
        assert_eq!(normalizer_subalgebra(&g, &Subalgebra::whole(3)).dim(), 3);
    }

    #[test]
    fn nilpotency_examples() {
        let g = Group::sl(2).unwrap();
        let c = |r: [f64; 4]| g.coords(&DMatrix::from_row_slice(2, 2, &r));
        assert!(is_ad_nilpotent(&g, &c([0.0, 0.0, 1.0, 0.0])));
        assert!(!is_ad_nilpotent(&g, &c([1.0, 0.0, 0.0, -1.0])));
        assert!(!is_ad_nilpotent(&g, &c([0.0, 1.0, -1.0, 0.0])));
    }

    #[test]
    fn unknown_root_index() {
        let g = Group::sl(2).unwrap();
        assert_eq!(parabolic_datum(&g, &[3]).unwrap_err(), Error::UnknownRoot(3));
    }
}
