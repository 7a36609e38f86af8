//! The family `h_t` of subalgebras and the groups `H_t` it integrates to,
//! the action of `A` on parameters, and the `N·A·H_t` factorization that
//! underlies every chart computation.
//!
//! For `t` with support `I` write `a_s` for the section with `a_s^α = |t_α|`
//! on `I` and `a_s^α = 1` off `I`. Then `H_t = a_s H_I a_s⁻¹` where
//! `H_I = K_I N̄_I`, so every computation reduces to the sign representative.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::{Family, Group};
use crate::linalg;
use crate::subspace::Subalgebra;

/// A point `t ∈ R^Σ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeformationParameter(pub Vec<f64>);

/// Sign pattern of a parameter, in `{−1, 0, 1}^Σ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SignVector(pub Vec<i8>);

impl DeformationParameter {
    pub fn new(t: Vec<f64>) -> Result<Self> {
        if t.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("non-finite deformation parameter".into()));
        }
        Ok(DeformationParameter(t))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Indices `α` with `t_α ≠ 0`.
    pub fn support(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&k| self.0[k] != 0.0).collect()
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.0.iter().all(|&x| x != 0.0)
    }

    pub fn sign(&self) -> SignVector {
        SignVector(
            self.0
                .iter()
                .map(|&x| if x > 0.0 { 1 } else if x < 0.0 { -1 } else { 0 })
                .collect(),
        )
    }
}

impl SignVector {
    pub fn support(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&k| self.0[k] != 0).collect()
    }

    /// The parameter with entries `s_α ∈ {−1, 0, 1}`.
    pub fn as_parameter(&self) -> DeformationParameter {
        DeformationParameter(self.0.iter().map(|&s| s as f64).collect())
    }

    /// Every sign pattern of length `p`, in base-3 order.
    pub fn all(p: usize) -> Vec<SignVector> {
        (0..3usize.pow(p as u32))
            .map(|mut code| {
                SignVector(
                    (0..p)
                        .map(|_| {
                            let digit = (code % 3) as i8 - 1;
                            code /= 3;
                            digit
                        })
                        .collect(),
                )
            })
            .collect()
    }
}

fn check_len(group: &Group, t: &DeformationParameter) -> Result<()> {
    if t.len() != group.n_simple() {
        return Err(Error::DimensionMismatch(t.len(), group.n_simple()));
    }
    Ok(())
}

/// `∏ t_α^{2 n_{γ,α}}` with `0⁰ = 1`.
fn weight(coefficients: &[i64], t: &[f64]) -> f64 {
    coefficients
        .iter()
        .zip(t.iter())
        .map(|(&n, &x)| if n == 0 { 1.0 } else { x.powi(2 * n as i32) })
        .product()
}

/// `t^{2γ}` for the positive root with index `root`.
pub fn t_pow_2gamma(group: &Group, t: &DeformationParameter, root: usize) -> Result<f64> {
    check_len(group, t)?;
    let r = group
        .roots
        .positive
        .get(root)
        .ok_or(Error::UnknownRoot(root))?;
    Ok(weight(&r.coefficients, &t.0))
}

/// Orthonormal basis of `h_t`: `m` together with the normalized vectors
/// `(t^{2γ} X + θX) / √(t^{4γ} + 1)`, in root order.
pub fn h_t_basis(group: &Group, t: &DeformationParameter) -> Result<Subalgebra> {
    check_len(group, t)?;
    let roots = &group.roots;
    let total = roots.m_basis.ncols() + roots.positive.iter().map(|r| r.multiplicity()).sum::<usize>();
    let mut m = DMatrix::zeros(group.dim_g, total);
    m.columns_mut(0, roots.m_basis.ncols()).copy_from(&roots.m_basis);
    let mut at = roots.m_basis.ncols();
    for root in &roots.positive {
        let w = weight(&root.coefficients, &t.0);
        for x in root.basis.column_iter() {
            let v = (x * w + &group.theta * x) / (w * w + 1.0).sqrt();
            m.set_column(at, &v);
            at += 1;
        }
    }
    Ok(Subalgebra::from_orthonormal(m))
}

/// `(k_t, n_t)` with `h_t = k_t ⊕ θ n_t`: root directions with `t^{2γ} ≠ 0`
/// go to `k_t`, the others to `n_t`.
pub fn split_k_n(group: &Group, t: &DeformationParameter) -> Result<(Subalgebra, Subalgebra)> {
    check_len(group, t)?;
    let d = group.dim_g;
    let roots = &group.roots;
    let mut kcols: Vec<DVector<f64>> = roots.m_basis.column_iter().map(|c| c.into_owned()).collect();
    let mut ncols: Vec<DVector<f64>> = Vec::new();
    for root in &roots.positive {
        let w = weight(&root.coefficients, &t.0);
        for x in root.basis.column_iter() {
            if w == 0.0 {
                ncols.push(x.into_owned());
            } else {
                let theta_x = &group.theta * x;
                let v = (x * w + theta_x) / (w * w + 1.0).sqrt();
                kcols.push(v);
            }
        }
    }
    let pack = |cols: &[DVector<f64>]| {
        let mut m = DMatrix::zeros(d, cols.len());
        for (j, c) in cols.iter().enumerate() {
            m.set_column(j, c);
        }
        Subalgebra::from_orthonormal(m)
    };
    Ok((pack(&kcols), pack(&ncols)))
}

/// `(a·t)_α = a^α t_α` for `a` given by its logarithm.
pub fn a_action_log(group: &Group, log_a: &DVector<f64>, t: &DeformationParameter) -> DeformationParameter {
    let w = group.simple_weights(log_a);
    DeformationParameter(t.0.iter().zip(w.iter()).map(|(x, a)| x * a).collect())
}

/// `(a·t)_α = a^α t_α`.
pub fn a_action(group: &Group, a: &DMatrix<f64>, t: &DeformationParameter) -> Result<DeformationParameter> {
    check_len(group, t)?;
    let log = group.log_a(a)?;
    Ok(a_action_log(group, &log, t))
}

/// Output of [`nah_factorize`].
#[derive(Debug, Clone)]
pub struct Nah {
    pub n: DMatrix<f64>,
    pub a: DMatrix<f64>,
    pub h: DMatrix<f64>,
    /// Logarithm of `a` in coordinates of the `a` basis.
    pub log_a: DVector<f64>,
    /// `‖n·a·h − g‖_F`.
    pub residual: f64,
}

/// Blocks `(start, len)` of the index set `{0..n}` for `SL(n, R)`: a simple
/// root in `support` merges the two indices it connects.
pub fn sl_blocks(group: &Group, support: &[usize]) -> Result<Vec<(usize, usize)>> {
    if group.family != Family::SpecialLinear {
        return Err(Error::Unsupported("block structure needs the SL(n) backend".into()));
    }
    let n = group.n;
    let mut merge = vec![false; n.saturating_sub(1)];
    for &k in support {
        let root = group.roots.simple(k)?;
        let e = group.matrix(&root.basis.column(0).into_owned());
        let (i, j) = e.iamax_full();
        if j != i + 1 {
            return Err(Error::InvalidCartanData("simple root space is not a superdiagonal entry".into()));
        }
        merge[i] = true;
    }
    let mut blocks = Vec::new();
    let mut start = 0;
    for i in 0..n {
        if i + 1 == n || !merge[i] {
            blocks.push((start, i + 1 - start));
            start = i + 1;
        }
    }
    Ok(blocks)
}

/// Block `U·D·L` factorization (block upper unipotent, block diagonal, block
/// lower unipotent). Fails when a trailing pivot is numerically singular.
fn block_udl(
    y: &DMatrix<f64>,
    blocks: &[(usize, usize)],
) -> Result<(DMatrix<f64>, Vec<DMatrix<f64>>, DMatrix<f64>)> {
    let n = y.nrows();
    let scale = linalg::op_norm(y).max(1e-300);
    let mut work = y.clone();
    let mut u = DMatrix::<f64>::identity(n, n);
    let mut l = DMatrix::<f64>::identity(n, n);
    let mut pivots = vec![DMatrix::zeros(0, 0); blocks.len()];
    for (idx, &(s, len)) in blocks.iter().enumerate().rev() {
        let piv = work.view((s, s), (len, len)).into_owned();
        let smin = piv.clone().singular_values().min();
        if smin <= 1e-11 * scale {
            return Err(Error::NotInCell);
        }
        let inv = piv.clone().try_inverse().ok_or(Error::NotInCell)?;
        if s > 0 {
            let col = work.view((0, s), (s, len)).into_owned();
            let row = work.view((s, 0), (len, s)).into_owned();
            let ucol = &col * &inv;
            let lrow = &inv * &row;
            let update = &ucol * &row;
            u.view_mut((0, s), (s, len)).copy_from(&ucol);
            l.view_mut((s, 0), (len, s)).copy_from(&lrow);
            let mut top = work.view_mut((0, 0), (s, s));
            top -= update;
        }
        pivots[idx] = piv;
    }
    Ok((u, pivots, l))
}

/// Factor `g = n·a·h` with `n ∈ N`, `a ∈ A`, `h ∈ H_t`.
pub fn nah_factorize(group: &Group, g: &DMatrix<f64>, t: &DeformationParameter) -> Result<Nah> {
    check_len(group, t)?;
    group.check_element(g)?;
    let support = t.support();
    let nondegenerate = support.len() == group.n_simple();
    if group.family == Family::Raw && !nondegenerate {
        return Err(Error::Unsupported("degenerate t on a raw backend".into()));
    }
    let log_s = group.a_section(&t.0)?;
    let a_s = group.a_from_log(&log_s);
    let a_s_inv = group.a_from_log(&(-&log_s));
    let y = g * &a_s;

    let (n, a_prime, h_prime) = if group.family == Family::Raw {
        group.factorize(&y, crate::lie::FactorMode::Nak)?
    } else {
        let blocks = sl_blocks(group, &support)?;
        let (u, pivots, l) = block_udl(&y, &blocks)?;
        let size = group.n;
        let mut n_d = DMatrix::<f64>::identity(size, size);
        let mut a_d = DMatrix::<f64>::identity(size, size);
        let mut k_d = DMatrix::<f64>::identity(size, size);
        for (&(s, len), piv) in blocks.iter().zip(pivots.iter()) {
            let (r, q) = crate::lie::rq_positive(piv);
            for i in 0..len {
                a_d[(s + i, s + i)] = r[(i, i)];
            }
            let a_inv = DMatrix::from_diagonal(&r.diagonal().map(|x| 1.0 / x));
            n_d.view_mut((s, s), (len, len)).copy_from(&(&r * a_inv));
            k_d.view_mut((s, s), (len, len)).copy_from(&q);
        }
        (u * n_d, a_d, k_d * l)
    };

    let a = &a_prime * &a_s_inv;
    let h = &a_s * h_prime * &a_s_inv;
    let log_a = group.log_a(&a)?;
    let residual = (&n * &a * &h - g).norm();
    Ok(Nah {
        n,
        a,
        h,
        log_a,
        residual,
    })
}

/// Residual of `H_I` membership for `z` (sign representative frame) and the
/// tolerance it is compared against.
fn h_i_residual(group: &Group, z: &DMatrix<f64>, support: &[usize]) -> Result<f64> {
    if group.family == Family::Raw {
        if support.len() != group.n_simple() {
            return Err(Error::Unsupported("degenerate membership on a raw backend".into()));
        }
        let ad = group.adjoint(z)?;
        let d = group.dim_g;
        return Ok((ad.transpose() * &ad - DMatrix::<f64>::identity(d, d)).amax());
    }
    let blocks = sl_blocks(group, support)?;
    let mut worst: f64 = (z.determinant() - 1.0).abs();
    for (bi, &(s, len)) in blocks.iter().enumerate() {
        let b = z.view((s, s), (len, len)).into_owned();
        worst = worst.max((b.transpose() * &b - DMatrix::<f64>::identity(len, len)).amax());
        // Entries above the block diagonal.
        for &(s2, len2) in &blocks[bi + 1..] {
            worst = worst.max(z.view((s, s2), (len, len2)).amax());
        }
    }
    Ok(worst)
}

/// `(residual, tolerance)` for the test `g⁻¹ x g ∈ H_t`.
pub fn membership_residual(
    group: &Group,
    x: &DMatrix<f64>,
    t: &DeformationParameter,
    conj: &DMatrix<f64>,
) -> Result<(f64, f64)> {
    check_len(group, t)?;
    let support = t.support();
    if group.family == Family::Raw && support.len() != group.n_simple() {
        return Err(Error::Unsupported("degenerate membership on a raw backend".into()));
    }
    let log_s = group.a_section(&t.0)?;
    let frame = conj * group.a_from_log(&log_s);
    let frame_inv = frame
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::NotInGroup("singular conjugator".into()))?;
    let z = &frame_inv * x * &frame;
    let resid = h_i_residual(group, &z, &support)?;
    let kappa = linalg::op_norm(&frame) * linalg::op_norm(&frame_inv);
    let tol = group.tol.fact * (kappa * linalg::op_norm(x)).max(1.0);
    Ok((resid, tol))
}

/// Whether `g⁻¹ x g ∈ H_t`.
pub fn subgroup_membership(
    group: &Group,
    x: &DMatrix<f64>,
    t: &DeformationParameter,
    conj: &DMatrix<f64>,
) -> Result<bool> {
    let (resid, tol) = membership_residual(group, x, t, conj)?;
    Ok(resid <= tol)
}

/// Generating data for sampled nets of `left · H_t`.
#[derive(Debug, Clone)]
pub struct SampledSubgroup {
    /// Matrices of an orthonormal basis of `h_t`.
    pub generators: Vec<DMatrix<f64>>,
    pub m_representatives: Vec<DMatrix<f64>>,
    /// Maximal word length.
    pub word_length: usize,
    /// Base coefficient grid (symmetrized).
    pub grid: Vec<f64>,
    /// Append powers of two up to `R/2` to the grid when sampling.
    pub extend_grid: bool,
    /// Number of extra seeded random words.
    pub random_words: usize,
    /// Left translate applied to every sample.
    pub left: DMatrix<f64>,
}

impl SampledSubgroup {
    /// Default word sampler for `H_t`.
    pub fn h_t(group: &Group, t: &DeformationParameter) -> Result<Self> {
        let h = h_t_basis(group, t)?;
        Ok(SampledSubgroup {
            generators: h.matrices(group),
            m_representatives: group.m_representatives(),
            word_length: 3,
            grid: vec![0.25, 0.5, 1.0],
            extend_grid: true,
            random_words: 64,
            left: DMatrix::identity(group.n, group.n),
        })
    }

    pub fn with_left(mut self, g: &DMatrix<f64>) -> Self {
        self.left = g.clone();
        self
    }

    /// Positive coefficient magnitudes used for a window of radius `radius`.
    pub fn grid_for(&self, radius: f64) -> Vec<f64> {
        let mut g = self.grid.clone();
        if self.extend_grid {
            let mut c = 2.0;
            while c <= radius / 2.0 {
                g.push(c);
                c *= 2.0;
            }
        }
        g
    }

    /// All words (before truncation). Deterministic in `seed`.
    pub fn words(&self, radius: f64, seed: u64) -> Vec<DMatrix<f64>> {
        let n = self.left.nrows();
        let grid = self.grid_for(radius);
        let mut letters: Vec<(usize, DMatrix<f64>)> = Vec::new();
        for (gi, y) in self.generators.iter().enumerate() {
            for &c in &grid {
                for s in [c, -c] {
                    letters.push((gi, linalg::expm(&(y * s))));
                }
            }
        }
        let mut out = vec![DMatrix::identity(n, n)];
        let mut frontier = out.clone();
        for _ in 0..self.word_length {
            let next: Vec<DMatrix<f64>> = frontier
                .iter()
                .flat_map(|w| letters.iter().map(move |(_, letter)| w * letter))
                .collect();
            out.extend(next.iter().cloned());
            frontier = next;
        }

        if self.random_words > 0 && !self.generators.is_empty() {
            let cmax = grid.iter().cloned().fold(0.0, f64::max);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..self.random_words {
                let mut w = DMatrix::identity(n, n);
                for _ in 0..self.word_length.max(1) {
                    let gi = rng.random_range(0..self.generators.len());
                    let c: f64 = rng.random_range(-cmax..=cmax);
                    w *= linalg::expm(&(&self.generators[gi] * c));
                }
                out.push(w);
            }
        }

        let mut result = Vec::with_capacity(out.len() * self.m_representatives.len());
        for w in &out {
            for m in &self.m_representatives {
                result.push(&self.left * m * w);
            }
        }
        result
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn m2(a: f64, b: f64, c: f64, d: f64) -> DMatrix<f64> {
        DMatrix::from_row_slice(2, 2, &[a, b, c, d])
    }

    fn tp(v: &[f64]) -> DeformationParameter {
        DeformationParameter(v.to_vec())
    }

    #[test]
    fn t_power_examples() {
        let g = Group::sl(3).unwrap();
        assert_abs_diff_eq!(t_pow_2gamma(&g, &tp(&[2.0, 3.0]), 2).unwrap(), 36.0, epsilon = 1e-12);
        // 0⁰ = 1 for the root α₂ at t_{α₁} = 0.
        assert_abs_diff_eq!(t_pow_2gamma(&g, &tp(&[0.0, 3.0]), 1).unwrap(), 9.0, epsilon = 1e-12);
        assert_eq!(t_pow_2gamma(&g, &tp(&[0.0, 3.0]), 2).unwrap(), 0.0);
        assert_eq!(t_pow_2gamma(&g, &tp(&[1.0, 1.0]), 7), Err(Error::UnknownRoot(7)));
    }

    #[test]
    fn sl2_h_t_at_two() {
        let g = Group::sl(2).unwrap();
        let h = h_t_basis(&g, &tp(&[2.0])).unwrap();
        assert_eq!(h.dim(), 1);
        let x = g.matrix(&h.basis().column(0).into_owned());
        let expected = m2(0.0, 4.0, -1.0, 0.0) / 17f64.sqrt();
        let d = (&x - &expected).norm().min((&x + &expected).norm());
        assert_abs_diff_eq!(d, 0.0, epsilon = 1e-12);
        let (k, n) = split_k_n(&g, &tp(&[2.0])).unwrap();
        assert_eq!((k.dim(), n.dim()), (1, 0));
        let (k, n) = split_k_n(&g, &tp(&[0.0])).unwrap();
        assert_eq!((k.dim(), n.dim()), (0, 1));
    }

    #[test]
    fn unit_signs_give_k() {
        let g = Group::sl(3).unwrap();
        let k = Subalgebra::from_orthonormal(g.k_space.clone());
        for s in [[1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0]] {
            let h = h_t_basis(&g, &tp(&s)).unwrap();
            assert!(h.distance(&k).unwrap() < 1e-9);
        }
        let (k, n) = split_k_n(&g, &tp(&[1.0, 0.0])).unwrap();
        assert_eq!((k.dim(), n.dim()), (1, 2));
    }

    #[test]
    fn a_action_examples() {
        let g = Group::sl(2).unwrap();
        let t = a_action(&g, &m2(2.0, 0.0, 0.0, 0.5), &tp(&[1.0])).unwrap();
        assert_abs_diff_eq!(t.0[0], 4.0, epsilon = 1e-12);
        let same = a_action(&g, &DMatrix::identity(2, 2), &tp(&[0.3])).unwrap();
        assert_abs_diff_eq!(same.0[0], 0.3, epsilon = 1e-15);
        assert!(matches!(
            a_action(&g, &m2(1.0, 1.0, 0.0, 1.0), &tp(&[1.0])),
            Err(Error::NotInA(_))
        ));
    }

    #[test]
    fn nah_of_lower_unipotent_matches_nak() {
        let g = Group::sl(2).unwrap();
        let x = m2(1.0, 0.0, 1.0, 1.0);
        let f = nah_factorize(&g, &x, &tp(&[1.0])).unwrap();
        let s = 0.5f64.sqrt();
        assert_abs_diff_eq!((&f.n - m2(1.0, 0.5, 0.0, 1.0)).norm(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!((&f.a - m2(s, 0.0, 0.0, 2f64.sqrt())).norm(), 0.0, epsilon = 1e-12);
        assert!(g.k_membership(&f.h, 1e-12));
        assert!(f.residual < 1e-12);
    }

    #[test]
    fn nah_trivial_cases() {
        let g = Group::sl(3).unwrap();
        let c = 0.6f64;
        let s = 0.8f64;
        let k = DMatrix::from_row_slice(3, 3, &[c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0]);
        let f = nah_factorize(&g, &k, &tp(&[1.0, 1.0])).unwrap();
        let e = DMatrix::<f64>::identity(3, 3);
        assert_abs_diff_eq!((&f.n - &e).norm(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!((&f.a - &e).norm(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!((&f.h - &k).norm(), 0.0, epsilon = 1e-12);

        let a = DMatrix::from_diagonal(&DVector::from_vec(vec![2.0, 0.25, 2.0]));
        let f = nah_factorize(&g, &a, &tp(&[0.3, -5.0])).unwrap();
        assert_abs_diff_eq!((&f.a - &a).norm(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!((&f.h - &e).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn degenerate_nah_reconstructs_and_lands_in_h() {
        let g = Group::sl(3).unwrap();
        let x = DMatrix::<f64>::from_row_slice(3, 3, &[1.0, 0.5, -0.2, 0.3, 1.2, 0.4, -0.1, 0.7, 1.1]);
        let x = &x / x.determinant().cbrt();
        for t in [[0.0, 0.0], [2.0, 0.0], [0.0, -0.5], [0.7, 3.0]] {
            let t = tp(&t);
            let f = nah_factorize(&g, &x, &t).unwrap();
            assert!(f.residual < 1e-12, "{t:?}: {}", f.residual);
            let e = DMatrix::identity(3, 3);
            assert!(subgroup_membership(&g, &f.h, &t, &e).unwrap(), "{t:?}");
            for i in 0..3 {
                assert_abs_diff_eq!(f.n[(i, i)], 1.0, epsilon = 1e-12);
                for j in 0..i {
                    assert_abs_diff_eq!(f.n[(i, j)], 0.0, epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn outside_cell_is_reported() {
        let g = Group::sl(2).unwrap();
        let w = m2(0.0, -1.0, 1.0, 0.0);
        assert_eq!(nah_factorize(&g, &w, &tp(&[0.0])).unwrap_err(), Error::NotInCell);
    }

    #[test]
    fn membership_examples() {
        let g = Group::sl(2).unwrap();
        let e = DMatrix::identity(2, 2);
        let (c, s) = (0.3f64.cos(), 0.3f64.sin());
        assert!(subgroup_membership(&g, &m2(c, -s, s, c), &tp(&[1.0]), &e).unwrap());
        assert!(subgroup_membership(&g, &m2(-1.0, 0.0, 4.0, -1.0), &tp(&[0.0]), &e).unwrap());
        assert!(!subgroup_membership(&g, &m2(2.0, 0.0, 0.0, 0.5), &tp(&[1.0]), &e).unwrap());
        // The explicit family [[c, −t²s], [s, c]] with c² + t²s² = 1.
        let t = 0.4;
        let (c, s) = (0.8, 0.6 / t);
        assert!(subgroup_membership(&g, &m2(c, -t * t * s, s, c), &tp(&[t]), &e).unwrap());
    }

    #[test]
    fn sampler_is_deterministic_and_contains_identity() {
        let g = Group::sl(2).unwrap();
        let h = SampledSubgroup::h_t(&g, &tp(&[1.0])).unwrap();
        let a = h.words(10.0, 42);
        let b = h.words(10.0, 42);
        assert_eq!(a, b);
        assert!(a.iter().any(|w| (w - DMatrix::<f64>::identity(2, 2)).norm() < 1e-15));
        assert_eq!(h.grid_for(10.0), vec![0.25, 0.5, 1.0, 2.0, 4.0]);
    }
}
