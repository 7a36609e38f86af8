use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::Tolerances;

/// Which structure theory is available for a group beyond its Lie algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    /// `SL(n, R)` with `θ(X) = −Xᵀ`, `K = SO(n)`, `A` positive diagonal and
    /// `N` unipotent upper triangular.
    SpecialLinear,
    /// User-supplied algebra data.
    Raw,
}

/// JSON description of a group: either a named family or raw algebra data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupSpec {
    Family { family: String, n: usize },
    Raw { raw: RawAlgebra },
}

/// Raw Lie algebra data. Matrices are row-major nested arrays.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawAlgebra {
    #[serde(default)]
    pub name: Option<String>,
    /// Spanning matrices of the algebra.
    pub basis: Vec<Vec<Vec<f64>>>,
    /// Cartan involution acting on coordinate columns w.r.t. `basis`.
    pub theta_matrix: Vec<Vec<f64>>,
    /// Gram matrix of the invariant form w.r.t. `basis`.
    pub form_matrix: Vec<Vec<f64>>,
    /// Basis of the maximal abelian subspace, as matrices.
    pub a_basis: Vec<Vec<Vec<f64>>>,
    /// Opt-in choice of `a_t` for groups with noncompact center: the
    /// minimum-norm solution (orthogonal to the center).
    #[serde(default)]
    pub center_section: Option<String>,
}

impl GroupSpec {
    /// `SL(n, R)`.
    pub fn sl(n: usize) -> Self {
        GroupSpec::Family {
            family: "sl".into(),
            n,
        }
    }

    /// Parse a short name such as `sl2r` or `sl3r`.
    pub fn from_name(name: &str) -> Result<Self> {
        let lower = name.trim().to_ascii_lowercase();
        let digits = lower
            .strip_prefix("sl")
            .map(|rest| rest.strip_suffix('r').unwrap_or(rest))
            .ok_or_else(|| Error::UnsupportedGroup(name.to_string()))?;
        let n: usize = digits
            .parse()
            .map_err(|_| Error::UnsupportedGroup(name.to_string()))?;
        Ok(GroupSpec::sl(n))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(e.to_string()))
    }
}

/// A real reductive Lie algebra in a matrix realization together with its
/// Cartan data.
///
/// Internally the algebra is coordinatized by a basis that is orthonormal for
/// the Cartan inner product `⟨X, Y⟩ = −B(X, θY)`. Every subspace elsewhere in
/// the crate is expressed in these coordinates.
#[derive(Debug, Clone)]
pub struct ReductiveGroupData {
    pub name: String,
    pub family: Family,
    /// Size of the realizing matrices.
    pub n: usize,
    pub dim_g: usize,
    /// Cartan-orthonormal basis of the algebra.
    pub algebra_basis: Vec<DMatrix<f64>>,
    /// Cartan involution in orthonormal coordinates.
    pub theta: DMatrix<f64>,
    /// Gram matrix of the invariant form in orthonormal coordinates.
    pub form_b: DMatrix<f64>,
    /// Basis of `a` as supplied, in matrix form.
    pub a_basis: Vec<DMatrix<f64>>,
    /// Coordinates of `a_basis` (one column each).
    pub a_coords: DMatrix<f64>,
    /// Orthonormal bases of the `+1` (k) and `−1` (p) eigenspaces of θ.
    pub k_space: DMatrix<f64>,
    pub p_space: DMatrix<f64>,
    /// `ad` of each basis vector, in coordinates.
    pub(crate) ad_basis: Vec<DMatrix<f64>>,
    embed: DMatrix<f64>,
    embed_pinv: DMatrix<f64>,
    pub(crate) diagonal_a: bool,
    pub(crate) traceless: bool,
    pub(crate) min_norm_section: bool,
    pub tol: Tolerances,
}

fn vec_of(m: &DMatrix<f64>) -> DVector<f64> {
    DVector::from_column_slice(m.as_slice())
}

fn matrix_list(raw: &[Vec<Vec<f64>>], what: &str) -> Result<Vec<DMatrix<f64>>> {
    raw.iter()
        .map(|rows| {
            linalg::from_rows(rows).ok_or_else(|| Error::InvalidInput(format!("malformed {what}")))
        })
        .collect()
}

fn sl_raw(n: usize) -> (Vec<DMatrix<f64>>, Vec<DMatrix<f64>>) {
    let mut basis = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let mut e = DMatrix::zeros(n, n);
                e[(i, j)] = 1.0;
                basis.push(e);
            }
        }
    }
    // Helmert basis of the traceless diagonals.
    for k in 1..n {
        let mut h = DMatrix::zeros(n, n);
        let norm = ((k * (k + 1)) as f64).sqrt();
        for i in 0..k {
            h[(i, i)] = 1.0 / norm;
        }
        h[(k, k)] = -(k as f64) / norm;
        basis.push(h);
    }
    // E_kk − I/n, k < n − 1: lexicographic order on these evaluations makes
    // the upper-triangular root spaces positive.
    let a_basis = (0..n - 1)
        .map(|k| {
            let mut h = DMatrix::from_diagonal_element(n, n, -1.0 / n as f64);
            h[(k, k)] += 1.0;
            h
        })
        .collect();
    (basis, a_basis)
}

impl ReductiveGroupData {
    /// Build and validate group data from a [`GroupSpec`].
    pub fn build(spec: &GroupSpec, tol: Tolerances) -> Result<Self> {
        match spec {
            GroupSpec::Family { family, n } => {
                if family != "sl" || *n < 2 {
                    return Err(Error::UnsupportedGroup(format!("{family}({n})")));
                }
                let n = *n;
                let (basis, a_basis) = sl_raw(n);
                // The sl basis is Frobenius-orthonormal, so coordinates are inner products.
                let coords = |x: &DMatrix<f64>| -> DVector<f64> {
                    DVector::from_iterator(basis.len(), basis.iter().map(|b| b.dot(x)))
                };
                let d = basis.len();
                let mut theta = DMatrix::zeros(d, d);
                let mut form = DMatrix::zeros(d, d);
                for (j, bj) in basis.iter().enumerate() {
                    theta.set_column(j, &coords(&(-bj.transpose())));
                    for (i, bi) in basis.iter().enumerate() {
                        form[(i, j)] = (bi * bj).trace();
                    }
                }
                Self::assemble(
                    format!("sl{n}r"),
                    Family::SpecialLinear,
                    basis,
                    theta,
                    form,
                    a_basis,
                    false,
                    tol,
                )
            }
            GroupSpec::Raw { raw } => {
                let basis = matrix_list(&raw.basis, "basis")?;
                let a_basis = matrix_list(&raw.a_basis, "a_basis")?;
                let theta = linalg::from_rows(&raw.theta_matrix)
                    .ok_or_else(|| Error::InvalidInput("malformed theta_matrix".into()))?;
                let form = linalg::from_rows(&raw.form_matrix)
                    .ok_or_else(|| Error::InvalidInput("malformed form_matrix".into()))?;
                let min_norm = match raw.center_section.as_deref() {
                    None => false,
                    Some("min_norm") => true,
                    Some(other) => {
                        return Err(Error::InvalidInput(format!("unknown center_section {other}")))
                    }
                };
                Self::assemble(
                    raw.name.clone().unwrap_or_else(|| "raw".into()),
                    Family::Raw,
                    basis,
                    theta,
                    form,
                    a_basis,
                    min_norm,
                    tol,
                )
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn assemble(
        name: String,
        family: Family,
        basis: Vec<DMatrix<f64>>,
        theta: DMatrix<f64>,
        form: DMatrix<f64>,
        a_basis: Vec<DMatrix<f64>>,
        min_norm_section: bool,
        tol: Tolerances,
    ) -> Result<Self> {
        let d = basis.len();
        if d == 0 {
            return Err(Error::InvalidInput("empty basis".into()));
        }
        let n = basis[0].nrows();
        if basis.iter().chain(a_basis.iter()).any(|b| b.shape() != (n, n)) {
            return Err(Error::InvalidInput("basis matrices must share one square size".into()));
        }
        if theta.shape() != (d, d) || form.shape() != (d, d) {
            return Err(Error::InvalidInput(format!(
                "theta/form must be {d}x{d} to match the basis"
            )));
        }
        if a_basis.is_empty() {
            return Err(Error::InvalidCartanData("a_basis is empty".into()));
        }

        let mut embed0 = DMatrix::zeros(n * n, d);
        for (j, b) in basis.iter().enumerate() {
            embed0.set_column(j, &vec_of(b));
        }
        if linalg::rank(&embed0, 1e-12) != d {
            return Err(Error::InvalidInput("basis matrices are linearly dependent".into()));
        }

        // θ² = id and θ-invariance of the form.
        let id = DMatrix::identity(d, d);
        let scale = theta.norm().max(1.0);
        let inv_resid = (&theta * &theta - &id).norm();
        if inv_resid > tol.alg * scale * scale {
            return Err(Error::InvalidCartanData(format!(
                "theta is not an involution (residual {inv_resid:.3e})"
            )));
        }
        let fscale = form.norm().max(1.0);
        let inv_form = (theta.transpose() * &form * &theta - &form).norm();
        let sym_form = (&form - form.transpose()).norm();
        if inv_form > tol.alg * fscale * scale * scale || sym_form > tol.alg * fscale {
            return Err(Error::InvalidCartanData(
                "form is not symmetric and theta-invariant".into(),
            ));
        }

        // Signature: negative-definite on k, positive-definite on p.
        let k0 = linalg::kernel(&(&theta - &id), 1e-10, 1e-12);
        let p0 = linalg::kernel(&(&theta + &id), 1e-10, 1e-12);
        if k0.ncols() + p0.ncols() != d {
            return Err(Error::InvalidCartanData("theta is not diagonalizable with eigenvalues ±1".into()));
        }
        let definite = |space: &DMatrix<f64>, sign: f64| -> bool {
            if space.ncols() == 0 {
                return true;
            }
            let g = space.transpose() * &form * space * sign;
            let g = (&g + g.transpose()) * 0.5;
            g.symmetric_eigenvalues().iter().all(|&e| e > tol.alg * fscale)
        };
        if !definite(&k0, -1.0) || !definite(&p0, 1.0) {
            return Err(Error::InvalidCartanData(
                "form has the wrong signature on the theta eigenspaces".into(),
            ));
        }

        // Cartan inner product C = −B θ and an orthonormal basis for it.
        let cartan = -(&form * &theta);
        let cartan = (&cartan + cartan.transpose()) * 0.5;
        let chol = cartan
            .clone()
            .cholesky()
            .ok_or_else(|| Error::InvalidCartanData("Cartan inner product not positive".into()))?;
        let l = chol.l();
        let p = l
            .transpose()
            .try_inverse()
            .ok_or_else(|| Error::NumericalBreakdown("Cartan Gram matrix singular".into()))?;
        let p_inv = l.transpose();
        let new_basis: Vec<DMatrix<f64>> = (0..d)
            .map(|i| {
                let mut acc = DMatrix::zeros(n, n);
                for j in 0..d {
                    acc += &basis[j] * p[(j, i)];
                }
                acc
            })
            .collect();
        let theta_new = &p_inv * &theta * &p;
        let form_new = p.transpose() * &form * &p;

        let mut embed = DMatrix::zeros(n * n, d);
        for (j, b) in new_basis.iter().enumerate() {
            embed.set_column(j, &vec_of(b));
        }
        let embed_pinv = embed
            .clone()
            .pseudo_inverse(1e-13)
            .map_err(|e| Error::NumericalBreakdown(e.to_string()))?;

        let traceless = basis.iter().all(|b| b.trace().abs() <= 1e-12 * b.norm().max(1.0));
        let diagonal_a = a_basis.iter().all(|a| {
            let mut off = a.clone();
            off.fill_diagonal(0.0);
            off.norm() <= 1e-14 * a.norm().max(1.0)
        });

        let mut data = ReductiveGroupData {
            name,
            family,
            n,
            dim_g: d,
            algebra_basis: new_basis,
            theta: theta_new,
            form_b: form_new,
            a_basis: a_basis.clone(),
            a_coords: DMatrix::zeros(d, a_basis.len()),
            k_space: DMatrix::zeros(d, 0),
            p_space: DMatrix::zeros(d, 0),
            ad_basis: Vec::new(),
            embed,
            embed_pinv,
            diagonal_a,
            traceless,
            min_norm_section,
            tol,
        };

        // Closure under bracket and the ad matrices.
        let mut ad_basis = vec![DMatrix::zeros(d, d); d];
        for i in 0..d {
            for j in 0..d {
                let b = &data.algebra_basis[i] * &data.algebra_basis[j]
                    - &data.algebra_basis[j] * &data.algebra_basis[i];
                let (c, resid) = data.coords_with_residual(&b);
                if resid > tol.alg * b.norm().max(1.0) * 10.0 {
                    return Err(Error::InvalidCartanData(format!(
                        "basis is not closed under the bracket (residual {resid:.3e})"
                    )));
                }
                ad_basis[i].set_column(j, &c);
            }
        }
        data.ad_basis = ad_basis;

        let tn = data.theta.clone();
        data.k_space = linalg::kernel(&(&tn - &id), 1e-10, 1e-12);
        data.p_space = linalg::kernel(&(&tn + &id), 1e-10, 1e-12);

        // a: inside the algebra, inside p, abelian.
        let r = a_basis.len();
        let mut a_coords = DMatrix::zeros(d, r);
        for (i, a) in a_basis.iter().enumerate() {
            let (c, resid) = data.coords_with_residual(a);
            if resid > tol.alg * a.norm().max(1.0) * 10.0 {
                return Err(Error::InvalidCartanData("a_basis element not in the algebra".into()));
            }
            let theta_resid = (&data.theta * &c + &c).norm();
            if theta_resid > tol.alg * c.norm().max(1.0) * 10.0 {
                return Err(Error::InvalidCartanData(
                    "a_basis element is not in the −1 eigenspace of theta".into(),
                ));
            }
            a_coords.set_column(i, &c);
        }
        if linalg::rank(&a_coords, 1e-10) != r {
            return Err(Error::InvalidCartanData("a_basis is linearly dependent".into()));
        }
        for i in 0..r {
            for j in (i + 1)..r {
                let br = data.bracket(&a_coords.column(i).into(), &a_coords.column(j).into());
                if br.norm() > tol.alg * 10.0 {
                    return Err(Error::InvalidCartanData("a is not abelian".into()));
                }
            }
        }
        data.a_coords = a_coords;
        Ok(data)
    }

    pub fn rank_a(&self) -> usize {
        self.a_basis.len()
    }

    /// Coordinates of a matrix together with the distance of the matrix from
    /// the algebra.
    pub fn coords_with_residual(&self, x: &DMatrix<f64>) -> (DVector<f64>, f64) {
        let v = vec_of(x);
        let c = &self.embed_pinv * &v;
        let resid = (&self.embed * &c - v).norm();
        (c, resid)
    }

    /// Coordinates of an algebra element given as a matrix.
    pub fn coords(&self, x: &DMatrix<f64>) -> DVector<f64> {
        self.coords_with_residual(x).0
    }

    /// Matrix of the algebra element with the given coordinates.
    pub fn matrix(&self, c: &DVector<f64>) -> DMatrix<f64> {
        let v = &self.embed * c;
        DMatrix::from_column_slice(self.n, self.n, v.as_slice())
    }

    /// `ad_X` in coordinates.
    pub fn ad(&self, x: &DVector<f64>) -> DMatrix<f64> {
        let d = self.dim_g;
        let mut out = DMatrix::zeros(d, d);
        for (i, adi) in self.ad_basis.iter().enumerate() {
            if x[i] != 0.0 {
                out += adi * x[i];
            }
        }
        out
    }

    /// Lie bracket in coordinates.
    pub fn bracket(&self, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
        self.ad(x) * y
    }

    /// `Ad_g` as a linear map on coordinates.
    pub fn adjoint(&self, g: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        let g_inv = g
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::NotInGroup("singular matrix".into()))?;
        let d = self.dim_g;
        let mut out = DMatrix::zeros(d, d);
        for (j, e) in self.algebra_basis.iter().enumerate() {
            out.set_column(j, &self.coords(&(g * e * &g_inv)));
        }
        Ok(out)
    }

    /// Exponential of an algebra element given in coordinates.
    pub fn exp(&self, c: &DVector<f64>) -> DMatrix<f64> {
        linalg::expm(&self.matrix(c))
    }

    /// Orthogonality test defining `K` (for raw backends: `Ad_g` preserves the
    /// Cartan inner product).
    pub fn k_membership(&self, g: &DMatrix<f64>, tol: f64) -> bool {
        match self.family {
            Family::SpecialLinear => {
                let n = self.n;
                let resid = (g.transpose() * g - DMatrix::<f64>::identity(n, n)).norm();
                resid <= tol && (g.determinant() - 1.0).abs() <= tol
            }
            Family::Raw => match self.adjoint(g) {
                Ok(ad) => {
                    let d = self.dim_g;
                    (ad.transpose() * &ad - DMatrix::<f64>::identity(d, d)).norm() <= tol
                }
                Err(_) => false,
            },
        }
    }

    /// Validate a group element: finite entries and, for traceless
    /// realizations, unit determinant.
    pub fn check_element(&self, g: &DMatrix<f64>) -> Result<()> {
        if g.shape() != (self.n, self.n) {
            return Err(Error::NotInGroup(format!(
                "expected a {0}x{0} matrix, got {1}x{2}",
                self.n,
                g.nrows(),
                g.ncols()
            )));
        }
        if g.iter().any(|x| !x.is_finite()) {
            return Err(Error::NotInGroup("non-finite entry".into()));
        }
        if self.traceless {
            let det = g.determinant();
            let scale = g.norm().powi(self.n as i32).max(1.0);
            if (det - 1.0).abs() > self.tol.alg * scale.max(1.0) * 1e2 {
                return Err(Error::NotInGroup(format!("determinant {det}")));
            }
        }
        Ok(())
    }

    /// Representatives of `M = Z_K(a)` beyond its identity component. For
    /// `SL(n, R)` these are the diagonal sign matrices of determinant one.
    pub fn m_representatives(&self) -> Vec<DMatrix<f64>> {
        match self.family {
            Family::SpecialLinear => {
                let n = self.n;
                (0u32..(1 << n))
                    .filter(|mask| mask.count_ones() % 2 == 0)
                    .map(|mask| {
                        DMatrix::from_fn(n, n, |i, j| {
                            if i != j {
                                0.0
                            } else if mask & (1 << i) != 0 {
                                -1.0
                            } else {
                                1.0
                            }
                        })
                    })
                    .collect()
            }
            Family::Raw => vec![DMatrix::identity(self.n, self.n)],
        }
    }

    /// Representatives of the Weyl group `N_K(a)/M` (identity first).
    pub fn weyl_representatives(&self) -> Vec<DMatrix<f64>> {
        match self.family {
            Family::SpecialLinear => {
                let n = self.n;
                let mut perms = Vec::new();
                permutations(&mut (0..n).collect::<Vec<_>>(), 0, &mut perms);
                perms
                    .into_iter()
                    .map(|perm| {
                        let mut w = DMatrix::zeros(n, n);
                        for (i, &p) in perm.iter().enumerate() {
                            w[(i, p)] = 1.0;
                        }
                        if w.determinant() < 0.0 {
                            for j in 0..n {
                                w[(0, j)] = -w[(0, j)];
                            }
                        }
                        w
                    })
                    .collect()
            }
            Family::Raw => vec![DMatrix::identity(self.n, self.n)],
        }
    }
}

fn permutations(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == items.len() {
        out.push(items.clone());
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, out);
        items.swap(k, i);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl_names_parse() {
        assert_eq!(GroupSpec::from_name("sl3r").unwrap(), GroupSpec::sl(3));
        assert_eq!(GroupSpec::from_name("SL2R").unwrap(), GroupSpec::sl(2));
        assert!(GroupSpec::from_name("so3").is_err());
    }

    #[test]
    fn json_spec_forms() {
        let s = GroupSpec::from_json(r#"{"family":"sl","n":3}"#).unwrap();
        assert_eq!(s, GroupSpec::sl(3));
        let bad = ReductiveGroupData::build(&GroupSpec::from_json(r#"{"family":"so","n":3}"#).unwrap(), Tolerances::default());
        assert!(matches!(bad, Err(Error::UnsupportedGroup(_))));
        let tiny = ReductiveGroupData::build(&GroupSpec::sl(1), Tolerances::default());
        assert!(matches!(tiny, Err(Error::UnsupportedGroup(_))));
    }

    #[test]
    fn sl3_cartan_data() {
        let g = ReductiveGroupData::build(&GroupSpec::sl(3), Tolerances::default()).unwrap();
        assert_eq!(g.dim_g, 8);
        assert_eq!(g.rank_a(), 2);
        assert_eq!(g.k_space.ncols(), 3);
        assert_eq!(g.p_space.ncols(), 5);
        assert_eq!(g.m_representatives().len(), 4);
        assert_eq!(g.weyl_representatives().len(), 6);
        for w in g.weyl_representatives() {
            assert!(g.k_membership(&w, 1e-12));
        }
    }

    #[test]
    fn raw_theta_not_involutive_is_rejected() {
        // sl(2) in the basis (H, E, F) with a broken theta.
        let raw = RawAlgebra {
            name: None,
            basis: vec![
                vec![vec![1.0, 0.0], vec![0.0, -1.0]],
                vec![vec![0.0, 1.0], vec![0.0, 0.0]],
                vec![vec![0.0, 0.0], vec![1.0, 0.0]],
            ],
            theta_matrix: vec![vec![-1.0, 0.0, 0.0], vec![0.0, 0.0, -2.0], vec![0.0, -1.0, 0.0]],
            form_matrix: vec![vec![2.0, 0.0, 0.0], vec![0.0, 0.0, 1.0], vec![0.0, 1.0, 0.0]],
            a_basis: vec![vec![vec![0.5, 0.0], vec![0.0, -0.5]]],
            center_section: None,
        };
        let err = ReductiveGroupData::build(&GroupSpec::Raw { raw }, Tolerances::default());
        assert!(matches!(err, Err(Error::InvalidCartanData(_))), "{err:?}");
    }

    #[test]
    fn raw_sl2_is_accepted() {
        let raw = RawAlgebra {
            name: Some("sl2-raw".into()),
            basis: vec![
                vec![vec![1.0, 0.0], vec![0.0, -1.0]],
                vec![vec![0.0, 1.0], vec![0.0, 0.0]],
                vec![vec![0.0, 0.0], vec![1.0, 0.0]],
            ],
            theta_matrix: vec![vec![-1.0, 0.0, 0.0], vec![0.0, 0.0, -1.0], vec![0.0, -1.0, 0.0]],
            form_matrix: vec![vec![2.0, 0.0, 0.0], vec![0.0, 0.0, 1.0], vec![0.0, 1.0, 0.0]],
            a_basis: vec![vec![vec![0.5, 0.0], vec![0.0, -0.5]]],
            center_section: None,
        };
        let g = ReductiveGroupData::build(&GroupSpec::Raw { raw }, Tolerances::default()).unwrap();
        assert_eq!(g.dim_g, 3);
        assert_eq!(g.k_space.ncols(), 1);
    }

    #[test]
    fn wrong_signature_is_rejected() {
        let raw = RawAlgebra {
            name: None,
            basis: vec![
                vec![vec![1.0, 0.0], vec![0.0, -1.0]],
                vec![vec![0.0, 1.0], vec![0.0, 0.0]],
                vec![vec![0.0, 0.0], vec![1.0, 0.0]],
            ],
            theta_matrix: vec![vec![-1.0, 0.0, 0.0], vec![0.0, 0.0, -1.0], vec![0.0, -1.0, 0.0]],
            form_matrix: vec![vec![-2.0, 0.0, 0.0], vec![0.0, 0.0, -1.0], vec![0.0, -1.0, 0.0]],
            a_basis: vec![vec![vec![0.5, 0.0], vec![0.0, -0.5]]],
            center_section: None,
        };
        let err = ReductiveGroupData::build(&GroupSpec::Raw { raw }, Tolerances::default());
        assert!(matches!(err, Err(Error::InvalidCartanData(_))));
    }
}
