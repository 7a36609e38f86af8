use std::cmp::Ordering;

use nalgebra::{DMatrix, DVector};

use super::group::ReductiveGroupData;
use crate::error::{Error, Result};
use crate::linalg;
use crate::subspace::Subalgebra;

/// A restricted root together with its root space.
#[derive(Debug, Clone)]
pub struct RootSpace {
    /// Values `γ(a_i)` on the supplied basis of `a`.
    pub values: DVector<f64>,
    /// Orthonormal coordinate basis of `g_γ`.
    pub basis: DMatrix<f64>,
    /// Coefficients `n_{γ,α}` in the simple roots (negated for negative roots).
    pub coefficients: Vec<i64>,
}

impl RootSpace {
    pub fn multiplicity(&self) -> usize {
        self.basis.ncols()
    }

    pub fn height(&self) -> i64 {
        self.coefficients.iter().sum()
    }

    /// `γ(H)` for `H = Σ x_i a_i`.
    pub fn eval(&self, log_a: &DVector<f64>) -> f64 {
        self.values.dot(log_a)
    }
}

/// Restricted root system of `(g, a)` with a lexicographic positivity order.
#[derive(Debug, Clone)]
pub struct RestrictedRootDatum {
    /// Positive roots: the simple roots first (in order), then by height.
    pub positive: Vec<RootSpace>,
    /// `negative[i]` is `−positive[i]` with basis `θ(positive[i].basis)`.
    pub negative: Vec<RootSpace>,
    /// Number of simple roots.
    pub n_simple: usize,
    /// Orthonormal basis of `m = z_k(a)`.
    pub m_basis: DMatrix<f64>,
    /// Gram matrix of the invariant form on the basis of `a`.
    pub a_gram: DMatrix<f64>,
}

fn lex_cmp(a: &DVector<f64>, b: &DVector<f64>, tol: f64) -> Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        if (x - y).abs() > tol {
            return x.partial_cmp(y).unwrap_or(Ordering::Equal);
        }
    }
    Ordering::Equal
}

fn is_lex_positive(v: &DVector<f64>, tol: f64) -> bool {
    v.iter().find(|x| x.abs() > tol).is_some_and(|&x| x > 0.0)
}

/// Make the largest-magnitude entry of each column positive.
fn normalize_signs(basis: &mut DMatrix<f64>) {
    for mut col in basis.column_iter_mut() {
        let (mut best, mut val) = (0.0, 0.0);
        for &x in col.iter() {
            if x.abs() > best + 1e-12 {
                best = x.abs();
                val = x;
            }
        }
        if val < 0.0 {
            col.neg_mut();
        }
    }
}

impl RestrictedRootDatum {
    /// Simultaneous eigenspace decomposition of `ad(a)`.
    pub fn compute(g: &ReductiveGroupData) -> Result<Self> {
        let d = g.dim_g;
        let r = g.rank_a();
        let tol = g.tol;
        let ads: Vec<DMatrix<f64>> = (0..r)
            .map(|i| g.ad(&g.a_coords.column(i).into_owned()))
            .collect();

        let mut blocks = vec![DMatrix::<f64>::identity(d, d)];
        for ad in &ads {
            let scale = ad.norm().max(1e-300);
            let mut next = Vec::new();
            for b in &blocks {
                let s = b.transpose() * ad * b;
                let invariance = (ad * b - b * &s).norm();
                let asym = (&s - s.transpose()).norm();
                if invariance > tol.cluster * scale || asym > tol.cluster * scale {
                    return Err(Error::NonSemisimpleAction(format!(
                        "invariance residual {invariance:.3e}, asymmetry {asym:.3e}"
                    )));
                }
                let eig = ((&s + s.transpose()) * 0.5).symmetric_eigen();
                let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
                order.sort_by(|&i, &j| {
                    eig.eigenvalues[i]
                        .partial_cmp(&eig.eigenvalues[j])
                        .unwrap_or(Ordering::Equal)
                });
                let spread = eig.eigenvalues.amax().max(1.0);
                let mut cluster: Vec<usize> = Vec::new();
                let mut flush = |cluster: &mut Vec<usize>| {
                    let mut v = DMatrix::zeros(b.ncols(), cluster.len());
                    for (c, &i) in cluster.iter().enumerate() {
                        v.set_column(c, &eig.eigenvectors.column(i));
                    }
                    next.push(b * v);
                    cluster.clear();
                };
                for (pos, &i) in order.iter().enumerate() {
                    if pos > 0 {
                        let prev = eig.eigenvalues[order[pos - 1]];
                        if eig.eigenvalues[i] - prev > tol.cluster * spread {
                            flush(&mut cluster);
                        }
                    }
                    cluster.push(i);
                }
                if !cluster.is_empty() {
                    flush(&mut cluster);
                }
            }
            blocks = next;
        }

        // Joint eigenvalues and residual check of the grading.
        let mut zero_block: Option<DMatrix<f64>> = None;
        let mut weighted: Vec<(DVector<f64>, DMatrix<f64>)> = Vec::new();
        let value_scale = ads.iter().map(|a| a.norm()).fold(1.0, f64::max);
        for b in blocks {
            let k = b.ncols() as f64;
            let values = DVector::from_iterator(r, ads.iter().map(|ad| (b.transpose() * ad * &b).trace() / k));
            for (ad, &v) in ads.iter().zip(values.iter()) {
                let resid = (ad * &b - &b * v).norm();
                if resid > tol.cluster * value_scale {
                    return Err(Error::NonSemisimpleAction(format!(
                        "eigenspace residual {resid:.3e}"
                    )));
                }
            }
            if values.amax() <= tol.cluster * value_scale {
                zero_block = Some(b);
            } else {
                weighted.push((values, b));
            }
        }
        let zero = zero_block.ok_or_else(|| Error::InvalidCartanData("no zero weight space".into()))?;

        // g_0 = m ⊕ a with a maximal abelian in p.
        let zt = zero.transpose() * &g.theta * &zero;
        let zeig = ((&zt + zt.transpose()) * 0.5).symmetric_eigen();
        let mut m_cols = Vec::new();
        let mut p_count = 0;
        for (i, &ev) in zeig.eigenvalues.iter().enumerate() {
            if ev > 0.0 {
                m_cols.push(&zero * zeig.eigenvectors.column(i));
            } else {
                p_count += 1;
            }
        }
        if p_count != r {
            return Err(Error::InvalidCartanData(format!(
                "a is not maximal abelian in p (centralizer meets p in dimension {p_count}, rank {r})"
            )));
        }
        let mut m_basis = DMatrix::zeros(d, m_cols.len());
        for (j, c) in m_cols.iter().enumerate() {
            m_basis.set_column(j, c);
        }

        let vtol = tol.cluster * value_scale;
        let mut pos: Vec<(DVector<f64>, DMatrix<f64>)> = Vec::new();
        let mut neg: Vec<(DVector<f64>, DMatrix<f64>)> = Vec::new();
        for (v, b) in weighted {
            if is_lex_positive(&v, vtol) {
                pos.push((v, b));
            } else {
                neg.push((v, b));
            }
        }
        if pos.len() != neg.len() {
            return Err(Error::InvalidCartanData("roots do not come in ± pairs".into()));
        }

        // Simple roots: positive roots that are not sums of two positive roots.
        let is_sum = |v: &DVector<f64>| {
            pos.iter().any(|(x, _)| {
                pos.iter().any(|(y, _)| (x + y - v).amax() <= vtol)
            })
        };
        let mut simple: Vec<DVector<f64>> = pos
            .iter()
            .filter(|(v, _)| !is_sum(v))
            .map(|(v, _)| v.clone())
            .collect();
        simple.sort_by(|a, b| lex_cmp(b, a, vtol));
        let p = simple.len();
        let mut smat = DMatrix::zeros(r, p);
        for (j, s) in simple.iter().enumerate() {
            smat.set_column(j, s);
        }
        if linalg::rank(&smat, 1e-10) != p {
            return Err(Error::InvalidCartanData("simple roots are linearly dependent".into()));
        }
        let pinv = smat
            .clone()
            .pseudo_inverse(1e-12)
            .map_err(|e| Error::NumericalBreakdown(e.to_string()))?;

        let mut positive = Vec::with_capacity(pos.len());
        for (v, mut b) in pos {
            let c = &pinv * &v;
            let resid = (&smat * &c - &v).norm();
            if resid > tol.int * v.norm().max(1.0) {
                return Err(Error::InvalidCartanData("root outside the span of the simple roots".into()));
            }
            let mut coefficients = Vec::with_capacity(p);
            for &x in c.iter() {
                let rounded = x.round();
                if (x - rounded).abs() > tol.int || rounded < 0.0 {
                    return Err(Error::InvalidCartanData(format!(
                        "root coefficient {x} is not a nonnegative integer"
                    )));
                }
                coefficients.push(rounded as i64);
            }
            normalize_signs(&mut b);
            positive.push(RootSpace {
                values: v,
                basis: b,
                coefficients,
            });
        }
        positive.sort_by(|a, b| {
            a.height()
                .cmp(&b.height())
                .then_with(|| lex_cmp(&b.values, &a.values, vtol))
        });

        let mut negative = Vec::with_capacity(positive.len());
        for root in &positive {
            let nv = -&root.values;
            let (_, found) = neg
                .iter()
                .find(|(v, _)| (v - &nv).amax() <= vtol)
                .ok_or_else(|| Error::InvalidCartanData("negative root missing".into()))?;
            let image = &g.theta * &root.basis;
            let dist = linalg::max_principal_sine(found, &image);
            if found.ncols() != image.ncols() || dist > tol.cluster.sqrt() {
                return Err(Error::InvalidCartanData("theta does not swap ±γ root spaces".into()));
            }
            negative.push(RootSpace {
                values: nv,
                basis: image,
                coefficients: root.coefficients.iter().map(|c| -c).collect(),
            });
        }

        let a_gram = g.a_coords.transpose() * &g.form_b * &g.a_coords;
        Ok(RestrictedRootDatum {
            positive,
            negative,
            n_simple: p,
            m_basis,
            a_gram,
        })
    }

    pub fn simple(&self, k: usize) -> Result<&RootSpace> {
        if k < self.n_simple {
            Ok(&self.positive[k])
        } else {
            Err(Error::UnknownRoot(k))
        }
    }

    /// Matrix whose columns are the simple roots' values on the `a` basis.
    pub fn simple_matrix(&self) -> DMatrix<f64> {
        let r = self.a_gram.nrows();
        let mut m = DMatrix::zeros(r, self.n_simple);
        for k in 0..self.n_simple {
            m.set_column(k, &self.positive[k].values);
        }
        m
    }

    /// Invariant inner product on `a*` dual to the form on `a`.
    pub fn inner(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        let inv = self
            .a_gram
            .clone()
            .try_inverse()
            .expect("the form is definite on a");
        (x.transpose() * inv * y)[(0, 0)]
    }

    /// Cartan matrix `2⟨α_i, α_j⟩ / ⟨α_j, α_j⟩`.
    pub fn cartan_matrix(&self) -> DMatrix<f64> {
        let p = self.n_simple;
        DMatrix::from_fn(p, p, |i, j| {
            let ai = &self.positive[i].values;
            let aj = &self.positive[j].values;
            2.0 * self.inner(ai, aj) / self.inner(aj, aj)
        })
    }

    /// `n = ⊕ g_γ` over positive roots.
    pub fn n_space(&self) -> Subalgebra {
        stack(self.m_basis.nrows(), self.positive.iter())
    }

    /// `n̄ = θ n`.
    pub fn nbar_space(&self) -> Subalgebra {
        stack(self.m_basis.nrows(), self.negative.iter())
    }

    /// Root spaces in a fixed order: positive, then negative.
    pub fn all_roots(&self) -> impl Iterator<Item = &RootSpace> {
        self.positive.iter().chain(self.negative.iter())
    }

    /// Index of the positive root with the given value vector.
    pub fn find_positive(&self, values: &DVector<f64>, tol: f64) -> Option<usize> {
        self.positive
            .iter()
            .position(|r| (&r.values - values).amax() <= tol)
    }

    /// Value vector of a root or of zero, if `values` is a root or zero.
    pub fn is_weight(&self, values: &DVector<f64>, tol: f64) -> bool {
        values.amax() <= tol
            || self
                .all_roots()
                .any(|r| (&r.values - values).amax() <= tol)
    }
}

pub(crate) fn stack<'a>(d: usize, roots: impl Iterator<Item = &'a RootSpace>) -> Subalgebra {
    let cols: Vec<&DMatrix<f64>> = roots.map(|r| &r.basis).collect();
    let total = cols.iter().map(|b| b.ncols()).sum();
    let mut m = DMatrix::zeros(d, total);
    let mut at = 0;
    for b in cols {
        m.columns_mut(at, b.ncols()).copy_from(b);
        at += b.ncols();
    }
    Subalgebra::from_orthonormal(m)
}
