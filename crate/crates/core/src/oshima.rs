//! Points `[[g, t]]` of the Oshima space, chart coordinates on the big cell
//! `N × R^Σ` and its Weyl translates, orbit classes, and the `SL(2,R)` model
//! on the Riemann sphere.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::degeneration::{a_action_log, nah_factorize, DeformationParameter, SignVector};
use crate::error::{Error, Result};
use crate::lie::{FactorMode, Group};

/// The class `[[g, t]]`. Two representatives define the same point when
/// `g' = g·h·a` and `t' = a⁻¹·t` with `h ∈ H_t`, `a ∈ A`.
#[derive(Debug, Clone, PartialEq)]
pub struct OshimaPoint {
    pub g: DMatrix<f64>,
    pub t: DeformationParameter,
}

/// Coordinates `(n, t')` in the chart `w·U`, meaning `[[g, t]] = [[w·n, t']]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartCoords {
    pub n: DMatrix<f64>,
    pub t: DeformationParameter,
    /// Index into [`atlas`].
    pub chart: usize,
}

impl OshimaPoint {
    pub fn new(g: DMatrix<f64>, t: DeformationParameter) -> Self {
        OshimaPoint { g, t }
    }

    /// `[[e, t]]`.
    pub fn base(group: &Group, t: DeformationParameter) -> Self {
        OshimaPoint::new(DMatrix::identity(group.n, group.n), t)
    }

    /// Left action `γ·[[g, t]] = [[γg, t]]`.
    pub fn act(&self, gamma: &DMatrix<f64>) -> Self {
        OshimaPoint::new(gamma * &self.g, self.t.clone())
    }
}

/// Translates `w` whose charts `w·U` are tried, identity first.
pub fn atlas(group: &Group) -> Vec<DMatrix<f64>> {
    group.weyl_representatives()
}

fn in_chart(group: &Group, p: &OshimaPoint, w: &DMatrix<f64>, index: usize) -> Result<ChartCoords> {
    // Weyl representatives are orthogonal.
    let g = w.transpose() * &p.g;
    let f = match nah_factorize(group, &g, &p.t) {
        Ok(f) => f,
        Err(Error::NotInCell) => return Err(Error::NotInChart),
        Err(e) => return Err(e),
    };
    Ok(ChartCoords {
        n: f.n,
        t: a_action_log(group, &f.log_a, &p.t),
        chart: index,
    })
}

/// Coordinates of `p` in the big cell: `g = n·a·h` gives `[[g, t]] = [[n, a·t]]`.
pub fn canonicalize(group: &Group, p: &OshimaPoint) -> Result<ChartCoords> {
    let e = DMatrix::identity(group.n, group.n);
    in_chart(group, p, &e, 0)
}

/// Coordinates of `p` in the chart with the given atlas index.
pub fn canonicalize_in(group: &Group, p: &OshimaPoint, chart: usize) -> Result<ChartCoords> {
    let charts = atlas(group);
    let w = charts.get(chart).ok_or(Error::NotInChart)?;
    in_chart(group, p, w, chart)
}

/// Scale-relative distance between chart coordinates.
fn coords_distance(x: &ChartCoords, y: &ChartCoords) -> f64 {
    let dn = (&x.n - &y.n).norm() / x.n.norm().max(y.n.norm()).max(1.0);
    let dt = x
        .t
        .0
        .iter()
        .zip(y.t.0.iter())
        .map(|(a, b)| (a - b).abs() / a.abs().max(b.abs()).max(1.0))
        .fold(0.0, f64::max);
    dn.max(dt)
}

/// Distance between two points measured in a common chart, choosing the
/// chart where both `N`-coordinates are smallest. Points in different orbits,
/// or separated by a chart, are at infinite distance.
pub fn point_distance(group: &Group, p: &OshimaPoint, q: &OshimaPoint) -> Result<f64> {
    if p.t.len() != q.t.len() {
        return Err(Error::DimensionMismatch(p.t.len(), q.t.len()));
    }
    if p.t.sign() != q.t.sign() {
        // Different orbits.
        return Ok(f64::INFINITY);
    }
    let mut best: Option<(f64, f64)> = None;
    let mut separated = false;
    for (i, w) in atlas(group).iter().enumerate() {
        let (cp, cq) = match (in_chart(group, p, w, i), in_chart(group, q, w, i)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(Error::NotInChart), Err(Error::NotInChart)) => continue,
            // A chart containing exactly one of the points separates them.
            (Ok(_), Err(Error::NotInChart)) | (Err(Error::NotInChart), Ok(_)) => {
                separated = true;
                continue;
            }
            (Err(e), _) | (_, Err(e)) => return Err(e),
        };
        let size = cp.n.amax().max(cq.n.amax());
        if best.is_none_or(|(s, _)| size < s) {
            best = Some((size, coords_distance(&cp, &cq)));
        }
        if size <= 1.0 + 1e-12 {
            break;
        }
    }
    match best {
        Some((_, d)) => Ok(d),
        None if separated => Ok(f64::INFINITY),
        None => Err(Error::NotInChart),
    }
}

/// Whether two representatives define the same point, within `tol.fact`.
pub fn points_equal(group: &Group, p: &OshimaPoint, q: &OshimaPoint) -> Result<bool> {
    Ok(point_distance(group, p, q)? <= group.tol.fact)
}

/// The `G`-orbit of `p`, determined by the signs of `t`.
pub fn orbit_class(p: &OshimaPoint) -> SignVector {
    p.t.sign()
}

/// Whether `p` lies in the closure of the positive part, i.e. the copy of
/// the Satake compactification.
pub fn satake_member(p: &OshimaPoint) -> bool {
    p.t.0.iter().all(|&x| x >= 0.0)
}

/// The parameter `t_I` with `t_α = 1` on `I` and `0` elsewhere.
pub fn orbit_representative(group: &Group, subset: &[usize]) -> Result<DeformationParameter> {
    let subset = crate::parabolic::normalize_subset(group, subset)?;
    Ok(DeformationParameter(
        (0..group.n_simple())
            .map(|k| if subset.contains(&k) { 1.0 } else { 0.0 })
            .collect(),
    ))
}

/// `[[g, t]] ↦ [[g, s·t]]` for `s ∈ {±1}^Σ`.
pub fn z2_flip(s: &SignVector, p: &OshimaPoint) -> Result<OshimaPoint> {
    if s.0.len() != p.t.len() {
        return Err(Error::DimensionMismatch(s.0.len(), p.t.len()));
    }
    if s.0.iter().any(|&x| x != 1 && x != -1) {
        return Err(Error::InvalidInput("flip entries must be ±1".into()));
    }
    let t = p.t.0.iter().zip(s.0.iter()).map(|(x, &e)| x * e as f64).collect();
    Ok(OshimaPoint::new(p.g.clone(), DeformationParameter(t)))
}

/// A point of `C ∪ {∞}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedComplex {
    Finite(Complex64),
    Infinity,
}

impl ExtendedComplex {
    /// Distance in the chordal metric, up to the constant factor 2.
    pub fn chordal_distance(&self, other: &ExtendedComplex) -> f64 {
        use ExtendedComplex::*;
        match (self, other) {
            (Infinity, Infinity) => 0.0,
            (Finite(z), Infinity) | (Infinity, Finite(z)) => 1.0 / (1.0 + z.norm_sqr()).sqrt(),
            (Finite(z), Finite(w)) => {
                (z - w).norm() / ((1.0 + z.norm_sqr()).sqrt() * (1.0 + w.norm_sqr()).sqrt())
            }
        }
    }
}

/// Möbius action of a real `2×2` matrix.
pub fn mobius(g: &DMatrix<f64>, z: ExtendedComplex) -> ExtendedComplex {
    let (a, b, c, d) = (g[(0, 0)], g[(0, 1)], g[(1, 0)], g[(1, 1)]);
    match z {
        ExtendedComplex::Infinity => {
            if c == 0.0 {
                ExtendedComplex::Infinity
            } else {
                ExtendedComplex::Finite(Complex64::new(a / c, 0.0))
            }
        }
        ExtendedComplex::Finite(z) => {
            let den = z * c + d;
            if den.norm() == 0.0 {
                ExtendedComplex::Infinity
            } else {
                ExtendedComplex::Finite((z * a + b) / den)
            }
        }
    }
}

/// `[[g, t]] ↦ g·(it)` for `SL(2, R)`.
pub fn sl2_sphere(group: &Group, p: &OshimaPoint) -> Result<ExtendedComplex> {
    if group.n != 2 || group.n_simple() != 1 || group.family != crate::lie::Family::SpecialLinear {
        return Err(Error::WrongGroup(group.name.clone()));
    }
    if p.t.len() != 1 {
        return Err(Error::DimensionMismatch(p.t.len(), 1));
    }
    let z = ExtendedComplex::Finite(Complex64::new(0.0, p.t.0[0]));
    Ok(mobius(&p.g, z))
}

/// Rewrite a point of a dense orbit as `[[k, t']]` with `k ∈ K` and
/// `|t'_α| ≤ 1`, and return it with the residual of the identification.
pub fn compactness_witness(group: &Group, p: &OshimaPoint) -> Result<(OshimaPoint, f64)> {
    if !p.t.is_nondegenerate() {
        return Err(Error::InvalidInput("witness needs a point of a dense orbit".into()));
    }
    // [[g, t]] = [[g·a_s, sign t]] where a_s^α = |t_α|.
    let log_s = group.a_section(&p.t.0)?;
    let x = &p.g * group.a_from_log(&log_s);
    let sign = p.t.sign().as_parameter();
    // x = k₁·a·k₂ with k₂ ∈ K = H_{sign t}, so [[x, s]] = [[k₁, a·s]].
    let (k1, a, _k2) = group.factorize(&x, FactorMode::Kak)?;
    let log_a = group.log_a(&a)?;
    let q = OshimaPoint::new(k1, a_action_log(group, &log_a, &sign));
    let resid = point_distance(group, p, &q)?;
    Ok((q, resid))
}

/// `max_α |t_α|`, used to check the image of [`compactness_witness`].
pub fn max_abs_t(p: &OshimaPoint) -> f64 {
    p.t.0.iter().fold(0.0, |m, x| m.max(x.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degeneration::SampledSubgroup;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn m2(a: f64, b: f64, c: f64, d: f64) -> DMatrix<f64> {
        DMatrix::from_row_slice(2, 2, &[a, b, c, d])
    }

    fn tp(v: &[f64]) -> DeformationParameter {
        DeformationParameter(v.to_vec())
    }

    #[test]
    fn canonical_examples() {
        let g = Group::sl(2).unwrap();
        let n0 = m2(1.0, 0.7, 0.0, 1.0);
        let c = canonicalize(&g, &OshimaPoint::new(n0.clone(), tp(&[0.3]))).unwrap();
        assert_abs_diff_eq!((c.n - n0).norm(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(c.t.0[0], 0.3, epsilon = 1e-12);

        let c = canonicalize(&g, &OshimaPoint::new(m2(2.0, 0.0, 0.0, 0.5), tp(&[1.0]))).unwrap();
        assert_abs_diff_eq!((c.n - DMatrix::identity(2, 2)).norm(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(c.t.0[0], 4.0, epsilon = 1e-12);

        let (s, co) = 0.4f64.sin_cos();
        let c = canonicalize(&g, &OshimaPoint::new(m2(co, -s, s, co), tp(&[1.0]))).unwrap();
        assert_abs_diff_eq!((c.n - DMatrix::identity(2, 2)).norm(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(c.t.0[0], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn weyl_element_needs_another_chart() {
        let g = Group::sl(2).unwrap();
        let w = m2(0.0, -1.0, 1.0, 0.0);
        let p = OshimaPoint::new(w, tp(&[0.0]));
        assert_eq!(canonicalize(&g, &p), Err(Error::NotInChart));
        assert!(points_equal(&g, &p, &p).unwrap());
        let q = OshimaPoint::base(&g, tp(&[0.0]));
        assert!(!points_equal(&g, &p, &q).unwrap());
    }

    #[test]
    fn orbit_and_satake_examples() {
        let g = Group::sl(3).unwrap();
        let e = OshimaPoint::base(&g, tp(&[0.5, 0.0]));
        assert_eq!(orbit_class(&e), SignVector(vec![1, 0]));
        assert!(satake_member(&OshimaPoint::base(&g, tp(&[1.0, 1.0]))));
        assert!(!satake_member(&OshimaPoint::base(&g, tp(&[1.0, -1.0]))));
        assert!(satake_member(&OshimaPoint::base(&g, tp(&[0.0, 1.0]))));
        assert_eq!(SignVector::all(2).len(), 9);
        assert_eq!(orbit_representative(&g, &[1]).unwrap(), tp(&[0.0, 1.0]));
    }

    #[test]
    fn flips() {
        let g = Group::sl(3).unwrap();
        let p = OshimaPoint::base(&g, tp(&[0.5, -2.0]));
        assert_eq!(z2_flip(&SignVector(vec![1, 1]), &p).unwrap(), p);
        let s = SignVector(vec![-1, 1]);
        let q = z2_flip(&s, &p).unwrap();
        assert_eq!(q.t, tp(&[-0.5, -2.0]));
        assert_eq!(z2_flip(&s, &q).unwrap(), p);
        assert!(z2_flip(&SignVector(vec![0, 1]), &p).is_err());
    }

    #[test]
    fn sphere_examples() {
        let g = Group::sl(2).unwrap();
        let i = ExtendedComplex::Finite(Complex64::new(0.0, 1.0));
        assert_eq!(sl2_sphere(&g, &OshimaPoint::base(&g, tp(&[1.0]))).unwrap(), i);
        let zero = sl2_sphere(&g, &OshimaPoint::base(&g, tp(&[0.0]))).unwrap();
        assert_eq!(zero, ExtendedComplex::Finite(Complex64::new(0.0, 0.0)));
        let p = OshimaPoint::new(m2(1.0, 2.5, 0.0, 1.0), tp(&[0.0]));
        assert_eq!(sl2_sphere(&g, &p).unwrap(), ExtendedComplex::Finite(Complex64::new(2.5, 0.0)));
        let w = OshimaPoint::new(m2(0.0, -1.0, 1.0, 0.0), tp(&[0.0]));
        assert_eq!(sl2_sphere(&g, &w).unwrap(), ExtendedComplex::Infinity);
        // The flip exchanges the half-planes.
        let up = OshimaPoint::new(m2(1.0, 0.3, 0.0, 1.0), tp(&[0.5]));
        let down = z2_flip(&SignVector(vec![-1]), &up).unwrap();
        match (sl2_sphere(&g, &up).unwrap(), sl2_sphere(&g, &down).unwrap()) {
            (ExtendedComplex::Finite(a), ExtendedComplex::Finite(b)) => {
                assert!(a.im > 0.0 && b.im < 0.0)
            }
            _ => panic!("finite values expected"),
        }
        let g3 = Group::sl(3).unwrap();
        assert!(matches!(
            sl2_sphere(&g3, &OshimaPoint::base(&g3, tp(&[1.0, 1.0]))),
            Err(Error::WrongGroup(_))
        ));
    }

    #[test]
    fn stabilizer_of_orbit_representative() {
        // A·H_∅ fixes [[e, 0]] in sl2; an N-element moves it.
        let g = Group::sl(2).unwrap();
        let base = OshimaPoint::base(&g, tp(&[0.0]));
        for x in [m2(2.0, 0.0, 0.0, 0.5), m2(1.0, 0.0, 3.0, 1.0), m2(-1.0, 0.0, -0.5, -1.0)] {
            assert!(points_equal(&g, &base.act(&x), &base).unwrap());
        }
        assert!(!points_equal(&g, &base.act(&m2(1.0, 0.2, 0.0, 1.0)), &base).unwrap());
    }

    #[test]
    fn compactness_examples() {
        let g = Group::sl(3).unwrap();
        let x = DMatrix::<f64>::from_row_slice(3, 3, &[2.0, 1.0, 0.0, 0.5, 1.0, 0.3, -1.0, 0.0, 1.0]);
        let x = &x / x.determinant().cbrt();
        let p = OshimaPoint::new(x, tp(&[3.0, -0.2]));
        let (q, resid) = compactness_witness(&g, &p).unwrap();
        assert!(resid <= 1e-8, "{resid}");
        assert!(g.k_membership(&q.g, 1e-10));
        assert!(max_abs_t(&q) <= 1.0 + 1e-12);
        assert_eq!(q.t.sign(), p.t.sign());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn chart_equality_sound(
            nu in -2.0f64..2.0, log_t in -2.0f64..2.0, neg in any::<bool>(),
            c in -1.0f64..1.0, log_b in -1.0f64..1.0,
        ) {
            // [[n·h·b, b⁻¹·t]] canonicalizes to (n, t).
            let g = Group::sl(2).unwrap();
            let t = log_t.exp() * if neg { -1.0 } else { 1.0 };
            let n = m2(1.0, nu, 0.0, 1.0);
            let h = &SampledSubgroup::h_t(&g, &tp(&[t])).unwrap().generators[0] * c;
            let h = crate::linalg::expm(&h);
            let b = m2(log_b.exp(), 0.0, 0.0, (-log_b).exp());
            let t2 = t / (2.0 * log_b).exp();
            let c2 = canonicalize(&g, &OshimaPoint::new(&n * h * b, tp(&[t2]))).unwrap();
            prop_assert!((c2.n - n).norm() <= 1e-8);
            prop_assert!((c2.t.0[0] - t).abs() <= 1e-8 * t.abs().max(1.0));
        }
    }
}
