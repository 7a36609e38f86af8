//! The Oshima groupoid `(G ⋉ M) / H_M`: arrows `[[γ, g₁, t]]` stored as a
//! representative `γ` over a base point, the chart groupoid
//! `W = {((n₂,t₂), a, (n₁,t₁)) : t₂ = a·t₁}` and its isomorphism onto the
//! restriction to the big cell, and the reduction of a single orbit to
//! `G/H_I ×_{A_I} G/H_I`.

use nalgebra::DMatrix;

use crate::degeneration::{
    a_action, h_t_basis, membership_residual, nah_factorize, DeformationParameter,
};
use crate::error::{Error, Result};
use crate::lie::Group;
use crate::oshima::{canonicalize, orbit_representative, point_distance, OshimaPoint};
use crate::subspace::Subalgebra;

/// An arrow from `base` to `γ·base`, defined up to `γ ↦ γ·h` with `h` in
/// the isotropy subgroup `H_base`.
#[derive(Debug, Clone, PartialEq)]
pub struct Arrow {
    pub gamma: DMatrix<f64>,
    pub base: OshimaPoint,
}

impl Arrow {
    pub fn new(gamma: DMatrix<f64>, base: OshimaPoint) -> Self {
        Arrow { gamma, base }
    }

    pub fn unit(p: &OshimaPoint) -> Self {
        let n = p.g.nrows();
        Arrow::new(DMatrix::identity(n, n), p.clone())
    }

    pub fn source(&self) -> OshimaPoint {
        self.base.clone()
    }

    pub fn target(&self) -> OshimaPoint {
        self.base.act(&self.gamma)
    }
}

/// `A₂ ∘ A₁`, defined when `source(A₂) = target(A₁)`.
pub fn compose(group: &Group, a2: &Arrow, a1: &Arrow) -> Result<Arrow> {
    let d = point_distance(group, &a2.base, &a1.target())?;
    if !(d <= group.tol.fact) {
        return Err(Error::NotComposable(d));
    }
    Ok(Arrow::new(&a2.gamma * &a1.gamma, a1.base.clone()))
}

pub fn inverse(a: &Arrow) -> Result<Arrow> {
    let inv = a
        .gamma
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::NotInGroup("singular representative".into()))?;
    Ok(Arrow::new(inv, a.target()))
}

/// `(residual, tolerance)` for `γ_B⁻¹ γ_A ∈ H_base`, or `None` when the bases
/// differ.
pub fn arrow_eq_residual(group: &Group, a: &Arrow, b: &Arrow) -> Result<Option<(f64, f64)>> {
    if point_distance(group, &a.base, &b.base)? > group.tol.fact {
        return Ok(None);
    }
    let gb_inv = b
        .gamma
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::NotInGroup("singular representative".into()))?;
    let x = gb_inv * &a.gamma;
    // H_[[g,t]] = g H_t g⁻¹. The bases agree, so A's representative serves.
    membership_residual(group, &x, &a.base.t, &a.base.g).map(Some)
}

/// Equality of arrows: equal bases and representatives differing by an
/// element of the isotropy subgroup.
pub fn arrow_eq(group: &Group, a: &Arrow, b: &Arrow) -> Result<bool> {
    Ok(match arrow_eq_residual(group, a, b)? {
        Some((resid, tol)) => resid <= tol,
        None => false,
    })
}

/// The isotropy Lie algebra `Ad_g h_t` at `[[g, t]]`.
pub fn isotropy_algebra(group: &Group, p: &OshimaPoint) -> Result<Subalgebra> {
    let h = h_t_basis(group, &p.t)?;
    Ok(h.image(&group.adjoint(&p.g)?, group.tol.rank))
}

/// An arrow of the chart groupoid `W`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartArrow {
    pub n2: DMatrix<f64>,
    pub t2: DeformationParameter,
    pub a: DMatrix<f64>,
    pub n1: DMatrix<f64>,
    pub t1: DeformationParameter,
}

impl ChartArrow {
    /// Build `((n₂, a·t₁), a, (n₁, t₁))`.
    pub fn new(group: &Group, n2: DMatrix<f64>, a: DMatrix<f64>, n1: DMatrix<f64>, t1: DeformationParameter) -> Result<Self> {
        let t2 = a_action(group, &a, &t1)?;
        Ok(ChartArrow { n2, t2, a, n1, t1 })
    }

    pub fn unit(n: DMatrix<f64>, t: DeformationParameter) -> Self {
        let size = n.nrows();
        ChartArrow {
            n2: n.clone(),
            t2: t.clone(),
            a: DMatrix::identity(size, size),
            n1: n,
            t1: t,
        }
    }

    /// `max_α |t₂ − a·t₁|`, relative to the size of `t₂`.
    pub fn residual(&self, group: &Group) -> Result<f64> {
        let at = a_action(group, &self.a, &self.t1)?;
        Ok(at
            .0
            .iter()
            .zip(self.t2.0.iter())
            .map(|(x, y)| (x - y).abs() / y.abs().max(1.0))
            .fold(0.0, f64::max))
    }

    /// Largest entrywise difference, with `t` measured relatively.
    pub fn distance(&self, other: &ChartArrow) -> f64 {
        let rel = |x: &DeformationParameter, y: &DeformationParameter| {
            x.0.iter()
                .zip(y.0.iter())
                .map(|(a, b)| (a - b).abs() / a.abs().max(b.abs()).max(1.0))
                .fold(0.0, f64::max)
        };
        [
            (&self.n2 - &other.n2).amax(),
            (&self.n1 - &other.n1).amax(),
            (&self.a - &other.a).amax() / self.a.amax().max(1.0),
            rel(&self.t1, &other.t1),
            rel(&self.t2, &other.t2),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Composition in `W`: `((n₃,t₃),a₂,(n₂,t₂)) ∘ ((n₂,t₂),a₁,(n₁,t₁)) = ((n₃,t₃),a₂a₁,(n₁,t₁))`.
pub fn chart_compose(group: &Group, w2: &ChartArrow, w1: &ChartArrow) -> Result<ChartArrow> {
    let dn = (&w2.n1 - &w1.n2).amax();
    let dt = w2
        .t1
        .0
        .iter()
        .zip(w1.t2.0.iter())
        .map(|(x, y)| (x - y).abs() / x.abs().max(1.0))
        .fold(0.0, f64::max);
    let d = dn.max(dt);
    if !(d <= group.tol.fact) {
        return Err(Error::NotComposable(d));
    }
    Ok(ChartArrow {
        n2: w2.n2.clone(),
        t2: w2.t2.clone(),
        a: &w2.a * &w1.a,
        n1: w1.n1.clone(),
        t1: w1.t1.clone(),
    })
}

/// `((n₂,t₂), a, (n₁,t₁)) ↦ [[n₂ a n₁⁻¹, n₁, t₁]]`.
pub fn chart_iso(group: &Group, w: &ChartArrow) -> Result<Arrow> {
    if w.residual(group)? > group.tol.fact {
        return Err(Error::InvalidInput("chart arrow violates t₂ = a·t₁".into()));
    }
    let n1_inv = w
        .n1
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::NotInGroup("singular n₁".into()))?;
    Ok(Arrow::new(&w.n2 * &w.a * n1_inv, OshimaPoint::new(w.n1.clone(), w.t1.clone())))
}

/// Inverse of [`chart_iso`] on arrows whose endpoints lie in the big cell.
pub fn chart_iso_inv(group: &Group, arrow: &Arrow) -> Result<ChartArrow> {
    let g1 = &arrow.base.g;
    let t = &arrow.base.t;
    let f1 = nah_factorize(group, g1, t).map_err(not_in_chart)?;
    let f2 = nah_factorize(group, &(&arrow.gamma * g1), t).map_err(not_in_chart)?;
    let c1 = canonicalize(group, &arrow.base)?;
    let c2 = canonicalize(group, &arrow.target())?;
    let a1_inv = f1
        .a
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::NumericalBreakdown("singular A-factor".into()))?;
    Ok(ChartArrow {
        n2: c2.n,
        t2: c2.t,
        a: &f2.a * a1_inv,
        n1: c1.n,
        t1: c1.t,
    })
}

fn not_in_chart(e: Error) -> Error {
    match e {
        Error::NotInCell => Error::NotInChart,
        other => other,
    }
}

/// Coset labels `(x₂, x₁)` of an arrow over the orbit `X_I` (sign pattern
/// with support `I`), with `[[x, s]]` the sign-normalized base. Two arrows
/// agree iff their labels agree in `G/H_I ×_{A_I} G/H_I`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitLabels {
    pub subset: Vec<usize>,
    pub x2: DMatrix<f64>,
    pub x1: DMatrix<f64>,
}

pub fn orbit_reduction(group: &Group, arrow: &Arrow, subset: &[usize]) -> Result<OrbitLabels> {
    let t_i = orbit_representative(group, subset)?;
    let support = arrow.base.t.support();
    if support != t_i.support() {
        return Err(Error::WrongOrbit(format!(
            "base has support {support:?}, expected {:?}",
            t_i.support()
        )));
    }
    // [[g, t]] = [[g·a_s, sign t]].
    let log_s = group.a_section(&arrow.base.t.0)?;
    let x1 = &arrow.base.g * group.a_from_log(&log_s);
    let x2 = &arrow.gamma * &x1;
    Ok(OrbitLabels {
        subset: t_i.support(),
        x2,
        x1,
    })
}

/// Whether `(x₂', x₁') = (x₂ b h₂, x₁ b h₁)` for some `b ∈ A_I`, `h_i ∈ H_I`.
pub fn labels_equivalent(group: &Group, p: &OrbitLabels, q: &OrbitLabels) -> Result<bool> {
    if p.subset != q.subset {
        return Ok(false);
    }
    let t_i = orbit_representative(group, &p.subset)?;
    let inv = |m: &DMatrix<f64>| {
        m.clone()
            .try_inverse()
            .ok_or_else(|| Error::NotInGroup("singular label".into()))
    };
    // x₁⁻¹x₁' = n·b·h must have n = e and b ∈ A_I.
    let y = inv(&p.x1)? * &q.x1;
    let f = match nah_factorize(group, &y, &t_i) {
        Ok(f) => f,
        Err(Error::NotInCell) => return Ok(false),
        Err(e) => return Err(e),
    };
    let size = group.n;
    let tol = group.tol.fact * crate::linalg::cond(&y).max(1.0) * 10.0;
    if (&f.n - DMatrix::<f64>::identity(size, size)).amax() > tol {
        return Ok(false);
    }
    let weights = group.simple_weights(&f.log_a);
    if p.subset.iter().any(|&k| (weights[k] - 1.0).abs() > tol) {
        return Ok(false);
    }
    let z = inv(&(&p.x2 * &f.a))? * &q.x2;
    let e = DMatrix::identity(size, size);
    let (resid, mtol) = membership_residual(group, &z, &t_i, &e)?;
    Ok(resid <= mtol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;

    fn m2(a: f64, b: f64, c: f64, d: f64) -> DMatrix<f64> {
        DMatrix::from_row_slice(2, 2, &[a, b, c, d])
    }

    fn tp(v: &[f64]) -> DeformationParameter {
        DeformationParameter(v.to_vec())
    }

    #[test]
    fn source_and_target_examples() {
        let g = Group::sl(2).unwrap();
        let p = OshimaPoint::base(&g, tp(&[1.0]));
        let u = Arrow::unit(&p);
        assert_eq!(u.source(), p);
        assert_eq!(u.target(), p);
        let (s, c) = 0.8f64.sin_cos();
        let k = Arrow::new(m2(c, -s, s, c), p.clone());
        assert!(crate::oshima::points_equal(&g, &k.target(), &p).unwrap());
        let a = Arrow::new(m2(2.0, 0.0, 0.0, 0.5), p);
        let q = OshimaPoint::base(&g, tp(&[4.0]));
        assert!(crate::oshima::points_equal(&g, &a.target(), &q).unwrap());
    }

    #[test]
    fn compose_and_inverse() {
        let g = Group::sl(3).unwrap();
        let mut r = random::rng(3);
        let p = OshimaPoint::new(random::group_element(&mut r, &g), tp(&[0.5, -2.0]));
        let a = Arrow::new(random::group_element(&mut r, &g), p);
        let inv = inverse(&a).unwrap();
        let c = compose(&g, &a, &inv).unwrap();
        assert!(arrow_eq(&g, &c, &Arrow::unit(&a.target())).unwrap());
        let far = Arrow::unit(&OshimaPoint::base(&g, tp(&[3.0, 3.0])));
        assert!(matches!(compose(&g, &far, &a), Err(Error::NotComposable(_))));
    }

    #[test]
    fn arrow_eq_examples() {
        let g = Group::sl(2).unwrap();
        let p = OshimaPoint::base(&g, tp(&[1.0]));
        let gamma = m2(1.0, 0.5, 0.3, 1.15);
        let a = Arrow::new(gamma.clone(), p.clone());
        assert!(arrow_eq(&g, &a, &a).unwrap());
        let (s, c) = 1.1f64.sin_cos();
        let b = Arrow::new(&gamma * m2(c, -s, s, c), p.clone());
        assert!(arrow_eq(&g, &a, &b).unwrap());
        let b = Arrow::new(&gamma * m2(2.0, 0.0, 0.0, 0.5), p);
        assert!(!arrow_eq(&g, &a, &b).unwrap());
    }

    #[test]
    fn chart_iso_examples() {
        let g = Group::sl(2).unwrap();
        let e = DMatrix::identity(2, 2);
        let a = m2(2.0, 0.0, 0.0, 0.5);
        let w = ChartArrow::new(&g, e.clone(), a.clone(), e.clone(), tp(&[1.0])).unwrap();
        assert!((w.t2.0[0] - 4.0).abs() < 1e-12);
        let arrow = chart_iso(&g, &w).unwrap();
        assert_eq!(arrow.gamma, a);
        assert_eq!(arrow.base, OshimaPoint::base(&g, tp(&[1.0])));
        let back = chart_iso_inv(&g, &arrow).unwrap();
        assert!(back.distance(&w) < 1e-12);

        let unit = chart_iso(&g, &ChartArrow::unit(e.clone(), tp(&[0.0]))).unwrap();
        assert_eq!(unit, Arrow::unit(&OshimaPoint::base(&g, tp(&[0.0]))));
    }

    #[test]
    fn chart_roundtrip_random() {
        let g = Group::sl(3).unwrap();
        let mut r = random::rng(11);
        for t in random::parameters(&mut r, &g, 27) {
            let n1 = random::n_element(&mut r, &g);
            let n2 = random::n_element(&mut r, &g);
            let a = g.a_from_log(&random::a_log(&mut r, &g));
            let w = ChartArrow::new(&g, n2, a, n1, t).unwrap();
            let back = chart_iso_inv(&g, &chart_iso(&g, &w).unwrap()).unwrap();
            assert!(back.distance(&w) <= 1e-9, "{}", back.distance(&w));
        }
    }

    #[test]
    fn orbit_reduction_examples() {
        let g = Group::sl(2).unwrap();
        let p = OshimaPoint::base(&g, tp(&[0.0]));
        let iso = Arrow::new(m2(2.0, 0.0, 0.0, 0.5), p.clone());
        // Isotropy arrow that is not a unit.
        assert!(crate::oshima::points_equal(&g, &iso.target(), &p).unwrap());
        assert!(!arrow_eq(&g, &iso, &Arrow::unit(&p)).unwrap());
        let li = orbit_reduction(&g, &iso, &[]).unwrap();
        let lu = orbit_reduction(&g, &Arrow::unit(&p), &[]).unwrap();
        assert_eq!(lu.x1, lu.x2);
        assert!(!labels_equivalent(&g, &li, &lu).unwrap());
        assert!(labels_equivalent(&g, &li, &li).unwrap());
        assert!(matches!(orbit_reduction(&g, &iso, &[0]), Err(Error::WrongOrbit(_))));

        // Shifting both labels by the same element of A_∅ = A changes nothing.
        let b = m2(3.0, 0.0, 0.0, 1.0 / 3.0);
        let shifted = OrbitLabels {
            subset: vec![],
            x2: &li.x2 * &b,
            x1: &li.x1 * &b,
        };
        assert!(labels_equivalent(&g, &li, &shifted).unwrap());
    }

    #[test]
    fn full_subset_reduces_to_pair_groupoid() {
        // For I = Σ, A_I is trivial and labels are plain cosets of K.
        let g = Group::sl(2).unwrap();
        let p = OshimaPoint::base(&g, tp(&[1.0]));
        let gamma = m2(1.0, 2.0, 0.0, 1.0);
        let a = Arrow::new(gamma.clone(), p.clone());
        let (s, c) = 0.3f64.sin_cos();
        let b = Arrow::new(&gamma * m2(c, -s, s, c), p.clone());
        let la = orbit_reduction(&g, &a, &[0]).unwrap();
        let lb = orbit_reduction(&g, &b, &[0]).unwrap();
        assert!(labels_equivalent(&g, &la, &lb).unwrap());
        let lc = orbit_reduction(&g, &Arrow::new(&gamma * m2(2.0, 0.0, 0.0, 0.5), p), &[0]).unwrap();
        assert!(!labels_equivalent(&g, &la, &lc).unwrap());
    }
}
