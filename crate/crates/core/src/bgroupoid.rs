//! The model b-groupoid of `R^n` with the coordinate hyperplanes
//! `{m_j = 0}`, `j < p`: arrows `(m', a, m)` with `a ∈ R^p_+` scaling the
//! first `p` coordinates and the remaining coordinates unconstrained. Also
//! the normal-frame formula `a(T)`, normal derivatives of the chart action,
//! and the functor from the chart groupoid.

use nalgebra::{DMatrix, DVector};

use crate::degeneration::DeformationParameter;
use crate::error::{Error, Result};
use crate::groupoid::ChartArrow;
use crate::lie::Group;
use crate::linalg;
use crate::oshima::{canonicalize, OshimaPoint};

/// An arrow `m → m'` of the model groupoid.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelBArrow {
    pub m2: Vec<f64>,
    pub a: Vec<f64>,
    pub m1: Vec<f64>,
}

impl ModelBArrow {
    /// Validate `m'_j = a_j m_j` for `j < p` with `a_j > 0`.
    pub fn new(m2: Vec<f64>, a: Vec<f64>, m1: Vec<f64>) -> Result<Self> {
        if m2.len() != m1.len() {
            return Err(Error::DimensionMismatch(m2.len(), m1.len()));
        }
        if a.len() > m1.len() {
            return Err(Error::DimensionMismatch(a.len(), m1.len()));
        }
        if a.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
            return Err(Error::InvalidInput("scaling factors must be positive".into()));
        }
        let arrow = ModelBArrow { m2, a, m1 };
        if arrow.residual() > 1e-12 {
            return Err(Error::InvalidInput("m'_j differs from a_j m_j".into()));
        }
        Ok(arrow)
    }

    pub fn unit(m: Vec<f64>, p: usize) -> Self {
        ModelBArrow {
            m2: m.clone(),
            a: vec![1.0; p],
            m1: m,
        }
    }

    /// Number of hyperplanes.
    pub fn p(&self) -> usize {
        self.a.len()
    }

    /// `max_j |m'_j − a_j m_j|`, relative to `max(1, |m'_j|)`.
    pub fn residual(&self) -> f64 {
        (0..self.p())
            .map(|j| (self.m2[j] - self.a[j] * self.m1[j]).abs() / self.m2[j].abs().max(1.0))
            .fold(0.0, f64::max)
    }

    /// Largest relative difference between two arrows.
    pub fn distance(&self, other: &ModelBArrow) -> f64 {
        let rel = |x: &[f64], y: &[f64]| {
            x.iter()
                .zip(y)
                .map(|(a, b)| (a - b).abs() / a.abs().max(b.abs()).max(1.0))
                .fold(0.0, f64::max)
        };
        rel(&self.m2, &other.m2)
            .max(rel(&self.a, &other.a))
            .max(rel(&self.m1, &other.m1))
    }
}

fn point_gap(x: &[f64], y: &[f64]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(a, b)| (a - b).abs() / a.abs().max(b.abs()).max(1.0))
        .fold(0.0, f64::max)
}

/// `(m'', a', m') ∘ (m', a, m) = (m'', a'a, m)`.
pub fn model_compose(b2: &ModelBArrow, b1: &ModelBArrow) -> Result<ModelBArrow> {
    if b2.p() != b1.p() || b2.m1.len() != b1.m2.len() {
        return Err(Error::DimensionMismatch(b2.m1.len(), b1.m2.len()));
    }
    let gap = point_gap(&b2.m1, &b1.m2);
    if gap > 1e-12 {
        return Err(Error::NotComposable(gap));
    }
    Ok(ModelBArrow {
        m2: b2.m2.clone(),
        a: b2.a.iter().zip(&b1.a).map(|(x, y)| x * y).collect(),
        m1: b1.m1.clone(),
    })
}

pub fn model_inverse(b: &ModelBArrow) -> ModelBArrow {
    ModelBArrow {
        m2: b.m1.clone(),
        a: b.a.iter().map(|x| 1.0 / x).collect(),
        m1: b.m2.clone(),
    }
}

/// `a(T)_j = T_j` where `m_j = 0` and `m'_j / m_j` otherwise, for `j < p`.
/// `t` lists the normal scalings at the hyperplanes through `m`, in order.
pub fn a_of_t(m2: &[f64], t: &[f64], m1: &[f64], p: usize) -> Result<Vec<f64>> {
    if m2.len() != m1.len() {
        return Err(Error::DimensionMismatch(m2.len(), m1.len()));
    }
    if p > m1.len() {
        return Err(Error::DimensionMismatch(p, m1.len()));
    }
    let zeros = (0..p).filter(|&j| m1[j] == 0.0).count();
    if t.len() != zeros {
        return Err(Error::DimensionMismatch(t.len(), zeros));
    }
    if t.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
        return Err(Error::InvalidInput("normal frame maps must preserve orientation".into()));
    }
    let mut frames = t.iter();
    (0..p)
        .map(|j| {
            if m1[j].signum() != m2[j].signum() || (m1[j] == 0.0) != (m2[j] == 0.0) {
                return Err(Error::SignMismatch(j));
            }
            Ok(if m1[j] == 0.0 {
                *frames.next().expect("counted above")
            } else {
                m2[j] / m1[j]
            })
        })
        .collect()
}

/// Coordinates of `n ∈ N` in the orthonormal basis of `n`, via `log n`.
pub fn n_coordinates(group: &Group, n: &DMatrix<f64>) -> DVector<f64> {
    let c = group.coords(&linalg::log_unipotent(n));
    group.roots.n_space().basis().transpose() * c
}

/// `((n₂,t₂), a, (n₁,t₁)) ↦ ((t₂, ν(n₂)), (a^α)_α, (t₁, ν(n₁)))`.
pub fn oshima_to_b(group: &Group, w: &ChartArrow) -> Result<ModelBArrow> {
    let log_a = group.log_a(&w.a)?;
    let point = |t: &DeformationParameter, n: &DMatrix<f64>| {
        let mut m = t.0.clone();
        m.extend(n_coordinates(group, n).iter());
        m
    };
    Ok(ModelBArrow {
        m2: point(&w.t2, &w.n2),
        a: group.simple_weights(&log_a),
        m1: point(&w.t1, &w.n1),
    })
}

/// Step of the central difference.
pub const FD_STEP: f64 = 1e-4;
/// Threshold that triggers one Richardson extrapolation.
pub const FD_FALLBACK: f64 = 1e-5;

/// `∂t'_α / ∂t_α` at `s = 0`, where `[[x, t₀ + s e_α]]` has chart
/// coordinates `(n(s), t'(s))`. Requires `t₀_α = 0`.
pub fn normal_derivative(group: &Group, x: &DMatrix<f64>, t0: &DeformationParameter, alpha: usize) -> Result<f64> {
    if t0.len() != group.n_simple() {
        return Err(Error::DimensionMismatch(t0.len(), group.n_simple()));
    }
    if alpha >= group.n_simple() {
        return Err(Error::UnknownRoot(alpha));
    }
    if t0.0[alpha] != 0.0 {
        return Err(Error::InvalidInput("t₀ must lie on the hyperplane t_α = 0".into()));
    }
    let coord = |s: f64| -> Result<f64> {
        let mut t = t0.clone();
        t.0[alpha] = s;
        Ok(canonicalize(group, &OshimaPoint::new(x.clone(), t))?.t.0[alpha])
    };
    let central = |h: f64| -> Result<f64> { Ok((coord(h)? - coord(-h)?) / (2.0 * h)) };
    let d1 = central(FD_STEP)?;
    let d2 = central(FD_STEP / 2.0)?;
    if (d1 - d2).abs() > FD_FALLBACK {
        Ok((4.0 * d2 - d1) / 3.0)
    } else {
        Ok(d2)
    }
}
