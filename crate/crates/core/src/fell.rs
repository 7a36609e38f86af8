//! Sampled closed subsets of `G` and a windowed Hausdorff distance used as a
//! computable proxy for convergence in the Fell topology.
//!
//! A sample keeps the points of operator norm at most `R` (the window) and,
//! separately, a halo of points up to `HALO_FACTOR · R`. Distances are taken
//! from window points to window-plus-halo points of the other set, so that
//! points sitting just inside the window are not penalised for partners just
//! outside it.

use std::collections::HashSet;
use std::sync::atomic::{AtomicU64, Ordering};

use kiddo::{ImmutableKdTree, SquaredEuclidean};
use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::degeneration::SampledSubgroup;
use crate::error::{Error, Result};
use crate::linalg;
use crate::subspace::Subalgebra;

/// Outer radius of the halo relative to the window radius.
pub const HALO_FACTOR: f64 = 1.1;

/// Candidates closer than `net_step · MERGE_FRACTION` are merged. Merging at
/// the full net step would let nearby sets pick different representatives.
pub const MERGE_FRACTION: f64 = 1e-3;

/// A finite net of a closed subset of `G` inside a window.
#[derive(Debug, Clone)]
pub struct SampledClosedSet {
    /// Points of operator norm at most `radius`.
    pub points: Vec<DMatrix<f64>>,
    /// Points with norm in `(radius, HALO_FACTOR · radius]`.
    pub halo: Vec<DMatrix<f64>>,
    pub radius: f64,
    pub net_step: f64,
    pub seed: u64,
}

fn cell_key(m: &DMatrix<f64>, step: f64) -> Vec<i64> {
    m.iter().map(|&x| (x / step).floor() as i64).collect()
}

impl SampledClosedSet {
    /// Build a set from candidate points: truncate to the halo radius and
    /// merge near-duplicates. Candidates earlier in the list win.
    pub fn from_candidates(
        candidates: impl IntoIterator<Item = DMatrix<f64>>,
        radius: f64,
        net_step: f64,
        seed: u64,
    ) -> Result<Self> {
        if !(radius > 0.0) || !(net_step > 0.0) {
            return Err(Error::InvalidInput("radius and net step must be positive".into()));
        }
        let mut seen = HashSet::new();
        let mut points = Vec::new();
        let mut halo = Vec::new();
        for m in candidates {
            let norm = linalg::op_norm(&m);
            if !(norm <= HALO_FACTOR * radius) {
                continue;
            }
            if !seen.insert(cell_key(&m, net_step * MERGE_FRACTION)) {
                continue;
            }
            if norm <= radius {
                points.push(m);
            } else {
                halo.push(m);
            }
        }
        if points.is_empty() {
            return Err(Error::EmptySample);
        }
        Ok(SampledClosedSet {
            points,
            halo,
            radius,
            net_step,
            seed,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Image under `x ↦ g x g⁻¹`; the window grows to `cond(g)·R`.
    pub fn conjugated(&self, g: &DMatrix<f64>) -> Result<Self> {
        let g_inv = g
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::NotInGroup("singular conjugator".into()))?;
        let map = |v: &Vec<DMatrix<f64>>| v.iter().map(|x| g * x * &g_inv).collect();
        Ok(SampledClosedSet {
            points: map(&self.points),
            halo: map(&self.halo),
            radius: self.radius * linalg::cond(g),
            net_step: self.net_step,
            seed: self.seed,
        })
    }

    /// Image under `x ↦ g x`; the window grows to `‖g‖·R`.
    pub fn translated(&self, g: &DMatrix<f64>) -> Self {
        let map = |v: &Vec<DMatrix<f64>>| v.iter().map(|x| g * x).collect();
        SampledClosedSet {
            points: map(&self.points),
            halo: map(&self.halo),
            radius: self.radius * linalg::op_norm(g),
            net_step: self.net_step,
            seed: self.seed,
        }
    }

    /// Whether some window point is within `tol` (operator norm) of `x`.
    pub fn contains_near(&self, x: &DMatrix<f64>, tol: f64) -> bool {
        self.points.iter().any(|p| linalg::op_norm(&(p - x)) <= tol)
    }
}

/// Deterministic net of `H` inside the radius-`radius` window.
pub fn sample_subgroup(
    h: &SampledSubgroup,
    radius: f64,
    net_step: f64,
    seed: u64,
) -> Result<SampledClosedSet> {
    SampledClosedSet::from_candidates(h.words(radius, seed), radius, net_step, seed)
}

/// `max(floor, sup_{x ∈ from} inf_{y ∈ to} ‖x − y‖_op)`. Once the running
/// supremum exceeds `cap` the search stops and a value above `cap` is
/// returned.
fn directed(from: &[DMatrix<f64>], to: &[&DMatrix<f64>], floor: f64, cap: f64) -> f64 {
    if from.is_empty() {
        return floor;
    }
    if to.is_empty() {
        return f64::INFINITY;
    }
    match from[0].nrows() {
        1 => directed_k::<1>(from, to, floor, cap),
        2 => directed_k::<4>(from, to, floor, cap),
        3 => directed_k::<9>(from, to, floor, cap),
        4 => directed_k::<16>(from, to, floor, cap),
        _ => directed_brute(from, to).max(floor),
    }
}

fn flat<const K: usize>(m: &DMatrix<f64>) -> [f64; K] {
    let mut out = [0.0; K];
    out.copy_from_slice(m.as_slice());
    out
}

fn op_distance(x: &DMatrix<f64>, y: &DMatrix<f64>) -> f64 {
    let diff: Vec<f64> = x.iter().zip(y.iter()).map(|(a, b)| a - b).collect();
    linalg::op_norm_flat(&diff, x.nrows())
}

fn directed_k<const K: usize>(from: &[DMatrix<f64>], to: &[&DMatrix<f64>], floor: f64, cap: f64) -> f64 {
    let n = from[0].nrows() as f64;
    let entries: Vec<[f64; K]> = to.iter().map(|y| flat::<K>(y)).collect();
    let tree: ImmutableKdTree<f64, K> =
        ImmutableKdTree::new_from_slice(&entries).expect("sample points are finite");
    let sup = AtomicU64::new(floor.max(0.0).to_bits());
    from.par_iter().for_each(|x| {
        let current = f64::from_bits(sup.load(Ordering::Relaxed));
        if current > cap {
            return;
        }
        let q = flat::<K>(x);
        // Any candidate bounds the distance above; an approximate neighbour
        // usually settles the query without an exact search.
        let guess = tree.query(&q).nearest_one::<SquaredEuclidean<f64>>().approx().execute();
        if op_distance(x, to[guess.item as usize]) <= current {
            return;
        }
        // ‖·‖_op ≤ ‖·‖_F, so any point in this small ball settles the query.
        let settled = !tree
            .query(&q)
            .within::<SquaredEuclidean<f64>>(current * current)
            .unsorted()
            .execute()
            .is_empty();
        if settled {
            return;
        }
        let nearest = tree.query(&q).nearest_one::<SquaredEuclidean<f64>>().execute();
        let mut best = op_distance(x, to[nearest.item as usize]);
        if best <= current {
            return;
        }
        // ‖·‖_op ≥ ‖·‖_F / √n: every improvement lies in this ball.
        let r2 = best * best * n;
        let ball = tree
            .query(&q)
            .within::<SquaredEuclidean<f64>>(r2)
            .unsorted()
            .execute();
        for item in ball {
            best = best.min(op_distance(x, to[item.item as usize]));
        }
        sup.fetch_max(best.to_bits(), Ordering::Relaxed);
    });
    f64::from_bits(sup.load(Ordering::Relaxed))
}

fn directed_brute(from: &[DMatrix<f64>], to: &[&DMatrix<f64>]) -> f64 {
    from.par_iter()
        .map(|x| to.iter().map(|y| op_distance(x, y)).fold(f64::INFINITY, f64::min))
        .reduce(|| 0.0, f64::max)
}

/// Symmetric windowed Hausdorff distance in operator norm.
pub fn local_hausdorff(x: &SampledClosedSet, y: &SampledClosedSet) -> Result<f64> {
    local_hausdorff_bounded(x, y, 0.0, f64::INFINITY)
}

/// As [`local_hausdorff`], but stops as soon as the distance is known to
/// exceed `cap` and then returns infinity.
pub fn local_hausdorff_capped(x: &SampledClosedSet, y: &SampledClosedSet, cap: f64) -> Result<f64> {
    local_hausdorff_bounded(x, y, 0.0, cap)
}

/// Window distance resolved only between `floor` and `cap`: the result is
/// `max(floor, d)` when `d ≤ cap`, and infinity otherwise.
/// Narrow bounds make threshold decisions much cheaper.
pub fn local_hausdorff_bounded(
    x: &SampledClosedSet,
    y: &SampledClosedSet,
    floor: f64,
    cap: f64,
) -> Result<f64> {
    let scale = x.radius.abs().max(y.radius.abs()).max(1.0);
    if (x.radius - y.radius).abs() > 1e-9 * scale {
        return Err(Error::IncompatibleWindows(x.radius, y.radius));
    }
    fn all(s: &SampledClosedSet) -> Vec<&DMatrix<f64>> {
        s.points.iter().chain(s.halo.iter()).collect()
    }
    let forward = directed(&x.points, &all(y), floor, cap);
    if forward > cap {
        return Ok(f64::INFINITY);
    }
    let backward = directed(&y.points, &all(x), floor, cap);
    let d = forward.max(backward);
    Ok(if d > cap { f64::INFINITY } else { d })
}

/// Largest principal-angle sine between two subalgebras of equal dimension.
pub fn grassmannian_distance(v: &Subalgebra, w: &Subalgebra) -> Result<f64> {
    v.distance(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degeneration::{h_t_basis, DeformationParameter};
    use crate::lie::Group;
    use approx::assert_abs_diff_eq;

    fn t(x: f64) -> DeformationParameter {
        DeformationParameter(vec![x])
    }

    fn sample(g: &Group, x: f64) -> SampledClosedSet {
        let h = SampledSubgroup::h_t(g, &t(x)).unwrap();
        sample_subgroup(&h, 10.0, 0.05, 42).unwrap()
    }

    #[test]
    fn compact_sample_lies_in_so2_and_contains_identity() {
        let g = Group::sl(2).unwrap();
        let s = sample(&g, 1.0);
        assert!(s.contains_near(&DMatrix::identity(2, 2), 1e-15));
        for p in &s.points {
            assert!(g.k_membership(p, 1e-9));
        }
    }

    #[test]
    fn degenerate_sample_reaches_unipotent_tail() {
        let g = Group::sl(2).unwrap();
        let s = sample(&g, 0.0);
        let target = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 5.0, 1.0]);
        assert!(s.contains_near(&target, 0.025));
    }

    #[test]
    fn samples_match_explicit_parametrization() {
        // Every point of the H_t sample has the form ±[[c, −t²s], [s, c]] with
        // c² + t²s² = 1.
        let g = Group::sl(2).unwrap();
        let x = 0.3;
        for p in &sample(&g, x).points {
            let (c, s) = (p[(0, 0)], p[(1, 0)]);
            assert_abs_diff_eq!(p[(1, 1)], c, epsilon = 1e-9);
            assert_abs_diff_eq!(p[(0, 1)], -x * x * s, epsilon = 1e-9);
            assert_abs_diff_eq!(c * c + x * x * s * s, 1.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn distance_properties() {
        let g = Group::sl(2).unwrap();
        let a = sample(&g, 1.0);
        assert_eq!(local_hausdorff(&a, &a).unwrap(), 0.0);
        let near = local_hausdorff(&a, &sample(&g, 1.1)).unwrap();
        let far = local_hausdorff(&a, &sample(&g, 2.0)).unwrap();
        assert!(near <= far, "{near} > {far}");
        let mut other = a.clone();
        other.radius = 5.0;
        assert_eq!(local_hausdorff(&a, &other), Err(Error::IncompatibleWindows(10.0, 5.0)));
    }

    #[test]
    fn bounded_distance_clamps() {
        let g = Group::sl(2).unwrap();
        let a = sample(&g, 1.0);
        let b = sample(&g, 1.1);
        let exact = local_hausdorff(&a, &b).unwrap();
        assert_eq!(local_hausdorff_bounded(&a, &b, 0.0, 1.0).unwrap(), exact);
        assert_eq!(local_hausdorff_bounded(&a, &b, 10.0, 20.0).unwrap(), 10.0);
        let c = sample(&g, 0.0);
        assert_eq!(local_hausdorff_capped(&a, &c, 0.25).unwrap(), f64::INFINITY);
    }

    #[test]
    fn limit_toward_zero() {
        let g = Group::sl(2).unwrap();
        let limit = sample(&g, 0.0);
        let d = local_hausdorff(&sample(&g, 2f64.powi(-10)), &limit).unwrap();
        assert!(d <= 1e-2, "{d}");
    }

    #[test]
    fn grassmannian_examples() {
        let g = Group::sl(2).unwrap();
        let h0 = h_t_basis(&g, &t(0.0)).unwrap();
        let mut last = f64::INFINITY;
        for k in 1..8 {
            let s = 2f64.powi(-k);
            let d = grassmannian_distance(&h_t_basis(&g, &t(s)).unwrap(), &h0).unwrap();
            // Closed form: sin of the angle between F and s²E − F.
            assert_abs_diff_eq!(d, s * s / (s.powi(4) + 1.0).sqrt(), epsilon = 1e-12);
            assert!(d < last);
            last = d;
        }
        assert_eq!(
            grassmannian_distance(&h0, &Subalgebra::whole(3)),
            Err(Error::DimensionMismatch(1, 3))
        );
    }

    #[test]
    fn invalid_window() {
        let g = Group::sl(2).unwrap();
        let h = SampledSubgroup::h_t(&g, &t(1.0)).unwrap();
        assert!(matches!(sample_subgroup(&h, 0.0, 0.05, 1), Err(Error::InvalidInput(_))));
    }
}
