//! Seeded random inputs for property checks.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::degeneration::{h_t_basis, DeformationParameter, SignVector};
use crate::error::Result;
use crate::lie::{Family, Group};
use crate::linalg;

pub use rand::SeedableRng;

/// The generator used throughout.
pub type Rng64 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Condition number bound for random group elements.
pub const COND_BOUND: f64 = 1e3;

fn gaussian_vector(rng: &mut Rng64, len: usize) -> DVector<f64> {
    DVector::from_fn(len, |_, _| StandardNormal.sample(rng))
}

/// Random algebra element (coordinates) with entries uniform in `[-s, s]`.
pub fn algebra_element(rng: &mut Rng64, group: &Group, s: f64) -> DVector<f64> {
    DVector::from_fn(group.dim_g, |_, _| rng.random_range(-s..=s))
}

/// Random group element with condition number at most [`COND_BOUND`].
pub fn group_element(rng: &mut Rng64, group: &Group) -> DMatrix<f64> {
    let n = group.n;
    loop {
        let m = match group.family {
            Family::SpecialLinear => {
                let mut m = DMatrix::from_column_slice(n, n, gaussian_vector(rng, n * n).as_slice());
                let det = m.determinant();
                if det.abs() < 1e-8 {
                    continue;
                }
                if det < 0.0 {
                    m.row_mut(0).neg_mut();
                }
                m / det.abs().powf(1.0 / n as f64)
            }
            Family::Raw => group.exp(&algebra_element(rng, group, 0.7)),
        };
        if linalg::cond(&m) <= COND_BOUND {
            return m;
        }
    }
}

/// Magnitude log-uniform in `[0.1, 10]`.
fn magnitude(rng: &mut Rng64) -> f64 {
    rng.random_range((0.1f64).ln()..=(10.0f64).ln()).exp()
}

/// Parameter with the given sign pattern and random magnitudes.
pub fn parameter_with_signs(rng: &mut Rng64, signs: &SignVector) -> DeformationParameter {
    DeformationParameter(signs.0.iter().map(|&s| s as f64 * magnitude(rng)).collect())
}

/// `count` parameters cycling through every sign pattern.
pub fn parameters(rng: &mut Rng64, group: &Group, count: usize) -> Vec<DeformationParameter> {
    let patterns = SignVector::all(group.n_simple());
    (0..count)
        .map(|i| parameter_with_signs(rng, &patterns[i % patterns.len()]))
        .collect()
}

/// Random nondegenerate parameter.
pub fn nondegenerate_parameter(rng: &mut Rng64, group: &Group) -> DeformationParameter {
    let signs = SignVector((0..group.n_simple()).map(|_| if rng.random_bool(0.5) { 1 } else { -1 }).collect());
    parameter_with_signs(rng, &signs)
}

/// Logarithm of a random element of `A`, coordinates uniform in `[-1, 1]`.
pub fn a_log(rng: &mut Rng64, group: &Group) -> DVector<f64> {
    DVector::from_fn(group.rank_a(), |_, _| rng.random_range(-1.0..=1.0))
}

/// Random element of `N`.
pub fn n_element(rng: &mut Rng64, group: &Group) -> DMatrix<f64> {
    let n_space = group.roots.n_space();
    let c = DVector::from_fn(n_space.dim(), |_, _| rng.random_range(-1.0..=1.0));
    group.exp(&(n_space.basis() * c))
}

/// Random `M`-representative times a word of length 3 in `exp(c·Y)` with
/// `Y` running over an orthonormal basis of `h_t` and `|c| ≤ 1`.
pub fn h_word(rng: &mut Rng64, group: &Group, t: &DeformationParameter) -> Result<DMatrix<f64>> {
    let h = h_t_basis(group, t)?;
    let reps = group.m_representatives();
    let mut w = reps[rng.random_range(0..reps.len())].clone();
    for _ in 0..3 {
        let j = rng.random_range(0..h.dim());
        let c = rng.random_range(-1.0..=1.0);
        w *= group.exp(&(h.basis().column(j) * c));
    }
    Ok(w)
}

/// Random element of `K`.
pub fn k_element(rng: &mut Rng64, group: &Group) -> DMatrix<f64> {
    let k = &group.k_space;
    let c = DVector::from_fn(k.ncols(), |_, _| rng.random_range(-3.0..=3.0));
    let reps = group.m_representatives();
    &reps[rng.random_range(0..reps.len())] * group.exp(&(k * c))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn elements_are_in_the_group() {
        let g = Group::sl(3).unwrap();
        let mut r = rng(7);
        for _ in 0..50 {
            let x = group_element(&mut r, &g);
            assert!((x.determinant() - 1.0).abs() < 1e-10);
            assert!(linalg::cond(&x) <= COND_BOUND);
            assert!(g.k_membership(&k_element(&mut r, &g), 1e-10));
        }
    }

    #[test]
    fn parameters_cover_every_pattern() {
        let g = Group::sl(3).unwrap();
        let ts = parameters(&mut rng(1), &g, 27);
        let mut signs: Vec<_> = ts.iter().map(|t| t.sign()).collect();
        signs.sort();
        signs.dedup();
        assert_eq!(signs.len(), 9);
        for t in &ts {
            assert!(t.0.iter().all(|&x| x == 0.0 || (0.1..=10.0).contains(&x.abs())));
        }
    }

    #[test]
    fn deterministic() {
        let g = Group::sl(2).unwrap();
        assert_eq!(group_element(&mut rng(5), &g), group_element(&mut rng(5), &g));
    }
}
