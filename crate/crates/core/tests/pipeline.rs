//! End-to-end runs through the public API on a group built from JSON.

use nalgebra::{DMatrix, DVector};

use satake_core::degeneration::{h_t_basis, DeformationParameter};
use satake_core::groupoid::{arrow_eq, chart_iso, chart_iso_inv, compose, inverse, Arrow};
use satake_core::lie::{Group, GroupSpec};
use satake_core::oshima::{canonicalize, orbit_class, points_equal, OshimaPoint};
use satake_core::parabolic::{all_subsets, parabolic_datum};
use satake_core::{Subalgebra, Tolerances};

fn sl4() -> Group {
    let spec = GroupSpec::from_json(r#"{"family": "sl", "n": 4}"#).unwrap();
    Group::new(&spec, Tolerances::default()).unwrap()
}

#[test]
fn sl4_root_data() {
    let g = sl4();
    assert_eq!(g.dim_g, 15);
    assert_eq!(g.n_simple(), 3);
    assert_eq!(g.roots.positive.len(), 6);
    let cartan = g.roots.cartan_matrix();
    for i in 0..3 {
        for j in 0..3 {
            let expected = match (i as i32 - j as i32).abs() {
                0 => 2.0,
                1 => -1.0,
                _ => 0.0,
            };
            assert!((cartan[(i, j)] - expected).abs() < 1e-9);
        }
    }
}

#[test]
fn sl4_h_t_across_sign_patterns() {
    let g = sl4();
    let dim_k = g.k_space.ncols();
    for t in [[1.0, 1.0, 1.0], [0.0, -0.5, 2.0], [0.0, 0.0, 0.0], [-3.0, 0.0, 0.25]] {
        let h = h_t_basis(&g, &DeformationParameter(t.to_vec())).unwrap();
        assert_eq!(h.dim(), dim_k);
        assert!(h.closure_residual(&g) < 1e-9, "t = {t:?}");
    }
}

#[test]
fn sl4_parabolic_dimensions_add_up() {
    let g = sl4();
    for s in all_subsets(3) {
        let pd = parabolic_datum(&g, &s).unwrap();
        let total = pd.a_i.dim() + pd.m_i.dim() + pd.n_i.dim() + pd.nbar_i.dim();
        assert_eq!(total, g.dim_g, "I = {s:?}");
    }
}

#[test]
fn sl4_chart_and_groupoid_roundtrip() {
    let g = sl4();
    let x = DMatrix::from_fn(4, 4, |i, j| if i < j { 0.3 * (i + j) as f64 } else if i == j { 1.0 } else { 0.0 });
    let p = OshimaPoint::new(x, DeformationParameter(vec![0.5, 0.0, -1.0]));
    assert_eq!(orbit_class(&p).0, vec![1, 0, -1]);
    let c = canonicalize(&g, &p).unwrap();
    assert!(points_equal(&g, &p, &OshimaPoint::new(c.n.clone(), c.t.clone())).unwrap());

    let gamma = g.exp(&(g.k_space.column(0) * 0.4));
    let a = Arrow::new(gamma, p.clone());
    let back = compose(&g, &inverse(&a).unwrap(), &a).unwrap();
    assert!(arrow_eq(&g, &back, &Arrow::unit(&p)).unwrap());

    let on_chart = Arrow::new(g.a_from_log(&DVector::from_vec(vec![0.1, -0.2, 0.05])), OshimaPoint::base(&g, c.t.clone()));
    let w = chart_iso_inv(&g, &on_chart).unwrap();
    assert!(arrow_eq(&g, &chart_iso(&g, &w).unwrap(), &on_chart).unwrap());
}

#[test]
fn subalgebra_span_of_k_matches_h_at_unit_t() {
    let g = sl4();
    let k = Subalgebra::span(&g.k_space, 1e-10);
    let h = h_t_basis(&g, &DeformationParameter(vec![1.0; 3])).unwrap();
    assert!(k.distance(&h).unwrap() < 1e-9);
}
