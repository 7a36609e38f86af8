//! The seeded property suite behind the `verify` command.
//!
//! Every check draws its inputs from its own ChaCha stream derived from the
//! suite seed and the check's position in [`CHECKS`], so a report depends
//! only on `(group, seed, tolerances)`. Checks whose natural residuals carry
//! input-dependent tolerances report the worst ratio `residual / tolerance`
//! against a tolerance of `1`.

use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bgroupoid::{a_of_t, model_compose, normal_derivative, oshima_to_b, ModelBArrow};
use crate::degeneration::{a_action_log, h_t_basis, DeformationParameter, SampledSubgroup, SignVector};
use crate::error::{Error, Result};
use crate::fell::{local_hausdorff, local_hausdorff_bounded, local_hausdorff_capped, sample_subgroup, SampledClosedSet};
use crate::groupoid::{
    arrow_eq_residual, chart_compose, chart_iso, chart_iso_inv, compose, inverse, Arrow, ChartArrow,
};
use crate::lie::{Family, FactorMode, Group};
use crate::oshima::{
    canonicalize, compactness_witness, max_abs_t, mobius, orbit_class, orbit_representative,
    satake_member, sl2_sphere, ExtendedComplex, OshimaPoint,
};
use crate::parabolic::{all_subsets, is_ad_nilpotent, normalizer_subalgebra, parabolic_datum};
use crate::random::{self, Rng64};
use crate::subspace::Subalgebra;
use crate::Tolerances;

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_SEED: u64 = 42;

/// Window radius and net step of the sampled Fell checks.
pub const WINDOW_RADIUS: f64 = 10.0;
pub const NET_STEP: f64 = 0.05;
/// Exponent `n` of the path parameter `2⁻ⁿ`.
pub const PATH_EXPONENT: i32 = 10;

/// One line of a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckEntry {
    pub check_id: String,
    /// The mathematical statement being checked.
    pub anchor: String,
    pub group: String,
    pub samples: usize,
    /// `None` when the check aborted or produced a non-finite residual.
    pub max_residual: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub schema_version: u32,
    pub group: String,
    pub seed: u64,
    pub tolerances: Tolerances,
    /// Sorted by `check_id`.
    pub entries: Vec<CheckEntry>,
    /// Seconds.
    pub wall_time: f64,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Check whose inputs are deliberately corrupted (negative control).
    pub fault_inject: Option<String>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: DEFAULT_SEED,
            fault_inject: None,
        }
    }
}

/// Raw result of a check before it becomes an entry.
#[derive(Debug, Clone, Copy)]
struct Outcome {
    samples: usize,
    max_residual: f64,
    tolerance: f64,
}

struct Ctx<'a> {
    group: &'a Group,
    seed: u64,
    rng: Rng64,
    fault: bool,
}

/// A registered check.
pub struct CheckInfo {
    pub id: &'static str,
    pub anchor: &'static str,
    /// Acceptance criterion exercised, if any.
    pub criterion: Option<u8>,
    /// Whether corrupting the `h_t` basis is meaningful for this check.
    pub faultable: bool,
    applies: fn(&Group) -> bool,
    run: fn(&mut Ctx) -> Result<Outcome>,
}

fn always(_: &Group) -> bool {
    true
}

fn is_sl2(g: &Group) -> bool {
    g.family == Family::SpecialLinear && g.n == 2
}

fn small_rank(g: &Group) -> bool {
    g.n_simple() <= 2
}

/// All checks, sorted by id.
pub static CHECKS: &[CheckInfo] = &[
    CheckInfo {
        id: "bgroupoid.a_of_t",
        anchor: "a(T)·m = m' on the hyperplane coordinates of model arrows",
        criterion: Some(10),
        faultable: false,
        applies: always,
        run: check_a_of_t,
    },
    CheckInfo {
        id: "bgroupoid.functoriality",
        anchor: "the chart groupoid maps functorially onto the model b-groupoid",
        criterion: Some(10),
        faultable: false,
        applies: always,
        run: check_functoriality,
    },
    CheckInfo {
        id: "bgroupoid.normal_derivative_a",
        anchor: "a ∈ A acts on the normal coordinate t_α by the weight a^α",
        criterion: Some(9),
        faultable: false,
        applies: always,
        run: check_normal_derivative_a,
    },
    CheckInfo {
        id: "bgroupoid.normal_derivative_h",
        anchor: "elements of H_t0 act as the identity on the normal fibre at t_α = 0",
        criterion: Some(9),
        faultable: false,
        applies: always,
        run: check_normal_derivative_h,
    },
    CheckInfo {
        id: "bgroupoid.normal_derivative_n",
        anchor: "elements of N act trivially on normal bundles",
        criterion: Some(9),
        faultable: false,
        applies: always,
        run: check_normal_derivative_n,
    },
    CheckInfo {
        id: "degeneration.equivariance",
        anchor: "h_{a·t} = Ad_a h_t",
        criterion: Some(2),
        faultable: true,
        applies: always,
        run: check_equivariance,
    },
    CheckInfo {
        id: "degeneration.subalgebra",
        anchor: "h_t is a Lie subalgebra of dimension dim k for every t",
        criterion: Some(1),
        faultable: true,
        applies: always,
        run: check_subalgebra,
    },
    CheckInfo {
        id: "degeneration.transversality",
        anchor: "h_t + a + n = g is a direct sum for every t",
        criterion: Some(5),
        faultable: false,
        applies: always,
        run: check_transversality,
    },
    CheckInfo {
        id: "fell.limit",
        anchor: "H_t converges to H_{t_I} in the Fell topology as t → t_I (window distance)",
        criterion: Some(6),
        faultable: false,
        applies: always,
        run: check_fell_limit,
    },
    CheckInfo {
        id: "groupoid.axioms",
        anchor: "associativity, unit and inverse laws of the Oshima groupoid",
        criterion: Some(7),
        faultable: false,
        applies: always,
        run: check_groupoid_axioms,
    },
    CheckInfo {
        id: "groupoid.chart_homomorphism",
        anchor: "the chart map W → G_M|U preserves composition",
        criterion: Some(8),
        faultable: false,
        applies: always,
        run: check_chart_homomorphism,
    },
    CheckInfo {
        id: "groupoid.chart_roundtrip",
        anchor: "the chart map W → G_M|U is invertible on the big cell",
        criterion: Some(8),
        faultable: false,
        applies: always,
        run: check_chart_roundtrip,
    },
    CheckInfo {
        id: "groupoid.representative_change",
        anchor: "arrow equality is independent of the chosen representatives",
        criterion: Some(7),
        faultable: false,
        applies: always,
        run: check_representative_change,
    },
    CheckInfo {
        id: "lie.factorization",
        anchor: "KAN, NAK and KAK factorizations reconstruct g",
        criterion: None,
        faultable: false,
        applies: always,
        run: check_factorization,
    },
    CheckInfo {
        id: "oshima.closure_order",
        anchor: "X_I lies in the closure of X_J iff I ⊆ J (Fell-limit witnesses)",
        criterion: Some(11),
        faultable: false,
        applies: small_rank,
        run: check_closure_order,
    },
    CheckInfo {
        id: "oshima.compactness",
        anchor: "every point of a dense orbit equals some [[k, t]] with k ∈ K, |t_α| ≤ 1",
        criterion: Some(13),
        faultable: false,
        applies: always,
        run: check_compactness,
    },
    CheckInfo {
        id: "oshima.orbit_count",
        anchor: "G-orbits on the Oshima space correspond to sign vectors",
        criterion: Some(11),
        faultable: false,
        applies: always,
        run: check_orbit_count,
    },
    CheckInfo {
        id: "oshima.satake_count",
        anchor: "the Satake compactification is the union of 2^|Σ| orbits",
        criterion: Some(11),
        faultable: false,
        applies: always,
        run: check_satake_count,
    },
    CheckInfo {
        id: "oshima.sphere_equivariance",
        anchor: "[[g, t]] ↦ g·(it) intertwines the G-action with Möbius maps",
        criterion: Some(12),
        faultable: false,
        applies: is_sl2,
        run: check_sphere_equivariance,
    },
    CheckInfo {
        id: "oshima.sphere_orbits",
        anchor: "the three orbits map onto the upper, lower half-planes and R ∪ {∞}",
        criterion: Some(12),
        faultable: false,
        applies: is_sl2,
        run: check_sphere_orbits,
    },
    CheckInfo {
        id: "oshima.sphere_well_defined",
        anchor: "[[g, t]] ↦ g·(it) is independent of the representative",
        criterion: Some(12),
        faultable: false,
        applies: is_sl2,
        run: check_sphere_well_defined,
    },
    CheckInfo {
        id: "parabolic.nilpotent",
        anchor: "X ∈ h_I is ad-nilpotent iff its k_I-component vanishes",
        criterion: Some(4),
        faultable: false,
        applies: always,
        run: check_nilpotent,
    },
    CheckInfo {
        id: "parabolic.normalizer",
        anchor: "the normalizer of h_I is a_I ⊕ h_I",
        criterion: Some(3),
        faultable: false,
        applies: always,
        run: check_normalizer,
    },
];

pub fn check_info(id: &str) -> Option<&'static CheckInfo> {
    CHECKS.iter().find(|c| c.id == id)
}

fn validate_fault(opts: &VerifyOptions) -> Result<()> {
    match &opts.fault_inject {
        None => Ok(()),
        Some(id) => match check_info(id) {
            Some(c) if c.faultable => Ok(()),
            Some(_) => Err(Error::InvalidInput(format!("no fault injection defined for {id}"))),
            None => Err(Error::InvalidInput(format!("unknown check id {id}"))),
        },
    }
}

fn stream_seed(seed: u64, index: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(index as u64)
}

fn entry(group: &Group, info: &CheckInfo, result: Result<Outcome>) -> CheckEntry {
    let base = CheckEntry {
        check_id: info.id.to_string(),
        anchor: info.anchor.to_string(),
        group: group.name.clone(),
        samples: 0,
        max_residual: None,
        tolerance: 0.0,
        pass: false,
        error: None,
    };
    match result {
        Ok(o) => CheckEntry {
            samples: o.samples,
            max_residual: o.max_residual.is_finite().then_some(o.max_residual),
            tolerance: o.tolerance,
            pass: o.max_residual <= o.tolerance,
            ..base
        },
        Err(e) => CheckEntry {
            error: Some(e.to_string()),
            ..base
        },
    }
}

/// Run a single check. `Ok(None)` when it does not apply to the group.
pub fn run_check(group: &Group, id: &str, opts: &VerifyOptions) -> Result<Option<CheckEntry>> {
    validate_fault(opts)?;
    let index = CHECKS
        .iter()
        .position(|c| c.id == id)
        .ok_or_else(|| Error::InvalidInput(format!("unknown check id {id}")))?;
    let info = &CHECKS[index];
    if !(info.applies)(group) {
        return Ok(None);
    }
    let mut ctx = Ctx {
        group,
        seed: opts.seed,
        rng: random::rng(stream_seed(opts.seed, index)),
        fault: opts.fault_inject.as_deref() == Some(id),
    };
    Ok(Some(entry(group, info, (info.run)(&mut ctx))))
}

/// Every applicable check, in `check_id` order.
pub fn verify_suite(group: &Group, opts: &VerifyOptions) -> Result<VerifyReport> {
    validate_fault(opts)?;
    let start = Instant::now();
    let mut entries = Vec::new();
    for info in CHECKS {
        if let Some(e) = run_check(group, info.id, opts)? {
            entries.push(e);
        }
    }
    entries.sort_by(|a, b| a.check_id.cmp(&b.check_id));
    Ok(VerifyReport {
        schema_version: SCHEMA_VERSION,
        group: group.name.clone(),
        seed: opts.seed,
        tolerances: group.tol,
        entries,
        wall_time: start.elapsed().as_secs_f64(),
    })
}

// Shared inputs.

fn mild_element(rng: &mut Rng64, g: &Group) -> DMatrix<f64> {
    g.exp(&random::algebra_element(rng, g, 0.5))
}

fn random_a(rng: &mut Rng64, g: &Group) -> DMatrix<f64> {
    g.a_from_log(&random::a_log(rng, g))
}

/// Corrupt a subspace by a small random tilt.
fn perturbed(rng: &mut Rng64, g: &Group, h: &Subalgebra) -> Subalgebra {
    let noise = DMatrix::from_fn(h.ambient_dim(), h.dim(), |_, _| rng.random_range(-1e-3..=1e-3));
    Subalgebra::span(&(h.basis() + noise), g.tol.rank)
}

fn degenerate_sign_representatives(g: &Group) -> Vec<DeformationParameter> {
    SignVector::all(g.n_simple())
        .into_iter()
        .filter(|s| s.0.contains(&0))
        .map(|s| s.as_parameter())
        .collect()
}

fn worst(values: impl IntoIterator<Item = f64>) -> f64 {
    // NaN propagates as a failure.
    values.into_iter().fold(0.0, |m, x| if x.is_nan() || m.is_nan() { f64::NAN } else { m.max(x) })
}

/// `resid / tol` of an arrow comparison; infinite when the bases differ.
fn eq_ratio(g: &Group, a: &Arrow, b: &Arrow) -> Result<f64> {
    Ok(match arrow_eq_residual(g, a, b)? {
        Some((r, t)) => r / t,
        None => f64::INFINITY,
    })
}

fn matrix_ratio(g: &Group, x: &DMatrix<f64>, y: &DMatrix<f64>) -> f64 {
    (x - y).norm() / (g.tol.alg * x.norm().max(1.0))
}

fn random_chart_arrow(rng: &mut Rng64, g: &Group, t1: DeformationParameter) -> Result<ChartArrow> {
    let n2 = random::n_element(rng, g);
    let a = random_a(rng, g);
    let n1 = random::n_element(rng, g);
    ChartArrow::new(g, n2, a, n1, t1)
}

fn composable_chart_pair(rng: &mut Rng64, g: &Group, t1: DeformationParameter) -> Result<(ChartArrow, ChartArrow)> {
    let w1 = random_chart_arrow(rng, g, t1)?;
    let n3 = random::n_element(rng, g);
    let a2 = random_a(rng, g);
    let w2 = ChartArrow::new(g, n3, a2, w1.n2.clone(), w1.t2.clone())?;
    Ok((w2, w1))
}

// Lie algebra level.

fn check_subalgebra(ctx: &mut Ctx) -> Result<Outcome> {
    let g = ctx.group;
    let ts = random::parameters(&mut ctx.rng, g, 200);
    let mut out = Vec::with_capacity(ts.len());
    for t in &ts {
        let mut h = h_t_basis(g, t)?;
        if ctx.fault {
            h = perturbed(&mut ctx.rng, g, &h);
        }
        let dim_ok = h.dim() == g.k_space.ncols();
        out.push(if dim_ok { h.closure_residual(g) } else { f64::INFINITY });
    }
    Ok(Outcome {
        samples: ts.len(),
        max_residual: worst(out),
        tolerance: 1e-9,
    })
}

fn check_equivariance(ctx: &mut Ctx) -> Result<Outcome> {
    let g = ctx.group;
    let ts = random::parameters(&mut ctx.rng, g, 200);
    let mut out = Vec::with_capacity(ts.len());
    for t in &ts {
        let log_a = random::a_log(&mut ctx.rng, g);
        let mut lhs = h_t_basis(g, &a_action_log(g, &log_a, t))?;
        if ctx.fault {
            lhs = perturbed(&mut ctx.rng, g, &lhs);
        }
        let rhs = h_t_basis(g, t)?.image(&g.adjoint(&g.a_from_log(&log_a))?, g.tol.rank);
        out.push(lhs.distance(&rhs)?);
    }
    Ok(Outcome {
        samples: ts.len(),
        max_residual: worst(out),
        tolerance: 1e-9,
    })
}

fn check_normalizer(ctx: &mut Ctx) -> Result<Outcome> {
    let g = ctx.group;
    let subsets = all_subsets(g.n_simple());
    let mut mismatch = 0.0f64;
    for s in &subsets {
        let pd = parabolic_datum(g, s)?;
        let nz = normalizer_subalgebra(g, &pd.h_i);
        mismatch = mismatch.max((nz.dim() as f64 - (pd.a_i.dim() + pd.h_i.dim()) as f64).abs());
    }
    Ok(Outcome {
        samples: subsets.len(),
        max_residual: mismatch,
        tolerance: 0.0,
    })
}

fn check_nilpotent(ctx: &mut Ctx) -> Result<Outcome> {
    let g = ctx.group;
    let data: Vec<_> = all_subsets(g.n_simple())
        .iter()
        .map(|s| parabolic_datum(g, s))
        .collect::<Result<_>>()?;
    let mut failures = 0usize;
    let mut samples = 0usize;
    for pd in &data {
        for y in pd.nbar_i.basis().column_iter() {
            samples += 1;
            if !is_ad_nilpotent(g, &y.into_owned()) {
                failures += 1;
            }
        }
    }
    let mixed: Vec<_> = data.iter().filter(|pd| pd.k_i.dim() > 0).collect();
    for i in 0..if mixed.is_empty() { 0 } else { 100 } {
        let pd = mixed[i % mixed.len()];
        let y = loop {
            let c = DVector::from_fn(pd.k_i.dim(), |_, _| ctx.rng.random_range(-1.0..=1.0));
            if c.norm() > 0.1 {
                break pd.k_i.basis() * c;
            }
        };
        let c = DVector::from_fn(pd.nbar_i.dim(), |_, _| ctx.rng.random_range(-1.0..=1.0));
        let z = pd.nbar_i.basis() * c;
        samples += 1;
        if is_ad_nilpotent(g, &(y + z)) {
            failures += 1;
        }
    }
    Ok(Outcome {
        samples,
        max_residual: failures as f64,
        tolerance: 0.0,
    })
}

fn check_transversality(ctx: &mut Ctx) -> Result<Outcome> {
    let g = ctx.group;
    let a = Subalgebra::span(&g.a_coords, g.tol.rank);
    let n = g.roots.n_space();
    let ts = random::parameters(&mut ctx.rng, g, 200);
    let mut deficit = 0usize;
    for t in &ts {
        let h = h_t_basis(g, t)?;
        let rank = Subalgebra::stacked_rank(&[&h, &a, &n], g.tol.rank);
        let total = h.dim() + a.dim() + n.dim();
        deficit = deficit.max(g.dim_g.abs_diff(rank)).max(g.dim_g.abs_diff(total));
    }
    Ok(Outcome {
        samples: ts.len(),
        max_residual: deficit as f64,
        tolerance: 0.0,
    })
}

fn check_factorization(ctx: &mut Ctx) -> Result<Outcome> {
    let g = ctx.group;
    let mut out = Vec::new();
    for _ in 0..500 {
        let x = random::group_element(&mut ctx.rng, g);
        for mode in [FactorMode::Kan, FactorMode::Nak, FactorMode::Kak] {
            let (p, q, r) = g.factorize(&x, mode)?;
            out.push((p * q * r - &x).norm() / x.norm());
        }
    }
    Ok(Outcome {
        samples: out.len(),
        max_residual: worst(out),
        tolerance: 1e-9,
    })
}

// Fell topology.

fn sample_at(g: &Group, t: &DeformationParameter, seed: u64) -> Result<SampledClosedSet> {
    sample_subgroup(&SampledSubgroup::h_t(g, t)?, WINDOW_RADIUS, NET_STEP, seed)
}

/// `t_I + 2⁻ⁿ` on the coordinates of `j`, zero elsewhere.
fn path_point(t_i: &DeformationParameter, j: &[usize]) -> DeformationParameter {
    let eps = 2f64.powi(-PATH_EXPONENT);
    DeformationParameter(
        t_i.0
            .iter()
            .enumerate()
            .map(|(k, &x)| if j.contains(&k) { x + eps } else { 0.0 })
            .collect(),
    )
}

fn check_fell_limit(ctx: &mut Ctx) -> Result<Outcome> {
    let g = ctx.group;
    let p = g.n_simple();
    let everything: Vec<usize> = (0..p).collect();
    let subsets = all_subsets(p);
    let tolerance = if p == 1 { 1e-2 } else { 5.0 * NET_STEP };
    let mut out = Vec::new();
    for s in &subsets {
        let t_i = orbit_representative(g, s)?;
        let limit = sample_at(g, &t_i, ctx.seed)?;
        let approach = sample_at(g, &path_point(&t_i, &everything), ctx.seed)?;
        out.push(local_hausdorff(&approach, &limit)?);
    }
    Ok(Outcome {
        samples: subsets.len(),
        max_residual: worst(out),
        tolerance,
    })
}

fn check_closure_order(ctx: &mut Ctx) -> Result<Outcome> {
    let g = ctx.group;
    let threshold = 5.0 * NET_STEP;
    let subsets = all_subsets(g.n_simple());
    let reps: Vec<_> = subsets.iter().map(|s| orbit_representative(g, s)).collect::<Result<_>>()?;
    let limits: Vec<_> = reps.iter().map(|t| sample_at(g, t, ctx.seed)).collect::<Result<_>>()?;
    let mut out = Vec::new();
    for (t_i, (i, limit)) in reps.iter().zip(subsets.iter().zip(&limits)) {
        for j in &subsets {
            let path = sample_at(g, &path_point(t_i, j), ctx.seed)?;
            let contained = i.iter().all(|k| j.contains(k));
            out.push(if contained {
                local_hausdorff_bounded(&path, limit, NET_STEP / 5.0, threshold)? / threshold
            } else {
                threshold / local_hausdorff_capped(&path, limit, threshold)?
            });
        }
    }
    Ok(Outcome {
        samples: out.len(),
        max_residual: worst(out),
        tolerance: 1.0,
    })
}

// Oshima space.

fn random_point(rng: &mut Rng64, g: &Group, t: DeformationParameter) -> OshimaPoint {
    OshimaPoint::new(mild_element(rng, g), t)
}

fn check_orbit_count(ctx: &mut Ctx) -> Result<Outcome> {
    let g = ctx.group;
    let p = g.n_simple();
    let expected = 3usize.pow(p as u32);
    let ts = random::parameters(&mut ctx.rng, g, 4 * expected);
    let mut classes = Vec::new();
    let mut broken = 0usize;
    for t in ts {
        let x = random_point(&mut ctx.rng, g, t);
        let c = orbit_class(&x);
        let moved = x.act(&mild_element(&mut ctx.rng, g));
        if orbit_class(&moved) != c {
            broken += 1;
        }
        match canonicalize(g, &x) {
            Ok(chart) if chart.t.sign() != c => broken += 1,
            Ok(_) | Err(Error::NotInChart) => {}
            Err(e) => return Err(e),
        }
        classes.push(c);
    }
    let samples = classes.len();
    classes.sort();
    classes.dedup();
    Ok(Outcome {
        samples,
        max_residual: (classes.len().abs_diff(expected) + broken) as f64,
        tolerance: 0.0,
    })
}

fn check_satake_count(ctx: &mut Ctx) -> Result<Outcome> {
    let g = ctx.group;
    let p = g.n_simple();
    let ts = random::parameters(&mut ctx.rng, g, 4 * 3usize.pow(p as u32));
    let samples = ts.len();
    let mut classes: Vec<_> = ts
        .into_iter()
        .map(|t| random_point(&mut ctx.rng, g, t))
        .filter(satake_member)
        .map(|x| orbit_class(&x))
        .collect();
    classes.sort();
    classes.dedup();
    Ok(Outcome {
        samples,
        max_residual: classes.len().abs_diff(1 << p) as f64,
        tolerance: 0.0,
    })
}

fn check_compactness(ctx: &mut Ctx) -> Result<Outcome> {
    let g = ctx.group;
    let mut out = Vec::with_capacity(500);
    for _ in 0..500 {
        let t = random::nondegenerate_parameter(&mut ctx.rng, g);
        let x = OshimaPoint::new(random::group_element(&mut ctx.rng, g), t);
        let (q, resid) = compactness_witness(g, &x)?;
        let outside = (max_abs_t(&q) - 1.0).max(0.0);
        let not_k = if g.k_membership(&q.g, 1e-8) { 0.0 } else { f64::INFINITY };
        out.push(resid.max(outside).max(not_k));
    }
    Ok(Outcome {
        samples: out.len(),
        max_residual: worst(out),
        tolerance: 1e-8,
    })
}

fn check_sphere_equivariance(ctx: &mut Ctx) -> Result<Outcome> {
    let g = ctx.group;
    let ts = random::parameters(&mut ctx.rng, g, 1000);
    let mut out = Vec::with_capacity(ts.len());
    for t in ts {
        let x = OshimaPoint::new(random::group_element(&mut ctx.rng, g), t);
        let gamma = random::group_element(&mut ctx.rng, g);
        let lhs = sl2_sphere(g, &x.act(&gamma))?;
        let rhs = mobius(&gamma, sl2_sphere(g, &x)?);
        out.push(lhs.chordal_distance(&rhs));
    }
    Ok(Outcome {
        samples: out.len(),
        max_residual: worst(out),
        tolerance: 1e-9,
    })
}

fn check_sphere_orbits(ctx: &mut Ctx) -> Result<Outcome> {
    let g = ctx.group;
    let ts = random::parameters(&mut ctx.rng, g, 300);
    let samples = ts.len();
    let mut hit = [false; 3];
    let mut wrong = 0usize;
    for t in ts {
        let s = t.0[0].signum() as i32 * (t.0[0] != 0.0) as i32;
        let x = OshimaPoint::new(random::group_element(&mut ctx.rng, g), t);
        let side = match sl2_sphere(g, &x)? {
            ExtendedComplex::Infinity => 0,
            ExtendedComplex::Finite(z) if z.im.abs() <= 1e-12 * z.norm().max(1.0) => 0,
            ExtendedComplex::Finite(z) => z.im.signum() as i32,
        };
        if side != s {
            wrong += 1;
        }
        hit[(side + 1) as usize] = true;
    }
    let missed = hit.iter().filter(|h| !**h).count();
    Ok(Outcome {
        samples,
        max_residual: (wrong + missed) as f64,
        tolerance: 0.0,
    })
}

fn check_sphere_well_defined(ctx: &mut Ctx) -> Result<Outcome> {
    let g = ctx.group;
    let ts = random::parameters(&mut ctx.rng, g, 200);
    let mut out = Vec::with_capacity(ts.len());
    for t in ts {
        let x = OshimaPoint::new(random::group_element(&mut ctx.rng, g), t.clone());
        // [[g h a, a⁻¹·t]] = [[g, t]].
        let h = random::h_word(&mut ctx.rng, g, &t)?;
        let log_a = random::a_log(&mut ctx.rng, g);
        let y = OshimaPoint::new(&x.g * h * g.a_from_log(&log_a), a_action_log(g, &(-&log_a), &t));
        out.push(sl2_sphere(g, &x)?.chordal_distance(&sl2_sphere(g, &y)?));
    }
    Ok(Outcome {
        samples: out.len(),
        max_residual: worst(out),
        tolerance: 1e-9,
    })
}

// Groupoids.

fn check_groupoid_axioms(ctx: &mut Ctx) -> Result<Outcome> {
    let g = ctx.group;
    let ts = random::parameters(&mut ctx.rng, g, 1000);
    let mut out = Vec::with_capacity(ts.len());
    for t in ts {
        let base = random_point(&mut ctx.rng, g, t);
        let [g1, g2, g3] = [(); 3].map(|_| mild_element(&mut ctx.rng, g));
        let a1 = Arrow::new(g1, base);
        let a2 = Arrow::new(g2, a1.target());
        let a3 = Arrow::new(g3, a2.target());
        let left = compose(g, &compose(g, &a3, &a2)?, &a1)?;
        let right = compose(g, &a3, &compose(g, &a2, &a1)?)?;
        let assoc = matrix_ratio(g, &left.gamma, &right.gamma).max(eq_ratio(g, &left, &right)?);
        let unit_r = eq_ratio(g, &compose(g, &a1, &Arrow::unit(&a1.source()))?, &a1)?;
        let unit_l = eq_ratio(g, &compose(g, &Arrow::unit(&a1.target()), &a1)?, &a1)?;
        let inv = inverse(&a1)?;
        let inv_r = eq_ratio(g, &compose(g, &inv, &a1)?, &Arrow::unit(&a1.source()))?;
        let inv_l = eq_ratio(g, &compose(g, &a1, &inv)?, &Arrow::unit(&a1.target()))?;
        out.push(worst([assoc, unit_r, unit_l, inv_r, inv_l]));
    }
    Ok(Outcome {
        samples: out.len(),
        max_residual: worst(out),
        tolerance: 1.0,
    })
}

fn check_representative_change(ctx: &mut Ctx) -> Result<Outcome> {
    let g = ctx.group;
    let ts = random::parameters(&mut ctx.rng, g, 100);
    let mut out = Vec::with_capacity(ts.len());
    for t in ts {
        let base = random_point(&mut ctx.rng, g, t.clone());
        let arrow = Arrow::new(mild_element(&mut ctx.rng, g), base.clone());
        let g_inv = base.g.clone().try_inverse().ok_or(Error::NumericalBreakdown("singular base".into()))?;
        // γ ↦ γ·(g w g⁻¹) with w ∈ H_t.
        let w = random::h_word(&mut ctx.rng, g, &t)?;
        let changed_gamma = Arrow::new(&arrow.gamma * &base.g * w * &g_inv, base.clone());
        // [[g, t]] ↦ [[g w a, a⁻¹·t]].
        let w = random::h_word(&mut ctx.rng, g, &t)?;
        let log_a = random::a_log(&mut ctx.rng, g);
        let other_base = OshimaPoint::new(&base.g * w * g.a_from_log(&log_a), a_action_log(g, &(-&log_a), &t));
        let changed_base = Arrow::new(arrow.gamma.clone(), other_base);
        out.push(eq_ratio(g, &changed_gamma, &arrow)?.max(eq_ratio(g, &changed_base, &arrow)?));
    }
    Ok(Outcome {
        samples: out.len(),
        max_residual: worst(out),
        tolerance: 1.0,
    })
}

fn check_chart_roundtrip(ctx: &mut Ctx) -> Result<Outcome> {
    let g = ctx.group;
    let ts = random::parameters(&mut ctx.rng, g, 200);
    let mut out = Vec::with_capacity(ts.len());
    for t in ts {
        let w = random_chart_arrow(&mut ctx.rng, g, t)?;
        out.push(chart_iso_inv(g, &chart_iso(g, &w)?)?.distance(&w));
    }
    Ok(Outcome {
        samples: out.len(),
        max_residual: worst(out),
        tolerance: g.tol.fact,
    })
}

fn check_chart_homomorphism(ctx: &mut Ctx) -> Result<Outcome> {
    let g = ctx.group;
    let ts = random::parameters(&mut ctx.rng, g, 200);
    let mut out = Vec::with_capacity(ts.len());
    for t in ts {
        let (w2, w1) = composable_chart_pair(&mut ctx.rng, g, t)?;
        let direct = chart_iso(g, &chart_compose(g, &w2, &w1)?)?;
        let composed = compose(g, &chart_iso(g, &w2)?, &chart_iso(g, &w1)?)?;
        out.push(eq_ratio(g, &direct, &composed)?);
    }
    Ok(Outcome {
        samples: out.len(),
        max_residual: worst(out),
        tolerance: 1.0,
    })
}

fn check_functoriality(ctx: &mut Ctx) -> Result<Outcome> {
    let g = ctx.group;
    let ts = random::parameters(&mut ctx.rng, g, 200);
    let mut out = Vec::with_capacity(ts.len());
    for t in ts {
        let (w2, w1) = composable_chart_pair(&mut ctx.rng, g, t)?;
        let direct = oshima_to_b(g, &chart_compose(g, &w2, &w1)?)?;
        let composed = model_compose(&oshima_to_b(g, &w2)?, &oshima_to_b(g, &w1)?)?;
        out.push(direct.distance(&composed));
    }
    Ok(Outcome {
        samples: out.len(),
        max_residual: worst(out),
        tolerance: 1e-12,
    })
}

fn check_a_of_t(ctx: &mut Ctx) -> Result<Outcome> {
    let g = ctx.group;
    let ts = random::parameters(&mut ctx.rng, g, 200);
    let mut out = Vec::with_capacity(ts.len());
    for t in ts {
        let b = oshima_to_b(g, &random_chart_arrow(&mut ctx.rng, g, t)?)?;
        let p = b.p();
        let frames: Vec<f64> = (0..p).filter(|&j| b.m1[j] == 0.0).map(|j| b.a[j]).collect();
        let a = a_of_t(&b.m2, &frames, &b.m1, p)?;
        let rebuilt = ModelBArrow {
            m2: b.m2.clone(),
            a: a.clone(),
            m1: b.m1.clone(),
        };
        let gap = a
            .iter()
            .zip(&b.a)
            .map(|(x, y)| (x - y).abs() / y.abs().max(1.0))
            .fold(0.0, f64::max);
        out.push(gap.max(rebuilt.residual()));
    }
    Ok(Outcome {
        samples: out.len(),
        max_residual: worst(out),
        tolerance: 1e-12,
    })
}

/// Normal derivatives at every degenerate sign representative, `per_point`
/// elements each, compared with `expected`.
fn normal_derivatives(
    ctx: &mut Ctx,
    per_point: usize,
    mut element: impl FnMut(&mut Rng64, &Group, &DeformationParameter, usize) -> Result<(DMatrix<f64>, f64)>,
) -> Result<Outcome> {
    let g = ctx.group;
    let mut out = Vec::new();
    for t0 in degenerate_sign_representatives(g) {
        let zeros: Vec<usize> = (0..t0.len()).filter(|&k| t0.0[k] == 0.0).collect();
        for i in 0..per_point {
            let alpha = zeros[i % zeros.len()];
            let (x, expected) = element(&mut ctx.rng, g, &t0, alpha)?;
            out.push((normal_derivative(g, &x, &t0, alpha)? - expected).abs());
        }
    }
    Ok(Outcome {
        samples: out.len(),
        max_residual: worst(out),
        tolerance: 1e-5,
    })
}

fn check_normal_derivative_h(ctx: &mut Ctx) -> Result<Outcome> {
    normal_derivatives(ctx, 50, |rng, g, t0, _| Ok((random::h_word(rng, g, t0)?, 1.0)))
}

fn check_normal_derivative_a(ctx: &mut Ctx) -> Result<Outcome> {
    normal_derivatives(ctx, 10, |rng, g, _, alpha| {
        let log_a = random::a_log(rng, g);
        Ok((g.a_from_log(&log_a), g.simple_weights(&log_a)[alpha]))
    })
}

fn check_normal_derivative_n(ctx: &mut Ctx) -> Result<Outcome> {
    normal_derivatives(ctx, 10, |rng, g, _, _| Ok((random::n_element(rng, g), 1.0)))
}
