//! Command handlers. Each returns the JSON document to print.

use clap::Args;
use nalgebra::{DMatrix, DVector};
use serde_json::{json, Value};

use satake_core::bgroupoid::{a_of_t, model_compose, model_inverse, normal_derivative, ModelBArrow, FD_STEP};
use satake_core::degeneration::{h_t_basis, split_k_n, t_pow_2gamma, DeformationParameter, SampledSubgroup};
use satake_core::fell::{local_hausdorff, sample_subgroup};
use satake_core::groupoid::{self, arrow_eq, labels_equivalent, orbit_reduction, Arrow};
use satake_core::lie::Group;
use satake_core::linalg;
use satake_core::oshima::{
    atlas, canonicalize_in, orbit_class, orbit_representative, satake_member, sl2_sphere, ExtendedComplex,
    OshimaPoint,
};
use satake_core::parabolic::{normalizer_subalgebra, parabolic_datum};
use satake_core::subspace::Subalgebra;
use satake_core::verify::{verify_suite, VerifyOptions};
use satake_core::Error;

use crate::{parse, render, CliError, Emit, Output, Settings, SCHEMA_VERSION};

fn mat(m: &DMatrix<f64>) -> Value {
    json!(linalg::to_rows(m))
}

fn mats(group: &Group, s: &Subalgebra) -> Value {
    Value::Array(s.matrices(group).iter().map(mat).collect())
}

fn done(s: &Settings, command: &str, mut body: Value) -> Result<Output, CliError> {
    let obj = body.as_object_mut().expect("command bodies are objects");
    obj.insert("schema_version".into(), json!(SCHEMA_VERSION));
    obj.insert("command".into(), json!(command));
    obj.insert("group".into(), json!(s.group.name));
    Ok(Output {
        text: render(&body, s.indent),
        ok: true,
    })
}

/// First chart of the atlas containing `p`.
fn chart_json(group: &Group, p: &OshimaPoint) -> Result<Value, CliError> {
    for i in 0..atlas(group).len() {
        match canonicalize_in(group, p, i) {
            Ok(c) => return Ok(json!({ "chart": c.chart, "n": mat(&c.n), "t": c.t.0 })),
            Err(Error::NotInChart) => continue,
            Err(e) => return Err(e.into()),
        }
    }
    Ok(Value::Null)
}

fn arrow_json(group: &Group, a: &Arrow) -> Result<Value, CliError> {
    Ok(json!({
        "gamma": mat(&a.gamma),
        "g": mat(&a.base.g),
        "t": a.base.t.0,
        "source_chart": chart_json(group, &a.source())?,
        "target_chart": chart_json(group, &a.target())?,
    }))
}

pub fn roots(s: &Settings) -> Result<Output, CliError> {
    let g = &s.group;
    let roots: Vec<Value> = g
        .roots
        .positive
        .iter()
        .enumerate()
        .map(|(i, r)| {
            json!({
                "index": i,
                "simple": i < g.n_simple(),
                "coefficients": r.coefficients,
                "height": r.height(),
                "values_on_a_basis": r.values.as_slice(),
                "multiplicity": r.multiplicity(),
                "root_space": mats(g, &Subalgebra::from_orthonormal(r.basis.clone())),
            })
        })
        .collect();
    let cartan = g.roots.cartan_matrix();
    done(
        s,
        "roots",
        json!({
            "dim_g": g.dim_g,
            "rank_a": g.rank_a(),
            "n_simple": g.n_simple(),
            "dim_m": g.roots.m_basis.ncols(),
            "positive_roots": roots,
            "cartan_matrix": linalg::to_rows(&cartan),
        }),
    )
}

pub fn parabolic(s: &Settings, subset: &str) -> Result<Output, CliError> {
    let g = &s.group;
    let subset = parse::subset(g, subset)?;
    let pd = parabolic_datum(g, &subset)?;
    let (a, m, n, k, h) = pd.dims();
    done(
        s,
        "parabolic",
        json!({
            "subset": parse::subset_name(&pd.subset),
            "dims": { "a_I": a, "m_I": m, "n_I": n, "nbar_I": pd.nbar_i.dim(), "k_I": k, "h_I": h, "p_I": pd.p_i.dim() },
            "normalizer_dim": normalizer_subalgebra(g, &pd.h_i).dim(),
            "semidirect_residual": pd.semidirect_residual(g),
            "bases": {
                "a_I": mats(g, &pd.a_i),
                "m_I": mats(g, &pd.m_i),
                "n_I": mats(g, &pd.n_i),
                "nbar_I": mats(g, &pd.nbar_i),
                "k_I": mats(g, &pd.k_i),
                "h_I": mats(g, &pd.h_i),
            },
            "m_representatives": pd.m_representatives.iter().map(mat).collect::<Vec<_>>(),
        }),
    )
}

pub fn deform(s: &Settings, t: &str, emit: Emit, radius: f64, net_step: f64, max_points: usize) -> Result<Output, CliError> {
    let g = &s.group;
    let t = parse::parameter(g, t)?;
    match emit {
        Emit::Basis => {
            let h = h_t_basis(g, &t)?;
            let (k_t, n_t) = split_k_n(g, &t)?;
            let weights = (0..g.roots.positive.len())
                .map(|r| t_pow_2gamma(g, &t, r))
                .collect::<Result<Vec<_>, _>>()?;
            done(
                s,
                "deform",
                json!({
                    "t": t.0,
                    "t_pow_2gamma": weights,
                    "dim_h": h.dim(),
                    "closure_residual": h.closure_residual(g),
                    "dim_k_t": k_t.dim(),
                    "dim_n_t": n_t.dim(),
                    "basis": mats(g, &h),
                }),
            )
        }
        Emit::Sample => {
            let sample = sample_subgroup(&SampledSubgroup::h_t(g, &t)?, radius, net_step, s.seed)?;
            done(
                s,
                "deform",
                json!({
                    "t": t.0,
                    "radius": radius,
                    "net_step": net_step,
                    "seed": s.seed,
                    "count": sample.len(),
                    "halo_count": sample.halo.len(),
                    "points": sample.points.iter().take(max_points).map(mat).collect::<Vec<_>>(),
                }),
            )
        }
    }
}

pub fn fell_limit(
    s: &Settings,
    path: &str,
    steps: u32,
    limit: &str,
    radius: f64,
    net_step: f64,
    csv: bool,
) -> Result<Output, CliError> {
    let g = &s.group;
    let compact: String = path.chars().filter(|c| !c.is_whitespace()).collect();
    if compact != "t=2^-n" {
        return Err(CliError::Usage(format!("unsupported path {path:?}; use \"t=2^-n\"")));
    }
    if steps == 0 || steps > 52 {
        return Err(CliError::Usage("steps must lie in 1..=52".into()));
    }
    let subset = parse::subset(g, limit)?;
    let t_i = orbit_representative(g, &subset)?;
    let target = sample_subgroup(&SampledSubgroup::h_t(g, &t_i)?, radius, net_step, s.seed)?;
    let mut rows = Vec::new();
    for n in 1..=steps {
        let eps = 2f64.powi(-(n as i32));
        let t = DeformationParameter(t_i.0.iter().map(|x| x + eps).collect());
        let sample = sample_subgroup(&SampledSubgroup::h_t(g, &t)?, radius, net_step, s.seed)?;
        rows.push((n, t, local_hausdorff(&sample, &target)?));
    }
    if csv {
        let mut text = String::from("n,");
        text += &(1..=g.n_simple()).map(|k| format!("t{k}")).collect::<Vec<_>>().join(",");
        text += ",window_distance";
        for (n, t, d) in &rows {
            let ts: Vec<String> = t.0.iter().map(|x| x.to_string()).collect();
            text += &format!("\n{n},{},{d}", ts.join(","));
        }
        return Ok(Output { text, ok: true });
    }
    done(
        s,
        "fell-limit",
        json!({
            "path": "t=2^-n",
            "limit_subset": parse::subset_name(&subset),
            "limit_t": t_i.0,
            "radius": radius,
            "net_step": net_step,
            "seed": s.seed,
            "rows": rows.iter().map(|(n, t, d)| json!({ "n": n, "t": t.0, "window_distance": d })).collect::<Vec<_>>(),
        }),
    )
}

fn point(s: &Settings, g: Option<&str>, t: &str) -> Result<OshimaPoint, CliError> {
    let group = &s.group;
    let t = parse::parameter(group, t)?;
    let g = match g {
        Some(text) => parse::matrix(group, text)?,
        None => DMatrix::identity(group.n, group.n),
    };
    group.check_element(&g)?;
    Ok(OshimaPoint::new(g, t))
}

pub fn orbit(s: &Settings, t: &str, g: Option<&str>) -> Result<Output, CliError> {
    let group = &s.group;
    let p = point(s, g, t)?;
    let class = orbit_class(&p);
    let support = class.support();
    done(
        s,
        "orbit",
        json!({
            "t": p.t.0,
            "sign": class.0,
            "subset": parse::subset_name(&support),
            "dense": p.t.is_nondegenerate(),
            "satake": satake_member(&p),
            "orbit_representative": orbit_representative(group, &support)?.0,
            "chart": chart_json(group, &p)?,
        }),
    )
}

pub fn sphere(s: &Settings, g: Option<&str>, t: &str) -> Result<Output, CliError> {
    let p = point(s, g, t)?;
    let value = match sl2_sphere(&s.group, &p)? {
        ExtendedComplex::Infinity => json!("infinity"),
        ExtendedComplex::Finite(z) => json!({ "re": z.re, "im": z.im }),
    };
    let region = match p.t.0[0] {
        x if x > 0.0 => "upper half-plane",
        x if x < 0.0 => "lower half-plane",
        _ => "real line",
    };
    done(s, "sphere", json!({ "t": p.t.0, "value": value, "orbit": region }))
}

pub fn compose(s: &Settings, arrow1: &str, arrow2: &str) -> Result<Output, CliError> {
    let g = &s.group;
    let a1 = parse::arrow(g, arrow1)?;
    let a2 = parse::arrow(g, arrow2)?;
    let c = groupoid::compose(g, &a2, &a1)?;
    done(s, "compose", json!({ "composite": arrow_json(g, &c)? }))
}

pub fn reduce(s: &Settings, orbit: &str, arrow: Option<&str>, other: Option<&str>) -> Result<Output, CliError> {
    let g = &s.group;
    let subset = parse::subset(g, orbit)?;
    let t_i = orbit_representative(g, &subset)?;
    let a = match arrow {
        Some(text) => parse::arrow(g, text)?,
        None => Arrow::unit(&OshimaPoint::base(g, t_i.clone())),
    };
    let labels = orbit_reduction(g, &a, &subset)?;
    let pd = parabolic_datum(g, &subset)?;
    let mut body = json!({
        "orbit_subset": parse::subset_name(&subset),
        "t_I": t_i.0,
        "dim_a_I": pd.a_i.dim(),
        "dim_h_I": pd.h_i.dim(),
        "x2": mat(&labels.x2),
        "x1": mat(&labels.x1),
    });
    if let Some(text) = other {
        let b = parse::arrow(g, text)?;
        let other_labels = orbit_reduction(g, &b, &subset)?;
        let obj = body.as_object_mut().expect("object");
        obj.insert("labels_equivalent".into(), json!(labels_equivalent(g, &labels, &other_labels)?));
        obj.insert("arrows_equal".into(), json!(arrow_eq(g, &a, &b)?));
    }
    done(s, "reduce", body)
}

#[derive(Debug, Args)]
pub struct BmodelArgs {
    /// Compose `--b2 ∘ --b1`.
    #[arg(long)]
    compose: bool,
    /// Invert `--b1`.
    #[arg(long)]
    inverse: bool,
    /// Normal derivative at `[[x, t0]]` along `--alpha`.
    #[arg(long = "normal-derivative")]
    normal_derivative: bool,
    /// Evaluate `a(T)` for `--m2`, `--frames`, `--m1`.
    #[arg(long = "a-of-t")]
    a_of_t: bool,
    /// JSON `{"m2": [..], "a": [..], "m1": [..]}`.
    #[arg(long)]
    b2: Option<String>,
    #[arg(long)]
    b1: Option<String>,
    /// Group element as a matrix, rows separated by `;`.
    #[arg(long, allow_hyphen_values = true)]
    word: Option<String>,
    /// Word `j:c,...` meaning the product of `exp(c·Y_j)` over an orthonormal basis of `h_t0`.
    #[arg(long = "h-word", allow_hyphen_values = true)]
    h_word: Option<String>,
    /// Element of `A` by its logarithm in the `a` basis.
    #[arg(long = "a-log", allow_hyphen_values = true)]
    a_log: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    t0: Option<String>,
    /// One-based simple root index.
    #[arg(long)]
    alpha: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    m2: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    m1: Option<String>,
    /// Normal scalings `T_j` at the hyperplanes through `m1`.
    #[arg(long, allow_hyphen_values = true, default_value = "")]
    frames: String,
    /// Number of hyperplanes; defaults to the length of `m1`.
    #[arg(long)]
    p: Option<usize>,
}

fn required<'a>(value: &'a Option<String>, flag: &str) -> Result<&'a str, CliError> {
    value.as_deref().ok_or_else(|| CliError::Usage(format!("missing --{flag}")))
}

fn model(text: &str) -> Result<ModelBArrow, CliError> {
    let lit = parse::model_arrow(text)?;
    Ok(ModelBArrow::new(lit.m2, lit.a, lit.m1)?)
}

fn model_json(b: &ModelBArrow) -> Value {
    json!({ "m2": b.m2, "a": b.a, "m1": b.m1 })
}

pub fn bmodel(s: &Settings, args: &BmodelArgs) -> Result<Output, CliError> {
    let modes = [args.compose, args.inverse, args.normal_derivative, args.a_of_t];
    if modes.iter().filter(|m| **m).count() != 1 {
        return Err(CliError::Usage(
            "choose exactly one of --compose, --inverse, --normal-derivative, --a-of-t".into(),
        ));
    }
    if args.compose {
        let b2 = model(required(&args.b2, "b2")?)?;
        let b1 = model(required(&args.b1, "b1")?)?;
        let c = model_compose(&b2, &b1)?;
        return done(s, "bmodel", json!({ "mode": "compose", "composite": model_json(&c) }));
    }
    if args.inverse {
        let b1 = model(required(&args.b1, "b1")?)?;
        return done(s, "bmodel", json!({ "mode": "inverse", "inverse": model_json(&model_inverse(&b1)) }));
    }
    if args.a_of_t {
        let m2 = parse::reals(required(&args.m2, "m2")?)?;
        let m1 = parse::reals(required(&args.m1, "m1")?)?;
        let frames = parse::reals(&args.frames)?;
        let p = args.p.unwrap_or(m1.len());
        let a = a_of_t(&m2, &frames, &m1, p)?;
        return done(s, "bmodel", json!({ "mode": "a-of-t", "a": a }));
    }
    normal_derivative_cmd(s, args)
}

fn normal_derivative_cmd(s: &Settings, args: &BmodelArgs) -> Result<Output, CliError> {
    let g = &s.group;
    let t0 = parse::parameter(g, required(&args.t0, "t0")?)?;
    let alpha = match args.alpha {
        Some(k) if k >= 1 && k <= g.n_simple() => k - 1,
        Some(k) => return Err(CliError::Usage(format!("alpha must lie in 1..={}, got {k}", g.n_simple()))),
        None => return Err(CliError::Usage("missing --alpha".into())),
    };
    let given = [&args.word, &args.h_word, &args.a_log].iter().filter(|x| x.is_some()).count();
    if given != 1 {
        return Err(CliError::Usage("give exactly one of --word, --h-word, --a-log".into()));
    }
    let (x, expected) = if let Some(text) = &args.word {
        let x = parse::matrix(g, text)?;
        g.check_element(&x)?;
        (x, None)
    } else if let Some(text) = &args.h_word {
        let h = h_t_basis(g, &t0)?;
        let mut x = DMatrix::identity(g.n, g.n);
        for (j, c) in parse::h_word(text)? {
            if j >= h.dim() {
                return Err(CliError::Usage(format!("generator index {j} ≥ dim h_t0 = {}", h.dim())));
            }
            x *= g.exp(&(h.basis().column(j) * c));
        }
        (x, Some(1.0))
    } else {
        let log = parse::reals(required(&args.a_log, "a-log")?)?;
        if log.len() != g.rank_a() {
            return Err(CliError::Usage(format!("a-log needs {} entries", g.rank_a())));
        }
        let log = DVector::from_vec(log);
        (g.a_from_log(&log), Some(g.simple_weights(&log)[alpha]))
    };
    let d = normal_derivative(g, &x, &t0, alpha)?;
    done(
        s,
        "bmodel",
        json!({
            "mode": "normal-derivative",
            "t0": t0.0,
            "alpha": alpha + 1,
            "step": FD_STEP,
            "element": mat(&x),
            "derivative": d,
            "expected": expected,
        }),
    )
}

pub fn verify(s: &Settings, fault_inject: Option<String>) -> Result<Output, CliError> {
    let opts = VerifyOptions {
        seed: s.seed,
        fault_inject,
    };
    let report = verify_suite(&s.group, &opts)?;
    let value = serde_json::to_value(&report).map_err(|e| CliError::Failure(e.to_string()))?;
    Ok(Output {
        text: render(&value, s.indent),
        ok: report.all_pass(),
    })
}
