//! Parsers for the textual literals accepted on the command line.

use nalgebra::DMatrix;
use serde::Deserialize;

use satake_core::degeneration::DeformationParameter;
use satake_core::lie::Group;
use satake_core::linalg;
use satake_core::oshima::OshimaPoint;
use satake_core::groupoid::Arrow;

use crate::CliError;

/// `"1,0"` or `"0.5"`.
pub fn reals(text: &str) -> Result<Vec<f64>, CliError> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Ok(Vec::new());
    }
    trimmed
        .split(',')
        .map(|s| {
            let s = s.trim();
            s.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| CliError::Usage(format!("not a finite number: {s:?}")))
        })
        .collect()
}

pub fn parameter(group: &Group, text: &str) -> Result<DeformationParameter, CliError> {
    parameter_from(group, reals(text)?)
}

pub fn parameter_from(group: &Group, t: Vec<f64>) -> Result<DeformationParameter, CliError> {
    if t.iter().any(|x| !x.is_finite()) {
        return Err(CliError::Usage("t must be finite".into()));
    }
    if t.len() != group.n_simple() {
        return Err(CliError::Usage(format!(
            "t needs {} entries for {}, got {}",
            group.n_simple(),
            group.name,
            t.len()
        )));
    }
    Ok(DeformationParameter(t))
}

/// Rows separated by `;`, entries by `,`: `"1,1;0,1"`.
pub fn matrix(group: &Group, text: &str) -> Result<DMatrix<f64>, CliError> {
    let rows = text.split(';').map(reals).collect::<Result<Vec<_>, _>>()?;
    square(group, &rows)
}

pub fn square(group: &Group, rows: &[Vec<f64>]) -> Result<DMatrix<f64>, CliError> {
    let m = linalg::from_rows(rows).ok_or_else(|| CliError::Usage("ragged matrix".into()))?;
    if m.nrows() != group.n || m.ncols() != group.n {
        return Err(CliError::Usage(format!(
            "expected a {0}×{0} matrix, got {1}×{2}",
            group.n,
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(m)
}

/// Simple-root subsets: `""`, `"none"`, `"a1"`, `"a1,a2"` or `"1,2"` (one-based).
pub fn subset(group: &Group, text: &str) -> Result<Vec<usize>, CliError> {
    let t = text.trim();
    if t.is_empty() || t == "none" || t == "empty" {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for token in t.split(',') {
        let token = token.trim();
        let digits = token.strip_prefix('a').unwrap_or(token);
        let k: usize = digits
            .parse()
            .ok()
            .filter(|&k| k >= 1 && k <= group.n_simple())
            .ok_or_else(|| CliError::Usage(format!("unknown simple root {token:?}")))?;
        out.push(k - 1);
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

pub fn subset_name(subset: &[usize]) -> Vec<String> {
    subset.iter().map(|k| format!("a{}", k + 1)).collect()
}

/// JSON literal of an arrow: `{"gamma": [[..]], "g": [[..]], "t": [..]}`,
/// with `g` defaulting to the identity.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ArrowLiteral {
    gamma: Vec<Vec<f64>>,
    #[serde(default)]
    g: Option<Vec<Vec<f64>>>,
    t: Vec<f64>,
}

pub fn arrow(group: &Group, text: &str) -> Result<Arrow, CliError> {
    let lit: ArrowLiteral =
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("arrow literal: {e}")))?;
    let gamma = square(group, &lit.gamma)?;
    let g = match &lit.g {
        Some(rows) => square(group, rows)?,
        None => DMatrix::identity(group.n, group.n),
    };
    let t = parameter_from(group, lit.t)?;
    Ok(Arrow::new(gamma, OshimaPoint::new(g, t)))
}

/// JSON literal of a model arrow: `{"m2": [..], "a": [..], "m1": [..]}`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelLiteral {
    pub m2: Vec<f64>,
    pub a: Vec<f64>,
    pub m1: Vec<f64>,
}

pub fn model_arrow(text: &str) -> Result<ModelLiteral, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Usage(format!("model arrow literal: {e}")))
}

/// Letters `j:c` separated by commas, meaning `exp(c·Y_j)` in an orthonormal
/// basis `Y` of `h_t`.
pub fn h_word(text: &str) -> Result<Vec<(usize, f64)>, CliError> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|letter| {
            let (j, c) = letter
                .split_once(':')
                .ok_or_else(|| CliError::Usage(format!("word letter {letter:?} is not j:c")))?;
            let j = j
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("bad generator index {j:?}")))?;
            let c = reals(c)?;
            match c.as_slice() {
                [c] => Ok((j, *c)),
                _ => Err(CliError::Usage(format!("bad coefficient in {letter:?}"))),
            }
        })
        .collect()
}
