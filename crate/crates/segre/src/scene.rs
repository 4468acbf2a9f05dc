//! Scene ingestion, formula dispatch, and report formatting.
//!
//! Scenes are JSON documents (schema_version "1") declaring an ambient
//! projective space, components (linear, or explicit bundle data),
//! intersection dimensions with optional restricted bundle data, hypothesis
//! flags, and a request. Rationals serialize as "p/q" strings, never
//! floats.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::bundle::BundleData;
use crate::error::{Error, Result};
use crate::graded::{DimClass, GradedClass, Rational};
use crate::linear::{oracle_union_pair, LinearScene};
use crate::union::{
    aluffi_residual, fulton_residual, union_blowup_residual, union_transverse_multi,
    union_transverse_pair, BlowupBundles, CheckMode, ComponentInput, CrossCheck, FormulaId,
    FormulaReport, HypothesisCheck, MultiInput, PairInput, PairIntersection, SubsetData,
};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneDocument {
    pub schema_version: String,
    pub ambient: AmbientSpec,
    pub components: Vec<ComponentSpec>,
    #[serde(default)]
    pub intersections: BTreeMap<String, IntersectionSpec>,
    #[serde(default)]
    pub hypotheses: HypothesesSpec,
    #[serde(default)]
    pub request: RequestSpec,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AmbientSpec {
    pub kind: String,
    pub dim: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentSpec {
    pub name: String,
    pub kind: String,
    pub dim: u32,
    /// For kind "bundle_input": coefficients of c(N_•Z) on the component,
    /// by h-degree, as exact rational strings starting with "1".
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normal_chern: Option<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntersectionSpec {
    /// -1 means the intersection is empty.
    pub dim: i64,
    /// Restricted normal bundles on the intersection, keyed by component
    /// name (required for bundle_input components, derived for linear).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bundles: Option<BTreeMap<String, Vec<String>>>,
    /// N_{X∩Y}X, N_{X∩Y}Y, N_{X∩Y}Z data for the blowup route.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blowup: Option<BlowupSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlowupSpec {
    pub n_xy_x: Vec<String>,
    pub n_xy_y: Vec<String>,
    pub n_xy_z: Vec<String>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HypothesesSpec {
    #[serde(default)]
    pub transverse: bool,
    #[serde(default)]
    pub residual_after_blowup: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RequestSpec {
    #[serde(default = "default_formula")]
    pub formula: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_codim: Option<u32>,
    #[serde(default = "default_format")]
    pub format: String,
}

impl Default for RequestSpec {
    fn default() -> Self {
        RequestSpec {
            formula: default_formula(),
            max_codim: None,
            format: default_format(),
        }
    }
}

fn default_formula() -> String {
    "auto".into()
}

fn default_format() -> String {
    "table".into()
}

fn parse_rational(s: &str) -> Result<Rational> {
    Rational::from_str(s.trim())
        .map_err(|e| Error::SchemaError(format!("bad rational {s:?}: {e}")))
}

fn class_from_strings(coeffs: &[String], trunc: u32) -> Result<GradedClass> {
    let h = GradedClass::variable("h", trunc);
    let mut out = GradedClass::zero(trunc);
    for (k, s) in coeffs.iter().enumerate() {
        let c = parse_rational(s)?;
        if c.is_zero() {
            continue;
        }
        if k as u32 > trunc {
            // declared coefficients beyond the support vanish
            continue;
        }
        out = out.add(&h.pow(k as u32).scale(&c));
    }
    Ok(out)
}

/// Parse and validate a scene document.
pub fn parse_scene(text: &str) -> Result<SceneDocument> {
    let doc: SceneDocument =
        serde_json::from_str(text).map_err(|e| Error::SchemaError(e.to_string()))?;
    if doc.schema_version != SCHEMA_VERSION {
        return Err(Error::SchemaError(format!(
            "unsupported schema_version {:?}, expected {:?}",
            doc.schema_version, SCHEMA_VERSION
        )));
    }
    if doc.ambient.kind != "projective_space" {
        return Err(Error::SchemaError(format!(
            "unsupported ambient kind {:?}",
            doc.ambient.kind
        )));
    }
    if doc.components.is_empty() {
        return Err(Error::SemanticError("scene declares no components".into()));
    }
    let mut names = Vec::new();
    for c in &doc.components {
        if names.contains(&c.name) {
            return Err(Error::SemanticError(format!(
                "duplicate component name {:?}",
                c.name
            )));
        }
        match c.kind.as_str() {
            "linear" => {}
            "bundle_input" => {
                let chern = c.normal_chern.as_ref().ok_or_else(|| {
                    Error::SemanticError(format!(
                        "component {:?} has kind bundle_input but no normal_chern",
                        c.name
                    ))
                })?;
                match chern.first() {
                    Some(first) if parse_rational(first)? == Rational::from_integer(1.into()) => {}
                    _ => {
                        return Err(Error::SemanticError(format!(
                            "normal_chern of {:?} must start with constant term 1",
                            c.name
                        )))
                    }
                }
            }
            other => {
                return Err(Error::SchemaError(format!(
                    "unknown component kind {other:?}"
                )))
            }
        }
        if c.dim > doc.ambient.dim {
            return Err(Error::SemanticError(format!(
                "component {:?} has dimension {} above the ambient {}",
                c.name, c.dim, doc.ambient.dim
            )));
        }
        names.push(c.name.clone());
    }
    let valid_formulas = ["auto", "thm1", "thm2", "cor26", "fulton", "oracle"];
    if !valid_formulas.contains(&doc.request.formula.as_str()) {
        return Err(Error::SchemaError(format!(
            "unknown formula {:?}",
            doc.request.formula
        )));
    }
    if !["json", "table"].contains(&doc.request.format.as_str()) {
        return Err(Error::SchemaError(format!(
            "unknown format {:?}",
            doc.request.format
        )));
    }
    // subset keys: comma-joined declared names, in declaration order,
    // duplicate-free
    for (key, spec) in &doc.intersections {
        let parts: Vec<&str> = key.split(',').map(|p| p.trim()).collect();
        let mut indices = Vec::new();
        for p in &parts {
            let idx = names.iter().position(|n| n == p).ok_or_else(|| {
                Error::SemanticError(format!(
                    "intersection key {key:?} references undeclared component {p:?}"
                ))
            })?;
            indices.push(idx);
        }
        if indices.len() < 2 || indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::SemanticError(format!(
                "intersection key {key:?} must list at least two distinct components in declaration order"
            )));
        }
        if spec.dim < -1 || spec.dim > doc.ambient.dim as i64 {
            return Err(Error::SemanticError(format!(
                "intersection {key:?} has out-of-range dimension {}",
                spec.dim
            )));
        }
        if let Some(bundles) = &spec.bundles {
            for name in bundles.keys() {
                if !parts.contains(&name.as_str()) {
                    return Err(Error::SemanticError(format!(
                        "intersection {key:?} has bundle data for {name:?}, which is not a member"
                    )));
                }
            }
        }
    }
    Ok(doc)
}

fn subset_indices(doc: &SceneDocument, key: &str) -> Vec<usize> {
    key.split(',')
        .map(|p| {
            doc.components
                .iter()
                .position(|c| c.name == p.trim())
                .expect("validated key")
        })
        .collect()
}

fn component_input(c: &ComponentSpec, ambient: u32) -> Result<ComponentInput> {
    match c.kind.as_str() {
        "linear" => Ok(ComponentInput::linear(&c.name, c.dim, ambient)),
        _ => {
            let chern = class_from_strings(c.normal_chern.as_ref().unwrap(), c.dim)?;
            Ok(ComponentInput::new(&c.name, c.dim, chern))
        }
    }
}

fn all_linear(doc: &SceneDocument) -> bool {
    doc.components.iter().all(|c| c.kind == "linear")
}

fn linear_scene(doc: &SceneDocument) -> Result<LinearScene> {
    let components = doc
        .components
        .iter()
        .map(|c| (c.name.clone(), c.dim))
        .collect();
    let mut dims = BTreeMap::new();
    for (key, spec) in &doc.intersections {
        dims.insert(subset_indices(doc, key), spec.dim);
    }
    LinearScene::new(doc.ambient.dim, components, dims)
}

fn restricted_bundle(
    spec: &IntersectionSpec,
    key: &str,
    comp: &ComponentSpec,
    ambient: u32,
    base: u32,
) -> Result<BundleData> {
    let rank = ambient - comp.dim;
    if comp.kind == "linear" {
        return Ok(BundleData::sum_of_hyperplanes(rank, base));
    }
    let arrays = spec.bundles.as_ref().and_then(|b| b.get(&comp.name)).ok_or_else(|| {
        Error::SemanticError(format!(
            "intersection {key:?} needs restricted bundle data for bundle_input component {:?}",
            comp.name
        ))
    })?;
    BundleData::new(rank, class_from_strings(arrays, base)?, base)
}

fn pair_input(doc: &SceneDocument) -> Result<PairInput> {
    let ambient = doc.ambient.dim;
    let x = component_input(&doc.components[0], ambient)?;
    let y = component_input(&doc.components[1], ambient)?;
    let key = format!("{},{}", doc.components[0].name, doc.components[1].name);
    let spec = doc.intersections.get(&key).ok_or_else(|| {
        Error::SemanticError(format!("missing intersection entry {key:?}"))
    })?;
    let intersection = if spec.dim < 0 {
        None
    } else {
        let l = spec.dim as u32;
        let n_xz = restricted_bundle(spec, &key, &doc.components[0], ambient, l)?;
        let n_yz = restricted_bundle(spec, &key, &doc.components[1], ambient, l)?;
        let blowup = if all_linear(doc) {
            Some(BlowupBundles {
                n_xy_x: LinearScene::linear_normal(l, doc.components[0].dim, l),
                n_xy_y: LinearScene::linear_normal(l, doc.components[1].dim, l),
                n_xy_z: LinearScene::linear_normal(l, ambient, l),
            })
        } else {
            match &spec.blowup {
                None => None,
                Some(b) => Some(BlowupBundles {
                    n_xy_x: BundleData::new(
                        doc.components[0].dim - l,
                        class_from_strings(&b.n_xy_x, l)?,
                        l,
                    )?,
                    n_xy_y: BundleData::new(
                        doc.components[1].dim - l,
                        class_from_strings(&b.n_xy_y, l)?,
                        l,
                    )?,
                    n_xy_z: BundleData::new(ambient - l, class_from_strings(&b.n_xy_z, l)?, l)?,
                }),
            }
        };
        Some(PairIntersection {
            dim: l,
            n_xz,
            n_yz,
            blowup,
        })
    };
    Ok(PairInput {
        dim_z: ambient,
        x,
        y,
        intersection,
        residual_after_blowup: doc.hypotheses.residual_after_blowup,
    })
}

fn multi_input(doc: &SceneDocument) -> Result<MultiInput> {
    let ambient = doc.ambient.dim;
    let components: Vec<ComponentInput> = doc
        .components
        .iter()
        .map(|c| component_input(c, ambient))
        .collect::<Result<_>>()?;
    let n = doc.components.len();
    let mut subsets = BTreeMap::new();
    for mask in 1u32..(1 << n) {
        if mask.count_ones() < 2 {
            continue;
        }
        let subset: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let key = subset
            .iter()
            .map(|&i| doc.components[i].name.as_str())
            .collect::<Vec<_>>()
            .join(",");
        let spec = doc.intersections.get(&key).ok_or_else(|| {
            Error::SemanticError(format!("missing intersection entry {key:?}"))
        })?;
        let bundles = if spec.dim < 0 {
            Vec::new()
        } else {
            subset
                .iter()
                .map(|&i| {
                    restricted_bundle(spec, &key, &doc.components[i], ambient, spec.dim as u32)
                })
                .collect::<Result<_>>()?
        };
        subsets.insert(
            subset,
            SubsetData {
                dim: spec.dim,
                bundles,
            },
        );
    }
    Ok(MultiInput {
        dim_z: ambient,
        components,
        subsets,
    })
}

/// Divisor degree of a codimension-1 component: the h-coefficient of its
/// normal Chern class.
fn divisor_degree(c: &ComponentSpec, ambient: u32) -> Option<Rational> {
    if c.dim + 1 != ambient {
        return None;
    }
    match c.kind.as_str() {
        "linear" => Some(Rational::from_integer(1.into())),
        _ => {
            let coeffs = c.normal_chern.as_ref()?;
            coeffs.get(1).and_then(|s| Rational::from_str(s).ok())
        }
    }
}

fn fulton_dispatch(doc: &SceneDocument) -> Result<FormulaReport> {
    let ambient = doc.ambient.dim;
    // the divisor is the first codimension-1 component
    let (d_idx, deg) = doc
        .components
        .iter()
        .enumerate()
        .find_map(|(i, c)| divisor_degree(c, ambient).map(|d| (i, d)))
        .ok_or_else(|| {
            Error::NoApplicableFormula("divisor residual needs a codimension-1 component".into())
        })?;
    if doc.components.len() != 2 {
        return Err(Error::NoApplicableFormula(
            "divisor residual dispatch handles exactly two components".into(),
        ));
    }
    let deg_int = if deg.is_integer() {
        // the divisor class is deg·h
        num_traits::ToPrimitive::to_i64(deg.numer()).ok_or_else(|| {
            Error::SemanticError("divisor degree too large".into())
        })?
    } else {
        return Err(Error::SemanticError(format!(
            "divisor degree must be an integer, found {deg}"
        )));
    };
    let r_idx = 1 - d_idx;
    let r = component_input(&doc.components[r_idx], ambient)?;
    let r_segre = r.segre_class(ambient)?;
    let result = fulton_residual(deg_int, &r_segre, ambient)?;
    let aluffi = aluffi_residual(deg_int, &r_segre, ambient)?;
    let d_class = crate::linear::segre_divisor(deg_int, ambient);
    let correction = result.sub(&d_class).sub(&r_segre);
    Ok(FormulaReport {
        formula: FormulaId::FultonResidual,
        result: result.clone(),
        component_terms: vec![
            (doc.components[d_idx].name.clone(), d_class),
            (doc.components[r_idx].name.clone(), r_segre),
        ],
        correction,
        hypothesis_checks: vec![HypothesisCheck {
            name: "cartier_divisor_component".into(),
            passed: true,
            mode: CheckMode::Checked,
        }],
        cross_checks: vec![CrossCheck {
            against: "aluffi".into(),
            agrees: aluffi == result,
        }],
    })
}

fn oracle_dispatch(doc: &SceneDocument) -> Result<FormulaReport> {
    if !all_linear(doc) {
        return Err(Error::OracleInapplicable(
            "the blowup oracle handles linear scenes only".into(),
        ));
    }
    let scene = linear_scene(doc)?;
    if doc.components.len() != 2 {
        return Err(Error::OracleInapplicable(
            "the blowup oracle handles exactly two components".into(),
        ));
    }
    // the hyperplane must come first; reorder if needed
    let n = doc.ambient.dim;
    let scene = if scene.component_dim(0) == n - 1 {
        scene
    } else {
        let mut dims = BTreeMap::new();
        dims.insert(vec![0usize, 1], scene.subset_dim(&[0, 1]));
        LinearScene::new(
            n,
            vec![
                scene.components()[1].clone(),
                scene.components()[0].clone(),
            ],
            dims,
        )?
    };
    let result = oracle_union_pair(&scene)?;
    Ok(FormulaReport {
        formula: FormulaId::BlowupOracle,
        result: result.clone(),
        component_terms: vec![("oracle_pushforward".into(), result)],
        correction: DimClass::zero(n),
        hypothesis_checks: vec![HypothesisCheck {
            name: "hyperplane_times_linear".into(),
            passed: true,
            mode: CheckMode::Checked,
        }],
        cross_checks: Vec::new(),
    })
}

/// Run the requested (or automatically selected) formula and attach
/// applicable cross-checks: "auto" prefers the transverse route when the
/// codimension count holds, then the blowup route when its hypothesis is
/// declared, then the divisor residual.
pub fn dispatch_compute(doc: &SceneDocument) -> Result<FormulaReport> {
    let n_components = doc.components.len();
    let requested = doc.request.formula.as_str();
    let mut report = match requested {
        "thm1" => union_transverse_pair(&expect_pair(doc)?)?,
        "thm2" => union_blowup_residual(&expect_pair(doc)?)?,
        "cor26" => union_transverse_multi(&multi_input(doc)?)?,
        "fulton" => fulton_dispatch(doc)?,
        "oracle" => oracle_dispatch(doc)?,
        "auto" => auto_dispatch(doc)?,
        other => return Err(Error::SchemaError(format!("unknown formula {other:?}"))),
    };
    // cross-checks against the other applicable routes
    if n_components == 2 && report.formula != FormulaId::BlowupOracle {
        if let Ok(input) = expect_pair(doc) {
            if report.formula != FormulaId::TransversePair && input.transversality_count_holds() {
                if let Ok(other) = union_transverse_pair(&input) {
                    report.cross_checks.push(CrossCheck {
                        against: "thm1".into(),
                        agrees: other.result == report.result,
                    });
                }
            }
            if report.formula != FormulaId::BlowupResidual && input.residual_after_blowup {
                if let Ok(other) = union_blowup_residual(&input) {
                    report.cross_checks.push(CrossCheck {
                        against: "thm2".into(),
                        agrees: other.result == report.result,
                    });
                }
            }
        }
        if all_linear(doc) {
            if let Ok(oracle) = oracle_dispatch(doc) {
                report.cross_checks.push(CrossCheck {
                    against: "oracle".into(),
                    agrees: oracle.result == report.result,
                });
            }
        }
    }
    Ok(report)
}

fn expect_pair(doc: &SceneDocument) -> Result<PairInput> {
    if doc.components.len() != 2 {
        return Err(Error::NoApplicableFormula(format!(
            "pair formula on a scene with {} components",
            doc.components.len()
        )));
    }
    pair_input(doc)
}

fn auto_dispatch(doc: &SceneDocument) -> Result<FormulaReport> {
    let n = doc.components.len();
    if n == 2 {
        let input = expect_pair(doc)?;
        if input.transversality_count_holds() {
            return union_transverse_pair(&input);
        }
        if doc.hypotheses.residual_after_blowup {
            return union_blowup_residual(&input);
        }
        if doc
            .components
            .iter()
            .any(|c| divisor_degree(c, doc.ambient.dim).is_some())
        {
            return fulton_dispatch(doc);
        }
        return Err(Error::NoApplicableFormula(
            "no transversality, no declared blowup hypothesis, no divisor component".into(),
        ));
    }
    // n = 1 or n ≥ 3: inclusion-exclusion is the only route
    let input = multi_input(doc)?;
    union_transverse_multi(&input).map_err(|e| match e {
        Error::TransversalityViolated(msg) if doc.hypotheses.residual_after_blowup => {
            Error::NoApplicableFormula(format!(
                "multi-component blowup-residual scenes are not supported; {msg}"
            ))
        }
        other => other,
    })
}

// ---------------------------------------------------------------------------
// report serialization

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JsonReport {
    pub formula: String,
    pub ambient_dim: u32,
    pub coefficients: Vec<JsonCoefficient>,
    pub breakdown: JsonBreakdown,
    pub checks: JsonChecks,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JsonCoefficient {
    pub dim: u32,
    pub monomial: String,
    pub value: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JsonBreakdown {
    pub components: Vec<JsonTerm>,
    pub correction: Vec<JsonCoefficient>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JsonTerm {
    pub name: String,
    pub coefficients: Vec<JsonCoefficient>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JsonChecks {
    pub hypotheses: Vec<JsonHypothesis>,
    pub cross_checks: Vec<JsonCrossCheck>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JsonHypothesis {
    pub name: String,
    pub passed: bool,
    pub mode: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JsonCrossCheck {
    pub against: String,
    pub agrees: bool,
}

/// Coefficients of a class by descending dimension, with the `H^{N-d}`
/// monomial printed alongside. `max_codim` keeps only codimensions ≤ K.
pub fn class_coefficients(c: &DimClass, max_codim: Option<u32>) -> Vec<JsonCoefficient> {
    let n = c.ambient_dim();
    let mut out = Vec::new();
    for d in (0..=n).rev() {
        let codim = n - d;
        if let Some(k) = max_codim {
            if codim > k {
                continue;
            }
        }
        out.push(JsonCoefficient {
            dim: d,
            monomial: format!("H^{codim}"),
            value: c.get(d).to_string(),
        });
    }
    out
}

/// Rebuild a class from serialized coefficients (the round-trip direction).
pub fn class_from_coefficients(coeffs: &[JsonCoefficient], ambient_dim: u32) -> Result<DimClass> {
    let mut out = DimClass::zero(ambient_dim);
    for c in coeffs {
        if c.dim > ambient_dim {
            return Err(Error::SchemaError(format!(
                "coefficient dimension {} above ambient {ambient_dim}",
                c.dim
            )));
        }
        out.set(c.dim, parse_rational(&c.value)?);
    }
    Ok(out)
}

pub fn to_json_report(report: &FormulaReport, max_codim: Option<u32>) -> JsonReport {
    JsonReport {
        formula: report.formula.as_str().to_string(),
        ambient_dim: report.result.ambient_dim(),
        coefficients: class_coefficients(&report.result, max_codim),
        breakdown: JsonBreakdown {
            components: report
                .component_terms
                .iter()
                .map(|(name, c)| JsonTerm {
                    name: name.clone(),
                    coefficients: class_coefficients(c, max_codim),
                })
                .collect(),
            correction: class_coefficients(&report.correction, max_codim),
        },
        checks: JsonChecks {
            hypotheses: report
                .hypothesis_checks
                .iter()
                .map(|h| JsonHypothesis {
                    name: h.name.clone(),
                    passed: h.passed,
                    mode: match h.mode {
                        CheckMode::Checked => "checked".into(),
                        CheckMode::Declared => "declared".into(),
                    },
                })
                .collect(),
            cross_checks: report
                .cross_checks
                .iter()
                .map(|c| JsonCrossCheck {
                    against: c.against.clone(),
                    agrees: c.agrees,
                })
                .collect(),
        },
    }
}

/// Aligned plain-text rendering of a report.
pub fn format_table(report: &FormulaReport, max_codim: Option<u32>) -> String {
    let mut out = String::new();
    out.push_str(&format!("formula: {}\n", report.formula.as_str()));
    out.push_str(&format!(
        "result:  {}\n\n  dim  monomial  value\n",
        report.result
    ));
    for c in class_coefficients(&report.result, max_codim) {
        out.push_str(&format!("  {:>3}  {:<8}  {}\n", c.dim, c.monomial, c.value));
    }
    out.push_str("\nbreakdown:\n");
    for (name, term) in &report.component_terms {
        out.push_str(&format!("  {:<12} {}\n", name, term));
    }
    if !report.correction.is_zero() {
        out.push_str(&format!("  {:<12} {}\n", "correction", report.correction));
    }
    out.push_str("\nhypotheses:\n");
    for h in &report.hypothesis_checks {
        let mode = match h.mode {
            CheckMode::Checked => "checked",
            CheckMode::Declared => "declared",
        };
        out.push_str(&format!(
            "  {:<40} {} ({mode})\n",
            h.name,
            if h.passed { "pass" } else { "FAIL" }
        ));
    }
    if !report.cross_checks.is_empty() {
        out.push_str("cross-checks:\n");
        for c in &report.cross_checks {
            out.push_str(&format!(
                "  vs {:<37} {}\n",
                c.against,
                if c.agrees { "agree" } else { "DISAGREE" }
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::rat;
    use crate::linear::segre_divisor;

    fn two_hyperplanes_p2() -> String {
        r#"{
            "schema_version": "1",
            "ambient": {"kind": "projective_space", "dim": 2},
            "components": [
                {"name": "X", "kind": "linear", "dim": 1},
                {"name": "Y", "kind": "linear", "dim": 1}
            ],
            "intersections": {"X,Y": {"dim": 0}},
            "hypotheses": {"transverse": true, "residual_after_blowup": true}
        }"#
        .to_string()
    }

    fn two_lines_p3(residual: bool) -> String {
        format!(
            r#"{{
            "schema_version": "1",
            "ambient": {{"kind": "projective_space", "dim": 3}},
            "components": [
                {{"name": "X", "kind": "linear", "dim": 1}},
                {{"name": "Y", "kind": "linear", "dim": 1}}
            ],
            "intersections": {{"X,Y": {{"dim": 0}}}},
            "hypotheses": {{"transverse": false, "residual_after_blowup": {residual}}}
        }}"#
        )
    }

    #[test]
    fn parse_minimal_scene() {
        let doc = parse_scene(&two_hyperplanes_p2()).unwrap();
        assert_eq!(doc.components.len(), 2);
        assert_eq!(doc.request.formula, "auto");
    }

    #[test]
    fn parse_rejects_undeclared_reference() {
        let text = two_hyperplanes_p2().replace("X,Y", "X,Z");
        match parse_scene(&text) {
            Err(Error::SemanticError(msg)) => assert!(msg.contains('Z'), "{msg}"),
            other => panic!("expected semantic error, got {other:?}"),
        }
    }

    #[test]
    fn parse_rejects_bad_version_and_unknown_fields() {
        let text = two_hyperplanes_p2().replace("\"1\"", "\"2\"");
        assert!(matches!(parse_scene(&text), Err(Error::SchemaError(_))));
        let text = two_hyperplanes_p2().replace("\"hypotheses\"", "\"hypothesis\"");
        assert!(matches!(parse_scene(&text), Err(Error::SchemaError(_))));
    }

    #[test]
    fn dispatch_auto_two_hyperplanes() {
        let doc = parse_scene(&two_hyperplanes_p2()).unwrap();
        let report = dispatch_compute(&doc).unwrap();
        assert_eq!(report.formula, FormulaId::TransversePair);
        assert_eq!(report.result, segre_divisor(2, 2));
        assert!(report.cross_checks.iter().any(|c| c.against == "oracle" && c.agrees));
    }

    #[test]
    fn dispatch_two_lines_selects_blowup() {
        let doc = parse_scene(&two_lines_p3(true)).unwrap();
        let report = dispatch_compute(&doc).unwrap();
        assert_eq!(report.formula, FormulaId::BlowupResidual);
        assert_eq!(report.result, DimClass::from_entries(3, &[(1, 2), (0, -6)]));
    }

    #[test]
    fn dispatch_two_lines_without_hypotheses_fails() {
        let doc = parse_scene(&two_lines_p3(false)).unwrap();
        assert!(matches!(
            dispatch_compute(&doc),
            Err(Error::NoApplicableFormula(_))
        ));
    }

    #[test]
    fn dispatch_thm1_rejects_two_lines() {
        let mut doc = parse_scene(&two_lines_p3(true)).unwrap();
        doc.request.formula = "thm1".into();
        assert!(matches!(
            dispatch_compute(&doc),
            Err(Error::TransversalityViolated(_))
        ));
    }

    #[test]
    fn json_report_roundtrip_preserves_rationals() {
        let doc = parse_scene(&two_hyperplanes_p2()).unwrap();
        let mut report = dispatch_compute(&doc).unwrap();
        // inject a non-integer rational to exercise the p/q path
        let mut tweaked = report.result.clone();
        tweaked.set(0, crate::graded::ratio(-22, 7));
        report.result = tweaked;
        let json = to_json_report(&report, None);
        let text = serde_json::to_string_pretty(&json).unwrap();
        assert!(text.contains("-22/7"));
        let parsed: JsonReport = serde_json::from_str(&text).unwrap();
        let class = class_from_coefficients(&parsed.coefficients, parsed.ambient_dim).unwrap();
        assert_eq!(class, report.result);
    }

    #[test]
    fn max_codim_filters_output() {
        let doc = parse_scene(&two_hyperplanes_p2()).unwrap();
        let report = dispatch_compute(&doc).unwrap();
        let json = to_json_report(&report, Some(1));
        assert_eq!(json.coefficients.len(), 2); // codims 0 and 1
    }

    #[test]
    fn bundle_input_scene_matches_linear() {
        // same plane+line scene, declared through explicit chern arrays
        let text = r#"{
            "schema_version": "1",
            "ambient": {"kind": "projective_space", "dim": 3},
            "components": [
                {"name": "X", "kind": "bundle_input", "dim": 2, "normal_chern": ["1", "1"]},
                {"name": "Y", "kind": "bundle_input", "dim": 1, "normal_chern": ["1", "2", "1"]}
            ],
            "intersections": {"X,Y": {"dim": 0, "bundles": {"X": ["1"], "Y": ["1"]}}},
            "hypotheses": {"transverse": true, "residual_after_blowup": false}
        }"#;
        let doc = parse_scene(text).unwrap();
        let report = dispatch_compute(&doc).unwrap();
        assert_eq!(report.formula, FormulaId::TransversePair);
        assert_eq!(
            report.result,
            DimClass::from_entries(3, &[(2, 1), (0, -4)])
        );
    }

    #[test]
    fn fulton_dispatch_cross_checks_aluffi() {
        let mut doc = parse_scene(&two_hyperplanes_p2()).unwrap();
        doc.request.formula = "fulton".into();
        let report = dispatch_compute(&doc).unwrap();
        assert_eq!(report.formula, FormulaId::FultonResidual);
        assert_eq!(report.result, segre_divisor(2, 2));
        assert!(report
            .cross_checks
            .iter()
            .any(|c| c.against == "aluffi" && c.agrees));
        assert!(report.breakdown_consistent());
    }

    #[test]
    fn oracle_dispatch_reorders_hyperplane() {
        // line first, plane second: the oracle still applies
        let text = r#"{
            "schema_version": "1",
            "ambient": {"kind": "projective_space", "dim": 3},
            "components": [
                {"name": "L", "kind": "linear", "dim": 1},
                {"name": "P", "kind": "linear", "dim": 2}
            ],
            "intersections": {"L,P": {"dim": 0}},
            "request": {"formula": "oracle", "format": "table"}
        }"#;
        let doc = parse_scene(text).unwrap();
        let report = dispatch_compute(&doc).unwrap();
        assert_eq!(report.result, DimClass::from_entries(3, &[(2, 1), (0, -4)]));
    }

    #[test]
    fn dispatch_determinism() {
        let doc = parse_scene(&two_lines_p3(true)).unwrap();
        let a = dispatch_compute(&doc).unwrap();
        let b = dispatch_compute(&doc).unwrap();
        assert_eq!(a.formula, b.formula);
        assert_eq!(a.result, b.result);
    }

    #[test]
    fn table_format_mentions_result() {
        let doc = parse_scene(&two_hyperplanes_p2()).unwrap();
        let report = dispatch_compute(&doc).unwrap();
        let table = format_table(&report, None);
        assert!(table.contains("formula: thm1"));
        assert!(table.contains("2*H^1 - 4*H^2"));
    }
}
