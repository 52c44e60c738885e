//! The built-in corpus of counterexamples and worked instances, embedded as
//! JSON, with the checks each one is meant to exhibit.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::filtered::{counit, factorize, unit, FilteredSSet, StratifiedMap};
use crate::homotopy::{global_pointing_exists, spi0, spi0_compare, spi0_map};
use crate::json::{
    fss_from_json, poset_from_json, poset_map_from_json, set_diagram_from_json, spi0_to_json, term_from_json,
    violation_to_json, FssJson, PosetJson, SetDiagramJson, TermJson,
};
use crate::poset::PosetMap;
use crate::setdiagram::{almost_filtered, mono_into_colim, set_colim, SetDiagram};
use crate::simplicial::{GenRef, SMap};

pub const NAMES: [&str; 5] = ["remark-a3", "prop-3-2-i", "prop-3-2-ii", "prop-3-2-iii", "example-1-14"];

pub fn source(name: &str) -> Result<&'static str> {
    Ok(match name {
        "remark-a3" => include_str!("../corpus/remark-a3.json"),
        "prop-3-2-i" => include_str!("../corpus/prop-3-2-i.json"),
        "prop-3-2-ii" => include_str!("../corpus/prop-3-2-ii.json"),
        "prop-3-2-iii" => include_str!("../corpus/prop-3-2-iii.json"),
        "example-1-14" => include_str!("../corpus/example-1-14.json"),
        _ => {
            return Err(Error::InvalidInput(format!(
                "unknown builtin `{name}`; known: {}",
                NAMES.join(", ")
            )))
        }
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PosetMapJson {
    pub source: PosetJson,
    pub target: PosetJson,
    pub map: BTreeMap<String, String>,
}

/// A poset map with objects on either side and, optionally, a map between them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BaseChangeJson {
    pub alpha: PosetMapJson,
    #[serde(rename = "X", default, skip_serializing_if = "Option::is_none")]
    pub x: Option<FssJson>,
    #[serde(rename = "Y", default, skip_serializing_if = "Option::is_none")]
    pub y: Option<FssJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub images: Option<BTreeMap<String, TermJson>>,
}

pub struct BaseChange {
    pub alpha: PosetMap,
    pub x: Option<Arc<FilteredSSet>>,
    pub y: Option<Arc<FilteredSSet>>,
    pub f: Option<StratifiedMap>,
}

pub fn base_change_from_json(j: &BaseChangeJson) -> Result<BaseChange> {
    let p = Arc::new(poset_from_json(&j.alpha.source)?);
    let q = Arc::new(poset_from_json(&j.alpha.target)?);
    let alpha = poset_map_from_json(p.clone(), q.clone(), &j.alpha.map)?;
    let load = |f: &Option<FssJson>, base: &Arc<crate::poset::Poset>| -> Result<Option<Arc<FilteredSSet>>> {
        let Some(f) = f else { return Ok(None) };
        let k = fss_from_json(f)?;
        if *k.base != **base {
            return Err(Error::BaseMismatch);
        }
        Ok(Some(Arc::new(FilteredSSet::from_vertex_labels(
            base.clone(),
            k.body.clone(),
            k.labels().to_vec(),
        )?)))
    };
    let x = load(&j.x, &p)?;
    let y = load(&j.y, &q)?;
    let f = match (&j.images, &x, &y) {
        (Some(images), Some(x), Some(y)) => {
            let imgs = x
                .body
                .gen_refs()
                .map(|g: GenRef| {
                    let id = x.body.id(g);
                    let t = images
                        .get(id)
                        .ok_or_else(|| Error::NotASimplicialMap(format!("no image for `{id}`")))?;
                    term_from_json(&y.body, t)
                })
                .collect::<Result<Vec<_>>>()?;
            let mut rows = vec![Vec::new(); x.body.counts().len()];
            for (g, t) in x.body.gen_refs().zip(imgs) {
                rows[g.dim()].push(t);
            }
            let map = SMap::new(x.body.clone(), y.body.clone(), rows)?;
            Some(StratifiedMap::new(x.clone(), y.clone(), alpha.clone(), map)?)
        }
        (Some(_), _, _) => return Err(Error::InvalidInput("images need both X and Y".into())),
        _ => None,
    };
    Ok(BaseChange { alpha, x, y, f })
}

pub fn remark_a3() -> Result<SetDiagram> {
    let j: SetDiagramJson = serde_json::from_str(source("remark-a3")?)?;
    set_diagram_from_json(&j)
}

pub fn example_1_14() -> Result<Arc<FilteredSSet>> {
    let j: FssJson = serde_json::from_str(source("example-1-14")?)?;
    Ok(Arc::new(fss_from_json(&j)?))
}

pub fn base_change(name: &str) -> Result<BaseChange> {
    let j: BaseChangeJson = serde_json::from_str(source(name)?)?;
    base_change_from_json(&j)
}

/// Whether the instance shows the expected behaviour, with the data behind it.
#[derive(Clone, Debug, PartialEq)]
pub struct BuiltinReport {
    pub name: String,
    pub reproduced: bool,
    pub payload: Value,
}

pub fn evaluate(name: &str) -> Result<BuiltinReport> {
    let (reproduced, payload) = match name {
        "remark-a3" => eval_remark_a3()?,
        "prop-3-2-i" => eval_unit()?,
        "prop-3-2-ii" => eval_counit()?,
        "prop-3-2-iii" => eval_order_mismatch()?,
        "example-1-14" => eval_example_1_14()?,
        _ => {
            source(name)?;
            unreachable!("source rejects unknown names")
        }
    };
    Ok(BuiltinReport {
        name: name.to_string(),
        reproduced,
        payload,
    })
}

/// One class in the colimit, no leg injective, and the square condition
/// failing at `d = c` over `a`, `d`, `b`.
fn eval_remark_a3() -> Result<(bool, Value)> {
    let g = remark_a3()?;
    let c = set_colim(&g);
    let mono: BTreeMap<String, bool> = (0..g.len())
        .map(|d| (g.shape.name(d).to_string(), mono_into_colim(&g, d)))
        .collect();
    let af = almost_filtered(&g, g.total_elements())?;
    let witness = af.witness.as_ref().map(|w| violation_to_json(&g, w));
    let expected_witness = json!({
        "kind": "square", "d": "c", "d1": "a", "d2": "d", "d3": "b",
        "x": "0", "x1": "0", "x2": "0", "x3": "1", "y": "1",
    });
    let reproduced =
        c.classes.len() == 1 && mono.values().all(|&m| !m) && !af.holds && witness.as_ref() == Some(&expected_witness);
    Ok((
        reproduced,
        json!({
            "colimit_classes": c.classes.len(),
            "mono_into_colim": mono,
            "almost_filtered": af.holds,
            "witness": witness,
        }),
    ))
}

/// The unit of a non-injective base change is not a `π₀` isomorphism.
fn eval_unit() -> Result<(bool, Value)> {
    let bc = base_change("prop-3-2-i")?;
    let x = bc.x.as_ref().ok_or_else(|| Error::InvalidInput("missing X".into()))?;
    let (eta, _) = unit(&bc.alpha, x)?;
    let cmp = spi0_compare(&eta)?;
    let failure = cmp.failure.clone();
    let reproduced = failure
        .as_ref()
        .is_some_and(|f| f.chain == "p1" && f.source_classes == 0 && f.target_classes > 0);
    Ok((
        reproduced,
        json!({ "unit_isomorphism": cmp.isomorphism, "failure": failure.map(failure_json) }),
    ))
}

/// For a non-surjective base change, pulling back and pushing forward loses
/// everything over the missed element.
fn eval_counit() -> Result<(bool, Value)> {
    let bc = base_change("prop-3-2-ii")?;
    let y = bc.y.as_ref().ok_or_else(|| Error::InvalidInput("missing Y".into()))?;
    let (eps, _) = counit(&bc.alpha, y)?;
    let empty = eps.source.body.is_empty();
    let cmp = spi0_compare(&eps)?;
    Ok((
        empty && !cmp.isomorphism,
        json!({
            "pushforward_of_pullback_empty": empty,
            "counit_isomorphism": cmp.isomorphism,
            "failure": cmp.failure.map(failure_json),
        }),
    ))
}

/// A bijective but not order-reflecting base change: `f^◁` is a `π₀`
/// isomorphism while `f_▷` misses the edge chain.
fn eval_order_mismatch() -> Result<(bool, Value)> {
    let bc = base_change("prop-3-2-iii")?;
    let f = bc.f.as_ref().ok_or_else(|| Error::InvalidInput("missing map".into()))?;
    let fac = factorize(f)?;
    let left = spi0_compare(&fac.left)?;
    let right = spi0_map(&fac.right)?;
    let q = &f.target.base;
    let edge = q.parse_chain("q0<q1")?;
    let at = right.source.chain_index(&edge).expect("chain of Q");
    let (s, t) = (right.source.classes[at].len(), right.target.classes[at].len());
    let reproduced = left.isomorphism && s == 0 && t > 0;
    Ok((
        reproduced,
        json!({
            "left_isomorphism": left.isomorphism,
            "right_isomorphism": right.is_isomorphism(),
            "right_at_q0<q1": { "source_classes": s, "target_classes": t },
            "right_failure": right.first_failure().map(failure_json),
        }),
    ))
}

/// `sπ₀` is a point on every chain, yet `N(P)` admits no filtered map in.
fn eval_example_1_14() -> Result<(bool, Value)> {
    let k = example_1_14()?;
    let s = spi0(&k)?;
    let pointing = global_pointing_exists(&k)?;
    let reproduced = s.chains.len() == 25 && s.is_constant_point() && pointing.is_none();
    Ok((
        reproduced,
        json!({
            "chains": s.chains.len(),
            "constant_point": s.is_constant_point(),
            "global_pointing": pointing.is_some(),
            "spi0": spi0_to_json(&s),
        }),
    ))
}

fn failure_json(f: crate::homotopy::ComparisonFailure) -> Value {
    json!({
        "chain": f.chain,
        "source_classes": f.source_classes,
        "target_classes": f.target_classes,
        "reason": f.reason,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_parses() {
        for name in NAMES {
            source(name).unwrap();
        }
        assert!(source("nope").is_err());
        let k = example_1_14().unwrap();
        assert_eq!(k.body.counts(), vec![12, 24, 12]);
    }

    #[test]
    fn small_builtins_reproduce() {
        for name in ["remark-a3", "prop-3-2-i", "prop-3-2-ii", "prop-3-2-iii"] {
            let r = evaluate(name).unwrap();
            assert!(r.reproduced, "{name}: {}", r.payload);
        }
    }

    #[test]
    fn example_1_14_is_locally_pointed_only() {
        let r = evaluate("example-1-14").unwrap();
        assert!(r.reproduced, "{}", r.payload);
        assert_eq!(r.payload["chains"], 25);
    }
}
