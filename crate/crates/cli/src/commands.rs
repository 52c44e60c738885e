use std::sync::Arc;

use serde_json::{json, Value};
use strat_core::builtin::{self, NAMES};
use strat_core::diagrams::colim_diagram;
use strat_core::dot::{chains_dot, export_dot, poset_dot, set_diagram_dot, spi0_dot, DotObject};
use strat_core::filtered::{factorize, FilteredSSet};
use strat_core::gen;
use strat_core::homotopy::{global_pointing_with_budget, spi0_compare, spi0_with_budget, Comparison, SPi0};
use strat_core::json::{
    cell_complex_from_json, diagram_from_json, filtered_map_to_json, fss_from_json, fss_to_json, poset_from_json,
    set_diagram_from_json, smap_to_json, spi0_to_json, square_from_json, stratified_map_from_json, violation_to_json,
    CellComplexJson, DiagramJson, FssJson, MapJson, PosetJson, SetDiagramJson, SquareJson,
};
use strat_core::lifting::{
    find_lift_with_budget, generating_sets, retract_decompose, rlp_against, LiftingProblem, RlpVerdict,
};
use strat_core::numeric::{canonicalize, lemma217_homotopy, lemma217_suite, phi_p, Scalar};
use strat_core::setdiagram::{almost_filtered, mono_into_colim, set_colim};
use strat_core::{Budget, Chain, Error, Poset, Result};

use crate::report::{Input, Outcome, Verdict};

/// Flags shared by every subcommand.
pub struct Globals {
    pub seed: u64,
    pub budget: Option<usize>,
    pub bound: Option<usize>,
}

impl Globals {
    fn budget(&self) -> Budget {
        self.budget.map_or_else(Budget::default, Budget)
    }
}

fn fss(input: &Input) -> Result<Arc<FilteredSSet>> {
    Ok(Arc::new(fss_from_json(&input.parse::<FssJson>()?)?))
}

pub fn nerve(input: &Input) -> Result<Outcome> {
    let p = poset_from_json(&input.parse::<PosetJson>()?)?;
    let chains = p.chains();
    let mut census = vec![0usize; p.height()];
    for c in &chains {
        census[c.dimension()] += 1;
    }
    let text = std::iter::once(format!("elements: {}", p.len()))
        .chain(
            census
                .iter()
                .enumerate()
                .map(|(d, n)| format!("chains of dimension {d}: {n}")),
        )
        .chain(std::iter::once(format!("chains: {}", chains.len())))
        .collect();
    let payload = json!({ "elements": p.len(), "chains": chains.len(), "census": census });
    let dot = format!("{}{}", poset_dot(&p), chains_dot(&p));
    Ok(Outcome::new(Verdict::Pass, payload, text).with_dot(dot))
}

fn spi0_lines(s: &SPi0, only: Option<&Chain>) -> Vec<String> {
    s.chains
        .iter()
        .zip(&s.classes)
        .filter(|(c, _)| only.is_none_or(|o| o == *c))
        .map(|(c, cl)| format!("{}: {{{}}}", s.base.chain_name(c), cl.join(", ")))
        .collect()
}

pub fn spi0(input: &Input, chain: Option<&str>, g: &Globals) -> Result<Outcome> {
    let k = fss(input)?;
    let s = spi0_with_budget(&k, g.budget())?;
    let only = chain.map(|c| k.base.parse_chain(c)).transpose()?;
    let payload = match &only {
        None => spi0_to_json(&s),
        Some(c) => json!({ "chain": k.base.chain_name(c), "classes": s.classes_at(c) }),
    };
    Ok(Outcome::new(Verdict::Pass, payload, spi0_lines(&s, only.as_ref())).with_dot(spi0_dot(&s)))
}

pub fn pointing(input: &Input, g: &Globals) -> Result<Outcome> {
    let k = fss(input)?;
    let found = global_pointing_with_budget(&k, g.budget())?;
    let text = vec![format!(
        "global pointing: {}",
        if found.is_some() { "exists" } else { "none" }
    )];
    let payload = json!({ "exists": found.is_some(), "map": found.as_ref().map(filtered_map_to_json) });
    Ok(Outcome::new(Verdict::from_bool(found.is_some()), payload, text))
}

pub fn colim(input: &Input, g: &Globals) -> Result<Outcome> {
    let raw: Value = input.parse()?;
    let f = if raw.get("cells").is_some() {
        cell_complex_from_json(&input.parse::<CellComplexJson>()?)?.0
    } else {
        diagram_from_json(&input.parse::<DiagramJson>()?)?
    };
    let (_, c) = colim_diagram(&f, g.budget())?;
    let counts = c.fss.body.counts();
    let legs_mono: Vec<Value> = f
        .chains()
        .iter()
        .zip(&c.legs)
        .map(|(phi, leg)| json!({ "chain": f.base.chain_name(phi), "mono": leg.is_mono() }))
        .collect();
    let mut text = vec![format!("generators by degree: {counts:?}")];
    text.extend(
        legs_mono
            .iter()
            .map(|l| format!("leg {}: mono {}", l["chain"].as_str().unwrap(), l["mono"])),
    );
    let payload = json!({ "counts": counts, "legs": legs_mono, "colimit": fss_to_json(&c.fss) });
    Ok(Outcome::new(Verdict::Pass, payload, text))
}

pub fn almost_filtered_cmd(input: &Input, show_witness: bool, g: &Globals) -> Result<Outcome> {
    let d = set_diagram_from_json(&input.parse::<SetDiagramJson>()?)?;
    let bound = g.bound.unwrap_or_else(|| d.total_elements().max(1));
    let af = almost_filtered(&d, bound)?;
    let colim = set_colim(&d);
    let mono: serde_json::Map<String, Value> = (0..d.len())
        .map(|o| (d.shape.name(o).to_string(), Value::Bool(mono_into_colim(&d, o))))
        .collect();
    let witness = af.witness.as_ref().map(|w| violation_to_json(&d, w));
    let mut text = vec![
        format!("almost filtered: {}", af.holds),
        format!(
            "bound: {}{}",
            af.bound,
            if af.conditional {
                " (violation only beyond the bound)"
            } else {
                ""
            }
        ),
        format!("colimit classes: {}", colim.classes.len()),
    ];
    text.extend(mono.iter().map(|(o, m)| format!("mono into colimit at {o}: {m}")));
    if show_witness {
        if let Some(w) = &witness {
            text.push(format!("witness: {w}"));
        }
    }
    let payload = json!({
        "almost_filtered": af.holds,
        "bound": af.bound,
        "conditional": af.conditional,
        "colimit_classes": colim.classes.len(),
        "mono_into_colim": mono,
        "witness": witness,
    });
    Ok(Outcome::new(Verdict::from_bool(af.holds), payload, text).with_dot(set_diagram_dot(&d)))
}

pub fn lift(input: &Input, g: &Globals) -> Result<Outcome> {
    let sq = square_from_json(&input.parse::<SquareJson>()?)?;
    let prob = LiftingProblem::new(sq.i, sq.p, sq.top, sq.bottom)?;
    let h = find_lift_with_budget(&prob, g.budget())?;
    let text = vec![format!("lift: {}", if h.is_some() { "found" } else { "none" })];
    let payload = json!({ "exists": h.is_some(), "lift": h.as_ref().map(|h| smap_to_json(&h.map)) });
    Ok(Outcome::new(Verdict::from_bool(h.is_some()), payload, text))
}

pub fn rlp(input: &Input, cells: &str, n_max: usize, g: &Globals) -> Result<Outcome> {
    let mj: MapJson = input.parse()?;
    let f = strat_core::json::filtered_map_from_json(&mj)?;
    let (i, j) = generating_sets(&f.source.base, n_max);
    let cells = match cells {
        "I" | "i" => i,
        "J" | "j" => j,
        other => return Err(Error::InvalidInput(format!("--cells must be I or J, not `{other}`"))),
    };
    let cap = g.budget.unwrap_or(strat_core::lifting::DEFAULT_SQUARE_CAP);
    let base = f.source.base.clone();
    Ok(match rlp_against(&f, &cells, cap)? {
        RlpVerdict::Pass { squares } => Outcome::new(
            Verdict::Pass,
            json!({ "cells": cells.len(), "squares": squares }),
            vec![format!("all {squares} squares over {} cells lift", cells.len())],
        ),
        RlpVerdict::Fail {
            squares,
            cell,
            top,
            bottom,
        } => Outcome::new(
            Verdict::Fail,
            json!({
                "squares": squares,
                "cell": cell.name(&base),
                "top": smap_to_json(&top.map),
                "bottom": smap_to_json(&bottom.map),
            }),
            vec![format!(
                "no lift for a square from {} (square {squares})",
                cell.name(&base)
            )],
        ),
        RlpVerdict::BudgetExceeded { cell, cap } => Outcome::new(
            Verdict::Budget,
            json!({ "cell": cell.name(&base), "cap": cap }),
            vec![format!("more than {cap} squares from {}", cell.name(&base))],
        ),
    })
}

/// A tuple such as `0,0,1` or `p<p<q`; without a poset, the elements are
/// integers on the total order `0 < … < max`.
fn parse_tuple(text: &str, poset: Option<&Input>) -> Result<(Arc<Poset>, Vec<usize>)> {
    let parts: Vec<&str> = text.split([',', '<']).map(str::trim).collect();
    let base = match poset {
        Some(p) => poset_from_json(&p.parse::<PosetJson>()?)?,
        None => {
            let max = parts
                .iter()
                .map(|s| {
                    s.parse::<usize>()
                        .map_err(|_| Error::InvalidInput(format!("`{s}` is not an integer")))
                })
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .max()
                .unwrap_or(0);
            Poset::total_order(max + 1)
        }
    };
    let tuple = parts.iter().map(|s| base.index_of(s)).collect::<Result<Vec<_>>>()?;
    Ok((Arc::new(base), tuple))
}

pub fn retract(phi: &str, poset: Option<&Input>) -> Result<Outcome> {
    let (base, tuple) = parse_tuple(phi, poset)?;
    let r = retract_decompose(&base, &tuple)?;
    let vertex_names = |x: &FilteredSSet| -> Vec<String> {
        (0..x.body.count(0))
            .map(|v| x.body.id(strat_core::GenRef::new(0, v)).to_string())
            .collect()
    };
    let section: Vec<String> = {
        let names = vertex_names(&r.product);
        r.section
            .map
            .vertex_map()
            .iter()
            .map(|&v| names[v as usize].clone())
            .collect()
    };
    let f_map: Vec<String> = {
        let (from, to) = (vertex_names(&r.product), vertex_names(&r.delta));
        r.f.map
            .vertex_map()
            .iter()
            .zip(&from)
            .map(|(&v, a)| format!("{a}→{}", to[v as usize]))
            .collect()
    };
    let identity = r.composite_is_identity();
    let text = vec![
        format!("phi: {}", base.tuple_name(&tuple)),
        format!("phibar: {} (k = {})", base.chain_name(&r.phibar), r.k),
        format!("section on vertices: {}", section.join(" ")),
        format!("retraction on vertices: {}", f_map.join(" ")),
        format!("composite is the identity: {identity}"),
    ];
    let payload = json!({
        "phi": base.tuple_name(&tuple),
        "phibar": base.chain_name(&r.phibar),
        "k": r.k,
        "section": section,
        "retraction": f_map,
        "composite_is_identity": identity,
    });
    Ok(Outcome::new(Verdict::from_bool(identity), payload, text))
}

/// Elements named in the chains, totally ordered by name.
fn implied_order(chains: &[&str]) -> Result<Poset> {
    let mut names: Vec<&str> = chains.iter().flat_map(|c| c.split('<')).map(str::trim).collect();
    names.sort_unstable();
    names.dedup();
    let pairs: Vec<(&str, &str)> = names.windows(2).map(|w| (w[0], w[1])).collect();
    Poset::from_relations(&names, &pairs)
}

pub struct H217<'a> {
    pub psi: &'a str,
    pub targets: &'a str,
    pub point: &'a str,
    pub s: f64,
    pub f32: bool,
}

fn h217_with<T: Scalar + std::str::FromStr>(base: &Poset, args: &H217) -> Result<(Vec<f64>, Chain, usize)> {
    let psi = base.parse_chain(args.psi)?;
    let targets = base.parse_chain(args.targets)?;
    let coords = args
        .point
        .split(',')
        .map(|c| {
            c.trim()
                .parse::<T>()
                .map_err(|_| Error::InvalidInput(format!("bad coordinate `{c}`")))
        })
        .collect::<Result<Vec<T>>>()?;
    let pt = canonicalize(&psi, &coords)?;
    let s = T::from_f64(args.s).ok_or_else(|| Error::InvalidInput("bad s".into()))?;
    let out = lemma217_homotopy(&psi, &targets, &pt, s)?;
    let on_psi = out.coords_on(&psi).expect("result lies over psi");
    Ok((
        on_psi.iter().map(|c| c.to_f64().unwrap()).collect(),
        out.carrier().clone(),
        phi_p(&out),
    ))
}

pub fn h217(args: &H217, poset: Option<&Input>) -> Result<Outcome> {
    let base = match poset {
        Some(p) => poset_from_json(&p.parse::<PosetJson>()?)?,
        None => implied_order(&[args.psi, args.targets])?,
    };
    let (coords, carrier, last) = if args.f32 {
        h217_with::<f32>(&base, args)?
    } else {
        h217_with::<f64>(&base, args)?
    };
    let text = vec![
        format!(
            "H(x, {}) on {}: {}",
            args.s,
            args.psi,
            coords.iter().map(|c| format!("{c}")).collect::<Vec<_>>().join(",")
        ),
        format!("carrier: {}", base.chain_name(&carrier)),
        format!("phi_P: {}", base.name(last)),
    ];
    let payload = json!({ "coords": coords, "carrier": base.chain_name(&carrier), "phi_p": base.name(last) });
    Ok(Outcome::new(Verdict::Pass, payload, text))
}

pub fn glue(poset: &Input, samples: usize, g: &Globals) -> Result<Outcome> {
    let base = poset_from_json(&poset.parse::<PosetJson>()?)?;
    let mut rng = gen::rng(g.seed);
    let suite = lemma217_suite(&base, samples, &mut rng)?;
    let text = vec![
        format!("chain pairs: {}", suite.pairs),
        format!("samples: {}", suite.samples),
        format!("max sum error: {:e}", suite.max_sum_error),
        format!("max glue deviation: {:e}", suite.max_glue_deviation),
        format!("phi_P preserved: {}", suite.phi_preserved),
        format!("endpoints hold: {}", suite.endpoints_hold),
    ];
    let payload = json!({
        "seed": g.seed,
        "pairs": suite.pairs,
        "samples": suite.samples,
        "max_sum_error": suite.max_sum_error,
        "max_glue_deviation": suite.max_glue_deviation,
        "phi_preserved": suite.phi_preserved,
        "endpoints_hold": suite.endpoints_hold,
    });
    Ok(Outcome::new(Verdict::from_bool(suite.passed()), payload, text))
}

fn comparison_json(c: &Comparison) -> Value {
    json!({
        "isomorphism": c.isomorphism,
        "failure": c.failure.as_ref().map(|f| json!({
            "chain": f.chain,
            "source_classes": f.source_classes,
            "target_classes": f.target_classes,
            "reason": f.reason,
        })),
    })
}

fn comparison_line(side: &str, c: &Comparison) -> String {
    match &c.failure {
        None => format!("{side}: isomorphism"),
        Some(f) => format!("{side}: fails at {} ({})", f.chain, f.reason),
    }
}

/// Compares `sπ₀` through both factorizations of a stratified map.
pub fn compare(input: &Input) -> Result<Outcome> {
    let f = stratified_map_from_json(&input.parse::<MapJson>()?)?;
    let fac = factorize(&f)?;
    let left = spi0_compare(&fac.left)?;
    let right = spi0_compare(&fac.right)?;
    let text = vec![
        comparison_line("f^◁ : X → α^*Y", &left),
        comparison_line("f_▷ : α_*X → Y", &right),
    ];
    let payload = json!({ "left": comparison_json(&left), "right": comparison_json(&right) });
    Ok(Outcome::new(
        Verdict::from_bool(left.isomorphism && right.isomorphism),
        payload,
        text,
    ))
}

pub fn builtin_cmd(name: Option<&str>) -> Result<Outcome> {
    let Some(name) = name else {
        let text = NAMES.iter().map(|n| n.to_string()).collect();
        return Ok(Outcome::new(Verdict::Pass, json!(NAMES), text));
    };
    let r = builtin::evaluate(name)?;
    let mut text = vec![format!(
        "{}: {}",
        r.name,
        if r.reproduced { "reproduced" } else { "NOT reproduced" }
    )];
    if let Value::Object(m) = &r.payload {
        for (k, v) in m {
            if k != "spi0" {
                text.push(format!("  {k}: {v}"));
            }
        }
    }
    let mut out = Outcome::new(
        Verdict::from_bool(r.reproduced),
        json!({ "name": r.name, "payload": r.payload }),
        text,
    );
    match name {
        "remark-a3" => out = out.with_dot(set_diagram_dot(&builtin::remark_a3()?)),
        "example-1-14" => {
            let k = builtin::example_1_14()?;
            out = out.with_dot(spi0_dot(&strat_core::homotopy::spi0(&k)?));
        }
        _ => {}
    }
    Ok(out)
}

pub fn export_dot_cmd(kind: &str, input: &Input, g: &Globals) -> Result<Outcome> {
    let dot = match kind {
        "poset" | "chains" | "rp" => {
            let p = poset_from_json(&input.parse::<PosetJson>()?)?;
            export_dot(&DotObject::from_kind(kind, &p)?)
        }
        "setdiagram" => export_dot(&DotObject::SetDiagram(&set_diagram_from_json(
            &input.parse::<SetDiagramJson>()?,
        )?)),
        "spi0" => export_dot(&DotObject::SPi0(&spi0_with_budget(&fss(input)?, g.budget())?)),
        other => return Err(Error::UnsupportedObject(other.to_string())),
    };
    let text = dot.lines().map(str::to_string).collect();
    Ok(Outcome::new(Verdict::Pass, json!({ "dot": dot }), text).with_dot(dot))
}
