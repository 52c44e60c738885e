//! JSON formats for posets, simplicial sets, filtered objects, maps and
//! diagrams. Chains are written as `"<"`-joined element ids.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::diagrams::{cell_complex, CellSpec, Diagram};
use crate::error::{Error, Result};
use crate::filtered::{FilteredMap, FilteredSSet, StratifiedMap};
use crate::homotopy::SPi0;
use crate::poset::{Poset, PosetMap};
use crate::setdiagram::{SetArrow, SetDiagram, Violation};
use crate::simplicial::{GenRef, SMap, SSet, SSetBuilder, SimplexTerm};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PosetJson {
    pub elements: Vec<String>,
    #[serde(default)]
    pub relations: Vec<(String, String)>,
}

/// `{"g": id, "word": [...]}`; a bare id string is accepted on input.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TermJson {
    Full {
        g: String,
        #[serde(default)]
        word: Vec<usize>,
    },
    Id(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenJson {
    pub id: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub faces: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SSetJson {
    pub generators: BTreeMap<String, Vec<GenJson>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SMapJson {
    pub images: BTreeMap<String, TermJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FssJson {
    pub poset: PosetJson,
    #[serde(flatten)]
    pub sset: SSetJson,
    pub phi: BTreeMap<String, Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MapJson {
    pub source: FssJson,
    pub target: FssJson,
    pub images: BTreeMap<String, TermJson>,
    #[serde(default, rename = "posetMap", skip_serializing_if = "Option::is_none")]
    pub poset_map: Option<BTreeMap<String, String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SetArrowJson {
    pub from: String,
    pub to: String,
    pub map: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SetDiagramJson {
    pub shape: PosetJson,
    pub values: BTreeMap<String, Vec<String>>,
    pub arrows: Vec<SetArrowJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagramJson {
    pub poset: PosetJson,
    pub values: BTreeMap<String, SSetJson>,
    /// Keyed by `"φ|ψ"`.
    #[serde(default)]
    pub restrictions: BTreeMap<String, SMapJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellJson {
    pub n: usize,
    pub phi: String,
    #[serde(default)]
    pub attach: BTreeMap<String, TermJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellComplexJson {
    pub poset: PosetJson,
    pub cells: Vec<CellJson>,
}

/// A lifting square `i : A → B`, `p : X → Y`, `top : A → X`, `bottom : B → Y`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SquareJson {
    #[serde(rename = "A")]
    pub a: FssJson,
    #[serde(rename = "B")]
    pub b: FssJson,
    #[serde(rename = "X")]
    pub x: FssJson,
    #[serde(rename = "Y")]
    pub y: FssJson,
    pub i: SMapJson,
    pub p: SMapJson,
    pub top: SMapJson,
    pub bottom: SMapJson,
}

pub fn poset_from_json(j: &PosetJson) -> Result<Poset> {
    Poset::from_relations(&j.elements, &j.relations)
}

pub fn poset_to_json(p: &Poset) -> PosetJson {
    PosetJson {
        elements: p.elements().to_vec(),
        relations: p
            .covers()
            .into_iter()
            .map(|(a, b)| (p.name(a).to_string(), p.name(b).to_string()))
            .collect(),
    }
}

pub fn term_from_json(x: &SSet, j: &TermJson) -> Result<SimplexTerm> {
    let (g, word) = match j {
        TermJson::Full { g, word } => (g, word.as_slice()),
        TermJson::Id(g) => (g, &[][..]),
    };
    let r = x.lookup(g).ok_or_else(|| Error::UnknownElement(g.clone()))?;
    SimplexTerm::from_word(r, word)
}

pub fn term_to_json(x: &SSet, t: &SimplexTerm) -> TermJson {
    TermJson::Full {
        g: x.id(t.gen).to_string(),
        word: t.word(),
    }
}

fn dims(j: &SSetJson) -> Result<Vec<(usize, &Vec<GenJson>)>> {
    let mut out = j
        .generators
        .iter()
        .map(|(k, v)| {
            k.parse::<usize>()
                .map(|d| (d, v))
                .map_err(|_| Error::InvalidInput(format!("bad degree `{k}`")))
        })
        .collect::<Result<Vec<_>>>()?;
    out.sort_by_key(|(d, _)| *d);
    Ok(out)
}

pub fn sset_from_json(j: &SSetJson) -> Result<SSet> {
    let mut b = SSetBuilder::new();
    for (d, gens) in dims(j)? {
        for g in gens {
            if d == 0 {
                if !g.faces.is_empty() {
                    return Err(Error::MalformedSSet(format!("vertex `{}` has faces", g.id)));
                }
                b.add_vertex(g.id.clone())?;
                continue;
            }
            let faces = g
                .faces
                .iter()
                .map(|f| {
                    let (id, word) = match f {
                        TermJson::Full { g, word } => (g, word.as_slice()),
                        TermJson::Id(g) => (g, &[][..]),
                    };
                    let r = b.id_of(id).ok_or_else(|| Error::UnknownElement(id.clone()))?;
                    SimplexTerm::from_word(r, word)
                })
                .collect::<Result<Vec<_>>>()?;
            b.add_simplex(g.id.clone(), faces)?;
        }
    }
    b.build()
}

pub fn sset_to_json(x: &SSet) -> SSetJson {
    let mut generators = BTreeMap::new();
    for d in 0..x.counts().len() {
        let gens = x
            .generators(d)
            .iter()
            .map(|g| GenJson {
                id: g.id.clone(),
                faces: g.faces.iter().map(|f| term_to_json(x, f)).collect(),
            })
            .collect();
        generators.insert(d.to_string(), gens);
    }
    SSetJson { generators }
}

fn images_from_json(
    source: &SSet,
    target: &SSet,
    images: &BTreeMap<String, TermJson>,
) -> Result<Vec<Vec<SimplexTerm>>> {
    (0..source.counts().len())
        .map(|d| {
            (0..source.count(d))
                .map(|i| {
                    let id = source.id(GenRef::new(d, i));
                    let t = images
                        .get(id)
                        .ok_or_else(|| Error::NotASimplicialMap(format!("no image for `{id}`")))?;
                    term_from_json(target, t)
                })
                .collect()
        })
        .collect()
}

pub fn smap_from_json(source: Arc<SSet>, target: Arc<SSet>, j: &SMapJson) -> Result<SMap> {
    let images = images_from_json(&source, &target, &j.images)?;
    SMap::new(source, target, images)
}

fn images_to_json(m: &SMap) -> BTreeMap<String, TermJson> {
    m.source
        .gen_refs()
        .map(|g| (m.source.id(g).to_string(), term_to_json(&m.target, m.image(g))))
        .collect()
}

pub fn smap_to_json(m: &SMap) -> SMapJson {
    SMapJson {
        images: images_to_json(m),
    }
}

/// Labels come from the vertices; tuples given for higher generators are checked.
pub fn fss_from_json(j: &FssJson) -> Result<FilteredSSet> {
    let base = Arc::new(poset_from_json(&j.poset)?);
    fss_over(base, j)
}

fn fss_over(base: Arc<Poset>, j: &FssJson) -> Result<FilteredSSet> {
    let body = Arc::new(sset_from_json(&j.sset)?);
    for id in j.phi.keys() {
        if body.lookup(id).is_none() {
            return Err(Error::UnknownElement(id.clone()));
        }
    }
    let labels = (0..body.count(0))
        .map(|v| {
            let id = body.id(GenRef::new(0, v));
            match j.phi.get(id).map(Vec::as_slice) {
                Some([p]) => base.index_of(p),
                Some(_) => Err(Error::PhiNotSimplicial(id.to_string())),
                None => Err(Error::InvalidInput(format!("no phi for vertex `{id}`"))),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let k = FilteredSSet::from_vertex_labels(base.clone(), body.clone(), labels)?;
    for (id, tuple) in &j.phi {
        let g = body.lookup(id).expect("checked above");
        let given = tuple.iter().map(|p| base.index_of(p)).collect::<Result<Vec<_>>>()?;
        if given != k.gen_phi(g) {
            return Err(Error::PhiNotSimplicial(id.clone()));
        }
    }
    Ok(k)
}

pub fn fss_to_json(k: &FilteredSSet) -> FssJson {
    let phi = k
        .body
        .gen_refs()
        .map(|g| {
            let t: Vec<String> = k.gen_phi(g).iter().map(|&p| k.base.name(p).to_string()).collect();
            (k.body.id(g).to_string(), t)
        })
        .collect();
    FssJson {
        poset: poset_to_json(&k.base),
        sset: sset_to_json(&k.body),
        phi,
    }
}

pub fn filtered_map_from_json(j: &MapJson) -> Result<FilteredMap> {
    let source = Arc::new(fss_from_json(&j.source)?);
    let target = Arc::new(fss_from_json(&j.target)?);
    let images = images_from_json(&source.body, &target.body, &j.images)?;
    let map = SMap::new(source.body.clone(), target.body.clone(), images)?;
    FilteredMap::new(source, target, map)
}

pub fn stratified_map_from_json(j: &MapJson) -> Result<StratifiedMap> {
    let source = Arc::new(fss_from_json(&j.source)?);
    let target = Arc::new(fss_from_json(&j.target)?);
    let pm = j
        .poset_map
        .as_ref()
        .ok_or_else(|| Error::InvalidInput("missing posetMap".into()))?;
    let alpha = poset_map_from_json(source.base.clone(), target.base.clone(), pm)?;
    let images = images_from_json(&source.body, &target.body, &j.images)?;
    let map = SMap::new(source.body.clone(), target.body.clone(), images)?;
    StratifiedMap::new(source, target, alpha, map)
}

pub fn poset_map_from_json(source: Arc<Poset>, target: Arc<Poset>, j: &BTreeMap<String, String>) -> Result<PosetMap> {
    let assignment = source
        .elements()
        .iter()
        .map(|e| {
            let t = j
                .get(e)
                .ok_or_else(|| Error::InvalidInput(format!("posetMap misses `{e}`")))?;
            target.index_of(t)
        })
        .collect::<Result<Vec<_>>>()?;
    PosetMap::new(source, target, assignment)
}

pub fn poset_map_to_json(a: &PosetMap) -> BTreeMap<String, String> {
    a.source
        .elements()
        .iter()
        .enumerate()
        .map(|(i, e)| (e.clone(), a.target.name(a.apply(i)).to_string()))
        .collect()
}

pub fn filtered_map_to_json(f: &FilteredMap) -> MapJson {
    MapJson {
        source: fss_to_json(&f.source),
        target: fss_to_json(&f.target),
        images: images_to_json(&f.map),
        poset_map: None,
    }
}

pub fn stratified_map_to_json(f: &StratifiedMap) -> MapJson {
    MapJson {
        source: fss_to_json(&f.source),
        target: fss_to_json(&f.target),
        images: images_to_json(&f.map),
        poset_map: Some(poset_map_to_json(&f.alpha)),
    }
}

pub fn set_diagram_from_json(j: &SetDiagramJson) -> Result<SetDiagram> {
    let shape = Arc::new(poset_from_json(&j.shape)?);
    for k in j.values.keys() {
        shape.index_of(k)?;
    }
    let values: Vec<Vec<String>> = shape
        .elements()
        .iter()
        .map(|e| j.values.get(e).cloned().unwrap_or_default())
        .collect();
    let position = |o: usize, x: &str| {
        values[o]
            .iter()
            .position(|y| y == x)
            .ok_or_else(|| Error::UnknownElement(format!("{x} in {}", shape.name(o))))
    };
    let arrows = j
        .arrows
        .iter()
        .map(|a| {
            let (from, to) = (shape.index_of(&a.from)?, shape.index_of(&a.to)?);
            let map = values[from]
                .iter()
                .map(|x| {
                    let y = a
                        .map
                        .get(x)
                        .ok_or_else(|| Error::NotAFunctor(format!("arrow {} -> {} misses `{x}`", a.from, a.to)))?;
                    position(to, y)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(SetArrow { from, to, map })
        })
        .collect::<Result<Vec<_>>>()?;
    SetDiagram::new(shape.clone(), values, arrows)
}

pub fn set_diagram_to_json(g: &SetDiagram) -> SetDiagramJson {
    let shape = &g.shape;
    let values = (0..g.len())
        .map(|o| (shape.name(o).to_string(), g.value(o).to_vec()))
        .collect();
    let arrows = g
        .generating_arrows()
        .into_iter()
        .map(|a| SetArrowJson {
            from: shape.name(a.from).to_string(),
            to: shape.name(a.to).to_string(),
            map: a
                .map
                .iter()
                .enumerate()
                .map(|(x, &y)| (g.value(a.from)[x].clone(), g.value(a.to)[y].clone()))
                .collect(),
        })
        .collect();
    SetDiagramJson {
        shape: poset_to_json(shape),
        values,
        arrows,
    }
}

pub fn diagram_from_json(j: &DiagramJson) -> Result<Diagram> {
    let base = Arc::new(poset_from_json(&j.poset)?);
    let mut values = HashMap::new();
    for (c, s) in &j.values {
        values.insert(base.parse_chain(c)?, Arc::new(sset_from_json(s)?));
    }
    let empty = Arc::new(SSet::empty());
    let mut restrictions = HashMap::new();
    for (key, m) in &j.restrictions {
        let (a, b) = key
            .split_once('|')
            .ok_or_else(|| Error::InvalidInput(format!("restriction key `{key}` is not `phi|psi`")))?;
        let (phi, psi) = (base.parse_chain(a)?, base.parse_chain(b)?);
        let src = values.get(&phi).cloned().unwrap_or_else(|| empty.clone());
        let tgt = values.get(&psi).cloned().unwrap_or_else(|| empty.clone());
        restrictions.insert((phi, psi), smap_from_json(src, tgt, m)?);
    }
    Diagram::new(base, values, restrictions)
}

pub fn diagram_to_json(f: &Diagram) -> DiagramJson {
    let base = &f.base;
    let values = f
        .chains()
        .iter()
        .filter(|c| !f.value(c).is_empty())
        .map(|c| (base.chain_name(c), sset_to_json(f.value(c))))
        .collect();
    let restrictions = f
        .facet_restrictions()
        .into_iter()
        .filter(|(phi, _, _)| !f.value(phi).is_empty())
        .map(|(phi, psi, m)| {
            (
                format!("{}|{}", base.chain_name(&phi), base.chain_name(&psi)),
                smap_to_json(m),
            )
        })
        .collect();
    DiagramJson {
        poset: poset_to_json(base),
        values,
        restrictions,
    }
}

/// Cell specs resolve attaching images against the complex built so far.
pub fn cell_complex_from_json(j: &CellComplexJson) -> Result<(Diagram, Vec<CellSpec>)> {
    let base = Arc::new(poset_from_json(&j.poset)?);
    let mut current = cell_complex(base.clone(), &[])?;
    let mut specs = Vec::with_capacity(j.cells.len());
    for (k, c) in j.cells.iter().enumerate() {
        let phi = base.parse_chain(&c.phi)?;
        let at = current.value(&phi).clone();
        let attach = c
            .attach
            .iter()
            .map(|(id, t)| Ok((id.clone(), term_from_json(&at, t)?)))
            .collect::<Result<HashMap<_, _>>>()
            .map_err(|e: Error| Error::InvalidAttachment(format!("cell {k}: {e}")))?;
        let spec = CellSpec { n: c.n, phi, attach };
        current = crate::diagrams::attach_cell(&current, k, &spec)?;
        specs.push(spec);
    }
    Ok((current, specs))
}

/// Filtered objects and maps of a lifting square.
pub struct Square {
    pub i: FilteredMap,
    pub p: FilteredMap,
    pub top: FilteredMap,
    pub bottom: FilteredMap,
}

pub fn square_from_json(j: &SquareJson) -> Result<Square> {
    let base = Arc::new(poset_from_json(&j.a.poset)?);
    let obj = |f: &FssJson| -> Result<Arc<FilteredSSet>> {
        if poset_from_json(&f.poset)? != *base {
            return Err(Error::BaseMismatch);
        }
        Ok(Arc::new(fss_over(base.clone(), f)?))
    };
    let (a, b, x, y) = (obj(&j.a)?, obj(&j.b)?, obj(&j.x)?, obj(&j.y)?);
    let map = |s: &Arc<FilteredSSet>, t: &Arc<FilteredSSet>, m: &SMapJson| -> Result<FilteredMap> {
        FilteredMap::new(s.clone(), t.clone(), smap_from_json(s.body.clone(), t.body.clone(), m)?)
    };
    Ok(Square {
        i: map(&a, &b, &j.i)?,
        p: map(&x, &y, &j.p)?,
        top: map(&a, &x, &j.top)?,
        bottom: map(&b, &y, &j.bottom)?,
    })
}

/// The functor table: classes per chain and the restriction maps.
pub fn spi0_to_json(s: &SPi0) -> serde_json::Value {
    let chains: Vec<serde_json::Value> = s
        .chains
        .iter()
        .zip(&s.classes)
        .map(|(c, cl)| serde_json::json!({ "chain": s.base.chain_name(c), "classes": cl }))
        .collect();
    let mut restrictions = Vec::new();
    for (psi, phi) in s.base.chain_inclusions() {
        if psi == phi {
            continue;
        }
        let r = s.restriction(&phi, &psi).expect("every inclusion has a restriction");
        let a = s.chain_index(&phi).unwrap();
        let b = s.chain_index(&psi).unwrap();
        let map: BTreeMap<&str, &str> = r
            .iter()
            .enumerate()
            .map(|(c, &d)| (s.classes[a][c].as_str(), s.classes[b][d].as_str()))
            .collect();
        restrictions.push(serde_json::json!({
            "from": s.base.chain_name(&phi),
            "to": s.base.chain_name(&psi),
            "map": map,
        }));
    }
    serde_json::json!({ "chains": chains, "restrictions": restrictions })
}

/// A violation of the almost-filtered conditions, with object and element names.
pub fn violation_to_json(g: &SetDiagram, v: &Violation) -> serde_json::Value {
    let o = |d: usize| g.shape.name(d).to_string();
    let e = |d: usize, x: usize| g.value(d)[x].clone();
    match v {
        Violation::Square(w) => serde_json::json!({
            "kind": "square",
            "d": o(w.d), "d1": o(w.d1), "d2": o(w.d2), "d3": o(w.d3),
            "x": e(w.d, w.x), "x1": e(w.d1, w.x1), "x2": e(w.d2, w.x2), "x3": e(w.d3, w.x3), "y": e(w.d, w.y),
        }),
        Violation::Zigzag(z) => serde_json::json!({
            "kind": "zigzag",
            "n": z.n(),
            "steps": z.steps.iter().map(|&(d, x)| serde_json::json!([o(d), e(d, x)])).collect::<Vec<_>>(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sset_round_trip() {
        let x = SSet::horn(2, 1).unwrap();
        let j = sset_to_json(&x);
        let text = serde_json::to_string(&j).unwrap();
        let back: SSetJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back, j);
        assert_eq!(sset_from_json(&back).unwrap(), x);
    }

    #[test]
    fn bare_id_terms() {
        let text = r#"{"generators":{"0":[{"id":"a"},{"id":"b"}],"1":[{"id":"e","faces":["b","a"]}]}}"#;
        let j: SSetJson = serde_json::from_str(text).unwrap();
        let x = sset_from_json(&j).unwrap();
        assert_eq!(x.counts(), vec![2, 1]);
    }

    #[test]
    fn fss_checks_phi() {
        let text = r#"{"poset":{"elements":["p","q"],"relations":[["p","q"]]},
            "generators":{"0":[{"id":"a"},{"id":"b"}],"1":[{"id":"e","faces":["b","a"]}]},
            "phi":{"a":["p"],"b":["q"],"e":["q","q"]}}"#;
        let j: FssJson = serde_json::from_str(text).unwrap();
        assert!(matches!(fss_from_json(&j), Err(Error::PhiNotSimplicial(_))));
    }

    #[test]
    fn fss_round_trip() {
        let p = Arc::new(Poset::total_order(2));
        let k = crate::filtered::nerve_of(p);
        let j = fss_to_json(&k);
        let back: FssJson = serde_json::from_str(&serde_json::to_string(&j).unwrap()).unwrap();
        assert_eq!(back, j);
        assert_eq!(fss_from_json(&back).unwrap(), k);
    }
}
