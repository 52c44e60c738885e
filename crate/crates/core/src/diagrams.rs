//! Diagrams `R(P)^op → sSet`, the category `𝒞` of pairs `(Δ^φ, Δ^ψ)`, and
//! the colimit functor `F ↦ colim_𝒞 F ⊗ R(P)`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::filtered::{delta_phi, tensor_with_budget, FilteredMap, FilteredSSet};
use crate::poset::{Chain, Poset};
use crate::setdiagram::{SetArrow, SetDiagram};
use crate::simplicial::{colimit, subset_id, Budget, Colimit, GenRef, MapSearch, SMap, SSet, Shape, SimplexTerm};

/// A functor `R(P)^op → sSet`: a simplicial set per chain and a restriction
/// `F(φ) → F(ψ)` per inclusion `ψ ⊆ φ`.
#[derive(Clone, Debug)]
pub struct Diagram {
    pub base: Arc<Poset>,
    chains: Vec<Chain>,
    index: HashMap<Chain, usize>,
    values: Vec<Arc<SSet>>,
    restrictions: HashMap<(usize, usize), SMap>,
}

impl Diagram {
    /// `values` may omit chains (taken as empty). `restrictions` must contain
    /// every codimension-one restriction out of a non-empty value; any other
    /// supplied restriction is checked against the composite.
    pub fn new(
        base: Arc<Poset>,
        values: HashMap<Chain, Arc<SSet>>,
        restrictions: HashMap<(Chain, Chain), SMap>,
    ) -> Result<Self> {
        let chains = base.chains();
        let index: HashMap<Chain, usize> = chains.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
        for c in values.keys() {
            if !index.contains_key(c) {
                return Err(Error::InvalidInput(format!(
                    "`{}` is not a chain",
                    base.tuple_name(&c.0)
                )));
            }
        }
        let empty = Arc::new(SSet::empty());
        let vals: Vec<Arc<SSet>> = chains
            .iter()
            .map(|c| values.get(c).cloned().unwrap_or_else(|| empty.clone()))
            .collect();
        let mut facets: HashMap<(usize, usize), SMap> = HashMap::new();
        for (phi, &i) in &index {
            for pos in 0..phi.len() {
                if phi.len() == 1 {
                    break;
                }
                let psi = phi.without(pos);
                let j = index[&psi];
                let m = match restrictions.get(&(phi.clone(), psi.clone())) {
                    Some(m) => m.clone(),
                    None if vals[i].is_empty() => SMap::from_empty(vals[j].clone()),
                    None => {
                        return Err(Error::InvalidInput(format!(
                            "missing restriction {} -> {}",
                            base.chain_name(phi),
                            base.chain_name(&psi)
                        )))
                    }
                };
                if *m.source != *vals[i] || *m.target != *vals[j] {
                    return Err(Error::NotAFunctor(format!(
                        "restriction {} -> {} has the wrong endpoints",
                        base.chain_name(phi),
                        base.chain_name(&psi)
                    )));
                }
                m.validate()?;
                facets.insert((i, j), m);
            }
        }
        let mut d = Diagram {
            base,
            chains,
            index,
            values: vals,
            restrictions: HashMap::new(),
        };
        d.close(facets)?;
        for ((phi, psi), m) in restrictions {
            let (Some(&i), Some(&j)) = (d.index.get(&phi), d.index.get(&psi)) else {
                return Err(Error::InvalidInput("restriction between non-chains".into()));
            };
            let have = d
                .restrictions
                .get(&(i, j))
                .ok_or_else(|| Error::NotASubchain(d.base.chain_name(&psi), d.base.chain_name(&phi)))?;
            if have.images() != m.images() {
                return Err(Error::NotAFunctor(format!(
                    "restriction {} -> {} is not the composite",
                    d.base.chain_name(&phi),
                    d.base.chain_name(&psi)
                )));
            }
        }
        Ok(d)
    }

    /// Fills in all restrictions from the codimension-one ones, checking
    /// that removing two vertices in either order agrees.
    fn close(&mut self, facets: HashMap<(usize, usize), SMap>) -> Result<()> {
        let mut order: Vec<usize> = (0..self.chains.len()).collect();
        order.sort_by_key(|&i| self.chains[i].len());
        for &i in &order {
            let phi = self.chains[i].clone();
            self.restrictions.insert((i, i), SMap::identity(self.values[i].clone()));
            for a in 0..phi.len() {
                for b in (a + 1)..phi.len() {
                    if phi.len() < 3 {
                        break;
                    }
                    let ia = self.index[&phi.without(a)];
                    let ib = self.index[&phi.without(b)];
                    let iab = self.index[&phi.without(b).without(a)];
                    let via_a = facets[&(i, ia)].then(&facets[&(ia, iab)]);
                    let via_b = facets[&(i, ib)].then(&facets[&(ib, iab)]);
                    if via_a.images() != via_b.images() {
                        return Err(Error::NotAFunctor(format!(
                            "restrictions out of {} do not commute",
                            self.base.chain_name(&phi)
                        )));
                    }
                }
            }
            for psi in phi.subchains() {
                if psi == phi {
                    continue;
                }
                let pos = phi.0.iter().position(|x| !psi.contains(*x)).unwrap();
                let mid = self.index[&phi.without(pos)];
                let j = self.index[&psi];
                let m = facets[&(i, mid)].then(&self.restrictions[&(mid, j)]);
                self.restrictions.insert((i, j), m);
            }
        }
        Ok(())
    }

    pub fn chains(&self) -> &[Chain] {
        &self.chains
    }

    pub fn chain_index(&self, c: &Chain) -> Option<usize> {
        self.index.get(c).copied()
    }

    pub fn value(&self, c: &Chain) -> &Arc<SSet> {
        &self.values[self.index[c]]
    }

    /// `F(φ) → F(ψ)` for `ψ ⊆ φ`.
    pub fn restriction(&self, phi: &Chain, psi: &Chain) -> Result<&SMap> {
        let (Some(&i), Some(&j)) = (self.index.get(phi), self.index.get(psi)) else {
            return Err(Error::InvalidInput("not a chain".into()));
        };
        self.restrictions
            .get(&(i, j))
            .ok_or_else(|| Error::NotASubchain(self.base.chain_name(psi), self.base.chain_name(phi)))
    }

    /// Codimension-one restrictions, keyed by `(φ, ψ)`.
    pub fn facet_restrictions(&self) -> Vec<(Chain, Chain, &SMap)> {
        let mut out = Vec::new();
        for phi in &self.chains {
            for pos in 0..phi.len() {
                if phi.len() > 1 {
                    let psi = phi.without(pos);
                    out.push((phi.clone(), psi.clone(), self.restriction(phi, &psi).unwrap()));
                }
            }
        }
        out
    }

    pub fn is_empty(&self) -> bool {
        self.values.iter().all(|v| v.is_empty())
    }

    /// Every restriction is a monomorphism.
    pub fn restrictions_mono(&self) -> bool {
        self.restrictions.values().all(SMap::is_mono)
    }
}

/// `K^{Δ^φ}`: `K` on subchains of `φ` with identity restrictions, empty elsewhere.
pub fn kdelta(base: Arc<Poset>, k: Arc<SSet>, phi: &Chain) -> Result<Diagram> {
    base.chain(phi.0.clone())?;
    let mut values = HashMap::new();
    let mut restrictions = HashMap::new();
    for psi in phi.subchains() {
        values.insert(psi.clone(), k.clone());
        if psi.len() > 1 {
            for pos in 0..psi.len() {
                restrictions.insert((psi.clone(), psi.without(pos)), SMap::identity(k.clone()));
            }
        }
    }
    Diagram::new(base, values, restrictions)
}

/// An object `(Δ^φ, Δ^ψ)` of `𝒞`, `ψ ⊆ φ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CPair {
    pub phi: Chain,
    pub psi: Chain,
}

/// The finite poset `𝒞`: `(φ, ψ) ≤ (φ', ψ')` iff `φ' ⊆ φ` and `ψ ⊆ ψ'`.
#[derive(Clone, Debug)]
pub struct CCategory {
    pub objects: Vec<CPair>,
    pub poset: Arc<Poset>,
}

impl CCategory {
    pub fn new(base: &Poset) -> Result<Self> {
        let mut objects = Vec::new();
        for phi in base.chains() {
            let mut subs = phi.subchains();
            subs.sort();
            for psi in subs {
                objects.push(CPair { phi: phi.clone(), psi });
            }
        }
        let names: Vec<String> = objects
            .iter()
            .map(|o| format!("{}|{}", base.chain_name(&o.phi), base.chain_name(&o.psi)))
            .collect();
        let mut pairs = Vec::new();
        for (i, a) in objects.iter().enumerate() {
            for (j, b) in objects.iter().enumerate() {
                if i != j && b.phi.is_subchain_of(&a.phi) && a.psi.is_subchain_of(&b.psi) {
                    pairs.push((names[i].clone(), names[j].clone()));
                }
            }
        }
        let poset = Arc::new(Poset::from_relations(&names, &pairs)?);
        Ok(CCategory { objects, poset })
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }
}

/// A functor from a finite poset to filtered simplicial sets, given along
/// covering relations.
#[derive(Clone, Debug)]
pub struct FilteredDiagram {
    pub shape: Arc<Poset>,
    pub values: Vec<Arc<FilteredSSet>>,
    pub arrows: Vec<(usize, usize, FilteredMap)>,
}

/// The inclusion `Δ^ψ → Δ^φ` of standard simplices for `ψ ⊆ φ`.
pub fn face_inclusion(psi: &Chain, phi: &Chain) -> Result<SMap> {
    let pos = psi
        .positions_in(phi)
        .ok_or_else(|| Error::NotASubchain(psi.to_string(), phi.to_string()))?;
    let src = Arc::new(SSet::standard(psi.dimension()));
    let tgt = Arc::new(SSet::standard(phi.dimension()));
    let t2 = tgt.clone();
    SMap::from_fn(src.clone(), tgt, move |g| {
        let verts: Vec<usize> = src.gen_vertices(g).iter().map(|&v| pos[v as usize]).collect();
        SimplexTerm::generator(t2.lookup(&subset_id(&verts)).expect("face of a simplex"))
    })
}

/// `F ⊗ R(P)` as a functor on `𝒞`: `(φ, ψ) ↦ F(φ) ⊗ Δ^ψ`.
pub fn tensor_rp(f: &Diagram, budget: Budget) -> Result<(CCategory, FilteredDiagram)> {
    let cat = CCategory::new(&f.base)?;
    let mut tensors = Vec::with_capacity(cat.len());
    for o in &cat.objects {
        let d = delta_phi(f.base.clone(), &o.psi.0)?;
        tensors.push(tensor_with_budget(f.value(&o.phi).clone(), &d, budget)?);
    }
    let mut arrows = Vec::new();
    for (a, b) in cat.poset.covers() {
        let (oa, ob) = (&cat.objects[a], &cat.objects[b]);
        let r = f.restriction(&oa.phi, &ob.phi)?;
        let incl = face_inclusion(&oa.psi, &ob.psi)?;
        let da = Arc::new(delta_phi(f.base.clone(), &oa.psi.0)?);
        let db = Arc::new(delta_phi(f.base.clone(), &ob.psi.0)?);
        let incl = FilteredMap::new(da, db, incl)?;
        arrows.push((a, b, tensors[a].map_into(&tensors[b], r, &incl)?));
    }
    let values = tensors.into_iter().map(|t| t.fss).collect();
    Ok((
        cat.clone(),
        FilteredDiagram {
            shape: cat.poset.clone(),
            values,
            arrows,
        },
    ))
}

/// The colimit of a filtered diagram, with its legs.
#[derive(Clone, Debug)]
pub struct DiagramColimit {
    pub fss: Arc<FilteredSSet>,
    pub legs: Vec<FilteredMap>,
    pub raw: Colimit,
}

pub fn colim_filtered(d: &FilteredDiagram, base: Arc<Poset>, budget: Budget) -> Result<DiagramColimit> {
    let shape = Shape {
        names: d.shape.elements().iter().map(|n| format!("{n}:")).collect(),
        arrows: d.arrows.iter().map(|(a, b, _)| (*a, *b)).collect(),
        relations: Vec::new(),
    };
    let values: Vec<Arc<SSet>> = d.values.iter().map(|v| v.body.clone()).collect();
    let maps: Vec<SMap> = d.arrows.iter().map(|(_, _, m)| m.map.clone()).collect();
    let raw = colimit(&shape, &values, &maps, budget)?;
    let mut labels = vec![usize::MAX; raw.sset.count(0)];
    for (o, leg) in raw.legs.iter().enumerate() {
        for (v, t) in leg.images().first().into_iter().flatten().enumerate() {
            let l = d.values[o].label(v);
            let slot = &mut labels[t.gen.idx()];
            if *slot != usize::MAX && *slot != l {
                return Err(Error::NotAFunctor("arrows do not preserve the filtration".into()));
            }
            *slot = l;
        }
    }
    let fss = Arc::new(FilteredSSet::from_vertex_labels(base, raw.sset.clone(), labels)?);
    let legs = raw
        .legs
        .iter()
        .enumerate()
        .map(|(o, leg)| FilteredMap::new(d.values[o].clone(), fss.clone(), leg.clone()))
        .collect::<Result<Vec<_>>>()?;
    Ok(DiagramColimit { fss, legs, raw })
}

/// `colim_𝒞 F ⊗ R(P)`, with the category and its legs.
pub fn colim_diagram(f: &Diagram, budget: Budget) -> Result<(CCategory, DiagramColimit)> {
    let (cat, d) = tensor_rp(f, budget)?;
    let c = colim_filtered(&d, f.base.clone(), budget)?;
    Ok((cat, c))
}

/// Simplices of a simplicial set up to a degree, as names `n:term`.
fn simplex_labels(x: &SSet, max_degree: usize) -> (Vec<String>, Vec<HashMap<SimplexTerm, usize>>) {
    let mut names = Vec::new();
    let mut index = Vec::new();
    for n in 0..=max_degree {
        let mut h = HashMap::new();
        for t in x.simplices(n) {
            h.insert(t.clone(), names.len());
            let word: Vec<String> = t.word().iter().map(|j| format!("s{j}")).collect();
            let id = x.id(t.gen);
            names.push(if word.is_empty() {
                id.to_string()
            } else {
                format!("{} {}", word.join(" "), id)
            });
        }
        index.push(h);
    }
    (names, index)
}

/// The set-valued functor of simplices through `max_degree`.
pub fn forgetful_filtered(d: &FilteredDiagram, max_degree: usize) -> Result<SetDiagram> {
    let tables: Vec<_> = d.values.iter().map(|v| simplex_labels(&v.body, max_degree)).collect();
    let mut arrows = Vec::with_capacity(d.arrows.len());
    for (a, b, m) in &d.arrows {
        let mut map = vec![0; tables[*a].0.len()];
        for n in 0..=max_degree {
            for (t, &i) in &tables[*a].1[n] {
                map[i] = tables[*b].1[n][&m.map.apply(t)];
            }
        }
        arrows.push(SetArrow { from: *a, to: *b, map });
    }
    let values = tables.into_iter().map(|t| t.0).collect();
    SetDiagram::new(d.shape.clone(), values, arrows)
}

/// `R(P)^op` as a poset: `φ ≤ ψ` iff `ψ ⊆ φ`, so restrictions run upward.
pub fn rp_op(base: &Poset) -> Result<Arc<Poset>> {
    let chains = base.chains();
    let names: Vec<String> = chains.iter().map(|c| base.chain_name(c)).collect();
    let mut pairs = Vec::new();
    for (i, a) in chains.iter().enumerate() {
        for (j, b) in chains.iter().enumerate() {
            if i != j && b.is_subchain_of(a) {
                pairs.push((names[i].clone(), names[j].clone()));
            }
        }
    }
    Ok(Arc::new(Poset::from_relations(&names, &pairs)?))
}

/// `U ∘ F` for a diagram on `R(P)^op`, through `max_degree`.
pub fn forgetful(f: &Diagram, max_degree: usize) -> Result<SetDiagram> {
    let shape = rp_op(&f.base)?;
    let tables: Vec<_> = f.values.iter().map(|v| simplex_labels(v, max_degree)).collect();
    let mut arrows = Vec::new();
    for (a, b) in shape.covers() {
        let r = &f.restrictions[&(a, b)];
        let mut map = vec![0; tables[a].0.len()];
        for n in 0..=max_degree {
            for (t, &i) in &tables[a].1[n] {
                map[i] = tables[b].1[n][&r.apply(t)];
            }
        }
        arrows.push(SetArrow { from: a, to: b, map });
    }
    SetDiagram::new(shape, tables.into_iter().map(|t| t.0).collect(), arrows)
}

/// Default degree bound for [`forgetful`]: longest chain plus largest cell
/// dimension plus one.
pub fn default_degree_bound(f: &Diagram) -> usize {
    let cell = f.values.iter().filter_map(|v| v.dimension()).max().unwrap_or(0);
    f.base.height() + cell + 1
}

/// One cell `∂Δ^n ⊗ Δ^φ → Δ^n ⊗ Δ^φ`, attached along `attach : ∂Δ^n → F(φ)`.
#[derive(Clone, Debug)]
pub struct CellSpec {
    pub n: usize,
    pub phi: Chain,
    /// Image in the current `F(φ)` of each generator of `∂Δ^n`, keyed by its id.
    pub attach: HashMap<String, SimplexTerm>,
}

/// Iterated pushouts of `kdelta(∂Δ^n, φ) → kdelta(Δ^n, φ)`.
pub fn cell_complex(base: Arc<Poset>, cells: &[CellSpec]) -> Result<Diagram> {
    let mut current = Diagram::new(base.clone(), HashMap::new(), HashMap::new())?;
    for (k, cell) in cells.iter().enumerate() {
        current = attach_cell(&current, k, cell)?;
    }
    Ok(current)
}

/// Identifiers of generators of the `k`-th cell: `c{k}/{vertex subset}`.
pub fn cell_prefix(k: usize) -> String {
    format!("c{k}/")
}

pub fn attach_cell(f: &Diagram, k: usize, cell: &CellSpec) -> Result<Diagram> {
    let base = f.base.clone();
    let phi = base
        .chain(cell.phi.0.clone())
        .map_err(|e| Error::InvalidAttachment(format!("cell {k}: {e}")))?;
    let bd = Arc::new(SSet::boundary(cell.n));
    let top = Arc::new(SSet::standard(cell.n));
    let at_phi = f.value(&phi).clone();
    let mut images = Vec::new();
    for d in 0..bd.counts().len() {
        let mut row = Vec::new();
        for i in 0..bd.count(d) {
            let id = bd.id(GenRef::new(d, i));
            let t = cell
                .attach
                .get(id)
                .ok_or_else(|| Error::InvalidAttachment(format!("cell {k}: no image for `{id}`")))?;
            if !at_phi.contains(t.gen) || t.degree() != d {
                return Err(Error::InvalidAttachment(format!("cell {k}: bad image for `{id}`")));
            }
            row.push(t.clone());
        }
        images.push(row);
    }
    let attach =
        SMap::new(bd.clone(), at_phi, images).map_err(|e| Error::InvalidAttachment(format!("cell {k}: {e}")))?;
    let incl = crate::simplicial::inclusion_by_ids(bd.clone(), top.clone())?;

    let chains = f.chains().to_vec();
    let mut pushouts: HashMap<Chain, Colimit> = HashMap::new();
    let mut values = HashMap::new();
    for psi in &chains {
        if psi.is_subchain_of(&phi) {
            let r = f.restriction(&phi, psi)?;
            let a = attach.then(r);
            let shape = Shape {
                names: vec![String::new(), cell_prefix(k), "bd:".into()],
                arrows: vec![(2, 0), (2, 1)],
                relations: Vec::new(),
            };
            let c = colimit(
                &shape,
                &[f.value(psi).clone(), top.clone(), bd.clone()],
                &[a, incl.clone()],
                Budget::default(),
            )?;
            values.insert(psi.clone(), c.sset.clone());
            pushouts.insert(psi.clone(), c);
        } else {
            values.insert(psi.clone(), f.value(psi).clone());
        }
    }
    let mut restrictions = HashMap::new();
    for (src, dst, r) in f.facet_restrictions() {
        let target = values[&dst].clone();
        let m = match (pushouts.get(&src), pushouts.get(&dst)) {
            (Some(ps), Some(pd)) => {
                // old part along r, new cell identically
                let old = r.then(&pd.legs[0]);
                induced(ps, target, &[old, pd.legs[1].clone(), pd.legs[2].clone()])?
            }
            (None, Some(pd)) => r.then(&pd.legs[0]),
            (Some(_), None) => unreachable!("subchains of cells' chains stay inside"),
            (None, None) => r.clone(),
        };
        restrictions.insert((src, dst), m);
    }
    Diagram::new(base, values, restrictions)
}

/// The map out of a colimit determined by maps out of each value.
fn induced(c: &Colimit, target: Arc<SSet>, maps: &[SMap]) -> Result<SMap> {
    let images = (0..c.sset.counts().len())
        .map(|d| {
            (0..c.sset.count(d))
                .map(|i| {
                    let (o, t) = &c.representatives[d][i];
                    maps[*o].apply(t)
                })
                .collect()
        })
        .collect();
    SMap::new(c.sset.clone(), target, images)
}

/// All attaching maps `∂Δ^n → F(φ)` (the empty one for `n = 0`).
pub fn attaching_maps(f: &Diagram, n: usize, phi: &Chain, budget: Budget) -> Result<Vec<HashMap<String, SimplexTerm>>> {
    let bd = Arc::new(SSet::boundary(n));
    let maps = MapSearch::new(bd.clone(), f.value(phi).clone()).budget(budget).all()?;
    Ok(maps
        .into_iter()
        .map(|m| {
            bd.gen_refs()
                .map(|g| (bd.id(g).to_string(), m.image(g).clone()))
                .collect()
        })
        .collect())
}
