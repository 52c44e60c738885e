//! Filtered mapping spaces, stratified `π₀`, pointings and the `π₀` comparison
//! of filtered maps.
//!
//! The mapping space at a chain `φ` has as `n`-simplices the filtered maps
//! `Δ^n ⊗ Δ^φ → K`. Its vertices are the filtered maps `Δ^φ → K`, which by
//! Yoneda are the simplices of `K` whose tuple is `φ`; `sπ₀` at `φ` is the set
//! of those modulo the two ends of every filtered prism `Δ¹ ⊗ Δ^φ → K`.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use crate::diagrams::face_inclusion;
use crate::error::{Error, Result};
use crate::filtered::{
    delta_phi, factorize, filtered_search, nerve_of, tensor_with_budget, FilteredMap, FilteredSSet, StratifiedMap,
    Tensor,
};
use crate::poset::{Chain, Poset};
use crate::simplicial::{codegeneracy, coface, term_name, Budget, GenRef, MapSearch, SMap, SSet, SimplexTerm};
use crate::union_find::UnionFind;

type Images = Vec<Vec<SimplexTerm>>;

/// The simplices of the mapping space at `φ` up to a degree bound.
#[derive(Clone, Debug)]
pub struct MappingSpace {
    pub phi: Chain,
    pub target: Arc<FilteredSSet>,
    pub delta: Arc<FilteredSSet>,
    /// `Δ^n ⊗ Δ^φ` for `n ≤ m`.
    pub cells: Vec<Tensor>,
    pub elements: Vec<Vec<FilteredMap>>,
    faces: Vec<Vec<Vec<usize>>>,
    degeneracies: Vec<Vec<Vec<usize>>>,
}

impl MappingSpace {
    pub fn max_degree(&self) -> usize {
        self.elements.len() - 1
    }

    pub fn count(&self, n: usize) -> usize {
        self.elements.get(n).map_or(0, Vec::len)
    }

    /// Index of `d_i` of element `e` in degree `n - 1`.
    pub fn face(&self, n: usize, e: usize, i: usize) -> usize {
        self.faces[n][e][i]
    }

    /// Index of `s_i` of element `e` in degree `n + 1`; needs `n < m`.
    pub fn degeneracy(&self, n: usize, e: usize, i: usize) -> usize {
        self.degeneracies[n][e][i]
    }

    /// Element of degree `n` given by the images of a map `Δ^n ⊗ Δ^φ → K`.
    pub fn index_of(&self, n: usize, images: &[Vec<SimplexTerm>]) -> Option<usize> {
        self.elements[n].iter().position(|e| e.map.images() == images)
    }

    /// The simplex of `K` hit by the top simplex of `Δ^0 ⊗ Δ^φ`.
    pub fn point_term(&self, e: usize) -> &SimplexTerm {
        self.elements[0][e].map.image(GenRef::new(self.phi.dimension(), 0))
    }

    pub fn point_name(&self, e: usize) -> String {
        term_name(&self.target.body, self.point_term(e))
    }

    /// Value of a term of `K`'s shape `Δ^n`: applies the degeneracies of
    /// `t` to the element assigned to its generator.
    fn degenerate(&self, e: usize, t: &SimplexTerm) -> usize {
        let mut e = e;
        for (n, j) in (t.gen.dim()..).zip(t.word().into_iter().rev()) {
            e = self.degeneracies[n][e][j];
        }
        e
    }
}

pub fn mapping_space(k: &Arc<FilteredSSet>, phi: &Chain, max_degree: usize) -> Result<MappingSpace> {
    mapping_space_with_budget(k, phi, max_degree, Budget::default())
}

pub fn mapping_space_with_budget(
    k: &Arc<FilteredSSet>,
    phi: &Chain,
    max_degree: usize,
    budget: Budget,
) -> Result<MappingSpace> {
    let delta = Arc::new(delta_phi(k.base.clone(), phi.vertices())?);
    let id = FilteredMap::identity(delta.clone());
    let mut cells = Vec::with_capacity(max_degree + 1);
    let mut elements = Vec::with_capacity(max_degree + 1);
    let mut lookup: Vec<HashMap<Images, usize>> = Vec::with_capacity(max_degree + 1);
    for n in 0..=max_degree {
        let cell = tensor_with_budget(Arc::new(SSet::standard(n)), &delta, budget)?;
        let maps = filtered_search(&cell.fss, k)?.budget(budget).all()?;
        let maps: Vec<FilteredMap> = maps
            .into_iter()
            .map(|map| FilteredMap {
                source: cell.fss.clone(),
                target: k.clone(),
                map,
            })
            .collect();
        lookup.push(
            maps.iter()
                .enumerate()
                .map(|(i, m)| (m.map.images().to_vec(), i))
                .collect(),
        );
        elements.push(maps);
        cells.push(cell);
    }
    let find = |n: usize, m: &SMap| -> Result<usize> {
        lookup[n]
            .get(m.images())
            .copied()
            .ok_or_else(|| Error::NaturalityFailure(format!("a degree-{n} operator leaves the mapping space")))
    };
    let mut faces = vec![Vec::new()];
    for n in 1..=max_degree {
        let cofaces = (0..=n)
            .map(|i| cells[n - 1].map_into(&cells[n], &coface(n, i)?, &id))
            .collect::<Result<Vec<_>>>()?;
        let row = elements[n]
            .iter()
            .map(|e| cofaces.iter().map(|c| find(n - 1, &c.map.then(&e.map))).collect())
            .collect::<Result<Vec<_>>>()?;
        faces.push(row);
    }
    let mut degeneracies = Vec::with_capacity(max_degree);
    for n in 0..max_degree {
        let codegs = (0..=n)
            .map(|i| cells[n + 1].map_into(&cells[n], &codegeneracy(n, i)?, &id))
            .collect::<Result<Vec<_>>>()?;
        let row = elements[n]
            .iter()
            .map(|e| codegs.iter().map(|c| find(n + 1, &c.map.then(&e.map))).collect())
            .collect::<Result<Vec<_>>>()?;
        degeneracies.push(row);
    }
    Ok(MappingSpace {
        phi: phi.clone(),
        target: k.clone(),
        delta,
        cells,
        elements,
        faces,
        degeneracies,
    })
}

/// The functor `sπ₀(K) : R(P)^op → Set`.
#[derive(Clone, Debug, PartialEq)]
pub struct SPi0 {
    pub base: Arc<Poset>,
    pub chains: Vec<Chain>,
    /// Names of the filtered maps `Δ^φ → K`, per chain.
    pub points: Vec<Vec<String>>,
    /// Class index of each point.
    pub class_of: Vec<Vec<usize>>,
    /// Class ids (least point name in the class), sorted.
    pub classes: Vec<Vec<String>>,
    restrictions: HashMap<(usize, usize), Vec<usize>>,
    lookup: Vec<HashMap<SimplexTerm, usize>>,
}

impl SPi0 {
    pub fn chain_index(&self, phi: &Chain) -> Option<usize> {
        self.chains.iter().position(|c| c == phi)
    }

    pub fn classes_at(&self, phi: &Chain) -> &[String] {
        self.chain_index(phi).map_or(&[], |i| &self.classes[i])
    }

    /// Class map for `ψ ⊆ φ`, from classes at `φ` to classes at `ψ`.
    pub fn restriction(&self, phi: &Chain, psi: &Chain) -> Option<&[usize]> {
        let (a, b) = (self.chain_index(phi)?, self.chain_index(psi)?);
        self.restrictions.get(&(a, b)).map(Vec::as_slice)
    }

    /// Whether every value is a single class.
    pub fn is_constant_point(&self) -> bool {
        self.classes.iter().all(|c| c.len() == 1)
    }

    /// Class of the point whose top simplex is `t`.
    pub fn class_of_term(&self, chain: usize, t: &SimplexTerm) -> Option<usize> {
        self.lookup[chain].get(t).map(|&e| self.class_of[chain][e])
    }
}

pub fn spi0(k: &Arc<FilteredSSet>) -> Result<SPi0> {
    spi0_with_budget(k, Budget::default())
}

pub fn spi0_with_budget(k: &Arc<FilteredSSet>, budget: Budget) -> Result<SPi0> {
    let base = k.base.clone();
    let chains = base.chains();
    let mut points = Vec::with_capacity(chains.len());
    let mut class_of = Vec::with_capacity(chains.len());
    let mut classes = Vec::with_capacity(chains.len());
    let mut lookup = Vec::with_capacity(chains.len());
    for phi in &chains {
        let m = mapping_space_with_budget(k, phi, 1, budget)?;
        let mut uf = UnionFind::new(m.count(0));
        for e in 0..m.count(1) {
            uf.union(m.face(1, e, 0), m.face(1, e, 1));
        }
        let names: Vec<String> = (0..m.count(0)).map(|e| m.point_name(e)).collect();
        let (labels, count) = uf.classes();
        let mut ids: Vec<Option<String>> = vec![None; count];
        for (e, &l) in labels.iter().enumerate() {
            if ids[l].as_ref().is_none_or(|s| names[e] < *s) {
                ids[l] = Some(names[e].clone());
            }
        }
        let ids: Vec<String> = ids.into_iter().map(Option::unwrap).collect();
        let mut order: Vec<usize> = (0..count).collect();
        order.sort_by(|&a, &b| ids[a].cmp(&ids[b]));
        let mut rank = vec![0; count];
        for (r, &c) in order.iter().enumerate() {
            rank[c] = r;
        }
        class_of.push(labels.iter().map(|&l| rank[l]).collect::<Vec<_>>());
        classes.push(order.iter().map(|&c| ids[c].clone()).collect::<Vec<_>>());
        lookup.push(
            (0..m.count(0))
                .map(|e| (m.point_term(e).clone(), e))
                .collect::<HashMap<_, _>>(),
        );
        points.push(names);
    }
    let index: HashMap<&Chain, usize> = chains.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let mut restrictions = HashMap::new();
    for (psi, phi) in base.chain_inclusions() {
        let (a, b) = (index[&phi], index[&psi]);
        let pos = psi.positions_in(&phi).expect("subchain");
        let mut table: Vec<Option<usize>> = vec![None; classes[a].len()];
        for (t, &e) in &lookup[a] {
            let r = restrict_term(&k.body, t, &pos, phi.len());
            let target = class_of[b][lookup[b][&r]];
            let slot = &mut table[class_of[a][e]];
            match slot {
                Some(c) if *c != target => {
                    return Err(Error::NaturalityFailure(format!(
                        "restriction {} -> {} depends on the representative",
                        base.chain_name(&phi),
                        base.chain_name(&psi)
                    )))
                }
                _ => *slot = Some(target),
            }
        }
        restrictions.insert((a, b), table.into_iter().map(Option::unwrap).collect());
    }
    Ok(SPi0 {
        base,
        chains,
        points,
        class_of,
        classes,
        restrictions,
        lookup,
    })
}

/// Keeps the positions `pos` of a simplex with `len` vertices.
fn restrict_term(k: &SSet, t: &SimplexTerm, pos: &[usize], len: usize) -> SimplexTerm {
    let mut t = t.clone();
    for i in (0..len).rev() {
        if !pos.contains(&i) {
            t = k.face_unchecked(&t, i);
        }
    }
    t
}

/// A filtered map `Δ^φ → K`.
#[derive(Clone, Debug, PartialEq)]
pub struct Pointing {
    pub chain: Chain,
    pub map: FilteredMap,
}

impl Pointing {
    pub fn new(k: &Arc<FilteredSSet>, chain: Chain, map: SMap) -> Result<Self> {
        let delta = Arc::new(delta_phi(k.base.clone(), chain.vertices())?);
        Ok(Pointing {
            chain,
            map: FilteredMap::new(delta, k.clone(), map)?,
        })
    }

    /// The pointing sending the top simplex of `Δ^φ` to `t`.
    pub fn from_term(k: &Arc<FilteredSSet>, chain: Chain, t: SimplexTerm) -> Result<Self> {
        let d = chain.dimension();
        let delta = Arc::new(delta_phi(k.base.clone(), chain.vertices())?);
        let map = filtered_search(&delta, k)?
            .fix(GenRef::new(d, 0), t)
            .first()?
            .ok_or_else(|| Error::NotFilteredMap(format!("top simplex over {}", k.base.chain_name(&chain))))?;
        Ok(Pointing {
            chain,
            map: FilteredMap {
                source: delta,
                target: k.clone(),
                map,
            },
        })
    }

    pub fn top(&self) -> &SimplexTerm {
        self.map.map.image(GenRef::new(self.chain.dimension(), 0))
    }
}

pub fn restrict_pointing(p: &Pointing, psi: &Chain) -> Result<Pointing> {
    let incl = face_inclusion(psi, &p.chain)?;
    let k = &p.map.target;
    Pointing::new(k, psi.clone(), incl.then(&p.map.map))
}

/// A filtered map `(N(P), id) → K`, if any.
pub fn global_pointing_exists(k: &Arc<FilteredSSet>) -> Result<Option<FilteredMap>> {
    global_pointing_with_budget(k, Budget::default())
}

pub fn global_pointing_with_budget(k: &Arc<FilteredSSet>, budget: Budget) -> Result<Option<FilteredMap>> {
    let nerve = Arc::new(nerve_of(k.base.clone()));
    let found = filtered_search(&nerve, k)?.budget(budget).first()?;
    Ok(found.map(|map| FilteredMap {
        source: nerve,
        target: k.clone(),
        map,
    }))
}

/// The natural transformation `sπ₀(f)`, one class map per chain.
#[derive(Clone, Debug)]
pub struct SPi0Map {
    pub source: SPi0,
    pub target: SPi0,
    pub maps: Vec<Vec<usize>>,
}

/// First chain where a class map fails to be a bijection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComparisonFailure {
    pub chain: String,
    pub source_classes: usize,
    pub target_classes: usize,
    pub reason: String,
}

impl SPi0Map {
    pub fn is_bijective_at(&self, i: usize) -> bool {
        let m = &self.maps[i];
        m.len() == self.target.classes[i].len() && m.iter().collect::<HashSet<_>>().len() == m.len()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.first_failure().is_none()
    }

    pub fn first_failure(&self) -> Option<ComparisonFailure> {
        (0..self.maps.len()).find(|&i| !self.is_bijective_at(i)).map(|i| {
            let (s, t) = (self.source.classes[i].len(), self.target.classes[i].len());
            let reason = if s == 0 && t > 0 {
                "source empty, target nonempty".to_string()
            } else if s != t {
                format!("{s} classes against {t}")
            } else {
                "not injective".to_string()
            };
            ComparisonFailure {
                chain: self.source.base.chain_name(&self.source.chains[i]),
                source_classes: s,
                target_classes: t,
                reason,
            }
        })
    }
}

pub fn spi0_map(f: &FilteredMap) -> Result<SPi0Map> {
    let source = spi0(&f.source)?;
    let target = spi0(&f.target)?;
    spi0_map_between(f, source, target)
}

/// `sπ₀(f)` with both functors already computed.
pub fn spi0_map_between(f: &FilteredMap, source: SPi0, target: SPi0) -> Result<SPi0Map> {
    let base = &source.base;
    let mut maps = Vec::with_capacity(source.chains.len());
    for (i, phi) in source.chains.iter().enumerate() {
        let mut table: Vec<Option<usize>> = vec![None; source.classes[i].len()];
        for (t, &e) in &source.lookup[i] {
            let image = f.map.apply(t);
            let c = target.class_of_term(i, &image).ok_or_else(|| {
                Error::NaturalityFailure(format!("image of a point at {} is not a point", base.chain_name(phi)))
            })?;
            let slot = &mut table[source.class_of[i][e]];
            match slot {
                Some(d) if *d != c => {
                    return Err(Error::NaturalityFailure(format!(
                        "class map at {} depends on the representative",
                        base.chain_name(phi)
                    )))
                }
                _ => *slot = Some(c),
            }
        }
        maps.push(table.into_iter().map(Option::unwrap).collect::<Vec<_>>());
    }
    for (&(a, b), r) in &source.restrictions {
        let r2 = &target.restrictions[&(a, b)];
        for (c, &rc) in r.iter().enumerate() {
            if maps[b][rc] != r2[maps[a][c]] {
                return Err(Error::NaturalityFailure(format!(
                    "square for {} -> {}",
                    base.chain_name(&source.chains[a]),
                    base.chain_name(&source.chains[b])
                )));
            }
        }
    }
    Ok(SPi0Map { source, target, maps })
}

/// Verdict of a `π₀` comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comparison {
    pub isomorphism: bool,
    pub failure: Option<ComparisonFailure>,
}

/// Whether `sπ₀(f)` is an isomorphism of functors.
pub fn spi0_compare(f: &FilteredMap) -> Result<Comparison> {
    let m = spi0_map(f)?;
    let failure = m.first_failure();
    Ok(Comparison {
        isomorphism: failure.is_none(),
        failure,
    })
}

/// Compares `sπ₀(X)` with `sπ₀(Y)` reindexed along the poset isomorphism of
/// `f`, through the filtered map `f_▷ : α_* X → Y`.
pub fn spi0_compare_stratified(f: &StratifiedMap) -> Result<Comparison> {
    if !f.alpha.is_isomorphism() {
        return Err(Error::NotAnIsomorphismOfPosets);
    }
    spi0_compare(&factorize(f)?.right)
}

/// Sizes of the two sides of `Hom(K ⊗ Δ^φ, X) ≅ Hom(K, Map(Δ^φ, X))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrismBijection {
    pub filtered: usize,
    pub simplicial: usize,
}

/// Checks the bijection between filtered maps `K ⊗ Δ^φ → X` and simplicial
/// maps from `K` into the mapping space, sending `h` to `g ↦ h ∘ (ι_g ⊗ id)`.
pub fn prism_bijection(k: &Arc<SSet>, x: &Arc<FilteredSSet>, phi: &Chain) -> Result<PrismBijection> {
    let m = mapping_space(x, phi, k.dimension().unwrap_or(0))?;
    let kt = tensor_with_budget(k.clone(), &m.delta, Budget::default())?;
    let id = FilteredMap::identity(m.delta.clone());
    let yoneda = k
        .gen_refs()
        .map(|g| {
            let n = g.dim();
            let map = MapSearch::new(Arc::new(SSet::standard(n)), k.clone())
                .fix(GenRef::new(n, 0), SimplexTerm::generator(g))
                .first()?
                .expect("a simplex classifies a map");
            m.cells[n].map_into(&kt, &map, &id)
        })
        .collect::<Result<Vec<_>>>()?;
    let hs = filtered_search(&kt.fss, x)?.all()?;
    let mut adjoints: HashSet<Vec<usize>> = HashSet::new();
    for h in &hs {
        let adj = k
            .gen_refs()
            .zip(&yoneda)
            .map(|(g, y)| {
                m.index_of(g.dim(), y.map.then(h).images())
                    .ok_or_else(|| Error::BijectionFailure(format!("adjoint misses the mapping space at {}", k.id(g))))
            })
            .collect::<Result<Vec<_>>>()?;
        if !is_simplicial(k, &m, &adj) {
            return Err(Error::BijectionFailure("adjoint is not simplicial".into()));
        }
        adjoints.insert(adj);
    }
    let simplicial = count_maps_into(k, &m);
    if adjoints.len() != hs.len() || simplicial != hs.len() {
        return Err(Error::BijectionFailure(format!(
            "{} filtered maps, {} distinct adjoints, {} simplicial maps",
            hs.len(),
            adjoints.len(),
            simplicial
        )));
    }
    Ok(PrismBijection {
        filtered: hs.len(),
        simplicial,
    })
}

fn flat_index(k: &SSet, g: GenRef) -> usize {
    (0..g.dim()).map(|d| k.count(d)).sum::<usize>() + g.idx()
}

fn is_simplicial(k: &SSet, m: &MappingSpace, assignment: &[usize]) -> bool {
    k.gen_refs().all(|g| {
        let e = assignment[flat_index(k, g)];
        g.dim() == 0
            || k.generator(g)
                .faces
                .iter()
                .enumerate()
                .all(|(i, f)| m.face(g.dim(), e, i) == m.degenerate(assignment[flat_index(k, f.gen)], f))
    })
}

/// Simplicial maps `K → Map(Δ^φ, X)` by backtracking over generators.
pub fn count_maps_into(k: &SSet, m: &MappingSpace) -> usize {
    let order: Vec<GenRef> = k.gen_refs().collect();
    let mut assignment = Vec::with_capacity(order.len());
    count_rec(k, m, &order, &mut assignment)
}

fn count_rec(k: &SSet, m: &MappingSpace, order: &[GenRef], assignment: &mut Vec<usize>) -> usize {
    let Some(&g) = order.get(assignment.len()) else {
        return 1;
    };
    let n = g.dim();
    let mut total = 0;
    for e in 0..m.count(n) {
        let ok = n == 0
            || k.generator(g)
                .faces
                .iter()
                .enumerate()
                .all(|(i, f)| m.face(n, e, i) == m.degenerate(assignment[flat_index(k, f.gen)], f));
        if ok {
            assignment.push(e);
            total += count_rec(k, m, order, assignment);
            assignment.pop();
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filtered::pushforward;
    use crate::poset::PosetMap;
    use crate::simplicial::SSetBuilder;

    fn chain2() -> Arc<Poset> {
        Arc::new(Poset::total_order(2))
    }

    #[test]
    fn mapping_space_of_delta_phi() {
        let p = chain2();
        let k = Arc::new(delta_phi(p.clone(), &[0, 1]).unwrap());
        let m = mapping_space(&k, &p.chain(vec![0, 1]).unwrap(), 2).unwrap();
        assert_eq!(m.count(0), 1);
        // Δ^φ is filtered-contractible, so each degree has one element
        assert_eq!(m.count(1), 1);
        assert_eq!(m.count(2), 1);
        assert_eq!(m.face(2, 0, 1), 0);
        assert_eq!(m.degeneracy(0, 0, 0), 0);
    }

    #[test]
    fn spi0_of_delta_phi() {
        let p = chain2();
        let k = Arc::new(delta_phi(p.clone(), &[1]).unwrap());
        let s = spi0(&k).unwrap();
        let sizes: Vec<usize> = s.classes.iter().map(Vec::len).collect();
        let expected: Vec<usize> = s.chains.iter().map(|c| usize::from(c.vertices() == [1])).collect();
        assert_eq!(sizes, expected);
    }

    #[test]
    fn spi0_over_point_is_pi0() {
        let p = Arc::new(Poset::total_order(1));
        let mut b = SSetBuilder::new();
        let v: Vec<_> = (0..3)
            .map(|i| SimplexTerm::generator(b.add_vertex(format!("v{i}")).unwrap()))
            .collect();
        b.add_simplex("e", vec![v[1].clone(), v[0].clone()]).unwrap();
        let body = Arc::new(b.build().unwrap());
        let k = Arc::new(FilteredSSet::from_vertex_labels(p, body, vec![0; 3]).unwrap());
        let s = spi0(&k).unwrap();
        assert_eq!(s.classes, vec![vec!["v0".to_string(), "v2".to_string()]]);
    }

    #[test]
    fn nerve_has_global_pointing() {
        let p = chain2();
        let n = Arc::new(nerve_of(p.clone()));
        assert!(global_pointing_exists(&n).unwrap().is_some());
        let s = spi0(&n).unwrap();
        assert!(s.is_constant_point());
        let v = Arc::new(delta_phi(p, &[0]).unwrap());
        assert!(global_pointing_exists(&v).unwrap().is_none());
    }

    #[test]
    fn pointing_restricts() {
        let p = chain2();
        let k = Arc::new(delta_phi(p.clone(), &[0, 1]).unwrap());
        let phi = p.chain(vec![0, 1]).unwrap();
        let pt = Pointing::from_term(&k, phi.clone(), SimplexTerm::generator(GenRef::new(1, 0))).unwrap();
        assert_eq!(restrict_pointing(&pt, &phi).unwrap(), pt);
        let r = restrict_pointing(&pt, &p.chain(vec![0]).unwrap()).unwrap();
        assert_eq!(r.top(), &SimplexTerm::generator(GenRef::new(0, 0)));
        let bad = restrict_pointing(&r, &phi);
        assert!(matches!(bad, Err(Error::NotASubchain(..))));
    }

    #[test]
    fn identity_compares_to_isomorphism() {
        let p = chain2();
        let k = Arc::new(nerve_of(p));
        let c = spi0_compare(&FilteredMap::identity(k)).unwrap();
        assert!(c.isomorphism);
    }

    #[test]
    fn stratified_compare_needs_isomorphism() {
        let p = Arc::new(Poset::antichain(&["p0", "p1"]).unwrap());
        let q = chain2();
        let alpha = PosetMap::new(p.clone(), q, vec![0, 1]).unwrap();
        let x = Arc::new(delta_phi(p, &[0]).unwrap());
        let y = Arc::new(pushforward(&alpha, &x).unwrap());
        let f = StratifiedMap::new(x.clone(), y, alpha, SMap::identity(x.body.clone())).unwrap();
        assert_eq!(spi0_compare_stratified(&f), Err(Error::NotAnIsomorphismOfPosets));
    }

    #[test]
    fn prism_bijection_small() {
        let p = chain2();
        let x = Arc::new(nerve_of(p.clone()));
        let phi = p.chain(vec![0, 1]).unwrap();
        for k in [SSet::standard(0), SSet::standard(1), SSet::boundary(1)] {
            let b = prism_bijection(&Arc::new(k), &x, &phi).unwrap();
            assert_eq!(b.filtered, b.simplicial);
        }
    }
}
