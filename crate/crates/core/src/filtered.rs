//! Filtered simplicial sets `φ_K : K → N(P)`, filtered and stratified maps,
//! the tensor `K ⊗ X`, and base change along a poset map.
//!
//! A map to the nerve is determined by where it sends vertices, so the
//! filtration is stored as one label per vertex generator; the tuple of any
//! simplex is read off its vertices.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poset::{Chain, Poset, PosetMap};
use crate::simplicial::{Budget, GenRef, MapSearch, Product, SMap, SSet, SSetBuilder, SimplexTerm, Visit};

#[derive(Clone, Debug)]
pub struct FilteredSSet {
    pub base: Arc<Poset>,
    pub body: Arc<SSet>,
    labels: Vec<usize>,
}

impl PartialEq for FilteredSSet {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && *self.body == *other.body && *self.base == *other.base
    }
}

impl FilteredSSet {
    /// Builds from a tuple for every generator, checking that the tuples are
    /// weakly increasing and compatible with faces.
    pub fn new(base: Arc<Poset>, body: Arc<SSet>, phi: &[Vec<Vec<usize>>]) -> Result<Self> {
        for g in body.gen_refs() {
            let name = || body.id(g).to_string();
            let tuple = phi
                .get(g.dim())
                .and_then(|r| r.get(g.idx()))
                .ok_or_else(|| Error::PhiNotSimplicial(name()))?;
            if tuple.len() != g.dim() + 1 || tuple.iter().any(|&p| p >= base.len()) {
                return Err(Error::PhiNotSimplicial(name()));
            }
            if !base.is_weakly_increasing(tuple) {
                return Err(Error::PhiNotMonotone(name()));
            }
        }
        let labels: Vec<usize> = phi
            .first()
            .map(|r| r.iter().map(|t| t[0]).collect())
            .unwrap_or_default();
        for g in body.gen_refs() {
            let expect: Vec<usize> = body.gen_vertices(g).iter().map(|&v| labels[v as usize]).collect();
            if phi[g.dim()][g.idx()] != expect {
                return Err(Error::PhiNotSimplicial(body.id(g).to_string()));
            }
        }
        Ok(FilteredSSet { base, body, labels })
    }

    /// Builds from the label of each vertex.
    pub fn from_vertex_labels(base: Arc<Poset>, body: Arc<SSet>, labels: Vec<usize>) -> Result<Self> {
        if labels.len() != body.count(0) {
            return Err(Error::InvalidInput(format!(
                "{} vertex labels for {} vertices",
                labels.len(),
                body.count(0)
            )));
        }
        if let Some(&p) = labels.iter().find(|&&p| p >= base.len()) {
            return Err(Error::IndexOutOfRange {
                index: p,
                limit: base.len(),
            });
        }
        let k = FilteredSSet { base, body, labels };
        k.validate()?;
        Ok(k)
    }

    pub fn empty(base: Arc<Poset>) -> Self {
        FilteredSSet {
            base,
            body: Arc::new(SSet::empty()),
            labels: Vec::new(),
        }
    }

    /// Every generator's tuple is weakly increasing.
    pub fn validate(&self) -> Result<()> {
        for g in self.body.gen_refs() {
            if !self.base.is_weakly_increasing(&self.gen_phi(g)) {
                return Err(Error::PhiNotMonotone(self.body.id(g).to_string()));
            }
        }
        Ok(())
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn label(&self, vertex: usize) -> usize {
        self.labels[vertex]
    }

    pub fn gen_phi(&self, g: GenRef) -> Vec<usize> {
        self.body
            .gen_vertices(g)
            .iter()
            .map(|&v| self.labels[v as usize])
            .collect()
    }

    /// `φ` of an arbitrary simplex.
    pub fn phi(&self, t: &SimplexTerm) -> Vec<usize> {
        self.body.vertices(t).iter().map(|&v| self.labels[v as usize]).collect()
    }

    /// Vertex generators lying over `p`.
    pub fn stratum(&self, p: usize) -> Vec<usize> {
        (0..self.labels.len()).filter(|&v| self.labels[v] == p).collect()
    }

    /// The structure map `K → N(P)` into [`nerve`] of the same base.
    pub fn structure_map(&self, nerve: &FilteredSSet) -> Result<SMap> {
        if *nerve.base != *self.base {
            return Err(Error::BaseMismatch);
        }
        let images = (0..self.body.counts().len())
            .map(|d| {
                (0..self.body.count(d))
                    .map(|i| nerve_term(nerve, &self.gen_phi(GenRef::new(d, i))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        SMap::new(self.body.clone(), nerve.body.clone(), images)
    }
}

/// The simplex of `N(P)` with the given weakly increasing tuple.
fn nerve_term(nerve: &FilteredSSet, tuple: &[usize]) -> Result<SimplexTerm> {
    let chain = nerve.base.image_chain(tuple)?;
    let g = nerve
        .body
        .lookup(&nerve.base.chain_name(&chain))
        .ok_or_else(|| Error::InvalidInput("not a nerve".into()))?;
    let mut surj = Vec::with_capacity(tuple.len());
    let mut pos = 0u8;
    for (k, &x) in tuple.iter().enumerate() {
        if k > 0 && x != tuple[k - 1] {
            pos += 1;
        }
        surj.push(pos);
    }
    SimplexTerm::from_surjection(g, surj)
}

/// `Δ^φ`: the standard simplex with vertex `i` over `φ_i`.
pub fn delta_phi(base: Arc<Poset>, phi: &[usize]) -> Result<FilteredSSet> {
    if phi.is_empty() {
        return Err(Error::InvalidInput("empty tuple".into()));
    }
    base.image_chain(phi)?;
    FilteredSSet::from_vertex_labels(base, Arc::new(SSet::standard(phi.len() - 1)), phi.to_vec())
}

/// `(N(P), id)`; generator ids are the chain names.
pub fn nerve_of(base: Arc<Poset>) -> FilteredSSet {
    let chains = base.chains();
    let mut sorted: Vec<&Chain> = chains.iter().collect();
    sorted.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let mut b = SSetBuilder::new();
    for c in sorted {
        let id = base.chain_name(c);
        if c.len() == 1 {
            b.add_vertex(id).expect("chain names are distinct");
        } else {
            let faces = (0..c.len())
                .map(|i| SimplexTerm::generator(b.id_of(&base.chain_name(&c.without(i))).expect("subchain present")))
                .collect();
            b.add_simplex(id, faces).expect("faces of chains are chains");
        }
    }
    let body = Arc::new(b.build().expect("nerve satisfies the simplicial identities"));
    let labels = (0..body.count(0))
        .map(|i| base.index_of(body.id(GenRef::new(0, i))).unwrap())
        .collect();
    FilteredSSet { base, body, labels }
}

/// A map over the identity of the common base.
#[derive(Clone, Debug, PartialEq)]
pub struct FilteredMap {
    pub source: Arc<FilteredSSet>,
    pub target: Arc<FilteredSSet>,
    pub map: SMap,
}

impl FilteredMap {
    pub fn new(source: Arc<FilteredSSet>, target: Arc<FilteredSSet>, map: SMap) -> Result<Self> {
        if *source.base != *target.base {
            return Err(Error::BaseMismatch);
        }
        if *map.source != *source.body || *map.target != *target.body {
            return Err(Error::NotASimplicialMap(
                "bodies do not match the filtered objects".into(),
            ));
        }
        map.validate()?;
        for (v, t) in map.images().first().into_iter().flatten().enumerate() {
            if target.label(t.gen.idx()) != source.label(v) {
                return Err(Error::NotFilteredMap(source.body.id(GenRef::new(0, v)).to_string()));
            }
        }
        Ok(FilteredMap { source, target, map })
    }

    pub fn identity(x: Arc<FilteredSSet>) -> Self {
        let map = SMap::identity(x.body.clone());
        FilteredMap {
            source: x.clone(),
            target: x,
            map,
        }
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &FilteredMap) -> FilteredMap {
        FilteredMap {
            source: self.source.clone(),
            target: other.target.clone(),
            map: self.map.then(&other.map),
        }
    }

    pub fn is_mono(&self) -> bool {
        self.map.is_mono()
    }
}

/// A map `X → Y` covering a poset map `α : P → Q`.
#[derive(Clone, Debug)]
pub struct StratifiedMap {
    pub source: Arc<FilteredSSet>,
    pub target: Arc<FilteredSSet>,
    pub alpha: PosetMap,
    pub map: SMap,
}

impl StratifiedMap {
    /// Checks that the square `φ_Y ∘ f = N(α) ∘ φ_X` commutes.
    pub fn new(source: Arc<FilteredSSet>, target: Arc<FilteredSSet>, alpha: PosetMap, map: SMap) -> Result<Self> {
        if *alpha.source != *source.base || *alpha.target != *target.base {
            return Err(Error::BaseMismatch);
        }
        if *map.source != *source.body || *map.target != *target.body {
            return Err(Error::NotASimplicialMap(
                "bodies do not match the filtered objects".into(),
            ));
        }
        map.validate()?;
        for (v, t) in map.images().first().into_iter().flatten().enumerate() {
            if target.label(t.gen.idx()) != alpha.apply(source.label(v)) {
                return Err(Error::SquareDoesNotCommute(
                    source.body.id(GenRef::new(0, v)).to_string(),
                ));
            }
        }
        Ok(StratifiedMap {
            source,
            target,
            alpha,
            map,
        })
    }
}

/// A search for filtered maps `source → target`, to be refined with
/// constraints before running.
pub fn filtered_search<'a>(source: &'a FilteredSSet, target: &'a FilteredSSet) -> Result<MapSearch<'a>> {
    if *source.base != *target.base {
        return Err(Error::BaseMismatch);
    }
    Ok(MapSearch::new(source.body.clone(), target.body.clone())
        .accept(move |g, t| g.dim() != 0 || target.label(t.gen.idx()) == source.label(g.idx())))
}

/// All filtered maps, in canonical order.
pub fn enumerate_filtered_maps(source: &Arc<FilteredSSet>, target: &Arc<FilteredSSet>) -> Result<Vec<FilteredMap>> {
    let maps = filtered_search(source, target)?.all()?;
    Ok(maps
        .into_iter()
        .map(|map| FilteredMap {
            source: source.clone(),
            target: target.clone(),
            map,
        })
        .collect())
}

pub fn count_filtered_maps(source: &FilteredSSet, target: &FilteredSSet) -> Result<usize> {
    filtered_search(source, target)?.count()
}

/// A filtered isomorphism, if one exists.
pub fn find_isomorphism(x: &Arc<FilteredSSet>, y: &Arc<FilteredSSet>) -> Result<Option<FilteredMap>> {
    if x.body.counts() != y.body.counts() {
        return Ok(None);
    }
    let mut found = None;
    filtered_search(x, y)?.run(|m| {
        if m.is_isomorphism() {
            found = Some(m.clone());
            Visit::Stop
        } else {
            Visit::Continue
        }
    })?;
    Ok(found.map(|map| FilteredMap {
        source: x.clone(),
        target: y.clone(),
        map,
    }))
}

/// `K ⊗ X = (K × X, φ_X ∘ pr_X)` together with the product data.
#[derive(Clone, Debug)]
pub struct Tensor {
    pub fss: Arc<FilteredSSet>,
    pub product: Product,
}

pub fn tensor(k: Arc<SSet>, x: &FilteredSSet) -> Result<Tensor> {
    tensor_with_budget(k, x, Budget::default())
}

pub fn tensor_with_budget(k: Arc<SSet>, x: &FilteredSSet, budget: Budget) -> Result<Tensor> {
    let product = Product::new_where(k, x.body.clone(), budget, |_, _| true)?;
    let labels = (0..product.sset.count(0))
        .map(|v| x.label(product.components(GenRef::new(0, v)).1.gen.idx()))
        .collect();
    let fss = Arc::new(FilteredSSet {
        base: x.base.clone(),
        body: product.sset.clone(),
        labels,
    });
    Ok(Tensor { fss, product })
}

impl Tensor {
    /// `f ⊗ g : self → target`.
    pub fn map_into(&self, target: &Tensor, f: &SMap, g: &FilteredMap) -> Result<FilteredMap> {
        let map = self.product.map_into(&target.product, f, &g.map)?;
        FilteredMap::new(self.fss.clone(), target.fss.clone(), map)
    }
}

/// `α_* X`: same body, labels pushed along `α`.
pub fn pushforward(alpha: &PosetMap, x: &FilteredSSet) -> Result<FilteredSSet> {
    if *alpha.source != *x.base {
        return Err(Error::BaseMismatch);
    }
    let labels = x.labels.iter().map(|&p| alpha.apply(p)).collect();
    Ok(FilteredSSet {
        base: alpha.target.clone(),
        body: x.body.clone(),
        labels,
    })
}

/// `α^* Y = Y ×_{N(Q)} N(P)`, with its projections.
#[derive(Clone, Debug)]
pub struct Pullback {
    pub fss: Arc<FilteredSSet>,
    pub product: Product,
    pub nerve: Arc<FilteredSSet>,
    pub alpha: PosetMap,
    pub over: Arc<FilteredSSet>,
}

pub fn pullback(alpha: &PosetMap, y: &Arc<FilteredSSet>) -> Result<Pullback> {
    pullback_with_budget(alpha, y, Budget::default())
}

pub fn pullback_with_budget(alpha: &PosetMap, y: &Arc<FilteredSSet>, budget: Budget) -> Result<Pullback> {
    if *alpha.target != *y.base {
        return Err(Error::BaseMismatch);
    }
    let nerve = Arc::new(nerve_of(alpha.source.clone()));
    let product = Product::new_where(y.body.clone(), nerve.body.clone(), budget, |a, b| {
        let pa = y.phi(a);
        let pb = nerve.phi(b);
        pa.len() == pb.len() && pa.iter().zip(&pb).all(|(&q, &p)| alpha.apply(p) == q)
    })?;
    let labels = (0..product.sset.count(0))
        .map(|v| nerve.label(product.components(GenRef::new(0, v)).1.gen.idx()))
        .collect();
    let fss = Arc::new(FilteredSSet {
        base: alpha.source.clone(),
        body: product.sset.clone(),
        labels,
    });
    Ok(Pullback {
        fss,
        product,
        nerve,
        alpha: alpha.clone(),
        over: y.clone(),
    })
}

impl Pullback {
    /// The canonical stratified map `α^* Y → Y`.
    pub fn projection(&self) -> StratifiedMap {
        StratifiedMap {
            source: self.fss.clone(),
            target: self.over.clone(),
            alpha: self.alpha.clone(),
            map: self.product.pr_left(),
        }
    }

    /// The filtered map `X → α^* Y` corresponding to a stratified `f : X → Y` over `α`.
    pub fn lift(&self, f: &StratifiedMap) -> Result<FilteredMap> {
        let phi = f.source.structure_map(&self.nerve)?;
        let map = self.product.pairing(&f.map, &phi)?;
        FilteredMap::new(f.source.clone(), self.fss.clone(), map)
    }
}

/// `α^*(g)` for a filtered map `g : A → B` over the target poset.
pub fn pullback_map(pa: &Pullback, pb: &Pullback, g: &FilteredMap) -> Result<FilteredMap> {
    let left = pa.product.pr_left().then(&g.map);
    let map = pb.product.pairing(&left, &pa.product.pr_right())?;
    FilteredMap::new(pa.fss.clone(), pb.fss.clone(), map)
}

/// The two factorizations `f^◁ : X → α^* Y` and `f_▷ : α_* X → Y`.
#[derive(Clone, Debug)]
pub struct Factorization {
    pub left: FilteredMap,
    pub right: FilteredMap,
    pub pullback: Pullback,
    pub pushforward: Arc<FilteredSSet>,
}

pub fn factorize(f: &StratifiedMap) -> Result<Factorization> {
    let f = StratifiedMap::new(f.source.clone(), f.target.clone(), f.alpha.clone(), f.map.clone())?;
    let pb = pullback(&f.alpha, &f.target)?;
    let left = pb.lift(&f)?;
    let push = Arc::new(pushforward(&f.alpha, &f.source)?);
    let body_map = SMap::from_images_unchecked(push.body.clone(), f.target.body.clone(), f.map.images().to_vec());
    let right = FilteredMap::new(push.clone(), f.target.clone(), body_map)?;
    // both routes around the square give back f
    if left.map.then(&pb.product.pr_left()).images() != f.map.images() {
        return Err(Error::BijectionFailure(
            "f^◁ followed by the projection is not f".into(),
        ));
    }
    Ok(Factorization {
        left,
        right,
        pullback: pb,
        pushforward: push,
    })
}

/// Sizes of the two hom-sets matched by the adjunction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AdjunctionCount {
    pub pushed: usize,
    pub pulled: usize,
}

/// Verifies `Hom(α_* X, Y) ≅ Hom(X, α^* Y)` by enumerating both sides and
/// matching them through [`factorize`].
pub fn adjunction_check(alpha: &PosetMap, x: &Arc<FilteredSSet>, y: &Arc<FilteredSSet>) -> Result<AdjunctionCount> {
    let push = Arc::new(pushforward(alpha, x)?);
    let pb = pullback(alpha, y)?;
    let left_side = enumerate_filtered_maps(&push, y)?;
    let right_side = enumerate_filtered_maps(x, &pb.fss)?;
    let targets: HashSet<&[Vec<SimplexTerm>]> = right_side.iter().map(|m| m.map.images()).collect();
    let mut hit: HashSet<Vec<Vec<SimplexTerm>>> = HashSet::new();
    for g in &left_side {
        let body = SMap::from_images_unchecked(x.body.clone(), y.body.clone(), g.map.images().to_vec());
        let f = StratifiedMap::new(x.clone(), y.clone(), alpha.clone(), body)?;
        let l = pb.lift(&f)?;
        if !targets.contains(l.map.images()) {
            return Err(Error::BijectionFailure("adjoint of a map is not filtered".into()));
        }
        if !hit.insert(l.map.images().to_vec()) {
            return Err(Error::BijectionFailure("two maps share an adjoint".into()));
        }
    }
    if hit.len() != right_side.len() {
        return Err(Error::BijectionFailure(format!(
            "{} maps out of the pushforward but {} into the pullback",
            left_side.len(),
            right_side.len()
        )));
    }
    Ok(AdjunctionCount {
        pushed: left_side.len(),
        pulled: right_side.len(),
    })
}

/// Unit `X → α^* α_* X`.
pub fn unit(alpha: &PosetMap, x: &Arc<FilteredSSet>) -> Result<(FilteredMap, Pullback)> {
    let push = Arc::new(pushforward(alpha, x)?);
    let body = SMap::identity(x.body.clone());
    let body = SMap::from_images_unchecked(x.body.clone(), push.body.clone(), body.images().to_vec());
    let f = StratifiedMap::new(x.clone(), push, alpha.clone(), body)?;
    let pb = pullback(alpha, &f.target)?;
    Ok((pb.lift(&f)?, pb))
}

/// Counit `α_* α^* Y → Y`.
pub fn counit(alpha: &PosetMap, y: &Arc<FilteredSSet>) -> Result<(FilteredMap, Pullback)> {
    let pb = pullback(alpha, y)?;
    let push = Arc::new(pushforward(alpha, &pb.fss)?);
    let map = SMap::from_images_unchecked(
        push.body.clone(),
        y.body.clone(),
        pb.product.pr_left().images().to_vec(),
    );
    Ok((FilteredMap::new(push, y.clone(), map)?, pb))
}

/// Relabels a filtered simplicial set along a poset isomorphism onto `target`.
pub fn reindex(x: &FilteredSSet, iso: &PosetMap) -> Result<FilteredSSet> {
    if !iso.is_isomorphism() {
        return Err(Error::NotAnIsomorphismOfPosets);
    }
    pushforward(iso, x)
}

/// Generator lookup by vertex-label tuple, used when matching simplices of
/// the nerve.
pub fn simplices_by_phi(x: &FilteredSSet, n: usize) -> HashMap<Vec<usize>, Vec<SimplexTerm>> {
    let mut out: HashMap<Vec<usize>, Vec<SimplexTerm>> = HashMap::new();
    for t in x.body.simplices(n) {
        out.entry(x.phi(&t)).or_default().push(t);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_chain() -> Arc<Poset> {
        Arc::new(Poset::total_order(2))
    }

    #[test]
    fn delta_phi_validates() {
        let p = two_chain();
        let d = delta_phi(p.clone(), &[0, 1]).unwrap();
        assert_eq!(d.gen_phi(GenRef::new(1, 0)), vec![0, 1]);
        assert!(delta_phi(p, &[1, 0]).is_err());
    }

    #[test]
    fn incomparable_edge_is_rejected() {
        let p = Arc::new(Poset::antichain(&["p", "q"]).unwrap());
        let r = FilteredSSet::from_vertex_labels(p, Arc::new(SSet::standard(1)), vec![0, 1]);
        assert!(matches!(r, Err(Error::PhiNotMonotone(_))));
    }

    #[test]
    fn nerve_counts_and_maps() {
        let p = two_chain();
        let n = Arc::new(nerve_of(p.clone()));
        assert_eq!(n.body.counts(), vec![2, 1]);
        let d = Arc::new(delta_phi(p, &[0, 1]).unwrap());
        assert_eq!(enumerate_filtered_maps(&d, &n).unwrap().len(), 1);
    }

    #[test]
    fn tensor_with_point_is_identity() {
        let p = two_chain();
        let d = delta_phi(p, &[0, 0, 1]).unwrap();
        let t = tensor(Arc::new(SSet::standard(0)), &d).unwrap();
        assert_eq!(t.fss.body.counts(), d.body.counts());
        assert_eq!(t.fss.labels(), d.labels());
    }

    #[test]
    fn pushforward_pullback_collapse() {
        let p = Arc::new(Poset::antichain(&["p0", "p1"]).unwrap());
        let q = Arc::new(Poset::antichain(&["q"]).unwrap());
        let alpha = PosetMap::new(p.clone(), q.clone(), vec![0, 0]).unwrap();
        let x = delta_phi(p, &[0]).unwrap();
        let pushed = Arc::new(pushforward(&alpha, &x).unwrap());
        assert_eq!(pushed.labels(), &[0]);
        let pb = pullback(&alpha, &pushed).unwrap();
        assert_eq!(pb.fss.labels(), &[0, 1]);
    }
}
