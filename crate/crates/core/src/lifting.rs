//! Generating cells, lifting problems and the retract of `Δ^φ` off
//! `Δ^φ̄ ⊗ Δ^n`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::filtered::{delta_phi, enumerate_filtered_maps, pushforward, tensor, FilteredMap, FilteredSSet, Tensor};
use crate::poset::{Chain, Poset, PosetMap};
use crate::simplicial::{inclusion_by_ids, standard_term, Budget, GenRef, MapSearch, Product, SMap, SSet, Visit};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CellKind {
    Boundary,
    Horn(usize),
}

/// `∂Δ^n ⊗ Δ^φ → Δ^n ⊗ Δ^φ` or `Λ^n_k ⊗ Δ^φ → Δ^n ⊗ Δ^φ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GenCell {
    pub kind: CellKind,
    pub n: usize,
    pub phi: Chain,
}

impl GenCell {
    pub fn boundary(n: usize, phi: Chain) -> Self {
        GenCell {
            kind: CellKind::Boundary,
            n,
            phi,
        }
    }

    pub fn horn(n: usize, k: usize, phi: Chain) -> Result<Self> {
        if n == 0 || k > n {
            return Err(Error::IndexOutOfRange { index: k, limit: n });
        }
        Ok(GenCell {
            kind: CellKind::Horn(k),
            n,
            phi,
        })
    }

    pub fn name(&self, base: &Poset) -> String {
        match self.kind {
            CellKind::Boundary => format!("boundary({}) x {}", self.n, base.chain_name(&self.phi)),
            CellKind::Horn(k) => format!("horn({},{}) x {}", self.n, k, base.chain_name(&self.phi)),
        }
    }

    fn sub(&self) -> Result<SSet> {
        match self.kind {
            CellKind::Boundary => Ok(SSet::boundary(self.n)),
            CellKind::Horn(k) => SSet::horn(self.n, k),
        }
    }

    /// The cell as a filtered map over `base`.
    pub fn inclusion(&self, base: &Arc<Poset>) -> Result<FilteredMap> {
        let dphi = delta_phi(base.clone(), self.phi.vertices())?;
        let sub = Arc::new(self.sub()?);
        let top = Arc::new(SSet::standard(self.n));
        let a: Tensor = tensor(sub.clone(), &dphi)?;
        let b: Tensor = tensor(top.clone(), &dphi)?;
        let id = FilteredMap::identity(Arc::new(dphi));
        a.map_into(&b, &inclusion_by_ids(sub, top)?, &id)
    }
}

impl fmt::Display for CellKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CellKind::Boundary => write!(f, "boundary"),
            CellKind::Horn(k) => write!(f, "horn{k}"),
        }
    }
}

/// The families `I` (boundaries, `n ≤ n_max`) and `J` (horns, `1 ≤ n ≤ n_max`)
/// over every chain.
pub fn generating_sets(p: &Poset, n_max: usize) -> (Vec<GenCell>, Vec<GenCell>) {
    let chains = p.chains();
    let mut i = Vec::new();
    let mut j = Vec::new();
    for n in 0..=n_max {
        for phi in &chains {
            i.push(GenCell::boundary(n, phi.clone()));
            if n >= 1 {
                j.extend((0..=n).map(|k| GenCell {
                    kind: CellKind::Horn(k),
                    n,
                    phi: phi.clone(),
                }));
            }
        }
    }
    (i, j)
}

/// A commutative square `p ∘ top = bottom ∘ i`.
#[derive(Clone, Debug)]
pub struct LiftingProblem {
    pub i: FilteredMap,
    pub p: FilteredMap,
    pub top: FilteredMap,
    pub bottom: FilteredMap,
}

impl LiftingProblem {
    pub fn new(i: FilteredMap, p: FilteredMap, top: FilteredMap, bottom: FilteredMap) -> Result<Self> {
        let ends = *top.source == *i.source
            && *bottom.source == *i.target
            && *top.target == *p.source
            && *bottom.target == *p.target;
        if !ends {
            return Err(Error::SquareDoesNotCommute("the four maps do not form a square".into()));
        }
        let a = &i.source.body;
        for g in a.gen_refs() {
            if p.map.apply(top.map.image(g)) != bottom.map.apply(i.map.image(g)) {
                return Err(Error::SquareDoesNotCommute(a.id(g).to_string()));
            }
        }
        Ok(LiftingProblem { i, p, top, bottom })
    }
}

/// A diagonal `h : B → X` with `h ∘ i = top` and `p ∘ h = bottom`, or `None`
/// after exhausting all candidates.
pub fn find_lift(prob: &LiftingProblem) -> Result<Option<FilteredMap>> {
    find_lift_with_budget(prob, Budget::default())
}

pub fn find_lift_with_budget(prob: &LiftingProblem, budget: Budget) -> Result<Option<FilteredMap>> {
    let prob = LiftingProblem::new(prob.i.clone(), prob.p.clone(), prob.top.clone(), prob.bottom.clone())?;
    let (b, x) = (&prob.i.target, &prob.p.source);
    let a = &prob.i.source.body;
    let mut fixed: HashMap<GenRef, crate::simplicial::SimplexTerm> = HashMap::new();
    for g in a.gen_refs() {
        let t = prob.i.map.image(g);
        if t.is_degenerate() {
            continue;
        }
        let img = prob.top.map.image(g);
        if let Some(prev) = fixed.insert(t.gen, img.clone()) {
            if prev != *img {
                return Ok(None);
            }
        }
    }
    let search = MapSearch::new(b.body.clone(), x.body.clone())
        .fix_all(fixed)
        .budget(budget)
        .accept(|g, t| {
            (g.dim() != 0 || x.label(t.gen.idx()) == b.label(g.idx()))
                && prob.p.map.apply(t) == *prob.bottom.map.image(g)
        });
    let mut found = None;
    search.run(|h| {
        let ok = a
            .gen_refs()
            .all(|g| h.apply(prob.i.map.image(g)) == *prob.top.map.image(g));
        if ok {
            found = Some(h.clone());
            Visit::Stop
        } else {
            Visit::Continue
        }
    })?;
    let Some(h) = found else { return Ok(None) };
    let h = FilteredMap::new(b.clone(), x.clone(), h)?;
    debug_assert_eq!(prob.i.then(&h).map.images(), prob.top.map.images());
    debug_assert_eq!(h.then(&prob.p).map.images(), prob.bottom.map.images());
    Ok(Some(h))
}

/// Outcome of testing a map against a list of cells.
#[derive(Clone, Debug)]
pub enum RlpVerdict {
    Pass {
        squares: usize,
    },
    Fail {
        squares: usize,
        cell: GenCell,
        top: FilteredMap,
        bottom: FilteredMap,
    },
    BudgetExceeded {
        cell: GenCell,
        cap: usize,
    },
}

impl RlpVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, RlpVerdict::Pass { .. })
    }
}

pub const DEFAULT_SQUARE_CAP: usize = 10_000;

/// Solves every square from a cell in `cells` to `p`; the first unsolvable one
/// in canonical order is reported.
pub fn rlp_against(p: &FilteredMap, cells: &[GenCell], cap: usize) -> Result<RlpVerdict> {
    let base = p.source.base.clone();
    let mut squares = 0;
    for cell in cells {
        let i = cell.inclusion(&base)?;
        let bottoms = enumerate_filtered_maps(&i.target, &p.target)?;
        let mut per_cell = 0;
        for bottom in bottoms {
            let target = bottom.map.clone();
            let tops = MapSearch::new(i.source.body.clone(), p.source.body.clone())
                .accept(|g, t| {
                    (g.dim() != 0 || p.source.label(t.gen.idx()) == i.source.label(g.idx()))
                        && p.map.apply(t) == target.apply(i.map.image(g))
                })
                .all()?;
            for top in tops {
                per_cell += 1;
                if per_cell > cap {
                    return Ok(RlpVerdict::BudgetExceeded {
                        cell: cell.clone(),
                        cap,
                    });
                }
                squares += 1;
                let top = FilteredMap::new(i.source.clone(), p.source.clone(), top)?;
                let prob = LiftingProblem::new(i.clone(), p.clone(), top.clone(), bottom.clone())?;
                if find_lift(&prob)?.is_none() {
                    return Ok(RlpVerdict::Fail {
                        squares,
                        cell: cell.clone(),
                        top,
                        bottom,
                    });
                }
            }
        }
    }
    Ok(RlpVerdict::Pass { squares })
}

/// `Δ^φ` as a retract of `Δ^φ̄ ⊗ Δ^n`.
#[derive(Clone, Debug)]
pub struct Retract {
    pub phibar: Chain,
    pub k: usize,
    pub delta: Arc<FilteredSSet>,
    pub product: Arc<FilteredSSet>,
    /// `Δ^φ̄ ⊗ Δ^n → Δ^φ`.
    pub f: FilteredMap,
    /// `Δ^φ → Δ^φ̄ ⊗ Δ^n`.
    pub section: FilteredMap,
}

impl Retract {
    /// Whether `f ∘ section` is the identity on every generator.
    pub fn composite_is_identity(&self) -> bool {
        self.section.then(&self.f).map == SMap::identity(self.delta.body.clone())
    }
}

/// Vertex `v` of `Δ^n` sent into block `l` (the vertices over `φ̄_l`):
/// unchanged inside the block, clamped to its first or last vertex outside.
pub fn clamp(blocks: &[(usize, usize)], l: usize, v: usize) -> usize {
    let (first, last) = blocks[l];
    v.clamp(first, last)
}

/// Vertex map of the formula that sends every vertex outside block `l` to its
/// first vertex; not monotone in general.
pub fn literal_vertex_map(blocks: &[(usize, usize)], l: usize, v: usize) -> usize {
    let (first, last) = blocks[l];
    if (first..=last).contains(&v) {
        v
    } else {
        first
    }
}

/// First and last position of each run of equal entries.
fn blocks(phi: &[usize]) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = Vec::new();
    for (i, &p) in phi.iter().enumerate() {
        match out.last_mut() {
            Some(b) if phi[b.0] == p => b.1 = i,
            _ => out.push((i, i)),
        }
    }
    out
}

pub fn retract_decompose(base: &Arc<Poset>, phi: &[usize]) -> Result<Retract> {
    let phibar = base.image_chain(phi)?;
    let k = phibar.dimension();
    let n = phi.len() - 1;
    let blocks = blocks(phi);
    let block_of: Vec<usize> = (0..=n)
        .map(|v| blocks.iter().position(|b| b.0 <= v && v <= b.1).unwrap())
        .collect();
    let left = Arc::new(SSet::standard(k));
    let right = Arc::new(SSet::standard(n));
    let product = Product::new(left.clone(), right.clone())?;
    let labels = (0..product.sset.count(0))
        .map(|v| phibar.vertices()[product.components(GenRef::new(0, v)).0.gen.idx()])
        .collect::<Vec<_>>();
    let prod_fss = Arc::new(FilteredSSet::from_vertex_labels(
        base.clone(),
        product.sset.clone(),
        labels,
    )?);
    let delta = Arc::new(delta_phi(base.clone(), phi)?);

    let ps = product.sset.clone();
    let f = SMap::from_fn(product.sset.clone(), right.clone(), |g| {
        let (x, y) = product.components(g);
        let (xl, yv) = (left.vertices(x), right.vertices(y));
        let tuple: Vec<usize> = xl
            .iter()
            .zip(&yv)
            .map(|(&l, &v)| clamp(&blocks, l as usize, v as usize))
            .collect();
        standard_term(&right, &tuple).expect("clamping is monotone")
    })?;
    let section = SMap::from_fn(right.clone(), ps, |g| {
        let vs: Vec<usize> = right.gen_vertices(g).iter().map(|&v| v as usize).collect();
        let ls: Vec<usize> = vs.iter().map(|&v| block_of[v]).collect();
        let x = standard_term(&left, &ls).expect("blocks are ordered");
        let y = standard_term(&right, &vs).expect("a face");
        product.pair(&x, &y).expect("products of simplices contain every pair")
    })?;
    let f = FilteredMap::new(prod_fss.clone(), delta.clone(), f)?;
    let section = FilteredMap::new(delta.clone(), prod_fss.clone(), section)?;
    Ok(Retract {
        phibar,
        k,
        delta,
        product: prod_fss,
        f,
        section,
    })
}

/// The inclusion of `{0 < … < m-1}` into `{0 < … < len-1}` at `offset`,
/// standing in for a finite segment of `ℕ`.
pub fn segment_embedding(m: usize, len: usize, offset: usize) -> Result<PosetMap> {
    if offset + m > len {
        return Err(Error::IndexOutOfRange {
            index: offset + m,
            limit: len,
        });
    }
    PosetMap::new(
        Arc::new(Poset::total_order(m)),
        Arc::new(Poset::total_order(len)),
        (offset..offset + m).collect(),
    )
}

/// `α_*` of a cell: the cell over `α ∘ φ`.
pub fn push_cell(cell: &GenCell, alpha: &PosetMap) -> Result<GenCell> {
    let phi = alpha.target.chain(alpha.apply_tuple(cell.phi.vertices()))?;
    Ok(GenCell {
        kind: cell.kind,
        n: cell.n,
        phi,
    })
}

/// Checks that `α_*` of the cell inclusion is the inclusion of the pushed cell.
pub fn pushforward_matches(cell: &GenCell, alpha: &PosetMap) -> Result<bool> {
    let i = cell.inclusion(&alpha.source)?;
    let j = push_cell(cell, alpha)?.inclusion(&alpha.target)?;
    let (a, b) = (pushforward(alpha, &i.source)?, pushforward(alpha, &i.target)?);
    Ok(a == *j.source && b == *j.target && i.map.images() == j.map.images())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::SSetBuilder;

    fn point_poset() -> Arc<Poset> {
        Arc::new(Poset::total_order(1))
    }

    fn vertices_over(base: &Arc<Poset>, n: usize) -> Arc<FilteredSSet> {
        let mut b = SSetBuilder::new();
        for i in 0..n {
            b.add_vertex(format!("v{i}")).unwrap();
        }
        Arc::new(FilteredSSet::from_vertex_labels(base.clone(), Arc::new(b.build().unwrap()), vec![0; n]).unwrap())
    }

    #[test]
    fn generating_set_sizes() {
        let p = Poset::total_order(2);
        let (i, j) = generating_sets(&p, 1);
        assert_eq!(i.len(), 6);
        assert_eq!(j.len(), 6);
        let c = GenCell::boundary(0, Chain(vec![0]));
        let inc = c.inclusion(&Arc::new(p)).unwrap();
        assert!(inc.source.body.is_empty());
        assert_eq!(inc.target.body.counts(), vec![1]);
    }

    #[test]
    fn identity_right_leg_lifts_to_bottom() {
        let p = point_poset();
        let i = GenCell::boundary(1, Chain(vec![0])).inclusion(&p).unwrap();
        let x = i.target.clone();
        let prob = LiftingProblem::new(
            i.clone(),
            FilteredMap::identity(x.clone()),
            i.clone(),
            FilteredMap::identity(x),
        )
        .unwrap();
        let h = find_lift(&prob).unwrap().unwrap();
        assert_eq!(h.map, prob.bottom.map);
    }

    #[test]
    fn no_lift_without_edge() {
        let p = point_poset();
        let i = GenCell::boundary(1, Chain(vec![0])).inclusion(&p).unwrap();
        let x = vertices_over(&p, 2);
        let y = vertices_over(&p, 1);
        let to_y = |s: &Arc<FilteredSSet>| {
            let m = SMap::from_fn(s.body.clone(), y.body.clone(), |g| {
                crate::simplicial::SimplexTerm::generator(GenRef::new(0, 0)).degenerate_by(&vec![0; g.dim() + 1])
            })
            .unwrap();
            FilteredMap::new(s.clone(), y.clone(), m).unwrap()
        };
        let pmap = to_y(&x);
        // the two endpoints of ∂Δ¹ ⊗ Δ^p go to the two vertices of X
        let a = &i.source;
        let top = SMap::from_fn(a.body.clone(), x.body.clone(), |g| {
            crate::simplicial::SimplexTerm::generator(GenRef::new(0, g.idx()))
        })
        .unwrap();
        let top = FilteredMap::new(a.clone(), x.clone(), top).unwrap();
        let prob = LiftingProblem::new(i.clone(), pmap.clone(), top, to_y(&i.target)).unwrap();
        assert!(find_lift(&prob).unwrap().is_none());
        let v = rlp_against(&pmap, &[GenCell::boundary(1, Chain(vec![0]))], DEFAULT_SQUARE_CAP).unwrap();
        assert!(!v.passed());
    }

    #[test]
    fn square_must_commute() {
        let p = point_poset();
        let i = GenCell::boundary(1, Chain(vec![0])).inclusion(&p).unwrap();
        let x = vertices_over(&p, 2);
        let swap = SMap::from_fn(x.body.clone(), x.body.clone(), |g| {
            crate::simplicial::SimplexTerm::generator(GenRef::new(0, 1 - g.idx()))
        })
        .unwrap();
        let swap = FilteredMap::new(x.clone(), x.clone(), swap).unwrap();
        let a = &i.source;
        let top = SMap::from_fn(a.body.clone(), x.body.clone(), |_| {
            crate::simplicial::SimplexTerm::generator(GenRef::new(0, 0))
        })
        .unwrap();
        let top = FilteredMap::new(a.clone(), x.clone(), top).unwrap();
        let bottom_body = SMap::from_fn(i.target.body.clone(), x.body.clone(), |g| {
            crate::simplicial::SimplexTerm::generator(GenRef::new(0, 0)).degenerate_by(&vec![0; g.dim() + 1])
        })
        .unwrap();
        let bottom = FilteredMap::new(i.target.clone(), x.clone(), bottom_body).unwrap();
        let r = LiftingProblem::new(i, swap, top, bottom);
        assert!(matches!(r, Err(Error::SquareDoesNotCommute(_))));
    }

    #[test]
    fn retract_examples() {
        let p = Arc::new(Poset::total_order(2));
        for phi in [vec![0, 0], vec![0, 0, 1], vec![0, 1], vec![0, 1, 1, 1]] {
            let r = retract_decompose(&p, &phi).unwrap();
            assert!(r.composite_is_identity(), "{phi:?}");
            assert_eq!(r.k + 1, r.phibar.len());
        }
        let r = retract_decompose(&p, &[0, 1]).unwrap();
        assert_eq!(r.phibar, Chain(vec![0, 1]));
        assert!(matches!(retract_decompose(&p, &[1, 0]), Err(Error::NotMonotone(_))));
    }

    #[test]
    fn literal_formula_is_not_monotone() {
        // φ = (p, p, q): the edge (p,1) → (p,2) would go 1 ↦ 0
        let b = blocks(&[0, 0, 1]);
        assert_eq!(literal_vertex_map(&b, 0, 1), 1);
        assert_eq!(literal_vertex_map(&b, 0, 2), 0);
        assert_eq!(clamp(&b, 0, 2), 1);
    }

    #[test]
    fn cells_push_forward() {
        let alpha = segment_embedding(2, 4, 1).unwrap();
        let (i, j) = generating_sets(&alpha.source, 2);
        for c in i.iter().chain(&j) {
            assert!(pushforward_matches(c, &alpha).unwrap());
        }
    }
}
