//! Cartesian products of finite simplicial sets.
//!
//! Non-degenerate simplices of `X × Y` are pairs of same-degree simplices with
//! no common degeneracy (Eilenberg–Zilber). For generators of dimensions `p`
//! and `q` these are indexed by lattice paths from `(0,0)` to `(p,q)`.

use std::collections::HashMap;
use std::sync::Arc;

use super::map::SMap;
use super::sset::{SSet, SSetBuilder};
use super::term::{split_common_degeneracy, GenRef, SimplexTerm};
use super::Budget;
use crate::error::{Error, Result};

/// A product together with the data needed to pair simplices into it.
#[derive(Clone, Debug)]
pub struct Product {
    pub sset: Arc<SSet>,
    pub left: Arc<SSet>,
    pub right: Arc<SSet>,
    lookup: HashMap<(SimplexTerm, SimplexTerm), GenRef>,
    parts: Vec<Vec<(SimplexTerm, SimplexTerm)>>,
}

impl Product {
    pub fn new(left: Arc<SSet>, right: Arc<SSet>) -> Result<Product> {
        Product::new_where(left, right, Budget::default(), |_, _| true)
    }

    /// The sub-simplicial set of `left × right` on the pairs accepted by `keep`.
    /// `keep` must be closed under faces (e.g. a fiber-product condition).
    pub fn new_where(
        left: Arc<SSet>,
        right: Arc<SSet>,
        budget: Budget,
        keep: impl Fn(&SimplexTerm, &SimplexTerm) -> bool,
    ) -> Result<Product> {
        let mut pairs: Vec<(SimplexTerm, SimplexTerm)> = Vec::new();
        for g in left.gen_refs() {
            for h in right.gen_refs() {
                let (p, q) = (g.dim(), h.dim());
                lattice_paths(p, q, &mut |a, b| {
                    let x = SimplexTerm::from_parts_unchecked(g, a.to_vec());
                    let y = SimplexTerm::from_parts_unchecked(h, b.to_vec());
                    if keep(&x, &y) {
                        pairs.push((x, y));
                    }
                });
                if pairs.len() > budget.0 {
                    return Err(Error::BudgetExceeded {
                        what: "product generators".into(),
                        limit: budget.0,
                    });
                }
            }
        }
        // dimension first, then the canonical order of the factors
        pairs.sort_by(|a, b| a.0.degree().cmp(&b.0.degree()).then_with(|| a.cmp(b)));
        let mut lookup = HashMap::with_capacity(pairs.len());
        let mut parts: Vec<Vec<(SimplexTerm, SimplexTerm)>> = Vec::new();
        let mut b = SSetBuilder::new();
        for (x, y) in pairs {
            let n = x.degree();
            let id = pair_id(&left, &right, &x, &y);
            let r = if n == 0 {
                b.add_vertex(id)?
            } else {
                let faces = (0..=n)
                    .map(|i| {
                        let fx = left.face_unchecked(&x, i);
                        let fy = right.face_unchecked(&y, i);
                        pair_in(&lookup, &fx, &fy)
                            .ok_or_else(|| Error::MalformedSSet("product filter is not closed under faces".into()))
                    })
                    .collect::<Result<Vec<_>>>()?;
                b.add_simplex(id, faces)?
            };
            lookup.insert((x.clone(), y.clone()), r);
            while parts.len() <= n {
                parts.push(Vec::new());
            }
            parts[n].push((x, y));
        }
        let sset = Arc::new(b.build()?);
        Ok(Product {
            sset,
            left,
            right,
            lookup,
            parts,
        })
    }

    /// Factors of a generator of the product.
    pub fn components(&self, g: GenRef) -> &(SimplexTerm, SimplexTerm) {
        &self.parts[g.dim()][g.idx()]
    }

    /// The simplex `(x, y)` of the product, if it lies in it.
    pub fn pair(&self, x: &SimplexTerm, y: &SimplexTerm) -> Option<SimplexTerm> {
        pair_in(&self.lookup, x, y)
    }

    pub fn pr_left(&self) -> SMap {
        let images = (0..self.parts.len())
            .map(|d| self.parts[d].iter().map(|(x, _)| x.clone()).collect())
            .collect();
        SMap::from_images_unchecked(self.sset.clone(), self.left.clone(), images)
    }

    pub fn pr_right(&self) -> SMap {
        let images = (0..self.parts.len())
            .map(|d| self.parts[d].iter().map(|(_, y)| y.clone()).collect())
            .collect();
        SMap::from_images_unchecked(self.sset.clone(), self.right.clone(), images)
    }

    /// `⟨f, g⟩ : Z → X × Y`.
    pub fn pairing(&self, f: &SMap, g: &SMap) -> Result<SMap> {
        let src = f.source.clone();
        let images = (0..src.counts().len())
            .map(|d| {
                (0..src.count(d))
                    .map(|i| {
                        let r = GenRef::new(d, i);
                        self.pair(f.image(r), g.image(r)).ok_or_else(|| {
                            Error::NotASimplicialMap(format!("pairing leaves the product at `{}`", src.id(r)))
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SMap::from_images_unchecked(src, self.sset.clone(), images))
    }

    /// `f × g : self → target`, where `target` is a product of the codomains.
    pub fn map_into(&self, target: &Product, f: &SMap, g: &SMap) -> Result<SMap> {
        let left = self.pr_left().then(f);
        let right = self.pr_right().then(g);
        target.pairing(&left, &right)
    }
}

fn pair_in(
    lookup: &HashMap<(SimplexTerm, SimplexTerm), GenRef>,
    x: &SimplexTerm,
    y: &SimplexTerm,
) -> Option<SimplexTerm> {
    let (collapse, a, b) = split_common_degeneracy(x.surjection(), y.surjection());
    let key = (
        SimplexTerm::from_parts_unchecked(x.gen, a),
        SimplexTerm::from_parts_unchecked(y.gen, b),
    );
    let r = *lookup.get(&key)?;
    Some(SimplexTerm::from_parts_unchecked(r, collapse))
}

fn pair_id(left: &SSet, right: &SSet, x: &SimplexTerm, y: &SimplexTerm) -> String {
    let digits = |s: &[u8]| s.iter().map(|d| d.to_string()).collect::<String>();
    if x.degree() == 0 {
        format!("({},{})", left.id(x.gen), right.id(y.gen))
    } else {
        format!(
            "({},{})[{}|{}]",
            left.id(x.gen),
            right.id(y.gen),
            digits(x.surjection()),
            digits(y.surjection())
        )
    }
}

/// Calls `emit` for every jointly injective pair of surjections onto
/// `[p]` and `[q]` (staircase paths with diagonal steps allowed).
fn lattice_paths(p: usize, q: usize, emit: &mut dyn FnMut(&[u8], &[u8])) {
    let mut a = vec![0u8];
    let mut b = vec![0u8];
    fn rec(p: usize, q: usize, a: &mut Vec<u8>, b: &mut Vec<u8>, emit: &mut dyn FnMut(&[u8], &[u8])) {
        let (i, j) = (*a.last().unwrap() as usize, *b.last().unwrap() as usize);
        if i == p && j == q {
            emit(a, b);
            return;
        }
        for (di, dj) in [(1, 0), (0, 1), (1, 1)] {
            if i + di <= p && j + dj <= q {
                a.push((i + di) as u8);
                b.push((j + dj) as u8);
                rec(p, q, a, b, emit);
                a.pop();
                b.pop();
            }
        }
    }
    rec(p, q, &mut a, &mut b, emit);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn top_count(m: usize, n: usize) -> usize {
        let p = Product::new(Arc::new(SSet::standard(m)), Arc::new(SSet::standard(n))).unwrap();
        p.sset.count(m + n)
    }

    #[test]
    fn shuffle_counts() {
        assert_eq!(top_count(1, 1), 2);
        assert_eq!(top_count(2, 1), 3);
        for m in 0..=3 {
            for n in 0..=3 {
                assert_eq!(top_count(m, n), super::super::sset::binomial(m + n, m));
            }
        }
    }

    #[test]
    fn product_with_point() {
        let x = Arc::new(SSet::boundary(3));
        let p = Product::new(x.clone(), Arc::new(SSet::standard(0))).unwrap();
        assert_eq!(p.sset.counts(), x.counts());
    }

    #[test]
    fn projections_are_maps() {
        let p = Product::new(Arc::new(SSet::standard(2)), Arc::new(SSet::horn(2, 0).unwrap())).unwrap();
        p.pr_left().validate().unwrap();
        p.pr_right().validate().unwrap();
        let diag = p.pairing(&p.pr_left(), &p.pr_right()).unwrap();
        assert_eq!(diag, SMap::identity(p.sset.clone()));
    }
}
