//! Finite simplicial sets in Eilenberg–Zilber normal form.

mod colimit;
mod map;
mod product;
mod search;
mod sset;
mod term;

pub use colimit::{colimit, Colimit, Shape};
pub use map::SMap;
pub use product::Product;
pub use search::{enumerate_maps, MapSearch, Visit};
pub use sset::{subset_id, Generator, SSet, SSetBuilder};
pub use term::{surjections, GenRef, SimplexTerm};

/// Upper bound on the number of terms or search nodes an operation may touch.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget(pub usize);

impl Default for Budget {
    fn default() -> Self {
        Budget(1_000_000)
    }
}

/// Inclusion of a simplicial set whose generator ids all occur in `sup`, with
/// matching faces (e.g. a horn or boundary into the standard simplex).
pub fn inclusion_by_ids(sub: std::sync::Arc<SSet>, sup: std::sync::Arc<SSet>) -> crate::Result<SMap> {
    let images = (0..sub.counts().len())
        .map(|d| {
            (0..sub.count(d))
                .map(|i| {
                    let id = sub.id(GenRef::new(d, i));
                    sup.lookup(id)
                        .filter(|r| r.dim() == d)
                        .map(SimplexTerm::generator)
                        .ok_or_else(|| crate::Error::NotASimplicialMap(format!("`{id}` missing in target")))
                })
                .collect::<crate::Result<Vec<_>>>()
        })
        .collect::<crate::Result<Vec<_>>>()?;
    SMap::new(sub, sup, images)
}

/// The simplex of a standard simplex (or a sub-simplicial set of one) with the
/// given weakly increasing vertex tuple.
pub fn standard_term(delta: &SSet, tuple: &[usize]) -> crate::Result<SimplexTerm> {
    let mut distinct = tuple.to_vec();
    distinct.dedup();
    if distinct.windows(2).any(|w| w[0] > w[1]) {
        return Err(crate::Error::NotMonotone(format!("{tuple:?}")));
    }
    let surj = tuple
        .iter()
        .map(|x| distinct.iter().position(|y| y == x).unwrap() as u8)
        .collect();
    let id = subset_id(&distinct);
    let r = delta.lookup(&id).ok_or(crate::Error::UnknownElement(id))?;
    SimplexTerm::from_surjection(r, surj)
}

/// The map `Δ^m → Δ^n` induced by a weakly increasing vertex map.
pub fn standard_map(m: usize, n: usize, vertex_map: &[usize]) -> crate::Result<SMap> {
    if vertex_map.len() != m + 1 || vertex_map.windows(2).any(|w| w[0] > w[1]) || vertex_map.iter().any(|&v| v > n) {
        return Err(crate::Error::InvalidInput(format!(
            "{vertex_map:?} is not a monotone map [{m}] -> [{n}]"
        )));
    }
    let src = std::sync::Arc::new(SSet::standard(m));
    let tgt = std::sync::Arc::new(SSet::standard(n));
    let (s2, t2) = (src.clone(), tgt.clone());
    SMap::from_fn(src, tgt, move |g| {
        let w: Vec<usize> = s2.gen_vertices(g).iter().map(|&v| vertex_map[v as usize]).collect();
        standard_term(&t2, &w).expect("monotone image")
    })
}

/// Coface `δ_i : Δ^{n-1} → Δ^n`, skipping vertex `i`.
pub fn coface(n: usize, i: usize) -> crate::Result<SMap> {
    let v: Vec<usize> = (0..=n).filter(|&j| j != i).collect();
    standard_map(n - 1, n, &v)
}

/// Codegeneracy `σ_i : Δ^{n+1} → Δ^n`, repeating vertex `i`.
pub fn codegeneracy(n: usize, i: usize) -> crate::Result<SMap> {
    let v: Vec<usize> = (0..=n + 1).map(|j| if j <= i { j } else { j - 1 }).collect();
    standard_map(n + 1, n, &v)
}

/// `s_{j1} … s_{jk} g` written with generator ids, e.g. `s1 s0 v`.
pub fn term_name(x: &SSet, t: &SimplexTerm) -> String {
    let w = t.word();
    if w.is_empty() {
        x.id(t.gen).to_string()
    } else {
        let s: Vec<String> = w.iter().map(|j| format!("s{j}")).collect();
        format!("{} {}", s.join(" "), x.id(t.gen))
    }
}
