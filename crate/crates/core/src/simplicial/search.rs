//! Backtracking enumeration of simplicial maps.
//!
//! Generators of the source are assigned in order of increasing dimension.
//! A generator's candidates are the target simplices of its degree whose
//! vertices match the images already chosen for its vertices; each candidate
//! is then checked against every face.

use std::collections::HashMap;
use std::sync::Arc;

use super::map::SMap;
use super::sset::SSet;
use super::term::{GenRef, SimplexTerm};
use super::Budget;
use crate::error::{Error, Result};

/// Returned by a visitor to continue or stop the enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Visit {
    Continue,
    Stop,
}

type Accept<'a> = dyn Fn(GenRef, &SimplexTerm) -> bool + 'a;

/// A configured search for maps `source → target`.
pub struct MapSearch<'a> {
    source: Arc<SSet>,
    target: Arc<SSet>,
    fixed: HashMap<GenRef, SimplexTerm>,
    accept: Option<Box<Accept<'a>>>,
    budget: Budget,
}

impl<'a> MapSearch<'a> {
    pub fn new(source: Arc<SSet>, target: Arc<SSet>) -> Self {
        MapSearch {
            source,
            target,
            fixed: HashMap::new(),
            accept: None,
            budget: Budget::default(),
        }
    }

    /// Forces the image of a generator.
    pub fn fix(mut self, g: GenRef, image: SimplexTerm) -> Self {
        self.fixed.insert(g, image);
        self
    }

    pub fn fix_all(mut self, fixed: impl IntoIterator<Item = (GenRef, SimplexTerm)>) -> Self {
        self.fixed.extend(fixed);
        self
    }

    /// Restricts the admissible image of each generator.
    pub fn accept(mut self, f: impl Fn(GenRef, &SimplexTerm) -> bool + 'a) -> Self {
        self.accept = Some(Box::new(f));
        self
    }

    pub fn budget(mut self, budget: Budget) -> Self {
        self.budget = budget;
        self
    }

    fn check_fixed(&self) -> Result<()> {
        for (&g, img) in &self.fixed {
            let name = || {
                if self.source.contains(g) {
                    self.source.id(g).to_string()
                } else {
                    format!("{g:?}")
                }
            };
            if !self.source.contains(g) || img.degree() != g.dim() || !self.target.contains(img.gen) {
                return Err(Error::InconsistentConstraint(name()));
            }
            if g.dim() == 0 {
                continue;
            }
            for (i, f) in self.source.generator(g).faces.iter().enumerate() {
                if let Some(fi) = self.fixed.get(&f.gen) {
                    if fi.degenerate_by(f.surjection()) != self.target.face_unchecked(img, i) {
                        return Err(Error::InconsistentConstraint(name()));
                    }
                }
            }
        }
        Ok(())
    }

    /// Calls `visit` on each map in canonical order. Returns the number of
    /// maps visited.
    pub fn run(&self, mut visit: impl FnMut(&SMap) -> Visit) -> Result<usize> {
        self.check_fixed()?;
        let src = &self.source;
        let order: Vec<GenRef> = src.gen_refs().collect();
        let top = src.counts().len();
        let mut index: Vec<HashMap<Vec<u32>, Vec<SimplexTerm>>> = Vec::with_capacity(top);
        for n in 0..top {
            if n == 0 {
                index.push(HashMap::new());
                continue;
            }
            let count = self.target.simplex_count(n);
            if count > self.budget.0 {
                return Err(Error::BudgetExceeded {
                    what: format!("degree-{n} simplices"),
                    limit: self.budget.0,
                });
            }
            let mut by_vertices: HashMap<Vec<u32>, Vec<SimplexTerm>> = HashMap::new();
            for t in self.target.simplices(n) {
                by_vertices.entry(self.target.vertices(&t)).or_default().push(t);
            }
            index.push(by_vertices);
        }
        let mut images: Vec<Vec<SimplexTerm>> = src.counts().iter().map(|&c| Vec::with_capacity(c)).collect();
        let mut state = State {
            nodes: 0,
            found: 0,
            stopped: false,
        };
        self.descend(0, &order, &index, &mut images, &mut state, &mut visit)?;
        Ok(state.found)
    }

    fn descend(
        &self,
        k: usize,
        order: &[GenRef],
        index: &[HashMap<Vec<u32>, Vec<SimplexTerm>>],
        images: &mut Vec<Vec<SimplexTerm>>,
        state: &mut State,
        visit: &mut dyn FnMut(&SMap) -> Visit,
    ) -> Result<()> {
        if k == order.len() {
            state.found += 1;
            let m = SMap::from_images_unchecked(self.source.clone(), self.target.clone(), images.clone());
            if visit(&m) == Visit::Stop {
                state.stopped = true;
            }
            return Ok(());
        }
        state.nodes += 1;
        if state.nodes > self.budget.0 {
            return Err(Error::BudgetExceeded {
                what: "map search nodes".into(),
                limit: self.budget.0,
            });
        }
        let g = order[k];
        let n = g.dim();
        let gen = self.source.generator(g);
        let admissible = |t: &SimplexTerm, images: &Vec<Vec<SimplexTerm>>| -> bool {
            if let Some(acc) = &self.accept {
                if !acc(g, t) {
                    return false;
                }
            }
            gen.faces.iter().enumerate().all(|(i, f)| {
                let fi = images[f.gen.dim()][f.gen.idx()].degenerate_by(f.surjection());
                self.target.face_unchecked(t, i) == fi
            })
        };
        let try_one = |t: SimplexTerm,
                       images: &mut Vec<Vec<SimplexTerm>>,
                       state: &mut State,
                       visit: &mut dyn FnMut(&SMap) -> Visit|
         -> Result<()> {
            images[n].push(t);
            let r = self.descend(k + 1, order, index, images, state, visit);
            images[n].pop();
            r
        };
        if let Some(t) = self.fixed.get(&g) {
            if admissible(t, images) {
                try_one(t.clone(), images, state, visit)?;
            }
            return Ok(());
        }
        let key: Vec<u32> = self
            .source
            .gen_vertices(g)
            .iter()
            .map(|&v| if n == 0 { v } else { images[0][v as usize].gen.idx })
            .collect();
        let candidates: Vec<SimplexTerm> = if n == 0 {
            (0..self.target.count(0))
                .map(|i| SimplexTerm::generator(GenRef::new(0, i)))
                .collect()
        } else {
            index[n].get(&key).cloned().unwrap_or_default()
        };
        for t in candidates {
            if state.stopped {
                break;
            }
            if admissible(&t, images) {
                try_one(t, images, state, visit)?;
            }
        }
        Ok(())
    }

    /// All maps, in canonical order.
    pub fn all(&self) -> Result<Vec<SMap>> {
        let mut out = Vec::new();
        self.run(|m| {
            out.push(m.clone());
            Visit::Continue
        })?;
        Ok(out)
    }

    pub fn first(&self) -> Result<Option<SMap>> {
        let mut out = None;
        self.run(|m| {
            out = Some(m.clone());
            Visit::Stop
        })?;
        Ok(out)
    }

    pub fn count(&self) -> Result<usize> {
        self.run(|_| Visit::Continue)
    }
}

struct State {
    nodes: usize,
    found: usize,
    stopped: bool,
}

/// All simplicial maps `source → target` extending `constraints`.
pub fn enumerate_maps(
    source: Arc<SSet>,
    target: Arc<SSet>,
    constraints: impl IntoIterator<Item = (GenRef, SimplexTerm)>,
) -> Result<Vec<SMap>> {
    MapSearch::new(source, target).fix_all(constraints).all()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn yoneda_counts() {
        let y = Arc::new(SSet::boundary(2));
        for n in 0..=3 {
            let maps = enumerate_maps(Arc::new(SSet::standard(n)), y.clone(), []).unwrap();
            assert_eq!(maps.len(), y.simplex_count(n), "degree {n}");
        }
    }

    #[test]
    fn boundary_into_interval() {
        let maps = enumerate_maps(Arc::new(SSet::boundary(1)), Arc::new(SSet::standard(1)), []).unwrap();
        assert_eq!(maps.len(), 4);
        for m in &maps {
            m.validate().unwrap();
        }
    }

    #[test]
    fn inconsistent_constraint() {
        let d1 = Arc::new(SSet::standard(1));
        let edge = GenRef::new(1, 0);
        // edge fixed to the identity but vertex 0 forced onto vertex 1
        let r = MapSearch::new(d1.clone(), d1)
            .fix(edge, SimplexTerm::generator(edge))
            .fix(GenRef::new(0, 0), SimplexTerm::generator(GenRef::new(0, 1)))
            .all();
        assert!(matches!(r, Err(Error::InconsistentConstraint(_))));
    }
}
