//! Colimits of finite diagrams of simplicial sets, computed degree by degree.

use std::collections::HashMap;
use std::sync::Arc;

use super::map::SMap;
use super::sset::{SSet, SSetBuilder};
use super::term::{GenRef, SimplexTerm};
use super::Budget;
use crate::error::{Error, Result};
use crate::union_find::UnionFind;

/// A finite category given by objects and generating arrows.
///
/// `relations` lists triples `(a, b, c)` asserting `arrow c = arrow b ∘ arrow a`;
/// these are checked on the supplied functor.
#[derive(Clone, Debug, Default)]
pub struct Shape {
    pub names: Vec<String>,
    pub arrows: Vec<(usize, usize)>,
    pub relations: Vec<(usize, usize, usize)>,
}

impl Shape {
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

/// The colimit object with its canonical maps from each value.
#[derive(Clone, Debug)]
pub struct Colimit {
    pub sset: Arc<SSet>,
    pub legs: Vec<SMap>,
    /// Equivalence classes in each degree, as lists of `(object, simplex)`.
    pub classes: Vec<Vec<Vec<(usize, SimplexTerm)>>>,
    /// Least member `(object, generator)` of the class behind each generator.
    pub representatives: Vec<Vec<(usize, SimplexTerm)>>,
}

/// Degree-wise colimit: in each degree the disjoint union of the simplex sets
/// modulo the identifications `x ~ F(a)(x)`, merged with union-find.
pub fn colimit(shape: &Shape, values: &[Arc<SSet>], maps: &[SMap], budget: Budget) -> Result<Colimit> {
    if values.len() != shape.len() || maps.len() != shape.arrows.len() {
        return Err(Error::NotAFunctor(
            "value or arrow count does not match the shape".into(),
        ));
    }
    for (k, (&(a, b), f)) in shape.arrows.iter().zip(maps).enumerate() {
        if *f.source != *values[a] || *f.target != *values[b] {
            return Err(Error::NotAFunctor(format!(
                "arrow {k} ({} -> {}) has the wrong endpoints",
                shape.names[a], shape.names[b]
            )));
        }
    }
    for &(a, b, c) in &shape.relations {
        if maps[a].then(&maps[b]).images() != maps[c].images() {
            return Err(Error::NotAFunctor(format!(
                "arrow {c} is not arrow {b} after arrow {a}"
            )));
        }
    }
    let top = values.iter().filter_map(|v| v.dimension()).max();
    let Some(top) = top else {
        let sset = Arc::new(SSet::empty());
        let legs = values.iter().map(|_| SMap::from_empty(sset.clone())).collect();
        return Ok(Colimit {
            sset,
            legs,
            classes: Vec::new(),
            representatives: Vec::new(),
        });
    };

    // Per degree: member list, lookup, class label of each member.
    let mut members: Vec<Vec<(usize, SimplexTerm)>> = Vec::new();
    let mut lookup: Vec<Vec<HashMap<SimplexTerm, usize>>> = Vec::new();
    let mut label: Vec<Vec<usize>> = Vec::new();
    let mut nclasses: Vec<usize> = Vec::new();
    for n in 0..=top {
        let total: usize = values.iter().map(|v| v.simplex_count(n)).sum();
        if total > budget.0 {
            return Err(Error::BudgetExceeded {
                what: format!("degree-{n} colimit terms"),
                limit: budget.0,
            });
        }
        let mut mem = Vec::with_capacity(total);
        let mut look = Vec::with_capacity(values.len());
        for (o, v) in values.iter().enumerate() {
            let mut h = HashMap::new();
            for t in v.simplices(n) {
                h.insert(t.clone(), mem.len());
                mem.push((o, t));
            }
            look.push(h);
        }
        let mut uf = UnionFind::new(mem.len());
        for (&(a, b), f) in shape.arrows.iter().zip(maps) {
            for (t, &i) in &look[a] {
                let j = look[b][&f.apply(t)];
                uf.union(i, j);
            }
        }
        let (lab, k) = uf.classes();
        members.push(mem);
        lookup.push(look);
        label.push(lab);
        nclasses.push(k);
    }

    let mut classes: Vec<Vec<Vec<(usize, SimplexTerm)>>> = Vec::with_capacity(top + 1);
    for n in 0..=top {
        let mut cl = vec![Vec::new(); nclasses[n]];
        for (i, m) in members[n].iter().enumerate() {
            cl[label[n][i]].push(m.clone());
        }
        classes.push(cl);
    }

    // Non-degenerate classes become generators, ordered by least member.
    let mut gen_of: Vec<Vec<Option<GenRef>>> = Vec::with_capacity(top + 1);
    let mut b = SSetBuilder::new();
    let class_of = |n: usize, o: usize, t: &SimplexTerm| label[n][lookup[n][o][t]];
    let mut memo: HashMap<(usize, usize), SimplexTerm> = HashMap::new();
    let mut representatives: Vec<Vec<(usize, SimplexTerm)>> = Vec::with_capacity(top + 1);
    for n in 0..=top {
        let mut row = vec![None; nclasses[n]];
        let mut reps = Vec::new();
        for (c, cl) in classes[n].iter().enumerate() {
            if cl.iter().any(|(_, t)| t.is_degenerate()) {
                continue;
            }
            let (o, t) = &cl[0];
            let id = format!("{}{}", shape.names[*o], values[*o].id(t.gen));
            let r = if n == 0 {
                b.add_vertex(id)?
            } else {
                let faces = (0..=n)
                    .map(|i| {
                        let f = values[*o].face_unchecked(t, i);
                        term_of_class(n - 1, class_of(n - 1, *o, &f), &classes, &gen_of, &class_of, &mut memo)
                    })
                    .collect();
                b.add_simplex(id, faces)?
            };
            row[c] = Some(r);
            reps.push((*o, t.clone()));
        }
        gen_of.push(row);
        representatives.push(reps);
    }
    let sset = Arc::new(b.build()?);
    let legs = values
        .iter()
        .enumerate()
        .map(|(o, v)| {
            let images = (0..v.counts().len())
                .map(|d| {
                    (0..v.count(d))
                        .map(|i| {
                            let t = SimplexTerm::generator(GenRef::new(d, i));
                            term_of_class(d, class_of(d, o, &t), &classes, &gen_of, &class_of, &mut memo)
                        })
                        .collect()
                })
                .collect();
            SMap::from_images_unchecked(v.clone(), sset.clone(), images)
        })
        .collect();
    representatives.truncate(sset.counts().len());
    Ok(Colimit {
        sset,
        legs,
        classes,
        representatives,
    })
}

fn term_of_class(
    n: usize,
    c: usize,
    classes: &[Vec<Vec<(usize, SimplexTerm)>>],
    gen_of: &[Vec<Option<GenRef>>],
    class_of: &dyn Fn(usize, usize, &SimplexTerm) -> usize,
    memo: &mut HashMap<(usize, usize), SimplexTerm>,
) -> SimplexTerm {
    if let Some(t) = memo.get(&(n, c)) {
        return t.clone();
    }
    let t = match gen_of.get(n).and_then(|row| row[c]) {
        Some(r) => SimplexTerm::generator(r),
        None => {
            let (o, t) = classes[n][c]
                .iter()
                .find(|(_, t)| t.is_degenerate())
                .expect("degenerate class has a degenerate member");
            let m = t.gen.dim();
            let g = SimplexTerm::generator(t.gen);
            let inner = term_of_class(m, class_of(m, *o, &g), classes, gen_of, class_of, memo);
            inner.degenerate_by(t.surjection())
        }
    };
    memo.insert((n, c), t.clone());
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point() -> Arc<SSet> {
        Arc::new(SSet::standard(0))
    }

    #[test]
    fn coproduct_of_points() {
        let shape = Shape {
            names: vec!["a".into(), "b".into()],
            ..Default::default()
        };
        let c = colimit(&shape, &[point(), point()], &[], Budget::default()).unwrap();
        assert_eq!(c.sset.counts(), vec![2]);
    }

    #[test]
    fn glue_endpoints_of_interval() {
        let bd = Arc::new(SSet::boundary(1));
        let d1 = Arc::new(SSet::standard(1));
        let pt = point();
        let to_pt = SMap::from_fn(bd.clone(), pt.clone(), |_| SimplexTerm::generator(GenRef::new(0, 0))).unwrap();
        let incl = super::super::inclusion_by_ids(bd.clone(), d1.clone()).unwrap();
        let shape = Shape {
            names: vec!["bd".into(), "pt".into(), "d1".into()],
            arrows: vec![(0, 1), (0, 2)],
            relations: vec![],
        };
        let c = colimit(&shape, &[bd, pt, d1], &[to_pt, incl], Budget::default()).unwrap();
        assert_eq!(c.sset.counts(), vec![1, 1]);
        for leg in &c.legs {
            leg.validate().unwrap();
        }
    }
}
