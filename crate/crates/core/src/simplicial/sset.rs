use std::collections::HashMap;

use super::term::{surjections, GenRef, SimplexTerm};
use crate::error::{Error, Result};

/// A non-degenerate generator with its faces `d_0 .. d_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub id: String,
    pub faces: Vec<SimplexTerm>,
}

/// A finite simplicial set presented by its non-degenerate simplices.
///
/// Every simplex is a [`SimplexTerm`] over one of the generators; faces of
/// degenerate simplices are computed by the simplicial identities.
#[derive(Clone, Debug, Default)]
pub struct SSet {
    gens: Vec<Vec<Generator>>,
    ids: HashMap<String, GenRef>,
    vertices: Vec<Vec<Vec<u32>>>,
}

impl PartialEq for SSet {
    fn eq(&self, other: &Self) -> bool {
        self.gens == other.gens
    }
}

impl Eq for SSet {}

/// Incremental construction of an [`SSet`]; faces must reference generators
/// that are already present.
#[derive(Default)]
pub struct SSetBuilder {
    gens: Vec<Vec<Generator>>,
    ids: HashMap<String, GenRef>,
}

impl SSetBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, id: impl Into<String>) -> Result<GenRef> {
        self.push(id.into(), Vec::new(), 0)
    }

    pub fn add_simplex(&mut self, id: impl Into<String>, faces: Vec<SimplexTerm>) -> Result<GenRef> {
        let id = id.into();
        if faces.len() < 2 {
            return Err(Error::MalformedSSet(format!("`{id}` needs at least two faces")));
        }
        let dim = faces.len() - 1;
        for f in &faces {
            if f.degree() != dim - 1 {
                return Err(Error::MalformedSSet(format!(
                    "face {f} of `{id}` has degree {} instead of {}",
                    f.degree(),
                    dim - 1
                )));
            }
            if f.gen.dim() >= dim || self.gens.get(f.gen.dim()).is_none_or(|g| f.gen.idx() >= g.len()) {
                return Err(Error::MalformedSSet(format!("face {f} of `{id}` is undeclared")));
            }
        }
        self.push(id, faces, dim)
    }

    fn push(&mut self, id: String, faces: Vec<SimplexTerm>, dim: usize) -> Result<GenRef> {
        if self.ids.contains_key(&id) {
            return Err(Error::MalformedSSet(format!("duplicate generator id `{id}`")));
        }
        while self.gens.len() <= dim {
            self.gens.push(Vec::new());
        }
        let r = GenRef::new(dim, self.gens[dim].len());
        self.gens[dim].push(Generator { id: id.clone(), faces });
        self.ids.insert(id, r);
        Ok(r)
    }

    pub fn id_of(&self, id: &str) -> Option<GenRef> {
        self.ids.get(id).copied()
    }

    /// Validates the simplicial identities and finalizes.
    pub fn build(self) -> Result<SSet> {
        let mut gens = self.gens;
        while gens.last().is_some_and(|g| g.is_empty()) {
            gens.pop();
        }
        let mut s = SSet {
            gens,
            ids: self.ids,
            vertices: Vec::new(),
        };
        s.compute_vertices();
        s.check_identities()?;
        Ok(s)
    }
}

impl SSet {
    pub fn empty() -> SSet {
        SSet::default()
    }

    /// Largest generator dimension, `None` when empty.
    pub fn dimension(&self) -> Option<usize> {
        if self.gens.is_empty() {
            None
        } else {
            Some(self.gens.len() - 1)
        }
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn generators(&self, dim: usize) -> &[Generator] {
        self.gens.get(dim).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn count(&self, dim: usize) -> usize {
        self.generators(dim).len()
    }

    /// Generator counts per dimension.
    pub fn counts(&self) -> Vec<usize> {
        self.gens.iter().map(Vec::len).collect()
    }

    pub fn total_generators(&self) -> usize {
        self.gens.iter().map(Vec::len).sum()
    }

    pub fn gen_refs(&self) -> impl Iterator<Item = GenRef> + '_ {
        self.gens
            .iter()
            .enumerate()
            .flat_map(|(d, g)| (0..g.len()).map(move |i| GenRef::new(d, i)))
    }

    pub fn generator(&self, g: GenRef) -> &Generator {
        &self.gens[g.dim()][g.idx()]
    }

    pub fn id(&self, g: GenRef) -> &str {
        &self.generator(g).id
    }

    pub fn lookup(&self, id: &str) -> Option<GenRef> {
        self.ids.get(id).copied()
    }

    pub fn contains(&self, g: GenRef) -> bool {
        self.gens.get(g.dim()).is_some_and(|v| g.idx() < v.len())
    }

    /// Vertex generator indices of a generator, in order.
    pub fn gen_vertices(&self, g: GenRef) -> &[u32] {
        &self.vertices[g.dim()][g.idx()]
    }

    /// Vertex generator indices of any simplex.
    pub fn vertices(&self, t: &SimplexTerm) -> Vec<u32> {
        let v = self.gen_vertices(t.gen);
        t.surjection().iter().map(|&j| v[j as usize]).collect()
    }

    /// `d_i` of an arbitrary simplex, in normal form.
    pub fn face(&self, t: &SimplexTerm, i: usize) -> Result<SimplexTerm> {
        let n = t.degree();
        if n == 0 || i > n {
            return Err(Error::IndexOutOfRange { index: i, limit: n });
        }
        Ok(self.face_unchecked(t, i))
    }

    pub(crate) fn face_unchecked(&self, t: &SimplexTerm, i: usize) -> SimplexTerm {
        let s = t.surjection();
        let v = s[i];
        let still_surjective = (i > 0 && s[i - 1] == v) || (i + 1 < s.len() && s[i + 1] == v);
        let mut reduced: Vec<u8> = Vec::with_capacity(s.len() - 1);
        reduced.extend_from_slice(&s[..i]);
        reduced.extend_from_slice(&s[i + 1..]);
        if still_surjective {
            return SimplexTerm::from_parts_unchecked(t.gen, reduced);
        }
        for x in reduced.iter_mut() {
            if *x > v {
                *x -= 1;
            }
        }
        let f = &self.generator(t.gen).faces[v as usize];
        f.degenerate_by(&reduced)
    }

    /// `s_i` of an arbitrary simplex.
    pub fn degeneracy(&self, t: &SimplexTerm, i: usize) -> Result<SimplexTerm> {
        t.degeneracy(i)
    }

    /// All simplices of degree `n`, degenerate ones included, in canonical order.
    pub fn simplices(&self, n: usize) -> Vec<SimplexTerm> {
        let mut out = Vec::new();
        if self.gens.is_empty() {
            return out;
        }
        for m in 0..=n.min(self.gens.len() - 1) {
            if self.gens[m].is_empty() {
                continue;
            }
            let surj = surjections(n, m);
            for idx in 0..self.gens[m].len() {
                let g = GenRef::new(m, idx);
                for s in &surj {
                    out.push(SimplexTerm::from_parts_unchecked(g, s.clone()));
                }
            }
        }
        out
    }

    /// Number of simplices of degree `n`, counting degenerate ones.
    pub fn simplex_count(&self, n: usize) -> usize {
        if self.gens.is_empty() {
            return 0;
        }
        (0..=n.min(self.gens.len() - 1))
            .map(|m| self.gens[m].len() * binomial(n, m))
            .sum()
    }

    fn compute_vertices(&mut self) {
        let mut verts: Vec<Vec<Vec<u32>>> = Vec::with_capacity(self.gens.len());
        for (dim, gens) in self.gens.iter().enumerate() {
            let mut row = Vec::with_capacity(gens.len());
            for (idx, g) in gens.iter().enumerate() {
                if dim == 0 {
                    row.push(vec![idx as u32]);
                    continue;
                }
                let of = |t: &SimplexTerm| -> Vec<u32> {
                    let base = &verts[t.gen.dim()][t.gen.idx()];
                    t.surjection().iter().map(|&j| base[j as usize]).collect()
                };
                let mut v = of(&g.faces[dim]);
                let last = of(&g.faces[0]);
                v.push(*last.last().unwrap());
                row.push(v);
            }
            verts.push(row);
        }
        self.vertices = verts;
    }

    fn check_identities(&self) -> Result<()> {
        for g in self.gen_refs() {
            let n = g.dim();
            if n < 1 {
                continue;
            }
            let t = SimplexTerm::generator(g);
            // vertex consistency: d_i drops vertex i
            let verts = self.gen_vertices(g);
            for i in 0..=n {
                let f = &self.generator(g).faces[i];
                let mut expect = verts.to_vec();
                expect.remove(i);
                if self.vertices(f) != expect {
                    return Err(Error::MalformedSSet(format!(
                        "faces of `{}` do not agree on vertices",
                        self.id(g)
                    )));
                }
            }
            if n < 2 {
                continue;
            }
            for j in 1..=n {
                let dj = self.face_unchecked(&t, j);
                for i in 0..j {
                    let lhs = self.face_unchecked(&dj, i);
                    let rhs = self.face_unchecked(&self.face_unchecked(&t, i), j - 1);
                    if lhs != rhs {
                        return Err(Error::MalformedSSet(format!(
                            "d{i} d{j} != d{} d{i} on `{}`",
                            j - 1,
                            self.id(g)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// The standard simplex `Δ^n`; generator ids list the vertex subset.
    pub fn standard(n: usize) -> SSet {
        simplex_subsets(n, |_| true)
    }

    /// `∂Δ^n`, empty for `n = 0`.
    pub fn boundary(n: usize) -> SSet {
        simplex_subsets(n, |mask| mask.count_ones() as usize != n + 1)
    }

    /// The horn `Λ^n_k`.
    pub fn horn(n: usize, k: usize) -> Result<SSet> {
        if n == 0 || k > n {
            return Err(Error::IndexOutOfRange { index: k, limit: n });
        }
        let full = (1u64 << (n + 1)) - 1;
        let missing = full & !(1u64 << k);
        Ok(simplex_subsets(n, move |mask| mask != full && mask != missing))
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut r: usize = 1;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// Id of the face of `Δ^n` spanned by a vertex subset.
pub fn subset_id(vertices: &[usize]) -> String {
    vertices.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(".")
}

/// Sub-simplicial set of `Δ^n` spanned by the vertex subsets accepted by `keep`
/// (which must be closed under taking non-empty subsets).
fn simplex_subsets(n: usize, keep: impl Fn(u64) -> bool) -> SSet {
    let mut b = SSetBuilder::new();
    let mut index: HashMap<u64, GenRef> = HashMap::new();
    let mut masks: Vec<u64> = (1u64..(1u64 << (n + 1))).filter(|&m| keep(m)).collect();
    masks.sort_by_key(|&m| (m.count_ones(), bits(m)));
    for m in masks {
        let verts = bits(m);
        let id = subset_id(&verts);
        let r = if verts.len() == 1 {
            b.add_vertex(id)
        } else {
            let faces = (0..verts.len())
                .map(|i| {
                    let sub = m & !(1u64 << verts[i]);
                    SimplexTerm::generator(index[&sub])
                })
                .collect();
            b.add_simplex(id, faces)
        }
        .expect("subsets of a simplex form a simplicial set");
        index.insert(m, r);
    }
    b.build().expect("subsets of a simplex form a simplicial set")
}

fn bits(m: u64) -> Vec<usize> {
    (0..64).filter(|i| m & (1u64 << i) != 0).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edge_set() -> (SSet, GenRef, GenRef) {
        let mut b = SSetBuilder::new();
        let v0 = b.add_vertex("v0").unwrap();
        let v1 = b.add_vertex("v1").unwrap();
        let e = b
            .add_simplex("e", vec![SimplexTerm::generator(v1), SimplexTerm::generator(v0)])
            .unwrap();
        (b.build().unwrap(), v0, e)
    }

    #[test]
    fn face_of_degenerate_vertex() {
        let (s, v0, _) = edge_set();
        let t = SimplexTerm::generator(v0).degeneracy(0).unwrap();
        assert_eq!(s.face(&t, 1).unwrap(), SimplexTerm::generator(v0));
        assert_eq!(s.face(&t, 0).unwrap(), SimplexTerm::generator(v0));
    }

    #[test]
    fn stored_faces() {
        let (s, _, e) = edge_set();
        let t = SimplexTerm::generator(e);
        assert_eq!(s.face(&t, 0).unwrap(), s.generator(e).faces[0]);
        let s1 = t.degeneracy(1).unwrap();
        assert_eq!(s.face(&s1, 1).unwrap(), t);
        assert!(matches!(s.face(&t, 2), Err(Error::IndexOutOfRange { .. })));
        assert!(s.face(&SimplexTerm::generator(GenRef::new(0, 0)), 0).is_err());
    }

    #[test]
    fn degeneracy_then_face_is_identity() {
        let d = SSet::standard(3);
        for n in 0..4 {
            for t in d.simplices(n) {
                for i in 0..=n {
                    let s = t.degeneracy(i).unwrap();
                    assert_eq!(d.face(&s, i).unwrap(), t);
                    assert_eq!(d.face(&s, i + 1).unwrap(), t);
                }
            }
        }
    }

    #[test]
    fn cells() {
        assert_eq!(SSet::standard(0).counts(), vec![1]);
        assert_eq!(SSet::boundary(2).counts(), vec![3, 3]);
        assert_eq!(SSet::horn(2, 1).unwrap().counts(), vec![3, 2]);
        assert_eq!(SSet::standard(3).counts(), vec![4, 6, 4, 1]);
        assert!(SSet::boundary(0).is_empty());
        assert!(SSet::horn(2, 3).is_err());
        // horn(2,1) omits the face opposite vertex 1
        let h = SSet::horn(2, 1).unwrap();
        assert!(h.lookup("0.2").is_none());
        assert!(h.lookup("0.1").is_some());
    }

    #[test]
    fn rejects_bad_identities() {
        let mut b = SSetBuilder::new();
        let v0 = b.add_vertex("a").unwrap();
        let v1 = b.add_vertex("b").unwrap();
        let g = |r| SimplexTerm::generator(r);
        let e01 = b.add_simplex("ab", vec![g(v1), g(v0)]).unwrap();
        let e10 = b.add_simplex("ba", vec![g(v0), g(v1)]).unwrap();
        // triangle whose edges do not share vertices correctly
        b.add_simplex("t", vec![g(e01), g(e10), g(e01)]).unwrap();
        assert!(b.build().is_err());
    }

    #[test]
    fn simplex_count_matches_enumeration() {
        let d = SSet::standard(2);
        for n in 0..5 {
            assert_eq!(d.simplices(n).len(), d.simplex_count(n));
        }
        // Δ^2 has C(n+3, 2) simplices of degree n
        assert_eq!(d.simplex_count(4), 21);
    }
}
