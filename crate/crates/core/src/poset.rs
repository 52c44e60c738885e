//! Finite posets, order-preserving maps and the chains of their nerves.
//!
//! Elements are addressed by their position in the input list; that order is
//! the canonical order for everything downstream. A [`Chain`] is a strictly
//! increasing tuple of element indices, i.e. a non-degenerate simplex of the
//! nerve `N(P)`. The chains under subchain inclusion form the posetal
//! category `R(P)`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Default identifier of the cone point added by [`Poset::cone`].
pub const CONE_POINT: &str = "-inf";

/// A finite partially ordered set with its order relation precomputed.
#[derive(Clone, Debug)]
pub struct Poset {
    elements: Vec<String>,
    index: HashMap<String, usize>,
    leq: Vec<Vec<bool>>,
}

impl PartialEq for Poset {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements && self.leq == other.leq
    }
}

impl Eq for Poset {}

impl Poset {
    /// Builds the poset whose order is the reflexive-transitive closure of `pairs`.
    pub fn from_relations<S: AsRef<str>>(elements: &[S], pairs: &[(S, S)]) -> Result<Poset> {
        let mut index = HashMap::new();
        let mut names = Vec::with_capacity(elements.len());
        for (i, e) in elements.iter().enumerate() {
            let e = e.as_ref().to_string();
            if index.insert(e.clone(), i).is_some() {
                return Err(Error::DuplicateElement(e));
            }
            names.push(e);
        }
        let n = names.len();
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for (x, y) in pairs {
            let xi = *index
                .get(x.as_ref())
                .ok_or_else(|| Error::UnknownElement(x.as_ref().to_string()))?;
            let yi = *index
                .get(y.as_ref())
                .ok_or_else(|| Error::UnknownElement(y.as_ref().to_string()))?;
            leq[xi][yi] = true;
        }
        #[allow(clippy::needless_range_loop)]
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if leq[i][j] && leq[j][i] {
                    return Err(Error::CycleDetected(names[i].clone(), names[j].clone()));
                }
            }
        }
        Ok(Poset {
            elements: names,
            index,
            leq,
        })
    }

    /// Total order `0 < 1 < ... < n-1` on elements named by their position.
    pub fn total_order(n: usize) -> Poset {
        let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let pairs: Vec<(String, String)> = (1..n).map(|i| (names[i - 1].clone(), names[i].clone())).collect();
        Poset::from_relations(&names, &pairs).expect("total order is a poset")
    }

    /// Discrete poset on the given names.
    pub fn antichain<S: AsRef<str>>(names: &[S]) -> Result<Poset> {
        Poset::from_relations::<S>(names, &[])
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn name(&self, i: usize) -> &str {
        &self.elements[i]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownElement(name.to_string()))
    }

    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq[x][y]
    }

    #[inline]
    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.leq[x][y]
    }

    /// Non-reflexive pairs of the order relation, in canonical order.
    pub fn strict_relations(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if self.lt(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Covering pairs `x < y` with nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        self.strict_relations()
            .into_iter()
            .filter(|&(x, y)| !(0..n).any(|z| self.lt(x, z) && self.lt(z, y)))
            .collect()
    }

    /// Indices sorted along a linear extension (stable on the canonical order).
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        let below = |x: usize| (0..self.len()).filter(|&y| self.lt(y, x)).count();
        order.sort_by_key(|&x| below(x));
        order
    }

    /// All chains of the nerve, sorted lexicographically by index tuple.
    pub fn chains(&self) -> Vec<Chain> {
        let mut out = Vec::new();
        let mut stack: Vec<usize> = Vec::new();
        for start in 0..self.len() {
            stack.clear();
            stack.push(start);
            self.extend_chains(&mut stack, &mut out);
        }
        out.sort();
        out
    }

    fn extend_chains(&self, stack: &mut Vec<usize>, out: &mut Vec<Chain>) {
        out.push(Chain(stack.clone()));
        let top = *stack.last().expect("non-empty");
        for next in 0..self.len() {
            if self.lt(top, next) {
                stack.push(next);
                self.extend_chains(stack, out);
                stack.pop();
            }
        }
    }

    /// Morphisms of `R(P)`: every pair `(sub, chain)` with `sub ⊆ chain`.
    pub fn chain_inclusions(&self) -> Vec<(Chain, Chain)> {
        let mut out = Vec::new();
        for phi in self.chains() {
            let mut subs = phi.subchains();
            subs.sort();
            for psi in subs {
                out.push((psi, phi.clone()));
            }
        }
        out
    }

    /// The cone `c(P) = P ⊔ {-inf}` with the new point below everything.
    pub fn cone(&self) -> Result<Poset> {
        self.cone_with(CONE_POINT)
    }

    pub fn cone_with(&self, point: &str) -> Result<Poset> {
        if self.index.contains_key(point) {
            return Err(Error::IdentifierClash(point.to_string()));
        }
        let mut names = vec![point.to_string()];
        names.extend(self.elements.iter().cloned());
        let mut pairs: Vec<(String, String)> = self.elements.iter().map(|e| (point.to_string(), e.clone())).collect();
        for (x, y) in self.strict_relations() {
            pairs.push((self.elements[x].clone(), self.elements[y].clone()));
        }
        Poset::from_relations(&names, &pairs)
    }

    /// `Im(φ)` for a weakly increasing tuple: its underlying set as a chain.
    pub fn image_chain(&self, tuple: &[usize]) -> Result<Chain> {
        for w in tuple.windows(2) {
            if !self.leq(w[0], w[1]) {
                return Err(Error::NotMonotone(self.tuple_name(tuple)));
            }
        }
        let mut out: Vec<usize> = Vec::with_capacity(tuple.len());
        for &x in tuple {
            if out.last() != Some(&x) {
                out.push(x);
            }
        }
        Ok(Chain(out))
    }

    pub fn is_weakly_increasing(&self, tuple: &[usize]) -> bool {
        tuple.windows(2).all(|w| self.leq(w[0], w[1]))
    }

    /// Checks that `vertices` is strictly increasing and wraps it.
    pub fn chain(&self, vertices: Vec<usize>) -> Result<Chain> {
        if vertices.is_empty() {
            return Err(Error::InvalidInput("empty chain".into()));
        }
        for &v in &vertices {
            if v >= self.len() {
                return Err(Error::IndexOutOfRange {
                    index: v,
                    limit: self.len(),
                });
            }
        }
        if vertices.windows(2).any(|w| !self.lt(w[0], w[1])) {
            return Err(Error::NotMonotone(self.tuple_name(&vertices)));
        }
        Ok(Chain(vertices))
    }

    /// Parses the `"<"`-joined serialization of a chain.
    pub fn parse_chain(&self, text: &str) -> Result<Chain> {
        let ids = text
            .split('<')
            .map(|s| self.index_of(s.trim()))
            .collect::<Result<Vec<_>>>()?;
        self.chain(ids)
    }

    pub fn chain_name(&self, chain: &Chain) -> String {
        self.tuple_name(&chain.0)
    }

    pub fn tuple_name(&self, tuple: &[usize]) -> String {
        tuple
            .iter()
            .map(|&i| self.elements.get(i).map(String::as_str).unwrap_or("?"))
            .collect::<Vec<_>>()
            .join("<")
    }

    /// Length of the longest chain (number of elements), 0 for the empty poset.
    pub fn height(&self) -> usize {
        self.chains().iter().map(Chain::len).max().unwrap_or(0)
    }
}

/// A strictly increasing tuple of poset elements.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Chain(pub Vec<usize>);

impl Chain {
    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.0.len() - 1
    }

    pub fn last(&self) -> usize {
        *self.0.last().expect("chains are non-empty")
    }

    pub fn contains(&self, x: usize) -> bool {
        self.0.contains(&x)
    }

    pub fn is_subchain_of(&self, other: &Chain) -> bool {
        self.0.iter().all(|x| other.0.contains(x))
    }

    /// Position of each vertex of `self` inside `other`.
    pub fn positions_in(&self, other: &Chain) -> Option<Vec<usize>> {
        self.0.iter().map(|x| other.0.iter().position(|y| y == x)).collect()
    }

    /// All non-empty subchains, including `self`.
    pub fn subchains(&self) -> Vec<Chain> {
        let n = self.0.len();
        (1u64..(1u64 << n))
            .map(|mask| Chain((0..n).filter(|i| mask & (1 << i) != 0).map(|i| self.0[i]).collect()))
            .collect()
    }

    pub fn intersection(&self, other: &Chain) -> Option<Chain> {
        let v: Vec<usize> = self.0.iter().copied().filter(|x| other.0.contains(x)).collect();
        if v.is_empty() {
            None
        } else {
            Some(Chain(v))
        }
    }

    /// Removes the vertex at `position`.
    pub fn without(&self, position: usize) -> Chain {
        let mut v = self.0.clone();
        v.remove(position);
        Chain(v)
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        write!(f, "{}", parts.join("<"))
    }
}

/// An order-preserving map of finite posets.
#[derive(Clone, Debug, PartialEq)]
pub struct PosetMap {
    pub source: Arc<Poset>,
    pub target: Arc<Poset>,
    assignment: Vec<usize>,
}

impl PosetMap {
    pub fn new(source: Arc<Poset>, target: Arc<Poset>, assignment: Vec<usize>) -> Result<Self> {
        if assignment.len() != source.len() {
            return Err(Error::InvalidInput(format!(
                "poset map assigns {} of {} elements",
                assignment.len(),
                source.len()
            )));
        }
        if let Some(&bad) = assignment.iter().find(|&&a| a >= target.len()) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                limit: target.len(),
            });
        }
        for x in 0..source.len() {
            for y in 0..source.len() {
                if source.leq(x, y) && !target.leq(assignment[x], assignment[y]) {
                    return Err(Error::NotOrderPreserving(format!(
                        "{} <= {} but images are not ordered",
                        source.name(x),
                        source.name(y)
                    )));
                }
            }
        }
        Ok(PosetMap {
            source,
            target,
            assignment,
        })
    }

    pub fn from_names(source: Arc<Poset>, target: Arc<Poset>, pairs: &[(&str, &str)]) -> Result<Self> {
        let mut assignment = vec![usize::MAX; source.len()];
        for (s, t) in pairs {
            assignment[source.index_of(s)?] = target.index_of(t)?;
        }
        if let Some(i) = assignment.iter().position(|&a| a == usize::MAX) {
            return Err(Error::InvalidInput(format!(
                "poset map leaves `{}` unassigned",
                source.name(i)
            )));
        }
        PosetMap::new(source, target, assignment)
    }

    pub fn identity(p: Arc<Poset>) -> Self {
        let assignment = (0..p.len()).collect();
        PosetMap {
            source: p.clone(),
            target: p,
            assignment,
        }
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.assignment[x]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn apply_tuple(&self, tuple: &[usize]) -> Vec<usize> {
        tuple.iter().map(|&x| self.assignment[x]).collect()
    }

    pub fn is_identity(&self) -> bool {
        *self.source == *self.target && self.assignment.iter().enumerate().all(|(i, &a)| i == a)
    }

    /// Bijective and order-reflecting.
    pub fn is_isomorphism(&self) -> bool {
        let n = self.source.len();
        if n != self.target.len() {
            return false;
        }
        let mut hit = vec![false; n];
        for &a in &self.assignment {
            if hit[a] {
                return false;
            }
            hit[a] = true;
        }
        (0..n).all(|x| (0..n).all(|y| self.source.leq(x, y) == self.target.leq(self.apply(x), self.apply(y))))
    }

    pub fn inverse(&self) -> Option<PosetMap> {
        if !self.is_isomorphism() {
            return None;
        }
        let mut inv = vec![0; self.assignment.len()];
        for (i, &a) in self.assignment.iter().enumerate() {
            inv[a] = i;
        }
        Some(PosetMap {
            source: self.target.clone(),
            target: self.source.clone(),
            assignment: inv,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example_1_14() -> Poset {
        let elements = ["a1", "a2", "a3", "b1", "b2", "b3", "c"];
        let mut pairs = Vec::new();
        for i in 1..=3usize {
            let prev = (i + 1) % 3 + 1;
            let next = i % 3 + 1;
            pairs.push((format!("a{i}"), format!("b{prev}")));
            pairs.push((format!("a{i}"), format!("b{next}")));
        }
        for j in 1..=3 {
            pairs.push((format!("b{j}"), "c".to_string()));
        }
        let elements: Vec<String> = elements.iter().map(|s| s.to_string()).collect();
        Poset::from_relations(&elements, &pairs).unwrap()
    }

    /// Brute-force oracle: a tuple is a chain iff consecutive entries are strictly ordered.
    fn chain_count_by_subsets(p: &Poset) -> usize {
        let n = p.len();
        (1u32..(1 << n))
            .filter(|mask| {
                let members: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
                members
                    .iter()
                    .all(|&x| members.iter().all(|&y| x == y || p.lt(x, y) || p.lt(y, x)))
            })
            .count()
    }

    #[test]
    fn two_chain() {
        let p = Poset::from_relations(&["0", "1"], &[("0", "1")]).unwrap();
        assert!(p.lt(0, 1));
        assert!(!p.leq(1, 0));
        assert_eq!(p.chains().len(), 3);
    }

    #[test]
    fn closure_adds_a_below_c() {
        let p = example_1_14();
        let c = p.index_of("c").unwrap();
        for a in ["a1", "a2", "a3"] {
            assert!(p.lt(p.index_of(a).unwrap(), c));
        }
        // a1 < b3 and a1 < b2 only.
        let a1 = p.index_of("a1").unwrap();
        assert!(p.lt(a1, p.index_of("b3").unwrap()));
        assert!(p.lt(a1, p.index_of("b2").unwrap()));
        assert!(!p.leq(a1, p.index_of("b1").unwrap()));
        assert_eq!(p.strict_relations().len(), 6 + 3 + 3);
    }

    #[test]
    fn example_1_14_chain_census() {
        let p = example_1_14();
        let chains = p.chains();
        assert_eq!(chains.len(), 25);
        assert_eq!(chain_count_by_subsets(&p), 25);
        let by_len = |k| chains.iter().filter(|c| c.len() == k).count();
        assert_eq!((by_len(1), by_len(2), by_len(3)), (7, 12, 6));
    }

    #[test]
    fn remark_a3_poset_has_no_closure_additions() {
        let p =
            Poset::from_relations(&["a", "b", "c", "d"], &[("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")]).unwrap();
        assert_eq!(p.len(), 4);
        assert_eq!(p.strict_relations().len(), 4);
    }

    #[test]
    fn errors() {
        assert_eq!(
            Poset::from_relations(&["x", "x"], &[]).unwrap_err(),
            Error::DuplicateElement("x".into())
        );
        assert_eq!(
            Poset::from_relations(&["x"], &[("x", "y")]).unwrap_err(),
            Error::UnknownElement("y".into())
        );
        assert!(matches!(
            Poset::from_relations(&["x", "y", "z"], &[("x", "y"), ("y", "z"), ("z", "x")]),
            Err(Error::CycleDetected(..))
        ));
    }

    #[test]
    fn antichain_chains() {
        let p = Poset::antichain(&["p", "q", "r", "s"]).unwrap();
        assert_eq!(p.chains().len(), 4);
    }

    #[test]
    fn inclusions() {
        let p = Poset::total_order(2);
        let top = Chain(vec![0, 1]);
        let into_top = p.chain_inclusions().into_iter().filter(|(_, phi)| *phi == top).count();
        assert_eq!(into_top, 3);
        let single = Chain(vec![0]);
        assert_eq!(
            p.chain_inclusions()
                .into_iter()
                .filter(|(_, phi)| *phi == single)
                .count(),
            1
        );
        let p3 = Poset::total_order(3);
        let top3 = Chain(vec![0, 1, 2]);
        assert_eq!(
            p3.chain_inclusions()
                .into_iter()
                .filter(|(_, phi)| *phi == top3)
                .count(),
            7
        );
    }

    #[test]
    fn inclusions_form_a_posetal_category() {
        let p = example_1_14();
        let incl = p.chain_inclusions();
        let set: std::collections::HashSet<_> = incl.iter().cloned().collect();
        for c in p.chains() {
            assert!(set.contains(&(c.clone(), c)));
        }
        for (a, b) in &incl {
            for (b2, c) in &incl {
                if b == b2 {
                    assert!(set.contains(&(a.clone(), c.clone())));
                }
            }
        }
    }

    #[test]
    fn chains_closed_under_subchains() {
        let p = example_1_14();
        let chains = p.chains();
        let set: std::collections::HashSet<_> = chains.iter().cloned().collect();
        assert_eq!(set.len(), chains.len());
        for c in &chains {
            for s in c.subchains() {
                assert!(set.contains(&s));
            }
        }
    }

    #[test]
    fn cone_identity() {
        let empty = Poset::antichain::<&str>(&[]).unwrap();
        assert_eq!(empty.cone().unwrap().len(), 1);
        let two = Poset::total_order(2);
        let c = two.cone().unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(c.chains().len(), 7);
        for p in [example_1_14(), Poset::antichain(&["x", "y"]).unwrap(), two] {
            assert_eq!(p.cone().unwrap().chains().len(), 2 * p.chains().len() + 1);
        }
        let clash = Poset::antichain(&[CONE_POINT]).unwrap();
        assert!(matches!(clash.cone(), Err(Error::IdentifierClash(_))));
    }

    #[test]
    fn image_chains() {
        let p = Poset::total_order(2);
        assert_eq!(p.image_chain(&[0, 0, 1]).unwrap(), Chain(vec![0, 1]));
        assert_eq!(p.image_chain(&[0, 1]).unwrap(), Chain(vec![0, 1]));
        assert_eq!(p.image_chain(&[1, 1, 1]).unwrap(), Chain(vec![1]));
        assert!(matches!(p.image_chain(&[1, 0]), Err(Error::NotMonotone(_))));
    }

    #[test]
    fn parse_and_name_chains() {
        let p = example_1_14();
        let c = p.parse_chain("a1<b2<c").unwrap();
        assert_eq!(p.chain_name(&c), "a1<b2<c");
        assert!(p.parse_chain("b2<a1").is_err());
    }

    #[test]
    fn poset_map_checks_order() {
        let two = Arc::new(Poset::total_order(2));
        let disc = Arc::new(Poset::antichain(&["0", "1"]).unwrap());
        assert!(PosetMap::new(disc.clone(), two.clone(), vec![0, 1]).is_ok());
        assert!(PosetMap::new(two.clone(), disc.clone(), vec![0, 1]).is_err());
        let bij = PosetMap::new(disc, two.clone(), vec![0, 1]).unwrap();
        assert!(!bij.is_isomorphism());
        assert!(PosetMap::identity(two).is_isomorphism());
    }
}
