//! Set-valued functors on finite posets, their colimits, and the
//! almost-filtered condition under which canonical maps into a colimit are
//! injective.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poset::Poset;
use crate::union_find::UnionFind;

/// A functor `G : D → Set` on a finite poset `D`; `d ≤ d'` is an arrow `d → d'`.
#[derive(Clone, Debug)]
pub struct SetDiagram {
    pub shape: Arc<Poset>,
    values: Vec<Vec<String>>,
    /// `maps[a][b]` is `G(a → b)` when `a ≤ b`.
    maps: Vec<Vec<Option<Vec<usize>>>>,
}

/// A generating arrow with its function, given on element indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetArrow {
    pub from: usize,
    pub to: usize,
    pub map: Vec<usize>,
}

impl SetDiagram {
    /// Builds the functor from arrows along (at least) every covering relation.
    /// Composites along different paths must agree; non-covering arrows that
    /// are supplied are checked against the composite.
    pub fn new(shape: Arc<Poset>, values: Vec<Vec<String>>, arrows: Vec<SetArrow>) -> Result<Self> {
        let n = shape.len();
        if values.len() != n {
            return Err(Error::InvalidInput(format!(
                "{} values for {} objects",
                values.len(),
                n
            )));
        }
        let mut given: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for a in arrows {
            if a.from >= n || a.to >= n || !shape.leq(a.from, a.to) {
                return Err(Error::NotAFunctor(format!(
                    "no arrow {} -> {} in the shape",
                    a.from, a.to
                )));
            }
            if a.map.len() != values[a.from].len() || a.map.iter().any(|&y| y >= values[a.to].len()) {
                return Err(Error::NotAFunctor(format!(
                    "function {} -> {} has the wrong domain or codomain",
                    shape.name(a.from),
                    shape.name(a.to)
                )));
            }
            if given.insert((a.from, a.to), a.map).is_some() {
                return Err(Error::InvalidInput(format!(
                    "arrow {} -> {} given twice",
                    shape.name(a.from),
                    shape.name(a.to)
                )));
            }
        }
        let covers = shape.covers();
        let mut up: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(a, b) in &covers {
            if !given.contains_key(&(a, b)) {
                return Err(Error::InvalidInput(format!(
                    "missing arrow {} -> {}",
                    shape.name(a),
                    shape.name(b)
                )));
            }
            up[a].push(b);
        }
        let mut maps: Vec<Vec<Option<Vec<usize>>>> = vec![vec![None; n]; n];
        // fill from the top of a linear extension down
        let order = shape.linear_extension();
        for &a in order.iter().rev() {
            maps[a][a] = Some((0..values[a].len()).collect());
            #[allow(clippy::needless_range_loop)]
            for b in 0..n {
                if a == b || !shape.leq(a, b) {
                    continue;
                }
                let mut result: Option<Vec<usize>> = None;
                for &m in &up[a] {
                    if !shape.leq(m, b) {
                        continue;
                    }
                    let first = &given[&(a, m)];
                    let rest = maps[m][b].as_ref().expect("computed above");
                    let comp: Vec<usize> = first.iter().map(|&x| rest[x]).collect();
                    match &result {
                        None => result = Some(comp),
                        Some(r) if *r != comp => {
                            return Err(Error::NotAFunctor(format!(
                                "paths {} -> {} disagree",
                                shape.name(a),
                                shape.name(b)
                            )))
                        }
                        _ => {}
                    }
                }
                let result = result.expect("a < b has a cover above a");
                if let Some(g) = given.get(&(a, b)) {
                    if *g != result {
                        return Err(Error::NotAFunctor(format!(
                            "arrow {} -> {} is not the composite",
                            shape.name(a),
                            shape.name(b)
                        )));
                    }
                }
                maps[a][b] = Some(result);
            }
        }
        Ok(SetDiagram { shape, values, maps })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, d: usize) -> &[String] {
        &self.values[d]
    }

    /// `G(a → b)`, if `a ≤ b`.
    pub fn arrow(&self, a: usize, b: usize) -> Option<&[usize]> {
        self.maps[a][b].as_deref()
    }

    #[inline]
    fn apply(&self, a: usize, b: usize, x: usize) -> usize {
        self.maps[a][b].as_ref().expect("a <= b")[x]
    }

    pub fn total_elements(&self) -> usize {
        self.values.iter().map(Vec::len).sum()
    }

    /// Arrows along covering relations, the generating data.
    pub fn generating_arrows(&self) -> Vec<SetArrow> {
        self.shape
            .covers()
            .into_iter()
            .map(|(a, b)| SetArrow {
                from: a,
                to: b,
                map: self.maps[a][b].clone().unwrap(),
            })
            .collect()
    }

    /// Every arrow is injective.
    pub fn all_arrows_mono(&self) -> bool {
        self.generating_arrows().iter().all(|a| {
            let mut seen = HashSet::new();
            a.map.iter().all(|&y| seen.insert(y))
        })
    }

    fn offsets(&self) -> Vec<usize> {
        let mut off = Vec::with_capacity(self.len() + 1);
        let mut acc = 0;
        for v in &self.values {
            off.push(acc);
            acc += v.len();
        }
        off.push(acc);
        off
    }
}

/// The colimit of a set-valued diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetColimit {
    /// Members `(object, element)` of each class, classes ordered by least member.
    pub classes: Vec<Vec<(usize, usize)>>,
    /// Class of each element of each value.
    pub legs: Vec<Vec<usize>>,
}

pub fn set_colim(g: &SetDiagram) -> SetColimit {
    let off = g.offsets();
    let mut uf = UnionFind::new(g.total_elements());
    for a in g.generating_arrows() {
        for (x, &y) in a.map.iter().enumerate() {
            uf.union(off[a.from] + x, off[a.to] + y);
        }
    }
    let (label, k) = uf.classes();
    let mut classes = vec![Vec::new(); k];
    let mut legs = Vec::with_capacity(g.len());
    for d in 0..g.len() {
        let mut leg = Vec::with_capacity(g.values[d].len());
        for x in 0..g.values[d].len() {
            let c = label[off[d] + x];
            classes[c].push((d, x));
            leg.push(c);
        }
        legs.push(leg);
    }
    SetColimit { classes, legs }
}

/// Whether `G(d) → colim G` is injective.
pub fn mono_into_colim(g: &SetDiagram, d: usize) -> bool {
    mono_into(&set_colim(g), d)
}

pub(crate) fn mono_into(c: &SetColimit, d: usize) -> bool {
    let mut seen = HashSet::new();
    c.legs[d].iter().all(|&k| seen.insert(k))
}

/// An instance of condition (1) for which no `e` exists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareWitness {
    pub d: usize,
    pub d1: usize,
    pub d2: usize,
    pub d3: usize,
    pub x: usize,
    pub x1: usize,
    pub x2: usize,
    pub x3: usize,
    pub y: usize,
}

/// A zigzag `d_0 ← d_1 → d_2 ← … → d_{2n+2}` with elements, violating condition (2).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Zigzag {
    pub steps: Vec<(usize, usize)>,
}

impl Zigzag {
    /// The `n` with `2n + 3` entries.
    pub fn n(&self) -> usize {
        (self.steps.len() - 3) / 2
    }

    /// Checks the shape and element relations.
    pub fn is_valid(&self, g: &SetDiagram) -> bool {
        let s = &self.steps;
        if s.len() < 3 || s.len().is_multiple_of(2) || s[0].0 != s[s.len() - 1].0 {
            return false;
        }
        (1..s.len()).step_by(2).all(|k| {
            let (b, xb) = s[k];
            [s[k - 1], s[k + 1]]
                .iter()
                .all(|&(t, xt)| g.shape.leq(b, t) && g.apply(b, t, xb) == xt)
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Square(SquareWitness),
    Zigzag(Zigzag),
}

/// Outcome of [`almost_filtered`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlmostFiltered {
    pub holds: bool,
    /// True when a violation exists but only with zigzags longer than the bound.
    pub conditional: bool,
    pub witness: Option<Violation>,
    pub bound: usize,
}

/// Checks both conditions of the almost-filtered property.
///
/// Condition (1): for `d_1 ≤ d, d_2` and `d_3 ≤ d_2, d` with `x_1, x_3`
/// meeting in `G(d_2)`, some `e` with `d_1, d_3 ≤ e ≤ d, d_2` must identify
/// `x_1` and `x_3`.
///
/// Condition (2): every zigzag with `n ≥ 2` must have its interior elements
/// `x_1 … x_{2n+1}` all hit from below by elements `x'_i ∈ G(d'_i)` with
/// `d'_i ≤ d_i, e` sharing one image in `G(e)`. Zigzags may backtrack and
/// repeat, so the interiors that occur are exactly the subsets of connected
/// components of the element graph; the check is done per component.
///
/// `bound` limits the zigzag length `n` considered in condition (2); a bound
/// of at least the total number of elements is treated as unbounded.
pub fn almost_filtered(g: &SetDiagram, bound: usize) -> Result<AlmostFiltered> {
    if bound < 1 {
        return Err(Error::BoundTooSmall);
    }
    if let Some(w) = check_square(g) {
        return Ok(AlmostFiltered {
            holds: false,
            conditional: false,
            witness: Some(Violation::Square(w)),
            bound,
        });
    }
    let unbounded = bound >= g.total_elements();
    match check_zigzags(g, bound, unbounded) {
        ZigzagCheck::Holds => Ok(AlmostFiltered {
            holds: true,
            conditional: false,
            witness: None,
            bound,
        }),
        ZigzagCheck::Fails(z) => Ok(AlmostFiltered {
            holds: false,
            conditional: false,
            witness: Some(Violation::Zigzag(z)),
            bound,
        }),
        ZigzagCheck::BeyondBound => Ok(AlmostFiltered {
            holds: true,
            conditional: true,
            witness: None,
            bound,
        }),
    }
}

fn check_square(g: &SetDiagram) -> Option<SquareWitness> {
    let n = g.len();
    let sh = &g.shape;
    for d in 0..n {
        for d1 in 0..n {
            if !sh.leq(d1, d) {
                continue;
            }
            for d2 in 0..n {
                if !sh.leq(d1, d2) {
                    continue;
                }
                for d3 in 0..n {
                    if !sh.leq(d3, d2) || !sh.leq(d3, d) {
                        continue;
                    }
                    let es: Vec<usize> = (0..n)
                        .filter(|&e| sh.leq(d1, e) && sh.leq(d3, e) && sh.leq(e, d) && sh.leq(e, d2))
                        .collect();
                    let mut pre3: HashMap<usize, Vec<usize>> = HashMap::new();
                    for x3 in 0..g.values[d3].len() {
                        pre3.entry(g.apply(d3, d2, x3)).or_default().push(x3);
                    }
                    for x1 in 0..g.values[d1].len() {
                        let x2 = g.apply(d1, d2, x1);
                        let Some(x3s) = pre3.get(&x2) else { continue };
                        for &x3 in x3s {
                            let closed = es.iter().any(|&e| g.apply(d1, e, x1) == g.apply(d3, e, x3));
                            if !closed {
                                return Some(SquareWitness {
                                    d,
                                    d1,
                                    d2,
                                    d3,
                                    x: g.apply(d1, d, x1),
                                    x1,
                                    x2,
                                    x3,
                                    y: g.apply(d3, d, x3),
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    None
}

enum ZigzagCheck {
    Holds,
    Fails(Zigzag),
    BeyondBound,
}

/// Element graph: nodes are `(object, element)`, edges join `x` to `G(a → b)(x)`
/// for every covering arrow.
struct ElementGraph {
    nodes: Vec<(usize, usize)>,
    off: Vec<usize>,
    adj: Vec<Vec<usize>>,
    component: Vec<usize>,
    components: Vec<Vec<usize>>,
}

impl ElementGraph {
    fn new(g: &SetDiagram) -> Self {
        let off = g.offsets();
        let nodes: Vec<(usize, usize)> = (0..g.len())
            .flat_map(|d| (0..g.values[d].len()).map(move |x| (d, x)))
            .collect();
        let mut adj = vec![Vec::new(); nodes.len()];
        let mut uf = UnionFind::new(nodes.len());
        for a in g.generating_arrows() {
            for (x, &y) in a.map.iter().enumerate() {
                let (u, v) = (off[a.from] + x, off[a.to] + y);
                adj[u].push(v);
                adj[v].push(u);
                uf.union(u, v);
            }
        }
        let (component, k) = uf.classes();
        let mut components = vec![Vec::new(); k];
        for (u, &c) in component.iter().enumerate() {
            components[c].push(u);
        }
        ElementGraph {
            nodes,
            off,
            adj,
            component,
            components,
        }
    }

    fn node(&self, d: usize, x: usize) -> usize {
        self.off[d] + x
    }
}

fn check_zigzags(g: &SetDiagram, bound: usize, unbounded: bool) -> ZigzagCheck {
    let eg = ElementGraph::new(g);
    let mut beyond = false;
    for comp in &eg.components {
        let covers = |set: &[usize]| covering_apex(g, &eg, set).is_some();
        if covers(comp) {
            continue;
        }
        let full = zigzag_through(g, &eg, comp);
        if unbounded || full.n() <= bound {
            return ZigzagCheck::Fails(full);
        }
        // look for a shorter violation along shortest paths between pairs
        let mut found = None;
        'pairs: for (i, &u) in comp.iter().enumerate() {
            let paths = bfs_paths(&eg, u, comp);
            for &v in &comp[i + 1..] {
                let path = &paths[&v];
                if covers(path) {
                    continue;
                }
                let mut walk = path.clone();
                walk.extend(path.iter().rev().skip(1));
                let z = alternate(g, &eg, &walk);
                if z.n() <= bound {
                    found = Some(z);
                    break 'pairs;
                }
            }
        }
        match found {
            Some(z) => return ZigzagCheck::Fails(z),
            None => beyond = true,
        }
    }
    if beyond {
        ZigzagCheck::BeyondBound
    } else {
        ZigzagCheck::Holds
    }
}

/// Some `(e, z)` whose set `S(e, z)` contains every node of `set`, where
/// `S(e, z)` collects the images `G(d' → c)(x')` of all `x' ∈ G(d')`,
/// `d' ≤ e`, with `G(d' → e)(x') = z`.
fn covering_apex(g: &SetDiagram, eg: &ElementGraph, set: &[usize]) -> Option<(usize, usize)> {
    let comp = eg.component[set[0]];
    let members = &eg.components[comp];
    let need: HashSet<usize> = set.iter().copied().collect();
    let n = g.len();
    for &apex in members {
        let (e, z) = eg.nodes[apex];
        let mut reached: HashSet<usize> = HashSet::new();
        for &src in members {
            let (dp, xp) = eg.nodes[src];
            if !g.shape.leq(dp, e) || g.apply(dp, e, xp) != z {
                continue;
            }
            for c in 0..n {
                if g.shape.leq(dp, c) {
                    reached.insert(eg.node(c, g.apply(dp, c, xp)));
                }
            }
        }
        if need.iter().all(|u| reached.contains(u)) {
            return Some((e, z));
        }
    }
    None
}

fn bfs_paths(eg: &ElementGraph, start: usize, comp: &[usize]) -> HashMap<usize, Vec<usize>> {
    let mut prev: HashMap<usize, usize> = HashMap::new();
    let mut queue = VecDeque::from([start]);
    prev.insert(start, start);
    while let Some(u) = queue.pop_front() {
        for &v in &eg.adj[u] {
            if let std::collections::hash_map::Entry::Vacant(e) = prev.entry(v) {
                e.insert(u);
                queue.push_back(v);
            }
        }
    }
    comp.iter()
        .map(|&v| {
            let mut path = vec![v];
            let mut cur = v;
            while cur != start {
                cur = prev[&cur];
                path.push(cur);
            }
            path.reverse();
            (v, path)
        })
        .collect()
}

/// A closed walk from the first node visiting all of `comp`, as a zigzag.
fn zigzag_through(g: &SetDiagram, eg: &ElementGraph, comp: &[usize]) -> Zigzag {
    let start = comp[0];
    let mut walk = vec![start];
    let mut seen = HashSet::from([start]);
    fn dfs(eg: &ElementGraph, u: usize, seen: &mut HashSet<usize>, walk: &mut Vec<usize>) {
        for &v in &eg.adj[u] {
            if seen.insert(v) {
                walk.push(v);
                dfs(eg, v, seen, walk);
                walk.push(u);
            }
        }
    }
    dfs(eg, start, &mut seen, &mut walk);
    if walk.len() == 1 {
        walk.push(start);
    }
    alternate(g, eg, &walk)
}

/// Turns a walk whose consecutive nodes are related by arrows into an
/// alternating zigzag, inserting identities where two steps go the same way.
fn alternate(g: &SetDiagram, eg: &ElementGraph, walk: &[usize]) -> Zigzag {
    let mut steps = vec![eg.nodes[walk[0]]];
    for w in walk.windows(2) {
        let (u, v) = (eg.nodes[w[0]], eg.nodes[w[1]]);
        let want_bottom = steps.len() % 2 == 1;
        let v_below = g.shape.leq(v.0, u.0) && g.apply(v.0, u.0, v.1) == u.1;
        if want_bottom != v_below {
            steps.push(u);
        }
        steps.push(v);
    }
    if steps.len() % 2 == 0 {
        let last = *steps.last().unwrap();
        steps.push(last);
    }
    while steps.len() < 7 {
        let last = *steps.last().unwrap();
        steps.push(last);
        steps.push(last);
    }
    Zigzag { steps }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn remark_a3() -> SetDiagram {
        let shape = Arc::new(
            Poset::from_relations(&["a", "b", "c", "d"], &[("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")]).unwrap(),
        );
        let v = vec!["0".to_string(), "1".to_string()];
        let id = vec![0, 1];
        let swap = vec![1, 0];
        let arrows = vec![
            SetArrow {
                from: 0,
                to: 2,
                map: id.clone(),
            },
            SetArrow {
                from: 0,
                to: 3,
                map: id.clone(),
            },
            SetArrow {
                from: 1,
                to: 2,
                map: id,
            },
            SetArrow {
                from: 1,
                to: 3,
                map: swap,
            },
        ];
        SetDiagram::new(shape, vec![v; 4], arrows).unwrap()
    }

    #[test]
    fn remark_a3_collapses() {
        let g = remark_a3();
        let c = set_colim(&g);
        assert_eq!(c.classes.len(), 1);
        assert!((0..4).all(|d| !mono_into_colim(&g, d)));
        let r = almost_filtered(&g, 8).unwrap();
        assert!(!r.holds);
        assert_eq!(
            r.witness,
            Some(Violation::Square(SquareWitness {
                d: 2,
                d1: 0,
                d2: 3,
                d3: 1,
                x: 0,
                x1: 0,
                x2: 0,
                x3: 1,
                y: 1
            }))
        );
    }

    #[test]
    fn non_functor_rejected() {
        let shape = Arc::new(Poset::total_order(3));
        let v = vec![vec!["x".to_string(), "y".to_string()]; 3];
        let arrows = vec![
            SetArrow {
                from: 0,
                to: 1,
                map: vec![0, 1],
            },
            SetArrow {
                from: 1,
                to: 2,
                map: vec![0, 1],
            },
            SetArrow {
                from: 0,
                to: 2,
                map: vec![1, 0],
            },
        ];
        assert!(matches!(SetDiagram::new(shape, v, arrows), Err(Error::NotAFunctor(_))));
    }

    #[test]
    fn discrete_shape() {
        let shape = Arc::new(Poset::antichain(&["p", "q", "r"]).unwrap());
        let g = SetDiagram::new(shape, vec![vec!["*".into()]; 3], vec![]).unwrap();
        assert_eq!(set_colim(&g).classes.len(), 3);
        assert!(almost_filtered(&g, 1).unwrap().holds);
    }

    #[test]
    fn zigzag_witness_is_valid() {
        // V shape a <- b -> c with a non-injective arrow: the component of the
        // merged elements has no single apex
        let shape = Arc::new(Poset::from_relations(&["b", "a", "c"], &[("b", "a"), ("b", "c")]).unwrap());
        let g = SetDiagram::new(
            shape,
            vec![
                vec!["0".into(), "1".into()],
                vec!["0".into()],
                vec!["0".into(), "1".into()],
            ],
            vec![
                SetArrow {
                    from: 0,
                    to: 1,
                    map: vec![0, 0],
                },
                SetArrow {
                    from: 0,
                    to: 2,
                    map: vec![0, 1],
                },
            ],
        )
        .unwrap();
        let r = almost_filtered(&g, 100).unwrap();
        if let Some(Violation::Zigzag(z)) = &r.witness {
            assert!(z.is_valid(&g));
        }
    }
}
