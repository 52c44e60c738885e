//! Seeded random instances for property suites and the CLI.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::diagrams::{attach_cell, attaching_maps, cell_complex, CellSpec, Diagram};
use crate::error::Result;
use crate::filtered::FilteredSSet;
use crate::poset::{Chain, Poset, PosetMap};
use crate::setdiagram::{SetArrow, SetDiagram};
use crate::simplicial::{Budget, GenRef, SSet, SSetBuilder, SimplexTerm};
use crate::union_find::UnionFind;

pub const DEFAULT_SEED: u64 = 0x5eed;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A poset on `p0 … p{n-1}` where each pair `i < j` is related with
/// probability `density` (before transitive closure).
pub fn random_poset(n: usize, density: f64, rng: &mut impl Rng) -> Poset {
    let names: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
    let mut rel = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                rel.push((names[i].clone(), names[j].clone()));
            }
        }
    }
    Poset::from_relations(&names, &rel).expect("relations follow the index order")
}

/// A set-valued functor with injective cover maps, or `None` when the forced
/// identifications break injectivity.
///
/// Objects are filled along a linear extension: a value starts as the
/// disjoint union of the values below it along covers, composites through
/// different covers are identified, a few more identifications are tried, and
/// fresh elements are added.
pub fn random_set_diagram(shape: Arc<Poset>, rng: &mut impl Rng) -> Option<SetDiagram> {
    let n = shape.len();
    let covers = shape.covers();
    let order = shape.linear_extension();
    let mut sizes = vec![0usize; n];
    // maps[c][b]: G(c → b) for c ≤ b, filled as objects are built
    let mut maps: Vec<Vec<Option<Vec<usize>>>> = vec![vec![None; n]; n];
    let mut arrows = Vec::new();
    for &b in &order {
        let below: Vec<usize> = covers.iter().filter(|&&(_, t)| t == b).map(|&(a, _)| a).collect();
        let offsets: Vec<usize> = below
            .iter()
            .scan(0, |acc, &a| {
                let o = *acc;
                *acc += sizes[a];
                Some(o)
            })
            .collect();
        let total: usize = below.iter().map(|&a| sizes[a]).sum();
        let mut uf = UnionFind::new(total);
        // composites c → a_i → b must agree
        for c in 0..n {
            let through: Vec<usize> = (0..below.len()).filter(|&i| maps[c][below[i]].is_some()).collect();
            for x in 0..sizes[c] {
                let mut first = None;
                for &i in &through {
                    let y = offsets[i] + maps[c][below[i]].as_ref().unwrap()[x];
                    match first {
                        None => first = Some(y),
                        Some(f) => {
                            uf.union(f, y);
                        }
                    }
                }
            }
        }
        let mono = |uf: &mut UnionFind| {
            below.iter().enumerate().all(|(i, &a)| {
                let mut seen = std::collections::HashSet::new();
                (0..sizes[a]).all(|x| seen.insert(uf.find(offsets[i] + x)))
            })
        };
        if !mono(&mut uf) {
            return None;
        }
        for _ in 0..rng.gen_range(0..=2) {
            if total < 2 {
                break;
            }
            let (x, y) = (rng.gen_range(0..total), rng.gen_range(0..total));
            let mut trial = uf.clone();
            trial.union(x, y);
            if mono(&mut trial) {
                uf = trial;
            }
        }
        let (labels, classes) = uf.classes();
        let fresh = rng.gen_range(usize::from(classes == 0)..=2);
        sizes[b] = classes + fresh;
        for (i, &a) in below.iter().enumerate() {
            let m: Vec<usize> = (0..sizes[a]).map(|x| labels[offsets[i] + x]).collect();
            arrows.push(SetArrow { from: a, to: b, map: m });
        }
        maps[b][b] = Some((0..sizes[b]).collect());
        #[allow(clippy::needless_range_loop)]
        for c in 0..n {
            if c == b || !shape.leq(c, b) {
                continue;
            }
            let i = (0..below.len())
                .find(|&i| maps[c][below[i]].is_some())
                .expect("c below some cover");
            let via = maps[c][below[i]].as_ref().unwrap();
            maps[c][b] = Some(via.iter().map(|&x| labels[offsets[i] + x]).collect());
        }
    }
    let values = (0..n)
        .map(|o| (0..sizes[o]).map(|x| format!("x{x}")).collect())
        .collect();
    SetDiagram::new(shape, values, arrows).ok()
}

/// A random simplicial set with at most `max_gens` generators in degrees ≤ 2.
pub fn random_complex(max_gens: usize, rng: &mut impl Rng) -> SSet {
    let mut b = SSetBuilder::new();
    let nv = rng.gen_range(1..=max_gens.clamp(1, 8));
    let vs: Vec<GenRef> = (0..nv).map(|i| b.add_vertex(format!("v{i}")).unwrap()).collect();
    let mut left = max_gens.saturating_sub(nv);
    let mut edges: Vec<(usize, usize, GenRef)> = Vec::new();
    let ne = rng.gen_range(0..=left.min(2 * nv));
    for k in 0..ne {
        let (s, t) = (rng.gen_range(0..nv), rng.gen_range(0..nv));
        let e = b
            .add_simplex(
                format!("e{k}"),
                vec![SimplexTerm::generator(vs[t]), SimplexTerm::generator(vs[s])],
            )
            .unwrap();
        edges.push((s, t, e));
    }
    left -= ne;
    let mut k = 0;
    for _ in 0..left {
        // a triangle needs edges v0→v1, v1→v2, v0→v2
        let Some(&(a, bb, e01)) = edges.choose(rng) else {
            break;
        };
        let next: Vec<&(usize, usize, GenRef)> = edges.iter().filter(|e| e.0 == bb).collect();
        let Some(&&(_, c, e12)) = next.choose(rng) else {
            continue;
        };
        let Some(&(_, _, e02)) = edges.iter().find(|e| e.0 == a && e.1 == c) else {
            continue;
        };
        b.add_simplex(
            format!("t{k}"),
            vec![
                SimplexTerm::generator(e12),
                SimplexTerm::generator(e02),
                SimplexTerm::generator(e01),
            ],
        )
        .unwrap();
        k += 1;
    }
    b.build().expect("faces agree by construction")
}

/// A random filtered simplicial set of dimension ≤ 2 over `base`, with
/// `nv` vertices and edges only between comparable labels.
pub fn random_fss(base: Arc<Poset>, nv: usize, edges: usize, rng: &mut impl Rng) -> FilteredSSet {
    let mut b = SSetBuilder::new();
    let labels: Vec<usize> = (0..nv).map(|_| rng.gen_range(0..base.len())).collect();
    let vs: Vec<GenRef> = (0..nv).map(|i| b.add_vertex(format!("v{i}")).unwrap()).collect();
    let mut es: Vec<(usize, usize, GenRef)> = Vec::new();
    for k in 0..edges {
        let (s, t) = (rng.gen_range(0..nv), rng.gen_range(0..nv));
        let (s, t) = if base.leq(labels[s], labels[t]) { (s, t) } else { (t, s) };
        if !base.leq(labels[s], labels[t]) {
            continue;
        }
        let e = b
            .add_simplex(
                format!("e{k}"),
                vec![SimplexTerm::generator(vs[t]), SimplexTerm::generator(vs[s])],
            )
            .unwrap();
        es.push((s, t, e));
    }
    let mut k = 0;
    for &(a, m, e01) in &es {
        for &(m2, c, e12) in &es {
            if m2 != m || !rng.gen_bool(0.3) {
                continue;
            }
            if let Some(&(_, _, e02)) = es.iter().find(|e| e.0 == a && e.1 == c) {
                b.add_simplex(
                    format!("t{k}"),
                    vec![
                        SimplexTerm::generator(e12),
                        SimplexTerm::generator(e02),
                        SimplexTerm::generator(e01),
                    ],
                )
                .unwrap();
                k += 1;
            }
        }
    }
    let body = Arc::new(b.build().expect("faces agree by construction"));
    FilteredSSet::from_vertex_labels(base, body, labels).expect("edges respect the order")
}

/// An order-preserving map `p → q`, if the greedy choice along a linear
/// extension succeeds.
pub fn random_poset_map(p: Arc<Poset>, q: Arc<Poset>, rng: &mut impl Rng) -> Option<PosetMap> {
    let mut img = vec![usize::MAX; p.len()];
    for x in p.linear_extension() {
        let lows: Vec<usize> = (0..p.len())
            .filter(|&y| y != x && p.leq(y, x))
            .map(|y| img[y])
            .collect();
        let options: Vec<usize> = (0..q.len()).filter(|&t| lows.iter().all(|&l| q.leq(l, t))).collect();
        img[x] = *options.choose(rng)?;
    }
    PosetMap::new(p, q, img).ok()
}

/// A weakly increasing tuple of length `n + 1` over `{0 < … < m-1}` with at
/// least one repeated entry.
pub fn random_repeating_tuple(n: usize, m: usize, rng: &mut impl Rng) -> Vec<usize> {
    assert!(n >= 1 && m >= 1);
    loop {
        let mut t: Vec<usize> = (0..=n).map(|_| rng.gen_range(0..m)).collect();
        t.sort_unstable();
        if t.windows(2).any(|w| w[0] == w[1]) {
            return t;
        }
    }
}

/// A cell complex diagram with up to `max_cells` cells of dimension
/// ≤ `max_dim`, attached along randomly chosen maps.
pub fn random_cell_complex(
    base: Arc<Poset>,
    max_cells: usize,
    max_dim: usize,
    rng: &mut impl Rng,
) -> Result<(Diagram, Vec<CellSpec>)> {
    let chains = base.chains();
    let mut current = cell_complex(base.clone(), &[])?;
    let mut specs = Vec::new();
    let cells = rng.gen_range(1..=max_cells);
    let mut k = 0;
    for _ in 0..cells * 4 {
        if k == cells {
            break;
        }
        let phi: Chain = chains.choose(rng).expect("nonempty poset").clone();
        let n = rng.gen_range(0..=max_dim);
        let options = attaching_maps(&current, n, &phi, Budget::default())?;
        let Some(attach) = options.choose(rng) else {
            continue;
        };
        let spec = CellSpec {
            n,
            phi,
            attach: attach.clone(),
        };
        current = attach_cell(&current, k, &spec)?;
        specs.push(spec);
        k += 1;
    }
    Ok((current, specs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_diagrams_are_functors_with_mono_arrows() {
        let mut r = rng(3);
        let mut built = 0;
        for _ in 0..50 {
            let p = Arc::new(random_poset(5, 0.4, &mut r));
            if let Some(g) = random_set_diagram(p, &mut r) {
                assert!(g.all_arrows_mono());
                built += 1;
            }
        }
        assert!(built > 10);
    }

    #[test]
    fn complexes_respect_size() {
        let mut r = rng(5);
        for _ in 0..20 {
            let k = random_complex(30, &mut r);
            assert!(k.total_generators() <= 30);
        }
    }

    #[test]
    fn poset_maps_preserve_order() {
        let mut r = rng(9);
        let p = Arc::new(random_poset(3, 0.5, &mut r));
        let q = Arc::new(Poset::total_order(2));
        let a = random_poset_map(p, q, &mut r).unwrap();
        for (x, y) in a.source.strict_relations() {
            assert!(a.target.leq(a.apply(x), a.apply(y)));
        }
    }
}
