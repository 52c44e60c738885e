use std::collections::{BTreeSet, HashMap, VecDeque};
use std::sync::Arc;

use proptest::prelude::*;
use strat_core::filtered::FilteredSSet;
use strat_core::gen;
use strat_core::homotopy::{mapping_space, spi0};
use strat_core::json::{fss_from_json, fss_to_json, set_diagram_from_json, set_diagram_to_json, FssJson};
use strat_core::numeric::{canonicalize, lemma217_homotopy, phi_p, random_interior, random_subchain, Scalar};
use strat_core::setdiagram::{set_colim, SetDiagram};
use strat_core::{Chain, Poset, SSet, SimplexTerm};

fn complexes(seed: u64) -> Vec<SSet> {
    let mut rng = gen::rng(seed);
    vec![
        SSet::standard(3),
        SSet::horn(3, 1).unwrap(),
        gen::random_complex(14, &mut rng),
    ]
}

fn simplices_upto(x: &SSet, max: usize) -> Vec<SimplexTerm> {
    (0..=max).flat_map(|n| x.simplices(n)).collect()
}

/// Element classes of a set diagram's colimit, computed by BFS.
fn colim_oracle(g: &SetDiagram) -> BTreeSet<BTreeSet<(usize, usize)>> {
    let mut adj: HashMap<(usize, usize), Vec<(usize, usize)>> = HashMap::new();
    for a in g.generating_arrows() {
        for (x, &y) in a.map.iter().enumerate() {
            adj.entry((a.from, x)).or_default().push((a.to, y));
            adj.entry((a.to, y)).or_default().push((a.from, x));
        }
    }
    let mut seen = BTreeSet::new();
    let mut out = BTreeSet::new();
    for d in 0..g.len() {
        for x in 0..g.value(d).len() {
            if seen.contains(&(d, x)) {
                continue;
            }
            let mut class = BTreeSet::from([(d, x)]);
            let mut queue = VecDeque::from([(d, x)]);
            seen.insert((d, x));
            while let Some(v) = queue.pop_front() {
                for &w in adj.get(&v).into_iter().flatten() {
                    if seen.insert(w) {
                        class.insert(w);
                        queue.push_back(w);
                    }
                }
            }
            out.insert(class);
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn face_face_identity(seed in any::<u64>()) {
        for x in complexes(seed) {
            for t in simplices_upto(&x, 3).into_iter().filter(|t| t.degree() >= 2) {
                let n = t.degree();
                for j in 1..=n {
                    for i in 0..j {
                        let a = x.face(&x.face(&t, j).unwrap(), i).unwrap();
                        let b = x.face(&x.face(&t, i).unwrap(), j - 1).unwrap();
                        prop_assert_eq!(a, b);
                    }
                }
            }
        }
    }

    #[test]
    fn degeneracy_identities(seed in any::<u64>()) {
        for x in complexes(seed) {
            for t in simplices_upto(&x, 2) {
                let n = t.degree();
                for j in 0..=n {
                    let sj = x.degeneracy(&t, j).unwrap();
                    for i in 0..=j {
                        let a = x.degeneracy(&sj, i).unwrap();
                        let b = x.degeneracy(&x.degeneracy(&t, i).unwrap(), j + 1).unwrap();
                        prop_assert_eq!(a, b);
                    }
                    prop_assert_eq!(x.face(&sj, j).unwrap(), t.clone());
                    prop_assert_eq!(x.face(&sj, j + 1).unwrap(), t.clone());
                    for i in 0..=n + 1 {
                        if i < j {
                            let a = x.face(&sj, i).unwrap();
                            let b = x.degeneracy(&x.face(&t, i).unwrap(), j - 1).unwrap();
                            prop_assert_eq!(a, b);
                        } else if i > j + 1 {
                            let a = x.face(&sj, i).unwrap();
                            let b = x.degeneracy(&x.face(&t, i - 1).unwrap(), j).unwrap();
                            prop_assert_eq!(a, b);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn normal_form_is_idempotent(seed in any::<u64>()) {
        for x in complexes(seed) {
            for t in simplices_upto(&x, 3) {
                let again = SimplexTerm::from_surjection(t.gen, t.surjection().to_vec()).unwrap();
                prop_assert_eq!(&again, &t);
                let rebuilt = SimplexTerm::from_word(t.gen, &t.word()).unwrap();
                prop_assert_eq!(&rebuilt, &t);
                prop_assert_eq!(t.is_degenerate(), t.degree() != t.gen.dim());
            }
        }
    }

    #[test]
    fn chains_are_strict_and_inclusions_complete(seed in any::<u64>(), n in 1usize..6) {
        let mut rng = gen::rng(seed);
        let p = gen::random_poset(n, 0.5, &mut rng);
        let chains = p.chains();
        for c in &chains {
            prop_assert!(c.vertices().windows(2).all(|w| p.lt(w[0], w[1])));
        }
        let expected: usize = chains.iter().map(|c| (1usize << c.len()) - 1).sum();
        prop_assert_eq!(p.chain_inclusions().len(), expected);
    }

    #[test]
    fn set_colimit_matches_bfs(seed in any::<u64>(), n in 1usize..6) {
        let mut rng = gen::rng(seed);
        let shape = Arc::new(gen::random_poset(n, 0.5, &mut rng));
        if let Some(g) = gen::random_set_diagram(shape, &mut rng) {
            let c = set_colim(&g);
            let ours: BTreeSet<BTreeSet<(usize, usize)>> =
                c.classes.iter().map(|cl| cl.iter().copied().collect()).collect();
            prop_assert_eq!(ours, colim_oracle(&g));
        }
    }

    #[test]
    fn homotopy_stays_in_the_stratum(seed in any::<u64>(), s in 0.0f64..=1.0) {
        let mut rng = gen::rng(seed);
        let psi = Chain(vec![0, 1, 2, 3]);
        let x = random_interior::<f64>(&random_subchain(&psi, None, &mut rng), &mut rng);
        let targets = random_subchain(&psi, Some(phi_p(&x)), &mut rng);
        let y = lemma217_homotopy(&psi, &targets, &x, s).unwrap();
        prop_assert!((y.sum() - 1.0).abs() <= f64::sum_tolerance());
        prop_assert_eq!(phi_p(&y), phi_p(&x));
        let at0 = lemma217_homotopy(&psi, &targets, &x, 0.0).unwrap();
        prop_assert_eq!(at0.carrier(), x.carrier());
        for (a, b) in at0.coords().iter().zip(x.coords()) {
            prop_assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn homotopy_in_single_precision(seed in any::<u64>(), s in 0.0f32..=1.0) {
        let mut rng = gen::rng(seed);
        let psi = Chain(vec![0, 1, 2]);
        let x = random_interior::<f32>(&random_subchain(&psi, None, &mut rng), &mut rng);
        let targets = random_subchain(&psi, Some(phi_p(&x)), &mut rng);
        let y = lemma217_homotopy(&psi, &targets, &x, s).unwrap();
        prop_assert!((y.sum() - 1.0).abs() <= f32::sum_tolerance());
        prop_assert_eq!(phi_p(&y), phi_p(&x));
    }

    #[test]
    fn canonicalize_is_idempotent(w in proptest::collection::vec(0.0f64..1.0, 1..5)) {
        let total: f64 = w.iter().sum();
        prop_assume!(total > 1e-6);
        let chain = Chain((0..w.len()).collect());
        let coords: Vec<f64> = w.iter().map(|x| x / total).collect();
        let once = canonicalize(&chain, &coords).unwrap();
        let twice = canonicalize(once.carrier(), once.coords()).unwrap();
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn json_round_trips(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let base = Arc::new(gen::random_poset(3, 0.6, &mut rng));
        let k = gen::random_fss(base.clone(), 4, 5, &mut rng);
        let j = fss_to_json(&k);
        let back: FssJson = serde_json::from_str(&serde_json::to_string(&j).unwrap()).unwrap();
        prop_assert_eq!(&back, &j);
        let k2 = fss_from_json(&back).unwrap();
        prop_assert_eq!(&*k2.body, &*k.body);
        prop_assert_eq!(k2.labels(), k.labels());
        if let Some(g) = gen::random_set_diagram(base, &mut rng) {
            let gj = set_diagram_to_json(&g);
            let g2 = set_diagram_from_json(&gj).unwrap();
            prop_assert_eq!(set_diagram_to_json(&g2), gj);
        }
    }

    #[test]
    fn mapping_space_is_simplicial(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let base = Arc::new(Poset::total_order(2));
        let k = Arc::new(gen::random_fss(base.clone(), 3, 4, &mut rng));
        for phi in base.chains() {
            let m = mapping_space(&k, &phi, 2).unwrap();
            for e in 0..m.count(2) {
                for j in 1..=2 {
                    for i in 0..j {
                        prop_assert_eq!(m.face(1, m.face(2, e, j), i), m.face(1, m.face(2, e, i), j - 1));
                    }
                }
            }
            for e in 0..m.count(1) {
                for j in 0..=1 {
                    let s = m.degeneracy(1, e, j);
                    prop_assert_eq!(m.face(2, s, j), e);
                    prop_assert_eq!(m.face(2, s, j + 1), e);
                }
            }
        }
    }

    #[test]
    fn spi0_restrictions_compose(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let base = Arc::new(Poset::total_order(3));
        let k: Arc<FilteredSSet> = Arc::new(gen::random_fss(base.clone(), 4, 6, &mut rng));
        let s = spi0(&k).unwrap();
        for (psi, phi) in base.chain_inclusions() {
            for (mu, psi2) in base.chain_inclusions() {
                if psi2 != psi {
                    continue;
                }
                let a = s.restriction(&phi, &psi).unwrap();
                let b = s.restriction(&psi, &mu).unwrap();
                let c = s.restriction(&phi, &mu).unwrap();
                let composed: Vec<usize> = a.iter().map(|&x| b[x]).collect();
                prop_assert_eq!(composed, c.to_vec());
            }
        }
    }
}
