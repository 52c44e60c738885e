use std::sync::Arc;

use strat_core::dot::{chains_dot, poset_dot};
use strat_core::filtered::{
    counit, count_filtered_maps, delta_phi, factorize, nerve_of, unit, FilteredMap, FilteredSSet, StratifiedMap,
};
use strat_core::homotopy::{global_pointing_exists, spi0, spi0_compare_stratified};
use strat_core::lifting::{
    find_lift, generating_sets, literal_vertex_map, pushforward_matches, retract_decompose, rlp_against,
    segment_embedding, GenCell, LiftingProblem, DEFAULT_SQUARE_CAP,
};
use strat_core::{Chain, Poset, PosetMap, SMap};

fn to_nerve(x: &Arc<FilteredSSet>, nerve: &Arc<FilteredSSet>) -> FilteredMap {
    FilteredMap::new(x.clone(), nerve.clone(), x.structure_map(nerve).unwrap()).unwrap()
}

/// `Λ²₁ ⊗ Δ^φ → Δ² ⊗ Δ^φ` against maps into the nerve: the identity of the
/// prism fills, the horn itself does not.
#[test]
fn horn_lift_over_every_chain() {
    let base = Arc::new(Poset::total_order(2));
    let nerve = Arc::new(nerve_of(base.clone()));
    for phi in base.chains() {
        let i = GenCell::horn(2, 1, phi.clone()).unwrap().inclusion(&base).unwrap();
        let (a, b) = (i.source.clone(), i.target.clone());

        let fills = LiftingProblem::new(i.clone(), to_nerve(&b, &nerve), i.clone(), to_nerve(&b, &nerve)).unwrap();
        let h = find_lift(&fills).unwrap().expect("the identity is a lift");
        assert_eq!(h.map.then(&fills.p.map).images(), fills.bottom.map.images());
        assert_eq!(i.map.then(&h.map).images(), i.map.images());

        let stuck = LiftingProblem::new(
            i.clone(),
            to_nerve(&a, &nerve),
            FilteredMap::identity(a.clone()),
            to_nerve(&b, &nerve),
        )
        .unwrap();
        assert!(find_lift(&stuck).unwrap().is_none(), "the horn has no 2-simplex");
    }
}

#[test]
fn maps_must_form_a_square() {
    let base = Arc::new(Poset::total_order(1));
    let i = GenCell::boundary(1, Chain(vec![0])).inclusion(&base).unwrap();
    let b = i.target.clone();
    let nerve = Arc::new(nerve_of(base));
    // bottom lands in B rather than in the nerve
    let r = LiftingProblem::new(
        i.clone(),
        to_nerve(&b, &nerve),
        i.clone(),
        FilteredMap::identity(b.clone()),
    );
    assert!(r.is_err());
}

#[test]
fn identity_has_rlp_against_both_families() {
    let base = Arc::new(Poset::total_order(2));
    let x = Arc::new(delta_phi(base.clone(), &[0, 1]).unwrap());
    let id = FilteredMap::identity(x);
    let (i, j) = generating_sets(&base, 2);
    assert!(rlp_against(&id, &i, DEFAULT_SQUARE_CAP).unwrap().passed());
    assert!(rlp_against(&id, &j, DEFAULT_SQUARE_CAP).unwrap().passed());
}

#[test]
fn nerve_is_a_fibrant_target_for_horns() {
    let base = Arc::new(Poset::total_order(2));
    let nerve = Arc::new(nerve_of(base.clone()));
    let (_, j) = generating_sets(&base, 2);
    let x = Arc::new(delta_phi(base.clone(), &[0, 1]).unwrap());
    let p = to_nerve(&x, &nerve);
    assert!(rlp_against(&p, &j, DEFAULT_SQUARE_CAP).unwrap().passed());
}

#[test]
fn retract_uses_the_clamp() {
    let base = Arc::new(Poset::total_order(2));
    let r = retract_decompose(&base, &[0, 0, 1]).unwrap();
    assert!(r.composite_is_identity());
    assert_eq!(r.phibar, Chain(vec![0, 1]));
    // the unclamped formula sends vertex 2 of block 0 back to 0, below vertex 1
    let blocks = [(0, 1), (2, 2)];
    let literal: Vec<usize> = (0..3).map(|v| literal_vertex_map(&blocks, 0, v)).collect();
    assert!(literal.windows(2).any(|w| w[0] > w[1]));
}

#[test]
fn retract_rejects_non_monotone_tuples() {
    let base = Arc::new(Poset::total_order(2));
    assert!(retract_decompose(&base, &[1, 0]).is_err());
}

#[test]
fn cells_push_forward_along_segments() {
    let alpha = segment_embedding(2, 5, 2).unwrap();
    for phi in alpha.source.chains() {
        for n in 0..=2 {
            assert!(pushforward_matches(&GenCell::boundary(n, phi.clone()), &alpha).unwrap());
            if n > 0 {
                assert!(pushforward_matches(&GenCell::horn(n, 0, phi.clone()).unwrap(), &alpha).unwrap());
            }
        }
    }
}

#[test]
fn unit_and_counit_are_isomorphisms_for_an_isomorphism() {
    let p = Arc::new(Poset::total_order(2));
    let alpha = PosetMap::identity(p.clone());
    let x = Arc::new(delta_phi(p.clone(), &[0, 0, 1]).unwrap());
    let (eta, _) = unit(&alpha, &x).unwrap();
    let (eps, _) = counit(&alpha, &x).unwrap();
    assert!(eta.map.is_isomorphism());
    assert!(eps.map.is_isomorphism());
}

#[test]
fn stratified_comparison_along_a_relabelling() {
    let p = Arc::new(Poset::from_relations(&["a", "b"], &[("a", "b")]).unwrap());
    let q = Arc::new(Poset::from_relations(&["u", "v"], &[("u", "v")]).unwrap());
    let alpha = PosetMap::new(p.clone(), q.clone(), vec![0, 1]).unwrap();
    let x = Arc::new(delta_phi(p, &[0, 1]).unwrap());
    let y = Arc::new(delta_phi(q, &[0, 1]).unwrap());
    let f = StratifiedMap::new(x.clone(), y.clone(), alpha, SMap::identity(x.body.clone())).unwrap();
    let fac = factorize(&f).unwrap();
    assert!(fac.left.map.is_isomorphism());
    assert!(spi0_compare_stratified(&f).unwrap().isomorphism);
}

#[test]
fn simplex_is_globally_pointed_over_its_chain() {
    let base = Arc::new(Poset::total_order(3));
    let x = Arc::new(delta_phi(base.clone(), &[0, 1, 2]).unwrap());
    assert!(global_pointing_exists(&x).unwrap().is_some());
    let s = spi0(&x).unwrap();
    assert!(s.is_constant_point());
    // one filtered map Δ^φ → Δ^{012} for each chain φ
    for phi in base.chains() {
        let d = delta_phi(base.clone(), phi.vertices()).unwrap();
        assert_eq!(count_filtered_maps(&d, &x).unwrap(), 1);
    }
}

#[test]
fn dot_examples() {
    let two = Poset::total_order(2);
    let d = poset_dot(&two);
    assert_eq!(d.lines().filter(|l| l.contains("->")).count(), 1);
    assert_eq!(d.lines().filter(|l| l.ends_with(';') && !l.contains("->")).count(), 2);
    let r = chains_dot(&two);
    assert_eq!(r.lines().filter(|l| l.ends_with(';') && !l.contains("->")).count(), 3);
    let empty = Poset::antichain::<&str>(&[]).unwrap();
    assert!(!poset_dot(&empty).contains("->"));
}
