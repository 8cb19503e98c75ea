mod common;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use princforge::construction::{
    assemble_k, assemble_l, pinned_gadget, ConstructionError, GadgetFixture, SearchConfig, FIXTURE,
};
use princforge::harness::{
    bundle_theorem1, bundle_theorem2, check_theorem1, check_theorem2, enumerate_small_posets, lattice_dot,
    random_instance, reverify_bundle, verify_theorem1, verify_theorem2, Bundle, GeneratorConfig, Outcome,
};
use princforge::order::{poset, IsotoneMap};
use princforge::{BoundedPoset, ElementId};

use common::*;

fn three_chain(x: &str) -> BoundedPoset {
    poset(&["0", x, "1"], &[("0", x), (x, "1")], "0", "1").unwrap()
}

fn map(p: &BoundedPoset, q: &BoundedPoset, pairs: &[(&str, &str)]) -> IsotoneMap {
    let a: BTreeMap<ElementId, ElementId> = pairs.iter().map(|&(x, y)| (x.into(), y.into())).collect();
    IsotoneMap::new(p.clone(), q.clone(), a).unwrap()
}

#[test]
fn two_chain_verifies() {
    let r = verify_theorem1(&BoundedPoset::chain(2), &pinned_gadget());
    assert_eq!(r.outcome, Outcome::Verified);
}

#[test]
fn three_chain_has_three_principal_congruences() {
    let r = verify_theorem1(&three_chain("p"), &pinned_gadget());
    assert!(r.verified(), "{r:?}");
    assert_eq!(r.stats["princ"], 3);
    let k = assemble_k(&three_chain("p"), &pinned_gadget()).unwrap();
    let oracle = partition_oracle(&k.lattice);
    let principals: std::collections::BTreeSet<Vec<usize>> = (0..k.lattice.len())
        .flat_map(|x| (x..k.lattice.len()).map(move |y| (x, y)))
        .map(|(x, y)| oracle_principal(&oracle, k.lattice.len(), x, y))
        .collect();
    assert_eq!(principals.len(), 3);
}

#[test]
fn diamond_has_five_congruences() {
    let p = diamond();
    let r = verify_theorem1(&p, &pinned_gadget());
    assert!(r.verified(), "{r:?}");
    assert_eq!(r.stats["con"], 5);
    let k = assemble_k(&p, &pinned_gadget()).unwrap();
    assert_eq!(partition_oracle(&k.lattice).len(), 5);
    assert!(r.check_named("oracle").is_some());
}

#[test]
fn chain_to_chain_verifies() {
    let (p, q) = (three_chain("p"), three_chain("q"));
    let r = verify_theorem2(&map(&p, &q, &[("0", "0"), ("p", "q"), ("1", "1")]), &pinned_gadget());
    assert!(r.verified(), "{r:?}");
}

#[test]
fn identity_map_gives_isomorphism() {
    for p in enumerate_small_posets(3) {
        let psi = IsotoneMap::identity(&p);
        let b = assemble_l(&psi, &pinned_gadget()).unwrap();
        assert!(b.ext.is_order_isomorphism(), "{p:?}");
        assert!(check_theorem2(&b).unwrap().verified());
    }
}

#[test]
fn non_separating_map_rejected_before_construction() {
    let (p, q) = (three_chain("p"), three_chain("q"));
    let psi = map(&p, &q, &[("0", "0"), ("p", "0"), ("1", "1")]);
    match assemble_l(&psi, &pinned_gadget()) {
        Err(e @ ConstructionError::InvalidMap(_)) => assert!(e.is_input_error()),
        other => panic!("expected a rejected map, got {:?}", other.map(|b| b.lattice.len())),
    }
    let r = verify_theorem2(&psi, &pinned_gadget());
    assert_eq!(r.outcome, Outcome::Error);
    assert!(r.counterexample.is_some());
}

#[test]
fn map_onto_top_rejected() {
    let (p, q) = (three_chain("p"), three_chain("q"));
    let psi = map(&p, &q, &[("0", "0"), ("p", "1"), ("1", "1")]);
    assert!(matches!(
        assemble_l(&psi, &pinned_gadget()),
        Err(ConstructionError::UnsupportedTarget { .. })
    ));
}

#[test]
fn colliding_ids_are_renamed() {
    let p = three_chain("p");
    let psi = map(&p, &p, &[("0", "0"), ("p", "p"), ("1", "1")]);
    let b = assemble_l(&psi, &pinned_gadget()).unwrap();
    assert_eq!(b.interval(true, &"p".into()).unwrap().0, ElementId::from("a(p.P)"));
    assert_eq!(b.interval(false, &"p".into()).unwrap().0, ElementId::from("a(p.Q)"));
    assert!(check_theorem2(&b).unwrap().verified());
}

#[test]
fn bundles_reverify_from_json() {
    let template = pinned_gadget();
    let k = assemble_k(&diamond(), &template).unwrap();
    let r1 = check_theorem1(&k).unwrap();
    let text = bundle_theorem1(&k, &r1).to_json();
    let back = Bundle::parse(&text).unwrap();
    let again = reverify_bundle(&back).unwrap();
    assert!(again.matches_stored, "{:?}", again.mismatches);
    assert_eq!(again.report, r1);

    let (p, q) = (three_chain("p"), diamond());
    let l = assemble_l(&map(&p, &q, &[("0", "0"), ("p", "q"), ("1", "1")]), &template).unwrap();
    let r2 = check_theorem2(&l).unwrap();
    let back = Bundle::parse(&bundle_theorem2(&l, &r2).to_json()).unwrap();
    let again = reverify_bundle(&back).unwrap();
    assert!(again.matches_stored, "{:?}", again.mismatches);
}

#[test]
fn tampered_bundle_is_noticed() {
    let k = assemble_k(&diamond(), &pinned_gadget()).unwrap();
    let r = check_theorem1(&k).unwrap();
    let mut b = bundle_theorem1(&k, &r);
    b.report.stats.insert("k".into(), 1);
    let again = reverify_bundle(&b).unwrap();
    assert!(!again.matches_stored);
}

#[test]
fn dot_edges_match_stored_covers() {
    let k = assemble_k(&diamond(), &pinned_gadget()).unwrap();
    let r = check_theorem1(&k).unwrap();
    let b = bundle_theorem1(&k, &r);
    let dot = lattice_dot(&k.lattice, &k.labels);
    let mut edges: Vec<(String, String)> = dot
        .lines()
        .filter_map(|l| l.trim().strip_suffix(';')?.split_once(" -> "))
        .map(|(a, b)| (a.trim_matches('"').to_owned(), b.trim_matches('"').to_owned()))
        .collect();
    let mut covers: Vec<(String, String)> =
        b.lattice.covers.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
    edges.sort();
    covers.sort();
    assert_eq!(edges, covers);
}

#[test]
fn generation_is_fast_and_reproducible() {
    let cfg = GeneratorConfig::default();
    let start = Instant::now();
    let mut rng = cfg.rng();
    let first: Vec<IsotoneMap> = (0..100).map(|_| random_instance(&mut rng, &cfg)).collect();
    assert!(start.elapsed() < Duration::from_secs(1));
    let mut rng = cfg.rng();
    let second: Vec<IsotoneMap> = (0..100).map(|_| random_instance(&mut rng, &cfg)).collect();
    assert_eq!(first, second);
}

#[test]
fn enumeration_examples() {
    assert_eq!(enumerate_small_posets(0), vec![BoundedPoset::chain(2)]);
    let one = enumerate_small_posets(1);
    assert_eq!(one.len(), 2);
    let two = enumerate_small_posets(2);
    let mut shapes: Vec<(usize, usize)> = two.iter().map(|p| (p.len(), p.covers().len())).collect();
    shapes.sort();
    // 2-chain, 3-chain, 4-chain, diamond
    assert_eq!(shapes, vec![(2, 1), (3, 2), (4, 3), (4, 4)]);
    assert_eq!(two, enumerate_small_posets(2));
}

#[test]
fn pinned_fixture_is_the_first_frame_compatible_passer() {
    let stored = GadgetFixture::parse(FIXTURE).unwrap();
    let cfg = SearchConfig {
        max_aux: 5,
        frame_compatible: true,
        ..SearchConfig::default()
    };
    assert_eq!(stored.search, cfg);
    let fresh = GadgetFixture::from_search(&cfg).unwrap();
    assert_eq!(fresh.to_json(), FIXTURE);
}
