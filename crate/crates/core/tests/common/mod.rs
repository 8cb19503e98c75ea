#![allow(dead_code)]

use std::collections::BTreeSet;

use princforge::lattice::lattice_from_order;
use princforge::order::poset;
use princforge::{BoundedPoset, Congruence, ElementId, FiniteLattice};
use rand::Rng;

/// Relabels a class vector by first appearance.
pub fn normalize(classes: &[usize]) -> Vec<usize> {
    let mut seen = Vec::new();
    classes
        .iter()
        .map(|c| match seen.iter().position(|s| s == c) {
            Some(i) => i,
            None => {
                seen.push(*c);
                seen.len() - 1
            }
        })
        .collect()
}

fn compatible(l: &FiniteLattice, labels: &[usize]) -> bool {
    let n = l.len();
    (0..n).all(|x| {
        (x + 1..n).filter(|&y| labels[x] == labels[y]).all(|y| {
            (0..n).all(|z| labels[l.join(x, z)] == labels[l.join(y, z)] && labels[l.meet(x, z)] == labels[l.meet(y, z)])
        })
    })
}

/// Every partition of the carrier (as restricted growth strings) that is
/// compatible with join and meet, checked pair by pair from the tables.
pub fn partition_oracle(l: &FiniteLattice) -> BTreeSet<Vec<usize>> {
    let n = l.len();
    let mut out = BTreeSet::new();
    let mut rgs = vec![0usize; n];
    loop {
        if compatible(l, &rgs) {
            out.insert(rgs.clone());
        }
        // next restricted growth string
        let mut i = n;
        loop {
            if i <= 1 {
                return out;
            }
            i -= 1;
            let max_prev = rgs[..i].iter().copied().max().unwrap_or(0);
            if rgs[i] <= max_prev {
                rgs[i] += 1;
                for r in &mut rgs[i + 1..] {
                    *r = 0;
                }
                break;
            }
        }
    }
}

/// The finest oracle partition relating `x` and `y`.
pub fn oracle_principal(oracle: &BTreeSet<Vec<usize>>, n: usize, x: usize, y: usize) -> Vec<usize> {
    let containing: Vec<&Vec<usize>> = oracle.iter().filter(|p| p[x] == p[y]).collect();
    // meet of partitions: related iff related in every member
    let mut classes: Vec<usize> = vec![usize::MAX; n];
    let mut next = 0;
    for a in 0..n {
        if classes[a] != usize::MAX {
            continue;
        }
        for b in a..n {
            if containing.iter().all(|p| p[a] == p[b]) {
                classes[b] = next;
            }
        }
        next += 1;
    }
    normalize(&classes)
}

pub fn key(c: &Congruence) -> Vec<usize> {
    normalize(c.classes())
}

/// A random lattice with at most `max` elements, by rejection.
pub fn random_lattice(rng: &mut impl Rng, max: usize) -> FiniteLattice {
    loop {
        let n = rng.gen_range(0..=max - 2);
        let ids: Vec<String> = (0..n).map(|k| format!("e{k}")).collect();
        let mut le: Vec<(String, String)> = Vec::new();
        for x in 0..n {
            le.push(("0".into(), ids[x].clone()));
            le.push((ids[x].clone(), "1".into()));
            for y in x + 1..n {
                if rng.gen_bool(0.4) {
                    le.push((ids[x].clone(), ids[y].clone()));
                }
            }
        }
        le.push(("0".into(), "1".into()));
        let mut names: Vec<&str> = ids.iter().map(String::as_str).collect();
        names.extend(["0", "1"]);
        let pairs: Vec<(&str, &str)> = le.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        let p = poset(&names, &pairs, "0", "1").expect("acyclic");
        if let Ok(l) = lattice_from_order(&p) {
            return l;
        }
    }
}

pub fn chain_lattice(n: usize) -> FiniteLattice {
    lattice_from_order(&BoundedPoset::chain(n)).unwrap()
}

pub fn diamond() -> BoundedPoset {
    poset(&["0", "p", "q", "1"], &[("0", "p"), ("0", "q"), ("p", "1"), ("q", "1")], "0", "1").unwrap()
}

pub fn n5() -> FiniteLattice {
    lattice_from_order(
        &poset(
            &["o", "a", "b", "c", "i"],
            &[("o", "a"), ("a", "b"), ("b", "i"), ("o", "c"), ("c", "i")],
            "o",
            "i",
        )
        .unwrap(),
    )
    .unwrap()
}

/// Named fixture lattices.
pub fn fixtures() -> Vec<(&'static str, FiniteLattice)> {
    vec![
        ("2-chain", chain_lattice(2)),
        ("4-chain", chain_lattice(4)),
        ("diamond", lattice_from_order(&diamond()).unwrap()),
        ("N5", n5()),
    ]
}

/// The nonempty down sets of `p` under inclusion, as bitmasks, by brute force.
pub fn nonempty_down_sets_brute(p: &BoundedPoset) -> Vec<u32> {
    let n = p.len();
    (1u32..1 << n)
        .filter(|&m| {
            let has = |x: usize| m >> x & 1 == 1;
            (0..n).all(|x| !has(x) || (0..n).all(|y| !p.le(y, x) || has(y)))
        })
        .collect()
}

/// Those down sets as a bounded poset (ids `d<mask>`).
pub fn down_set_poset(p: &BoundedPoset) -> BoundedPoset {
    let sets = nonempty_down_sets_brute(p);
    let ids: Vec<ElementId> = sets.iter().map(|m| ElementId::new(format!("d{m}")).unwrap()).collect();
    let mut rel = Vec::new();
    for (i, a) in sets.iter().enumerate() {
        for (j, b) in sets.iter().enumerate() {
            if a & b == *a {
                rel.push((ids[i].clone(), ids[j].clone()));
            }
        }
    }
    let full = sets.iter().position(|&m| m == (1u32 << p.len()) - 1).unwrap();
    let bottom = sets.iter().position(|&m| m.count_ones() == 1).unwrap();
    BoundedPoset::build(ids.clone(), rel, &ids[bottom], &ids[full]).unwrap()
}

/// Join-irreducibility and unique lower cover of `x`, from the tables.
pub fn slimmable(l: &FiniteLattice, x: &ElementId) -> bool {
    let xi = l.index_of(x).expect("element present");
    let n = l.len();
    let join_irreducible = (0..n).all(|u| (0..n).all(|v| u == xi || v == xi || l.join(u, v) != xi));
    let below: Vec<usize> = (0..n).filter(|&y| y != xi && l.le(y, xi)).collect();
    let lower_covers = below
        .iter()
        .filter(|&&y| !below.iter().any(|&z| z != y && l.le(y, z)))
        .count();
    join_irreducible && lower_covers == 1
}
