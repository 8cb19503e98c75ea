use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::order::{BoundedPoset, ElementId, IsotoneMap};

const NAMES: [&str; 6] = ["p", "q", "r", "s", "t", "u"];
const RETRIES: usize = 64;

fn from_strict(n: usize, lt: &[Vec<bool>]) -> BoundedPoset {
    let ids: Vec<ElementId> = ["0", "1"].iter().chain(&NAMES[..n]).map(|s| ElementId::from(*s)).collect();
    let (o, i) = (ids[0].clone(), ids[1].clone());
    let mut rel = Vec::new();
    for x in 0..n {
        rel.push((o.clone(), ids[x + 2].clone()));
        rel.push((ids[x + 2].clone(), i.clone()));
        for y in 0..n {
            if lt[x][y] {
                rel.push((ids[x + 2].clone(), ids[y + 2].clone()));
            }
        }
    }
    rel.push((o.clone(), i.clone()));
    BoundedPoset::build(ids, rel, &o, &i).expect("acyclic by construction")
}

/// Largest adjacency bitstring over all relabelings (edges then point from
/// earlier to later names).
fn canonical(n: usize, lt: &[Vec<bool>]) -> Vec<bool> {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best: Option<Vec<bool>> = None;
    loop {
        let code: Vec<bool> = (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).map(|(x, y)| lt[perm[x]][perm[y]]).collect();
        if best.as_ref().is_none_or(|b| code > *b) {
            best = Some(code);
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    best.unwrap_or_default()
}

fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).unwrap();
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Strict orders on `0..n` whose edges respect index order (every order has
/// such a labeling, so this covers every isomorphism class).
fn natural_orders(n: usize) -> Vec<Vec<Vec<bool>>> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|x| (x + 1..n).map(move |y| (x, y))).collect();
    let mut out = Vec::new();
    for mask in 0u32..1 << pairs.len() {
        let mut lt = vec![vec![false; n]; n];
        for (k, &(x, y)) in pairs.iter().enumerate() {
            lt[x][y] = mask >> k & 1 == 1;
        }
        let transitive = (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| !(lt[x][y] && lt[y][z]) || lt[x][z])));
        if transitive {
            out.push(lt);
        }
    }
    out
}

/// One bounded poset per isomorphism class with at most `max_interior`
/// interior elements, by size and then canonical code. Interior ids are
/// `p, q, r, s, ...`; bounds are `0` and `1`.
pub fn enumerate_small_posets(max_interior: usize) -> Vec<BoundedPoset> {
    assert!(max_interior <= NAMES.len(), "at most {} interior elements", NAMES.len());
    let mut out = Vec::new();
    for n in 0..=max_interior {
        let mut seen: BTreeMap<Vec<bool>, Vec<Vec<bool>>> = BTreeMap::new();
        for lt in natural_orders(n) {
            seen.entry(canonical(n, &lt)).or_insert(lt);
        }
        // the canonical code is the adjacency of some relabeling; rebuild from it
        for code in seen.keys() {
            let lt: Vec<Vec<bool>> = (0..n).map(|x| code[x * n..(x + 1) * n].to_vec()).collect();
            out.push(from_strict(n, &lt));
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub seed: u64,
    pub max_p_interior: usize,
    pub max_q_interior: usize,
    pub trials: usize,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            seed: 0,
            max_p_interior: 3,
            max_q_interior: 3,
            trials: 100,
        }
    }
}

impl GeneratorConfig {
    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

/// A random bounded poset with at most `max_interior` interior elements:
/// a random DAG over a fixed linear order, closed transitively.
pub fn random_poset(rng: &mut impl Rng, max_interior: usize) -> BoundedPoset {
    let n = rng.gen_range(0..=max_interior.min(NAMES.len()));
    let mut lt = vec![vec![false; n]; n];
    for x in 0..n {
        for y in x + 1..n {
            lt[x][y] = rng.gen_bool(0.5);
        }
    }
    from_strict(n, &lt)
}

fn isotone_assignments(p: &BoundedPoset, q: &BoundedPoset) -> Vec<Vec<usize>> {
    let order: Vec<usize> = p.linear_extension().into_iter().filter(|&x| x != p.bottom() && x != p.top()).collect();
    let targets = q.interior_indices();
    let mut out = Vec::new();
    let mut current = vec![usize::MAX; p.len()];
    fn go(
        k: usize,
        order: &[usize],
        targets: &[usize],
        p: &BoundedPoset,
        q: &BoundedPoset,
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if k == order.len() {
            out.push(current.clone());
            return;
        }
        let x = order[k];
        for &t in targets {
            // predecessors in the linear extension are already assigned
            let ok = order[..k].iter().all(|&y| !p.le(y, x) || q.le(current[y], t));
            if ok {
                current[x] = t;
                go(k + 1, order, targets, p, q, current, out);
            }
        }
        current[x] = usize::MAX;
    }
    go(0, &order, &targets, p, q, &mut current, &mut out);
    out
}

/// A uniformly random isotone map `p → q` that is bounded and sends the
/// interior of `p` into the interior of `q`; `None` if there is none.
pub fn random_isotone_map(rng: &mut impl Rng, p: &BoundedPoset, q: &BoundedPoset) -> Option<IsotoneMap> {
    let all = isotone_assignments(p, q);
    if all.is_empty() {
        return None;
    }
    let pick = &all[rng.gen_range(0..all.len())];
    let mut assignment = BTreeMap::new();
    assignment.insert(p.bottom_id().clone(), q.bottom_id().clone());
    assignment.insert(p.top_id().clone(), q.top_id().clone());
    for x in p.interior_indices() {
        assignment.insert(p.id(x).clone(), q.id(pick[x]).clone());
    }
    Some(IsotoneMap::new(p.clone(), q.clone(), assignment).expect("total by construction"))
}

/// Draws `(P, Q, ψ)`; `Q` is resampled until a valid `ψ` exists.
pub fn random_instance(rng: &mut impl Rng, cfg: &GeneratorConfig) -> IsotoneMap {
    let p = random_poset(rng, cfg.max_p_interior);
    for _ in 0..RETRIES {
        let q = random_poset(rng, cfg.max_q_interior);
        if let Some(psi) = random_isotone_map(rng, &p, &q) {
            return psi;
        }
    }
    // a one-element interior always admits the constant map
    let q = from_strict(1, &[vec![false]]);
    random_isotone_map(rng, &p, &q).expect("constant map")
}

/// The whole stream for `cfg`.
pub fn random_instances(cfg: &GeneratorConfig) -> Vec<IsotoneMap> {
    let mut rng = cfg.rng();
    (0..cfg.trials).map(|_| random_instance(&mut rng, cfg)).collect()
}
