use std::collections::BTreeMap;

use super::{BoundedPoset, ElementId};

/// Per-element invariant used to prune the search: height from the bottom,
/// depth from the top, and the sizes of the principal down and up sets.
fn invariants(p: &BoundedPoset) -> Vec<(usize, usize, usize, usize)> {
    let n = p.len();
    let height = p.heights();
    let mut depth = vec![0; n];
    let mut order = p.linear_extension();
    order.reverse();
    for &x in &order {
        for y in 0..n {
            if p.lt(y, x) {
                depth[y] = depth[y].max(depth[x] + 1);
            }
        }
    }
    (0..n)
        .map(|x| {
            let below = (0..n).filter(|&y| p.le(y, x)).count();
            let above = (0..n).filter(|&y| p.le(x, y)).count();
            (height[x], depth[x], below, above)
        })
        .collect()
}

/// Finds an order-isomorphism `a → b` by backtracking, or `None`.
///
/// Bounds map to bounds automatically (they are the unique elements with
/// extremal invariants). The first isomorphism in candidate-index order is
/// returned, so the result is deterministic.
pub fn order_isomorphism(a: &BoundedPoset, b: &BoundedPoset) -> Option<BTreeMap<ElementId, ElementId>> {
    let n = a.len();
    if n != b.len() || a.relation().pair_count() != b.relation().pair_count() {
        return None;
    }
    let inv_a = invariants(a);
    let inv_b = invariants(b);
    let mut sa = inv_a.clone();
    let mut sb = inv_b.clone();
    sa.sort_unstable();
    sb.sort_unstable();
    if sa != sb {
        return None;
    }

    let candidates: Vec<Vec<usize>> = (0..n)
        .map(|x| (0..n).filter(|&y| inv_b[y] == inv_a[x]).collect())
        .collect();
    // Most constrained first; ties by index.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&x| (candidates[x].len(), x));

    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if assign(a, b, &order, &candidates, 0, &mut image, &mut used) {
        Some(
            (0..n)
                .map(|x| (a.id(x).clone(), b.id(image[x]).clone()))
                .collect(),
        )
    } else {
        None
    }
}

fn assign(
    a: &BoundedPoset,
    b: &BoundedPoset,
    order: &[usize],
    candidates: &[Vec<usize>],
    at: usize,
    image: &mut [usize],
    used: &mut [bool],
) -> bool {
    if at == order.len() {
        return true;
    }
    let x = order[at];
    for &y in &candidates[x] {
        if used[y] {
            continue;
        }
        let consistent = order[..at].iter().all(|&z| {
            let w = image[z];
            a.le(x, z) == b.le(y, w) && a.le(z, x) == b.le(w, y)
        });
        if !consistent {
            continue;
        }
        image[x] = y;
        used[y] = true;
        if assign(a, b, order, candidates, at + 1, image, used) {
            return true;
        }
        used[y] = false;
        image[x] = usize::MAX;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::poset;

    fn diamond(p: &str, q: &str) -> BoundedPoset {
        poset(&["0", p, q, "1"], &[("0", p), ("0", q), (p, "1"), (q, "1")], "0", "1").unwrap()
    }

    #[test]
    fn chain_to_chain() {
        let a = BoundedPoset::chain(3);
        let m = order_isomorphism(&a, &a).unwrap();
        assert!(m.iter().all(|(k, v)| k == v));
    }

    #[test]
    fn chain_vs_diamond() {
        assert!(order_isomorphism(&BoundedPoset::chain(3), &diamond("p", "q")).is_none());
        assert!(order_isomorphism(&BoundedPoset::chain(4), &diamond("p", "q")).is_none());
    }

    #[test]
    fn renamed_diamond() {
        let m = order_isomorphism(&diamond("p", "q"), &diamond("u", "v")).unwrap();
        assert_eq!(m[&"0".into()], ElementId::from("0"));
        assert_eq!(m[&"1".into()], ElementId::from("1"));
    }

    #[test]
    fn same_invariants_different_shape() {
        // 0 < a,b < c,d < 1 complete bipartite vs. a "crossed" variant with
        // a missing comparability.
        let full = poset(
            &["0", "a", "b", "c", "d", "1"],
            &[("0", "a"), ("0", "b"), ("a", "c"), ("a", "d"), ("b", "c"), ("b", "d"), ("c", "1"), ("d", "1")],
            "0",
            "1",
        )
        .unwrap();
        let partial = poset(
            &["0", "a", "b", "c", "d", "1"],
            &[("0", "a"), ("0", "b"), ("a", "c"), ("b", "d"), ("c", "1"), ("d", "1")],
            "0",
            "1",
        )
        .unwrap();
        assert!(order_isomorphism(&full, &partial).is_none());
        assert!(order_isomorphism(&full, &full).is_some());
    }
}
