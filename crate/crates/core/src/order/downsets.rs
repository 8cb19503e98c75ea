use std::collections::BTreeSet;

use super::{BoundedPoset, ElementId, Relation};

/// The nonempty down-closed subsets of a finite ordered set, ordered by
/// inclusion.
///
/// Members are listed by size, then lexicographically by their sorted ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DownSetFamily {
    base: Vec<ElementId>,
    members: Vec<BTreeSet<ElementId>>,
}

impl DownSetFamily {
    pub fn base(&self) -> &[ElementId] {
        &self.base
    }

    pub fn members(&self) -> &[BTreeSet<ElementId>] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn position(&self, set: &BTreeSet<ElementId>) -> Option<usize> {
        self.members.iter().position(|m| m == set)
    }

    pub fn le(&self, i: usize, j: usize) -> bool {
        self.members[i].is_subset(&self.members[j])
    }
}

/// Enumerates the nonempty down sets of the sub-order induced on `subset`
/// (the whole of `p` when `None`).
pub fn nonempty_down_sets(p: &BoundedPoset, subset: Option<&BTreeSet<ElementId>>) -> DownSetFamily {
    let keep: Vec<usize> = match subset {
        Some(s) => (0..p.len()).filter(|&x| s.contains(p.id(x))).collect(),
        None => (0..p.len()).collect(),
    };
    let rel = p.relation().restrict(&keep);
    let base: Vec<ElementId> = keep.iter().map(|&x| p.id(x).clone()).collect();

    let mut found: Vec<Vec<usize>> = Vec::new();
    let mut chosen = vec![false; keep.len()];
    // Elements visited in a linear extension: deciding x after everything
    // below it lets down-closure be checked locally.
    let mut order: Vec<usize> = (0..keep.len()).collect();
    order.sort_by_key(|&x| ((0..keep.len()).filter(|&y| rel.get(y, x)).count(), x));
    extend(&rel, &order, 0, &mut chosen, &mut found);

    let mut members: Vec<BTreeSet<ElementId>> = found
        .into_iter()
        .filter(|s| !s.is_empty())
        .map(|s| s.into_iter().map(|i| base[i].clone()).collect())
        .collect();
    members.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.iter().cmp(b.iter())));
    DownSetFamily { base, members }
}

fn extend(rel: &Relation, order: &[usize], at: usize, chosen: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
    if at == order.len() {
        out.push((0..chosen.len()).filter(|&i| chosen[i]).collect());
        return;
    }
    let x = order[at];
    extend(rel, order, at + 1, chosen, out);
    let below_ok = (0..chosen.len()).all(|y| y == x || !rel.get(y, x) || chosen[y]);
    if below_ok {
        chosen[x] = true;
        extend(rel, order, at + 1, chosen, out);
        chosen[x] = false;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::{classify_interior, poset};

    /// Independent check: filter every subset for down-closure.
    fn brute_force(p: &BoundedPoset, keep: &[usize]) -> Vec<BTreeSet<ElementId>> {
        let mut out = Vec::new();
        for mask in 1u32..(1 << keep.len()) {
            let set: Vec<usize> = (0..keep.len()).filter(|i| mask >> i & 1 == 1).map(|i| keep[i]).collect();
            let closed = set
                .iter()
                .all(|&x| keep.iter().all(|&y| !p.le(y, x) || set.contains(&y)));
            if closed {
                out.push(set.iter().map(|&x| p.id(x).clone()).collect());
            }
        }
        out.sort_by(|a: &BTreeSet<ElementId>, b| a.len().cmp(&b.len()).then_with(|| a.iter().cmp(b.iter())));
        out
    }

    fn diamond() -> BoundedPoset {
        poset(&["0", "p", "q", "1"], &[("0", "p"), ("0", "q"), ("p", "1"), ("q", "1")], "0", "1").unwrap()
    }

    #[test]
    fn diamond_has_five() {
        let p = diamond();
        let fam = nonempty_down_sets(&p, None);
        assert_eq!(fam.len(), 5);
        assert_eq!(fam.members(), brute_force(&p, &[0, 1, 2, 3]).as_slice());
        let sizes: Vec<usize> = fam.members().iter().map(|m| m.len()).collect();
        assert_eq!(sizes, vec![1, 2, 2, 3, 4]);
    }

    #[test]
    fn chain_gives_chain() {
        let p = BoundedPoset::chain(3);
        let fam = nonempty_down_sets(&p, None);
        assert_eq!(fam.len(), 3);
        for i in 0..3 {
            for j in 0..3 {
                assert!(fam.le(i, j) || fam.le(j, i));
            }
        }
    }

    #[test]
    fn interior_antichain() {
        let p = diamond();
        let inner = classify_interior(&p).interior;
        let fam = nonempty_down_sets(&p, Some(&inner));
        let expected: Vec<BTreeSet<ElementId>> = vec![
            ["p"].iter().map(|&s| s.into()).collect(),
            ["q"].iter().map(|&s| s.into()).collect(),
            ["p", "q"].iter().map(|&s| s.into()).collect(),
        ];
        assert_eq!(fam.members(), expected.as_slice());
    }

    #[test]
    fn counts_for_chains_and_antichains() {
        for n in 2..7 {
            assert_eq!(nonempty_down_sets(&BoundedPoset::chain(n), None).len(), n);
        }
        // n-element interior antichain
        for n in 1..6usize {
            let mut els = vec!["0".to_string(), "1".to_string()];
            let mut le = Vec::new();
            for k in 0..n {
                els.push(format!("x{k}"));
                le.push(("0".to_string(), format!("x{k}")));
                le.push((format!("x{k}"), "1".to_string()));
            }
            let els: Vec<&str> = els.iter().map(|s| s.as_str()).collect();
            let le: Vec<(&str, &str)> = le.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
            let p = poset(&els, &le, "0", "1").unwrap();
            let inner = classify_interior(&p).interior;
            assert_eq!(nonempty_down_sets(&p, Some(&inner)).len(), (1 << n) - 1);
        }
    }
}
