use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::lattice::{FiniteLattice, Op};
use crate::order::ElementId;

pub const DEFAULT_PROJECTIVITY_DEPTH: usize = 8;

/// One transposition step: collapsing `from` collapses
/// `to = [from.0 op by, from.1 op by]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transposition {
    pub from: (ElementId, ElementId),
    pub op: Op,
    pub by: ElementId,
    pub to: (ElementId, ElementId),
}

/// Searches for a chain of interval transpositions transporting a collapse
/// of `[c, d]` onto an interval containing `[a, b]`. Such a chain shows
/// `[a, b]` is weakly projective into `[c, d]`, hence
/// `con(a, b) ⊆ con(c, d)`.
///
/// Breadth-first, so the returned chain is shortest; `None` if there is none
/// within `max_depth` steps. An empty chain means `[a, b] ⊆ [c, d]`.
pub fn projectivity_witness(
    lattice: &FiniteLattice,
    (a, b): (usize, usize),
    (c, d): (usize, usize),
    max_depth: usize,
) -> Option<Vec<Transposition>> {
    debug_assert!(lattice.le(a, b) && lattice.le(c, d));
    let covers_target = |(u, v): (usize, usize)| lattice.le(u, a) && lattice.le(b, v);
    let n = lattice.len();
    let mut parent: HashMap<(usize, usize), Option<((usize, usize), Op, usize)>> = HashMap::new();
    let mut queue = VecDeque::new();
    parent.insert((c, d), None);
    queue.push_back(((c, d), 0));
    let mut goal = None;
    while let Some((iv, depth)) = queue.pop_front() {
        if covers_target(iv) {
            goal = Some(iv);
            break;
        }
        if depth == max_depth {
            continue;
        }
        for z in 0..n {
            for op in [Op::Join, Op::Meet] {
                let next = (lattice.apply(op, iv.0, z), lattice.apply(op, iv.1, z));
                if next.0 == next.1 || parent.contains_key(&next) {
                    continue;
                }
                parent.insert(next, Some((iv, op, z)));
                queue.push_back((next, depth + 1));
            }
        }
    }
    let mut at = goal?;
    let pair = |(u, v): (usize, usize)| (lattice.id(u).clone(), lattice.id(v).clone());
    let mut steps = Vec::new();
    while let Some(Some((prev, op, z))) = parent.get(&at) {
        steps.push(Transposition {
            from: pair(*prev),
            op: *op,
            by: lattice.id(*z).clone(),
            to: pair(at),
        });
        at = *prev;
    }
    steps.reverse();
    Some(steps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::congruence::principal_congruence;
    use crate::congruence::tests::n5;

    fn idx(l: &FiniteLattice, s: &str) -> usize {
        l.index_of(&s.into()).unwrap()
    }

    #[test]
    fn same_interval_is_empty_chain() {
        let l = n5();
        let (a, b) = (idx(&l, "a"), idx(&l, "b"));
        assert_eq!(projectivity_witness(&l, (a, b), (a, b), 8), Some(vec![]));
    }

    #[test]
    fn pentagon_witnesses_match_containment() {
        let l = n5();
        let n = l.len();
        for a in 0..n {
            for b in 0..n {
                if a == b || !l.le(a, b) {
                    continue;
                }
                for c in 0..n {
                    for d in 0..n {
                        if c == d || !l.le(c, d) {
                            continue;
                        }
                        let contained = principal_congruence(&l, a, b).refines(&principal_congruence(&l, c, d));
                        let w = projectivity_witness(&l, (a, b), (c, d), 8);
                        if w.is_some() {
                            assert!(contained);
                        }
                    }
                }
            }
        }
        // [o,b] collapses with [c,i]: meet with b sends [c,i] to [o,b]
        let w = projectivity_witness(&l, (idx(&l, "o"), idx(&l, "b")), (idx(&l, "c"), idx(&l, "i")), 8).unwrap();
        assert_eq!(w.len(), 1);
        assert_eq!(w[0].to, ("o".into(), "b".into()));
        // [c,i] does not collapse from [a,b]
        assert!(projectivity_witness(&l, (idx(&l, "c"), idx(&l, "i")), (idx(&l, "a"), idx(&l, "b")), 8).is_none());
    }
}
