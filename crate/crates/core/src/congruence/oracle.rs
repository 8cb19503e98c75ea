use super::{guard, Annotation, Congruence, CongruenceError, CongruenceOrder};
use crate::lattice::FiniteLattice;

/// Largest lattice accepted by the oracle (Bell(8) = 4140 partitions).
pub const ORACLE_LIMIT: usize = 8;

/// Every partition of the carrier that is compatible with the join and meet
/// tables, found by exhaustive enumeration. Members that are the least
/// congruence containing some pair are annotated with that pair.
///
/// Shares no code path with the closure engine beyond the canonical
/// representation.
pub fn brute_force_congruences(lattice: &FiniteLattice) -> Result<CongruenceOrder, CongruenceError> {
    brute_force_congruences_up_to(lattice, ORACLE_LIMIT)
}

/// [`brute_force_congruences`] with a caller-chosen size guard. Partial
/// assignments are pruned as soon as an assigned triple violates
/// compatibility, which keeps lattices of a dozen elements tractable.
pub fn brute_force_congruences_up_to(lattice: &FiniteLattice, limit: usize) -> Result<CongruenceOrder, CongruenceError> {
    guard(lattice, limit)?;
    let n = lattice.len();
    let mut found: Vec<Congruence> = Vec::new();
    let mut labels = vec![usize::MAX; n];
    partitions(lattice, &mut labels, 0, 0, &mut found);

    let mut entries: Vec<(Congruence, Annotation)> = found.into_iter().map(|c| (c, Annotation::default())).collect();
    for x in 0..n {
        for y in x..n {
            let containing: Vec<usize> = (0..entries.len()).filter(|&i| entries[i].0.related(x, y)).collect();
            let least = containing
                .iter()
                .copied()
                .find(|&i| containing.iter().all(|&j| entries[i].0.refines(&entries[j].0)));
            if let Some(i) = least {
                if entries[i].1.principal.is_none() {
                    entries[i].1.principal = Some((lattice.id(x).clone(), lattice.id(y).clone()));
                }
            }
        }
    }
    Ok(CongruenceOrder::from_members(entries))
}

/// Restricted growth strings: element `at` joins an existing block or opens
/// block `blocks`.
fn partitions(lattice: &FiniteLattice, labels: &mut Vec<usize>, at: usize, blocks: usize, out: &mut Vec<Congruence>) {
    let n = labels.len();
    if at == n {
        if compatible(lattice, labels) {
            out.push(Congruence::from_labels(labels));
        }
        return;
    }
    for b in 0..=blocks {
        labels[at] = b;
        if consistent_so_far(lattice, labels, at) {
            partitions(lattice, labels, at + 1, blocks.max(b + 1), out);
        }
    }
    labels[at] = usize::MAX;
}

/// Checks every triple whose largest index is `at`, among assigned results.
fn consistent_so_far(lattice: &FiniteLattice, labels: &[usize], at: usize) -> bool {
    let same = |u: usize, v: usize| u > at || v > at || labels[u] == labels[v];
    for x in 0..=at {
        for y in x + 1..=at {
            if labels[x] != labels[y] {
                continue;
            }
            for z in 0..=at {
                if x.max(y).max(z) != at
                    && lattice.join(x, z).max(lattice.join(y, z)) != at
                    && lattice.meet(x, z).max(lattice.meet(y, z)) != at
                {
                    continue;
                }
                if !same(lattice.join(x, z), lattice.join(y, z)) || !same(lattice.meet(x, z), lattice.meet(y, z)) {
                    return false;
                }
            }
        }
    }
    true
}

fn compatible(lattice: &FiniteLattice, labels: &[usize]) -> bool {
    let n = labels.len();
    for x in 0..n {
        for y in 0..n {
            if labels[x] != labels[y] {
                continue;
            }
            for z in 0..n {
                if labels[lattice.join(x, z)] != labels[lattice.join(y, z)]
                    || labels[lattice.meet(x, z)] != labels[lattice.meet(y, z)]
                {
                    return false;
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::congruence::enumerate_congruences;
    use crate::congruence::tests::{diamond, n5};
    use crate::lattice::lattice_from_order;
    use crate::order::BoundedPoset;

    #[test]
    fn small_counts() {
        let two = lattice_from_order(&BoundedPoset::chain(2)).unwrap();
        assert_eq!(brute_force_congruences(&two).unwrap().len(), 2);
        assert_eq!(brute_force_congruences(&diamond()).unwrap().len(), 4);
        assert_eq!(brute_force_congruences(&n5()).unwrap().len(), 5);
        let four = lattice_from_order(&BoundedPoset::chain(4)).unwrap();
        assert_eq!(brute_force_congruences(&four).unwrap().len(), 8);
    }

    #[test]
    fn agrees_with_engine_on_pentagon() {
        let l = n5();
        assert!(brute_force_congruences(&l).unwrap().same_members(&enumerate_congruences(&l).unwrap()));
    }

    #[test]
    fn guard_applies() {
        let nine = lattice_from_order(&BoundedPoset::chain(9)).unwrap();
        assert!(matches!(brute_force_congruences(&nine), Err(CongruenceError::SizeGuard { limit: 8, .. })));
    }
}
