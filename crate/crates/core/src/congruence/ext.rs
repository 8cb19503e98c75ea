use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{principal_congruence, principal_order, CongruenceError, CongruenceOrder};
use crate::lattice::{is_sublattice, FiniteLattice};
use crate::order::ElementId;

/// `ext(K, L): con_K(x, y) ↦ con_L(x, y)` for a bounded sublattice `K ≤ L`.
#[derive(Debug, Clone)]
pub struct ExtMap {
    /// `K` as a lattice in its own right.
    pub sublattice: FiniteLattice,
    /// `Princ K`.
    pub source: CongruenceOrder,
    /// `Princ L`.
    pub target: CongruenceOrder,
    /// Source member index ↦ target member index.
    pub assignment: Vec<usize>,
    /// The generating pair used for each source member.
    pub witnesses: Vec<(ElementId, ElementId)>,
    pub report: ExtReport,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtReport {
    pub isotone: bool,
    pub bounded: bool,
    pub zero_separating: bool,
    /// Every pair of `K` was checked, not just one witness per member.
    pub witness_independent: bool,
}

impl ExtReport {
    pub fn all_passed(&self) -> bool {
        self.isotone && self.bounded && self.zero_separating && self.witness_independent
    }
}

impl ExtMap {
    /// True when the map is a bijection whose inverse is isotone too.
    pub fn is_order_isomorphism(&self) -> bool {
        let n = self.source.len();
        if n != self.target.len() {
            return false;
        }
        let distinct: BTreeSet<usize> = self.assignment.iter().copied().collect();
        distinct.len() == n
            && (0..n).all(|i| {
                (0..n).all(|j| self.source.le(i, j) == self.target.le(self.assignment[i], self.assignment[j]))
            })
    }

    /// Identity in the sense of `K = L`: every principal congruence maps to
    /// the identical partition of the same carrier.
    pub fn is_identity(&self) -> bool {
        self.sublattice.len() == self.target.members().first().map_or(0, |m| m.len())
            && (0..self.source.len()).all(|i| self.source.members()[i] == self.target.members()[self.assignment[i]])
            && self.source.len() == self.target.len()
    }
}

/// Computes `ext(K, L)`. Every pair of `K` is used as a witness, so a map
/// that depended on the choice of generating pair would be reported as
/// [`CongruenceError::WitnessDependence`].
pub fn ext_map(lattice: &FiniteLattice, k: &BTreeSet<ElementId>) -> Result<ExtMap, CongruenceError> {
    if let Err(f) = is_sublattice(lattice, k, true)? {
        return Err(CongruenceError::NotSublattice(f));
    }
    let keep: Vec<usize> = k.iter().map(|id| lattice.require(id)).collect::<Result<_, _>>()?;
    let sub = lattice.sublattice(&keep)?;
    let source = principal_order(&sub)?;
    let target = principal_order(lattice)?;
    // index in `sub` ↦ index in `lattice`
    let lift: Vec<usize> = (0..sub.len()).map(|x| lattice.index_of(sub.id(x)).unwrap()).collect();

    let mut assignment = vec![usize::MAX; source.len()];
    let mut witnesses: Vec<Option<(usize, usize)>> = vec![None; source.len()];
    for x in 0..sub.len() {
        for y in x..sub.len() {
            let ck = principal_congruence(&sub, x, y);
            let s = source.position(&ck).expect("principal congruence of K is listed");
            let cl = principal_congruence(lattice, lift[x], lift[y]);
            let t = target.position(&cl).expect("principal congruence of L is listed");
            match witnesses[s] {
                None => {
                    assignment[s] = t;
                    witnesses[s] = Some((x, y));
                }
                Some((u, v)) if assignment[s] != t => {
                    return Err(CongruenceError::WitnessDependence {
                        x: sub.id(x).clone(),
                        y: sub.id(y).clone(),
                        u: sub.id(u).clone(),
                        v: sub.id(v).clone(),
                    });
                }
                Some(_) => {}
            }
        }
    }
    let n = source.len();
    let isotone = (0..n).all(|i| (0..n).all(|j| !source.le(i, j) || target.le(assignment[i], assignment[j])));
    let bounded = source.zero().map(|z| Some(assignment[z]) == target.zero()).unwrap_or(false)
        && source.one().map(|o| Some(assignment[o]) == target.one()).unwrap_or(false);
    let zero_separating = (0..n).all(|i| (Some(assignment[i]) == target.zero()) == (Some(i) == source.zero()));
    let witnesses = witnesses
        .into_iter()
        .map(|w| {
            let (x, y) = w.expect("every member has a generating pair");
            (sub.id(x).clone(), sub.id(y).clone())
        })
        .collect();
    Ok(ExtMap {
        sublattice: sub,
        source,
        target,
        assignment,
        witnesses,
        report: ExtReport {
            isotone,
            bounded,
            zero_separating,
            witness_independent: true,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::congruence::principal_congruence_ids;
    use crate::congruence::tests::n5;

    fn set(v: &[&str]) -> BTreeSet<ElementId> {
        v.iter().map(|&s| s.into()).collect()
    }

    #[test]
    fn full_carrier_is_identity() {
        let l = n5();
        let m = ext_map(&l, &l.order().elements().iter().cloned().collect()).unwrap();
        assert!(m.is_identity());
        assert!(m.is_order_isomorphism());
        assert!(m.report.all_passed());
    }

    #[test]
    fn chain_in_pentagon() {
        let l = n5();
        let m = ext_map(&l, &set(&["o", "a", "b", "i"])).unwrap();
        assert!(m.report.all_passed());
        // con_K(a,b) is sent to con_L(a,b) = {a,b} with singletons elsewhere
        let sub = &m.sublattice;
        let ck = principal_congruence_ids(sub, &"a".into(), &"b".into()).unwrap();
        let s = m.source.position(&ck).unwrap();
        let image = &m.target.members()[m.assignment[s]];
        assert!(!image.is_zero());
        assert_eq!(image.block_count(), 4);
        assert_eq!(
            image.block_ids(&l),
            vec![vec!["a".into(), "b".into()], vec!["c".into()], vec!["i".into()], vec!["o".into()]]
        );
    }

    #[test]
    fn only_zero_goes_to_zero() {
        let l = n5();
        let m = ext_map(&l, &set(&["o", "a", "c", "i"])).unwrap();
        let z = m.source.zero().unwrap();
        for i in 0..m.source.len() {
            assert_eq!(m.assignment[i] == m.target.zero().unwrap(), i == z);
        }
    }

    #[test]
    fn non_sublattice_rejected() {
        let l = n5();
        assert!(matches!(ext_map(&l, &set(&["o", "a", "b"])), Err(CongruenceError::NotSublattice(_))));
        let p = crate::order::poset(
            &["o", "s", "x", "u", "v", "i"],
            &[("o", "s"), ("s", "x"), ("x", "u"), ("x", "v"), ("u", "i"), ("v", "i")],
            "o",
            "i",
        )
        .unwrap();
        let l = crate::lattice::lattice_from_order(&p).unwrap();
        assert!(matches!(ext_map(&l, &set(&["o", "u", "v", "i"])), Err(CongruenceError::NotSublattice(_))));
    }
}
