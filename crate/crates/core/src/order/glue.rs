use std::collections::{BTreeMap, BTreeSet};

use super::{BoundedPoset, ElementId, OrderError};

/// `P ⊔ Q` with the bottoms and the tops identified.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GluedPoset {
    pub poset: BoundedPoset,
    /// Original id in the left input ↦ id in the glued poset.
    pub left: BTreeMap<ElementId, ElementId>,
    /// Original id in the right input ↦ id in the glued poset.
    pub right: BTreeMap<ElementId, ElementId>,
    /// `(source name, old id, new id)` for every interior id that was renamed.
    pub renamed: Vec<(String, ElementId, ElementId)>,
}

/// Glues two bounded posets along their bounds. The glued bounds take the
/// left input's ids; colliding interior ids are suffixed with `.{name}` of
/// their source structure.
pub fn glue_bounds(
    left: &BoundedPoset,
    left_name: &str,
    right: &BoundedPoset,
    right_name: &str,
) -> Result<GluedPoset, OrderError> {
    let bottom = left.bottom_id().clone();
    let top = left.top_id().clone();

    let left_inner: BTreeSet<&ElementId> = left.interior_indices().into_iter().map(|x| left.id(x)).collect();
    let right_inner: BTreeSet<&ElementId> = right.interior_indices().into_iter().map(|x| right.id(x)).collect();
    let reserved = |id: &ElementId| *id == bottom || *id == top;

    let mut renamed = Vec::new();
    let mut taken: BTreeSet<ElementId> = [bottom.clone(), top.clone()].into();
    let mut left_map = BTreeMap::new();
    let mut right_map = BTreeMap::new();
    left_map.insert(left.bottom_id().clone(), bottom.clone());
    left_map.insert(left.top_id().clone(), top.clone());
    right_map.insert(right.bottom_id().clone(), bottom.clone());
    right_map.insert(right.top_id().clone(), top.clone());

    for id in &left_inner {
        let clash = right_inner.contains(id);
        let new = if clash { fresh(id, left_name, &taken) } else { (*id).clone() };
        if new != **id {
            renamed.push((left_name.to_string(), (*id).clone(), new.clone()));
        }
        taken.insert(new.clone());
        left_map.insert((*id).clone(), new);
    }
    for id in &right_inner {
        let clash = left_inner.contains(id) || reserved(id) || taken.contains(*id);
        let new = if clash { fresh(id, right_name, &taken) } else { (*id).clone() };
        if new != **id {
            renamed.push((right_name.to_string(), (*id).clone(), new.clone()));
        }
        taken.insert(new.clone());
        right_map.insert((*id).clone(), new);
    }

    let elements: Vec<ElementId> = taken.iter().cloned().collect();
    let mut relation = Vec::new();
    for (src, map) in [(left, &left_map), (right, &right_map)] {
        for (a, b) in src.covers() {
            relation.push((map[&a].clone(), map[&b].clone()));
        }
    }
    let poset = BoundedPoset::build(elements, relation, &bottom, &top)?;
    Ok(GluedPoset {
        poset,
        left: left_map,
        right: right_map,
        renamed,
    })
}

fn fresh(id: &ElementId, source: &str, taken: &BTreeSet<ElementId>) -> ElementId {
    let mut candidate = ElementId(format!("{id}.{source}"));
    while taken.contains(&candidate) {
        candidate = ElementId(format!("{candidate}.{source}"));
    }
    candidate
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::{classify_interior, poset};

    fn three(mid: &str) -> BoundedPoset {
        poset(&["0", mid, "1"], &[("0", mid), (mid, "1")], "0", "1").unwrap()
    }

    #[test]
    fn chains_glue_to_diamond() {
        let g = glue_bounds(&three("p"), "P", &three("q"), "Q").unwrap();
        assert_eq!(g.poset.len(), 4);
        let split = classify_interior(&g.poset);
        assert_eq!(split.isolated.len(), 2);
        assert!(g.renamed.is_empty());
    }

    #[test]
    fn two_chains_glue_to_two_chain() {
        let g = glue_bounds(&BoundedPoset::chain(2), "P", &BoundedPoset::chain(2), "Q").unwrap();
        assert_eq!(g.poset.len(), 2);
    }

    #[test]
    fn collisions_are_renamed_on_both_sides() {
        let g = glue_bounds(&three("p"), "P", &three("p"), "Q").unwrap();
        assert_eq!(g.poset.len(), 4);
        assert_eq!(g.left[&"p".into()], ElementId::from("p.P"));
        assert_eq!(g.right[&"p".into()], ElementId::from("p.Q"));
        assert_eq!(g.renamed.len(), 2);
    }

    #[test]
    fn different_bound_names() {
        let q = poset(&["bot", "r", "top"], &[("bot", "r"), ("r", "top")], "bot", "top").unwrap();
        let g = glue_bounds(&three("p"), "P", &q, "Q").unwrap();
        assert_eq!(g.right[&"bot".into()], ElementId::from("0"));
        assert_eq!(g.poset.len(), 4);
    }

    #[test]
    fn diamond_with_chain() {
        let diamond = poset(&["0", "p", "q", "1"], &[("0", "p"), ("0", "q"), ("p", "1"), ("q", "1")], "0", "1").unwrap();
        let g = glue_bounds(&diamond, "P", &three("r"), "Q").unwrap();
        assert_eq!(g.poset.len(), diamond.len() + 3 - 2);
        let split = classify_interior(&g.poset);
        assert_eq!(split.isolated.len(), 3);
        // restriction to P is P's order
        for a in diamond.elements() {
            for b in diamond.elements() {
                assert_eq!(
                    diamond.le_ids(a, b).unwrap(),
                    g.poset.le_ids(&g.left[a], &g.left[b]).unwrap()
                );
            }
        }
    }
}
