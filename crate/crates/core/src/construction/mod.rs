//! Frame building, gadgets, and the two assemblies.

mod assemble;
mod gadget;
mod search;

use thiserror::Error;

use crate::congruence::CongruenceError;
use crate::lattice::{lattice_from_order, FiniteLattice, FrameLabeling, LatticeError, Role, RESERVED_CHARS};
use crate::order::{BoundedPoset, ElementId, OrderError};

pub use assemble::{
    assemble_k, assemble_l, AssemblyChecks, GadgetInstance, SlimRecord, Theorem1Build, Theorem2Build,
};
pub use gadget::{
    default_gadget, fixture_digest, pinned_gadget, verify_gadget, ContractItem, GADGET_ORACLE_LIMIT, Gadget, GadgetFixture, GadgetJson,
    GadgetReport, FIXTURE,
};
pub use search::{search_gadgets, SearchConfig, SearchOutcome, MAX_AUX};

#[derive(Debug, Error)]
pub enum ConstructionError {
    #[error("element id `{0}` contains one of the reserved characters ( ) , :")]
    ReservedId(ElementId),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("map rejected: {0}")]
    InvalidMap(String),
    #[error("ψ({p}) = {image} is not an interior element of the codomain; such maps are not supported")]
    UnsupportedTarget { p: ElementId, image: ElementId },
    #[error("gadget element `{0}` carries no role")]
    Unlabeled(ElementId),
    #[error("assertion {name} failed: {detail}")]
    Assertion { name: &'static str, detail: String },
    #[error("search budget exhausted after {examined} candidates")]
    BudgetExhausted { examined: u64 },
    #[error("search: {0}")]
    Search(String),
    #[error("gadget fixture: {0}")]
    Fixture(String),
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Congruence(#[from] CongruenceError),
}

impl ConstructionError {
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            ConstructionError::ReservedId(_)
                | ConstructionError::Input(_)
                | ConstructionError::InvalidMap(_)
                | ConstructionError::UnsupportedTarget { .. }
        )
    }
}

fn check_ids(p: &BoundedPoset) -> Result<(), ConstructionError> {
    for x in p.interior_indices() {
        let id = p.id(x);
        if id.as_str().contains(RESERVED_CHARS) {
            return Err(ConstructionError::ReservedId(id.clone()));
        }
    }
    Ok(())
}

/// `Frame P`: `o < a(p) < b(p) < i` for each interior `p`, plus guards
/// `a0`, `a1` between `o` and `i`; all other pairs are complementary.
/// With no interior, the two-element lattice (the guards coincide with the
/// bounds and carry no separate label).
pub fn frame(p: &BoundedPoset) -> Result<(FiniteLattice, FrameLabeling), ConstructionError> {
    check_ids(p)?;
    let mut labels = FrameLabeling::new();
    let o = labels.insert_canonical(Role::Bottom);
    let i = labels.insert_canonical(Role::Top);
    let mut elements = vec![o.clone(), i.clone()];
    let mut edges = vec![(o.clone(), i.clone())];
    let interior = p.interior_indices();
    if !interior.is_empty() {
        for g in [Role::Guard0, Role::Guard1] {
            let id = labels.insert_canonical(g);
            edges.push((o.clone(), id.clone()));
            edges.push((id.clone(), i.clone()));
            elements.push(id);
        }
        for x in interior {
            let id = p.id(x);
            let a = labels.insert_canonical(Role::A(id.clone()));
            let b = labels.insert_canonical(Role::B(id.clone()));
            edges.extend([(o.clone(), a.clone()), (a.clone(), b.clone()), (b.clone(), i.clone())]);
            elements.extend([a, b]);
        }
    }
    let order = BoundedPoset::build(elements, edges, &o, &i)?;
    Ok((lattice_from_order(&order)?, labels))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::poset;

    #[test]
    fn frame_sizes() {
        let (two, l2) = frame(&BoundedPoset::chain(2)).unwrap();
        assert_eq!(two.len(), 2);
        assert!(l2.element(&Role::Guard0).is_none());

        let (six, _) = frame(&BoundedPoset::chain(3)).unwrap();
        assert_eq!(six.len(), 6);

        let diamond = poset(&["0", "p", "q", "1"], &[("0", "p"), ("0", "q"), ("p", "1"), ("q", "1")], "0", "1").unwrap();
        let (eight, labels) = frame(&diamond).unwrap();
        assert_eq!(eight.len(), 8);
        let ap = eight.require(labels.element(&Role::A("p".into())).unwrap()).unwrap();
        let bq = eight.require(labels.element(&Role::B("q".into())).unwrap()).unwrap();
        assert_eq!((eight.join(ap, bq), eight.meet(ap, bq)), (eight.top(), eight.bottom()));
    }

    #[test]
    fn reserved_ids_rejected() {
        let p = poset(&["0", "p,q", "1"], &[("0", "p,q"), ("p,q", "1")], "0", "1").unwrap();
        let err = frame(&p).unwrap_err();
        assert!(err.is_input_error());
    }
}
