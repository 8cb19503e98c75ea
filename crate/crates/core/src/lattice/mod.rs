//! Finite lattices: certification from an order, operation tables, sublattice
//! tests, label-based gluing of parts, and single-element slimming.

mod labels;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::order::{format_ids, BoundedPoset, ElementId, OrderError, Relation};

pub use labels::{FrameLabeling, Role, RESERVED_CHARS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Op {
    Join,
    Meet,
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Op::Join => "join",
            Op::Meet => "meet",
        })
    }
}

/// A pair whose minimal upper bounds (or maximal lower bounds) are not a
/// singleton.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NotALatticeWitness {
    pub x: ElementId,
    pub y: ElementId,
    pub op: Op,
    pub bounds: Vec<ElementId>,
}

impl fmt::Display for NotALatticeWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.op {
            Op::Join => "minimal upper bounds",
            Op::Meet => "maximal lower bounds",
        };
        write!(f, "`{}` and `{}` have {} {}", self.x, self.y, what, format_ids(&self.bounds))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("not a lattice: {0}")]
    NotALattice(NotALatticeWitness),
    #[error("lattice law violated: {0}")]
    LawViolation(String),
    #[error("unknown element `{0}`")]
    UnknownElement(ElementId),
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error("inconsistent labels: {0}")]
    Labels(String),
    #[error("cannot slim a bound `{0}`")]
    SlimBound(ElementId),
    #[error("cannot slim `{x}`: it is the join of `{u}` and `{v}`")]
    JoinReducible { x: ElementId, u: ElementId, v: ElementId },
    #[error("cannot slim `{x}`: lower covers {}", format_ids(.covers))]
    LowerCovers { x: ElementId, covers: Vec<ElementId> },
    #[error("slimming `{x}` changed {op} of `{u}` and `{v}` unexpectedly")]
    SlimMismatch { x: ElementId, u: ElementId, v: ElementId, op: Op },
}

/// A bounded poset certified as a lattice, with materialized operation
/// tables.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteLattice {
    order: BoundedPoset,
    join: Vec<usize>,
    meet: Vec<usize>,
}

impl fmt::Debug for FiniteLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteLattice").field("order", &self.order).finish()
    }
}

/// Certifies `p` as a lattice: computes least upper and greatest lower bounds
/// for every pair, then checks the lattice laws exhaustively.
pub fn lattice_from_order(p: &BoundedPoset) -> Result<FiniteLattice, LatticeError> {
    let n = p.len();
    let up = p.relation();
    let down = up.transpose();
    let mut join = vec![0; n * n];
    let mut meet = vec![0; n * n];
    for x in 0..n {
        for y in x..n {
            let j = extremal(up, x, y).map_err(|bounds| witness(p, x, y, Op::Join, bounds))?;
            let m = extremal(&down, x, y).map_err(|bounds| witness(p, x, y, Op::Meet, bounds))?;
            join[x * n + y] = j;
            join[y * n + x] = j;
            meet[x * n + y] = m;
            meet[y * n + x] = m;
        }
    }
    let lattice = FiniteLattice {
        order: p.clone(),
        join,
        meet,
    };
    lattice.check_laws()?;
    Ok(lattice)
}

/// The least element of `rel[x] ∩ rel[y]` under `rel`, or the minimal
/// elements when there is no least one.
fn extremal(rel: &Relation, x: usize, y: usize) -> Result<usize, Vec<usize>> {
    let common: Vec<u64> = rel.row(x).iter().zip(rel.row(y)).map(|(a, b)| a & b).collect();
    let members: Vec<usize> = bits(&common).collect();
    for &z in &members {
        if rel.row(z).iter().zip(&common).all(|(r, c)| r & c == *c) {
            return Ok(z);
        }
    }
    let minimal = members
        .iter()
        .copied()
        .filter(|&z| !members.iter().any(|&w| w != z && rel.get(w, z)))
        .collect();
    Err(minimal)
}

fn bits(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(w, &word)| {
        let mut word = word;
        std::iter::from_fn(move || {
            if word == 0 {
                return None;
            }
            let b = word.trailing_zeros() as usize;
            word &= word - 1;
            Some(w * 64 + b)
        })
    })
}

fn witness(p: &BoundedPoset, x: usize, y: usize, op: Op, bounds: Vec<usize>) -> LatticeError {
    LatticeError::NotALattice(NotALatticeWitness {
        x: p.id(x).clone(),
        y: p.id(y).clone(),
        op,
        bounds: bounds.into_iter().map(|z| p.id(z).clone()).collect(),
    })
}

impl FiniteLattice {
    pub fn order(&self) -> &BoundedPoset {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn bottom(&self) -> usize {
        self.order.bottom()
    }

    pub fn top(&self) -> usize {
        self.order.top()
    }

    pub fn id(&self, x: usize) -> &ElementId {
        self.order.id(x)
    }

    pub fn index_of(&self, id: &ElementId) -> Option<usize> {
        self.order.index_of(id)
    }

    pub fn require(&self, id: &ElementId) -> Result<usize, LatticeError> {
        self.index_of(id)
            .ok_or_else(|| LatticeError::UnknownElement(id.clone()))
    }

    #[inline]
    pub fn join(&self, x: usize, y: usize) -> usize {
        self.join[x * self.len() + y]
    }

    #[inline]
    pub fn meet(&self, x: usize, y: usize) -> usize {
        self.meet[x * self.len() + y]
    }

    #[inline]
    pub fn apply(&self, op: Op, x: usize, y: usize) -> usize {
        match op {
            Op::Join => self.join(x, y),
            Op::Meet => self.meet(x, y),
        }
    }

    #[inline]
    pub fn le(&self, x: usize, y: usize) -> bool {
        self.order.le(x, y)
    }

    fn check_laws(&self) -> Result<(), LatticeError> {
        let n = self.len();
        let name = |x: usize| self.id(x).as_str().to_owned();
        for x in 0..n {
            if self.join(x, x) != x || self.meet(x, x) != x {
                return Err(LatticeError::LawViolation(format!("idempotence fails at {}", name(x))));
            }
            for y in 0..n {
                if self.join(x, y) != self.join(y, x) || self.meet(x, y) != self.meet(y, x) {
                    return Err(LatticeError::LawViolation(format!(
                        "commutativity fails at ({}, {})",
                        name(x),
                        name(y)
                    )));
                }
                if self.join(x, self.meet(x, y)) != x || self.meet(x, self.join(x, y)) != x {
                    return Err(LatticeError::LawViolation(format!(
                        "absorption fails at ({}, {})",
                        name(x),
                        name(y)
                    )));
                }
                let le = self.le(x, y);
                if le != (self.join(x, y) == y) || le != (self.meet(x, y) == x) {
                    return Err(LatticeError::LawViolation(format!(
                        "order and operations disagree at ({}, {})",
                        name(x),
                        name(y)
                    )));
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                let (xy_j, xy_m) = (self.join(x, y), self.meet(x, y));
                for z in 0..n {
                    if self.join(xy_j, z) != self.join(x, self.join(y, z))
                        || self.meet(xy_m, z) != self.meet(x, self.meet(y, z))
                    {
                        return Err(LatticeError::LawViolation(format!(
                            "associativity fails at ({}, {}, {})",
                            name(x),
                            name(y),
                            name(z)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// `(x ∨ y, x ∧ y)` by id.
    pub fn ops_eval(&self, x: &ElementId, y: &ElementId) -> Result<(ElementId, ElementId), LatticeError> {
        let (x, y) = (self.require(x)?, self.require(y)?);
        Ok((self.id(self.join(x, y)).clone(), self.id(self.meet(x, y)).clone()))
    }

    /// Closure check of an index set under both operations.
    pub fn sublattice_failure(&self, set: &[usize]) -> Option<(usize, usize, Op, usize)> {
        let mut member = vec![false; self.len()];
        for &x in set {
            member[x] = true;
        }
        for &x in set {
            for &y in set {
                for op in [Op::Join, Op::Meet] {
                    let r = self.apply(op, x, y);
                    if !member[r] {
                        return Some((x, y, op, r));
                    }
                }
            }
        }
        None
    }

    /// The sublattice on `keep` (which must be closed under both
    /// operations), re-certified from its induced order.
    pub fn sublattice(&self, keep: &[usize]) -> Result<FiniteLattice, LatticeError> {
        if let Some((x, y, op, r)) = self.sublattice_failure(keep) {
            return Err(LatticeError::LawViolation(format!(
                "{} of `{}` and `{}` is `{}`, outside the subset",
                op,
                self.id(x),
                self.id(y),
                self.id(r)
            )));
        }
        let sub = lattice_from_order(&self.order.restrict(keep)?)?;
        for a in 0..sub.len() {
            for b in 0..sub.len() {
                let (x, y) = (self.index_of(sub.id(a)).unwrap(), self.index_of(sub.id(b)).unwrap());
                if sub.id(sub.join(a, b)) != self.id(self.join(x, y)) || sub.id(sub.meet(a, b)) != self.id(self.meet(x, y)) {
                    return Err(LatticeError::LawViolation("induced operations differ".into()));
                }
            }
        }
        Ok(sub)
    }
}

/// Failure of a sublattice test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum SublatticeFailure {
    NotClosed { x: ElementId, y: ElementId, op: Op, result: ElementId },
    MissingBound { bound: ElementId },
}

impl fmt::Display for SublatticeFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SublatticeFailure::NotClosed { x, y, op, result } => {
                write!(f, "{op} of `{x}` and `{y}` is `{result}`, not in the subset")
            }
            SublatticeFailure::MissingBound { bound } => write!(f, "bound `{bound}` missing"),
        }
    }
}

/// Tests whether `subset` is closed under join and meet; in `bounded` mode
/// the lattice bounds must belong to it as well.
pub fn is_sublattice(
    lattice: &FiniteLattice,
    subset: &BTreeSet<ElementId>,
    bounded: bool,
) -> Result<Result<(), SublatticeFailure>, LatticeError> {
    let set: Vec<usize> = subset
        .iter()
        .map(|id| lattice.require(id))
        .collect::<Result<_, _>>()?;
    if bounded {
        for b in [lattice.bottom(), lattice.top()] {
            if !set.contains(&b) {
                return Ok(Err(SublatticeFailure::MissingBound {
                    bound: lattice.id(b).clone(),
                }));
            }
        }
    }
    Ok(match lattice.sublattice_failure(&set) {
        None => Ok(()),
        Some((x, y, op, r)) => Err(SublatticeFailure::NotClosed {
            x: lattice.id(x).clone(),
            y: lattice.id(y).clone(),
            op,
            result: lattice.id(r).clone(),
        }),
    })
}

/// Glues labeled parts over equally-named elements. The order of the result
/// is the reflexive-transitive closure of the union of the parts' orders.
///
/// All parts must share the same bottom and top ids, and an id shared by
/// several parts must carry the same label in each of them.
pub fn glue_orders(parts: &[(FiniteLattice, FrameLabeling)]) -> Result<(BoundedPoset, FrameLabeling), LatticeError> {
    let (first, _) = parts
        .first()
        .ok_or_else(|| LatticeError::Labels("no parts to glue".into()))?;
    let bottom = first.id(first.bottom()).clone();
    let top = first.id(first.top()).clone();

    let mut roles: BTreeMap<ElementId, Option<Role>> = BTreeMap::new();
    for (lattice, labels) in parts {
        if *lattice.id(lattice.bottom()) != bottom || *lattice.id(lattice.top()) != top {
            return Err(LatticeError::Labels(format!(
                "part with bounds `{}`/`{}` does not share `{bottom}`/`{top}`",
                lattice.id(lattice.bottom()),
                lattice.id(lattice.top())
            )));
        }
        for id in lattice.order().elements() {
            let role = labels.role(id).cloned();
            match roles.get(id) {
                Some(existing) if *existing != role => {
                    return Err(LatticeError::Labels(format!(
                        "`{id}` labeled {existing:?} and {role:?} in different parts"
                    )));
                }
                Some(_) => {}
                None => {
                    roles.insert(id.clone(), role);
                }
            }
        }
    }

    let elements: Vec<ElementId> = roles.keys().cloned().collect();
    let index = |id: &ElementId| elements.binary_search(id).expect("collected above");
    let mut edges = Relation::new(elements.len());
    for (lattice, _) in parts {
        for (x, y) in lattice.order().cover_indices() {
            edges.set(index(lattice.id(x)), index(lattice.id(y)));
        }
    }
    let poset = BoundedPoset::from_generators(elements.clone(), edges, index(&bottom), index(&top))?;

    let mut labels = FrameLabeling::new();
    for (id, role) in roles {
        if let Some(role) = role {
            labels.insert(id, role).map_err(LatticeError::Labels)?;
        }
    }
    Ok((poset, labels))
}

/// Result of deleting one element from a lattice.
#[derive(Debug, Clone)]
pub struct Slimmed {
    pub lattice: FiniteLattice,
    pub deleted: ElementId,
    pub lower_cover: ElementId,
    /// Pairs whose meet was the deleted element and now is its lower cover.
    pub remapped: Vec<(ElementId, ElementId)>,
}

/// Deletes `x`, which must have a unique lower cover and not be the join of
/// two other elements. Joins are unchanged; meets equal to `x` become the
/// lower cover of `x`. The result is re-certified from its order.
pub fn slim(lattice: &FiniteLattice, x: &ElementId) -> Result<Slimmed, LatticeError> {
    let xi = lattice.require(x)?;
    if xi == lattice.bottom() || xi == lattice.top() {
        return Err(LatticeError::SlimBound(x.clone()));
    }
    let n = lattice.len();
    for u in 0..n {
        for v in u..n {
            if u != xi && v != xi && lattice.join(u, v) == xi {
                return Err(LatticeError::JoinReducible {
                    x: x.clone(),
                    u: lattice.id(u).clone(),
                    v: lattice.id(v).clone(),
                });
            }
        }
    }
    let covers = lattice.order().lower_covers(xi);
    if covers.len() != 1 {
        return Err(LatticeError::LowerCovers {
            x: x.clone(),
            covers: covers.iter().map(|&c| lattice.id(c).clone()).collect(),
        });
    }
    let star = covers[0];

    let keep: Vec<usize> = (0..n).filter(|&y| y != xi).collect();
    let slimmed = lattice_from_order(&lattice.order().restrict(&keep)?)?;
    let mut remapped = Vec::new();
    for a in 0..slimmed.len() {
        for b in a..slimmed.len() {
            let (u, v) = (keep[a], keep[b]);
            let join_new = keep[slimmed.join(a, b)];
            let meet_new = keep[slimmed.meet(a, b)];
            if join_new != lattice.join(u, v) {
                return Err(mismatch(lattice, x, u, v, Op::Join));
            }
            let meet_old = lattice.meet(u, v);
            if meet_old == xi {
                if meet_new != star {
                    return Err(mismatch(lattice, x, u, v, Op::Meet));
                }
                remapped.push((lattice.id(u).clone(), lattice.id(v).clone()));
            } else if meet_new != meet_old {
                return Err(mismatch(lattice, x, u, v, Op::Meet));
            }
        }
    }
    Ok(Slimmed {
        lattice: slimmed,
        deleted: x.clone(),
        lower_cover: lattice.id(star).clone(),
        remapped,
    })
}

fn mismatch(l: &FiniteLattice, x: &ElementId, u: usize, v: usize, op: Op) -> LatticeError {
    LatticeError::SlimMismatch {
        x: x.clone(),
        u: l.id(u).clone(),
        v: l.id(v).clone(),
        op,
    }
}

/// `{"elements":[...], "covers":[["x","y"],...], "bottom":"o", "top":"i", "labels":{...}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeJson {
    pub elements: Vec<ElementId>,
    pub covers: Vec<(ElementId, ElementId)>,
    pub bottom: ElementId,
    pub top: ElementId,
    #[serde(default)]
    pub labels: BTreeMap<String, ElementId>,
}

impl LatticeJson {
    pub fn new(lattice: &FiniteLattice, labels: &FrameLabeling) -> Self {
        let order = lattice.order();
        LatticeJson {
            elements: order.elements().to_vec(),
            covers: order.covers(),
            bottom: order.bottom_id().clone(),
            top: order.top_id().clone(),
            labels: labels.to_string_map(),
        }
    }

    pub fn into_lattice(self) -> Result<(FiniteLattice, FrameLabeling), LatticeError> {
        let order = BoundedPoset::build(self.elements, self.covers, &self.bottom, &self.top)?;
        let lattice = lattice_from_order(&order)?;
        let labels = FrameLabeling::from_string_map(&self.labels).map_err(LatticeError::Labels)?;
        for (id, _) in labels.iter() {
            lattice.require(id)?;
        }
        Ok((lattice, labels))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::poset;

    pub(crate) fn n5() -> FiniteLattice {
        let p = poset(
            &["o", "a", "b", "c", "i"],
            &[("o", "a"), ("a", "b"), ("b", "i"), ("o", "c"), ("c", "i")],
            "o",
            "i",
        )
        .unwrap();
        lattice_from_order(&p).unwrap()
    }

    fn diamond() -> FiniteLattice {
        let p = poset(&["0", "p", "q", "1"], &[("0", "p"), ("0", "q"), ("p", "1"), ("q", "1")], "0", "1").unwrap();
        lattice_from_order(&p).unwrap()
    }

    fn set(v: &[&str]) -> BTreeSet<ElementId> {
        v.iter().map(|&s| s.into()).collect()
    }

    #[test]
    fn diamond_operations() {
        let l = diamond();
        assert_eq!(l.ops_eval(&"p".into(), &"q".into()).unwrap(), ("1".into(), "0".into()));
    }

    #[test]
    fn bowtie_is_not_a_lattice() {
        let p = poset(
            &["0", "a", "b", "c", "d", "1"],
            &[("0", "a"), ("0", "b"), ("a", "c"), ("a", "d"), ("b", "c"), ("b", "d"), ("c", "1"), ("d", "1")],
            "0",
            "1",
        )
        .unwrap();
        match lattice_from_order(&p).unwrap_err() {
            LatticeError::NotALattice(w) => {
                assert_eq!((w.x.as_str(), w.y.as_str(), w.op), ("a", "b", Op::Join));
                assert_eq!(w.bounds, vec![ElementId::from("c"), ElementId::from("d")]);
            }
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn chain_is_a_lattice() {
        let l = lattice_from_order(&BoundedPoset::chain(4)).unwrap();
        assert_eq!(l.ops_eval(&"c1".into(), &"c2".into()).unwrap(), ("c2".into(), "c1".into()));
    }

    #[test]
    fn pentagon_operations() {
        let l = n5();
        assert_eq!(l.ops_eval(&"a".into(), &"c".into()).unwrap(), ("i".into(), "o".into()));
        assert_eq!(l.ops_eval(&"b".into(), &"b".into()).unwrap(), ("b".into(), "b".into()));
        assert_eq!(l.ops_eval(&"o".into(), &"b".into()).unwrap(), ("b".into(), "o".into()));
        assert!(matches!(l.ops_eval(&"z".into(), &"a".into()), Err(LatticeError::UnknownElement(_))));
    }

    #[test]
    fn sublattice_checks() {
        let l = n5();
        assert_eq!(is_sublattice(&l, &set(&["o", "a", "b", "i"]), true).unwrap(), Ok(()));
        assert_eq!(is_sublattice(&l, &set(&["o", "a", "c", "i"]), true).unwrap(), Ok(()));
        let d = diamond();
        assert_eq!(
            is_sublattice(&d, &set(&["0", "p", "q"]), false).unwrap(),
            Err(SublatticeFailure::NotClosed { x: "p".into(), y: "q".into(), op: Op::Join, result: "1".into() })
        );
        assert_eq!(
            is_sublattice(&d, &set(&["0", "p"]), true).unwrap(),
            Err(SublatticeFailure::MissingBound { bound: "1".into() })
        );
    }

    fn labeled(elements: &[&str], covers: &[(&str, &str)]) -> (FiniteLattice, FrameLabeling) {
        let p = poset(elements, covers, "o", "i").unwrap();
        let l = lattice_from_order(&p).unwrap();
        let mut labels = FrameLabeling::new();
        for &e in elements {
            if let Ok(r) = e.parse::<Role>() {
                labels.insert(e.into(), r).unwrap();
            }
        }
        (l, labels)
    }

    #[test]
    fn glue_two_chains() {
        let c1 = labeled(&["o", "a(p)", "b(p)", "i"], &[("o", "a(p)"), ("a(p)", "b(p)"), ("b(p)", "i")]);
        let c2 = labeled(&["o", "a(q)", "b(q)", "i"], &[("o", "a(q)"), ("a(q)", "b(q)"), ("b(q)", "i")]);
        let (p, labels) = glue_orders(&[c1.clone(), c2]).unwrap();
        assert_eq!(p.len(), 6);
        assert_eq!(labels.len(), 6);
        let (ap, aq) = (p.index_of(&"a(p)".into()).unwrap(), p.index_of(&"b(q)".into()).unwrap());
        assert!(!p.comparable(ap, aq));
        let (alone, _) = glue_orders(std::slice::from_ref(&c1)).unwrap();
        assert_eq!(&alone, c1.0.order());
    }

    #[test]
    fn glue_closes_across_shared_elements() {
        // two parts sharing a(q),b(q): a(p) < a(q) in one, a(q) < a(r) in the other
        let g1 = labeled(&["o", "a(p)", "a(q)", "i"], &[("o", "a(p)"), ("a(p)", "a(q)"), ("a(q)", "i")]);
        let g2 = labeled(&["o", "a(q)", "a(r)", "i"], &[("o", "a(q)"), ("a(q)", "a(r)"), ("a(r)", "i")]);
        let (p, _) = glue_orders(&[g1, g2]).unwrap();
        assert!(p.le_ids(&"a(p)".into(), &"a(r)".into()).unwrap());
    }

    #[test]
    fn glue_reports_cycles() {
        let g1 = labeled(&["o", "a(p)", "a(q)", "i"], &[("o", "a(p)"), ("a(p)", "a(q)"), ("a(q)", "i")]);
        let g2 = labeled(&["o", "a(p)", "a(q)", "i"], &[("o", "a(q)"), ("a(q)", "a(p)"), ("a(p)", "i")]);
        assert!(matches!(glue_orders(&[g1, g2]), Err(LatticeError::Order(OrderError::Cycle(_)))));
    }

    #[test]
    fn slim_pentagon() {
        let l = n5();
        let s = slim(&l, &"b".into()).unwrap();
        assert_eq!(s.lattice.len(), 4);
        assert_eq!(s.lower_cover, ElementId::from("a"));
        assert!(s.remapped.is_empty());
        assert!(matches!(slim(&l, &"i".into()), Err(LatticeError::SlimBound(_))));
        let two_covers = lattice_from_order(
            &poset(&["0", "p", "q", "r", "1"], &[("0", "p"), ("0", "q"), ("p", "r"), ("q", "r"), ("r", "1")], "0", "1").unwrap(),
        )
        .unwrap();
        assert!(matches!(slim(&two_covers, &"r".into()), Err(LatticeError::JoinReducible { .. })));
    }

    #[test]
    fn slim_remaps_meets() {
        // o < s < x < u, v < i with u ∧ v = x; deleting x sends u ∧ v to s
        let p = poset(
            &["o", "s", "x", "u", "v", "i"],
            &[("o", "s"), ("s", "x"), ("x", "u"), ("x", "v"), ("u", "i"), ("v", "i")],
            "o",
            "i",
        )
        .unwrap();
        let l = lattice_from_order(&p).unwrap();
        let s = slim(&l, &"x".into()).unwrap();
        assert_eq!(s.remapped, vec![("u".into(), "v".into())]);
        assert_eq!(s.lattice.ops_eval(&"u".into(), &"v".into()).unwrap().1, ElementId::from("s"));
        // the slimmed carrier is not meet-closed in the original
        let carrier: BTreeSet<ElementId> = s.lattice.order().elements().iter().cloned().collect();
        assert!(is_sublattice(&l, &carrier, true).unwrap().is_err());
    }

    #[test]
    fn json_roundtrip() {
        let (l, labels) = labeled(&["o", "a(p)", "b(p)", "i"], &[("o", "a(p)"), ("a(p)", "b(p)"), ("b(p)", "i")]);
        let j = LatticeJson::new(&l, &labels);
        let text = serde_json::to_string(&j).unwrap();
        let (l2, labels2) = serde_json::from_str::<LatticeJson>(&text).unwrap().into_lattice().unwrap();
        assert_eq!(l, l2);
        assert_eq!(labels, labels2);
    }
}
