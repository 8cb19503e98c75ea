//! Finite bounded ordered sets.

mod downsets;
mod glue;
mod iso;
mod map;
mod relation;

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use downsets::{nonempty_down_sets, DownSetFamily};
pub use glue::{glue_bounds, GluedPoset};
pub use iso::order_isomorphism;
pub use map::{validate_map, Check, IsotoneMap, MapFlags, MapJson, MapReport};
pub use relation::Relation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error("element identifiers must be nonempty")]
    EmptyId,
    #[error("duplicate element `{0}`")]
    DuplicateElement(ElementId),
    #[error("unknown element `{0}`")]
    UnknownElement(ElementId),
    #[error("relation is not antisymmetric; cycle {}", format_ids(.0))]
    Cycle(Vec<ElementId>),
    #[error("`{bottom}` is not below `{witness}`")]
    NotBottom { bottom: ElementId, witness: ElementId },
    #[error("`{witness}` is not below `{top}`")]
    NotTop { top: ElementId, witness: ElementId },
    #[error("bottom and top coincide (`{0}`)")]
    DegenerateBounds(ElementId),
    #[error("map: {0}")]
    Map(String),
}

pub(crate) fn format_ids(ids: &[ElementId]) -> String {
    let names: Vec<&str> = ids.iter().map(|id| id.as_str()).collect();
    format!("[{}]", names.join(", "))
}

/// Element identifier. Ordered lexicographically, which fixes every
/// iteration order in the crate.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct ElementId(String);

impl ElementId {
    pub fn new(token: impl Into<String>) -> Result<Self, OrderError> {
        let token = token.into();
        if token.is_empty() {
            return Err(OrderError::EmptyId);
        }
        Ok(ElementId(token))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl TryFrom<String> for ElementId {
    type Error = OrderError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        ElementId::new(s)
    }
}

impl From<ElementId> for String {
    fn from(id: ElementId) -> String {
        id.0
    }
}

impl From<&str> for ElementId {
    /// Panics on the empty string; intended for literals.
    fn from(s: &str) -> Self {
        ElementId::new(s).expect("element id literal must be nonempty")
    }
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// A finite ordered set with distinct least and greatest elements.
///
/// Elements are stored sorted by id; all index-based accessors refer to that
/// order.
#[derive(Clone, PartialEq, Eq)]
pub struct BoundedPoset {
    elements: Vec<ElementId>,
    le: Relation,
    bottom: usize,
    top: usize,
}

impl BoundedPoset {
    /// Builds a bounded poset from any generating relation; the
    /// reflexive-transitive closure is taken.
    pub fn build<I, R>(
        elements: I,
        relation: R,
        bottom: &ElementId,
        top: &ElementId,
    ) -> Result<Self, OrderError>
    where
        I: IntoIterator<Item = ElementId>,
        R: IntoIterator<Item = (ElementId, ElementId)>,
    {
        let mut elements: Vec<ElementId> = elements.into_iter().collect();
        elements.sort();
        if let Some(w) = elements.windows(2).find(|w| w[0] == w[1]) {
            return Err(OrderError::DuplicateElement(w[0].clone()));
        }
        let index = |id: &ElementId| {
            elements
                .binary_search(id)
                .map_err(|_| OrderError::UnknownElement(id.clone()))
        };
        let n = elements.len();
        let mut edges = Relation::new(n);
        for (a, b) in relation {
            edges.set(index(&a)?, index(&b)?);
        }
        let bottom = index(bottom)?;
        let top = index(top)?;
        Self::from_generators(elements, edges, bottom, top)
    }

    /// Index-level constructor: `edges` generates the order.
    pub fn from_generators(
        elements: Vec<ElementId>,
        edges: Relation,
        bottom: usize,
        top: usize,
    ) -> Result<Self, OrderError> {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        let mut le = edges.clone();
        le.close();
        let n = elements.len();
        for x in 0..n {
            for y in le.successors(x).collect::<Vec<_>>() {
                if y != x && le.get(y, x) {
                    let cycle = find_cycle(&edges, x, y)
                        .into_iter()
                        .map(|i| elements[i].clone())
                        .collect();
                    return Err(OrderError::Cycle(cycle));
                }
            }
        }
        if bottom == top {
            return Err(OrderError::DegenerateBounds(elements[bottom].clone()));
        }
        for x in 0..n {
            if !le.get(bottom, x) {
                return Err(OrderError::NotBottom {
                    bottom: elements[bottom].clone(),
                    witness: elements[x].clone(),
                });
            }
            if !le.get(x, top) {
                return Err(OrderError::NotTop {
                    top: elements[top].clone(),
                    witness: elements[x].clone(),
                });
            }
        }
        Ok(BoundedPoset {
            elements,
            le,
            bottom,
            top,
        })
    }

    /// The `n`-element chain `0 < c1 < ... < 1`.
    pub fn chain(n: usize) -> Self {
        assert!(n >= 2, "a bounded chain needs at least two elements");
        let mut ids: Vec<ElementId> = vec!["0".into()];
        ids.extend((1..n - 1).map(|k| ElementId::new(format!("c{k}")).unwrap()));
        ids.push("1".into());
        let rel: Vec<_> = ids.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect();
        let (b, t) = (ids[0].clone(), ids[n - 1].clone());
        BoundedPoset::build(ids, rel, &b, &t).unwrap()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[ElementId] {
        &self.elements
    }

    pub fn id(&self, x: usize) -> &ElementId {
        &self.elements[x]
    }

    pub fn index_of(&self, id: &ElementId) -> Option<usize> {
        self.elements.binary_search(id).ok()
    }

    pub fn require(&self, id: &ElementId) -> Result<usize, OrderError> {
        self.index_of(id)
            .ok_or_else(|| OrderError::UnknownElement(id.clone()))
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn bottom_id(&self) -> &ElementId {
        &self.elements[self.bottom]
    }

    pub fn top_id(&self) -> &ElementId {
        &self.elements[self.top]
    }

    #[inline]
    pub fn le(&self, x: usize, y: usize) -> bool {
        self.le.get(x, y)
    }

    #[inline]
    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.le.get(x, y)
    }

    pub fn comparable(&self, x: usize, y: usize) -> bool {
        self.le(x, y) || self.le(y, x)
    }

    pub fn le_ids(&self, a: &ElementId, b: &ElementId) -> Result<bool, OrderError> {
        Ok(self.le(self.require(a)?, self.require(b)?))
    }

    pub fn relation(&self) -> &Relation {
        &self.le
    }

    /// All `(x, y)` with `x <= y`, as ids.
    pub fn order_pairs(&self) -> Vec<(ElementId, ElementId)> {
        (0..self.len())
            .flat_map(|x| self.le.successors(x).map(move |y| (x, y)))
            .map(|(x, y)| (self.elements[x].clone(), self.elements[y].clone()))
            .collect()
    }

    /// Index pairs `(x, y)` with `x` covered by `y`.
    pub fn cover_indices(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for x in 0..n {
            for y in self.le.successors(x) {
                if y == x {
                    continue;
                }
                let between = (0..n).any(|z| z != x && z != y && self.le(x, z) && self.le(z, y));
                if !between {
                    out.push((x, y));
                }
            }
        }
        out
    }

    pub fn covers(&self) -> Vec<(ElementId, ElementId)> {
        self.cover_indices()
            .into_iter()
            .map(|(x, y)| (self.elements[x].clone(), self.elements[y].clone()))
            .collect()
    }

    pub fn lower_covers(&self, x: usize) -> Vec<usize> {
        let below: Vec<usize> = (0..self.len()).filter(|&y| self.lt(y, x)).collect();
        below
            .iter()
            .copied()
            .filter(|&y| !below.iter().any(|&z| z != y && self.lt(y, z)))
            .collect()
    }

    pub fn interior_indices(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&x| x != self.bottom && x != self.top)
            .collect()
    }

    /// Sub-order induced on `keep` (index list); bounds must be kept.
    pub fn restrict(&self, keep: &[usize]) -> Result<BoundedPoset, OrderError> {
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let elements = keep.iter().map(|&x| self.elements[x].clone()).collect();
        let rel = self.le.restrict(&keep);
        let pos = |x: usize| {
            keep.binary_search(&x)
                .map_err(|_| OrderError::UnknownElement(self.elements[x].clone()))
        };
        BoundedPoset::from_generators(elements, rel, pos(self.bottom)?, pos(self.top)?)
    }

    /// Length of the longest chain from the bottom to each element.
    pub fn heights(&self) -> Vec<usize> {
        let order = self.linear_extension();
        let mut h = vec![0; self.len()];
        for &x in &order {
            for y in self.le.successors(x) {
                if y != x {
                    h[y] = h[y].max(h[x] + 1);
                }
            }
        }
        h
    }

    /// Elements sorted so that every element comes after all elements
    /// below it; ties broken by index.
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&x| (self.le.transpose_count(x), x));
        order
    }
}

impl Relation {
    /// Number of `y` with `y R x`.
    fn transpose_count(&self, x: usize) -> usize {
        (0..self.size()).filter(|&y| self.get(y, x)).count()
    }
}

fn find_cycle(edges: &Relation, x: usize, y: usize) -> Vec<usize> {
    let mut path = shortest_path(edges, x, y).unwrap_or_else(|| vec![x, y]);
    let back = shortest_path(edges, y, x).unwrap_or_else(|| vec![y, x]);
    path.extend(back.into_iter().skip(1));
    path.pop();
    path
}

fn shortest_path(edges: &Relation, from: usize, to: usize) -> Option<Vec<usize>> {
    let n = edges.size();
    let mut prev = vec![usize::MAX; n];
    let mut queue = VecDeque::from([from]);
    prev[from] = from;
    while let Some(x) = queue.pop_front() {
        if x == to {
            break;
        }
        for y in edges.successors(x) {
            if prev[y] == usize::MAX {
                prev[y] = x;
                queue.push_back(y);
            }
        }
    }
    if prev[to] == usize::MAX {
        return None;
    }
    let mut path = vec![to];
    let mut cur = to;
    while cur != from {
        cur = prev[cur];
        path.push(cur);
    }
    path.reverse();
    Some(path)
}

impl fmt::Debug for BoundedPoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BoundedPoset")
            .field("elements", &self.elements)
            .field("covers", &self.covers())
            .field("bottom", self.bottom_id())
            .field("top", self.top_id())
            .finish()
    }
}

/// The interior `P - {0,1}` and its isolated elements (those comparable to
/// no other interior element).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InteriorSplit {
    pub interior: BTreeSet<ElementId>,
    pub isolated: BTreeSet<ElementId>,
}

pub fn classify_interior(p: &BoundedPoset) -> InteriorSplit {
    let inner = p.interior_indices();
    let isolated = inner
        .iter()
        .copied()
        .filter(|&x| inner.iter().all(|&y| y == x || !p.comparable(x, y)))
        .map(|x| p.id(x).clone())
        .collect();
    InteriorSplit {
        interior: inner.iter().map(|&x| p.id(x).clone()).collect(),
        isolated,
    }
}

/// Serialized form: `{"elements":[...], "le":[["a","b"],...], "bottom":"0", "top":"1"}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetJson {
    pub elements: Vec<ElementId>,
    pub le: Vec<(ElementId, ElementId)>,
    pub bottom: ElementId,
    pub top: ElementId,
}

impl PosetJson {
    pub fn into_poset(self) -> Result<BoundedPoset, OrderError> {
        BoundedPoset::build(self.elements, self.le, &self.bottom, &self.top)
    }
}

impl From<&BoundedPoset> for PosetJson {
    /// Emits the cover relation, which regenerates the order.
    fn from(p: &BoundedPoset) -> Self {
        PosetJson {
            elements: p.elements().to_vec(),
            le: p.covers(),
            bottom: p.bottom_id().clone(),
            top: p.top_id().clone(),
        }
    }
}

impl Serialize for BoundedPoset {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PosetJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for BoundedPoset {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        PosetJson::deserialize(d)?
            .into_poset()
            .map_err(serde::de::Error::custom)
    }
}

/// Convenience constructor used throughout tests and fixtures.
pub fn poset(elements: &[&str], le: &[(&str, &str)], bottom: &str, top: &str) -> Result<BoundedPoset, OrderError> {
    BoundedPoset::build(
        elements.iter().map(|&e| ElementId::new(e)).collect::<Result<Vec<_>, _>>()?,
        le.iter().map(|&(a, b)| (ElementId::from(a), ElementId::from(b))),
        &ElementId::new(bottom)?,
        &ElementId::new(top)?,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(v: &[&str]) -> BTreeSet<ElementId> {
        v.iter().map(|&s| ElementId::from(s)).collect()
    }

    #[test]
    fn two_chain() {
        let p = poset(&["0", "1"], &[("0", "1")], "0", "1").unwrap();
        assert_eq!(p.len(), 2);
        assert!(p.le(p.bottom(), p.top()));
    }

    #[test]
    fn three_chain_gets_transitive_pair() {
        let p = poset(&["0", "p", "1"], &[("0", "p"), ("p", "1")], "0", "1").unwrap();
        assert!(p.le_ids(&"0".into(), &"1".into()).unwrap());
        assert_eq!(p.order_pairs().len(), 6);
    }

    #[test]
    fn cycle_is_reported() {
        let err = poset(&["0", "1"], &[("0", "1"), ("1", "0")], "0", "1").unwrap_err();
        match err {
            OrderError::Cycle(c) => assert_eq!(ids_of(&c), ids(&["0", "1"])),
            other => panic!("unexpected {other:?}"),
        }
    }

    fn ids_of(v: &[ElementId]) -> BTreeSet<ElementId> {
        v.iter().cloned().collect()
    }

    #[test]
    fn longer_cycle_witness() {
        let err = poset(
            &["0", "a", "b", "c", "1"],
            &[("0", "a"), ("a", "b"), ("b", "c"), ("c", "a"), ("c", "1")],
            "0",
            "1",
        )
        .unwrap_err();
        match err {
            OrderError::Cycle(c) => assert_eq!(ids_of(&c), ids(&["a", "b", "c"])),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bounds_are_checked() {
        assert!(matches!(
            poset(&["0", "a", "1"], &[("a", "1"), ("0", "1")], "0", "1"),
            Err(OrderError::NotBottom { .. })
        ));
        assert!(matches!(
            poset(&["0", "a", "1"], &[("0", "a"), ("0", "1")], "0", "1"),
            Err(OrderError::NotTop { .. })
        ));
        assert!(matches!(
            poset(&["0"], &[], "0", "0"),
            Err(OrderError::DegenerateBounds(_))
        ));
        assert!(matches!(
            poset(&["0", "0", "1"], &[], "0", "1"),
            Err(OrderError::DuplicateElement(_))
        ));
        assert!(matches!(
            poset(&["0", "1"], &[("0", "x")], "0", "1"),
            Err(OrderError::UnknownElement(_))
        ));
        assert!(ElementId::new("").is_err());
    }

    #[test]
    fn interior_classification() {
        let two = BoundedPoset::chain(2);
        let split = classify_interior(&two);
        assert!(split.interior.is_empty() && split.isolated.is_empty());

        let diamond = poset(
            &["0", "p", "q", "1"],
            &[("0", "p"), ("0", "q"), ("p", "1"), ("q", "1")],
            "0",
            "1",
        )
        .unwrap();
        let split = classify_interior(&diamond);
        assert_eq!(split.interior, ids(&["p", "q"]));
        assert_eq!(split.isolated, ids(&["p", "q"]));

        let four = poset(
            &["0", "p", "q", "1"],
            &[("0", "p"), ("p", "q"), ("q", "1")],
            "0",
            "1",
        )
        .unwrap();
        let split = classify_interior(&four);
        assert_eq!(split.interior, ids(&["p", "q"]));
        assert!(split.isolated.is_empty());
    }

    #[test]
    fn closure_is_idempotent() {
        let p = poset(
            &["0", "a", "b", "c", "1"],
            &[("0", "a"), ("a", "b"), ("0", "c"), ("b", "1"), ("c", "1")],
            "0",
            "1",
        )
        .unwrap();
        let again = BoundedPoset::build(
            p.elements().to_vec(),
            p.order_pairs(),
            p.bottom_id(),
            p.top_id(),
        )
        .unwrap();
        assert_eq!(p, again);
    }

    #[test]
    fn json_roundtrip() {
        let text = r#"{"elements":["0","p","1"],"le":[["0","p"],["p","1"]],"bottom":"0","top":"1"}"#;
        let p: BoundedPoset = serde_json::from_str(text).unwrap();
        let back = serde_json::to_string(&p).unwrap();
        let q: BoundedPoset = serde_json::from_str(&back).unwrap();
        assert_eq!(p, q);
        assert!(serde_json::from_str::<BoundedPoset>(r#"{"elements":["0","1"],"le":[],"bottom":"0","top":"1"}"#).is_err());
    }
}
