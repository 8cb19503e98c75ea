//! Congruences of finite lattices.
//!
//! Principal congruences are computed by closing a single collapsed pair
//! under translations by join and meet with a union-find structure. The
//! whole congruence lattice is the join-closure of the principal ones.
//! [`brute_force_congruences`] is an independent partition-filtering oracle
//! for small lattices.

mod ext;
mod oracle;
mod projectivity;

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{FiniteLattice, FrameLabeling, LatticeError, Role, SublatticeFailure};
use crate::order::{BoundedPoset, ElementId};

pub use ext::{ext_map, ExtMap, ExtReport};
pub use oracle::{brute_force_congruences, brute_force_congruences_up_to, ORACLE_LIMIT};
pub use projectivity::{projectivity_witness, Transposition, DEFAULT_PROJECTIVITY_DEPTH};

/// Largest lattice accepted by [`enumerate_congruences`].
pub const ENUMERATION_LIMIT: usize = 200;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CongruenceError {
    #[error("lattice has {size} elements; limit is {limit}")]
    SizeGuard { size: usize, limit: usize },
    #[error("join of congruences is not compatible: {0}")]
    NotCompatible(String),
    #[error("con_L({x},{y}) differs from con_L({u},{v}) though both generate the same congruence of the sublattice")]
    WitnessDependence { x: ElementId, y: ElementId, u: ElementId, v: ElementId },
    #[error("not a bounded sublattice: {0}")]
    NotSublattice(SublatticeFailure),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// A partition of a lattice's carrier, stored as the index of the least
/// element of each element's block. Since element indices follow id order,
/// this is the canonical form (blocks sorted by least element).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Congruence {
    class: Vec<usize>,
}

impl Congruence {
    pub fn zero(n: usize) -> Self {
        Congruence {
            class: (0..n).collect(),
        }
    }

    pub fn one(n: usize) -> Self {
        Congruence { class: vec![0; n] }
    }

    /// Builds the canonical form from arbitrary block labels.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut first: HashMap<usize, usize> = HashMap::new();
        let class = labels
            .iter()
            .enumerate()
            .map(|(x, l)| *first.entry(*l).or_insert(x))
            .collect();
        Congruence { class }
    }

    pub fn len(&self) -> usize {
        self.class.len()
    }

    pub fn is_empty(&self) -> bool {
        self.class.is_empty()
    }

    #[inline]
    pub fn class_of(&self, x: usize) -> usize {
        self.class[x]
    }

    pub fn classes(&self) -> &[usize] {
        &self.class
    }

    #[inline]
    pub fn related(&self, x: usize, y: usize) -> bool {
        self.class[x] == self.class[y]
    }

    pub fn is_zero(&self) -> bool {
        self.class.iter().enumerate().all(|(x, &c)| c == x)
    }

    pub fn is_one(&self) -> bool {
        self.class.iter().all(|&c| c == 0)
    }

    pub fn block_count(&self) -> usize {
        self.class.iter().enumerate().filter(|&(x, &c)| c == x).count()
    }

    /// `self ≤ other` in the refinement order.
    pub fn refines(&self, other: &Congruence) -> bool {
        self.class
            .iter()
            .enumerate()
            .all(|(x, &r)| other.class[x] == other.class[r])
    }

    /// Blocks as index lists, sorted by least element.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut slot = vec![usize::MAX; self.len()];
        for (x, &r) in self.class.iter().enumerate() {
            if slot[r] == usize::MAX {
                slot[r] = blocks.len();
                blocks.push(Vec::new());
            }
            blocks[slot[r]].push(x);
        }
        blocks
    }

    pub fn block_ids(&self, lattice: &FiniteLattice) -> Vec<Vec<ElementId>> {
        self.blocks()
            .into_iter()
            .map(|b| b.into_iter().map(|x| lattice.id(x).clone()).collect())
            .collect()
    }

    pub fn to_json(&self, lattice: &FiniteLattice) -> CongruenceJson {
        CongruenceJson {
            blocks: self.block_ids(lattice),
        }
    }

    /// True when the block of `x` is `{x}`.
    pub fn is_singleton(&self, x: usize) -> bool {
        self.class[x] == x && !self.class.iter().enumerate().any(|(y, &c)| y != x && c == x)
    }
}

/// `{"blocks":[["o"],["a","b"],...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceJson {
    pub blocks: Vec<Vec<ElementId>>,
}

impl CongruenceJson {
    /// Reads a partition back; it must cover the carrier exactly and be
    /// compatible with the operations.
    pub fn into_congruence(self, lattice: &FiniteLattice) -> Result<Congruence, CongruenceError> {
        let mut labels = vec![usize::MAX; lattice.len()];
        for (k, block) in self.blocks.iter().enumerate() {
            for id in block {
                let x = lattice.require(id)?;
                if labels[x] != usize::MAX {
                    return Err(CongruenceError::NotCompatible(format!("`{id}` in two blocks")));
                }
                labels[x] = k;
            }
        }
        if let Some(x) = labels.iter().position(|&l| l == usize::MAX) {
            return Err(CongruenceError::NotCompatible(format!("`{}` in no block", lattice.id(x))));
        }
        let c = Congruence::from_labels(&labels);
        check_compatible(lattice, &c)?;
        Ok(c)
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Links the larger root under the smaller, so roots are block minima.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }

    fn into_congruence(mut self) -> Congruence {
        let n = self.parent.len();
        Congruence {
            class: (0..n).map(|x| self.find(x)).collect(),
        }
    }
}

/// Closes the equivalence generated by `seeds` under `(x,y) ↦ (x∨z, y∨z)`
/// and `(x,y) ↦ (x∧z, y∧z)`.
///
/// Translating only the pairs that caused a merge is enough: the
/// equivalence is generated by those pairs, and compatibility is preserved
/// under transitive closure.
fn close_pairs(lattice: &FiniteLattice, seeds: impl IntoIterator<Item = (usize, usize)>) -> Congruence {
    let n = lattice.len();
    let mut uf = UnionFind::new(n);
    let mut pending: Vec<(usize, usize)> = seeds.into_iter().collect();
    while let Some((x, y)) = pending.pop() {
        if !uf.union(x, y) {
            continue;
        }
        for z in 0..n {
            let (jx, jy) = (lattice.join(x, z), lattice.join(y, z));
            if jx != jy {
                pending.push((jx, jy));
            }
            let (mx, my) = (lattice.meet(x, z), lattice.meet(y, z));
            if mx != my {
                pending.push((mx, my));
            }
        }
    }
    uf.into_congruence()
}

/// The smallest congruence collapsing `a` and `b` (indices).
pub fn principal_congruence(lattice: &FiniteLattice, a: usize, b: usize) -> Congruence {
    close_pairs(lattice, [(a, b)])
}

/// [`principal_congruence`] by element id.
pub fn principal_congruence_ids(lattice: &FiniteLattice, a: &ElementId, b: &ElementId) -> Result<Congruence, CongruenceError> {
    Ok(principal_congruence(lattice, lattice.require(a)?, lattice.require(b)?))
}

/// Compatibility with both operations. Checking `(x, rep(x))` pairs
/// suffices since they generate the partition.
pub fn is_compatible(lattice: &FiniteLattice, c: &Congruence) -> bool {
    check_compatible(lattice, c).is_ok()
}

fn check_compatible(lattice: &FiniteLattice, c: &Congruence) -> Result<(), CongruenceError> {
    let n = lattice.len();
    for x in 0..n {
        let r = c.class_of(x);
        if r == x {
            continue;
        }
        for z in 0..n {
            if !c.related(lattice.join(x, z), lattice.join(r, z)) || !c.related(lattice.meet(x, z), lattice.meet(r, z)) {
                return Err(CongruenceError::NotCompatible(format!(
                    "`{}` ≡ `{}` but translation by `{}` separates them",
                    lattice.id(x),
                    lattice.id(r),
                    lattice.id(z)
                )));
            }
        }
    }
    Ok(())
}

/// The join of two congruences: the transitive closure of their union,
/// verified compatible.
pub fn join_congruences(lattice: &FiniteLattice, a: &Congruence, b: &Congruence) -> Result<Congruence, CongruenceError> {
    let c = join_unchecked(a, b);
    check_compatible(lattice, &c)?;
    Ok(c)
}

fn join_unchecked(a: &Congruence, b: &Congruence) -> Congruence {
    let mut uf = UnionFind::new(a.len());
    for x in 0..a.len() {
        uf.union(x, a.class_of(x));
        uf.union(x, b.class_of(x));
    }
    uf.into_congruence()
}

/// Per-member annotations of a [`CongruenceOrder`].
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Annotation {
    /// First pair (in index order) generating the member, if principal.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub principal: Option<(ElementId, ElementId)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bi: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub base: Option<Vec<ElementId>>,
}

/// A family of congruences of one lattice, ordered by refinement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongruenceOrder {
    members: Vec<Congruence>,
    annotations: Vec<Annotation>,
    index: HashMap<Congruence, usize>,
}

impl CongruenceOrder {
    /// Sorts members canonically: more blocks first, then by class vector.
    fn from_members(mut entries: Vec<(Congruence, Annotation)>) -> Self {
        entries.sort_by(|(a, _), (b, _)| b.block_count().cmp(&a.block_count()).then_with(|| a.cmp(b)));
        let index = entries.iter().enumerate().map(|(i, (c, _))| (c.clone(), i)).collect();
        let (members, annotations) = entries.into_iter().unzip();
        CongruenceOrder {
            members,
            annotations,
            index,
        }
    }

    pub fn members(&self) -> &[Congruence] {
        &self.members
    }

    pub fn annotations(&self) -> &[Annotation] {
        &self.annotations
    }

    pub fn annotations_mut(&mut self) -> &mut [Annotation] {
        &mut self.annotations
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn position(&self, c: &Congruence) -> Option<usize> {
        self.index.get(c).copied()
    }

    pub fn le(&self, i: usize, j: usize) -> bool {
        self.members[i].refines(&self.members[j])
    }

    pub fn zero(&self) -> Option<usize> {
        self.members.iter().position(Congruence::is_zero)
    }

    pub fn one(&self) -> Option<usize> {
        self.members.iter().position(Congruence::is_one)
    }

    /// Index pairs `(i, j)` with member `i` covered by member `j`.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j && self.le(i, j) && !(0..n).any(|k| k != i && k != j && self.le(i, k) && self.le(k, j)) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Same member set (the refinement order is then identical too).
    pub fn same_members(&self, other: &CongruenceOrder) -> bool {
        self.len() == other.len() && self.members.iter().all(|m| other.position(m).is_some())
    }

    /// The members as a bounded poset with ids `θ0, θ1, ...`; requires the
    /// family to contain zero and one.
    pub fn to_poset(&self) -> Option<BoundedPoset> {
        let ids: Vec<ElementId> = (0..self.len())
            .map(|i| ElementId::new(format!("θ{i:03}")).unwrap())
            .collect();
        let rel = self
            .covers()
            .into_iter()
            .map(|(i, j)| (ids[i].clone(), ids[j].clone()));
        let (z, o) = (self.zero()?, self.one()?);
        BoundedPoset::build(ids.clone(), rel, &ids[z], &ids[o]).ok()
    }

    pub fn to_json(&self, lattice: &FiniteLattice) -> CongruenceOrderJson {
        CongruenceOrderJson {
            members: self.members.iter().map(|m| m.to_json(lattice)).collect(),
            covers: self.covers(),
            annotations: self.annotations.clone(),
        }
    }
}

/// Members, refinement covers between member indices, and annotations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceOrderJson {
    pub members: Vec<CongruenceJson>,
    pub covers: Vec<(usize, usize)>,
    pub annotations: Vec<Annotation>,
}

fn guard(lattice: &FiniteLattice, limit: usize) -> Result<(), CongruenceError> {
    if lattice.len() > limit {
        return Err(CongruenceError::SizeGuard {
            size: lattice.len(),
            limit,
        });
    }
    Ok(())
}

/// All principal congruences with their first generating pair.
fn principal_table(lattice: &FiniteLattice) -> Vec<(Congruence, Annotation)> {
    let n = lattice.len();
    let mut seen: HashMap<Congruence, usize> = HashMap::new();
    let mut out: Vec<(Congruence, Annotation)> = Vec::new();
    let zero = Congruence::zero(n);
    seen.insert(zero.clone(), 0);
    let b = lattice.bottom();
    out.push((
        zero,
        Annotation {
            principal: Some((lattice.id(b).clone(), lattice.id(b).clone())),
            ..Annotation::default()
        },
    ));
    for x in 0..n {
        for y in x + 1..n {
            // con(x, y) = con(x ∧ y, x ∨ y); only comparable pairs need a closure
            if !lattice.le(x, y) && !lattice.le(y, x) {
                continue;
            }
            let c = principal_congruence(lattice, x, y);
            if !seen.contains_key(&c) {
                seen.insert(c.clone(), out.len());
                out.push((
                    c,
                    Annotation {
                        principal: Some((lattice.id(x).clone(), lattice.id(y).clone())),
                        ..Annotation::default()
                    },
                ));
            }
        }
    }
    out
}

/// `Princ L`: the principal congruences under refinement.
pub fn principal_order(lattice: &FiniteLattice) -> Result<CongruenceOrder, CongruenceError> {
    guard(lattice, ENUMERATION_LIMIT)?;
    Ok(CongruenceOrder::from_members(principal_table(lattice)))
}

/// `Con L`, generated as the join-closure of the principal congruences.
pub fn enumerate_congruences(lattice: &FiniteLattice) -> Result<CongruenceOrder, CongruenceError> {
    guard(lattice, ENUMERATION_LIMIT)?;
    let principals = principal_table(lattice);
    let generators: Vec<Congruence> = principals.iter().map(|(c, _)| c.clone()).collect();
    let mut seen: HashMap<Congruence, usize> = HashMap::new();
    let mut entries: Vec<(Congruence, Annotation)> = Vec::new();
    for (c, a) in principals {
        seen.insert(c.clone(), entries.len());
        entries.push((c, a));
    }
    let mut frontier = 0;
    while frontier < entries.len() {
        let current = entries[frontier].0.clone();
        frontier += 1;
        for g in &generators {
            if g.refines(&current) {
                continue;
            }
            let j = join_congruences(lattice, &current, g)?;
            if !seen.contains_key(&j) {
                seen.insert(j.clone(), entries.len());
                entries.push((j, Annotation::default()));
            }
        }
    }
    Ok(CongruenceOrder::from_members(entries))
}

/// Certificate returned for a bound-isolating congruence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseCertificate {
    /// `{p ∈ P⁻ : a(p) ≡ b(p)}`.
    pub base: BTreeSet<ElementId>,
    /// Whether `base` is down-closed in the interior of `P`.
    pub down_closed: bool,
}

/// Bound isolation: nonzero, with `{o}` and `{i}` singleton blocks.
pub fn is_bound_isolating(lattice: &FiniteLattice, c: &Congruence) -> bool {
    !c.is_zero() && c.is_singleton(lattice.bottom()) && c.is_singleton(lattice.top())
}

/// For a BI congruence of a lattice labeled with intervals `[a(p), b(p)]`,
/// the set of interior elements of `p` whose interval is collapsed.
/// Returns `None` when `c` is not BI.
pub fn bi_and_base(
    lattice: &FiniteLattice,
    labels: &FrameLabeling,
    p: &BoundedPoset,
    c: &Congruence,
) -> Result<Option<BaseCertificate>, CongruenceError> {
    if !is_bound_isolating(lattice, c) {
        return Ok(None);
    }
    let mut base = BTreeSet::new();
    for x in p.interior_indices() {
        let id = p.id(x);
        let missing = || LatticeError::Labels(format!("no interval labels for `{id}`"));
        let a = labels.element(&Role::A(id.clone())).ok_or_else(missing)?;
        let b = labels.element(&Role::B(id.clone())).ok_or_else(missing)?;
        if c.related(lattice.require(a)?, lattice.require(b)?) {
            base.insert(id.clone());
        }
    }
    let down_closed = base.iter().all(|q| {
        let qi = p.index_of(q).unwrap();
        p.interior_indices()
            .into_iter()
            .all(|r| !p.le(r, qi) || base.contains(p.id(r)))
    });
    Ok(Some(BaseCertificate { base, down_closed }))
}
