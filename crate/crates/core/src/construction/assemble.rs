use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{check_ids, frame, ConstructionError, Gadget};
use crate::congruence::{ext_map, ExtMap};
use crate::lattice::{glue_orders, is_sublattice, lattice_from_order, slim, FiniteLattice, FrameLabeling, Role};
use crate::order::{glue_bounds, order_isomorphism, validate_map, BoundedPoset, ElementId, GluedPoset, IsotoneMap, MapFlags};

/// One inserted copy of the gadget, keyed by its pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetInstance {
    pub p: ElementId,
    pub q: ElementId,
    pub elements: BTreeSet<ElementId>,
}

impl GadgetInstance {
    fn designated(&self) -> [ElementId; 2] {
        [self.p.clone(), self.q.clone()]
    }

    fn shares_designated(&self, other: &GadgetInstance) -> bool {
        let mine = self.designated();
        other.designated().iter().any(|e| mine.contains(e))
    }
}

/// How many cases each post-assembly assertion examined.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssemblyChecks {
    /// Instances checked to be sublattices with their own order.
    pub a1_instances: usize,
    /// Element pairs from designated-disjoint instances checked complementary.
    pub a2_pairs: usize,
    /// Unions of overlapping instances checked closed.
    pub a3_unions: usize,
}

/// `K` with `Princ K ≅ P`.
#[derive(Debug, Clone)]
pub struct Theorem1Build {
    pub input: BoundedPoset,
    pub lattice: FiniteLattice,
    pub labels: FrameLabeling,
    /// Interior element ↦ `(a(p), b(p))`.
    pub intervals: BTreeMap<ElementId, (ElementId, ElementId)>,
    pub gadgets: Vec<GadgetInstance>,
    pub checks: AssemblyChecks,
}

/// One deletion performed while slimming `L⁺`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlimRecord {
    pub x: ElementId,
    pub lower_cover: ElementId,
    /// Pairs whose meet was `x` and became `lower_cover`.
    pub remapped: Vec<(ElementId, ElementId)>,
}

/// `L` and its bounded sublattice `K` realizing `ψ` as `ext(K, L)`.
#[derive(Debug, Clone)]
pub struct Theorem2Build {
    pub psi: IsotoneMap,
    pub r: GluedPoset,
    pub l_plus: FiniteLattice,
    pub l_plus_labels: FrameLabeling,
    pub gadgets: Vec<GadgetInstance>,
    /// `(p, ψp)` in glued ids, in slimming order.
    pub links: Vec<(ElementId, ElementId)>,
    pub slims: Vec<SlimRecord>,
    pub lattice: FiniteLattice,
    pub labels: FrameLabeling,
    pub k: BTreeSet<ElementId>,
    pub ext: ExtMap,
    pub checks: AssemblyChecks,
}

impl Theorem2Build {
    pub fn p(&self) -> &BoundedPoset {
        self.psi.domain()
    }

    pub fn q(&self) -> &BoundedPoset {
        self.psi.codomain()
    }

    /// `(a(p), b(p))` in `L` for an interior element of `P` (`left`) or `Q`.
    pub fn interval(&self, left: bool, x: &ElementId) -> Option<(ElementId, ElementId)> {
        let map = if left { &self.r.left } else { &self.r.right };
        let r = map.get(x)?;
        Some((
            self.labels.element(&Role::A(r.clone()))?.clone(),
            self.labels.element(&Role::B(r.clone()))?.clone(),
        ))
    }
}

fn assertion(name: &'static str, detail: String) -> ConstructionError {
    ConstructionError::Assertion { name, detail }
}

/// Glues the frame and gadget copies, certifies the lattice and runs A1–A3.
fn glue(
    base: (FiniteLattice, FrameLabeling),
    template: &Gadget,
    pairs: &[(ElementId, ElementId)],
) -> Result<(FiniteLattice, FrameLabeling, Vec<GadgetInstance>, AssemblyChecks), ConstructionError> {
    let mut parts = vec![base];
    let mut instances = Vec::new();
    for (p, q) in pairs {
        let g = template.instantiate(p, q)?;
        instances.push(GadgetInstance {
            p: p.clone(),
            q: q.clone(),
            elements: g.lattice.order().elements().iter().cloned().collect(),
        });
        parts.push((g.lattice, g.labels));
    }
    let (order, labels) = glue_orders(&parts)?;
    let lattice = lattice_from_order(&order)?;
    let mut checks = AssemblyChecks::default();

    // A1: each copy is a sublattice carrying exactly its own order
    for (inst, (part, _)) in instances.iter().zip(&parts[1..]) {
        if let Err(f) = is_sublattice(&lattice, &inst.elements, true)? {
            return Err(assertion("A1", format!("gadget ({},{}): {f}", inst.p, inst.q)));
        }
        let po = part.order();
        for a in 0..po.len() {
            for b in 0..po.len() {
                let (x, y) = (lattice.require(po.id(a))?, lattice.require(po.id(b))?);
                if lattice.le(x, y) != po.le(a, b) {
                    return Err(assertion(
                        "A1",
                        format!("gadget ({},{}): order between {} and {} changed", inst.p, inst.q, po.id(a), po.id(b)),
                    ));
                }
            }
        }
        checks.a1_instances += 1;
    }

    let (o, i) = (lattice.bottom(), lattice.top());
    let inner = |inst: &GadgetInstance| -> Result<Vec<usize>, ConstructionError> {
        let mut v = Vec::new();
        for e in &inst.elements {
            let x = lattice.require(e)?;
            if x != o && x != i {
                v.push(x);
            }
        }
        Ok(v)
    };
    for (n, s) in instances.iter().enumerate() {
        for t in &instances[n + 1..] {
            if s.shares_designated(t) {
                // A3
                let union: BTreeSet<ElementId> = s.elements.union(&t.elements).cloned().collect();
                if let Err(f) = is_sublattice(&lattice, &union, true)? {
                    return Err(assertion(
                        "A3",
                        format!("gadgets ({},{}) and ({},{}): {f}", s.p, s.q, t.p, t.q),
                    ));
                }
                checks.a3_unions += 1;
            } else {
                // A2
                for &x in &inner(s)? {
                    for &y in &inner(t)? {
                        if lattice.join(x, y) != i || lattice.meet(x, y) != o {
                            return Err(assertion(
                                "A2",
                                format!("{} and {} are not complements", lattice.id(x), lattice.id(y)),
                            ));
                        }
                        checks.a2_pairs += 1;
                    }
                }
            }
        }
    }
    Ok((lattice, labels, instances, checks))
}

/// Comparable interior pairs `p < q` in lexicographic order.
fn comparable_pairs(p: &BoundedPoset, map: impl Fn(&ElementId) -> ElementId) -> Vec<(ElementId, ElementId)> {
    let inner = p.interior_indices();
    let mut out = Vec::new();
    for &x in &inner {
        for &y in &inner {
            if p.lt(x, y) {
                out.push((map(p.id(x)), map(p.id(y))));
            }
        }
    }
    out.sort();
    out
}

/// Builds `K` for `P`: the frame with a copy of `template` for every
/// comparable interior pair.
pub fn assemble_k(p: &BoundedPoset, template: &Gadget) -> Result<Theorem1Build, ConstructionError> {
    let base = frame(p)?;
    let pairs = comparable_pairs(p, Clone::clone);
    let (lattice, labels, gadgets, checks) = glue(base, template, &pairs)?;
    let intervals = p
        .interior_indices()
        .into_iter()
        .map(|x| {
            let id = p.id(x).clone();
            let a = Role::A(id.clone()).id();
            let b = Role::B(id.clone()).id();
            (id, (a, b))
        })
        .collect();
    Ok(Theorem1Build {
        input: p.clone(),
        lattice,
        labels,
        intervals,
        gadgets,
        checks,
    })
}

/// Builds `L⁺` over `R = P ⊔ Q`, slims the link gadgets to get `L`, and
/// computes `ext(K, L)` for the copy `K` of the `P` construction.
pub fn assemble_l(psi: &IsotoneMap, template: &Gadget) -> Result<Theorem2Build, ConstructionError> {
    let (p, q) = (psi.domain(), psi.codomain());
    check_ids(p)?;
    check_ids(q)?;
    let report = validate_map(psi, MapFlags::ALL);
    if !report.all_passed() {
        return Err(ConstructionError::InvalidMap(
            serde_json::to_string(&report).expect("report serializes"),
        ));
    }
    for x in p.interior_indices() {
        let y = psi.image_index(x);
        if y == q.top() {
            return Err(ConstructionError::UnsupportedTarget {
                p: p.id(x).clone(),
                image: q.id(y).clone(),
            });
        }
    }

    let r = glue_bounds(p, "P", q, "Q")?;
    let to_r_left = |e: &ElementId| r.left[e].clone();
    let to_r_right = |e: &ElementId| r.right[e].clone();
    let mut links: Vec<(ElementId, ElementId)> = p
        .interior_indices()
        .into_iter()
        .map(|x| (to_r_left(p.id(x)), to_r_right(psi.image(p.id(x)).expect("total"))))
        .collect();
    links.sort();
    let p_pairs = comparable_pairs(p, to_r_left);
    let mut pairs = p_pairs.clone();
    pairs.extend(comparable_pairs(q, to_r_right));
    pairs.extend(links.iter().cloned());
    pairs.sort();

    let base = frame(&r.poset)?;
    let frame_r = base.0.clone();
    let (l_plus, l_plus_labels, gadgets, checks) = glue(base, template, &pairs)?;

    // Frame P sits in Frame R as a bounded sublattice
    let mut frame_p: BTreeSet<ElementId> = [Role::Bottom.id(), Role::Top.id()].into();
    if !p.interior_indices().is_empty() {
        frame_p.extend([Role::Guard0.id(), Role::Guard1.id()]);
        for x in p.interior_indices() {
            let id = to_r_left(p.id(x));
            frame_p.extend([Role::A(id.clone()).id(), Role::B(id).id()]);
        }
    }
    if let Err(f) = is_sublattice(&frame_r, &frame_p, true)? {
        return Err(assertion("frame", format!("Frame P is not a bounded sublattice of Frame R: {f}")));
    }
    let keep: Vec<usize> = frame_p.iter().map(|e| frame_r.require(e)).collect::<Result<_, _>>()?;
    let (own, _) = frame(p)?;
    if order_isomorphism(own.order(), frame_r.sublattice(&keep)?.order()).is_none() {
        return Err(assertion("frame", "Frame P is not isomorphic to its copy in Frame R".into()));
    }

    let mut lattice = l_plus.clone();
    let mut labels = l_plus_labels.clone();
    let mut slims = Vec::new();
    for (a, b) in &links {
        let x = Role::X(a.clone(), b.clone()).id();
        let s = slim(&lattice, &x)?;
        slims.push(SlimRecord {
            x: x.clone(),
            lower_cover: s.lower_cover.clone(),
            remapped: s.remapped.clone(),
        });
        lattice = s.lattice;
    }
    let deleted: BTreeSet<&ElementId> = slims.iter().map(|s| &s.x).collect();
    let mut kept = FrameLabeling::new();
    for (e, role) in labels.iter() {
        if !deleted.contains(e) {
            kept.insert(e.clone(), role.clone()).expect("subset of a valid labeling");
        }
    }
    labels = kept;

    let mut k = frame_p;
    for g in &gadgets {
        if p_pairs.contains(&(g.p.clone(), g.q.clone())) {
            k.extend(g.elements.iter().cloned());
        }
    }
    if let Err(f) = is_sublattice(&lattice, &k, true)? {
        return Err(assertion("K", format!("K is not a bounded sublattice of L: {f}")));
    }
    let ext = ext_map(&lattice, &k)?;

    Ok(Theorem2Build {
        psi: psi.clone(),
        r,
        l_plus,
        l_plus_labels,
        gadgets,
        links,
        slims,
        lattice,
        labels,
        k,
        ext,
        checks,
    })
}
