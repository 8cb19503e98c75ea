use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::ConstructionError;
use crate::congruence::{brute_force_congruences_up_to, is_bound_isolating, principal_congruence, Congruence, CongruenceOrder};
use crate::lattice::{lattice_from_order, slim, FiniteLattice, FrameLabeling, LatticeJson, Role};
use crate::order::{BoundedPoset, ElementId};

/// A candidate `S(p<q)`: a lattice whose elements carry roles for the pair
/// `(p, q)`.
#[derive(Debug, Clone)]
pub struct Gadget {
    pub lattice: FiniteLattice,
    pub labels: FrameLabeling,
    pub p: ElementId,
    pub q: ElementId,
}

impl Gadget {
    pub fn new(lattice: FiniteLattice, labels: FrameLabeling, p: ElementId, q: ElementId) -> Self {
        Gadget { lattice, labels, p, q }
    }

    /// Index of the element playing `role`.
    pub fn designated(&self, role: &Role) -> Option<usize> {
        self.labels.element(role).and_then(|id| self.lattice.index_of(id))
    }

    pub fn x(&self) -> Option<&ElementId> {
        self.labels.element(&Role::X(self.p.clone(), self.q.clone()))
    }

    /// Fresh copy for the pair `(p, q)`. Every element must carry a role;
    /// new ids are the renamed role strings.
    pub fn instantiate(&self, p: &ElementId, q: &ElementId) -> Result<Gadget, ConstructionError> {
        let rename = |e: &ElementId| {
            if *e == self.p {
                p.clone()
            } else if *e == self.q {
                q.clone()
            } else {
                e.clone()
            }
        };
        let order = self.lattice.order();
        let mut labels = FrameLabeling::new();
        let mut new_ids = Vec::with_capacity(order.len());
        for id in order.elements() {
            let role = self
                .labels
                .role(id)
                .ok_or_else(|| ConstructionError::Unlabeled(id.clone()))?
                .rename(rename);
            new_ids.push(labels.insert_canonical(role));
        }
        let edges = order
            .cover_indices()
            .into_iter()
            .map(|(a, b)| (new_ids[a].clone(), new_ids[b].clone()));
        let poset = BoundedPoset::build(
            new_ids.clone(),
            edges,
            &new_ids[order.bottom()],
            &new_ids[order.top()],
        )?;
        Ok(Gadget::new(lattice_from_order(&poset)?, labels, p.clone(), q.clone()))
    }

    pub fn to_json(&self) -> GadgetJson {
        GadgetJson {
            p: self.p.clone(),
            q: self.q.clone(),
            lattice: LatticeJson::new(&self.lattice, &self.labels),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetJson {
    pub p: ElementId,
    pub q: ElementId,
    pub lattice: LatticeJson,
}

impl GadgetJson {
    pub fn into_gadget(self) -> Result<Gadget, ConstructionError> {
        let (lattice, labels) = self.lattice.into_lattice()?;
        Ok(Gadget::new(lattice, labels, self.p, self.q))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContractItem {
    pub passed: bool,
    pub detail: String,
}

impl ContractItem {
    fn pass(detail: impl Into<String>) -> Self {
        ContractItem {
            passed: true,
            detail: detail.into(),
        }
    }

    fn fail(detail: impl Into<String>) -> Self {
        ContractItem {
            passed: false,
            detail: detail.into(),
        }
    }

    fn skipped(on: &str) -> Self {
        ContractItem::fail(format!("not checked: {on} failed"))
    }
}

/// Contract items C1–C7 (there is no C5), plus the separate frame check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetReport {
    pub c1: ContractItem,
    pub c2: ContractItem,
    pub c3: ContractItem,
    pub c4: ContractItem,
    pub c6: ContractItem,
    pub c7: ContractItem,
    /// `a(p) ≺ b(p)`, `a(q) ≺ b(q)`, and the cross pairs between the two
    /// chains are complementary.
    pub frame: ContractItem,
    /// Whether the congruences were cross-checked by the brute-force oracle.
    pub oracle_checked: bool,
}

impl GadgetReport {
    pub fn passes_contract(&self) -> bool {
        [&self.c1, &self.c2, &self.c3, &self.c4, &self.c6, &self.c7]
            .iter()
            .all(|c| c.passed)
    }

    pub fn fits_frame(&self) -> bool {
        self.frame.passed
    }

    pub fn items(&self) -> [(&'static str, &ContractItem); 7] {
        [
            ("C1", &self.c1),
            ("C2", &self.c2),
            ("C3", &self.c3),
            ("C4", &self.c4),
            ("C6", &self.c6),
            ("C7", &self.c7),
            ("frame", &self.frame),
        ]
    }
}

fn blocks(l: &FiniteLattice, c: &Congruence) -> String {
    let parts: Vec<String> = c
        .block_ids(l)
        .into_iter()
        .filter(|b| b.len() > 1)
        .map(|b| {
            let ids: Vec<String> = b.iter().map(ToString::to_string).collect();
            format!("{{{}}}", ids.join(","))
        })
        .collect();
    if parts.is_empty() {
        "zero".to_owned()
    } else {
        parts.join(" ")
    }
}

/// Gadgets up to this size are cross-checked against the brute-force oracle.
pub const GADGET_ORACLE_LIMIT: usize = 12;

/// Least member of the oracle's congruence list containing `(a, b)`.
fn oracle_principal(all: &CongruenceOrder, a: usize, b: usize) -> Option<Congruence> {
    let containing: Vec<&Congruence> = all.members().iter().filter(|c| c.related(a, b)).collect();
    containing
        .iter()
        .find(|c| containing.iter().all(|d| c.refines(d)))
        .map(|c| (*c).clone())
}

/// Checks the gadget contract.
pub fn verify_gadget(g: &Gadget) -> GadgetReport {
    let l = &g.lattice;
    let role = |r: Role| g.designated(&r);
    let (p, q) = (&g.p, &g.q);

    let c1 = match (role(Role::Bottom), role(Role::Top)) {
        (Some(o), Some(i)) if o == l.bottom() && i == l.top() => ContractItem::pass("o, i label the bounds"),
        _ => ContractItem::fail("o and i must label the bottom and top"),
    };

    let chain = (
        role(Role::A(p.clone())),
        role(Role::B(p.clone())),
        role(Role::A(q.clone())),
        role(Role::B(q.clone())),
    );
    let mut designated = None;
    let c2 = match chain {
        (Some(ap), Some(bp), Some(aq), Some(bq)) => {
            let distinct = [ap, bp, aq, bq].iter().collect::<std::collections::BTreeSet<_>>().len() == 4;
            let inner = |a: usize, b: usize| a != l.bottom() && b != l.top() && l.le(a, b) && a != b;
            if !distinct {
                ContractItem::fail("designated elements not distinct")
            } else if !inner(ap, bp) || !inner(aq, bq) {
                ContractItem::fail("need o < a(p) < b(p) < i and o < a(q) < b(q) < i")
            } else {
                designated = Some((ap, bp, aq, bq));
                ContractItem::pass("both chains present")
            }
        }
        _ => ContractItem::fail("missing designated a/b elements"),
    };

    let (mut c3, mut c4, mut c6, mut c7, mut frame) = (
        ContractItem::skipped("C2"),
        ContractItem::skipped("C2"),
        ContractItem::fail("no x designated"),
        ContractItem::skipped("C6"),
        ContractItem::skipped("C2"),
    );
    let mut oracle_checked = false;

    if let Some((ap, bp, aq, bq)) = designated {
        let cp = principal_congruence(l, ap, bp);
        let cq = principal_congruence(l, aq, bq);
        if let Ok(all) = brute_force_congruences_up_to(l, GADGET_ORACLE_LIMIT) {
            oracle_checked = true;
            let agree =
                oracle_principal(&all, ap, bp).as_ref() == Some(&cp) && oracle_principal(&all, aq, bq).as_ref() == Some(&cq);
            if !agree {
                c3 = ContractItem::fail("closure engine disagrees with the oracle");
            }
        }
        if c3.detail.starts_with("not checked") {
            c3 = if cp.refines(&cq) && cp != cq {
                ContractItem::pass(format!("con(a,b)_p = {} ⊊ con(a,b)_q = {}", blocks(l, &cp), blocks(l, &cq)))
            } else if cp == cq {
                ContractItem::fail(format!("equal: {}", blocks(l, &cp)))
            } else {
                ContractItem::fail(format!("{} does not refine {}", blocks(l, &cp), blocks(l, &cq)))
            };
        }
        c4 = match (is_bound_isolating(l, &cp), is_bound_isolating(l, &cq)) {
            (true, true) => ContractItem::pass("both bound-isolating"),
            (false, _) => ContractItem::fail(format!("p-side not BI: {}", blocks(l, &cp))),
            (_, false) => ContractItem::fail(format!("q-side not BI: {}", blocks(l, &cq))),
        };
        let cross = [(ap, aq), (ap, bq), (bp, aq), (bp, bq)]
            .into_iter()
            .find(|&(u, v)| l.join(u, v) != l.top() || l.meet(u, v) != l.bottom());
        let covers = l.order().cover_indices();
        let gap = [(ap, bp), (aq, bq)].into_iter().find(|pair| !covers.contains(pair));
        frame = match (cross, gap) {
            (None, None) => ContractItem::pass("prime designated intervals, cross pairs complementary"),
            (Some((u, v)), _) => ContractItem::fail(format!("{} and {} are not complements", l.id(u), l.id(v))),
            (None, Some((u, v))) => ContractItem::fail(format!("{} does not cover {}", l.id(v), l.id(u))),
        };

        if let Some(x) = g.x() {
            let xi = l.index_of(x);
            let special = [l.bottom(), l.top(), ap, bp, aq, bq];
            c6 = match xi {
                None => ContractItem::fail(format!("x `{x}` not in the lattice")),
                Some(xi) if special.contains(&xi) => ContractItem::fail("x coincides with a designated element"),
                Some(xi) => {
                    let covers = l.order().lower_covers(xi);
                    let reducible = (0..l.len())
                        .flat_map(|u| (u..l.len()).map(move |v| (u, v)))
                        .find(|&(u, v)| u != xi && v != xi && l.join(u, v) == xi);
                    match (covers.len(), reducible) {
                        (_, Some((u, v))) => ContractItem::fail(format!("x = {} ∨ {}", l.id(u), l.id(v))),
                        (1, None) => ContractItem::pass(format!("x✲ = {}", l.id(covers[0]))),
                        (n, None) => ContractItem::fail(format!("x has {n} lower covers")),
                    }
                }
            };
            if c6.passed {
                c7 = match slim(l, x) {
                    Err(e) => ContractItem::fail(format!("slim failed: {e}")),
                    Ok(s) => {
                        let sl = &s.lattice;
                        let at = |i: usize| sl.index_of(l.id(i)).expect("designated survive");
                        let sp = principal_congruence(sl, at(ap), at(bp));
                        let sq = principal_congruence(sl, at(aq), at(bq));
                        if sp != sq {
                            ContractItem::fail(format!("after slimming {} ≠ {}", blocks(sl, &sp), blocks(sl, &sq)))
                        } else if !is_bound_isolating(sl, &sp) {
                            ContractItem::fail(format!("after slimming not BI: {}", blocks(sl, &sp)))
                        } else {
                            ContractItem::pass(format!("after slimming both = {}", blocks(sl, &sp)))
                        }
                    }
                };
            }
        }
    }

    GadgetReport {
        c1,
        c2,
        c3,
        c4,
        c6,
        c7,
        frame,
        oracle_checked,
    }
}

/// The pinned gadget as shipped in the repository.
pub const FIXTURE: &str = include_str!("../../fixtures/gadget.json");

/// On-disk form of a pinned gadget.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetFixture {
    pub gadget: GadgetJson,
    /// How the gadget was found.
    pub search: super::SearchConfig,
    pub certificate: GadgetReport,
}

impl GadgetFixture {
    pub fn parse(text: &str) -> Result<Self, ConstructionError> {
        serde_json::from_str(text).map_err(|e| ConstructionError::Fixture(e.to_string()))
    }

    /// Runs `cfg` and pins its first passer.
    pub fn from_search(cfg: &super::SearchConfig) -> Result<Self, ConstructionError> {
        let out = super::search_gadgets(cfg)?;
        let g = out
            .gadgets
            .first()
            .ok_or_else(|| ConstructionError::Search(format!("no passer among {} candidates", out.examined)))?;
        Ok(GadgetFixture {
            gadget: g.to_json(),
            search: *cfg,
            certificate: verify_gadget(g),
        })
    }

    /// The exact text of a fixture file.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("fixture serializes");
        s.push('\n');
        s
    }

    /// Loads the gadget and checks that a fresh certificate matches the
    /// stored one and passes.
    pub fn load(&self) -> Result<Gadget, ConstructionError> {
        let g = self.gadget.clone().into_gadget()?;
        let report = verify_gadget(&g);
        if report != self.certificate {
            return Err(ConstructionError::Fixture("stored certificate is stale".into()));
        }
        if !report.passes_contract() || !report.fits_frame() {
            return Err(ConstructionError::Fixture("pinned gadget fails its contract".into()));
        }
        Ok(g)
    }
}

/// SHA-256 of the shipped fixture file, hex encoded.
pub fn fixture_digest() -> String {
    hex::encode(Sha256::digest(FIXTURE.as_bytes()))
}

/// The pinned gadget template for the generic pair `(p, q)`.
pub fn pinned_gadget() -> Gadget {
    GadgetFixture::parse(FIXTURE)
        .and_then(|f| f.load())
        .expect("shipped gadget fixture is valid")
}

/// A fresh relabeled copy of the pinned gadget for `(p, q)`.
pub fn default_gadget(p: &ElementId, q: &ElementId) -> Result<Gadget, ConstructionError> {
    if p == q {
        return Err(ConstructionError::Input(format!("gadget needs p ≠ q, got `{p}` twice")));
    }
    pinned_gadget().instantiate(p, q)
}
