use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::congruence::{
    bi_and_base, brute_force_congruences, enumerate_congruences, ext_map, is_bound_isolating, principal_congruence,
    principal_order, projectivity_witness, Congruence, CongruenceOrder, DEFAULT_PROJECTIVITY_DEPTH, ORACLE_LIMIT,
};
use crate::construction::{assemble_k, assemble_l, Gadget, Theorem1Build, Theorem2Build};
use crate::error::Error;
use crate::lattice::{FiniteLattice, FrameLabeling, Role};
use crate::order::{nonempty_down_sets, order_isomorphism, BoundedPoset, DownSetFamily, ElementId, IsotoneMap};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Verified,
    Falsified,
    Error,
}

/// One named check with a pass flag and a short witness or summary.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckLine {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    pub instance: String,
    pub outcome: Outcome,
    pub checks: Vec<CheckLine>,
    /// First failing check's witness; always set when falsified.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
    /// Sizes and counters of the build (`|K|`, `|Princ K|`, remaps, ...).
    pub stats: BTreeMap<String, usize>,
    /// Wall time; not serialized, so bundles stay reproducible.
    #[serde(skip)]
    pub elapsed: Duration,
}

/// Equality ignores timing.
impl PartialEq for VerificationReport {
    fn eq(&self, other: &Self) -> bool {
        (&self.instance, self.outcome, &self.checks, &self.counterexample, &self.stats)
            == (&other.instance, other.outcome, &other.checks, &other.counterexample, &other.stats)
    }
}

impl Eq for VerificationReport {}

impl VerificationReport {
    fn new(instance: String) -> Self {
        VerificationReport {
            instance,
            outcome: Outcome::Verified,
            checks: Vec::new(),
            counterexample: None,
            stats: BTreeMap::new(),
            elapsed: Duration::ZERO,
        }
    }

    pub(crate) fn error(instance: String, e: &Error) -> Self {
        let mut r = VerificationReport::new(instance);
        r.outcome = Outcome::Error;
        r.counterexample = Some(e.to_string());
        r
    }

    fn check(&mut self, name: &str, result: Result<String, String>) {
        let (passed, detail) = match result {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        if !passed && self.outcome == Outcome::Verified {
            self.outcome = Outcome::Falsified;
            self.counterexample = Some(format!("{name}: {detail}"));
        }
        self.checks.push(CheckLine {
            name: name.to_owned(),
            passed,
            detail,
        });
    }

    pub fn verified(&self) -> bool {
        self.outcome == Outcome::Verified
    }

    pub fn check_named(&self, name: &str) -> Option<&CheckLine> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Compact poset description used as an instance name.
pub fn describe(p: &BoundedPoset) -> String {
    let inner: Vec<String> = p.interior_indices().into_iter().map(|x| p.id(x).to_string()).collect();
    let covers: Vec<String> = p
        .cover_indices()
        .into_iter()
        .filter(|&(x, y)| x != p.bottom() && y != p.top())
        .map(|(x, y)| format!("{}<{}", p.id(x), p.id(y)))
        .collect();
    format!("{{{}}}[{}]", inner.join(","), covers.join(","))
}

fn blocks_of(l: &FiniteLattice, c: &Congruence) -> String {
    let parts: Vec<String> = c
        .block_ids(l)
        .into_iter()
        .filter(|b| b.len() > 1)
        .map(|b| {
            let ids: Vec<&str> = b.iter().map(ElementId::as_str).collect();
            format!("{{{}}}", ids.join(","))
        })
        .collect();
    if parts.is_empty() {
        "zero".into()
    } else {
        parts.join(" ")
    }
}

fn interval(l: &FiniteLattice, labels: &FrameLabeling, x: &ElementId) -> Result<(usize, usize), String> {
    let find = |r: Role| {
        labels
            .element(&r)
            .and_then(|e| l.index_of(e))
            .ok_or_else(|| format!("no element for {r}"))
    };
    Ok((find(Role::A(x.clone()))?, find(Role::B(x.clone()))?))
}

/// `x ↦ con(a(x), b(x))` on the interior, `0 ↦ zero`, `1 ↦ one`.
/// `rename` maps ids of `p` to the ids used in the labels.
fn interval_congruences(
    p: &BoundedPoset,
    l: &FiniteLattice,
    labels: &FrameLabeling,
    rename: &dyn Fn(&ElementId) -> ElementId,
) -> Result<Vec<Congruence>, String> {
    (0..p.len())
        .map(|x| {
            if x == p.bottom() {
                Ok(Congruence::zero(l.len()))
            } else if x == p.top() {
                Ok(Congruence::one(l.len()))
            } else {
                let (a, b) = interval(l, labels, &rename(p.id(x)))?;
                Ok(principal_congruence(l, a, b))
            }
        })
        .collect()
}

/// Checks that `images` (one per element of `p`) are exactly the members of
/// `princ`, with the order of `p` reflected and preserved.
fn is_iso_onto(p: &BoundedPoset, images: &[Congruence], princ: &CongruenceOrder, l: &FiniteLattice) -> Result<String, String> {
    let mut pos = Vec::with_capacity(p.len());
    for (x, c) in images.iter().enumerate() {
        match princ.position(c) {
            Some(i) => pos.push(i),
            None => return Err(format!("image of {} is not principal: {}", p.id(x), blocks_of(l, c))),
        }
    }
    for x in 0..p.len() {
        for y in x + 1..p.len() {
            if pos[x] == pos[y] {
                return Err(format!("{} and {} have the same image", p.id(x), p.id(y)));
            }
        }
    }
    if princ.len() != p.len() {
        let hit: BTreeSet<usize> = pos.iter().copied().collect();
        let stray = (0..princ.len()).find(|i| !hit.contains(i)).expect("some member unmatched");
        return Err(format!(
            "{} principal congruences for {} elements; unmatched {}",
            princ.len(),
            p.len(),
            blocks_of(l, &princ.members()[stray])
        ));
    }
    for x in 0..p.len() {
        for y in 0..p.len() {
            if p.le(x, y) != princ.le(pos[x], pos[y]) {
                return Err(format!("order differs on {} and {}", p.id(x), p.id(y)));
            }
        }
    }
    Ok(format!("{} members", princ.len()))
}

/// The family as a bounded poset with ids `D000, D001, ...`.
fn family_poset(f: &DownSetFamily) -> Option<BoundedPoset> {
    let n = f.len();
    let ids: Vec<ElementId> = (0..n).map(|i| ElementId::new(format!("D{i:03}")).unwrap()).collect();
    let rel: Vec<(ElementId, ElementId)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| f.le(i, j))
        .map(|(i, j)| (ids[i].clone(), ids[j].clone()))
        .collect();
    let bottom = (0..n).find(|&i| (0..n).all(|j| f.le(i, j)))?;
    let top = (0..n).find(|&i| (0..n).all(|j| f.le(j, i)))?;
    BoundedPoset::build(ids.clone(), rel, &ids[bottom], &ids[top]).ok()
}

/// γ: BI congruences ↔ nonempty down sets of `P⁻`, via Base.
fn gamma(p: &BoundedPoset, l: &FiniteLattice, labels: &FrameLabeling, con: &CongruenceOrder) -> Result<String, String> {
    let inner: BTreeSet<ElementId> = p.interior_indices().into_iter().map(|x| p.id(x).clone()).collect();
    let downs = nonempty_down_sets(p, Some(&inner));
    let mut image: Vec<(usize, usize)> = Vec::new();
    for (i, c) in con.members().iter().enumerate() {
        let cert = bi_and_base(l, labels, p, c).map_err(|e| e.to_string())?;
        match cert {
            None => {
                if !c.is_zero() && !c.is_one() {
                    return Err(format!("non-BI congruence other than zero/one: {}", blocks_of(l, c)));
                }
            }
            Some(cert) => {
                if !cert.down_closed {
                    return Err(format!("Base {:?} is not down-closed", cert.base));
                }
                match downs.position(&cert.base) {
                    Some(d) => image.push((i, d)),
                    None => return Err(format!("BI congruence {} has empty Base", blocks_of(l, c))),
                }
            }
        }
    }
    let hit: BTreeSet<usize> = image.iter().map(|&(_, d)| d).collect();
    if hit.len() != image.len() {
        return Err("two BI congruences share a Base".into());
    }
    if hit.len() != downs.len() {
        return Err(format!("{} BI congruences for {} down sets", image.len(), downs.len()));
    }
    for &(i, d) in &image {
        for &(j, e) in &image {
            if con.le(i, j) != downs.le(d, e) {
                return Err(format!("γ not an order-embedding on Base {:?}", downs.members()[d]));
            }
        }
    }
    Ok(format!("{} BI congruences", image.len()))
}

/// Every principal congruence with a bound or guard as an endpoint is one.
fn guards_force_one(l: &FiniteLattice, labels: &FrameLabeling) -> Result<String, String> {
    let mut count = 0;
    for r in [Role::Bottom, Role::Top, Role::Guard0, Role::Guard1] {
        let Some(g) = labels.element(&r).and_then(|e| l.index_of(e)) else {
            continue;
        };
        for y in 0..l.len() {
            if y != g && !principal_congruence(l, g, y).is_one() {
                return Err(format!("con({}, {}) is not one", l.id(g), l.id(y)));
            }
            count += 1;
        }
    }
    Ok(format!("{count} pairs"))
}

/// Every BI member of `princ` is one of `allowed`.
fn bi_within(l: &FiniteLattice, princ: &CongruenceOrder, allowed: &[Congruence]) -> Result<String, String> {
    let mut n = 0;
    for c in princ.members() {
        if is_bound_isolating(l, c) {
            if !allowed.contains(c) {
                return Err(format!("BI principal congruence {} is not an interval congruence", blocks_of(l, c)));
            }
            n += 1;
        }
    }
    Ok(format!("{n} BI principal congruences"))
}

fn oracle_agrees(l: &FiniteLattice, con: &CongruenceOrder) -> Result<String, String> {
    let oracle = brute_force_congruences(l).map_err(|e| e.to_string())?;
    if !oracle.same_members(con) {
        return Err(format!("oracle finds {} congruences, engine {}", oracle.len(), con.len()));
    }
    for x in 0..l.len() {
        for y in x..l.len() {
            let c = principal_congruence(l, x, y);
            let containing: Vec<&Congruence> = oracle.members().iter().filter(|m| m.related(x, y)).collect();
            if !containing.iter().all(|m| c.refines(m)) || !containing.contains(&&c) {
                return Err(format!("con({}, {}) is not oracle-minimal", l.id(x), l.id(y)));
            }
        }
    }
    Ok(format!("{} congruences", oracle.len()))
}

/// Runs every Theorem 1 check on an assembled `K`.
pub fn check_theorem1(b: &Theorem1Build) -> Result<VerificationReport, Error> {
    let start = Instant::now();
    let (p, l, labels) = (&b.input, &b.lattice, &b.labels);
    let mut r = VerificationReport::new(describe(p));
    let princ = principal_order(l)?;
    let con = enumerate_congruences(l)?;
    r.stats.insert("k".into(), l.len());
    r.stats.insert("princ".into(), princ.len());
    r.stats.insert("con".into(), con.len());
    r.stats.insert("gadgets".into(), b.gadgets.len());

    let images = interval_congruences(p, l, labels, &Clone::clone);
    r.check(
        "princ_iso",
        images.and_then(|imgs| is_iso_onto(p, &imgs, &princ, l)),
    );
    r.check("gamma", gamma(p, l, labels, &con));
    let down_p = nonempty_down_sets(p, None);
    r.check(
        "con_down",
        match (con.to_poset(), family_poset(&down_p)) {
            (Some(a), Some(d)) if order_isomorphism(&a, &d).is_some() => Ok(format!("{} members", con.len())),
            (Some(_), Some(_)) => Err(format!("Con K ({}) is not isomorphic to Down⁻P ({})", con.len(), down_p.len())),
            _ => Err("Con K or Down⁻P is not bounded".into()),
        },
    );
    r.check("guards", guards_force_one(l, labels));
    let intervals: Vec<Congruence> = interval_congruences(p, l, labels, &Clone::clone)
        .unwrap_or_default()
        .into_iter()
        .filter(|c| !c.is_zero() && !c.is_one())
        .collect();
    r.check("bi_principal", bi_within(l, &princ, &intervals));
    let carrier: BTreeSet<ElementId> = l.order().elements().iter().cloned().collect();
    r.check(
        "ext_identity",
        match ext_map(l, &carrier) {
            Ok(e) if e.is_identity() => Ok("ext(K, K) is the identity".into()),
            Ok(_) => Err("ext(K, K) is not the identity".into()),
            Err(e) => Err(e.to_string()),
        },
    );
    if l.len() <= ORACLE_LIMIT {
        r.check("oracle", oracle_agrees(l, &con));
    }
    r.elapsed = start.elapsed();
    Ok(r)
}

/// Builds `K` for `p` and checks it.
pub fn verify_theorem1(p: &BoundedPoset, template: &Gadget) -> VerificationReport {
    let start = Instant::now();
    let mut r = match assemble_k(p, template).map_err(Error::from).and_then(|b| check_theorem1(&b)) {
        Ok(r) => r,
        Err(e) => VerificationReport::error(describe(p), &e),
    };
    r.elapsed = start.elapsed();
    r
}

pub(crate) fn describe_map(psi: &IsotoneMap) -> String {
    let p = psi.domain();
    let pairs: Vec<String> = p
        .interior_indices()
        .into_iter()
        .map(|x| format!("{}→{}", p.id(x), psi.image(p.id(x)).expect("total")))
        .collect();
    format!("P={} Q={} ψ=[{}]", describe(p), describe(psi.codomain()), pairs.join(","))
}

fn is_order_iso(psi: &IsotoneMap) -> bool {
    let (p, q) = (psi.domain(), psi.codomain());
    let n = p.len();
    n == q.len()
        && (0..n).all(|x| (0..n).all(|y| p.le(x, y) == q.le(psi.image_index(x), psi.image_index(y))))
        && (0..n).map(|x| psi.image_index(x)).collect::<BTreeSet<_>>().len() == n
}

/// Runs every Theorem 2 check on an assembled `L`.
pub fn check_theorem2(b: &Theorem2Build) -> Result<VerificationReport, Error> {
    let start = Instant::now();
    let (p, q, psi) = (b.p(), b.q(), &b.psi);
    let (l, labels, ext) = (&b.lattice, &b.labels, &b.ext);
    let k = &ext.sublattice;
    let mut r = VerificationReport::new(describe_map(psi));
    r.stats.insert("l_plus".into(), b.l_plus.len());
    r.stats.insert("l".into(), l.len());
    r.stats.insert("k".into(), k.len());
    r.stats.insert("princ_k".into(), ext.source.len());
    r.stats.insert("princ_l".into(), ext.target.len());
    r.stats.insert("deleted".into(), b.slims.len());
    r.stats.insert("meet_remaps".into(), b.slims.iter().map(|s| s.remapped.len()).sum());

    let left = |x: &ElementId| b.r.left[x].clone();
    let right = |x: &ElementId| b.r.right[x].clone();
    let alpha = interval_congruences(p, k, labels, &left);
    let beta = interval_congruences(q, l, labels, &right);
    r.check("alpha_iso", alpha.clone().and_then(|a| is_iso_onto(p, &a, &ext.source, k)));
    r.check("beta_iso", beta.clone().and_then(|c| is_iso_onto(q, &c, &ext.target, l)));

    let square = match (&alpha, &beta) {
        (Ok(alpha), Ok(beta)) => (0..p.len())
            .try_for_each(|x| {
                let s = ext.source.position(&alpha[x]).ok_or("α image not in Princ K")?;
                let got = &ext.target.members()[ext.assignment[s]];
                if *got == beta[psi.image_index(x)] {
                    Ok(())
                } else {
                    Err(format!("ext(α({})) = {} ≠ β(ψ({}))", p.id(x), blocks_of(l, got), p.id(x)))
                }
            })
            .map(|_| format!("{} elements", p.len())),
        _ => Err("α or β undefined".into()),
    };
    r.check("square", square);

    let rep = ext.report;
    r.check(
        "ext_properties",
        if rep.all_passed() {
            Ok("isotone, bounded, {0}-separating, witness-independent".into())
        } else {
            Err(format!("{rep:?}"))
        },
    );
    r.check(
        "ext_shape",
        if ext.is_order_isomorphism() == is_order_iso(psi) {
            Ok(format!("order-isomorphism: {}", ext.is_order_isomorphism()))
        } else {
            Err("ext is an order-isomorphism exactly when ψ is, but not here".into())
        },
    );

    let mut longest = 0;
    let links = p.interior_indices().into_iter().try_for_each(|x| {
        let (a, bb) = interval(l, labels, &left(p.id(x)))?;
        let image = psi.image(p.id(x)).expect("total");
        let (c, d) = interval(l, labels, &right(image))?;
        let (cp, cq) = (principal_congruence(l, a, bb), principal_congruence(l, c, d));
        if cp != cq {
            return Err(format!("con(a,b) for {} and {} differ in L", p.id(x), image));
        }
        for (from, to) in [((c, d), (a, bb)), ((a, bb), (c, d))] {
            let chain = projectivity_witness(l, to, from, DEFAULT_PROJECTIVITY_DEPTH);
            if let Some(ch) = chain {
                longest = longest.max(ch.len());
            }
        }
        Ok(())
    });
    r.check("link_equal", links.map(|_| format!("{} links", b.links.len())));
    r.stats.insert("longest_projectivity".into(), longest);

    let princ_l = &ext.target;
    let allowed: Vec<Congruence> = beta
        .unwrap_or_default()
        .into_iter()
        .filter(|c| !c.is_zero() && !c.is_one())
        .collect();
    r.check("bi_principal", bi_within(l, princ_l, &allowed));

    r.check(
        "slimming",
        if l.len() + b.slims.len() == b.l_plus.len() && b.slims.len() == b.links.len() {
            Ok(format!(
                "{} deleted, {} meet remaps",
                b.slims.len(),
                b.slims.iter().map(|s| s.remapped.len()).sum::<usize>()
            ))
        } else {
            Err("deleted elements do not account for L⁺ − L".into())
        },
    );
    r.check("guards", guards_force_one(l, labels));
    r.elapsed = start.elapsed();
    Ok(r)
}

/// Builds `L` for `psi` and checks it.
pub fn verify_theorem2(psi: &IsotoneMap, template: &Gadget) -> VerificationReport {
    let start = Instant::now();
    let mut r = match assemble_l(psi, template).map_err(Error::from).and_then(|b| check_theorem2(&b)) {
        Ok(r) => r,
        Err(e) => VerificationReport::error(describe_map(psi), &e),
    };
    r.elapsed = start.elapsed();
    r
}
