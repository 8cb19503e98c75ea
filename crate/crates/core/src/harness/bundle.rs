use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::verify::{check_theorem1, check_theorem2, VerificationReport};
use crate::congruence::ext_map;
use crate::construction::{
    fixture_digest, AssemblyChecks, GadgetInstance, SlimRecord, Theorem1Build, Theorem2Build,
};
use crate::error::Error;
use crate::lattice::{slim, LatticeJson, Role};
use crate::order::{glue_bounds, BoundedPoset, ElementId, MapJson};

pub const BUNDLE_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BundleKind {
    Theorem1,
    Theorem2,
}

/// Everything needed to re-check a build without re-running the assembly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bundle {
    pub version: u32,
    pub kind: BundleKind,
    pub gadget_digest: String,
    pub p: BoundedPoset,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<BoundedPoset>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<MapJson>,
    /// `K` for the first construction, `L` for the second.
    pub lattice: LatticeJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l_plus: Option<LatticeJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<BTreeSet<ElementId>>,
    pub gadgets: Vec<GadgetInstance>,
    #[serde(default)]
    pub links: Vec<(ElementId, ElementId)>,
    #[serde(default)]
    pub slims: Vec<SlimRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ext_assignment: Option<Vec<usize>>,
    pub checks: AssemblyChecks,
    pub report: VerificationReport,
    /// sha256 of the serialized report.
    pub report_digest: String,
}

fn digest(report: &VerificationReport) -> String {
    let bytes = serde_json::to_vec(report).expect("report serializes");
    hex::encode(Sha256::digest(&bytes))
}

pub fn bundle_theorem1(b: &Theorem1Build, report: &VerificationReport) -> Bundle {
    Bundle {
        version: BUNDLE_VERSION,
        kind: BundleKind::Theorem1,
        gadget_digest: fixture_digest(),
        p: b.input.clone(),
        q: None,
        map: None,
        lattice: LatticeJson::new(&b.lattice, &b.labels),
        l_plus: None,
        k: None,
        gadgets: b.gadgets.clone(),
        links: Vec::new(),
        slims: Vec::new(),
        ext_assignment: None,
        checks: b.checks,
        report: report.clone(),
        report_digest: digest(report),
    }
}

pub fn bundle_theorem2(b: &Theorem2Build, report: &VerificationReport) -> Bundle {
    let pairs = b.psi.assignment().iter().map(|(x, y)| (x.clone(), y.clone())).collect();
    Bundle {
        version: BUNDLE_VERSION,
        kind: BundleKind::Theorem2,
        gadget_digest: fixture_digest(),
        p: b.p().clone(),
        q: Some(b.q().clone()),
        map: Some(MapJson { pairs }),
        lattice: LatticeJson::new(&b.lattice, &b.labels),
        l_plus: Some(LatticeJson::new(&b.l_plus, &b.l_plus_labels)),
        k: Some(b.k.clone()),
        gadgets: b.gadgets.clone(),
        links: b.links.clone(),
        slims: b.slims.clone(),
        ext_assignment: Some(b.ext.assignment.clone()),
        checks: b.checks,
        report: report.clone(),
        report_digest: digest(report),
    }
}

/// Result of re-checking a stored bundle.
#[derive(Debug, Clone)]
pub struct Reverification {
    pub report: VerificationReport,
    /// The fresh report, the digest, and every stored derived artifact agree
    /// with the bundle.
    pub matches_stored: bool,
    pub mismatches: Vec<String>,
}

fn missing(what: &str) -> Error {
    Error::Input(format!("bundle lacks `{what}`"))
}

/// Re-runs the checks on the stored lattices. Nothing is re-assembled; the
/// only recomputed artifacts are `ext` and the slimming of `L⁺`, which are
/// compared with what the bundle records.
pub fn reverify_bundle(bundle: &Bundle) -> Result<Reverification, Error> {
    let mut mismatches = Vec::new();
    if bundle.version != BUNDLE_VERSION {
        return Err(Error::Input(format!("unsupported bundle version {}", bundle.version)));
    }
    if bundle.report_digest != digest(&bundle.report) {
        mismatches.push("report digest".to_owned());
    }
    let (lattice, labels) = bundle.lattice.clone().into_lattice()?;
    let report = match bundle.kind {
        BundleKind::Theorem1 => {
            let p = &bundle.p;
            let intervals: BTreeMap<ElementId, (ElementId, ElementId)> = p
                .interior_indices()
                .into_iter()
                .map(|x| {
                    let id = p.id(x).clone();
                    (id.clone(), (Role::A(id.clone()).id(), Role::B(id).id()))
                })
                .collect();
            let build = Theorem1Build {
                input: p.clone(),
                lattice,
                labels,
                intervals,
                gadgets: bundle.gadgets.clone(),
                checks: bundle.checks,
            };
            check_theorem1(&build)?
        }
        BundleKind::Theorem2 => {
            let q = bundle.q.clone().ok_or_else(|| missing("q"))?;
            let psi = bundle.map.clone().ok_or_else(|| missing("map"))?.into_map(bundle.p.clone(), q.clone())?;
            let r = glue_bounds(&bundle.p, "P", &q, "Q")?;
            let (l_plus, l_plus_labels) = bundle.l_plus.clone().ok_or_else(|| missing("l_plus"))?.into_lattice()?;
            let k = bundle.k.clone().ok_or_else(|| missing("k"))?;

            let mut slimmed = l_plus.clone();
            let mut redone = Vec::new();
            for (a, b) in &bundle.links {
                let x = Role::X(a.clone(), b.clone()).id();
                let s = slim(&slimmed, &x)?;
                redone.push(SlimRecord {
                    x,
                    lower_cover: s.lower_cover,
                    remapped: s.remapped,
                });
                slimmed = s.lattice;
            }
            if redone != bundle.slims {
                mismatches.push("slim records".to_owned());
            }
            if slimmed != lattice {
                mismatches.push("slimmed lattice".to_owned());
            }

            let ext = ext_map(&lattice, &k)?;
            if Some(&ext.assignment) != bundle.ext_assignment.as_ref() {
                mismatches.push("ext assignment".to_owned());
            }
            let build = Theorem2Build {
                psi,
                r,
                l_plus,
                l_plus_labels,
                gadgets: bundle.gadgets.clone(),
                links: bundle.links.clone(),
                slims: bundle.slims.clone(),
                lattice,
                labels,
                k,
                ext,
                checks: bundle.checks,
            };
            check_theorem2(&build)?
        }
    };
    if report != bundle.report {
        mismatches.push("verification report".to_owned());
    }
    Ok(Reverification {
        report,
        matches_stored: mismatches.is_empty(),
        mismatches,
    })
}

impl Bundle {
    pub fn parse(text: &str) -> Result<Bundle, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("bundle serializes")
    }
}
