use std::collections::BTreeMap;
use std::thread;

use serde::{Deserialize, Serialize};

use super::bundle::{bundle_theorem1, bundle_theorem2, Bundle};
use super::generate::{enumerate_small_posets, random_instances, GeneratorConfig};
use super::verify::{check_theorem1, check_theorem2, describe, describe_map, Outcome, VerificationReport};
use crate::construction::{assemble_k, assemble_l, fixture_digest, Gadget};
use crate::error::Error;
use crate::order::{BoundedPoset, IsotoneMap};

/// Aggregate of one campaign; `reports` are in instance order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignSummary {
    pub campaign: String,
    pub gadget_digest: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub instances: usize,
    pub verified: usize,
    pub falsified: usize,
    pub errors: usize,
    /// Summed `stats` over all reports.
    pub totals: BTreeMap<String, usize>,
    pub reports: Vec<VerificationReport>,
}

impl CampaignSummary {
    fn new(campaign: &str, seed: Option<u64>, reports: Vec<VerificationReport>) -> Self {
        let count = |o: Outcome| reports.iter().filter(|r| r.outcome == o).count();
        let mut totals = BTreeMap::new();
        for r in &reports {
            for (k, v) in &r.stats {
                *totals.entry(k.clone()).or_insert(0) += v;
            }
        }
        CampaignSummary {
            campaign: campaign.to_owned(),
            gadget_digest: fixture_digest(),
            seed,
            instances: reports.len(),
            verified: count(Outcome::Verified),
            falsified: count(Outcome::Falsified),
            errors: count(Outcome::Error),
            totals,
            reports,
        }
    }

    pub fn all_verified(&self) -> bool {
        self.verified == self.instances
    }

    /// Plain-text table, one line per instance.
    pub fn table(&self) -> String {
        let mut out = format!("{:<4} {:<10} instance\n", "#", "outcome");
        for (n, r) in self.reports.iter().enumerate() {
            let outcome = match r.outcome {
                Outcome::Verified => "verified",
                Outcome::Falsified => "FALSIFIED",
                Outcome::Error => "ERROR",
            };
            out.push_str(&format!("{n:<4} {outcome:<10} {}\n", r.instance));
        }
        out.push_str(&format!(
            "{}: {} instances, {} verified, {} falsified, {} errors\n",
            self.campaign, self.instances, self.verified, self.falsified, self.errors
        ));
        out
    }
}

/// Runs `f` over `items` on scoped threads; results keep input order.
fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let workers = thread::available_parallelism().map_or(1, |n| n.get()).min(items.len().max(1));
    let chunk = items.len().div_ceil(workers).max(1);
    thread::scope(|s| {
        let handles: Vec<_> = items.chunks(chunk).map(|c| s.spawn(|| c.iter().map(&f).collect::<Vec<R>>())).collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    })
}

fn run1(p: &BoundedPoset, template: &Gadget) -> (VerificationReport, Option<Bundle>) {
    let built = assemble_k(p, template).map_err(Error::from);
    match built.and_then(|b| check_theorem1(&b).map(|r| (b, r))) {
        Ok((b, r)) => {
            let bundle = bundle_theorem1(&b, &r);
            (r, Some(bundle))
        }
        Err(e) => (VerificationReport::error(describe(p), &e), None),
    }
}

fn run2(psi: &IsotoneMap, template: &Gadget) -> (VerificationReport, Option<Bundle>) {
    let built = assemble_l(psi, template).map_err(Error::from);
    match built.and_then(|b| check_theorem2(&b).map(|r| (b, r))) {
        Ok((b, r)) => {
            let bundle = bundle_theorem2(&b, &r);
            (r, Some(bundle))
        }
        Err(e) => (VerificationReport::error(describe_map(psi), &e), None),
    }
}

fn split(results: Vec<(VerificationReport, Option<Bundle>)>) -> (Vec<VerificationReport>, Vec<Bundle>) {
    let mut reports = Vec::new();
    let mut bundles = Vec::new();
    for (r, b) in results {
        reports.push(r);
        bundles.extend(b);
    }
    (reports, bundles)
}

/// Every poset class with at most `max_interior` interior elements.
pub fn exhaust_theorem1(max_interior: usize, template: &Gadget) -> (CampaignSummary, Vec<Bundle>) {
    let posets = enumerate_small_posets(max_interior);
    let (reports, bundles) = split(par_map(&posets, |p| run1(p, template)));
    (CampaignSummary::new("exhaust-thm1", None, reports), bundles)
}

/// `cfg.trials` seeded random triples.
pub fn random_theorem2(cfg: &GeneratorConfig, template: &Gadget) -> (CampaignSummary, Vec<Bundle>) {
    let maps = random_instances(cfg);
    let (reports, bundles) = split(par_map(&maps, |m| run2(m, template)));
    (CampaignSummary::new("random-thm2", Some(cfg.seed), reports), bundles)
}
