//! One line per acceptance criterion; exits nonzero if any fails.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use princforge::congruence::{brute_force_congruences, enumerate_congruences, ext_map, principal_congruence};
use princforge::construction::{assemble_k, pinned_gadget, search_gadgets, verify_gadget, SearchConfig};
use princforge::harness::{exhaust_theorem1, random_theorem2, Bundle, GeneratorConfig};
use princforge::lattice::{lattice_from_order, Role};
use princforge::order::order_isomorphism;
use princforge::FiniteLattice;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;

const SEED: u64 = 20240601;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn oracle_matches(name: &str, l: &FiniteLattice) -> Result<(), String> {
    let truth = partition_oracle(l);
    let engine: BTreeSet<Vec<usize>> = enumerate_congruences(l).map_err(|e| e.to_string())?.members().iter().map(key).collect();
    let brute: BTreeSet<Vec<usize>> = brute_force_congruences(l).map_err(|e| e.to_string())?.members().iter().map(key).collect();
    ensure(engine == truth, || format!("{name}: closure engine finds {} congruences, oracle {}", engine.len(), truth.len()))?;
    ensure(brute == truth, || format!("{name}: brute force finds {} congruences, oracle {}", brute.len(), truth.len()))?;
    for x in 0..l.len() {
        for y in x..l.len() {
            let got = key(&principal_congruence(l, x, y));
            ensure(got == oracle_principal(&truth, l.len(), x, y), || format!("{name}: con({x},{y}) is not minimal"))?;
        }
    }
    Ok(())
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut sizes = [0usize; 8];
    for k in 0..200 {
        let l = random_lattice(&mut rng, 7);
        sizes[l.len()] += 1;
        oracle_matches(&format!("random lattice #{k}"), &l)?;
    }
    for (name, l) in fixtures() {
        oracle_matches(name, &l)?;
    }
    Ok(format!("200 random lattices (sizes 2..7: {:?}) + 4 fixtures", &sizes[2..]))
}

fn fixture_counts() -> Outcome {
    let expected = [("N5", n5(), 5), ("4-chain", chain_lattice(4), 8)];
    let diamond = lattice_from_order(&diamond()).unwrap();
    let mut parts = Vec::new();
    for (name, l, want) in expected.into_iter().chain([("diamond", diamond, 4)]) {
        let oracle = partition_oracle(&l).len();
        let engine = enumerate_congruences(&l).map_err(|e| e.to_string())?.len();
        ensure(oracle == want && engine == want, || format!("{name}: oracle {oracle}, engine {engine}, frozen {want}"))?;
        parts.push(format!("{name}={want}"));
    }
    Ok(parts.join(", "))
}

fn gadget_reconstruction() -> Outcome {
    let start = Instant::now();
    let out = search_gadgets(&SearchConfig {
        max_aux: 3,
        ..SearchConfig::default()
    })
    .map_err(|e| e.to_string())?;
    let took = start.elapsed();
    ensure(!out.gadgets.is_empty(), || format!("no passer among {} candidates", out.examined))?;
    ensure(took <= Duration::from_secs(60), || format!("search took {took:?}"))?;
    let report = verify_gadget(&pinned_gadget());
    ensure(report.passes_contract(), || format!("pinned gadget fails: {report:?}"))?;
    ensure(report.oracle_checked, || "pinned gadget was not oracle-checked".into())?;
    Ok(format!(
        "{} passer(s) after {} candidates in {:.2?}; pinned gadget passes C1-C7 (oracle-checked)",
        out.gadgets.len(),
        out.examined,
        took
    ))
}

fn theorem1_exhaustive() -> Outcome {
    let template = pinned_gadget();
    let (summary, _) = exhaust_theorem1(3, &template);
    ensure(summary.instances == 9, || format!("{} classes, expected 9", summary.instances))?;
    for r in &summary.reports {
        ensure(r.verified(), || format!("{}: {:?}", r.instance, r.counterexample))?;
        for name in ["princ_iso", "gamma", "con_down"] {
            ensure(r.check_named(name).is_some_and(|c| c.passed), || format!("{}: {name} missing", r.instance))?;
        }
    }
    // independent counts: |Princ K| = |P|, |Con K| = number of nonempty down sets
    for p in princforge::harness::enumerate_small_posets(3) {
        let b = assemble_k(&p, &template).map_err(|e| e.to_string())?;
        let princ = princforge::congruence::principal_order(&b.lattice).map_err(|e| e.to_string())?;
        let con = enumerate_congruences(&b.lattice).map_err(|e| e.to_string())?;
        ensure(princ.len() == p.len(), || format!("|Princ K| = {} for |P| = {}", princ.len(), p.len()))?;
        let downs = down_set_poset(&p);
        ensure(con.len() == downs.len(), || format!("|Con K| = {} but {} down sets", con.len(), downs.len()))?;
        if b.lattice.len() <= 10 {
            ensure(partition_oracle(&b.lattice).len() == downs.len(), || "oracle disagrees on Con K".into())?;
        }
        let con_poset = con.to_poset().ok_or("Con K unbounded")?;
        ensure(order_isomorphism(&con_poset, &downs).is_some(), || format!("Con K is not isomorphic to Down⁻P for {p:?}"))?;
    }
    Ok(format!("9 classes verified in {} checks", summary.reports.iter().map(|r| r.checks.len()).sum::<usize>()))
}

fn campaign_cfg() -> GeneratorConfig {
    GeneratorConfig {
        seed: SEED,
        max_p_interior: 3,
        max_q_interior: 3,
        trials: 120,
    }
}

fn theorem2_random(bundles: &mut Vec<Bundle>) -> Outcome {
    let (summary, b) = random_theorem2(&campaign_cfg(), &pinned_gadget());
    let required = ["alpha_iso", "beta_iso", "square", "ext_properties", "link_equal", "bi_principal"];
    for r in &summary.reports {
        ensure(r.verified(), || format!("{}: {:?}", r.instance, r.counterexample))?;
        for name in required {
            ensure(r.check_named(name).is_some_and(|c| c.passed), || format!("{}: {name} missing", r.instance))?;
        }
    }
    let nontrivial = summary.reports.iter().filter(|r| r.stats.get("deleted").copied().unwrap_or(0) > 0).count();
    *bundles = b;
    Ok(format!(
        "{} triples verified ({} with nonempty P⁻), max |L| = {}",
        summary.instances,
        nontrivial,
        summary.reports.iter().filter_map(|r| r.stats.get("l")).max().unwrap_or(&0)
    ))
}

fn identity_case() -> Outcome {
    let template = pinned_gadget();
    let mut n = 0;
    for p in princforge::harness::enumerate_small_posets(3) {
        let b = assemble_k(&p, &template).map_err(|e| e.to_string())?;
        let carrier = b.lattice.order().elements().iter().cloned().collect();
        let e = ext_map(&b.lattice, &carrier).map_err(|e| e.to_string())?;
        ensure(e.is_identity(), || format!("ext(K, K) not the identity for {p:?}"))?;
        ensure(
            (0..e.source.len()).all(|i| e.assignment[i] == e.target.position(&e.source.members()[i]).unwrap()),
            || "assignment is not positional identity".into(),
        )?;
        n += 1;
    }
    Ok(format!("{n} builds"))
}

fn slimming_contract(bundles: &[Bundle]) -> Outcome {
    let mut deletions = 0;
    let mut remaps = 0;
    for b in bundles {
        let (mut current, _) = b.l_plus.clone().ok_or("bundle without L⁺")?.into_lattice().map_err(|e| e.to_string())?;
        for (rec, (p, q)) in b.slims.iter().zip(&b.links) {
            let x = Role::X(p.clone(), q.clone()).id();
            ensure(rec.x == x, || "slim order differs from link order".into())?;
            ensure(slimmable(&current, &x), || format!("{x} not slimmable at deletion time"))?;
            let keep: Vec<usize> = (0..current.len()).filter(|&y| current.id(y) != &x).collect();
            let next = lattice_from_order(&current.order().restrict(&keep).map_err(|e| e.to_string())?)
                .map_err(|e| format!("after deleting {x}: {e}"))?;
            remaps += rec.remapped.len();
            deletions += 1;
            current = next;
        }
        let (stored, _) = b.lattice.clone().into_lattice().map_err(|e| e.to_string())?;
        ensure(current == stored, || "replayed slimming differs from stored L".into())?;
    }
    ensure(remaps > 0, || "no meet remap fired on any instance".into())?;
    Ok(format!("{deletions} deletions over {} builds, {remaps} meet remaps", bundles.len()))
}

fn determinism() -> Outcome {
    let run = || {
        let template = pinned_gadget();
        let (s1, b1) = exhaust_theorem1(3, &template);
        let (s2, b2) = random_theorem2(&campaign_cfg(), &template);
        let mut text = serde_json::to_string(&s1).unwrap();
        text += &serde_json::to_string(&s2).unwrap();
        for b in b1.iter().chain(&b2) {
            text += &b.to_json();
        }
        text
    };
    let (a, b) = (run(), run());
    ensure(a == b, || "two runs differ".into())?;
    Ok(format!("{} identical bytes", a.len()))
}

fn main() -> ExitCode {
    let mut bundles = Vec::new();
    let results: Vec<(&str, Outcome)> = vec![
        ("oracle equivalence", oracle_equivalence()),
        ("fixture counts", fixture_counts()),
        ("gadget reconstruction", gadget_reconstruction()),
        ("theorem 1 exhaustive", theorem1_exhaustive()),
        ("theorem 2 randomized", theorem2_random(&mut bundles)),
        ("identity case", identity_case()),
        ("slimming contract", slimming_contract(&bundles)),
        ("determinism", determinism()),
    ];
    let mut failed = 0;
    for (name, r) in &results {
        match r {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
