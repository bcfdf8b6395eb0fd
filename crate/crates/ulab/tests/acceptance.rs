//! End-to-end acceptance gate: one check per shipped guarantee, each backed
//! by a recipe runnable from the CLI (`ulab recipe --name <...>`).

use ulab::recipe::{recipe_names, run_recipe, Report};

const SEED: u64 = 0;

fn run_criterion(number: usize, recipe: &str, summary: &str) -> bool {
    let report = run_recipe(recipe, SEED).expect("recipe must run");
    let status = if report.passed { "PASS" } else { "FAIL" };
    println!("criterion {number}: {status} — {summary} [{recipe}]");
    for check in &report.checks {
        if !check.passed {
            println!("  failed check: {} values={:?}", check.label, check.values);
        }
    }
    report.passed
}

fn all_reports_json() -> String {
    let mut out = String::new();
    for name in recipe_names() {
        let report: Report = run_recipe(name, SEED).expect("recipe must run");
        out.push_str(&report.to_json().expect("serialize"));
        out.push('\n');
    }
    out
}

#[test]
fn acceptance() {
    let mut ok = true;
    ok &= run_criterion(1, "gowers-oracle", "recursive norm vs brute-force and Fourier oracles");
    ok &= run_criterion(2, "norm-axioms", "triangle inequality and homogeneity, d in {2,3}");
    ok &= run_criterion(3, "ln-gap", "prime vs weighted average gap at 1e6");
    ok &= run_criterion(4, "tg-trend", "centered weight uniformity decreasing in w");
    ok &= run_criterion(5, "te-instances", "exact first recurrence hits along shifted primes");
    ok &= run_criterion(6, "cn2-positivity", "closest-integer positivity battery, W in {1,6,30}");
    ok &= run_criterion(7, "tt3-cauchy", "Cauchy gaps along primes decreasing");
    ok &= run_criterion(8, "lv-constant", "van der Corput empirical constant C=4");
    ok &= run_criterion(9, "l102-decomposition", "closest-integer decomposition on sampled triples");
    ok &= run_criterion(10, "negative-floor", "floor-mode paired iterates never recur");
    ok &= run_criterion(11, "p2-uniform-sets", "omega-set uniformity profile and along-set averages");

    // Criterion 12: byte-identical reports at different thread counts.
    let pool1 = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let pool4 = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
    let serial = pool1.install(all_reports_json);
    let parallel = pool4.install(all_reports_json);
    let deterministic = serial == parallel;
    println!(
        "criterion 12: {} — byte-identical reports at 1 vs 4 threads",
        if deterministic { "PASS" } else { "FAIL" }
    );
    ok &= deterministic;

    assert!(ok, "one or more acceptance criteria failed; see lines above");
}
