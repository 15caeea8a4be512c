//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line. All comparisons are exact integer equalities; there are no
//! tolerances anywhere.

use num_bigint::{BigInt, BigUint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use flag3::experiments::{reproduce_examples, sample_candidate_stats, StatsConfig, VertexMode};
use flag3::flagvec::{f_to_h, h_to_f, product_bounds, ColorPermutation, FlagVector, HVector};
use flag3::maximize::{maximize, within_candidate_bound, MaxResult};
use flag3::oracle::{brute_max, OracleOptions};

fn report(criterion: &str, failures: Vec<String>) {
    if failures.is_empty() {
        println!("{criterion}: PASS");
    } else {
        println!("{criterion}: FAIL ({} problem(s))", failures.len());
        for f in &failures {
            println!("  - {f}");
        }
        panic!("{criterion} failed:\n{}", failures.join("\n"));
    }
}

#[test]
fn criterion_1_golden_examples() {
    let start = std::time::Instant::now();
    let mut failures = Vec::new();
    let results = reproduce_examples();
    for result in &results {
        for f in &result.failures {
            failures.push(format!("{}: {}", result.name, f));
        }
    }
    println!(
        "criterion 1: {} cases in {:?} ({:?} per case)",
        results.len(),
        start.elapsed(),
        start.elapsed() / results.len() as u32
    );
    report("criterion 1 (golden examples reproduce exactly)", failures);
}

/// Every budget combination on the small grid, compared against the
/// exhaustive search.
fn small_grid() -> Vec<FlagVector> {
    let mut instances = Vec::new();
    for f1 in 1u64..=4 {
        for f2 in 1u64..=4 {
            for f3 in 1u64..=4 {
                let caps = [(f1 * f2).min(8), (f1 * f3).min(8), (f2 * f3).min(8)];
                for e12 in 1..=caps[0] {
                    for e13 in 1..=caps[1] {
                        for e23 in 1..=caps[2] {
                            instances.push(FlagVector::from_u64([f1, f2, f3], [e12, e13, e23]));
                        }
                    }
                }
            }
        }
    }
    instances
}

#[test]
fn criterion_2_oracle_equivalence_exhaustive() {
    let instances = small_grid();
    let total = instances.len();
    let failures: Vec<String> = instances
        .par_iter()
        .filter_map(|fv| {
            let fast = maximize(fv).expect("grid instances satisfy the product bounds");
            let brute = brute_max(fv, &OracleOptions::default()).expect("within cap");
            (fast.m != brute.m)
                .then(|| format!("{fv}: driver m = {}, exhaustive m = {}", fast.m, brute.m))
        })
        .collect();
    println!("criterion 2: {total} instances compared");
    report(
        "criterion 2 (driver equals exhaustive search on the full small grid)",
        failures,
    );
}

#[test]
fn criterion_3_discreteness_case() {
    let fv = FlagVector::from_u64([5, 5, 5], [5, 5, 5]);
    let mut failures = Vec::new();
    let fast = maximize(&fv).expect("feasible");
    if fast.m != BigUint::from(9u32) {
        failures.push(format!("driver m = {}, expected 9", fast.m));
    }
    let brute = brute_max(&fv, &OracleOptions::default()).expect("within cap");
    if brute.m != BigUint::from(9u32) {
        failures.push(format!("exhaustive m = {}, expected 9", brute.m));
    }
    let bounds = product_bounds(&fv);
    if bounds.geometric != BigUint::from(11u32) {
        failures.push(format!(
            "geometric bound = {}, expected 11",
            bounds.geometric
        ));
    }
    report(
        "criterion 3 (all-fives instance: exact 9, geometric bound 11)",
        failures,
    );
}

#[test]
fn criterion_4_candidate_budget() {
    let report_stats = sample_candidate_stats(StatsConfig {
        samples: 1000,
        edge_max: 1_000_000,
        mode: VertexMode::Ample,
        seed: 0,
    });
    let mut failures = Vec::new();
    if report_stats.bound_violations != 0 {
        failures.push(format!(
            "{} instances violated the exact candidate-count bound",
            report_stats.bound_violations
        ));
    }
    if !report_stats.mean_below(15) {
        failures.push(format!(
            "mean candidates {} is not below 15",
            report_stats.mean_candidates()
        ));
    }
    println!(
        "criterion 4: mean candidates = {}, max = {}",
        report_stats.mean_candidates(),
        report_stats.max_candidates
    );
    report(
        "criterion 4 (candidate budget on 1000 seeded instances)",
        failures,
    );
}

fn check_witness_soundness(
    tag: &str,
    fv: &FlagVector,
    result: &MaxResult,
    failures: &mut Vec<String>,
) {
    if result.witness.facet_count() != result.m {
        failures.push(format!("{tag}: witness facet count differs from m"));
    }
    if !result.witness.within_budget(fv) {
        failures.push(format!("{tag}: witness exceeds the budgets"));
    }
    if !result.witness.is_color_shifted() {
        failures.push(format!("{tag}: witness is not color-shifted"));
    }
}

/// A mix of instance scales, all satisfying the product bounds by
/// construction.
fn random_instance(rng: &mut ChaCha8Rng, style: usize) -> FlagVector {
    match style % 3 {
        0 => {
            let f: [u64; 3] = std::array::from_fn(|_| rng.random_range(1..=4));
            let e = [
                rng.random_range(1..=(f[0] * f[1]).min(8)),
                rng.random_range(1..=(f[0] * f[2]).min(8)),
                rng.random_range(1..=(f[1] * f[2]).min(8)),
            ];
            FlagVector::from_u64(f, e)
        }
        1 => {
            let f: [u64; 3] = std::array::from_fn(|_| rng.random_range(1..=100));
            let e = [
                rng.random_range(1..=(f[0] * f[1]).min(2000)),
                rng.random_range(1..=(f[0] * f[2]).min(2000)),
                rng.random_range(1..=(f[1] * f[2]).min(2000)),
            ];
            FlagVector::from_u64(f, e)
        }
        _ => {
            let e: [u64; 3] = std::array::from_fn(|_| rng.random_range(1..=1_000_000));
            FlagVector::from_u64([1_000_000; 3], e)
        }
    }
}

#[test]
fn criterion_5_property_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut failures = Vec::new();
    let instances: Vec<FlagVector> = (0..600).map(|i| random_instance(&mut rng, i)).collect();

    for (i, fv) in instances.iter().enumerate() {
        let result = match maximize(fv) {
            Ok(r) => r,
            Err(e) => {
                failures.push(format!("instance {i} {fv}: unexpected infeasibility {e}"));
                continue;
            }
        };
        check_witness_soundness(&format!("instance {i} {fv}"), fv, &result, &mut failures);

        // m² ≤ f12·f13·f23 and m ≤ min(f1·f23, f2·f13, f3·f12), exactly.
        let bounds = product_bounds(fv);
        let [e12, e13, e23] = fv.edges();
        if &result.m * &result.m > e12 * e13 * e23 {
            failures.push(format!("instance {i} {fv}: m² exceeds the edge product"));
        }
        if result.m > *bounds.min_vertex_edge() {
            failures.push(format!(
                "instance {i} {fv}: m exceeds a vertex-times-opposite-edges bound"
            ));
        }
        if !within_candidate_bound(fv, result.candidates_constructed) {
            failures.push(format!("instance {i} {fv}: candidate bound violated"));
        }

        // Shortcut consistency: a firing shortcut pins m to its product.
        match &result.shortcut {
            flag3::maximize::Shortcut::Vertedge { color, .. } => {
                let expected =
                    fv.vertex(*color) * fv.edge(flag3::flagvec::ColorPair::opposite(*color));
                if result.m != expected {
                    failures.push(format!(
                        "instance {i} {fv}: vertex-edge shortcut m mismatch"
                    ));
                }
            }
            flag3::maximize::Shortcut::B1Zero => {
                let mut e = fv.edges().clone();
                e.sort();
                if result.m != &e[0] * &e[1] {
                    failures.push(format!(
                        "instance {i} {fv}: degenerate-core shortcut m mismatch"
                    ));
                }
            }
            _ => {}
        }

        // Permutation invariance, with witness soundness on each call.
        for perm in ColorPermutation::all() {
            let permuted = fv.permuted(&perm);
            let other = maximize(&permuted).expect("permutation preserves feasibility");
            if other.m != result.m {
                failures.push(format!(
                    "instance {i} {fv}: m changes under relabeling {perm}"
                ));
            }
            check_witness_soundness(
                &format!("instance {i} {fv} under {perm}"),
                &permuted,
                &other,
                &mut failures,
            );
        }
    }

    // Monotonicity under unit budget increments, spot-checked against the
    // exhaustive search on the desk-scale instances.
    for (i, fv) in instances.iter().take(100).enumerate() {
        let base = maximize(fv).expect("feasible").m;
        let small = *fv.vertices().iter().chain(fv.edges()).max().unwrap() <= BigUint::from(8u32);
        if small {
            let brute = brute_max(fv, &OracleOptions::default()).expect("within cap");
            if brute.m != base {
                failures.push(format!("instance {i} {fv}: exhaustive disagreement"));
            }
        }
        let f: Vec<u64> = fv
            .vertices()
            .iter()
            .map(|v| u64::try_from(v).unwrap())
            .collect();
        let e: Vec<u64> = fv
            .edges()
            .iter()
            .map(|v| u64::try_from(v).unwrap())
            .collect();
        for slot in 0..6 {
            let mut f2: [u64; 3] = [f[0], f[1], f[2]];
            let mut e2: [u64; 3] = [e[0], e[1], e[2]];
            if slot < 3 {
                f2[slot] += 1;
            } else {
                e2[slot - 3] += 1;
            }
            let bumped = FlagVector::from_u64(f2, e2);
            if !flag3::flagvec::validate(&bumped).is_feasible_so_far() {
                continue;
            }
            let result = maximize(&bumped).expect("feasible");
            check_witness_soundness(
                &format!("instance {i} {bumped} (slot {slot} bumped)"),
                &bumped,
                &result,
                &mut failures,
            );
            if result.m < base {
                failures.push(format!(
                    "instance {i} {fv}: m decreased after incrementing slot {slot}"
                ));
            }
        }
    }

    report(
        "criterion 5 (bounds, invariance, monotonicity, witness soundness)",
        failures,
    );
}

#[test]
fn criterion_6_transform_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut failures = Vec::new();
    for i in 0..1000 {
        let entries: [BigInt; 8] = std::array::from_fn(|_| {
            BigInt::from(rng.random_range(-1_000_000_000i64..=1_000_000_000))
        });
        let h = f_to_h(&entries);
        if h_to_f(&h) != entries {
            failures.push(format!("vector {i}: f→h→f is not the identity"));
        }
        let back = f_to_h(&h_to_f(&HVector {
            entries: entries.clone(),
        }));
        if back.entries != entries {
            failures.push(format!("vector {i}: h→f→h is not the identity"));
        }
    }
    report(
        "criterion 6 (f↔h round-trip on 1000 random vectors)",
        failures,
    );
}
