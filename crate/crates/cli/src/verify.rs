//! The `gmspec verify` super-suite: every identity and numeric property
//! the crate stands behind, grouped into suites, with a machine-readable
//! report (see schema/verify-report.schema.json).

use crate::Suite;
use gmspec_core::combinatorics::{
    generalized_catalan, gridwalk_count, moment_ratio, recurrence_check, CountValue,
};
use gmspec_core::constraint_graphs::{
    enumerate_dominant_with_budget, expected_trace_sum, DEFAULT_VERTEX_BUDGET, SLOW_VERTEX_BUDGET,
};
use gmspec_core::graph_matrix::{
    brute_force_mean_trace, empirical_trace_moment_q1, exact_q1_moment, ks_distance,
    pooled_singular_values, replicate_seed,
};
use gmspec_core::spectrum::{
    density_z, density_z_complex, density_z_derivative, density_z_second_derivative,
    edge_exponent, moment_of_density, ode_z, solve_ode_3z, solve_ode_z, z_edge, CdfTable,
};
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

#[derive(Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Serialize)]
pub struct Report {
    pub suite: String,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<Check>,
}

fn check(checks: &mut Vec<Check>, name: &str, passed: bool, detail: String) {
    checks.push(Check { name: name.to_string(), passed, detail });
}

pub fn run_suite(suite: Suite, seed: u64, allow_slow: bool) -> Report {
    let mut checks = Vec::new();
    let all = suite == Suite::All;
    if all || suite == Suite::Combinatorics {
        combinatorics_checks(&mut checks);
    }
    if all || suite == Suite::Enumeration {
        enumeration_checks(&mut checks, allow_slow);
    }
    if all || suite == Suite::Structure {
        structure_checks(&mut checks, allow_slow);
    }
    if all || suite == Suite::Trace {
        trace_checks(&mut checks, seed);
    }
    if all || suite == Suite::Density {
        density_checks(&mut checks);
    }
    if all || suite == Suite::Ode {
        ode_checks(&mut checks);
    }
    if all || suite == Suite::Spectrum {
        spectrum_checks(&mut checks, seed);
    }
    let passed = checks.iter().all(|c| c.passed);
    let suite_name = match suite {
        Suite::Combinatorics => "combinatorics",
        Suite::Enumeration => "enumeration",
        Suite::Structure => "structure",
        Suite::Trace => "trace",
        Suite::Density => "density",
        Suite::Ode => "ode",
        Suite::Spectrum => "spectrum",
        Suite::All => "all",
    };
    Report { suite: suite_name.to_string(), seed, passed, checks }
}

fn combinatorics_checks(checks: &mut Vec<Check>) {
    let mut ok = true;
    let mut bad = String::new();
    for m in 1..=4u32 {
        for n in 0..=10u64 {
            if gridwalk_count(m, n).unwrap() != generalized_catalan(m, n).unwrap() {
                ok = false;
                bad = format!("mismatch at m={m}, n={n}");
            }
        }
    }
    check(checks, "gridwalks_match_closed_form", ok, if ok { "m<=4, n<=10".into() } else { bad });

    let mut ok = true;
    for m in 1..=4u32 {
        for row in recurrence_check(m, 8).unwrap() {
            ok &= row.equal;
        }
    }
    check(checks, "count_recurrence", ok, "m<=4, n<=8, exact".into());

    let mut ok = true;
    for m in [2u32, 3] {
        let mut acc = num_rational::Ratio::from_integer(BigInt::one());
        for k in 1..=10u64 {
            acc *= moment_ratio(m, k).unwrap();
            let expect = generalized_catalan(m, k).unwrap();
            ok &= acc.is_integer() && acc.to_integer().magnitude() == &expect;
        }
    }
    check(checks, "ratio_products_reconstruct_counts", ok, "m in {2,3}, k<=10, exact".into());
}

/// Criterion-1 table plus the slow (2,4) case when permitted.
fn dominant_cases(allow_slow: bool) -> Vec<(usize, usize, u64)> {
    let mut cases = vec![
        (1, 1, 1),
        (1, 2, 2),
        (1, 3, 5),
        (1, 4, 14),
        (1, 5, 42),
        (2, 1, 1),
        (2, 2, 3),
        (2, 3, 12),
        (3, 2, 4),
    ];
    if allow_slow {
        cases.push((2, 4, 55));
    }
    cases
}

fn enumeration_checks(checks: &mut Vec<Check>, allow_slow: bool) {
    let budget = if allow_slow { SLOW_VERTEX_BUDGET } else { DEFAULT_VERTEX_BUDGET };
    for (m, q, want) in dominant_cases(allow_slow) {
        let got = enumerate_dominant_with_budget(m, q, budget).unwrap().dominant_count;
        let formula = generalized_catalan(m as u32, q as u64).unwrap();
        let ok = got == want && CountValue::from(got) == formula;
        check(
            checks,
            &format!("dominant_count_m{m}_q{q}"),
            ok,
            format!("enumerated {got}, closed form {formula}"),
        );
    }
}

fn structure_checks(checks: &mut Vec<Check>, allow_slow: bool) {
    let budget = if allow_slow { SLOW_VERTEX_BUDGET } else { DEFAULT_VERTEX_BUDGET };
    for (m, q, _) in dominant_cases(allow_slow) {
        let report = enumerate_dominant_with_budget(m, q, budget).unwrap();
        let violations: usize =
            report.records.iter().filter(|r| r.first_violated(q).is_some()).count();
        check(
            checks,
            &format!("structure_predicates_m{m}_q{q}"),
            violations == 0,
            format!("{} dominant partitions, {violations} violations", report.records.len()),
        );
    }
}

fn trace_checks(checks: &mut Vec<Check>, seed: u64) {
    let (total, ne) = brute_force_mean_trace(1, 2, 4).unwrap();
    let expected = expected_trace_sum(1, 2, 4).unwrap();
    let ok = total == expected.clone() * BigInt::from(1u64 << ne);
    check(
        checks,
        "tiny_n_exact_trace",
        ok,
        format!("mean of tr((MM^T)^2) over all 64 graphs = {expected}, exact"),
    );

    let mut worst: f64 = 0.0;
    for (i, m) in [1usize, 2, 3].iter().enumerate() {
        for (j, n) in [10usize, 20].iter().enumerate() {
            let got =
                empirical_trace_moment_q1(*m, *n, replicate_seed(seed, (2 * i + j) as u64))
                    .unwrap();
            let want = exact_q1_moment(*m, *n);
            worst = worst.max((got - want).abs());
        }
    }
    check(
        checks,
        "q1_moment_identity",
        worst < 1e-12,
        format!("max |empirical - product formula| = {worst:.3e} (m in {{1,2,3}}, n in {{10,20}})"),
    );
}

fn density_checks(checks: &mut Vec<Check>) {
    let a = z_edge();
    let mut worst: f64 = 0.0;
    for k in 0..=6u32 {
        let want = generalized_catalan(2, k as u64).unwrap().to_f64().unwrap();
        let got = moment_of_density(density_z, a, k);
        worst = worst.max((got - want).abs() / want);
    }
    check(
        checks,
        "z_density_moments",
        worst < 1e-4,
        format!("max rel err vs counts over k<=6: {worst:.3e}"),
    );

    let ms: Vec<f64> = (0..=6).map(|k| moment_of_density(density_z, a, k)).collect();
    let mut worst: f64 = 0.0;
    for k in 0..=5usize {
        let kf = k as f64;
        let lhs = (2.0 * kf + 3.0) * (2.0 * kf + 2.0) * ms[k + 1];
        let rhs = 3.0 * (3.0 * kf + 2.0) * (3.0 * kf + 1.0) * ms[k];
        worst = worst.max((lhs - rhs).abs() / rhs);
    }
    check(checks, "z_moment_recurrence", worst < 1e-3, format!("max rel defect {worst:.3e}"));

    let mut worst: f64 = 0.0;
    let mut x = 0.01;
    while x < a - 0.01 {
        worst = worst.max((density_z(x) - density_z_complex(x)).abs());
        x += 0.005;
    }
    check(
        checks,
        "complex_form_agreement",
        worst < 1e-12,
        format!("sup gap {worst:.3e} on (0.01, a-0.01)"),
    );
}

fn ode_checks(checks: &mut Vec<Check>) {
    let a = z_edge();
    let ode = ode_z();
    let mut worst: f64 = 0.0;
    let mut x = 0.05 * a;
    while x <= 0.95 * a {
        let d = [density_z(x), density_z_derivative(x), density_z_second_derivative(x)];
        worst = worst.max(ode.relative_residual(x, &d));
        x += 0.001 * a;
    }
    check(
        checks,
        "z_ode_residual",
        worst < 1e-6,
        format!("max relative residual {worst:.3e} on [0.05a, 0.95a]"),
    );

    let mut sups = Vec::new();
    for eps in [1e-2, 1e-3, 1e-4] {
        let table = solve_ode_z(eps).unwrap();
        sups.push(table.sup_distance(density_z, 0.1, a - 0.01));
    }
    let ok = sups[0] > sups[1] && sups[1] > sups[2] && sups[2] < 1e-2;
    check(
        checks,
        "ode_vs_closed_form_convergence",
        ok,
        format!(
            "sup distances [{}] over eps in {{1e-2,1e-3,1e-4}}",
            sups.iter().map(|s| format!("{s:.2e}")).collect::<Vec<_>>().join(", ")
        ),
    );
}

fn spectrum_checks(checks: &mut Vec<Check>, seed: u64) {
    let table = solve_ode_3z(1e-4).unwrap();
    let m0 = table.moment(0);
    let m1 = table.moment(1);
    let m2 = table.moment(2);
    let expo = edge_exponent(&table, 0.2, 0.01);
    let ok = (m0 - 1.0).abs() < 1e-9
        && (m1 - 1.0).abs() < 0.03
        && (m2 - 4.0).abs() / 4.0 < 0.05
        && (expo - 0.5).abs() < 0.05;
    check(
        checks,
        "three_layer_density",
        ok,
        format!("moments {m0:.6}, {m1:.4}, {m2:.4}; edge exponent {expo:.4}"),
    );

    let cdf = CdfTable::build(density_z, z_edge(), 2001);
    let mut dists = Vec::new();
    for n in [20usize, 30, 40] {
        let pooled = pooled_singular_values(2, n, 30, seed).unwrap();
        dists.push(ks_distance(&pooled, |x| cdf.eval(x)));
    }
    let ok = dists[0] > dists[1] && dists[1] > dists[2] && dists[2] < 0.08;
    check(
        checks,
        "monte_carlo_spectrum_convergence",
        ok,
        format!("KS distances {dists:.4?} over n in {{20,30,40}}, 30 reps"),
    );
}
