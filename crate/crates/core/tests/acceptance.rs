//! Acceptance suite: one test per release criterion, each printing a
//! single pass/fail line through the harness. Tolerances are the ones
//! the crate is specified against; loosening them here is a release
//! blocker, not a fix.

use gmspec_core::combinatorics::{
    generalized_catalan, gridwalk_count, moment_ratio, recurrence_check,
};
use gmspec_core::constraint_graphs::{enumerate_dominant, expected_trace_sum};
use gmspec_core::graph_matrix::{
    brute_force_mean_trace, empirical_trace_moment_q1, exact_q1_moment, ks_distance,
    pooled_singular_values,
};
use gmspec_core::spectrum::{
    density_z, density_z_derivative, density_z_second_derivative, edge_exponent,
    moment_of_density, ode_z, solve_ode_3z, solve_ode_z, z_edge, CdfTable,
};
use num_bigint::{BigInt, BigUint};
use num_rational::Ratio;
use num_traits::{One, ToPrimitive};

const SEED: u64 = 17;

/// Exact counts: enumeration matches the closed form for
/// (m=1, q<=5), (m=2, q<=3), (m=3, q=2).
#[test]
fn criterion_01_exact_dominant_counts() {
    let table: &[(usize, usize, u64)] = &[
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
    for &(m, q, want) in table {
        let got = enumerate_dominant(m, q).unwrap().dominant_count;
        assert_eq!(got, want, "(m, q) = ({m}, {q})");
        assert_eq!(
            BigUint::from(got),
            generalized_catalan(m as u32, q as u64).unwrap(),
            "closed form at (m, q) = ({m}, {q})"
        );
    }
}

/// Grid-walk oracle agrees with the closed form for m <= 4, n <= 10.
#[test]
fn criterion_02_gridwalks_match_closed_form() {
    for m in 1..=4u32 {
        for n in 0..=10u64 {
            assert_eq!(
                gridwalk_count(m, n).unwrap(),
                generalized_catalan(m, n).unwrap(),
                "m = {m}, n = {n}"
            );
        }
    }
}

/// The count recurrence holds exactly for m <= 4, n <= 8, and the
/// moment-ratio telescoping products reconstruct the counts for k <= 10.
#[test]
fn criterion_03_recurrence_and_ratio_products() {
    for m in 1..=4u32 {
        for row in recurrence_check(m, 8).unwrap() {
            assert!(row.equal, "recurrence fails at m = {m}, n = {}", row.n);
        }
    }
    for m in [2u32, 3] {
        let mut acc = Ratio::from_integer(BigInt::one());
        for k in 1..=10u64 {
            acc *= moment_ratio(m, k).unwrap();
            assert!(acc.is_integer(), "non-integer product at m = {m}, k = {k}");
            assert_eq!(
                acc.to_integer().magnitude(),
                &generalized_catalan(m, k).unwrap(),
                "m = {m}, k = {k}"
            );
        }
    }
}

/// Exact average of tr((MM^T)^2) over all 64 graphs on 4 vertices equals
/// the constraint-graph sum, as integers.
#[test]
fn criterion_04_tiny_n_exact_trace() {
    let (total, edge_bits) = brute_force_mean_trace(1, 2, 4).unwrap();
    assert_eq!(edge_bits, 6);
    let expected = expected_trace_sum(1, 2, 4).unwrap();
    assert_eq!(total, expected * BigInt::from(1u64 << edge_bits));
}

/// The q = 1 trace moment equals the falling-factorial product to 1e-12
/// for m in {1, 2, 3} and n in {10, 20}, on sampled graphs.
#[test]
fn criterion_05_q1_moment_identity() {
    for (i, &m) in [1usize, 2, 3].iter().enumerate() {
        for (j, &n) in [10usize, 20].iter().enumerate() {
            let got = empirical_trace_moment_q1(m, n, SEED + (2 * i + j) as u64).unwrap();
            let want = exact_q1_moment(m, n);
            assert!(
                (got - want).abs() < 1e-12,
                "m = {m}, n = {n}: {got} vs {want}"
            );
        }
    }
}

/// Quadrature moments of the Z density match the counts to 1e-4 relative
/// for k = 0..6.
#[test]
fn criterion_06_density_moments() {
    let a = z_edge();
    for k in 0..=6u32 {
        let want = generalized_catalan(2, k as u64).unwrap().to_f64().unwrap();
        let got = moment_of_density(density_z, a, k);
        assert!(
            (got - want).abs() / want < 1e-4,
            "k = {k}: {got} vs {want}"
        );
    }
}

/// The analytic Z density satisfies its ODE to 1e-6 relative residual on
/// [0.05a, 0.95a].
#[test]
fn criterion_07_ode_residual() {
    let a = z_edge();
    let ode = ode_z();
    let mut x = 0.05 * a;
    while x <= 0.95 * a {
        let d = [density_z(x), density_z_derivative(x), density_z_second_derivative(x)];
        let r = ode.relative_residual(x, &d);
        assert!(r < 1e-6, "residual {r:.3e} at x = {x}");
        x += 0.001 * a;
    }
}

/// Backward ODE solutions converge to the closed form as the edge offset
/// shrinks: sup distance on [0.1, a-0.01] decreasing over
/// eps in {1e-2, 1e-3, 1e-4} and below 1e-2 at 1e-4.
#[test]
fn criterion_08_ode_vs_closed_form_convergence() {
    let a = z_edge();
    let mut last = f64::INFINITY;
    for eps in [1e-2, 1e-3, 1e-4] {
        let sup = solve_ode_z(eps).unwrap().sup_distance(density_z, 0.1, a - 0.01);
        assert!(sup < last, "sup not decreasing at eps = {eps}: {sup} vs {last}");
        last = sup;
    }
    assert!(last < 1e-2, "sup at eps = 1e-4: {last}");
}

/// The solved 3-layer density has unit mass, second moment within 3% of
/// 1, fourth moment within 5% of 4, and a square-root edge (exponent
/// 0.5 +- 0.05).
#[test]
fn criterion_09_three_layer_density() {
    let table = solve_ode_3z(1e-4).unwrap();
    assert!((table.moment(0) - 1.0).abs() < 1e-9);
    assert!((table.moment(1) - 1.0).abs() < 0.03, "M1 = {}", table.moment(1));
    assert!((table.moment(2) - 4.0).abs() / 4.0 < 0.05, "M2 = {}", table.moment(2));
    let expo = edge_exponent(&table, 0.2, 0.01);
    assert!((expo - 0.5).abs() < 0.05, "edge exponent {expo}");
}

/// Pooled empirical singular-value CDFs of sampled Z-shape matrices
/// approach the limiting CDF: Kolmogorov distance decreasing over
/// n in {20, 30, 40} (30 replicates each) and below 0.08 at n = 40.
#[test]
fn criterion_10_monte_carlo_spectrum_convergence() {
    println!("seed: {SEED}");
    let cdf = CdfTable::build(density_z, z_edge(), 2001);
    let mut last = f64::INFINITY;
    for n in [20usize, 30, 40] {
        let pooled = pooled_singular_values(2, n, 30, SEED).unwrap();
        let d = ks_distance(&pooled, |x| cdf.eval(x));
        println!("n = {n}: KS distance {d:.4}");
        assert!(d < last, "KS distance not decreasing at n = {n}: {d} vs {last}");
        last = d;
    }
    assert!(last < 0.08, "KS at n = 40: {last}");
}

/// Every dominant constraint graph at feasible sizes satisfies all
/// structural predicates; zero violations.
#[test]
fn criterion_11_structure_predicates() {
    for (m, q) in [
        (1usize, 1usize),
        (1, 2),
        (1, 3),
        (1, 4),
        (1, 5),
        (2, 1),
        (2, 2),
        (2, 3),
        (3, 2),
    ] {
        let report = enumerate_dominant(m, q).unwrap();
        for rec in &report.records {
            assert_eq!(
                rec.first_violated(q),
                None,
                "violation at (m, q) = ({m}, {q})"
            );
        }
    }
}
