//! Property-based checks of the structural invariants the modules
//! promise, on randomized small inputs.

use gmspec_core::combinatorics::{generalized_catalan, gridwalk_count};
use gmspec_core::constraint_graphs::{build_h, enumerate_dominant};
use gmspec_core::graph_matrix::{
    exact_q1_moment, histogram, ks_distance, make_multi_z_shape, matrix_entry, replicate_seed,
    sample_graph, trace_moment_q1,
};
use gmspec_core::graph_matrix::build_matrix;
use proptest::prelude::*;

proptest! {
    /// The grid-walk DP agrees with the closed form everywhere in the
    /// cheap range, not just at the pinned acceptance points.
    #[test]
    fn gridwalks_equal_closed_form(m in 1u32..=5, n in 0u64..=8) {
        prop_assert_eq!(gridwalk_count(m, n).unwrap(), generalized_catalan(m, n).unwrap());
    }

    /// Histogram densities integrate to 1 (within 1e-12) and counts are
    /// conserved, for arbitrary nonnegative samples.
    #[test]
    fn histogram_mass_is_conserved(
        values in prop::collection::vec(0.0f64..10.0, 1..200),
        bins in 1usize..50,
    ) {
        let hi = values.iter().cloned().fold(0.1f64, f64::max) * 1.5;
        let h = histogram(&values, bins, hi).unwrap();
        prop_assert!((h.integral() - 1.0).abs() < 1e-12);
        prop_assert_eq!(h.bins.iter().map(|b| b.count).sum::<usize>(), values.len());
    }

    /// Kolmogorov distance is a number in [0, 1].
    #[test]
    fn ks_distance_in_unit_interval(mut sample in prop::collection::vec(0.0f64..5.0, 1..100)) {
        sample.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let d = ks_distance(&sample, |x| (x / 5.0).clamp(0.0, 1.0));
        prop_assert!((0.0..=1.0).contains(&d));
    }

    /// Graph sampling is a pure function of (n, seed), and matrix entries
    /// vanish exactly on overlapping tuples.
    #[test]
    fn sampling_and_entries(seed in any::<u64>(), n in 4usize..8) {
        let g1 = sample_graph(n, seed);
        let g2 = sample_graph(n, seed);
        let shape = make_multi_z_shape(2).unwrap();
        for a in [[0usize, 1], [1, 2], [2, 3]] {
            for b in [[0usize, 1], [2, 3], [1, 3]] {
                let e1 = matrix_entry(&shape, &g1, &a, &b);
                prop_assert_eq!(e1, matrix_entry(&shape, &g2, &a, &b));
                let overlap = a.iter().any(|x| b.contains(x));
                prop_assert_eq!(e1 == 0, overlap);
            }
        }
    }

    /// The q = 1 normalized trace moment equals the falling-factorial
    /// product for every sampled graph, not just the pinned cases.
    #[test]
    fn q1_identity_for_random_graphs(seed in any::<u64>(), n in 4usize..9) {
        let shape = make_multi_z_shape(2).unwrap();
        let mat = build_matrix(&shape, &sample_graph(n, seed)).unwrap();
        let got = trace_moment_q1(&mat);
        prop_assert!((got - exact_q1_moment(2, n)).abs() < 1e-12);
    }

    /// Derived replicate seeds don't collide for nearby replicate indices.
    #[test]
    fn replicate_seeds_injective_locally(master in any::<u64>(), k in 0u64..1000) {
        prop_assert_ne!(replicate_seed(master, k), replicate_seed(master, k + 1));
    }
}

/// Every dominant partition has exactly m(q+1) blocks and even quotient
/// edge multiplicities by construction; spot-check the block count
/// invariant across the feasible grid.
#[test]
fn dominant_partitions_have_expected_block_count() {
    for (m, q) in [(1usize, 4usize), (2, 2), (2, 3), (3, 2)] {
        let h = build_h(m, q).unwrap();
        for rec in enumerate_dominant(m, q).unwrap().records {
            assert_eq!(rec.partition.block_count, m * (q + 1));
            assert_eq!(rec.partition.edge_count(&h), m * (q - 1));
        }
    }
}
