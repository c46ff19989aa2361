//! Multi-Z shapes, random ±1 graphs, and the graph matrices they induce:
//! dense construction, singular values, empirical trace moments and
//! spectral histograms.
//!
//! For the m-layer Z-shape every shape vertex lies in `U ∪ V`, so the
//! matrix entry at (A, B) is a single product of edge variables when the
//! concatenated tuple is injective, and 0 otherwise.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphMatrixError {
    #[error("m must be >= 1")]
    InvalidLayers,
    #[error("need n >= 2m = {min} input vertices, got {n}")]
    TooFewVertices { n: usize, min: usize },
    #[error("histogram needs at least one bin and a positive range")]
    BadHistogram,
}

/// A shape: bipartite-ordered vertex tuples U, V and an edge list over
/// them. Vertices are encoded as `(side, index)` with side 0 = U, 1 = V.
#[derive(Debug, Clone)]
pub struct Shape {
    pub m: usize,
    /// Edges as pairs (u_index, v_index) into U and V respectively.
    pub edges: Vec<(usize, usize)>,
}

/// The m-layer Z-shape: U = (u_1..u_m), V = (v_1..v_m), with edges
/// {u_i, v_i} for i ∈ [m] and {u_{i+1}, v_i} for i ∈ [m-1]. m = 1 is the
/// line shape; m = 2 draws a "Z".
pub fn make_multi_z_shape(m: usize) -> Result<Shape, GraphMatrixError> {
    if m == 0 {
        return Err(GraphMatrixError::InvalidLayers);
    }
    let mut edges = Vec::with_capacity(2 * m - 1);
    for i in 0..m {
        edges.push((i, i));
    }
    for i in 0..m - 1 {
        edges.push((i + 1, i));
    }
    Ok(Shape { m, edges })
}

/// A random graph on `[n]` with i.i.d. uniform ±1 edge labels
/// (equivalently, a uniformly random graph identified with its ±1
/// adjacency signs).
#[derive(Debug, Clone)]
pub struct RandomGraph {
    pub n: usize,
    /// Upper-triangular edge signs, indexed by `pair_index(i, j)` with i < j.
    signs: Vec<i8>,
}

impl RandomGraph {
    fn pair_index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < j && j < self.n);
        // offset of row i in the strict upper triangle
        i * self.n - i * (i + 1) / 2 + (j - i - 1)
    }

    /// χ({i, j}) ∈ {−1, +1} for i ≠ j.
    pub fn sign(&self, i: usize, j: usize) -> i8 {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        self.signs[self.pair_index(i, j)]
    }

    /// Builds a graph from explicit signs in `pair_index` order
    /// (row-major strict upper triangle). Used for exhaustive small-n sweeps.
    pub fn from_signs(n: usize, signs: Vec<i8>) -> Self {
        debug_assert_eq!(signs.len(), n * (n - 1) / 2);
        debug_assert!(signs.iter().all(|&s| s == 1 || s == -1));
        RandomGraph { n, signs }
    }
}

/// Samples a uniform ±1 graph on `[n]`, deterministically from `seed`.
pub fn sample_graph(n: usize, seed: u64) -> RandomGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let signs = (0..n * (n - 1) / 2)
        .map(|_| if rng.gen::<bool>() { 1i8 } else { -1 })
        .collect();
    RandomGraph { n, signs }
}

/// Derives the seed for replicate `k` from a master seed
/// (SplitMix64-style finalizer, so replicates are decorrelated and the
/// mapping is reproducible across runs and platforms).
pub fn replicate_seed(master: u64, k: u64) -> u64 {
    let mut z = master ^ k.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// All m-tuples of distinct elements of `[n]` in lexicographic order;
/// the row/column index space of the graph matrix. Length n!/(n-m)!.
pub fn distinct_tuples(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(m);
    let mut used = vec![false; n];
    fn rec(
        n: usize,
        m: usize,
        cur: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for x in 0..n {
            if !used[x] {
                used[x] = true;
                cur.push(x);
                rec(n, m, cur, used, out);
                cur.pop();
                used[x] = false;
            }
        }
    }
    rec(n, m, &mut cur, &mut used, &mut out);
    out
}

/// Matrix dimension r(n, m) = n!/(n-m)!.
pub fn matrix_dimension(n: usize, m: usize) -> usize {
    (n - m + 1..=n).product()
}

/// Entry M_α[A, B] ∈ {−1, 0, +1}: 0 if A and B share a vertex, otherwise
/// the product of edge signs over the shape's edges.
pub fn matrix_entry(shape: &Shape, graph: &RandomGraph, a: &[usize], b: &[usize]) -> i8 {
    if a.iter().any(|x| b.contains(x)) {
        return 0;
    }
    let mut prod = 1i8;
    for &(ui, vi) in &shape.edges {
        prod *= graph.sign(a[ui], b[vi]);
    }
    prod
}

/// Dense graph matrix M_α as f64, rows/columns indexed by
/// `distinct_tuples(n, m)` in order, scaled by `n^{-m/2}`.
pub fn build_matrix(shape: &Shape, graph: &RandomGraph) -> Result<DMatrix<f64>, GraphMatrixError> {
    build_matrix_scaled(shape, graph, true)
}

/// As `build_matrix`, optionally without the `n^{-m/2}` normalization.
pub fn build_matrix_scaled(
    shape: &Shape,
    graph: &RandomGraph,
    normalize: bool,
) -> Result<DMatrix<f64>, GraphMatrixError> {
    let (n, m) = (graph.n, shape.m);
    if n < 2 * m {
        return Err(GraphMatrixError::TooFewVertices { n, min: 2 * m });
    }
    let tuples = distinct_tuples(n, m);
    let r = tuples.len();
    let scale = if normalize { (n as f64).powf(-(m as f64) / 2.0) } else { 1.0 };
    let mut mat = DMatrix::<f64>::zeros(r, r);
    for (ri, a) in tuples.iter().enumerate() {
        for (ci, b) in tuples.iter().enumerate() {
            let e = matrix_entry(shape, graph, a, b);
            if e != 0 {
                mat[(ri, ci)] = f64::from(e) * scale;
            }
        }
    }
    Ok(mat)
}

/// Singular values of `mat`, ascending, as square roots of the
/// eigenvalues of the symmetric product `M Mᵀ` (clamped at 0).
pub fn singular_values(mat: &DMatrix<f64>) -> Vec<f64> {
    let mmt = mat * mat.transpose();
    let mut s: Vec<f64> =
        mmt.symmetric_eigenvalues().iter().map(|&l| l.max(0.0).sqrt()).collect();
    s.sort_by(|a, b| a.partial_cmp(b).unwrap());
    s
}

/// Normalized trace moments `(1/r) tr((M Mᵀ)^q) = (1/r) Σ_i s_i^{2q}` for
/// q = 1..=q_max, from a list of singular values.
pub fn trace_moments_from_singular_values(s: &[f64], q_max: usize) -> Vec<f64> {
    let r = s.len() as f64;
    (1..=q_max)
        .map(|q| s.iter().map(|&x| x.powi(2 * q as i32)).sum::<f64>() / r)
        .collect()
}

/// `(1/r) tr(M Mᵀ)` via the Frobenius norm — no factorization needed.
pub fn trace_moment_q1(mat: &DMatrix<f64>) -> f64 {
    mat.iter().map(|&x| x * x).sum::<f64>() / mat.nrows() as f64
}

/// `(1/r) tr((M/n^{m/2})(M/n^{m/2})ᵀ)` for one sampled graph, streaming
/// over entries without materializing the matrix (the m = 3, n = 20 case
/// would need ~370 MB dense).
pub fn empirical_trace_moment_q1(m: usize, n: usize, seed: u64) -> Result<f64, GraphMatrixError> {
    let shape = make_multi_z_shape(m)?;
    if n < 2 * m {
        return Err(GraphMatrixError::TooFewVertices { n, min: 2 * m });
    }
    let graph = sample_graph(n, seed);
    let tuples = distinct_tuples(n, m);
    // squared entries are 0 or exactly n^{-m}; counting first and scaling
    // once keeps the sum exact (naive f64 accumulation over ~5e7 terms
    // drifts past 1e-12)
    let mut nonzero = 0u64;
    for a in &tuples {
        for b in &tuples {
            let e = matrix_entry(&shape, &graph, a, b);
            nonzero += u64::from(e != 0);
        }
    }
    let scale2 = (n as f64).powi(-(m as i32));
    Ok(nonzero as f64 * scale2 / tuples.len() as f64)
}

/// The exact q = 1 identity for the normalized m-layer Z-shape matrix:
/// `(1/r) tr((M/n^{m/2})(M/n^{m/2})ᵀ) = Π_{j=m}^{2m-1} (n-j)/n^m`
/// for every graph, since each nonzero entry squares to `n^{-m}`.
pub fn exact_q1_moment(m: usize, n: usize) -> f64 {
    (m..2 * m).map(|j| (n - j) as f64).product::<f64>() / (n as f64).powi(m as i32)
}

/// A histogram of a singular-value sample whose `density` column
/// integrates to 1.
#[derive(Debug, Clone)]
pub struct SpectrumHistogram {
    pub bins: Vec<HistogramBin>,
    pub total_count: usize,
}

#[derive(Debug, Clone)]
pub struct HistogramBin {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    pub density: f64,
}

impl SpectrumHistogram {
    pub fn integral(&self) -> f64 {
        self.bins.iter().map(|b| b.density * (b.hi - b.lo)).sum()
    }
}

/// Bins `values` into `nbins` equal-width bins on [0, hi]; values above
/// `hi` land in the last bin so mass is conserved.
pub fn histogram(values: &[f64], nbins: usize, hi: f64) -> Result<SpectrumHistogram, GraphMatrixError> {
    if nbins == 0 || hi <= 0.0 || hi.is_nan() || values.is_empty() {
        return Err(GraphMatrixError::BadHistogram);
    }
    let width = hi / nbins as f64;
    let mut counts = vec![0usize; nbins];
    for &v in values {
        let k = ((v / width) as usize).min(nbins - 1);
        counts[k] += 1;
    }
    let total = values.len();
    let bins = counts
        .into_iter()
        .enumerate()
        .map(|(k, count)| HistogramBin {
            lo: k as f64 * width,
            hi: (k + 1) as f64 * width,
            count,
            density: count as f64 / (total as f64 * width),
        })
        .collect();
    Ok(SpectrumHistogram { bins, total_count: total })
}

/// Pooled singular values over `reps` independent replicates; replicate k
/// uses `replicate_seed(master_seed, k)`. Replicates run in parallel.
pub fn pooled_singular_values(
    m: usize,
    n: usize,
    reps: usize,
    master_seed: u64,
) -> Result<Vec<f64>, GraphMatrixError> {
    use rayon::prelude::*;
    let shape = make_multi_z_shape(m)?;
    let per_rep: Result<Vec<Vec<f64>>, GraphMatrixError> = (0..reps as u64)
        .into_par_iter()
        .map(|k| {
            let g = sample_graph(n, replicate_seed(master_seed, k));
            let mat = build_matrix(&shape, &g)?;
            Ok(singular_values(&mat))
        })
        .collect();
    let mut all: Vec<f64> = per_rep?.into_iter().flatten().collect();
    all.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(all)
}

/// Sup distance between the empirical CDF of `sorted_sample` (ascending)
/// and a reference CDF `f`, evaluated at the sample points (both one-sided
/// Kolmogorov–Smirnov gaps).
pub fn ks_distance(sorted_sample: &[f64], f: impl Fn(f64) -> f64) -> f64 {
    let n = sorted_sample.len() as f64;
    let mut sup: f64 = 0.0;
    for (i, &x) in sorted_sample.iter().enumerate() {
        let fx = f(x);
        sup = sup.max((i as f64 + 1.0) / n - fx).max(fx - i as f64 / n);
    }
    sup
}

/// Exact mean of `tr((M Mᵀ)^q)` (unnormalized M) over *all* ±1 graphs on
/// `[n]`, by brute force. Only feasible for tiny n; the mean times
/// `2^{n(n-1)/2}` is returned alongside, so everything stays integral.
pub fn brute_force_mean_trace(
    m: usize,
    q: usize,
    n: usize,
) -> Result<(num_bigint::BigInt, u32), GraphMatrixError> {
    use num_bigint::BigInt;
    let shape = make_multi_z_shape(m)?;
    if n < 2 * m {
        return Err(GraphMatrixError::TooFewVertices { n, min: 2 * m });
    }
    let ne = n * (n - 1) / 2;
    assert!(ne <= 20, "exhaustive sweep over 2^{ne} graphs is out of reach");
    let tuples = distinct_tuples(n, m);
    let r = tuples.len();
    let mut total = BigInt::from(0);
    for code in 0u32..1 << ne {
        let signs: Vec<i8> = (0..ne).map(|e| if code >> e & 1 == 1 { 1 } else { -1 }).collect();
        let g = RandomGraph::from_signs(n, signs);
        // integer M, then tr((M Mᵀ)^q) by repeated squaring-free powering
        let mut mat = vec![vec![0i64; r]; r];
        for (ri, a) in tuples.iter().enumerate() {
            for (ci, b) in tuples.iter().enumerate() {
                mat[ri][ci] = i64::from(matrix_entry(&shape, &g, a, b));
            }
        }
        let mmt = int_mat_mul_t(&mat, &mat);
        let mut pow = mmt.clone();
        for _ in 1..q {
            pow = int_mat_mul(&pow, &mmt);
        }
        let trace: i64 = (0..r).map(|i| pow[i][i]).sum();
        total += trace;
    }
    Ok((total, ne as u32))
}

fn int_mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    let mut c = vec![vec![0i64; n]; n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i][k];
            if aik == 0 {
                continue;
            }
            for j in 0..n {
                c[i][j] += aik * b[k][j];
            }
        }
    }
    c
}

fn int_mat_mul_t(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    let mut c = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            c[i][j] = (0..n).map(|k| a[i][k] * b[j][k]).sum();
        }
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraint_graphs::expected_trace_sum;
    use num_bigint::BigInt;

    #[test]
    fn shape_construction() {
        let z = make_multi_z_shape(2).unwrap();
        assert_eq!(z.edges, vec![(0, 0), (1, 1), (1, 0)]);
        assert_eq!(make_multi_z_shape(1).unwrap().edges, vec![(0, 0)]);
        assert!(make_multi_z_shape(0).is_err());
    }

    #[test]
    fn tuple_indexing() {
        let t = distinct_tuples(4, 2);
        assert_eq!(t.len(), matrix_dimension(4, 2));
        assert_eq!(t.len(), 12);
        assert_eq!(t[0], vec![0, 1]);
        assert_eq!(t[11], vec![3, 2]);
        // strictly lexicographically increasing
        assert!(t.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn sampling_is_deterministic_and_symmetric() {
        let g1 = sample_graph(10, 42);
        let g2 = sample_graph(10, 42);
        let g3 = sample_graph(10, 43);
        assert_eq!(g1.signs, g2.signs);
        assert_ne!(g1.signs, g3.signs);
        for i in 0..10 {
            for j in 0..10 {
                if i != j {
                    assert_eq!(g1.sign(i, j), g1.sign(j, i));
                }
            }
        }
        // signs should be roughly balanced
        let plus = g1.signs.iter().filter(|&&s| s == 1).count();
        assert!(plus > 10 && plus < 35);
    }

    #[test]
    fn replicate_seeds_are_distinct() {
        let seeds: std::collections::HashSet<u64> =
            (0..1000).map(|k| replicate_seed(7, k)).collect();
        assert_eq!(seeds.len(), 1000);
    }

    #[test]
    fn entries_vanish_exactly_on_overlap() {
        let shape = make_multi_z_shape(2).unwrap();
        let g = sample_graph(6, 1);
        let tuples = distinct_tuples(6, 2);
        for a in &tuples {
            for b in &tuples {
                let e = matrix_entry(&shape, &g, a, b);
                let overlap = a.iter().any(|x| b.contains(x));
                assert_eq!(e == 0, overlap);
            }
        }
    }

    #[test]
    fn q1_moment_identity_holds_for_every_graph() {
        // valid for any graph, so a handful of seeds suffices
        for m in [1usize, 2, 3] {
            let n = 2 * m + 2;
            let shape = make_multi_z_shape(m).unwrap();
            for seed in [0u64, 1, 99] {
                let g = sample_graph(n, seed);
                let mat = build_matrix(&shape, &g).unwrap();
                let got = trace_moment_q1(&mat);
                let want = exact_q1_moment(m, n);
                assert!((got - want).abs() < 1e-12, "m={m} seed={seed}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn svd_moments_match_direct_powers() {
        // tr((M Mᵀ)^q) from singular values vs integer matrix powers
        let shape = make_multi_z_shape(1).unwrap();
        for (n, seed) in [(5usize, 3u64), (6, 4), (8, 5)] {
            let g = sample_graph(n, seed);
            let mat = build_matrix_scaled(&shape, &g, false).unwrap();
            let r = mat.nrows();
            let imat: Vec<Vec<i64>> =
                (0..r).map(|i| (0..r).map(|j| mat[(i, j)] as i64).collect()).collect();
            let mmt = int_mat_mul_t(&imat, &imat);
            let mut pow = mmt.clone();
            let s = singular_values(&mat);
            for q in 1..=3usize {
                if q > 1 {
                    pow = int_mat_mul(&pow, &mmt);
                }
                let direct: i64 = (0..r).map(|i| pow[i][i]).sum();
                let from_svd = s.iter().map(|&x| x.powi(2 * q as i32)).sum::<f64>();
                let rel = (from_svd - direct as f64).abs() / direct as f64;
                assert!(rel < 1e-8, "n={n} q={q}: {from_svd} vs {direct}");
            }
        }
    }

    #[test]
    fn brute_force_matches_constraint_graph_sum() {
        // m=1, q=2, n=4: mean over all 64 graphs, exactly
        let (total, ne) = brute_force_mean_trace(1, 2, 4).unwrap();
        assert_eq!(ne, 6);
        let expected = expected_trace_sum(1, 2, 4).unwrap();
        assert_eq!(total, expected * BigInt::from(1u64 << ne));
    }

    #[test]
    fn histogram_integrates_to_one() {
        let vals: Vec<f64> = (0..1000).map(|i| i as f64 / 250.0).collect();
        let h = histogram(&vals, 40, 3.5).unwrap();
        assert!((h.integral() - 1.0).abs() < 1e-12);
        assert_eq!(h.bins.iter().map(|b| b.count).sum::<usize>(), 1000);
    }

    #[test]
    fn ks_distance_of_exact_uniform_sample() {
        let sample: Vec<f64> = (1..=100).map(|i| i as f64 / 100.0).collect();
        let d = ks_distance(&sample, |x| x.clamp(0.0, 1.0));
        assert!(d <= 0.01 + 1e-12, "d = {d}");
    }
}
