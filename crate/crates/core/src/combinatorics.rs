//! Exact arithmetic for the generalized Catalan counts `D(m, n)`, their
//! closed-form ratios, the convolution recurrence, and an independent
//! grid-walk counting oracle.
//!
//! Everything here is arbitrary precision: `C(3n, n)` already overflows
//! 64-bit integers at `n ≈ 21`.

use num_bigint::{BigInt, BigUint};
use num_rational::Ratio;
use num_traits::{One, Zero};
use thiserror::Error;

/// Exact nonnegative count.
pub type CountValue = BigUint;

/// Exact reduced ratio (denominator > 0, gcd = 1; maintained by `Ratio`).
pub type RatioValue = Ratio<BigInt>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CombinatoricsError {
    #[error("ratio formula only stated for m ∈ {{2,3}}, got m = {0}")]
    UnsupportedRatio(u32),
    #[error("m must be >= 1")]
    InvalidLayerCount,
}

/// Exact binomial coefficient `C(n, k)`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut res = BigUint::one();
    for i in 0..k {
        res = res * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    res
}

/// Generalized Catalan number `D(m, n) = C((m+1)n, n) / (mn + 1)`.
///
/// The division is exact; this is asserted.
pub fn generalized_catalan(m: u32, n: u64) -> Result<CountValue, CombinatoricsError> {
    if m == 0 {
        return Err(CombinatoricsError::InvalidLayerCount);
    }
    let m = m as u64;
    let num = binomial((m + 1) * n, n);
    let den = BigUint::from(m * n + 1);
    let (quot, rem) = num_integer::Integer::div_rem(&num, &den);
    debug_assert!(rem.is_zero(), "D(m,n) formula must yield an integer");
    Ok(quot)
}

/// Closed-form ratio `D(m, k) / D(m, k-1)`, reduced.
///
/// Only stated for m = 2 (`3(3k-1)(3k-2) / (2k(2k+1))`) and
/// m = 3 (`4(4k-3)(4k-2)(4k-1) / ((3k+1)(3k)(3k-1))`).
pub fn moment_ratio(m: u32, k: u64) -> Result<RatioValue, CombinatoricsError> {
    let k = k as i64;
    match m {
        2 => Ok(Ratio::new(
            BigInt::from(3) * BigInt::from(3 * k - 1) * BigInt::from(3 * k - 2),
            BigInt::from(2 * k) * BigInt::from(2 * k + 1),
        )),
        3 => Ok(Ratio::new(
            BigInt::from(4)
                * BigInt::from(4 * k - 3)
                * BigInt::from(4 * k - 2)
                * BigInt::from(4 * k - 1),
            BigInt::from(3 * k + 1) * BigInt::from(3 * k) * BigInt::from(3 * k - 1),
        )),
        other => Err(CombinatoricsError::UnsupportedRatio(other)),
    }
}

/// One row of a recurrence verification report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecurrenceRow {
    pub n: u64,
    pub lhs: CountValue,
    pub rhs: CountValue,
    pub equal: bool,
}

/// Verifies `D(m, n+1) = Σ_{i_0+…+i_m = n} Π_j D(m, i_j)` exactly for each
/// `n <= n_max`. Compositions are enumerated lexicographically.
pub fn recurrence_check(m: u32, n_max: u64) -> Result<Vec<RecurrenceRow>, CombinatoricsError> {
    if m == 0 {
        return Err(CombinatoricsError::InvalidLayerCount);
    }
    // Precompute D(m, 0..=n_max).
    let d: Vec<BigUint> = (0..=n_max)
        .map(|n| generalized_catalan(m, n))
        .collect::<Result<_, _>>()?;
    let parts = m as usize + 1;
    let mut rows = Vec::new();
    for n in 0..=n_max {
        let lhs = generalized_catalan(m, n + 1)?;
        let mut rhs = BigUint::zero();
        for comp in compositions(n, parts) {
            let mut prod = BigUint::one();
            for &i in &comp {
                prod *= &d[i as usize];
            }
            rhs += prod;
        }
        let equal = lhs == rhs;
        rows.push(RecurrenceRow { n, lhs, rhs, equal });
    }
    Ok(rows)
}

/// All compositions of `total` into exactly `parts` nonnegative parts,
/// in lexicographic order.
fn compositions(total: u64, parts: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut cur = vec![0u64; parts];
    fn rec(total: u64, idx: usize, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if idx == cur.len() - 1 {
            cur[idx] = total;
            out.push(cur.clone());
            return;
        }
        for v in 0..=total {
            cur[idx] = v;
            rec(total - v, idx + 1, cur, out);
        }
    }
    if parts == 0 {
        return out;
    }
    rec(total, 0, &mut cur, &mut out);
    out
}

/// Counts monotone lattice paths from `(0,0)` to `(n, m·n)` (unit right/up
/// steps) with every visited point `(x, y)` satisfying `y <= m·x`.
///
/// Dynamic program over the grid; exact. Must equal `generalized_catalan(m, n)`.
pub fn gridwalk_count(m: u32, n: u64) -> Result<CountValue, CombinatoricsError> {
    if m == 0 {
        return Err(CombinatoricsError::InvalidLayerCount);
    }
    let m = m as u64;
    let (w, h) = (n as usize, (m * n) as usize);
    // ways[y] = number of admissible walks reaching (x, y), column by column.
    let mut ways = vec![BigUint::zero(); h + 1];
    ways[0] = BigUint::one();
    for x in 0..=w {
        let cap = (m * x as u64).min(h as u64) as usize;
        // up-steps within column x
        for y in 1..=cap {
            let (lo, hi) = ways.split_at_mut(y);
            hi[0] += &lo[y - 1];
        }
        for w in &mut ways[cap + 1..=h] {
            *w = BigUint::zero();
        }
        // right-steps carry the column over unchanged
    }
    Ok(ways[h].clone())
}
