//! Exhaustive enumeration of nonzero-valued, minimum-edge (dominant)
//! constraint graphs on the glued multigraph `H(m, 2q)` of the m-layer
//! Z-shape, plus the structural predicates that dominant graphs satisfy.
//!
//! A constraint graph is represented as a partition of the vertices of
//! `H(m, 2q)` (blocks = classes of vertices mapped to the same label),
//! stored canonically as a restricted-growth string over a fixed vertex
//! order. The edge count of the constraint graph is
//! `|V| - #blocks`, so a dominant graph corresponds to a partition with
//! exactly `2mq - m(q-1)` blocks whose quotient multigraph has every edge
//! with even multiplicity.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

/// Default cap on `|V(H)| = 2mq` for exhaustive enumeration.
pub const DEFAULT_VERTEX_BUDGET: usize = 14;

/// Budget that admits the long-running (m=2, q=4) case.
pub const SLOW_VERTEX_BUDGET: usize = 16;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConstraintGraphError {
    #[error("m and q must be >= 1")]
    InvalidParams,
    #[error("enumeration infeasible at desk scale: |V| = 2mq = {vertices} exceeds budget {budget}")]
    BudgetExceeded { vertices: usize, budget: usize },
    #[error("partition is not piecewise injective: vertices {u} and {v} share piece {piece}")]
    NotPiecewiseInjective { u: usize, v: usize, piece: usize },
    #[error("partition has wrong length {got}, expected {expected}")]
    WrongLength { got: usize, expected: usize },
    #[error("structure verification failed for (m={m}, q={q}): {violated} violated by partition {partition}")]
    StructureViolation {
        m: usize,
        q: usize,
        violated: String,
        partition: String,
    },
}

/// A vertex of `H(m, 2q)`: copy index `i ∈ [q]`, layer `j ∈ [m]`,
/// and whether it is an `a` (left/top of its layer) or `b` vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HVertex {
    pub is_b: bool,
    pub copy: usize,  // 1-based i
    pub layer: usize, // 1-based j
}

impl HVertex {
    pub fn label(&self) -> String {
        format!("{}{}{}", if self.is_b { 'b' } else { 'a' }, self.copy, self.layer)
    }
}

/// The glued multigraph `H(α_{Z(m)}, 2q)`.
///
/// Vertex order is wheel-major, then copy index, alternating a/b:
/// `a_{1j}, b_{1j}, a_{2j}, b_{2j}, …` for wheel `j = 1..m`. Within a
/// wheel this is the cyclic order of the 2q-cycle.
#[derive(Debug, Clone)]
pub struct HGraph {
    pub m: usize,
    pub q: usize,
    /// Edge multiset; entries are vertex-id pairs. Wheel edges first
    /// (wheel-major), then spokes layer by layer.
    pub edges: Vec<(usize, usize)>,
    /// `pieces[p]` lists the vertex ids of piece `p`: even `p = 2(i-1)`
    /// is `V(α_i)`, odd `p = 2(i-1)+1` is `V(α_i^T)`.
    pub pieces: Vec<Vec<usize>>,
    /// For each vertex, the (at most two) pieces containing it.
    pub piece_of: Vec<[usize; 2]>,
    /// Spokes between wheels `j` and `j+1`, indexed `[j-1][x-1]` for
    /// `x ∈ [2q]` in the order `e_{1,j}, e_{2,j}, …`.
    pub spokes: Vec<Vec<(usize, usize)>>,
}

impl HGraph {
    pub fn vertex_count(&self) -> usize {
        2 * self.m * self.q
    }

    /// Vertex id for `a_{ij}` (is_b = false) or `b_{ij}` (is_b = true).
    pub fn vid(&self, is_b: bool, i: usize, j: usize) -> usize {
        (j - 1) * 2 * self.q + 2 * (i - 1) + usize::from(is_b)
    }

    pub fn vertex(&self, v: usize) -> HVertex {
        let j = v / (2 * self.q) + 1;
        let r = v % (2 * self.q);
        HVertex { is_b: r % 2 == 1, copy: r / 2 + 1, layer: j }
    }

    /// Position of vertex `v` in its wheel's cyclic order, 1..=2q
    /// (`a_{ij}` at `2i-1`, `b_{ij}` at `2i`).
    pub fn wheel_position(&self, v: usize) -> usize {
        v % (2 * self.q) + 1
    }

    pub fn wheel_of(&self, v: usize) -> usize {
        v / (2 * self.q) + 1
    }
}

/// Builds the labeled multigraph `H(α_{Z(m)}, 2q)`.
///
/// Wheel `W_j` is the 2q-cycle `a_{1j}, b_{1j}, a_{2j}, b_{2j}, …`; the
/// spokes between `W_j` and `W_{j+1}` are `e_{2i-1,j} = {a_{i(j+1)}, b_{ij}}`
/// and `e_{2i,j} = {b_{ij}, a_{(i+1)(j+1)}}` with copy indices mod q.
/// For m=2, q=1 the two spokes coincide, giving a doubled edge.
pub fn build_h(m: usize, q: usize) -> Result<HGraph, ConstraintGraphError> {
    if m == 0 || q == 0 {
        return Err(ConstraintGraphError::InvalidParams);
    }
    let mut h = HGraph {
        m,
        q,
        edges: Vec::with_capacity((2 * m - 1) * 2 * q),
        pieces: vec![Vec::with_capacity(2 * m); 2 * q],
        piece_of: vec![[usize::MAX; 2]; 2 * m * q],
        spokes: vec![Vec::with_capacity(2 * q); m.saturating_sub(1)],
    };
    let next = |i: usize| i % q + 1;
    // wheel edges
    for j in 1..=m {
        for i in 1..=q {
            h.edges.push((h.vid(false, i, j), h.vid(true, i, j)));
            h.edges.push((h.vid(true, i, j), h.vid(false, next(i), j)));
        }
    }
    // spokes
    for j in 1..m {
        for i in 1..=q {
            let odd = (h.vid(false, i, j + 1), h.vid(true, i, j));
            let even = (h.vid(true, i, j), h.vid(false, next(i), j + 1));
            h.edges.push(odd);
            h.edges.push(even);
            h.spokes[j - 1].push(odd);
            h.spokes[j - 1].push(even);
        }
    }
    // pieces: V(α_i) = {a_{ij}, b_{ij}}, V(α_i^T) = {b_{ij}, a_{(i+1)j}}
    for i in 1..=q {
        for j in 1..=m {
            let (a_ij, b_ij, a_next) =
                (h.vid(false, i, j), h.vid(true, i, j), h.vid(false, next(i), j));
            h.pieces[2 * (i - 1)].push(a_ij);
            h.pieces[2 * (i - 1)].push(b_ij);
            h.pieces[2 * (i - 1) + 1].push(b_ij);
            h.pieces[2 * (i - 1) + 1].push(a_next);
        }
    }
    for (p, verts) in h.pieces.iter().enumerate() {
        for &v in verts {
            let slot = &mut h.piece_of[v];
            if slot[0] == usize::MAX {
                slot[0] = p;
            } else {
                debug_assert!(slot[1] == usize::MAX);
                slot[1] = p;
            }
        }
    }
    Ok(h)
}

/// A partition of `V(H)` as a restricted-growth string: `assign[v]` is the
/// block index of vertex `v`, with `assign[0] = 0` and each new block index
/// introduced in order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintPartition {
    pub assign: Vec<u32>,
    pub block_count: usize,
}

impl ConstraintPartition {
    pub fn from_assignment(h: &HGraph, assign: Vec<u32>) -> Result<Self, ConstraintGraphError> {
        let n = h.vertex_count();
        if assign.len() != n {
            return Err(ConstraintGraphError::WrongLength { got: assign.len(), expected: n });
        }
        let block_count = assign.iter().map(|&b| b as usize + 1).max().unwrap_or(0);
        let p = ConstraintPartition { assign, block_count };
        p.check_piecewise_injective(h)?;
        Ok(p)
    }

    /// Builds a partition from explicit blocks of vertex ids.
    pub fn from_blocks(h: &HGraph, blocks: &[Vec<usize>]) -> Result<Self, ConstraintGraphError> {
        let n = h.vertex_count();
        let mut assign = vec![u32::MAX; n];
        for block in blocks {
            let root = *block.iter().min().unwrap();
            for &v in block {
                assign[v] = root as u32;
            }
        }
        // canonicalize to restricted growth
        let mut relabel = vec![u32::MAX; n];
        let mut next = 0u32;
        for a in assign.iter_mut() {
            debug_assert!(*a != u32::MAX, "blocks must cover all vertices");
            let r = &mut relabel[*a as usize];
            if *r == u32::MAX {
                *r = next;
                next += 1;
            }
            *a = *r;
        }
        Self::from_assignment(h, assign)
    }

    pub fn edge_count(&self, h: &HGraph) -> usize {
        h.vertex_count() - self.block_count
    }

    fn check_piecewise_injective(&self, h: &HGraph) -> Result<(), ConstraintGraphError> {
        for (p, verts) in h.pieces.iter().enumerate() {
            for (x, &u) in verts.iter().enumerate() {
                for &v in &verts[x + 1..] {
                    if u != v && self.assign[u] == self.assign[v] {
                        return Err(ConstraintGraphError::NotPiecewiseInjective { u, v, piece: p });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn same_block(&self, u: usize, v: usize) -> bool {
        self.assign[u] == self.assign[v]
    }

    pub fn is_singleton(&self, v: usize) -> bool {
        let b = self.assign[v];
        self.assign.iter().filter(|&&x| x == b).count() == 1
    }

    /// Blocks as lists of vertex labels, for reporting/JSONL output.
    pub fn blocks_labeled(&self, h: &HGraph) -> Vec<Vec<String>> {
        let mut blocks = vec![Vec::new(); self.block_count];
        for (v, &b) in self.assign.iter().enumerate() {
            blocks[b as usize].push(h.vertex(v).label());
        }
        blocks
    }
}

/// `val(C)`: 1 iff every edge of the quotient multigraph `H/C` has even
/// multiplicity, 0 otherwise.
///
/// Adjacent vertices of `H` always share a piece, so a piecewise-injective
/// partition can never map an edge to a self-loop; this is asserted.
pub fn val(h: &HGraph, c: &ConstraintPartition) -> Result<u8, ConstraintGraphError> {
    c.check_piecewise_injective(h)?;
    Ok(val_unchecked(h, &c.assign))
}

fn val_unchecked(h: &HGraph, assign: &[u32]) -> u8 {
    // Quotient edges keyed by block-representative pairs.
    let mut counts = std::collections::HashMap::with_capacity(h.edges.len());
    for &(u, v) in &h.edges {
        let (bu, bv) = (assign[u], assign[v]);
        assert_ne!(bu, bv, "edge endpoints collapsed into one block");
        let key = if bu < bv { (bu, bv) } else { (bv, bu) };
        *counts.entry(key).or_insert(0u32) += 1;
    }
    u8::from(counts.values().all(|&c| c % 2 == 0))
}

/// Structural predicate results for one dominant partition.
#[derive(Debug, Clone)]
pub struct PredicateRecord {
    pub partition: ConstraintPartition,
    pub well_behaved: bool,
    pub wheel_respecting: bool,
    pub parity_preserving: bool,
    pub non_crossing: bool,
    pub per_wheel_dominant: bool,
    pub has_spokeless_isolated_vertex: bool,
    pub split_lemma_holds: bool,
    pub spoke_noncrossing_holds: bool,
}

impl PredicateRecord {
    pub fn all_hold(&self, q: usize) -> bool {
        self.well_behaved
            && self.wheel_respecting
            && self.parity_preserving
            && self.non_crossing
            && self.per_wheel_dominant
            && (q < 2 || self.has_spokeless_isolated_vertex)
            && self.split_lemma_holds
            && self.spoke_noncrossing_holds
    }

    pub fn first_violated(&self, q: usize) -> Option<&'static str> {
        if !self.well_behaved {
            return Some("well_behaved");
        }
        if !self.wheel_respecting {
            return Some("wheel_respecting");
        }
        if !self.parity_preserving {
            return Some("parity_preserving");
        }
        if !self.non_crossing {
            return Some("non_crossing");
        }
        if !self.per_wheel_dominant {
            return Some("per_wheel_dominant");
        }
        if q >= 2 && !self.has_spokeless_isolated_vertex {
            return Some("has_spokeless_isolated_vertex");
        }
        if !self.split_lemma_holds {
            return Some("split_lemma");
        }
        if !self.spoke_noncrossing_holds {
            return Some("spoke_noncrossing");
        }
        None
    }
}

/// Result of exhaustively enumerating dominant constraint graphs.
#[derive(Debug, Clone)]
pub struct DominanceReport {
    pub m: usize,
    pub q: usize,
    /// Number of partitions with `val = 1` and `edge_count = m(q-1)`.
    pub dominant_count: u64,
    pub records: Vec<PredicateRecord>,
}

/// True iff every block's vertices are copies of the same shape vertex,
/// i.e. share letter and layer.
pub fn is_well_behaved(h: &HGraph, c: &ConstraintPartition) -> bool {
    let mut seen: Vec<Option<(bool, usize)>> = vec![None; c.block_count];
    for (v, &b) in c.assign.iter().enumerate() {
        let hv = h.vertex(v);
        let key = (hv.is_b, hv.layer);
        match &seen[b as usize] {
            None => seen[b as usize] = Some(key),
            Some(k) if *k == key => {}
            Some(_) => return false,
        }
    }
    true
}

/// True iff every block lies within one wheel's vertex set.
pub fn is_wheel_respecting(h: &HGraph, c: &ConstraintPartition) -> bool {
    let mut seen: Vec<Option<usize>> = vec![None; c.block_count];
    for (v, &b) in c.assign.iter().enumerate() {
        let w = h.wheel_of(v);
        match &seen[b as usize] {
            None => seen[b as usize] = Some(w),
            Some(x) if *x == w => {}
            Some(_) => return false,
        }
    }
    true
}

/// True iff within each wheel's cyclic order, constrained positions differ
/// by an even amount.
pub fn is_parity_preserving(h: &HGraph, c: &ConstraintPartition) -> bool {
    let mut seen: Vec<Option<usize>> = vec![None; c.block_count];
    for (v, &b) in c.assign.iter().enumerate() {
        let parity = h.wheel_position(v) % 2;
        match &seen[b as usize] {
            None => seen[b as usize] = Some(parity),
            Some(p) if *p == parity => {}
            Some(_) => return false,
        }
    }
    true
}

/// True iff each wheel's induced partition of cycle positions has no two
/// interleaving blocks (positions `w < x < y < z` with `w, y` in one block
/// and `x, z` in another). Cross-wheel blocks are ignored here; they are
/// caught by `is_wheel_respecting`.
pub fn is_non_crossing(h: &HGraph, c: &ConstraintPartition) -> bool {
    for j in 1..=h.m {
        let start = (j - 1) * 2 * h.q;
        let wheel: Vec<u32> = (0..2 * h.q).map(|k| c.assign[start + k]).collect();
        for w in 0..wheel.len() {
            for x in w + 1..wheel.len() {
                if wheel[x] == wheel[w] {
                    continue;
                }
                for y in x + 1..wheel.len() {
                    if wheel[y] != wheel[w] {
                        continue;
                    }
                    for z in y + 1..wheel.len() {
                        if wheel[z] == wheel[x] {
                            return false;
                        }
                    }
                }
            }
        }
    }
    true
}

/// True iff each wheel's induced constraint graph has exactly q-1 edges,
/// i.e. is itself dominant on the 2q-cycle.
fn per_wheel_dominant(h: &HGraph, c: &ConstraintPartition) -> bool {
    for j in 1..=h.m {
        let start = (j - 1) * 2 * h.q;
        let mut blocks = std::collections::HashSet::new();
        for k in 0..2 * h.q {
            blocks.insert(c.assign[start + k]);
        }
        if 2 * h.q - blocks.len() != h.q - 1 {
            return false;
        }
    }
    true
}

/// For q >= 2: does some spokeless vertex (`a_{i1}` or `b_{im}`) form a
/// singleton block?
fn has_spokeless_isolated_vertex(h: &HGraph, c: &ConstraintPartition) -> bool {
    for i in 1..=h.q {
        if c.is_singleton(h.vid(false, i, 1)) || c.is_singleton(h.vid(true, i, h.m)) {
            return true;
        }
    }
    false
}

/// Pre-contract implication: `a_{sj} ≡ a_{tj}` (j < m) forces
/// `a_{s(j+1)} ≡ a_{t(j+1)}`, and `b_{sj} ≡ b_{tj}` (j > 1) forces
/// `b_{s(j-1)} ≡ b_{t(j-1)}`.
fn split_lemma_holds(h: &HGraph, c: &ConstraintPartition) -> bool {
    for s in 1..=h.q {
        for t in s + 1..=h.q {
            for j in 1..h.m {
                if c.same_block(h.vid(false, s, j), h.vid(false, t, j))
                    && !c.same_block(h.vid(false, s, j + 1), h.vid(false, t, j + 1))
                {
                    return false;
                }
            }
            for j in 2..=h.m {
                if c.same_block(h.vid(true, s, j), h.vid(true, t, j))
                    && !c.same_block(h.vid(true, s, j - 1), h.vid(true, t, j - 1))
                {
                    return false;
                }
            }
        }
    }
    true
}

/// Spokes `e`, `e'` are made equal when their endpoint blocks coincide as
/// unordered pairs.
fn spokes_equal(c: &ConstraintPartition, e: (usize, usize), f: (usize, usize)) -> bool {
    let key = |(u, v): (usize, usize)| {
        let (a, b) = (c.assign[u], c.assign[v]);
        if a < b { (a, b) } else { (b, a) }
    };
    key(e) == key(f)
}

/// Non-crossing closure for spokes: within each layer, if `e_i ≡ e_j` and
/// `e_s ≡ e_t` with `i < s < j < t`, then all four are mutually equal.
fn spoke_noncrossing_holds(h: &HGraph, c: &ConstraintPartition) -> bool {
    for layer in &h.spokes {
        let n = layer.len();
        for i in 0..n {
            for j in i + 1..n {
                if !spokes_equal(c, layer[i], layer[j]) {
                    continue;
                }
                for s in i + 1..j {
                    for t in j + 1..n {
                        if spokes_equal(c, layer[s], layer[t])
                            && !spokes_equal(c, layer[i], layer[s])
                        {
                            return false;
                        }
                    }
                }
            }
        }
    }
    true
}

fn evaluate_predicates(h: &HGraph, c: ConstraintPartition) -> PredicateRecord {
    PredicateRecord {
        well_behaved: is_well_behaved(h, &c),
        wheel_respecting: is_wheel_respecting(h, &c),
        parity_preserving: is_parity_preserving(h, &c),
        non_crossing: is_non_crossing(h, &c),
        per_wheel_dominant: per_wheel_dominant(h, &c),
        has_spokeless_isolated_vertex: has_spokeless_isolated_vertex(h, &c),
        split_lemma_holds: split_lemma_holds(h, &c),
        spoke_noncrossing_holds: spoke_noncrossing_holds(h, &c),
        partition: c,
    }
}

/// Exhaustively enumerates dominant constraint graphs on `H(m, 2q)` with
/// the default feasibility budget.
pub fn enumerate_dominant(m: usize, q: usize) -> Result<DominanceReport, ConstraintGraphError> {
    enumerate_dominant_with_budget(m, q, DEFAULT_VERTEX_BUDGET)
}

/// Exhaustive enumeration with an explicit vertex budget.
///
/// Canonical restricted-growth backtracking with two prunes: final block
/// count must be exactly `2mq - m(q-1)`, and no branch may violate
/// piecewise injectivity. `val` is evaluated at leaves only.
pub fn enumerate_dominant_with_budget(
    m: usize,
    q: usize,
    budget: usize,
) -> Result<DominanceReport, ConstraintGraphError> {
    let h = build_h(m, q)?;
    let n = h.vertex_count();
    if n > budget {
        return Err(ConstraintGraphError::BudgetExceeded { vertices: n, budget });
    }
    let target_blocks = 2 * m * q - m * (q - 1); // = m(q+1)
    let mut records = Vec::new();

    let mut assign = vec![0u32; n];
    // piece_used[p] is a bitmask of block ids already present in piece p.
    let mut piece_used = vec![0u64; 2 * q];
    backtrack(&h, 0, 0, target_blocks, &mut assign, &mut piece_used, &mut records);

    Ok(DominanceReport { m, q, dominant_count: records.len() as u64, records })
}

fn backtrack(
    h: &HGraph,
    v: usize,
    used_blocks: usize,
    target_blocks: usize,
    assign: &mut Vec<u32>,
    piece_used: &mut Vec<u64>,
    records: &mut Vec<PredicateRecord>,
) {
    let n = h.vertex_count();
    if v == n {
        if used_blocks == target_blocks && val_unchecked(h, assign) == 1 {
            let c = ConstraintPartition { assign: assign.clone(), block_count: used_blocks };
            records.push(evaluate_predicates(h, c));
        }
        return;
    }
    let remaining = n - v;
    // Every unassigned vertex can open at most one new block.
    if used_blocks + remaining < target_blocks || used_blocks > target_blocks {
        return;
    }
    let [p0, p1] = h.piece_of[v];
    let max_block = (used_blocks + 1).min(target_blocks).min(64);
    for b in 0..max_block as u32 {
        let bit = 1u64 << b;
        if piece_used[p0] & bit != 0 || piece_used[p1] & bit != 0 {
            continue;
        }
        assign[v] = b;
        piece_used[p0] |= bit;
        piece_used[p1] |= bit;
        let nb = used_blocks + usize::from(b as usize == used_blocks);
        backtrack(h, v + 1, nb, target_blocks, assign, piece_used, records);
        piece_used[p0] &= !bit;
        piece_used[p1] &= !bit;
    }
}

/// Enumerates *all* piecewise-injective partitions (no block-count prune)
/// and returns `Σ_C val(C) · n! / (n - |V| + |E(C)|)!` — the exact
/// expected trace `E[tr((M Mᵀ)^q)]` for input graphs on `n` vertices.
pub fn expected_trace_sum(m: usize, q: usize, n: u64) -> Result<BigInt, ConstraintGraphError> {
    let h = build_h(m, q)?;
    let nv = h.vertex_count();
    if nv > DEFAULT_VERTEX_BUDGET {
        return Err(ConstraintGraphError::BudgetExceeded {
            vertices: nv,
            budget: DEFAULT_VERTEX_BUDGET,
        });
    }
    let mut total = BigInt::zero();
    let mut assign = vec![0u32; nv];
    let mut piece_used = vec![0u64; 2 * q];
    sum_all(&h, 0, 0, n, &mut assign, &mut piece_used, &mut total);
    Ok(total)
}

fn sum_all(
    h: &HGraph,
    v: usize,
    used_blocks: usize,
    n: u64,
    assign: &mut Vec<u32>,
    piece_used: &mut Vec<u64>,
    total: &mut BigInt,
) {
    let nv = h.vertex_count();
    if v == nv {
        if val_unchecked(h, assign) == 1 {
            // N(C) = n! / (n - #blocks)! = n (n-1) … (n - #blocks + 1)
            let mut count = BigInt::one();
            for k in 0..used_blocks as u64 {
                if n < k + 1 {
                    count = BigInt::zero();
                    break;
                }
                count *= BigInt::from(n - k);
            }
            *total += count;
        }
        return;
    }
    let [p0, p1] = h.piece_of[v];
    for b in 0..=(used_blocks as u32).min(63) {
        let bit = 1u64 << b;
        if piece_used[p0] & bit != 0 || piece_used[p1] & bit != 0 {
            continue;
        }
        assign[v] = b;
        piece_used[p0] |= bit;
        piece_used[p1] |= bit;
        let nb = used_blocks + usize::from(b as usize == used_blocks);
        sum_all(h, v + 1, nb, n, assign, piece_used, total);
        piece_used[p0] &= !bit;
        piece_used[p1] &= !bit;
    }
}

/// Runs `enumerate_dominant` and asserts every structural predicate on
/// every dominant partition, failing with the first counterexample.
pub fn verify_structure(m: usize, q: usize) -> Result<DominanceReport, ConstraintGraphError> {
    let report = enumerate_dominant(m, q)?;
    for rec in &report.records {
        if let Some(name) = rec.first_violated(q) {
            return Err(ConstraintGraphError::StructureViolation {
                m,
                q,
                violated: name.to_string(),
                partition: format!("{:?}", rec.partition.blocks_labeled(&build_h(m, q)?)),
            });
        }
    }
    Ok(report)
}
