//! Exhaustive brute-force maximizer: enumerate all triples of boxed
//! partitions with the exact edge weights and keep the best facet count.
//! This is the desk-scale ground truth the main driver is checked
//! against, and it deliberately shares no code with the staircase
//! facet-counting path in [`crate::complex`].

use num_bigint::BigUint;
use rayon::prelude::*;
use thiserror::Error;

use crate::complex::TriComplex;
use crate::flagvec::{Color, ColorPair, FlagVector};

/// A partition of `weight` into at most `max_rows` parts, each at most
/// `max_cols`, i.e. a staircase fitting the box.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxedPartition {
    pub weight: u64,
    pub max_rows: u64,
    pub max_cols: u64,
    pub rows: Vec<u64>,
}

/// Iterator over every partition of `weight` inside the box, in
/// decreasing lexicographic order of the row sequence. Out-of-range
/// weights yield an empty stream.
pub fn enumerate_partitions(
    weight: u64,
    max_rows: u64,
    max_cols: u64,
) -> impl Iterator<Item = BoxedPartition> {
    BoxedPartitions::new(weight, max_rows, max_cols).map(move |rows| BoxedPartition {
        weight,
        max_rows,
        max_cols,
        rows,
    })
}

struct BoxedPartitions {
    max_rows: u64,
    current: Option<Vec<u64>>,
}

impl BoxedPartitions {
    fn new(weight: u64, max_rows: u64, max_cols: u64) -> Self {
        BoxedPartitions {
            max_rows,
            current: first_partition(weight, max_rows, max_cols),
        }
    }
}

impl Iterator for BoxedPartitions {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        let current = self.current.take()?;
        let mut successor = current.clone();
        if next_partition(&mut successor, self.max_rows) {
            self.current = Some(successor);
        }
        Some(current)
    }
}

/// Greedy fill, i.e. the lexicographically greatest partition in the box.
fn first_partition(weight: u64, max_rows: u64, max_cols: u64) -> Option<Vec<u64>> {
    if weight == 0 {
        return Some(Vec::new());
    }
    if max_rows == 0 || max_cols == 0 || weight > max_rows.saturating_mul(max_cols) {
        return None;
    }
    let mut rows = Vec::new();
    let mut remaining = weight;
    while remaining > 0 {
        let part = remaining.min(max_cols);
        rows.push(part);
        remaining -= part;
    }
    Some(rows)
}

/// Advances `rows` to its successor in decreasing lex order, in place.
/// Returns false when `rows` was the last partition.
fn next_partition(rows: &mut Vec<u64>, max_rows: u64) -> bool {
    // Decrease the rightmost part that still lets the suffix absorb the
    // freed weight, then refill the suffix greedily.
    let mut suffix_sum = 0u64;
    for i in (0..rows.len()).rev() {
        suffix_sum += rows[i];
        let v = rows[i] - 1;
        if v == 0 {
            continue;
        }
        let slots = max_rows - i as u64 - 1;
        let spill = suffix_sum - v;
        if spill <= slots.saturating_mul(v) {
            rows.truncate(i);
            rows.push(v);
            let mut remaining = spill;
            while remaining > 0 {
                let part = remaining.min(v);
                rows.push(part);
                remaining -= part;
            }
            return true;
        }
    }
    false
}

/// Visits every partition; the callback returns false to abort. Returns
/// false iff aborted.
fn visit_partitions(
    weight: u64,
    max_rows: u64,
    max_cols: u64,
    f: &mut impl FnMut(&[u64]) -> bool,
) -> bool {
    let mut rows = match first_partition(weight, max_rows, max_cols) {
        Some(rows) => rows,
        None => return true,
    };
    loop {
        if !f(&rows) {
            return false;
        }
        if !next_partition(&mut rows, max_rows) {
            return true;
        }
    }
}

/// Counts partitions, bailing out once the count exceeds `cap`.
fn count_partitions_capped(weight: u64, max_rows: u64, max_cols: u64, cap: u64) -> Option<u64> {
    let mut count = 0u64;
    let completed = visit_partitions(weight, max_rows, max_cols, &mut |_| {
        count += 1;
        count <= cap
    });
    completed.then_some(count)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("some edge budget exceeds its vertex product; no complex exists")]
    InfeasibleEdges,
    #[error("search space exceeds the enumeration cap of {cap} complexes")]
    CapExceeded { cap: u64 },
    #[error("budgets too large for exhaustive search")]
    BudgetTooLarge,
}

#[derive(Clone, Debug)]
pub struct OracleOptions {
    /// Upper bound on the product of the three partition counts.
    pub cap: u64,
    /// Worker threads for the outer enumeration; 1 means sequential.
    pub workers: usize,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            cap: 100_000_000,
            workers: 1,
        }
    }
}

#[derive(Clone, Debug)]
pub struct BruteForceResult {
    pub m: BigUint,
    pub witness: TriComplex,
    /// Number of complexes examined.
    pub examined: u64,
}

struct Instance {
    f: [u64; 3],
    e: [u64; 3],
}

/// Facet count of the staircase triple, computed directly from explicit
/// row lists: for every 12-edge `(i, j)` count the color-3 vertices below
/// both `rows13[i]` and `rows23[j]` using prefix sums over the sorted
/// `rows23`.
fn facets_of(rows12: &[u64], rows13: &[u64], rows23: &[u64], prefix23: &[u128]) -> u128 {
    let mut total = 0u128;
    for (i, &a) in rows12.iter().enumerate() {
        let b = rows13.get(i).copied().unwrap_or(0);
        if a == 0 || b == 0 {
            continue;
        }
        let a = (a as usize).min(rows23.len());
        // rows23 is weakly decreasing: entries before `split` clamp to b.
        let split = rows23[..a].partition_point(|&v| v >= b);
        total += b as u128 * split as u128 + (prefix23[a] - prefix23[split]);
    }
    total
}

fn prefix_sums(rows: &[u64]) -> Vec<u128> {
    let mut out = Vec::with_capacity(rows.len() + 1);
    let mut acc = 0u128;
    out.push(0);
    for &v in rows {
        acc += v as u128;
        out.push(acc);
    }
    out
}

#[derive(Clone)]
struct Best {
    facets: u128,
    rows12: Vec<u64>,
    rows13: Vec<u64>,
    rows23: Vec<u64>,
}

impl Best {
    /// More facets wins; on ties the lexicographically greater triple.
    fn better_than(&self, other: &Option<Best>) -> bool {
        match other {
            None => true,
            Some(o) => {
                (self.facets, &self.rows12, &self.rows13, &self.rows23)
                    > (o.facets, &o.rows12, &o.rows13, &o.rows23)
            }
        }
    }
}

/// Scans all `(λ13, λ23)` completions of a fixed outer partition.
fn scan_inner(inst: &Instance, rows12: &[u64], best: &mut Option<Best>, examined: &mut u64) {
    visit_partitions(inst.e[1], inst.f[0], inst.f[2], &mut |rows13| {
        visit_partitions(inst.e[2], inst.f[1], inst.f[2], &mut |rows23| {
            let prefix23 = prefix_sums(rows23);
            let facets = facets_of(rows12, rows13, rows23, &prefix23);
            *examined += 1;
            let candidate = Best {
                facets,
                rows12: rows12.to_vec(),
                rows13: rows13.to_vec(),
                rows23: rows23.to_vec(),
            };
            if candidate.better_than(best) {
                *best = Some(candidate);
            }
            true
        });
        true
    });
}

/// Maximizes the facet count over all color-shifted complexes whose edge
/// counts equal the budgets exactly (exact weights suffice because adding
/// an edge never removes a facet). The witness is deterministic: among
/// maximizers, the lexicographically greatest partition triple.
pub fn brute_max(fv: &FlagVector, opts: &OracleOptions) -> Result<BruteForceResult, OracleError> {
    let small = |v: &BigUint| u64::try_from(v).map_err(|_| OracleError::BudgetTooLarge);
    let f = [
        small(fv.vertex(Color::C1))?,
        small(fv.vertex(Color::C2))?,
        small(fv.vertex(Color::C3))?,
    ];
    let e = [
        small(fv.edge(ColorPair::E12))?,
        small(fv.edge(ColorPair::E13))?,
        small(fv.edge(ColorPair::E23))?,
    ];
    let boxes = [(e[0], f[0], f[1]), (e[1], f[0], f[2]), (e[2], f[1], f[2])];
    for &(w, r, c) in &boxes {
        if (w as u128) > r as u128 * c as u128 {
            return Err(OracleError::InfeasibleEdges);
        }
    }
    let mut product = 1u128;
    for &(w, r, c) in &boxes {
        let count = count_partitions_capped(w, r, c, opts.cap)
            .ok_or(OracleError::CapExceeded { cap: opts.cap })?;
        product = product.saturating_mul(count.max(1) as u128);
    }
    if product > opts.cap as u128 {
        return Err(OracleError::CapExceeded { cap: opts.cap });
    }

    let inst = Instance { f, e };
    let (best, examined) = if opts.workers > 1 {
        brute_parallel(&inst, opts.workers)
    } else {
        let mut best = None;
        let mut examined = 0u64;
        visit_partitions(inst.e[0], inst.f[0], inst.f[1], &mut |rows12| {
            scan_inner(&inst, rows12, &mut best, &mut examined);
            true
        });
        (best, examined)
    };

    let best = best.expect("at least one exact-weight triple exists");
    let witness = TriComplex::from_rows_u64(f, &best.rows12, &best.rows13, &best.rows23)
        .expect("enumerated partitions fit their boxes");
    debug_assert_eq!(witness.facet_count(), BigUint::from(best.facets));
    Ok(BruteForceResult {
        m: BigUint::from(best.facets),
        witness,
        examined,
    })
}

fn brute_parallel(inst: &Instance, workers: usize) -> (Option<Best>, u64) {
    let mut outer: Vec<Vec<u64>> = Vec::new();
    visit_partitions(inst.e[0], inst.f[0], inst.f[1], &mut |rows| {
        outer.push(rows.to_vec());
        true
    });
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("thread pool");
    pool.install(|| {
        outer
            .par_iter()
            .map(|rows12| {
                let mut best = None;
                let mut examined = 0u64;
                scan_inner(inst, rows12, &mut best, &mut examined);
                (best, examined)
            })
            .reduce(
                || (None, 0),
                |(a, ca), (b, cb)| {
                    let merged = match (a, b) {
                        (Some(x), y) if x.better_than(&y) => Some(x),
                        (_, y @ Some(_)) => y,
                        (x, None) => x,
                    };
                    (merged, ca + cb)
                },
            )
    })
}

/// Debug variant: also sweeps every edge-weight triple below the budgets.
/// By edge-monotonicity this must return the same maximum as the
/// exact-weight search; it exists to check that empirically.
pub fn brute_max_any_weights(
    fv: &FlagVector,
    opts: &OracleOptions,
) -> Result<BigUint, OracleError> {
    let small = |v: &BigUint| u64::try_from(v).map_err(|_| OracleError::BudgetTooLarge);
    let e = [
        small(fv.edge(ColorPair::E12))?,
        small(fv.edge(ColorPair::E13))?,
        small(fv.edge(ColorPair::E23))?,
    ];
    let mut best = BigUint::ZERO;
    for w12 in 0..=e[0] {
        for w13 in 0..=e[1] {
            for w23 in 0..=e[2] {
                let sub =
                    FlagVector::new(fv.vertices().clone(), [w12.into(), w13.into(), w23.into()]);
                if !crate::flagvec::validate(&sub).is_feasible_so_far() {
                    continue;
                }
                let result = brute_max(&sub, opts)?;
                best = best.max(result.m);
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use num_traits::One;

    use super::*;

    fn collect(weight: u64, rows: u64, cols: u64) -> Vec<Vec<u64>> {
        enumerate_partitions(weight, rows, cols)
            .map(|p| p.rows)
            .collect()
    }

    #[test]
    fn partitions_tight_box() {
        assert_eq!(collect(5, 3, 2), vec![vec![2, 2, 1]]);
        assert_eq!(collect(4, 2, 2), vec![vec![2, 2]]);
    }

    #[test]
    fn partitions_zero_weight_is_empty_partition() {
        assert_eq!(collect(0, 3, 4), vec![Vec::<u64>::new()]);
    }

    #[test]
    fn partitions_out_of_range_is_empty_stream() {
        assert!(collect(7, 2, 3).is_empty());
    }

    #[test]
    fn partitions_are_decreasing_lex_and_complete() {
        let all = collect(6, 4, 4);
        assert_eq!(
            all,
            vec![
                vec![4, 2],
                vec![4, 1, 1],
                vec![3, 3],
                vec![3, 2, 1],
                vec![3, 1, 1, 1],
                vec![2, 2, 2],
                vec![2, 2, 1, 1],
            ]
        );
        for w in all.windows(2) {
            assert!(w[0] > w[1]);
        }
        for p in &all {
            assert_eq!(p.iter().sum::<u64>(), 6);
            assert!(p.windows(2).all(|w| w[0] >= w[1]));
            assert!(p.len() <= 4 && p.iter().all(|&v| v <= 4));
        }
    }

    #[test]
    fn brute_five_grid_maximum_is_nine() {
        let fv = FlagVector::from_u64([5, 5, 5], [5, 5, 5]);
        let result = brute_max(&fv, &OracleOptions::default()).unwrap();
        assert_eq!(result.m, BigUint::from(9u32));
        assert!(result.witness.is_color_shifted());
        assert!(result.witness.within_budget(&fv));
        assert_eq!(result.witness.facet_count(), BigUint::from(9u32));
    }

    #[test]
    fn brute_single_triangle() {
        let fv = FlagVector::from_u64([1, 1, 1], [1, 1, 1]);
        let result = brute_max(&fv, &OracleOptions::default()).unwrap();
        assert_eq!(result.m, BigUint::one());
    }

    #[test]
    fn brute_complete_tripartite() {
        let fv = FlagVector::from_u64([2, 2, 2], [4, 4, 4]);
        let result = brute_max(&fv, &OracleOptions::default()).unwrap();
        assert_eq!(result.m, BigUint::from(8u32));
    }

    #[test]
    fn brute_rejects_infeasible_edges() {
        let fv = FlagVector::from_u64([3, 5, 7], [23, 14, 18]);
        assert_eq!(
            brute_max(&fv, &OracleOptions::default()).unwrap_err(),
            OracleError::InfeasibleEdges
        );
    }

    #[test]
    fn brute_cap_exceeded() {
        let fv = FlagVector::from_u64([40, 40, 40], [300, 300, 300]);
        let opts = OracleOptions {
            cap: 1000,
            workers: 1,
        };
        assert_eq!(
            brute_max(&fv, &opts).unwrap_err(),
            OracleError::CapExceeded { cap: 1000 }
        );
    }

    #[test]
    fn parallel_matches_sequential() {
        let fv = FlagVector::from_u64([4, 4, 4], [7, 6, 8]);
        let seq = brute_max(&fv, &OracleOptions::default()).unwrap();
        let par = brute_max(
            &fv,
            &OracleOptions {
                cap: 100_000_000,
                workers: 4,
            },
        )
        .unwrap();
        assert_eq!(seq.m, par.m);
        assert_eq!(seq.witness, par.witness);
        assert_eq!(seq.examined, par.examined);
    }

    #[test]
    fn exact_weights_match_weight_sweep() {
        // Edge-monotonicity says searching exact weights loses nothing.
        for (f, e) in [
            ([3, 3, 3], [4, 5, 3]),
            ([2, 3, 4], [5, 6, 7]),
            ([4, 2, 2], [3, 3, 4]),
        ] {
            let fv = FlagVector::from_u64(f, e);
            let exact = brute_max(&fv, &OracleOptions::default()).unwrap().m;
            let swept = brute_max_any_weights(&fv, &OracleOptions::default()).unwrap();
            assert_eq!(exact, swept, "budgets {f:?} {e:?}");
        }
    }

    #[test]
    fn brute_is_monotone_in_edge_budgets_with_slack_vertices() {
        let base = FlagVector::from_u64([4, 4, 4], [5, 6, 7]);
        let m0 = brute_max(&base, &OracleOptions::default()).unwrap().m;
        for pair in ColorPair::ALL {
            let mut e = [5u64, 6, 7];
            e[pair.index()] += 1;
            let bumped = FlagVector::from_u64([4, 4, 4], e);
            let m1 = brute_max(&bumped, &OracleOptions::default()).unwrap().m;
            assert!(m1 >= m0);
        }
    }
}
