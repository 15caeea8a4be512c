//! The maximization driver: given the six budgets, compute the maximum
//! facet count `m`, a witness complex, and a ledger of every candidate
//! construction; plus the feasibility decision for a proposed full flag
//! f-vector.
//!
//! The driver follows a fixed procedure: validate the products, try the
//! vertex-edge shortcut, relabel to `f12 ≤ f13 ≤ f23`, dispose of the
//! degenerate `b1 = 0` case, evaluate a bounded set of candidates for the
//! known-core cases, then sweep the middle core size over its feasible
//! window with the quadratic bound pruning both directions.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::arith::to_ratio;
use crate::complex::{StaircaseGraph, TriComplex};
use crate::construct::{
    b1g2_range, bibr_candidates, build, compute_b, determinize_params, v_bound_at, BConstants,
    CandidateParams, UndefinedReason,
};
use crate::flagvec::{
    canonical_relabel, uint_to_json, uint_to_json_string, validate, Color, ColorPair,
    ColorPermutation, FlagVector, FlagVectorError,
};

/// Which early exit, if any, settled the instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Shortcut {
    None,
    /// Some floor-product condition held; `color` is the lowest color
    /// whose condition holds, `conditions` records all three.
    Vertedge {
        color: Color,
        conditions: [bool; 3],
    },
    /// The relaxed smallest core size floors to zero.
    B1Zero,
    /// Some budget is zero, so no facet can exist.
    ZeroBudget,
}

impl Shortcut {
    pub fn code(&self) -> String {
        match self {
            Shortcut::None => "none".to_string(),
            Shortcut::Vertedge { color, .. } => format!("vertedge:{}", color.number()),
            Shortcut::B1Zero => "b1zero".to_string(),
            Shortcut::ZeroBudget => "zerobudget".to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CandidateOutcome {
    Defined {
        facets: BigUint,
        saturated: bool,
    },
    Undefined(UndefinedReason),
    /// Identical parameters already evaluated at ledger index `of`.
    Duplicate {
        of: usize,
    },
}

/// One evaluated candidate, in canonical (relabeled) colors.
#[derive(Clone, Debug)]
pub struct CandidateReport {
    pub step: u8,
    pub params: CandidateParams,
    pub outcome: CandidateOutcome,
}

impl CandidateReport {
    /// The facet count if defined, following duplicate references through
    /// `ledger`.
    pub fn facets<'a>(&'a self, ledger: &'a [CandidateReport]) -> Option<&'a BigUint> {
        match &self.outcome {
            CandidateOutcome::Defined { facets, .. } => Some(facets),
            CandidateOutcome::Undefined(_) => None,
            CandidateOutcome::Duplicate { of } => ledger[*of].facets(ledger),
        }
    }

    pub fn to_json(&self) -> Value {
        let mut obj = serde_json::Map::new();
        obj.insert("step".into(), json!(self.step));
        obj.insert(
            "g".into(),
            Value::Array(self.params.g_array().iter().map(uint_to_json).collect()),
        );
        obj.insert("p".into(), json!(self.params.p().number()));
        obj.insert("q".into(), json!(self.params.q().number()));
        obj.insert("r".into(), json!(self.params.r().number()));
        match &self.outcome {
            CandidateOutcome::Defined { facets, saturated } => {
                obj.insert("outcome".into(), json!("defined"));
                obj.insert("facets".into(), uint_to_json_string(facets));
                obj.insert("saturated".into(), json!(saturated));
            }
            CandidateOutcome::Undefined(reason) => {
                obj.insert("outcome".into(), json!("undefined"));
                obj.insert("reason".into(), json!(reason.to_string()));
            }
            CandidateOutcome::Duplicate { of } => {
                obj.insert("outcome".into(), json!("duplicate"));
                obj.insert("of".into(), json!(of));
            }
        }
        Value::Object(obj)
    }
}

/// The full answer for one instance.
#[derive(Clone, Debug)]
pub struct MaxResult {
    pub m: BigUint,
    /// A complex attaining `m`, in the original color order.
    pub witness: TriComplex,
    pub shortcut: Shortcut,
    /// Original-to-canonical color permutation used internally.
    pub permutation: ColorPermutation,
    /// Every candidate evaluation, in canonical colors.
    pub ledger: Vec<CandidateReport>,
    /// Number of non-duplicate candidate constructions attempted.
    pub candidates_constructed: usize,
}

impl MaxResult {
    pub fn to_json(&self, trace: bool, edge_cap: Option<u64>) -> Value {
        let mut obj = serde_json::Map::new();
        obj.insert("m".into(), uint_to_json_string(&self.m));
        obj.insert("shortcut".into(), json!(self.shortcut.code()));
        if let Shortcut::Vertedge { conditions, .. } = &self.shortcut {
            obj.insert("vertedge_conditions".into(), json!(conditions.to_vec()));
        }
        obj.insert(
            "permutation".into(),
            json!(self.permutation.image_numbers().to_vec()),
        );
        obj.insert(
            "candidates_constructed".into(),
            json!(self.candidates_constructed),
        );
        obj.insert("witness".into(), self.witness.to_json(edge_cap));
        if trace {
            obj.insert(
                "ledger".into(),
                Value::Array(self.ledger.iter().map(CandidateReport::to_json).collect()),
            );
        }
        Value::Object(obj)
    }
}

/// Step-1 failure: some edge budget exceeds its vertex product.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("no complex exists: {}", reasons.join(", "))]
pub struct EdgeInfeasible {
    pub reasons: Vec<String>,
}

/// The floor-product shortcut: if for some color `a` with the other two
/// colors `b, c` we have `⌊f_ab/f_a⌋·⌊f_ac/f_a⌋ ≥ f_bc`, then
/// `m = f_a · f_bc`. Returns the lowest witnessing color, all three
/// condition flags, and the witness construction parameters.
pub fn shortcut_vertedge(fv: &FlagVector) -> Option<(Color, [bool; 3], BigUint, CandidateParams)> {
    // (a, b, c): a is the distinguished color, b the color whose pair
    // with a fills first, c the remaining color.
    let layouts = [
        (Color::C1, Color::C2, Color::C3),
        (Color::C2, Color::C1, Color::C3),
        (Color::C3, Color::C1, Color::C2),
    ];
    let conditions = layouts.map(|(a, b, c)| {
        let fa = fv.vertex(a);
        let e_ab = fv.edge(ColorPair::of(a, b));
        let e_ac = fv.edge(ColorPair::of(a, c));
        let e_bc = fv.edge(ColorPair::of(b, c));
        (e_ab / fa) * (e_ac / fa) >= *e_bc
    });
    let hit = layouts
        .iter()
        .zip(conditions)
        .find_map(|(&layout, ok)| ok.then_some(layout))?;
    let (a, b, c) = hit;
    let e_ab = fv.edge(ColorPair::of(a, b));
    let e_bc = fv.edge(ColorPair::of(b, c));
    let g_a = fv.vertex(a).clone();
    let g_b = e_ab / fv.vertex(a);
    let g_c = e_bc / &g_b;
    let mut g: [BigUint; 3] = Default::default();
    g[a.index()] = g_a;
    g[b.index()] = g_b;
    g[c.index()] = g_c;
    let m = fv.vertex(a) * e_bc;
    Some((a, conditions, m, CandidateParams::new(g, c, b)))
}

/// The degenerate-core shortcut: with canonical edge order and `b1 = 0`,
/// every 12-edge/13-edge pair supports at most one facet and all pairs
/// are achievable, so `m = f12·f13` with a complete-core witness on
/// `(1, f12, f13)`.
pub fn shortcut_b10(fv: &FlagVector, b: &BConstants) -> Option<BigUint> {
    b.get(Color::C1)
        .is_zero()
        .then(|| fv.edge(ColorPair::E12) * fv.edge(ColorPair::E13))
}

/// Fills each staircase with exactly its edge budget, greedily. Used for
/// the zero-budget witness, where no facet can exist.
fn exact_fill(fv: &FlagVector) -> TriComplex {
    let graph = |pair: ColorPair| {
        let (a, b) = pair.endpoints();
        let budget = fv.edge(pair);
        let cols = fv.vertex(b);
        let mut runs: Vec<(BigUint, BigUint)> = Vec::new();
        if !budget.is_zero() {
            let full = budget / cols;
            let rem = budget - &full * cols;
            if !full.is_zero() {
                runs.push((cols.clone(), full));
            }
            if !rem.is_zero() {
                runs.push((rem, BigUint::one()));
            }
        }
        StaircaseGraph::from_runs(runs, fv.vertex(a).clone(), cols.clone())
            .expect("validated budgets fit their boxes")
    };
    TriComplex::new(
        fv.vertices().clone(),
        graph(ColorPair::E12),
        graph(ColorPair::E13),
        graph(ColorPair::E23),
    )
    .expect("caps match budgets")
}

struct Driver<'a> {
    fv: &'a FlagVector,
    ledger: Vec<CandidateReport>,
    complexes: Vec<Option<TriComplex>>,
    seen: HashMap<CandidateParams, usize>,
    best: Option<(BigUint, usize)>,
    constructed: usize,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum EvalKind {
    Defined,
    Undefined,
    Duplicate,
}

impl<'a> Driver<'a> {
    fn new(fv: &'a FlagVector) -> Self {
        Driver {
            fv,
            ledger: Vec::new(),
            complexes: Vec::new(),
            seen: HashMap::new(),
            best: None,
            constructed: 0,
        }
    }

    fn eval(&mut self, step: u8, r: Color, g_r: &BigUint) -> EvalKind {
        let params = determinize_params(self.fv, r, g_r);
        self.eval_params(step, params)
    }

    fn eval_params(&mut self, step: u8, params: CandidateParams) -> EvalKind {
        if let Some(&of) = self.seen.get(&params) {
            self.ledger.push(CandidateReport {
                step,
                params,
                outcome: CandidateOutcome::Duplicate { of },
            });
            self.complexes.push(None);
            return EvalKind::Duplicate;
        }
        let index = self.ledger.len();
        let (kind, outcome, complex) = match build(self.fv, &params) {
            Ok(built) => {
                let facets = built.complex.facet_count();
                if self.best.as_ref().is_none_or(|(b, _)| facets > *b) {
                    self.best = Some((facets.clone(), index));
                }
                (
                    EvalKind::Defined,
                    CandidateOutcome::Defined {
                        facets,
                        saturated: built.saturated,
                    },
                    Some(built.complex),
                )
            }
            Err(undefined) => (
                EvalKind::Undefined,
                CandidateOutcome::Undefined(undefined.reason),
                None,
            ),
        };
        self.constructed += 1;
        self.seen.insert(params.clone(), index);
        self.ledger.push(CandidateReport {
            step,
            params,
            outcome,
        });
        self.complexes.push(complex);
        kind
    }

    /// True when the quadratic bound says `g2` cannot beat the incumbent.
    fn pruned(&self, b1: &BigUint, g2: &BigUint) -> bool {
        match &self.best {
            None => false,
            Some((incumbent, _)) => v_bound_at(self.fv, b1, g2) <= to_ratio(incumbent),
        }
    }
}

/// Computes the maximum facet count achievable under the budgets, with a
/// witness, the shortcut taken (if any), and the full candidate ledger.
pub fn maximize(fv: &FlagVector) -> Result<MaxResult, EdgeInfeasible> {
    let report = validate(fv);
    if !report.is_feasible_so_far() {
        return Err(EdgeInfeasible {
            reasons: report.failures(),
        });
    }

    if fv.any_budget_zero() {
        let witness = exact_fill(fv);
        debug_assert!(witness.facet_count().is_zero());
        return Ok(MaxResult {
            m: BigUint::zero(),
            witness,
            shortcut: Shortcut::ZeroBudget,
            permutation: ColorPermutation::identity(),
            ledger: Vec::new(),
            candidates_constructed: 0,
        });
    }

    if let Some((color, conditions, m, params)) = shortcut_vertedge(fv) {
        let built = build(fv, &params).expect("shortcut witness parameters fit the budgets");
        debug_assert_eq!(built.complex.facet_count(), m);
        return Ok(MaxResult {
            m,
            witness: built.complex,
            shortcut: Shortcut::Vertedge { color, conditions },
            permutation: ColorPermutation::identity(),
            ledger: Vec::new(),
            candidates_constructed: 0,
        });
    }

    let (canon, perm) = canonical_relabel(fv);
    let b = compute_b(&canon).expect("positive budgets past the zero shortcut");

    if let Some(m) = shortcut_b10(&canon, &b) {
        let witness = TriComplex::complete(
            canon.vertices().clone(),
            [
                BigUint::one(),
                canon.edge(ColorPair::E12).clone(),
                canon.edge(ColorPair::E13).clone(),
            ],
        )
        .expect("degenerate-core witness fits the budgets");
        debug_assert_eq!(witness.facet_count(), m);
        return Ok(MaxResult {
            m,
            witness: witness.permuted(&perm.inverse()),
            shortcut: Shortcut::B1Zero,
            permutation: perm,
            ledger: Vec::new(),
            candidates_constructed: 0,
        });
    }

    let b1 = b.get(Color::C1).clone();
    let b2 = b.get(Color::C2).clone();
    let b3 = b.get(Color::C3).clone();
    let mut driver = Driver::new(&canon);

    // Known core size equals its relaxed value, no extra vertex there.
    driver.eval(5, Color::C1, &b1);
    driver.eval(5, Color::C2, &b2);
    // Known core size, extra-free color elsewhere: at most two candidate
    // values each.
    for g2 in bibr_candidates(&canon, Color::C3, Color::C2, &b3) {
        driver.eval(6, Color::C2, &g2);
    }
    for g1 in bibr_candidates(&canon, Color::C3, Color::C1, &b3) {
        driver.eval(7, Color::C1, &g1);
    }
    for g1 in bibr_candidates(&canon, Color::C2, Color::C1, &b2) {
        driver.eval(8, Color::C1, &g1);
    }
    // No extra vertex of color 3: only the full vertex budget matters.
    driver.eval(9, Color::C3, canon.vertex(Color::C3));

    // Middle-core sweep, pruned by the quadratic bound.
    if let Some((lo, hi)) = b1g2_range(&canon, &b1).bounds() {
        let (start, step, go_up, go_down) = if b2 < lo {
            (lo.clone(), 12u8, true, false)
        } else if b2 > hi {
            (hi.clone(), 13u8, false, true)
        } else {
            (b2.clone(), 11u8, true, true)
        };
        driver.eval(step, Color::C2, &start);
        if go_up {
            let mut g2 = &start + BigUint::one();
            while g2 <= hi && !driver.pruned(&b1, &g2) {
                if driver.eval(step, Color::C2, &g2) == EvalKind::Undefined {
                    break;
                }
                g2 += BigUint::one();
            }
        }
        if go_down {
            let mut g2 = start.clone();
            while g2 > lo {
                g2 -= BigUint::one();
                if driver.pruned(&b1, &g2) {
                    break;
                }
                if driver.eval(step, Color::C2, &g2) == EvalKind::Undefined {
                    break;
                }
            }
        }
    }

    if driver.best.is_none() {
        // Safety net; the case analysis guarantees some candidate above is
        // defined, but a minimal core is always available.
        let ones = [(); 3].map(|_| BigUint::one());
        let l = crate::construct::leftover_j(&canon, &ones);
        let (p, q) = if l.get(Color::C2) >= l.get(Color::C1) {
            (Color::C1, Color::C2)
        } else {
            (Color::C2, Color::C1)
        };
        driver.eval_params(14, CandidateParams::new(ones, p, q));
    }

    let (m, index) = driver.best.expect("a defined candidate always exists");
    let witness = driver.complexes[index]
        .clone()
        .expect("best index points at a defined candidate");
    Ok(MaxResult {
        m,
        witness: witness.permuted(&perm.inverse()),
        shortcut: Shortcut::None,
        permutation: perm,
        ledger: driver.ledger,
        candidates_constructed: driver.constructed,
    })
}

/// Exact check of the worst-case candidate-count bound
/// `count < 15 + 2√2·√(f12·f23)/f13` in canonical edge order, by integer
/// cross-multiplication of the squared inequality.
pub fn within_candidate_bound(fv: &FlagVector, count: usize) -> bool {
    if count <= 15 {
        return true;
    }
    let mut e = fv.edges().clone();
    e.sort();
    let [f12, f13, f23] = e;
    let excess = BigUint::from(count - 15);
    &excess * &excess * &f13 * &f13 < BigUint::from(8u32) * &f12 * &f23
}

/// The feasibility decision for a proposed full flag f-vector.
#[derive(Clone, Debug)]
pub struct FeasibilityVerdict {
    pub feasible: bool,
    pub proposed: Option<BigUint>,
    /// The computed maximum, when the budgets admit any complex at all.
    pub m: Option<BigUint>,
    pub reasons: Vec<String>,
    /// The maximization result; for feasible proposals with
    /// `f123 < m` the witness stands with facets conceptually truncated
    /// (dropping facets from a complex is always legal).
    pub result: Option<MaxResult>,
}

impl FeasibilityVerdict {
    pub fn to_json(&self, trace: bool, edge_cap: Option<u64>) -> Value {
        let mut obj = serde_json::Map::new();
        obj.insert("feasible".into(), json!(self.feasible));
        if let Some(proposed) = &self.proposed {
            obj.insert("proposed_f123".into(), uint_to_json_string(proposed));
        }
        if let Some(m) = &self.m {
            obj.insert("m".into(), uint_to_json_string(m));
        }
        if !self.reasons.is_empty() {
            obj.insert("reasons".into(), json!(self.reasons));
        }
        if let Some(result) = &self.result {
            if self.feasible {
                obj.insert("witness".into(), result.witness.to_json(edge_cap));
            }
            if trace {
                obj.insert(
                    "ledger".into(),
                    Value::Array(result.ledger.iter().map(CandidateReport::to_json).collect()),
                );
            }
        }
        Value::Object(obj)
    }
}

/// Decides whether the proposed vector (with `f123` supplied) is the flag
/// f-vector of some 3-colored complex.
pub fn is_feasible(fv: &FlagVector) -> Result<FeasibilityVerdict, FlagVectorError> {
    let f123 = fv.facets().ok_or(FlagVectorError::MissingFacets)?.clone();
    match maximize(fv) {
        Err(infeasible) => Ok(FeasibilityVerdict {
            feasible: false,
            proposed: Some(f123),
            m: None,
            reasons: infeasible.reasons,
            result: None,
        }),
        Ok(result) => {
            let feasible = f123 <= result.m;
            let reasons = if feasible {
                Vec::new()
            } else {
                vec![format!(
                    "f123 = {} exceeds the maximum m = {}",
                    f123, result.m
                )]
            };
            Ok(FeasibilityVerdict {
                feasible,
                proposed: Some(f123),
                m: Some(result.m.clone()),
                reasons,
                result: Some(result),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fv(v: [u64; 3], e: [u64; 3]) -> FlagVector {
        FlagVector::from_u64(v, e)
    }

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    fn assert_witness_sound(result: &MaxResult, input: &FlagVector) {
        assert_eq!(result.witness.facet_count(), result.m);
        assert!(result.witness.within_budget(input));
        assert!(result.witness.is_color_shifted());
    }

    #[test]
    fn infeasible_products_error_out() {
        let err = maximize(&fv([3, 5, 7], [23, 14, 18])).unwrap_err();
        assert_eq!(err.reasons, vec!["f12 > f1*f2".to_string()]);
    }

    #[test]
    fn vertedge_shortcut_fires() {
        let input = fv([3, 5, 7], [13, 16, 18]);
        let result = maximize(&input).unwrap();
        assert_eq!(result.m, big(54));
        assert!(matches!(
            result.shortcut,
            Shortcut::Vertedge {
                color: Color::C1,
                ..
            }
        ));
        assert_witness_sound(&result, &input);
    }

    #[test]
    fn vertedge_with_single_vertex_color() {
        let input = fv([1, 1, 1], [1, 1, 1]);
        let result = maximize(&input).unwrap();
        assert_eq!(result.m, big(1));
        assert!(matches!(result.shortcut, Shortcut::Vertedge { .. }));
        assert_witness_sound(&result, &input);
    }

    #[test]
    fn degenerate_core_shortcut_after_relabel() {
        let input = fv([17, 31, 25], [15, 12, 279]);
        let result = maximize(&input).unwrap();
        assert_eq!(result.m, big(180));
        assert_eq!(result.shortcut, Shortcut::B1Zero);
        assert_eq!(result.permutation.image_numbers(), [1, 3, 2]);
        assert_witness_sound(&result, &input);
    }

    #[test]
    fn degenerate_core_with_ample_vertices() {
        // Few 12- and 13-edges against a huge 23 budget: each pair of a
        // 12-edge and a 13-edge supports at most one facet, all
        // achievable.
        let input = fv([1000, 1000, 1000], [5, 7, 100]);
        let result = maximize(&input).unwrap();
        assert_eq!(result.m, big(35));
        assert_eq!(result.shortcut, Shortcut::B1Zero);
        assert_witness_sound(&result, &input);
    }

    #[test]
    fn matches_exhaustive_search_on_seeded_boxes() {
        // Vertex-capped instances beyond the exhaustive acceptance grid.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for i in 0..200 {
            let cap = if i % 2 == 0 { 5 } else { 6 };
            let e_cap = if i % 2 == 0 { 10 } else { 12 };
            let f: [u64; 3] = std::array::from_fn(|_| rng.random_range(1..=cap));
            let e = [
                rng.random_range(1..=(f[0] * f[1]).min(e_cap)),
                rng.random_range(1..=(f[0] * f[2]).min(e_cap)),
                rng.random_range(1..=(f[1] * f[2]).min(e_cap)),
            ];
            let input = fv(f, e);
            let result = maximize(&input).unwrap();
            assert_witness_sound(&result, &input);
            let brute =
                crate::oracle::brute_max(&input, &crate::oracle::OracleOptions::default()).unwrap();
            assert_eq!(result.m, brute.m, "{input}");
        }
    }

    #[test]
    fn handles_budgets_beyond_machine_words() {
        // Entries near 10^24; edges kept within a factor of two of each
        // other so the sweep stays short.
        use num_traits::Num;
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        let base = BigUint::from_str_radix("1000000000000000000000000", 10).unwrap();
        for _ in 0..10 {
            let edges: [BigUint; 3] =
                std::array::from_fn(|_| &base + BigUint::from(rng.random_range(0..=u64::MAX)));
            let vertices: [BigUint; 3] = std::array::from_fn(|_| &base * 2u32);
            let input = FlagVector::new(vertices, edges.clone());
            let result = maximize(&input).unwrap();
            assert_witness_sound(&result, &input);
            assert!(&result.m * &result.m <= &edges[0] * &edges[1] * &edges[2]);
            assert!(within_candidate_bound(
                &input,
                result.candidates_constructed
            ));
        }
    }

    #[test]
    fn zero_budget_shortcut() {
        for input in [
            fv([0, 0, 0], [0, 0, 0]),
            fv([3, 4, 0], [7, 0, 0]),
            fv([3, 4, 5], [0, 10, 12]),
        ] {
            let result = maximize(&input).unwrap();
            assert_eq!(result.m, big(0), "{input}");
            assert_eq!(result.shortcut, Shortcut::ZeroBudget);
            assert_witness_sound(&result, &input);
            // The witness realizes the budgets exactly.
            for pair in ColorPair::ALL {
                assert_eq!(result.witness.graph(pair).edge_count(), *input.edge(pair));
            }
        }
    }

    #[test]
    fn zero_budget_with_bad_products_is_still_an_error() {
        assert!(maximize(&fv([0, 5, 5], [1, 0, 0])).is_err());
    }

    #[test]
    fn full_procedure_typical_instance() {
        let input = fv([533, 471, 818], [4972, 5311, 5630]);
        let result = maximize(&input).unwrap();
        assert_eq!(result.m, big(382896));
        assert_eq!(result.shortcut, Shortcut::None);
        assert_witness_sound(&result, &input);

        // The ledger: two undefined relaxed-core candidates, the optimum
        // from the two-value window, one vertex-capped candidate, the
        // full-f3 candidate, and a duplicate sweep visit.
        let rows: Vec<(u8, [u64; 3], u8)> = result
            .ledger
            .iter()
            .map(|r| {
                let g = r
                    .params
                    .g_array()
                    .clone()
                    .map(|v| u64::try_from(&v).unwrap());
                (r.step, g, r.params.r().number())
            })
            .collect();
        assert_eq!(
            rows,
            vec![
                (5, [68, 73, 78], 1),
                (5, [69, 72, 78], 2),
                (6, [68, 73, 77], 2),
                (8, [69, 72, 76], 1),
                (9, [6, 6, 818], 3),
                (12, [68, 73, 77], 2),
            ]
        );
        assert!(matches!(
            result.ledger[0].outcome,
            CandidateOutcome::Undefined(_)
        ));
        assert!(matches!(
            result.ledger[1].outcome,
            CandidateOutcome::Undefined(_)
        ));
        assert_eq!(result.ledger[2].facets(&result.ledger), Some(&big(382896)));
        assert_eq!(result.ledger[3].facets(&result.ledger), Some(&big(382700)));
        assert!(matches!(
            result.ledger[5].outcome,
            CandidateOutcome::Duplicate { of: 2 }
        ));
        assert_eq!(result.candidates_constructed, 5);
    }

    #[test]
    fn full_procedure_with_long_window_sweep() {
        let input = fv([13, 5471, 3818], [1843, 2157, 3150248]);
        let result = maximize(&input).unwrap();
        assert_eq!(result.m, big(3198156));
        assert_witness_sound(&result, &input);

        // Sweep rows: the start duplicates the step-5 candidate, then four
        // ascending and three descending neighbors.
        let sweep: Vec<(u64, Option<u64>)> = result
            .ledger
            .iter()
            .filter(|r| r.step >= 11)
            .map(|r| {
                (
                    u64::try_from(r.params.g(Color::C2)).unwrap(),
                    r.facets(&result.ledger).map(|f| u64::try_from(f).unwrap()),
                )
            })
            .collect();
        assert_eq!(
            sweep,
            vec![
                (1640, Some(3198156)),
                (1641, Some(3198122)),
                (1642, Some(3198086)),
                (1643, Some(3198048)),
                (1644, Some(3198008)),
                (1639, Some(3198098)),
                (1638, Some(3198013)),
                (1637, Some(3198040)),
            ]
        );
    }

    #[test]
    fn five_grid_maximum_is_nine() {
        let input = fv([5, 5, 5], [5, 5, 5]);
        let result = maximize(&input).unwrap();
        assert_eq!(result.m, big(9));
        assert_witness_sound(&result, &input);
    }

    #[test]
    fn perturbation_sensitive_instances() {
        let base = maximize(&fv([2, 6683, 7000], [10000, 10200, 45331745])).unwrap();
        assert_eq!(base.m, big(56664978));
        let canon_g = |r: &MaxResult| {
            let row = r
                .ledger
                .iter()
                .find(|row| row.facets(&r.ledger) == Some(&r.m))
                .unwrap();
            (
                row.params
                    .g_array()
                    .clone()
                    .map(|v| u64::try_from(&v).unwrap()),
                row.params.p().number(),
                row.params.q().number(),
            )
        };
        assert_eq!(canon_g(&base), ([1, 6683, 6783], 1, 3));

        let fewer_vertices = maximize(&fv([2, 6682, 7000], [10000, 10200, 45331745])).unwrap();
        assert_eq!(fewer_vertices.m, big(56664977));
        let extra_edge = maximize(&fv([2, 6683, 7000], [10000, 10201, 45331745])).unwrap();
        assert_eq!(extra_edge.m, big(56668334));
    }

    #[test]
    fn results_map_back_through_relabeling() {
        let input = fv([818, 533, 471], [5630, 5311, 4972]);
        let result = maximize(&input).unwrap();
        assert_eq!(result.m, big(382896));
        assert_witness_sound(&result, &input);
        assert!(!result.permutation.is_identity());
    }

    #[test]
    fn fixed_window_when_f1_equals_relaxed_core() {
        // f1 = b1 pins the middle core size to f12/f1; cross-checked
        // against the exhaustive search.
        let input = fv([2, 50, 50], [8, 9, 17]);
        let result = maximize(&input).unwrap();
        assert_eq!(result.shortcut, Shortcut::None);
        assert_witness_sound(&result, &input);
        let brute =
            crate::oracle::brute_max(&input, &crate::oracle::OracleOptions::default()).unwrap();
        assert_eq!(result.m, brute.m);
        assert!(result
            .ledger
            .iter()
            .any(|row| row.step >= 11 && *row.params.g(Color::C2) == big(4)));
    }

    #[test]
    fn candidate_bound_check_is_exact() {
        let input = fv([10, 10, 10], [100, 100, 100]);
        assert!(within_candidate_bound(&input, 15));
        assert!(within_candidate_bound(&input, 17)); // 2√2·10 > 2
                                                     // (c−15)²·f13² < 8·f12·f23 fails at c − 15 = ⌈2√2·√(f12·f23)/f13⌉.
        assert!(!within_candidate_bound(&input, 15 + 3));
    }

    #[test]
    fn feasibility_with_zero_budgets() {
        let zeros = fv([0, 0, 0], [0, 0, 0]);
        assert!(
            is_feasible(&zeros.clone().with_facets(big(0)))
                .unwrap()
                .feasible
        );
        assert!(!is_feasible(&zeros.with_facets(big(1))).unwrap().feasible);
        let no_edges = fv([4, 4, 4], [0, 6, 6]);
        assert!(!is_feasible(&no_edges.with_facets(big(1))).unwrap().feasible);
    }

    #[test]
    fn feasibility_verdicts() {
        let yes = is_feasible(&fv([3, 5, 7], [13, 16, 18]).with_facets(big(54))).unwrap();
        assert!(yes.feasible);
        assert_eq!(yes.m, Some(big(54)));

        let no = is_feasible(&fv([3, 5, 7], [13, 16, 18]).with_facets(big(55))).unwrap();
        assert!(!no.feasible);

        let five = fv([5, 5, 5], [5, 5, 5]);
        assert!(
            is_feasible(&five.clone().with_facets(big(9)))
                .unwrap()
                .feasible
        );
        assert!(!is_feasible(&five.with_facets(big(10))).unwrap().feasible);

        let products = is_feasible(&fv([3, 5, 7], [23, 14, 18]).with_facets(big(0))).unwrap();
        assert!(!products.feasible);
        assert_eq!(products.m, None);

        let missing = is_feasible(&fv([1, 1, 1], [1, 1, 1]));
        assert!(missing.is_err());
    }

    #[test]
    fn ledger_json_shape() {
        let result = maximize(&fv([533, 471, 818], [4972, 5311, 5630])).unwrap();
        let json = result.to_json(true, None);
        assert_eq!(json["m"], json!("382896"));
        assert_eq!(json["shortcut"], json!("none"));
        let ledger = json["ledger"].as_array().unwrap();
        assert_eq!(ledger.len(), 6);
        assert_eq!(ledger[2]["facets"], json!("382896"));
        assert_eq!(ledger[5]["outcome"], json!("duplicate"));
    }
}
