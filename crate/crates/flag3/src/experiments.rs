//! Built-in regression cases with known optima, and the seeded sampling
//! study of how many candidates the driver constructs per instance.

use std::fmt::Write as _;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::construct::{b1g2_range, compute_b};
use crate::flagvec::{canonical_relabel, Color, FlagVector};
use crate::maximize::{maximize, within_candidate_bound, CandidateReport, Shortcut};

/// One fixed instance with externally known expectations.
pub struct GoldenCase {
    pub name: &'static str,
    pub vertices: [u64; 3],
    pub edges: [u64; 3],
    pub checks: &'static [Check],
}

/// A single assertion about the result of running a golden case.
pub enum Check {
    /// The budgets admit no complex at all.
    EdgeInfeasible,
    /// The maximum facet count, as a decimal string.
    M(&'static str),
    /// The shortcut code, e.g. `"vertedge:1"`.
    ShortcutCode(&'static str),
    /// The original-to-canonical color permutation.
    Permutation([u8; 3]),
    /// The first ledger row attaining the maximum has these parameters
    /// (canonical colors).
    WitnessParams { g: [u64; 3], p: u8, q: u8 },
    /// The witness row's middle core size.
    WitnessG2(u64),
    /// Some non-duplicate ledger row has these parameters and outcome.
    LedgerRow {
        g: [u64; 3],
        r: u8,
        outcome: RowOutcome,
    },
    /// The middle-core window computed before the sweep.
    G2WindowBound { lo: u64, hi: u64 },
    /// The sweep visited exactly this `g2` range.
    SweepWindow { lo: u64, hi: u64 },
    /// Resolved facet counts of the sweep rows, in ledger order.
    SweepFacets(&'static [&'static str]),
}

pub enum RowOutcome {
    Undefined,
    Facets(&'static str),
}

/// The built-in table. Every expectation is an exact integer; there are
/// no tolerances anywhere.
pub fn golden_cases() -> Vec<GoldenCase> {
    vec![
        GoldenCase {
            name: "products-violated",
            vertices: [3, 5, 7],
            edges: [23, 14, 18],
            checks: &[Check::EdgeInfeasible],
        },
        GoldenCase {
            name: "vertex-edge-shortcut",
            vertices: [3, 5, 7],
            edges: [13, 16, 18],
            checks: &[Check::M("54"), Check::ShortcutCode("vertedge:1")],
        },
        GoldenCase {
            name: "degenerate-core-shortcut",
            vertices: [17, 31, 25],
            edges: [15, 12, 279],
            checks: &[
                Check::M("180"),
                Check::ShortcutCode("b1zero"),
                Check::Permutation([1, 3, 2]),
            ],
        },
        GoldenCase {
            name: "five-grid",
            vertices: [5, 5, 5],
            edges: [5, 5, 5],
            checks: &[Check::M("9"), Check::ShortcutCode("none")],
        },
        GoldenCase {
            name: "bounded-candidate-set",
            vertices: [533, 471, 818],
            edges: [4972, 5311, 5630],
            checks: &[
                Check::M("382896"),
                Check::ShortcutCode("none"),
                Check::WitnessParams {
                    g: [68, 73, 77],
                    p: 3,
                    q: 1,
                },
                Check::LedgerRow {
                    g: [68, 73, 78],
                    r: 1,
                    outcome: RowOutcome::Undefined,
                },
                Check::LedgerRow {
                    g: [69, 72, 78],
                    r: 2,
                    outcome: RowOutcome::Undefined,
                },
                Check::LedgerRow {
                    g: [68, 73, 77],
                    r: 2,
                    outcome: RowOutcome::Facets("382896"),
                },
                Check::LedgerRow {
                    g: [69, 72, 76],
                    r: 1,
                    outcome: RowOutcome::Facets("382736"),
                },
            ],
        },
        GoldenCase {
            name: "window-sweep",
            vertices: [13, 5471, 3818],
            edges: [1843, 2157, 3150248],
            checks: &[
                Check::M("3198156"),
                Check::ShortcutCode("none"),
                Check::WitnessParams {
                    g: [1, 1640, 1920],
                    p: 3,
                    q: 1,
                },
                Check::G2WindowBound { lo: 1460, hi: 1843 },
                Check::SweepWindow { lo: 1637, hi: 1644 },
                Check::SweepFacets(&[
                    "3198156", "3198122", "3198086", "3198048", "3198008", "3198098", "3198013",
                    "3198040",
                ]),
            ],
        },
        GoldenCase {
            name: "perturbation-base",
            vertices: [2, 6683, 7000],
            edges: [10000, 10200, 45331745],
            checks: &[
                Check::M("56664978"),
                Check::WitnessParams {
                    g: [1, 6683, 6783],
                    p: 1,
                    q: 3,
                },
            ],
        },
        GoldenCase {
            name: "perturbation-one-vertex-fewer",
            vertices: [2, 6682, 7000],
            edges: [10000, 10200, 45331745],
            checks: &[Check::M("56664977")],
        },
        GoldenCase {
            name: "perturbation-one-edge-more",
            vertices: [2, 6683, 7000],
            edges: [10000, 10201, 45331745],
            checks: &[Check::M("56668334")],
        },
        GoldenCase {
            name: "wide-window-square",
            vertices: [2, 100_000_000, 100_000_000],
            edges: [100_000_000, 100_020_000, 4_445_333_316_613_330],
            checks: &[Check::M("5556666649191260"), Check::WitnessG2(66_664_202)],
        },
        GoldenCase {
            name: "wide-window-tall",
            vertices: [2, 1_000_000, 100_000_000],
            edges: [1_000_000, 100_020_000, 44_453_289_179_999],
            checks: &[Check::M("55566644505542"), Check::WitnessG2(666_643)],
        },
    ]
}

/// The outcome of one golden case: empty `failures` means pass.
pub struct CaseResult {
    pub name: &'static str,
    pub failures: Vec<String>,
}

impl CaseResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn witness_row<'a>(ledger: &'a [CandidateReport], m: &BigUint) -> Option<&'a CandidateReport> {
    ledger.iter().find(|row| row.facets(ledger) == Some(m))
}

fn row_g(row: &CandidateReport) -> [u64; 3] {
    row.params
        .g_array()
        .clone()
        .map(|v| u64::try_from(&v).unwrap_or(u64::MAX))
}

pub fn run_golden_case(case: &GoldenCase) -> CaseResult {
    let fv = FlagVector::from_u64(case.vertices, case.edges);
    let mut failures = Vec::new();
    let outcome = maximize(&fv);

    for check in case.checks {
        match check {
            Check::EdgeInfeasible => {
                if outcome.is_ok() {
                    failures.push("expected the budgets to admit no complex".to_string());
                }
            }
            other => {
                let result = match &outcome {
                    Ok(result) => result,
                    Err(e) => {
                        failures.push(format!("expected a result, got: {e}"));
                        break;
                    }
                };
                match other {
                    Check::EdgeInfeasible => unreachable!(),
                    Check::M(expected) => {
                        if result.m.to_string() != *expected {
                            failures.push(format!("m: expected {expected}, got {}", result.m));
                        }
                    }
                    Check::ShortcutCode(expected) => {
                        if result.shortcut.code() != *expected {
                            failures.push(format!(
                                "shortcut: expected {expected}, got {}",
                                result.shortcut.code()
                            ));
                        }
                    }
                    Check::Permutation(expected) => {
                        if result.permutation.image_numbers() != *expected {
                            failures.push(format!(
                                "permutation: expected {expected:?}, got {:?}",
                                result.permutation.image_numbers()
                            ));
                        }
                    }
                    Check::WitnessParams { g, p, q } => {
                        match witness_row(&result.ledger, &result.m) {
                            None => failures.push("no ledger row attains m".to_string()),
                            Some(row) => {
                                let got =
                                    (row_g(row), row.params.p().number(), row.params.q().number());
                                if got != (*g, *p, *q) {
                                    failures.push(format!(
                                    "witness params: expected ({g:?}, p={p}, q={q}), got ({:?}, p={}, q={})",
                                    got.0, got.1, got.2
                                ));
                                }
                            }
                        }
                    }
                    Check::WitnessG2(expected) => match witness_row(&result.ledger, &result.m) {
                        None => failures.push("no ledger row attains m".to_string()),
                        Some(row) => {
                            let got = row_g(row)[1];
                            if got != *expected {
                                failures
                                    .push(format!("witness g2: expected {expected}, got {got}"));
                            }
                        }
                    },
                    Check::LedgerRow { g, r, outcome } => {
                        let row = result.ledger.iter().find(|row| {
                            !matches!(
                                row.outcome,
                                crate::maximize::CandidateOutcome::Duplicate { .. }
                            ) && row_g(row) == *g
                                && row.params.r().number() == *r
                        });
                        match (row, outcome) {
                            (None, _) => failures.push(format!("missing ledger row g={g:?} r={r}")),
                            (Some(row), RowOutcome::Undefined) => {
                                if row.facets(&result.ledger).is_some() {
                                    failures.push(format!(
                                        "ledger row g={g:?}: expected undefined, got a facet count"
                                    ));
                                }
                            }
                            (Some(row), RowOutcome::Facets(expected)) => {
                                let got = row.facets(&result.ledger).map(BigUint::to_string);
                                if got.as_deref() != Some(*expected) {
                                    failures.push(format!(
                                        "ledger row g={g:?}: expected {expected} facets, got {got:?}"
                                    ));
                                }
                            }
                        }
                    }
                    Check::G2WindowBound { lo, hi } => {
                        let (canon, _) = canonical_relabel(&fv);
                        let b = compute_b(&canon).expect("positive budgets");
                        let window = b1g2_range(&canon, b.get(Color::C1)).bounds();
                        let expected = Some((BigUint::from(*lo), BigUint::from(*hi)));
                        if window != expected {
                            failures
                                .push(format!("g2 window: expected [{lo}, {hi}], got {window:?}"));
                        }
                    }
                    Check::SweepWindow { lo, hi } => {
                        let visited: Vec<u64> = result
                            .ledger
                            .iter()
                            .filter(|row| row.step >= 11)
                            .map(|row| row_g(row)[1])
                            .collect();
                        let got = (visited.iter().min().copied(), visited.iter().max().copied());
                        if got != (Some(*lo), Some(*hi)) {
                            failures
                                .push(format!("sweep window: expected [{lo}, {hi}], got {got:?}"));
                        }
                    }
                    Check::SweepFacets(expected) => {
                        let got: Vec<Option<String>> = result
                            .ledger
                            .iter()
                            .filter(|row| row.step >= 11)
                            .map(|row| row.facets(&result.ledger).map(BigUint::to_string))
                            .collect();
                        let expected: Vec<Option<String>> =
                            expected.iter().map(|s| Some(s.to_string())).collect();
                        if got != expected {
                            failures.push(format!(
                                "sweep facet sequence: expected {expected:?}, got {got:?}"
                            ));
                        }
                    }
                }
            }
        }
    }
    CaseResult {
        name: case.name,
        failures,
    }
}

/// Runs every golden case; failures are reported, not thrown.
pub fn reproduce_examples() -> Vec<CaseResult> {
    golden_cases().iter().map(run_golden_case).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VertexMode {
    /// Vertex budgets equal to the edge maximum: never binding at the
    /// shortcut level.
    Ample,
    /// Vertex budgets drawn uniformly like the edges.
    Random,
}

#[derive(Clone, Debug)]
pub struct StatsConfig {
    pub samples: usize,
    pub edge_max: u64,
    pub mode: VertexMode,
    pub seed: u64,
}

#[derive(Clone, Debug)]
pub struct InstanceRecord {
    pub index: usize,
    pub vertices: [u64; 3],
    pub edges: [u64; 3],
    pub m: Option<BigUint>,
    pub candidates: usize,
    pub shortcut: String,
    pub bound_ok: bool,
}

#[derive(Clone, Debug)]
pub struct StatsReport {
    pub config: StatsConfig,
    pub records: Vec<InstanceRecord>,
    pub candidate_sum: u64,
    pub max_candidates: usize,
    /// Instances violating the exact worst-case count bound; must be 0.
    pub bound_violations: usize,
    pub infeasible_instances: usize,
}

impl StatsReport {
    pub fn mean_candidates(&self) -> f64 {
        self.candidate_sum as f64 / self.config.samples as f64
    }

    /// Exact check of `mean < limit` by cross-multiplication.
    pub fn mean_below(&self, limit: u64) -> bool {
        (self.candidate_sum as u128) < limit as u128 * self.config.samples as u128
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("seed,instance,f1,f2,f3,f12,f13,f23,m,candidates,shortcut\n");
        for r in &self.records {
            let m = r.m.as_ref().map(BigUint::to_string).unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{}",
                self.config.seed,
                r.index,
                r.vertices[0],
                r.vertices[1],
                r.vertices[2],
                r.edges[0],
                r.edges[1],
                r.edges[2],
                m,
                r.candidates,
                r.shortcut
            );
        }
        out
    }
}

/// Draws edge budgets independently and uniformly from `[1, edge_max]`,
/// runs the maximizer on each instance, and aggregates the candidate
/// counts. Reproducible bit-for-bit for a fixed seed.
pub fn sample_candidate_stats(config: StatsConfig) -> StatsReport {
    assert!(config.samples >= 1);
    assert!(config.edge_max >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut records = Vec::with_capacity(config.samples);
    let mut candidate_sum = 0u64;
    let mut max_candidates = 0usize;
    let mut bound_violations = 0usize;
    let mut infeasible = 0usize;

    for index in 0..config.samples {
        let edges: [u64; 3] = std::array::from_fn(|_| rng.random_range(1..=config.edge_max));
        let vertices: [u64; 3] = match config.mode {
            VertexMode::Ample => [config.edge_max; 3],
            VertexMode::Random => std::array::from_fn(|_| rng.random_range(1..=config.edge_max)),
        };
        let fv = FlagVector::from_u64(vertices, edges);
        let record = match maximize(&fv) {
            Err(_) => {
                infeasible += 1;
                InstanceRecord {
                    index,
                    vertices,
                    edges,
                    m: None,
                    candidates: 0,
                    shortcut: "infeasible".to_string(),
                    bound_ok: true,
                }
            }
            Ok(result) => {
                let bound_ok = !matches!(result.shortcut, Shortcut::None)
                    || within_candidate_bound(&fv, result.candidates_constructed);
                InstanceRecord {
                    index,
                    vertices,
                    edges,
                    m: Some(result.m),
                    candidates: result.candidates_constructed,
                    shortcut: result.shortcut.code(),
                    bound_ok,
                }
            }
        };
        candidate_sum += record.candidates as u64;
        max_candidates = max_candidates.max(record.candidates);
        if !record.bound_ok {
            bound_violations += 1;
        }
        records.push(record);
    }

    StatsReport {
        config,
        records,
        candidate_sum,
        max_candidates,
        bound_violations,
        infeasible_instances: infeasible,
    }
}
