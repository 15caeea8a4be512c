//! Parametric construction machinery: the `b` constants, the canonical
//! two-extra-vertex builder, the determinizer that fills in the remaining
//! core sizes from a known one, the two-candidate window for a known core
//! size, the feasible window for the middle core size, and the quadratic
//! pruning bound.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::arith::{div_ceil, floor_sqrt_ratio, to_int, to_ratio};
use crate::complex::{StaircaseGraph, TriComplex};
use crate::flagvec::{Color, ColorPair, FlagVector};

/// Construction parameters: three core sizes plus the ordered pair of
/// colors that receive an extra vertex. The third color `r = 6 − p − q`
/// receives none.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CandidateParams {
    g: [BigUint; 3],
    p: Color,
    q: Color,
}

impl CandidateParams {
    pub fn new(g: [BigUint; 3], p: Color, q: Color) -> Self {
        assert_ne!(p, q, "extra-vertex colors must be distinct");
        CandidateParams { g, p, q }
    }

    pub fn from_u64(g: [u64; 3], p: Color, q: Color) -> Self {
        Self::new(g.map(BigUint::from), p, q)
    }

    pub fn g(&self, c: Color) -> &BigUint {
        &self.g[c.index()]
    }

    pub fn g_array(&self) -> &[BigUint; 3] {
        &self.g
    }

    pub fn p(&self) -> Color {
        self.p
    }

    pub fn q(&self) -> Color {
        self.q
    }

    /// The color with no extra vertex.
    pub fn r(&self) -> Color {
        *Color::ALL
            .iter()
            .find(|&&c| c != self.p && c != self.q)
            .expect("three colors, two distinct taken")
    }

    /// Same core sizes with the two extra-vertex colors exchanged.
    pub fn swapped(&self) -> CandidateParams {
        CandidateParams {
            g: self.g.clone(),
            p: self.q,
            q: self.p,
        }
    }
}

/// The continuous-relaxation core sizes, floored: `b_i` is the floor of
/// `√(f_ij·f_ik / f_jk)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BConstants {
    values: [BigUint; 3],
}

impl BConstants {
    pub fn get(&self, c: Color) -> &BigUint {
        &self.values[c.index()]
    }

    pub fn values(&self) -> &[BigUint; 3] {
        &self.values
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("zero edge budget f{0}: degenerate, handle upstream")]
pub struct DegenerateEdges(pub &'static str);

/// Computes the three floored relaxation core sizes. Requires all edge
/// budgets positive.
pub fn compute_b(fv: &FlagVector) -> Result<BConstants, DegenerateEdges> {
    for p in ColorPair::ALL {
        if fv.edge(p).is_zero() {
            return Err(DegenerateEdges(p.label()));
        }
    }
    let values = Color::ALL.map(|c| {
        let [a, b] = c.others();
        let num = fv.edge(ColorPair::of(c, a)) * fv.edge(ColorPair::of(c, b));
        let den = fv.edge(ColorPair::opposite(c));
        floor_sqrt_ratio(&num, den)
    });
    Ok(BConstants { values })
}

/// Edges left over per color set after a complete tripartite core on `g`:
/// `j[i]` is the leftover of the pair opposite color `i`, possibly
/// negative when the core overshoots a budget.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Leftovers {
    pub j: [BigInt; 3],
}

impl Leftovers {
    pub fn get(&self, c: Color) -> &BigInt {
        &self.j[c.index()]
    }

    pub fn all_nonnegative(&self) -> bool {
        self.j.iter().all(|j| !j.is_negative())
    }
}

pub fn leftover_j(fv: &FlagVector, g: &[BigUint; 3]) -> Leftovers {
    let j = Color::ALL.map(|c| {
        let pair = ColorPair::opposite(c);
        let (a, b) = pair.endpoints();
        to_int(fv.edge(pair)) - to_int(&g[a.index()]) * to_int(&g[b.index()])
    });
    Leftovers { j }
}

/// Why a candidate cannot be built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UndefinedReason {
    /// `g_c` exceeds the vertex budget of color `c`.
    VertexBudget(Color),
    /// The complete core alone exceeds the edge budget of this pair.
    EdgeBudget(ColorPair),
}

impl std::fmt::Display for UndefinedReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            UndefinedReason::VertexBudget(c) => {
                write!(
                    f,
                    "g{} exceeds the vertex budget f{}",
                    c.number(),
                    c.number()
                )
            }
            UndefinedReason::EdgeBudget(p) => {
                write!(f, "core exceeds the {} edge budget", p.label())
            }
        }
    }
}

/// An unbuildable candidate, with the parameters that were attempted.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("candidate undefined: {reason}")]
pub struct Undefined {
    pub params: CandidateParams,
    pub reason: UndefinedReason,
}

fn check_params(fv: &FlagVector, params: &CandidateParams) -> Option<UndefinedReason> {
    for c in Color::ALL {
        if params.g(c) > fv.vertex(c) {
            return Some(UndefinedReason::VertexBudget(c));
        }
    }
    for pair in ColorPair::ALL {
        let (a, b) = pair.endpoints();
        if params.g(a) * params.g(b) > *fv.edge(pair) {
            return Some(UndefinedReason::EdgeBudget(pair));
        }
    }
    None
}

/// A successfully built candidate.
#[derive(Clone, Debug)]
pub struct Built {
    pub complex: TriComplex,
    /// True iff every edge budget is consumed exactly.
    pub saturated: bool,
}

/// Builds the canonical complex for `params`: a complete tripartite core
/// on the `g` sizes, then an extra vertex of color `p` (if the vertex
/// budget allows one) greedily adjacent to the earliest vertices of each
/// other color within the remaining edge budgets, then likewise for `q`.
/// The `q` vertex may reach the `p` vertex only after all core vertices
/// of color `p`, and only when the `p` vertex is adjacent to every core
/// vertex of color `q`, which keeps the result color-shifted.
pub fn build(fv: &FlagVector, params: &CandidateParams) -> Result<Built, Undefined> {
    if let Some(reason) = check_params(fv, params) {
        return Err(Undefined {
            params: params.clone(),
            reason,
        });
    }
    let g = |c: Color| params.g(c).clone();
    let mut rem: [BigUint; 3] = Default::default();
    for pair in ColorPair::ALL {
        let (a, b) = pair.endpoints();
        rem[pair.index()] = fv.edge(pair) - g(a) * g(b);
    }

    let p = params.p;
    let q = params.q;
    let has_extra = |c: Color| fv.vertex(c) > params.g(c);
    // attach[x][c]: number of color-c vertices adjacent to the extra
    // vertex of color x.
    let mut attach: [[BigUint; 3]; 3] = Default::default();

    if has_extra(p) {
        for c in p.others() {
            let pair = ColorPair::of(p, c);
            let amount = g(c).min(rem[pair.index()].clone());
            rem[pair.index()] -= &amount;
            attach[p.index()][c.index()] = amount;
        }
    }
    if has_extra(q) {
        let r = params.r();
        let pair_qr = ColorPair::of(q, r);
        let amount = g(r).min(rem[pair_qr.index()].clone());
        rem[pair_qr.index()] -= &amount;
        attach[q.index()][r.index()] = amount;

        let pair_pq = ColorPair::of(p, q);
        let p_extra_reachable = has_extra(p) && attach[p.index()][q.index()] == g(q);
        let cap = if p_extra_reachable {
            g(p) + BigUint::one()
        } else {
            g(p)
        };
        let amount = cap.min(rem[pair_pq.index()].clone());
        rem[pair_pq.index()] -= &amount;
        attach[q.index()][p.index()] = amount;
    }

    let extras_adjacent = attach[q.index()][p.index()] == g(p) + BigUint::one();
    let assemble = |pair: ColorPair| -> StaircaseGraph {
        let (a, b) = pair.endpoints();
        let g_row = g(a);
        let g_col = g(b);
        // Core rows bumped by an extra vertex of the column color.
        let bumped = if has_extra(b) {
            attach[b.index()][a.index()].clone().min(g_row.clone())
        } else {
            BigUint::zero()
        };
        let extra_row = if has_extra(a) {
            let mut v = attach[a.index()][b.index()].clone();
            if a == p && b == q && extras_adjacent {
                v += BigUint::one();
            }
            Some(v)
        } else {
            None
        };
        let mut runs: Vec<(BigUint, BigUint)> = Vec::new();
        if !bumped.is_zero() {
            runs.push((&g_col + BigUint::one(), bumped.clone()));
        }
        let plain = &g_row - &bumped;
        if !plain.is_zero() {
            runs.push((g_col.clone(), plain));
        }
        if let Some(v) = extra_row {
            runs.push((v, BigUint::one()));
        }
        let graph = StaircaseGraph::from_runs(runs, fv.vertex(a).clone(), fv.vertex(b).clone())
            .expect("builder attachments stay within vertex budgets");
        debug_assert!(graph.is_weakly_decreasing());
        graph
    };

    let complex = TriComplex::new(
        fv.vertices().clone(),
        assemble(ColorPair::E12),
        assemble(ColorPair::E13),
        assemble(ColorPair::E23),
    )
    .expect("builder caps agree with budgets");
    debug_assert!(complex.is_color_shifted());
    debug_assert!(complex.within_budget(fv));
    let saturated = rem.iter().all(BigUint::is_zero);
    debug_assert_eq!(
        saturated,
        ColorPair::ALL
            .iter()
            .all(|&p| complex.graph(p).edge_count() == *fv.edge(p))
    );
    Ok(Built { complex, saturated })
}

/// Computes the remaining two core sizes from a known `g_r`, plus the
/// extra-vertex order, without validity checks.
///
/// With the color pair `(x, y)` being the non-`r` colors in increasing
/// order: `g_x = ⌊f_xr/g_r⌋` when the quotient is fractional; in the
/// integral case it backs off by one exactly when keeping the full value
/// would force more `xy`-edges than the budget holds. `g_y` is computed
/// the same way referencing the already-fixed `g_x`. The first extra
/// color is the one whose pair with `r` has the larger leftover, ties to
/// the lower color index.
pub fn determinize_params(fv: &FlagVector, r: Color, g_r: &BigUint) -> CandidateParams {
    assert!(!g_r.is_zero(), "determinize requires g_r >= 1");
    let [x, y] = r.others();
    let f_xr = fv.edge(ColorPair::of(x, r));
    let f_yr = fv.edge(ColorPair::of(y, r));
    let f_xy = fv.edge(ColorPair::of(x, y));

    let quot_x = f_xr / g_r;
    let g_x = if f_xr != &(&quot_x * g_r) {
        quot_x
    } else {
        let needed_y = div_ceil(f_yr, g_r) - BigUint::one();
        if &quot_x * &needed_y > *f_xy {
            quot_x - BigUint::one()
        } else {
            quot_x
        }
    };

    let quot_y = f_yr / g_r;
    let g_y = if f_yr != &(&quot_y * g_r) {
        quot_y
    } else if &quot_y * &g_x > *f_xy {
        quot_y - BigUint::one()
    } else {
        quot_y
    };

    let leftover_xr = f_xr - &g_x * g_r;
    let leftover_yr = f_yr - &g_y * g_r;
    let (p, q) = if leftover_xr >= leftover_yr {
        (x, y)
    } else {
        (y, x)
    };

    let mut g: [BigUint; 3] = Default::default();
    g[r.index()] = g_r.clone();
    g[x.index()] = g_x;
    g[y.index()] = g_y;
    CandidateParams::new(g, p, q)
}

/// [`determinize_params`] plus validity: errors when a core size exceeds
/// its vertex budget or the core overshoots an edge budget.
pub fn determinize(fv: &FlagVector, r: Color, g_r: &BigUint) -> Result<CandidateParams, Undefined> {
    let params = determinize_params(fv, r, g_r);
    match check_params(fv, &params) {
        None => Ok(params),
        Some(reason) => Err(Undefined { params, reason }),
    }
}

/// The at-most-two values `g_r` can take when `g_i = b_i` is known and
/// `b_i ≥ b_r`: `⌈f_ir/(b_i+1)⌉` and `⌊f_ir/b_i⌋`, deduplicated; empty
/// when the ceiling exceeds the floor (no candidate exists for the case)
/// or when `b_i = 0`.
pub fn bibr_candidates(fv: &FlagVector, i: Color, r: Color, b_i: &BigUint) -> Vec<BigUint> {
    assert_ne!(i, r);
    if b_i.is_zero() {
        return Vec::new();
    }
    let f_ir = fv.edge(ColorPair::of(i, r));
    let lo = div_ceil(f_ir, &(b_i + BigUint::one()));
    let hi = f_ir / b_i;
    if lo > hi {
        Vec::new()
    } else if lo == hi {
        vec![lo]
    } else {
        vec![lo, hi]
    }
}

/// Feasible values of the middle core size `g2` when `g1 = b1` and the
/// extra vertices go to colors 1 and 3. Requires the canonical edge order
/// `f12 ≤ f13 ≤ f23` and `b1 ≥ 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum G2Range {
    Empty,
    /// `f1 = b1` forces a single value.
    Fixed(BigUint),
    /// Inclusive bounds.
    Interval(BigUint, BigUint),
}

impl G2Range {
    /// Inclusive `(lo, hi)` view; `Fixed(v)` is `(v, v)`.
    pub fn bounds(&self) -> Option<(BigUint, BigUint)> {
        match self {
            G2Range::Empty => None,
            G2Range::Fixed(v) => Some((v.clone(), v.clone())),
            G2Range::Interval(lo, hi) => Some((lo.clone(), hi.clone())),
        }
    }
}

pub fn b1g2_range(fv: &FlagVector, b1: &BigUint) -> G2Range {
    assert!(!b1.is_zero(), "b1g2_range requires b1 >= 1");
    let f1 = fv.vertex(Color::C1);
    let f2 = fv.vertex(Color::C2);
    let f3 = fv.vertex(Color::C3);
    let f12 = fv.edge(ColorPair::E12);
    let f13 = fv.edge(ColorPair::E13);
    let f23 = fv.edge(ColorPair::E23);

    if f1 < b1 {
        return G2Range::Empty;
    }
    if f1 == b1 {
        let q = f12 / f1;
        return if &q * f1 == *f12 {
            G2Range::Fixed(q)
        } else {
            G2Range::Empty
        };
    }
    // f1 > b1: all remaining edges of the 13 pair must fit on f3 columns.
    if *f13 > f3 * (b1 + BigUint::one()) {
        return G2Range::Empty;
    }
    let b1p1 = b1 + BigUint::one();
    let lo = [
        div_ceil(f12, f1),
        div_ceil(f12, &b1p1),
        div_ceil(f23, &(f13 / b1 + BigUint::one())),
        div_ceil(f23, f3),
    ]
    .into_iter()
    .max()
    .expect("four candidates");

    let mut hi = (f12 / b1).min(f2.clone());
    let denom = div_ceil(f13, &b1p1);
    if denom > BigUint::one() {
        // Vacuous when the denominator would be ≤ 0.
        hi = hi.min(f23 / (denom - BigUint::one()));
    }

    if lo > hi {
        G2Range::Empty
    } else {
        G2Range::Interval(lo, hi)
    }
}

/// The quadratic-style facet bound as a function of the middle core size:
/// `v(t) = b1·f23 + (f12 − b1·t)·(f13 − b1·f23/t)`, exact.
///
/// Panics unless `t > 0`.
pub fn v_bound(fv: &FlagVector, b1: &BigUint, t: &BigRational) -> BigRational {
    assert!(t.is_positive(), "v_bound requires t > 0");
    let b1 = to_ratio(b1);
    let f12 = to_ratio(fv.edge(ColorPair::E12));
    let f13 = to_ratio(fv.edge(ColorPair::E13));
    let f23 = to_ratio(fv.edge(ColorPair::E23));
    &b1 * &f23 + (f12 - &b1 * t) * (f13 - &b1 * &f23 / t)
}

/// [`v_bound`] at an integer argument.
pub fn v_bound_at(fv: &FlagVector, b1: &BigUint, t: &BigUint) -> BigRational {
    v_bound(fv, b1, &to_ratio(t))
}
