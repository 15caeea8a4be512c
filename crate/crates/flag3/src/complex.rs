//! Concrete 3-colored complexes encoded as three staircase bipartite
//! graphs, with exact facet counting and budget verification.
//!
//! A staircase graph stores, for each "row" vertex, how many of the
//! earliest "column" vertices it is adjacent to. Facets are implicit:
//! every triple whose three edges are present is a facet, so a complex
//! with 10^15 facets is still a few machine words. Row sequences are kept
//! run-length encoded; every operation works on runs.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::flagvec::{
    uint_from_json, uint_to_json, uint_to_json_string, Color, ColorPair, ColorPermutation,
    FlagVector,
};

/// A bipartite adjacency between the vertices of two colors, stored as
/// run-length encoded row counts in row order.
///
/// `runs[k] = (value, count)` means the next `count` row vertices are each
/// adjacent to the first `value` column vertices. Zero-valued trailing
/// runs are trimmed; interior zero runs are kept so that row indices stay
/// aligned with the other staircases of the same row color.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StaircaseGraph {
    runs: Vec<(BigUint, BigUint)>,
    row_cap: BigUint,
    col_cap: BigUint,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ComplexError {
    #[error("row count exceeds the row vertex budget")]
    RowCapExceeded,
    #[error("a row value exceeds the column vertex budget")]
    ColCapExceeded,
    #[error("run counts must be positive")]
    EmptyRun,
    #[error("witness JSON is malformed: {0}")]
    BadWitness(String),
}

impl StaircaseGraph {
    pub fn empty(row_cap: BigUint, col_cap: BigUint) -> Self {
        StaircaseGraph {
            runs: Vec::new(),
            row_cap,
            col_cap,
        }
    }

    /// Builds from explicit row counts. Order is preserved; monotonicity
    /// is not required here, so shiftedness stays a checkable property.
    pub fn from_rows<I>(rows: I, row_cap: BigUint, col_cap: BigUint) -> Result<Self, ComplexError>
    where
        I: IntoIterator<Item = BigUint>,
    {
        let runs = rows.into_iter().map(|v| (v, BigUint::one())).collect();
        Self::from_runs(runs, row_cap, col_cap)
    }

    /// Builds from run-length encoded rows, merging adjacent runs of
    /// equal value so equal staircases compare equal.
    pub fn from_runs(
        runs: Vec<(BigUint, BigUint)>,
        row_cap: BigUint,
        col_cap: BigUint,
    ) -> Result<Self, ComplexError> {
        if runs.iter().any(|(_, c)| c.is_zero()) {
            return Err(ComplexError::EmptyRun);
        }
        let mut merged: Vec<(BigUint, BigUint)> = Vec::with_capacity(runs.len());
        for (v, c) in runs {
            match merged.last_mut() {
                Some((mv, mc)) if *mv == v => *mc += c,
                _ => merged.push((v, c)),
            }
        }
        while merged.last().is_some_and(|(v, _)| v.is_zero()) {
            merged.pop();
        }
        let graph = StaircaseGraph {
            runs: merged,
            row_cap,
            col_cap,
        };
        if graph.rows_used() > graph.row_cap {
            return Err(ComplexError::RowCapExceeded);
        }
        if graph.max_value() > graph.col_cap {
            return Err(ComplexError::ColCapExceeded);
        }
        Ok(graph)
    }

    pub fn runs(&self) -> &[(BigUint, BigUint)] {
        &self.runs
    }

    pub fn row_cap(&self) -> &BigUint {
        &self.row_cap
    }

    pub fn col_cap(&self) -> &BigUint {
        &self.col_cap
    }

    /// Number of row vertices contained in at least one edge (trailing
    /// zero rows excluded).
    pub fn rows_used(&self) -> BigUint {
        self.runs.iter().map(|(_, c)| c).sum()
    }

    /// Largest row value, i.e. the number of column vertices contained in
    /// at least one edge.
    pub fn max_value(&self) -> BigUint {
        self.runs
            .iter()
            .map(|(v, _)| v.clone())
            .max()
            .unwrap_or_default()
    }

    /// Total number of edges.
    pub fn edge_count(&self) -> BigUint {
        self.runs.iter().map(|(v, c)| v * c).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    /// True iff the row sequence is weakly decreasing.
    pub fn is_weakly_decreasing(&self) -> bool {
        self.runs.windows(2).all(|w| w[0].0 >= w[1].0)
    }

    /// The conjugate staircase: rows and columns exchanged. Requires a
    /// weakly decreasing row sequence.
    pub fn transpose(&self) -> StaircaseGraph {
        assert!(
            self.is_weakly_decreasing(),
            "transpose requires a staircase shape"
        );
        // Conjugate row j counts the rows here with value ≥ j, so the band
        // of conjugate rows with index in (v_{k+1}, v_k] all have value
        // c_1 + … + c_k.
        let mut conj: Vec<(BigUint, BigUint)> = Vec::new();
        let mut cum = BigUint::zero();
        for (k, (v, c)) in self.runs.iter().enumerate() {
            cum += c;
            let next_value = self
                .runs
                .get(k + 1)
                .map(|(nv, _)| nv.clone())
                .unwrap_or_default();
            if *v > next_value {
                conj.push((cum.clone(), v - &next_value));
            }
        }
        conj.reverse();
        StaircaseGraph {
            runs: conj,
            row_cap: self.col_cap.clone(),
            col_cap: self.row_cap.clone(),
        }
    }

    /// `Σ_{j ≤ min(a, rows)} min(b, row_j)`: how many facets a row with
    /// `a` edges here and `b` edges in the other staircase of the same row
    /// color generates, given this graph is the opposite-pair staircase.
    fn clamped_prefix_sum(&self, a: &BigUint, b: &BigUint) -> BigUint {
        let mut remaining = a.clone();
        let mut total = BigUint::zero();
        for (v, c) in &self.runs {
            if remaining.is_zero() {
                break;
            }
            let take = remaining.clone().min(c.clone());
            total += &take * v.min(b);
            remaining -= take;
        }
        total
    }

    /// Explicit row list; only sensible for small graphs.
    pub fn to_rows_vec(&self) -> Option<Vec<BigUint>> {
        let mut rows = Vec::new();
        for (v, c) in &self.runs {
            let c = u64::try_from(c).ok()?;
            if rows.len() as u64 + c > 1_000_000 {
                return None;
            }
            rows.extend(std::iter::repeat_n(v.clone(), c as usize));
        }
        Some(rows)
    }
}

/// A color-shifted 3-colored complex: three staircases over shared vertex
/// budgets. Row colors are 1, 1, 2 for the 12-, 13-, 23-staircases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriComplex {
    e12: StaircaseGraph,
    e13: StaircaseGraph,
    e23: StaircaseGraph,
    n: [BigUint; 3],
}

impl TriComplex {
    pub fn new(
        n: [BigUint; 3],
        e12: StaircaseGraph,
        e13: StaircaseGraph,
        e23: StaircaseGraph,
    ) -> Result<Self, ComplexError> {
        let caps_ok = *e12.row_cap() == n[0]
            && *e12.col_cap() == n[1]
            && *e13.row_cap() == n[0]
            && *e13.col_cap() == n[2]
            && *e23.row_cap() == n[1]
            && *e23.col_cap() == n[2];
        if !caps_ok {
            return Err(ComplexError::BadWitness(
                "staircase caps disagree with vertex budgets".to_string(),
            ));
        }
        Ok(TriComplex { e12, e13, e23, n })
    }

    /// Builds from explicit row lists, mostly for tests and the oracle.
    pub fn from_rows_u64(
        n: [u64; 3],
        rows12: &[u64],
        rows13: &[u64],
        rows23: &[u64],
    ) -> Result<Self, ComplexError> {
        let n = n.map(BigUint::from);
        let big = |rows: &[u64]| rows.iter().map(|&v| BigUint::from(v)).collect::<Vec<_>>();
        TriComplex::new(
            n.clone(),
            StaircaseGraph::from_rows(big(rows12), n[0].clone(), n[1].clone())?,
            StaircaseGraph::from_rows(big(rows13), n[0].clone(), n[2].clone())?,
            StaircaseGraph::from_rows(big(rows23), n[1].clone(), n[2].clone())?,
        )
    }

    /// The complete tripartite complex on core sizes `g`, under vertex
    /// budgets `n`.
    pub fn complete(n: [BigUint; 3], g: [BigUint; 3]) -> Result<Self, ComplexError> {
        let run = |rows: &BigUint, cols: &BigUint| {
            if rows.is_zero() || cols.is_zero() {
                Vec::new()
            } else {
                vec![(cols.clone(), rows.clone())]
            }
        };
        TriComplex::new(
            n.clone(),
            StaircaseGraph::from_runs(run(&g[0], &g[1]), n[0].clone(), n[1].clone())?,
            StaircaseGraph::from_runs(run(&g[0], &g[2]), n[0].clone(), n[2].clone())?,
            StaircaseGraph::from_runs(run(&g[1], &g[2]), n[1].clone(), n[2].clone())?,
        )
    }

    pub fn empty() -> Self {
        let z = BigUint::zero;
        TriComplex {
            e12: StaircaseGraph::empty(z(), z()),
            e13: StaircaseGraph::empty(z(), z()),
            e23: StaircaseGraph::empty(z(), z()),
            n: [z(), z(), z()],
        }
    }

    pub fn graph(&self, pair: ColorPair) -> &StaircaseGraph {
        match pair {
            ColorPair::E12 => &self.e12,
            ColorPair::E13 => &self.e13,
            ColorPair::E23 => &self.e23,
        }
    }

    pub fn vertex_budgets(&self) -> &[BigUint; 3] {
        &self.n
    }

    /// Number of vertices of color `c` contained in at least one edge.
    pub fn vertices_used(&self, c: Color) -> BigUint {
        match c {
            Color::C1 => self.e12.rows_used().max(self.e13.rows_used()),
            Color::C2 => self.e12.max_value().max(self.e23.rows_used()),
            Color::C3 => self.e13.max_value().max(self.e23.max_value()),
        }
    }

    /// The three edge counts `(e12, e13, e23)`.
    pub fn edge_counts(&self) -> [BigUint; 3] {
        [
            self.e12.edge_count(),
            self.e13.edge_count(),
            self.e23.edge_count(),
        ]
    }

    /// Exact facet count: over every 12-edge `(i, j)`, the number of
    /// color-3 vertices adjacent to both `i` and `j`, which is
    /// `min(rows13[i], rows23[j])` by the prefix structure.
    pub fn facet_count(&self) -> BigUint {
        let mut total = BigUint::zero();
        // Two-pointer merge of the 12- and 13-row sequences over color 1.
        let r12 = self.e12.runs();
        let r13 = self.e13.runs();
        let mut i = 0;
        let mut j = 0;
        let mut rem12 = r12.first().map(|(_, c)| c.clone()).unwrap_or_default();
        let mut rem13 = r13.first().map(|(_, c)| c.clone()).unwrap_or_default();
        while i < r12.len() {
            let a = &r12[i].0;
            let (b, seg) = if j < r13.len() {
                (Some(&r13[j].0), rem12.clone().min(rem13.clone()))
            } else {
                // Color-1 vertices with 12-edges but no 13-edges generate
                // no facets.
                (None, rem12.clone())
            };
            if let Some(b) = b {
                if !a.is_zero() && !b.is_zero() {
                    total += &seg * self.e23.clamped_prefix_sum(a, b);
                }
            }
            rem12 -= &seg;
            if rem12.is_zero() {
                i += 1;
                if i < r12.len() {
                    rem12 = r12[i].1.clone();
                }
            }
            if j < r13.len() {
                rem13 -= &seg;
                if rem13.is_zero() {
                    j += 1;
                    if j < r13.len() {
                        rem13 = r13[j].1.clone();
                    }
                }
            }
        }
        total
    }

    /// True iff all three row sequences are weakly decreasing, which for
    /// implicit-facet complexes is the testable color-shiftedness
    /// criterion.
    pub fn is_color_shifted(&self) -> bool {
        self.e12.is_weakly_decreasing()
            && self.e13.is_weakly_decreasing()
            && self.e23.is_weakly_decreasing()
    }

    /// True iff vertices used and all three edge counts fit inside `fv`.
    pub fn within_budget(&self, fv: &FlagVector) -> bool {
        Color::ALL
            .iter()
            .all(|&c| self.vertices_used(c) <= *fv.vertex(c))
            && ColorPair::ALL
                .iter()
                .all(|&p| self.graph(p).edge_count() <= *fv.edge(p))
    }

    /// Relabels colors: color `c` becomes `perm(c)`.
    pub fn permuted(&self, perm: &ColorPermutation) -> TriComplex {
        let inv = perm.inverse();
        let mut n = self.n.clone();
        for c in Color::ALL {
            n[perm.apply(c).index()] = self.n[c.index()].clone();
        }
        let pick = |new_pair: ColorPair| -> StaircaseGraph {
            let (na, nb) = new_pair.endpoints();
            let (oa, ob) = (inv.apply(na), inv.apply(nb));
            let source = self.graph(ColorPair::of(oa, ob));
            // Row color of the source is min(oa, ob); the new graph needs
            // rows over the preimage of the smaller new color.
            if oa < ob {
                source.clone()
            } else {
                source.transpose()
            }
        };
        TriComplex {
            e12: pick(ColorPair::E12),
            e13: pick(ColorPair::E13),
            e23: pick(ColorPair::E23),
            n,
        }
    }
}

/// How large a row list or an explicit edge list may get before the JSON
/// writer switches to (or refuses) the expanded form.
pub const DEFAULT_SERIALIZATION_CAP: u64 = 100_000;

impl TriComplex {
    fn rows_to_json(g: &StaircaseGraph, cap: u64) -> Value {
        if g.rows_used() <= BigUint::from(cap) {
            if let Some(rows) = g.to_rows_vec() {
                return Value::Array(rows.iter().map(uint_to_json).collect());
            }
        }
        json!({
            "runs": g
                .runs()
                .iter()
                .map(|(v, c)| json!([uint_to_json(v), uint_to_json(c)]))
                .collect::<Vec<_>>()
        })
    }

    fn edges_to_json(g: &StaircaseGraph) -> Value {
        let mut pairs = Vec::new();
        let mut row = 0u64;
        for (v, c) in g.runs() {
            let v = u64::try_from(v).expect("edge list within cap");
            let c = u64::try_from(c).expect("edge list within cap");
            for _ in 0..c {
                row += 1;
                for col in 1..=v {
                    pairs.push(json!([row, col]));
                }
            }
        }
        Value::Array(pairs)
    }

    /// Witness JSON: vertex budgets, the three row sequences, and the
    /// facet count as a decimal string. With `edge_cap` set, explicit edge
    /// pairs are included for each staircase whose edge count fits the
    /// cap; row sequences longer than the cap are emitted run-length
    /// encoded.
    pub fn to_json(&self, edge_cap: Option<u64>) -> Value {
        let cap = edge_cap.unwrap_or(DEFAULT_SERIALIZATION_CAP);
        let mut obj = serde_json::Map::new();
        obj.insert(
            "n".into(),
            Value::Array(self.n.iter().map(uint_to_json).collect()),
        );
        obj.insert("rows12".into(), Self::rows_to_json(&self.e12, cap));
        obj.insert("rows13".into(), Self::rows_to_json(&self.e13, cap));
        obj.insert("rows23".into(), Self::rows_to_json(&self.e23, cap));
        obj.insert("facets".into(), uint_to_json_string(&self.facet_count()));
        if edge_cap.is_some() {
            let graphs = [
                ("edges12", &self.e12),
                ("edges13", &self.e13),
                ("edges23", &self.e23),
            ];
            // All or nothing: expand only when every edge count fits.
            if graphs
                .iter()
                .all(|(_, g)| g.edge_count() <= BigUint::from(cap))
            {
                for (key, g) in graphs {
                    obj.insert(key.into(), Self::edges_to_json(g));
                }
            }
        }
        Value::Object(obj)
    }

    fn rows_from_json(
        v: &Value,
        row_cap: BigUint,
        col_cap: BigUint,
    ) -> Result<StaircaseGraph, ComplexError> {
        let bad = |msg: &str| ComplexError::BadWitness(msg.to_string());
        if let Some(arr) = v.as_array() {
            let rows = arr
                .iter()
                .map(|e| uint_from_json("rows", e).map_err(|e| bad(&e.to_string())))
                .collect::<Result<Vec<_>, _>>()?;
            return StaircaseGraph::from_rows(rows, row_cap, col_cap);
        }
        if let Some(runs) = v.get("runs").and_then(Value::as_array) {
            let runs = runs
                .iter()
                .map(|e| {
                    let pair = e
                        .as_array()
                        .filter(|a| a.len() == 2)
                        .ok_or_else(|| bad("each run must be a [value, count] pair"))?;
                    Ok((
                        uint_from_json("run value", &pair[0]).map_err(|e| bad(&e.to_string()))?,
                        uint_from_json("run count", &pair[1]).map_err(|e| bad(&e.to_string()))?,
                    ))
                })
                .collect::<Result<Vec<_>, ComplexError>>()?;
            return StaircaseGraph::from_runs(runs, row_cap, col_cap);
        }
        Err(bad("rows must be an array or a {\"runs\": ...} object"))
    }

    /// Parses the witness JSON form produced by [`TriComplex::to_json`].
    pub fn from_json(v: &Value) -> Result<TriComplex, ComplexError> {
        let bad = |msg: &str| ComplexError::BadWitness(msg.to_string());
        let n_arr = v
            .get("n")
            .and_then(Value::as_array)
            .filter(|a| a.len() == 3)
            .ok_or_else(|| bad("missing three-element \"n\""))?;
        let mut n: [BigUint; 3] = Default::default();
        for (i, e) in n_arr.iter().enumerate() {
            n[i] = uint_from_json("n", e).map_err(|e| bad(&e.to_string()))?;
        }
        let rows12 = v.get("rows12").ok_or_else(|| bad("missing rows12"))?;
        let rows13 = v.get("rows13").ok_or_else(|| bad("missing rows13"))?;
        let rows23 = v.get("rows23").ok_or_else(|| bad("missing rows23"))?;
        TriComplex::new(
            n.clone(),
            Self::rows_from_json(rows12, n[0].clone(), n[1].clone())?,
            Self::rows_from_json(rows13, n[0].clone(), n[2].clone())?,
            Self::rows_from_json(rows23, n[1].clone(), n[2].clone())?,
        )
    }
}
