//! Flag f-vector data model: budgets per color and per color pair, the
//! f↔h transforms, elementary upper bounds, and color relabeling.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::arith::{floor_sqrt, to_int};

/// One of the three vertex colors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Color {
    C1,
    C2,
    C3,
}

impl Color {
    pub const ALL: [Color; 3] = [Color::C1, Color::C2, Color::C3];

    pub fn index(self) -> usize {
        self as usize
    }

    /// 1-based color number, as used in reports and JSON.
    pub fn number(self) -> u8 {
        self as u8 + 1
    }

    pub fn from_number(n: u8) -> Option<Color> {
        match n {
            1 => Some(Color::C1),
            2 => Some(Color::C2),
            3 => Some(Color::C3),
            _ => None,
        }
    }

    pub fn from_index(i: usize) -> Option<Color> {
        Self::from_number(i as u8 + 1)
    }

    /// The two colors other than `self`, in increasing order.
    pub fn others(self) -> [Color; 2] {
        match self {
            Color::C1 => [Color::C2, Color::C3],
            Color::C2 => [Color::C1, Color::C3],
            Color::C3 => [Color::C1, Color::C2],
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

/// An unordered pair of distinct colors, i.e. one of the three edge color
/// sets 12, 13, 23.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ColorPair {
    E12,
    E13,
    E23,
}

impl ColorPair {
    pub const ALL: [ColorPair; 3] = [ColorPair::E12, ColorPair::E13, ColorPair::E23];

    pub fn index(self) -> usize {
        self as usize
    }

    /// The two member colors, smaller first.
    pub fn endpoints(self) -> (Color, Color) {
        match self {
            ColorPair::E12 => (Color::C1, Color::C2),
            ColorPair::E13 => (Color::C1, Color::C3),
            ColorPair::E23 => (Color::C2, Color::C3),
        }
    }

    /// The color not in the pair.
    pub fn missing(self) -> Color {
        match self {
            ColorPair::E12 => Color::C3,
            ColorPair::E13 => Color::C2,
            ColorPair::E23 => Color::C1,
        }
    }

    /// The pair containing both given colors. Panics if they are equal.
    pub fn of(a: Color, b: Color) -> ColorPair {
        match (a.min(b), a.max(b)) {
            (Color::C1, Color::C2) => ColorPair::E12,
            (Color::C1, Color::C3) => ColorPair::E13,
            (Color::C2, Color::C3) => ColorPair::E23,
            _ => panic!("ColorPair::of: colors must be distinct"),
        }
    }

    /// The pair not containing `c`.
    pub fn opposite(c: Color) -> ColorPair {
        match c {
            Color::C1 => ColorPair::E23,
            Color::C2 => ColorPair::E13,
            Color::C3 => ColorPair::E12,
        }
    }

    pub fn contains(self, c: Color) -> bool {
        let (a, b) = self.endpoints();
        a == c || b == c
    }

    /// Given a member color, the other member.
    pub fn other(self, c: Color) -> Color {
        let (a, b) = self.endpoints();
        if a == c {
            b
        } else {
            debug_assert_eq!(b, c);
            a
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ColorPair::E12 => "12",
            ColorPair::E13 => "13",
            ColorPair::E23 => "23",
        }
    }
}

impl fmt::Display for ColorPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// A bijection on the three colors. `apply(c)` is the image of `c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ColorPermutation {
    image: [Color; 3],
}

impl ColorPermutation {
    pub fn identity() -> Self {
        ColorPermutation { image: Color::ALL }
    }

    /// Builds a permutation from images of colors 1, 2, 3. Returns `None`
    /// unless the images form a bijection.
    pub fn new(image: [Color; 3]) -> Option<Self> {
        let mut seen = [false; 3];
        for c in image {
            if seen[c.index()] {
                return None;
            }
            seen[c.index()] = true;
        }
        Some(ColorPermutation { image })
    }

    /// All six permutations, in lexicographic order of the image tuple.
    pub fn all() -> [ColorPermutation; 6] {
        use Color::*;
        [
            ColorPermutation {
                image: [C1, C2, C3],
            },
            ColorPermutation {
                image: [C1, C3, C2],
            },
            ColorPermutation {
                image: [C2, C1, C3],
            },
            ColorPermutation {
                image: [C2, C3, C1],
            },
            ColorPermutation {
                image: [C3, C1, C2],
            },
            ColorPermutation {
                image: [C3, C2, C1],
            },
        ]
    }

    pub fn apply(&self, c: Color) -> Color {
        self.image[c.index()]
    }

    pub fn apply_pair(&self, p: ColorPair) -> ColorPair {
        let (a, b) = p.endpoints();
        ColorPair::of(self.apply(a), self.apply(b))
    }

    pub fn inverse(&self) -> ColorPermutation {
        let mut image = Color::ALL;
        for c in Color::ALL {
            image[self.apply(c).index()] = c;
        }
        ColorPermutation { image }
    }

    /// `self` after `other`: `(self ∘ other)(c) = self(other(c))`.
    pub fn compose(&self, other: &ColorPermutation) -> ColorPermutation {
        let mut image = Color::ALL;
        for c in Color::ALL {
            image[c.index()] = self.apply(other.apply(c));
        }
        ColorPermutation { image }
    }

    pub fn is_identity(&self) -> bool {
        self.image == Color::ALL
    }

    /// Number of colors moved by the permutation.
    pub fn moved_count(&self) -> usize {
        Color::ALL.iter().filter(|&&c| self.apply(c) != c).count()
    }

    /// Image tuple as 1-based numbers, `[π(1), π(2), π(3)]`.
    pub fn image_numbers(&self) -> [u8; 3] {
        [
            self.image[0].number(),
            self.image[1].number(),
            self.image[2].number(),
        ]
    }
}

impl fmt::Display for ColorPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.image_numbers();
        write!(f, "[{a},{b},{c}]")
    }
}

/// The six budgets of a prospective flag f-vector, plus an optional
/// proposed facet count. The empty-set entry is fixed at 1 and not stored.
///
/// All entries are exact nonnegative integers of unbounded magnitude.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagVector {
    vertices: [BigUint; 3],
    edges: [BigUint; 3],
    facets: Option<BigUint>,
}

impl FlagVector {
    pub fn new(vertices: [BigUint; 3], edges: [BigUint; 3]) -> Self {
        FlagVector {
            vertices,
            edges,
            facets: None,
        }
    }

    /// Convenience constructor from machine integers, mostly for tests.
    pub fn from_u64(vertices: [u64; 3], edges: [u64; 3]) -> Self {
        FlagVector::new(vertices.map(BigUint::from), edges.map(BigUint::from))
    }

    pub fn with_facets(mut self, f123: BigUint) -> Self {
        self.facets = Some(f123);
        self
    }

    pub fn vertex(&self, c: Color) -> &BigUint {
        &self.vertices[c.index()]
    }

    pub fn edge(&self, p: ColorPair) -> &BigUint {
        &self.edges[p.index()]
    }

    pub fn vertices(&self) -> &[BigUint; 3] {
        &self.vertices
    }

    pub fn edges(&self) -> &[BigUint; 3] {
        &self.edges
    }

    pub fn facets(&self) -> Option<&BigUint> {
        self.facets.as_ref()
    }

    /// The fixed empty-set entry.
    pub fn f_empty(&self) -> BigUint {
        BigUint::one()
    }

    pub fn any_budget_zero(&self) -> bool {
        self.vertices
            .iter()
            .chain(self.edges.iter())
            .any(|v| v.is_zero())
    }

    pub fn is_all_zero(&self) -> bool {
        self.vertices
            .iter()
            .chain(self.edges.iter())
            .all(|v| v.is_zero())
    }

    /// Relabels colors by `perm`: color `c` of `self` becomes color
    /// `perm(c)` of the result.
    pub fn permuted(&self, perm: &ColorPermutation) -> FlagVector {
        let mut vertices = self.vertices.clone();
        let mut edges = self.edges.clone();
        for c in Color::ALL {
            vertices[perm.apply(c).index()] = self.vertex(c).clone();
        }
        for p in ColorPair::ALL {
            edges[perm.apply_pair(p).index()] = self.edge(p).clone();
        }
        FlagVector {
            vertices,
            edges,
            facets: self.facets.clone(),
        }
    }

    /// All eight entries indexed by color-subset mask (bit `i` set means
    /// color `i+1` in the subset). Requires the facet entry.
    pub fn to_subset_counts(&self) -> Result<[BigInt; 8], FlagVectorError> {
        let f123 = self.facets.as_ref().ok_or(FlagVectorError::MissingFacets)?;
        Ok([
            BigInt::one(),
            to_int(self.vertex(Color::C1)),
            to_int(self.vertex(Color::C2)),
            to_int(self.edge(ColorPair::E12)),
            to_int(self.vertex(Color::C3)),
            to_int(self.edge(ColorPair::E13)),
            to_int(self.edge(ColorPair::E23)),
            to_int(f123),
        ])
    }
}

impl fmt::Display for FlagVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{},{}; {},{},{}",
            self.vertices[0],
            self.vertices[1],
            self.vertices[2],
            self.edges[0],
            self.edges[1],
            self.edges[2]
        )?;
        if let Some(f123) = &self.facets {
            write!(f, "; {f123}")?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FlagVectorError {
    #[error("facet entry f123 is required but missing")]
    MissingFacets,
    #[error("entry {key} is {found}, expected a nonnegative integer (number or decimal string)")]
    BadEntry { key: String, found: String },
    #[error("input must be a JSON object with keys f1,f2,f3,f12,f13,f23")]
    NotAnObject,
    #[error("f_empty must be 1 when present")]
    BadEmptyEntry,
}

/// The flag h-vector: signed entries indexed by color-subset mask.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HVector {
    pub entries: [BigInt; 8],
}

impl HVector {
    pub fn get(&self, mask: usize) -> &BigInt {
        &self.entries[mask]
    }
}

/// Inclusion–exclusion transform: `h_S = Σ_{T⊆S} (−1)^{|S|−|T|} f_T`.
pub fn f_to_h(f: &[BigInt; 8]) -> HVector {
    let mut entries: [BigInt; 8] = Default::default();
    for (s, entry) in entries.iter_mut().enumerate() {
        let mut acc = BigInt::zero();
        let mut t = s;
        loop {
            let sign_flips = (s.count_ones() - t.count_ones()) % 2 == 1;
            if sign_flips {
                acc -= &f[t];
            } else {
                acc += &f[t];
            }
            if t == 0 {
                break;
            }
            t = (t - 1) & s;
        }
        *entry = acc;
    }
    HVector { entries }
}

/// Inverse transform: `f_S = Σ_{T⊆S} h_T`.
pub fn h_to_f(h: &HVector) -> [BigInt; 8] {
    let mut f: [BigInt; 8] = Default::default();
    for (s, entry) in f.iter_mut().enumerate() {
        let mut acc = BigInt::zero();
        let mut t = s;
        loop {
            acc += &h.entries[t];
            if t == 0 {
                break;
            }
            t = (t - 1) & s;
        }
        *entry = acc;
    }
    f
}

/// Result of the elementary product checks on the six budgets.
#[derive(Clone, Debug)]
pub struct ValidationReport {
    /// For each pair: the vertex product, the edge budget, and whether
    /// product ≥ budget.
    pub pair_checks: [PairCheck; 3],
    pub zero_vertices: [bool; 3],
    pub zero_edges: [bool; 3],
}

#[derive(Clone, Debug)]
pub struct PairCheck {
    pub pair: ColorPair,
    pub product: BigUint,
    pub budget: BigUint,
    pub ok: bool,
}

impl ValidationReport {
    /// True unless some edge budget exceeds its vertex product.
    pub fn is_feasible_so_far(&self) -> bool {
        self.pair_checks.iter().all(|c| c.ok)
    }

    pub fn is_all_zero(&self) -> bool {
        self.zero_vertices.iter().all(|&z| z) && self.zero_edges.iter().all(|&z| z)
    }

    /// Human-readable reasons for each failed product inequality, e.g.
    /// `"f12 > f1*f2"`.
    pub fn failures(&self) -> Vec<String> {
        self.pair_checks
            .iter()
            .filter(|c| !c.ok)
            .map(|c| {
                let (a, b) = c.pair.endpoints();
                format!("f{} > f{}*f{}", c.pair.label(), a.number(), b.number())
            })
            .collect()
    }
}

/// Checks the three product inequalities `f_i·f_j ≥ f_ij` and records zero
/// entries. Total: never fails.
pub fn validate(fv: &FlagVector) -> ValidationReport {
    let pair_checks = ColorPair::ALL.map(|p| {
        let (a, b) = p.endpoints();
        let product = fv.vertex(a) * fv.vertex(b);
        let budget = fv.edge(p).clone();
        let ok = product >= budget;
        PairCheck {
            pair: p,
            product,
            budget,
            ok,
        }
    });
    ValidationReport {
        pair_checks,
        zero_vertices: Color::ALL.map(|c| fv.vertex(c).is_zero()),
        zero_edges: ColorPair::ALL.map(|p| fv.edge(p).is_zero()),
    }
}

/// The four elementary upper bounds on the facet count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductBounds {
    /// `f_i · f_jk` for each color `i` with opposite pair `jk`.
    pub vertex_edge: [BigUint; 3],
    /// `⌊√(f12·f13·f23)⌋`, exact.
    pub geometric: BigUint,
}

impl ProductBounds {
    pub fn min_vertex_edge(&self) -> &BigUint {
        self.vertex_edge.iter().min().expect("three entries")
    }
}

/// Computes `f1·f23`, `f2·f13`, `f3·f12` and the exact floor of
/// `√(f12·f13·f23)`.
pub fn product_bounds(fv: &FlagVector) -> ProductBounds {
    let vertex_edge = Color::ALL.map(|c| fv.vertex(c) * fv.edge(ColorPair::opposite(c)));
    let product = fv.edge(ColorPair::E12) * fv.edge(ColorPair::E13) * fv.edge(ColorPair::E23);
    ProductBounds {
        vertex_edge,
        geometric: floor_sqrt(&product),
    }
}

/// Relabels colors so that `f12 ≤ f13 ≤ f23`, returning the relabeled
/// vector and the permutation from original to canonical colors.
///
/// Ties are broken toward the identity: among permutations achieving the
/// sorted order, the one moving fewest colors wins, then the
/// lexicographically smallest image tuple.
pub fn canonical_relabel(fv: &FlagVector) -> (FlagVector, ColorPermutation) {
    let mut best: Option<(FlagVector, ColorPermutation)> = None;
    for perm in ColorPermutation::all() {
        let candidate = fv.permuted(&perm);
        let sorted = candidate.edge(ColorPair::E12) <= candidate.edge(ColorPair::E13)
            && candidate.edge(ColorPair::E13) <= candidate.edge(ColorPair::E23);
        if !sorted {
            continue;
        }
        let better = match &best {
            None => true,
            Some((_, b)) => {
                (perm.moved_count(), perm.image_numbers()) < (b.moved_count(), b.image_numbers())
            }
        };
        if better {
            best = Some((candidate, perm));
        }
    }
    best.expect("some permutation always sorts the three edge budgets")
}

const JSON_NUMBER_MAX: u64 = 1 << 53;

/// Serializes a big integer as a JSON number when it fits in 53 bits,
/// otherwise as a decimal string.
pub fn uint_to_json(n: &BigUint) -> Value {
    match u64::try_from(n) {
        Ok(v) if v <= JSON_NUMBER_MAX => json!(v),
        _ => json!(n.to_string()),
    }
}

/// Always-string form, for fields documented as decimal strings.
pub fn uint_to_json_string(n: &BigUint) -> Value {
    json!(n.to_string())
}

pub fn int_to_json(n: &BigInt) -> Value {
    match i64::try_from(n) {
        Ok(v) if v.unsigned_abs() <= JSON_NUMBER_MAX => json!(v),
        _ => json!(n.to_string()),
    }
}

/// Parses a nonnegative integer from a JSON number or decimal string.
pub fn uint_from_json(key: &str, v: &Value) -> Result<BigUint, FlagVectorError> {
    let bad = || FlagVectorError::BadEntry {
        key: key.to_string(),
        found: v.to_string(),
    };
    match v {
        Value::Number(n) => n.as_u64().map(BigUint::from).ok_or_else(bad),
        Value::String(s) => s.trim().parse::<BigUint>().map_err(|_| bad()),
        _ => Err(bad()),
    }
}

pub fn int_from_json(key: &str, v: &Value) -> Result<BigInt, FlagVectorError> {
    let bad = || FlagVectorError::BadEntry {
        key: key.to_string(),
        found: v.to_string(),
    };
    match v {
        Value::Number(n) => n.as_i64().map(BigInt::from).ok_or_else(bad),
        Value::String(s) => s.trim().parse::<BigInt>().map_err(|_| bad()),
        _ => Err(bad()),
    }
}

impl FlagVector {
    /// Parses the JSON object form: keys `f1,f2,f3,f12,f13,f23`, optional
    /// `f123`, values as numbers or decimal strings.
    pub fn from_json(v: &Value) -> Result<FlagVector, FlagVectorError> {
        let obj = v.as_object().ok_or(FlagVectorError::NotAnObject)?;
        let get = |key: &str| -> Result<BigUint, FlagVectorError> {
            let entry = obj.get(key).ok_or_else(|| FlagVectorError::BadEntry {
                key: key.to_string(),
                found: "missing".to_string(),
            })?;
            uint_from_json(key, entry)
        };
        if let Some(e) = obj.get("f_empty") {
            if uint_from_json("f_empty", e)? != BigUint::one() {
                return Err(FlagVectorError::BadEmptyEntry);
            }
        }
        let mut fv = FlagVector::new(
            [get("f1")?, get("f2")?, get("f3")?],
            [get("f12")?, get("f13")?, get("f23")?],
        );
        if let Some(f123) = obj.get("f123") {
            fv.facets = Some(uint_from_json("f123", f123)?);
        }
        Ok(fv)
    }

    pub fn to_json(&self) -> Value {
        let mut obj = serde_json::Map::new();
        obj.insert("f1".into(), uint_to_json(self.vertex(Color::C1)));
        obj.insert("f2".into(), uint_to_json(self.vertex(Color::C2)));
        obj.insert("f3".into(), uint_to_json(self.vertex(Color::C3)));
        obj.insert("f12".into(), uint_to_json(self.edge(ColorPair::E12)));
        obj.insert("f13".into(), uint_to_json(self.edge(ColorPair::E13)));
        obj.insert("f23".into(), uint_to_json(self.edge(ColorPair::E23)));
        if let Some(f123) = &self.facets {
            obj.insert("f123".into(), uint_to_json(f123));
        }
        Value::Object(obj)
    }
}
