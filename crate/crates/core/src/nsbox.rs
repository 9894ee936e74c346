//! Bipartite boxes with binary inputs and outputs, the 24 vertices of the
//! no-signaling polytope, convex mixing, and no-signaling/locality tests.
//!
//! Rows are indexed by the input pair `xy` and columns by the outcome pair
//! `ab`, both in lexicographic order `00, 01, 10, 11`.

use std::fmt;
use std::ops::{BitAnd, BitXor};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lp::{LinearProgram, LpOutcome};

/// Default tolerance for equality and positivity checks.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Rows of a constructed box must sum to one within this bound.
pub const ROW_SUM_TOL: f64 = 1e-12;

/// Rows of a box read from JSON may deviate from one by at most this much.
pub const PARSE_ROW_SUM_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Bit(u8);

impl Bit {
    pub const ZERO: Bit = Bit(0);
    pub const ONE: Bit = Bit(1);
    pub const ALL: [Bit; 2] = [Bit::ZERO, Bit::ONE];

    pub fn new(value: u8) -> Result<Self> {
        match value {
            0 | 1 => Ok(Bit(value)),
            v => Err(Error::InvalidBit(v)),
        }
    }

    pub fn value(self) -> u8 {
        self.0
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn flip(self) -> Bit {
        Bit(self.0 ^ 1)
    }
}

impl BitXor for Bit {
    type Output = Bit;
    fn bitxor(self, rhs: Bit) -> Bit {
        Bit(self.0 ^ rhs.0)
    }
}

impl BitAnd for Bit {
    type Output = Bit;
    fn bitand(self, rhs: Bit) -> Bit {
        Bit(self.0 & rhs.0)
    }
}

impl From<bool> for Bit {
    fn from(b: bool) -> Self {
        Bit(b as u8)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Party {
    Alice,
    Bob,
}

/// Position of `P(ab|xy)` in the 4×4 layout.
#[inline]
pub fn pair_index(first: Bit, second: Bit) -> usize {
    2 * first.index() + second.index()
}

/// Conditional probability table `P(ab|xy)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BipartiteBox {
    p: [[f64; 4]; 4],
}

impl BipartiteBox {
    /// Builds a box, checking finiteness, positivity (to `ROW_SUM_TOL`) and
    /// row normalization.
    pub fn new(p: [[f64; 4]; 4]) -> Result<Self> {
        validate_rows(&p, ROW_SUM_TOL)?;
        Ok(Self { p })
    }

    pub(crate) fn from_rows_unchecked(p: [[f64; 4]; 4]) -> Self {
        Self { p }
    }

    /// Every entry equal to ¼.
    pub fn uniform() -> Self {
        Self { p: [[0.25; 4]; 4] }
    }

    pub fn rows(&self) -> &[[f64; 4]; 4] {
        &self.p
    }

    pub fn row(&self, x: Bit, y: Bit) -> &[f64; 4] {
        &self.p[pair_index(x, y)]
    }

    /// `P(ab|xy)`.
    pub fn prob(&self, a: Bit, b: Bit, x: Bit, y: Bit) -> f64 {
        self.p[pair_index(x, y)][pair_index(a, b)]
    }

    /// Probability that `side` outputs 0 given its own input and the other
    /// party's input.
    pub fn marginal(&self, side: Party, input: Bit, conditioning_input: Bit) -> f64 {
        let (x, y) = match side {
            Party::Alice => (input, conditioning_input),
            Party::Bob => (conditioning_input, input),
        };
        let row = self.row(x, y);
        match side {
            Party::Alice => row[0] + row[1],
            Party::Bob => row[0] + row[2],
        }
    }

    /// Largest difference of a marginal across the other party's inputs.
    pub fn signaling_gap(&self) -> f64 {
        let mut gap: f64 = 0.0;
        for side in [Party::Alice, Party::Bob] {
            for input in Bit::ALL {
                let m0 = self.marginal(side, input, Bit::ZERO);
                let m1 = self.marginal(side, input, Bit::ONE);
                gap = gap.max((m0 - m1).abs());
            }
        }
        gap
    }

    pub fn is_no_signaling(&self, tol: f64) -> bool {
        self.signaling_gap() <= tol
    }

    /// Exchanges the roles of the two parties: `P'(ab|xy) = P(ba|yx)`.
    pub fn swap_parties(&self) -> Self {
        let mut q = [[0.0; 4]; 4];
        for x in Bit::ALL {
            for y in Bit::ALL {
                for a in Bit::ALL {
                    for b in Bit::ALL {
                        q[pair_index(x, y)][pair_index(a, b)] = self.prob(b, a, y, x);
                    }
                }
            }
        }
        Self { p: q }
    }

    /// Tests membership in the local polytope by solving a feasibility LP over
    /// the 16 local deterministic vertices. The box is accepted when some
    /// mixture reproduces it with total absolute residual at most `tol`.
    pub fn is_local(&self, tol: f64) -> Result<bool> {
        if !self.is_no_signaling(tol) {
            return Err(Error::Signaling(format!("marginals differ by {:.3e}", self.signaling_gap())));
        }
        let locals: Vec<BipartiteBox> = VertexId::locals().map(|v| v.to_box()).collect();
        let mut lp = LinearProgram::new(vec![0.0; locals.len()]);
        for r in 0..4 {
            for c in 0..4 {
                let row = locals.iter().map(|v| v.p[r][c]).collect();
                lp.equality(row, self.p[r][c]);
            }
        }
        lp.equality(vec![1.0; locals.len()], 1.0);
        Ok(matches!(lp.solve(tol)?, LpOutcome::Optimal { .. }))
    }

    pub fn max_abs_diff(&self, other: &BipartiteBox) -> f64 {
        self.p.iter().flatten().zip(other.p.iter().flatten()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    pub fn to_json(&self, label: Option<&str>) -> BoxJson {
        BoxJson { p: self.p, label: label.map(str::to_owned) }
    }

    /// Parses the JSON box format. Rows within `PARSE_ROW_SUM_TOL` of one are
    /// accepted and rescaled to unit sum.
    pub fn from_json_str(s: &str) -> Result<(Self, Option<String>)> {
        let parsed: BoxJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        parsed.into_box()
    }
}

fn validate_rows(p: &[[f64; 4]; 4], row_tol: f64) -> Result<()> {
    for (r, row) in p.iter().enumerate() {
        if let Some(v) = row.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidBox(format!("row {r} has non-finite entry {v}")));
        }
        if let Some(v) = row.iter().find(|&&v| v < -row_tol) {
            return Err(Error::InvalidBox(format!("row {r} has negative entry {v}")));
        }
        let sum: f64 = row.iter().sum();
        if (sum - 1.0).abs() > row_tol {
            return Err(Error::InvalidBox(format!("row {r} sums to {sum}")));
        }
    }
    Ok(())
}

/// On-disk box: `{"p": [[...4], ...4], "label": "..."}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxJson {
    pub p: [[f64; 4]; 4],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl BoxJson {
    pub fn into_box(self) -> Result<(BipartiteBox, Option<String>)> {
        validate_rows(&self.p, PARSE_ROW_SUM_TOL)?;
        let mut p = self.p;
        for row in p.iter_mut() {
            for v in row.iter_mut() {
                *v = v.max(0.0);
            }
            let sum: f64 = row.iter().sum();
            for v in row.iter_mut() {
                *v /= sum;
            }
        }
        Ok((BipartiteBox::new(p)?, self.label))
    }
}

/// Label of one of the 24 vertices of the no-signaling polytope.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexId {
    /// `a = αx ⊕ β`, `b = γy ⊕ δ`.
    LocalDeterministic { alpha: Bit, beta: Bit, gamma: Bit, delta: Bit },
    /// Uniform over `a ⊕ b = xy ⊕ αx ⊕ βy ⊕ γ`.
    ExtremalNonlocal { alpha: Bit, beta: Bit, gamma: Bit },
}

impl VertexId {
    pub fn local(alpha: u8, beta: u8, gamma: u8, delta: u8) -> Result<Self> {
        Ok(VertexId::LocalDeterministic {
            alpha: Bit::new(alpha)?,
            beta: Bit::new(beta)?,
            gamma: Bit::new(gamma)?,
            delta: Bit::new(delta)?,
        })
    }

    pub fn nonlocal(alpha: u8, beta: u8, gamma: u8) -> Result<Self> {
        Ok(VertexId::ExtremalNonlocal { alpha: Bit::new(alpha)?, beta: Bit::new(beta)?, gamma: Bit::new(gamma)? })
    }

    pub fn locals() -> impl Iterator<Item = VertexId> {
        (0u8..16).map(|k| VertexId::LocalDeterministic {
            alpha: Bit((k >> 3) & 1),
            beta: Bit((k >> 2) & 1),
            gamma: Bit((k >> 1) & 1),
            delta: Bit(k & 1),
        })
    }

    pub fn nonlocals() -> impl Iterator<Item = VertexId> {
        (0u8..8).map(|k| VertexId::ExtremalNonlocal {
            alpha: Bit((k >> 2) & 1),
            beta: Bit((k >> 1) & 1),
            gamma: Bit(k & 1),
        })
    }

    /// All 24 vertices, local ones first.
    pub fn all() -> impl Iterator<Item = VertexId> {
        Self::locals().chain(Self::nonlocals())
    }

    pub fn is_local(&self) -> bool {
        matches!(self, VertexId::LocalDeterministic { .. })
    }

    pub fn to_box(&self) -> BipartiteBox {
        match *self {
            VertexId::LocalDeterministic { alpha, beta, gamma, delta } => local_vertex(alpha, beta, gamma, delta),
            VertexId::ExtremalNonlocal { alpha, beta, gamma } => nonlocal_vertex(alpha, beta, gamma),
        }
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexId::LocalDeterministic { alpha, beta, gamma, delta } => {
                write!(f, "L{}{}{}{}", alpha.0, beta.0, gamma.0, delta.0)
            }
            VertexId::ExtremalNonlocal { alpha, beta, gamma } => {
                write!(f, "NL{}{}{}", alpha.0, beta.0, gamma.0)
            }
        }
    }
}

impl FromStr for VertexId {
    type Err = Error;

    /// Accepts `L` followed by four bits or `NL` followed by three.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad vertex label {s:?}, expected e.g. L0001 or NL001"));
        let (digits, local) = if let Some(rest) = s.strip_prefix("NL") {
            (rest, false)
        } else if let Some(rest) = s.strip_prefix('L') {
            (rest, true)
        } else {
            return Err(bad());
        };
        let bits: Vec<u8> = digits
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(bad()),
            })
            .collect::<Result<_>>()?;
        match (local, bits.as_slice()) {
            (true, &[a, b, g, d]) => VertexId::local(a, b, g, d),
            (false, &[a, b, g]) => VertexId::nonlocal(a, b, g),
            _ => Err(bad()),
        }
    }
}

impl Serialize for VertexId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for VertexId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Local deterministic vertex `a = αx ⊕ β`, `b = γy ⊕ δ`.
pub fn local_vertex(alpha: Bit, beta: Bit, gamma: Bit, delta: Bit) -> BipartiteBox {
    let mut p = [[0.0; 4]; 4];
    for x in Bit::ALL {
        for y in Bit::ALL {
            let a = (alpha & x) ^ beta;
            let b = (gamma & y) ^ delta;
            p[pair_index(x, y)][pair_index(a, b)] = 1.0;
        }
    }
    BipartiteBox::from_rows_unchecked(p)
}

/// Extremal nonlocal vertex: ½ on every `ab` with `a ⊕ b = xy ⊕ αx ⊕ βy ⊕ γ`.
pub fn nonlocal_vertex(alpha: Bit, beta: Bit, gamma: Bit) -> BipartiteBox {
    let mut p = [[0.0; 4]; 4];
    for x in Bit::ALL {
        for y in Bit::ALL {
            let parity = (x & y) ^ (alpha & x) ^ (beta & y) ^ gamma;
            for a in Bit::ALL {
                let b = a ^ parity;
                p[pair_index(x, y)][pair_index(a, b)] = 0.5;
            }
        }
    }
    BipartiteBox::from_rows_unchecked(p)
}

/// The PR box, `nonlocal_vertex(0, 0, 0)`.
pub fn pr_box() -> BipartiteBox {
    nonlocal_vertex(Bit::ZERO, Bit::ZERO, Bit::ZERO)
}

/// Weight tolerance for negativity and normalization of convex weights.
pub const WEIGHT_TOL: f64 = 1e-12;

/// Convex combination coefficients over polytope vertices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "WeightsJson", into = "WeightsJson")]
pub struct ConvexWeights {
    entries: Vec<(VertexId, f64)>,
}

impl ConvexWeights {
    pub fn new(entries: Vec<(VertexId, f64)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidWeights("no vertices given".into()));
        }
        for (i, (v, w)) in entries.iter().enumerate() {
            if !w.is_finite() || *w < -WEIGHT_TOL {
                return Err(Error::InvalidWeights(format!("weight {w} on {v}")));
            }
            if entries[..i].iter().any(|(u, _)| u == v) {
                return Err(Error::InvalidWeights(format!("duplicate vertex {v}")));
            }
        }
        let sum: f64 = entries.iter().map(|(_, w)| w).sum();
        if (sum - 1.0).abs() > WEIGHT_TOL {
            return Err(Error::InvalidWeights(format!("weights sum to {sum}")));
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[(VertexId, f64)] {
        &self.entries
    }
}

/// Entrywise convex combination of the weighted vertex boxes.
pub fn mix(weights: &ConvexWeights) -> BipartiteBox {
    let mut p = [[0.0; 4]; 4];
    for (v, w) in &weights.entries {
        let b = v.to_box();
        for (acc_row, row) in p.iter_mut().zip(b.rows()) {
            for (acc, e) in acc_row.iter_mut().zip(row) {
                *acc += w * e;
            }
        }
    }
    BipartiteBox::from_rows_unchecked(p)
}

#[derive(Serialize, Deserialize)]
struct WeightEntry {
    vertex: VertexId,
    weight: f64,
}

/// `{"weights": [{"vertex": "L0001", "weight": 0.5}, ...]}`
#[derive(Serialize, Deserialize)]
struct WeightsJson {
    weights: Vec<WeightEntry>,
}

impl TryFrom<WeightsJson> for ConvexWeights {
    type Error = Error;
    fn try_from(j: WeightsJson) -> Result<Self> {
        ConvexWeights::new(j.weights.into_iter().map(|e| (e.vertex, e.weight)).collect())
    }
}

impl From<ConvexWeights> for WeightsJson {
    fn from(w: ConvexWeights) -> Self {
        WeightsJson { weights: w.entries.into_iter().map(|(vertex, weight)| WeightEntry { vertex, weight }).collect() }
    }
}
