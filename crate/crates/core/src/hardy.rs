//! Hardy boxes: the no-signaling boxes with `P(00|00) = P(11|01) = P(11|10) = 0`
//! and `P(11|11) > 0`, written as mixtures of five local vertices and one
//! nonlocal vertex.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nsbox::{mix, BipartiteBox, Bit, ConvexWeights, VertexId, WEIGHT_TOL};

/// Weights `c1..c6` on `L0001, L0011, L0100, L1100, L1111, NL001`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CoefficientsJson", into = "CoefficientsJson")]
pub struct HardyCoefficients {
    c: [f64; 6],
}

/// The six vertices of the Hardy family, in coefficient order.
pub fn hardy_vertices() -> [VertexId; 6] {
    [
        VertexId::local(0, 0, 0, 1).unwrap(),
        VertexId::local(0, 0, 1, 1).unwrap(),
        VertexId::local(0, 1, 0, 0).unwrap(),
        VertexId::local(1, 1, 0, 0).unwrap(),
        VertexId::local(1, 1, 1, 1).unwrap(),
        VertexId::nonlocal(0, 0, 1).unwrap(),
    ]
}

impl HardyCoefficients {
    pub fn new(c: [f64; 6]) -> Result<Self> {
        Self::with_tolerance(c, WEIGHT_TOL)
    }

    fn with_tolerance(c: [f64; 6], tol: f64) -> Result<Self> {
        if let Some((i, v)) = c.iter().enumerate().find(|(_, v)| !v.is_finite() || **v < -tol) {
            return Err(Error::InvalidWeights(format!("c{} = {v}", i + 1)));
        }
        let sum: f64 = c.iter().sum();
        if (sum - 1.0).abs() > tol {
            return Err(Error::InvalidWeights(format!("coefficients sum to {sum}")));
        }
        Ok(Self { c })
    }

    pub fn as_array(&self) -> [f64; 6] {
        self.c
    }

    /// One-based accessor: `get(1)` is `c1`.
    pub fn get(&self, i: usize) -> f64 {
        self.c[i - 1]
    }

    pub fn c6(&self) -> f64 {
        self.c[5]
    }

    pub fn weights(&self) -> ConvexWeights {
        ConvexWeights::new(hardy_vertices().into_iter().zip(self.c).collect())
            .expect("validated coefficients form convex weights")
    }

    pub fn max_abs_diff(&self, other: &HardyCoefficients) -> f64 {
        self.c.iter().zip(&other.c).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

#[derive(Serialize, Deserialize)]
struct CoefficientsJson {
    c: [f64; 6],
}

impl TryFrom<CoefficientsJson> for HardyCoefficients {
    type Error = Error;
    fn try_from(j: CoefficientsJson) -> Result<Self> {
        HardyCoefficients::new(j.c)
    }
}

impl From<HardyCoefficients> for CoefficientsJson {
    fn from(h: HardyCoefficients) -> Self {
        CoefficientsJson { c: h.c }
    }
}

/// Draws coefficients uniformly from the simplex (flat Dirichlet).
pub fn random_coefficients<R: Rng + ?Sized>(rng: &mut R) -> HardyCoefficients {
    let mut c = [0.0; 6];
    for v in c.iter_mut() {
        *v = -(1.0 - rng.gen::<f64>()).ln();
    }
    let total: f64 = c.iter().sum();
    for v in c.iter_mut() {
        *v /= total;
    }
    HardyCoefficients::new(c).expect("normalized exponentials lie on the simplex")
}

pub fn hardy_box(c: &HardyCoefficients) -> BipartiteBox {
    mix(&c.weights())
}

/// `P(11|11)`, which equals `c6 / 2` on the Hardy family.
pub fn success_probability(c: &HardyCoefficients) -> f64 {
    c.c6() / 2.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HardyVerdict {
    pub is_hardy: bool,
    /// `P(00|00)`, `P(11|01)`, `P(11|10)`.
    pub condition_residuals: [f64; 3],
    /// `P(11|11)`.
    pub success: f64,
}

/// Evaluates the Hardy conditions. `tol` serves both as the zero tolerance
/// and as the positivity threshold for `P(11|11)`.
pub fn is_hardy(bx: &BipartiteBox, tol: f64) -> HardyVerdict {
    let (o, l) = (Bit::ZERO, Bit::ONE);
    let residuals = [bx.prob(o, o, o, o), bx.prob(l, l, o, l), bx.prob(l, l, l, o)];
    let success = bx.prob(l, l, l, l);
    HardyVerdict {
        is_hardy: residuals.iter().all(|r| r.abs() <= tol) && success > tol,
        condition_residuals: residuals,
        success,
    }
}

/// Recovers `c1..c6` from a Hardy-form box and checks that the recovered
/// mixture reproduces all sixteen entries within `tol`.
pub fn decompose(bx: &BipartiteBox, tol: f64) -> Result<HardyCoefficients> {
    let (o, l) = (Bit::ZERO, Bit::ONE);
    let verdict = is_hardy(bx, tol);
    if let Some(r) = verdict.condition_residuals.iter().find(|r| r.abs() > tol) {
        return Err(Error::NotHardyForm(format!("zero condition violated by {r}")));
    }
    let mut c = [
        bx.prob(o, l, l, l),
        bx.prob(o, o, o, l),
        bx.prob(l, o, l, l),
        bx.prob(o, o, l, o),
        bx.prob(l, l, o, o),
        2.0 * bx.prob(l, l, l, l),
    ];
    // Small negative or excess mass within tol is rounding noise.
    let coeffs = HardyCoefficients::with_tolerance(c, tol.max(WEIGHT_TOL))?;
    for v in c.iter_mut() {
        *v = v.max(0.0);
    }
    let rebuilt = mix_unchecked(&c);
    let mismatch = rebuilt.max_abs_diff(bx);
    if mismatch > tol {
        return Err(Error::NotHardyForm(format!("six-vertex reconstruction differs by {mismatch:.3e}")));
    }
    Ok(coeffs)
}

fn mix_unchecked(c: &[f64; 6]) -> BipartiteBox {
    let mut p = [[0.0; 4]; 4];
    for (v, w) in hardy_vertices().iter().zip(c) {
        for (acc_row, row) in p.iter_mut().zip(v.to_box().rows()) {
            for (acc, e) in acc_row.iter_mut().zip(row) {
                *acc += w * e;
            }
        }
    }
    BipartiteBox::from_rows_unchecked(p)
}
