//! Local randomness of the four inputs of a Hardy box.
//!
//! An input is locally random when both of its outcomes occur with
//! probability ½. On the Hardy family each such requirement is one linear
//! equation in `c1..c6`; the fifteen nonempty subsets of inputs give the
//! fifteen randomness cases handled here.

use std::collections::BTreeSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hardy::{hardy_box, HardyCoefficients};
use crate::lp::{LinearProgram, LpOutcome};
use crate::nsbox::{BipartiteBox, Bit, Party};

/// One of the four measurement inputs `0A, 1A, 0B, 1B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum InputLabel {
    #[serde(rename = "0A")]
    A0,
    #[serde(rename = "1A")]
    A1,
    #[serde(rename = "0B")]
    B0,
    #[serde(rename = "1B")]
    B1,
}

impl InputLabel {
    pub const ALL: [InputLabel; 4] = [InputLabel::A0, InputLabel::A1, InputLabel::B0, InputLabel::B1];

    pub fn party(self) -> Party {
        match self {
            InputLabel::A0 | InputLabel::A1 => Party::Alice,
            InputLabel::B0 | InputLabel::B1 => Party::Bob,
        }
    }

    pub fn input(self) -> Bit {
        match self {
            InputLabel::A0 | InputLabel::B0 => Bit::ZERO,
            InputLabel::A1 | InputLabel::B1 => Bit::ONE,
        }
    }
}

impl fmt::Display for InputLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            InputLabel::A0 => "0A",
            InputLabel::A1 => "1A",
            InputLabel::B0 => "0B",
            InputLabel::B1 => "1B",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for InputLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "0A" => Ok(InputLabel::A0),
            "1A" => Ok(InputLabel::A1),
            "0B" => Ok(InputLabel::B0),
            "1B" => Ok(InputLabel::B1),
            _ => Err(Error::Parse(format!("unknown input label {s:?}"))),
        }
    }
}

pub type InputSet = BTreeSet<InputLabel>;

/// True iff the marginal of `input` is ½ within `tol` for both inputs of the
/// other party.
pub fn is_locally_random(bx: &BipartiteBox, input: InputLabel, tol: f64) -> bool {
    Bit::ALL.iter().all(|&other| (bx.marginal(input.party(), input.input(), other) - 0.5).abs() <= tol)
}

/// The set of locally random inputs of a box.
pub fn classify(bx: &BipartiteBox, tol: f64) -> InputSet {
    InputLabel::ALL.into_iter().filter(|&i| is_locally_random(bx, i, tol)).collect()
}

/// `coeffs · (c1..c6) = rhs`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearCondition {
    pub coeffs: [f64; 6],
    pub rhs: f64,
}

impl LinearCondition {
    pub fn lhs(&self, c: &[f64; 6]) -> f64 {
        self.coeffs.iter().zip(c).map(|(a, b)| a * b).sum()
    }

    pub fn residual(&self, c: &[f64; 6]) -> f64 {
        self.lhs(c) - self.rhs
    }

    fn normalization() -> Self {
        LinearCondition { coeffs: [1.0; 6], rhs: 1.0 }
    }

    fn zero(index: usize) -> Self {
        let mut coeffs = [0.0; 6];
        coeffs[index - 1] = 1.0;
        LinearCondition { coeffs, rhs: 0.0 }
    }
}

impl fmt::Display for LinearCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, &a) in self.coeffs.iter().enumerate() {
            let name = format!("c{}", i + 1);
            match a {
                0.0 => {}
                1.0 => terms.push(name),
                0.5 => terms.push(format!("{name}/2")),
                a => terms.push(format!("{a}*{name}")),
            }
        }
        let rhs = if self.rhs == 0.5 { "1/2".to_string() } else { format!("{}", self.rhs) };
        write!(f, "{} = {rhs}", terms.join(" + "))
    }
}

/// The independent linear condition on `c1..c6` for `input` to be locally
/// random in a Hardy box: `P(outcome 0 | input) = ½`.
pub fn randomness_conditions(input: InputLabel) -> LinearCondition {
    let coeffs = match input {
        InputLabel::A0 => [1.0, 1.0, 0.0, 0.0, 0.0, 0.5],
        InputLabel::A1 => [0.0, 0.0, 1.0, 0.0, 0.0, 0.5],
        InputLabel::B0 => [0.0, 0.0, 1.0, 1.0, 0.0, 0.5],
        InputLabel::B1 => [1.0, 0.0, 0.0, 0.0, 0.0, 0.5],
    };
    LinearCondition { coeffs, rhs: 0.5 }
}

/// The paired condition (the other outcome has probability ½). It follows
/// from the primary one and normalization.
pub fn complementary_condition(input: InputLabel) -> LinearCondition {
    let primary = randomness_conditions(input);
    let mut coeffs = [0.0; 6];
    for (k, a) in coeffs.iter_mut().enumerate() {
        *a = 1.0 - primary.coeffs[k];
    }
    LinearCondition { coeffs, rhs: 0.5 }
}

/// One of the fifteen nonempty subsets of inputs, numbered as in the
/// reference case table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RandomnessCase {
    pub index: u8,
    pub inputs: InputSet,
}

const CASE_TABLE: [&[InputLabel]; 15] = {
    use InputLabel::*;
    [
        &[A0, A1, B0, B1],
        &[A0, A1, B0],
        &[A0, A1, B1],
        &[A0, B0, B1],
        &[A1, B0, B1],
        &[A0, A1],
        &[B0, B1],
        &[A1, B1],
        &[A0, B0],
        &[A0, B1],
        &[A1, B0],
        &[A0],
        &[A1],
        &[B0],
        &[B1],
    ]
};

impl RandomnessCase {
    pub fn new(index: u8) -> Result<Self> {
        if !(1..=15).contains(&index) {
            return Err(Error::UnknownCase(index));
        }
        Ok(Self { index, inputs: CASE_TABLE[index as usize - 1].iter().copied().collect() })
    }

    pub fn all() -> impl Iterator<Item = RandomnessCase> {
        (1..=15).map(|k| RandomnessCase::new(k).unwrap())
    }

    /// Case whose input subset is exactly `inputs`.
    pub fn from_inputs(inputs: &InputSet) -> Option<Self> {
        Self::all().find(|c| &c.inputs == inputs)
    }
}

/// `c[coef] = constant + Σ weight · c[free]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PivotExpr {
    pub coef: usize,
    pub constant: f64,
    pub terms: Vec<(usize, f64)>,
}

impl fmt::Display for PivotExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{} = {}", self.coef, self.constant)?;
        for &(j, w) in &self.terms {
            if w < 0.0 {
                write!(f, " - {}*c{j}", -w)?;
            } else {
                write!(f, " + {w}*c{j}")?;
            }
        }
        Ok(())
    }
}

/// General solution of a case's randomness conditions on the coefficient
/// simplex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseFamily {
    pub case: RandomnessCase,
    /// Normalization, the case's conditions, and any coefficient pinned to
    /// zero by nonnegativity.
    pub constraints: Vec<LinearCondition>,
    /// Coefficients (1-based) that nonnegativity forces to zero.
    pub forced_zero: Vec<usize>,
    /// Free coefficients (1-based); always includes `c6`.
    pub free_parameters: Vec<usize>,
    pub pivots: Vec<PivotExpr>,
    /// Inputs random on every member, a superset of `case.inputs`.
    pub implied_inputs: InputSet,
    /// Upper bound of each free coefficient at `c6 = 0`; the bound at general
    /// `c6` is this times `1 - c6`.
    pub free_upper_bounds: [f64; 6],
}

impl CaseFamily {
    /// Fills in pivot coefficients from the free ones in `c`.
    pub fn complete(&self, mut c: [f64; 6]) -> [f64; 6] {
        for p in &self.pivots {
            c[p.coef - 1] = p.constant + p.terms.iter().map(|&(j, w)| w * c[j - 1]).sum::<f64>();
        }
        c
    }

    pub fn contains(&self, c: &[f64; 6], tol: f64) -> bool {
        c.iter().all(|&v| v >= -tol) && self.constraints.iter().all(|k| k.residual(c).abs() <= tol)
    }

    /// Largest value of `objective · c` over the family.
    pub fn maximize(&self, objective: [f64; 6]) -> Result<f64> {
        let negated = objective.map(|v| -v);
        match family_lp(&self.constraints, negated).solve(1e-12)? {
            LpOutcome::Optimal { value, .. } => Ok(-value),
            other => Err(Error::InvalidWeights(format!("family LP ended as {other:?}"))),
        }
    }
}

fn family_lp(rows: &[LinearCondition], objective: [f64; 6]) -> LinearProgram {
    let mut lp = LinearProgram::new(objective.to_vec());
    for r in rows {
        lp.equality(r.coeffs.to_vec(), r.rhs);
    }
    lp
}

fn lp_optimum(rows: &[LinearCondition], objective: [f64; 6]) -> f64 {
    match family_lp(rows, objective).solve(1e-12) {
        Ok(LpOutcome::Optimal { value, .. }) => value,
        // Every family contains the point c6 = 1, so this is unreachable for
        // well-formed rows; report the most conservative value.
        _ => f64::NAN,
    }
}

const VALUE_EPS: f64 = 1e-12;
const PIVOT_ORDER: [usize; 5] = [2, 5, 4, 3, 1];

/// Derives the solution family of a case directly from its randomness
/// conditions, normalization and nonnegativity.
pub fn solve_case(case: &RandomnessCase) -> CaseFamily {
    let mut constraints = vec![LinearCondition::normalization()];
    constraints.extend(case.inputs.iter().map(|&i| randomness_conditions(i)));

    let forced_zero: Vec<usize> = (1..=5)
        .filter(|&i| {
            let mut obj = [0.0; 6];
            obj[i - 1] = -1.0;
            -lp_optimum(&constraints, obj) <= VALUE_EPS
        })
        .collect();
    constraints.extend(forced_zero.iter().map(|&i| LinearCondition::zero(i)));

    // Gauss-Jordan elimination; c6 is never chosen as a pivot.
    let mut rows: Vec<[f64; 7]> = constraints
        .iter()
        .map(|k| {
            let mut r = [0.0; 7];
            r[..6].copy_from_slice(&k.coeffs);
            r[6] = k.rhs;
            r
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut rank = 0;
    for &col in &PIVOT_ORDER {
        let j = col - 1;
        let Some(best) = (rank..rows.len())
            .filter(|&r| rows[r][j].abs() > VALUE_EPS)
            .max_by(|&a, &b| rows[a][j].abs().total_cmp(&rows[b][j].abs()))
        else {
            continue;
        };
        rows.swap(rank, best);
        let p = rows[rank][j];
        for v in rows[rank].iter_mut() {
            *v /= p;
        }
        let pivot_row = rows[rank];
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[j] != 0.0 {
                let f = row[j];
                for k in 0..7 {
                    row[k] -= f * pivot_row[k];
                }
            }
        }
        pivot_cols.push(col);
        rank += 1;
    }
    let free_parameters: Vec<usize> = (1..=6).filter(|c| !pivot_cols.contains(c)).collect();
    let mut pivots: Vec<PivotExpr> = pivot_cols
        .iter()
        .enumerate()
        .map(|(r, &col)| PivotExpr {
            coef: col,
            constant: rows[r][6],
            terms: free_parameters
                .iter()
                .filter(|&&f| rows[r][f - 1].abs() > VALUE_EPS)
                .map(|&f| (f, -rows[r][f - 1]))
                .collect(),
        })
        .collect();
    pivots.sort_by_key(|p| p.coef);

    let implied_inputs = InputLabel::ALL
        .into_iter()
        .filter(|&i| {
            let k = randomness_conditions(i);
            let lo = lp_optimum(&constraints, k.coeffs);
            let hi = -lp_optimum(&constraints, k.coeffs.map(|v| -v));
            (lo - k.rhs).abs() <= 1e-10 && (hi - k.rhs).abs() <= 1e-10
        })
        .collect();

    let mut at_zero = constraints.clone();
    at_zero.push(LinearCondition::zero(6));
    let mut free_upper_bounds = [0.0; 6];
    for &f in free_parameters.iter().filter(|&&f| f != 6) {
        let mut obj = [0.0; 6];
        obj[f - 1] = -1.0;
        free_upper_bounds[f - 1] = -lp_optimum(&at_zero, obj);
    }
    free_upper_bounds[5] = 1.0;

    CaseFamily {
        case: case.clone(),
        constraints,
        forced_zero,
        free_parameters,
        pivots,
        implied_inputs,
        free_upper_bounds,
    }
}

/// Entry of the reference solution table: a free symbol, zero, or
/// `(1 - c6)/2` minus a sum of free symbols.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Entry {
    Free,
    Zero,
    HalfMinus(&'static [usize]),
}

const REFERENCE_TABLE: [[Entry; 6]; 15] = {
    use Entry::*;
    const H: Entry = HalfMinus(&[]);
    [
        [H, Zero, H, Zero, Zero, Free],
        [Free, HalfMinus(&[1]), H, Zero, Zero, Free],
        [H, Zero, H, Zero, Zero, Free],
        [H, Zero, Free, HalfMinus(&[3]), Zero, Free],
        [H, Zero, H, Zero, Zero, Free],
        [Free, HalfMinus(&[1]), H, Zero, Zero, Free],
        [H, Zero, Free, HalfMinus(&[3]), Zero, Free],
        [H, Zero, H, Zero, Zero, Free],
        [Free, HalfMinus(&[1]), Free, HalfMinus(&[3]), Zero, Free],
        [H, Zero, Free, Free, HalfMinus(&[3, 4]), Free],
        [Free, Free, H, Zero, HalfMinus(&[1, 2]), Free],
        [Free, HalfMinus(&[1]), Free, Free, HalfMinus(&[3, 4]), Free],
        [Free, HalfMinus(&[1, 4, 5]), H, Free, Free, Free],
        [Free, HalfMinus(&[1, 5]), Free, HalfMinus(&[3]), Free, Free],
        [H, HalfMinus(&[3, 4, 5]), Free, Free, Free, Free],
    ]
};

/// Evaluates the reference parametrization of a case at the given values of
/// its free symbols (entries for non-free symbols are ignored).
pub fn reference_member(case: &RandomnessCase, free: [f64; 6]) -> [f64; 6] {
    let row = &REFERENCE_TABLE[case.index as usize - 1];
    let half = (1.0 - free[5]) / 2.0;
    let mut c = [0.0; 6];
    for (k, entry) in row.iter().enumerate() {
        c[k] = match entry {
            Entry::Free => free[k],
            Entry::Zero => 0.0,
            Entry::HalfMinus(js) => half - js.iter().map(|&j| free[j - 1]).sum::<f64>(),
        };
    }
    c
}

/// Compares the derived family with the reference one as affine sets.
/// Returns a description of every discrepancy; empty when they agree.
pub fn table_discrepancies(family: &CaseFamily) -> Vec<String> {
    let row = &REFERENCE_TABLE[family.case.index as usize - 1];
    let listed_free: Vec<usize> = (1..=6).filter(|&k| row[k - 1] == Entry::Free).collect();
    let mut out = Vec::new();
    if listed_free.len() != family.free_parameters.len() {
        out.push(format!(
            "reference family has {} free parameters, derived has {}",
            listed_free.len(),
            family.free_parameters.len()
        ));
    }
    let base = reference_member(&family.case, [0.0; 6]);
    let mut probes = vec![base];
    for &f in &listed_free {
        let mut v = [0.0; 6];
        v[f - 1] = 1.0;
        probes.push(reference_member(&family.case, v));
    }
    for (n, probe) in probes.iter().enumerate() {
        for k in &family.constraints {
            if k.residual(probe).abs() > 1e-12 {
                out.push(format!("reference point #{n} {probe:?} violates {k}"));
            }
        }
    }
    out
}

/// Draws `n` members of a case family with `c6 > 0.01`. Free coefficients
/// are uniform on their bounds; draws with a negative pivot are rejected.
pub fn sample_case(case: &RandomnessCase, n: usize, seed: u64) -> Result<Vec<HardyCoefficients>> {
    let family = solve_case(case);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_family(&family, n, &mut rng)
}

pub(crate) fn sample_family<R: Rng>(family: &CaseFamily, n: usize, rng: &mut R) -> Result<Vec<HardyCoefficients>> {
    let max_attempts = 10_000 * n.max(1) + 1_000;
    let mut out = Vec::with_capacity(n);
    let mut attempts = 0;
    while out.len() < n {
        attempts += 1;
        if attempts > max_attempts {
            return Err(Error::EmptyFamily(family.case.index));
        }
        let mut c = [0.0; 6];
        c[5] = rng.gen_range(0.01..=1.0);
        for &f in family.free_parameters.iter().filter(|&&f| f != 6) {
            let ub = family.free_upper_bounds[f - 1] * (1.0 - c[5]);
            c[f - 1] = if ub > 0.0 { rng.gen_range(0.0..=ub) } else { 0.0 };
        }
        let mut c = family.complete(c);
        if c.iter().any(|&v| v < -1e-15) {
            continue;
        }
        for v in c.iter_mut() {
            *v = v.max(0.0);
        }
        out.push(HardyCoefficients::new(c)?);
    }
    Ok(out)
}

/// A member whose classification is exactly the case subset, if one exists.
/// Families whose conditions imply further random inputs have none.
pub fn exact_witness(case: &RandomnessCase, seed: u64, tol: f64) -> Result<Option<HardyCoefficients>> {
    let family = solve_case(case);
    if family.implied_inputs != case.inputs {
        return Ok(None);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..1_000 {
        let c = sample_family(&family, 1, &mut rng)?[0];
        if classify(&hardy_box(&c), tol) == case.inputs {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nsbox::{local_vertex, nonlocal_vertex, pr_box, DEFAULT_TOL};

    fn set(labels: &[InputLabel]) -> InputSet {
        labels.iter().copied().collect()
    }

    #[test]
    fn pr_box_is_random_everywhere() {
        for i in InputLabel::ALL {
            assert!(is_locally_random(&pr_box(), i, DEFAULT_TOL));
        }
        let v = nonlocal_vertex(Bit::ZERO, Bit::ZERO, Bit::ONE);
        assert_eq!(classify(&v, DEFAULT_TOL), set(&InputLabel::ALL));
    }

    #[test]
    fn deterministic_boxes_are_not_random() {
        let v = local_vertex(Bit::ZERO, Bit::ZERO, Bit::ZERO, Bit::ZERO);
        assert!(!is_locally_random(&v, InputLabel::A0, DEFAULT_TOL));
        let w = local_vertex(Bit::ZERO, Bit::ZERO, Bit::ZERO, Bit::ONE);
        assert!(classify(&w, DEFAULT_TOL).is_empty());
    }

    #[test]
    fn case_one_member_is_fully_random() {
        let c = HardyCoefficients::new([0.25, 0.0, 0.25, 0.0, 0.0, 0.5]).unwrap();
        assert_eq!(classify(&hardy_box(&c), DEFAULT_TOL), set(&InputLabel::ALL));
    }

    #[test]
    fn condition_strings() {
        assert_eq!(randomness_conditions(InputLabel::A0).to_string(), "c1 + c2 + c6/2 = 1/2");
        assert_eq!(randomness_conditions(InputLabel::B1).to_string(), "c1 + c6/2 = 1/2");
        assert_eq!(complementary_condition(InputLabel::A0).to_string(), "c3 + c4 + c5 + c6/2 = 1/2");
        // Bob's y=1 marginal read off the Hardy matrix.
        assert_eq!(complementary_condition(InputLabel::B1).to_string(), "c2 + c3 + c4 + c5 + c6/2 = 1/2");
    }

    #[test]
    fn paired_conditions_sum_to_normalization() {
        for i in InputLabel::ALL {
            let a = randomness_conditions(i);
            let b = complementary_condition(i);
            for k in 0..6 {
                assert_eq!(a.coeffs[k] + b.coeffs[k], LinearCondition::normalization().coeffs[k]);
            }
            assert_eq!(a.rhs + b.rhs, 1.0);
        }
    }

    #[test]
    fn case_table_is_all_nonempty_subsets() {
        let subsets: BTreeSet<InputSet> = RandomnessCase::all().map(|c| c.inputs).collect();
        assert_eq!(subsets.len(), 15);
        assert!(RandomnessCase::new(0).is_err());
        assert!(RandomnessCase::new(16).is_err());
        assert_eq!(RandomnessCase::new(15).unwrap().inputs, set(&[InputLabel::B1]));
    }

    #[test]
    fn case_one_family() {
        let fam = solve_case(&RandomnessCase::new(1).unwrap());
        assert_eq!(fam.free_parameters, vec![6]);
        let c = fam.complete([0.0, 0.0, 0.0, 0.0, 0.0, 0.3]);
        let expected = [0.35, 0.0, 0.35, 0.0, 0.0, 0.3];
        for (a, b) in c.iter().zip(expected) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn case_nine_family() {
        let fam = solve_case(&RandomnessCase::new(9).unwrap());
        assert_eq!(fam.free_parameters, vec![1, 3, 6]);
        assert_eq!(fam.forced_zero, vec![5]);
        let c = fam.complete([0.1, 0.0, 0.2, 0.0, 0.0, 0.4]);
        assert!((c[0] + c[1] - 0.3).abs() < 1e-15);
        assert!((c[2] + c[3] - 0.3).abs() < 1e-15);
        assert_eq!(c[4], 0.0);
    }

    #[test]
    fn case_twelve_family() {
        let fam = solve_case(&RandomnessCase::new(12).unwrap());
        assert_eq!(fam.free_parameters, vec![1, 3, 4, 6]);
        let c = fam.complete([0.1, 0.0, 0.05, 0.1, 0.0, 0.2]);
        assert!((c[0] + c[1] - 0.4).abs() < 1e-15);
        assert!((c[2] + c[3] + c[4] - 0.4).abs() < 1e-15);
    }

    #[test]
    fn forced_zeros_from_nonnegativity() {
        // {0A, 1A}: c4 + c5 = 0 follows only once nonnegativity is used.
        let fam = solve_case(&RandomnessCase::new(6).unwrap());
        assert_eq!(fam.forced_zero, vec![4, 5]);
        assert!(fam.implied_inputs.contains(&InputLabel::B0));
    }

    #[test]
    fn derived_families_agree_with_reference_table() {
        for case in RandomnessCase::all() {
            let fam = solve_case(&case);
            assert!(table_discrepancies(&fam).is_empty(), "case {}: {:?}", case.index, table_discrepancies(&fam));
            assert!(fam.implied_inputs.is_superset(&case.inputs));
        }
    }

    #[test]
    fn implied_closures() {
        use InputLabel::*;
        let all = set(&InputLabel::ALL);
        for (k, implied) in [
            (1, all.clone()),
            (3, all.clone()),
            (5, all.clone()),
            (8, all.clone()),
            (6, set(&[A0, A1, B0])),
            (7, set(&[A0, B0, B1])),
        ] {
            assert_eq!(solve_case(&RandomnessCase::new(k).unwrap()).implied_inputs, implied, "case {k}");
        }
        for k in [2, 4, 9, 10, 11, 12, 13, 14, 15] {
            let case = RandomnessCase::new(k).unwrap();
            assert_eq!(solve_case(&case).implied_inputs, case.inputs, "case {k}");
        }
    }

    #[test]
    fn sampling_is_deterministic_and_valid() {
        let case = RandomnessCase::new(12).unwrap();
        let a = sample_case(&case, 50, 3).unwrap();
        let b = sample_case(&case, 50, 3).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, sample_case(&case, 50, 4).unwrap());
        let fam = solve_case(&case);
        for c in &a {
            assert!(c.c6() > 0.0);
            assert!(fam.contains(&c.as_array(), 1e-12));
        }
    }

    #[test]
    fn unbounded_seed_range_works() {
        let case = RandomnessCase::new(15).unwrap();
        for c in sample_case(&case, 20, u64::MAX).unwrap() {
            assert!(is_locally_random(&hardy_box(&c), InputLabel::B1, DEFAULT_TOL));
        }
    }

    #[test]
    fn case_one_samples_fully_random() {
        for c in sample_case(&RandomnessCase::new(1).unwrap(), 20, 0).unwrap() {
            assert_eq!(classify(&hardy_box(&c), DEFAULT_TOL), set(&InputLabel::ALL));
        }
    }

    #[test]
    fn exact_witnesses() {
        for case in RandomnessCase::all() {
            let w = exact_witness(&case, 11, DEFAULT_TOL).unwrap();
            if [1, 2, 4, 9, 10, 11, 12, 13, 14, 15].contains(&case.index) {
                let c = w.unwrap_or_else(|| panic!("case {} has no witness", case.index));
                assert_eq!(classify(&hardy_box(&c), DEFAULT_TOL), case.inputs);
            } else {
                assert!(w.is_none(), "case {}", case.index);
            }
        }
    }

    #[test]
    fn generic_case_twelve_member_classifies_exactly() {
        let c = HardyCoefficients::new([0.1, 0.3, 0.05, 0.15, 0.2, 0.2]).unwrap();
        assert!(solve_case(&RandomnessCase::new(12).unwrap()).contains(&c.as_array(), 1e-12));
        assert_eq!(classify(&hardy_box(&c), DEFAULT_TOL), set(&[InputLabel::A0]));
    }

    #[test]
    fn labels_round_trip() {
        for i in InputLabel::ALL {
            assert_eq!(i.to_string().parse::<InputLabel>().unwrap(), i);
            let j = serde_json::to_string(&i).unwrap();
            assert_eq!(j, format!("\"{i}\""));
        }
    }
}
