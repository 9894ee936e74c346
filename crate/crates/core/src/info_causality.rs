//! The information-causality necessary condition `E1² + E2² ≤ 1` on boxes,
//! its specialization to Hardy boxes, per-case verdicts, and the largest
//! Hardy success probability it permits.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::hardy::{hardy_box, is_hardy, success_probability, HardyCoefficients};
use crate::nsbox::{BipartiteBox, Bit};
use crate::randomness::{sample_family, solve_case, RandomnessCase};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    AliceToBob,
    BobToAlice,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IcStatistics {
    pub orientation: Orientation,
    pub p1: f64,
    pub p2: f64,
    pub e1: f64,
    pub e2: f64,
}

impl IcStatistics {
    /// `E1² + E2²`.
    pub fn lhs(&self) -> f64 {
        self.e1 * self.e1 + self.e2 * self.e2
    }
}

/// `P1 = ½[P(a=b|00) + P(a=b|10)]`, `P2 = ½[P(a=b|01) + P(a≠b|11)]`, computed
/// on the box itself or on the box with the parties exchanged.
pub fn ic_statistics(bx: &BipartiteBox, orientation: Orientation) -> IcStatistics {
    let swapped;
    let b = match orientation {
        Orientation::AliceToBob => bx,
        Orientation::BobToAlice => {
            swapped = bx.swap_parties();
            &swapped
        }
    };
    let (o, l) = (Bit::ZERO, Bit::ONE);
    let agree = |x: Bit, y: Bit| b.prob(o, o, x, y) + b.prob(l, l, x, y);
    let p1 = 0.5 * (agree(o, o) + agree(l, o));
    let p2 = 0.5 * (agree(o, l) + (1.0 - agree(l, l)));
    IcStatistics { orientation, p1, p2, e1: 2.0 * p1 - 1.0, e2: 2.0 * p2 - 1.0 }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IcVerdict {
    pub satisfied: bool,
    /// Larger of `E1² + E2²` over the two orientations.
    pub lhs: f64,
    pub statistics: [IcStatistics; 2],
    /// Hardy-specialized left sides, present when the box is Hardy.
    pub hardy_lhs_pair: Option<(f64, f64)>,
}

pub fn satisfies_ic_necessary(bx: &BipartiteBox, tol: f64) -> IcVerdict {
    let statistics = [ic_statistics(bx, Orientation::AliceToBob), ic_statistics(bx, Orientation::BobToAlice)];
    let lhs = statistics[0].lhs().max(statistics[1].lhs());
    let hardy_lhs_pair =
        if is_hardy(bx, tol).is_hardy { crate::hardy::decompose(bx, tol).ok().map(|c| hardy_ic_lhs(&c)) } else { None };
    IcVerdict { satisfied: lhs <= 1.0 + tol, lhs, statistics, hardy_lhs_pair }
}

/// `c6² + 2u·c6 + 2u(u − 1)` for `u = c4 + c5` and `u = c2 + c5`. Each is
/// `E1² + E2² − 1` of the Hardy box in one orientation.
pub fn hardy_ic_lhs(c: &HardyCoefficients) -> (f64, f64) {
    let [_, c2, _, c4, c5, c6] = c.as_array();
    (quadratic(c4 + c5, c6), quadratic(c2 + c5, c6))
}

fn quadratic(u: f64, c6: f64) -> f64 {
    c6 * c6 + 2.0 * u * c6 + 2.0 * u * (u - 1.0)
}

/// Largest `c6` with `c6² + 2u·c6 + 2u(u−1) ≤ 0`, for `u ∈ [0, 1]`.
pub fn ic_c6_boundary(u: f64) -> f64 {
    -u + (2.0 * u - u * u).max(0.0).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CaseVerdict {
    /// Every member with `c6 > 0` violates the condition.
    AlwaysViolated,
    /// Some member with `c6 > 0` satisfies it.
    Feasible,
    /// Neither proof nor witness found.
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseIcReport {
    pub case_index: u8,
    pub verdict: CaseVerdict,
    pub witness: Option<HardyCoefficients>,
    /// Seed and sample position that regenerate the witness through
    /// `sample_case(case, position + 1, seed)`.
    pub witness_seed: Option<u64>,
    pub witness_position: Option<usize>,
    pub samples_checked: usize,
    /// Samples with both Hardy left sides `≤ 0`.
    pub satisfying_samples: usize,
    /// Maximum of `c4 + c5` and of `c2 + c5` over the family; a zero means
    /// the family pins that sum and the corresponding left side is `c6²`.
    pub max_sums: (f64, f64),
}

/// Decides whether a randomness case is compatible with the IC condition.
///
/// A violation verdict rests on a proof: when either `c4 + c5` or `c2 + c5`
/// is identically zero on the family, the matching left side reduces to
/// `c6² > 0`. The samples must agree. A feasibility verdict needs a sampled
/// witness with both left sides `≤ 0`.
pub fn case_ic_verdict(case: &RandomnessCase, n_samples: usize, seed: u64) -> Result<CaseIcReport> {
    let family = solve_case(case);
    let max_s = family.maximize([0.0, 0.0, 0.0, 1.0, 1.0, 0.0])?;
    let max_t = family.maximize([0.0, 1.0, 0.0, 0.0, 1.0, 0.0])?;
    let forced = max_s <= 1e-12 || max_t <= 1e-12;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = sample_family(&family, n_samples.max(1), &mut rng)?;
    let mut satisfying = 0;
    let mut witness = None;
    for (k, c) in samples.iter().enumerate() {
        let (l6, l7) = hardy_ic_lhs(c);
        if l6 <= 0.0 && l7 <= 0.0 && c.c6() > 0.0 {
            satisfying += 1;
            witness.get_or_insert((k, *c));
        }
    }
    let verdict = match (forced, witness.is_some()) {
        (true, false) => CaseVerdict::AlwaysViolated,
        (false, true) => CaseVerdict::Feasible,
        _ => CaseVerdict::Inconclusive,
    };
    Ok(CaseIcReport {
        case_index: case.index,
        verdict,
        witness: witness.map(|(_, c)| c),
        witness_seed: witness.map(|_| seed),
        witness_position: witness.map(|(k, _)| k),
        samples_checked: samples.len(),
        satisfying_samples: satisfying,
        max_sums: (max_s, max_t),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IcSearch {
    /// Number of coarse grid intervals on `s = c4 + c5 = c2 + c5`.
    pub resolution: usize,
    /// Golden-section steps around the best grid point.
    pub refine_iterations: usize,
    /// When false, only the simplex constraint remains.
    pub enforce_ic: bool,
}

impl Default for IcSearch {
    fn default() -> Self {
        Self { resolution: 1000, refine_iterations: 100, enforce_ic: true }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IcOptimum {
    pub coefficients: HardyCoefficients,
    pub q_star: f64,
    pub s_star: f64,
    pub lhs_pair: (f64, f64),
}

/// Maximizes `c6 / 2` over Hardy coefficients subject to both IC left sides
/// being nonpositive.
///
/// Both constraints depend on `c6` and one sum each, and tighten as `c6`
/// grows, so the optimum sits on the symmetric slice `c4 + c5 = c2 + c5 = s`
/// with `c2 = c4 = 0`, `c5 = s`, and `c6` on the boundary. The search scans
/// `s` on a grid and then refines the best cell by golden section.
pub fn max_success_under_ic(search: &IcSearch) -> IcOptimum {
    let resolution = search.resolution.max(1);
    let value = |s: f64| {
        let simplex = 1.0 - s;
        if search.enforce_ic {
            ic_c6_boundary(s).min(simplex)
        } else {
            simplex
        }
    };
    let (best_i, _) = (0..=resolution)
        .into_par_iter()
        .map(|i| (i, value(i as f64 / resolution as f64)))
        .reduce_with(|a, b| match a.1.total_cmp(&b.1) {
            std::cmp::Ordering::Less => b,
            std::cmp::Ordering::Greater => a,
            std::cmp::Ordering::Equal => {
                if a.0 <= b.0 {
                    a
                } else {
                    b
                }
            }
        })
        .expect("grid is nonempty");

    let h = 1.0 / resolution as f64;
    let mut lo = (best_i as f64 * h - h).max(0.0);
    let mut hi = (best_i as f64 * h + h).min(1.0);
    let mut s_best = best_i as f64 * h;
    let mut v_best = value(s_best);
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut m1 = hi - ratio * (hi - lo);
    let mut m2 = lo + ratio * (hi - lo);
    let (mut f1, mut f2) = (value(m1), value(m2));
    for _ in 0..search.refine_iterations {
        if f1 >= f2 {
            hi = m2;
            m2 = m1;
            f2 = f1;
            m1 = hi - ratio * (hi - lo);
            f1 = value(m1);
        } else {
            lo = m1;
            m1 = m2;
            f1 = f2;
            m2 = lo + ratio * (hi - lo);
            f2 = value(m2);
        }
    }
    for (s, v) in [(m1, f1), (m2, f2)] {
        if v > v_best {
            s_best = s;
            v_best = v;
        }
    }

    let c6 = v_best;
    let rest = ((1.0 - s_best - c6) / 2.0).max(0.0);
    let mut c = [rest, 0.0, rest, 0.0, s_best, c6];
    let total: f64 = c.iter().sum();
    c[0] += (1.0 - total) / 2.0;
    c[2] += (1.0 - total) / 2.0;
    let coefficients = HardyCoefficients::new(c).expect("optimum lies on the simplex");
    IcOptimum {
        q_star: success_probability(&coefficients),
        s_star: s_best,
        lhs_pair: hardy_ic_lhs(&coefficients),
        coefficients,
    }
}

/// Hardy box of a case-family witness, for callers that want the full box.
pub fn witness_box(report: &CaseIcReport) -> Option<BipartiteBox> {
    report.witness.as_ref().map(hardy_box)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nsbox::{nonlocal_vertex, pr_box, DEFAULT_TOL};

    fn coeffs(c: [f64; 6]) -> HardyCoefficients {
        HardyCoefficients::new(c).unwrap()
    }

    #[test]
    fn statistics_of_nonlocal_001() {
        let s = ic_statistics(&nonlocal_vertex(Bit::ZERO, Bit::ZERO, Bit::ONE), Orientation::AliceToBob);
        assert_eq!((s.p1, s.p2, s.e1, s.e2), (0.0, 0.0, -1.0, -1.0));
        let v = satisfies_ic_necessary(&nonlocal_vertex(Bit::ZERO, Bit::ZERO, Bit::ONE), DEFAULT_TOL);
        assert_eq!(v.lhs, 2.0);
        assert!(!v.satisfied);
        assert_eq!(v.hardy_lhs_pair, Some((1.0, 1.0)));
    }

    #[test]
    fn statistics_of_uniform_box() {
        for o in [Orientation::AliceToBob, Orientation::BobToAlice] {
            let s = ic_statistics(&BipartiteBox::uniform(), o);
            assert_eq!((s.p1, s.p2, s.e1, s.e2), (0.5, 0.5, 0.0, 0.0));
        }
        let v = satisfies_ic_necessary(&BipartiteBox::uniform(), DEFAULT_TOL);
        assert!(v.satisfied);
        assert_eq!(v.lhs, 0.0);
        assert_eq!(v.hardy_lhs_pair, None);
    }

    #[test]
    fn pr_box_violates() {
        let v = satisfies_ic_necessary(&pr_box(), DEFAULT_TOL);
        assert_eq!(v.lhs, 2.0);
        assert!(!v.satisfied);
    }

    #[test]
    fn hardy_statistics_in_closed_form() {
        let c = coeffs([0.1, 0.05, 0.2, 0.15, 0.12, 0.38]);
        let s = ic_statistics(&hardy_box(&c), Orientation::AliceToBob);
        assert!((s.p1 - (0.15 + 0.12) / 2.0).abs() < 1e-15);
        assert!((s.p2 - (0.1 + 0.05 + 0.2) / 2.0).abs() < 1e-15);
        let t = ic_statistics(&hardy_box(&c), Orientation::BobToAlice);
        assert!((t.p1 - (0.05 + 0.12) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn hardy_lhs_examples() {
        assert_eq!(hardy_ic_lhs(&coeffs([0.0, 0.0, 0.0, 0.0, 0.0, 1.0])), (1.0, 1.0));
        let (a, b) = hardy_ic_lhs(&coeffs([0.2, 0.1, 0.3, 0.25, 0.15, 0.0]));
        assert!((a - 2.0 * 0.4 * (0.4 - 1.0)).abs() < 1e-15);
        assert!((b - 2.0 * 0.25 * (0.25 - 1.0)).abs() < 1e-15);
        assert!(a <= 0.0 && b <= 0.0);

        let s = 1.0 - 1.0 / 2f64.sqrt();
        let c6 = 2f64.sqrt() - 1.0;
        let rest = (1.0 - s - c6) / 2.0;
        let (a, b) = hardy_ic_lhs(&coeffs([rest, 0.0, rest, 0.0, s, c6]));
        assert!(a.abs() < 1e-15 && b.abs() < 1e-15);
    }

    #[test]
    fn case_nine_point_satisfies() {
        // c1 + c2 = c3 + c4 = 0.45 with c2 = c4 = 0.3.
        let c = coeffs([0.15, 0.3, 0.15, 0.3, 0.0, 0.1]);
        let v = satisfies_ic_necessary(&hardy_box(&c), DEFAULT_TOL);
        assert!(v.satisfied);
        let (a, b) = v.hardy_lhs_pair.unwrap();
        assert!(a < 0.0 && b < 0.0);
    }

    #[test]
    fn boundary_is_root() {
        for k in 1..100 {
            let u = k as f64 / 100.0;
            assert!(quadratic(u, ic_c6_boundary(u)).abs() < 1e-12);
        }
    }

    #[test]
    fn case_verdicts_small() {
        let one = case_ic_verdict(&RandomnessCase::new(1).unwrap(), 200, 1).unwrap();
        assert_eq!(one.verdict, CaseVerdict::AlwaysViolated);
        assert_eq!(one.satisfying_samples, 0);
        let nine = case_ic_verdict(&RandomnessCase::new(9).unwrap(), 200, 1).unwrap();
        assert_eq!(nine.verdict, CaseVerdict::Feasible);
        let w = nine.witness.unwrap();
        let (a, b) = hardy_ic_lhs(&w);
        assert!(a <= 0.0 && b <= 0.0 && w.c6() > 0.0);
    }

    #[test]
    fn optimizer_hits_analytic_value() {
        let opt = max_success_under_ic(&IcSearch::default());
        assert!((opt.q_star - (2f64.sqrt() - 1.0) / 2.0).abs() < 1e-10);
        assert!(opt.lhs_pair.0.abs() < 1e-8 && opt.lhs_pair.1.abs() < 1e-8);
    }

    #[test]
    fn optimizer_without_ic_reaches_half() {
        let opt = max_success_under_ic(&IcSearch { enforce_ic: false, ..IcSearch::default() });
        assert_eq!(opt.q_star, 0.5);
    }
}
