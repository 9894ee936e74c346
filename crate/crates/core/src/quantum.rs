//! Two-qubit pure states `cos β |00⟩ + e^{iγ} sin β |11⟩` measured with
//! projective spin observables `n̂·σ`, `n̂ = (sin θ cos φ, sin θ sin φ, cos θ)`.
//!
//! Box convention: input 0/1 selects `A`/`A′` for Alice and `B`/`B′` for
//! Bob; output 0 is eigenvalue +1 and output 1 is eigenvalue −1.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::info_causality::{satisfies_ic_necessary, IcVerdict};
use crate::nsbox::{pair_index, BipartiteBox, Bit, DEFAULT_TOL};
use crate::optimize::NelderMead;
use crate::randomness::{classify, InputSet};

type C = Complex64;
type Mat2 = [[C; 2]; 2];
type Mat4 = [[C; 4]; 4];

const ZERO: C = C::new(0.0, 0.0);

/// Wraps an angle into `(−π, π]`.
pub fn wrap_angle(a: f64) -> f64 {
    let mut w = a.rem_euclid(2.0 * PI);
    if w > PI {
        w -= 2.0 * PI;
    }
    w
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoQubitState {
    pub beta: f64,
    pub gamma: f64,
}

impl TwoQubitState {
    /// `beta` must lie in `[0, π/2]`; `gamma` is wrapped into `(−π, π]`.
    pub fn new(beta: f64, gamma: f64) -> Result<Self> {
        if !(0.0..=FRAC_PI_2).contains(&beta) || !gamma.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "state angles beta={beta}, gamma={gamma}; beta must be in [0, pi/2]"
            )));
        }
        Ok(Self { beta, gamma: wrap_angle(gamma) })
    }

    /// The same physical state as `cos b |00⟩ + e^{ig} sin b |11⟩` for any
    /// real `b`, `g`, rewritten with `β ∈ [0, π/2]`.
    pub fn canonical(b: f64, g: f64) -> Self {
        let (mut c, mut s) = (b.cos(), b.sin());
        if c < 0.0 {
            // global phase −1
            c = -c;
            s = -s;
        }
        let mut gamma = g;
        if s < 0.0 {
            s = -s;
            gamma += PI;
        }
        Self { beta: s.atan2(c), gamma: wrap_angle(gamma) }
    }

    pub fn maximally_entangled(gamma: f64) -> Self {
        Self { beta: FRAC_PI_4, gamma: wrap_angle(gamma) }
    }

    pub fn is_maximally_entangled(&self, tol: f64) -> bool {
        (self.beta - FRAC_PI_4).abs() <= tol
    }

    /// Amplitudes on `|00⟩, |01⟩, |10⟩, |11⟩`.
    pub fn amplitudes(&self) -> [C; 4] {
        [C::new(self.beta.cos(), 0.0), ZERO, ZERO, C::from_polar(self.beta.sin(), self.gamma)]
    }

    pub fn density_matrices(&self) -> DensityMatrices {
        let psi = self.amplitudes();
        let mut rho_ab = [[ZERO; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                rho_ab[i][j] = psi[i] * psi[j].conj();
            }
        }
        let mut rho_a = [[ZERO; 2]; 2];
        let mut rho_b = [[ZERO; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    rho_a[i][j] += rho_ab[2 * i + k][2 * j + k];
                    rho_b[i][j] += rho_ab[2 * k + i][2 * k + j];
                }
            }
        }
        DensityMatrices { rho_ab, rho_a, rho_b }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrices {
    pub rho_ab: Mat4,
    pub rho_a: Mat2,
    pub rho_b: Mat2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Outcome {
    Plus,
    Minus,
}

impl Outcome {
    pub fn from_bit(b: Bit) -> Self {
        if b == Bit::ZERO {
            Outcome::Plus
        } else {
            Outcome::Minus
        }
    }

    pub fn sign(self) -> f64 {
        match self {
            Outcome::Plus => 1.0,
            Outcome::Minus => -1.0,
        }
    }
}

/// Spin observable along `(sin θ cos φ, sin θ sin φ, cos θ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observable {
    pub theta: f64,
    pub phi: f64,
}

impl Observable {
    /// Clamps `theta` into `[0, π]` and wraps `phi` into `(−π, π]`.
    pub fn new(theta: f64, phi: f64) -> Self {
        Self { theta: theta.clamp(0.0, PI), phi: wrap_angle(phi) }
    }

    /// Canonical angles for the direction given by arbitrary real `theta`,
    /// `phi`. Unlike [`Observable::new`] this preserves the direction.
    pub fn from_direction(theta: f64, phi: f64) -> Self {
        let mut t = theta.rem_euclid(2.0 * PI);
        let mut p = phi;
        if t > PI {
            t = 2.0 * PI - t;
            p += PI;
        }
        Self { theta: t, phi: wrap_angle(p) }
    }

    pub fn direction(&self) -> [f64; 3] {
        [self.theta.sin() * self.phi.cos(), self.theta.sin() * self.phi.sin(), self.theta.cos()]
    }

    /// `½[I ± n̂·σ]`.
    pub fn projector(&self, outcome: Outcome) -> Mat2 {
        let [nx, ny, nz] = self.direction();
        let s = outcome.sign();
        [
            [C::new(0.5 * (1.0 + s * nz), 0.0), C::new(0.5 * s * nx, -0.5 * s * ny)],
            [C::new(0.5 * s * nx, 0.5 * s * ny), C::new(0.5 * (1.0 - s * nz), 0.0)],
        ]
    }
}

impl Serialize for Observable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.theta, self.phi].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Observable {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [theta, phi] = <[f64; 2]>::deserialize(d)?;
        Ok(Observable::new(theta, phi))
    }
}

/// `{"A": [θ, φ], "Ap": [...], "B": [...], "Bp": [...]}` in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasurementSetup {
    #[serde(rename = "A")]
    pub a0: Observable,
    #[serde(rename = "Ap")]
    pub a1: Observable,
    #[serde(rename = "B")]
    pub b0: Observable,
    #[serde(rename = "Bp")]
    pub b1: Observable,
}

impl MeasurementSetup {
    pub fn alice(&self, x: Bit) -> Observable {
        if x == Bit::ZERO {
            self.a0
        } else {
            self.a1
        }
    }

    pub fn bob(&self, y: Bit) -> Observable {
        if y == Bit::ZERO {
            self.b0
        } else {
            self.b1
        }
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}

fn kron(a: &Mat2, b: &Mat2) -> Mat4 {
    let mut out = [[ZERO; 4]; 4];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[2 * i + k][2 * j + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

fn trace_product<const N: usize>(a: &[[C; N]; N], b: &[[C; N]; N]) -> C {
    let mut t = ZERO;
    for i in 0..N {
        for k in 0..N {
            t += a[i][k] * b[k][i];
        }
    }
    t
}

/// Born rule `Tr(ρ_AB · P^{±} ⊗ P^{±})`.
pub fn joint_probability(
    state: &TwoQubitState,
    oa: &Observable,
    ob: &Observable,
    outcome_a: Outcome,
    outcome_b: Outcome,
) -> f64 {
    born(&state.density_matrices().rho_ab, oa, ob, outcome_a, outcome_b)
}

fn born(rho: &Mat4, oa: &Observable, ob: &Observable, sa: Outcome, sb: Outcome) -> f64 {
    trace_product(rho, &kron(&oa.projector(sa), &ob.projector(sb))).re
}

/// Trigonometric form of the joint probability:
/// `cos²β f_a² f_b² + sin²β g_a² g_b² + 2 cos β sin β f_a f_b g_a g_b cos(φ_a + φ_b − γ)`
/// with `(f, g) = (cos θ/2, sin θ/2)` for outcome +1 and `(sin θ/2, −cos θ/2)`
/// for −1.
pub fn closed_form_probability(
    state: &TwoQubitState,
    oa: &Observable,
    ob: &Observable,
    outcome_a: Outcome,
    outcome_b: Outcome,
) -> f64 {
    let fg = |o: &Observable, s: Outcome| {
        let (c, sn) = ((o.theta / 2.0).cos(), (o.theta / 2.0).sin());
        match s {
            Outcome::Plus => (c, sn),
            Outcome::Minus => (sn, -c),
        }
    };
    let (fa, ga) = fg(oa, outcome_a);
    let (fb, gb) = fg(ob, outcome_b);
    let (cb, sb) = (state.beta.cos(), state.beta.sin());
    cb * cb * fa * fa * fb * fb
        + sb * sb * ga * ga * gb * gb
        + 2.0 * cb * sb * fa * fb * ga * gb * (oa.phi + ob.phi - state.gamma).cos()
}

/// The box realized by measuring `setup` on `state`.
pub fn quantum_box(state: &TwoQubitState, setup: &MeasurementSetup) -> BipartiteBox {
    let rho = state.density_matrices().rho_ab;
    let mut p = [[0.0; 4]; 4];
    for x in Bit::ALL {
        for y in Bit::ALL {
            let (oa, ob) = (setup.alice(x), setup.bob(y));
            for a in Bit::ALL {
                for b in Bit::ALL {
                    p[pair_index(x, y)][pair_index(a, b)] =
                        born(&rho, &oa, &ob, Outcome::from_bit(a), Outcome::from_bit(b)).max(0.0);
                }
            }
        }
    }
    for row in p.iter_mut() {
        let s: f64 = row.iter().sum();
        for v in row.iter_mut() {
            *v /= s;
        }
    }
    BipartiteBox::from_rows_unchecked(p)
}

/// Whether `obs` has equiprobable outcomes on the reduced state. Both
/// reduced states equal `½[I + cos 2β σ_z]`, so the answer is the same on
/// either side.
pub fn is_observable_random(state: &TwoQubitState, obs: &Observable) -> bool {
    let rho_a = state.density_matrices().rho_a;
    let plus = trace_product(&rho_a, &obs.projector(Outcome::Plus)).re;
    let minus = trace_product(&rho_a, &obs.projector(Outcome::Minus)).re;
    (plus - minus).abs() <= 1e-12
}

/// Values of the three Hardy zero conditions and the success probability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HardyResiduals {
    /// `P(A=+1, B=+1)`
    pub r15: f64,
    /// `P(A=−1, B′=−1)`
    pub r16: f64,
    /// `P(A′=−1, B=−1)`
    pub r17: f64,
    /// `P(A′=−1, B′=−1)`
    pub p18: f64,
}

impl HardyResiduals {
    pub fn max_residual(&self) -> f64 {
        self.r15.max(self.r16).max(self.r17)
    }

    pub fn runs(&self, tol: f64) -> bool {
        self.max_residual() <= tol && self.p18 > tol
    }
}

pub fn hardy_residuals(state: &TwoQubitState, setup: &MeasurementSetup) -> HardyResiduals {
    use Outcome::{Minus, Plus};
    HardyResiduals {
        r15: closed_form_probability(state, &setup.a0, &setup.b0, Plus, Plus),
        r16: closed_form_probability(state, &setup.a0, &setup.b1, Minus, Minus),
        r17: closed_form_probability(state, &setup.a1, &setup.b0, Minus, Minus),
        p18: closed_form_probability(state, &setup.a1, &setup.b1, Minus, Minus),
    }
}

/// `¼(1 + sin 2β cos δ)`: any of the three zero conditions when both of its
/// observables lie in the equatorial plane, `δ = φ + φ′ − γ`.
pub fn reduced_zero_condition(beta: f64, delta_phi: f64) -> f64 {
    0.25 * (1.0 + (2.0 * beta).sin() * delta_phi.cos())
}

/// A pair of observables, one per party, whose joint local randomness is
/// tested against the Hardy zero condition linking them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RandomPair {
    /// `A, B`: zero condition `P(A=+1, B=+1) = 0`.
    AB,
    /// `A, B′`: `P(A=−1, B′=−1) = 0`.
    ABp,
    /// `A′, B`: `P(A′=−1, B=−1) = 0`.
    ApB,
}

impl RandomPair {
    pub const ALL: [RandomPair; 3] = [RandomPair::AB, RandomPair::ABp, RandomPair::ApB];
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InfeasibilityCertificate {
    pub pair: RandomPair,
    pub beta_points: usize,
    pub phase_points: usize,
    /// Minimum of the zero condition over the grid.
    pub grid_min: f64,
    /// `β` of the grid point closest to maximal entanglement.
    pub worst_beta: f64,
    /// `¼(1 − |sin 2β|)` at `worst_beta`.
    pub lower_bound: f64,
    /// Largest gap between the full closed form and the reduced form.
    pub reduction_error: f64,
    /// Largest gap between the value at `cos δ = −1` and `¼(1 − |sin 2β|)`.
    pub attainment_error: f64,
    pub valid: bool,
}

/// Evaluates the zero condition tied to `pair` with both observables at
/// `θ = π/2` over a grid of `β ∈ (0, π/2)` (offset so `π/4` is never hit)
/// and of `δ ∈ [−π, π)`.
pub fn two_random_infeasibility(pair: RandomPair, beta_points: usize, phase_points: usize) -> InfeasibilityCertificate {
    let equatorial = |phi: f64| Observable::new(FRAC_PI_2, phi);
    let generic = Observable::new(1.0, 0.3);
    let mut grid_min = f64::INFINITY;
    let mut worst_beta = f64::NAN;
    let mut lower_bound = f64::INFINITY;
    let mut reduction_error: f64 = 0.0;
    let mut attainment_error: f64 = 0.0;
    for i in 0..beta_points {
        let beta = (i as f64 + 0.5) * FRAC_PI_2 / beta_points as f64;
        let state = TwoQubitState { beta, gamma: 0.0 };
        let bound = 0.25 * (1.0 - (2.0 * beta).sin().abs());
        for k in 0..phase_points {
            let delta = -PI + 2.0 * PI * k as f64 / phase_points as f64;
            let setup = match pair {
                RandomPair::AB => {
                    MeasurementSetup { a0: equatorial(delta), a1: generic, b0: equatorial(0.0), b1: generic }
                }
                RandomPair::ABp => {
                    MeasurementSetup { a0: equatorial(delta), a1: generic, b0: generic, b1: equatorial(0.0) }
                }
                RandomPair::ApB => {
                    MeasurementSetup { a0: generic, a1: equatorial(delta), b0: equatorial(0.0), b1: generic }
                }
            };
            let r = hardy_residuals(&state, &setup);
            let value = match pair {
                RandomPair::AB => r.r15,
                RandomPair::ABp => r.r16,
                RandomPair::ApB => r.r17,
            };
            reduction_error = reduction_error.max((value - reduced_zero_condition(beta, delta)).abs());
            if k == 0 {
                attainment_error = attainment_error.max((value - bound).abs());
            }
            if value < grid_min {
                grid_min = value;
            }
            if bound < lower_bound {
                lower_bound = bound;
                worst_beta = beta;
            }
        }
    }
    InfeasibilityCertificate {
        pair,
        beta_points,
        phase_points,
        grid_min,
        worst_beta,
        lower_bound,
        reduction_error,
        attainment_error,
        valid: grid_min > 0.0
            && grid_min >= lower_bound - 1e-12
            && reduction_error <= 1e-12
            && attainment_error <= 1e-12,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PaperExample {
    pub state: TwoQubitState,
    pub setup: MeasurementSetup,
    pub residuals: HardyResiduals,
    pub classification: InputSet,
    pub ic: IcVerdict,
}

/// The setup `β = π/6, γ = π`; `A = (π/2, π)`, `A′ = (2 arctan(tan²(π/6)), −π)`,
/// `B = (2π/3, π)`, `B′ = (π/3, −π)`, with its residuals, classification and
/// IC verdict.
pub fn paper_example() -> PaperExample {
    let state = TwoQubitState { beta: PI / 6.0, gamma: PI };
    // φ = −π is kept literally; the trigonometric forms do not care.
    let setup = MeasurementSetup {
        a0: Observable { theta: FRAC_PI_2, phi: PI },
        a1: Observable { theta: 2.0 * (PI / 6.0).tan().powi(2).atan(), phi: -PI },
        b0: Observable { theta: 2.0 * PI / 3.0, phi: PI },
        b1: Observable { theta: PI / 3.0, phi: -PI },
    };
    example_report(state, setup)
}

pub fn example_report(state: TwoQubitState, setup: MeasurementSetup) -> PaperExample {
    let bx = quantum_box(&state, &setup);
    PaperExample {
        state,
        setup,
        residuals: hardy_residuals(&state, &setup),
        classification: classify(&bx, DEFAULT_TOL),
        ic: satisfies_ic_necessary(&bx, DEFAULT_TOL),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantumSearch {
    pub starts: usize,
    pub seed: u64,
    /// Evaluation budget of each simplex run.
    pub iterations: usize,
    /// Weight on the summed zero-condition probabilities.
    pub penalty: f64,
}

impl Default for QuantumSearch {
    fn default() -> Self {
        Self { starts: 64, seed: 7, iterations: 40_000, penalty: 1e6 }
    }
}

/// Residual level above which the optimizer flags a convergence warning.
pub const FEASIBILITY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantumOptimum {
    pub state: TwoQubitState,
    pub setup: MeasurementSetup,
    pub p_star: f64,
    pub residuals: HardyResiduals,
    pub start_index: usize,
    /// False when the best point's residuals exceed [`FEASIBILITY_TOL`].
    pub converged: bool,
    pub classification: InputSet,
}

fn unpack(x: &[f64]) -> (TwoQubitState, MeasurementSetup) {
    let obs = |i: usize| Observable::from_direction(x[i], x[i + 1]);
    (TwoQubitState::canonical(x[0], x[1]), MeasurementSetup { a0: obs(2), a1: obs(4), b0: obs(6), b1: obs(8) })
}

/// Maximizes the Hardy success probability over pure two-qubit states and
/// projective measurements by penalized Nelder–Mead from seeded random starts.
///
/// The zero conditions are probabilities, i.e. squared amplitudes, so the
/// penalty `penalty · (r15 + r16 + r17)` is quadratic in the amplitude
/// residuals. Each start runs the simplex repeatedly with shrinking initial
/// steps until the value stops improving.
pub fn max_quantum_hardy(search: &QuantumSearch) -> QuantumOptimum {
    let penalty = search.penalty;
    let objective = move |x: &[f64]| {
        let (state, setup) = unpack(x);
        let r = hardy_residuals(&state, &setup);
        -r.p18 + penalty * (r.r15 + r.r16 + r.r17)
    };

    let runs: Vec<(usize, Vec<f64>)> = (0..search.starts)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(search.seed);
            rng.set_stream(k as u64);
            let mut x: Vec<f64> = vec![rng.gen_range(0.0..FRAC_PI_2), rng.gen_range(-PI..PI)];
            for _ in 0..4 {
                x.push(rng.gen_range(0.0..PI));
                x.push(rng.gen_range(-PI..PI));
            }
            let mut value = objective(&x);
            for step in [0.5, 0.1, 0.02, 0.005, 0.001] {
                let nm = NelderMead { max_evals: search.iterations, f_tol: 1e-16, initial_step: step };
                let m = nm.minimize(objective, &x);
                if m.value < value {
                    x = m.x;
                    value = m.value;
                }
            }
            (k, x)
        })
        .collect();

    let candidates: Vec<QuantumOptimum> = runs
        .into_iter()
        .map(|(k, x)| {
            let (state, setup) = unpack(&x);
            let residuals = hardy_residuals(&state, &setup);
            QuantumOptimum {
                state,
                setup,
                p_star: residuals.p18,
                residuals,
                start_index: k,
                converged: residuals.max_residual() <= FEASIBILITY_TOL,
                classification: classify(&quantum_box(&state, &setup), DEFAULT_TOL),
            }
        })
        .collect();

    // Feasible points first, then larger p18, then earlier start.
    candidates
        .into_iter()
        .reduce(|best, c| {
            let better = match (c.converged, best.converged) {
                (true, false) => true,
                (false, true) => false,
                (true, true) => c.p_star > best.p_star,
                (false, false) => c.residuals.max_residual() < best.residuals.max_residual(),
            };
            if better {
                c
            } else {
                best
            }
        })
        .expect("at least one start")
}

/// Best known two-qubit Hardy probability, `(5√5 − 11)/2`.
pub fn known_quantum_maximum() -> f64 {
    (5.0 * 5f64.sqrt() - 11.0) / 2.0
}
