//! Reference computations that do not share code paths with the library.
#![allow(dead_code)]

use num_complex::Complex64 as C;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// IC feasibility written directly as `E1² + E2² ≤ 1` in both orientations,
/// with `E1 = s − 1`, `E2 = −(s + c6)` read off the Hardy matrix.
fn ic_feasible(c2: f64, c4: f64, c5: f64, c6: f64) -> bool {
    let ok = |u: f64| (u - 1.0).powi(2) + (u + c6).powi(2) <= 1.0;
    ok(c4 + c5) && ok(c2 + c5)
}

/// Largest feasible `c6` for fixed `(c2, c4, c5)` by bisection, with the
/// simplex cap `c6 ≤ 1 − c2 − c4 − c5`.
fn max_c6(c2: f64, c4: f64, c5: f64) -> f64 {
    let cap = 1.0 - c2 - c4 - c5;
    if cap < 0.0 {
        return -1.0;
    }
    if ic_feasible(c2, c4, c5, cap) {
        return cap;
    }
    if !ic_feasible(c2, c4, c5, 0.0) {
        return -1.0;
    }
    let (mut lo, mut hi) = (0.0, cap);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if ic_feasible(c2, c4, c5, mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Brute-force maximum of `c6/2` under the IC condition: a full grid over
/// `(c2, c4, c5)` at step 1e-2, then a 1e-3 grid over a ±2e-2 box around the
/// best coarse point. Returns `(q, [c2, c4, c5, c6])`.
pub fn ic_dense_grid_oracle() -> (f64, [f64; 4]) {
    let mut best = (-1.0, [0.0; 4]);
    fn consider(best: &mut (f64, [f64; 4]), c2: f64, c4: f64, c5: f64) {
        let c6 = max_c6(c2, c4, c5);
        if c6 > best.0 {
            *best = (c6, [c2, c4, c5, c6]);
        }
    }
    let n = 100;
    for i in 0..=n {
        for j in 0..=(n - i) {
            for k in 0..=(n - i - j) {
                consider(&mut best, i as f64 / n as f64, j as f64 / n as f64, k as f64 / n as f64);
            }
        }
    }
    let centre = best.1;
    let step = 1e-3;
    for i in -20..=20 {
        for j in -20..=20 {
            for k in -20..=20 {
                let (c2, c4, c5) =
                    (centre[0] + i as f64 * step, centre[1] + j as f64 * step, centre[2] + k as f64 * step);
                if c2 >= 0.0 && c4 >= 0.0 && c5 >= 0.0 {
                    consider(&mut best, c2, c4, c5);
                }
            }
        }
    }
    (best.0 / 2.0, best.1)
}

/// `P(A=+1,B=+1)` etc. transcribed term by term from the trigonometric
/// Hardy equations. `(β, γ)` state; observables as `(θ, φ)`.
pub fn eq15(b: f64, g: f64, a: (f64, f64), bb: (f64, f64)) -> f64 {
    let (ta, pa) = a;
    let (tb, pb) = bb;
    b.cos().powi(2) * (ta / 2.0).cos().powi(2) * (tb / 2.0).cos().powi(2)
        + b.sin().powi(2) * (ta / 2.0).sin().powi(2) * (tb / 2.0).sin().powi(2)
        + 2.0
            * b.cos()
            * b.sin()
            * (ta / 2.0).sin()
            * (tb / 2.0).sin()
            * (ta / 2.0).cos()
            * (tb / 2.0).cos()
            * (pa + pb - g).cos()
}

/// Shared form of the three `(−1, −1)` equations.
pub fn eq_minus_minus(b: f64, g: f64, a: (f64, f64), bb: (f64, f64)) -> f64 {
    let (ta, pa) = a;
    let (tb, pb) = bb;
    b.cos().powi(2) * (ta / 2.0).sin().powi(2) * (tb / 2.0).sin().powi(2)
        + b.sin().powi(2) * (ta / 2.0).cos().powi(2) * (tb / 2.0).cos().powi(2)
        + 2.0
            * b.cos()
            * b.sin()
            * (ta / 2.0).sin()
            * (tb / 2.0).sin()
            * (ta / 2.0).cos()
            * (tb / 2.0).cos()
            * (pa + pb - g).cos()
}

fn normalize(v: [C; 2]) -> Option<[C; 2]> {
    let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    (n > 1e-12).then(|| [v[0] / n, v[1] / n])
}

fn orthogonal(v: [C; 2]) -> [C; 2] {
    [-v[1].conj(), v[0].conj()]
}

/// Hardy probability of the unique setup forced by the zero conditions once
/// the state and Alice's `A` are fixed:
/// - `B`'s −1 eigenvector is Bob's conditional state after `A = +1`,
/// - `B′`'s +1 eigenvector is Bob's conditional state after `A = −1`,
/// - `A′`'s +1 eigenvector is Alice's conditional state after `B = −1`.
///
/// Everything is computed with state vectors, no trigonometric formulas.
pub fn forced_hardy_probability(beta: f64, gamma: f64, theta: f64, phi: f64) -> Option<f64> {
    let psi = [C::new(beta.cos(), 0.0), C::new(0.0, 0.0), C::new(0.0, 0.0), C::from_polar(beta.sin(), gamma)];
    let a_plus = [C::new((theta / 2.0).cos(), 0.0), C::from_polar((theta / 2.0).sin(), phi)];
    let a_minus = orthogonal(a_plus);
    // Bob's conditional (unnormalized) vector after Alice projects on u.
    let bob_given =
        |u: [C; 2]| [u[0].conj() * psi[0] + u[1].conj() * psi[2], u[0].conj() * psi[1] + u[1].conj() * psi[3]];
    let alice_given =
        |v: [C; 2]| [v[0].conj() * psi[0] + v[1].conj() * psi[1], v[0].conj() * psi[2] + v[1].conj() * psi[3]];
    let b_minus = normalize(bob_given(a_plus))?;
    let bp_plus = normalize(bob_given(a_minus))?;
    let ap_plus = normalize(alice_given(b_minus))?;
    let ap_minus = orthogonal(ap_plus);
    let bp_minus = orthogonal(bp_plus);
    let mut amp = C::new(0.0, 0.0);
    for i in 0..2 {
        for k in 0..2 {
            amp += ap_minus[i].conj() * bp_minus[k].conj() * psi[2 * i + k];
        }
    }
    Some(amp.norm_sqr())
}

/// Seeded random search over `(β, γ, θ_A, φ_A)` followed by a compass
/// search polish of the best few points.
pub fn quantum_hardy_oracle(samples: usize, seed: u64) -> f64 {
    use std::f64::consts::PI;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = |x: &[f64; 4]| forced_hardy_probability(x[0], x[1], x[2], x[3]).unwrap_or(0.0);
    let mut top: Vec<(f64, [f64; 4])> = Vec::new();
    for _ in 0..samples {
        let x = [rng.gen_range(0.0..PI / 2.0), rng.gen_range(-PI..PI), rng.gen_range(0.0..PI), rng.gen_range(-PI..PI)];
        let v = f(&x);
        if top.len() < 8 || v > top[top.len() - 1].0 {
            top.push((v, x));
            top.sort_by(|a, b| b.0.total_cmp(&a.0));
            top.truncate(8);
        }
    }
    let mut best: f64 = 0.0;
    for (mut v, mut x) in top {
        let mut step = 0.05;
        while step > 1e-10 {
            let mut improved = false;
            for d in 0..4 {
                for sgn in [1.0, -1.0] {
                    let mut y = x;
                    y[d] += sgn * step;
                    let fy = f(&y);
                    if fy > v {
                        v = fy;
                        x = y;
                        improved = true;
                    }
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        best = best.max(v);
    }
    best
}
