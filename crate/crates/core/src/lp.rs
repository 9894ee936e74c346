//! Dense two-phase simplex for small linear programs in standard form
//!
//! ```text
//! minimize c·x  subject to  A x = b,  x ≥ 0
//! ```
//!
//! Pivoting follows Bland's rule (lowest eligible index enters and leaves),
//! so the method cannot cycle. Problems handled here have at most a few dozen
//! variables; no attempt is made at sparsity or numerical refactorization.

use crate::error::{Error, Result};

const PIVOT_EPS: f64 = 1e-12;
const MAX_PIVOTS: usize = 10_000;

/// A linear program `min c·x` subject to `A x = b`, `x ≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub constraints: Vec<Vec<f64>>,
    pub rhs: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal {
        x: Vec<f64>,
        value: f64,
    },
    /// Phase one could not drive the total constraint residual below the
    /// feasibility tolerance. `residual` is that minimal L1 residual.
    Infeasible {
        residual: f64,
    },
    Unbounded,
}

impl LinearProgram {
    pub fn new(objective: Vec<f64>) -> Self {
        Self { objective, constraints: Vec::new(), rhs: Vec::new() }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    /// Adds the equality `row · x = rhs`.
    pub fn equality(&mut self, row: Vec<f64>, rhs: f64) -> &mut Self {
        assert_eq!(row.len(), self.num_vars(), "constraint width mismatch");
        self.constraints.push(row);
        self.rhs.push(rhs);
        self
    }

    /// Solves the program. A point counts as feasible when the minimal total
    /// absolute constraint residual found in phase one is at most `feas_tol`.
    pub fn solve(&self, feas_tol: f64) -> Result<LpOutcome> {
        let m = self.constraints.len();
        let n = self.num_vars();
        // Columns: n structural, m artificial, then rhs.
        let width = n + m + 1;
        let mut t = vec![vec![0.0; width]; m];
        for (i, (row, &b)) in self.constraints.iter().zip(&self.rhs).enumerate() {
            let sign = if b < 0.0 { -1.0 } else { 1.0 };
            for j in 0..n {
                t[i][j] = sign * row[j];
            }
            t[i][n + i] = 1.0;
            t[i][width - 1] = sign * b;
        }
        let mut basis: Vec<usize> = (n..n + m).collect();

        // Phase one: minimize the sum of artificials.
        let mut phase1 = vec![0.0; n + m];
        for c in phase1.iter_mut().skip(n) {
            *c = 1.0;
        }
        let mut pivots = 0;
        match run_simplex(&mut t, &mut basis, &phase1, n + m, &mut pivots)? {
            Phase::Optimal => {}
            Phase::Unbounded => unreachable!("phase one objective is bounded below by zero"),
        }
        let residual: f64 = basis.iter().enumerate().filter(|(_, &j)| j >= n).map(|(i, _)| t[i][width - 1]).sum();
        if residual > feas_tol {
            return Ok(LpOutcome::Infeasible { residual });
        }

        // Drive remaining artificials out of the basis; rows where that is
        // impossible are linearly dependent and get dropped.
        let mut i = 0;
        while i < t.len() {
            if basis[i] >= n {
                match (0..n).find(|&j| t[i][j].abs() > 1e-9) {
                    Some(j) => {
                        pivot(&mut t, i, j);
                        basis[i] = j;
                        pivots += 1;
                    }
                    None => {
                        t.remove(i);
                        basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }

        // Phase two over structural columns only.
        let mut phase2 = self.objective.clone();
        phase2.extend(std::iter::repeat_n(0.0, m));
        match run_simplex(&mut t, &mut basis, &phase2, n, &mut pivots)? {
            Phase::Unbounded => Ok(LpOutcome::Unbounded),
            Phase::Optimal => {
                let mut x = vec![0.0; n];
                for (i, &j) in basis.iter().enumerate() {
                    if j < n {
                        x[j] = t[i][width - 1].max(0.0);
                    }
                }
                let value = x.iter().zip(&self.objective).map(|(a, c)| a * c).sum();
                Ok(LpOutcome::Optimal { x, value })
            }
        }
    }
}

enum Phase {
    Optimal,
    Unbounded,
}

fn pivot(t: &mut [Vec<f64>], row: usize, col: usize) {
    let width = t[row].len();
    let p = t[row][col];
    for v in t[row].iter_mut() {
        *v /= p;
    }
    let pivot_row = t[row].clone();
    for (i, r) in t.iter_mut().enumerate() {
        if i == row {
            continue;
        }
        let f = r[col];
        if f != 0.0 {
            for k in 0..width {
                r[k] -= f * pivot_row[k];
            }
            r[col] = 0.0;
        }
    }
}

/// Bland's-rule simplex on the tableau; only columns `< allowed` may enter.
fn run_simplex(
    t: &mut [Vec<f64>],
    basis: &mut [usize],
    cost: &[f64],
    allowed: usize,
    pivots: &mut usize,
) -> Result<Phase> {
    let width = t.first().map_or(0, Vec::len);
    loop {
        if *pivots > MAX_PIVOTS {
            return Err(Error::LpNotConverged(*pivots));
        }
        // Reduced cost of column j: c_j - c_B · B^{-1} A_j.
        let entering = (0..allowed).find(|&j| {
            if basis.contains(&j) {
                return false;
            }
            let reduced = cost[j] - basis.iter().enumerate().map(|(i, &bj)| cost[bj] * t[i][j]).sum::<f64>();
            reduced < -PIVOT_EPS
        });
        let Some(col) = entering else {
            return Ok(Phase::Optimal);
        };
        let mut leaving: Option<(usize, f64)> = None;
        for (i, row) in t.iter().enumerate() {
            if row[col] > PIVOT_EPS {
                let ratio = row[width - 1] / row[col];
                leaving = match leaving {
                    None => Some((i, ratio)),
                    Some((li, lr)) => {
                        if ratio < lr - PIVOT_EPS || (ratio <= lr + PIVOT_EPS && basis[i] < basis[li]) {
                            Some((i, ratio))
                        } else {
                            Some((li, lr))
                        }
                    }
                };
            }
        }
        let Some((row, _)) = leaving else {
            return Ok(Phase::Unbounded);
        };
        pivot(t, row, col);
        basis[row] = col;
        *pivots += 1;
    }
}
