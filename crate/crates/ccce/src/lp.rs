//! Dense linear programming with primal and dual certificates.
//!
//! The problems this crate generates are small (tens of rows, a few hundred
//! columns), so a two-phase revised simplex on dense storage is used: it
//! yields exact basic duals — which downstream sensitivity analysis consumes
//! directly — with no external dependency. Pricing is Dantzig's rule with a
//! switch to Bland's rule after `3 * (rows + cols)` iterations as an
//! anti-cycling fallback.
//!
//! Dual sign convention (documented once, here): inequality duals `lambda`
//! are reported for the Lagrangian `c'x + lambda'(Ax - b)` of a minimization
//! with `Ax <= b`, so `lambda >= 0` and the optimal value responds to a
//! right-hand-side change as `dJ*/db_r = -lambda_r`. Relaxing a binding row
//! (raising `b_r`) can only lower the optimum. Reduced costs are
//! `c_j + lambda'A_j + nu'E_j >= 0` at optimality, with `nu` the free-signed
//! equality duals under the same convention.

use thiserror::Error;

/// Primal feasibility tolerance: `A x <= b + FEAS_TOL` row-wise and
/// `|E x - e| <= FEAS_TOL` for equalities.
pub const FEAS_TOL: f64 = 1e-8;
/// Non-negative variables may sit this far below zero.
pub const VAR_LOWER_TOL: f64 = 1e-9;
/// Dual feasibility tolerance on reduced costs.
pub const REDUCED_COST_TOL: f64 = 1e-8;
/// Complementary slackness tolerance, per inequality row.
pub const COMPL_SLACK_TOL: f64 = 1e-7;
/// Duality gap tolerance, scaled by `1 + |objective|`.
pub const GAP_TOL: f64 = 1e-8;
/// A basic variable within this of its bound marks the optimum degenerate
/// (duals may then be non-unique).
pub const DEGENERACY_TOL: f64 = 1e-9;

// Pivot-element thresholds are relative to the largest entry of the
// current direction vector: what counts as "numerically zero" scales with
// the data, and admitting a pivot far below the direction scale inflates
// the eta factors (and the basis condition number) by the same factor.
const PIVOT_REL_TOL: f64 = 1e-9;
const PIVOT_ABS_FLOOR: f64 = 1e-12;
const SMALL_PIVOT_REL: f64 = 1e-7;
const SMALL_PIVOT_REL_CONSERVATIVE: f64 = 1e-6;
const RC_TOL: f64 = 1e-9;
const PHASE1_TOL: f64 = 1e-7;
const REFACTOR_EVERY: u64 = 64;

#[derive(Debug, Error)]
pub enum LpError {
    #[error("inconsistent dimensions: {0}")]
    Shape(String),
    #[error("iteration limit of {limit} exceeded (numerical failure, not infeasibility)")]
    IterationLimit { limit: u64 },
    #[error("basis matrix became singular during refactorization")]
    SingularBasis,
}

/// `minimize objective . x` subject to `ineq_matrix x <= ineq_rhs`,
/// `eq_matrix x = eq_rhs`, and `x >= 0` when `nonneg` is set (all variables
/// free otherwise).
#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub ineq_matrix: Vec<Vec<f64>>,
    pub ineq_rhs: Vec<f64>,
    pub eq_matrix: Vec<Vec<f64>>,
    pub eq_rhs: Vec<f64>,
    pub nonneg: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Solver output. Primal and dual vectors are populated only when
/// `status == Optimal`; see the module docs for the dual sign convention.
#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    pub primal: Vec<f64>,
    pub objective_value: f64,
    /// One multiplier per inequality row, `>= 0`.
    pub ineq_duals: Vec<f64>,
    /// One free-signed multiplier per equality row.
    pub eq_duals: Vec<f64>,
    /// True when some basic variable sits at its bound; shadow prices may
    /// then be one-sided.
    pub degenerate: bool,
    pub iterations: u64,
}

impl LinearProgram {
    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    fn validate(&self) -> Result<(), LpError> {
        let n = self.num_vars();
        if self.ineq_matrix.len() != self.ineq_rhs.len() {
            return Err(LpError::Shape(format!(
                "{} inequality rows vs {} right-hand sides",
                self.ineq_matrix.len(),
                self.ineq_rhs.len()
            )));
        }
        if self.eq_matrix.len() != self.eq_rhs.len() {
            return Err(LpError::Shape(format!(
                "{} equality rows vs {} right-hand sides",
                self.eq_matrix.len(),
                self.eq_rhs.len()
            )));
        }
        for (r, row) in self.ineq_matrix.iter().chain(&self.eq_matrix).enumerate() {
            if row.len() != n {
                return Err(LpError::Shape(format!(
                    "row {r} has {} coefficients for {n} variables",
                    row.len()
                )));
            }
        }
        let finite = self
            .objective
            .iter()
            .chain(self.ineq_rhs.iter())
            .chain(self.eq_rhs.iter())
            .chain(self.ineq_matrix.iter().flatten())
            .chain(self.eq_matrix.iter().flatten())
            .all(|v| v.is_finite());
        if !finite {
            return Err(LpError::Shape("non-finite coefficient".into()));
        }
        Ok(())
    }
}

/// Solve with an iteration budget scaled to the problem size.
pub fn solve(lp: &LinearProgram) -> Result<LpSolution, LpError> {
    let size = lp.ineq_rhs.len() + lp.eq_rhs.len() + lp.num_vars();
    solve_with_limit(lp, 20_000 + 100 * size as u64)
}

pub fn solve_with_limit(lp: &LinearProgram, max_iter: u64) -> Result<LpSolution, LpError> {
    lp.validate()?;
    let std = Standardized::build(lp);
    match two_phase(lp, &std, max_iter, false) {
        // Numerically hard instances (near-parallel constraint rows) can
        // defeat the fast path; retry with Bland's rule and an exact
        // inverse at every step before giving up.
        Err(LpError::SingularBasis) | Err(LpError::IterationLimit { .. }) => {
            two_phase(lp, &std, max_iter, true)
        }
        other => other,
    }
}

fn two_phase(
    lp: &LinearProgram,
    std: &Standardized,
    max_iter: u64,
    conservative: bool,
) -> Result<LpSolution, LpError> {
    let mut state = SimplexState::new(std, conservative);

    // Phase 1: minimize the sum of artificial variables.
    if std.num_artificial > 0 {
        let phase1_cost: Vec<f64> = (0..std.ncols)
            .map(|j| if j >= std.artificial_start { 1.0 } else { 0.0 })
            .collect();
        let banned = vec![false; std.ncols];
        match state.run(std, &phase1_cost, &banned, max_iter)? {
            RunOutcome::Optimal => {}
            // The phase-1 objective is bounded below by zero.
            RunOutcome::Unbounded => return Err(LpError::SingularBasis),
        }
        let residual: f64 = state
            .basic_values(&std)
            .iter()
            .zip(&state.basis)
            .filter(|(_, &col)| col >= std.artificial_start)
            .map(|(v, _)| v.max(0.0))
            .sum();
        if residual > PHASE1_TOL {
            // Columns shelved as numerically dependent cast doubt on the
            // residual: treat the run as a numerical failure (retried in
            // conservative mode) rather than a proof of infeasibility.
            if state.shelved {
                return Err(LpError::SingularBasis);
            }
            return Ok(LpSolution {
                status: LpStatus::Infeasible,
                primal: Vec::new(),
                objective_value: f64::NAN,
                ineq_duals: Vec::new(),
                eq_duals: Vec::new(),
                degenerate: false,
                iterations: state.iterations,
            });
        }
        state.drive_out_artificials(std);
    }

    // Phase 2: the original objective, artificial columns banned.
    let banned: Vec<bool> = (0..std.ncols).map(|j| j >= std.artificial_start).collect();
    let outcome = state.run(std, &std.phase2_cost, &banned, max_iter)?;
    if let RunOutcome::Unbounded = outcome {
        return Ok(LpSolution {
            status: LpStatus::Unbounded,
            primal: Vec::new(),
            objective_value: f64::NEG_INFINITY,
            ineq_duals: Vec::new(),
            eq_duals: Vec::new(),
            degenerate: false,
            iterations: state.iterations,
        });
    }

    Ok(state.extract(lp, std))
}

/// Certificate checks for an optimal solution: primal feasibility, dual
/// feasibility via reduced costs, complementary slackness, and the duality
/// gap, each at the tolerance constants above. Returns a description of the
/// first violated condition.
pub fn check_certificates(lp: &LinearProgram, sol: &LpSolution) -> Result<(), String> {
    if sol.status != LpStatus::Optimal {
        return Err("certificates apply only to optimal solutions".into());
    }
    let n = lp.num_vars();
    if sol.primal.len() != n {
        return Err(format!("primal length {} != {n}", sol.primal.len()));
    }
    if lp.nonneg {
        for (j, &x) in sol.primal.iter().enumerate() {
            if x < -VAR_LOWER_TOL {
                return Err(format!("variable {j} = {x} below -{VAR_LOWER_TOL}"));
            }
        }
    }
    let mut slacks = Vec::with_capacity(lp.ineq_rhs.len());
    for (r, (row, &b)) in lp.ineq_matrix.iter().zip(&lp.ineq_rhs).enumerate() {
        let ax: f64 = row.iter().zip(&sol.primal).map(|(a, x)| a * x).sum();
        if ax > b + FEAS_TOL {
            return Err(format!("inequality row {r}: {ax} > {b} + {FEAS_TOL}"));
        }
        slacks.push(b - ax);
    }
    for (r, (row, &b)) in lp.eq_matrix.iter().zip(&lp.eq_rhs).enumerate() {
        let ax: f64 = row.iter().zip(&sol.primal).map(|(a, x)| a * x).sum();
        if (ax - b).abs() > FEAS_TOL {
            return Err(format!("equality row {r}: |{ax} - {b}| > {FEAS_TOL}"));
        }
    }
    for (r, &l) in sol.ineq_duals.iter().enumerate() {
        if l < 0.0 {
            return Err(format!("inequality dual {r} = {l} negative"));
        }
    }
    // Reduced costs: c_j + lambda' A_j + nu' E_j.
    for j in 0..n {
        let mut rc = lp.objective[j];
        for (row, &l) in lp.ineq_matrix.iter().zip(&sol.ineq_duals) {
            rc += l * row[j];
        }
        for (row, &nu) in lp.eq_matrix.iter().zip(&sol.eq_duals) {
            rc += nu * row[j];
        }
        if rc < -REDUCED_COST_TOL {
            return Err(format!("reduced cost of variable {j} is {rc}"));
        }
        if !lp.nonneg && rc.abs() > REDUCED_COST_TOL {
            return Err(format!("free variable {j} has nonzero reduced cost {rc}"));
        }
    }
    for (r, (&l, &s)) in sol.ineq_duals.iter().zip(&slacks).enumerate() {
        if (l * s).abs() > COMPL_SLACK_TOL {
            return Err(format!(
                "complementary slackness violated on row {r}: lambda={l}, slack={s}"
            ));
        }
    }
    let dual_obj: f64 = -sol
        .ineq_duals
        .iter()
        .zip(&lp.ineq_rhs)
        .map(|(l, b)| l * b)
        .sum::<f64>()
        - sol
            .eq_duals
            .iter()
            .zip(&lp.eq_rhs)
            .map(|(nu, b)| nu * b)
            .sum::<f64>();
    let gap = (sol.objective_value - dual_obj).abs();
    if gap > GAP_TOL * (1.0 + sol.objective_value.abs()) {
        return Err(format!(
            "duality gap {gap} (primal {}, dual {dual_obj})",
            sol.objective_value
        ));
    }
    Ok(())
}

/// The equality-standard form: all rows scaled to `b >= 0`, slacks appended
/// for inequalities, artificials for rows without a natural basic column,
/// free variables split into positive and negative parts.
struct Standardized {
    nrows: usize,
    ncols: usize,
    /// Row-major `nrows x ncols`.
    a: Vec<f64>,
    b: Vec<f64>,
    phase2_cost: Vec<f64>,
    artificial_start: usize,
    num_artificial: usize,
    /// +1/-1 applied to each original row (inequalities then equalities).
    row_sign: Vec<f64>,
    /// Initial basis column for each row.
    initial_basis: Vec<usize>,
    split: bool,
    nvars: usize,
}

impl Standardized {
    fn build(lp: &LinearProgram) -> Self {
        let nvars = lp.num_vars();
        let split = !lp.nonneg;
        let base = if split { 2 * nvars } else { nvars };
        let m_i = lp.ineq_rhs.len();
        let m_e = lp.eq_rhs.len();
        let nrows = m_i + m_e;
        let slack_start = base;
        let artificial_start = base + m_i;

        let mut row_sign = Vec::with_capacity(nrows);
        let mut num_artificial = 0;
        for &b in &lp.ineq_rhs {
            let sign: f64 = if b < 0.0 { -1.0 } else { 1.0 };
            if sign < 0.0 {
                num_artificial += 1;
            }
            row_sign.push(sign);
        }
        for &b in &lp.eq_rhs {
            row_sign.push(if b < 0.0 { -1.0 } else { 1.0 });
            num_artificial += 1;
        }

        let ncols = artificial_start + num_artificial;
        let mut a = vec![0.0; nrows * ncols];
        let mut b_std = vec![0.0; nrows];
        let mut initial_basis = vec![0usize; nrows];
        let mut next_art = artificial_start;

        let fill_vars = |a: &mut [f64], r: usize, row: &[f64], sign: f64| {
            for (v, &coef) in row.iter().enumerate() {
                a[r * ncols + v] = sign * coef;
                if split {
                    a[r * ncols + nvars + v] = -sign * coef;
                }
            }
        };

        for (r, (row, &b)) in lp.ineq_matrix.iter().zip(&lp.ineq_rhs).enumerate() {
            let sign = row_sign[r];
            fill_vars(&mut a, r, row, sign);
            a[r * ncols + slack_start + r] = sign;
            b_std[r] = sign * b;
            if sign > 0.0 {
                initial_basis[r] = slack_start + r;
            } else {
                a[r * ncols + next_art] = 1.0;
                initial_basis[r] = next_art;
                next_art += 1;
            }
        }
        for (e, (row, &b)) in lp.eq_matrix.iter().zip(&lp.eq_rhs).enumerate() {
            let r = m_i + e;
            let sign = row_sign[r];
            fill_vars(&mut a, r, row, sign);
            b_std[r] = sign * b;
            a[r * ncols + next_art] = 1.0;
            initial_basis[r] = next_art;
            next_art += 1;
        }

        let mut phase2_cost = vec![0.0; ncols];
        for (v, &c) in lp.objective.iter().enumerate() {
            phase2_cost[v] = c;
            if split {
                phase2_cost[nvars + v] = -c;
            }
        }

        Standardized {
            nrows,
            ncols,
            a,
            b: b_std,
            phase2_cost,
            artificial_start,
            num_artificial,
            row_sign,
            initial_basis,
            split,
            nvars,
        }
    }

    #[inline]
    fn col(&self, r: usize, j: usize) -> f64 {
        self.a[r * self.ncols + j]
    }
}

enum RunOutcome {
    Optimal,
    Unbounded,
}

struct SimplexState {
    basis: Vec<usize>,
    in_basis: Vec<bool>,
    /// Row-major `nrows x nrows` inverse of the basis matrix.
    binv: Vec<f64>,
    iterations: u64,
    pivots_since_refactor: u64,
    /// Hard-instance mode: Bland's rule throughout, the inverse rebuilt
    /// after every pivot, and a wider near-dependence margin.
    conservative: bool,
    /// Whether any column was shelved as numerically dependent. A run that
    /// shelved columns may not declare the problem infeasible.
    shelved: bool,
}

impl SimplexState {
    fn new(std: &Standardized, conservative: bool) -> Self {
        let nr = std.nrows;
        let mut in_basis = vec![false; std.ncols];
        for &c in &std.initial_basis {
            in_basis[c] = true;
        }
        let mut binv = vec![0.0; nr * nr];
        for r in 0..nr {
            binv[r * nr + r] = 1.0;
        }
        SimplexState {
            basis: std.initial_basis.clone(),
            in_basis,
            binv,
            iterations: 0,
            pivots_since_refactor: 0,
            conservative,
            shelved: false,
        }
    }

    fn basic_values(&self, std: &Standardized) -> Vec<f64> {
        let nr = std.nrows;
        (0..nr)
            .map(|r| (0..nr).map(|k| self.binv[r * nr + k] * std.b[k]).sum())
            .collect()
    }

    fn duals(&self, std: &Standardized, cost: &[f64]) -> Vec<f64> {
        let nr = std.nrows;
        let mut y = vec![0.0; nr];
        for (k, &col) in self.basis.iter().enumerate() {
            let cb = cost[col];
            if cb != 0.0 {
                for j in 0..nr {
                    y[j] += cb * self.binv[k * nr + j];
                }
            }
        }
        y
    }

    fn run(
        &mut self,
        std: &Standardized,
        cost: &[f64],
        banned: &[bool],
        max_iter: u64,
    ) -> Result<RunOutcome, LpError> {
        let nr = std.nrows;
        let nc = std.ncols;
        let bland_window = 3 * (nr + nc) as u64;
        let mut local: u64 = 0;
        // Columns whose directions proved numerically dependent on the
        // basis (no usable pivot from a fresh inverse); excluded for the
        // rest of the phase. A wrong exclusion would surface afterwards as
        // a reduced-cost certificate failure.
        let mut dependent = vec![false; nc];
        loop {
            if self.iterations >= max_iter {
                return Err(LpError::IterationLimit { limit: max_iter });
            }
            self.iterations += 1;
            local += 1;
            let refactor_every = if self.conservative { 1 } else { REFACTOR_EVERY };
            if self.pivots_since_refactor >= refactor_every {
                self.refactor(std)?;
            }

            let y = self.duals(std, cost);
            let use_bland = self.conservative || local > bland_window;
            let mut entering: Option<usize> = None;
            let mut best = -RC_TOL;
            for j in 0..nc {
                if self.in_basis[j] || banned[j] || dependent[j] {
                    continue;
                }
                let mut rc = cost[j];
                for (r, &yr) in y.iter().enumerate() {
                    rc -= yr * std.col(r, j);
                }
                if use_bland {
                    if rc < -RC_TOL {
                        entering = Some(j);
                        break;
                    }
                } else if rc < best {
                    best = rc;
                    entering = Some(j);
                }
            }
            let Some(q) = entering else {
                return Ok(RunOutcome::Optimal);
            };

            let d = self.direction(std, q);
            let dmax = d.iter().fold(0.0f64, |acc, &v| acc.max(v.abs()));
            let eligible = PIVOT_ABS_FLOOR.max(PIVOT_REL_TOL * dmax);
            let xb = self.basic_values(std);
            let mut leave: Option<usize> = None;
            let mut best_ratio = f64::INFINITY;
            for r in 0..nr {
                if d[r] > eligible {
                    let ratio = xb[r].max(0.0) / d[r];
                    let tol = 1e-10 * (1.0 + best_ratio.min(1e100));
                    // Ties (degenerate steps): Bland mode picks the smallest
                    // basis column to guarantee termination; otherwise the
                    // largest pivot element wins for numerical stability.
                    let better = match leave {
                        None => true,
                        Some(lr) => {
                            if ratio < best_ratio - tol {
                                true
                            } else if (ratio - best_ratio).abs() <= tol {
                                if use_bland {
                                    self.basis[r] < self.basis[lr]
                                } else {
                                    d[r] > d[lr]
                                }
                            } else {
                                false
                            }
                        }
                    };
                    if better {
                        leave = Some(r);
                        best_ratio = ratio;
                    }
                }
            }
            let Some(lr) = leave else {
                return Ok(RunOutcome::Unbounded);
            };
            // A near-zero pivot is either inverse drift masquerading as a
            // usable direction or a column nearly dependent on the basis.
            // Rebuild the inverse and re-price if drift is possible; from a
            // fresh inverse, shelve the column instead of pivoting on it.
            let small_rel = if self.conservative {
                SMALL_PIVOT_REL_CONSERVATIVE
            } else {
                SMALL_PIVOT_REL
            };
            if d[lr] < small_rel * dmax {
                if self.pivots_since_refactor > 0 {
                    self.refactor(std)?;
                } else {
                    dependent[q] = true;
                    self.shelved = true;
                }
                continue;
            }
            self.pivot(std, q, lr, &d);
        }
    }

    fn direction(&self, std: &Standardized, q: usize) -> Vec<f64> {
        let nr = std.nrows;
        (0..nr)
            .map(|r| (0..nr).map(|k| self.binv[r * nr + k] * std.col(k, q)).sum())
            .collect()
    }

    fn pivot(&mut self, _std: &Standardized, q: usize, lr: usize, d: &[f64]) {
        let nr = d.len();
        let piv = d[lr];
        for k in 0..nr {
            self.binv[lr * nr + k] /= piv;
        }
        for r in 0..nr {
            if r != lr && d[r] != 0.0 {
                let f = d[r];
                for k in 0..nr {
                    self.binv[r * nr + k] -= f * self.binv[lr * nr + k];
                }
            }
        }
        self.in_basis[self.basis[lr]] = false;
        self.in_basis[q] = true;
        self.basis[lr] = q;
        self.pivots_since_refactor += 1;
    }

    /// Rebuild the basis inverse from scratch (Gauss-Jordan with partial
    /// pivoting) to shed accumulated floating-point drift.
    fn refactor(&mut self, std: &Standardized) -> Result<(), LpError> {
        let nr = std.nrows;
        let mut m = vec![0.0; nr * nr]; // basis matrix
        for (k, &col) in self.basis.iter().enumerate() {
            for r in 0..nr {
                m[r * nr + k] = std.col(r, col);
            }
        }
        let mut inv = vec![0.0; nr * nr];
        for r in 0..nr {
            inv[r * nr + r] = 1.0;
        }
        // Singularity is judged relative to the basis scale: an
        // ill-conditioned but independent basis must still invert, or
        // near-duplicate constraint rows (tiny uncertainty terms) would be
        // misreported as infeasible problems.
        let scale = m.iter().fold(1.0f64, |acc, &v| acc.max(v.abs()));
        for c in 0..nr {
            let mut piv_row = c;
            let mut piv_val = m[c * nr + c].abs();
            for r in (c + 1)..nr {
                let v = m[r * nr + c].abs();
                if v > piv_val {
                    piv_val = v;
                    piv_row = r;
                }
            }
            if piv_val < 1e-13 * scale {
                return Err(LpError::SingularBasis);
            }
            if piv_row != c {
                for k in 0..nr {
                    m.swap(c * nr + k, piv_row * nr + k);
                    inv.swap(c * nr + k, piv_row * nr + k);
                }
            }
            let piv = m[c * nr + c];
            for k in 0..nr {
                m[c * nr + k] /= piv;
                inv[c * nr + k] /= piv;
            }
            for r in 0..nr {
                if r != c {
                    let f = m[r * nr + c];
                    if f != 0.0 {
                        for k in 0..nr {
                            m[r * nr + k] -= f * m[c * nr + k];
                            inv[r * nr + k] -= f * inv[c * nr + k];
                        }
                    }
                }
            }
        }
        self.binv = inv;
        self.pivots_since_refactor = 0;
        Ok(())
    }

    /// After phase 1, pivot any artificial still in the basis out onto a
    /// structural column when one is available; rows that admit none are
    /// redundant and keep their artificial pinned at zero. These are
    /// zero-value swaps, so only comfortably large pivots are worth taking.
    fn drive_out_artificials(&mut self, std: &Standardized) {
        for r in 0..std.nrows {
            if self.basis[r] < std.artificial_start {
                continue;
            }
            for j in 0..std.artificial_start {
                if self.in_basis[j] {
                    continue;
                }
                let d = self.direction(std, j);
                let dmax = d.iter().fold(0.0f64, |acc, &v| acc.max(v.abs()));
                if d[r].abs() > PIVOT_ABS_FLOOR.max(SMALL_PIVOT_REL_CONSERVATIVE * dmax) {
                    self.pivot(std, j, r, &d);
                    break;
                }
            }
        }
    }

    fn extract(&self, lp: &LinearProgram, std: &Standardized) -> LpSolution {
        let xb = self.basic_values(std);
        let degenerate = xb.iter().any(|&v| v <= DEGENERACY_TOL);

        let mut x_std = vec![0.0; std.ncols];
        for (r, &col) in self.basis.iter().enumerate() {
            x_std[col] = xb[r];
        }
        let primal: Vec<f64> = if std.split {
            (0..std.nvars)
                .map(|v| x_std[v] - x_std[std.nvars + v])
                .collect()
        } else {
            x_std[..std.nvars].to_vec()
        };
        let objective_value: f64 = lp
            .objective
            .iter()
            .zip(&primal)
            .map(|(c, x)| c * x)
            .sum();

        let y = self.duals(std, &std.phase2_cost);
        let m_i = lp.ineq_rhs.len();
        let ineq_duals: Vec<f64> = (0..m_i)
            .map(|r| (-std.row_sign[r] * y[r]).max(0.0))
            .collect();
        let eq_duals: Vec<f64> = (0..lp.eq_rhs.len())
            .map(|e| -std.row_sign[m_i + e] * y[m_i + e])
            .collect();

        LpSolution {
            status: LpStatus::Optimal,
            primal,
            objective_value,
            ineq_duals,
            eq_duals,
            degenerate,
            iterations: self.iterations,
        }
    }
}
