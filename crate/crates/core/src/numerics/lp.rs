//! Dense two-phase simplex.
//!
//! Every program is first rewritten as `max cᵀx  s.t.  Gx ≤ h` with `x` free
//! (equalities become two inequalities, finite bounds become rows). The
//! simplex tableau is then built on the dual `min hᵀy  s.t.  Gᵀy = c, y ≥ 0`,
//! which has one row per variable. The programs in this crate have a few
//! dozen variables and thousands of sampled validity rows, so the dual tableau
//! stays small. The primal point is read back from the dual multipliers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::numerics::matrix::{dot, RealMatrix};

/// `maximize objective·x` subject to equality rows, `≤` rows and per-variable
/// bounds. Variables are free unless bounds are set.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    objective: Vec<f64>,
    eq_matrix: RealMatrix,
    eq_rhs: Vec<f64>,
    ub_matrix: RealMatrix,
    ub_rhs: Vec<f64>,
    bounds: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub value: f64,
    pub point: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal(LpSolution),
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn optimal(&self) -> Option<&LpSolution> {
        match self {
            LpOutcome::Optimal(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpOutcome::Infeasible)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct LpOptions {
    /// Feasibility tolerance applied to (row-normalised) constraints.
    pub tol: f64,
    /// Pivot budget across both phases; `None` picks a size-based default.
    pub max_iterations: Option<usize>,
}

impl Default for LpOptions {
    fn default() -> Self {
        LpOptions {
            tol: crate::DEFAULT_TOL,
            max_iterations: None,
        }
    }
}

impl LinearProgram {
    pub fn maximize(objective: Vec<f64>) -> Self {
        let n = objective.len();
        LinearProgram {
            objective,
            eq_matrix: RealMatrix::zeros(0, n),
            eq_rhs: Vec::new(),
            ub_matrix: RealMatrix::zeros(0, n),
            ub_rhs: Vec::new(),
            bounds: vec![(f64::NEG_INFINITY, f64::INFINITY); n],
        }
    }

    pub fn minimize(objective: Vec<f64>) -> Self {
        Self::maximize(objective.into_iter().map(|c| -c).collect())
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    pub fn eq_constraints(&self) -> (&RealMatrix, &[f64]) {
        (&self.eq_matrix, &self.eq_rhs)
    }

    pub fn ub_constraints(&self) -> (&RealMatrix, &[f64]) {
        (&self.ub_matrix, &self.ub_rhs)
    }

    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    pub fn add_eq(&mut self, row: &[f64], rhs: f64) -> Result<()> {
        self.eq_matrix.push_row(row)?;
        self.eq_rhs.push(rhs);
        Ok(())
    }

    pub fn add_le(&mut self, row: &[f64], rhs: f64) -> Result<()> {
        self.ub_matrix.push_row(row)?;
        self.ub_rhs.push(rhs);
        Ok(())
    }

    pub fn add_ge(&mut self, row: &[f64], rhs: f64) -> Result<()> {
        let neg: Vec<f64> = row.iter().map(|x| -x).collect();
        self.add_le(&neg, -rhs)
    }

    pub fn set_bounds(&mut self, var: usize, lo: f64, hi: f64) {
        self.bounds[var] = (lo, hi);
    }

    pub fn set_all_nonnegative(&mut self) {
        for b in &mut self.bounds {
            *b = (0.0, f64::INFINITY);
        }
    }

    /// Largest constraint violation of `x`, in the program's own units.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.eq_matrix.rows() {
            worst = worst.max((dot(self.eq_matrix.row(i), x) - self.eq_rhs[i]).abs());
        }
        for i in 0..self.ub_matrix.rows() {
            worst = worst.max(dot(self.ub_matrix.row(i), x) - self.ub_rhs[i]);
        }
        for (xi, &(lo, hi)) in x.iter().zip(&self.bounds) {
            worst = worst.max(lo - xi).max(xi - hi);
        }
        worst
    }

    fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        if self.eq_matrix.cols() != n || self.ub_matrix.cols() != n {
            return Err(Error::domain("constraint width differs from variable count"));
        }
        let finite = self.objective.iter().all(|x| x.is_finite())
            && self.eq_matrix.as_slice().iter().all(|x| x.is_finite())
            && self.ub_matrix.as_slice().iter().all(|x| x.is_finite())
            && self.eq_rhs.iter().all(|x| x.is_finite())
            && self.ub_rhs.iter().all(|x| x.is_finite());
        if !finite {
            return Err(Error::domain("non-finite LP data"));
        }
        if self
            .bounds
            .iter()
            .any(|&(lo, hi)| lo.is_nan() || hi.is_nan() || lo == f64::INFINITY || hi == f64::NEG_INFINITY)
        {
            return Err(Error::domain("invalid variable bounds"));
        }
        Ok(())
    }

    /// Rows of `Gx ≤ h`, each scaled to unit max-norm. Returns `None` when a
    /// zero row has a negative right-hand side (trivially infeasible).
    fn inequality_form(&self, tol: f64) -> Option<(Vec<Vec<f64>>, Vec<f64>)> {
        let n = self.num_vars();
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        let mut push = |row: Vec<f64>, h: f64| -> bool {
            let scale = row.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            if scale == 0.0 {
                return h >= -tol;
            }
            rows.push(row.iter().map(|x| x / scale).collect());
            rhs.push(h / scale);
            true
        };
        for i in 0..self.ub_matrix.rows() {
            if !push(self.ub_matrix.row(i).to_vec(), self.ub_rhs[i]) {
                return None;
            }
        }
        for i in 0..self.eq_matrix.rows() {
            let r = self.eq_matrix.row(i);
            if !push(r.to_vec(), self.eq_rhs[i]) || !push(r.iter().map(|x| -x).collect(), -self.eq_rhs[i]) {
                return None;
            }
        }
        for (j, &(lo, hi)) in self.bounds.iter().enumerate() {
            if lo.is_finite() {
                let mut r = vec![0.0; n];
                r[j] = -1.0;
                push(r, -lo);
            }
            if hi.is_finite() {
                let mut r = vec![0.0; n];
                r[j] = 1.0;
                push(r, hi);
            }
        }
        Some((rows, rhs))
    }
}

pub fn lp_solve(p: &LinearProgram) -> Result<LpOutcome> {
    lp_solve_with(p, &LpOptions::default())
}

pub fn lp_solve_with(p: &LinearProgram, opts: &LpOptions) -> Result<LpOutcome> {
    p.validate()?;
    if p.bounds.iter().any(|&(lo, hi)| lo > hi + opts.tol) {
        return Ok(LpOutcome::Infeasible);
    }
    let n = p.num_vars();
    let Some((g, h)) = p.inequality_form(opts.tol) else {
        return Ok(LpOutcome::Infeasible);
    };
    let m = g.len();
    let c = &p.objective;
    if m == 0 {
        return Ok(if c.iter().all(|x| x.abs() <= opts.tol) {
            LpOutcome::Optimal(LpSolution {
                value: 0.0,
                point: vec![0.0; n],
            })
        } else {
            LpOutcome::Unbounded
        });
    }

    // Dual tableau: n equality rows (Gᵀ y = c) over m nonnegative columns.
    let mut a = RealMatrix::zeros(n, m);
    for (j, row) in g.iter().enumerate() {
        for (i, &v) in row.iter().enumerate() {
            a[(i, j)] = v;
        }
    }
    let cost: Vec<f64> = h.iter().map(|x| -x).collect();
    match simplex(&a, c, &cost, opts)? {
        Core::Optimal { duals, .. } => {
            let x: Vec<f64> = duals.iter().map(|d| -d).collect();
            let value = dot(c, &x);
            Ok(LpOutcome::Optimal(LpSolution { value, point: x }))
        }
        Core::Unbounded => Ok(LpOutcome::Infeasible),
        Core::Infeasible => {
            // Dual infeasible: the primal is unbounded unless a Farkas
            // certificate y ≥ 0, Gᵀy = 0, hᵀy < 0 exists.
            let mut fa = RealMatrix::zeros(n + 1, m);
            for j in 0..m {
                for i in 0..n {
                    fa[(i, j)] = a[(i, j)];
                }
                fa[(n, j)] = 1.0;
            }
            let mut fb = vec![0.0; n + 1];
            fb[n] = 1.0;
            match simplex(&fa, &fb, &cost, opts)? {
                Core::Optimal { value, .. } if value > opts.tol => Ok(LpOutcome::Infeasible),
                _ => Ok(LpOutcome::Unbounded),
            }
        }
    }
}

/// Solves `base` together with the `a·x ≤ b` rows of `pool`, adding pool rows
/// lazily.
///
/// The first relaxation holds the rows listed in `initial`. After each solve
/// at most `batch` of the most violated remaining rows are appended, so an
/// optimum of the final relaxation is an optimum of the full program and an
/// infeasible relaxation proves the full program infeasible.
pub fn lp_solve_lazy(
    base: &LinearProgram,
    pool: &[(Vec<f64>, f64)],
    initial: &[usize],
    batch: usize,
    opts: &LpOptions,
) -> Result<LpOutcome> {
    let batch = batch.max(1);
    let mut active = vec![false; pool.len()];
    let mut lp = base.clone();
    let add = |lp: &mut LinearProgram, active: &mut [bool], k: usize| -> Result<()> {
        if !active[k] {
            active[k] = true;
            lp.add_le(&pool[k].0, pool[k].1)?;
        }
        Ok(())
    };
    for &k in initial {
        if k >= pool.len() {
            return Err(Error::domain(format!("initial row {k} outside the pool")));
        }
        add(&mut lp, &mut active, k)?;
    }
    loop {
        match lp_solve_with(&lp, opts)? {
            LpOutcome::Infeasible => return Ok(LpOutcome::Infeasible),
            LpOutcome::Unbounded => {
                let rest: Vec<usize> = (0..pool.len()).filter(|&k| !active[k]).collect();
                if rest.is_empty() {
                    return Ok(LpOutcome::Unbounded);
                }
                let stride = rest.len().div_ceil(batch);
                for &k in rest.iter().step_by(stride) {
                    add(&mut lp, &mut active, k)?;
                }
            }
            LpOutcome::Optimal(sol) => {
                let mut violated: Vec<(f64, usize)> = pool
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| !active[k])
                    .filter_map(|(k, (a, b))| {
                        let scale = a.iter().fold(0.0f64, |m, x| m.max(x.abs()));
                        let v = (dot(a, &sol.point) - b) / scale.max(f64::MIN_POSITIVE);
                        (v > opts.tol).then_some((v, k))
                    })
                    .collect();
                if violated.is_empty() {
                    return Ok(LpOutcome::Optimal(sol));
                }
                violated.sort_by(|x, y| y.0.total_cmp(&x.0).then(x.1.cmp(&y.1)));
                for &(_, k) in violated.iter().take(batch) {
                    add(&mut lp, &mut active, k)?;
                }
            }
        }
    }
}

enum Core {
    Optimal { value: f64, duals: Vec<f64> },
    Infeasible,
    Unbounded,
}

const PIVOT_EPS: f64 = 1e-11;
const COST_EPS: f64 = 1e-10;
/// Consecutive degenerate pivots tolerated before switching to Bland's rule.
const DEGENERATE_STREAK: usize = 50;
/// Relative size of the phase-2 right-hand-side perturbation.
const PERTURBATION: f64 = 1e-10;

struct Tableau {
    rows: usize,
    width: usize,
    t: Vec<f64>,
    z: Vec<f64>,
    basis: Vec<usize>,
    iterations: usize,
    max_iterations: usize,
    bland: bool,
}

impl Tableau {
    fn rhs(&self, i: usize) -> f64 {
        self.t[i * self.width + self.width - 1]
    }

    fn pivot(&mut self, r: usize, e: usize) {
        let w = self.width;
        let piv = self.t[r * w + e];
        for v in &mut self.t[r * w..(r + 1) * w] {
            *v /= piv;
        }
        let prow: Vec<f64> = self.t[r * w..(r + 1) * w].to_vec();
        for i in 0..self.rows {
            if i == r {
                continue;
            }
            let f = self.t[i * w + e];
            if f == 0.0 {
                continue;
            }
            let row = &mut self.t[i * w..(i + 1) * w];
            for (x, p) in row.iter_mut().zip(&prow) {
                *x -= f * p;
            }
            row[e] = 0.0;
            if row[w - 1] < 0.0 && row[w - 1] > -1e-12 {
                row[w - 1] = 0.0;
            }
        }
        let f = self.z[e];
        if f != 0.0 {
            for (x, p) in self.z.iter_mut().zip(&prow) {
                *x -= f * p;
            }
            self.z[e] = 0.0;
        }
        self.basis[r] = e;
    }

    /// Runs pivots until optimal; `allowed` bounds the entering columns.
    /// Returns `false` when the objective is unbounded.
    fn optimize(&mut self, allowed: usize) -> Result<bool> {
        let w = self.width;
        let mut degenerate = 0usize;
        loop {
            if self.iterations >= self.max_iterations {
                return Err(Error::SolverFailure(format!(
                    "simplex exceeded {} pivots (cycling guard)",
                    self.max_iterations
                )));
            }
            let entering = if self.bland {
                (0..allowed).find(|&j| self.z[j] < -COST_EPS)
            } else {
                (0..allowed)
                    .filter(|&j| self.z[j] < -COST_EPS)
                    .min_by(|&a, &b| self.z[a].total_cmp(&self.z[b]))
            };
            let Some(e) = entering else {
                return Ok(true);
            };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.rows {
                let col = self.t[i * w + e];
                if col <= PIVOT_EPS {
                    continue;
                }
                let ratio = self.rhs(i).max(0.0) / col;
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((bi, br)) => {
                        if ratio < br - 1e-12 * br.abs().max(1.0)
                            || (ratio <= br + 1e-12 * br.abs().max(1.0) && self.basis[i] < self.basis[bi])
                        {
                            Some((i, ratio))
                        } else {
                            Some((bi, br))
                        }
                    }
                };
            }
            let Some((r, ratio)) = leave else {
                return Ok(false);
            };
            if ratio <= 1e-14 {
                degenerate += 1;
                if degenerate > DEGENERATE_STREAK {
                    self.bland = true;
                }
            } else {
                degenerate = 0;
            }
            self.pivot(r, e);
            self.iterations += 1;
        }
    }
}

/// `max costᵀy  s.t.  A y = b, y ≥ 0`. Returns the optimum and the equality
/// multipliers in the orientation of the original rows.
fn simplex(a: &RealMatrix, b: &[f64], cost: &[f64], opts: &LpOptions) -> Result<Core> {
    let (p, q) = (a.rows(), a.cols());
    let width = q + p + 1;
    let mut t = vec![0.0; p * width];
    let mut flips = vec![1.0; p];
    for i in 0..p {
        let s = if b[i] < 0.0 { -1.0 } else { 1.0 };
        flips[i] = s;
        for j in 0..q {
            t[i * width + j] = s * a[(i, j)];
        }
        t[i * width + q + i] = 1.0;
        t[i * width + width - 1] = s * b[i];
    }
    // Phase 1: maximize −Σ artificials.
    let mut z = vec![0.0; width];
    for i in 0..p {
        for j in 0..q {
            z[j] -= t[i * width + j];
        }
        z[width - 1] -= t[i * width + width - 1];
    }
    let max_iterations = opts.max_iterations.unwrap_or(20_000 + 50 * (p + q));
    let mut tab = Tableau {
        rows: p,
        width,
        t,
        z,
        basis: (q..q + p).collect(),
        iterations: 0,
        max_iterations,
        bland: false,
    };
    tab.optimize(q)?;
    let b_scale = b.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    if tab.z[width - 1] < -opts.tol * b_scale {
        return Ok(Core::Infeasible);
    }
    // Drive zero-level artificials out of the basis where possible.
    for i in 0..p {
        if tab.basis[i] >= q {
            let row = &tab.t[i * width..i * width + q];
            if let Some(j) = (0..q)
                .filter(|&j| row[j].abs() > 1e-9)
                .max_by(|&x, &y| row[x].abs().total_cmp(&row[y].abs()))
            {
                tab.pivot(i, j);
            }
        }
    }
    // Phase 2.
    let mut z = vec![0.0; width];
    for j in 0..q {
        z[j] = -cost[j];
    }
    for i in 0..p {
        let bi = tab.basis[i];
        let cb = if bi < q { cost[bi] } else { 0.0 };
        if cb == 0.0 {
            continue;
        }
        for j in 0..width {
            z[j] += cb * tab.t[i * width + j];
        }
    }
    for i in 0..p {
        z[tab.basis[i]] = 0.0;
    }
    tab.z = z;
    tab.bland = false;
    // Shift basic levels by tiny random amounts so that phase 2 never sits on a
    // degenerate vertex. Reduced costs do not depend on the right-hand side, so
    // the multipliers are unaffected; the value is recomputed from the true b.
    let mut prng = ChaCha8Rng::seed_from_u64(0x1b_5eed);
    let shift = PERTURBATION * b_scale;
    for i in 0..p {
        if tab.basis[i] < q {
            tab.t[i * width + width - 1] += shift * (1.0 + prng.random::<f64>());
        }
    }
    if !tab.optimize(q)? {
        return Ok(Core::Unbounded);
    }
    let signed_b: Vec<f64> = (0..p).map(|j| flips[j] * b[j]).collect();
    let mut value = 0.0;
    for i in 0..p {
        let bi = tab.basis[i];
        if bi < q && cost[bi] != 0.0 {
            let level: f64 = (0..p).map(|j| tab.t[i * width + q + j] * signed_b[j]).sum();
            value += cost[bi] * level;
        }
    }
    let duals = (0..p).map(|i| flips[i] * tab.z[q + i]).collect();
    Ok(Core::Optimal { value, duals })
}
