//! Dense two-phase simplex.
//!
//! Problems are converted to standard form (`A y = b`, `y >= 0`, `b >= 0`)
//! by shifting/flipping/splitting variables according to their bounds and
//! adding slack, surplus and artificial columns. Phase one minimizes the sum
//! of artificials; phase two the (sign-adjusted) objective. Pricing is
//! Dantzig's rule until a run of degenerate pivots, then Bland's rule for the
//! rest of the phase.
//!
//! Each phase ends by rebuilding the tableau from the original data for the
//! current basis and resuming if the fresh reduced costs disagree. The final
//! point is checked against every original constraint, so an `Optimal`
//! outcome is never returned for a point that drifted out of tolerance.

use crate::error::{invalid, Error, Result};

/// Smallest magnitude accepted as a pivot element.
pub const PIVOT_TOL: f64 = 1e-9;
/// Constraint residual tolerated in a returned solution.
pub const FEAS_TOL: f64 = 1e-7;
/// Bound residual tolerated in a returned solution.
pub const BOUND_TOL: f64 = 1e-9;

const COST_TOL: f64 = 1e-9;
const DEGENERATE_STALL: usize = 50;
const REINVERT_ROUNDS: usize = 4;
const HARRIS_TOL: f64 = 1e-9;
const STABLE_PIVOT: f64 = 1e-6;
const REINVERT_EVERY: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub sense: Sense,
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
    /// Per-variable `[lower, upper]`; infinities allowed.
    pub bounds: Vec<(f64, f64)>,
}

impl LinearProgram {
    /// `num_vars` variables, zero objective, default bounds `[0, +inf)`.
    pub fn new(num_vars: usize, sense: Sense) -> Self {
        Self {
            sense,
            objective: vec![0.0; num_vars],
            constraints: Vec::new(),
            bounds: vec![(0.0, f64::INFINITY); num_vars],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add_constraint(&mut self, coeffs: Vec<f64>, relation: Relation, rhs: f64) {
        self.constraints.push(Constraint { coeffs, relation, rhs });
    }

    /// Sparse form of [`LinearProgram::add_constraint`].
    pub fn add_sparse(&mut self, terms: &[(usize, f64)], relation: Relation, rhs: f64) {
        let mut coeffs = vec![0.0; self.num_vars()];
        for &(j, a) in terms {
            coeffs[j] += a;
        }
        self.add_constraint(coeffs, relation, rhs);
    }

    fn check(&self) -> Result<()> {
        let n = self.num_vars();
        if self.bounds.len() != n {
            return invalid(format!("{} bounds for {n} variables", self.bounds.len()));
        }
        for (k, c) in self.constraints.iter().enumerate() {
            if c.coeffs.len() != n {
                return invalid(format!("constraint {k} has {} coefficients, expected {n}", c.coeffs.len()));
            }
            if !c.rhs.is_finite() || c.coeffs.iter().any(|a| !a.is_finite()) {
                return invalid(format!("constraint {k} has non-finite data"));
            }
        }
        if self.objective.iter().any(|c| !c.is_finite()) {
            return invalid("objective has non-finite coefficients");
        }
        for (j, &(l, u)) in self.bounds.iter().enumerate() {
            if l.is_nan() || u.is_nan() || l == f64::INFINITY || u == f64::NEG_INFINITY {
                return invalid(format!("variable {j} has invalid bounds [{l}, {u}]"));
            }
        }
        Ok(())
    }

    /// Largest constraint violation of `x` (bounds excluded).
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        self.constraints
            .iter()
            .map(|c| {
                let lhs: f64 = c.coeffs.iter().zip(x).map(|(a, v)| a * v).sum();
                match c.relation {
                    Relation::Le => (lhs - c.rhs).max(0.0),
                    Relation::Ge => (c.rhs - lhs).max(0.0),
                    Relation::Eq => (lhs - c.rhs).abs(),
                }
            })
            .fold(0.0, f64::max)
    }

    pub fn max_bound_violation(&self, x: &[f64]) -> f64 {
        self.bounds.iter().zip(x).map(|(&(l, u), &v)| (l - v).max(v - u).max(0.0)).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpOutcome {
    pub status: LpStatus,
    /// Empty unless `status == Optimal`.
    pub solution: Vec<f64>,
    pub objective_value: f64,
    pub pivots: usize,
}

impl LpOutcome {
    fn without_point(status: LpStatus, pivots: usize) -> Self {
        let objective_value = match status {
            LpStatus::Infeasible => f64::NAN,
            _ => f64::INFINITY,
        };
        Self { status, solution: Vec::new(), objective_value, pivots }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

pub fn solve_lp(lp: &LinearProgram) -> Result<LpOutcome> {
    lp.check()?;
    run(lp, true)
}

/// Phase one only: a feasible point (reported as `Optimal`) or `Infeasible`.
pub fn check_feasible(constraints: &[Constraint], bounds: &[(f64, f64)]) -> Result<LpOutcome> {
    let lp = LinearProgram {
        sense: Sense::Minimize,
        objective: vec![0.0; bounds.len()],
        constraints: constraints.to_vec(),
        bounds: bounds.to_vec(),
    };
    lp.check()?;
    run(&lp, false)
}

/// How an original variable is expressed through standard-form columns.
#[derive(Debug, Clone, Copy)]
enum VarMap {
    Fixed(f64),
    /// x = lower + y
    Shift {
        col: usize,
        lower: f64,
    },
    /// x = upper - y
    Flip {
        col: usize,
        upper: f64,
    },
    /// x = y_pos - y_neg
    Split {
        pos: usize,
        neg: usize,
    },
}

struct StandardForm {
    maps: Vec<VarMap>,
    num_struct: usize,
    /// Rows over structural columns, with relations and right-hand sides.
    rows: Vec<(Vec<f64>, Relation, f64)>,
    /// Objective over structural columns, as a minimization.
    cost: Vec<f64>,
}

fn standardize(lp: &LinearProgram) -> std::result::Result<StandardForm, ()> {
    let mut maps = Vec::with_capacity(lp.num_vars());
    let mut num_struct = 0;
    let mut upper_rows: Vec<(usize, f64)> = Vec::new();
    for &(l, u) in &lp.bounds {
        if l > u {
            return Err(());
        }
        let map = if l == u {
            VarMap::Fixed(l)
        } else if l.is_finite() {
            let col = num_struct;
            num_struct += 1;
            if u.is_finite() {
                upper_rows.push((col, u - l));
            }
            VarMap::Shift { col, lower: l }
        } else if u.is_finite() {
            let col = num_struct;
            num_struct += 1;
            VarMap::Flip { col, upper: u }
        } else {
            num_struct += 2;
            VarMap::Split { pos: num_struct - 2, neg: num_struct - 1 }
        };
        maps.push(map);
    }

    let translate = |coeffs: &[f64]| -> (Vec<f64>, f64) {
        let mut row = vec![0.0; num_struct];
        let mut constant = 0.0;
        for (a, map) in coeffs.iter().zip(&maps) {
            if *a == 0.0 {
                continue;
            }
            match *map {
                VarMap::Fixed(v) => constant += a * v,
                VarMap::Shift { col, lower } => {
                    row[col] += a;
                    constant += a * lower;
                }
                VarMap::Flip { col, upper } => {
                    row[col] -= a;
                    constant += a * upper;
                }
                VarMap::Split { pos, neg } => {
                    row[pos] += a;
                    row[neg] -= a;
                }
            }
        }
        (row, constant)
    };

    let mut rows = Vec::with_capacity(lp.constraints.len() + upper_rows.len());
    for c in &lp.constraints {
        let (row, constant) = translate(&c.coeffs);
        rows.push((row, c.relation, c.rhs - constant));
    }
    for (col, width) in upper_rows {
        let mut row = vec![0.0; num_struct];
        row[col] = 1.0;
        rows.push((row, Relation::Le, width));
    }

    let (mut cost, _) = translate(&lp.objective);
    if lp.sense == Sense::Maximize {
        cost.iter_mut().for_each(|c| *c = -*c);
    }
    Ok(StandardForm { maps, num_struct, rows, cost })
}

struct Tableau {
    /// rows x (cols + 1); last column is the right-hand side.
    a: Vec<Vec<f64>>,
    basis: Vec<usize>,
    cols: usize,
    artificial_start: usize,
    /// Rows dropped as redundant after phase one.
    dead: Vec<bool>,
    pivots: usize,
    max_pivots: usize,
    /// Initial tableau, kept for reinversion.
    original: Vec<Vec<f64>>,
}

impl Tableau {
    /// Rebuilds the live rows as `B^{-1} [A | b]` from the original data,
    /// discarding accumulated rounding. Leaves the tableau untouched and
    /// returns false if the basis is numerically singular or the recomputed
    /// basic solution is infeasible.
    fn reinvert(&mut self) -> bool {
        let live: Vec<usize> = (0..self.a.len()).filter(|&r| !self.dead[r]).collect();
        let k = live.len();
        let width = self.cols + 1;
        let mut mat: Vec<Vec<f64>> = live
            .iter()
            .map(|&r| {
                let mut row: Vec<f64> = live.iter().map(|&q| self.original[r][self.basis[q]]).collect();
                row.extend_from_slice(&self.original[r]);
                row
            })
            .collect();
        for c in 0..k {
            let Some(p) = (c..k).max_by(|&i, &j| mat[i][c].abs().total_cmp(&mat[j][c].abs())) else {
                return false;
            };
            if mat[p][c].abs() < 1e-12 {
                return false;
            }
            mat.swap(c, p);
            let inv = 1.0 / mat[c][c];
            mat[c].iter_mut().for_each(|v| *v *= inv);
            let pivot_row = mat[c].clone();
            for (i, row) in mat.iter_mut().enumerate() {
                let f = row[c];
                if i != c && f != 0.0 {
                    for (x, y) in row.iter_mut().zip(&pivot_row) {
                        *x -= f * y;
                    }
                }
            }
        }
        if mat.iter().any(|row| !row[k + width - 1].is_finite() || row[k + width - 1] < -FEAS_TOL) {
            return false;
        }
        for (c, &q) in live.iter().enumerate() {
            let mut row = mat[c][k..].to_vec();
            let b = self.basis[q];
            row.iter_mut().for_each(|v| {
                if v.abs() < 1e-14 {
                    *v = 0.0
                }
            });
            row[b] = 1.0;
            row[self.cols] = row[self.cols].max(0.0);
            self.a[q] = row;
        }
        true
    }

    /// Optimizes `cost` to convergence, reinverting after each run and
    /// resuming if the fresh reduced costs still allow progress.
    fn solve_phase(&mut self, cost: &[f64], allowed: impl Fn(usize) -> bool) -> Result<(bool, Vec<f64>)> {
        let mut obj = self.price(cost);
        for _ in 0..REINVERT_ROUNDS {
            if !self.optimize(cost, &mut obj, &allowed)? {
                return Ok((false, obj));
            }
            if !self.reinvert() {
                break;
            }
            obj = self.price(cost);
            if !(0..self.cols).any(|c| allowed(c) && obj[c] < -COST_TOL) {
                break;
            }
        }
        Ok((true, obj))
    }

    fn rhs(&self, r: usize) -> f64 {
        self.a[r][self.cols]
    }

    fn pivot(&mut self, r: usize, c: usize, obj: &mut [f64]) {
        let p = self.a[r][c];
        let pivot_row: Vec<f64> = self.a[r].iter().map(|v| v / p).collect();
        for (i, row) in self.a.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c];
            if f != 0.0 {
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= f * y;
                }
                row[c] = 0.0;
            }
        }
        let f = obj[c];
        if f != 0.0 {
            for (x, y) in obj.iter_mut().zip(&pivot_row) {
                *x -= f * y;
            }
            obj[c] = 0.0;
        }
        self.a[r] = pivot_row;
        self.a[r][c] = 1.0;
        self.basis[r] = c;
        self.pivots += 1;
    }

    /// Reduced-cost row for `cost` (len cols) given the current basis; last
    /// entry holds minus the objective value.
    fn price(&self, cost: &[f64]) -> Vec<f64> {
        let mut obj = cost.to_vec();
        obj.push(0.0);
        for (r, &b) in self.basis.iter().enumerate() {
            if self.dead[r] {
                continue;
            }
            let cb = cost[b];
            if cb != 0.0 {
                for (x, y) in obj.iter_mut().zip(&self.a[r]) {
                    *x -= cb * y;
                }
            }
        }
        obj
    }

    /// Textbook minimum-ratio test, ties to the lowest basic column.
    fn ratio_bland(&self, c: usize, min_pivot: f64) -> Option<(usize, f64)> {
        let mut leave: Option<(usize, f64)> = None;
        for r in 0..self.a.len() {
            let coef = self.a[r][c];
            if self.dead[r] || coef <= min_pivot {
                continue;
            }
            let ratio = self.rhs(r).max(0.0) / coef;
            let better = match leave {
                None => true,
                Some((br, bratio)) => {
                    ratio < bratio - 1e-12 || (ratio <= bratio + 1e-12 && self.basis[r] < self.basis[br])
                }
            };
            if better {
                leave = Some((r, ratio));
            }
        }
        leave
    }

    /// Two-pass ratio test: among rows whose ratio is within a small
    /// relaxation of the minimum, pivot on the largest coefficient.
    fn ratio_harris(&self, c: usize, min_pivot: f64) -> Option<(usize, f64)> {
        let mut bound = f64::INFINITY;
        for r in 0..self.a.len() {
            let coef = self.a[r][c];
            if !self.dead[r] && coef > min_pivot {
                bound = bound.min((self.rhs(r).max(0.0) + HARRIS_TOL) / coef);
            }
        }
        let mut leave: Option<(usize, f64)> = None;
        for r in 0..self.a.len() {
            let coef = self.a[r][c];
            if self.dead[r] || coef <= min_pivot {
                continue;
            }
            let ratio = self.rhs(r).max(0.0) / coef;
            if ratio <= bound && leave.is_none_or(|(br, _)| coef > self.a[br][c]) {
                leave = Some((r, ratio));
            }
        }
        leave
    }

    /// Pivots towards the minimum of `cost`, reinverting periodically.
    /// Returns false if unbounded. `allowed(c)` gates entering columns.
    fn optimize(&mut self, cost: &[f64], obj: &mut Vec<f64>, allowed: impl Fn(usize) -> bool) -> Result<bool> {
        let mut bland = false;
        let mut stall = 0usize;
        let mut since_reinvert = 0usize;
        loop {
            if since_reinvert >= REINVERT_EVERY {
                since_reinvert = 0;
                if self.reinvert() {
                    *obj = self.price(cost);
                }
            }
            if self.pivots > self.max_pivots {
                return Err(Error::Solver(format!("simplex exceeded {} pivots", self.max_pivots)));
            }
            let entering = if bland {
                (0..self.cols).find(|&c| allowed(c) && obj[c] < -COST_TOL)
            } else {
                let mut best: Option<usize> = None;
                for c in 0..self.cols {
                    if allowed(c) && obj[c] < -COST_TOL && best.is_none_or(|b| obj[c] < obj[b]) {
                        best = Some(c);
                    }
                }
                best
            };
            let Some(c) = entering else { return Ok(true) };

            // Prefer well-scaled pivots; tiny ones only when nothing else
            // blocks the step.
            let ratio_test = |tol| if bland { self.ratio_bland(c, tol) } else { self.ratio_harris(c, tol) };
            let leave = ratio_test(STABLE_PIVOT).or_else(|| ratio_test(PIVOT_TOL));
            let Some((r, ratio)) = leave else { return Ok(false) };
            if ratio <= 1e-12 {
                stall += 1;
                if stall > DEGENERATE_STALL {
                    bland = true;
                }
            } else {
                stall = 0;
            }
            self.pivot(r, c, obj);
            since_reinvert += 1;
        }
    }
}

fn run(lp: &LinearProgram, optimize_objective: bool) -> Result<LpOutcome> {
    let Ok(sf) = standardize(lp) else {
        return Ok(LpOutcome::without_point(LpStatus::Infeasible, 0));
    };
    let m = sf.rows.len();
    let ns = sf.num_struct;

    // Orient rows so b >= 0, then count slack/surplus and artificial columns.
    let mut oriented: Vec<(Vec<f64>, Relation, f64)> = Vec::with_capacity(m);
    for (row, rel, rhs) in &sf.rows {
        if *rhs < 0.0 {
            let flipped = match rel {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
            oriented.push((row.iter().map(|v| -v).collect(), flipped, -rhs));
        } else {
            oriented.push((row.clone(), *rel, *rhs));
        }
    }
    let num_slack = oriented.iter().filter(|(_, r, _)| *r != Relation::Eq).count();
    let num_art = oriented.iter().filter(|(_, r, _)| *r != Relation::Le).count();
    let artificial_start = ns + num_slack;
    let cols = artificial_start + num_art;

    let mut a = vec![vec![0.0; cols + 1]; m];
    let mut basis = vec![0usize; m];
    let (mut slack, mut art) = (ns, artificial_start);
    for (r, (row, rel, rhs)) in oriented.iter().enumerate() {
        a[r][..ns].copy_from_slice(row);
        a[r][cols] = *rhs;
        match rel {
            Relation::Le => {
                a[r][slack] = 1.0;
                basis[r] = slack;
                slack += 1;
            }
            Relation::Ge => {
                a[r][slack] = -1.0;
                slack += 1;
                a[r][art] = 1.0;
                basis[r] = art;
                art += 1;
            }
            Relation::Eq => {
                a[r][art] = 1.0;
                basis[r] = art;
                art += 1;
            }
        }
    }
    let original = a.clone();

    let mut t = Tableau {
        a,
        basis,
        cols,
        artificial_start,
        dead: vec![false; m],
        pivots: 0,
        max_pivots: 50_000 + 50 * (m + cols),
        original,
    };

    if num_art > 0 {
        let mut cost = vec![0.0; cols];
        cost[artificial_start..].iter_mut().for_each(|c| *c = 1.0);
        let (_, mut obj) = t.solve_phase(&cost, |_| true)?;
        let infeasibility = -obj[cols];
        if infeasibility > FEAS_TOL {
            return Ok(LpOutcome::without_point(LpStatus::Infeasible, t.pivots));
        }
        // Drive remaining artificials out of the basis, or drop their rows.
        for r in 0..m {
            if t.basis[r] < t.artificial_start {
                continue;
            }
            let mut best: Option<usize> = None;
            for c in 0..t.artificial_start {
                let v = t.a[r][c].abs();
                if v > PIVOT_TOL && best.is_none_or(|b| v > t.a[r][b].abs()) {
                    best = Some(c);
                }
            }
            match best {
                Some(c) => t.pivot(r, c, &mut obj),
                None => t.dead[r] = true,
            }
        }
    }

    if optimize_objective {
        let mut cost = vec![0.0; cols];
        cost[..ns].copy_from_slice(&sf.cost);
        let art_start = t.artificial_start;
        let (bounded, _) = t.solve_phase(&cost, |c| c < art_start)?;
        if !bounded {
            return Ok(LpOutcome::without_point(LpStatus::Unbounded, t.pivots));
        }
    }

    t.reinvert();
    let mut y = vec![0.0; cols];
    for (r, &b) in t.basis.iter().enumerate() {
        if !t.dead[r] {
            y[b] = t.rhs(r);
        }
    }

    let x: Vec<f64> = sf
        .maps
        .iter()
        .zip(&lp.bounds)
        .map(|(map, &(l, u))| {
            let v = match *map {
                VarMap::Fixed(v) => v,
                VarMap::Shift { col, lower } => lower + y[col].max(0.0),
                VarMap::Flip { col, upper } => upper - y[col].max(0.0),
                VarMap::Split { pos, neg } => y[pos].max(0.0) - y[neg].max(0.0),
            };
            v.clamp(l, u)
        })
        .collect();

    let viol = lp.max_violation(&x);
    if viol > FEAS_TOL {
        return Err(Error::Solver(format!(
            "basic solution violates constraints by {viol:.3e} after {} pivots",
            t.pivots
        )));
    }
    let objective_value: f64 = lp.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
    Ok(LpOutcome { status: LpStatus::Optimal, solution: x, objective_value, pivots: t.pivots })
}
