//! Dense two-phase simplex method.
//!
//! The problems solved by this crate have at most a few hundred variables and
//! constraints, so a dense tableau is adequate. Pricing uses Dantzig's rule
//! and falls back to Bland's rule after a run of degenerate pivots, which
//! rules out cycling.

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum LpError {
    #[error("infeasible")]
    Infeasible,
    #[error("unbounded")]
    Unbounded,
    #[error("iteration limit reached")]
    IterationLimit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    Free,
    NonNeg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cmp {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone)]
struct Row {
    coeffs: Vec<f64>,
    cmp: Cmp,
    rhs: f64,
}

/// `max/min c·x` subject to linear rows and per-variable sign constraints.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    kinds: Vec<VarKind>,
    objective: Vec<f64>,
    maximize: bool,
    rows: Vec<Row>,
    max_iter: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
}

const PIVOT_EPS: f64 = 1e-11;
const HARRIS_TOL: f64 = 1e-9;
const PIVOT_ACCEPT: f64 = 1e-6;
const COST_EPS: f64 = 1e-11;
const RAY_COST_EPS: f64 = 1e-7;
const FEAS_EPS: f64 = 1e-9;
const DEGENERATE_RUN: usize = 50;

impl LinearProgram {
    pub fn new(kinds: Vec<VarKind>) -> Self {
        let n = kinds.len();
        Self {
            kinds,
            objective: vec![0.0; n],
            maximize: false,
            rows: Vec::new(),
            max_iter: 20_000,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.kinds.len()
    }

    pub fn maximize(&mut self, c: Vec<f64>) -> &mut Self {
        assert_eq!(c.len(), self.kinds.len());
        self.objective = c;
        self.maximize = true;
        self
    }

    pub fn minimize(&mut self, c: Vec<f64>) -> &mut Self {
        assert_eq!(c.len(), self.kinds.len());
        self.objective = c;
        self.maximize = false;
        self
    }

    pub fn constrain(&mut self, coeffs: Vec<f64>, cmp: Cmp, rhs: f64) -> &mut Self {
        assert_eq!(coeffs.len(), self.kinds.len());
        self.rows.push(Row { coeffs, cmp, rhs });
        self
    }

    pub fn set_max_iter(&mut self, n: usize) -> &mut Self {
        self.max_iter = n;
        self
    }

    pub fn solve(&self) -> Result<LpSolution, LpError> {
        // Column layout: structural columns (free variables split in two),
        // then one slack/surplus per inequality, then artificials.
        let mut col_of = Vec::with_capacity(self.kinds.len());
        let mut n_struct = 0;
        for k in &self.kinds {
            col_of.push(n_struct);
            n_struct += match k {
                VarKind::Free => 2,
                VarKind::NonNeg => 1,
            };
        }
        let m = self.rows.len();
        let n_slack = self.rows.iter().filter(|r| r.cmp != Cmp::Eq).count();

        let mut norm_rows = Vec::with_capacity(m);
        for r in &self.rows {
            let (sign, cmp) = if r.rhs < 0.0 {
                let flipped = match r.cmp {
                    Cmp::Le => Cmp::Ge,
                    Cmp::Ge => Cmp::Le,
                    Cmp::Eq => Cmp::Eq,
                };
                (-1.0, flipped)
            } else {
                (1.0, r.cmp)
            };
            norm_rows.push((sign, cmp));
        }
        let n_art = norm_rows.iter().filter(|(_, c)| *c != Cmp::Le).count();
        let ncols = n_struct + n_slack + n_art;

        let mut t = Tableau {
            a: vec![vec![0.0; ncols + 1]; m],
            basis: vec![0; m],
            ncols,
            origin: (0..m).collect(),
        };
        let mut slack = n_struct;
        let mut art = n_struct + n_slack;
        let mut b_scale = 1.0f64;
        for (i, (r, &(sign, cmp))) in self.rows.iter().zip(&norm_rows).enumerate() {
            let row = &mut t.a[i];
            for (j, &c) in r.coeffs.iter().enumerate() {
                let c = sign * c;
                row[col_of[j]] += c;
                if self.kinds[j] == VarKind::Free {
                    row[col_of[j] + 1] -= c;
                }
            }
            row[ncols] = sign * r.rhs;
            b_scale = b_scale.max(r.rhs.abs());
            match cmp {
                Cmp::Le => {
                    row[slack] = 1.0;
                    t.basis[i] = slack;
                    slack += 1;
                }
                Cmp::Ge => {
                    row[slack] = -1.0;
                    slack += 1;
                    row[art] = 1.0;
                    t.basis[i] = art;
                    art += 1;
                }
                Cmp::Eq => {
                    row[art] = 1.0;
                    t.basis[i] = art;
                    art += 1;
                }
            }
        }
        let first_art = n_struct + n_slack;
        let initial = t.a.clone();

        let mut iters = 0usize;
        if n_art > 0 {
            let mut cost = vec![0.0; ncols];
            for c in cost.iter_mut().skip(first_art) {
                *c = 1.0;
            }
            let allowed = vec![true; ncols];
            let value = t.optimize(&cost, &allowed, self.max_iter, &mut iters)?;
            if value > FEAS_EPS * b_scale {
                return Err(LpError::Infeasible);
            }
            t.drive_out_artificials(first_art);
        }

        let mut cost = vec![0.0; ncols];
        let dir = if self.maximize { -1.0 } else { 1.0 };
        for (j, k) in self.kinds.iter().enumerate() {
            cost[col_of[j]] = dir * self.objective[j];
            if *k == VarKind::Free {
                cost[col_of[j] + 1] = -dir * self.objective[j];
            }
        }
        let allowed: Vec<bool> = (0..ncols).map(|j| j < first_art).collect();
        t.optimize(&cost, &allowed, self.max_iter, &mut iters)?;

        let mut xs = vec![0.0; ncols];
        for (i, &b) in t.basis.iter().enumerate() {
            xs[b] = t.a[i][ncols];
        }
        t.refine(&initial, &mut xs);
        let x: Vec<f64> = self
            .kinds
            .iter()
            .enumerate()
            .map(|(j, k)| match k {
                VarKind::Free => xs[col_of[j]] - xs[col_of[j] + 1],
                VarKind::NonNeg => xs[col_of[j]].max(0.0),
            })
            .collect();
        let objective = x.iter().zip(&self.objective).map(|(a, b)| a * b).sum();
        Ok(LpSolution { x, objective })
    }
}

struct Tableau {
    /// Constraint rows; the last entry of each row is the right-hand side.
    a: Vec<Vec<f64>>,
    basis: Vec<usize>,
    ncols: usize,
    /// Original row index of each tableau row.
    origin: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize, obj: &mut [f64]) {
        let n = self.ncols;
        let p = self.a[r][c];
        for v in self.a[r].iter_mut() {
            *v /= p;
        }
        self.a[r][c] = 1.0;
        let pivot_row = self.a[r].clone();
        for (i, row) in self.a.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c];
            if f != 0.0 {
                for j in 0..=n {
                    row[j] -= f * pivot_row[j];
                }
                row[c] = 0.0;
            }
        }
        let f = obj[c];
        if f != 0.0 {
            for j in 0..=n {
                obj[j] -= f * pivot_row[j];
            }
            obj[c] = 0.0;
        }
        self.basis[r] = c;
    }

    /// Minimizes `cost·x` from the current basic feasible solution and
    /// returns the optimal value.
    fn optimize(
        &mut self,
        cost: &[f64],
        allowed: &[bool],
        max_iter: usize,
        iters: &mut usize,
    ) -> Result<f64, LpError> {
        let n = self.ncols;
        // Reduced-cost row; its last entry holds minus the objective value.
        let mut obj = vec![0.0; n + 1];
        obj[..n].copy_from_slice(cost);
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = cost[b];
            if cb != 0.0 {
                for j in 0..=n {
                    obj[j] -= cb * self.a[i][j];
                }
            }
        }
        let cost_scale = 1.0 + cost.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let mut degenerate = 0usize;
        loop {
            if *iters >= max_iter {
                return Err(LpError::IterationLimit);
            }
            let bland = degenerate >= DEGENERATE_RUN;
            let mut candidates: Vec<usize> = (0..n).filter(|&j| allowed[j] && obj[j] < -COST_EPS).collect();
            if !bland {
                candidates.sort_by(|&x, &y| obj[x].total_cmp(&obj[y]).then(x.cmp(&y)));
            }
            // Take the first candidate with an acceptable pivot; otherwise
            // fall back to the largest pivot seen.
            let mut chosen = None;
            let mut fallback: Option<(usize, usize)> = None;
            for c in candidates {
                let Some(r) = self.ratio_test(c, bland) else {
                    // A ray whose cost is at rounding level (e.g. both halves
                    // of a split free variable growing together) is not a
                    // real improvement.
                    if obj[c] > -RAY_COST_EPS * cost_scale {
                        continue;
                    }
                    return Err(LpError::Unbounded);
                };
                if self.a[r][c] >= PIVOT_ACCEPT {
                    chosen = Some((r, c));
                    break;
                }
                // A small pivot is only worth its rounding damage for a
                // real improvement.
                let noise = obj[c] > -RAY_COST_EPS * cost_scale;
                if !noise && fallback.is_none_or(|(fr, fc)| self.a[r][c] > self.a[fr][fc]) {
                    fallback = Some((r, c));
                }
            }
            let Some((r, c)) = chosen.or(fallback) else {
                return Ok(-obj[n]);
            };
            // Shift a slightly negative value to zero so the step is never
            // backwards.
            if self.a[r][n] < 0.0 {
                self.a[r][n] = 0.0;
            }
            if self.a[r][n] / self.a[r][c] <= 1e-14 {
                degenerate += 1;
            } else {
                degenerate = 0;
            }
            self.pivot(r, c, &mut obj);
            *iters += 1;
        }
    }

    /// Harris ratio test for entering column `c`: bound the step with every
    /// row relaxed by `HARRIS_TOL`, then among the rows whose exact ratio
    /// fits under that bound take the largest pivot (or the lowest basis
    /// index while anti-cycling). `None` means the column is a ray.
    fn ratio_test(&self, c: usize, bland: bool) -> Option<usize> {
        let n = self.ncols;
        let mut bound = f64::INFINITY;
        for row in &self.a {
            let aic = row[c];
            if aic > PIVOT_EPS {
                bound = bound.min((row[n].max(0.0) + HARRIS_TOL) / aic);
            }
        }
        if bound == f64::INFINITY {
            return None;
        }
        let mut leave: Option<usize> = None;
        for (i, row) in self.a.iter().enumerate() {
            let aic = row[c];
            if aic <= PIVOT_EPS || row[n].max(0.0) / aic > bound {
                continue;
            }
            leave = match leave {
                None => Some(i),
                Some(l) if bland && self.basis[i] < self.basis[l] => Some(i),
                Some(l) if !bland && aic > self.a[l][c] => Some(i),
                keep => keep,
            };
        }
        leave
    }

    /// Recomputes the basic values from the original rows. Rounding builds up
    /// in the tableau over many pivots; solving with the final basis directly
    /// restores the equality residuals to working precision. The tableau
    /// values are kept when the basis matrix is too ill-conditioned.
    fn refine(&self, initial: &[Vec<f64>], xs: &mut [f64]) {
        let n = self.ncols;
        let m: Vec<Vec<f64>> = self
            .origin
            .iter()
            .map(|&r| self.basis.iter().map(|&b| initial[r][b]).collect())
            .collect();
        let rhs: Vec<f64> = self.origin.iter().map(|&r| initial[r][n]).collect();
        let Some(y) = crate::linalg::solve(&m, &rhs, 1e-12) else {
            return;
        };
        let drift = self
            .basis
            .iter()
            .zip(&y)
            .fold(0.0f64, |acc, (&b, &v)| acc.max((xs[b] - v).abs()));
        if !y.iter().all(|v| v.is_finite()) || drift > 1e-6 {
            return;
        }
        for (&b, &v) in self.basis.iter().zip(&y) {
            xs[b] = v;
        }
    }

    /// After phase one, pivots artificial variables out of the basis and
    /// drops rows that turn out to be redundant.
    fn drive_out_artificials(&mut self, first_art: usize) {
        let mut dummy = vec![0.0; self.ncols + 1];
        let mut i = 0;
        while i < self.a.len() {
            if self.basis[i] < first_art {
                i += 1;
                continue;
            }
            let mut best: Option<(usize, f64)> = None;
            for j in 0..first_art {
                let v = self.a[i][j].abs();
                if v > 1e-9 && best.is_none_or(|(_, bv)| v > bv) {
                    best = Some((j, v));
                }
            }
            match best {
                Some((j, _)) => {
                    self.pivot(i, j, &mut dummy);
                    i += 1;
                }
                None => {
                    self.a.remove(i);
                    self.basis.remove(i);
                    self.origin.remove(i);
                }
            }
        }
    }
}
