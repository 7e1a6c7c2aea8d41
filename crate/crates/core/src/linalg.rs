//! Small dense linear algebra kernels.
//!
//! Everything here works on `&[f64]` rows and `Vec<Vec<f64>>` matrices. The
//! problems this crate deals with have dimension ≲ 10, so a plain Gaussian
//! elimination with complete pivoting is both fast enough and the most robust
//! rank-revealing option that does not need an external LAPACK.

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|x| x * s).collect()
}

/// `y += alpha * x`
pub fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// Returns `a / |a|`, or `None` when `|a| <= tol`.
pub fn normalized(a: &[f64], tol: f64) -> Option<Vec<f64>> {
    let n = norm(a);
    (n > tol).then(|| scale(a, 1.0 / n))
}

pub fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Weighted sum `Σ c_i p_i` of equally sized vectors.
pub fn combination(points: &[Vec<f64>], coeffs: &[f64], dim: usize) -> Vec<f64> {
    let mut out = vec![0.0; dim];
    for (p, &c) in points.iter().zip(coeffs) {
        if c != 0.0 {
            axpy(c, p, &mut out);
        }
    }
    out
}

pub fn mat_vec(m: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    m.iter().map(|row| dot(row, x)).collect()
}

pub fn transpose(m: &[Vec<f64>], cols: usize) -> Vec<Vec<f64>> {
    (0..cols).map(|j| m.iter().map(|row| row[j]).collect()).collect()
}

pub fn mat_mul(a: &[Vec<f64>], b: &[Vec<f64>], b_cols: usize) -> Vec<Vec<f64>> {
    a.iter()
        .map(|row| {
            (0..b_cols)
                .map(|j| row.iter().zip(b).map(|(x, brow)| x * brow[j]).sum())
                .collect()
        })
        .collect()
}

/// Row echelon reduction of an `rows × cols` matrix with complete pivoting.
#[derive(Debug, Clone)]
pub struct Echelon {
    /// Reduced matrix; the leading `rank × rank` block is upper triangular in
    /// the permuted column order.
    pub reduced: Vec<Vec<f64>>,
    /// Right-hand sides carried along with the row operations (may be empty).
    pub rhs: Vec<Vec<f64>>,
    /// `col_perm[j]` is the original column sitting at position `j`.
    pub col_perm: Vec<usize>,
    pub rank: usize,
    /// Magnitude of the smallest accepted pivot, `+inf` for rank 0.
    pub min_pivot: f64,
}

/// Gaussian elimination with complete pivoting. Pivots with magnitude
/// `<= tol` are treated as zero. Each entry of `rhs` is a column vector of
/// length `rows` that undergoes the same row operations.
pub fn echelon(m: &[Vec<f64>], cols: usize, rhs: &[Vec<f64>], tol: f64) -> Echelon {
    let rows = m.len();
    let mut a: Vec<Vec<f64>> = m.to_vec();
    let mut b: Vec<Vec<f64>> = rhs.to_vec();
    let mut col_perm: Vec<usize> = (0..cols).collect();
    let mut rank = 0;
    let mut min_pivot = f64::INFINITY;

    for step in 0..rows.min(cols) {
        let mut best = (step, step, 0.0f64);
        for (i, row) in a.iter().enumerate().skip(step) {
            for (j, &value) in row.iter().enumerate().skip(step) {
                if value.abs() > best.2 {
                    best = (i, j, value.abs());
                }
            }
        }
        if best.2 <= tol {
            break;
        }
        let (pi, pj, pv) = best;
        a.swap(step, pi);
        for col in b.iter_mut() {
            col.swap(step, pi);
        }
        if pj != step {
            for row in a.iter_mut() {
                row.swap(step, pj);
            }
            col_perm.swap(step, pj);
        }
        min_pivot = min_pivot.min(pv);
        let pivot = a[step][step];
        for i in step + 1..rows {
            let factor = a[i][step] / pivot;
            if factor == 0.0 {
                continue;
            }
            a[i][step] = 0.0;
            for j in step + 1..cols {
                a[i][j] -= factor * a[step][j];
            }
            for col in b.iter_mut() {
                col[i] -= factor * col[step];
            }
        }
        rank += 1;
    }

    Echelon {
        reduced: a,
        rhs: b,
        col_perm,
        rank,
        min_pivot,
    }
}

pub fn rank(m: &[Vec<f64>], cols: usize, tol: f64) -> usize {
    echelon(m, cols, &[], tol).rank
}

impl Echelon {
    /// Back substitution for the right-hand side `which`, setting free
    /// variables to zero. Returns the solution in original column order and
    /// the largest residual left in the rows below the rank.
    pub fn solve_particular(&self, which: usize, cols: usize) -> (Vec<f64>, f64) {
        let r = self.rank;
        let b = &self.rhs[which];
        let mut y = vec![0.0; cols];
        for i in (0..r).rev() {
            let mut s = b[i];
            for j in i + 1..r {
                s -= self.reduced[i][j] * y[j];
            }
            y[i] = s / self.reduced[i][i];
        }
        let inconsistency = b[r..].iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        let mut x = vec![0.0; cols];
        for (pos, &orig) in self.col_perm.iter().enumerate() {
            x[orig] = y[pos];
        }
        (x, inconsistency)
    }

    /// Basis of the null space (not orthonormalized), in original column
    /// order. Has `cols - rank` vectors.
    pub fn null_space(&self, cols: usize) -> Vec<Vec<f64>> {
        let r = self.rank;
        let mut basis = Vec::with_capacity(cols - r);
        for free in r..cols {
            let mut y = vec![0.0; cols];
            y[free] = 1.0;
            for i in (0..r).rev() {
                let mut s = 0.0;
                for j in i + 1..cols {
                    s -= self.reduced[i][j] * y[j];
                }
                y[i] = s / self.reduced[i][i];
            }
            let mut x = vec![0.0; cols];
            for (pos, &orig) in self.col_perm.iter().enumerate() {
                x[orig] = y[pos];
            }
            basis.push(x);
        }
        basis
    }
}

/// Solves the square system `m x = b`. Returns `None` when the matrix is
/// singular relative to `tol`.
pub fn solve(m: &[Vec<f64>], b: &[f64], tol: f64) -> Option<Vec<f64>> {
    let n = b.len();
    let e = echelon(m, n, &[b.to_vec()], tol);
    if e.rank < n {
        return None;
    }
    Some(e.solve_particular(0, n).0)
}

/// Null space of `m` (`rows × cols`).
pub fn null_space(m: &[Vec<f64>], cols: usize, tol: f64) -> Vec<Vec<f64>> {
    echelon(m, cols, &[], tol).null_space(cols)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_small_system() {
        let m = vec![vec![2.0, 1.0], vec![1.0, 3.0]];
        let x = solve(&m, &[3.0, 5.0], 1e-12).unwrap();
        assert!((x[0] - 0.8).abs() < 1e-14);
        assert!((x[1] - 1.4).abs() < 1e-14);
    }

    #[test]
    fn singular_system_is_rejected() {
        let m = vec![vec![1.0, 2.0], vec![2.0, 4.0]];
        assert!(solve(&m, &[1.0, 2.0], 1e-12).is_none());
        assert_eq!(rank(&m, 2, 1e-12), 1);
    }

    #[test]
    fn null_space_is_annihilated() {
        let m = vec![vec![1.0, 2.0, 3.0, 4.0], vec![0.5, -1.0, 2.0, 0.0]];
        let ns = null_space(&m, 4, 1e-12);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for row in &m {
                assert!(dot(row, v).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn inconsistent_rhs_is_reported() {
        let m = vec![vec![1.0, 1.0], vec![1.0, 1.0]];
        let e = echelon(&m, 2, &[vec![1.0, 2.0]], 1e-12);
        let (_, bad) = e.solve_particular(0, 2);
        assert!(bad > 0.5);
    }
}
