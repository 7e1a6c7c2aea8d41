//! Linear separability by linear programming.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::affine_rank;
use crate::linalg::{self, combination, dot, norm, sub};
use crate::lp::{Cmp, LinearProgram, LpError, VarKind};
use crate::Tolerances;

use super::{require_nonempty, Hyperplane, SeparationResult};

/// Convex coefficients over `P` and `Q` recombining to the same point `x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommonPoint {
    pub x: Vec<f64>,
    pub lambda: Vec<f64>,
    pub mu: Vec<f64>,
}

impl CommonPoint {
    pub fn into_result(self) -> SeparationResult {
        SeparationResult::Inseparable {
            x: self.x,
            lambda: self.lambda,
            mu: self.mu,
        }
    }
}

const KELLEY_MAX_ITER: usize = 150;

/// Solves `max s` subject to `v·p ≤ c − s`, `v·q ≥ c + s`, `|v_i| ≤ 1` and
/// the extra cuts `u·v ≤ 1`. Returns `(v, c, s)`.
fn slack_lp(p: &[Vec<f64>], q: &[Vec<f64>], cuts: &[Vec<f64>]) -> Result<(Vec<f64>, f64, f64)> {
    let d = p[0].len();
    let nv = d + 2;
    let mut lp = LinearProgram::new(vec![VarKind::Free; nv]);
    let mut obj = vec![0.0; nv];
    obj[d + 1] = 1.0;
    lp.maximize(obj);
    for x in p {
        let mut row = x.clone();
        row.extend([-1.0, 1.0]);
        lp.constrain(row, Cmp::Le, 0.0);
    }
    for x in q {
        let mut row: Vec<f64> = x.iter().map(|v| -v).collect();
        row.extend([1.0, 1.0]);
        lp.constrain(row, Cmp::Le, 0.0);
    }
    for i in 0..d {
        let mut row = vec![0.0; nv];
        row[i] = 1.0;
        lp.constrain(row.clone(), Cmp::Le, 1.0);
        lp.constrain(row, Cmp::Ge, -1.0);
    }
    for u in cuts {
        let mut row = u.clone();
        row.extend([0.0, 0.0]);
        lp.constrain(row, Cmp::Le, 1.0);
    }
    let sol = lp.solve()?;
    let s = sol.x[d + 1];
    let c = sol.x[d];
    let mut v = sol.x;
    v.truncate(d);
    Ok((v, c, s))
}

/// Optimal slack of the box-normalized separation LP. Positive values mean
/// strict separability; the sign is what matters, the scale depends on the
/// box normalization.
pub fn strict_slack(p: &[Vec<f64>], q: &[Vec<f64>]) -> Result<f64> {
    require_nonempty(p, q)?;
    Ok(slack_lp(p, q, &[])?.2)
}

/// Cheap flag-only strict separability test (single LP).
pub fn strictly_separable(p: &[Vec<f64>], q: &[Vec<f64>], tol: &Tolerances) -> Result<bool> {
    Ok(strict_slack(p, q)? > tol.lp)
}

/// Best offset and half-gap for a fixed unit normal.
fn margin_along(p: &[Vec<f64>], q: &[Vec<f64>], n: &[f64]) -> (f64, f64) {
    let hi_p = p.iter().map(|x| dot(n, x)).fold(f64::NEG_INFINITY, f64::max);
    let lo_q = q.iter().map(|x| dot(n, x)).fold(f64::INFINITY, f64::min);
    ((hi_p + lo_q) / 2.0, (lo_q - hi_p) / 2.0)
}

/// Euclidean maximum-margin hyperplane, or `None` when the sets are not
/// strictly separable.
///
/// The Euclidean constraint `|v| ≤ 1` is approached from outside by the box
/// `|v_i| ≤ 1` plus tangent cuts added at each LP optimum, which gives an
/// upper bound on the margin; the normalized LP direction gives a lower
/// bound. Iteration stops when both agree.
pub fn max_margin_hyperplane(
    p: &[Vec<f64>],
    q: &[Vec<f64>],
    tol: &Tolerances,
) -> Result<Option<(Hyperplane, f64)>> {
    require_nonempty(p, q)?;
    let (mut v, _, s0) = slack_lp(p, q, &[])?;
    if s0 <= tol.lp {
        return Ok(None);
    }
    let mut best_n = linalg::scale(&v, 1.0 / norm(&v));
    let (mut best_c, mut best_m) = margin_along(p, q, &best_n);
    let mut cuts = Vec::new();
    let mut upper = s0;
    for _ in 0..KELLEY_MAX_ITER {
        if upper - best_m <= 1e-12 + 1e-8 * upper {
            break;
        }
        cuts.push(linalg::scale(&v, 1.0 / norm(&v)));
        let (nv, _, s) = slack_lp(p, q, &cuts)?;
        v = nv;
        upper = upper.min(s);
        let n = linalg::scale(&v, 1.0 / norm(&v));
        let (c, m) = margin_along(p, q, &n);
        if m > best_m {
            best_m = m;
            best_c = c;
            best_n = n;
        }
    }
    Ok(Some((
        Hyperplane {
            normal: best_n,
            offset: best_c,
        },
        best_m,
    )))
}

/// Decides linear separability of `P` (below) and `Q` (above).
///
/// Strictly separable pairs always come back as `Separable { strict: true }`
/// with the maximum-margin hyperplane. Otherwise, with `strict` set the
/// result is a common hull point; with `strict` unset the pair is tested for
/// weak separability, and an inseparable answer carries strictly positive
/// coefficients (a relative-interior common point), which is what rules out
/// weak separation.
pub fn linear_separability(
    p: &[Vec<f64>],
    q: &[Vec<f64>],
    strict: bool,
    tol: &Tolerances,
) -> Result<SeparationResult> {
    require_nonempty(p, q)?;
    if let Some((hyperplane, margin)) = max_margin_hyperplane(p, q, tol)? {
        return Ok(SeparationResult::Separable {
            hyperplane,
            strict: true,
            margin,
        });
    }
    if strict {
        match common_point(p, q, tol) {
            Ok(cp) => Ok(cp.into_result()),
            // The hulls are closer than the strictness threshold but do not
            // meet: report the touching hyperplane.
            Err(Error::ActuallySeparable) => weak_hyperplane(p, q, tol)?.ok_or_else(|| {
                Error::InvariantViolation("neither separable nor intersecting".into())
            }),
            Err(e) => Err(e),
        }
    } else {
        if let Some(res) = weak_hyperplane(p, q, tol)? {
            return Ok(res);
        }
        match interior_common_point(p, q, tol) {
            Ok((cp, _)) => Ok(cp.into_result()),
            Err(Error::ActuallySeparable) => Ok(common_point(p, q, tol)?.into_result()),
            Err(e) => Err(e),
        }
    }
}

/// Weakly separating hyperplane if one exists.
fn weak_hyperplane(p: &[Vec<f64>], q: &[Vec<f64>], tol: &Tolerances) -> Result<Option<SeparationResult>> {
    let d = p[0].len();
    let all: Vec<Vec<f64>> = p.iter().chain(q).cloned().collect();
    let (r, _) = affine_rank(&all, tol.rank);
    if r < d {
        // Everything lies on a common hyperplane.
        let rows: Vec<Vec<f64>> = all[1..].iter().map(|x| sub(x, &all[0])).collect();
        let null = linalg::null_space(&rows, d, tol.rank);
        let n = linalg::normalized(&null[0], 0.0).expect("null vector is nonzero");
        let offset = dot(&n, &all[0]);
        return Ok(Some(SeparationResult::Separable {
            hyperplane: Hyperplane { normal: n, offset },
            strict: false,
            margin: 0.0,
        }));
    }
    let mean = |s: &[Vec<f64>]| {
        let mut m = vec![0.0; d];
        for x in s {
            linalg::axpy(1.0 / s.len() as f64, x, &mut m);
        }
        m
    };
    let gap = sub(&mean(q), &mean(p));
    if norm(&gap) <= tol.rank {
        return Ok(None);
    }
    let mut lp = LinearProgram::new(vec![VarKind::Free; d + 1]);
    for x in p {
        let mut row = x.clone();
        row.push(-1.0);
        lp.constrain(row, Cmp::Le, 0.0);
    }
    for x in q {
        let mut row = x.clone();
        row.push(-1.0);
        lp.constrain(row, Cmp::Ge, 0.0);
    }
    let mut row = gap;
    row.push(0.0);
    lp.constrain(row, Cmp::Eq, 1.0);
    match lp.solve() {
        Ok(sol) => {
            let v = &sol.x[..d];
            let nv = norm(v);
            Ok(Some(SeparationResult::Separable {
                hyperplane: Hyperplane {
                    normal: linalg::scale(v, 1.0 / nv),
                    offset: sol.x[d] / nv,
                },
                strict: false,
                margin: 0.0,
            }))
        }
        Err(LpError::Infeasible) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

fn clean_convex(c: &mut [f64]) {
    for v in c.iter_mut() {
        if *v < 0.0 {
            *v = 0.0;
        }
    }
    let s: f64 = c.iter().sum();
    if s > 0.0 {
        for v in c.iter_mut() {
            *v /= s;
        }
    }
}

fn hull_lp(p: &[Vec<f64>], q: &[Vec<f64>], interior: bool) -> Result<(CommonPoint, f64)> {
    let d = p[0].len();
    let (np, nq) = (p.len(), q.len());
    let nv = np + nq + usize::from(interior);
    let mut kinds = vec![VarKind::NonNeg; np + nq];
    if interior {
        kinds.push(VarKind::Free);
    }
    let mut lp = LinearProgram::new(kinds);
    let mut obj = vec![0.0; nv];
    if interior {
        obj[nv - 1] = 1.0;
    }
    lp.maximize(obj);
    for r in 0..d {
        let mut row = vec![0.0; nv];
        for (j, x) in p.iter().enumerate() {
            row[j] = x[r];
        }
        for (j, x) in q.iter().enumerate() {
            row[np + j] = -x[r];
        }
        lp.constrain(row, Cmp::Eq, 0.0);
    }
    let mut row = vec![0.0; nv];
    row[..np].fill(1.0);
    lp.constrain(row, Cmp::Eq, 1.0);
    let mut row = vec![0.0; nv];
    row[np..np + nq].fill(1.0);
    lp.constrain(row, Cmp::Eq, 1.0);
    if interior {
        for j in 0..np + nq {
            let mut row = vec![0.0; nv];
            row[j] = 1.0;
            row[nv - 1] = -1.0;
            lp.constrain(row, Cmp::Ge, 0.0);
        }
    }
    let sol = match lp.solve() {
        Ok(s) => s,
        Err(LpError::Infeasible) => return Err(Error::ActuallySeparable),
        Err(e) => return Err(e.into()),
    };
    let mut lambda = sol.x[..np].to_vec();
    let mut mu = sol.x[np..np + nq].to_vec();
    clean_convex(&mut lambda);
    clean_convex(&mut mu);
    let x = combination(p, &lambda, d);
    let t = if interior { sol.x[nv - 1] } else { 0.0 };
    Ok((CommonPoint { x, lambda, mu }, t))
}

/// A point of `CH(P) ∩ CH(Q)` with its convex coefficients.
pub fn common_point(p: &[Vec<f64>], q: &[Vec<f64>], _tol: &Tolerances) -> Result<CommonPoint> {
    require_nonempty(p, q)?;
    Ok(hull_lp(p, q, false)?.0)
}

/// Common hull point maximizing the smallest coefficient. Returns the
/// certificate and that smallest coefficient; a positive value shows the
/// relative interiors of the hulls meet.
pub fn interior_common_point(
    p: &[Vec<f64>],
    q: &[Vec<f64>],
    _tol: &Tolerances,
) -> Result<(CommonPoint, f64)> {
    require_nonempty(p, q)?;
    hull_lp(p, q, true)
}

/// Convex coefficients expressing `x` over `P`, if `x ∈ CH(P)`.
pub fn point_in_hull(x: &[f64], p: &[Vec<f64>], tol: &Tolerances) -> Result<Option<Vec<f64>>> {
    if p.is_empty() {
        return Err(Error::EmptyInput("hull points"));
    }
    let d = x.len();
    for y in p {
        if y.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: y.len(),
            });
        }
    }
    let n = p.len();
    let mut lp = LinearProgram::new(vec![VarKind::NonNeg; n]);
    for r in 0..d {
        let row = p.iter().map(|y| y[r]).collect();
        lp.constrain(row, Cmp::Eq, x[r]);
    }
    lp.constrain(vec![1.0; n], Cmp::Eq, 1.0);
    match lp.solve() {
        Ok(sol) => {
            let mut c = sol.x;
            clean_convex(&mut c);
            let scale = 1.0 + x.iter().fold(0.0f64, |a, v| a.max(v.abs()));
            if linalg::distance(&combination(p, &c, d), x) > tol.geom * scale {
                return Ok(None);
            }
            Ok(Some(c))
        }
        Err(LpError::Infeasible) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn unit_gap_in_one_dimension() {
        let r = linear_separability(&[vec![0.0]], &[vec![1.0]], true, &tol()).unwrap();
        match r {
            SeparationResult::Separable {
                hyperplane,
                strict,
                margin,
            } => {
                assert!(strict);
                assert!((margin - 0.5).abs() < 1e-12);
                assert!((hyperplane.normal[0] - 1.0).abs() < 1e-12);
                assert!((hyperplane.offset - 0.5).abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn interleaved_intervals() {
        let p = vec![vec![0.0], vec![2.0]];
        let q = vec![vec![1.0], vec![3.0]];
        let r = linear_separability(&p, &q, true, &tol()).unwrap();
        match &r {
            SeparationResult::Inseparable { x, .. } => assert!(x[0] >= 1.0 - 1e-12 && x[0] <= 2.0 + 1e-12),
            other => panic!("{other:?}"),
        }
        r.validate(&p, &q, 1e-9, 1e-9).unwrap();
        let w = linear_separability(&p, &q, false, &tol()).unwrap();
        assert!(!w.is_separable());
        w.validate(&p, &q, 1e-9, 1e-9).unwrap();
    }

    #[test]
    fn touching_sets_are_weakly_separable() {
        let p = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, -1.0]];
        let q = vec![vec![1.0, 0.0], vec![2.0, 1.0], vec![1.0, 1.0]];
        let s = linear_separability(&p, &q, true, &tol()).unwrap();
        assert!(!s.is_separable());
        let w = linear_separability(&p, &q, false, &tol()).unwrap();
        assert!(w.is_separable() && !w.is_strictly_separable());
        w.validate(&p, &q, 1e-9, 1e-9).unwrap();
    }

    #[test]
    fn identical_singletons() {
        let cp = common_point(&[vec![1.0, 2.0]], &[vec![1.0, 2.0]], &tol()).unwrap();
        assert_eq!(cp.x, vec![1.0, 2.0]);
        assert_eq!(cp.lambda, vec![1.0]);
        assert_eq!(cp.mu, vec![1.0]);
        assert_eq!(
            common_point(&[vec![0.0]], &[vec![1.0]], &tol()),
            Err(Error::ActuallySeparable)
        );
    }

    #[test]
    fn hull_membership() {
        let p = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]];
        let c = point_in_hull(&[0.0, 0.0], &p, &tol()).unwrap().unwrap();
        assert!((c[0] - 1.0).abs() < 1e-12);
        assert!(point_in_hull(&[5.0, 5.0], &p, &tol()).unwrap().is_none());
    }

    #[test]
    fn euclidean_margin_on_a_diagonal_gap() {
        // The box-normalized LP prefers the diagonal; the Euclidean margin is
        // along (1, 1)/sqrt(2) with half-gap sqrt(2)/2.
        let p = vec![vec![0.0, 0.0]];
        let q = vec![vec![1.0, 1.0]];
        let (h, m) = max_margin_hyperplane(&p, &q, &tol()).unwrap().unwrap();
        assert!((m - 0.5f64.sqrt()).abs() < 1e-9);
        assert!((h.normal[0] - h.normal[1]).abs() < 1e-6);
    }
}
