//! `(1,∞)`-separability: one of the sets can be covered by a single convex
//! set avoiding the other, i.e. no point of one set lies in the hull of the
//! other.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::sub;
use crate::lp::{Cmp, LinearProgram, LpError, VarKind};
use crate::Tolerances;

use super::linear::point_in_hull;
use super::require_nonempty;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OneInftyOutcome {
    pub separable: bool,
    /// Lowest-indexed point of `P` inside `CH(Q)`.
    pub p_star: Option<usize>,
    /// Lowest-indexed point of `Q` inside `CH(P)`.
    pub q_star: Option<usize>,
}

fn first_inside(points: &[Vec<f64>], hull: &[Vec<f64>], tol: &Tolerances) -> Result<Option<usize>> {
    for (i, x) in points.iter().enumerate() {
        if point_in_hull(x, hull, tol)?.is_some() {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

/// `false` iff some `p* ∈ CH(Q)` and some `q* ∈ CH(P)`; the witnesses are
/// returned in that case.
pub fn one_infty_separable(p: &[Vec<f64>], q: &[Vec<f64>], tol: &Tolerances) -> Result<OneInftyOutcome> {
    require_nonempty(p, q)?;
    let q_star = first_inside(q, p, tol)?;
    if q_star.is_none() {
        return Ok(OneInftyOutcome {
            separable: true,
            p_star: None,
            q_star: None,
        });
    }
    let p_star = first_inside(p, q, tol)?;
    Ok(OneInftyOutcome {
        separable: p_star.is_none(),
        p_star,
        q_star,
    })
}

/// Small subset of `set` whose hull contains `target` and which includes
/// `set[center]`: shoot the ray from the center through the target, take the
/// exit point of the hull and keep the support of its convex coefficients.
fn star_simplex(set: &[Vec<f64>], center: usize, target: &[f64], tol: &Tolerances) -> Result<Vec<usize>> {
    let c = &set[center];
    let dir = sub(target, c);
    let d = c.len();
    let n = set.len();
    if dir.iter().all(|v| v.abs() <= tol.geom) {
        return Ok(vec![center]);
    }
    // Variables: λ (n, ≥ 0), t (free). Σ λ_i s_i − t·dir = c, Σ λ = 1.
    let mut kinds = vec![VarKind::NonNeg; n];
    kinds.push(VarKind::Free);
    let mut lp = LinearProgram::new(kinds);
    let mut obj = vec![0.0; n + 1];
    obj[n] = 1.0;
    lp.maximize(obj);
    for r in 0..d {
        let mut row: Vec<f64> = set.iter().map(|s| s[r]).collect();
        row.push(-dir[r]);
        lp.constrain(row, Cmp::Eq, c[r]);
    }
    let mut row = vec![1.0; n];
    row.push(0.0);
    lp.constrain(row, Cmp::Eq, 1.0);
    let sol = match lp.solve() {
        Ok(s) => s,
        Err(LpError::Infeasible) => {
            return Err(Error::InvalidWitness("center is not in the hull".into()))
        }
        Err(e) => return Err(e.into()),
    };
    if sol.x[n] < 1.0 - 1e-9 {
        return Err(Error::InvalidWitness("target is not in the hull".into()));
    }
    let mut out = vec![center];
    for (i, &l) in sol.x[..n].iter().enumerate() {
        if l > 1e-12 && i != center {
            out.push(i);
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Helly witness for non-`(1,∞)`-separability: `P* ∋ p*` with
/// `q* ∈ CH(P*)`, `Q* ∋ q*` with `p* ∈ CH(Q*)`, each of size at most
/// `d + 1` in general position. Returns indices into `P` and `Q`.
pub fn one_infty_witness(
    p: &[Vec<f64>],
    q: &[Vec<f64>],
    p_star: usize,
    q_star: usize,
    tol: &Tolerances,
) -> Result<(Vec<usize>, Vec<usize>)> {
    require_nonempty(p, q)?;
    if p_star >= p.len() || q_star >= q.len() {
        return Err(Error::InvalidWitness("witness index out of range".into()));
    }
    let ps = star_simplex(p, p_star, &q[q_star], tol)?;
    let qs = star_simplex(q, q_star, &p[p_star], tol)?;
    let sub_p: Vec<Vec<f64>> = ps.iter().map(|&i| p[i].clone()).collect();
    let sub_q: Vec<Vec<f64>> = qs.iter().map(|&j| q[j].clone()).collect();
    if point_in_hull(&q[q_star], &sub_p, tol)?.is_none() || point_in_hull(&p[p_star], &sub_q, tol)?.is_none()
    {
        return Err(Error::InvalidWitness("containment does not verify".into()));
    }
    Ok((ps, qs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn disjoint_hulls() {
        let r = one_infty_separable(&[vec![0.0], vec![1.0]], &[vec![2.0], vec![3.0]], &tol()).unwrap();
        assert!(r.separable);
    }

    #[test]
    fn square_around_center() {
        let p = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]];
        let q = vec![vec![0.5, 0.5]];
        let r = one_infty_separable(&p, &q, &tol()).unwrap();
        assert!(r.separable);
        assert_eq!(r.q_star, Some(0));
        assert_eq!(r.p_star, None);
    }

    #[test]
    fn one_dimensional_witness() {
        let p = vec![vec![0.0], vec![2.0]];
        let q = vec![vec![1.0], vec![-1.0], vec![3.0]];
        let r = one_infty_separable(&p, &q, &tol()).unwrap();
        assert!(!r.separable);
        let (ps, qs) = one_infty_witness(&p, &q, r.p_star.unwrap(), r.q_star.unwrap(), &tol()).unwrap();
        assert!(ps.len() <= 2 && qs.len() <= 2);
        assert!(ps.contains(&r.p_star.unwrap()) && qs.contains(&r.q_star.unwrap()));
    }
}
