//! Constructive Kirchberger reduction: shrink a common-point certificate to
//! at most `d + 2` points.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, combination};
use crate::Tolerances;

use super::{check_convex_certificate, check_same_dim};

/// Subsets `P* ⊆ P`, `Q* ⊆ Q` (as indices into the inputs) whose hulls meet,
/// with the convex coefficients of a common point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KirchbergerWitness {
    pub p_idx: Vec<usize>,
    pub q_idx: Vec<usize>,
    pub lambda: Vec<f64>,
    pub mu: Vec<f64>,
    pub x: Vec<f64>,
}

impl KirchbergerWitness {
    pub fn size(&self) -> usize {
        self.p_idx.len() + self.q_idx.len()
    }
}

fn normalize_sum(c: &mut [f64]) {
    let s: f64 = c.iter().sum();
    if s > 0.0 {
        for v in c.iter_mut() {
            *v /= s;
        }
    }
}

/// Eliminates points from a common-point certificate until at most `d + 2`
/// remain.
///
/// Each round takes the first `d + 3` active points (first set before second
/// set, increasing index) and a nonzero solution `(a, b)` of
/// `Σ a_i = 0`, `Σ b_j = 0`, `Σ a_i p_i = Σ b_j q_j`. Moving the coefficients
/// by `−ρ (a, b)` with the largest admissible `ρ` keeps the certificate valid
/// and zeroes at least one coefficient; ties drop the lowest-indexed point.
pub fn kirchberger_reduce(
    p: &[Vec<f64>],
    q: &[Vec<f64>],
    x: &[f64],
    lambda: &[f64],
    mu: &[f64],
    tol: &Tolerances,
) -> Result<KirchbergerWitness> {
    let d = check_same_dim(p, q)?;
    if p.is_empty() || q.is_empty() {
        return Err(Error::InvalidCertificate("both sets must be nonempty".into()));
    }
    let scale = 1.0
        + p.iter()
            .chain(q)
            .flat_map(|v| v.iter())
            .fold(0.0f64, |a, v| a.max(v.abs()));
    check_convex_certificate(p, q, x, lambda, mu, tol.geom * scale)?;

    let mut lam = lambda.to_vec();
    let mut nu = mu.to_vec();
    let np = p.len();
    loop {
        let active: Vec<usize> = (0..np)
            .filter(|&i| lam[i] > 0.0)
            .chain((0..q.len()).filter(|&j| nu[j] > 0.0).map(|j| np + j))
            .collect();
        if active.len() < d + 3 {
            break;
        }
        let chosen = &active[..d + 3];
        // Columns: [p; 1; 0] for the first set, [−q; 0; 1] for the second.
        let rows: Vec<Vec<f64>> = (0..d + 2)
            .map(|r| {
                chosen
                    .iter()
                    .map(|&g| {
                        if g < np {
                            if r < d {
                                p[g][r]
                            } else if r == d {
                                1.0
                            } else {
                                0.0
                            }
                        } else if r < d {
                            -q[g - np][r]
                        } else if r == d {
                            0.0
                        } else {
                            1.0
                        }
                    })
                    .collect()
            })
            .collect();
        let null = linalg::null_space(&rows, d + 3, 1e-12 * scale);
        let dir = null
            .into_iter()
            .next()
            .ok_or_else(|| Error::InvariantViolation("no null vector".into()))?;
        // Both groups sum to zero, so a nonzero vector has positive entries.
        let coef = |g: usize, lam: &[f64], nu: &[f64]| if g < np { lam[g] } else { nu[g - np] };
        let mut best: Option<(usize, f64)> = None;
        for (pos, &g) in chosen.iter().enumerate() {
            let a = dir[pos];
            if a <= 0.0 {
                continue;
            }
            let ratio = coef(g, &lam, &nu) / a;
            if best.is_none_or(|(_, r)| ratio < r) {
                best = Some((pos, ratio));
            }
        }
        let (hit, rho) =
            best.ok_or_else(|| Error::InvariantViolation("null vector has no positive entry".into()))?;
        for (pos, &g) in chosen.iter().enumerate() {
            let slot = if g < np { &mut lam[g] } else { &mut nu[g - np] };
            *slot -= rho * dir[pos];
            if *slot < 0.0 || pos == hit {
                *slot = 0.0;
            }
        }
        normalize_sum(&mut lam);
        normalize_sum(&mut nu);
    }

    let p_idx: Vec<usize> = (0..np).filter(|&i| lam[i] > 0.0).collect();
    let q_idx: Vec<usize> = (0..q.len()).filter(|&j| nu[j] > 0.0).collect();
    let lambda: Vec<f64> = p_idx.iter().map(|&i| lam[i]).collect();
    let mu: Vec<f64> = q_idx.iter().map(|&j| nu[j]).collect();
    let ps: Vec<Vec<f64>> = p_idx.iter().map(|&i| p[i].clone()).collect();
    let x = combination(&ps, &lambda, d);
    Ok(KirchbergerWitness {
        p_idx,
        q_idx,
        lambda,
        mu,
        x,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::separability::linear::interior_common_point;

    #[test]
    fn already_minimal_is_unchanged() {
        // d = 1: two points on each side would be 4 > 3; use 2 + 1.
        let p = vec![vec![0.0], vec![2.0]];
        let q = vec![vec![1.0]];
        let w = kirchberger_reduce(&p, &q, &[1.0], &[0.5, 0.5], &[1.0], &Tolerances::default())
            .unwrap();
        assert_eq!(w.p_idx, vec![0, 1]);
        assert_eq!(w.q_idx, vec![0]);
        assert_eq!(w.lambda, vec![0.5, 0.5]);
    }

    #[test]
    fn planar_reduction_to_four_points() {
        let p = vec![
            vec![0.0, 0.0],
            vec![4.0, 0.0],
            vec![0.0, 4.0],
            vec![4.0, 4.0],
            vec![2.0, 5.0],
        ];
        let q = vec![
            vec![2.0, 2.0],
            vec![3.0, 1.0],
            vec![1.0, 3.0],
            vec![6.0, 6.0],
        ];
        let tol = Tolerances::default();
        let (cp, t) = interior_common_point(&p, &q, &tol).unwrap();
        assert!(t > 0.0);
        let w = kirchberger_reduce(&p, &q, &cp.x, &cp.lambda, &cp.mu, &tol).unwrap();
        assert!(w.size() <= 4);
        let ps: Vec<Vec<f64>> = w.p_idx.iter().map(|&i| p[i].clone()).collect();
        let qs: Vec<Vec<f64>> = w.q_idx.iter().map(|&j| q[j].clone()).collect();
        check_convex_certificate(&ps, &qs, &w.x, &w.lambda, &w.mu, 1e-9).unwrap();
    }

    #[test]
    fn rejects_bad_certificate() {
        let p = vec![vec![0.0], vec![2.0]];
        let q = vec![vec![1.0]];
        let r = kirchberger_reduce(&p, &q, &[1.0], &[0.7, 0.7], &[1.0], &Tolerances::default());
        assert!(matches!(r, Err(Error::InvalidCertificate(_))));
    }
}
