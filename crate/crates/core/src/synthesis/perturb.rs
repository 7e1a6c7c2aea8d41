//! Perturbing a projection vector so that the projected classes become
//! inseparable even non-strictly and the projected points are in general
//! position.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{affinely_independent, general_position_violation, OrthoBasis};
use crate::linalg::{self, dot, norm};
use crate::separability::{common_point, kirchberger_reduce, linear_separability};
use crate::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerturbOptions {
    /// Largest allowed `|w'' − w|`.
    pub epsilon: f64,
    /// Number of attempts; each halves the allowance and, after the first,
    /// mixes towards a different random target.
    pub max_attempts: usize,
}

impl Default for PerturbOptions {
    fn default() -> Self {
        Self {
            epsilon: 1e-6,
            max_attempts: 40,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Perturbation {
    /// Perturbed unit vector, sign-aligned with the input.
    pub w: Vec<f64>,
    /// `|w'' − w|`.
    pub deviation: f64,
    /// Mixing weight applied to the coefficients.
    pub eta: f64,
    /// Allowance halvings used.
    pub attempts: usize,
    /// The `d + 1` points carrying the certificate, as `(is_second_set,
    /// index)`, and their perturbed coefficients.
    pub support: Vec<(bool, usize)>,
    pub coefficients: Vec<f64>,
}

/// Works in the `(d−1)`-dimensional coordinates orthogonal to `w`. A common
/// point of the projected classes is reduced to `d + 1` points, `p_1` is the
/// first-set point with the largest coefficient, and the remaining points
/// `B` are kept fixed. Mixing the coefficients towards a positive target by a
/// weight `η` and solving for the point `p* = Σ_B β_b b` with
/// `λ'_1 p* = Σ_B (μ'_b − λ'_b) b` gives the new vector `w'' = p_1 − p*`,
/// along which the perturbed coefficients recombine to a common point with
/// every coefficient positive.
///
/// The first attempt uses uniform targets and keeps `λ'_1 = λ_1` (unless
/// `λ_1 = 1`). Later attempts halve the allowance, draw random targets and
/// mix `λ_1` as well, since with the anchor fixed the family of directions
/// can stay inside a degenerate configuration.
pub fn perturb_general_position(
    p: &[Vec<f64>],
    q: &[Vec<f64>],
    w: &[f64],
    opts: &PerturbOptions,
    tol: &Tolerances,
) -> Result<Perturbation> {
    let d = w.len();
    if p.is_empty() || q.is_empty() {
        return Err(Error::EmptyInput("both point sets must be nonempty"));
    }
    for x in p.iter().chain(q) {
        if x.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: x.len(),
            });
        }
    }
    if p.len() + q.len() < d + 1 {
        return Err(Error::TooFewPoints {
            have: p.len() + q.len(),
            need: d + 1,
        });
    }
    let w = linalg::normalized(w, tol.geom).ok_or(Error::BadParams("w is zero".into()))?;
    let frame = OrthoBasis::from_orthonormal(d, vec![w.clone()], tol.orth)?.complement();
    let rp: Vec<Vec<f64>> = p.iter().map(|x| frame.coordinates(x)).collect();
    let rq: Vec<Vec<f64>> = q.iter().map(|x| frame.coordinates(x)).collect();
    let cp = common_point(&rp, &rq, tol).map_err(|e| match e {
        Error::ActuallySeparable => Error::NotIntersecting,
        other => other,
    })?;
    let kw = kirchberger_reduce(&rp, &rq, &cp.x, &cp.lambda, &cp.mu, tol)?;

    // Support of exactly d + 1 points, padded with zero coefficients.
    let mut lam: Vec<(usize, f64)> = kw.p_idx.iter().copied().zip(kw.lambda.iter().copied()).collect();
    let mut mu: Vec<(usize, f64)> = kw.q_idx.iter().copied().zip(kw.mu.iter().copied()).collect();
    let mut pad = (0..p.len())
        .map(|i| (false, i))
        .chain((0..q.len()).map(|j| (true, j)))
        .filter(|&(second, i)| {
            if second {
                !kw.q_idx.contains(&i)
            } else {
                !kw.p_idx.contains(&i)
            }
        });
    while lam.len() + mu.len() < d + 1 {
        match pad.next() {
            Some((false, i)) => lam.push((i, 0.0)),
            Some((true, j)) => mu.push((j, 0.0)),
            None => unreachable!("enough points were checked above"),
        }
    }

    // Anchor p_1: largest coefficient whose removal leaves an affinely
    // independent set.
    let mut order: Vec<usize> = (0..lam.len()).collect();
    order.sort_by(|&a, &b| lam[b].1.total_cmp(&lam[a].1).then(lam[a].0.cmp(&lam[b].0)));
    let anchor = order
        .into_iter()
        .filter(|&a| lam[a].1 > 0.0)
        .find(|&a| {
            let others: Vec<Vec<f64>> = lam
                .iter()
                .enumerate()
                .filter(|&(t, _)| t != a)
                .map(|(_, &(i, _))| p[i].clone())
                .chain(mu.iter().map(|&(j, _)| q[j].clone()))
                .collect();
            affinely_independent(&others, tol.rank)
        })
        .ok_or_else(|| Error::DegeneratePosition("no anchor with independent remainder".into()))?;
    let (p1, lambda1) = lam[anchor];
    let others_p: Vec<(usize, f64)> = lam.iter().enumerate().filter(|&(t, _)| t != anchor).map(|(_, &v)| v).collect();

    let n_p = lam.len();
    let n_q = mu.len();
    // Keeping the anchor's coefficient fixed leaves too little freedom when
    // it carries all of the first set's weight, or when the fixed-anchor
    // family stays inside a degenerate configuration; the anchor is then
    // mixed towards the target too.
    let saturated = n_p > 1 && lambda1 >= 1.0 - 1e-12;
    let direction = |eta: f64, mix_anchor: bool, target_p: &[f64], target_q: &[f64]| -> (Vec<f64>, Vec<f64>) {
        // Perturbed coefficients in support order: anchor, other P, Q.
        let l1 = if mix_anchor {
            (1.0 - eta) * lambda1 + eta * target_p[0]
        } else {
            lambda1
        };
        let rest: f64 = target_p[1..].iter().sum();
        let mut coeffs = vec![l1];
        let mut pstar = vec![0.0; d];
        for (&(i, l), &t) in others_p.iter().zip(&target_p[1..]) {
            let lp = if mix_anchor {
                (1.0 - eta) * l + eta * t
            } else {
                (1.0 - eta) * l + eta * (1.0 - lambda1) * t / rest
            };
            coeffs.push(lp);
            linalg::axpy(-lp / l1, &p[i], &mut pstar);
        }
        for (&(j, m), &t) in mu.iter().zip(target_q) {
            let mp = (1.0 - eta) * m + eta * t;
            coeffs.push(mp);
            linalg::axpy(mp / l1, &q[j], &mut pstar);
        }
        let mut dir = linalg::sub(&p[p1], &pstar);
        if dot(&dir, &w) < 0.0 {
            dir = linalg::scale(&dir, -1.0);
        }
        (linalg::scale(&dir, 1.0 / norm(&dir)), coeffs)
    };
    // Uniform targets first; later attempts draw positive random targets so
    // the perturbation direction varies.
    let targets = |attempt: usize| -> (Vec<f64>, Vec<f64>) {
        if attempt == 0 {
            return (vec![1.0 / n_p as f64; n_p], vec![1.0 / n_q as f64; n_q]);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(attempt as u64);
        let mut draw = |n: usize| {
            let v: Vec<f64> = (0..n).map(|_| rng.random_range(0.5..1.5)).collect();
            let s: f64 = v.iter().sum();
            v.into_iter().map(|x| x / s).collect::<Vec<f64>>()
        };
        (draw(n_p), draw(n_q))
    };
    let support: Vec<(bool, usize)> = std::iter::once((false, p1))
        .chain(others_p.iter().map(|&(i, _)| (false, i)))
        .chain(mu.iter().map(|&(j, _)| (true, j)))
        .collect();

    let all: Vec<Vec<f64>> = p.iter().chain(q).cloned().collect();
    let mut allowance = opts.epsilon;
    for attempt in 0..opts.max_attempts {
        let (target_p, target_q) = targets(attempt);
        let mut eta = 1.0;
        let mut found = None;
        for _ in 0..200 {
            let (cand, coeffs) = direction(eta, saturated || attempt > 0, &target_p, &target_q);
            let dev = linalg::distance(&cand, &w);
            if dev <= allowance {
                found = Some((cand, coeffs, dev));
                break;
            }
            eta /= 2.0;
        }
        let Some((cand, coeffs, dev)) = found else {
            allowance /= 2.0;
            continue;
        };
        if verify(&cand, p, q, &all, tol)? {
            return Ok(Perturbation {
                w: cand,
                deviation: dev,
                eta,
                attempts: attempt + 1,
                support,
                coefficients: coeffs,
            });
        }
        allowance /= 2.0;
    }
    Err(Error::PerturbationFailed {
        attempts: opts.max_attempts,
    })
}

fn verify(w: &[f64], p: &[Vec<f64>], q: &[Vec<f64>], all: &[Vec<f64>], tol: &Tolerances) -> Result<bool> {
    let d = w.len();
    let frame = OrthoBasis::from_orthonormal(d, vec![w.to_vec()], 1e-9)?.complement();
    let rp: Vec<Vec<f64>> = p.iter().map(|x| frame.coordinates(x)).collect();
    let rq: Vec<Vec<f64>> = q.iter().map(|x| frame.coordinates(x)).collect();
    if linear_separability(&rp, &rq, false, tol)?.is_separable() {
        return Ok(false);
    }
    let reduced: Vec<Vec<f64>> = all.iter().map(|x| frame.coordinates(x)).collect();
    Ok(general_position_violation(&reduced, tol.rank).is_none())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overlapping_interiors_barely_move() {
        // Projecting along z: squares overlap with positive area.
        let p = vec![
            vec![0.0, 0.0, 0.1],
            vec![2.0, 0.1, -0.3],
            vec![0.2, 2.0, 0.7],
        ];
        let q = vec![
            vec![1.0, 0.9, 5.0],
            vec![3.0, 1.1, 4.2],
            vec![1.1, 3.0, 6.1],
        ];
        let r = perturb_general_position(&p, &q, &[0.0, 0.0, 1.0], &PerturbOptions::default(), &Tolerances::default())
            .unwrap();
        assert!(r.deviation <= 1e-6);
    }

    #[test]
    fn too_few_points() {
        let r = perturb_general_position(
            &[vec![0.0, 0.0, 0.0]],
            &[vec![0.0, 0.0, 1.0]],
            &[0.0, 0.0, 1.0],
            &PerturbOptions::default(),
            &Tolerances::default(),
        );
        assert_eq!(r.unwrap_err(), Error::TooFewPoints { have: 2, need: 4 });
    }
}
