//! Minimization of the overlap function over directions in a subspace.

use serde::{Deserialize, Serialize};

use crate::data::LabeledPointSet;
use crate::error::{Error, Result};
use crate::geometry::OrthoBasis;
use crate::linalg::{self, dot};

use super::{hinge_mean, interval_overlap, signs, OverlapKind, OverlapSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InnerMethod {
    /// Exact dual coordinate ascent; the minimum is global.
    SvmDual,
    /// Sampled directions plus local refinement; approximate.
    SampledDirections,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InnerSolution {
    /// Minimizing direction in ambient coordinates. Unit for the interval
    /// kind, unnormalized for the SVM kind.
    pub v: Vec<f64>,
    /// Offset (SVM kind only; zero otherwise).
    pub b: f64,
    pub value: f64,
    pub method: InnerMethod,
}

/// `min g(P, v)` over `v` orthogonal to every vector of `constraints`.
pub fn min_overlap(data: &LabeledPointSet, spec: &OverlapSpec, constraints: &OrthoBasis) -> Result<InnerSolution> {
    spec.validate(data)?;
    if constraints.dim() != data.dim() {
        return Err(Error::DimensionMismatch {
            expected: data.dim(),
            found: constraints.dim(),
        });
    }
    let frame = constraints.complement();
    if frame.is_empty() {
        return Err(Error::EmptySubspace);
    }
    let x: Vec<Vec<f64>> = data.points().iter().map(|p| frame.coordinates(p)).collect();
    let y = signs(data, spec.property);
    match spec.kind {
        OverlapKind::Svm => {
            let (v, b, value) = svm_minimum(&x, &y, spec.lambda, spec.max_iter, spec.tol_inner);
            Ok(InnerSolution {
                v: frame.lift(&v),
                b,
                value,
                method: InnerMethod::SvmDual,
            })
        }
        OverlapKind::Interval => {
            let (v, value) = interval_minimum(&x, &y, spec.directions);
            Ok(InnerSolution {
                v: frame.lift(&v),
                b: 0.0,
                value,
                method: InnerMethod::SampledDirections,
            })
        }
    }
}

/// Soft-margin SVM in dual form, `min ½αᵀQα − Σα` with `0 ≤ α ≤ C`,
/// `yᵀα = 0` and `C = 1/(2λn)`, solved by maximal-violating-pair SMO with
/// second-order working set selection. The offset is recomputed exactly from
/// the breakpoints of the hinge sum.
pub(crate) fn svm_minimum(x: &[Vec<f64>], y: &[f64], lambda: f64, max_iter: usize, tol: f64) -> (Vec<f64>, f64, f64) {
    let n = x.len();
    let m = x.first().map_or(0, Vec::len);
    let c = 1.0 / (2.0 * lambda * n as f64);
    let k: Vec<Vec<f64>> = x.iter().map(|a| x.iter().map(|b| dot(a, b)).collect()).collect();
    let mut alpha = vec![0.0; n];
    let mut g = vec![-1.0; n];
    let up = |a: f64, l: f64| if l > 0.0 { a < c } else { a > 0.0 };
    let low = |a: f64, l: f64| if l > 0.0 { a > 0.0 } else { a < c };
    for _ in 0..max_iter {
        let mut gmax = f64::NEG_INFINITY;
        let mut i = usize::MAX;
        for t in 0..n {
            if up(alpha[t], y[t]) && -y[t] * g[t] >= gmax {
                gmax = -y[t] * g[t];
                i = t;
            }
        }
        let mut gmax2 = f64::NEG_INFINITY;
        let mut j = usize::MAX;
        let mut best = f64::INFINITY;
        for t in 0..n {
            if !low(alpha[t], y[t]) {
                continue;
            }
            gmax2 = gmax2.max(y[t] * g[t]);
            if i == usize::MAX {
                continue;
            }
            let diff = gmax + y[t] * g[t];
            if diff > 0.0 {
                let quad = (k[i][i] + k[t][t] - 2.0 * k[i][t]).max(1e-12);
                let obj = -diff * diff / quad;
                if obj <= best {
                    best = obj;
                    j = t;
                }
            }
        }
        if i == usize::MAX || j == usize::MAX || gmax + gmax2 < tol {
            break;
        }
        let (ai, aj) = (alpha[i], alpha[j]);
        let qij = y[i] * y[j] * k[i][j];
        if y[i] != y[j] {
            let quad = (k[i][i] + k[j][j] + 2.0 * qij).max(1e-12);
            let delta = (-g[i] - g[j]) / quad;
            let diff = ai - aj;
            let (mut ni, mut nj) = (ai + delta, aj + delta);
            if diff > 0.0 {
                if nj < 0.0 {
                    nj = 0.0;
                    ni = diff;
                }
            } else if ni < 0.0 {
                ni = 0.0;
                nj = -diff;
            }
            if diff > 0.0 {
                if ni > c {
                    ni = c;
                    nj = c - diff;
                }
            } else if nj > c {
                nj = c;
                ni = c + diff;
            }
            alpha[i] = ni;
            alpha[j] = nj;
        } else {
            let quad = (k[i][i] + k[j][j] - 2.0 * qij).max(1e-12);
            let delta = (g[i] - g[j]) / quad;
            let sum = ai + aj;
            let (mut ni, mut nj) = (ai - delta, aj + delta);
            if sum > c {
                if ni > c {
                    ni = c;
                    nj = sum - c;
                }
            } else if nj < 0.0 {
                nj = 0.0;
                ni = sum;
            }
            if sum > c {
                if nj > c {
                    nj = c;
                    ni = sum - c;
                }
            } else if ni < 0.0 {
                ni = 0.0;
                nj = sum;
            }
            alpha[i] = ni;
            alpha[j] = nj;
        }
        let (di, dj) = (alpha[i] - ai, alpha[j] - aj);
        for t in 0..n {
            g[t] += y[t] * (y[i] * k[t][i] * di + y[j] * k[t][j] * dj);
        }
    }
    let mut v = vec![0.0; m];
    for t in 0..n {
        linalg::axpy(alpha[t] * y[t], &x[t], &mut v);
    }
    let s: Vec<f64> = x.iter().map(|p| dot(&v, p)).collect();
    let b = best_offset(&s, y);
    let value = lambda * dot(&v, &v) + hinge_mean(&s, y, b);
    (v, b, value)
}

/// Minimizer of the hinge sum over the offset; the sum is convex and
/// piecewise linear with breakpoints at `s_i − y_i`.
fn best_offset(s: &[f64], y: &[f64]) -> f64 {
    let mut best = (f64::INFINITY, 0.0);
    for (&v, &l) in s.iter().zip(y) {
        let b = v - l;
        let h = hinge_mean(s, y, b);
        if h < best.0 || (h == best.0 && b < best.1) {
            best = (h, b);
        }
    }
    best.1
}

fn radical_inverse(mut i: usize, base: usize) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

const PRIMES: [usize; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];

/// Deterministic quasi-random unit directions in `R^m`, one per antipodal
/// pair where possible.
fn sample_directions(m: usize, count: usize) -> Vec<Vec<f64>> {
    match m {
        1 => vec![vec![1.0]],
        2 => (0..count)
            .map(|i| {
                let t = std::f64::consts::PI * i as f64 / count as f64;
                vec![t.cos(), t.sin()]
            })
            .collect(),
        _ => {
            let mut out: Vec<Vec<f64>> = (0..m)
                .map(|j| {
                    let mut e = vec![0.0; m];
                    e[j] = 1.0;
                    e
                })
                .collect();
            let mut i = 1;
            while out.len() < count.max(m) {
                let u: Vec<f64> = (0..m)
                    .map(|j| 2.0 * radical_inverse(i, PRIMES[j % PRIMES.len()] + 2 * (j / PRIMES.len())) - 1.0)
                    .collect();
                i += 1;
                if let Some(u) = linalg::normalized(&u, 1e-3) {
                    out.push(u);
                }
            }
            out
        }
    }
}

fn interval_minimum(x: &[Vec<f64>], y: &[f64], count: usize) -> (Vec<f64>, f64) {
    let m = x[0].len();
    let eval = |v: &[f64]| {
        let s: Vec<f64> = x.iter().map(|p| dot(v, p)).collect();
        interval_overlap(&s, y)
    };
    let mut best_v = vec![0.0; m];
    let mut best = f64::INFINITY;
    for u in sample_directions(m, count) {
        let g = eval(&u);
        if g < best {
            best = g;
            best_v = u;
        }
    }
    if m == 1 || best == 0.0 {
        return (best_v, best);
    }
    // Golden-section searches along great circles through the incumbent.
    let mut radius = if m == 2 {
        2.0 * std::f64::consts::PI / count as f64
    } else {
        0.2
    };
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..6 {
        let tangent = crate::geometry::OrthoBasis::from_orthonormal(m, vec![best_v.clone()], 1e-8)
            .map(|b| b.complement().into_vectors())
            .unwrap_or_default();
        for t in &tangent {
            let at = |theta: f64| {
                let mut u = linalg::scale(&best_v, theta.cos());
                linalg::axpy(theta.sin(), t, &mut u);
                u
            };
            let (mut lo, mut hi) = (-radius, radius);
            let mut a = hi - phi * (hi - lo);
            let mut b = lo + phi * (hi - lo);
            let (mut fa, mut fb) = (eval(&at(a)), eval(&at(b)));
            for _ in 0..60 {
                if fa <= fb {
                    hi = b;
                    b = a;
                    fb = fa;
                    a = hi - phi * (hi - lo);
                    fa = eval(&at(a));
                } else {
                    lo = a;
                    a = b;
                    fa = fb;
                    b = lo + phi * (hi - lo);
                    fb = eval(&at(b));
                }
            }
            let theta = (lo + hi) / 2.0;
            let u = at(theta);
            let g = eval(&u);
            if g < best {
                best = g;
                best_v = linalg::normalized(&u, 1e-12).unwrap_or(u);
            }
        }
        radius /= 2.0;
    }
    (best_v, best)
}
