#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_cloud(rng: &mut ChaCha8Rng, n: usize, d: usize, center: &[f64], spread: f64) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| {
            (0..d)
                .map(|i| center[i] + spread * rng.sample::<f64, _>(StandardNormal))
                .collect()
        })
        .collect()
}

pub fn unit(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-6 {
            return v.iter().map(|x| x / n).collect();
        }
    }
}

/// Two clouds around the origin; their hulls almost always meet.
pub fn overlapping_pair(seed: u64, n: usize, d: usize) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let mut r = rng(seed);
    let zero = vec![0.0; d];
    let p = gaussian_cloud(&mut r, n, d, &zero, 1.0);
    let q = gaussian_cloud(&mut r, n, d, &zero, 1.0);
    (p, q)
}

/// Points on both sides of a random hyperplane through the origin, each at
/// distance at least `gap` from it.
pub fn planted_pair(seed: u64, n: usize, d: usize, gap: f64) -> (Vec<Vec<f64>>, Vec<Vec<f64>>, Vec<f64>) {
    let mut r = rng(seed);
    let u = unit(&mut r, d);
    let mut p = Vec::new();
    let mut q = Vec::new();
    while p.len() < n || q.len() < n {
        let x: Vec<f64> = (0..d).map(|_| r.sample::<f64, _>(StandardNormal) * 2.0).collect();
        let s: f64 = x.iter().zip(&u).map(|(a, b)| a * b).sum();
        if s <= -gap && p.len() < n {
            p.push(x);
        } else if s >= gap && q.len() < n {
            q.push(x);
        }
    }
    (p, q, u)
}

/// Random affine map with a well-conditioned linear part.
pub fn random_affine(seed: u64, d: usize) -> (Vec<Vec<f64>>, Vec<f64>) {
    let mut r = rng(seed);
    let m = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    let z: f64 = r.sample(StandardNormal);
                    if i == j { 2.0 + 0.3 * z } else { 0.3 * z }
                })
                .collect()
        })
        .collect();
    let t = (0..d).map(|_| r.sample::<f64, _>(StandardNormal)).collect();
    (m, t)
}

pub fn apply(m: &[Vec<f64>], t: &[f64], pts: &[Vec<f64>]) -> Vec<Vec<f64>> {
    pts.iter()
        .map(|p| {
            m.iter()
                .zip(t)
                .map(|(row, s)| row.iter().zip(p).map(|(a, b)| a * b).sum::<f64>() + s)
                .collect()
        })
        .collect()
}

/// Projection of every point along the unit vector `w`.
pub fn project_along(pts: &[Vec<f64>], w: &[f64]) -> Vec<Vec<f64>> {
    pts.iter()
        .map(|p| {
            let s: f64 = p.iter().zip(w).map(|(a, b)| a * b).sum();
            p.iter().zip(w).map(|(a, b)| a - s * b).collect()
        })
        .collect()
}
