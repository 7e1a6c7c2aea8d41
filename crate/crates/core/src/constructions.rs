//! Generators for the explicit counterexamples and for random fixtures with
//! planted separating hyperplanes.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::data::LabeledPointSet;
use crate::error::{Error, Result};
use crate::geometry::general_position_violation;
use crate::linalg::{self, dot, norm};
use crate::separability::{max_margin_hyperplane, Hyperplane};
use crate::Tolerances;

/// Which generator produced a dataset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FixtureKind {
    MissingLabel,
    Circle,
    CubeTwoMaxima,
    RandomAllLabels,
}

/// Uniformly distributed unit vector.
pub fn random_unit_vector<R: Rng>(rng: &mut R, d: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        if let Some(u) = linalg::normalized(&v, 1e-6) {
            return u;
        }
    }
}

/// Vertices of a unit-edge simplex with `m + 1` vertices in `R^m`, the first
/// at the origin. For `m = 1` this is `{0, 1}`.
fn unit_simplex(m: usize) -> Vec<Vec<f64>> {
    // Orthonormal basis of the sum-zero subspace of R^{m+1}, chosen so that
    // the first vertex (e_0) maps to the origin after translation.
    let mut vecs = Vec::new();
    for j in 1..=m {
        let mut u = vec![0.0; m + 1];
        u[0] = -1.0;
        u[j] = 1.0;
        vecs.push(u);
    }
    let basis = crate::geometry::orthonormalize(&vecs, 1e-12).expect("independent");
    (0..=m)
        .map(|j| {
            let mut e = vec![0.0; m + 1];
            e[j] = std::f64::consts::FRAC_1_SQRT_2;
            e[0] -= std::f64::consts::FRAC_1_SQRT_2;
            basis.coordinates(&e)
        })
        .collect()
}

/// Point set using `2^k − 1` labels for which every separation-preserving
/// projection that keeps `a_2, …, a_k` strictly separable also keeps `a_1`
/// strictly separable.
///
/// Copies of the vertex set of a `(k−1)`-cube of side `ε` (first `k−1`
/// coordinates) sit at the vertices of a unit-edge simplex in the last
/// `d−k+1` coordinates. One extra point per orthant crossed by the flat
/// `H = {x : n̂·x = 1}` with `n̂ = (1, …, 1)/√(k−1)` lies beyond `H`.
pub fn gen_missing_label(k: usize, d: usize, epsilon: f64) -> Result<LabeledPointSet> {
    if k < 2 || d < k {
        return Err(Error::BadParams(format!("need d >= k >= 2, got k = {k}, d = {d}")));
    }
    if !(epsilon > 0.0 && epsilon < 1.0 / (2.0 * k as f64)) {
        return Err(Error::BadParams(format!(
            "epsilon must lie in (0, 1/(2k)) = (0, {}), got {epsilon}",
            1.0 / (2.0 * k as f64)
        )));
    }
    let c = k - 1;
    let m = d - k + 1;
    let simplex = unit_simplex(m);
    let mut points = Vec::new();
    let mut labels = vec![Vec::new(); k];
    for corner in &simplex {
        for mask in 0..1usize << c {
            let mut x = vec![0.0; d];
            for (i, xi) in x.iter_mut().take(c).enumerate() {
                *xi = if mask >> i & 1 == 1 { epsilon / 2.0 } else { -epsilon / 2.0 };
            }
            x[c..].copy_from_slice(corner);
            labels[0].push(1);
            for i in 0..c {
                labels[i + 1].push(if x[i] > 0.0 { 1 } else { -1 });
            }
            points.push(x);
        }
    }
    let target = 1.1 * (c as f64).sqrt();
    for mask in 1..1usize << c {
        let n_pos = mask.count_ones() as f64;
        let n_neg = c as f64 - n_pos;
        let t = (target + n_neg * epsilon / 2.0) / n_pos;
        let mut x = vec![0.0; d];
        for (i, xi) in x.iter_mut().take(c).enumerate() {
            *xi = if mask >> i & 1 == 1 { t } else { -epsilon / 2.0 };
        }
        labels[0].push(-1);
        for i in 0..c {
            labels[i + 1].push(if mask >> i & 1 == 1 { 1 } else { -1 });
        }
        points.push(x);
    }
    let set = LabeledPointSet::new(points, labels)?;
    certify_all_separable(&set, &Tolerances::default())?;
    Ok(set)
}

/// Unit normal of the flat `H` used by [`gen_missing_label`], embedded in
/// `R^d`.
pub fn missing_label_flat_normal(k: usize, d: usize) -> Vec<f64> {
    let c = k - 1;
    let mut n = vec![0.0; d];
    for v in n.iter_mut().take(c) {
        *v = 1.0 / (c as f64).sqrt();
    }
    n
}

fn certify_all_separable(set: &LabeledPointSet, tol: &Tolerances) -> Result<()> {
    for i in 0..set.k() {
        let (neg, pos) = set.split(i);
        if neg.is_empty() || pos.is_empty() || max_margin_hyperplane(&neg, &pos, tol)?.is_none() {
            return Err(Error::NotSeparableInput { property: i + 1 });
        }
    }
    Ok(())
}

/// The odd-`n` circle instance that is not `(1,2)`-separable although every
/// proper subset is.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircleConstruction {
    pub p: Vec<Vec<f64>>,
    pub q: Vec<Vec<f64>>,
    /// Radius of the circle carrying `Q`.
    pub radius: f64,
    /// Distance from the origin to the wedge rays, `sin(π/(2n))`.
    pub ray_distance: f64,
    /// Opening angle of each wedge, measured from the generated points.
    pub wedge_angle: f64,
    /// Largest admissible `ε`.
    pub epsilon_max: f64,
    /// Number of `Q` points inside each wedge.
    pub wedge_counts: Vec<usize>,
}

/// Supremum of admissible `ε` for [`gen_circle`].
pub fn circle_epsilon_max(n: usize) -> f64 {
    let h = (PI / (2.0 * n as f64)).sin();
    h * (1.0 / (2.0 * PI / n as f64).cos() - 1.0)
}

/// `P`: `n` points equally spaced on the unit circle. The wedge `W_i` at
/// `p_i` is bounded by the rays towards the two opposite points; the rays lie
/// on chords at distance `sin(π/(2n))` from the origin. `Q`: one point per
/// chord, at radius `sin(π/(2n)) + ε` in the direction of the chord's foot,
/// so that it falls just outside the two wedges bounded by that chord.
pub fn gen_circle(n: usize, epsilon: f64) -> Result<CircleConstruction> {
    if n < 5 || n % 2 == 0 {
        return Err(Error::BadParams(format!("n must be odd and at least 5, got {n}")));
    }
    if !(epsilon > 0.0) {
        return Err(Error::BadParams(format!("epsilon must be positive, got {epsilon}")));
    }
    let nf = n as f64;
    let m = (n - 1) / 2;
    let h = (PI / (2.0 * nf)).sin();
    let radius = h + epsilon;
    let angle = |i: usize| 2.0 * PI * i as f64 / nf;
    let p: Vec<Vec<f64>> = (0..n).map(|i| vec![angle(i).cos(), angle(i).sin()]).collect();
    let q: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let a = angle(i) + PI * m as f64 / nf;
            vec![radius * a.cos(), radius * a.sin()]
        })
        .collect();

    // Wedge census: inside W_i means on the origin side of both chord lines.
    let side = |a: &[f64], b: &[f64], x: &[f64]| {
        // Signed value, negative on the origin's side.
        let e = [b[0] - a[0], b[1] - a[1]];
        let nrm = [e[1], -e[0]];
        let o = -(nrm[0] * a[0] + nrm[1] * a[1]);
        let s = nrm[0] * x[0] + nrm[1] * x[1] - (nrm[0] * a[0] + nrm[1] * a[1]);
        if o > 0.0 {
            -s
        } else {
            s
        }
    };
    let mut wedge_counts = Vec::with_capacity(n);
    for i in 0..n {
        let a = &p[(i + m) % n];
        let b = &p[(i + m + 1) % n];
        let count = q
            .iter()
            .filter(|x| side(&p[i], a, x) < 0.0 && side(&p[i], b, x) < 0.0)
            .count();
        wedge_counts.push(count);
    }
    let epsilon_max = circle_epsilon_max(n);
    if let Some(bad) = wedge_counts.iter().position(|&c| c != n - 2) {
        return Err(Error::EpsilonTooLarge {
            epsilon,
            detail: format!(
                "wedge {bad} contains {} points instead of {} (epsilon must stay below {epsilon_max})",
                wedge_counts[bad],
                n - 2
            ),
        });
    }
    let u = linalg::sub(&p[m], &p[0]);
    let v = linalg::sub(&p[m + 1], &p[0]);
    let wedge_angle = (dot(&u, &v) / (norm(&u) * norm(&v))).clamp(-1.0, 1.0).acos();
    Ok(CircleConstruction {
        p,
        q,
        radius,
        ray_distance: h,
        wedge_angle,
        epsilon_max,
        wedge_counts,
    })
}

/// The cube vertices `(±1, ±1, ±1)` in lexicographic order plus
/// `p* = (1−ε, 1−ε, 1)`. `a_1` is the sign of `z`; `a_2` agrees with `a_1`
/// except on `(1, 1, 1)`.
pub fn gen_cube_two_maxima(epsilon: f64) -> Result<LabeledPointSet> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::BadParams(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    let mut points = Vec::with_capacity(9);
    for mask in 0..8usize {
        let s = |bit: usize| if mask >> bit & 1 == 1 { 1.0 } else { -1.0 };
        points.push(vec![s(2), s(1), s(0)]);
    }
    points.push(vec![1.0 - epsilon, 1.0 - epsilon, 1.0]);
    let a1: Vec<i8> = points.iter().map(|p| if p[2] > 0.0 { 1 } else { -1 }).collect();
    let mut a2 = a1.clone();
    a2[7] = -1;
    let set = LabeledPointSet::new(points, vec![a1, a2])?;
    certify_all_separable(&set, &Tolerances::default())?;
    Ok(set)
}

/// Random dataset with `k` planted hyperplanes, all `2^k` label tuples
/// present, and every point at distance at least `margin` from every plane.
pub fn gen_random_all_labels(
    n: usize,
    d: usize,
    k: usize,
    margin: f64,
    seed: u64,
) -> Result<(LabeledPointSet, Vec<Hyperplane>)> {
    if k == 0 || d < k {
        return Err(Error::BadParams(format!("need d >= k >= 1, got k = {k}, d = {d}")));
    }
    if k >= 20 || n < 1 << k {
        return Err(Error::BadParams(format!("need n >= 2^k, got n = {n}, k = {k}")));
    }
    if !(margin > 0.0 && margin < 0.5) {
        return Err(Error::BadParams(format!("margin must lie in (0, 0.5), got {margin}")));
    }
    const ATTEMPTS: usize = 50;
    const BOX: f64 = 2.0;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tol = Tolerances::default();
    for _ in 0..ATTEMPTS {
        let planes: Vec<Hyperplane> = (0..k)
            .map(|_| Hyperplane {
                normal: random_unit_vector(&mut rng, d),
                offset: rng.random_range(-0.2..0.2),
            })
            .collect();
        let normals: Vec<Vec<f64>> = planes.iter().map(|h| h.normal.clone()).collect();
        if linalg::rank(&normals, d, 1e-3) < k {
            continue;
        }
        let null = linalg::null_space(&normals, d, 1e-9);
        let null = if null.is_empty() {
            crate::geometry::OrthoBasis::empty(d)
        } else {
            crate::geometry::orthonormalize(&null, 1e-9)?
        };
        let mut points = Vec::with_capacity(n);
        // One targeted point per cell: least-norm solution of the planted
        // distances plus a random component along the planes' common
        // directions.
        let nnt = linalg::mat_mul(&normals, &linalg::transpose(&normals, d), k);
        let mut ok = true;
        for cell in 0..1usize << k {
            let rhs: Vec<f64> = planes
                .iter()
                .enumerate()
                .map(|(i, h)| {
                    let s = if cell >> i & 1 == 1 { 1.0 } else { -1.0 };
                    h.offset + s * (margin + rng.random_range(0.1..0.8))
                })
                .collect();
            let Some(y) = linalg::solve(&nnt, &rhs, 1e-12) else {
                ok = false;
                break;
            };
            let mut x = linalg::mat_vec(&linalg::transpose(&normals, d), &y);
            for u in null.vectors() {
                linalg::axpy(rng.random_range(-1.0..1.0), u, &mut x);
            }
            points.push(x);
        }
        if !ok {
            continue;
        }
        let mut tries = 0usize;
        while points.len() < n {
            tries += 1;
            if tries > 100_000 {
                return Err(Error::SamplingFailed { attempts: tries });
            }
            let x: Vec<f64> = (0..d).map(|_| rng.random_range(-BOX..BOX)).collect();
            if planes.iter().all(|h| h.signed_distance(&x).abs() >= margin) {
                points.push(x);
            }
        }
        if general_position_feasible(n, d) && general_position_violation(&points, 1e-6).is_some() {
            continue;
        }
        let labels: Vec<Vec<i8>> = planes
            .iter()
            .map(|h| {
                points
                    .iter()
                    .map(|x| if h.signed_distance(x) > 0.0 { 1 } else { -1 })
                    .collect()
            })
            .collect();
        let set = LabeledPointSet::new(points, labels)?;
        debug_assert_eq!(set.label_census().len(), 1 << k);
        certify_all_separable(&set, &tol)?;
        return Ok((set, planes));
    }
    Err(Error::SamplingFailed { attempts: ATTEMPTS })
}

/// Whether the exhaustive general-position test is affordable.
fn general_position_feasible(n: usize, d: usize) -> bool {
    let r = (d + 1).min(n);
    let mut c = 1.0f64;
    for i in 0..r {
        c *= (n - i) as f64 / (i + 1) as f64;
    }
    c <= 50_000.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_simplex_edges() {
        for m in 1..5 {
            let s = unit_simplex(m);
            assert!(norm(&s[0]) < 1e-15);
            for i in 0..=m {
                for j in i + 1..=m {
                    assert!((linalg::distance(&s[i], &s[j]) - 1.0).abs() < 1e-12);
                }
            }
        }
        assert!((unit_simplex(1)[1][0].abs() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn missing_label_small_instance() {
        let s = gen_missing_label(2, 2, 0.1).unwrap();
        assert_eq!(s.n(), 5);
        assert_eq!(s.label_census().len(), 3);
    }

    #[test]
    fn circle_wedge_angle() {
        let c = gen_circle(5, 0.5 * circle_epsilon_max(5)).unwrap();
        assert!((c.wedge_angle - PI / 5.0).abs() < 1e-12);
        assert!(gen_circle(9, 2.0 * circle_epsilon_max(9)).is_err());
    }

    #[test]
    fn cube_layout() {
        let s = gen_cube_two_maxima(0.2).unwrap();
        assert_eq!(s.points()[7], vec![1.0, 1.0, 1.0]);
        assert_eq!(s.points()[8], vec![0.8, 0.8, 1.0]);
        let diff: Vec<usize> = (0..9).filter(|&j| s.label(0, j) != s.label(1, j)).collect();
        assert_eq!(diff, vec![7]);
    }
}
