//! Orthonormal systems, affine flats, projections and affine maps.
//!
//! Points are plain `Vec<f64>`. Projections follow the convention that a
//! projected point stays embedded in the ambient space: projecting `p` along
//! an orthonormal system `{w_j}` yields `p - Σ_j (p·w_j) w_j`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, axpy, dot, norm, sub};

/// Orthonormal system `{w_1, …, w_r}` in `R^d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrthoBasis {
    dim: usize,
    vectors: Vec<Vec<f64>>,
}

impl OrthoBasis {
    pub fn empty(dim: usize) -> Self {
        Self {
            dim,
            vectors: Vec::new(),
        }
    }

    /// Wraps vectors that are already orthonormal, checking it within `tol`.
    pub fn from_orthonormal(dim: usize, vectors: Vec<Vec<f64>>, tol: f64) -> Result<Self> {
        for v in &vectors {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: v.len(),
                });
            }
        }
        let basis = Self { dim, vectors };
        let err = basis.orthonormality_error();
        if err > tol {
            return Err(Error::InvariantViolation(format!(
                "vectors are not orthonormal (Gram error {err:e})"
            )));
        }
        Ok(basis)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.vectors
    }

    pub fn into_vectors(self) -> Vec<Vec<f64>> {
        self.vectors
    }

    /// Largest deviation of the Gram matrix from the identity.
    pub fn orthonormality_error(&self) -> f64 {
        let mut worst = 0.0f64;
        for (i, a) in self.vectors.iter().enumerate() {
            for (j, b) in self.vectors.iter().enumerate().skip(i) {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot(a, b) - target).abs());
            }
        }
        worst
    }

    /// Removes the components along the basis (two passes of modified
    /// Gram–Schmidt for stability).
    pub fn project_out(&self, p: &[f64]) -> Vec<f64> {
        let mut r = p.to_vec();
        for _ in 0..2 {
            for w in &self.vectors {
                let c = dot(&r, w);
                axpy(-c, w, &mut r);
            }
        }
        r
    }

    /// Component of `p` inside the span of the basis.
    pub fn project_onto(&self, p: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        for w in &self.vectors {
            axpy(dot(p, w), w, &mut out);
        }
        out
    }

    /// Coordinates `(w_j · p)_j`.
    pub fn coordinates(&self, p: &[f64]) -> Vec<f64> {
        self.vectors.iter().map(|w| dot(w, p)).collect()
    }

    /// Maps coordinates back into the ambient space.
    pub fn lift(&self, coords: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        for (w, &c) in self.vectors.iter().zip(coords) {
            axpy(c, w, &mut out);
        }
        out
    }

    /// Appends `v` after orthogonalizing it against the current vectors.
    /// Returns `false` (and leaves the basis unchanged) when the residual is
    /// below `tol · max(1, |v|)`.
    pub fn push(&mut self, v: &[f64], tol: f64) -> bool {
        debug_assert_eq!(v.len(), self.dim);
        if self.vectors.len() == self.dim {
            return false;
        }
        let r = self.project_out(v);
        let rn = norm(&r);
        if rn <= tol * norm(v).max(1.0) {
            return false;
        }
        self.vectors.push(linalg::scale(&r, 1.0 / rn));
        true
    }

    /// Orthonormal basis of the orthogonal complement, obtained by extending
    /// with the standard basis vectors in order.
    pub fn complement(&self) -> OrthoBasis {
        let mut ext = self.clone();
        let mut out = OrthoBasis::empty(self.dim);
        for i in 0..self.dim {
            if ext.len() == self.dim {
                break;
            }
            let mut e = vec![0.0; self.dim];
            e[i] = 1.0;
            // 0.5 keeps the pick well conditioned: some e_i always has a
            // residual of at least 1/sqrt(d) against a proper subspace.
            if ext.push(&e, 0.5 / (self.dim as f64).sqrt()) {
                out.vectors.push(ext.vectors.last().unwrap().clone());
            }
        }
        // Fall back to a plain threshold if the strict pick left gaps.
        for i in 0..self.dim {
            if ext.len() == self.dim {
                break;
            }
            let mut e = vec![0.0; self.dim];
            e[i] = 1.0;
            if ext.push(&e, 1e-8) {
                out.vectors.push(ext.vectors.last().unwrap().clone());
            }
        }
        out
    }
}

/// Gram–Schmidt over `vs`, dropping vectors that are linearly dependent on
/// the ones kept so far.
pub fn orthonormalize(vs: &[Vec<f64>], rank_tol: f64) -> Result<OrthoBasis> {
    let first = vs.first().ok_or(Error::EmptyInput("orthonormalize"))?;
    let dim = first.len();
    for v in vs {
        if v.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: v.len(),
            });
        }
    }
    if vs.iter().all(|v| norm(v) < rank_tol) {
        return Err(Error::AllDegenerate);
    }
    let mut basis = OrthoBasis::empty(dim);
    for v in vs {
        if norm(v) >= rank_tol {
            basis.push(v, rank_tol);
        }
    }
    Ok(basis)
}

/// `p'_i = p_i − Σ_j (p_i·w_j) w_j` for every point.
pub fn project_points(points: &[Vec<f64>], basis: &OrthoBasis) -> Result<Vec<Vec<f64>>> {
    points
        .iter()
        .map(|p| {
            if p.len() != basis.dim() {
                Err(Error::DimensionMismatch {
                    expected: basis.dim(),
                    found: p.len(),
                })
            } else {
                Ok(basis.project_out(p))
            }
        })
        .collect()
}

/// Coordinates of projected points inside the orthogonal complement of
/// `basis`, i.e. the points as they live in `R^{d-r}`.
pub fn reduced_coordinates(points: &[Vec<f64>], basis: &OrthoBasis) -> (OrthoBasis, Vec<Vec<f64>>) {
    let comp = basis.complement();
    let coords = points.iter().map(|p| comp.coordinates(p)).collect();
    (comp, coords)
}

/// Affine flat `base + span(directions)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Flat {
    pub base: Vec<f64>,
    pub directions: OrthoBasis,
}

impl Flat {
    pub fn new(base: Vec<f64>, directions: &[Vec<f64>], rank_tol: f64) -> Result<Self> {
        let dim = base.len();
        let mut basis = OrthoBasis::empty(dim);
        for d in directions {
            if d.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: d.len(),
                });
            }
            basis.push(d, rank_tol);
        }
        Ok(Self {
            base,
            directions: basis,
        })
    }

    pub fn point(p: Vec<f64>) -> Self {
        let dim = p.len();
        Self {
            base: p,
            directions: OrthoBasis::empty(dim),
        }
    }

    /// Affine hull of `points`.
    pub fn through(points: &[Vec<f64>], rank_tol: f64) -> Result<Self> {
        let base = points.first().ok_or(Error::EmptyInput("flat points"))?.clone();
        let dirs: Vec<Vec<f64>> = points[1..].iter().map(|p| sub(p, &base)).collect();
        Self::new(base, &dirs, rank_tol)
    }

    pub fn ambient_dim(&self) -> usize {
        self.base.len()
    }

    pub fn flat_dim(&self) -> usize {
        self.directions.len()
    }

    pub fn distance_to(&self, x: &[f64]) -> f64 {
        norm(&self.directions.project_out(&sub(x, &self.base)))
    }
}

/// Result of intersecting two flats.
#[derive(Debug, Clone, PartialEq)]
pub enum FlatIntersection {
    Point(Vec<f64>),
    Flat(Flat),
    Empty,
}

/// Intersects two flats by solving `a + D s = b + E t` with complete
/// pivoting. Inconsistency beyond `geom_tol` yields `Empty`.
pub fn intersect_flats(f1: &Flat, f2: &Flat, rank_tol: f64, geom_tol: f64) -> Result<FlatIntersection> {
    let d = f1.ambient_dim();
    if f2.ambient_dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: f2.ambient_dim(),
        });
    }
    let m1 = f1.flat_dim();
    let m2 = f2.flat_dim();
    let cols = m1 + m2;
    let m: Vec<Vec<f64>> = (0..d)
        .map(|i| {
            let mut row = Vec::with_capacity(cols);
            row.extend(f1.directions.vectors().iter().map(|v| v[i]));
            row.extend(f2.directions.vectors().iter().map(|v| -v[i]));
            row
        })
        .collect();
    let rhs = sub(&f2.base, &f1.base);
    let e = linalg::echelon(&m, cols, &[rhs], rank_tol);
    let (sol, _) = e.solve_particular(0, cols);
    let mut x = f1.base.clone();
    for (v, &s) in f1.directions.vectors().iter().zip(&sol[..m1]) {
        axpy(s, v, &mut x);
    }
    // Judge consistency geometrically instead of on the reduced rows, so the
    // threshold is a distance.
    if f1.distance_to(&x) > geom_tol || f2.distance_to(&x) > geom_tol {
        return Ok(FlatIntersection::Empty);
    }
    let null = e.null_space(cols);
    if null.is_empty() {
        return Ok(FlatIntersection::Point(x));
    }
    let dirs: Vec<Vec<f64>> = null
        .iter()
        .map(|c| linalg::combination(f1.directions.vectors(), &c[..m1], d))
        .collect();
    let flat = Flat::new(x.clone(), &dirs, rank_tol)?;
    if flat.flat_dim() == 0 {
        Ok(FlatIntersection::Point(x))
    } else {
        Ok(FlatIntersection::Flat(flat))
    }
}

/// Barycentric coordinates of `x` with respect to `d+1` affinely independent
/// points in `R^d`.
pub fn barycentric_coords(x: &[f64], simplex: &[Vec<f64>], rank_tol: f64) -> Result<Vec<f64>> {
    let d = x.len();
    if simplex.len() != d + 1 {
        return Err(Error::DimensionMismatch {
            expected: d + 1,
            found: simplex.len(),
        });
    }
    for s in simplex {
        if s.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: s.len(),
            });
        }
    }
    let s0 = &simplex[0];
    // Columns are the edge vectors s_i - s_0.
    let m: Vec<Vec<f64>> = (0..d)
        .map(|r| simplex[1..].iter().map(|s| s[r] - s0[r]).collect())
        .collect();
    let rhs = sub(x, s0);
    let c = linalg::solve(&m, &rhs, rank_tol).ok_or(Error::DegenerateSimplex)?;
    let mut out = Vec::with_capacity(d + 1);
    out.push(1.0 - c.iter().sum::<f64>());
    out.extend(c);
    Ok(out)
}

/// `x ↦ linear·x + shift`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AffineMap {
    pub linear: Vec<Vec<f64>>,
    pub shift: Vec<f64>,
}

impl AffineMap {
    pub fn new(linear: Vec<Vec<f64>>, shift: Vec<f64>) -> Result<Self> {
        if linear.len() != shift.len() {
            return Err(Error::DimensionMismatch {
                expected: linear.len(),
                found: shift.len(),
            });
        }
        if let Some(first) = linear.first() {
            let cols = first.len();
            if let Some(bad) = linear.iter().find(|r| r.len() != cols) {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: bad.len(),
                });
            }
        }
        Ok(Self { linear, shift })
    }

    pub fn identity(dim: usize) -> Self {
        let linear = (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        Self {
            linear,
            shift: vec![0.0; dim],
        }
    }

    pub fn translation(t: Vec<f64>) -> Self {
        let mut m = Self::identity(t.len());
        m.shift = t;
        m
    }

    pub fn input_dim(&self) -> usize {
        self.linear.first().map_or(0, Vec::len)
    }

    pub fn output_dim(&self) -> usize {
        self.shift.len()
    }

    pub fn apply_point(&self, p: &[f64]) -> Result<Vec<f64>> {
        if p.len() != self.input_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.input_dim(),
                found: p.len(),
            });
        }
        Ok(self
            .linear
            .iter()
            .zip(&self.shift)
            .map(|(row, s)| dot(row, p) + s)
            .collect())
    }

    /// `self ∘ inner`, i.e. apply `inner` first.
    pub fn compose(&self, inner: &AffineMap) -> Result<AffineMap> {
        if inner.output_dim() != self.input_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.input_dim(),
                found: inner.output_dim(),
            });
        }
        let linear = linalg::mat_mul(&self.linear, &inner.linear, inner.input_dim());
        let shift = self.apply_point(&inner.shift)?;
        Ok(AffineMap { linear, shift })
    }
}

pub fn apply_affine(map: &AffineMap, points: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    points.iter().map(|p| map.apply_point(p)).collect()
}

/// Affine rank and smallest pivot of `points`; zero-dimensional sets
/// report `+inf`. The set is affinely independent iff the rank equals
/// `points.len() - 1`. Rows are centred on the centroid so that, with
/// complete pivoting, the result does not depend on point order.
pub fn affine_rank(points: &[Vec<f64>], rank_tol: f64) -> (usize, f64) {
    if points.len() < 2 {
        return (0, f64::INFINITY);
    }
    let dim = points[0].len();
    let n = points.len() as f64;
    let mut centroid = vec![0.0; dim];
    for p in points {
        for (c, &x) in centroid.iter_mut().zip(p) {
            *c += x / n;
        }
    }
    let rows: Vec<Vec<f64>> = points.iter().map(|p| sub(p, &centroid)).collect();
    let e = linalg::echelon(&rows, dim, &[], rank_tol);
    (e.rank, e.min_pivot)
}

pub fn affinely_independent(points: &[Vec<f64>], rank_tol: f64) -> bool {
    affine_rank(points, rank_tol).0 + 1 == points.len()
}

/// Checks that every subset of at most `dim + 1` points is affinely
/// independent. Returns the first violating subset (indices, lexicographic
/// order) if any. The cost is `C(n, dim+1)` rank tests, so callers should
/// keep `n` moderate.
pub fn general_position_violation(points: &[Vec<f64>], rank_tol: f64) -> Option<Vec<usize>> {
    let n = points.len();
    let dim = points.first().map_or(0, Vec::len);
    let size = (dim + 1).min(n);
    if size == 0 {
        return None;
    }
    let mut idx: Vec<usize> = (0..size).collect();
    loop {
        let subset: Vec<Vec<f64>> = idx.iter().map(|&i| points[i].clone()).collect();
        if !affinely_independent(&subset, rank_tol) {
            return Some(idx);
        }
        if !next_combination(&mut idx, n) {
            return None;
        }
    }
}

/// Advances `idx` to the next `k`-subset of `0..n` in lexicographic order.
pub fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-9;

    #[test]
    fn orthonormalize_already_orthonormal() {
        let b = orthonormalize(&[vec![1.0, 0.0], vec![0.0, 1.0]], TOL).unwrap();
        assert_eq!(b.vectors(), &[vec![1.0, 0.0], vec![0.0, 1.0]]);
    }

    #[test]
    fn orthonormalize_by_hand() {
        let b = orthonormalize(&[vec![1.0, 0.0], vec![1.0, 1.0]], TOL).unwrap();
        assert_eq!(b.len(), 2);
        assert!((b.vectors()[1][0]).abs() < 1e-15);
        assert!((b.vectors()[1][1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn orthonormalize_drops_dependent_and_rejects_degenerate() {
        let b = orthonormalize(&[vec![1.0, 1.0], vec![2.0, 2.0]], TOL).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(
            orthonormalize(&[vec![0.0, 0.0], vec![1e-12, 0.0]], TOL),
            Err(Error::AllDegenerate)
        );
    }

    #[test]
    fn axis_projection() {
        let w = orthonormalize(&[vec![0.0, 0.0, 1.0]], TOL).unwrap();
        let p = project_points(&[vec![1.0, 2.0, 3.0]], &w).unwrap();
        assert_eq!(p[0], vec![1.0, 2.0, 0.0]);
        assert!(project_points(&[vec![1.0, 2.0]], &w).is_err());
    }

    #[test]
    fn perpendicular_point_is_fixed() {
        let w = orthonormalize(&[vec![1.0, 1.0, 0.0]], TOL).unwrap();
        let p = vec![1.0, -1.0, 5.0];
        let q = &project_points(&[p.clone()], &w).unwrap()[0];
        for (a, b) in p.iter().zip(q) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn perpendicular_lines_meet_at_origin() {
        let f1 = Flat::new(vec![0.0, 0.0], &[vec![1.0, 0.0]], TOL).unwrap();
        let f2 = Flat::new(vec![0.0, 0.0], &[vec![0.0, 1.0]], TOL).unwrap();
        match intersect_flats(&f1, &f2, TOL, 1e-8).unwrap() {
            FlatIntersection::Point(p) => assert!(norm(&p) < 1e-15),
            other => panic!("expected point, got {other:?}"),
        }
    }

    #[test]
    fn parallel_lines_do_not_meet() {
        let f1 = Flat::new(vec![0.0, 0.0], &[vec![1.0, 0.0]], TOL).unwrap();
        let f2 = Flat::new(vec![0.0, 1.0], &[vec![1.0, 0.0]], TOL).unwrap();
        assert_eq!(
            intersect_flats(&f1, &f2, TOL, 1e-8).unwrap(),
            FlatIntersection::Empty
        );
    }

    #[test]
    fn coincident_lines_intersect_in_a_line() {
        let f1 = Flat::new(vec![0.0, 0.0, 0.0], &[vec![1.0, 1.0, 0.0]], TOL).unwrap();
        let f2 = Flat::new(vec![2.0, 2.0, 0.0], &[vec![-1.0, -1.0, 0.0]], TOL).unwrap();
        match intersect_flats(&f1, &f2, TOL, 1e-8).unwrap() {
            FlatIntersection::Flat(f) => assert_eq!(f.flat_dim(), 1),
            other => panic!("expected line, got {other:?}"),
        }
    }

    #[test]
    fn barycentric_vertex_and_centroid() {
        let s = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]];
        let c = barycentric_coords(&[0.0, 0.0], &s, TOL).unwrap();
        assert!((c[0] - 1.0).abs() < 1e-15 && c[1].abs() < 1e-15 && c[2].abs() < 1e-15);
        let c = barycentric_coords(&[1.0 / 3.0, 1.0 / 3.0], &s, TOL).unwrap();
        for ci in c {
            assert!((ci - 1.0 / 3.0).abs() < 1e-15);
        }
        let flat = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![2.0, 0.0]];
        assert_eq!(
            barycentric_coords(&[0.5, 0.0], &flat, TOL),
            Err(Error::DegenerateSimplex)
        );
    }

    #[test]
    fn affine_identity_and_translation() {
        let p = vec![vec![1.0, -2.0], vec![3.0, 4.0]];
        assert_eq!(apply_affine(&AffineMap::identity(2), &p).unwrap(), p);
        let t = apply_affine(&AffineMap::translation(vec![1.0, 1.0]), &p).unwrap();
        assert_eq!(t, vec![vec![2.0, -1.0], vec![4.0, 5.0]]);
    }

    #[test]
    fn complement_is_orthogonal() {
        let w = orthonormalize(&[vec![1.0, 2.0, 3.0, 4.0]], TOL).unwrap();
        let c = w.complement();
        assert_eq!(c.len(), 3);
        for v in c.vectors() {
            assert!(dot(v, &w.vectors()[0]).abs() < 1e-12);
        }
        assert!(c.orthonormality_error() < 1e-12);
    }

    #[test]
    fn general_position_detects_collinear_triple() {
        let pts = vec![
            vec![0.0, 0.0],
            vec![1.0, 0.3],
            vec![2.0, 5.0],
            vec![0.5, 0.15],
        ];
        assert_eq!(general_position_violation(&pts, TOL), Some(vec![0, 1, 3]));
        let ok = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0], vec![2.0, 3.0]];
        assert_eq!(general_position_violation(&ok, TOL), None);
    }
}
