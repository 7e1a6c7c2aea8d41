//! Overlap of the two classes of a property along a direction, and the
//! search for projections that maximize the smallest such overlap.
//!
//! For a projection along `w` the overlap function is only ever evaluated at
//! directions `v ⊥ w`; both overlap functions depend on the points only
//! through `v·p`, and `v·π_w(p) = v·p` for such `v`, so the points are never
//! projected explicitly.

mod climb;
mod inner;

pub use climb::{encode_chart, maximize_overlap, ClimbOptions, MaximumCluster, OptResult};
pub use inner::{min_overlap, InnerMethod, InnerSolution};

use serde::{Deserialize, Serialize};

use crate::data::LabeledPointSet;
use crate::error::{Error, Result};
use crate::geometry::OrthoBasis;
use crate::linalg::dot;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OverlapKind {
    /// Length of the intersection of the two projected intervals.
    Interval,
    /// Soft-margin SVM objective, minimized over the offset.
    Svm,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OverlapSpec {
    pub kind: OverlapKind,
    /// Regularization weight; must be positive for the SVM kind.
    pub lambda: f64,
    /// Property whose overlap is measured.
    pub property: usize,
    /// Iteration cap of the SVM dual solver.
    pub max_iter: usize,
    /// Optimality tolerance of the SVM dual solver.
    pub tol_inner: f64,
    /// Sampled directions for the interval kind.
    pub directions: usize,
}

impl OverlapSpec {
    pub fn svm(lambda: f64) -> Self {
        Self {
            kind: OverlapKind::Svm,
            lambda,
            property: 0,
            max_iter: 200_000,
            tol_inner: 1e-12,
            directions: 4096,
        }
    }

    pub fn interval() -> Self {
        Self {
            kind: OverlapKind::Interval,
            lambda: 1.0,
            ..Self::svm(1.0)
        }
    }

    pub fn validate(&self, data: &LabeledPointSet) -> Result<()> {
        if self.kind == OverlapKind::Svm && !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(Error::BadParams(format!("lambda must be positive, got {}", self.lambda)));
        }
        if self.kind == OverlapKind::Interval && self.directions == 0 {
            return Err(Error::BadParams("at least one direction must be sampled".into()));
        }
        data.property_count_check(self.property)
    }
}

/// `|I_− ∩ I_+|` for the intervals spanned by `v·p` over the two classes.
pub fn g_interval(data: &LabeledPointSet, property: usize, v: &[f64]) -> f64 {
    let s: Vec<f64> = data.points().iter().map(|p| dot(v, p)).collect();
    interval_overlap(&s, &signs(data, property))
}

/// `λ|v|² + (1/n) Σ max(0, 1 − a(p)(v·p − b))`.
pub fn g_svm(data: &LabeledPointSet, property: usize, v: &[f64], b: f64, lambda: f64) -> f64 {
    let s: Vec<f64> = data.points().iter().map(|p| dot(v, p)).collect();
    lambda * dot(v, v) + hinge_mean(&s, &signs(data, property), b)
}

/// `f(P, w) = min_{v ⊥ w} g(P, v)`.
pub fn f_value(data: &LabeledPointSet, w: &[f64], spec: &OverlapSpec) -> Result<f64> {
    let d = data.dim();
    if w.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: w.len(),
        });
    }
    let c = OrthoBasis::from_orthonormal(d, vec![w.to_vec()], 1e-8)?;
    Ok(min_overlap(data, spec, &c)?.value)
}

pub(crate) fn signs(data: &LabeledPointSet, property: usize) -> Vec<f64> {
    (0..data.n()).map(|j| f64::from(data.label(property, j))).collect()
}

pub(crate) fn interval_overlap(s: &[f64], y: &[f64]) -> f64 {
    let (mut lo_n, mut hi_n, mut lo_p, mut hi_p) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for (&v, &l) in s.iter().zip(y) {
        if l > 0.0 {
            lo_p = lo_p.min(v);
            hi_p = hi_p.max(v);
        } else {
            lo_n = lo_n.min(v);
            hi_n = hi_n.max(v);
        }
    }
    (hi_n.min(hi_p) - lo_n.max(lo_p)).max(0.0)
}

pub(crate) fn hinge_mean(s: &[f64], y: &[f64], b: f64) -> f64 {
    if s.is_empty() {
        return 0.0;
    }
    s.iter().zip(y).map(|(&v, &l)| (1.0 - l * (v - b)).max(0.0)).sum::<f64>() / s.len() as f64
}
