//! Separation-preserving projections that destroy the separability of a
//! hidden property.
//!
//! A projection along `w` is separation preserving for hyperplanes
//! `H_2, …, H_k` when `w` is orthogonal to all their normals; the same
//! hyperplanes then still separate their properties after projection.

pub mod eliminate;
pub mod multi;
pub mod perturb;
pub mod verify;

pub use eliminate::{construct_eliminating_projection, Elimination};
pub use multi::{multi_projection_driver, DriverOptions};
pub use perturb::{perturb_general_position, Perturbation, PerturbOptions};
pub use verify::{revalidate_properties, verify_after_projection, PropertyReport, VerificationReport};

use serde::{Deserialize, Serialize};

use crate::data::LabeledPointSet;
use crate::error::{Error, Result};
use crate::geometry::OrthoBasis;
use crate::linalg::{dot, norm};
use crate::separability::{max_margin_hyperplane, BcCover, Hyperplane, SeparationResult};
use crate::Tolerances;

/// Input to the synthesis routines.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthesisProblem {
    pub data: LabeledPointSet,
    /// Index of the property whose separability should be destroyed.
    pub hidden: usize,
    /// Separating hyperplanes for the other properties, in increasing
    /// property order. Computed as maximum-margin hyperplanes when absent.
    pub keep_planes: Option<Vec<Hyperplane>>,
}

impl SynthesisProblem {
    pub fn new(data: LabeledPointSet) -> Self {
        Self {
            data,
            hidden: 0,
            keep_planes: None,
        }
    }

    /// Indices of the properties that must stay separable.
    pub fn kept_properties(&self) -> Vec<usize> {
        (0..self.data.k()).filter(|&i| i != self.hidden).collect()
    }

    /// Validated keep-planes, oriented so that label −1 is below.
    pub fn resolve_planes(&self, tol: &Tolerances) -> Result<Vec<Hyperplane>> {
        self.data.property_count_check(self.hidden)?;
        let (neg, pos) = self.data.split(self.hidden);
        if neg.is_empty() || pos.is_empty() || max_margin_hyperplane(&neg, &pos, tol)?.is_none() {
            return Err(Error::NotSeparableInput {
                property: self.hidden + 1,
            });
        }
        self.resolve_keep_planes(tol)
    }

    /// Keep-planes only; the hidden property is not inspected.
    pub fn resolve_keep_planes(&self, tol: &Tolerances) -> Result<Vec<Hyperplane>> {
        self.data.property_count_check(self.hidden)?;
        let kept = self.kept_properties();
        match &self.keep_planes {
            Some(planes) => {
                if planes.len() != kept.len() {
                    return Err(Error::BadParams(format!(
                        "expected {} keep-planes, got {}",
                        kept.len(),
                        planes.len()
                    )));
                }
                for (plane, &i) in planes.iter().zip(&kept) {
                    if plane.normal.len() != self.data.dim() {
                        return Err(Error::DimensionMismatch {
                            expected: self.data.dim(),
                            found: plane.normal.len(),
                        });
                    }
                    if (norm(&plane.normal) - 1.0).abs() > tol.orth.max(1e-9) {
                        return Err(Error::BadParams("keep-plane normal is not unit".into()));
                    }
                    let separates = (0..self.data.n()).all(|j| {
                        let s = plane.signed_distance(&self.data.points()[j]);
                        if self.data.label(i, j) > 0 {
                            s > tol.lp
                        } else {
                            s < -tol.lp
                        }
                    });
                    if !separates {
                        return Err(Error::NotSeparableInput { property: i + 1 });
                    }
                }
                Ok(planes.clone())
            }
            None => kept
                .iter()
                .map(|&i| {
                    let (neg, pos) = self.data.split(i);
                    if neg.is_empty() || pos.is_empty() {
                        return Err(Error::NotSeparableInput { property: i + 1 });
                    }
                    max_margin_hyperplane(&neg, &pos, tol)?
                        .map(|(h, _)| h)
                        .ok_or(Error::NotSeparableInput { property: i + 1 })
                })
                .collect(),
        }
    }
}

/// Evidence attached to an impossibility verdict: the predicate holds on the
/// projection onto the span of the keep-plane normals, so no sequence of
/// separation-preserving projections can break it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ImpossibleEvidence {
    /// A strict separation of the hidden property in normal coordinates.
    Linear { certificate: SeparationResult },
    /// A `(b,c)` cover in normal coordinates.
    Bc { cover: BcCover },
    /// No point of one class lies in the hull of the other class, in normal
    /// coordinates. `negatives_free` means no −1 point is inside the hull of
    /// the +1 points.
    OneInfinity { negatives_free: bool },
}

/// Successful synthesis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectionOutcome {
    pub basis: OrthoBasis,
    /// Indices of the points whose non-separability was transported.
    pub witness: Vec<usize>,
    /// Whether the basis came from the full-collapse fallback.
    pub fallback: bool,
    /// Projected points, still embedded in `R^d`.
    pub projected: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum SynthesisOutcome {
    Projection(ProjectionOutcome),
    Impossible {
        reason: String,
        evidence: ImpossibleEvidence,
    },
}

/// `true` iff `|w·v_i| ≤ tol` for every normal.
pub fn is_separation_preserving(w: &[f64], normals: &[Vec<f64>], tol: f64) -> Result<bool> {
    for v in normals {
        if v.len() != w.len() {
            return Err(Error::DimensionMismatch {
                expected: w.len(),
                found: v.len(),
            });
        }
    }
    Ok(normals.iter().all(|v| dot(w, v).abs() <= tol))
}

/// The affine map `T(p) = (v_i·p − c_i)_i` onto normal coordinates; it sends
/// the intersection of the keep-planes to the origin.
pub(crate) fn normal_coordinates(planes: &[Hyperplane], points: &[Vec<f64>]) -> Vec<Vec<f64>> {
    points
        .iter()
        .map(|p| planes.iter().map(|h| h.signed_distance(p)).collect())
        .collect()
}

/// Orthonormal basis of the orthogonal complement of the keep-plane normals.
pub(crate) fn normal_complement(planes: &[Hyperplane], d: usize, tol: &Tolerances) -> Result<OrthoBasis> {
    let normals: Vec<Vec<f64>> = planes.iter().map(|h| h.normal.clone()).collect();
    if normals.is_empty() {
        return Ok(OrthoBasis::empty(d).complement());
    }
    let a = crate::geometry::orthonormalize(&normals, tol.rank)?;
    if a.len() < normals.len() {
        return Err(Error::DegeneratePosition("keep-plane normals are dependent".into()));
    }
    Ok(a.complement())
}

/// Lifts a certificate computed in the coordinates of `frame` back to the
/// ambient space.
pub(crate) fn lift_result(res: SeparationResult, frame: &OrthoBasis) -> SeparationResult {
    match res {
        SeparationResult::Separable {
            hyperplane,
            strict,
            margin,
        } => SeparationResult::Separable {
            hyperplane: Hyperplane {
                normal: frame.lift(&hyperplane.normal),
                offset: hyperplane.offset,
            },
            strict,
            margin,
        },
        SeparationResult::Inseparable { x, lambda, mu } => SeparationResult::Inseparable {
            x: frame.lift(&x),
            lambda,
            mu,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preservation_flags() {
        assert!(is_separation_preserving(&[1.0, 0.0], &[], 1e-10).unwrap());
        assert!(!is_separation_preserving(&[0.6, 0.8], &[vec![0.6, 0.8]], 1e-10).unwrap());
        assert!(is_separation_preserving(&[0.8, -0.6], &[vec![0.6, 0.8]], 1e-10).unwrap());
    }
}
