use serde::{Deserialize, Serialize};

use crate::data::LabeledPointSet;
use crate::error::{Error, Result};
use crate::geometry::{project_points, OrthoBasis};
use crate::linalg::dot;
use crate::separability::{linear_separability, SeparationResult};
use crate::Tolerances;

use super::lift_result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    /// One-based property number.
    pub property: usize,
    pub strictly_separable: bool,
    /// Separable allowing points on the hyperplane.
    pub weakly_separable: bool,
    pub margin: f64,
    /// Strict-mode certificate (hyperplane or common hull point).
    pub certificate: SeparationResult,
    /// Weak-mode certificate; an inseparable answer has strictly positive
    /// coefficients.
    pub weak_certificate: SeparationResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    /// Number of projection vectors.
    pub r: usize,
    pub basis: OrthoBasis,
    pub properties: Vec<PropertyReport>,
    /// `max_i |w_j·v_i|` per basis vector.
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    pub separation_preserving: bool,
    /// Projected points, embedded in `R^d`.
    pub projected: Vec<Vec<f64>>,
}

impl VerificationReport {
    pub fn property(&self, one_based: usize) -> Option<&PropertyReport> {
        self.properties.iter().find(|p| p.property == one_based)
    }

    /// Re-validates every certificate against `data` projected along the
    /// report's basis.
    pub fn revalidate(&self, data: &LabeledPointSet, residual_tol: f64) -> Result<()> {
        revalidate_properties(data, &self.basis, &self.properties, residual_tol)
    }
}

/// Checks each property report's certificates against `data` projected along
/// `basis`, and that the flags agree with the certificates.
pub fn revalidate_properties(
    data: &LabeledPointSet,
    basis: &OrthoBasis,
    properties: &[PropertyReport],
    residual_tol: f64,
) -> Result<()> {
    let projected = project_points(data.points(), basis)?;
    for pr in properties {
        if pr.property == 0 || pr.property > data.k() {
            return Err(Error::InvalidCertificate(format!("no property {}", pr.property)));
        }
        let (neg, pos) = data.split_indices(pr.property - 1);
        let a: Vec<Vec<f64>> = neg.iter().map(|&j| projected[j].clone()).collect();
        let b: Vec<Vec<f64>> = pos.iter().map(|&j| projected[j].clone()).collect();
        pr.certificate.validate(&a, &b, 1e-9, residual_tol)?;
        pr.weak_certificate.validate(&a, &b, 1e-9, residual_tol)?;
        if pr.certificate.is_strictly_separable() != pr.strictly_separable
            || pr.weak_certificate.is_separable() != pr.weakly_separable
        {
            return Err(Error::InvalidCertificate(format!(
                "flags of property {} disagree with certificates",
                pr.property
            )));
        }
    }
    Ok(())
}

/// Separability of every property after projecting along `basis`, measured
/// in coordinates of the orthogonal complement of the basis, so that weak
/// separability is not trivially satisfied by the projection itself.
pub fn verify_after_projection(
    data: &LabeledPointSet,
    basis: &OrthoBasis,
    keep_normals: &[Vec<f64>],
    tol: &Tolerances,
) -> Result<VerificationReport> {
    let d = data.dim();
    if basis.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: basis.dim(),
        });
    }
    for v in keep_normals {
        if v.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: v.len(),
            });
        }
    }
    let projected = project_points(data.points(), basis)?;
    let frame = basis.complement();
    let reduced: Vec<Vec<f64>> = projected.iter().map(|p| frame.coordinates(p)).collect();
    let mut properties = Vec::with_capacity(data.k());
    for i in 0..data.k() {
        let (neg, pos) = data.split_indices(i);
        let a: Vec<Vec<f64>> = neg.iter().map(|&j| reduced[j].clone()).collect();
        let b: Vec<Vec<f64>> = pos.iter().map(|&j| reduced[j].clone()).collect();
        if a.is_empty() || b.is_empty() || frame.is_empty() {
            return Err(Error::BadParams(format!(
                "property {} cannot be tested (empty class or no dimensions left)",
                i + 1
            )));
        }
        let strict = linear_separability(&a, &b, true, tol)?;
        let weak = if strict.is_strictly_separable() {
            strict.clone()
        } else {
            linear_separability(&a, &b, false, tol)?
        };
        properties.push(PropertyReport {
            property: i + 1,
            strictly_separable: strict.is_strictly_separable(),
            weakly_separable: weak.is_separable(),
            margin: strict.margin(),
            certificate: lift_result(strict, &frame),
            weak_certificate: lift_result(weak, &frame),
        });
    }
    let residuals: Vec<f64> = basis
        .vectors()
        .iter()
        .map(|w| keep_normals.iter().map(|v| dot(w, v).abs()).fold(0.0, f64::max))
        .collect();
    let max_residual = residuals.iter().copied().fold(0.0, f64::max);
    Ok(VerificationReport {
        r: basis.len(),
        basis: basis.clone(),
        properties,
        residuals,
        max_residual,
        separation_preserving: max_residual <= tol.orth,
        projected,
    })
}
