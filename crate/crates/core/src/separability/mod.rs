//! Separability predicates and their certificates.

pub mod bc;
pub mod kirchberger;
pub mod linear;
pub mod one_infty;
pub mod predicate;

pub use bc::{bc_separable_bruteforce, validate_cover, BcCover, BcOutcome, DEFAULT_BRUTE_FORCE_CAP};
pub use kirchberger::{kirchberger_reduce, KirchbergerWitness};
pub use linear::{
    common_point, interior_common_point, linear_separability, max_margin_hyperplane,
    point_in_hull, strict_slack, strictly_separable, CommonPoint,
};
pub use one_infty::{one_infty_separable, one_infty_witness, OneInftyOutcome};
pub use predicate::Predicate;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{combination, distance, dot, norm};

/// `{x : normal·x = offset}` with unit `normal`. The first point set lies on
/// the side `normal·x < offset`, the second on `normal·x > offset`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hyperplane {
    pub normal: Vec<f64>,
    pub offset: f64,
}

impl Hyperplane {
    pub fn signed_distance(&self, x: &[f64]) -> f64 {
        dot(&self.normal, x) - self.offset
    }
}

/// Outcome of a linear separability test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SeparationResult {
    Separable {
        hyperplane: Hyperplane,
        strict: bool,
        margin: f64,
    },
    Inseparable {
        x: Vec<f64>,
        lambda: Vec<f64>,
        mu: Vec<f64>,
    },
}

impl SeparationResult {
    pub fn is_separable(&self) -> bool {
        matches!(self, SeparationResult::Separable { .. })
    }

    pub fn is_strictly_separable(&self) -> bool {
        matches!(self, SeparationResult::Separable { strict: true, .. })
    }

    pub fn margin(&self) -> f64 {
        match self {
            SeparationResult::Separable { margin, .. } => *margin,
            SeparationResult::Inseparable { .. } => 0.0,
        }
    }

    /// Re-checks the certificate against the point sets it was computed for.
    ///
    /// `side_tol` bounds how far a point may sit on the wrong side of a
    /// separating hyperplane; `residual_tol` bounds the recombination error
    /// of a common-point certificate.
    pub fn validate(
        &self,
        p: &[Vec<f64>],
        q: &[Vec<f64>],
        side_tol: f64,
        residual_tol: f64,
    ) -> Result<()> {
        match self {
            SeparationResult::Separable {
                hyperplane,
                strict,
                margin,
            } => {
                if (norm(&hyperplane.normal) - 1.0).abs() > 1e-9 {
                    return Err(Error::InvalidCertificate("normal is not unit".into()));
                }
                let need = if *strict {
                    if *margin <= 0.0 {
                        return Err(Error::InvalidCertificate(
                            "strict separation with non-positive margin".into(),
                        ));
                    }
                    *margin
                } else {
                    0.0
                };
                for (j, x) in p.iter().enumerate() {
                    if hyperplane.signed_distance(x) > -need + side_tol {
                        return Err(Error::InvalidCertificate(format!(
                            "first-set point {j} is on the wrong side"
                        )));
                    }
                }
                for (j, x) in q.iter().enumerate() {
                    if hyperplane.signed_distance(x) < need - side_tol {
                        return Err(Error::InvalidCertificate(format!(
                            "second-set point {j} is on the wrong side"
                        )));
                    }
                }
                Ok(())
            }
            SeparationResult::Inseparable { x, lambda, mu } => {
                check_convex_certificate(p, q, x, lambda, mu, residual_tol)
            }
        }
    }
}

/// Checks that `lambda`, `mu` are convex coefficients recombining to `x`.
pub fn check_convex_certificate(
    p: &[Vec<f64>],
    q: &[Vec<f64>],
    x: &[f64],
    lambda: &[f64],
    mu: &[f64],
    residual_tol: f64,
) -> Result<()> {
    if lambda.len() != p.len() || mu.len() != q.len() {
        return Err(Error::InvalidCertificate("coefficient count mismatch".into()));
    }
    for (name, c) in [("lambda", lambda), ("mu", mu)] {
        if c.iter().any(|&v| v < -1e-12 || !v.is_finite()) {
            return Err(Error::InvalidCertificate(format!("{name} has a negative entry")));
        }
        let s: f64 = c.iter().sum();
        if (s - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidCertificate(format!("{name} sums to {s}")));
        }
    }
    let d = x.len();
    let rp = distance(&combination(p, lambda, d), x);
    let rq = distance(&combination(q, mu, d), x);
    if rp > residual_tol || rq > residual_tol {
        return Err(Error::InvalidCertificate(format!(
            "recombination residual {:e} exceeds {residual_tol:e}",
            rp.max(rq)
        )));
    }
    Ok(())
}

pub(crate) fn check_same_dim(p: &[Vec<f64>], q: &[Vec<f64>]) -> Result<usize> {
    let first = p
        .first()
        .or_else(|| q.first())
        .ok_or(Error::EmptyInput("point sets"))?;
    let d = first.len();
    for x in p.iter().chain(q) {
        if x.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: x.len(),
            });
        }
    }
    Ok(d)
}

pub(crate) fn require_nonempty(p: &[Vec<f64>], q: &[Vec<f64>]) -> Result<usize> {
    if p.is_empty() || q.is_empty() {
        return Err(Error::EmptyInput("both point sets must be nonempty"));
    }
    check_same_dim(p, q)
}
