//! Single separation-preserving projection that destroys strict linear
//! separability of the hidden property when all label combinations occur.

use log::warn;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    intersect_flats, project_points, Flat, FlatIntersection, OrthoBasis,
};
use crate::linalg::{self, combination, distance, norm};
use crate::separability::{
    interior_common_point, kirchberger_reduce, strictly_separable, Hyperplane, SeparationResult,
};
use crate::Tolerances;

use super::{normal_complement, normal_coordinates, ProjectionOutcome, SynthesisProblem};

/// Magnitude of the random nudge applied to keep-plane normals when the
/// construction hits a degenerate configuration.
pub const GENERAL_POSITION_NUDGE: f64 = 1e-7;
const NUDGE_RETRIES: usize = 5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Elimination {
    /// Unit projection vector.
    pub w: Vec<f64>,
    /// Keep-planes the projection is orthogonal to.
    pub planes: Vec<Hyperplane>,
    /// `P*`: original indices of the reduced witness, increasing.
    pub witness: Vec<usize>,
    /// Witness points with hidden label −1 / +1 and their coefficients.
    pub witness_neg: Vec<usize>,
    pub witness_pos: Vec<usize>,
    pub lambda: Vec<f64>,
    pub mu: Vec<f64>,
    /// The chosen `p*` (lowest index in `P*`).
    pub p_star: usize,
    /// `F1 ∩ F2`, or `None` when the direct residual direction was used.
    pub r: Option<Vec<f64>>,
    /// Common point of the projected hidden classes (coefficients over the
    /// full −1 / +1 index sets).
    pub certificate: SeparationResult,
    pub outcome: ProjectionOutcome,
}

/// Builds `w` in four steps: map the points to normal coordinates of the
/// keep-planes, find a common hull point of the hidden classes there, reduce
/// it to `k + 1` points `P*`, and intersect the flat through `P* \ {p*}` with
/// the translate of the keep-planes' intersection through `p*`. The projection
/// along `w = r − p*` collapses `p*` onto that flat, which transports the
/// non-separability of the normal coordinates to the projected points.
pub fn construct_eliminating_projection(prob: &SynthesisProblem, tol: &Tolerances) -> Result<Elimination> {
    let data = &prob.data;
    let k = data.k();
    let d = data.dim();
    let present = data.label_census().len();
    if k >= usize::BITS as usize || present < 1 << k {
        return Err(crate::error::Error::NotAllLabels { k, present });
    }
    if d < k {
        return Err(Error::BadParams(format!("need d >= k, got d = {d}, k = {k}")));
    }
    let mut planes = prob.resolve_planes(tol)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut last_err = None;
    for attempt in 0..=NUDGE_RETRIES {
        if attempt > 0 {
            warn!("degenerate configuration, nudging keep-planes (attempt {attempt})");
            planes = nudge_planes(&planes, &mut rng);
        }
        match attempt_construction(prob, &planes, tol) {
            Err(Error::DegeneratePosition(msg)) => last_err = Some(msg),
            other => return other,
        }
    }
    Err(Error::DegeneratePosition(last_err.unwrap_or_default()))
}

fn nudge_planes(planes: &[Hyperplane], rng: &mut ChaCha8Rng) -> Vec<Hyperplane> {
    planes
        .iter()
        .map(|h| {
            let n: Vec<f64> = h
                .normal
                .iter()
                .map(|v| {
                    let z: f64 = StandardNormal.sample(rng);
                    v + GENERAL_POSITION_NUDGE * z
                })
                .collect();
            Hyperplane {
                normal: linalg::scale(&n, 1.0 / norm(&n)),
                offset: h.offset,
            }
        })
        .collect()
}

fn attempt_construction(prob: &SynthesisProblem, planes: &[Hyperplane], tol: &Tolerances) -> Result<Elimination> {
    let data = &prob.data;
    let k = data.k();
    let d = data.dim();
    for (plane, &i) in planes.iter().zip(&prob.kept_properties()) {
        let separates = (0..data.n()).all(|j| {
            let s = plane.signed_distance(&data.points()[j]);
            if data.label(i, j) > 0 { s > 0.0 } else { s < 0.0 }
        });
        if !separates {
            return Err(Error::NotSeparableInput { property: i + 1 });
        }
    }
    let (neg_idx, pos_idx) = data.split_indices(prob.hidden);
    let neg = data.gather(&neg_idx);
    let pos = data.gather(&pos_idx);

    // Steps 1–2: normal coordinates; both classes surround the origin.
    let qn = normal_coordinates(planes, &neg);
    let qp = normal_coordinates(planes, &pos);
    let (cp, _) = interior_common_point(&qn, &qp, tol).map_err(|e| match e {
        Error::ActuallySeparable => Error::InvariantViolation(
            "hidden classes are separable in normal coordinates despite all labels".into(),
        ),
        other => other,
    })?;

    // Step 3: Kirchberger witness with at most k + 1 points.
    let kw = kirchberger_reduce(&qn, &qp, &cp.x, &cp.lambda, &cp.mu, tol)?;
    let witness_neg: Vec<usize> = kw.p_idx.iter().map(|&i| neg_idx[i]).collect();
    let witness_pos: Vec<usize> = kw.q_idx.iter().map(|&j| pos_idx[j]).collect();
    let mut witness: Vec<usize> = witness_neg.iter().chain(&witness_pos).copied().collect();
    witness.sort_unstable();

    // Step 4: w = r − p* with r = F1 ∩ F2.
    let comp = normal_complement(planes, d, tol)?;
    let p_star = witness[0];
    let residual = linalg::sub(
        &combination(&data.gather(&witness_neg), &kw.lambda, d),
        &combination(&data.gather(&witness_pos), &kw.mu, d),
    );
    let (raw, r) = if witness.len() == k + 1 {
        let rest = data.gather(&witness[1..]);
        let f1 = Flat::through(&rest, tol.rank)?;
        if f1.flat_dim() + 1 != k {
            return Err(Error::DegeneratePosition(format!(
                "flat through P* \\ {{p*}} has dimension {} instead of {}",
                f1.flat_dim(),
                k - 1
            )));
        }
        let f2 = Flat {
            base: data.points()[p_star].clone(),
            directions: comp.clone(),
        };
        match intersect_flats(&f1, &f2, tol.rank, tol.geom)? {
            FlatIntersection::Point(r) => (linalg::sub(&r, &data.points()[p_star]), Some(r)),
            FlatIntersection::Flat(_) => {
                return Err(Error::DegeneratePosition("F1 and F2 meet in a flat".into()))
            }
            FlatIntersection::Empty => {
                return Err(Error::DegeneratePosition("F1 and F2 do not meet".into()))
            }
        }
    } else {
        // A smaller witness leaves F1 too small to meet F2; the residual of
        // the witness combination is the direction the construction would
        // produce.
        (residual.clone(), None)
    };
    if norm(&raw) <= tol.geom {
        return Err(Error::DegeneratePosition("r coincides with p*".into()));
    }
    // Remove round-off components along the normals.
    let w = linalg::normalized(&comp.project_onto(&raw), tol.geom)
        .ok_or_else(|| Error::DegeneratePosition("projection vector vanishes".into()))?;
    let basis = OrthoBasis::from_orthonormal(d, vec![w.clone()], tol.orth)?;
    let projected = project_points(data.points(), &basis)?;

    // Certificate: the witness coefficients recombine on the projected points.
    let pn: Vec<Vec<f64>> = witness_neg.iter().map(|&j| projected[j].clone()).collect();
    let pp: Vec<Vec<f64>> = witness_pos.iter().map(|&j| projected[j].clone()).collect();
    let x = combination(&pn, &kw.lambda, d);
    let gap = distance(&x, &combination(&pp, &kw.mu, d));
    if gap > 1e-7 * (1.0 + norm(&x)) {
        return Err(Error::DegeneratePosition(format!(
            "projected witness does not recombine (residual {gap:e})"
        )));
    }
    let mut lambda_full = vec![0.0; neg_idx.len()];
    for (&i, &l) in kw.p_idx.iter().zip(&kw.lambda) {
        lambda_full[i] = l;
    }
    let mut mu_full = vec![0.0; pos_idx.len()];
    for (&j, &m) in kw.q_idx.iter().zip(&kw.mu) {
        mu_full[j] = m;
    }
    let certificate = SeparationResult::Inseparable {
        x,
        lambda: lambda_full,
        mu: mu_full,
    };

    // Independent LP confirmation in the coordinates of the projection.
    let frame = basis.complement();
    let reduced: Vec<Vec<f64>> = projected.iter().map(|p| frame.coordinates(p)).collect();
    let split = |i: usize| {
        let (a, b) = data.split_indices(i);
        (
            a.iter().map(|&j| reduced[j].clone()).collect::<Vec<_>>(),
            b.iter().map(|&j| reduced[j].clone()).collect::<Vec<_>>(),
        )
    };
    let (rn, rp) = split(prob.hidden);
    if strictly_separable(&rn, &rp, tol)? {
        return Err(Error::InvariantViolation(
            "hidden property still strictly separable after projection".into(),
        ));
    }
    for i in prob.kept_properties() {
        let (a, b) = split(i);
        if !strictly_separable(&a, &b, tol)? {
            return Err(Error::InvariantViolation(format!(
                "property {} lost strict separability",
                i + 1
            )));
        }
    }

    Ok(Elimination {
        w,
        planes: planes.to_vec(),
        witness: witness.clone(),
        witness_neg,
        witness_pos,
        lambda: kw.lambda,
        mu: kw.mu,
        p_star,
        r,
        certificate,
        outcome: ProjectionOutcome {
            basis,
            witness,
            fallback: false,
            projected,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::LabeledPointSet;

    #[test]
    fn single_property_collapses_onto_the_separating_direction() {
        let data = LabeledPointSet::new(vec![vec![0.0, 0.0], vec![1.0, 0.0]], vec![vec![-1, 1]]).unwrap();
        let e = construct_eliminating_projection(&SynthesisProblem::new(data), &Tolerances::default()).unwrap();
        assert!((e.w[0].abs() - 1.0).abs() < 1e-12 && e.w[1].abs() < 1e-12);
        assert!(distance(&e.outcome.projected[0], &e.outcome.projected[1]) < 1e-12);
    }

    #[test]
    fn missing_labels_are_rejected() {
        let data = LabeledPointSet::new(
            vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]],
            vec![vec![-1, 1, 1], vec![-1, -1, 1]],
        )
        .unwrap();
        let r = construct_eliminating_projection(&SynthesisProblem::new(data), &Tolerances::default());
        assert_eq!(r.unwrap_err(), Error::NotAllLabels { k: 2, present: 3 });
    }
}
