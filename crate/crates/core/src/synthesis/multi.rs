//! Several separation-preserving projections for predicates with a Helly-type
//! witness.

use log::{debug, warn};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{next_combination, orthonormalize, project_points, OrthoBasis};
use crate::linalg::{self, dot};
use crate::separability::{
    bc_separable_bruteforce, interior_common_point, kirchberger_reduce, one_infty_separable, one_infty_witness,
    strictly_separable, Predicate, DEFAULT_BRUTE_FORCE_CAP,
};
use crate::Tolerances;

use super::{
    normal_complement, normal_coordinates, ImpossibleEvidence, ProjectionOutcome, SynthesisOutcome, SynthesisProblem,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriverOptions {
    /// Largest witness tried by the exhaustive `(b,c)` search.
    pub witness_cap: usize,
    /// Point cap for the exhaustive `(b,c)` oracle.
    pub brute_force_cap: usize,
    /// Number of subsets the `(b,c)` search may test before giving up.
    pub subset_budget: usize,
}

impl Default for DriverOptions {
    fn default() -> Self {
        Self {
            witness_cap: 12,
            brute_force_cap: DEFAULT_BRUTE_FORCE_CAP,
            subset_budget: 500_000,
        }
    }
}

fn holds(pred: &Predicate, p: &[Vec<f64>], q: &[Vec<f64>], opts: &DriverOptions, tol: &Tolerances) -> Result<bool> {
    pred.holds(p, q, opts.brute_force_cap, tol).map_err(|e| match e {
        Error::TooLarge { cap, .. } => Error::WitnessSearchExceeded { cap },
        other => other,
    })
}

/// Eliminates `predicate` for the hidden property.
///
/// The points are first mapped to coordinates along the keep-plane normals.
/// If the predicate still holds there, no separation-preserving projection
/// can break it and `Impossible` is returned with the evidence. Otherwise a
/// witness `W` on which the predicate fails is extracted, and the points are
/// projected along every direction of `aff(W)` orthogonal to the normals;
/// this makes `W` affinely equivalent to its image in normal coordinates. The
/// basis has at most `|W| − k` vectors. Without a witness the whole
/// orthogonal complement of the normals is used.
pub fn multi_projection_driver(
    prob: &SynthesisProblem,
    predicate: &Predicate,
    opts: &DriverOptions,
    tol: &Tolerances,
) -> Result<SynthesisOutcome> {
    let data = &prob.data;
    let d = data.dim();
    let planes = prob.resolve_keep_planes(tol)?;
    let (neg_idx, pos_idx) = data.split_indices(prob.hidden);
    if neg_idx.is_empty() || pos_idx.is_empty() {
        return Err(Error::NotSeparableInput {
            property: prob.hidden + 1,
        });
    }
    let neg = data.gather(&neg_idx);
    let pos = data.gather(&pos_idx);
    if !holds(predicate, &neg, &pos, opts, tol)? {
        return Err(Error::NotSeparableInput {
            property: prob.hidden + 1,
        });
    }

    let qn = normal_coordinates(&planes, &neg);
    let qp = normal_coordinates(&planes, &pos);
    if holds(predicate, &qn, &qp, opts, tol)? {
        let evidence = match *predicate {
            Predicate::Linear => ImpossibleEvidence::Linear {
                certificate: crate::separability::linear_separability(&qn, &qp, true, tol)?,
            },
            Predicate::Bc { b, c } => ImpossibleEvidence::Bc {
                cover: bc_separable_bruteforce(&qn, &qp, b, c, opts.brute_force_cap, tol)?
                    .cover
                    .ok_or_else(|| Error::InvariantViolation("separable without a cover".into()))?,
            },
            Predicate::OneInfinity => ImpossibleEvidence::OneInfinity {
                negatives_free: one_infty_separable(&qn, &qp, tol)?.p_star.is_none(),
            },
        };
        return Ok(SynthesisOutcome::Impossible {
            reason: format!(
                "{predicate} holds on the projection onto the keep-plane normals, so it survives every \
                 separation-preserving projection"
            ),
            evidence,
        });
    }

    let comp = normal_complement(&planes, d, tol)?;
    let witness = find_witness(predicate, &qn, &qp, opts, tol)?;
    let (basis, witness, fallback) = match witness {
        Some((wn, wp)) => {
            let mut w: Vec<usize> = wn.iter().map(|&i| neg_idx[i]).chain(wp.iter().map(|&j| pos_idx[j])).collect();
            w.sort_unstable();
            let basis = witness_basis(&data.gather(&w), &planes, &comp, tol)?;
            (basis, w, false)
        }
        None => {
            warn!("no witness within the search limits; projecting onto the keep-plane normals");
            (comp.clone(), Vec::new(), true)
        }
    };
    debug!("driver basis has {} vectors (witness size {})", basis.len(), witness.len());

    let projected = project_points(data.points(), &basis)?;
    let frame = basis.complement();
    let a: Vec<Vec<f64>> = neg_idx.iter().map(|&j| frame.coordinates(&projected[j])).collect();
    let b: Vec<Vec<f64>> = pos_idx.iter().map(|&j| frame.coordinates(&projected[j])).collect();
    if holds(predicate, &a, &b, opts, tol)? {
        return Err(Error::InvariantViolation(format!(
            "{predicate} still holds after the projection"
        )));
    }
    Ok(SynthesisOutcome::Projection(ProjectionOutcome {
        basis,
        witness,
        fallback,
        projected,
    }))
}

/// Witness in normal coordinates, as indices into the two classes.
fn find_witness(
    predicate: &Predicate,
    qn: &[Vec<f64>],
    qp: &[Vec<f64>],
    opts: &DriverOptions,
    tol: &Tolerances,
) -> Result<Option<(Vec<usize>, Vec<usize>)>> {
    match *predicate {
        Predicate::Linear => {
            let (cp, _) = interior_common_point(qn, qp, tol)?;
            let kw = kirchberger_reduce(qn, qp, &cp.x, &cp.lambda, &cp.mu, tol)?;
            Ok(Some((kw.p_idx, kw.q_idx)))
        }
        Predicate::OneInfinity => {
            let out = one_infty_separable(qn, qp, tol)?;
            match (out.p_star, out.q_star) {
                (Some(ps), Some(qs)) => Ok(Some(one_infty_witness(qn, qp, ps, qs, tol)?)),
                _ => Err(Error::InvariantViolation("missing (1,inf) witness points".into())),
            }
        }
        Predicate::Bc { b, c } => bc_witness(qn, qp, b, c, opts, tol),
    }
}

/// Smallest subset on which `(b,c)`-separability fails, scanning sizes in
/// increasing order and subsets lexicographically (negatives first).
fn bc_witness(
    qn: &[Vec<f64>],
    qp: &[Vec<f64>],
    b: usize,
    c: usize,
    opts: &DriverOptions,
    tol: &Tolerances,
) -> Result<Option<(Vec<usize>, Vec<usize>)>> {
    let n = qn.len() + qp.len();
    let at = |i: usize| if i < qn.len() { &qn[i] } else { &qp[i - qn.len()] };
    let mut budget = opts.subset_budget;
    for size in 2..=opts.witness_cap.min(n) {
        let mut subsets = Vec::new();
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            if idx[0] < qn.len() && idx[size - 1] >= qn.len() {
                subsets.push(idx.clone());
            }
            if !next_combination(&mut idx, n) {
                break;
            }
        }
        if subsets.len() > budget {
            return Ok(None);
        }
        budget -= subsets.len();
        let hit = subsets.par_iter().find_map_first(|s| {
            let a: Vec<Vec<f64>> = s.iter().filter(|&&i| i < qn.len()).map(|&i| at(i).clone()).collect();
            let bb: Vec<Vec<f64>> = s.iter().filter(|&&i| i >= qn.len()).map(|&i| at(i).clone()).collect();
            let fails = match strictly_separable(&a, &bb, tol) {
                Ok(true) => Ok(false),
                Ok(false) => bc_separable_bruteforce(&a, &bb, b, c, opts.brute_force_cap, tol).map(|o| !o.separable),
                Err(e) => Err(e),
            };
            match fails {
                Ok(false) => None,
                other => Some(other.map(|_| s.clone())),
            }
        });
        if let Some(found) = hit {
            let s = found?;
            let wn = s.iter().filter(|&&i| i < qn.len()).copied().collect();
            let wp = s.iter().filter(|&&i| i >= qn.len()).map(|&i| i - qn.len()).collect();
            return Ok(Some((wn, wp)));
        }
    }
    Ok(None)
}

/// Orthonormal basis of `dir(aff(W)) ∩ span(normals)^⊥`.
fn witness_basis(
    w: &[Vec<f64>],
    planes: &[crate::separability::Hyperplane],
    comp: &OrthoBasis,
    tol: &Tolerances,
) -> Result<OrthoBasis> {
    let d = comp.dim();
    let diffs: Vec<Vec<f64>> = w[1..].iter().map(|x| linalg::sub(x, &w[0])).collect();
    if diffs.is_empty() {
        return Ok(OrthoBasis::empty(d));
    }
    let dirs: Vec<Vec<f64>> = if planes.is_empty() {
        diffs
    } else {
        let m: Vec<Vec<f64>> = planes
            .iter()
            .map(|h| diffs.iter().map(|x| dot(&h.normal, x)).collect())
            .collect();
        let scale = m.iter().flatten().fold(1.0_f64, |s, v| s.max(v.abs()));
        linalg::null_space(&m, diffs.len(), tol.rank * scale)
            .iter()
            .map(|c| linalg::combination(&diffs, c, d))
            .collect()
    };
    // Strip round-off along the normals before orthonormalizing.
    let cleaned: Vec<Vec<f64>> = dirs.iter().map(|v| comp.project_onto(v)).collect();
    if cleaned.iter().all(|v| linalg::norm(v) <= tol.rank) {
        return Ok(OrthoBasis::empty(d));
    }
    let basis = orthonormalize(&cleaned, tol.rank)?;
    if basis.len() > comp.len() {
        return Ok(comp.clone());
    }
    Ok(basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::LabeledPointSet;

    fn square_problem() -> SynthesisProblem {
        // Property 1 is x, property 2 is y; all four labels.
        let data = LabeledPointSet::new(
            vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]],
            vec![vec![-1, 1, -1, 1], vec![-1, -1, 1, 1]],
        )
        .unwrap();
        SynthesisProblem::new(data)
    }

    #[test]
    fn linear_square_needs_one_projection() {
        let out = multi_projection_driver(
            &square_problem(),
            &Predicate::Linear,
            &DriverOptions::default(),
            &Tolerances::default(),
        )
        .unwrap();
        let SynthesisOutcome::Projection(p) = out else {
            panic!("expected a projection")
        };
        assert_eq!(p.basis.len(), 1);
        assert!(p.basis.vectors()[0][1].abs() < 1e-12);
    }

    #[test]
    fn missing_labels_can_be_impossible() {
        // Hidden property equals the kept one.
        let data = LabeledPointSet::new(
            vec![vec![0.0, 0.0], vec![1.0, 0.0]],
            vec![vec![-1, 1], vec![-1, 1]],
        )
        .unwrap();
        let out = multi_projection_driver(
            &SynthesisProblem::new(data),
            &Predicate::Linear,
            &DriverOptions::default(),
            &Tolerances::default(),
        )
        .unwrap();
        assert!(matches!(
            out,
            SynthesisOutcome::Impossible {
                evidence: ImpossibleEvidence::Linear { .. },
                ..
            }
        ));
    }
}
