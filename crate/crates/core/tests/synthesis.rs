mod common;

use proptest::prelude::*;

use common::project_along;
use projsep::constructions::gen_random_all_labels;
use projsep::linalg::{dot, norm};
use projsep::separability::{linear_separability, strictly_separable, Predicate};
use projsep::synthesis::{
    construct_eliminating_projection, is_separation_preserving, multi_projection_driver, perturb_general_position,
    verify_after_projection, DriverOptions, ImpossibleEvidence, PerturbOptions, SynthesisOutcome, SynthesisProblem,
};
use projsep::{Error, LabeledPointSet, OrthoBasis, Tolerances};

fn tol() -> Tolerances {
    Tolerances::default()
}

fn problem(seed: u64, d: usize, k: usize) -> (SynthesisProblem, Vec<Vec<f64>>) {
    let (data, planes) = gen_random_all_labels(3 << k, d, k, 0.05, seed).unwrap();
    let normals = planes[1..].iter().map(|h| h.normal.clone()).collect();
    let prob = SynthesisProblem {
        data,
        hidden: 0,
        keep_planes: Some(planes[1..].to_vec()),
    };
    (prob, normals)
}

fn split_points(data: &LabeledPointSet, pts: &[Vec<f64>], property: usize) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let (neg, pos) = data.split_indices(property);
    (
        neg.iter().map(|&j| pts[j].clone()).collect(),
        pos.iter().map(|&j| pts[j].clone()).collect(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn elimination_hides_one_property_and_keeps_the_rest(seed in 0u64..1_000_000, k in 1usize..4, extra in 1usize..4) {
        let d = k + extra;
        let (prob, normals) = problem(seed, d, k);
        let t = tol();
        let e = construct_eliminating_projection(&prob, &t).unwrap();
        prop_assert!((norm(&e.w) - 1.0).abs() < 1e-10);
        prop_assert!(is_separation_preserving(&e.w, &normals, 1e-8).unwrap());
        let projected = project_along(prob.data.points(), &e.w);
        let (a, b) = split_points(&prob.data, &projected, 0);
        prop_assert!(!strictly_separable(&a, &b, &t).unwrap());
        for i in 1..k {
            let (a, b) = split_points(&prob.data, &projected, i);
            prop_assert!(strictly_separable(&a, &b, &t).unwrap(), "property {} lost", i + 1);
        }
    }

    #[test]
    fn preserving_projection_keeps_plane_distances(seed in 0u64..1_000_000, k in 2usize..4, extra in 1usize..3) {
        let (prob, _) = problem(seed, k + extra, k);
        let t = tol();
        let e = construct_eliminating_projection(&prob, &t).unwrap();
        let projected = project_along(prob.data.points(), &e.w);
        for plane in &e.planes {
            for (x, y) in prob.data.points().iter().zip(&projected) {
                prop_assert!((plane.signed_distance(x) - plane.signed_distance(y)).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn perturbation_stays_close_and_keeps_the_hidden_property_broken(seed in 0u64..1_000_000, k in 1usize..4, extra in 1usize..3) {
        let (prob, _) = problem(seed, k + extra, k);
        let t = tol();
        let e = construct_eliminating_projection(&prob, &t).unwrap();
        let (neg, pos) = prob.data.split(0);
        let opts = PerturbOptions::default();
        // Running out of attempts is a legitimate outcome on rare inputs.
        let p = match perturb_general_position(&neg, &pos, &e.w, &opts, &t) {
            Err(Error::PerturbationFailed { .. }) => return Ok(()),
            other => other.unwrap(),
        };
        prop_assert!(p.deviation <= opts.epsilon * (1.0 + 1e-9));
        prop_assert!(dot(&p.w, &e.w) > 0.0);
        prop_assert!(p.coefficients.iter().all(|&c| c > 0.0));
        let basis = OrthoBasis::from_orthonormal(k + extra, vec![p.w.clone()], 1e-9).unwrap();
        let report = verify_after_projection(&prob.data, &basis, &[], &t).unwrap();
        prop_assert!(!report.properties[0].weakly_separable);
        report.revalidate(&prob.data, 1e-7).unwrap();
    }

    #[test]
    fn driver_basis_is_orthonormal_and_preserving(seed in 0u64..1_000_000, k in 1usize..4, extra in 0usize..3) {
        let d = k + extra;
        let (prob, normals) = problem(seed, d, k);
        let t = tol();
        let out = multi_projection_driver(&prob, &Predicate::Linear, &DriverOptions::default(), &t).unwrap();
        let SynthesisOutcome::Projection(p) = out else {
            return Err(TestCaseError::fail("all-label data should admit a projection"));
        };
        prop_assert!(p.basis.orthonormality_error() < 1e-10);
        prop_assert!(p.basis.len() <= d - k + 1);
        for w in p.basis.vectors() {
            prop_assert!(is_separation_preserving(w, &normals, 1e-8).unwrap());
        }
        let (a, b) = split_points(&prob.data, &p.projected, 0);
        prop_assert!(!strictly_separable(&a, &b, &t).unwrap());
    }
}

#[test]
fn hidden_copy_of_a_kept_property_is_impossible() {
    let (data, planes) = gen_random_all_labels(12, 3, 2, 0.05, 7).unwrap();
    let labels = vec![data.labels()[1].clone(), data.labels()[1].clone()];
    let data = LabeledPointSet::new(data.points().to_vec(), labels).unwrap();
    let prob = SynthesisProblem {
        data,
        hidden: 0,
        keep_planes: Some(vec![planes[1].clone()]),
    };
    let t = tol();
    let out = multi_projection_driver(&prob, &Predicate::Linear, &DriverOptions::default(), &t).unwrap();
    match out {
        SynthesisOutcome::Impossible {
            evidence: ImpossibleEvidence::Linear { certificate },
            ..
        } => assert!(certificate.is_strictly_separable()),
        other => panic!("expected an impossibility verdict, got {other:?}"),
    }
    assert!(construct_eliminating_projection(&prob, &t).is_err());
}

#[test]
fn single_property_in_the_plane() {
    let points = vec![vec![0.0, 0.0], vec![0.0, 1.0], vec![2.0, 0.0], vec![2.0, 1.0]];
    let data = LabeledPointSet::new(points, vec![vec![-1, -1, 1, 1]]).unwrap();
    let t = tol();
    let e = construct_eliminating_projection(&SynthesisProblem::new(data.clone()), &t).unwrap();
    let projected = project_along(data.points(), &e.w);
    let (a, b) = split_points(&data, &projected, 0);
    assert!(!linear_separability(&a, &b, true, &t).unwrap().is_separable());
}

#[test]
fn inseparable_hidden_property_is_rejected() {
    let points = vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![1.0, 0.0], vec![0.0, 1.0]];
    let data = LabeledPointSet::new(points, vec![vec![-1, -1, 1, 1]]).unwrap();
    assert!(construct_eliminating_projection(&SynthesisProblem::new(data), &tol()).is_err());
}
