mod common;

use proptest::prelude::*;

use common::{apply, gaussian_cloud, overlapping_pair, planted_pair, random_affine, rng};
use projsep::separability::{
    bc_separable_bruteforce, common_point, interior_common_point, kirchberger_reduce, linear_separability,
    one_infty_separable, one_infty_witness, point_in_hull, strict_slack, strictly_separable, validate_cover,
    Predicate,
};
use projsep::{SeparationResult, Tolerances};

fn tol() -> Tolerances {
    Tolerances::default()
}

fn pick(pts: &[Vec<f64>], idx: &[usize]) -> Vec<Vec<f64>> {
    idx.iter().map(|&i| pts[i].clone()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn certificates_validate(seed in any::<u64>(), n in 2usize..12, d in 1usize..5, strict in any::<bool>()) {
        let (p, q) = overlapping_pair(seed, n, d);
        let r = linear_separability(&p, &q, strict, &tol()).unwrap();
        r.validate(&p, &q, 1e-9, 1e-7).unwrap();
        if let SeparationResult::Inseparable { .. } = r {
            prop_assert!(!strictly_separable(&p, &q, &tol()).unwrap());
        }
    }

    #[test]
    fn planted_margin_is_found(seed in any::<u64>(), n in 1usize..15, d in 1usize..6, gap in 0.05f64..1.0) {
        let (p, q, _) = planted_pair(seed, n, d, gap);
        let r = linear_separability(&p, &q, true, &tol()).unwrap();
        prop_assert!(r.is_strictly_separable());
        prop_assert!(r.margin() >= gap * (1.0 - 1e-6), "margin {} below planted {}", r.margin(), gap);
        r.validate(&p, &q, 1e-9, 1e-7).unwrap();
    }

    #[test]
    fn kirchberger_witness_is_small_and_intersecting(seed in any::<u64>(), n in 3usize..20, d in 1usize..5) {
        let (p, q) = overlapping_pair(seed, n, d);
        prop_assume!(!strictly_separable(&p, &q, &tol()).unwrap());
        let c = common_point(&p, &q, &tol()).unwrap();
        let w = kirchberger_reduce(&p, &q, &c.x, &c.lambda, &c.mu, &tol()).unwrap();
        prop_assert!(w.size() <= d + 2);
        let (ps, qs) = (pick(&p, &w.p_idx), pick(&q, &w.q_idx));
        prop_assert!(!strictly_separable(&ps, &qs, &tol()).unwrap());
        SeparationResult::Inseparable { x: w.x, lambda: w.lambda, mu: w.mu }
            .validate(&ps, &qs, 1e-9, 1e-7)
            .unwrap();
    }

    #[test]
    fn separability_is_affine_invariant(seed in any::<u64>(), n in 2usize..10, d in 1usize..5, planted in any::<bool>()) {
        let (p, q) = if planted {
            let (p, q, _) = planted_pair(seed, n, d, 0.1);
            (p, q)
        } else {
            overlapping_pair(seed, n, d)
        };
        let s = strict_slack(&p, &q).unwrap();
        prop_assume!(s.abs() > 1e-6);
        let (m, t) = random_affine(seed ^ 0x5eed, d);
        let (ap, aq) = (apply(&m, &t, &p), apply(&m, &t, &q));
        prop_assert_eq!(s > 0.0, strictly_separable(&ap, &aq, &tol()).unwrap());
    }

    #[test]
    fn swapping_sets_preserves_the_answer(seed in any::<u64>(), n in 2usize..10, d in 1usize..4) {
        let (p, q) = overlapping_pair(seed, n, d);
        let s = strict_slack(&p, &q).unwrap();
        prop_assume!(s.abs() > 1e-6);
        prop_assert_eq!(s > 0.0, strictly_separable(&q, &p, &tol()).unwrap());
    }

    #[test]
    fn hull_membership(seed in any::<u64>(), n in 1usize..10, d in 1usize..5) {
        let mut r = rng(seed);
        let p = gaussian_cloud(&mut r, n, d, &vec![0.0; d], 1.0);
        let weights: Vec<f64> = (0..n).map(|i| 1.0 + (i as f64 * 0.37).sin().abs()).collect();
        let total: f64 = weights.iter().sum();
        let x: Vec<f64> = (0..d)
            .map(|c| p.iter().zip(&weights).map(|(y, w)| y[c] * w / total).sum())
            .collect();
        let lam = point_in_hull(&x, &p, &tol()).unwrap().expect("combination lies in the hull");
        prop_assert_eq!(lam.len(), n);
        prop_assert!((lam.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        for c in 0..d {
            let y: f64 = p.iter().zip(&lam).map(|(y, l)| y[c] * l).sum();
            prop_assert!((y - x[c]).abs() < 1e-7);
        }
        let far_coord = p.iter().map(|y| y[0]).fold(f64::NEG_INFINITY, f64::max) + 1.0;
        let mut far = x.clone();
        far[0] = far_coord;
        prop_assert!(point_in_hull(&far, &p, &tol()).unwrap().is_none());
    }

    #[test]
    fn interior_point_coefficients_are_positive_when_hulls_overlap(seed in any::<u64>(), d in 1usize..4) {
        let (p, q) = overlapping_pair(seed, 3 * (d + 1), d);
        let (c, t) = interior_common_point(&p, &q, &tol()).unwrap();
        SeparationResult::Inseparable { x: c.x, lambda: c.lambda, mu: c.mu }
            .validate(&p, &q, 1e-9, 1e-7)
            .unwrap();
        if t > 1e-9 {
            prop_assert!(!linear_separability(&p, &q, false, &tol()).unwrap().is_separable());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn bc_is_monotone_in_group_counts(seed in any::<u64>(), np in 1usize..5, nq in 1usize..5) {
        let (p, q) = overlapping_pair(seed, 5, 2);
        let (p, q) = (p[..np].to_vec(), q[..nq].to_vec());
        let t = tol();
        let s11 = bc_separable_bruteforce(&p, &q, 1, 1, 14, &t).unwrap();
        prop_assert_eq!(s11.separable, strictly_separable(&p, &q, &t).unwrap());
        let mut previous = false;
        for (b, c) in [(1, 1), (1, 2), (2, 2), (2, 3), (3, 3)] {
            let out = bc_separable_bruteforce(&p, &q, b, c, 14, &t).unwrap();
            prop_assert!(out.separable || !previous, "({b},{c}) lost separability");
            if let Some(cover) = &out.cover {
                validate_cover(&p, &q, b, c, cover, &t).unwrap();
            }
            previous = out.separable;
        }
        // Singletons always separate from each other.
        prop_assert!(bc_separable_bruteforce(&p, &q, np, nq, 14, &t).unwrap().separable);
    }

    #[test]
    fn linear_implies_one_infinity(seed in any::<u64>(), n in 1usize..8, d in 1usize..4) {
        let (p, q) = overlapping_pair(seed, n, d);
        let t = tol();
        let lin = Predicate::Linear.holds(&p, &q, 14, &t).unwrap();
        let oi = one_infty_separable(&p, &q, &t).unwrap();
        prop_assert!(!lin || oi.separable);
        if !oi.separable {
            let (ps, qs) = (oi.p_star.unwrap(), oi.q_star.unwrap());
            let (pi, qi) = one_infty_witness(&p, &q, ps, qs, &t).unwrap();
            prop_assert!(pi.len() <= d + 1 && qi.len() <= d + 1);
            prop_assert!(!one_infty_separable(&pick(&p, &pi), &pick(&q, &qi), &t).unwrap().separable);
        }
    }
}

#[test]
fn touching_segments_are_weakly_but_not_strictly_separable() {
    let p = vec![vec![0.0, 0.0], vec![1.0, 0.0]];
    let q = vec![vec![1.0, 0.0], vec![2.0, 1.0]];
    let t = tol();
    let strict = linear_separability(&p, &q, true, &t).unwrap();
    assert!(!strict.is_separable());
    strict.validate(&p, &q, 1e-9, 1e-9).unwrap();
    let weak = linear_separability(&p, &q, false, &t).unwrap();
    assert!(weak.is_separable() && !weak.is_strictly_separable());
    weak.validate(&p, &q, 1e-9, 1e-9).unwrap();
}

#[test]
fn xor_square_needs_two_groups() {
    let p = vec![vec![0.0, 0.0], vec![1.0, 1.0]];
    let q = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
    let t = tol();
    assert!(!bc_separable_bruteforce(&p, &q, 1, 1, 14, &t).unwrap().separable);
    let out = bc_separable_bruteforce(&p, &q, 1, 2, 14, &t).unwrap();
    assert!(out.separable);
    validate_cover(&p, &q, 1, 2, out.cover.as_ref().unwrap(), &t).unwrap();
    assert!(one_infty_separable(&p, &q, &t).unwrap().separable);
}

#[test]
fn cap_is_enforced() {
    let (p, q) = overlapping_pair(1, 8, 2);
    assert!(bc_separable_bruteforce(&p, &q, 1, 2, 14, &tol()).is_err());
}
