//! Property suites for the spectral invariants: covariances of the spectrum,
//! convexity and gap of the condition norm, Rayleigh-functional bounds,
//! monotone families, and enclosure soundness.

mod common;

use common::*;
use kg_core::bounds::{self, GammaPair};
use kg_core::flow::{self, Homotopy, TraceOptions};
use kg_core::pencil::{self, OperatorPair, Signature, SymmetricOperator};
use kg_core::quadratic::{self, QuadraticContext};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

/// Strategy: a definite pair of the given dimension with g(0) <= 0.4,
/// generated from a seed so shrinking stays meaningful.
fn pair_strategy() -> impl Strategy<Value = OperatorPair> {
    (2usize..=6, any::<u64>()).prop_map(|(n, seed)| {
        let mut r = rng(seed);
        random_definite_pair(&mut r, n, 0.4)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn shift_covariance(pair in pair_strategy(), eps in -2.0f64..2.0) {
        let base = pencil::spectrum(&pair).unwrap().values();
        let shifted = pencil::spectrum(&pair.shifted(eps)).unwrap().values();
        let tol = 1e-10 * (1.0 + pair.u2().norm());
        for (s, b) in shifted.iter().zip(base.iter()) {
            prop_assert!((s - (b + eps)).abs() <= tol);
        }
    }

    #[test]
    fn scale_covariance(pair in pair_strategy(), s in 0.2f64..4.0) {
        let base = pencil::spectrum(&pair).unwrap().values();
        let scaled_pair = OperatorPair::new(
            pair.u2().scale(s * s),
            pair.v().scale(s),
        ).unwrap();
        let scaled = pencil::spectrum(&scaled_pair).unwrap().values();
        for (a, b) in scaled.iter().zip(base.iter()) {
            prop_assert!((a - s * b).abs() <= 1e-10 * (1.0 + a.abs()));
        }
    }

    #[test]
    fn condition_norm_is_convex(pair in pair_strategy(), m1 in -3.0f64..3.0, m2 in -3.0f64..3.0) {
        let g = |mu: f64| pencil::condition_norm(&pair, mu);
        let mid = g(0.5 * (m1 + m2));
        prop_assert!(mid <= 0.5 * (g(m1) + g(m2)) + 1e-12);
    }

    #[test]
    fn signature_matches_side_of_interval(pair in pair_strategy(), frac in 0.01f64..0.99) {
        let interval = pencil::definiteness_interval(&pair, 1e-10).unwrap().unwrap();
        let mu = interval.lo + frac * interval.width();
        let spec = pencil::spectrum(&pair).unwrap();
        for p in &spec.points {
            prop_assert_eq!(p.signature == Signature::Plus, p.value > mu);
        }
    }

    #[test]
    fn gap_bounds_distance_to_spectrum(pair in pair_strategy(), frac in 0.05f64..0.95) {
        let interval = pencil::definiteness_interval(&pair, 1e-10).unwrap().unwrap();
        let mu = interval.lo + frac * interval.width();
        let gap = pencil::gap_radius(&pair, mu).unwrap();
        let spec = pencil::spectrum(&pair).unwrap();
        let dist = spec.values().iter().map(|l| (l - mu).abs()).fold(f64::INFINITY, f64::min);
        prop_assert!(dist >= gap - 1e-10);
    }

    #[test]
    fn eigenvectors_solve_the_quadratic_problem(pair in pair_strategy()) {
        let spec = pencil::spectrum(&pair).unwrap();
        let n = pair.dim();
        let scale = pair.scale();
        let ctx = QuadraticContext::new(pair.clone());
        for p in &spec.points {
            let psi1 = p.psi1();
            let psi2 = DVector::from_iterator(n, p.vector.iter().skip(n).copied());
            // Second block reconstructs as (lambda I - V) psi1.
            let expect =
                &psi1 * p.value - pair.v().entries() * &psi1;
            prop_assert!((&psi2 - expect).norm() <= 1e-8 * scale * p.vector.norm());
            prop_assert!(quadratic::q_residual(&ctx, p.value, &psi1).unwrap() <= 1e-8 * scale);
        }
    }

    #[test]
    fn p_functionals_bound_inner_eigenvalues(pair in pair_strategy(), seed in any::<u64>()) {
        let spec = pencil::spectrum(&pair).unwrap();
        let min_plus = spec.min_plus().unwrap();
        let max_minus = spec.max_minus().unwrap();
        let ctx = QuadraticContext::new(pair.clone());
        let mut r = rng(seed);
        for _ in 0..50 {
            let psi = random_unit_vector(&mut r, pair.dim());
            let (pm, pp) = quadratic::p_functionals(&ctx, &psi).unwrap();
            prop_assert!(pp >= min_plus - 1e-9);
            prop_assert!(pm <= max_minus + 1e-9);
        }
    }
}

#[test]
fn sup_p_minus_attains_top_of_minus_spectrum() {
    // The supremum of p_minus over unit vectors is the top of the minus
    // spectrum (attained on the corresponding eigenvector), mirroring
    // inf p_plus = min of the plus spectrum.
    let mut r = rng(31);
    for _ in 0..10 {
        let pair = random_definite_pair(&mut r, 5, 0.4);
        let spec = pencil::spectrum(&pair).unwrap();
        let ctx = QuadraticContext::new(pair.clone());
        let max_minus = spec.max_minus().unwrap();
        let top_minus_vec = spec
            .points
            .iter()
            .filter(|p| p.signature == Signature::Minus)
            .last()
            .unwrap()
            .psi1();
        let (pm, _) = quadratic::p_functionals(&ctx, &top_minus_vec).unwrap();
        assert!((pm - max_minus).abs() <= 1e-9 * pair.scale());
        for _ in 0..100 {
            let psi = random_unit_vector(&mut r, 5);
            let (pm, _) = quadratic::p_functionals(&ctx, &psi).unwrap();
            assert!(pm <= max_minus + 1e-9);
        }
    }
}

#[test]
fn p_minus_monotone_in_simultaneously_diagonal_potentials() {
    // For 0 <= V_0 <= V_1 with V_0^2 <= V_1^2 (shared eigenbasis), p_minus
    // grows pointwise on the valid domain.
    let mut r = rng(57);
    for trial in 0..20 {
        let n = 4;
        let u2 = random_u2(&mut r, n);
        let smin = u2.min_eigenvalue().sqrt();
        let q = random_orthogonal(&mut r, n);
        let d0 = DVector::from_fn(n, |_, _| 0.2 * smin * r.random::<f64>());
        let bump = DVector::from_fn(n, |_, _| 0.15 * smin * r.random::<f64>());
        let d1 = &d0 + &bump;
        let v0 = SymmetricOperator::new(&q * DMatrix::from_diagonal(&d0) * q.transpose()).unwrap();
        let v1 = SymmetricOperator::new(&q * DMatrix::from_diagonal(&d1) * q.transpose()).unwrap();
        let ctx0 = QuadraticContext::new(OperatorPair::new(u2.clone(), v0).unwrap());
        let ctx1 = QuadraticContext::new(OperatorPair::new(u2, v1).unwrap());
        for _ in 0..40 {
            let psi = random_unit_vector(&mut r, n);
            let (pm0, _) = quadratic::p_functionals(&ctx0, &psi).unwrap();
            let (pm1, _) = quadratic::p_functionals(&ctx1, &psi).unwrap();
            assert!(pm0 <= pm1 + 1e-12, "trial {trial}: {pm0} > {pm1}");
        }
    }
}

#[test]
fn p_minus_nondecreasing_along_proportional_potentials() {
    // V_t = t V with V >= 0: p_minus(psi, t) is nondecreasing in t while the
    // radicand stays positive.
    let mut r = rng(91);
    for _ in 0..10 {
        let n = 4;
        let u2 = random_u2(&mut r, n);
        let smin = u2.min_eigenvalue().sqrt();
        let b = DMatrix::from_fn(n, n, |_, _| gaussian(&mut r));
        let m = &b * b.transpose();
        let v = SymmetricOperator::new(&m * (0.3 * smin / (m.norm() + 1e-12))).unwrap();
        let psi = random_unit_vector(&mut r, n);
        let mut prev = f64::NEG_INFINITY;
        for i in 0..=20 {
            let t = i as f64 / 20.0;
            let pair = OperatorPair::new(u2.clone(), v.scale(t)).unwrap();
            let ctx = QuadraticContext::new(pair);
            match quadratic::p_functionals(&ctx, &psi) {
                Ok((pm, _)) => {
                    assert!(pm >= prev - 1e-12);
                    prev = pm;
                }
                Err(_) => break, // radicand left the validity range
            }
        }
    }
}

#[test]
fn derivative_nonnegative_and_bounded_on_minus_curves() {
    // With dV >= 0 and V_t - lambda I > 0 along a minus curve, the
    // derivative lies in [0, max eig dV].
    let mut r = rng(123);
    for _ in 0..20 {
        let n = 4;
        let fam = theorem1_family(&mut r, n);
        let delta = fam.v1.sub(&fam.v0).unwrap();
        let pair0 = OperatorPair::new(fam.u2.clone(), fam.v0.clone()).unwrap();
        let ctx = QuadraticContext::new(pair0.clone());
        let spec = pencil::spectrum(&pair0).unwrap();
        let dmax = delta.max_eigenvalue();
        for p in spec.points.iter().filter(|p| p.signature == Signature::Minus) {
            let d = quadratic::lambda_derivative(&ctx, &delta, 0.0, p.value, &p.psi1()).unwrap();
            assert!(d >= -1e-9, "derivative {d}");
            assert!(d <= dmax + 1e-9, "derivative {d} above {dmax}");
        }
    }
}

#[test]
fn interpolation_lemma_on_random_commuting_families() {
    let mut r = rng(17);
    for _ in 0..10 {
        let fam = theorem1_family(&mut r, 6);
        let h = Homotopy::new(fam.u2, fam.v0, fam.v1).unwrap();
        let grid = flow::linspace(0.0, 1.0, 101);
        let rep = flow::interpolation_bound_check(&h, 0.0, &grid).unwrap();
        assert!(rep.max_norm <= rep.bound + 1e-10);
    }
}

#[test]
fn corollary_families_rise_until_definiteness_loss() {
    // V_t = t V with V >= 0: minus eigenvalues rise as long as the interval
    // exists. Push t past the loss to exercise the stopping behaviour.
    let mut r = rng(201);
    for _ in 0..8 {
        let n = 3;
        let u2 = random_u2(&mut r, n);
        let smin = u2.min_eigenvalue().sqrt();
        let b = DMatrix::from_fn(n, n, |_, _| gaussian(&mut r));
        let m = &b * b.transpose();
        // Strong potential so the homotopy actually loses definiteness.
        let v = SymmetricOperator::new(&m * (3.0 * smin / (m.norm() + 1e-12))).unwrap();
        let h = Homotopy::new(u2, SymmetricOperator::zero(n), v).unwrap();
        let grid = flow::linspace(0.0, 1.0, 51);
        let report = flow::trace(&h, &grid, &TraceOptions::default()).unwrap();
        let lost_at = report
            .events
            .iter()
            .find(|e| e.kind == flow::EventKind::DefinitenessLost)
            .map(|e| e.t)
            .unwrap_or(f64::INFINITY);
        for rank in 0..n {
            let series: Vec<f64> = report.t_grid.iter().zip(report.sorted_top[n + rank].iter())
                .filter(|(&t, _)| t < lost_at)
                .map(|(_, &v)| v)
                .collect();
            for w in series.windows(2) {
                assert!(w[1] >= w[0] - 1e-9, "minus rank {rank} fell: {} -> {}", w[0], w[1]);
            }
        }
    }
}

#[test]
fn traced_curves_are_lipschitz_in_delta_v() {
    let mut r = rng(77);
    for _ in 0..10 {
        let fam = theorem1_family(&mut r, 5);
        let delta_norm = fam.v1.sub(&fam.v0).unwrap().norm();
        let h = Homotopy::new(fam.u2, fam.v0, fam.v1).unwrap();
        let grid = flow::linspace(0.0, 1.0, 41);
        let dt = grid[1] - grid[0];
        let report = flow::trace(&h, &grid, &TraceOptions::default()).unwrap();
        assert!(report.hypothesis.theorem1());
        for c in &report.curves {
            for w in c.values.windows(2) {
                assert!((w[1] - w[0]).abs() <= delta_norm * dt + 1e-6);
            }
        }
        // Rank-sorted curves stay continuous across crossings as well.
        for series in &report.sorted_top {
            for w in series.windows(2) {
                assert!((w[1] - w[0]).abs() <= delta_norm * dt + 1e-6);
            }
        }
    }
}

#[test]
fn enclosures_are_sound_on_commuting_families() {
    let mut r = rng(301);
    for trial in 0..30 {
        let fam = theorem1_family(&mut r, 5);
        let delta = fam.v1.sub(&fam.v0).unwrap();
        let pair0 = OperatorPair::new(fam.u2.clone(), fam.v0.clone()).unwrap();
        let pair1 = pair0.with_potential(fam.v1.clone()).unwrap();
        let (minus0, plus0) = split_signed(&pencil::spectrum(&pair0).unwrap());
        let (minus1, plus1) = split_signed(&pencil::spectrum(&pair1).unwrap());
        assert_eq!(minus0.len(), minus1.len());

        // Monotonicity: each minus rank rises.
        for (a, b) in minus0.iter().zip(minus1.iter()) {
            assert!(b >= &(a - 1e-9), "trial {trial}");
        }
        // Absolute and refined enclosures hold per rank in both classes.
        for (vals0, vals1) in [(&minus0, &minus1), (&plus0, &plus1)] {
            for (a, b) in vals0.iter().zip(vals1.iter()) {
                let abs = bounds::absolute_bound(*a, &delta, Some(&pair0));
                assert!(abs.hypotheses_ok);
                assert!(abs.contains(*b, 1e-9), "absolute misses: {a} -> {b}");
                let refined = bounds::refined_bound(*a, &delta);
                assert!(refined.contains(*b, 1e-9), "refined misses: {a} -> {b}");
                // Refined nests inside absolute.
                assert!(refined.lower >= abs.lower - 1e-12 && refined.upper <= abs.upper + 1e-12);
            }
        }
        // Existence semantics: the union of per-rank refined enclosures
        // catches at least as many perturbed minus values as it encloses
        // unperturbed indices.
        let enclosures: Vec<_> = minus0
            .iter()
            .map(|a| bounds::refined_bound(*a, &delta))
            .collect();
        let caught = minus1
            .iter()
            .filter(|b| enclosures.iter().any(|e| e.contains(**b, 1e-9)))
            .count();
        assert!(caught >= minus0.len());
    }
}

#[test]
fn relative_enclosure_sharp_for_proportional_perturbations() {
    // dV = c V with commuting data makes the relative enclosure degenerate
    // and exact.
    let mut r = rng(404);
    for _ in 0..10 {
        let n = 4;
        let u2 = random_u2(&mut r, n);
        let smin = u2.min_eigenvalue().sqrt();
        let b = DMatrix::from_fn(n, n, |_, _| gaussian(&mut r));
        let m = &b * b.transpose();
        let v = SymmetricOperator::new(&m * (-0.25 * smin / (m.norm() + 1e-12))).unwrap();
        let c = 0.2;
        let delta = v.scale(-c);
        let gammas = bounds::relative_gammas(&v, &delta).unwrap();
        assert!((gammas.gamma_minus - c).abs() < 1e-10);
        assert!((gammas.gamma_plus - c).abs() < 1e-10);

        let pair = OperatorPair::new(u2.clone(), v.clone()).unwrap();
        let k = 0usize;
        let family = |eps: f64| {
            let p = pair.with_potential(v.scale(eps))?;
            Ok(pencil::spectrum(&p)?.minus_values()[k])
        };
        let enclosure = bounds::relative_bound(family, gammas).unwrap();
        assert!(enclosure.width() <= 1e-9);
        let perturbed = pencil::spectrum(&pair.with_potential(v.add(&delta).unwrap()).unwrap())
            .unwrap()
            .minus_values()[k];
        assert!(enclosure.contains(perturbed, 1e-9));
    }
}

#[test]
fn nv_chain_inequality_on_random_inputs() {
    let mut r = rng(555);
    for _ in 0..30 {
        let pair = random_definite_pair(&mut r, 5, 0.5);
        let b = DMatrix::from_fn(5, 5, |_, _| gaussian(&mut r));
        let delta = SymmetricOperator::new((&b + b.transpose()) * 0.1).unwrap();
        let lambda = 1.0 + r.random::<f64>();
        let nv = bounds::nv_bound(lambda, &pair, &delta).unwrap();
        let zeta = nv.detail.zeta.unwrap();
        assert!(0.5 * nv.width() <= zeta * delta.norm() + 1e-12);
    }
}

#[test]
fn combined_bound_is_tighter_than_either_parent_after_intersection() {
    let gammas = GammaPair {
        gamma_minus: 0.0,
        gamma_plus: 0.01,
    };
    let family = |eps: f64| Ok(2.0 - 0.5 * eps);
    let relative = bounds::relative_bound(family, gammas).unwrap();
    let refined = bounds::PerturbationBound {
        kind: bounds::BoundKind::Refined,
        lower: 1.5,
        upper: 1.5 + 0.004,
        hypotheses_ok: true,
        detail: Default::default(),
    };
    let combined = refined.intersect(&relative, bounds::BoundKind::Combined);
    assert!(combined.lower >= refined.lower && combined.lower >= relative.lower);
    assert!(combined.upper <= refined.upper && combined.upper <= relative.upper);
}
