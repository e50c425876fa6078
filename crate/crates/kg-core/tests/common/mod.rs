//! Shared test oracles and random-family generators.
//!
//! Everything here is deliberately independent of the library's solver path:
//! the quartic oracle expands the 2x2 determinant by explicit polynomial
//! arithmetic and finds roots through a bare companion matrix, and the
//! family generators only use plain matrix algebra.

#![allow(dead_code)]

use kg_core::pencil::{OperatorPair, SymmetricOperator};
use nalgebra::{Complex, DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Multiply two real polynomials in coefficient form (ascending powers).
fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Coefficients (ascending) of `det(U^2 - (lambda I - V)^2)` for a symmetric
/// 2x2 kinetic part and a diagonal potential `diag(v1, v2)`:
/// `(u11 - (l - v1)^2)(u22 - (l - v2)^2) - u12^2`.
pub fn quartic_coefficients(u2: &[[f64; 2]; 2], v1: f64, v2: f64) -> Vec<f64> {
    // u_ii - (l - v_i)^2 = (u_ii - v_i^2) + 2 v_i l - l^2.
    let f1 = [u2[0][0] - v1 * v1, 2.0 * v1, -1.0];
    let f2 = [u2[1][1] - v2 * v2, 2.0 * v2, -1.0];
    let mut p = poly_mul(&f1, &f2);
    p[0] -= u2[0][1] * u2[0][1];
    p
}

/// All roots of a real polynomial via the companion matrix.
pub fn poly_roots(coeffs: &[f64]) -> Vec<Complex<f64>> {
    let n = coeffs.len() - 1;
    assert!(n >= 1, "need a nonconstant polynomial");
    let lead = coeffs[n];
    let mut companion = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        companion[(i, i - 1)] = 1.0;
    }
    for i in 0..n {
        companion[(i, n - 1)] = -coeffs[i] / lead;
    }
    let mut roots: Vec<Complex<f64>> = companion.complex_eigenvalues().iter().copied().collect();
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    roots
}

/// Quartic-oracle roots of the worked 2x2 example at parameter `t`.
pub fn example_quartic_roots(t: f64) -> Vec<Complex<f64>> {
    let u2 = [[2.0, -1.0], [-1.0, 2.0]];
    poly_roots(&quartic_coefficients(&u2, t, 0.0))
}

/// Locates the parameter `t*` where the example's real roots merge into a
/// conjugate pair, and the merged (double) root value, by bisecting the
/// all-real predicate. Returns `(t_star, lambda_star)`.
pub fn example_collision_oracle() -> (f64, f64) {
    let all_real = |t: f64| {
        example_quartic_roots(t)
            .iter()
            .all(|z| z.im.abs() < 1e-10)
    };
    let mut lo = 1.5;
    let mut hi = 2.5;
    assert!(all_real(lo) && !all_real(hi));
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if all_real(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let t_star = 0.5 * (lo + hi);
    // The double root is the closest pair of real parts at t*.
    let mut re: Vec<f64> = example_quartic_roots(lo).iter().map(|z| z.re).collect();
    re.sort_by(f64::total_cmp);
    let (mut best_gap, mut best_val) = (f64::INFINITY, f64::NAN);
    for w in re.windows(2) {
        if w[1] - w[0] < best_gap {
            best_gap = w[1] - w[0];
            best_val = 0.5 * (w[0] + w[1]);
        }
    }
    (t_star, best_val)
}

pub fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.random::<f64>().max(f64::MIN_POSITIVE);
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_orthogonal(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    let m = DMatrix::from_fn(n, n, |_, _| gaussian(rng));
    m.qr().q()
}

pub fn random_unit_vector(rng: &mut ChaCha8Rng, n: usize) -> DVector<f64> {
    loop {
        let v = DVector::from_fn(n, |_, _| gaussian(rng));
        let nrm = v.norm();
        if nrm > 1e-8 {
            return v / nrm;
        }
    }
}

/// Random symmetric positive definite kinetic part with smallest eigenvalue
/// at least 1.
pub fn random_u2(rng: &mut ChaCha8Rng, n: usize) -> SymmetricOperator {
    let a = DMatrix::from_fn(n, n, |_, _| gaussian(rng));
    SymmetricOperator::new(&a * a.transpose() + DMatrix::identity(n, n)).unwrap()
}

/// Smallest singular value of `U`, i.e. `1 / |U^-1|`.
fn sigma_min_u(u2: &SymmetricOperator) -> f64 {
    u2.min_eigenvalue().max(0.0).sqrt()
}

/// A random definite pair with `g(0) <= cap`.
pub fn random_definite_pair(rng: &mut ChaCha8Rng, n: usize, cap: f64) -> OperatorPair {
    let u2 = random_u2(rng, n);
    let b = DMatrix::from_fn(n, n, |_, _| gaussian(rng));
    let v_raw = SymmetricOperator::new((&b + b.transpose()) * 0.5).unwrap();
    let smin = sigma_min_u(&u2);
    let v = v_raw.scale(cap * smin / (v_raw.norm() + 1e-12));
    OperatorPair::new(u2, v).unwrap()
}

/// Commuting family satisfying the first monotonicity theorem: `V_0` and
/// `dV >= 0` share an eigenbasis, both ends conditioned, ordering margin
/// respected by construction.
pub struct Family {
    pub u2: SymmetricOperator,
    pub v0: SymmetricOperator,
    pub v1: SymmetricOperator,
}

pub fn theorem1_family(rng: &mut ChaCha8Rng, n: usize) -> Family {
    let u2 = random_u2(rng, n);
    let smin = sigma_min_u(&u2);
    let q = random_orthogonal(rng, n);
    // |V_0|, |V_1| <= 0.3 sigma_min(U) keeps g(0) <= 0.3 and the ordering
    // margin V_0 >= -M automatic (M >= 0.7 sigma_min(U)).
    let d0 = DVector::from_fn(n, |_, _| 0.15 * smin * (2.0 * rng.random::<f64>() - 1.0));
    let dplus = DVector::from_fn(n, |_, _| 0.15 * smin * rng.random::<f64>());
    let v0 = SymmetricOperator::new(&q * DMatrix::from_diagonal(&d0) * q.transpose()).unwrap();
    let d1 = &d0 + &dplus;
    let v1 = SymmetricOperator::new(&q * DMatrix::from_diagonal(&d1) * q.transpose()).unwrap();
    Family { u2, v0, v1 }
}

/// Non-commuting family for the second theorem: `0 <= V_0 <= V_1`, both
/// conditioned at a common anchor.
pub fn theorem2_family(rng: &mut ChaCha8Rng, n: usize) -> Family {
    let u2 = random_u2(rng, n);
    let smin = sigma_min_u(&u2);
    let psd = |rng: &mut ChaCha8Rng, scale: f64| {
        let b = DMatrix::from_fn(n, n, |_, _| gaussian(rng));
        let m = &b * b.transpose();
        let nrm = m.norm(); // Frobenius upper-bounds the spectral norm
        SymmetricOperator::new(m * (scale / (nrm + 1e-12))).unwrap()
    };
    let v0 = psd(rng, 0.2 * smin);
    let dv = psd(rng, 0.2 * smin);
    let v1 = v0.add(&dv).unwrap();
    Family { u2, v0, v1 }
}

/// Sorted eigenvalues by signature class: (minus ascending, plus ascending).
pub fn split_signed(spec: &kg_core::pencil::PhaseSpaceSpectrum) -> (Vec<f64>, Vec<f64>) {
    (spec.minus_values(), spec.plus_values())
}
