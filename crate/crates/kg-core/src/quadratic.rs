//! The quadratic-family view of the eigenproblem: the forms `q_mu`, the
//! Rayleigh-type functionals `p_plus`/`p_minus`, their subspace minimax
//! values, and the eigenvalue-derivative formula along a linear homotopy.
//!
//! For unit `psi` write `v = (psi, V psi)`, `w = (V psi, V psi)` and
//! `chi = (U psi, U psi)`. Then
//!
//! ```text
//! p_{-/+}(psi) = v -/+ sqrt(v^2 + chi - w)
//! ```
//!
//! are the two real roots of `(psi, Q_lambda psi) = 0`, and the inner
//! discrete eigenvalues of `K` are their subspace minimax values.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{KgError, Result};
use crate::pencil::{self, OperatorPair, Signature, SymmetricOperator};

/// Operator pair together with the cached principal square root `U`.
#[derive(Debug, Clone)]
pub struct QuadraticContext {
    pair: OperatorPair,
}

impl QuadraticContext {
    pub fn new(pair: OperatorPair) -> Self {
        Self { pair }
    }

    pub fn pair(&self) -> &OperatorPair {
        &self.pair
    }

    pub fn u(&self) -> &DMatrix<f64> {
        self.pair.u()
    }

    fn check_dim(&self, v: &DVector<f64>) -> Result<()> {
        if v.len() != self.pair.dim() {
            return Err(KgError::DimensionMismatch(format!(
                "vector has length {}, pair dimension is {}",
                v.len(),
                self.pair.dim()
            )));
        }
        Ok(())
    }
}

/// The sesquilinear form `q_mu(psi, phi) = (U psi, U phi) - ((V - mu I) psi, (V - mu I) phi)`.
pub fn q_value(ctx: &QuadraticContext, mu: f64, psi: &DVector<f64>, phi: &DVector<f64>) -> Result<f64> {
    ctx.check_dim(psi)?;
    ctx.check_dim(phi)?;
    let u = ctx.u();
    let vm_psi = ctx.pair.v().entries() * psi - psi * mu;
    let vm_phi = ctx.pair.v().entries() * phi - phi * mu;
    Ok((u * psi).dot(&(u * phi)) - vm_psi.dot(&vm_phi))
}

/// `|(U^2 - (V - lambda I)^2) psi| / |psi|`; vanishes exactly on first
/// components of `K`-eigenvectors at `lambda`.
pub fn q_residual(ctx: &QuadraticContext, lambda: f64, psi: &DVector<f64>) -> Result<f64> {
    ctx.check_dim(psi)?;
    let nrm = psi.norm();
    if nrm == 0.0 {
        return Err(KgError::InvalidInput("psi must be nonzero".into()));
    }
    let n = ctx.pair.dim();
    let v_l = ctx.pair.v().entries() - DMatrix::identity(n, n) * lambda;
    let r = ctx.pair.u2().entries() * psi - &v_l * (&v_l * psi);
    Ok(r.norm() / nrm)
}

/// The scalars `v = (psi, V psi)`, `w = (V psi, V psi)`, `chi = (U psi, U psi)`
/// for the normalized direction of `psi`.
#[derive(Debug, Clone, Copy)]
pub struct RayleighTriple {
    pub v_mean: f64,
    pub w_mean: f64,
    pub chi: f64,
}

impl RayleighTriple {
    pub fn radicand(&self) -> f64 {
        self.v_mean * self.v_mean + self.chi - self.w_mean
    }
}

pub fn rayleigh_triple(ctx: &QuadraticContext, psi: &DVector<f64>) -> Result<RayleighTriple> {
    ctx.check_dim(psi)?;
    let nrm = psi.norm();
    if nrm == 0.0 {
        return Err(KgError::InvalidInput("psi must be nonzero".into()));
    }
    let unit = psi / nrm;
    let v_psi = ctx.pair.v().entries() * &unit;
    let u_psi = ctx.u() * &unit;
    Ok(RayleighTriple {
        v_mean: unit.dot(&v_psi),
        w_mean: v_psi.dot(&v_psi),
        chi: u_psi.dot(&u_psi),
    })
}

/// `(p_minus, p_plus)` for the direction of `psi`. Errors with
/// `NegativeRadicand` when the quadratic form has no real roots along `psi`.
pub fn p_functionals(ctx: &QuadraticContext, psi: &DVector<f64>) -> Result<(f64, f64)> {
    let t = rayleigh_triple(ctx, psi)?;
    let rad = t.radicand();
    if rad < 0.0 {
        return Err(KgError::NegativeRadicand { radicand: rad });
    }
    let root = rad.sqrt();
    Ok((t.v_mean - root, t.v_mean + root))
}

/// Subspace minimax estimate of the k-th plus (or minus) eigenvalue.
///
/// Samples `samples` random orthonormal k-frames (deterministic in `seed`)
/// and always includes the frame spanned by the first components of the k
/// extremal eigenvectors of the requested sign. The inner extremum of
/// `p_plus` (resp. `p_minus`) over a frame is computed exactly as the
/// largest (resp. smallest) eigenvalue of the projected quadratic pencil
/// `F^T (U^2 - V^2) F + 2 lambda F^T V F - lambda^2 I`, via its companion
/// linearization. The outer reduction is an order-independent min (max).
pub fn minimax_estimate(
    ctx: &QuadraticContext,
    k: usize,
    sign: Signature,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    let n = ctx.pair.dim();
    if k == 0 || k > n {
        return Err(KgError::InvalidInput(format!(
            "k must be in 1..={n}, got {k}"
        )));
    }
    let spec = pencil::spectrum(&ctx.pair)?;
    let eigenframe = {
        // First components of the k lowest plus eigenvectors (ascending) or
        // the k highest minus eigenvectors (descending from the interval).
        let mut pts: Vec<_> = spec
            .points
            .iter()
            .filter(|p| p.signature == sign)
            .collect();
        if sign == Signature::Minus {
            pts.reverse();
        }
        let cols: Vec<DVector<f64>> = pts.iter().take(k).map(|p| p.psi1()).collect();
        orthonormal_frame(n, &cols)
            .ok_or_else(|| KgError::InvalidInput("degenerate eigenvector frame".into()))?
    };

    let mut best = inner_extremum(ctx, &eigenframe, sign)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let frame = random_frame(n, k, &mut rng);
        let val = inner_extremum(ctx, &frame, sign)?;
        best = match sign {
            Signature::Plus => best.min(val),
            Signature::Minus => best.max(val),
        };
    }
    Ok(best)
}

/// Exact inner extremum of `p_sign` over the span of the orthonormal frame.
fn inner_extremum(ctx: &QuadraticContext, frame: &DMatrix<f64>, sign: Signature) -> Result<f64> {
    let k = frame.ncols();
    let v = ctx.pair.v().entries();
    let u2 = ctx.pair.u2().entries();
    let vf = v * frame;
    let a0 = frame.transpose() * (u2 * frame) - vf.transpose() * &vf;
    let a1 = frame.transpose() * &vf;
    // Companion of A0 + 2 lambda A1 - lambda^2 I: [[2 A1, A0], [I, 0]].
    let mut comp = DMatrix::zeros(2 * k, 2 * k);
    comp.view_mut((0, 0), (k, k)).copy_from(&(&a1 * 2.0));
    comp.view_mut((0, k), (k, k)).copy_from(&a0);
    comp.view_mut((k, 0), (k, k)).copy_from(&DMatrix::identity(k, k));
    let eig = comp.complex_eigenvalues();
    let scale = ctx.pair.scale();
    let mut worst_im = 0.0f64;
    let mut ext = match sign {
        Signature::Plus => f64::NEG_INFINITY,
        Signature::Minus => f64::INFINITY,
    };
    for z in eig.iter() {
        worst_im = worst_im.max(z.im.abs());
        ext = match sign {
            Signature::Plus => ext.max(z.re),
            Signature::Minus => ext.min(z.re),
        };
    }
    if worst_im > 1e-8 * scale {
        // Non-real projected roots mean the condition fails along the frame.
        return Err(KgError::NegativeRadicand {
            radicand: -worst_im,
        });
    }
    Ok(ext)
}

/// Orthonormalizes the given columns with a thin QR; `None` if rank-deficient.
fn orthonormal_frame(n: usize, cols: &[DVector<f64>]) -> Option<DMatrix<f64>> {
    let k = cols.len();
    let mut m = DMatrix::zeros(n, k);
    for (j, c) in cols.iter().enumerate() {
        m.set_column(j, c);
    }
    let qr = m.qr();
    let r = qr.r();
    for j in 0..k {
        if r[(j, j)].abs() < 1e-12 {
            return None;
        }
    }
    Some(qr.q())
}

fn random_frame(n: usize, k: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    loop {
        let m = DMatrix::from_fn(n, k, |_, _| gaussian(rng));
        let cols: Vec<DVector<f64>> = (0..k).map(|j| m.column(j).into_owned()).collect();
        if let Some(f) = orthonormal_frame(n, &cols) {
            return f;
        }
    }
}

/// Box-Muller standard normal.
pub(crate) fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.random::<f64>().max(f64::MIN_POSITIVE);
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Eigenvalue derivative along `V_t = V_0 + t deltaV` at the eigenpair
/// `(lambda, psi_1)`:
///
/// ```text
/// lambda' = (psi, (V_t - lambda I) deltaV psi) / (psi, (V_t - lambda I) psi)
/// ```
pub fn lambda_derivative(
    ctx0: &QuadraticContext,
    delta_v: &SymmetricOperator,
    t: f64,
    lambda: f64,
    psi1: &DVector<f64>,
) -> Result<f64> {
    ctx0.check_dim(psi1)?;
    if delta_v.dim() != ctx0.pair.dim() {
        return Err(KgError::DimensionMismatch(format!(
            "deltaV is {0}x{0}, pair dimension is {1}",
            delta_v.dim(),
            ctx0.pair.dim()
        )));
    }
    let n = ctx0.pair.dim();
    let v_t = ctx0.pair.v().entries() + delta_v.entries() * t;
    let v_t_l = &v_t - DMatrix::identity(n, n) * lambda;
    let denom = psi1.dot(&(&v_t_l * psi1));
    let nrm2 = psi1.norm_squared();
    if denom.abs() < 1e-12 * nrm2 {
        return Err(KgError::DegenerateDenominator { value: denom });
    }
    let numer = psi1.dot(&(&v_t_l * (delta_v.entries() * psi1)));
    Ok(numer / denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use nalgebra::dvector;

    fn pair(u2: &[f64], v: &[f64], n: usize) -> OperatorPair {
        let u2 = SymmetricOperator::new(DMatrix::from_row_slice(n, n, u2)).unwrap();
        let v = SymmetricOperator::new(DMatrix::from_row_slice(n, n, v)).unwrap();
        OperatorPair::new(u2, v).unwrap()
    }

    fn random_definite_pair(seed: u64, n: usize) -> OperatorPair {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = DMatrix::from_fn(n, n, |_, _| gaussian(&mut rng));
        let u2 = &a * a.transpose() + DMatrix::identity(n, n);
        let b = DMatrix::from_fn(n, n, |_, _| gaussian(&mut rng));
        let v_raw = (&b + b.transpose()) * 0.5;
        let pair0 = OperatorPair::new(
            SymmetricOperator::new(u2.clone()).unwrap(),
            SymmetricOperator::zero(n),
        )
        .unwrap();
        // Scale V so that g(0) <= 0.4.
        let g = pencil::spectral_norm(&(&v_raw * pair0.u_inv()));
        let v = SymmetricOperator::new(v_raw * (0.4 / g.max(1e-12))).unwrap();
        OperatorPair::new(SymmetricOperator::new(u2).unwrap(), v).unwrap()
    }

    #[test]
    fn q_value_trivial() {
        let ctx = QuadraticContext::new(pair(&[1.0, 0.0, 0.0, 1.0], &[0.0; 4], 2));
        let e1 = dvector![1.0, 0.0];
        assert_relative_eq!(q_value(&ctx, 0.0, &e1, &e1).unwrap(), 1.0, epsilon = 1e-14);
        assert_relative_eq!(q_value(&ctx, 1.0, &e1, &e1).unwrap(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn q_value_mu_lambda_identity() {
        // With q_mu = (U., U.) - ((V - mu)., (V - mu).) a direct expansion
        // gives q_mu - q_lambda = ((2(mu - lambda) V - (mu^2 - lambda^2) I) psi, phi).
        let ctx = QuadraticContext::new(random_definite_pair(7, 5));
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..20 {
            let psi = DVector::from_fn(5, |_, _| gaussian(&mut rng));
            let phi = DVector::from_fn(5, |_, _| gaussian(&mut rng));
            let (mu, lambda) = (gaussian(&mut rng), gaussian(&mut rng));
            let lhs =
                q_value(&ctx, mu, &psi, &phi).unwrap() - q_value(&ctx, lambda, &psi, &phi).unwrap();
            let n = 5;
            let op = ctx.pair().v().entries() * (2.0 * (mu - lambda))
                - DMatrix::identity(n, n) * (mu * mu - lambda * lambda);
            let rhs = (op * &psi).dot(&phi);
            assert_relative_eq!(lhs, rhs, epsilon = 1e-10 * (1.0 + rhs.abs()));
        }
    }

    #[test]
    fn q_residual_examples() {
        let ctx = QuadraticContext::new(pair(&[1.0, 0.0, 0.0, 3.0], &[0.0; 4], 2));
        let e1 = dvector![1.0, 0.0];
        assert_relative_eq!(q_residual(&ctx, 1.0, &e1).unwrap(), 0.0, epsilon = 1e-14);
        assert_relative_eq!(q_residual(&ctx, 2.0, &e1).unwrap(), 3.0, epsilon = 1e-14);
    }

    #[test]
    fn q_residual_vanishes_on_eigenvectors() {
        let p = random_definite_pair(3, 4);
        let ctx = QuadraticContext::new(p.clone());
        let spec = pencil::spectrum(&p).unwrap();
        for pt in &spec.points {
            let r = q_residual(&ctx, pt.value, &pt.psi1()).unwrap();
            assert!(r <= 1e-8 * p.scale(), "residual {r}");
        }
    }

    #[test]
    fn p_functionals_scalar_cases() {
        let ctx = QuadraticContext::new(pair(&[1.0, 0.0, 0.0, 1.0], &[0.0; 4], 2));
        let psi = dvector![0.6, 0.8];
        let (pm, pp) = p_functionals(&ctx, &psi).unwrap();
        assert_relative_eq!(pm, -1.0, epsilon = 1e-14);
        assert_relative_eq!(pp, 1.0, epsilon = 1e-14);

        // One-dimensional pair: roots v -/+ u.
        let ctx1 = QuadraticContext::new(pair(&[4.0], &[0.7], 1));
        let (pm, pp) = p_functionals(&ctx1, &dvector![1.0]).unwrap();
        assert_relative_eq!(pm, 0.7 - 2.0, epsilon = 1e-14);
        assert_relative_eq!(pp, 0.7 + 2.0, epsilon = 1e-14);
    }

    #[test]
    fn p_plus_equals_eigenvalue_on_plus_eigenvectors() {
        let p = random_definite_pair(11, 6);
        let ctx = QuadraticContext::new(p.clone());
        let spec = pencil::spectrum(&p).unwrap();
        for pt in &spec.points {
            let psi1 = pt.psi1();
            let (pm, pp) = p_functionals(&ctx, &psi1).unwrap();
            match pt.signature {
                Signature::Plus => assert_relative_eq!(pp, pt.value, epsilon = 1e-9),
                Signature::Minus => assert_relative_eq!(pm, pt.value, epsilon = 1e-9),
            }
        }
    }

    #[test]
    fn negative_radicand_is_an_error() {
        // t = 2.5 is past definiteness loss; along (1,1) the radicand is
        // v^2 + chi - w = 1.5625 + 1 - 3.125 < 0.
        let p = pair(&[2.0, -1.0, -1.0, 2.0], &[2.5, 0.0, 0.0, 0.0], 2);
        let ctx = QuadraticContext::new(p);
        let got = p_functionals(&ctx, &dvector![1.0, 1.0]);
        assert!(matches!(got, Err(KgError::NegativeRadicand { .. })));
    }

    #[test]
    fn minimax_diagonal_pair() {
        let ctx = QuadraticContext::new(pair(&[1.0, 0.0, 0.0, 3.0], &[0.0; 4], 2));
        let k1 = minimax_estimate(&ctx, 1, Signature::Plus, 40, 7).unwrap();
        assert_relative_eq!(k1, 1.0, epsilon = 1e-9);
        let k2 = minimax_estimate(&ctx, 2, Signature::Plus, 40, 7).unwrap();
        assert_relative_eq!(k2, 3.0f64.sqrt(), epsilon = 1e-9);
    }

    #[test]
    fn minimax_matches_spectrum_on_random_pair() {
        let p = random_definite_pair(21, 6);
        let ctx = QuadraticContext::new(p.clone());
        let spec = pencil::spectrum(&p).unwrap();
        let plus = spec.plus_values();
        let minus = spec.minus_values();
        for k in 1..=3 {
            let est = minimax_estimate(&ctx, k, Signature::Plus, 30, 1234).unwrap();
            assert_relative_eq!(est, plus[k - 1], epsilon = 1e-6);
            let est_m = minimax_estimate(&ctx, k, Signature::Minus, 30, 1234).unwrap();
            assert_relative_eq!(est_m, minus[minus.len() - k], epsilon = 1e-6);
        }
    }

    #[test]
    fn derivative_trivial_and_shift() {
        let p = random_definite_pair(5, 4);
        let ctx = QuadraticContext::new(p.clone());
        let spec = pencil::spectrum(&p).unwrap();
        let pt = &spec.points[0];
        let zero = SymmetricOperator::zero(4);
        assert_eq!(
            lambda_derivative(&ctx, &zero, 0.3, pt.value, &pt.psi1()).unwrap(),
            0.0
        );
        let eps = 0.42;
        let shift = SymmetricOperator::scaled_identity(4, eps);
        let d = lambda_derivative(&ctx, &shift, 0.3, pt.value, &pt.psi1()).unwrap();
        assert_relative_eq!(d, eps, epsilon = 1e-13);
    }

    #[test]
    fn degenerate_denominator_reported() {
        let ctx = QuadraticContext::new(pair(&[1.0], &[0.5], 1));
        // (V - lambda) psi = 0 at lambda = 0.5.
        let got = lambda_derivative(
            &ctx,
            &SymmetricOperator::scaled_identity(1, 1.0),
            0.0,
            0.5,
            &dvector![1.0],
        );
        assert!(matches!(got, Err(KgError::DegenerateDenominator { .. })));
    }
}
