//! Operator pairs `(U^2, V)`, the definiteness interval and the Krein-signed
//! spectrum of the phase-space operator `K = J L`.
//!
//! `K` acts on the doubled space as `[[V, I], [U^2, V]]`; it is selfadjoint
//! with respect to `[x, y] = (J x, y)` with `J = [[0, I], [I, 0]]`. Whenever
//! `g(mu) = |(V - mu I) U^-1| < 1` for some real `mu` the block operator
//! `L - mu J = [[U^2, V - mu I], [V - mu I, I]]` is positive definite, the
//! spectrum of `K` is real and splits into minus eigenvalues left of `mu` and
//! plus eigenvalues right of `mu`.

use std::sync::OnceLock;

use nalgebra::{Complex, DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{KgError, Result};

/// Relative asymmetry accepted by the strict constructor.
pub const SYMMETRY_RTOL: f64 = 1e-12;
/// Default absolute tolerance for locating the definiteness-interval endpoints.
pub const INTERVAL_TOL: f64 = 1e-10;

/// Dense real symmetric matrix; entries are exactly symmetric after ingest.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricOperator {
    entries: DMatrix<f64>,
}

impl SymmetricOperator {
    /// Builds from a square matrix, rejecting asymmetry beyond `1e-12`
    /// relative tolerance. The stored entries are the symmetrized average.
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        let scale = 1.0 + m.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        let tol = SYMMETRY_RTOL * scale;
        let max_asym = max_asymmetry(&m)?;
        if max_asym > tol {
            return Err(KgError::NotSymmetric { max_asym, tol });
        }
        Ok(Self::average(m))
    }

    /// Builds by averaging with the transpose, accepting any square input.
    /// This is the ingest path for external documents.
    pub fn symmetrized(m: DMatrix<f64>) -> Result<Self> {
        max_asymmetry(&m)?;
        Ok(Self::average(m))
    }

    fn average(m: DMatrix<f64>) -> Self {
        let sym = (&m + m.transpose()) * 0.5;
        Self { entries: sym }
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            entries: DMatrix::zeros(dim, dim),
        }
    }

    /// `c * I`.
    pub fn scaled_identity(dim: usize, c: f64) -> Self {
        Self {
            entries: DMatrix::identity(dim, dim) * c,
        }
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        Self {
            entries: DMatrix::from_diagonal(&DVector::from_row_slice(diag)),
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    /// Spectral norm (largest absolute eigenvalue).
    pub fn norm(&self) -> f64 {
        self.entries
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .fold(0.0f64, |a, x| a.max(x.abs()))
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.entries
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .fold(f64::INFINITY, |a, x| a.min(*x))
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.entries
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .fold(f64::NEG_INFINITY, |a, x| a.max(*x))
    }

    /// Entrywise sum; dimensions must match.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(KgError::DimensionMismatch(format!(
                "cannot add {}x{} and {}x{}",
                self.dim(),
                self.dim(),
                other.dim(),
                other.dim()
            )));
        }
        Ok(Self {
            entries: &self.entries + &other.entries,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            entries: &self.entries * s,
        }
    }

    /// `self + c * I`.
    pub fn shift(&self, c: f64) -> Self {
        let n = self.dim();
        Self {
            entries: &self.entries + DMatrix::identity(n, n) * c,
        }
    }
}

fn max_asymmetry(m: &DMatrix<f64>) -> Result<f64> {
    if m.nrows() != m.ncols() {
        return Err(KgError::DimensionMismatch(format!(
            "matrix is {}x{}, expected square",
            m.nrows(),
            m.ncols()
        )));
    }
    if m.nrows() == 0 {
        return Err(KgError::InvalidInput("dimension must be >= 1".into()));
    }
    if m.iter().any(|x| !x.is_finite()) {
        return Err(KgError::InvalidInput("matrix has non-finite entries".into()));
    }
    let mut max_asym = 0.0f64;
    for i in 0..m.nrows() {
        for j in (i + 1)..m.ncols() {
            max_asym = max_asym.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    Ok(max_asym)
}

/// Cached spectral factors of `U^2`; computed once per pair and shared by
/// clones that keep the same kinetic part.
#[derive(Debug, Clone)]
struct KineticFactors {
    /// Principal square root `U` of `U^2`.
    u: DMatrix<f64>,
    u_inv: DMatrix<f64>,
    u2_min_eig: f64,
    u2_max_eig: f64,
}

/// Kinetic-plus-mass square `U^2` (positive definite) together with a
/// symmetric potential `V` of the same dimension.
#[derive(Debug, Clone)]
pub struct OperatorPair {
    u2: SymmetricOperator,
    v: SymmetricOperator,
    factors: OnceLock<KineticFactors>,
}

impl OperatorPair {
    /// Validates dimensions and positive definiteness of `u2` (by Cholesky).
    pub fn new(u2: SymmetricOperator, v: SymmetricOperator) -> Result<Self> {
        if u2.dim() != v.dim() {
            return Err(KgError::DimensionMismatch(format!(
                "u2 is {0}x{0} but v is {1}x{1}",
                u2.dim(),
                v.dim()
            )));
        }
        cholesky_lower(u2.entries()).map_err(|pivot| KgError::NotPositiveDefinite { pivot })?;
        Ok(Self {
            u2,
            v,
            factors: OnceLock::new(),
        })
    }

    pub fn dim(&self) -> usize {
        self.u2.dim()
    }

    pub fn u2(&self) -> &SymmetricOperator {
        &self.u2
    }

    pub fn v(&self) -> &SymmetricOperator {
        &self.v
    }

    /// Same kinetic part, new potential. The spectral factors of `U^2` are
    /// shared with `self`, which keeps homotopy sweeps cheap.
    pub fn with_potential(&self, v: SymmetricOperator) -> Result<Self> {
        if v.dim() != self.dim() {
            return Err(KgError::DimensionMismatch(format!(
                "u2 is {0}x{0} but v is {1}x{1}",
                self.dim(),
                v.dim()
            )));
        }
        Ok(Self {
            u2: self.u2.clone(),
            v,
            factors: self.factors.clone(),
        })
    }

    /// Replaces `V` by `V + eps * I`.
    pub fn shifted(&self, eps: f64) -> Self {
        Self {
            u2: self.u2.clone(),
            v: self.v.shift(eps),
            factors: self.factors.clone(),
        }
    }

    fn factors(&self) -> &KineticFactors {
        self.factors.get_or_init(|| {
            let eig = self.u2.entries().clone().symmetric_eigen();
            let mut min_eig = f64::INFINITY;
            let mut max_eig = f64::NEG_INFINITY;
            for &l in eig.eigenvalues.iter() {
                min_eig = min_eig.min(l);
                max_eig = max_eig.max(l);
            }
            let q = &eig.eigenvectors;
            let sqrt_d = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| l.max(0.0).sqrt()));
            let inv_sqrt_d = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| 1.0 / l.max(0.0).sqrt()));
            let u = q * &sqrt_d * q.transpose();
            let u_inv = q * &inv_sqrt_d * q.transpose();
            KineticFactors {
                u: (&u + u.transpose()) * 0.5,
                u_inv: (&u_inv + u_inv.transpose()) * 0.5,
                u2_min_eig: min_eig,
                u2_max_eig: max_eig,
            }
        })
    }

    /// Principal square root `U` of `U^2`.
    pub fn u(&self) -> &DMatrix<f64> {
        &self.factors().u
    }

    pub fn u_inv(&self) -> &DMatrix<f64> {
        &self.factors().u_inv
    }

    /// `|U^-1| = 1 / sqrt(min eig U^2)`.
    pub fn u_inv_norm(&self) -> f64 {
        1.0 / self.factors().u2_min_eig.sqrt()
    }

    /// `|U| = sqrt(max eig U^2)`.
    pub fn u_norm(&self) -> f64 {
        self.factors().u2_max_eig.sqrt()
    }

    /// `|U^2| + |V| + 1`, the scale used by residual tolerances.
    pub fn scale(&self) -> f64 {
        self.factors().u2_max_eig.abs() + self.v.norm() + 1.0
    }

    /// Phase-space matrix `K = [[V, I], [U^2, V]]` of dimension `2 dim`.
    pub fn phase_space_matrix(&self) -> DMatrix<f64> {
        let n = self.dim();
        let mut k = DMatrix::zeros(2 * n, 2 * n);
        k.view_mut((0, 0), (n, n)).copy_from(self.v.entries());
        k.view_mut((0, n), (n, n)).copy_from(&DMatrix::identity(n, n));
        k.view_mut((n, 0), (n, n)).copy_from(self.u2.entries());
        k.view_mut((n, n), (n, n)).copy_from(self.v.entries());
        k
    }
}

/// Krein signature of an eigenvector: sign of `(J x, x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Signature {
    Plus,
    Minus,
}

impl std::fmt::Display for Signature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Signature::Plus => write!(f, "plus"),
            Signature::Minus => write!(f, "minus"),
        }
    }
}

/// One eigenvalue of `K` with its phase-space eigenvector.
#[derive(Debug, Clone)]
pub struct EigenPoint {
    pub value: f64,
    pub signature: Signature,
    /// Phase-space eigenvector of length `2 dim`; the first block is `psi_1`,
    /// the second `psi_2 = (lambda I - V) psi_1`.
    pub vector: DVector<f64>,
    /// `|K x - lambda x| / |x|`.
    pub residual: f64,
}

impl EigenPoint {
    /// First block of the phase-space eigenvector.
    pub fn psi1(&self) -> DVector<f64> {
        let n = self.vector.len() / 2;
        DVector::from_iterator(n, self.vector.iter().take(n).copied())
    }
}

/// All `2 dim` eigenvalues of `K`, sorted ascending, with signatures.
#[derive(Debug, Clone)]
pub struct PhaseSpaceSpectrum {
    pub points: Vec<EigenPoint>,
    pub mu_used: f64,
    pub definite: bool,
}

impl PhaseSpaceSpectrum {
    pub fn values(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.value).collect()
    }

    /// Plus eigenvalues, ascending.
    pub fn plus_values(&self) -> Vec<f64> {
        self.points
            .iter()
            .filter(|p| p.signature == Signature::Plus)
            .map(|p| p.value)
            .collect()
    }

    /// Minus eigenvalues, ascending.
    pub fn minus_values(&self) -> Vec<f64> {
        self.points
            .iter()
            .filter(|p| p.signature == Signature::Minus)
            .map(|p| p.value)
            .collect()
    }

    pub fn min_plus(&self) -> Option<f64> {
        self.plus_values().first().copied()
    }

    pub fn max_minus(&self) -> Option<f64> {
        self.minus_values().last().copied()
    }
}

/// Open interval of `mu` with `g(mu) = |(V - mu I) U^-1| < 1`, together with
/// the minimizer of the (convex) norm profile.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct DefinitenessInterval {
    pub lo: f64,
    pub hi: f64,
    /// `min_mu g(mu)`.
    pub beta_min: f64,
    /// Argmin of `g`.
    pub mu_star: f64,
}

impl DefinitenessInterval {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, mu: f64) -> bool {
        self.lo < mu && mu < self.hi
    }
}

/// `g(mu) = |(V - mu I) U^-1|` (largest singular value).
pub fn condition_norm(pair: &OperatorPair, mu: f64) -> f64 {
    let n = pair.dim();
    let w = (pair.v().entries() - DMatrix::identity(n, n) * mu) * pair.u_inv();
    spectral_norm(&w)
}

pub(crate) fn spectral_norm(m: &DMatrix<f64>) -> f64 {
    m.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .fold(0.0f64, |a, x| a.max(*x))
}

/// Locates the open interval where `g < 1`. Golden-section minimization of
/// the convex profile finds `mu_star`; bisection on each side locates the
/// `g = 1` crossings to absolute tolerance `tol`. Intervals of width `<= tol`
/// are reported as empty.
pub fn definiteness_interval(pair: &OperatorPair, tol: f64) -> Result<Option<DefinitenessInterval>> {
    if !(tol > 0.0) {
        return Err(KgError::InvalidInput(format!("tol must be > 0, got {tol}")));
    }
    let g0 = condition_norm(pair, 0.0);
    // Outside |mu| >= (1 + g(0)) / |U^-1| we have g(mu) >= 1, and outside
    // 2 g(0) / |U^-1| we have g(mu) >= g(0); both bounds keep the minimizer
    // and the sublevel set {g < 1} inside the bracket.
    let bracket = 2.0 * (g0 + 1.0) / pair.u_inv_norm() + 1.0;
    let g = |mu: f64| condition_norm(pair, mu);

    let (mu_star, beta_min) = golden_min(&g, -bracket, bracket, tol.min(1e-8));
    if beta_min >= 1.0 {
        return Ok(None);
    }
    let lo = bisect_crossing(&g, -bracket, mu_star, tol);
    let hi_rev = bisect_crossing(&|mu: f64| g(-mu), -bracket, -mu_star, tol);
    let hi = -hi_rev;
    if hi - lo <= tol {
        return Ok(None);
    }
    Ok(Some(DefinitenessInterval {
        lo,
        hi,
        beta_min,
        mu_star,
    }))
}

/// Golden-section search for the minimum of a convex function on `[a, b]`.
fn golden_min(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64, xtol: f64) -> (f64, f64) {
    const INVPHI: f64 = 0.618_033_988_749_894_8;
    let mut c = b - INVPHI * (b - a);
    let mut d = a + INVPHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > xtol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INVPHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INVPHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Bisection for the `g = 1` crossing on `[a, b]` where `g(a) >= 1 > g(b)`.
fn bisect_crossing(g: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    while b - a > tol {
        let mid = 0.5 * (a + b);
        if g(mid) < 1.0 {
            b = mid;
        } else {
            a = mid;
        }
    }
    b
}

/// Hand-rolled dense Cholesky `A = L L^T`; on failure returns the index of
/// the first non-positive pivot.
pub(crate) fn cholesky_lower(a: &DMatrix<f64>) -> std::result::Result<DMatrix<f64>, usize> {
    let n = a.nrows();
    let mut l = DMatrix::<f64>::zeros(n, n);
    for j in 0..n {
        let mut d = a[(j, j)];
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if d <= 0.0 || !d.is_finite() {
            return Err(j);
        }
        let dj = d.sqrt();
        l[(j, j)] = dj;
        for i in (j + 1)..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / dj;
        }
    }
    Ok(l)
}

/// Computes the Krein-classified spectrum of `K`.
///
/// With `mu = mu_star`, the positive definite block matrix `L_mu` is
/// Cholesky-factored as `R^T R`; the symmetric matrix `T = R^-T J R^-1` is
/// then diagonalized and each eigenvalue `theta` maps to
/// `lambda = mu + 1/theta` with Krein signature `sign(theta)`. Eigenvectors
/// are mapped back through `x = R^-1 y`.
pub fn spectrum(pair: &OperatorPair) -> Result<PhaseSpaceSpectrum> {
    let interval =
        definiteness_interval(pair, INTERVAL_TOL)?.ok_or(KgError::DefinitenessEmpty)?;
    spectrum_at(pair, interval.mu_star)
}

/// Same reduction anchored at a caller-chosen `mu` with `g(mu) < 1`.
pub fn spectrum_at(pair: &OperatorPair, mu: f64) -> Result<PhaseSpaceSpectrum> {
    let n = pair.dim();
    let l_mu = assemble_l_mu(pair, mu);
    // l_mu = C C^T with C lower triangular, i.e. R = C^T.
    let c = cholesky_lower(&l_mu).map_err(|pivot| KgError::CholeskyFailure { pivot })?;
    let j = jmat(n);
    // T = C^-1 J C^-T, assembled with two triangular solves.
    let y = c
        .solve_lower_triangular(&j)
        .ok_or(KgError::CholeskyFailure { pivot: 0 })?;
    let t = c
        .solve_lower_triangular(&y.transpose())
        .ok_or(KgError::CholeskyFailure { pivot: 0 })?
        .transpose();
    let t = (&t + t.transpose()) * 0.5;
    let eig = t.symmetric_eigen();

    let k = pair.phase_space_matrix();
    let ct = c.transpose();
    let mut points = Vec::with_capacity(2 * n);
    for (idx, &theta) in eig.eigenvalues.iter().enumerate() {
        if theta == 0.0 {
            // Cannot happen for a definite L_mu (T is congruent to J).
            return Err(KgError::CholeskyFailure { pivot: idx });
        }
        let y_col = eig.eigenvectors.column(idx).into_owned();
        let x = ct
            .solve_upper_triangular(&y_col)
            .ok_or(KgError::CholeskyFailure { pivot: idx })?;
        let value = mu + 1.0 / theta;
        let signature = if theta > 0.0 {
            Signature::Plus
        } else {
            Signature::Minus
        };
        let xnorm = x.norm();
        let residual = (&k * &x - &x * value).norm() / xnorm;
        points.push(EigenPoint {
            value,
            signature,
            vector: x,
            residual,
        });
    }
    points.sort_by(|a, b| a.value.total_cmp(&b.value));
    Ok(PhaseSpaceSpectrum {
        points,
        mu_used: mu,
        definite: true,
    })
}

fn assemble_l_mu(pair: &OperatorPair, mu: f64) -> DMatrix<f64> {
    let n = pair.dim();
    let v_mu = pair.v().entries() - DMatrix::identity(n, n) * mu;
    let mut l = DMatrix::zeros(2 * n, 2 * n);
    l.view_mut((0, 0), (n, n)).copy_from(pair.u2().entries());
    l.view_mut((0, n), (n, n)).copy_from(&v_mu);
    l.view_mut((n, 0), (n, n)).copy_from(&v_mu);
    l.view_mut((n, n), (n, n)).copy_from(&DMatrix::identity(n, n));
    l
}

fn jmat(n: usize) -> DMatrix<f64> {
    let mut j = DMatrix::zeros(2 * n, 2 * n);
    j.view_mut((0, n), (n, n)).copy_from(&DMatrix::identity(n, n));
    j.view_mut((n, 0), (n, n)).copy_from(&DMatrix::identity(n, n));
    j
}

/// Eigenvalues of the non-symmetric phase-space matrix `K`, computed directly.
/// This is the fallback past definiteness loss; values may be non-real.
/// Sorted by real part, then imaginary part.
pub fn spectrum_general(pair: &OperatorPair) -> Vec<Complex<f64>> {
    let k = pair.phase_space_matrix();
    let mut vals: Vec<Complex<f64>> = k.complex_eigenvalues().iter().copied().collect();
    vals.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    vals
}

/// Spectral-gap radius around `mu`: `(1 - g(mu)) / |U^-1|`.
///
/// The triangle inequality on `|(V - lambda I) U^-1| >= 1` for eigenvalues
/// gives `|lambda - mu| >= (1 - g(mu)) / |U^-1|`; this is the derivable form.
pub fn gap_radius(pair: &OperatorPair, mu: f64) -> Result<f64> {
    let g = condition_norm(pair, mu);
    if g >= 1.0 {
        return Err(KgError::ConditionViolated { norm: g });
    }
    Ok((1.0 - g) / pair.u_inv_norm())
}

/// The gap expression as printed in the source material,
/// `|U^-1|^-1 / (1 - g(mu))`, exposed for comparison only. It grows as
/// `g -> 1` while the attainable gap shrinks; see `gap_radius`.
pub fn gap_radius_printed(pair: &OperatorPair, mu: f64) -> Result<f64> {
    let g = condition_norm(pair, mu);
    if g >= 1.0 {
        return Err(KgError::ConditionViolated { norm: g });
    }
    Ok(1.0 / (pair.u_inv_norm() * (1.0 - g)))
}

/// `M`: the gap radius evaluated at `mu_star`. Used by the ordering margin
/// checks of the monotonicity theorems.
pub fn margin_m(pair: &OperatorPair) -> Result<f64> {
    let interval =
        definiteness_interval(pair, INTERVAL_TOL)?.ok_or(KgError::DefinitenessEmpty)?;
    gap_radius(pair, interval.mu_star)
}

/// JSON interchange document for an operator pair (row-major dense blocks).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PairDocument {
    pub dim: usize,
    pub u2: Vec<Vec<f64>>,
    pub v: Vec<Vec<f64>>,
}

impl PairDocument {
    pub fn to_pair(&self) -> Result<OperatorPair> {
        let u2 = SymmetricOperator::symmetrized(rows_to_matrix(self.dim, &self.u2, "u2")?)?;
        let v = SymmetricOperator::symmetrized(rows_to_matrix(self.dim, &self.v, "v")?)?;
        OperatorPair::new(u2, v)
    }

    pub fn from_pair(pair: &OperatorPair) -> Self {
        Self {
            dim: pair.dim(),
            u2: matrix_to_rows(pair.u2().entries()),
            v: matrix_to_rows(pair.v().entries()),
        }
    }
}

pub fn rows_to_matrix(dim: usize, rows: &[Vec<f64>], name: &str) -> Result<DMatrix<f64>> {
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(KgError::InvalidInput(format!(
            "{name}: expected {dim} rows of {dim} entries"
        )));
    }
    let flat: Vec<f64> = rows.iter().flatten().copied().collect();
    Ok(DMatrix::from_row_slice(dim, dim, &flat))
}

pub fn matrix_to_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    pub(crate) fn pair_from(u2: &[f64], v: &[f64], n: usize) -> OperatorPair {
        let u2 = SymmetricOperator::new(DMatrix::from_row_slice(n, n, u2)).unwrap();
        let v = SymmetricOperator::new(DMatrix::from_row_slice(n, n, v)).unwrap();
        OperatorPair::new(u2, v).unwrap()
    }

    /// The worked 2x2 pair: U^2 = [[2,-1],[-1,2]], V = t * diag(1, 0).
    pub(crate) fn example_pair(t: f64) -> OperatorPair {
        pair_from(&[2.0, -1.0, -1.0, 2.0], &[t, 0.0, 0.0, 0.0], 2)
    }

    #[test]
    fn symmetrization_rejects_gross_asymmetry() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0]);
        assert!(matches!(
            SymmetricOperator::new(m.clone()),
            Err(KgError::NotSymmetric { .. })
        ));
        // The ingest path averages instead.
        let s = SymmetricOperator::symmetrized(m).unwrap();
        assert_eq!(s.entries()[(0, 1)], 1.0);
        assert_eq!(s.entries()[(1, 0)], 1.0);
    }

    #[test]
    fn pair_requires_positive_definite_u2() {
        let u2 = SymmetricOperator::from_diagonal(&[1.0, -0.5]);
        let v = SymmetricOperator::zero(2);
        assert!(matches!(
            OperatorPair::new(u2, v),
            Err(KgError::NotPositiveDefinite { pivot: 1 })
        ));
    }

    #[test]
    fn condition_norm_trivial_cases() {
        let pair = pair_from(&[1.0, 0.0, 0.0, 1.0], &[0.0; 4], 2);
        assert_relative_eq!(condition_norm(&pair, 0.0), 0.0, epsilon = 1e-14);
        assert_relative_eq!(condition_norm(&pair, 0.5), 0.5, epsilon = 1e-14);
    }

    #[test]
    fn condition_norm_matches_svd_oracle() {
        // Frozen from an independent SVD of the explicitly formed 2x2 matrix
        // V U^-1: sigma_max = sqrt(2/3).
        let pair = example_pair(1.0);
        assert_relative_eq!(
            condition_norm(&pair, 0.0),
            0.816_496_580_927_726,
            epsilon = 1e-12
        );
    }

    #[test]
    fn definiteness_interval_identity_pair() {
        let pair = pair_from(&[1.0, 0.0, 0.0, 1.0], &[0.0; 4], 2);
        let iv = definiteness_interval(&pair, 1e-10).unwrap().unwrap();
        assert_relative_eq!(iv.lo, -1.0, epsilon = 1e-8);
        assert_relative_eq!(iv.hi, 1.0, epsilon = 1e-8);
        assert!(iv.beta_min.abs() < 1e-7);
        assert!(iv.mu_star.abs() < 1e-6);
        // g at the located endpoints is 1 within tolerance.
        assert!((condition_norm(&pair, iv.lo) - 1.0).abs() < 1e-8);
        assert!((condition_norm(&pair, iv.hi) - 1.0).abs() < 1e-8);
    }

    #[test]
    fn definiteness_interval_shifts_with_potential() {
        let c = 0.7;
        let n = 3;
        let u2 = SymmetricOperator::scaled_identity(n, 1.0);
        let v = SymmetricOperator::scaled_identity(n, c);
        let pair = OperatorPair::new(u2, v).unwrap();
        let iv = definiteness_interval(&pair, 1e-10).unwrap().unwrap();
        assert_relative_eq!(iv.lo, c - 1.0, epsilon = 1e-8);
        assert_relative_eq!(iv.hi, c + 1.0, epsilon = 1e-8);
    }

    #[test]
    fn definiteness_interval_closes_at_collision() {
        // At t = 2 the example pair loses definiteness: a grid scan of g stays
        // >= 1 - 1e-6 everywhere, so with tol = 1e-5 the interval is empty.
        let pair = example_pair(2.0);
        let min_scan = (0..=1000)
            .map(|i| -5.0 + 10.0 * (i as f64) / 1000.0)
            .map(|mu| condition_norm(&pair, mu))
            .fold(f64::INFINITY, f64::min);
        assert!(min_scan >= 1.0 - 1e-4, "grid scan min {min_scan}");
        assert!(definiteness_interval(&pair, 1e-5).unwrap().is_none());
    }

    #[test]
    fn spectrum_of_diagonal_pair() {
        let pair = pair_from(&[1.0, 0.0, 0.0, 3.0], &[0.0; 4], 2);
        let spec = spectrum(&pair).unwrap();
        let vals = spec.values();
        let expected = [-(3.0f64.sqrt()), -1.0, 1.0, 3.0f64.sqrt()];
        for (v, e) in vals.iter().zip(expected.iter()) {
            assert_relative_eq!(v, e, epsilon = 1e-10);
        }
        let sigs: Vec<_> = spec.points.iter().map(|p| p.signature).collect();
        assert_eq!(
            sigs,
            vec![
                Signature::Minus,
                Signature::Minus,
                Signature::Plus,
                Signature::Plus
            ]
        );
        for p in &spec.points {
            assert!(p.residual <= 1e-8 * pair.scale());
        }
    }

    #[test]
    fn spectrum_shift_covariance() {
        let pair = example_pair(0.8);
        let eps = 0.37;
        let base = spectrum(&pair).unwrap().values();
        let shifted = spectrum(&pair.shifted(eps)).unwrap().values();
        for (s, b) in shifted.iter().zip(base.iter()) {
            assert!((s - (b + eps)).abs() <= 1e-10 * (1.0 + pair.u2().norm()));
        }
    }

    #[test]
    fn signature_sign_of_j_product() {
        let pair = example_pair(0.5);
        let spec = spectrum(&pair).unwrap();
        let j = jmat(pair.dim());
        for p in &spec.points {
            let jp = (&j * &p.vector).dot(&p.vector);
            assert_eq!(p.signature == Signature::Plus, jp > 0.0);
            // Plus values lie right of mu_star, minus values left.
            assert_eq!(p.signature == Signature::Plus, p.value > spec.mu_used);
        }
    }

    #[test]
    fn general_spectrum_agrees_when_definite() {
        let pair = example_pair(1.0);
        let spec = spectrum(&pair).unwrap();
        let gen = spectrum_general(&pair);
        for (g, s) in gen.iter().zip(spec.values().iter()) {
            assert!(g.im.abs() < 1e-9);
            assert!((g.re - s).abs() < 1e-8);
        }
    }

    #[test]
    fn general_spectrum_nonreal_past_collision() {
        let pair = example_pair(2.5);
        let gen = spectrum_general(&pair);
        let nonreal = gen.iter().filter(|z| z.im.abs() > 1e-6).count();
        assert!(nonreal >= 2, "expected a conjugate pair, got {gen:?}");
        // Conjugates come in pairs.
        assert_eq!(nonreal % 2, 0);
    }

    #[test]
    fn gap_radius_simple_values() {
        let pair = pair_from(&[1.0, 0.0, 0.0, 1.0], &[0.0; 4], 2);
        assert_relative_eq!(gap_radius(&pair, 0.0).unwrap(), 1.0, epsilon = 1e-12);
        let pair4 = pair_from(&[4.0, 0.0, 0.0, 4.0], &[0.0; 4], 2);
        assert_relative_eq!(gap_radius(&pair4, 0.0).unwrap(), 2.0, epsilon = 1e-12);
        assert!(matches!(
            gap_radius(&example_pair(2.0), 0.9),
            Err(KgError::ConditionViolated { .. })
        ));
    }

    #[test]
    fn printed_gap_grows_while_derivable_shrinks() {
        let pair = example_pair(1.9);
        let iv = definiteness_interval(&pair, 1e-10).unwrap().unwrap();
        let derivable = gap_radius(&pair, iv.mu_star).unwrap();
        let printed = gap_radius_printed(&pair, iv.mu_star).unwrap();
        assert!(derivable < printed);
        // Only the derivable form is an actual lower bound on the distance
        // from mu_star to the spectrum here.
        let spec = spectrum(&pair).unwrap();
        let dist = spec
            .values()
            .iter()
            .map(|l| (l - iv.mu_star).abs())
            .fold(f64::INFINITY, f64::min);
        assert!(dist >= derivable - 1e-10);
        assert!(dist < printed, "printed form over-promises: {dist} vs {printed}");
    }

    #[test]
    fn pair_document_roundtrip() {
        let pair = example_pair(1.0);
        let doc = PairDocument::from_pair(&pair);
        let json = serde_json::to_string(&doc).unwrap();
        let back: PairDocument = serde_json::from_str(&json).unwrap();
        let pair2 = back.to_pair().unwrap();
        assert_eq!(pair2.u2().entries(), pair.u2().entries());
        assert_eq!(pair2.v().entries(), pair.v().entries());
    }
}
