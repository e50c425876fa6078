//! Closed-form model catalog: the relativistic Coulomb ground-state family,
//! the norm-relative penalty curve, the cutoff perturbation, and the
//! Klein-Gordon oscillator spectrum.

use serde::{Deserialize, Serialize};

use crate::error::{KgError, Result};

/// CODATA value of the fine-structure constant.
pub const ALPHA_CODATA: f64 = 1.0 / 137.035_999_084;
/// Rounded value used when reproducing the reference figures.
pub const ALPHA_FIGURE: f64 = 1.0 / 137.0;

/// Physical constants; natural units `m = c = h = 1` by default.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PhysicalUnits {
    pub m: f64,
    pub c: f64,
    pub h: f64,
    pub alpha: f64,
}

impl Default for PhysicalUnits {
    fn default() -> Self {
        Self {
            m: 1.0,
            c: 1.0,
            h: 1.0,
            alpha: ALPHA_CODATA,
        }
    }
}

impl PhysicalUnits {
    pub fn natural() -> Self {
        Self::default()
    }

    /// Natural units with `alpha` pinned to `1/137` for figure reproduction.
    pub fn figure_mode() -> Self {
        Self {
            alpha: ALPHA_FIGURE,
            ..Self::default()
        }
    }

    pub fn with_alpha(alpha: f64) -> Self {
        Self {
            alpha,
            ..Self::default()
        }
    }

    /// `e^2 = alpha * h * c`.
    pub fn e_squared(&self) -> f64 {
        self.alpha * self.h * self.c
    }

    /// Rest energy `m c^2`.
    pub fn mc2(&self) -> f64 {
        self.m * self.c * self.c
    }

    /// Classical electron radius `r_e = e^2 / (m c^2)`.
    pub fn electron_radius(&self) -> f64 {
        self.e_squared() / self.mc2()
    }

    pub fn validate(&self) -> Result<()> {
        if self.m > 0.0 && self.c > 0.0 && self.h > 0.0 && self.alpha > 0.0 {
            Ok(())
        } else {
            Err(KgError::InvalidInput(
                "units must all be positive".into(),
            ))
        }
    }
}

/// Hydrogen-like Coulomb model with coupling `Z alpha`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CoulombModel {
    pub units: PhysicalUnits,
    pub z: f64,
}

impl CoulombModel {
    pub fn new(units: PhysicalUnits, z: f64) -> Result<Self> {
        units.validate()?;
        if !(z > 0.0) {
            return Err(KgError::InvalidInput(format!("Z must be positive, got {z}")));
        }
        Ok(Self { units, z })
    }

    pub fn coupling(&self) -> f64 {
        self.z * self.units.alpha
    }

    /// The ground-state formula needs `Z alpha <= 1/2`; the penalty also
    /// needs `2 Z alpha < 1`.
    pub fn ground_state_valid(&self) -> bool {
        self.coupling() <= 0.5
    }

    pub fn penalty_valid(&self) -> bool {
        2.0 * self.coupling() < 1.0
    }
}

/// Ground-state energy of the scaled potential `eps * (-Z e^2 / r)`:
///
/// ```text
/// lambda(eps) = mc^2 [1 + (eps Z a)^2 / (1/2 + sqrt(1/4 - (eps Z a)^2))^2]^(-1/2)
/// ```
pub fn coulomb_lambda(model: &CoulombModel, epsilon: f64) -> Result<f64> {
    let x = epsilon * model.coupling();
    let radicand = 0.25 - x * x;
    if radicand < 0.0 {
        return Err(KgError::OutOfValidity(format!(
            "eps * Z * alpha = {x} exceeds 1/2; the ground-state radical is negative"
        )));
    }
    let denom = 0.5 + radicand.sqrt();
    Ok(model.units.mc2() / (1.0 + x * x / (denom * denom)).sqrt())
}

/// Kato bound for the Coulomb potential: `|V U^-1| = 2 Z alpha`.
pub fn coulomb_vu_norm(model: &CoulombModel) -> f64 {
    2.0 * model.coupling()
}

/// Penalty factor of the norm-relative bound for the Coulomb ground state:
/// `zeta(Z) = lambda_0 / mc^2 / (1 - 2 Z alpha)`.
pub fn penalty(model: &CoulombModel) -> Result<f64> {
    if !model.penalty_valid() {
        return Err(KgError::OutOfValidity(format!(
            "2 Z alpha = {} >= 1",
            2.0 * model.coupling()
        )));
    }
    let lam = coulomb_lambda(model, 1.0)?;
    Ok(lam / model.units.mc2() / (1.0 - 2.0 * model.coupling()))
}

/// One penalty sample; `zeta` is `None` where the model leaves validity.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PenaltyPoint {
    pub z: f64,
    pub zeta: Option<f64>,
}

/// Evaluates `zeta(Z)` over the grid; out-of-validity points are reported
/// with `zeta = None` and skipped by the chart writers.
pub fn penalty_curve(units: PhysicalUnits, z_grid: &[f64]) -> Vec<PenaltyPoint> {
    z_grid
        .iter()
        .map(|&z| {
            let zeta = CoulombModel::new(units, z)
                .and_then(|m| penalty(&m))
                .ok();
            PenaltyPoint { z, zeta }
        })
        .collect()
}

/// Locally capped Coulomb tail: `dV(x) = tau * min(Z e^2 / |x|, Z e^2 / l)`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CutoffPerturbation {
    pub l: f64,
    pub tau: f64,
}

impl CutoffPerturbation {
    pub fn new(l: f64, tau: f64) -> Result<Self> {
        if !(l > 0.0) {
            return Err(KgError::InvalidInput(format!("l must be positive, got {l}")));
        }
        if !(tau > 0.0 && tau < 1.0) {
            return Err(KgError::InvalidInput(format!(
                "tau must lie in (0, 1), got {tau}"
            )));
        }
        Ok(Self { l, tau })
    }

    /// Pointwise value at radius `r > 0`.
    pub fn value(&self, model: &CoulombModel, r: f64) -> f64 {
        let ze2 = model.z * model.units.e_squared();
        self.tau * (ze2 / r).min(ze2 / self.l)
    }
}

/// Closed-form coefficients of the cutoff perturbation.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CutoffDeltas {
    pub delta_minus: f64,
    /// `tau * Z e^2 / l`, the sup of the perturbation.
    pub delta_plus: f64,
    pub gamma_minus: f64,
    /// `tau`, independent of the radius `l`.
    pub gamma_plus: f64,
}

pub fn cutoff_deltas(model: &CoulombModel, p: &CutoffPerturbation) -> CutoffDeltas {
    CutoffDeltas {
        delta_minus: 0.0,
        delta_plus: p.tau * model.z * model.units.e_squared() / p.l,
        gamma_minus: 0.0,
        gamma_plus: p.tau,
    }
}

/// One row of the bound-comparison table over the cutoff radius `l`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct BoundTableRow {
    pub l: f64,
    pub refined_lower: f64,
    pub refined_upper: f64,
    pub relative_lower: f64,
    pub relative_upper: f64,
}

/// Refined vs relative enclosures of the perturbed ground state per cutoff
/// radius. The refined width `tau Z e^2 / l` falls off with `l` while the
/// relative width `lambda(1 - tau) - lambda(1)` is constant, so the two
/// lines cross at `l = tau Z e^2 / (relative width)`.
pub fn coulomb_bound_table(
    model: &CoulombModel,
    tau: f64,
    l_grid: &[f64],
) -> Result<Vec<BoundTableRow>> {
    let lam = coulomb_lambda(model, 1.0)?;
    let lam_scaled = coulomb_lambda(model, 1.0 - tau)?;
    let ze2 = model.z * model.units.e_squared();
    Ok(l_grid
        .iter()
        .map(|&l| BoundTableRow {
            l,
            refined_lower: lam,
            refined_upper: lam + tau * ze2 / l,
            relative_lower: lam,
            relative_upper: lam_scaled,
        })
        .collect())
}

/// Radius at which the refined width equals the (constant) relative width.
pub fn bound_crossover_radius(model: &CoulombModel, tau: f64) -> Result<f64> {
    let width = coulomb_lambda(model, 1.0 - tau)? - coulomb_lambda(model, 1.0)?;
    if width <= 0.0 {
        return Err(KgError::OutOfValidity(
            "relative width is not positive".into(),
        ));
    }
    Ok(tau * model.z * model.units.e_squared() / width)
}

/// Klein-Gordon oscillator in `n` space dimensions with an optional linear
/// field of strength `alpha_field` along the first coordinate.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct OscillatorModel {
    pub units: PhysicalUnits,
    pub n: usize,
    pub omega: f64,
    pub alpha_field: f64,
}

impl OscillatorModel {
    pub fn new(units: PhysicalUnits, n: usize, omega: f64, alpha_field: f64) -> Result<Self> {
        units.validate()?;
        if n == 0 {
            return Err(KgError::InvalidInput("n must be >= 1".into()));
        }
        if !(omega > 0.0) {
            return Err(KgError::InvalidInput(format!(
                "omega must be positive, got {omega}"
            )));
        }
        Ok(Self {
            units,
            n,
            omega,
            alpha_field,
        })
    }

    /// `a = |alpha_field| / (m c omega)`; the spectrum formulas need `a < 1`.
    pub fn a(&self) -> f64 {
        self.alpha_field.abs() / (self.units.m * self.units.c * self.omega)
    }
}

/// One oscillator level: the multi-index and both signs of the eigenvalue.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OscillatorLevel {
    pub k: Vec<u32>,
    pub lambda_plus: f64,
    pub lambda_minus: f64,
}

/// `nu_k(a) = sqrt(1 - a^2) (k_1 + 1/2) + sum_{i >= 2} (k_i + 1/2)`.
fn nu_k(a: f64, k: &[u32]) -> f64 {
    let field_dir = (1.0 - a * a).sqrt() * (k[0] as f64 + 0.5);
    let rest: f64 = k[1..].iter().map(|&ki| ki as f64 + 0.5).sum();
    field_dir + rest
}

/// Enumerates all levels with `sum k_i <= level_cutoff`:
///
/// ```text
/// lambda_k^{+/-} = +/- sqrt((2 m c^2 h omega nu_k(a) + m^2 c^4)(1 - a^2))
/// ```
pub fn oscillator_spectrum(model: &OscillatorModel, level_cutoff: u32) -> Result<Vec<OscillatorLevel>> {
    let a = model.a();
    if a >= 1.0 {
        return Err(KgError::OutOfValidity(format!(
            "a = {a} >= 1; the oscillator spectrum formula breaks down"
        )));
    }
    let u = &model.units;
    let mut levels = Vec::new();
    let mut k = vec![0u32; model.n];
    enumerate_indices(&mut k, 0, level_cutoff, &mut |k| {
        let nu = nu_k(a, k);
        let val = ((2.0 * u.m * u.c * u.c * u.h * model.omega * nu + u.mc2() * u.mc2())
            * (1.0 - a * a))
            .sqrt();
        levels.push(OscillatorLevel {
            k: k.to_vec(),
            lambda_plus: val,
            lambda_minus: -val,
        });
    });
    levels.sort_by(|x, y| x.lambda_plus.total_cmp(&y.lambda_plus).then(x.k.cmp(&y.k)));
    Ok(levels)
}

fn enumerate_indices(k: &mut Vec<u32>, pos: usize, budget: u32, f: &mut impl FnMut(&[u32])) {
    if pos == k.len() {
        f(k);
        return;
    }
    for v in 0..=budget {
        k[pos] = v;
        enumerate_indices(k, pos + 1, budget - v, f);
    }
    k[pos] = 0;
}

/// `|lambda_k| / M` with `M = |lambda_0^-|`: how much the refined bound
/// gains over the norm-relative one at level `k`. Equals 1 at the ground
/// state and grows with the level. Requires the pure oscillator (`a = 0`).
pub fn oscillator_bound_ratio(model: &OscillatorModel, k: &[u32]) -> Result<f64> {
    if model.a() != 0.0 {
        return Err(KgError::OutOfValidity(
            "the bound comparison is stated for a = 0".into(),
        ));
    }
    if k.len() != model.n {
        return Err(KgError::DimensionMismatch(format!(
            "multi-index has {} entries, model has n = {}",
            k.len(),
            model.n
        )));
    }
    let u = &model.units;
    let level = |kk: &[u32]| -> f64 {
        (2.0 * u.m * u.c * u.c * u.h * model.omega * nu_k(0.0, kk) + u.mc2() * u.mc2()).sqrt()
    };
    let ground = level(&vec![0u32; model.n]);
    Ok(level(k) / ground)
}
