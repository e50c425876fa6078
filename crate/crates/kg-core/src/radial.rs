//! Radial finite-difference oracle.
//!
//! The s-wave reduction of the three-dimensional problem on `u(r) = r R(r)`
//! is discretized with the 3-point stencil on a Dirichlet grid, giving a
//! tridiagonal kinetic part and a diagonal potential. Eigenvalues of the
//! quadratic pencil are then located by bisection on the inertia of the
//! tridiagonal matrix `Q_lambda = U^2 - (V - lambda I)^2`: by the Haynsworth
//! inertia additivity on the Schur complement of `L - lambda J`, the number
//! of negative eigenvalues of `Q_lambda` equals the number of plus
//! eigenvalues below `lambda` (for `lambda` right of the definiteness
//! interval). This route shares no code with the dense phase-space solver,
//! which is what makes it usable as an oracle.

use serde::{Deserialize, Serialize};

use crate::error::{KgError, Result};
use crate::models::{coulomb_lambda, CoulombModel, CutoffPerturbation, PhysicalUnits};
use crate::pencil::{OperatorPair, SymmetricOperator};

/// Uniform radial grid with Dirichlet conditions at `0` and `r_max`;
/// interior nodes `r_j = j h`, `h = r_max / (n + 1)`, so no on-axis sample.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RadialGrid {
    pub n: usize,
    pub r_max: f64,
}

impl RadialGrid {
    pub fn new(n: usize, r_max: f64) -> Result<Self> {
        if n < 16 {
            return Err(KgError::InvalidInput(format!("n must be >= 16, got {n}")));
        }
        if !(r_max > 0.0) {
            return Err(KgError::InvalidInput(format!(
                "r_max must be positive, got {r_max}"
            )));
        }
        Ok(Self { n, r_max })
    }

    pub fn h(&self) -> f64 {
        self.r_max / (self.n as f64 + 1.0)
    }

    pub fn node(&self, j: usize) -> f64 {
        (j as f64 + 1.0) * self.h()
    }
}

/// Radial problem: grid, pointwise potential, angular momentum and units.
pub struct RadialProblem<F: Fn(f64) -> f64> {
    pub grid: RadialGrid,
    pub potential: F,
    pub ell: u32,
    pub units: PhysicalUnits,
}

impl<F: Fn(f64) -> f64> RadialProblem<F> {
    /// Tridiagonal `(U^2, V)`: `U^2 = -h_bar^2 c^2 d^2/dr^2 + m^2 c^4
    /// + l(l+1) h_bar^2 c^2 / r^2`, `V = diag(potential(r_j))`.
    pub fn tridiagonal(&self) -> Result<TridiagonalPair> {
        let g = self.grid;
        let h = g.h();
        let u = &self.units;
        let hc2 = u.h * u.h * u.c * u.c;
        let mc4 = u.mc2() * u.mc2();
        let ll = (self.ell * (self.ell + 1)) as f64;
        let mut diag = Vec::with_capacity(g.n);
        let mut v = Vec::with_capacity(g.n);
        for j in 0..g.n {
            let r = g.node(j);
            let pot = (self.potential)(r);
            if !pot.is_finite() {
                return Err(KgError::InvalidInput(format!(
                    "potential is not finite at r = {r}"
                )));
            }
            diag.push(2.0 * hc2 / (h * h) + mc4 + ll * hc2 / (r * r));
            v.push(pot);
        }
        let off = vec![-hc2 / (h * h); g.n - 1];
        Ok(TridiagonalPair {
            u2_diag: diag,
            u2_off: off,
            v_diag: v,
        })
    }

    /// Dense operator pair for interoperation with the phase-space solver.
    /// Meant for moderate `n`; the oracle itself stays tridiagonal.
    pub fn discretize(&self) -> Result<OperatorPair> {
        self.tridiagonal()?.to_pair()
    }
}

/// Tridiagonal kinetic part plus diagonal potential.
#[derive(Debug, Clone)]
pub struct TridiagonalPair {
    u2_diag: Vec<f64>,
    u2_off: Vec<f64>,
    v_diag: Vec<f64>,
}

/// Negative-eigenvalue count of a symmetric tridiagonal matrix via the
/// LDL^T pivot recurrence, with pivots clamped away from zero.
fn tridiagonal_negative_count(diag: &[f64], off: &[f64]) -> usize {
    let scale = diag
        .iter()
        .chain(off.iter())
        .fold(0.0f64, |a, x| a.max(x.abs()));
    let pivmin = 1e-300f64.max(1e-40 * (1.0 + scale));
    let mut count = 0;
    let mut piv = diag[0];
    if piv < 0.0 {
        count += 1;
    }
    for i in 1..diag.len() {
        if piv.abs() < pivmin {
            piv = -pivmin;
        }
        piv = diag[i] - off[i - 1] * off[i - 1] / piv;
        if piv < 0.0 {
            count += 1;
        }
    }
    count
}

impl TridiagonalPair {
    pub fn dim(&self) -> usize {
        self.u2_diag.len()
    }

    pub fn v_diag(&self) -> &[f64] {
        &self.v_diag
    }

    /// Replaces the potential diagonal.
    pub fn with_v(&self, v_diag: Vec<f64>) -> Result<Self> {
        if v_diag.len() != self.dim() {
            return Err(KgError::DimensionMismatch(format!(
                "potential has {} entries, grid has {}",
                v_diag.len(),
                self.dim()
            )));
        }
        Ok(Self {
            u2_diag: self.u2_diag.clone(),
            u2_off: self.u2_off.clone(),
            v_diag,
        })
    }

    /// Negative inertia of `Q_lambda = U^2 - (V - lambda I)^2`; counts the
    /// plus eigenvalues below `lambda` when `lambda` lies at or right of the
    /// definiteness interval.
    pub fn plus_count_below(&self, lambda: f64) -> usize {
        let diag: Vec<f64> = self
            .u2_diag
            .iter()
            .zip(self.v_diag.iter())
            .map(|(&u, &v)| {
                let d = v - lambda;
                u - d * d
            })
            .collect();
        tridiagonal_negative_count(&diag, &self.u2_off)
    }

    /// Gershgorin upper bound on the eigenvalues of `U^2`.
    fn u2_gershgorin_max(&self) -> f64 {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut s = self.u2_diag[i];
                if i > 0 {
                    s += self.u2_off[i - 1].abs();
                }
                if i < n - 1 {
                    s += self.u2_off[i].abs();
                }
                s
            })
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// The k-th plus eigenvalue above the anchor `mu` (which must satisfy
    /// `g(mu) < 1`, i.e. lie in the definiteness interval), located by
    /// inertia bisection to near machine precision.
    pub fn kth_plus_eigenvalue(&self, k: usize, mu: f64) -> Result<f64> {
        if k == 0 {
            return Err(KgError::InvalidInput("k must be >= 1".into()));
        }
        let g = self.condition_norm_at(mu);
        if g >= 1.0 {
            return Err(KgError::ConditionViolated { norm: g });
        }
        // All eigenvalues satisfy |lambda| <= |U| + max |v|.
        let vmax = self.v_diag.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        let hard_cap = self.u2_gershgorin_max().max(0.0).sqrt() + vmax + 1.0;
        if self.plus_count_below(hard_cap) < k {
            return Err(KgError::InvalidInput(format!(
                "fewer than {k} plus eigenvalues exist"
            )));
        }
        let mut lo = mu;
        let mut hi = hard_cap;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.plus_count_below(mid) >= k {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= 1e-15 * (1.0 + hi.abs()) {
                break;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// `g(mu) = |(V - mu I) U^-1|` through the generalized symmetric pencil
    /// `((V - mu I)^2, U^2)`: the squared norm is the largest `theta` with
    /// `(V - mu I)^2 - theta U^2` not yet negative definite, again located
    /// by tridiagonal inertia bisection.
    pub fn condition_norm_at(&self, mu: f64) -> f64 {
        let n = self.dim();
        let count_at = |theta: f64| {
            let diag: Vec<f64> = self
                .u2_diag
                .iter()
                .zip(self.v_diag.iter())
                .map(|(&u, &v)| {
                    let d = v - mu;
                    d * d - theta * u
                })
                .collect();
            let off: Vec<f64> = self.u2_off.iter().map(|&e| -theta * e).collect();
            tridiagonal_negative_count(&diag, &off)
        };
        // Gallop for an upper bracket where the pencil is negative definite.
        let mut hi = 1.0;
        let mut iter = 0;
        while count_at(hi) < n {
            hi *= 2.0;
            iter += 1;
            if iter > 200 {
                return f64::INFINITY;
            }
        }
        let mut lo = 0.0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if count_at(mid) >= n {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= 1e-15 * (1.0 + hi) {
                break;
            }
        }
        (0.5 * (lo + hi)).max(0.0).sqrt()
    }

    /// Dense conversion; validates positive definiteness on construction.
    pub fn to_pair(&self) -> Result<OperatorPair> {
        let n = self.dim();
        let mut u2 = nalgebra::DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            u2[(i, i)] = self.u2_diag[i];
            if i + 1 < n {
                u2[(i, i + 1)] = self.u2_off[i];
                u2[(i + 1, i)] = self.u2_off[i];
            }
        }
        let u2 = SymmetricOperator::new(u2)?;
        let v = SymmetricOperator::from_diagonal(&self.v_diag);
        OperatorPair::new(u2, v).map_err(|e| match e {
            KgError::NotPositiveDefinite { pivot } => {
                // Cannot occur for this stencil; guarded anyway.
                KgError::NotPositiveDefinite { pivot }
            }
            other => other,
        })
    }
}

/// Default outer radius: 50 Coulomb lengths `h_bar / (m c Z alpha)`.
pub fn default_r_max(model: &CoulombModel) -> f64 {
    let u = &model.units;
    50.0 * u.h / (u.m * u.c * model.coupling())
}

/// Coulomb radial problem `V(r) = -Z e^2 / r` on the given grid.
pub fn coulomb_problem(model: &CoulombModel, grid: RadialGrid) -> RadialProblem<impl Fn(f64) -> f64> {
    let ze2 = model.z * model.units.e_squared();
    RadialProblem {
        grid,
        potential: move |r: f64| -ze2 / r,
        ell: 0,
        units: model.units,
    }
}

/// One verification record. This is also the JSON document emitted by the
/// CLI verify command.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RadialReport {
    pub n: usize,
    pub r_max: f64,
    pub ground_computed: f64,
    pub ground_formula: f64,
    pub rel_error: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inclusion: Option<InclusionWindow>,
    pub condition_norm: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct InclusionWindow {
    pub lower: f64,
    pub upper: f64,
    pub value: f64,
    pub ok: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub rows: Vec<RadialReport>,
    /// Errors strictly decrease along the refinement sequence.
    pub errors_decrease: bool,
}

fn ground_state(tri: &TridiagonalPair, mc2: f64) -> Result<f64> {
    let g0 = tri.condition_norm_at(0.0);
    if g0 >= 1.0 {
        // An unsound grid must abort rather than report unreliable bounds.
        return Err(KgError::ConditionViolated { norm: g0 });
    }
    let below_edge = tri.plus_count_below(mc2 * (1.0 - 1e-12));
    if below_edge == 0 {
        return Err(KgError::InvalidInput(
            "no bound state below the continuum edge on this grid".into(),
        ));
    }
    tri.kth_plus_eigenvalue(1, 0.0)
}

/// Grid-refinement study of the Coulomb ground state against the closed
/// form. Errors must decrease with `n`.
pub fn verify_ground(model: &CoulombModel, n_list: &[usize], r_max: Option<f64>) -> Result<ConvergenceReport> {
    let r_max = r_max.unwrap_or_else(|| default_r_max(model));
    let formula = coulomb_lambda(model, 1.0)?;
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let grid = RadialGrid::new(n, r_max)?;
        let tri = coulomb_problem(model, grid).tridiagonal()?;
        let ground = ground_state(&tri, model.units.mc2())?;
        rows.push(RadialReport {
            n,
            r_max,
            ground_computed: ground,
            ground_formula: formula,
            rel_error: (ground - formula).abs() / formula.abs(),
            inclusion: None,
            condition_norm: tri.condition_norm_at(0.0),
        });
    }
    let errors_decrease = rows.windows(2).all(|w| w[1].rel_error < w[0].rel_error);
    Ok(ConvergenceReport {
        rows,
        errors_decrease,
    })
}

/// Runs the relative-bound inclusion test on the grid: the perturbed ground
/// eigenvalue must fall inside `[lambda(1), lambda(1 - tau)]` inflated by
/// the grid error certified on the unperturbed problem at the same `n`.
/// Also asserts that the discrete bound states stay below the continuum
/// edge `m c^2`.
pub fn verify_inclusion(
    model: &CoulombModel,
    p: &CutoffPerturbation,
    n: usize,
    r_max: Option<f64>,
) -> Result<RadialReport> {
    let r_max = r_max.unwrap_or_else(|| default_r_max(model));
    let grid = RadialGrid::new(n, r_max)?;
    let tri = coulomb_problem(model, grid).tridiagonal()?;
    let mc2 = model.units.mc2();

    let formula = coulomb_lambda(model, 1.0)?;
    let unperturbed = ground_state(&tri, mc2)?;
    let grid_error = (unperturbed - formula).abs() / formula.abs();

    // Grid coefficients of the relative comparison, entrywise on the
    // diagonals; they must stay inside the closed-form pair (0, tau).
    let mut gamma_lo = f64::INFINITY;
    let mut gamma_hi = f64::NEG_INFINITY;
    let mut v_pert = Vec::with_capacity(n);
    for j in 0..n {
        let r = grid.node(j);
        let v = tri.v_diag()[j];
        let dv = p.value(model, r);
        let ratio = dv / (-v);
        gamma_lo = gamma_lo.min(ratio);
        gamma_hi = gamma_hi.max(ratio);
        v_pert.push(v + dv);
    }
    if gamma_lo < -1e-15 || gamma_hi > p.tau + 1e-12 {
        return Err(KgError::InclusionViolation(format!(
            "grid gammas [{gamma_lo}, {gamma_hi}] escape the certified range [0, {}]",
            p.tau
        )));
    }

    let tri_pert = tri.with_v(v_pert)?;
    let perturbed = ground_state(&tri_pert, mc2)?;

    let lower = coulomb_lambda(model, 1.0)? * (1.0 - grid_error);
    let upper = coulomb_lambda(model, 1.0 - p.tau)? * (1.0 + grid_error);
    let ok = lower <= perturbed && perturbed <= upper && perturbed < mc2 && unperturbed < mc2;
    let report = RadialReport {
        n,
        r_max,
        ground_computed: unperturbed,
        ground_formula: formula,
        rel_error: grid_error,
        inclusion: Some(InclusionWindow {
            lower,
            upper,
            value: perturbed,
            ok,
        }),
        condition_norm: tri.condition_norm_at(0.0),
    };
    if !ok {
        return Err(KgError::InclusionViolation(
            serde_json::to_string(&report).unwrap_or_default(),
        ));
    }
    Ok(report)
}

/// Number of discrete plus eigenvalues below the continuum edge.
pub fn bound_state_count(tri: &TridiagonalPair, mc2: f64) -> usize {
    tri.plus_count_below(mc2 * (1.0 - 1e-12))
}

/// One-dimensional line discretization of the pure oscillator
/// `U^2 = -d^2/dx^2 + x^2 + 1`, `V = 0` (natural units), on
/// `(-x_max, x_max)` with Dirichlet ends.
pub fn oscillator_line(n: usize, x_max: f64) -> Result<TridiagonalPair> {
    if n < 16 {
        return Err(KgError::InvalidInput(format!("n must be >= 16, got {n}")));
    }
    if !(x_max > 0.0) {
        return Err(KgError::InvalidInput(format!(
            "x_max must be positive, got {x_max}"
        )));
    }
    let h = 2.0 * x_max / (n as f64 + 1.0);
    let mut diag = Vec::with_capacity(n);
    for j in 0..n {
        let x = -x_max + (j as f64 + 1.0) * h;
        diag.push(2.0 / (h * h) + x * x + 1.0);
    }
    Ok(TridiagonalPair {
        u2_diag: diag,
        u2_off: vec![-1.0 / (h * h); n - 1],
        v_diag: vec![0.0; n],
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OscillatorCheckRow {
    pub k: u32,
    pub discrete: f64,
    pub formula: f64,
    pub rel_error: f64,
}

/// Cross-checks the lowest oscillator levels of the line discretization
/// against the closed-form spectrum at `a = 0`, `n = 1`, natural units.
pub fn verify_oscillator(levels: usize, n: usize, x_max: f64) -> Result<Vec<OscillatorCheckRow>> {
    let tri = oscillator_line(n, x_max)?;
    let mut rows = Vec::with_capacity(levels);
    for k in 0..levels {
        let discrete = tri.kth_plus_eigenvalue(k + 1, 0.0)?;
        let formula = (2.0 * k as f64 + 2.0).sqrt();
        rows.push(OscillatorCheckRow {
            k: k as u32,
            discrete,
            formula,
            rel_error: (discrete - formula).abs() / formula,
        });
    }
    Ok(rows)
}
