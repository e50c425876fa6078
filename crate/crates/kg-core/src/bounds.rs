//! Eigenvalue perturbation enclosures for `V -> V + deltaV`.
//!
//! Four families are provided. The absolute bound `[l - |dV|, l + |dV|]` and
//! its refinement `[l + d_minus, l + d_plus]` (extreme eigenvalues of `dV`)
//! need nothing but the perturbation. The relative bound consumes the
//! eigenvalue family `lambda(eps)` of the scaled potential `eps V` together
//! with certified coefficients `-g_minus V <= dV <= -g_plus V`, and the
//! combined bound mixes both. The competing norm-relative bound
//! `|l~ - l| <= |l| |dV U^-1| / (1 - |V U^-1|)` is evaluated alongside with
//! its penalty factor `zeta`.

use serde::{Deserialize, Serialize};

use crate::error::{KgError, Result};
use crate::pencil::{self, OperatorPair, SymmetricOperator};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Absolute,
    Refined,
    Relative,
    Combined,
    Nv,
}

/// Norms and margins backing a bound record.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct BoundNorms {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_v: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v_u_inv: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_v_u_inv: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u_inv: Option<f64>,
    /// Gap radius `M` at `mu_star` of the unperturbed pair.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub margin_m: Option<f64>,
}

/// Free-form diagnostics carried by every bound record.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct BoundDetail {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_minus: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_plus: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_minus: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_plus: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zeta: Option<f64>,
    pub norms: BoundNorms,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// One enclosure `[lower, upper]` for the perturbed eigenvalue.
/// `hypotheses_ok` gates the soundness guarantee only; the numbers are
/// reported either way.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PerturbationBound {
    pub kind: BoundKind,
    pub lower: f64,
    pub upper: f64,
    pub hypotheses_ok: bool,
    pub detail: BoundDetail,
}

impl PerturbationBound {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, x: f64, slack: f64) -> bool {
        self.lower - slack <= x && x <= self.upper + slack
    }

    /// Intersection, i.e. the tighter of the two bounds at each end. Valid
    /// whenever both inputs are valid enclosures of the same eigenvalue.
    pub fn intersect(&self, other: &Self, kind: BoundKind) -> Self {
        let mut detail = self.detail.clone();
        detail.note = Some("intersection of two enclosures".into());
        if detail.gamma_minus.is_none() {
            detail.gamma_minus = other.detail.gamma_minus;
        }
        if detail.gamma_plus.is_none() {
            detail.gamma_plus = other.detail.gamma_plus;
        }
        if detail.delta_minus.is_none() {
            detail.delta_minus = other.detail.delta_minus;
        }
        if detail.delta_plus.is_none() {
            detail.delta_plus = other.detail.delta_plus;
        }
        Self {
            kind,
            lower: self.lower.max(other.lower),
            upper: self.upper.min(other.upper),
            hypotheses_ok: self.hypotheses_ok && other.hypotheses_ok,
            detail,
        }
    }
}

/// `[lambda - |dV|, lambda + |dV|]` with the spectral norm.
///
/// When the unperturbed pair is supplied, `hypotheses_ok` checks the margin
/// `V - |dV| I >= -M` (with `M` the gap radius at `mu_star`); the simpler
/// sufficient margin `|dV| <= M` is recorded in the detail.
pub fn absolute_bound(
    lambda: f64,
    delta_v: &SymmetricOperator,
    pair: Option<&OperatorPair>,
) -> PerturbationBound {
    let norm = delta_v.norm();
    let mut detail = BoundDetail {
        norms: BoundNorms {
            delta_v: Some(norm),
            ..Default::default()
        },
        ..Default::default()
    };
    let hypotheses_ok = match pair {
        Some(p) => match pencil::margin_m(p) {
            Ok(m) => {
                detail.norms.margin_m = Some(m);
                let marg1 = p.v().min_eigenvalue() - norm >= -m - 1e-12 * p.scale();
                let marg2 = norm <= m;
                detail.note = Some(format!("margin checks: V - |dV| >= -M: {marg1}, |dV| <= M: {marg2}"));
                marg1
            }
            Err(_) => false,
        },
        None => false,
    };
    PerturbationBound {
        kind: BoundKind::Absolute,
        lower: lambda - norm,
        upper: lambda + norm,
        hypotheses_ok,
        detail,
    }
}

/// `[lambda + d_minus, lambda + d_plus]` with `d_minus/d_plus` the extreme
/// eigenvalues of `dV` (the inf/sup of its Rayleigh quotient).
pub fn refined_bound(lambda: f64, delta_v: &SymmetricOperator) -> PerturbationBound {
    let d_minus = delta_v.min_eigenvalue();
    let d_plus = delta_v.max_eigenvalue();
    PerturbationBound {
        kind: BoundKind::Refined,
        lower: lambda + d_minus,
        upper: lambda + d_plus,
        hypotheses_ok: true,
        detail: BoundDetail {
            delta_minus: Some(d_minus),
            delta_plus: Some(d_plus),
            norms: BoundNorms {
                delta_v: Some(delta_v.norm()),
                ..Default::default()
            },
            ..Default::default()
        },
    }
}

/// Certified coefficients of the relative comparison
/// `-gamma_minus V <= dV <= -gamma_plus V` for nonpositive `V`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GammaPair {
    pub gamma_minus: f64,
    pub gamma_plus: f64,
}

/// Tightest `GammaPair` for commuting `v <= 0` and `delta_v`, computed
/// entrywise on the joint eigenbasis as ratios `dV_i / (-v_i)`; `0/0` entries
/// are unconstrained. `gamma_minus` is the smallest ratio, `gamma_plus` the
/// largest, so `gamma_minus <= gamma_plus` always holds on output.
pub fn relative_gammas(v: &SymmetricOperator, delta_v: &SymmetricOperator) -> Result<GammaPair> {
    if v.dim() != delta_v.dim() {
        return Err(KgError::DimensionMismatch(format!(
            "v is {0}x{0}, deltaV is {1}x{1}",
            v.dim(),
            delta_v.dim()
        )));
    }
    let scale = v.norm() * delta_v.norm() + 1e-300;
    let comm = v.entries() * delta_v.entries() - delta_v.entries() * v.entries();
    let comm_norm = pencil::spectral_norm(&comm);
    let tol = 1e-10 * scale.max(1e-30);
    if comm_norm > tol {
        return Err(KgError::NonCommuting {
            norm: comm_norm,
            tol,
        });
    }

    let (v_diag, d_diag) = joint_diagonal(v, delta_v)?;
    let psd_tol = 1e-12 * (1.0 + v.norm());
    if v_diag.iter().any(|&x| x > psd_tol) {
        return Err(KgError::NotComparable(
            "v has positive eigenvalues; the relative comparison presumes v <= 0".into(),
        ));
    }
    let zero_tol = 1e-12 * (1.0 + v.norm().max(delta_v.norm()));
    let mut gamma_minus = f64::INFINITY;
    let mut gamma_plus = f64::NEG_INFINITY;
    for (&vi, &di) in v_diag.iter().zip(d_diag.iter()) {
        let w = -vi; // >= 0
        if w <= zero_tol {
            if di.abs() > zero_tol {
                return Err(KgError::NotComparable(format!(
                    "v vanishes along a direction where deltaV = {di} does not"
                )));
            }
            continue; // 0/0: unconstrained
        }
        let r = di / w;
        gamma_minus = gamma_minus.min(r);
        gamma_plus = gamma_plus.max(r);
    }
    if !gamma_minus.is_finite() {
        // Every direction unconstrained (v = dV = 0).
        return Ok(GammaPair {
            gamma_minus: 0.0,
            gamma_plus: 0.0,
        });
    }
    Ok(GammaPair {
        gamma_minus,
        gamma_plus,
    })
}

/// Joint eigenbasis diagonal entries of two commuting symmetric matrices.
/// Eigenvalue clusters of `v` are re-diagonalized against `delta_v` so that
/// degeneracies do not break the construction.
fn joint_diagonal(v: &SymmetricOperator, delta_v: &SymmetricOperator) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = v.dim();
    let eig = v.entries().clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let mut q = nalgebra::DMatrix::<f64>::zeros(n, n);
    let mut vals = vec![0.0; n];
    for (new_col, &old_col) in order.iter().enumerate() {
        q.set_column(new_col, &eig.eigenvectors.column(old_col));
        vals[new_col] = eig.eigenvalues[old_col];
    }
    let mut d_in_basis = q.transpose() * delta_v.entries() * &q;

    let cluster_tol = 1e-8 * (1.0 + v.norm());
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (vals[end] - vals[end - 1]).abs() <= cluster_tol {
            end += 1;
        }
        if end - start > 1 {
            let block = d_in_basis.view((start, start), (end - start, end - start)).into_owned();
            let block_eig = block.symmetric_eigen();
            let qb = q.columns(start, end - start) * &block_eig.eigenvectors;
            for (j, col) in (start..end).enumerate() {
                q.set_column(col, &qb.column(j));
            }
        }
        start = end;
    }
    d_in_basis = q.transpose() * delta_v.entries() * &q;

    let off_tol = 1e-8 * (1.0 + delta_v.norm());
    let mut max_off = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                max_off = max_off.max(d_in_basis[(i, j)].abs());
            }
        }
    }
    if max_off > off_tol {
        return Err(KgError::NonCommuting {
            norm: max_off,
            tol: off_tol,
        });
    }
    Ok((vals, (0..n).map(|i| d_in_basis[(i, i)]).collect()))
}

/// `[lambda(1 - g_minus), lambda(1 - g_plus)]`, ordered using that the
/// family `lambda(eps)` is decreasing in the coupling `eps`.
pub fn relative_bound<F>(lambda_family: F, gammas: GammaPair) -> Result<PerturbationBound>
where
    F: Fn(f64) -> Result<f64>,
{
    let lo_val = lambda_family(1.0 - gammas.gamma_minus)?;
    let hi_val = lambda_family(1.0 - gammas.gamma_plus)?;
    let (lower, upper) = if lo_val <= hi_val {
        (lo_val, hi_val)
    } else {
        (hi_val, lo_val)
    };
    Ok(PerturbationBound {
        kind: BoundKind::Relative,
        lower,
        upper,
        hypotheses_ok: true,
        detail: BoundDetail {
            gamma_minus: Some(gammas.gamma_minus),
            gamma_plus: Some(gammas.gamma_plus),
            ..Default::default()
        },
    })
}

/// `[d_minus + lambda(1 - g_minus), d_plus + lambda(1 - g_plus)]`: the
/// mixed comparison `d_minus - g_minus V <= dV <= d_plus - g_plus V` pushed
/// through the monotone dependence on the potential. Degenerates to the
/// refined bound for `g = 0` and to the relative bound for `d = 0`.
pub fn combined_bound<F>(
    lambda_family: F,
    gammas: GammaPair,
    delta_minus: f64,
    delta_plus: f64,
) -> Result<PerturbationBound>
where
    F: Fn(f64) -> Result<f64>,
{
    let lo_val = delta_minus + lambda_family(1.0 - gammas.gamma_minus)?;
    let hi_val = delta_plus + lambda_family(1.0 - gammas.gamma_plus)?;
    let (lower, upper) = if lo_val <= hi_val {
        (lo_val, hi_val)
    } else {
        (hi_val, lo_val)
    };
    Ok(PerturbationBound {
        kind: BoundKind::Combined,
        lower,
        upper,
        hypotheses_ok: true,
        detail: BoundDetail {
            delta_minus: Some(delta_minus),
            delta_plus: Some(delta_plus),
            gamma_minus: Some(gammas.gamma_minus),
            gamma_plus: Some(gammas.gamma_plus),
            ..Default::default()
        },
    })
}

/// The competing norm-relative bound: a symmetric enclosure of radius
/// `|lambda| |dV U^-1| / (1 - |V U^-1|)`, with the penalty
/// `zeta = |lambda| |U^-1| / (1 - |V U^-1|)` and the chain value
/// `zeta |dV|` recorded in the detail.
pub fn nv_bound(
    lambda: f64,
    pair: &OperatorPair,
    delta_v: &SymmetricOperator,
) -> Result<PerturbationBound> {
    if delta_v.dim() != pair.dim() {
        return Err(KgError::DimensionMismatch(format!(
            "deltaV is {0}x{0}, pair dimension is {1}",
            delta_v.dim(),
            pair.dim()
        )));
    }
    let v_u_inv = pencil::spectral_norm(&(pair.v().entries() * pair.u_inv()));
    if v_u_inv >= 1.0 {
        return Err(KgError::ConditionViolated { norm: v_u_inv });
    }
    let dv_u_inv = pencil::spectral_norm(&(delta_v.entries() * pair.u_inv()));
    let radius = lambda.abs() * dv_u_inv / (1.0 - v_u_inv);
    let zeta = lambda.abs() * pair.u_inv_norm() / (1.0 - v_u_inv);
    let dv_norm = delta_v.norm();
    Ok(PerturbationBound {
        kind: BoundKind::Nv,
        lower: lambda - radius,
        upper: lambda + radius,
        hypotheses_ok: true,
        detail: BoundDetail {
            zeta: Some(zeta),
            norms: BoundNorms {
                delta_v: Some(dv_norm),
                v_u_inv: Some(v_u_inv),
                delta_v_u_inv: Some(dv_u_inv),
                u_inv: Some(pair.u_inv_norm()),
                ..Default::default()
            },
            note: Some(format!("chain value zeta * |dV| = {}", zeta * dv_norm)),
            ..Default::default()
        },
    })
}
