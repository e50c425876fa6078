//! Eigenvalue flows along the linear homotopy `V_t = V_0 + t (V_1 - V_0)`.
//!
//! At each grid point the Krein-classified spectrum is computed; points are
//! matched across adjacent grid values by maximal eigenvector overlap with a
//! nearest-value fallback, so curve identity survives crossings. Past
//! definiteness loss the trace continues on the general (possibly non-real)
//! spectrum with undefined signatures. Collisions, definiteness loss and
//! non-real eigenvalues are recorded as events, and the monotonicity
//! hypotheses of the two comparison theorems are checked so that verdicts can
//! be gated on them.

use nalgebra::{Complex, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{KgError, Result};
use crate::pencil::{
    self, condition_norm, definiteness_interval, rows_to_matrix, OperatorPair, Signature,
    SymmetricOperator, INTERVAL_TOL,
};

/// Absolute slack allowed before a curve segment counts as a monotonicity
/// violation; absorbs eigensolver roundoff.
pub const MONOTONE_SLACK: f64 = 1e-9;

/// Linear homotopy between two potentials over a fixed kinetic part.
#[derive(Debug, Clone)]
pub struct Homotopy {
    u2: SymmetricOperator,
    v0: SymmetricOperator,
    v1: SymmetricOperator,
    delta_v: SymmetricOperator,
}

impl Homotopy {
    pub fn new(u2: SymmetricOperator, v0: SymmetricOperator, v1: SymmetricOperator) -> Result<Self> {
        if u2.dim() != v0.dim() || u2.dim() != v1.dim() {
            return Err(KgError::DimensionMismatch(format!(
                "u2 is {0}x{0}, v0 is {1}x{1}, v1 is {2}x{2}",
                u2.dim(),
                v0.dim(),
                v1.dim()
            )));
        }
        // Validate u2 up front so that per-step pair construction cannot fail.
        OperatorPair::new(u2.clone(), v0.clone())?;
        let delta_v = v1.sub(&v0)?;
        Ok(Self { u2, v0, v1, delta_v })
    }

    pub fn u2(&self) -> &SymmetricOperator {
        &self.u2
    }

    pub fn v0(&self) -> &SymmetricOperator {
        &self.v0
    }

    pub fn v1(&self) -> &SymmetricOperator {
        &self.v1
    }

    pub fn delta_v(&self) -> &SymmetricOperator {
        &self.delta_v
    }

    pub fn dim(&self) -> usize {
        self.u2.dim()
    }

    /// `|U^2| + max(|V_0|, |V_1|) + 1`; the scale for tolerances.
    pub fn scale(&self) -> f64 {
        self.u2.norm() + self.v0.norm().max(self.v1.norm()) + 1.0
    }
}

/// `V_t = V_0 + t (V_1 - V_0)`. Values of `t` outside `[0, 1]` are allowed
/// for exploration.
pub fn connect(h: &Homotopy, t: f64) -> SymmetricOperator {
    h.v0.add(&h.delta_v.scale(t)).expect("dimensions validated")
}

/// Hypothesis flags for the monotonicity theorems, all reproducible from the
/// homotopy data.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HypothesisCheck {
    /// `|V_0 dV - dV V_0| <= 1e-10 * scale`.
    pub commuting: bool,
    /// `dV >= -1e-12 * scale` (positive semidefinite up to noise).
    pub delta_psd: bool,
    pub v0_psd: bool,
    pub v1_psd: bool,
    /// Condition norms of `V_0` and `V_1` at the common `mu` below.
    pub beta0: f64,
    pub beta1: f64,
    /// Minimizer of `max(g_0, g_1)`, the shared anchor point.
    pub mu_common: f64,
    /// `(V_1 psi, psi) >= (V_0 psi, psi) >= -M (psi, psi)` with `M` the gap
    /// radius of the unperturbed pair at its `mu_star`.
    pub order_ok: bool,
    /// `beta0, beta1 < 1` at the common `mu`.
    pub condition_ok: bool,
    /// The gap radius `M` used by the ordering margin.
    pub margin_m: Option<f64>,
}

impl HypothesisCheck {
    /// Commuting family: ordered, conditioned, with nonnegative step.
    pub fn theorem1(&self) -> bool {
        self.commuting && self.delta_psd && self.order_ok && self.condition_ok
    }

    /// Non-commuting family of nonnegative ordered potentials.
    pub fn theorem2(&self) -> bool {
        self.v0_psd && self.v1_psd && self.delta_psd && self.condition_ok
    }
}

/// Evaluates every hypothesis flag for the homotopy.
pub fn check_hypotheses(h: &Homotopy) -> Result<HypothesisCheck> {
    let scale = h.scale();
    let comm = h.v0.entries() * h.delta_v.entries() - h.delta_v.entries() * h.v0.entries();
    let commuting = pencil::spectral_norm(&comm) <= 1e-10 * scale;
    let delta_psd = h.delta_v.min_eigenvalue() >= -1e-12 * scale;
    let v0_psd = h.v0.min_eigenvalue() >= -1e-12 * scale;
    let v1_psd = h.v1.min_eigenvalue() >= -1e-12 * scale;

    let pair0 = OperatorPair::new(h.u2.clone(), h.v0.clone())?;
    let pair1 = pair0.with_potential(h.v1.clone())?;
    // Shared anchor: minimizer of the convex profile max(g_0, g_1).
    let worst = |mu: f64| condition_norm(&pair0, mu).max(condition_norm(&pair1, mu));
    let g00 = worst(0.0);
    let bracket = 2.0 * (g00 + 1.0) / pair0.u_inv_norm() + 1.0;
    let (mu_common, _) = golden_min(&worst, -bracket, bracket, 1e-8);
    let beta0 = condition_norm(&pair0, mu_common);
    let beta1 = condition_norm(&pair1, mu_common);
    let condition_ok = beta0 < 1.0 && beta1 < 1.0;

    let margin_m = pencil::margin_m(&pair0).ok();
    let order_ok = match margin_m {
        Some(m) => delta_psd && h.v0.min_eigenvalue() >= -(m + 1e-12 * scale),
        None => false,
    };
    Ok(HypothesisCheck {
        commuting,
        delta_psd,
        v0_psd,
        v1_psd,
        beta0,
        beta1,
        mu_common,
        order_ok,
        condition_ok,
        margin_m,
    })
}

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

/// Result of checking the interpolation lemma along a grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InterpolationReport {
    pub mu: f64,
    /// `max(g_0(mu), g_1(mu))`, the bound the lemma guarantees.
    pub bound: f64,
    /// Largest `g_t(mu)` observed across the grid.
    pub max_norm: f64,
}

/// Asserts `|(V_t - mu I) U^-1| <= max(g_0(mu), g_1(mu)) + 1e-10` at every
/// grid `t` in `[0, 1]`. A violation would indicate an implementation bug.
pub fn interpolation_bound_check(h: &Homotopy, mu: f64, grid: &[f64]) -> Result<InterpolationReport> {
    let pair0 = OperatorPair::new(h.u2.clone(), h.v0.clone())?;
    let pair1 = pair0.with_potential(h.v1.clone())?;
    let bound = condition_norm(&pair0, mu).max(condition_norm(&pair1, mu));
    let mut max_norm = f64::NEG_INFINITY;
    for &t in grid.iter().filter(|t| (0.0..=1.0).contains(*t)) {
        let pair_t = pair0.with_potential(connect(h, t))?;
        let g_t = condition_norm(&pair_t, mu);
        if g_t > bound + 1e-10 {
            return Err(KgError::LemmaViolation(format!(
                "g_t(mu) = {g_t} exceeds max(g_0, g_1) = {bound} at t = {t}"
            )));
        }
        max_norm = max_norm.max(g_t);
    }
    Ok(InterpolationReport { mu, bound, max_norm })
}

/// Options for `trace`.
#[derive(Debug, Clone)]
pub struct TraceOptions {
    /// Minimum normalized eigenvector overlap for identity matching.
    pub overlap_threshold: f64,
    /// Two curve values closer than this emit a collision event.
    pub collision_tol: f64,
    /// Imaginary parts above `nonreal_tol * scale` flag a non-real value.
    pub nonreal_tol: f64,
    /// Endpoint tolerance passed to the definiteness-interval search.
    pub interval_tol: f64,
}

impl Default for TraceOptions {
    fn default() -> Self {
        Self {
            overlap_threshold: 0.8,
            collision_tol: 1e-8,
            nonreal_tol: 1e-8,
            interval_tol: INTERVAL_TOL,
        }
    }
}

/// One traced eigenvalue curve. Values are real parts after definiteness
/// loss; signatures are `None` where the Krein classification is undefined.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EigenCurve {
    pub id: usize,
    pub values: Vec<f64>,
    pub imag: Vec<f64>,
    pub signatures: Vec<Option<Signature>>,
    /// Whether eigenvector-overlap matching succeeded at each step; the first
    /// grid point counts as matched.
    pub matched: Vec<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    Collision,
    DefinitenessLost,
    Nonreal,
}

impl std::fmt::Display for EventKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EventKind::Collision => write!(f, "collision"),
            EventKind::DefinitenessLost => write!(f, "definiteness_lost"),
            EventKind::Nonreal => write!(f, "nonreal"),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FlowEvent {
    pub t: f64,
    pub kind: EventKind,
    pub detail: String,
    /// The eigenvalue (real part) the event refers to, when applicable.
    pub value: Option<f64>,
}

/// Verdict for one curve, with the worst violation of the opposite trend.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "verdict")]
pub enum CurveVerdict {
    MonotoneNondecreasing,
    MonotoneNonincreasing,
    Nonmonotone { max_violation: f64 },
}

/// Outcome of gating the traced minus curves on the theorem hypotheses.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TheoremCheck {
    pub theorem1_applies: bool,
    pub theorem2_applies: bool,
    /// Rank-sorted minus values nondecreasing in `t` (the theorems' claim).
    pub sorted_minus_nondecreasing: bool,
    pub max_violation: f64,
    /// Serialized inputs when an applicable theorem is violated; this is a
    /// bug-report artifact, not an expected outcome.
    pub counterexample: Option<String>,
}

/// Full trace output.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FlowReport {
    pub t_grid: Vec<f64>,
    pub curves: Vec<EigenCurve>,
    /// Values re-sorted descending per grid point: `sorted_top[rank][step]`.
    pub sorted_top: Vec<Vec<f64>>,
    pub events: Vec<FlowEvent>,
    pub hypothesis: HypothesisCheck,
    pub verdicts: Vec<CurveVerdict>,
    pub theorem: TheoremCheck,
}

/// Traces all `2 dim` eigenvalue curves over the grid.
pub fn trace(h: &Homotopy, grid: &[f64], opts: &TraceOptions) -> Result<FlowReport> {
    if grid.len() < 2 {
        return Err(KgError::InvalidInput("grid needs at least two points".into()));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(KgError::InvalidInput("grid must be strictly ascending".into()));
    }
    if !(opts.overlap_threshold > 0.5 && opts.overlap_threshold <= 1.0) {
        return Err(KgError::InvalidInput(format!(
            "overlap_threshold must lie in (0.5, 1], got {}",
            opts.overlap_threshold
        )));
    }
    let scale = h.scale();
    let m = 2 * h.dim();
    let base = OperatorPair::new(h.u2.clone(), h.v0.clone())?;

    let mut curves: Vec<EigenCurve> = (0..m)
        .map(|id| EigenCurve {
            id,
            values: Vec::with_capacity(grid.len()),
            imag: Vec::with_capacity(grid.len()),
            signatures: Vec::with_capacity(grid.len()),
            matched: Vec::with_capacity(grid.len()),
        })
        .collect();
    let mut events: Vec<FlowEvent> = Vec::new();

    // Per-curve state carried between steps.
    let mut prev_vals: Vec<Complex<f64>> = Vec::new();
    let mut prev_vecs: Vec<Option<DVector<f64>>> = Vec::new();
    let mut was_definite = true;
    let mut prev_all_real = true;

    for (step, &t) in grid.iter().enumerate() {
        let pair_t = base.with_potential(connect(h, t))?;
        let snapshot = spectrum_snapshot(&pair_t, opts)?;
        let definite = snapshot.definite;

        if step == 0 {
            for (i, c) in curves.iter_mut().enumerate() {
                c.values.push(snapshot.vals[i].re);
                c.imag.push(snapshot.vals[i].im);
                c.signatures.push(snapshot.sigs[i]);
                c.matched.push(true);
            }
            prev_vals = snapshot.vals;
            prev_vecs = snapshot.vecs;
        } else {
            let assignment = match_points(&prev_vals, &prev_vecs, &snapshot, opts);
            let mut new_vals = vec![Complex::new(0.0, 0.0); m];
            let mut new_vecs: Vec<Option<DVector<f64>>> = vec![None; m];
            for (curve_idx, &(point_idx, matched)) in assignment.iter().enumerate() {
                let c = &mut curves[curve_idx];
                c.values.push(snapshot.vals[point_idx].re);
                c.imag.push(snapshot.vals[point_idx].im);
                c.signatures.push(snapshot.sigs[point_idx]);
                c.matched.push(matched);
                new_vals[curve_idx] = snapshot.vals[point_idx];
                new_vecs[curve_idx] = snapshot.vecs[point_idx].clone();
            }
            prev_vals = new_vals;
            prev_vecs = new_vecs;
        }

        if was_definite && !definite {
            events.push(FlowEvent {
                t,
                kind: EventKind::DefinitenessLost,
                detail: snapshot.loss_reason.clone().unwrap_or_default(),
                value: None,
            });
        }
        was_definite = definite;

        let nonreal: Vec<usize> = (0..m)
            .filter(|&i| prev_vals[i].im.abs() > opts.nonreal_tol * scale)
            .collect();
        let all_real = nonreal.is_empty();
        if !all_real {
            events.push(FlowEvent {
                t,
                kind: EventKind::Nonreal,
                detail: format!("{} non-real eigenvalues", nonreal.len()),
                value: Some(prev_vals[nonreal[0]].re),
            });
            if prev_all_real && step > 0 {
                // A real pair turned into a conjugate pair somewhere in the
                // bracket (t_prev, t]; that is a plus/minus collision.
                events.push(FlowEvent {
                    t,
                    kind: EventKind::Collision,
                    detail: format!(
                        "real eigenvalue pair became complex between t = {} and t = {}",
                        grid[step - 1],
                        t
                    ),
                    value: Some(prev_vals[nonreal[0]].re),
                });
            }
        }
        prev_all_real = all_real;
    }

    // Grid-point proximity collisions: one event per curve pair per
    // contiguous run, at the minimal gap.
    for a in 0..m {
        for b in (a + 1)..m {
            let mut run_best: Option<(f64, usize)> = None;
            for step in 0..grid.len() {
                let za = Complex::new(curves[a].values[step], curves[a].imag[step]);
                let zb = Complex::new(curves[b].values[step], curves[b].imag[step]);
                let gap = (za - zb).norm();
                if gap <= opts.collision_tol {
                    run_best = match run_best {
                        Some((g, s)) if g <= gap => Some((g, s)),
                        _ => Some((gap, step)),
                    };
                } else if let Some((_, s)) = run_best.take() {
                    events.push(collision_event(&curves, a, b, grid, s));
                }
            }
            if let Some((_, s)) = run_best {
                events.push(collision_event(&curves, a, b, grid, s));
            }
        }
    }
    events.sort_by(|x, y| x.t.total_cmp(&y.t));

    let sorted_top = sort_descending_per_step(&curves, grid.len());
    let hypothesis = check_hypotheses(h)?;
    let (verdicts, theorem) = verdicts_and_theorem(h, grid, &curves, &sorted_top, &hypothesis);

    Ok(FlowReport {
        t_grid: grid.to_vec(),
        curves,
        sorted_top,
        events,
        hypothesis,
        verdicts,
        theorem,
    })
}

fn collision_event(curves: &[EigenCurve], a: usize, b: usize, grid: &[f64], step: usize) -> FlowEvent {
    FlowEvent {
        t: grid[step],
        kind: EventKind::Collision,
        detail: format!("curves {a} and {b} within tolerance"),
        value: Some(curves[a].values[step]),
    }
}

struct Snapshot {
    vals: Vec<Complex<f64>>,
    vecs: Vec<Option<DVector<f64>>>,
    sigs: Vec<Option<Signature>>,
    definite: bool,
    loss_reason: Option<String>,
}

fn spectrum_snapshot(pair: &OperatorPair, opts: &TraceOptions) -> Result<Snapshot> {
    match definiteness_interval(pair, opts.interval_tol)? {
        Some(interval) => match pencil::spectrum_at(pair, interval.mu_star) {
            Ok(spec) => Ok(Snapshot {
                vals: spec
                    .points
                    .iter()
                    .map(|p| Complex::new(p.value, 0.0))
                    .collect(),
                vecs: spec.points.iter().map(|p| Some(p.vector.clone())).collect(),
                sigs: spec.points.iter().map(|p| Some(p.signature)).collect(),
                definite: true,
                loss_reason: None,
            }),
            Err(KgError::CholeskyFailure { pivot }) => {
                // Margin below roundoff; treat as definiteness loss.
                Ok(general_snapshot(
                    pair,
                    format!("Cholesky of L_mu failed at pivot {pivot} (margin below roundoff)"),
                ))
            }
            Err(e) => Err(e),
        },
        None => Ok(general_snapshot(pair, "definiteness interval empty".into())),
    }
}

fn general_snapshot(pair: &OperatorPair, reason: String) -> Snapshot {
    let vals = pencil::spectrum_general(pair);
    let m = vals.len();
    Snapshot {
        vals,
        vecs: vec![None; m],
        sigs: vec![None; m],
        definite: false,
        loss_reason: Some(reason),
    }
}

/// For each previous curve, picks the new point index and whether the match
/// came from eigenvector overlap. Overlap matching is greedy on descending
/// overlap; leftovers fall back to nearest complex value.
fn match_points(
    prev_vals: &[Complex<f64>],
    prev_vecs: &[Option<DVector<f64>>],
    snap: &Snapshot,
    opts: &TraceOptions,
) -> Vec<(usize, bool)> {
    let m = prev_vals.len();
    let mut result = vec![(usize::MAX, false); m];
    let mut curve_taken = vec![false; m];
    let mut point_taken = vec![false; m];

    let mut overlaps: Vec<(f64, usize, usize)> = Vec::new();
    for (i, pv) in prev_vecs.iter().enumerate() {
        if let Some(pv) = pv {
            for (j, nv) in snap.vecs.iter().enumerate() {
                if let Some(nv) = nv {
                    let o = pv.dot(nv).abs() / (pv.norm() * nv.norm());
                    if o >= opts.overlap_threshold {
                        overlaps.push((o, i, j));
                    }
                }
            }
        }
    }
    overlaps.sort_by(|a, b| b.0.total_cmp(&a.0));
    for (_, i, j) in overlaps {
        if !curve_taken[i] && !point_taken[j] {
            curve_taken[i] = true;
            point_taken[j] = true;
            result[i] = (j, true);
        }
    }

    let mut dists: Vec<(f64, usize, usize)> = Vec::new();
    for i in 0..m {
        if curve_taken[i] {
            continue;
        }
        for j in 0..m {
            if point_taken[j] {
                continue;
            }
            dists.push(((prev_vals[i] - snap.vals[j]).norm(), i, j));
        }
    }
    dists.sort_by(|a, b| a.0.total_cmp(&b.0));
    for (_, i, j) in dists {
        if !curve_taken[i] && !point_taken[j] {
            curve_taken[i] = true;
            point_taken[j] = true;
            result[i] = (j, false);
        }
    }
    result
}

fn sort_descending_per_step(curves: &[EigenCurve], steps: usize) -> Vec<Vec<f64>> {
    let m = curves.len();
    let mut sorted_top = vec![vec![0.0; steps]; m];
    for step in 0..steps {
        let mut vals: Vec<f64> = curves.iter().map(|c| c.values[step]).collect();
        vals.sort_by(|a, b| b.total_cmp(a));
        for (rank, v) in vals.into_iter().enumerate() {
            sorted_top[rank][step] = v;
        }
    }
    sorted_top
}

fn max_decrease(values: &[f64]) -> f64 {
    values
        .windows(2)
        .map(|w| (w[0] - w[1]).max(0.0))
        .fold(0.0, f64::max)
}

fn curve_verdict(values: &[f64]) -> CurveVerdict {
    let dec = max_decrease(values);
    let inc = values
        .windows(2)
        .map(|w| (w[1] - w[0]).max(0.0))
        .fold(0.0, f64::max);
    if dec <= MONOTONE_SLACK {
        CurveVerdict::MonotoneNondecreasing
    } else if inc <= MONOTONE_SLACK {
        CurveVerdict::MonotoneNonincreasing
    } else {
        CurveVerdict::Nonmonotone {
            max_violation: dec.min(inc),
        }
    }
}

fn verdicts_and_theorem(
    h: &Homotopy,
    grid: &[f64],
    curves: &[EigenCurve],
    sorted_top: &[Vec<f64>],
    hyp: &HypothesisCheck,
) -> (Vec<CurveVerdict>, TheoremCheck) {
    let verdicts: Vec<CurveVerdict> = curves.iter().map(|c| curve_verdict(&c.values)).collect();

    // The theorems order the minus spectrum by rank, so the gated check runs
    // on rank-sorted minus values per step (restricted to t in [0, 1]).
    let in_range: Vec<usize> = (0..grid.len())
        .filter(|&s| (0.0..=1.0 + 1e-12).contains(&grid[s]))
        .collect();
    let n_minus = h.dim();
    let mut max_violation = 0.0f64;
    for rank in 0..n_minus {
        // sorted_top is descending over all 2n curves; the minus values are
        // the lower n ranks while the trace stays definite.
        let series: Vec<f64> = in_range
            .iter()
            .map(|&s| sorted_top[n_minus + rank][s])
            .collect();
        max_violation = max_violation.max(max_decrease(&series));
    }
    let sorted_minus_nondecreasing = max_violation <= MONOTONE_SLACK;
    let theorem1_applies = hyp.theorem1();
    let theorem2_applies = hyp.theorem2();
    let counterexample = if (theorem1_applies || theorem2_applies) && !sorted_minus_nondecreasing {
        Some(
            serde_json::to_string(&HomotopyDocument::from_homotopy(h))
                .unwrap_or_else(|e| format!("serialization failed: {e}")),
        )
    } else {
        None
    };
    (
        verdicts,
        TheoremCheck {
            theorem1_applies,
            theorem2_applies,
            sorted_minus_nondecreasing,
            max_violation,
            counterexample,
        },
    )
}

/// Recomputes the per-curve verdicts and the gated theorem check for an
/// existing report; `trace` embeds the same data.
pub fn monotonicity_verdict(
    report: &FlowReport,
    hyp: &HypothesisCheck,
    h: &Homotopy,
) -> (Vec<CurveVerdict>, TheoremCheck) {
    verdicts_and_theorem(h, &report.t_grid, &report.curves, &report.sorted_top, hyp)
}

/// JSON interchange document for a homotopy (row-major dense blocks).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HomotopyDocument {
    pub dim: usize,
    pub u2: Vec<Vec<f64>>,
    pub v0: Vec<Vec<f64>>,
    pub v1: Vec<Vec<f64>>,
}

impl HomotopyDocument {
    pub fn to_homotopy(&self) -> Result<Homotopy> {
        let u2 = SymmetricOperator::symmetrized(rows_to_matrix(self.dim, &self.u2, "u2")?)?;
        let v0 = SymmetricOperator::symmetrized(rows_to_matrix(self.dim, &self.v0, "v0")?)?;
        let v1 = SymmetricOperator::symmetrized(rows_to_matrix(self.dim, &self.v1, "v1")?)?;
        Homotopy::new(u2, v0, v1)
    }

    pub fn from_homotopy(h: &Homotopy) -> Self {
        Self {
            dim: h.dim(),
            u2: pencil::matrix_to_rows(h.u2.entries()),
            v0: pencil::matrix_to_rows(h.v0.entries()),
            v1: pencil::matrix_to_rows(h.v1.entries()),
        }
    }
}

/// Evenly spaced grid of `points >= 2` values from `t0` to `t1` inclusive.
pub fn linspace(t0: f64, t1: f64, points: usize) -> Vec<f64> {
    let n = points.max(2);
    (0..n)
        .map(|i| t0 + (t1 - t0) * (i as f64) / ((n - 1) as f64))
        .collect()
}
