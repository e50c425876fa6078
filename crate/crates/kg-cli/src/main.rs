//! `kg`: command-line front end for the Klein-Gordon spectral library.
//!
//! Subcommands: `spectrum`, `flow`, `bounds`, `penalty`, `verify`. Outputs
//! are CSV/JSON reports and static SVG charts written to `--out`.
//!
//! Exit codes: 0 success; 2 a validity condition is violated; 3 the
//! definiteness interval is empty (spectrum falls back to the general,
//! possibly non-real eigenvalues); 4 malformed input; 5 verification
//! failure.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use kg_core::bounds::{self, BoundDetail, BoundKind, BoundNorms, PerturbationBound};
use kg_core::error::KgError;
use kg_core::flow::{self, HomotopyDocument, TraceOptions};
use kg_core::models::{
    self, CoulombModel, CutoffPerturbation, OscillatorModel, PhysicalUnits, ALPHA_FIGURE,
};
use kg_core::pencil::{self, OperatorPair, PairDocument, Signature, SymmetricOperator};
use kg_core::radial;
use kg_core::report;

#[derive(Parser)]
#[command(name = "kg", version, about = "Klein-Gordon spectral toolbox")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output directory for reports and charts.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,

    /// Random seed (outputs are byte-identical for a fixed seed).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Override the fine-structure constant.
    #[arg(long, global = true)]
    alpha: Option<f64>,

    /// Pin alpha = 1/137 as used by the reference figures.
    #[arg(long, global = true, default_value_t = false)]
    figure_mode: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Classified spectrum of an operator pair -> spectrum.csv
    Spectrum {
        /// Operator-pair JSON: {"dim": n, "u2": [[..]], "v": [[..]]}
        input: PathBuf,
        /// Replace V by V + shift * I before solving.
        #[arg(long)]
        shift: Option<f64>,
    },
    /// Eigenvalue flow of a homotopy -> flow.csv, events.csv, flow.svg
    Flow {
        /// Homotopy JSON: {"dim": n, "u2": [[..]], "v0": [[..]], "v1": [[..]]}
        input: PathBuf,
        #[arg(long, default_value_t = 0.0)]
        t0: f64,
        #[arg(long, default_value_t = 1.0)]
        t1: f64,
        /// Number of grid points.
        #[arg(long, default_value_t = 201)]
        steps: usize,
    },
    /// Perturbation enclosures -> bounds.json (plus the bound-comparison
    /// table and chart in Coulomb model mode)
    Bounds {
        /// Operator-pair JSON (matrix mode; requires --delta).
        input: Option<PathBuf>,
        /// Perturbation JSON: {"dim": n, "delta": [[..]]}
        #[arg(long)]
        delta: Option<PathBuf>,
        /// Closed-form model mode; currently "coulomb".
        #[arg(long)]
        model: Option<String>,
        #[arg(long = "Z")]
        z: Option<f64>,
        /// Cutoff radius in classical electron radii.
        #[arg(long)]
        l: Option<f64>,
        #[arg(long)]
        tau: Option<f64>,
    },
    /// Penalty factor of the norm-relative bound -> penalty.csv, penalty.svg
    Penalty {
        #[arg(long, default_value_t = 1.0)]
        zmin: f64,
        #[arg(long, default_value_t = 68.0)]
        zmax: f64,
        /// Number of grid points.
        #[arg(long, default_value_t = 68)]
        steps: usize,
    },
    /// Oracle verification runs -> verify.json (exit 5 on failure)
    Verify {
        #[command(subcommand)]
        target: VerifyTarget,
    },
}

#[derive(Subcommand)]
enum VerifyTarget {
    /// Radial Coulomb: grid convergence plus the inclusion test.
    Radial {
        #[arg(long = "Z")]
        z: f64,
        /// Number of interior grid points for the finest run.
        #[arg(long, default_value_t = 4000)]
        grid: usize,
        /// Outer radius in natural units (default: 50 Coulomb lengths).
        #[arg(long)]
        rmax: Option<f64>,
        #[arg(long, default_value_t = 0.01)]
        tau: f64,
        /// Cutoff radius in classical electron radii.
        #[arg(long, default_value_t = 10.0)]
        l: f64,
    },
    /// Oscillator line discretization vs the closed-form levels.
    Oscillator {
        #[arg(long, default_value_t = 5)]
        levels: usize,
        #[arg(long, default_value_t = 2000)]
        grid: usize,
        #[arg(long, default_value_t = 8.0)]
        xmax: f64,
    },
}

/// A failure annotated with the exit code mandated by the interface contract.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

impl From<KgError> for Failure {
    fn from(err: KgError) -> Self {
        let code = match &err {
            KgError::ConditionViolated { .. } | KgError::OutOfValidity(_) => 2,
            KgError::DefinitenessEmpty => 3,
            KgError::DimensionMismatch(_)
            | KgError::NotSymmetric { .. }
            | KgError::NotPositiveDefinite { .. }
            | KgError::InvalidInput(_) => 4,
            KgError::InclusionViolation(_) => 5,
            _ => 1,
        };
        Self::new(code, err.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn units_for(cli: &Cli) -> PhysicalUnits {
    if cli.figure_mode {
        PhysicalUnits::with_alpha(ALPHA_FIGURE)
    } else if let Some(alpha) = cli.alpha {
        PhysicalUnits::with_alpha(alpha)
    } else {
        PhysicalUnits::natural()
    }
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    fs::create_dir_all(&cli.out)
        .map_err(|e| Failure::new(1, format!("cannot create {}: {e}", cli.out.display())))?;
    match &cli.command {
        Command::Spectrum { input, shift } => cmd_spectrum(cli, input, *shift),
        Command::Flow {
            input,
            t0,
            t1,
            steps,
        } => cmd_flow(cli, input, *t0, *t1, *steps),
        Command::Bounds {
            input,
            delta,
            model,
            z,
            l,
            tau,
        } => cmd_bounds(
            cli,
            input.as_deref(),
            delta.as_deref(),
            model.as_deref(),
            *z,
            *l,
            *tau,
        ),
        Command::Penalty { zmin, zmax, steps } => cmd_penalty(cli, *zmin, *zmax, *steps),
        Command::Verify { target } => cmd_verify(cli, target),
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::new(4, format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Failure::new(4, format!("malformed {}: {e}", path.display())))
}

fn write_out(cli: &Cli, name: &str, contents: &str) -> Result<(), Failure> {
    let path = cli.out.join(name);
    fs::write(&path, contents)
        .map_err(|e| Failure::new(1, format!("cannot write {}: {e}", path.display())))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_spectrum(cli: &Cli, input: &Path, shift: Option<f64>) -> Result<u8, Failure> {
    let doc: PairDocument = read_json(input)?;
    let pair = doc.to_pair().map_err(Failure::from)?;
    let pair = match shift {
        Some(eps) => pair.shifted(eps),
        None => pair,
    };
    match pencil::spectrum(&pair) {
        Ok(spec) => {
            write_out(cli, "spectrum.csv", &report::spectrum_csv(&spec))?;
            Ok(0)
        }
        Err(KgError::DefinitenessEmpty) => {
            let vals = pencil::spectrum_general(&pair);
            write_out(cli, "spectrum.csv", &report::spectrum_general_csv(&vals))?;
            eprintln!("definiteness interval empty; wrote the general (re, im) spectrum");
            Ok(3)
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_flow(cli: &Cli, input: &Path, t0: f64, t1: f64, steps: usize) -> Result<u8, Failure> {
    if !(t1 > t0) || steps < 2 {
        return Err(Failure::new(4, "need t1 > t0 and steps >= 2"));
    }
    let doc: HomotopyDocument = read_json(input)?;
    let homotopy = doc.to_homotopy().map_err(Failure::from)?;
    let grid = flow::linspace(t0, t1, steps);
    let rep = flow::trace(&homotopy, &grid, &TraceOptions::default()).map_err(Failure::from)?;
    write_out(cli, "flow.csv", &report::flow_csv(&rep))?;
    write_out(cli, "events.csv", &report::events_csv(&rep))?;
    write_out(cli, "flow.svg", &report::flow_svg(&rep))?;
    Ok(0)
}

#[derive(serde::Deserialize)]
struct DeltaDocument {
    dim: usize,
    delta: Vec<Vec<f64>>,
}

#[derive(Serialize)]
struct MatrixBoundEntry {
    lambda: f64,
    signature: Signature,
    records: Vec<PerturbationBound>,
}

#[derive(Serialize)]
struct MatrixBoundsReport {
    dim: usize,
    eigenvalues: Vec<MatrixBoundEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

#[derive(Serialize)]
struct CoulombBoundsReport {
    z: f64,
    alpha: f64,
    tau: f64,
    l_over_re: f64,
    lambda: f64,
    records: Vec<PerturbationBound>,
}

fn cmd_bounds(
    cli: &Cli,
    input: Option<&Path>,
    delta: Option<&Path>,
    model: Option<&str>,
    z: Option<f64>,
    l: Option<f64>,
    tau: Option<f64>,
) -> Result<u8, Failure> {
    match (model, input) {
        (Some("coulomb"), _) => {
            let z = z.ok_or_else(|| Failure::new(4, "--model coulomb requires --Z"))?;
            let tau = tau.ok_or_else(|| Failure::new(4, "--model coulomb requires --tau"))?;
            let l = l.ok_or_else(|| {
                Failure::new(4, "--model coulomb requires --l (in electron radii)")
            })?;
            coulomb_bounds(cli, z, tau, l)
        }
        (Some(other), _) => Err(Failure::new(4, format!("unknown model '{other}'"))),
        (None, Some(input)) => {
            let delta =
                delta.ok_or_else(|| Failure::new(4, "matrix mode requires --delta <file>"))?;
            matrix_bounds(cli, input, delta)
        }
        (None, None) => Err(Failure::new(
            4,
            "either --model coulomb or an operator-pair file is required",
        )),
    }
}

fn coulomb_bounds(cli: &Cli, z: f64, tau: f64, l_re: f64) -> Result<u8, Failure> {
    let units = units_for(cli);
    let model = CoulombModel::new(units, z).map_err(Failure::from)?;
    if !model.penalty_valid() {
        return Err(Failure::new(
            2,
            format!(
                "validity violated: 2 Z alpha = {} >= 1",
                2.0 * model.coupling()
            ),
        ));
    }
    let r_e = units.electron_radius();
    let p = CutoffPerturbation::new(l_re * r_e, tau).map_err(Failure::from)?;
    let deltas = models::cutoff_deltas(&model, &p);
    let lambda = models::coulomb_lambda(&model, 1.0).map_err(Failure::from)?;

    let refined = PerturbationBound {
        kind: BoundKind::Refined,
        lower: lambda + deltas.delta_minus,
        upper: lambda + deltas.delta_plus,
        hypotheses_ok: true,
        detail: BoundDetail {
            delta_minus: Some(deltas.delta_minus),
            delta_plus: Some(deltas.delta_plus),
            ..Default::default()
        },
    };
    let gammas = bounds::GammaPair {
        gamma_minus: deltas.gamma_minus,
        gamma_plus: deltas.gamma_plus,
    };
    let relative = bounds::relative_bound(|eps| models::coulomb_lambda(&model, eps), gammas)
        .map_err(Failure::from)?;
    let combined = refined.intersect(&relative, BoundKind::Combined);

    // Norm-relative route with the closed-form Kato estimates
    // |V U^-1| = 2 Z alpha and |dV U^-1| <= tau |V U^-1|.
    let vu = models::coulomb_vu_norm(&model);
    let dvu = tau * vu;
    let radius = lambda * dvu / (1.0 - vu);
    let zeta = models::penalty(&model).map_err(Failure::from)?;
    let nv = PerturbationBound {
        kind: BoundKind::Nv,
        lower: lambda - radius,
        upper: lambda + radius,
        hypotheses_ok: true,
        detail: BoundDetail {
            zeta: Some(zeta),
            norms: BoundNorms {
                delta_v: Some(deltas.delta_plus),
                v_u_inv: Some(vu),
                delta_v_u_inv: Some(dvu),
                u_inv: Some(1.0 / units.mc2()),
                ..Default::default()
            },
            note: Some(format!(
                "chain value zeta * |dV| = {}",
                zeta * deltas.delta_plus
            )),
            ..Default::default()
        },
    };

    let rep = CoulombBoundsReport {
        z,
        alpha: units.alpha,
        tau,
        l_over_re: l_re,
        lambda,
        records: vec![refined, relative, combined, nv],
    };
    write_out(
        cli,
        "bounds.json",
        &serde_json::to_string_pretty(&rep).expect("serializable"),
    )?;

    // Bound-comparison table over a log grid of cutoff radii.
    let l_grid: Vec<f64> = (0..81)
        .map(|i| r_e * 10.0f64.powf(i as f64 * 3.0 / 80.0))
        .collect();
    let table = models::coulomb_bound_table(&model, tau, &l_grid).map_err(Failure::from)?;
    write_out(cli, "bound_table.csv", &report::bound_table_csv(&table))?;
    let series = vec![
        report::Series {
            name: "refined width".into(),
            points: table
                .iter()
                .map(|r| ((r.l / r_e).log10(), r.refined_upper - r.refined_lower))
                .collect(),
        },
        report::Series {
            name: "relative width".into(),
            points: table
                .iter()
                .map(|r| ((r.l / r_e).log10(), r.relative_upper - r.relative_lower))
                .collect(),
        },
    ];
    write_out(
        cli,
        "bound_table.svg",
        &report::line_chart(
            "enclosure width vs cutoff radius",
            "log10(l / r_e)",
            "width (mc^2)",
            &series,
        ),
    )?;
    Ok(0)
}

fn matrix_bounds(cli: &Cli, input: &Path, delta_path: &Path) -> Result<u8, Failure> {
    let doc: PairDocument = read_json(input)?;
    let pair = doc.to_pair().map_err(Failure::from)?;
    let delta_doc: DeltaDocument = read_json(delta_path)?;
    let delta = SymmetricOperator::symmetrized(
        pencil::rows_to_matrix(delta_doc.dim, &delta_doc.delta, "delta").map_err(Failure::from)?,
    )
    .map_err(Failure::from)?;
    if delta.dim() != pair.dim() {
        return Err(Failure::new(4, "delta dimension does not match the pair"));
    }
    let spec = pencil::spectrum(&pair).map_err(Failure::from)?;

    // The relative route applies when v <= 0 commutes with delta.
    let gammas = bounds::relative_gammas(pair.v(), &delta).ok();
    let mut entries = Vec::new();
    for (idx, point) in spec.points.iter().enumerate() {
        let mut records = vec![
            bounds::absolute_bound(point.value, &delta, Some(&pair)),
            bounds::refined_bound(point.value, &delta),
        ];
        if let Ok(nv) = bounds::nv_bound(point.value, &pair, &delta) {
            records.push(nv);
        }
        if let Some(g) = gammas {
            // Eigenvalue family of the scaled potential, matched by index
            // in the full sorted list.
            let family = |eps: f64| -> kg_core::Result<f64> {
                let scaled = pair.with_potential(pair.v().scale(eps))?;
                Ok(pencil::spectrum(&scaled)?.points[idx].value)
            };
            if let Ok(rel) = bounds::relative_bound(family, g) {
                let combined = records[1].intersect(&rel, BoundKind::Combined);
                records.push(rel);
                records.push(combined);
            }
        }
        entries.push(MatrixBoundEntry {
            lambda: point.value,
            signature: point.signature,
            records,
        });
    }
    let rep = MatrixBoundsReport {
        dim: pair.dim(),
        eigenvalues: entries,
        note: gammas.is_none().then(|| {
            "relative/combined records omitted: v and delta are not a commuting nonpositive pair"
                .to_string()
        }),
    };
    write_out(
        cli,
        "bounds.json",
        &serde_json::to_string_pretty(&rep).expect("serializable"),
    )?;
    Ok(0)
}

fn cmd_penalty(cli: &Cli, zmin: f64, zmax: f64, steps: usize) -> Result<u8, Failure> {
    if !(zmax > zmin) || steps < 2 {
        return Err(Failure::new(4, "need zmax > zmin and steps >= 2"));
    }
    let units = units_for(cli);
    let grid: Vec<f64> = (0..steps)
        .map(|i| zmin + (zmax - zmin) * i as f64 / (steps - 1) as f64)
        .collect();
    let points = models::penalty_curve(units, &grid);
    for p in &points {
        if p.zeta.is_none() {
            eprintln!(
                "warning: Z = {} outside validity (2 Z alpha >= 1); skipped",
                p.z
            );
        }
    }
    write_out(cli, "penalty.csv", &report::penalty_csv(&points))?;
    let series = vec![report::Series {
        name: "zeta".into(),
        points: points
            .iter()
            .filter_map(|p| p.zeta.map(|zeta| (p.z, zeta)))
            .collect(),
    }];
    write_out(
        cli,
        "penalty.svg",
        &report::line_chart("penalty vs atomic number", "Z", "zeta", &series),
    )?;
    Ok(0)
}

#[derive(Serialize)]
struct RadialVerifyDocument {
    convergence: radial::ConvergenceReport,
    inclusion: radial::RadialReport,
}

#[derive(Serialize)]
struct OscillatorVerifyDocument {
    rows: Vec<radial::OscillatorCheckRow>,
    ok: bool,
}

fn cmd_verify(cli: &Cli, target: &VerifyTarget) -> Result<u8, Failure> {
    match target {
        VerifyTarget::Radial {
            z,
            grid,
            rmax,
            tau,
            l,
        } => {
            let units = units_for(cli);
            let model = CoulombModel::new(units, *z).map_err(Failure::from)?;
            let n_list: Vec<usize> = [grid / 4, grid / 2, *grid]
                .iter()
                .copied()
                .filter(|&n| n >= 16)
                .collect();
            let convergence =
                radial::verify_ground(&model, &n_list, *rmax).map_err(Failure::from)?;
            let p = CutoffPerturbation::new(l * units.electron_radius(), *tau)
                .map_err(Failure::from)?;
            match radial::verify_inclusion(&model, &p, *grid, *rmax) {
                Ok(inclusion) => {
                    let doc = RadialVerifyDocument {
                        convergence: convergence.clone(),
                        inclusion,
                    };
                    write_out(
                        cli,
                        "verify.json",
                        &serde_json::to_string_pretty(&doc).expect("serializable"),
                    )?;
                    if convergence.errors_decrease {
                        Ok(0)
                    } else {
                        eprintln!("convergence failure: errors do not decrease with n");
                        Ok(5)
                    }
                }
                Err(e) => {
                    eprintln!("inclusion failure: {e}");
                    Ok(5)
                }
            }
        }
        VerifyTarget::Oscillator { levels, grid, xmax } => {
            let rows = radial::verify_oscillator(*levels, *grid, *xmax).map_err(Failure::from)?;
            let ok = rows.iter().all(|r| r.rel_error <= 1e-3);
            let doc = OscillatorVerifyDocument {
                rows: rows.clone(),
                ok,
            };
            write_out(
                cli,
                "verify.json",
                &serde_json::to_string_pretty(&doc).expect("serializable"),
            )?;
            write_out(cli, "oscillator_check.csv", &report::oscillator_check_csv(&doc.rows))?;
            // Closed-form levels for reference alongside.
            let model =
                OscillatorModel::new(PhysicalUnits::natural(), 1, 1.0, 0.0).map_err(Failure::from)?;
            let levels = models::oscillator_spectrum(&model, *levels as u32)
                .map_err(Failure::from)?;
            write_out(cli, "oscillator.csv", &report::oscillator_csv(&levels))?;
            if ok {
                Ok(0)
            } else {
                eprintln!("oscillator verification failure: grid levels off by more than 1e-3");
                Ok(5)
            }
        }
    }
}
