//! The five commands. Each resolves its inputs from the merged
//! configuration, runs the corresponding library routine, writes its
//! artifacts, and reports failures through exit-code-bearing errors.

use serde::Serialize;

use pekar1d::asymptotics::{
    fit_expansion, ladder_energies, FitResult, LadderModel, LadderPoint, LadderSpec,
};
use pekar1d::closedform::phi0_limit_alpha0;
use pekar1d::effpot::{d_const, g_const, integrated_lower, integrated_upper};
use pekar1d::perturbation::{derivative_check, PerturbPotential};
use pekar1d::verify::{run_verification, CheckResult, Fault};
use pekar1d::{
    effective_strength, minimize, pekar_energy_closed, sech_solution, v_lower, v_upper,
    EnergySplit, FunctionalSpec, Grid1D, ModelParams,
};

use crate::config::{GridConfig, ModelKind, OutputFormat, RunConfig};
use crate::output::{num, write_json, Csv};
use crate::Failure;

/// Stated on every artifact that carries a minimizer density.
const SURROGATE_NOTE: &str = "densities are minimizers of the classical 1D effective \
     functional, a surrogate for the physical ground-state density";

fn params_from(cfg: &RunConfig) -> Result<ModelParams, Failure> {
    let (alpha, beta) = cfg.params();
    ModelParams::new(alpha, beta).map_err(|e| Failure::Config(e.to_string()))
}

fn grid_from(cfg: &GridConfig) -> Result<Grid1D, Failure> {
    Grid1D::new(cfg.half_width, cfg.n).map_err(|e| {
        Failure::Config(format!(
            "bad grid (half_width {}, n {}): {e}",
            cfg.half_width, cfg.n
        ))
    })
}

#[derive(Serialize)]
struct ClosedFormComparison {
    energy: f64,
    relative_gap: f64,
}

#[derive(Serialize)]
struct SolveArtifact<'a> {
    config: &'a RunConfig,
    energy: EnergySplit,
    multiplier: f64,
    iterations: usize,
    converged: bool,
    closed_form: ClosedFormComparison,
}

/// Minimize the pinned quartic model and compare with the closed form.
pub fn solve(cfg: &RunConfig) -> Result<(), Failure> {
    let (alpha, _) = cfg.params();
    if alpha == 0.0 && !cfg.delta_well.unwrap_or(false) {
        return Err(Failure::Config(
            "alpha = 0 is the pure point-well model; pass --delta-well \
             (config key \"delta_well\") to run it"
                .into(),
        ));
    }
    let p = params_from(cfg)?;
    let grid_cfg = cfg.grid.unwrap_or(GridConfig {
        half_width: 160.0 / (p.alpha + 2.0 * p.beta),
        n: 8193,
    });
    let grid = grid_from(&grid_cfg)?;
    let spec = FunctionalSpec::pinned_quartic(grid, p);
    let report =
        minimize(&spec, &cfg.solve_options()).map_err(|e| Failure::Config(e.to_string()))?;

    let closed = pekar_energy_closed(p);
    let artifact = SolveArtifact {
        config: cfg,
        energy: report.energy,
        multiplier: report.multiplier,
        iterations: report.iterations,
        converged: report.converged,
        closed_form: ClosedFormComparison {
            energy: closed,
            relative_gap: (report.energy.total - closed).abs() / closed.abs(),
        },
    };

    let base = cfg.output_base("solve");
    let format = cfg.format();
    if format != OutputFormat::Csv {
        write_json(&format!("{base}.json"), &artifact)?;
    }
    if format != OutputFormat::Json {
        let reference: Box<dyn Fn(f64) -> f64> = if p.alpha > 0.0 {
            let sol = sech_solution(p).expect("alpha > 0 here");
            Box::new(move |x| sol.phi0(x))
        } else {
            Box::new(move |x| phi0_limit_alpha0(p.beta, x))
        };
        let mut csv = Csv::new(&["x", "psi", "phi0"]);
        for (i, &v) in report.minimizer.values().iter().enumerate() {
            let x = grid.node(i);
            csv.row(&[x, v, reference(x)]);
        }
        csv.write(&format!("{base}.csv"))?;
    }

    println!(
        "solve: energy {} (closed form {}), converged {}",
        num(report.energy.total),
        num(closed),
        report.converged
    );
    if !report.converged {
        return Err(Failure::NonConvergence(format!(
            "solver stopped after {} iterations without meeting tolerances \
             (artifacts at {base}.*)",
            report.iterations
        )));
    }
    Ok(())
}

/// Tabulate the averaged potential, its envelope, and the Coulomb
/// reference, with the window constants and identity residuals as footer.
pub fn potential(cfg: &RunConfig) -> Result<(), Failure> {
    let b = cfg
        .field
        .ok_or_else(|| Failure::Config("potential needs a field value (--field)".into()))?;
    if !(b.is_finite() && b > std::f64::consts::E) {
        return Err(Failure::Config(format!(
            "potential needs a field above e, got {b}"
        )));
    }
    let grid_cfg = cfg.grid.unwrap_or(GridConfig {
        half_width: 10.0,
        n: 2001,
    });
    let grid = grid_from(&grid_cfg)?;
    let windows = cfg.windows.clone().unwrap_or_else(|| vec![0.1, 1.0]);
    if windows.iter().any(|&l| !(l.is_finite() && l > 0.0)) {
        return Err(Failure::Config(format!(
            "window half-widths must be positive, got {windows:?}"
        )));
    }

    let mut csv = Csv::new(&["x", "v_upper", "v_lower", "coulomb"]);
    for x in grid.nodes() {
        let coulomb = if x == 0.0 { f64::INFINITY } else { 1.0 / x.abs() };
        csv.row(&[x, v_upper(b, x), v_lower(b, x), coulomb]);
    }
    let mu = effective_strength(b);
    for &l in &windows {
        let g = g_const(b, l);
        let d = d_const(b, l);
        let upper_residual = (2.0 * integrated_upper(b, 0.0, l) - (mu + g)).abs();
        let lower_residual = (2.0 * integrated_lower(b, 0.0, l) - (mu + d)).abs();
        csv.comment(&format!(
            "window L={}: g_const={} d_const={} upper_residual={} lower_residual={}",
            num(l),
            num(g),
            num(d),
            num(upper_residual),
            num(lower_residual)
        ));
    }
    let base = cfg.output_base("potential");
    csv.write(&format!("{base}.csv"))?;
    println!(
        "potential: B {} sampled at {} nodes, {} windows",
        num(b),
        grid.len(),
        windows.len()
    );
    Ok(())
}

#[derive(Serialize)]
#[serde(untagged)]
enum PointArtifact {
    Ok(LadderPoint),
    Failed { b: f64, error: String },
}

#[derive(Serialize)]
struct TargetComparison {
    expected: f64,
    fitted: f64,
    relative_deviation: f64,
}

#[derive(Serialize)]
struct LadderArtifact<'a> {
    config: &'a RunConfig,
    note: &'static str,
    model: String,
    points: Vec<PointArtifact>,
    /// None when fewer than four rungs solved.
    fit: Option<FitResult>,
    /// Leading (ln B)² coefficient against the closed-form limit.
    leading: Option<TargetComparison>,
    /// Subleading ln B·ln ln B coefficient; reported, not gated.
    subleading: Option<TargetComparison>,
}

/// Minimize the effective model along a field ladder and fit the
/// strong-field expansion of the minima.
pub fn ladder(cfg: &RunConfig) -> Result<(), Failure> {
    let p = params_from(cfg)?;
    let model_kind = cfg.model.unwrap_or(ModelKind::Polaron);
    let model = match model_kind {
        ModelKind::Polaron => LadderModel::Polaron,
        ModelKind::Hydrogenic => LadderModel::Hydrogenic,
    };
    let fields = cfg
        .fields
        .clone()
        .unwrap_or_else(|| vec![1e6, 1e9, 1e12, 1e18, 1e24, 1e36]);
    if fields.len() < 4 {
        return Err(Failure::Config(format!(
            "the expansion fit needs at least 4 fields, got {} (underdetermined)",
            fields.len()
        )));
    }
    let spec =
        LadderSpec::new(fields, model, p).map_err(|e| Failure::Config(e.to_string()))?;
    let outcomes = ladder_energies(&spec);

    let mut csv = Csv::new(&[
        "b",
        "ln_b",
        "mu",
        "e_eff",
        "e_eff_over_mu_sq",
        "trial_bound",
        "status",
    ]);
    csv.comment(SURROGATE_NOTE);
    let mut points = Vec::new();
    let mut fit_data = Vec::new();
    for o in outcomes {
        match o.result {
            Ok(pt) => {
                let status = if pt.converged { "ok" } else { "unconverged" };
                csv.row_with_status(
                    &[pt.b, pt.b.ln(), pt.mu, pt.e_eff, pt.scaled, pt.trial_value],
                    status,
                );
                if pt.converged {
                    fit_data.push((pt.b, pt.e_eff));
                }
                points.push(PointArtifact::Ok(pt));
            }
            Err(e) => {
                csv.row_with_status(
                    &[o.b, o.b.ln(), f64::NAN, f64::NAN, f64::NAN, f64::NAN],
                    "failed",
                );
                csv.comment(&format!("field {}: {e}", num(o.b)));
                points.push(PointArtifact::Failed {
                    b: o.b,
                    error: e.to_string(),
                });
            }
        }
    }

    let a_expected = pekar_energy_closed(spec.effective_params());
    let b_expected = -4.0 * a_expected;
    let fit = if fit_data.len() >= 4 {
        Some(fit_expansion(&fit_data).map_err(|e| Failure::Config(e.to_string()))?)
    } else {
        None
    };
    let artifact = LadderArtifact {
        config: cfg,
        note: SURROGATE_NOTE,
        model: model_kind.to_string(),
        points,
        fit,
        leading: fit.map(|f| TargetComparison {
            expected: a_expected,
            fitted: f.a,
            relative_deviation: ((f.a - a_expected) / a_expected).abs(),
        }),
        subleading: fit.map(|f| TargetComparison {
            expected: b_expected,
            fitted: f.b,
            relative_deviation: ((f.b - b_expected) / b_expected).abs(),
        }),
    };

    let base = cfg.output_base("ladder");
    let format = cfg.format();
    if format != OutputFormat::Json {
        csv.write(&format!("{base}.csv"))?;
    }
    if format != OutputFormat::Csv {
        write_json(&format!("{base}.json"), &artifact)?;
    }

    match &artifact.fit {
        Some(f) => println!(
            "ladder ({model_kind}): {} of {} rungs solved, leading coefficient {} \
             (expected {})",
            fit_data.len(),
            spec.fields().len(),
            num(f.a),
            num(a_expected)
        ),
        None => println!(
            "ladder ({model_kind}): {} of {} rungs solved, fit skipped",
            fit_data.len(),
            spec.fields().len()
        ),
    }
    if fit_data.len() < 4 {
        return Err(Failure::NonConvergence(format!(
            "only {} of {} ladder rungs solved; expansion fit needs 4 \
             (artifacts at {base}.*)",
            fit_data.len(),
            spec.fields().len()
        )));
    }
    Ok(())
}

#[derive(Serialize)]
struct PerturbArtifact<'a> {
    config: &'a RunConfig,
    note: &'static str,
    epsilons: Vec<f64>,
    left_secants: Vec<f64>,
    right_secants: Vec<f64>,
    /// The closed-form pairing −∫W·φ₀², the common limit of the secants.
    target: f64,
    sandwich_ok: bool,
}

/// Run the ε-secant derivative experiment for a point perturbation W.
pub fn perturb(cfg: &RunConfig) -> Result<(), Failure> {
    let p = params_from(cfg)?;
    if p.alpha <= 0.0 {
        return Err(Failure::Config(
            "perturb needs alpha > 0; the secants target the closed-form profile".into(),
        ));
    }
    let atoms = cfg.atoms.clone().unwrap_or_else(|| vec![(0.0, 1.0)]);
    if atoms.is_empty() {
        return Err(Failure::Config("perturb needs at least one atom".into()));
    }
    if atoms.iter().any(|&(l, w)| !(l.is_finite() && w.is_finite())) {
        return Err(Failure::Config(format!("atoms must be finite, got {atoms:?}")));
    }
    let w = PerturbPotential {
        atoms,
        bounded_part: None,
    };
    let dc = derivative_check(&w, p).map_err(|e| Failure::Config(e.to_string()))?;

    let artifact = PerturbArtifact {
        config: cfg,
        note: SURROGATE_NOTE,
        epsilons: dc.epsilons.clone(),
        left_secants: dc.left.clone(),
        right_secants: dc.right.clone(),
        target: dc.target,
        sandwich_ok: dc.sandwich_ok,
    };
    let base = cfg.output_base("perturb");
    let format = cfg.format();
    if format != OutputFormat::Csv {
        write_json(&format!("{base}.json"), &artifact)?;
    }
    if format != OutputFormat::Json {
        let mut csv = Csv::new(&["epsilon", "left_secant", "right_secant"]);
        csv.comment(SURROGATE_NOTE);
        csv.comment(&format!("target={}", num(dc.target)));
        for (i, &eps) in dc.epsilons.iter().enumerate() {
            csv.row(&[eps, dc.left[i], dc.right[i]]);
        }
        csv.write(&format!("{base}.csv"))?;
    }
    println!(
        "perturb: target {} final secants ({}, {}), sandwich {}",
        num(dc.target),
        num(*dc.left.last().expect("fixed ladder")),
        num(*dc.right.last().expect("fixed ladder")),
        dc.sandwich_ok
    );
    Ok(())
}

#[derive(Serialize)]
struct VerifyArtifact<'a> {
    config: &'a RunConfig,
    checks: Vec<CheckResult>,
    passed: bool,
}

/// Run the library's invariant suite and write the report.
pub fn verify(cfg: &RunConfig, fault: Fault) -> Result<(), Failure> {
    let quick = cfg.quick.unwrap_or(false);
    let report = run_verification(quick, fault);
    let artifact = VerifyArtifact {
        config: cfg,
        checks: report.checks.clone(),
        passed: report.passed,
    };
    let base = cfg.output_base("verify");
    write_json(&format!("{base}.json"), &artifact)?;

    let failed = report.checks.iter().filter(|c| !c.passed).count();
    println!(
        "verify: {} checks, {} failed",
        report.checks.len(),
        failed
    );
    if let Some(first) = report.first_failure() {
        return Err(Failure::Verify(format!(
            "verification failed: {} ({})",
            first.name, first.detail
        )));
    }
    Ok(())
}
