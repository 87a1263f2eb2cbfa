//! End-to-end acceptance gate.
//!
//! Ten numbered criteria, each printed as one pass/fail line with its
//! measured worst case. Every tolerance is pinned here, next to the check
//! it guards. The whole gate runs as a single test so the expensive ladder
//! solves are shared between the criteria that audit them.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use pekar1d::asymptotics::{
    fit_expansion, ladder_energies, LadderModel, LadderPoint, LadderSpec,
};
use pekar1d::closedform::{el_residuals, phi0_limit_alpha0, sech_solution};
use pekar1d::effpot::{
    d_const, g_const, integrated_lower, integrated_upper, DeltaExtraction, ExtractionKind,
};
use pekar1d::landau::transverse_coulomb_average;
use pekar1d::perturbation::{density_pairing, derivative_check, e_eps, PerturbPotential};
use pekar1d::quad::integrate;
use pekar1d::verify::random_bumps;
use pekar1d::{
    effective_strength, minimize, p2, pekar_energy_closed, v_upper, FunctionalSpec, Grid1D,
    ModelParams, SolveOptions,
};

struct Outcome {
    name: &'static str,
    pass: bool,
    detail: String,
}

fn outcome(name: &'static str, pass: bool, detail: String) -> Outcome {
    Outcome { name, pass, detail }
}

/// Grid used by the closed-form comparisons: half-width 40 in the units of
/// the minimizer's decay rate (α+2β)/4, dyadic node count.
fn comparison_grid(p: ModelParams) -> Grid1D {
    Grid1D::new(160.0 / (p.alpha + 2.0 * p.beta), 8193).expect("valid acceptance grid")
}

fn l2_distance(a: &[f64], b: &[f64], h: f64) -> f64 {
    let diff: Vec<f64> = a.iter().zip(b.iter()).map(|(x, y)| x - y).collect();
    p2::mass_quadratic(h, &diff).sqrt()
}

/// 1. Minimization reproduces the closed-form energy and profile.
fn c01_closed_form_minima() -> Outcome {
    let cases = [(1.0, 1.0), (2.0, 0.5), (4.0, 1.0), (0.5, 2.0)];
    let mut worst_rel = 0.0f64;
    let mut worst_l2 = 0.0f64;
    let mut worst_secs = 0.0f64;
    let mut pass = true;
    let mut note = String::new();
    for (alpha, beta) in cases {
        let p = ModelParams::new(alpha, beta).unwrap();
        let grid = comparison_grid(p);
        let spec = FunctionalSpec::pinned_quartic(grid, p);
        let start = Instant::now();
        let report = minimize(&spec, &SolveOptions::default()).unwrap();
        let secs = start.elapsed().as_secs_f64();

        let want = pekar_energy_closed(p);
        let rel = ((report.energy.total - want) / want).abs();
        let sol = sech_solution(p).unwrap();
        let l2 = l2_distance(
            report.minimizer.values(),
            sol.sample(grid).values(),
            grid.spacing(),
        );

        worst_rel = worst_rel.max(rel);
        worst_l2 = worst_l2.max(l2);
        worst_secs = worst_secs.max(secs);
        if !(report.converged && rel <= 1e-6 && l2 <= 1e-4 && secs <= 10.0) {
            pass = false;
            note = format!(
                " [failed at alpha={alpha} beta={beta}: rel {rel:.2e}, L2 {l2:.2e}, \
                 {secs:.1} s, converged {}]",
                report.converged
            );
        }
    }
    outcome(
        "closed-form minima",
        pass,
        format!(
            "worst energy rel {worst_rel:.2e} (tol 1e-6), worst profile L2 {worst_l2:.2e} \
             (tol 1e-4), slowest case {worst_secs:.1} s (cap 10){note}"
        ),
    )
}

/// 2. Euler-Lagrange residuals of the sampled closed form shrink at second
///    order: every ratio per grid halving sits in [3.5, 4.5].
fn c02_el_residual_order() -> Outcome {
    let p = ModelParams::new(1.0, 1.0).unwrap();
    let sol = sech_solution(p).unwrap();
    let mut rows = Vec::new();
    for n in [2049usize, 4097, 8193] {
        let grid = Grid1D::new(40.0, n).unwrap();
        let r = el_residuals(&sol.sample(grid), p, sol.lambda);
        rows.push([r.interior, r.jump, r.first_integral]);
    }
    let mut pass = true;
    let mut ratios = Vec::new();
    for level in 0..rows.len() - 1 {
        for comp in 0..3 {
            let ratio = rows[level][comp] / rows[level + 1][comp];
            ratios.push(format!("{ratio:.2}"));
            if !(3.5..=4.5).contains(&ratio) {
                pass = false;
            }
        }
    }
    outcome(
        "EL residual order",
        pass,
        format!(
            "halving ratios (interior, jump, first integral) x2 levels: {} (window [3.5, 4.5])",
            ratios.join(", ")
        ),
    )
}

/// 3. The alpha = 0 path collapses to the point-well problem: energy
///    −β²/4 and the exponential profile.
fn c03_hydrogenic_limit() -> Outcome {
    let mut worst_rel = 0.0f64;
    let mut worst_l2 = 0.0f64;
    let mut pass = true;
    for beta in [0.5, 1.0, 2.0] {
        let p = ModelParams::new(0.0, beta).unwrap();
        let grid = comparison_grid(p);
        let spec = FunctionalSpec::pinned_quartic(grid, p);
        let report = minimize(&spec, &SolveOptions::default()).unwrap();

        let want = -beta * beta / 4.0;
        let rel = ((report.energy.total - want) / want).abs();
        let exact: Vec<f64> = grid
            .nodes()
            .iter()
            .map(|&x| phi0_limit_alpha0(beta, x))
            .collect();
        let l2 = l2_distance(report.minimizer.values(), &exact, grid.spacing());

        worst_rel = worst_rel.max(rel);
        worst_l2 = worst_l2.max(l2);
        if !(report.converged && rel <= 1e-6 && l2 <= 1e-4) {
            pass = false;
        }
    }
    outcome(
        "hydrogenic limit",
        pass,
        format!(
            "worst energy rel {worst_rel:.2e} (tol 1e-6), worst profile L2 {worst_l2:.2e} \
             (tol 1e-4) over beta in {{0.5, 1, 2}}"
        ),
    )
}

/// 4. Quartic normalization of the closed form at alpha = beta = 1:
///    ∫φ₀⁴ = 1/3 by adaptive quadrature.
fn c04_quartic_normalization() -> Outcome {
    let sol = sech_solution(ModelParams::new(1.0, 1.0).unwrap()).unwrap();
    // Even integrand with a kink at 0; integrating the half line keeps the
    // kink at an endpoint. The tail beyond 30 is below e^{-90}.
    let q = 2.0 * integrate(|x| sol.phi0(x).powi(4), 0.0, 30.0, 1e-13);
    let err = (q - 1.0 / 3.0).abs();
    outcome(
        "quartic normalization",
        err <= 1e-8,
        format!("|int phi0^4 - 1/3| = {err:.2e} (tol 1e-8)"),
    )
}

/// 5. Potential oracles: the origin value in closed form, the two window
///    identities, and the 2D Landau-average quadrature.
fn c05_potential_oracles() -> Outcome {
    let mut pass = true;
    let mut worst_origin = 0.0f64;
    for b in [2.0, 1e6, 1e20] {
        let want = (std::f64::consts::PI * b / 2.0).sqrt();
        let rel = ((v_upper(b, 0.0) - want) / want).abs();
        worst_origin = worst_origin.max(rel);
        if rel > 1e-10 {
            pass = false;
        }
    }

    let mut worst_window = 0.0f64;
    for b in [10.0, 1e6, 1e20] {
        let mu = effective_strength(b);
        for l in [0.1, 1.0, 5.0] {
            let upper = 2.0 * integrated_upper(b, 0.0, l) - (mu + g_const(b, l));
            let lower = 2.0 * integrated_lower(b, 0.0, l) - (mu + d_const(b, l));
            for r in [upper.abs(), lower.abs()] {
                let rel = r / (1.0 + mu.abs());
                worst_window = worst_window.max(rel);
                if rel > 1e-7 {
                    pass = false;
                }
            }
        }
    }

    let mut worst_landau = 0.0f64;
    for (b, x3) in [
        (4.0, 0.0),
        (4.0, 0.7),
        (100.0, 0.5),
        (100.0, 2.0),
        (1e4, 0.1),
        (1e4, 1.0),
    ] {
        let want = v_upper(b, x3);
        let rel = (transverse_coulomb_average(b, x3) - want).abs() / (1.0 + want);
        worst_landau = worst_landau.max(rel);
        if rel > 1e-8 {
            pass = false;
        }
    }

    outcome(
        "potential oracles",
        pass,
        format!(
            "origin rel {worst_origin:.2e} (tol 1e-10), window identity rel {worst_window:.2e} \
             (tol 1e-7), Landau average rel {worst_landau:.2e} (tol 1e-8)"
        ),
    )
}

/// 6. Delta-extraction inequality sweep: 100 random bump profiles against
///    every field, window, and inequality kind, zero violations.
fn c06_window_inequality_sweep() -> Outcome {
    let start = Instant::now();
    let grid = Grid1D::new(32.0, 32769).unwrap();
    let fields = [1e3, 1e8, 1e20];
    let kinds = [
        ExtractionKind::Upper,
        ExtractionKind::Lower,
        ExtractionKind::Convolution,
    ];
    // Tables cost thousands of quadratures each; build the nine once and
    // sweep every profile against them.
    let tables: Vec<Vec<DeltaExtraction>> = fields
        .iter()
        .map(|&b| kinds.iter().map(|&k| DeltaExtraction::new(b, grid, k)).collect())
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(20260814);
    let profiles: Vec<_> = (0..100).map(|_| random_bumps(grid, &mut rng)).collect();

    let mut checks = 0usize;
    let mut violations = 0usize;
    let mut min_margin = f64::INFINITY;
    for (bi, &b) in fields.iter().enumerate() {
        let windows = [0.05, 1.0 / b.ln(), 1.0];
        for phi in &profiles {
            for table in &tables[bi] {
                for &l in &windows {
                    let c = table.check(phi, l).unwrap();
                    checks += 1;
                    min_margin = min_margin.min((c.rhs - c.lhs) / c.rhs);
                    if !c.holds {
                        violations += 1;
                    }
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        "window inequality sweep",
        violations == 0 && secs <= 60.0,
        format!(
            "{checks} checks, {violations} violations, smallest margin {min_margin:.3} of rhs, \
             {secs:.1} s (cap 60)"
        ),
    )
}

fn ladder_points(model: LadderModel) -> Vec<LadderPoint> {
    let fields = vec![1e6, 1e9, 1e12, 1e18, 1e24, 1e36];
    let spec = LadderSpec::new(fields, model, ModelParams::new(1.0, 1.0).unwrap()).unwrap();
    ladder_energies(&spec)
        .into_iter()
        .map(|o| o.result.expect("ladder rung solves"))
        .collect()
}

/// 7. Strong-field ladder fit: the leading coefficient lands within 3% of
///    the closed-form limit for both models; the subleading coefficient is
///    reported against its expected value but not gated.
fn c07_ladder_expansion_fit(
    polaron: &[LadderPoint],
    hydrogenic: &[LadderPoint],
) -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, points, a_want, b_want) in [
        ("polaron", polaron, -19.0 / 48.0, 4.0 * 19.0 / 48.0),
        ("hydrogenic", hydrogenic, -0.25, 1.0),
    ] {
        if points.iter().any(|pt| !pt.converged) {
            pass = false;
        }
        let data: Vec<(f64, f64)> = points.iter().map(|pt| (pt.b, pt.e_eff)).collect();
        let fit = fit_expansion(&data).unwrap();
        let a_rel = ((fit.a - a_want) / a_want).abs();
        let b_rel = ((fit.b - b_want) / b_want).abs();
        if a_rel > 0.03 {
            pass = false;
        }
        parts.push(format!(
            "{name} a = {:.5} vs {a_want:.5} (rel {a_rel:.1e}, tol 3e-2), \
             b = {:.3} vs {b_want:.3} (rel {b_rel:.1e}, logged only)",
            fit.a, fit.b
        ));
    }
    outcome("ladder expansion fit", pass, parts.join("; "))
}

/// 8. Every ladder rung is sandwiched: the scaled trial state stays above
///    the minimum and the comparison window contains the closed-form target.
fn c08_trial_and_bracket_audit(
    polaron: &[LadderPoint],
    hydrogenic: &[LadderPoint],
) -> Outcome {
    let mut violations = 0usize;
    let mut worst_gap = f64::INFINITY;
    let mut worst_use = 0.0f64;
    for pt in polaron.iter().chain(hydrogenic) {
        let slack = 1e-10 * (1.0 + pt.e_eff.abs());
        let gap = pt.trial_value - pt.e_eff;
        let used = (pt.e_eff - pt.target).abs() / pt.bracket;
        worst_gap = worst_gap.min(gap);
        worst_use = worst_use.max(used);
        if gap < -slack || used > 1.0 {
            violations += 1;
        }
    }
    outcome(
        "trial and bracket audit",
        violations == 0,
        format!(
            "12 rungs, {violations} violations; smallest trial-minus-minimum gap {worst_gap:.2e}, \
             largest bracket use {worst_use:.2} of allowance"
        ),
    )
}

/// 9. Perturbation secants: one-sided difference quotients converge to the
///    density pairing −5/8 at first order, and the atom family matches the
///    closed form with the well deepened by ε.
fn c09_derivative_secants() -> Outcome {
    let atom = PerturbPotential {
        atoms: vec![(0.0, 1.0)],
        bounded_part: None,
    };
    let p = ModelParams::new(1.0, 1.0).unwrap();
    let dc = derivative_check(&atom, p).unwrap();

    let want = -5.0 / 8.0;
    let target_err = (dc.target - want).abs();
    let mut pass = target_err <= 1e-6 && dc.sandwich_ok;

    // Observed order across the ε ladder (one decade per rung): the slope
    // of log error against log ε must stay near 1.
    let mut orders = Vec::new();
    for side in [&dc.left, &dc.right] {
        let first = (side[0] - want).abs();
        let last = (side[side.len() - 1] - want).abs();
        let decades = (side.len() - 1) as f64;
        let order = (first / last).log10() / decades;
        orders.push(format!("{order:.2}"));
        if order < 0.9 {
            pass = false;
        }
    }

    let mut worst_family = 0.0f64;
    let grid = comparison_grid(p);
    for eps in [1e-2, -1e-2] {
        let e = e_eps(eps, &atom, p, grid).unwrap();
        let want_e = pekar_energy_closed(ModelParams::new(1.0, 1.0 + eps).unwrap());
        let rel = ((e - want_e) / want_e).abs();
        worst_family = worst_family.max(rel);
        if rel > 1e-6 {
            pass = false;
        }
    }

    outcome(
        "derivative secants",
        pass,
        format!(
            "pairing vs -5/8 err {target_err:.2e} (tol 1e-6), orders (left, right) {} \
             (floor 0.9), sandwich {}, deepened-well family rel {worst_family:.2e} (tol 1e-6)",
            orders.join(", "),
            dc.sandwich_ok
        ),
    )
}

/// 10. The minimizer's rescaled density pairs the origin atom toward 5/8
///     and approaches the closed-form profile in L¹ along the ladder.
fn c10_density_pairing(polaron: &[LadderPoint]) -> Outcome {
    let want = 5.0 / 8.0;
    let mut pass = true;

    let gaps: Vec<f64> = polaron.iter().map(|pt| (pt.pairing - want).abs()).collect();
    if gaps.windows(2).any(|w| w[1] >= w[0]) {
        pass = false;
    }
    let l1: Vec<f64> = polaron.iter().map(|pt| pt.profile_l1).collect();
    if l1.windows(2).any(|w| w[1] >= w[0]) {
        pass = false;
    }
    let final_l1 = *l1.last().unwrap();
    if final_l1 > 0.05 {
        pass = false;
    }

    // The standalone pairing entry point repeats one rung bit for bit.
    let atom = PerturbPotential {
        atoms: vec![(0.0, 1.0)],
        bounded_part: None,
    };
    let p = ModelParams::new(1.0, 1.0).unwrap();
    let dp = density_pairing(1e12, &atom, p).unwrap();
    let rung = polaron.iter().find(|pt| pt.b == 1e12).unwrap().pairing;
    let dp_rel = ((dp - rung) / rung).abs();
    if dp_rel > 1e-12 {
        pass = false;
    }

    outcome(
        "density pairing",
        pass,
        format!(
            "pairing gap to 5/8: {:.3} -> {:.4} (monotone), profile L1 {:.3} -> {:.4} \
             (monotone, final tol 0.05), entry point rel {dp_rel:.1e}",
            gaps[0],
            gaps[gaps.len() - 1],
            l1[0],
            final_l1
        ),
    )
}

#[test]
fn acceptance_gate() {
    let mut results = Vec::new();
    results.push(c01_closed_form_minima());
    results.push(c02_el_residual_order());
    results.push(c03_hydrogenic_limit());
    results.push(c04_quartic_normalization());
    results.push(c05_potential_oracles());
    results.push(c06_window_inequality_sweep());

    let polaron = ladder_points(LadderModel::Polaron);
    let hydrogenic = ladder_points(LadderModel::Hydrogenic);
    results.push(c07_ladder_expansion_fit(&polaron, &hydrogenic));
    results.push(c08_trial_and_bracket_audit(&polaron, &hydrogenic));
    results.push(c09_derivative_secants());
    results.push(c10_density_pairing(&polaron));

    let mut failed = Vec::new();
    for (i, r) in results.iter().enumerate() {
        let tag = if r.pass { "pass" } else { "FAIL" };
        println!("criterion {:02} {tag}  {}: {}", i + 1, r.name, r.detail);
        if !r.pass {
            failed.push(format!("{:02} {}", i + 1, r.name));
        }
    }
    assert!(failed.is_empty(), "failed criteria: {}", failed.join(", "));
}
