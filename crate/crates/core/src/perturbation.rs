//! Linear perturbations of the pinned model and density extraction.
//!
//! Perturbing the energy by −ε∫W|φ|² and watching the minimum move reads
//! off the minimizer's density: the map ε ↦ 𝔢_ε is concave, differentiable
//! at 0, and its derivative there equals −∫W·φ₀². The same pairing applied
//! to strong-field minimizers (scaled by μ(B)) measures how the effective
//! density approaches φ₀² along a field ladder. The surrogate density used
//! there comes from the classical lowest-Landau functional, not the full
//! field-theoretic ground state.

use rayon::prelude::*;

use crate::asymptotics::{classical_1d_spec, GridPolicy};
use crate::closedform::sech_solution;
use crate::effpot::effective_strength;
use crate::error::{LadderError, ParamError, PerturbError, SolveError};
use crate::functional::{FunctionalSpec, ModelParams};
use crate::grid::{Grid1D, GridFn};
use crate::p2;
use crate::solver::{minimize, SeedProfile, SolveOptions};

/// Fixed ε ladder for secant studies; below 1e−5 the solver tolerance
/// drowns the O(ε) secant signal.
pub const EPS_LADDER: [f64; 3] = [1e-2, 1e-3, 1e-4];

/// A perturbing potential W = (point masses) + (bounded part).
#[derive(Debug, Clone, Default)]
pub struct PerturbPotential {
    /// (location, weight) point masses.
    pub atoms: Vec<(f64, f64)>,
    /// Bounded part sampled on its own grid; resampled onto solve grids
    /// by linear interpolation with edge clamping.
    pub bounded_part: Option<GridFn>,
}

impl PerturbPotential {
    /// Total mass Σ|w| of the point part.
    pub fn atom_mass(&self) -> f64 {
        self.atoms.iter().map(|&(_, w)| w.abs()).sum()
    }

    /// Sup norm of the bounded part (0 when absent).
    pub fn sup_bound(&self) -> f64 {
        self.bounded_part
            .as_ref()
            .map(|f| f.values().iter().fold(0.0f64, |m, &v| m.max(v.abs())))
            .unwrap_or(0.0)
    }
}

/// Record of one point mass moved onto the grid.
#[derive(Debug, Clone, Copy)]
pub struct SnappedAtom {
    pub requested: f64,
    pub node: usize,
    /// |requested − node location|; O(spacing·‖φ′‖∞) energy error.
    pub snap_distance: f64,
}

/// A solved perturbed problem.
#[derive(Debug, Clone)]
pub struct PerturbedRun {
    pub energy: f64,
    pub minimizer: GridFn,
    pub converged: bool,
    pub snapped_atoms: Vec<SnappedAtom>,
}

fn guard_coercivity(eps: f64, w: &PerturbPotential, p: ModelParams) -> Result<(), PerturbError> {
    let atom_mass = w.atom_mass();
    let sup_bound = w.sup_bound();
    let budget = 0.5 * p.alpha + p.beta;
    if eps.abs() * (atom_mass + sup_bound) > budget {
        return Err(PerturbError::CoercivityGuard {
            eps,
            atom_mass,
            sup_bound,
            budget,
        });
    }
    Ok(())
}

/// Assemble the perturbed functional ℰ₀ − ε∫W|φ|² on the grid: W's atoms
/// become delta atoms of weight ε·w snapped to their nearest nodes, the
/// bounded part becomes a sampled potential scaled by ε.
pub fn perturbed_spec(
    eps: f64,
    w: &PerturbPotential,
    p: ModelParams,
    grid: Grid1D,
) -> Result<(FunctionalSpec, Vec<SnappedAtom>), PerturbError> {
    assert!(eps.is_finite(), "need finite eps, got {eps}");
    guard_coercivity(eps, w, p)?;
    let mut spec = FunctionalSpec::pinned_quartic(grid, p);
    let h = grid.spacing();
    let mid = grid.mid() as f64;
    let mut snapped = Vec::with_capacity(w.atoms.len());
    for &(loc, weight) in &w.atoms {
        assert!(
            loc.is_finite() && weight.is_finite(),
            "need finite atoms, got ({loc}, {weight})"
        );
        let node = (loc / h + mid).round().clamp(0.0, (grid.len() - 1) as f64) as usize;
        let snapped_loc = grid.node(node);
        snapped.push(SnappedAtom {
            requested: loc,
            node,
            snap_distance: (loc - snapped_loc).abs(),
        });
        spec = spec.with_delta_atom(snapped_loc, eps * weight)?;
    }
    if let Some(omega) = &w.bounded_part {
        let sampled: Vec<f64> = if omega.grid() == grid {
            omega.values().iter().map(|&v| eps * v).collect()
        } else {
            (0..grid.len())
                .map(|i| eps * omega.sample_at(grid.node(i)))
                .collect()
        };
        let sampled = GridFn::new(grid, sampled)?;
        spec = spec.with_sampled_potential(sampled, -1.0)?;
    }
    Ok((spec, snapped))
}

/// Minimize the perturbed functional.
pub fn perturbed_minimize(
    eps: f64,
    w: &PerturbPotential,
    p: ModelParams,
    grid: Grid1D,
    opts: &SolveOptions,
) -> Result<PerturbedRun, PerturbError> {
    let (spec, snapped_atoms) = perturbed_spec(eps, w, p, grid)?;
    let report = minimize(&spec, opts)?;
    Ok(PerturbedRun {
        energy: report.energy.total,
        minimizer: report.minimizer,
        converged: report.converged,
        snapped_atoms,
    })
}

/// The perturbed minimum 𝔢_ε.
pub fn e_eps(
    eps: f64,
    w: &PerturbPotential,
    p: ModelParams,
    grid: Grid1D,
) -> Result<f64, PerturbError> {
    Ok(perturbed_minimize(eps, w, p, grid, &SolveOptions::default())?.energy)
}

/// ∫W·φ² for a sampled φ and its grid: snapped nodal reads for atoms,
/// trapezoid pairing for the bounded part.
pub fn pairing_with_state(w: &PerturbPotential, phi: &GridFn) -> f64 {
    let grid = phi.grid();
    let mut total = 0.0;
    for &(loc, weight) in &w.atoms {
        let v = phi.sample_at(loc);
        total += weight * v * v;
    }
    if let Some(omega) = &w.bounded_part {
        let wt = grid.trapezoid_weights();
        for i in 0..grid.len() {
            let v = phi.values()[i];
            total += wt[i] * omega.sample_at(grid.node(i)) * v * v;
        }
    }
    total
}

/// ∫W·φ₀² against the closed-form profile (atoms exactly, bounded part by
/// trapezoid on its own grid).
pub fn pairing_with_closed_form(
    w: &PerturbPotential,
    p: ModelParams,
) -> Result<f64, ParamError> {
    let sol = sech_solution(p)?;
    let mut total = 0.0;
    for &(loc, weight) in &w.atoms {
        let v = sol.phi0(loc);
        total += weight * v * v;
    }
    if let Some(omega) = &w.bounded_part {
        // Simpson weights: the node count is odd by construction and the
        // integrand is smooth, so this keeps the target well below the
        // secant errors it is compared against.
        let grid = omega.grid();
        let h = grid.spacing();
        for i in 0..grid.len() {
            let s = if i == 0 || i == grid.len() - 1 {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            let v = sol.phi0(grid.node(i));
            total += (s * h / 3.0) * omega.values()[i] * v * v;
        }
    }
    Ok(total)
}

/// Secant study of ε ↦ 𝔢_ε around 0.
#[derive(Debug, Clone)]
pub struct DerivativeCheck {
    pub epsilons: Vec<f64>,
    /// (𝔢₀ − 𝔢_{−ε})/ε per ladder entry; approaches the derivative from
    /// above by concavity.
    pub left: Vec<f64>,
    /// (𝔢_ε − 𝔢₀)/ε per ladder entry; approaches from below.
    pub right: Vec<f64>,
    /// −∫W·φ₀², the closed-form derivative at 0.
    pub target: f64,
    /// Whether every ε > 0 run satisfied the one-sided sandwich
    /// −∫W|φ_ε|² − ε ≤ (𝔢_ε − 𝔢₀)/ε ≤ −∫W·φ₀².
    pub sandwich_ok: bool,
}

/// Run the ε ladder on both sides of 0 and compare the secants to the
/// density pairing −∫W·φ₀².
///
/// All minimizations share one grid, so the discretization bias cancels in
/// the energy differences.
///
/// # Panics
/// If `p.alpha <= 0` (the closed-form profile is the sech solution).
pub fn derivative_check(
    w: &PerturbPotential,
    p: ModelParams,
) -> Result<DerivativeCheck, PerturbError> {
    assert!(p.alpha > 0.0, "need alpha > 0, got {}", p.alpha);
    let grid = Grid1D::new(160.0 / (p.alpha + 2.0 * p.beta), 8193)
        .map_err(SolveError::Grid)
        .map_err(PerturbError::Solve)?;

    let mut eps_all = vec![0.0];
    for &e in &EPS_LADDER {
        eps_all.push(e);
        eps_all.push(-e);
    }
    let runs: Vec<PerturbedRun> = eps_all
        .par_iter()
        .map(|&eps| perturbed_minimize(eps, w, p, grid, &SolveOptions::default()))
        .collect::<Result<Vec<_>, _>>()?;
    let e0 = runs[0].energy;

    let target = -pairing_with_closed_form(w, p).expect("alpha > 0 checked above");
    let mut left = Vec::with_capacity(EPS_LADDER.len());
    let mut right = Vec::with_capacity(EPS_LADDER.len());
    let mut sandwich_ok = true;
    for (k, &eps) in EPS_LADDER.iter().enumerate() {
        let plus = &runs[1 + 2 * k];
        let minus = &runs[2 + 2 * k];
        let r = (plus.energy - e0) / eps;
        let l = (e0 - minus.energy) / eps;
        right.push(r);
        left.push(l);
        let lower = -pairing_with_state(w, &plus.minimizer) - eps;
        let tol = 1e-8 * (1.0 + target.abs());
        if !(r >= lower - tol && r <= target + tol) {
            sandwich_ok = false;
        }
    }
    Ok(DerivativeCheck {
        epsilons: EPS_LADDER.to_vec(),
        left,
        right,
        target,
        sandwich_ok,
    })
}

/// Pair W against a strong-field minimizer scaled back to unit size:
/// (1/s)∫W(x)·ρ(x/s)dx with s the density scale (μ(B) for ladder states).
pub fn pairing_with_scaled_density(w: &PerturbPotential, psi: &GridFn, scale: f64) -> f64 {
    assert!(scale > 0.0 && scale.is_finite(), "need scale > 0, got {scale}");
    let grid = psi.grid();
    let rho = GridFn::new(
        grid,
        psi.values().iter().map(|&v| v * v).collect(),
    )
    .expect("squares of finite values are finite");
    let mut total = 0.0;
    for &(loc, weight) in &w.atoms {
        total += weight * rho.sample_at(loc / scale) / scale;
    }
    if let Some(omega) = &w.bounded_part {
        // Element-level quadrature keeps this consistent with the unit mass
        // of the minimizer: a constant window pairs to exactly 1.
        total += p2::weighted_square_integral(grid.spacing(), grid.node(0), psi.values(), |x| {
            omega.sample_at(scale * x)
        });
    }
    total
}

/// Solve the effective functional at field B and pair W against the
/// resulting density at scale μ(B).
pub fn density_pairing(
    b: f64,
    w: &PerturbPotential,
    p: ModelParams,
) -> Result<f64, LadderError> {
    let mu = effective_strength(b);
    let grid = GridPolicy::default()
        .grid_for(b)
        .map_err(crate::error::EffPotError::Grid)
        .map_err(LadderError::EffPot)?;
    let spec = classical_1d_spec(b, p, grid)?;
    let width = 4.0 / (mu * (p.alpha + 2.0 * p.beta));
    let seed = GridFn::from_fn(grid, |x| (-(x / width) * (x / width)).exp())
        .map_err(SolveError::Grid)?;
    let opts = SolveOptions {
        seed_profile: SeedProfile::Custom(seed),
        ..SolveOptions::default()
    };
    let report = minimize(&spec, &opts)?;
    Ok(pairing_with_scaled_density(w, &report.minimizer, mu))
}
