//! Projected-gradient minimization over the unit L² sphere.
//!
//! The energy is minimized over normalized grid functions by descending
//! along the constraint-projected gradient, preconditioned by a lumped
//! Helmholtz operator, with a monotone backtracking line search. Iterates
//! are replaced by their absolute values each step; for energies in this
//! crate that never raises the energy and it removes sign-flip metastable
//! states. The delta term makes the Hessian grow like 1/spacing, so steps
//! adapt rather than staying fixed.

use crate::closedform;
use crate::error::{GridError, SolveError};
use crate::functional::{EnergySplit, FunctionalSpec, ModelParams};
use crate::grid::{Grid1D, GridFn};
use crate::p2;

/// Starting profile for [`minimize`]; all profiles are normalized before use.
#[derive(Debug, Clone)]
pub enum SeedProfile {
    /// exp(−(x/width)²) with width 2/(α+2β) read off the functional's
    /// coefficients (α = 2·quartic, β = summed atom weights), clamped to
    /// the resolvable range when those coefficients vanish.
    Gaussian,
    /// The closed-form sech profile for the functional's coefficients; falls
    /// back to the exponential when the quartic term is absent.
    Sech,
    /// exp(−(α+2β)|x|/4), the decay rate of the sech profile.
    Exponential,
    /// Caller-supplied profile on the functional's grid.
    Custom(GridFn),
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub max_iter: usize,
    /// Stop when the energy decrease of an accepted step falls below
    /// tol_energy·(1 + |E|) with the gradient test also met.
    pub tol_energy: f64,
    /// Projected-gradient norm threshold, relative to 1 + |E|. The norm is
    /// taken in the preconditioner metric, so pg²/2 estimates the energy
    /// decrease still available to a single step.
    pub tol_grad: f64,
    /// First trial step, as a bound on the max nodal change.
    pub step_init: f64,
    /// Backtracking factor in (0, 1).
    pub step_shrink: f64,
    pub seed_profile: SeedProfile,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            max_iter: 600,
            tol_energy: 1e-12,
            tol_grad: 1e-6,
            step_init: 0.1,
            step_shrink: 0.5,
            seed_profile: SeedProfile::Gaussian,
        }
    }
}

/// Result of a minimization run.
#[derive(Debug, Clone)]
pub struct SolveReport {
    /// Normalized, nonnegative final iterate.
    pub minimizer: GridFn,
    pub energy: EnergySplit,
    /// Constraint multiplier λ: at a minimizer the nodal gradient satisfies
    /// ∂E = −2λ·(mass matrix)·ψ, so the interior equation reads
    /// −ψ″ − αψ³ + λψ = 0.
    pub multiplier: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Energy after the seed and after every accepted step; non-increasing.
    pub energy_trace: Vec<f64>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b.iter()).map(|(&x, &y)| x * y).sum()
}

/// Solve (diag + tridiagonal with constant off-diagonal) X = rhs for two
/// right-hand sides sharing one factorization. The matrix is strictly
/// diagonally dominant here, so no pivoting is needed.
fn tridiagonal_solve_pair(
    diag: &[f64],
    off: f64,
    rhs_a: &[f64],
    rhs_b: &[f64],
) -> (Vec<f64>, Vec<f64>) {
    let n = diag.len();
    let mut pivot = vec![0.0; n];
    let mut ya = vec![0.0; n];
    let mut yb = vec![0.0; n];
    pivot[0] = diag[0];
    ya[0] = rhs_a[0];
    yb[0] = rhs_b[0];
    for i in 1..n {
        let l = off / pivot[i - 1];
        pivot[i] = diag[i] - l * off;
        ya[i] = rhs_a[i] - l * ya[i - 1];
        yb[i] = rhs_b[i] - l * yb[i - 1];
    }
    let mut xa = vec![0.0; n];
    let mut xb = vec![0.0; n];
    xa[n - 1] = ya[n - 1] / pivot[n - 1];
    xb[n - 1] = yb[n - 1] / pivot[n - 1];
    for i in (0..n - 1).rev() {
        xa[i] = (ya[i] - off * xa[i + 1]) / pivot[i];
        xb[i] = (yb[i] - off * xb[i + 1]) / pivot[i];
    }
    (xa, xb)
}

/// Read rough (α, β) off a spec's coefficients for seed shaping.
fn seed_coefficients(spec: &FunctionalSpec) -> (f64, f64) {
    let alpha = 2.0 * spec.quartic_coeff();
    let beta: f64 = spec.delta_atoms().iter().map(|&(_, w)| w.abs()).sum();
    (alpha, beta)
}

fn build_seed(spec: &FunctionalSpec, profile: &SeedProfile) -> Result<GridFn, SolveError> {
    let grid = spec.grid();
    let (alpha, beta) = seed_coefficients(spec);
    let rate = (alpha + 2.0 * beta) / 4.0;
    let raw = match profile {
        SeedProfile::Gaussian => {
            let natural = if rate > 0.0 { 1.0 / (2.0 * rate) } else { f64::INFINITY };
            let width = natural
                .min(grid.half_width() / 4.0)
                .max(4.0 * grid.spacing());
            GridFn::from_fn(grid, |x| (-(x / width) * (x / width)).exp())
                .map_err(SolveError::Grid)?
        }
        SeedProfile::Sech => {
            if alpha > 1e-12 {
                let p = ModelParams::new(alpha, beta.max(1e-12))
                    .expect("coefficients read off a valid spec");
                let sol = closedform::sech_solution(p).expect("alpha > 0 here");
                sol.sample(grid)
            } else {
                return build_seed(spec, &SeedProfile::Exponential);
            }
        }
        SeedProfile::Exponential => {
            let r = if rate > 0.0 {
                rate
            } else {
                4.0 / grid.half_width()
            };
            GridFn::from_fn(grid, |x| (-r * x.abs()).exp()).map_err(SolveError::Grid)?
        }
        SeedProfile::Custom(f) => {
            if f.grid() != grid {
                return Err(SolveError::Grid(GridError::GridMismatch));
            }
            f.clone()
        }
    };
    let folded: Vec<f64> = raw.values().iter().map(|v| v.abs()).collect();
    let folded = GridFn::new(grid, folded).map_err(SolveError::Grid)?;
    folded.normalized().map_err(|_| SolveError::DegenerateSeed)
}

/// Minimize a [`FunctionalSpec`] over normalized grid functions.
///
/// Runs at most `opts.max_iter` projected-gradient iterations; exhausting
/// them returns the partial report with `converged = false` rather than an
/// error. A non-finite energy along the way aborts with
/// [`SolveError::NonFiniteEnergy`]. Deterministic for fixed inputs; holds
/// no shared state, so concurrent calls are safe.
pub fn minimize(spec: &FunctionalSpec, opts: &SolveOptions) -> Result<SolveReport, SolveError> {
    assert!(opts.max_iter >= 1, "need max_iter >= 1");
    assert!(opts.tol_energy > 0.0, "need tol_energy > 0");
    assert!(opts.tol_grad > 0.0, "need tol_grad > 0");
    assert!(opts.step_init > 0.0, "need step_init > 0");
    assert!(
        opts.step_shrink > 0.0 && opts.step_shrink < 1.0,
        "need step_shrink in (0, 1)"
    );

    let grid = spec.grid();
    let n = grid.len();
    let h = grid.spacing();
    let wt = grid.trapezoid_weights();
    let translation_invariant = !spec.has_delta_atoms() && !spec.has_sampled_potential();

    let mut psi = build_seed(spec, &opts.seed_profile)?;
    let mut split = spec.energy(&psi)?;
    if !split.total.is_finite() {
        return Err(SolveError::NonFiniteEnergy { iteration: 0 });
    }
    let mut energy = split.total;
    let mut trace = vec![energy];
    let mut converged = false;
    let mut iterations = 0;
    let mut multiplier = 0.0;
    let mut last_step = 0.0;
    let mut last_decrease = f64::INFINITY;

    for it in 1..=opts.max_iter {
        iterations = it;
        let partials = spec.nodal_partials(&psi)?;
        let mut constraint = p2::apply_mass(h, psi.values());
        for v in constraint.iter_mut() {
            *v *= 2.0;
        }
        let theta = dot(&partials, &constraint) / dot(&constraint, &constraint);
        multiplier = -theta;

        // Lumped Helmholtz preconditioner sigma·(mass diag) + first-order
        // stiffness; its inverse tames the 1/h stiffness of the delta and
        // kinetic terms without disturbing the constraint projection.
        let sigma = 1.0 + 2.0 * energy.abs();
        let diag: Vec<f64> = (0..n)
            .map(|i| {
                let stiff = if i == 0 || i == n - 1 { 1.0 / h } else { 2.0 / h };
                sigma * wt[i] + stiff
            })
            .collect();
        let (zp, zc) = tridiagonal_solve_pair(&diag, -1.0 / h, &partials, &constraint);
        let theta_hat = dot(&constraint, &zp) / dot(&constraint, &zc);
        let direction: Vec<f64> = zp
            .iter()
            .zip(zc.iter())
            .map(|(&a, &b)| a - theta_hat * b)
            .collect();

        // Projected-gradient norm in the preconditioner metric: pg^2 equals
        // the inner product of the tangent residual with the preconditioned
        // search direction, so pg^2/2 bounds the model decrease of one step.
        let mut pg_sq = 0.0;
        for i in 0..n {
            let r = partials[i] - theta * constraint[i];
            pg_sq += r * direction[i];
        }
        let pg_norm = pg_sq.max(0.0).sqrt();
        let scale = 1.0 + energy.abs();
        if pg_norm <= opts.tol_grad * scale && last_decrease <= opts.tol_energy * scale {
            converged = true;
            iterations = it - 1;
            break;
        }

        let dir_max = direction.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
        if dir_max == 0.0 {
            converged = pg_norm <= opts.tol_grad * scale;
            break;
        }

        let mut step = if last_step > 0.0 {
            2.0 * last_step
        } else {
            opts.step_init / dir_max
        };
        let mut accepted = false;
        for _ in 0..60 {
            let mut cand: Vec<f64> = psi
                .values()
                .iter()
                .zip(direction.iter())
                .map(|(&v, &d)| (v - step * d).abs())
                .collect();
            let norm = p2::mass_quadratic(h, &cand).sqrt();
            if norm.is_finite() && norm > 0.0 {
                for v in cand.iter_mut() {
                    *v /= norm;
                }
                let cand = GridFn::new(grid, cand)?;
                let cand_split = spec.energy(&cand)?;
                if !cand_split.total.is_finite() {
                    return Err(SolveError::NonFiniteEnergy { iteration: it });
                }
                if cand_split.total < energy {
                    last_decrease = energy - cand_split.total;
                    psi = cand;
                    split = cand_split;
                    energy = split.total;
                    trace.push(energy);
                    last_step = step;
                    accepted = true;
                    break;
                }
            }
            step *= opts.step_shrink;
        }
        if !accepted {
            // No step length gives a representable decrease. If the last
            // accepted step was already below the energy tolerance the
            // iterate sits at the resolution floor of the functional and the
            // run has converged; otherwise the search jammed early.
            converged = last_decrease <= opts.tol_energy * scale;
            break;
        }

        if translation_invariant && it % 50 == 0 {
            if let Some((centered, centered_split)) = recenter(spec, &psi, energy)? {
                psi = centered;
                split = centered_split;
                energy = split.total;
                trace.push(energy);
            }
        }
    }

    Ok(SolveReport {
        minimizer: psi,
        energy: split,
        multiplier,
        iterations,
        converged,
        energy_trace: trace,
    })
}

/// Shift the iterate so its maximum sits at the origin node, for specs
/// with no pinned term to hold it there. Adopted only when the shifted,
/// renormalized iterate does not raise the energy, keeping the trace
/// monotone.
fn recenter(
    spec: &FunctionalSpec,
    psi: &GridFn,
    energy: f64,
) -> Result<Option<(GridFn, EnergySplit)>, SolveError> {
    let grid = psi.grid();
    let vals = psi.values();
    let mut argmax = 0;
    for (i, v) in vals.iter().enumerate() {
        if v.abs() > vals[argmax].abs() {
            argmax = i;
        }
    }
    if argmax == grid.mid() {
        return Ok(None);
    }
    let shift = grid.mid() as isize - argmax as isize;
    let n = grid.len();
    let mut rolled = vec![0.0; n];
    for i in 0..n {
        let src = i as isize - shift;
        if src >= 0 && (src as usize) < n {
            rolled[i] = vals[src as usize];
        }
    }
    let rolled = GridFn::new(grid, rolled)?;
    let rolled = match rolled.normalized() {
        Ok(f) => f,
        Err(_) => return Ok(None),
    };
    let rolled_split = spec.energy(&rolled)?;
    if rolled_split.total <= energy {
        Ok(Some((rolled, rolled_split)))
    } else {
        Ok(None)
    }
}

/// Both minima of the pinned model: with the point interaction and without.
#[derive(Debug, Clone, Copy)]
pub struct BindingCheck {
    /// Minimum with the point interaction present.
    pub full_energy: f64,
    /// Minimum of the translation-invariant functional (no point term).
    pub translation_energy: f64,
    /// translation_energy − full_energy; positive when pinning binds.
    pub gap: f64,
    /// β·φ_T(0)² for the translation-invariant minimizer φ_T; the gap must
    /// be at least this large, since inserting φ_T into the pinned
    /// functional already lowers the energy by that amount.
    pub gap_lower_bound: f64,
    pub holds: bool,
}

/// Minimize the pinned and unpinned functionals and compare.
///
/// # Panics
/// If `p.alpha() <= 0` (the unpinned problem needs the quartic term).
pub fn binding_inequality_check(
    p: ModelParams,
    grid: Grid1D,
    opts: &SolveOptions,
) -> Result<BindingCheck, SolveError> {
    assert!(p.alpha > 0.0, "need alpha > 0, got {}", p.alpha);
    assert!(p.beta > 0.0, "need beta > 0, got {}", p.beta);
    let full = minimize(&FunctionalSpec::pinned_quartic(grid, p), opts)?;
    let free_spec = FunctionalSpec::new(grid).with_quartic(p.alpha / 2.0);
    let free = minimize(&free_spec, opts)?;
    let gap = free.energy.total - full.energy.total;
    let origin = free.minimizer.values()[grid.mid()];
    let gap_lower_bound = p.beta * origin * origin;
    let tol = 1e-6 * (1.0 + full.energy.total.abs());
    Ok(BindingCheck {
        full_energy: full.energy.total,
        translation_energy: free.energy.total,
        gap,
        gap_lower_bound,
        holds: gap > 0.0 && gap >= gap_lower_bound - tol,
    })
}

/// H¹ distance (‖f−g‖₂² + ‖f′−g′‖₂²)^{1/2}, derivatives by the centered
/// stencil with one-sided ends.
pub fn h1_distance(f: &GridFn, g: &GridFn) -> Result<f64, GridError> {
    if f.grid() != g.grid() {
        return Err(GridError::GridMismatch);
    }
    let diff: Vec<f64> = f
        .values()
        .iter()
        .zip(g.values().iter())
        .map(|(&a, &b)| a - b)
        .collect();
    let diff = GridFn::new(f.grid(), diff)?;
    let deriv = diff.derivative();
    Ok((diff.l2_norm().powi(2) + deriv.l2_norm().powi(2)).sqrt())
}
