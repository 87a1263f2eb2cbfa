//! Closed-form ground state of the point-pinned quartic model.
//!
//! The functional  E(φ) = ∫φ'² − (α/2)∫φ⁴ − β φ(0)²  on the unit sphere has
//! an explicit minimizer: a sech profile folded at the origin,
//!
//!   φ₀(x) = (α+2β) / ( √(8α) · cosh(√λ·(|x| − τ)) ),
//!
//! with multiplier λ = ((α+2β)/4)² and shift τ ≤ 0 fixed by the derivative
//! jump the point interaction forces at 0. The minimum value is
//!
//!   e₀(α, β) = −(α² + 6αβ + 12β²)/48.
//!
//! These formulas are the reference oracles for every solver in the crate.

use crate::error::ParamError;
use crate::functional::ModelParams;
use crate::grid::GridFn;

/// Minimum of the point-pinned quartic functional, −(α²+6αβ+12β²)/48.
pub fn pekar_energy_closed(p: ModelParams) -> f64 {
    let (a, b) = (p.alpha, p.beta);
    -(a * a + 6.0 * a * b + 12.0 * b * b) / 48.0
}

/// The folded-sech minimizer in closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SechSolution {
    pub alpha: f64,
    pub beta: f64,
    /// Lagrange multiplier of the norm constraint, ((α+2β)/4)².
    pub lambda: f64,
    /// Shift of the sech argument, −(4/(α+2β))·atanh(2β/(α+2β)) ≤ 0.
    pub tau: f64,
}

/// Build the closed-form solution; `alpha = 0` has no sech profile and is
/// routed to [`phi0_limit_alpha0`].
pub fn sech_solution(p: ModelParams) -> Result<SechSolution, ParamError> {
    if p.alpha == 0.0 {
        return Err(ParamError::DegenerateSech);
    }
    let s = p.alpha + 2.0 * p.beta;
    let lambda = (s / 4.0) * (s / 4.0);
    let tau = -(4.0 / s) * (2.0 * p.beta / s).atanh();
    Ok(SechSolution {
        alpha: p.alpha,
        beta: p.beta,
        lambda,
        tau,
    })
}

impl SechSolution {
    /// Evaluate the minimizer at `x`.
    pub fn phi0(&self, x: f64) -> f64 {
        let s = self.alpha + 2.0 * self.beta;
        let amplitude = s / (8.0 * self.alpha).sqrt();
        amplitude / (self.lambda.sqrt() * (x.abs() - self.tau)).cosh()
    }

    /// Sample the minimizer on a grid.
    pub fn sample(&self, grid: crate::grid::Grid1D) -> GridFn {
        GridFn::from_fn(grid, |x| self.phi0(x)).expect("sech profile is finite")
    }
}

/// Evaluate φ₀ directly from the parameters.
pub fn phi0(p: ModelParams, x: f64) -> Result<f64, ParamError> {
    Ok(sech_solution(p)?.phi0(x))
}

/// Pointwise α → 0 limit of φ₀: the pure point-well ground state
/// √(β/2)·e^{−β|x|/2}, with energy −β²/4.
pub fn phi0_limit_alpha0(beta: f64, x: f64) -> f64 {
    assert!(beta > 0.0 && beta.is_finite(), "beta must be positive");
    (0.5 * beta).sqrt() * (-0.5 * beta * x.abs()).exp()
}

/// Stencil residuals of the Euler-Lagrange system on a sampled function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElResiduals {
    /// max over interior nodes of |−ψ″ − αψ³ + λψ| (central stencil).
    pub interior: f64,
    /// |ψ′(0⁻) − ψ′(0⁺) − βψ(0)| (one-sided second-order stencils).
    pub jump: f64,
    /// max over interior nodes of |ψ′² + (α/2)ψ⁴ − λψ²| (central ψ′).
    pub first_integral: f64,
}

/// Evaluate the three Euler-Lagrange residuals of ψ for multiplier λ.
///
/// The two boundary nodes and the three nodes nearest the origin are
/// excluded from the interior maxima: the point term lives at the origin
/// (its stencil zone is covered by the jump residual instead), and the
/// boundary lacks central stencils. Every grid contains the origin node by
/// construction, so there is no failure case.
pub fn el_residuals(psi: &GridFn, p: ModelParams, lambda: f64) -> ElResiduals {
    let g = psi.grid();
    let h = g.spacing();
    let v = psi.values();
    let n = v.len();
    let mid = g.mid();

    let mut interior = 0.0f64;
    let mut first_integral = 0.0f64;
    for i in 1..n - 1 {
        if i + 1 >= mid && i <= mid + 1 {
            continue;
        }
        let second = (v[i + 1] - 2.0 * v[i] + v[i - 1]) / (h * h);
        let el = -second - p.alpha * v[i].powi(3) + lambda * v[i];
        interior = interior.max(el.abs());

        let first = (v[i + 1] - v[i - 1]) / (2.0 * h);
        let fi = first * first + 0.5 * p.alpha * v[i].powi(4) - lambda * v[i] * v[i];
        first_integral = first_integral.max(fi.abs());
    }

    let jump = (derivative_jump_at_origin(psi) - p.beta * v[mid]).abs();

    ElResiduals {
        interior,
        jump,
        first_integral,
    }
}

/// One-sided second-order estimate of ψ′(0⁻) − ψ′(0⁺).
///
/// For a minimizer with a point interaction of weight β at the origin this
/// equals βψ(0) up to O(h²) stencil error.
pub fn derivative_jump_at_origin(psi: &GridFn) -> f64 {
    let g = psi.grid();
    let h = g.spacing();
    let v = psi.values();
    let mid = g.mid();
    let right = (-3.0 * v[mid] + 4.0 * v[mid + 1] - v[mid + 2]) / (2.0 * h);
    let left = (3.0 * v[mid] - 4.0 * v[mid - 1] + v[mid - 2]) / (2.0 * h);
    left - right
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid1D;
    use crate::quad::integrate;

    fn params(a: f64, b: f64) -> ModelParams {
        ModelParams::new(a, b).unwrap()
    }

    #[test]
    fn closed_energy_values() {
        assert_eq!(pekar_energy_closed(params(1.0, 1.0)), -19.0 / 48.0);
        assert!((pekar_energy_closed(params(0.0, 1.0)) + 0.25).abs() < 1e-15);
        // beta -> 0 limit of the alpha-only formula.
        assert!((pekar_energy_closed(params(4.0, 1e-12)) + 1.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn closed_energy_monotone_in_both_couplings() {
        let e = |a, b| pekar_energy_closed(params(a, b));
        assert!(e(2.0, 1.0) < e(1.0, 1.0));
        assert!(e(1.0, 2.0) < e(1.0, 1.0));
    }

    #[test]
    fn multiplier_and_shift_values() {
        let s = sech_solution(params(1.0, 1.0)).unwrap();
        assert_eq!(s.lambda, 9.0 / 16.0);
        assert!((s.tau - (-1.0729586082894002)).abs() < 1e-15, "tau {}", s.tau);
        assert!(s.tau <= 0.0);
    }

    #[test]
    fn profile_values_and_symmetry() {
        let s = sech_solution(params(1.0, 1.0)).unwrap();
        assert!((s.phi0(0.0) - 0.7905694150420949).abs() < 1e-15);
        assert!((s.phi0(1.0) - 0.4289824735387822).abs() < 1e-15);
        for &x in &[0.3, 1.7, 5.0] {
            assert_eq!(s.phi0(x), s.phi0(-x));
            assert!(s.phi0(x) > 0.0);
            assert!(s.phi0(x) < s.phi0(0.5 * x));
        }
    }

    #[test]
    fn profile_is_normalized() {
        for (a, b) in [(1.0, 1.0), (2.0, 0.5), (0.5, 2.0)] {
            let s = sech_solution(params(a, b)).unwrap();
            let norm2 = integrate(|x| s.phi0(x).powi(2), 0.0, 200.0 / (a + 2.0 * b), 1e-12);
            assert!(
                (2.0 * norm2 - 1.0).abs() < 1e-10,
                "({a},{b}): int phi0^2 = {}",
                2.0 * norm2
            );
        }
    }

    #[test]
    fn quartic_integral_identity() {
        // lambda + e0 = (alpha/2) * int phi0^4, so at alpha = beta = 1 the
        // quartic integral is exactly 1/3.
        let p = params(1.0, 1.0);
        let s = sech_solution(p).unwrap();
        let q = 2.0 * integrate(|x| s.phi0(x).powi(4), 0.0, 60.0, 1e-12);
        assert!((q - 1.0 / 3.0).abs() < 1e-10, "got {q}");
        assert!((s.lambda + pekar_energy_closed(p) - 0.5 * q).abs() < 1e-10);
    }

    #[test]
    fn alpha0_limit_profile() {
        assert!((phi0_limit_alpha0(1.0, 0.0) - 0.5f64.sqrt()).abs() < 1e-15);
        let norm2 = integrate(|x| phi0_limit_alpha0(1.0, x).powi(2), 0.0, 100.0, 1e-12);
        assert!((2.0 * norm2 - 1.0).abs() < 1e-10);
        // Pointwise limit of the sech profile as alpha shrinks.
        for &x in &[0.0, 0.5, 2.0, 10.0] {
            let near = phi0(params(1e-6, 1.0), x).unwrap();
            assert!(
                (near - phi0_limit_alpha0(1.0, x)).abs() <= 1e-3,
                "x = {x}: {near}"
            );
        }
        assert!(matches!(
            sech_solution(params(0.0, 1.0)),
            Err(ParamError::DegenerateSech)
        ));
    }

    #[test]
    fn residuals_shrink_at_second_order() {
        let p = params(1.0, 1.0);
        let s = sech_solution(p).unwrap();
        let mut prev: Option<ElResiduals> = None;
        for n in [2049usize, 4097, 8193] {
            let g = Grid1D::new(40.0, n).unwrap();
            let psi = s.sample(g);
            let r = el_residuals(&psi, p, s.lambda);
            if let Some(q) = prev {
                for (num, den, name) in [
                    (q.interior, r.interior, "interior"),
                    (q.jump, r.jump, "jump"),
                    (q.first_integral, r.first_integral, "first integral"),
                ] {
                    let ratio = num / den;
                    assert!(
                        (3.5..=4.5).contains(&ratio),
                        "{name} residual ratio {ratio} at n={n}"
                    );
                }
            }
            prev = Some(r);
        }
    }

    #[test]
    fn zero_function_has_zero_residuals() {
        let g = Grid1D::new(10.0, 129).unwrap();
        let zero = GridFn::new(g, vec![0.0; 129]).unwrap();
        let r = el_residuals(&zero, params(1.0, 1.0), 9.0 / 16.0);
        assert_eq!(r.interior, 0.0);
        assert_eq!(r.jump, 0.0);
        assert_eq!(r.first_integral, 0.0);
    }

    #[test]
    fn gaussian_is_flagged_as_non_solution() {
        let g = Grid1D::new(20.0, 2049).unwrap();
        let gauss = GridFn::from_fn(g, |x| (-0.5 * x * x).exp())
            .unwrap()
            .normalized()
            .unwrap();
        let r = el_residuals(&gauss, params(1.0, 1.0), 9.0 / 16.0);
        assert!(r.interior > 0.1, "interior {}", r.interior);
        assert!(r.jump > 0.1, "jump {}", r.jump);
    }
}
