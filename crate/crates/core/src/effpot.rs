//! Effective Coulomb potentials along a strong magnetic field.
//!
//! An electron confined to the lowest Landau level sees the 3D Coulomb
//! attraction only through its Gaussian transverse profile. Averaging
//! produces the one-dimensional potential
//!
//!   V_U(B, x) = ∫₀^∞ e^{−u} / √(x² + 2u/B) du,
//!
//! and the bathtub rearrangement of the same average gives the pointwise
//! upper envelope V_L(B, x) = 2/(√(2/B + x²) + |x|). Both behave like 1/|x|
//! away from the origin and like a logarithmic well of depth ~ln B near it;
//! window integrals of either equal ln B − 2 ln ln B plus an O(1) constant
//! (`g_const`, `d_const`). The delta-extraction checks quantify how well
//! ∫V|φ|² is approximated by that logarithmic strength times |φ(0)|².

use crate::convolve::Convolution;
use crate::error::EffPotError;
use crate::grid::{Grid1D, GridFn};
use crate::p2;
use crate::quad::{integrate, integrate_exp_weighted};

pub const EULER_GAMMA: f64 = 0.5772156649015329;
const LN_2: f64 = std::f64::consts::LN_2;

/// Effective point-interaction strength μ(B) = ln B − 2 ln ln B.
///
/// # Panics
/// If `b <= e` (the iterated logarithm must be positive).
pub fn effective_strength(b: f64) -> f64 {
    assert!(b > std::f64::consts::E, "need B > e, got {b}");
    let ln_b = b.ln();
    ln_b - 2.0 * ln_b.ln()
}

/// Gaussian-averaged Coulomb potential V_U(B, x).
///
/// Computed as ∫₀^9 2s·e^{−s²}/√(x² + 2s²/B) ds (the u = s² substitution
/// removes the 1/√u endpoint singularity; the discarded tail is below
/// e^{−81}). Relative accuracy is well under 1e−10.
///
/// # Panics
/// If `b <= 1` or `x3` is not finite.
pub fn v_upper(b: f64, x3: f64) -> f64 {
    assert!(b > 1.0, "need B > 1, got {b}");
    assert!(x3.is_finite(), "need finite x, got {x3}");
    let x2 = x3 * x3;
    integrate(
        |s| 2.0 * s * (-s * s).exp() / (x2 + 2.0 * s * s / b).sqrt(),
        0.0,
        9.0,
        1e-12,
    )
}

/// Self-interaction kernel (1/√2)·V_U(B, lag/√2).
pub fn self_interaction_kernel(b: f64, lag: f64) -> f64 {
    std::f64::consts::FRAC_1_SQRT_2 * v_upper(b, lag * std::f64::consts::FRAC_1_SQRT_2)
}

/// Bathtub envelope V_L(B, x) = 2/(√(2/B + x²) + |x|); closed form.
///
/// # Panics
/// If `b <= 1`.
pub fn v_lower(b: f64, x3: f64) -> f64 {
    assert!(b > 1.0, "need B > 1, got {b}");
    2.0 / ((2.0 / b + x3 * x3).sqrt() + x3.abs())
}

/// Shared u-integral of the window constants:
/// I(c) = ∫₀^∞ e^{−u} ln(1 + √(1 + c·u)) du.
fn window_integral(c: f64) -> f64 {
    integrate_exp_weighted(|u| (1.0 + (1.0 + c * u).sqrt()).ln(), 1e-11)
}

/// Window constant of the averaged potential:
/// ∫_{|x|≤L} V_U = ln B − 2 ln ln B + g_const(B, L).
///
/// The integrand's ln(1/√u) endpoint singularity is split off analytically
/// (it integrates to γ_E/2), leaving the smooth remainder for quadrature.
///
/// # Panics
/// If `b <= e` or `l <= 0`.
pub fn g_const(b: f64, l: f64) -> f64 {
    assert!(l > 0.0, "need L > 0, got {l}");
    g_tilde_const(b, l) + 2.0 * effective_strength_log_log(b)
}

/// `g_const` without its 2 ln ln B part; defined for all B > 1.
///
/// # Panics
/// If `b <= 1` or `l <= 0`.
pub fn g_tilde_const(b: f64, l: f64) -> f64 {
    assert!(b > 1.0, "need B > 1, got {b}");
    assert!(l > 0.0, "need L > 0, got {l}");
    let c = 2.0 / (b * l * l);
    2.0 * l.ln() + EULER_GAMMA + 2.0 * window_integral(c) - LN_2
}

fn effective_strength_log_log(b: f64) -> f64 {
    assert!(b > std::f64::consts::E, "need B > e, got {b}");
    b.ln().ln()
}

/// Window constant of the bathtub envelope:
/// ∫_{|x|<L} V_L = ln B − 2 ln ln B + d_const(B, L); closed form.
///
/// # Panics
/// If `b <= e` or `l <= 0`.
pub fn d_const(b: f64, l: f64) -> f64 {
    assert!(l > 0.0, "need L > 0, got {l}");
    let c = 2.0 / (b * l * l);
    2.0 * l.ln() + 2.0 * effective_strength_log_log(b) + 2.0 / ((c + 1.0).sqrt() + 1.0)
        + 2.0 * ((1.0 + c).sqrt() + 1.0).ln()
        - LN_2
}

/// ∫_from^to V_U(B, x) dx for 0 <= from < to.
///
/// The x-integral is done in closed form under the u-integral
/// (∫dx/√(x²+d²) = asinh(x/d)), written so that only ratios against
/// c(x) = x·√(B/2) appear; this stays accurate up to B ~ 1e300 where the
/// naive antiderivative loses every digit to cancellation.
pub fn integrated_upper(b: f64, from: f64, to: f64) -> f64 {
    assert!(b > 1.0, "need B > 1, got {b}");
    assert!(0.0 <= from && from < to, "need 0 <= from < to");
    let half_b = (b / 2.0).sqrt();
    let cb = to * half_b;
    if from == 0.0 {
        let tail = integrate_exp_weighted(
            |u| cb.ln() + (1.0 + (1.0 + u / (cb * cb)).sqrt()).ln(),
            1e-12,
        );
        tail + 0.5 * EULER_GAMMA
    } else {
        let ca = from * half_b;
        let ratio = (cb / ca).ln();
        integrate_exp_weighted(
            |u| {
                ratio + (1.0 + (1.0 + u / (cb * cb)).sqrt()).ln()
                    - (1.0 + (1.0 + u / (ca * ca)).sqrt()).ln()
            },
            1e-12,
        )
    }
}

/// ∫_from^to V_L(B, x) dx for 0 <= from < to; closed form.
///
/// Antiderivative F(x) = asinh(x/a) + 1/(1 + √(1 + (a/x)²)) with a = √(2/B);
/// the second term is the cancellation-free rewrite of the naive
/// B(x√(a²+x²) + a²·asinh(x/a) − x²)/2, which collapses for B·x² >> 1.
pub fn integrated_lower(b: f64, from: f64, to: f64) -> f64 {
    assert!(b > 1.0, "need B > 1, got {b}");
    assert!(0.0 <= from && from < to, "need 0 <= from < to");
    let a = (2.0 / b).sqrt();
    let f = |x: f64| {
        if x == 0.0 {
            0.0
        } else {
            (x / a).asinh() + 1.0 / (1.0 + (1.0 + (a / x) * (a / x)).sqrt())
        }
    };
    f(to) - f(from)
}

/// Cell averages of V_U on the grid: value at node i is the mean of V_U
/// over the half-open cell of width spacing centered on the node (half
/// width at the two ends, twice the inner half at the origin by symmetry).
/// Pairing these with trapezoid weights reproduces ∫V_U·ρ for piecewise
/// smooth ρ while representing the ln-singular cell at the origin exactly
/// in the mean.
pub fn cell_averaged_upper(b: f64, grid: Grid1D) -> Vec<f64> {
    cell_averaged(grid, |lo, hi| integrated_upper(b, lo, hi))
}

/// Cell averages of V_L on the grid; see [`cell_averaged_upper`].
pub fn cell_averaged_lower(b: f64, grid: Grid1D) -> Vec<f64> {
    cell_averaged(grid, |lo, hi| integrated_lower(b, lo, hi))
}

fn cell_averaged<F: Fn(f64, f64) -> f64>(grid: Grid1D, moment: F) -> Vec<f64> {
    let n = grid.len();
    let mid = grid.mid();
    let h = grid.spacing();
    let mut v = vec![0.0; n];
    v[mid] = 2.0 * moment(0.0, 0.5 * h) / h;
    for k in 1..=mid {
        let (lo, hi) = if k < mid {
            ((k as f64 - 0.5) * h, (k as f64 + 0.5) * h)
        } else {
            ((k as f64 - 0.5) * h, k as f64 * h)
        };
        let avg = moment(lo, hi) / (hi - lo);
        v[mid + k] = avg;
        v[mid - k] = avg;
    }
    v
}

/// Lag-cell averages of the self-interaction kernel (1/√2)·V_U(·/√2):
/// entry k is the kernel's mean over lags ((k−1/2)h, (k+1/2)h) (half cell
/// at k = 0). Substituting t/√2 maps the kernel moment back onto
/// `integrated_upper`.
pub fn self_interaction_lags(b: f64, grid: Grid1D) -> Vec<f64> {
    let n = grid.len();
    let h = grid.spacing();
    let s2 = std::f64::consts::SQRT_2;
    let mut k_row = vec![0.0; n];
    k_row[0] = integrated_upper(b, 0.0, 0.5 * h / s2) / (0.5 * h);
    for k in 1..n {
        k_row[k] = integrated_upper(b, (k as f64 - 0.5) * h / s2, (k as f64 + 0.5) * h / s2) / h;
    }
    k_row
}

/// Which delta-extraction inequality to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtractionKind {
    /// ∫V_U|φ|² against μ(B)|φ(0)|².
    Upper,
    /// ∫V_L|φ|² against μ(B)|φ(0)|².
    Lower,
    /// ∬|φ(x)|²K(x−y)|φ(y)|² against μ(B)‖φ‖₄⁴.
    Convolution,
}

/// Two sides of one delta-extraction inequality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtractionCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Precomputed tables for delta-extraction checks at fixed (B, grid, kind).
///
/// Building the cell averages costs thousands of quadratures; sweeping many
/// test functions and window sizes against one table amortizes that.
#[derive(Debug, Clone)]
pub struct DeltaExtraction {
    b: f64,
    grid: Grid1D,
    kind: ExtractionKind,
    /// Cell-averaged potential (upper/lower) or None for convolution.
    potential: Option<Vec<f64>>,
    /// Prepared kernel operator for the convolution inequality.
    kernel: Option<Convolution>,
}

impl DeltaExtraction {
    /// Build the tables.
    ///
    /// # Panics
    /// If `b <= e`.
    pub fn new(b: f64, grid: Grid1D, kind: ExtractionKind) -> Self {
        assert!(b > std::f64::consts::E, "need B > e, got {b}");
        let (potential, kernel) = match kind {
            ExtractionKind::Upper => (Some(cell_averaged_upper(b, grid)), None),
            ExtractionKind::Lower => (Some(cell_averaged_lower(b, grid)), None),
            ExtractionKind::Convolution => {
                (None, Some(Convolution::new(self_interaction_lags(b, grid))))
            }
        };
        DeltaExtraction {
            b,
            grid,
            kind,
            potential,
            kernel,
        }
    }

    pub fn kind(&self) -> ExtractionKind {
        self.kind
    }

    /// Evaluate both sides of the inequality for window half-width `l`.
    ///
    /// lhs is the extraction error |∫V|φ|² − μ(B)|φ(0)|²| (or its
    /// double-integral counterpart); rhs is the window bound
    /// ‖φ‖²/L + 8√L·‖φ′‖^{3/2}‖φ‖^{1/2} + |const|·‖φ′‖‖φ‖ with the norm
    /// powers doubled appropriately for the convolution form. `holds`
    /// allows 1e−12 relative slack for rounding.
    pub fn check(&self, phi: &GridFn, l: f64) -> Result<ExtractionCheck, EffPotError> {
        assert!(l > 0.0, "need L > 0, got {l}");
        if phi.grid() != self.grid {
            return Err(EffPotError::Grid(crate::error::GridError::GridMismatch));
        }
        let h = self.grid.spacing();
        if h > l / 8.0 {
            return Err(EffPotError::GridTooCoarse {
                spacing: h,
                scale: l / 8.0,
            });
        }

        let v = phi.values();
        let wt = self.grid.trapezoid_weights();
        let mu_b = effective_strength(self.b);
        let norm_sq = p2::mass_quadratic(h, v);
        let norm = norm_sq.sqrt();
        let deriv_norm = p2::stiffness_quadratic(h, v).sqrt();
        let origin_sq = v[self.grid.mid()] * v[self.grid.mid()];

        let (lhs, rhs) = match self.kind {
            ExtractionKind::Upper | ExtractionKind::Lower => {
                let table = self.potential.as_ref().expect("table built in new");
                let pairing: f64 = table
                    .iter()
                    .zip(v.iter())
                    .zip(wt.iter())
                    .map(|((&p, &fi), &w)| w * p * fi * fi)
                    .sum();
                let lhs = (pairing - mu_b * origin_sq).abs();
                let window_const = match self.kind {
                    ExtractionKind::Upper => g_const(self.b, l),
                    _ => d_const(self.b, l),
                };
                let rhs = norm_sq / l
                    + 8.0 * l.sqrt() * deriv_norm.powf(1.5) * norm.sqrt()
                    + window_const.abs() * deriv_norm * norm;
                (lhs, rhs)
            }
            ExtractionKind::Convolution => {
                let kernel = self.kernel.as_ref().expect("kernel built in new");
                let weighted_density: Vec<f64> =
                    v.iter().zip(wt.iter()).map(|(&fi, &w)| w * fi * fi).collect();
                let smeared = kernel.apply(&weighted_density);
                let double_integral: f64 = v
                    .iter()
                    .zip(wt.iter())
                    .zip(smeared.iter())
                    .map(|((&fi, &w), &t)| w * fi * fi * t)
                    .sum();
                let quartic = p2::quartic_integral(h, v);
                let lhs = (double_integral - mu_b * quartic).abs();
                let rhs = norm_sq * norm_sq / l
                    + 8.0 * l.sqrt() * deriv_norm.powf(1.5) * norm.powf(2.5)
                    + g_const(self.b, l / std::f64::consts::SQRT_2).abs()
                        * deriv_norm
                        * norm.powi(3);
                (lhs, rhs)
            }
        };
        Ok(ExtractionCheck {
            lhs,
            rhs,
            holds: lhs <= rhs * (1.0 + 1e-12),
        })
    }
}

/// One-shot delta-extraction check; builds the tables, runs once.
pub fn delta_extraction_check(
    b: f64,
    l: f64,
    phi: &GridFn,
    kind: ExtractionKind,
) -> Result<ExtractionCheck, EffPotError> {
    DeltaExtraction::new(b, phi.grid(), kind).check(phi, l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::integrate_with_breakpoints;

    const SQRT_PI: f64 = 1.7724538509055160273;

    #[test]
    fn upper_potential_at_origin_is_sqrt_half_pi_b() {
        for b in [2.0, 1e6, 1e20] {
            let want = (std::f64::consts::PI * b / 2.0).sqrt();
            let got = v_upper(b, 0.0);
            assert!(
                ((got - want) / want).abs() < 1e-10,
                "B={b}: {got} vs {want}"
            );
        }
        assert!((v_upper(2.0, 0.0) - SQRT_PI).abs() < 1e-10);
    }

    #[test]
    fn upper_potential_pinned_values() {
        // Frozen against brute-force quadrature at tight tolerance.
        assert!((v_upper(2.0, 1.0) - 0.7578721561413121).abs() < 1e-11);
        assert!((v_upper(1e6, 0.1) - 9.999000299850104).abs() < 1e-9);
        assert!((v_upper(1e6, 3.0) - 0.3333332962963086).abs() < 1e-11);
        assert!((v_upper(100.0, 0.5) - 1.9280810471531576).abs() < 1e-11);
    }

    #[test]
    fn upper_potential_shape() {
        // Even, decreasing in |x|, increasing in B, -> 1/|x| at large |x|.
        assert_eq!(v_upper(100.0, 1.5), v_upper(100.0, -1.5));
        assert!(v_upper(100.0, 0.5) > v_upper(100.0, 1.0));
        assert!(v_upper(1e6, 2.0) > v_upper(100.0, 2.0));
        let far = v_upper(1e6, 5.0);
        assert!((far - 0.2).abs() < 1e-6, "got {far}");
        for &x in &[10.0, 25.0] {
            let ratio = v_upper(100.0, x) * x;
            assert!((ratio - 1.0).abs() < 1e-4, "x={x}: ratio {ratio}");
        }
    }

    #[test]
    fn lower_potential_closed_form_values() {
        assert!((v_lower(2.0, 0.0) - 2.0).abs() < 1e-15);
        assert!((v_lower(2.0, 1.0) - 0.8284271247461901).abs() < 1e-15);
        for b in [100.0, 1e6] {
            assert!((v_lower(b, 0.0) - (2.0 * b).sqrt()).abs() < 1e-9 * (2.0 * b).sqrt());
        }
    }

    #[test]
    fn lower_envelope_dominates_average_pointwise() {
        // Recorded comparison: the rearranged envelope sits above the
        // Gaussian average at every sampled point.
        for b in [100.0, 1e6] {
            for i in 0..=40 {
                let x = 0.25 * i as f64;
                assert!(
                    v_lower(b, x) >= v_upper(b, x) - 1e-12,
                    "B={b}, x={x}: {} < {}",
                    v_lower(b, x),
                    v_upper(b, x)
                );
            }
        }
    }

    #[test]
    fn kernel_composition() {
        let b = 2.0;
        let want = (std::f64::consts::PI * b).sqrt() / 2.0;
        assert!((self_interaction_kernel(b, 0.0) - want).abs() < 1e-10);
        let lag = std::f64::consts::SQRT_2;
        let composed = self_interaction_kernel(b, lag);
        let direct = std::f64::consts::FRAC_1_SQRT_2 * v_upper(b, 1.0);
        assert!((composed - direct).abs() < 1e-12);
    }

    #[test]
    fn window_constant_pinned_values() {
        let e2 = std::f64::consts::E * std::f64::consts::E;
        assert!((g_const(e2, 1.0) - 2.772177803405967).abs() < 1e-10);
        assert!((g_const(1e6, 0.1) - 1.9168764734304058).abs() < 1e-10);
        assert!((d_const(e2, 1.0) - 3.1429834360787525).abs() < 1e-12);
        assert!((d_const(1e6, 0.1) - 2.3396108210240839).abs() < 1e-12);
    }

    #[test]
    fn g_tilde_differs_by_the_iterated_log() {
        for (b, l) in [(10.0, 1.0), (1e8, 0.3)] {
            let diff = g_const(b, l) - g_tilde_const(b, l);
            assert!((diff - 2.0 * b.ln().ln().abs().copysign(b.ln().ln())).abs() < 1e-12);
        }
        // Defined below B = e where g_const is not.
        let v = g_tilde_const(1.5, 1.0);
        assert!(v.is_finite());
    }

    #[test]
    fn d_const_large_field_limit() {
        // d_const - (2 ln L + 2 ln ln B) -> 1 + ln 2 as B -> infinity.
        let l = 0.7;
        let rest = d_const(1e250, l) - 2.0 * l.ln() - 2.0 * (1e250f64).ln().ln();
        assert!((rest - (1.0 + LN_2)).abs() < 1e-10, "got {rest}");
    }

    #[test]
    fn window_identity_for_upper_potential() {
        // 2 int_0^L V_U = ln B - 2 ln ln B + g_const(B, L); the left side
        // through integrated_upper, which shares no code with g_const's
        // split form beyond the quadrature engine.
        for b in [1e2, 1e6, 1e20] {
            for l in [0.05, 0.5, 2.0] {
                let lhs = 2.0 * integrated_upper(b, 0.0, l);
                let rhs = effective_strength(b) + g_const(b, l);
                assert!(
                    (lhs - rhs).abs() < 1e-9,
                    "B={b}, L={l}: {lhs} vs {rhs}"
                );
            }
        }
    }

    #[test]
    fn window_identity_for_lower_potential() {
        for b in [1e2, 1e6, 1e20, 1e300] {
            for l in [0.05, 0.5, 2.0] {
                let lhs = 2.0 * integrated_lower(b, 0.0, l);
                let rhs = effective_strength(b) + d_const(b, l);
                assert!(
                    (lhs - rhs).abs() < 1e-12 * rhs.abs().max(1.0),
                    "B={b}, L={l}: {lhs} vs {rhs}"
                );
            }
        }
    }

    #[test]
    fn integrated_upper_matches_nested_quadrature() {
        // Independent route: integrate v_upper itself over x with seeded
        // breakpoints at the (2/B)^{1/2} boundary-layer decades.
        let b = 1e6;
        let l = 0.5;
        let layer = (2.0f64 / b).sqrt();
        let brk = [layer, 10.0 * layer, 100.0 * layer, 1e3 * layer];
        let direct = integrate_with_breakpoints(|x| v_upper(b, x), 0.0, l, &brk, 1e-10);
        let moment = integrated_upper(b, 0.0, l);
        assert!((direct - moment).abs() < 1e-7, "{direct} vs {moment}");
        let piece = integrate_with_breakpoints(|x| v_upper(b, x), 0.1, l, &[], 1e-11);
        let piece_m = integrated_upper(b, 0.1, l);
        assert!((piece - piece_m).abs() < 1e-9, "{piece} vs {piece_m}");
    }

    #[test]
    fn cell_averages_reproduce_window_integrals() {
        // Summing cells of the table against trapezoid weights over the
        // whole grid telescopes back to the moment integral of the window.
        let b = 1e8;
        let grid = Grid1D::new(4.0, 257).unwrap();
        let wt = grid.trapezoid_weights();
        for (name, table, full) in [
            (
                "upper",
                cell_averaged_upper(b, grid),
                2.0 * integrated_upper(b, 0.0, 4.0),
            ),
            (
                "lower",
                cell_averaged_lower(b, grid),
                2.0 * integrated_lower(b, 0.0, 4.0),
            ),
        ] {
            let sum: f64 = table.iter().zip(wt.iter()).map(|(&v, &w)| v * w).sum();
            assert!(
                (sum - full).abs() < 1e-9 * full,
                "{name}: {sum} vs {full}"
            );
        }
    }

    #[test]
    fn extraction_check_on_the_sech_profile() {
        let p = crate::functional::ModelParams::new(1.0, 1.0).unwrap();
        let sol = crate::closedform::sech_solution(p).unwrap();
        // Spacing must stay below L/8 = 0.0125 for the window checks.
        let grid = Grid1D::new(32.0, 8193).unwrap();
        let phi = sol.sample(grid);
        for kind in [
            ExtractionKind::Upper,
            ExtractionKind::Lower,
            ExtractionKind::Convolution,
        ] {
            let r = delta_extraction_check(1e6, 0.1, &phi, kind).unwrap();
            assert!(r.holds, "{kind:?}: lhs {} rhs {}", r.lhs, r.rhs);
            assert!(r.lhs > 0.0 && r.rhs > 0.0);
        }
    }

    #[test]
    fn extraction_check_zero_function() {
        let grid = Grid1D::new(32.0, 4097).unwrap();
        let zero = GridFn::new(grid, vec![0.0; 4097]).unwrap();
        let r = delta_extraction_check(1e6, 1.0, &zero, ExtractionKind::Upper).unwrap();
        assert_eq!(r.lhs, 0.0);
        assert_eq!(r.rhs, 0.0);
        assert!(r.holds);
    }

    #[test]
    fn extraction_check_rejects_coarse_grids() {
        let grid = Grid1D::new(32.0, 257).unwrap();
        let phi = GridFn::from_fn(grid, |x| (-x * x).exp()).unwrap();
        let r = delta_extraction_check(1e6, 0.1, &phi, ExtractionKind::Upper);
        assert!(matches!(r, Err(EffPotError::GridTooCoarse { .. })));
    }

    #[test]
    fn integrated_lower_is_stable_at_extreme_fields() {
        // The naive antiderivative loses all precision here; the stable
        // form keeps the window identity to near machine accuracy.
        let b = 1e300;
        let l = 1.0;
        let lhs = 2.0 * integrated_lower(b, 0.0, l);
        let rhs = effective_strength(b) + d_const(b, l);
        assert!((lhs - rhs).abs() < 1e-10, "{lhs} vs {rhs}");
        // Piecewise additivity over a far-field cell.
        let a = 2.0 * integrated_lower(b, 0.0, 32.0);
        let b2 = 2.0 * (integrated_lower(b, 0.0, 31.0) + integrated_lower(b, 31.0, 32.0));
        assert!((a - b2).abs() < 1e-10 * a.abs());
    }
}
