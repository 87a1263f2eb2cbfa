//! The energy functional data model.
//!
//! Every model in the crate is an instance of one quadratic-plus-quartic
//! shape: a kinetic term, an attractive local quartic term, point
//! interactions, an external sampled potential, and a translation-invariant
//! density-density convolution,
//!
//!   E(f) = k ∫f'² − q ∫f⁴ − Σ_a w_a f(x_a)² + s ∫V f² − ∬ f(x)² K(x−y) f(y)².
//!
//! Minimization is always over the unit sphere ∫f² = 1.

use crate::convolve::Convolution;
use crate::error::{GridError, ParamError};
use crate::grid::{Grid1D, GridFn};
use crate::p2;
use serde::Serialize;

/// Coupling strengths of the point-pinned quartic model: `alpha` scales the
/// quartic self-attraction, `beta` the attractive point interaction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub alpha: f64,
    pub beta: f64,
}

impl ModelParams {
    /// Validate `alpha >= 0`, `beta > 0`.
    pub fn new(alpha: f64, beta: f64) -> Result<Self, ParamError> {
        if !(alpha.is_finite() && alpha >= 0.0) {
            return Err(ParamError::BadAlpha(alpha));
        }
        if !(beta.is_finite() && beta > 0.0) {
            return Err(ParamError::BadBeta(beta));
        }
        Ok(ModelParams { alpha, beta })
    }
}

/// One additive term of the energy, plus their sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergySplit {
    pub kinetic: f64,
    pub quartic: f64,
    pub delta: f64,
    pub external: f64,
    pub convolution: f64,
    pub total: f64,
}

impl EnergySplit {
    fn assemble(kinetic: f64, quartic: f64, delta: f64, external: f64, convolution: f64) -> Self {
        EnergySplit {
            kinetic,
            quartic,
            delta,
            external,
            convolution,
            total: kinetic + quartic + delta + external + convolution,
        }
    }
}

/// Relative slack allowed when matching a point-interaction location to a
/// grid node.
const ATOM_SNAP_TOL: f64 = 1e-9;

/// A complete description of one energy functional on a fixed grid.
#[derive(Debug, Clone)]
pub struct FunctionalSpec {
    grid: Grid1D,
    kinetic_coeff: f64,
    quartic_coeff: f64,
    /// Point interactions as (node index, weight); each contributes
    /// −weight·f(node)².
    delta_atoms: Vec<(usize, f64)>,
    /// External potential with its sign: contributes sign·∫V f².
    sampled_potential: Option<(GridFn, f64)>,
    /// Self-interaction kernel; contributes −∬f(x)²K(x−y)f(y)².
    convolution: Option<Convolution>,
}

impl FunctionalSpec {
    /// Unit kinetic term alone on `grid`; builders add everything else.
    ///
    /// Every model in this crate keeps ∫f'² with coefficient 1, so that is
    /// the starting point; `with_kinetic(0.0)` removes it where a pure form
    /// is wanted.
    pub fn new(grid: Grid1D) -> Self {
        FunctionalSpec {
            grid,
            kinetic_coeff: 1.0,
            quartic_coeff: 0.0,
            delta_atoms: Vec::new(),
            sampled_potential: None,
            convolution: None,
        }
    }

    /// The point-pinned quartic model: kinetic 1, quartic alpha/2, one
    /// attractive atom of weight beta at the origin.
    pub fn pinned_quartic(grid: Grid1D, p: ModelParams) -> Self {
        FunctionalSpec::new(grid)
            .with_quartic(0.5 * p.alpha)
            .with_delta_atom(0.0, p.beta)
            .expect("origin is a grid node by construction")
    }

    /// Coefficient of ∫f'²; must be finite and >= 0.
    pub fn with_kinetic(mut self, coeff: f64) -> Self {
        assert!(coeff.is_finite() && coeff >= 0.0, "bad kinetic coefficient");
        self.kinetic_coeff = coeff;
        self
    }

    /// Coefficient of the attractive quartic term −coeff·∫f⁴; finite, >= 0.
    pub fn with_quartic(mut self, coeff: f64) -> Self {
        assert!(coeff.is_finite() && coeff >= 0.0, "bad quartic coefficient");
        self.quartic_coeff = coeff;
        self
    }

    /// Add a point interaction −weight·f(location)²; the location must
    /// coincide with a grid node.
    pub fn with_delta_atom(mut self, location: f64, weight: f64) -> Result<Self, GridError> {
        let h = self.grid.spacing();
        let rel = location / h + self.grid.mid() as f64;
        let node = rel.round();
        if (rel - node).abs() > ATOM_SNAP_TOL * (1.0 + rel.abs())
            || node < 0.0
            || node >= self.grid.len() as f64
        {
            return Err(GridError::OffGridAtom(location));
        }
        self.delta_atoms.push((node as usize, weight));
        Ok(self)
    }

    /// Set the external potential term sign·∫V f² with sign = ±1.
    pub fn with_sampled_potential(mut self, v: GridFn, sign: f64) -> Result<Self, GridError> {
        assert!(sign == 1.0 || sign == -1.0, "sign must be +1 or -1");
        if v.grid() != self.grid {
            return Err(GridError::GridMismatch);
        }
        self.sampled_potential = Some((v, sign));
        Ok(self)
    }

    /// Set the self-interaction kernel from its lag samples
    /// K(0), K(h), ..., K((n−1)h).
    pub fn with_conv_kernel(mut self, lags: Vec<f64>) -> Result<Self, GridError> {
        if lags.len() != self.grid.len() {
            return Err(GridError::KernelLengthMismatch {
                got: lags.len(),
                expected: self.grid.len(),
            });
        }
        self.convolution = Some(Convolution::new(lags));
        Ok(self)
    }

    pub fn grid(&self) -> Grid1D {
        self.grid
    }

    pub fn kinetic_coeff(&self) -> f64 {
        self.kinetic_coeff
    }

    pub fn quartic_coeff(&self) -> f64 {
        self.quartic_coeff
    }

    pub fn delta_atoms(&self) -> &[(usize, f64)] {
        &self.delta_atoms
    }

    pub fn has_delta_atoms(&self) -> bool {
        !self.delta_atoms.is_empty()
    }

    pub fn has_sampled_potential(&self) -> bool {
        self.sampled_potential.is_some()
    }

    fn check_grid(&self, f: &GridFn) -> Result<(), GridError> {
        if f.grid() != self.grid {
            return Err(GridError::GridMismatch);
        }
        Ok(())
    }

    /// Evaluate the energy, term by term.
    ///
    /// Kinetic and quartic terms use the quadratic-element forms; the
    /// sampled-potential and convolution terms use trapezoid weights on the
    /// nodal density (matching the cell-averaged way those tables are
    /// built); the point terms read exact nodal values with no weight.
    pub fn energy(&self, f: &GridFn) -> Result<EnergySplit, GridError> {
        self.check_grid(f)?;
        let h = self.grid.spacing();
        let v = f.values();

        let kinetic = if self.kinetic_coeff != 0.0 {
            self.kinetic_coeff * p2::stiffness_quadratic(h, v)
        } else {
            0.0
        };
        let quartic = if self.quartic_coeff != 0.0 {
            -self.quartic_coeff * p2::quartic_integral(h, v)
        } else {
            0.0
        };
        let delta: f64 = self
            .delta_atoms
            .iter()
            .map(|&(node, w)| -w * v[node] * v[node])
            .sum();

        let mut external = 0.0;
        let mut convolution = 0.0;
        if self.sampled_potential.is_some() || self.convolution.is_some() {
            let wt = self.grid.trapezoid_weights();
            if let Some((pot, sign)) = &self.sampled_potential {
                let acc: f64 = pot
                    .values()
                    .iter()
                    .zip(v.iter())
                    .zip(wt.iter())
                    .map(|((&p, &fi), &w)| w * p * fi * fi)
                    .sum();
                external = sign * acc;
            }
            if let Some(conv) = &self.convolution {
                let weighted_density: Vec<f64> =
                    v.iter().zip(wt.iter()).map(|(&fi, &w)| w * fi * fi).collect();
                let smeared = conv.apply(&weighted_density);
                convolution = -v
                    .iter()
                    .zip(wt.iter())
                    .zip(smeared.iter())
                    .map(|((&fi, &w), &t)| w * fi * fi * t)
                    .sum::<f64>();
            }
        }

        Ok(EnergySplit::assemble(
            kinetic,
            quartic,
            delta,
            external,
            convolution,
        ))
    }

    /// Partial derivatives of the energy with respect to the node values.
    ///
    /// This is the raw Euclidean gradient of the discrete energy; pairing it
    /// with any perturbation of the node values gives the exact discrete
    /// directional derivative, which is what the descent loop and the
    /// finite-difference consistency checks both use.
    pub fn nodal_partials(&self, f: &GridFn) -> Result<Vec<f64>, GridError> {
        self.check_grid(f)?;
        let h = self.grid.spacing();
        let v = f.values();
        let n = v.len();

        let mut p = vec![0.0; n];
        if self.kinetic_coeff != 0.0 {
            for (pi, ki) in p.iter_mut().zip(p2::apply_stiffness(h, v)) {
                *pi += 2.0 * self.kinetic_coeff * ki;
            }
        }
        if self.quartic_coeff != 0.0 {
            for (pi, qi) in p.iter_mut().zip(p2::quartic_partials(h, v)) {
                *pi -= self.quartic_coeff * qi;
            }
        }
        for &(node, w) in &self.delta_atoms {
            p[node] -= 2.0 * w * v[node];
        }
        if self.sampled_potential.is_some() || self.convolution.is_some() {
            let wt = self.grid.trapezoid_weights();
            if let Some((pot, sign)) = &self.sampled_potential {
                for i in 0..n {
                    p[i] += 2.0 * sign * wt[i] * pot.values()[i] * v[i];
                }
            }
            if let Some(conv) = &self.convolution {
                let weighted_density: Vec<f64> =
                    v.iter().zip(wt.iter()).map(|(&fi, &w)| w * fi * fi).collect();
                let smeared = conv.apply(&weighted_density);
                for i in 0..n {
                    p[i] -= 4.0 * wt[i] * smeared[i] * v[i];
                }
            }
        }
        Ok(p)
    }

    /// The L² (variational) gradient: nodal partials converted to a density
    /// by dividing out the trapezoid weight at each node. A point term thus
    /// contributes −2·(weight/spacing)·f at its node.
    ///
    /// The density is meant in the weak sense of that pairing: summing
    /// weight·gradient·direction over nodes gives the exact discrete
    /// directional derivative, and local weighted averages converge to the
    /// classical gradient (−2f″ for the kinetic term), while individual
    /// node values carry element-pattern oscillation.
    pub fn variational_gradient(&self, f: &GridFn) -> Result<GridFn, GridError> {
        let p = self.nodal_partials(f)?;
        let wt = self.grid.trapezoid_weights();
        let values = p.iter().zip(wt.iter()).map(|(&pi, &w)| pi / w).collect();
        GridFn::new(self.grid, values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pekar_grid() -> Grid1D {
        Grid1D::new(40.0, 2049).unwrap()
    }

    #[test]
    fn split_total_is_sum_of_parts() {
        let g = pekar_grid();
        let spec = FunctionalSpec::pinned_quartic(g, ModelParams::new(1.0, 1.0).unwrap());
        let f = GridFn::from_fn(g, |x| (-0.4 * x.abs()).exp())
            .unwrap()
            .normalized()
            .unwrap();
        let e = spec.energy(&f).unwrap();
        assert_eq!(
            e.total,
            e.kinetic + e.quartic + e.delta + e.external + e.convolution
        );
    }

    #[test]
    fn kinetic_term_is_quadratically_homogeneous() {
        let g = pekar_grid();
        let spec = FunctionalSpec::new(g).with_kinetic(1.0);
        let f = GridFn::from_fn(g, |x| (-0.1 * x * x).exp()).unwrap();
        let scaled = GridFn::new(g, f.values().iter().map(|v| 3.0 * v).collect()).unwrap();
        let e1 = spec.energy(&f).unwrap().total;
        let e9 = spec.energy(&scaled).unwrap().total;
        assert!((e9 - 9.0 * e1).abs() < 1e-12 * e9.abs());
    }

    #[test]
    fn off_grid_atom_is_rejected() {
        let g = Grid1D::new(1.0, 5).unwrap();
        let r = FunctionalSpec::new(g).with_delta_atom(0.3, 1.0);
        assert!(matches!(r, Err(GridError::OffGridAtom(_))));
        assert!(FunctionalSpec::new(g).with_delta_atom(0.5, 1.0).is_ok());
    }

    #[test]
    fn kernel_length_is_checked() {
        let g = Grid1D::new(1.0, 5).unwrap();
        let r = FunctionalSpec::new(g).with_conv_kernel(vec![1.0; 4]);
        assert!(matches!(
            r,
            Err(GridError::KernelLengthMismatch { got: 4, expected: 5 })
        ));
    }

    #[test]
    fn gradient_matches_directional_derivative() {
        // Central-difference directional derivatives along random-ish
        // directions must match <partials, d> to O(eps^2).
        let g = Grid1D::new(12.0, 257).unwrap();
        let pot = GridFn::from_fn(g, |x| 1.0 / (1.0 + x * x)).unwrap();
        let mut kernel = vec![0.0; 257];
        for (i, k) in kernel.iter_mut().enumerate() {
            *k = 0.3 / (1.0 + (i as f64) * g.spacing());
        }
        let spec = FunctionalSpec::new(g)
            .with_kinetic(1.0)
            .with_quartic(0.5)
            .with_delta_atom(0.0, 1.0)
            .unwrap()
            .with_sampled_potential(pot, -1.0)
            .unwrap()
            .with_conv_kernel(kernel)
            .unwrap();
        let f = GridFn::from_fn(g, |x| (-0.2 * x * x).exp() * (1.0 + 0.1 * x)).unwrap();
        let p = spec.nodal_partials(&f).unwrap();

        let eps = 1e-5;
        for dir in 0..20 {
            let d: Vec<f64> = (0..257)
                .map(|i| ((i * (dir + 3) + 7 * dir) % 11) as f64 / 11.0 - 0.5)
                .collect();
            let mut fp = f.values().to_vec();
            let mut fm = f.values().to_vec();
            for i in 0..257 {
                fp[i] += eps * d[i];
                fm[i] -= eps * d[i];
            }
            let ep = spec.energy(&GridFn::new(g, fp).unwrap()).unwrap().total;
            let em = spec.energy(&GridFn::new(g, fm).unwrap()).unwrap().total;
            let fd = (ep - em) / (2.0 * eps);
            let an: f64 = p.iter().zip(d.iter()).map(|(a, b)| a * b).sum();
            assert!(
                (fd - an).abs() < 1e-7 * (1.0 + an.abs()),
                "direction {dir}: fd {fd} vs analytic {an}"
            );
        }
    }

    #[test]
    fn kinetic_gradient_element_averages_give_minus_2_f_second() {
        let g = Grid1D::new(std::f64::consts::PI, 4097).unwrap();
        let spec = FunctionalSpec::new(g).with_kinetic(1.0);
        // sin(x) vanishes at both boundaries, so no boundary-term pollution.
        let f = GridFn::from_fn(g, |x| x.sin()).unwrap();
        let grad = spec.variational_gradient(&f).unwrap();
        let gv = grad.values();
        // Trapezoid average over each element [2k, 2k+2] approximates
        // -2 f'' = 2 sin at the element midpoint.
        let n = g.len();
        for k in (n / 4..3 * n / 4).step_by(2) {
            let avg = 0.25 * (gv[k] + 2.0 * gv[k + 1] + gv[k + 2]);
            let want = 2.0 * g.node(k + 1).sin();
            assert!(
                (avg - want).abs() < 1e-5,
                "element at node {k}: {avg} vs {want}"
            );
        }
    }
}
