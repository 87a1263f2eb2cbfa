//! Uniform symmetric grids on [-L, L] and functions sampled on them.
//!
//! Every discretized object in the crate lives on a `Grid1D`: an odd number
//! of equally spaced nodes with the center node exactly at the origin, where
//! the point interaction sits. Odd node counts also make the node intervals
//! pair up into quadratic elements (see `p2`).

use crate::error::GridError;
use crate::p2;

/// Uniform grid with `n` nodes on [-half_width, half_width], `n` odd.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    half_width: f64,
    n: usize,
}

impl Grid1D {
    /// Build a grid; `n` must be odd and at least 3, `half_width` positive.
    pub fn new(half_width: f64, n: usize) -> Result<Self, GridError> {
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(GridError::BadHalfWidth(half_width));
        }
        if n < 3 {
            return Err(GridError::TooFewNodes(n));
        }
        if n % 2 == 0 {
            return Err(GridError::EvenNodeCount(n));
        }
        Ok(Grid1D { half_width, n })
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Index of the node at x = 0.
    pub fn mid(&self) -> usize {
        (self.n - 1) / 2
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / (self.n - 1) as f64
    }

    /// Node position; computed relative to the center so x[mid] is exactly 0
    /// and the grid is exactly mirror symmetric.
    pub fn node(&self, i: usize) -> f64 {
        debug_assert!(i < self.n);
        (i as f64 - self.mid() as f64) * self.spacing()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.node(i)).collect()
    }

    /// Trapezoid quadrature weights: h at interior nodes, h/2 at the ends.
    pub fn trapezoid_weights(&self) -> Vec<f64> {
        let h = self.spacing();
        let mut w = vec![h; self.n];
        w[0] = 0.5 * h;
        w[self.n - 1] = 0.5 * h;
        w
    }
}

/// Real-valued function given by its values at the grid nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFn {
    grid: Grid1D,
    values: Vec<f64>,
}

impl GridFn {
    /// Wrap node values; every entry must be finite and the length must
    /// match the grid.
    pub fn new(grid: Grid1D, values: Vec<f64>) -> Result<Self, GridError> {
        if values.len() != grid.len() {
            return Err(GridError::LengthMismatch {
                got: values.len(),
                expected: grid.len(),
            });
        }
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(GridError::NonFiniteValue { index, value });
        }
        Ok(GridFn { grid, values })
    }

    /// Sample a closure at the nodes. Panics via `new` only if the closure
    /// produces a non-finite value.
    pub fn from_fn<F: Fn(f64) -> f64>(grid: Grid1D, f: F) -> Result<Self, GridError> {
        let values = (0..grid.len()).map(|i| f(grid.node(i))).collect();
        GridFn::new(grid, values)
    }

    pub fn grid(&self) -> Grid1D {
        self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Trapezoid-rule integral of the node values over [-L, L].
    ///
    /// Exact for piecewise linear integrands; used for densities and
    /// potentials where that is the right notion of interpolation.
    pub fn trapezoid(&self) -> f64 {
        let h = self.grid.spacing();
        let v = &self.values;
        let interior: f64 = v[1..v.len() - 1].iter().sum();
        h * (interior + 0.5 * (v[0] + v[v.len() - 1]))
    }

    /// L2 norm of the piecewise-quadratic interpolant, sqrt(f^T M f).
    ///
    /// The element mass form is used rather than the trapezoid rule: for a
    /// function with a kink at the center node the trapezoid rule of the
    /// square carries an O(h^2) error proportional to the jump in the
    /// derivative, while the interpolant norm converges at the same rate as
    /// the energies built from the same elements.
    pub fn l2_norm(&self) -> f64 {
        p2::mass_quadratic(self.grid.spacing(), &self.values).sqrt()
    }

    /// Scale to unit `l2_norm`.
    pub fn normalized(&self) -> Result<GridFn, GridError> {
        let norm = self.l2_norm();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(GridError::ZeroNorm);
        }
        let values = self.values.iter().map(|v| v / norm).collect();
        GridFn::new(self.grid, values)
    }

    /// Nodal derivative: central differences inside, one-sided at the ends.
    pub fn derivative(&self) -> GridFn {
        let h = self.grid.spacing();
        let v = &self.values;
        let n = v.len();
        let mut d = vec![0.0; n];
        d[0] = (v[1] - v[0]) / h;
        for i in 1..n - 1 {
            d[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
        }
        d[n - 1] = (v[n - 1] - v[n - 2]) / h;
        GridFn {
            grid: self.grid,
            values: d,
        }
    }

    /// Linear interpolation between nodes; outside the grid the nearest
    /// boundary value is returned.
    pub fn sample_at(&self, x: f64) -> f64 {
        let h = self.grid.spacing();
        let n = self.grid.len();
        let t = x / h + self.grid.mid() as f64;
        if t <= 0.0 {
            return self.values[0];
        }
        if t >= (n - 1) as f64 {
            return self.values[n - 1];
        }
        let i = t.floor() as usize;
        let frac = t - i as f64;
        self.values[i] * (1.0 - frac) + self.values[i + 1] * frac
    }
}
