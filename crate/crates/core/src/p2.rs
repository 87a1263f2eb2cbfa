//! Quadratic nodal finite elements on a uniform grid.
//!
//! Nodes are grouped in overlapping triples [2k, 2k+1, 2k+2]; each triple
//! carries the Lagrange basis N0 = xi(xi-1)/2, N1 = 1-xi^2, N2 = xi(xi+1)/2
//! on the reference interval xi in [-1, 1], mapped onto an element of width
//! 2h. This requires an odd node count, which the grid type guarantees.
//!
//! Quadratic elements are used instead of plain difference stencils because
//! the minimizers here have a kink at the center node (the delta well) and a
//! discrete quartic term: the element forms keep the energy variational, are
//! exact for the kink when it sits on a node, and carry no sawtooth null
//! modes in the quartic partials.

use crate::quad::{GL5_W, GL5_X};

/// Element stiffness matrix, scaled by 1/(6h).
const KE: [[f64; 3]; 3] = [[7.0, -8.0, 1.0], [-8.0, 16.0, -8.0], [1.0, -8.0, 7.0]];

/// Element mass matrix, scaled by h/15.
const ME: [[f64; 3]; 3] = [[4.0, 2.0, -1.0], [2.0, 16.0, 2.0], [-1.0, 2.0, 4.0]];

#[inline]
fn shapes(xi: f64) -> [f64; 3] {
    [0.5 * xi * (xi - 1.0), 1.0 - xi * xi, 0.5 * xi * (xi + 1.0)]
}

/// y = K f with K the assembled stiffness matrix; f'^T f' in weak form.
pub fn apply_stiffness(h: f64, f: &[f64]) -> Vec<f64> {
    apply_element_matrix(&KE, 1.0 / (6.0 * h), f)
}

/// y = M f with M the assembled mass matrix.
pub fn apply_mass(h: f64, f: &[f64]) -> Vec<f64> {
    apply_element_matrix(&ME, h / 15.0, f)
}

fn apply_element_matrix(e: &[[f64; 3]; 3], scale: f64, f: &[f64]) -> Vec<f64> {
    debug_assert!(f.len() >= 3 && f.len() % 2 == 1);
    let mut out = vec![0.0; f.len()];
    for k in (0..f.len() - 2).step_by(2) {
        let fe = [f[k], f[k + 1], f[k + 2]];
        for a in 0..3 {
            let mut acc = 0.0;
            for b in 0..3 {
                acc += e[a][b] * fe[b];
            }
            out[k + a] += scale * acc;
        }
    }
    out
}

/// f^T K f, accumulated element by element.
pub fn stiffness_quadratic(h: f64, f: &[f64]) -> f64 {
    quadratic_form(&KE, 1.0 / (6.0 * h), f)
}

/// f^T M f, accumulated element by element.
pub fn mass_quadratic(h: f64, f: &[f64]) -> f64 {
    quadratic_form(&ME, h / 15.0, f)
}

fn quadratic_form(e: &[[f64; 3]; 3], scale: f64, f: &[f64]) -> f64 {
    debug_assert!(f.len() >= 3 && f.len() % 2 == 1);
    let mut total = 0.0;
    for k in (0..f.len() - 2).step_by(2) {
        let fe = [f[k], f[k + 1], f[k + 2]];
        for a in 0..3 {
            for b in 0..3 {
                total += e[a][b] * fe[a] * fe[b];
            }
        }
    }
    scale * total
}

/// Integral of the interpolant's fourth power, via 5-point Gauss per element.
///
/// The integrand is degree 8 in xi; GL5 is exact through degree 9, so this
/// is the exact integral of the piecewise-quadratic interpolant.
pub fn quartic_integral(h: f64, f: &[f64]) -> f64 {
    debug_assert!(f.len() >= 3 && f.len() % 2 == 1);
    let mut total = 0.0;
    for k in (0..f.len() - 2).step_by(2) {
        let fe = [f[k], f[k + 1], f[k + 2]];
        for (&xi, &w) in GL5_X.iter().zip(GL5_W.iter()) {
            let n = shapes(xi);
            let v = fe[0] * n[0] + fe[1] * n[1] + fe[2] * n[2];
            let v2 = v * v;
            total += w * v2 * v2;
        }
    }
    h * total
}

/// Integral of w(x)·interpolant(x)², with `x0` the coordinate of node 0.
///
/// The weight is sampled at the 5 Gauss points of each element, so a
/// constant weight reproduces `mass_quadratic` exactly.
pub fn weighted_square_integral<W: Fn(f64) -> f64>(h: f64, x0: f64, f: &[f64], w: W) -> f64 {
    debug_assert!(f.len() >= 3 && f.len() % 2 == 1);
    let mut total = 0.0;
    for k in (0..f.len() - 2).step_by(2) {
        let fe = [f[k], f[k + 1], f[k + 2]];
        let center = x0 + (k + 1) as f64 * h;
        for (&xi, &wq) in GL5_X.iter().zip(GL5_W.iter()) {
            let n = shapes(xi);
            let v = fe[0] * n[0] + fe[1] * n[1] + fe[2] * n[2];
            total += wq * w(center + xi * h) * v * v;
        }
    }
    h * total
}

/// Partial derivatives of `quartic_integral` with respect to the node values.
pub fn quartic_partials(h: f64, f: &[f64]) -> Vec<f64> {
    debug_assert!(f.len() >= 3 && f.len() % 2 == 1);
    let mut out = vec![0.0; f.len()];
    for k in (0..f.len() - 2).step_by(2) {
        let fe = [f[k], f[k + 1], f[k + 2]];
        for (&xi, &w) in GL5_X.iter().zip(GL5_W.iter()) {
            let n = shapes(xi);
            let v = fe[0] * n[0] + fe[1] * n[1] + fe[2] * n[2];
            let c = 4.0 * h * w * v * v * v;
            out[k] += c * n[0];
            out[k + 1] += c * n[1];
            out[k + 2] += c * n[2];
        }
    }
    out
}
