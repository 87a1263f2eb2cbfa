//! Symmetric Toeplitz matrix-vector products for the self-interaction term.
//!
//! The convolution energy couples the density to itself through a kernel
//! that depends only on the node distance, so the coupling matrix is
//! symmetric Toeplitz with first row K(0), K(h), K(2h), ... Small systems
//! use the direct O(n^2) product; larger ones embed the matrix in a
//! circulant and multiply through the FFT.

use num_complex::Complex;
use rustfft::{Fft, FftPlanner};
use std::sync::{Arc, Mutex, OnceLock};

/// Below this size the direct product is used; above it, the FFT path.
const FFT_THRESHOLD: usize = 2049;

fn plan_pair(m: usize) -> (Arc<dyn Fft<f64>>, Arc<dyn Fft<f64>>) {
    static PLANNER: OnceLock<Mutex<FftPlanner<f64>>> = OnceLock::new();
    let mut p = PLANNER
        .get_or_init(|| Mutex::new(FftPlanner::new()))
        .lock()
        .expect("fft planner poisoned");
    (p.plan_fft_forward(m), p.plan_fft_inverse(m))
}

/// Circulant embedding of a symmetric Toeplitz first row, transformed:
/// [K0 .. K_{n-1} 0 .. 0 K_{n-1} .. K1], so the first n entries of the
/// circulant product reproduce the Toeplitz product exactly.
fn embedded_kernel_dft(first_row: &[f64], m: usize) -> Vec<Complex<f64>> {
    let mut embedded = vec![Complex::new(0.0, 0.0); m];
    for (i, &k) in first_row.iter().enumerate() {
        embedded[i].re = k;
    }
    for (i, &k) in first_row.iter().enumerate().skip(1) {
        embedded[m - i].re = k;
    }
    let (fwd, _) = plan_pair(m);
    fwd.process(&mut embedded);
    embedded
}

/// Prepared symmetric Toeplitz operator.
#[derive(Clone, Debug)]
pub struct Convolution {
    first_row: Vec<f64>,
    /// Length of the circulant embedding (power of two >= 2n); the kernel
    /// transform is cached only when the FFT path is the default.
    m: usize,
    kernel_dft: Vec<Complex<f64>>,
}

impl Convolution {
    /// Prepare the operator from the kernel's first row (lags 0, h, 2h, ...).
    pub fn new(first_row: Vec<f64>) -> Self {
        let n = first_row.len();
        let m = (2 * n).next_power_of_two();
        let kernel_dft = if n >= FFT_THRESHOLD {
            embedded_kernel_dft(&first_row, m)
        } else {
            Vec::new()
        };
        Convolution {
            first_row,
            m,
            kernel_dft,
        }
    }

    pub fn len(&self) -> usize {
        self.first_row.len()
    }

    pub fn is_empty(&self) -> bool {
        self.first_row.is_empty()
    }

    pub fn first_row(&self) -> &[f64] {
        &self.first_row
    }

    /// y_i = sum_j K(|i-j|) x_j.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.first_row.len(), "operand length mismatch");
        if self.kernel_dft.is_empty() {
            self.apply_direct(x)
        } else {
            self.apply_fft(x)
        }
    }

    /// Direct O(n^2) product; reference path for the FFT agreement test.
    pub fn apply_direct(&self, x: &[f64]) -> Vec<f64> {
        let n = x.len();
        let k = &self.first_row;
        let mut y = vec![0.0; n];
        for i in 0..n {
            let mut acc = 0.0;
            for (j, &xj) in x.iter().enumerate() {
                acc += k[if i >= j { i - j } else { j - i }] * xj;
            }
            y[i] = acc;
        }
        y
    }

    /// Circulant-embedded FFT product.
    pub fn apply_fft(&self, x: &[f64]) -> Vec<f64> {
        let n = x.len();
        let owned;
        let kdft = if self.kernel_dft.is_empty() {
            owned = embedded_kernel_dft(&self.first_row, self.m);
            &owned
        } else {
            &self.kernel_dft
        };

        let (fwd, inv) = plan_pair(self.m);
        let mut buf = vec![Complex::new(0.0, 0.0); self.m];
        for (b, &v) in buf.iter_mut().zip(x.iter()) {
            b.re = v;
        }
        fwd.process(&mut buf);
        for (b, k) in buf.iter_mut().zip(kdft.iter()) {
            *b *= k;
        }
        inv.process(&mut buf);
        let scale = 1.0 / self.m as f64;
        buf[..n].iter().map(|c| c.re * scale).collect()
    }
}
