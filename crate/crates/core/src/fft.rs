//! Unitary two-dimensional DFT on centered grids.
//!
//! Both axes use the layout of [`Grid`](crate::grid::Grid): sample `i` has coordinate
//! `i - n/2`, so the zero frequency sits at index `n/2`. The forward transform is
//!
//! ```text
//! X[j, l] = (1/n) Σ_{k, m} x[k, m] exp(-2πi ((j - n/2)(k - n/2) + (l - n/2)(m - n/2)) / n)
//! ```
//!
//! and the inverse flips the exponent sign. Since n is even, the centered layout is an
//! exact roll by n/2 of the standard layout.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::par;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// Kernel `exp(-i q·x)`.
    Forward,
    /// Kernel `exp(+i q·x)`.
    Inverse,
}

/// Precomputed row transforms for an n×n centered unitary DFT.
pub struct CenteredFft2 {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl CenteredFft2 {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        CenteredFft2 {
            n,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Transforms `data` (row-major, n×n) in place.
    pub fn process(&self, data: &mut [Complex64], direction: Direction) {
        let n = self.n;
        assert_eq!(data.len(), n * n, "buffer does not match the {n}x{n} plan");
        let plan = match direction {
            Direction::Forward => &self.forward,
            Direction::Inverse => &self.inverse,
        };
        swap_quadrants(data, n);
        transform_rows(plan.as_ref(), data, n);
        let mut t = transpose(data, n);
        transform_rows(plan.as_ref(), &mut t, n);
        let back = transpose(&t, n);
        data.copy_from_slice(&back);
        swap_quadrants(data, n);
        let scale = 1.0 / n as f64;
        par::for_each_row_mut(data, n, |_, row| {
            for v in row.iter_mut() {
                *v *= scale;
            }
        });
    }
}

fn transform_rows(plan: &dyn Fft<f64>, data: &mut [Complex64], n: usize) {
    let scratch_len = plan.get_inplace_scratch_len();
    par::for_each_row_mut(data, n, |_, row| {
        let mut scratch = vec![Complex64::new(0.0, 0.0); scratch_len];
        plan.process_with_scratch(row, &mut scratch);
    });
}

fn transpose(data: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); n * n];
    par::for_each_row_mut(&mut out, n, |j, row| {
        for (i, v) in row.iter_mut().enumerate() {
            *v = data[i * n + j];
        }
    });
    out
}

/// Rolls both axes by n/2 (fftshift for even n; its own inverse).
pub fn swap_quadrants(data: &mut [Complex64], n: usize) {
    let h = n / 2;
    for j in 0..h {
        let (top, bottom) = data.split_at_mut((j + h) * n);
        let a = &mut top[j * n..(j + 1) * n];
        let b = &mut bottom[..n];
        let (a_left, a_right) = a.split_at_mut(h);
        let (b_left, b_right) = b.split_at_mut(h);
        a_left.swap_with_slice(b_right);
        a_right.swap_with_slice(b_left);
    }
}
