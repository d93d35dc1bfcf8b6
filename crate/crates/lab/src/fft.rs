//! Separable n-dimensional complex FFT on a cubic grid, with the unitary
//! continuum scaling `û = (Δx/√(2π))ⁿ · DFT(u)`.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use sigmalab_core::grid::GridSpec;

pub struct Transform {
    n: usize,
    dims: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    forward_scale: f64,
    inverse_scale: f64,
}

impl Transform {
    pub fn new(grid: &GridSpec) -> Self {
        let n = grid.points_per_dim;
        let mut planner = FftPlanner::new();
        let dims = grid.n_dim as usize;
        let c = grid.dx() / (2.0 * std::f64::consts::PI).sqrt();
        let forward_scale = c.powi(dims as i32);
        let inverse_scale = 1.0 / (forward_scale * (n as f64).powi(dims as i32));
        Transform { n, dims, forward: planner.plan_fft_forward(n), inverse: planner.plan_fft_inverse(n), forward_scale, inverse_scale }
    }

    pub fn len(&self) -> usize {
        self.n.pow(self.dims as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Physical values to unitary-normalised coefficients, in place.
    pub fn forward(&self, data: &mut [Complex64]) {
        self.apply(&self.forward, data);
        for z in data.iter_mut() {
            *z *= self.forward_scale;
        }
    }

    /// Coefficients back to physical values, in place.
    pub fn inverse(&self, data: &mut [Complex64]) {
        self.apply(&self.inverse, data);
        for z in data.iter_mut() {
            *z *= self.inverse_scale;
        }
    }

    fn apply(&self, plan: &Arc<dyn Fft<f64>>, data: &mut [Complex64]) {
        assert_eq!(data.len(), self.len(), "buffer does not match the grid");
        let n = self.n;
        let mut scratch = vec![Complex64::new(0.0, 0.0); plan.get_inplace_scratch_len()];
        // last axis is contiguous
        plan.process_with_scratch(data, &mut scratch);
        let mut line = vec![Complex64::new(0.0, 0.0); n];
        for axis in 0..self.dims.saturating_sub(1) {
            let stride = n.pow((self.dims - 1 - axis) as u32);
            let block = stride * n;
            for start in (0..data.len()).step_by(block) {
                for offset in 0..stride {
                    let base = start + offset;
                    for (k, z) in line.iter_mut().enumerate() {
                        *z = data[base + k * stride];
                    }
                    plan.process_with_scratch(&mut line, &mut scratch);
                    for (k, z) in line.iter().enumerate() {
                        data[base + k * stride] = *z;
                    }
                }
            }
        }
    }
}
