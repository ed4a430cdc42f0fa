//! Polar sampling grid on a closed subdisk `|z| <= r_max < 1`.

use std::f64::consts::TAU;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{param, Result};
use crate::series::TruncatedSeries;

/// Sample points `r_i e^{i theta_j}` with `r_i = r_max i / n_radii`
/// (`i = 1..=n_radii`) and `theta_j = 2 pi j / n_angles`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiskGrid {
    pub r_max: f64,
    pub n_radii: usize,
    pub n_angles: usize,
}

impl Default for DiskGrid {
    fn default() -> Self {
        Self {
            r_max: 0.95,
            n_radii: 24,
            n_angles: 256,
        }
    }
}

impl DiskGrid {
    pub fn new(r_max: f64, n_radii: usize, n_angles: usize) -> Result<Self> {
        let grid = Self {
            r_max,
            n_radii,
            n_angles,
        };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r_max > 0.0 && self.r_max < 1.0) {
            return Err(param(format!("r_max = {} must lie in (0, 1)", self.r_max)));
        }
        if self.n_radii == 0 || self.n_angles == 0 {
            return Err(param("grid needs at least one radius and one angle"));
        }
        Ok(())
    }

    pub fn with_r_max(self, r_max: f64) -> Result<Self> {
        Self::new(r_max, self.n_radii, self.n_angles)
    }

    pub fn len(&self) -> usize {
        self.n_radii * self.n_angles
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn radius(&self, i: usize) -> f64 {
        self.r_max * (i + 1) as f64 / self.n_radii as f64
    }

    pub fn radii(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_radii).map(|i| self.radius(i))
    }

    pub fn angle(&self, j: usize) -> f64 {
        TAU * j as f64 / self.n_angles as f64
    }

    /// Point with flat index `i * n_angles + j`.
    pub fn point(&self, index: usize) -> Complex64 {
        let (i, j) = (index / self.n_angles, index % self.n_angles);
        Complex64::from_polar(self.radius(i), self.angle(j))
    }

    pub fn points(&self) -> impl Iterator<Item = Complex64> + '_ {
        (0..self.len()).map(|idx| self.point(idx))
    }

    pub(crate) fn sampler(&self) -> GridSampler {
        GridSampler {
            grid: *self,
            plan: FftPlanner::new().plan_fft_inverse(self.n_angles),
        }
    }
}

/// Evaluates series on every grid point, one inverse FFT per radius.
///
/// On a circle of `M` equally spaced angles,
/// `f(r w^j) = sum_m b_m w^{jm}` with `b_m = sum_{k = m mod M} c_k r^k`, so
/// folding the scaled coefficients modulo `M` gives exact values for any
/// truncation order.
pub(crate) struct GridSampler {
    grid: DiskGrid,
    plan: Arc<dyn Fft<f64>>,
}

impl GridSampler {
    pub(crate) fn grid(&self) -> &DiskGrid {
        &self.grid
    }

    /// Values in flat index order.
    pub(crate) fn evaluate(&self, f: &TruncatedSeries) -> Vec<Complex64> {
        let m = self.grid.n_angles;
        let mut out = Vec::with_capacity(self.grid.len());
        let mut buffer = vec![Complex64::new(0.0, 0.0); m];
        for r in self.grid.radii() {
            buffer
                .iter_mut()
                .for_each(|b| *b = Complex64::new(0.0, 0.0));
            let mut power = 1.0;
            for (k, c) in f.coeffs().iter().enumerate() {
                buffer[k % m] += c * power;
                power *= r;
            }
            self.plan.process(&mut buffer);
            out.extend_from_slice(&buffer);
        }
        out
    }
}
