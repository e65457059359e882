//! Sampled complex fields on uniform boxes `[-L, L)^dim` and the quadrature,
//! transform, and restriction operations the experiments are built from.
//!
//! Samples live at `x_j = -L + j·h` with `h = 2L/N`, `N` a power of two, in
//! row-major order. Integrals use the midpoint/trapezoid value `h^dim · Σ`,
//! which is spectrally accurate for fields that decay inside the box; a
//! boundary-layer report flags fields that do not.

mod fourier;
mod io;
mod norms;
mod project;
mod restrict;
mod spacetime;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use fourier::{apply_multiplier, fourier, inverse_fourier};
pub use io::{read_grid_function, write_grid_function};
pub use norms::{h0_ratio, h1_ratio, lp_norm, weighted_norm, NormSpec};
pub use project::{bump_profile, dyadic_multiplier, lp_project, sharp_band_limit};
pub use restrict::{restrict, set_measure, IndicatorSet};
pub use spacetime::{spacetime_norm, SpacetimeWeight};

pub(crate) use fourier::{field_from_raw_spectrum, freq_point, raw_spectrum};
pub(crate) use norms::{pairwise_max, pairwise_sum};

/// Default relative tolerance for the boundary-layer truncation guard.
pub const TAIL_TOLERANCE: f64 = 1e-8;

/// Geometry of a sampling box: dimension, points per axis, half width.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub dim: usize,
    pub points_per_axis: usize,
    pub half_width: f64,
}

impl GridSpec {
    pub fn new(dim: usize, points_per_axis: usize, half_width: f64) -> Result<GridSpec> {
        if !(1..=3).contains(&dim) {
            return Err(Error::InvalidGrid(format!(
                "dimension must be 1, 2, or 3, got {dim}"
            )));
        }
        let n = points_per_axis;
        if n < 4 || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "points per axis must be a power of two >= 4, got {n}"
            )));
        }
        let cap = [4096usize, 512, 128][dim - 1];
        if n > cap {
            return Err(Error::InvalidGrid(format!(
                "points per axis capped at {cap} in dimension {dim}, got {n}"
            )));
        }
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "half width must be positive and finite, got {half_width}"
            )));
        }
        Ok(GridSpec {
            dim,
            points_per_axis: n,
            half_width,
        })
    }

    /// Grid step `h = 2L/N`.
    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.points_per_axis as f64
    }

    /// Volume element `h^dim` of one cell.
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    /// Total number of samples `N^dim`.
    pub fn len(&self) -> usize {
        self.points_per_axis.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Coordinate of index `j` along one axis: `-L + j·h`.
    pub fn coord(&self, j: usize) -> f64 {
        -self.half_width + j as f64 * self.spacing()
    }

    /// Frequency step of the dual grid, `Δξ = π/L`.
    pub fn freq_spacing(&self) -> f64 {
        std::f64::consts::PI / self.half_width
    }

    /// Largest resolvable frequency magnitude, `ξ_max = π/h = N·Δξ/2`.
    pub fn freq_max(&self) -> f64 {
        std::f64::consts::PI / self.spacing()
    }

    /// The dual grid: same point count, half width `N·π/(2L)`. Applying it
    /// twice returns the original geometry.
    pub fn dual(&self) -> GridSpec {
        GridSpec {
            dim: self.dim,
            points_per_axis: self.points_per_axis,
            half_width: 0.5 * self.points_per_axis as f64 * self.freq_spacing(),
        }
    }

    /// Decodes a flat row-major index into per-axis indices.
    pub fn decode(&self, flat: usize, out: &mut [usize; 3]) {
        let n = self.points_per_axis;
        let mut rest = flat;
        for axis in (0..self.dim).rev() {
            out[axis] = rest % n;
            rest /= n;
        }
    }

    /// Writes the coordinates of a flat index into `out[..dim]`.
    pub fn point(&self, flat: usize, out: &mut [f64; 3]) {
        let mut idx = [0usize; 3];
        self.decode(flat, &mut idx);
        for axis in 0..self.dim {
            out[axis] = self.coord(idx[axis]);
        }
    }

    fn compatible(&self, other: &GridSpec) -> Result<()> {
        if self.dim != other.dim
            || self.points_per_axis != other.points_per_axis
            || (self.half_width - other.half_width).abs()
                > 1e-12 * self.half_width.max(other.half_width)
        {
            return Err(Error::GridMismatch(format!(
                "{self:?} vs {other:?}"
            )));
        }
        Ok(())
    }
}

/// A complex field sampled on a [`GridSpec`] box, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    spec: GridSpec,
    samples: Vec<Complex64>,
}

impl GridFunction {
    pub fn zeros(spec: GridSpec) -> GridFunction {
        GridFunction {
            spec,
            samples: vec![Complex64::new(0.0, 0.0); spec.len()],
        }
    }

    pub fn from_samples(spec: GridSpec, samples: Vec<Complex64>) -> Result<GridFunction> {
        if samples.len() != spec.len() {
            return Err(Error::InvalidGrid(format!(
                "expected {} samples, got {}",
                spec.len(),
                samples.len()
            )));
        }
        Ok(GridFunction { spec, samples })
    }

    /// Samples `f` at every grid point.
    pub fn from_fn<F: Fn(&[f64]) -> Complex64>(spec: GridSpec, f: F) -> GridFunction {
        let mut samples = Vec::with_capacity(spec.len());
        let mut x = [0.0f64; 3];
        for flat in 0..spec.len() {
            spec.point(flat, &mut x);
            samples.push(f(&x[..spec.dim]));
        }
        GridFunction { spec, samples }
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn samples_mut(&mut self) -> &mut [Complex64] {
        &mut self.samples
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    /// Checks that two fields live on the same grid.
    pub fn same_grid(&self, other: &GridFunction) -> Result<()> {
        self.spec.compatible(other.spec())
    }

    /// Truncation guard: the largest sample magnitude on the outermost index
    /// layer versus the largest overall.
    pub fn tail_report(&self) -> TailReport {
        let n = self.spec.points_per_axis;
        let mut idx = [0usize; 3];
        let mut boundary_max = 0.0f64;
        let mut global_max = 0.0f64;
        for flat in 0..self.samples.len() {
            let mag = self.samples[flat].norm();
            if mag > global_max {
                global_max = mag;
            }
            self.spec.decode(flat, &mut idx);
            let on_boundary = idx[..self.spec.dim]
                .iter()
                .any(|&i| i == 0 || i == n - 1);
            if on_boundary && mag > boundary_max {
                boundary_max = mag;
            }
        }
        TailReport {
            boundary_max,
            global_max,
        }
    }

    /// Logs a warning when the boundary layer carries more than
    /// [`TAIL_TOLERANCE`] of the peak magnitude.
    pub fn warn_if_truncated(&self, context: &str) -> TailReport {
        let report = self.tail_report();
        if !report.ok() {
            log::warn!(
                "{context}: boundary layer magnitude {:.3e} exceeds {:.0e} x peak {:.3e}; \
                 enlarge the box half width",
                report.boundary_max,
                TAIL_TOLERANCE,
                report.global_max
            );
        }
        report
    }

    /// Pointwise scale by a complex constant.
    pub fn scaled(&self, factor: Complex64) -> GridFunction {
        GridFunction {
            spec: self.spec,
            samples: self.samples.iter().map(|z| z * factor).collect(),
        }
    }
}

/// Boundary-layer truncation summary for one field.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct TailReport {
    pub boundary_max: f64,
    pub global_max: f64,
}

impl TailReport {
    /// True when the boundary layer is negligible (or the field vanishes).
    pub fn ok(&self) -> bool {
        self.ok_at(TAIL_TOLERANCE)
    }

    pub fn ok_at(&self, tolerance: f64) -> bool {
        self.boundary_max <= tolerance * self.global_max || self.global_max == 0.0
    }

    /// Boundary-to-peak ratio (zero for the zero field).
    pub fn ratio(&self) -> f64 {
        if self.global_max == 0.0 {
            0.0
        } else {
            self.boundary_max / self.global_max
        }
    }
}
