//! Closed-form Gaussian wave packets.
//!
//! Every quantity the grid pipeline estimates numerically has an exact
//! value on the family
//!
//! `f(x) = amplitude · exp(-width · |x - center|² + i modulation · (x - center))`
//!
//! with `Re width > 0`: Lebesgue norms, radial moments, the Fourier
//! transform (again a packet), and the free Schrödinger and heat flows.
//! The experiments lean on these as ground truth.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::field::{GridFunction, GridSpec};
use crate::params::{rational_to_f64, Index};

/// Volume of the unit ball in `R^d`.
pub fn unit_ball_volume(dim: usize) -> f64 {
    let d = dim as f64;
    std::f64::consts::PI.powf(d / 2.0) / gamma(d / 2.0 + 1.0)
}

/// Surface area of the unit sphere `S^{d-1}` in `R^d`.
pub fn sphere_area(dim: usize) -> f64 {
    let d = dim as f64;
    2.0 * std::f64::consts::PI.powf(d / 2.0) / gamma(d / 2.0)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GaussianPacket {
    pub dim: usize,
    pub amplitude: Complex64,
    pub width: Complex64,
    pub center: Vec<f64>,
    pub modulation: Vec<f64>,
}

impl GaussianPacket {
    pub fn new(
        dim: usize,
        amplitude: Complex64,
        width: Complex64,
        center: Vec<f64>,
        modulation: Vec<f64>,
    ) -> Result<GaussianPacket> {
        if !(1..=3).contains(&dim) {
            return Err(Error::Config(format!(
                "packet dimension must be 1, 2, or 3, got {dim}"
            )));
        }
        if !(width.re > 0.0 && width.re.is_finite() && width.im.is_finite()) {
            return Err(Error::Config(format!(
                "packet width must have positive real part, got {width}"
            )));
        }
        if !(amplitude.re.is_finite() && amplitude.im.is_finite()) {
            return Err(Error::Config("packet amplitude must be finite".into()));
        }
        if center.len() != dim || modulation.len() != dim {
            return Err(Error::Config(format!(
                "center/modulation must have {dim} coordinates"
            )));
        }
        if center.iter().chain(&modulation).any(|c| !c.is_finite()) {
            return Err(Error::Config(
                "center/modulation coordinates must be finite".into(),
            ));
        }
        Ok(GaussianPacket {
            dim,
            amplitude,
            width,
            center,
            modulation,
        })
    }

    /// The unit packet `e^{-|x|²}`.
    pub fn standard(dim: usize) -> GaussianPacket {
        GaussianPacket {
            dim,
            amplitude: Complex64::new(1.0, 0.0),
            width: Complex64::new(1.0, 0.0),
            center: vec![0.0; dim],
            modulation: vec![0.0; dim],
        }
    }

    /// Centered real packet `e^{-alpha |x|²}`.
    pub fn isotropic(dim: usize, alpha: f64) -> Result<GaussianPacket> {
        GaussianPacket::new(
            dim,
            Complex64::new(1.0, 0.0),
            Complex64::new(alpha, 0.0),
            vec![0.0; dim],
            vec![0.0; dim],
        )
    }

    pub fn eval(&self, x: &[f64]) -> Complex64 {
        let mut r2 = 0.0;
        let mut phase = 0.0;
        for axis in 0..self.dim {
            let y = x[axis] - self.center[axis];
            r2 += y * y;
            phase += self.modulation[axis] * y;
        }
        self.amplitude * (Complex64::new(0.0, phase) - self.width * r2).exp()
    }

    /// Samples the packet on a grid.
    pub fn sample(&self, spec: &GridSpec) -> Result<GridFunction> {
        if spec.dim != self.dim {
            return Err(Error::GridMismatch(format!(
                "packet dimension {} vs grid dimension {}",
                self.dim, spec.dim
            )));
        }
        Ok(GridFunction::from_fn(*spec, |x| self.eval(x)))
    }

    /// Spatial reflection `f(-x)`: flips center and modulation.
    pub fn reflected(&self) -> GaussianPacket {
        GaussianPacket {
            dim: self.dim,
            amplitude: self.amplitude,
            width: self.width,
            center: self.center.iter().map(|c| -c).collect(),
            modulation: self.modulation.iter().map(|m| -m).collect(),
        }
    }

    /// Fourier transform under `f̂(ξ) = ∫ e^{-i x·ξ} f(x) dx`:
    ///
    /// for `f = c · e^{-α|x-x₀|² + iξ₀·(x-x₀)}` the transform is again a
    /// packet with width `1/(4α)`, center `ξ₀`, modulation `-x₀`, and
    /// amplitude `c (π/α)^{d/2} e^{-i x₀·ξ₀}`.
    pub fn fourier(&self) -> GaussianPacket {
        let alpha = self.width;
        let pref = (Complex64::new(std::f64::consts::PI, 0.0) / alpha)
            .powf(self.dim as f64 / 2.0);
        let x0_dot_xi0: f64 = self
            .center
            .iter()
            .zip(&self.modulation)
            .map(|(x, m)| x * m)
            .sum();
        GaussianPacket {
            dim: self.dim,
            amplitude: self.amplitude * pref * Complex64::from_polar(1.0, -x0_dot_xi0),
            width: (4.0 * alpha).finv(),
            center: self.modulation.clone(),
            modulation: self.center.iter().map(|c| -c).collect(),
        }
    }

    /// Inverse transform `(2π)^{-d} ∫ e^{+i x·ξ} f(ξ) dξ`.
    pub fn inverse_fourier(&self) -> GaussianPacket {
        let mut out = self.reflected().fourier();
        out.amplitude *= (std::f64::consts::TAU).powi(-(self.dim as i32));
        out
    }

    /// `‖f‖_p = |c| (π / (p Re α))^{d/(2p)}`, sup `|c|` at `p = ∞`.
    pub fn lp_norm(&self, p: Index) -> f64 {
        let c = self.amplitude.norm();
        match p {
            Index::Infinity => c,
            Index::Finite(r) => {
                let pf = rational_to_f64(r);
                let w = self.width.re;
                c * (std::f64::consts::PI / (pf * w)).powf(self.dim as f64 / (2.0 * pf))
            }
        }
    }

    /// Radial moment about the packet's own center:
    /// `‖ |x - center|^b f ‖_a`. For finite `a`,
    /// `|c| [ ω_{d-1} Γ((ab+d)/2) / (2 (a Re α)^{(ab+d)/2}) ]^{1/a}`;
    /// for `a = ∞`, `|c| (b / (2 e Re α))^{b/2}`.
    pub fn moment(&self, a: Index, b: f64) -> Result<f64> {
        if !(b >= 0.0 && b.is_finite()) {
            return Err(Error::InvalidIndex(format!(
                "moment power must be finite and >= 0, got {b}"
            )));
        }
        let c = self.amplitude.norm();
        let w = self.width.re;
        let d = self.dim as f64;
        match a {
            Index::Infinity => {
                if b == 0.0 {
                    Ok(c)
                } else {
                    Ok(c * (b / (2.0 * w * std::f64::consts::E)).powf(b / 2.0))
                }
            }
            Index::Finite(r) => {
                let af = rational_to_f64(r);
                let exponent = (af * b + d) / 2.0;
                let integral =
                    sphere_area(self.dim) * gamma(exponent) / (2.0 * (af * w).powf(exponent));
                Ok(c * integral.powf(1.0 / af))
            }
        }
    }

    /// `‖f‖_1 / ‖f‖_q`.
    pub fn h0(&self, q: Index) -> Result<f64> {
        Ok(self.lp_norm(Index::from_int(1)?) / self.lp_norm(q))
    }

    /// `‖ |x - center|^r f ‖_2 / ‖f‖_q`.
    pub fn h1(&self, r: f64, q: Index) -> Result<f64> {
        Ok(self.moment(Index::from_int(2)?, r)? / self.lp_norm(q))
    }

    /// Free Schrödinger flow `u(t) = e^{itΔ} f` (multiplier `e^{-it|ξ|²}`):
    /// with `z = 1 + 4iαt`, the packet keeps its modulation, the width
    /// becomes `α/z`, the center drifts to `x₀ + 2tξ₀`, and the amplitude
    /// picks up `z^{-d/2} e^{+it|ξ₀|²}` (phase sign fixed by writing the
    /// carrier as `ξ₀·(x - center(t))`).
    pub fn schrodinger(&self, t: f64) -> GaussianPacket {
        let alpha = self.width;
        let z = Complex64::new(1.0, 0.0) + Complex64::new(0.0, 4.0 * t) * alpha;
        let xi0_sq: f64 = self.modulation.iter().map(|m| m * m).sum();
        let amp = self.amplitude
            * z.powf(-(self.dim as f64) / 2.0)
            * Complex64::from_polar(1.0, t * xi0_sq);
        GaussianPacket {
            dim: self.dim,
            amplitude: amp,
            width: alpha / z,
            center: self
                .center
                .iter()
                .zip(&self.modulation)
                .map(|(x, m)| x + 2.0 * t * m)
                .collect(),
            modulation: self.modulation.clone(),
        }
    }

    /// Heat flow `u(t) = e^{tΔ} f` for real-width, unmodulated packets:
    /// `z = 1 + 4αt`, width `α/z`, amplitude `c z^{-d/2}`.
    pub fn heat(&self, t: f64) -> Result<GaussianPacket> {
        if t < 0.0 {
            return Err(Error::Window(format!(
                "heat flow runs forward in time only, got t = {t}"
            )));
        }
        if self.width.im != 0.0 {
            return Err(Error::OracleUnsupported(
                "heat flow oracle requires a real packet width".into(),
            ));
        }
        if self.modulation.iter().any(|&m| m != 0.0) {
            return Err(Error::OracleUnsupported(
                "heat flow oracle requires an unmodulated packet".into(),
            ));
        }
        let z = 1.0 + 4.0 * self.width.re * t;
        Ok(GaussianPacket {
            dim: self.dim,
            amplitude: self.amplitude * z.powf(-(self.dim as f64) / 2.0),
            width: Complex64::new(self.width.re / z, 0.0),
            center: self.center.clone(),
            modulation: self.modulation.clone(),
        })
    }
}

/// Predicted large-time growth exponent of `‖ |x|^b e^{itΔ} f ‖_a` for
/// localized data: `d(1/a + b/d - 1/2)`.
pub fn schrodinger_moment_exponent(dim: usize, a: Index, b: f64) -> f64 {
    let d = dim as f64;
    d * (rational_to_f64(a.recip()) + b / d - 0.5)
}

/// Predicted large-time growth exponent of `‖ |x|^b e^{tΔ} f ‖_a`:
/// `(d/2)(1/a + b/d - 1)`.
pub fn heat_moment_exponent(dim: usize, a: Index, b: f64) -> f64 {
    let d = dim as f64;
    0.5 * d * (rational_to_f64(a.recip()) + b / d - 1.0)
}
