//! Linear constant-coefficient flows as Fourier multipliers.

use num_complex::Complex64;

use super::{Equation, EvolutionTrace};
use crate::error::{Error, Result};
use crate::field::{apply_multiplier, GridFunction};

fn radial(xi: &[f64]) -> f64 {
    xi.iter().map(|c| c * c).sum::<f64>().sqrt()
}

/// `u(t) = e^{itΔ} u_0`, realized as the multiplier `e^{-it|ξ|²}`.
/// Unitary on the grid; warns when the evolved state reaches the box edge.
pub fn schrodinger_evolve(u0: &GridFunction, t: f64) -> GridFunction {
    let out = apply_multiplier(u0, |xi| {
        let r = radial(xi);
        Complex64::from_polar(1.0, -t * r * r)
    });
    out.warn_if_truncated("schrodinger_evolve");
    out
}

/// `u(t) = e^{tΔ} u_0` (multiplier `e^{-t|ξ|²}`), forward time only.
pub fn heat_evolve(u0: &GridFunction, t: f64) -> Result<GridFunction> {
    if t < 0.0 {
        return Err(Error::Window(format!(
            "heat flow runs forward in time only, got t = {t}"
        )));
    }
    Ok(apply_multiplier(u0, |xi| {
        let r = radial(xi);
        Complex64::new((-t * r * r).exp(), 0.0)
    }))
}

/// Branch selector for the half-wave flow `e^{±it|ξ|}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HalfWaveSign {
    Plus,
    Minus,
}

/// Half-wave flow: multiplier `e^{+it|ξ|}` (`Plus`) or `e^{-it|ξ|}`
/// (`Minus`). In one dimension, `Minus` translates a positive-frequency
/// packet to the right by `t`.
pub fn half_wave_evolve(u0: &GridFunction, t: f64, sign: HalfWaveSign) -> GridFunction {
    let s = match sign {
        HalfWaveSign::Plus => 1.0,
        HalfWaveSign::Minus => -1.0,
    };
    apply_multiplier(u0, |xi| Complex64::from_polar(1.0, s * t * radial(xi)))
}

fn uniform_times(t_max: f64, dt: f64) -> Result<Vec<f64>> {
    if !(dt.is_finite() && dt > 0.0 && t_max.is_finite() && t_max > 0.0) {
        return Err(Error::Window(format!(
            "need positive dt and horizon, got dt = {dt}, t_max = {t_max}"
        )));
    }
    let steps = (t_max / dt).round() as usize;
    if steps < 1 || (steps as f64 * dt - t_max).abs() > 1e-9 * dt {
        return Err(Error::Window(format!(
            "horizon {t_max} is not an integer multiple of dt = {dt}"
        )));
    }
    Ok((0..=steps).map(|j| j as f64 * dt).collect())
}

/// Free Schrödinger trace over `0, dt, …, t_max` (snapshots independent,
/// each evolved directly from `u_0`).
pub fn schrodinger_trace(u0: &GridFunction, t_max: f64, dt: f64) -> Result<EvolutionTrace> {
    let times = uniform_times(t_max, dt)?;
    let snapshots: Vec<GridFunction> = times
        .iter()
        .map(|&t| schrodinger_evolve(u0, t))
        .collect();
    EvolutionTrace::new(Equation::Schrodinger, times, snapshots, "multiplier")
}

/// Heat trace over `0, dt, …, t_max`.
pub fn heat_trace(u0: &GridFunction, t_max: f64, dt: f64) -> Result<EvolutionTrace> {
    let times = uniform_times(t_max, dt)?;
    let snapshots = times
        .iter()
        .map(|&t| heat_evolve(u0, t))
        .collect::<Result<Vec<_>>>()?;
    EvolutionTrace::new(Equation::Heat, times, snapshots, "multiplier")
}
