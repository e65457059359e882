//! Power-law fits of moment growth along dispersive flows, and the
//! frequency-localized wave-energy variant. All fits are least squares in
//! log-log over a geometric time grid; sample times whose evolved state is
//! not truncation-safe are excluded and reported rather than fitted.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{weighted_norm, GridFunction, NormSpec};
use crate::oracles::{
    heat_moment_exponent, schrodinger_moment_exponent, GaussianPacket,
};
use crate::params::{rational_to_f64, Index};
use crate::propagators::{
    heat_evolve, projected_energy, projected_energy_density, schrodinger_evolve, WaveState,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MomentKind {
    Schrodinger,
    Heat,
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthFit {
    pub slope: f64,
    pub intercept: f64,
    pub predicted: f64,
    pub rel_err: f64,
    /// Sample times dropped because the evolved state touched the boundary.
    pub excluded: Vec<f64>,
    pub points: usize,
    /// The fitted `(t, moment)` samples, for plotting and cross-checks.
    pub series: Vec<(f64, f64)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct WaveGrowth {
    pub slope: f64,
    pub predicted_lower: f64,
    pub ok: bool,
    /// Largest relative deviation of the projected energy from its initial
    /// value across the fitted times.
    pub energy_drift: f64,
    pub excluded: Vec<f64>,
}

/// Least-squares line through `(ln t, ln y)`; returns `(slope, intercept)`.
pub fn log_log_fit(ts: &[f64], ys: &[f64]) -> Result<(f64, f64)> {
    if ts.len() != ys.len() || ts.len() < 2 {
        return Err(Error::Config(format!(
            "fit needs matching sample lists with at least 2 points, got {} and {}",
            ts.len(),
            ys.len()
        )));
    }
    if ts.iter().chain(ys).any(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(Error::Config(
            "log-log fit needs strictly positive finite samples".into(),
        ));
    }
    let n = ts.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for (&t, &y) in ts.iter().zip(ys) {
        let (x, y) = (t.ln(), y.ln());
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    let denom = n * sxx - sx * sx;
    if denom <= 0.0 {
        return Err(Error::Config("fit times are degenerate".into()));
    }
    let slope = (n * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / n;
    Ok((slope, intercept))
}

fn check_moment_indices(dim: usize, a: Index, b: f64) -> Result<()> {
    if !(b > 0.0 && b.is_finite()) {
        return Err(Error::Inadmissible(vec![format!(
            "moment power must be positive and finite, got b = {b}"
        )]));
    }
    let crit = dim as f64 / (dim as f64 * rational_to_f64(a.recip()) + b);
    if !(crit < 2.0) {
        return Err(Error::Inadmissible(vec![format!(
            "requires critical index n/(n/a + b) = {crit} < 2"
        )]));
    }
    Ok(())
}

fn predicted_exponent(kind: MomentKind, dim: usize, a: Index, b: f64) -> f64 {
    match kind {
        MomentKind::Schrodinger => schrodinger_moment_exponent(dim, a, b),
        MomentKind::Heat => heat_moment_exponent(dim, a, b),
    }
}

fn relative_to_prediction(slope: f64, predicted: f64) -> f64 {
    if predicted == 0.0 {
        (slope - predicted).abs()
    } else {
        (slope - predicted).abs() / predicted.abs()
    }
}

/// Requires the surviving samples to still form a legitimate power-law fit
/// window: at least 12 points spanning at least a decade.
fn ensure_fit_window(kept: &[f64], excluded: &[f64]) -> Result<()> {
    let enough = kept.len() >= 12
        && kept.last().unwrap_or(&0.0) / kept.first().unwrap_or(&1.0) >= 10.0 - 1e-9;
    if enough {
        Ok(())
    } else {
        Err(Error::Truncation(format!(
            "after excluding {excluded:?} the remaining {} times no longer span \
             a decade with 12 points; enlarge the box half width",
            kept.len()
        )))
    }
}

/// Slope fit of `t ↦ ‖ |x - c|^b u(t) ‖_{L^a}` on closed-form Gaussian
/// traces, with the moment taken about the packet's own (stationary)
/// center. Requires an unmodulated packet so the center does not drift.
pub fn moment_growth_fit_analytic(
    kind: MomentKind,
    packet: &GaussianPacket,
    a: Index,
    b: f64,
    t_grid: &[f64],
) -> Result<GrowthFit> {
    check_moment_indices(packet.dim, a, b)?;
    if packet.modulation.iter().any(|&m| m != 0.0) {
        return Err(Error::OracleUnsupported(
            "analytic moment traces need an unmodulated packet; its center would drift".into(),
        ));
    }
    ensure_fit_window(t_grid, &[])?;
    let values = t_grid
        .iter()
        .map(|&t| {
            let evolved = match kind {
                MomentKind::Schrodinger => packet.schrodinger(t),
                MomentKind::Heat => packet.heat(t)?,
            };
            evolved.moment(a, b)
        })
        .collect::<Result<Vec<_>>>()?;
    let (slope, intercept) = log_log_fit(t_grid, &values)?;
    let predicted = predicted_exponent(kind, packet.dim, a, b);
    Ok(GrowthFit {
        slope,
        intercept,
        predicted,
        rel_err: relative_to_prediction(slope, predicted),
        excluded: Vec::new(),
        points: t_grid.len(),
        series: t_grid.iter().copied().zip(values).collect(),
    })
}

/// Slope fit of the grid-evolved moment `t ↦ ‖ |x - x_0|^b u(t) ‖_{L^a}`.
/// Times whose evolved state fails the boundary-layer guard are excluded
/// and reported; the fit aborts if the survivors no longer span a decade
/// with 12 points.
pub fn moment_growth_fit(
    kind: MomentKind,
    u0: &GridFunction,
    a: Index,
    b: f64,
    x0: &[f64],
    t_grid: &[f64],
) -> Result<GrowthFit> {
    check_moment_indices(u0.spec().dim, a, b)?;
    let norm_spec = NormSpec::new(a, b, x0.to_vec())?;
    let mut kept_t = Vec::new();
    let mut kept_v = Vec::new();
    let mut excluded = Vec::new();
    for &t in t_grid {
        let state = match kind {
            MomentKind::Schrodinger => schrodinger_evolve(u0, t),
            MomentKind::Heat => heat_evolve(u0, t)?,
        };
        if state.tail_report().ok() {
            kept_t.push(t);
            kept_v.push(weighted_norm(&state, &norm_spec)?);
        } else {
            excluded.push(t);
        }
    }
    ensure_fit_window(&kept_t, &excluded)?;
    let (slope, intercept) = log_log_fit(&kept_t, &kept_v)?;
    let predicted = predicted_exponent(kind, u0.spec().dim, a, b);
    Ok(GrowthFit {
        slope,
        intercept,
        predicted,
        rel_err: relative_to_prediction(slope, predicted),
        excluded,
        points: kept_t.len(),
        series: kept_t.into_iter().zip(kept_v).collect(),
    })
}

/// Slope fit of the weighted moment `t ↦ ‖ |x|^b e_N(t) ‖_{L^a}` of the
/// frequency-localized wave energy density, together with the conservation
/// drift of the projected energy itself. The claim being probed is a lower
/// bound, so `ok` asks only `slope >= predicted_lower - 0.05` with
/// `predicted_lower = (dim - 1)(1/a + b/dim - 1/2)`.
pub fn wave_energy_growth(
    state0: &WaveState,
    band: f64,
    a: Index,
    b: f64,
    t_grid: &[f64],
) -> Result<WaveGrowth> {
    let dim = state0.spec().dim as f64;
    if !(b > 0.0 && b.is_finite()) {
        return Err(Error::Inadmissible(vec![format!(
            "moment power must be positive and finite, got b = {b}"
        )]));
    }
    let norm_spec = NormSpec::new(a, b, vec![0.0; state0.spec().dim])?;
    let e0 = projected_energy(state0, 0.0, band)?;
    if e0 == 0.0 {
        return Err(Error::ZeroFunction);
    }
    let mut kept_t = Vec::new();
    let mut kept_v = Vec::new();
    let mut excluded = Vec::new();
    let mut drift = 0.0f64;
    for &t in t_grid {
        let density = projected_energy_density(state0, t, band)?;
        let energy = projected_energy(state0, t, band)?;
        drift = drift.max((energy - e0).abs() / e0);
        if density.tail_report().ok() {
            kept_t.push(t);
            kept_v.push(weighted_norm(&density, &norm_spec)?);
        } else {
            excluded.push(t);
        }
    }
    ensure_fit_window(&kept_t, &excluded)?;
    let (slope, _) = log_log_fit(&kept_t, &kept_v)?;
    let predicted_lower = (dim - 1.0) * (rational_to_f64(a.recip()) + b / dim - 0.5);
    Ok(WaveGrowth {
        slope,
        predicted_lower,
        ok: slope >= predicted_lower - 0.05,
        energy_drift: drift,
        excluded,
    })
}
