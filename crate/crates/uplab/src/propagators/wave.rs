//! Second-order wave system `∂²_t u = Δu` via its spectral solution
//! formulas, plus the frequency-projected energy density used by the
//! moment-growth experiments.

use num_complex::Complex64;

use super::WaveState;
use crate::error::Result;
use crate::field::{
    apply_multiplier, field_from_raw_spectrum, freq_point, lp_norm, lp_project, raw_spectrum,
    GridFunction,
};
use crate::params::Index;

fn radial(xi: &[f64]) -> f64 {
    xi.iter().map(|c| c * c).sum::<f64>().sqrt()
}

/// Evolves Cauchy data by time `t`:
/// `û(t) = cos(t|ξ|) û_0 + sin(t|ξ|)/|ξ| û_1`,
/// `∂_t û(t) = -|ξ| sin(t|ξ|) û_0 + cos(t|ξ|) û_1`,
/// with the removable singularity `sin(t|ξ|)/|ξ| → t` patched below
/// `|ξ| < 10⁻¹² ξ_max`.
pub fn wave_solve(state0: &WaveState, t: f64) -> Result<WaveState> {
    let spec = *state0.spec();
    let u_hat = raw_spectrum(&state0.u);
    let v_hat = raw_spectrum(&state0.ut);
    let tiny = 1e-12 * spec.freq_max();
    let mut new_u = vec![Complex64::default(); u_hat.len()];
    let mut new_v = vec![Complex64::default(); u_hat.len()];
    let mut xi = [0.0f64; 3];
    for i in 0..u_hat.len() {
        freq_point(&spec, i, &mut xi);
        let r = radial(&xi[..spec.dim]);
        let (cos, sin) = ((t * r).cos(), (t * r).sin());
        let sinc = if r < tiny { t } else { sin / r };
        new_u[i] = cos * u_hat[i] + sinc * v_hat[i];
        new_v[i] = -r * sin * u_hat[i] + cos * v_hat[i];
    }
    let u = field_from_raw_spectrum(spec, new_u);
    let ut = field_from_raw_spectrum(spec, new_v);
    u.warn_if_truncated("wave_solve");
    WaveState::new(u, ut)
}

/// Pointwise density `|√(-Δ) P_N u(t)| + |∂_t P_N u(t)|` at band `N`,
/// returned as a real nonnegative field.
pub fn projected_energy_density(
    state0: &WaveState,
    t: f64,
    band: f64,
) -> Result<GridFunction> {
    let evolved = wave_solve(state0, t)?;
    let pu = lp_project(&evolved.u, band)?;
    let put = lp_project(&evolved.ut, band)?;
    let half_lap = apply_multiplier(&pu, |xi| Complex64::new(radial(xi), 0.0));
    let spec = *pu.spec();
    let samples = half_lap
        .samples()
        .iter()
        .zip(put.samples())
        .map(|(a, b)| Complex64::new(a.norm() + b.norm(), 0.0))
        .collect();
    GridFunction::from_samples(spec, samples)
}

/// The conserved projected energy
/// `E_N(t) = ‖√(-Δ) P_N u(t)‖_2² + ‖∂_t P_N u(t)‖_2²`.
pub fn projected_energy(state0: &WaveState, t: f64, band: f64) -> Result<f64> {
    let evolved = wave_solve(state0, t)?;
    let pu = lp_project(&evolved.u, band)?;
    let put = lp_project(&evolved.ut, band)?;
    let half_lap = apply_multiplier(&pu, |xi| Complex64::new(radial(xi), 0.0));
    let two = Index::from_int(2)?;
    Ok(lp_norm(&half_lap, two)?.powi(2) + lp_norm(&put, two)?.powi(2))
}
