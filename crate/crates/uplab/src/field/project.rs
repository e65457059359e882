//! Smooth dyadic frequency projections and sharp band limiting.
//!
//! The dyadic pieces use a fixed C² radial profile that is 1 on the unit
//! ball and vanishes beyond radius 11/10, so consecutive pieces telescope:
//! summing bands `n_min..=n_max` reproduces any spectrum supported in
//! `[11 n_min / 20, n_max]` exactly.

use num_complex::Complex64;

use super::{apply_multiplier, GridFunction};
use crate::error::{Error, Result};

/// Radial cutoff profile: 1 for `rho <= 1`, 0 for `rho >= 11/10`, quintic
/// smoothstep (C²) in between.
pub fn bump_profile(rho: f64) -> f64 {
    if rho <= 1.0 {
        1.0
    } else if rho >= 1.1 {
        0.0
    } else {
        let u = (rho - 1.0) * 10.0;
        1.0 - u * u * u * (10.0 - 15.0 * u + 6.0 * u * u)
    }
}

/// Dyadic annulus multiplier at radius `rho` for band `n`:
/// `bump(rho/n) - bump(2 rho/n)`. Supported on `n/2 <= rho <= 11n/10`,
/// identically 1 on `11n/20 <= rho <= n`.
pub fn dyadic_multiplier(rho: f64, band: f64) -> f64 {
    bump_profile(rho / band) - bump_profile(2.0 * rho / band)
}

/// True when `band` is an exact power of two (integer exponent, possibly
/// negative).
fn is_dyadic(band: f64) -> bool {
    if !(band.is_finite() && band > 0.0) {
        return false;
    }
    let j = band.log2().round();
    (-400.0..=400.0).contains(&j) && band == 2.0f64.powi(j as i32)
}

fn radial(xi: &[f64]) -> f64 {
    xi.iter().map(|c| c * c).sum::<f64>().sqrt()
}

/// Smooth frequency projection onto the dyadic band `band` (a power of two).
///
/// Fails with [`Error::UnresolvableBand`] when the annulus is not resolved
/// by the grid: the inner edge `band/2` must be at least two frequency
/// cells, and the outer edge `11 band / 10` must stay within the grid's
/// maximum frequency.
pub fn lp_project(f: &GridFunction, band: f64) -> Result<GridFunction> {
    if !is_dyadic(band) {
        return Err(Error::UnresolvableBand(format!(
            "band must be a power of two, got {band}"
        )));
    }
    let spec = f.spec();
    let inner = band / 2.0;
    let outer = 1.1 * band;
    if inner < 2.0 * spec.freq_spacing() {
        return Err(Error::UnresolvableBand(format!(
            "band {band}: inner edge {inner} is below two frequency cells ({})",
            2.0 * spec.freq_spacing()
        )));
    }
    if outer > spec.freq_max() {
        return Err(Error::UnresolvableBand(format!(
            "band {band}: outer edge {outer} exceeds the grid maximum frequency {}",
            spec.freq_max()
        )));
    }
    Ok(apply_multiplier(f, |xi| {
        Complex64::new(dyadic_multiplier(radial(xi), band), 0.0)
    }))
}

/// Sharp (indicator) frequency cutoff `1_{|ξ| <= radius}`.
pub fn sharp_band_limit(f: &GridFunction, radius: f64) -> Result<GridFunction> {
    let spec = f.spec();
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::UnresolvableBand(format!(
            "cutoff radius must be positive, got {radius}"
        )));
    }
    if radius > spec.freq_max() {
        return Err(Error::UnresolvableBand(format!(
            "cutoff radius {radius} exceeds the grid maximum frequency {}",
            spec.freq_max()
        )));
    }
    Ok(apply_multiplier(f, |xi| {
        if radial(xi) <= radius {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }))
}
