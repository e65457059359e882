//! Discrete realization of the continuous Fourier transform
//! `f̂(ξ) = ∫ e^{-i x·ξ} f(x) dx` on centered grids.
//!
//! With `N` samples per axis at spacing `h`, the transform of a function on
//! `[-L, L)^d` is evaluated exactly at the dual nodes `ξ_k = (k - N/2)·π/L`
//! by a radix-2 FFT with `(-1)^j` / `(-1)^k` pre/post twiddles and an `h^d`
//! quadrature factor. Grids enforce `N % 4 == 0`, which makes the remaining
//! axis phase `e^{-iπN/2}` equal to one.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use super::{GridFunction, GridSpec};

fn plan(len: usize, forward: bool) -> Arc<dyn Fft<f64>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, bool), Arc<dyn Fft<f64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("fft plan cache poisoned");
    guard
        .entry((len, forward))
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            if forward {
                planner.plan_fft_forward(len)
            } else {
                planner.plan_fft_inverse(len)
            }
        })
        .clone()
}

/// Unnormalized FFT along every axis (forward: `Σ_j e^{-2πijk/N}`).
pub(crate) fn fft_all_axes(samples: &mut [Complex64], spec: &GridSpec, forward: bool) {
    let n = spec.points_per_axis;
    let fft = plan(n, forward);
    for axis in 0..spec.dim {
        let stride = n.pow((spec.dim - 1 - axis) as u32);
        if stride == 1 {
            samples.par_chunks_exact_mut(n).for_each(|lane| {
                fft.process(lane);
            });
        } else {
            let block = n * stride;
            samples.par_chunks_exact_mut(block).for_each(|chunk| {
                let mut lane = vec![Complex64::default(); n];
                for s in 0..stride {
                    for (i, slot) in lane.iter_mut().enumerate() {
                        *slot = chunk[s + i * stride];
                    }
                    fft.process(&mut lane);
                    for (i, value) in lane.iter().enumerate() {
                        chunk[s + i * stride] = *value;
                    }
                }
            });
        }
    }
}

/// Multiplies sample `j = (j_1, …, j_d)` by `(-1)^{j_1 + … + j_d}`.
fn apply_parity_sign(samples: &mut [Complex64], spec: &GridSpec) {
    let n = spec.points_per_axis;
    let dim = spec.dim;
    samples
        .par_chunks_mut(n)
        .enumerate()
        .for_each(|(chunk_index, chunk)| {
            // Parity of the leading (dim-1) indices is the digit-sum parity
            // of the chunk index in base n; the last axis alternates.
            let mut rest = chunk_index;
            let mut parity = 0usize;
            for _ in 1..dim {
                parity += rest % n;
                rest /= n;
            }
            let mut sign = if parity % 2 == 0 { 1.0 } else { -1.0 };
            for z in chunk.iter_mut() {
                *z *= sign;
                sign = -sign;
            }
        });
}

/// Continuous-convention Fourier transform. The result lives on the dual
/// grid (same point count, half-width `N·π/(2L)`).
pub fn fourier(f: &GridFunction) -> GridFunction {
    let spec = *f.spec();
    let mut data = f.samples().to_vec();
    apply_parity_sign(&mut data, &spec);
    fft_all_axes(&mut data, &spec, true);
    apply_parity_sign(&mut data, &spec);
    let scale = spec.spacing().powi(spec.dim as i32);
    data.par_iter_mut().for_each(|z| *z *= scale);
    GridFunction::from_samples(spec.dual(), data).expect("dual grid has same point count")
}

/// Inverse of [`fourier`]: `f(x) = (2π)^{-d} ∫ e^{+i x·ξ} f̂(ξ) dξ`.
pub fn inverse_fourier(g: &GridFunction) -> GridFunction {
    let spec = *g.spec();
    let mut data = g.samples().to_vec();
    apply_parity_sign(&mut data, &spec);
    fft_all_axes(&mut data, &spec, false);
    apply_parity_sign(&mut data, &spec);
    let scale = (spec.spacing() / std::f64::consts::TAU).powi(spec.dim as i32);
    data.par_iter_mut().for_each(|z| *z *= scale);
    GridFunction::from_samples(spec.dual(), data).expect("dual grid has same point count")
}

/// Frequency coordinates of a flat index in FFT (wrap-around) order:
/// axis index `k` maps to `κ Δξ` with `κ = k` for `k < N/2`, else `k - N`.
pub(crate) fn freq_point(spec: &GridSpec, flat: usize, out: &mut [f64; 3]) {
    let n = spec.points_per_axis;
    let dxi = spec.freq_spacing();
    let mut rest = flat;
    for axis in (0..spec.dim).rev() {
        let k = rest % n;
        rest /= n;
        let kappa = if k < n / 2 {
            k as f64
        } else {
            k as f64 - n as f64
        };
        out[axis] = kappa * dxi;
    }
}

/// Applies a Fourier multiplier `m(ξ)`: returns `F^{-1}[m · F f]`.
///
/// Diagonal multipliers commute with the centering twiddles, so this skips
/// them and works in plain FFT frequency order; the only normalization is
/// the `1/N^d` of the unnormalized round trip.
pub fn apply_multiplier<M>(f: &GridFunction, multiplier: M) -> GridFunction
where
    M: Fn(&[f64]) -> Complex64 + Sync,
{
    let spec = *f.spec();
    let mut data = f.samples().to_vec();
    fft_all_axes(&mut data, &spec, true);
    let inv_total = 1.0 / data.len() as f64;
    data.par_iter_mut().enumerate().for_each(|(i, z)| {
        let mut xi = [0.0f64; 3];
        freq_point(&spec, i, &mut xi);
        *z *= multiplier(&xi[..spec.dim]) * inv_total;
    });
    fft_all_axes(&mut data, &spec, false);
    GridFunction::from_samples(spec, data).expect("same point count")
}

/// Forward FFT spectrum in wrap-around order (no twiddles, no quadrature
/// factor). Used by solvers that combine several multipliers at once.
pub(crate) fn raw_spectrum(f: &GridFunction) -> Vec<Complex64> {
    let mut data = f.samples().to_vec();
    fft_all_axes(&mut data, f.spec(), true);
    data
}

/// Inverse of [`raw_spectrum`] including the `1/N^d` normalization.
pub(crate) fn field_from_raw_spectrum(spec: GridSpec, mut data: Vec<Complex64>) -> GridFunction {
    let inv_total = 1.0 / data.len() as f64;
    fft_all_axes(&mut data, &spec, false);
    data.par_iter_mut().for_each(|z| *z *= inv_total);
    GridFunction::from_samples(spec, data).expect("same point count")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::lp_norm;
    use crate::params::Index;
    use std::f64::consts::PI;

    fn max_diff(a: &GridFunction, b: &GridFunction) -> f64 {
        a.samples()
            .iter()
            .zip(b.samples())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn gaussian_transform_matches_closed_form() {
        let alpha = 0.8;
        let spec = GridSpec::new(1, 512, 16.0).unwrap();
        let f = GridFunction::from_fn(spec, |x| {
            Complex64::new((-alpha * x[0] * x[0]).exp(), 0.0)
        });
        let fhat = fourier(&f);
        let dual = *fhat.spec();
        let expected = GridFunction::from_fn(dual, |xi| {
            Complex64::new(
                (PI / alpha).sqrt() * (-xi[0] * xi[0] / (4.0 * alpha)).exp(),
                0.0,
            )
        });
        assert!(max_diff(&fhat, &expected) < 1e-12, "{}", max_diff(&fhat, &expected));
    }

    #[test]
    fn translation_becomes_modulation() {
        let spec = GridSpec::new(1, 256, 12.0).unwrap();
        let x0 = 1.5;
        let f = GridFunction::from_fn(spec, |x| {
            Complex64::new((-(x[0] - x0) * (x[0] - x0)).exp(), 0.0)
        });
        let fhat = fourier(&f);
        let dual = *fhat.spec();
        let expected = GridFunction::from_fn(dual, |xi| {
            Complex64::from_polar(PI.sqrt() * (-xi[0] * xi[0] / 4.0).exp(), -x0 * xi[0])
        });
        assert!(max_diff(&fhat, &expected) < 1e-11);
    }

    #[test]
    fn round_trip_is_identity() {
        for (dim, n, l) in [(1usize, 128usize, 10.0), (2, 32, 6.0), (3, 16, 4.0)] {
            let spec = GridSpec::new(dim, n, l).unwrap();
            let f = GridFunction::from_fn(spec, |x| {
                let r2: f64 = x.iter().map(|c| c * c).sum();
                Complex64::new((-r2).exp(), 0.3 * (-0.5 * r2).exp() * x[0])
            });
            let back = inverse_fourier(&fourier(&f));
            assert!(max_diff(&f, &back) < 1e-12, "dim {dim}");
            assert_eq!(back.spec().half_width, spec.half_width);
        }
    }

    #[test]
    fn plancherel_identity() {
        let spec = GridSpec::new(2, 64, 8.0).unwrap();
        let f = GridFunction::from_fn(spec, |x| {
            Complex64::new(
                (-x[0] * x[0] - 0.5 * x[1] * x[1]).exp(),
                (-x[0] * x[0] - x[1] * x[1]).exp(),
            )
        });
        let l2 = lp_norm(&f, Index::from_int(2).unwrap()).unwrap();
        let l2_hat = lp_norm(&fourier(&f), Index::from_int(2).unwrap()).unwrap();
        let ratio = l2_hat / l2;
        let expected = std::f64::consts::TAU; // (2π)^{d/2}, d = 2
        assert!((ratio - expected).abs() < 1e-10 * expected);
    }

    #[test]
    fn unit_multiplier_is_identity() {
        let spec = GridSpec::new(2, 32, 5.0).unwrap();
        let f = GridFunction::from_fn(spec, |x| {
            Complex64::new((-x[0] * x[0] - x[1] * x[1]).exp(), 0.1 * x[0])
        });
        let g = apply_multiplier(&f, |_| Complex64::new(1.0, 0.0));
        assert!(max_diff(&f, &g) < 1e-13);
    }

    #[test]
    fn multiplier_matches_transform_pipeline() {
        // Applying m(ξ) = e^{-|ξ|^2} via the multiplier path must agree with
        // the explicit transform / multiply / inverse path.
        let spec = GridSpec::new(1, 256, 14.0).unwrap();
        let f = GridFunction::from_fn(spec, |x| {
            Complex64::new((-0.6 * x[0] * x[0]).exp() * (1.0 + 0.2 * x[0]), 0.0)
        });
        let via_multiplier = apply_multiplier(&f, |xi| {
            Complex64::new((-(xi[0] * xi[0])).exp(), 0.0)
        });
        let mut fhat = fourier(&f);
        let dual = *fhat.spec();
        for (i, z) in fhat.samples_mut().iter_mut().enumerate() {
            let mut xi = [0.0f64; 3];
            dual.point(i, &mut xi);
            *z *= (-(xi[0] * xi[0])).exp();
        }
        let explicit = inverse_fourier(&fhat);
        assert!(max_diff(&via_multiplier, &explicit) < 1e-12);
    }

    #[test]
    fn raw_spectrum_round_trip() {
        let spec = GridSpec::new(2, 16, 3.0).unwrap();
        let f = GridFunction::from_fn(spec, |x| Complex64::new(x[0] + 2.0 * x[1], -x[0]));
        let spectrum = raw_spectrum(&f);
        let back = field_from_raw_spectrum(spec, spectrum);
        assert!(max_diff(&f, &back) < 1e-12);
    }
}
