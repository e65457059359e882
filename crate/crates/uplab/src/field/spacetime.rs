//! Space-time norms over a uniformly sampled evolution: trapezoid rule in
//! time, box quadrature in space, optional restriction to an observation
//! set and a moment weight centered in space-time.

use serde::{Deserialize, Serialize};

use super::{pairwise_max, pairwise_sum, GridFunction, IndicatorSet};
use crate::error::{Error, Result};
use crate::params::{rational_to_f64, Index};

/// Weight `((t - t_center)^2 + |x - x_center|^2)^{b/2}` on space-time.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpacetimeWeight {
    pub b: f64,
    pub t_center: f64,
    pub x_center: Vec<f64>,
}

impl SpacetimeWeight {
    pub fn new(b: f64, t_center: f64, x_center: Vec<f64>) -> Result<SpacetimeWeight> {
        if !(b >= 0.0 && b.is_finite()) {
            return Err(Error::InvalidIndex(format!(
                "weight power must be finite and >= 0, got {b}"
            )));
        }
        if !t_center.is_finite() || x_center.iter().any(|c| !c.is_finite()) {
            return Err(Error::Config("weight center must be finite".into()));
        }
        Ok(SpacetimeWeight {
            b,
            t_center,
            x_center,
        })
    }

    pub fn unweighted() -> SpacetimeWeight {
        SpacetimeWeight {
            b: 0.0,
            t_center: 0.0,
            x_center: Vec::new(),
        }
    }

    fn at(&self, t: f64, x: &[f64]) -> f64 {
        if self.b == 0.0 {
            return 1.0;
        }
        let dt = t - self.t_center;
        let mut d2 = dt * dt;
        for (axis, c) in x.iter().enumerate() {
            let d = c - self.x_center.get(axis).copied().unwrap_or(0.0);
            d2 += d * d;
        }
        d2.sqrt().powf(self.b)
    }
}

fn locate(times: &[f64], t: f64, dt: f64, what: &str) -> Result<usize> {
    times
        .iter()
        .position(|&s| (s - t).abs() <= 1e-9 * dt.max(1.0))
        .ok_or_else(|| {
            Error::Window(format!(
                "{what} {t} does not coincide with any snapshot time"
            ))
        })
}

/// `L^p` norm of `weight · u` over `[window.0, window.1] × set`.
///
/// `times` must be uniformly spaced and the window endpoints must coincide
/// with snapshot times; integration is trapezoidal in time.
pub fn spacetime_norm(
    times: &[f64],
    snapshots: &[GridFunction],
    p: Index,
    weight: &SpacetimeWeight,
    set: &IndicatorSet,
    window: (f64, f64),
) -> Result<f64> {
    if times.len() != snapshots.len() {
        return Err(Error::Window(format!(
            "{} times for {} snapshots",
            times.len(),
            snapshots.len()
        )));
    }
    if times.len() < 2 {
        return Err(Error::Window("need at least two snapshots".into()));
    }
    let spec = *snapshots[0].spec();
    for s in &snapshots[1..] {
        snapshots[0].same_grid(s)?;
    }
    set.validate(&spec)?;
    if weight.b > 0.0 && weight.x_center.len() != spec.dim {
        return Err(Error::GridMismatch(format!(
            "weight center has {} coordinates on a {}-dimensional grid",
            weight.x_center.len(),
            spec.dim
        )));
    }
    let dt = times[1] - times[0];
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::Window("times must be strictly increasing".into()));
    }
    for w in times.windows(2) {
        if ((w[1] - w[0]) - dt).abs() > 1e-9 * dt {
            return Err(Error::Window(format!(
                "snapshot times are not uniformly spaced: step {} vs {dt}",
                w[1] - w[0]
            )));
        }
    }
    let (lo, hi) = window;
    if !(lo < hi) {
        return Err(Error::Window(format!("empty window [{lo}, {hi}]")));
    }
    let i_lo = locate(times, lo, dt, "window start")?;
    let i_hi = locate(times, hi, dt, "window end")?;
    if i_hi <= i_lo {
        return Err(Error::Window(format!(
            "window [{lo}, {hi}] spans no time steps"
        )));
    }

    match p {
        Index::Infinity => {
            let mut best = 0.0f64;
            for i in i_lo..=i_hi {
                let t = times[i];
                let samples = snapshots[i].samples();
                let snap_sup = pairwise_max(samples.len(), &|flat| {
                    let mag = samples[flat].norm();
                    if mag == 0.0 {
                        return 0.0;
                    }
                    let mut x = [0.0f64; 3];
                    spec.point(flat, &mut x);
                    let x = &x[..spec.dim];
                    match set {
                        IndicatorSet::Mask { keep } => {
                            if !keep[flat] {
                                return 0.0;
                            }
                        }
                        geo => {
                            if !geo.contains(x).expect("geometric variant") {
                                return 0.0;
                            }
                        }
                    }
                    weight.at(t, x) * mag
                });
                best = best.max(snap_sup);
            }
            Ok(best)
        }
        Index::Finite(r) => {
            let pf = rational_to_f64(r);
            let mut total = 0.0;
            for i in i_lo..=i_hi {
                let t = times[i];
                let samples = snapshots[i].samples();
                let slice = pairwise_sum(samples.len(), &|flat| {
                    let mag = samples[flat].norm();
                    if mag == 0.0 {
                        return 0.0;
                    }
                    let mut x = [0.0f64; 3];
                    spec.point(flat, &mut x);
                    let x = &x[..spec.dim];
                    match set {
                        IndicatorSet::Mask { keep } => {
                            if !keep[flat] {
                                return 0.0;
                            }
                        }
                        geo => {
                            if !geo.contains(x).expect("geometric variant") {
                                return 0.0;
                            }
                        }
                    }
                    (weight.at(t, x) * mag).powf(pf)
                }) * spec.cell_volume();
                let tw = if i == i_lo || i == i_hi { 0.5 } else { 1.0 };
                total += tw * dt * slice;
            }
            Ok(total.powf(1.0 / pf))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{lp_norm, GridSpec};
    use num_complex::Complex64;

    fn steady_trace(n_t: usize, dt: f64) -> (Vec<f64>, Vec<GridFunction>, GridFunction) {
        let spec = GridSpec::new(1, 256, 10.0).unwrap();
        let f = GridFunction::from_fn(spec, |x| Complex64::new((-x[0] * x[0]).exp(), 0.0));
        let times: Vec<f64> = (0..n_t).map(|i| i as f64 * dt).collect();
        let snaps = vec![f.clone(); n_t];
        (times, snaps, f)
    }

    #[test]
    fn constant_trace_scales_like_duration_root() {
        let (times, snaps, f) = steady_trace(11, 0.1);
        let p = Index::from_int(2).unwrap();
        let norm = spacetime_norm(
            &times,
            &snaps,
            p,
            &SpacetimeWeight::unweighted(),
            &IndicatorSet::FullSpace,
            (0.0, 1.0),
        )
        .unwrap();
        let expected = 1.0f64.sqrt() * lp_norm(&f, p).unwrap();
        assert!((norm - expected).abs() < 1e-12 * expected);
    }

    #[test]
    fn matches_manual_trapezoid_of_slice_norms() {
        let spec = GridSpec::new(1, 128, 6.0).unwrap();
        let times: Vec<f64> = (0..9).map(|i| 0.25 * i as f64).collect();
        let snaps: Vec<GridFunction> = times
            .iter()
            .map(|&t| {
                GridFunction::from_fn(spec, move |x| {
                    Complex64::new((-(x[0] - 0.3 * t).powi(2)).exp() * (1.0 + t), 0.2 * t)
                })
            })
            .collect();
        let p = Index::from_int(2).unwrap();
        let got = spacetime_norm(
            &times,
            &snaps,
            p,
            &SpacetimeWeight::unweighted(),
            &IndicatorSet::FullSpace,
            (0.0, 2.0),
        )
        .unwrap();
        let mut manual = 0.0;
        for (i, s) in snaps.iter().enumerate() {
            let w = if i == 0 || i == snaps.len() - 1 { 0.5 } else { 1.0 };
            manual += w * 0.25 * lp_norm(s, p).unwrap().powi(2);
        }
        assert!((got - manual.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn window_must_align_with_samples() {
        let (times, snaps, _) = steady_trace(11, 0.1);
        let p = Index::from_int(2).unwrap();
        let err = spacetime_norm(
            &times,
            &snaps,
            p,
            &SpacetimeWeight::unweighted(),
            &IndicatorSet::FullSpace,
            (0.03, 1.0),
        );
        assert!(matches!(err, Err(Error::Window(_))));
    }

    #[test]
    fn nonuniform_times_rejected() {
        let (mut times, snaps, _) = steady_trace(11, 0.1);
        times[5] += 0.01;
        let err = spacetime_norm(
            &times,
            &snaps,
            Index::from_int(2).unwrap(),
            &SpacetimeWeight::unweighted(),
            &IndicatorSet::FullSpace,
            (0.0, 1.0),
        );
        assert!(matches!(err, Err(Error::Window(_))));
    }

    #[test]
    fn sup_norm_over_window() {
        let spec = GridSpec::new(1, 64, 4.0).unwrap();
        let times: Vec<f64> = (0..5).map(|i| i as f64).collect();
        let snaps: Vec<GridFunction> = times
            .iter()
            .map(|&t| {
                GridFunction::from_fn(spec, move |x| {
                    Complex64::new((1.0 + t) * (-x[0] * x[0]).exp(), 0.0)
                })
            })
            .collect();
        let got = spacetime_norm(
            &times,
            &snaps,
            Index::INFINITY,
            &SpacetimeWeight::unweighted(),
            &IndicatorSet::FullSpace,
            (0.0, 3.0),
        )
        .unwrap();
        // peak within the window is at t = 3 (amplitude 4), near x = 0
        assert!((got - 4.0).abs() < 1e-3, "{got}");
    }

    #[test]
    fn restriction_drops_mass() {
        let (times, snaps, _) = steady_trace(5, 0.5);
        let p = Index::from_int(2).unwrap();
        let full = spacetime_norm(
            &times,
            &snaps,
            p,
            &SpacetimeWeight::unweighted(),
            &IndicatorSet::FullSpace,
            (0.0, 2.0),
        )
        .unwrap();
        let outside = spacetime_norm(
            &times,
            &snaps,
            p,
            &SpacetimeWeight::unweighted(),
            &IndicatorSet::BallComplement {
                center: vec![0.0],
                radius: 1.0,
            },
            (0.0, 2.0),
        )
        .unwrap();
        assert!(outside < full);
        assert!(outside > 0.0);
    }

    #[test]
    fn weight_center_reduces_moment() {
        let (times, snaps, _) = steady_trace(5, 0.5);
        let p = Index::from_int(2).unwrap();
        let centered = SpacetimeWeight::new(1.0, 1.0, vec![0.0]).unwrap();
        let offset = SpacetimeWeight::new(1.0, 1.0, vec![5.0]).unwrap();
        let near = spacetime_norm(
            &times,
            &snaps,
            p,
            &centered,
            &IndicatorSet::FullSpace,
            (0.0, 2.0),
        )
        .unwrap();
        let far = spacetime_norm(
            &times,
            &snaps,
            p,
            &offset,
            &IndicatorSet::FullSpace,
            (0.0, 2.0),
        )
        .unwrap();
        assert!(near < far, "{near} vs {far}");
    }
}
