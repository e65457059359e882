//! Spatial restriction to measurable observation sets.

use serde::{Deserialize, Serialize};

use super::{pairwise_sum, GridFunction, GridSpec};
use crate::error::{Error, Result};

/// An observation region. Geometric variants are grid-independent;
/// `Mask` ties a set to a specific grid by flat sample index.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum IndicatorSet {
    /// Keep everything.
    FullSpace,
    /// Exterior of a ball: `|x - center| >= radius`.
    BallComplement { center: Vec<f64>, radius: f64 },
    /// Union of slabs along the first axis: keep `x` when
    /// `(x_1 - offset) mod period` lands in `[0, fill * period)`.
    PeriodicSlabs { period: f64, fill: f64, offset: f64 },
    /// Explicit per-sample mask in row-major order.
    Mask { keep: Vec<bool> },
}

impl IndicatorSet {
    pub fn validate(&self, spec: &GridSpec) -> Result<()> {
        match self {
            IndicatorSet::FullSpace => Ok(()),
            IndicatorSet::BallComplement { center, radius } => {
                if center.len() != spec.dim {
                    return Err(Error::GridMismatch(format!(
                        "ball center has {} coordinates on a {}-dimensional grid",
                        center.len(),
                        spec.dim
                    )));
                }
                if !(radius.is_finite() && *radius > 0.0) {
                    return Err(Error::Config(format!(
                        "ball radius must be positive, got {radius}"
                    )));
                }
                Ok(())
            }
            IndicatorSet::PeriodicSlabs {
                period,
                fill,
                offset,
            } => {
                if !(period.is_finite() && *period > 0.0) {
                    return Err(Error::Config(format!(
                        "slab period must be positive, got {period}"
                    )));
                }
                if !(*fill > 0.0 && *fill <= 1.0) {
                    return Err(Error::Config(format!(
                        "slab fill must lie in (0, 1], got {fill}"
                    )));
                }
                if !offset.is_finite() {
                    return Err(Error::Config("slab offset must be finite".into()));
                }
                Ok(())
            }
            IndicatorSet::Mask { keep } => {
                if keep.len() != spec.len() {
                    return Err(Error::GridMismatch(format!(
                        "mask has {} entries for a grid of {} samples",
                        keep.len(),
                        spec.len()
                    )));
                }
                Ok(())
            }
        }
    }

    /// Pointwise membership for the geometric variants. `Mask` has no
    /// grid-free geometry, so it is rejected here; use [`restrict`].
    pub fn contains(&self, x: &[f64]) -> Result<bool> {
        match self {
            IndicatorSet::FullSpace => Ok(true),
            IndicatorSet::BallComplement { center, radius } => {
                let d2: f64 = x
                    .iter()
                    .zip(center)
                    .map(|(a, c)| (a - c) * (a - c))
                    .sum();
                Ok(d2.sqrt() >= *radius)
            }
            IndicatorSet::PeriodicSlabs {
                period,
                fill,
                offset,
            } => {
                let u = (x[0] - offset).rem_euclid(*period);
                Ok(u < fill * period)
            }
            IndicatorSet::Mask { .. } => Err(Error::Config(
                "mask sets are tied to a grid; restrict a sampled field instead".into(),
            )),
        }
    }

    fn keeps(&self, spec: &GridSpec, flat: usize) -> bool {
        match self {
            IndicatorSet::Mask { keep } => keep[flat],
            _ => {
                let mut x = [0.0f64; 3];
                spec.point(flat, &mut x);
                self.contains(&x[..spec.dim]).expect("geometric variant")
            }
        }
    }
}

/// Zeroes every sample outside the set.
pub fn restrict(f: &GridFunction, set: &IndicatorSet) -> Result<GridFunction> {
    let spec = *f.spec();
    set.validate(&spec)?;
    let mut out = f.clone();
    for (flat, z) in out.samples_mut().iter_mut().enumerate() {
        if !set.keeps(&spec, flat) {
            *z = num_complex::Complex64::new(0.0, 0.0);
        }
    }
    Ok(out)
}

/// Lebesgue measure of the set inside the grid box, by cell counting.
pub fn set_measure(set: &IndicatorSet, spec: &GridSpec) -> Result<f64> {
    set.validate(spec)?;
    let count = pairwise_sum(spec.len(), &|flat| {
        if set.keeps(spec, flat) {
            1.0
        } else {
            0.0
        }
    });
    Ok(count * spec.cell_volume())
}
