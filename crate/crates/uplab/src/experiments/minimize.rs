//! Best-effort search for localization products smaller than the ones the
//! closed forms predict.
//!
//! The searches here produce evidence, not proofs: a decreasing trajectory
//! of product values is recorded exactly as observed, and exhausting the
//! evaluation budget is reported rather than hidden. The objective goes
//! through [`up_product_unchecked`][super::up_product_unchecked], so probe
//! tuples outside the admissible ranges can be explored deliberately.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{sum_of_packets, up_product_unchecked, PacketFamily};
use crate::error::{Error, Result};
use crate::field::GridSpec;
use crate::oracles::GaussianPacket;
use crate::params::SideParams;

/// Outcome of a bounded minimization run.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MinimizerReport {
    pub best_value: f64,
    /// Coordinates of the best point in the family's own parameterization
    /// (width, flattened centers, or member index).
    pub best_point: Vec<f64>,
    /// Best value so far after each improvement, starting from the first
    /// evaluation; non-increasing by construction.
    pub trajectory: Vec<f64>,
    pub evaluations: usize,
    pub budget_exhausted: bool,
}

/// Derivative-free coordinate descent with step halving and seeded random
/// restarts, capped at `budget` objective evaluations.
///
/// Probe points where the objective fails are skipped (they still consume
/// budget); the starting point must evaluate cleanly. Restarts consume any
/// remaining budget, so the run always ends with the budget exhausted.
pub fn coordinate_descent(
    objective: &dyn Fn(&[f64]) -> Result<f64>,
    bounds: &[(f64, f64)],
    start: &[f64],
    budget: usize,
    seed: u64,
) -> Result<MinimizerReport> {
    if bounds.is_empty() {
        return Err(Error::Config("descent needs at least one coordinate".into()));
    }
    if start.len() != bounds.len() {
        return Err(Error::Config(format!(
            "start has {} coordinates for {} bounds",
            start.len(),
            bounds.len()
        )));
    }
    for &(lo, hi) in bounds {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::Config(format!("bad search interval [{lo}, {hi}]")));
        }
    }
    if budget == 0 {
        return Err(Error::Config("evaluation budget must be positive".into()));
    }

    let mut point: Vec<f64> = start
        .iter()
        .zip(bounds)
        .map(|(c, (lo, hi))| c.clamp(*lo, *hi))
        .collect();
    let mut value = objective(&point)?;
    let mut evaluations = 1usize;
    let mut best_point = point.clone();
    let mut best_value = value;
    let mut trajectory = vec![best_value];

    let ranges: Vec<f64> = bounds.iter().map(|(lo, hi)| hi - lo).collect();
    let mut steps: Vec<f64> = ranges.iter().map(|r| 0.25 * r).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    'outer: loop {
        let mut improved = false;
        for axis in 0..bounds.len() {
            for sign in [1.0f64, -1.0] {
                if evaluations >= budget {
                    break 'outer;
                }
                let trial = (point[axis] + sign * steps[axis]).clamp(bounds[axis].0, bounds[axis].1);
                if trial == point[axis] {
                    continue;
                }
                let mut candidate = point.clone();
                candidate[axis] = trial;
                evaluations += 1;
                if let Ok(v) = objective(&candidate) {
                    if v < value {
                        point = candidate;
                        value = v;
                        improved = true;
                        if value < best_value {
                            best_value = value;
                            best_point = point.clone();
                            trajectory.push(best_value);
                        }
                        break;
                    }
                }
            }
        }
        if !improved {
            for s in steps.iter_mut() {
                *s *= 0.5;
            }
            let stalled = steps.iter().zip(&ranges).all(|(s, r)| *s < 1e-3 * r);
            if stalled {
                if evaluations >= budget {
                    break;
                }
                for (c, (lo, hi)) in point.iter_mut().zip(bounds) {
                    *c = rng.gen_range(*lo..=*hi);
                }
                evaluations += 1;
                match objective(&point) {
                    Ok(v) => {
                        value = v;
                        if value < best_value {
                            best_value = value;
                            best_point = point.clone();
                            trajectory.push(best_value);
                        }
                    }
                    Err(_) => {
                        point = best_point.clone();
                        value = best_value;
                    }
                }
                for (s, r) in steps.iter_mut().zip(&ranges) {
                    *s = 0.25 * r;
                }
            }
        }
    }

    Ok(MinimizerReport {
        best_value,
        best_point,
        trajectory,
        evaluations,
        budget_exhausted: true,
    })
}

fn center_packets(
    dim: usize,
    width: f64,
    centers: &[f64],
) -> Result<Vec<GaussianPacket>> {
    centers
        .chunks(dim)
        .map(|c| {
            GaussianPacket::new(
                dim,
                Complex64::new(1.0, 0.0),
                Complex64::new(width, 0.0),
                c.to_vec(),
                vec![0.0; dim],
            )
        })
        .collect()
}

/// Minimizes the two-sided localization product over a packet family.
///
/// Widths are swept then refined continuously, translated centers are moved
/// by coordinate descent from their ring layout, and a random corpus is
/// scanned member by member. All evaluations share one budget.
pub fn product_minimizer(
    family: &PacketFamily,
    spec: &GridSpec,
    side1: &SideParams,
    side2: &SideParams,
    budget: usize,
    seed: u64,
) -> Result<MinimizerReport> {
    let dim = spec.dim;
    if side1.n as usize != dim || side2.n as usize != dim {
        return Err(Error::Config(format!(
            "sides are declared in dimension {}/{} but the grid is {dim}-dimensional",
            side1.n, side2.n
        )));
    }
    if budget == 0 {
        return Err(Error::Config("evaluation budget must be positive".into()));
    }
    let origin = vec![0.0f64; dim];

    match family {
        PacketFamily::SingleGaussianSweep { widths } => {
            if widths.is_empty() {
                return Err(Error::Config("width sweep is empty".into()));
            }
            let eval_width = |w: &[f64]| -> Result<f64> {
                let f = GaussianPacket::isotropic(dim, w[0])?.sample(spec)?;
                Ok(up_product_unchecked(&f, side1, side2, &origin, &origin)?.product)
            };
            let mut trajectory = Vec::new();
            let mut best_value = f64::INFINITY;
            let mut best_width = widths[0];
            let mut evaluations = 0usize;
            for &w in widths.iter().take(budget) {
                let v = eval_width(&[w])?;
                evaluations += 1;
                if v < best_value {
                    best_value = v;
                    best_width = w;
                    trajectory.push(v);
                }
            }
            let lo = widths.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = widths.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            if evaluations >= budget || lo >= hi {
                return Ok(MinimizerReport {
                    best_value,
                    best_point: vec![best_width],
                    trajectory,
                    evaluations,
                    budget_exhausted: evaluations >= budget && lo < hi,
                });
            }
            let refine = coordinate_descent(
                &eval_width,
                &[(lo, hi)],
                &[best_width],
                budget - evaluations,
                seed,
            )?;
            let (best_value, best_point) = if refine.best_value < best_value {
                (refine.best_value, refine.best_point)
            } else {
                (best_value, vec![best_width])
            };
            for v in &refine.trajectory {
                if trajectory.last().map_or(true, |last| v < last) {
                    trajectory.push(*v);
                }
            }
            Ok(MinimizerReport {
                best_value,
                best_point,
                trajectory,
                evaluations: evaluations + refine.evaluations,
                budget_exhausted: refine.budget_exhausted,
            })
        }
        PacketFamily::TranslatedGaussians {
            count,
            width,
            spread,
        } => {
            if *count == 0 {
                return Err(Error::Config("translated family needs count >= 1".into()));
            }
            if !(*spread > 0.0 && spread.is_finite()) {
                return Err(Error::Config(format!(
                    "center spread must be positive, got {spread}"
                )));
            }
            let count = *count as usize;
            let width = *width;
            let start: Vec<f64> = (0..count)
                .flat_map(|j| {
                    PacketFamily::direction(dim, j, count)
                        .into_iter()
                        .map(move |d| d * spread)
                })
                .collect();
            let bounds = vec![(-*spread, *spread); count * dim];
            let objective = |centers: &[f64]| -> Result<f64> {
                let packets = center_packets(dim, width, centers)?;
                let f = sum_of_packets(spec, &packets)?;
                Ok(up_product_unchecked(&f, side1, side2, &origin, &origin)?.product)
            };
            coordinate_descent(&objective, &bounds, &start, budget, seed)
        }
        PacketFamily::RandomSmoothCorpus { .. } => {
            let members = family.members(spec)?;
            let mut trajectory = Vec::new();
            let mut best_value = f64::INFINITY;
            let mut best_index = 0usize;
            let mut evaluations = 0usize;
            for (i, f) in members.iter().take(budget).enumerate() {
                let v = up_product_unchecked(f, side1, side2, &origin, &origin)?.product;
                evaluations += 1;
                if v < best_value {
                    best_value = v;
                    best_index = i;
                    trajectory.push(v);
                }
            }
            Ok(MinimizerReport {
                best_value,
                best_point: vec![best_index as f64],
                trajectory,
                evaluations,
                budget_exhausted: members.len() > budget,
            })
        }
    }
}
