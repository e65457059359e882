//! Quadrature norms: `L^p` quasi-norms, weighted moments, and the two
//! localization ratios. All reductions use a fixed-shape pairwise tree so
//! results are identical for any worker count.

use super::{GridFunction, GridSpec};
use crate::error::{Error, Result};
use crate::params::{rational_to_f64, Index};

const LEAF: usize = 1024;
const PARALLEL_CUTOFF: usize = 1 << 16;

/// Sum of `term(i)` for `i` in `[start, start+len)` over a fixed binary
/// split tree. The tree shape depends only on the range, never on the
/// thread count, so parallel and serial runs agree bitwise.
fn pairwise_sum_range<F: Fn(usize) -> f64 + Sync>(start: usize, len: usize, term: &F) -> f64 {
    if len <= LEAF {
        let mut acc = 0.0;
        for i in start..start + len {
            acc += term(i);
        }
        return acc;
    }
    let half = len / 2;
    let (a, b) = if len >= PARALLEL_CUTOFF {
        rayon::join(
            || pairwise_sum_range(start, half, term),
            || pairwise_sum_range(start + half, len - half, term),
        )
    } else {
        (
            pairwise_sum_range(start, half, term),
            pairwise_sum_range(start + half, len - half, term),
        )
    };
    a + b
}

pub(crate) fn pairwise_sum<F: Fn(usize) -> f64 + Sync>(len: usize, term: &F) -> f64 {
    pairwise_sum_range(0, len, term)
}

fn pairwise_max_range<F: Fn(usize) -> f64 + Sync>(start: usize, len: usize, term: &F) -> f64 {
    if len <= LEAF {
        let mut acc = f64::NEG_INFINITY;
        for i in start..start + len {
            acc = acc.max(term(i));
        }
        return acc;
    }
    let half = len / 2;
    let (a, b) = if len >= PARALLEL_CUTOFF {
        rayon::join(
            || pairwise_max_range(start, half, term),
            || pairwise_max_range(start + half, len - half, term),
        )
    } else {
        (
            pairwise_max_range(start, half, term),
            pairwise_max_range(start + half, len - half, term),
        )
    };
    a.max(b)
}

pub(crate) fn pairwise_max<F: Fn(usize) -> f64 + Sync>(len: usize, term: &F) -> f64 {
    pairwise_max_range(0, len, term)
}

/// A weighted norm request: `‖ |x - center|^b · f ‖_p`.
#[derive(Clone, Debug, serde::Serialize, serde::Deserialize)]
pub struct NormSpec {
    pub p: Index,
    pub b: f64,
    pub center: Vec<f64>,
}

impl NormSpec {
    pub fn new(p: Index, b: f64, center: Vec<f64>) -> Result<NormSpec> {
        if !(b >= 0.0 && b.is_finite()) {
            return Err(Error::InvalidIndex(format!(
                "weight power must be finite and >= 0, got {b}"
            )));
        }
        if center.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidGrid("weight center must be finite".into()));
        }
        Ok(NormSpec { p, b, center })
    }

    /// Unweighted `L^p` request.
    pub fn plain(p: Index) -> NormSpec {
        NormSpec {
            p,
            b: 0.0,
            center: Vec::new(),
        }
    }

    fn check_center(&self, spec: &GridSpec) -> Result<()> {
        if self.b > 0.0 && self.center.len() != spec.dim {
            return Err(Error::GridMismatch(format!(
                "weight center has {} coordinates on a {}-dimensional grid",
                self.center.len(),
                spec.dim
            )));
        }
        Ok(())
    }
}

/// Weight magnitude `|x - center|^b` at a flat grid index.
fn weight_at(spec: &GridSpec, flat: usize, b: f64, center: &[f64]) -> f64 {
    if b == 0.0 {
        return 1.0;
    }
    let mut x = [0.0f64; 3];
    spec.point(flat, &mut x);
    let mut d2 = 0.0;
    for axis in 0..spec.dim {
        let d = x[axis] - center.get(axis).copied().unwrap_or(0.0);
        d2 += d * d;
    }
    d2.sqrt().powf(b)
}

/// Below this exponent the summation runs in the log domain to avoid
/// under/overflow of `|f|^p`.
const LOG_DOMAIN_BELOW: f64 = 0.25;

/// Direct-domain weighted p-th power sum, `h^dim · Σ (w·|f|)^p`, already
/// rooted. Shared by [`lp_norm`] and [`weighted_norm`].
fn finite_norm_direct(f: &GridFunction, p: f64, b: f64, center: &[f64]) -> f64 {
    let spec = *f.spec();
    let samples = f.samples();
    let sum = if b == 0.0 && p == 2.0 {
        pairwise_sum(samples.len(), &|i| samples[i].norm_sqr())
    } else if b == 0.0 && p == 1.0 {
        pairwise_sum(samples.len(), &|i| samples[i].norm())
    } else {
        pairwise_sum(samples.len(), &|i| {
            let mag = samples[i].norm();
            if mag == 0.0 {
                0.0
            } else {
                (weight_at(&spec, i, b, center) * mag).powf(p)
            }
        })
    };
    (sum * spec.cell_volume()).powf(1.0 / p)
}

/// Log-domain evaluation of the same quantity, stable for tiny `p`.
pub(crate) fn finite_norm_log(f: &GridFunction, p: f64, b: f64, center: &[f64]) -> f64 {
    let spec = *f.spec();
    let samples = f.samples();
    let log_term = |i: usize| -> f64 {
        let mag = samples[i].norm();
        if mag == 0.0 {
            return f64::NEG_INFINITY;
        }
        let w = weight_at(&spec, i, b, center);
        if w == 0.0 {
            return f64::NEG_INFINITY;
        }
        p * (w.ln() + mag.ln())
    };
    let peak = pairwise_max(samples.len(), &log_term);
    if peak == f64::NEG_INFINITY {
        return 0.0;
    }
    let sum = pairwise_sum(samples.len(), &|i| {
        let l = log_term(i);
        if l == f64::NEG_INFINITY {
            0.0
        } else {
            (l - peak).exp()
        }
    });
    let log_total = peak + sum.ln() + spec.dim as f64 * spec.spacing().ln();
    (log_total / p).exp()
}

fn finite_norm(f: &GridFunction, p: f64, b: f64, center: &[f64]) -> f64 {
    if p < LOG_DOMAIN_BELOW {
        finite_norm_log(f, p, b, center)
    } else {
        finite_norm_direct(f, p, b, center)
    }
}

/// `L^p` quasi-norm of a sampled field (`p = ∞` gives the sample sup).
pub fn lp_norm(f: &GridFunction, p: Index) -> Result<f64> {
    match p {
        Index::Infinity => {
            let samples = f.samples();
            Ok(pairwise_max(samples.len(), &|i| samples[i].norm()).max(0.0))
        }
        Index::Finite(r) => Ok(finite_norm(f, rational_to_f64(r), 0.0, &[])),
    }
}

/// Weighted moment norm `‖ |x - center|^b f ‖_p`.
pub fn weighted_norm(f: &GridFunction, spec: &NormSpec) -> Result<f64> {
    spec.check_center(f.spec())?;
    match spec.p {
        Index::Infinity => {
            let g = *f.spec();
            let samples = f.samples();
            let b = spec.b;
            let center = spec.center.clone();
            Ok(pairwise_max(samples.len(), &|i| {
                let mag = samples[i].norm();
                if mag == 0.0 {
                    0.0
                } else {
                    weight_at(&g, i, b, &center) * mag
                }
            })
            .max(0.0))
        }
        Index::Finite(r) => Ok(finite_norm(
            f,
            rational_to_f64(r),
            spec.b,
            &spec.center,
        )),
    }
}

/// First localization ratio `‖f‖_1 / ‖f‖_q`.
pub fn h0_ratio(f: &GridFunction, q: Index) -> Result<f64> {
    let denom = lp_norm(f, q)?;
    if denom == 0.0 {
        return Err(Error::ZeroFunction);
    }
    Ok(lp_norm(f, Index::from_int(1)?)? / denom)
}

/// Second localization ratio `‖ |x|^r f ‖_2 / ‖f‖_q` (weight centered at 0).
pub fn h1_ratio(f: &GridFunction, r: f64, q: Index) -> Result<f64> {
    let denom = lp_norm(f, q)?;
    if denom == 0.0 {
        return Err(Error::ZeroFunction);
    }
    let spec = NormSpec::new(Index::from_int(2)?, r, vec![0.0; f.spec().dim])?;
    Ok(weighted_norm(f, &spec)? / denom)
}
