//! Harnesses that assemble norms, oracles, and propagators into the
//! localization inequalities the library verifies: product evaluation,
//! explicit moment lower bounds, growth-slope fits, observability ratios,
//! and a best-effort counterexample search.
//!
//! Every harness reports through [`ExperimentRecord`], a flat JSON-friendly
//! document designed so that a run is reproducible bit-for-bit from its
//! parameters and seed.

mod growth;
mod lemmas;
mod minimize;
mod observability;
mod up;

pub use growth::{
    log_log_fit, moment_growth_fit, moment_growth_fit_analytic, wave_energy_growth, GrowthFit,
    MomentKind, WaveGrowth,
};
pub use lemmas::{half_mass_check, lemma1_check, lemma2_check, HalfMass, Lemma1Outcome, Lemma2Outcome};
pub(crate) use lemmas::validate_moment_params;
pub use minimize::{coordinate_descent, product_minimizer, MinimizerReport};
pub use observability::{
    heat_observability, observability_infimum, schrodinger_observability, thickness_check,
    HeatObservability,
};
pub use up::{thm5_product, up_product, up_product_unchecked, ProductBreakdown};

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{GridFunction, GridSpec};
use crate::oracles::GaussianPacket;

/// A predicted quantity always travels with the formula that produced it,
/// so records never contain bare numbers of unknown origin.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Predicted {
    pub value: f64,
    pub formula: String,
}

/// Where a record came from: grid, seed, and free-form details such as
/// step sizes or excluded sample points.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Provenance {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub detail: BTreeMap<String, serde_json::Value>,
}

/// One experiment outcome: parameters in, measured and predicted values
/// out, plus a pass flag and the tolerances it was judged against.
///
/// All maps are ordered so serialization is deterministic; re-running a
/// record from its config and seed must reproduce it byte for byte.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub tag: String,
    pub params: BTreeMap<String, serde_json::Value>,
    pub measured: BTreeMap<String, f64>,
    pub predicted: BTreeMap<String, Predicted>,
    pub ok: bool,
    pub tolerances: BTreeMap<String, f64>,
    pub provenance: Provenance,
}

impl ExperimentRecord {
    pub fn new(tag: &str) -> ExperimentRecord {
        ExperimentRecord {
            tag: tag.to_string(),
            params: BTreeMap::new(),
            measured: BTreeMap::new(),
            predicted: BTreeMap::new(),
            ok: false,
            tolerances: BTreeMap::new(),
            provenance: Provenance::default(),
        }
    }

    pub fn set_param<T: Serialize>(&mut self, key: &str, value: T) -> Result<()> {
        self.params.insert(key.to_string(), serde_json::to_value(value)?);
        Ok(())
    }

    pub fn set_measured(&mut self, key: &str, value: f64) {
        self.measured.insert(key.to_string(), value);
    }

    pub fn set_predicted(&mut self, key: &str, value: f64, formula: &str) {
        self.predicted.insert(
            key.to_string(),
            Predicted {
                value,
                formula: formula.to_string(),
            },
        );
    }

    pub fn set_tolerance(&mut self, key: &str, value: f64) {
        self.tolerances.insert(key.to_string(), value);
    }

    /// Serialized form used both for files and for byte-identity checks.
    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        let mut bytes = serde_json::to_vec_pretty(self)?;
        bytes.push(b'\n');
        Ok(bytes)
    }

    pub fn save<P: AsRef<Path>>(&self, path: P) -> Result<()> {
        fs::write(path, self.to_bytes()?)?;
        Ok(())
    }

    pub fn load<P: AsRef<Path>>(path: P) -> Result<ExperimentRecord> {
        Ok(serde_json::from_slice(&fs::read(path)?)?)
    }
}

/// Families of test functions the sweeps and searches draw from. Members
/// are materialized on a declared grid and must be truncation-safe there.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum PacketFamily {
    /// Isotropic Gaussians `e^{-w|x|^2}`, one member per listed width.
    SingleGaussianSweep { widths: Vec<f64> },
    /// `count` unit-amplitude Gaussians of a fixed width, centers spaced
    /// evenly at distance `spread` from the origin.
    TranslatedGaussians { count: u32, width: f64, spread: f64 },
    /// Seeded random sums of at most five Gaussians with widths in
    /// `[1/2, 2]` and centers in the inner half-box.
    RandomSmoothCorpus { seed: u64, size: u32 },
}

impl PacketFamily {
    pub fn tag(&self) -> &'static str {
        match self {
            PacketFamily::SingleGaussianSweep { .. } => "single-gaussian-sweep",
            PacketFamily::TranslatedGaussians { .. } => "translated-gaussians",
            PacketFamily::RandomSmoothCorpus { .. } => "random-smooth-corpus",
        }
    }

    /// Evenly distributed unit directions used for translated centers:
    /// the two endpoints in 1-D, points of a regular polygon otherwise
    /// (in the first two coordinates for 3-D).
    fn direction(dim: usize, j: usize, count: usize) -> Vec<f64> {
        let mut dir = vec![0.0; dim];
        if dim == 1 {
            dir[0] = if count == 1 {
                1.0
            } else if j % 2 == 0 {
                1.0 - 2.0 * (j as f64) / (count - 1) as f64
            } else {
                -1.0 + 2.0 * (j as f64 - 1.0) / (count - 1) as f64
            };
        } else {
            let angle = 2.0 * std::f64::consts::PI * j as f64 / count as f64;
            dir[0] = angle.cos();
            dir[1] = angle.sin();
        }
        dir
    }

    /// Materializes every member on `spec`, rejecting any member whose
    /// boundary layer is not negligible there.
    pub fn members(&self, spec: &GridSpec) -> Result<Vec<GridFunction>> {
        let fields = match self {
            PacketFamily::SingleGaussianSweep { widths } => widths
                .iter()
                .map(|&w| GaussianPacket::isotropic(spec.dim, w)?.sample(spec))
                .collect::<Result<Vec<_>>>()?,
            PacketFamily::TranslatedGaussians {
                count,
                width,
                spread,
            } => {
                if *count == 0 {
                    return Err(Error::Config("translated family needs count >= 1".into()));
                }
                let packets = (0..*count as usize)
                    .map(|j| {
                        let center = Self::direction(spec.dim, j, *count as usize)
                            .iter()
                            .map(|d| d * spread)
                            .collect();
                        GaussianPacket::new(
                            spec.dim,
                            Complex64::new(1.0, 0.0),
                            Complex64::new(*width, 0.0),
                            center,
                            vec![0.0; spec.dim],
                        )
                    })
                    .collect::<Result<Vec<_>>>()?;
                vec![sum_of_packets(spec, &packets)?]
            }
            PacketFamily::RandomSmoothCorpus { seed, size } => {
                smooth_corpus(spec, *seed, *size as usize)?
            }
        };
        for (i, f) in fields.iter().enumerate() {
            if !f.tail_report().ok() {
                return Err(Error::Truncation(format!(
                    "family member {i} is not truncation-safe on the declared grid; \
                     enlarge the half width"
                )));
            }
        }
        Ok(fields)
    }
}

/// Pointwise sum of several packets sampled on one grid.
pub(crate) fn sum_of_packets(spec: &GridSpec, packets: &[GaussianPacket]) -> Result<GridFunction> {
    let mut total = GridFunction::zeros(*spec);
    for p in packets {
        let sampled = p.sample(spec)?;
        for (acc, z) in total.samples_mut().iter_mut().zip(sampled.samples()) {
            *acc += z;
        }
    }
    Ok(total)
}

/// Seeded corpus of random sums of at most five Gaussians: widths uniform
/// in `[1/2, 2]`, centers uniform in the inner half-box, complex amplitudes
/// with coordinates in `[-1, 1]`.
fn smooth_corpus(spec: &GridSpec, seed: u64, size: usize) -> Result<Vec<GridFunction>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let half = spec.half_width / 2.0;
    (0..size)
        .map(|_| {
            let bumps = rng.gen_range(1..=5u32);
            let packets = (0..bumps)
                .map(|_| {
                    let width = rng.gen_range(0.5..=2.0);
                    let center = (0..spec.dim).map(|_| rng.gen_range(-half..=half)).collect();
                    let amplitude = Complex64::new(
                        rng.gen_range(-1.0..=1.0f64),
                        rng.gen_range(-1.0..=1.0f64),
                    );
                    GaussianPacket::new(
                        spec.dim,
                        amplitude,
                        Complex64::new(width, 0.0),
                        center,
                        vec![0.0; spec.dim],
                    )
                })
                .collect::<Result<Vec<_>>>()?;
            sum_of_packets(spec, &packets)
        })
        .collect()
}

/// Geometric time grid for power-law fits: at least 12 points spanning at
/// least one decade, equally spaced in log t.
pub fn geometric_grid(t_lo: f64, t_hi: f64, points: usize) -> Result<Vec<f64>> {
    if !(t_lo > 0.0 && t_hi.is_finite() && t_hi > t_lo) {
        return Err(Error::Config(format!(
            "need 0 < t_lo < t_hi, got [{t_lo}, {t_hi}]"
        )));
    }
    if t_hi / t_lo < 10.0 {
        return Err(Error::Config(format!(
            "fit window [{t_lo}, {t_hi}] spans less than one decade"
        )));
    }
    if points < 12 {
        return Err(Error::Config(format!(
            "power-law fits need at least 12 sample times, got {points}"
        )));
    }
    let ratio = (t_hi / t_lo).ln() / (points - 1) as f64;
    Ok((0..points)
        .map(|i| t_lo * (ratio * i as f64).exp())
        .collect())
}
