//! Spectral evolution operators: free Schrödinger, heat, half-wave, the
//! second-order wave system, frequency-projected energy densities, and a
//! nonlinear Schrödinger solver (Strang split-step) together with the
//! Duhamel fixed-point iteration it is cross-checked against.

mod linear;
mod nls;
mod wave;

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{read_grid_function, write_grid_function, GridFunction, GridSpec};
use crate::oracles::GaussianPacket;

pub use linear::{half_wave_evolve, heat_evolve, heat_trace, schrodinger_evolve, schrodinger_trace, HalfWaveSign};
pub use nls::{duhamel_picard, nls_split_step, xp_norm};
pub use wave::{projected_energy, projected_energy_density, wave_solve};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Equation {
    Schrodinger,
    Heat,
    HalfWavePlus,
    HalfWaveMinus,
    Wave,
    Nls,
}

/// A uniformly sampled evolution `t_0 < t_1 < … < t_M` on one grid.
#[derive(Clone, Debug)]
pub struct EvolutionTrace {
    pub equation: Equation,
    pub times: Vec<f64>,
    pub snapshots: Vec<GridFunction>,
    pub dt: f64,
    pub method: String,
}

impl EvolutionTrace {
    pub fn new(
        equation: Equation,
        times: Vec<f64>,
        snapshots: Vec<GridFunction>,
        method: impl Into<String>,
    ) -> Result<EvolutionTrace> {
        if times.len() != snapshots.len() || times.len() < 2 {
            return Err(Error::Window(format!(
                "trace needs matching times and snapshots (at least two), got {} and {}",
                times.len(),
                snapshots.len()
            )));
        }
        let dt = times[1] - times[0];
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::Window("trace times must be increasing".into()));
        }
        for w in times.windows(2) {
            if ((w[1] - w[0]) - dt).abs() > 1e-9 * dt {
                return Err(Error::Window(format!(
                    "trace times are not uniform: step {} vs {dt}",
                    w[1] - w[0]
                )));
            }
        }
        for s in &snapshots[1..] {
            snapshots[0].same_grid(s)?;
        }
        Ok(EvolutionTrace {
            equation,
            times,
            snapshots,
            dt,
            method: method.into(),
        })
    }

    pub fn spec(&self) -> &GridSpec {
        self.snapshots[0].spec()
    }

    pub fn end_state(&self) -> &GridFunction {
        self.snapshots.last().expect("trace is nonempty")
    }

    /// Writes the trace as `snap-NNNNNN.gfn` files plus `manifest.json`.
    pub fn save<P: AsRef<Path>>(&self, dir: P) -> Result<()> {
        let dir = dir.as_ref();
        std::fs::create_dir_all(dir)?;
        for (i, snap) in self.snapshots.iter().enumerate() {
            write_grid_function(dir.join(format!("snap-{i:06}.gfn")), snap)?;
        }
        let manifest = TraceManifest {
            equation: self.equation,
            dt: self.dt,
            times: self.times.clone(),
            method: self.method.clone(),
            grid: *self.spec(),
            snapshots: self.snapshots.len(),
        };
        let file = std::fs::File::create(dir.join("manifest.json"))?;
        serde_json::to_writer_pretty(file, &manifest)?;
        Ok(())
    }

    pub fn load<P: AsRef<Path>>(dir: P) -> Result<EvolutionTrace> {
        let dir = dir.as_ref();
        let manifest: TraceManifest =
            serde_json::from_reader(std::fs::File::open(dir.join("manifest.json"))?)?;
        let mut snapshots = Vec::with_capacity(manifest.snapshots);
        for i in 0..manifest.snapshots {
            snapshots.push(read_grid_function(dir.join(format!("snap-{i:06}.gfn")))?);
        }
        EvolutionTrace::new(manifest.equation, manifest.times, snapshots, manifest.method)
    }
}

#[derive(Serialize, Deserialize)]
struct TraceManifest {
    equation: Equation,
    dt: f64,
    times: Vec<f64>,
    method: String,
    grid: GridSpec,
    snapshots: usize,
}

/// Cauchy data for the wave system.
#[derive(Clone, Debug)]
pub struct WaveState {
    pub u: GridFunction,
    pub ut: GridFunction,
}

impl WaveState {
    pub fn new(u: GridFunction, ut: GridFunction) -> Result<WaveState> {
        u.same_grid(&ut)?;
        Ok(WaveState { u, ut })
    }

    pub fn spec(&self) -> &GridSpec {
        self.u.spec()
    }
}

/// Time-dependent coefficient of the focusing term
/// `i u_t + Δu + φ(t,x) |u|^{m-1} u = 0`.
///
/// All shapes are real-valued, so the split-step rotation conserves mass.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum PotentialShape {
    Zero,
    /// `φ(t) = c (1 + |t|)^{-sigma}`.
    ConstantInSpace { c: f64, sigma: f64 },
    /// `φ(t,x) = c (1 + |t|)^{-sigma} g(x)` with a real packet profile `g`.
    Separable {
        c: f64,
        sigma: f64,
        profile: GaussianPacket,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PotentialSpec {
    pub shape: PotentialShape,
    /// Nonlinearity order `m > 1` in `|u|^{m-1} u`.
    pub m: f64,
}

impl PotentialSpec {
    pub fn new(shape: PotentialShape, m: f64) -> Result<PotentialSpec> {
        if !(m > 1.0 && m.is_finite()) {
            return Err(Error::Config(format!(
                "nonlinearity order must satisfy m > 1, got {m}"
            )));
        }
        match &shape {
            PotentialShape::Zero => {}
            PotentialShape::ConstantInSpace { c, sigma } => {
                if !c.is_finite() || !(sigma.is_finite() && *sigma >= 0.0) {
                    return Err(Error::Config(format!(
                        "potential parameters must be finite with sigma >= 0, got c={c}, sigma={sigma}"
                    )));
                }
            }
            PotentialShape::Separable { c, sigma, profile } => {
                if !c.is_finite() || !(sigma.is_finite() && *sigma >= 0.0) {
                    return Err(Error::Config(format!(
                        "potential parameters must be finite with sigma >= 0, got c={c}, sigma={sigma}"
                    )));
                }
                if profile.amplitude.im != 0.0
                    || profile.width.im != 0.0
                    || profile.modulation.iter().any(|&x| x != 0.0)
                {
                    return Err(Error::Config(
                        "separable potential profile must be a real, unmodulated packet".into(),
                    ));
                }
            }
        }
        Ok(PotentialSpec { shape, m })
    }

    pub fn zero(m: f64) -> Result<PotentialSpec> {
        PotentialSpec::new(PotentialShape::Zero, m)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.shape, PotentialShape::Zero)
    }

    /// Time envelope of the coefficient.
    pub fn envelope(&self, t: f64) -> f64 {
        match &self.shape {
            PotentialShape::Zero => 0.0,
            PotentialShape::ConstantInSpace { c, sigma }
            | PotentialShape::Separable { c, sigma, .. } => {
                c * (1.0 + t.abs()).powf(-sigma)
            }
        }
    }

    /// Spatial factor `g(x)` sampled on the grid (all ones when the shape
    /// has no spatial dependence).
    pub fn spatial_profile(&self, spec: &GridSpec) -> Result<Vec<f64>> {
        match &self.shape {
            PotentialShape::Zero | PotentialShape::ConstantInSpace { .. } => {
                Ok(vec![1.0; spec.len()])
            }
            PotentialShape::Separable { profile, .. } => {
                let g = profile.sample(spec)?;
                Ok(g.samples().iter().map(|z| z.re).collect())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn trace_validation() {
        let spec = GridSpec::new(1, 16, 2.0).unwrap();
        let f = GridFunction::zeros(spec);
        assert!(EvolutionTrace::new(
            Equation::Heat,
            vec![0.0, 0.1, 0.2],
            vec![f.clone(), f.clone(), f.clone()],
            "test",
        )
        .is_ok());
        assert!(matches!(
            EvolutionTrace::new(
                Equation::Heat,
                vec![0.0, 0.1, 0.25],
                vec![f.clone(), f.clone(), f.clone()],
                "test",
            ),
            Err(Error::Window(_))
        ));
        assert!(EvolutionTrace::new(Equation::Heat, vec![0.0], vec![f.clone()], "test").is_err());
        let other = GridFunction::zeros(GridSpec::new(1, 32, 2.0).unwrap());
        assert!(EvolutionTrace::new(
            Equation::Heat,
            vec![0.0, 0.1],
            vec![f, other],
            "test"
        )
        .is_err());
    }

    #[test]
    fn trace_save_load_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let spec = GridSpec::new(1, 32, 4.0).unwrap();
        let snaps: Vec<GridFunction> = (0..3)
            .map(|i| {
                GridFunction::from_fn(spec, move |x| {
                    Complex64::new(x[0] * i as f64, (-x[0] * x[0]).exp())
                })
            })
            .collect();
        let trace = EvolutionTrace::new(
            Equation::Schrodinger,
            vec![0.0, 0.5, 1.0],
            snaps,
            "multiplier",
        )
        .unwrap();
        trace.save(dir.path().join("trace")).unwrap();
        let back = EvolutionTrace::load(dir.path().join("trace")).unwrap();
        assert_eq!(back.equation, Equation::Schrodinger);
        assert_eq!(back.times, trace.times);
        assert_eq!(back.method, "multiplier");
        for (a, b) in trace.snapshots.iter().zip(&back.snapshots) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn potential_validation_and_envelope() {
        assert!(PotentialSpec::zero(1.0).is_err()); // m must exceed 1
        let pot = PotentialSpec::new(
            PotentialShape::ConstantInSpace { c: 0.5, sigma: 2.0 },
            3.0,
        )
        .unwrap();
        assert!((pot.envelope(0.0) - 0.5).abs() < 1e-15);
        assert!((pot.envelope(1.0) - 0.125).abs() < 1e-15);
        assert!((pot.envelope(-1.0) - 0.125).abs() < 1e-15);
        assert_eq!(PotentialSpec::zero(2.0).unwrap().envelope(1.0), 0.0);

        let chirped = GaussianPacket::new(
            1,
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 0.5),
            vec![0.0],
            vec![0.0],
        )
        .unwrap();
        assert!(PotentialSpec::new(
            PotentialShape::Separable {
                c: 1.0,
                sigma: 2.0,
                profile: chirped
            },
            2.0
        )
        .is_err());
    }

    #[test]
    fn separable_profile_samples_real_part() {
        let packet = GaussianPacket::isotropic(1, 2.0).unwrap();
        let pot = PotentialSpec::new(
            PotentialShape::Separable {
                c: 1.0,
                sigma: 1.0,
                profile: packet,
            },
            2.0,
        )
        .unwrap();
        let spec = GridSpec::new(1, 64, 4.0).unwrap();
        let g = pot.spatial_profile(&spec).unwrap();
        let mid = g[32]; // x = 0
        assert!((mid - 1.0).abs() < 1e-12);
        assert!(g.iter().all(|&v| (0.0..=1.0 + 1e-12).contains(&v)));
    }
}
