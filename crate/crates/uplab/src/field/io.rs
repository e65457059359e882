//! Snapshot files: a fixed little-endian binary layout plus a JSON sidecar
//! describing the geometry, so external tools can read dumps without
//! guessing. Round trips are bit exact.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{GridFunction, GridSpec};
use crate::error::{Error, Result};

const MAGIC: &[u8; 4] = b"GFN1";
const LAYOUT_ROW_MAJOR_INTERLEAVED: u32 = 0;

#[derive(Serialize, Deserialize)]
struct Sidecar {
    format: String,
    dim: usize,
    points_per_axis: usize,
    half_width: f64,
    layout: String,
    samples: usize,
}

fn sidecar_path(path: &Path) -> PathBuf {
    let mut os = path.as_os_str().to_os_string();
    os.push(".json");
    PathBuf::from(os)
}

/// Writes `magic, dim (u32), points per axis (u32), half width (f64),
/// layout tag (u32), then re/im f64 pairs in row-major order`, all little
/// endian, plus a human-readable `<path>.json` sidecar.
pub fn write_grid_function<P: AsRef<Path>>(path: P, f: &GridFunction) -> Result<()> {
    let path = path.as_ref();
    let spec = f.spec();
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(MAGIC)?;
    w.write_all(&(spec.dim as u32).to_le_bytes())?;
    w.write_all(&(spec.points_per_axis as u32).to_le_bytes())?;
    w.write_all(&spec.half_width.to_le_bytes())?;
    w.write_all(&LAYOUT_ROW_MAJOR_INTERLEAVED.to_le_bytes())?;
    for z in f.samples() {
        w.write_all(&z.re.to_le_bytes())?;
        w.write_all(&z.im.to_le_bytes())?;
    }
    w.flush()?;

    let sidecar = Sidecar {
        format: "GFN1".into(),
        dim: spec.dim,
        points_per_axis: spec.points_per_axis,
        half_width: spec.half_width,
        layout: "row-major-complex-interleaved".into(),
        samples: spec.len(),
    };
    let mut s = BufWriter::new(File::create(sidecar_path(path))?);
    serde_json::to_writer_pretty(&mut s, &sidecar)?;
    s.write_all(b"\n")?;
    s.flush()?;
    Ok(())
}

fn read_u32(r: &mut impl Read) -> Result<u32> {
    let mut buf = [0u8; 4];
    r.read_exact(&mut buf)?;
    Ok(u32::from_le_bytes(buf))
}

fn read_f64(r: &mut impl Read) -> Result<f64> {
    let mut buf = [0u8; 8];
    r.read_exact(&mut buf)?;
    Ok(f64::from_le_bytes(buf))
}

/// Reads a file produced by [`write_grid_function`]. The sidecar is not
/// required; all authoritative metadata lives in the binary header.
pub fn read_grid_function<P: AsRef<Path>>(path: P) -> Result<GridFunction> {
    let mut r = BufReader::new(File::open(path.as_ref())?);
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Config(format!(
            "{}: not a GFN1 snapshot (magic {:?})",
            path.as_ref().display(),
            magic
        )));
    }
    let dim = read_u32(&mut r)? as usize;
    let points = read_u32(&mut r)? as usize;
    let half_width = read_f64(&mut r)?;
    let layout = read_u32(&mut r)?;
    if layout != LAYOUT_ROW_MAJOR_INTERLEAVED {
        return Err(Error::Config(format!(
            "unsupported snapshot layout tag {layout}"
        )));
    }
    let spec = GridSpec::new(dim, points, half_width)?;
    let mut samples = Vec::with_capacity(spec.len());
    for _ in 0..spec.len() {
        let re = read_f64(&mut r)?;
        let im = read_f64(&mut r)?;
        samples.push(Complex64::new(re, im));
    }
    let mut trailing = [0u8; 1];
    if r.read(&mut trailing)? != 0 {
        return Err(Error::Config(
            "snapshot file has trailing bytes beyond the declared sample count".into(),
        ));
    }
    GridFunction::from_samples(spec, samples)
}
