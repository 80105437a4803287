//! Binary data-cube files.
//!
//! One JSON header line, then little-endian `f32` pairs `(re, im)` in
//! row-major `[sample, chirp, cycle]` order (the cycle index varies
//! fastest).

use std::io::{BufRead, Write};

use num_complex::Complex32;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::synth::{DataCube, RadarConfig};

const FORMAT: &str = "groundref-cube";
const VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CubeHeader {
    pub format: String,
    pub version: u32,
    pub n_samples: usize,
    pub n_chirps: usize,
    pub n_cycles: usize,
    pub config: RadarConfig,
}

pub fn write_cube(mut w: impl Write, cube: &DataCube) -> Result<()> {
    let (n_samples, n_chirps, n_cycles) = cube.dims();
    let header = CubeHeader {
        format: FORMAT.into(),
        version: VERSION,
        n_samples,
        n_chirps,
        n_cycles,
        config: cube.config.clone(),
    };
    serde_json::to_writer(&mut w, &header)?;
    w.write_all(b"\n")?;

    let mut buf = Vec::with_capacity(8 * n_chirps * n_cycles);
    for s in 0..n_samples {
        buf.clear();
        for c in 0..n_chirps {
            for y in 0..n_cycles {
                let v = cube.get(s, c, y);
                buf.extend_from_slice(&v.re.to_le_bytes());
                buf.extend_from_slice(&v.im.to_le_bytes());
            }
        }
        w.write_all(&buf)?;
    }
    Ok(())
}

pub fn read_cube(mut r: impl BufRead) -> Result<DataCube> {
    let mut line = String::new();
    r.read_line(&mut line)?;
    let header: CubeHeader = serde_json::from_str(line.trim_end())
        .map_err(|e| Error::Format(format!("bad cube header: {e}")))?;
    if header.format != FORMAT || header.version != VERSION {
        return Err(Error::Format(format!(
            "unsupported cube format {} v{}",
            header.format, header.version
        )));
    }
    header.config.validate()?;
    if header.n_samples != header.config.samples_per_chirp()
        || header.n_chirps != header.config.n_ramps_per_cycle
    {
        return Err(Error::Format(
            "cube dimensions disagree with the embedded config".into(),
        ));
    }

    let mut cube = DataCube::zeros(header.config, header.n_cycles);
    let mut buf = vec![0u8; 8 * header.n_chirps * header.n_cycles];
    for s in 0..header.n_samples {
        r.read_exact(&mut buf)
            .map_err(|e| Error::Format(format!("truncated cube data: {e}")))?;
        let mut words = buf
            .chunks_exact(4)
            .map(|b| f32::from_le_bytes([b[0], b[1], b[2], b[3]]));
        for c in 0..header.n_chirps {
            for y in 0..header.n_cycles {
                let (re, im) = (words.next().unwrap(), words.next().unwrap());
                cube.set(s, c, y, Complex32::new(re, im));
            }
        }
    }
    let mut rest = [0u8; 1];
    if r.read(&mut rest)? != 0 {
        return Err(Error::Format("trailing bytes after cube data".into()));
    }
    Ok(cube)
}
