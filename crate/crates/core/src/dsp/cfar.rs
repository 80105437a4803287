use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Cell-averaging CFAR parameters, applied per windowed axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CfarParams {
    pub n_train: usize,
    pub n_guard: usize,
    pub scale: f64,
}

impl CfarParams {
    /// Scale giving false-alarm probability `pfa` on exponentially
    /// distributed noise for the smallest training set a cell can have
    /// (a corner cell), so the bound holds everywhere in the map.
    pub fn calibrated(n_train: usize, n_guard: usize, pfa: f64, two_d: bool) -> Self {
        let one_sided = n_train;
        let n_min = if two_d {
            let outer = n_train + n_guard + 1;
            let inner = n_guard + 1;
            outer * outer - inner * inner
        } else {
            one_sided
        } as f64;
        Self {
            n_train,
            n_guard,
            scale: n_min * (pfa.powf(-1.0 / n_min) - 1.0),
        }
    }

    pub fn default_1d() -> Self {
        Self::calibrated(16, 4, 1e-3, false)
    }

    pub fn default_2d() -> Self {
        Self::calibrated(16, 4, 1e-3, true)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_train < 1 || !(self.scale > 1.0) {
            return Err(Error::Parameter(format!(
                "CFAR needs n_train >= 1 and scale > 1, got {self:?}"
            )));
        }
        Ok(())
    }

    fn window(&self) -> usize {
        2 * (self.n_train + self.n_guard) + 1
    }
}

/// Row-major power map. A 1-D map has a single column.
#[derive(Debug, Clone, Copy)]
pub struct PowerMap<'a> {
    pub data: &'a [f64],
    pub rows: usize,
    pub cols: usize,
}

impl<'a> PowerMap<'a> {
    pub fn one_d(data: &'a [f64]) -> Self {
        Self {
            data,
            rows: data.len(),
            cols: 1,
        }
    }

    pub fn two_d(data: &'a [f64], rows: usize, cols: usize) -> Self {
        Self { data, rows, cols }
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.cols + col]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CfarHit {
    pub row: usize,
    pub col: usize,
    pub power: f64,
    pub noise_estimate: f64,
}

/// Summed-area table with a zero border.
struct Integral {
    sums: Vec<f64>,
    cols: usize,
}

impl Integral {
    fn new(map: &PowerMap) -> Self {
        let w = map.cols + 1;
        let mut sums = vec![0.0; (map.rows + 1) * w];
        for r in 0..map.rows {
            let mut row_acc = 0.0;
            for c in 0..map.cols {
                row_acc += map.get(r, c);
                sums[(r + 1) * w + c + 1] = sums[r * w + c + 1] + row_acc;
            }
        }
        Self { sums, cols: w }
    }

    /// Sum over rows `r0..r1`, cols `c0..c1` (half-open).
    fn rect(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> f64 {
        let s = |r: usize, c: usize| self.sums[r * self.cols + c];
        s(r1, c1) - s(r0, c1) - s(r1, c0) + s(r0, c0)
    }
}

fn clip(center: usize, radius: usize, len: usize) -> (usize, usize) {
    (center.saturating_sub(radius), (center + radius + 1).min(len))
}

/// Cell-averaging CFAR.
///
/// A cell is a detection when its power exceeds `scale` times the mean of
/// the training cells around it, guard cells excluded. Axes of length one
/// are not windowed. Near the edges the training region is clipped to the
/// map, never padded.
pub fn ca_cfar(map: &PowerMap, params: &CfarParams) -> Result<Vec<CfarHit>> {
    params.validate()?;
    if map.data.len() != map.rows * map.cols {
        return Err(Error::Parameter(format!(
            "power map of {} values is not {}x{}",
            map.data.len(),
            map.rows,
            map.cols
        )));
    }
    let windowed = |len: usize| len > 1;
    for len in [map.rows, map.cols] {
        if windowed(len) && params.window() > len {
            return Err(Error::Parameter(format!(
                "CFAR window of {} cells exceeds map dimension {len}",
                params.window()
            )));
        }
    }
    if map.data.is_empty() {
        return Ok(Vec::new());
    }

    let integral = Integral::new(map);
    let outer = params.n_train + params.n_guard;
    let inner = params.n_guard;
    let radius = |len: usize, r: usize| if windowed(len) { r } else { 0 };
    let (ro, co) = (radius(map.rows, outer), radius(map.cols, outer));
    let (ri, ci) = (radius(map.rows, inner), radius(map.cols, inner));

    let mut hits = Vec::new();
    for r in 0..map.rows {
        let (or0, or1) = clip(r, ro, map.rows);
        let (ir0, ir1) = clip(r, ri, map.rows);
        for c in 0..map.cols {
            let (oc0, oc1) = clip(c, co, map.cols);
            let (ic0, ic1) = clip(c, ci, map.cols);
            let n = (or1 - or0) * (oc1 - oc0) - (ir1 - ir0) * (ic1 - ic0);
            if n == 0 {
                continue;
            }
            let sum = integral.rect(or0, or1, oc0, oc1) - integral.rect(ir0, ir1, ic0, ic1);
            let noise = sum.max(0.0) / n as f64;
            let power = map.get(r, c);
            if power > params.scale * noise {
                hits.push(CfarHit {
                    row: r,
                    col: c,
                    power,
                    noise_estimate: noise,
                });
            }
        }
    }
    Ok(hits)
}
