//! Height power spectral density from a received-power series.
//!
//! Over flat ground the two-ray pattern is a sinusoid in the reciprocal
//! distance `u = 1/d` whose spatial frequency is proportional to the
//! scatterer height. After removing range loss, gain and DC, the series is
//! handed to a Lomb-Scargle periodogram (the samples are not uniform in `u`)
//! and the frequency axis is rescaled to height.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::dsp::{AmplitudeSeries, Strategy};
use crate::error::{Error, Result};
use crate::SPEED_OF_LIGHT;

pub const DEFAULT_MAX_HEIGHT: f64 = 10.0;
pub const DEFAULT_OVERSAMPLE: f64 = 4.0;

/// Minimum number of series points accepted by [`detrend_normalize`].
pub const MIN_POINTS: usize = 16;
/// Minimum distance span, in range bins, accepted by [`detrend_normalize`].
pub const MIN_SPAN_BINS: f64 = 10.0;

/// Zero-mean, gain-normalized pattern over `u = 1/d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetrendedSeries {
    /// `(u [1/m], y)`.
    pub points: Vec<(f64, f64)>,
}

impl DetrendedSeries {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn span(&self) -> f64 {
        let (lo, hi) = self
            .points
            .iter()
            .fold((f64::MAX, f64::MIN), |(lo, hi), &(u, _)| (lo.min(u), hi.max(u)));
        (hi - lo).max(0.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeightSpectrum {
    /// `heights[k] = k · height_step()`, starting at zero.
    pub heights: Vec<f64>,
    pub psd: Vec<f64>,
    /// Spatial-frequency spacing Δf of the periodogram grid, m.
    pub bin_spacing: f64,
    pub sensor_height: f64,
    pub center_frequency: f64,
    pub n_points: usize,
    pub strategy: Option<Strategy>,
}

impl HeightSpectrum {
    pub fn height_step(&self) -> f64 {
        height_per_frequency(self.sensor_height, self.center_frequency) * self.bin_spacing
    }

    pub fn max_height(&self) -> f64 {
        self.heights.last().copied().unwrap_or(0.0)
    }

    pub fn total_power(&self) -> f64 {
        self.psd.iter().sum()
    }

    /// Height of the global maximum.
    pub fn peak_height(&self) -> f64 {
        let k = self
            .psd
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map_or(0, |(k, _)| k);
        self.heights[k]
    }

    /// PSD scaled to unit total power. An all-zero PSD stays zero.
    pub fn normalized_psd(&self) -> Vec<f64> {
        let total = self.total_power();
        if total > 0.0 {
            self.psd.iter().map(|p| p / total).collect()
        } else {
            self.psd.clone()
        }
    }
}

/// Height corresponding to one unit of spatial frequency in `u`.
pub fn height_per_frequency(sensor_height: f64, center_frequency: f64) -> f64 {
    SPEED_OF_LIGHT / (2.0 * sensor_height * center_frequency)
}

/// Spatial frequency in `u` of the pattern produced by a scatterer at `height`.
pub fn frequency_for_height(height: f64, sensor_height: f64, center_frequency: f64) -> f64 {
    height / height_per_frequency(sensor_height, center_frequency)
}

/// Height resolution of a periodogram over a reciprocal-distance span
/// `span_u` without oversampling.
pub fn height_resolution(sensor_height: f64, center_frequency: f64, span_u: f64) -> f64 {
    height_per_frequency(sensor_height, center_frequency) / span_u
}

/// Height axis `heights[k] = Δf / (2 h_S) · c0 / f_c · k`.
pub fn height_axis(bin_spacing: f64, sensor_height: f64, center_frequency: f64, n_bins: usize) -> Vec<f64> {
    let step = bin_spacing / (2.0 * sensor_height) * (SPEED_OF_LIGHT / center_frequency);
    (0..n_bins).map(|k| step * k as f64).collect()
}

fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Range-loss compensation, gain normalization and DC removal.
///
/// Powers are multiplied by `d⁴`, divided by their median and demeaned;
/// the abscissa becomes `u = 1/d`. The median keeps deep nulls from
/// dragging the normalization around.
pub fn detrend_normalize(series: &AmplitudeSeries) -> Result<DetrendedSeries> {
    if series.len() < MIN_POINTS {
        return Err(Error::Degenerate(format!(
            "series has {} points, at least {MIN_POINTS} required",
            series.len()
        )));
    }
    let required = MIN_SPAN_BINS * series.range_bin_width;
    let span = series.span();
    if span < required {
        return Err(Error::DegenerateSpan { span, required });
    }
    if !series.is_strictly_monotone() {
        return Err(Error::Degenerate(
            "series distances are not strictly monotone".into(),
        ));
    }

    let compensated: Vec<f64> = series.points.iter().map(|&(d, p)| p * d.powi(4)).collect();
    let med = median(&compensated);
    if !(med > 0.0) {
        return Err(Error::Degenerate(
            "median received power is zero, nothing to normalize".into(),
        ));
    }
    let mean = compensated.iter().map(|c| c / med).sum::<f64>() / compensated.len() as f64;
    let points = series
        .points
        .iter()
        .zip(&compensated)
        .map(|(&(d, _), &c)| (1.0 / d, c / med - mean))
        .collect();
    Ok(DetrendedSeries { points })
}

/// Classical Lomb-Scargle periodogram with the tau phase correction.
///
/// `P(f) = ½ [ (Σ y cos ω(u−τ))² / Σ cos² ω(u−τ) + (Σ y sin ω(u−τ))² / Σ sin² ω(u−τ) ]`
/// with `ω = 2πf`. This equals half the reduction in squared residual
/// achieved by the least-squares fit of `a cos ωu + b sin ωu`, and
/// `|DFT|² / N` on a uniform grid at the Fourier frequencies. The input is
/// used as given; demean it first.
pub fn lomb_scargle(series: &DetrendedSeries, freq_grid: &[f64]) -> Result<Vec<f64>> {
    if series.len() < 2 || !(series.span() > 0.0) {
        return Err(Error::Degenerate(
            "periodogram needs at least two distinct abscissae".into(),
        ));
    }
    if let Some(f) = freq_grid.iter().find(|f| !(**f > 0.0) || !f.is_finite()) {
        return Err(Error::Parameter(format!(
            "grid frequency {f} must be positive and finite"
        )));
    }
    Ok(freq_grid
        .iter()
        .map(|&f| ls_power(&series.points, 2.0 * PI * f))
        .collect())
}

fn ls_power(points: &[(f64, f64)], omega: f64) -> f64 {
    let (mut s2, mut c2) = (0.0, 0.0);
    for &(u, _) in points {
        let (s, c) = (2.0 * omega * u).sin_cos();
        s2 += s;
        c2 += c;
    }
    let tau = s2.atan2(c2) / (2.0 * omega);

    let (mut yc, mut ys, mut cc, mut ss) = (0.0, 0.0, 0.0, 0.0);
    for &(u, y) in points {
        let (s, c) = (omega * (u - tau)).sin_cos();
        yc += y * c;
        ys += y * s;
        cc += c * c;
        ss += s * s;
    }
    // A vanishing denominator means the corresponding basis function is
    // zero at every sample and cannot explain any variance.
    let term = |num: f64, den: f64| if den > 1e-12 * points.len() as f64 { num * num / den } else { 0.0 };
    0.5 * (term(yc, cc) + term(ys, ss))
}

/// Height PSD of a power series.
///
/// The spatial-frequency grid has spacing `Δf = 1 / (oversample · span(u))`
/// and runs up to the frequency of a scatterer at `max_height`. Bin 0 (zero
/// height) is kept on the axis with zero power, since the mean has been
/// removed and the periodogram is undefined there.
pub fn estimate_height_psd(
    series: &AmplitudeSeries,
    sensor_height: f64,
    center_frequency: f64,
    max_height: f64,
    oversample: f64,
) -> Result<HeightSpectrum> {
    if !(max_height > 0.0) || !max_height.is_finite() {
        return Err(Error::Parameter(format!(
            "max height {max_height} must be positive"
        )));
    }
    if !(oversample >= 1.0) || !oversample.is_finite() {
        return Err(Error::Parameter(format!(
            "oversample factor {oversample} must be at least 1"
        )));
    }
    if !(sensor_height > 0.0) || !(center_frequency > 0.0) {
        return Err(Error::Parameter(format!(
            "sensor height {sensor_height} and carrier {center_frequency} must be positive"
        )));
    }
    let detrended = detrend_normalize(series)?;
    let bin_spacing = 1.0 / (oversample * detrended.span());
    let f_max = frequency_for_height(max_height, sensor_height, center_frequency);
    let n_bins = (f_max / bin_spacing + 1e-9).floor() as usize + 1;
    let grid: Vec<f64> = (1..n_bins).map(|k| bin_spacing * k as f64).collect();

    let mut psd = Vec::with_capacity(n_bins);
    psd.push(0.0);
    psd.extend(lomb_scargle(&detrended, &grid)?);
    Ok(HeightSpectrum {
        heights: height_axis(bin_spacing, sensor_height, center_frequency, n_bins),
        psd,
        bin_spacing,
        sensor_height,
        center_frequency,
        n_points: series.len(),
        strategy: Some(series.strategy),
    })
}

/// Sum of per-spectrum normalized PSDs.
pub fn sum_psds(spectra: &[HeightSpectrum]) -> Result<HeightSpectrum> {
    let first = spectra
        .first()
        .ok_or_else(|| Error::Degenerate("no spectra to sum".into()))?;
    let same_axis = |s: &HeightSpectrum| {
        s.heights.len() == first.heights.len()
            && s.heights
                .iter()
                .zip(&first.heights)
                .all(|(a, b)| (a - b).abs() <= 1e-9 * b.abs().max(1.0))
    };
    if !spectra.iter().all(same_axis) {
        return Err(Error::AxisMismatch);
    }
    let mut psd = vec![0.0; first.psd.len()];
    for s in spectra {
        for (acc, p) in psd.iter_mut().zip(s.normalized_psd()) {
            *acc += p;
        }
    }
    let strategy = first
        .strategy
        .filter(|st| spectra.iter().all(|s| s.strategy == Some(*st)));
    Ok(HeightSpectrum {
        psd,
        n_points: spectra.iter().map(|s| s.n_points).sum(),
        strategy,
        ..first.clone()
    })
}
