//! Target selection, single-target tracking and power-series extraction.

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::cfar::{ca_cfar, CfarParams, PowerMap};
use super::spectrum::{coherent_hann, tone_at, RangeDopplerMap, SpectrumProcessor};
use super::{AmplitudeSeries, Strategy};
use crate::error::{Error, Result};
use crate::synth::DataCube;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Detection {
    pub range_bin: usize,
    pub range: f64,
    pub doppler_bin: Option<usize>,
    pub velocity: Option<f64>,
    pub power: f64,
    pub timestamp: f64,
}

/// Previous selection used to keep following the same reflection point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackPrior {
    pub range: f64,
    pub velocity: f64,
    /// Time since the prior was valid, s.
    pub elapsed: f64,
    pub bin_width: f64,
}

impl TrackPrior {
    pub fn predicted_range(&self) -> f64 {
        self.range + self.velocity * self.elapsed
    }
}

fn neighbours(a: &Detection, b: &Detection) -> bool {
    let doppler_close = match (a.doppler_bin, b.doppler_bin) {
        (Some(x), Some(y)) => x.abs_diff(y) <= 1,
        _ => true,
    };
    a.range_bin.abs_diff(b.range_bin) <= 1 && doppler_close
}

/// Detections not exceeded in power by an adjacent detection.
pub fn local_maxima(detections: &[Detection]) -> Vec<&Detection> {
    detections
        .iter()
        .enumerate()
        .filter(|(i, d)| {
            !detections
                .iter()
                .enumerate()
                .any(|(j, e)| j != *i && neighbours(d, e) && e.power > d.power)
        })
        .map(|(_, d)| d)
        .collect()
}

/// Picks the range-domain local maximum closest to the sensor.
///
/// With a prior, a local maximum within ±2 range bins of the predicted
/// position wins over the closest one. Returns `None` when nothing is
/// detected.
pub fn select_target_bin(detections: &[Detection], prior: Option<&TrackPrior>) -> Option<Detection> {
    let maxima = local_maxima(detections);
    let stronger = |a: &&Detection, b: &&Detection| b.power.total_cmp(&a.power);

    if let Some(p) = prior {
        let predicted = p.predicted_range();
        let gate = 2.0 * p.bin_width;
        let gated = maxima
            .iter()
            .filter(|d| (d.range - predicted).abs() <= gate)
            .min_by(|a, b| {
                (a.range - predicted)
                    .abs()
                    .total_cmp(&(b.range - predicted).abs())
                    .then_with(|| stronger(a, b))
            });
        if let Some(d) = gated {
            return Some((*d).clone());
        }
    }
    maxima
        .iter()
        .min_by(|a, b| a.range.total_cmp(&b.range).then_with(|| stronger(a, b)))
        .map(|d| (*d).clone())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrackerConfig {
    pub cfar_1d: CfarParams,
    pub cfar_2d: CfarParams,
    /// Detections weaker than the map maximum by more than this are ignored.
    pub dynamic_range_db: f64,
    /// Weight of the measured range in the range update.
    pub range_gain: f64,
    /// Weight of the new Doppler velocity in the velocity update.
    pub velocity_gain: f64,
    /// Consecutive cycles without a gated detection before the track is lost.
    pub max_missed: usize,
}

impl Default for TrackerConfig {
    fn default() -> Self {
        Self {
            cfar_1d: CfarParams::default_1d(),
            cfar_2d: CfarParams::default_2d(),
            dynamic_range_db: 30.0,
            range_gain: 0.25,
            velocity_gain: 0.5,
            max_missed: 3,
        }
    }
}

/// Track estimate at the centre of one measurement cycle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrackPoint {
    pub cycle: usize,
    pub time: f64,
    pub range: f64,
    pub velocity: Option<f64>,
    pub measured_range: Option<f64>,
}

/// Tracker configuration plus everything learned while extracting.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TrackerState {
    pub config: TrackerConfig,
    pub track: Vec<TrackPoint>,
    /// Selected detection of every cycle that had one.
    pub detections: Vec<Detection>,
}

impl TrackerState {
    pub fn new(config: TrackerConfig) -> Self {
        Self {
            config,
            ..Default::default()
        }
    }
}

/// Vertex offset of a parabola through three log-powers, in `[-0.5, 0.5]`.
fn log_parabolic_offset(left: f64, centre: f64, right: f64) -> f64 {
    if !(left > 0.0 && centre > 0.0 && right > 0.0) {
        return 0.0;
    }
    let (l, c, r) = (left.ln(), centre.ln(), right.ln());
    let denom = l - 2.0 * c + r;
    if denom >= 0.0 {
        return 0.0;
    }
    (0.5 * (l - r) / denom).clamp(-0.5, 0.5)
}

fn refine(profile: impl Fn(usize) -> f64, at: usize, len: usize) -> f64 {
    if at == 0 || at + 1 >= len {
        return at as f64;
    }
    at as f64 + log_parabolic_offset(profile(at - 1), profile(at), profile(at + 1))
}

/// Measured cycles used to resolve the Doppler alias of a new track.
const ALIAS_FIT_POINTS: usize = 3;

/// Weighted centroid `(time, range)` and least-squares slope of
/// `(time, range, weight)` points. Weights are the detection powers, since
/// the variance of a peak position scales with the inverse of its SNR.
fn weighted_fit(points: &[(f64, f64, f64)]) -> ((f64, f64), f64) {
    let w: f64 = points.iter().map(|p| p.2).sum();
    let t0 = points.iter().map(|p| p.2 * p.0).sum::<f64>() / w;
    let r0 = points.iter().map(|p| p.2 * p.1).sum::<f64>() / w;
    let (num, den) = points.iter().fold((0.0, 0.0), |(n, d), &(t, r, w)| {
        (n + w * (t - t0) * (r - r0), d + w * (t - t0) * (t - t0))
    });
    ((t0, r0), num / den)
}

fn unfold(folded: f64, reference: f64, interval: f64) -> f64 {
    folded + interval * ((reference - folded) / interval).round()
}

struct CycleMeasurement {
    detections: Vec<Detection>,
    /// Power used for sub-bin refinement: `(range_bin, doppler_bin) -> power`.
    map: Vec<f64>,
    cols: usize,
}

fn detect(
    strategy: Strategy,
    spectra: &[Vec<Complex64>],
    rd: &RangeDopplerMap,
    usable: usize,
    config: &TrackerConfig,
    timestamp: f64,
) -> Result<CycleMeasurement> {
    let (map, cols, params) = match strategy {
        Strategy::SoR => {
            let n = spectra.len() as f64;
            let profile: Vec<f64> = (0..usable)
                .map(|r| spectra.iter().map(|s| s[r].norm_sqr()).sum::<f64>() / n)
                .collect();
            (profile, 1, config.cfar_1d)
        }
        Strategy::SoRD => (
            rd.bins[..usable * rd.n_doppler]
                .iter()
                .map(|v| v.norm_sqr())
                .collect(),
            rd.n_doppler,
            config.cfar_2d,
        ),
    };
    let peak = map.iter().copied().fold(0.0, f64::max);
    let floor = peak * 10f64.powf(-config.dynamic_range_db / 10.0);
    let hits = ca_cfar(&PowerMap::two_d(&map, usable, cols), &params)?;
    let detections = hits
        .into_iter()
        .filter(|h| h.power > 0.0 && h.power >= floor)
        .map(|h| {
            let doppler = (strategy == Strategy::SoRD).then_some(h.col);
            Detection {
                range_bin: h.row,
                range: rd.range_of(h.row),
                doppler_bin: doppler,
                velocity: doppler.map(|d| rd.velocity_of(d as f64)),
                power: h.power,
                timestamp,
            }
        })
        .collect();
    Ok(CycleMeasurement {
        detections,
        map,
        cols,
    })
}

/// Folded velocity of the strongest Doppler cell in one range row.
fn doppler_velocity(rd: &RangeDopplerMap, range_bin: usize) -> f64 {
    let row: Vec<f64> = (0..rd.n_doppler)
        .map(|d| rd.get(range_bin, d).norm_sqr())
        .collect();
    let k = row
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map_or(0, |(k, _)| k);
    rd.velocity_of(refine(|i| row[i], k, row.len()))
}

/// Range rate from the peak migration between the first and last chirp of
/// one cycle. Coarse, but enough to pick the right Doppler alias when no
/// earlier cycle is available.
fn intra_cycle_rate(
    spectra: &[Vec<Complex64>],
    range_bin: usize,
    usable: usize,
    bin_width: f64,
    chirp_period: f64,
) -> f64 {
    let n = spectra.len();
    if n < 2 {
        return 0.0;
    }
    let peak = |s: &[Complex64]| {
        let lo = range_bin.saturating_sub(3);
        let hi = (range_bin + 4).min(usable);
        let k = (lo..hi)
            .max_by(|&a, &b| s[a].norm_sqr().total_cmp(&s[b].norm_sqr()))
            .unwrap_or(range_bin);
        refine(|i| s[i].norm_sqr(), k, usable)
    };
    let shift = peak(&spectra[n - 1]) - peak(&spectra[0]);
    shift * bin_width / ((n - 1) as f64 * chirp_period)
}

/// Runs detection and tracking over every cycle of `cube` and samples the
/// received power of the tracked target.
///
/// * SoR — one point per chirp, the range spectrum evaluated at the
///   tracked (fractional) range of that chirp.
/// * SoRD — one point per cycle, the range-Doppler cell of the target with
///   the range axis following the track through the burst.
///
/// Distances are the tracked radar range, advanced with the
/// Doppler-derived velocity between measurements.
pub fn extract_series(
    cube: &DataCube,
    strategy: Strategy,
    state: &mut TrackerState,
) -> Result<AmplitudeSeries> {
    let config = &cube.config;
    let proc = SpectrumProcessor::new(config);
    let bin_width = proc.bin_width;
    let usable = ((config.max_range / bin_width).floor() as usize + 1).min(cube.n_samples());
    let tc = state.config;

    state.track.clear();
    state.detections.clear();
    let mut missed = 0usize;
    let mut first_missed = 0usize;
    let mut initial_velocity = None;
    let mut fit_points = Vec::new();

    for cycle in 0..cube.n_cycles() {
        let t0 = cube.chirp_timestamp(0, cycle);
        let t_mid = (0..cube.n_chirps())
            .map(|c| cube.chirp_timestamp(c, cycle))
            .sum::<f64>()
            / cube.n_chirps() as f64;
        let spectra = proc.cycle_range_spectra(cube, cycle)?;
        let rd = proc.doppler(&spectra, t0);
        let m = detect(strategy, &spectra, &rd, usable, &tc, t_mid)?;

        let last = state.track.last().cloned();
        let prior = last.as_ref().map(|p| TrackPrior {
            range: p.range,
            velocity: p.velocity.unwrap_or(0.0),
            elapsed: t_mid - p.time,
            bin_width,
        });
        let selected = select_target_bin(&m.detections, prior.as_ref()).filter(|d| {
            match (&prior, last.as_ref().and_then(|p| p.velocity)) {
                (Some(p), Some(_)) => (d.range - p.predicted_range()).abs() <= 2.0 * bin_width,
                _ => true,
            }
        });

        let Some(sel) = selected else {
            let Some(last) = last else { continue };
            if missed == 0 {
                first_missed = cycle;
            }
            missed += 1;
            if missed > tc.max_missed {
                return Err(Error::Gap {
                    cycles: missed,
                    first_cycle: first_missed,
                });
            }
            let v = last.velocity.unwrap_or(0.0);
            state.track.push(TrackPoint {
                cycle,
                time: t_mid,
                range: last.range + v * (t_mid - last.time),
                velocity: last.velocity,
                measured_range: None,
            });
            continue;
        };
        missed = 0;

        let measured = bin_width
            * match strategy {
                // The burst-averaged profile is smeared over every bin the
                // target crosses during the burst and weighted by fading, so
                // the range is read off the chirp at the burst centre.
                Strategy::SoR => {
                    let centre = &spectra[spectra.len() / 2];
                    let power = |r: usize| centre[r].norm_sqr();
                    let lo = sel.range_bin.saturating_sub(2);
                    let hi = (sel.range_bin + 3).min(usable);
                    let k = (lo..hi)
                        .max_by(|&a, &b| power(a).total_cmp(&power(b)))
                        .unwrap_or(sel.range_bin);
                    refine(power, k, usable)
                }
                // A target that migrates during the burst leaves a skewed
                // peak, and off-peak Doppler columns show it at a shifted
                // range. Refine along the strongest column instead.
                Strategy::SoRD => {
                    let at = |r: usize, c: usize| m.map[r * m.cols + c];
                    let col = (0..m.cols)
                        .max_by(|&a, &b| at(sel.range_bin, a).total_cmp(&at(sel.range_bin, b)))
                        .unwrap_or(0);
                    let lo = sel.range_bin.saturating_sub(1);
                    let hi = (sel.range_bin + 2).min(usable);
                    let k = (lo..hi)
                        .max_by(|&a, &b| at(a, col).total_cmp(&at(b, col)))
                        .unwrap_or(sel.range_bin);
                    refine(|r| at(r, col), k, usable)
                }
            };
        let folded = doppler_velocity(&rd, sel.range_bin);

        // Measurements that share the folded Doppler are collected until a
        // weighted slope can pick the alias. Two points are not enough: one
        // of them may sit in a fading null with a badly distorted peak.
        fit_points.push((t_mid, measured, sel.power));
        let point = match last {
            Some(last) if last.velocity.is_some() || fit_points.len() >= ALIAS_FIT_POINTS => {
                let dt = t_mid - last.time;
                let (range, velocity) = match last.velocity {
                    Some(v) => {
                        let doppler = unfold(folded, v, rd.ambiguity_interval());
                        let velocity = v + tc.velocity_gain * (doppler - v);
                        let predicted = last.range + 0.5 * (velocity + v) * dt;
                        (predicted + tc.range_gain * (measured - predicted), velocity)
                    }
                    None => {
                        let ((t0, r0), slope) = weighted_fit(&fit_points);
                        let velocity = unfold(folded, slope, rd.ambiguity_interval());
                        (r0 + velocity * (t_mid - t0), velocity)
                    }
                };
                TrackPoint {
                    cycle,
                    time: t_mid,
                    range,
                    velocity: Some(velocity),
                    measured_range: Some(measured),
                }
            }
            _ => {
                if last.is_none() {
                    let rate = intra_cycle_rate(
                        &spectra,
                        sel.range_bin,
                        usable,
                        bin_width,
                        config.chirp_period(),
                    );
                    initial_velocity = Some(unfold(folded, rate, rd.ambiguity_interval()));
                }
                TrackPoint {
                    cycle,
                    time: t_mid,
                    range: measured,
                    velocity: None,
                    measured_range: Some(measured),
                }
            }
        };
        state.detections.push(Detection {
            velocity: point.velocity.or(sel.velocity),
            ..sel
        });
        state.track.push(point);
    }

    if state.track.is_empty() {
        return Err(Error::NoTarget);
    }
    // The first point only has the coarse single-cycle estimate; later
    // cycles measure the velocity better.
    let first_velocity = state
        .track
        .iter()
        .find_map(|p| p.velocity)
        .or(initial_velocity)
        .unwrap_or(0.0);
    // Points from before the alias was resolved carry raw measurements;
    // they are re-anchored to the first established point.
    let anchor = state
        .track
        .iter()
        .find(|p| p.velocity.is_some())
        .map(|p| (p.time, p.range));
    for p in state.track.iter_mut() {
        if p.velocity.is_none() {
            p.velocity = Some(first_velocity);
            if let Some((t, r)) = anchor {
                p.range = r - first_velocity * (t - p.time);
            }
        }
    }
    if let Some(d) = state.detections.first_mut() {
        d.velocity = Some(first_velocity);
    }

    let points = sample_track(cube, strategy, &proc, &state.track)?;
    AmplitudeSeries::new(points, strategy, bin_width)
}

fn sample_track(
    cube: &DataCube,
    strategy: Strategy,
    proc: &SpectrumProcessor,
    track: &[TrackPoint],
) -> Result<Vec<(f64, f64)>> {
    let n_chirps = cube.n_chirps();
    let doppler_window = coherent_hann(n_chirps);
    let fft = FftPlanner::new().plan_fft_forward(n_chirps);
    let lambda = cube.config.wavelength();
    let prf = cube.config.pulse_repetition_frequency;
    let mut points = Vec::new();
    let mut burst = vec![Complex64::new(0.0, 0.0); n_chirps];

    for p in track {
        let v = p.velocity.unwrap_or(0.0);
        for (c, slot) in burst.iter_mut().enumerate() {
            let t = cube.chirp_timestamp(c, p.cycle);
            let range = p.range + v * (t - p.time);
            let z = tone_at(cube.chirp(c, p.cycle)?, &proc.range_window, range / proc.bin_width);
            match strategy {
                Strategy::SoR => points.push((range, z.norm_sqr())),
                Strategy::SoRD => *slot = z * doppler_window[c],
            }
        }
        if strategy == Strategy::SoRD {
            fft.process(&mut burst);
            // Folded Doppler bin of the track velocity, searched ±2 bins.
            let f_d = 2.0 * v / lambda;
            let expected = (f_d / prf * n_chirps as f64).round() as i64;
            let power = (-2..=2)
                .map(|k| {
                    let idx = (expected + k).rem_euclid(n_chirps as i64) as usize;
                    burst[idx].norm_sqr()
                })
                .fold(0.0, f64::max);
            points.push((p.range, power));
        }
    }
    Ok(points)
}
