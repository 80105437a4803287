use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::{Complex32, Complex64};
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::synth::{DataCube, RadarConfig};

/// Symmetric Hann window.
pub fn hann(n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![1.0];
    }
    (0..n)
        .map(|i| 0.5 - 0.5 * (2.0 * PI * i as f64 / (n - 1) as f64).cos())
        .collect()
}

/// Hann window scaled to unit coherent gain, so a tone of amplitude `A` on
/// a bin centre reads `A` after the FFT.
pub fn coherent_hann(n: usize) -> Vec<f64> {
    let w = hann(n);
    let sum: f64 = w.iter().sum();
    w.into_iter().map(|v| v / sum).collect()
}

/// Windowed DTFT of `samples` at a fractional bin position.
pub fn tone_at(samples: &[Complex32], window: &[f64], bin: f64) -> Complex64 {
    let n = samples.len();
    let step = Complex64::from_polar(1.0, -2.0 * PI * bin / n as f64);
    let mut phasor = Complex64::new(1.0, 0.0);
    let mut acc = Complex64::new(0.0, 0.0);
    for (x, w) in samples.iter().zip(window) {
        acc += Complex64::new(x.re as f64, x.im as f64) * (*w * phasor);
        phasor *= step;
    }
    acc
}

/// Raw ADC samples of one chirp, for single-target intra-chirp sampling.
pub fn intra_chirp_samples(cube: &DataCube, chirp: usize, cycle: usize) -> Result<&[Complex32]> {
    cube.chirp(chirp, cycle)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RangeSpectrum {
    pub bins: Vec<Complex64>,
    pub bin_width: f64,
    pub chirp_timestamp: f64,
}

impl RangeSpectrum {
    pub fn range_of(&self, bin: usize) -> f64 {
        bin as f64 * self.bin_width
    }

    pub fn power(&self) -> Vec<f64> {
        self.bins.iter().map(|v| v.norm_sqr()).collect()
    }
}

/// Range × Doppler map, Doppler axis centred (zero velocity at `n_doppler/2`).
#[derive(Debug, Clone, PartialEq)]
pub struct RangeDopplerMap {
    /// Row-major `[range][doppler]`.
    pub bins: Vec<Complex64>,
    pub n_range: usize,
    pub n_doppler: usize,
    pub bin_width: f64,
    pub velocity_bin_width: f64,
    pub cycle_timestamp: f64,
}

impl RangeDopplerMap {
    pub fn get(&self, range_bin: usize, doppler_bin: usize) -> Complex64 {
        self.bins[range_bin * self.n_doppler + doppler_bin]
    }

    pub fn velocity_of(&self, doppler_bin: f64) -> f64 {
        (doppler_bin - (self.n_doppler / 2) as f64) * self.velocity_bin_width
    }

    pub fn range_of(&self, range_bin: usize) -> f64 {
        range_bin as f64 * self.bin_width
    }

    /// Velocity span that folds onto itself, `λ/2 · PRF`.
    pub fn ambiguity_interval(&self) -> f64 {
        self.velocity_bin_width * self.n_doppler as f64
    }

    pub fn power(&self) -> Vec<f64> {
        self.bins.iter().map(|v| v.norm_sqr()).collect()
    }
}

/// Cached FFT plans and windows for one waveform.
pub struct SpectrumProcessor {
    range_fft: Arc<dyn Fft<f64>>,
    doppler_fft: Arc<dyn Fft<f64>>,
    pub range_window: Vec<f64>,
    pub doppler_window: Vec<f64>,
    pub bin_width: f64,
    pub velocity_bin_width: f64,
}

impl SpectrumProcessor {
    pub fn new(config: &RadarConfig) -> Self {
        let n = config.samples_per_chirp();
        let m = config.n_ramps_per_cycle;
        let mut planner = FftPlanner::new();
        Self {
            range_fft: planner.plan_fft_forward(n),
            doppler_fft: planner.plan_fft_forward(m),
            range_window: coherent_hann(n),
            doppler_window: coherent_hann(m),
            bin_width: config.range_bin_width(),
            velocity_bin_width: config.wavelength() / 2.0 * config.pulse_repetition_frequency
                / m as f64,
        }
    }

    pub fn range_bins(&self, samples: &[Complex32]) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = samples
            .iter()
            .zip(&self.range_window)
            .map(|(x, w)| Complex64::new(x.re as f64 * w, x.im as f64 * w))
            .collect();
        self.range_fft.process(&mut buf);
        buf
    }

    pub fn range_fft(&self, cube: &DataCube, chirp: usize, cycle: usize) -> Result<RangeSpectrum> {
        let samples = cube.chirp(chirp, cycle)?;
        Ok(RangeSpectrum {
            bins: self.range_bins(samples),
            bin_width: self.bin_width,
            chirp_timestamp: cube.chirp_timestamp(chirp, cycle),
        })
    }

    /// Range-Doppler map from the range spectra of one cycle's chirps.
    pub fn doppler(&self, range_spectra: &[Vec<Complex64>], cycle_timestamp: f64) -> RangeDopplerMap {
        let n_doppler = range_spectra.len();
        let n_range = range_spectra.first().map_or(0, Vec::len);
        let half = n_doppler / 2;
        let mut bins = vec![Complex64::new(0.0, 0.0); n_range * n_doppler];
        let mut col = vec![Complex64::new(0.0, 0.0); n_doppler];
        for r in 0..n_range {
            for (c, spec) in range_spectra.iter().enumerate() {
                col[c] = spec[r] * self.doppler_window[c];
            }
            self.doppler_fft.process(&mut col);
            let row = &mut bins[r * n_doppler..(r + 1) * n_doppler];
            for (k, v) in col.iter().enumerate() {
                row[(k + half) % n_doppler] = *v;
            }
        }
        RangeDopplerMap {
            bins,
            n_range,
            n_doppler,
            bin_width: self.bin_width,
            velocity_bin_width: self.velocity_bin_width,
            cycle_timestamp,
        }
    }

    pub fn range_doppler(&self, cube: &DataCube, cycle: usize) -> Result<RangeDopplerMap> {
        let spectra = self.cycle_range_spectra(cube, cycle)?;
        Ok(self.doppler(&spectra, cube.chirp_timestamp(0, cycle)))
    }

    pub fn cycle_range_spectra(&self, cube: &DataCube, cycle: usize) -> Result<Vec<Vec<Complex64>>> {
        if cycle >= cube.n_cycles() {
            return Err(Error::Index {
                what: "cycle",
                index: cycle,
                len: cube.n_cycles(),
            });
        }
        (0..cube.n_chirps())
            .map(|c| cube.chirp(c, cycle).map(|s| self.range_bins(s)))
            .collect()
    }
}

/// Hann-windowed range FFT of one chirp, no zero padding.
pub fn range_fft(cube: &DataCube, chirp: usize, cycle: usize) -> Result<RangeSpectrum> {
    SpectrumProcessor::new(&cube.config).range_fft(cube, chirp, cycle)
}

/// Range FFT per chirp followed by a Hann-windowed FFT across chirps.
pub fn range_doppler(cube: &DataCube, cycle: usize) -> Result<RangeDopplerMap> {
    SpectrumProcessor::new(&cube.config).range_doppler(cube, cycle)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::GroundCoefficient;
    use crate::scenario::{sor, sord};
    use crate::synth::{synthesize_cube, Scatterer, Scene};

    fn tone(n: usize, bin: f64, amp: f64) -> Vec<Complex32> {
        (0..n)
            .map(|i| {
                let p = 2.0 * PI * bin * i as f64 / n as f64;
                Complex32::new((amp * p.cos()) as f32, (amp * p.sin()) as f32)
            })
            .collect()
    }

    fn scene(scatterers: Vec<Scatterer>, n_cycles: usize) -> Scene {
        Scene {
            scatterers,
            noise_power: 0.0,
            n_cycles,
            seed: 0,
        }
    }

    fn free(d: f64, v: f64) -> Scatterer {
        Scatterer {
            initial_ground_distance: d,
            radial_velocity: v,
            height: 1.0,
            rcs: 1.0,
            reflection_coefficient: GroundCoefficient::absorbing(),
        }
    }

    #[test]
    fn bin_centred_tone_keeps_amplitude() {
        let p = SpectrumProcessor::new(&sor());
        let x = tone(256, 37.0, 0.75);
        let bins = p.range_bins(&x);
        let (k, peak) = bins
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
            .unwrap();
        assert_eq!(k, 37);
        assert!((20.0 * (peak.norm() / 0.75).log10()).abs() < 0.1);
    }

    #[test]
    fn zero_input_zero_spectrum() {
        let p = SpectrumProcessor::new(&sor());
        let bins = p.range_bins(&vec![Complex32::new(0.0, 0.0); 256]);
        assert!(bins.iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn parseval_holds_for_windowed_signal() {
        let p = SpectrumProcessor::new(&sor());
        let x: Vec<Complex32> = (0..256)
            .map(|i| Complex32::new((i as f32 * 0.37).sin(), (i as f32 * 1.3).cos()))
            .collect();
        let bins = p.range_bins(&x);
        let time: f64 = x
            .iter()
            .zip(&p.range_window)
            .map(|(v, w)| (v.re as f64 * w).powi(2) + (v.im as f64 * w).powi(2))
            .sum();
        let freq: f64 = bins.iter().map(|v| v.norm_sqr()).sum::<f64>() / 256.0;
        assert!((time - freq).abs() / time < 1e-6);
    }

    #[test]
    fn tone_at_matches_fft_on_bins() {
        let p = SpectrumProcessor::new(&sor());
        let x = tone(256, 12.3, 1.0);
        let bins = p.range_bins(&x);
        for k in [10usize, 12, 13, 40] {
            let v = tone_at(&x, &p.range_window, k as f64);
            assert!((v - bins[k]).norm() < 1e-9);
        }
    }

    #[test]
    fn free_space_target_lands_in_expected_bin() {
        let cfg = sor();
        let cube = synthesize_cube(&cfg, &scene(vec![free(50.0, 0.0)], 1)).unwrap();
        let spec = range_fft(&cube, 0, 0).unwrap();
        let peak = spec
            .power()
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap()
            .0;
        // Slant range of the direct path, sensor 2.63 m, target 1 m.
        let slant = 50f64.hypot(1.63);
        assert_eq!(peak, (slant / cfg.range_bin_width()).round() as usize);
        assert!(range_fft(&cube, 0, 1).is_err());
        assert!(range_fft(&cube, 600, 0).is_err());
    }

    #[test]
    fn static_target_sits_at_zero_doppler() {
        let cube = synthesize_cube(&sord(), &scene(vec![free(60.0, 0.0)], 1)).unwrap();
        let rd = range_doppler(&cube, 0).unwrap();
        let (mut best, mut at) = (0.0, (0, 0));
        for r in 0..rd.n_range {
            for d in 0..rd.n_doppler {
                let p = rd.get(r, d).norm_sqr();
                if p > best {
                    best = p;
                    at = (r, d);
                }
            }
        }
        assert_eq!(at.1, rd.n_doppler / 2);
        assert_eq!(rd.velocity_of(at.1 as f64), 0.0);
    }

    fn doppler_peak(rd: &RangeDopplerMap) -> (usize, usize) {
        let mut best = (0.0, (0, 0));
        for r in 0..rd.n_range {
            for d in 0..rd.n_doppler {
                let p = rd.get(r, d).norm_sqr();
                if p > best.0 {
                    best = (p, (r, d));
                }
            }
        }
        best.1
    }

    #[test]
    fn approaching_target_velocity_folds_into_one_bin() {
        let cube = synthesize_cube(&sord(), &scene(vec![free(80.0, -13.89)], 1)).unwrap();
        let rd = range_doppler(&cube, 0).unwrap();
        let (_, d) = doppler_peak(&rd);
        let v_amb = rd.ambiguity_interval();
        let folded = -13.89 - v_amb * (-13.89 / v_amb).round();
        assert!((rd.velocity_of(d as f64) - folded).abs() <= rd.velocity_bin_width);
        // Unfolded with a coarse range-rate hint the bin is within one of truth.
        let v = rd.velocity_of(d as f64);
        let unfolded = v + v_amb * ((-13.0 - v) / v_amb).round();
        assert!((unfolded + 13.89).abs() <= rd.velocity_bin_width);
    }

    #[test]
    fn two_velocities_at_one_range_are_resolved() {
        let cube = synthesize_cube(
            &sord(),
            &scene(vec![free(80.0, 0.0), free(80.0, -13.89)], 1),
        )
        .unwrap();
        let rd = range_doppler(&cube, 0).unwrap();
        let (r, _) = doppler_peak(&rd);
        let row: Vec<f64> = (0..rd.n_doppler).map(|d| rd.get(r, d).norm_sqr()).collect();
        let peaks: Vec<usize> = (1..rd.n_doppler - 1)
            .filter(|&d| row[d] > row[d - 1] && row[d] >= row[d + 1] && row[d] > 0.1 * row[32])
            .collect();
        assert_eq!(peaks.len(), 2, "{peaks:?}");
    }
}
