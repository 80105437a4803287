//! Baseband data-cube synthesis for a chirp-sequence FMCW radar looking at
//! point scatterers over a reflecting ground plane.
//!
//! Every chirp is dechirped analytically: each of the three distinct
//! propagation paths (direct-direct, the doubled direct-indirect pair and
//! indirect-indirect) contributes one complex tone whose frequency is
//! `α·τ` and whose phase is `2π·f_s·τ − π·α·τ²`. Target motion is frozen
//! for the duration of a chirp.
//!
//! Amplitudes are expressed relative to a reference target: a unit-RCS
//! scatterer at [`REFERENCE_RANGE`] in free space has unit per-sample
//! amplitude. `Scene::noise_power` is the complex noise variance in the same
//! units, so `-10·log10(noise_power)` is the per-sample reference SNR.

use std::f64::consts::PI;

use num_complex::{Complex32, Complex64};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::dsp::{AmplitudeSeries, Strategy};
use crate::error::{Error, Result};
use crate::model::{
    path_distances, propagation_factor_four_ray_complex, Geometry, GroundCoefficient,
    PathDistances, WaveformParams, SPEED_OF_LIGHT,
};

/// Range at which a unit-RCS free-space scatterer has unit amplitude.
pub const REFERENCE_RANGE: f64 = 100.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadarConfig {
    pub center_frequency: f64,
    pub adc_sample_rate: f64,
    pub bandwidth: f64,
    pub chirp_duration: f64,
    pub pulse_repetition_frequency: f64,
    pub n_ramps_per_cycle: usize,
    pub measurement_cycle_rate: f64,
    pub sensor_height: f64,
    pub max_range: f64,
}

impl RadarConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("center_frequency", self.center_frequency),
            ("adc_sample_rate", self.adc_sample_rate),
            ("bandwidth", self.bandwidth),
            ("chirp_duration", self.chirp_duration),
            ("pulse_repetition_frequency", self.pulse_repetition_frequency),
            ("measurement_cycle_rate", self.measurement_cycle_rate),
            ("sensor_height", self.sensor_height),
            ("max_range", self.max_range),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Scenario(format!("{name} must be positive, got {v}")));
            }
        }
        let slope = self.sweep_slope();
        if !(slope > 0.0) || !slope.is_finite() {
            return Err(Error::Scenario(format!("sweep slope {slope} is not positive")));
        }
        if self.chirp_duration > 1.0 / self.pulse_repetition_frequency {
            return Err(Error::Scenario(format!(
                "chirp duration {} s exceeds the chirp period {} s",
                self.chirp_duration,
                1.0 / self.pulse_repetition_frequency
            )));
        }
        if self.n_ramps_per_cycle == 0 {
            return Err(Error::Scenario("n_ramps_per_cycle must be at least 1".into()));
        }
        let burst = self.n_ramps_per_cycle as f64 / self.pulse_repetition_frequency;
        if burst > 1.0 / self.measurement_cycle_rate {
            return Err(Error::Scenario(format!(
                "{} ramps at {} Hz ({burst} s) do not fit in the cycle period {} s",
                self.n_ramps_per_cycle,
                self.pulse_repetition_frequency,
                1.0 / self.measurement_cycle_rate
            )));
        }
        if self.samples_per_chirp() < 2 {
            return Err(Error::Scenario(format!(
                "only {} ADC samples per chirp",
                self.samples_per_chirp()
            )));
        }
        if self.max_range > self.unambiguous_range() * (1.0 + 1e-9) {
            return Err(Error::Scenario(format!(
                "max_range {} m exceeds the sampled beat bandwidth ({} m)",
                self.max_range,
                self.unambiguous_range()
            )));
        }
        Ok(())
    }

    /// `α = B / T_chirp`, Hz/s.
    pub fn sweep_slope(&self) -> f64 {
        self.bandwidth / self.chirp_duration
    }

    /// The ramp is centred on `center_frequency`.
    pub fn start_frequency(&self) -> f64 {
        self.center_frequency - 0.5 * self.bandwidth
    }

    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.center_frequency
    }

    pub fn samples_per_chirp(&self) -> usize {
        // Guard against 1024.0 being represented as 1023.999…
        (self.adc_sample_rate * self.chirp_duration + 1e-9).floor() as usize
    }

    /// Range spanned by one bin of an unpadded range FFT.
    pub fn range_bin_width(&self) -> f64 {
        self.adc_sample_rate * SPEED_OF_LIGHT
            / (2.0 * self.sweep_slope() * self.samples_per_chirp() as f64)
    }

    /// Largest range whose beat frequency is below the ADC rate.
    pub fn unambiguous_range(&self) -> f64 {
        self.adc_sample_rate * SPEED_OF_LIGHT / (2.0 * self.sweep_slope())
    }

    pub fn cycle_period(&self) -> f64 {
        1.0 / self.measurement_cycle_rate
    }

    pub fn chirp_period(&self) -> f64 {
        1.0 / self.pulse_repetition_frequency
    }

    /// Waveform state at intra-chirp time `t_s`.
    pub fn waveform_at(&self, intra_chirp_time: f64) -> WaveformParams {
        WaveformParams {
            start_frequency: self.start_frequency(),
            sweep_slope: self.sweep_slope(),
            intra_chirp_time,
            center_frequency: self.center_frequency,
        }
    }

    /// Absolute start time of every chirp, cycle-major.
    pub fn chirp_timestamps(&self, n_cycles: usize) -> Vec<f64> {
        let mut out = Vec::with_capacity(n_cycles * self.n_ramps_per_cycle);
        for cycle in 0..n_cycles {
            let t0 = cycle as f64 * self.cycle_period();
            for chirp in 0..self.n_ramps_per_cycle {
                out.push(t0 + chirp as f64 * self.chirp_period());
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scatterer {
    pub initial_ground_distance: f64,
    /// Rate of change of the ground distance; negative when approaching.
    pub radial_velocity: f64,
    pub height: f64,
    pub rcs: f64,
    #[serde(default)]
    pub reflection_coefficient: GroundCoefficient,
}

impl Scatterer {
    pub fn validate(&self) -> Result<()> {
        if !(self.height >= 0.0) || !self.height.is_finite() {
            return Err(Error::Scenario(format!("scatterer height {} < 0", self.height)));
        }
        if !(self.rcs > 0.0) || !self.rcs.is_finite() {
            return Err(Error::Scenario(format!("scatterer rcs {} must be > 0", self.rcs)));
        }
        if !self.initial_ground_distance.is_finite() || !self.radial_velocity.is_finite() {
            return Err(Error::Scenario("non-finite scatterer trajectory".into()));
        }
        self.reflection_coefficient
            .validate()
            .map_err(|e| Error::Scenario(e.to_string()))
    }

    pub fn ground_distance_at(&self, t: f64) -> f64 {
        self.initial_ground_distance + self.radial_velocity * t
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scene {
    pub scatterers: Vec<Scatterer>,
    /// Complex noise variance relative to the reference target power.
    #[serde(default)]
    pub noise_power: f64,
    pub n_cycles: usize,
    #[serde(default)]
    pub seed: u64,
}

impl Scene {
    pub fn validate(&self) -> Result<()> {
        if self.scatterers.is_empty() {
            return Err(Error::Scenario("scene has no scatterers".into()));
        }
        if self.n_cycles == 0 {
            return Err(Error::Scenario("n_cycles must be at least 1".into()));
        }
        if !(self.noise_power >= 0.0) || !self.noise_power.is_finite() {
            return Err(Error::Scenario(format!(
                "noise_power {} must be >= 0",
                self.noise_power
            )));
        }
        self.scatterers.iter().try_for_each(Scatterer::validate)
    }

    /// Noise power for a per-sample reference SNR in dB.
    pub fn noise_power_for_snr_db(snr_db: f64) -> f64 {
        10f64.powf(-snr_db / 10.0)
    }
}

/// Complex baseband samples `[sample × chirp × cycle]`.
///
/// Stored with the sample index fastest so each chirp is contiguous.
#[derive(Debug, Clone, PartialEq)]
pub struct DataCube {
    samples: Vec<Complex32>,
    n_samples: usize,
    n_chirps: usize,
    n_cycles: usize,
    pub config: RadarConfig,
    pub chirp_timestamps: Vec<f64>,
}

impl DataCube {
    pub fn zeros(config: RadarConfig, n_cycles: usize) -> Self {
        let n_samples = config.samples_per_chirp();
        let n_chirps = config.n_ramps_per_cycle;
        Self {
            samples: vec![Complex32::new(0.0, 0.0); n_samples * n_chirps * n_cycles],
            n_samples,
            n_chirps,
            n_cycles,
            chirp_timestamps: config.chirp_timestamps(n_cycles),
            config,
        }
    }

    pub fn n_samples(&self) -> usize {
        self.n_samples
    }

    pub fn n_chirps(&self) -> usize {
        self.n_chirps
    }

    pub fn n_cycles(&self) -> usize {
        self.n_cycles
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.n_samples, self.n_chirps, self.n_cycles)
    }

    pub fn get(&self, sample: usize, chirp: usize, cycle: usize) -> Complex32 {
        self.samples[self.offset(chirp, cycle) + sample]
    }

    pub fn set(&mut self, sample: usize, chirp: usize, cycle: usize, v: Complex32) {
        let o = self.offset(chirp, cycle);
        self.samples[o + sample] = v;
    }

    pub fn chirp(&self, chirp: usize, cycle: usize) -> Result<&[Complex32]> {
        self.check(chirp, cycle)?;
        let o = self.offset(chirp, cycle);
        Ok(&self.samples[o..o + self.n_samples])
    }

    pub fn chirp_mut(&mut self, chirp: usize, cycle: usize) -> Result<&mut [Complex32]> {
        self.check(chirp, cycle)?;
        let o = self.offset(chirp, cycle);
        Ok(&mut self.samples[o..o + self.n_samples])
    }

    pub fn chirp_timestamp(&self, chirp: usize, cycle: usize) -> f64 {
        self.chirp_timestamps[cycle * self.n_chirps + chirp]
    }

    pub fn as_slice(&self) -> &[Complex32] {
        &self.samples
    }

    fn offset(&self, chirp: usize, cycle: usize) -> usize {
        (cycle * self.n_chirps + chirp) * self.n_samples
    }

    fn check(&self, chirp: usize, cycle: usize) -> Result<()> {
        if chirp >= self.n_chirps {
            return Err(Error::Index {
                what: "chirp",
                index: chirp,
                len: self.n_chirps,
            });
        }
        if cycle >= self.n_cycles {
            return Err(Error::Index {
                what: "cycle",
                index: cycle,
                len: self.n_cycles,
            });
        }
        Ok(())
    }
}

/// One dechirped path contribution: `amplitude · step^n`.
#[derive(Debug, Clone, Copy)]
struct Tone {
    amplitude: Complex64,
    step: Complex64,
}

fn path_tones(
    config: &RadarConfig,
    geometry: &Geometry,
    gc: &GroundCoefficient,
    rcs: f64,
) -> Result<[Tone; 3]> {
    let PathDistances {
        direct: dd,
        indirect: di,
    } = path_distances(geometry)?;
    if dd > config.max_range {
        return Err(Error::Scenario(format!(
            "scatterer at {dd:.3} m is beyond max_range {} m",
            config.max_range
        )));
    }
    if !(rcs >= 0.0) {
        return Err(Error::Scenario(format!("rcs {rcs} must be >= 0")));
    }
    // Mixing tx·conj(rx) conjugates the reflection coefficient.
    let gamma = gc.to_complex().conj();
    let scale = rcs.sqrt() * REFERENCE_RANGE * REFERENCE_RANGE;
    let f_s = config.start_frequency();
    let alpha = config.sweep_slope();
    let dt = 1.0 / config.adc_sample_rate;

    let tone = |there: f64, back: f64, weight: Complex64| {
        let tau = (there + back) / SPEED_OF_LIGHT;
        let spread = 2.0 / (there + back);
        let phase = 2.0 * PI * f_s * tau - PI * alpha * tau * tau;
        Tone {
            amplitude: weight * scale * spread * spread * Complex64::from_polar(1.0, phase),
            step: Complex64::from_polar(1.0, 2.0 * PI * alpha * tau * dt),
        }
    };
    Ok([
        tone(dd, dd, Complex64::new(1.0, 0.0)),
        tone(dd, di, 2.0 * gamma),
        tone(di, di, gamma * gamma),
    ])
}

fn accumulate(tones: &[Tone], out: &mut [Complex64]) {
    for t in tones {
        let mut phasor = t.amplitude;
        for v in out.iter_mut() {
            *v += phasor;
            phasor *= t.step;
        }
    }
}

/// Dechirped beat signal of one scatterer for one chirp (stop-and-hop).
pub fn beat_signal(
    config: &RadarConfig,
    geometry: &Geometry,
    gc: &GroundCoefficient,
    rcs: f64,
) -> Result<Vec<Complex64>> {
    let tones = path_tones(config, geometry, gc, rcs)?;
    let mut out = vec![Complex64::new(0.0, 0.0); config.samples_per_chirp()];
    accumulate(&tones, &mut out);
    Ok(out)
}

/// Synthesizes the full data cube for `scene`.
///
/// Noise for cycle `k` is drawn from ChaCha8 stream `k` of the scene seed, so
/// cycles can be generated in any order with identical results.
pub fn synthesize_cube(config: &RadarConfig, scene: &Scene) -> Result<DataCube> {
    config.validate()?;
    scene.validate()?;
    let mut cube = DataCube::zeros(config.clone(), scene.n_cycles);
    let mut acc = vec![Complex64::new(0.0, 0.0); cube.n_samples()];
    let mut tones = Vec::with_capacity(3 * scene.scatterers.len());

    for cycle in 0..scene.n_cycles {
        let mut rng = noise_rng(scene.seed, cycle);
        for chirp in 0..cube.n_chirps() {
            let t = cube.chirp_timestamp(chirp, cycle);
            tones.clear();
            for s in &scene.scatterers {
                let d = s.ground_distance_at(t);
                if !(d > 0.0) {
                    return Err(Error::Scenario(format!(
                        "scatterer reaches ground distance {d:.3} m at t = {t:.4} s"
                    )));
                }
                let g = Geometry::new(config.sensor_height, s.height, d)?;
                tones.extend(path_tones(config, &g, &s.reflection_coefficient, s.rcs)?);
            }
            acc.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
            accumulate(&tones, &mut acc);
            if scene.noise_power > 0.0 {
                add_noise(&mut acc, scene.noise_power, &mut rng);
            }
            let dst = cube.chirp_mut(chirp, cycle)?;
            for (d, s) in dst.iter_mut().zip(&acc) {
                *d = Complex32::new(s.re as f32, s.im as f32);
            }
        }
    }
    Ok(cube)
}

fn noise_rng(seed: u64, cycle: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(cycle as u64);
    rng
}

fn add_noise(buf: &mut [Complex64], noise_power: f64, rng: &mut ChaCha8Rng) {
    let sigma = (0.5 * noise_power).sqrt();
    for v in buf {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        *v += Complex64::new(sigma * re, sigma * im);
    }
}

/// Noise-free power pattern the pipeline would measure, evaluated directly
/// from the four-ray model at the sampling instants of `strategy`.
///
/// Chirps (SoR) or cycles (SoRD) are sampled at their start time at the
/// centre frequency. Co-located scatterers add coherently. Useful as a fast
/// stand-in for the full cube when only the height spectrum matters.
pub fn model_series(
    config: &RadarConfig,
    scatterers: &[Scatterer],
    n_cycles: usize,
    strategy: Strategy,
) -> Result<AmplitudeSeries> {
    config.validate()?;
    if scatterers.is_empty() {
        return Err(Error::Scenario("no scatterers".into()));
    }
    let mid = 0.5 * config.chirp_duration;
    let w = config.waveform_at(mid);
    let timestamps = config.chirp_timestamps(n_cycles);
    let times: Vec<f64> = match strategy {
        Strategy::SoR => timestamps,
        Strategy::SoRD => timestamps
            .chunks(config.n_ramps_per_cycle)
            .map(|c| c[0])
            .collect(),
    };
    let reference = &scatterers[0];
    let mut points = Vec::with_capacity(times.len());
    for t in times {
        let mut field = Complex64::new(0.0, 0.0);
        for s in scatterers {
            let g = Geometry::new(config.sensor_height, s.height, s.ground_distance_at(t))?;
            let dd = path_distances(&g)?.direct;
            let f = propagation_factor_four_ray_complex(&g, &w, &s.reflection_coefficient)?;
            let carrier = Complex64::from_polar(
                1.0,
                -2.0 * PI * w.instantaneous_frequency() * 2.0 * dd / SPEED_OF_LIGHT,
            );
            let amp = s.rcs.sqrt() * (REFERENCE_RANGE / dd).powi(2);
            field += amp * f * carrier;
        }
        points.push((reference.ground_distance_at(t), field.norm_sqr()));
    }
    AmplitudeSeries::new(points, strategy, config.range_bin_width())
}
