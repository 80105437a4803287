//! Closed-form ground-reflection physics.
//!
//! A stationary sensor at height `h_S` observes a point scatterer at height
//! `h_T` and horizontal (ground) distance `d` over a flat reflecting plane.
//! The two-way link has four paths: direct-direct, direct-indirect (twice,
//! once per ordering) and indirect-indirect, where the indirect path bounces
//! once off the ground.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Speed of light used throughout the crate, m/s.
pub const SPEED_OF_LIGHT: f64 = 2.998e8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Geometry {
    pub sensor_height: f64,
    pub scatterer_height: f64,
    pub ground_distance: f64,
}

impl Geometry {
    pub fn new(sensor_height: f64, scatterer_height: f64, ground_distance: f64) -> Result<Self> {
        let g = Self {
            sensor_height,
            scatterer_height,
            ground_distance,
        };
        g.validate()?;
        Ok(g)
    }

    /// A scatterer on the ground plane (`h_T = 0`) is accepted; the sensor
    /// height and ground distance must be strictly positive.
    pub fn validate(&self) -> Result<()> {
        let finite = self.sensor_height.is_finite()
            && self.scatterer_height.is_finite()
            && self.ground_distance.is_finite();
        if !finite {
            return Err(Error::Domain(format!("non-finite geometry {self:?}")));
        }
        if self.sensor_height <= 0.0 {
            return Err(Error::Domain(format!(
                "sensor height must be positive, got {}",
                self.sensor_height
            )));
        }
        if self.scatterer_height < 0.0 {
            return Err(Error::Domain(format!(
                "scatterer height must be non-negative, got {}",
                self.scatterer_height
            )));
        }
        if self.ground_distance <= 0.0 {
            return Err(Error::Domain(format!(
                "ground distance must be positive, got {}",
                self.ground_distance
            )));
        }
        Ok(())
    }
}

/// Complex ground-reflection coefficient `ρ·exp(jφ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroundCoefficient {
    pub magnitude: f64,
    pub phase: f64,
}

impl Default for GroundCoefficient {
    /// Perfectly reflecting ground with a sign flip, `-1`.
    fn default() -> Self {
        Self {
            magnitude: 1.0,
            phase: PI,
        }
    }
}

impl GroundCoefficient {
    pub fn new(magnitude: f64, phase: f64) -> Result<Self> {
        let gc = Self { magnitude, phase };
        gc.validate()?;
        Ok(gc)
    }

    /// No reflection at all: free-space propagation.
    pub fn absorbing() -> Self {
        Self {
            magnitude: 0.0,
            phase: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.magnitude) || !self.phase.is_finite() {
            return Err(Error::Domain(format!(
                "ground coefficient magnitude must lie in [0, 1], got {self:?}"
            )));
        }
        Ok(())
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::from_polar(self.magnitude, self.phase)
    }
}

/// Instantaneous chirp state at intra-chirp time `t_s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveformParams {
    pub start_frequency: f64,
    pub sweep_slope: f64,
    pub intra_chirp_time: f64,
    pub center_frequency: f64,
}

impl WaveformParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.sweep_slope >= 0.0) || !(self.start_frequency > 0.0) {
            return Err(Error::Domain(format!("invalid waveform {self:?}")));
        }
        let f = self.instantaneous_frequency();
        if (f - self.center_frequency).abs() > 0.01 * self.center_frequency {
            return Err(Error::Domain(format!(
                "instantaneous frequency {f} Hz deviates more than 1% from centre {} Hz",
                self.center_frequency
            )));
        }
        Ok(())
    }

    /// `f_s + α·t_s`.
    pub fn instantaneous_frequency(&self) -> f64 {
        self.start_frequency + self.sweep_slope * self.intra_chirp_time
    }
}

/// Direct and indirect one-way path lengths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathDistances {
    pub direct: f64,
    pub indirect: f64,
}

pub fn path_distances(g: &Geometry) -> Result<PathDistances> {
    g.validate()?;
    let d = g.ground_distance;
    Ok(PathDistances {
        direct: d.hypot(g.sensor_height - g.scatterer_height),
        indirect: d.hypot(g.sensor_height + g.scatterer_height),
    })
}

/// Far-field approximation of `d_i - d_d`, valid for `d ≫ h_S, h_T`.
pub fn path_difference_approx(g: &Geometry) -> Result<f64> {
    g.validate()?;
    Ok(2.0 * g.scatterer_height * g.sensor_height / g.ground_distance)
}

/// Complex four-ray propagation factor for a fast-chirp FMCW waveform.
///
/// The sweep-slope phase terms are retained, so this is the reference
/// against which the two-ray simplification is judged.
pub fn propagation_factor_four_ray_complex(
    g: &Geometry,
    w: &WaveformParams,
    gc: &GroundCoefficient,
) -> Result<Complex64> {
    w.validate()?;
    gc.validate()?;
    let PathDistances {
        direct: dd,
        indirect: di,
    } = path_distances(g)?;

    let c0 = SPEED_OF_LIGHT;
    let a = Complex64::from_polar(
        gc.magnitude,
        -2.0 * PI / c0 * (di - dd) * w.instantaneous_frequency() + gc.phase,
    );
    let slope_phase = PI * w.sweep_slope / (c0 * c0);

    // di/id pair enters twice; the ratio of the (2/(τc0))² amplitudes gives
    // 4d_d²/(d_i+d_d)².
    let mixed = 2.0 * 4.0 * dd * dd / ((di + dd) * (di + dd))
        * a
        * Complex64::from_polar(1.0, slope_phase * (di * di + 2.0 * di * dd - 3.0 * dd * dd));
    let double = dd * dd / (di * di)
        * a
        * a
        * Complex64::from_polar(1.0, slope_phase * 4.0 * (di * di - dd * dd));

    Ok(Complex64::new(1.0, 0.0) + mixed + double)
}

/// `|F_p|` of the four-ray model, in `[0, 4]` for `ρ ≤ 1`.
pub fn propagation_factor_four_ray(
    g: &Geometry,
    w: &WaveformParams,
    gc: &GroundCoefficient,
) -> Result<f64> {
    propagation_factor_four_ray_complex(g, w, gc).map(|f| f.norm())
}

/// Classical two-ray magnitude `4·sin²(π·f_c·(2·h_T·h_S/d)/c0)`.
pub fn propagation_factor_two_ray(g: &Geometry, center_frequency: f64) -> Result<f64> {
    let delta = path_difference_approx(g)?;
    let s = (PI / SPEED_OF_LIGHT * center_frequency * delta).sin();
    Ok(4.0 * s * s)
}

/// Two-ray spatial frequency of the received power pattern over reciprocal
/// distance `u = 1/d`, in meters (cycles per 1/m).
pub fn pattern_frequency(sensor_height: f64, scatterer_height: f64, center_frequency: f64) -> f64 {
    2.0 * center_frequency * scatterer_height * sensor_height / SPEED_OF_LIGHT
}

/// Monostatic radar equation with a propagation factor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadarEquation {
    pub transmit_power: f64,
    pub gain: f64,
    pub wavelength: f64,
    pub rcs: f64,
}

pub fn received_power(eq: &RadarEquation, range: f64, propagation_factor: f64) -> Result<f64> {
    let inputs = [
        eq.transmit_power,
        eq.gain,
        eq.wavelength,
        eq.rcs,
        propagation_factor,
    ];
    if inputs.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
        return Err(Error::Domain(format!(
            "radar equation inputs must be finite and non-negative: {eq:?}, F_p={propagation_factor}"
        )));
    }
    if !(range > 0.0) || !range.is_finite() {
        return Err(Error::Domain(format!("range must be positive, got {range}")));
    }
    let four_pi_cubed = (4.0 * PI).powi(3);
    Ok(eq.transmit_power * eq.gain * eq.gain * eq.wavelength * eq.wavelength * eq.rcs
        / (four_pi_cubed * range.powi(4))
        * propagation_factor
        * propagation_factor)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SOR_SLOPE: f64 = 342e6 / 61.4e-6;

    fn geom(hs: f64, ht: f64, d: f64) -> Geometry {
        Geometry::new(hs, ht, d).unwrap()
    }

    fn centered(f_c: f64, slope: f64) -> WaveformParams {
        WaveformParams {
            start_frequency: f_c,
            sweep_slope: slope,
            intra_chirp_time: 0.0,
            center_frequency: f_c,
        }
    }

    #[test]
    fn equal_heights_cancel_in_direct_path() {
        let p = path_distances(&geom(2.0, 2.0, 10.0)).unwrap();
        assert_eq!(p.direct, 10.0);
    }

    #[test]
    fn path_distances_match_high_precision_values() {
        // mpmath, 40 digits
        let p = path_distances(&geom(2.63, 1.0, 100.0)).unwrap();
        assert!((p.direct - 100.013_283_617_727_5).abs() < 1e-9);
        assert!((p.indirect - 100.065_862_810_451).abs() < 1e-9);
    }

    #[test]
    fn ground_level_scatterer_collapses_paths() {
        let p = path_distances(&geom(1.0, 0.0, 50.0)).unwrap();
        assert_eq!(p.direct, 2501f64.sqrt());
        assert_eq!(p.indirect, p.direct);
    }

    #[test]
    fn non_positive_geometry_is_rejected() {
        assert!(Geometry::new(0.0, 1.0, 10.0).is_err());
        assert!(Geometry::new(1.0, -0.1, 10.0).is_err());
        assert!(Geometry::new(1.0, 1.0, 0.0).is_err());
        let g = Geometry {
            sensor_height: 1.0,
            scatterer_height: 1.0,
            ground_distance: 0.0,
        };
        assert!(path_difference_approx(&g).is_err());
        assert!(propagation_factor_two_ray(&g, 76.5e9).is_err());
    }

    #[test]
    fn path_difference_approximation_error() {
        let exact = 0.052_579_192_723_497_13;
        let approx = path_difference_approx(&geom(2.63, 1.0, 100.0)).unwrap();
        assert!((approx - 0.0526).abs() < 1e-15);
        assert!(((approx - exact) / exact).abs() < 1e-3);

        assert_eq!(path_difference_approx(&geom(2.63, 0.0, 100.0)).unwrap(), 0.0);

        // Close in the approximation degrades to ~3.9 %.
        let exact = 0.506_489_093_583_620_5;
        let approx = path_difference_approx(&geom(2.63, 1.0, 10.0)).unwrap();
        let rel = (approx - exact) / exact;
        assert!((rel - 0.038_521_868_809_32).abs() < 1e-9, "{rel}");
    }

    #[test]
    fn no_ground_reflection_is_free_space() {
        for &(hs, ht, d) in &[(2.63, 1.0, 100.0), (1.0, 3.0, 40.0), (5.0, 0.3, 7.0)] {
            let f = propagation_factor_four_ray(
                &geom(hs, ht, d),
                &centered(76.5e9, SOR_SLOPE),
                &GroundCoefficient::absorbing(),
            )
            .unwrap();
            assert!((f - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn four_ray_close_to_two_ray_at_reference_point() {
        let g = geom(2.63, 1.0, 100.0);
        let four =
            propagation_factor_four_ray(&g, &centered(76.5e9, SOR_SLOPE), &Default::default())
                .unwrap();
        let two = propagation_factor_two_ray(&g, 76.5e9).unwrap();
        assert!(((four - two) / two).abs() < 0.02, "four={four} two={two}");
    }

    #[test]
    fn four_ray_swings_between_null_and_maximum() {
        let w = centered(76.5e9, SOR_SLOPE);
        let (mut lo, mut hi) = (f64::MAX, f64::MIN);
        let mut d = 40.0;
        while d <= 120.0 {
            let f = propagation_factor_four_ray(&geom(2.63, 1.0, d), &w, &Default::default())
                .unwrap();
            lo = lo.min(f);
            hi = hi.max(f);
            d += 1e-3;
        }
        assert!(lo < 0.1, "{lo}");
        assert!(hi > 3.8, "{hi}");
    }

    #[test]
    fn sweep_slope_terms_are_negligible() {
        // The slope-dependent exponentials only add a tiny phase.
        let gc = GroundCoefficient::default();
        for &d in &[40.0, 80.0, 160.0] {
            for &ht in &[0.5, 1.0, 3.45] {
                let g = geom(2.63, ht, d);
                let with = propagation_factor_four_ray(&g, &centered(76.5e9, 20e12), &gc).unwrap();
                let without = propagation_factor_four_ray(&g, &centered(76.5e9, 0.0), &gc).unwrap();
                assert!((with - without).abs() < 0.1);
            }
        }
    }

    #[test]
    fn two_ray_null_and_maximum() {
        assert_eq!(
            propagation_factor_two_ray(&geom(2.63, 0.0, 50.0), 76.5e9).unwrap(),
            0.0
        );
        // n = 20 null of 2·f_c·h_T·h_S/(n·c0), from mpmath.
        let d_null = 67.109_739_826_551_03;
        assert!(propagation_factor_two_ray(&geom(2.63, 1.0, d_null), 76.5e9).unwrap() < 1e-3);

        // Argument exactly π/2: 2·h_T·h_S/d = c0/(2 f_c).
        let f_c = SPEED_OF_LIGHT;
        let g = geom(1.0, 1.0, 4.0);
        let f = propagation_factor_two_ray(&g, f_c).unwrap();
        assert!((f - 4.0).abs() < 1e-12);
    }

    #[test]
    fn radar_equation_values() {
        let eq = RadarEquation {
            transmit_power: 1.0,
            gain: 1.0,
            wavelength: 0.00392,
            rcs: 1.0,
        };
        assert_eq!(received_power(&eq, 100.0, 0.0).unwrap(), 0.0);
        let p = received_power(&eq, 100.0, 2.0).unwrap();
        assert!((p - 3.097_437_366_964_479e-16).abs() < 1e-28);
        let far = received_power(&eq, 200.0, 2.0).unwrap();
        assert!((far * 16.0 / p - 1.0).abs() < 1e-12);
        assert!(received_power(&eq, 0.0, 1.0).is_err());
    }

    #[test]
    fn waveform_rejects_off_centre_chirp() {
        let w = WaveformParams {
            start_frequency: 70e9,
            sweep_slope: 1e12,
            intra_chirp_time: 0.0,
            center_frequency: 76.5e9,
        };
        assert!(w.validate().is_err());
    }
}
