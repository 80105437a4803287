//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Each export is a thin wrapper around a plain Rust function so that the
//! numerics can be tested natively; only the wrappers touch `JsError`.

use wasm_bindgen::prelude::*;

use groundref::classify::power_above_height;
use groundref::dsp::Strategy;
use groundref::heightspec::{estimate_height_psd, HeightSpectrum};
use groundref::model::{
    propagation_factor_four_ray, propagation_factor_two_ray, Geometry, GroundCoefficient,
};
use groundref::scenario::{default_window, preset};
use groundref::synth::{model_series, Scatterer};

/// Four-ray and two-ray propagation factors over a distance sweep.
#[wasm_bindgen]
pub struct PropagationCurve {
    distances: Vec<f64>,
    four_ray: Vec<f64>,
    two_ray: Vec<f64>,
}

#[wasm_bindgen]
impl PropagationCurve {
    #[wasm_bindgen(getter)]
    pub fn distances(&self) -> Vec<f64> {
        self.distances.clone()
    }

    #[wasm_bindgen(getter, js_name = fourRay)]
    pub fn four_ray(&self) -> Vec<f64> {
        self.four_ray.clone()
    }

    #[wasm_bindgen(getter, js_name = twoRay)]
    pub fn two_ray(&self) -> Vec<f64> {
        self.two_ray.clone()
    }

    /// Largest |four-ray − two-ray| over the sweep.
    #[wasm_bindgen(getter, js_name = maxDifference)]
    pub fn max_difference(&self) -> f64 {
        self.four_ray
            .iter()
            .zip(&self.two_ray)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

pub fn compute_propagation(
    preset_name: &str,
    scatterer_height: f64,
    reflection: f64,
    d_min: f64,
    d_max: f64,
    n: usize,
) -> groundref::Result<PropagationCurve> {
    let cfg = preset(preset_name)?;
    let gc = GroundCoefficient::new(reflection, GroundCoefficient::default().phase)?;
    let w = cfg.waveform_at(0.5 * cfg.chirp_duration);
    let n = n.max(2);
    let mut curve = PropagationCurve {
        distances: Vec::with_capacity(n),
        four_ray: Vec::with_capacity(n),
        two_ray: Vec::with_capacity(n),
    };
    for i in 0..n {
        let d = d_min + (d_max - d_min) * i as f64 / (n - 1) as f64;
        let g = Geometry::new(cfg.sensor_height, scatterer_height, d)?;
        curve.distances.push(d);
        curve.four_ray.push(propagation_factor_four_ray(&g, &w, &gc)?);
        curve.two_ray.push(propagation_factor_two_ray(&g, cfg.center_frequency)?);
    }
    Ok(curve)
}

/// Propagation factor of a scatterer at `scatterer_height` for the radar
/// preset (`"sor"` or `"sord"`), sampled at `n` distances.
#[wasm_bindgen(js_name = propagationCurve)]
pub fn propagation_curve(
    preset_name: &str,
    scatterer_height: f64,
    reflection: f64,
    d_min: f64,
    d_max: f64,
    n: usize,
) -> Result<PropagationCurve, JsError> {
    compute_propagation(preset_name, scatterer_height, reflection, d_min, d_max, n).map_err(js)
}

/// Height spectrum of one noise-free passage.
#[wasm_bindgen]
pub struct HeightPlot {
    spectrum: HeightSpectrum,
    n_points: usize,
}

#[wasm_bindgen]
impl HeightPlot {
    #[wasm_bindgen(getter)]
    pub fn heights(&self) -> Vec<f64> {
        self.spectrum.heights.clone()
    }

    /// PSD scaled to unit total power.
    #[wasm_bindgen(getter)]
    pub fn psd(&self) -> Vec<f64> {
        self.spectrum.normalized_psd()
    }

    #[wasm_bindgen(getter, js_name = peakHeight)]
    pub fn peak_height(&self) -> f64 {
        self.spectrum.peak_height()
    }

    #[wasm_bindgen(getter, js_name = nPoints)]
    pub fn n_points(&self) -> usize {
        self.n_points
    }

    /// Share of spectral power strictly above `threshold` metres.
    #[wasm_bindgen(js_name = ratioAbove)]
    pub fn ratio_above(&self, threshold: f64) -> Result<f64, JsError> {
        self.feature(threshold).map_err(js)
    }
}

impl HeightPlot {
    pub fn feature(&self, threshold: f64) -> groundref::Result<f64> {
        power_above_height(&self.spectrum, threshold).map(|f| f.ratio_above)
    }
}

pub fn compute_height_plot(
    preset_name: &str,
    heights: &[f64],
    toward: bool,
    max_height: f64,
) -> groundref::Result<HeightPlot> {
    let cfg = preset(preset_name)?;
    let strategy = if preset_name.eq_ignore_ascii_case("sor") {
        Strategy::SoR
    } else {
        Strategy::SoRD
    };
    let (lo, hi) = default_window(strategy);
    let hi = hi.min(cfg.max_range - 1.0);
    let speed = 50.0 / 3.6;
    // Start a little outside the window so the cropped series fills it.
    let (start, velocity) = if toward {
        (hi + 1.0, -speed)
    } else {
        (lo - 1.0, speed)
    };
    let n_cycles = ((hi - lo + 2.0) / speed * cfg.measurement_cycle_rate).ceil() as usize;
    let scatterers: Vec<Scatterer> = heights
        .iter()
        .map(|&h| Scatterer {
            initial_ground_distance: start,
            radial_velocity: velocity,
            height: h,
            rcs: 1.0,
            reflection_coefficient: GroundCoefficient::default(),
        })
        .collect();
    let series = model_series(&cfg, &scatterers, n_cycles, strategy)?.crop(lo, hi);
    let spectrum = estimate_height_psd(
        &series,
        cfg.sensor_height,
        cfg.center_frequency,
        max_height,
        groundref::heightspec::DEFAULT_OVERSAMPLE,
    )?;
    Ok(HeightPlot {
        n_points: series.len(),
        spectrum,
    })
}

/// Height spectrum of a vehicle with reflection points at `heights`
/// passing the radar at 50 km/h.
#[wasm_bindgen(js_name = heightPlot)]
pub fn height_plot(
    preset_name: &str,
    heights: Vec<f64>,
    toward: bool,
    max_height: f64,
) -> Result<HeightPlot, JsError> {
    compute_height_plot(preset_name, &heights, toward, max_height).map_err(js)
}

fn js(e: groundref::Error) -> JsError {
    JsError::new(&e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn propagation_curve_shapes() {
        let c = compute_propagation("sord", 1.0, 1.0, 40.0, 200.0, 161).unwrap();
        assert_eq!(c.distances.len(), 161);
        assert_eq!(c.distances[0], 40.0);
        assert_eq!(c.distances[160], 200.0);
        assert!(c.four_ray.iter().chain(&c.two_ray).all(|f| (0.0..=4.0 + 1e-12).contains(f)));
        // Without a ground reflection both factors collapse to free space.
        let free = compute_propagation("sord", 1.0, 0.0, 40.0, 200.0, 11).unwrap();
        assert!(free.four_ray.iter().all(|f| (f - 1.0).abs() < 1e-12));
    }

    #[test]
    fn height_plot_peaks_at_the_scatterer() {
        for p in ["sor", "sord"] {
            let plot = compute_height_plot(p, &[1.5], true, 10.0).unwrap();
            assert!((plot.peak_height() - 1.5).abs() < 0.2, "{p}: {}", plot.peak_height());
            let total: f64 = plot.psd().iter().sum();
            assert!((total - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn tall_vehicle_has_more_power_up_high() {
        let car = compute_height_plot("sor", &[0.65], true, 10.0).unwrap();
        let truck = compute_height_plot("sor", &[1.5, 3.45], true, 10.0).unwrap();
        assert!(truck.feature(2.0).unwrap() > car.feature(2.0).unwrap());
    }

    #[test]
    fn bad_inputs_are_errors() {
        assert!(compute_propagation("fmcw", 1.0, 1.0, 40.0, 200.0, 10).is_err());
        assert!(compute_height_plot("sord", &[], true, 10.0).is_err());
        let plot = compute_height_plot("sord", &[1.0], true, 10.0).unwrap();
        assert!(plot.feature(50.0).is_err());
    }
}
