//! Built-in radar presets and the JSON scenario file format.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dsp::Strategy;
use crate::error::{Error, Result};
use crate::synth::{RadarConfig, Scene};

pub const PRESET_NAMES: [&str; 2] = ["sor", "sord"];

/// Waveform tuned for sampling over range spectra (one sample per chirp).
pub fn sor() -> RadarConfig {
    RadarConfig {
        center_frequency: 76.5e9,
        adc_sample_rate: 4.17e6,
        bandwidth: 342e6,
        chirp_duration: 61.4e-6,
        pulse_repetition_frequency: 7.23e3,
        n_ramps_per_cycle: 512,
        measurement_cycle_rate: 9.0,
        sensor_height: 2.63,
        max_range: 56.0,
    }
}

/// Waveform tuned for sampling over range-Doppler spectra (one sample per
/// measurement cycle).
pub fn sord() -> RadarConfig {
    RadarConfig {
        center_frequency: 76.5e9,
        adc_sample_rate: 4.17e6,
        bandwidth: 444.4e6,
        chirp_duration: 245.8e-6,
        pulse_repetition_frequency: 3.39e3,
        n_ramps_per_cycle: 64,
        measurement_cycle_rate: 18.0,
        sensor_height: 1.0,
        max_range: 172.7,
    }
}

pub fn preset(name: &str) -> Result<RadarConfig> {
    match name.to_ascii_lowercase().as_str() {
        "sor" => Ok(sor()),
        "sord" => Ok(sord()),
        other => Err(Error::Scenario(format!(
            "unknown preset '{other}', expected one of {PRESET_NAMES:?}"
        ))),
    }
}

/// Default analysis window (min, max ground distance) for a strategy.
pub fn default_window(strategy: Strategy) -> (f64, f64) {
    match strategy {
        Strategy::SoR => (30.0, f64::INFINITY),
        Strategy::SoRD => (40.0, 120.0),
    }
}

/// On-disk scenario.
///
/// `config` overrides `preset`; either may be replaced on the command line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub preset: Option<String>,
    #[serde(default)]
    pub config: Option<RadarConfig>,
    #[serde(default)]
    pub strategy: Option<Strategy>,
    #[serde(default)]
    pub analysis_window: Option<(f64, f64)>,
    pub scene: Scene,
}

/// A scenario with every choice made.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub config: RadarConfig,
    pub scene: Scene,
    pub strategy: Strategy,
    pub analysis_window: (f64, f64),
}

impl ScenarioFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Scenario(format!("invalid scenario: {e}")))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Scenario(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Resolves the radar config and strategy.
    ///
    /// A preset given here replaces whatever the file specifies. Without
    /// an explicit strategy the preset name decides (`sor` → SoR, otherwise
    /// SoRD).
    pub fn resolve(
        &self,
        preset_override: Option<&str>,
        strategy_override: Option<Strategy>,
    ) -> Result<Scenario> {
        let (config, preset_name) = match (preset_override, &self.config, &self.preset) {
            (Some(p), _, _) => (preset(p)?, Some(p.to_string())),
            (None, Some(c), p) => (c.clone(), p.clone()),
            (None, None, Some(p)) => (preset(p)?, Some(p.clone())),
            (None, None, None) => {
                return Err(Error::Scenario(
                    "scenario names neither a preset nor a radar config".into(),
                ))
            }
        };
        let strategy = strategy_override.or(self.strategy).unwrap_or(
            match preset_name.as_deref().map(str::to_ascii_lowercase).as_deref() {
                Some("sor") => Strategy::SoR,
                _ => Strategy::SoRD,
            },
        );
        config.validate()?;
        self.scene.validate()?;
        let analysis_window = self.analysis_window.unwrap_or(default_window(strategy));
        if !(analysis_window.0 < analysis_window.1) {
            return Err(Error::Scenario(format!(
                "empty analysis window {analysis_window:?}"
            )));
        }
        Ok(Scenario {
            name: self.name.clone().unwrap_or_else(|| "scenario".into()),
            config,
            scene: self.scene.clone(),
            strategy,
            analysis_window,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CAR: &str = r#"{
        "name": "car",
        "preset": "sord",
        "scene": {
            "scatterers": [{
                "initial_ground_distance": 125.0,
                "radial_velocity": -13.89,
                "height": 0.65,
                "rcs": 1.0
            }],
            "noise_power": 0.01,
            "n_cycles": 10,
            "seed": 1
        }
    }"#;

    #[test]
    fn parses_and_resolves() {
        let f = ScenarioFile::from_json(CAR).unwrap();
        let s = f.resolve(None, None).unwrap();
        assert_eq!(s.config, sord());
        assert_eq!(s.strategy, Strategy::SoRD);
        assert_eq!(s.analysis_window, (40.0, 120.0));
        let rc = s.scene.scatterers[0].reflection_coefficient;
        assert_eq!(rc.magnitude, 1.0);

        let s = f.resolve(Some("sor"), None).unwrap();
        assert_eq!(s.config, sor());
        assert_eq!(s.strategy, Strategy::SoR);
    }

    #[test]
    fn rejects_unknown_keys_and_missing_config() {
        assert!(ScenarioFile::from_json(r#"{"scene": {}, "bogus": 1}"#).is_err());
        let mut f = ScenarioFile::from_json(CAR).unwrap();
        f.preset = None;
        assert!(f.resolve(None, None).is_err());
        assert!(preset("fmcw").is_err());
    }
}
